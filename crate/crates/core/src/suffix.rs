//! Suffix array, LCP array, BWT and a suffix tree with suffix links.
//!
//! These are construction-time structures only: the CDAWG is derived from
//! them and they are dropped afterwards. Ranks and suffix starts are 0-based
//! throughout this module.

use crate::text::Text;

/// Inclusive range of suffix-array ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Interval {
    pub sp: u32,
    pub ep: u32,
}

impl Interval {
    pub fn new(sp: u32, ep: u32) -> Self {
        Interval { sp, ep }
    }

    pub fn len(&self) -> usize {
        (self.ep - self.sp + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.sp <= other.sp && other.ep <= self.ep
    }
}

#[derive(Debug, Clone)]
pub struct SuffixArrayBundle {
    /// `sa[r]` is the start offset of the suffix of rank `r`.
    pub sa: Vec<u32>,
    /// Inverse of `sa`.
    pub isa: Vec<u32>,
    /// `lcp[r]` = common prefix of suffixes at ranks `r-1` and `r`; `lcp[0] = 0`.
    pub lcp: Vec<u32>,
    /// `bwt[r] = T[sa[r]-1]`, and the sentinel where `sa[r] = 0`. The sentinel
    /// occurs nowhere else in the BWT, so it doubles as the virtual left
    /// context of the text prefix.
    pub bwt: Vec<u8>,
}

/// Prefix doubling with two-pass counting sort, `O(n log n)`.
pub fn build_suffix_array(t: &Text) -> SuffixArrayBundle {
    let text = t.as_bytes();
    let n = text.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = text.iter().map(|&c| c as u32).collect();
    let mut tmp = vec![0u32; n];
    let mut buckets = vec![0usize; n.max(256) + 1];

    // initial order by first symbol
    sa.sort_by_key(|&i| text[i as usize]);
    let mut k = 1usize;
    loop {
        // second key: rank[i + k], missing = smallest
        let key2 = |i: u32| -> usize {
            let j = i as usize + k;
            if j < n {
                rank[j] as usize + 1
            } else {
                0
            }
        };
        let max_rank = rank.iter().copied().max().unwrap_or(0) as usize + 2;
        // sort by key2
        buckets[..=max_rank].iter_mut().for_each(|b| *b = 0);
        for i in 0..n as u32 {
            buckets[key2(i)] += 1;
        }
        let mut sum = 0;
        for b in buckets[..=max_rank].iter_mut() {
            let c = *b;
            *b = sum;
            sum += c;
        }
        for i in 0..n as u32 {
            let b = &mut buckets[key2(i)];
            tmp[*b] = i;
            *b += 1;
        }
        // stable sort by rank[i]
        buckets[..=max_rank].iter_mut().for_each(|b| *b = 0);
        for &i in &tmp {
            buckets[rank[i as usize] as usize] += 1;
        }
        let mut sum = 0;
        for b in buckets[..=max_rank].iter_mut() {
            let c = *b;
            *b = sum;
            sum += c;
        }
        for &i in &tmp {
            let b = &mut buckets[rank[i as usize] as usize];
            sa[*b] = i;
            *b += 1;
        }
        // re-rank
        let mut new_rank = vec![0u32; n];
        let mut r = 0u32;
        for idx in 0..n {
            if idx > 0 {
                let (a, b) = (sa[idx - 1], sa[idx]);
                if rank[a as usize] != rank[b as usize] || key2(a) != key2(b) {
                    r += 1;
                }
            }
            new_rank[sa[idx] as usize] = r;
        }
        rank = new_rank;
        if r as usize == n - 1 {
            break;
        }
        k *= 2;
    }

    let mut isa = vec![0u32; n];
    for (r, &s) in sa.iter().enumerate() {
        isa[s as usize] = r as u32;
    }

    // Kasai
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = isa[i] as usize;
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }

    let bwt = sa
        .iter()
        .map(|&s| if s == 0 { text[n - 1] } else { text[s as usize - 1] })
        .collect();

    SuffixArrayBundle { sa, isa, lcp, bwt }
}

/// Child of a suffix-tree node: another internal node or the leaf of a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StChild {
    Internal(u32),
    Leaf(u32),
}

/// 256-bit set of left-context symbols.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SymbolSet([u64; 4]);

impl SymbolSet {
    pub fn insert(&mut self, c: u8) {
        self.0[(c >> 6) as usize] |= 1 << (c & 63);
    }

    pub fn remove(&mut self, c: u8) {
        self.0[(c >> 6) as usize] &= !(1 << (c & 63));
    }

    pub fn contains(&self, c: u8) -> bool {
        self.0[(c >> 6) as usize] >> (c & 63) & 1 == 1
    }

    pub fn union(&mut self, other: &SymbolSet) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a |= b;
        }
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in increasing order.
    pub fn to_vec(&self) -> Vec<u8> {
        (0..=255u8).filter(|&c| self.contains(c)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct StNode {
    pub depth: u32,
    pub interval: Interval,
    pub parent: u32,
    /// Children in lexicographic order of their edge labels.
    pub children: Vec<StChild>,
    /// Target of the suffix link; the root links to itself.
    pub suffix_link: u32,
    /// Distinct BWT symbols inside `interval`; the sentinel stands for the
    /// virtual left context of the text prefix.
    pub bwt_symbols: SymbolSet,
}

/// Suffix tree over internal nodes; leaves are identified by rank.
#[derive(Debug, Clone)]
pub struct SuffixTree {
    pub nodes: Vec<StNode>,
    pub root: u32,
    /// Internal parent of each leaf, by rank.
    pub leaf_parent: Vec<u32>,
    n: usize,
}

struct OpenInterval {
    depth: u32,
    sp: u32,
    children: Vec<StChild>,
}

pub fn build_suffix_tree(b: &SuffixArrayBundle) -> SuffixTree {
    let n = b.sa.len();
    let mut nodes: Vec<StNode> = Vec::with_capacity(n);
    let mut stack = vec![OpenInterval {
        depth: 0,
        sp: 0,
        children: Vec::new(),
    }];

    let close = |open: OpenInterval, ep: u32, nodes: &mut Vec<StNode>| -> u32 {
        let id = nodes.len() as u32;
        let mut bwt_symbols = SymbolSet::default();
        for child in &open.children {
            match *child {
                StChild::Leaf(r) => bwt_symbols.insert(b.bwt[r as usize]),
                StChild::Internal(c) => {
                    let s = nodes[c as usize].bwt_symbols;
                    bwt_symbols.union(&s);
                }
            }
        }
        nodes.push(StNode {
            depth: open.depth,
            interval: Interval::new(open.sp, ep),
            parent: u32::MAX,
            children: open.children,
            suffix_link: u32::MAX,
            bwt_symbols,
        });
        id
    };

    for r in 0..n {
        let mut pending = StChild::Leaf(r as u32);
        let mut pending_sp = r as u32;
        let next = if r + 1 < n { b.lcp[r + 1] } else { 0 };
        while stack.last().is_some_and(|top| top.depth > next) {
            let mut top = stack.pop().unwrap();
            top.children.push(pending);
            pending_sp = top.sp;
            pending = StChild::Internal(close(top, r as u32, &mut nodes));
        }
        match stack.last_mut() {
            Some(top) if top.depth == next => top.children.push(pending),
            _ => stack.push(OpenInterval {
                depth: next,
                sp: pending_sp,
                children: vec![pending],
            }),
        }
    }
    let root_open = stack.pop().expect("root interval");
    debug_assert!(stack.is_empty());
    let root = close(root_open, n as u32 - 1, &mut nodes);

    let mut leaf_parent = vec![u32::MAX; n];
    for id in 0..nodes.len() {
        for ci in 0..nodes[id].children.len() {
            match nodes[id].children[ci] {
                StChild::Internal(c) => nodes[c as usize].parent = id as u32,
                StChild::Leaf(r) => leaf_parent[r as usize] = id as u32,
            }
        }
    }
    nodes[root as usize].parent = root;

    let mut st = SuffixTree {
        nodes,
        root,
        leaf_parent,
        n,
    };

    // suffix link of v = LCA of the leaves of its extreme suffixes shifted by one
    let mut queries = Vec::new();
    let mut owners = Vec::new();
    for (id, node) in st.nodes.iter().enumerate() {
        if node.depth == 0 {
            continue;
        }
        let a = b.isa[b.sa[node.interval.sp as usize] as usize + 1];
        let c = b.isa[b.sa[node.interval.ep as usize] as usize + 1];
        queries.push((a, c));
        owners.push(id);
    }
    let answers = st.lca_of_leaves(&queries);
    st.nodes[root as usize].suffix_link = root;
    for (id, target) in owners.into_iter().zip(answers) {
        debug_assert_eq!(st.nodes[target as usize].depth + 1, st.nodes[id].depth);
        st.nodes[id].suffix_link = target;
    }
    st
}

impl SuffixTree {
    pub fn leaf_count(&self) -> usize {
        self.n
    }

    /// Rank interval of the node's label.
    pub fn node_interval(&self, node: u32) -> Interval {
        self.nodes[node as usize].interval
    }

    /// Whether the node's label has more than one left context.
    pub fn is_left_maximal(&self, node: u32) -> bool {
        self.nodes[node as usize].bwt_symbols.len() > 1
    }

    /// Offline lowest common ancestors of leaf pairs, Tarjan's method.
    pub fn lca_of_leaves(&self, queries: &[(u32, u32)]) -> Vec<u32> {
        let internal = self.nodes.len();
        let total = internal + self.n;
        // per-leaf adjacency of queries
        let mut head = vec![u32::MAX; self.n];
        let mut next = vec![u32::MAX; queries.len() * 2];
        let mut other = vec![0u32; queries.len() * 2];
        for (qi, &(a, b)) in queries.iter().enumerate() {
            for (slot, (x, y)) in [(2 * qi, (a, b)), (2 * qi + 1, (b, a))] {
                other[slot] = y;
                next[slot] = head[x as usize];
                head[x as usize] = slot as u32;
            }
        }
        let mut uf: Vec<u32> = (0..total as u32).collect();
        let mut anchor: Vec<u32> = (0..total as u32).collect();
        let mut visited = vec![false; self.n];
        let mut answers = vec![u32::MAX; queries.len()];

        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            let mut root = x;
            while uf[root as usize] != root {
                root = uf[root as usize];
            }
            while uf[x as usize] != root {
                let nx = uf[x as usize];
                uf[x as usize] = root;
                x = nx;
            }
            root
        }

        // iterative DFS: (node, next child index)
        let mut stack = vec![(self.root, 0usize)];
        while let Some(&mut (v, ref mut ci)) = stack.last_mut() {
            let node = &self.nodes[v as usize];
            if *ci < node.children.len() {
                let child = node.children[*ci];
                *ci += 1;
                match child {
                    StChild::Internal(c) => stack.push((c, 0)),
                    StChild::Leaf(r) => {
                        let leaf_id = (internal as u32) + r;
                        visited[r as usize] = true;
                        let mut slot = head[r as usize];
                        while slot != u32::MAX {
                            let o = other[slot as usize];
                            if visited[o as usize] {
                                let rep = find(&mut uf, internal as u32 + o);
                                answers[slot as usize / 2] = anchor[rep as usize];
                            }
                            slot = next[slot as usize];
                        }
                        let ru = find(&mut uf, leaf_id);
                        let rv = find(&mut uf, v);
                        uf[ru as usize] = rv;
                        anchor[rv as usize] = v;
                    }
                }
            } else {
                stack.pop();
                if let Some(&(parent, _)) = stack.last() {
                    let ru = find(&mut uf, v);
                    let rp = find(&mut uf, parent);
                    uf[ru as usize] = rp;
                    anchor[rp as usize] = parent;
                }
            }
        }
        // a leaf paired with itself
        for (qi, &(a, b)) in queries.iter().enumerate() {
            if a == b {
                answers[qi] = self.leaf_parent[a as usize];
            }
        }
        answers
    }
}
