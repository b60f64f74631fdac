//! The CDAWG and its per-node and per-arc annotations.
//!
//! Built by minimizing the suffix tree: every suffix-tree node is mapped to
//! the left-maximal node at the end of its chain of explicit Weiner links
//! (its class representative), and all leaves collapse into one sink.
//! Nodes are numbered by label length, so the source is node 0, the sink is
//! the last node and every arc goes from a smaller to a larger id.

use std::collections::HashMap;

use thiserror::Error;

use crate::suffix::{Interval, StChild, SuffixArrayBundle, SuffixTree};
use crate::text::Text;

pub type NodeId = u32;
pub type ArcId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdawgNode {
    /// `|ℓ(v)|`; the sink stores `n`.
    pub length: u32,
    /// Occurrences of `ℓ(v)`; 1 for the sink.
    pub freq: u32,
    /// Longest proper suffix of `ℓ(v)` that is a maximal repeat. `None` only
    /// for the source.
    pub suffix_pointer: Option<NodeId>,
    /// Rank interval of `ℓ(v)`; `None` for the sink.
    pub interval: Option<Interval>,
    /// Number of right-maximal strings merged into this node (`n` for the
    /// sink, whose class is every suffix of the text).
    pub class_size: u32,
    /// Length of the grammar expansion of this node:
    /// `length - length(suffix_pointer)`. Zero for the source.
    pub pi_length: u32,
    /// In-arcs ordered by their offset inside `ℓ(v)`.
    pub in_arcs: Vec<ArcId>,
    /// Sorted characters `a` such that `a·ℓ(v)` occurs in the text.
    pub left_ext: Vec<u8>,
    /// Out-arcs sorted by first character.
    pub out_arcs: Vec<ArcId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdawgArc {
    pub from: NodeId,
    pub to: NodeId,
    /// First character of the arc label.
    pub char: u8,
    /// Length of the arc label (the right extension).
    pub right: u32,
    /// Sink arcs only: 1-based start of `ℓ(from)·char` in the text.
    pub pos: Option<u32>,
    /// Start (0-based) inside `ℓ(to)` of the class member this arc enters;
    /// equals the left extension for inner arcs and `pos - 1` for sink arcs.
    pub offset: u32,
    /// Rank interval of the arc label as a string.
    pub label_interval: Interval,
    /// Rank interval of `ℓ(from)·label`.
    pub extension_interval: Interval,
    /// 1-based rank of this arc among the in-arcs of `to`.
    pub order: u32,
    /// Character preceding `ℓ(from)·char` inside `ℓ(to)`, if any.
    pub previous_char: Option<u8>,
    /// First node on the suffix-pointer chain from `to` whose label is at
    /// least as long as the arc label while its own suffix pointer's is not.
    pub anchor: NodeId,
    /// Slot (in-arc index) of `anchor` containing the label start.
    pub anchor_slot: u32,
    /// Offset of the label start inside that slot.
    pub anchor_offset: u32,
}

impl CdawgArc {
    /// Index of this arc's expansion slot among the in-arcs of `to`.
    pub fn slot(&self) -> u32 {
        self.order - 1
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CdawgError {
    #[error("arc {0} enters the sink; its left extension is undefined")]
    SinkArc(ArcId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub n: usize,
    pub sigma: u8,
    pub node_count: usize,
    pub e: usize,
    pub h: usize,
    pub maximal_repeat_count: usize,
    pub sink_in_degree: usize,
}

#[derive(Debug, Clone)]
pub struct Cdawg {
    pub n: u32,
    pub sigma: u8,
    pub nodes: Vec<CdawgNode>,
    pub arcs: Vec<CdawgArc>,
    pub source: NodeId,
    pub sink: NodeId,
    /// Arcs on a longest source-to-sink path.
    pub h: u32,
    children: HashMap<(NodeId, u8), ArcId>,
}

impl PartialEq for Cdawg {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.sigma == other.sigma
            && self.nodes == other.nodes
            && self.arcs == other.arcs
            && self.source == other.source
            && self.sink == other.sink
            && self.h == other.h
    }
}

impl Eq for Cdawg {}

pub fn build_cdawg(t: &Text, st: &SuffixTree, b: &SuffixArrayBundle) -> Cdawg {
    let text = t.as_bytes();
    let n = text.len();
    let count = st.nodes.len();
    let left_max: Vec<bool> = (0..count as u32).map(|v| st.is_left_maximal(v)).collect();

    // explicit Weiner link into each non-left-maximal node
    let mut weiner = vec![u32::MAX; count];
    for (v, node) in st.nodes.iter().enumerate() {
        if v as u32 != st.root && !left_max[node.suffix_link as usize] {
            weiner[node.suffix_link as usize] = v as u32;
        }
    }
    let mut rep = vec![u32::MAX; count];
    let mut chain = Vec::new();
    for v in 0..count {
        let mut u = v;
        while rep[u] == u32::MAX && !left_max[u] {
            chain.push(u);
            u = weiner[u] as usize;
        }
        let r = if rep[u] != u32::MAX { rep[u] } else { u as u32 };
        rep[u] = r;
        for w in chain.drain(..) {
            rep[w] = r;
        }
    }

    // representatives ordered by (depth, sp); source first, sink last
    let mut reps: Vec<u32> = (0..count as u32).filter(|&v| left_max[v as usize]).collect();
    reps.sort_by_key(|&v| {
        let node = &st.nodes[v as usize];
        (node.depth, node.interval.sp)
    });
    debug_assert_eq!(reps[0], st.root);
    let mut cid = vec![u32::MAX; count];
    for (id, &v) in reps.iter().enumerate() {
        cid[v as usize] = id as u32;
    }
    let sink = reps.len() as u32;
    let source = 0u32;

    let mut class_size = vec![0u32; reps.len()];
    for v in 0..count {
        class_size[cid[rep[v] as usize] as usize] += 1;
    }

    let mut nodes: Vec<CdawgNode> = reps
        .iter()
        .enumerate()
        .map(|(id, &v)| {
            let node = &st.nodes[v as usize];
            let suffix_pointer = (v != st.root).then(|| {
                let mut u = node.suffix_link;
                while !left_max[u as usize] {
                    u = st.nodes[u as usize].suffix_link;
                }
                cid[u as usize]
            });
            let mut symbols = node.bwt_symbols;
            if v != st.root {
                // the sentinel only stands for the virtual left context here
                symbols.remove(0);
            }
            CdawgNode {
                length: node.depth,
                freq: node.interval.len() as u32,
                suffix_pointer,
                interval: Some(node.interval),
                class_size: class_size[id],
                pi_length: 0,
                in_arcs: Vec::new(),
                left_ext: symbols.to_vec(),
                out_arcs: Vec::new(),
            }
        })
        .collect();
    nodes.push(CdawgNode {
        length: n as u32,
        freq: 1,
        suffix_pointer: Some(source),
        interval: None,
        class_size: n as u32,
        pi_length: n as u32,
        in_arcs: Vec::new(),
        left_ext: Vec::new(),
        out_arcs: Vec::new(),
    });
    for id in 0..reps.len() {
        let sp_len = nodes[id]
            .suffix_pointer
            .map_or(0, |s| nodes[s as usize].length);
        nodes[id].pi_length = nodes[id].length - sp_len;
    }

    // arcs: out-edges of each representative
    let mut arcs = Vec::new();
    let mut label_queries = Vec::new();
    let mut label_query_arcs = Vec::new();
    for (id, &v) in reps.iter().enumerate() {
        let node = &st.nodes[v as usize];
        let dv = node.depth as usize;
        for &child in &node.children {
            let arc_id = arcs.len() as u32;
            let arc = match child {
                StChild::Leaf(r) => {
                    let s = b.sa[r as usize] as usize;
                    let right = (n - s - dv) as u32;
                    let label_rank = b.isa[s + dv];
                    CdawgArc {
                        from: id as u32,
                        to: sink,
                        char: text[s + dv],
                        right,
                        pos: Some(s as u32 + 1),
                        offset: s as u32,
                        label_interval: Interval::new(label_rank, label_rank),
                        extension_interval: Interval::new(r, r),
                        order: 0,
                        previous_char: (s > 0).then(|| b.bwt[r as usize]),
                        anchor: 0,
                        anchor_slot: 0,
                        anchor_offset: 0,
                    }
                }
                StChild::Internal(c) => {
                    let cn = &st.nodes[c as usize];
                    let s = b.sa[cn.interval.sp as usize] as usize;
                    let target_rep = rep[c as usize];
                    let offset = st.nodes[target_rep as usize].depth - cn.depth;
                    let first = b.isa[s + dv];
                    let last = b.isa[b.sa[cn.interval.ep as usize] as usize + dv];
                    label_queries.push((first, last));
                    label_query_arcs.push(arc_id);
                    CdawgArc {
                        from: id as u32,
                        to: cid[target_rep as usize],
                        char: text[s + dv],
                        right: cn.depth - node.depth,
                        pos: None,
                        offset,
                        label_interval: Interval::default(),
                        extension_interval: cn.interval,
                        order: 0,
                        previous_char: (offset > 0).then(|| b.bwt[cn.interval.sp as usize]),
                        anchor: 0,
                        anchor_slot: 0,
                        anchor_offset: 0,
                    }
                }
            };
            nodes[id].out_arcs.push(arc_id);
            nodes[arc.to as usize].in_arcs.push(arc_id);
            arcs.push(arc);
        }
    }
    for (arc_id, label_node) in label_query_arcs
        .into_iter()
        .zip(st.lca_of_leaves(&label_queries))
    {
        arcs[arc_id as usize].label_interval = st.node_interval(label_node);
    }

    for node in nodes.iter_mut() {
        node.in_arcs.sort_by_key(|&a| arcs[a as usize].offset);
        for (i, &a) in node.in_arcs.iter().enumerate() {
            arcs[a as usize].order = i as u32 + 1;
        }
    }

    // jump pointers for arc-label extraction
    for arc in arcs.iter_mut() {
        let mut anchor = arc.to;
        while let Some(s) = nodes[anchor as usize].suffix_pointer {
            if nodes[s as usize].length < arc.right {
                break;
            }
            anchor = s;
        }
        arc.anchor = anchor;
    }
    let offsets: Vec<u32> = arcs.iter().map(|a| a.offset).collect();
    for i in 0..arcs.len() {
        let arc = &arcs[i];
        let start = nodes[arc.anchor as usize].length - arc.right;
        let in_arcs = &nodes[arc.anchor as usize].in_arcs;
        let slot = in_arcs.partition_point(|&a| offsets[a as usize] <= start) - 1;
        let slot_start = offsets[in_arcs[slot] as usize];
        arcs[i].anchor_slot = slot as u32;
        arcs[i].anchor_offset = start - slot_start;
    }

    // longest path; ids are a topological order
    let mut longest = vec![0u32; nodes.len()];
    for (id, node) in nodes.iter().enumerate() {
        for &a in &node.out_arcs {
            let to = arcs[a as usize].to as usize;
            longest[to] = longest[to].max(longest[id] + 1);
        }
    }

    let mut cdawg = Cdawg {
        n: n as u32,
        sigma: t.sigma(),
        h: longest[sink as usize],
        nodes,
        arcs,
        source,
        sink,
        children: HashMap::new(),
    };
    cdawg.rebuild_child_table();
    cdawg
}

impl Cdawg {
    pub fn build(t: &Text) -> Cdawg {
        let b = crate::suffix::build_suffix_array(t);
        let st = crate::suffix::build_suffix_tree(&b);
        build_cdawg(t, &st, &b)
    }

    /// Assembles a CDAWG from stored tables.
    pub(crate) fn from_parts(
        n: u32,
        sigma: u8,
        nodes: Vec<CdawgNode>,
        arcs: Vec<CdawgArc>,
        source: NodeId,
        sink: NodeId,
        h: u32,
    ) -> Cdawg {
        let mut c = Cdawg {
            n,
            sigma,
            nodes,
            arcs,
            source,
            sink,
            h,
            children: HashMap::new(),
        };
        c.rebuild_child_table();
        c
    }

    fn rebuild_child_table(&mut self) {
        self.children = self
            .arcs
            .iter()
            .enumerate()
            .map(|(id, a)| ((a.from, a.char), id as ArcId))
            .collect();
    }

    pub fn node(&self, v: NodeId) -> &CdawgNode {
        &self.nodes[v as usize]
    }

    pub fn arc(&self, a: ArcId) -> &CdawgArc {
        &self.arcs[a as usize]
    }

    /// Out-arc of `v` whose label starts with `c`, by hashing.
    pub fn child(&self, v: NodeId, c: u8) -> Option<ArcId> {
        self.children.get(&(v, c)).copied()
    }

    /// Same as [`Cdawg::child`], by binary search over the sorted out-arcs.
    pub fn child_sorted(&self, v: NodeId, c: u8) -> Option<ArcId> {
        let out = &self.nodes[v as usize].out_arcs;
        out.binary_search_by_key(&c, |&a| self.arcs[a as usize].char)
            .ok()
            .map(|i| out[i])
    }

    /// Left extension implied by an inner arc.
    pub fn arc_left(&self, a: ArcId) -> Result<u32, CdawgError> {
        let arc = &self.arcs[a as usize];
        if arc.to == self.sink {
            return Err(CdawgError::SinkArc(a));
        }
        Ok(self.nodes[arc.to as usize].length - self.nodes[arc.from as usize].length - arc.right)
    }

    /// Length of the expansion slot an in-arc occupies inside its target.
    pub fn slot_len(&self, a: ArcId) -> u32 {
        self.nodes[self.arcs[a as usize].from as usize].class_size
    }

    pub fn stats(&self) -> Stats {
        Stats {
            n: self.n as usize,
            sigma: self.sigma,
            node_count: self.nodes.len(),
            e: self.arcs.len(),
            h: self.h as usize,
            maximal_repeat_count: self.nodes.len() - 1,
            sink_in_degree: self.nodes[self.sink as usize].in_arcs.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Cdawg {
        Cdawg::build(&Text::new(s.as_bytes()).unwrap())
    }

    fn by_length(c: &Cdawg, len: u32) -> NodeId {
        (0..c.nodes.len() as u32)
            .find(|&v| v != c.sink && c.node(v).length == len)
            .unwrap()
    }

    #[test]
    fn banana_shape() {
        let c = build("banana");
        let s = c.stats();
        assert_eq!((s.node_count, s.e, s.h), (4, 8, 3));
        assert_eq!(s.maximal_repeat_count, 3);
        assert_eq!(s.sink_in_degree, 5);

        let a = by_length(&c, 1);
        let ana = by_length(&c, 3);
        let node = c.node(ana);
        assert_eq!((node.length, node.freq, node.class_size, node.pi_length), (3, 2, 2, 2));
        assert_eq!(node.suffix_pointer, Some(a));
        assert_eq!(c.node(c.source).left_ext, vec![0, b'a', b'b', b'n']);
        assert_eq!(c.node(a).left_ext, vec![b'b', b'n']);
        assert_eq!(c.node(ana).left_ext, vec![b'b', b'n']);
    }

    #[test]
    fn banana_arcs() {
        let c = build("banana");
        let a = by_length(&c, 1);
        let ana = by_length(&c, 3);

        let sink_n = c.child(ana, b'n').unwrap();
        assert_eq!(c.arc(sink_n).to, c.sink);
        assert_eq!(c.arc(sink_n).pos, Some(2));
        let sink_hash = c.child(a, 0).unwrap();
        assert_eq!(c.arc(sink_hash).pos, Some(6));

        let src_ana = c.child(c.source, b'n').unwrap();
        assert_eq!(c.arc(src_ana).to, ana);
        assert_eq!(c.arc(src_ana).right, 2);
        assert_eq!(c.arc_left(src_ana), Ok(1));
        let src_a = c.child(c.source, b'a').unwrap();
        assert_eq!(c.arc_left(src_a), Ok(0));
        let a_ana = c.child(a, b'n').unwrap();
        assert_eq!(c.arc_left(a_ana), Ok(0));
        assert_eq!(c.arc(a_ana).right, 2);
        assert_eq!(c.arc_left(sink_n), Err(CdawgError::SinkArc(sink_n)));

        for v in 0..c.nodes.len() as u32 {
            for ch in 0..=255u8 {
                assert_eq!(c.child(v, ch), c.child_sorted(v, ch));
            }
        }
    }

    #[test]
    fn trivial_text() {
        let c = build("ab");
        assert_eq!(c.nodes.len(), 2);
        let chars: Vec<u8> = c.node(c.source).out_arcs.iter().map(|&a| c.arc(a).char).collect();
        assert_eq!(chars, vec![0, b'a', b'b']);
        let rights: Vec<u32> = c.node(c.source).out_arcs.iter().map(|&a| c.arc(a).right).collect();
        assert_eq!(rights, vec![1, 3, 2]);
    }

    #[test]
    fn in_arc_partition() {
        for s in ["banana", "mississippi", "abaababaabaababaababa", "aaaa"] {
            let c = build(s);
            for (v, node) in c.nodes.iter().enumerate() {
                if v as u32 == c.source {
                    continue;
                }
                let mut expect = 0;
                for (i, &a) in node.in_arcs.iter().enumerate() {
                    assert_eq!(c.arc(a).offset, expect, "{s} node {v}");
                    assert_eq!(c.arc(a).order as usize, i + 1);
                    expect += c.slot_len(a);
                }
                assert_eq!(expect, node.pi_length, "{s} node {v}");
            }
        }
    }
}
