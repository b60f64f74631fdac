//! Constant-time level-ancestor queries: long-path decomposition extended
//! into ladders, plus power-of-two jump pointers.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAncestor {
    pub(crate) depth: Vec<u32>,
    /// `jump[v * levels + i]` is the `2^i`-th ancestor of `v` (saturating at the root).
    pub(crate) jump: Vec<u32>,
    pub(crate) levels: u32,
    pub(crate) ladder_of: Vec<u32>,
    /// Ladder `l` occupies `ladders[ladder_start[l]..ladder_start[l + 1]]`, top first.
    pub(crate) ladder_start: Vec<u32>,
    pub(crate) ladder_top_depth: Vec<u32>,
    pub(crate) ladders: Vec<u32>,
}

impl LevelAncestor {
    /// `parent[root] == root`; every other node must reach `root`.
    pub fn new(parent: &[u32], root: u32) -> Self {
        let n = parent.len();
        let mut first_child = vec![u32::MAX; n];
        let mut next_sibling = vec![u32::MAX; n];
        for v in (0..n as u32).rev() {
            if v != root {
                let p = parent[v as usize] as usize;
                next_sibling[v as usize] = first_child[p];
                first_child[p] = v;
            }
        }
        // BFS order from the root
        let mut order = Vec::with_capacity(n);
        let mut depth = vec![0u32; n];
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut c = first_child[v as usize];
            while c != u32::MAX {
                depth[c as usize] = depth[v as usize] + 1;
                order.push(c);
                c = next_sibling[c as usize];
            }
        }
        assert_eq!(order.len(), n, "parent array is not a tree rooted at {root}");

        let mut height = vec![0u32; n];
        let mut heavy = vec![u32::MAX; n];
        for &v in order.iter().rev() {
            if v == root {
                continue;
            }
            let p = parent[v as usize] as usize;
            if heavy[p] == u32::MAX || height[v as usize] + 1 > height[p] {
                height[p] = height[v as usize] + 1;
                heavy[p] = v;
            }
        }

        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let levels = (32 - max_depth.leading_zeros()).max(1);
        let mut jump = vec![0u32; n * levels as usize];
        for &v in &order {
            let base = v as usize * levels as usize;
            jump[base] = parent[v as usize];
            for i in 1..levels as usize {
                let mid = jump[base + i - 1] as usize;
                jump[base + i] = jump[mid * levels as usize + i - 1];
            }
        }

        let mut ladder_of = vec![u32::MAX; n];
        let mut ladder_start = vec![0u32];
        let mut ladder_top_depth = Vec::new();
        let mut ladders = Vec::new();
        let mut path = Vec::new();
        for &v in &order {
            if v != root && heavy[parent[v as usize] as usize] == v {
                continue;
            }
            path.clear();
            let mut u = v;
            while u != u32::MAX {
                path.push(u);
                u = heavy[u as usize];
            }
            let id = ladder_top_depth.len() as u32;
            let extend = (path.len() as u32).min(depth[v as usize]);
            let mut above = Vec::with_capacity(extend as usize);
            let mut a = v;
            for _ in 0..extend {
                a = parent[a as usize];
                above.push(a);
            }
            ladders.extend(above.iter().rev());
            ladders.extend(&path);
            for &p in &path {
                ladder_of[p as usize] = id;
            }
            ladder_top_depth.push(depth[v as usize] - extend);
            ladder_start.push(ladders.len() as u32);
        }

        LevelAncestor {
            depth,
            jump,
            levels,
            ladder_of,
            ladder_start,
            ladder_top_depth,
            ladders,
        }
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    /// Ancestor of `v` at exactly `d` edges below the root.
    pub fn query(&self, v: u32, d: u32) -> Option<u32> {
        let dv = self.depth[v as usize];
        if d > dv {
            return None;
        }
        let up = dv - d;
        if up == 0 {
            return Some(v);
        }
        let i = 31 - up.leading_zeros();
        let u = self.jump[v as usize * self.levels as usize + i as usize];
        let l = self.ladder_of[u as usize] as usize;
        let idx = self.ladder_start[l] + (d - self.ladder_top_depth[l]);
        Some(self.ladders[idx as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(parent: &[u32], root: u32, mut v: u32, d: u32) -> Option<u32> {
        let mut path = vec![v];
        while v != root {
            v = parent[v as usize];
            path.push(v);
        }
        path.reverse();
        path.get(d as usize).copied()
    }

    #[test]
    fn chain_and_identity() {
        // 0 <- 1 <- 2 <- 3, root 0
        let parent = [0, 0, 1, 2];
        let la = LevelAncestor::new(&parent, 0);
        assert_eq!(la.query(3, 3), Some(3));
        assert_eq!(la.query(3, 0), Some(0));
        assert_eq!(la.query(3, 1), Some(1));
        assert_eq!(la.query(3, 4), None);
    }

    proptest! {
        #[test]
        fn matches_parent_walk(raw in proptest::collection::vec(0u32..1000, 1..300)) {
            // node i > 0 gets a parent among 0..i
            let mut parent = vec![0u32];
            for (i, r) in raw.iter().enumerate() {
                parent.push(r % (i as u32 + 1));
            }
            let la = LevelAncestor::new(&parent, 0);
            for v in 0..parent.len() as u32 {
                for d in 0..=la.depth(v) + 1 {
                    prop_assert_eq!(la.query(v, d), naive(&parent, 0, v, d));
                }
            }
        }
    }
}
