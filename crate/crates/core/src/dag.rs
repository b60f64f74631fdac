//! Ordered DAGs with a single sink, their first-child spanning tree, and
//! prefix extraction over them.
//!
//! A node's spanning-tree parent is the target of its first out-arc, so the
//! tree is rooted at the sink. Level-ancestor queries on it let an
//! extraction jump straight to the bottom of a first-child chain. Arcs into
//! the sink carry a symbol; every arc carries an integer weight, and each
//! tree node stores the weight of its chain down to the sink, so the same
//! traversal reports path weights as well as symbols.

use crate::la::LevelAncestor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDag {
    /// Out-arcs of node `v` are `offsets[v]..offsets[v + 1]`.
    pub(crate) offsets: Vec<u32>,
    pub(crate) targets: Vec<u32>,
    pub(crate) labels: Vec<u8>,
    pub(crate) weights: Vec<i64>,
    pub(crate) sink: u32,
}

/// One out-arc given to [`OrderedDag::from_lists`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DagArc {
    pub target: u32,
    pub label: u8,
    pub weight: i64,
}

impl OrderedDag {
    /// `lists[v]` are the out-arcs of node `v`; the sink's list must be empty.
    pub fn from_lists(lists: &[Vec<DagArc>], sink: u32) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::new();
        let mut labels = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in lists {
            for arc in list {
                targets.push(arc.target);
                labels.push(arc.label);
                weights.push(arc.weight);
            }
            offsets.push(targets.len() as u32);
        }
        OrderedDag {
            offsets,
            targets,
            labels,
            weights,
            sink,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn sink(&self) -> u32 {
        self.sink
    }

    pub fn out_degree(&self, v: u32) -> u32 {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// `i`-th (0-based) out-arc of `v`.
    pub fn arc(&self, v: u32, i: u32) -> DagArc {
        let e = (self.offsets[v as usize] + i) as usize;
        DagArc {
            target: self.targets[e],
            label: self.labels[e],
            weight: self.weights[e],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagIndex {
    pub(crate) dag: OrderedDag,
    pub(crate) la: LevelAncestor,
    /// Weight of the first-child chain from each node down to the sink.
    pub(crate) chain_weight: Vec<i64>,
    /// Arcs on a longest path from each node to the sink.
    pub(crate) height: Vec<u32>,
}

impl DagIndex {
    /// The graph must be acyclic with `sink` as its only node without
    /// out-arcs.
    pub fn new(dag: OrderedDag) -> Self {
        let n = dag.node_count();
        let sink = dag.sink;
        let parent: Vec<u32> = (0..n as u32)
            .map(|v| {
                if v == sink {
                    sink
                } else {
                    dag.arc(v, 0).target
                }
            })
            .collect();
        let la = LevelAncestor::new(&parent, sink);

        // chain weights need parents first: process by tree depth
        let mut by_depth: Vec<u32> = (0..n as u32).collect();
        by_depth.sort_by_key(|&v| la.depth(v));
        let mut chain_weight = vec![0i64; n];
        for &v in &by_depth {
            if v != sink {
                chain_weight[v as usize] = dag.arc(v, 0).weight + chain_weight[parent[v as usize] as usize];
            }
        }

        let mut height = vec![0u32; n];
        let mut order: Vec<u32> = Vec::with_capacity(n);
        // reverse topological order by DFS post-order
        let mut state = vec![0u8; n];
        for s in 0..n as u32 {
            if state[s as usize] != 0 {
                continue;
            }
            let mut stack = vec![(s, 0u32)];
            state[s as usize] = 1;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < dag.out_degree(v) {
                    let t = dag.arc(v, *i).target;
                    *i += 1;
                    if state[t as usize] == 0 {
                        state[t as usize] = 1;
                        stack.push((t, 0));
                    }
                } else {
                    state[v as usize] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }
        for &v in &order {
            let h = (0..dag.out_degree(v))
                .map(|i| height[dag.arc(v, i).target as usize] + 1)
                .max()
                .unwrap_or(0);
            height[v as usize] = h;
        }

        DagIndex {
            dag,
            la,
            chain_weight,
            height,
        }
    }

    pub fn dag(&self) -> &OrderedDag {
        &self.dag
    }

    /// Depth of `v` in the first-child spanning tree.
    pub fn tree_depth(&self, v: u32) -> u32 {
        self.la.depth(v)
    }

    pub fn level_ancestor(&self, v: u32, d: u32) -> Option<u32> {
        self.la.query(v, d)
    }

    /// Arcs on a longest path from `v` to the sink.
    pub fn height(&self, v: u32) -> u32 {
        self.height[v as usize]
    }

    /// Stateful left-to-right traversal of the paths below `start`.
    pub fn cursor(&self, start: u32) -> PathCursor<'_> {
        PathCursor::new(self, start)
    }

    /// Reads up to `k` sink-arc symbols below `start` in preorder, stopping
    /// early when `emit` returns `false`. This is the plain stack procedure
    /// with level-ancestor jumps and no preventive popping.
    pub fn scan(
        &self,
        start: u32,
        k: usize,
        mut emit: impl FnMut(u8) -> bool,
        stats: &mut ScanStats,
    ) -> usize {
        if k == 0 || start == self.dag.sink {
            return 0;
        }
        let dag = &self.dag;
        let mut stack = vec![Frame {
            node: start,
            last_child: 0,
            depth: 0,
            acc: 0,
        }];
        stats.record_push(1);
        let mut extracted = 0;
        loop {
            let top = stack.len() - 1;
            let t = stack[top];
            if t.last_child < dag.out_degree(t.node) {
                stack[top].last_child += 1;
                let arc = dag.arc(t.node, t.last_child);
                stats.ops += 1;
                if arc.target == dag.sink {
                    if !emit(arc.label) {
                        return extracted;
                    }
                    stats.ops += 1;
                    extracted += 1;
                    if extracted == k {
                        return k;
                    }
                } else if t.last_child == 0 {
                    stack[top].depth = 1;
                    let y = self.la.query(t.node, 1).expect("depth >= 1");
                    stats.ops += 1;
                    stack.push(Frame {
                        node: y,
                        last_child: 0,
                        depth: 1,
                        acc: 0,
                    });
                    stats.record_push(stack.len());
                } else {
                    stack.push(Frame {
                        node: arc.target,
                        last_child: 0,
                        depth: 0,
                        acc: 0,
                    });
                    stats.record_push(stack.len());
                }
            } else {
                stack.pop();
                stats.ops += 1;
                let Some(t) = stack.last_mut() else {
                    return extracted;
                };
                let node_depth = self.la.depth(t.node);
                if t.depth < node_depth {
                    t.depth += 1;
                }
                if t.depth < node_depth {
                    let (node, d) = (t.node, t.depth);
                    let y = self.la.query(node, d).expect("in range");
                    stats.ops += 1;
                    stack.push(Frame {
                        node: y,
                        last_child: 1,
                        depth: d,
                        acc: 0,
                    });
                    stats.record_push(stack.len());
                }
            }
        }
    }

    /// Weights of the first `k` paths from `start` to the sink, in preorder.
    pub fn path_weights(&self, start: u32, k: usize) -> Vec<i64> {
        let mut cursor = self.cursor(start);
        let mut out = Vec::with_capacity(k.min(1 << 16));
        while out.len() < k {
            match cursor.next_path() {
                Some((_, w)) => out.push(w),
                None => break,
            }
        }
        out
    }
}

/// Work counters for one extraction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanStats {
    /// Stack pushes and pops, arc traversals, emitted symbols and
    /// level-ancestor queries.
    pub ops: u64,
    /// Largest stack size observed.
    pub peak: usize,
}

impl ScanStats {
    fn record_push(&mut self, len: usize) {
        self.ops += 1;
        self.peak = self.peak.max(len);
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    node: u32,
    last_child: u32,
    depth: u32,
    /// Weight of the path from the start node to `node`.
    acc: i64,
}

/// Constant-delay traversal: frames whose children are exhausted are popped
/// as soon as their last child is taken, so no call ever unwinds a chain of
/// finished frames.
#[derive(Debug, Clone)]
pub struct PathCursor<'a> {
    idx: &'a DagIndex,
    stack: Vec<Frame>,
    stats: ScanStats,
}

impl<'a> PathCursor<'a> {
    fn new(idx: &'a DagIndex, start: u32) -> Self {
        let mut cursor = PathCursor {
            idx,
            stack: Vec::new(),
            stats: ScanStats::default(),
        };
        if start != idx.dag.sink {
            cursor.push(Frame {
                node: start,
                last_child: 0,
                depth: 0,
                acc: 0,
            });
        }
        cursor
    }

    pub fn stats(&self) -> ScanStats {
        self.stats
    }

    pub fn stack_len(&self) -> usize {
        self.stack.len()
    }

    fn push(&mut self, f: Frame) {
        self.stack.push(f);
        self.stats.record_push(self.stack.len());
    }

    /// Pops the finished top frame and resumes the first-child chain of the
    /// frame below it, if one is pending.
    fn pop_and_advance(&mut self) {
        self.stack.pop();
        self.stats.ops += 1;
        let idx = self.idx;
        let Some(t) = self.stack.last_mut() else {
            return;
        };
        let node_depth = idx.la.depth(t.node);
        if t.depth < node_depth {
            t.depth += 1;
            if t.depth < node_depth {
                let (node, d, acc) = (t.node, t.depth, t.acc);
                let y = idx.la.query(node, d).expect("in range");
                self.stats.ops += 1;
                let acc = acc + idx.chain_weight[node as usize] - idx.chain_weight[y as usize];
                self.push(Frame {
                    node: y,
                    last_child: 1,
                    depth: d,
                    acc,
                });
            }
        }
    }

    /// Next path in preorder: the symbol on its sink arc and its weight.
    pub fn next_path(&mut self) -> Option<(u8, i64)> {
        let idx = self.idx;
        let dag = &idx.dag;
        loop {
            let top = self.stack.len().checked_sub(1)?;
            let t = self.stack[top];
            let degree = dag.out_degree(t.node);
            if t.last_child >= degree {
                self.pop_and_advance();
                continue;
            }
            let arc = dag.arc(t.node, t.last_child);
            self.stack[top].last_child += 1;
            self.stats.ops += 1;
            let finished = t.last_child + 1 == degree;
            let acc = t.acc + arc.weight;
            if arc.target == dag.sink {
                if finished {
                    self.pop_and_advance();
                }
                self.stats.ops += 1;
                return Some((arc.label, acc));
            } else if t.last_child == 0 {
                self.stack[top].depth = 1;
                let y = idx.la.query(t.node, 1).expect("depth >= 1");
                self.stats.ops += 1;
                let acc = t.acc + idx.chain_weight[t.node as usize] - idx.chain_weight[y as usize];
                self.push(Frame {
                    node: y,
                    last_child: 0,
                    depth: 1,
                    acc,
                });
            } else {
                if finished {
                    self.stack.pop();
                    self.stats.ops += 1;
                }
                self.push(Frame {
                    node: arc.target,
                    last_child: 0,
                    depth: 0,
                    acc,
                });
            }
        }
    }
}

impl Iterator for PathCursor<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        self.next_path().map(|(c, _)| c)
    }
}
