//! The straight-line program read off the reversed CDAWG.
//!
//! Every CDAWG node `v` other than the source yields a nonterminal `F_v`
//! whose right-hand side lists its in-neighbors in offset order; an in-arc
//! from the source contributes the arc's first character as a terminal. The
//! expansion of `F_v` is `ℓ(v)` minus its longest maximal-repeat suffix, and
//! `F_sink` expands to the whole text. Single-symbol rules are collapsed into
//! their only symbol. For right-to-left reading of node labels each node also
//! gets a rule `N_v → F_v · N_{suffix pointer}` expanding to all of `ℓ(v)`.

use crate::cdawg::{Cdawg, NodeId};
use crate::dag::{DagArc, DagIndex, OrderedDag, PathCursor, ScanStats};

/// A grammar symbol: a terminal or a rule id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    Term(u8),
    Rule(u32),
}

/// Uncollapsed right-hand-side entry, in CDAWG terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductionSym {
    Term(u8),
    Node(NodeId),
}

/// Right-hand side of `F_v` before unary rules are collapsed.
pub fn production(c: &Cdawg, v: NodeId) -> Vec<ProductionSym> {
    c.node(v)
        .in_arcs
        .iter()
        .map(|&a| {
            let arc = c.arc(a);
            if arc.from == c.source {
                ProductionSym::Term(arc.char)
            } else {
                ProductionSym::Node(arc.from)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    /// `F_v` per CDAWG node; `None` for the source.
    pub(crate) nonterminal: Vec<Option<Sym>>,
    /// `N_v` per CDAWG node, expanding to `ℓ(v)`; `None` for the source.
    pub(crate) label: Vec<Option<Sym>>,
    pub(crate) expansion_len: Vec<u64>,
    /// Rules with children in order; the sink is id `rule_count`.
    pub(crate) forward: DagIndex,
    /// Same rules with children reversed.
    pub(crate) backward: DagIndex,
}

impl Slp {
    pub fn build(c: &Cdawg) -> Slp {
        let mut bodies: Vec<Vec<Sym>> = Vec::new();
        let mut nonterminal = vec![None; c.nodes.len()];
        let mut label = vec![None; c.nodes.len()];
        let new_rule = |body: Vec<Sym>, bodies: &mut Vec<Vec<Sym>>| -> Sym {
            if body.len() == 1 {
                body[0]
            } else {
                bodies.push(body);
                Sym::Rule(bodies.len() as u32 - 1)
            }
        };
        // ids are topological: in-neighbors and suffix pointers come first
        for v in 0..c.nodes.len() as NodeId {
            if v == c.source {
                continue;
            }
            let body = production(c, v)
                .into_iter()
                .map(|p| match p {
                    ProductionSym::Term(ch) => Sym::Term(ch),
                    ProductionSym::Node(u) => nonterminal[u as usize].expect("built"),
                })
                .collect();
            let f = new_rule(body, &mut bodies);
            nonterminal[v as usize] = Some(f);
            let sp = c.node(v).suffix_pointer.expect("non-source");
            label[v as usize] = Some(match label[sp as usize] {
                None => f,
                Some(rest) => new_rule(vec![f, rest], &mut bodies),
            });
        }

        let rule_count = bodies.len() as u32;
        let sink = rule_count;
        let mut expansion_len = Vec::with_capacity(bodies.len());
        for body in &bodies {
            let len = body
                .iter()
                .map(|s| match *s {
                    Sym::Term(_) => 1,
                    Sym::Rule(r) => expansion_len[r as usize],
                })
                .sum();
            expansion_len.push(len);
        }
        let to_arc = |s: &Sym| match *s {
            Sym::Term(ch) => DagArc {
                target: sink,
                label: ch,
                weight: 0,
            },
            Sym::Rule(r) => DagArc {
                target: r,
                label: 0,
                weight: 0,
            },
        };
        let mut lists: Vec<Vec<DagArc>> = bodies.iter().map(|b| b.iter().map(to_arc).collect()).collect();
        lists.push(Vec::new());
        let forward = DagIndex::new(OrderedDag::from_lists(&lists, sink));
        for l in lists.iter_mut() {
            l.reverse();
        }
        let backward = DagIndex::new(OrderedDag::from_lists(&lists, sink));

        Slp {
            nonterminal,
            label,
            expansion_len,
            forward,
            backward,
        }
    }

    pub fn rule_count(&self) -> usize {
        self.expansion_len.len()
    }

    /// Collapsed nonterminal `F_v`; `None` for the source.
    pub fn nonterminal(&self, v: NodeId) -> Option<Sym> {
        self.nonterminal[v as usize]
    }

    /// Symbol expanding to the full label of `v`; `None` for the source.
    pub fn label_symbol(&self, v: NodeId) -> Option<Sym> {
        self.label[v as usize]
    }

    pub fn rule_body(&self, r: u32) -> Vec<Sym> {
        let dag = self.forward.dag();
        (0..dag.out_degree(r))
            .map(|i| {
                let a = dag.arc(r, i);
                if a.target == dag.sink() {
                    Sym::Term(a.label)
                } else {
                    Sym::Rule(a.target)
                }
            })
            .collect()
    }

    pub fn expansion_len(&self, s: Sym) -> u64 {
        match s {
            Sym::Term(_) => 1,
            Sym::Rule(r) => self.expansion_len[r as usize],
        }
    }

    /// Parse-tree height of a symbol (0 for terminals).
    pub fn height(&self, s: Sym) -> u32 {
        match s {
            Sym::Term(_) => 0,
            Sym::Rule(r) => self.forward.height(r),
        }
    }

    pub fn forward_index(&self) -> &DagIndex {
        &self.forward
    }

    pub fn backward_index(&self) -> &DagIndex {
        &self.backward
    }

    /// Constant-delay left-to-right reader of `π(s)`.
    pub fn chars(&self, s: Sym) -> SymCursor<'_> {
        match s {
            Sym::Term(c) => SymCursor::Term(Some(c)),
            Sym::Rule(r) => SymCursor::Path(self.forward.cursor(r)),
        }
    }

    /// Constant-delay right-to-left reader of `π(s)`.
    pub fn chars_rev(&self, s: Sym) -> SymCursor<'_> {
        match s {
            Sym::Term(c) => SymCursor::Term(Some(c)),
            Sym::Rule(r) => SymCursor::Path(self.backward.cursor(r)),
        }
    }

    /// Emits the first `min(k, |π(s)|)` characters of `π(s)` and returns how
    /// many were emitted.
    pub fn extract_prefix(
        &self,
        s: Sym,
        k: usize,
        mut emit: impl FnMut(u8),
        stats: &mut ScanStats,
    ) -> usize {
        match s {
            Sym::Term(_) if k == 0 => 0,
            Sym::Term(c) => {
                stats.ops += 1;
                emit(c);
                1
            }
            Sym::Rule(r) => self.forward.scan(
                r,
                k,
                |c| {
                    emit(c);
                    true
                },
                stats,
            ),
        }
    }

    /// Length of the longest common prefix of `pattern` and `π(s)`.
    pub fn match_prefix(&self, s: Sym, pattern: &[u8], stats: &mut ScanStats) -> usize {
        match s {
            Sym::Term(_) if pattern.is_empty() => 0,
            Sym::Term(c) => {
                stats.ops += 1;
                usize::from(pattern[0] == c)
            }
            Sym::Rule(r) => {
                let mut i = 0;
                self.forward.scan(
                    r,
                    pattern.len(),
                    |c| {
                        if pattern[i] == c {
                            i += 1;
                            true
                        } else {
                            false
                        }
                    },
                    stats,
                )
            }
        }
    }

    /// Recursive expansion with memoization; a test reference independent of
    /// the stack procedures.
    pub fn expand_memoized(&self, s: Sym) -> Vec<u8> {
        let mut memo: Vec<Option<Vec<u8>>> = vec![None; self.rule_count()];
        fn go(slp: &Slp, s: Sym, memo: &mut Vec<Option<Vec<u8>>>) -> Vec<u8> {
            match s {
                Sym::Term(c) => vec![c],
                Sym::Rule(r) => {
                    if let Some(v) = &memo[r as usize] {
                        return v.clone();
                    }
                    let mut out = Vec::new();
                    for child in slp.rule_body(r) {
                        out.extend(go(slp, child, memo));
                    }
                    memo[r as usize] = Some(out.clone());
                    out
                }
            }
        }
        go(self, s, &mut memo)
    }
}

/// Reader over the expansion of one symbol.
#[derive(Debug, Clone)]
pub enum SymCursor<'a> {
    Term(Option<u8>),
    Path(PathCursor<'a>),
}

impl SymCursor<'_> {
    pub fn stats(&self) -> ScanStats {
        match self {
            SymCursor::Term(_) => ScanStats::default(),
            SymCursor::Path(p) => p.stats(),
        }
    }
}

impl Iterator for SymCursor<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        match self {
            SymCursor::Term(c) => c.take(),
            SymCursor::Path(p) => p.next(),
        }
    }
}
