//! Queries over the CDAWG and its grammar.
//!
//! Node labels are never stored. Every string comparison goes through
//! [`Index::label_lcp`], which reads `ℓ(v)` from a given slot: the first
//! segment is a suffix of a slot expansion and is read right to left, later
//! slots are read left to right, and the walk falls through to the suffix
//! pointer once the slots run out.

use std::cmp::Reverse;

use crate::cdawg::{ArcId, Cdawg, NodeId};
use crate::dag::{DagArc, DagIndex, OrderedDag, ScanStats};
use crate::slp::{Slp, Sym};
use crate::suffix::Interval;
use crate::text::Text;

/// Child order used by [`Index::top_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Occurrences by the rank of their suffixes.
    Lex,
    /// Heavier subtrees first, ties by character.
    Freq,
}

/// Outcome of the unverified descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchResult {
    /// Endpoint node `v′`; the sink when the pattern ends inside a sink arc.
    pub node: NodeId,
    /// Last arc taken; `None` when nothing was read.
    pub arc: Option<ArcId>,
    /// 0-based start of the pattern inside `ℓ(node)`.
    pub start: u32,
    /// Characters covered by the arcs taken, capped at the pattern length.
    pub matched: usize,
    /// False when some arc was missing, so the pattern is certainly absent.
    pub found: bool,
    /// Occurrence count if the pattern occurs.
    pub count: u32,
}

impl MatchResult {
    /// 1-based interval `[i..j]` of `ℓ(node)` that must equal the pattern.
    pub fn span(&self) -> (u32, u32) {
        (self.start + 1, self.start + self.matched as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Index {
    pub(crate) cdawg: Cdawg,
    pub(crate) slp: Slp,
    pub(crate) lex: DagIndex,
    pub(crate) freq: DagIndex,
}

fn absorb(st: &mut ScanStats, other: ScanStats) {
    st.ops += other.ops;
    st.peak = st.peak.max(other.peak);
}

/// `a` minus `b`, both sorted.
fn sorted_difference(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

pub(crate) fn traversal_index(c: &Cdawg, order: Order) -> DagIndex {
    let lists: Vec<Vec<DagArc>> = c
        .nodes
        .iter()
        .map(|node| {
            let mut out = node.out_arcs.clone();
            if order == Order::Freq {
                out.sort_by_key(|&a| {
                    let arc = c.arc(a);
                    (Reverse(c.node(arc.to).freq), arc.char)
                });
            }
            out.iter()
                .map(|&a| {
                    let arc = c.arc(a);
                    DagArc {
                        target: arc.to,
                        label: arc.char,
                        weight: arc.offset as i64,
                    }
                })
                .collect()
        })
        .collect();
    DagIndex::new(OrderedDag::from_lists(&lists, c.sink))
}

impl Index {
    pub fn build(t: &Text) -> Index {
        Index::from_cdawg(Cdawg::build(t))
    }

    pub fn from_cdawg(cdawg: Cdawg) -> Index {
        let slp = Slp::build(&cdawg);
        let lex = traversal_index(&cdawg, Order::Lex);
        let freq = traversal_index(&cdawg, Order::Freq);
        Index {
            cdawg,
            slp,
            lex,
            freq,
        }
    }

    pub fn cdawg(&self) -> &Cdawg {
        &self.cdawg
    }

    pub fn slp(&self) -> &Slp {
        &self.slp
    }

    /// Text length including the sentinel.
    pub fn len(&self) -> usize {
        self.cdawg.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.cdawg.n == 0
    }

    /// Grammar symbol occupying the slot of in-arc `a` inside `ℓ(a.to)`.
    fn slot_symbol(&self, a: ArcId) -> Sym {
        let arc = self.cdawg.arc(a);
        if arc.from == self.cdawg.source {
            Sym::Term(arc.char)
        } else {
            self.slp.nonterminal(arc.from).expect("non-source")
        }
    }

    /// Longest common prefix of `w` and `ℓ(v)[x + skip..]`, where `x` is the
    /// offset of the in-arc at `slot`.
    fn label_lcp(&self, mut v: NodeId, mut slot: usize, mut skip: u32, w: &[u8], st: &mut ScanStats) -> usize {
        let c = &self.cdawg;
        let mut pos = 0;
        while pos < w.len() && v != c.source {
            let node = c.node(v);
            if slot >= node.in_arcs.len() {
                v = node.suffix_pointer.expect("non-source");
                slot = 0;
                skip = 0;
                st.ops += 1;
                continue;
            }
            let a = node.in_arcs[slot];
            st.ops += 1;
            let sym = self.slot_symbol(a);
            let len = c.slot_len(a) as usize;
            let rest = &w[pos..];
            if skip == 0 {
                let seg = len.min(rest.len());
                let got = self.slp.match_prefix(sym, &rest[..seg], st);
                if got < seg {
                    return pos + got;
                }
                pos += seg;
            } else {
                // a proper suffix of the slot: compare from its right end
                let seg = len - skip as usize;
                let mut cursor = self.slp.chars_rev(sym);
                let mut mismatch = None;
                for t in (0..seg).rev() {
                    let ch = cursor.next().expect("slot length");
                    if t < rest.len() && rest[t] != ch {
                        mismatch = Some(t);
                    }
                }
                absorb(st, cursor.stats());
                if let Some(t) = mismatch {
                    return pos + t;
                }
                pos += seg.min(rest.len());
            }
            slot += 1;
            skip = 0;
        }
        pos
    }

    /// Emits up to `limit` characters of `ℓ(v)` starting as in
    /// [`Index::label_lcp`]; returns how many were emitted.
    fn label_emit(
        &self,
        mut v: NodeId,
        mut slot: usize,
        mut skip: u32,
        limit: usize,
        emit: &mut dyn FnMut(u8),
        st: &mut ScanStats,
    ) -> usize {
        let c = &self.cdawg;
        let mut done = 0;
        while done < limit && v != c.source {
            let node = c.node(v);
            if slot >= node.in_arcs.len() {
                v = node.suffix_pointer.expect("non-source");
                slot = 0;
                skip = 0;
                st.ops += 1;
                continue;
            }
            let a = node.in_arcs[slot];
            st.ops += 1;
            let sym = self.slot_symbol(a);
            let len = c.slot_len(a) as usize;
            if skip == 0 {
                done += self.slp.extract_prefix(sym, len.min(limit - done), &mut *emit, st);
            } else {
                let seg = len - skip as usize;
                let mut cursor = self.slp.chars_rev(sym);
                let mut buf: Vec<u8> = cursor.by_ref().take(seg).collect();
                absorb(st, cursor.stats());
                buf.reverse();
                for &ch in buf.iter().take(limit - done) {
                    st.ops += 1;
                    emit(ch);
                }
                done += seg.min(limit - done);
            }
            slot += 1;
            skip = 0;
        }
        done
    }

    /// Descends by first characters only.
    pub fn blind_search(&self, p: &[u8], st: &mut ScanStats) -> MatchResult {
        let c = &self.cdawg;
        let mut r = MatchResult {
            node: c.source,
            arc: None,
            start: 0,
            matched: 0,
            found: true,
            count: c.n + 1,
        };
        let mut i = 0usize;
        while i < p.len() {
            let Some(a) = c.child(r.node, p[i]) else {
                r.found = false;
                r.count = 0;
                r.matched = i;
                return r;
            };
            st.ops += 1;
            let arc = c.arc(a);
            r.start += arc.offset;
            r.node = arc.to;
            r.arc = Some(a);
            i += arc.right as usize;
            if arc.to == c.sink {
                break;
            }
        }
        r.matched = i.min(p.len());
        if r.arc.is_some() {
            r.count = c.node(r.node).freq;
        }
        r
    }

    /// Checks a successful descent against the grammar.
    fn verify(&self, r: &MatchResult, p: &[u8], st: &mut ScanStats) -> bool {
        if !r.found {
            return false;
        }
        let Some(a) = r.arc else {
            return p.is_empty();
        };
        let arc = self.cdawg.arc(a);
        let skip = r.start - arc.offset;
        if skip >= self.cdawg.slot_len(a) {
            return false;
        }
        self.label_lcp(r.node, arc.slot() as usize, skip, p, st) == p.len()
    }

    /// Verified descent: `None` when the pattern does not occur.
    pub fn find(&self, p: &[u8], st: &mut ScanStats) -> Option<MatchResult> {
        let r = self.blind_search(p, st);
        self.verify(&r, p, st).then_some(r)
    }

    pub fn count_with_stats(&self, p: &[u8]) -> (usize, ScanStats) {
        let mut st = ScanStats::default();
        let count = self.find(p, &mut st).map_or(0, |r| r.count as usize);
        (count, st)
    }

    pub fn count(&self, p: &[u8]) -> usize {
        self.count_with_stats(p).0
    }

    pub fn locate_with_stats(&self, p: &[u8]) -> (Vec<usize>, ScanStats) {
        let mut st = ScanStats::default();
        let c = &self.cdawg;
        let Some(r) = self.find(p, &mut st) else {
            return (Vec::new(), st);
        };
        if p.is_empty() {
            return ((1..=c.n as usize + 1).collect(), st);
        }
        let mut out = Vec::with_capacity(r.count as usize);
        if r.node == c.sink {
            out.push(r.start as usize + 1);
            return (out, st);
        }
        let mut stack = vec![(r.node, r.start as usize)];
        st.ops += 1;
        st.peak = st.peak.max(1);
        while let Some((v, acc)) = stack.pop() {
            st.ops += 1;
            for &a in &c.node(v).out_arcs {
                st.ops += 1;
                let arc = c.arc(a);
                let at = acc + arc.offset as usize;
                if arc.to == c.sink {
                    out.push(at + 1);
                } else {
                    stack.push((arc.to, at));
                    st.ops += 1;
                    st.peak = st.peak.max(stack.len());
                }
            }
        }
        out.sort_unstable();
        (out, st)
    }

    /// Sorted 1-based start positions.
    pub fn locate(&self, p: &[u8]) -> Vec<usize> {
        self.locate_with_stats(p).0
    }

    /// First `k` occurrences in the chosen order.
    pub fn top_k(&self, p: &[u8], k: usize, order: Order) -> Vec<usize> {
        let mut st = ScanStats::default();
        let c = &self.cdawg;
        if k == 0 {
            return Vec::new();
        }
        let Some(r) = self.find(p, &mut st) else {
            return Vec::new();
        };
        if r.node == c.sink {
            return vec![r.start as usize + 1];
        }
        let idx = match order {
            Order::Lex => &self.lex,
            Order::Freq => &self.freq,
        };
        let mut cursor = idx.cursor(r.node);
        let mut out = Vec::with_capacity(k.min(r.count as usize));
        while out.len() < k {
            let Some((_, w)) = cursor.next_path() else { break };
            out.push(r.start as usize + w as usize + 1);
        }
        out
    }

    /// Emits the label of arc `a` left to right.
    pub fn extract_arc_label_with_stats(&self, a: ArcId, emit: &mut dyn FnMut(u8)) -> (usize, ScanStats) {
        let mut st = ScanStats::default();
        let arc = self.cdawg.arc(a);
        let got = self.label_emit(
            arc.anchor,
            arc.anchor_slot as usize,
            arc.anchor_offset,
            arc.right as usize,
            emit,
            &mut st,
        );
        (got, st)
    }

    pub fn extract_arc_label(&self, a: ArcId, emit: &mut dyn FnMut(u8)) -> usize {
        self.extract_arc_label_with_stats(a, emit).0
    }

    pub fn arc_label(&self, a: ArcId) -> Vec<u8> {
        let mut out = Vec::new();
        self.extract_arc_label(a, &mut |c| out.push(c));
        out
    }

    /// Label of arc `a` right to left, a suffix of `ℓ(a.to)`.
    pub fn extract_arc_label_rtl(&self, a: ArcId) -> impl Iterator<Item = u8> + '_ {
        self.arc_label_rtl_cursor(a)
    }

    /// The right-to-left cursor, exposing its counters.
    pub fn arc_label_rtl_cursor(&self, a: ArcId) -> RtlCursor<'_> {
        let arc = self.cdawg.arc(a);
        let sym = self.slp.label_symbol(arc.to).expect("non-source");
        RtlCursor {
            inner: self.slp.chars_rev(sym),
            left: arc.right as usize,
        }
    }

    /// `ℓ(v)`, read through the grammar.
    pub fn node_label(&self, v: NodeId) -> Vec<u8> {
        let mut out = Vec::new();
        let len = self.cdawg.node(v).length as usize;
        self.label_emit(v, 0, 0, len, &mut |c| out.push(c), &mut ScanStats::default());
        out
    }

    /// Expands the whole grammar; returns the number of characters emitted.
    pub fn reconstruct_text(&self, mut emit: impl FnMut(u8)) -> usize {
        let c = &self.cdawg;
        let f = self.slp.nonterminal(c.sink).expect("sink rule");
        self.slp
            .extract_prefix(f, c.n as usize, &mut emit, &mut ScanStats::default())
    }

    pub fn text(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len());
        self.reconstruct_text(|c| out.push(c));
        out
    }

    /// Longest prefix of `s` that is a prefix of the label of arc `a`.
    pub fn longest_prefix_vs_arc(&self, a: ArcId, s: &[u8], st: &mut ScanStats) -> usize {
        let arc = self.cdawg.arc(a);
        let cap = s.len().min(arc.right as usize);
        if cap == 0 {
            return 0;
        }
        let mut q = 1usize;
        loop {
            let window = q.min(cap);
            let got = self.probe(arc.label_interval, &s[..window], st);
            if got < window || window == cap {
                return got;
            }
            q *= 2;
        }
    }

    /// Longest prefix of `w` that is a prefix of the string whose rank
    /// interval is `target`, found by an interval-tracking descent.
    fn probe(&self, target: Interval, w: &[u8], st: &mut ScanStats) -> usize {
        let c = &self.cdawg;
        let mut v = c.source;
        let mut member = 0u32;
        let mut cur = c.node(v).interval.expect("source interval");
        let mut depth = 0usize;
        let mut arrival: Option<ArcId> = None;
        loop {
            // all of w read: depth == |w| lands exactly on a node
            let next = (depth < w.len()).then(|| c.child(v, w[depth])).flatten();
            let Some(a) = next else {
                return self.read_stop(v, member, arrival, &w[..depth.min(w.len())], st);
            };
            st.ops += 1;
            let arc = c.arc(a);
            // class members share subtree shapes, so intervals shift uniformly
            let base = c.node(v).interval.expect("not the sink");
            let shift = cur.sp as i64 - base.sp as i64;
            let child = Interval::new(
                (arc.extension_interval.sp as i64 + shift) as u32,
                (arc.extension_interval.ep as i64 + shift) as u32,
            );
            if !child.contains(&target) {
                return self.read_stop(v, member, arrival, &w[..depth], st);
            }
            if depth + arc.right as usize >= w.len() || arc.to == c.sink {
                return self.label_lcp(arc.to, arc.slot() as usize, member, w, st);
            }
            depth += arc.right as usize;
            member += arc.offset;
            v = arc.to;
            cur = child;
            arrival = Some(a);
        }
    }

    fn read_stop(&self, v: NodeId, member: u32, arrival: Option<ArcId>, w: &[u8], st: &mut ScanStats) -> usize {
        match arrival {
            None => 0,
            Some(a) => {
                let arc = self.cdawg.arc(a);
                self.label_lcp(v, arc.slot() as usize, member - arc.offset, w, st)
            }
        }
    }

    pub fn matching_statistics_with_stats(&self, s: &[u8]) -> (Vec<usize>, ScanStats) {
        let mut st = ScanStats::default();
        let c = &self.cdawg;
        let m = s.len();
        let mut out = vec![0usize; m];
        // locus: class node, member index, and the string X hanging below it
        let mut v = c.source;
        let mut member = 0u32;
        let mut xlen = 0usize;
        let mut ms = 0usize;
        let depth = |v: NodeId, member: u32| {
            if v == c.source {
                0
            } else {
                (c.node(v).length - member) as usize
            }
        };
        for i in 0..m {
            if i > 0 && ms > 0 {
                ms -= 1;
                if v == c.source {
                    xlen -= 1;
                } else if member + 1 < c.node(v).class_size {
                    member += 1;
                    out[i] = ms;
                    continue;
                } else {
                    v = c.node(v).suffix_pointer.expect("non-source");
                    member = 0;
                }
                // skip/count X from the new locus
                let mut q = i + depth(v, member);
                while xlen > 0 {
                    let a = c.child(v, s[q]).expect("suffix of an occurring string");
                    st.ops += 1;
                    let arc = c.arc(a);
                    if arc.right as usize > xlen || arc.to == c.sink {
                        break;
                    }
                    member += arc.offset;
                    v = arc.to;
                    q += arc.right as usize;
                    xlen -= arc.right as usize;
                }
                if xlen > 0 {
                    out[i] = ms;
                    continue;
                }
            }
            // extend from a node locus
            loop {
                let pos = i + ms;
                if pos >= m {
                    break;
                }
                let Some(a) = c.child(v, s[pos]) else { break };
                st.ops += 1;
                let arc = c.arc(a);
                let got = self.longest_prefix_vs_arc(a, &s[pos..], &mut st);
                ms += got;
                if got < arc.right as usize || arc.to == c.sink {
                    xlen = got;
                    break;
                }
                member += arc.offset;
                v = arc.to;
            }
            out[i] = ms;
        }
        (out, st)
    }

    pub fn matching_statistics(&self, s: &[u8]) -> Vec<usize> {
        self.matching_statistics_with_stats(s).0
    }

    /// Minimal absent words, sorted; words containing the sentinel are kept
    /// only when asked for.
    pub fn minimal_absent_words(&self, include_sentinel: bool) -> Vec<Vec<u8>> {
        let c = &self.cdawg;
        let mut out = Vec::new();
        for v in 0..c.nodes.len() as NodeId {
            let node = c.node(v);
            if node.out_arcs.is_empty() {
                continue;
            }
            let label = self.node_label(v);
            for &a in &node.out_arcs {
                let arc = c.arc(a);
                let lefts = if arc.order > 1 {
                    node.left_ext
                        .iter()
                        .copied()
                        .filter(|&x| Some(x) != arc.previous_char)
                        .collect()
                } else {
                    sorted_difference(&node.left_ext, &c.node(arc.to).left_ext)
                };
                for x in lefts {
                    let mut word = Vec::with_capacity(label.len() + 2);
                    word.push(x);
                    word.extend_from_slice(&label);
                    word.push(arc.char);
                    out.push(word);
                }
            }
        }
        if !include_sentinel {
            out.retain(|w| !w.contains(&0));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Right-to-left arc-label reader.
#[derive(Debug, Clone)]
pub struct RtlCursor<'a> {
    inner: crate::slp::SymCursor<'a>,
    left: usize,
}

impl RtlCursor<'_> {
    pub fn stats(&self) -> ScanStats {
        self.inner.stats()
    }
}

impl Iterator for RtlCursor<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        self.inner.next()
    }
}
