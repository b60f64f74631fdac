//! On-disk index format.
//!
//! ```text
//! "CDWG"  u16 version, u64 total file length
//! header  u32 n, u8 sigma, u32 node_count, u32 arc_count, u32 source, u32 sink, u32 h
//! nodes   per node: u32 length, freq, suffix_pointer+1, u8 has_interval,
//!         u32 sp, ep, class_size, pi_length, then u32-prefixed lists
//!         in_arcs (u32), left_ext (u8), out_arcs (u32)
//! arcs    per arc: u32 from, to, u8 char, u32 right, pos+1, offset,
//!         label sp, ep, extension sp, ep, order, u16 previous_char+1,
//!         u32 anchor, anchor_slot, anchor_offset
//! grammar per node two symbols (u8 tag, u32 value), expansion lengths,
//!         then the forward and backward traversal indexes
//! top-k   the lexicographic and the frequency traversal indexes
//! u64     FNV-1a of every preceding byte
//! ```
//!
//! All integers are little-endian. A traversal index is its arc arrays,
//! level-ancestor tables, chain weights and heights, each length-prefixed.

use std::hash::Hasher;

use thiserror::Error;

use crate::cdawg::{Cdawg, CdawgArc, CdawgNode};
use crate::dag::{DagIndex, OrderedDag};
use crate::la::LevelAncestor;
use crate::query::Index;
use crate::slp::{Slp, Sym};
use crate::suffix::Interval;

pub const MAGIC: &[u8; 4] = b"CDWG";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    ChecksumMismatch { stored: u64, computed: u64 },
    #[error("file is truncated")]
    Truncated,
    #[error("malformed index: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn checksum(bytes: &[u8]) -> u64 {
    let mut h = fnv::FnvHasher::default();
    h.write(bytes);
    h.finish()
}

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn i64(&mut self, v: i64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u32s(&mut self, v: &[u32]) {
        self.u32(v.len() as u32);
        v.iter().for_each(|&x| self.u32(x));
    }
    fn bytes(&mut self, v: &[u8]) {
        self.u32(v.len() as u32);
        self.buf.extend_from_slice(v);
    }
    fn sym(&mut self, s: Option<Sym>) {
        match s {
            None => {
                self.u8(0);
                self.u32(0);
            }
            Some(Sym::Term(c)) => {
                self.u8(1);
                self.u32(c as u32);
            }
            Some(Sym::Rule(r)) => {
                self.u8(2);
                self.u32(r);
            }
        }
    }
    fn dag_index(&mut self, d: &DagIndex) {
        let g = &d.dag;
        self.u32(g.sink);
        self.u32s(&g.offsets);
        self.u32s(&g.targets);
        self.bytes(&g.labels);
        self.u32(g.weights.len() as u32);
        g.weights.iter().for_each(|&w| self.i64(w));
        let la = &d.la;
        self.u32s(&la.depth);
        self.u32s(&la.jump);
        self.u32(la.levels);
        self.u32s(&la.ladder_of);
        self.u32s(&la.ladder_start);
        self.u32s(&la.ladder_top_depth);
        self.u32s(&la.ladders);
        self.u32(d.chain_weight.len() as u32);
        d.chain_weight.iter().for_each(|&w| self.i64(w));
        self.u32s(&d.height);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8], FormatError> {
        let end = self.pos.checked_add(k).ok_or(FormatError::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn i64(&mut self) -> Result<i64, FormatError> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self, width: usize) -> Result<usize, FormatError> {
        let k = self.u32()? as usize;
        if k.saturating_mul(width) > self.buf.len() - self.pos {
            return Err(FormatError::Truncated);
        }
        Ok(k)
    }
    fn u32s(&mut self) -> Result<Vec<u32>, FormatError> {
        let k = self.len(4)?;
        (0..k).map(|_| self.u32()).collect()
    }
    fn i64s(&mut self) -> Result<Vec<i64>, FormatError> {
        let k = self.len(8)?;
        (0..k).map(|_| self.i64()).collect()
    }
    fn bytes(&mut self) -> Result<Vec<u8>, FormatError> {
        let k = self.len(1)?;
        Ok(self.take(k)?.to_vec())
    }
    fn sym(&mut self) -> Result<Option<Sym>, FormatError> {
        let tag = self.u8()?;
        let v = self.u32()?;
        match tag {
            0 => Ok(None),
            1 if v < 256 => Ok(Some(Sym::Term(v as u8))),
            2 => Ok(Some(Sym::Rule(v))),
            _ => Err(invalid("grammar symbol tag")),
        }
    }
    fn dag_index(&mut self) -> Result<DagIndex, FormatError> {
        let sink = self.u32()?;
        let offsets = self.u32s()?;
        let targets = self.u32s()?;
        let labels = self.bytes()?;
        let weights = self.i64s()?;
        let depth = self.u32s()?;
        let jump = self.u32s()?;
        let levels = self.u32()?;
        let ladder_of = self.u32s()?;
        let ladder_start = self.u32s()?;
        let ladder_top_depth = self.u32s()?;
        let ladders = self.u32s()?;
        let chain_weight = self.i64s()?;
        let height = self.u32s()?;

        let nodes = offsets.len().checked_sub(1).ok_or_else(|| invalid("empty arc offsets"))?;
        let arcs = targets.len();
        let in_nodes = |v: &[u32]| v.iter().all(|&x| (x as usize) < nodes);
        let ok = (sink as usize) < nodes
            && offsets.windows(2).all(|w| w[0] <= w[1])
            && offsets[nodes] as usize == arcs
            && labels.len() == arcs
            && weights.len() == arcs
            && in_nodes(&targets)
            && depth.len() == nodes
            && (1..=32).contains(&levels)
            && jump.len() == nodes * levels as usize
            && in_nodes(&jump)
            && ladder_of.len() == nodes
            && ladder_start.len() == ladder_top_depth.len() + 1
            && ladder_of.iter().all(|&l| (l as usize) < ladder_top_depth.len())
            && ladder_start.windows(2).all(|w| w[0] <= w[1])
            && ladder_start.last().is_some_and(|&e| e as usize == ladders.len())
            && in_nodes(&ladders)
            && chain_weight.len() == nodes
            && height.len() == nodes;
        if !ok {
            return Err(invalid("traversal index tables"));
        }
        Ok(DagIndex {
            dag: OrderedDag {
                offsets,
                targets,
                labels,
                weights,
                sink,
            },
            la: LevelAncestor {
                depth,
                jump,
                levels,
                ladder_of,
                ladder_start,
                ladder_top_depth,
                ladders,
            },
            chain_weight,
            height,
        })
    }
}

fn invalid(what: &str) -> FormatError {
    FormatError::Invalid(what.to_string())
}

/// Encodes the index; equal indexes give identical bytes.
pub fn serialize(idx: &Index) -> Vec<u8> {
    let c = &idx.cdawg;
    let mut w = Writer { buf: Vec::new() };
    w.buf.extend_from_slice(MAGIC);
    w.u16(VERSION);
    w.u64(0); // patched below
    w.u32(c.n);
    w.u8(c.sigma);
    w.u32(c.nodes.len() as u32);
    w.u32(c.arcs.len() as u32);
    w.u32(c.source);
    w.u32(c.sink);
    w.u32(c.h);
    for v in &c.nodes {
        w.u32(v.length);
        w.u32(v.freq);
        w.u32(v.suffix_pointer.map_or(0, |s| s + 1));
        let iv = v.interval.unwrap_or_default();
        w.u8(v.interval.is_some() as u8);
        w.u32(iv.sp);
        w.u32(iv.ep);
        w.u32(v.class_size);
        w.u32(v.pi_length);
        w.u32s(&v.in_arcs);
        w.bytes(&v.left_ext);
        w.u32s(&v.out_arcs);
    }
    for a in &c.arcs {
        w.u32(a.from);
        w.u32(a.to);
        w.u8(a.char);
        w.u32(a.right);
        w.u32(a.pos.map_or(0, |p| p + 1));
        w.u32(a.offset);
        w.u32(a.label_interval.sp);
        w.u32(a.label_interval.ep);
        w.u32(a.extension_interval.sp);
        w.u32(a.extension_interval.ep);
        w.u32(a.order);
        w.u16(a.previous_char.map_or(0, |p| p as u16 + 1));
        w.u32(a.anchor);
        w.u32(a.anchor_slot);
        w.u32(a.anchor_offset);
    }
    let g = &idx.slp;
    for v in 0..c.nodes.len() {
        w.sym(g.nonterminal[v]);
        w.sym(g.label[v]);
    }
    w.u32(g.expansion_len.len() as u32);
    g.expansion_len.iter().for_each(|&x| w.u64(x));
    w.dag_index(&g.forward);
    w.dag_index(&g.backward);
    w.dag_index(&idx.lex);
    w.dag_index(&idx.freq);
    let total = w.buf.len() as u64 + 8;
    w.buf[6..14].copy_from_slice(&total.to_le_bytes());
    let sum = checksum(&w.buf);
    w.u64(sum);
    w.buf
}

/// Decodes an index, checking magic, version and checksum before reading
/// any table, then the ranges of every stored id.
pub fn deserialize(bytes: &[u8]) -> Result<Index, FormatError> {
    if bytes.len() < MAGIC.len() {
        return Err(FormatError::Truncated);
    }
    if &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    if bytes.len() < 6 {
        return Err(FormatError::Truncated);
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    if bytes.len() < 14 {
        return Err(FormatError::Truncated);
    }
    let total = u64::from_le_bytes(bytes[6..14].try_into().unwrap());
    if (bytes.len() as u64) < total || total < 22 {
        return Err(FormatError::Truncated);
    }
    if bytes.len() as u64 > total {
        return Err(invalid("trailing bytes after checksum"));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = checksum(body);
    if stored != computed {
        return Err(FormatError::ChecksumMismatch { stored, computed });
    }

    let mut r = Reader { buf: body, pos: 14 };
    let n = r.u32()?;
    let sigma = r.u8()?;
    let node_count = r.u32()? as usize;
    let arc_count = r.u32()? as usize;
    let source = r.u32()?;
    let sink = r.u32()?;
    let h = r.u32()?;
    if node_count < 2 || source as usize >= node_count || sink as usize >= node_count || n == 0 {
        return Err(invalid("header"));
    }
    // every node and arc record takes at least this many bytes
    if node_count.saturating_mul(41) + arc_count.saturating_mul(55) > body.len() {
        return Err(FormatError::Truncated);
    }

    let mut nodes = Vec::with_capacity(node_count);
    for _ in 0..node_count {
        let length = r.u32()?;
        let freq = r.u32()?;
        let sp = r.u32()?;
        let has_interval = r.u8()?;
        let iv = Interval::new(r.u32()?, r.u32()?);
        let class_size = r.u32()?;
        let pi_length = r.u32()?;
        let in_arcs = r.u32s()?;
        let left_ext = r.bytes()?;
        let out_arcs = r.u32s()?;
        let ids_ok = (sp as usize) <= node_count
            && in_arcs.iter().chain(&out_arcs).all(|&a| (a as usize) < arc_count)
            && has_interval < 2;
        if !ids_ok {
            return Err(invalid("node record"));
        }
        nodes.push(CdawgNode {
            length,
            freq,
            suffix_pointer: sp.checked_sub(1),
            interval: (has_interval == 1).then_some(iv),
            class_size,
            pi_length,
            in_arcs,
            left_ext,
            out_arcs,
        });
    }
    let mut arcs = Vec::with_capacity(arc_count);
    for _ in 0..arc_count {
        let from = r.u32()?;
        let to = r.u32()?;
        let char = r.u8()?;
        let right = r.u32()?;
        let pos = r.u32()?.checked_sub(1);
        let offset = r.u32()?;
        let label_interval = Interval::new(r.u32()?, r.u32()?);
        let extension_interval = Interval::new(r.u32()?, r.u32()?);
        let order = r.u32()?;
        let previous_char = r.u16()?;
        let anchor = r.u32()?;
        let anchor_slot = r.u32()?;
        let anchor_offset = r.u32()?;
        let ok = (from as usize) < node_count
            && (to as usize) < node_count
            && (anchor as usize) < node_count
            && (anchor_slot as usize) < nodes[anchor as usize].in_arcs.len()
            && order >= 1
            && (order as usize) <= nodes[to as usize].in_arcs.len()
            && previous_char <= 256;
        if !ok {
            return Err(invalid("arc record"));
        }
        arcs.push(CdawgArc {
            from,
            to,
            char,
            right,
            pos,
            offset,
            label_interval,
            extension_interval,
            order,
            previous_char: previous_char.checked_sub(1).map(|p| p as u8),
            anchor,
            anchor_slot,
            anchor_offset,
        });
    }

    let mut nonterminal = Vec::with_capacity(node_count);
    let mut label = Vec::with_capacity(node_count);
    for _ in 0..node_count {
        nonterminal.push(r.sym()?);
        label.push(r.sym()?);
    }
    let rules = r.len(8)?;
    let expansion_len = (0..rules).map(|_| r.u64()).collect::<Result<Vec<_>, _>>()?;
    let forward = r.dag_index()?;
    let backward = r.dag_index()?;
    let lex = r.dag_index()?;
    let freq = r.dag_index()?;
    if r.pos != body.len() {
        return Err(invalid("trailing bytes"));
    }

    let rule_ok = |s: &Option<Sym>| !matches!(s, Some(Sym::Rule(x)) if *x as usize >= rules);
    let ok = nonterminal.iter().chain(&label).all(rule_ok)
        && forward.dag.node_count() == rules + 1
        && backward.dag.node_count() == rules + 1
        && lex.dag.node_count() == node_count
        && freq.dag.node_count() == node_count;
    if !ok {
        return Err(invalid("grammar tables"));
    }

    let cdawg = Cdawg::from_parts(n, sigma, nodes, arcs, source, sink, h);
    Ok(Index {
        cdawg,
        slp: Slp {
            nonterminal,
            label,
            expansion_len,
            forward,
            backward,
        },
        lex,
        freq,
    })
}

pub fn write_index(path: &std::path::Path, idx: &Index) -> Result<(), FormatError> {
    std::fs::write(path, serialize(idx))?;
    Ok(())
}

pub fn read_index(path: &std::path::Path) -> Result<Index, FormatError> {
    deserialize(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;

    fn banana() -> Index {
        Index::build(&Text::new(b"banana").unwrap())
    }

    #[test]
    fn round_trip() {
        let idx = banana();
        let back = deserialize(&serialize(&idx)).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.cdawg().stats(), idx.cdawg().stats());
        assert_eq!(back.locate(b"a"), vec![2, 4, 6]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(serialize(&banana()), serialize(&banana()));
    }

    #[test]
    fn distinct_errors() {
        let bytes = serialize(&banana());
        assert!(matches!(deserialize(&[]), Err(FormatError::Truncated)));
        assert!(matches!(deserialize(b"XXXXXXXXXXXXXXXX"), Err(FormatError::BadMagic)));
        let mut v = bytes.clone();
        v[4] = 9;
        assert!(matches!(deserialize(&v), Err(FormatError::UnsupportedVersion(9))));
        let mut v = bytes.clone();
        v[20] ^= 0x40;
        assert!(matches!(deserialize(&v), Err(FormatError::ChecksumMismatch { .. })));
        assert!(matches!(deserialize(&bytes[..bytes.len() - 1]), Err(FormatError::Truncated)));
        assert!(matches!(deserialize(&bytes[..10]), Err(FormatError::Truncated)));
        assert!(matches!(deserialize(&bytes[..5]), Err(FormatError::Truncated)));
    }
}
