//! Brute-force reference implementations.
//!
//! Quadratic or worse; intended for texts of a few thousand symbols. Every
//! indexed query is checked against these in the test suites.

use std::collections::{BTreeSet, HashMap};

use crate::text::{Pattern, Text, SENTINEL};

/// Left context of an occurrence at text offset 0.
const VIRTUAL_LEFT: u16 = 256;

/// Start positions (1-based, ascending) of `p` in `t`. The empty pattern
/// occurs at `1..=n+1`.
pub fn oracle_occurrences(t: &Text, p: &Pattern) -> Vec<usize> {
    let text = t.as_bytes();
    let pat = p.as_bytes();
    if pat.is_empty() {
        return (1..=text.len() + 1).collect();
    }
    if pat.len() > text.len() {
        return Vec::new();
    }
    text.windows(pat.len())
        .enumerate()
        .filter(|(_, w)| *w == pat)
        .map(|(i, _)| i + 1)
        .collect()
}

#[derive(Default)]
struct Contexts {
    count: usize,
    left: BTreeSet<u16>,
    right: BTreeSet<u16>,
}

/// All maximal repeats of `t`, sorted, the empty string included.
pub fn oracle_maximal_repeats(t: &Text) -> Vec<Vec<u8>> {
    let text = t.as_bytes();
    let n = text.len();
    let mut out = vec![Vec::new()];
    for len in 1..n {
        let mut by_substring: HashMap<&[u8], Contexts> = HashMap::new();
        for start in 0..=n - len {
            let ctx = by_substring.entry(&text[start..start + len]).or_default();
            ctx.count += 1;
            ctx.left.insert(if start == 0 {
                VIRTUAL_LEFT
            } else {
                text[start - 1] as u16
            });
            if start + len < n {
                ctx.right.insert(text[start + len] as u16);
            }
        }
        let mut any_repeat = false;
        for (w, ctx) in by_substring {
            if ctx.count < 2 {
                continue;
            }
            any_repeat = true;
            if ctx.left.len() > 1 && ctx.right.len() > 1 {
                out.push(w.to_vec());
            }
        }
        if !any_repeat {
            break;
        }
    }
    out.sort();
    out
}

/// `MS[i]` = length of the longest prefix of `s[i..]` occurring in `t`.
pub fn oracle_matching_statistics(t: &Text, s: &Pattern) -> Vec<usize> {
    let text = t.as_bytes();
    let s = s.as_bytes();
    (0..s.len())
        .map(|i| {
            (0..text.len())
                .map(|start| {
                    text[start..]
                        .iter()
                        .zip(&s[i..])
                        .take_while(|(a, b)| a == b)
                        .count()
                })
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Minimal absent words of `t` of length at most `maxlen`, enumerated as
/// `aVb` over every substring `V`. Sorted and duplicate-free. Words
/// containing the sentinel are dropped unless `include_sentinel` is set.
pub fn oracle_minimal_absent_words(
    t: &Text,
    maxlen: usize,
    include_sentinel: bool,
) -> Vec<Vec<u8>> {
    assert!(maxlen >= 2, "minimal absent words of interest have length >= 2");
    let text = t.as_bytes();
    let n = text.len();
    let mut out = BTreeSet::new();

    for len in 0..=(maxlen - 2).min(n) {
        // substring -> (left chars, right chars, (left, right) pairs)
        let mut ctx: HashMap<&[u8], (BTreeSet<u8>, BTreeSet<u8>, BTreeSet<(u8, u8)>)> =
            HashMap::new();
        if len == 0 {
            let entry = ctx.entry(&text[0..0]).or_default();
            for (i, &c) in text.iter().enumerate() {
                entry.0.insert(c);
                entry.1.insert(c);
                if i + 1 < n {
                    entry.2.insert((c, text[i + 1]));
                }
            }
        } else {
            for start in 0..=n - len {
                let entry = ctx.entry(&text[start..start + len]).or_default();
                let left = start.checked_sub(1).map(|i| text[i]);
                let right = text.get(start + len).copied();
                if let Some(a) = left {
                    entry.0.insert(a);
                }
                if let Some(b) = right {
                    entry.1.insert(b);
                }
                if let (Some(a), Some(b)) = (left, right) {
                    entry.2.insert((a, b));
                }
            }
        }
        for (v, (left, right, pairs)) in ctx {
            for &a in &left {
                for &b in &right {
                    if pairs.contains(&(a, b)) {
                        continue;
                    }
                    let mut w = Vec::with_capacity(len + 2);
                    w.push(a);
                    w.extend_from_slice(v);
                    w.push(b);
                    if include_sentinel || !w.contains(&SENTINEL) {
                        out.insert(w);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Suffix start offsets (0-based) sorted lexicographically by plain
/// comparison of suffixes.
pub fn oracle_suffix_array(t: &Text) -> Vec<usize> {
    let text = t.as_bytes();
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(s: &str) -> Text {
        Text::new(s.as_bytes()).unwrap()
    }

    fn pat(s: &str) -> Pattern {
        Pattern::new(s.as_bytes()).unwrap()
    }

    #[test]
    fn occurrences_examples() {
        let t = text("banana");
        assert_eq!(oracle_occurrences(&t, &pat("ana")), vec![2, 4]);
        assert_eq!(oracle_occurrences(&t, &pat("")), (1..=8).collect::<Vec<_>>());
        assert!(oracle_occurrences(&t, &pat("x")).is_empty());
        assert_eq!(oracle_occurrences(&t, &Pattern::from_symbols(b"a\0")), vec![6]);
    }

    #[test]
    fn maximal_repeats_examples() {
        let mr = |s: &str| oracle_maximal_repeats(&text(s));
        assert_eq!(mr("banana"), vec![b"".to_vec(), b"a".to_vec(), b"ana".to_vec()]);
        assert_eq!(mr("ab"), vec![b"".to_vec()]);
        assert_eq!(mr("aa"), vec![b"".to_vec(), b"a".to_vec()]);
    }

    #[test]
    fn matching_statistics_examples() {
        let t = text("banana");
        assert_eq!(oracle_matching_statistics(&t, &pat("nanba")), vec![3, 2, 1, 2, 1]);
        assert_eq!(oracle_matching_statistics(&t, &pat("q")), vec![0]);
        assert_eq!(
            oracle_matching_statistics(&t, &pat("banana")),
            vec![6, 5, 4, 3, 2, 1]
        );
    }

    #[test]
    fn minimal_absent_words_examples() {
        let words = |s: &str, maxlen| -> Vec<String> {
            oracle_minimal_absent_words(&text(s), maxlen, false)
                .into_iter()
                .map(|w| String::from_utf8(w).unwrap())
                .collect()
        };
        let banana = words("banana", 3);
        for w in ["aa", "bb", "nn"] {
            assert!(banana.contains(&w.to_string()), "{w}");
        }
        assert_eq!(words("a", 3), vec!["aa"]);
        assert_eq!(words("ab", 4), vec!["aa", "ba", "bb"]);

        // length-2 words over {a,b,n} absent from banana: all pairs but an, ba, na
        let two = words("banana", 2);
        assert_eq!(two, vec!["aa", "ab", "bb", "bn", "nb", "nn"]);
    }

    #[test]
    fn maws_are_minimal_and_absent() {
        let t = text("abracadabra");
        for w in oracle_minimal_absent_words(&t, 8, true) {
            assert!(oracle_occurrences(&t, &Pattern::from_symbols(&w)).is_empty());
            let head = Pattern::from_symbols(&w[..w.len() - 1]);
            let tail = Pattern::from_symbols(&w[1..]);
            assert!(!oracle_occurrences(&t, &head).is_empty());
            assert!(!oracle_occurrences(&t, &tail).is_empty());
        }
    }

    #[test]
    fn maximal_repeat_count_bounded() {
        let t = text("abaababaabaababaababa");
        assert!(oracle_maximal_repeats(&t).len() <= t.len());
    }
}
