//! Acceptance run over a fixed corpus. Prints one line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use cdawg::dag::ScanStats;
use cdawg::io::{deserialize, serialize};
use cdawg::oracle::{
    oracle_matching_statistics, oracle_maximal_repeats, oracle_minimal_absent_words,
    oracle_occurrences,
};
use cdawg::query::{Index, Order};
use cdawg::slp::Sym;
use cdawg::{Pattern, Text};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shared work constant for every linear bound.
const C: u64 = 64;
/// Work allowed per `next()` of a constant-delay cursor.
const OPS_PER_NEXT: u64 = 16;
/// Arc budget per family index in the compression witness.
const ARCS_PER_LEVEL: usize = 40;
const RANDOM_TEXTS: usize = 210;
const PATTERNS_PER_TEXT: usize = 500;
const MAX_PATTERN: usize = 32;
const MAX_MS_QUERY: usize = 256;
const SERIAL_QUERIES: usize = 50;
const SEED: u64 = 0x00c0_da59;

struct Case {
    name: String,
    body: Vec<u8>,
}

fn family(i: u32) -> Vec<u8> {
    // T_0 = 0, T_i = T_{i-1} i T_{i-1}; digit d is stored as byte d + 1
    let mut t = vec![1u8];
    for d in 1..=i {
        let prev = t.clone();
        t.push(d as u8 + 1);
        t.extend_from_slice(&prev);
    }
    t
}

fn fibonacci(k: usize) -> Vec<u8> {
    let (mut a, mut b) = (b"b".to_vec(), b"a".to_vec());
    for _ in 2..k {
        let next = [b.clone(), a].concat();
        a = b;
        b = next;
    }
    b
}

fn corpus(rng: &mut ChaCha8Rng) -> Vec<Case> {
    let mut out = Vec::new();
    for r in 0..RANDOM_TEXTS {
        let sigma = [2u8, 4, 16][rng.gen_range(0..3)];
        let len = rng.gen_range(1..=1999);
        let body = (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        out.push(Case {
            name: format!("random#{r} sigma={sigma} n={}", len + 1),
            body,
        });
    }
    for i in 0..=12 {
        out.push(Case {
            name: format!("T_{i}"),
            body: family(i),
        });
    }
    for k in 3..=17 {
        out.push(Case {
            name: format!("fib_{k}"),
            body: fibonacci(k),
        });
    }
    out
}

fn alphabet(body: &[u8]) -> Vec<u8> {
    body.iter().copied().collect::<BTreeSet<u8>>().into_iter().collect()
}

fn patterns(rng: &mut ChaCha8Rng, text: &[u8], sigma: &[u8]) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(PATTERNS_PER_TEXT);
    let n = text.len();
    let pick = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..=MAX_PATTERN.min(n));
        let start = rng.gen_range(0..=n - len);
        text[start..start + len].to_vec()
    };
    for _ in 0..PATTERNS_PER_TEXT * 2 / 5 {
        out.push(pick(rng));
    }
    for _ in 0..PATTERNS_PER_TEXT * 3 / 10 {
        let mut p = pick(rng);
        if !p.is_empty() {
            let at = rng.gen_range(0..p.len());
            p[at] = sigma[rng.gen_range(0..sigma.len())];
        }
        out.push(p);
    }
    while out.len() < PATTERNS_PER_TEXT {
        let len = rng.gen_range(0..=MAX_PATTERN);
        out.push((0..len).map(|_| sigma[rng.gen_range(0..sigma.len())]).collect());
    }
    out
}

fn ms_queries(rng: &mut ChaCha8Rng, body: &[u8], sigma: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![body[..body.len().min(MAX_MS_QUERY)].to_vec()];
    if body.len() > MAX_MS_QUERY {
        let start = rng.gen_range(0..=body.len() - MAX_MS_QUERY);
        out.push(body[start..start + MAX_MS_QUERY].to_vec());
    }
    let mut wider = sigma.to_vec();
    wider.push(b'~');
    for _ in 0..3 {
        let len = rng.gen_range(1..=MAX_MS_QUERY);
        out.push((0..len).map(|_| wider[rng.gen_range(0..wider.len())]).collect());
    }
    // a text window with sparse mutations
    let len = body.len().min(MAX_MS_QUERY);
    let start = rng.gen_range(0..=body.len() - len);
    let mut q = body[start..start + len].to_vec();
    for _ in 0..len / 16 + 1 {
        let at = rng.gen_range(0..q.len());
        q[at] = wider[rng.gen_range(0..wider.len())];
    }
    out.push(q);
    out
}

#[derive(Default)]
struct Criterion {
    checks: u64,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

/// Worst observed ratio of work to its allowance.
#[derive(Default)]
struct Bound {
    worst: f64,
    at: String,
}

impl Bound {
    fn see(&mut self, ops: u64, units: u64, at: impl FnOnce() -> String) {
        let r = ops as f64 / units as f64;
        if r > self.worst {
            self.worst = r;
            self.at = at();
        }
    }
}

fn all_paths(idx: &Index) -> Vec<Vec<u8>> {
    let c = idx.cdawg();
    let labels: Vec<Vec<u8>> = (0..c.arcs.len() as u32).map(|a| idx.arc_label(a)).collect();
    let mut out = Vec::new();
    let mut stack = vec![(c.source, Vec::new())];
    while let Some((v, prefix)) = stack.pop() {
        for &a in &c.node(v).out_arcs {
            let mut s = prefix.clone();
            s.extend_from_slice(&labels[a as usize]);
            if c.arc(a).to == c.sink {
                out.push(s);
            } else {
                stack.push((c.arc(a).to, s));
            }
        }
    }
    out
}

fn main() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cases = corpus(&mut rng);
    let mut crit: Vec<Criterion> = (0..=8).map(|_| Criterion::default()).collect();
    let mut count_b = Bound::default();
    let mut locate_b = Bound::default();
    let mut extract_b = Bound::default();
    let mut ms_b = Bound::default();
    let mut next_b = Bound::default();
    let mut peak_rule_b = Bound::default();
    let mut peak_arc_b = Bound::default();

    for case in &cases {
        let t = Text::new(&case.body).expect("corpus text");
        let text = t.as_bytes();
        let n = text.len();
        let idx = Index::build(&t);
        let c = idx.cdawg();
        let sigma = alphabet(&case.body);
        let name = &case.name;

        // 1 and 6: count and locate
        let pats = patterns(&mut rng, text, &sigma);
        for p in &pats {
            let want = oracle_occurrences(&t, &Pattern::from_symbols(p));
            let (cnt, cst) = idx.count_with_stats(p);
            let (loc, lst) = idx.locate_with_stats(p);
            crit[1].check(cnt == want.len() && loc == want, || {
                format!("{name}: pattern {p:?} count {cnt} locate {} oracle {}", loc.len(), want.len())
            });
            let m = p.len() as u64;
            count_b.see(cst.ops, m + 1, || format!("{name} count m={m}"));
            locate_b.see(lst.ops, m + want.len() as u64 + 1, || format!("{name} locate m={m}"));
        }

        // 2 and 6: matching statistics
        for q in ms_queries(&mut rng, &case.body, &sigma) {
            let want = oracle_matching_statistics(&t, &Pattern::from_symbols(&q));
            let (got, st) = idx.matching_statistics_with_stats(&q);
            let law = got.windows(2).all(|w| w[1] + 1 >= w[0]);
            crit[2].check(got == want && law, || format!("{name}: ms query of length {}", q.len()));
            ms_b.see(st.ops, q.len() as u64 + 1, || format!("{name} ms |S|={}", q.len()));
        }

        // 3: minimal absent words, sentinel filter off
        if n <= 500 {
            let mu = oracle_maximal_repeats(&t).iter().map(|r| r.len()).max().unwrap_or(0);
            let want = oracle_minimal_absent_words(&t, mu + 2, true);
            let got = idx.minimal_absent_words(true);
            crit[3].check(got == want, || format!("{name}: {} words vs oracle {}", got.len(), want.len()));
        }

        // 4: grammar soundness
        crit[4].check(idx.text() == text, || format!("{name}: reconstruction differs"));
        let slp = idx.slp();
        for r in 0..slp.rule_count() as u32 {
            let sym = Sym::Rule(r);
            let full = slp.expand_memoized(sym);
            let mut cursor = slp.chars(sym);
            let mut streamed = Vec::with_capacity(full.len());
            let mut last = 0;
            while let Some(ch) = cursor.next() {
                streamed.push(ch);
                let ops = cursor.stats().ops;
                next_b.see(ops - last, OPS_PER_NEXT, || format!("{name} rule {r} cursor"));
                last = ops;
            }
            let k = if full.len() > 1 { rng.gen_range(1..full.len()) } else { 1 };
            let mut prefix = Vec::new();
            let mut st = ScanStats::default();
            let got = slp.extract_prefix(sym, k, |ch| prefix.push(ch), &mut st);
            crit[4].check(streamed == full && got == k && prefix == full[..k], || {
                format!("{name}: rule {r} expansion mismatch")
            });
            let h = slp.height(sym) as u64;
            peak_rule_b.see(st.peak as u64, (k as u64).min(h) + 1, || format!("{name} rule {r} k={k} h={h}"));
        }

        // 5: structure
        if n <= 500 {
            let mut labels: Vec<Vec<u8>> = (0..c.nodes.len() as u32)
                .filter(|&v| v != c.sink)
                .map(|v| idx.node_label(v))
                .collect();
            labels.sort();
            crit[5].check(labels == oracle_maximal_repeats(&t), || format!("{name}: node set"));
            for v in 0..c.nodes.len() as u32 {
                let node = c.node(v);
                if v != c.sink {
                    let label = idx.node_label(v);
                    let occ = oracle_occurrences(&t, &Pattern::from_symbols(&label)).len();
                    let iv = node.interval.map_or(0, |i| i.len());
                    let occ = if label.is_empty() { n } else { occ };
                    crit[5].check(node.freq as usize == iv && iv == occ, || format!("{name}: freq of node {v}"));
                }
                // in-arc slots tile the first class_size positions of the label
                let mut next = 0;
                let mut tiled = true;
                for &a in &node.in_arcs {
                    tiled &= c.arc(a).offset == next;
                    next += c.slot_len(a);
                }
                crit[5].check(tiled && next == node.pi_length && (v == c.source || next == node.class_size), || {
                    format!("{name}: slot partition at node {v}")
                });
            }
            if n <= 200 {
                let mut paths = all_paths(&idx);
                paths.sort();
                let mut suffixes: Vec<Vec<u8>> = (0..n).map(|i| text[i..].to_vec()).collect();
                suffixes.sort();
                crit[5].check(paths == suffixes, || format!("{name}: path labels vs suffixes"));
            }
        }

        // 6: arc extraction work and stack
        for a in 0..c.arcs.len() as u32 {
            let mut label = Vec::new();
            let (k, st) = idx.extract_arc_label_with_stats(a, &mut |ch| label.push(ch));
            extract_b.see(st.ops, k as u64 + 1, || format!("{name} arc {a} k={k}"));
            peak_arc_b.see(st.peak as u64, (k as u64).min(c.h as u64) + 1, || format!("{name} arc {a} k={k}"));
            let mut rtl = idx.arc_label_rtl_cursor(a);
            let mut back = Vec::new();
            let mut last = 0;
            while let Some(ch) = rtl.next() {
                back.push(ch);
                let ops = rtl.stats().ops;
                next_b.see(ops - last, OPS_PER_NEXT, || format!("{name} arc {a} rtl"));
                last = ops;
            }
            back.reverse();
            crit[6].check(back == label, || format!("{name}: rtl label of arc {a}"));
        }

        // 8: serialization
        let bytes = serialize(&idx);
        let again = serialize(&Index::build(&t));
        crit[8].check(bytes == again, || format!("{name}: non-deterministic bytes"));
        match deserialize(&bytes) {
            Ok(back) => {
                for p in pats.iter().take(SERIAL_QUERIES) {
                    let same = back.count(p) == idx.count(p)
                        && back.locate(p) == idx.locate(p)
                        && back.top_k(p, 5, Order::Lex) == idx.top_k(p, 5, Order::Lex)
                        && back.top_k(p, 5, Order::Freq) == idx.top_k(p, 5, Order::Freq)
                        && back.matching_statistics(p) == idx.matching_statistics(p);
                    crit[8].check(same, || format!("{name}: loaded index differs on {p:?}"));
                }
            }
            Err(e) => crit[8].check(false, || format!("{name}: {e}")),
        }
    }

    // 7: compression witness on the family
    let mut sizes = Vec::new();
    for i in 1..=12u32 {
        let t = Text::new(&family(i)).unwrap();
        let idx = Index::build(&t);
        let s = idx.cdawg().stats();
        sizes.push((i, s.n, s.node_count, s.e));
        crit[7].check(s.e <= ARCS_PER_LEVEL * i as usize, || format!("T_{i}: e = {} > {}", s.e, ARCS_PER_LEVEL * i as usize));
        if i == 12 {
            let body = t.body();
            let start = body.len() / 3;
            let p = &body[start..start + 64];
            let (cnt, st) = idx.count_with_stats(p);
            let want = oracle_occurrences(&t, &Pattern::from_symbols(p)).len();
            crit[7].check(cnt == want && st.ops <= C * 65, || {
                format!("T_12: count of m=64 took {} ops (limit {}), count {cnt} vs {want}", st.ops, C * 65)
            });
            crit[7].notes.push(format!("T_12 n={} count(m=64) ops={}", s.n, st.ops));
        }
    }
    let node_steps: BTreeSet<i64> = sizes.windows(2).map(|w| w[1].2 as i64 - w[0].2 as i64).collect();
    let arc_steps: Vec<i64> = sizes.windows(2).map(|w| w[1].3 as i64 - w[0].3 as i64).collect();
    crit[7].check(node_steps.len() == 1, || format!("node counts not linear in i: increments {node_steps:?}"));
    let (_, _, nodes12, e12) = sizes[sizes.len() - 1];
    crit[7].notes.push(format!("T_12 nodes={nodes12} e={e12}; per-level arc increments {arc_steps:?}"));

    for (b, limit, what) in [
        (&count_b, C as f64, "count"),
        (&locate_b, C as f64, "locate"),
        (&extract_b, C as f64, "extract_arc_label"),
        (&ms_b, C as f64, "matching_statistics"),
        (&next_b, 1.0, "ops per next()"),
        (&peak_rule_b, 1.0, "prefix extraction peak stack vs min(k,h)+1"),
        (&peak_arc_b, 1.0, "arc label peak stack vs min(k,h)+1"),
    ] {
        crit[6].check(b.worst <= limit, || format!("{what}: worst ratio {:.2} at {}", b.worst, b.at));
        crit[6].notes.push(format!("{what} worst {:.2}", b.worst));
    }

    let titles = [
        "",
        "count/locate match the oracle",
        "matching statistics match the oracle",
        "minimal absent words match the oracle",
        "grammar reproduces the text and every rule",
        "structural invariants",
        "linear work bounds (C=64, 16 ops per next)",
        "compression witness on T_i (e <= 40*i)",
        "serialization round trip and determinism",
    ];
    let mut failed = 0;
    for k in 1..=8 {
        let cr = &crit[k];
        let ok = cr.failures.is_empty() && cr.checks > 0;
        failed += usize::from(!ok);
        println!(
            "criterion {k}: {} - {} ({} checks, {} failures){}",
            if ok { "PASS" } else { "FAIL" },
            titles[k],
            cr.checks,
            cr.failures.len(),
            if cr.notes.is_empty() { String::new() } else { format!("; {}", cr.notes.join("; ")) }
        );
        for f in cr.failures.iter().filter(|f| !f.is_empty()) {
            println!("    {f}");
        }
    }
    println!("{} texts in {:.1}s", cases.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
