//! Acceptance criteria, one line each. Oracles below are written
//! independently of the library code they check.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sunweave::bulls::bull_sun_design;
use sunweave::certificate::{u_min, verify_embedding, EmbeddingCertificate};
use sunweave::design::{verify_decomposition, BlockKind, Design};
use sunweave::embed::embed;
use sunweave::matching::{konig_color, rebalance_pair, BipartiteGraph};
use sunweave::sts::{bose, fixed_sts13, incidence_graph, skolem, Sts13Class, TripleSystem};
use sunweave::suns::SunFactory;
use sunweave::tables::{embedding_table, grouped_partition, FixedTable};

const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const BULL_BUDGET: Duration = Duration::from_secs(30);
const UMIN_BUDGET: Duration = Duration::from_secs(1);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            pass: true,
            detail: summary,
        }
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!("{} failures: {}", failures.len(), shown.join("; ")),
        }
    }
}

fn sts_orders(max: u32) -> impl Iterator<Item = u32> {
    (1..=max).filter(|n| n % 6 == 1 || n % 6 == 3)
}

/// The minimum order as a table over residues mod 24, with four exceptions.
fn u_min_oracle(n: u32) -> u32 {
    let exceptions: HashMap<u32, u32> = [(3, 6), (7, 6), (9, 7), (13, 11)].into();
    if let Some(&u) = exceptions.get(&n) {
        return u;
    }
    match n % 24 {
        1 | 3 | 9 | 19 => (n - 1) / 2,
        7 | 13 | 15 | 21 => (n + 3) / 2,
        r => panic!("{n} ≡ {r} (mod 24) is not an STS order"),
    }
}

fn sweep_inputs() -> Vec<(String, TripleSystem)> {
    let mut out = Vec::new();
    for n in sts_orders(99) {
        if n % 6 == 3 {
            out.push((format!("bose({n})"), bose(n).expect("bose")));
        } else {
            out.push((format!("skolem({n})"), skolem(n).expect("skolem")));
        }
    }
    out.push(("cyclic STS(13)".into(), fixed_sts13(Sts13Class::Cyclic)));
    out.push((
        "non-cyclic STS(13)".into(),
        fixed_sts13(Sts13Class::Noncyclic),
    ));
    out
}

fn edge(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Edges of a sun `(a,b,c; d,e,f)`.
fn sun_edges(v: &[u32]) -> [(u32, u32); 6] {
    [
        edge(v[0], v[1]),
        edge(v[1], v[2]),
        edge(v[0], v[2]),
        edge(v[0], v[3]),
        edge(v[1], v[4]),
        edge(v[2], v[5]),
    ]
}

/// Sun count, exact `X × U` accounting, and for `u = (n+3)/2` the
/// pendant-degree and outside-triangle properties.
fn counting_identities(c: &EmbeddingCertificate) -> Vec<String> {
    let (n, u) = (c.n as usize, c.u as usize);
    let m = n + u;
    let mut bad = Vec::new();
    if c.design.blocks.len() * 12 != m * (m - 1) {
        bad.push(format!(
            "n = {n}: {} suns for order {m}",
            c.design.blocks.len()
        ));
    }
    let mut xu: HashSet<(u32, u32)> = HashSet::new();
    let mut xu_total = 0usize;
    let image: HashSet<usize> = c.map.iter().copied().collect();
    let mut pendant = vec![0usize; n];
    for (i, b) in c.design.blocks.iter().enumerate() {
        let v = b.vertices();
        for (a, z) in sun_edges(v) {
            if ((a as usize) < n) != ((z as usize) < n) {
                xu_total += 1;
                xu.insert((a, z));
            }
        }
        if !image.contains(&i) && 2 * u == n + 3 {
            if v[..3].iter().any(|&x| (x as usize) < n) {
                bad.push(format!(
                    "n = {n}: outside sun {i} has a triangle vertex in X"
                ));
            }
            for &x in &v[3..] {
                if (x as usize) < n {
                    pendant[x as usize] += 1;
                }
            }
        }
    }
    if xu_total != n * u || xu.len() != n * u {
        bad.push(format!(
            "n = {n}: {xu_total} X×U edge uses, {} distinct, expected {}",
            xu.len(),
            n * u
        ));
    }
    if 2 * u == n + 3 {
        if let Some(x) = pendant.iter().position(|&d| d != 2) {
            bad.push(format!(
                "n = {n}: point {x} has pendant-degree {}",
                pendant[x]
            ));
        }
        let outside = c.design.blocks.len() - image.len();
        if 48 * outside != n * n + 20 * n + 3 {
            bad.push(format!("n = {n}: {outside} suns outside the image"));
        }
    }
    bad
}

fn check_u_min() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for n in sts_orders(201) {
        count += 1;
        match u_min(n) {
            Ok(u) if u == u_min_oracle(n) => {}
            other => bad.push(format!(
                "n = {n}: got {other:?}, expected {}",
                u_min_oracle(n)
            )),
        }
    }
    let t = start.elapsed();
    if t > UMIN_BUDGET {
        bad.push(format!("took {t:?}"));
    }
    outcome(bad, format!("{count} orders n ≤ 201 exact in {t:?}"))
}

fn check_sweep(certs: &mut Vec<EmbeddingCertificate>) -> Outcome {
    let cache = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cache");
    let _ = std::fs::remove_dir_all(&cache);
    let factory = SunFactory::new(Some(cache), 1);
    let start = Instant::now();
    let mut bad = Vec::new();
    let inputs = sweep_inputs();
    for (name, sts) in &inputs {
        match embed(sts, &factory, 1) {
            Ok(c) => {
                let report = verify_embedding(&c);
                if !report.is_ok() {
                    bad.push(format!("{name}: {}", report.violations.join(", ")));
                }
                if c.order() != sts.order + u_min_oracle(sts.order) {
                    bad.push(format!("{name}: order {}", c.order()));
                }
                if c.sts != sts.triples {
                    bad.push(format!("{name}: certificate carries a different STS"));
                }
                certs.push(c);
            }
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let t = start.elapsed();
    if t > SWEEP_BUDGET {
        bad.push(format!("took {t:?}"));
    }
    outcome(bad, format!("{} inputs, cold cache, {t:?}", inputs.len()))
}

fn check_tables() -> Outcome {
    let mut bad = Vec::new();
    for t in FixedTable::ALL {
        match embedding_table(t) {
            Ok((_, _, cert)) => {
                let r = verify_embedding(&cert);
                if !r.is_ok() {
                    bad.push(format!("{t:?}: {}", r.violations.join(", ")));
                }
            }
            Err(e) => bad.push(format!("{t:?}: {e}")),
        }
    }
    outcome(
        bad,
        "3SS(13), 3SS(16), both 3SS(24) verify as transcribed".into(),
    )
}

fn check_bull_designs() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for k in 3..=7u32 {
        for h in [5, 8, 9, 12] {
            count += 1;
            let u = 12 * k + h;
            let d = match bull_sun_design(k, h) {
                Ok(d) => d,
                Err(e) => {
                    bad.push(format!("({k},{h}): {e}"));
                    continue;
                }
            };
            let mut covered: HashMap<(u32, u32), usize> = HashMap::new();
            let mut d2 = vec![0usize; u as usize];
            for b in &d.blocks {
                let v = b.vertices();
                let edges: Vec<(u32, u32)> = match b.kind() {
                    BlockKind::Sun => sun_edges(v).to_vec(),
                    BlockKind::Bull => {
                        d2[v[0] as usize] += 1;
                        vec![
                            edge(v[0], v[1]),
                            edge(v[1], v[2]),
                            edge(v[0], v[2]),
                            edge(v[1], v[3]),
                            edge(v[2], v[4]),
                        ]
                    }
                    other => {
                        bad.push(format!("({k},{h}): {other:?} block"));
                        continue;
                    }
                };
                for e in edges {
                    *covered.entry(e).or_default() += 1;
                }
            }
            let complete = (0..u).all(|a| (a + 1..u).all(|b| covered.get(&(a, b)) == Some(&1)));
            if !complete || covered.len() as u32 != u * (u - 1) / 2 {
                bad.push(format!("({k},{h}): not a partition of K_{u}"));
            }
            for (x, &got) in d2.iter().enumerate() {
                let x = x as u32;
                let want = if x == 6 * k {
                    2
                } else if [0, 4 * k + 1, 6 * k + 1, 6 * k + 2].contains(&x) {
                    3
                } else {
                    4
                };
                if got != want {
                    bad.push(format!("({k},{h}): d2({x}) = {got}, expected {want}"));
                }
            }
        }
    }
    let t = start.elapsed();
    if t > BULL_BUDGET {
        bad.push(format!("took {t:?}"));
    }
    outcome(bad, format!("{count} designs, 41 ≤ u ≤ 96, in {t:?}"))
}

fn check_grouped() -> Outcome {
    let mut bad = Vec::new();
    for n in [21u32, 31, 37, 45, 55, 61, 69] {
        let p = match grouped_partition(n) {
            Ok(p) => p,
            Err(e) => {
                bad.push(format!("n = {n}: {e}"));
                continue;
            }
        };
        let u = p.modulus;
        if 2 * u != n + 3 {
            bad.push(format!("n = {n}: {u} points"));
        }
        let d = Design::complete(u, p.blocks().copied().collect());
        if !verify_decomposition(&d).is_ok() {
            bad.push(format!("n = {n}: not a partition of K_{u}"));
        }
        if 48 * p.block_count() as u32 != n * n + 20 * n + 3 {
            bad.push(format!("n = {n}: {} blocks", p.block_count()));
        }
        let mut total = 0;
        for g in &p.groups {
            let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
            for b in &g.blocks {
                let v = b.vertices();
                let two: &[u32] = match b.kind() {
                    BlockKind::Triangle => &v[..3],
                    BlockKind::Kite => &v[..2],
                    BlockKind::Bull => &v[..1],
                    BlockKind::Sun => &[],
                };
                for &x in two {
                    *seen.entry(x).or_default() += 1;
                    total += 1;
                }
            }
            if let Some((x, c)) = seen.iter().find(|(_, &c)| c > 1) {
                bad.push(format!(
                    "n = {n}, {}: vertex {x} has multiplicity {c}",
                    g.name
                ));
            }
        }
        if total != 2 * n {
            bad.push(format!("n = {n}: Σ d2 = {total}"));
        }
    }
    outcome(bad, "7 grouped partitions verify".into())
}

fn random_bipartite(rng: &mut ChaCha8Rng) -> BipartiteGraph {
    let l = rng.gen_range(1..=40);
    let r = rng.gen_range(1..=40);
    let e = rng.gen_range(0..=300);
    let mut g = BipartiteGraph::new(l, r);
    for _ in 0..e {
        g.add_edge(rng.gen_range(0..l), rng.gen_range(0..r));
    }
    g
}

fn proper_partition(g: &BipartiteGraph, parts: &[Vec<usize>]) -> Option<String> {
    let mut seen = vec![0usize; g.edge_count()];
    for (i, p) in parts.iter().enumerate() {
        let mut ls = HashSet::new();
        let mut rs = HashSet::new();
        for &e in p {
            let (a, b) = g.edge(e);
            if !ls.insert(a) || !rs.insert(b) {
                return Some(format!("part {i} is not a matching"));
            }
            seen[e] += 1;
        }
    }
    seen.iter()
        .position(|&c| c != 1)
        .map(|e| format!("edge {e} covered {} times", seen[e]))
}

fn check_konig() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6f6e6967);
    let mut bad = Vec::new();
    for trial in 0..100 {
        let g = random_bipartite(&mut rng);
        let mut deg: HashMap<(bool, u32), usize> = HashMap::new();
        for &(a, b) in g.edges() {
            *deg.entry((false, a)).or_default() += 1;
            *deg.entry((true, b)).or_default() += 1;
        }
        let delta = deg.values().copied().max().unwrap_or(0);
        let p = konig_color(&g);
        if p.len() != delta {
            bad.push(format!("trial {trial}: {} parts for Δ = {delta}", p.len()));
        }
        if let Some(e) = proper_partition(&g, p.parts()) {
            bad.push(format!("trial {trial}: {e}"));
        }
    }
    // point degree (n−1)/2 dominates the triple degree 3 from n = 7 on
    for n in sts_orders(99).filter(|&n| n >= 7) {
        let sts = if n % 6 == 3 { bose(n) } else { skolem(n) }.expect("sts");
        let g = incidence_graph(&sts);
        let p = konig_color(&g);
        if p.len() != ((n - 1) / 2) as usize {
            bad.push(format!("STS({n}): {} parts", p.len()));
        }
        for (i, part) in p.parts().iter().enumerate() {
            let hit: HashSet<u32> = part.iter().map(|&e| g.edge(e).0).collect();
            if hit.len() != n as usize {
                bad.push(format!(
                    "STS({n}): part {i} misses {} points",
                    n as usize - hit.len()
                ));
            }
        }
    }
    outcome(
        bad,
        "100 random multigraphs; every STS(n ≥ 7) part saturates X".into(),
    )
}

/// Two random disjoint matchings of different sizes on a fresh graph.
fn random_matching_pair(rng: &mut ChaCha8Rng) -> (BipartiteGraph, Vec<usize>, Vec<usize>) {
    loop {
        let l = rng.gen_range(2..=30u32);
        let r = rng.gen_range(2..=30u32);
        let mut g = BipartiteGraph::new(l, r);
        let mut used: HashSet<(u32, u32)> = HashSet::new();
        let mut make = |g: &mut BipartiteGraph, rng: &mut ChaCha8Rng| {
            let mut lefts: Vec<u32> = (0..l).collect();
            let mut rights: Vec<u32> = (0..r).collect();
            use rand::seq::SliceRandom;
            lefts.shuffle(rng);
            rights.shuffle(rng);
            let size = rng.gen_range(0..=l.min(r)) as usize;
            let mut m = Vec::new();
            for (&a, &b) in lefts.iter().zip(&rights).take(size) {
                if used.insert((a, b)) {
                    m.push(g.add_edge(a, b));
                }
            }
            m
        };
        let a = make(&mut g, rng);
        let b = make(&mut g, rng);
        match a.len().cmp(&b.len()) {
            std::cmp::Ordering::Greater => return (g, a, b),
            std::cmp::Ordering::Less => return (g, b, a),
            std::cmp::Ordering::Equal => continue,
        }
    }
}

fn check_rebalance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x72656261);
    let mut bad = Vec::new();
    for trial in 0..200 {
        let (g, m, n) = random_matching_pair(&mut rng);
        match rebalance_pair(&g, &m, &n) {
            Ok((m2, n2)) => {
                if m2.len() + 1 != m.len() || n2.len() != n.len() + 1 {
                    bad.push(format!("trial {trial}: sizes {} {}", m2.len(), n2.len()));
                }
                let before: HashSet<usize> = m.iter().chain(&n).copied().collect();
                let after: HashSet<usize> = m2.iter().chain(&n2).copied().collect();
                if before != after || m2.iter().any(|e| n2.contains(e)) {
                    bad.push(format!("trial {trial}: union or disjointness broken"));
                }
                if let Some(e) = proper_partition(&g, &[m2, n2]) {
                    bad.push(format!("trial {trial}: {e}"));
                }
            }
            Err(e) => bad.push(format!("trial {trial}: {e}")),
        }
    }
    outcome(bad, "200 random pairs".into())
}

fn check_identities(certs: &[EmbeddingCertificate]) -> Outcome {
    let bad: Vec<String> = certs.iter().flat_map(counting_identities).collect();
    if certs.is_empty() {
        return outcome(vec!["no embeddings produced".into()], String::new());
    }
    let large = certs.iter().filter(|c| 2 * c.u == c.n + 3).count();
    outcome(
        bad,
        format!("{} embeddings, {large} with u = (n+3)/2", certs.len()),
    )
}

fn check_lower_bound(certs: &[EmbeddingCertificate]) -> Outcome {
    let mut bad = Vec::new();
    for n in [9u32, 13, 21] {
        let Some(good) = certs.iter().find(|c| c.n == n) else {
            bad.push(format!("n = {n}: no certificate to perturb"));
            continue;
        };
        for u in [u_min_oracle(n) - 1, (n - 1) / 2 - 1] {
            // drop the top added points; the design then lives on n + u points
            let mut bad_cert = good.clone();
            bad_cert.u = u;
            bad_cert.design.points = n + u;
            bad_cert
                .design
                .blocks
                .retain(|b| b.vertices().iter().all(|&x| x < n + u));
            let r = verify_embedding(&bad_cert);
            let mentions_u = r.violations.iter().any(|v| v.contains(&format!("u = {u}")));
            if r.is_ok() || !mentions_u {
                bad.push(format!("n = {n}, u = {u}: accepted or bound not reported"));
            }
        }
    }
    outcome(bad, "u < u_min rejected for n ∈ {9, 13, 21}".into())
}

fn main() -> ExitCode {
    let mut certs = Vec::new();
    let results = [
        ("u_min table", check_u_min()),
        ("end-to-end sweep n ≤ 99", check_sweep(&mut certs)),
        ("transcribed embedding tables", check_tables()),
        ("bull-design suite 3 ≤ k ≤ 7", check_bull_designs()),
        ("grouped partition suite", check_grouped()),
        ("König colouring suite", check_konig()),
        ("rebalance suite", check_rebalance()),
        ("counting identities", check_identities(&certs)),
        ("lower-bound oracle", check_lower_bound(&certs)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
