//! Embedding an STS(n) into a 3SS(n + u_min(n)).
//!
//! Points of the STS keep labels `0..n`; the added points are `n..n+u`.
//! Every route starts from a König colouring of the point-triple incidence
//! graph: a triple whose three incidences lie in matchings `i1, i2, i3`
//! becomes the sun `(x1, x2, x3; n+i1, n+i2, n+i3)`.

use log::{debug, info};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bulls::{bull_sun_design, split_order};
use crate::certificate::{u_min, verify_embedding, EmbeddingCertificate};
use crate::design::{relabel, Block, BlockKind, Design, Point};
use crate::error::{Error, Result};
use crate::matching::{
    kempe_shuffle, konig_color, partition_missing_graph, redistribute_to_profile, BipartiteGraph,
    EdgeId, MatchingPartition,
};
use crate::sts::{incidence_graph, kts_small, sts_isomorphism, TripleSystem};
use crate::suns::SunFactory;
use crate::tables::{
    embedding_table, grouped_partition, BlockGroup, FixedTable, GroupedPartition, GROUPED_ORDERS,
};

/// Orders handled by relabelling a Kirkman triple system of order `(n+3)/2`.
pub const KIRKMAN_ORDERS: [u32; 3] = [15, 39, 63];

/// Perturbation rounds tried when the missing graph admits no partition.
const MAX_ATTEMPTS: usize = 500;

/// Which construction handles a given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `n = 1`: no triples, no added points.
    Trivial,
    /// `n ∈ {3, 7, 9, 13}`: a fixed design, relabelled onto the input.
    Exceptional,
    /// `u = (n−1)/2`: partial embedding plus a 3SS(u) on the added points.
    FullColouring,
    /// `n ∈ {15, 39, 63}`: groups built from a Kirkman system.
    Kirkman,
    /// `n ∈ {21, 31, 37, 45, 55, 61, 69}`: a bundled grouped partition.
    Table,
    /// `n ≥ 79`, `u = (n+3)/2`: a {bull, 3-sun}-design on the added points.
    BullDesign,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Trivial => "trivial",
            Route::Exceptional => "exceptional",
            Route::FullColouring => "full-colouring",
            Route::Kirkman => "kirkman",
            Route::Table => "table",
            Route::BullDesign => "bull-design",
        }
    }
}

/// The construction used for order `n`.
pub fn route(n: u32) -> Result<Route> {
    u_min(n)?;
    Ok(match n {
        1 => Route::Trivial,
        3 | 7 | 9 | 13 => Route::Exceptional,
        _ if KIRKMAN_ORDERS.contains(&n) => Route::Kirkman,
        _ if GROUPED_ORDERS.contains(&n) => Route::Table,
        _ if matches!(n % 24, 1 | 3 | 9 | 19) => Route::FullColouring,
        _ => Route::BullDesign,
    })
}

/// König colouring of the incidence graph into `(n−1)/2` perfect matchings
/// of the points. Edge `3t + j` is the incidence of `sts.triples[t][j]`.
pub fn partial_embed(sts: &TripleSystem) -> (BipartiteGraph, MatchingPartition) {
    let g = incidence_graph(sts);
    let p = konig_color(&g);
    (g, p)
}

/// The suns containing the triples, given the part of each incidence.
/// Matching `i` is attached to the added point `n + i`.
fn image_suns(sts: &TripleSystem, g: &BipartiteGraph, p: &MatchingPartition) -> Result<Vec<Block>> {
    let identity: Vec<Point> = (0..p.len() as Point).collect();
    image_suns_aligned(sts, g, p, &identity)
}

/// As [`image_suns`], with matching `i` attached to `n + align[i]`.
fn image_suns_aligned(
    sts: &TripleSystem,
    g: &BipartiteGraph,
    p: &MatchingPartition,
    align: &[Point],
) -> Result<Vec<Block>> {
    let n = sts.order;
    let owner = p.part_of_edges(g);
    sts.triples
        .iter()
        .enumerate()
        .map(|(t, tri)| {
            let tip = |j: usize| -> Result<Point> {
                let i = owner[3 * t + j].ok_or_else(|| {
                    Error::Verification(format!("incidence {} is uncoloured", 3 * t + j))
                })?;
                Ok(n + align[i])
            };
            Block::sun([tri[0], tri[1], tri[2], tip(0)?, tip(1)?, tip(2)?])
        })
        .collect()
}

fn certificate(sts: &TripleSystem, u: u32, blocks: Vec<Block>, seed: u64) -> EmbeddingCertificate {
    // image suns come first, in triple order
    let map = (0..sts.triples.len()).collect();
    EmbeddingCertificate {
        n: sts.order,
        u,
        sts: sts.triples.clone(),
        design: Design::complete(sts.order + u, blocks),
        map,
        seed: Some(seed),
    }
}

/// `u = (n−1)/2`: the colouring covers `X × U` exactly, and a 3SS(u)
/// covers the added points.
pub fn embed_case_i(
    sts: &TripleSystem,
    factory: &SunFactory,
    seed: u64,
) -> Result<EmbeddingCertificate> {
    let n = sts.order;
    let u = (n - 1) / 2;
    let (g, p) = partial_embed(sts);
    let mut blocks = image_suns(sts, &g, &p)?;
    let inner = factory.sun_system(u)?;
    for b in &inner.blocks {
        blocks.push(b.map(|x| x + n)?);
    }
    Ok(certificate(sts, u, blocks, seed))
}

/// Reshapes the colouring into `u` matchings with `|M_i| = n − d2(i)`.
fn matchings_for_profile(
    sts: &TripleSystem,
    profile: &[usize],
) -> Result<(BipartiteGraph, MatchingPartition)> {
    let n = sts.order as usize;
    let (g, p) = partial_embed(sts);
    let targets = profile
        .iter()
        .map(|&d| {
            n.checked_sub(d)
                .ok_or_else(|| Error::Precondition(format!("2-degree {d} exceeds the {n} points")))
        })
        .collect::<Result<Vec<_>>>()?;
    let p = redistribute_to_profile(&g, &p, &targets)?;
    Ok((g, p))
}

/// Checks that every point is missing from exactly two matchings.
fn check_two_missing(missing: &BipartiteGraph) -> Result<()> {
    match missing.left_degrees().iter().position(|&d| d != 2) {
        Some(x) => Err(Error::Verification(format!(
            "point {x} is missing from {} matchings, expected 2",
            missing.left_degrees()[x]
        ))),
        None => Ok(()),
    }
}

/// `n ≥ 79`, `u = (n+3)/2`: each bull `(a,b,c; d,e)` on the added points
/// takes one point `x` missing from the matching aligned with `a` and
/// becomes the sun `(a, b, c; x, d, e)`. Matchings are aligned with design
/// vertices in decreasing 2-degree, ties by label.
pub fn embed_case_ii_large(sts: &TripleSystem, seed: u64) -> Result<EmbeddingCertificate> {
    let n = sts.order;
    let u = (n + 3) / 2;
    let (k, h) = split_order(u)
        .ok_or_else(|| Error::inadmissible(n, "no bull design of order (n+3)/2 for this n"))?;
    let design = bull_sun_design(k, h)?;
    let profile: Vec<usize> = (0..u)
        .map(|i| {
            design
                .blocks
                .iter()
                .filter(|b| b.kind() == BlockKind::Bull && b.vertices()[0] == i)
                .count()
        })
        .collect();
    let mut align: Vec<Point> = (0..u).collect();
    align.sort_by_key(|&v| (std::cmp::Reverse(profile[v as usize]), v));
    let aligned: Vec<usize> = align.iter().map(|&v| profile[v as usize]).collect();
    let (g, p) = matchings_for_profile(sts, &aligned)?;
    let missing = p.missing_graph(&g);
    check_two_missing(&missing)?;

    let mut missing_at: Vec<Vec<Point>> = vec![Vec::new(); u as usize];
    for &(x, i) in missing.edges() {
        missing_at[align[i as usize] as usize].push(x);
    }
    let mut blocks = image_suns_aligned(sts, &g, &p, &align)?;
    for b in &design.blocks {
        let t = b.map(|y| y + n)?;
        match b.kind() {
            BlockKind::Sun => blocks.push(t),
            BlockKind::Bull => {
                let v = t.vertices();
                let x = missing_at[b.vertices()[0] as usize].pop().ok_or_else(|| {
                    Error::Verification(format!("no missing point left for bull {b}"))
                })?;
                blocks.push(Block::sun([v[0], v[1], v[2], x, v[3], v[4]])?);
            }
            other => {
                return Err(Error::Verification(format!(
                    "unexpected {other:?} in the bull design"
                )))
            }
        }
    }
    Ok(certificate(sts, u, blocks, seed))
}

/// Turns each block of group `j` into a sun by attaching, at every
/// degree-2 vertex `v`, the point matched to `v` in `groups[j]`. Block
/// labels are shifted by `n`.
pub fn complete_blocks_with_matchings(
    partition: &GroupedPartition,
    n: u32,
    missing: &BipartiteGraph,
    groups: &[Vec<EdgeId>],
) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    for (group, matching) in partition.groups.iter().zip(groups) {
        let mut partner: Vec<Option<Point>> = vec![None; partition.modulus as usize];
        for &e in matching {
            let (x, v) = missing.edge(e);
            partner[v as usize] = Some(x);
        }
        let pendant = |v: Point| -> Result<Point> {
            partner[v as usize].ok_or_else(|| {
                Error::Verification(format!(
                    "vertex {v} of group {} has no attached point",
                    group.name
                ))
            })
        };
        for b in &group.blocks {
            let w = b.vertices();
            let s = |i: usize| w[i] + n;
            let sun = match b.kind() {
                BlockKind::Triangle => [
                    s(0),
                    s(1),
                    s(2),
                    pendant(w[0])?,
                    pendant(w[1])?,
                    pendant(w[2])?,
                ],
                BlockKind::Kite => [s(0), s(1), s(2), pendant(w[0])?, pendant(w[1])?, s(3)],
                BlockKind::Bull => [s(0), s(1), s(2), pendant(w[0])?, s(3), s(4)],
                BlockKind::Sun => [s(0), s(1), s(2), s(3), s(4), s(5)],
            };
            out.push(Block::sun(sun)?);
        }
    }
    Ok(out)
}

/// `u = (n+3)/2` from a grouped partition of `K_u`: shape the matchings
/// to the 2-degree profile, then split the missing graph so each group
/// receives one point at each of its degree-2 vertices. On failure the
/// matchings are perturbed by Kempe swaps and the split is retried.
pub fn embed_grouped(
    sts: &TripleSystem,
    partition: &GroupedPartition,
    seed: u64,
) -> Result<EmbeddingCertificate> {
    let n = sts.order;
    let u = partition.modulus;
    if 2 * u != n + 3 {
        return Err(Error::Precondition(format!(
            "partition on {u} points cannot extend an STS({n})"
        )));
    }
    partition.validate()?;
    let profile = partition.two_degree_profile();
    let (g, p) = matchings_for_profile(sts, profile.as_slice())?;
    let requirements = partition.requirements();
    let mut parts = p.into_parts();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let p = MatchingPartition::new(parts.clone());
        let missing = p.missing_graph(&g);
        check_two_missing(&missing)?;
        match partition_missing_graph(&missing, &requirements) {
            Ok(groups) => {
                if attempt > 0 {
                    info!("n = {n}: missing graph split after {attempt} perturbations");
                }
                let mut blocks = image_suns(sts, &g, &p)?;
                blocks.extend(complete_blocks_with_matchings(
                    partition, n, &missing, &groups,
                )?);
                return Ok(certificate(sts, u, blocks, seed));
            }
            Err(e) => {
                debug!("n = {n}, attempt {attempt}: {e}");
                last = Some(e);
                perturb(&g, &mut parts, &mut rng);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no split of the missing graph for n = {n} after {MAX_ATTEMPTS} attempts: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// A few size-preserving Kempe swaps between random pairs of matchings.
fn perturb(g: &BipartiteGraph, parts: &mut [Vec<EdgeId>], rng: &mut ChaCha8Rng) {
    let idx: Vec<usize> = (0..parts.len()).collect();
    for _ in 0..3 {
        let pair: Vec<usize> = idx.choose_multiple(rng, 2).copied().collect();
        if pair.len() < 2 {
            return;
        }
        let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        let (lo, hi) = parts.split_at_mut(b);
        kempe_shuffle(g, &mut lo[a], &mut hi[0], rng);
    }
}

/// Suns from two parallel classes `P`, `Q`: each triangle of `Q` is
/// oriented cyclically, and each triangle `(a,b,c)` of `P` becomes
/// `(a, b, c; a', b', c')` with `x'` the successor of `x` in `Q`. The
/// orientations are chosen so the three successors are distinct.
pub fn pair_classes_to_suns(sts: &TripleSystem, p: &[usize], q: &[usize]) -> Result<Vec<Block>> {
    let v = sts.order as usize;
    let mut q_of = vec![usize::MAX; v];
    for (k, &t) in q.iter().enumerate() {
        for &x in &sts.triples[t] {
            q_of[x as usize] = k;
        }
    }
    if q_of.contains(&usize::MAX) {
        return Err(Error::Precondition("second class is not parallel".into()));
    }
    let succ = |x: Point, orient: &[Option<bool>]| -> Option<Point> {
        let k = q_of[x as usize];
        let t = sts.triples[q[k]];
        let i = t.iter().position(|&y| y == x)?;
        orient[k].map(|fwd| if fwd { t[(i + 1) % 3] } else { t[(i + 2) % 3] })
    };
    let consistent = |orient: &[Option<bool>]| {
        p.iter().all(|&t| {
            let tips: Vec<Point> = sts.triples[t]
                .iter()
                .filter_map(|&x| succ(x, orient))
                .collect();
            (0..tips.len()).all(|i| !tips[i + 1..].contains(&tips[i]))
        })
    };
    fn search(
        k: usize,
        orient: &mut Vec<Option<bool>>,
        ok: &dyn Fn(&[Option<bool>]) -> bool,
    ) -> bool {
        if k == orient.len() {
            return true;
        }
        for fwd in [true, false] {
            orient[k] = Some(fwd);
            if ok(orient) && search(k + 1, orient, ok) {
                return true;
            }
        }
        orient[k] = None;
        false
    }
    let mut orient = vec![None; q.len()];
    if !search(0, &mut orient, &consistent) {
        return Err(Error::SearchExhausted(
            "no orientation gives distinct successors".into(),
        ));
    }
    p.iter()
        .map(|&t| {
            let [a, b, c] = sts.triples[t];
            let s = |x| succ(x, &orient).expect("oriented");
            Block::sun([a, b, c, s(a), s(b), s(c)])
        })
        .collect()
}

/// The grouped partition of `K_v` built from a Kirkman system of order
/// `v ∈ {9, 21, 33}`, relabelled so that `(0,1,2)` lies in the first class.
/// The triangle `(0,1,2)` is dropped; its edges become pendants of three
/// kites in the second class. Classes beyond the fourth are paired into
/// suns.
pub fn kirkman_partition(v: u32) -> Result<GroupedPartition> {
    let kts = kts_small(v)?;
    let classes = kts
        .resolution
        .clone()
        .ok_or_else(|| Error::Precondition("Kirkman system without resolution".into()))?;
    if classes.len() < 4 || classes.len() % 2 != 0 {
        return Err(Error::Precondition(format!(
            "{} parallel classes cannot be grouped",
            classes.len()
        )));
    }
    let [a, b, c] = kts.triples[classes[0][0]];
    let mut order = vec![a, b, c];
    order.extend((0..v).filter(|x| ![a, b, c].contains(x)));
    let mut f = vec![0; v as usize];
    for (k, &x) in order.iter().enumerate() {
        f[x as usize] = k as Point;
    }
    let kts = kts.relabel(&f)?;
    let tri = |t: usize| {
        let [a, b, c] = kts.triples[t];
        Block::triangle(a, b, c)
    };

    let first = classes[0][1..]
        .iter()
        .map(|&t| tri(t))
        .collect::<Result<Vec<_>>>()?;
    let mut second = Vec::new();
    for &t in &classes[1] {
        let tr = kts.triples[t];
        match (0..3).find(|x| tr.contains(x)) {
            Some(x) => {
                let others: Vec<Point> = tr.iter().copied().filter(|&y| y != x).collect();
                second.push(Block::new(
                    BlockKind::Kite,
                    &[others[0], others[1], x, (x + 1) % 3],
                )?);
            }
            None => second.push(tri(t)?),
        }
    }
    let mut groups = vec![
        BlockGroup {
            name: "A1".into(),
            blocks: first,
        },
        BlockGroup {
            name: "A2".into(),
            blocks: second,
        },
    ];
    for (j, class) in classes[2..4].iter().enumerate() {
        groups.push(BlockGroup {
            name: format!("A{}", j + 3),
            blocks: class.iter().map(|&t| tri(t)).collect::<Result<Vec<_>>>()?,
        });
    }
    let mut suns = Vec::new();
    for pair in classes[4..].chunks(2) {
        suns.extend(pair_classes_to_suns(&kts, &pair[0], &pair[1])?);
    }
    groups.insert(
        0,
        BlockGroup {
            name: "A0".into(),
            blocks: suns,
        },
    );
    let partition = GroupedPartition { modulus: v, groups };
    partition.validate()?;
    Ok(partition)
}

/// `n ∈ {15, 39, 63}`: [`embed_grouped`] over [`kirkman_partition`].
pub fn embed_kts_route(sts: &TripleSystem, seed: u64) -> Result<EmbeddingCertificate> {
    embed_grouped(sts, &kirkman_partition((sts.order + 3) / 2)?, seed)
}

/// `n ∈ {21, 31, 37, 45, 55, 61, 69}`: [`embed_grouped`] over the bundled
/// partition.
pub fn embed_small_table(sts: &TripleSystem, seed: u64) -> Result<EmbeddingCertificate> {
    embed_grouped(sts, &grouped_partition(sts.order)?, seed)
}

/// `n ∈ {3, 7, 9, 13}`: a fixed embedding relabelled onto the input.
pub fn embed_exceptional(
    sts: &TripleSystem,
    factory: &SunFactory,
    seed: u64,
) -> Result<EmbeddingCertificate> {
    let n = sts.order;
    let tables: &[FixedTable] = match n {
        3 => return embed_three(sts, factory, seed),
        7 => &[FixedTable::Seven],
        9 => &[FixedTable::Nine],
        13 => &[FixedTable::ThirteenCyclic, FixedTable::ThirteenNoncyclic],
        _ => return Err(Error::inadmissible(n, "no fixed embedding for this order")),
    };
    for &which in tables {
        let (table_sts, design, cert) = embedding_table(which)?;
        let Some(f) = sts_isomorphism(&table_sts, sts) else {
            continue;
        };
        let mut full: Vec<Point> = f.clone();
        full.extend(n..design.points);
        let design = relabel(&design, &full)?;
        let mut map = vec![0; sts.triples.len()];
        for (i, t) in table_sts.triples.iter().enumerate() {
            let image = [f[t[0] as usize], f[t[1] as usize], f[t[2] as usize]];
            let k = sts.position(&image).ok_or_else(|| {
                Error::Verification(format!("isomorphism misses triple {image:?}"))
            })?;
            map[k] = cert.map[i];
        }
        return Ok(EmbeddingCertificate {
            n,
            u: cert.u,
            sts: sts.triples.clone(),
            design,
            map,
            seed: Some(seed),
        });
    }
    Err(Error::SearchExhausted(format!(
        "input STS({n}) matches none of the fixed embeddings"
    )))
}

/// The single triple `{0,1,2}` becomes the triangle of a sun in a 3SS(9).
fn embed_three(
    sts: &TripleSystem,
    factory: &SunFactory,
    seed: u64,
) -> Result<EmbeddingCertificate> {
    let d = factory.sun_system(9)?;
    let [a, b, c] = d.blocks[0].triangle_of();
    let mut order = vec![a, b, c];
    order.extend((0..9).filter(|x| ![a, b, c].contains(x)));
    let mut f = vec![0; 9];
    for (k, &x) in order.iter().enumerate() {
        f[x as usize] = k as Point;
    }
    Ok(EmbeddingCertificate {
        n: 3,
        u: 6,
        sts: sts.triples.clone(),
        design: relabel(&d, &f)?,
        map: vec![0],
        seed: Some(seed),
    })
}

/// Embeds `sts` into a 3SS of order `n + u_min(n)` and verifies the result.
pub fn embed(sts: &TripleSystem, factory: &SunFactory, seed: u64) -> Result<EmbeddingCertificate> {
    sts.validate()?;
    let n = sts.order;
    let r = route(n)?;
    debug!("n = {n}: route {}", r.name());
    let cert = match r {
        Route::Trivial => EmbeddingCertificate {
            n,
            u: 0,
            sts: Vec::new(),
            design: Design::complete(n, Vec::new()),
            map: Vec::new(),
            seed: Some(seed),
        },
        Route::Exceptional => embed_exceptional(sts, factory, seed)?,
        Route::FullColouring => embed_case_i(sts, factory, seed)?,
        Route::Kirkman => embed_kts_route(sts, seed)?,
        Route::Table => embed_small_table(sts, seed)?,
        Route::BullDesign => embed_case_ii_large(sts, seed)?,
    };
    let report = verify_embedding(&cert);
    if !report.is_ok() {
        return Err(Error::Verification(report.violations.join("; ")));
    }
    Ok(cert)
}
