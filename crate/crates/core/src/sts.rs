//! Steiner triple systems: generators, Kirkman resolutions, incidence graphs
//! and isomorphism search.

use serde::{Deserialize, Serialize};

use crate::design::{verify_decomposition, Block, BlockKind, Design, Host, Point};
use crate::error::{Error, Result};
use crate::matching::BipartiteGraph;
use crate::notation::BlockFile;

pub type Triple = [Point; 3];

/// An STS on points `0..order`, optionally with a resolution into parallel
/// classes (each class a list of triple indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSystem {
    pub order: u32,
    pub triples: Vec<Triple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<Vec<usize>>>,
}

/// `n ≡ 1, 3 (mod 6)`.
pub fn is_sts_order(n: u32) -> bool {
    n % 6 == 1 || n % 6 == 3
}

impl TripleSystem {
    pub fn new(order: u32, triples: Vec<Triple>) -> Self {
        TripleSystem {
            order,
            triples,
            resolution: None,
        }
    }

    /// Checks that every pair lies in exactly one triple, and that the
    /// resolution, if any, is one.
    pub fn validate(&self) -> Result<()> {
        let n = self.order as usize;
        let mut seen = vec![0u8; n * n];
        for t in &self.triples {
            if t.iter().any(|&x| x as usize >= n) {
                return Err(Error::Verification(format!(
                    "triple {t:?} has a label outside 0..{n}"
                )));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Verification(format!("degenerate triple {t:?}")));
            }
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                let (a, b) = (a.min(b) as usize, a.max(b) as usize);
                seen[a * n + b] += 1;
                if seen[a * n + b] > 1 {
                    return Err(Error::Verification(format!(
                        "pair {a}-{b} lies in two triples"
                    )));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if seen[a * n + b] == 0 {
                    return Err(Error::Verification(format!("pair {a}-{b} is uncovered")));
                }
            }
        }
        if let Some(res) = &self.resolution {
            validate_resolution(self, res)?;
        }
        Ok(())
    }

    /// The triples as a triangle decomposition of `K_order`.
    pub fn as_design(&self) -> Design {
        let blocks = self
            .triples
            .iter()
            .map(|t| Block::triangle(t[0], t[1], t[2]).expect("validated triple"))
            .collect();
        Design::complete(self.order, blocks)
    }

    /// Reads a triangle design: every block must be a triangle on `K_m`.
    pub fn from_design(d: &Design) -> Result<Self> {
        if d.host != Host::Complete {
            return Err(Error::Precondition(
                "a triple system lives on a complete host".into(),
            ));
        }
        let triples = d
            .blocks
            .iter()
            .map(|b| match b.kind() {
                BlockKind::Triangle => Ok(b.triangle_of()),
                k => Err(Error::Precondition(format!(
                    "{k:?} block in a triple system"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TripleSystem::new(d.points, triples))
    }

    /// Design JSON with a `resolution` array giving each block's class.
    pub fn to_design_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            design: &'a Design,
            #[serde(skip_serializing_if = "Option::is_none")]
            resolution: Option<Vec<usize>>,
        }
        let resolution = self.resolution.as_ref().map(|classes| {
            let mut of = vec![0; self.triples.len()];
            for (c, class) in classes.iter().enumerate() {
                for &t in class {
                    of[t] = c;
                }
            }
            of
        });
        Ok(serde_json::to_string_pretty(&Out {
            design: &self.as_design(),
            resolution,
        })?)
    }

    /// Accepts either design JSON (optionally with `resolution`) or the
    /// `{"order": .., "triples": ..}` form.
    pub fn from_json(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        if value.get("triples").is_some() {
            let sts: TripleSystem = serde_json::from_value(value)?;
            return Ok(sts);
        }
        #[derive(Deserialize)]
        struct In {
            #[serde(flatten)]
            design: Design,
            #[serde(default)]
            resolution: Option<Vec<usize>>,
        }
        let input: In = serde_json::from_value(value)?;
        let mut sts = TripleSystem::from_design(&input.design)?;
        if let Some(of) = input.resolution {
            if of.len() != sts.triples.len() {
                return Err(Error::Precondition(format!(
                    "resolution lists {} classes for {} triples",
                    of.len(),
                    sts.triples.len()
                )));
            }
            let classes = of.iter().copied().max().map_or(0, |m| m + 1);
            let mut res = vec![Vec::new(); classes];
            for (t, &c) in of.iter().enumerate() {
                res[c].push(t);
            }
            sts.resolution = Some(res);
        }
        Ok(sts)
    }

    /// Parses the bracket notation; only triangles are allowed.
    pub fn from_text(s: &str) -> Result<Self> {
        TripleSystem::from_design(&BlockFile::parse(s)?.into_design()?)
    }

    /// Relabels points by `f` (`f[x]` is the image of `x`).
    pub fn relabel(&self, f: &[Point]) -> Result<Self> {
        crate::design::check_permutation(self.order, f)?;
        Ok(TripleSystem {
            order: self.order,
            triples: self
                .triples
                .iter()
                .map(|t| [f[t[0] as usize], f[t[1] as usize], f[t[2] as usize]])
                .collect(),
            resolution: self.resolution.clone(),
        })
    }

    /// Index of the triple equal to `t` as a set.
    pub fn position(&self, t: &Triple) -> Option<usize> {
        let key = sorted(*t);
        self.triples.iter().position(|u| sorted(*u) == key)
    }
}

fn sorted(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

fn validate_resolution(s: &TripleSystem, res: &[Vec<usize>]) -> Result<()> {
    let n = s.order as usize;
    if !n.is_multiple_of(3) {
        return Err(Error::Verification(format!(
            "order {n} cannot be resolvable"
        )));
    }
    let mut class_of = vec![None; s.triples.len()];
    for (c, class) in res.iter().enumerate() {
        if class.len() != n / 3 {
            return Err(Error::Verification(format!(
                "class {c} has {} triples, expected {}",
                class.len(),
                n / 3
            )));
        }
        let mut hit = vec![false; n];
        for &t in class {
            let triple = s.triples.get(t).ok_or_else(|| {
                Error::Verification(format!("class {c} names triple {t}, which does not exist"))
            })?;
            if class_of[t].replace(c).is_some() {
                return Err(Error::Verification(format!("triple {t} in two classes")));
            }
            for &x in triple {
                if std::mem::replace(&mut hit[x as usize], true) {
                    return Err(Error::Verification(format!(
                        "class {c} covers point {x} twice"
                    )));
                }
            }
        }
    }
    if class_of.iter().any(Option::is_none) {
        return Err(Error::Verification("resolution misses some triple".into()));
    }
    Ok(())
}

/// Bose construction of an STS(n), `n ≡ 3 (mod 6)`, on `Z_{2t+1} × Z_3`
/// with the idempotent commutative quasigroup `x∘y = (t+1)(x+y)`.
pub fn bose(n: u32) -> Result<TripleSystem> {
    if n % 6 != 3 {
        return Err(Error::inadmissible(n, "Bose needs n ≡ 3 (mod 6)"));
    }
    let q = n / 3;
    let half = q.div_ceil(2); // inverse of 2 mod q
    let op = |x: u32, y: u32| ((x + y) * half) % q;
    let p = |x: u32, level: u32| x + q * (level % 3);
    let mut triples = Vec::with_capacity((n * (n - 1) / 6) as usize);
    for x in 0..q {
        triples.push([p(x, 0), p(x, 1), p(x, 2)]);
    }
    for level in 0..3 {
        for x in 0..q {
            for y in x + 1..q {
                triples.push([p(x, level), p(y, level), p(op(x, y), level + 1)]);
            }
        }
    }
    Ok(TripleSystem::new(n, triples))
}

/// Skolem construction of an STS(n), `n ≡ 1 (mod 6)`, on
/// `{∞} ∪ Z_{2t} × Z_3` with a half-idempotent commutative quasigroup.
/// The point `∞` is labelled `n − 1`.
pub fn skolem(n: u32) -> Result<TripleSystem> {
    if n % 6 != 1 {
        return Err(Error::inadmissible(n, "Skolem needs n ≡ 1 (mod 6)"));
    }
    if n == 1 {
        return Ok(TripleSystem::new(1, Vec::new()));
    }
    let t = (n - 1) / 6;
    let q = 2 * t;
    // x∘y: the even sum 2i maps to i, the odd sum 2i+1 to t+i
    let op = |x: u32, y: u32| {
        let s = (x + y) % q;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            t + s / 2
        }
    };
    let inf = n - 1;
    let p = |x: u32, level: u32| x + q * (level % 3);
    let mut triples = Vec::with_capacity((n * (n - 1) / 6) as usize);
    for x in 0..t {
        triples.push([p(x, 0), p(x, 1), p(x, 2)]);
    }
    for x in 0..t {
        for level in 0..3 {
            triples.push([inf, p(t + x, level), p(x, level + 1)]);
        }
    }
    for level in 0..3 {
        for x in 0..q {
            for y in x + 1..q {
                triples.push([p(x, level), p(y, level), p(op(x, y), level + 1)]);
            }
        }
    }
    Ok(TripleSystem::new(n, triples))
}

/// Any admissible order: Bose or Skolem, with STS(1) and STS(3) trivial.
pub fn standard_sts(n: u32) -> Result<TripleSystem> {
    match n % 6 {
        1 => skolem(n),
        3 => bose(n),
        _ => Err(Error::inadmissible(n, "an STS needs n ≡ 1, 3 (mod 6)")),
    }
}

/// The two isomorphism classes of STS(13).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sts13Class {
    Cyclic,
    Noncyclic,
}

/// Cyclic STS(13): orbits of `{0,1,4}` and `{0,2,7}` under `Z_13`. The
/// non-cyclic one swaps four of its triples for four others on the same
/// pairs.
pub fn fixed_sts13(which: Sts13Class) -> TripleSystem {
    let mut triples = Vec::with_capacity(26);
    for base in [[0, 1, 4], [0, 2, 7]] {
        for i in 0..13 {
            triples.push(base.map(|x| (x + i) % 13));
        }
    }
    let mut sts = TripleSystem::new(13, triples);
    if which == Sts13Class::Noncyclic {
        let out: [Triple; 4] = [[0, 1, 4], [0, 2, 7], [2, 4, 9], [7, 9, 1]];
        let into: [Triple; 4] = [[9, 1, 4], [9, 2, 7], [0, 2, 4], [0, 1, 7]];
        for (old, new) in out.iter().zip(into) {
            let i = sts.position(old).expect("triple of the cyclic system");
            sts.triples[i] = new;
        }
    }
    sts
}

/// Kirkman triple system on `Z_q × Z_3` (`v = 3q`, point `(x, l)` labelled
/// `x + q·l`) with `Z_q` acting on the first coordinate.
///
/// `(q−1)/2` classes are fixed by `Z_q`, each the orbit of a transversal
/// `{0_0, x_1, y_2}`; the other `q` classes are the translates of one base
/// class. Base class and transversals together cover every pair orbit
/// exactly once and are found by depth-first search.
pub fn cyclic_kts(v: u32) -> Result<TripleSystem> {
    if v % 6 != 3 {
        return Err(Error::inadmissible(v, "a KTS needs v ≡ 3 (mod 6)"));
    }
    let q = v / 3;
    let mut search = KtsSearch::new(q);
    if !search.base_class() {
        return Err(Error::SearchExhausted(format!(
            "no cyclic Kirkman system for v = {v}"
        )));
    }
    let label = |(x, l): (u32, u32)| x % q + q * l;
    let mut triples = Vec::new();
    let mut resolution = Vec::new();
    for &(x, y) in &search.transversals {
        let mut class = Vec::new();
        for i in 0..q {
            class.push(triples.len());
            triples.push([label((i, 0)), label((x + i, 1)), label((y + i, 2))]);
        }
        resolution.push(class);
    }
    for i in 0..q {
        let mut class = Vec::new();
        for t in &search.base {
            class.push(triples.len());
            triples.push(t.map(|(x, l)| label((x + i, l))));
        }
        resolution.push(class);
    }
    Ok(TripleSystem {
        order: v,
        triples,
        resolution: Some(resolution),
    })
}

type LevelPoint = (u32, u32);

struct KtsSearch {
    q: u32,
    h: u32,
    covered: Vec<bool>,
    used: Vec<bool>,
    base: Vec<[LevelPoint; 3]>,
    transversals: Vec<(u32, u32)>,
}

impl KtsSearch {
    fn new(q: u32) -> Self {
        let h = (q - 1) / 2;
        KtsSearch {
            q,
            h,
            covered: vec![false; 3 * q as usize],
            used: vec![false; (3 * h + 3 * q) as usize],
            base: Vec::new(),
            transversals: Vec::new(),
        }
    }

    /// Orbit id of the pair `{a, b}` under `Z_q`: pure orbits first, then
    /// mixed orbits for level pairs 01, 02, 12.
    fn orbit(&self, a: LevelPoint, b: LevelPoint) -> usize {
        let (q, h) = (self.q, self.h);
        let (a, b) = if a.1 <= b.1 { (a, b) } else { (b, a) };
        let d = (b.0 + q - a.0) % q;
        if a.1 == b.1 {
            (a.1 * h + d.min(q - d) - 1) as usize
        } else {
            let pair = a.1 + b.1 - 1;
            (3 * h + pair * q + d) as usize
        }
    }

    fn mixed_used(&self, pair: u32) -> usize {
        let start = (3 * self.h + pair * self.q) as usize;
        self.used[start..start + self.q as usize]
            .iter()
            .filter(|&&u| u)
            .count()
    }

    fn base_class(&mut self) -> bool {
        let (q, h) = (self.q, self.h);
        let free: Vec<LevelPoint> = (0..3 * q)
            .filter(|&p| !self.covered[p as usize])
            .map(|p| (p % q, p / q))
            .collect();
        if free.is_empty() {
            return self.fixed_classes();
        }
        if (0..3).any(|pair| self.mixed_used(pair) > (q - h) as usize) {
            return false;
        }
        let pure_left = self.used[..(3 * h) as usize]
            .iter()
            .filter(|&&u| !u)
            .count();
        if pure_left > free.len() {
            return false;
        }
        let p = free[0];
        for (i, &a) in free.iter().enumerate().skip(1) {
            for &b in &free[i + 1..] {
                let os = [self.orbit(p, a), self.orbit(a, b), self.orbit(p, b)];
                if os[0] == os[1] || os[1] == os[2] || os[0] == os[2] {
                    continue;
                }
                if os.iter().any(|&o| self.used[o]) {
                    continue;
                }
                self.mark(&os, &[p, a, b], true);
                self.base.push([p, a, b]);
                if self.base_class() {
                    return true;
                }
                self.base.pop();
                self.mark(&os, &[p, a, b], false);
            }
        }
        false
    }

    fn mark(&mut self, orbits: &[usize], pts: &[LevelPoint], on: bool) {
        for &o in orbits {
            self.used[o] = on;
        }
        for &(x, l) in pts {
            self.covered[(x + self.q * l) as usize] = on;
        }
    }

    fn fixed_classes(&mut self) -> bool {
        let q = self.q;
        if self.used[..(3 * self.h) as usize].iter().any(|&u| !u) {
            return false;
        }
        let Some(x) = (0..q).find(|&x| !self.used[self.orbit((0, 0), (x, 1))]) else {
            return true;
        };
        for y in 0..q {
            let os = [
                self.orbit((0, 0), (x, 1)),
                self.orbit((0, 0), (y, 2)),
                self.orbit((x, 1), (y, 2)),
            ];
            if os.iter().any(|&o| self.used[o]) {
                continue;
            }
            self.mark(&os, &[], true);
            self.transversals.push((x, y));
            if self.fixed_classes() {
                return true;
            }
            self.transversals.pop();
            self.mark(&os, &[], false);
        }
        false
    }
}

const KTS21: &str = include_str!("../data/kts/kts-21.json");
const KTS33: &str = include_str!("../data/kts/kts-33.json");

/// A Kirkman triple system of order 9, 21 or 33 with its resolution.
/// Orders 21 and 33 come from the bundled data files.
pub fn kts_small(v: u32) -> Result<TripleSystem> {
    let kts = match v {
        9 => cyclic_kts(9)?,
        21 => TripleSystem::from_json(KTS21)?,
        33 => TripleSystem::from_json(KTS33)?,
        _ => {
            return Err(Error::inadmissible(
                v,
                "bundled Kirkman systems exist for 9, 21 and 33 only",
            ))
        }
    };
    kts.validate()?;
    debug_assert!(verify_decomposition(&kts.as_design()).is_ok());
    Ok(kts)
}

/// Points on the left, triples on the right; triple `t` contributes edges
/// `3t, 3t+1, 3t+2` in notation order.
pub fn incidence_graph(s: &TripleSystem) -> BipartiteGraph {
    let mut g = BipartiteGraph::new(s.order, s.triples.len() as u32);
    for (i, t) in s.triples.iter().enumerate() {
        for &x in t {
            g.add_edge(x, i as u32);
        }
    }
    g
}

/// A point bijection `f` with `f(t) ∈ b` for every triple `t ∈ a`.
pub fn sts_isomorphism(a: &TripleSystem, b: &TripleSystem) -> Option<Vec<Point>> {
    if a.order != b.order || a.triples.len() != b.triples.len() {
        return None;
    }
    let n = a.order as usize;
    let third = |s: &TripleSystem| {
        let mut tab = vec![u32::MAX; n * n];
        for t in &s.triples {
            for (x, y, z) in [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[0], t[2], t[1])] {
                tab[x as usize * n + y as usize] = z;
                tab[y as usize * n + x as usize] = z;
            }
        }
        tab
    };
    let (ta, tb) = (third(a), third(b));
    if ta
        .iter()
        .enumerate()
        .any(|(i, &z)| z == u32::MAX && i / n != i % n)
        || tb
            .iter()
            .enumerate()
            .any(|(i, &z)| z == u32::MAX && i / n != i % n)
    {
        return None;
    }

    struct Ctx<'a> {
        n: usize,
        ta: &'a [u32],
        tb: &'a [u32],
    }

    impl Ctx<'_> {
        /// Closes `f` under "the third point of a mapped pair is forced".
        fn propagate(&self, f: &mut [Option<u32>], inv: &mut [Option<u32>]) -> bool {
            loop {
                let mut changed = false;
                let mapped: Vec<usize> = (0..self.n).filter(|&x| f[x].is_some()).collect();
                for (i, &x) in mapped.iter().enumerate() {
                    for &y in &mapped[i + 1..] {
                        let z = self.ta[x * self.n + y] as usize;
                        let (fx, fy) = (f[x].unwrap() as usize, f[y].unwrap() as usize);
                        let fz = self.tb[fx * self.n + fy];
                        match f[z] {
                            Some(w) if w != fz => return false,
                            Some(_) => {}
                            None => {
                                if inv[fz as usize].is_some() {
                                    return false;
                                }
                                f[z] = Some(fz);
                                inv[fz as usize] = Some(z as u32);
                                changed = true;
                            }
                        }
                    }
                }
                if !changed {
                    return true;
                }
            }
        }

        fn extend(&self, f: &mut Vec<Option<u32>>, inv: &mut Vec<Option<u32>>) -> bool {
            if !self.propagate(f, inv) {
                return false;
            }
            let Some(x) = (0..self.n).find(|&x| f[x].is_none()) else {
                return true;
            };
            for y in 0..self.n {
                if inv[y].is_some() {
                    continue;
                }
                let (saved_f, saved_inv) = (f.clone(), inv.clone());
                f[x] = Some(y as u32);
                inv[y] = Some(x as u32);
                if self.extend(f, inv) {
                    return true;
                }
                *f = saved_f;
                *inv = saved_inv;
            }
            false
        }
    }

    let ctx = Ctx {
        n,
        ta: &ta,
        tb: &tb,
    };
    let mut f = vec![None; n];
    let mut inv = vec![None; n];
    if !ctx.extend(&mut f, &mut inv) {
        return None;
    }
    let f: Vec<Point> = f.into_iter().map(|x| x.expect("complete map")).collect();
    // exhaustive final check
    let ok = a
        .triples
        .iter()
        .all(|t| b.position(&t.map(|x| f[x as usize])).is_some());
    ok.then_some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent pair-coverage count, kept apart from `validate`.
    fn pair_counts(s: &TripleSystem) -> Vec<usize> {
        let n = s.order as usize;
        let mut c = vec![0; n * n];
        for t in &s.triples {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        c[t[i] as usize * n + t[j] as usize] += 1;
                    }
                }
            }
        }
        c
    }

    fn assert_sts(s: &TripleSystem) {
        let n = s.order as usize;
        assert_eq!(s.triples.len(), n * (n - 1) / 6);
        let c = pair_counts(s);
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    assert_eq!(c[a * n + b], 1, "pair {a},{b}");
                }
            }
        }
        s.validate().unwrap();
    }

    #[test]
    fn bose_small_orders() {
        let s3 = bose(3).unwrap();
        assert_eq!(s3.triples.len(), 1);
        assert_eq!(sorted(s3.triples[0]), [0, 1, 2]);
        for n in [9, 15, 21, 27, 33] {
            assert_sts(&bose(n).unwrap());
        }
        assert_eq!(bose(9).unwrap().triples.len(), 12);
        assert_eq!(bose(15).unwrap().triples.len(), 35);
        assert!(bose(7).is_err());
    }

    #[test]
    fn skolem_small_orders() {
        for (n, count) in [(7, 7), (13, 26), (19, 57), (25, 100), (31, 155)] {
            let s = skolem(n).unwrap();
            assert_eq!(s.triples.len(), count);
            assert_sts(&s);
        }
        assert!(skolem(9).is_err());
    }

    #[test]
    fn generators_cover_all_orders_below_100() {
        for n in (3..100).filter(|&n| is_sts_order(n)) {
            assert_sts(&standard_sts(n).unwrap());
        }
    }

    #[test]
    fn sts13_classes() {
        let c = fixed_sts13(Sts13Class::Cyclic);
        let nc = fixed_sts13(Sts13Class::Noncyclic);
        assert_sts(&c);
        assert_sts(&nc);
        for i in 0..13 {
            assert!(c.position(&[i, (i + 1) % 13, (i + 4) % 13]).is_some());
        }
        assert!(nc.position(&[9, 1, 4]).is_some());
        assert!(nc.position(&[0, 1, 4]).is_none());
        assert!(sts_isomorphism(&c, &nc).is_none());
        assert!(sts_isomorphism(&nc, &c).is_none());
    }

    #[test]
    fn isomorphism_maps_triples_onto_triples() {
        let a = bose(9).unwrap();
        let b = cyclic_kts(9).unwrap();
        let f = sts_isomorphism(&a, &b).expect("STS(9) is unique");
        for t in &a.triples {
            assert!(b.position(&t.map(|x| f[x as usize])).is_some());
        }
        let id = sts_isomorphism(&a, &a).unwrap();
        assert_eq!(id, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn isomorphism_with_skolem_thirteen() {
        let s = skolem(13).unwrap();
        let hits = [Sts13Class::Cyclic, Sts13Class::Noncyclic]
            .iter()
            .filter(|&&c| sts_isomorphism(&s, &fixed_sts13(c)).is_some())
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn kirkman_systems() {
        for (v, classes) in [(9, 4), (21, 10), (33, 16)] {
            let k = kts_small(v).unwrap();
            assert_sts(&k);
            let res = k.resolution.as_ref().unwrap();
            assert_eq!(res.len(), classes);
            assert!(res.iter().all(|c| c.len() == v as usize / 3));
        }
        assert!(kts_small(15).is_err());
    }

    #[test]
    fn bundled_kts_files_match_the_search() {
        for v in [21, 33] {
            assert_eq!(kts_small(v).unwrap(), cyclic_kts(v).unwrap());
        }
    }

    #[test]
    fn broken_resolution_is_rejected() {
        let mut k = cyclic_kts(9).unwrap();
        let res = k.resolution.as_mut().unwrap();
        let t = res[0].pop().unwrap();
        res[1].push(t);
        assert!(k.validate().is_err());
    }

    #[test]
    fn incidence_degrees() {
        let g = incidence_graph(&skolem(7).unwrap());
        assert_eq!(g.edge_count(), 21);
        assert_eq!(g.max_degree(), 3);
        let g9 = incidence_graph(&bose(9).unwrap());
        assert!(g9.left_degrees().iter().all(|&d| d == 4));
        assert!(g9.right_degrees().iter().all(|&d| d == 3));
        let g3 = incidence_graph(&bose(3).unwrap());
        assert_eq!(
            (g3.left_count(), g3.right_count(), g3.edge_count()),
            (3, 1, 3)
        );
    }

    #[test]
    fn json_and_text_forms() {
        let k = cyclic_kts(9).unwrap();
        let again = TripleSystem::from_json(&k.to_design_json().unwrap()).unwrap();
        assert_eq!(again.triples, k.triples);
        assert_eq!(again.resolution.as_ref().unwrap().len(), 4);

        let plain = r#"{"order": 3, "triples": [[0,1,2]]}"#;
        assert_eq!(TripleSystem::from_json(plain).unwrap().triples.len(), 1);

        let s = TripleSystem::from_text(
            "(0,1,2)\n(0,3,4), (0,5,6)\n(1,3,5)\n(1,4,6)\n(2,3,6)\n(2,4,5)\n",
        )
        .unwrap();
        assert_eq!(s.order, 7);
        s.validate().unwrap();
        assert!(TripleSystem::from_text("(0,1,2;3)").is_err());
    }
}
