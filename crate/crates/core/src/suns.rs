//! 3-sun systems of admissible orders: randomized search, exhaustive
//! fallback for small orders, and an on-disk cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use arrayvec::ArrayVec;
use log::{debug, warn};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::{verify_decomposition, Block, BlockKind, Design, Point};
use crate::error::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SUNWEAVE_CACHE_DIR";

/// Seed used when the caller gives none.
pub const DEFAULT_SEED: u64 = 0x5u64 << 32 | 0x3535;

/// A 3SS(m) exists iff `m ≡ 0, 1, 4, 9 (mod 12)`, with `m = 4` excluded
/// (no room for a sun) and `m = 0, 1` the empty designs.
pub fn is_admissible(m: u32) -> bool {
    matches!(m % 12, 0 | 1 | 4 | 9) && m != 4
}

/// Number of suns in a 3SS(m).
pub fn sun_count(m: u32) -> usize {
    (m as usize * m.saturating_sub(1) as usize) / 12
}

/// Builds and caches 3-sun systems.
#[derive(Clone, Debug)]
pub struct SunFactory {
    cache_dir: Option<PathBuf>,
    seed: u64,
}

impl Default for SunFactory {
    fn default() -> Self {
        SunFactory::new(default_cache_dir(), DEFAULT_SEED)
    }
}

/// `$SUNWEAVE_CACHE_DIR`, else `sunweave-cache` in the system temp directory.
pub fn default_cache_dir() -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(d) if !d.is_empty() => Some(PathBuf::from(d)),
        _ => Some(std::env::temp_dir().join("sunweave-cache")),
    }
}

impl SunFactory {
    pub fn new(cache_dir: Option<PathBuf>, seed: u64) -> Self {
        SunFactory { cache_dir, seed }
    }

    /// No disk access at all.
    pub fn uncached(seed: u64) -> Self {
        SunFactory::new(None, seed)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    fn cache_path(&self, m: u32) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("3ss-{m}.json")))
    }

    /// A verified 3SS(m), from the cache when a valid entry exists.
    pub fn sun_system(&self, m: u32) -> Result<Design> {
        if !is_admissible(m) {
            return Err(Error::inadmissible(
                m,
                "a 3SS needs m ≡ 0, 1, 4, 9 (mod 12), m ≠ 4",
            ));
        }
        if m <= 1 {
            return Ok(Design::complete(m, Vec::new()));
        }
        if let Some(path) = self.cache_path(m) {
            match load_cached(&path, m) {
                Ok(Some(d)) => return Ok(d),
                Ok(None) => {}
                Err(e) => warn!("ignoring cache entry {}: {e}", path.display()),
            }
        }
        let d = search_sun_system(m, self.seed)?;
        if let Some(path) = self.cache_path(m) {
            if let Err(e) = store_atomically(&path, &d.to_json()?) {
                warn!("could not cache 3SS({m}) at {}: {e}", path.display());
            }
        }
        Ok(d)
    }
}

/// Shorthand for [`SunFactory::sun_system`] with the default factory.
pub fn sun_system(m: u32) -> Result<Design> {
    SunFactory::default().sun_system(m)
}

fn load_cached(path: &Path, m: u32) -> Result<Option<Design>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let d = Design::from_json(&text)?;
    check_sun_system(&d, m)?;
    Ok(Some(d))
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn store_atomically(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Confirms `d` is a complete 3SS(m).
pub fn check_sun_system(d: &Design, m: u32) -> Result<()> {
    if d.points != m {
        return Err(Error::Verification(format!(
            "design has {} points, expected {m}",
            d.points
        )));
    }
    if d.blocks.iter().any(|b| b.kind() != BlockKind::Sun) {
        return Err(Error::Verification(
            "design contains a non-sun block".into(),
        ));
    }
    let report = verify_decomposition(d);
    if !report.is_ok() {
        return Err(Error::Verification(report.violations().join("; ")));
    }
    if d.blocks.len() != sun_count(m) {
        return Err(Error::Verification(format!(
            "{} suns, expected {}",
            d.blocks.len(),
            sun_count(m)
        )));
    }
    Ok(())
}

/// Search without the cache. Orders `m ≡ 0, 1 (mod 12)` come from a
/// difference family; the rest from hill-climbing, then exhaustive search
/// when `m ≤ 16` and the climb gives up.
pub fn search_sun_system(m: u32, seed: u64) -> Result<Design> {
    if !is_admissible(m) {
        return Err(Error::inadmissible(
            m,
            "a 3SS needs m ≡ 0, 1, 4, 9 (mod 12), m ≠ 4",
        ));
    }
    if m <= 1 {
        return Ok(Design::complete(m, Vec::new()));
    }
    if let Some(blocks) = difference_sun_system(m) {
        let d = Design::complete(m, blocks);
        check_sun_system(&d, m)?;
        return Ok(d);
    }
    match hill_climb_sun_system(m, seed) {
        Ok(d) => return Ok(d),
        Err(e) => debug!("3SS({m}): {e}"),
    }
    if m <= 16 {
        if let Some(blocks) = backtrack_sun_system(m, 50_000_000) {
            let d = Design::complete(m, blocks);
            check_sun_system(&d, m)?;
            return Ok(d);
        }
    }
    Err(Error::SearchExhausted(format!("no 3SS({m}) found")))
}

/// Seeded randomized hill-climbing over partial sun packings.
pub fn hill_climb_sun_system(m: u32, seed: u64) -> Result<Design> {
    if m < 9 || !is_admissible(m) {
        return Err(Error::inadmissible(
            m,
            "hill-climbing needs an admissible m ≥ 9",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(m));
    // run times are heavy-tailed, so restart early with a growing budget
    let base_steps = 40 * sun_count(m) * m as usize;
    for restart in 0..40 {
        let steps = base_steps * (1 + restart / 4);
        if let Some(blocks) = HillClimb::new(m).run(&mut rng, steps) {
            let d = Design::complete(m, blocks);
            check_sun_system(&d, m)?;
            return Ok(d);
        }
    }
    Err(Error::SearchExhausted(format!(
        "hill-climbing found no 3SS({m})"
    )))
}

/// Develops base suns under `Z_g` acting on `Z_g × {0..L}`, plus a fixed
/// point `∞` when `m ≡ 0, 4 (mod 12)`:
///
/// | `m mod 12` | `g` | `L` | `∞` |
/// |---|---|---|---|
/// | 1 | `m` | 1 | no |
/// | 0 | `m − 1` | 1 | yes |
/// | 9 | `m / 3` | 3 | no |
/// | 4 | `(m − 1) / 3` | 3 | yes |
///
/// The point `(x, l)` is labelled `x + g·l` and `∞` is `m − 1`. Returns
/// `None` for `m < 9` or when the search budget runs out.
pub fn difference_sun_system(m: u32) -> Option<Vec<Block>> {
    if m < 9 || !is_admissible(m) {
        return None;
    }
    let (g, levels, with_inf) = match m % 12 {
        1 => (m, 1, false),
        0 => (m - 1, 1, true),
        9 => (m / 3, 3, false),
        _ => ((m - 1) / 3, 3, true),
    };
    let base = DifferenceSearch::new(g, levels, with_inf).run()?;
    let mut out = Vec::with_capacity(sun_count(m));
    for v in &base {
        for i in 0..g {
            let w = v.map(|x| {
                if x == INF {
                    m - 1
                } else {
                    (x % g + i) % g + x / g * g
                }
            });
            out.push(Block::sun(w).expect("distinct labels"));
        }
    }
    Some(out)
}

const INF: Point = Point::MAX;
const UNSET: Point = Point::MAX - 1;

/// Depth-first search for base suns whose edges meet every edge orbit
/// exactly once.
struct DifferenceSearch {
    g: u32,
    levels: u32,
    with_inf: bool,
    used: Vec<bool>,
    suns: Vec<[Point; 6]>,
    nodes: u64,
}

/// Vertex pairs of a sun's edges.
const SUN_EDGES: [(usize, usize); 6] = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)];

impl DifferenceSearch {
    fn new(g: u32, levels: u32, with_inf: bool) -> Self {
        let inf_orbits = if with_inf { levels } else { 0 };
        let orbits = levels * (g / 2) + levels * (levels - 1) / 2 * g + inf_orbits;
        DifferenceSearch {
            g,
            levels,
            with_inf,
            used: vec![false; orbits as usize],
            suns: Vec::new(),
            nodes: 0,
        }
    }

    fn pure_count(&self) -> u32 {
        self.levels * (self.g / 2)
    }

    fn mixed_count(&self) -> u32 {
        self.levels * (self.levels - 1) / 2 * self.g
    }

    /// Orbit index of the edge `{a, b}`: pure, then mixed, then `∞` edges.
    fn orbit(&self, a: Point, b: Point) -> usize {
        let g = self.g;
        if a == INF || b == INF {
            let f = if a == INF { b } else { a };
            return (self.pure_count() + self.mixed_count() + f / g) as usize;
        }
        let (a, b) = if a / g <= b / g { (a, b) } else { (b, a) };
        let (la, lb) = (a / g, b / g);
        let d = (b % g + g - a % g) % g;
        if la == lb {
            (la * (g / 2) + d.min(g - d) - 1) as usize
        } else {
            let pair = if la == 0 { lb - 1 } else { 2 };
            (self.pure_count() + pair * g + d) as usize
        }
    }

    /// A representative edge `(p, q)` of orbit `o` with `p` at `x = 0`.
    fn representative(&self, o: usize) -> (Point, Point) {
        let g = self.g;
        let o = o as u32;
        let (pure, mixed) = (self.pure_count(), self.mixed_count());
        if o < pure {
            let (l, d) = (o / (g / 2), o % (g / 2) + 1);
            (l * g, d + l * g)
        } else if o < pure + mixed {
            let (pair, d) = ((o - pure) / g, (o - pure) % g);
            let (la, lb) = [(0, 1), (0, 2), (1, 2)][pair as usize];
            (la * g, d + lb * g)
        } else {
            ((o - pure - mixed) * g, INF)
        }
    }

    /// `p` translated so that its first coordinate is 0.
    fn at_zero(&self, p: Point, q: Point) -> (Point, Point) {
        if p == INF {
            return (p, q);
        }
        let shift = self.g - p % self.g;
        let t = |x: Point| {
            if x == INF {
                x
            } else {
                (x % self.g + shift) % self.g + x / self.g * self.g
            }
        };
        (t(p), t(q))
    }

    fn run(mut self) -> Option<Vec<[Point; 6]>> {
        self.next_sun().then_some(self.suns)
    }

    /// The next base sun contains the first unused orbit, either as the
    /// triangle edge at positions 0, 1 or as the pendant at position 0.
    fn next_sun(&mut self) -> bool {
        let Some(o) = self.used.iter().position(|&u| !u) else {
            return true;
        };
        self.nodes += 1;
        if self.nodes > 5_000_000 {
            return false;
        }
        let (p, q) = self.representative(o);
        let (q2, p2) = self.at_zero(q, p);
        let starts = [
            [p, q, UNSET, UNSET, UNSET, UNSET],
            [p, UNSET, UNSET, q, UNSET, UNSET],
            [q2, UNSET, UNSET, p2, UNSET, UNSET],
        ];
        for mut v in starts {
            if self.fill(&mut v, 1) {
                return true;
            }
        }
        false
    }

    fn candidates(&self) -> impl Iterator<Item = Point> {
        let finite = 0..self.g * self.levels;
        finite.chain(self.with_inf.then_some(INF))
    }

    /// Assigns positions `pos..6` of `v`, then continues with the next sun.
    fn fill(&mut self, v: &mut [Point; 6], pos: usize) -> bool {
        if pos == 6 {
            self.suns.push(*v);
            if self.next_sun() {
                return true;
            }
            self.suns.pop();
            return false;
        }
        if v[pos] != UNSET {
            return match self.claim(v, pos) {
                Some(os) => {
                    let ok = self.fill(v, pos + 1);
                    self.release(&os);
                    ok
                }
                None => false,
            };
        }
        let candidates: Vec<Point> = self.candidates().collect();
        for x in candidates {
            if v.contains(&x) {
                continue;
            }
            v[pos] = x;
            if let Some(os) = self.claim(v, pos) {
                if self.fill(v, pos + 1) {
                    return true;
                }
                self.release(&os);
            }
            v[pos] = UNSET;
        }
        false
    }

    /// Marks the orbits of the edges ending at `pos` whose other end is set.
    fn claim(&mut self, v: &[Point; 6], pos: usize) -> Option<ArrayVec<usize, 3>> {
        let mut os = ArrayVec::<usize, 3>::new();
        for &(a, b) in &SUN_EDGES {
            if a.max(b) != pos || v[a.min(b)] == UNSET {
                continue;
            }
            let o = self.orbit(v[a], v[b]);
            if self.used[o] || os.contains(&o) {
                return None;
            }
            os.push(o);
        }
        for &o in &os {
            self.used[o] = true;
        }
        Some(os)
    }

    fn release(&mut self, os: &[usize]) {
        for &o in os {
            self.used[o] = false;
        }
    }
}

/// Proposals sampled per step; the first collision-free one wins.
const PROPOSALS: usize = 6;

/// Partial sun packing with collision-driven eviction.
struct HillClimb {
    m: u32,
    /// Block index covering each edge, row-major over ordered pairs.
    owner: Vec<Option<usize>>,
    blocks: Vec<Option<[Point; 6]>>,
    free_slots: Vec<usize>,
    /// Uncovered edges with their positions for O(1) removal.
    uncovered: Vec<(Point, Point)>,
    position: Vec<Option<usize>>,
}

impl HillClimb {
    fn new(m: u32) -> Self {
        let n = m as usize;
        let mut hc = HillClimb {
            m,
            owner: vec![None; n * n],
            blocks: Vec::new(),
            free_slots: Vec::new(),
            uncovered: Vec::new(),
            position: vec![None; n * n],
        };
        for a in 0..m {
            for b in a + 1..m {
                hc.mark_uncovered(a, b);
            }
        }
        hc
    }

    fn idx(&self, a: Point, b: Point) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        a as usize * self.m as usize + b as usize
    }

    fn mark_uncovered(&mut self, a: Point, b: Point) {
        let i = self.idx(a, b);
        self.position[i] = Some(self.uncovered.len());
        self.uncovered.push((a.min(b), a.max(b)));
    }

    fn mark_covered(&mut self, a: Point, b: Point) {
        let i = self.idx(a, b);
        let pos = self.position[i].take().expect("edge was uncovered");
        self.uncovered.swap_remove(pos);
        if let Some(&(x, y)) = self.uncovered.get(pos) {
            let j = self.idx(x, y);
            self.position[j] = Some(pos);
        }
    }

    fn is_free(&self, a: Point, b: Point) -> bool {
        self.owner[self.idx(a, b)].is_none()
    }

    fn sun_edges(v: &[Point; 6]) -> [(Point, Point); 6] {
        [
            (v[0], v[1]),
            (v[1], v[2]),
            (v[0], v[2]),
            (v[0], v[3]),
            (v[1], v[4]),
            (v[2], v[5]),
        ]
    }

    fn remove(&mut self, id: usize) {
        let v = self.blocks[id].take().expect("live block");
        for (a, b) in Self::sun_edges(&v) {
            let i = self.idx(a, b);
            self.owner[i] = None;
            self.mark_uncovered(a, b);
        }
        self.free_slots.push(id);
    }

    fn insert(&mut self, v: [Point; 6]) {
        let id = self.free_slots.pop().unwrap_or_else(|| {
            self.blocks.push(None);
            self.blocks.len() - 1
        });
        for (a, b) in Self::sun_edges(&v) {
            let i = self.idx(a, b);
            debug_assert!(self.owner[i].is_none());
            self.owner[i] = Some(id);
            self.mark_covered(a, b);
        }
        self.blocks[id] = Some(v);
    }

    /// A vertex outside `avoid`, joined to `to` by a free edge when possible.
    fn pick_partner<R: Rng>(&self, rng: &mut R, to: Point, avoid: &[Point]) -> Point {
        let free: Vec<Point> = (0..self.m)
            .filter(|&w| !avoid.contains(&w) && self.is_free(to, w))
            .collect();
        if let Some(&w) = free.choose(rng) {
            return w;
        }
        loop {
            let w = rng.gen_range(0..self.m);
            if !avoid.contains(&w) {
                return w;
            }
        }
    }

    /// A random sun through the edge `{x, y}`, preferring free edges.
    fn propose<R: Rng>(&self, rng: &mut R, x: Point, y: Point) -> [Point; 6] {
        let (x, y) = if rng.gen() { (x, y) } else { (y, x) };
        if rng.gen_bool(0.5) {
            // {x, y} as a triangle edge
            let common: Vec<Point> = (0..self.m)
                .filter(|&z| z != x && z != y && self.is_free(x, z) && self.is_free(y, z))
                .collect();
            let z = match common.choose(rng) {
                Some(&z) => z,
                None => self.pick_partner(rng, x, &[x, y]),
            };
            let mut v = [x, y, z, 0, 0, 0];
            for i in 0..3 {
                let avoid: Vec<Point> = v[..3 + i].to_vec();
                v[3 + i] = self.pick_partner(rng, v[i], &avoid);
            }
            v
        } else {
            // {x, y} as a pendant with tip y
            let b = self.pick_partner(rng, x, &[x, y]);
            let mut c_opts: Vec<Point> = (0..self.m)
                .filter(|&c| c != x && c != y && c != b && self.is_free(x, c) && self.is_free(b, c))
                .collect();
            if c_opts.is_empty() {
                c_opts = (0..self.m)
                    .filter(|&c| c != x && c != y && c != b)
                    .collect();
            }
            let c = *c_opts.choose(rng).expect("m ≥ 9");
            let e = self.pick_partner(rng, b, &[x, b, c, y]);
            let f = self.pick_partner(rng, c, &[x, b, c, y, e]);
            [x, b, c, y, e, f]
        }
    }

    fn run<R: Rng>(mut self, rng: &mut R, max_steps: usize) -> Option<Vec<Block>> {
        for _ in 0..max_steps {
            if self.uncovered.is_empty() {
                return Some(
                    self.blocks
                        .iter()
                        .flatten()
                        .map(|v| Block::sun(*v).expect("distinct labels"))
                        .collect(),
                );
            }
            let (x, y) = *self.uncovered.choose(rng).expect("nonempty");
            let mut best: Option<([Point; 6], Option<usize>)> = None;
            for _ in 0..PROPOSALS {
                let v = self.propose(rng, x, y);
                let mut hit: ArrayVec<usize, 6> = Self::sun_edges(&v)
                    .iter()
                    .filter_map(|&(a, b)| self.owner[self.idx(a, b)])
                    .collect();
                hit.sort_unstable();
                let mut hit = hit.to_vec();
                hit.dedup();
                match hit.len() {
                    0 => {
                        best = Some((v, None));
                        break;
                    }
                    1 if best.is_none() => best = Some((v, Some(hit[0]))),
                    _ => {}
                }
            }
            if let Some((v, evict)) = best {
                if let Some(id) = evict {
                    self.remove(id);
                }
                self.insert(v);
            }
        }
        None
    }
}

/// Exhaustive search: the smallest uncovered edge is placed in every
/// position of every sun that fits, depth first.
pub fn backtrack_sun_system(m: u32, node_limit: u64) -> Option<Vec<Block>> {
    let n = m as usize;
    let mut used = vec![false; n * n];
    let mut out = Vec::new();
    let mut nodes = 0u64;

    fn free(used: &[bool], n: usize, a: Point, b: Point) -> bool {
        !used[a as usize * n + b as usize]
    }

    fn set(used: &mut [bool], n: usize, v: &[Point; 6], on: bool) {
        for (a, b) in HillClimb::sun_edges(v) {
            used[a as usize * n + b as usize] = on;
            used[b as usize * n + a as usize] = on;
        }
    }

    fn fits(used: &[bool], n: usize, v: &[Point; 6]) -> bool {
        for i in 0..6 {
            if v[i + 1..].contains(&v[i]) {
                return false;
            }
        }
        HillClimb::sun_edges(v)
            .iter()
            .all(|&(a, b)| free(used, n, a, b))
    }

    fn go(
        m: u32,
        used: &mut Vec<bool>,
        out: &mut Vec<[Point; 6]>,
        nodes: &mut u64,
        limit: u64,
    ) -> bool {
        let n = m as usize;
        *nodes += 1;
        if *nodes > limit {
            return false;
        }
        let Some((x, y)) = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .find(|&(a, b)| free(used, n, a, b))
        else {
            return true;
        };
        let mut candidates = Vec::new();
        for c in 0..m {
            // triangle {x, y, c}, pendants from each
            if !(free(used, n, x, c) && free(used, n, y, c)) || c == x || c == y {
                continue;
            }
            for d in 0..m {
                for e in 0..m {
                    for f in 0..m {
                        let v = [x, y, c, d, e, f];
                        if fits(used, n, &v) {
                            candidates.push(v);
                        }
                    }
                }
            }
        }
        for (a, tip) in [(x, y), (y, x)] {
            // pendant {a, tip}
            for b in 0..m {
                for c in b + 1..m {
                    for e in 0..m {
                        for f in 0..m {
                            let v = [a, b, c, tip, e, f];
                            if fits(used, n, &v) {
                                candidates.push(v);
                            }
                        }
                    }
                }
            }
        }
        for v in candidates {
            set(used, n, &v, true);
            out.push(v);
            if go(m, used, out, nodes, limit) {
                return true;
            }
            out.pop();
            set(used, n, &v, false);
        }
        false
    }

    if go(m, &mut used, &mut out, &mut nodes, node_limit) {
        Some(
            out.into_iter()
                .map(|v| Block::sun(v).expect("distinct labels"))
                .collect(),
        )
    } else {
        None
    }
}
