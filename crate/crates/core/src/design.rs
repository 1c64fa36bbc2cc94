//! Blocks, designs and the edge-partition verifier.
//!
//! A [`Design`] is a point count, a host graph and a list of [`Block`]s that
//! claim to partition the host's edges. [`verify_decomposition`] checks that
//! claim from scratch using sorted edge lists; every constructor elsewhere in
//! the crate is tested against it.

use std::fmt;

use arrayvec::ArrayVec;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Vertex label. The points of a design on `m` vertices are `0..m`.
pub type Point = u32;

/// Unordered pair stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: Point,
    hi: Point,
}

impl Edge {
    pub fn new(a: Point, b: Point) -> Self {
        debug_assert_ne!(a, b, "loops are not edges");
        if a < b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn lo(self) -> Point {
        self.lo
    }

    pub fn hi(self) -> Point {
        self.hi
    }

    pub fn contains(self, p: Point) -> bool {
        self.lo == p || self.hi == p
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[Point; 2]>::deserialize(d)?;
        if a == b {
            return Err(serde::de::Error::custom(format!("loop edge [{a},{a}]")));
        }
        Ok(Edge::new(a, b))
    }
}

/// The four block shapes that occur in the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// `(a,b,c)`
    Triangle,
    /// `(a,b,c; d)`: pendant `{c,d}`.
    Kite,
    /// `(a,b,c; d,e)`: pendants `{b,d}`, `{c,e}`.
    Bull,
    /// `(a,b,c; d,e,f)`: pendants `{a,d}`, `{b,e}`, `{c,f}`.
    Sun,
}

impl BlockKind {
    /// Number of vertices, which is also the number of edges.
    pub fn arity(self) -> usize {
        match self {
            BlockKind::Triangle => 3,
            BlockKind::Kite => 4,
            BlockKind::Bull => 5,
            BlockKind::Sun => 6,
        }
    }

    pub fn from_arity(n: usize) -> Option<Self> {
        match n {
            3 => Some(BlockKind::Triangle),
            4 => Some(BlockKind::Kite),
            5 => Some(BlockKind::Bull),
            6 => Some(BlockKind::Sun),
            _ => None,
        }
    }

    /// How many leading triangle vertices have degree 2.
    fn degree2_len(self) -> usize {
        6 - self.arity()
    }
}

/// A triangle, kite, bull or 3-sun on distinct integer labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBlock", into = "RawBlock")]
pub struct Block {
    kind: BlockKind,
    v: [Point; 6],
}

#[derive(Serialize, Deserialize)]
struct RawBlock {
    kind: BlockKind,
    v: Vec<Point>,
}

impl TryFrom<RawBlock> for Block {
    type Error = Error;

    fn try_from(raw: RawBlock) -> Result<Self> {
        Block::new(raw.kind, &raw.v)
    }
}

impl From<Block> for RawBlock {
    fn from(b: Block) -> Self {
        RawBlock {
            kind: b.kind,
            v: b.vertices().to_vec(),
        }
    }
}

impl Block {
    /// Builds a block of the given kind; the label count must match the kind
    /// and all labels must be distinct.
    pub fn new(kind: BlockKind, labels: &[Point]) -> Result<Self> {
        if labels.len() != kind.arity() {
            return Err(Error::MalformedBlock(format!(
                "{kind:?} needs {} labels, got {labels:?}",
                kind.arity()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::MalformedBlock(format!(
                    "label {a} repeated in {labels:?}"
                )));
            }
        }
        let mut v = [0; 6];
        v[..labels.len()].copy_from_slice(labels);
        Ok(Block { kind, v })
    }

    /// Infers the kind from the number of labels.
    pub fn from_labels(labels: &[Point]) -> Result<Self> {
        let kind = BlockKind::from_arity(labels.len()).ok_or_else(|| {
            Error::MalformedBlock(format!("no block has {} vertices", labels.len()))
        })?;
        Block::new(kind, labels)
    }

    pub fn triangle(a: Point, b: Point, c: Point) -> Result<Self> {
        Block::new(BlockKind::Triangle, &[a, b, c])
    }

    pub fn sun(v: [Point; 6]) -> Result<Self> {
        Block::new(BlockKind::Sun, &v)
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn vertices(&self) -> &[Point] {
        &self.v[..self.kind.arity()]
    }

    /// The triangle `t(G)` of the block, in notation order.
    pub fn triangle_of(&self) -> [Point; 3] {
        [self.v[0], self.v[1], self.v[2]]
    }

    /// Edge set, triangle first, then pendants in notation order.
    pub fn edges(&self) -> ArrayVec<Edge, 6> {
        let v = &self.v;
        let mut out = ArrayVec::new();
        out.push(Edge::new(v[0], v[1]));
        out.push(Edge::new(v[1], v[2]));
        out.push(Edge::new(v[0], v[2]));
        match self.kind {
            BlockKind::Triangle => {}
            BlockKind::Kite => out.push(Edge::new(v[2], v[3])),
            BlockKind::Bull => {
                out.push(Edge::new(v[1], v[3]));
                out.push(Edge::new(v[2], v[4]));
            }
            BlockKind::Sun => {
                out.push(Edge::new(v[0], v[3]));
                out.push(Edge::new(v[1], v[4]));
                out.push(Edge::new(v[2], v[5]));
            }
        }
        out
    }

    /// Vertices of degree 2 in the block: all of a triangle, `a,b` of a
    /// kite, `a` of a bull, none of a sun.
    pub fn degree2_vertices(&self) -> &[Point] {
        &self.v[..self.kind.degree2_len()]
    }

    /// Applies `f` to every label; fails if the image repeats a label.
    pub fn map(&self, mut f: impl FnMut(Point) -> Point) -> Result<Self> {
        let labels: ArrayVec<Point, 6> = self.vertices().iter().map(|&x| f(x)).collect();
        Block::new(self.kind, &labels)
    }

    /// `self + shift (mod modulus)`.
    pub fn translate(&self, shift: u32, modulus: u32) -> Result<Self> {
        self.map(|x| ((x as u64 + shift as u64) % modulus as u64) as Point)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vertices();
        write!(f, "({},{},{}", v[0], v[1], v[2])?;
        if v.len() > 3 {
            write!(f, "; ")?;
            let tips: Vec<String> = v[3..].iter().map(|x| x.to_string()).collect();
            write!(f, "{}", tips.join(","))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self)
    }
}

/// Free-function form of [`Block::edges`].
pub fn block_edges(b: &Block) -> ArrayVec<Edge, 6> {
    b.edges()
}

/// Free-function form of [`Block::degree2_vertices`].
pub fn degree2_vertices(b: &Block) -> &[Point] {
    b.degree2_vertices()
}

/// Translates `base` by every shift in `shifts`, modulo `modulus`.
pub fn orbit_expand(
    base: &Block,
    modulus: u32,
    shifts: impl IntoIterator<Item = u32>,
) -> Result<Vec<Block>> {
    if modulus == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    if let Some(&x) = base.vertices().iter().find(|&&x| x >= modulus) {
        return Err(Error::LabelOutOfRange {
            label: x,
            points: modulus,
        });
    }
    shifts
        .into_iter()
        .map(|s| base.translate(s % modulus, modulus))
        .collect()
}

/// The graph whose edges a design claims to partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Host {
    /// `K_m` on all points.
    Complete,
    /// An explicit edge list.
    Edges(Vec<Edge>),
}

impl Serialize for Host {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Host::Complete => s.serialize_str("complete"),
            Host::Edges(e) => e.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Host {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Edges(Vec<Edge>),
        }
        match Raw::deserialize(d)? {
            Raw::Name(n) if n == "complete" => Ok(Host::Complete),
            Raw::Name(n) => Err(serde::de::Error::custom(format!(
                "unknown host {n:?}, expected \"complete\" or an edge list"
            ))),
            Raw::Edges(e) => Ok(Host::Edges(e)),
        }
    }
}

/// Points `0..points`, a host graph, and blocks claimed to partition it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    pub points: u32,
    pub host: Host,
    pub blocks: Vec<Block>,
}

impl Design {
    pub fn complete(points: u32, blocks: Vec<Block>) -> Self {
        Design {
            points,
            host: Host::Complete,
            blocks,
        }
    }

    pub fn on_edges(points: u32, edges: Vec<Edge>, blocks: Vec<Block>) -> Self {
        Design {
            points,
            host: Host::Edges(edges),
            blocks,
        }
    }

    /// Host edges, sorted.
    pub fn host_edges(&self) -> Vec<Edge> {
        match &self.host {
            Host::Complete => complete_edges(self.points),
            Host::Edges(e) => {
                let mut e = e.clone();
                e.sort_unstable();
                e
            }
        }
    }

    /// All block edges with multiplicity, sorted.
    pub fn block_edge_list(&self) -> Vec<Edge> {
        let mut all: Vec<Edge> = self.blocks.iter().flat_map(|b| b.edges()).collect();
        all.sort_unstable();
        all
    }

    pub fn count_kind(&self, kind: BlockKind) -> usize {
        self.blocks.iter().filter(|b| b.kind == kind).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Edges of `K_m` in sorted order.
pub fn complete_edges(m: u32) -> Vec<Edge> {
    let mut out = Vec::with_capacity((m as usize) * (m as usize).saturating_sub(1) / 2);
    for a in 0..m {
        for b in a + 1..m {
            out.push(Edge::new(a, b));
        }
    }
    out
}

/// Outcome of [`verify_decomposition`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    /// Host edges covered by no block.
    pub missing: Vec<Edge>,
    /// One entry per surplus copy of an edge covered more than once.
    pub duplicated: Vec<Edge>,
    /// Block edges that are not host edges.
    pub foreign: Vec<Edge>,
    /// Labels outside `0..points`.
    pub out_of_range: Vec<Point>,
}

impl DecompositionReport {
    /// The blocks partition the host exactly.
    pub fn is_ok(&self) -> bool {
        self.missing.is_empty() && self.is_packing()
    }

    /// The blocks partition a subgraph of the host.
    pub fn is_packing(&self) -> bool {
        self.duplicated.is_empty() && self.foreign.is_empty() && self.out_of_range.is_empty()
    }

    /// One human-readable line per kind of violation.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let list = |edges: &[Edge]| {
            edges
                .iter()
                .take(12)
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        if !self.out_of_range.is_empty() {
            out.push(format!("labels out of range: {:?}", self.out_of_range));
        }
        if !self.missing.is_empty() {
            out.push(format!(
                "missing edges: {} [{}]",
                self.missing.len(),
                list(&self.missing)
            ));
        }
        if !self.duplicated.is_empty() {
            out.push(format!(
                "duplicated edges: {} [{}]",
                self.duplicated.len(),
                list(&self.duplicated)
            ));
        }
        if !self.foreign.is_empty() {
            out.push(format!(
                "edges outside host: {} [{}]",
                self.foreign.len(),
                list(&self.foreign)
            ));
        }
        out
    }
}

/// Checks that the blocks of `d` partition its host edge set exactly.
///
/// Comparison is by merging two sorted edge lists, so the result depends on
/// nothing but the blocks and the host.
pub fn verify_decomposition(d: &Design) -> DecompositionReport {
    let mut report = DecompositionReport::default();
    for b in &d.blocks {
        for &x in b.vertices() {
            if x >= d.points && !report.out_of_range.contains(&x) {
                report.out_of_range.push(x);
            }
        }
    }
    report.out_of_range.sort_unstable();

    let host = d.host_edges();
    let used = d.block_edge_list();
    let (mut i, mut j) = (0, 0);
    while i < host.len() || j < used.len() {
        match (host.get(i), used.get(j)) {
            (Some(h), Some(u)) if h == u => {
                i += 1;
                j += 1;
                while used.get(j) == Some(h) {
                    report.duplicated.push(*h);
                    j += 1;
                }
                // a host list may itself carry repeats
                while host.get(i) == Some(h) {
                    report.missing.push(*h);
                    i += 1;
                }
            }
            (Some(h), Some(u)) if h < u => {
                report.missing.push(*h);
                i += 1;
            }
            (Some(_), Some(u)) | (None, Some(u)) => {
                let u = *u;
                report.foreign.push(u);
                j += 1;
                while used.get(j) == Some(&u) {
                    report.duplicated.push(u);
                    j += 1;
                }
            }
            (Some(h), None) => {
                report.missing.push(*h);
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    report
}

/// Per-vertex count of blocks in which the vertex has degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoDegreeProfile {
    counts: Vec<usize>,
}

impl TwoDegreeProfile {
    pub fn from_blocks(points: u32, blocks: &[Block]) -> Self {
        let mut counts = vec![0; points as usize];
        for b in blocks {
            for &x in b.degree2_vertices() {
                if let Some(c) = counts.get_mut(x as usize) {
                    *c += 1;
                }
            }
        }
        TwoDegreeProfile { counts }
    }

    pub fn get(&self, x: Point) -> usize {
        self.counts.get(x as usize).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }

    /// The non-decreasing 2-degree sequence.
    pub fn sequence(&self) -> Vec<usize> {
        let mut s = self.counts.clone();
        s.sort_unstable();
        s
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn two_degree_profile(d: &Design) -> TwoDegreeProfile {
    TwoDegreeProfile::from_blocks(d.points, &d.blocks)
}

/// Applies the point permutation `f` (`f[x]` is the image of `x`).
pub fn relabel(d: &Design, f: &[Point]) -> Result<Design> {
    check_permutation(d.points, f)?;
    let blocks = d
        .blocks
        .iter()
        .map(|b| {
            if let Some(&x) = b.vertices().iter().find(|&&x| x >= d.points) {
                return Err(Error::LabelOutOfRange {
                    label: x,
                    points: d.points,
                });
            }
            b.map(|x| f[x as usize])
        })
        .collect::<Result<Vec<_>>>()?;
    let host = match &d.host {
        Host::Complete => Host::Complete,
        Host::Edges(e) => Host::Edges(
            e.iter()
                .map(|e| Edge::new(f[e.lo() as usize], f[e.hi() as usize]))
                .collect(),
        ),
    };
    Ok(Design {
        points: d.points,
        host,
        blocks,
    })
}

pub(crate) fn check_permutation(points: u32, f: &[Point]) -> Result<()> {
    if f.len() != points as usize {
        return Err(Error::NotBijective(format!(
            "map has {} entries for {points} points",
            f.len()
        )));
    }
    let mut seen = vec![false; f.len()];
    for (x, &y) in f.iter().enumerate() {
        match seen.get_mut(y as usize) {
            None => {
                return Err(Error::NotBijective(format!(
                    "{x} maps to {y}, outside 0..{points}"
                )))
            }
            Some(s) if *s => {
                return Err(Error::NotBijective(format!("{y} is hit twice")));
            }
            Some(s) => *s = true,
        }
    }
    Ok(())
}
