//! Hand-set tables: small explicit embeddings and grouped block partitions
//! of `K_u`, with a repair search for transcription errors.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::certificate::EmbeddingCertificate;
use crate::design::{verify_decomposition, Block, Design, Edge, Point, TwoDegreeProfile};
use crate::error::{Error, Result};
use crate::notation::BlockFile;
use crate::sts::{Triple, TripleSystem};

/// A named group of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockGroup {
    pub name: String,
    pub blocks: Vec<Block>,
}

/// Blocks partitioning `K_u`, split into groups in which every vertex has
/// degree 2 in at most one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedPartition {
    pub modulus: u32,
    pub groups: Vec<BlockGroup>,
}

impl GroupedPartition {
    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.groups.iter().flat_map(|g| g.blocks.iter())
    }

    pub fn block_count(&self) -> usize {
        self.groups.iter().map(|g| g.blocks.len()).sum()
    }

    pub fn design(&self) -> Design {
        Design::complete(self.modulus, self.blocks().copied().collect())
    }

    pub fn two_degree_profile(&self) -> TwoDegreeProfile {
        TwoDegreeProfile::from_blocks(self.modulus, &self.blocks().copied().collect::<Vec<_>>())
    }

    /// Degree-2 vertices of each group, sorted.
    pub fn requirements(&self) -> Vec<Vec<Point>> {
        self.groups
            .iter()
            .map(|g| {
                let mut r: Vec<Point> = g
                    .blocks
                    .iter()
                    .flat_map(|b| b.degree2_vertices().iter().copied())
                    .collect();
                r.sort_unstable();
                r
            })
            .collect()
    }

    /// Every violated invariant, one line each.
    pub fn violations(&self) -> Vec<String> {
        let mut v = verify_decomposition(&self.design()).violations();
        for (g, req) in self.groups.iter().zip(self.requirements()) {
            for w in req.windows(2) {
                if w[0] == w[1] {
                    v.push(format!(
                        "vertex {} has degree 2 in two blocks of group {}",
                        w[0], g.name
                    ));
                }
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Verification(v.join("; ")))
        }
    }

    fn from_file(file: &BlockFile) -> Result<Self> {
        let modulus = file.points.ok_or(Error::Parse {
            line: 1,
            msg: "missing points directive".into(),
        })?;
        let groups = file
            .groups
            .iter()
            .zip(file.expanded_groups()?)
            .map(|(g, blocks)| BlockGroup {
                name: g.name.clone(),
                blocks,
            })
            .collect();
        Ok(GroupedPartition { modulus, groups })
    }
}

/// Orders with a bundled grouped partition of `K_{(n+3)/2}`.
pub const GROUPED_ORDERS: [u32; 7] = [21, 31, 37, 45, 55, 61, 69];

fn grouped_text(n: u32) -> Option<&'static str> {
    Some(match n {
        21 => include_str!("../data/grouped/n21.txt"),
        31 => include_str!("../data/grouped/n31.txt"),
        37 => include_str!("../data/grouped/n37.txt"),
        45 => include_str!("../data/grouped/n45.txt"),
        55 => include_str!("../data/grouped/n55.txt"),
        61 => include_str!("../data/grouped/n61.txt"),
        69 => include_str!("../data/grouped/n69.txt"),
        _ => return None,
    })
}

/// A single-label correction to a transcribed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repair {
    pub group: String,
    pub before: Block,
    pub after: Block,
}

impl std::fmt::Display for Repair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "group {}: {} -> {}", self.group, self.before, self.after)
    }
}

/// The table as transcribed, before any repair.
pub fn grouped_partition_as_written(n: u32) -> Result<GroupedPartition> {
    let text = grouped_text(n).ok_or_else(|| {
        Error::inadmissible(n, "grouped partitions exist for 21, 31, 37, 45, 55, 61, 69")
    })?;
    let p = GroupedPartition::from_file(&BlockFile::parse(text)?)?;
    if 2 * p.modulus != n + 3 {
        return Err(Error::Precondition(format!(
            "table for n = {n} lives on {} points",
            p.modulus
        )));
    }
    Ok(p)
}

/// The grouped partition for `n`, plus the repair applied when the table
/// as written does not verify.
pub fn grouped_partition_with_repair(n: u32) -> Result<(GroupedPartition, Option<Repair>)> {
    let p = grouped_partition_as_written(n)?;
    if p.validate().is_ok() {
        return Ok((p, None));
    }
    let diagnostic = p.violations().join("; ");
    let repairs = single_label_repairs(&p);
    let Some((fixed, repair)) = repairs.into_iter().next() else {
        return Err(Error::Verification(format!(
            "table for n = {n} fails ({diagnostic}) and no single-label repair exists"
        )));
    };
    warn!("table for n = {n} fails ({diagnostic}); repaired {repair}");
    Ok((fixed, Some(repair)))
}

/// [`grouped_partition_with_repair`] without the repair record.
pub fn grouped_partition(n: u32) -> Result<GroupedPartition> {
    Ok(grouped_partition_with_repair(n)?.0)
}

/// All partitions obtained by changing one label of one block that keep the
/// block kind, the group, and the 2-degree profile, and that validate.
pub fn single_label_repairs(p: &GroupedPartition) -> Vec<(GroupedPartition, Repair)> {
    let u = p.modulus;
    let profile = p.two_degree_profile();
    let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
    for b in p.blocks() {
        for e in b.edges() {
            *count.entry(e).or_default() += 1;
        }
    }
    let total_edges = (u as usize) * (u as usize - 1) / 2;
    let mut out = Vec::new();
    for (gi, g) in p.groups.iter().enumerate() {
        for (bi, b) in g.blocks.iter().enumerate() {
            for pos in 0..b.vertices().len() {
                for x in 0..u {
                    let Ok(nb) = b.map(|y| if y == b.vertices()[pos] { x } else { y }) else {
                        continue;
                    };
                    if nb == *b {
                        continue;
                    }
                    // quick edge-count screen before a full validation
                    let mut c = count.clone();
                    for e in b.edges() {
                        *c.get_mut(&e).expect("counted") -= 1;
                    }
                    for e in nb.edges() {
                        *c.entry(e).or_default() += 1;
                    }
                    if c.values().filter(|&&k| k == 1).count() != total_edges {
                        continue;
                    }
                    let mut q = p.clone();
                    q.groups[gi].blocks[bi] = nb;
                    if q.two_degree_profile() != profile || q.validate().is_err() {
                        continue;
                    }
                    out.push((
                        q,
                        Repair {
                            group: g.name.clone(),
                            before: *b,
                            after: nb,
                        },
                    ));
                }
            }
        }
    }
    out
}

/// The explicit embeddings of small systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedTable {
    /// STS(7) in a 3SS(13).
    Seven,
    /// STS(9) in a 3SS(16).
    Nine,
    /// Cyclic STS(13) in a 3SS(24).
    ThirteenCyclic,
    /// Non-cyclic STS(13) in a 3SS(24).
    ThirteenNoncyclic,
}

impl FixedTable {
    pub const ALL: [FixedTable; 4] = [
        FixedTable::Seven,
        FixedTable::Nine,
        FixedTable::ThirteenCyclic,
        FixedTable::ThirteenNoncyclic,
    ];

    pub fn n(self) -> u32 {
        match self {
            FixedTable::Seven => 7,
            FixedTable::Nine => 9,
            _ => 13,
        }
    }
}

/// Blocks of a table file with their bold markers.
fn written_blocks(text: &str) -> Result<(u32, Vec<(Block, bool)>)> {
    let f = BlockFile::parse(text)?;
    let points = f.points.ok_or(Error::Parse {
        line: 1,
        msg: "missing points directive".into(),
    })?;
    let blocks = f
        .groups
        .iter()
        .flat_map(|g| g.blocks.iter())
        .map(|w| (w.block, w.bold))
        .collect();
    Ok((points, blocks))
}

/// The transcribed design, its STS (the bold triangles, which use labels
/// `0..n`) and the certificate mapping each triple to its sun.
pub fn embedding_table(which: FixedTable) -> Result<(TripleSystem, Design, EmbeddingCertificate)> {
    let (points, blocks) = match which {
        FixedTable::Seven => written_blocks(include_str!("../data/tables/3ss-13.txt"))?,
        FixedTable::Nine => written_blocks(include_str!("../data/tables/3ss-16.txt"))?,
        FixedTable::ThirteenCyclic => {
            written_blocks(include_str!("../data/tables/3ss-24-cyclic.txt"))?
        }
        FixedTable::ThirteenNoncyclic => {
            let (points, mut blocks) =
                written_blocks(include_str!("../data/tables/3ss-24-cyclic.txt"))?;
            let swap = BlockFile::parse(include_str!("../data/tables/3ss-24-noncyclic-swap.txt"))?;
            let group = |name: &str| {
                swap.groups
                    .iter()
                    .find(|g| g.name == name)
                    .map(|g| {
                        g.blocks
                            .iter()
                            .map(|w| (w.block, w.bold))
                            .collect::<Vec<_>>()
                    })
                    .ok_or_else(|| Error::Precondition(format!("swap file lacks group {name}")))
            };
            for (old, _) in group("remove")? {
                let i = blocks.iter().position(|(b, _)| *b == old).ok_or_else(|| {
                    Error::Precondition(format!("sun {old} to replace is not in the table"))
                })?;
                blocks.remove(i);
            }
            blocks.extend(group("add")?);
            (points, blocks)
        }
    };
    let n = which.n();
    let mut triples: Vec<Triple> = Vec::new();
    let mut map = Vec::new();
    for (i, (b, bold)) in blocks.iter().enumerate() {
        if *bold {
            triples.push(b.triangle_of());
            map.push(i);
        }
    }
    let sts = TripleSystem::new(n, triples);
    let design = Design::complete(points, blocks.into_iter().map(|(b, _)| b).collect());
    let cert = EmbeddingCertificate {
        n,
        u: points - n,
        sts: sts.triples.clone(),
        design: design.clone(),
        map,
        seed: None,
    };
    Ok((sts, design, cert))
}
