//! Plain-text block notation.
//!
//! One or more blocks per line in the usual bracket form, `#` starts a
//! comment:
//!
//! ```text
//! points 16
//! (**0,1,2**; 9,10,11), (0,13,15; 14,7,8)
//! group A1
//! (0,4,1; 7) + {2..5, 11..14}
//! (1,3,10; 12,6,20) + Z \ {11, 23}
//! (4,11,0; 8) + 2*{0..9}
//! ```
//!
//! `**` marks a bold triangle (kept as a flag). A trailing `+ S` expands the
//! block over the shift set `S` modulo the `modulus` directive, or modulo
//! `points` when no modulus was given. `Z` is every residue.

use crate::design::{orbit_expand, Block, Design, Point};
use crate::error::{Error, Result};

/// A block as written, before orbit expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrittenBlock {
    pub block: Block,
    pub bold: bool,
    pub shifts: Option<ShiftSet>,
    pub line: usize,
}

/// Residues a written block is translated by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftSet {
    List(Vec<u32>),
    /// Every residue of the modulus except the listed ones.
    AllExcept(Vec<u32>),
}

impl ShiftSet {
    pub fn resolve(&self, modulus: u32) -> Vec<u32> {
        match self {
            ShiftSet::List(l) => l.clone(),
            ShiftSet::AllExcept(ex) => (0..modulus).filter(|i| !ex.contains(i)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WrittenGroup {
    pub name: String,
    pub blocks: Vec<WrittenBlock>,
}

/// Parsed contents of a block file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockFile {
    pub points: Option<u32>,
    pub modulus: Option<u32>,
    /// Blocks before the first `group` line land in a group named "".
    pub groups: Vec<WrittenGroup>,
}

impl BlockFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut file = BlockFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("points") => file.points = Some(parse_directive(words, line_no)?),
                Some("modulus") => file.modulus = Some(parse_directive(words, line_no)?),
                Some("group") => file.groups.push(WrittenGroup {
                    name: words.collect::<Vec<_>>().join(" "),
                    blocks: Vec::new(),
                }),
                _ => {
                    let blocks = parse_block_line(line, line_no)?;
                    if file.groups.is_empty() {
                        file.groups.push(WrittenGroup::default());
                    }
                    file.groups.last_mut().unwrap().blocks.extend(blocks);
                }
            }
        }
        Ok(file)
    }

    fn orbit_modulus(&self) -> Option<u32> {
        self.modulus.or(self.points)
    }

    /// Expands one written block into the blocks it denotes.
    pub fn expand(&self, w: &WrittenBlock) -> Result<Vec<Block>> {
        match &w.shifts {
            None => Ok(vec![w.block]),
            Some(shifts) => {
                let m = self.orbit_modulus().ok_or(Error::Parse {
                    line: w.line,
                    msg: "orbit given but neither modulus nor points declared".into(),
                })?;
                orbit_expand(&w.block, m, shifts.resolve(m))
            }
        }
    }

    /// Every group with its orbits expanded.
    pub fn expanded_groups(&self) -> Result<Vec<Vec<Block>>> {
        self.groups
            .iter()
            .map(|g| {
                let mut out = Vec::new();
                for w in &g.blocks {
                    out.extend(self.expand(w)?);
                }
                Ok(out)
            })
            .collect()
    }

    /// Flattens into a design on `K_points`; the point count comes from the
    /// `points` directive or else the largest label.
    pub fn into_design(&self) -> Result<Design> {
        let blocks: Vec<Block> = self.expanded_groups()?.into_iter().flatten().collect();
        let points = match self.points {
            Some(p) => p,
            None => blocks
                .iter()
                .flat_map(|b| b.vertices().iter().copied())
                .max()
                .map_or(0, |m| m + 1),
        };
        Ok(Design::complete(points, blocks))
    }
}

fn parse_directive<'a>(mut words: impl Iterator<Item = &'a str>, line: usize) -> Result<u32> {
    let w = words.next().ok_or(Error::Parse {
        line,
        msg: "directive needs a value".into(),
    })?;
    parse_int(w, line)
}

fn parse_int(s: &str, line: usize) -> Result<u32> {
    s.trim().parse::<u32>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a nonnegative integer, found {s:?}"),
    })
}

fn parse_block_line(line: &str, line_no: usize) -> Result<Vec<WrittenBlock>> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let mut out = Vec::new();
    let mut rest = line;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(err(format!("expected '(' at {rest:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| err("unclosed '('".to_string()))?;
        let inner = &rest[1..close];
        rest = &rest[close + 1..];

        let bold = inner.contains("**");
        let inner = inner.replace("**", "");
        let (tri, tips) = match inner.split_once(';') {
            Some((t, p)) => (t, Some(p)),
            None => (inner.as_str(), None),
        };
        let mut labels = split_ints(tri, line_no)?;
        if labels.len() != 3 {
            return Err(err(format!("triangle part {tri:?} must have 3 labels")));
        }
        if let Some(p) = tips {
            labels.extend(split_ints(p, line_no)?);
        }
        let block = Block::from_labels(&labels).map_err(|e| err(e.to_string()))?;

        let trimmed = rest.trim_start();
        let shifts = if let Some(after) = trimmed.strip_prefix('+') {
            let (shifts, remaining) = parse_shift_set(after, line_no)?;
            rest = remaining;
            Some(shifts)
        } else {
            None
        };
        out.push(WrittenBlock {
            block,
            bold,
            shifts,
            line: line_no,
        });
    }
    Ok(out)
}

fn split_ints(s: &str, line: usize) -> Result<Vec<Point>> {
    s.split(',')
        .filter(|w| !w.trim().is_empty())
        .map(|w| parse_int(w, line))
        .collect()
}

/// Orbit shift sets: `{..}`, `k*{..}`, `Z`, or `Z \ {..}`. Returns the
/// shifts and the unparsed rest of the line.
fn parse_shift_set(s: &str, line: usize) -> Result<(ShiftSet, &str)> {
    let err = |msg: String| Error::Parse { line, msg };
    let s = s.trim_start();
    if let Some(after) = s.strip_prefix('Z') {
        let after_t = after.trim_start();
        if let Some(ex) = after_t.strip_prefix('\\') {
            let (excluded, rest) = parse_braced(ex.trim_start(), line)?;
            return Ok((ShiftSet::AllExcept(excluded), rest));
        }
        return Ok((ShiftSet::AllExcept(Vec::new()), after));
    }
    let (mult, s) = match s.find('*') {
        Some(i) if s[..i].trim().chars().all(|c| c.is_ascii_digit()) && i > 0 => {
            (parse_int(&s[..i], line)?, s[i + 1..].trim_start())
        }
        _ => (1, s),
    };
    if !s.starts_with('{') {
        return Err(err(format!("expected a shift set at {s:?}")));
    }
    let (items, rest) = parse_braced(s, line)?;
    Ok((
        ShiftSet::List(items.into_iter().map(|i| i * mult).collect()),
        rest,
    ))
}

fn parse_braced(s: &str, line: usize) -> Result<(Vec<u32>, &str)> {
    let err = |msg: String| Error::Parse { line, msg };
    let body_start = s
        .strip_prefix('{')
        .ok_or_else(|| err(format!("expected '{{' at {s:?}")))?;
    let close = body_start
        .find('}')
        .ok_or_else(|| err("unclosed '{'".into()))?;
    let body = &body_start[..close];
    let mut items = Vec::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (parse_int(a, line)?, parse_int(b, line)?);
            if a > b {
                return Err(err(format!("empty range {part}")));
            }
            items.extend(a..=b);
        } else {
            items.push(parse_int(part, line)?);
        }
    }
    Ok((items, &body_start[close + 1..]))
}

/// Renders a design as `points m` followed by one block per line.
pub fn format_design(d: &Design) -> String {
    let mut s = format!("points {}\n", d.points);
    for b in &d.blocks {
        s.push_str(&b.to_string());
        s.push('\n');
    }
    s
}
