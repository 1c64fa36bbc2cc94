//! Embedding certificates, the minimum-order formula, and an independent
//! verifier.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::design::{verify_decomposition, BlockKind, Design, Host, Point};
use crate::error::{Error, Result};
use crate::sts::{is_sts_order, Triple, TripleSystem};

/// Smallest `u` such that every STS(n) embeds in a 3SS(n + u).
pub fn u_min(n: u32) -> Result<u32> {
    if !is_sts_order(n) {
        return Err(Error::inadmissible(n, "an STS needs n ≡ 1, 3 (mod 6)"));
    }
    Ok(match n {
        3 => 6,
        7 => 6,
        9 => 7,
        13 => 11,
        _ if is_second_class(n) => (n - 1) / 2 + 2,
        _ => (n - 1) / 2,
    })
}

/// `n ≡ 7, 13, 15, 21 (mod 24)`.
pub fn is_second_class(n: u32) -> bool {
    matches!(n % 24, 7 | 13 | 15 | 21)
}

/// The counting bound `u ≥ (n−1)/2`, raised by 2 on the second residue
/// class.
pub fn lower_bound(n: u32) -> u32 {
    let base = n.saturating_sub(1) / 2;
    if is_second_class(n) {
        base + 2
    } else {
        base
    }
}

/// An STS(n) on `0..n`, a 3SS(n + u) whose labels `0..n` are the STS
/// points, and the sun containing each triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub n: u32,
    pub u: u32,
    pub sts: Vec<Triple>,
    pub design: Design,
    /// `map[i]` is the index in `design.blocks` of the sun containing
    /// `sts[i]`.
    pub map: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl EmbeddingCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn order(&self) -> u32 {
        self.n + self.u
    }

    pub fn triple_system(&self) -> TripleSystem {
        TripleSystem::new(self.n, self.sts.clone())
    }

    /// Indices of suns that are not the image of a triple.
    pub fn outside_image(&self) -> Vec<usize> {
        let image: HashSet<usize> = self.map.iter().copied().collect();
        (0..self.design.blocks.len())
            .filter(|i| !image.contains(i))
            .collect()
    }
}

/// Violations found by [`verify_embedding`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub violations: Vec<String>,
}

impl EmbeddingReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a certificate from scratch: the STS, the sun decomposition, the
/// triple-to-sun map, and `u = u_min(n)` (with the lower bound reported
/// separately).
pub fn verify_embedding(cert: &EmbeddingCertificate) -> EmbeddingReport {
    let mut v = Vec::new();
    let n = cert.n;

    if let Err(e) = TripleSystem::new(n, cert.sts.clone()).validate() {
        v.push(format!("input is not an STS({n}): {e}"));
    }

    let order = cert.order();
    if cert.design.points != order {
        v.push(format!(
            "design has {} points, expected n + u = {order}",
            cert.design.points
        ));
    }
    if cert.design.host != Host::Complete {
        v.push("design host is not complete".into());
    }
    let non_suns = cert
        .design
        .blocks
        .iter()
        .filter(|b| b.kind() != BlockKind::Sun)
        .count();
    if non_suns > 0 {
        v.push(format!("{non_suns} blocks are not suns"));
    }
    v.extend(verify_decomposition(&cert.design).violations());

    if cert.map.len() != cert.sts.len() {
        v.push(format!(
            "map has {} entries for {} triples",
            cert.map.len(),
            cert.sts.len()
        ));
    }
    let mut seen = HashSet::new();
    for (i, (&s, t)) in cert.map.iter().zip(&cert.sts).enumerate() {
        let Some(block) = cert.design.blocks.get(s) else {
            v.push(format!("triple {i} maps to missing sun {s}"));
            continue;
        };
        if !seen.insert(s) {
            v.push(format!("sun {s} is the image of two triples"));
        }
        let mut tri = block.triangle_of();
        tri.sort_unstable();
        let mut want = *t;
        want.sort_unstable();
        if tri != want {
            v.push(format!(
                "triple {i} {t:?} is not the triangle of sun {s} {block}"
            ));
        }
    }

    if !is_sts_order(n) {
        v.push(format!("n = {n} is not an STS order"));
    } else {
        let bound = lower_bound(n);
        if cert.u < bound {
            v.push(format!(
                "u = {} violates the lower bound u ≥ {bound}",
                cert.u
            ));
        }
        let best = u_min(n).expect("admissible");
        if cert.u != best {
            v.push(format!("u = {} differs from u_min({n}) = {best}", cert.u));
        }
    }
    EmbeddingReport { violations: v }
}

/// Counting identities every embedding satisfies: the sun count, the
/// accounting of `X × U` edges, and, when `u = (n+3)/2`, the pendant-degree
/// property of points outside the image and the outside-image count.
pub fn embedding_identities(cert: &EmbeddingCertificate) -> Vec<String> {
    let mut v = Vec::new();
    let (n, u) = (cert.n as usize, cert.u as usize);
    let m = n + u;
    if cert.design.blocks.len() * 12 != m * (m - 1) {
        v.push(format!(
            "{} suns, expected (n+u)(n+u−1)/12 = {}",
            cert.design.blocks.len(),
            m * (m - 1) / 12
        ));
    }
    let in_x = |x: Point| (x as usize) < n;
    let image: HashSet<usize> = cert.map.iter().copied().collect();
    let (mut image_xu, mut outside_xu) = (0usize, 0usize);
    let mut pendant_degree = vec![0usize; n];
    let mut outside_triangle_in_u = true;
    for (i, b) in cert.design.blocks.iter().enumerate() {
        for e in b.edges() {
            if in_x(e.lo()) != in_x(e.hi()) {
                if image.contains(&i) {
                    image_xu += 1;
                } else {
                    outside_xu += 1;
                }
            }
        }
        if !image.contains(&i) {
            if b.triangle_of().iter().any(|&x| in_x(x)) {
                outside_triangle_in_u = false;
            }
            for &x in &b.vertices()[3..] {
                if in_x(x) {
                    pendant_degree[x as usize] += 1;
                }
            }
        }
    }
    if image_xu + outside_xu != n * u {
        v.push(format!(
            "X×U edges: {image_xu} in image suns + {outside_xu} elsewhere ≠ n·u = {}",
            n * u
        ));
    }
    if image_xu != 3 * cert.sts.len() {
        v.push(format!(
            "image suns carry {image_xu} X×U edges, expected {}",
            3 * cert.sts.len()
        ));
    }
    if 2 * u == n + 3 {
        if !outside_triangle_in_u {
            v.push("a sun outside the image has a triangle vertex in X".into());
        }
        if let Some(x) = pendant_degree.iter().position(|&d| d != 2) {
            v.push(format!(
                "point {x} has pendant-degree {} outside the image, expected 2",
                pendant_degree[x]
            ));
        }
        let outside = cert.design.blocks.len() - image.len();
        if outside * 48 != n * n + 20 * n + 3 {
            v.push(format!(
                "{outside} suns outside the image, expected (n²+20n+3)/48"
            ));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptions_and_formulas() {
        assert_eq!(u_min(3).unwrap(), 6);
        assert_eq!(u_min(7).unwrap(), 6);
        assert_eq!(u_min(9).unwrap(), 7);
        assert_eq!(u_min(13).unwrap(), 11);
        assert_eq!(u_min(19).unwrap(), 9);
        assert_eq!(u_min(21).unwrap(), 12);
        assert_eq!(u_min(79).unwrap(), 41);
        assert!(u_min(11).is_err());
    }

    #[test]
    fn orders_are_admissible_sun_orders() {
        for n in (1..=201).filter(|&n| is_sts_order(n)) {
            let m = n + u_min(n).unwrap();
            assert!(crate::suns::is_admissible(m), "n = {n}, order {m}");
            assert!(u_min(n).unwrap() >= lower_bound(n));
        }
    }
}
