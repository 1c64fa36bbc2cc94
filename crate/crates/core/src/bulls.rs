//! {bull, 3-sun}-designs of order `u = 12k + h` whose 2-degree sequence is
//! `(2, 3, 3, 3, 3, 4, …, 4)`, built from explicit orbits under `Z_u`.

use crate::design::{orbit_expand, Block, Design, Point};
use crate::error::{Error, Result};

/// `12k + h` for `h ∈ {5, 8, 9, 12}` and `k ≥ 3`.
pub fn bull_order(k: u32, h: u32) -> Result<u32> {
    if !matches!(h, 5 | 8 | 9 | 12) {
        return Err(Error::Precondition(format!(
            "h must be 5, 8, 9 or 12, got {h}"
        )));
    }
    if k < 3 {
        return Err(Error::Precondition(format!(
            "k must be at least 3, got {k}"
        )));
    }
    Ok(12 * k + h)
}

/// Splits `u` into `(k, h)` when it is a valid bull-design order.
pub fn split_order(u: u32) -> Option<(u32, u32)> {
    [5, 8, 9, 12]
        .into_iter()
        .filter(|&h| u >= h && (u - h).is_multiple_of(12))
        .map(|h| ((u - h) / 12, h))
        .find(|&(k, _)| k >= 3)
}

/// The 2-degree every vertex must have: 2 at `6k`; 3 at `0, 4k+1, 6k+1,
/// 6k+2`; 4 elsewhere.
pub fn expected_two_degrees(k: u32, h: u32) -> Result<Vec<usize>> {
    let u = bull_order(k, h)?;
    let mut d = vec![4; u as usize];
    d[(6 * k) as usize] = 2;
    for v in [0, 4 * k + 1, 6 * k + 1, 6 * k + 2] {
        d[v as usize] = 3;
    }
    Ok(d)
}

/// The design on `Z_u`, `u = 12k + h`, as a complete-host [`Design`].
pub fn bull_sun_design(k: u32, h: u32) -> Result<Design> {
    let u = bull_order(k, h)?;
    let (k, ui) = (k as i64, u as i64);
    let block = |labels: &[i64]| -> Result<Block> {
        let v: Vec<Point> = labels.iter().map(|&x| x.rem_euclid(ui) as Point).collect();
        Block::from_labels(&v)
    };
    let orbit = |labels: &[i64], shifts: &mut dyn Iterator<Item = u32>| -> Result<Vec<Block>> {
        orbit_expand(&block(labels)?, u, shifts)
    };
    // blocks listed with a running index i, each translated by i
    let indexed = |labels: &[i64], step: i64, count: i64| -> Result<Vec<Block>> {
        (0..count)
            .map(|i| {
                let shifted: Vec<i64> = labels.iter().map(|x| x + step * i).collect();
                block(&shifted)
            })
            .collect()
    };

    let mut out = Vec::new();
    // B_1, B_2 minus its base block, B_3 minus five translates
    out.extend(orbit(
        &[0, 6 * k - 2, 4 * k + 3, 3 * k, 6 * k - 1],
        &mut (0..u),
    )?);
    out.extend(orbit(
        &[6 * k, 0, 4 * k + 1, 6 * k + 2, 6 * k + 1],
        &mut (1..u),
    )?);
    let removed = [0, 4 * k + 1, 6 * k, 6 * k + 1, 6 * k + 2].map(|x| x as u32);
    out.extend(orbit(
        &[0, 6 * k - 1, 4 * k + 2, 3 * k, 6 * k],
        &mut (0..u).filter(|i| !removed.contains(i)),
    )?);
    for j in 0..=k - 4 {
        out.extend(orbit(
            &[5 * k + 1 + j, 5 * k - j, 0, 3 * k, k, ui - 2 - 2 * j],
            &mut (0..u),
        )?);
    }
    for s in [
        [6 * k - 1, 4 * k + 2, 0, 3 * k, 6 * k, 4 * k + 1],
        [10 * k, 8 * k + 3, 4 * k + 1, 7 * k + 1, 10 * k + 1, 6 * k],
        [12 * k - 1, 10 * k + 2, 6 * k, 9 * k, 12 * k, 0],
        [
            12 * k,
            10 * k + 3,
            6 * k + 1,
            9 * k + 1,
            12 * k + 1,
            4 * k + 1,
        ],
        [12 * k + 1, 10 * k + 4, 6 * k + 2, 9 * k + 2, 12 * k + 2, 0],
    ] {
        out.push(block(&s)?);
    }

    match h {
        5 => {
            out.extend(orbit(
                &[6 * k + 1, 0, 3 * k, 3 * k + 2, 6 * k + 3],
                &mut (0..u),
            )?);
        }
        8 => {
            out.extend(indexed(
                &[6 * k + 3, 0, 3 * k, 6 * k + 4, 9 * k + 1],
                1,
                3 * k + 2,
            )?);
            out.extend(indexed(
                &[9 * k + 5, 3 * k + 2, 6 * k + 2, 6 * k + 4, 12 * k + 3],
                1,
                3 * k + 2,
            )?);
            out.extend(indexed(
                &[12 * k + 7, 6 * k + 4, 9 * k + 4, 9 * k + 5, 3 * k - 3],
                1,
                6 * k + 4,
            )?);
            out.extend(indexed(
                &[0, 3 * k + 2, 9 * k + 6, 3 * k + 1, 6 * k + 3, 6 * k + 4],
                1,
                3 * k + 2,
            )?);
        }
        9 => {
            out.extend(orbit(
                &[6 * k + 1, 0, 3 * k, 3 * k + 3, 9 * k + 3],
                &mut (0..u),
            )?);
            out.extend(indexed(
                &[0, 3 * k + 2, 6 * k + 4, 6 * k + 5, 9 * k + 7, 9 * k + 6],
                3,
                4 * k + 3,
            )?);
        }
        _ => {
            out.extend(indexed(
                &[6 * k + 1, 0, 3 * k, 6 * k + 6, 9 * k + 5],
                1,
                3 * k + 3,
            )?);
            out.extend(indexed(
                &[9 * k + 4, 3 * k + 3, 6 * k + 3, 6 * k + 6, 12 * k + 8],
                1,
                3 * k + 3,
            )?);
            out.extend(indexed(
                &[12 * k + 7, 6 * k + 6, 9 * k + 6, 12 * k + 9, 3 * k - 1],
                1,
                6 * k + 6,
            )?);
            out.extend(indexed(
                &[0, 3 * k + 3, 9 * k + 9, 6 * k + 3, 9 * k + 6, 6 * k + 6],
                1,
                3 * k + 3,
            )?);
            out.extend(indexed(
                &[0, 3 * k + 2, 6 * k + 4, 6 * k + 8, 9 * k + 10, 9 * k + 6],
                3,
                4 * k + 4,
            )?);
        }
    }
    Ok(Design::complete(u, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{two_degree_profile, verify_decomposition, BlockKind};

    #[test]
    fn order_parameters() {
        assert_eq!(bull_order(3, 5).unwrap(), 41);
        assert!(bull_order(2, 5).is_err());
        assert!(bull_order(3, 6).is_err());
        assert_eq!(split_order(44), Some((3, 8)));
        assert_eq!(split_order(48), Some((3, 12)));
        assert_eq!(split_order(29), None);
        assert_eq!(split_order(40), None);
    }

    #[test]
    fn smallest_cases_verify() {
        for h in [5, 8, 9, 12] {
            let d = bull_sun_design(3, h).unwrap();
            assert!(verify_decomposition(&d).is_ok(), "h = {h}");
            let bulls = d.count_kind(BlockKind::Bull);
            let suns = d.count_kind(BlockKind::Sun);
            assert_eq!(bulls + suns, d.blocks.len());
            let u = d.points as usize;
            assert_eq!(5 * bulls + 6 * suns, u * (u - 1) / 2);
            assert_eq!(
                two_degree_profile(&d).as_slice(),
                expected_two_degrees(3, h).unwrap().as_slice()
            );
        }
    }

    #[test]
    fn sorted_sequence() {
        let d = bull_sun_design(3, 5).unwrap();
        let seq = two_degree_profile(&d).sequence();
        assert_eq!(&seq[..6], &[2, 3, 3, 3, 3, 4]);
        assert_eq!(seq.len(), 41);
        assert!(seq[5..].iter().all(|&x| x == 4));
    }
}
