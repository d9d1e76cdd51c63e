//! Brute-force dimension estimates by exhaustive point counting over a
//! small prime field.
//!
//! The parameter space of a parametrized variety is a product of projective
//! blocks; the oracle walks its affine charts (first nonzero coordinate set
//! to 1), covering each projective parameter tuple exactly once, normalizes
//! the images and counts distinct points. `log_q(count)` rounds to the
//! dimension; this route shares nothing with the tangent-frame machinery,
//! which is the point.

use crate::field::Fp;
use crate::poly::{EvalPlan, EvalScratch};
#[cfg(test)]
use crate::rng::SeedStream;
use crate::variety::{normalize_in_place, Variety, VarietyError};
use serde::Serialize;
use thiserror::Error;

/// Chart tuples an enumeration may visit before it is refused.
pub const ENUMERATION_GUARD: u64 = 100_000_000;

/// Points buffered between sort-and-dedup compactions.
const COMPACT_BATCH: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration of {size} parameter tuples exceeds the guard of {guard}")]
    TooLarge { size: u128, guard: u64 },
    #[error("`{0}` is not parametrized; the oracle only counts images of maps")]
    NotParametrized(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub q: u64,
    /// Distinct normalized image points.
    pub count: u64,
    /// Nearest integer to `log_q(count)`; absent when the image is empty.
    pub dim_estimate: Option<u32>,
    /// Parameter chart tuples visited.
    pub enumerated: u64,
}

/// `(q^b - 1) / (q - 1)`: chart points of a projective block of size `b`.
fn chart_size(b: usize, q: u64) -> u128 {
    let mut acc: u128 = 0;
    for _ in 0..b {
        acc = acc * q as u128 + 1;
    }
    acc
}

/// Count the distinct points in the image of a parametrized variety over
/// `F_q` and estimate its dimension.
pub fn point_count_dim(x: &Variety, fq: &Fp) -> Result<OracleReport, OracleError> {
    let map = x
        .param_map()
        .ok_or_else(|| OracleError::NotParametrized(x.name().to_string()))?;
    let q = fq.modulus();
    let total: u128 = map
        .block_sizes
        .iter()
        .map(|&b| chart_size(b, q))
        .product();
    if total > ENUMERATION_GUARD as u128 {
        return Err(OracleError::TooLarge { size: total, guard: ENUMERATION_GUARD });
    }

    let polys: Vec<&crate::poly::MultiPoly> = map.components.iter().collect();
    let plan = EvalPlan::new(&polys);
    let width = x.ambient() + 1;
    let mut scratch = EvalScratch::default();
    let mut image = vec![0u64; width];
    let mut params = vec![0u64; map.names.len()];
    let mut flat: Vec<u64> = Vec::new();
    let mut distinct = 0u64; // count of deduped points already compacted
    let mut enumerated = 0u64;

    // block offsets into the parameter vector
    let offsets: Vec<usize> = map
        .block_sizes
        .iter()
        .scan(0usize, |acc, &b| {
            let o = *acc;
            *acc += b;
            Some(o)
        })
        .collect();

    let mut charts: Vec<ChartPoints> = map
        .block_sizes
        .iter()
        .map(|&b| ChartPoints::new(b, q))
        .collect();

    // odometer over the product of block charts
    let k = charts.len();
    for (c, &o) in charts.iter_mut().zip(&offsets) {
        c.reset();
        c.write_current(&mut params[o..o + c.block]);
    }
    'outer: loop {
        enumerated += 1;
        plan.eval_into(&params, fq, &mut scratch, &mut image);
        if image.iter().any(|&c| c != 0) {
            normalize_in_place(&mut image, fq).expect("nonzero image");
            flat.extend_from_slice(&image);
            if flat.len() >= COMPACT_BATCH * width {
                compact(&mut flat, width, &mut distinct);
            }
        }
        // advance the odometer, least significant block last
        let mut level = k;
        loop {
            if level == 0 {
                break 'outer;
            }
            level -= 1;
            if charts[level].advance() {
                charts[level].write_current(&mut params[offsets[level]..][..charts[level].block]);
                for l in level + 1..k {
                    charts[l].reset();
                    charts[l].write_current(&mut params[offsets[l]..][..charts[l].block]);
                }
                break;
            }
        }
    }
    compact(&mut flat, width, &mut distinct);
    // the compacted prefix still sits in `flat`; `distinct` tracks it
    let count = distinct;
    let dim_estimate = if count == 0 {
        None
    } else {
        Some(((count as f64).ln() / (q as f64).ln()).round() as u32)
    };
    Ok(OracleReport { q, count, dim_estimate, enumerated })
}

/// Sort-and-dedup the flat point buffer in place; `distinct` becomes the
/// number of deduped rows, which all remain at the front of the buffer.
fn compact(flat: &mut Vec<u64>, width: usize, distinct: &mut u64) {
    if flat.is_empty() {
        *distinct = 0;
        return;
    }
    let mut rows: Vec<&[u64]> = flat.chunks(width).collect();
    rows.sort_unstable();
    rows.dedup();
    *distinct = rows.len() as u64;
    let mut out = Vec::with_capacity(rows.len() * width);
    for r in rows {
        out.extend_from_slice(r);
    }
    *flat = out;
}

/// Walks the canonical representatives of `P^{b-1}(F_q)`: for each leading
/// position the coordinate there is 1, earlier ones are 0, later ones run
/// over all of `F_q`.
struct ChartPoints {
    block: usize,
    q: u64,
    lead: usize,
    /// odometer digits for the free positions after the lead
    free: Vec<u64>,
}

impl ChartPoints {
    fn new(block: usize, q: u64) -> Self {
        ChartPoints { block, q, lead: 0, free: vec![0; block.saturating_sub(1)] }
    }

    fn reset(&mut self) {
        self.lead = 0;
        self.free.iter_mut().for_each(|d| *d = 0);
    }

    fn write_current(&self, out: &mut [u64]) {
        out.iter_mut().for_each(|c| *c = 0);
        out[self.lead] = 1;
        for (i, &d) in self.free[self.lead..].iter().enumerate() {
            out[self.lead + 1 + i] = d;
        }
    }

    /// Step to the next chart point; false when exhausted.
    fn advance(&mut self) -> bool {
        for d in self.free[self.lead..].iter_mut().rev() {
            *d += 1;
            if *d < self.q {
                return true;
            }
            *d = 0;
        }
        if self.lead + 1 < self.block {
            self.lead += 1;
            true
        } else {
            false
        }
    }
}

/// The `[q^d / 8, 8 * q^d]` window a count must land in to corroborate a
/// claimed dimension `d`. The factor 8 is an engineering tolerance absorbing
/// generic finite fibers and boundary strata, not a theorem.
pub fn count_window(q: u64, d: u32) -> (u64, u64) {
    let qd = q.pow(d);
    ((qd / 8).max(1), qd.saturating_mul(8))
}

/// Convenience runner for transform-invariance checks in tests and the CLI.
pub fn count_is_in_window(report: &OracleReport, d: u32) -> bool {
    let (lo, hi) = count_window(report.q, d);
    (lo..=hi).contains(&report.count)
}
