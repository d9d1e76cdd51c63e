//! Parameter counts for surfaces of `P^3` that arise as coordinatewise
//! products of two plane curves.
//!
//! Such a family is cut out by two plane choices (3 parameters each) and two
//! degree-d plane curves; for d = 4 the second curve is constrained to be
//! projectively equivalent to the first, costing dim PGL(3) = 8 instead.
//! The family dimension stays below the dimension of the space of all
//! degree-d surfaces, binom(d+3,3) - 1, for every d >= 4.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountsError {
    #[error("degree must be at least 4, got {0}")]
    DegreeTooSmall(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamCountReport {
    pub d: u32,
    pub dim_family: u64,
    pub dim_ambient: u64,
    pub margin: i64,
    pub holds: bool,
    pub note: String,
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Family-vs-ambient dimension count for degree-`d` product surfaces.
pub fn i4_parameter_counts(d: u32) -> Result<ParamCountReport, CountsError> {
    if d < 4 {
        return Err(CountsError::DegreeTooSmall(d));
    }
    let (dim_family, note) = if d == 4 {
        (
            3 + 3 + 14 + 8,
            "d=4: two planes (3+3), one quartic plane curve (binom(6,2)-1 = 14), \
             and a projective equivalence (dim PGL(3) = 8)"
                .to_string(),
        )
    } else {
        let per_curve = binomial(d as u64 + 2, 2) - 1;
        (
            6 + (d as u64 + 2) * (d as u64 + 1) - 2,
            format!(
                "two planes (3+3) and two degree-{d} plane curves \
                 (binom(d+2,2)-1 = {per_curve} each); total 6 + (d+2)(d+1) - 2"
            ),
        )
    };
    let dim_ambient = binomial(d as u64 + 3, 3) - 1;
    Ok(ParamCountReport {
        d,
        dim_family,
        dim_ambient,
        margin: dim_ambient as i64 - dim_family as i64,
        holds: dim_family < dim_ambient,
        note,
    })
}
