//! Search for a binomial hypersurface `x^a - lambda * x^b` containing a
//! variety, up to a degree bound.
//!
//! The scan samples points with all coordinates nonzero and tests, for every
//! unordered pair of equal-degree monomials, whether their ratio is the same
//! constant at every sample. A constant ratio is a probabilistic certificate
//! (two monomials of degree d agree on s random samples of a variety not on
//! their binomial with probability about (d/p)^(s-1)); a found witness is
//! re-verified at fresh samples before being reported.

use crate::field::Fp;
use crate::poly::format_terms;
use crate::rng::SeedStream;
use crate::variety::{Variety, VarietyError};
use serde::Serialize;
use thiserror::Error;

/// Fresh samples a found witness must vanish at.
pub const VERIFY_SAMPLES: usize = 50;

/// Cap on the per-degree sample count.
pub const MAX_SAMPLES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BinomialError {
    #[error("`{name}` lies in the coordinate hyperplanes {support:?}; monomial ratios are meaningless there")]
    CoordinateDegenerate { name: String, support: Vec<usize> },
    #[error("could not sample {needed} points of `{name}` with all coordinates nonzero")]
    SamplingExhausted { name: String, needed: usize },
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// Exponent pair and scalar with `x^a - lambda * x^b` vanishing on the
/// variety at every verification sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialWitness {
    pub degree: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub lambda: u64,
}

impl BinomialWitness {
    /// The witness form as text, e.g. `x0*x2 - 1*x1^2`.
    pub fn format_form(&self) -> String {
        let vars: Vec<String> = (0..self.a.len()).map(|i| format!("x{i}")).collect();
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        let lhs = format_terms(&[(self.a.clone(), 1)], &vars);
        let rhs = format_terms(&[(self.b.clone(), 1)], &vars);
        format!("{lhs} - {}*{rhs}", self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BinomialOutcome {
    Found { witness: BinomialWitness },
    NotFoundUpTo { max_degree: u32 },
}

/// Scan result plus the sampling effort that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct BinomialScan {
    pub outcome: BinomialOutcome,
    pub max_degree: u32,
    /// Samples per degree level actually used (None in the request means
    /// the default `2 + ceil(log2(pairs))`, capped at 64).
    pub samples_per_degree: Vec<usize>,
}

/// Exponent vectors of total degree `d` in `nvars` variables, lex
/// descending, so `x0^d` comes first. This ordering fixes which witness a
/// successful scan reports.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>, left: u32, remaining: usize) {
        if remaining == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(out, prefix, left - e, remaining - 1);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), d, nvars);
    out
}

fn default_samples(pairs: usize) -> usize {
    let log = (pairs.max(1) as f64).log2().ceil() as usize;
    (2 + log).clamp(2, MAX_SAMPLES)
}

/// Sample points of `y` with every coordinate nonzero.
fn off_delta_samples(
    y: &Variety,
    count: usize,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<Vec<Vec<u64>>, BinomialError> {
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0u64;
    let budget = (count * 50) as u64;
    while out.len() < count {
        if attempt >= budget {
            return Err(BinomialError::SamplingExhausted {
                name: y.name().to_string(),
                needed: count,
            });
        }
        let at = y.sample_point(fp, &mut stream.child(attempt))?;
        attempt += 1;
        if !at.point.has_zero_coordinate() {
            out.push(at.point.coords().to_vec());
        }
    }
    Ok(out)
}

fn monomial_value(exps: &[u32], powers: &[Vec<u64>], fp: &Fp) -> u64 {
    exps.iter()
        .enumerate()
        .fold(1u64, |acc, (j, &e)| fp.mul(acc, powers[j][e as usize]))
}

fn power_table(point: &[u64], max_deg: u32, fp: &Fp) -> Vec<Vec<u64>> {
    point
        .iter()
        .map(|&c| {
            let mut col = Vec::with_capacity(max_deg as usize + 1);
            col.push(1u64);
            for _ in 0..max_deg {
                col.push(fp.mul(*col.last().unwrap(), c));
            }
            col
        })
        .collect()
}

/// Decide containment in a binomial hypersurface of degree at most
/// `max_degree`, sampling `samples` points per degree level (or the default
/// when `None`). Degree levels consume independent seed streams, so a
/// witness found at degree `d` is found identically by every run with a
/// bound of at least `d` and the same seed.
pub fn binomial_containment(
    y: &Variety,
    max_degree: u32,
    samples: Option<usize>,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<BinomialScan, BinomialError> {
    let support = y.coordinate_support(8, fp, &mut stream.child(0))?;
    if support.is_degenerate() {
        return Err(BinomialError::CoordinateDegenerate {
            name: y.name().to_string(),
            support: support.contained_in,
        });
    }

    let nvars = y.ambient() + 1;
    let mut samples_per_degree = Vec::with_capacity(max_degree as usize);
    for d in 1..=max_degree {
        let monos = monomials_of_degree(nvars, d);
        let pairs = monos.len() * (monos.len() - 1) / 2;
        // constancy needs at least two samples to mean anything
        let s = samples.unwrap_or_else(|| default_samples(pairs)).max(2);
        samples_per_degree.push(s);

        let level = stream.child(d as u64);
        let pts = off_delta_samples(y, s, fp, &level.child(0))?;
        let tables: Vec<Vec<Vec<u64>>> =
            pts.iter().map(|p| power_table(p, d, fp)).collect();
        // values[k][i] = i-th monomial at the k-th sample
        let values: Vec<Vec<u64>> = tables
            .iter()
            .map(|t| monos.iter().map(|m| monomial_value(m, t, fp)).collect())
            .collect();

        for i in 0..monos.len() {
            for j in i + 1..monos.len() {
                let lambda = ratio(values[0][i], values[0][j], fp);
                if values[1..]
                    .iter()
                    .all(|v| ratio(v[i], v[j], fp) == lambda)
                {
                    let witness = BinomialWitness {
                        degree: d,
                        a: monos[i].clone(),
                        b: monos[j].clone(),
                        lambda,
                    };
                    if verify_witness(y, &witness, fp, &level.child(1))? {
                        return Ok(BinomialScan {
                            outcome: BinomialOutcome::Found { witness },
                            max_degree,
                            samples_per_degree,
                        });
                    }
                }
            }
        }
    }
    Ok(BinomialScan {
        outcome: BinomialOutcome::NotFoundUpTo { max_degree },
        max_degree,
        samples_per_degree,
    })
}

fn ratio(a: u64, b: u64, fp: &Fp) -> u64 {
    fp.mul(a, fp.inv(b).expect("off-delta samples have nonzero monomials"))
}

/// Check `x^a - lambda * x^b = 0` at fresh off-delta samples.
pub fn verify_witness(
    y: &Variety,
    w: &BinomialWitness,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<bool, BinomialError> {
    let pts = off_delta_samples(y, VERIFY_SAMPLES, fp, stream)?;
    Ok(pts.iter().all(|p| {
        let t = power_table(p, w.degree, fp);
        let lhs = monomial_value(&w.a, &t, fp);
        let rhs = fp.mul(w.lambda, monomial_value(&w.b, &t, fp));
        lhs == rhs
    }))
}
