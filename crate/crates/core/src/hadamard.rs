//! Coordinatewise (Hadamard) products of points and varieties, and the
//! tangent-frame machinery that reads off the dimension of a product.
//!
//! At a product point `P_1 * ... * P_k` the tangent space of the product
//! variety is spanned by the blocks `D_{m_i} F_i`, where `F_i` is a tangent
//! frame of the `i`-th factor and `D_{m_i}` the diagonal matrix of the
//! coordinatewise product of the other factors' points. The observed
//! dimension is the max of `rank - 1` over independently sampled trials and
//! can only ever under-report, never exceed, the generic value.

use crate::field::Fp;
use crate::matrix::Matrix;
use crate::rng::SeedStream;
use crate::variety::{
    CoordinateSupport, ProjectivePoint, SamplePoint, Variety, VarietyError, GENERIC_RANK_TRIALS,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HadamardError {
    #[error("product of points is undefined: every coordinate product vanishes")]
    UndefinedProduct,
    #[error("point lies on a coordinate hyperplane and has no Hadamard inverse")]
    OnDelta,
    #[error("empty product: {0} sampled pairs all had undefined products")]
    EmptyProduct(usize),
    #[error("`{name}` lies in the coordinate hyperplanes {support:?}; fixing it as the last factor cannot reach the expected dimension")]
    PreconditionViolated { name: String, support: Vec<usize> },
    #[error("factors live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("`{0}` is not parametrized; products of varieties need parametrizations")]
    NotParametrized(String),
    #[error("need at least one factor")]
    NoFactors,
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// `min(n, sum of dims)`: the a priori bound and the generic value.
pub fn expected_dim(ambient: usize, dims: &[usize]) -> usize {
    ambient.min(dims.iter().sum())
}

/// Coordinatewise product of two points, defined when some coordinate
/// product survives.
pub fn hadamard_point(
    p: &ProjectivePoint,
    q: &ProjectivePoint,
    fp: &Fp,
) -> Result<ProjectivePoint, HadamardError> {
    let coords: Vec<u64> = p
        .coords()
        .iter()
        .zip(q.coords())
        .map(|(&a, &b)| fp.mul(a, b))
        .collect();
    ProjectivePoint::new(coords, fp).map_err(|_| HadamardError::UndefinedProduct)
}

/// Coordinatewise inverse: the unique point with `p * p^{-1} = [1:...:1]`,
/// defined off the coordinate hyperplanes.
pub fn hadamard_inverse(p: &ProjectivePoint, fp: &Fp) -> Result<ProjectivePoint, HadamardError> {
    if p.has_zero_coordinate() {
        return Err(HadamardError::OnDelta);
    }
    let coords: Vec<u64> = p
        .coords()
        .iter()
        .map(|&c| fp.inv(c).expect("no zero coordinates"))
        .collect();
    Ok(ProjectivePoint::new(coords, fp).expect("inverse coordinates are nonzero"))
}

fn require_same_ambient(xs: &[&Variety]) -> Result<usize, HadamardError> {
    let first = xs.first().ok_or(HadamardError::NoFactors)?.ambient();
    for x in xs {
        if x.ambient() != first {
            return Err(HadamardError::AmbientMismatch(first, x.ambient()));
        }
    }
    Ok(first)
}

/// Pairs sampled before declaring a product empty.
pub const EMPTY_PRODUCT_PROBES: usize = 32;

/// Parametrization of `X * Y`: concatenated parameter blocks and
/// coordinatewise-product components, multihomogeneous per block.
pub fn hadamard_param_product(
    x: &Variety,
    y: &Variety,
    fp: &Fp,
    stream: &mut SeedStream,
) -> Result<Variety, HadamardError> {
    require_same_ambient(&[x, y])?;
    let xmap = x
        .param_map()
        .ok_or_else(|| HadamardError::NotParametrized(x.name().to_string()))?;
    let ymap = y
        .param_map()
        .ok_or_else(|| HadamardError::NotParametrized(y.name().to_string()))?;

    // probabilistic nonemptiness check on sampled point pairs
    let mut defined = false;
    for t in 0..EMPTY_PRODUCT_PROBES {
        let s = stream.child(t as u64);
        let p = x.sample_point(fp, &mut s.child(0))?;
        let q = y.sample_point(fp, &mut s.child(1))?;
        if hadamard_point(&p.point, &q.point, fp).is_ok() {
            defined = true;
            break;
        }
    }
    if !defined {
        return Err(HadamardError::EmptyProduct(EMPTY_PRODUCT_PROBES));
    }

    let mut names = xmap.names.clone();
    for incoming in &ymap.names {
        names.push(fresh_name(incoming, &names));
    }
    let m = names.len();
    let mx = xmap.names.len();
    let components = xmap
        .components
        .iter()
        .zip(&ymap.components)
        .map(|(f, g)| f.shift_vars(0, m).mul(&g.shift_vars(mx, m), fp))
        .collect();
    let mut block_sizes = xmap.block_sizes.clone();
    block_sizes.extend(&ymap.block_sizes);
    Ok(Variety::param_blocked(
        format!("{}*{}", x.name(), y.name()),
        x.ambient(),
        names,
        block_sizes,
        components,
    )?)
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|n| n == base) {
        return base.to_string();
    }
    for k in 2u32.. {
        let cand = format!("{base}{k}");
        if !taken.iter().any(|n| n == &cand) {
            return cand;
        }
    }
    unreachable!()
}

/// One sampled trial of a dimension computation.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Normalized coordinates of the sampled factor points, in factor order.
    pub points: Vec<ProjectivePoint>,
    /// Rank of the stacked tangent frame; absent for degenerate trials.
    pub rank: Option<usize>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Defect(usize),
    Empty,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Match => write!(f, "MATCH"),
            Verdict::Defect(d) => write!(f, "DEFECT({d})"),
            Verdict::Empty => write!(f, "EMPTY"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Outcome of a Terracini-style dimension computation.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    pub ambient: usize,
    pub factor_dims: Vec<usize>,
    pub expected: usize,
    /// Max of `rank - 1` over non-degenerate trials; absent when every
    /// trial degenerated.
    pub observed: Option<usize>,
    pub verdict: Verdict,
    pub trials: Vec<TrialRecord>,
    pub notes: Vec<String>,
}

impl DimensionReport {
    fn from_trials(
        ambient: usize,
        factor_dims: Vec<usize>,
        trials: Vec<TrialRecord>,
        notes: Vec<String>,
    ) -> Self {
        let expected = expected_dim(ambient, &factor_dims);
        let observed = trials.iter().filter_map(|t| t.rank).max().map(|r| r - 1);
        let verdict = match observed {
            None => Verdict::Empty,
            Some(o) if o == expected => Verdict::Match,
            Some(o) => Verdict::Defect(expected - o),
        };
        DimensionReport { ambient, factor_dims, expected, observed, verdict, trials, notes }
    }
}

/// Stacked Terracini frame `[D_{m_1} F_1 | ... | D_{m_k} F_k]` at given
/// sampled factor points; `None` when the product of the points is
/// undefined.
pub fn stacked_frame(
    factors: &[(&Variety, &SamplePoint)],
    fp: &Fp,
) -> Result<Option<Matrix>, HadamardError> {
    let vs: Vec<&Variety> = factors.iter().map(|(v, _)| *v).collect();
    let n = require_same_ambient(&vs)?;
    let k = factors.len();
    let coords: Vec<&[u64]> = factors.iter().map(|(_, s)| s.point.coords()).collect();

    // all-factor coordinatewise product; zero vector means degenerate
    let mut all = vec![1u64; n + 1];
    for c in &coords {
        for (a, &b) in all.iter_mut().zip(*c) {
            *a = fp.mul(*a, b);
        }
    }
    if all.iter().all(|&c| c == 0) {
        return Ok(None);
    }

    // prefix/suffix products give each block's diagonal multiplier
    let mut prefix = vec![vec![1u64; n + 1]; k + 1];
    for i in 0..k {
        prefix[i + 1] = prefix[i]
            .iter()
            .zip(coords[i])
            .map(|(&a, &b)| fp.mul(a, b))
            .collect();
    }
    let mut suffix = vec![vec![1u64; n + 1]; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1]
            .iter()
            .zip(coords[i])
            .map(|(&a, &b)| fp.mul(a, b))
            .collect();
    }

    let mut stacked: Option<Matrix> = None;
    for (i, (v, at)) in factors.iter().enumerate() {
        let frame = v.tangent_frame(at, fp)?;
        let mult: Vec<u64> = prefix[i]
            .iter()
            .zip(&suffix[i + 1])
            .map(|(&a, &b)| fp.mul(a, b))
            .collect();
        let block = frame.frame.scale_rows(&mult, fp);
        stacked = Some(match stacked {
            None => block,
            Some(m) => m.hconcat(&block),
        });
    }
    Ok(stacked)
}

fn sample_factors(
    xs: &[&Variety],
    fp: &Fp,
    stream: &SeedStream,
) -> Result<Vec<SamplePoint>, HadamardError> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| Ok(x.sample_point(fp, &mut stream.child(i as u64))?))
        .collect()
}

fn factor_dims(
    xs: &[&Variety],
    fp: &Fp,
    stream: &SeedStream,
) -> Result<Vec<usize>, HadamardError> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            Ok(x.intrinsic_dim(GENERIC_RANK_TRIALS, fp, &mut stream.child(i as u64))?)
        })
        .collect()
}

/// Run independent trial computations, possibly on several worker threads.
/// Trial `t` only ever reads seed-stream children indexed by `t`, so the
/// output is identical for every thread count; the merge is by trial index.
fn par_trials<T: Send>(
    trials: usize,
    threads: usize,
    f: impl Fn(usize) -> T + Sync,
) -> Vec<T> {
    let trials = trials.max(1);
    let threads = threads.clamp(1, trials);
    if threads == 1 {
        return (0..trials).map(f).collect();
    }
    let chunk_len = trials.div_ceil(threads);
    let mut out: Vec<Option<T>> = (0..trials).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (w, chunk) in out.chunks_mut(chunk_len).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk_len + i));
                }
            });
        }
    });
    out.into_iter().map(|t| t.expect("all trials filled")).collect()
}

/// `multi_dim` with the factor dimensions already known (they are invariant
/// under coordinate changes, so twist trials reuse the untwisted values).
pub fn multi_dim_with_dims(
    xs: &[&Variety],
    dims: Vec<usize>,
    trials: usize,
    threads: usize,
    fp: &Fp,
    stream: &SeedStream,
    notes: Vec<String>,
) -> Result<DimensionReport, HadamardError> {
    let ambient = require_same_ambient(xs)?;
    let records = par_trials(trials, threads, |t| -> Result<TrialRecord, HadamardError> {
        let ts = stream.child(t as u64);
        let samples = sample_factors(xs, fp, &ts)?;
        let pairs: Vec<(&Variety, &SamplePoint)> =
            xs.iter().copied().zip(samples.iter()).collect();
        let rank = stacked_frame(&pairs, fp)?.map(|m| m.rank(fp));
        Ok(TrialRecord {
            trial: t,
            points: samples.into_iter().map(|s| s.point).collect(),
            degenerate: rank.is_none(),
            rank,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(DimensionReport::from_trials(ambient, dims, records, notes))
}

/// Observed vs expected dimension of `X_1 * ... * X_k` from `trials`
/// independent samples spread over `threads` workers.
pub fn multi_dim_threaded(
    xs: &[&Variety],
    trials: usize,
    threads: usize,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<DimensionReport, HadamardError> {
    let dims = factor_dims(xs, fp, &stream.child(0))?;
    multi_dim_with_dims(xs, dims, trials, threads, fp, &stream.child(1), Vec::new())
}

/// Observed vs expected dimension of `X_1 * ... * X_k` from `trials`
/// independent samples.
pub fn multi_dim(
    xs: &[&Variety],
    trials: usize,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<DimensionReport, HadamardError> {
    multi_dim_threaded(xs, trials, 1, fp, stream)
}

/// Two-factor case of [`multi_dim`].
pub fn terracini_dim(
    x: &Variety,
    y: &Variety,
    trials: usize,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<DimensionReport, HadamardError> {
    multi_dim(&[x, y], trials, fp, stream)
}

/// Dimension of the k-fold product of `y` with itself, sampled with
/// independent points per copy.
pub fn hadamard_power(
    y: &Variety,
    k: usize,
    trials: usize,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<DimensionReport, HadamardError> {
    hadamard_power_threaded(y, k, trials, 1, fp, stream)
}

pub fn hadamard_power_threaded(
    y: &Variety,
    k: usize,
    trials: usize,
    threads: usize,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<DimensionReport, HadamardError> {
    if k == 0 {
        return Err(HadamardError::NoFactors);
    }
    let xs: Vec<&Variety> = std::iter::repeat(y).take(k).collect();
    let dims = factor_dims(&xs, fp, &stream.child(0))?;
    multi_dim_with_dims(
        &xs,
        dims,
        trials,
        threads,
        fp,
        &stream.child(1),
        vec![format!(
            "power interpreted as the {k}-fold iterated coordinatewise product of `{}` with itself",
            y.name()
        )],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistMode {
    /// Twist every factor but the last; requires the last factor to avoid
    /// all coordinate hyperplanes.
    FixLast,
    /// Twist every factor; no support requirement.
    TwistAll,
    /// Baseline: identity twists, i.e. the raw product.
    None,
}

impl TwistMode {
    fn twists(&self, slot: usize, k: usize) -> bool {
        match self {
            TwistMode::FixLast => slot + 1 < k,
            TwistMode::TwistAll => true,
            TwistMode::None => false,
        }
    }
}

impl std::fmt::Display for TwistMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TwistMode::FixLast => write!(f, "fix-last"),
            TwistMode::TwistAll => write!(f, "twist-all"),
            TwistMode::None => write!(f, "none"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TwistConfig {
    pub mode: TwistMode,
    pub trials: usize,
    /// Worker threads over the (independent) trials.
    pub threads: usize,
}

/// Per-trial dimension reports for products of freshly twisted factors.
#[derive(Debug, Clone, Serialize)]
pub struct TwistSummary {
    pub mode: TwistMode,
    pub trials: usize,
    /// Trials whose observed dimension hit the expected one.
    pub successes: usize,
    pub expected: usize,
    pub reports: Vec<DimensionReport>,
}

/// Draw fresh random coordinate changes per trial, apply them to the
/// configured slots, and measure the product dimension with one inner
/// sample each; the twist itself is the randomness under test.
pub fn twist_experiment(
    xs: &[&Variety],
    cfg: TwistConfig,
    fp: &Fp,
    stream: &SeedStream,
) -> Result<TwistSummary, HadamardError> {
    let ambient = require_same_ambient(xs)?;
    let k = xs.len();
    if cfg.mode == TwistMode::FixLast {
        let last = xs[k - 1];
        let support: CoordinateSupport =
            last.coordinate_support(GENERIC_RANK_TRIALS, fp, &mut stream.child(0))?;
        if support.is_degenerate() {
            return Err(HadamardError::PreconditionViolated {
                name: last.name().to_string(),
                support: support.contained_in,
            });
        }
    }
    let dims = factor_dims(xs, fp, &stream.child(1))?;
    let expected = expected_dim(ambient, &dims);
    let trial_stream = stream.child(2);
    let reports = par_trials(cfg.trials, cfg.threads, |t| -> Result<DimensionReport, HadamardError> {
        let ts = trial_stream.child(t as u64);
        let mut twisted: Vec<Variety> = Vec::with_capacity(k);
        for (slot, x) in xs.iter().enumerate() {
            if cfg.mode.twists(slot, k) {
                let g = Matrix::random_invertible(ambient + 1, fp, &mut ts.child(slot as u64));
                twisted.push(x.apply_transform(&g, fp)?);
            } else {
                twisted.push((*x).clone());
            }
        }
        let refs: Vec<&Variety> = twisted.iter().collect();
        multi_dim_with_dims(&refs, dims.clone(), 1, 1, fp, &ts.child(k as u64), Vec::new())
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let successes = reports
        .iter()
        .filter(|r| r.observed == Some(expected))
        .count();
    Ok(TwistSummary { mode: cfg.mode, trials: cfg.trials, successes, expected, reports })
}
