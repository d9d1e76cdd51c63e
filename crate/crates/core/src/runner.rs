//! Seed-to-result drivers shared by the CLI and the acceptance suite.
//!
//! A run owns the whole randomness budget: the working prime is drawn from
//! the seed stream (so identical seeds give identical primes), varieties are
//! instantiated from prime-independent descriptions, and a dimension verdict
//! of DEFECT is re-run under two further random primes before being
//! reported — a rank can only drop under specialization, so the best
//! observed value across primes is the one to trust.

use crate::binomial::{binomial_containment, BinomialError, BinomialScan};
use crate::counts::CountsError;
use crate::field::{random_prime, Fp};
use crate::hadamard::{
    hadamard_param_product, hadamard_power_threaded, multi_dim_threaded, twist_experiment,
    DimensionReport, HadamardError, TwistConfig, TwistMode, TwistSummary, Verdict,
};
use crate::oracle::{point_count_dim, OracleError, OracleReport};
use crate::rng::SeedStream;
use crate::variety::{ProjectivePoint, Variety, VarietyError, VarietySpec};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Hadamard(#[from] HadamardError),
    #[error(transparent)]
    Binomial(#[from] BinomialError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Counts(#[from] CountsError),
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub seed: u64,
    pub prime_bits: u32,
    pub trials: usize,
    /// Worker threads for independent trials; results do not depend on it.
    pub threads: usize,
    /// Re-run DEFECT verdicts under two further primes.
    pub hedge: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, prime_bits: 62, trials: 8, threads: 1, hedge: true }
    }
}

/// Maximum primes tried when hedging a DEFECT verdict.
pub const HEDGE_ATTEMPTS: u64 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct PrimeAttempt {
    pub prime: u64,
    pub observed: Option<usize>,
    pub verdict: Verdict,
}

/// Dimension result, possibly corroborated under several primes. `report`
/// is the attempt with the largest observed dimension.
#[derive(Debug, Clone, Serialize)]
pub struct HedgedDimension {
    pub prime: u64,
    pub report: DimensionReport,
    pub attempts: Vec<PrimeAttempt>,
}

fn hedged(
    opts: &RunOptions,
    f: impl Fn(&Fp, &SeedStream) -> Result<DimensionReport, RunError>,
) -> Result<HedgedDimension, RunError> {
    let root = SeedStream::root(opts.seed);
    let prime_stream = root.child(0);
    let comp_stream = root.child(1);
    let max_attempts = if opts.hedge { HEDGE_ATTEMPTS } else { 1 };
    let mut attempts = Vec::new();
    let mut best: Option<(u64, DimensionReport)> = None;
    for a in 0..max_attempts {
        let prime = random_prime(opts.prime_bits, &mut prime_stream.child(a));
        let fp = Fp::new(prime);
        let report = f(&fp, &comp_stream.child(a))?;
        attempts.push(PrimeAttempt {
            prime,
            observed: report.observed,
            verdict: report.verdict,
        });
        let better = match &best {
            None => true,
            Some((_, b)) => report.observed > b.observed,
        };
        if better {
            best = Some((prime, report));
        }
        if !matches!(best.as_ref().unwrap().1.verdict, Verdict::Defect(_)) {
            break;
        }
    }
    let (prime, report) = best.expect("at least one attempt ran");
    Ok(HedgedDimension { prime, report, attempts })
}

fn instantiate_all(specs: &[&VarietySpec], fp: &Fp) -> Result<Vec<Variety>, RunError> {
    Ok(specs
        .iter()
        .map(|s| s.instantiate(fp))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Observed vs expected dimension of the product of the given varieties.
pub fn run_multi_dim(
    specs: &[&VarietySpec],
    opts: &RunOptions,
) -> Result<HedgedDimension, RunError> {
    hedged(opts, |fp, stream| {
        let vars = instantiate_all(specs, fp)?;
        let refs: Vec<&Variety> = vars.iter().collect();
        Ok(multi_dim_threaded(&refs, opts.trials, opts.threads, fp, stream)?)
    })
}

/// Dimension of the k-fold power of one variety.
pub fn run_power(
    spec: &VarietySpec,
    k: usize,
    opts: &RunOptions,
) -> Result<HedgedDimension, RunError> {
    hedged(opts, |fp, stream| {
        let y = spec.instantiate(fp)?;
        Ok(hadamard_power_threaded(&y, k, opts.trials, opts.threads, fp, stream)?)
    })
}

/// Twist experiment under a single seed-derived prime (each trial already
/// draws fresh random transforms, so there is nothing to hedge).
pub fn run_twist(
    specs: &[&VarietySpec],
    mode: TwistMode,
    opts: &RunOptions,
) -> Result<(u64, TwistSummary), RunError> {
    let root = SeedStream::root(opts.seed);
    let prime = random_prime(opts.prime_bits, &mut root.child(0).child(0));
    let fp = Fp::new(prime);
    let vars = instantiate_all(specs, &fp)?;
    let refs: Vec<&Variety> = vars.iter().collect();
    let summary = twist_experiment(
        &refs,
        TwistConfig { mode, trials: opts.trials, threads: opts.threads },
        &fp,
        &root.child(1).child(0),
    )?;
    Ok((prime, summary))
}

/// Binomial containment scan under a seed-derived prime.
pub fn run_binomial(
    spec: &VarietySpec,
    max_degree: u32,
    samples: Option<usize>,
    opts: &RunOptions,
) -> Result<(u64, BinomialScan), RunError> {
    let root = SeedStream::root(opts.seed);
    let prime = random_prime(opts.prime_bits, &mut root.child(0).child(0));
    let fp = Fp::new(prime);
    let y = spec.instantiate(&fp)?;
    let scan = binomial_containment(&y, max_degree, samples, &fp, &root.child(1).child(0))?;
    Ok((prime, scan))
}

/// One sampled point.
pub fn run_sample(
    spec: &VarietySpec,
    opts: &RunOptions,
) -> Result<(u64, ProjectivePoint), RunError> {
    let root = SeedStream::root(opts.seed);
    let prime = random_prime(opts.prime_bits, &mut root.child(0).child(0));
    let fp = Fp::new(prime);
    let v = spec.instantiate(&fp)?;
    let at = v.sample_point(&fp, &mut root.child(1).child(0))?;
    Ok((prime, at.point))
}

/// Point-count the product of the given varieties over `F_q`, optionally
/// repeating the whole product `power` times. `q` must be prime; the CLI
/// validates before calling.
pub fn run_oracle(
    specs: &[&VarietySpec],
    power: usize,
    q: u64,
    seed: u64,
) -> Result<OracleReport, RunError> {
    let fq = Fp::new(q);
    let root = SeedStream::root(seed);
    let vars = instantiate_all(specs, &fq)?;
    let mut probe = root.child(2);
    let mut folded: Option<Variety> = None;
    for v in &vars {
        folded = Some(match folded {
            None => v.clone(),
            Some(acc) => hadamard_param_product(&acc, v, &fq, &mut probe)?,
        });
    }
    let base = folded.ok_or(HadamardError::NoFactors)?;
    let mut target = base.clone();
    for _ in 1..power.max(1) {
        target = hadamard_param_product(&target, &base, &fq, &mut probe)?;
    }
    Ok(point_count_dim(&target, &fq)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn opts(seed: u64) -> RunOptions {
        RunOptions { seed, trials: 4, ..Default::default() }
    }

    #[test]
    fn hedging_keeps_structural_defects() {
        let tc = catalogue::spec("twisted_cubic").unwrap();
        let run = run_multi_dim(&[&tc, &tc], &opts(1)).unwrap();
        assert_eq!(run.report.observed, Some(1));
        assert_eq!(run.report.verdict, Verdict::Defect(1));
        // a structural defect is retried under the full hedge budget
        assert_eq!(run.attempts.len(), HEDGE_ATTEMPTS as usize);
        let primes: Vec<u64> = run.attempts.iter().map(|a| a.prime).collect();
        assert!(primes.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn matches_stop_after_one_attempt() {
        let tc = catalogue::spec("twisted_cubic").unwrap();
        let run = run_multi_dim(&[&tc], &opts(2)).unwrap();
        assert_eq!(run.report.verdict, Verdict::Match);
        assert_eq!(run.attempts.len(), 1);
    }

    #[test]
    fn runs_are_deterministic() {
        let tc = catalogue::spec("twisted_cubic").unwrap();
        let a = run_multi_dim(&[&tc, &tc], &opts(7)).unwrap();
        let b = run_multi_dim(&[&tc, &tc], &opts(7)).unwrap();
        assert_eq!(a.prime, b.prime);
        assert_eq!(a.report.observed, b.report.observed);
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
    }

    #[test]
    fn oracle_runner_counts_products() {
        let tc = catalogue::spec("twisted_cubic").unwrap();
        let r = run_oracle(&[&tc, &tc], 1, 101, 0).unwrap();
        assert_eq!(r.count, 102);
        let r = run_oracle(&[&tc], 2, 101, 0).unwrap();
        assert_eq!(r.count, 102);
    }

    #[test]
    fn twist_runner_summary() {
        let a = catalogue::spec("skew_line_01").unwrap();
        let b = catalogue::spec("skew_line_23").unwrap();
        let (_, summary) = run_twist(&[&a, &b], TwistMode::TwistAll, &opts(3)).unwrap();
        assert_eq!(summary.successes, summary.trials);
        assert_eq!(summary.expected, 2);
    }
}
