//! Sparse multivariate polynomials over a prime field.
//!
//! Two layers: [`IntPoly`] keeps integer coefficients and is what the text
//! grammar and variety files round-trip through; [`MultiPoly`] is its
//! reduction mod a concrete prime and is what every computation runs on.
//! Terms are kept sorted in graded-lex descending order with no duplicate
//! exponent vectors and no zero coefficients.

mod parse;
mod uni;

pub use parse::{format_int_terms, format_terms};
pub(crate) use uni::restrict_to_line;
pub use uni::{univariate_roots, UniPoly};

use crate::field::Fp;
use crate::matrix::Matrix;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("substitution matrix is {got}x{got}, need side {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("integer coefficient overflow during expansion")]
    CoefficientOverflow,
}

/// Graded-lex descending: higher total degree first, then lex descending.
fn cmp_terms(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u64, u64) = (
        a.iter().map(|&e| e as u64).sum(),
        b.iter().map(|&e| e as u64).sum(),
    );
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn normalize<C: Copy + Eq>(
    terms: &mut Vec<(Vec<u32>, C)>,
    zero: C,
    add: impl Fn(C, C) -> Option<C>,
) -> Result<(), PolyError> {
    terms.sort_by(|x, y| cmp_terms(&x.0, &y.0));
    let mut out: Vec<(Vec<u32>, C)> = Vec::with_capacity(terms.len());
    for (e, c) in terms.drain(..) {
        match out.last_mut() {
            Some(last) if last.0 == e => {
                last.1 = add(last.1, c).ok_or(PolyError::CoefficientOverflow)?;
            }
            _ => out.push((e, c)),
        }
    }
    out.retain(|(_, c)| *c != zero);
    *terms = out;
    Ok(())
}

/// Polynomial with integer coefficients, the file/grammar-level form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, i128)>,
}

impl IntPoly {
    pub fn new(nvars: usize, mut terms: Vec<(Vec<u32>, i128)>) -> Result<Self, PolyError> {
        for (e, _) in &terms {
            if e.len() != nvars {
                return Err(PolyError::ArityMismatch { expected: nvars, got: e.len() });
            }
        }
        normalize(&mut terms, 0i128, |a, b| a.checked_add(b))?;
        Ok(IntPoly { nvars, terms })
    }

    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, i128)] {
        &self.terms
    }

    /// Parse text in the polynomial grammar over the named variables.
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, PolyError> {
        parse::parse(text, vars)
    }

    pub fn format(&self, vars: &[&str]) -> String {
        format_int_terms(&self.terms, vars)
    }

    /// Reduce every coefficient into the field.
    pub fn reduce(&self, fp: &Fp) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), fp.elem(*c)))
            .collect();
        MultiPoly::new(self.nvars, terms).expect("reduction preserves arity")
    }
}

/// Sparse polynomial with coefficients in `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, u64)>,
}

impl MultiPoly {
    pub fn new(nvars: usize, mut terms: Vec<(Vec<u32>, u64)>) -> Result<Self, PolyError> {
        for (e, _) in &terms {
            if e.len() != nvars {
                return Err(PolyError::ArityMismatch { expected: nvars, got: e.len() });
            }
        }
        // Coefficients must already be reduced; merging happens mod nothing.
        // Callers that add matching terms go through `add`.
        normalize(&mut terms, 0u64, |_, _| {
            panic!("MultiPoly::new given duplicate exponent vectors")
        })
        .ok();
        Ok(MultiPoly { nvars, terms })
    }

    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: u64) -> Self {
        if c == 0 {
            return Self::zero(nvars);
        }
        MultiPoly { nvars, terms: vec![(vec![0; nvars], c)] }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly { nvars, terms: vec![(e, 1)] }
    }

    pub fn parse(text: &str, vars: &[&str], fp: &Fp) -> Result<Self, PolyError> {
        Ok(IntPoly::parse(text, vars)?.reduce(fp))
    }

    pub fn format(&self, vars: &[&str]) -> String {
        format_terms(&self.terms, vars)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, u64)] {
        &self.terms
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d`. Zero returns `None`;
    /// callers decide what vacuous homogeneity means for them.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Per-block degree vector when the polynomial is multihomogeneous with
    /// respect to the given partition of the variables into blocks.
    pub fn multidegree(&self, block_sizes: &[usize]) -> Option<Vec<u32>> {
        debug_assert_eq!(block_sizes.iter().sum::<usize>(), self.nvars);
        let degs = |e: &[u32]| {
            let mut out = Vec::with_capacity(block_sizes.len());
            let mut start = 0;
            for &b in block_sizes {
                out.push(e[start..start + b].iter().sum::<u32>());
                start += b;
            }
            out
        };
        let mut it = self.terms.iter().map(|(e, _)| degs(e));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self, fp: &Fp) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut out = MultiPoly { nvars: self.nvars, terms };
        normalize(&mut out.terms, 0u64, |a, b| Some(fp.add(a, b))).ok();
        out
    }

    pub fn scale(&self, c: u64, fp: &Fp) -> Self {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), fp.mul(*k, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self, fp: &Fp) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                terms.push((e, fp.mul(*ca, *cb)));
            }
        }
        let mut out = MultiPoly { nvars: self.nvars, terms };
        normalize(&mut out.terms, 0u64, |a, b| Some(fp.add(a, b))).ok();
        out
    }

    pub fn pow(&self, e: u32, fp: &Fp) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..e {
            acc = acc.mul(self, fp);
        }
        acc
    }

    /// Exact value at a point of matching arity.
    pub fn evaluate(&self, point: &[u64], fp: &Fp) -> Result<u64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (j, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    m = fp.mul(m, fp.pow(point[j], exp as u64));
                }
            }
            acc = fp.add(acc, m);
        }
        Ok(acc)
    }

    /// Formal partial derivative in variable `var`.
    pub fn partial(&self, var: usize, fp: &Fp) -> Self {
        assert!(var < self.nvars);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut d = e.clone();
                d[var] -= 1;
                (d, fp.mul(*c, e[var] as u64 % fp.modulus()))
            })
            .filter(|(_, c)| *c != 0)
            .collect();
        let mut out = MultiPoly { nvars: self.nvars, terms };
        normalize(&mut out.terms, 0u64, |a, b| Some(fp.add(a, b))).ok();
        out
    }

    /// Re-embed into a larger variable space with this polynomial's
    /// variables placed at `offset`.
    pub fn shift_vars(&self, offset: usize, new_nvars: usize) -> Self {
        assert!(offset + self.nvars <= new_nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u32; new_nvars];
                ne[offset..offset + self.nvars].copy_from_slice(e);
                (ne, *c)
            })
            .collect();
        MultiPoly { nvars: new_nvars, terms }
    }
}

/// Matrix of partials `dF_i/dv_j` at a point: one row per polynomial, one
/// column per variable.
pub fn jacobian(polys: &[MultiPoly], point: &[u64], fp: &Fp) -> Result<Matrix, PolyError> {
    let nvars = polys.first().map_or(point.len(), |f| f.nvars());
    for f in polys {
        if f.nvars() != nvars {
            return Err(PolyError::ArityMismatch { expected: nvars, got: f.nvars() });
        }
    }
    if point.len() != nvars {
        return Err(PolyError::ArityMismatch { expected: nvars, got: point.len() });
    }
    let mut m = Matrix::zero(polys.len(), nvars);
    for (i, f) in polys.iter().enumerate() {
        for j in 0..nvars {
            m.set(i, j, f.partial(j, fp).evaluate(point, fp)?);
        }
    }
    Ok(m)
}

/// Substitute `x = A * y`: the pullback of `f` along the linear map `A`.
///
/// Expands monomials by repeated multiplication, memoizing powers of each
/// row's linear form; fine at the scales this crate targets.
pub fn substitute_linear(f: &MultiPoly, a: &Matrix, fp: &Fp) -> Result<MultiPoly, PolyError> {
    let n = f.nvars();
    if a.rows() != n || a.cols() != n {
        return Err(PolyError::ShapeMismatch { expected: n, got: a.rows() });
    }
    let forms: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let terms = (0..n)
                .filter(|&j| a.get(i, j) != 0)
                .map(|j| {
                    let mut e = vec![0u32; n];
                    e[j] = 1;
                    (e, a.get(i, j))
                })
                .collect();
            MultiPoly::new(n, terms).expect("linear form arity")
        })
        .collect();
    // powers[i][k] = forms[i]^k, filled lazily
    let mut powers: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| vec![MultiPoly::constant(n, 1), forms[i].clone()])
        .collect();
    let mut acc = MultiPoly::zero(n);
    for (e, c) in f.terms() {
        let mut term = MultiPoly::constant(n, *c);
        for (i, &exp) in e.iter().enumerate() {
            while powers[i].len() <= exp as usize {
                let next = powers[i].last().unwrap().mul(&forms[i], fp);
                powers[i].push(next);
            }
            if exp > 0 {
                term = term.mul(&powers[i][exp as usize], fp);
            }
        }
        acc = acc.add(&term, fp);
    }
    Ok(acc)
}

/// Shared-support evaluation plan: computes each distinct monomial once per
/// point and then takes one dot product per polynomial. Built once, reused
/// across many points (the enumeration kernels live on this).
#[derive(Debug, Clone)]
pub struct EvalPlan {
    nvars: usize,
    max_exp: Vec<u32>,
    monomials: Vec<Vec<u32>>,
    per_poly: Vec<Vec<(usize, u64)>>,
}

impl EvalPlan {
    pub fn new(polys: &[&MultiPoly]) -> Self {
        let nvars = polys.first().map_or(0, |f| f.nvars());
        let mut monomials: Vec<Vec<u32>> = polys
            .iter()
            .flat_map(|f| f.terms().iter().map(|(e, _)| e.clone()))
            .collect();
        monomials.sort();
        monomials.dedup();
        let index = |e: &Vec<u32>| monomials.binary_search(e).expect("monomial indexed");
        let per_poly = polys
            .iter()
            .map(|f| f.terms().iter().map(|(e, c)| (index(e), *c)).collect())
            .collect();
        let mut max_exp = vec![0u32; nvars];
        for m in &monomials {
            for (j, &e) in m.iter().enumerate() {
                max_exp[j] = max_exp[j].max(e);
            }
        }
        EvalPlan { nvars, max_exp, monomials, per_poly }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Values of every planned polynomial at `point`, reusing `scratch`
    /// buffers across calls.
    pub fn eval_into(&self, point: &[u64], fp: &Fp, scratch: &mut EvalScratch, out: &mut Vec<u64>) {
        debug_assert_eq!(point.len(), self.nvars);
        scratch.powers.clear();
        for (j, &m) in self.max_exp.iter().enumerate() {
            let base = point[j];
            let mut v = 1u64;
            scratch.powers.push(Vec::with_capacity(m as usize + 1));
            let col = scratch.powers.last_mut().unwrap();
            col.push(1);
            for _ in 0..m {
                v = fp.mul(v, base);
                col.push(v);
            }
        }
        scratch.mono_values.clear();
        for mono in &self.monomials {
            let mut v = 1u64;
            for (j, &e) in mono.iter().enumerate() {
                if e > 0 {
                    v = fp.mul(v, scratch.powers[j][e as usize]);
                }
            }
            scratch.mono_values.push(v);
        }
        out.clear();
        for terms in &self.per_poly {
            let mut acc = 0u64;
            for &(idx, c) in terms {
                acc = fp.add(acc, fp.mul(c, scratch.mono_values[idx]));
            }
            out.push(acc);
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct EvalScratch {
    powers: Vec<Vec<u64>>,
    mono_values: Vec<u64>,
}
