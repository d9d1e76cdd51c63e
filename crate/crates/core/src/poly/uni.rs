//! Dense univariate polynomials over `F_p` and exact root extraction.
//!
//! Roots are found by splitting off the distinct linear part with
//! `gcd(f, x^p - x)` (computing `x^p mod f` by square-and-multiply) and then
//! breaking it into linear factors by randomized equal-degree splitting.

use super::{MultiPoly, PolyError};
use crate::field::Fp;
use crate::rng::SeedStream;

/// Coefficients low-to-high with no trailing zeros; empty means zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: u64) -> Self {
        Self::new(vec![c])
    }

    pub fn x_plus(c: u64) -> Self {
        Self::new(vec![c, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: u64, fp: &Fp) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| fp.add(fp.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self, fp: &Fp) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                fp.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self, fp: &Fp) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                fp.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self, fp: &Fp) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = fp.add(coeffs[i + j], fp.mul(a, b));
            }
        }
        Self::new(coeffs)
    }

    /// Long division: `(quotient, remainder)` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self, fp: &Fp) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = fp.inv(*d.coeffs.last().unwrap()).expect("leading coeff nonzero");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = fp.mul(*rem.last().unwrap(), lead_inv);
            if c != 0 {
                quo[k] = c;
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] = fp.sub(rem[k + i], fp.mul(c, dc));
                }
            }
            rem.pop();
        }
        (Self::new(quo), Self::new(rem))
    }

    pub fn rem(&self, d: &Self, fp: &Fp) -> Self {
        self.divrem(d, fp).1
    }

    pub fn monic(&self, fp: &Fp) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(&lead) => {
                let inv = fp.inv(lead).expect("leading coeff nonzero");
                Self::new(self.coeffs.iter().map(|&c| fp.mul(c, inv)).collect())
            }
        }
    }

    pub fn gcd(&self, other: &Self, fp: &Fp) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fp);
            a = b;
            b = r;
        }
        a.monic(fp)
    }

    /// `base^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &Self, fp: &Fp) -> Self {
        let mut base = self.rem(m, fp);
        let mut acc = Self::constant(1).rem(m, fp);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, fp).rem(m, fp);
            }
            base = base.mul(&base, fp).rem(m, fp);
            e >>= 1;
        }
        acc
    }

    /// All roots in `F_p`, sorted ascending. The polynomial must be nonzero.
    pub fn roots(&self, fp: &Fp, stream: &mut SeedStream) -> Vec<u64> {
        assert!(!self.is_zero());
        let mut out = Vec::new();
        let mut f = self.clone();
        // factor out x^k
        if f.coeffs[0] == 0 {
            out.push(0);
            let k = f.coeffs.iter().position(|&c| c != 0).expect("nonzero");
            f = Self::new(f.coeffs[k..].to_vec());
        }
        if f.degree() == Some(0) || f.is_zero() {
            out.sort_unstable();
            return out;
        }
        let f = f.monic(fp);
        // distinct roots divide x^p - x
        let x = Self::new(vec![0, 1]);
        let xp = x.pow_mod(fp.modulus(), &f, fp);
        let g = f.gcd(&xp.sub(&x, fp), fp);
        // equal-degree splitting down to linear factors
        let mut stack = vec![g];
        while let Some(h) = stack.pop() {
            match h.degree() {
                None | Some(0) => {}
                Some(1) => out.push(fp.neg(h.coeffs[0])),
                Some(_) => {
                    // gcd with (x + delta)^((p-1)/2) - 1 splits off the
                    // shifted quadratic residues; succeeds for about half
                    // of all delta
                    let delta = fp.random_elem(stream);
                    let probe = Self::x_plus(delta);
                    let t = probe.pow_mod((fp.modulus() - 1) / 2, &h, fp);
                    let split = h.gcd(&t.sub(&Self::constant(1), fp), fp);
                    match split.degree() {
                        Some(d) if d > 0 && d < h.degree().unwrap() => {
                            let (quo, rem) = h.divrem(&split, fp);
                            debug_assert!(rem.is_zero());
                            stack.push(split);
                            stack.push(quo);
                        }
                        _ => stack.push(h),
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Exact set of roots of a nonzero univariate polynomial.
pub fn univariate_roots(
    f: &MultiPoly,
    fp: &Fp,
    stream: &mut SeedStream,
) -> Result<Vec<u64>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.nvars() != 1 {
        return Err(PolyError::ArityMismatch { expected: 1, got: f.nvars() });
    }
    let mut coeffs = vec![0u64; f.degree() as usize + 1];
    for (e, c) in f.terms() {
        coeffs[e[0] as usize] = *c;
    }
    Ok(UniPoly::new(coeffs).roots(fp, stream))
}

/// Restrict a polynomial to the parametrized line `a + u*b`: substitute
/// `x_i = a_i + u*b_i` and collect a univariate polynomial in `u`.
pub(crate) fn restrict_to_line(f: &MultiPoly, a: &[u64], b: &[u64], fp: &Fp) -> UniPoly {
    assert_eq!(a.len(), f.nvars());
    assert_eq!(b.len(), f.nvars());
    let mut acc = UniPoly::zero();
    for (e, c) in f.terms() {
        let mut term = UniPoly::constant(*c);
        for (i, &exp) in e.iter().enumerate() {
            let line = UniPoly::new(vec![a[i], b[i]]);
            for _ in 0..exp {
                term = term.mul(&line, fp);
            }
        }
        acc = acc.add(&term, fp);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_of(text: &str, p: u64, seed: u64) -> Vec<u64> {
        let fp = Fp::new(p);
        let f = MultiPoly::parse(text, &["x0"], &fp).unwrap();
        univariate_roots(&f, &fp, &mut SeedStream::root(seed)).unwrap()
    }

    #[test]
    fn quadratic_with_two_roots() {
        assert_eq!(roots_of("x0^2 - 1", 7, 0), vec![1, 6]);
    }

    #[test]
    fn irreducible_quadratic_has_no_roots() {
        assert_eq!(roots_of("x0^2 + 1", 7, 0), Vec::<u64>::new());
    }

    #[test]
    fn cubic_with_zero_root() {
        assert_eq!(roots_of("x0^3 - x0", 5, 0), vec![0, 1, 4]);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let fp = Fp::new(7);
        let z = MultiPoly::zero(1);
        assert!(matches!(
            univariate_roots(&z, &fp, &mut SeedStream::root(0)),
            Err(PolyError::ZeroPolynomial)
        ));
    }

    #[test]
    fn repeated_roots_reported_once() {
        assert_eq!(roots_of("(x0 - 2)^3 * x0^2", 101, 1), vec![0, 2]);
    }

    #[test]
    fn roots_match_exhaustive_scan_for_many_small_primes() {
        // independent oracle: scan the whole field
        for p in [5u64, 7, 101, 10007] {
            let fp = Fp::new(p);
            let mut s = SeedStream::root(p);
            for trial in 0..6 {
                let deg = 1 + s.below(7) as usize;
                let mut coeffs: Vec<u64> = (0..=deg).map(|_| fp.random_elem(&mut s)).collect();
                if coeffs[deg] == 0 {
                    coeffs[deg] = 1;
                }
                let f = UniPoly::new(coeffs);
                let got = f.roots(&fp, &mut SeedStream::root(trial));
                let want: Vec<u64> = (0..p).filter(|&x| f.evaluate(x, &fp) == 0).collect();
                assert_eq!(got, want, "p={p} trial={trial}");
            }
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let fp = Fp::new(101);
        let mut s = SeedStream::root(3);
        for _ in 0..20 {
            let a = UniPoly::new((0..8).map(|_| fp.random_elem(&mut s)).collect());
            let mut dvec: Vec<u64> = (0..4).map(|_| fp.random_elem(&mut s)).collect();
            dvec[3] = fp.random_nonzero(&mut s);
            let d = UniPoly::new(dvec);
            let (q, r) = a.divrem(&d, &fp);
            assert_eq!(q.mul(&d, &fp).add(&r, &fp), a);
            assert!(r.degree().map_or(true, |rd| rd < d.degree().unwrap()));
        }
    }

    #[test]
    fn line_restriction_matches_pointwise_evaluation() {
        let fp = Fp::new(101);
        let f = MultiPoly::parse("x0^3 + x1^3 + x2^3", &["x0", "x1", "x2"], &fp).unwrap();
        let a = [1u64, 17, 55];
        let b = [9u64, 3, 0];
        let g = restrict_to_line(&f, &a, &b, &fp);
        for u in [0u64, 1, 2, 50, 100] {
            let pt: Vec<u64> = (0..3).map(|i| fp.add(a[i], fp.mul(u, b[i]))).collect();
            assert_eq!(g.evaluate(u, &fp), f.evaluate(&pt, &fp).unwrap());
        }
    }
}
