//! Dense univariate polynomials over Q and binary forms built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    self.coeffs
                        .get(i)
                        .cloned()
                        .unwrap_or_else(BigRational::zero)
                        + other
                            .coeffs
                            .get(i)
                            .cloned()
                            .unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().expect("nonzero").recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    ///
    /// Runs a primitive remainder sequence over Z: Euclid over Q lets the
    /// coefficients of the remainders grow far faster.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive_integer();
        let mut b = other.primitive_integer();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_remainder(&a, &b);
            a = b;
            b = primitive(r);
        }
        UniPoly::new(a.into_iter().map(BigRational::from_integer).collect()).monic()
    }

    /// Integer multiple with coprime coefficients and positive leading term.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        primitive(ints)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_part().degree().unwrap_or(0)
    }
}

fn primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    let Some(lead) = c.last() else {
        return c;
    };
    let mut g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if lead.is_negative() {
        g = -g;
    }
    c.into_iter().map(|x| x / &g).collect()
}

/// `lc(b)^(deg a - deg b + 1) * a` reduced modulo `b`, over Z.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().expect("nonempty").clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &lr * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// A nonzero binary form `B(s, t)` of degree `D`, stored as `B(1, t)` and
/// the multiplicity of the root `(0:1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    affine: UniPoly,
    at_infinity: usize,
}

impl BinaryForm {
    /// Read a form in the variables `s` and `t` of `p`; `p` must be
    /// homogeneous and involve no other variable. `None` when `p` is zero.
    pub fn from_polynomial(p: &Polynomial, s: usize, t: usize) -> Result<Option<BinaryForm>> {
        if p.is_zero() {
            return Ok(None);
        }
        let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)? as usize;
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (e, c) in p.terms() {
            let other = e
                .as_slice()
                .iter()
                .enumerate()
                .any(|(i, &k)| i != s && i != t && k > 0);
            if other {
                return Err(Error::InvalidHypersurface(
                    "binary form involves a third variable".into(),
                ));
            }
            coeffs[e[t] as usize] = c.clone();
        }
        let affine = UniPoly::new(coeffs);
        let deg = affine.degree().expect("nonzero form");
        Ok(Some(BinaryForm {
            affine,
            at_infinity: d - deg,
        }))
    }

    pub fn from_parts(affine: UniPoly, at_infinity: usize) -> BinaryForm {
        assert!(!affine.is_zero(), "binary form must be nonzero");
        BinaryForm {
            affine,
            at_infinity,
        }
    }

    pub fn affine(&self) -> &UniPoly {
        &self.affine
    }

    pub fn multiplicity_at_infinity(&self) -> usize {
        self.at_infinity
    }

    pub fn degree(&self) -> usize {
        self.affine.degree().expect("nonzero") + self.at_infinity
    }

    /// Distinct roots in `P^1`.
    pub fn distinct_root_count(&self) -> usize {
        self.affine.distinct_root_count() + usize::from(self.at_infinity > 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.at_infinity <= 1 && self.affine.gcd(&self.affine.derivative()).degree() == Some(0)
    }

    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        BinaryForm {
            affine: self.affine.gcd(&other.affine),
            at_infinity: self.at_infinity.min(other.at_infinity),
        }
    }

    /// Remove the root `(s:t)` with all its multiplicity.
    pub fn remove_root(&self, s: &BigRational, t: &BigRational) -> BinaryForm {
        if s.is_zero() {
            return BinaryForm {
                affine: self.affine.clone(),
                at_infinity: 0,
            };
        }
        let root = t / s;
        let lin = UniPoly::new(vec![-root.clone(), BigRational::one()]);
        let mut a = self.affine.clone();
        while a.degree().unwrap_or(0) > 0 && a.eval(&root).is_zero() {
            a = a.divrem(&lin).0;
        }
        BinaryForm {
            affine: a,
            at_infinity: self.at_infinity,
        }
    }

    pub fn has_common_root(&self, other: &BinaryForm) -> bool {
        self.gcd(other).degree() > 0
    }
}
