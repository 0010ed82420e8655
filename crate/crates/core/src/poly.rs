//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a map from [`ExponentVector`] to nonzero
//! [`BigRational`] coefficients together with a fixed variable count. Zero
//! coefficients are never stored, so structural equality is mathematical
//! equality. Exponent vectors order by graded lexicographic comparison, which
//! is also the (descending) order used when printing.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Exponents of a monomial, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `self | other` componentwise.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &ExponentVector) -> Option<ExponentVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// How variables are spelled when printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarStyle {
    /// `z0, z1, ...` (projective coordinates, 0-based).
    Projective,
    /// `x1, x2, ...` (affine germ coordinates, 1-based).
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

pub(crate) fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zero(nvars), c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::VariableOutOfRange { index: i, nvars });
        }
        Ok(Self::monomial(
            ExponentVector::unit(nvars, i),
            BigRational::one(),
        ))
    }

    pub fn monomial(e: ExponentVector, c: BigRational) -> Self {
        let mut p = Self::zero(e.len());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Build from (exponent, coefficient) pairs, summing repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, BigRational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ExponentVector) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&ExponentVector::zero(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExponentVector::is_constant)
    }

    /// Largest total degree of a term, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).max()
    }

    /// Smallest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Sum of the terms of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() < bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when every term has the same total degree. The zero polynomial
    /// counts as homogeneous (of unspecified degree).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(ExponentVector::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_zero() || !self.is_homogeneous() {
            None
        } else {
            self.total_degree()
        }
    }

    /// Greatest term in graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut r = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(e1.mul(e2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiply by the monomial `c * x^e`.
    pub fn mul_term(&self, e: &ExponentVector, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, y)| (x.mul(e), y * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut r = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ex = e.0.clone();
            ex[i] -= 1;
            r.add_term(ExponentVector(ex), c * rat(i64::from(e[i])));
        }
        Ok(r)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.as_slice()) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Substitute `images[i]` for variable `i`. All images must share one ring,
    /// which becomes the ring of the result.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, Polynomial::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::NvarsMismatch {
                left: target,
                right: bad.nvars,
            });
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut result = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k];
            }
            for (e2, c2) in t.terms {
                result.add_term(e2, c2);
            }
        }
        Ok(result)
    }

    /// `p ∘ M`: replace `z_i` by `sum_j M[i][j] w_j`.
    pub fn substitute_linear(&self, change: &LinearChange) -> Result<Polynomial> {
        let n = change.dimension();
        if n != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: n,
            });
        }
        let images: Vec<Polynomial> = change
            .matrix()
            .iter()
            .map(|row| {
                let mut p = Polynomial::zero(n);
                for (j, c) in row.iter().enumerate() {
                    p.add_term(ExponentVector::unit(n, j), c.clone());
                }
                p
            })
            .collect();
        self.compose(&images)
    }

    /// Move into a ring with `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&m| m >= nvars) {
            return Err(Error::VariableOutOfRange { index: bad, nvars });
        }
        let mut r = Polynomial::zero(nvars);
        for (e, c) in &self.terms {
            let mut ex = vec![0; nvars];
            for (i, &k) in e.as_slice().iter().enumerate() {
                ex[map[i]] += k;
            }
            r.add_term(ExponentVector(ex), c.clone());
        }
        Ok(r)
    }

    /// Coefficients with respect to one variable: `result[k]` multiplies `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Polynomial::zero(self.nvars); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (e, c) in &self.terms {
            let mut ex = e.0.clone();
            let k = ex[var] as usize;
            ex[var] = 0;
            out[k].add_term(ExponentVector(ex), c.clone());
        }
        out
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients with a positive leading coefficient (sign included in `c`).
    pub fn content(&self) -> BigRational {
        let Some((_, lead)) = self.leading_term() else {
            return BigRational::one();
        };
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let c = BigRational::new(num, den);
        if lead.is_negative() {
            -c
        } else {
            c
        }
    }

    pub fn primitive_part(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.content().recip())
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() || self.nvars != divisor.nvars {
            return None;
        }
        let (dl, dc) = divisor.leading_term()?;
        let (dl, dc) = (dl.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((e, c)) = rem.leading_term() {
            let m = e.div(&dl)?;
            let f = c / &dc;
            rem = &rem - &divisor.mul_term(&m, &f);
            quot.add_term(m, f);
        }
        Some(quot)
    }

    pub fn to_string_with(&self, style: VarStyle) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.is_constant() {
                factors.push(abs.to_string());
            }
            for (v, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = match style {
                    VarStyle::Projective => format!("z{v}"),
                    VarStyle::Affine => format!("x{}", v + 1),
                };
                factors.push(if k == 1 { name } else { format!("{name}^{k}") });
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(VarStyle::Projective))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in add")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in sub")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in mul")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

/// An invertible linear change of coordinates `z = M w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChange {
    matrix: Matrix,
}

impl LinearChange {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if n == 0 || linalg::determinant(&matrix).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(LinearChange { matrix })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        LinearChange {
            matrix: (0..n)
                .map(|i| (0..n).map(|j| rat(i64::from(i == j))).collect())
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> LinearChange {
        LinearChange {
            matrix: linalg::inverse(&self.matrix).expect("invertible by construction"),
        }
    }

    /// `M v`.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        linalg::mat_vec(&self.matrix, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn conic_times_tangent_line() {
        let prod = &p("z0", 3) * &p("z1^2 + z0*z2", 3);
        assert_eq!(prod, p("z0*z1^2 + z0^2*z2", 3));
    }

    #[test]
    fn additive_inverse_and_binomial() {
        let a = p("3*z0 - 2/5*z1*z2", 3);
        assert!((&a + &(-&a)).is_zero());
        assert_eq!(p("z0 + z1", 2).pow(2), p("z0^2 + 2*z0*z1 + z1^2", 2));
        assert_eq!(p("z0 + z1", 2).pow(0), Polynomial::one(2));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = p("z0", 1);
        let b = p("z0", 2);
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::NvarsMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn derivatives() {
        let q = p("z0^2 + z1^2 + z2^2", 3);
        assert_eq!(q.partial_derivative(0).unwrap(), p("2*z0", 3));
        assert!(p("7", 3).partial_derivative(2).unwrap().is_zero());
        let g = p("z0*z1*z2", 3).gradient();
        assert_eq!(g, vec![p("z1*z2", 3), p("z0*z2", 3), p("z0*z1", 3)]);
        assert!(q.partial_derivative(3).is_err());
    }

    #[test]
    fn linear_substitution() {
        let q = p("z0^2 + z1^2", 2);
        assert_eq!(q.substitute_linear(&LinearChange::identity(2)).unwrap(), q);
        let swap = LinearChange::from_integers(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(q.substitute_linear(&swap).unwrap(), q);
        let h = p("z1^3 + z0^2*z2", 3);
        let m =
            LinearChange::from_integers(&[vec![2, 1, 0], vec![-1, 3, 5], vec![4, 0, 1]]).unwrap();
        let hm = h.substitute_linear(&m).unwrap();
        assert_eq!(hm.homogeneous_degree(), Some(3));
        assert!(LinearChange::from_integers(&[vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn homogeneity_and_evaluation() {
        assert_eq!(p("z0*z1*z2", 3).homogeneous_degree(), Some(3));
        assert!(!p("z0 + z1^2", 2).is_homogeneous());
        let zero = Polynomial::zero(3);
        assert!(zero.is_homogeneous());
        assert_eq!(zero.homogeneous_degree(), None);
        let v = p("z1^2 + z0*z2", 3)
            .evaluate(&[rat(1), rat(0), rat(0)])
            .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn exact_division() {
        let a = p("z0^2 - z1^2", 2);
        assert_eq!(a.exact_div(&p("z0 - z1", 2)).unwrap(), p("z0 + z1", 2));
        assert!(a.exact_div(&p("z0 + 2*z1", 2)).is_none());
    }

    #[test]
    fn content_is_signed() {
        let a = p("-4/3*z0 + 2*z1", 2);
        assert_eq!(a.content(), BigRational::new((-2).into(), 3.into()));
        assert_eq!(a.primitive_part(), p("2*z0 - 3*z1", 2));
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        let a = p("z2 + z0*z1^2 + 3 + z0^2*z2 - 1/2*z1", 3);
        assert_eq!(a.to_string(), "z0^2*z2 + z0*z1^2 - 1/2*z1 + z2 + 3");
        assert_eq!(p("-z0 + z1", 2).to_string(), "-z0 + z1");
        assert_eq!(
            a.to_string_with(VarStyle::Affine),
            "x1^2*x3 + x1*x2^2 - 1/2*x2 + x3 + 3"
        );
    }
}
