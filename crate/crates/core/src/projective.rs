//! Invariants of a projective hypersurface at a point.
//!
//! A point `x` is moved to the origin of an affine chart by a linear change
//! whose first column is `x`; everything local (multiplicity, Milnor numbers,
//! sectional Milnor numbers) is computed on the resulting germ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::local::{milnor_number, Budget, Dimension, LocalGerm, DEFAULT_BUDGET};
use crate::poly::{ExponentVector, LinearChange, Polynomial};

/// Range of the integer coefficients of random slices.
pub const SLICE_COEFF_BOUND: i64 = 997;
/// Range of the coordinates of random Hessian evaluation points.
pub const HESSIAN_SAMPLE_BOUND: i64 = 10_000;

/// Knobs shared by the randomised and budgeted computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub trials: usize,
    pub budget: u64,
    pub hessian_samples: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 42,
            trials: 5,
            budget: DEFAULT_BUDGET,
            hessian_samples: 8,
        }
    }
}

impl Settings {
    pub fn new_budget(&self) -> Budget {
        Budget::new(self.budget)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Settings { seed, ..self }
    }
}

/// Independent sub-seed for the `salt`-th randomised step (splitmix64 mixing).
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random invertible integer matrix with entries in `[-bound, bound]`.
pub fn random_change(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> LinearChange {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        if let Ok(m) = LinearChange::from_integers(&rows) {
            return m;
        }
    }
}

/// A point of projective space with a canonical integer representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

impl ProjectivePoint {
    /// Normalise: divide by the gcd and make the first nonzero entry positive.
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        let first_negative = coords
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(Signed::is_negative);
        let g = if first_negative { -g } else { g };
        Ok(ProjectivePoint {
            coords: coords.into_iter().map(|c| c / &g).collect(),
        })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clear denominators of a rational representative.
    pub fn from_rationals(coords: &[BigRational]) -> Result<Self> {
        let l = coords.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Self::new(
            coords
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coords
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Comma-separated coordinates, the form accepted by `FromStr`.
    pub fn to_csv(&self) -> String {
        self.coords
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;

    /// Accepts `1,0,-2`, `(1:0:-2)` and rational entries such as `1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let sep = if inner.contains(':') { ':' } else { ',' };
        let coords = inner
            .split(sep)
            .map(|t| {
                let t = t.trim();
                t.parse::<BigRational>()
                    .or_else(|_| t.parse::<BigInt>().map(BigRational::from_integer))
                    .map_err(|_| Error::InvalidPoint(format!("bad coordinate `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(&coords)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A hypersurface `V(h)` in `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    h: Polynomial,
    n: usize,
    d: u32,
}

impl Hypersurface {
    pub fn new(h: Polynomial) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::InvalidHypersurface("zero polynomial".into()));
        }
        let d = h.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        if d == 0 {
            return Err(Error::InvalidHypersurface("degree 0".into()));
        }
        if h.nvars() < 3 {
            return Err(Error::InvalidHypersurface(format!(
                "ambient dimension {} is below 2",
                h.nvars().saturating_sub(1)
            )));
        }
        Ok(Hypersurface {
            n: h.nvars() - 1,
            h,
            d,
        })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.h
    }

    /// Dimension `n` of the ambient projective space.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    fn check_point(&self, x: &ProjectivePoint) -> Result<()> {
        if x.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &ProjectivePoint) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.h.evaluate(&x.to_rationals())?.is_zero())
    }

    /// True when `x` lies on `V(h)` and the gradient vanishes there.
    pub fn is_singular_at(&self, x: &ProjectivePoint) -> Result<bool> {
        self.check_point(x)?;
        let v = x.to_rationals();
        for g in self.h.gradient() {
            if !g.evaluate(&v)?.is_zero() {
                return Ok(false);
            }
        }
        // Euler: all partials zero forces h(x) = 0
        Ok(true)
    }

    /// `V(h ∘ M)`: the image of `V(h)` under `M^{-1}`.
    pub fn transform(&self, change: &LinearChange) -> Result<Hypersurface> {
        Hypersurface::new(self.h.substitute_linear(change)?)
    }
}

/// Invertible matrix with first column `x`; the other columns are the unit
/// vectors `e_j`, `j` different from the first nonzero coordinate of `x`.
pub fn completion_matrix(x: &ProjectivePoint) -> LinearChange {
    let n1 = x.len();
    let pivot = x
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero point");
    let others: Vec<usize> = (0..n1).filter(|&j| j != pivot).collect();
    let mut m: Matrix = vec![vec![BigRational::zero(); n1]; n1];
    for (i, c) in x.coords().iter().enumerate() {
        m[i][0] = BigRational::from_integer(c.clone());
    }
    for (col, &j) in others.iter().enumerate() {
        m[j][col + 1] = BigRational::one();
    }
    LinearChange::new(m).expect("completion is invertible")
}

/// Affine equation of `V(h)` near `x`, with `x` at the origin.
pub fn move_to_origin(hs: &Hypersurface, x: &ProjectivePoint) -> Result<LocalGerm> {
    if !hs.contains(x)? {
        return Err(Error::PointNotOnHypersurface(x.to_string()));
    }
    let m = completion_matrix(x);
    let n = hs.dim();
    // z_i = M[i][0] + sum_{j>=1} M[i][j] x_j, i.e. substitute and set w0 = 1
    let images: Vec<Polynomial> = m
        .matrix()
        .iter()
        .map(|row| {
            let mut terms = vec![(ExponentVector::zero(n), row[0].clone())];
            for (j, c) in row.iter().enumerate().skip(1) {
                terms.push((ExponentVector::unit(n, j - 1), c.clone()));
            }
            Polynomial::from_terms(n, terms).expect("consistent ring")
        })
        .collect();
    LocalGerm::new(hs.poly().compose(&images)?)
}

/// Multiplicity of `V(h)` at `x`: the order of the local equation.
pub fn multiplicity(hs: &Hypersurface, x: &ProjectivePoint) -> Result<u32> {
    let germ = move_to_origin(hs, x)?;
    Ok(germ.order().expect("nonzero germ of a nonzero form"))
}

/// The linear space of points `x` with `sum x_i ∂h/∂z_i ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApexSpace {
    ambient: usize,
    basis: Vec<Vec<BigRational>>,
}

impl ApexSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    /// A nonzero apex space means `V(h)` is a cone.
    pub fn is_cone(&self) -> bool {
        !self.basis.is_empty()
    }

    pub fn contains(&self, x: &ProjectivePoint) -> bool {
        if x.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        let r = linalg::rank(&rows);
        rows.push(x.to_rationals());
        linalg::rank(&rows) == r
    }

    pub fn points(&self) -> Vec<ProjectivePoint> {
        self.basis
            .iter()
            .map(|v| ProjectivePoint::from_rationals(v).expect("nonzero basis vector"))
            .collect()
    }
}

pub fn apex_space(hs: &Hypersurface) -> ApexSpace {
    let grad = hs.poly().gradient();
    let n1 = grad.len();
    let mut monomials: Vec<&ExponentVector> = grad
        .iter()
        .flat_map(|g| g.terms().map(|(e, _)| e))
        .collect();
    monomials.sort();
    monomials.dedup();
    let rows: Matrix = monomials
        .iter()
        .map(|e| grad.iter().map(|g| g.coeff(e)).collect())
        .collect();
    let basis = linalg::nullspace(&rows, n1);
    // tidy representatives: integer vectors
    let basis = if basis.is_empty() {
        basis
    } else {
        let (red, _) = linalg::rref(&basis);
        red.into_iter()
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect()
    };
    ApexSpace { ambient: n1, basis }
}

pub fn is_cone_with_apex(hs: &Hypersurface, x: &ProjectivePoint) -> bool {
    apex_space(hs).contains(x)
}

fn random_slice(f: &Polynomial, dim: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let n = f.nvars();
    let images: Vec<Polynomial> = (0..n)
        .map(|j| {
            if j < dim {
                Polynomial::var(dim, j).expect("in range")
            } else {
                let terms = (0..dim).map(|k| {
                    let c: i64 = rng.gen_range(-SLICE_COEFF_BOUND..=SLICE_COEFF_BOUND);
                    (
                        ExponentVector::unit(dim, k),
                        BigRational::from_integer(c.into()),
                    )
                });
                Polynomial::from_terms(dim, terms).expect("consistent ring")
            }
        })
        .collect();
    f.compose(&images).expect("images match the ring")
}

/// Minimum Milnor number over `trials` random `dim`-dimensional linear
/// sections through the origin.
pub fn sectional_milnor_number(
    germ: &LocalGerm,
    dim: usize,
    settings: &Settings,
    rng: &mut ChaCha8Rng,
) -> Result<Dimension> {
    let n = germ.nvars();
    if dim == 0 {
        return Ok(Dimension::Finite(1));
    }
    if dim >= n {
        return milnor_number(germ, &mut settings.new_budget());
    }
    let mut best = Dimension::Infinite;
    for _ in 0..settings.trials.max(1) {
        let slice = LocalGerm::new(random_slice(germ.poly(), dim, rng))?;
        let mu = milnor_number(&slice, &mut settings.new_budget())?;
        best = best.min(mu);
    }
    Ok(best)
}

/// `[μ^(0), …, μ^(n)]` at a singular point `x`.
pub fn sectional_milnor_sequence(
    hs: &Hypersurface,
    x: &ProjectivePoint,
    settings: &Settings,
) -> Result<Vec<u64>> {
    let germ = move_to_origin(hs, x)?;
    if germ.order() == Some(1) {
        return Err(Error::PointNotSingular(x.to_string()));
    }
    sequence_of_germ(&germ, settings, &x.to_string())
}

/// `[μ^(0), …, μ^(n)]` of a germ at the origin.
pub fn germ_milnor_sequence(germ: &LocalGerm, settings: &Settings) -> Result<Vec<u64>> {
    sequence_of_germ(germ, settings, "origin")
}

pub(crate) fn sequence_of_germ(
    germ: &LocalGerm,
    settings: &Settings,
    label: &str,
) -> Result<Vec<u64>> {
    let n = germ.nvars();
    let top = milnor_number(germ, &mut settings.new_budget())?
        .finite()
        .ok_or_else(|| Error::NonIsolated(label.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut seq = vec![1];
    for i in 1..n {
        let mu = sectional_milnor_number(germ, i, settings, &mut rng)?;
        seq.push(
            mu.finite()
                .ok_or_else(|| Error::NonIsolated(format!("{label}, {i}-dimensional section")))?,
        );
    }
    seq.push(top);
    Ok(seq)
}

/// True when `μ^(i)^2 <= μ^(i-1) μ^(i+1)` for all inner indices.
pub fn is_log_convex(seq: &[u64]) -> bool {
    seq.windows(3)
        .all(|w| u128::from(w[1]) * u128::from(w[1]) <= u128::from(w[0]) * u128::from(w[2]))
}

/// Milnor number at each listed point after validating the list.
pub fn milnor_numbers_at(
    hs: &Hypersurface,
    points: &[ProjectivePoint],
    settings: &Settings,
) -> Result<Vec<u64>> {
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::DuplicatePoint(p.to_string()));
        }
        if !hs.contains(p)? {
            return Err(Error::PointNotOnHypersurface(p.to_string()));
        }
        if !hs.is_singular_at(p)? {
            return Err(Error::PointNotSingular(p.to_string()));
        }
    }
    points
        .iter()
        .map(|p| {
            let germ = move_to_origin(hs, p)?;
            milnor_number(&germ, &mut settings.new_budget())?
                .finite()
                .ok_or_else(|| Error::NonIsolated(p.to_string()))
        })
        .collect()
}

/// `(d-1)^n - Σ μ(p)` over the given (assumed complete) singular point list.
pub fn polar_degree(
    hs: &Hypersurface,
    points: &[ProjectivePoint],
    settings: &Settings,
) -> Result<u64> {
    let mus = milnor_numbers_at(hs, points, settings)?;
    polar_degree_from_mus(hs, &mus)
}

pub fn polar_degree_from_mus(hs: &Hypersurface, mus: &[u64]) -> Result<u64> {
    let base = BigInt::from(hs.degree() - 1).pow(hs.dim() as u32);
    let total: BigInt = mus.iter().map(|&m| BigInt::from(m)).sum();
    let deg = base - total;
    if deg.is_negative() {
        return Err(Error::NegativePolarDegree(deg.to_i64().unwrap_or(i64::MIN)));
    }
    deg.to_u64()
        .ok_or_else(|| Error::InvalidHypersurface("polar degree overflows u64".into()))
}

/// Outcome of the Hessian-determinant test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HessianVerdict {
    pub vanishes: bool,
    /// A nonzero sample, or a Hessian of degree zero, settles the question.
    pub certain: bool,
    pub samples: usize,
    /// Degree of `det Hess(h)` as a polynomial.
    pub determinant_degree: u32,
    /// Schwartz–Zippel bound on the probability of a false "vanishes".
    pub error_bound: f64,
}

pub fn hessian_matrix(hs: &Hypersurface) -> Vec<Vec<Polynomial>> {
    let grad = hs.poly().gradient();
    grad.iter().map(|g| g.gradient()).collect()
}

pub fn hessian_vanishes(hs: &Hypersurface, seed: u64, samples: usize) -> HessianVerdict {
    let n1 = hs.dim() + 1;
    let deg = (n1 as u32) * hs.degree().saturating_sub(2);
    let hess = hessian_matrix(hs);
    let range = (2 * HESSIAN_SAMPLE_BOUND + 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = samples.max(1);
    let mut tried = 0;
    for _ in 0..samples {
        tried += 1;
        let pt: Vec<BigRational> = (0..n1)
            .map(|_| {
                BigRational::from_integer(
                    rng.gen_range(-HESSIAN_SAMPLE_BOUND..=HESSIAN_SAMPLE_BOUND)
                        .into(),
                )
            })
            .collect();
        let m: Matrix = hess
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.evaluate(&pt).expect("point has the right length"))
                    .collect()
            })
            .collect();
        if !linalg::determinant(&m).is_zero() {
            return HessianVerdict {
                vanishes: false,
                certain: true,
                samples: tried,
                determinant_degree: deg,
                error_bound: 0.0,
            };
        }
        if deg == 0 {
            break;
        }
    }
    let per_sample = f64::from(deg) / range;
    HessianVerdict {
        vanishes: true,
        certain: deg == 0 || hs.degree() < 2,
        samples: tried,
        determinant_degree: deg,
        error_bound: if deg == 0 {
            0.0
        } else {
            per_sample.powi(tried as i32)
        },
    }
}

/// Lower bounds for the polar degree at one point, with the cone exemption.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub point: ProjectivePoint,
    pub polar_degree: u64,
    pub multiplicity: u32,
    pub mu_sequence: Vec<u64>,
    pub cone_with_apex: bool,
    /// `deg >= (m-1)^(n-1)`
    pub multiplicity_bound_holds: bool,
    /// `deg >= μ^(n-1)`
    pub sectional_bound_holds: bool,
}

impl TheoremReport {
    /// Both bounds must hold unless `V(h)` is a cone with apex at the point.
    pub fn passes(&self) -> bool {
        self.cone_with_apex || (self.multiplicity_bound_holds && self.sectional_bound_holds)
    }
}

pub fn theorem_checks(
    hs: &Hypersurface,
    x: &ProjectivePoint,
    singular_points: &[ProjectivePoint],
    settings: &Settings,
) -> Result<TheoremReport> {
    let deg = polar_degree(hs, singular_points, settings)?;
    let m = multiplicity(hs, x)?;
    let seq = sectional_milnor_sequence(hs, x, settings)?;
    Ok(theorem_report(hs, x, deg, m, seq))
}

pub(crate) fn theorem_report(
    hs: &Hypersurface,
    x: &ProjectivePoint,
    deg: u64,
    m: u32,
    seq: Vec<u64>,
) -> TheoremReport {
    let n = hs.dim() as u32;
    let bound1 = BigInt::from(m - 1).pow(n - 1);
    let sectional = seq[hs.dim() - 1];
    TheoremReport {
        point: x.clone(),
        polar_degree: deg,
        multiplicity: m,
        cone_with_apex: is_cone_with_apex(hs, x),
        multiplicity_bound_holds: BigInt::from(deg) >= bound1,
        sectional_bound_holds: deg >= sectional,
        mu_sequence: seq,
    }
}
