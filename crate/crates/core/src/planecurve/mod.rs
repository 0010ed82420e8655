//! Plane curves: resultants, intersection counts, tangent cones, branches and
//! an elimination-based polar degree.
//!
//! Counting distinct points of a zero-dimensional set in `P^2` is done by
//! projecting from `(0:0:1)` after a random linear change: the resultant with
//! respect to `z2` is a binary form whose distinct roots are the projections.
//! Each count is repeated with three independent changes and must agree.

mod puiseux;
pub mod univariate;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::local::{milnor_number, Dimension, LocalGerm};
use crate::poly::{ExponentVector, LinearChange, Polynomial};
use crate::projective::{
    derive_seed, polar_degree, random_change, Hypersurface, ProjectivePoint, Settings,
};

pub use univariate::{BinaryForm, UniPoly};

/// Entry range of the random coordinate changes used for projections.
pub const PROJECTION_COEFF_BOUND: i64 = 997;
/// Number of independent coordinate changes that must agree.
pub const STABILITY_SEEDS: u64 = 3;
/// Attempts at finding a generic change or target before giving up.
pub const MAX_RETRIES: usize = 16;
/// Recursion cap for Newton–Puiseux.
pub const MAX_PUISEUX_DEPTH: usize = 64;

/// Classical resultant of `p` and `q` with respect to variable `var`, as the
/// determinant of the Sylvester matrix (fraction-free elimination).
pub fn resultant(p: &Polynomial, q: &Polynomial, var: usize) -> Result<Polynomial> {
    if p.nvars() != q.nvars() {
        return Err(Error::NvarsMismatch {
            left: p.nvars(),
            right: q.nvars(),
        });
    }
    if var >= p.nvars() {
        return Err(Error::VariableOutOfRange {
            index: var,
            nvars: p.nvars(),
        });
    }
    let dp = p.degree_in(var).unwrap_or(0) as usize;
    let dq = q.degree_in(var).unwrap_or(0) as usize;
    if dp == 0 || dq == 0 {
        return Err(Error::DegenerateDegree(var));
    }
    let a = p.coefficients_in(var);
    let b = q.coefficients_in(var);
    let n = dp + dq;
    let zero = Polynomial::zero(p.nvars());
    let mut m = vec![vec![zero.clone(); n]; n];
    for i in 0..dq {
        for k in 0..=dp {
            m[i][i + dp - k] = a[k].clone();
        }
    }
    for i in 0..dp {
        for k in 0..=dq {
            m[dq + i][i + dq - k] = b[k].clone();
        }
    }
    Ok(bareiss_determinant(m))
}

fn bareiss_determinant(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    let nv = m[0][0].nvars();
    let mut negate = false;
    let mut prev = Polynomial::one(nv);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero(nv);
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Polynomial::zero(nv);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

fn check_plane_form(h: &Polynomial) -> Result<()> {
    if h.nvars() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: h.nvars(),
        });
    }
    if h.is_zero() || !h.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    Ok(())
}

/// Nonzero at `(0:0:1)`: the projection from that point is then finite.
fn avoids_center(h: &Polynomial) -> bool {
    let d = h.total_degree().unwrap_or(0);
    !h.coeff(&ExponentVector::new(vec![0, 0, d])).is_zero()
}

fn projection_form(p: &Polynomial, q: &Polynomial) -> Result<Option<BinaryForm>> {
    if !(avoids_center(p) && avoids_center(q)) {
        let r = resultant(p, q, 2)?;
        return BinaryForm::from_polynomial(&r, 0, 1);
    }
    // Both leading coefficients in z2 are constants, so the resultant
    // specialises: sample Res(p(1, t, z2), q(1, t, z2)) and interpolate.
    let dp = p.total_degree().unwrap_or(0) as usize;
    let dq = q.total_degree().unwrap_or(0) as usize;
    let total = dp * dq;
    let xs: Vec<BigRational> = (0..=total as i64)
        .map(|v| BigRational::from_integer(v.into()))
        .collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|t| {
            let a = specialise(p, t);
            let b = specialise(q, t);
            linalg::determinant(&sylvester(a.coeffs(), b.coeffs()))
        })
        .collect();
    let affine = interpolate(&xs, &ys);
    if affine.is_zero() {
        return Ok(None);
    }
    let deg = affine.degree().expect("nonzero");
    Ok(Some(BinaryForm::from_parts(affine, total - deg)))
}

/// `h(1, t, z2)` as a polynomial in `z2`.
fn specialise(h: &Polynomial, t: &BigRational) -> UniPoly {
    let d = h.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (e, c) in h.terms() {
        coeffs[e[2] as usize] += c * num_traits::pow(t.clone(), e[1] as usize);
    }
    UniPoly::new(coeffs)
}

/// Sylvester matrix of two univariate polynomials given by ascending
/// coefficients, matching the layout used by [`resultant`].
fn sylvester(a: &[BigRational], b: &[BigRational]) -> linalg::Matrix {
    let (dp, dq) = (a.len() - 1, b.len() - 1);
    let n = dp + dq;
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for i in 0..dq {
        for k in 0..=dp {
            m[i][i + dp - k] = a[k].clone();
        }
    }
    for i in 0..dp {
        for k in 0..=dq {
            m[dq + i][i + dq - k] = b[k].clone();
        }
    }
    m
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> UniPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UniPoly::new(vec![dd[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        let factor = UniPoly::new(vec![-xs[i].clone(), BigRational::from_integer(1.into())]);
        acc = acc.mul(&factor).add(&UniPoly::new(vec![dd[i].clone()]));
    }
    acc
}

fn stable(counts: Vec<usize>) -> Result<usize> {
    if counts.windows(2).all(|w| w[0] == w[1]) {
        Ok(counts[0])
    } else {
        Err(Error::Unstable(counts))
    }
}

fn generic_change(
    forms: &[&Polynomial],
    rng: &mut ChaCha8Rng,
) -> Result<(LinearChange, Vec<Polynomial>)> {
    for _ in 0..MAX_RETRIES {
        let m = random_change(3, PROJECTION_COEFF_BOUND, rng);
        let moved: Vec<Polynomial> = forms
            .iter()
            .map(|f| f.substitute_linear(&m))
            .collect::<Result<_>>()?;
        if moved.iter().all(avoids_center) {
            return Ok((m, moved));
        }
    }
    Err(Error::NonGeneric(MAX_RETRIES))
}

/// Number of distinct points of `V(h1) ∩ V(h2)` in `P^2`.
pub fn distinct_intersection_count(
    h1: &Polynomial,
    h2: &Polynomial,
    settings: &Settings,
) -> Result<usize> {
    check_plane_form(h1)?;
    check_plane_form(h2)?;
    if h1.is_constant() || h2.is_constant() {
        return Ok(0);
    }
    let mut counts = Vec::new();
    for salt in 0..STABILITY_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(settings.seed, 10 + salt));
        let (_, g) = generic_change(&[h1, h2], &mut rng)?;
        let form = projection_form(&g[0], &g[1])?.ok_or(Error::CommonComponent)?;
        counts.push(form.distinct_root_count());
    }
    stable(counts)
}

/// Number of distinct singular points of a plane curve, found as common
/// zeros of three generic combinations of the partial derivatives.
pub fn singular_point_count(hs: &Hypersurface, settings: &Settings) -> Result<usize> {
    if hs.dim() != 2 {
        return Err(Error::InvalidHypersurface(
            "singular point counting needs a plane curve".into(),
        ));
    }
    if hs.degree() == 1 {
        return Ok(0);
    }
    let grad = hs.poly().gradient();
    let mut counts = Vec::new();
    for salt in 0..STABILITY_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(settings.seed, 20 + salt));
        let combos: Vec<Polynomial> = (0..3)
            .map(|_| {
                grad.iter().fold(Polynomial::zero(3), |acc, g| {
                    let c: i64 = rng.gen_range(-PROJECTION_COEFF_BOUND..=PROJECTION_COEFF_BOUND);
                    &acc + &g.scale(&BigRational::from_integer(c.into()))
                })
            })
            .collect();
        if combos.iter().any(Polynomial::is_zero) {
            return Err(Error::NonGeneric(1));
        }
        let refs: Vec<&Polynomial> = combos.iter().collect();
        let (_, g) = generic_change(&refs, &mut rng)?;
        if g[0].is_constant() {
            // linear forms of a quadric's gradient: a constant combination
            // cannot happen for degree >= 2
            return Err(Error::NonGeneric(1));
        }
        let r12 =
            projection_form(&g[0], &g[1])?.ok_or_else(|| Error::NonIsolated("curve".into()))?;
        let r13 =
            projection_form(&g[0], &g[2])?.ok_or_else(|| Error::NonIsolated("curve".into()))?;
        counts.push(r12.gcd(&r13).distinct_root_count());
    }
    stable(counts)
}

/// Multiplicity and number of distinct tangent lines of a plane curve germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TangentConeInfo {
    pub m: u32,
    pub t: usize,
}

pub fn tangent_cone_lines(f: &LocalGerm) -> Result<TangentConeInfo> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.nvars(),
        });
    }
    let m = f.order().ok_or(Error::ZeroGerm)?;
    let cone = f.poly().homogeneous_part(m);
    let form = BinaryForm::from_polynomial(&cone, 0, 1)?.expect("lowest form is nonzero");
    Ok(TangentConeInfo {
        m,
        t: form.distinct_root_count(),
    })
}

/// Number of analytic branches of a plane curve germ at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BranchCount {
    pub r: u64,
}

/// Branches via Newton–Puiseux. The germ must be reduced; this is checked by
/// requiring a finite Milnor number.
pub fn branch_count(f: &LocalGerm, settings: &Settings) -> Result<BranchCount> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.nvars(),
        });
    }
    if f.poly().is_zero() {
        return Err(Error::ZeroGerm);
    }
    if milnor_number(f, &mut settings.new_budget())? == Dimension::Infinite {
        return Err(Error::NonReduced);
    }
    let r = puiseux::count_branches(f.poly(), MAX_PUISEUX_DEPTH)?;
    Ok(BranchCount { r })
}

/// Both sides of `deg(h1 h2) = deg(h1) + deg(h2) + #(V(h1) ∩ V(h2)) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma16Report {
    pub product_degree: u64,
    pub first_degree: u64,
    pub second_degree: u64,
    pub intersections: usize,
    pub holds: bool,
}

pub fn lemma16_check(
    h1: &Polynomial,
    h2: &Polynomial,
    sing1: &[ProjectivePoint],
    sing2: &[ProjectivePoint],
    sing12: &[ProjectivePoint],
    settings: &Settings,
) -> Result<Lemma16Report> {
    let product = Hypersurface::new(h1.checked_mul(h2)?)?;
    let c1 = Hypersurface::new(h1.clone())?;
    let c2 = Hypersurface::new(h2.clone())?;
    if c1.dim() != 2 {
        return Err(Error::InvalidHypersurface(
            "factors must be plane curves".into(),
        ));
    }
    let lhs = polar_degree(&product, sing12, settings)?;
    let d1 = polar_degree(&c1, sing1, settings)?;
    let d2 = polar_degree(&c2, sing2, settings)?;
    let k = distinct_intersection_count(h1, h2, settings)?;
    let rhs = (d1 + d2 + k as u64).checked_sub(1);
    Ok(Lemma16Report {
        product_degree: lhs,
        first_degree: d1,
        second_degree: d2,
        intersections: k,
        holds: rhs == Some(lhs),
    })
}

/// Polar degree of a plane curve by counting a generic fibre of the gradient
/// map: common zeros of `t1 h_0 - t0 h_1` and `t2 h_1 - t1 h_2` minus the
/// singular points. A common zero that is not singular has `h_1 ≠ 0` (else all
/// partials vanish), hence a gradient proportional to `t`.
pub fn polar_degree_elimination(
    hs: &Hypersurface,
    singular_points: &[ProjectivePoint],
    settings: &Settings,
) -> Result<u64> {
    if hs.dim() != 2 {
        return Err(Error::InvalidHypersurface(
            "elimination oracle needs a plane curve".into(),
        ));
    }
    for p in singular_points {
        if !hs.is_singular_at(p)? {
            return Err(Error::PointNotSingular(p.to_string()));
        }
    }
    let grad = hs.poly().gradient();
    if partials_dependent(&grad) {
        // the gradient image lies in a hyperplane
        return Ok(0);
    }
    let mut counts = Vec::new();
    for salt in 0..STABILITY_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(settings.seed, 30 + salt));
        counts.push(fibre_count(&grad, singular_points, &mut rng)?);
    }
    stable(counts).map(|c| c as u64)
}

fn partials_dependent(grad: &[Polynomial]) -> bool {
    let mut monomials: Vec<&ExponentVector> = grad
        .iter()
        .flat_map(|g| g.terms().map(|(e, _)| e))
        .collect();
    monomials.sort();
    monomials.dedup();
    let rows: linalg::Matrix = monomials
        .iter()
        .map(|e| grad.iter().map(|g| g.coeff(e)).collect())
        .collect();
    linalg::rank(&rows) < grad.len()
}

fn fibre_count(
    grad: &[Polynomial],
    singular_points: &[ProjectivePoint],
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let q = |v: i64| BigRational::from_integer(v.into());
    for _ in 0..MAX_RETRIES {
        let t: Vec<i64> = (0..3)
            .map(|_| rng.gen_range(-PROJECTION_COEFF_BOUND..=PROJECTION_COEFF_BOUND))
            .collect();
        if t[1] == 0 {
            continue;
        }
        let p1 = &grad[0].scale(&q(t[1])) - &grad[1].scale(&q(t[0]));
        let p2 = &grad[1].scale(&q(t[2])) - &grad[2].scale(&q(t[1]));
        if p1.is_zero() || p2.is_zero() || p1.is_constant() || p2.is_constant() {
            continue;
        }
        let (m, moved) = generic_change(&[&p1, &p2], rng)?;
        let Some(mut form) = projection_form(&moved[0], &moved[1])? else {
            continue;
        };
        let inv = m.inverse();
        for p in singular_points {
            let image = inv.apply(&p.to_rationals());
            form = form.remove_root(&image[0], &image[1]);
        }
        if form.affine().degree() == Some(0) && form.multiplicity_at_infinity() == 0 {
            return Ok(0);
        }
        if form.is_squarefree() {
            return Ok(form.degree());
        }
    }
    Err(Error::NonGeneric(MAX_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::projective::move_to_origin;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_i64(c).unwrap()
    }

    fn curve(s: &str) -> Hypersurface {
        Hypersurface::new(p(s, 3)).unwrap()
    }

    #[test]
    fn resultants() {
        let r = resultant(&p("x2^2 - x1", 2), &p("x2", 2), 1).unwrap();
        assert_eq!(r, p("-x1", 2));
        let f = p("x2^2 - x1^3 + x1*x2", 2);
        assert!(resultant(&f, &f, 1).unwrap().is_zero());
        let g = p("x2^2 - x1^2", 2);
        assert!(resultant(&g, &p("x2 - x1", 2), 1).unwrap().is_zero());
        assert!(matches!(
            resultant(&p("x1", 2), &p("x2", 2), 1),
            Err(Error::DegenerateDegree(1))
        ));
    }

    #[test]
    fn interpolated_projection_matches_the_symbolic_resultant() {
        let a = p("z2^3 + 2*z0*z1*z2 - z1^3 + 5*z0^2*z2", 3);
        let b = p("3*z2^2 - z0*z1 + 4*z1*z2 + z0^2", 3);
        let sym = BinaryForm::from_polynomial(&resultant(&a, &b, 2).unwrap(), 0, 1)
            .unwrap()
            .unwrap();
        let fast = projection_form(&a, &b).unwrap().unwrap();
        assert_eq!(fast.affine().monic(), sym.affine().monic());
        assert_eq!(
            fast.multiplicity_at_infinity(),
            sym.multiplicity_at_infinity()
        );
    }

    #[test]
    fn intersection_counts() {
        let s = Settings::default();
        assert_eq!(
            distinct_intersection_count(&p("z0", 3), &p("z1^2 + z0*z2", 3), &s).unwrap(),
            1
        );
        assert_eq!(
            distinct_intersection_count(&p("z0", 3), &p("z1", 3), &s).unwrap(),
            1
        );
        assert_eq!(
            distinct_intersection_count(&p("z1^2 + z0*z2", 3), &p("z1^2 + z0*z2 + z0^2", 3), &s)
                .unwrap(),
            1
        );
        assert_eq!(
            distinct_intersection_count(&p("z0^2 + z1^2 - z2^2", 3), &p("z0*z1", 3), &s).unwrap(),
            4
        );
        assert!(matches!(
            distinct_intersection_count(&p("z0*z1", 3), &p("z0*z2", 3), &s),
            Err(Error::CommonComponent)
        ));
    }

    #[test]
    fn singular_point_counts() {
        let s = Settings::default();
        assert_eq!(singular_point_count(&curve("z0*z1*z2"), &s).unwrap(), 3);
        assert_eq!(
            singular_point_count(&curve("z0^2 + z1^2 + z2^2"), &s).unwrap(),
            0
        );
        assert_eq!(
            singular_point_count(&curve("z1^3 + z0^2*z2"), &s).unwrap(),
            1
        );
        assert_eq!(
            singular_point_count(&curve("z0*z1*z2*(z0 + z1)"), &s).unwrap(),
            4
        );
    }

    #[test]
    fn tangent_cones() {
        let g = |s: &str| LocalGerm::new(p(s, 2)).unwrap();
        assert_eq!(
            tangent_cone_lines(&g("x1^2 + x2^3")).unwrap(),
            TangentConeInfo { m: 2, t: 1 }
        );
        assert_eq!(
            tangent_cone_lines(&g("x1*x2")).unwrap(),
            TangentConeInfo { m: 2, t: 2 }
        );
        assert_eq!(
            tangent_cone_lines(&g("x1^2 + x2^2")).unwrap(),
            TangentConeInfo { m: 2, t: 2 }
        );
        assert_eq!(
            tangent_cone_lines(&g("x2^3 + x1^4")).unwrap(),
            TangentConeInfo { m: 3, t: 1 }
        );
    }

    #[test]
    fn branch_counts() {
        let s = Settings::default();
        let r = |t: &str| {
            branch_count(&LocalGerm::new(p(t, 2)).unwrap(), &s)
                .unwrap()
                .r
        };
        assert_eq!(r("x1^2 - x2^3"), 1);
        assert_eq!(r("x1^2 - x2^2"), 2);
        assert_eq!(r("x1^2 - x2^4"), 2);
        let nonreduced = LocalGerm::new(p("x1^2*x2 + x1^3", 2)).unwrap();
        assert!(matches!(
            branch_count(&nonreduced, &s),
            Err(Error::NonReduced)
        ));
    }

    #[test]
    fn lemma16_examples() {
        let s = Settings::default();
        let conic = p("z1^2 + z0*z2", 3);
        let rep = lemma16_check(&p("z0", 3), &conic, &[], &[], &[pt(&[0, 0, 1])], &s).unwrap();
        assert_eq!((rep.product_degree, rep.intersections), (1, 1));
        assert!(rep.holds);
        let lines =
            lemma16_check(&p("z0", 3), &p("z1", 3), &[], &[], &[pt(&[0, 0, 1])], &s).unwrap();
        assert!(lines.holds && lines.product_degree == 0);
        let two_lines = p("z0*z2", 3);
        let quartic = lemma16_check(
            &two_lines,
            &conic,
            &[pt(&[0, 1, 0])],
            &[],
            &[pt(&[0, 0, 1]), pt(&[1, 0, 0]), pt(&[0, 1, 0])],
            &s,
        )
        .unwrap();
        assert_eq!(quartic.product_degree, 2);
        assert_eq!(quartic.intersections, 2);
        assert!(quartic.holds);
    }

    #[test]
    fn elimination_matches_the_formula() {
        let s = Settings::default();
        assert_eq!(
            polar_degree_elimination(&curve("z0^2 + z1^2 + z2^2"), &[], &s).unwrap(),
            1
        );
        assert_eq!(
            polar_degree_elimination(&curve("z1^3 + z0^2*z2"), &[pt(&[0, 0, 1])], &s).unwrap(),
            2
        );
        let secant = curve("z1^3 + z0*z1*z2");
        let pts = [pt(&[1, 0, 0]), pt(&[0, 0, 1])];
        assert_eq!(polar_degree_elimination(&secant, &pts, &s).unwrap(), 2);
        assert_eq!(polar_degree(&secant, &pts, &s).unwrap(), 2);
        // a pair of lines is a cone
        assert_eq!(
            polar_degree_elimination(&curve("z0*z1"), &[pt(&[0, 0, 1])], &s).unwrap(),
            0
        );
    }

    #[test]
    fn smooth_germ_of_a_curve_has_one_branch() {
        let c = curve("z0*z1 + z2^2");
        let germ = move_to_origin(&c, &pt(&[1, 0, 0])).unwrap();
        assert_eq!(branch_count(&germ, &Settings::default()).unwrap().r, 1);
    }
}
