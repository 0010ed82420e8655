//! Weighted homogeneity of a germ in its given coordinates, and the
//! Milnor–Orlik formula `μ = Π (1/a_i − 1)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Matrix};
use crate::local::LocalGerm;

/// Weights `a_i` with `Σ a_i m_i = 1` on every monomial `m` of the germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(weights: Vec<BigRational>) -> Option<Self> {
        if weights.is_empty() || weights.iter().any(|a| !a.is_positive()) {
            return None;
        }
        Some(WeightVector { weights })
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// The reciprocals `w_i = 1 / a_i`.
    pub fn reciprocals(&self) -> Vec<BigRational> {
        self.weights.iter().map(BigRational::recip).collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Positive weights making `f` weighted homogeneous of degree 1, if any.
///
/// When the linear system has a unique solution it is returned if positive.
/// Otherwise the solution set `{E a = 1, a >= 0}` is a polytope; the centroid
/// of its vertices is returned when it is positive. A coordinate vanishing at
/// the centroid vanishes on the whole polytope, so this finds a positive
/// solution whenever one exists. A variable absent from `f` gives `None`.
pub fn detect_weights(f: &LocalGerm) -> Option<WeightVector> {
    let n = f.nvars();
    let rows: Matrix = f
        .poly()
        .terms()
        .map(|(e, _)| {
            e.as_slice()
                .iter()
                .map(|&k| BigRational::from_integer(k.into()))
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return None;
    }
    if (0..n).any(|i| rows.iter().all(|r| r[i].is_zero())) {
        return None;
    }
    let ones = vec![BigRational::one(); rows.len()];
    let (particular, kernel) = linalg::solve_affine(&rows, &ones, n)?;
    if kernel.is_empty() {
        return WeightVector::new(particular);
    }
    let vertices = polytope_vertices(&rows, n);
    if vertices.is_empty() {
        return None;
    }
    let count = BigRational::from_integer(vertices.len().into());
    let centroid: Vec<BigRational> = (0..n)
        .map(|i| vertices.iter().map(|v| v[i].clone()).sum::<BigRational>() / &count)
        .collect();
    WeightVector::new(centroid)
}

/// Vertices of `{E a = 1, a >= 0}`: basic feasible solutions over all supports.
fn polytope_vertices(rows: &Matrix, n: usize) -> Vec<Vec<BigRational>> {
    let ones = vec![BigRational::one(); rows.len()];
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Matrix = rows
            .iter()
            .map(|r| support.iter().map(|&i| r[i].clone()).collect())
            .collect();
        let Some((sol, ker)) = linalg::solve_affine(&sub, &ones, support.len()) else {
            continue;
        };
        if !ker.is_empty() || sol.iter().any(Signed::is_negative) {
            continue;
        }
        let mut full = vec![BigRational::zero(); n];
        for (k, &i) in support.iter().enumerate() {
            full[i] = sol[k].clone();
        }
        if !out.contains(&full) {
            out.push(full);
        }
    }
    out
}

/// `Π (1/a_i − 1)`.
pub fn milnor_orlik(w: &WeightVector) -> BigRational {
    w.weights
        .iter()
        .map(|a| a.recip() - BigRational::one())
        .product()
}
