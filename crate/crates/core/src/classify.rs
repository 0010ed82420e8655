//! Coarse singularity types from Milnor numbers, sectional data and the
//! Hessian corank.
//!
//! Only four labels are told apart: smooth points, the A series (sectional
//! Milnor number one below the top), the corank-two families with sectional
//! Milnor number two (D, E and J types), and everything else. Finer names
//! from the literature are kept as annotations and compared at this level.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::local::{hessian_corank_at_origin, LocalGerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoarseLabel {
    Smooth,
    A(u64),
    CorankTwoFamily,
    Other,
}

impl fmt::Display for CoarseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoarseLabel::Smooth => f.write_str("Smooth"),
            CoarseLabel::A(k) => write!(f, "A{k}"),
            CoarseLabel::CorankTwoFamily => f.write_str("CorankTwoFamily"),
            CoarseLabel::Other => f.write_str("Other"),
        }
    }
}

impl Serialize for CoarseLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseType {
    pub label: CoarseLabel,
    pub mu: u64,
    pub sectional_mu: u64,
    /// Hessian corank; `None` at a smooth point.
    pub corank: Option<usize>,
}

/// Label a germ from its sectional sequence `[μ^(0), …, μ^(n)]`.
pub fn coarse_type(f: &LocalGerm, mu_seq: &[u64]) -> Result<CoarseType> {
    let n = f.nvars();
    if mu_seq.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: mu_seq.len(),
        });
    }
    let mu = mu_seq[n];
    let sectional_mu = mu_seq[n - 1];
    if mu == 0 {
        return Ok(CoarseType {
            label: CoarseLabel::Smooth,
            mu,
            sectional_mu,
            corank: None,
        });
    }
    let corank = hessian_corank_at_origin(f)?;
    if (sectional_mu == 1) != (corank <= 1) {
        return Err(Error::ClassificationMismatch(format!(
            "sectional Milnor number {sectional_mu} but Hessian corank {corank}"
        )));
    }
    let label = match sectional_mu {
        1 => CoarseLabel::A(mu),
        2 => CoarseLabel::CorankTwoFamily,
        _ => CoarseLabel::Other,
    };
    Ok(CoarseType {
        label,
        mu,
        sectional_mu,
        corank: Some(corank),
    })
}

/// A named singularity type as written in the literature: `A7`, `D6`, `E6`,
/// `J_{2,4}`, `T_{2,6,6}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Annotation {
    text: String,
    #[serde(skip)]
    kind: AnnotationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum AnnotationKind {
    A(u64),
    D(u64),
    E(u64),
    J(u64, u64),
    T(u64, u64, u64),
}

impl Annotation {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// The Milnor number the name implies.
    pub fn expected_mu(&self) -> u64 {
        match self.kind {
            AnnotationKind::A(k) | AnnotationKind::D(k) | AnnotationKind::E(k) => k,
            AnnotationKind::J(r, i) => 6 * r - 2 + i,
            AnnotationKind::T(p, q, r) => p + q + r - 1,
        }
    }

    /// The coarse label the name falls under.
    pub fn coarse_label(&self) -> CoarseLabel {
        match self.kind {
            AnnotationKind::A(k) => CoarseLabel::A(k),
            AnnotationKind::D(_) | AnnotationKind::E(_) | AnnotationKind::J(..) => {
                CoarseLabel::CorankTwoFamily
            }
            AnnotationKind::T(..) => CoarseLabel::Other,
        }
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for Annotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || Error::Corpus(format!("unknown singularity type `{text}`"));
        let mut chars = text.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        let indices: Vec<u64> = rest
            .trim_start_matches('_')
            .trim_start_matches('{')
            .trim_end_matches('}')
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let kind = match (head, indices.as_slice()) {
            ('A', &[k]) if k >= 1 => AnnotationKind::A(k),
            ('D', &[k]) if k >= 4 => AnnotationKind::D(k),
            ('E', &[k]) if k >= 6 => AnnotationKind::E(k),
            ('J', &[r, i]) if r >= 1 => AnnotationKind::J(r, i),
            ('T', &[p, q, r]) if p >= 2 && q >= 2 && r >= 2 => AnnotationKind::T(p, q, r),
            _ => return Err(bad()),
        };
        Ok(Annotation {
            text: text.to_string(),
            kind,
        })
    }
}
