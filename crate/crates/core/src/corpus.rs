//! Hypersurfaces with known answers, and the plain-text format they are
//! stored in.
//!
//! ```text
//! name: conic-and-tangent
//! origin: homaloidal
//! dim: 2
//! degree: 3
//! poly: z0*(z1^2 + z0*z2)
//! point: (0:0:1) type=A3 mu=3
//! polar_degree: 1
//! irreducible: false
//! cone: false
//! isolated: true
//! hessian_vanishes: false
//! ```
//!
//! Records are separated by blank lines and `#` starts a comment line.
//! `point` may repeat. `tight: true` marks records where the polar degree
//! equals the sectional Milnor number at every point. A recorded
//! factorization uses `factor1`, `factor1_points`, `factor2`, `factor2_points`
//! with the singular points of each factor separated by spaces.

use std::fmt::Write as _;

use serde::Serialize;

use crate::classify::Annotation;
use crate::error::{Error, Result};
use crate::local::Dimension;
use crate::parse::parse_poly;
use crate::poly::Polynomial;
use crate::projective::{Hypersurface, ProjectivePoint};

const BUILTIN: &str = include_str!("../corpus/builtin.txt");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedPoint {
    pub point: ProjectivePoint,
    pub annotation: Option<Annotation>,
    pub mu: Option<Dimension>,
    /// Expected `μ^(n-1)`.
    pub sectional_mu: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecordFlags {
    pub irreducible: bool,
    pub is_cone: bool,
    pub isolated_singularities: bool,
    pub hessian_vanishes: bool,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub first: String,
    pub first_points: Vec<ProjectivePoint>,
    pub second: String,
    pub second_points: Vec<ProjectivePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusRecord {
    pub name: String,
    pub origin: String,
    pub dim: usize,
    pub degree: u32,
    pub poly: String,
    pub points: Vec<ExpectedPoint>,
    pub polar_degree: Option<u64>,
    pub flags: RecordFlags,
    pub factors: Option<Factorization>,
}

impl CorpusRecord {
    pub fn nvars(&self) -> usize {
        self.dim + 1
    }

    pub fn polynomial(&self) -> Result<Polynomial> {
        parse_poly(&self.poly, self.nvars())
    }

    /// Parse the polynomial and check it against `dim` and `degree`.
    pub fn hypersurface(&self) -> Result<Hypersurface> {
        let hs = Hypersurface::new(self.polynomial()?)?;
        if hs.degree() != self.degree {
            return Err(Error::Corpus(format!(
                "{}: polynomial has degree {}, record says {}",
                self.name,
                hs.degree(),
                self.degree
            )));
        }
        Ok(hs)
    }

    /// Internal consistency: `Σ μ = (d-1)^n - polar degree` when every
    /// expected value is present and the singularities are isolated.
    pub fn expected_total_consistent(&self) -> Option<bool> {
        if !self.flags.isolated_singularities {
            return None;
        }
        let deg = self.polar_degree?;
        let total: Option<u64> = self
            .points
            .iter()
            .map(|p| p.mu.and_then(Dimension::finite))
            .sum();
        let base = u64::from(self.degree - 1).checked_pow(self.dim as u32)?;
        Some(total? + deg == base)
    }
}

/// The records shipped with the crate.
pub fn builtin_corpus() -> Vec<CorpusRecord> {
    parse_corpus(BUILTIN).expect("builtin corpus parses")
}

pub fn find_record<'a>(records: &'a [CorpusRecord], name: &str) -> Option<&'a CorpusRecord> {
    records.iter().find(|r| r.name == name)
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    let mut records: Vec<CorpusRecord> = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate().chain([(usize::MAX, "")]) {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !block.is_empty() {
                let rec = parse_block(&block)?;
                if records.iter().any(|r| r.name == rec.name) {
                    return Err(Error::Corpus(format!("duplicate record `{}`", rec.name)));
                }
                records.push(rec);
                block.clear();
            }
            continue;
        }
        block.push((i + 1, t));
    }
    Ok(records)
}

fn parse_block(lines: &[(usize, &str)]) -> Result<CorpusRecord> {
    let mut name = None;
    let mut origin = String::new();
    let mut dim = None;
    let mut degree = None;
    let mut poly = None;
    let mut points = Vec::new();
    let mut polar_degree = None;
    let mut flags = [None::<bool>; 5];
    let mut factor_parts: [Option<String>; 4] = Default::default();

    for &(line_no, line) in lines {
        let err = |msg: String| Error::Corpus(format!("line {line_no}: {msg}"));
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err("expected `key: value`".into()))?;
        let value = value.trim();
        let number = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| err(format!("bad number `{v}`")))
        };
        let boolean = |v: &str| match v {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(err(format!("bad boolean `{v}`"))),
        };
        match key.trim() {
            "name" => name = Some(value.to_string()),
            "origin" => origin = value.to_string(),
            "dim" => dim = Some(number(value)? as usize),
            "degree" => degree = Some(number(value)? as u32),
            "poly" => poly = Some(value.to_string()),
            "point" => points.push(parse_point_line(value).map_err(|e| err(e.to_string()))?),
            "polar_degree" => polar_degree = Some(number(value)?),
            "irreducible" => flags[0] = Some(boolean(value)?),
            "cone" => flags[1] = Some(boolean(value)?),
            "isolated" => flags[2] = Some(boolean(value)?),
            "hessian_vanishes" => flags[3] = Some(boolean(value)?),
            "tight" => flags[4] = Some(boolean(value)?),
            "factor1" => factor_parts[0] = Some(value.to_string()),
            "factor1_points" => factor_parts[1] = Some(value.to_string()),
            "factor2" => factor_parts[2] = Some(value.to_string()),
            "factor2_points" => factor_parts[3] = Some(value.to_string()),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let first_line = lines[0].0;
    let missing =
        |what: &str| Error::Corpus(format!("record at line {first_line}: missing `{what}`"));
    let name = name.ok_or_else(|| missing("name"))?;
    let factors = match factor_parts {
        [None, None, None, None] => None,
        [Some(f1), p1, Some(f2), p2] => Some(Factorization {
            first: f1,
            first_points: parse_point_list(p1.as_deref().unwrap_or(""))?,
            second: f2,
            second_points: parse_point_list(p2.as_deref().unwrap_or(""))?,
        }),
        _ => return Err(missing("factor1 and factor2")),
    };
    Ok(CorpusRecord {
        dim: dim.ok_or_else(|| missing("dim"))?,
        degree: degree.ok_or_else(|| missing("degree"))?,
        poly: poly.ok_or_else(|| missing("poly"))?,
        points,
        polar_degree,
        flags: RecordFlags {
            irreducible: flags[0].ok_or_else(|| missing("irreducible"))?,
            is_cone: flags[1].ok_or_else(|| missing("cone"))?,
            isolated_singularities: flags[2].ok_or_else(|| missing("isolated"))?,
            hessian_vanishes: flags[3].ok_or_else(|| missing("hessian_vanishes"))?,
            tight: flags[4].unwrap_or(false),
        },
        factors,
        origin,
        name,
    })
}

fn parse_point_line(value: &str) -> Result<ExpectedPoint> {
    let mut tokens = value.split_whitespace();
    let point: ProjectivePoint = tokens
        .next()
        .ok_or_else(|| Error::Corpus("empty point".into()))?
        .parse()?;
    let mut out = ExpectedPoint {
        point,
        annotation: None,
        mu: None,
        sectional_mu: None,
    };
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Corpus(format!("expected `key=value`, got `{tok}`")))?;
        let bad = || Error::Corpus(format!("bad value `{v}` for `{k}`"));
        match k {
            "type" => out.annotation = Some(v.parse()?),
            "mu" if v == "inf" => out.mu = Some(Dimension::Infinite),
            "mu" => out.mu = Some(Dimension::Finite(v.parse().map_err(|_| bad())?)),
            "sec" => out.sectional_mu = Some(v.parse().map_err(|_| bad())?),
            _ => return Err(Error::Corpus(format!("unknown point attribute `{k}`"))),
        }
    }
    Ok(out)
}

fn parse_point_list(value: &str) -> Result<Vec<ProjectivePoint>> {
    value.split_whitespace().map(str::parse).collect()
}

/// Text form accepted by [`parse_corpus`].
pub fn format_corpus(records: &[CorpusRecord]) -> String {
    let blocks: Vec<String> = records.iter().map(format_record).collect();
    blocks.join("\n")
}

pub fn format_record(r: &CorpusRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "name: {}", r.name);
    if !r.origin.is_empty() {
        let _ = writeln!(s, "origin: {}", r.origin);
    }
    let _ = writeln!(s, "dim: {}", r.dim);
    let _ = writeln!(s, "degree: {}", r.degree);
    let _ = writeln!(s, "poly: {}", r.poly);
    for p in &r.points {
        let _ = write!(s, "point: {}", p.point);
        if let Some(a) = &p.annotation {
            let _ = write!(s, " type={a}");
        }
        if let Some(mu) = p.mu {
            let _ = write!(s, " mu={mu}");
        }
        if let Some(sec) = p.sectional_mu {
            let _ = write!(s, " sec={sec}");
        }
        s.push('\n');
    }
    if let Some(deg) = r.polar_degree {
        let _ = writeln!(s, "polar_degree: {deg}");
    }
    let _ = writeln!(s, "irreducible: {}", r.flags.irreducible);
    let _ = writeln!(s, "cone: {}", r.flags.is_cone);
    let _ = writeln!(s, "isolated: {}", r.flags.isolated_singularities);
    let _ = writeln!(s, "hessian_vanishes: {}", r.flags.hessian_vanishes);
    if r.flags.tight {
        s.push_str("tight: true\n");
    }
    if let Some(f) = &r.factors {
        let list = |ps: &[ProjectivePoint]| {
            ps.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(s, "factor1: {}", f.first);
        let _ = writeln!(s, "factor1_points: {}", list(&f.first_points));
        let _ = writeln!(s, "factor2: {}", f.second);
        let _ = writeln!(s, "factor2_points: {}", list(&f.second_points));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_is_well_formed() {
        let records = builtin_corpus();
        assert!(records.len() >= 20);
        for r in &records {
            let hs = r.hypersurface().unwrap();
            assert_eq!(hs.dim(), r.dim, "{}", r.name);
            for p in &r.points {
                assert!(
                    hs.is_singular_at(&p.point).unwrap(),
                    "{} {}",
                    r.name,
                    p.point
                );
                if let (Some(a), Some(mu)) = (&p.annotation, p.mu) {
                    assert_eq!(Dimension::Finite(a.expected_mu()), mu, "{}", r.name);
                }
            }
            assert_ne!(r.expected_total_consistent(), Some(false), "{}", r.name);
        }
    }

    #[test]
    fn text_round_trip() {
        let records = builtin_corpus();
        let text = format_corpus(&records);
        assert_eq!(parse_corpus(&text).unwrap(), records);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let base = "name: a\ndim: 2\ndegree: 2\npoly: z0^2 + z1^2 + z2^2\n\
                    irreducible: true\ncone: false\nisolated: true\nhessian_vanishes: false\n";
        assert_eq!(parse_corpus(base).unwrap().len(), 1);
        assert!(parse_corpus(&format!("{base}\n{base}")).is_err());
        assert!(parse_corpus(&base.replace("dim: 2\n", "")).is_err());
        assert!(parse_corpus(&format!("{base}colour: red\n")).is_err());
        assert!(parse_corpus(&format!("{base}point: (1:0:0) mu=x\n")).is_err());
        assert!(parse_corpus(&format!("{base}factor1: z0\n")).is_err());
        let wrong_degree = parse_corpus(&base.replace("degree: 2", "degree: 3")).unwrap();
        assert!(wrong_degree[0].hypersurface().is_err());
    }
}
