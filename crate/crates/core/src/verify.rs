//! Runs every applicable check on corpus records.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{coarse_type, CoarseLabel, CoarseType};
use crate::corpus::{CorpusRecord, ExpectedPoint};
use crate::error::{Error, Result};
use crate::local::{milnor_number, Dimension, LocalGerm};
use crate::planecurve::{
    branch_count, lemma16_check, polar_degree_elimination, singular_point_count, tangent_cone_lines,
};
use crate::poly::VarStyle;
use crate::projective::{
    apex_space, derive_seed, hessian_vanishes, is_log_convex, move_to_origin,
    polar_degree_from_mus, sequence_of_germ, theorem_report, Hypersurface, ProjectivePoint,
    Settings,
};
use crate::weighted::{detect_weights, milnor_orlik};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// What was computed at one listed point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSummary {
    pub point: ProjectivePoint,
    pub mu: Option<Dimension>,
    pub multiplicity: Option<u32>,
    pub mu_sequence: Option<Vec<u64>>,
    pub coarse_type: Option<CoarseType>,
    pub branches: Option<u64>,
    pub tangent_lines: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordReport {
    pub name: String,
    pub seed: u64,
    pub status: Status,
    pub polar_degree: Option<u64>,
    pub points: Vec<PointSummary>,
    pub checks: Vec<Check>,
    pub budget_exceeded: bool,
    pub seconds: f64,
}

impl RecordReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub records: Vec<RecordReport>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn budget_exceeded(&self) -> bool {
        self.records.iter().any(|r| r.budget_exceeded)
    }
}

/// Seed used for a record, independent of its position in the corpus.
pub fn record_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a
    let salt = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
    });
    derive_seed(seed, salt)
}

struct Checks {
    list: Vec<Check>,
    budget_exceeded: bool,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.list.push(Check {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn expect(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(name, status, detail);
    }

    fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Status::Skip, reason);
    }

    /// Records a failed computation; returns `None` so callers can `?` out.
    fn ok<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                if matches!(e, Error::BudgetExceeded { .. }) {
                    self.budget_exceeded = true;
                }
                self.push(name, Status::Fail, e.to_string());
                None
            }
        }
    }
}

pub fn verify_record(rec: &CorpusRecord, settings: &Settings) -> RecordReport {
    let start = Instant::now();
    let seed = record_seed(settings.seed, &rec.name);
    let settings = settings.with_seed(seed);
    let mut checks = Checks {
        list: Vec::new(),
        budget_exceeded: false,
    };
    let mut points = Vec::new();
    let mut polar = None;
    if let Some(hs) = checks.ok("parse", rec.hypersurface()) {
        run_checks(rec, &hs, &settings, &mut checks, &mut points, &mut polar);
    }
    let status = if checks.list.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    RecordReport {
        name: rec.name.clone(),
        seed,
        status,
        polar_degree: polar,
        points,
        checks: checks.list,
        budget_exceeded: checks.budget_exceeded,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn run_checks(
    rec: &CorpusRecord,
    hs: &Hypersurface,
    settings: &Settings,
    checks: &mut Checks,
    points: &mut Vec<PointSummary>,
    polar: &mut Option<u64>,
) {
    let n = hs.dim();
    match rec.expected_total_consistent() {
        Some(ok) => checks.expect(
            "record-consistency",
            ok,
            "sum of expected mu vs polar degree",
        ),
        None => checks.skip("record-consistency", "not all expectations recorded"),
    }
    let text = hs.poly().to_string_with(VarStyle::Projective);
    let reparsed = crate::parse::parse_poly(&text, rec.nvars());
    checks.expect(
        "format-round-trip",
        reparsed.as_ref() == Ok(hs.poly()),
        text,
    );

    for (i, exp) in rec.points.iter().enumerate() {
        let point_settings = settings.with_seed(derive_seed(settings.seed, 100 + i as u64));
        points.push(check_point(hs, exp, &point_settings, checks));
    }

    let mus: Option<Vec<u64>> = points
        .iter()
        .map(|p| p.mu.and_then(Dimension::finite))
        .collect();
    if rec.flags.isolated_singularities {
        if let Some(mus) = &mus {
            if let Some(deg) = checks.ok("polar-degree", polar_degree_from_mus(hs, mus)) {
                *polar = Some(deg);
                match rec.polar_degree {
                    Some(e) => {
                        checks.expect("polar-degree", deg == e, format!("{deg} (expected {e})"))
                    }
                    None => checks.skip("polar-degree", format!("computed {deg}, no expectation")),
                }
            }
        }
    } else {
        checks.expect(
            "non-isolated-locus",
            points.iter().any(|p| p.mu == Some(Dimension::Infinite)),
            "some listed point has infinite Milnor number",
        );
    }

    if n == 2 && rec.flags.isolated_singularities {
        let listed: Vec<ProjectivePoint> = rec.points.iter().map(|p| p.point.clone()).collect();
        if let Some(count) = checks.ok("singular-point-count", singular_point_count(hs, settings)) {
            checks.expect(
                "singular-point-count",
                count == listed.len(),
                format!("{count} singular points, {} listed", listed.len()),
            );
        }
        if let Some(deg) = checks.ok(
            "polar-degree-elimination",
            polar_degree_elimination(hs, &listed, settings),
        ) {
            checks.expect(
                "polar-degree-elimination",
                Some(deg) == rec.polar_degree,
                format!("{deg} (expected {:?})", rec.polar_degree),
            );
        }
    }

    if let Some(deg) = *polar {
        let labels: Vec<CoarseLabel> = points
            .iter()
            .filter_map(|p| p.coarse_type.map(|c| c.label))
            .collect();
        match deg {
            1 => checks.expect(
                "homaloidal-points-are-A",
                labels.iter().all(|l| matches!(l, CoarseLabel::A(_))),
                format!("{labels:?}"),
            ),
            2 => checks.expect(
                "polar-two-points-are-A-or-corank-two",
                labels
                    .iter()
                    .all(|l| matches!(l, CoarseLabel::A(_) | CoarseLabel::CorankTwoFamily)),
                format!("{labels:?}"),
            ),
            _ => {}
        }
        for p in points.iter() {
            let (Some(m), Some(seq)) = (p.multiplicity, &p.mu_sequence) else {
                continue;
            };
            let report = theorem_report(hs, &p.point, deg, m, seq.clone());
            let name = format!("lower-bounds {}", p.point);
            if report.cone_with_apex {
                checks.skip(name, "cone with apex at the point");
                continue;
            }
            checks.expect(
                name,
                report.passes(),
                format!("deg {deg}, m {m}, sequence {seq:?}"),
            );
            if rec.flags.tight {
                checks.expect(
                    format!("tight {}", p.point),
                    deg == seq[n - 1],
                    format!("deg {deg} vs sectional {}", seq[n - 1]),
                );
            }
        }
    }

    let apex = apex_space(hs);
    checks.expect(
        "cone",
        apex.is_cone() == rec.flags.is_cone,
        format!("apex space dimension {}", apex.dimension()),
    );
    let hess = hessian_vanishes(hs, derive_seed(settings.seed, 7), settings.hessian_samples);
    checks.expect(
        "hessian",
        hess.vanishes == rec.flags.hessian_vanishes,
        format!(
            "vanishes {} ({} samples, certain {})",
            hess.vanishes, hess.samples, hess.certain
        ),
    );
    if let Some(deg) = *polar {
        // a vanishing Hessian means a degenerate gradient map
        checks.expect(
            "hessian-vs-polar-degree",
            hess.vanishes == (deg == 0),
            format!("polar degree {deg}"),
        );
    }

    if let Some(f) = &rec.factors {
        check_factorization(rec, hs, f, settings, checks);
    } else {
        checks.skip("lemma16", "no factorization recorded");
    }
}

fn check_point(
    hs: &Hypersurface,
    exp: &ExpectedPoint,
    settings: &Settings,
    checks: &mut Checks,
) -> PointSummary {
    let p = &exp.point;
    let mut summary = PointSummary {
        point: p.clone(),
        mu: None,
        multiplicity: None,
        mu_sequence: None,
        coarse_type: None,
        branches: None,
        tangent_lines: None,
    };
    let on = checks.ok(&format!("singular {p}"), hs.is_singular_at(p));
    if on != Some(true) {
        if on.is_some() {
            checks.expect(
                format!("singular {p}"),
                false,
                "not a singular point of V(h)",
            );
        }
        return summary;
    }
    checks.expect(format!("singular {p}"), true, "");
    let Some(germ) = checks.ok(&format!("germ {p}"), move_to_origin(hs, p)) else {
        return summary;
    };
    summary.multiplicity = germ.order();
    let Some(mu) = checks.ok(
        &format!("mu {p}"),
        milnor_number(&germ, &mut settings.new_budget()),
    ) else {
        return summary;
    };
    summary.mu = Some(mu);
    match exp.mu {
        Some(e) => checks.expect(format!("mu {p}"), mu == e, format!("{mu} (expected {e})")),
        None => checks.skip(format!("mu {p}"), format!("computed {mu}, no expectation")),
    }
    let Dimension::Finite(mu_val) = mu else {
        return summary;
    };

    let label = p.to_string();
    let Some(seq) = checks.ok(
        &format!("sequence {p}"),
        sequence_of_germ(&germ, settings, &label),
    ) else {
        return summary;
    };
    let m = summary.multiplicity.unwrap_or(0);
    let n = germ.nvars();
    checks.expect(
        format!("sequence {p}"),
        is_log_convex(&seq) && seq[1] == u64::from(m) - 1,
        format!("{seq:?}, multiplicity {m}"),
    );
    if let Some(sec) = exp.sectional_mu {
        checks.expect(
            format!("sectional-mu {p}"),
            seq[n - 1] == sec,
            format!("{} (expected {sec})", seq[n - 1]),
        );
    }
    if let Some(ct) = checks.ok(&format!("coarse-type {p}"), coarse_type(&germ, &seq)) {
        summary.coarse_type = Some(ct);
        match &exp.annotation {
            Some(a) => checks.expect(
                format!("coarse-type {p}"),
                ct.label == a.coarse_label(),
                format!("{} (annotation {a})", ct.label),
            ),
            None => checks.skip(format!("coarse-type {p}"), format!("computed {}", ct.label)),
        }
    }
    summary.mu_sequence = Some(seq);

    match detect_weights(&germ) {
        Some(w) => {
            let mo = milnor_orlik(&w);
            checks.expect(
                format!("milnor-orlik {p}"),
                mo == num_rational::BigRational::from_integer(mu_val.into()),
                format!("weights {w}, product {mo}"),
            );
        }
        None => checks.skip(format!("milnor-orlik {p}"), "not weighted homogeneous"),
    }

    if n == 2 && mu_val > 0 {
        check_branches(&germ, mu_val, settings, checks, &mut summary);
    }
    summary
}

fn check_branches(
    germ: &LocalGerm,
    mu: u64,
    settings: &Settings,
    checks: &mut Checks,
    summary: &mut PointSummary,
) {
    let p = summary.point.clone();
    let Some(t) = checks.ok(&format!("branches {p}"), tangent_cone_lines(germ)) else {
        return;
    };
    let Some(r) = checks.ok(&format!("branches {p}"), branch_count(germ, settings)) else {
        return;
    };
    summary.branches = Some(r.r);
    summary.tangent_lines = Some(t.t);
    checks.expect(
        format!("branches {p}"),
        r.r >= t.t as u64 && (mu + r.r - 1).is_multiple_of(2),
        format!("r = {}, t = {}, mu + r - 1 = {}", r.r, t.t, mu + r.r - 1),
    );
}

fn check_factorization(
    rec: &CorpusRecord,
    hs: &Hypersurface,
    f: &crate::corpus::Factorization,
    settings: &Settings,
    checks: &mut Checks,
) {
    let nv = rec.nvars();
    let parsed = crate::parse::parse_poly(&f.first, nv)
        .and_then(|a| crate::parse::parse_poly(&f.second, nv).map(|b| (a, b)));
    let Some((h1, h2)) = checks.ok("lemma16", parsed) else {
        return;
    };
    let product = h1.checked_mul(&h2);
    checks.expect(
        "factorization",
        product.as_ref() == Ok(hs.poly()),
        format!("({}) * ({})", f.first, f.second),
    );
    let listed: Vec<ProjectivePoint> = rec.points.iter().map(|p| p.point.clone()).collect();
    let report = lemma16_check(
        &h1,
        &h2,
        &f.first_points,
        &f.second_points,
        &listed,
        settings,
    );
    if let Some(r) = checks.ok("lemma16", report) {
        checks.expect(
            "lemma16",
            r.holds,
            format!(
                "{} = {} + {} + {} - 1",
                r.product_degree, r.first_degree, r.second_degree, r.intersections
            ),
        );
    }
}

/// Verify `records` on at most `parallelism` threads.
pub fn verify_all(
    records: &[CorpusRecord],
    settings: &Settings,
    parallelism: usize,
) -> VerificationReport {
    let start = Instant::now();
    let run = || -> Vec<RecordReport> {
        records
            .par_iter()
            .map(|r| verify_record(r, settings))
            .collect()
    };
    let reports = match rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => records.iter().map(|r| verify_record(r, settings)).collect(),
    };
    VerificationReport {
        seed: settings.seed,
        records: reports,
        seconds: start.elapsed().as_secs_f64(),
    }
}
