//! Standard bases in the local ring at the origin.
//!
//! Everything here works with the anti-graded reverse lexicographic order
//! (`ds`): lower total degree is larger, ties go to reverse lexicographic
//! comparison. The constant monomial is the largest, so leading terms are
//! lowest-degree terms and Buchberger reduction alone need not terminate.
//! Reduction therefore follows Mora: among usable reducers pick the one of
//! smallest écart and remember intermediate results whose écart is smaller
//! than the reducer's.
//!
//! Once the partial basis proves `m^N ⊆ I` (every monomial of degree `N` has a
//! leading-monomial divisor) all terms of degree `>= N` are dropped from
//! intermediate results, which keeps zero-dimensional computations finite and
//! small.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{ExponentVector, Polynomial};

/// Default cap on reduction steps for one standard-basis computation.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Monomial order used for local computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocalOrder {
    /// Negative degree reverse lexicographic order.
    #[default]
    NegDegRevLex,
}

impl LocalOrder {
    /// `Greater` means `a` is the larger (more leading) monomial.
    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(ds_cmp(a.as_slice(), b.as_slice()))
    }
}

/// Free-function form of [`LocalOrder::compare`].
pub fn local_compare(a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
    LocalOrder::NegDegRevLex.compare(a, b)
}

fn ds_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return db.cmp(&da);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // the smaller trailing exponent wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Order on homogenised monomials, the homogenising variable last: higher
/// total degree first, ties broken by the local order on the other variables.
fn homog_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    let n = a.len() - 1;
    da.cmp(&db).then_with(|| ds_cmp(&a[..n], &b[..n]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Order {
    Local,
    Homogenized,
}

impl Order {
    fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            Order::Local => ds_cmp(a, b),
            Order::Homogenized => homog_cmp(a, b),
        }
    }
}

/// Reduction-step counter shared by one computation.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
    // internal cap on coefficient words written, used to interleave strategies
    work: u64,
    work_cap: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: 0,
            work: 0,
            work_cap: u64::MAX,
        }
    }

    fn trial(steps: u64, work_cap: u64) -> Self {
        Budget {
            work_cap,
            ..Budget::new(steps)
        }
    }

    fn add_work(&mut self, words: u64) -> Result<()> {
        self.work = self.work.saturating_add(words);
        if self.work > self.work_cap {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    fn step(&mut self) -> Result<()> {
        self.charge(1)
    }

    fn charge(&mut self, steps: u64) -> Result<()> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Vector-space dimension that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dimension::Finite(n) => Some(n),
            Dimension::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dimension::Finite(_))
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => f.write_str("inf"),
        }
    }
}

/// A polynomial germ at the origin of affine space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGerm {
    poly: Polynomial,
}

impl LocalGerm {
    pub fn new(poly: Polynomial) -> Result<Self> {
        if !poly.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(LocalGerm { poly })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    /// Order of vanishing at the origin (the multiplicity), `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.poly.order()
    }

    pub fn jacobian(&self) -> Vec<Polynomial> {
        self.poly.gradient()
    }
}

#[derive(Clone, Debug)]
pub struct StandardBasisResult {
    pub basis: Vec<Polynomial>,
    pub leading_exponents: Vec<ExponentVector>,
    pub standard_monomial_count: Dimension,
}

// ---------------------------------------------------------------------------
// internal sparse representation: integer coefficients, terms sorted with the
// leading term first

#[derive(Clone, Debug)]
struct Term {
    exp: Box<[u32]>,
    deg: u32,
    coef: BigInt,
}

#[derive(Clone, Debug)]
struct LPoly {
    terms: Vec<Term>,
    max_deg: u32,
    order: Order,
}

impl LPoly {
    fn from_poly(p: &Polynomial) -> LPoly {
        let p = p.primitive_part();
        let terms = p
            .terms()
            .map(|(e, c)| {
                debug_assert!(c.is_integer());
                Term {
                    exp: e.as_slice().into(),
                    deg: e.degree(),
                    coef: c.to_integer(),
                }
            })
            .collect();
        LPoly::sorted(terms, Order::Local)
    }

    fn sorted(mut terms: Vec<Term>, order: Order) -> LPoly {
        terms.sort_by(|a, b| order.cmp(&b.exp, &a.exp));
        let max_deg = terms.iter().map(|t| t.deg).max().unwrap_or(0);
        LPoly {
            terms,
            max_deg,
            order,
        }
    }

    /// `t^d p(x/t)` with `d` the degree of `p`, `t` appended as the last variable.
    fn homogenize(p: &Polynomial) -> LPoly {
        let p = p.primitive_part();
        let d = p.total_degree().unwrap_or(0);
        let terms = p
            .terms()
            .map(|(e, c)| {
                let mut exp = e.as_slice().to_vec();
                exp.push(d - e.degree());
                Term {
                    exp: exp.into(),
                    deg: d,
                    coef: c.to_integer(),
                }
            })
            .collect();
        LPoly::sorted(terms, Order::Homogenized)
    }

    /// Sets the homogenising variable to one. Terms of a homogeneous
    /// polynomial stay distinct.
    fn dehomogenize(&self) -> LPoly {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let exp: Box<[u32]> = t.exp[..t.exp.len() - 1].into();
                Term {
                    deg: exp.iter().sum(),
                    exp,
                    coef: t.coef.clone(),
                }
            })
            .collect();
        LPoly::sorted(terms, Order::Local)
    }

    fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            self.terms.iter().map(|t| {
                (
                    ExponentVector::new(t.exp.to_vec()),
                    BigRational::from_integer(t.coef.clone()),
                )
            }),
        )
        .expect("consistent ring")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Machine words held by the coefficients.
    fn words(&self) -> u64 {
        self.terms.iter().map(|t| t.coef.bits() / 64 + 1).sum()
    }

    fn lead(&self) -> &Term {
        &self.terms[0]
    }

    fn ecart(&self) -> u32 {
        self.max_deg - self.terms[0].deg
    }

    fn refresh_degree(&mut self) {
        self.max_deg = self.terms.iter().map(|t| t.deg).max().unwrap_or(0);
    }

    fn truncate(&mut self, bound: Option<u32>) {
        if let Some(n) = bound {
            self.terms.retain(|t| t.deg < n);
            self.refresh_degree();
        }
    }

    fn make_primitive(&mut self) {
        let Some(first) = self.terms.first() else {
            return;
        };
        let mut g = first.coef.abs();
        for t in &self.terms[1..] {
            if g.is_one() {
                break;
            }
            g = g.gcd(&t.coef);
        }
        let flip = first.coef.is_negative();
        if !g.is_one() {
            for t in &mut self.terms {
                t.coef = &t.coef / &g;
            }
        }
        if flip {
            for t in &mut self.terms {
                t.coef = -&t.coef;
            }
        }
    }

    /// `a * self - b * x^shift * other`, assuming the result is sorted by merge.
    fn combine(&self, a: &BigInt, other: &LPoly, shift: &[u32], b: &BigInt) -> LPoly {
        let shift_deg: u32 = shift.iter().sum();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted =
            |t: &Term| -> Box<[u32]> { t.exp.iter().zip(shift).map(|(x, y)| x + y).collect() };
        let mut pending: Option<(Box<[u32]>, u32, BigInt)> = None;
        while i < self.terms.len() || j < other.terms.len() {
            if pending.is_none() && j < other.terms.len() {
                let t = &other.terms[j];
                pending = Some((shifted(t), t.deg + shift_deg, -(b * &t.coef)));
            }
            let take_self = match (&pending, self.terms.get(i)) {
                (None, Some(_)) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some((e, _, _)), Some(s)) => self.order.cmp(&s.exp, e),
                (None, None) => unreachable!(),
            };
            match take_self {
                Ordering::Greater => {
                    let s = &self.terms[i];
                    out.push(Term {
                        exp: s.exp.clone(),
                        deg: s.deg,
                        coef: a * &s.coef,
                    });
                    i += 1;
                }
                Ordering::Less => {
                    let (e, d, c) = pending.take().expect("pending term");
                    out.push(Term {
                        exp: e,
                        deg: d,
                        coef: c,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let (e, d, c) = pending.take().expect("pending term");
                    let s = &self.terms[i];
                    let sum = a * &s.coef + c;
                    if !sum.is_zero() {
                        out.push(Term {
                            exp: e,
                            deg: d,
                            coef: sum,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        let max_deg = out.iter().map(|t| t.deg).max().unwrap_or(0);
        LPoly {
            terms: out,
            max_deg,
            order: self.order,
        }
    }

    fn shifted(&self, shift: &[u32]) -> LPoly {
        let sd: u32 = shift.iter().sum();
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp.iter().zip(shift).map(|(x, y)| x + y).collect(),
                    deg: t.deg + sd,
                    coef: t.coef.clone(),
                })
                .collect(),
            max_deg: self.max_deg + sd,
            order: self.order,
        }
    }

    /// Cancel the leading term of `self` against `g`, whose leading monomial divides it.
    fn reduce_by(&self, g: &LPoly) -> LPoly {
        let lh = self.lead();
        let lg = g.lead();
        let shift: Vec<u32> = lh
            .exp
            .iter()
            .zip(lg.exp.iter())
            .map(|(x, y)| x - y)
            .collect();
        let d = lh.coef.gcd(&lg.coef);
        let a = &lg.coef / &d;
        let b = &lh.coef / &d;
        self.combine(&a, g, &shift, &b)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Weak normal form by Mora's écart-driven reduction. `bound`, when set, is a
/// degree `N` with `m^N` inside the ideal; terms of degree `>= N` are dropped
/// and plain reduction is used.
fn mora_nf(
    mut h: LPoly,
    reducers: &[LPoly],
    bound: Option<u32>,
    budget: &mut Budget,
) -> Result<LPoly> {
    h.truncate(bound);
    let mut extra: Vec<LPoly> = Vec::new();
    let mut steps_since_content = 0;
    loop {
        if h.is_zero() {
            return Ok(h);
        }
        let lead = &h.lead().exp;
        let pick = reducers
            .iter()
            .chain(extra.iter())
            .filter(|g| !g.is_zero() && divides(&g.lead().exp, lead))
            .min_by_key(|g| g.ecart());
        let Some(g) = pick else {
            h.make_primitive();
            return Ok(h);
        };
        budget.step()?;
        let next = if bound.is_none() && g.ecart() > h.ecart() {
            let g = g.clone();
            let r = h.reduce_by(&g);
            extra.push(h);
            r
        } else {
            h.reduce_by(g)
        };
        h = next;
        h.truncate(bound);
        budget.add_work(h.words())?;
        steps_since_content += 1;
        if steps_since_content >= 8 {
            h.make_primitive();
            steps_since_content = 0;
        }
    }
}

/// Weak normal form of `g` with respect to `basis` in the local ring.
///
/// The result `r` satisfies `u g - r ∈ ⟨basis⟩` for a unit `u`, and if `r` is
/// nonzero its leading monomial is divisible by no leading monomial of `basis`.
/// Coefficients are normalised to a primitive integer representative.
pub fn mora_normal_form(
    g: &Polynomial,
    basis: &[Polynomial],
    _order: LocalOrder,
    budget: &mut Budget,
) -> Result<Polynomial> {
    let n = g.nvars();
    if let Some(b) = basis.iter().find(|b| b.nvars() != n) {
        return Err(Error::NvarsMismatch {
            left: n,
            right: b.nvars(),
        });
    }
    let reducers: Vec<LPoly> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(LPoly::from_poly)
        .collect();
    let r = mora_nf(LPoly::from_poly(g), &reducers, None, budget)?;
    Ok(r.to_poly(n))
}

/// Leading exponent of a nonzero polynomial under the local order.
pub fn local_leading_exponent(p: &Polynomial) -> Option<ExponentVector> {
    p.terms()
        .map(|(e, _)| e)
        .max_by(|a, b| ds_cmp(a.as_slice(), b.as_slice()))
        .cloned()
}

struct Pair {
    i: usize,
    j: usize,
    lcm_deg: u32,
    sugar: u32,
}

/// Smallest `N` such that every monomial of degree `N` is divisible by one of `leads`.
fn highest_corner_degree(leads: &[&[u32]], nvars: usize) -> Option<u32> {
    let mut pure = vec![u32::MAX; nvars];
    for l in leads {
        let nz: Vec<usize> = (0..nvars).filter(|&k| l[k] > 0).collect();
        if nz.len() == 1 {
            pure[nz[0]] = pure[nz[0]].min(l[nz[0]]);
        } else if nz.is_empty() {
            return Some(0);
        }
    }
    if pure.contains(&u32::MAX) {
        return None;
    }
    let start = *pure.iter().max().expect("nvars > 0");
    let end: u32 = pure.iter().map(|p| p - 1).sum::<u32>() + 1;
    (start..=end.max(start)).find(|&deg| all_monomials_covered(leads, nvars, deg))
}

fn all_monomials_covered(leads: &[&[u32]], nvars: usize, deg: u32) -> bool {
    fn rec(leads: &[&[u32]], cur: &mut Vec<u32>, nvars: usize, left: u32) -> bool {
        if cur.len() + 1 == nvars {
            cur.push(left);
            let ok = leads.iter().any(|l| divides(l, cur));
            cur.pop();
            return ok;
        }
        for k in 0..=left {
            cur.push(k);
            let ok = rec(leads, cur, nvars, left - k);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(leads, &mut Vec::with_capacity(nvars), nvars, deg)
}

/// Work cap, in coefficient words written, of the first round in
/// [`standard_basis`]; it grows fourfold per round.
const FIRST_ROUND_WORK: u64 = 1 << 16;

/// Standard basis of the ideal generated by `gens` in the local ring.
///
/// Without a known corner Mora reduction can produce very large intermediate
/// polynomials, while a non-isolated ideal has no corner at all. Each round
/// runs three attempts under a shared work cap:
///
/// - the plain computation;
/// - the computation modulo `m^N` for increasing `N`, stopping once every
///   monomial of degree `N - 1` is a leading monomial: `m^(N-1)` then lies in
///   the ideal by Nakayama and nothing was lost;
/// - a Gröbner basis of the homogenised generators, with ties in degree broken
///   by the local order, which dehomogenises to a standard basis (Lazard).
///   This one always terminates.
///
/// Steps of abandoned attempts count against `budget`.
pub fn standard_basis(
    gens: &[Polynomial],
    _order: LocalOrder,
    budget: &mut Budget,
) -> Result<StandardBasisResult> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let n = first.nvars();
    if let Some(b) = gens.iter().find(|b| b.nvars() != n) {
        return Err(Error::NvarsMismatch {
            left: n,
            right: b.nvars(),
        });
    }
    let local: Vec<LPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(LPoly::from_poly)
        .collect();
    let homogenized: Vec<LPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(LPoly::homogenize)
        .collect();
    let mut cap = FIRST_ROUND_WORK;
    let mut degree = 2;
    let basis = 'rounds: loop {
        let mut trial = Budget::trial(budget.remaining(), cap);
        let attempt = basis_up_to(&local, n, None, &mut trial);
        budget.charge(trial.used())?;
        match attempt {
            Ok(basis) => break basis,
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
        // all degrees of one round share the cap
        let mut trial = Budget::trial(budget.remaining(), cap);
        loop {
            let before = trial.used();
            let attempt = basis_up_to(&local, n, Some(degree), &mut trial);
            budget.charge(trial.used() - before)?;
            match attempt {
                Ok(basis) => {
                    let leads: Vec<&[u32]> = basis.iter().map(|g| &*g.lead().exp).collect();
                    if all_monomials_covered(&leads, n, degree - 1) {
                        break 'rounds basis;
                    }
                    degree += 1;
                }
                Err(Error::BudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        let mut trial = Budget::trial(budget.remaining(), cap);
        let attempt = basis_up_to(&homogenized, n + 1, None, &mut trial);
        budget.charge(trial.used())?;
        match attempt {
            Ok(basis) => break basis.iter().map(LPoly::dehomogenize).collect(),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
        cap = cap.saturating_mul(4);
    };
    Ok(finish(gens, basis, n))
}

/// Buchberger-Mora loop over `n` variables. With `preset` every term of degree
/// `>= preset` is dropped from the start, which computes a basis of
/// `I + m^preset`.
fn basis_up_to(
    gens: &[LPoly],
    n: usize,
    preset: Option<u32>,
    budget: &mut Budget,
) -> Result<Vec<LPoly>> {
    let mut basis: Vec<LPoly> = Vec::new();
    // truncated copies used for reduction once a corner is known
    let mut work: Vec<LPoly> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut bound: Option<u32> = preset;

    for g in gens {
        // reduce each generator against the previous ones so leads are minimal
        let r = mora_nf(g.clone(), &work, bound, budget)?;
        if !r.is_zero() {
            insert(&mut basis, &mut work, &mut pairs, &mut bound, r, n);
        }
    }

    while !pairs.is_empty() {
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| (p.sugar, p.lcm_deg))
            .expect("nonempty");
        let pair = pairs.swap_remove(idx);
        if let Some(nb) = bound {
            if pair.lcm_deg >= nb {
                continue;
            }
        }
        // an element can vanish once truncated: it lies in m^N and is redundant
        if work[pair.i].is_zero() || work[pair.j].is_zero() {
            continue;
        }
        let s = spoly(&work[pair.i], &work[pair.j]);
        let r = mora_nf(s, &work, bound, budget)?;
        if !r.is_zero() {
            insert(&mut basis, &mut work, &mut pairs, &mut bound, r, n);
        }
    }
    Ok(basis)
}

fn finish(gens: &[Polynomial], basis: Vec<LPoly>, n: usize) -> StandardBasisResult {
    let originals: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    // drop elements whose leading monomial is a multiple of another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && divides(&basis[j].lead().exp, &basis[i].lead().exp)
                && (basis[j].lead().exp != basis[i].lead().exp || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let mut result_basis = Vec::new();
    let mut leads = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        if keep[k] {
            result_basis.push(b.to_poly(n));
            leads.push(ExponentVector::new(b.lead().exp.to_vec()));
        }
    }
    // generators whose leading monomials were redundant still belong to the
    // generating set; keep the ideal equal to the input ideal
    let count = count_standard_monomials(&leads, n);
    let mut full_basis = result_basis;
    for g in originals {
        if !full_basis
            .iter()
            .any(|b| b.primitive_part() == g.primitive_part())
        {
            let lead = local_leading_exponent(g).expect("nonzero");
            if leads.iter().any(|l| l.divides(&lead)) {
                full_basis.push(g.primitive_part());
            }
        }
    }
    let leading_exponents = full_basis
        .iter()
        .map(|b| local_leading_exponent(b).expect("nonzero"))
        .collect();
    StandardBasisResult {
        basis: full_basis,
        leading_exponents,
        standard_monomial_count: count,
    }
}

fn insert(
    basis: &mut Vec<LPoly>,
    work: &mut Vec<LPoly>,
    pairs: &mut Vec<Pair>,
    bound: &mut Option<u32>,
    mut r: LPoly,
    n: usize,
) {
    r.make_primitive();
    let r_order = r.order;
    let idx = basis.len();
    let mut w = r.clone();
    w.truncate(*bound);
    if w.is_zero() {
        return;
    }
    for (k, other) in work.iter().enumerate() {
        if other.is_zero() {
            continue;
        }
        let a = &w.lead().exp;
        let b = &other.lead().exp;
        let coprime = a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0);
        if coprime && (w.ecart() == 0 || other.ecart() == 0) {
            continue;
        }
        let lcm: Vec<u32> = a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect();
        let lcm_deg: u32 = lcm.iter().sum();
        pairs.push(Pair {
            i: k,
            j: idx,
            lcm_deg,
            sugar: lcm_deg + w.ecart().max(other.ecart()),
        });
    }
    basis.push(r);
    work.push(w);
    if bound.is_none() && r_order == Order::Local {
        let leads: Vec<&[u32]> = work
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| &*g.lead().exp)
            .collect();
        if let Some(nb) = highest_corner_degree(&leads, n) {
            *bound = Some(nb);
            for g in work.iter_mut() {
                g.truncate(Some(nb));
            }
        }
    }
}

fn spoly(f: &LPoly, g: &LPoly) -> LPoly {
    let lf = &f.lead().exp;
    let lg = &g.lead().exp;
    let lcm: Vec<u32> = lf.iter().zip(lg.iter()).map(|(x, y)| *x.max(y)).collect();
    let sf: Vec<u32> = lcm.iter().zip(lf.iter()).map(|(x, y)| x - y).collect();
    let sg: Vec<u32> = lcm.iter().zip(lg.iter()).map(|(x, y)| x - y).collect();
    let d = f.lead().coef.gcd(&g.lead().coef);
    let a = &g.lead().coef / &d;
    let b = &f.lead().coef / &d;
    let mut s = f.shifted(&sf).combine(&a, g, &sg, &b);
    s.make_primitive();
    s
}

/// Number of monomials outside the monomial ideal generated by `leads`.
pub fn count_standard_monomials(leads: &[ExponentVector], nvars: usize) -> Dimension {
    if leads.iter().any(ExponentVector::is_constant) {
        return Dimension::Finite(0);
    }
    if nvars == 0 {
        return Dimension::Finite(1);
    }
    let mut pure = vec![u32::MAX; nvars];
    for l in leads {
        let nz: Vec<usize> = (0..nvars).filter(|&k| l[k] > 0).collect();
        if nz.len() == 1 {
            pure[nz[0]] = pure[nz[0]].min(l[nz[0]]);
        }
    }
    if pure.contains(&u32::MAX) {
        return Dimension::Infinite;
    }
    let leads: Vec<&[u32]> = leads.iter().map(ExponentVector::as_slice).collect();
    fn rec(leads: &[&[u32]], pure: &[u32], cur: &mut Vec<u32>) -> u64 {
        if cur.len() == pure.len() {
            return u64::from(!leads.iter().any(|l| divides(l, cur)));
        }
        let k = cur.len();
        let mut total = 0;
        for e in 0..pure[k] {
            cur.push(e);
            // prune: once a prefix is divisible with zeros after, all extensions are too
            let mut probe = cur.clone();
            probe.resize(pure.len(), 0);
            if leads.iter().any(|l| divides(l, &probe)) {
                cur.pop();
                break;
            }
            total += rec(leads, pure, cur);
            cur.pop();
        }
        total
    }
    Dimension::Finite(rec(&leads, &pure, &mut Vec::with_capacity(nvars)))
}

/// Milnor number: colength of the Jacobian ideal in the local ring.
pub fn milnor_number(f: &LocalGerm, budget: &mut Budget) -> Result<Dimension> {
    if f.poly().is_zero() {
        return Ok(Dimension::Infinite);
    }
    let sb = standard_basis(&f.jacobian(), LocalOrder::NegDegRevLex, budget)?;
    Ok(sb.standard_monomial_count)
}

/// Tjurina number: colength of `⟨f, ∂f⟩` in the local ring.
pub fn tjurina_number(f: &LocalGerm, budget: &mut Budget) -> Result<Dimension> {
    if f.poly().is_zero() {
        return Ok(Dimension::Infinite);
    }
    let mut gens = vec![f.poly().clone()];
    gens.extend(f.jacobian());
    let sb = standard_basis(&gens, LocalOrder::NegDegRevLex, budget)?;
    Ok(sb.standard_monomial_count)
}

/// `n` minus the rank of the Hessian matrix of `f` at the origin.
pub fn hessian_corank_at_origin(f: &LocalGerm) -> Result<usize> {
    let n = f.nvars();
    let p = f.poly();
    if p.order().is_some_and(|o| o < 2) {
        return Err(Error::NonzeroLinearPart);
    }
    let mut h = vec![vec![BigRational::zero(); n]; n];
    for (e, c) in p.terms() {
        if e.degree() != 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&k| e[k] > 0).collect();
        match idx.as_slice() {
            [i] => h[*i][*i] = c * BigRational::from_integer(2.into()),
            [i, j] => {
                h[*i][*j] = c.clone();
                h[*j][*i] = c.clone();
            }
            _ => unreachable!("degree two monomial"),
        }
    }
    Ok(n - linalg::rank(&h))
}
