//! Branch counting by Newton–Puiseux over towers of quotient rings.
//!
//! Roots of edge polynomials are never computed. A squarefree factor `ψ` of
//! an edge polynomial over the ring `A` becomes the ring `A[T]/ψ(T)`, which is
//! a product of fields as long as nobody looks too closely. When an inversion
//! meets a zero divisor the offending modulus is split into two coprime
//! factors and the computation that introduced it is redone on both pieces
//! (dynamic evaluation).
//!
//! Counting convention: a call over `A` returns the sum, over all embeddings
//! of `A` into `C`, of the number of branches at the origin. Over `Q` this is
//! the plain branch count.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::poly::Polynomial;

/// Element of level `k`: a rational for `k = 0`, otherwise the coefficients
/// (over level `k - 1`) of a polynomial in `T_k` reduced modulo `m_k`.
#[derive(Clone, Debug, PartialEq)]
enum El {
    Q(BigRational),
    P(Vec<El>),
}

/// Polynomial over a level, constant term first, no trailing zeros.
type UPoly = Vec<El>;

#[derive(Debug)]
enum Fail {
    /// `factor` is a proper monic factor of the modulus of `level`.
    Split {
        level: usize,
        factor: UPoly,
    },
    Fatal(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Fatal(e)
    }
}

type R<T> = std::result::Result<T, Fail>;

#[derive(Default)]
struct Tower {
    /// `moduli[k - 1]` is the monic polynomial over level `k - 1` defining level `k`.
    moduli: Vec<UPoly>,
}

impl Tower {
    fn top(&self) -> usize {
        self.moduli.len()
    }

    /// `dim_Q` of level `k`.
    fn dim(&self, k: usize) -> u64 {
        self.moduli[..k]
            .iter()
            .map(|m| (m.len() - 1) as u64)
            .product()
    }

    fn zero(&self, k: usize) -> El {
        if k == 0 {
            El::Q(BigRational::zero())
        } else {
            El::P(Vec::new())
        }
    }

    fn rational(&self, k: usize, q: BigRational) -> El {
        if k == 0 {
            El::Q(q)
        } else if q.is_zero() {
            El::P(Vec::new())
        } else {
            El::P(vec![self.rational(k - 1, q)])
        }
    }

    fn one(&self, k: usize) -> El {
        self.rational(k, BigRational::one())
    }

    /// Embed an element of level `from` into level `to >= from`.
    fn lift(&self, a: El, from: usize, to: usize) -> El {
        (from..to).fold(a, |acc, _| match &acc {
            El::Q(q) if q.is_zero() => El::P(Vec::new()),
            El::P(v) if v.is_empty() => El::P(Vec::new()),
            _ => El::P(vec![acc]),
        })
    }

    /// The generator `T_k` of level `k >= 1`, reduced.
    fn generator(&self, k: usize) -> El {
        let t = vec![self.zero(k - 1), self.one(k - 1)];
        El::P(self.prem_monic(k - 1, t, &self.moduli[k - 1]))
    }

    fn is_zero(a: &El) -> bool {
        match a {
            El::Q(q) => q.is_zero(),
            El::P(v) => v.is_empty(),
        }
    }

    fn add(&self, k: usize, a: &El, b: &El) -> El {
        match (a, b) {
            (El::Q(x), El::Q(y)) => El::Q(x + y),
            (El::P(x), El::P(y)) => El::P(self.padd(k - 1, x, y)),
            _ => unreachable!("mixed levels"),
        }
    }

    fn neg(&self, k: usize, a: &El) -> El {
        match a {
            El::Q(x) => El::Q(-x),
            El::P(v) => El::P(v.iter().map(|c| self.neg(k - 1, c)).collect()),
        }
    }

    fn sub(&self, k: usize, a: &El, b: &El) -> El {
        self.add(k, a, &self.neg(k, b))
    }

    fn mul(&self, k: usize, a: &El, b: &El) -> El {
        match (a, b) {
            (El::Q(x), El::Q(y)) => El::Q(x * y),
            (El::P(x), El::P(y)) => {
                let prod = self.pmul(k - 1, x, y);
                El::P(self.prem_monic(k - 1, prod, &self.moduli[k - 1]))
            }
            _ => unreachable!("mixed levels"),
        }
    }

    fn pow(&self, k: usize, a: &El, e: u32) -> El {
        let mut acc = self.one(k);
        for _ in 0..e {
            acc = self.mul(k, &acc, a);
        }
        acc
    }

    fn inv(&self, k: usize, a: &El) -> R<El> {
        match a {
            El::Q(x) => {
                assert!(!x.is_zero(), "inverting zero");
                Ok(El::Q(x.recip()))
            }
            El::P(v) => {
                assert!(!v.is_empty(), "inverting zero");
                let m = &self.moduli[k - 1];
                let (g, s) = self.pxgcd(k - 1, v, m)?;
                if g.len() > 1 {
                    return Err(Fail::Split {
                        level: k,
                        factor: g,
                    });
                }
                Ok(El::P(self.prem_monic(k - 1, s, m)))
            }
        }
    }

    // ---- univariate polynomials over level k

    fn trim(&self, mut a: UPoly) -> UPoly {
        while a.last().is_some_and(Self::is_zero) {
            a.pop();
        }
        a
    }

    fn padd(&self, k: usize, a: &[El], b: &[El]) -> UPoly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.add(k, x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.trim(out)
    }

    fn psub(&self, k: usize, a: &[El], b: &[El]) -> UPoly {
        let nb: UPoly = b.iter().map(|c| self.neg(k, c)).collect();
        self.padd(k, a, &nb)
    }

    fn pscale(&self, k: usize, a: &[El], c: &El) -> UPoly {
        self.trim(a.iter().map(|x| self.mul(k, x, c)).collect())
    }

    fn pmul(&self, k: usize, a: &[El], b: &[El]) -> UPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(k); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if Self::is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(k, x, y);
                out[i + j] = self.add(k, &out[i + j], &t);
            }
        }
        self.trim(out)
    }

    /// Remainder modulo a monic polynomial; needs no inversion.
    fn prem_monic(&self, k: usize, a: UPoly, m: &[El]) -> UPoly {
        let dm = m.len() - 1;
        let mut r = self.trim(a);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top].clone();
            let shift = top - dm;
            for (j, mc) in m.iter().enumerate() {
                let t = self.mul(k, &c, mc);
                r[shift + j] = self.sub(k, &r[shift + j], &t);
            }
            r = self.trim(r);
        }
        r
    }

    fn pdivrem(&self, k: usize, a: &[El], b: &[El]) -> R<(UPoly, UPoly)> {
        let db = b.len() - 1;
        let inv = self.inv(k, b.last().expect("nonzero divisor"))?;
        let mut r = a.to_vec();
        if r.len() <= db {
            return Ok((Vec::new(), r));
        }
        let mut q = vec![self.zero(k); r.len() - db];
        for s in (0..q.len()).rev() {
            let c = self.mul(k, &r[s + db], &inv);
            if !Self::is_zero(&c) {
                for (j, bc) in b.iter().enumerate() {
                    let t = self.mul(k, &c, bc);
                    r[s + j] = self.sub(k, &r[s + j], &t);
                }
            }
            q[s] = c;
        }
        r.truncate(db);
        Ok((self.trim(q), self.trim(r)))
    }

    fn pmonic(&self, k: usize, a: &[El]) -> R<UPoly> {
        let inv = self.inv(k, a.last().expect("nonzero"))?;
        Ok(self.pscale(k, a, &inv))
    }

    /// Monic gcd `g` and a cofactor `s` with `s a ≡ g (mod b)`.
    fn pxgcd(&self, k: usize, a: &[El], b: &[El]) -> R<(UPoly, UPoly)> {
        let mut r0 = a.to_vec();
        let mut r1 = b.to_vec();
        let mut s0 = vec![self.one(k)];
        let mut s1: UPoly = Vec::new();
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(k, &r0, &r1)?;
            let s = self.psub(k, &s0, &self.pmul(k, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let inv = self.inv(k, r0.last().expect("gcd of nonzero input"))?;
        Ok((self.pscale(k, &r0, &inv), self.pscale(k, &s0, &inv)))
    }

    fn pgcd(&self, k: usize, a: &[El], b: &[El]) -> R<UPoly> {
        let mut r0 = a.to_vec();
        let mut r1 = b.to_vec();
        while !r1.is_empty() {
            let (_, r) = self.pdivrem(k, &r0, &r1)?;
            r0 = std::mem::replace(&mut r1, r);
        }
        self.pmonic(k, &r0)
    }

    fn pderiv(&self, k: usize, a: &[El]) -> UPoly {
        self.trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| {
                    let n = self.rational(k, BigRational::from_integer(i.into()));
                    self.mul(k, c, &n)
                })
                .collect(),
        )
    }

    fn pexact_div(&self, k: usize, a: &[El], b: &[El]) -> R<UPoly> {
        Ok(self.pdivrem(k, a, b)?.0)
    }

    /// Yun's squarefree decomposition: monic factors with multiplicities.
    fn squarefree(&self, k: usize, f: &[El]) -> R<Vec<(UPoly, u32)>> {
        let f = self.pmonic(k, f)?;
        let df = self.pderiv(k, &f);
        let mut out = Vec::new();
        if df.is_empty() {
            return Ok(out);
        }
        let b = self.pgcd(k, &f, &df)?;
        let mut c = self.pexact_div(k, &f, &b)?;
        let mut d = self.psub(k, &self.pexact_div(k, &df, &b)?, &self.pderiv(k, &c));
        let mut i = 1;
        while c.len() > 1 {
            let a = if d.is_empty() {
                c.clone()
            } else {
                self.pgcd(k, &c, &d)?
            };
            if a.len() > 1 {
                out.push((a.clone(), i));
            }
            c = self.pexact_div(k, &c, &a)?;
            let da = if d.is_empty() {
                Vec::new()
            } else {
                self.pexact_div(k, &d, &a)?
            };
            d = self.psub(k, &da, &self.pderiv(k, &c));
            i += 1;
        }
        Ok(out)
    }
}

/// Bivariate polynomial over a level: `(x exponent, y exponent) -> coefficient`.
type BiPoly = BTreeMap<(u32, u32), El>;

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

struct Counter {
    tower: Tower,
    max_depth: usize,
    splits: usize,
}

impl Counter {
    fn count(&mut self, f: BiPoly, depth: usize) -> R<u64> {
        if depth > self.max_depth {
            return Err(Fail::Fatal(Error::DepthExceeded(self.max_depth)));
        }
        let k = self.tower.top();
        let dim = self.tower.dim(k);
        // every coefficient must be a unit so that the Newton polygon is the
        // same over every factor field of the ring
        for c in f.values() {
            self.tower.inv(k, c)?;
        }
        let a = f.keys().map(|e| e.0).min().expect("nonzero");
        let b = f.keys().map(|e| e.1).min().expect("nonzero");
        if a > 1 || b > 1 {
            return Err(Fail::Fatal(Error::NonReduced));
        }
        let mut total = u64::from(a + b) * dim;
        let f: BiPoly = f
            .into_iter()
            .map(|((i, j), c)| ((i - a, j - b), c))
            .collect();
        if f.contains_key(&(0, 0)) {
            return Ok(total);
        }
        for edge in newton_edges(&f) {
            total += self.edge(&f, &edge, depth)?;
        }
        Ok(total)
    }

    fn edge(&mut self, f: &BiPoly, e: &Edge, depth: usize) -> R<u64> {
        let k = self.tower.top();
        let dim = self.tower.dim(k);
        let phi: UPoly = (0..=e.length)
            .map(|s| {
                let key = (e.end.0 - e.p * s, e.end.1 + e.q * s);
                f.get(&key).cloned().unwrap_or_else(|| self.tower.zero(k))
            })
            .collect();
        let mut total = 0;
        for (psi, mult) in self.tower.squarefree(k, &phi)? {
            let deg = (psi.len() - 1) as u64;
            if mult == 1 {
                total += deg * dim;
                continue;
            }
            let mut pending = vec![psi];
            while let Some(m) = pending.pop() {
                self.tower.moduli.push(m.clone());
                let res = self.transform(f, e).and_then(|g| self.count(g, depth + 1));
                self.tower.moduli.pop();
                match res {
                    Ok(c) => total += c,
                    Err(Fail::Split { level, factor }) if level == k + 1 => {
                        self.splits += 1;
                        let cof = self.tower.pexact_div(k, &m, &factor)?;
                        pending.push(factor);
                        pending.push(cof);
                    }
                    Err(other) => return Err(other),
                }
            }
        }
        Ok(total)
    }

    /// `f(ξ^v X^q, X^p (ξ^u + Y)) / X^ℓ` over the newest level, `ξ` its generator.
    fn transform(&self, f: &BiPoly, e: &Edge) -> R<BiPoly> {
        let t = &self.tower;
        let k = t.top();
        let xi = t.generator(k);
        let (u, v) = bezout(e.p, e.q);
        let xi_u = t.pow(k, &xi, u);
        let xi_v = t.pow(k, &xi, v);
        let ell = e.q * e.end.0 + e.p * e.end.1;
        let mut out = BiPoly::new();
        for (&(i, j), c) in f {
            let c = t.lift(c.clone(), k - 1, k);
            let base = t.mul(k, &c, &t.pow(k, &xi_v, i));
            let xe = e.q * i + e.p * j - ell;
            for s in 0..=j {
                let coef = t.rational(k, BigRational::from_integer(binomial(j, s)));
                let term = t.mul(k, &t.mul(k, &base, &coef), &t.pow(k, &xi_u, j - s));
                let slot = out.entry((xe, s)).or_insert_with(|| t.zero(k));
                *slot = t.add(k, slot, &term);
            }
        }
        out.retain(|_, c| !Tower::is_zero(c));
        Ok(out)
    }
}

/// `u` in `[1, p]` and `v >= 0` with `u q - v p = 1`.
fn bezout(p: u32, q: u32) -> (u32, u32) {
    let u = (1..=p)
        .find(|&u| (u * q) % p == 1 % p)
        .expect("p and q are coprime");
    (u, (u * q - 1) / p)
}

#[derive(Debug)]
struct Edge {
    /// Endpoint on the x side (largest x exponent).
    end: (u32, u32),
    /// x step and y step between consecutive lattice points.
    p: u32,
    q: u32,
    length: u32,
}

/// Compact edges of the Newton polygon of a polynomial with `f(0, y)` and
/// `f(x, 0)` both nonzero.
fn newton_edges(f: &BiPoly) -> Vec<Edge> {
    let j0 = f
        .keys()
        .filter(|e| e.0 == 0)
        .map(|e| e.1)
        .min()
        .expect("touches the y axis");
    let mut cur = (0u32, j0);
    let mut edges = Vec::new();
    while cur.1 > 0 {
        // steepest descent from the current vertex, farthest point on ties
        let mut best: Option<((u32, u32), i64, i64)> = None;
        for &(i, j) in f.keys() {
            if i <= cur.0 || j >= cur.1 {
                continue;
            }
            let (di, dj) = (i64::from(i - cur.0), i64::from(cur.1 - j));
            best = match best {
                None => Some(((i, j), di, dj)),
                Some((b, bi, bj)) => {
                    // slope -dj/di is smaller when dj*bi > bj*di
                    let lhs = dj * bi;
                    let rhs = bj * di;
                    if lhs > rhs || (lhs == rhs && i > b.0) {
                        Some(((i, j), di, dj))
                    } else {
                        Some((b, bi, bj))
                    }
                }
            };
        }
        let (next, di, dj) = best.expect("polygon reaches the x axis");
        let g = (di as u32).gcd(&(dj as u32));
        edges.push(Edge {
            end: next,
            p: di as u32 / g,
            q: dj as u32 / g,
            length: g,
        });
        cur = next;
    }
    edges
}

/// Number of branches at the origin of a reduced plane curve germ.
pub(crate) fn count_branches(f: &Polynomial, max_depth: usize) -> Result<u64, Error> {
    count_with_splits(f, max_depth).map(|(n, _)| n)
}

/// Branch count together with the number of ring splits performed.
fn count_with_splits(f: &Polynomial, max_depth: usize) -> Result<(u64, usize), Error> {
    assert_eq!(f.nvars(), 2);
    let tower = Tower::default();
    let bi: BiPoly = f
        .terms()
        .map(|(e, c)| ((e[0], e[1]), tower.rational(0, c.clone())))
        .collect();
    let mut counter = Counter {
        tower,
        max_depth,
        splits: 0,
    };
    match counter.count(bi, 0) {
        Ok(n) => Ok((n, counter.splits)),
        Err(Fail::Fatal(e)) => Err(e),
        Err(Fail::Split { .. }) => unreachable!("Q has no zero divisors"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn r(s: &str) -> u64 {
        count_branches(&parse_poly(s, 2).unwrap(), 64).unwrap()
    }

    #[test]
    fn bezout_coefficients() {
        for (p, q) in [(1, 1), (1, 4), (2, 3), (3, 2), (5, 7)] {
            let (u, v) = bezout(p, q);
            assert_eq!(u * q - v * p, 1);
            assert!((1..=p).contains(&u));
        }
    }

    #[test]
    fn simple_curves() {
        assert_eq!(r("x1^2 - x2^3"), 1);
        assert_eq!(r("x1^2 - x2^2"), 2);
        assert_eq!(r("x1^2 + x2^2"), 2);
        assert_eq!(r("x1^2 - x2^4"), 2);
        assert_eq!(r("x1 + x2^2"), 1);
        assert_eq!(r("x1*x2"), 2);
        assert_eq!(r("x1^3 - x2^3"), 3);
    }

    #[test]
    fn recursion_over_a_quadratic_field() {
        // branches y = ±√2 x + x^2 and y = ±√2 x + x^2 + x^3
        let f = "(x2^2 - 2*x2*x1^2 + x1^4 - 2*x1^2) * (x2^2 - 2*x2*x1^2 - 2*x2*x1^3 + x1^4 + 2*x1^5 + x1^6 - 2*x1^2)";
        assert_eq!(r(f), 4);
    }

    #[test]
    fn zero_divisor_splits_the_ring() {
        // slopes 1 and 2 share the edge; the roots behave differently above it
        let f = parse_poly(
            "(x2 - x1)*(x2 - x1 - x1^2)*(x2 - 2*x1)*(x2 - 2*x1 - x1^3)",
            2,
        )
        .unwrap();
        let (n, splits) = count_with_splits(&f, 64).unwrap();
        assert_eq!(n, 4);
        assert!(splits > 0);
    }

    #[test]
    fn non_reduced_input() {
        let f = parse_poly("x1^2*x2", 2).unwrap();
        assert!(matches!(count_branches(&f, 64), Err(Error::NonReduced)));
    }
}
