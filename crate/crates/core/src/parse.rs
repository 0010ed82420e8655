//! Text front end for polynomials.
//!
//! ```text
//! expr        := ['+'|'-'] term (('+'|'-') term)*
//! term        := factor ('*' factor)*
//! factor      := coefficient | var | var '^' nat | '(' expr ')'
//! var         := 'z' nat | 'x' nat
//! coefficient := integer | integer '/' positive-integer
//! ```
//!
//! `z` variables are 0-based projective coordinates; `x` variables are 1-based
//! affine coordinates, so `x1` is variable 0. One expression uses one family.
//! Whitespace is ignored and multiplication must be written out.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{ExponentVector, Polynomial};

/// Parse `text` as a polynomial in `nvars` variables.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
        family: None,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

/// Number of variables an expression needs: one past the largest index used.
pub fn infer_nvars(text: &str) -> Result<usize> {
    let bytes = text.as_bytes();
    let mut max = None::<usize>;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if (c == b'z' || c == b'x') && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let idx: usize = text[start..j].parse().map_err(|_| Error::Parse {
                position: start,
                message: "variable index too large".into(),
            })?;
            let count = if c == b'x' { idx } else { idx + 1 };
            max = Some(max.map_or(count, |m| m.max(count)));
            i = j;
        } else {
            i += 1;
        }
    }
    Ok(max.unwrap_or(1).max(1))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Z,
    X,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    family: Option<Family>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small_nat(&mut self) -> Result<u32> {
        let start = self.pos;
        let n = self.nat()?;
        u32::try_from(n).map_err(|_| Error::Parse {
            position: start,
            message: "number too large".into(),
        })
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    return Err(self.error("exponents apply to variables only"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.nat()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.nat()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                if self.peek() == Some(b'^') {
                    return Err(self.error("exponents apply to variables only"));
                }
                Ok(Polynomial::constant(self.nvars, value))
            }
            Some(c @ (b'z' | b'x')) => {
                let var_pos = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected a variable index"));
                }
                let family = if c == b'z' { Family::Z } else { Family::X };
                match self.family {
                    None => self.family = Some(family),
                    Some(f) if f != family => {
                        return Err(Error::Parse {
                            position: var_pos,
                            message: "cannot mix z and x variables".into(),
                        })
                    }
                    _ => {}
                }
                let raw = self.small_nat()? as usize;
                let index = match family {
                    Family::Z => raw,
                    Family::X => raw.checked_sub(1).ok_or(Error::Parse {
                        position: var_pos,
                        message: "x variables are numbered from 1".into(),
                    })?,
                };
                if index >= self.nvars {
                    return Err(Error::VariableOutOfRange {
                        index,
                        nvars: self.nvars,
                    });
                }
                let mut exp = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    exp = self.small_nat()?;
                }
                let mut e = vec![0; self.nvars];
                e[index] = exp;
                Ok(Polynomial::monomial(
                    ExponentVector::new(e),
                    BigRational::one(),
                ))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn conic_and_tangent_expanded() {
        let p = parse_poly("z0*z1^2 + z0^2*z2", 3).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&ExponentVector::new(vec![1, 2, 0])), rat(1));
        assert_eq!(p.coeff(&ExponentVector::new(vec![2, 0, 1])), rat(1));
    }

    #[test]
    fn zero_and_vanishing_hessian_cubic() {
        assert!(parse_poly("0", 3).unwrap().is_zero());
        let gn = parse_poly("z3^2*z0 + z3*z4*z1 + z4^2*z2", 5).unwrap();
        assert_eq!(gn.num_terms(), 3);
        assert!(gn.terms().all(|(e, _)| e.degree() == 3));
    }

    #[test]
    fn affine_variables_are_one_based() {
        let a = parse_poly("x1^2 + x2^3", 2).unwrap();
        let b = parse_poly("z0^2 + z1^3", 2).unwrap();
        assert_eq!(a, b);
        assert!(parse_poly("x0", 2).is_err());
        assert!(parse_poly("x1 + z1", 2).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("z0 + * z1", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poly("z3", 3),
            Err(Error::VariableOutOfRange { index: 3, nvars: 3 })
        ));
        assert!(parse_poly("2 z0", 1).is_err(), "implicit multiplication");
        assert!(parse_poly("z0 / 2", 1).is_err());
        assert!(parse_poly("1/0", 1).is_err());
        assert!(parse_poly("(z0+z1)^2", 2).is_err());
    }

    #[test]
    fn signs_and_parentheses() {
        let p = parse_poly("-(z0 - 3/4*z1) * (z0 + z1) + 2", 2).unwrap();
        let q = parse_poly("-z0^2 - 1/4*z0*z1 + 3/4*z1^2 + 2", 2).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn inferred_variable_counts() {
        assert_eq!(infer_nvars("z0*z4 + z2").unwrap(), 5);
        assert_eq!(infer_nvars("x1^2 + x3").unwrap(), 3);
        assert_eq!(infer_nvars("7").unwrap(), 1);
    }
}
