use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::Poly;
use super::ring::Ring;
use super::PolyError;
use crate::exact::Rational;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.into() })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Poly, PolyError> {
        let mut acc = if self.eat(b'-') { -&self.term()? } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let start = self.pos;
                let d = self.factor()?;
                if !d.is_constant() || d.is_zero() {
                    self.pos = start;
                    return self.err("division only by nonzero constants");
                }
                let c = d.leading_coeff().unwrap().clone();
                acc = acc.scale(&(Rational::one() / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected exponent");
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| PolyError::Parse { pos: start, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(Poly::constant(self.ring, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(PolyError::UnknownVariable(name.to_string())),
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in the documented ASCII grammar over `ring`.
pub fn parse_poly(src: &str, ring: &Arc<Ring>) -> Result<Poly, PolyError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ring };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let out = p.poly()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::multipoly::MonomialOrder;

    #[test]
    fn grammar() {
        let r = Ring::new(["x_1_1", "x_1_2", "x_2_2", "t"], MonomialOrder::Lex);
        let p = parse_poly("3/2*x_1_2^2*x_2_2 - 1", &r).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.leading_coeff().unwrap(), &ratio(3, 2));
        assert_eq!(p.to_string(), "3/2*x_1_2^2*x_2_2 - 1");
        let q = parse_poly("-(x_1_1 - t)^2 + 0*t", &r).unwrap();
        assert_eq!(q.to_string(), "-x_1_1^2 + 2*x_1_1*t - t^2");
        assert!(matches!(parse_poly("x_9 + 1", &r), Err(PolyError::UnknownVariable(_))));
        assert!(matches!(parse_poly("x_1_1 +", &r), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_poly("x_1_1 / t", &r), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_poly("", &r), Err(PolyError::Parse { .. })));
        assert!(parse_poly("0", &r).unwrap().is_zero());
    }

    proptest::proptest! {
        #[test]
        fn print_parse_round_trip(terms in proptest::collection::vec((-20i64..20, 1i64..5, 0u32..3, 0u32..3, 0u32..2), 0..6)) {
            let r = Ring::new(["x", "y", "z"], MonomialOrder::GrevLex);
            let p = Poly::from_terms(&r, terms.iter().map(|&(n, d, a, b, c)| {
                (crate::multipoly::Monomial(vec![a, b, c]), ratio(n, d))
            }).collect());
            let back = parse_poly(&p.to_string(), &r).unwrap();
            proptest::prop_assert_eq!(back, p);
        }
    }
}
