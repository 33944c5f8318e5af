//! Parser for the textual rational-function grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := primary ('^' ['-'] integer)?
//! primary := integer | 'a' | 'x' | '(' expr ')'
//! ```
//!
//! Integers are read modulo 2; `a` is the field generator and is rejected
//! over GF(2). Juxtaposition (`3x`) is not accepted.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::ratfun::RatFun;

pub fn parse_ratfun(spec: FieldSpec, src: &str) -> Result<RatFun> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, spec };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.fail("trailing input");
    }
    Ok(r)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    spec: FieldSpec,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
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

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            let _ = c;
            self.pos += 1;
            let t = self.term()?;
            acc = &acc + &t;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    acc = acc.div(&f).map_err(|_| Error::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e = i32::try_from(e).or_else(|_| self.fail("exponent too large"))?;
            let at = self.pos;
            return base.pow(if neg { -e } else { e }).map_err(|_| Error::Parse {
                pos: at,
                msg: "zero raised to a negative power".into(),
            });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.fail("integer overflow"))
    }

    fn primary(&mut self) -> Result<RatFun> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFun::x(self.spec))
            }
            Some(b'a') => {
                if self.spec.degree() < 2 {
                    return self.fail("generator 'a' is not available over GF(2)");
                }
                self.pos += 1;
                Ok(RatFun::from_poly(Poly::constant(self.spec, 0b10)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFun::constant(self.spec, (n & 1) as u32))
            }
            Some(_) => self.fail("unexpected character"),
            None => self.fail("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar_examples() {
        let f4 = FieldSpec::gf4();
        let f = parse_ratfun(f4, "a*x^3 + (a+1)*x").unwrap();
        assert_eq!(f.to_text(), "a*x^3 + (a+1)*x");
        let g = parse_ratfun(f4, "(x^4 + 1) / (x)").unwrap();
        let h = parse_ratfun(f4, "x^3 + 1/x").unwrap();
        assert_eq!(g, h);
        assert_eq!(parse_ratfun(f4, "x^-2").unwrap(), parse_ratfun(f4, "1/x^2").unwrap());
        assert!(parse_ratfun(FieldSpec::gf2(), "a*x").is_err());
        assert!(parse_ratfun(f4, "1/(x+x)").is_err());
        assert!(parse_ratfun(f4, "x +").is_err());
        assert!(parse_ratfun(f4, "x)").is_err());
    }

    fn arb_ratfun() -> impl Strategy<Value = RatFun> {
        (
            prop::collection::vec(0u32..4, 0..6),
            prop::collection::vec(0u32..4, 0..5),
        )
            .prop_map(|(n, mut d)| {
                let f4 = FieldSpec::gf4();
                d.push(1);
                RatFun::new(Poly::from_raw(f4, n), Poly::from_raw(f4, d)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn display_parses_back(f in arb_ratfun()) {
            prop_assert_eq!(parse_ratfun(f.spec(), &f.to_text()).unwrap(), f);
        }
    }
}
