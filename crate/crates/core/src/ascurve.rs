//! Artin-Schreier curves `y^2 + y = f(x)` in characteristic two.
//!
//! Adding `h^2 + h` to `f` does not change the curve. [`reduce`] picks a
//! canonical representative of that class: at every pole (including
//! infinity) the local expansion has no even-order terms, and the constant
//! is `0` or the field's canonical trace-one element. Genus and 2-rank are
//! then read off the pole divisor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor;
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::ratfun::{Place, PoleDivisor, RatFun, RatFunJson};

/// Principal part at a finite place `q`: `digits[j-1]` is the residue
/// polynomial (degree < deg q) of the `1/q^j` term.
struct LocalPart {
    q: Poly,
    digits: Vec<Poly>,
}

/// Square root in the residue field `F[x]/(q)`, of size `2^(m deg q)`.
fn residue_sqrt(u: &Poly, q: &Poly) -> Poly {
    let bits = u.spec().degree() * q.deg() as u32;
    u.frobenius_mod(bits - 1, q)
}

fn local_parts(f: &RatFun) -> (Poly, Vec<LocalPart>) {
    let (poly_part, proper) = f.num().divrem(f.den()).expect("denominator is nonzero");
    if f.den().is_one() {
        return (poly_part, vec![]);
    }
    let fac = factor::factor(f.den()).expect("denominator is nonzero");
    let mut parts = Vec::with_capacity(fac.factors.len());
    for (q, e) in fac.factors {
        let qe = q.pow(e);
        let cofactor = f.den().div_exact(&qe);
        let inv = cofactor.inv_mod(&qe).expect("coprime factors");
        let mut a = proper.mulmod(&inv, &qe);
        // q-adic expansion a = sum d_i q^i, i < e; term d_i / q^(e - i)
        let mut digits = vec![Poly::zero(q.spec()); e as usize];
        for i in 0..e as usize {
            let (quo, r) = a.divrem(&q).unwrap();
            digits[e as usize - 1 - i] = r;
            a = quo;
        }
        parts.push(LocalPart { q, digits });
    }
    (poly_part, parts)
}

/// Canonical Artin-Schreier representative of `f`.
pub fn reduce(f: &RatFun) -> RatFun {
    let spec = f.spec();
    if f.is_zero() {
        return f.clone();
    }
    let (poly_part, mut parts) = local_parts(f);

    for part in &mut parts {
        let q = &part.q;
        for j in (2..=part.digits.len()).rev() {
            if j % 2 == 1 || part.digits[j - 1].is_zero() {
                continue;
            }
            // add (s/q^k)^2 + s/q^k with s^2 = u mod q, k = j/2
            let u = std::mem::replace(&mut part.digits[j - 1], Poly::zero(spec));
            let s = residue_sqrt(&u, q);
            let (t, r) = s.square().divrem(q).unwrap();
            debug_assert_eq!(r, u);
            part.digits[j - 2] = &part.digits[j - 2] + &t;
            part.digits[j / 2 - 1] = &part.digits[j / 2 - 1] + &s;
        }
    }

    let mut c: Vec<u32> = poly_part.coeffs_raw().to_vec();
    for i in (2..c.len()).rev() {
        if i % 2 == 0 && c[i] != 0 {
            let s = spec.sqrt_raw(c[i]);
            c[i] = 0;
            c[i / 2] ^= s;
        }
    }
    if let Some(c0) = c.first_mut() {
        *c0 = if spec.trace_raw(*c0) == 0 {
            0
        } else {
            spec.canonical_trace_one()
        };
    }

    let mut out = RatFun::from_poly(Poly::from_raw(spec, c));
    for part in &parts {
        let top = match part.digits.iter().rposition(|d| !d.is_zero()) {
            Some(t) => t + 1,
            None => continue,
        };
        let qtop = part.q.pow(top as u32);
        let mut num = Poly::zero(spec);
        for j in 1..=top {
            let d = &part.digits[j - 1];
            if !d.is_zero() {
                num = &num + &(d * &part.q.pow((top - j) as u32));
            }
        }
        out = &out + &RatFun::new(num, qtop).unwrap();
    }
    out
}

/// Genus and 2-rank of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invariants {
    pub genus: u32,
    pub two_rank: u32,
}

impl Invariants {
    /// Genus `-1 + sum deg(P) (n_P + 1)/2` and 2-rank `sum deg(P) - 1` of
    /// a nonempty divisor with odd orders.
    pub fn from_odd_poles(poles: &PoleDivisor) -> Invariants {
        debug_assert!(!poles.is_empty());
        debug_assert!(poles.poles.iter().all(|(_, n)| n % 2 == 1));
        let weight: u32 = poles.poles.iter().map(|(p, n)| p.degree() * (n + 1) / 2).sum();
        Invariants {
            genus: weight - 1,
            two_rank: poles.geometric_count() - 1,
        }
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, sigma={})", self.genus, self.two_rank)
    }
}

/// `y^2 + y = f(x)` with `f` stored in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ASCurve {
    f: RatFun,
    poles: PoleDivisor,
}

impl ASCurve {
    pub fn new(f: &RatFun) -> Result<Self> {
        let f = reduce(f);
        if f.is_constant() {
            return Err(Error::DegenerateCover(f.to_text()));
        }
        let poles = f.pole_divisor();
        Ok(ASCurve { f, poles })
    }

    pub fn spec(&self) -> FieldSpec {
        self.f.spec()
    }

    pub fn rhs(&self) -> &RatFun {
        &self.f
    }

    pub fn poles(&self) -> &PoleDivisor {
        &self.poles
    }

    pub fn has_pole_at(&self, place: &Place) -> bool {
        self.poles.order_at(place) > 0
    }

    pub fn invariants(&self) -> Invariants {
        Invariants::from_odd_poles(&self.poles)
    }

    pub fn to_text(&self) -> String {
        format!("y^2+y = {} over {}", self.f, self.spec())
    }

    pub fn to_json(&self) -> CurveJson {
        let inv = self.invariants();
        CurveJson {
            f: self.f.to_json(),
            genus: inv.genus,
            two_rank: inv.two_rank,
            text: self.to_text(),
        }
    }
}

impl fmt::Display for ASCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub f: RatFunJson,
    pub genus: u32,
    pub two_rank: u32,
    pub text: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_ratfun;

    fn p(spec: FieldSpec, s: &str) -> RatFun {
        parse_ratfun(spec, s).unwrap()
    }

    fn inv(spec: FieldSpec, s: &str) -> (u32, u32) {
        let i = ASCurve::new(&p(spec, s)).unwrap().invariants();
        (i.genus, i.two_rank)
    }

    #[test]
    fn reduction_examples() {
        let f2 = FieldSpec::gf2();
        assert_eq!(reduce(&p(f2, "x^2")), p(f2, "x"));
        assert!(reduce(&p(f2, "1/x^2 + 1/x")).is_zero());
        assert_eq!(reduce(&p(f2, "x^4 + x^3")), p(f2, "x^3 + x"));
        assert_eq!(reduce(&p(f2, "x^3 + x^2")), p(f2, "x^3 + x"));
        // constants: 1 has trace 1 over GF(2) but trace 0 over GF(4)
        assert_eq!(reduce(&p(f2, "x^3 + 1")), p(f2, "x^3 + 1"));
        let f4 = FieldSpec::gf4();
        assert_eq!(reduce(&p(f4, "x^3 + 1")), p(f4, "x^3"));
        assert_eq!(reduce(&p(f4, "x^3 + a + 1")), p(f4, "x^3 + a"));
    }

    #[test]
    fn reduction_at_higher_degree_place() {
        let f2 = FieldSpec::gf2();
        let f = p(f2, "1/(x^2+x+1)^2");
        let r = reduce(&f);
        assert_eq!(r.den(), &Poly::from_raw(f2, vec![1, 1, 1]));
        assert_eq!(ASCurve::new(&f).unwrap().invariants().genus, 1);
    }

    #[test]
    fn make_curves() {
        let f2 = FieldSpec::gf2();
        assert_eq!(ASCurve::new(&p(f2, "x^3")).unwrap().rhs(), &p(f2, "x^3"));
        assert_eq!(ASCurve::new(&p(f2, "x^2")).unwrap().rhs(), &p(f2, "x"));
        assert!(matches!(
            ASCurve::new(&p(f2, "1/x^2 + 1/x")),
            Err(Error::DegenerateCover(_))
        ));
    }

    #[test]
    fn invariant_examples() {
        let f2 = FieldSpec::gf2();
        assert_eq!(inv(f2, "x^3"), (1, 0));
        assert_eq!(inv(f2, "1/x + 1/(x+1)"), (1, 1));
        assert_eq!(inv(f2, "x^3 + 1/x + 1/(x+1)"), (3, 2));
        assert_eq!(inv(f2, "1/(x^2+x+1)"), (1, 1));
    }
}
