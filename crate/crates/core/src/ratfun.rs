use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Embedding, Felt, FieldSpec};
use crate::poly::Poly;

/// A closed point of the projective line over the base field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    /// A monic irreducible polynomial; its degree counts conjugate geometric points.
    Finite(Poly),
}

impl Place {
    pub fn degree(&self) -> u32 {
        match self {
            Place::Infinity => 1,
            Place::Finite(q) => q.deg() as u32,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Finite(q) => write!(f, "({q})"),
        }
    }
}

/// Poles of a rational function with their orders, sorted by place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PoleDivisor {
    pub poles: Vec<(Place, u32)>,
}

impl PoleDivisor {
    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn order_at(&self, place: &Place) -> u32 {
        self.poles
            .iter()
            .find(|(p, _)| p == place)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.poles.iter().map(|(p, _)| p)
    }

    /// Number of geometric poles.
    pub fn geometric_count(&self) -> u32 {
        self.poles.iter().map(|(p, _)| p.degree()).sum()
    }
}

/// Normalized rational function: monic denominator coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.spec() != den.spec() {
            return Err(Error::FieldMismatch);
        }
        if num.is_zero() {
            return Ok(RatFun::zero(num.spec()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let inv = num.spec().inv_raw(den.lead_raw()).unwrap();
        Ok(RatFun {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let spec = p.spec();
        RatFun { num: p, den: Poly::one(spec) }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        RatFun::from_poly(Poly::zero(spec))
    }

    pub fn constant(spec: FieldSpec, c: u32) -> Self {
        RatFun::from_poly(Poly::constant(spec, c))
    }

    pub fn x(spec: FieldSpec) -> Self {
        RatFun::from_poly(Poly::x(spec))
    }

    /// `c * x^k`
    pub fn monomial(spec: FieldSpec, c: u32, k: usize) -> Self {
        RatFun::from_poly(Poly::monomial(spec, c, k))
    }

    /// `c / q^k`
    pub fn pole_term(c: u32, q: &Poly, k: u32) -> Self {
        RatFun::new(Poly::constant(q.spec(), c), q.pow(k)).unwrap()
    }

    pub fn spec(&self) -> FieldSpec {
        self.num.spec()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn scale(&self, c: u32) -> RatFun {
        if c == 0 {
            return RatFun::zero(self.spec());
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn square(&self) -> RatFun {
        RatFun {
            num: self.num.square(),
            den: self.den.square(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<RatFun> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFun {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn div(&self, rhs: &RatFun) -> Result<RatFun> {
        Ok(self * &rhs.inv()?)
    }

    /// Value at infinity when finite: 0 if deg num < deg den, the ratio of
    /// leading coefficients if equal, `None` for a pole.
    pub fn value_at_infinity_raw(&self) -> Option<u32> {
        use std::cmp::Ordering::*;
        match self.num.deg().cmp(&self.den.deg()) {
            Less => Some(0),
            Equal => Some(self.num.lead_raw()),
            Greater => None,
        }
    }

    pub fn pole_order_at_infinity(&self) -> u32 {
        (self.num.deg() - self.den.deg()).max(0) as u32
    }

    pub fn has_pole_at(&self, place: &Place) -> bool {
        match place {
            Place::Infinity => self.pole_order_at_infinity() > 0,
            Place::Finite(q) => self.den.rem(q).is_zero(),
        }
    }

    /// Poles from the factored denominator plus the order at infinity.
    pub fn pole_divisor(&self) -> PoleDivisor {
        let mut poles = Vec::new();
        let inf = self.pole_order_at_infinity();
        if inf > 0 {
            poles.push((Place::Infinity, inf));
        }
        if !self.den.is_one() {
            let fac = factor::factor(&self.den).expect("denominator is nonzero");
            for (q, e) in fac.factors {
                poles.push((Place::Finite(q), e));
            }
        }
        PoleDivisor { poles }
    }

    /// Substitutes `x -> (a x + b) / (c x + d)`.
    pub fn mobius(&self, m: [[Felt; 2]; 2]) -> Result<RatFun> {
        let spec = self.spec();
        let [[a, b], [c, d]] = m;
        if [a, b, c, d].iter().any(|e| e.spec() != spec) {
            return Err(Error::FieldMismatch);
        }
        if (a * d + b * c).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let top = Poly::from_felts(spec, &[b, a]);
        let bottom = Poly::from_felts(spec, &[d, c]);
        let k = self.num.deg().max(self.den.deg()).max(0) as u32;
        let homogenize = |p: &Poly| -> Poly {
            let mut acc = Poly::zero(spec);
            for (i, &ci) in p.coeffs_raw().iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                let t = &top.pow(i as u32) * &bottom.pow(k - i as u32);
                acc = &acc + &t.scale(ci);
            }
            acc
        };
        RatFun::new(homogenize(&self.num), homogenize(&self.den))
    }

    pub fn embed(&self, emb: &Embedding) -> RatFun {
        RatFun {
            num: self.num.embed(emb),
            den: self.den.embed(emb),
        }
    }

    /// Every coefficient of both parts, as field elements.
    pub fn coefficients(&self) -> impl Iterator<Item = u32> + '_ {
        self.num.coeffs_raw().iter().chain(self.den.coeffs_raw()).copied()
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            return self.num.to_text("x");
        }
        let n = self.num.to_text("x");
        let n = if self.num.term_count() > 1 || n.contains(['*', '+']) {
            format!("({n})")
        } else {
            n
        };
        format!("{n} / ({})", self.den.to_text("x"))
    }

    pub fn to_json(&self) -> RatFunJson {
        RatFunJson {
            field: FieldJson::from(self.spec()),
            num: self.num.coeffs_raw().to_vec(),
            den: self.den.coeffs_raw().to_vec(),
            text: self.to_text(),
        }
    }
}

/// Denominator first, then numerator.
impl Ord for RatFun {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.den, &self.num).cmp(&(&other.den, &other.num))
    }
}

impl PartialOrd for RatFun {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let g = self.den.gcd(&rhs.den);
        let l = self.den.div_exact(&g);
        let r = rhs.den.div_exact(&g);
        let num = &(&self.num * &r) + &(&rhs.num * &l);
        RatFun::new(num, &l * &rhs.den).unwrap()
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        &self + &rhs
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        &self * &rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub name: String,
    pub degree: u32,
    pub modulus: u32,
}

impl From<FieldSpec> for FieldJson {
    fn from(s: FieldSpec) -> Self {
        FieldJson {
            name: s.name(),
            degree: s.degree(),
            modulus: s.modulus(),
        }
    }
}

impl FieldJson {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.degree, self.modulus as u64)
    }
}

/// Coefficient arrays are low degree first; each entry is the element's bit pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunJson {
    pub field: FieldJson,
    pub num: Vec<u32>,
    pub den: Vec<u32>,
    pub text: String,
}

impl RatFunJson {
    pub fn to_ratfun(&self) -> Result<RatFun> {
        let spec = self.field.to_spec()?;
        RatFun::new(
            Poly::from_raw(spec, self.num.clone()),
            Poly::from_raw(spec, self.den.clone()),
        )
    }
}
