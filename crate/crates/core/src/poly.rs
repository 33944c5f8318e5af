use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::field::{Embedding, Felt, FieldSpec};

/// Dense univariate polynomial over a binary field, low degree first,
/// without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn from_raw(spec: FieldSpec, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { spec, coeffs }
    }

    pub fn from_felts(spec: FieldSpec, coeffs: &[Felt]) -> Self {
        Poly::from_raw(spec, coeffs.iter().map(|c| c.bits()).collect())
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Poly { spec, coeffs: vec![] }
    }

    pub fn one(spec: FieldSpec) -> Self {
        Poly::constant(spec, 1)
    }

    pub fn constant(spec: FieldSpec, c: u32) -> Self {
        Poly::from_raw(spec, vec![c])
    }

    pub fn x(spec: FieldSpec) -> Self {
        Poly::monomial(spec, 1, 1)
    }

    /// `c * x^k`
    pub fn monomial(spec: FieldSpec, c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::from_raw(spec, v)
    }

    /// `x - c` (equal to `x + c` in characteristic two).
    pub fn linear(spec: FieldSpec, c: u32) -> Self {
        Poly::from_raw(spec, vec![c, 1])
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs_raw(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff_raw(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Felt {
        self.spec.elem(self.coeff_raw(i))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial at -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead_raw(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead_raw() == 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.spec.inv_raw(self.lead_raw()).unwrap();
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(self.spec);
        }
        Poly {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|&a| self.spec.mul_raw(a, c)).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Poly { spec: self.spec, coeffs: v }
    }

    pub fn derivative(&self) -> Poly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();
        Poly::from_raw(self.spec, v)
    }

    /// Square root of a polynomial whose odd coefficients vanish.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0) {
            return None;
        }
        let v = self
            .coeffs
            .iter()
            .step_by(2)
            .map(|&c| self.spec.sqrt_raw(c))
            .collect();
        Some(Poly::from_raw(self.spec, v))
    }

    pub fn square(&self) -> Poly {
        let mut v = vec![0; self.coeffs.len() * 2];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[2 * i] = self.spec.square_raw(c);
        }
        Poly::from_raw(self.spec, v)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        assert_eq!(self.spec, d.spec, "field mismatch");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(self.spec), self.clone()));
        }
        let inv_lead = self.spec.inv_raw(d.lead_raw()).unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = self.spec.mul_raw(c, inv_lead);
            q[i - dd] = t;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] ^= self.spec.mul_raw(t, dc);
            }
        }
        r.truncate(dd);
        Ok((Poly::from_raw(self.spec, q), Poly::from_raw(self.spec, r)))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Quotient of an exact division; panics (debug) on a nonzero remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*other = g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let spec = self.spec;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(spec), Poly::zero(spec));
        let (mut t0, mut t1) = (Poly::zero(spec), Poly::one(spec));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = spec.inv_raw(r0.lead_raw()).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse of `self` modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).xgcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.spec).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// `self^(2^k) mod m`.
    pub fn frobenius_mod(&self, k: u32, m: &Poly) -> Poly {
        let mut r = self.rem(m);
        for _ in 0..k {
            r = r.square().rem(m);
        }
        r
    }

    #[inline]
    pub fn eval_raw(&self, x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = self.spec.mul_raw(acc, x) ^ c;
        }
        acc
    }

    pub fn eval(&self, x: Felt) -> Felt {
        assert_eq!(x.spec(), self.spec, "field mismatch");
        self.spec.elem(self.eval_raw(x.bits()))
    }

    /// Coefficients pushed through a field embedding.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        assert_eq!(emb.source, self.spec);
        Poly {
            spec: emb.target,
            coeffs: self.coeffs.iter().map(|&c| emb.map_raw(c)).collect(),
        }
    }

    /// Pulls coefficients back through `emb` if they all lie in its image.
    pub fn descend(&self, emb: &Embedding) -> Option<Poly> {
        let v = self
            .coeffs
            .iter()
            .map(|&c| emb.preimage_raw(c))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::from_raw(emb.source, v))
    }

    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            let cs = self.spec.format_raw(c);
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let term = if k == 0 {
                cs
            } else if c == 1 {
                mono
            } else if cs.contains('+') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.spec, rhs.spec, "field mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| self.coeff_raw(i) ^ rhs.coeff_raw(i)).collect();
        Poly::from_raw(self.spec, v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.spec, rhs.spec, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.spec);
        }
        let mut v = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] ^= self.spec.mul_raw(a, b);
            }
        }
        Poly::from_raw(self.spec, v)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
