//! Binary fields GF(2^m), m <= 24, as bit-vectors modulo an explicit irreducible.
//!
//! Elements are stored as the coefficient bits of their residue representative
//! (bit `i` is the coefficient of `a^i`). A [`FieldSpec`] is `Copy`, so every
//! polynomial and element carries its field by value and mixing fields is a
//! cheap equality check.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 24;

/// Arithmetic on polynomials over GF(2) packed into a `u64`.
pub mod bitpoly {
    #[inline]
    pub fn degree(p: u64) -> i32 {
        63 - p.leading_zeros() as i32
    }

    #[inline]
    pub fn clmul(a: u64, b: u64) -> u64 {
        let mut acc = 0u64;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        acc
    }

    pub fn rem(mut a: u64, m: u64) -> u64 {
        let dm = degree(m);
        let mut da = degree(a);
        while da >= dm {
            a ^= m << (da - dm);
            da = degree(a);
        }
        a
    }

    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = rem(a, b);
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        rem(clmul(a, b), m)
    }

    /// Smallest-degree nontrivial factor witness of `m`, or `None` when `m`
    /// is irreducible over GF(2). Degree must be at least 1 and at most 31.
    pub fn reducible_witness(m: u64) -> Option<u64> {
        let d = degree(m);
        if d <= 0 {
            return Some(m);
        }
        if d == 1 {
            return None;
        }
        // Ben-Or: gcd(x^(2^i) - x, m) for i up to d/2.
        let x = 0b10u64;
        let mut h = x;
        for _ in 1..=d / 2 {
            h = mulmod(h, h, m);
            let g = gcd(m, h ^ x);
            if degree(g) > 0 {
                return Some(g);
            }
        }
        None
    }
}

/// A finite field GF(2^m) given by a monic irreducible modulus over GF(2).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    degree: u32,
    modulus: u32,
    trace_mask: u32,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{:#b}]", self.name(), self.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn canonical_moduli() -> &'static Mutex<HashMap<u32, u32>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, u32>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

type EmbeddingKey = (FieldSpec, FieldSpec);

fn embeddings() -> &'static Mutex<HashMap<EmbeddingKey, Arc<Embedding>>> {
    static CACHE: OnceLock<Mutex<HashMap<EmbeddingKey, Arc<Embedding>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldSpec {
    /// Validates `modulus` (bit `i` = coefficient of `a^i`) as a degree-`m`
    /// irreducible polynomial.
    pub fn new(m: u32, modulus: u64) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::FieldDegree(m));
        }
        if bitpoly::degree(modulus) != m as i32 {
            return Err(Error::ModulusDegree { degree: m, modulus });
        }
        if let Some(factor) = bitpoly::reducible_witness(modulus) {
            return Err(Error::Reducible { modulus, factor });
        }
        let mut spec = FieldSpec {
            degree: m,
            modulus: modulus as u32,
            trace_mask: 0,
        };
        let mut mask = 0u32;
        for i in 0..m {
            if spec.trace_slow(1 << i) == 1 {
                mask |= 1 << i;
            }
        }
        spec.trace_mask = mask;
        Ok(spec)
    }

    /// The project-wide modulus for degree `m`: the numerically smallest
    /// irreducible with nonzero constant term. Degree 2 gives `a^2+a+1`.
    pub fn canonical(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::FieldDegree(m));
        }
        let cached = canonical_moduli().lock().unwrap().get(&m).copied();
        let modulus = match cached {
            Some(md) => md as u64,
            None => {
                let lo = 1u64 << m;
                let found = (lo + 1..lo << 1)
                    .step_by(2)
                    .find(|&c| bitpoly::reducible_witness(c).is_none())
                    .expect("irreducible polynomials exist in every degree");
                canonical_moduli().lock().unwrap().insert(m, found as u32);
                found
            }
        };
        FieldSpec::new(m, modulus)
    }

    pub fn gf2() -> Self {
        FieldSpec::canonical(1).unwrap()
    }

    pub fn gf4() -> Self {
        FieldSpec::canonical(2).unwrap()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1u64 << self.degree
    }

    pub fn name(&self) -> String {
        format!("GF({})", self.size())
    }

    pub fn is_canonical(&self) -> bool {
        FieldSpec::canonical(self.degree).map(|c| c == *self).unwrap_or(false)
    }

    pub fn elem(&self, bits: u32) -> Felt {
        debug_assert!(bits < (1u32 << self.degree) || self.degree == 32);
        Felt { spec: *self, bits }
    }

    pub fn zero(&self) -> Felt {
        self.elem(0)
    }

    pub fn one(&self) -> Felt {
        self.elem(1)
    }

    /// The generator `a` (the class of the modulus variable). In GF(2) this is 1.
    pub fn generator(&self) -> Felt {
        if self.degree == 1 {
            self.one()
        } else {
            self.elem(0b10)
        }
    }

    /// Iterates every element in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.size() as u32).map(move |b| self.elem(b))
    }

    // raw arithmetic on bit representations

    #[inline]
    pub fn mul_raw(&self, x: u32, y: u32) -> u32 {
        let prod = bitpoly::clmul(x as u64, y as u64);
        let m = self.degree as i32;
        let mut r = prod;
        let mut d = bitpoly::degree(r);
        while d >= m {
            r ^= (self.modulus as u64) << (d - m);
            d = bitpoly::degree(r);
        }
        r as u32
    }

    #[inline]
    pub fn square_raw(&self, x: u32) -> u32 {
        self.mul_raw(x, x)
    }

    pub fn pow_raw(&self, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.square_raw(base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm on GF(2)[a].
    pub fn inv_raw(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as u64, x as u64);
        let (mut s0, mut s1) = (0u64, 1u64);
        while r1 != 0 {
            let mut q = 0u64;
            let mut r = r0;
            let d1 = bitpoly::degree(r1);
            let mut dr = bitpoly::degree(r);
            while dr >= d1 {
                q |= 1 << (dr - d1);
                r ^= r1 << (dr - d1);
                dr = bitpoly::degree(r);
            }
            r0 = r1;
            r1 = r;
            let s = s0 ^ bitpoly::clmul(q, s1);
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0, 1);
        Some(bitpoly::rem(s0, self.modulus as u64) as u32)
    }

    /// Unique square root `x^(2^(m-1))`.
    pub fn sqrt_raw(&self, x: u32) -> u32 {
        let mut r = x;
        for _ in 1..self.degree {
            r = self.square_raw(r);
        }
        r
    }

    fn trace_slow(&self, x: u32) -> u32 {
        let mut acc = 0u32;
        let mut t = x;
        for _ in 0..self.degree {
            acc ^= t;
            t = self.square_raw(t);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// Absolute trace to GF(2).
    #[inline]
    pub fn trace_raw(&self, x: u32) -> u32 {
        (x & self.trace_mask).count_ones() & 1
    }

    /// Smallest element (by bits) of absolute trace 1: `1` for odd degree,
    /// `a` in GF(4).
    pub fn canonical_trace_one(&self) -> u32 {
        (1..self.size() as u32)
            .find(|&b| self.trace_raw(b) == 1)
            .expect("trace is surjective")
    }

    /// Writes the element as a polynomial in `a`, highest power first.
    pub fn format_raw(&self, x: u32) -> String {
        if x == 0 {
            return "0".into();
        }
        let mut terms = Vec::new();
        for i in (0..self.degree).rev() {
            if x >> i & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "a".to_string(),
                    _ => format!("a^{i}"),
                });
            }
        }
        terms.join("+")
    }

    pub fn is_subfield_of(&self, other: &FieldSpec) -> bool {
        other.degree % self.degree == 0
    }

    /// The canonical field of degree `k` over this one.
    pub fn extension(&self, k: u32) -> Result<FieldSpec> {
        let d = self.degree.checked_mul(k).ok_or(Error::ExtensionTooLarge(u32::MAX))?;
        if d > MAX_DEGREE {
            return Err(Error::ExtensionTooLarge(d));
        }
        FieldSpec::canonical(d)
    }

    /// Embedding of this field into `target`, cached per pair. The generator
    /// maps to the root of this modulus in `target` with the smallest bits.
    pub fn embedding_into(&self, target: &FieldSpec) -> Result<Arc<Embedding>> {
        if !self.is_subfield_of(target) {
            return Err(Error::Precondition(format!(
                "{} is not a subfield of {}",
                self.name(),
                target.name()
            )));
        }
        let key = (*self, *target);
        if let Some(e) = embeddings().lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let images = if self == target {
            (0..self.degree).map(|i| 1u32 << i).collect()
        } else {
            let root = crate::factor::smallest_root_of_modulus(self, target);
            let mut images = Vec::with_capacity(self.degree as usize);
            let mut p = 1u32;
            for _ in 0..self.degree {
                images.push(p);
                p = target.mul_raw(p, root);
            }
            images
        };
        let emb = Arc::new(Embedding {
            source: *self,
            target: *target,
            images,
        });
        embeddings().lock().unwrap().insert(key, emb.clone());
        Ok(emb)
    }
}

/// A field homomorphism GF(2^d) -> GF(2^n), d | n, stored by basis images.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub source: FieldSpec,
    pub target: FieldSpec,
    images: Vec<u32>,
}

impl Embedding {
    #[inline]
    pub fn map_raw(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros();
            acc ^= self.images[i as usize];
            bits &= bits - 1;
        }
        acc
    }

    pub fn map(&self, x: Felt) -> Felt {
        debug_assert_eq!(x.spec, self.source);
        self.target.elem(self.map_raw(x.bits))
    }

    /// Preimage of `y`, if it lies in the image.
    pub fn preimage_raw(&self, y: u32) -> Option<u32> {
        (0..self.source.size() as u32).find(|&x| self.map_raw(x) == y)
    }
}

/// An element of a binary field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Felt {
    spec: FieldSpec,
    bits: u32,
}

impl Felt {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn inv(self) -> Result<Felt> {
        self.spec
            .inv_raw(self.bits)
            .map(|b| self.spec.elem(b))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(self, e: u64) -> Felt {
        self.spec.elem(self.spec.pow_raw(self.bits, e))
    }

    pub fn sqrt(self) -> Felt {
        self.spec.elem(self.spec.sqrt_raw(self.bits))
    }

    /// Absolute trace, as an element of the prime field embedded in this one.
    pub fn trace(self) -> Felt {
        self.spec.elem(self.spec.trace_raw(self.bits))
    }

    pub fn checked_mul(self, rhs: Felt) -> Result<Felt> {
        if self.spec != rhs.spec {
            return Err(Error::FieldMismatch);
        }
        Ok(self * rhs)
    }
}

impl fmt::Debug for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec.format_raw(self.bits))
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.format_raw(self.bits))
    }
}

impl Add for Felt {
    type Output = Felt;
    fn add(self, rhs: Felt) -> Felt {
        assert_eq!(self.spec, rhs.spec, "field mismatch");
        self.spec.elem(self.bits ^ rhs.bits)
    }
}

impl Sub for Felt {
    type Output = Felt;
    fn sub(self, rhs: Felt) -> Felt {
        self + rhs
    }
}

impl Mul for Felt {
    type Output = Felt;
    fn mul(self, rhs: Felt) -> Felt {
        assert_eq!(self.spec, rhs.spec, "field mismatch");
        self.spec.elem(self.spec.mul_raw(self.bits, rhs.bits))
    }
}
