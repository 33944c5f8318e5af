//! Factorization over GF(2^m): squarefree decomposition, distinct-degree
//! splitting, and trace-based equal-degree splitting.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;

static SEED: AtomicU64 = AtomicU64::new(0);

/// Seed for the equal-degree splitting. Results never depend on it (factors
/// are returned sorted), only the running time does.
pub fn set_seed(seed: u64) {
    SEED.store(seed, Ordering::Relaxed);
}

pub fn seed() -> u64 {
    SEED.load(Ordering::Relaxed)
}

/// A complete factorization: `unit * prod(f^e)` with monic irreducible `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, spec: FieldSpec) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(spec, self.unit), |acc, (f, e)| &acc * &f.pow(*e))
    }
}

pub fn factor(p: &Poly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = p.lead_raw();
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (sf, mult) in squarefree(&p.monic()) {
        for (g, d) in distinct_degree(&sf) {
            for f in equal_degree(&g, d, &mut rng) {
                out.push((f, mult));
            }
        }
    }
    out.sort();
    // squarefree parts are pairwise coprime, but merge defensively on equal factors
    let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(out.len());
    for (f, e) in out {
        match merged.last_mut() {
            Some((g, m)) if *g == f => *m += e,
            _ => merged.push((f, e)),
        }
    }
    Ok(Factorization {
        unit,
        factors: merged,
    })
}

/// Squarefree decomposition of a monic polynomial: pairs (squarefree part,
/// multiplicity), parts pairwise coprime.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        let root = f.sqrt().expect("zero derivative means a square in char 2");
        for (g, m) in squarefree(&root) {
            out.push((g, 2 * m));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let root = c.sqrt().expect("remaining cofactor is a square");
        for (g, m) in squarefree(&root) {
            out.push((g, 2 * m));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, u32)> {
    let spec = f.spec();
    let k = spec.degree();
    let x = Poly::x(spec);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 0u32;
    while rest.deg() >= 2 * (d as i64 + 1) {
        d += 1;
        h = h.frobenius_mod(k, &rest);
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg() as u32;
        out.push((rest, d));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d` using the
/// absolute trace map `h -> h + h^2 + ... + h^(2^(kd-1))`.
pub fn equal_degree(f: &Poly, d: u32, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg() as u32;
    if n == d {
        return vec![f.clone()];
    }
    let spec = f.spec();
    let steps = spec.degree() * d;
    loop {
        let coeffs = (0..n).map(|_| rng.gen_range(0..spec.size()) as u32).collect();
        let h = Poly::from_raw(spec, coeffs);
        if h.deg() < 1 {
            continue;
        }
        let mut t = h.rem(f);
        let mut acc = t.clone();
        for _ in 1..steps {
            t = t.square().rem(f);
            acc = &acc + &t;
        }
        let g = f.gcd(&acc);
        if g.deg() > 0 && g.deg() < f.deg() {
            let other = f.div_exact(&g);
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

/// Distinct roots of `f` in its coefficient field, sorted by bits.
pub fn roots(f: &Poly) -> Vec<u32> {
    if f.deg() < 1 {
        return vec![];
    }
    let spec = f.spec();
    let x = Poly::x(spec);
    let f = f.monic();
    let split = f.gcd(&(&x.frobenius_mod(spec.degree(), &f) - &x));
    if split.deg() < 1 {
        return vec![];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut r: Vec<u32> = equal_degree(&split, 1, &mut rng)
        .into_iter()
        .map(|lin| lin.coeff_raw(0))
        .collect();
    r.sort_unstable();
    r
}

/// Root of `small`'s modulus inside `big` with the smallest bit pattern.
pub(crate) fn smallest_root_of_modulus(small: &FieldSpec, big: &FieldSpec) -> u32 {
    let coeffs = (0..=small.degree())
        .map(|i| small.modulus() >> i & 1)
        .collect();
    let m = Poly::from_raw(*big, coeffs);
    *roots(&m)
        .first()
        .expect("modulus splits in an extension of its degree")
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n as u32,
    };
    let spec = f.spec();
    let f = f.monic();
    let x = Poly::x(spec);
    let k = spec.degree();
    if !(&x.frobenius_mod(k * n, &f) - &x).is_zero() {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let h = x.frobenius_mod(k * (n / r), &f);
        f.gcd(&(&h - &x)).is_one()
    })
}

/// Monic irreducibles of degree `d`, in the canonical polynomial order.
pub fn monic_irreducibles(spec: FieldSpec, d: u32) -> impl Iterator<Item = Poly> {
    let q = spec.size();
    let count = q.checked_pow(d).expect("enumeration range");
    (0..count).filter_map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d as usize + 1);
        for _ in 0..d {
            coeffs.push((idx % q) as u32);
            idx /= q;
        }
        coeffs.push(1);
        let p = Poly::from_raw(spec, coeffs);
        is_irreducible(&p).then_some(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(bits: &[u32]) -> Poly {
        Poly::from_raw(FieldSpec::gf2(), bits.to_vec())
    }

    #[test]
    fn named_factorizations() {
        let f = factor(&p2(&[0, 1, 1])).unwrap();
        assert_eq!(f.factors, vec![(p2(&[0, 1]), 1), (p2(&[1, 1]), 1)]);
        let f = factor(&p2(&[1, 1, 1])).unwrap();
        assert_eq!(f.factors, vec![(p2(&[1, 1, 1]), 1)]);
        let f = factor(&p2(&[0, 1, 0, 0, 1])).unwrap();
        assert_eq!(
            f.factors,
            vec![(p2(&[0, 1]), 1), (p2(&[1, 1]), 1), (p2(&[1, 1, 1]), 1)]
        );
        assert_eq!(factor(&Poly::zero(FieldSpec::gf2())), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn roundtrip_exhaustive_gf2_deg8() {
        let spec = FieldSpec::gf2();
        for bits in 1u32..(1 << 9) {
            let coeffs: Vec<u32> = (0..9).map(|i| bits >> i & 1).collect();
            let p = Poly::from_raw(spec, coeffs);
            let f = factor(&p).unwrap();
            assert_eq!(f.expand(spec), p, "{p}");
            for (g, _) in &f.factors {
                assert!(g.is_monic() && is_irreducible(g), "{g}");
            }
        }
    }

    #[test]
    fn multiplicities_over_gf4() {
        let f4 = FieldSpec::gf4();
        let xa = Poly::linear(f4, 0b10);
        let q = Poly::from_raw(f4, vec![0b10, 1, 1]); // x^2+x+a, irreducible over GF(4)
        assert!(is_irreducible(&q));
        let p = &(&xa.pow(4) * &q.pow(3)).scale(0b11) * &Poly::x(f4);
        let f = factor(&p).unwrap();
        assert_eq!(f.unit, 0b11);
        assert_eq!(f.factors, vec![(Poly::x(f4), 1), (xa, 4), (q, 3)]);
    }

    #[test]
    fn irreducible_counts() {
        // Necklace counts: 2 of degree 1 over GF(2), 1 of degree 2, 2 of degree 3;
        // over GF(4): 4, 6, 20.
        let f2 = FieldSpec::gf2();
        let f4 = FieldSpec::gf4();
        let c = |s, d| monic_irreducibles(s, d).count();
        assert_eq!((c(f2, 1), c(f2, 2), c(f2, 3), c(f2, 4)), (2, 1, 2, 3));
        assert_eq!((c(f4, 1), c(f4, 2), c(f4, 3)), (4, 6, 20));
    }

    #[test]
    fn roots_in_extension() {
        let f16 = FieldSpec::canonical(4).unwrap();
        let r = smallest_root_of_modulus(&FieldSpec::gf4(), &f16);
        assert_eq!(f16.mul_raw(r, r) ^ r ^ 1, 0);
    }
}
