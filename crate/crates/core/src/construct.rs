//! Explicit witnesses for every realizable `(g, sigma, type)` cell.
//!
//! Each scheme produces a pair `(f1, f2)`; the cover is built from it and
//! checked against the target before it is returned. Schemes are tried over
//! GF(2) first (with `a = 1`), then GF(4), then GF(16).
//!
//! Higher 2-ranks come from the `+3` step: move every pole off infinity and
//! add `x`, `a*x` to the two generators, which raises each quotient genus and
//! 2-rank by one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor;
use crate::field::FieldSpec;
use crate::klein4::{KleinFourCover, Partition};
use crate::poly::Poly;
use crate::ratfun::{Place, RatFun};
use crate::realize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lemma {
    S0,
    S1,
    S2,
    S3a,
    S3b,
    S4a,
    S4b,
    S4c,
    S4d,
    S5gen,
    S5bal,
    #[serde(rename = "UNB_EVEN")]
    UnbEven,
    #[serde(rename = "UNB_ODD")]
    UnbOdd,
    #[serde(rename = "HALF_MINUS")]
    HalfMinus,
    #[serde(rename = "INDUCT")]
    Induct,
}

impl Lemma {
    pub fn label(&self) -> &'static str {
        match self {
            Lemma::S0 => "S0",
            Lemma::S1 => "S1",
            Lemma::S2 => "S2",
            Lemma::S3a => "S3a",
            Lemma::S3b => "S3b",
            Lemma::S4a => "S4a",
            Lemma::S4b => "S4b",
            Lemma::S4c => "S4c",
            Lemma::S4d => "S4d",
            Lemma::S5gen => "S5gen",
            Lemma::S5bal => "S5bal",
            Lemma::UnbEven => "UNB_EVEN",
            Lemma::UnbOdd => "UNB_ODD",
            Lemma::HalfMinus => "HALF_MINUS",
            Lemma::Induct => "INDUCT",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How a witness was derived. `base` is set for the `+3` step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub lemma: Lemma,
    pub params: BTreeMap<String, u32>,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub base: Option<Box<Recipe>>,
}

impl Recipe {
    /// Number of `+3` steps above the direct scheme.
    pub fn depth(&self) -> usize {
        self.base.as_ref().map_or(0, |b| 1 + b.depth())
    }

    /// The direct scheme at the bottom of the derivation.
    pub fn root(&self) -> &Recipe {
        self.base.as_ref().map_or(self, |b| b.root())
    }

    /// Every recipe in the chain, outermost first.
    pub fn chain(&self) -> Vec<&Recipe> {
        let mut out = vec![self];
        let mut cur = self;
        while let Some(b) = &cur.base {
            out.push(b);
            cur = b;
        }
        out
    }
}

/// A scheme's output before a field has been chosen. The closure gets the
/// field, the element used for `a`, and finite places it should leave alone.
struct Scheme {
    lemma: Lemma,
    params: Vec<(&'static str, u32)>,
    note: Option<String>,
    pair: Box<dyn Fn(FieldSpec, u32, &BTreeSet<Place>) -> Result<(RatFun, RatFun)>>,
}

impl Scheme {
    fn new(
        lemma: Lemma,
        params: &[(&'static str, u32)],
        pair: impl Fn(FieldSpec, u32, &BTreeSet<Place>) -> Result<(RatFun, RatFun)> + 'static,
    ) -> Scheme {
        Scheme {
            lemma,
            params: params.to_vec(),
            note: None,
            pair: Box::new(pair),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Scheme {
        self.note = Some(note.into());
        self
    }
}

fn fields() -> [FieldSpec; 3] {
    [FieldSpec::gf2(), FieldSpec::gf4(), FieldSpec::canonical(4).unwrap()]
}

/// The element playing the role of `a`; over GF(2) it collapses to 1.
fn alpha(spec: FieldSpec) -> u32 {
    spec.generator().bits()
}

fn hits(c: &KleinFourCover, g: u32, sigma: u32, p: &Partition) -> bool {
    let inv = c.invariants();
    inv.genus == g && inv.two_rank == sigma && c.cover_type() == *p
}

/// Rational places over GF(4) (or the cover's field, if larger), infinity
/// included, that are not poles of any quotient.
fn free_points(c: &KleinFourCover) -> usize {
    let Ok(c) = lift_to_gf4(c) else {
        return 0;
    };
    let spec = c.spec();
    let poles = poles_of(&c.functions());
    let finite = (0..spec.size() as u32)
        .filter(|&b| !poles.contains(&Place::Finite(Poly::linear(spec, b))))
        .count();
    finite + usize::from(!poles.contains(&Place::Infinity))
}

/// The last `n` rational places of `spec`, which schemes keep free when the
/// witness feeds `n` further `+3` steps.
fn reserved(spec: FieldSpec, n: u32) -> BTreeSet<Place> {
    let size = spec.size() as u32;
    (size.saturating_sub(n)..size)
        .map(|r| Place::Finite(Poly::linear(spec, r)))
        .collect()
}

/// Each `+3` step turns one free rational point into a pole, so a base for
/// `spare` steps should leave that many free; failing that, any witness is
/// accepted and the later normalization extends the field.
fn realize_scheme(s: Scheme, g: u32, sigma: u32, p: &Partition, spare: u32) -> Result<(KleinFourCover, Recipe)> {
    let attempts = fields()
        .into_iter()
        .map(|f| (f, spare))
        .chain(fields().into_iter().map(|f| (f, 0)));
    for (spec, keep) in attempts {
        let Ok((f1, f2)) = (s.pair)(spec, alpha(spec), &reserved(spec, keep)) else {
            continue;
        };
        let Ok(c) = KleinFourCover::new(&f1, &f2) else {
            continue;
        };
        if hits(&c, g, sigma, p) && free_points(&c) >= keep as usize {
            let recipe = Recipe {
                lemma: s.lemma,
                params: s.params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
                field: spec.name(),
                note: s.note.clone(),
                base: None,
            };
            return Ok((c, recipe));
        }
    }
    Err(Error::InternalMismatch(format!(
        "{} gives no witness for g={g}, sigma={sigma}, type {p}",
        s.lemma
    )))
}

// building blocks

fn mono(spec: FieldSpec, c: u32, n: u32) -> RatFun {
    RatFun::monomial(spec, c, n as usize)
}

/// `c / (x + r)^n`
fn pole_at(spec: FieldSpec, c: u32, r: u32, n: u32) -> RatFun {
    RatFun::pole_term(c, &Poly::linear(spec, r), n)
}

fn sum(terms: impl IntoIterator<Item = RatFun>) -> RatFun {
    terms.into_iter().reduce(|a, b| &a + &b).expect("at least one term")
}

fn free_rationals(spec: FieldSpec, avoid: &BTreeSet<Place>) -> Vec<Poly> {
    (0..spec.size() as u32)
        .map(|r| Poly::linear(spec, r))
        .filter(|q| !avoid.contains(&Place::Finite(q.clone())))
        .collect()
}

/// Distinct finite places, none in `avoid`, of total degree `total`:
/// rationals first, then one irreducible of the missing degree.
fn simple_places(spec: FieldSpec, total: u32, avoid: &BTreeSet<Place>) -> Result<Vec<Poly>> {
    let free = free_rationals(spec, avoid);
    let r = free.len() as u32;
    let (take, extra) = if total <= r {
        (total, None)
    } else if total - r >= 2 {
        (r, Some(total - r))
    } else if r >= 1 {
        (r - 1, Some(2))
    } else {
        return Err(Error::OutOfPlaces(spec.degree()));
    };
    let mut out = free[..take as usize].to_vec();
    if let Some(d) = extra {
        let q = factor::monic_irreducibles(spec, d)
            .find(|q| !avoid.contains(&Place::Finite(q.clone())))
            .ok_or(Error::OutOfPlaces(spec.degree()))?;
        out.push(q);
    }
    Ok(out)
}

/// A reduced `f` whose curve `y^2 + y = f` has genus `h` and 2-rank `s`:
/// one degree-one place with pole order `2(h - s) + 1` (infinity when
/// `at_infinity`) plus simple poles on places of total degree `s`, all
/// outside `avoid`. Fails with `OutOfPlaces` when the field has too few
/// rational places.
pub fn make_hyperelliptic(
    spec: FieldSpec,
    h: u32,
    s: u32,
    avoid: &BTreeSet<Place>,
    at_infinity: bool,
) -> Result<RatFun> {
    if s > h {
        return Err(Error::Precondition(format!("2-rank {s} exceeds genus {h}")));
    }
    let mut avoid = avoid.clone();
    let big = 2 * (h - s) + 1;
    let mut f = RatFun::zero(spec);
    let mut simple = s;
    if at_infinity {
        if avoid.contains(&Place::Infinity) {
            return Err(Error::Precondition("infinity is excluded".into()));
        }
        f = mono(spec, 1, big);
    } else {
        avoid.insert(Place::Infinity);
        if h == s {
            simple = s + 1;
        } else {
            let q0 = free_rationals(spec, &avoid)
                .into_iter()
                .next()
                .ok_or(Error::OutOfPlaces(spec.degree()))?;
            f = RatFun::pole_term(1, &q0, big);
            avoid.insert(Place::Finite(q0));
        }
    }
    for q in simple_places(spec, simple, &avoid)? {
        f = &f + &RatFun::pole_term(1, &q, 1);
    }
    Ok(f)
}

/// A proper fraction with `k` geometric poles, all simple except one, and
/// pole weight `w` (`sum deg (n + 1) / 2`); zero when `k = w = 0`.
fn pole_pack(spec: FieldSpec, k: u32, w: u32, avoid: &BTreeSet<Place>) -> Result<RatFun> {
    match (k, w) {
        (0, 0) => Ok(RatFun::zero(spec)),
        (0, _) => Err(Error::Precondition("positive weight needs a pole".into())),
        _ => make_hyperelliptic(spec, w - 1, k - 1, avoid, false),
    }
}

fn poles_of(fs: &[&RatFun]) -> BTreeSet<Place> {
    fs.iter()
        .flat_map(|f| f.pole_divisor().places().cloned().collect::<Vec<_>>())
        .collect()
}

// direct schemes

fn scheme_sigma0(p: &Partition) -> Scheme {
    let n0 = 2 * p.g1 + 1;
    if p.g3 == p.g1 {
        Scheme::new(Lemma::S0, &[("n0", n0)], move |s, a, _| {
            Ok((mono(s, 1, n0), mono(s, a, n0)))
        })
    } else {
        let c = 2 * p.g3 + 1;
        Scheme::new(Lemma::S0, &[("n0", n0), ("c", c)], move |s, _, _| {
            Ok((mono(s, 1, n0), &mono(s, 1, n0) + &mono(s, 1, c)))
        })
    }
}

fn scheme_sigma1(p: &Partition) -> Scheme {
    let a = 2 * p.g2 + 1;
    let b = 2 * p.g3 + 1;
    Scheme::new(Lemma::S1, &[("a", a), ("b", b)], move |s, _, _| {
        Ok((mono(s, 1, a), pole_at(s, 1, 0, b)))
    })
}

fn scheme_sigma2(p: &Partition) -> Scheme {
    let a = 2 * p.g3 + 1;
    let b = 2 * (p.g1 - p.g3) - 1;
    let c = 2 * (p.g2 + p.g3 - p.g1) + 1;
    Scheme::new(Lemma::S2, &[("a", a), ("b", b), ("c", c)], move |s, al, _| {
        Ok((
            &mono(s, 1, a) + &pole_at(s, 1, 0, b),
            &mono(s, al, c) + &pole_at(s, 1, 0, b),
        ))
    })
}

fn scheme_sigma3(g: u32, p: &Partition, spare: u32) -> Scheme {
    if g % 2 == 1 && p.g1 == (g + 1) / 2 && spare > 0 && p.g2 % 2 == 1 {
        // same shape with both poles of f1 on one degree-2 place, leaving
        // rational points for later +3 steps
        let a = p.g2;
        let b = 2 * p.g3 + 1;
        return Scheme::new(Lemma::S3a, &[("a", a), ("b", b)], move |s, _, keep| {
            let q = factor::monic_irreducibles(s, 2)
                .find(|q| !keep.contains(&Place::Finite(q.clone())))
                .ok_or(Error::OutOfPlaces(s.degree()))?;
            Ok((RatFun::pole_term(1, &q, a), pole_at(s, 1, 0, b)))
        })
        .note("f1 = 1/q^a, q irreducible of degree 2");
    }
    if g % 2 == 1 && p.g1 == (g + 1) / 2 {
        // quotient genera g2, g3 and (g+1)/2 with 2-ranks 1, 0, 2
        let a = 2 * p.g2 - 1;
        let b = 2 * p.g3 + 1;
        return Scheme::new(Lemma::S3a, &[("a", a), ("b", b)], move |s, _, _| {
            Ok((&mono(s, 1, a) + &pole_at(s, 1, 1, 1), pole_at(s, 1, 0, b)))
        });
    }
    // with the same x^a in both generators the third quotient loses its
    // pole at infinity; here each quotient keeps one pole at 0 and one at
    // infinity, giving genera g2, g3, g1
    let a = 2 * p.g2 - 1;
    let b = 1;
    let c = 2 * (p.g2 + p.g3 - p.g1) - 1;
    let d = 2 * (p.g1 - p.g2) + 1;
    Scheme::new(Lemma::S3b, &[("a", a), ("b", b), ("c", c), ("d", d)], move |s, al, _| {
        Ok((
            &mono(s, 1, a) + &pole_at(s, 1, 0, b),
            &mono(s, al, c) + &pole_at(s, al, 0, d),
        ))
    })
    .note("repaired: x^a + 1/x^b, a*x^c + a/x^d")
}

fn scheme_sigma4(g: u32, p: &Partition) -> Scheme {
    if p.g1 > p.g2 {
        let a = 2 * p.g2 - 1;
        let b = 2 * (p.g1 - p.g2) - 1;
        let c = 2 * (p.g2 + p.g3 - p.g1) + 1;
        // f3 = x^c + 1/x^b; when a = c the x^a terms of f1 and f3 cancel
        let s = Scheme::new(Lemma::S4a, &[("a", a), ("b", b), ("c", c)], move |s, al, _| {
            let k = if a == c { al } else { 1 };
            let f1 = sum([mono(s, 1, a), pole_at(s, 1, 0, b), pole_at(s, 1, 1, 1)]);
            let f3 = &mono(s, k, c) + &pole_at(s, 1, 0, b);
            Ok((f1, f3))
        });
        return if a == c { s.note("a = c: f3 uses a*x^c") } else { s };
    }
    if p.g3 >= 2 {
        let a = 2 * p.g1 - 1;
        let b = 2 * p.g3 - 3;
        return Scheme::new(Lemma::S4b, &[("a", a), ("b", b)], move |s, _, _| {
            Ok((
                &mono(s, 1, a) + &pole_at(s, 1, 0, 1),
                sum([mono(s, 1, b), pole_at(s, 1, 0, 1), pole_at(s, 1, 1, 1)]),
            ))
        });
    }
    if p.g3 == 0 {
        let a = g - 3;
        return Scheme::new(Lemma::S4c, &[("a", a)], move |s, al, _| {
            Ok((
                sum([mono(s, 1, a), pole_at(s, 1, 0, 1), pole_at(s, 1, 1, 1)]),
                mono(s, al, 1),
            ))
        });
    }
    let a = g - 4;
    Scheme::new(Lemma::S4d, &[("a", a)], move |s, al, _| {
        Ok((
            sum([mono(s, 1, a), pole_at(s, 1, 0, 1), pole_at(s, 1, 1, 1)]),
            mono(s, al, 3),
        ))
    })
    .note("corrected: f2 = a*x^3")
}

fn scheme_sigma5_balanced(a: u32) -> Scheme {
    if a % 2 == 1 {
        return Scheme::new(Lemma::S5bal, &[("a", a)], move |s, al, _| {
            if al == 1 {
                return Err(Error::Precondition("needs a third rational point".into()));
            }
            Ok((
                &mono(s, 1, a) + &pole_at(s, 1, 0, a),
                sum([mono(s, 1, a), pole_at(s, 1, 1, a - 2), pole_at(s, 1, al, 1)]),
            ))
        });
    }
    // even a: quotients x^3 + 1/x^(2a-3), x^3 + x + 1/x^(2a-5) + 1/(x+1)
    // and their sum, of genus a and 2-ranks 1, 2, 2
    let b = 2 * a - 3;
    let d = 2 * a - 5;
    Scheme::new(Lemma::S5bal, &[("a", 3), ("b", b), ("d", d)], move |s, _, _| {
        Ok((
            &mono(s, 1, 3) + &pole_at(s, 1, 0, b),
            sum([mono(s, 1, 3), mono(s, 1, 1), pole_at(s, 1, 0, d), pole_at(s, 1, 1, 1)]),
        ))
    })
    .note("even a: x^3 + 1/x^b, x^3 + x + 1/x^d + 1/(x+1)")
}

fn scheme_unbalanced_even(g: u32, sigma: u32) -> Scheme {
    let h = g / 2;
    let k = sigma / 2;
    Scheme::new(Lemma::UnbEven, &[("k1", k)], move |s, al, keep| {
        let f1 = make_hyperelliptic(s, h, k, keep, true)?;
        let c = if h == k { al } else { 1 };
        Ok((f1, mono(s, c, 1)))
    })
}

/// `p = {(g+1)/2, ga, gb}` with `ga >= gb`; the split maximizes `k1`.
fn scheme_unbalanced_odd(g: u32, sigma: u32, p: &Partition) -> Result<Scheme> {
    let rest = others(p, (g + 1) / 2);
    let (ga, gb) = (rest[0], rest[1]);
    let k = (sigma - 1) / 2;
    let ka = ga.min(k);
    let kb = k - ka;
    if kb > gb {
        return Err(Error::Precondition(format!("2-rank {sigma} too large for type {p}")));
    }
    Ok(Scheme::new(Lemma::UnbOdd, &[("k1", ka), ("k2", kb)], move |s, _, keep| {
        // f2 cannot use infinity, so it picks its places first; if that
        // starves f1, f1 goes first with x held back for f2
        let after = |first: &RatFun, extra: Option<Place>| {
            let mut avoid = keep.clone();
            avoid.extend(poles_of(&[first]));
            avoid.extend(extra);
            avoid
        };
        let f2_first = || -> Result<(RatFun, RatFun)> {
            let f2 = make_hyperelliptic(s, gb, kb, keep, false)?;
            let f1 = make_hyperelliptic(s, ga, ka, &after(&f2, None), true)?;
            Ok((f1, f2))
        };
        let f1_first = || -> Result<(RatFun, RatFun)> {
            let x = Place::Finite(Poly::x(s));
            let f1 = make_hyperelliptic(s, ga, ka, &after(&RatFun::zero(s), Some(x)), true)?;
            let f2 = make_hyperelliptic(s, gb, kb, &after(&f1, None), false)?;
            Ok((f1, f2))
        };
        f2_first().or_else(|_| f1_first())
    }))
}

/// `p = {(g-1)/2, ga, gb}`, `sigma = 2k`: `x^3 + h1`, `a*x^3 + h2` with `hi`
/// carrying `ki` poles of weight `gi - 1`. `k1 = 0` uses `x^(2 ga + 1)`
/// instead, which keeps the third quotient's genus.
fn scheme_half_minus(g: u32, sigma: u32, p: &Partition) -> Result<Scheme> {
    let rest = others(p, (g - 1) / 2);
    let (ga, gb) = (rest[0], rest[1]);
    let k = sigma / 2;
    let refuse = || Error::Precondition(format!("2-rank {sigma} not reachable for type {p}"));
    if gb == 0 || sigma % 2 == 1 || k + 2 > ga + gb {
        return Err(refuse());
    }
    let kb_min = u32::from(gb >= 2);
    let ka = (ga - 1).min(k.checked_sub(kb_min).ok_or_else(refuse)?);
    let kb = k - ka;
    if kb > gb - 1 || (kb == 0 && gb >= 2) {
        return Err(refuse());
    }
    let s = Scheme::new(Lemma::HalfMinus, &[("k1", ka), ("k2", kb)], move |s, al, keep| {
        let h1 = pole_pack(s, ka, ga - 1, keep)?;
        let mut avoid = keep.clone();
        avoid.extend(poles_of(&[&h1]));
        let h2 = pole_pack(s, kb, gb - 1, &avoid)?;
        let lead = if ka == 0 { 2 * ga + 1 } else { 3 };
        Ok((&mono(s, 1, lead) + &h1, &mono(s, al, 3) + &h2))
    });
    Ok(if ka == 0 { s.note("k1 = 0: f1 = x^(2 g1 + 1)") } else { s })
}

/// The two entries of `p` left after removing one copy of `v`, descending.
fn others(p: &Partition, v: u32) -> [u32; 2] {
    let e = p.entries();
    let i = e.iter().position(|&x| x == v).expect("entry present");
    let mut r: Vec<u32> = e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
    r.sort_unstable_by(|a, b| b.cmp(a));
    [r[0], r[1]]
}

fn shrink(p: &Partition) -> Partition {
    Partition::from_genera(p.entries().map(|v| v - 1))
}

enum Plan {
    Direct(Scheme),
    Induct(Partition),
}

fn plan(g: u32, sigma: u32, p: &Partition, spare: u32) -> Result<Plan> {
    let half_up = (g + 1) / 2;
    Ok(match sigma {
        0 => Plan::Direct(scheme_sigma0(p)),
        1 => Plan::Direct(scheme_sigma1(p)),
        2 => Plan::Direct(scheme_sigma2(p)),
        3 => Plan::Direct(scheme_sigma3(g, p, spare)),
        4 => Plan::Direct(scheme_sigma4(g, p)),
        5 if g % 2 == 1 && p.contains(half_up) => {
            Plan::Direct(scheme_unbalanced_odd(g, sigma, p)?)
        }
        5 if realize::is_totally_balanced(p) && p.g1 >= 3 => {
            Plan::Direct(scheme_sigma5_balanced(p.g1))
        }
        5 => Plan::Induct(shrink(p)),
        _ if p.contains(0) && g % 2 == 0 => Plan::Direct(scheme_unbalanced_even(g, sigma)),
        _ if g % 2 == 1 && p.contains(half_up) => {
            Plan::Direct(scheme_unbalanced_odd(g, sigma, p)?)
        }
        _ if g % 2 == 1 && p.contains((g - 1) / 2) && sigma % 2 == 0 => {
            Plan::Direct(scheme_half_minus(g, sigma, p)?)
        }
        _ => Plan::Induct(shrink(p)),
    })
}

/// A witness for `(g, sigma, p)` together with its derivation.
pub fn construct(g: i64, sigma: i64, p: &Partition) -> Result<(KleinFourCover, Recipe)> {
    let v = realize::realizable(g, sigma, p)?;
    if !v.exists {
        return Err(Error::Impossible(v));
    }
    build(g as u32, sigma as u32, p, 0)
}

fn build(g: u32, sigma: u32, p: &Partition, spare: u32) -> Result<(KleinFourCover, Recipe)> {
    match plan(g, sigma, p, spare)? {
        Plan::Direct(s) => realize_scheme(s, g, sigma, p, spare),
        Plan::Induct(base_type) => {
            let (base, base_recipe) = build(g - 3, sigma - 3, &base_type, spare + 1)?;
            let lifted = lift_to_gf4(&base)?;
            let (normal, beta) = normalize_infinity_with(&lifted)?;
            let c = induct_step(&normal)?;
            if !hits(&c, g, sigma, p) {
                return Err(Error::InternalMismatch(format!(
                    "+3 step from {base_type} gives {} of type {}",
                    c.invariants(),
                    c.cover_type()
                )));
            }
            let lemma = if sigma == 5 { Lemma::S5gen } else { Lemma::Induct };
            let recipe = Recipe {
                lemma,
                params: BTreeMap::new(),
                field: c.spec().name(),
                note: beta.map(|b| format!("x -> {b} + 1/x")),
                base: Some(Box::new(base_recipe)),
            };
            Ok((c, recipe))
        }
    }
}

fn embed_cover(c: &KleinFourCover, target: FieldSpec) -> Result<KleinFourCover> {
    if c.spec() == target {
        return Ok(c.clone());
    }
    let emb = c.spec().embedding_into(&target)?;
    KleinFourCover::new(&c.f1().embed(&emb), &c.f2().embed(&emb))
}

fn lift_to_gf4(c: &KleinFourCover) -> Result<KleinFourCover> {
    if c.spec().degree() % 2 == 0 {
        Ok(c.clone())
    } else {
        embed_cover(c, c.spec().extension(2)?)
    }
}

/// Moves every pole off infinity by `x -> b + 1/x`, `b` the smallest
/// rational point that is not a pole. The field is extended when every
/// rational point is a pole.
pub fn normalize_infinity(c: &KleinFourCover) -> Result<KleinFourCover> {
    normalize_infinity_with(c).map(|(c, _)| c)
}

/// Also returns `b` as text, or `None` when nothing had to move.
fn normalize_infinity_with(c: &KleinFourCover) -> Result<(KleinFourCover, Option<String>)> {
    if !c.functions().iter().any(|f| f.has_pole_at(&Place::Infinity)) {
        return Ok((c.clone(), None));
    }
    let mut cur = c.clone();
    let mut k = 2;
    loop {
        let spec = cur.spec();
        let poles = poles_of(&cur.functions());
        let beta = (0..spec.size() as u32)
            .find(|&b| !poles.contains(&Place::Finite(Poly::linear(spec, b))));
        if let Some(b) = beta {
            let m = [[spec.elem(b), spec.one()], [spec.one(), spec.zero()]];
            let f1 = cur.f1().mobius(m)?;
            let f2 = cur.f2().mobius(m)?;
            return Ok((KleinFourCover::new(&f1, &f2)?, Some(spec.format_raw(b))));
        }
        cur = embed_cover(c, c.spec().extension(k)?)?;
        k += 1;
    }
}

/// Adds `x` and `a*x` to the generators: type `{g1+1, g2+1, g3+1}` and
/// 2-rank `sigma + 3`. No quotient may have a pole at infinity.
pub fn induct_step(c: &KleinFourCover) -> Result<KleinFourCover> {
    if c.functions().iter().any(|f| f.has_pole_at(&Place::Infinity)) {
        return Err(Error::Precondition("a quotient has a pole at infinity".into()));
    }
    let spec = c.spec();
    if spec.degree() % 2 == 1 {
        return Err(Error::Precondition(format!("{spec} does not contain GF(4)")));
    }
    let a = alpha(spec);
    KleinFourCover::new(&(c.f1() + &mono(spec, 1, 1)), &(c.f2() + &mono(spec, a, 1)))
}

pub fn construct_sigma0(p: &Partition) -> Result<KleinFourCover> {
    if p.g1 != p.g2 {
        return Err(Error::Impossible(realize::realizable(p.genus() as i64, 0, p)?));
    }
    realize_scheme(scheme_sigma0(p), p.genus(), 0, p, 0).map(|r| r.0)
}

pub fn construct_unbalanced_even(g: u32, sigma: u32) -> Result<KleinFourCover> {
    if g % 2 == 1 || sigma % 2 == 1 || sigma > g {
        return Err(Error::Precondition(format!("needs even g and sigma <= g, got ({g}, {sigma})")));
    }
    let p = Partition::from_genera([g / 2, g / 2, 0]);
    realize_scheme(scheme_unbalanced_even(g, sigma), g, sigma, &p, 0).map(|r| r.0)
}

pub fn construct_unbalanced_odd(g: u32, sigma: u32, p: &Partition) -> Result<KleinFourCover> {
    if g % 2 == 0 || sigma % 2 == 0 || p.genus() != g || !p.contains((g + 1) / 2) {
        return Err(Error::Precondition(format!("needs odd g, odd sigma, (g+1)/2 in {p}")));
    }
    realize_scheme(scheme_unbalanced_odd(g, sigma, p)?, g, sigma, p, 0).map(|r| r.0)
}

pub fn construct_half_minus(g: u32, sigma: u32, p: &Partition) -> Result<KleinFourCover> {
    if g % 2 == 0 || p.genus() != g || !p.contains((g - 1) / 2) || p.contains((g + 1) / 2) {
        return Err(Error::Precondition(format!("needs odd g with (g-1)/2 in {p}")));
    }
    realize_scheme(scheme_half_minus(g, sigma, p)?, g, sigma, p, 0).map(|r| r.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_ratfun;

    fn part(g: i64, raw: [i64; 3]) -> Partition {
        Partition::new(g, raw).unwrap()
    }

    fn rf(spec: FieldSpec, s: &str) -> RatFun {
        parse_ratfun(spec, s).unwrap()
    }

    #[test]
    fn named_witnesses() {
        let f4 = FieldSpec::gf4();
        let (c, r) = construct(5, 2, &part(5, [2, 2, 1])).unwrap();
        assert_eq!(r.lemma, Lemma::S2);
        assert_eq!(c.f1(), &rf(f4, "x^3 + 1/x"));
        assert_eq!(c.f2(), &rf(f4, "a*x^3 + 1/x"));

        let (c, r) = construct(9, 5, &part(9, [3, 3, 3])).unwrap();
        assert_eq!(r.lemma, Lemma::S5bal);
        assert_eq!(c.f1(), &rf(f4, "x^3 + 1/x^3"));
        assert_eq!(c.f2(), &rf(f4, "x^3 + 1/(x+1) + 1/(x+a)"));

        let f2 = FieldSpec::gf2();
        let (c, _) = construct(1, 1, &part(1, [1, 0, 0])).unwrap();
        assert_eq!((c.f1(), c.f2()), (&rf(f2, "x"), &rf(f2, "1/x")));
        let (c, _) = construct(7, 0, &part(7, [3, 3, 1])).unwrap();
        assert_eq!((c.f1(), c.f2()), (&rf(f2, "x^7"), &rf(f2, "x^7 + x^3")));
        let c = construct_sigma0(&part(6, [2, 2, 2])).unwrap();
        assert_eq!((c.f1(), c.f2()), (&rf(f4, "x^5"), &rf(f4, "a*x^5")));
    }

    #[test]
    fn impossible_cells_are_refused() {
        let e = construct(9, 2, &part(9, [3, 3, 3])).unwrap_err();
        assert!(matches!(e, Error::Impossible(v) if v.clause == realize::Clause::Iii));
        assert!(construct_sigma0(&part(5, [3, 1, 1])).is_err());
    }

    #[test]
    fn hyperelliptic_pieces() {
        let f2 = FieldSpec::gf2();
        let none = BTreeSet::new();
        assert_eq!(make_hyperelliptic(f2, 2, 1, &none, true).unwrap(), rf(f2, "x^3 + 1/x"));
        assert_eq!(
            make_hyperelliptic(f2, 3, 3, &none, false).unwrap(),
            rf(f2, "1/x + 1/(x+1) + 1/(x^2+x+1)")
        );
        assert_eq!(make_hyperelliptic(f2, 2, 0, &none, true).unwrap(), rf(f2, "x^5"));
        let full: BTreeSet<Place> = [Place::Finite(Poly::x(f2)), Place::Finite(Poly::linear(f2, 1))]
            .into_iter()
            .collect();
        assert!(matches!(
            make_hyperelliptic(f2, 2, 0, &full, false),
            Err(Error::OutOfPlaces(1))
        ));
        assert_eq!(
            make_hyperelliptic(f2, 1, 1, &full, false).unwrap(),
            rf(f2, "1/(x^2+x+1)")
        );
        for h in 0..6 {
            for s in 0..=h {
                for at_inf in [true, false] {
                    let f = make_hyperelliptic(FieldSpec::gf4(), h, s, &none, at_inf).unwrap();
                    let inv = crate::ascurve::ASCurve::new(&f).unwrap().invariants();
                    assert_eq!((inv.genus, inv.two_rank), (h, s));
                    assert_eq!(f.has_pole_at(&Place::Infinity), at_inf);
                }
            }
        }
    }

    #[test]
    fn unbalanced_examples() {
        let f2 = FieldSpec::gf2();
        let c = construct_unbalanced_even(4, 2).unwrap();
        assert_eq!((c.f1(), c.f2()), (&rf(f2, "x^3 + 1/x"), &rf(f2, "x")));
        let c = construct_unbalanced_even(2, 0).unwrap();
        assert_eq!((c.f1(), c.f2()), (&rf(f2, "x^3"), &rf(f2, "x")));
        let c = construct_unbalanced_even(4, 4).unwrap();
        let f4 = FieldSpec::gf4();
        assert_eq!((c.f1(), c.f2()), (&rf(f4, "x + 1/x + 1/(x+1)"), &rf(f4, "a*x")));
        for (g, s, raw) in [(5, 3, [3, 1, 1]), (5, 5, [3, 1, 1]), (9, 7, [5, 2, 2])] {
            let p = part(g, raw);
            let c = construct_unbalanced_odd(g as u32, s, &p).unwrap();
            assert_eq!(c.invariants().two_rank, s);
            assert_eq!(c.cover_type(), p);
        }
    }

    #[test]
    fn half_minus_examples() {
        for (s, raw) in [(2, [3, 3, 1]), (4, [3, 3, 1]), (4, [3, 2, 2]), (6, [4, 3, 2])] {
            let g: i64 = raw.iter().sum();
            let p = part(g, raw);
            let c = construct_half_minus(g as u32, s, &p).unwrap();
            assert_eq!(c.invariants().two_rank, s);
            assert_eq!(c.cover_type(), p);
        }
        assert!(construct_half_minus(5, 0, &part(5, [2, 2, 1])).is_err());
        assert!(construct_half_minus(9, 8, &part(9, [4, 3, 2])).is_err());
    }

    #[test]
    fn induction_examples() {
        let f4 = FieldSpec::gf4();
        let base = KleinFourCover::new(&rf(f4, "1/x"), &rf(f4, "a/x")).unwrap();
        let up = induct_step(&base).unwrap();
        assert_eq!(up.cover_type().entries(), [1, 1, 1]);
        assert_eq!(up.invariants().two_rank, 3);
        let twice = induct_step(&normalize_infinity(&up).unwrap()).unwrap();
        assert_eq!((twice.invariants().genus, twice.invariants().two_rank), (6, 6));
        assert_eq!(twice.cover_type().entries(), [2, 2, 2]);

        let (w, _) = construct(5, 2, &part(5, [2, 2, 1])).unwrap();
        let up = induct_step(&normalize_infinity(&w).unwrap()).unwrap();
        assert_eq!((up.invariants().genus, up.invariants().two_rank), (8, 5));
        assert_eq!(up.cover_type().entries(), [3, 3, 2]);

        let poles_at_inf = KleinFourCover::new(&rf(f4, "x"), &rf(f4, "a*x")).unwrap();
        assert!(induct_step(&poles_at_inf).is_err());
        let n = normalize_infinity(&poles_at_inf).unwrap();
        assert_eq!(n.invariants(), poles_at_inf.invariants());
        assert!(n.functions().iter().all(|f| !f.has_pole_at(&Place::Infinity)));
        assert_eq!(normalize_infinity(&base).unwrap(), base);
    }

    #[test]
    fn every_cell_up_to_genus_15() {
        for g in 0..=15u32 {
            for p in Partition::all(g) {
                for s in 0..=g {
                    let v = realize::realizable(g as i64, s as i64, &p).unwrap();
                    let r = construct(g as i64, s as i64, &p);
                    match (v.exists, r) {
                        (true, Ok((c, _))) => assert!(hits(&c, g, s, &p)),
                        (true, Err(e)) => panic!("({g}, {s}, {p}): {e}"),
                        (false, r) => assert!(matches!(r, Err(Error::Impossible(_)))),
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_stay_small_and_params_are_odd() {
        let mut over_gf2 = 0;
        let mut total = 0;
        for g in 0..=12u32 {
            for p in Partition::all(g) {
                for s in 0..=g {
                    let Ok((c, r)) = construct(g as i64, s as i64, &p) else {
                        continue;
                    };
                    total += 1;
                    assert!(c.spec().degree() <= 2, "({g}, {s}, {p}) over {}", c.spec());
                    over_gf2 += usize::from(c.spec().degree() == 1);
                    assert!(r.depth() as u32 <= g / 3);
                    for step in r.chain() {
                        for key in ["a", "b", "c", "d", "n0"] {
                            if let Some(&v) = step.params.get(key) {
                                assert!(v % 2 == 1, "{} {key}={v} at ({g}, {s}, {p})", step.lemma);
                            }
                        }
                    }
                }
            }
        }
        assert!(over_gf2 > total / 4, "{over_gf2} of {total} over GF(2)");
    }

    #[test]
    fn recipes_round_trip_through_json() {
        let (_, r) = construct(12, 12, &part(12, [5, 4, 3])).unwrap();
        assert!(r.depth() >= 1);
        let text = serde_json::to_string(&r).unwrap();
        let back: Recipe = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
