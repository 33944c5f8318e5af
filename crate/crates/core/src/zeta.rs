//! Point counting and L-polynomials: an independent check on the
//! pole-count formulas.
//!
//! Counts are over `GF(q^n)` where `q = 2^m` is the size of the curve's
//! base field. The L-polynomial `L(T) = sum b_i T^i` satisfies
//! `N_n = q^n + 1 - sum alpha_i^n` with `alpha_i` its reciprocal roots, and
//! the 2-rank is the degree of `L mod 2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ascurve::{ASCurve, Invariants};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, MAX_DEGREE};
use crate::klein4::KleinFourCover;
use crate::poly::Poly;
use crate::ratfun::RatFun;

const PARALLEL_THRESHOLD: u64 = 1 << 12;

/// A rational function with coefficients pushed into an extension, ready
/// for evaluation at points of that extension.
struct Evaluator {
    ext: FieldSpec,
    num: Poly,
    den: Poly,
    at_infinity: Option<u32>,
}

impl Evaluator {
    fn new(f: &RatFun, ext: FieldSpec) -> Result<Self> {
        let emb = f.spec().embedding_into(&ext)?;
        Ok(Evaluator {
            ext,
            num: f.num().embed(&emb),
            den: f.den().embed(&emb),
            at_infinity: f.value_at_infinity_raw().map(|c| emb.map_raw(c)),
        })
    }

    /// Absolute trace of the value, or `None` at a pole.
    #[inline]
    fn trace_at(&self, x: u32) -> Option<u32> {
        let d = self.den.eval_raw(x);
        if d == 0 {
            return None;
        }
        let v = self.ext.mul_raw(self.num.eval_raw(x), self.ext.inv_raw(d).unwrap());
        Some(self.ext.trace_raw(v))
    }

    fn trace_at_infinity(&self) -> Option<u32> {
        self.at_infinity.map(|v| self.ext.trace_raw(v))
    }
}

fn extension_for(spec: FieldSpec, n: u32) -> Result<FieldSpec> {
    let total = spec.degree().saturating_mul(n);
    if n == 0 || total > MAX_DEGREE {
        return Err(Error::ExtensionTooLarge(total));
    }
    spec.extension(n)
}

fn sum_over_field<F>(ext: FieldSpec, per_point: F) -> Result<u64>
where
    F: Fn(u32) -> Result<u64> + Sync,
{
    let size = ext.size();
    if size >= PARALLEL_THRESHOLD {
        (0..size as u32).into_par_iter().map(&per_point).sum()
    } else {
        (0..size as u32).map(per_point).sum()
    }
}

/// Points of the smooth model of `y^2 + y = f` over `GF(q^n)`.
pub fn count_points(c: &ASCurve, n: u32) -> Result<u64> {
    let ext = extension_for(c.spec(), n)?;
    let ev = Evaluator::new(c.rhs(), ext)?;
    let contribution = |t: Option<u32>| match t {
        None => 1,
        Some(0) => 2,
        Some(_) => 0,
    };
    let finite = sum_over_field(ext, |x| Ok(contribution(ev.trace_at(x))))?;
    Ok(finite + contribution(ev.trace_at_infinity()))
}

/// Points of the smooth model of the cover itself over `GF(q^n)`.
///
/// Over a point where no quotient ramifies there are four or no points.
/// Where two ramify, the fibre is ramified over the remaining quotient,
/// which contributes two or zero. Where all three ramify, the fibre is one point.
pub fn count_points_cover(c: &KleinFourCover, n: u32) -> Result<u64> {
    let ext = extension_for(c.spec(), n)?;
    let evs = c
        .functions()
        .map(|f| Evaluator::new(f, ext))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let fibre = |t: [Option<u32>; 3]| -> Result<u64> {
        let poles = t.iter().filter(|v| v.is_none()).count();
        match poles {
            0 => Ok(if t[0] == Some(0) && t[1] == Some(0) { 4 } else { 0 }),
            2 => {
                let regular = t.iter().flatten().next().copied();
                Ok(if regular == Some(0) { 2 } else { 0 })
            }
            3 => Ok(1),
            _ => Err(Error::InternalMismatch(
                "a pole of exactly one of f1, f2, f1+f2".into(),
            )),
        }
    };
    let finite = sum_over_field(ext, |x| {
        fibre([evs[0].trace_at(x), evs[1].trace_at(x), evs[2].trace_at(x)])
    })?;
    let inf = fibre([
        evs[0].trace_at_infinity(),
        evs[1].trace_at_infinity(),
        evs[2].trace_at_infinity(),
    ])?;
    Ok(finite + inf)
}

pub fn count_series(c: &ASCurve, depth: u32) -> Result<Vec<u64>> {
    (1..=depth).map(|n| count_points(c, n)).collect()
}

/// `L(T) = sum b_i T^i` of degree `2g` over `GF(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPoly {
    pub q: u64,
    pub coeffs: Vec<i128>,
}

impl LPoly {
    pub fn genus(&self) -> u32 {
        (self.coeffs.len() as u32 - 1) / 2
    }

    pub fn eval(&self, t: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &b| acc * t + b)
    }

    /// Power sums `sum alpha_i^n`, n = 1..=count, by Newton's identities.
    pub fn power_sums(&self, count: usize) -> Vec<i128> {
        let b = |k: usize| self.coeffs.get(k).copied().unwrap_or(0);
        let mut p: Vec<i128> = Vec::with_capacity(count);
        for n in 1..=count {
            let mut s = -(n as i128) * b(n);
            for i in 1..n {
                s -= p[i - 1] * b(n - i);
            }
            p.push(s);
        }
        p
    }
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Recovers `L` from the first `g` counts and checks any further counts
/// against it. Failure means the counts do not come from a curve of genus `g`.
pub fn lpoly_from_counts(counts: &[u64], g: u32, q: u64) -> Result<LPoly> {
    let g = g as usize;
    if counts.len() < g {
        return Err(Error::Precondition(format!(
            "{} counts cannot determine a genus-{g} L-polynomial",
            counts.len()
        )));
    }
    let qi = q as i128;
    let mut qn = 1i128;
    let mut p = Vec::with_capacity(counts.len());
    for (i, &n) in counts.iter().enumerate() {
        qn *= qi;
        let a = qn + 1 - n as i128;
        if a * a > 4 * (g * g) as i128 * qn {
            return Err(Error::InconsistentCounts(format!(
                "N_{} = {n} violates the Weil bound for genus {g}",
                i + 1
            )));
        }
        p.push(a);
    }
    let mut b = vec![0i128; 2 * g + 1];
    b[0] = 1;
    for k in 1..=g {
        let s: i128 = (1..=k).map(|i| p[i - 1] * b[k - i]).sum();
        if s % k as i128 != 0 {
            return Err(Error::InconsistentCounts(format!(
                "coefficient b_{k} = {}/{k} is not integral",
                -s
            )));
        }
        b[k] = -s / k as i128;
    }
    for i in 0..g {
        b[2 * g - i] = qi.pow((g - i) as u32) * b[i];
    }
    for (i, &bi) in b.iter().enumerate() {
        let bound = binomial(2 * g as u64, i as u64);
        if bi * bi > bound * bound * qi.pow(i as u32) {
            return Err(Error::InconsistentCounts(format!(
                "|b_{i}| = {} exceeds the Weil coefficient bound",
                bi.abs()
            )));
        }
    }
    let l = LPoly { q, coeffs: b };
    let predicted = l.power_sums(p.len());
    if let Some(n) = (g..p.len()).find(|&n| predicted[n] != p[n]) {
        return Err(Error::InconsistentCounts(format!(
            "N_{} = {} but the recovered L-polynomial predicts {}",
            n + 1,
            counts[n],
            qi.pow(n as u32 + 1) + 1 - predicted[n]
        )));
    }
    if l.eval(1) <= 0 {
        return Err(Error::InconsistentCounts("L(1) is not positive".into()));
    }
    Ok(l)
}

/// Degree of `L mod 2`.
pub fn two_rank_from_lpoly(l: &LPoly) -> u32 {
    l.coeffs
        .iter()
        .rposition(|b| b.rem_euclid(2) == 1)
        .unwrap_or(0) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Confirmed,
    Mismatch,
    /// Not enough counts fit under the extension bound to decide.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSide {
    pub g: u32,
    pub sigma: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSide {
    pub g_consistent: bool,
    pub sigma: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub target: String,
    pub formula: FormulaSide,
    pub oracle: OracleSide,
    pub counts: Vec<u64>,
    pub lpoly: Option<Vec<i128>>,
    pub detail: Option<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub n: u32,
    pub cover_count: u64,
    pub quotient_sum: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub target: String,
    pub formula: FormulaSide,
    pub oracle: OracleSide,
    pub identity_checks: Vec<IdentityCheck>,
    pub quotients: Vec<CurveReport>,
    pub truncated: bool,
    pub status: Status,
}

fn max_depth(spec: FieldSpec) -> u32 {
    MAX_DEGREE / spec.degree()
}

/// Checks a claimed (genus, 2-rank) for `c` against counts over
/// `GF(q^n)`, n = 1..=depth (capped by the extension bound).
pub fn verify_curve_claim(c: &ASCurve, claimed: Invariants, depth: u32) -> Result<CurveReport> {
    let depth = depth.min(max_depth(c.spec()));
    let counts = count_series(c, depth)?;
    let formula = FormulaSide {
        g: claimed.genus,
        sigma: claimed.two_rank,
    };
    if (counts.len() as u32) < claimed.genus {
        return Ok(CurveReport {
            target: c.to_text(),
            formula,
            oracle: OracleSide {
                g_consistent: false,
                sigma: None,
            },
            counts,
            lpoly: None,
            detail: Some("too few counts under the extension bound".into()),
            status: Status::Truncated,
        });
    }
    let (oracle, lpoly, detail) = match lpoly_from_counts(&counts, claimed.genus, c.spec().size()) {
        Ok(l) => (
            OracleSide {
                g_consistent: true,
                sigma: Some(two_rank_from_lpoly(&l)),
            },
            Some(l.coeffs),
            None,
        ),
        Err(e) => (
            OracleSide {
                g_consistent: false,
                sigma: None,
            },
            None,
            Some(e.to_string()),
        ),
    };
    let status = if oracle.g_consistent && oracle.sigma == Some(claimed.two_rank) {
        Status::Confirmed
    } else {
        Status::Mismatch
    };
    Ok(CurveReport {
        target: c.to_text(),
        formula,
        oracle,
        counts,
        lpoly,
        detail,
        status,
    })
}

pub fn verify_curve(c: &ASCurve, depth: u32) -> Result<CurveReport> {
    verify_curve_claim(c, c.invariants(), depth)
}

/// Verifies each quotient and the count identity
/// `N_X = N_1 + N_2 + N_3 - 2(q^n + 1)`.
pub fn verify_cover(c: &KleinFourCover, depth: u32) -> Result<Report> {
    let quotients = c
        .quotients()
        .iter()
        .map(|q| verify_curve(q, depth))
        .collect::<Result<Vec<_>>>()?;
    let capped = depth.min(max_depth(c.spec()));
    let q = c.spec().size() as i64;
    let mut identity_checks = Vec::new();
    for n in 1..=capped {
        let cover_count = count_points_cover(c, n)?;
        let sum: i64 = quotients.iter().map(|r| r.counts[n as usize - 1] as i64).sum::<i64>()
            - 2 * (q.pow(n) + 1);
        identity_checks.push(IdentityCheck {
            n,
            cover_count,
            quotient_sum: sum,
            ok: sum == cover_count as i64,
        });
    }
    let inv = c.invariants();
    let truncated = quotients.iter().any(|r| r.status == Status::Truncated);
    let g_consistent = quotients.iter().all(|r| r.oracle.g_consistent);
    let sigma = quotients
        .iter()
        .map(|r| r.oracle.sigma)
        .sum::<Option<u32>>();
    let status = if quotients.iter().any(|r| r.status == Status::Mismatch)
        || identity_checks.iter().any(|c| !c.ok)
        || (sigma.is_some() && sigma != Some(inv.two_rank))
    {
        Status::Mismatch
    } else if truncated {
        Status::Truncated
    } else {
        Status::Confirmed
    };
    Ok(Report {
        target: c.to_text(),
        formula: FormulaSide {
            g: inv.genus,
            sigma: inv.two_rank,
        },
        oracle: OracleSide { g_consistent, sigma },
        identity_checks,
        quotients,
        truncated,
        status,
    })
}
