//! Exhaustive enumeration of small covers, tabulated by `(g, sigma, type)`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::ascurve::reduce;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::klein4::{CoverJson, KleinFourCover, Partition};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::realize;

pub const MAX_CENSUS_DEGREE: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusCell {
    pub g: u32,
    pub sigma: u32,
    #[serde(rename = "type")]
    pub cover_type: Partition,
    pub witness_count: usize,
    /// The cover with the smallest key in this cell.
    pub example: Option<CoverJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub field: String,
    pub max_deg: u32,
    /// Distinct nonconstant reduced functions.
    pub functions: usize,
    /// Distinct covers.
    pub covers: usize,
    pub cells: Vec<CensusCell>,
}

impl Census {
    pub fn cell(&self, g: u32, sigma: u32, p: &Partition) -> Option<&CensusCell> {
        self.cells
            .iter()
            .find(|c| c.g == g && c.sigma == sigma && c.cover_type == *p)
    }
}

fn polys_up_to(spec: FieldSpec, d: u32) -> Vec<Poly> {
    let q = spec.size();
    let count = q.pow(d + 1);
    (0..count)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(d as usize + 1);
            for _ in 0..=d {
                c.push((idx % q) as u32);
                idx /= q;
            }
            Poly::from_raw(spec, c)
        })
        .collect()
}

/// Reduced forms of every `num/den` with both degrees at most `d`,
/// deduplicated, constants dropped.
pub fn reduced_functions(spec: FieldSpec, d: u32) -> Vec<RatFun> {
    let all = polys_up_to(spec, d);
    let dens: Vec<&Poly> = all.iter().filter(|p| p.is_monic()).collect();
    let set: BTreeSet<RatFun> = dens
        .par_iter()
        .flat_map_iter(|den| {
            all.iter().filter_map(move |num| {
                if num.is_zero() || !num.gcd(den).is_one() {
                    return None;
                }
                let r = reduce(&RatFun::new(num.clone(), (*den).clone()).ok()?);
                (!r.is_constant()).then_some(r)
            })
        })
        .collect();
    set.into_iter().collect()
}

/// Every cover generated by two functions of degree at most `max_deg`. Fails
/// with `InternalMismatch` if a cover lands in a cell ruled impossible.
pub fn census(spec: FieldSpec, max_deg: u32) -> Result<Census> {
    if max_deg > MAX_CENSUS_DEGREE {
        return Err(Error::Precondition(format!(
            "degree bound {max_deg} exceeds {MAX_CENSUS_DEGREE}"
        )));
    }
    let funcs = reduced_functions(spec, max_deg);
    let keys: BTreeSet<[RatFun; 3]> = (0..funcs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let funcs = &funcs;
            (i + 1..funcs.len()).filter_map(move |j| {
                KleinFourCover::new(&funcs[i], &funcs[j])
                    .ok()
                    .map(|c| c.canonical_key())
            })
        })
        .collect();

    let mut cells: BTreeMap<(u32, u32, Partition), (usize, KleinFourCover)> = BTreeMap::new();
    for key in &keys {
        let c = KleinFourCover::new(&key[0], &key[1])?;
        let inv = c.invariants();
        let t = c.cover_type();
        let v = realize::realizable(inv.genus as i64, inv.two_rank as i64, &t)?;
        if !v.exists {
            return Err(Error::InternalMismatch(format!(
                "census found {c} in cell ({}, {}, {t}) ruled out by clause {}",
                inv.genus, inv.two_rank, v.clause
            )));
        }
        // keys arrive sorted, so the first cover seen is the smallest
        cells
            .entry((inv.genus, inv.two_rank, t))
            .and_modify(|e| e.0 += 1)
            .or_insert((1, c));
    }
    Ok(Census {
        field: spec.name(),
        max_deg,
        functions: funcs.len(),
        covers: keys.len(),
        cells: cells
            .into_iter()
            .map(|((g, sigma, cover_type), (n, c))| CensusCell {
                g,
                sigma,
                cover_type,
                witness_count: n,
                example: Some(c.to_json()),
            })
            .collect(),
    })
}
