//! Which `(g, sigma, type)` cells contain Klein-four covers.
//!
//! Five obstructions rule cells out; every other cell with `0 <= sigma <= g`
//! is realized (see `construct`). They are checked in a fixed order and the
//! first one that applies is reported.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::klein4::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    I,
    Ii,
    Iii,
    Iv,
    V,
    None,
}

impl Clause {
    pub fn label(&self) -> &'static str {
        match self {
            Clause::I => "i",
            Clause::Ii => "ii",
            Clause::Iii => "iii",
            Clause::Iv => "iv",
            Clause::V => "v",
            Clause::None => "none",
        }
    }

    pub fn citation(&self) -> &'static str {
        match self {
            Clause::I => "2-rank 0 forces the two largest quotient genera to be equal",
            Clause::Ii => "2-rank 1 occurs only for odd g with (g+1)/2 in the type",
            Clause::Iii => "2-rank 2 never occurs for a totally balanced type",
            Clause::Iv => "no almost-ordinary covers: 2-rank g-1 never occurs",
            Clause::V => "an unbalanced type forces 2-rank congruent to g mod 2",
            Clause::None => "no obstruction applies; an explicit witness exists",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub exists: bool,
    pub clause: Clause,
    pub citation: String,
}

impl Verdict {
    fn from_clause(clause: Clause) -> Verdict {
        Verdict {
            exists: clause == Clause::None,
            clause,
            citation: clause.citation().to_string(),
        }
    }
}

pub fn partition_validate(g: i64, raw: [i64; 3]) -> Result<Partition> {
    Partition::new(g, raw)
}

/// Some entry is at least `g/2`, compared exactly as `2 g1 >= g`.
pub fn is_unbalanced(p: &Partition) -> bool {
    2 * p.g1 >= p.genus()
}

pub fn is_totally_balanced(p: &Partition) -> bool {
    p.g1 == p.g2 && p.g2 == p.g3
}

fn check_range(g: i64, sigma: i64) -> Result<()> {
    if g < 0 || sigma < 0 || sigma > g {
        return Err(Error::SigmaRange { g, sigma });
    }
    Ok(())
}

/// Obstructions in order; `order` lets tests permute them.
fn first_obstruction(g: u32, sigma: u32, p: &Partition, order: &[Clause]) -> Clause {
    let fires = |c: Clause| match c {
        Clause::I => sigma == 0 && p.g1 != p.g2,
        Clause::Ii => sigma == 1 && !(g % 2 == 1 && p.contains((g + 1) / 2)),
        Clause::Iii => sigma == 2 && is_totally_balanced(p),
        Clause::Iv => sigma + 1 == g,
        Clause::V => sigma % 2 != g % 2 && is_unbalanced(p),
        Clause::None => false,
    };
    order.iter().copied().find(|&c| fires(c)).unwrap_or(Clause::None)
}

const CLAUSE_ORDER: [Clause; 5] = [Clause::I, Clause::Ii, Clause::Iii, Clause::Iv, Clause::V];

pub fn realizable(g: i64, sigma: i64, p: &Partition) -> Result<Verdict> {
    check_range(g, sigma)?;
    if p.genus() as i64 != g {
        return Err(Error::InvalidPartition {
            g,
            reason: format!("type {p} has genus {}", p.genus()),
        });
    }
    Ok(Verdict::from_clause(first_obstruction(
        g as u32,
        sigma as u32,
        p,
        &CLAUSE_ORDER,
    )))
}

/// Same decision with a caller-chosen clause order (only the citation can change).
pub fn realizable_with_order(g: u32, sigma: u32, p: &Partition, order: &[Clause]) -> Verdict {
    Verdict::from_clause(first_obstruction(g, sigma, p, order))
}

/// Some type of genus `g` carries 2-rank `sigma`: everything except
/// `sigma = g - 1` and, for even `g`, `sigma = 1`.
pub fn realizable_any(g: i64, sigma: i64) -> Result<bool> {
    check_range(g, sigma)?;
    Ok(sigma != g - 1 && !(g % 2 == 0 && sigma == 1))
}

/// Verdict for the type-free question, citing the clause that rules it out.
pub fn realizable_any_verdict(g: i64, sigma: i64) -> Result<Verdict> {
    Ok(if realizable_any(g, sigma)? {
        Verdict::from_clause(Clause::None)
    } else if sigma == g - 1 {
        Verdict::from_clause(Clause::Iv)
    } else {
        Verdict::from_clause(Clause::Ii)
    })
}

/// A hyperelliptic curve of genus `g` and 2-rank `sigma` with an extra
/// involution exists iff `g = sigma mod 2`.
pub fn hyperelliptic_extra_involution(g: i64, sigma: i64) -> Result<bool> {
    check_range(g, sigma)?;
    Ok((g - sigma) % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(g: i64, raw: [i64; 3]) -> Partition {
        Partition::new(g, raw).unwrap()
    }

    fn clause(g: i64, s: i64, raw: [i64; 3]) -> Clause {
        realizable(g, s, &part(g, raw)).unwrap().clause
    }

    #[test]
    fn balance_predicates() {
        assert!(is_unbalanced(&part(5, [3, 1, 1])));
        assert!(!is_unbalanced(&part(5, [2, 2, 1])));
        assert!(is_unbalanced(&part(6, [3, 2, 1])));
        assert!(is_totally_balanced(&part(3, [1, 1, 1])));
        assert!(!is_totally_balanced(&part(5, [2, 2, 1])));
        assert!(is_totally_balanced(&part(0, [0, 0, 0])));
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(clause(5, 4, [2, 2, 1]), Clause::Iv);
        assert_eq!(clause(6, 3, [3, 2, 1]), Clause::V);
        assert_eq!(clause(9, 2, [3, 3, 3]), Clause::Iii);
        assert_eq!(clause(7, 0, [3, 3, 1]), Clause::None);
        for p in Partition::all(6) {
            assert_eq!(realizable(6, 1, &p).unwrap().clause, Clause::Ii);
        }
        assert_eq!(clause(5, 1, [3, 1, 1]), Clause::None);
        assert_eq!(clause(1, 0, [1, 0, 0]), Clause::I);
        assert!(realizable(5, 6, &part(5, [2, 2, 1])).is_err());
        let v = realizable(5, 4, &part(5, [2, 2, 1])).unwrap();
        assert!(!v.exists);
    }

    #[test]
    fn type_free_examples() {
        assert!(!realizable_any(6, 5).unwrap());
        assert!(!realizable_any(6, 1).unwrap());
        assert!(realizable_any(7, 7).unwrap());
        assert!(realizable_any(0, 0).unwrap());
        assert!(realizable_any(-1, 0).is_err());
    }

    #[test]
    fn hyperelliptic_examples() {
        assert!(hyperelliptic_extra_involution(5, 3).unwrap());
        assert!(!hyperelliptic_extra_involution(5, 2).unwrap());
        assert!(hyperelliptic_extra_involution(4, 4).unwrap());
        assert!(hyperelliptic_extra_involution(0, 0).unwrap());
    }

    #[test]
    fn clause_order_only_moves_citations() {
        let reversed: Vec<Clause> = CLAUSE_ORDER.iter().rev().copied().collect();
        let swapped = [Clause::I, Clause::V, Clause::Iii, Clause::Iv, Clause::Ii];
        for g in 0..=16u32 {
            for p in Partition::all(g) {
                for s in 0..=g {
                    let base = realizable_with_order(g, s, &p, &CLAUSE_ORDER);
                    for order in [&reversed[..], &swapped[..]] {
                        assert_eq!(base.exists, realizable_with_order(g, s, &p, order).exists);
                    }
                }
            }
        }
    }
}
