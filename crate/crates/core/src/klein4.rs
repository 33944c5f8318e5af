//! Klein-four covers of the projective line, given by two Artin-Schreier
//! functions whose sum defines the third quotient.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ascurve::{reduce, ASCurve, Invariants};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ratfun::{RatFun, RatFunJson};

/// Unordered genus triple, stored descending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub g1: u32,
    pub g2: u32,
    pub g3: u32,
}

impl Partition {
    /// Validates a raw triple against `g`: entries nonnegative, summing to
    /// `g`, each at most `(g+1)/2`.
    pub fn new(g: i64, raw: [i64; 3]) -> Result<Partition> {
        let invalid = |reason: String| Error::InvalidPartition { g, reason };
        if g < 0 {
            return Err(invalid("negative genus".into()));
        }
        if let Some(v) = raw.iter().find(|&&v| v < 0) {
            return Err(invalid(format!("negative entry {v}")));
        }
        let sum: i64 = raw.iter().sum();
        if sum != g {
            return Err(invalid(format!("entries sum to {sum}, not {g}")));
        }
        if let Some(v) = raw.iter().find(|&&v| 2 * v > g + 1) {
            return Err(invalid(format!("entry {v} exceeds (g+1)/2 = {}", (g + 1) as f64 / 2.0)));
        }
        let mut s = raw.map(|v| v as u32);
        s.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition {
            g1: s[0],
            g2: s[1],
            g3: s[2],
        })
    }

    /// Sorts without validating the bound; used for cover types, which
    /// satisfy it automatically.
    pub fn from_genera(mut v: [u32; 3]) -> Partition {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition {
            g1: v[0],
            g2: v[1],
            g3: v[2],
        }
    }

    pub fn genus(&self) -> u32 {
        self.g1 + self.g2 + self.g3
    }

    pub fn entries(&self) -> [u32; 3] {
        [self.g1, self.g2, self.g3]
    }

    pub fn contains(&self, v: u32) -> bool {
        self.entries().contains(&v)
    }

    /// Every valid partition of `g`, in descending lexicographic order.
    pub fn all(g: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let cap = (g + 1) / 2;
        for g1 in (0..=cap.min(g)).rev() {
            for g2 in (0..=g1).rev() {
                if g1 + g2 > g {
                    continue;
                }
                let g3 = g - g1 - g2;
                if g3 <= g2 {
                    out.push(Partition { g1, g2, g3 });
                }
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.g1, self.g2, self.g3)
    }
}

/// A `(Z/2)^2`-cover of the line: quotient curves for `f1`, `f2` and
/// `f3 = f1 + f2`, all stored reduced.
#[derive(Debug, Clone)]
pub struct KleinFourCover {
    quotients: [ASCurve; 3],
}

impl KleinFourCover {
    pub fn new(f1: &RatFun, f2: &RatFun) -> Result<Self> {
        if f1.spec() != f2.spec() {
            return Err(Error::FieldMismatch);
        }
        let r1 = reduce(f1);
        let r2 = reduce(f2);
        if r1 == r2 {
            return Err(Error::InvalidCover(format!(
                "both functions reduce to {r1}"
            )));
        }
        let mk = |f: &RatFun, which: &str| {
            ASCurve::new(f).map_err(|e| match e {
                Error::DegenerateCover(c) => {
                    Error::InvalidCover(format!("{which} reduces to the constant {c}"))
                }
                other => other,
            })
        };
        let c1 = mk(&r1, "f1")?;
        let c2 = mk(&r2, "f2")?;
        let c3 = mk(&(&r1 + &r2), "f1+f2")?;
        Ok(KleinFourCover {
            quotients: [c1, c2, c3],
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.quotients[0].spec()
    }

    pub fn f1(&self) -> &RatFun {
        self.quotients[0].rhs()
    }

    pub fn f2(&self) -> &RatFun {
        self.quotients[1].rhs()
    }

    pub fn f3(&self) -> &RatFun {
        self.quotients[2].rhs()
    }

    pub fn functions(&self) -> [&RatFun; 3] {
        [self.f1(), self.f2(), self.f3()]
    }

    pub fn quotients(&self) -> &[ASCurve; 3] {
        &self.quotients
    }

    pub fn quotient_invariants(&self) -> [Invariants; 3] {
        [0, 1, 2].map(|i| self.quotients[i].invariants())
    }

    pub fn cover_type(&self) -> Partition {
        Partition::from_genera(self.quotient_invariants().map(|i| i.genus))
    }

    /// Genus and 2-rank of the cover, summed over the three quotients.
    pub fn invariants(&self) -> Invariants {
        let q = self.quotient_invariants();
        Invariants {
            genus: q.iter().map(|i| i.genus).sum(),
            two_rank: q.iter().map(|i| i.two_rank).sum(),
        }
    }

    /// Sorted triple of reduced functions; equal keys mean equal covers.
    pub fn canonical_key(&self) -> [RatFun; 3] {
        let mut v = self.functions().map(|f| f.clone());
        v.sort();
        v
    }

    pub fn to_text(&self) -> String {
        format!(
            "y1^2+y1 = {}; y2^2+y2 = {} over {}",
            self.f1(),
            self.f2(),
            self.spec()
        )
    }

    pub fn to_json(&self) -> CoverJson {
        let t = self.cover_type();
        let inv = self.invariants();
        CoverJson {
            field: self.spec().name(),
            f1: self.f1().to_json(),
            f2: self.f2().to_json(),
            f3: self.f3().to_json(),
            cover_type: [t.g1, t.g2, t.g3],
            genus: inv.genus,
            two_rank: inv.two_rank,
            text: self.to_text(),
        }
    }
}

impl PartialEq for KleinFourCover {
    fn eq(&self, other: &Self) -> bool {
        self.spec() == other.spec() && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for KleinFourCover {}

impl fmt::Display for KleinFourCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub field: String,
    pub f1: RatFunJson,
    pub f2: RatFunJson,
    pub f3: RatFunJson,
    #[serde(rename = "type")]
    pub cover_type: [u32; 3],
    pub genus: u32,
    pub two_rank: u32,
    pub text: String,
}
