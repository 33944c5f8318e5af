//! Klein-four covers of the projective line in characteristic two.
//!
//! Decides which (genus, 2-rank, type) triples occur, builds explicit
//! Artin-Schreier witnesses for every cell that does, and checks those
//! witnesses by brute-force point counting.

pub mod ascurve;
pub mod census;
pub mod construct;
pub mod error;
pub mod factor;
pub mod field;
pub mod klein4;
pub mod poly;
pub mod ratfun;
pub mod realize;
pub mod text;
pub mod zeta;

pub use ascurve::{reduce, ASCurve, Invariants};
pub use construct::{construct, Lemma, Recipe};
pub use error::{Error, Result};
pub use field::{Felt, FieldSpec};
pub use klein4::{KleinFourCover, Partition};
pub use poly::Poly;
pub use ratfun::{Place, PoleDivisor, RatFun};
pub use realize::{Clause, Verdict};
