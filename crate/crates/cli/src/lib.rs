//! Commands behind the `k4` binary. Each returns its output and exit code
//! instead of printing, so tests can call them directly.
//!
//! Exit codes: 0 success or "exists", 1 impossible, 2 bad input,
//! 3 a verification mismatch.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use k4_core::ascurve::ASCurve;
use k4_core::census;
use k4_core::construct::{self, Lemma};
use k4_core::realize;
use k4_core::text::parse_ratfun;
use k4_core::zeta::{self, Status};
use k4_core::{Error, FieldSpec, KleinFourCover, Partition};

pub const SCHEMA: &str = "k4/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IMPOSSIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(code: i32, v: Value) -> Outcome {
        Outcome {
            code,
            stdout: serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            stderr: String::new(),
        }
    }

    fn text(code: i32, s: String) -> Outcome {
        Outcome { code, stdout: s, stderr: String::new() }
    }

    fn error(e: &Error) -> Outcome {
        let code = match e {
            Error::Impossible(_) => EXIT_IMPOSSIBLE,
            Error::InternalMismatch(_) | Error::InconsistentCounts(_) => EXIT_MISMATCH,
            _ => EXIT_INPUT,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Adds the schema tag to a serialized object.
fn tagged(v: impl Serialize) -> Value {
    let mut v = serde_json::to_value(v).expect("serializable");
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), SCHEMA.into());
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FieldChoice {
    Gf2,
    Gf4,
}

impl FieldChoice {
    pub fn spec(self) -> FieldSpec {
        match self {
            FieldChoice::Gf2 => FieldSpec::gf2(),
            FieldChoice::Gf4 => FieldSpec::gf4(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Tsv,
    Json,
}

/// Parses `"g1,g2,g3"` and validates it against `g`.
pub fn parse_partition(g: i64, s: &str) -> Result<Partition, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = |reason: String| Error::InvalidPartition { g, reason };
    if parts.len() != 3 {
        return Err(bad(format!("expected three comma-separated entries, got {s:?}")));
    }
    let mut raw = [0i64; 3];
    for (slot, p) in raw.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| bad(format!("not an integer: {p:?}")))?;
    }
    Partition::new(g, raw)
}

pub fn cmd_check(g: i64, sigma: i64, partition: Option<&str>) -> Outcome {
    let run = || -> Result<Value, Error> {
        let (verdict, ty) = match partition {
            Some(s) => {
                let p = parse_partition(g, s)?;
                (realize::realizable(g, sigma, &p)?, Some(p.entries()))
            }
            None => (realize::realizable_any_verdict(g, sigma)?, None),
        };
        Ok(json!({
            "schema": SCHEMA,
            "g": g,
            "sigma": sigma,
            "type": ty,
            "exists": verdict.exists,
            "clause": verdict.clause,
            "citation": verdict.citation,
        }))
    };
    match run() {
        Ok(v) => {
            let code = if v["exists"] == true { EXIT_OK } else { EXIT_IMPOSSIBLE };
            Outcome::json(code, v)
        }
        Err(e) => Outcome::error(&e),
    }
}

/// Verification depth used for a cover: every quotient genus plus two
/// spare counts.
pub fn default_depth(c: &KleinFourCover) -> u32 {
    c.quotient_invariants().iter().map(|i| i.genus).max().unwrap_or(0) + 2
}

pub fn cmd_construct(g: i64, sigma: i64, partition: &str, verify_depth: Option<u32>) -> Outcome {
    let p = match parse_partition(g, partition) {
        Ok(p) => p,
        Err(e) => return Outcome::error(&e),
    };
    match construct::construct(g, sigma, &p) {
        Ok((cover, recipe)) => {
            let mut v = json!({
                "schema": SCHEMA,
                "g": g,
                "sigma": sigma,
                "type": p.entries(),
                "cover": cover.to_json(),
                "recipe": recipe,
            });
            let mut code = EXIT_OK;
            if let Some(depth) = verify_depth {
                match zeta::verify_cover(&cover, depth) {
                    Ok(report) => {
                        if report.status == Status::Mismatch {
                            code = EXIT_MISMATCH;
                        }
                        v["report"] = serde_json::to_value(&report).expect("serializable");
                    }
                    Err(e) => return Outcome::error(&e),
                }
            }
            Outcome::json(code, v)
        }
        Err(Error::Impossible(verdict)) => Outcome::json(
            EXIT_IMPOSSIBLE,
            json!({
                "schema": SCHEMA,
                "g": g,
                "sigma": sigma,
                "type": p.entries(),
                "exists": false,
                "clause": verdict.clause,
                "citation": verdict.citation,
            }),
        ),
        Err(e) => Outcome::error(&e),
    }
}

pub fn cmd_invariants(f: &str, field: FieldChoice) -> Outcome {
    let run = || -> Result<Value, Error> {
        let rf = parse_ratfun(field.spec(), f)?;
        let curve = ASCurve::new(&rf)?;
        let poles: Vec<Value> = curve
            .poles()
            .poles
            .iter()
            .map(|(place, n)| json!({ "place": place.to_string(), "order": n }))
            .collect();
        let mut v = tagged(curve.to_json());
        v["field"] = field.spec().name().into();
        v["poles"] = poles.into();
        Ok(v)
    };
    match run() {
        Ok(v) => Outcome::json(EXIT_OK, v),
        Err(e) => Outcome::error(&e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub g: u32,
    pub sigma: u32,
    #[serde(rename = "type")]
    pub cover_type: [u32; 3],
    pub exists: bool,
    pub clause: realize::Clause,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma: Option<Lemma>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// One row per `(sigma, type)` for genus `g`, ordered by sigma then type
/// (descending). With `verify`, every realizable cell is constructed and
/// checked by point counting.
pub fn table_rows(g: u32, verify: bool) -> Vec<TableRow> {
    let cells: Vec<(u32, Partition)> = (0..=g)
        .flat_map(|s| Partition::all(g).into_iter().map(move |p| (s, p)))
        .collect();
    cells
        .par_iter()
        .map(|&(s, p)| {
            let v = realize::realizable(g as i64, s as i64, &p).expect("valid cell");
            let mut row = TableRow {
                g,
                sigma: s,
                cover_type: p.entries(),
                exists: v.exists,
                clause: v.clause,
                lemma: None,
                field: None,
                status: None,
                detail: None,
            };
            if verify && v.exists {
                match construct::construct(g as i64, s as i64, &p) {
                    Ok((c, r)) => {
                        row.lemma = Some(r.lemma);
                        row.field = Some(c.spec().name());
                        match zeta::verify_cover(&c, default_depth(&c)) {
                            Ok(rep) => row.status = Some(rep.status),
                            Err(e) => {
                                row.status = Some(Status::Mismatch);
                                row.detail = Some(e.to_string());
                            }
                        }
                    }
                    Err(e) => {
                        row.status = Some(Status::Mismatch);
                        row.detail = Some(e.to_string());
                    }
                }
            }
            row
        })
        .collect()
}

pub fn render_tsv(rows: &[TableRow], verify: bool) -> String {
    let mut out = String::from("g\tsigma\ttype\texists\tclause");
    if verify {
        out.push_str("\tlemma\tfield\tstatus");
    }
    out.push('\n');
    for r in rows {
        let [a, b, c] = r.cover_type;
        out.push_str(&format!(
            "{}\t{}\t{a},{b},{c}\t{}\t{}",
            r.g,
            r.sigma,
            if r.exists { "yes" } else { "no" },
            r.clause
        ));
        if verify {
            let status = r.status.map(|s| format!("{s:?}").to_lowercase());
            out.push_str(&format!(
                "\t{}\t{}\t{}",
                r.lemma.map_or("-".to_string(), |l| l.to_string()),
                r.field.as_deref().unwrap_or("-"),
                status.as_deref().unwrap_or("-")
            ));
        }
        out.push('\n');
    }
    out
}

pub fn cmd_table(g: i64, verify: bool, format: TableFormat) -> Outcome {
    if g < 0 {
        return Outcome::error(&Error::SigmaRange { g, sigma: 0 });
    }
    let rows = table_rows(g as u32, verify);
    let failed = rows.iter().any(|r| r.status == Some(Status::Mismatch));
    let code = if failed { EXIT_MISMATCH } else { EXIT_OK };
    match format {
        TableFormat::Tsv => Outcome::text(code, render_tsv(&rows, verify)),
        TableFormat::Json => Outcome::json(code, json!({ "schema": SCHEMA, "g": g, "rows": rows })),
    }
}

pub fn cmd_census(field: FieldChoice, max_deg: u32) -> Outcome {
    match census::census(field.spec(), max_deg) {
        Ok(c) => Outcome::json(EXIT_OK, tagged(c)),
        Err(e) => Outcome::error(&e),
    }
}

pub fn cmd_hyperelliptic(g: i64, sigma: i64) -> Outcome {
    match realize::hyperelliptic_extra_involution(g, sigma) {
        Ok(b) => Outcome::json(
            if b { EXIT_OK } else { EXIT_IMPOSSIBLE },
            json!({ "schema": SCHEMA, "g": g, "sigma": sigma, "exists": b }),
        ),
        Err(e) => Outcome::error(&e),
    }
}
