//! Acceptance gate. Runs each criterion against its budget and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use k4_cli::cmd_hyperelliptic;
use k4_core::ascurve::{reduce, ASCurve};
use k4_core::census::census;
use k4_core::construct::construct;
use k4_core::realize::{self, Clause};
use k4_core::text::parse_ratfun;
use k4_core::zeta::{self, Status};
use k4_core::{FieldSpec, KleinFourCover, Partition, Poly, RatFun};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Obstructions written straight from the classification, independent of
/// `realize`: returns the first clause that fires.
fn clause_oracle(g: u32, s: u32, p: [u32; 3]) -> Option<u32> {
    let has_repeated_top = (0..3).any(|i| {
        let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
        a == b && c <= a
    });
    let has = |pred: &dyn Fn(u32) -> bool| p.iter().any(|&x| pred(x));
    let clauses = [
        s == 0 && !has_repeated_top,
        s == 1 && !has(&|x| 2 * x == g + 1),
        s == 2 && p[0] == p[1] && p[1] == p[2],
        s + 1 == g,
        (s + g) % 2 == 1 && has(&|x| 2 * x >= g),
    ];
    clauses.iter().position(|&c| c).map(|i| i as u32 + 1)
}

fn label(i: u32) -> Clause {
    [Clause::I, Clause::Ii, Clause::Iii, Clause::Iv, Clause::V][i as usize - 1]
}

fn cells(max_g: u32) -> Vec<(u32, u32, Partition)> {
    (0..=max_g)
        .flat_map(|g| {
            (0..=g).flat_map(move |s| Partition::all(g).into_iter().map(move |p| (g, s, p)))
        })
        .collect()
}

fn realizability_table() -> Outcome {
    let all = cells(12);
    for &(g, s, p) in &all {
        let v = realize::realizable(g as i64, s as i64, &p).map_err(|e| e.to_string())?;
        let want = clause_oracle(g, s, p.entries());
        ensure(v.exists == want.is_none(), || format!("({g}, {s}, {p}): exists = {}", v.exists))?;
        if let Some(i) = want {
            ensure(v.clause == label(i), || format!("({g}, {s}, {p}): clause {}", v.clause))?;
        }
    }
    for g in 0..=12u32 {
        for s in 0..=g {
            let any = realize::realizable_any(g as i64, s as i64).unwrap();
            let literal = !(s + 1 == g || (g % 2 == 0 && s == 1));
            let union = Partition::all(g)
                .iter()
                .any(|p| clause_oracle(g, s, p.entries()).is_none());
            ensure(any == literal && any == union, || format!("any({g}, {s}) = {any}"))?;
        }
    }
    Ok(format!("{} cells", all.len()))
}

fn exists_cells(max_g: u32) -> Vec<(u32, u32, Partition)> {
    cells(max_g)
        .into_iter()
        .filter(|&(g, s, p)| clause_oracle(g, s, p.entries()).is_none())
        .collect()
}

fn witness_completeness() -> Outcome {
    let todo = exists_cells(12);
    todo.par_iter().try_for_each(|&(g, s, p)| {
        let (c, _) = construct(g as i64, s as i64, &p).map_err(|e| format!("({g}, {s}, {p}): {e}"))?;
        let inv = c.invariants();
        ensure(
            (inv.genus, inv.two_rank, c.cover_type()) == (g, s, p),
            || format!("({g}, {s}, {p}) built {c}"),
        )
    })?;
    Ok(format!("{} witnesses", todo.len()))
}

fn oracle_confirmation() -> Outcome {
    let todo = exists_cells(9);
    todo.par_iter().try_for_each(|&(g, s, p)| {
        let (c, _) = construct(g as i64, s as i64, &p).map_err(|e| e.to_string())?;
        let depth = c.quotient_invariants().iter().map(|i| i.genus).max().unwrap() + 2;
        let r = zeta::verify_cover(&c, depth).map_err(|e| format!("{c}: {e}"))?;
        ensure(r.status == Status::Confirmed, || format!("{c}: {:?}", r.status))?;
        ensure(r.oracle.sigma == Some(s), || format!("{c}: oracle 2-rank {:?}", r.oracle.sigma))?;
        for q in &r.quotients {
            ensure(
                q.oracle.g_consistent && q.oracle.sigma == Some(q.formula.sigma),
                || format!("{}: oracle {:?}", q.target, q.oracle),
            )?;
        }
        Ok::<(), String>(())
    })?;
    Ok(format!("{} witnesses", todo.len()))
}

fn field(rng: &mut ChaCha8Rng) -> FieldSpec {
    if rng.gen() {
        FieldSpec::gf4()
    } else {
        FieldSpec::gf2()
    }
}

fn random_ratfun(rng: &mut ChaCha8Rng, spec: FieldSpec, max_deg: usize) -> RatFun {
    let mask = spec.size() as u32 - 1;
    let nd = rng.gen_range(0..=max_deg);
    let dd = rng.gen_range(0..=max_deg);
    let num: Vec<u32> = (0..=nd).map(|_| rng.gen::<u32>() & mask).collect();
    let mut den: Vec<u32> = (0..dd).map(|_| rng.gen::<u32>() & mask).collect();
    den.push(1);
    RatFun::new(Poly::from_raw(spec, num), Poly::from_raw(spec, den)).unwrap()
}

fn random_cover(rng: &mut ChaCha8Rng, max_deg: usize) -> KleinFourCover {
    loop {
        let spec = field(rng);
        let f1 = random_ratfun(rng, spec, max_deg);
        let f2 = random_ratfun(rng, spec, max_deg);
        if let Ok(c) = KleinFourCover::new(&f1, &f2) {
            return c;
        }
    }
}

fn kani_rosen() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let covers: Vec<KleinFourCover> = (0..100).map(|_| random_cover(&mut rng, 5)).collect();
    covers.par_iter().try_for_each(|c| {
        let q = c.spec().size() as i64;
        for n in 1..=6 {
            let direct = zeta::count_points_cover(c, n).map_err(|e| e.to_string())? as i64;
            let mut parts = 0i64;
            for x in c.quotients() {
                parts += zeta::count_points(x, n).map_err(|e| e.to_string())? as i64;
            }
            ensure(direct == parts - 2 * (q.pow(n) + 1), || {
                format!("{c}, n = {n}: {direct} vs {parts}")
            })?;
        }
        Ok::<(), String>(())
    })?;
    Ok("100 covers, n = 1..6".into())
}

fn census_soundness() -> Outcome {
    let mut notes = Vec::new();
    for (spec, d) in [(FieldSpec::gf2(), 3), (FieldSpec::gf4(), 2)] {
        let c = census(spec, d).map_err(|e| e.to_string())?;
        for cell in &c.cells {
            let (g, s) = (cell.g, cell.sigma);
            ensure(clause_oracle(g, s, cell.cover_type.entries()).is_none(), || {
                format!("{} D={d}: cover in ({g}, {s}, {})", c.field, cell.cover_type)
            })?;
            ensure(s + 1 != g && !(g % 2 == 0 && s == 1), || {
                format!("{} D={d}: (g, sigma) = ({g}, {s})", c.field)
            })?;
        }
        notes.push(format!("{} D={d}: {} covers in {} cells", c.field, c.covers, c.cells.len()));
    }
    Ok(notes.join("; "))
}

fn hyperelliptic() -> Outcome {
    for g in 0..=12u32 {
        for s in 0..=g {
            let out = cmd_hyperelliptic(g as i64, s as i64);
            let v: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
            let says = v["exists"] == true;
            let with_zero = Partition::all(g)
                .iter()
                .any(|p| p.contains(0) && clause_oracle(g, s, p.entries()).is_none());
            let parity = (g + s) % 2 == 0;
            ensure(says == parity && with_zero == parity && (out.code == 0) == parity, || {
                format!("({g}, {s}): command {says}, cells {with_zero}")
            })?;
        }
    }
    Ok("g <= 12".into())
}

fn invariants(f: &RatFun) -> Option<(u32, u32)> {
    ASCurve::new(f).ok().map(|c| (c.invariants().genus, c.invariants().two_rank))
}

fn class_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for t in 0..500 {
        let spec = field(&mut rng);
        let mask = spec.size() as u32 - 1;
        let f = random_ratfun(&mut rng, spec, 5);
        let h = random_ratfun(&mut rng, spec, 3);
        let r = reduce(&f);
        ensure(reduce(&r) == r, || format!("trial {t}: reduce not idempotent on {f}"))?;
        let shifted = &f + &(&h.square() + &h);
        ensure(reduce(&shifted) == r, || format!("trial {t}: {f} vs {shifted}"))?;
        let c = RatFun::constant(spec, rng.gen::<u32>() & mask);
        ensure(invariants(&(&f + &c)) == invariants(&f), || format!("trial {t}: constant shift of {f}"))?;
        let e = loop {
            let e = [0; 4].map(|_| spec.elem(rng.gen::<u32>() & mask));
            if !(e[0] * e[3] + e[1] * e[2]).is_zero() {
                break e;
            }
        };
        let moved = f.mobius([[e[0], e[1]], [e[2], e[3]]]).map_err(|e| e.to_string())?;
        ensure(invariants(&moved) == invariants(&f), || format!("trial {t}: {f} vs {moved}"))?;
    }
    Ok("500 trials of each".into())
}

/// Brute-force arithmetic in GF(2) and GF(4) = GF(2)[a]/(a^2 + a + 1),
/// elements as bits.
fn gf_mul(x: u32, y: u32, q: u32) -> u32 {
    if q == 2 {
        return x & y;
    }
    let mut p = 0;
    for i in 0..2 {
        if y >> i & 1 == 1 {
            p ^= x << i;
        }
    }
    if p & 4 != 0 {
        p ^= 0b111;
    }
    p
}

fn gf_eval(coeffs: &[u32], x: u32, q: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| gf_mul(acc, x, q) ^ c)
}

/// Points of y^2 + y = num/den over GF(q), where num/den has odd order at
/// every pole and `deg num > deg den` exactly when infinity is a pole.
fn brute_count(num: &[u32], den: &[u32], q: u32) -> u64 {
    let solutions = |v: u32| (0..q).filter(|&y| gf_mul(y, y, q) ^ y == v).count() as u64;
    let mut n = 0;
    for x in 0..q {
        let d = gf_eval(den, x, q);
        if d == 0 {
            n += 1;
            continue;
        }
        let inv = (1..q).find(|&i| gf_mul(i, d, q) == 1).unwrap();
        n += solutions(gf_mul(gf_eval(num, x, q), inv, q));
    }
    if num.len() > den.len() {
        n + 1
    } else if num.len() == den.len() {
        n + solutions(num[num.len() - 1])
    } else {
        n + solutions(0)
    }
}

fn named_examples() -> Outcome {
    // (text, numerator, denominator, N_1, L, 2-rank)
    let cases: [(&str, &[u32], &[u32], u64, &[i128], u32); 2] = [
        ("x^3", &[0, 0, 0, 1], &[1], 3, &[1, 0, 2], 0),
        ("1/x + 1/(x+1)", &[1], &[0, 1, 1], 4, &[1, 1, 2], 1),
    ];
    for (text, num, den, n1, l, s) in cases {
        let counts = [brute_count(num, den, 2), brute_count(num, den, 4)];
        ensure(counts[0] == n1, || format!("{text}: brute N_1 = {}", counts[0]))?;
        let f = parse_ratfun(FieldSpec::gf2(), text).map_err(|e| e.to_string())?;
        let c = ASCurve::new(&f).map_err(|e| e.to_string())?;
        let series = zeta::count_series(&c, 2).map_err(|e| e.to_string())?;
        ensure(series == counts, || format!("{text}: counts {series:?} vs brute {counts:?}"))?;
        let lp = zeta::lpoly_from_counts(&series, 1, 2).map_err(|e| e.to_string())?;
        ensure(lp.coeffs == l, || format!("{text}: L = {:?}", lp.coeffs))?;
        ensure(zeta::two_rank_from_lpoly(&lp) == s, || format!("{text}: oracle 2-rank"))?;
        ensure(c.invariants().two_rank == s && c.invariants().genus == 1, || {
            format!("{text}: formula {:?}", c.invariants())
        })?;
    }
    Ok("2 curves".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("realizability table, g <= 12", Duration::from_secs(10), realizability_table),
        ("witness completeness, g <= 12", Duration::from_secs(60), witness_completeness),
        ("oracle confirmation, g <= 9", Duration::from_secs(300), oracle_confirmation),
        ("Kani-Rosen identity", Duration::MAX, kani_rosen),
        ("census soundness", Duration::from_secs(600), census_soundness),
        ("hyperelliptic parity", Duration::MAX, hyperelliptic),
        ("reduction and class functions", Duration::MAX, class_functions),
        ("named examples", Duration::MAX, named_examples),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let verdict = match result {
            Ok(_) if took > *budget => Err(format!("took {took:.1?}, budget {budget:.0?}")),
            r => r,
        };
        match verdict {
            Ok(detail) => println!("PASS {} {name} ({took:.1?}; {detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({took:.1?}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
