use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k4_core::ascurve::{reduce, ASCurve};
use k4_core::construct::{induct_step, normalize_infinity};
use k4_core::zeta::{self, Status};
use k4_core::{FieldSpec, KleinFourCover, Poly, RatFun};

fn field(which: bool) -> FieldSpec {
    if which {
        FieldSpec::gf4()
    } else {
        FieldSpec::gf2()
    }
}

fn ratfun(spec: FieldSpec, num: Vec<u32>, mut den: Vec<u32>) -> RatFun {
    let mask = spec.size() as u32 - 1;
    den.iter_mut().for_each(|c| *c &= mask);
    den.push(1);
    let num = num.into_iter().map(|c| c & mask).collect();
    RatFun::new(Poly::from_raw(spec, num), Poly::from_raw(spec, den)).unwrap()
}

fn arb_ratfun(max_deg: usize) -> impl Strategy<Value = RatFun> {
    (
        any::<bool>(),
        prop::collection::vec(any::<u32>(), 1..=max_deg + 1),
        prop::collection::vec(any::<u32>(), 0..=max_deg),
    )
        .prop_map(|(w, n, d)| ratfun(field(w), n, d))
}

/// Two functions over the same field.
fn arb_pair(d1: usize, d2: usize) -> impl Strategy<Value = (RatFun, RatFun)> {
    let coeffs = |d: usize| {
        (
            prop::collection::vec(any::<u32>(), 1..=d + 1),
            prop::collection::vec(any::<u32>(), 0..=d),
        )
    };
    (any::<bool>(), coeffs(d1), coeffs(d2)).prop_map(|(w, (n1, e1), (n2, e2))| {
        (ratfun(field(w), n1, e1), ratfun(field(w), n2, e2))
    })
}

fn random_ratfun(rng: &mut ChaCha8Rng, spec: FieldSpec, max_deg: usize) -> RatFun {
    let nd = rng.gen_range(0..=max_deg);
    let dd = rng.gen_range(0..=max_deg);
    let num = (0..=nd).map(|_| rng.gen()).collect();
    let den = (0..dd).map(|_| rng.gen()).collect();
    ratfun(spec, num, den)
}

fn invariants(f: &RatFun) -> Option<(u32, u32)> {
    ASCurve::new(f).ok().map(|c| {
        let i = c.invariants();
        (i.genus, i.two_rank)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent(f in arb_ratfun(5)) {
        let r = reduce(&f);
        prop_assert_eq!(reduce(&r), r);
    }

    #[test]
    fn reduced_poles_have_odd_order(f in arb_ratfun(5)) {
        let r = reduce(&f);
        prop_assert!(r.pole_divisor().poles.iter().all(|(_, n)| n % 2 == 1));
    }

    #[test]
    fn adding_h_squared_plus_h_changes_nothing((f, h) in arb_pair(4, 3)) {
        let g = &f + &(&h.square() + &h);
        prop_assert_eq!(reduce(&g), reduce(&f));
    }

    #[test]
    fn constants_do_not_change_invariants(f in arb_ratfun(5), c in any::<u32>()) {
        let spec = f.spec();
        let c = c & (spec.size() as u32 - 1);
        let g = &f + &RatFun::constant(spec, c);
        prop_assert_eq!(invariants(&g), invariants(&f));
    }

    #[test]
    fn mobius_moves_do_not_change_invariants(f in arb_ratfun(4), m in any::<[u32; 4]>()) {
        let spec = f.spec();
        let e = m.map(|b| spec.elem(b & (spec.size() as u32 - 1)));
        let matrix = [[e[0], e[1]], [e[2], e[3]]];
        prop_assume!(!(e[0] * e[3] + e[1] * e[2]).is_zero());
        prop_assert_eq!(invariants(&f.mobius(matrix).unwrap()), invariants(&f));
    }

    #[test]
    fn formulas_agree_with_point_counts(f in arb_ratfun(3)) {
        let Ok(c) = ASCurve::new(&f) else { return Ok(()) };
        let g = c.invariants().genus;
        prop_assume!(g <= 4);
        let r = zeta::verify_curve(&c, g + 1).unwrap();
        prop_assert_eq!(r.status, Status::Confirmed, "{}", c);
    }
}

#[test]
fn cover_counts_match_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    while seen < 30 {
        let spec = field(rng.gen());
        let f1 = random_ratfun(&mut rng, spec, 3);
        let f2 = random_ratfun(&mut rng, spec, 3);
        let Ok(c) = KleinFourCover::new(&f1, &f2) else { continue };
        seen += 1;
        let q = spec.size() as i64;
        for n in 1..=4 {
            let direct = zeta::count_points_cover(&c, n).unwrap() as i64;
            let parts: i64 = c
                .quotients()
                .iter()
                .map(|x| zeta::count_points(x, n).unwrap() as i64)
                .sum();
            assert_eq!(direct, parts - 2 * (q.pow(n) + 1), "{c} over n = {n}");
        }
    }
}

#[test]
fn induction_adds_three_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut trials = 0;
    while trials < 200 {
        let spec = field(rng.gen());
        let f1 = random_ratfun(&mut rng, spec, 4);
        let f2 = random_ratfun(&mut rng, spec, 4);
        let Ok(base) = KleinFourCover::new(&f1, &f2) else { continue };
        trials += 1;
        let lifted = if spec.degree() == 1 {
            let gf4 = FieldSpec::gf4();
            let e = spec.embedding_into(&gf4).unwrap();
            KleinFourCover::new(&base.f1().embed(&e), &base.f2().embed(&e)).unwrap()
        } else {
            base.clone()
        };
        let n = normalize_infinity(&lifted).unwrap();
        assert_eq!(n.invariants(), base.invariants());
        assert_eq!(n.cover_type(), base.cover_type());
        let up = induct_step(&n).unwrap();
        let (b, u) = (base.invariants(), up.invariants());
        assert_eq!((u.genus, u.two_rank), (b.genus + 3, b.two_rank + 3), "{base}");
        assert_eq!(up.cover_type().entries(), base.cover_type().entries().map(|g| g + 1));
    }
}
