mod common;

use common::{p7_k2_params, tiny_params, values, Oracle};
use evasive::intersect::solve_block;
use evasive::{
    gen_params, intersect_set, normalize, AffineSubspace, BlockVariety, Coefficients, EvasiveParams,
    EvasiveSet, FieldCtx, Matrix, Message,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p5_params() -> EvasiveParams {
    // p = 5, k = 1, m = 3
    EvasiveParams::new(5, 1, 3, 3, vec![3, 2, 1], Coefficients::Vandermonde(vec![1, 2, 3]), vec![0]).unwrap()
}

/// Every affine line in the block meets the variety in at most `d_1` points.
#[test]
fn every_line_respects_the_bound() {
    for params in [tiny_params(2), p5_params()] {
        let v = BlockVariety::new(&params).unwrap();
        let oracle = Oracle::new(&params);
        let ctx = v.ctx();
        let bound = params.degrees()[0] as usize;
        let mut worst = 0;
        for offset in oracle.cube(v.m()) {
            for dir in oracle.cube(v.m()) {
                if dir.iter().all(|&d| d == 0) {
                    continue;
                }
                let basis = Matrix::from_rows(ctx, v.m(), vec![ctx.elems(&dir)]).unwrap();
                let h = AffineSubspace::new(ctx.elems(&offset), basis).unwrap();
                let got = solve_block(&v, &h).unwrap();
                let want = oracle.points(&h).into_iter().filter(|x| oracle.member_block(x)).collect::<Vec<_>>();
                assert_eq!(got.iter().map(|x| values(x)).collect::<Vec<_>>(), want);
                worst = worst.max(got.len());
            }
        }
        assert!(worst <= bound, "p={} worst {worst}", params.p());
    }
}

fn arb_params() -> impl Strategy<Value = EvasiveParams> {
    prop_oneof![
        Just(tiny_params(4)),
        Just(p7_k2_params()),
        Just(gen_params(2, 4, 8).unwrap()),
        Just(gen_params(1, 2, 4).unwrap()),
        Just(gen_params(3, 4, 4).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_decode_roundtrip(params in arb_params(), seed in any::<u64>()) {
        let s = EvasiveSet::new(params).unwrap();
        let oracle = Oracle::new(s.params());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg = evasive::listdec::random_message(&s, &mut rng);
        let x = s.encode(&msg).unwrap();
        prop_assert!(oracle.member(&values(&x)));
        prop_assert!(s.member_set(&x).unwrap());
        prop_assert_eq!(s.decode(&x).unwrap(), msg);
    }

    #[test]
    fn membership_agrees_with_oracle(params in arb_params(), raw in prop::collection::vec(any::<u64>(), 8)) {
        let s = EvasiveSet::new(params).unwrap();
        let oracle = Oracle::new(s.params());
        let ctx = s.ctx();
        let x: Vec<_> = raw.iter().cycle().take(s.n()).map(|&v| ctx.elem(v)).collect();
        prop_assert_eq!(s.member_set(&x).unwrap(), oracle.member(&values(&x)));
    }

    #[test]
    fn intersection_matches_enumeration(params in arb_params(), seed in any::<u64>(), through in any::<bool>()) {
        let s = EvasiveSet::new(params).unwrap();
        let oracle = Oracle::new(s.params());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = (seed % (s.params().k() as u64 + 1)) as usize;
        let h = evasive::verify::random_test_subspace(&s, dim, through, &mut rng).unwrap();
        let got: Vec<Vec<u64>> = intersect_set(&s, &h).unwrap().iter().map(|x| values(x)).collect();
        let want = oracle.intersection(&h);
        prop_assert!(want.len() as u128 <= s.params().intersection_bound(dim));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn normalize_preserves_the_subspace(seed in any::<u64>(), n in 1usize..6, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let ctx = FieldCtx::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = (seed as usize) % (n + 1);
        let h = AffineSubspace::random(ctx, n, dim, &mut rng).unwrap();
        let e = normalize(&h);
        let oracle = Oracle { p, k: 0, m: n, degrees: vec![], rows: vec![] };
        prop_assert_eq!(oracle.points(&e.to_subspace()), oracle.points(&h));
        for (i, &j) in e.pivots().iter().enumerate() {
            let mut t = vec![ctx.zero(); dim];
            t[i] = ctx.one();
            prop_assert_eq!(e.apply(&t)[j], ctx.one());
            prop_assert_eq!(e.apply(&vec![ctx.zero(); dim])[j], ctx.zero());
        }
    }

    #[test]
    fn field_axioms(a in 0u64..1_000_003, b in 0u64..1_000_003, c in 0u64..1_000_003) {
        let f = FieldCtx::new(1_000_003).unwrap();
        let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
        prop_assert_eq!((a + b) * c, a * c + b * c);
        prop_assert_eq!(a + b - b, a);
        prop_assert_eq!(a * b, b * a);
        if !a.is_zero() {
            prop_assert_eq!(a * a.inv().unwrap(), f.one());
        }
    }
}

#[test]
fn message_length_is_checked() {
    let s = EvasiveSet::new(gen_params(2, 4, 8).unwrap()).unwrap();
    assert!(s.encode(&Message(s.ctx().elems(&[1, 2, 3]))).is_err());
}
