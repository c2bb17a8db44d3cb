use proptest::prelude::*;

use additive_systems::geometry::SubspaceIter;
use additive_systems::groups::SemilinearMap;
use additive_systems::search::{search_max, SearchProblem};
use additive_systems::{Elem, FieldCtx, Matrix, Subfield, Subspace};

const ORDERS: [u32; 8] = [2, 3, 4, 5, 8, 9, 16, 25];

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| FieldCtx::with_order(q).unwrap())
}

fn elems(ctx: &FieldCtx, len: usize) -> impl Strategy<Value = Vec<Elem>> {
    prop::collection::vec((0..ctx.q() as u16).prop_map(Elem), len)
}

/// A field with a random `rows x cols` matrix over it.
fn matrix(rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> impl Strategy<Value = (FieldCtx, Matrix)> {
    (field(), rows, cols).prop_flat_map(|(ctx, k, r)| {
        let data = elems(&ctx, k * r);
        (Just(ctx), data.prop_map(move |d| Matrix::from_flat(k, r, d).unwrap()))
    })
}

fn invertible(ctx: &FieldCtx, n: usize, seed: &[Elem]) -> Matrix {
    // unit lower triangular times unit upper triangular, from the seed
    let mut lo = Matrix::identity(n);
    let mut up = Matrix::identity(n);
    let mut it = seed.iter().cycle();
    for i in 0..n {
        for j in 0..n {
            if j < i {
                lo.set(i, j, *it.next().unwrap());
            } else if j > i {
                up.set(i, j, *it.next().unwrap());
            }
        }
    }
    lo.mul(ctx, &up).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((ctx, v) in field().prop_flat_map(|c| { let e = elems(&c, 3); (Just(c), e) })) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(ctx.add(a, ctx.add(b, c)), ctx.add(ctx.add(a, b), c));
        prop_assert_eq!(ctx.mul(a, ctx.mul(b, c)), ctx.mul(ctx.mul(a, b), c));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Elem::ONE);
        }
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b), 1), ctx.add(ctx.frobenius(a, 1), ctx.frobenius(b, 1)));
        prop_assert_eq!(ctx.frobenius(ctx.mul(a, b), 1), ctx.mul(ctx.frobenius(a, 1), ctx.frobenius(b, 1)));
    }

    #[test]
    fn rref_is_invariant_under_row_operations((ctx, m) in matrix(1..5, 1..7), seed in prop::collection::vec(0u16..25, 16)) {
        let seed: Vec<Elem> = seed.into_iter().map(|x| Elem(x % ctx.q() as u16)).collect();
        let p = invertible(&ctx, m.rows(), &seed);
        let moved = p.mul(&ctx, &m).unwrap();
        prop_assert_eq!(m.rref(&ctx), moved.rref(&ctx));
        let (r, piv) = m.rref(&ctx);
        prop_assert_eq!(r.rref(&ctx).0, r.clone());
        prop_assert_eq!(piv.len(), r.rows());
    }

    #[test]
    fn rank_nullity((ctx, m) in matrix(0..6, 1..7)) {
        let s = Subspace::from_matrix(&ctx, &m);
        let d = s.dual(&ctx);
        prop_assert_eq!(s.dim() + d.dim(), m.cols());
        prop_assert_eq!(d.dual(&ctx), s.clone());
        prop_assert_eq!(s.dim(), m.rank(&ctx));
        for row in d.basis().row_iter() {
            prop_assert!(s.in_hyperplane(&ctx, row).unwrap());
        }
    }

    #[test]
    fn grassmann_identity((ctx, m) in matrix(2..7, 2..6), split in 0usize..7) {
        let k = split.min(m.rows());
        let rows: Vec<&[Elem]> = m.row_iter().collect();
        let u = Subspace::from_rows(&ctx, m.cols(), &rows[..k]).unwrap();
        let w = Subspace::from_rows(&ctx, m.cols(), &rows[k..]).unwrap();
        let sum = u.span(&ctx, &w).unwrap();
        prop_assert_eq!(u.intersect_dim(&ctx, &w).unwrap() + sum.dim(), u.dim() + w.dim());
        prop_assert!(sum.contains(&ctx, &u).unwrap() && sum.contains(&ctx, &w).unwrap());
    }

    #[test]
    fn semilinear_composition((ctx, m) in matrix(1..4, 4..5), seed in prop::collection::vec(0u16..25, 24), e1 in 0u32..4, e2 in 0u32..4) {
        let seed: Vec<Elem> = seed.into_iter().map(|x| Elem(x % ctx.q() as u16)).collect();
        let g = SemilinearMap::new(&ctx, invertible(&ctx, 4, &seed[..12]), e1).unwrap();
        let h = SemilinearMap::new(&ctx, invertible(&ctx, 4, &seed[12..]), e2).unwrap();
        let s = Subspace::from_matrix(&ctx, &m);
        let both = g.then(&ctx, &h).apply(&ctx, &s).unwrap();
        prop_assert_eq!(both, h.apply(&ctx, &g.apply(&ctx, &s).unwrap()).unwrap());
        let back = g.inverse(&ctx).unwrap().apply(&ctx, &g.apply(&ctx, &s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn subfield_coordinates_round_trip(idx in 0u16..256, pair in prop::sample::select(vec![(4u32, 2u32), (8, 2), (16, 2), (16, 4), (9, 3), (25, 5)])) {
        let big = FieldCtx::with_order(pair.0).unwrap();
        let small = FieldCtx::with_order(pair.1).unwrap();
        let sub = Subfield::new(&big, &small).unwrap();
        let x = Elem(idx % big.q() as u16);
        prop_assert_eq!(sub.evaluate(sub.expand(x)), x);
        let y = sub.embed(Elem(idx % small.q() as u16));
        prop_assert_eq!(big.pow(y, small.q() as u64), y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_results_reverify(r in 3usize..5, h in 1usize..3, s in 1u64..4) {
        let ctx = FieldCtx::with_order(2).unwrap();
        let out = search_max(&SearchProblem::new(&ctx, r, h, s)).unwrap();
        let rep = out.best.verify().unwrap();
        prop_assert!(rep.s as u64 <= s);
        prop_assert_eq!(rep.n, out.n_best);
        prop_assert!(out.exhaustive);
    }
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    for (q, r) in [(2u32, 5usize), (3, 4), (4, 3)] {
        let ctx = FieldCtx::with_order(q).unwrap();
        for k in 0..=r {
            let n = SubspaceIter::new(&ctx, r, k).count() as u64;
            assert_eq!(n, additive_systems::geometry::gaussian_binomial(q as u64, r as u32, k as u32));
        }
    }
}
