use henon_series::{rat, MultiPoly, TruncSeries, Var};
use proptest::prelude::*;

const N: usize = 5;

fn poly_strategy() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 0..3).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(), |acc, (c, ea, ec)| {
            let t = MultiPoly::int(c)
                .mul(&MultiPoly::var(Var::A).pow(ea))
                .mul(&MultiPoly::var(Var::C).pow(ec));
            acc.add(&t)
        })
    })
}

fn series_strategy() -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(poly_strategy(), N + 1).prop_map(|c| TruncSeries::new("z", N, c))
}

fn unit_strategy() -> impl Strategy<Value = TruncSeries> {
    series_strategy().prop_map(|s| {
        let mut c = s.coeffs().to_vec();
        c[0] = MultiPoly::one();
        TruncSeries::new("z", N, c)
    })
}

fn reversible_strategy() -> impl Strategy<Value = TruncSeries> {
    (series_strategy(), 1i64..=4).prop_map(|(s, lin)| {
        let mut c = s.coeffs().to_vec();
        c[0] = MultiPoly::zero();
        c[1] = MultiPoly::int(lin);
        TruncSeries::new("z", N, c)
    })
}

fn nilpotent_strategy() -> impl Strategy<Value = TruncSeries> {
    series_strategy().prop_map(|s| {
        let mut c = s.coeffs().to_vec();
        c[0] = MultiPoly::zero();
        TruncSeries::new("z", N, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mul_commutes(a in series_strategy(), b in series_strategy()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn mul_associates(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn integer_power_matches_product(s in unit_strategy()) {
        let sq = s.pow_rational(&rat(2, 1)).unwrap();
        prop_assert_eq!(sq, s.mul(&s).unwrap());
    }

    #[test]
    fn cube_root_inverts_cube(s in unit_strategy()) {
        let r = s.pow_rational(&rat(1, 3)).unwrap();
        prop_assert_eq!(r.pow_rational(&rat(3, 1)).unwrap(), s);
    }

    #[test]
    fn reversion_is_inverse(f in reversible_strategy()) {
        let g = f.reverse().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), TruncSeries::identity("z", N));
        prop_assert_eq!(g.compose(&f).unwrap(), TruncSeries::identity("z", N));
        prop_assert_eq!(g.reverse().unwrap(), f);
    }

    #[test]
    fn compose_is_ring_map(a in series_strategy(), b in series_strategy(), g in nilpotent_strategy()) {
        let l = a.mul(&b).unwrap().compose(&g).unwrap();
        let r = a.compose(&g).unwrap().mul(&b.compose(&g).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn derivative_integral_roundtrip(s in series_strategy()) {
        let back = s.derivative().integrate();
        prop_assert!(back.coeff(0).is_zero());
        for k in 1..=N {
            prop_assert_eq!(back.coeff(k), s.coeff(k));
        }
        prop_assert_eq!(s.integrate().derivative(), s);
    }

    #[test]
    fn truncation_never_exceeds_order(a in series_strategy(), b in series_strategy()) {
        let p = a.mul(&b).unwrap();
        prop_assert_eq!(p.order(), N);
        prop_assert_eq!(p.coeffs().len(), N + 1);
    }
}
