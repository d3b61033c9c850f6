use pgk_core::phigamma::{frobenius, gamma_act, psi, required_unit_precision, GammaUnit};
use pgk_core::{quadratic_newton_slopes, LaurentSeries, PadicScalar, Valuation};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn terms(dmin: i64, n: i64) -> impl Strategy<Value = Vec<(i64, i128)>> {
    prop::collection::vec((dmin..n, -10_000i128..10_000), 0..12)
}

fn series(p: u64, a: u32, dmin: i64, n: i64, t: &[(i64, i128)]) -> LaurentSeries {
    LaurentSeries::from_terms_with_dmin(p, a, t, n, dmin).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn series_ring_axioms(
        p in prime(), a in 1u32..=8, n in 4i64..40, dmin in -3i64..=0,
        tf in terms(-3, 4), tg in terms(-3, 4), th in terms(-3, 4),
    ) {
        let keep = |t: &Vec<(i64, i128)>| t.iter().copied().filter(|&(d, _)| d >= dmin && d < n).collect::<Vec<_>>();
        let f = series(p, a, dmin, n, &keep(&tf));
        let g = series(p, a, dmin, n, &keep(&tg));
        let h = series(p, a, dmin, n, &keep(&th));
        let l = f.add(&g).unwrap().add(&h).unwrap();
        let r = f.add(&g.add(&h).unwrap()).unwrap();
        prop_assert!(l.agrees(&r));
        prop_assert!(f.add(&g).unwrap().agrees(&g.add(&f).unwrap()));
        prop_assert!(f.mul(&g).unwrap().agrees(&g.mul(&f).unwrap()));
        let l = f.mul(&g.add(&h).unwrap()).unwrap();
        let r = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert!(l.agrees(&r));
        let l = f.mul(&g).unwrap().mul(&h).unwrap();
        let r = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert!(l.agrees(&r));
        prop_assert!(f.sub(&f).unwrap().is_zero_within_precision());
    }

    #[test]
    fn series_precision_monotone(p in prime(), t in terms(-2, 30), u in terms(0, 30), unit in 1i128..50) {
        let hi = series(p, 8, -2, 40, &t);
        let lo = hi.truncate(20).reduce_mod(5);
        let g = series(p, 8, 0, 40, &u);
        let glo = g.truncate(20).reduce_mod(5);
        prop_assert!(hi.mul(&g).unwrap().agrees(&lo.mul(&glo).unwrap()));
        prop_assert!(frobenius(&hi).agrees(&frobenius(&lo)));
        prop_assert!(psi(&hi).agrees(&psi(&lo)));
        let l = required_unit_precision(&hi);
        let gu = GammaUnit::new(p, 1 + p as i128 * unit, l).unwrap();
        prop_assert!(gamma_act(gu, &hi).unwrap().agrees(&gamma_act(gu, &lo).unwrap()));
        let c = (unit % p as i128 == 0) as i128 + unit;
        let w = g.add(&LaurentSeries::from_terms_with_dmin(p, 8, &[(0, c)], 40, 0).unwrap()).unwrap();
        if w.coeff(0).map(|x| x % p != 0).unwrap_or(false) {
            let wl = w.truncate(20).reduce_mod(5);
            prop_assert!(w.inverse().unwrap().agrees(&wl.inverse().unwrap()));
        }
    }

    #[test]
    fn scalar_precision_monotone(p in prime(), x in -100_000i128..100_000, y in -100_000i128..100_000) {
        let xh = PadicScalar::from_int(p, x, 12);
        let yh = PadicScalar::from_int(p, y, 12);
        let xl = PadicScalar::from_int(p, x, 5);
        let yl = PadicScalar::from_int(p, y, 5);
        prop_assert!(xh.add(&yh).unwrap().agrees(&xl.add(&yl).unwrap()));
        prop_assert!(xh.mul(&yh).unwrap().agrees(&xl.mul(&yl).unwrap()));
        prop_assert!(xh.sub(&yh).unwrap().agrees(&xl.sub(&yl).unwrap()));
        if x != 0 {
            prop_assert!(yh.div(&xh).unwrap().agrees(&yl.div(&xl).unwrap()));
        }
    }

    #[test]
    fn scalar_ring_axioms(p in prime(), x in -10_000i128..10_000, y in -10_000i128..10_000, z in -10_000i128..10_000) {
        let s = |n| PadicScalar::from_int(p, n, 10);
        let (a, b, c) = (s(x), s(y), s(z));
        prop_assert!(a.add(&b).unwrap().add(&c).unwrap().agrees(&a.add(&b.add(&c).unwrap()).unwrap()));
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(l.agrees(&r));
        prop_assert!(a.mul(&b).unwrap().agrees(&s(x * y)));
    }

    #[test]
    fn newton_slopes_sum(p in prime(), e in 1u32..=2, o1 in 0i64..8, u1 in 1i128..30, o0 in 0i64..12, u0 in 1i128..30, zero_c1 in any::<bool>()) {
        prop_assume!(u1 % p as i128 != 0 && u0 % p as i128 != 0);
        let c1 = if zero_c1 { PadicScalar::zero(p) } else { PadicScalar::monomial(p, e, o1, u1, 20) };
        let c0 = PadicScalar::monomial(p, e, o0, u0, 20);
        let (s1, s2) = quadratic_newton_slopes(&c1, &c0).unwrap();
        prop_assert!(s1 <= s2);
        match c0.valuation() {
            Valuation::Finite(v) => prop_assert_eq!(s1 + s2, v),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}
