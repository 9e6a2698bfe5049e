use proptest::prelude::*;

use sp4::cosets::{bruhat_factor, cell_of_int, complete_to_gamma, enumerate_r};
use sp4::ramanujan::{r_closed, r_sum, sigma_pair, LocalCountInput, local_count_bruteforce, local_count_closed};
use sp4::special::gamma::gamma;
use sp4::special::zeta::{lambda_completed, zeta};
use sp4::symplectic::{embed_iwasawa, iwasawa, pluecker, IwasawaPoint, WeylWord};
use sp4::C64;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn cell() -> impl Strategy<Value = WeylWord> {
    prop::sample::select(WeylWord::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reps_round_trip_and_sit_in_their_cell(w in cell(), bound in 1i64..8, pick in any::<prop::sample::Index>()) {
        let reps = enumerate_r(w, bound);
        prop_assume!(!reps.is_empty());
        let (v, _) = &reps[pick.index(reps.len())];
        let g = complete_to_gamma(v, true).unwrap();
        prop_assert!(g.is_integral());
        prop_assert_eq!(&pluecker(&g).unwrap(), v);
        prop_assert_eq!(cell_of_int(v), w);
        let f = bruhat_factor(&g).unwrap();
        prop_assert_eq!(f.w, w);
        let back = f.b1.mul(&f.w.matrix()).mul(&f.d).mul(&f.b2);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn iwasawa_inverts_embedding(
        n1 in -2.0f64..2.0, n2 in -2.0f64..2.0, n4 in -2.0f64..2.0, n5 in -2.0f64..2.0,
        y1 in 0.2f64..5.0, y2 in 0.2f64..5.0,
    ) {
        let p = IwasawaPoint::new(n1, n2, n4, n5, y1, y2);
        let q = iwasawa(&embed_iwasawa(&p)).unwrap();
        for (a, b) in [(p.n1, q.n1), (p.n2, q.n2), (p.n3, q.n3), (p.n4, q.n4), (p.n5, q.n5), (p.y1, q.y1), (p.y2, q.y2)] {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn completed_zeta_is_symmetric(re in -3.0f64..4.0, im in 0.5f64..20.0) {
        let s = C64::new(re, im);
        let a = lambda_completed(s).unwrap();
        let b = lambda_completed(1.0 - s).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn gamma_recurrence(re in -4.5f64..10.0, im in -5.0f64..5.0) {
        let z = C64::new(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3 || z.re > 0.5);
        let lhs = gamma(z + 1.0);
        let rhs = z * gamma(z);
        prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm());
    }

    #[test]
    fn zeta_matches_euler_product_far_right(s in 8.0f64..30.0) {
        let primes = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0];
        let euler: f64 = primes.iter().map(|p| 1.0 / (1.0 - p.powf(-s))).product();
        let z = zeta(C64::new(s, 0.0)).unwrap();
        prop_assert!((z.re - euler).abs() <= 1e-12);
    }

    #[test]
    fn r_closed_is_multiplicative(a in 1i64..9, b in 1i64..9, c in 1i64..9, d in 1i64..9, n1 in -12i64..12, n2 in -12i64..12) {
        prop_assume!(gcd(a * b, c * d) == 1);
        prop_assert_eq!(r_closed(a * c, b * d, n1, n2), r_closed(a, b, n1, n2) * r_closed(c, d, n1, n2));
    }

    #[test]
    fn r_sum_agrees_with_closed(v1 in 1i64..7, v12 in 1i64..7, n1 in -6i64..6, n2 in -6i64..6) {
        let s = r_sum(v1, v12, n1, n2, u64::MAX).unwrap();
        prop_assert!((s.re - r_closed(v1, v12, n1, n2) as f64).abs() < 1e-6);
        prop_assert!(s.im.abs() < 1e-6);
    }

    #[test]
    fn r_closed_sees_frequencies_modulo_the_moduli(v1 in 1i64..10, v12 in 1i64..10, n1 in -20i64..20, n2 in -20i64..20, k in -3i64..3) {
        // shifting a frequency by the full modulus product cannot change the sum
        let m = v1 * v12 * v12;
        prop_assume!(n1 != 0 && n2 != 0 && n1 + k * m != 0 && n2 + k * m != 0);
        prop_assert_eq!(r_closed(v1, v12, n1, n2), r_closed(v1, v12, n1 + k * m, n2 + k * m));
    }

    #[test]
    fn sigma_pair_is_multiplicative(a in 1u64..30, b in 1u64..30, c in 1u64..30, d in 1u64..30, x in -2.0f64..1.0, y in -2.0f64..1.0) {
        prop_assume!(gcd((a * b) as i64, (c * d) as i64) == 1);
        let (x, y) = (C64::new(x, 0.3), C64::new(y, -0.1));
        let whole = sigma_pair(x, y, a * c, b * d).unwrap();
        let parts = sigma_pair(x, y, a, b).unwrap() * sigma_pair(x, y, c, d).unwrap();
        prop_assert!((whole - parts).norm() <= 1e-10 * parts.norm().max(1.0));
    }

    #[test]
    fn local_counts_agree(p in prop::sample::select(vec![2u64, 3, 5]), w1 in 0u32..4, w12 in 0u32..4, dw2 in 0u32..4, dw14 in 0u32..4) {
        let i = LocalCountInput { p, w1, w12, w2: w1.saturating_sub(dw2), w14: w12.saturating_sub(dw14) };
        prop_assert_eq!(local_count_closed(&i), local_count_bruteforce(&i));
    }
}
