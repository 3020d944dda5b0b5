use super::*;
use crate::congruence::{check_left_cancellative, count_nonzero};
use crate::presentation::is_head_changing;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly(c: &[i64]) -> Polynomial<i64> {
    Polynomial::new(c.to_vec())
}

/// `[x^i] 1/h` by the plain recurrence, independent of the series module.
fn recurrence(h: &[i64], order: usize) -> Vec<i64> {
    let mut c = vec![1i64];
    for i in 1..order {
        let v: i64 = (1..h.len().min(i + 1)).map(|j| -h[j] * c[i - j]).sum();
        c.push(v);
    }
    c
}

fn rows(m: &Matrix<i64>) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

#[test]
fn companion_examples() {
    assert_eq!(rows(&companion_matrix(&poly(&[1, -1])).unwrap()), vec![vec![1]]);
    let h = poly(&[1, -3, 1]);
    let m = companion_matrix(&h).unwrap();
    assert_eq!(rows(&m), vec![vec![3, -1], vec![1, 0]]);
    assert_eq!(*m.pow(2).get(0, 0), 8);
    let c = recurrence(h.coeffs(), 9);
    for (i, &ci) in c.iter().enumerate() {
        assert_eq!(*m.pow(i as u32).get(0, 0), ci);
    }
    assert!(companion_matrix(&poly(&[1])).is_err());
}

#[test]
fn companion_first_row_alternates() {
    // h = 1 - h1 x + h2 x^2 - h3 x^3 + h4 x^4 - h5 x^5
    let (h1, h2, h3, h4, h5) = (7, 2, 5, 3, 11);
    let m = companion_matrix(&poly(&[1, -h1, h2, -h3, h4, -h5])).unwrap();
    assert_eq!(m.row(0), &[h1, -h2, h3, -h4, h5]);
    for i in 1..5 {
        for j in 0..5 {
            assert_eq!(*m.get(i, j), i64::from(j + 1 == i));
        }
    }
}

#[test]
fn change_of_basis_five() {
    let (a, b) = change_of_basis(5).unwrap();
    assert_eq!(
        rows(&a),
        vec![
            vec![1, 1, 1, 1, 1],
            vec![0, 0, 0, 0, 1],
            vec![0, 0, 0, -1, 1],
            vec![0, 0, 1, -2, 1],
            vec![0, -1, 3, -3, 1],
        ]
    );
    assert_eq!(
        rows(&b),
        vec![
            vec![1, -4, 6, -4, 1],
            vec![0, 1, -3, 3, -1],
            vec![0, 1, -2, 1, 0],
            vec![0, 1, -1, 0, 0],
            vec![0, 1, 0, 0, 0],
        ]
    );
}

#[test]
fn change_of_basis_inverts() {
    let (a, b) = change_of_basis(1).unwrap();
    assert_eq!(rows(&a), vec![vec![1]]);
    assert_eq!(rows(&b), vec![vec![1]]);
    for n in 1..=8 {
        let (a, b) = change_of_basis(n).unwrap();
        assert_eq!(&a * &b, Matrix::identity(n), "n = {n}");
        assert_eq!(&b * &a, Matrix::identity(n), "n = {n}");
    }
    assert!(change_of_basis(0).is_err());
}

#[test]
fn l_values_quadratic() {
    let h = poly(&[1, -3, 1]);
    let lv = l_values(&h).unwrap();
    assert_eq!(lv.l, vec![2, 1]);
    assert_eq!(rows(&lv.matrix), vec![vec![2, 1], vec![1, 1]]);
    assert_eq!(*lv.l.last().unwrap(), -h.eval(&1));
    assert!(lv.is_monotone());
}

#[test]
fn l_values_match_degree_five_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let hs: Vec<i64> = (0..=5).map(|i| if i == 0 { 0 } else { rng.gen_range(-9..=9) }).collect();
        let coeffs: Vec<i64> = (0..=5)
            .map(|i| {
                if i == 0 {
                    1
                } else if i % 2 == 0 {
                    hs[i]
                } else {
                    -hs[i]
                }
            })
            .collect();
        if coeffs[5] == 0 {
            continue;
        }
        let (h1, h2, h3, h4, h5) = (hs[1], hs[2], hs[3], hs[4], hs[5]);
        let want =
            vec![h1 - 4, h1 - h5 - 4, h1 - h4 + 3 * h5 - 3, h1 - h3 + 2 * h4 - 3 * h5 - 2, h1 - h2 + h3 - h4 + h5 - 1];
        assert_eq!(l_values(&poly(&coeffs)).unwrap().l, want);
    }
}

#[test]
fn closed_formula_agrees_with_matrix_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let mut c = vec![1i64];
        c.extend((0..n).map(|_| rng.gen_range(-9..=9)));
        if c[n] == 0 {
            c[n] = 1;
        }
        let h = poly(&c);
        let lv = l_values(&h).unwrap();
        let (a, b) = change_of_basis(n).unwrap();
        let l = &(&b * &companion_matrix(&h).unwrap()) * &a;
        assert_eq!(lv.l, l.row(0));
        if n >= 2 {
            assert_eq!(*lv.l.last().unwrap(), -h.eval(&1), "{h}");
        }
        assert_eq!(lv.l[0], -c[1] - n as i64 + 1, "{h}");
        for i in 1..n {
            for j in 0..n {
                assert_eq!(*l.get(i, j), i64::from(j <= i));
            }
        }
    }
}

fn is_type2(c: &[i64]) -> bool {
    let h = poly(c);
    classify_roots(&h).unwrap().verdict == RootVerdict::TypeII && factor_over_z(&h).unwrap().len() == 1
}

/// Irreducible type II quadratics and cubics with small coefficients.
fn type2_samples(max_h1: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in 1..=max_h1 {
        for b in -6i64..=6 {
            for c in -3i64..=3 {
                let v = if c == 0 { vec![1, -a, b] } else { vec![1, -a, b, c] };
                if *v.last().unwrap() != 0 && is_type2(&v) {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn type2_sample_pool_is_nontrivial() {
    let pool = type2_samples(6);
    assert!(pool.iter().any(|v| v.len() == 3));
    assert!(pool.iter().any(|v| v.len() == 4));
}

#[test]
fn monotone_for_type2_inputs() {
    for c in type2_samples(12) {
        let h = poly(&c);
        if recurrence(&c, 10).iter().any(|&x| x < 0) {
            continue;
        }
        assert!(l_values(&h).unwrap().is_monotone(), "{h}");
    }
}

#[test]
fn type2_golden_ratio_example() {
    let h = poly(&[1, -3, 1]);
    let p = build_type2_monoid(&h).unwrap();
    assert_eq!(p.alphabet().names(), &["a", "b", "c"]);
    assert_eq!(p.equations().len(), 1);
    let (l, r) = &p.equations()[0];
    assert_eq!(p.alphabet().render(l), "c a");
    assert_eq!(p.alphabet().render(r), "a a");
    assert!(p.validate().head_changing);
    let counts: Vec<u64> = (0..=4).map(|k| count_nonzero(&p, k).unwrap()).collect();
    assert_eq!(counts, vec![1, 3, 8, 21, 55]);
}

#[test]
fn type2_four_way_agreement() {
    let mut checked = 0;
    for c in type2_samples(4) {
        let h = poly(&c);
        let p = build_type2_monoid(&h).unwrap();
        assert_eq!(p.alphabet().len() as i64, -c[1], "{h}");
        assert!(p.validate().head_changing || p.equations().is_empty());
        let hm = companion_matrix(&h).unwrap();
        let lm = l_values(&h).unwrap().matrix;
        let series = series_reciprocal(&h, 7).unwrap().into_vec();
        let counts = Engine::default().layer_counts(&p, 6).unwrap();
        for i in 0..=6 {
            let via_h = *hm.pow(i as u32).get(0, 0);
            let via_l: i64 = lm.pow(i as u32).column(0).iter().sum();
            assert_eq!(series[i], via_h, "{h} at {i}");
            assert_eq!(series[i], via_l, "{h} at {i}");
            assert_eq!(series[i], counts[i] as i64, "{h} at {i}");
        }
        checked += 1;
    }
    assert!(checked >= 3);
}

#[test]
fn type2_to_order_eight() {
    let h = poly(&[1, -3, 1]);
    let p = build_type2_monoid(&h).unwrap();
    let counts = Engine::default().pruned().layer_counts(&p, 8).unwrap();
    let want = recurrence(h.coeffs(), 9);
    assert_eq!(counts.iter().map(|&c| c as i64).collect::<Vec<_>>(), want);
}

#[test]
fn type2_routing() {
    assert!(matches!(build_type2_monoid(&poly(&[1, -5, 5])), Err(Error::Routing(_))));
    assert!(matches!(build_type2_monoid(&poly(&[1, -3, 2])), Err(Error::Routing(_))));
}

#[test]
fn type1_example() {
    let h = poly(&[1, -5, 5]);
    let s = series_ratio(&poly(&[1, -1]), &h, 5).unwrap().into_vec();
    assert_eq!(s, vec![1, 4, 15, 55, 200]);
    assert!(is_log_concave(&s));
    let p = build_type1_monoid(&h, 4).unwrap();
    assert_eq!(Engine::default().layer_counts(&p, 4).unwrap(), vec![1, 5, 20, 75, 275]);
    assert!(check_left_cancellative(&p, 4).unwrap().passed());
    assert!(p.equations().iter().all(|(l, r)| is_head_changing(l, r)));
    assert!(matches!(build_type1_monoid(&poly(&[1, -3, 1]), 4), Err(Error::Routing(_))));
}

fn counts_of(cert: &TpCertificate) -> Vec<u64> {
    cert.coefficients.enumerated.clone()
}

#[test]
fn tp_examples() {
    let cert = build_tp_monoid(&poly(&[1, 1]), &poly(&[1, -2]), 5).unwrap();
    assert_eq!(counts_of(&cert), vec![1, 3, 6, 12, 24, 48]);
    assert_eq!(cert.routing[0].route, RouteKind::Linear);

    let cert = build_tp_monoid(&poly(&[1]), &poly(&[1, -3, 2]), 4).unwrap();
    assert_eq!(counts_of(&cert), vec![1, 3, 7, 15, 31]);
    assert_eq!(cert.routing.len(), 2);
    assert_eq!(cert.routing[0].factor, vec![1, -1]);

    let cert = build_tp_monoid(&poly(&[1]), &poly(&[1, -3, 1]), 4).unwrap();
    assert_eq!(counts_of(&cert), vec![1, 3, 8, 21, 55]);
    assert_eq!(cert.routing[0].route, RouteKind::TypeII);

    let cert = build_tp_monoid(&poly(&[1]), &poly(&[1, -5, 5]), 4).unwrap();
    assert_eq!(counts_of(&cert), vec![1, 5, 20, 75, 275]);
    assert_eq!(cert.routing[0].route, RouteKind::TypeI);
}

#[test]
fn tp_mixed_product() {
    // (1 + x)^2 / ((1 - x)(1 - 3x + x^2))
    let g = poly(&[1, 2, 1]);
    let h = &poly(&[1, -1]) * &poly(&[1, -3, 1]);
    let cert = build_tp_monoid(&g, &h, 5).unwrap();
    let want = series_ratio(&g, &h, 6).unwrap().into_vec();
    assert_eq!(cert.coefficients.target, want);
    assert!(verify_certificate(&cert).unwrap().passed());
    let p = cert.parsed_presentation().unwrap();
    assert!(check_left_cancellative(&p, 4).unwrap().passed());
}

#[test]
fn certificates_self_verify() {
    let cert = build_tp_monoid(&poly(&[1, 1]), &poly(&[1, -2]), 5).unwrap();
    let back = TpCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back).unwrap().passed());

    let mut bad = cert.clone();
    bad.coefficients.target[3] += 1;
    let check = verify_certificate(&bad).unwrap();
    assert!(!check.target_matches && !check.passed());

    let mut bad = cert;
    bad.presentation = "generators: a b c\n".into();
    assert!(!verify_certificate(&bad).unwrap().enumeration_matches);
}

#[test]
fn certificate_json_shape() {
    let cert = build_tp_monoid(&poly(&[1]), &poly(&[1, -3, 1]), 3).unwrap();
    let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
    for key in ["g", "h", "routing", "presentation", "depth", "coefficients", "verdict"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["routing"][0]["route"], "type_II");
    assert_eq!(v["coefficients"]["enumerated"], serde_json::json!([1, 3, 8, 21]));
}

#[test]
fn tp_routing_errors() {
    // numerator with a positive root
    assert!(matches!(build_tp_monoid(&poly(&[1, -1]), &poly(&[1, -2]), 3), Err(Error::Routing(_))));
    // denominator factor with a negative root
    assert!(matches!(build_tp_monoid(&poly(&[1]), &poly(&[1, 2]), 3), Err(Error::Routing(_))));
    // complex roots
    assert!(matches!(build_tp_monoid(&poly(&[1]), &poly(&[1, -1, 1]), 3), Err(Error::Routing(_))));
    assert!(build_tp_monoid(&poly(&[1]), &poly(&[1]), 3).is_err());
    assert!(build_tp_monoid(&poly(&[1]), &poly(&[1, -2]), 0).is_err());
}

#[test]
fn deterministic_output() {
    let a = build_tp_monoid(&poly(&[1, 1]), &poly(&[1, -3, 2]), 4).unwrap().to_json();
    let b = build_tp_monoid(&poly(&[1, 1]), &poly(&[1, -3, 2]), 4).unwrap().to_json();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_on_sampled_type2(pick in any::<prop::sample::Index>()) {
        static POOL: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
        let v = pick.get(POOL.get_or_init(|| type2_samples(12)));
        prop_assume!(recurrence(v, 10).iter().all(|&x| x >= 0));
        let lv = l_values(&poly(v)).unwrap();
        prop_assert!(lv.is_monotone(), "{:?} gives {:?}", v, lv.l);
    }
}
