use angreg::exponents::*;
use proptest::prelude::*;

fn q(s: &str) -> Num {
    s.parse().unwrap()
}

#[test]
fn wave_critical_powers() {
    let w = wave_exponents(3).unwrap();
    assert!((w.p_c.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    assert_eq!(w.p_conf.to_string(), "3");
    assert_eq!(w.p_h.to_string(), "5/2");
    assert_eq!(wave_exponents(2).unwrap().p_conf.to_string(), "5");
}

#[test]
fn p_c_balances_the_two_regularities() {
    for n in 2..=8 {
        let w = wave_exponents(n).unwrap();
        let p = w.p_c.to_f64();
        let (sc, ssb) = (n as f64 / 2.0 - 2.0 / (p - 1.0), 0.5 - 1.0 / p);
        assert!((sc - ssb).abs() < 1e-12, "n = {n}");
        assert!(w.p_c > Num::int(1) && w.p_c < w.p_h && w.p_h < w.p_conf);
        // s_c > s_sb exactly above p_c
        let above = w.p_c + Num::real(1e-3);
        assert!(w.s_c(above) > w.s_sb(above));
        let below = w.p_c - Num::real(1e-3);
        assert!(w.s_c(below) < w.s_sb(below));
    }
}

#[test]
fn schrodinger_critical_powers() {
    for n in 3..=6 {
        let s = schro_exponents(n).unwrap();
        assert!(s.p_l < s.p_l2);
        assert_eq!(s.s_c(s.p_l2), Num::int(0));
        let pl = 1.0 + (2.0 / (n as f64 - 1.0)).sqrt();
        assert!((s.p_l.to_f64() - pl).abs() < 1e-12);
    }
    assert_eq!(schro_exponents(3).unwrap().p_l.to_string(), "2");
    assert_eq!(schro_exponents(3).unwrap().p_l2.to_string(), "7/3");
}

#[test]
fn classical_examples() {
    let inf = Num::infinity();
    assert!(!classical_admissible(Equation::Wave, q("4"), inf, 2).unwrap().admissible);
    assert!(classical_admissible(Equation::Schrodinger, q("2"), q("6"), 3).unwrap().admissible);
    for eq in [Equation::Wave, Equation::Schrodinger] {
        assert!(classical_admissible(eq, inf, q("2"), 3).unwrap().admissible);
        assert!(!classical_admissible(eq, inf, inf, 3).unwrap().admissible);
    }
    assert!(!classical_admissible(Equation::Schrodinger, q("2"), inf, 3).unwrap().admissible);
    assert!(classical_admissible(Equation::Wave, q("0"), q("2"), 3).is_err());
}

#[test]
fn generalized_wave_at_the_sup_endpoint() {
    let inf = Num::infinity();
    let g = generalized_window(Equation::Wave, q("4"), inf, inf, 2).unwrap();
    assert_eq!(g.s_kn, Num::int(0));
    assert_eq!(g.s.to_string(), "3/4");
    // lower edge of the open window
    assert!(g.on_boundary);
    assert!(!g.in_window);
    let inside = generalized_window(Equation::Wave, q("7/2"), inf, inf, 2).unwrap();
    assert!(inside.in_window && !inside.conjectural);
}

#[test]
fn schrodinger_threshold_is_minus_s_at_equal_integrability() {
    for n in 2..=6 {
        for (qs, rs) in [("2", "5"), ("3", "4"), ("5/2", "7"), ("4", "inf")] {
            let g = generalized_window(Equation::Schrodinger, q(qs), q(rs), q(rs), n).unwrap();
            assert_eq!(g.s_kn, -g.s, "n = {n}, q = {qs}, r = {rs}");
            assert!(g.conjectural);
        }
    }
}

#[test]
fn generalized_wave_diagonal_matches_the_critical_range() {
    // q = r: the open window is 2n/(n-1) < r < 2(n+1)/(n-1); together with
    // the classical range it covers r > 2n/(n-1)
    for n in 2..=6u32 {
        let nf = n as f64;
        let (lo, hi) = (2.0 * nf / (nf - 1.0), 2.0 * (nf + 1.0) / (nf - 1.0));
        for i in 1..400 {
            let r = 2.0 + i as f64 * 0.05;
            if (r - lo).abs() < 1e-9 || (r - hi).abs() < 1e-9 {
                continue;
            }
            let x = Num::real(r);
            let g = generalized_window(Equation::Wave, x, x, x, n).unwrap();
            assert_eq!(g.in_window, lo < r && r < hi, "n = {n}, r = {r}");
            let c = classical_admissible(Equation::Wave, x, x, n).unwrap();
            assert_eq!(g.in_window || c.admissible, r > lo, "n = {n}, r = {r}");
        }
    }
}

#[test]
fn classical_edge_is_generalized_lower_edge() {
    // 1/q = (n-1)/2 (1/2 - 1/r) with q = r gives r = 2(n+1)/(n-1)
    for n in 3..=6i64 {
        let r = Num::ratio(2 * (n + 1), n - 1);
        let c = classical_admissible(Equation::Wave, r, r, n as u32).unwrap();
        let g = generalized_window(Equation::Wave, r, r, r, n as u32).unwrap();
        assert!(c.admissible && g.on_boundary && !g.in_window);
        let just_inside = r - Num::ratio(1, 1000);
        assert!(!classical_admissible(Equation::Wave, just_inside, just_inside, n as u32).unwrap().admissible);
        assert!(generalized_window(Equation::Wave, just_inside, just_inside, just_inside, n as u32).unwrap().in_window);
    }
}

#[test]
fn thm18_examples() {
    let t = thm18_params(q("2"), q("0"), 3, q("2")).unwrap();
    assert_eq!((t.s.to_string(), t.s1.to_string()), ("1".into(), "-1/2".into()));
    assert!(!thm18_params(q("3"), q("1"), 3, q("1")).unwrap().valid);
    assert!(thm18_params(q("3"), q("1/2"), 3, q("1")).unwrap().valid);
    // Morawetz reduction: q = 2, alpha = b/2, valid iff 1 < b < n
    for (b, valid) in [("1", false), ("3/2", true), ("5/2", true), ("3", false)] {
        let alpha = q(b) * q("1/2");
        assert_eq!(thm18_params(q("2"), alpha, 3, q("1")).unwrap().valid, valid, "b = {b}");
    }
}

proptest! {
    #[test]
    fn thm18_sum_identity(qn in 2i64..40, qd in 1i64..10, an in -20i64..20, ad in 1i64..10,
                          n in 2u32..9, a in 1i64..4) {
        let qv = Num::ratio(qn, qd).max(Num::int(2));
        let t = thm18_params(qv, Num::ratio(an, ad), n, Num::int(a)).unwrap();
        prop_assert!(t.s.is_exact() && t.s1.is_exact());
        prop_assert_eq!(t.s + t.s1, Num::int(a) / qv - Num::ratio(1, 2));
    }

    #[test]
    fn interpolation_limit_matches_threshold(n in 2u32..8, frac in 1i64..100) {
        let ends = InterpolationEndpoints::for_dimension(n).unwrap();
        let (qv, rv) = if n == 2 {
            // 1/q in [1/4, 1/2)
            (Num::int(1) / (Num::ratio(1, 4) + Num::ratio(frac, 400)), Num::infinity())
        } else {
            let lo = ends.r0.recip();
            let hi = ends.r1.recip();
            (Num::int(2), Num::int(1) / (lo + (hi - lo) * Num::ratio(frac, 100)))
        };
        let it = interpolation_bookkeeping(n, qv, rv, Num::int(0), &ends, Num::int(0)).unwrap();
        let g = generalized_window(Equation::Wave, qv, rv, rv, n).unwrap();
        prop_assert!((it.limit.to_f64() - g.s_kn.to_f64()).abs() < 1e-10);
        prop_assert!(it.condition_met);
    }
}

#[test]
fn strauss_example() {
    let s = strauss_setup(3, q("2.5")).unwrap();
    assert_eq!(s.s_c.to_string(), "1/6");
    assert_eq!(s.s_sb.to_string(), "1/10");
    assert_eq!(s.s1.to_string(), "2/3");
    assert_eq!(s.s2.to_string(), "11/15");
    assert_eq!(s.alpha.to_string(), "4/15");
    assert_eq!(s.moser_a.to_string(), "1/3");
    assert!(s.valid());
    let at_pc = strauss_setup(3, Num::real(1.0 + 2f64.sqrt())).unwrap();
    assert!(!at_pc.gap_ok && !at_pc.p_range_ok);
    assert!(strauss_setup(5, q("2")).is_err());
    assert!(!strauss_setup(3, q("3")).unwrap().p_range_ok);
}

/// Membership of `x = 2/q` in the three constraints, evaluated directly.
fn nls_member(n: f64, p: f64, x: f64) -> bool {
    let c1 = x >= 1.0 / p && x <= 1.0;
    let c2 = x > 2.0 / (p - 1.0) - (n - 1.0) / 2.0 && x < 2.0 / (p - 1.0) - (n + 1.0) / (2.0 * p);
    let c3 = x >= 1.0 / (p - 1.0) - (n - 1.0) / (2.0 * p) && x < 1.0 / (p - 1.0) - (n - 3.0) / (2.0 * p);
    c1 && c2 && c3
}

fn nls_scan(n: u32, p: f64) -> bool {
    (0..=12_000).any(|i| nls_member(n as f64, p, i as f64 * 1e-4))
}

#[test]
fn nls_window_examples() {
    let w = nls_q_window(3, q("2.2")).unwrap();
    assert!(!w.empty && nls_scan(3, 2.2));
    let i = w.intersection.as_ref().unwrap();
    let mid = (i.lo.value + i.hi.value) * q("1/2");
    assert!(w.contains(mid));
    assert!(nls_q_window(3, q("2")).unwrap().empty);
    let p_l2 = 11.0 / 7.0;
    for j in 1..=20 {
        let p = p_l2 - j as f64 * 1e-3;
        assert!(nls_q_window(7, Num::real(p)).unwrap().empty);
        assert!(!nls_scan(7, p));
    }
}

#[test]
fn nls_window_agrees_with_scan_and_dimension_rule() {
    for n in 3..=6u32 {
        let s = schro_exponents(n).unwrap();
        let (pl, pl2) = (s.p_l.to_f64(), s.p_l2.to_f64());
        for j in 1..=20 {
            let p = pl + (pl2 - pl) * j as f64 / 21.0;
            let w = nls_q_window(n, Num::real(p)).unwrap();
            assert!(!w.empty, "n = {n}, p = {p}");
            assert_eq!(w.empty, !nls_scan(n, p), "n = {n}, p = {p}");
        }
        for p in [pl - 0.05, pl2 + 0.05] {
            let w = nls_q_window(n, Num::real(p)).unwrap();
            assert_eq!(w.empty, !nls_scan(n, p), "n = {n}, p = {p}");
        }
    }
}

#[test]
fn intersection_lies_in_every_constraint() {
    for n in 3..=6u32 {
        for j in 0..30 {
            let p = Num::ratio(110 + j * 5, 100);
            let w = nls_q_window(n, p).unwrap();
            if let Some(i) = &w.intersection {
                for c in &w.constraints {
                    assert!(c.lo.value <= i.lo.value && i.hi.value <= c.hi.value);
                }
            }
        }
    }
}

#[test]
fn interpolation_examples() {
    let e3 = InterpolationEndpoints::for_dimension(3).unwrap();
    let it = interpolation_bookkeeping(3, q("2"), q("6"), q("0"), &e3, q("0")).unwrap();
    assert_eq!(it.t_eta.to_string(), "2/3");
    assert_eq!(it.limit.to_string(), "1/3");
    assert_eq!(it.s_kn.to_string(), "1/3");
    let e2 = InterpolationEndpoints::for_dimension(2).unwrap();
    let it = interpolation_bookkeeping(2, q("4"), Num::infinity(), q("0"), &e2, q("0")).unwrap();
    assert_eq!(it.limit, Num::int(0));
    // positive eta pushes the exponent above the threshold
    let it = interpolation_bookkeeping(3, q("2"), q("6"), q("1/20"), &e3, q("1/100")).unwrap();
    assert!(!it.condition_met);
    let it = interpolation_bookkeeping(3, q("2"), q("6"), q("1/1000"), &e3, q("1/100")).unwrap();
    assert!(it.condition_met);
    assert!(interpolation_bookkeeping(3, q("3"), q("6"), q("0"), &e3, q("0")).is_err());
}

#[test]
fn harmse_oberlin_examples() {
    assert!(!harmse_oberlin_check(q("6"), 3).unwrap().in_window);
    let h = harmse_oberlin_check(q("5"), 3).unwrap();
    assert!(h.in_window);
    assert_eq!(h.r.to_string(), "10/7");
    // n = 2 window is (1/12, 1/4)
    assert!(!harmse_oberlin_check(q("12"), 2).unwrap().in_window);
    assert!(harmse_oberlin_check(q("11"), 2).unwrap().in_window);
    assert!(!harmse_oberlin_check(q("4"), 2).unwrap().in_window);
    assert!(harmse_oberlin_check(q("5"), 2).unwrap().in_window);
}

#[test]
fn window_csv_row() {
    let w = nls_q_window(3, q("2.2")).unwrap();
    let row = w.to_csv_row(3, Some(q("2.2")), None, None);
    assert!(row.starts_with("3,11/5,,,2/q,"));
    assert!(row.matches(',').count() >= 7);
}
