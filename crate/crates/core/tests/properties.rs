use legquad::basis::{build_recurrence, Side, StencilSet, INVERSE_RESIDUAL_TOL};
use legquad::interp::{fit, fit_with_newton, integral, l2_norm, SampleVector};
use legquad::oracle::{composite_gauss, gauss};
use legquad::{int_naive, int_refined, EngineConfig, NaiveConfig, RefinedConfig, RuleStencil, Status};
use proptest::prelude::*;

fn stencils() -> Vec<&'static RuleStencil> {
    let s = StencilSet::shared();
    s.nested.iter().chain(std::iter::once(&s.fixed)).collect()
}

fn series(st: &RuleStencil, c: &[f64], x: f64) -> f64 {
    st.recurrence().eval_series(c, x)
}

#[test]
fn gram_matrix_is_identity() {
    let rec = build_recurrence(33);
    let mut worst: f64 = 0.0;
    for j in 0..=33 {
        for k in 0..=j {
            let g = gauss(
                |x| {
                    let mut p = vec![0.0; 34];
                    rec.eval_all(x, &mut p);
                    p[j] * p[k]
                },
                -1.0,
                1.0,
                200,
            );
            worst = worst.max((g - f64::from(u8::from(j == k))).abs());
        }
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn stencil_invariants() {
    for st in stencils() {
        let n = st.n;
        let id = &st.p * &st.p_inv;
        let residual = (0..=n)
            .map(|i| (0..=n).map(|j| (id[(i, j)] - f64::from(u8::from(i == j))).abs()).sum::<f64>())
            .fold(0.0, f64::max);
        assert!(residual <= INVERSE_RESIDUAL_TOL);
        assert!(st.cond < 1000.0);
        assert_eq!(st.nodes[0], 1.0);
        assert_eq!(st.nodes[n], -1.0);
        assert!(st.nodes.windows(2).all(|w| w[0] > w[1]));
        for side in Side::BOTH {
            let t = st.transform(side);
            for i in 0..t.nrows() {
                for j in 0..i {
                    assert_eq!(t[(i, j)], 0.0);
                }
            }
        }
        assert!(st.omega.iter().skip(1).all(|&w| w == 0.0));
    }
}

#[test]
fn newton_polynomial_vanishes_at_nodes_and_matches_product() {
    for st in stencils() {
        for v in st.eval_at_nodes(&st.b) {
            assert!(v.abs() < 1e-12);
        }
        // ‖π_n‖∞ = 2^{1-n} on [-1, 1]
        let scale = 2f64.powi(1 - st.n as i32);
        for k in 0..=100 {
            let x = -1.0 + 0.02 * f64::from(k);
            let direct: f64 = st.nodes.iter().map(|xi| x - xi).product();
            assert!((series(st, &st.b, x) - direct).abs() < 1e-12 * scale);
        }
    }
}

fn coeff_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (0usize..5).prop_flat_map(|k| {
        let n = [4, 8, 16, 32, 10][k];
        (Just(k), prop::collection::vec(-1.0f64..1.0, n + 1))
    })
}

fn stencil_by_index(k: usize) -> &'static RuleStencil {
    stencils()[k]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomials_are_reproduced((k, c) in coeff_strategy()) {
        let st = stencil_by_index(k);
        let f: Vec<f64> = st.nodes.iter().map(|&x| series(st, &c, x)).collect();
        let got = fit(&SampleVector::from_raw(&f), st).unwrap();
        let scale = c.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (a, b) in got.c.iter().zip(&c) {
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn bisection_transforms_restrict_polynomials((k, c) in coeff_strategy(), x in -1.0f64..1.0) {
        let st = stencil_by_index(k);
        let left = st.transfer(Side::Left, &c);
        let right = st.transfer(Side::Right, &c);
        let norm1: f64 = c.iter().map(|v| v.abs()).sum();
        prop_assert!((series(st, &left, x) - series(st, &c, 0.5 * (x - 1.0))).abs() <= 1e-12 * norm1.max(1.0));
        prop_assert!((series(st, &right, x) - series(st, &c, 0.5 * (x + 1.0))).abs() <= 1e-12 * norm1.max(1.0));
    }

    #[test]
    fn parseval((k, c) in coeff_strategy()) {
        let st = stencil_by_index(k);
        let l2sq = gauss(|x| series(st, &c, x).powi(2), -1.0, 1.0, 200);
        let cv = legquad::CoeffVector::from_coeffs(c.clone());
        prop_assert!((l2sq.sqrt() - l2_norm(&cv)).abs() <= 1e-10 * l2_norm(&cv).max(1.0));
    }

    #[test]
    fn integral_matches_oracle((k, c) in coeff_strategy(), a in -3.0f64..0.0, w in 0.1f64..4.0) {
        let st = stencil_by_index(k);
        let b = a + w;
        let g = |x: f64| series(st, &c, (2.0 * x - a - b) / (b - a));
        let cv = legquad::CoeffVector::from_coeffs(c.clone());
        let expect = gauss(g, a, b, 40);
        prop_assert!((integral(&cv, a, b) - expect).abs() <= 1e-12 * w * c.iter().map(|v| v.abs()).sum::<f64>().max(1.0));
    }

    #[test]
    fn single_downdate_interpolates_remaining_nodes(j in 0usize..=10, freq in 0.5f64..4.0, shift in -1.0f64..1.0) {
        let st = &StencilSet::shared().fixed;
        let f = |x: f64| (freq * x + shift).sin() + (0.3 * x).exp();
        let mut raw: Vec<f64> = st.nodes.iter().map(|&x| f(x)).collect();
        raw[j] = f64::NAN;
        let s = SampleVector::from_raw(&raw);
        let interp = fit_with_newton(&s, st).unwrap();
        prop_assert_eq!(interp.coeffs.eff_degree, 9);
        for (i, &x) in st.nodes.iter().enumerate() {
            if i != j {
                prop_assert!((series(st, &interp.coeffs.c, x) - f(x)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn integrators_are_scale_equivariant(s in 0.01f64..100.0, k in 1.0f64..20.0) {
        let f = move |x: f64| 1.0 / (1.0 + k * x * x);
        let g = move |x: f64| s * f(x);
        let tau = 1e-8;
        let r1 = int_refined(&f, -1.0, 1.0, tau, &RefinedConfig::default()).unwrap();
        let r2 = int_refined(&g, -1.0, 1.0, s * tau, &RefinedConfig::default()).unwrap();
        prop_assert_eq!(r1.neval, r2.neval);
        prop_assert!((r2.q - s * r1.q).abs() <= 1e-14 * (s * r1.q).abs());
        let n1 = int_naive(&f, -1.0, 1.0, tau, &NaiveConfig::default()).unwrap();
        let n2 = int_naive(&g, -1.0, 1.0, s * tau, &NaiveConfig::default()).unwrap();
        prop_assert_eq!(n1.neval, n2.neval);
        prop_assert!((n2.q - s * n1.q).abs() <= 1e-14 * (s * n1.q).abs());
    }
}

#[test]
fn sign_flip_keeps_divergence_verdict() {
    let f = |x: f64| x.powf(-1.5);
    let g = |x: f64| -x.powf(-1.5);
    let cfg = RefinedConfig {
        engine: EngineConfig {
            max_neval: Some(10_000),
            ..EngineConfig::default()
        },
        ..RefinedConfig::default()
    };
    let a = int_refined(&f, 0.0, 1.0, 1e-3, &cfg).unwrap();
    let b = int_refined(&g, 0.0, 1.0, 1e-3, &cfg).unwrap();
    assert_eq!(a.status, Status::Divergent);
    assert_eq!(b.status, Status::Divergent);
    let ncfg = NaiveConfig {
        engine: cfg.engine,
        ..NaiveConfig::default()
    };
    assert_eq!(
        int_naive(&f, 0.0, 1.0, 1e-3, &ncfg).unwrap().status,
        int_naive(&g, 0.0, 1.0, 1e-3, &ncfg).unwrap().status
    );
}

#[test]
fn heap_cap_does_not_change_smooth_results() {
    let exact = composite_gauss(f64::exp, 0.0, 2.0, 8, 20);
    for cap in [2, 200] {
        let cfg = RefinedConfig {
            engine: EngineConfig {
                heap_cap: cap,
                ..EngineConfig::default()
            },
            ..RefinedConfig::default()
        };
        let r = int_refined(&f64::exp, 0.0, 2.0, 1e-12, &cfg).unwrap();
        assert!((r.q - exact).abs() < 1e-12, "cap {cap}: {}", r.q - exact);
    }
}

#[test]
fn every_run_terminates_under_a_budget() {
    let cfg = EngineConfig {
        max_neval: Some(2_000),
        ..EngineConfig::default()
    };
    let nasty = |x: f64| (1.0 / x).sin() / x;
    let r = int_refined(&nasty, 0.0, 1.0, 1e-12, &RefinedConfig { engine: cfg, ..RefinedConfig::default() }).unwrap();
    assert!(r.neval <= 2_000 + 20);
    let n = int_naive(&nasty, 0.0, 1.0, 1e-12, &NaiveConfig { engine: cfg, ..NaiveConfig::default() }).unwrap();
    assert!(n.neval <= 2_000 + 40);
    assert_ne!(n.status, Status::Converged);
}

#[test]
fn exponential_converges_at_tight_tolerance() {
    let r = int_refined(&f64::exp, 0.0, 1.0, 1e-13, &RefinedConfig::default()).unwrap();
    assert_eq!(r.status, Status::Converged);
    let n = int_naive(&f64::exp, 0.0, 1.0, 1e-13, &NaiveConfig::default()).unwrap();
    assert_eq!(n.status, Status::Converged);
}

#[test]
fn constant_integrand_is_exact() {
    for tau in [1e-3, 1e-12] {
        let r = int_refined(&|_x: f64| 1.0, -2.0, 5.0, tau, &RefinedConfig::default()).unwrap();
        assert!((r.q - 7.0).abs() < 1e-13);
        let n = int_naive(&|_x: f64| 1.0, -2.0, 5.0, tau, &NaiveConfig::default()).unwrap();
        assert!((n.q - 7.0).abs() < 1e-13);
        assert_eq!(n.neval, 33);
    }
}

#[test]
fn odd_cubic_needs_no_subdivision() {
    let n = int_naive(&|x: f64| x * x * x, -1.0, 1.0, 1e-10, &NaiveConfig::default()).unwrap();
    assert!(n.q.abs() < 1e-14);
    assert_eq!(n.neval, 33);
}
