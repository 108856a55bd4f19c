use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use xwigner::crosswigner::{
    cw_free_params, cw_screen_params, eval_cw_free, eval_cw_screen, gouy_delta_free, PhaseSpaceField, Provenance,
};
use xwigner::grid::{integrate_1d, Axis};
use xwigner::io;
use xwigner::oracle::{cw_quadrature, wigner_quadrature};
use xwigner::propagation::{free_evolve, free_state};
use xwigner::reconstruction::{inverse_radon, FbpOptions, Projections};
use xwigner::states::{covariance, gamma_from_correlation, make_initial_state, quadrature_variances, GaussianState, PhysicalConfig};

fn cfg(gamma: f64) -> PhysicalConfig {
    PhysicalConfig::neutron().with_gamma(gamma)
}

fn state() -> impl Strategy<Value = GaussianState> {
    (-2.0..2.0f64, 0.5..3.0f64, -2.0..2.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_map(|(c, w, ch, tilt, ph)| GaussianState::normalized(c, w, ch, tilt, ph))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn initial_state_is_normalized(sigma_um in 1.0..50.0f64, gamma in -5.0..5.0f64) {
        let mut c = cfg(gamma);
        c.sigma0 = sigma_um * 1e-6;
        let s = make_initial_state(&c).unwrap();
        let ax = Axis::symmetric(14.0 * c.sigma0, 1001).unwrap();
        let n = integrate_1d(ax, |x| Complex64::new(s.eval(x).norm_sqr(), 0.0), 1e-12, 1.0).unwrap();
        prop_assert!((n.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn evolved_state_stays_normalized(gamma in -3.0..3.0f64, t_ms in 0.0..200.0f64) {
        let c = cfg(gamma);
        let s = free_state(&c, t_ms * 1e-3).unwrap();
        let ax = Axis::symmetric(14.0 * s.width, 1001).unwrap();
        let n = integrate_1d(ax, |x| Complex64::new(s.eval(x).norm_sqr(), 0.0), 1e-12, 1.0).unwrap();
        prop_assert!((n.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn correlation_is_monotone_and_invertible(g1 in -50.0..50.0f64, dg in 1e-3..10.0f64) {
        let r1 = covariance(&cfg(g1)).corr_r;
        let r2 = covariance(&cfg(g1 + dg)).corr_r;
        prop_assert!(r2 > r1);
        prop_assert!(r1.abs() < 1.0);
        assert_relative_eq!(gamma_from_correlation(r1).unwrap(), g1, max_relative = 1e-9, epsilon = 1e-12);
    }

    #[test]
    fn covariance_saturates_robertson_schrodinger(gamma in -20.0..20.0f64) {
        let c = cfg(gamma);
        let r = covariance(&c);
        prop_assert!(r.sigma_xx * r.sigma_pp >= r.sigma_xp.abs());
        let lhs = (r.sigma_xx * r.sigma_pp).powi(2) - r.sigma_xp.powi(2);
        assert_relative_eq!(lhs, c.hbar * c.hbar / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_trace_is_rotation_invariant(gamma in -10.0..10.0f64, th in -3.2..3.2f64) {
        let (a, b) = quadrature_variances(&cfg(gamma), th);
        let (a0, b0) = quadrature_variances(&cfg(gamma), 0.0);
        assert_relative_eq!(a + b, a0 + b0, max_relative = 1e-12);
        prop_assert!(a * b >= 0.25 * (1.0 - 1e-12));
    }

    #[test]
    fn gouy_angle_decreases_for_non_contractive_states(gamma in 0.0..5.0f64, t1 in 0.0..0.2f64, dt in 1e-6..0.2f64) {
        let c = cfg(gamma);
        let a = free_evolve(&c, t1).unwrap().mu;
        let b = free_evolve(&c, t1 + dt).unwrap().mu;
        prop_assert!(b < a);
        prop_assert!(b > -std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn gouy_difference_is_even_in_gamma(gamma in 0.0..5.0f64, t in 1e-3..0.2f64) {
        let a = gouy_delta_free(&cfg(gamma), t).unwrap().abs();
        let b = gouy_delta_free(&cfg(-gamma), t).unwrap().abs();
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn gouy_factor_is_a_pure_phase(gamma in -3.0..3.0f64, t in 1e-3..0.1f64, u in -3.0..3.0f64, v in -3.0..3.0f64) {
        let c = cfg(gamma);
        let p = cw_free_params(&c, t).unwrap();
        let x = u * free_evolve(&c, t).unwrap().b;
        let k = v / c.sigma0;
        let a = eval_cw_free(&p, x, k);
        let b = eval_cw_free(&p.without_gouy(), x, k);
        prop_assert!((a.norm() - b.norm()).abs() <= 1e-12 * a.norm().max(1e-300));
        if b.norm() > 1e-200 {
            let ph = (a / b).arg();
            prop_assert!((ph - p.delta_mu).abs() < 1e-12);
        }
        let s = cw_screen_params(&c.with_times(t, 0.05)).unwrap();
        let a = eval_cw_screen(&s, x, k);
        let b = eval_cw_screen(&s.without_gouy(), x, k);
        prop_assert!((a.norm() - b.norm()).abs() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn swapping_arguments_conjugates(phi in state(), psi in state(), x in -2.0..2.0f64, k in -3.0..3.0f64) {
        let a = cw_quadrature(&phi, &psi, x, k).unwrap();
        let b = cw_quadrature(&psi, &phi, x, k).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn global_phases_factor_out(phi in state(), psi in state(), a in -3.0..3.0f64, b in -3.0..3.0f64, x in -2.0..2.0f64, k in -3.0..3.0f64) {
        let base = cw_quadrature(&phi, &psi, x, k).unwrap();
        let rot = cw_quadrature(&phi.rotated(a), &psi.rotated(b), x, k).unwrap();
        let expect = base * Complex64::from_polar(1.0, b - a);
        prop_assert!((rot - expect).norm() < 1e-12);
    }

    #[test]
    fn wigner_is_real_and_bounded(psi in state(), x in -2.0..2.0f64, k in -3.0..3.0f64) {
        let w = wigner_quadrature(&psi, x, k).unwrap();
        prop_assert!(w.abs() <= 1.0 / std::f64::consts::PI + 1e-12);
    }

    #[test]
    fn backprojection_is_linear(seed in prop::collection::vec(-1.0..1.0f64, 16), a in -2.0..2.0f64) {
        let sigma = Axis::symmetric(4.0, 64).unwrap();
        let theta: Vec<f64> = (0..60).map(|i| -1.55 + i as f64 * 3.1 / 59.0).collect();
        let row = |off: usize, s: f64| (0..4).map(|m| seed[off + m] * (-(s - m as f64 + 1.5).powi(2)).exp()).sum::<f64>();
        let mk = |off: usize| Projections {
            theta: theta.clone(),
            sigma,
            values: theta.iter().enumerate().flat_map(|(i, _)| sigma.values().into_iter().map(move |s| row(off + 4 * (i % 2), s))).collect(),
        };
        let (p, q) = (mk(0), mk(8));
        let sum = Projections { values: p.values.iter().zip(&q.values).map(|(u, v)| a * u + v).collect(), ..p.clone() };
        let pts = [(0.0, 0.0), (1.0, -0.5), (-2.0, 1.5)];
        let o = FbpOptions::default();
        let rp = inverse_radon(&p, &pts, &o).unwrap();
        let rq = inverse_radon(&q, &pts, &o).unwrap();
        let rs = inverse_radon(&sum, &pts, &o).unwrap();
        for i in 0..3 {
            prop_assert!((rs[i] - (a * rp[i] + rq[i])).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_files_round_trip(nx in 2usize..20, nk in 2usize..20, lo in -1e-3..0.0f64, w in 1e-6..1e-3f64, vals in prop::collection::vec(-1e3..1e3f64, 800)) {
        let xa = Axis::new(lo, lo + w, nx).unwrap();
        let ka = Axis::symmetric(1.0 / w, nk).unwrap();
        let values: Vec<Complex64> = (0..nx * nk).map(|i| Complex64::new(vals[2 * i] * 1e-7, vals[2 * i + 1])).collect();
        let f = PhaseSpaceField::new(xa, ka, values, Provenance::Reconstructed).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for fmt in [io::Format::Bin, io::Format::Csv] {
            let path = dir.path().join(format!("f.{}", fmt.extension()));
            io::save_field(&path, &f, fmt, &[]).unwrap();
            let (g, _) = io::load_field(&path).unwrap();
            prop_assert_eq!(&g, &f);
        }
    }
}
