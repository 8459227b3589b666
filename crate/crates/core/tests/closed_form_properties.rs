use cavity_squeeze::closed_form::*;
use cavity_squeeze::SystemParams;
use proptest::prelude::*;

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn params() -> impl Strategy<Value = SystemParams> {
    (0.05f64..5.0, 0.05f64..5.0, 0.0f64..3.0)
        .prop_map(|(gc, k, eps)| SystemParams::from_gamma_c(gc, k, eps).unwrap())
}

proptest! {
    #[test]
    fn atom_populations_are_bounded(p in params()) {
        let a = steady_atom(&p);
        prop_assert_eq!(a.eta_a + a.eta_b, 1.0);
        prop_assert!((0.0..=0.5).contains(&a.eta_a));
        prop_assert!((0.5..=1.0).contains(&a.eta_b));
        prop_assert!(a.sigma >= 0.0);
    }

    #[test]
    fn photon_number_decomposes(p in params()) {
        let n = mean_photons(&p);
        let sum = n.n_emitted - n.n_absorbed + n.n_drive;
        prop_assert!((n.n_bar - sum).abs() <= 1e-12 * n.n_drive.max(1e-300));
        prop_assert!(n.n_emitted <= n.n_absorbed);
        prop_assert!(n.n_bar >= 0.0);
    }

    #[test]
    fn minus_quadrature_sits_at_vacuum(p in params()) {
        let v = quadrature_variances(&p);
        prop_assert_eq!(v.var_minus.to_bits(), v.vac_var.to_bits());
        prop_assert_eq!(v.vac_var.to_bits(), vacuum_variance(&p).to_bits());
        prop_assert!(v.var_plus <= v.vac_var);
    }

    #[test]
    fn uncertainty_relation_holds(p in params()) {
        let (f_a, f_b) = (uncertainty_bound(&p), uncertainty_product(&p));
        prop_assert!(f_b >= f_a);
        let v = quadrature_variances(&p);
        prop_assert!(rel_diff(f_b, v.var_plus.sqrt() * v.var_minus.sqrt()) <= 1e-12);
    }

    #[test]
    fn squeezing_two_routes_agree(p in params()) {
        let s = squeezing(&p);
        prop_assert!((0.0..=0.5).contains(&s));
        let v = quadrature_variances(&p);
        prop_assert!((s - (1.0 - v.var_plus / v.vac_var)).abs() <= 1e-12);
    }

    #[test]
    fn moment_expansion_reproduces_variances(p in params()) {
        let (plus, minus) = field_moments(&p).quadrature_variances();
        let v = quadrature_variances(&p);
        prop_assert!((plus - v.var_plus).abs() <= 1e-12 * v.vac_var);
        prop_assert!((minus - v.var_minus).abs() <= 1e-12 * v.vac_var);
    }

    #[test]
    fn coupling_and_decay_rate_constructions_agree(g in 0.05f64..2.0, k in 0.05f64..5.0, eps in 0.0f64..3.0) {
        let direct = SystemParams::new(g, k, eps).unwrap();
        let via_rate = SystemParams::from_gamma_c(direct.gamma_c(), k, eps).unwrap();
        prop_assert!(rel_diff(direct.g(), via_rate.g()) <= 1e-15);
        prop_assert!(rel_diff(squeezing(&direct), squeezing(&via_rate)) <= 1e-12);
        prop_assert!(rel_diff(steady_atom(&direct).sigma, steady_atom(&via_rate).sigma) <= 1e-12);
    }

    #[test]
    fn optimum_dominates(gc in 0.05f64..5.0, k in 0.05f64..5.0, eps in 0.0f64..3.0) {
        let opt = optimal_drive(gc, k).unwrap();
        prop_assert_eq!(opt.squeezing, 0.5);
        let at_peak = SystemParams::from_gamma_c(gc, k, opt.epsilon).unwrap();
        prop_assert!((squeezing(&at_peak) - 0.5).abs() <= 1e-15);
        let p = SystemParams::from_gamma_c(gc, k, eps).unwrap();
        prop_assert!(squeezing(&p) <= 0.5 + 1e-15);
    }
}

#[test]
fn uncertainty_identity_on_dense_grid() {
    let (gc, k) = (0.4, 0.8);
    for i in 0..1000 {
        let eps = i as f64 / 999.0;
        let p = SystemParams::from_gamma_c(gc, k, eps).unwrap();
        let d = p.denominator();
        let (f_a, f_b) = (uncertainty_bound(&p), uncertainty_product(&p));
        let expected = 64.0 * gc * gc * eps.powi(4) / (k * k * d * d);
        assert!(((f_b * f_b - f_a * f_a) - expected).abs() <= 1e-12 * f_b * f_b, "eps = {eps}");
        if eps > 0.0 {
            assert!(f_b > f_a);
        } else {
            assert_eq!(f_b, f_a);
        }
    }
}

#[test]
fn squeezing_is_unimodal_with_grid_argmax_at_optimum() {
    let (gc, k) = (0.4, 0.8);
    let s: Vec<f64> = (0..=10_000)
        .map(|i| squeezing(&SystemParams::from_gamma_c(gc, k, i as f64 * 1e-4).unwrap()))
        .collect();
    let argmax = (0..s.len()).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap();
    assert!((argmax as f64 * 1e-4 - 0.2).abs() <= 1e-4);
    assert!(s[..=argmax].windows(2).all(|w| w[1] >= w[0]));
    assert!(s[argmax..].windows(2).all(|w| w[1] <= w[0]));
    let far = squeezing(&SystemParams::from_gamma_c(gc, k, 1e4).unwrap());
    assert!(far < 1e-8);
}

#[test]
fn saturation_limit() {
    let a = steady_atom(&SystemParams::from_gamma_c(0.4, 0.8, 1e6).unwrap());
    assert!((a.eta_a - 0.5).abs() < 1e-12 && (a.eta_b - 0.5).abs() < 1e-12);
}
