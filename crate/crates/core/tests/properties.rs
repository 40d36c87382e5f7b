// SPDX-License-Identifier: Apache-2.0

use infoquant::eigensolver::{ground_state, square_well_ground_energy, SquareWellGround};
use infoquant::fitting::{
    fit_gaussian, fit_laplace, gaussian_mle, laplace_mle, log_returns, negative_log_likelihood,
    Bounds, Histogram, ModelParams, NelderMead, ReturnSeries,
};
use infoquant::grid::{amplitude_from_density, density_from_amplitude, DensityOnGrid, Grid};
use infoquant::models::{GaussianModel, LaplaceModel};
use infoquant::potentials::{
    multipliers_from_oscillator, oscillator_from_multipliers, OscillatorParams,
    PolynomialPotential, SquareWellPotential,
};
use proptest::prelude::*;

fn mixture(grid: Grid<f64>, w: f64, m1: f64, s1: f64, m2: f64, s2: f64) -> DensityOnGrid<f64> {
    DensityOnGrid::from_fn(grid, |x| {
        w * (-(x - m1).powi(2) / (2.0 * s1 * s1)).exp() / s1
            + (1.0 - w) * (-(x - m2).powi(2) / (2.0 * s2 * s2)).exp() / s2
    })
    .unwrap()
}

fn omega_of(p: &ModelParams) -> f64 {
    match p {
        ModelParams::Gaussian { omega } => *omega,
        _ => unreachable!(),
    }
}

fn lambda_of(p: &ModelParams) -> f64 {
    match p {
        ModelParams::Laplace { lambda } => *lambda,
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_idempotent(scale in 0.01f64..100.0, w in 0.0f64..1.0, m in -2.0f64..2.0, s in 0.3f64..1.5) {
        let g = Grid::symmetric(12.0, 2001).unwrap();
        let d = mixture(g, w, m, s, -m, 1.0);
        let raw = DensityOnGrid::new(g, d.values().iter().map(|v| v * scale).collect()).unwrap();
        let once = raw.normalize().unwrap();
        prop_assert!((once.mass() - 1.0).abs() < 1e-9);
        prop_assert_eq!(once.normalize().unwrap(), once);
    }

    #[test]
    fn amplitude_round_trip(w in 0.0f64..1.0, m in -2.0f64..2.0, s in 0.3f64..1.5) {
        let g = Grid::symmetric(12.0, 1001).unwrap();
        let d = mixture(g, w, m, s, 0.5, 0.8).normalize().unwrap();
        let back = density_from_amplitude(&amplitude_from_density(&d));
        for (a, b) in d.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300) || (a - b).abs() < 1e-300);
        }
    }

    #[test]
    fn cramer_rao_holds_for_mixtures(w in 0.0f64..1.0, m in -3.0f64..3.0, s1 in 0.3f64..1.5, s2 in 0.3f64..1.5) {
        let g = Grid::symmetric(15.0, 4001).unwrap();
        let d = mixture(g, w, m, s1, -m, s2).normalize().unwrap();
        prop_assert!(d.cramer_rao_product() >= 1.0 - 1e-3, "{}", d.cramer_rao_product());
    }

    #[test]
    fn translation_invariance(shift in -200isize..200, omega in 0.5f64..4.0) {
        let g = Grid::symmetric(20.0, 8001).unwrap();
        let d = DensityOnGrid::from_fn(g, |x| (omega / std::f64::consts::PI).sqrt() * (-omega * x * x).exp()).unwrap();
        let moved = d.shifted(shift);
        prop_assert!((moved.fisher_information() - d.fisher_information()).abs() <= 1e-9 * d.fisher_information());
    }

    #[test]
    fn scaling_covariance(c in 0.2f64..5.0, w in 0.0f64..1.0, m in -2.0f64..2.0) {
        let g = Grid::symmetric(12.0, 2001).unwrap();
        let f = |x: f64| w * (-(x - m).powi(2)).exp() + (1.0 - w) * (-2.0 * (x + m).powi(2)).exp();
        let d = DensityOnGrid::from_fn(g, f).unwrap().normalize().unwrap();
        let gc = g.scaled(c).unwrap();
        let dc = DensityOnGrid::from_fn(gc, |x| f(x / c) / c).unwrap().normalize().unwrap();
        prop_assert!((dc.fisher_information() * c * c / d.fisher_information() - 1.0).abs() < 1e-6);
        prop_assert!((dc.variance() / (c * c) / d.variance() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oscillator_potential_matches_direct_form(omega in 0.2f64..5.0, e1 in -0.3f64..0.3, e2 in 0.001f64..0.3, x in -5.0f64..5.0) {
        let p = OscillatorParams::new(omega, e1 * omega, e2 * omega).unwrap();
        let pot = multipliers_from_oscillator(&p).unwrap();
        let direct = p.potential(x);
        prop_assert!((pot.evaluate(x) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        let back = oscillator_from_multipliers(&pot).unwrap();
        for (a, b) in [(back.omega, p.omega), (back.eps1, p.eps1), (back.eps2, p.eps2)] {
            prop_assert!((a - b).abs() <= 1e-15 * b.abs().max(1e-300) * 4.0);
        }
    }

    #[test]
    fn even_potentials_are_symmetric(omega in 0.2f64..5.0, e2 in 0.0f64..0.3, x in -5.0f64..5.0, a in 0.01f64..3.0, depth in 0.01f64..50.0) {
        let pot = multipliers_from_oscillator(&OscillatorParams::new(omega, 0.0, e2 * omega).unwrap()).unwrap();
        prop_assert_eq!(pot.evaluate(x), pot.evaluate(-x));
        let w = SquareWellPotential::new(a, depth).unwrap();
        prop_assert_eq!(w.evaluate(x), w.evaluate(-x));
        prop_assert_eq!(w.cell_average(x, 0.01), w.cell_average(-x, 0.01));
    }

    #[test]
    fn deeper_wells_bind_harder(a in 0.05f64..2.0, depth in 0.1f64..20.0, extra in 0.01f64..5.0) {
        let shallow = square_well_ground_energy(&SquareWellPotential::new(a, depth).unwrap());
        let deep = square_well_ground_energy(&SquareWellPotential::new(a, depth + extra).unwrap());
        prop_assert!(deep > shallow);
    }

    #[test]
    fn histograms_integrate_to_one(seed in 0u64..1000, n in 50usize..3000) {
        let l = LaplaceModel::new(1.0f64).unwrap();
        let r = ReturnSeries::synthetic(&l, n, seed).unwrap();
        let h = Histogram::freedman_diaconis(r.values()).unwrap();
        prop_assert!((h.mass() - 1.0).abs() < 1e-9);
        prop_assert!((32..=512).contains(&h.bins()));
    }

    #[test]
    fn log_returns_telescope(prices in proptest::collection::vec(0.01f64..1e4, 2..50)) {
        let r = log_returns(&prices).unwrap();
        prop_assert_eq!(r.len(), prices.len() - 1);
        let total: f64 = r.values().iter().sum();
        let want = (prices[prices.len() - 1] / prices[0]).ln();
        prop_assert!((total - want).abs() < 1e-9 * (1.0 + want.abs()) * prices.len() as f64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ground_states_of_even_potentials_are_symmetric_and_nodeless(omega in 0.5f64..3.0, e2 in 0.0f64..0.3) {
        let pot = multipliers_from_oscillator(&OscillatorParams::new(omega, 0.0, e2 * omega).unwrap()).unwrap();
        let grid = Grid::symmetric(10.0 / omega.sqrt(), 2001).unwrap();
        let gs = ground_state(&pot, &grid).unwrap();
        let v = gs.amplitude.values();
        let n = v.len();
        for i in 0..n {
            prop_assert!((v[i] - v[n - 1 - i]).abs() < 1e-9);
        }
        prop_assert_eq!(gs.amplitude.sign_changes(0.0), 0);
        prop_assert!(v.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn square_well_solver_matches_closed_form(a in 0.3f64..2.0, depth in 0.5f64..5.0) {
        let w = SquareWellPotential::new(a, depth).unwrap();
        let closed = SquareWellGround::new(w);
        let grid = closed.default_grid();
        let grid = Grid::symmetric(grid.x_max(), 8001).unwrap();
        let gs = ground_state(&w, &grid).unwrap();
        let numeric = gs.density();
        let sup = numeric
            .values()
            .iter()
            .zip(grid.nodes())
            .map(|(&p, x)| (p - closed.density(x)).abs())
            .fold(0.0, f64::max);
        prop_assert!(sup < 1e-5, "sup {sup}");
    }

    #[test]
    fn fit_scale_equivariance(c in 0.01f64..100.0, seed in 0u64..100) {
        let g = GaussianModel::new(1.0).unwrap();
        let r = ReturnSeries::synthetic(&g, 500, seed).unwrap();
        let rc = r.scaled(c);
        let w = omega_of(&fit_gaussian(&r).unwrap().params);
        let wc = omega_of(&fit_gaussian(&rc).unwrap().params);
        prop_assert!((wc * c * c / w - 1.0).abs() < 1e-9);
        let l = lambda_of(&fit_laplace(&r).unwrap().params);
        let lc = lambda_of(&fit_laplace(&rc).unwrap().params);
        prop_assert!((lc * c / l - 1.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_mle_matches_simplex(seed in 0u64..1000) {
        let r = ReturnSeries::synthetic(&LaplaceModel::new(1.5).unwrap(), 2000, seed).unwrap();
        let x = r.values();
        let bounds = Bounds::new(vec![-5.0], vec![5.0]).unwrap();
        let nm = NelderMead::default();
        let w = gaussian_mle(x).unwrap();
        let best = nm
            .minimize(|t: &[f64]| negative_log_likelihood(&GaussianModel::new(t[0].exp()).unwrap(), x), &[0.0], &[0.3], &bounds)
            .unwrap();
        prop_assert!((best.x[0].exp() / w - 1.0).abs() < 1e-6, "{} vs {w}", best.x[0].exp());
        let l = laplace_mle(x).unwrap();
        let best = nm
            .minimize(|t: &[f64]| negative_log_likelihood(&LaplaceModel::new(t[0].exp()).unwrap(), x), &[0.0], &[0.3], &bounds)
            .unwrap();
        prop_assert!((best.x[0].exp() / l - 1.0).abs() < 1e-6, "{} vs {l}", best.x[0].exp());
    }
}

fn gaussian_fisher_error(n: usize) -> f64 {
    let omega = 1.0;
    let g = Grid::symmetric(10.0, n).unwrap();
    let d = DensityOnGrid::from_fn(g, |x| {
        (omega / std::f64::consts::PI).sqrt() * (-omega * x * x).exp()
    })
    .unwrap();
    (d.fisher_information() - 2.0 * omega).abs()
}

#[test]
fn fisher_refinement_is_second_order() {
    let e: Vec<f64> = [201, 401, 801]
        .iter()
        .map(|&n| gaussian_fisher_error(n))
        .collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{e:?}");
    }
}

#[test]
fn harmonic_energy_refinement_is_second_order() {
    let pot = PolynomialPotential::from_multipliers(vec![0.0f64, -4.0]).unwrap();
    let e: Vec<f64> = [401, 801, 1601]
        .iter()
        .map(|&n| {
            (ground_state(&pot, &Grid::symmetric(10.0, n).unwrap())
                .unwrap()
                .energy
                - 0.5)
                .abs()
        })
        .collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{e:?}");
    }
}

/// RMS relative error over replicates at each sample size, then the
/// log-log slope against `n`.
#[test]
fn estimators_converge_at_root_n() {
    let sizes = [1_000usize, 10_000, 100_000];
    let replicates = 20u64;
    let mut gauss = Vec::new();
    let mut lap = Vec::new();
    let gm = GaussianModel::new(1.0).unwrap();
    let lm = LaplaceModel::new(1.0).unwrap();
    for &n in &sizes {
        let (mut sg, mut sl) = (0.0, 0.0);
        for k in 0..replicates {
            let seed = 1000 * n as u64 + k;
            let w = omega_of(
                &fit_gaussian(&ReturnSeries::synthetic(&gm, n, seed).unwrap())
                    .unwrap()
                    .params,
            );
            let l = lambda_of(
                &fit_laplace(&ReturnSeries::synthetic(&lm, n, seed).unwrap())
                    .unwrap()
                    .params,
            );
            sg += (w - 1.0).powi(2);
            sl += (l - 1.0).powi(2);
        }
        gauss.push((sg / replicates as f64).sqrt());
        lap.push((sl / replicates as f64).sqrt());
    }
    let slope = |e: &[f64]| {
        let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
        let ly: Vec<f64> = e.iter().map(|v| v.ln()).collect();
        let mx = lx.iter().sum::<f64>() / 3.0;
        let my = ly.iter().sum::<f64>() / 3.0;
        lx.iter()
            .zip(&ly)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
    };
    let (sg, sl) = (slope(&gauss), slope(&lap));
    assert!((sg + 0.5).abs() <= 0.1, "gaussian slope {sg}, {gauss:?}");
    assert!((sl + 0.5).abs() <= 0.1, "laplace slope {sl}, {lap:?}");
}
