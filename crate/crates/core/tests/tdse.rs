use bohmex::field::{WaveField1D, WaveField2D};
use bohmex::gaussian::free_gaussian;
use bohmex::grid::Grid1D;
use bohmex::manybody::build_manybody_2d;
use bohmex::packet::{build_packet, GaussianPacketSpec};
use bohmex::tdse::{
    expectation_1d, expectation_2d, step_1d, Boundary, Observable, Potential1D, Potential2D, Propagator1D,
    Propagator2D, PropagatorConfig, Stencil,
};
use bohmex::units::UnitSystem;
use bohmex::Species;

fn units() -> UnitSystem<f64> {
    UnitSystem::free_electron()
}

fn packet(x0: f64, e0: f64, dir: f64, sigma: f64) -> GaussianPacketSpec<f64> {
    GaussianPacketSpec::from_energy(x0, e0, dir, sigma, &units())
}

#[test]
fn free_variance_follows_dispersion_law() {
    let u = units();
    let g = Grid1D::new(-400.0, 400.0, 2048).unwrap();
    let spec = packet(-100.0, 0.12, 1.0, 25.0);
    let mut psi = build_packet(&spec, &g).unwrap();
    let prop = Propagator1D::new(g, PropagatorConfig::new(0.1), u).unwrap();
    let var0 = psi.position_variance();
    for _ in 0..1000 {
        prop.step(&mut psi, &Potential1D::Free, &[]).unwrap();
    }
    let tau = u.hbar_over_m() * 100.0 / (25.0 * 25.0);
    let expected = var0 * (1.0 + tau * tau);
    assert!((psi.position_variance() / expected - 1.0).abs() < 5e-3);
}

#[test]
fn constant_potential_is_a_global_phase() {
    let u = units();
    let g = Grid1D::new(-300.0, 300.0, 1024).unwrap();
    let spec = packet(0.0, 0.05, 1.0, 25.0);
    let cfg = PropagatorConfig::new(0.5);
    let v0 = 0.037;
    let mut free = build_packet(&spec, &g).unwrap();
    let mut shifted = free.clone();
    step_1d(&mut free, &Potential1D::Free, &cfg, &u, &[]).unwrap();
    step_1d(&mut shifted, &Potential1D::Constant(v0), &cfg, &u, &[]).unwrap();
    let phase = num_complex::Complex::new(0.0, -v0 * 0.5 / u.hbar).exp();
    for (a, b) in free.amplitudes().iter().zip(shifted.amplitudes()) {
        assert!((a * phase - b).norm() < 1e-13);
        assert!((a.norm() - b.norm()).abs() < 1e-13);
    }
}

#[test]
fn harmonic_pair_period() {
    let u = units();
    let c = 1e-3;
    let omega = (2.0 * c / u.mass()).sqrt();
    let sigma = (u.hbar / (u.mass() * omega)).sqrt();
    let g = Grid1D::new(-150.0, 150.0, 1501).unwrap();
    let spec = GaussianPacketSpec::from_k(20.0, 0.0, sigma, &u);
    let mut psi = build_packet(&spec, &g).unwrap();
    let dt = 0.25;
    let prop = Propagator1D::new(g, PropagatorConfig::new(dt), u).unwrap();
    let v = Potential1D::HarmonicPair { c };
    let period = std::f64::consts::TAU / omega;
    let n = (2.2 * period / dt) as usize;
    let mut xs = vec![psi.mean_position()];
    for _ in 0..n {
        prop.step(&mut psi, &v, &[0.0]).unwrap();
        xs.push(psi.mean_position());
    }
    // Upward zero crossings, linearly interpolated.
    let crossings: Vec<f64> = xs
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < 0.0 && w[1] >= 0.0)
        .map(|(i, w)| (i as f64 + w[0] / (w[0] - w[1])) * dt)
        .collect();
    assert!(crossings.len() >= 2);
    let measured = crossings[1] - crossings[0];
    assert!((measured / period - 1.0).abs() < 1e-2, "{measured} vs {period}");
}

#[test]
fn norm_drift_per_step_1d() {
    let u = units();
    let g = Grid1D::new(-400.0, 400.0, 2048).unwrap();
    let mut psi = build_packet(&packet(0.0, 0.02, 1.0, 25.0), &g).unwrap();
    let prop = Propagator1D::new(g, PropagatorConfig::new(0.1), u).unwrap();
    let v = Potential1D::HarmonicPair { c: 1e-6 };
    let mut last = psi.norm();
    for _ in 0..10_000 {
        prop.step(&mut psi, &v, &[10.0]).unwrap();
        let n = psi.norm();
        assert!((n - last).abs() <= 1e-10);
        last = n;
    }
}

#[test]
fn time_reversal_restores_state() {
    let u = units();
    let g = Grid1D::new(-300.0, 300.0, 1201).unwrap();
    let start = build_packet(&packet(-30.0, 0.08, 1.0, 20.0), &g).unwrap();
    let mut psi = start.clone();
    let fwd = Propagator1D::new(g, PropagatorConfig::new(0.5), u).unwrap();
    let back = fwd.reversed();
    let v = Potential1D::Sum(vec![
        Potential1D::HarmonicPair { c: 2e-5 },
        Potential1D::CoulombSoft {
            alpha: 1.0,
            eps_r: 12.9,
        },
    ]);
    for _ in 0..400 {
        fwd.step(&mut psi, &v, &[5.0]).unwrap();
    }
    for _ in 0..400 {
        back.step(&mut psi, &v, &[5.0]).unwrap();
    }
    let err = start
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    assert!(err < 1e-9, "{err}");
}

fn free_error(n_points: usize, dt: f64) -> f64 {
    let u = units();
    let g = Grid1D::new(-200.0, 200.0, n_points).unwrap();
    let spec = packet(-40.0, 0.1, 1.0, 15.0);
    let mut psi = build_packet(&spec, &g).unwrap();
    let prop = Propagator1D::new(g, PropagatorConfig::new(dt), u).unwrap();
    let t_end = 80.0;
    let steps = (t_end / dt).round() as usize;
    for _ in 0..steps {
        prop.step(&mut psi, &Potential1D::Free, &[]).unwrap();
    }
    g.points()
        .zip(psi.amplitudes())
        .map(|(x, a)| (a - free_gaussian(&spec, &u, t_end, x)).norm())
        .fold(0.0, f64::max)
}

#[test]
fn refinement_converges_at_second_order() {
    let coarse = free_error(801, 1.0);
    let fine = free_error(1601, 0.5);
    assert!(coarse / fine >= 3.0, "{coarse} / {fine}");
}

#[test]
fn absorbing_layer_swallows_outgoing_packet() {
    let u = units();
    let g = Grid1D::new(-200.0, 200.0, 2001).unwrap();
    let cfg = PropagatorConfig::new(0.2).with_boundary(Boundary::Cap {
        strength: 0.05,
        width: 80.0,
    });
    let prop = Propagator1D::new(g, cfg, u).unwrap();
    let mut psi = build_packet(&packet(-20.0, 0.1, 1.0, 15.0), &g).unwrap();
    for _ in 0..12_000 {
        prop.step(&mut psi, &Potential1D::Free, &[]).unwrap();
    }
    assert!(psi.norm() < 1e-4, "{}", psi.norm());
}

#[test]
fn cap_narrower_than_ten_cells_is_rejected() {
    let g = Grid1D::new(-10.0, 10.0, 201).unwrap();
    let cfg = PropagatorConfig::new(0.1).with_boundary(Boundary::Cap {
        strength: 0.1,
        width: 0.5,
    });
    assert!(Propagator1D::new(g, cfg, units()).is_err());
}

#[test]
fn separable_2d_equals_tensor_product() {
    let u = units();
    let g1 = Grid1D::new(-150.0, 150.0, 301).unwrap();
    let g2 = Grid1D::new(-120.0, 180.0, 257).unwrap();
    let a = build_packet(&packet(-20.0, 0.05, 1.0, 15.0), &g1).unwrap();
    let b = build_packet(&packet(30.0, 0.03, -1.0, 12.0), &g2).unwrap();
    let v1 = Potential1D::Constant(0.01);
    let v2 = Potential1D::LinearRamp {
        bias: 0.05,
        length: 60.0,
    };
    let cfg = PropagatorConfig::new(0.5);
    let p2 = Propagator2D::new(g1, g2, cfg, u, Potential2D::Separable(v1.clone(), v2.clone())).unwrap();
    let pa = Propagator1D::new(g1, cfg, u).unwrap();
    let pb = Propagator1D::new(g2, cfg, u).unwrap();
    let mut psi = WaveField2D::product(&a, &b);
    let (mut a, mut b) = (a, b);
    for _ in 0..50 {
        p2.step(&mut psi).unwrap();
        pa.step(&mut a, &v1, &[]).unwrap();
        pb.step(&mut b, &v2, &[]).unwrap();
        let reference = WaveField2D::product(&a, &b);
        let err = psi
            .amplitudes()
            .iter()
            .zip(reference.amplitudes())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
        assert!(err < 1e-8);
    }
}

#[test]
fn fermion_antisymmetry_survives_long_runs() {
    let u = units();
    let g = Grid1D::new(-100.0, 100.0, 128).unwrap();
    let psi0 = build_manybody_2d(
        &packet(25.0, 0.01, -1.0, 12.0),
        &packet(-25.0, 0.02, 1.0, 12.0),
        Species::Fermion,
        &g,
        &g,
    )
    .unwrap();
    let prop = Propagator2D::new(
        g,
        g,
        PropagatorConfig::new(1.0),
        u,
        // Pair coupling plus a common trap so nothing reaches the walls.
        Potential2D::Custom {
            f: std::sync::Arc::new(|x1: f64, x2: f64, _t: f64| 1e-5 * (x1 - x2).powi(2) + 2e-5 * (x1 * x1 + x2 * x2)),
            time_independent: true,
            symmetric: true,
        },
    )
    .unwrap();
    let mut psi = psi0;
    let mut last = psi.norm();
    for _ in 0..10_000 {
        prop.step(&mut psi).unwrap();
        let n = psi.norm();
        assert!((n - last).abs() <= 1e-9);
        last = n;
    }
    assert!(psi.max_swap_defect(-1.0) <= 1e-8);
}

#[test]
fn harmonic_2d_conserves_energy() {
    let u = units();
    let g = Grid1D::new(-300.0, 300.0, 1201).unwrap();
    let p1 = packet(50.0, 0.06, -1.0, 25.0);
    let p2 = packet(-50.0, 0.04, 1.0, 25.0);
    let v = Potential2D::Pair(Potential1D::HarmonicPair { c: 1e-6 });
    let mut psi = build_manybody_2d(&p1, &p2, Species::Distinguishable, &g, &g).unwrap();
    let prop = Propagator2D::new(g, g, PropagatorConfig::new(1.0), u, v.clone()).unwrap();
    let h0 = expectation_2d(&psi, Observable::Hamiltonian, &v, Stencil::Compact, &u).unwrap();
    for step in 1..=1500 {
        prop.step(&mut psi).unwrap();
        if step % 250 == 0 {
            let h = expectation_2d(&psi, Observable::Hamiltonian, &v, Stencil::Compact, &u).unwrap();
            assert!((h / h0 - 1.0).abs() < 1e-3, "step {step}: {h} vs {h0}");
        }
    }
}

#[test]
fn gaussian_expectations() {
    let u = units();
    let g = Grid1D::new(-400.0, 400.0, 2048).unwrap();
    let spec = packet(50.0, 0.12, -1.0, 25.0);
    let psi = build_packet(&spec, &g).unwrap();
    let t = expectation_1d(
        &psi,
        Observable::Kinetic(0),
        &Potential1D::Free,
        &[],
        Stencil::Compact,
        &u,
    )
    .unwrap();
    assert!((t / spec.mean_kinetic(&u) - 1.0).abs() < 1e-3);
    let x = expectation_1d(
        &psi,
        Observable::Position(0),
        &Potential1D::Free,
        &[],
        Stencil::Compact,
        &u,
    )
    .unwrap();
    assert!((x - 50.0).abs() < 1e-6);
    let scaled = WaveField1D::from_amplitudes(g, psi.amplitudes().iter().map(|a| a * 2.0).collect(), 0.0).unwrap();
    assert!(expectation_1d(
        &scaled,
        Observable::Position(0),
        &Potential1D::Free,
        &[],
        Stencil::Compact,
        &u
    )
    .is_err());
}

#[test]
fn paper_pair_total_kinetic_energy() {
    let u = units();
    let g = Grid1D::new(-300.0, 300.0, 1536).unwrap();
    let psi = build_manybody_2d(
        &packet(50.0, 0.12, -1.0, 25.0),
        &packet(-50.0, 0.08, 1.0, 25.0),
        Species::Distinguishable,
        &g,
        &g,
    )
    .unwrap();
    let v = Potential2D::Separable(Potential1D::Free, Potential1D::Free);
    let t1 = expectation_2d(&psi, Observable::Kinetic(0), &v, Stencil::Compact, &u).unwrap();
    let t2 = expectation_2d(&psi, Observable::Kinetic(1), &v, Stencil::Compact, &u).unwrap();
    assert!(((t1 + t2) / 0.2 - 1.0).abs() < 5e-3);
}
