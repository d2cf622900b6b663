use bohmex::bohm::{
    advance_trajectory, ensemble_energies, heun_step, local_kinetic, local_velocity, quantum_potential, velocity_field,
    LocalEnergies, Trajectory, TrajectoryEnsemble,
};
use bohmex::exchange::{run_shared_ensemble, EnsembleConfig};
use bohmex::field::WaveField1D;
use bohmex::gaussian::{free_gaussian, free_spreading_factor};
use bohmex::grid::Grid1D;
use bohmex::packet::{build_packet, GaussianPacketSpec};
use bohmex::sampling::sample_initial_positions;
use bohmex::tdse::{Potential1D, Propagator1D, PropagatorConfig};
use bohmex::units::UnitSystem;
use bohmex::{Error, Species};

fn units() -> UnitSystem<f64> {
    UnitSystem::free_electron()
}

fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

#[test]
fn plane_wave_velocity_is_uniform() {
    let u = units();
    let g = Grid1D::new(-50.0, 50.0, 4001).unwrap();
    let spec = GaussianPacketSpec::from_energy(0.0, 0.01, 1.0, 5.0, &u);
    let psi = build_packet(&spec, &g).unwrap();
    let v0 = u.velocity_of_k(spec.k0);
    for (i, s) in velocity_field(&psi, &u).iter().enumerate() {
        if (g.x(i)).abs() < 15.0 {
            let v = s.value().expect("off node");
            assert!((v / v0 - 1.0).abs() < 1e-8, "{} {}", g.x(i), v);
        }
    }
}

#[test]
fn real_field_has_zero_velocity() {
    let u = units();
    let g = Grid1D::new(-50.0, 50.0, 1001).unwrap();
    let psi = build_packet(&GaussianPacketSpec::from_k(0.0, 0.0, 5.0, &u), &g).unwrap();
    assert!(velocity_field(&psi, &u)
        .iter()
        .all(|s| s.value().is_none_or(|v| v == 0.0)));
}

#[test]
fn spreading_packet_velocity() {
    let u = units();
    let g = Grid1D::new(-200.0, 200.0, 4001).unwrap();
    let sigma = 10.0;
    let spec = GaussianPacketSpec::from_k(0.0, 0.0, sigma, &u);
    let t = 300.0;
    let psi = WaveField1D::from_fn(g, t, |x| free_gaussian(&spec, &u, t, x));
    let w = u.hbar_over_m() / (sigma * sigma);
    for (i, s) in velocity_field(&psi, &u).iter().enumerate() {
        let x = g.x(i);
        if x.abs() > 0.5 && x.abs() < 40.0 {
            let exact = x * t * w * w / (1.0 + (w * t).powi(2));
            let v = s.value().unwrap();
            assert!((v / exact - 1.0).abs() < 0.01, "{x} {v} {exact}");
        }
    }
}

#[test]
fn quantum_potential_examples() {
    let u = units();
    let g = Grid1D::new(-100.0, 100.0, 2001).unwrap();
    let sigma = 10.0;
    let psi = build_packet(&GaussianPacketSpec::from_k(0.0, 0.8, sigma, &u), &g).unwrap();
    // R″/R = (x − x0)²/σ⁴ − 1/σ²
    for x in [0.0, 3.3, -7.1, 12.0] {
        let exact = -0.5 * u.hbar2_over_m() * (x * x / sigma.powi(4) - 1.0 / (sigma * sigma));
        let q = quantum_potential(&psi, x, &u).unwrap();
        assert!((q - exact).abs() < 1e-4 * exact.abs().max(1e-3), "{x}: {q} vs {exact}");
    }

    let wide = build_packet(
        &GaussianPacketSpec::from_k(0.0, 1.0, 2000.0, &u),
        &Grid1D::new(-15000.0, 15000.0, 30001).unwrap(),
    )
    .unwrap();
    assert!(quantum_potential(&wide, 10.0, &u).unwrap().abs() < 1e-6);

    let far = quantum_potential(&psi, 95.0, &u).unwrap_err();
    assert!(matches!(far, Error::NodeRegion { .. }));
}

#[test]
fn stationary_state_energy_is_flat() {
    let u = units();
    let g = Grid1D::new(-100.0, 100.0, 2001).unwrap();
    let sigma = 8.0;
    // Ground state of c·x² has σ² = ħ/(mω) with ω = √(2c/m).
    let omega = u.hbar_over_m() / (sigma * sigma);
    let c = 0.5 * u.mass() * omega * omega;
    let psi = build_packet(&GaussianPacketSpec::from_k(0.0, 0.0, sigma, &u), &g).unwrap();
    let well = Potential1D::HarmonicPair { c };
    let e0 = 0.5 * u.hbar * omega;
    for x in [-16.0, -7.5, 0.0, 2.25, 11.0, 16.0] {
        let k = local_kinetic(&psi.jet_at(x), &u);
        let q = quantum_potential(&psi, x, &u).unwrap();
        let v = well.evaluate(x, 0.0, &[0.0]);
        assert!(((k + q + v) / e0 - 1.0).abs() < 0.01, "{x}");
    }
}

#[test]
fn constant_velocity_step_is_exact() {
    let g = Grid1D::new(-100.0, 100.0, 201).unwrap();
    let (x, v, dt) = (1.25, 0.3, 0.5);
    let (xn, v1) = heun_step(x, v, dt, &g, |_| v);
    assert_eq!(xn, x + v * dt);
    assert_eq!(v1, v);
    let mut t = Trajectory::new(0, 0, 0, x, v);
    advance_trajectory(&mut t, |_, _| v, 0.0, dt, &g).unwrap();
    assert_eq!(t.position(), x + v * dt);
    let mut edge = Trajectory::new(0, 0, 0, 99.9, v);
    let e = advance_trajectory(&mut edge, |_, _| 1.0, 0.0, dt, &g).unwrap_err();
    assert!(matches!(e, Error::LeftDomain { .. }));
}

#[test]
fn free_trajectory_follows_scaling_law() {
    let u = units();
    let g = Grid1D::new(-150.0, 250.0, 4001).unwrap();
    let sigma = 10.0;
    let spec = GaussianPacketSpec::from_k(0.0, 0.5, sigma, &u);
    let mut psi = build_packet(&spec, &g).unwrap();
    let dt = 0.5;
    let prop = Propagator1D::new(g, PropagatorConfig::new(dt), u).unwrap();
    let v0 = u.velocity_of_k(spec.k0);
    let mut x = spec.x0 + sigma;
    for s in 1..=1000 {
        let va = local_velocity(&psi.jet_at(x), &u);
        prop.step(&mut psi, &Potential1D::Free, &[]).unwrap();
        x = heun_step(x, va, dt, &g, |xp| local_velocity(&psi.jet_at(xp), &u)).0;
        if s % 100 == 0 {
            let t = s as f64 * dt;
            let expect = sigma * free_spreading_factor(sigma, &u, t);
            let got = x - spec.x0 - v0 * t;
            assert!((got / expect - 1.0).abs() < 0.01, "t={t}: {got} vs {expect}");
        }
    }
}

#[test]
fn stationary_packet_energy_split() {
    let u = units();
    let g = Grid1D::new(-100.0, 100.0, 2001).unwrap();
    let sigma = 10.0;
    let psi = build_packet(&GaussianPacketSpec::from_k(0.0, 0.0, sigma, &u), &g).unwrap();
    let m = 4000;
    let xs = sample_initial_positions(&psi, m, 17).unwrap();
    let ens = TrajectoryEnsemble {
        times: vec![0.0],
        species: Species::Distinguishable,
        n_particles: 1,
        trajectories: xs
            .iter()
            .enumerate()
            .map(|(i, &x)| Trajectory::new(i, 0, 17, x, 0.0))
            .collect(),
    };
    let e = ensemble_energies(&ens, |mem, _| {
        let x = xs[mem];
        LocalEnergies {
            k: vec![local_kinetic(&psi.jet_at(x), &u)],
            q: vec![quantum_potential(&psi, x, &u).ok()],
            v: 0.0,
        }
    })
    .unwrap();
    let q_exact = u.hbar2_over_m() / (4.0 * sigma * sigma);
    assert!(e[0].k_per_particle[0].abs() < 1e-12);
    // Monte Carlo error of ⟨Q⟩: sd of (ħ²/2m)x²/σ⁴ is √2·q_exact.
    let err = 2f64.sqrt() * q_exact / (m as f64).sqrt();
    assert!((e[0].q_per_particle[0] - q_exact).abs() < 3.0 * err);
    assert!((e[0].total - q_exact).abs() < 3.0 * err);

    let small = TrajectoryEnsemble {
        trajectories: ens.trajectories[..50].to_vec(),
        ..ens.clone()
    };
    let r = ensemble_energies(&small, |_, _| LocalEnergies {
        k: vec![0.0],
        q: vec![Some(0.0)],
        v: 0.0,
    });
    assert!(matches!(r, Err(Error::TooFewSamples { m: 50, .. })));
}

#[test]
fn ensemble_energy_is_conserved_and_positions_track_density() {
    let u = units();
    let g = Grid1D::new(-200.0, 200.0, 2001).unwrap();
    let spec = GaussianPacketSpec::from_energy(-40.0, 0.05, 1.0, 12.0, &u);
    let dt = 0.5;
    let prop = Propagator1D::new(g, PropagatorConfig::new(dt), u).unwrap();
    let m = 100_000;
    let starts: Vec<Vec<f64>> = sample_initial_positions(&build_packet(&spec, &g).unwrap(), m, 31)
        .unwrap()
        .into_iter()
        .map(|x| vec![x])
        .collect();
    let cfg = EnsembleConfig {
        n_steps: 400,
        stride: 400,
        seed: 31,
    };
    let run = run_shared_ensemble(&[spec], Species::Fermion, &Potential1D::Free, &prop, &starts, &cfg).unwrap();
    let e = &run.energies;
    let exact = spec.mean_kinetic(&u);
    for b in e {
        assert!((b.total / exact - 1.0).abs() < 0.01, "{} {}", b.time, b.total);
    }

    let mut psi = build_packet(&spec, &g).unwrap();
    for _ in 0..400 {
        prop.step(&mut psi, &Potential1D::Free, &[]).unwrap();
    }
    let mut reference = sample_initial_positions(&psi, m, 99).unwrap();
    let mut finals: Vec<f64> = run
        .ensemble
        .trajectories
        .iter()
        .map(|t| *t.positions.last().unwrap())
        .collect();
    let d = ks_statistic(&mut finals, &mut reference);
    let crit = 1.628 * (2.0 / m as f64).sqrt();
    assert!(d < crit, "D = {d} vs {crit}");
}
