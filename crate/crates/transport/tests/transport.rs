use bohmex_transport::*;

fn device(bias: f64) -> DeviceConfig {
    DeviceConfig {
        bias,
        population_cap: 64,
        ..DeviceConfig::default()
    }
}

#[test]
fn charge_bookkeeping_holds_every_step() {
    let run = run_transport(&device(0.1), Interactions::WI, 4000.0, 21).unwrap();
    assert_eq!(run.population.len(), run.stats.steps);
    for p in &run.population {
        assert_eq!(p.injected, p.exited + p.in_flight as u64);
    }
    let s = &run.stats;
    assert_eq!(s.injected, s.exited + s.in_flight as u64);
    let net = s.forward_crossings as f64 - s.backward_crossings as f64;
    assert!((run.current.integrated_charge() - net).abs() < 1e-9);
    assert!(run.flights.iter().all(|f| f.t_out > f.t_in));
    assert!(run.current.mean_current > 0.0);
}

#[test]
fn identical_seeds_reproduce_records() {
    for inter in [Interactions::CI, Interactions::EI] {
        let a = run_transport(&device(0.05), inter, 1200.0, 8).unwrap();
        let b = run_transport(&device(0.05), inter, 1200.0, 8).unwrap();
        assert_eq!(a.current, b.current);
        assert_eq!(a.flights, b.flights);
        assert_eq!(a.stats, b.stats);
    }
}

#[test]
fn injection_sequence_is_shared_across_interactions() {
    let a = run_transport(&device(0.0), Interactions::WI, 1500.0, 4).unwrap();
    let b = run_transport(&device(0.0), Interactions::CI, 1500.0, 4).unwrap();
    assert_eq!(a.stats.injected, b.stats.injected);
    assert_eq!(
        a.population.iter().map(|p| p.injected).collect::<Vec<_>>(),
        b.population.iter().map(|p| p.injected).collect::<Vec<_>>()
    );
}

#[test]
fn population_cap_is_enforced() {
    let cfg = DeviceConfig {
        population_cap: 3,
        ..DeviceConfig::default()
    };
    assert!(matches!(
        run_transport(&cfg, Interactions::WI, 3000.0, 1),
        Err(TransportError::PopulationOverflow { cap: 3, .. })
    ));
}

#[test]
fn zero_bias_independent_electrons_are_never_reflected() {
    let run = run_transport(&device(0.0), Interactions::WI, 6000.0, 13).unwrap();
    let d = dwell_statistics(&run.flights);
    assert!(d.count > 50, "{} flights", d.count);
    assert_eq!(d.s_to_s, 0.0);
    assert_eq!(d.d_to_d, 0.0);
    assert!((d.s_to_d - 0.5).abs() < 0.15, "{d:?}");
    assert!((d.d_to_s - 0.5).abs() < 0.15, "{d:?}");
}

#[test]
fn zero_bias_exchange_reflects_electrons() {
    let run = run_transport(&device(0.0), Interactions::EI, 3000.0, 13).unwrap();
    let d = dwell_statistics(&run.flights);
    assert!(d.reflected() > 0.0, "{d:?}");
}

#[test]
fn invalid_time_rejected() {
    assert!(matches!(
        run_transport(&device(0.0), Interactions::WI, 0.0, 1),
        Err(TransportError::InvalidConfig(_))
    ));
}
