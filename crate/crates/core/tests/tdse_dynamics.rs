use delta_floquet::analysis::{energy_averaged_transmission, well_weights};
use delta_floquet::tdse::*;
use delta_floquet::{BarrierParams, TruncationOptions, Units};

struct Setup {
    well: WellSpec,
    packet: PacketSpec,
    params: BarrierParams,
    t_final: f64,
}

fn setup(eps: f64, omega: f64, levels: Option<usize>) -> Setup {
    let units = Units::default();
    let params = BarrierParams::natural(5.0, eps, omega, 5.0).unwrap();
    let probe = WellSpec::new(40.0, 2).unwrap();
    let packet = PacketSpec::left_half_at_energy(&probe, 5.0, units).unwrap();
    let n = levels.unwrap_or_else(|| default_levels(40.0, &packet, &params));
    let well = WellSpec::new(40.0, n).unwrap();
    let t_final = default_t_final(&well, &packet, units);
    Setup {
        well,
        packet,
        params,
        t_final,
    }
}

fn run(s: &Setup, tol: f64) -> TdseRun {
    let opts = PropagationOptions {
        tol,
        ..Default::default()
    };
    propagate(&s.well, &s.packet, &s.params, s.t_final, &opts).unwrap()
}

#[test]
fn norm_is_conserved_to_ten_times_tol() {
    let tol = 1e-8;
    for omega in [1.0, 5.0] {
        let r = run(&setup(0.9, omega, None), tol);
        assert!(
            r.max_norm_drift <= 10.0 * tol,
            "omega={omega}: drift {:e}",
            r.max_norm_drift
        );
        for s in &r.history {
            assert!((s.norm - 1.0).abs() <= 10.0 * tol);
        }
    }
}

#[test]
fn static_barrier_keeps_populations() {
    let r = run(&setup(0.0, 3.0, None), 1e-8);
    let first = &r.history[0].amplitudes;
    for s in &r.history {
        for (a, b) in first.iter().zip(&s.amplitudes) {
            assert!((a.norm() - b.norm()).abs() < 1e-8);
        }
    }
}

#[test]
fn packet_starts_on_the_left() {
    let r = run(&setup(0.9, 5.0, None), 1e-8);
    assert!(r.history[0].p_right <= 1e-6);
}

#[test]
fn static_barrier_transmits_the_averaged_delta_probability() {
    let s = setup(0.0, 3.0, None);
    let r = run(&s, 1e-8);
    let plateau = find_plateau(&r, &PlateauOptions::default());
    assert!(plateau.found);
    let weights = well_weights(&s.well, &s.packet, &s.params).unwrap();
    let expect = energy_averaged_transmission(&weights, &s.params, 3.0, &TruncationOptions::default()).unwrap();
    assert!(
        (plateau.value / expect - 1.0).abs() < 0.02,
        "{} vs {expect}",
        plateau.value
    );
}

#[test]
fn doubling_the_basis_changes_little() {
    let base = setup(0.9, 5.0, None);
    let n = base.well.n_levels;
    let a = find_plateau(&run(&base, 1e-8), &PlateauOptions::default()).value;
    let b = find_plateau(&run(&setup(0.9, 5.0, Some(2 * n)), 1e-8), &PlateauOptions::default()).value;
    assert!((a / b - 1.0).abs() < 5e-3, "{n} levels: {a}, {} levels: {b}", 2 * n);
}

#[test]
fn collision_happens_at_the_ballistic_crossing_time() {
    let s = setup(0.9, 5.0, None);
    let r = run(&s, 1e-8);
    let plateau = find_plateau(&r, &PlateauOptions::default());
    let units = Units::default();
    let v = units.hbar * s.packet.k_mean / units.mass;
    let crossing = s.well.length / (4.0 * v);
    assert!((crossing_time(&s.packet, units) - crossing).abs() < 1e-12 * crossing);
    let quiet = r.history.iter().rev().find(|x| x.p_right <= 1e-6).unwrap().t;
    let half = r.history.iter().find(|x| x.p_right >= 0.5 * plateau.value).unwrap().t;
    assert!(quiet < crossing);
    assert!(
        (half - crossing).abs() <= 0.5 * crossing,
        "half rise at {half}, crossing {crossing}"
    );
}

#[test]
fn phase_average_uses_a_common_grid() {
    let s = setup(0.9, 5.0, None);
    let avg = propagate_phase_averaged(
        &s.well,
        &s.packet,
        &s.params,
        s.t_final,
        &PropagationOptions::default(),
        4,
    )
    .unwrap();
    assert_eq!(avg.phases.len(), 4);
    assert_eq!(avg.trace.len(), avg.norm.len());
    assert!(avg.max_norm_drift <= 1e-7);
    assert!(avg.plateau(&PlateauOptions::default()).found);
}

#[test]
fn rejects_packets_that_touch_the_barrier() {
    let s = setup(0.9, 5.0, None);
    let wide = PacketSpec::new(s.packet.x0, 40.0 / 16.0, s.packet.k_mean).unwrap();
    assert!(propagate(&s.well, &wide, &s.params, s.t_final, &PropagationOptions::default()).is_err());
}
