use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use kleinvortex::dynamics::{velocities, velocity_single};
use kleinvortex::integrator::{
    integrate, project_to_klein, translational_component, CoverMode, CoverState, IntegratorOptions,
};
use kleinvortex::state::fold_to_chart;
use kleinvortex::{Complex64, Error, KleinState, Vortex};

fn cover(v: &[(f64, f64, f64)], mode: CoverMode) -> CoverState {
    CoverState { mode, vortices: v.iter().map(|&(x, y, g)| Vortex::new(x, y, g)).collect() }
}

fn opts(interval: f64) -> IntegratorOptions {
    IntegratorOptions { sample_interval: interval, ..IntegratorOptions::default() }
}

#[test]
fn projection_examples() {
    let p = |x, y| project_to_klein(&cover(&[(x, y, 1.0)], CoverMode::Torus)).vortices()[0];
    let v = p(0.2, 0.3);
    assert!((v.x - 0.2).abs() < 1e-15 && (v.y - 0.3).abs() < 1e-15 && v.gamma == 1.0);
    let v = p(0.2 + PI, 0.3);
    assert!((v.x - 0.2).abs() < 1e-15 && (v.y + 0.3).abs() < 1e-15 && v.gamma == -1.0);
    let v = p(0.2, 0.3 + PI);
    assert!((v.x - 0.2).abs() < 1e-15 && (v.y - 0.3).abs() < 1e-14 && v.gamma == 1.0);
}

#[test]
fn lone_vortex_moves_on_a_straight_line() {
    let traj = integrate(&cover(&[(0.0, 0.1, 1.0)], CoverMode::Cylinder), 10.0, &opts(0.1)).unwrap();
    let speed = velocity_single(0.1, 1.0);
    for s in &traj.samples {
        assert!((s.lift[0].y - 0.1).abs() <= 1e-10);
        assert!((s.lift[0].x - speed * s.t).abs() <= 1e-9);
    }
}

#[test]
fn vortex_on_the_quarter_line_stays_put() {
    let traj = integrate(&cover(&[(0.3, FRAC_PI_4, 1.0)], CoverMode::Torus), 10.0, &opts(0.5)).unwrap();
    for s in &traj.samples {
        assert!((s.lift[0].z() - Complex64::new(0.3, FRAC_PI_4)).norm() <= 1e-9);
    }
    assert!(translational_component(&traj.samples, 0).unwrap().abs() <= 1e-9);
}

#[test]
fn resting_vortex_has_no_translational_component() {
    let traj = integrate(&cover(&[(0.0, 0.0, 1.0)], CoverMode::Cylinder), 5.0, &opts(0.5)).unwrap();
    assert!(translational_component(&traj.samples, 0).unwrap().abs() <= 1e-9);
}

fn relative_angle(lift: &[Vortex]) -> f64 {
    let d = lift[0].z() - lift[1].z();
    d.im.atan2(d.re)
}

/// Time for a close pair to turn once about its centre, found from a dense
/// run by interpolating the unwrapped relative angle.
fn rotation_period(start: &CoverState) -> f64 {
    let w = velocities(&project_to_klein(start)).unwrap();
    let d = start.vortices[0].z() - start.vortices[1].z();
    let omega = ((w[0] - w[1]) / d).im;
    let rough = 2.0 * PI / omega.abs();
    let traj = integrate(start, 1.2 * rough, &opts(rough / 4000.0)).unwrap();
    let mut turned = 0.0;
    let mut prev = relative_angle(&traj.samples[0].lift);
    for pair in traj.samples.windows(2) {
        let next = relative_angle(&pair[1].lift);
        let step = (next - prev + PI).rem_euclid(2.0 * PI) - PI;
        if (turned + step).abs() >= 2.0 * PI {
            let frac = (2.0 * PI - turned.abs()) / step.abs();
            return pair[0].t + frac * (pair[1].t - pair[0].t);
        }
        turned += step;
        prev = next;
    }
    panic!("pair did not complete a turn");
}

fn close_pair(centre_y: f64) -> CoverState {
    cover(&[(0.1, centre_y + 0.025, 1.0), (0.1, centre_y - 0.025, 1.0)], CoverMode::Cylinder)
}

#[test]
fn pair_without_momentum_rotates_in_place() {
    let start = close_pair(0.0);
    let period = rotation_period(&start);
    let traj = integrate(&start, period, &opts(period / 200.0)).unwrap();
    let centre = |l: &[Vortex]| (l[0].z() + l[1].z()) / 2.0;
    let c0 = centre(&traj.samples[0].lift);
    for s in &traj.samples {
        assert!((centre(&s.lift) - c0).norm() <= 1e-6);
    }
    for k in 0..2 {
        assert!(translational_component(&traj.samples, k).unwrap().abs() <= 1e-5);
    }
}

#[test]
fn pair_with_momentum_drifts_like_a_lone_vortex() {
    let start = close_pair(0.3);
    let period = rotation_period(&start);
    let traj = integrate(&start, period, &opts(period / 200.0)).unwrap();
    assert!((traj.samples[0].momentum - 0.6).abs() < 1e-12);
    let shift = translational_component(&traj.samples, 0).unwrap();
    let expected = velocity_single(0.3, 2.0) * period;
    assert!(shift != 0.0 && shift.signum() == expected.signum(), "{shift} {expected}");
}

#[test]
fn wraps_across_the_seam_are_logged() {
    // a tight pair straddling y = π/2 keeps crossing the seam
    let start = cover(&[(0.1, FRAC_PI_2 - 0.01, 1.0), (0.1, -FRAC_PI_2 + 0.04, 1.0)], CoverMode::Torus);
    let traj = integrate(&start, 0.2, &opts(0.002)).unwrap();
    assert!(traj.collision.is_none());
    assert!(!traj.momentum_jumps.is_empty());
    let c0 = traj.samples[0].momentum;
    for s in &traj.samples {
        assert!((traj.unwrapped_momentum(s) - c0).abs() <= 1e-10);
        for v in &s.klein {
            assert!((-FRAC_PI_2..FRAC_PI_2).contains(&v.y));
        }
    }
    for v in &traj.final_state.vortices {
        assert!((-FRAC_PI_2..FRAC_PI_2).contains(&v.y));
    }
    for j in &traj.momentum_jumps {
        assert!((j.delta.abs() - PI).abs() <= 1e-12);
    }
}

#[test]
fn sampled_velocities_match_the_projected_state() {
    let start = cover(&[(0.4, 0.3, 1.0), (-0.9, -1.1, -0.7), (1.3, 0.9, 1.2)], CoverMode::Torus);
    let traj = integrate(&start, 5.0, &opts(0.25)).unwrap();
    for s in &traj.samples {
        let chart = velocities(&KleinState::new(s.klein.clone()).unwrap()).unwrap();
        for ((w, c), v) in s.velocities.iter().zip(&chart).zip(&s.lift) {
            let c = if fold_to_chart(*v).1 { c.conj() } else { *c };
            assert!((w - c).norm() <= 1e-12);
        }
    }
}

#[test]
fn three_vortex_energy_and_momentum_are_conserved() {
    let start = cover(&[(0.4, 0.3, 1.0), (-0.9, -1.1, -0.7), (1.3, 0.9, 1.2)], CoverMode::Cylinder);
    let traj = integrate(&start, 100.0, &opts(1.0)).unwrap();
    assert!(traj.collision.is_none());
    let (h0, c0) = (traj.samples[0].hamiltonian, traj.samples[0].momentum);
    for s in &traj.samples {
        assert!((s.hamiltonian - h0).abs() <= 1e-8 * (1.0 + h0.abs()));
        assert!((s.momentum - c0).abs() <= 1e-10);
    }
    assert!((traj.samples.last().unwrap().t - 100.0).abs() < 1e-12);
}

#[test]
fn invalid_options_are_rejected() {
    let start = cover(&[(0.0, 0.1, 1.0)], CoverMode::Torus);
    let bad = [
        IntegratorOptions { rtol: 0.0, ..IntegratorOptions::default() },
        IntegratorOptions { h_min: 2.0, ..IntegratorOptions::default() },
        IntegratorOptions { sample_interval: -1.0, ..IntegratorOptions::default() },
    ];
    for o in bad {
        assert!(matches!(integrate(&start, 1.0, &o), Err(Error::InvalidInput(_))));
    }
    assert!(integrate(&start, f64::NAN, &IntegratorOptions::default()).is_err());
}
