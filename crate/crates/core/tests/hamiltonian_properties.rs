use std::f64::consts::{FRAC_PI_2, PI};

use kleinvortex::hamiltonian::{
    dham_dzbar, green_klein, ham_h0, ham_klein, ham_klein_unsimplified, ham_oracle_truncated, ham_torus_h1,
    ham_torus_h2, robin_klein,
};
use kleinvortex::state::closest_pair;
use kleinvortex::theta::{theta1, theta1_prime, theta2, theta2_prime, Nome};
use kleinvortex::{Complex64, KleinState, TorusState, Vortex};
use proptest::prelude::*;

fn strength() -> impl Strategy<Value = f64> {
    (0.3..2.0f64, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g })
}

fn vortex() -> impl Strategy<Value = Vortex> {
    (-FRAC_PI_2..FRAC_PI_2, -FRAC_PI_2..FRAC_PI_2, strength()).prop_map(|(x, y, g)| Vortex::new(x, y, g))
}

fn klein_state(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = KleinState> {
    prop::collection::vec(vortex(), n)
        .prop_filter("well separated", |v| closest_pair(v).is_none_or(|p| p.2 > 0.05))
        .prop_map(|v| KleinState::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bottle_energy_is_well_defined(s in klein_state(1..=4)) {
        let h = ham_klein(&s).unwrap();
        let tol = 1e-11 * h.abs().max(1.0);
        for k in 0..s.len() {
            prop_assert!((ham_klein(&s.with_mu_applied(k)).unwrap() - h).abs() <= tol);
            prop_assert!((ham_klein(&s.with_shift(k, Complex64::new(2.0 * PI, 0.0))).unwrap() - h).abs() <= tol);
            prop_assert!((ham_klein(&s.with_shift(k, Complex64::new(0.0, PI))).unwrap() - h).abs() <= tol);
        }
        prop_assert!((ham_klein_unsimplified(&s).unwrap() - h).abs() <= tol);
    }

    #[test]
    fn energy_depends_on_horizontal_differences(s in klein_state(2..=3), shift in -3.0..3.0f64) {
        let h = ham_klein(&s).unwrap();
        prop_assert!((ham_klein(&s.translated(shift)).unwrap() - h).abs() <= 1e-12 * h.abs().max(1.0));
    }

    #[test]
    fn green_function_is_symmetric(a in vortex(), b in vortex()) {
        prop_assume!(kleinvortex::state::twisted_distance(a.z(), b.z()).0 > 1e-3);
        let g = green_klein(a.z(), b.z()).unwrap();
        prop_assert!((g - green_klein(b.z(), a.z()).unwrap()).abs() <= 1e-12 * g.abs().max(1.0));
    }
}

#[test]
fn torus_forms_differ_by_a_constant() {
    let mut diffs = Vec::new();
    for i in 0..100 {
        let t = i as f64;
        let a = Complex64::new((1.3 * t).sin() * 3.0, (0.7 * t).cos() * 1.5);
        let b = Complex64::new((2.1 * t + 1.0).cos() * 3.0, (1.9 * t).sin() * 1.5);
        let Ok(s) = TorusState::new(vec![a, b], vec![1.0, -1.0]) else { continue };
        diffs.push(ham_torus_h1(&s).unwrap() - ham_torus_h2(&s).unwrap());
    }
    let spread = diffs.iter().cloned().fold(f64::MIN, f64::max) - diffs.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 1e-11, "{spread}");
    assert!((diffs[0] - 2f64.ln() / (4.0 * PI)).abs() < 1e-11);
}

#[test]
fn h0_defect_for_three_vortices() {
    let s =
        KleinState::new(vec![Vortex::new(0.3, 0.4, 1.2), Vortex::new(-0.9, -0.7, -0.5), Vortex::new(1.1, 1.2, 0.8)])
            .unwrap();
    let defect = ham_h0(&s.with_mu_applied(0)).unwrap() - ham_h0(&s).unwrap();
    assert!((defect + 0.5 * 1.2 * (-0.5 + 0.8)).abs() <= 1e-11);
}

#[test]
fn h0_is_not_invariant_but_bottle_energy_is() {
    let s = KleinState::new(vec![Vortex::new(0.3, 0.4, 1.0), Vortex::new(-0.9, -0.7, 1.0)]).unwrap();
    assert!((ham_h0(&s.with_mu_applied(0)).unwrap() - ham_h0(&s).unwrap()).abs() > 0.4);
    assert!((ham_klein(&s.with_mu_applied(0)).unwrap() - ham_klein(&s).unwrap()).abs() < 1e-12);
}

#[test]
fn pair_energy_splits_into_green_and_robin_terms() {
    for (z1, z2, g1, g2) in [
        (Complex64::new(0.2, 0.5), Complex64::new(-1.2, -0.3), 1.0, 2.0),
        (Complex64::new(-0.7, 1.1), Complex64::new(0.4, 0.1), -0.6, 1.4),
    ] {
        let s = KleinState::new(vec![Vortex::new(z1.re, z1.im, g1), Vortex::new(z2.re, z2.im, g2)]).unwrap();
        let green = -g1 * g2 * green_klein(z1, z2).unwrap();
        let robin = 0.5 * g1 * g1 * robin_klein(z1.im).unwrap() + 0.5 * g2 * g2 * robin_klein(z2.im).unwrap();
        let h = ham_klein(&s).unwrap();
        assert!((h - (green + robin)).abs() <= 1e-12);
        // the opposite sign on the self terms does not reproduce the energy
        assert!((h - (green - robin)).abs() > 1e-3);
    }
}

#[test]
fn oracle_differences_respect_reflection() {
    // a (Γ, -Γ) pair and its mirror image x -> -x
    let reflect = |z: Complex64| Complex64::new(-z.re, z.im);
    let a = [Complex64::new(0.4, 0.3), Complex64::new(-0.8, -0.2)];
    let b = [Complex64::new(1.1, -0.5), Complex64::new(0.2, 0.6)];
    let state = |p: [Complex64; 2]| TorusState::new(p.to_vec(), vec![1.0, -1.0]).unwrap();
    let d = ham_oracle_truncated(&state(a), 80, 80).unwrap() - ham_oracle_truncated(&state(b), 80, 80).unwrap();
    let d_mirror = ham_oracle_truncated(&state(a.map(reflect)), 80, 80).unwrap()
        - ham_oracle_truncated(&state(b.map(reflect)), 80, 80).unwrap();
    assert!((d - d_mirror).abs() <= 1e-6);
}

#[test]
fn oracle_converges_to_theta_form() {
    let a = TorusState::new(vec![Complex64::new(0.4, 0.3), Complex64::new(-0.8, -0.2)], vec![1.0, 0.5]).unwrap();
    let b = TorusState::new(vec![Complex64::new(2.0, -1.0), Complex64::new(-0.1, 0.9)], vec![1.0, 0.5]).unwrap();
    let exact = ham_torus_h1(&a).unwrap() - ham_torus_h1(&b).unwrap();
    let err =
        |m: usize| (ham_oracle_truncated(&a, m, m).unwrap() - ham_oracle_truncated(&b, m, m).unwrap() - exact).abs();
    let (coarse, fine) = (err(25), err(100));
    assert!(fine < coarse, "{coarse} {fine}");
    assert!(fine < 1e-4);
}

/// The printed two-vortex velocities keep 1/4π in front of every θ'/θ term.
fn literal_first_velocity(z1: Complex64, z2: Complex64, g1: f64, g2: f64) -> Complex64 {
    let q = Nome::klein();
    let l1 = |w: Complex64| theta1_prime(w, q).unwrap() / theta1(w, q).unwrap();
    let l2 = |w: Complex64| theta2_prime(w, q).unwrap() / theta2(w, q).unwrap();
    let c = 1.0 / (4.0 * PI);
    let bracket = -c * g2 * l1((z1.conj() - z2.conj()) / 2.0)
        + c * g2 * l2((z1.conj() - z2) / 2.0)
        + g2 / (4.0 * PI * PI) * (z2.conj() - z2)
        + c * g1 * (l1((z1.conj() - z1) / 2.0 + FRAC_PI_2) + (z1.conj() - z1) / PI);
    Complex64::new(0.0, -2.0) * bracket
}

#[test]
fn printed_coefficients_disagree_with_the_energy() {
    let s = KleinState::new(vec![Vortex::new(0.4, 0.3, 1.0), Vortex::new(-0.5, -0.6, 0.7)]).unwrap();
    let v = s.vortices();
    let from_energy = Complex64::new(0.0, -2.0) * dham_dzbar(&s, 0).unwrap() / v[0].gamma;
    let literal = literal_first_velocity(v[0].z(), v[1].z(), v[0].gamma, v[1].gamma);
    assert!((from_energy - literal).norm() > 1e-3);
}
