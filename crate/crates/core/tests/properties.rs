use cgq_core::assignment::{
    assign_bns, assign_partial_trace, canonical_orbit_seed, orbit_state, OrbitSeed,
};
use cgq_core::channel::{choi_matrix, CoarseGrainingChannel};
use cgq_core::dynamics::{effective_evolve, Assigner, EffectiveChannelSpec, TimeGrid};
use cgq_core::random::{random_density, random_hermitian, random_pure, sample_rng};
use cgq_core::{
    partial_trace_env, trace_distance, validate_density, ComplexMatrix, DensityMatrix,
    HamiltonianSpec, PureStateVector, SamplerConfig, Tolerances,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn state(seed: u64, dim: usize) -> DensityMatrix {
    random_density(&mut sample_rng(seed, 0), dim)
}

/// Random qubit state, pure or mixed, with rho00 bounded away from zero.
fn qubit(seed: u64, min_ground: f64) -> DensityMatrix {
    let mut rng = sample_rng(seed, 1);
    loop {
        let rho = if seed.is_multiple_of(3) {
            PureStateVector::new(random_pure(&mut rng, 2))
                .unwrap()
                .projector()
        } else {
            random_density(&mut rng, 2)
        };
        if rho.get(0, 0).re >= min_ground {
            return rho;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_distance_is_unitarily_invariant(seed in any::<u64>(), t in -10.0f64..10.0) {
        let mut rng = sample_rng(seed, 2);
        let h = random_hermitian(&mut rng, 3);
        let u = cgq_core::unitary_at(&h, t).unwrap();
        let (a, b) = (state(seed, 3), state(seed ^ 0xdead, 3));
        let before = trace_distance(&a, &b).unwrap();
        let after = trace_distance(&a.conjugate_by(&u).unwrap(), &b.conjugate_by(&u).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-12);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>()) {
        let (a, b, c) = (state(seed, 2), state(seed.wrapping_add(1), 2), state(seed.wrapping_add(2), 2));
        let ab = trace_distance(&a, &b).unwrap();
        let ba = trace_distance(&b, &a).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn partial_trace_undoes_product_assignment(seed in any::<u64>(), de in 1usize..4) {
        let rho = state(seed, 2);
        let back = partial_trace_env(&assign_partial_trace(&rho, de).unwrap(), 2, de).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-12);
    }

    #[test]
    fn propagators_invert(seed in any::<u64>(), t in -20.0f64..20.0) {
        let h = HamiltonianSpec::new(random_hermitian(&mut sample_rng(seed, 3), 4), "random").unwrap();
        let id = &h.unitary_at(t) * &h.unitary_at(-t);
        prop_assert!(id.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-12);
    }

    #[test]
    fn channels_are_linear(seed in any::<u64>(), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let mut rng = sample_rng(seed, 4);
        let x = cgq_core::random::ginibre(&mut rng, 4);
        let y = cgq_core::random::ginibre(&mut rng, 4);
        let a = Complex64::new(alpha, beta);
        let b = Complex64::new(beta, -alpha);
        for ch in [CoarseGrainingChannel::bns(), CoarseGrainingChannel::partial_trace(2, 2).unwrap()] {
            let lhs = ch.apply(&(&x.scale(a) + &y.scale(b))).unwrap();
            let rhs = &ch.apply(&x).unwrap().scale(a) + &ch.apply(&y).unwrap().scale(b);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn bns_maps_states_to_states(seed in any::<u64>()) {
        let psi = state(seed, 4);
        let out = CoarseGrainingChannel::bns().apply(psi.matrix()).unwrap();
        prop_assert!(validate_density(&out, &Tolerances::default()).unwrap().passed);
    }

    #[test]
    fn bns_ignores_excited_coherences(seed in any::<u64>()) {
        let mut rng = sample_rng(seed, 5);
        let x = cgq_core::random::ginibre(&mut rng, 4);
        let noise = cgq_core::random::ginibre(&mut rng, 4);
        let mut perturbed = x.clone();
        for (i, j) in [(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)] {
            perturbed[(i, j)] += noise[(i, j)];
        }
        let ch = CoarseGrainingChannel::bns();
        prop_assert!(ch.apply(&x).unwrap().max_abs_diff(&ch.apply(&perturbed).unwrap()) <= 1e-14);
    }

    #[test]
    fn orbit_states_are_compatible(seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU, phi in 0.0f64..std::f64::consts::TAU) {
        let rho = qubit(seed, 0.0);
        let ch = CoarseGrainingChannel::bns();
        let seeds = [
            canonical_orbit_seed(&rho).unwrap(),
            OrbitSeed::with_geometry(&rho, 1.3, -0.7, 0.8).unwrap(),
        ];
        for s in &seeds {
            let v = orbit_state(s, theta, phi);
            let img = ch.apply(v.projector().matrix()).unwrap();
            prop_assert!(img.max_abs_diff(rho.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn bns_assignment_is_a_state(seed in any::<u64>()) {
        let rho = qubit(seed, 1e-6);
        let a = assign_bns(&rho).unwrap();
        let report = validate_density(a.matrix(), &Tolerances::default()).unwrap();
        prop_assert!(report.passed, "{}", report);
    }
}

#[test]
fn choi_trace_equals_input_dimension() {
    for ch in [
        CoarseGrainingChannel::bns(),
        CoarseGrainingChannel::partial_trace(2, 2).unwrap(),
        CoarseGrainingChannel::partial_trace(3, 2).unwrap(),
    ] {
        let tr = choi_matrix(&ch).trace();
        assert!((tr.re - ch.dim_in() as f64).abs() <= 1e-12 && tr.im.abs() <= 1e-12);
    }
}

#[test]
fn left_inverse_law_on_random_states() {
    let bns = CoarseGrainingChannel::bns();
    let pt = CoarseGrainingChannel::partial_trace(2, 2).unwrap();
    for seed in 0..1000u64 {
        let rho = qubit(seed, 0.0);
        let a = assign_bns(&rho).unwrap();
        assert!(bns.apply(a.matrix()).unwrap().max_abs_diff(rho.matrix()) <= 1e-12);
        let a = assign_partial_trace(&rho, 2).unwrap();
        assert!(pt.apply(a.matrix()).unwrap().max_abs_diff(rho.matrix()) <= 1e-12);
    }
}

#[test]
fn bns_assignment_is_nonlinear_partial_trace_is_not() {
    let plus = DensityMatrix::qubit(0.5, Complex64::new(0.5, 0.0)).unwrap();
    let ground = DensityMatrix::basis(2, 0);
    let mix = plus.mix(&ground, 0.5).unwrap();

    let lhs = assign_bns(&mix).unwrap();
    let rhs = assign_bns(&plus)
        .unwrap()
        .mix(&assign_bns(&ground).unwrap(), 0.5)
        .unwrap();
    let excited_dev = [(1, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(i, j)| (lhs.get(i, j) - rhs.get(i, j)).norm())
        .fold(0.0, f64::max);
    assert!(excited_dev > 1e-3, "deviation {excited_dev}");

    let lhs = assign_partial_trace(&mix, 2).unwrap();
    let rhs = assign_partial_trace(&plus, 2)
        .unwrap()
        .mix(&assign_partial_trace(&ground, 2).unwrap(), 0.5)
        .unwrap();
    assert!(lhs.matrix().max_abs_diff(rhs.matrix()) <= 1e-15);
}

#[test]
fn effective_dynamics_preserve_trace_and_positivity() {
    let grid = TimeGrid::default_evolution();
    let specs = [
        EffectiveChannelSpec::bns(HamiltonianSpec::global_y()).unwrap(),
        EffectiveChannelSpec::bns(HamiltonianSpec::local_y()).unwrap(),
        EffectiveChannelSpec::partial_trace(2, 2, HamiltonianSpec::global_y()).unwrap(),
    ];
    for seed in 0..100u64 {
        let rho = qubit(seed, 1e-6);
        for spec in &specs {
            for out in cgq_core::dynamics::effective_trajectory(spec, &rho, grid.points()).unwrap()
            {
                let tr = out.matrix().trace();
                assert!((tr.re - 1.0).abs() <= 1e-12 && tr.im.abs() <= 1e-12);
                let report = out.validate(&Tolerances::default());
                assert!(report.min_eigenvalue >= -1e-10, "{report}");
            }
        }
    }
}

#[test]
fn monte_carlo_assigner_matches_closed_form_dynamics() {
    let closed = EffectiveChannelSpec::bns(HamiltonianSpec::global_y()).unwrap();
    let mc = closed
        .clone()
        .with_assigner(Assigner::MonteCarlo(
            SamplerConfig::new(1_000_000, 99).unwrap(),
        ))
        .unwrap();
    for seed in 0..10u64 {
        let rho = qubit(seed + 500, 0.05);
        let t = 0.6 * seed as f64 + 0.1;
        let a = effective_evolve(&closed, &rho, t).unwrap();
        let b = effective_evolve(&mc, &rho, t).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) <= 5e-3);
    }
}
