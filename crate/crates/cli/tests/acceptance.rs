//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::f64::consts::FRAC_PI_3;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cgq_core::assignment::{
    assign_bns, assign_partial_trace, canonical_orbit_seed, mc_average_bns, mc_average_orbit,
    mc_average_partial_trace, OrbitSeed,
};
use cgq_core::channel::{verify_cptp, CptpTolerances};
use cgq_core::discriminate::{run_discrimination, DiscriminationExperiment};
use cgq_core::dynamics::{
    effective_evolve, linearity_probe, open_system_evolve, EffectiveChannelSpec,
};
use cgq_core::random::{random_density, random_hermitian, random_pure, sample_rng, uniform_angle};
use cgq_core::state::PureStateVector;
use cgq_core::{
    tensor, unitary_at, CoarseGrainingChannel, ComplexMatrix, DensityMatrix, HamiltonianSpec,
    SamplerConfig,
};
use num_complex::Complex64;

const N: u64 = 1_000_000;

struct Verdict {
    passed: bool,
    detail: String,
}

/// Identifier, name, runtime budget and check.
type Criterion = (u32, &'static str, Duration, fn() -> Verdict);

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn qubit(seed: u64, k: u64) -> DensityMatrix {
    let mut rng = sample_rng(seed, k);
    if k.is_multiple_of(4) {
        PureStateVector::new(random_pure(&mut rng, 2))
            .unwrap()
            .projector()
    } else {
        random_density(&mut rng, 2)
    }
}

fn plus() -> DensityMatrix {
    DensityMatrix::qubit(0.5, Complex64::new(0.5, 0.0)).unwrap()
}

fn c1_bns_oracle() -> Verdict {
    let mut worst = 0.0f64;
    let mut states = 0;
    let mut k = 0;
    while states < 20 {
        let rho = qubit(1001, k);
        k += 1;
        if rho.get(0, 0).re < 0.05 {
            continue;
        }
        let cfg = SamplerConfig::new(N, 100 + states).unwrap();
        let mc = mc_average_bns(&rho, &cfg).unwrap();
        worst = worst.max(mc.matrix().max_abs_diff(assign_bns(&rho).unwrap().matrix()));
        states += 1;
    }
    verdict(
        worst <= 5e-3,
        format!("max deviation {worst:.3e} over 20 states (tol 5e-3)"),
    )
}

fn c2_partial_trace_oracle() -> Verdict {
    let mut worst = 0.0f64;
    for k in 0..10 {
        let rho = qubit(2002, k);
        let cfg = SamplerConfig::new(N, 200 + k).unwrap();
        let mc = mc_average_partial_trace(&rho, 2, &cfg).unwrap();
        let product = tensor(rho.matrix(), &ComplexMatrix::identity(2).scale_real(0.5));
        worst = worst.max(mc.matrix().max_abs_diff(&product));
    }
    verdict(
        worst <= 5e-3,
        format!("max deviation {worst:.3e} over 10 states (tol 5e-3)"),
    )
}

fn c3_nonlinear_probability() -> Verdict {
    let spec = EffectiveChannelSpec::bns(HamiltonianSpec::local_y()).unwrap();
    let mut worst = 0.0f64;
    let mut at = (0.0, 0.0, 0.0);
    for k in 0..51 {
        let r01 = 0.5 * k as f64 / 50.0;
        let rho = DensityMatrix::qubit(0.5, Complex64::new(r01, 0.0)).unwrap();
        let p0 = effective_evolve(&spec, &rho, FRAC_PI_3)
            .unwrap()
            .get(0, 0)
            .re;
        let target = (1.0 - r01).powi(2) / 16.0;
        if (p0 - target).abs() > worst {
            worst = (p0 - target).abs();
            at = (r01, p0, target);
        }
    }
    verdict(
        worst <= 1e-10,
        format!(
            "max |p0 - (1-r01)^2/16| = {worst:.3e} (tol 1e-10); worst at r01 = {}: computed {:.12}, formula {:.12}",
            at.0, at.1, at.2
        ),
    )
}

fn c4_fig3() -> Verdict {
    let series = run_discrimination(&DiscriminationExperiment::fig3()).unwrap();
    let (t_peak, peak) = series.peak();
    let ok_initial = (series.d_initial - 0.5).abs() <= 1e-12;
    let ok_peak = peak >= 0.52;
    let ok_bound = series.max_bound_violation() <= 1e-9;
    verdict(
        ok_initial && ok_peak && ok_bound,
        format!(
            "d_initial {:.15}, max d_effective {peak:.6} at t = {t_peak:.4}, d_micro {:.6}, bound violation {:.3e}",
            series.d_initial,
            series.d_micro,
            series.max_bound_violation()
        ),
    )
}

fn c5_channel_laws() -> Verdict {
    let bns = CoarseGrainingChannel::bns();
    let pt = CoarseGrainingChannel::partial_trace(2, 2).unwrap();
    let report = verify_cptp(&bns, &CptpTolerances::default()).unwrap();
    let cptp_ok =
        report.tp_defect <= 1e-12 && report.choi_min_eigenvalue >= -1e-10 && report.passed;
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let rho = qubit(5005, k);
        let a = assign_bns(&rho).unwrap();
        worst = worst.max(bns.apply(a.matrix()).unwrap().max_abs_diff(rho.matrix()));
        let a = assign_partial_trace(&rho, 2).unwrap();
        worst = worst.max(pt.apply(a.matrix()).unwrap().max_abs_diff(rho.matrix()));
    }
    verdict(
        cptp_ok && worst <= 1e-12,
        format!(
            "BnS TP defect {:.3e}, Choi min eigenvalue {:.3e}; left-inverse max deviation {worst:.3e} (tol 1e-12)",
            report.tp_defect, report.choi_min_eigenvalue
        ),
    )
}

fn c6_linearity() -> Verdict {
    let pt = EffectiveChannelSpec::partial_trace(2, 2, HamiltonianSpec::global_y()).unwrap();
    let mut worst_pt = 0.0f64;
    for k in 0..100 {
        let mut rng = sample_rng(6006, k);
        let rho = random_density(&mut rng, 2);
        let chi = random_density(&mut rng, 2);
        let alpha = uniform_angle(&mut rng) / std::f64::consts::TAU;
        let t = uniform_angle(&mut rng);
        worst_pt = worst_pt.max(linearity_probe(&pt, &rho, &chi, alpha, t).unwrap());
    }
    let bns = EffectiveChannelSpec::bns(HamiltonianSpec::local_y()).unwrap();
    let witness =
        linearity_probe(&bns, &plus(), &DensityMatrix::basis(2, 0), 0.5, FRAC_PI_3).unwrap();
    verdict(
        worst_pt <= 1e-12 && witness >= 1e-3,
        format!("partial-trace defect {worst_pt:.3e} (tol 1e-12); BnS witness defect {witness:.6} (min 1e-3)"),
    )
}

fn c7_local_unitary() -> Verdict {
    let mut worst = 0.0f64;
    for k in 0..100 {
        let mut rng = sample_rng(7007, k);
        let h_s = random_hermitian(&mut rng, 2);
        let h_e = random_hermitian(&mut rng, 2);
        let rho = random_density(&mut rng, 2);
        let t = 4.0 * uniform_angle(&mut rng) - 12.0;
        let h = HamiltonianSpec::local_sum(&h_s, &h_e).unwrap();
        let open = open_system_evolve(&rho, &h, 2, t).unwrap();
        let direct = rho.conjugate_by(&unitary_at(&h_s, t).unwrap()).unwrap();
        worst = worst.max(open.matrix().max_abs_diff(direct.matrix()));
    }
    verdict(
        worst <= 1e-12,
        format!("max deviation {worst:.3e} over 100 draws (tol 1e-12)"),
    )
}

fn seed_family(rho: &DensityMatrix) -> [OrbitSeed; 3] {
    [
        canonical_orbit_seed(rho).unwrap(),
        OrbitSeed::with_geometry(rho, 2.0, 0.9, std::f64::consts::FRAC_PI_2).unwrap(),
        OrbitSeed::with_geometry(rho, -1.1, 2.6, 0.6).unwrap(),
    ]
}

fn max_seed_deviation(rho: &DensityMatrix, base_seed: u64) -> f64 {
    let closed = assign_bns(rho).unwrap();
    seed_family(rho)
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let cfg = SamplerConfig::new(N, base_seed + k as u64).unwrap();
            mc_average_orbit(s, &cfg)
                .unwrap()
                .matrix()
                .max_abs_diff(closed.matrix())
        })
        .fold(0.0, f64::max)
}

fn c8_seed_independence() -> Verdict {
    let on_plus = max_seed_deviation(&plus(), 800);
    // |+><+| has a single compatible state, so every seed coincides; a mixed
    // state exercises seeds that genuinely differ.
    let mixed = DensityMatrix::qubit(0.55, Complex64::new(0.1, -0.2)).unwrap();
    let on_mixed = max_seed_deviation(&mixed, 810);
    verdict(
        on_plus <= 5e-3 && on_mixed <= 5e-3,
        format!("|+><+| max deviation {on_plus:.3e}; mixed-state check {on_mixed:.3e} (tol 5e-3)"),
    )
}

fn c9_determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("cgq-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.join(format!("{name}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_cgq"))
            .args([
                "discriminate",
                "--preset",
                "fig3",
                "--samples",
                "200000",
                "--seed",
                "9",
                "--out",
            ])
            .arg(&out)
            .env("RAYON_NUM_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        (
            fs::read(&out).unwrap(),
            fs::read(dir.join(format!("{name}.summary.json"))).unwrap(),
        )
    };
    let first = run("a", "4");
    let second = run("b", "4");
    let serial_threads = run("c", "1");
    let identical = first == second && second == serial_threads;
    let _ = fs::remove_dir_all(&dir);

    let rho = DensityMatrix::qubit(0.6, Complex64::new(0.25, 0.1)).unwrap();
    let n = 400_000;
    let chunked = SamplerConfig::with_chunk_size(n, 31, n / 4).unwrap();
    let serial = SamplerConfig::with_chunk_size(n, 31, n).unwrap();
    let d_bns = mc_average_bns(&rho, &chunked)
        .unwrap()
        .matrix()
        .max_abs_diff(mc_average_bns(&rho, &serial).unwrap().matrix());
    let d_pt = mc_average_partial_trace(&rho, 2, &chunked)
        .unwrap()
        .matrix()
        .max_abs_diff(mc_average_partial_trace(&rho, 2, &serial).unwrap().matrix());
    let spread = d_bns.max(d_pt);
    verdict(
        identical && spread <= 1e-12,
        format!("repeat runs byte-identical: {identical}; 4-way vs serial chunking max difference {spread:.3e} (tol 1e-12)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            1,
            "BnS assignment: Monte-Carlo vs closed form",
            Duration::from_secs(30),
            c1_bns_oracle,
        ),
        (
            2,
            "partial-trace assignment: Haar average vs rho x I/2",
            Duration::from_secs(60),
            c2_partial_trace_oracle,
        ),
        (
            3,
            "nonlinear ground probability at t = pi/3",
            Duration::from_secs(1),
            c3_nonlinear_probability,
        ),
        (
            4,
            "discrimination excursion and micro bound",
            Duration::from_secs(5),
            c4_fig3,
        ),
        (
            5,
            "CPTP and left-inverse laws",
            Duration::from_secs(5),
            c5_channel_laws,
        ),
        (
            6,
            "linearity dichotomy",
            Duration::from_secs(5),
            c6_linearity,
        ),
        (
            7,
            "local-unitary recovery",
            Duration::from_secs(5),
            c7_local_unitary,
        ),
        (
            8,
            "orbit-seed independence",
            Duration::from_secs(30),
            c8_seed_independence,
        ),
        (9, "determinism", Duration::from_secs(60), c9_determinism),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = v.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {id}: {name}: {} [{:.2}s, budget {}s{}]",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
