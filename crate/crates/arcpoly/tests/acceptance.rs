#![allow(clippy::manual_is_multiple_of)]

//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured residuals. Tolerances are pinned in the assertions.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arcpoly::gauss::gauss_legendre;
use arcpoly::interp::LagrangeBasis;
use arcpoly::measure::Measure;
use arcpoly::omega::OmegaFunction;
use arcpoly::opuc;
use arcpoly::quadrature::{random_in_class, QuadratureRule};
use arcpoly::recurrence::{gegenbauer_eta_coeffs, RecurrenceTable};
use arcpoly::selfinv::{divide, omega_to_selfinv, selfinv_to_omega};
use arcpoly::verify;
use arcpoly::zeros::{check_interlacing, find_zeros};

const SEED: u64 = verify::DEFAULT_SEED;

/// Reference 7-decimal table for d psi = (1-x) dx.
const BETA_REF: [f64; 6] = [
    -0.4244132, -0.3029978, -0.2398161, -0.2003582, -0.1730831, -0.1529639,
];
const ALPHA_REF: [f64; 5] = [0.2229581, 0.2408213, 0.2455306, 0.2473987, 0.2483152];

fn gegenbauer_cases() -> Vec<(f64, f64)> {
    vec![(1.0, 0.0), (0.75, 0.5), (2.0, 1.0), (0.6, -0.3)]
}

fn builtin_measures() -> Vec<(String, Measure)> {
    let mut list = vec![
        ("one_minus_x".to_string(), Measure::one_minus_x()),
        ("lebesgue".to_string(), Measure::lebesgue()),
        ("chebyshev1".to_string(), Measure::chebyshev1()),
    ];
    for (lambda, eta) in gegenbauer_cases() {
        list.push((
            format!("gegenbauer_eta({lambda},{eta})"),
            Measure::gegenbauer_eta(lambda, eta).unwrap(),
        ));
    }
    list
}

#[test]
fn criterion_01_reference_coefficient_table() {
    let start = Instant::now();
    let psi = Measure::one_minus_x();
    let table = RecurrenceTable::generate(&psi, 6).unwrap();
    let mut worst = 0.0_f64;
    for m in 1..=6 {
        worst = worst.max((table.beta(m) - BETA_REF[m - 1]).abs());
    }
    for m in 2..=6 {
        worst = worst.max((table.alpha(m) - ALPHA_REF[m - 2]).abs());
    }
    let elapsed = start.elapsed();
    assert!(worst <= 5e-7, "worst coefficient deviation {worst:e}");
    assert!(elapsed.as_secs_f64() <= 10.0, "took {elapsed:?}");
    println!("PASS criterion 1: coefficient table, worst |delta| = {worst:.2e}, {elapsed:?}");
}

#[test]
fn criterion_02_order_four_zero_near_origin() {
    let start = Instant::now();
    let psi = Measure::one_minus_x();
    let table = RecurrenceTable::generate(&psi, 4).unwrap();
    let zeros = find_zeros(table.w(4)).unwrap();
    let near = zeros
        .x
        .iter()
        .copied()
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap();
    let elapsed = start.elapsed();
    assert!((near + 0.0055075).abs() <= 1e-5, "zero at {near}");
    assert!(elapsed.as_secs_f64() <= 2.0, "took {elapsed:?}");
    println!(
        "PASS criterion 2: order-4 zero {near:.7} (|delta| = {:.2e}), {elapsed:?}",
        (near + 0.0055075).abs()
    );
}

#[test]
fn criterion_03_closed_form_coefficients() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (lambda, eta) in gegenbauer_cases() {
        let psi = Measure::gegenbauer_eta(lambda, eta).unwrap();
        let table = RecurrenceTable::generate(&psi, 13).unwrap();
        for m in 1..=12 {
            let (beta, alpha_next) = gegenbauer_eta_coeffs(lambda, eta, m).unwrap();
            if beta != 0.0 {
                worst = worst.max(((table.beta(m) - beta) / beta).abs());
            } else {
                worst = worst.max(table.beta(m).abs());
            }
            worst = worst.max(((table.alpha(m + 1) - alpha_next) / alpha_next).abs());
        }
    }
    let elapsed = start.elapsed();
    assert!(worst <= 1e-9, "worst relative deviation {worst:e}");
    assert!(elapsed.as_secs_f64() <= 60.0, "took {elapsed:?}");
    println!("PASS criterion 3: closed-form coefficients, worst rel = {worst:.2e}, {elapsed:?}");
}

#[test]
fn criterion_04_classical_reductions() {
    // lambda = 1/2: monic Legendre alpha and zeros; lambda = 1: monic
    // Chebyshev-U alpha and zeros
    let psi = Measure::gegenbauer_eta(0.5, 0.0).unwrap();
    let table = RecurrenceTable::generate(&psi, 12).unwrap();
    let mut worst = 0.0_f64;
    for m in 1..=11 {
        let mf = m as f64;
        let expect = mf * mf / (4.0 * mf * mf - 1.0);
        worst = worst.max(((table.alpha(m + 1) - expect) / expect).abs());
    }
    let zeros = find_zeros(table.w(5)).unwrap();
    let (legendre, _) = gauss_legendre(5);
    for (got, want) in zeros.x.iter().zip(&legendre) {
        worst = worst.max((got - want).abs());
    }

    let psi = Measure::gegenbauer_eta(1.0, 0.0).unwrap();
    let table = RecurrenceTable::generate(&psi, 12).unwrap();
    for m in 1..=11 {
        worst = worst.max(((table.alpha(m + 1) - 0.25) / 0.25).abs());
    }
    let zeros = find_zeros(table.w(5)).unwrap();
    for (k, &x) in zeros.x.iter().enumerate() {
        // Chebyshev-U_5 zeros: cos(j pi / 6), j = 5..1 ascending in x
        let want = (std::f64::consts::PI * (5 - k) as f64 / 6.0).cos();
        worst = worst.max((x - want).abs());
    }
    assert!(worst <= 1e-9, "worst deviation {worst:e}");
    println!("PASS criterion 4: classical reductions, worst = {worst:.2e}");
}

#[test]
fn criterion_05_orthogonality_residuals_all_builtins() {
    let mut overall = 0.0_f64;
    for (name, psi) in builtin_measures() {
        let report = verify::orthogonality_suite(&psi, 12, 1e-8).unwrap();
        assert!(report.passed(), "{name}:\n{}", report.render_text());
        let worst = report
            .checks
            .iter()
            .map(|c| c.residual)
            .fold(0.0_f64, f64::max);
        overall = overall.max(worst);
    }
    println!("PASS criterion 5: orthogonality residuals on all builtins, worst = {overall:.2e}");
}

#[test]
fn criterion_06_quadrature_exactness() {
    let psi = Measure::one_minus_x();
    let table = RecurrenceTable::generate(&psi, 13).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_exact = 0.0_f64;
    let mut worst_identity = 0.0_f64;
    for n in 1..=3usize {
        let even = QuadratureRule::build(&table, &psi, 2 * n).unwrap();
        let odd = QuadratureRule::build(&table, &psi, 2 * n + 1).unwrap();
        for (k, &x) in even.nodes().x.iter().enumerate() {
            let expect = even.lambda()[k] / (1.0 - x * x).sqrt();
            worst_identity = worst_identity.max(((even.lambda_hat()[k] - expect) / expect).abs());
        }
        for (k, &l) in odd.lambda().iter().enumerate() {
            worst_identity = worst_identity.max(((odd.lambda_tilde()[k] - l) / l).abs());
        }
        for _ in 0..50 {
            let e = random_in_class(&table, 4 * n - 1, &mut rng);
            let direct = psi.integrate_theta(|t, _| e.eval_theta(t), false).unwrap();
            worst_exact =
                worst_exact.max((even.apply_plain(&e) - direct).abs() / direct.abs().max(1.0));
            let e = random_in_class(&table, 4 * n, &mut rng);
            let direct = psi.integrate_theta(|t, _| e.eval_theta(t), true).unwrap();
            worst_exact =
                worst_exact.max((odd.apply_halfcircle(&e) - direct).abs() / direct.abs().max(1.0));
        }
    }
    assert!(worst_exact <= 1e-9, "exactness residual {worst_exact:e}");
    assert!(
        worst_identity <= 1e-10,
        "weight identity residual {worst_identity:e}"
    );
    println!(
        "PASS criterion 6: quadrature exactness {worst_exact:.2e}, weight identities {worst_identity:.2e}"
    );
}

fn random_omega(m: usize, rng: &mut ChaCha8Rng) -> OmegaFunction {
    let mut b0 = vec![0.0; m + 1];
    let mut b1 = vec![0.0; m];
    let mut j = m % 2;
    while j <= m {
        b0[j] = rng.gen_range(-1.0..1.0);
        j += 2;
    }
    if m >= 1 {
        let mut j = (m - 1) % 2;
        while j < m {
            b1[j] = rng.gen_range(-1.0..1.0);
            j += 2;
        }
    }
    OmegaFunction::new(m, b0, b1).unwrap()
}

#[test]
fn criterion_07_division() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for half in 1..=3usize {
        for parity in 0..2usize {
            let n = 2 * half + parity;
            let class_bound = if parity == 0 { 2 * n - 1 } else { 2 * n - 2 };
            let f_bound = if parity == 0 { n - 1 } else { n - 2 };
            for _ in 0..100 {
                let w = random_omega(n, &mut rng);
                if w.lead_factor() < 1e-4 {
                    continue;
                }
                let e = random_omega(class_bound, &mut rng);
                let (f, g) = divide(&e, &w).unwrap();
                assert_eq!(f.degree_bound(), f_bound);
                assert_eq!(g.degree_bound(), n - 1);
                let mut scale = 0.0_f64;
                for i in 0..200 {
                    let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / 201.0;
                    scale = scale.max(e.eval_theta(theta).abs());
                }
                for i in 0..200 {
                    let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / 201.0;
                    let resid = e.eval_theta(theta)
                        - f.eval_theta(theta) * w.eval_theta(theta)
                        - g.eval_theta(theta);
                    worst = worst.max(resid.abs() / scale);
                }
            }
        }
    }
    assert!(worst <= 1e-10, "division residual {worst:e}");
    println!("PASS criterion 7: division residual {worst:.2e} (600 draws)");
}

#[test]
fn criterion_08_bridge() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_roundtrip = 0.0_f64;
    let mut worst_modulus = 0.0_f64;
    let mut worst_leading = 0.0_f64;
    for _ in 0..100 {
        let m = rng.gen_range(0..=20usize);
        let f = random_omega(m, &mut rng);
        let q = omega_to_selfinv(&f);
        let back = selfinv_to_omega(&q).unwrap();
        let scale = f
            .b0()
            .iter()
            .chain(f.b1())
            .map(|c| c.abs())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        for (a, b) in f
            .b0()
            .iter()
            .zip(back.b0())
            .chain(f.b1().iter().zip(back.b1()))
        {
            worst_roundtrip = worst_roundtrip.max((a - b).abs() / scale);
        }
        let (a0, a1) = f.leading();
        let expect = Complex64::new(a0, a1) * 2f64.powi(-(m as i32));
        worst_leading =
            worst_leading.max((q.coeffs()[0] - expect).norm() / expect.norm().max(1e-300));
    }
    let f = random_omega(11, &mut rng);
    let q = omega_to_selfinv(&f);
    for _ in 0..100 {
        let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let z = Complex64::from_polar(1.0, theta);
        let fx = f.eval_theta(theta);
        worst_modulus = worst_modulus.max((q.eval(z).norm_sqr() - fx * fx).abs() / (1.0 + fx * fx));
    }
    assert!(
        worst_roundtrip <= 1e-12,
        "roundtrip residual {worst_roundtrip:e}"
    );
    assert!(worst_modulus <= 1e-10, "modulus residual {worst_modulus:e}");
    assert!(
        worst_leading <= 1e-12,
        "leading-coefficient residual {worst_leading:e}"
    );
    println!(
        "PASS criterion 8: bridge roundtrip {worst_roundtrip:.2e}, modulus {worst_modulus:.2e}, leading {worst_leading:.2e}"
    );
}

#[test]
fn criterion_09_zeros_and_interlacing_all_families() {
    for (name, psi) in builtin_measures() {
        let table = RecurrenceTable::generate(&psi, 12).unwrap();
        let mut prev = None;
        for m in 1..=12 {
            let z = find_zeros(table.w(m)).unwrap();
            assert_eq!(z.x.len(), m, "{name}: order {m}");
            assert!(
                z.x.windows(2).all(|p| p[0] < p[1]),
                "{name}: order {m} not sorted"
            );
            assert!(
                z.x.iter().all(|&x| x > -1.0 && x < 1.0),
                "{name}: order {m} escape"
            );
            if let Some(p) = prev {
                assert!(
                    check_interlacing(&p, &z),
                    "{name}: orders {} and {m}",
                    m - 1
                );
            }
            prev = Some(z);
        }
    }
    println!("PASS criterion 9: zero counts and interlacing through order 12 on all builtins");
}

#[test]
fn criterion_10_opuc() {
    let psi = Measure::one_minus_x();
    let table = RecurrenceTable::generate(&psi, 8).unwrap();

    // kernel recurrence output vs scaled bridge images
    let khat = opuc::khat_from_recurrence(&table, 8).unwrap();
    let mut worst_kernel = 0.0_f64;
    for (m, k) in khat.iter().enumerate() {
        let bridge = omega_to_selfinv(table.w(m));
        let scale = 2f64.powi(m as i32);
        for (a, b) in k.coeffs().iter().zip(bridge.coeffs()) {
            worst_kernel = worst_kernel.max((a - b * scale).norm() / scale);
        }
    }
    assert!(worst_kernel <= 1e-10, "kernel residual {worst_kernel:e}");

    // moment residuals through order 6
    let mut worst_moment = 0.0_f64;
    for k in khat.iter().skip(1).take(6) {
        for r in opuc::khat_moment_residuals(k, &psi).unwrap() {
            worst_moment = worst_moment.max(r);
        }
    }
    assert!(worst_moment <= 1e-9, "moment residual {worst_moment:e}");

    // chain identities + non-coincidence (generic backward construction)
    let alpha: Vec<f64> = (2..=8).map(|m| table.alpha(m)).collect();
    let chain = opuc::chain_parameters(&alpha, 40, 1e-12).unwrap();
    let mut worst_chain = 0.0_f64;
    for k in 1..chain.len() {
        let a = chain.alpha[k - 1];
        worst_chain =
            worst_chain.max(((1.0 - chain.minimal_slot(k - 1)) * chain.minimal_slot(k) - a).abs());
        worst_chain =
            worst_chain.max(((1.0 - chain.maximal_slot(k - 1)) * chain.maximal_slot(k) - a).abs());
    }
    assert!(
        worst_chain <= 1e-10,
        "chain identity residual {worst_chain:e}"
    );
    let gap = chain.maximal_slot(1) - chain.minimal_slot(1);
    assert!(gap > 1e-6, "non-coincidence gap {gap:e}");

    // Verblunsky moduli for the jump family (measure-anchored chain)
    let chain = opuc::chain_for_measure(&table, &psi).unwrap();
    let beta: Vec<f64> = (1..=8).map(|m| table.beta(m)).collect();
    let mut worst_modulus = 0.0_f64;
    for t in [0.0, 0.3, 0.9] {
        let seq = opuc::verblunsky(&chain, &beta, t).unwrap();
        for &a in &seq.a {
            worst_modulus = worst_modulus.max(a.norm());
        }
    }
    assert!(worst_modulus < 1.0, "modulus {worst_modulus}");

    // Szego orthogonality and CD-kernel proportionality
    let seq = opuc::verblunsky(&chain, &beta, 0.3).unwrap();
    let report = opuc::szego_verify(&seq, &psi, &table, 5, SEED).unwrap();
    assert!(
        report.max_orthogonality_residual <= 1e-8,
        "Szego residual {:e}",
        report.max_orthogonality_residual
    );
    assert!(
        report.cd_ratio_spread <= 1e-7,
        "CD ratio spread {:e}",
        report.cd_ratio_spread
    );
    println!(
        "PASS criterion 10: kernel {worst_kernel:.2e}, moments {worst_moment:.2e}, chain {worst_chain:.2e}, gap {gap:.3}, |a|max {worst_modulus:.4}, Szego {:.2e}, CD {:.2e}",
        report.max_orthogonality_residual, report.cd_ratio_spread
    );
}

#[test]
fn criterion_06b_lagrange_basis_cardinality() {
    // supporting check used by the quadrature criterion: cardinal property at
    // the nodes of the order-5 rule
    let psi = Measure::one_minus_x();
    let table = RecurrenceTable::generate(&psi, 5).unwrap();
    let zeros = find_zeros(table.w(5)).unwrap();
    let basis = LagrangeBasis::at_zeros(&zeros).unwrap();
    for k in 0..5 {
        for j in 0..5 {
            let v = basis.eval(k, zeros.x[j]).unwrap();
            let expect = if j == k { 1.0 } else { 0.0 };
            assert!((v - expect).abs() <= 1e-12);
        }
    }
    println!("PASS criterion 6 (basis): cardinal property at rule nodes");
}
