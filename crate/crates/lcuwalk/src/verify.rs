//! Fixed-seed verification suites.
//!
//! Each suite measures the quantities its invariants talk about and compares
//! them against tolerances pinned in [`tolerances`]; the CLI `verify`
//! subcommand and the acceptance test target both drive these functions, so
//! there is exactly one definition of every threshold.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::bessel;
use crate::error::Result;
use crate::hamiltonian::{
    blown_up_uniform_state, make_blown_up_parity, make_parity_path, make_random_sparse,
    ParitySpec, ParityVariant, SparseHamiltonian,
};
use crate::lcu;
use crate::linalg::{self, spectral_norm, CMat, CVec, C64};
use crate::simulator::{self, Strategy};
use crate::walk;

/// Every tolerance and threshold used by the suites, pinned in one place.
pub mod tolerances {
    /// Walk spectral correspondence residual.
    pub const WALK_EIG_RESIDUAL: f64 = 1e-9;
    /// Eigenvalue agreement between the two walk sectors.
    pub const SECTOR_AGREEMENT: f64 = 1e-12;
    /// Exact-unitary oblivious amplitude amplification.
    pub const EXACT_AMPLIFICATION: f64 = 1e-10;
    /// Direct vs closed-form amplification iterate.
    pub const CHEBYSHEV_RESIDUAL: f64 = 1e-9;
    /// Amplification error per unit of coefficient non-unitarity.
    pub const ROBUSTNESS_SLOPE: f64 = 10.0;
    /// Recurrence vs series-oracle deviation.
    pub const BESSEL_ORACLE_DEVIATION: f64 = 1e-13;
    /// Slack on the square-sum identity.
    pub const BESSEL_SQUARE_SUM_SLACK: f64 = 1e-12;
    /// Empirical constant on the absolute-sum growth.
    pub const ABS_SUM_RATIO: f64 = 2.0;
    /// Parity transport fidelity.
    pub const PARITY_FIDELITY: f64 = 0.999;
    /// Exact-oracle parity fidelity for the double path.
    pub const PARITY_EXACT_FIDELITY_DEFECT: f64 = 1e-10;
    /// Additive slack on the truncation-order envelope.
    pub const K_ENVELOPE_SLACK: f64 = 10.0;
    /// Relative residual of the fitted query envelope.
    pub const QUERY_FIT_RESIDUAL: f64 = 0.25;
    /// Diamond-norm sample ratio cap.
    pub const DIAMOND_RATIO: f64 = 1.0 + 1e-10;
}

/// One measured check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// The measured quantity (context-dependent; see `name`).
    pub measured: f64,
    /// The bound it must respect.
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn upper(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    fn lower(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            pass: measured >= bound,
        }
    }
}

/// Result of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub wall_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn finish(suite: &str, checks: Vec<Check>, start: Instant) -> SuiteReport {
    SuiteReport {
        suite: suite.to_string(),
        checks,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// The 20 seeded random instances used by the walk and sector suites:
/// all feasible (n, d) combinations with n ≤ 2, d ∈ {1, 2, 4}, four seeds
/// each.
pub fn walk_instance_grid(seed: u64) -> Vec<SparseHamiltonian> {
    let combos: [(usize, usize); 5] = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 4)];
    let mut out = Vec::new();
    for (i, &(n, d)) in combos.iter().enumerate() {
        for rep in 0..4u64 {
            let s = seed.wrapping_add(100 * i as u64 + rep);
            out.push(make_random_sparse(n, d, 1.0, s).expect("grid instance"));
        }
    }
    out
}

/// Walk spectral correspondence plus sector independence over the instance
/// grid.
pub fn walk_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut max_eig = 0.0_f64;
    let mut max_vec = 0.0_f64;
    let mut max_sector = 0.0_f64;
    let coeffs = bessel::lcu_coefficients(-0.5, 6)?;
    for h in walk_instance_grid(seed) {
        let ws = walk::WalkSystem::build(&h, None)?;
        let report = walk::spectral_check(&ws)?;
        max_eig = max_eig.max(report.max_eig_mismatch);
        max_vec = max_vec.max(report.max_vector_residual);
        max_sector = max_sector.max(sector_disagreement(&ws, coeffs.values())?);
    }
    let checks = vec![
        Check::upper(
            "walk eigenvalues contain both predicted branches",
            max_eig,
            tolerances::WALK_EIG_RESIDUAL,
        ),
        Check::upper(
            "walk eigenvector formula residual",
            max_vec,
            tolerances::WALK_EIG_RESIDUAL,
        ),
        Check::upper(
            "combination eigenvalues agree across sectors",
            max_sector,
            tolerances::SECTOR_AGREEMENT,
        ),
    ];
    Ok(finish("walk", checks, start))
}

/// Largest disagreement between the combination eigenvalue on the two walk
/// sectors of each Hamiltonian eigenvector, measured both through the scalar
/// power sums and through Rayleigh quotients of the assembled matrix.
fn sector_disagreement(ws: &walk::WalkSystem, coeffs: &[f64]) -> Result<f64> {
    let (lambdas, vecs) = linalg::eigh(ws.h.matrix())?;
    let k = (coeffs.len() - 1) / 2;
    let v_k = {
        let pows = lcu::walk_powers(&ws.walk, k);
        let mut acc = CMat::zeros((ws.dim_big, ws.dim_big));
        for (idx, p) in pows.iter().enumerate() {
            acc.scaled_add(C64::new(coeffs[idx], 0.0), p);
        }
        acc
    };
    let mut worst = 0.0_f64;
    for (i, &lambda) in lambdas.iter().enumerate() {
        let nu = ws.nu(lambda);
        let (mu_p, mu_m) = walk::mu_pm(nu);
        // scalar route
        let scalar_gap =
            (lcu::power_sum(coeffs, mu_p) - lcu::power_sum(coeffs, mu_m)).norm();
        worst = worst.max(scalar_gap);
        // matrix route via Rayleigh quotients on the explicit eigenvectors
        let embedded = ws.embed_b0(&vecs.column(i).to_owned());
        let t_lam = ws.isometry.dot(&embedded);
        let st_lam = ws.swap.apply_vec(&t_lam);
        let mut quotients = Vec::new();
        for mu in [mu_p, mu_m] {
            let w: CVec = &t_lam + &st_lam.mapv(|v| v * (linalg::I * mu));
            let norm_sq: f64 = w.iter().map(|v| v.norm_sqr()).sum();
            if norm_sq < 1e-16 {
                continue; // |nu| = 1 collapses the sector pair
            }
            let vw = v_k.dot(&w);
            let quotient: C64 =
                w.iter().zip(vw.iter()).map(|(a, b)| a.conj() * b).sum::<C64>()
                    / C64::new(norm_sq, 0.0);
            quotients.push(quotient);
        }
        if quotients.len() == 2 {
            worst = worst.max((quotients[0] - quotients[1]).norm());
        }
    }
    Ok(worst)
}

/// Bessel suites: oracle equivalence, square-sum identity, absolute-sum
/// growth, and the pointwise generating-function certificate.
pub fn bessel_suite() -> Result<SuiteReport> {
    let start = Instant::now();
    let mut checks = Vec::new();

    // Miller vs series over |z| ≤ 30, k ≤ 60.
    let mut worst_dev = 0.0_f64;
    for &z in &[
        -30.0, -24.0, -18.0, -12.0, -8.0, -5.0, -3.7, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.7, 5.0,
        8.0, 12.0, 18.0, 24.0, 30.0,
    ] {
        let row = bessel::bessel_row(z, 60);
        for m in -60..=60_i64 {
            let dev = (row[(m + 60) as usize] - bessel::series_reference(z, m)).abs();
            worst_dev = worst_dev.max(dev);
        }
    }
    checks.push(Check::upper(
        "recurrence matches series oracle",
        worst_dev,
        tolerances::BESSEL_ORACLE_DEVIATION,
    ));

    let mut worst_sq = 0.0_f64;
    for &z in &[-30.0, -8.0, -2.0, -0.5, 1.0, 13.0, 27.0] {
        let row = bessel::bessel_row(z, 60);
        worst_sq = worst_sq.max(row.iter().map(|v| v * v).sum::<f64>());
    }
    checks.push(Check::upper(
        "squared row sums stay at most one",
        worst_sq,
        1.0 + tolerances::BESSEL_SQUARE_SUM_SLACK,
    ));

    let mut worst_ratio = 0.0_f64;
    for z in 1..=100usize {
        let s = bessel::abs_sum_estimate(z as f64);
        worst_ratio = worst_ratio.max(s / (z as f64).sqrt());
    }
    checks.push(Check::upper(
        "absolute sum grows like the square root",
        worst_ratio,
        tolerances::ABS_SUM_RATIO,
    ));

    // Pointwise truncation certificate on the unit circle.
    let mut worst_margin = f64::NEG_INFINITY; // measured - bound, must stay <= 0
    for &z in &[-0.5f64, -2.0, -8.0] {
        let k_min = z.abs().ceil() as usize;
        for k in k_min..=(k_min + 12) {
            let c = bessel::lcu_coefficients(z, k)?;
            let bound = bessel::truncation_bound(z, k, 1.0)?;
            if bound.is_infinite() {
                continue;
            }
            for j in 0..100 {
                let theta =
                    -std::f64::consts::PI + std::f64::consts::TAU * (j as f64 + 0.5) / 100.0;
                let mu = Complex64::from_polar(1.0, theta);
                let measured =
                    (lcu::power_sum(c.values(), mu) - Complex64::from_polar(1.0, theta.sin() * z))
                        .norm();
                worst_margin = worst_margin.max(measured - bound);
            }
        }
    }
    checks.push(Check::upper(
        "generating-function error sits under the certificate",
        worst_margin,
        0.0,
    ));

    Ok(finish("bessel", checks, start))
}

/// LCU suites: exact amplification on the sine lattice, the Chebyshev closed
/// form, and robustness to near-unitary combinations.
pub fn lcu_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut rng = linalg::seeded_rng(seed);

    // Exact-unitary amplification at four lattice points, ten instances each.
    let mut worst_amp = 0.0_f64;
    for l in 0..=3usize {
        let s = lcu::lattice_s(l);
        for _ in 0..10 {
            let u = linalg::random_unitary(&mut rng, 4);
            let mut coeffs = vec![0.0; 3];
            let m_choice = (rng.next_u64() % 3) as usize;
            coeffs[m_choice] = 1.0;
            let engine = lcu::SegmentEngine::new(&u, &coeffs, s, l, 0.0)?;
            let block = engine.amplified_block()?;
            let target = &lcu::walk_powers(&u, 1)[m_choice];
            worst_amp = worst_amp.max(spectral_norm(&(&block.effective - target)));
        }
    }
    checks.push(Check::upper(
        "exact amplification reproduces the unitary",
        worst_amp,
        tolerances::EXACT_AMPLIFICATION,
    ));

    // Chebyshev closed form on random unitaries.
    let mut worst_cheb = 0.0_f64;
    for _ in 0..5 {
        let w = linalg::random_unitary(&mut rng, 16);
        worst_cheb = worst_cheb.max(lcu::chebyshev_formula_check(&w, 4, 3)?);
    }
    checks.push(Check::upper(
        "closed-form iterate matches direct powers",
        worst_cheb,
        tolerances::CHEBYSHEV_RESIDUAL,
    ));

    // Robustness: amplification error stays within a constant of the
    // distance from unitarity.
    let mut worst_slope = 0.0_f64;
    for &delta in &[1e-6, 1e-5, 1e-4, 1e-3] {
        let v = linalg::random_unitary(&mut rng, 4);
        let mut pert = CMat::zeros((4, 4));
        for r in 0..4 {
            for c in 0..r {
                let x = C64::new(gaussian(&mut rng), gaussian(&mut rng));
                pert[[r, c]] = x;
                pert[[c, r]] = x.conj();
            }
            pert[[r, r]] = C64::new(gaussian(&mut rng), 0.0);
        }
        let scale = delta / spectral_norm(&pert);
        let mut near = CMat::eye(4);
        near.scaled_add(C64::new(scale, 0.0), &pert);
        let v_tilde = v.dot(&near);
        let w = lcu::dilation_w(&v_tilde, 2.0, 6)?;
        let block = lcu::amplified_block_dense(&w, 4, 2.0, 1, delta)?;
        let err = spectral_norm(&(&block.effective - &v_tilde));
        worst_slope = worst_slope.max(err / delta);
    }
    checks.push(Check::upper(
        "amplification error per unit perturbation",
        worst_slope,
        tolerances::ROBUSTNESS_SLOPE,
    ));

    Ok(finish("lcu", checks, start))
}

fn gaussian(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

use rand::RngCore;

/// Diamond-norm inequality over sampled pure states, ten operator pairs.
pub fn diamond_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = linalg::seeded_rng(seed);
    let mut worst = 0.0_f64;
    for pair in 0..10u64 {
        let u = linalg::random_unitary(&mut rng, 6);
        let v = linalg::random_unitary(&mut rng, 6);
        let ratio = simulator::diamond_bound_check(&u, &v, 200, seed ^ pair)?;
        worst = worst.max(ratio);
    }
    let checks = vec![Check::upper(
        "trace distance over twice the spectral distance",
        worst,
        tolerances::DIAMOND_RATIO,
    )];
    Ok(finish("diamond", checks, start))
}

/// Fidelity of the effective evolution against the parity target state.
pub fn parity_transport_fidelity(
    effective: &CMat,
    spec: &ParitySpec,
    dim: usize,
) -> f64 {
    let start_state = blown_up_uniform_state(spec, 0, 0, dim);
    let target = blown_up_uniform_state(spec, spec.path_len, spec.parity() as usize, dim);
    let evolved = effective.dot(&start_state);
    let overlap: C64 = target
        .iter()
        .zip(evolved.iter())
        .map(|(t, e)| t.conj() * e)
        .sum();
    overlap.norm()
}

/// Parity workloads: exact-oracle transport on the double path and
/// end-to-end transport on the blown-up family.
pub fn parity_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = linalg::seeded_rng(seed);
    let mut checks = Vec::new();

    // Exact oracle moves |0,0> to |N, parity(x)> at t = pi/2.
    let mut worst_defect = 0.0_f64;
    for n_len in [2usize, 4, 8] {
        let bits: Vec<bool> = (0..n_len).map(|_| rng.next_u64() % 2 == 1).collect();
        let spec = ParitySpec::new(n_len, bits, 1)?;
        let h2 = make_parity_path(&spec, ParityVariant::H2)?;
        let u = simulator::exact_evolution(&h2, std::f64::consts::FRAC_PI_2)?;
        let mut start_state = CVec::zeros(h2.dim());
        start_state[0] = linalg::ONE;
        let evolved = u.dot(&start_state);
        let target_idx = 2 * n_len + spec.parity() as usize;
        let fidelity = evolved[target_idx].norm();
        worst_defect = worst_defect.max(1.0 - fidelity);
    }
    checks.push(Check::upper(
        "exact double-path transport infidelity",
        worst_defect,
        tolerances::PARITY_EXACT_FIDELITY_DEFECT,
    ));

    // Simulated blown-up transport at the parity time.
    let mut worst_fidelity = 1.0_f64;
    for n_len in [2usize, 4, 8] {
        for d_blow in [1usize, 2, 3] {
            let bits: Vec<bool> = (0..n_len).map(|_| rng.next_u64() % 2 == 1).collect();
            let spec = ParitySpec::new(n_len, bits, d_blow)?;
            let h = make_blown_up_parity(&spec)?;
            let t = n_len as f64 * std::f64::consts::PI / (2.0 * d_blow as f64);
            let plan = simulator::plan_segments(&h, t, 1e-4, Strategy::FixedZ, None)?;
            let report = simulator::run(&h, &plan)?;
            let fid = parity_transport_fidelity(&report.effective, &spec, h.dim());
            worst_fidelity = worst_fidelity.min(fid);
        }
    }
    checks.push(Check::lower(
        "simulated blown-up parity fidelity",
        worst_fidelity,
        tolerances::PARITY_FIDELITY,
    ));

    Ok(finish("parity", checks, start))
}

/// End-to-end accuracy over mixed instances and both strategies.
pub fn simulation_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut checks = Vec::new();

    // Ten fixed-z runs across sizes, sparsities, and budgets.
    let cases: [(usize, usize, f64, f64); 10] = [
        (1, 1, 2.0, 1e-4),
        (1, 2, 2.0, 1e-6),
        (2, 2, 2.0, 1e-8),
        (2, 4, 1.5, 1e-8),
        (2, 3, 1.0, 1e-6),
        (2, 1, 2.0, 1e-4),
        (1, 2, 1.0, 1e-8),
        (2, 2, 1.0, 1e-4),
        (2, 4, 2.0, 1e-6),
        (2, 2, 0.5, 1e-8),
    ];
    let mut worst_excess = f64::NEG_INFINITY; // error / budget
    let mut worst_cert = f64::NEG_INFINITY; // measured - bound per segment
    let mut worst_leak = f64::NEG_INFINITY; // deficit - allowance
    for (i, &(n, d, t, eps)) in cases.iter().enumerate() {
        let h = make_random_sparse(n, d, 1.0, seed.wrapping_add(i as u64))?;
        let plan = simulator::plan_segments(&h, t, eps, Strategy::FixedZ, None)?;
        let report = simulator::run(&h, &plan)?;
        worst_excess = worst_excess.max(report.spectral_error / eps);
        for diag in &report.segment_diagnostics {
            worst_cert = worst_cert.max(diag.truncation_measured - diag.truncation_bound);
        }
        let allowance =
            2.0 * plan.per_segment_delta * plan.num_segments() as f64 + 1e-10;
        worst_leak = worst_leak.max(report.success_amplitude_deficit - allowance);
    }
    checks.push(Check::upper(
        "spectral error over budget (fixed segments)",
        worst_excess,
        1.0,
    ));
    checks.push(Check::upper(
        "per-segment truncation under its certificate",
        worst_cert,
        0.0,
    ));
    checks.push(Check::upper(
        "success-amplitude leakage within allowance",
        worst_leak,
        0.0,
    ));

    // Tradeoff strategy including the single-segment extreme.
    let mut worst_tradeoff = f64::NEG_INFINITY;
    let mut single_segment_ok = true;
    for &tau in &[4.0, 8.0, 16.0] {
        for &alpha in &[0.5, 1.0] {
            let h = make_random_sparse(1, 1, 1.0, seed.wrapping_add(900 + tau as u64))?;
            let t = tau / h.h_max; // d_pow2 = 1 for diagonal instances
            let plan =
                simulator::plan_segments(&h, t, 1e-4, Strategy::Tradeoff { alpha }, None)?;
            if alpha == 1.0 && plan.num_segments() != 1 {
                single_segment_ok = false;
            }
            let report = simulator::run(&h, &plan)?;
            worst_tradeoff = worst_tradeoff.max(report.spectral_error / 1e-4);
        }
    }
    checks.push(Check::upper(
        "spectral error over budget (large segments)",
        worst_tradeoff,
        1.0,
    ));
    checks.push(Check::upper(
        "single-segment planning at the extreme exponent",
        if single_segment_ok { 0.0 } else { 1.0 },
        0.0,
    ));

    Ok(finish("simulation", checks, start))
}

/// Query and truncation-order scaling against the analytic envelopes.
pub fn scaling_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let h = make_random_sparse(1, 1, 1.0, seed)?;

    // Truncation order against the log/loglog envelope over an epsilon sweep.
    let mut prev_k = 0usize;
    let mut monotone = true;
    let mut worst_k_excess = f64::NEG_INFINITY;
    for exp in 1..=6 {
        let eps = 10f64.powi(-2 * exp);
        let plan = simulator::plan_segments(&h, 4.0 / h.h_max, eps, Strategy::FixedZ, None)?;
        let k = plan.main.k.max(plan.residual.as_ref().map_or(0, |r| r.k));
        if k < prev_k {
            monotone = false;
        }
        prev_k = k;
        let log_inv = (1.0 / eps).ln();
        let envelope = 2.0 * log_inv / log_inv.ln() + tolerances::K_ENVELOPE_SLACK;
        worst_k_excess = worst_k_excess.max(k as f64 - envelope);
    }
    checks.push(Check::upper(
        "truncation order nondecreasing in accuracy",
        if monotone { 0.0 } else { 1.0 },
        0.0,
    ));
    checks.push(Check::upper(
        "truncation order under the log/loglog envelope",
        worst_k_excess,
        0.0,
    ));

    // Query totals against a fitted tau log(tau/eps)/loglog envelope.
    let eps = 1e-6;
    let mut points = Vec::new();
    for &tau in &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let plan = simulator::plan_segments(&h, tau / h.h_max, eps, Strategy::FixedZ, None)?;
        let q = plan.query_count().oracle_queries as f64;
        let x = (tau / eps).ln();
        let f = tau * x / x.ln();
        points.push((q, f));
    }
    let c = {
        let num: f64 = points.iter().map(|(q, f)| q * f).sum();
        let den: f64 = points.iter().map(|(_, f)| f * f).sum();
        num / den
    };
    let worst_fit = points
        .iter()
        .map(|(q, f)| ((q - c * f) / (c * f)).abs())
        .fold(0.0_f64, f64::max);
    checks.push(Check::upper(
        "query totals within the fitted envelope",
        worst_fit,
        tolerances::QUERY_FIT_RESIDUAL,
    ));

    // Monotone query growth with tau.
    let mut prev_q = 0u64;
    let mut q_monotone = true;
    for &tau in &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let plan = simulator::plan_segments(&h, tau / h.h_max, eps, Strategy::FixedZ, None)?;
        let q = plan.query_count().oracle_queries;
        if q < prev_q {
            q_monotone = false;
        }
        prev_q = q;
    }
    checks.push(Check::upper(
        "query totals nondecreasing in tau",
        if q_monotone { 0.0 } else { 1.0 },
        0.0,
    ));

    Ok(finish("scaling", checks, start))
}

/// All suites in a fixed order.
pub fn all_suites(seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        walk_suite(seed)?,
        bessel_suite()?,
        lcu_suite(seed)?,
        diamond_suite(seed)?,
        parity_suite(seed)?,
        simulation_suite(seed)?,
        scaling_suite(seed)?,
    ])
}

/// Look up one suite by CLI name.
pub fn suite_by_name(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    match name {
        "walk" => Ok(vec![walk_suite(seed)?]),
        "bessel" => Ok(vec![bessel_suite()?]),
        "lcu" => Ok(vec![lcu_suite(seed)?]),
        "diamond" => Ok(vec![diamond_suite(seed)?]),
        "parity" => Ok(vec![parity_suite(seed)?]),
        "simulation" => Ok(vec![simulation_suite(seed)?]),
        "scaling" => Ok(vec![scaling_suite(seed)?]),
        "all" => all_suites(seed),
        other => Err(crate::error::Error::Parameter(format!(
            "unknown suite '{other}'"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_grid_has_twenty_members() {
        let grid = walk_instance_grid(7);
        assert_eq!(grid.len(), 20);
    }

    #[test]
    fn suite_names_resolve() {
        assert!(suite_by_name("nonsense", 1).is_err());
    }
}
