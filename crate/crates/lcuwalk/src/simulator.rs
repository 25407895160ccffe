//! End-to-end pipeline: segment planning, composition of amplified segments
//! between the preparation isometries, query accounting, and the exact
//! matrix-exponential oracle used to certify every run.
//!
//! Runs operate on an exact compression of the walk: the span of the
//! prepared columns and their swaps is invariant under the walk step,
//! its adjoint, and therefore every combination the pipeline applies, so the
//! whole simulation is carried out in that subspace's orthonormal
//! coordinates. The restriction is algebraic, not approximate; equality with
//! the dense route is pinned by tests.

use std::time::Instant;

use ndarray::s;
use serde::Serialize;

use crate::bessel::{self, CoefficientSet};
use crate::error::{Error, Result};
use crate::hamiltonian::SparseHamiltonian;
use crate::lcu::{self, SegmentEngine};
use crate::linalg::{self, dagger, eigh, eye, min_singular_value, spectral_norm, CMat, CVec, C64};
use crate::walk;

/// Hard cap on |z| for the large-segment strategy.
pub const MAX_SEGMENT_Z: f64 = 64.0;

/// Segment sizing strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Strategy {
    /// Fixed z = -1/2 per segment; one amplification round each.
    FixedZ,
    /// z = -tau^alpha, trading more Bessel terms for fewer segments.
    Tradeoff { alpha: f64 },
}

impl Strategy {
    pub fn label(&self) -> String {
        match self {
            Strategy::FixedZ => "fixed_z".to_string(),
            Strategy::Tradeoff { alpha } => format!("tradeoff(alpha={alpha})"),
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            Strategy::FixedZ => 0.0,
            Strategy::Tradeoff { alpha } => *alpha,
        }
    }
}

/// One homogeneous batch of segments.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentSpec {
    /// Segment parameter (negative).
    pub z: f64,
    /// Truncation order.
    pub k: usize,
    /// Amplification parameter on the sine lattice.
    pub s: f64,
    /// Amplification rounds.
    pub l_iters: usize,
    /// How many identical segments of this shape run.
    pub count: usize,
}

/// Query ledger under the fixed convention: each W or W† application costs
/// one select; each select costs k controlled-U plus k controlled-U†
/// applications; R^l W contains 2l+1 of them; each controlled walk step
/// costs 2 oracle queries (one index lookup, one paired entry
/// computation/uncomputation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryLedger {
    pub segments: usize,
    pub select_calls: u64,
    pub controlled_walk: u64,
    pub oracle_queries: u64,
}

/// Full plan for one simulation.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentPlan {
    pub t: f64,
    pub epsilon: f64,
    pub x_scale: f64,
    pub d_pow2: usize,
    pub strategy: Strategy,
    /// Total walk phase t·X·d_pow2 to distribute over segments.
    pub total_phase: f64,
    /// Error budget per segment.
    pub per_segment_delta: f64,
    /// nu bound used for certified truncation bounds.
    pub nu_max: f64,
    /// The repeated segment shape (count may be 0 for tiny totals).
    pub main: SegmentSpec,
    /// Final segment absorbing the leftover phase, when any.
    pub residual: Option<SegmentSpec>,
}

impl SegmentPlan {
    pub fn num_segments(&self) -> usize {
        self.main.count + self.residual.as_ref().map_or(0, |r| r.count)
    }

    /// |total simulated phase − t·X·d_pow2|; zero up to roundoff by
    /// construction.
    pub fn phase_mismatch(&self) -> f64 {
        let mut phase = self.main.z.abs() * self.main.count as f64;
        if let Some(r) = &self.residual {
            phase += r.z.abs() * r.count as f64;
        }
        (phase - self.total_phase).abs()
    }

    /// Query accounting; a pure function of the plan.
    pub fn query_count(&self) -> QueryLedger {
        let mut select_calls = 0u64;
        let mut controlled = 0u64;
        let mut specs = vec![&self.main];
        if let Some(r) = &self.residual {
            specs.push(r);
        }
        for spec in specs {
            let per_segment_w = (2 * spec.l_iters + 1) as u64;
            let sel = per_segment_w * spec.count as u64;
            select_calls += sel;
            controlled += sel * 2 * spec.k as u64;
        }
        QueryLedger {
            segments: self.num_segments(),
            select_calls,
            controlled_walk: controlled,
            oracle_queries: 2 * controlled,
        }
    }
}

/// Query accounting for a plan; see [`SegmentPlan::query_count`].
pub fn count_queries(plan: &SegmentPlan) -> QueryLedger {
    plan.query_count()
}

fn nu_bound(h: &SparseHamiltonian, x: f64, d_pow2: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    (h.h_spec / (x * d_pow2 as f64)).min(1.0)
}

fn segment_spec(z: f64, count: usize, delta: f64, nu_max: f64) -> Result<SegmentSpec> {
    let k = bessel::choose_k(z, delta, nu_max)?;
    let coeffs = bessel::lcu_coefficients(z, k)?;
    let (s, l_iters) = lcu::solve_s_l(coeffs.abs_sum);
    Ok(SegmentSpec {
        z,
        k,
        s,
        l_iters,
        count,
    })
}

/// Plan the segment decomposition for simulating `h` for time `t` within
/// `epsilon`.
///
/// X defaults to ‖H‖_max (or 1 for the zero matrix). The final segment
/// absorbs the leftover phase so the total is exact. The per-segment budget
/// is epsilon divided by the realized segment count.
pub fn plan_segments(
    h: &SparseHamiltonian,
    t: f64,
    epsilon: f64,
    strategy: Strategy,
    x_scale: Option<f64>,
) -> Result<SegmentPlan> {
    if t < 0.0 {
        return Err(Error::Parameter("time must be nonnegative".into()));
    }
    if epsilon <= 0.0 {
        return Err(Error::Parameter("error budget must be positive".into()));
    }
    let x = x_scale.unwrap_or(if h.h_max > 0.0 { h.h_max } else { 1.0 });
    if x <= 0.0 {
        return Err(Error::Parameter("scale X must be positive".into()));
    }
    let d_pow2 = h.d.next_power_of_two();
    let total_phase = t * x * d_pow2 as f64;
    let nu_max = nu_bound(h, x, d_pow2);

    let z_mag = match strategy {
        Strategy::FixedZ => 0.5,
        Strategy::Tradeoff { alpha } => {
            if !(0.0..=1.0).contains(&alpha) || alpha == 0.0 {
                return Err(Error::Parameter(format!(
                    "tradeoff exponent must lie in (0, 1], got {alpha}"
                )));
            }
            total_phase.powf(alpha).min(MAX_SEGMENT_Z).max(f64::MIN_POSITIVE)
        }
    };

    if total_phase == 0.0 {
        return Ok(SegmentPlan {
            t,
            epsilon,
            x_scale: x,
            d_pow2,
            strategy,
            total_phase,
            per_segment_delta: epsilon,
            nu_max,
            main: SegmentSpec {
                z: -z_mag,
                k: 1,
                s: 1.0,
                l_iters: 0,
                count: 0,
            },
            residual: None,
        });
    }

    // Tolerant ceiling so a few ulps of phase cannot spawn a sliver segment;
    // the residual absorbs the exact leftover either way.
    let num_segments = ((total_phase / z_mag - 1e-9).ceil().max(1.0)) as usize;
    let delta = epsilon / num_segments as f64;
    let full_count = num_segments - 1;
    let rem = total_phase - z_mag * full_count as f64;
    let main = segment_spec(-z_mag, full_count, delta, nu_max)?;
    let residual = Some(segment_spec(-rem, 1, delta, nu_max)?);
    Ok(SegmentPlan {
        t,
        epsilon,
        x_scale: x,
        d_pow2,
        strategy,
        total_phase,
        per_segment_delta: delta,
        nu_max,
        main,
        residual,
    })
}

/// Exact evolution e^{-iHt} through the eigendecomposition H = QΛQ†.
pub fn exact_evolution(h: &SparseHamiltonian, t: f64) -> Result<CMat> {
    let (vals, vecs) = eigh(h.matrix())?;
    let dim = h.dim();
    let mut scaled = vecs.clone();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let phase = C64::from_polar(1.0, -vals[j] * t);
        for v in col.iter_mut() {
            *v *= phase;
        }
    }
    let u = scaled.dot(&dagger(&vecs));
    let resid = linalg::unitarity_residual(&u);
    if resid > 1e-12 {
        return Err(Error::Numeric(format!(
            "exact evolution lost unitarity: residual {resid}"
        )));
    }
    let _ = dim;
    Ok(u)
}

/// The walk restricted to the invariant subspace spanned by the prepared
/// columns and their swaps.
#[derive(Debug, Clone)]
pub struct CompressedWalk {
    /// Subspace dimension r ≤ 2N.
    pub r_dim: usize,
    /// U restricted to the subspace, r×r unitary.
    pub u_small: CMat,
    /// Coordinates of the prepared columns, r×N.
    pub t_small: CMat,
    pub x_scale: f64,
    pub d_pow2: usize,
}

/// Build the compressed walk operators.
///
/// The subspace span{T|j,0⟩, ST|j,0⟩} is closed under U and U† exactly, so
/// restriction loses nothing; the invariance residual is checked and must sit
/// at roundoff level.
pub fn compress_walk(h: &SparseHamiltonian, x_scale: f64) -> Result<CompressedWalk> {
    let d_pow2 = h.d.next_power_of_two();
    let t_full = walk::build_isometry(h, x_scale, d_pow2)?;
    let dim = h.dim();
    let dim_small = 2 * dim;
    let swap = walk::SwapPermutation::new(dim_small);
    let mut t0 = CMat::zeros((t_full.nrows(), dim));
    for j in 0..dim {
        t0.column_mut(j).assign(&t_full.column(2 * j));
    }
    let st0 = swap.apply_panel(&t0);
    let mut panel = CMat::zeros((t_full.nrows(), 2 * dim));
    panel.slice_mut(s![.., ..dim]).assign(&t0);
    panel.slice_mut(s![.., dim..]).assign(&st0);
    let q = linalg::orthonormal_columns(&panel, 1e-7)?;
    let r_dim = q.ncols();
    // U Q via the operator form U X = iS(2T(T†X) − X)
    let t_dag_q = dagger(&t_full).dot(&q);
    let mut inner = t_full.dot(&t_dag_q);
    inner.mapv_inplace(|v| v * 2.0);
    let uq = {
        let combined = &inner - &q;
        let swapped = swap.apply_panel(&combined);
        swapped.mapv(|v| v * linalg::I)
    };
    let u_small = dagger(&q).dot(&uq);
    let closure = &uq - &q.dot(&u_small);
    let closure_resid = linalg::fro_norm(&closure);
    if closure_resid > 1e-9 {
        return Err(Error::Numeric(format!(
            "walk subspace failed to close: residual {closure_resid}"
        )));
    }
    let unit = linalg::unitarity_residual(&u_small);
    if unit > 1e-11 {
        return Err(Error::Numeric(format!(
            "compressed walk is not unitary: residual {unit}"
        )));
    }
    let t_small = dagger(&q).dot(&t0);
    Ok(CompressedWalk {
        r_dim,
        u_small,
        t_small,
        x_scale,
        d_pow2,
    })
}

/// The infinite-order segment unitary exp((z/2)(U − U†)) on the compressed
/// space, via the Hermitian generator.
pub fn segment_limit_unitary(u_small: &CMat, z: f64) -> Result<CMat> {
    let anti = u_small - &dagger(u_small);
    // -i(z/2)(U - U†) is Hermitian; the limit is exp(i * that).
    let herm = anti.mapv(|v| v * C64::new(0.0, -0.5 * z));
    let (vals, vecs) = eigh(&herm)?;
    let mut scaled = vecs.clone();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let phase = C64::from_polar(1.0, vals[j]);
        for v in col.iter_mut() {
            *v *= phase;
        }
    }
    Ok(scaled.dot(&dagger(&vecs)))
}

/// Measured diagnostics for one homogeneous segment batch.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentDiagnostics {
    pub z: f64,
    pub k: usize,
    /// Measured ‖V_k − V_∞‖ on the walk-relevant subspace.
    pub truncation_measured: f64,
    /// Certified bound the measurement must stay under.
    pub truncation_bound: f64,
}

/// Everything one run produces.
#[derive(Debug, Clone, Serialize)]
pub struct ReportParams {
    pub n: usize,
    pub d: usize,
    pub d_pow2: usize,
    pub x_scale: f64,
    pub t: f64,
    pub epsilon: f64,
    pub strategy: String,
    pub alpha: f64,
    /// tau = t · X · d_pow2.
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub params: ReportParams,
    pub spectral_error: f64,
    /// 2 × spectral error (operator diamond-norm bound).
    pub diamond_bound: f64,
    /// 4 × spectral error (channel form with discarded ancilla outcomes).
    pub channel_diamond_bound: f64,
    /// 1 − smallest singular value of the effective block.
    pub success_amplitude_deficit: f64,
    pub queries: u64,
    pub segments: usize,
    pub k: usize,
    pub s: f64,
    pub l: usize,
    pub wall_ms: f64,
    pub segment_diagnostics: Vec<SegmentDiagnostics>,
    /// The effective block on the original space (not serialized).
    #[serde(skip)]
    pub effective: CMat,
}

/// Run the full pipeline for a plan and compare against the exact oracle.
pub fn run(h: &SparseHamiltonian, plan: &SegmentPlan) -> Result<SimulationReport> {
    let start = Instant::now();
    let dim = h.dim();
    let exact = exact_evolution(h, plan.t)?;
    let mut diagnostics = Vec::new();

    let effective = if plan.num_segments() == 0 {
        eye(dim)
    } else {
        let cw = compress_walk(h, plan.x_scale)?;
        let mut chain = eye(cw.r_dim);
        let mut specs: Vec<&SegmentSpec> = Vec::new();
        if plan.main.count > 0 {
            specs.push(&plan.main);
        }
        if let Some(r) = &plan.residual {
            specs.push(r);
        }
        for spec in specs {
            let coeffs: CoefficientSet = bessel::lcu_coefficients(spec.z, spec.k)?;
            let cert = bessel::truncation_bound(spec.z, spec.k, plan.nu_max)?;
            let engine =
                SegmentEngine::new(&cw.u_small, coeffs.values(), spec.s, spec.l_iters, cert)?;
            let v_k = engine.combination(coeffs.values());
            let v_inf = segment_limit_unitary(&cw.u_small, spec.z)?;
            let measured = spectral_norm(&(&v_k - &v_inf));
            diagnostics.push(SegmentDiagnostics {
                z: spec.z,
                k: spec.k,
                truncation_measured: measured,
                truncation_bound: cert,
            });
            let block = engine.amplified_block()?;
            for _ in 0..spec.count {
                chain = block.effective.dot(&chain);
            }
        }
        let projected = dagger(&cw.t_small).dot(&chain).dot(&cw.t_small);
        projected
    };

    let spectral_error = spectral_norm(&(&effective - &exact));
    let deficit = (1.0 - min_singular_value(&effective)).max(0.0);
    let ledger = plan.query_count();
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(SimulationReport {
        params: ReportParams {
            n: h.n,
            d: h.d,
            d_pow2: plan.d_pow2,
            x_scale: plan.x_scale,
            t: plan.t,
            epsilon: plan.epsilon,
            strategy: plan.strategy.label(),
            alpha: plan.strategy.alpha(),
            tau: plan.total_phase,
        },
        spectral_error,
        diamond_bound: 2.0 * spectral_error,
        channel_diamond_bound: 4.0 * spectral_error,
        success_amplitude_deficit: deficit,
        queries: ledger.oracle_queries,
        segments: ledger.segments,
        k: plan.main.k.max(plan.residual.as_ref().map_or(0, |r| r.k)),
        s: plan.main.s,
        l: plan.main.l_iters,
        wall_ms,
        segment_diagnostics: diagnostics,
        effective,
    })
}

/// Apply U ⊗ I to a pure state on system ⊗ reference, both of dimension
/// `dim`.
fn apply_left(u: &CMat, psi: &CVec) -> CVec {
    let dim = u.nrows();
    let m = psi
        .to_shape((dim, dim))
        .expect("state must have dim^2 entries")
        .to_owned();
    let out = u.dot(&m);
    out.to_shape(dim * dim).expect("same size").to_owned()
}

/// Sampled check of the diamond-norm inequality: for random pure states on
/// the doubled space, the trace distance of the two output states never
/// exceeds 2‖U − V‖. Returns the largest observed ratio to the bound.
pub fn diamond_bound_check(u: &CMat, v: &CMat, trials: usize, seed: u64) -> Result<f64> {
    let nu = spectral_norm(u);
    let nv = spectral_norm(v);
    if nu > 1.0 + 1e-10 || nv > 1.0 + 1e-10 {
        return Err(Error::Parameter(format!(
            "diamond check requires contractions, got norms {nu}, {nv}"
        )));
    }
    if u.dim() != v.dim() {
        return Err(Error::Dimension("operator shapes differ".into()));
    }
    let dim = u.nrows();
    let bound = 2.0 * spectral_norm(&(u - v));
    let ratios = crate::batch::indexed_map(trials, |trial| {
        let mut rng =
            linalg::seeded_rng(seed ^ (trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let psi = linalg::random_state(&mut rng, dim * dim);
        let a = apply_left(u, &psi);
        let b = apply_left(v, &psi);
        let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
        let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
        // trace norm of a rank-2 difference of pure-state projectors
        let inside = ((na + nb) * (na + nb) - 4.0 * overlap.norm_sqr()).max(0.0);
        inside.sqrt()
    });
    let mut worst_ratio = 0.0_f64;
    for trace_dist in ratios {
        if trace_dist > bound + 1e-10 {
            return Err(Error::Verification(format!(
                "trace distance {trace_dist} exceeded diamond bound {bound}"
            )));
        }
        if bound > 1e-14 {
            worst_ratio = worst_ratio.max(trace_dist / bound);
        }
    }
    Ok(worst_ratio)
}

/// Largest path length N for which the combined lower-bound condition
/// ε < ½ |sin(t d / N)|^N holds, scanning N = 1..10^6; zero when none.
pub fn combined_lower_bound(t: f64, d: f64, epsilon: f64) -> Result<u64> {
    if t <= 0.0 || d <= 0.0 {
        return Err(Error::Parameter("t and d must be positive".into()));
    }
    if epsilon <= 0.0 {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    let log_target = (2.0 * epsilon).ln();
    let mut best = 0u64;
    for n in 1..=1_000_000u64 {
        let s = (t * d / n as f64).sin().abs();
        if s == 0.0 {
            continue;
        }
        // epsilon < 0.5 s^N  <=>  ln(2 eps) < N ln s
        if log_target < n as f64 * s.ln() {
            best = n;
        }
    }
    Ok(best)
}
