//! Linear-combination-of-unitaries machinery: the select operator, the
//! block-encoding unitary W, oblivious amplitude amplification, and the
//! Chebyshev closed form for the amplification iterate.
//!
//! Ancilla layout: a flag qubit tensor an M-dimensional selector, joint index
//! flag·M + (m + k); the distinguished state |00⟩ is index 0. Joint space
//! indices are ancilla-major: ancilla·D + system.
//!
//! Two W constructions are provided. [`build_w`] assembles the
//! preparation-select-unpreparation product; the left factor is the transpose
//! of the preparation, i.e. the adjoint of the entrywise-conjugated
//! preparation, so amplitude *squares* (not squared magnitudes) weight the
//! combination and signed coefficients come out exactly. [`dilation_w`]
//! embeds an arbitrary contraction directly, which is what the robustness
//! experiments need.

use std::f64::consts::PI;

use ndarray::s;

use crate::error::{Error, Result};
use crate::linalg::{self, dagger, eye, hermitian_fn, kron, spectral_norm, CMat, C64};

/// Tolerance for the exact sine condition sin(π/(2(2ℓ+1))) = 1/s.
pub const SINE_CONDITION_TOL: f64 = 1e-12;

/// The amplification lattice value s(ℓ) = 1/sin(π/(2(2ℓ+1))).
pub fn lattice_s(l_iters: usize) -> f64 {
    1.0 / (PI / (2.0 * (2 * l_iters + 1) as f64)).sin()
}

/// Smallest ℓ with s(ℓ) ≥ a, returning (s(ℓ), ℓ).
pub fn solve_s_l(abs_sum: f64) -> (f64, usize) {
    let mut l = 0usize;
    loop {
        let s = lattice_s(l);
        if s >= abs_sum - 1e-12 {
            return (s, l);
        }
        l += 1;
    }
}

/// Check the exact sine condition for a given pair.
pub fn sine_condition(s: f64, l_iters: usize) -> Result<()> {
    let expected = (PI / (2.0 * (2 * l_iters + 1) as f64)).sin();
    if (expected - 1.0 / s).abs() > SINE_CONDITION_TOL {
        return Err(Error::Parameter(format!(
            "sine condition violated: sin(pi/(2(2*{l_iters}+1))) = {expected}, 1/s = {}",
            1.0 / s
        )));
    }
    Ok(())
}

/// Signed square root: √x for x ≥ 0, i√|x| for x < 0.
fn signed_sqrt(x: f64) -> C64 {
    if x >= 0.0 {
        C64::new(x.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-x).sqrt())
    }
}

/// Σ a_m μ^m over m = -k..k for a scalar μ on the unit circle.
pub fn power_sum(coeffs: &[f64], mu: C64) -> C64 {
    let k = (coeffs.len() - 1) / 2;
    let mut sum = linalg::ZERO;
    let mut pos = linalg::ONE; // μ^m for m ≥ 0
    let mut neg = linalg::ONE; // μ^-m
    let inv = linalg::ONE / mu;
    sum += C64::new(coeffs[k], 0.0);
    for m in 1..=k {
        pos *= mu;
        neg *= inv;
        sum += pos * coeffs[k + m] + neg * coeffs[k - m];
    }
    sum
}

/// Powers U^m for m = -k..k, indexed by m + k.
pub fn walk_powers(u: &CMat, k: usize) -> Vec<CMat> {
    let dim = u.nrows();
    let mut pows = vec![CMat::zeros((dim, dim)); 2 * k + 1];
    pows[k] = eye(dim);
    let u_dag = dagger(u);
    for m in 1..=k {
        pows[k + m] = u.dot(&pows[k + m - 1]);
        pows[k - m] = u_dag.dot(&pows[k - m + 1]);
    }
    pows
}

/// Block-diagonal select operator Σ_m |m⟩⟨m| ⊗ U^m, m = -k..k.
pub fn build_select(u: &CMat, k: usize) -> CMat {
    let pows = walk_powers(u, k);
    let dim = u.nrows();
    let m_terms = 2 * k + 1;
    let mut sel = CMat::zeros((m_terms * dim, m_terms * dim));
    for (idx, p) in pows.iter().enumerate() {
        sel.slice_mut(s![idx * dim..(idx + 1) * dim, idx * dim..(idx + 1) * dim])
            .assign(p);
    }
    sel
}

/// The preparation state χ on the 2M ancilla for signed coefficients.
///
/// Flag-0 components carry √(a_m)/√s with the i√|a_m| branch for negative
/// coefficients. When s exceeds the absolute sum, the leftover weight sits in
/// the flag-1 branch on (e_0 + i e_1)/√2, whose squared amplitudes cancel;
/// that keeps the transpose-paired block free of a spurious identity term.
pub fn prep_state(coeffs: &[f64], s: f64) -> Result<linalg::CVec> {
    let m_terms = coeffs.len();
    if m_terms == 0 {
        return Err(Error::Parameter("empty coefficient vector".into()));
    }
    let abs_sum: f64 = coeffs.iter().map(|c| c.abs()).sum();
    if s < abs_sum - 1e-12 {
        return Err(Error::Parameter(format!(
            "amplification parameter s = {s} below coefficient 1-norm {abs_sum}"
        )));
    }
    let mut chi = linalg::CVec::zeros(2 * m_terms);
    for (i, &c) in coeffs.iter().enumerate() {
        chi[i] = signed_sqrt(c) / C64::new(s.sqrt(), 0.0);
    }
    let rem = (1.0 - abs_sum / s).max(0.0);
    if rem > 1e-14 {
        if m_terms < 2 {
            return Err(Error::Parameter(
                "s > coefficient 1-norm requires at least two selector slots; pad the coefficients"
                    .into(),
            ));
        }
        let w = (rem / 2.0).sqrt();
        chi[m_terms] = C64::new(w, 0.0);
        chi[m_terms + 1] = C64::new(0.0, w);
    }
    Ok(chi)
}

/// Preparation unitary B with B|00⟩ = χ, completed by a Householder
/// reflection times a phase fix.
pub fn build_prep(coeffs: &[f64], s: f64) -> Result<CMat> {
    let chi = prep_state(coeffs, s)?;
    let dim = chi.len();
    let chi0 = chi[0];
    if chi0.norm() < 1e-14 {
        // v = χ − e_0 reflects e_0 straight onto χ.
        let mut v = chi.clone();
        v[0] -= linalg::ONE;
        return Ok(householder(&v, dim));
    }
    let beta = -chi0 / C64::new(chi0.norm(), 0.0);
    let mut v = chi.clone();
    v[0] -= beta;
    let h = householder(&v, dim);
    // h maps e_0 to -(conj(chi0)/|chi0|) χ; a diagonal phase on the first
    // column fixes it.
    let zeta = -chi0 / C64::new(chi0.norm(), 0.0);
    let mut b = h;
    for r in 0..dim {
        b[[r, 0]] *= zeta;
    }
    Ok(b)
}

fn householder(v: &linalg::CVec, dim: usize) -> CMat {
    let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let mut h = eye(dim);
    if vv < 1e-28 {
        return h;
    }
    for r in 0..dim {
        for c in 0..dim {
            h[[r, c]] -= v[r] * v[c].conj() * (2.0 / vv);
        }
    }
    h
}

/// W = (Bᵀ ⊗ I) · FS · (B ⊗ I), where FS applies `select` on the flag-0
/// branch and the identity on the flag-1 branch.
///
/// Dense construction for desk-scale dimensions; [`SegmentEngine`] applies
/// the same operator to panels without materializing it.
pub fn build_w(prep: &CMat, select: &CMat, dim_sys: usize) -> Result<CMat> {
    let ancilla = prep.nrows();
    if ancilla % 2 != 0 {
        return Err(Error::Dimension("ancilla dimension must be even".into()));
    }
    let m_terms = ancilla / 2;
    if select.nrows() != m_terms * dim_sys {
        return Err(Error::Dimension(format!(
            "select has dimension {}, expected {}",
            select.nrows(),
            m_terms * dim_sys
        )));
    }
    let joint = ancilla * dim_sys;
    let mut fs = CMat::zeros((joint, joint));
    fs.slice_mut(s![..m_terms * dim_sys, ..m_terms * dim_sys])
        .assign(select);
    fs.slice_mut(s![m_terms * dim_sys.., m_terms * dim_sys..])
        .assign(&eye(m_terms * dim_sys));
    let right = kron(prep, &eye(dim_sys));
    let left = kron(&prep.t().to_owned(), &eye(dim_sys));
    Ok(left.dot(&fs).dot(&right))
}

/// Mask of the P = |00⟩⟨00| ⊗ I rows/columns inside the joint space.
pub fn zero_block_mask(ancilla_dim: usize, dim_sys: usize) -> Vec<bool> {
    let mut mask = vec![false; ancilla_dim * dim_sys];
    for m in mask.iter_mut().take(dim_sys) {
        *m = true;
    }
    mask
}

/// Reflection (1 − 2P) applied to a panel in place.
fn reflect_panel(panel: &mut CMat, dim_sys: usize) {
    for mut row in panel.slice_mut(s![..dim_sys, ..]).rows_mut() {
        for v in row.iter_mut() {
            *v = -*v;
        }
    }
}

/// The amplification iterate R = −W(1−2P)W†(1−2P) as a dense matrix.
///
/// `p_mask` marks the rows of P; the degenerate cases P = 0 and P = I give
/// R = −I as the algebra demands.
pub fn amplification_step(w: &CMat, p_mask: &[bool]) -> CMat {
    let dim = w.nrows();
    assert_eq!(p_mask.len(), dim);
    let reflect = |m: &CMat, on_rows: bool| -> CMat {
        let mut out = m.clone();
        for (i, &inside) in p_mask.iter().enumerate() {
            if inside {
                if on_rows {
                    for v in out.row_mut(i).iter_mut() {
                        *v = -*v;
                    }
                } else {
                    for v in out.column_mut(i).iter_mut() {
                        *v = -*v;
                    }
                }
            }
        }
        out
    };
    // (1-2P) W† (1-2P), then W times that, then negate.
    let wd = dagger(w);
    let inner = reflect(&reflect(&wd, true), false);
    let mut r = w.dot(&inner);
    r.mapv_inplace(|v| -v);
    r
}

/// One segment operator: the system-space block extracted from P R^ℓ W P.
#[derive(Debug, Clone)]
pub struct SegmentOperator {
    /// Truncation order of the coefficient set behind this segment (0 when
    /// the operator was built from a bare matrix).
    pub k: usize,
    /// The extracted dim_sys × dim_sys block.
    pub effective: CMat,
    /// Certified closeness of the combination to a unitary.
    pub delta_cert: f64,
}

/// Dense-route amplified block: extract the system block of P R^ℓ W P.
pub fn amplified_block_dense(
    w: &CMat,
    dim_sys: usize,
    s: f64,
    l_iters: usize,
    delta_cert: f64,
) -> Result<SegmentOperator> {
    sine_condition(s, l_iters)?;
    let joint = w.nrows();
    let mut panel = w.slice(s![.., ..dim_sys]).to_owned();
    let mask = zero_block_mask(joint / dim_sys, dim_sys);
    if l_iters > 0 {
        let r = amplification_step(w, &mask);
        for _ in 0..l_iters {
            panel = r.dot(&panel);
        }
    }
    let effective = panel.slice(s![..dim_sys, ..]).to_owned();
    check_contraction(&effective)?;
    Ok(SegmentOperator {
        k: 0,
        effective,
        delta_cert,
    })
}

fn check_contraction(block: &CMat) -> Result<()> {
    let norm = spectral_norm(block);
    if norm > 1.0 + 1e-10 {
        return Err(Error::Numeric(format!(
            "extracted block has norm {norm}, expected a contraction"
        )));
    }
    Ok(())
}

/// Dense LCU assembly: preparation, select, W, and the distinguished block,
/// with the construction invariants validated on build.
///
/// Desk-scale only; the simulator uses [`SegmentEngine`] for the same
/// operator in matrix-free form.
#[derive(Debug, Clone)]
pub struct LcuAssembly {
    /// Number of combined unitaries M.
    pub num_terms: usize,
    /// Ancilla dimension 2M.
    pub ancilla_dim: usize,
    pub dim_sys: usize,
    pub s: f64,
    pub l_iters: usize,
    /// Preparation unitary B with B|00⟩ = χ.
    pub prep: CMat,
    /// Σ_m |m⟩⟨m| ⊗ U^m.
    pub select: CMat,
    /// The assembled block-encoding unitary.
    pub w: CMat,
}

impl LcuAssembly {
    /// Build and validate: W unitary, sine condition, and s·(PWP block)
    /// equal to the direct combination Σ a_m U^m.
    pub fn build(u: &CMat, coeffs: &[f64], s: f64, l_iters: usize) -> Result<Self> {
        sine_condition(s, l_iters)?;
        if coeffs.len() % 2 == 0 {
            return Err(Error::Parameter(
                "coefficient vector must have odd length 2k+1".into(),
            ));
        }
        let k = (coeffs.len() - 1) / 2;
        let dim_sys = u.nrows();
        let prep = build_prep(coeffs, s)?;
        let select = build_select(u, k);
        let w = build_w(&prep, &select, dim_sys)?;
        let unit = crate::linalg::unitarity_residual(&w);
        if unit > 1e-11 {
            return Err(Error::Numeric(format!(
                "assembled W is not unitary: residual {unit}"
            )));
        }
        let assembly = Self {
            num_terms: coeffs.len(),
            ancilla_dim: 2 * coeffs.len(),
            dim_sys,
            s,
            l_iters,
            prep,
            select,
            w,
        };
        let mut combo = CMat::zeros((dim_sys, dim_sys));
        for (idx, p) in walk_powers(u, k).iter().enumerate() {
            combo.scaled_add(C64::new(coeffs[idx], 0.0), p);
        }
        let encoded = assembly.z_block().mapv(|v| v * s);
        let gap = spectral_norm(&(&encoded - &combo));
        if gap > 1e-11 {
            return Err(Error::Numeric(format!(
                "block encoding identity violated by {gap}"
            )));
        }
        Ok(assembly)
    }

    /// The |00⟩ system block of W (that is, PWP restricted), equal to the
    /// combination divided by s.
    pub fn z_block(&self) -> CMat {
        self.w.slice(s![..self.dim_sys, ..self.dim_sys]).to_owned()
    }

    /// Row mask of P = |00⟩⟨00| ⊗ I.
    pub fn p_mask(&self) -> Vec<bool> {
        zero_block_mask(self.ancilla_dim, self.dim_sys)
    }

    /// Amplified segment operator through the dense route.
    pub fn amplified_block(&self, delta_cert: f64) -> Result<SegmentOperator> {
        amplified_block_dense(&self.w, self.dim_sys, self.s, self.l_iters, delta_cert)
    }
}

/// Matrix-free application of W, W†, and R to joint-space panels, for one
/// coefficient set over powers of a single walk unitary.
///
/// Shares the preparation and select definitions with the dense builders;
/// equality of the two routes is pinned by tests.
#[derive(Debug, Clone)]
pub struct SegmentEngine {
    pub dim_sys: usize,
    /// M = 2k + 1 selector slots.
    pub num_terms: usize,
    pub k: usize,
    pub s: f64,
    pub l_iters: usize,
    /// Certified distance of Σ a_m U^m from a unitary.
    pub delta_cert: f64,
    prep: CMat,
    prep_t: CMat,
    prep_dag: CMat,
    prep_conj: CMat,
    u_pows: Vec<CMat>,
}

impl SegmentEngine {
    pub fn new(
        u: &CMat,
        coeffs: &[f64],
        s: f64,
        l_iters: usize,
        delta_cert: f64,
    ) -> Result<Self> {
        sine_condition(s, l_iters)?;
        let m_terms = coeffs.len();
        if m_terms % 2 == 0 {
            return Err(Error::Parameter(
                "coefficient vector must have odd length 2k+1".into(),
            ));
        }
        let k = (m_terms - 1) / 2;
        let prep = build_prep(coeffs, s)?;
        let prep_t = prep.t().to_owned();
        let prep_dag = dagger(&prep);
        let prep_conj = prep.mapv(|v| v.conj());
        let u_pows = walk_powers(u, k);
        Ok(Self {
            dim_sys: u.nrows(),
            num_terms: m_terms,
            k,
            s,
            l_iters,
            delta_cert,
            prep,
            prep_t,
            prep_dag,
            prep_conj,
            u_pows,
        })
    }

    pub fn ancilla_dim(&self) -> usize {
        2 * self.num_terms
    }

    pub fn joint_dim(&self) -> usize {
        self.ancilla_dim() * self.dim_sys
    }

    /// Σ a_m U^m assembled directly (the block the engine must encode).
    pub fn combination(&self, coeffs: &[f64]) -> CMat {
        let mut acc = CMat::zeros((self.dim_sys, self.dim_sys));
        for (idx, &c) in coeffs.iter().enumerate() {
            acc.scaled_add(C64::new(c, 0.0), &self.u_pows[idx]);
        }
        acc
    }

    fn ancilla_apply(&self, op: &CMat, panel: &CMat) -> CMat {
        let a = op.nrows();
        let (rows, cols) = panel.dim();
        let d = rows / a;
        let reshaped = panel
            .to_shape((a, d * cols))
            .expect("panel must be standard layout");
        let out = op.dot(&reshaped);
        out.to_shape((rows, cols)).expect("same size").to_owned()
    }

    fn select_apply(&self, panel: &CMat, adjoint: bool) -> CMat {
        let d = self.dim_sys;
        let m_terms = self.num_terms;
        let mut out = panel.clone();
        for alpha in 0..m_terms {
            let block = panel.slice(s![alpha * d..(alpha + 1) * d, ..]);
            let p = if adjoint {
                // (U^m)† = U^{-m} sits at the mirrored index.
                &self.u_pows[2 * self.k - alpha]
            } else {
                &self.u_pows[alpha]
            };
            out.slice_mut(s![alpha * d..(alpha + 1) * d, ..])
                .assign(&p.dot(&block));
        }
        // flag-1 blocks (alpha >= m_terms) stay as they are
        out
    }

    /// W · panel.
    pub fn apply_w(&self, panel: &CMat) -> CMat {
        let staged = self.ancilla_apply(&self.prep, panel);
        let selected = self.select_apply(&staged, false);
        self.ancilla_apply(&self.prep_t, &selected)
    }

    /// W† · panel.
    pub fn apply_w_dagger(&self, panel: &CMat) -> CMat {
        let staged = self.ancilla_apply(&self.prep_conj, panel);
        let selected = self.select_apply(&staged, true);
        self.ancilla_apply(&self.prep_dag, &selected)
    }

    /// R · panel with R = −W(1−2P)W†(1−2P).
    pub fn apply_r(&self, panel: &CMat) -> CMat {
        let mut x = panel.clone();
        reflect_panel(&mut x, self.dim_sys);
        let mut y = self.apply_w_dagger(&x);
        reflect_panel(&mut y, self.dim_sys);
        let mut z = self.apply_w(&y);
        z.mapv_inplace(|v| -v);
        z
    }

    /// The joint-space panel R^ℓ W P (all rows, P-columns).
    pub fn amplified_panel(&self) -> CMat {
        let joint = self.joint_dim();
        let mut e = CMat::zeros((joint, self.dim_sys));
        for i in 0..self.dim_sys {
            e[[i, i]] = linalg::ONE;
        }
        let mut panel = self.apply_w(&e);
        for _ in 0..self.l_iters {
            panel = self.apply_r(&panel);
        }
        panel
    }

    /// The extracted segment operator from P R^ℓ W P.
    pub fn amplified_block(&self) -> Result<SegmentOperator> {
        let panel = self.amplified_panel();
        let effective = panel.slice(s![..self.dim_sys, ..]).to_owned();
        check_contraction(&effective)?;
        Ok(SegmentOperator {
            k: self.k,
            effective,
            delta_cert: self.delta_cert,
        })
    }

    /// Dense W, by applying the operator to the identity (test support).
    pub fn w_dense(&self) -> CMat {
        let joint = self.joint_dim();
        self.apply_w(&eye(joint))
    }
}

/// Unitary dilation of a contraction: W with the |00⟩ block equal to A/s.
///
/// The first system-column block is [A/s; √(I − A†A/s²); 0…], completed to a
/// unitary by orthonormal extension of the standard basis.
pub fn dilation_w(a: &CMat, s: f64, ancilla_dim: usize) -> Result<CMat> {
    let d = a.nrows();
    if ancilla_dim < 2 {
        return Err(Error::Parameter("dilation needs at least two ancilla levels".into()));
    }
    let norm = spectral_norm(a);
    if norm > s * (1.0 + 1e-12) {
        return Err(Error::Parameter(format!(
            "cannot dilate: ‖A‖ = {norm} exceeds s = {s}"
        )));
    }
    let joint = ancilla_dim * d;
    let scaled = a.mapv(|v| v / s);
    let gram = {
        let mut g = dagger(&scaled).dot(&scaled);
        g.mapv_inplace(|v| -v);
        for i in 0..d {
            g[[i, i]] += linalg::ONE;
        }
        g
    };
    let complement = hermitian_fn(&gram, 0.0, 1.0, f64::sqrt)?;
    let mut stacked = CMat::zeros((joint, joint + d));
    stacked.slice_mut(s![..d, ..d]).assign(&scaled);
    stacked.slice_mut(s![d..2 * d, ..d]).assign(&complement);
    stacked
        .slice_mut(s![.., d..])
        .assign(&eye(joint));
    let (q, _) = linalg::gram_schmidt(&stacked)?;
    if q.ncols() != joint {
        return Err(Error::Numeric(format!(
            "dilation completion produced rank {} of {joint}",
            q.ncols()
        )));
    }
    Ok(q)
}

/// Chebyshev ratio T_{2m+1}(y)/y, continuous at y = 0.
fn cheb_ratio(m: usize, y: f64) -> f64 {
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let yc = y.clamp(-1.0, 1.0);
    if yc.abs() < 1e-9 {
        return sign * (2 * m + 1) as f64;
    }
    sign * ((2 * m + 1) as f64 * yc.asin()).sin() / yc
}

/// Compare R^m W P computed by direct iteration against the closed form
///
/// ```text
/// (WP − Z)·T_{2m+1}(√(1−Z†Z))/√(1−Z†Z) + Z·(−1)^m T_{2m+1}(√(Z†Z))/√(Z†Z)
/// ```
///
/// for m = 0..=m_max, returning the largest spectral-norm residual. Both
/// sides are restricted to the P-columns, where Z†Z reduces to the Hermitian
/// system-space matrix (block†block) and the matrix functions go through its
/// eigendecomposition with eigenvalues clamped to [0, 1].
pub fn chebyshev_formula_check(w: &CMat, dim_sys: usize, m_max: usize) -> Result<f64> {
    if m_max > 5 {
        return Err(Error::Parameter(format!(
            "chebyshev check capped at m_max = 5, got {m_max}"
        )));
    }
    let joint = w.nrows();
    if joint % dim_sys != 0 {
        return Err(Error::Dimension("system dimension must divide W".into()));
    }
    let mask = zero_block_mask(joint / dim_sys, dim_sys);
    let r = amplification_step(w, &mask);
    let wp = w.slice(s![.., ..dim_sys]).to_owned();
    let z_block = wp.slice(s![..dim_sys, ..]).to_owned();
    let mut z_panel = CMat::zeros((joint, dim_sys));
    z_panel.slice_mut(s![..dim_sys, ..]).assign(&z_block);
    let zdz = dagger(&z_block).dot(&z_block);
    let wp_minus_z = &wp - &z_panel;

    let mut direct = wp.clone();
    let mut worst = 0.0_f64;
    for m in 0..=m_max {
        if m > 0 {
            direct = r.dot(&direct);
        }
        let f1 = hermitian_fn(&zdz, 0.0, 1.0, |x| cheb_ratio(m, (1.0 - x).max(0.0).sqrt()))?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let f2 = hermitian_fn(&zdz, 0.0, 1.0, |x| sign * cheb_ratio(m, x.sqrt()))?;
        let closed = &wp_minus_z.dot(&f1) + &z_panel.dot(&f2);
        let resid = spectral_norm(&(&direct - &closed));
        worst = worst.max(resid);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::lcu_coefficients;
    use crate::linalg::{max_abs_diff, random_unitary, seeded_rng, unitarity_residual, I, ONE, ZERO};

    #[test]
    fn lattice_values() {
        assert!((lattice_s(0) - 1.0).abs() < 1e-15);
        assert!((lattice_s(1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn solve_s_l_examples() {
        // a ≤ 1 sits at the bottom of the lattice.
        let (s0, l0) = solve_s_l(0.9);
        assert_eq!(l0, 0);
        assert!((s0 - 1.0).abs() < 1e-15);
        let (s, l) = solve_s_l(2.0);
        assert_eq!(l, 1);
        assert!((s - 2.0).abs() < 1e-12);
        // brute-force oracle over l = 0..10 for a = 5: the first lattice
        // value at or above 5 is s(4) = 5.7587...
        let a = 5.0;
        let oracle = (0..=10)
            .map(|l| (l, lattice_s(l)))
            .find(|(_, s)| *s >= a)
            .unwrap();
        assert_eq!(oracle.0, 4);
        let (s5, l5) = solve_s_l(a);
        assert_eq!(l5, oracle.0);
        assert!((s5 - oracle.1).abs() < 1e-12);
    }

    #[test]
    fn select_identity_and_blocks() {
        let u = eye(2);
        let sel = build_select(&u, 1);
        assert!(max_abs_diff(&sel, &eye(6)) < 1e-15);

        let mut rng = seeded_rng(2);
        let u = random_unitary(&mut rng, 3);
        let sel = build_select(&u, 1);
        // blocks are (U†, I, U) in m = (-1, 0, 1) order
        let ud = dagger(&u);
        assert!(max_abs_diff(&sel.slice(s![..3, ..3]).to_owned(), &ud) < 1e-14);
        assert!(max_abs_diff(&sel.slice(s![3..6, 3..6]).to_owned(), &eye(3)) < 1e-15);
        assert!(max_abs_diff(&sel.slice(s![6.., 6..]).to_owned(), &u) < 1e-14);
        assert!(unitarity_residual(&sel) < 1e-12);
    }

    #[test]
    fn prep_trivial_coefficient() {
        let b = build_prep(&[1.0], 1.0).unwrap();
        // ancilla is 2 levels; the first column must be e_0
        assert!((b[[0, 0]] - ONE).norm() < 1e-14);
        assert!(b[[1, 0]].norm() < 1e-14);
        assert!(unitarity_residual(&b) < 1e-13);
    }

    #[test]
    fn prep_state_is_normalized() {
        let c = lcu_coefficients(-0.5, 5).unwrap();
        let chi = prep_state(c.values(), 2.0).unwrap();
        let norm: f64 = chi.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        let b = build_prep(c.values(), 2.0).unwrap();
        assert!(unitarity_residual(&b) < 1e-13);
        for (i, x) in chi.iter().enumerate() {
            assert!((b[[i, 0]] - x).norm() < 1e-13, "column 0 must equal chi");
        }
    }

    #[test]
    fn prep_rejects_small_s() {
        let c = lcu_coefficients(-0.5, 5).unwrap();
        assert!(build_prep(c.values(), 1.0).is_err());
    }

    #[test]
    fn w_block_encodes_trivial_combination() {
        // a_0 = 1, s = 1: the extracted block is U^0 = I for the power
        // select, and U itself for a bare one-term select.
        let mut rng = seeded_rng(7);
        let u = random_unitary(&mut rng, 3);
        let prep = build_prep(&[1.0], 1.0).unwrap();
        let sel = build_select(&u, 0);
        let w = build_w(&prep, &sel, 3).unwrap();
        let block = w.slice(s![..3, ..3]).to_owned();
        assert!(max_abs_diff(&block, &eye(3)) < 1e-13);

        // single-unitary tuple: select = |0><0| ⊗ U on one slot
        let w2 = build_w(&prep, &u, 3).unwrap();
        let block2 = w2.slice(s![..3, ..3]).to_owned();
        assert!(max_abs_diff(&block2, &u) < 1e-13);
        assert!(unitarity_residual(&w2) < 1e-12);
    }

    #[test]
    fn w_block_encodes_bessel_combination() {
        let mut rng = seeded_rng(11);
        let u = random_unitary(&mut rng, 3);
        let c = lcu_coefficients(-0.5, 5).unwrap();
        let (s, _l) = solve_s_l(c.abs_sum);
        assert!((s - 2.0).abs() < 1e-12);
        let prep = build_prep(c.values(), s).unwrap();
        let sel = build_select(&u, c.k);
        let w = build_w(&prep, &sel, 3).unwrap();
        assert!(unitarity_residual(&w) < 1e-12);
        let block = w.slice(s![..3, ..3]).to_owned();
        let mut expected = CMat::zeros((3, 3));
        for (idx, p) in walk_powers(&u, c.k).iter().enumerate() {
            expected.scaled_add(C64::new(c.values()[idx], 0.0), p);
        }
        let scaled = block.mapv(|v| v * s);
        assert!(
            max_abs_diff(&scaled, &expected) < 1e-12,
            "negative coefficients must survive the encoding: {}",
            max_abs_diff(&scaled, &expected)
        );
    }

    #[test]
    fn amplification_step_degenerate_projectors() {
        let mut rng = seeded_rng(5);
        let w = random_unitary(&mut rng, 6);
        let all = vec![true; 6];
        let none = vec![false; 6];
        let minus_i = eye(6).mapv(|v| -v);
        assert!(max_abs_diff(&amplification_step(&w, &all), &minus_i) < 1e-12);
        assert!(max_abs_diff(&amplification_step(&w, &none), &minus_i) < 1e-12);
        let mask = zero_block_mask(3, 2);
        assert!(unitarity_residual(&amplification_step(&w, &mask)) < 1e-12);
    }

    #[test]
    fn assembly_validates_on_build() {
        let mut rng = seeded_rng(43);
        let u = random_unitary(&mut rng, 3);
        let c = lcu_coefficients(-0.5, 4).unwrap();
        let (s, l) = solve_s_l(c.abs_sum);
        let asm = LcuAssembly::build(&u, c.values(), s, l).unwrap();
        assert_eq!(asm.ancilla_dim, 2 * (2 * 4 + 1));
        // the P mask is idempotent and Hermitian by construction: it is a
        // 0/1 diagonal, so check it marks exactly the system block
        let mask = asm.p_mask();
        assert_eq!(mask.iter().filter(|&&b| b).count(), 3);
        assert!(mask[..3].iter().all(|&b| b));
        // violating the sine condition is rejected
        assert!(LcuAssembly::build(&u, c.values(), s + 0.3, l).is_err());
    }

    #[test]
    fn engine_matches_dense_route() {
        let mut rng = seeded_rng(13);
        let u = random_unitary(&mut rng, 3);
        let c = lcu_coefficients(-0.5, 4).unwrap();
        let (s, l) = solve_s_l(c.abs_sum);
        let engine = SegmentEngine::new(&u, c.values(), s, l, c.bound).unwrap();
        let w_dense = engine.w_dense();
        assert!(unitarity_residual(&w_dense) < 1e-11);
        // dense route
        let dense = amplified_block_dense(&w_dense, 3, s, l, c.bound).unwrap();
        let fast = engine.amplified_block().unwrap();
        assert!(max_abs_diff(&dense.effective, &fast.effective) < 1e-11);
        // and against the prep/select dense W construction
        let prep = build_prep(c.values(), s).unwrap();
        let sel = build_select(&u, c.k);
        let w_direct = build_w(&prep, &sel, 3).unwrap();
        assert!(max_abs_diff(&w_dense, &w_direct) < 1e-11);
    }

    #[test]
    fn exact_unitary_amplification() {
        // single-power coefficient vectors give a unitary combination; the
        // amplified block must reproduce it at each lattice point.
        let mut rng = seeded_rng(17);
        for l in 0..=3usize {
            let s = lattice_s(l);
            let u = random_unitary(&mut rng, 3);
            let mut coeffs = vec![0.0; 3];
            coeffs[2] = 1.0; // a_{+1} = 1, so the combination is U itself
            let engine = SegmentEngine::new(&u, &coeffs, s, l, 0.0).unwrap();
            let block = engine.amplified_block().unwrap();
            assert!(
                max_abs_diff(&block.effective, &u) < 1e-10,
                "l = {l}: {}",
                max_abs_diff(&block.effective, &u)
            );
        }
    }

    #[test]
    fn chebyshev_identity_small_orders() {
        let mut rng = seeded_rng(23);
        // random unitary W over a 6-level ancilla and 3-level system
        let w = random_unitary(&mut rng, 18);
        let worst = chebyshev_formula_check(&w, 3, 3).unwrap();
        assert!(worst < 1e-9, "closed form residual {worst}");
        assert!(chebyshev_formula_check(&w, 3, 6).is_err());
    }

    #[test]
    fn chebyshev_identity_m0_is_wp() {
        let mut rng = seeded_rng(29);
        let w = random_unitary(&mut rng, 8);
        let worst = chebyshev_formula_check(&w, 2, 0).unwrap();
        assert!(worst < 1e-12, "m = 0 must reduce to WP exactly: {worst}");
    }

    #[test]
    fn first_iteration_matches_polynomial() {
        // P R W P = 3Z - 4 Z Z† Z on the block level.
        let mut rng = seeded_rng(31);
        let w = random_unitary(&mut rng, 12);
        let dim_sys = 3;
        let mask = zero_block_mask(4, dim_sys);
        let r = amplification_step(&w, &mask);
        let rwp = r.dot(&w.slice(s![.., ..dim_sys]).to_owned());
        let direct = rwp.slice(s![..dim_sys, ..]).to_owned();
        let z = w.slice(s![..dim_sys, ..dim_sys]).to_owned();
        let zdz = dagger(&z).dot(&z);
        let poly = &z.mapv(|v| v * 3.0) - &z.dot(&zdz).mapv(|v| v * 4.0);
        assert!(max_abs_diff(&direct, &poly) < 1e-12);
    }

    #[test]
    fn dilation_embeds_contraction() {
        let mut rng = seeded_rng(37);
        let v = random_unitary(&mut rng, 4);
        let w = dilation_w(&v, 2.0, 6).unwrap();
        assert!(unitarity_residual(&w) < 1e-12);
        let block = w.slice(s![..4, ..4]).to_owned();
        let expected = v.mapv(|x| x / 2.0);
        assert!(max_abs_diff(&block, &expected) < 1e-12);
    }

    #[test]
    fn dilated_unitary_amplifies_exactly() {
        let mut rng = seeded_rng(41);
        let v = random_unitary(&mut rng, 4);
        let (s, l) = (lattice_s(2), 2usize);
        let w = dilation_w(&v, s, 6).unwrap();
        let block = amplified_block_dense(&w, 4, s, l, 0.0).unwrap();
        assert!(max_abs_diff(&block.effective, &v) < 1e-10);
    }

    #[test]
    fn power_sum_matches_direct() {
        let c = lcu_coefficients(-2.0, 6).unwrap();
        let mu = C64::from_polar(1.0, 0.3);
        let direct: C64 = (-(c.k as i64)..=c.k as i64)
            .map(|m| C64::new(c.coeff(m), 0.0) * mu.powi(m as i32))
            .sum();
        assert!((power_sum(c.values(), mu) - direct).norm() < 1e-14);
    }

    #[test]
    fn plus_minus_sectors_agree() {
        // symmetric coefficients give the same combination eigenvalue on
        // both walk sectors
        let c = lcu_coefficients(-0.5, 5).unwrap();
        for nu in [-0.9, -0.3, 0.0, 0.4, 0.99] {
            let (mp, mm) = crate::walk::mu_pm(nu);
            let vp = power_sum(c.values(), mp);
            let vm = power_sum(c.values(), mm);
            assert!((vp - vm).norm() < 1e-12, "nu = {nu}");
        }
    }

    #[test]
    fn signed_sqrt_branches() {
        assert_eq!(signed_sqrt(4.0), C64::new(2.0, 0.0));
        assert_eq!(signed_sqrt(-4.0), C64::new(0.0, 2.0));
        assert_eq!(signed_sqrt(0.0), ZERO);
        let _ = I;
    }
}
