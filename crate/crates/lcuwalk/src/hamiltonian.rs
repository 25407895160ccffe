//! Sparse Hermitian matrices, their two classical oracles, instance
//! generators, and JSON serialization.
//!
//! Matrices are stored dense (desk scale), with sorted per-row support lists
//! maintained alongside so the index oracle is a table lookup.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, seeded_rng, CMat, CVec, C64};

/// Hermitian N×N matrix (N = 2^n) with a row-sparsity bound and cached norms.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    /// Qubit count; dimension is 2^n.
    pub n: usize,
    /// Row sparsity bound: no row holds more than `d` nonzeros.
    pub d: usize,
    entries: CMat,
    /// Sorted column indices of the nonzeros of each row.
    row_support: Vec<Vec<usize>>,
    /// max |H_jk|.
    pub h_max: f64,
    /// Spectral norm ‖H‖ (largest |eigenvalue|).
    pub h_spec: f64,
}

/// Parameters of the parity-path instance family.
///
/// `path_len` is the number of bits N (the path has N+1 sites), `bits` is the
/// string x, and `blowup` is the bipartite blow-up factor (1 means none).
#[derive(Debug, Clone)]
pub struct ParitySpec {
    pub path_len: usize,
    pub bits: Vec<bool>,
    pub blowup: usize,
}

/// Which of the two path Hamiltonians to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityVariant {
    /// Plain weighted path on N+1 sites.
    H1,
    /// Twisted double path on 2(N+1) sites encoding the bit string.
    H2,
}

impl ParitySpec {
    pub fn new(path_len: usize, bits: Vec<bool>, blowup: usize) -> Result<Self> {
        if path_len == 0 {
            return Err(Error::Parameter("path length must be positive".into()));
        }
        if bits.len() != path_len {
            return Err(Error::Parameter(format!(
                "bit string length {} does not match path length {}",
                bits.len(),
                path_len
            )));
        }
        if blowup == 0 {
            return Err(Error::Parameter("blow-up factor must be at least 1".into()));
        }
        Ok(Self {
            path_len,
            bits,
            blowup,
        })
    }

    /// Parse a bit string like "1011".
    pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parameter(format!("invalid bit '{other}'"))),
            })
            .collect()
    }

    /// Parity of the bit string.
    pub fn parity(&self) -> bool {
        self.bits.iter().fold(false, |acc, b| acc ^ b)
    }
}

impl SparseHamiltonian {
    /// Build from a list of entries given for row ≤ col; the mirror image is
    /// filled in by conjugation so Hermiticity is bit-exact.
    ///
    /// Entries with row > col are accepted but must agree with the conjugate
    /// of the mirrored entry when both are present.
    pub fn from_entries(n: usize, d: usize, list: &[(usize, usize, C64)]) -> Result<Self> {
        let dim = 1usize << n;
        if d == 0 || d > dim {
            return Err(Error::Parameter(format!(
                "sparsity d = {d} out of range for dimension {dim}"
            )));
        }
        let mut map: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for &(r, c, v) in list {
            if r >= dim || c >= dim {
                return Err(Error::IndexOutOfRange(format!(
                    "entry ({r}, {c}) outside dimension {dim}"
                )));
            }
            let (key, val) = if r <= c { ((r, c), v) } else { ((c, r), v.conj()) };
            if let Some(prev) = map.get(&key) {
                if *prev != val {
                    return Err(Error::Hermiticity(format!(
                        "conflicting values for entry pair ({r}, {c})"
                    )));
                }
            } else {
                map.insert(key, val);
            }
        }
        let mut m = CMat::zeros((dim, dim));
        for (&(r, c), &v) in &map {
            if v == linalg::ZERO {
                continue;
            }
            if r == c {
                if v.im != 0.0 {
                    return Err(Error::Hermiticity(format!(
                        "diagonal entry ({r}, {r}) has imaginary part {}",
                        v.im
                    )));
                }
                m[[r, r]] = v;
            } else {
                m[[r, c]] = v;
                m[[c, r]] = v.conj();
            }
        }
        Self::from_dense(n, d, m)
    }

    /// Wrap a dense matrix, validating Hermiticity (bit-exact) and the row
    /// sparsity bound, and caching norms.
    pub fn from_dense(n: usize, d: usize, entries: CMat) -> Result<Self> {
        let dim = 1usize << n;
        if entries.dim() != (dim, dim) {
            return Err(Error::Dimension(format!(
                "expected {dim}x{dim} matrix, got {:?}",
                entries.dim()
            )));
        }
        if d == 0 || d > dim {
            return Err(Error::Parameter(format!(
                "sparsity d = {d} out of range for dimension {dim}"
            )));
        }
        for j in 0..dim {
            for k in 0..=j {
                let a = entries[[j, k]];
                let b = entries[[k, j]];
                if a.re != b.re || a.im != -b.im {
                    return Err(Error::Hermiticity(format!(
                        "entries ({j}, {k}) and ({k}, {j}) are not conjugate"
                    )));
                }
            }
        }
        let mut row_support = Vec::with_capacity(dim);
        for j in 0..dim {
            let support: Vec<usize> =
                (0..dim).filter(|&k| entries[[j, k]] != linalg::ZERO).collect();
            if support.len() > d {
                return Err(Error::Sparsity(format!(
                    "row {j} holds {} nonzeros, bound is {d}",
                    support.len()
                )));
            }
            row_support.push(support);
        }
        let h_max = entries.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let h_spec = if h_max == 0.0 {
            0.0
        } else {
            let (vals, _) = linalg::eigh(&entries)?;
            vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
        };
        Ok(Self {
            n,
            d,
            entries,
            row_support,
            h_max,
            h_spec,
        })
    }

    /// Matrix dimension N = 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// The dense matrix.
    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    /// Sorted nonzero column indices of row `j`.
    pub fn row_support(&self, j: usize) -> &[usize] {
        &self.row_support[j]
    }

    /// Classical realization of the entry oracle: H_jk exactly as stored.
    pub fn entry_oracle(&self, j: usize, k: usize) -> Result<C64> {
        let dim = self.dim();
        if j >= dim || k >= dim {
            return Err(Error::IndexOutOfRange(format!(
                "({j}, {k}) outside dimension {dim}"
            )));
        }
        Ok(self.entries[[j, k]])
    }

    /// Classical realization of the index oracle: the column of the l-th
    /// nonzero of row `j` in ascending order, with `l` 1-based in [1, d].
    ///
    /// Slots past the row's nonzero count return `j` itself (self-loop
    /// convention), keeping the map total.
    pub fn nonzero_index_oracle(&self, j: usize, l: usize) -> Result<usize> {
        let dim = self.dim();
        if j >= dim {
            return Err(Error::IndexOutOfRange(format!(
                "row {j} outside dimension {dim}"
            )));
        }
        if l == 0 || l > self.d {
            return Err(Error::IndexOutOfRange(format!(
                "slot {l} outside [1, {}]",
                self.d
            )));
        }
        Ok(self.row_support[j].get(l - 1).copied().unwrap_or(j))
    }

    /// Cached norms (max-entry magnitude, spectral norm).
    pub fn norms(&self) -> (f64, f64) {
        (self.h_max, self.h_spec)
    }
}

/// Deterministic random d-sparse Hermitian instance.
///
/// Generation (ChaCha8 keyed by `seed`, see [`crate::linalg::seeded_rng`]):
/// diagonal entries are sampled nonnegative, since the walk encoding carries
/// diagonal magnitudes only; off-diagonal entries get uniform phases. For
/// d = 1 the instance is diagonal. All values are rescaled at the end so the
/// largest magnitude equals `h_max_target` exactly.
pub fn make_random_sparse(
    n: usize,
    d: usize,
    h_max_target: f64,
    seed: u64,
) -> Result<SparseHamiltonian> {
    if n == 0 {
        return Err(Error::Parameter("qubit count must be at least 1".into()));
    }
    let dim = 1usize << n;
    if d == 0 || d > dim {
        return Err(Error::Parameter(format!(
            "infeasible sparsity d = {d} for dimension {dim}"
        )));
    }
    if h_max_target <= 0.0 {
        return Err(Error::Parameter("h_max target must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut caps = vec![d; dim];
    let mut list: Vec<(usize, usize, C64)> = Vec::new();
    for j in 0..dim {
        if caps[j] > 0 && rng.random_bool(0.5) {
            let mag: f64 = rng.random_range(0.05..=1.0);
            list.push((j, j, C64::new(mag, 0.0)));
            caps[j] -= 1;
        }
    }
    if d >= 2 {
        let mut pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|j| ((j + 1)..dim).map(move |k| (j, k)))
            .collect();
        pairs.shuffle(&mut rng);
        for (j, k) in pairs {
            if caps[j] == 0 || caps[k] == 0 {
                continue;
            }
            if rng.random_bool(0.7) {
                let mag: f64 = rng.random_range(0.05..=1.0);
                let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                list.push((j, k, C64::from_polar(mag, phase)));
                caps[j] -= 1;
                caps[k] -= 1;
            }
        }
    }
    if list.is_empty() {
        list.push((0, 0, C64::new(1.0, 0.0)));
    }
    let max_mag = list.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max);
    let scale = h_max_target / max_mag;
    for (_, _, v) in list.iter_mut() {
        *v *= scale;
    }
    SparseHamiltonian::from_entries(n, d, &list)
}

/// Path weight √(i (N − i + 1)) for the i-th edge, i in 1..=N.
fn path_weight(i: usize, n_len: usize) -> f64 {
    ((i * (n_len - i + 1)) as f64).sqrt()
}

fn qubits_for(dim: usize) -> usize {
    let mut n = 0;
    while (1usize << n) < dim {
        n += 1;
    }
    n.max(1)
}

/// Weighted parity-path Hamiltonian, zero-padded to the next power-of-two
/// dimension.
///
/// * `H1`: sites |i⟩, i = 0..N, edge weights √(i(N−i+1)).
/// * `H2`: sites |i, j⟩ (index 2i + j), edges (i−1, j) — (i, j ⊕ x_i) with the
///   same weights; the bit string threads the double path.
pub fn make_parity_path(spec: &ParitySpec, variant: ParityVariant) -> Result<SparseHamiltonian> {
    let n_len = spec.path_len;
    let mut list: Vec<(usize, usize, C64)> = Vec::new();
    let raw_dim = match variant {
        ParityVariant::H1 => {
            for i in 1..=n_len {
                let w = C64::new(path_weight(i, n_len), 0.0);
                list.push((i - 1, i, w));
            }
            n_len + 1
        }
        ParityVariant::H2 => {
            let idx = |i: usize, j: usize| 2 * i + j;
            for i in 1..=n_len {
                let w = C64::new(path_weight(i, n_len), 0.0);
                let x = spec.bits[i - 1] as usize;
                for j in 0..2usize {
                    list.push((idx(i - 1, j), idx(i, j ^ x), w));
                }
            }
            2 * (n_len + 1)
        }
    };
    let n = qubits_for(raw_dim);
    let d = if n_len >= 2 { 2 } else { 1 };
    SparseHamiltonian::from_entries(n, d, &list)
}

/// Blown-up parity Hamiltonian: every H2 vertex is replaced by `d` copies and
/// every edge by the complete bipartite coupling, with weights divided by N.
///
/// Sites are |i, j, l⟩ with index (2i + j)·d + l, i = 0..N, j ∈ {0,1},
/// l = 0..d−1. The maximum degree is 2d and the largest entry is
/// √(⌈N/2⌉(N−⌈N/2⌉+1))/N.
pub fn make_blown_up_parity(spec: &ParitySpec) -> Result<SparseHamiltonian> {
    let n_len = spec.path_len;
    let d_blow = spec.blowup;
    let idx = |i: usize, j: usize, l: usize| (2 * i + j) * d_blow + l;
    let mut list: Vec<(usize, usize, C64)> = Vec::new();
    for i in 1..=n_len {
        let w = C64::new(path_weight(i, n_len) / n_len as f64, 0.0);
        let x = spec.bits[i - 1] as usize;
        for j in 0..2usize {
            for l in 0..d_blow {
                for lp in 0..d_blow {
                    list.push((idx(i - 1, j, l), idx(i, j ^ x, lp), w));
                }
            }
        }
    }
    let raw_dim = 2 * (n_len + 1) * d_blow;
    let n = qubits_for(raw_dim);
    let sparsity = if n_len >= 2 { 2 * d_blow } else { d_blow };
    SparseHamiltonian::from_entries(n, sparsity, &list)
}

/// Uniform superposition |i, j, *⟩ over the blow-up register, as a state
/// vector in the padded dimension.
pub fn blown_up_uniform_state(spec: &ParitySpec, i: usize, j: usize, dim: usize) -> CVec {
    let d_blow = spec.blowup;
    let mut v = CVec::zeros(dim);
    let amp = C64::new(1.0 / (d_blow as f64).sqrt(), 0.0);
    for l in 0..d_blow {
        v[(2 * i + j) * d_blow + l] = amp;
    }
    v
}

fn format_float(x: f64) -> String {
    // 17 significant digits round-trip f64 exactly.
    format!("{x:.16e}")
}

/// Serialize to the interchange schema:
/// `{"n": int, "d": int, "entries": [[row, col, re, im], ...]}` listing only
/// entries with row ≤ col, floats with 17 significant digits.
pub fn to_json_string(h: &SparseHamiltonian) -> String {
    let dim = h.dim();
    let mut entries = Vec::new();
    for j in 0..dim {
        for &k in h.row_support(j) {
            if j <= k {
                entries.push((j, k, h.matrix()[[j, k]]));
            }
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{{\"n\": {}, \"d\": {}, \"entries\": [", h.n, h.d);
    for (i, (r, c, v)) in entries.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(
            out,
            "[{r}, {c}, {}, {}]",
            format_float(v.re),
            format_float(v.im)
        );
    }
    out.push_str("]}\n");
    out
}

/// Write the JSON schema to a file.
pub fn save_json(h: &SparseHamiltonian, path: &Path) -> Result<()> {
    std::fs::write(path, to_json_string(h))?;
    Ok(())
}

#[derive(serde::Deserialize)]
struct JsonSchema {
    n: usize,
    d: usize,
    entries: Vec<(usize, usize, f64, f64)>,
}

/// Parse the JSON schema from a string.
///
/// Entries may appear in either triangle; mirrored duplicates must be
/// conjugate-consistent. Malformed JSON, Hermiticity conflicts, and sparsity
/// violations are distinct error kinds.
pub fn from_json_string(text: &str) -> Result<SparseHamiltonian> {
    let schema: JsonSchema =
        serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))?;
    if schema.n == 0 || schema.n > 12 {
        return Err(Error::Parameter(format!(
            "qubit count {} outside supported range 1..=12",
            schema.n
        )));
    }
    let list: Vec<(usize, usize, C64)> = schema
        .entries
        .iter()
        .map(|&(r, c, re, im)| (r, c, C64::new(re, im)))
        .collect();
    SparseHamiltonian::from_entries(schema.n, schema.d, &list)
}

/// Load the JSON schema from a file.
pub fn load_json(path: &Path) -> Result<SparseHamiltonian> {
    let text = std::fs::read_to_string(path)?;
    from_json_string(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zero_h() -> SparseHamiltonian {
        SparseHamiltonian::from_entries(1, 1, &[]).unwrap()
    }

    #[test]
    fn entry_oracle_zero_matrix() {
        let h = zero_h();
        assert_eq!(h.entry_oracle(0, 0).unwrap(), linalg::ZERO);
        assert!(h.entry_oracle(0, 2).is_err());
    }

    #[test]
    fn entry_oracle_parity_weight() {
        let spec = ParitySpec::new(4, vec![false; 4], 1).unwrap();
        let h = make_parity_path(&spec, ParityVariant::H1).unwrap();
        assert!((h.entry_oracle(0, 1).unwrap().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn entry_oracle_hermitian_scan() {
        let h = make_random_sparse(2, 2, 1.0, 11).unwrap();
        let dim = h.dim();
        for j in 0..dim {
            for k in 0..dim {
                let a = h.entry_oracle(j, k).unwrap();
                let b = h.entry_oracle(k, j).unwrap();
                assert_eq!(a, b.conj());
            }
        }
    }

    #[test]
    fn index_oracle_diagonal() {
        let dim_entries: Vec<(usize, usize, C64)> = (0..8)
            .map(|j| (j, j, C64::new(1.0 + j as f64, 0.0)))
            .collect();
        let h = SparseHamiltonian::from_entries(3, 1, &dim_entries).unwrap();
        assert_eq!(h.nonzero_index_oracle(5, 1).unwrap(), 5);
        assert!(h.nonzero_index_oracle(5, 2).is_err());
        assert!(h.nonzero_index_oracle(5, 0).is_err());
    }

    #[test]
    fn index_oracle_h2_neighbor() {
        // Vertex (i=1, j=0) connects to (0, x_1).
        let bits = ParitySpec::parse_bits("101").unwrap();
        let spec = ParitySpec::new(3, bits, 1).unwrap();
        let h = make_parity_path(&spec, ParityVariant::H2).unwrap();
        let vertex = 2; // (1, 0)
        let neighbor = h.nonzero_index_oracle(vertex, 1).unwrap();
        // x_1 = 1, so (0, 1) has index 1.
        assert_eq!(neighbor, 1);
    }

    #[test]
    fn index_oracle_padding_self_loop() {
        let h = SparseHamiltonian::from_entries(1, 2, &[(0, 0, C64::new(1.0, 0.0))]).unwrap();
        // Row 0 has one nonzero; slot 2 pads with the row index.
        assert_eq!(h.nonzero_index_oracle(0, 2).unwrap(), 0);
        // Row 1 is empty; every slot pads.
        assert_eq!(h.nonzero_index_oracle(1, 1).unwrap(), 1);
    }

    #[test]
    fn index_oracle_injective_and_consistent() {
        let h = make_random_sparse(3, 4, 1.0, 42).unwrap();
        let dim = h.dim();
        for j in 0..dim {
            let occupied = h.row_support(j).len();
            let mut seen = std::collections::HashSet::new();
            for l in 1..=occupied {
                let f = h.nonzero_index_oracle(j, l).unwrap();
                assert!(seen.insert(f), "slot map must be injective");
                assert_ne!(h.entry_oracle(j, f).unwrap(), linalg::ZERO);
            }
            // every nonzero appears at exactly one slot
            assert_eq!(seen.len(), occupied);
            for &k in h.row_support(j) {
                assert!(seen.contains(&k));
            }
        }
    }

    #[test]
    fn random_instance_is_deterministic() {
        let a = make_random_sparse(3, 4, 1.0, 42).unwrap();
        let b = make_random_sparse(3, 4, 1.0, 42).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn random_instance_d1_is_diagonal_real() {
        let h = make_random_sparse(1, 1, 1.0, 5).unwrap();
        let m = h.matrix();
        assert_eq!(m[[0, 1]], linalg::ZERO);
        assert_eq!(m[[1, 0]], linalg::ZERO);
        assert_eq!(m[[0, 0]].im, 0.0);
        assert_eq!(m[[1, 1]].im, 0.0);
    }

    #[test]
    fn random_instance_hits_h_max_target() {
        for seed in 0..6 {
            let h = make_random_sparse(2, 2, 1.0, seed).unwrap();
            assert!((h.h_max - 1.0).abs() < 0.1, "h_max = {}", h.h_max);
            assert!(h.h_spec <= h.d as f64 * h.h_max + 1e-12);
        }
    }

    #[test]
    fn parity_path_small_weights() {
        let spec = ParitySpec::new(1, vec![true], 1).unwrap();
        let h = make_parity_path(&spec, ParityVariant::H1).unwrap();
        assert!((h.entry_oracle(0, 1).unwrap().re - 1.0).abs() < 1e-15);

        let spec2 = ParitySpec::new(2, vec![false, false], 1).unwrap();
        let h2 = make_parity_path(&spec2, ParityVariant::H1).unwrap();
        let s2 = 2f64.sqrt();
        assert!((h2.entry_oracle(0, 1).unwrap().re - s2).abs() < 1e-15);
        assert!((h2.entry_oracle(1, 2).unwrap().re - s2).abs() < 1e-15);
    }

    #[test]
    fn parity_h1_n4_h_max() {
        let spec = ParitySpec::new(4, vec![false; 4], 1).unwrap();
        let h = make_parity_path(&spec, ParityVariant::H1).unwrap();
        // max over i of sqrt(i (5 - i)) by enumeration
        let expected = (1..=4)
            .map(|i| ((i * (5 - i)) as f64).sqrt())
            .fold(0.0_f64, f64::max);
        assert!((h.h_max - expected).abs() < 1e-15);
        assert!((expected - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn h2_connectivity_follows_prefix_xor() {
        // Breadth-first walk from (0,0): reachable (i, j) iff j = x_1^..^x_i.
        let bits = ParitySpec::parse_bits("101").unwrap();
        let spec = ParitySpec::new(3, bits.clone(), 1).unwrap();
        let h = make_parity_path(&spec, ParityVariant::H2).unwrap();
        let dim = h.dim();
        let start = 0usize;
        let mut reach = vec![false; dim];
        reach[start] = true;
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for &w in h.row_support(v) {
                if !reach[w] {
                    reach[w] = true;
                    frontier.push(w);
                }
            }
        }
        let mut prefix = false;
        let mut expect = vec![(0usize, 0usize)];
        for (i, b) in bits.iter().enumerate() {
            prefix ^= b;
            expect.push((i + 1, prefix as usize));
        }
        for i in 0..=3usize {
            for j in 0..2usize {
                let idx = 2 * i + j;
                assert_eq!(reach[idx], expect.contains(&(i, j)), "site ({i}, {j})");
            }
        }
    }

    #[test]
    fn blowup_d1_reduces_to_h2_over_n() {
        let bits = vec![false];
        let spec = ParitySpec::new(1, bits, 1).unwrap();
        let blown = make_blown_up_parity(&spec).unwrap();
        let h2 = make_parity_path(&spec, ParityVariant::H2).unwrap();
        // N = 1, so the 1/N factor is trivial.
        assert!(linalg::max_abs_diff(blown.matrix(), h2.matrix()) < 1e-15);
    }

    #[test]
    fn blowup_degrees() {
        let bits = ParitySpec::parse_bits("11").unwrap();
        let spec = ParitySpec::new(2, bits, 2).unwrap();
        let h = make_blown_up_parity(&spec).unwrap();
        // interior (i = 1) vertices: 2d = 4 neighbors; endpoints: d = 2.
        for j in 0..2usize {
            for l in 0..2usize {
                let end = j * 2 + l;
                assert_eq!(h.row_support(end).len(), 2, "endpoint ({j}, {l})");
                let interior = (2 + j) * 2 + l;
                assert_eq!(h.row_support(interior).len(), 4, "interior ({j}, {l})");
            }
        }
        assert_eq!(h.d, 4);
    }

    #[test]
    fn blowup_invariant_subspace_entries() {
        let bits = ParitySpec::parse_bits("0110").unwrap();
        let spec = ParitySpec::new(4, bits.clone(), 3).unwrap();
        let h = make_blown_up_parity(&spec).unwrap();
        let dim = h.dim();
        // Restriction to uniform-blowup states reproduces d * weight / N.
        let m = h.matrix();
        let mut prev_j = 0usize;
        for i in 1..=4usize {
            let x = spec.bits[i - 1] as usize;
            let next_j = prev_j ^ x;
            let from = blown_up_uniform_state(&spec, i - 1, prev_j, dim);
            let to = blown_up_uniform_state(&spec, i, next_j, dim);
            let mut amp = C64::new(0.0, 0.0);
            for r in 0..dim {
                if from[r] == linalg::ZERO {
                    continue;
                }
                for c in 0..dim {
                    amp += from[r].conj() * m[[r, c]] * to[c];
                }
            }
            let expected = 3.0 * path_weight(i, 4) / 4.0;
            assert!(
                (amp.re - expected).abs() < 1e-12 && amp.im.abs() < 1e-12,
                "edge {i}: {amp} vs {expected}"
            );
            prev_j = next_j;
        }
    }

    #[test]
    fn blowup_h_max_formula() {
        let bits = ParitySpec::parse_bits("0110").unwrap();
        let spec = ParitySpec::new(4, bits, 2).unwrap();
        let h = make_blown_up_parity(&spec).unwrap();
        let mid = 2usize; // ceil(4/2)
        let expected = ((mid * (4 - mid + 1)) as f64).sqrt() / 4.0;
        assert!((h.h_max - expected).abs() < 1e-15);
    }

    #[test]
    fn norms_spot_values() {
        let h = zero_h();
        assert_eq!(h.norms(), (0.0, 0.0));
        let diag = SparseHamiltonian::from_entries(
            1,
            1,
            &[(0, 0, C64::new(1.0, 0.0)), (1, 1, C64::new(-1.0, 0.0))],
        )
        .unwrap();
        let (hm, hs) = diag.norms();
        assert!((hm - 1.0).abs() < 1e-15 && (hs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let h = make_random_sparse(2, 3, 0.7, 9).unwrap();
        let text = to_json_string(&h);
        let back = from_json_string(&text).unwrap();
        assert_eq!(h.matrix(), back.matrix());
        assert_eq!(h.d, back.d);
    }

    #[test]
    fn json_rejects_hermiticity_violation() {
        // (0,1) = i and (1,0) = i cannot both hold.
        let text = r#"{"n": 1, "d": 1, "entries": [[0, 1, 0.0, 1.0], [1, 0, 0.0, 1.0]]}"#;
        match from_json_string(text) {
            Err(Error::Hermiticity(_)) => {}
            other => panic!("expected Hermiticity error, got {other:?}"),
        }
    }

    #[test]
    fn json_rejects_sparsity_violation() {
        let text = r#"{"n": 1, "d": 1, "entries": [[0, 0, 1.0, 0.0], [0, 1, 1.0, 0.0]]}"#;
        match from_json_string(text) {
            Err(Error::Sparsity(_)) => {}
            other => panic!("expected Sparsity error, got {other:?}"),
        }
    }

    #[test]
    fn json_rejects_garbage() {
        match from_json_string("{not json") {
            Err(Error::MalformedJson(_)) => {}
            other => panic!("expected MalformedJson, got {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn generator_invariants_hold(seed in 0u64..500, n in 1usize..4, d_raw in 1usize..6) {
            let dim = 1usize << n;
            let d = d_raw.min(dim);
            let h = make_random_sparse(n, d, 1.0, seed).unwrap();
            let m = h.matrix();
            for j in 0..dim {
                let mut count = 0;
                for k in 0..dim {
                    let a = m[[j, k]];
                    prop_assert_eq!(a, m[[k, j]].conj());
                    if a != linalg::ZERO {
                        count += 1;
                    }
                }
                prop_assert!(count <= d);
                let support = h.row_support(j);
                prop_assert!(support.windows(2).all(|w| w[0] < w[1]));
            }
            prop_assert!(h.h_spec <= h.d as f64 * h.h_max + 1e-12);
        }
    }
}
