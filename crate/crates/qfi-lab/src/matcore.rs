//! Dense complex linear algebra for small Hilbert spaces (dimension ≤ 16).
//!
//! Everything here is sized for multi-qubit density matrices: products,
//! adjoints, Kronecker products, partial traces and a cyclic-Jacobi Hermitian
//! eigensolver. Matrices are immutable values; all operations return fresh
//! matrices, so they can be shared freely across threads.
//!
//! Qubit ordering is big-endian throughout the crate: qubit 0 is the leftmost
//! tensor factor and the most significant bit of a basis-state index, so
//! `|01⟩` is basis index 1 of a two-qubit space.

use num_complex::Complex64;

use crate::{Error, Result};

/// Maximum number of Jacobi sweeps before giving up on a spectrum.
const MAX_JACOBI_SWEEPS: usize = 60;

/// A dense square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        CMat {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(dim: usize, mut f: F) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from a row-major slice of length `dim²`.
    pub fn from_slice(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must equal dim²");
        CMat {
            dim,
            data: entries.to_vec(),
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = CMat::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.dim, |i, j| self.at(j, i).conj())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim, "matrix sum dimension mismatch");
        CMat::from_fn(self.dim, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim, "matrix difference dimension mismatch");
        CMat::from_fn(self.dim, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat::from_fn(self.dim, |i, j| self.at(i, j) * s)
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest element-wise difference `max |self − other|`.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.dim, other.dim, "comparison dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermiticity, `max |M − M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.at(i, j) - self.at(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// The Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> CMat {
        CMat::from_fn(self.dim, |i, j| {
            (self.at(i, j) + self.at(j, i).conj()) * 0.5
        })
    }

    /// Sandwich product `A · self · A†`.
    pub fn conjugate_by(&self, a: &CMat) -> CMat {
        a.mul(self).mul(&a.adjoint())
    }

    /// Expectation value `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let mv = self.apply(v);
        v.iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

impl std::ops::Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        CMat::add(self, rhs)
    }
}

impl std::ops::Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        CMat::sub(self, rhs)
    }
}

impl std::ops::Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        CMat::mul(self, rhs)
    }
}

/// Kronecker product. The left factor is the leading (most significant)
/// subsystem, matching the crate's big-endian qubit ordering.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut out = CMat::zeros(dim);
    for i1 in 0..da {
        for j1 in 0..da {
            let f = a.at(i1, j1);
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for i2 in 0..db {
                for j2 in 0..db {
                    out.set(i1 * db + i2, j1 * db + j2, f * b.at(i2, j2));
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_all(factors: &[&CMat]) -> CMat {
    assert!(!factors.is_empty(), "tensor_all needs at least one factor");
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = tensor(&acc, f);
    }
    acc
}

/// Traces out the subsystems not listed in `keep`.
///
/// `dims` lists the subsystem dimensions in big-endian order and must
/// multiply to the matrix dimension; `keep` is the set of subsystem indices
/// retained, and the reduced matrix keeps them in their original order.
pub fn partial_trace(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {:?} multiply to {}, matrix has dimension {}",
            dims,
            total,
            m.dim()
        )));
    }
    if keep.is_empty() {
        return Err(Error::DimensionMismatch(
            "partial trace must keep at least one subsystem".into(),
        ));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "keep set {:?} exceeds subsystem count {}",
            keep,
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();

    // Strides of each subsystem inside a flat index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&t| dims[t]).product();

    // Flat index from a subsystem-index assignment over `subs`.
    let expand = |subs: &[usize], combo: usize| -> usize {
        let mut rem = combo;
        let mut idx = 0usize;
        for &s in subs.iter().rev() {
            idx += (rem % dims[s]) * strides[s];
            rem /= dims[s];
        }
        idx
    };

    let mut out = CMat::zeros(kept_dim);
    for r in 0..kept_dim {
        let row_base = expand(&keep, r);
        for c in 0..kept_dim {
            let col_base = expand(&keep, c);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..traced_dim {
                let off = expand(&traced, t);
                acc += m.at(row_base + off, col_base + off);
            }
            out.set(r, c, acc);
        }
    }
    Ok(out)
}

/// Spectrum of a Hermitian matrix: ascending eigenvalues with orthonormal
/// eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl EigDecomposition {
    /// Eigenvector column `j`.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.vectors.dim())
            .map(|i| self.vectors.at(i, j))
            .collect()
    }

    /// Reassembles `Σ λ_j v_j v_j†`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.vectors.dim();
        CMat::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors.at(i, k) * self.vectors.at(j, k).conj() * self.values[k])
                .sum()
        })
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// The input is symmetrized as `(M + M†)/2` first, so small Hermiticity
/// defects from round-off are harmless. Fails only if the off-diagonal mass
/// has not converged after a fixed sweep cap, which signals an ill-conditioned
/// input at these dimensions.
pub fn eigh(m: &CMat) -> Result<EigDecomposition> {
    let n = m.dim();
    let mut h = m.hermitian_part();
    let mut v = CMat::identity(n);

    let scale = h.max_abs().max(1.0);
    let tol = 1e-15 * scale;

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let off = max_offdiag(&h);
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut h, &mut v, p, q);
            }
        }
    }
    if !converged && max_offdiag(&h) > tol {
        return Err(Error::NonConvergence(MAX_JACOBI_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| h.at(i, i).re).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMat::zeros(n);
    for (newcol, &oldcol) in order.iter().enumerate() {
        // Canonical phase: largest-magnitude component real and non-negative.
        let mut pivot = Complex64::new(1.0, 0.0);
        let mut best = 0.0;
        for i in 0..n {
            let z = v.at(i, oldcol);
            if z.norm() > best {
                best = z.norm();
                pivot = z;
            }
        }
        let phase = if best > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            vectors.set(i, newcol, v.at(i, oldcol) * phase);
        }
    }

    Ok(EigDecomposition { values, vectors })
}

fn max_offdiag(h: &CMat) -> f64 {
    let n = h.dim();
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            worst = worst.max(h.at(p, q).norm());
        }
    }
    worst
}

/// One Jacobi rotation zeroing `h[p][q]`; accumulates the rotation into `v`.
fn jacobi_rotate(h: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let b = h.at(p, q);
    let babs = b.norm();
    if babs == 0.0 {
        return;
    }
    let a = h.at(p, p).re;
    let d = h.at(q, q).re;
    let phase = b / babs;

    // tan(2θ) = 2|b|/(d − a), evaluated stably.
    let tau = (d - a) / (2.0 * babs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = h.dim();
    // Column update: J has J[p][p] = c, J[p][q] = s·e^{iβ},
    // J[q][p] = −s·e^{−iβ}, J[q][q] = c; apply H ← J† H J, V ← V J.
    let jp = s * phase;
    for i in 0..n {
        let hip = h.at(i, p);
        let hiq = h.at(i, q);
        h.set(i, p, hip * c - hiq * jp.conj());
        h.set(i, q, hip * jp + hiq * c);
    }
    for j in 0..n {
        let hpj = h.at(p, j);
        let hqj = h.at(q, j);
        h.set(p, j, hpj * c - hqj * jp);
        h.set(q, j, hpj * jp.conj() + hqj * c);
    }
    // Enforce exact zero and real diagonal after rotation.
    h.set(p, q, Complex64::new(0.0, 0.0));
    h.set(q, p, Complex64::new(0.0, 0.0));
    let app = h.at(p, p).re;
    let aqq = h.at(q, q).re;
    h.set(p, p, Complex64::new(app, 0.0));
    h.set(q, q, Complex64::new(aqq, 0.0));

    for i in 0..n {
        let vip = v.at(i, p);
        let viq = v.at(i, q);
        v.set(i, p, vip * c - viq * jp.conj());
        v.set(i, q, vip * jp + viq * c);
    }
}

/// 2×2 Pauli matrices and friends.
pub mod consts {
    use super::CMat;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn identity2() -> CMat {
        CMat::identity(2)
    }

    pub fn sigma_x() -> CMat {
        CMat::from_slice(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub fn sigma_y() -> CMat {
        CMat::from_slice(2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    pub fn sigma_z() -> CMat {
        CMat::from_slice(2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &CounterRng, dim: usize, base: u64) -> CMat {
        let mut m = CMat::zeros(dim);
        let mut k = 0u64;
        for i in 0..dim {
            for j in i..dim {
                let re = 2.0 * rng.uniform(base + k) - 1.0;
                let im = 2.0 * rng.uniform(base + k + 1) - 1.0;
                k += 2;
                if i == j {
                    m.set(i, i, c(re, 0.0));
                } else {
                    m.set(i, j, c(re, im));
                    m.set(j, i, c(re, -im));
                }
            }
        }
        m
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = CMat::identity(2);
        let i4 = tensor(&i2, &i2);
        assert_eq!(i4.max_abs_diff(&CMat::identity(4)), 0.0);
    }

    #[test]
    fn tensor_xx_flips_both_qubits() {
        let xx = tensor(&consts::sigma_x(), &consts::sigma_x());
        let v00 = [c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)];
        let out = xx.apply(&v00);
        assert_eq!(out[3], c(1., 0.));
        assert!(out[..3].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn tensor_phase_acts_on_leading_qubit_only() {
        // diag(1, e^{iφ}) ⊗ I at φ = π sends |11⟩ to −|11⟩.
        let phi = std::f64::consts::PI;
        let u = CMat::from_diag(&[c(1., 0.), Complex64::from_polar(1.0, phi)]);
        let full = tensor(&u, &CMat::identity(2));
        let v11 = [c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)];
        let out = full.apply(&v11);
        assert!((out[3] - c(-1., 0.)).norm() < 1e-15);
    }

    #[test]
    fn tensor_associativity_is_exact_on_dyadic_entries() {
        // Entries are powers of two, so products are exact and associativity
        // holds bitwise.
        let rng = CounterRng::new(7);
        let pick = |idx: u64| -> Complex64 {
            let choices = [0.0, 0.5, 1.0, 2.0, -0.5, -1.0];
            let re = choices[(rng.value(idx) % 6) as usize];
            let im = choices[(rng.value(idx.wrapping_add(1 << 32)) % 6) as usize];
            c(re, im)
        };
        for trial in 0..50u64 {
            let base = trial * 1000;
            let a = CMat::from_fn(2, |i, j| pick(base + (i * 2 + j) as u64));
            let b = CMat::from_fn(2, |i, j| pick(base + 100 + (i * 2 + j) as u64));
            let d = CMat::from_fn(2, |i, j| pick(base + 200 + (i * 2 + j) as u64));
            let left = tensor(&tensor(&a, &b), &d);
            let right = tensor(&a, &tensor(&b, &d));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let inv = 1.0 / 2.0f64.sqrt();
        let phi_plus = [c(inv, 0.), c(0., 0.), c(0., 0.), c(inv, 0.)];
        let proj = CMat::from_fn(4, |i, j| phi_plus[i] * phi_plus[j].conj());
        let red = partial_trace(&proj, &[2, 2], &[0]).unwrap();
        assert!(red.max_abs_diff(&CMat::identity(2).scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor_times_trace() {
        let rng = CounterRng::new(11);
        let a = random_hermitian(&rng, 2, 0);
        let b = random_hermitian(&rng, 2, 100);
        let prod = tensor(&a, &b);
        let red = partial_trace(&prod, &[2, 2], &[0]).unwrap();
        let expect = a.scale(b.trace());
        assert!(red.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn partial_trace_over_everything_is_full_trace() {
        let rng = CounterRng::new(13);
        let m = random_hermitian(&rng, 4, 0);
        let red = partial_trace(&m, &[2, 2], &[0, 1]).unwrap();
        assert_eq!(red.dim(), 4);
        let t = partial_trace(&m, &[4], &[0]).unwrap();
        assert_eq!(t.dim(), 4);
        // Keeping all subsystems is the identity operation; the 1×1 case
        // needs a singleton subsystem list.
        let scalar = partial_trace(&tensor(&m, &CMat::identity(1)), &[4, 1], &[1]).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert!((scalar.at(0, 0) - m.trace()).norm() < 1e-13);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = CMat::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
    }

    #[test]
    fn eigh_diagonal_matrix() {
        let m = CMat::from_diag(&[c(0.7, 0.), c(0.3, 0.)]);
        let eig = eigh(&m).unwrap();
        assert!((eig.values[0] - 0.3).abs() < 1e-14);
        assert!((eig.values[1] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn eigh_sigma_x() {
        let eig = eigh(&consts::sigma_x()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let inv = 1.0 / 2.0f64.sqrt();
        // Minus eigenvector is (|0⟩ − |1⟩)/√2 up to phase; canonical phase
        // makes the largest component real positive.
        let vm = eig.vector(0);
        assert!((vm[0].re - inv).abs() < 1e-12);
        assert!((vm[1].re + inv).abs() < 1e-12);
    }

    #[test]
    fn eigh_rank_one_projector() {
        let inv = 1.0 / 2.0f64.sqrt();
        let phi_plus = [c(inv, 0.), c(0., 0.), c(0., 0.), c(inv, 0.)];
        let proj = CMat::from_fn(4, |i, j| phi_plus[i] * phi_plus[j].conj());
        let eig = eigh(&proj).unwrap();
        for v in &eig.values[..3] {
            assert!(v.abs() < 1e-14);
        }
        assert!((eig.values[3] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_reconstruction_and_orthonormality_on_random_matrices() {
        let rng = CounterRng::new(42);
        let mut base = 0u64;
        for &dim in &[2usize, 4, 16] {
            for _ in 0..1000 {
                let m = random_hermitian(&rng, dim, base);
                base += 1000;
                let eig = eigh(&m).unwrap();
                assert!(
                    eig.reconstruct().max_abs_diff(&m) <= 1e-10,
                    "reconstruction failed at dim {dim}"
                );
                // Orthonormality and the eigen-equation residual.
                for j in 0..dim {
                    let vj = eig.vector(j);
                    for k in 0..dim {
                        let vk = eig.vector(k);
                        let dot: Complex64 =
                            vj.iter().zip(vk.iter()).map(|(a, b)| a.conj() * b).sum();
                        let target = if j == k { 1.0 } else { 0.0 };
                        assert!((dot.norm() - target).abs() <= 1e-10);
                    }
                    let mv = m.apply(&vj);
                    let scale = eig.values[j].abs().max(1.0);
                    let resid: f64 = mv
                        .iter()
                        .zip(vj.iter())
                        .map(|(a, b)| (a - b * eig.values[j]).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(resid <= 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn eigh_handles_degenerate_spectra() {
        // I ⊗ σ_z has doubly degenerate ±1 eigenvalues.
        let m = tensor(&CMat::identity(2), &consts::sigma_z());
        let eig = eigh(&m).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&m) < 1e-12);
        assert_eq!(eig.values.iter().filter(|v| **v > 0.0).count(), 2);
    }
}
