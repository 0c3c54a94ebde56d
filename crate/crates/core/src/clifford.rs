//! Complex Clifford algebra representations on the spinor module `C^N`,
//! `N = 2^{floor(n/2)}`.
//!
//! Generators `gamma_i` satisfy `gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij`
//! and are skew-adjoint for the standard hermitian product. The complex volume
//! element is `omega = i^{floor((n+1)/2)} gamma_1 ... gamma_n`; for odd `n` the
//! representation is chosen so that `omega = Id`, for even `n` it anticommutes
//! with every generator.
//!
//! For n = 2 and n = 3 the generator matrices are the explicit quaternionic
//! ones (left multiplication by j, -k resp. i, j, k under `(z,w) <-> z + jw`);
//! higher dimensions are produced by recursive doubling, constrained only by
//! the invariants above.

use crate::cmat::{CMat, C64, C_I, C_ONE, C_ZERO};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CliffordError {
    #[error("dimension n={0} outside supported range [1, 8]")]
    DimensionOutOfRange(usize),
    #[error("no {kind:?} structure implemented for n={n}")]
    UnsupportedStructure { n: usize, kind: StructureKind },
    #[error("vector/spinor length does not match representation")]
    DimensionMismatch,
    #[error("zero spinor has no associated frame")]
    ZeroSpinor,
}

/// Irreducible complex Clifford representation data for `R^n`.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    /// Ambient dimension.
    pub n: usize,
    /// Spinor dimension `N = 2^{floor(n/2)}`.
    pub dim: usize,
    /// Action of the standard basis vectors.
    pub gammas: Vec<CMat>,
    /// Complex volume element.
    pub omega: CMat,
}

pub const MAX_DIM: usize = 8;

/// Builds the representation for `1 <= n <= 8`.
pub fn build_clifford_rep(n: usize) -> Result<CliffordRep, CliffordError> {
    if n == 0 || n > MAX_DIM {
        return Err(CliffordError::DimensionOutOfRange(n));
    }
    let gammas = generators(n);
    let dim = gammas[0].rows;
    let omega = volume_from_gammas(n, &gammas);
    Ok(CliffordRep { n, dim, gammas, omega })
}

fn generators(n: usize) -> Vec<CMat> {
    match n {
        // Forced by E_1^2 = -1 together with omega = i * E_1 = Id.
        1 => vec![CMat::from_rows(&[&[-C_I]])],
        2 => vec![
            CMat::from_rows(&[&[C_ZERO, -C_ONE], &[C_ONE, C_ZERO]]),
            CMat::from_rows(&[&[C_ZERO, C_I], &[C_I, C_ZERO]]),
        ],
        3 => vec![
            CMat::from_rows(&[&[C_I, C_ZERO], &[C_ZERO, -C_I]]),
            CMat::from_rows(&[&[C_ZERO, -C_ONE], &[C_ONE, C_ZERO]]),
            CMat::from_rows(&[&[C_ZERO, -C_I], &[-C_I, C_ZERO]]),
        ],
        _ => {
            if n % 2 == 0 {
                double(&generators(n - 1))
            } else {
                extend_odd(n, &generators(n - 1))
            }
        }
    }
}

/// Even n from odd n-1: block off-diagonal embedding plus one extra
/// generator; preserves the Clifford relation and skew-adjointness.
fn double(lower: &[CMat]) -> Vec<CMat> {
    let m = lower[0].rows;
    let mut out = Vec::with_capacity(lower.len() + 1);
    for g in lower {
        let mut big = CMat::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                big[(i, m + j)] = g[(i, j)];
                big[(m + i, j)] = g[(i, j)];
            }
        }
        out.push(big);
    }
    let mut last = CMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        last[(i, m + i)] = -C_ONE;
        last[(m + i, i)] = C_ONE;
    }
    out.push(last);
    out
}

/// Odd n from even n-1: append `-i * omega_{n-1}`, which anticommutes with
/// the existing generators and squares to -Id; the sign makes the new volume
/// element the identity.
fn extend_odd(n: usize, lower: &[CMat]) -> Vec<CMat> {
    let omega_even = volume_from_gammas(n - 1, lower);
    let mut out = lower.to_vec();
    out.push(omega_even.scale(-C_I));
    out
}

fn volume_from_gammas(n: usize, gammas: &[CMat]) -> CMat {
    let mut prod = CMat::identity(gammas[0].rows);
    for g in gammas {
        prod = prod.matmul(g);
    }
    let k = (n + 1) / 2;
    prod.scale(C_I.powu(k as u32))
}

/// Clifford multiplication `(sum_i v_i gamma_i) sigma`; linear in both
/// arguments, `v` may be complex.
pub fn clifford_apply(rep: &CliffordRep, v: &[C64], sigma: &[C64]) -> Result<Vec<C64>, CliffordError> {
    if v.len() != rep.n || sigma.len() != rep.dim {
        return Err(CliffordError::DimensionMismatch);
    }
    let mut out = vec![C_ZERO; rep.dim];
    for (vi, g) in v.iter().zip(&rep.gammas) {
        if *vi == C_ZERO {
            continue;
        }
        for r in 0..rep.dim {
            let mut acc = C_ZERO;
            for c in 0..rep.dim {
                acc += g[(r, c)] * sigma[c];
            }
            out[r] += vi * acc;
        }
    }
    Ok(out)
}

/// Clifford multiplication by a real vector.
pub fn clifford_apply_real(rep: &CliffordRep, v: &[f64], sigma: &[C64]) -> Result<Vec<C64>, CliffordError> {
    let vc: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    clifford_apply(rep, &vc, sigma)
}

/// Matrix of Clifford multiplication by a (complex) vector.
pub fn clifford_matrix(rep: &CliffordRep, v: &[C64]) -> Result<CMat, CliffordError> {
    if v.len() != rep.n {
        return Err(CliffordError::DimensionMismatch);
    }
    let mut out = CMat::zeros(rep.dim, rep.dim);
    for (vi, g) in v.iter().zip(&rep.gammas) {
        for r in 0..rep.dim {
            for c in 0..rep.dim {
                out[(r, c)] += vi * g[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Recomputes the complex volume element `i^{floor((n+1)/2)} gamma_1...gamma_n`.
pub fn volume_element(rep: &CliffordRep) -> CMat {
    volume_from_gammas(rep.n, &rep.gammas)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// Quaternionic, commutes with Clifford multiplication: J^2 = -Id.
    QuatCommutingJ,
    /// Real, anticommutes with Clifford multiplication: K^2 = +Id.
    RealAnticommutingK,
}

/// A conjugate-linear endomorphism of the spinor module, stored as
/// `v -> matrix * conj(v)`.
#[derive(Debug, Clone)]
pub struct StructureMap {
    pub kind: StructureKind,
    pub matrix: CMat,
}

impl StructureMap {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        self.matrix.apply(&conj)
    }
}

/// The explicit structures of the n = 2, 3 spinor modules:
/// `J(z,w) = (-conj w, conj z)` and, for n = 2 only, `K(z,w) = (-conj w, -conj z)`.
pub fn structure_map(rep: &CliffordRep, kind: StructureKind) -> Result<StructureMap, CliffordError> {
    let matrix = match (rep.n, kind) {
        (2, StructureKind::QuatCommutingJ) | (3, StructureKind::QuatCommutingJ) => {
            CMat::from_rows(&[&[C_ZERO, -C_ONE], &[C_ONE, C_ZERO]])
        }
        (2, StructureKind::RealAnticommutingK) => {
            CMat::from_rows(&[&[C_ZERO, -C_ONE], &[-C_ONE, C_ZERO]])
        }
        (n, kind) => return Err(CliffordError::UnsupportedStructure { n, kind }),
    };
    Ok(StructureMap { kind, matrix })
}

/// Maps a nonzero spinor in `Sigma_3 = C^2` to the rotation carrying the
/// standard frame to the frame it induces: the unique unit quaternion `q`
/// with `rho(q) sigma/|sigma| = (1,0)` is inverted and pushed down through
/// the double cover `Spin(3) -> SO(3)`.
///
/// The output is unchanged under `sigma -> c sigma` for real `c > 0` and
/// under `sigma -> -sigma` (the covering kills the sign).
pub fn frame_from_spinor(sigma: &[C64; 2]) -> Result<[[f64; 3]; 3], CliffordError> {
    let norm = (sigma[0].norm_sqr() + sigma[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        return Err(CliffordError::ZeroSpinor);
    }
    let z = sigma[0] / norm;
    let w = sigma[1] / norm;
    // q in SU(2) with q (z,w)^T = (1,0)^T.
    let q = CMat::from_rows(&[&[z.conj(), w.conj()], &[-w, z]]);
    let q_inv = q.adjoint();
    let rep = build_clifford_rep(3).expect("n=3 in range");
    let mut rot = [[0.0f64; 3]; 3];
    for l in 0..3 {
        // q^{-1} E_{l+1} q expanded in the E_k basis: coefficient extraction
        // via tr(E_k E_k) = -2.
        let m = q_inv.matmul(&rep.gammas[l]).matmul(&q);
        for (k, row) in rot.iter_mut().enumerate() {
            let t = rep.gammas[k].matmul(&m).trace();
            row[l] = -0.5 * t.re;
        }
    }
    Ok(rot)
}
