//! Closed-form Dirac spectra and eigenspinors on flat tori `R^n/Gamma` for
//! all `2^n` spin structures.
//!
//! With the spin structure encoded by bits `delta`, the spectrum is
//! `{ +-2pi |alpha + delta| : alpha in Gamma* }`; a nonzero eigenvalue has
//! multiplicity `2^{floor(n/2)-1}` per contributing dual point, and for the
//! trivial structure the eigenvalue `0` has multiplicity `2^{floor(n/2)}`.
//! Eigenspinors are single Fourier modes `psi(x) = e^{2 pi i (alpha+delta)(x)} phi`
//! with `phi` in the `mu`-eigenspace of the involution `i (alpha+delta)/|..| .`.

use std::collections::BTreeMap;

use crate::clifford::{self, CliffordRep, StructureMap};
use crate::cmat::{vec_dot, vec_norm, vec_scale, vec_sub, C64, C_I, C_ONE, C_ZERO};
use crate::lattice::{enumerate_dual, enumerate_dual_quadratic, Lattice, SpinStructureDelta};
use crate::spectrum::{cluster_sorted, Provenance, SpectralEntry, SpectrumReport};
use crate::util;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TorusError {
    #[error("alpha + delta = 0 has no direction; eigenspinors need a nonzero mode")]
    ZeroShift,
    #[error("spinor index j={j} outside 1..={max}")]
    IndexOutOfRange { j: usize, max: usize },
    #[error("projector rank deficient (representation bug)")]
    RankDeficientProjector,
    #[error("metric matrix is not symmetric positive definite")]
    NonSpdMetric,
    #[error("field has no Fourier modes")]
    EmptyField,
    #[error("field is too close to zero somewhere for a frame (min |psi| = {0:.3e})")]
    NearZeroField(f64),
    #[error("operation requires n = {expected}, lattice has n = {actual}")]
    WrongDimension { expected: usize, actual: usize },
    #[error("grid must have at least {min} points per axis")]
    GridTooCoarse { min: usize },
}

/// Finitely supported Fourier spinor field
/// `psi(x) = sum_alpha c_alpha e^{2 pi i (alpha+delta)(x)}`.
#[derive(Debug, Clone)]
pub struct FourierSpinorField {
    pub lat: Lattice,
    pub delta: SpinStructureDelta,
    pub rep: CliffordRep,
    /// Map from integer dual coordinates to coefficient vectors in `C^N`.
    pub coeffs: BTreeMap<Vec<i64>, Vec<C64>>,
}

impl FourierSpinorField {
    pub fn new(
        lat: Lattice,
        delta: SpinStructureDelta,
        coeffs: BTreeMap<Vec<i64>, Vec<C64>>,
    ) -> Self {
        let rep = clifford::build_clifford_rep(lat.n).expect("lattice dimension in range");
        for c in coeffs.values() {
            assert_eq!(c.len(), rep.dim, "coefficient length must be N");
        }
        FourierSpinorField { lat, delta, rep, coeffs }
    }

    pub fn single_mode(
        lat: Lattice,
        delta: SpinStructureDelta,
        alpha: &[i64],
        coeff: Vec<C64>,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(alpha.to_vec(), coeff);
        FourierSpinorField::new(lat, delta, coeffs)
    }

    /// Pointwise evaluation at an ambient point `x`.
    pub fn eval(&self, x: &[f64]) -> Vec<C64> {
        let mut out = vec![C_ZERO; self.rep.dim];
        for (alpha, c) in &self.coeffs {
            let s = self.lat.dual_vector(alpha, &self.delta.bits);
            let phase = 2.0 * std::f64::consts::PI * util::dot(&s, x);
            let e = C64::new(phase.cos(), phase.sin());
            for (o, ci) in out.iter_mut().zip(c) {
                *o += e * ci;
            }
        }
        out
    }

    /// `L^2` norm squared over the fundamental domain: Parseval gives
    /// `covolume * sum |c_alpha|^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.lat.covolume * self.coeffs.values().map(|c| vec_norm(c).powi(2)).sum::<f64>()
    }

    /// `L^2` hermitian inner product with another field over the same
    /// lattice and spin structure.
    pub fn l2_inner(&self, other: &FourierSpinorField) -> C64 {
        let mut acc = C_ZERO;
        for (alpha, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(alpha) {
                acc += vec_dot(c, d);
            }
        }
        acc * C64::new(self.lat.covolume, 0.0)
    }

    pub fn scale(&self, s: C64) -> FourierSpinorField {
        let coeffs = self.coeffs.iter().map(|(a, c)| (a.clone(), vec_scale(c, s))).collect();
        FourierSpinorField { lat: self.lat.clone(), delta: self.delta.clone(), rep: self.rep.clone(), coeffs }
    }

    pub fn add(&self, other: &FourierSpinorField) -> FourierSpinorField {
        let mut coeffs = self.coeffs.clone();
        for (a, c) in &other.coeffs {
            coeffs
                .entry(a.clone())
                .and_modify(|v| *v = crate::cmat::vec_add(v, c))
                .or_insert_with(|| c.clone());
        }
        FourierSpinorField { lat: self.lat.clone(), delta: self.delta.clone(), rep: self.rep.clone(), coeffs }
    }

    /// Applies the flat Dirac operator in Fourier space:
    /// mode `alpha` maps to `2 pi i (alpha+delta) . c_alpha`.
    pub fn apply_dirac(&self) -> FourierSpinorField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(alpha, c)| {
                let s = self.lat.dual_vector(alpha, &self.delta.bits);
                let v = clifford::clifford_apply_real(&self.rep, &s, c).expect("dims match");
                (alpha.clone(), vec_scale(&v, 2.0 * std::f64::consts::PI * C_I))
            })
            .collect();
        FourierSpinorField { lat: self.lat.clone(), delta: self.delta.clone(), rep: self.rep.clone(), coeffs }
    }

    /// Applies a conjugate-linear structure pointwise. Conjugation reflects
    /// the mode: `alpha -> -alpha - bits`, coefficient `M conj(c_alpha)`.
    pub fn apply_structure(&self, s: &StructureMap) -> FourierSpinorField {
        let mut coeffs = BTreeMap::new();
        for (alpha, c) in &self.coeffs {
            let beta: Vec<i64> =
                alpha.iter().zip(&self.delta.bits).map(|(a, &b)| -a - b as i64).collect();
            coeffs.insert(beta, s.apply(c));
        }
        FourierSpinorField { lat: self.lat.clone(), delta: self.delta.clone(), rep: self.rep.clone(), coeffs }
    }

    pub fn max_abs_on_grid(&self, grid: usize) -> f64 {
        let mut max = 0.0f64;
        for_grid(&self.lat, grid, |x, _| {
            max = max.max(vec_norm(&self.eval(x)));
        });
        max
    }
}

/// Iterates the uniform grid over the fundamental domain in lattice
/// coordinates; calls `f(x, index)` with the ambient point.
fn for_grid(lat: &Lattice, grid: usize, mut f: impl FnMut(&[f64], &[usize])) {
    let n = lat.n;
    let mut idx = vec![0usize; n];
    loop {
        let mut x = vec![0.0; n];
        for j in 0..n {
            let t = idx[j] as f64 / grid as f64;
            for i in 0..n {
                x[i] += t * lat.basis[i][j];
            }
        }
        f(&x, &idx);
        // odometer
        let mut j = 0;
        loop {
            if j == n {
                return;
            }
            idx[j] += 1;
            if idx[j] < grid {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn analytic_norm_clusters(norms: &[f64], radius: f64) -> Vec<SpectralEntry> {
    cluster_sorted(norms, 1e-9 * (1.0 + radius))
}

/// Analytic Dirac spectrum on `(R^n/Gamma, g_eucl)` up to `|lambda| <= 2 pi R`.
pub fn torus_dirac_spectrum(
    lat: &Lattice,
    delta: &SpinStructureDelta,
    radius: f64,
) -> SpectrumReport {
    let pts = enumerate_dual(lat, delta, radius);
    spectrum_from_points(lat, delta, radius, pts.iter().map(|p| (p.norm, p.shifted.clone())))
}

/// Dirac spectrum for a constant metric `G` on the same lattice: eigenvalues
/// `+-2 pi sqrt((alpha+delta)^T G^{-1} (alpha+delta))`.
pub fn flat_metric_spectrum(
    lat: &Lattice,
    delta: &SpinStructureDelta,
    metric: &[Vec<f64>],
    radius: f64,
) -> Result<SpectrumReport, TorusError> {
    let n = lat.n;
    if metric.len() != n || metric.iter().any(|r| r.len() != n) {
        return Err(TorusError::NonSpdMetric);
    }
    let scale = metric.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    for i in 0..n {
        for j in 0..n {
            if (metric[i][j] - metric[j][i]).abs() > 1e-12 * (1.0 + scale) {
                return Err(TorusError::NonSpdMetric);
            }
        }
    }
    if !is_positive_definite(metric) {
        return Err(TorusError::NonSpdMetric);
    }
    let ginv = util::invert(metric).ok_or(TorusError::NonSpdMetric)?;
    let pts = enumerate_dual_quadratic(lat, delta, radius, Some(&ginv));
    Ok(spectrum_from_points(lat, delta, radius, pts.iter().map(|p| (p.norm, p.shifted.clone()))))
}

fn is_positive_definite(a: &[Vec<f64>]) -> bool {
    // Cholesky without pivoting; fails on non-PD input.
    let n = a.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

fn spectrum_from_points(
    lat: &Lattice,
    delta: &SpinStructureDelta,
    radius: f64,
    pts: impl Iterator<Item = (f64, Vec<f64>)>,
) -> SpectrumReport {
    let n = lat.n;
    let tau = std::f64::consts::TAU;
    let mut entries: Vec<SpectralEntry> = Vec::new();
    if n == 1 {
        // Rank-one spinor bundle: D e^{2 pi i s x} = 2 pi s e^{2 pi i s x}
        // with our gamma convention; eigenvalues are signed directly.
        let mut vals: Vec<f64> = pts.map(|(_, shifted)| tau * shifted[0]).collect();
        vals.sort_by(f64::total_cmp);
        entries = analytic_norm_clusters(&vals, radius);
    } else {
        let norms: Vec<f64> = pts.map(|(norm, _)| norm).collect();
        let half = 1usize << (n / 2 - 1);
        for c in analytic_norm_clusters(&norms, radius) {
            if c.eigenvalue <= 1e-9 * (1.0 + radius) {
                entries.push(SpectralEntry { eigenvalue: 0.0, multiplicity: (1 << (n / 2)) * c.multiplicity });
            } else {
                let lam = tau * c.eigenvalue;
                let mult = half * c.multiplicity;
                entries.push(SpectralEntry { eigenvalue: -lam, multiplicity: mult });
                entries.push(SpectralEntry { eigenvalue: lam, multiplicity: mult });
            }
        }
        entries.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    }
    SpectrumReport {
        entries,
        cutoff: radius,
        cluster_tol: 1e-9 * (1.0 + radius),
        provenance: Provenance::Analytic,
        n,
        delta_bits: delta.bits_string(),
        lattice_hash: lat.hash(),
    }
}

/// Constant-coefficient eigenspinor for the mode `alpha` and sign `mu`:
/// the coefficient is the `j`-th vector of a deterministic orthonormal basis
/// of the `mu`-eigenspace of `i (alpha+delta)/|alpha+delta| .`, obtained by
/// modified Gram-Schmidt on the projected standard basis.
pub fn torus_eigenspinor(
    lat: &Lattice,
    delta: &SpinStructureDelta,
    alpha: &[i64],
    mu: i32,
    j: usize,
) -> Result<FourierSpinorField, TorusError> {
    assert!(mu == 1 || mu == -1, "mu must be +-1");
    let n = lat.n;
    if n < 2 {
        return Err(TorusError::WrongDimension { expected: 2, actual: n });
    }
    let rep = clifford::build_clifford_rep(n).expect("dimension in range");
    let s = lat.dual_vector(alpha, &delta.bits);
    let norm = util::norm(&s);
    if norm < 1e-14 {
        return Err(TorusError::ZeroShift);
    }
    let max_j = 1usize << (n / 2 - 1);
    if j == 0 || j > max_j {
        return Err(TorusError::IndexOutOfRange { j, max: max_j });
    }
    let basis = projector_basis(&rep, &s, mu)?;
    Ok(FourierSpinorField::single_mode(lat.clone(), delta.clone(), alpha, basis[j - 1].clone()))
}

/// Orthonormal basis of the `mu`-eigenspace of the hermitian involution
/// `T = i * cl(s/|s|)`, via the projector `(Id + mu T)/2`.
pub(crate) fn projector_basis(
    rep: &CliffordRep,
    s: &[f64],
    mu: i32,
) -> Result<Vec<Vec<C64>>, TorusError> {
    let norm = util::norm(s);
    let unit: Vec<f64> = s.iter().map(|v| v / norm).collect();
    let dim = rep.dim;
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for k in 0..dim {
        let mut e = vec![C_ZERO; dim];
        e[k] = C_ONE;
        let t = clifford::clifford_apply_real(rep, &unit, &e).expect("dims match");
        // (e + mu i T e)/2
        let mut v: Vec<C64> = e
            .iter()
            .zip(&t)
            .map(|(ei, ti)| 0.5 * (ei + C64::new(mu as f64, 0.0) * C_I * ti))
            .collect();
        for b in &basis {
            let overlap = vec_dot(&v, b);
            v = vec_sub(&v, &vec_scale(b, overlap));
        }
        let vn = vec_norm(&v);
        if vn > 1e-8 {
            basis.push(vec_scale(&v, C64::new(1.0 / vn, 0.0)));
        }
    }
    if basis.len() != dim / 2 {
        return Err(TorusError::RankDeficientProjector);
    }
    Ok(basis)
}

/// One flagged grid point of a zero scan.
#[derive(Debug, Clone)]
pub struct ZeroPoint {
    pub index: Vec<usize>,
    pub x: Vec<f64>,
    pub abs_value: f64,
    pub cluster: usize,
}

#[derive(Debug, Clone)]
pub struct ZeroScan {
    pub grid: usize,
    pub threshold: f64,
    pub max_abs: f64,
    pub points: Vec<ZeroPoint>,
    pub cluster_count: usize,
}

/// Samples `|psi|` on a uniform periodic grid and returns the points below
/// the relative threshold `1e-9 * max |psi|`, grouped into connected
/// clusters under the `3^n - 1` periodic neighborhood.
pub fn zero_set_scan(field: &FourierSpinorField, grid: usize) -> Result<ZeroScan, TorusError> {
    if field.coeffs.is_empty() {
        return Err(TorusError::EmptyField);
    }
    if grid < 8 {
        return Err(TorusError::GridTooCoarse { min: 8 });
    }
    let n = field.lat.n;
    let mut samples: Vec<(Vec<usize>, Vec<f64>, f64)> = Vec::new();
    let mut max_abs = 0.0f64;
    for_grid(&field.lat, grid, |x, idx| {
        let v = vec_norm(&field.eval(x));
        max_abs = max_abs.max(v);
        samples.push((idx.to_vec(), x.to_vec(), v));
    });
    let threshold = 1e-9 * max_abs;
    let flagged: Vec<usize> =
        (0..samples.len()).filter(|&i| samples[i].2 <= threshold).collect();
    // union-find over flagged points
    let mut parent: Vec<usize> = (0..flagged.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != c {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let index_of: std::collections::HashMap<Vec<usize>, usize> = flagged
        .iter()
        .enumerate()
        .map(|(fi, &si)| (samples[si].0.clone(), fi))
        .collect();
    for (fi, &si) in flagged.iter().enumerate() {
        let idx = &samples[si].0;
        let mut nb = vec![0usize; n];
        let mut offs = vec![-1i64; n];
        loop {
            if offs.iter().any(|&o| o != 0) {
                for j in 0..n {
                    nb[j] = ((idx[j] as i64 + offs[j]).rem_euclid(grid as i64)) as usize;
                }
                if let Some(&fj) = index_of.get(&nb) {
                    let (ra, rb) = (find(&mut parent, fi), find(&mut parent, fj));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
            // advance offsets over {-1,0,1}^n
            let mut j = 0;
            loop {
                if j == n {
                    break;
                }
                offs[j] += 1;
                if offs[j] <= 1 {
                    break;
                }
                offs[j] = -1;
                j += 1;
            }
            if j == n {
                break;
            }
        }
    }
    let mut cluster_ids: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut points = Vec::with_capacity(flagged.len());
    for (fi, &si) in flagged.iter().enumerate() {
        let root = find(&mut parent, fi);
        let next = cluster_ids.len();
        let cid = *cluster_ids.entry(root).or_insert(next);
        let (idx, x, v) = &samples[si];
        points.push(ZeroPoint { index: idx.clone(), x: x.clone(), abs_value: *v, cluster: cid });
    }
    Ok(ZeroScan { grid, threshold, max_abs, points, cluster_count: cluster_ids.len() })
}

#[derive(Debug, Clone)]
pub struct FrameField {
    pub grid: usize,
    /// Row-major rotation matrices, one per grid point (odometer order of
    /// the grid iterator).
    pub frames: Vec<[[f64; 3]; 3]>,
    /// Largest Frobenius-norm jump between a boundary frame and the frame
    /// recomputed across the periodic seam.
    pub max_seam_jump: f64,
    /// Largest relative rotation angle between axis-adjacent frames.
    pub max_adjacent_angle: f64,
}

/// Samples `frame_from_spinor(psi(x))` over the fundamental domain of a
/// 3-torus. Because the covering kills signs, the `(-1)^{delta_j}`
/// equivariance cancels and the frame field is globally continuous; the seam
/// report quantifies this.
pub fn torus_frame_field(field: &FourierSpinorField, grid: usize) -> Result<FrameField, TorusError> {
    if field.lat.n != 3 {
        return Err(TorusError::WrongDimension { expected: 3, actual: field.lat.n });
    }
    if field.coeffs.is_empty() {
        return Err(TorusError::EmptyField);
    }
    if grid < 2 {
        return Err(TorusError::GridTooCoarse { min: 2 });
    }
    let mut max_abs = 0.0f64;
    let mut min_abs = f64::INFINITY;
    let mut values: Vec<[C64; 2]> = Vec::with_capacity(grid * grid * grid);
    for_grid(&field.lat, grid, |x, _| {
        let v = field.eval(x);
        let a = vec_norm(&v);
        max_abs = max_abs.max(a);
        min_abs = min_abs.min(a);
        values.push([v[0], v[1]]);
    });
    if min_abs <= 10.0 * 1e-9 * max_abs {
        return Err(TorusError::NearZeroField(min_abs));
    }
    let frames: Vec<[[f64; 3]; 3]> = values
        .iter()
        .map(|v| clifford::frame_from_spinor(v).expect("nonzero by precondition"))
        .collect();
    let at = |i: usize, j: usize, k: usize| -> usize { i + grid * (j + grid * k) };

    let mut max_seam = 0.0f64;
    for axis in 0..3 {
        for a in 0..grid {
            for b in 0..grid {
                let (i, j, k) = match axis {
                    0 => (0, a, b),
                    1 => (a, 0, b),
                    _ => (a, b, 0),
                };
                // ambient point with lattice coordinate 1.0 on `axis`
                let mut x = vec![0.0; 3];
                let t = [
                    if axis == 0 { 1.0 } else { i as f64 / grid as f64 },
                    if axis == 1 { 1.0 } else { j as f64 / grid as f64 },
                    if axis == 2 { 1.0 } else { k as f64 / grid as f64 },
                ];
                for (col, tc) in t.iter().enumerate() {
                    for r in 0..3 {
                        x[r] += tc * field.lat.basis[r][col];
                    }
                }
                let v = field.eval(&x);
                let far = clifford::frame_from_spinor(&[v[0], v[1]])
                    .map_err(|_| TorusError::NearZeroField(0.0))?;
                let near = &frames[at(i, j, k)];
                max_seam = max_seam.max(frob_diff(near, &far));
            }
        }
    }

    let mut max_angle = 0.0f64;
    for k in 0..grid {
        for j in 0..grid {
            for i in 0..grid {
                let here = &frames[at(i, j, k)];
                for (ni, nj, nk) in [
                    ((i + 1) % grid, j, k),
                    (i, (j + 1) % grid, k),
                    (i, j, (k + 1) % grid),
                ] {
                    max_angle = max_angle.max(rotation_angle(here, &frames[at(ni, nj, nk)]));
                }
            }
        }
    }
    Ok(FrameField { grid, frames, max_seam_jump: max_seam, max_adjacent_angle: max_angle })
}

fn frob_diff(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (a[i][j] - b[i][j]).powi(2);
        }
    }
    s.sqrt()
}

/// Angle of the relative rotation `a b^T`.
fn rotation_angle(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    let mut tr = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            tr += a[i][j] * b[i][j];
        }
    }
    ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}
