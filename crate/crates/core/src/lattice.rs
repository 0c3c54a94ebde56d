//! Full-rank lattices in `R^n`, dual lattices, spin-structure offsets and
//! enumeration of dual-lattice points in balls.

use crate::util;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("basis matrix is singular (|det| = {0:.3e})")]
    SingularBasis(f64),
    #[error("basis must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("spin structure bits must match lattice dimension")]
    BitsDimension,
    #[error("spin structure bits must be 0 or 1")]
    BadBit,
}

/// A full-rank lattice `Gamma = span_Z(gamma_1..gamma_n)`.
///
/// `basis` has the generators as columns; `dual_basis` holds the dual
/// generators `gamma*_i` (columns) with `gamma*_i(gamma_j) = delta_ij`.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub n: usize,
    pub basis: Vec<Vec<f64>>,
    pub dual_basis: Vec<Vec<f64>>,
    pub covolume: f64,
}

impl Lattice {
    /// Column `j` of the basis, i.e. the generator `gamma_j`.
    pub fn generator(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.basis[i][j]).collect()
    }

    /// Maps integer coordinates plus a half-bit offset to the ambient dual
    /// vector `sum_j (alpha_j + bits_j/2) gamma*_j`.
    pub fn dual_vector(&self, alpha: &[i64], bits: &[u8]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for j in 0..self.n {
            let c = alpha[j] as f64 + bits[j] as f64 / 2.0;
            for i in 0..self.n {
                out[i] += c * self.dual_basis[i][j];
            }
        }
        out
    }

    pub fn hash(&self) -> u64 {
        util::hash_f64s(self.basis.iter().flatten().copied())
    }
}

/// Builds a lattice from a square basis matrix (generators as columns).
pub fn make_lattice(basis: &[Vec<f64>]) -> Result<Lattice, LatticeError> {
    let n = basis.len();
    for row in basis {
        if row.len() != n {
            return Err(LatticeError::NotSquare { rows: n, cols: row.len() });
        }
    }
    let scale = basis.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let d = util::det(basis);
    if d.abs() <= 1e-12 * scale.powi(n as i32) {
        return Err(LatticeError::SingularBasis(d.abs()));
    }
    // dual basis = transpose-inverse
    let inv = util::invert(basis).ok_or(LatticeError::SingularBasis(0.0))?;
    let dual_basis = util::transpose(&inv);
    Ok(Lattice { n, basis: basis.to_vec(), dual_basis, covolume: d.abs() })
}

/// Standard cubic lattice `Z^n`.
pub fn standard_lattice(n: usize) -> Lattice {
    let basis: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    make_lattice(&basis).expect("identity basis is invertible")
}

/// Spin structure on `R^n/Gamma` encoded by the bit vector `delta`, together
/// with the induced one-form offset `(1/2) sum_j delta_j gamma*_j`.
#[derive(Debug, Clone)]
pub struct SpinStructureDelta {
    pub bits: Vec<u8>,
    pub offset_form: Vec<f64>,
}

impl SpinStructureDelta {
    pub fn new(lat: &Lattice, bits: &[u8]) -> Result<Self, LatticeError> {
        if bits.len() != lat.n {
            return Err(LatticeError::BitsDimension);
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(LatticeError::BadBit);
        }
        let offset_form = lat.dual_vector(&vec![0; lat.n], bits);
        Ok(SpinStructureDelta { bits: bits.to_vec(), offset_form })
    }

    pub fn trivial(lat: &Lattice) -> Self {
        SpinStructureDelta::new(lat, &vec![0; lat.n]).expect("zero bits are valid")
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn bits_string(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

/// A dual-lattice point `alpha` (integer coordinates in the `gamma*` basis)
/// together with the shifted ambient vector `alpha + delta` and its norm.
#[derive(Debug, Clone)]
pub struct DualPoint {
    pub alpha: Vec<i64>,
    pub shifted: Vec<f64>,
    pub norm: f64,
}

/// All dual-lattice points with `|alpha + delta| <= R` in the Euclidean norm,
/// sorted by norm with lexicographic tie-breaking on the integer coordinates.
pub fn enumerate_dual(lat: &Lattice, delta: &SpinStructureDelta, radius: f64) -> Vec<DualPoint> {
    enumerate_dual_quadratic(lat, delta, radius, None)
}

/// Same enumeration but with the norm taken in the inner product `G^{-1}`
/// (`gram_inv` = `G^{-1}` as a dense matrix); used for constant metrics `G`.
pub fn enumerate_dual_quadratic(
    lat: &Lattice,
    delta: &SpinStructureDelta,
    radius: f64,
    gram_inv: Option<&[Vec<f64>]>,
) -> Vec<DualPoint> {
    assert!(radius >= 0.0, "radius must be nonnegative");
    let n = lat.n;
    // |alpha_j + bits_j/2| <= R * |gamma_j|_G: box bound from Cauchy-Schwarz
    // after expanding alpha + delta in the dual basis.
    let mut bounds = Vec::with_capacity(n);
    for j in 0..n {
        let gj = lat.generator(j);
        let gj_norm = match gram_inv {
            None => util::norm(&gj),
            Some(ginv) => {
                // |gamma_j|_G with G = (G^{-1})^{-1}
                let g = util::invert(ginv).expect("gram matrix invertible");
                util::quad_form(&g, &gj, &gj).sqrt()
            }
        };
        bounds.push((radius * gj_norm + 0.5).ceil() as i64 + 1);
    }
    let mut out = Vec::new();
    let mut alpha = vec![0i64; n];
    scan(lat, delta, radius, gram_inv, &bounds, 0, &mut alpha, &mut out);
    out.sort_by(|a, b| a.norm.total_cmp(&b.norm).then_with(|| a.alpha.cmp(&b.alpha)));
    out
}

fn scan(
    lat: &Lattice,
    delta: &SpinStructureDelta,
    radius: f64,
    gram_inv: Option<&[Vec<f64>]>,
    bounds: &[i64],
    j: usize,
    alpha: &mut Vec<i64>,
    out: &mut Vec<DualPoint>,
) {
    if j == lat.n {
        let shifted = lat.dual_vector(alpha, &delta.bits);
        let norm2 = match gram_inv {
            None => util::dot(&shifted, &shifted),
            Some(ginv) => util::quad_form(ginv, &shifted, &shifted),
        };
        let norm = norm2.sqrt();
        if norm <= radius + 1e-12 * (1.0 + radius) {
            out.push(DualPoint { alpha: alpha.clone(), shifted, norm });
        }
        return;
    }
    for a in -bounds[j]..=bounds[j] {
        alpha[j] = a;
        scan(lat, delta, radius, gram_inv, bounds, j + 1, alpha, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_lattice_self_dual() {
        let lat = standard_lattice(3);
        assert_eq!(lat.covolume, 1.0);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(lat.dual_basis[i][j], expect);
            }
        }
    }

    #[test]
    fn diagonal_lattice() {
        let lat = make_lattice(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((lat.covolume - 2.0).abs() < 1e-14);
        assert!((lat.dual_basis[0][0] - 0.5).abs() < 1e-14);
        assert!((lat.dual_basis[1][1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hexagonal_covolume() {
        let s3 = 3.0f64.sqrt();
        let lat = make_lattice(&[vec![1.0, 0.5], vec![0.0, s3 / 2.0]]).unwrap();
        assert!((lat.covolume - s3 / 2.0).abs() < 1e-14);
        // round trip basis * dual^T = Id
        for i in 0..2 {
            for j in 0..2 {
                let dot: f64 = (0..2).map(|k| lat.basis[k][i] * lat.dual_basis[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_singular() {
        let err = make_lattice(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap_err();
        assert!(matches!(err, LatticeError::SingularBasis(_)));
    }

    #[test]
    fn enumerate_z3_trivial_radius_one() {
        let lat = standard_lattice(3);
        let delta = SpinStructureDelta::trivial(&lat);
        let pts = enumerate_dual(&lat, &delta, 1.0);
        assert_eq!(pts.len(), 7); // origin + 6 unit vectors
        assert_eq!(pts[0].alpha, vec![0, 0, 0]);
        assert_eq!(pts[0].norm, 0.0);
    }

    #[test]
    fn enumerate_z3_nontrivial_half_radius() {
        let lat = standard_lattice(3);
        let delta = SpinStructureDelta::new(&lat, &[1, 0, 0]).unwrap();
        let pts = enumerate_dual(&lat, &delta, 0.5);
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].alpha, vec![-1, 0, 0]);
        assert_eq!(pts[1].alpha, vec![0, 0, 0]);
        for p in &pts {
            assert!((p.norm - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn enumerate_radius_zero_nontrivial_is_empty() {
        let lat = standard_lattice(2);
        let delta = SpinStructureDelta::new(&lat, &[0, 1]).unwrap();
        assert!(enumerate_dual(&lat, &delta, 0.0).is_empty());
    }

    /// Brute-force box-scan oracle, independent of the production bound
    /// computation.
    fn brute_force_count(lat: &Lattice, delta: &SpinStructureDelta, r: f64) -> usize {
        let m = 2 * (r.ceil() as i64)
            * (lat.basis.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())).ceil() as i64 + 1)
            + 4;
        let n = lat.n;
        let mut count = 0usize;
        let mut alpha = vec![0i64; n];
        fn rec(
            lat: &Lattice,
            delta: &SpinStructureDelta,
            r: f64,
            m: i64,
            j: usize,
            alpha: &mut Vec<i64>,
            count: &mut usize,
        ) {
            if j == lat.n {
                let v = lat.dual_vector(alpha, &delta.bits);
                if util::norm(&v) <= r + 1e-12 {
                    *count += 1;
                }
                return;
            }
            for a in -m..=m {
                alpha[j] = a;
                rec(lat, delta, r, m, j + 1, alpha, count);
            }
        }
        rec(lat, delta, r, m, 0, &mut alpha, &mut count);
        count
    }

    #[test]
    fn counting_matches_brute_force() {
        let skew = make_lattice(&[vec![1.0, 0.4], vec![0.0, 1.3]]).unwrap();
        let z2 = standard_lattice(2);
        for lat in [&z2, &skew] {
            for bits in [[0u8, 0], [1, 0], [0, 1], [1, 1]] {
                let delta = SpinStructureDelta::new(lat, &bits).unwrap();
                for r in [0.0, 0.5, 1.0, 2.3, 4.0] {
                    assert_eq!(
                        enumerate_dual(lat, &delta, r).len(),
                        brute_force_count(lat, &delta, r),
                        "lat={:?} bits={bits:?} r={r}",
                        lat.basis
                    );
                }
            }
        }
    }

    #[test]
    fn involution_symmetry() {
        // alpha -> -alpha - bits fixes the shifted norm
        let lat = make_lattice(&[vec![1.0, 0.2, 0.0], vec![0.0, 1.1, 0.3], vec![0.0, 0.0, 0.9]])
            .unwrap();
        let delta = SpinStructureDelta::new(&lat, &[1, 1, 0]).unwrap();
        let pts = enumerate_dual(&lat, &delta, 2.5);
        assert!(!pts.is_empty());
        for p in &pts {
            let mirrored: Vec<i64> =
                p.alpha.iter().zip(&delta.bits).map(|(a, &b)| -a - b as i64).collect();
            let q = pts.iter().find(|q| q.alpha == mirrored).expect("mirror point present");
            assert!((p.norm - q.norm).abs() < 1e-12);
        }
    }

    #[test]
    fn ordering_is_deterministic() {
        let lat = standard_lattice(2);
        let delta = SpinStructureDelta::trivial(&lat);
        let pts = enumerate_dual(&lat, &delta, 1.0);
        let alphas: Vec<Vec<i64>> = pts.iter().map(|p| p.alpha.clone()).collect();
        assert_eq!(
            alphas,
            vec![vec![0, 0], vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]
        );
    }
}
