//! Small real-matrix helpers (n <= 8) and misc numeric utilities.

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut d = 1.0;
    for k in 0..n {
        let (piv, _) = m
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, row)| (i, row[k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            d = -d;
        }
        d *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    d
}

/// Matrix inverse; returns None if singular to working precision.
pub fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for k in 0..n {
        let (piv, mag) = m
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, row)| (i, row[k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag == 0.0 {
            return None;
        }
        m.swap(piv, k);
        let p = m[k][k];
        for j in 0..2 * n {
            m[k][j] /= p;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k];
            if f != 0.0 {
                for j in 0..2 * n {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum()).collect()
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Evaluates `x^T A y` for a square matrix.
pub fn quad_form(a: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    dot(x, &matvec(a, y))
}

/// Gershgorin upper bound on the largest eigenvalue magnitude of a square
/// matrix.
pub fn gershgorin_bound(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// FNV-1a hash of a slice of f64 bit patterns; used to fingerprint lattice
/// bases in reports.
pub fn hash_f64s(values: impl IntoIterator<Item = f64>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_invert() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 1.0]];
        assert!((det(&a) - 1.0).abs() < 1e-14);
        let inv = invert(&a).unwrap();
        assert!((inv[0][0] - 1.0).abs() < 1e-14);
        assert!((inv[0][1] + 1.0).abs() < 1e-14);
        assert!(invert(&vec![vec![1.0, 2.0], vec![2.0, 4.0]]).is_none());
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(hash_f64s([1.0, 2.0]), hash_f64s([1.0, 2.0]));
        assert_ne!(hash_f64s([1.0, 2.0]), hash_f64s([2.0, 1.0]));
    }
}
