//! One-sided Jacobi (Hestenes) singular value decomposition.

use crate::algebra::{Matrix, C64};

pub struct Svd {
    /// Descending singular values, `min(rows, cols)` of them plus zeros up to `cols`.
    pub values: Vec<f64>,
    /// Left singular vectors as columns; zero columns where σ = 0.
    pub u: Vec<Vec<C64>>,
    /// Right singular vectors as columns (a unitary `cols × cols` matrix).
    pub v: Vec<Vec<C64>>,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Orthogonalizes the columns of `m`; `m·V = U·Σ`.
pub fn jacobi_svd(m: &Matrix<C64>) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<C64>> = (0..cols).map(|c| m.column(c)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|c| {
            let mut e = vec![C64::new(0.0, 0.0); cols];
            e[c] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let eps = f64::EPSILON;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = norm2(&a[p]);
                let beta = norm2(&a[q]);
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let ap = a[p][k];
                    let aq = a[q][k] * phase.conj();
                    a[p][k] = ap * c - aq * s;
                    a[q][k] = ap * s + aq * c;
                }
                for k in 0..cols {
                    let vp = v[p][k];
                    let vq = v[q][k] * phase.conj();
                    v[p][k] = vp * c - vq * s;
                    v[q][k] = vp * s + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = a.iter().map(|col| norm2(col).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| norms[i]).collect();
    let u = order
        .iter()
        .map(|&i| {
            if norms[i] > 0.0 {
                a[i].iter().map(|x| x / norms[i]).collect()
            } else {
                vec![C64::new(0.0, 0.0); rows]
            }
        })
        .collect();
    let v = order.iter().map(|&i| v[i].clone()).collect();
    Svd { values, u, v }
}

/// Spectral norm ‖M‖₂.
pub fn op_norm(m: &Matrix<C64>) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    // fewer columns is cheaper
    let mm = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    jacobi_svd(&mm).values.first().copied().unwrap_or(0.0)
}
