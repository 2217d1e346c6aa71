//! Jacobi iterations: eigenvalues of symmetric matrices and one-sided singular value decomposition.

use alloc::vec::Vec;

use nalgebra::{ComplexField, DMatrix};

/// Eigenvalues of a symmetric matrix in ascending order.
///
/// Sweeps every off-diagonal pair until the off-diagonal mass falls below
/// `1e-15` times the Frobenius norm, or 100 sweeps have run.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    let scale = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)] * a[(i, j)]).sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Eigenvalues of a Hermitian matrix in ascending order, through the real
/// embedding `[[A, -B], [B, A]]` whose spectrum repeats each eigenvalue twice.
pub fn hermitian_eigenvalues(m: &DMatrix<num_complex::Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    symmetric_eigenvalues(&real).into_iter().step_by(2).collect()
}

/// `m = u * diag(singular) * v^*` with singular values in descending order.
///
/// `u` is `rows x min(rows, cols)` with orthonormal columns and `v` is `cols x cols` unitary.
#[derive(Debug, Clone)]
pub struct Svd<T: ComplexField<RealField = f64>> {
    pub u: DMatrix<T>,
    pub singular: Vec<f64>,
    pub v: DMatrix<T>,
}

fn inner<T: ComplexField<RealField = f64>>(w: &DMatrix<T>, p: usize, q: usize) -> T {
    w.column(p).iter().zip(w.column(q).iter()).map(|(a, b)| a.clone().conjugate() * b.clone()).fold(T::zero(), |x, y| x + y)
}

fn col_norm2<T: ComplexField<RealField = f64>>(w: &DMatrix<T>, p: usize) -> f64 {
    w.column(p).iter().map(|a| a.clone().modulus_squared()).sum()
}

/// Rotates columns `p, q` of `w` by the unitary that zeroes their inner product `g`.
fn rotate<T: ComplexField<RealField = f64>>(w: &mut DMatrix<T>, p: usize, q: usize, g: &T, alpha: f64, beta: f64) {
    let abs_g = g.clone().modulus();
    let phase = g.clone().unscale(abs_g).conjugate();
    let zeta = (beta - alpha) / (2.0 * abs_g);
    let t = if zeta >= 0.0 { 1.0 } else { -1.0 } / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = c * t;
    for k in 0..w.nrows() {
        let a = w[(k, p)].clone();
        let b = w[(k, q)].clone() * phase.clone();
        w[(k, p)] = a.clone().scale(c) - b.clone().scale(s);
        w[(k, q)] = a.scale(s) + b.scale(c);
    }
}

/// One-sided Jacobi singular value decomposition.
pub fn svd<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Svd<T> {
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = DMatrix::<T>::identity(cols, cols);
    // pairs whose coupling is below rounding level of the whole matrix count as converged
    let floor = 1e-30 * m.iter().map(|a| a.clone().modulus_squared()).sum::<f64>();
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta) = (col_norm2(&w, p), col_norm2(&w, q));
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let g = inner(&w, p, q);
                let abs_g = g.clone().modulus();
                if abs_g <= 1e-15 * libm::sqrt(alpha * beta) || abs_g <= floor {
                    continue;
                }
                rotated = true;
                rotate(&mut w, p, q, &g, alpha, beta);
                rotate(&mut v, p, q, &g, alpha, beta);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|j| libm::sqrt(col_norm2(&w, j))).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let k = rows.min(cols);
    let sigma_max = order.first().map_or(0.0, |&j| norms[j]);
    let mut u = DMatrix::<T>::zeros(rows, k);
    let mut filled = 0;
    for &j in order.iter().take(k) {
        if norms[j] > 1e-300 && norms[j] > 1e-15 * sigma_max {
            u.set_column(filled, &w.column(j).unscale(norms[j]));
            filled += 1;
        }
    }
    complete_orthonormal(&mut u, filled);
    let singular = order.iter().take(k).map(|&j| norms[j]).collect();
    let v = DMatrix::from_fn(cols, cols, |r, c| v[(r, order[c])].clone());
    Svd { u, singular, v }
}

/// Fills columns `filled..` with unit vectors orthogonal to the earlier ones.
fn complete_orthonormal<T: ComplexField<RealField = f64>>(u: &mut DMatrix<T>, mut filled: usize) {
    let rows = u.nrows();
    for e in 0..rows {
        if filled == u.ncols() {
            return;
        }
        let mut x = DMatrix::<T>::zeros(rows, 1);
        x[(e, 0)] = T::one();
        for _ in 0..2 {
            for j in 0..filled {
                let proj = u.column(j).iter().zip(x.iter()).map(|(a, b)| a.clone().conjugate() * b.clone()).fold(T::zero(), |s, y| s + y);
                for r in 0..rows {
                    let d = u[(r, j)].clone() * proj.clone();
                    x[(r, 0)] -= d;
                }
            }
        }
        let n: f64 = libm::sqrt(x.iter().map(|a| a.clone().modulus_squared()).sum::<f64>());
        if n > 1e-8 {
            u.set_column(filled, &x.column(0).unscale(n));
            filled += 1;
        }
    }
}
