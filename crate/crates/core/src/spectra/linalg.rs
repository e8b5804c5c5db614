//! Dense and tridiagonal symmetric eigenvalue kernels.

/// Dense symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    #[inline]
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v;
        }
    }

    /// Leading `m × m` principal submatrix.
    pub fn leading(&self, m: usize) -> Self {
        let m = m.min(self.n);
        let mut out = Self::zeros(m);
        for i in 0..m {
            out.data[i * m..(i + 1) * m].copy_from_slice(&self.data[i * self.n..i * self.n + m]);
        }
        out
    }
}

/// All eigenvalues by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &SymMatrix, max_sweeps: usize) -> Vec<f64> {
    let n = a.n;
    let mut m = a.data.clone();
    let scale: f64 = m.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i * n + j].powi(2);
            }
        }
        if off.sqrt() <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Householder reduction to symmetric tridiagonal form `(diag, off_diag)`.
pub fn householder_tridiagonal(a: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut m = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let mut alpha2 = 0.0;
        for i in (k + 1)..n {
            alpha2 += m[i * n + k] * m[i * n + k];
        }
        let x0 = m[(k + 1) * n + k];
        let norm = alpha2.sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if x0 > 0.0 { -norm } else { norm };
        // v = x − αe₁, H = I − 2vvᵀ/(vᵀv)
        for i in (k + 1)..n {
            v[i] = m[i * n + k];
        }
        v[k + 1] -= alpha;
        let vtv: f64 = ((k + 1)..n).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            e[k] = x0;
            continue;
        }
        let beta = 2.0 / vtv;
        // w = β A v restricted to the trailing block
        for i in (k + 1)..n {
            let row = &m[i * n..(i + 1) * n];
            let mut s = 0.0;
            for j in (k + 1)..n {
                s += row[j] * v[j];
            }
            w[i] = beta * s;
        }
        let vtw: f64 = ((k + 1)..n).map(|i| v[i] * w[i]).sum();
        let gamma = 0.5 * beta * vtw;
        for i in (k + 1)..n {
            w[i] -= gamma * v[i];
        }
        // A ← A − v wᵀ − w vᵀ
        for i in (k + 1)..n {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut m[i * n..(i + 1) * n];
            for j in (k + 1)..n {
                row[j] -= vi * w[j] + wi * v[j];
            }
        }
        e[k] = alpha;
        for i in (k + 1)..n {
            m[i * n + k] = 0.0;
            m[k * n + i] = 0.0;
        }
    }
    for i in 0..n {
        d[i] = m[i * n + i];
    }
    if n >= 2 {
        e[n - 2] = m[(n - 1) * n + (n - 2)];
    }
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
pub fn sturm_count(diag: &[f64], off_sq: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off_sq[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// Lowest `k` eigenvalues of a symmetric tridiagonal matrix by Sturm
/// bisection, ascending.
pub fn tridiagonal_lowest(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    let k = k.min(n);
    let off_sq: Vec<f64> = off.iter().map(|e| e * e).collect();
    let (lo, hi) = gershgorin(diag, off);
    let span = (hi - lo).abs().max(hi.abs()).max(lo.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(off_sq.iter().cloned().fold(1.0, f64::max) * f64::MIN_POSITIVE);
    let lo = lo - 2.0 * f64::EPSILON * span - pivmin;
    let hi = hi + 2.0 * f64::EPSILON * span + pivmin;

    (0..k)
        .map(|idx| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..256 {
                let mid = 0.5 * (a + b);
                if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) + pivmin || mid == a || mid == b {
                    break;
                }
                if sturm_count(diag, &off_sq, mid, pivmin) <= idx {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Eigenvector for an (approximate) eigenvalue by inverse iteration,
/// normalised to unit Euclidean length.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let norm_scale = diag.iter().map(|d| d.abs()).fold(0.0, f64::max).max(1.0);
    let shift = lambda + 8.0 * f64::EPSILON * norm_scale;
    let mut x = vec![1.0; n];
    for (i, v) in x.iter_mut().enumerate() {
        // deterministic, non-degenerate start
        *v = 1.0 + 0.1 * ((i * 7919) % 13) as f64;
    }
    for _ in 0..3 {
        x = solve_shifted(diag, off, shift, &x);
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nrm == 0.0 || !nrm.is_finite() {
            break;
        }
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    x
}

/// Solve `(T − σ I) y = b` with partial pivoting (LAPACK `dgtsv` style).
fn solve_shifted(diag: &[f64], off: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        let d = diag[0] - sigma;
        return vec![b[0] / if d == 0.0 { f64::EPSILON } else { d }];
    }
    let mut dl: Vec<f64> = off.to_vec();
    let mut d: Vec<f64> = diag.iter().map(|v| v - sigma).collect();
    let mut du: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0; n];
    let mut x = b.to_vec();
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = f64::EPSILON;
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            x[i + 1] -= f * x[i];
            dl[i] = 0.0;
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            x.swap(i, i + 1);
            x[i + 1] -= f * x[i];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = f64::EPSILON;
    }
    x[n - 1] /= d[n - 1];
    x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> (Vec<f64>, Vec<f64>) {
        (vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn bisection_matches_closed_form() {
        let n = 60;
        let (d, e) = chain(n);
        let ev = tridiagonal_lowest(&d, &e, 5);
        for (j, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-14, "{v} vs {exact}");
        }
    }

    #[test]
    fn sturm_count_2x2() {
        let d = [1.0, 3.0];
        let e2 = [1.0];
        assert_eq!(sturm_count(&d, &e2, 0.0, 1e-300), 0);
        assert_eq!(sturm_count(&d, &e2, 1.0, 1e-300), 1);
        assert_eq!(sturm_count(&d, &e2, 4.0, 1e-300), 2);
    }

    fn test_matrix(n: usize) -> SymMatrix {
        let mut a = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = ((i * 31 + j * 17) % 23) as f64 / 7.0 - 1.3 + if i == j { i as f64 } else { 0.0 };
                a.set(i, j, v);
            }
        }
        a
    }

    #[test]
    fn householder_and_jacobi_agree() {
        let a = test_matrix(40);
        let jac = jacobi_eigenvalues(&a, 50);
        let (d, e) = householder_tridiagonal(&a);
        let hh = tridiagonal_lowest(&d, &e, 40);
        for (x, y) in jac.iter().zip(&hh) {
            assert!((x - y).abs() < 1e-11 * (1.0 + x.abs()), "{x} vs {y}");
        }
        let trace: f64 = (0..40).map(|i| a.get(i, i)).sum();
        assert!((jac.iter().sum::<f64>() - trace).abs() < 1e-10);
    }

    #[test]
    fn inverse_iteration_recovers_eigenvector() {
        let n = 50;
        let (d, e) = chain(n);
        let lam = tridiagonal_lowest(&d, &e, 1)[0];
        let v = tridiagonal_eigenvector(&d, &e, lam);
        for (i, vi) in v.iter().enumerate() {
            let mut tv = d[i] * vi;
            if i > 0 {
                tv += e[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                tv += e[i] * v[i + 1];
            }
            assert!((tv - lam * vi).abs() < 1e-10);
        }
    }

    #[test]
    fn leading_submatrix() {
        let a = test_matrix(6);
        let b = a.leading(3);
        assert_eq!(b.dim(), 3);
        assert_eq!(b.get(2, 1), a.get(2, 1));
    }
}
