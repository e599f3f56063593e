//! Dense complex linear algebra shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Absolute tolerance for Hermiticity and positivity checks.
pub const HERM_TOL: f64 = 1e-10;

const DEFAULT_MAX_DIM: usize = 4096;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest Hilbert-space dimension any dense construction may allocate.
///
/// Defaults to 4096 and can be raised or lowered with `CLONEKIT_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("CLONEKIT_MAX_DIM")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        Err(Error::SizeCap { dim, cap })
    } else {
        Ok(())
    }
}

/// Product of subsystem dimensions, guarded against overflow and the size cap.
pub fn total_dim(dims: &[usize]) -> Result<usize> {
    let mut n: usize = 1;
    for &d in dims {
        if d == 0 {
            return Err(Error::Dimension("zero subsystem dimension".into()));
        }
        n = n.checked_mul(d).ok_or(Error::SizeCap { dim: usize::MAX, cap: max_dim() })?;
    }
    check_dim(n)?;
    Ok(n)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[CMat]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for m in ms {
        out = out.kronecker(m);
    }
    out
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    a.kronecker(b)
}

pub fn outer(u: &CVec, v: &CVec) -> CMat {
    u * v.adjoint()
}

pub fn projector(v: &CVec) -> CMat {
    outer(v, v)
}

pub fn trace(m: &CMat) -> C64 {
    m.trace()
}

/// Frobenius inner product `Tr[A† B]`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    let n = a.nrows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * cr(0.5)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && hermiticity_error(m) <= tol
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn herm_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn eigvals_h(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eig(m: &CMat) -> f64 {
    eigvals_h(m).first().copied().unwrap_or(0.0)
}

pub fn max_eig(m: &CMat) -> f64 {
    eigvals_h(m).last().copied().unwrap_or(0.0)
}

/// Rebuild `V diag(f(λ)) V†` from a Hermitian eigendecomposition.
pub fn herm_apply(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = herm_eig(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for (k, &l) in vals.iter().enumerate() {
        let s = f(l);
        for i in 0..n {
            scaled[(i, k)] *= s;
        }
    }
    scaled * vecs.adjoint()
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn project_psd(m: &CMat) -> CMat {
    herm_apply(m, |l| l.max(0.0))
}

pub fn psd_sqrt(m: &CMat) -> CMat {
    herm_apply(m, |l| l.max(0.0).sqrt())
}

/// Mixed-radix digits of `index`, leftmost subsystem most significant.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

pub fn index_of(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn check_subsystems(dims: &[usize], sys: &[usize]) -> Result<()> {
    for (k, &s) in sys.iter().enumerate() {
        if s >= dims.len() {
            return Err(Error::Dimension(format!("subsystem {s} out of range for {} subsystems", dims.len())));
        }
        if sys[..k].contains(&s) {
            return Err(Error::Dimension(format!("subsystem {s} listed twice")));
        }
    }
    Ok(())
}

/// Partial trace keeping the subsystems in `keep` (returned in ascending order).
pub fn partial_trace(rho: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    if keep.is_empty() {
        return Err(Error::Dimension("partial trace needs at least one kept subsystem".into()));
    }
    check_subsystems(dims, keep)?;
    let n: usize = dims.iter().product();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::Dimension(format!("operator is {}x{}, dims give {n}", rho.nrows(), rho.ncols())));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let kdims: Vec<usize> = kept.iter().map(|&s| dims[s]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();
    let tdims: Vec<usize> = traced.iter().map(|&s| dims[s]).collect();
    let nk: usize = kdims.iter().product();
    let nt: usize = tdims.iter().product();

    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(nk); nt];
    for full in 0..n {
        let dg = digits(full, dims);
        let kd: Vec<usize> = kept.iter().map(|&s| dg[s]).collect();
        let td: Vec<usize> = traced.iter().map(|&s| dg[s]).collect();
        groups[index_of(&td, &tdims)].push((full, index_of(&kd, &kdims)));
    }
    let mut out = CMat::zeros(nk, nk);
    for g in &groups {
        for &(i, ki) in g {
            for &(j, kj) in g {
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Partial transpose on the listed subsystems.
pub fn partial_transpose(m: &CMat, dims: &[usize], sys: &[usize]) -> Result<CMat> {
    check_subsystems(dims, sys)?;
    let n: usize = dims.iter().product();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Dimension(format!("operator is {}x{}, dims give {n}", m.nrows(), m.ncols())));
    }
    let digs: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut a = digs[i].clone();
            let mut b = digs[j].clone();
            for &s in sys {
                std::mem::swap(&mut a[s], &mut b[s]);
            }
            out[(index_of(&a, dims), index_of(&b, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorder tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_subsystems(m: &CMat, dims: &[usize], perm: &[usize]) -> Result<CMat> {
    let p = permutation_matrix(dims, perm)?;
    Ok(&p * m * p.adjoint())
}

/// Unitary that maps `|x_0 … x_{n-1}⟩` to `|x_{perm[0]} … x_{perm[n-1]}⟩`.
pub fn permutation_matrix(dims: &[usize], perm: &[usize]) -> Result<CMat> {
    if perm.len() != dims.len() {
        return Err(Error::Dimension("permutation length differs from subsystem count".into()));
    }
    check_subsystems(dims, perm)?;
    let n: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut p = CMat::zeros(n, n);
    for i in 0..n {
        let dg = digits(i, dims);
        let nd: Vec<usize> = perm.iter().map(|&k| dg[k]).collect();
        p[(index_of(&nd, &new_dims), i)] = cr(1.0);
    }
    Ok(p)
}

/// Operator `op` acting on subsystem `sys`, identity elsewhere.
pub fn embed(op: &CMat, dims: &[usize], sys: usize) -> CMat {
    let mut factors = Vec::with_capacity(dims.len());
    for (k, &d) in dims.iter().enumerate() {
        if k == sys {
            factors.push(op.clone());
        } else {
            factors.push(identity(d));
        }
    }
    kron_all(&factors)
}

/// Haar-random unitary via QR of a complex Ginibre matrix with phase fix.
pub fn random_unitary<R: rand::Rng>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| c(gauss(rng), gauss(rng)));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let z = r[(k, k)];
        let ph = if z.norm() > 0.0 { z / z.norm() } else { cr(1.0) };
        for i in 0..d {
            q[(i, k)] *= ph;
        }
    }
    q
}

/// Haar-random unit vector.
pub fn random_ket<R: rand::Rng>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| c(gauss(rng), gauss(rng)));
    let n = v.norm();
    v / cr(n)
}

pub fn gauss<R: rand::Rng>(rng: &mut R) -> f64 {
    // Box-Muller; avoids pulling in a distributions crate for one sampler.
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
