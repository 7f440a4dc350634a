//! Thin dense linear-algebra layer over `faer`.
//!
//! Everything above this module talks in terms of [`CMat`] and [`C64`]; the
//! eigensolver backend stays swappable behind [`eigen`] and [`eigenvalues`].

use faer::linalg::solvers::DenseSolveCore;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = faer::Mat<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Residual level above which an eigenpair is reported as ill-conditioned.
pub const RESIDUAL_WARN: f64 = 1e-8;

/// The 2x2 Pauli matrix `sigma^index`, with `sigma^0` the identity.
pub fn pauli(index: u8) -> [[C64; 2]; 2] {
    let (o, z) = (ONE, ZERO);
    match index {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -I], [I, z]],
        3 => [[o, z], [z, -o]],
        _ => panic!("Pauli index {index} out of range"),
    }
}

/// Kronecker product `sigma^mu (x) sigma^nu` as a 4x4 matrix. The first
/// factor selects the 2x2 block, the second the entry inside the block.
pub fn pauli_kron(mu: u8, nu: u8) -> CMat {
    let a = pauli(mu);
    let b = pauli(nu);
    CMat::from_fn(4, 4, |i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn identity(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn transpose(a: &CMat) -> CMat {
    a.transpose().to_owned()
}

pub fn conj(a: &CMat) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

pub fn scale(a: &CMat, s: C64) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn trace(a: &CMat) -> C64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

pub fn frobenius(a: &CMat) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Determinant by LU with partial pivoting. Meant for the small matrices of
/// the Bloch problem.
pub fn det(a: &CMat) -> C64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut m: Vec<C64> = (0..n * n).map(|k| a[(k / n, k % n)]).collect();
    let mut d = ONE;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| m[x * n + c].norm().total_cmp(&m[y * n + c].norm()))
            .unwrap();
        if m[p * n + c] == ZERO {
            return ZERO;
        }
        if p != c {
            for j in 0..n {
                m.swap(p * n + j, c * n + j);
            }
            d = -d;
        }
        let piv = m[c * n + c];
        d *= piv;
        for r in c + 1..n {
            let f = m[r * n + c] / piv;
            if f != ZERO {
                for j in c..n {
                    let v = m[c * n + j];
                    m[r * n + j] -= f * v;
                }
            }
        }
    }
    d
}

/// Eigenvalues plus unit-normalized right eigenvectors (as columns).
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    pub values: Vec<C64>,
    pub vectors: CMat,
}

pub fn eigenvalues(h: &CMat) -> Result<Vec<C64>> {
    h.eigenvalues()
        .map_err(|e| Error::numerical("eigenvalues", format!("{e:?}")))
}

/// Full eigendecomposition. Columns of `vectors` have unit 2-norm.
pub fn eigen(h: &CMat) -> Result<EigenDecomp> {
    let evd = h
        .eigen()
        .map_err(|e| Error::numerical("eigendecomposition", format!("{e:?}")))?;
    let n = h.nrows();
    let s = evd.S();
    let values: Vec<C64> = (0..n).map(|i| s.column_vector()[i]).collect();
    let mut vectors = evd.U().to_owned();
    for j in 0..n {
        let norm = vectors.col(j).norm_l2();
        if norm > 0.0 {
            for i in 0..n {
                vectors[(i, j)] /= norm;
            }
        }
    }
    Ok(EigenDecomp { values, vectors })
}

/// Nonzero entries of a dense matrix, used for cheap products with the
/// (very sparse) tight-binding matrices.
pub fn nonzeros(h: &CMat) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..h.ncols() {
        for i in 0..h.nrows() {
            let v = h[(i, j)];
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// `||H v - E v|| / ||v||` for every eigenpair of `decomp`.
pub fn eigen_residuals(h: &CMat, decomp: &EigenDecomp) -> Vec<f64> {
    let nz = nonzeros(h);
    let n = h.nrows();
    let mut hv = vec![ZERO; n];
    (0..decomp.values.len())
        .map(|k| {
            hv.iter_mut().for_each(|x| *x = ZERO);
            for &(i, j, v) in &nz {
                hv[i] += v * decomp.vectors[(j, k)];
            }
            let e = decomp.values[k];
            let mut r = 0.0;
            let mut vn = 0.0;
            for (i, hvi) in hv.iter().enumerate() {
                let x = decomp.vectors[(i, k)];
                r += (hvi - e * x).norm_sqr();
                vn += x.norm_sqr();
            }
            (r / vn).sqrt()
        })
        .collect()
}

/// `|tr H - sum E| / max(1, sum |E|)`.
pub fn trace_defect(h: &CMat, values: &[C64]) -> f64 {
    let sum: C64 = values.iter().sum();
    let scale = values.iter().map(|v| v.norm()).sum::<f64>().max(1.0);
    (trace(h) - sum).norm() / scale
}

/// Eigendecomposition with a residual and trace audit; pairs whose residual
/// exceeds [`RESIDUAL_WARN`] are logged.
pub fn eigen_checked(h: &CMat, context: &str) -> Result<EigenDecomp> {
    let d = eigen(h)?;
    let res = eigen_residuals(h, &d);
    let worst = res.iter().cloned().fold(0.0, f64::max);
    if worst > RESIDUAL_WARN {
        log::warn!("{context}: eigenvector residual {worst:.3e} exceeds {RESIDUAL_WARN:e}");
    }
    audit_trace(h, &d.values, context);
    Ok(d)
}

/// Eigenvalues with the trace audit.
pub fn eigenvalues_checked(h: &CMat, context: &str) -> Result<Vec<C64>> {
    let v = eigenvalues(h)?;
    audit_trace(h, &v, context);
    Ok(v)
}

fn audit_trace(h: &CMat, values: &[C64], context: &str) {
    let t = trace_defect(h, values);
    if t > RESIDUAL_WARN {
        log::warn!("{context}: trace defect {t:.3e} exceeds {RESIDUAL_WARN:e}");
    }
}

/// Eigenvalue condition numbers `kappa_i = ||x_i|| ||y_i|| / |y_i^* x_i|`,
/// with left eigenvectors read off the rows of the inverse eigenvector matrix.
pub fn condition_numbers(decomp: &EigenDecomp) -> Vec<f64> {
    let inv = decomp.vectors.partial_piv_lu().inverse();
    (0..decomp.values.len())
        .map(|i| {
            let k = decomp.vectors.col(i).norm_l2() * inv.row(i).norm_l2();
            if k.is_finite() {
                k
            } else {
                f64::INFINITY
            }
        })
        .collect()
}

/// Lexicographic (Re, Im) order.
pub fn lex_cmp(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn sort_lex(v: &mut [C64]) {
    v.sort_by(lex_cmp);
}

/// One-to-one matching between two eigenvalue multisets.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub max_distance: f64,
}

/// Greedy nearest-neighbor pairing: candidate pairs are taken in order of
/// increasing distance whenever both ends are still free. Returns `None` when
/// the multisets differ in size.
pub fn pair_multisets(a: &[C64], b: &[C64]) -> Option<Pairing> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let mut cand: Vec<(f64, u32, u32)> = Vec::with_capacity(n * n);
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            cand.push(((x - y).norm(), i as u32, j as u32));
        }
    }
    cand.sort_unstable_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; n];
    let mut used_b = vec![false; n];
    let mut pairs = Vec::with_capacity(n);
    let mut max_distance = 0.0_f64;
    for (d, i, j) in cand {
        let (i, j) = (i as usize, j as usize);
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j));
            max_distance = max_distance.max(d);
            if pairs.len() == n {
                break;
            }
        }
    }
    Some(Pairing {
        pairs,
        max_distance,
    })
}

/// Roots of `c[0] z^d + c[1] z^(d-1) + ... + c[d]` from the eigenvalues of
/// the companion matrix, each polished by a few Newton steps.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    if lead.norm() == 0.0 {
        return Err(Error::DegeneratePolynomial("zero leading coefficient".into()));
    }
    let mut comp = CMat::zeros(d, d);
    for j in 0..d {
        comp[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    let mut roots = eigenvalues(&comp)?;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let next = *r - step;
            if horner(coeffs, next).0.norm() < p.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

/// Polynomial value and derivative at `z`.
fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &a in c {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}
