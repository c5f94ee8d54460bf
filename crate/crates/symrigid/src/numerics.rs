//! Tolerance-governed dense linear algebra.
//!
//! Rank decisions are the failure mode that matters in this crate: a
//! framework is rigid or flexible depending on whether a singular value is
//! genuinely zero. All cutoffs are therefore relative to the largest
//! singular value, and an exact rational elimination path is available to
//! pin down borderline fixtures.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

/// Rational scalar used by the exact rank path.
pub type Rational = Ratio<BigInt>;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// How rank decisions are made.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Singular values below `relative_tol * sigma_max` count as zero.
    pub relative_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy { relative_tol: 1e-9 }
    }
}

impl TolerancePolicy {
    pub fn new(relative_tol: f64) -> Self {
        assert!(relative_tol > 0.0, "relative tolerance must be positive");
        TolerancePolicy { relative_tol }
    }
}

fn check_finite(m: &DMatrix<f64>) -> Result<(), NumericsError> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(NumericsError::NonFinite)
    }
}

/// One-sided Jacobi orthogonalization: rotates column pairs of a working
/// copy `w` of `a` (accumulating the rotations in `v`) until the columns
/// are mutually orthogonal. Then `a * v = w`, `v` is exactly orthogonal,
/// and the column norms of `w` are the singular values.
///
/// Chosen over a bidiagonalization SVD for its high relative accuracy on
/// the rank-deficient, clustered-spectrum matrices this crate lives on
/// (rigidity matrices and averaging projectors).
fn one_sided_jacobi(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, Vec<f64>) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    const MAX_SWEEPS: usize = 64;
    const REL_EPS: f64 = 1e-14;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).dot(&w.column(p));
                let beta = w.column(q).dot(&w.column(q));
                let gamma = w.column(p).dot(&w.column(q));
                if gamma.abs() <= REL_EPS * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..w.nrows() {
                    let wp = w[(r, p)];
                    let wq = w[(r, q)];
                    w[(r, p)] = c * wp - s * wq;
                    w[(r, q)] = s * wp + c * wq;
                }
                for r in 0..n {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = c * vp - s * vq;
                    v[(r, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n).map(|i| w.column(i).norm()).collect();
    (w, v, sigma)
}

/// Number of singular values above the relative cutoff.
pub fn rank(m: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<usize, NumericsError> {
    check_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let (_, _, sigma) = one_sided_jacobi(m);
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    if sigma_max == 0.0 {
        return Ok(0);
    }
    let cutoff = tol.relative_tol * sigma_max;
    Ok(sigma.iter().filter(|&&s| s > cutoff).count())
}

/// Orthonormal basis of the null space, as matrix columns.
///
/// Column count is `ncols - rank`; `m * basis` vanishes at the rank cutoff.
pub fn kernel_basis(m: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<DMatrix<f64>, NumericsError> {
    check_finite(m)?;
    let n = m.ncols();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if m.nrows() == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let (_, v, sigma) = one_sided_jacobi(m);
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = tol.relative_tol * sigma_max;
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&i| sigma_max == 0.0 || sigma[i] <= cutoff)
        .map(|i| v.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return Ok(DMatrix::zeros(n, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Nullity = `ncols - rank`.
pub fn nullity(m: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<usize, NumericsError> {
    Ok(m.ncols() - rank(m, tol)?)
}

/// Orthonormal basis of the column span.
pub fn column_space_basis(
    m: &DMatrix<f64>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<f64>, NumericsError> {
    check_finite(m)?;
    if m.ncols() == 0 || m.nrows() == 0 {
        return Ok(DMatrix::zeros(m.nrows(), 0));
    }
    let (w, _, sigma) = one_sided_jacobi(m);
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    if sigma_max == 0.0 {
        return Ok(DMatrix::zeros(m.nrows(), 0));
    }
    let cutoff = tol.relative_tol * sigma_max;
    let cols: Vec<DVector<f64>> = (0..m.ncols())
        .filter(|&i| sigma[i] > cutoff)
        .map(|i| w.column(i).into_owned() / sigma[i])
        .collect();
    if cols.is_empty() {
        return Ok(DMatrix::zeros(m.nrows(), 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Orthonormal basis of `span(a) ∩ span(b)`.
///
/// A vector lies in `span(a)` iff it is annihilated by the orthogonal
/// complement of `span(a)`, so the intersection is the kernel of the two
/// stacked complement systems.
pub fn intersect(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<f64>, NumericsError> {
    if a.nrows() != b.nrows() {
        return Err(NumericsError::DimensionMismatch(format!(
            "span bases live in different ambient spaces ({} vs {})",
            a.nrows(),
            b.nrows()
        )));
    }
    let n = a.nrows();
    let comp_a = kernel_basis(&a.transpose(), tol)?; // columns ⟂ span(a)
    let comp_b = kernel_basis(&b.transpose(), tol)?;
    let rows = comp_a.ncols() + comp_b.ncols();
    let mut stacked = DMatrix::zeros(rows, n);
    for (i, col) in comp_a.column_iter().enumerate() {
        stacked.set_row(i, &col.transpose());
    }
    for (i, col) in comp_b.column_iter().enumerate() {
        stacked.set_row(comp_a.ncols() + i, &col.transpose());
    }
    kernel_basis(&stacked, tol)
}

/// Group-averaging projector `P = (1/|Γ|) Σ_γ M_γ` for equivariance
/// operators `M_γ` built from a vertex permutation and one spatial block per
/// group element: `M_γ` carries block `rep[γ]` from vertex `i` to vertex
/// `action[γ][i]`. Its image is the subspace of velocity vectors with the
/// same symmetry as the framework.
pub fn symmetrize_projector(
    order: usize,
    action: &[Vec<usize>],
    rep: &[DMatrix<f64>],
) -> Result<DMatrix<f64>, NumericsError> {
    assert_eq!(order, action.len());
    assert_eq!(order, rep.len());
    let n_vertices = action[0].len();
    let d = rep[0].nrows();
    for m in rep {
        if m.nrows() != d || m.ncols() != d {
            return Err(NumericsError::DimensionMismatch(
                "representation blocks differ in size".into(),
            ));
        }
    }
    let mats: Vec<DMatrix<f64>> = (0..order)
        .map(|g| {
            let mut m = DMatrix::zeros(n_vertices * d, n_vertices * d);
            for i in 0..n_vertices {
                let gi = action[g][i];
                m.view_mut((gi * d, i * d), (d, d)).copy_from(&rep[g]);
            }
            m
        })
        .collect();
    Ok(average_projector(&mats))
}

/// Average of the given equivariance operators; the projector onto their
/// common fixed space when they form a group.
pub fn average_projector(mats: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = mats[0].nrows();
    let mut p = DMatrix::zeros(n, n);
    for m in mats {
        p += m;
    }
    p / mats.len() as f64
}

/// Exact rank of a rational matrix by fraction-free Gaussian elimination.
pub fn exact_rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut rank = 0;
    let mut col = 0;
    while rank < m.len() && col < ncols {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        match pivot {
            None => {
                col += 1;
                continue;
            }
            Some(p) => {
                m.swap(rank, p);
                let inv = m[rank][col].clone();
                for r in rank + 1..m.len() {
                    if m[r][col].is_zero() {
                        continue;
                    }
                    let factor = &m[r][col] / &inv;
                    for c in col..ncols {
                        let delta = &factor * &m[rank][c];
                        m[r][c] = &m[r][c] - delta;
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// Convenience constructor for a rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}
