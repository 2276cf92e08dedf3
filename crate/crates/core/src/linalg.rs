//! Tolerance-aware dense symmetric linear algebra.
//!
//! Every rank and semidefiniteness decision made elsewhere in the crate goes
//! through this module, so the cutoffs live in one place ([`Tolerances`]).

use std::ops::Deref;

use nalgebra::{DMatrix, SymmetricEigen, SVD};

use crate::error::{invalid, Result};

/// Absolute floor applied to PSD checks of (numerically) zero matrices.
pub const ABS_FLOOR: f64 = 1e-12;

/// Numerical cutoffs for rank and semidefiniteness decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff: `sigma <= rank_tol * sigma_max` counts as zero.
    pub rank_tol: f64,
    /// Allowed negative-eigenvalue magnitude, relative to the spectral norm.
    pub psd_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: 1e-8,
            psd_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(rank_tol: f64, psd_tol: f64) -> Result<Self> {
        if !(rank_tol >= 0.0 && rank_tol.is_finite()) || !(psd_tol >= 0.0 && psd_tol.is_finite()) {
            return invalid(format!(
                "tolerances must be finite and nonnegative (rank_tol={rank_tol}, psd_tol={psd_tol})"
            ));
        }
        Ok(Self { rank_tol, psd_tol })
    }
}

/// A real symmetric matrix. Symmetry is enforced by every constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Validates squareness and finiteness, then symmetrizes `(A + Aᵀ)/2`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return invalid(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()));
        }
        check_finite(&m)?;
        Ok(Self::symmetrized(m))
    }

    /// Like [`SymMatrix::new`] but rejects inputs whose asymmetry exceeds `tol` (relative).
    pub fn new_checked(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return invalid(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()));
        }
        check_finite(&m)?;
        let asym = asymmetry(&m);
        if asym > tol * m.norm().max(1.0) {
            return invalid(format!("matrix is not symmetric (asymmetry {asym:e})"));
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    /// Row-major constructor, mostly for tests and fixtures.
    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return invalid(format!("expected {} entries, got {}", n * n, data.len()));
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn scalar(v: f64) -> Self {
        Self(DMatrix::from_element(1, 1, v))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        Self(&self.0 - &other.0)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sym_eigen(self).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Spectral norm (largest absolute eigenvalue).
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0f64, |acc, l| acc.max(l.abs()))
    }
}

impl Deref for SymMatrix {
    type Target = DMatrix<f64>;
    fn deref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl AsRef<DMatrix<f64>> for SymMatrix {
    fn as_ref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Which diagonal block the Schur complement is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// `M/A = D − Bᵀ A† B`.
    UpperLeft,
    /// `M/D = A − B D† Bᵀ`.
    LowerRight,
}

pub(crate) fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        invalid("matrix has non-finite entries")
    }
}

pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).norm()
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn sym_eigen(a: &SymMatrix) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.dim();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(a.as_matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    SVD::new(a.clone(), false, false).singular_values.iter().copied().collect()
}

/// Moore–Penrose pseudoinverse; singular values at or below
/// `rank_tol · σ_max` are treated as zero.
///
/// The singular triplets come from the symmetric eigenproblem of
/// `[[0, A], [Aᵀ, 0]]`, whose eigenpairs are `(±σ, (u, ±v)/√2)`. nalgebra's
/// SVD loses the singular vectors of nearly singular 2×2 blocks.
pub fn pinv(a: &DMatrix<f64>, rank_tol: f64) -> Result<DMatrix<f64>> {
    check_finite(a)?;
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Ok(DMatrix::zeros(c, r));
    }
    let mut aug = DMatrix::zeros(r + c, r + c);
    aug.view_mut((0, r), (r, c)).copy_from(a);
    aug.view_mut((r, 0), (c, r)).copy_from(&a.transpose());
    let eig = SymmetricEigen::new(aug);
    let smax = eig.eigenvalues.iter().fold(0.0f64, |m, &s| m.max(s));
    let cutoff = rank_tol * smax;
    let mut out = DMatrix::zeros(c, r);
    for (k, &s) in eig.eigenvalues.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let e = eig.eigenvectors.column(k);
            let u = e.rows(0, r);
            let v = e.rows(r, c);
            out += (v * u.transpose()) * (2.0 / s);
        }
    }
    Ok(out)
}

/// Numerical rank: the number of singular values strictly above `rank_tol · σ_max`.
pub fn rank(a: &DMatrix<f64>, tol: &Tolerances) -> Result<usize> {
    check_finite(a)?;
    let sv = singular_values(a);
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol.rank_tol * smax).count())
}

/// [`rank`] with the cutoff raised to `rank_tol · max(σ_max, scale)`, for
/// matrices whose size should be judged against some outside quantity.
pub fn rank_against(a: &DMatrix<f64>, scale: f64, tol: &Tolerances) -> Result<usize> {
    check_finite(a)?;
    let sv = singular_values(a);
    let cutoff = tol.rank_tol * sv.iter().fold(scale.abs(), |m, &s| m.max(s));
    if cutoff == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > cutoff).count())
}

/// Negative-eigenvalue allowance used by [`is_psd`] for a matrix of spectral norm `norm`.
pub fn psd_threshold(norm: f64, tol: &Tolerances) -> f64 {
    (tol.psd_tol * norm).max(ABS_FLOOR)
}

/// `λ_min(A) ≥ −max(psd_tol·‖A‖₂, ABS_FLOOR)`.
pub fn is_psd(a: &SymMatrix, tol: &Tolerances) -> bool {
    is_psd_against(a, 0.0, tol)
}

/// [`is_psd`] with the slack measured against `max(‖A‖₂, scale)`. Meant for
/// derived matrices such as Schur complements, whose roundoff follows the
/// matrix they came from rather than their own norm.
pub fn is_psd_against(a: &SymMatrix, scale: f64, tol: &Tolerances) -> bool {
    let ev = a.eigenvalues();
    let Some(&lmin) = ev.first() else {
        return true;
    };
    let norm = ev.iter().fold(scale.abs(), |m, l| m.max(l.abs()));
    lmin >= -psd_threshold(norm, tol)
}

/// Generalized Schur complement of a 2×2 block symmetric matrix split after
/// `split` rows/columns.
pub fn schur_complement(m: &SymMatrix, split: usize, corner: Corner, tol: &Tolerances) -> Result<SymMatrix> {
    let n = m.dim();
    if split > n {
        return invalid(format!("block split {split} exceeds matrix dimension {n}"));
    }
    let a = m.view((0, 0), (split, split)).into_owned();
    let b = m.view((0, split), (split, n - split)).into_owned();
    let d = m.view((split, split), (n - split, n - split)).into_owned();
    let out = match corner {
        Corner::UpperLeft => d - b.transpose() * pinv(&a, tol.rank_tol)? * &b,
        Corner::LowerRight => a - &b * pinv(&d, tol.rank_tol)? * b.transpose(),
    };
    Ok(SymMatrix::symmetrized(out))
}

/// `C(B) ⊆ C(A)`, tested as `‖(I − A A†) B‖_F ≤ psd_tol · max(1, ‖B‖_F)`.
pub fn column_space_contained(b: &DMatrix<f64>, a: &DMatrix<f64>, tol: &Tolerances) -> Result<bool> {
    if b.nrows() != a.nrows() {
        return invalid(format!(
            "row counts differ: B has {}, A has {}",
            b.nrows(),
            a.nrows()
        ));
    }
    check_finite(b)?;
    let proj = a * pinv(a, tol.rank_tol)?;
    let resid = b - &proj * b;
    Ok(resid.norm() <= tol.psd_tol * b.norm().max(1.0))
}

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
pub fn psd_project(a: &SymMatrix) -> SymMatrix {
    let (values, vectors) = sym_eigen(a);
    if values.first().is_none_or(|&l| l >= 0.0) {
        return a.clone();
    }
    let clipped = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| l.max(0.0)),
    ));
    SymMatrix::symmetrized(&vectors * clipped * vectors.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    fn assert_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn pinv_examples() {
        let tol = 1e-8;
        assert_close(&pinv(&DMatrix::identity(2, 2), tol).unwrap(), &DMatrix::identity(2, 2), 1e-14);
        assert_close(
            &pinv(&m(2, 2, &[2.0, 0.0, 0.0, 0.0]), tol).unwrap(),
            &m(2, 2, &[0.5, 0.0, 0.0, 0.0]),
            1e-14,
        );
        let a = m(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let x = pinv(&a, tol).unwrap();
        assert_close(&x, &m(2, 2, &[0.25; 4]), 1e-14);
        // Penrose identities
        assert_close(&(&a * &x * &a), &a, 1e-12);
        assert_close(&(&x * &a * &x), &x, 1e-12);
        assert_close(&(&a * &x).transpose(), &(&a * &x), 1e-12);
        assert_close(&(&x * &a).transpose(), &(&x * &a), 1e-12);
    }

    #[test]
    fn pinv_rejects_nan() {
        assert!(matches!(
            pinv(&m(1, 1, &[f64::NAN]), 1e-8),
            Err(crate::Error::InvalidInput(_))
        ));
    }

    #[test]
    fn schur_examples() {
        let t = Tolerances::default();
        let s = schur_complement(&SymMatrix::identity(4), 2, Corner::UpperLeft, &t).unwrap();
        assert_close(&s, &DMatrix::identity(2, 2), 1e-14);
        let ones = SymMatrix::from_row_slice(2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let s = schur_complement(&ones, 1, Corner::UpperLeft, &t).unwrap();
        assert!(s[(0, 0)].abs() < 1e-14);
        assert!(schur_complement(&ones, 3, Corner::UpperLeft, &t).is_err());
    }

    #[test]
    fn rank_examples() {
        let t = Tolerances::default();
        assert_eq!(rank(&DMatrix::zeros(3, 3), &t).unwrap(), 0);
        assert_eq!(rank(&m(2, 2, &[2.0, 2.0, 2.0, 2.0]), &t).unwrap(), 1);
        assert_eq!(rank(&DMatrix::identity(5, 5), &t).unwrap(), 5);
    }

    #[test]
    fn psd_examples() {
        let t = Tolerances::default();
        assert!(is_psd(&SymMatrix::identity(2), &t));
        assert!(!is_psd(&SymMatrix::from_diagonal(&[1.0, -1.0]), &t));
        assert!(is_psd(&SymMatrix::from_row_slice(2, &[1.0, 1.0, 1.0, 1.0]).unwrap(), &t));
        assert!(is_psd(&SymMatrix::zeros(3), &t));
    }

    #[test]
    fn column_space_examples() {
        let t = Tolerances::default();
        let a = m(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        assert!(column_space_contained(&a, &a, &t).unwrap());
        assert!(!column_space_contained(&m(2, 1, &[0.0, 1.0]), &m(2, 2, &[1.0, 0.0, 0.0, 0.0]), &t).unwrap());
        assert!(column_space_contained(&m(2, 1, &[1.0, 1.0]), &m(2, 2, &[1.0; 4]), &t).unwrap());
        assert!(column_space_contained(&m(3, 1, &[1.0, 1.0, 1.0]), &m(2, 2, &[1.0; 4]), &t).is_err());
    }

    #[test]
    fn psd_project_examples() {
        let i2 = SymMatrix::identity(2);
        assert_close(&psd_project(&i2), &i2, 1e-15);
        assert_close(
            &psd_project(&SymMatrix::from_diagonal(&[1.0, -1.0])),
            &m(2, 2, &[1.0, 0.0, 0.0, 0.0]),
            1e-14,
        );
        assert_close(
            &psd_project(&SymMatrix::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()),
            &m(2, 2, &[0.5; 4]),
            1e-14,
        );
    }

    #[test]
    fn constructor_symmetrizes_and_validates() {
        let s = SymMatrix::new(m(2, 2, &[1.0, 2.0, 0.0, 1.0])).unwrap();
        assert_eq!(s[(0, 1)], s[(1, 0)]);
        assert!(SymMatrix::new(m(2, 3, &[0.0; 6])).is_err());
        assert!(SymMatrix::new(m(1, 1, &[f64::INFINITY])).is_err());
        assert!(SymMatrix::new_checked(m(2, 2, &[1.0, 2.0, 0.0, 1.0]), 1e-12).is_err());
    }
}
