//! Matrix moment sequences, atomic matrix measures and the block-Hankel
//! matrices built from them.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::linalg::{is_psd, rank, SymMatrix, Tolerances};
use crate::poly::{MatrixPolynomial, ScalarPoly};

/// `(Γ₀, …, Γ_n)`, symmetric `p×p` blocks with `Γ_i = L(x^i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    p: usize,
    blocks: Vec<SymMatrix>,
}

impl MomentSequence {
    pub fn new(p: usize, blocks: Vec<SymMatrix>) -> Result<Self> {
        if p == 0 {
            return invalid("matrix size p must be positive");
        }
        if blocks.is_empty() {
            return invalid("a moment sequence needs at least one block");
        }
        if let Some((k, b)) = blocks.iter().enumerate().find(|(_, b)| b.dim() != p) {
            return invalid(format!("block {k} is {}x{}, expected {p}x{p}", b.dim(), b.dim()));
        }
        Ok(Self { p, blocks })
    }

    /// Scalar (`p = 1`) sequence from plain numbers.
    pub fn scalar(values: &[f64]) -> Result<Self> {
        Self::new(1, values.iter().map(|&v| SymMatrix::scalar(v)).collect())
    }

    pub fn zeros(p: usize, n: usize) -> Self {
        Self {
            p,
            blocks: vec![SymMatrix::zeros(p); n + 1],
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Index of the last block (`n` for `Γ₀..Γ_n`).
    pub fn top_index(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[SymMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &SymMatrix {
        &self.blocks[i]
    }

    /// Copy with `Γ₀` replaced.
    pub fn with_first(&self, g0: SymMatrix) -> Self {
        let mut blocks = self.blocks.clone();
        blocks[0] = g0;
        Self { p: self.p, blocks }
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self {
            p: self.p,
            blocks: self.blocks[..=n.min(self.top_index())].to_vec(),
        }
    }

    /// Largest block Frobenius norm.
    pub fn scale(&self) -> f64 {
        self.blocks.iter().fold(0.0f64, |m, b| m.max(b.norm()))
    }

    /// Largest blockwise Frobenius deviation divided by `self.scale()`
    /// (absolute when `self` is zero).
    pub fn relative_residual(&self, other: &MomentSequence) -> f64 {
        let n = self.blocks.len().max(other.blocks.len());
        let zero = SymMatrix::zeros(self.p);
        let diff = (0..n).fold(0.0f64, |m, k| {
            let a = self.blocks.get(k).unwrap_or(&zero);
            let b = other.blocks.get(k).unwrap_or(&zero);
            m.max((a.as_matrix() - b.as_matrix()).norm())
        });
        let scale = self.scale();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }
}

/// One atom `A·δ_x` of a matrix measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: SymMatrix,
}

/// `Σ_j A_j δ_{x_j}` with PSD weights, locations strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMatrixMeasure {
    p: usize,
    atoms: Vec<Atom>,
}

/// Weights whose norm is below this fraction of the total mass are dropped.
pub const DROP_REL: f64 = 1e-12;

impl AtomicMatrixMeasure {
    /// Sorts atoms, merges identical locations and drops negligible weights.
    /// Rejects non-PSD weights and non-finite locations.
    pub fn new(p: usize, atoms: Vec<Atom>, tol: &Tolerances) -> Result<Self> {
        if p == 0 {
            return invalid("matrix size p must be positive");
        }
        for (k, a) in atoms.iter().enumerate() {
            if !a.location.is_finite() {
                return invalid(format!("atom {k} has a non-finite location"));
            }
            if a.weight.dim() != p {
                return invalid(format!("atom {k} weight is {}x{}, expected {p}x{p}", a.weight.dim(), a.weight.dim()));
            }
            if !is_psd(&a.weight, tol) {
                return invalid(format!(
                    "atom {k} at {} has an indefinite weight (min eigenvalue {:e})",
                    a.location,
                    a.weight.min_eigenvalue()
                ));
            }
        }
        Ok(Self::canonical(p, atoms))
    }

    /// Canonicalization without the PSD check.
    pub(crate) fn canonical(p: usize, mut atoms: Vec<Atom>) -> Self {
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.location == atom.location => last.weight = last.weight.add(&atom.weight),
                _ => merged.push(atom),
            }
        }
        let total = merged
            .iter()
            .fold(DMatrix::zeros(p, p), |acc, a| acc + a.weight.as_matrix())
            .norm();
        merged.retain(|a| a.weight.norm() > DROP_REL * total);
        Self { p, atoms: merged }
    }

    pub fn empty(p: usize) -> Self {
        Self { p, atoms: Vec::new() }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ_j rank A_j`: the number of rank-one terms `c cᵀ δ_x` in the measure.
    pub fn multiplicity(&self, tol: &Tolerances) -> usize {
        self.atoms
            .iter()
            .map(|a| rank(a.weight.as_matrix(), tol).unwrap_or(0))
            .sum()
    }

    /// Total weight at locations within `radius` of `x`.
    pub fn mass_near(&self, x: f64, radius: f64) -> SymMatrix {
        let m = self
            .atoms
            .iter()
            .filter(|a| (a.location - x).abs() <= radius)
            .fold(DMatrix::zeros(self.p, self.p), |acc, a| acc + a.weight.as_matrix());
        SymMatrix::symmetrized(m)
    }
}

/// A closed set `K` together with its natural generator description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetDescription {
    /// `{a} ∪ [b, c]`, `a < b < c`.
    IntervalPoint { a: f64, b: f64, c: f64 },
    /// `{a} ∪ [b, ∞)`, `a < b`.
    PointHalfLine { a: f64, b: f64 },
}

impl SetDescription {
    pub fn interval_point(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || !(a < b && b < c) {
            return invalid(format!("need finite a < b < c, got a={a}, b={b}, c={c}"));
        }
        Ok(Self::IntervalPoint { a, b, c })
    }

    pub fn point_half_line(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return invalid(format!("need finite a < b, got a={a}, b={b}"));
        }
        Ok(Self::PointHalfLine { a, b })
    }

    pub fn a(&self) -> f64 {
        match *self {
            Self::IntervalPoint { a, .. } | Self::PointHalfLine { a, .. } => a,
        }
    }

    pub fn b(&self) -> f64 {
        match *self {
            Self::IntervalPoint { b, .. } | Self::PointHalfLine { b, .. } => b,
        }
    }

    /// `f₁ = x − a`.
    pub fn f1(&self) -> ScalarPoly {
        ScalarPoly::linear(1.0, -self.a())
    }

    /// `f₂ = (x − a)(x − b)`.
    pub fn f2(&self) -> ScalarPoly {
        self.f1().mul(&ScalarPoly::linear(1.0, -self.b()))
    }

    /// `f₃ = c − x`; `None` for the half line.
    pub fn f3(&self) -> Option<ScalarPoly> {
        match *self {
            Self::IntervalPoint { c, .. } => Some(ScalarPoly::linear(-1.0, c)),
            Self::PointHalfLine { .. } => None,
        }
    }

    /// The natural description: `[f₁, f₂, f₃]` (or `[f₁, f₂]` for the half line).
    pub fn generators(&self) -> Vec<ScalarPoly> {
        let mut g = vec![self.f1(), self.f2()];
        g.extend(self.f3());
        g
    }

    /// Membership with an absolute slack `snap`.
    pub fn contains(&self, x: f64, snap: f64) -> bool {
        match *self {
            Self::IntervalPoint { a, b, c } => (x - a).abs() <= snap || (x >= b - snap && x <= c + snap),
            Self::PointHalfLine { a, b } => (x - a).abs() <= snap || x >= b - snap,
        }
    }

    /// Width used to scale snapping tolerances (`c − a`, or `b − a` for the half line).
    pub fn width(&self) -> f64 {
        match *self {
            Self::IntervalPoint { a, c, .. } => c - a,
            Self::PointHalfLine { a, b } => b - a,
        }
    }
}

fn check_degree(gamma: &MomentSequence, needed: usize, what: &str) -> Result<()> {
    if needed > gamma.top_index() {
        return invalid(format!(
            "{what} needs moments up to index {needed}, sequence stops at {}",
            gamma.top_index()
        ));
    }
    Ok(())
}

/// `L(f) = Σ_k f_k Γ_k`.
pub fn riesz(gamma: &MomentSequence, f: &ScalarPoly) -> Result<SymMatrix> {
    check_degree(gamma, f.degree(), "riesz")?;
    Ok(riesz_unchecked(gamma, f, 0))
}

fn riesz_unchecked(gamma: &MomentSequence, f: &ScalarPoly, shift: usize) -> SymMatrix {
    let p = gamma.p();
    let acc = f
        .coeffs()
        .iter()
        .enumerate()
        .fold(DMatrix::zeros(p, p), |acc, (k, &c)| acc + gamma.block(k + shift).as_matrix() * c);
    SymMatrix::symmetrized(acc)
}

/// `Γ^{(f)}_i = L(f·x^i)` for `i = 0..=len-1`.
pub fn localized_sequence(gamma: &MomentSequence, f: &ScalarPoly, len: usize) -> Result<Vec<SymMatrix>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    check_degree(gamma, f.degree() + len - 1, "localized sequence")?;
    Ok((0..len).map(|i| riesz_unchecked(gamma, f, i)).collect())
}

/// Symmetric block-Hankel matrix with block `(i, j) = h[i + j]`, `(ell+1)×(ell+1)` blocks.
pub fn block_hankel(h: &[SymMatrix], ell: usize) -> SymMatrix {
    let p = h[0].dim();
    let n = (ell + 1) * p;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..=ell {
        for j in 0..=ell {
            m.view_mut((i * p, j * p), (p, p)).copy_from(h[i + j].as_matrix());
        }
    }
    SymMatrix::symmetrized(m)
}

/// `M_m`, block `(i, j) = Γ_{i+j}` (0-based).
pub fn moment_matrix(gamma: &MomentSequence, m: usize) -> Result<SymMatrix> {
    check_degree(gamma, 2 * m, "moment matrix")?;
    Ok(block_hankel(gamma.blocks(), m))
}

/// `H_f(ℓ)`, block `(i, j) = L(f·x^{i+j})`.
pub fn localizing_matrix(gamma: &MomentSequence, f: &ScalarPoly, ell: usize) -> Result<SymMatrix> {
    let h = localized_sequence(gamma, f, 2 * ell + 1)?;
    Ok(block_hankel(&h, ell))
}

/// `Σ_k tr(Γ_k F_k)`.
pub fn riesz_pairing(gamma: &MomentSequence, f: &MatrixPolynomial) -> Result<f64> {
    if f.p() != gamma.p() {
        return invalid(format!("size mismatch: Γ is {}, F is {}", gamma.p(), f.p()));
    }
    if !f.is_zero() {
        check_degree(gamma, f.degree(), "riesz pairing")?;
    }
    Ok(f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, fk)| gamma.block(k).component_mul(fk.as_matrix()).sum())
        .sum())
}

/// `Γ_i = Σ_j x_j^i A_j` for `i = 0..=n`.
pub fn moments_of_measure(mu: &AtomicMatrixMeasure, n: usize) -> MomentSequence {
    let p = mu.p();
    let mut blocks = vec![DMatrix::zeros(p, p); n + 1];
    for atom in mu.atoms() {
        let mut pow = 1.0;
        for b in blocks.iter_mut() {
            *b += atom.weight.as_matrix() * pow;
            pow *= atom.location;
        }
    }
    MomentSequence {
        p,
        blocks: blocks.into_iter().map(SymMatrix::symmetrized).collect(),
    }
}

/// `B_m(t)`: `m × (m+1)` block bidiagonal, `−t·I_p` on the diagonal, `I_p` above it.
pub fn b_matrix(m: usize, t: f64, p: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(m * p, (m + 1) * p);
    for i in 0..m {
        for k in 0..p {
            b[(i * p + k, i * p + k)] = -t;
            b[(i * p + k, (i + 1) * p + k)] = 1.0;
        }
    }
    b
}

/// Which rank equality [`is_coflat`] tests. `c` is `max K` for a set with `min K = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoflatMode {
    /// `rank M_⌊n/2⌋ = rank H_{x²}(⌊n/2⌋ − 1)`; hypotheses `M ⪰ 0`, `H_{x(c−x)} ⪰ 0`.
    Moment { c: f64 },
    /// `rank H_{c−x}(m) = rank H_{x²(c−x)}(m − 1)`, `m = ⌊(n−1)/2⌋`;
    /// hypotheses `H_x(m) ⪰ 0`, `H_{c−x}(m) ⪰ 0`.
    Localized { c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoflatReport {
    pub coflat: bool,
    pub rank_base: usize,
    pub rank_shifted: usize,
    /// Names of the rank-drop hypotheses that do not hold.
    pub failed_hypotheses: Vec<String>,
}

pub fn is_coflat(gamma: &MomentSequence, mode: CoflatMode, tol: &Tolerances) -> Result<CoflatReport> {
    let n = gamma.top_index();
    let x = ScalarPoly::x();
    let x2 = x.mul(&x);
    let mut failed = Vec::new();
    let (base, shifted) = match mode {
        CoflatMode::Moment { c } => {
            if n < 2 {
                return invalid("moment-mode coflatness needs n >= 2");
            }
            let m = n / 2;
            let base = moment_matrix(gamma, m)?;
            let shifted = localizing_matrix(gamma, &x2, m - 1)?;
            if !is_psd(&base, tol) {
                failed.push("M_m PSD".to_string());
            }
            let xcx = x.mul(&ScalarPoly::linear(-1.0, c));
            if !is_psd(&localizing_matrix(gamma, &xcx, m - 1)?, tol) {
                failed.push("H_{x(c-x)}(m-1) PSD".to_string());
            }
            (base, shifted)
        }
        CoflatMode::Localized { c } => {
            if n < 3 {
                return invalid("localized coflatness needs n >= 3");
            }
            let m = (n - 1) / 2;
            let cx = ScalarPoly::linear(-1.0, c);
            let base = localizing_matrix(gamma, &cx, m)?;
            let shifted = localizing_matrix(gamma, &x2.mul(&cx), m - 1)?;
            if !is_psd(&localizing_matrix(gamma, &x, m)?, tol) {
                failed.push("H_{x}(m) PSD".to_string());
            }
            if !is_psd(&base, tol) {
                failed.push("H_{c-x}(m) PSD".to_string());
            }
            (base, shifted)
        }
    };
    let rank_base = rank(base.as_matrix(), tol)?;
    let rank_shifted = rank(shifted.as_matrix(), tol)?;
    Ok(CoflatReport {
        coflat: rank_base == rank_shifted,
        rank_base,
        rank_shifted,
        failed_hypotheses: failed,
    })
}

/// Moments of the pushforward under `y = (x − β)/α`:
/// `Γ'_i = α^{−i} Σ_k C(i,k) (−β)^{i−k} Γ_k`.
pub fn affine_transform_moments(gamma: &MomentSequence, alpha: f64, beta: f64) -> Result<MomentSequence> {
    if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
        return invalid(format!("affine map needs finite alpha != 0, got alpha={alpha}, beta={beta}"));
    }
    let p = gamma.p();
    let n = gamma.top_index();
    let mut binom = vec![1.0f64];
    let mut blocks = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i > 0 {
            let mut next = vec![1.0; i + 1];
            for k in 1..i {
                next[k] = binom[k - 1] + binom[k];
            }
            binom = next;
        }
        let mut acc = DMatrix::zeros(p, p);
        for (k, &ck) in binom.iter().enumerate() {
            acc += gamma.block(k).as_matrix() * (ck * (-beta).powi((i - k) as i32));
        }
        blocks.push(SymMatrix::symmetrized(acc * alpha.powi(-(i as i32))));
    }
    MomentSequence::new(p, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(locs: &[(f64, f64)]) -> AtomicMatrixMeasure {
        AtomicMatrixMeasure::new(
            1,
            locs.iter()
                .map(|&(x, w)| Atom {
                    location: x,
                    weight: SymMatrix::scalar(w),
                })
                .collect(),
            &Tolerances::default(),
        )
        .unwrap()
    }

    fn vals(g: &MomentSequence) -> Vec<f64> {
        g.blocks().iter().map(|b| b[(0, 0)]).collect()
    }

    #[test]
    fn riesz_examples() {
        let g = MomentSequence::scalar(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(riesz(&g, &ScalarPoly::one()).unwrap(), *g.block(0));
        assert_eq!(riesz(&g, &ScalarPoly::new(vec![0.0, -1.0, 1.0])).unwrap()[(0, 0)], 0.0);
        let g = MomentSequence::scalar(&[1.0, 0.5, 0.25]).unwrap();
        assert_eq!(riesz(&g, &ScalarPoly::new(vec![0.0, -1.0, 1.0])).unwrap()[(0, 0)], -0.25);
        assert!(riesz(&g, &ScalarPoly::new(vec![0.0, 0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn moment_matrix_examples() {
        let t = Tolerances::default();
        let g = moments_of_measure(&delta(&[(0.0, 1.0)]), 2);
        assert_eq!(moment_matrix(&g, 1).unwrap(), SymMatrix::from_diagonal(&[1.0, 0.0]));
        let g = MomentSequence::scalar(&[2.0, 1.0, 1.0]).unwrap();
        let m = moment_matrix(&g, 1).unwrap();
        assert_eq!(m, SymMatrix::from_row_slice(2, &[2.0, 1.0, 1.0, 1.0]).unwrap());
        assert_eq!(rank(&m, &t).unwrap(), 2);
        let p = 3;
        let mu = AtomicMatrixMeasure::new(
            p,
            vec![Atom {
                location: 1.0,
                weight: SymMatrix::identity(p),
            }],
            &t,
        )
        .unwrap();
        let mm = moment_matrix(&moments_of_measure(&mu, 4), 2).unwrap();
        assert_eq!(rank(&mm, &t).unwrap(), p);
        assert!(moment_matrix(&g, 2).is_err());
    }

    #[test]
    fn localizing_examples() {
        let g = MomentSequence::scalar(&[2.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            localizing_matrix(&g, &ScalarPoly::one(), 2).unwrap(),
            moment_matrix(&g, 2).unwrap()
        );
        let f = ScalarPoly::new(vec![0.0, -1.0, 1.0]);
        let g = moments_of_measure(&delta(&[(0.0, 1.0), (2.0, 1.0)]), 2);
        assert_eq!(localizing_matrix(&g, &f, 0).unwrap()[(0, 0)], 2.0);
        let g = moments_of_measure(&delta(&[(0.5, 1.0)]), 2);
        assert_eq!(localizing_matrix(&g, &f, 0).unwrap()[(0, 0)], -0.25);
        assert!(localizing_matrix(&g, &f, 1).is_err());
    }

    #[test]
    fn pairing_examples() {
        let g = MomentSequence::scalar(&[2.0, 1.0]).unwrap();
        assert_eq!(riesz_pairing(&g, &MatrixPolynomial::zero(1)).unwrap(), 0.0);
        let f = MatrixPolynomial::from_scalar(&ScalarPoly::new(vec![3.0, 1.0]), 1);
        assert_eq!(riesz_pairing(&g, &f).unwrap(), 7.0);
        assert!(riesz_pairing(&g, &MatrixPolynomial::zero(2)).is_err());
    }

    #[test]
    fn measure_moment_examples() {
        let t = Tolerances::default();
        let mu = AtomicMatrixMeasure::new(
            2,
            vec![Atom {
                location: 0.0,
                weight: SymMatrix::identity(2),
            }],
            &t,
        )
        .unwrap();
        let g = moments_of_measure(&mu, 2);
        assert_eq!(g.blocks(), &[SymMatrix::identity(2), SymMatrix::zeros(2), SymMatrix::zeros(2)]);
        assert_eq!(vals(&moments_of_measure(&delta(&[(0.0, 1.0), (1.0, 1.0)]), 4)), vec![2.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(vals(&moments_of_measure(&delta(&[(1.0, 2.0)]), 2)), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn measure_canonicalization() {
        let mu = delta(&[(2.0, 1.0), (1.0, 1.0), (2.0, 0.5), (3.0, 0.0)]);
        let locs: Vec<f64> = mu.atoms().iter().map(|a| a.location).collect();
        assert_eq!(locs, vec![1.0, 2.0]);
        assert_eq!(mu.atoms()[1].weight[(0, 0)], 1.5);
        let bad = AtomicMatrixMeasure::new(
            1,
            vec![Atom {
                location: 0.0,
                weight: SymMatrix::scalar(-1.0),
            }],
            &Tolerances::default(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn b_matrix_examples() {
        assert_eq!(b_matrix(1, 3.0, 1), DMatrix::from_row_slice(1, 2, &[-3.0, 1.0]));
        assert_eq!(
            b_matrix(2, 0.0, 1),
            DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0])
        );
        let g = moments_of_measure(&delta(&[(0.0, 1.0), (2.0, 1.0)]), 2);
        let b = b_matrix(1, 2.0, 1);
        let lhs = &b * moment_matrix(&g, 1).unwrap().as_matrix() * b.transpose();
        let sq = ScalarPoly::linear(1.0, -2.0).pow(2);
        assert_eq!(lhs[(0, 0)], 4.0);
        assert_eq!(localizing_matrix(&g, &sq, 0).unwrap()[(0, 0)], 4.0);
    }

    #[test]
    fn coflat_examples() {
        let t = Tolerances::default();
        let g = moments_of_measure(&delta(&[(1.0, 1.0)]), 4);
        let r = is_coflat(&g, CoflatMode::Moment { c: 2.0 }, &t).unwrap();
        assert!(r.coflat && r.rank_base == 1 && r.rank_shifted == 1);
        let g = moments_of_measure(&delta(&[(0.0, 1.0), (1.0, 1.0)]), 4);
        let r = is_coflat(&g, CoflatMode::Moment { c: 2.0 }, &t).unwrap();
        assert!(!r.coflat);
        assert_eq!((r.rank_base, r.rank_shifted), (2, 1));
        assert!(r.failed_hypotheses.is_empty());
        assert!(is_coflat(&MomentSequence::scalar(&[1.0]).unwrap(), CoflatMode::Moment { c: 2.0 }, &t).is_err());
    }

    #[test]
    fn affine_moment_examples() {
        let g = MomentSequence::scalar(&[1.0, 0.3, 2.0, -1.0]).unwrap();
        assert_eq!(affine_transform_moments(&g, 1.0, 0.0).unwrap(), g);
        let g = MomentSequence::scalar(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(vals(&affine_transform_moments(&g, 1.0, 1.0).unwrap()), vec![1.0, 0.0, 0.0]);
        assert!(affine_transform_moments(&g, 0.0, 1.0).is_err());
    }

    #[test]
    fn set_description() {
        let k = SetDescription::interval_point(0.0, 1.0, 2.0).unwrap();
        assert!(k.contains(0.0, 0.0) && k.contains(1.5, 0.0) && !k.contains(0.5, 1e-6));
        assert_eq!(k.f2().coeffs(), &[0.0, -1.0, 1.0]);
        assert!(SetDescription::interval_point(1.0, 1.0, 2.0).is_err());
    }
}
