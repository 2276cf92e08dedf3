//! Flat moment sequences: the rank/PSD test for a flat `K`-representing
//! measure and the extraction of its atoms.

use nalgebra::DMatrix;

use crate::error::{invalid, numerical, Error, Result};
use crate::linalg::{is_psd, rank, rank_against, sym_eigen, SymMatrix, Tolerances};
use crate::moments::{localizing_matrix, moment_matrix, moments_of_measure, Atom, AtomicMatrixMeasure, MomentSequence};
use crate::poly::ScalarPoly;

/// Outcome of [`check_flat_conditions`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlatReport {
    /// `M_n ⪰ 0`.
    pub psd_ok: bool,
    /// `H_{g_j}(n − v_j) ⪰ 0` per generator.
    pub localizing_ok: Vec<(ScalarPoly, bool)>,
    /// `rank M_{n−v}`.
    pub rank_low: usize,
    /// `rank M_n`.
    pub rank_high: usize,
    pub flat: bool,
    pub v: usize,
    pub v_j: Vec<usize>,
}

impl FlatReport {
    pub fn all_psd(&self) -> bool {
        self.psd_ok && self.localizing_ok.iter().all(|(_, ok)| *ok)
    }

    /// All three conditions: PSD moment matrix, PSD localizing matrices, rank equality.
    pub fn holds(&self) -> bool {
        self.all_psd() && self.flat
    }
}

fn half_index(gamma: &MomentSequence) -> Result<usize> {
    let top = gamma.top_index();
    if !top.is_multiple_of(2) {
        return invalid(format!("flat extension needs an even top index, got {top}"));
    }
    Ok(top / 2)
}

/// Polynomial basis in which block-Hankel matrices are formed before rank
/// decisions. Ranks are basis independent in exact arithmetic; a Chebyshev
/// basis adapted to the support keeps the matrices far better conditioned
/// than monomials.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RankBasis {
    #[default]
    Monomial,
    /// `T_k((2x − lo − hi)/(hi − lo))`.
    Chebyshev { lo: f64, hi: f64 },
}

impl RankBasis {
    /// Block matrix `T ⊗ I_p` whose block row `k` holds the monomial
    /// coefficients of the `k`-th basis polynomial, `k = 0..=deg`.
    pub(crate) fn transform(&self, deg: usize, p: usize) -> Option<DMatrix<f64>> {
        let RankBasis::Chebyshev { lo, hi } = *self else {
            return None;
        };
        let z = ScalarPoly::linear(2.0 / (hi - lo), -(hi + lo) / (hi - lo));
        let mut polys = vec![ScalarPoly::one(), z.clone()];
        while polys.len() <= deg {
            let k = polys.len();
            let next = z.mul(&polys[k - 1]).scale(2.0).add(&polys[k - 2].scale(-1.0));
            polys.push(next);
        }
        let mut t = DMatrix::zeros((deg + 1) * p, (deg + 1) * p);
        for (k, poly) in polys.iter().take(deg + 1).enumerate() {
            for (j, &c) in poly.coeffs().iter().enumerate() {
                for r in 0..p {
                    t[(k * p + r, j * p + r)] = c;
                }
            }
        }
        Some(t)
    }

    /// `T M Tᵀ` for a block-Hankel matrix with `blocks` block rows.
    pub fn apply(&self, m: &SymMatrix, p: usize) -> SymMatrix {
        let blocks = m.dim() / p;
        match self.transform(blocks.saturating_sub(1), p) {
            Some(t) => SymMatrix::symmetrized(&t * m.as_matrix() * t.transpose()),
            None => m.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            RankBasis::Chebyshev { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                invalid(format!("Chebyshev basis needs finite lo < hi, got [{lo}, {hi}]"))
            }
            _ => Ok(()),
        }
    }
}

/// `rank(T M Tᵀ)` in `basis`.
pub fn rank_in(m: &SymMatrix, p: usize, basis: RankBasis, tol: &Tolerances) -> Result<usize> {
    rank(basis.apply(m, p).as_matrix(), tol)
}

/// `v = max(max_j ⌈deg g_j / 2⌉, 1)` together with the individual `v_j`.
pub fn flat_shift(generators: &[ScalarPoly]) -> (usize, Vec<usize>) {
    let v_j: Vec<usize> = generators.iter().map(|g| g.degree().div_ceil(2)).collect();
    let v = v_j.iter().copied().max().unwrap_or(0).max(1);
    (v, v_j)
}

/// Evaluates positivity of `M_n`, of every `H_{g_j}(n − v_j)`, and
/// `rank M_{n−v} = rank M_n` for `Γ = (Γ₀, …, Γ_{2n})`.
pub fn check_flat_conditions(
    gamma: &MomentSequence,
    generators: &[ScalarPoly],
    tol: &Tolerances,
) -> Result<FlatReport> {
    check_flat_conditions_in(gamma, generators, tol, RankBasis::Monomial)
}

/// [`check_flat_conditions`] with ranks taken in `basis`.
pub fn check_flat_conditions_in(
    gamma: &MomentSequence,
    generators: &[ScalarPoly],
    tol: &Tolerances,
    basis: RankBasis,
) -> Result<FlatReport> {
    basis.validate()?;
    if generators.is_empty() {
        return invalid("at least one generator is required");
    }
    let n = half_index(gamma)?;
    let (v, v_j) = flat_shift(generators);
    if v > n {
        return invalid(format!("shift v = {v} exceeds n = {n}"));
    }
    let mn = moment_matrix(gamma, n)?;
    let psd_ok = is_psd(&mn, tol);
    let mut localizing_ok = Vec::with_capacity(generators.len());
    for (g, &vj) in generators.iter().zip(&v_j) {
        let h = localizing_matrix(gamma, g, n - vj)?;
        localizing_ok.push((g.clone(), is_psd(&h, tol)));
    }
    let p = gamma.p();
    let rank_low = rank_in(&moment_matrix(gamma, n - v)?, p, basis, tol)?;
    let rank_high = rank_in(&mn, p, basis, tol)?;
    Ok(FlatReport {
        psd_ok,
        localizing_ok,
        rank_low,
        rank_high,
        flat: rank_low == rank_high,
        v,
        v_j,
    })
}

/// Numerical knobs of [`extract_atoms_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    pub tol: Tolerances,
    /// Locations closer than `merge_rel · span` are merged.
    pub merge_rel: f64,
    /// Largest tolerated relative moment mismatch of the recovered measure.
    pub residual_tol: f64,
    pub basis: RankBasis,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            merge_rel: 1e-7,
            residual_tol: 1e-6,
            basis: RankBasis::Monomial,
        }
    }
}

/// [`extract_atoms_with`] using default options with the given tolerances.
pub fn extract_atoms(gamma: &MomentSequence, v: usize, tol: &Tolerances) -> Result<AtomicMatrixMeasure> {
    extract_atoms_with(
        gamma,
        v,
        &ExtractOptions {
            tol: *tol,
            ..ExtractOptions::default()
        },
    )
}

/// Recovers the `rank M_{n−v}`-atomic measure of a flat sequence `Γ₀..Γ_{2n}`.
pub fn extract_atoms_with(gamma: &MomentSequence, v: usize, opts: &ExtractOptions) -> Result<AtomicMatrixMeasure> {
    let tol = &opts.tol;
    opts.basis.validate()?;
    let n = half_index(gamma)?;
    let p = gamma.p();
    if v == 0 || v > n {
        return invalid(format!("shift v = {v} must lie in 1..={n}"));
    }
    let r = rank_in(&moment_matrix(gamma, n - v)?, p, opts.basis, tol)?;
    let r_high = rank_in(&moment_matrix(gamma, n)?, p, opts.basis, tol)?;
    if r != r_high {
        return Err(Error::Precondition(format!(
            "sequence is not flat: rank M_(n-v) = {r}, rank M_n = {r_high}"
        )));
    }
    let (mu, resid) = extract_with_rank(gamma, n - v, r, opts)?;
    if resid > opts.residual_tol {
        return numerical("recovered atoms do not reproduce the moments", resid);
    }
    Ok(mu)
}

/// Rank at the widest relative gap of the spectrum, ignoring eigenvalues
/// below `1e-13` of the largest.
pub(crate) fn gap_rank(m: &SymMatrix, p: usize, basis: RankBasis) -> usize {
    let mut vals = basis.apply(m, p).eigenvalues();
    vals.reverse();
    let Some(&top) = vals.first() else {
        return 0;
    };
    if top <= 0.0 {
        return 0;
    }
    let floor = 1e-13 * top;
    let mut best = (0, f64::NEG_INFINITY);
    for r in 1..=vals.len() {
        if vals[r - 1] <= floor {
            break;
        }
        let next = vals.get(r).copied().unwrap_or(0.0).max(floor * 1e-3);
        let gap = (vals[r - 1] / next).ln();
        if gap > best.1 {
            best = (r, gap);
        }
    }
    best.0
}

/// Atoms from the pencil `(M_k, H_z(k))`, keeping the top `r` eigenpairs of
/// `M_k`; `z` is the coordinate of the chosen basis. Returns the measure
/// and its relative moment residual against all of `Γ`.
///
/// For an `r`-atomic measure with `rank M_k = r`, `M_k = Wᵀ W` and
/// `H_z(k) = Wᵀ Qᵀ D Q W` with `Q` orthogonal and `D` the diagonal of atom
/// locations, so `X = (Wᵀ)† H_z(k) W† = Qᵀ D Q`. The first block column of
/// `Q W` stacks the weight factors `c_iᵀ`.
pub(crate) fn extract_with_rank(
    gamma: &MomentSequence,
    k: usize,
    r: usize,
    opts: &ExtractOptions,
) -> Result<(AtomicMatrixMeasure, f64)> {
    let p = gamma.p();
    if 2 * k + 1 > gamma.top_index() {
        return invalid(format!("the shifted pencil at k = {k} needs moments up to {}", 2 * k + 1));
    }
    if r == 0 {
        let mu = AtomicMatrixMeasure::empty(p);
        return Ok((mu, gamma.relative_residual(&MomentSequence::zeros(p, gamma.top_index()))));
    }
    let (z, to_x): (ScalarPoly, Box<dyn Fn(f64) -> f64>) = match opts.basis {
        RankBasis::Monomial => (ScalarPoly::x(), Box::new(|z| z)),
        RankBasis::Chebyshev { lo, hi } => (
            ScalarPoly::linear(2.0 / (hi - lo), -(hi + lo) / (hi - lo)),
            Box::new(move |z| lo + (hi - lo) * (z + 1.0) / 2.0),
        ),
    };
    let mk = opts.basis.apply(&moment_matrix(gamma, k)?, p);
    let hz = opts.basis.apply(&localizing_matrix(gamma, &z, k)?, p);
    let (values, vectors) = sym_eigen(&mk);
    let dim = mk.dim();
    if r > dim {
        return invalid(format!("rank {r} exceeds the matrix dimension {dim}"));
    }
    let top: Vec<usize> = (dim - r..dim).rev().collect();
    if values[top[r - 1]] <= 0.0 {
        return numerical("moment matrix has fewer positive eigenvalues than the requested rank", values[top[r - 1]]);
    }
    let mut ur = DMatrix::zeros(dim, r);
    let mut w = DMatrix::zeros(r, dim);
    for (c, &i) in top.iter().enumerate() {
        let lam = values[i];
        ur.set_column(c, &(vectors.column(i) / lam.sqrt()));
        w.set_row(c, &(vectors.column(i).transpose() * lam.sqrt()));
    }
    let x = SymMatrix::symmetrized(ur.transpose() * hz.as_matrix() * &ur);
    let (zs, pvec) = sym_eigen(&x);
    let locs: Vec<f64> = zs.iter().map(|&z| to_x(z)).collect();
    let ct = pvec.transpose() * w.columns(0, p);

    let span = (locs[r - 1] - locs[0]).max(locs[r - 1].abs()).max(f64::MIN_POSITIVE);
    let mut atoms: Vec<Atom> = Vec::new();
    let mut start = 0;
    for i in 1..=r {
        if i < r && locs[i] - locs[i - 1] <= opts.merge_rel * span {
            continue;
        }
        let mut weight = DMatrix::zeros(p, p);
        let (mut num, mut den) = (0.0, 0.0);
        for j in start..i {
            let c = ct.row(j).transpose();
            let wj = &c * c.transpose();
            num += wj.trace() * locs[j];
            den += wj.trace();
            weight += wj;
        }
        atoms.push(Atom {
            location: if den > 0.0 { num / den } else { locs[start] },
            weight: SymMatrix::symmetrized(weight),
        });
        start = i;
    }
    let mu = AtomicMatrixMeasure::canonical(p, atoms);
    let resid = gamma.relative_residual(&moments_of_measure(&mu, gamma.top_index()));
    Ok((mu, resid))
}

/// `rank M_{n−v} − rank H_g(n−v)`: the number of rank-one atom terms on the zero set of `g`.
pub fn atom_zero_count(gamma: &MomentSequence, g: &ScalarPoly, v: usize, tol: &Tolerances) -> Result<usize> {
    atom_zero_count_in(gamma, g, v, tol, RankBasis::Monomial)
}

/// [`atom_zero_count`] with ranks taken in `basis`.
pub fn atom_zero_count_in(
    gamma: &MomentSequence,
    g: &ScalarPoly,
    v: usize,
    tol: &Tolerances,
    basis: RankBasis,
) -> Result<usize> {
    basis.validate()?;
    let n = half_index(gamma)?;
    if v > n || g.degree() > 2 * v {
        return invalid(format!("need v <= n and deg g <= 2v (v = {v}, n = {n}, deg g = {})", g.degree()));
    }
    let p = gamma.p();
    let m = basis.apply(&moment_matrix(gamma, n - v)?, p);
    let h = basis.apply(&localizing_matrix(gamma, g, n - v)?, p);
    let rm = rank(m.as_matrix(), tol)?;
    // H_g is a combination of the same moments, so its roundoff is on the
    // order of ‖g‖₁·‖M‖; a localizing matrix that small counts as zero.
    let g_norm: f64 = g.coeffs().iter().map(|c| c.abs()).sum();
    let rh = rank_against(h.as_matrix(), g_norm * m.spectral_norm(), tol)?;
    rm.checked_sub(rh).ok_or_else(|| Error::NumericalFailure {
        message: format!("rank H_g(n-v) = {rh} exceeds rank M_(n-v) = {rm}"),
        residual: 0.0,
    })
}

/// `Σ rank A_j` over atoms with `|g(x_j)| ≤ zero_tol`.
pub fn multiplicity_at_zeros(mu: &AtomicMatrixMeasure, g: &ScalarPoly, zero_tol: f64, tol: &Tolerances) -> usize {
    mu.atoms()
        .iter()
        .filter(|a| g.eval(a.location).abs() <= zero_tol)
        .map(|a| rank(a.weight.as_matrix(), tol).unwrap_or(0))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_measure(atoms: &[(f64, f64)]) -> AtomicMatrixMeasure {
        AtomicMatrixMeasure::new(
            1,
            atoms
                .iter()
                .map(|&(x, w)| Atom {
                    location: x,
                    weight: SymMatrix::scalar(w),
                })
                .collect(),
            &Tolerances::default(),
        )
        .unwrap()
    }

    #[test]
    fn flat_condition_examples() {
        let t = Tolerances::default();
        let g = MomentSequence::scalar(&[2.0, 2.0, 2.0]).unwrap();
        let r = check_flat_conditions(&g, &[ScalarPoly::x()], &t).unwrap();
        assert!(r.holds());
        assert_eq!((r.rank_low, r.rank_high, r.v), (1, 1, 1));

        let g = MomentSequence::scalar(&[1.0, 0.5, 0.25]).unwrap();
        let r = check_flat_conditions(&g, &[ScalarPoly::new(vec![0.0, -1.0, 1.0])], &t).unwrap();
        assert!(!r.localizing_ok[0].1);

        let r = check_flat_conditions(&MomentSequence::zeros(2, 4), &[ScalarPoly::x()], &t).unwrap();
        assert!(r.holds() && r.rank_high == 0);

        assert!(check_flat_conditions(&MomentSequence::zeros(1, 3), &[ScalarPoly::x()], &t).is_err());
        assert!(check_flat_conditions(&g, &[], &t).is_err());
    }

    #[test]
    fn extract_examples() {
        let t = Tolerances::default();
        let mu = extract_atoms(&MomentSequence::scalar(&[2.0, 2.0, 2.0]).unwrap(), 1, &t).unwrap();
        assert_eq!(mu.len(), 1);
        assert!((mu.atoms()[0].location - 1.0).abs() < 1e-12);
        assert!((mu.atoms()[0].weight[(0, 0)] - 2.0).abs() < 1e-12);

        let two = AtomicMatrixMeasure::new(
            2,
            vec![
                Atom {
                    location: 0.0,
                    weight: SymMatrix::identity(2),
                },
                Atom {
                    location: 1.0,
                    weight: SymMatrix::identity(2),
                },
            ],
            &t,
        )
        .unwrap();
        let mu = extract_atoms(&moments_of_measure(&two, 4), 1, &t).unwrap();
        assert_eq!(mu.len(), 2);
        for (a, x) in mu.atoms().iter().zip([0.0, 1.0]) {
            assert!((a.location - x).abs() < 1e-10);
            assert!((a.weight.as_matrix() - DMatrix::identity(2, 2)).norm() < 1e-9);
        }

        assert!(extract_atoms(&MomentSequence::zeros(1, 2), 1, &t).unwrap().is_empty());
    }

    #[test]
    fn extract_rejects_non_flat() {
        let g = moments_of_measure(&scalar_measure(&[(0.0, 1.0), (1.0, 1.0)]), 2);
        assert!(matches!(
            extract_atoms(&g, 1, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zero_count_examples() {
        let t = Tolerances::default();
        let g = moments_of_measure(&scalar_measure(&[(0.0, 1.0), (1.0, 1.0)]), 4);
        assert_eq!(atom_zero_count(&g, &ScalarPoly::x(), 1, &t).unwrap(), 1);
        let g = MomentSequence::scalar(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(atom_zero_count(&g, &ScalarPoly::linear(1.0, -1.0), 1, &t).unwrap(), 1);
        assert_eq!(atom_zero_count(&g, &ScalarPoly::x(), 1, &t).unwrap(), 0);
    }
}
