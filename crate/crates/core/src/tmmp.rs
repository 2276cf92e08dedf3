//! The truncated matrix moment problem on `K = {a} ∪ [b, c]`.
//!
//! After an affine change of variables (`a → 0`, `b → 1`), the largest
//! admissible mass is moved onto the isolated point by replacing `Γ₀` with
//! the generalized Schur complement value `Γ̃₀`. The modified sequence is
//! coflat, hence flat (directly for even `n`; after a three-step recurrence
//! extension for odd `n`), and its atoms are read off the shift operator.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::flat::{check_flat_conditions_in, extract_with_rank, gap_rank, rank_in, ExtractOptions, FlatReport, RankBasis};
use crate::linalg::{asymmetry, is_psd, pinv, psd_threshold, sym_eigen, SymMatrix, Tolerances};
use crate::moments::{
    affine_transform_moments, localized_sequence, localizing_matrix, moment_matrix, moments_of_measure, Atom,
    AtomicMatrixMeasure, MomentSequence, SetDescription,
};
use crate::poly::ScalarPoly;

/// Solver knobs. All tolerances are applied in normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: Tolerances,
    /// Atoms within `snap_rel · (c − a)` of `K` are moved onto `K`.
    pub snap_rel: f64,
    /// Largest accepted relative moment mismatch of the final measure.
    pub residual_tol: f64,
    /// Largest accepted relative residual of the odd-case recurrence system
    /// and asymmetry of the extended moments.
    pub recurrence_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            snap_rel: 1e-6,
            residual_tol: 1e-6,
            recurrence_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmmpInput {
    pub gamma: MomentSequence,
    pub set: SetDescription,
    pub options: SolverOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
    NumericalFailure,
}

/// The flat sequence handed to atom extraction, in normalized coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatStage {
    /// `Γ̃` (even case) or its extension up to index `2m + 4` (odd case).
    pub sequence: MomentSequence,
    pub v: usize,
    pub generators: Vec<ScalarPoly>,
    pub report: FlatReport,
    /// Atoms recovered from `sequence`, normalized coordinates.
    pub measure: Option<AtomicMatrixMeasure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmmpOutcome {
    pub status: Status,
    /// Representing measure in the original coordinates.
    pub measure: Option<AtomicMatrixMeasure>,
    /// Names of violated conditions (PSD tests, rank tests or numerical checks).
    pub failed_conditions: Vec<String>,
    pub gamma0_tilde: Option<SymMatrix>,
    /// `Γ₀ − Γ̃₀`, placed at `a`.
    pub residual_mass: Option<SymMatrix>,
    pub moment_residual: f64,
    /// `c` after normalizing `a → 0`, `b → 1`.
    pub normalized_c: f64,
    /// `(Γ̃₀, Γ₁, …, Γ_n)` in normalized coordinates.
    pub tilded: Option<MomentSequence>,
    pub flat_stage: Option<FlatStage>,
    pub diagnostics: Vec<String>,
}

impl TmmpOutcome {
    fn new(normalized_c: f64) -> Self {
        Self {
            status: Status::NumericalFailure,
            measure: None,
            failed_conditions: Vec::new(),
            gamma0_tilde: None,
            residual_mass: None,
            moment_residual: f64::INFINITY,
            normalized_c,
            tilded: None,
            flat_stage: None,
            diagnostics: Vec::new(),
        }
    }

    fn fail(mut self, status: Status, condition: impl Into<String>) -> Self {
        self.mark(status, condition);
        self
    }

    fn mark(&mut self, status: Status, condition: impl Into<String>) {
        self.status = status;
        self.failed_conditions.push(condition.into());
    }
}

/// A named matrix whose positive semidefiniteness is a solvability condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: String,
    pub matrix: SymMatrix,
}

fn bounded(set: &SetDescription) -> Result<(f64, f64, f64)> {
    match *set {
        SetDescription::IntervalPoint { a, b, c } => Ok((a, b, c)),
        SetDescription::PointHalfLine { .. } => invalid("the moment solver needs a bounded set {a} ∪ [b, c]"),
    }
}

/// Moments pushed forward by `y = (x − a)/(b − a)`, and `c' = (c − a)/(b − a)`.
pub fn normalize(gamma: &MomentSequence, set: &SetDescription) -> Result<(MomentSequence, f64)> {
    let (a, b, c) = bounded(set)?;
    let g = affine_transform_moments(gamma, b - a, a)?;
    Ok((g, (c - a) / (b - a)))
}

/// Normalized generators `f₁ = x`, `f₂ = x(x − 1)`, `f₃ = c − x`.
fn normalized_generators(c: f64) -> (ScalarPoly, ScalarPoly, ScalarPoly) {
    let f1 = ScalarPoly::x();
    let f2 = f1.mul(&ScalarPoly::linear(1.0, -1.0));
    let f3 = ScalarPoly::linear(-1.0, c);
    (f1, f2, f3)
}

/// The parity-dependent PSD conditions, evaluated on normalized data.
pub fn condition_matrices(gamma: &MomentSequence, set: &SetDescription) -> Result<Vec<Condition>> {
    let n = gamma.top_index();
    if n < 2 {
        return invalid(format!("need at least Γ₀..Γ₂, got top index {n}"));
    }
    let (g, c) = normalize(gamma, set)?;
    let (f1, f2, f3) = normalized_generators(c);
    let m = n / 2;
    let named = |name: &str, matrix: SymMatrix| Condition {
        name: name.to_string(),
        matrix,
    };
    if n.is_multiple_of(2) {
        Ok(vec![
            named("M_m PSD", moment_matrix(&g, m)?),
            named("H_{f2}(m-1) PSD", localizing_matrix(&g, &f2, m - 1)?),
            named("H_{f1f3}(m-1) PSD", localizing_matrix(&g, &f1.mul(&f3), m - 1)?),
        ])
    } else {
        Ok(vec![
            named("H_{f1}(m) PSD", localizing_matrix(&g, &f1, m)?),
            named("H_{f3}(m) PSD", localizing_matrix(&g, &f3, m)?),
            named("H_{f1f2}(m-1) PSD", localizing_matrix(&g, &f1.mul(&f2), m - 1)?),
            named("H_{f2f3}(m-1) PSD", localizing_matrix(&g, &f2.mul(&f3), m - 1)?),
        ])
    }
}

/// Evaluates the solvability conditions for the parity of `n`.
pub fn check_conditions(gamma: &MomentSequence, set: &SetDescription, tol: &Tolerances) -> Result<Vec<(String, bool)>> {
    Ok(condition_matrices(gamma, set)?
        .into_iter()
        .map(|c| {
            let ok = is_psd(&c.matrix, tol);
            (c.name, ok)
        })
        .collect())
}

/// Horizontal block row `(h_from, …, h_{from+len−1})`.
fn block_row(h: &[SymMatrix], from: usize, len: usize) -> DMatrix<f64> {
    let p = h[0].dim();
    let mut out = DMatrix::zeros(p, len * p);
    for k in 0..len {
        out.view_mut((0, k * p), (p, p)).copy_from(h[from + k].as_matrix());
    }
    out
}

/// `v H† vᵀ` evaluated after the congruence `H → T H Tᵀ`, `v → v Tᵀ` with
/// the Chebyshev basis of `[lo, hi]`, which is where `H` lives numerically.
fn schur_term(v: &DMatrix<f64>, h: &SymMatrix, p: usize, lo: f64, hi: f64, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let basis = RankBasis::Chebyshev { lo, hi };
    let t = basis
        .transform(h.dim() / p - 1, p)
        .expect("Chebyshev basis has a transform");
    let ht = &t * h.as_matrix() * t.transpose();
    let vt = v * t.transpose();
    Ok(&vt * pinv(&ht, tol.rank_tol)? * vt.transpose())
}

fn max_point_mass(gamma: &MomentSequence, c: f64, tol: &Tolerances) -> Result<SymMatrix> {
    let n = gamma.top_index();
    let p = gamma.p();
    let m = n / 2;
    let x2 = ScalarPoly::new(vec![0.0, 0.0, 1.0]);
    if n.is_multiple_of(2) {
        let h = localizing_matrix(gamma, &x2, m - 1)?;
        let v = block_row(gamma.blocks(), 1, m);
        Ok(SymMatrix::symmetrized(schur_term(&v, &h, p, 1.0, c, tol)?))
    } else {
        let f3 = ScalarPoly::linear(-1.0, c);
        let h = localizing_matrix(gamma, &x2.mul(&f3), m - 1)?;
        // (cΓ_k − Γ_{k+1}) for k = 1..m
        let shifted = localized_sequence(gamma, &f3, n)?;
        let w = block_row(&shifted, 1, m);
        let g1 = gamma.block(1).as_matrix();
        Ok(SymMatrix::symmetrized((g1 + schur_term(&w, &h, p, 1.0, c, tol)?) / c))
    }
}

/// Extends the odd-case tilded sequence `Γ̃₀..Γ_{2m+1}` to `Γ_{2m+4}` through
/// the recurrence for the `(c − x)`-localized moments.
fn extend_odd(tilded: &MomentSequence, c: f64, opts: &SolverOptions) -> std::result::Result<MomentSequence, (String, f64)> {
    let p = tilded.p();
    let n = tilded.top_index();
    let m = (n - 1) / 2;
    let f3 = ScalarPoly::linear(-1.0, c);
    let h = localized_sequence(tilded, &f3, 2 * m + 1).map_err(|e| (e.to_string(), f64::NAN))?;

    let mut lhs = DMatrix::zeros((m + 1) * p, m * p);
    let mut rhs = DMatrix::zeros((m + 1) * p, p);
    for j in 0..=m {
        for i in 0..m {
            lhs.view_mut((j * p, i * p), (p, p)).copy_from(h[i + j].as_matrix());
        }
        rhs.view_mut((j * p, 0), (p, p)).copy_from(h[m + j].as_matrix());
    }
    // solved in the Chebyshev basis of [0, c]: (T_m A T_{m−1}ᵀ) Q' = T_m R, Q = T_{m−1}ᵀ Q'
    let basis = RankBasis::Chebyshev { lo: 0.0, hi: c };
    let t = basis.transform(m, p).expect("Chebyshev basis has a transform");
    let t_low = t.view((0, 0), (m * p, m * p)).into_owned();
    let lhs_t = &t * &lhs * t_low.transpose();
    let q_t = pinv(&lhs_t, opts.tol.rank_tol).map_err(|e| (e.to_string(), f64::NAN))? * (&t * &rhs);
    let q = t_low.transpose() * q_t;
    let scale = lhs.norm().max(rhs.norm());
    let resid = (&lhs * &q - &rhs).norm();
    if resid > opts.recurrence_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(("recurrence relations for H_{c-x}".into(), resid / scale));
    }

    let q_block = |i: usize| q.view((i * p, 0), (p, p)).into_owned();
    let mut qt = Vec::with_capacity(m + 1);
    qt.push(q_block(0) * -c);
    for i in 1..m {
        qt.push(q_block(i - 1) - q_block(i) * c);
    }
    qt.push(DMatrix::identity(p, p) * c + q_block(m - 1));

    let mut blocks: Vec<SymMatrix> = tilded.blocks().to_vec();
    let seq_scale = tilded.scale().max(f64::MIN_POSITIVE);
    for j in (m + 1)..=(m + 3) {
        let mut next = DMatrix::zeros(p, p);
        for (i, qi) in qt.iter().enumerate() {
            next += blocks[i + j].as_matrix() * qi;
        }
        let asym = asymmetry(&next);
        if asym > opts.recurrence_tol * next.norm().max(seq_scale) {
            return Err((format!("symmetry of extended moment Γ_{}", m + j + 1), asym / seq_scale));
        }
        blocks.push(SymMatrix::symmetrized(next));
    }
    Ok(MomentSequence::new(p, blocks).expect("blocks have matching sizes"))
}

/// Solves the `K`-moment problem, returning a finitely atomic representing
/// measure when the solvability conditions hold.
/// Atoms of the tilded sequence through the flat stage and pencil extraction.
/// `None` means `out` has been marked as a numerical failure.
fn recover_flat(
    tilded: &MomentSequence,
    c: f64,
    opts: &SolverOptions,
    out: &mut TmmpOutcome,
) -> Result<Option<AtomicMatrixMeasure>> {
    let tol = &opts.tol;
    let n = tilded.top_index();
    let (f1, f2, f3) = normalized_generators(c);
    let m = n / 2;
    let basis = RankBasis::Chebyshev { lo: 0.0, hi: c };
    // pencil order: the flat shift is 1 (even) or 2 (odd) below the top of the flat sequence
    let (k, generators, extended) = if n.is_multiple_of(2) {
        (m - 1, vec![f2.clone(), f1.mul(&f3)], Ok(tilded.clone()))
    } else {
        (
            m,
            vec![f1.clone(), f3.clone(), f1.mul(&f2), f2.mul(&f3)],
            extend_odd(tilded, c, opts),
        )
    };
    let mut candidates = Vec::new();
    let mut rank_failed = false;
    match extended {
        Ok(sequence) => {
            let report = check_flat_conditions_in(&sequence, &generators, tol, basis)?;
            if !report.flat {
                rank_failed = true;
                out.diagnostics.push(format!(
                    "rank M_(n-v) = {}, rank M_n = {}",
                    report.rank_low, report.rank_high
                ));
            }
            if !report.psd_ok {
                out.diagnostics.push("flat sequence: M_n not PSD within psd_tol".into());
            }
            for (gen, ok) in &report.localizing_ok {
                if !ok {
                    out.diagnostics.push(format!(
                        "flat sequence: H_g(n-v_j) not PSD within psd_tol for g = {:?}",
                        gen.coeffs()
                    ));
                }
            }
            candidates.push(report.rank_low);
            candidates.push(report.rank_high);
            out.flat_stage = Some(FlatStage {
                v: report.v,
                sequence,
                generators,
                report,
                measure: None,
            });
        }
        Err((what, resid)) => {
            out.diagnostics.push(format!("{what}: relative residual {resid:e}"));
        }
    }
    let mk = moment_matrix(tilded, k)?;
    candidates.push(rank_in(&mk, tilded.p(), basis, tol)?);
    candidates.push(gap_rank(&mk, tilded.p(), basis));
    let mut seen = Vec::new();
    candidates.retain(|r| !seen.contains(r) && {
        seen.push(*r);
        true
    });

    let extract_opts = ExtractOptions {
        tol: *tol,
        residual_tol: opts.residual_tol,
        basis,
        ..ExtractOptions::default()
    };
    let mut best: Option<(AtomicMatrixMeasure, f64, usize)> = None;
    for &r in &candidates {
        match extract_with_rank(tilded, k, r, &extract_opts) {
            Ok((mu, resid)) => {
                log::debug!("rank {r}: moment residual {resid:e}");
                if best.as_ref().is_none_or(|b| resid < b.1) {
                    best = Some((mu, resid, r));
                }
                if resid <= opts.residual_tol {
                    break;
                }
            }
            Err(e) => out.diagnostics.push(format!("rank {r}: {e}")),
        }
    }
    let flat_measure = match best {
        Some((mu, resid, r)) if resid <= opts.residual_tol => {
            if rank_failed {
                out.diagnostics.push(format!("atoms recovered at rank {r}, verified by moments"));
            }
            mu
        }
        other => {
            if let Some((_, resid, _)) = other {
                out.diagnostics.push(format!("best extraction has moment residual {resid:e}"));
            }
            if rank_failed {
                out.failed_conditions.push("rank M_{n-v} = rank M_n".into());
            }
            out.mark(Status::NumericalFailure, "atom extraction");
            return Ok(None);
        }
    };
    Ok(Some(flat_measure))
}

pub fn solve(input: &TmmpInput) -> Result<TmmpOutcome> {
    let gamma = &input.gamma;
    let opts = &input.options;
    let tol = &opts.tol;
    let (a, b, _c) = bounded(&input.set)?;
    let n = gamma.top_index();
    if n < 2 {
        return invalid(format!("need at least Γ₀..Γ₂, got top index {n}"));
    }
    let (g, c) = normalize(gamma, &input.set)?;
    let mut out = TmmpOutcome::new(c);

    let conditions = check_conditions(gamma, &input.set, tol)?;
    let failed: Vec<String> = conditions.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect();
    if !failed.is_empty() {
        out.status = Status::Infeasible;
        out.failed_conditions = failed;
        return Ok(out);
    }

    // Largest point mass at the isolated point.
    let g0 = g.block(0);
    let g0t = max_point_mass(&g, c, tol)?;
    let diff = g0.sub(&g0t);
    let (vals, vecs) = sym_eigen(&diff);
    let norm = g0.spectral_norm().max(g0t.spectral_norm());
    let lmin = vals.first().copied().unwrap_or(0.0);
    if lmin < -psd_threshold(norm, tol) {
        out.gamma0_tilde = Some(g0t);
        out.diagnostics.push(format!("Γ₀ − Γ̃₀ has eigenvalue {lmin:e}"));
        return Ok(out.fail(Status::NumericalFailure, "Gamma_0 - tilde Gamma_0 PSD"));
    }
    let clipped = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| l.max(0.0)),
    ));
    let residual_mass = SymMatrix::symmetrized(&vecs * clipped * vecs.transpose());
    let g0t = g0.sub(&residual_mass);
    let tilded = g.with_first(g0t.clone());
    out.gamma0_tilde = Some(g0t);
    out.residual_mass = Some(residual_mass.clone());
    out.tilded = Some(tilded.clone());

    let flat_measure = if tilded.scale() <= tol.rank_tol * g.scale() {
        out.diagnostics.push("tilded sequence vanishes: all mass sits at a".into());
        AtomicMatrixMeasure::empty(g.p())
    } else {
        match recover_flat(&tilded, c, opts, &mut out)? {
            Some(mu) => mu,
            None => return Ok(out),
        }
    };
    if let Some(stage) = out.flat_stage.as_mut() {
        stage.measure = Some(flat_measure.clone());
    }

    // Back to the original coordinates, snapping onto K.
    let snap = opts.snap_rel * c;
    let mut atoms = Vec::with_capacity(flat_measure.len() + 1);
    for atom in flat_measure.atoms() {
        let y = atom.location;
        let y = if y.abs() <= snap {
            0.0
        } else if y >= 1.0 - snap && y < 1.0 {
            1.0
        } else if y > c && y <= c + snap {
            c
        } else if (1.0..=c).contains(&y) {
            y
        } else {
            out.diagnostics.push(format!("normalized atom {y} lies outside K"));
            return Ok(out.fail(Status::NumericalFailure, "atoms in K"));
        };
        atoms.push(Atom {
            location: a + (b - a) * y,
            weight: atom.weight.clone(),
        });
    }
    atoms.push(Atom {
        location: a,
        weight: residual_mass,
    });
    let mu = match AtomicMatrixMeasure::new(gamma.p(), atoms, tol) {
        Ok(mu) => mu,
        Err(e) => {
            out.diagnostics.push(e.to_string());
            return Ok(out.fail(Status::NumericalFailure, "PSD weights"));
        }
    };
    let resid = gamma.relative_residual(&moments_of_measure(&mu, n));
    out.moment_residual = resid;
    out.measure = Some(mu);
    if resid > opts.residual_tol {
        out.diagnostics.push(format!("moment residual {resid:e}"));
        return Ok(out.fail(Status::NumericalFailure, "moments reproduced"));
    }
    out.status = Status::Feasible;
    Ok(out)
}

/// Checks that `μ` lives on `K`, has PSD weights and reproduces `Γ`.
/// Returns the verdict and the relative moment residual.
pub fn verify_measure(
    mu: &AtomicMatrixMeasure,
    gamma: &MomentSequence,
    set: &SetDescription,
    opts: &SolverOptions,
) -> Result<(bool, f64)> {
    if mu.p() != gamma.p() {
        return Err(Error::InvalidInput(format!(
            "size mismatch: measure is {}, moments are {}",
            mu.p(),
            gamma.p()
        )));
    }
    let snap = opts.snap_rel * set.width();
    let on_k = mu.atoms().iter().all(|a| set.contains(a.location, snap));
    let psd = mu.atoms().iter().all(|a| is_psd(&a.weight, &opts.tol));
    let resid = gamma.relative_residual(&moments_of_measure(mu, gamma.top_index()));
    Ok((on_k && psd && resid <= opts.residual_tol, resid))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k012() -> SetDescription {
        SetDescription::interval_point(0.0, 1.0, 2.0).unwrap()
    }

    fn run(values: &[f64]) -> TmmpOutcome {
        solve(&TmmpInput {
            gamma: MomentSequence::scalar(values).unwrap(),
            set: k012(),
            options: SolverOptions::default(),
        })
        .unwrap()
    }

    fn assert_two_atoms(mu: &AtomicMatrixMeasure) {
        assert_eq!(mu.len(), 2);
        for (atom, x) in mu.atoms().iter().zip([0.0, 1.0]) {
            assert!((atom.location - x).abs() < 1e-9);
            assert!((atom.weight[(0, 0)] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn even_worked_example() {
        let out = run(&[2.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(out.status, Status::Feasible);
        assert!((out.gamma0_tilde.as_ref().unwrap()[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((out.residual_mass.as_ref().unwrap()[(0, 0)] - 1.0).abs() < 1e-12);
        assert_two_atoms(out.measure.as_ref().unwrap());
    }

    #[test]
    fn odd_worked_example() {
        let out = run(&[2.0, 1.0, 1.0, 1.0]);
        assert_eq!(out.status, Status::Feasible, "{:?}", out.diagnostics);
        assert!((out.gamma0_tilde.as_ref().unwrap()[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((out.residual_mass.as_ref().unwrap()[(0, 0)] - 1.0).abs() < 1e-12);
        assert_two_atoms(out.measure.as_ref().unwrap());
    }

    #[test]
    fn gap_atom_is_infeasible() {
        let out = run(&[1.0, 0.5, 0.25]);
        assert_eq!(out.status, Status::Infeasible);
        assert_eq!(out.failed_conditions, vec!["H_{f2}(m-1) PSD".to_string()]);
        let conds = condition_matrices(&MomentSequence::scalar(&[1.0, 0.5, 0.25]).unwrap(), &k012()).unwrap();
        assert_eq!(conds[1].matrix[(0, 0)], -0.25);
    }

    #[test]
    fn check_conditions_examples() {
        let t = Tolerances::default();
        let mu = AtomicMatrixMeasure::new(
            1,
            vec![
                Atom { location: 0.0, weight: SymMatrix::scalar(1.0) },
                Atom { location: 1.0, weight: SymMatrix::scalar(1.0) },
            ],
            &t,
        )
        .unwrap();
        for n in 2..=7 {
            let res = check_conditions(&moments_of_measure(&mu, n), &k012(), &t).unwrap();
            assert!(res.iter().all(|(_, ok)| *ok), "n = {n}: {res:?}");
        }
        let res = check_conditions(&MomentSequence::zeros(2, 5), &k012(), &t).unwrap();
        assert!(res.iter().all(|(_, ok)| *ok));
        assert!(check_conditions(&MomentSequence::zeros(1, 1), &k012(), &t).is_err());
    }

    #[test]
    fn zero_data_gives_empty_measure() {
        let out = run(&[0.0; 5]);
        assert_eq!(out.status, Status::Feasible);
        assert!(out.measure.unwrap().is_empty());
    }

    #[test]
    fn verify_measure_examples() {
        let t = Tolerances::default();
        let atoms = |w1: f64| {
            AtomicMatrixMeasure::new(
                1,
                vec![
                    Atom { location: 0.0, weight: SymMatrix::scalar(1.0) },
                    Atom { location: 1.0, weight: SymMatrix::scalar(w1) },
                ],
                &t,
            )
            .unwrap()
        };
        let gamma = MomentSequence::scalar(&[2.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let opts = SolverOptions::default();
        assert_eq!(verify_measure(&atoms(1.0), &gamma, &k012(), &opts).unwrap(), (true, 0.0));
        let (ok, resid) = verify_measure(&atoms(1.0 + 1e-3), &gamma, &k012(), &opts).unwrap();
        assert!(!ok);
        // |ΔΓ_k| = 1e-3 for every k, relative to max |Γ_k| = 2
        assert!((resid - 5e-4).abs() < 1e-12);
        let gap = AtomicMatrixMeasure::new(1, vec![Atom { location: 0.5, weight: SymMatrix::scalar(1.0) }], &t).unwrap();
        let g = moments_of_measure(&gap, 4);
        assert!(!verify_measure(&gap, &g, &k012(), &opts).unwrap().0);
    }

    #[test]
    fn half_line_is_rejected() {
        let input = TmmpInput {
            gamma: MomentSequence::scalar(&[1.0, 1.0, 1.0]).unwrap(),
            set: SetDescription::point_half_line(0.0, 1.0).unwrap(),
            options: SolverOptions::default(),
        };
        assert!(solve(&input).is_err());
    }
}
