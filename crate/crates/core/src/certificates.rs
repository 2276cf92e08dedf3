//! Degree-bounded quadratic-module certificates `F = Σ_s f_s · V_dᵀ Q_s V_d`
//! for matrix polynomials positive semidefinite on `K`, where
//! `V_d = (I_p, x·I_p, …, x^d·I_p)ᵀ` and every Gram matrix `Q_s ⪰ 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::linalg::{is_psd, pinv, psd_project, sym_eigen, SymMatrix, Tolerances};
use crate::moments::SetDescription;
use crate::poly::{mul_scalar, MatrixPolynomial, ScalarPoly};

/// Generators are matched against the canonical set with this relative slack.
const GEN_MATCH_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateTerm {
    pub generator: ScalarPoly,
    /// Gram matrix over `V_d`, size `(basis_degree + 1)·p`.
    pub gram: SymMatrix,
    pub basis_degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub set: SetDescription,
    pub parity: Parity,
    /// Degree bound `n`: every term obeys `deg f_s + 2·basis_degree ≤ n`.
    pub degree: usize,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    pub fn p(&self) -> Option<usize> {
        self.terms.first().map(|t| t.gram.dim() / (t.basis_degree + 1))
    }

    /// `deg f_s + 2·basis_degree ≤ degree` for every term.
    pub fn degree_bound_holds(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.generator.degree() + 2 * t.basis_degree <= self.degree)
    }
}

/// Canonical generator set for `K` and the parity of the degree bound.
///
/// On `{a} ∪ [b, c]`: even `{1, f₂, f₁f₃}`, odd `{f₁, f₃, f₁f₂, f₂f₃}`.
/// On `{a} ∪ [b, ∞)`: `{1, f₁, f₂, f₁f₂}` for either parity.
pub fn generator_set(set: &SetDescription, parity: Parity) -> Vec<ScalarPoly> {
    let f1 = set.f1();
    let f2 = set.f2();
    match (set.f3(), parity) {
        (Some(f3), Parity::Even) => vec![ScalarPoly::one(), f2, f1.mul(&f3)],
        (Some(f3), Parity::Odd) => vec![f1.clone(), f3.clone(), f1.mul(&f2), f2.mul(&f3)],
        (None, _) => vec![ScalarPoly::one(), f1.clone(), f2.clone(), f1.mul(&f2)],
    }
}

/// Basis degree `⌊(n − deg g)/2⌋` for each generator that fits under `n`.
fn default_terms(set: &SetDescription, n: usize) -> Vec<(ScalarPoly, usize)> {
    generator_set(set, Parity::of(n))
        .into_iter()
        .filter(|g| g.degree() <= n)
        .map(|g| {
            let d = (n - g.degree()) / 2;
            (g, d)
        })
        .collect()
}

/// `V_dᵀ Q V_d`: coefficient `k` is the sum of the `p×p` blocks `Q_{ij}` with `i + j = k`.
pub fn gram_polynomial(gram: &SymMatrix, basis_degree: usize, p: usize) -> Result<MatrixPolynomial> {
    let size = (basis_degree + 1) * p;
    if gram.dim() != size {
        return invalid(format!(
            "gram is {}x{}, basis of degree {basis_degree} with p = {p} needs {size}x{size}",
            gram.dim(),
            gram.dim()
        ));
    }
    let mut coeffs = vec![DMatrix::zeros(p, p); 2 * basis_degree + 1];
    for i in 0..=basis_degree {
        for j in 0..=basis_degree {
            coeffs[i + j] += gram.view((i * p, j * p), (p, p));
        }
    }
    MatrixPolynomial::new(p, coeffs.into_iter().map(SymMatrix::symmetrized).collect())
}

/// `Σ_s f_s · V_dᵀ Q_s V_d`.
pub fn reconstruct(cert: &Certificate) -> Result<MatrixPolynomial> {
    let Some(p) = cert.p() else {
        return invalid("certificate has no terms");
    };
    let mut acc = MatrixPolynomial::zero(p);
    for term in &cert.terms {
        if term.gram.dim() % (term.basis_degree + 1) != 0 || term.gram.dim() / (term.basis_degree + 1) != p {
            return invalid(format!(
                "gram of size {} does not match p = {p} and basis degree {}",
                term.gram.dim(),
                term.basis_degree
            ));
        }
        let sigma = gram_polynomial(&term.gram, term.basis_degree, p)?;
        acc = acc.add(&mul_scalar(&term.generator, &sigma))?;
    }
    Ok(acc)
}

fn check_generators(cert: &Certificate) -> Result<()> {
    let allowed = generator_set(&cert.set, cert.parity);
    let mut used = vec![false; allowed.len()];
    for term in &cert.terms {
        let Some(idx) = allowed.iter().position(|g| g.approx_eq(&term.generator, GEN_MATCH_REL)) else {
            return invalid(format!(
                "generator {:?} is not in the {:?} generator set of {:?}",
                term.generator.coeffs(),
                cert.parity,
                cert.set
            ));
        };
        if std::mem::replace(&mut used[idx], true) {
            return invalid(format!("generator {:?} appears twice", term.generator.coeffs()));
        }
    }
    Ok(())
}

/// Relative coefficient deviation `max_k ‖R_k − F_k‖_F / max_k ‖F_k‖_F`.
fn relative_deviation(f: &MatrixPolynomial, recon: &MatrixPolynomial) -> f64 {
    let dev = f.max_coeff_diff(recon);
    let scale = f.scale();
    if dev == 0.0 {
        0.0
    } else if scale > 0.0 {
        dev / scale
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateCheck {
    pub valid: bool,
    pub grams_psd: bool,
    pub degree_ok: bool,
    /// Relative coefficient deviation of the reconstruction from `F`.
    pub residual: f64,
}

/// Checks PSD grams, the degree bound and `reconstruct(cert) = F` up to
/// `residual_tol` relative to the coefficient scale of `F`.
pub fn verify_certificate(
    f: &MatrixPolynomial,
    cert: &Certificate,
    residual_tol: f64,
    tol: &Tolerances,
) -> Result<CertificateCheck> {
    check_generators(cert)?;
    if cert.p().is_some_and(|p| p != f.p()) {
        return invalid(format!("certificate is {}x{}, polynomial is {}x{}", cert.p().unwrap(), cert.p().unwrap(), f.p(), f.p()));
    }
    let grams_psd = cert.terms.iter().all(|t| is_psd(&t.gram, tol));
    let degree_ok = cert.degree_bound_holds() && f.degree() <= cert.degree;
    let residual = if cert.terms.is_empty() {
        relative_deviation(f, &MatrixPolynomial::zero(f.p()))
    } else {
        relative_deviation(f, &reconstruct(cert)?)
    };
    Ok(CertificateCheck {
        valid: grams_psd && degree_ok && residual <= residual_tol,
        grams_psd,
        degree_ok,
        residual,
    })
}

/// A `p×p` matrix polynomial `H(x) = Σ_k H_k x^k` with general coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareFactor {
    pub coeffs: Vec<DMatrix<f64>>,
}

impl SquareFactor {
    pub fn eval(&self, x: f64) -> DMatrix<f64> {
        let p = self.coeffs[0].nrows();
        self.coeffs.iter().rev().fold(DMatrix::zeros(p, p), |acc, c| acc * x + c)
    }

    /// `H(x)ᵀ H(x)` as a matrix polynomial.
    pub fn square(&self) -> Result<MatrixPolynomial> {
        let p = self.coeffs[0].nrows();
        let d = self.coeffs.len() - 1;
        let mut out = vec![DMatrix::zeros(p, p); 2 * d + 1];
        for (i, hi) in self.coeffs.iter().enumerate() {
            for (j, hj) in self.coeffs.iter().enumerate() {
                out[i + j] += hi.transpose() * hj;
            }
        }
        MatrixPolynomial::new(p, out.into_iter().map(SymMatrix::symmetrized).collect())
    }
}

/// Factors `V_dᵀ Q V_d = Σ_k H_kᵀ H_k`. Each retained eigenpair `(λ, u)` gives
/// the row `√λ·uᵀV_d`; rows are packed `p` at a time into square factors.
/// Eigenvalues at or below `psd_tol · λ_max` are dropped.
pub fn extract_squares(gram: &SymMatrix, basis_degree: usize, p: usize, tol: &Tolerances) -> Result<Vec<SquareFactor>> {
    if gram.dim() != (basis_degree + 1) * p {
        return invalid(format!(
            "gram is {}x{}, expected {}",
            gram.dim(),
            gram.dim(),
            (basis_degree + 1) * p
        ));
    }
    if !is_psd(gram, tol) {
        return Err(Error::Precondition("gram matrix is not positive semidefinite".into()));
    }
    let (vals, vecs) = sym_eigen(gram);
    let lmax = vals.last().copied().unwrap_or(0.0);
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for k in (0..vals.len()).rev() {
        if vals[k] <= tol.psd_tol * lmax || vals[k] <= 0.0 {
            continue;
        }
        let mut u = vecs.column(k).into_owned();
        let imax = u.iamax();
        if u[imax] < 0.0 {
            u = -u;
        }
        rows.push(u * vals[k].sqrt());
    }
    Ok(rows
        .chunks(p)
        .map(|chunk| {
            let coeffs = (0..=basis_degree)
                .map(|i| {
                    let mut h = DMatrix::zeros(p, p);
                    for (r, row) in chunk.iter().enumerate() {
                        for col in 0..p {
                            h[(r, col)] = row[i * p + col];
                        }
                    }
                    h
                })
                .collect();
            SquareFactor { coeffs }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub max_iter: usize,
    /// Accept once the relative coefficient residual is at or below this.
    pub residual_tol: f64,
    /// Residual is evaluated every `check_every` iterations.
    pub check_every: usize,
    /// Face-restricted least-squares refinement is tried every `polish_every` iterations.
    pub polish_every: usize,
    pub tol: Tolerances,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            residual_tol: 1e-6,
            check_every: 25,
            polish_every: 250,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub certificate: Certificate,
    pub iterations: usize,
    pub residual: f64,
    /// Residual after each check.
    pub trace: Vec<f64>,
}

/// Layout of the stacked gram entries and the linear coefficient map.
struct GramSystem {
    p: usize,
    terms: Vec<(ScalarPoly, usize)>,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    /// Rows: entries `(k, r, s)` of the coefficients of `F`; columns: gram entries.
    a: DMatrix<f64>,
    target: DVector<f64>,
}

impl GramSystem {
    fn new(f: &MatrixPolynomial, terms: Vec<(ScalarPoly, usize)>, n: usize) -> Self {
        let p = f.p();
        let dims: Vec<usize> = terms.iter().map(|(_, d)| (d + 1) * p).collect();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for &dim in &dims {
            offsets.push(total);
            total += dim * dim;
        }
        let rows = (n + 1) * p * p;
        let mut a = DMatrix::zeros(rows, total);
        for (t, (g, d)) in terms.iter().enumerate() {
            let dim = dims[t];
            for bi in 0..=*d {
                for bj in 0..=*d {
                    for (l, &gl) in g.coeffs().iter().enumerate() {
                        if gl == 0.0 {
                            continue;
                        }
                        let k = l + bi + bj;
                        for r in 0..p {
                            for s in 0..p {
                                let row = (k * p + r) * p + s;
                                let col = offsets[t] + (bi * p + r) * dim + bj * p + s;
                                a[(row, col)] += gl;
                            }
                        }
                    }
                }
            }
        }
        let mut target = DVector::zeros(rows);
        for (k, fk) in f.coeffs().iter().enumerate() {
            for r in 0..p {
                for s in 0..p {
                    target[(k * p + r) * p + s] = fk[(r, s)];
                }
            }
        }
        Self {
            p,
            terms,
            offsets,
            dims,
            a,
            target,
        }
    }

    fn gram(&self, x: &DVector<f64>, t: usize) -> DMatrix<f64> {
        let dim = self.dims[t];
        DMatrix::from_row_slice(dim, dim, &x.as_slice()[self.offsets[t]..self.offsets[t] + dim * dim])
    }

    fn store(&self, x: &mut DVector<f64>, t: usize, m: &DMatrix<f64>) {
        let dim = self.dims[t];
        for r in 0..dim {
            for c in 0..dim {
                x[self.offsets[t] + r * dim + c] = m[(r, c)];
            }
        }
    }

    fn cone_project(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = x.clone();
        for t in 0..self.terms.len() {
            let g = SymMatrix::symmetrized(self.gram(x, t));
            self.store(&mut out, t, psd_project(&g).as_matrix());
        }
        out
    }

    fn relative_residual(&self, x: &DVector<f64>) -> f64 {
        let scale = self.coefficient_scale();
        let diff = &self.a * x - &self.target;
        let p2 = self.p * self.p;
        let dev = (0..diff.len() / p2)
            .map(|k| diff.rows(k * p2, p2).norm())
            .fold(0.0f64, f64::max);
        if dev == 0.0 {
            0.0
        } else if scale > 0.0 {
            dev / scale
        } else {
            f64::INFINITY
        }
    }

    fn coefficient_scale(&self) -> f64 {
        let p2 = self.p * self.p;
        (0..self.target.len() / p2)
            .map(|k| self.target.rows(k * p2, p2).norm())
            .fold(0.0f64, f64::max)
    }

    fn certificate(&self, x: &DVector<f64>, set: SetDescription, n: usize) -> Certificate {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(t, (g, d))| CertificateTerm {
                generator: g.clone(),
                gram: SymMatrix::symmetrized(self.gram(x, t)),
                basis_degree: *d,
            })
            .collect();
        Certificate {
            set,
            parity: Parity::of(n),
            degree: n,
            terms,
        }
    }

    /// Restricts every gram to the span of its eigenvectors above
    /// `thresh · λ_max` and solves the coefficient equations exactly on that
    /// face. Returns the PSD solution if one exists.
    fn polish(&self, x: &DVector<f64>, thresh: f64, rank_tol: f64) -> Option<DVector<f64>> {
        let eigs: Vec<(Vec<f64>, DMatrix<f64>)> = (0..self.terms.len())
            .map(|t| sym_eigen(&SymMatrix::symmetrized(self.gram(x, t))))
            .collect();
        let lmax = eigs
            .iter()
            .flat_map(|(v, _)| v.iter().copied())
            .fold(0.0f64, f64::max);
        if lmax <= 0.0 {
            return None;
        }
        let bases: Vec<DMatrix<f64>> = eigs
            .iter()
            .map(|(vals, vecs)| {
                let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > thresh * lmax).collect();
                let mut u = DMatrix::zeros(vecs.nrows(), keep.len());
                for (c, &i) in keep.iter().enumerate() {
                    u.set_column(c, &vecs.column(i));
                }
                u
            })
            .collect();
        let reduced: usize = bases.iter().map(|u| u.ncols() * u.ncols()).sum();
        if reduced == 0 {
            return None;
        }

        // Columns: A applied to u_α u_βᵀ, plus the current face coordinates.
        let mut b = DMatrix::zeros(self.a.nrows(), reduced);
        let mut s0 = DVector::zeros(reduced);
        let mut col = 0;
        for (t, u) in bases.iter().enumerate() {
            let dim = self.dims[t];
            let cur = u.transpose() * self.gram(x, t) * u;
            let block = self.a.columns(self.offsets[t], dim * dim);
            for al in 0..u.ncols() {
                for be in 0..u.ncols() {
                    let outer = u.column(al) * u.column(be).transpose();
                    let v = DVector::from_row_slice(outer.transpose().as_slice());
                    b.set_column(col, &(block * v));
                    s0[col] = cur[(al, be)];
                    col += 1;
                }
            }
        }
        let resid = &self.target - &b * &s0;
        let s = s0 + pinv(&b, rank_tol).ok()? * resid;

        let mut out = DVector::zeros(x.len());
        let mut col = 0;
        for (t, u) in bases.iter().enumerate() {
            let r = u.ncols();
            let st = DMatrix::from_row_slice(r, r, &s.as_slice()[col..col + r * r]);
            col += r * r;
            let st = SymMatrix::symmetrized(st);
            let (vals, _) = sym_eigen(&st);
            let smax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if vals.first().is_some_and(|&l| l < -1e-12 * smax.max(lmax)) {
                return None;
            }
            let full = u * psd_project(&st).as_matrix() * u.transpose();
            self.store(&mut out, t, &full);
        }
        Some(out)
    }
}

/// Searches for a certificate of `F` on `K` by Dykstra alternating
/// projections between the affine coefficient-matching set and the product
/// of PSD cones, with periodic exact refinement on the detected face.
/// Deterministic: iterates start at zero.
pub fn search_certificate(
    f: &MatrixPolynomial,
    set: &SetDescription,
    parity: Option<Parity>,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let n = f.degree();
    if let Some(par) = parity {
        if par != Parity::of(n) {
            return invalid(format!("deg F = {n} does not match the requested {par:?} generator set"));
        }
    }
    let sys = GramSystem::new(f, default_terms(set, n), n);
    let proj = pinv(&sys.a, 1e-12)?;
    let total = sys.a.ncols();

    let polish_candidates = |x: &DVector<f64>| -> Option<(DVector<f64>, f64)> {
        [1e-3, 1e-6, 1e-9]
            .iter()
            .filter_map(|&th| sys.polish(x, th, 1e-12))
            .map(|c| {
                let r = sys.relative_residual(&c);
                (c, r)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };

    let mut x = DVector::zeros(total);
    let mut p_corr = DVector::zeros(total);
    let mut q_corr = DVector::zeros(total);
    let mut trace = Vec::new();
    let mut best = (x.clone(), sys.relative_residual(&x));
    if best.1 <= opts.residual_tol {
        return Ok(SearchResult {
            certificate: sys.certificate(&best.0, *set, n),
            iterations: 0,
            residual: best.1,
            trace,
        });
    }
    for it in 1..=opts.max_iter {
        let z = &x + &p_corr;
        let y = &z - &proj * (&sys.a * &z - &sys.target);
        p_corr = z - &y;
        let w = &y + &q_corr;
        x = sys.cone_project(&w);
        q_corr = w - &x;

        let check = it % opts.check_every == 0 || it == opts.max_iter;
        if !check {
            continue;
        }
        let r = sys.relative_residual(&x);
        trace.push(r);
        if r < best.1 {
            best = (x.clone(), r);
        }
        let polish_now = it % opts.polish_every == 0 || r <= opts.residual_tol || it == opts.max_iter;
        if polish_now {
            if let Some((c, rc)) = polish_candidates(&x) {
                if rc < best.1 {
                    best = (c, rc);
                }
            }
        }
        if best.1 <= opts.residual_tol {
            log::debug!("certificate found after {it} iterations, residual {:e}", best.1);
            return Ok(SearchResult {
                certificate: sys.certificate(&best.0, *set, n),
                iterations: it,
                residual: best.1,
                trace,
            });
        }
    }
    Err(Error::SearchFailure {
        iterations: opts.max_iter,
        residual: best.1,
        trace,
    })
}

/// A point of `K` where `F` fails to be positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Refutation {
    pub point: f64,
    pub min_eig: f64,
    /// Unit eigenvector with `vᵀF(point)v = min_eig`.
    pub witness: DVector<f64>,
}

/// Natural size of `F(x)`: `Σ_k ‖F_k‖₂ |x|^k`.
fn local_scale(f: &MatrixPolynomial, x: f64) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.spectral_norm() * x.abs().powi(k as i32))
        .sum()
}

fn min_eig_at(f: &MatrixPolynomial, x: f64) -> (f64, DVector<f64>) {
    let (vals, vecs) = sym_eigen(&f.eval(x));
    (vals[0], vecs.column(0).into_owned())
}

/// Scans `a` and a uniform grid of `grid` points on `[b, c]` (for the half
/// line, `x = b + t/(1 − t)` with `t` uniform on `[0, 1)`), refines the best
/// grid point by golden-section search, and reports the most negative
/// `λ_min(F(x))` if it is below `−1e-9` times the local size of `F(x)`.
pub fn refute(f: &MatrixPolynomial, set: &SetDescription, grid: usize) -> Option<Refutation> {
    if f.is_zero() {
        return None;
    }
    let grid = grid.max(2);
    let points: Vec<f64> = match *set {
        SetDescription::IntervalPoint { b, c, .. } => {
            (0..grid).map(|i| b + (c - b) * i as f64 / (grid - 1) as f64).collect()
        }
        SetDescription::PointHalfLine { b, .. } => (0..grid)
            .map(|i| {
                let t = i as f64 / grid as f64;
                b + t / (1.0 - t)
            })
            .collect(),
    };
    let values: Vec<f64> = points.iter().map(|&x| min_eig_at(f, x).0).collect();
    let (imin, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");

    let lo = points[imin.saturating_sub(1)];
    let hi = points[(imin + 1).min(points.len() - 1)];
    let refined = golden_section(|x| min_eig_at(f, x).0, lo, hi, 80);

    let mut best: Option<Refutation> = None;
    for x in [set.a(), points[imin], refined] {
        let (lmin, v) = min_eig_at(f, x);
        let threshold = -1e-9 * local_scale(f, x).max(f.scale() * 1e-300);
        if lmin < threshold && best.as_ref().is_none_or(|b| lmin < b.min_eig) {
            best = Some(Refutation {
                point: x,
                min_eig: lmin,
                witness: v,
            });
        }
    }
    best
}

fn golden_section(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..iters {
        if g1 < g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        }
    }
    if g1 < g2 {
        x1
    } else {
        x2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Bounded certificate on `{−1} ∪ [b', 0]` to a certificate on `{a} ∪ [b, ∞)`.
    ToUnbounded,
    /// Half-line certificate on `{a} ∪ [b, ∞)` to one on `{−1} ∪ [b', 0]`.
    FromUnbounded,
}

/// Image of a generator under the substitution: `κ · g · w^{−k}`.
struct Image {
    kappa: f64,
    generator: ScalarPoly,
    k: usize,
}

const SET_MATCH: f64 = 1e-12;

/// Rewrites a certificate under the Möbius substitution relating
/// `{−1} ∪ [b', 0]` and `{a} ∪ [b, ∞)` with `b − a + 1 = −1/b'`.
///
/// `ToUnbounded` maps a certificate of `G` to one of
/// `F(y) = (y − a + 1)^n G(−1/(y − a + 1))`; `FromUnbounded` maps a
/// certificate of `F` to one of `G(x) = (−x)^n F(−1/x + a − 1)`. The
/// half-line `a` is taken from the certificate for `FromUnbounded` and from
/// `a` for `ToUnbounded`.
pub fn transform_certificate(cert: &Certificate, direction: Direction, a: f64) -> Result<Certificate> {
    check_generators(cert)?;
    let Some(p) = cert.p() else {
        return invalid("certificate has no terms");
    };
    let n = cert.degree;
    match direction {
        Direction::ToUnbounded => {
            let SetDescription::IntervalPoint { a: a0, b: bp, c: c0 } = cert.set else {
                return invalid("to_unbounded needs a certificate on {-1} ∪ [b', 0]");
            };
            if (a0 + 1.0).abs() > SET_MATCH || c0.abs() > SET_MATCH {
                return invalid(format!("to_unbounded needs a = -1 and c = 0, got a = {a0}, c = {c0}"));
            }
            if !a.is_finite() {
                return invalid("mobius parameter must be finite");
            }
            let beta = -1.0 / bp;
            let target = SetDescription::point_half_line(a, a - 1.0 + beta)?;
            let src = generator_set(&cert.set, cert.parity);
            let (one, f1h, f2h, f12h) = {
                let g = generator_set(&target, Parity::Even);
                (g[0].clone(), g[1].clone(), g[2].clone(), g[3].clone())
            };
            let img = |idx: usize| -> Image {
                let (kappa, generator, k) = match (cert.parity, idx) {
                    (Parity::Even, 0) => (1.0, one.clone(), 0),
                    (Parity::Even, 1) => (1.0 / beta, f2h.clone(), 2),
                    (Parity::Even, _) => (1.0, f1h.clone(), 2),
                    (Parity::Odd, 0) => (1.0, f1h.clone(), 1),
                    (Parity::Odd, 1) => (1.0, one.clone(), 1),
                    (Parity::Odd, 2) => (1.0 / beta, f12h.clone(), 3),
                    (Parity::Odd, _) => (1.0 / beta, f2h.clone(), 3),
                };
                Image { kappa, generator, k }
            };
            // x^i · w^{d'} = (−1)^i w^{d'−i} with w = y − a + 1
            let w = ScalarPoly::linear(1.0, 1.0 - a);
            let basis = |i: usize, dp: usize| w.pow(dp - i).scale(if i.is_multiple_of(2) { 1.0 } else { -1.0 });
            let mut terms = Vec::with_capacity(cert.terms.len());
            for term in &cert.terms {
                let idx = src
                    .iter()
                    .position(|g| g.approx_eq(&term.generator, GEN_MATCH_REL))
                    .expect("checked above");
                let im = img(idx);
                let used = im.k + 2 * term.basis_degree;
                if used > n || !(n - used).is_multiple_of(2) {
                    return invalid(format!(
                        "term with generator {:?} and basis degree {} does not fit degree {n}",
                        term.generator.coeffs(),
                        term.basis_degree
                    ));
                }
                let dp = term.basis_degree + (n - used) / 2;
                terms.push(CertificateTerm {
                    generator: im.generator,
                    gram: change_basis(&term.gram, term.basis_degree, dp, p, im.kappa, &basis),
                    basis_degree: dp,
                });
            }
            Ok(Certificate {
                set: target,
                parity: Parity::of(n),
                degree: n,
                terms,
            })
        }
        Direction::FromUnbounded => {
            let SetDescription::PointHalfLine { a: ha, b: hb } = cert.set else {
                return invalid("from_unbounded needs a certificate on {a} ∪ [b, ∞)");
            };
            let beta = hb - ha + 1.0;
            let target = SetDescription::interval_point(-1.0, -1.0 / beta, 0.0)?;
            let f1 = target.f1();
            let f2 = target.f2();
            let f3 = target.f3().expect("bounded");
            let parity = Parity::of(n);
            let allowed = generator_set(&target, parity);
            let src = generator_set(&cert.set, cert.parity);
            let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            // y^i · x^{d'} = x^{d'−i} ((a − 1)x − 1)^i
            let inner = ScalarPoly::linear(ha - 1.0, -1.0);
            let basis = |i: usize, dp: usize| {
                let mut shift = vec![0.0; dp - i + 1];
                shift[dp - i] = 1.0;
                ScalarPoly::new(shift).mul(&inner.pow(i))
            };
            let mut terms = Vec::with_capacity(cert.terms.len());
            for term in &cert.terms {
                let idx = src
                    .iter()
                    .position(|g| g.approx_eq(&term.generator, GEN_MATCH_REL))
                    .expect("checked above");
                let (kappa, gen, k) = match idx {
                    0 => (1.0, ScalarPoly::one(), 0),
                    1 => (-1.0, f1.clone(), 1),
                    2 => (beta, f2.clone(), 2),
                    _ => (-beta, f1.mul(&f2), 3),
                };
                let used = k + 2 * term.basis_degree;
                if used > n {
                    return invalid(format!(
                        "term with generator {:?} and basis degree {} does not fit degree {n}",
                        term.generator.coeffs(),
                        term.basis_degree
                    ));
                }
                let e = n - used;
                let dp = term.basis_degree + e / 2;
                // a leftover factor x equals −f₃
                let (kappa, gen) = if e % 2 == 1 {
                    (-sign_n * kappa, gen.mul(&f3))
                } else {
                    (sign_n * kappa, gen)
                };
                if !allowed.iter().any(|g| g.approx_eq(&gen, GEN_MATCH_REL)) {
                    return invalid(format!(
                        "term with generator {:?} maps to {:?}, outside the {parity:?} generator set",
                        term.generator.coeffs(),
                        gen.coeffs()
                    ));
                }
                debug_assert!(kappa > 0.0);
                terms.push(CertificateTerm {
                    generator: gen,
                    gram: change_basis(&term.gram, term.basis_degree, dp, p, kappa, &basis),
                    basis_degree: dp,
                });
            }
            Ok(Certificate {
                set: target,
                parity,
                degree: n,
                terms,
            })
        }
    }
}

/// `κ (T ⊗ I_p)ᵀ Q (T ⊗ I_p)` where row `i` of `T` holds the coefficients of `basis(i, d')`.
fn change_basis(
    gram: &SymMatrix,
    d: usize,
    dp: usize,
    p: usize,
    kappa: f64,
    basis: &dyn Fn(usize, usize) -> ScalarPoly,
) -> SymMatrix {
    let mut t = DMatrix::zeros((d + 1) * p, (dp + 1) * p);
    for i in 0..=d {
        let row = basis(i, dp);
        for l in 0..=dp {
            let v = row.coeff(l);
            if v != 0.0 {
                for r in 0..p {
                    t[(i * p + r, l * p + r)] = v;
                }
            }
        }
    }
    SymMatrix::symmetrized((t.transpose() * gram.as_matrix() * &t) * kappa)
}
