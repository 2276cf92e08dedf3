//! Univariate scalar and symmetric-matrix polynomials.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::linalg::SymMatrix;

/// Trailing coefficients below this fraction of the largest one are dropped.
pub const TRIM_REL: f64 = 1e-12;

/// Real polynomial, `coeffs[k]` multiplies `x^k`. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly {
    coeffs: Vec<f64>,
}

impl ScalarPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        while coeffs.last().is_some_and(|c| c.abs() <= TRIM_REL * scale) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `s·x + t`.
    pub fn linear(s: f64, t: f64) -> Self {
        Self::new(vec![t, s])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn mul(&self, other: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &ScalarPoly) -> ScalarPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, s: f64) -> ScalarPoly {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> ScalarPoly {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Coefficient-wise comparison relative to the larger of the two coefficient scales.
    pub fn approx_eq(&self, other: &ScalarPoly, rel: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .max(f64::MIN_POSITIVE);
        (0..n).all(|k| (self.coeff(k) - other.coeff(k)).abs() <= rel * scale)
    }
}

/// Polynomial `F(x) = Σ F_k x^k` with symmetric `p×p` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    p: usize,
    coeffs: Vec<SymMatrix>,
}

impl MatrixPolynomial {
    pub fn new(p: usize, coeffs: Vec<SymMatrix>) -> Result<Self> {
        if p == 0 {
            return invalid("matrix size p must be positive");
        }
        if let Some((k, c)) = coeffs.iter().enumerate().find(|(_, c)| c.dim() != p) {
            return invalid(format!("coefficient {k} is {}x{}, expected {p}x{p}", c.dim(), c.dim()));
        }
        Ok(Self::trimmed(p, coeffs))
    }

    fn trimmed(p: usize, mut coeffs: Vec<SymMatrix>) -> Self {
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        while coeffs.last().is_some_and(|c| c.norm() <= TRIM_REL * scale) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn zero(p: usize) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn constant(c: SymMatrix) -> Self {
        let p = c.dim();
        Self::trimmed(p, vec![c])
    }

    /// Embeds a scalar polynomial as `f(x)·I_p`.
    pub fn from_scalar(f: &ScalarPoly, p: usize) -> Self {
        let coeffs = f.coeffs().iter().map(|&c| SymMatrix::identity(p).scale(c)).collect();
        Self::trimmed(p, coeffs)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coeffs(&self) -> &[SymMatrix] {
        &self.coeffs
    }

    /// `F_k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> SymMatrix {
        self.coeffs.get(k).cloned().unwrap_or_else(|| SymMatrix::zeros(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest coefficient Frobenius norm.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> SymMatrix {
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(DMatrix::zeros(self.p, self.p), |acc, c| acc * x + c.as_matrix());
        SymMatrix::symmetrized(acc)
    }

    pub fn add(&self, other: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        if self.p != other.p {
            return invalid(format!("size mismatch: {} vs {}", self.p, other.p));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::trimmed(self.p, (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect()))
    }

    pub fn sub(&self, other: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        self.add(&other.scale_by(-1.0))
    }

    pub fn scale_by(&self, s: f64) -> MatrixPolynomial {
        Self::trimmed(self.p, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// Largest coefficient-wise Frobenius deviation.
    pub fn max_coeff_diff(&self, other: &MatrixPolynomial) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).fold(0.0f64, |m, k| {
            m.max((self.coeff(k).as_matrix() - other.coeff(k).as_matrix()).norm())
        })
    }
}

/// `f · G`, coefficient-wise convolution.
pub fn mul_scalar(f: &ScalarPoly, g: &MatrixPolynomial) -> MatrixPolynomial {
    let p = g.p();
    if f.is_zero() || g.is_zero() {
        return MatrixPolynomial::zero(p);
    }
    let mut out = vec![DMatrix::zeros(p, p); f.coeffs().len() + g.coeffs().len() - 1];
    for (i, &a) in f.coeffs().iter().enumerate() {
        for (j, b) in g.coeffs().iter().enumerate() {
            out[i + j] += b.as_matrix() * a;
        }
    }
    MatrixPolynomial::trimmed(p, out.into_iter().map(SymMatrix::symmetrized).collect())
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

/// `F(α·x + β)` by binomial expansion.
pub fn affine_substitute(f: &MatrixPolynomial, alpha: f64, beta: f64) -> Result<MatrixPolynomial> {
    if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
        return invalid(format!("affine substitution needs finite alpha != 0, got alpha={alpha}, beta={beta}"));
    }
    let p = f.p();
    let mut out = vec![DMatrix::zeros(p, p); f.coeffs().len()];
    for (k, fk) in f.coeffs().iter().enumerate() {
        // (αx + β)^k = Σ_j C(k,j) α^j β^{k−j} x^j
        let binom = binomial_row(k);
        for (j, b) in binom.iter().enumerate() {
            out[j] += fk.as_matrix() * (b * alpha.powi(j as i32) * beta.powi((k - j) as i32));
        }
    }
    Ok(MatrixPolynomial::trimmed(p, out.into_iter().map(SymMatrix::symmetrized).collect()))
}

/// `G(x) = (−x)^{deg F} · F(−1/x + a − 1)`, expanded exactly:
/// `(−x)^n z^k = (−1)^n x^{n−k} ((a−1)x − 1)^k` for `z = ((a−1)x − 1)/x`.
pub fn mobius_transform(f: &MatrixPolynomial, a: f64) -> Result<MatrixPolynomial> {
    if f.is_zero() {
        return invalid("mobius transform of the zero polynomial is undefined");
    }
    mobius_transform_deg(f, a, f.degree())
}

/// [`mobius_transform`] with an explicit exponent `n ≥ deg F`.
pub fn mobius_transform_deg(f: &MatrixPolynomial, a: f64, n: usize) -> Result<MatrixPolynomial> {
    if !a.is_finite() {
        return invalid("mobius parameter must be finite");
    }
    if f.degree() > n {
        return invalid(format!("exponent {n} is below deg F = {}", f.degree()));
    }
    let p = f.p();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let inner = ScalarPoly::linear(a - 1.0, -1.0);
    let mut acc = MatrixPolynomial::zero(p);
    for (k, fk) in f.coeffs().iter().enumerate() {
        let shift = ScalarPoly::new({
            let mut v = vec![0.0; n - k + 1];
            v[n - k] = sign;
            v
        });
        let factor = shift.mul(&inner.pow(k));
        acc = acc.add(&mul_scalar(&factor, &MatrixPolynomial::constant(fk.clone())))?;
    }
    Ok(acc)
}

/// Inverse of [`mobius_transform`]: `(x − a + 1)^n · G(−1/(x − a + 1))` with `n ≥ deg G`.
pub fn mobius_inverse(g: &MatrixPolynomial, a: f64, n: usize) -> Result<MatrixPolynomial> {
    if !a.is_finite() {
        return invalid("mobius parameter must be finite");
    }
    if g.degree() > n {
        return invalid(format!("exponent {n} is below deg G = {}", g.degree()));
    }
    let p = g.p();
    let u = ScalarPoly::linear(1.0, 1.0 - a);
    let mut acc = MatrixPolynomial::zero(p);
    for (k, gk) in g.coeffs().iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let factor = u.pow(n - k).scale(sign);
        acc = acc.add(&mul_scalar(&factor, &MatrixPolynomial::constant(gk.clone())))?;
    }
    Ok(acc)
}
