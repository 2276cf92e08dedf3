//! Seeded random instances: atomic measures on `K`, certificates built from
//! random PSD grams, and polynomials that barely stay PSD on `K`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::certificates::{generator_set, gram_polynomial, reconstruct, Certificate, CertificateTerm, Parity};
use crate::error::{invalid, Result};
use crate::linalg::{SymMatrix, Tolerances};
use crate::moments::{b_matrix, Atom, AtomicMatrixMeasure, SetDescription};
use crate::poly::{mul_scalar, MatrixPolynomial};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// `W·Wᵀ` with a standard-normal `dim × dim` matrix `W`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SymMatrix {
    let w = gaussian_matrix(rng, dim, dim);
    SymMatrix::symmetrized(&w * w.transpose())
}

/// `W·Wᵀ` with `W` of size `dim × rank`.
pub fn random_psd_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> SymMatrix {
    let w = gaussian_matrix(rng, dim, rank);
    SymMatrix::symmetrized(&w * w.transpose())
}

/// A location in the continuous part of `K`: uniform on `[b, c]`, or
/// `b + (b − a)·E` with `E ~ Exp(1)` on the half line.
pub fn continuous_point<R: Rng + ?Sized>(rng: &mut R, set: &SetDescription) -> f64 {
    match *set {
        SetDescription::IntervalPoint { b, c, .. } => rng.random_range(b..=c),
        SetDescription::PointHalfLine { a, b } => {
            let e: f64 = Exp1.sample(rng);
            b + (b - a) * e
        }
    }
}

/// `interval_atoms` atoms in the continuous part, plus a mass at `a` when
/// `point_mass` is set; weights `W·Wᵀ`.
pub fn random_measure_with<R: Rng + ?Sized>(
    rng: &mut R,
    set: &SetDescription,
    p: usize,
    interval_atoms: usize,
    point_mass: bool,
) -> Result<AtomicMatrixMeasure> {
    if p == 0 {
        return invalid("matrix size p must be positive");
    }
    let mut atoms = Vec::with_capacity(interval_atoms + 1);
    if point_mass {
        atoms.push(Atom {
            location: set.a(),
            weight: random_psd(rng, p),
        });
    }
    for _ in 0..interval_atoms {
        let location = continuous_point(rng, set);
        atoms.push(Atom {
            location,
            weight: random_psd(rng, p),
        });
    }
    AtomicMatrixMeasure::new(p, atoms, &Tolerances::default())
}

/// Exactly `atoms` atoms of `K`: the point `a` is included with probability
/// 1/2, the rest are uniform on the continuous part.
pub fn random_measure<R: Rng + ?Sized>(
    rng: &mut R,
    set: &SetDescription,
    p: usize,
    atoms: usize,
) -> Result<AtomicMatrixMeasure> {
    let point = atoms > 0 && rng.random_bool(0.5);
    random_measure_with(rng, set, p, atoms - usize::from(point), point)
}

/// A certificate of degree `n` with a full-rank random gram for every
/// generator that fits under `n`.
pub fn random_certificate<R: Rng + ?Sized>(rng: &mut R, set: &SetDescription, n: usize, p: usize) -> Result<Certificate> {
    if p == 0 {
        return invalid("matrix size p must be positive");
    }
    let parity = Parity::of(n);
    let terms = generator_set(set, parity)
        .into_iter()
        .filter(|g| g.degree() <= n)
        .map(|g| {
            let d = (n - g.degree()) / 2;
            CertificateTerm {
                gram: random_psd(rng, (d + 1) * p),
                generator: g,
                basis_degree: d,
            }
        })
        .collect();
    Ok(Certificate {
        set: *set,
        parity,
        degree: n,
        terms,
    })
}

/// A random certificate and the polynomial it reconstructs.
pub fn random_certificate_instance<R: Rng + ?Sized>(
    rng: &mut R,
    set: &SetDescription,
    n: usize,
    p: usize,
) -> Result<(MatrixPolynomial, Certificate)> {
    let cert = random_certificate(rng, set, n, p)?;
    Ok((reconstruct(&cert)?, cert))
}

/// `V_dᵀ Q V_d` for a gram over the block monomial basis.
fn sandwich(gram: &DMatrix<f64>, d: usize, p: usize) -> MatrixPolynomial {
    gram_polynomial(&SymMatrix::symmetrized(gram.clone()), d, p).expect("sizes agree")
}

/// A degree-`n` polynomial on a bounded `K` whose smallest eigenvalue over
/// `K` is exactly `eps`, attained at a random interior point `t`.
///
/// Even `n = 2m`: `(x − t)² V_{m−1}ᵀQV_{m−1} + P₀ + ε·I` with `P₀ ⪰ 0` singular.
/// Odd `n = 2m + 1`: `(x − t)²(f₁ V_{m−1}ᵀQ₁V_{m−1} + f₃ V_{m−1}ᵀQ₃V_{m−1}) + ε·I`.
pub fn adversarial_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    set: &SetDescription,
    n: usize,
    p: usize,
    eps: f64,
) -> Result<MatrixPolynomial> {
    let SetDescription::IntervalPoint { b, c, .. } = *set else {
        return invalid("adversarial polynomials need a bounded set");
    };
    if n < 2 || p == 0 || eps.is_nan() || eps < 0.0 {
        return invalid(format!("need n >= 2, p >= 1 and eps >= 0, got n={n}, p={p}, eps={eps}"));
    }
    let t = rng.random_range(b..=c);
    let m = n / 2;
    // (x − t)² V_{m−1}ᵀQV_{m−1} = V_mᵀ B_m(t)ᵀ Q B_m(t) V_m
    let bm = b_matrix(m, t, p);
    let lifted = |q: &SymMatrix| sandwich(&(bm.transpose() * q.as_matrix() * &bm), m, p);
    let eps_i = MatrixPolynomial::constant(SymMatrix::identity(p).scale(eps));
    let body = if n.is_multiple_of(2) {
        let q = random_psd(rng, m * p);
        let p0 = random_psd_rank(rng, p, p - 1);
        lifted(&q).add(&MatrixPolynomial::constant(p0))?
    } else {
        let q1 = random_psd(rng, m * p);
        let q3 = random_psd(rng, m * p);
        let f3 = set.f3().expect("bounded");
        mul_scalar(&set.f1(), &lifted(&q1)).add(&mul_scalar(&f3, &lifted(&q3)))?
    };
    body.add(&eps_i)
}
