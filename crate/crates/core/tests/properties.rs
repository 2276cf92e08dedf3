use matmoment::certificates::{extract_squares, gram_polynomial, reconstruct, search_certificate, SearchOptions};
use matmoment::flat::extract_atoms;
use matmoment::linalg::{column_space_contained, is_psd, pinv, psd_project, rank, schur_complement, Corner};
use matmoment::moments::{b_matrix, localizing_matrix, moments_of_measure, riesz_pairing};
use matmoment::poly::{affine_substitute, mobius_inverse, mul_scalar};
use matmoment::random::{gaussian_matrix, random_certificate_instance, random_measure, random_psd, random_psd_rank, seeded};
use matmoment::{
    solve, verify_measure, Atom, AtomicMatrixMeasure, MatrixPolynomial, MomentSequence, ScalarPoly, SetDescription,
    SolverOptions, Status, SymMatrix, TmmpInput, Tolerances,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn k012() -> SetDescription {
    SetDescription::interval_point(0.0, 1.0, 2.0).unwrap()
}

fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn random_poly(seed: u64, p: usize, deg: usize) -> MatrixPolynomial {
    let mut rng = seeded(seed);
    let coeffs = (0..=deg)
        .map(|_| {
            let g = gaussian_matrix(&mut rng, p, p);
            SymMatrix::new(&g + g.transpose()).unwrap()
        })
        .collect();
    MatrixPolynomial::new(p, coeffs).unwrap()
}

fn random_sequence(seed: u64, p: usize, n: usize) -> MomentSequence {
    let mut rng = seeded(seed);
    let blocks = (0..=n)
        .map(|_| {
            let g = gaussian_matrix(&mut rng, p, p);
            SymMatrix::new(&g + g.transpose()).unwrap()
        })
        .collect();
    MomentSequence::new(p, blocks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn penrose_identities(seed in any::<u64>(), r in 1usize..7, c in 1usize..7, k in 0usize..7) {
        let mut rng = seeded(seed);
        let k = k.min(r).min(c);
        let a = gaussian_matrix(&mut rng, r, k) * gaussian_matrix(&mut rng, k, c);
        let x = pinv(&a, 1e-10).unwrap();
        let s = a.norm().max(1.0) * x.norm().max(1.0);
        prop_assert!((&a * &x * &a - &a).norm() <= 1e-9 * s * a.norm().max(1.0));
        prop_assert!((&x * &a * &x - &x).norm() <= 1e-9 * s * x.norm().max(1.0));
        let ax = &a * &x;
        let xa = &x * &a;
        prop_assert!((&ax - ax.transpose()).norm() <= 1e-9 * s);
        prop_assert!((&xa - xa.transpose()).norm() <= 1e-9 * s);
    }

    #[test]
    fn psd_blocks_have_psd_schur_complement(seed in any::<u64>(), n in 2usize..8, split in 1usize..7, rk in 1usize..8) {
        let split = split.min(n - 1);
        let mut rng = seeded(seed);
        let m = random_psd_rank(&mut rng, n, rk.min(n));
        let s = schur_complement(&m, split, Corner::LowerRight, &tol()).unwrap();
        prop_assert!(is_psd(&s, &tol()));
        let b = m.as_matrix().view((0, split), (split, n - split)).into_owned();
        let d = m.as_matrix().view((split, split), (n - split, n - split)).into_owned();
        prop_assert!(column_space_contained(&b.transpose(), &d, &tol()).unwrap());
    }

    #[test]
    fn rank_is_monotone_under_loewner_order(seed in any::<u64>(), n in 1usize..8, rb in 0usize..8, rn in 0usize..8) {
        let mut rng = seeded(seed);
        let b = random_psd_rank(&mut rng, n, rb.min(n));
        let a = b.add(&random_psd_rank(&mut rng, n, rn.min(n)));
        prop_assert!(rank(a.as_matrix(), &tol()).unwrap() >= rank(b.as_matrix(), &tol()).unwrap());
        prop_assert!(column_space_contained(b.as_matrix(), a.as_matrix(), &tol()).unwrap());
    }

    #[test]
    fn psd_project_is_idempotent(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = seeded(seed);
        let g = gaussian_matrix(&mut rng, n, n);
        let a = SymMatrix::new(&g + g.transpose()).unwrap();
        let once = psd_project(&a);
        let twice = psd_project(&once);
        prop_assert!(is_psd(&once, &tol()));
        prop_assert!(rel(once.as_matrix(), twice.as_matrix()) <= 1e-12);
        let p = random_psd(&mut rng, n);
        prop_assert!(rel(p.as_matrix(), psd_project(&p).as_matrix()) <= 1e-12);
    }

    #[test]
    fn mul_scalar_evaluates_pointwise(
        seed in any::<u64>(),
        f in prop::collection::vec(-3.0f64..3.0, 1..5),
        p in 1usize..4,
        x in -2.0f64..2.0,
    ) {
        let f = ScalarPoly::new(f);
        let g = random_poly(seed, p, 3);
        let lhs = mul_scalar(&f, &g).eval(x);
        let rhs = g.eval(x).scale(f.eval(x));
        let scale = g.eval(x).as_matrix().norm().max(1.0) * f.coeffs().iter().map(|c| c.abs() * 2f64.powi(4)).sum::<f64>().max(1.0);
        prop_assert!((lhs.as_matrix() - rhs.as_matrix()).norm() <= 1e-10 * scale);
    }

    #[test]
    fn affine_substitution_composes(
        seed in any::<u64>(),
        a1 in 0.2f64..2.0, b1 in -1.0f64..1.0,
        a2 in 0.2f64..2.0, b2 in -1.0f64..1.0,
        deg in 0usize..5,
    ) {
        let f = random_poly(seed, 2, deg);
        let step = affine_substitute(&affine_substitute(&f, a1, b1).unwrap(), a2, b2).unwrap();
        let direct = affine_substitute(&f, a1 * a2, a1 * b2 + b1).unwrap();
        prop_assert!(step.max_coeff_diff(&direct) <= 1e-10 * direct.scale().max(1.0));
    }

    #[test]
    fn mobius_identity_holds_pointwise(seed in any::<u64>(), a in -2.0f64..2.0, deg in 0usize..6, x in -3.0f64..3.0) {
        let g = random_poly(seed, 2, deg);
        let u = x - a + 1.0;
        prop_assume!(u.abs() > 0.1);
        let f = mobius_inverse(&g, a, g.degree()).unwrap();
        let expected = g.eval(-1.0 / u).scale(u.powi(g.degree() as i32));
        let got = f.eval(x);
        let scale = g.coeffs().iter().map(|c| c.spectral_norm()).sum::<f64>() * u.abs().max(1.0 / u.abs()).powi(g.degree() as i32);
        prop_assert!((got.as_matrix() - expected.as_matrix()).norm() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn b_matrix_localizes(seed in any::<u64>(), p in 1usize..4, m in 1usize..4, df in 0usize..3, t in -2.0f64..2.0) {
        let n = 2 * m + df;
        let gamma = random_sequence(seed, p, n);
        let f = ScalarPoly::new((0..=df).map(|i| 1.0 + i as f64 * 0.5).collect());
        let b = b_matrix(m, t, p);
        let lhs = &b * localizing_matrix(&gamma, &f, m).unwrap().as_matrix() * b.transpose();
        let shifted = ScalarPoly::linear(1.0, -t).pow(2).mul(&f);
        let rhs = localizing_matrix(&gamma, &shifted, m - 1).unwrap();
        prop_assert!(rel(&lhs, rhs.as_matrix()) <= 1e-10);
    }

    #[test]
    fn flat_round_trip(seed in any::<u64>(), p in 1usize..4, k in 1usize..4) {
        let mut rng = seeded(seed);
        // k well separated locations in [-1, 2]
        let locs: Vec<f64> = (0..k).map(|j| -1.0 + j as f64 + 0.6 * (seed.rotate_left(j as u32 * 7) % 1000) as f64 / 1000.0).collect();
        let atoms = locs.iter().map(|&x| Atom { location: x, weight: random_psd(&mut rng, p) }).collect();
        let mu = AtomicMatrixMeasure::new(p, atoms, &tol()).unwrap();
        let n = k + 1;
        let gamma = moments_of_measure(&mu, 2 * n);
        let got = extract_atoms(&gamma, 1, &tol()).unwrap();
        prop_assert!(gamma.relative_residual(&moments_of_measure(&got, 2 * n)) <= 1e-7);
        prop_assert_eq!(got.len(), k);
        for (a, x) in got.atoms().iter().zip(&locs) {
            prop_assert!((a.location - x).abs() <= 1e-6);
            prop_assert!(is_psd(&a.weight, &tol()));
        }
    }

    #[test]
    fn duality_on_measures_and_certificates(seed in any::<u64>(), p in 1usize..3, n in 0usize..7, atoms in 1usize..4) {
        let mut rng = seeded(seed);
        let mu = random_measure(&mut rng, &k012(), p, atoms).unwrap();
        let gamma = moments_of_measure(&mu, n);
        let (f, _) = random_certificate_instance(&mut rng, &k012(), n, p).unwrap();
        let pairing = riesz_pairing(&gamma, &f).unwrap();
        let scale: f64 = f.coeffs().iter().zip(gamma.blocks()).map(|(a, b)| a.as_matrix().norm() * b.as_matrix().norm()).sum();
        prop_assert!(pairing >= -1e-8 * scale);
    }

    #[test]
    fn extract_squares_recomposes(seed in any::<u64>(), p in 1usize..4, d in 0usize..4, r in 1usize..12) {
        let mut rng = seeded(seed);
        let dim = (d + 1) * p;
        let gram = random_psd_rank(&mut rng, dim, r.min(dim));
        let squares = extract_squares(&gram, d, p, &tol()).unwrap();
        let mut acc = MatrixPolynomial::zero(p);
        for s in &squares {
            acc = acc.add(&s.square().unwrap()).unwrap();
        }
        let direct = gram_polynomial(&gram, d, p).unwrap();
        prop_assert!(acc.max_coeff_diff(&direct) <= 1e-9 * direct.scale().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tmmp_round_trip(seed in any::<u64>(), p in 1usize..4, m in 2usize..5, odd in any::<bool>()) {
        let mut rng = seeded(seed);
        let n = 2 * m + usize::from(odd);
        let mu = random_measure(&mut rng, &k012(), p, m - 1).unwrap();
        let gamma = moments_of_measure(&mu, n);
        let out = solve(&TmmpInput { gamma: gamma.clone(), set: k012(), options: SolverOptions::default() }).unwrap();
        prop_assert_eq!(out.status, Status::Feasible, "{:?}", out.diagnostics);
        let (ok, _) = verify_measure(out.measure.as_ref().unwrap(), &gamma, &k012(), &SolverOptions::default()).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>(), p in 1usize..3, n in 0usize..5) {
        let (f, _) = random_certificate_instance(&mut seeded(seed), &k012(), n, p).unwrap();
        let opts = SearchOptions::default();
        let a = search_certificate(&f, &k012(), None, &opts).unwrap();
        let b = search_certificate(&f, &k012(), None, &opts).unwrap();
        prop_assert_eq!(a.iterations, b.iterations);
        prop_assert_eq!(&a.trace, &b.trace);
        prop_assert_eq!(&a.certificate, &b.certificate);
        prop_assert!(reconstruct(&a.certificate).unwrap().max_coeff_diff(&f) <= 1e-6 * f.scale());
    }
}
