use krylov_agp::agp::{alpha_recursion_residual, solve_alpha, solve_alpha_full};
use krylov_agp::autocorr::{agp_norm_bound, agp_norm_from_autocorr, AutocorrSpec, QuadOptions};
use krylov_agp::exact::ExactOracle;
use krylov_agp::krylov::{lanczos, lanczos_from_moments, max_truncation, moments_from_lanczos, LanczosOptions};
use krylov_agp::operator::{commutator, to_dense, OperatorSum, PauliString};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

const SITES: usize = 3;

fn pauli_string() -> impl Strategy<Value = PauliString> {
    (0u64..8, 0u64..8).prop_map(|(x, z)| PauliString::new(SITES, x, z).unwrap())
}

fn hermitian_sum(max_terms: usize) -> impl Strategy<Value = OperatorSum> {
    prop::collection::vec((pauli_string(), -1.0f64..1.0), 1..=max_terms).prop_map(|terms| {
        OperatorSum::from_real_terms(SITES, terms).unwrap()
    })
}

fn complex_sum() -> impl Strategy<Value = OperatorSum> {
    prop::collection::vec((pauli_string(), -1.0f64..1.0, -1.0f64..1.0), 1..=6).prop_map(|terms| {
        OperatorSum::from_pauli_terms(SITES, terms.into_iter().map(|(p, re, im)| (p, Complex64::new(re, im))))
            .unwrap()
    })
}

fn dense(o: &OperatorSum) -> DMatrix<Complex64> {
    to_dense(o).unwrap().as_dense().unwrap().clone()
}

fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max) <= tol
}

fn normalized(o: &OperatorSum) -> Option<OperatorSum> {
    let n = o.norm();
    (n > 1e-6).then(|| o.scale_real(1.0 / n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_products_match_matrix_products(a in complex_sum(), b in complex_sum()) {
        let prod = a.try_mul(&b).unwrap();
        prop_assert!(close(&dense(&prod), &(dense(&a) * dense(&b)), 1e-12));
    }

    #[test]
    fn commutator_is_antisymmetric(a in complex_sum(), b in complex_sum()) {
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert!(ab.try_add(&ba).unwrap().norm() <= 1e-12);
        let da = dense(&a);
        let db = dense(&b);
        prop_assert!(close(&dense(&ab), &(&da * &db - &db * &da), 1e-12));
    }

    #[test]
    fn pauli_and_dense_lanczos_agree(h in hermitian_sum(6), o in hermitian_sum(3)) {
        let Some(o0) = normalized(&o) else { return Ok(()) };
        let opts = LanczosOptions { symmetry_projection: false, ..Default::default() };
        let sparse = lanczos(&h, &o0, &opts).unwrap();
        let full = lanczos(&to_dense(&h).unwrap(), &to_dense(&o0).unwrap(), &opts).unwrap();
        // Agreement is only meaningful while the coefficients stay well above
        // the termination threshold.
        let n = sparse.b.iter().zip(&full.b).take_while(|(x, y)| x.min(**y) > 1e-3).count();
        for k in 0..n {
            prop_assert!((sparse.b[k] - full.b[k]).abs() <= 1e-8 * (1.0 + sparse.b[k]), "b_{} {} vs {}", k + 1, sparse.b[k], full.b[k]);
        }
    }

    #[test]
    fn moments_round_trip(b in prop::collection::vec(0.2f64..2.0, 1..10)) {
        let m = moments_from_lanczos(&b, b.len()).unwrap();
        let back = lanczos_from_moments(&m).unwrap();
        for (x, y) in b.iter().zip(&back) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn truncated_norms_grow_to_full_and_respect_the_bound(
        b in prop::collection::vec(0.1f64..3.0, 1..24),
        mu in 0.05f64..2.0,
    ) {
        let m = max_truncation(&b).unwrap();
        let full = solve_alpha_full(&b, mu).unwrap();
        prop_assert!(full.norm_sq <= agp_norm_bound(m + 1, mu, 1.0) * (1.0 + 1e-12));
        prop_assert!(alpha_recursion_residual(&b, &full) <= 1e-10);
        let mut previous = 0.0;
        for n in 0..=m {
            let sol = solve_alpha(&b, mu, n).unwrap();
            prop_assert!(sol.norm_sq >= previous * (1.0 - 1e-12));
            prop_assert!(sol.norm_sq <= full.norm_sq * (1.0 + 1e-12));
            prop_assert!(sol.relative_residual <= 1e-10);
            previous = sol.norm_sq;
        }
        prop_assert!((previous - full.norm_sq).abs() <= 1e-12 * full.norm_sq.max(1e-300));
    }

    #[test]
    fn krylov_norm_matches_oracle(h in hermitian_sum(6), o in hermitian_sum(3), mu in 0.2f64..2.0) {
        let Some(o0) = normalized(&o) else { return Ok(()) };
        let data = lanczos(&h, &o0, &LanczosOptions::default()).unwrap();
        let krylov = if data.b.is_empty() { 0.0 } else { solve_alpha_full(&data.b, mu).unwrap().norm_sq };
        let exact = ExactOracle::new(&h, &o0).unwrap().agp_norm(mu, true).unwrap();
        prop_assert!((krylov - exact).abs() <= 1e-8 * (exact + 1e-12), "{krylov} vs {exact}");
    }

    #[test]
    fn plateau_subtraction_is_exact(c in 0.0f64..0.9, mu in 0.2f64..3.0) {
        let base = AutocorrSpec::gaussian();
        let shifted = AutocorrSpec::gaussian().with_offset(c).unwrap();
        let quad = QuadOptions { tol: 1e-12, ..Default::default() };
        let n0 = agp_norm_from_autocorr(&base, mu, &quad).unwrap().value;
        let n1 = agp_norm_from_autocorr(&shifted, mu, &quad).unwrap().value;
        // ½∫(1/μ − t)e^{−μt}dt vanishes, so a constant offset only rescales.
        prop_assert!((n1 - (1.0 - c) * n0).abs() <= 1e-9 * n0.max(1e-6), "{n1} vs {}", (1.0 - c) * n0);
    }
}
