//! Involution laws, Hermitian-law invariance and sign invariance.

mod common;

use common::{basis_change, coeff_grid, ctx, series_from};
use orthlab_core::linalg::Matrix;
use orthlab_core::scenario::golden;
use orthlab_core::tau_modules::{module_sign, validate_hermitian, validate_semilinear, SemiLinearModule};
use orthlab_core::{Line, LineSeries};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tau_is_an_involutive_ring_homomorphism(a in coeff_grid(12), b in coeff_grid(12)) {
        let c = ctx();
        let f = series_from(c, &a);
        let g = series_from(c, &b);
        prop_assert!(f.tau().tau().agrees(&f, 8));
        prop_assert!(f.mul(&g).tau().agrees(&f.tau().mul(&g.tau()), 8));
        prop_assert!(f.add(&g).tau().agrees(&f.tau().add(&g.tau()), 8));
        prop_assert!(c.one().tau().agrees(&c.one(), 8));
        // τ fixes S and sends T to (1+T)^-1 - 1.
        prop_assert!(c.s().tau().agrees(&c.s(), 8));
        prop_assert!(c.t().tau().agrees(&c.gamma_anti_power(-1).sub(&c.one()), 8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hermitian_law_survives_basis_change(seeds in prop::collection::vec(-3i64..=3, 12..30)) {
        let c = ctx();
        let s = golden::rank3_worked(c).unwrap();
        let b = basis_change(c, 3, &seeds);
        let pairing = s.module.pairing().change_basis(&b).unwrap();
        let module = s.module.module().change_basis(&b).unwrap();
        prop_assert!(validate_semilinear(&module).pass);
        let o = validate_hermitian(&pairing, &module);
        prop_assert!(o.pass, "{}", o.witness);
    }

    #[test]
    fn sign_is_basis_independent(eps in prop::sample::select(vec![1i64, -1]), k in -3i64..=3, u in prop::collection::vec(-9i64..=9, 4)) {
        let c = ctx();
        let l = c.line(Line::Anti);
        prop_assume!(u[0] % 5 != 0);
        let a = l.gamma_power(k).scale(&c.scalar(eps));
        let m = SemiLinearModule::new(Matrix::from_rows(vec![vec![a]]).unwrap()).unwrap();
        let unit: LineSeries = l.from_integers(&u);
        let b = Matrix::from_rows(vec![vec![unit]]).unwrap();
        let moved = m.change_basis(&b).unwrap();
        prop_assert!(validate_semilinear(&moved).pass);
        prop_assert_eq!(module_sign(&m).unwrap(), module_sign(&moved).unwrap());
        prop_assert_eq!(module_sign(&m).unwrap() as i64, eps);
    }
}
