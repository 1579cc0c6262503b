use std::f64::consts::PI;

use fracgo::spectral::{frac_laplacian, laplacian};
use fracgo::{Field, Grid};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(vec![16, 16], vec![2.0 * PI; 2], vec![0.0; 2]).unwrap()
}

fn field(values: &[(f64, f64)]) -> Field {
    Field::new(grid(), values.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

fn values() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 256)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn semigroup(v in values(), a in 0.05..0.5f64, b in 0.05..0.5f64) {
        let u = field(&v);
        let lhs = frac_laplacian(&frac_laplacian(&u, a).unwrap(), b).unwrap();
        let rhs = frac_laplacian(&u, a + b).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-11 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn self_adjoint(v in values(), w in values(), s in 0.05..1.0f64) {
        let (u, w) = (field(&v), field(&w));
        let lu = frac_laplacian(&u, s).unwrap();
        let lw = frac_laplacian(&w, s).unwrap();
        let d = (lu.inner(&w).unwrap() - u.inner(&lw).unwrap()).norm();
        prop_assert!(d <= 1e-12 * lu.norm_l2(None) * w.norm_l2(None) + 1e-14);
    }

    #[test]
    fn nonnegative(v in values(), s in 0.05..1.0f64) {
        let u = field(&v);
        let q = frac_laplacian(&u, s).unwrap().inner(&u).unwrap();
        prop_assert!(q.re >= -1e-12 && q.im.abs() <= 1e-10 * q.re.abs().max(1.0));
    }

    #[test]
    fn order_one_is_minus_laplacian(v in values()) {
        let u = field(&v);
        let a = frac_laplacian(&u, 1.0).unwrap();
        let b = laplacian(&u).unwrap().scale_real(-1.0).unwrap();
        prop_assert!(a.sub(&b).unwrap().max_abs() <= 1e-11 * b.max_abs().max(1.0));
    }

    #[test]
    fn translation_commutes(v in values(), shift in 0usize..16) {
        let u = field(&v);
        let g = grid();
        let shifted = |f: &Field| {
            let vals = (0..g.len())
                .map(|k| {
                    let [i, j] = g.multi_index(k);
                    f.at(g.flat_index([(i + shift) % 16, j]))
                })
                .collect();
            Field::new(g.clone(), vals).unwrap()
        };
        let a = frac_laplacian(&shifted(&u), 0.4).unwrap();
        let b = shifted(&frac_laplacian(&u, 0.4).unwrap());
        prop_assert!(a.sub(&b).unwrap().max_abs() <= 1e-12 * b.max_abs().max(1.0));
    }
}
