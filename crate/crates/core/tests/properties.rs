use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rittcalc_core::diagnostics::{ritt_constant_refined, spectral_stolz, GridConfig};
use rittcalc_core::funclasses::{convex_eval, ConvexSeries, Series};
use rittcalc_core::linalg::{eigenvalues, operator_norm, resolvent, CMatrix};
use rittcalc_core::opcalc::{cayley_op, wiener_apply};
use rittcalc_core::regions::{cayley, stolz_index};
use rittcalc_core::suites::multiset_distance;
use std::f64::consts::PI;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| C64::new(a, b))
}

fn disc_point(rmax: f64) -> impl Strategy<Value = C64> {
    (0.0..1.0f64, -PI..PI).prop_map(move |(u, a)| C64::from_polar(rmax * u.sqrt(), a))
}

fn matrix(n: usize, scale: f64) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(complex(scale), n * n).prop_map(move |d| CMatrix::new(n, d).unwrap())
}

fn convex(len: usize) -> impl Strategy<Value = ConvexSeries> {
    proptest::collection::vec(0.01..1.0f64, 1..=len).prop_map(|w| ConvexSeries::normalized(&w).unwrap())
}

/// Householder reflector I − 2vv*/‖v‖².
fn reflector(v: &[C64]) -> CMatrix {
    let n = v.len();
    let s: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { ONE } else { C64::new(0.0, 0.0) };
            data.push(d - v[i] * v[j].conj() * (2.0 / s));
        }
    }
    CMatrix::new(n, data).unwrap()
}

fn max_entry(a: &CMatrix) -> f64 {
    a.max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn spectrum_shifts_with_identity(a in matrix(8, 1.0), s in complex(2.0)) {
        let ev = eigenvalues(&a).unwrap();
        let shifted: Vec<C64> = ev.iter().map(|l| l + s).collect();
        let got = eigenvalues(&a.shift(s)).unwrap();
        prop_assert!(multiset_distance(&got, &shifted) < 1e-10 * (1.0 + a.frobenius()));
    }

    #[test]
    fn eigenvalues_of_similarity(d in proptest::collection::vec(disc_point(1.0), 6), noise in matrix(6, 0.05)) {
        let v = noise.shift(ONE);
        let vinv = rittcalc_core::linalg::Lu::factor(&v).unwrap().inverse();
        let a = v.matmul(&CMatrix::from_diag(&d)).matmul(&vinv);
        prop_assert!(multiset_distance(&eigenvalues(&a).unwrap(), &d) < 1e-8);
    }

    #[test]
    fn operator_norm_unitarily_invariant(
        a in matrix(6, 1.0),
        u in proptest::collection::vec(complex(1.0), 6),
        v in proptest::collection::vec(complex(1.0), 6),
    ) {
        prop_assume!(u.iter().any(|x| x.norm() > 1e-3) && v.iter().any(|x| x.norm() > 1e-3));
        let b = reflector(&u).matmul(&a).matmul(&reflector(&v));
        let (na, nb) = (operator_norm(&a, 1e-12), operator_norm(&b, 1e-12));
        prop_assert!((na - nb).abs() <= 1e-9 * na.max(1.0));
    }

    #[test]
    fn first_resolvent_identity(a in matrix(5, 0.3), z in complex(1.0), w in complex(1.0)) {
        let z = z + C64::new(3.0, 0.0);
        let w = w - C64::new(3.0, 0.0);
        let rz = resolvent(&a, z).unwrap();
        let rw = resolvent(&a, w).unwrap();
        let lhs = rz.sub(&rw);
        let rhs = rz.matmul(&rw).scale(w - z);
        prop_assert!(max_entry(&lhs.sub(&rhs)) < 1e-9);
    }

    #[test]
    fn series_calculus_is_multiplicative(f in convex(6), g in convex(6), d in proptest::collection::vec(disc_point(1.0), 5)) {
        let t = CMatrix::from_diag(&d);
        let fg = wiener_apply(&Series::Convex(f.product(&g)), &t, 1e-14).unwrap().matrix;
        let a = wiener_apply(&Series::Convex(f), &t, 1e-14).unwrap().matrix;
        let b = wiener_apply(&Series::Convex(g), &t, 1e-14).unwrap().matrix;
        prop_assert!(max_entry(&fg.sub(&a.matmul(&b))) < 1e-12);
    }

    #[test]
    fn series_calculus_maps_spectrum(f in convex(6), d in proptest::collection::vec(disc_point(0.95), 5), noise in matrix(5, 0.05)) {
        let v = noise.shift(ONE);
        let vinv = rittcalc_core::linalg::Lu::factor(&v).unwrap().inverse();
        let t = v.matmul(&CMatrix::from_diag(&d)).matmul(&vinv);
        let ft = wiener_apply(&Series::Convex(f.clone()), &t, 1e-14).unwrap().matrix;
        let want: Vec<C64> = d.iter().map(|l| convex_eval(&f, *l, 1e-14).unwrap()).collect();
        prop_assert!(multiset_distance(&eigenvalues(&ft).unwrap(), &want) < 1e-7);
    }

    #[test]
    fn operator_cayley_is_involution(a in matrix(5, 0.15)) {
        let back = cayley_op(&cayley_op(&a).unwrap()).unwrap();
        prop_assert!(max_entry(&back.sub(&a)) < 1e-12);
    }

    #[test]
    fn scalar_cayley_is_involution(z in disc_point(0.999)) {
        let w = cayley(cayley(z).unwrap()).unwrap();
        prop_assert!((w - z).norm() < 1e-12 * (1.0 + 1.0 / (ONE + z).norm()));
    }

    #[test]
    fn ritt_constant_dominates_stolz_index(d in proptest::collection::vec(disc_point(0.98), 4)) {
        let t = CMatrix::from_diag(&d);
        let c = ritt_constant_refined(&t, &GridConfig::default()).unwrap();
        let s = spectral_stolz(&d).unwrap();
        prop_assert!(s <= c.value() + 1e-6, "stolz {} vs ritt {}", s, c.value());
        for w in c.rounds.windows(2) {
            prop_assert!(w[1].value >= w[0].value);
        }
    }

    #[test]
    fn stolz_index_at_least_one(z in disc_point(0.999)) {
        prop_assert!(stolz_index(z).unwrap() >= 1.0 - 1e-15);
    }
}
