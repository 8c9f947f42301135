use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rittcalc_core::funclasses::{bold_h_eval, random_convex_series, FunctionSpec};
use rittcalc_core::opcalc::{RqConfig, RqSolver};
use rittcalc_core::CMatrix;
use std::f64::consts::PI;

#[test]
fn rq_matches_entrywise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d: Vec<C64> = (0..16)
            .map(|_| C64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(-PI / 6.0..PI / 6.0)))
            .collect();
        let a = CMatrix::from_diag(&d);
        let len = rng.gen_range(2..10);
        let c = random_convex_series(&mut rng, len);
        let f = FunctionSpec::Convex(c.clone());
        let solver = RqSolver::new(&f, &a, &RqConfig::new(2.5)).unwrap();
        for k in 0..10 {
            let z = C64::from_polar(0.05 + 0.5 * k as f64, -PI / 4.0 + PI / 2.0 * (k as f64 + 0.5) / 10.0);
            let r = solver.resolvent(z).unwrap();
            let mut err = 0.0f64;
            let mut scale = 0.0f64;
            for (i, di) in d.iter().enumerate() {
                let o = 1.0 / (z + bold_h_eval(&c, *di).unwrap());
                err = err.max((r[(i, i)] - o).norm());
                scale = scale.max(o.norm());
            }
            worst = worst.max(err / scale);
        }
    }
    println!("worst relative error {worst:e}");
    assert!(worst < 1e-6);
}

fn sample_case(rng: &mut ChaCha8Rng) -> (Vec<C64>, rittcalc_core::funclasses::ConvexSeries) {
    let d: Vec<C64> = (0..16)
        .map(|_| C64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(-PI / 6.0..PI / 6.0)))
        .collect();
    let len = rng.gen_range(2..10);
    (d, random_convex_series(rng, len))
}

#[test]
fn rq_resolvent_obeys_sectoriality_bound() {
    use rittcalc_core::opcalc::{mq_estimate, sect_constant, SectConstant};
    use rittcalc_core::linalg::operator_norm;
    let q = 2.5;
    let gamma = PI / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..20 {
        let (d, c) = sample_case(&mut rng);
        let a = CMatrix::from_diag(&d);
        let mut mq = 0.0f64;
        for eps in [0.0, 1e-3, 1e-1, 1.0] {
            mq = mq.max(mq_estimate(&a, q, eps, 1e-8, 1e8, 400).unwrap());
        }
        let cq = sect_constant(&SectConstant::BoldH { q, gamma, mq, a_norm: operator_norm(&a, 1e-12) }).unwrap();
        let solver = RqSolver::new(&FunctionSpec::Convex(c), &a, &RqConfig::new(q)).unwrap();
        for k in 0..10 {
            let z = C64::from_polar(0.05 + 0.5 * k as f64, -gamma + 2.0 * gamma * (k as f64 + 0.5) / 10.0);
            let r = solver.resolvent(z).unwrap();
            let norm = operator_norm(&r, 1e-12);
            assert!(norm * z.norm() <= cq, "case {case} z={z}: |z|·‖R‖ = {} > c = {cq}", norm * z.norm());
        }
    }
}

#[test]
fn rq_error_drops_fourfold_per_node_doubling() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..5 {
        let (d, c) = sample_case(&mut rng);
        let a = CMatrix::from_diag(&d);
        let f = FunctionSpec::Convex(c.clone());
        let z = C64::from_polar(0.7, 0.3);
        let oracle: Vec<C64> = d.iter().map(|di| 1.0 / (z + bold_h_eval(&c, *di).unwrap())).collect();
        let scale = oracle.iter().map(|o| o.norm()).fold(0.0, f64::max);
        let mut errs = Vec::new();
        for nodes in [16usize, 32, 64, 128, 256] {
            let cfg = RqConfig { segment_nodes: nodes, circle_nodes: nodes, ..RqConfig::new(2.5) };
            let r = RqSolver::new(&f, &a, &cfg).unwrap().resolvent(z).unwrap();
            let e = d.iter().enumerate().map(|(i, _)| (r[(i, i)] - oracle[i]).norm()).fold(0.0, f64::max) / scale;
            errs.push(e);
        }
        for w in errs.windows(2) {
            assert!(w[1] <= w[0] / 4.0 || w[1] < 1e-11, "case {case}: errors {errs:?}");
        }
    }
}
