//! Cross-module invariants exercised through the public API only.

use fasol::fundsol::{
    delta_to_index, evaluate_q, geometry, singular_limit_constant, solution_params, DeltaVector,
    ProblemConfig,
};
use fasol::lauricella::{fa_decomposed, fa_direct, fa_recurrence, LauricellaParams};
use fasol::verify::singularity_fit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn xi_arguments_are_nonpositive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let m = rng.gen_range(2..=5usize);
        let n = rng.gen_range(1..=m.min(4));
        let alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.45)).collect();
        let cfg = ProblemConfig::new(m, n, alpha).unwrap();
        let x0: Vec<f64> = (0..m)
            .map(|i| {
                if i < n {
                    rng.gen_range(0.05..2.0)
                } else {
                    rng.gen_range(-2.0..2.0)
                }
            })
            .collect();
        let mut x = x0.clone();
        for (i, v) in x.iter_mut().enumerate() {
            let lo = if i < n { 0.05 } else { -2.0 };
            *v = rng.gen_range(lo..2.5f64.max(lo + 1.0));
        }
        if x == x0 {
            continue;
        }
        let (r2, rk2, xi) = geometry(&x, &x0, &cfg).unwrap();
        assert!(r2 > 0.0);
        for (k, (&xik, &rk2k)) in xi.iter().zip(&rk2).enumerate() {
            assert!(xik <= 0.0, "xi_{} = {xik} > 0", k + 1);
            assert!(rk2k >= r2, "r_k^2 < r^2 on axis {}", k + 1);
        }
    }
}

#[test]
fn q_is_symmetric_in_x_and_x0() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (m, n) in [(2usize, 1usize), (3, 1), (3, 2), (4, 3), (5, 2)] {
        let alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.45)).collect();
        let cfg = ProblemConfig::new(m, n, alpha).unwrap();
        for d in DeltaVector::all(n) {
            let x0: Vec<f64> = (0..m).map(|_| rng.gen_range(0.3..1.2)).collect();
            let mut x = x0.clone();
            for v in x.iter_mut() {
                *v += rng.gen_range(0.05..0.4);
            }
            let fwd = evaluate_q(&x, &x0, &cfg, &d, 1.0, 1e-12).unwrap();
            let bwd = evaluate_q(&x0, &x, &cfg, &d, 1.0, 1e-12).unwrap();
            assert!(
                rel(fwd.value, bwd.value) <= 1e-12,
                "symmetry m={m} n={n} delta {:?}: {} vs {}",
                d.delta(),
                fwd.value,
                bwd.value
            );
        }
    }
}

#[test]
fn newtonian_kernel_recovered_for_n_zero() {
    // n = 0 collapses the construction to gamma * (r^2)^{(2-m)/2}.
    for m in [3usize, 4, 5] {
        let cfg = ProblemConfig::new(m, 0, vec![]).unwrap();
        let d = DeltaVector::zeros(0);
        let x0: Vec<f64> = (0..m).map(|i| 0.3 * i as f64 - 0.4).collect();
        let x: Vec<f64> = x0.iter().map(|v| v + 0.35).collect();
        let r2: f64 = x.iter().zip(&x0).map(|(a, b)| (a - b) * (a - b)).sum();
        let expected = 2.5 * r2.powf(-((m as f64) - 2.0) / 2.0);
        let q = evaluate_q(&x, &x0, &cfg, &d, 2.5, 1e-13).unwrap();
        assert!(
            rel(q.value, expected) <= 1e-13,
            "m={m}: {} vs {}",
            q.value,
            expected
        );
    }
}

#[test]
fn three_lauricella_evaluators_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..=4usize {
        for _ in 0..10 {
            let a = rng.gen_range(0.2..1.8);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.8)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.6..2.4)).collect();
            let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let s: f64 = x.iter().map(|v| v.abs()).sum();
            let scale = rng.gen_range(0.1..0.5) / s.max(1e-12);
            for v in x.iter_mut() {
                *v *= scale;
            }
            let p = LauricellaParams::new(a, b, c, x);
            let deg = if n <= 3 { 40 } else { 30 };
            let direct = fa_direct(&p, 1e-11, 150).unwrap();
            let dec = fa_decomposed(&p, 1e-11, deg).unwrap();
            let rec = fa_recurrence(&p, 1e-11, deg).unwrap();
            assert!(rel(direct.value, dec.value) <= 1e-8, "direct vs decomposed");
            assert!(rel(direct.value, rec.value) <= 1e-8, "direct vs recurrence");
        }
    }
}

#[test]
fn singularity_order_matches_dimension() {
    // Spot checks across m; the acceptance suite sweeps the full matrix.
    // Directions are transverse to the singular axes so the axis prefactors
    // stay constant along the ladder and only the radial order is measured;
    // the singular coordinates balance sub-leading drift (wants them large)
    // against the near-singularity series cost (wants them small).
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (m, n) in [(3usize, 0usize), (4, 1), (5, 2)] {
        let alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..0.4)).collect();
        let cfg = ProblemConfig::new(m, n, alpha).unwrap();
        let coord = if n == 2 { 0.12 } else { 0.6 };
        let x0: Vec<f64> = (0..m)
            .map(|i| {
                if i < n {
                    coord
                } else {
                    rng.gen_range(0.2..0.8)
                }
            })
            .collect();
        let dir: Vec<f64> = (0..m)
            .map(|i| if i < n { 0.0 } else { rng.gen_range(0.2..1.0) })
            .collect();
        for d in DeltaVector::all(n) {
            let slope = singularity_fit(&cfg, &x0, &dir, &d, 1.0).unwrap();
            let want = -((m as f64) - 2.0);
            assert!(
                (slope - want).abs() <= 0.01 * want.abs(),
                "m={m} n={n} delta {:?}: slope {slope}, want {want}",
                d.delta()
            );
        }
    }
}

#[test]
fn limit_constant_matches_near_singularity() {
    // r^{m-2} * prod r_k^{2 B_k} * q_k / gamma approaches the closed-form
    // constant; instantiated for n <= 1 where the product form is exact.
    for (m, n, alpha) in [
        (3usize, 0usize, vec![]),
        (4, 0, vec![]),
        (3, 1, vec![0.25]),
        (4, 1, vec![0.35]),
    ] {
        let cfg = ProblemConfig::new(m, n, alpha).unwrap();
        let mut x0 = vec![0.6; m];
        if n >= 1 {
            x0[0] = 1.0;
        }
        for d in DeltaVector::all(n) {
            let c = singular_limit_constant(&cfg, &d).unwrap();
            let params = solution_params(&cfg, &d, 1.0).unwrap();
            let s = 2f64.powi(-12);
            let mut x = x0.clone();
            x[m - 1] += s;
            let q = evaluate_q(&x, &x0, &cfg, &d, 1.0, 1e-13).unwrap();
            let (r2, rk2, _) = geometry(&x, &x0, &cfg).unwrap();
            let mut lhs = q.value * r2.powf((m as f64 - 2.0) / 2.0);
            for (j, &b) in params.b_k.iter().enumerate() {
                lhs *= rk2[j].powf(b);
            }
            // Remove the axis prefactor for delta_j = 1 components.
            for j in 0..n {
                if d.delta()[j] == 1 {
                    lhs /= (x[j] * x0[j]).powf(1.0 - 2.0 * cfg.alpha()[j]);
                }
            }
            assert!(
                rel(lhs, c) <= 1e-4,
                "m={m} n={n} delta {:?}: observed {lhs}, constant {c}",
                d.delta()
            );
        }
    }
}

#[test]
fn delta_index_bijection() {
    for n in 0..=10usize {
        let mut seen = vec![false; 1 << n];
        for d in DeltaVector::all(n) {
            let k = delta_to_index(&d);
            assert!(k >= 1 && k <= 1 << n);
            assert!(!seen[k - 1], "index {k} hit twice for n={n}");
            seen[k - 1] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
