mod common;

use common::*;
use probframe::duals::{
    approx_dual_pushforward, bound_inequalities, certify, pushforward_dual, pushforward_family, Classification,
    EXACT_TOL,
};
use probframe::fixtures::{self, mu_k};
use probframe::frames::{analyze, canonical_dual, frame_operator, TIGHT_RTOL};
use probframe::measures::{mixture, COALESCE_TOL};
use probframe::numerics::{eig_sym, numeric_rank, spectral_norm};
use probframe::perturbation::{
    discrete_dual_pipeline, matched_mixed_dual, perturbed_approx_dual, perturbed_frame_bound, Assertion, EtaSource,
    PipelineConfig,
};
use probframe::redundancy::{redundancy_rank, redundancy_trace};
use probframe::transport::{glue, optimize_mixed_operator, solve_w2, w2_bruteforce};
use probframe::{Coupling, DiscreteMeasure, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rect(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    (0..rows).map(|_| gaussian_vec(rng, cols)).collect()
}

fn cloud(rng: &mut ChaCha8Rng, n: usize, count: usize) -> DiscreteMeasure {
    DiscreteMeasure::new((0..count).map(|_| gaussian_vec(rng, n)).collect(), random_weights(rng, count)).unwrap()
}

fn uniform_cloud(rng: &mut ChaCha8Rng, n: usize, count: usize) -> DiscreteMeasure {
    DiscreteMeasure::uniform((0..count).map(|_| gaussian_vec(rng, n)).collect()).unwrap()
}

fn dev_of(c: &Coupling) -> f64 {
    let m = mixed_op(c.source().atoms(), c.target().atoms(), c.plan());
    op_norm(&minus(&m, &eye(m.len())))
}

/// Orthonormal basis by Gram-Schmidt on Gaussian vectors.
fn orthonormal(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut basis: Mat = Vec::new();
    while basis.len() < n {
        let mut v = gaussian_vec(rng, n);
        for b in &basis {
            let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-3 {
            basis.push(v.iter().map(|x| x / len).collect());
        }
    }
    basis
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eig_sym_reconstructs(seed: u64, n in 1usize..7) {
        let mut r = rng(seed);
        let g = rect(&mut r, n, n);
        let sym = to_matrix(&g).add(&to_matrix(&tr(&g))).unwrap();
        let spectrum = eig_sym(&sym).unwrap();
        let scale = 1.0 + sym.frobenius_norm();
        prop_assert!(spectrum.reconstruct().max_abs_diff(&sym) <= 1e-9 * scale);
        let v = to_mat(&spectrum.eigenvectors);
        prop_assert!(max_diff(&mul(&tr(&v), &v), &Matrix::identity(n)) <= 1e-10);
        for (k, &lambda) in spectrum.eigenvalues.iter().enumerate() {
            let col = spectrum.eigenvectors.column(k);
            let av = sym.apply(&col);
            let resid = av.iter().zip(&col).map(|(a, c)| (a - lambda * c).abs()).fold(0.0, f64::max);
            prop_assert!(resid <= 1e-9 * scale);
        }
        prop_assert!(spectrum.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn spectral_norm_is_transpose_invariant(seed: u64, rows in 1usize..6, cols in 1usize..6) {
        let mut r = rng(seed);
        let m = to_matrix(&rect(&mut r, rows, cols));
        let a = spectral_norm(&m);
        prop_assert!((a - spectral_norm(&m.transpose())).abs() <= 1e-9 * (1.0 + a));
        prop_assert!((a - op_norm(&to_mat(&m))).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn rank_plus_nullity(seed: u64, rows in 1usize..7, cols in 1usize..7, k in 1usize..7) {
        let k = k.min(rows).min(cols);
        let mut r = rng(seed);
        let m = mul(&rect(&mut r, rows, k), &rect(&mut r, k, cols));
        let rank = numeric_rank(&to_matrix(&m), None);
        prop_assert_eq!(rank, k);
        prop_assert_eq!(rank, common::rank(&m, 1e-10));
        prop_assert_eq!(cols - rank, cols - k);
    }

    #[test]
    fn pushforward_second_moment_bound(seed: u64, n in 1usize..5, count in 1usize..8) {
        let mut r = rng(seed);
        let mu = cloud(&mut r, n, count);
        let a = to_matrix(&rect(&mut r, n, n));
        let pushed = mu.pushforward_linear(&a).unwrap();
        let norm = spectral_norm(&a);
        prop_assert!(pushed.second_moment() <= norm * norm * mu.second_moment() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn pushforward_composes(seed: u64, n in 1usize..5, count in 1usize..8) {
        let mut r = rng(seed);
        let mu = cloud(&mut r, n, count);
        let a = to_matrix(&rect(&mut r, n, n));
        let b = to_matrix(&rect(&mut r, n, n));
        let direct = mu.pushforward_linear(&a.matmul(&b).unwrap()).unwrap();
        let nested = mu.pushforward_linear(&b).unwrap().pushforward_linear(&a).unwrap();
        prop_assert!(direct.same_measure(&nested, 1e-12));
    }

    #[test]
    fn mixture_mass_is_one(seed: u64, n in 1usize..4, parts in 1usize..5) {
        let mut r = rng(seed);
        let measures: Vec<DiscreteMeasure> = (0..parts)
            .map(|_| {
                let k = r.random_range(1..5);
                cloud(&mut r, n, k)
            })
            .collect();
        let w = random_weights(&mut r, parts);
        let mix = mixture(&measures, &w).unwrap().coalesced();
        prop_assert!((mix.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(mix.weights().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn quadratic_form_identity(seed: u64, n in 1usize..5, count in 1usize..9) {
        let mut r = rng(seed);
        let mu = cloud(&mut r, n, count);
        let s = frame_operator(&mu);
        let x = gaussian_vec(&mut r, n);
        let direct: f64 = mu.iter().map(|(a, w)| w * a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>().powi(2)).sum();
        let quad: f64 = s.apply(&x).iter().zip(&x).map(|(p, q)| p * q).sum();
        prop_assert!((direct - quad).abs() <= 1e-10 * (1.0 + direct));
    }

    #[test]
    fn canonical_dual_frame_operator_is_inverse(seed: u64, n in 1usize..5, extra in 0usize..5) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 100.0);
        let s_inv = gj_inverse(&frame_op(&mu)).unwrap();
        let (nu, c) = canonical_dual(&mu).unwrap();
        prop_assert!(max_diff(&s_inv, &frame_operator(&nu)) <= 1e-9);
        prop_assert_eq!(certify(&c, EXACT_TOL).classification, Classification::Exact);
    }

    #[test]
    fn redundancy_routes_agree(seed: u64, n in 1usize..5, extra in 0usize..8) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 1e4);
        let rank = redundancy_rank(&mu, None);
        prop_assert_eq!(rank, extra);
        prop_assert!((redundancy_trace(&mu).unwrap() - rank as f64).abs() <= 1e-8);
        let reweighted = DiscreteMeasure::new(mu.atoms().to_vec(), random_weights(&mut r, mu.len())).unwrap();
        prop_assert_eq!(redundancy_rank(&reweighted, None), rank);
    }

    #[test]
    fn simplex_matches_brute_force(seed: u64, n in 1usize..4, count in 1usize..7) {
        let mut r = rng(seed);
        let a = uniform_cloud(&mut r, n, count);
        let b = uniform_cloud(&mut r, n, count);
        let fast = solve_w2(&a, &b).unwrap();
        prop_assert!((fast.w2 - w2_bruteforce(&a, &b).unwrap().w2).abs() <= 1e-9);
        prop_assert_eq!(fast.plan.transport_cost(), fast.cost);
        prop_assert!((fast.w2 - fast.cost.sqrt()).abs() <= 1e-15);
    }

    #[test]
    fn w2_triangle_inequality(seed: u64, n in 1usize..4, k1 in 1usize..9, k2 in 1usize..9, k3 in 1usize..9) {
        let mut r = rng(seed);
        let a = cloud(&mut r, n, k1);
        let b = cloud(&mut r, n, k2);
        let c = cloud(&mut r, n, k3);
        let ab = solve_w2(&a, &b).unwrap().w2;
        let bc = solve_w2(&b, &c).unwrap().w2;
        let ac = solve_w2(&a, &c).unwrap().w2;
        prop_assert!(ac <= ab + bc + 1e-8);
    }

    #[test]
    fn w2_plan_is_feasible(seed: u64, n in 1usize..4, k1 in 1usize..12, k2 in 1usize..12) {
        let mut r = rng(seed);
        let a = cloud(&mut r, n, k1);
        let b = cloud(&mut r, n, k2);
        let plan = solve_w2(&a, &b).unwrap().plan;
        let p = plan.plan();
        for i in 0..k1 {
            prop_assert!(((0..k2).map(|j| p[(i, j)]).sum::<f64>() - a.weight(i)).abs() <= 1e-10);
        }
        for j in 0..k2 {
            prop_assert!(((0..k1).map(|i| p[(i, j)]).sum::<f64>() - b.weight(j)).abs() <= 1e-10);
        }
        prop_assert!(p.as_slice().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn glued_graph_couplings_compose(seed: u64, n in 1usize..4, count in 1usize..7) {
        let mut r = rng(seed);
        let mu = cloud(&mut r, n, count);
        let a = rect(&mut r, n, n);
        let b = rect(&mut r, n, n);
        let first = Coupling::linear_graph(&mu, &to_matrix(&a)).unwrap();
        let second = Coupling::linear_graph(first.target(), &to_matrix(&b)).unwrap();
        let glued = glue(&first, &second).unwrap();
        // Σ w x (BAx)ᵗ = S (BA)ᵗ
        let expected = mul(&frame_op(&mu), &tr(&mul(&b, &a)));
        let scale = 1.0 + expected.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
        prop_assert!(max_diff(&expected, &glued.mixed_frame_operator()) <= 1e-10 * scale);
    }

    #[test]
    fn canonical_pair_glues_to_identity(seed: u64, n in 1usize..4, count in 1usize..7) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + count, 100.0);
        let (_, c) = canonical_dual(&mu).unwrap();
        // x → S⁻¹x → x, so the round trip is the diagonal coupling of μ
        let back = glue(&c, &c.transpose()).unwrap();
        let s = frame_op(&mu);
        let scale = 1.0 + s.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(max_diff(&s, &back.mixed_frame_operator()) <= 1e-12 * scale);
    }

    #[test]
    fn certificate_marginal_is_a_frame(seed: u64, n in 1usize..4, extra in 0usize..5, kind in 0usize..3) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 100.0);
        let a = match kind {
            0 => eye(n),
            1 => { let q = r.random_range(0.05..0.95); near_identity(&mut r, n, q) }
            _ => rect(&mut r, n, n),
        };
        prop_assume!(gj_inverse(&a).is_some_and(|i| op_norm(&i) * op_norm(&a) < 1e3));
        let (nu, c) = pushforward_family(&mu, &to_matrix(&a), None).unwrap();
        let cert = certify(&c, EXACT_TOL);
        prop_assert!(cert.classification.is_dual());
        let report = analyze(&nu, TIGHT_RTOL);
        prop_assert!(report.is_frame);
        let inv_norm = op_norm(&gj_inverse(&a).unwrap());
        let guarantee = 1.0 / (top_eig_psd(&frame_op(&mu)) * inv_norm * inv_norm);
        prop_assert!(report.lower_bound >= guarantee - 1e-8);
        let dual_low = cert.dual_lower_bound.unwrap();
        prop_assert!((dual_low - guarantee).abs() <= 1e-8 * (1.0 + guarantee));
    }

    #[test]
    fn pushforward_dual_is_exact_for_any_h(seed: u64, n in 1usize..5, extra in 0usize..5, scale in 0.0f64..10.0) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 100.0);
        let h: Vec<Vec<f64>> = (0..mu.len()).map(|_| gaussian_vec(&mut r, n).iter().map(|v| v * scale).collect()).collect();
        let (_, c) = pushforward_dual(&mu, &h).unwrap();
        prop_assert!(dev_of(&c) <= 1e-9);
        prop_assert!(certify(&c, EXACT_TOL).deviation <= 1e-9);
    }

    #[test]
    fn certify_is_monotone_in_tol(seed: u64, n in 1usize..4, count in 1usize..6, t1 in -16.0f64..0.5, t2 in -16.0f64..0.5) {
        let mut r = rng(seed);
        let mu = cloud(&mut r, n, count);
        let nu = cloud(&mut r, n, count);
        let c = Coupling::product(&mu, &nu).unwrap();
        let (tight, loose) = (10f64.powf(t1.min(t2)), 10f64.powf(t1.max(t2)));
        // Exact < Approximate < Pseudo < None
        prop_assert!(certify(&c, tight).classification >= certify(&c, loose).classification);
        let (_, graph) = approx_dual_pushforward(&random_frame(&mut r, n, n + count, 100.0), &to_matrix(&eye(n))).unwrap();
        prop_assert!(certify(&graph, tight).classification >= certify(&graph, loose).classification);
    }

    #[test]
    fn approximate_pair_bound_slacks(seed: u64, n in 1usize..4, extra in 0usize..5, q in 0.01f64..0.99) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 100.0);
        let a = near_identity(&mut r, n, q);
        let (_, c) = approx_dual_pushforward(&mu, &to_matrix(&a)).unwrap();
        let b = bound_inequalities(&c).unwrap();
        prop_assert!(b.nu_slack >= -1e-10 * (1.0 + b.nu_lower_guarantee));
        prop_assert!(b.mu_slack >= -1e-10 * (1.0 + b.mu_lower_guarantee));
    }

    #[test]
    fn frank_wolfe_residual_never_increases(seed: u64, n in 1usize..3, k1 in 1usize..6, k2 in 1usize..6) {
        let mut r = rng(seed);
        let mu = cloud(&mut r, n, k1);
        let nu = cloud(&mut r, n, k2);
        let fit = optimize_mixed_operator(&mu, &nu, &Matrix::identity(n), 300, 1e-8).unwrap();
        prop_assert!(fit.history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15));
        prop_assert!(fit.duality_gap <= 1e-8 || fit.iterations == 300);
        let m = mixed_op(fit.coupling.source().atoms(), fit.coupling.target().atoms(), fit.coupling.plan());
        let resid = minus(&m, &eye(n)).iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((resid - fit.residual).abs() <= 1e-9 * (1.0 + resid));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sampled_quadratic_extremes_respect_bounds(seed: u64, n in 1usize..4, extra in 0usize..4) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 100.0);
        let report = analyze(&mu, TIGHT_RTOL);
        let s = frame_op(&mu);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..10_000 {
            let x = gaussian_vec(&mut r, n);
            let len2: f64 = x.iter().map(|v| v * v).sum();
            let q = mat_vec(&s, &x).iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() / len2;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        prop_assert!(lo >= report.lower_bound - 1e-8);
        prop_assert!(hi <= report.upper_bound + 1e-8);
        if n <= 2 {
            prop_assert!(lo <= report.lower_bound + 1e-3 * report.upper_bound);
            prop_assert!(hi >= report.upper_bound - 1e-3 * report.upper_bound);
        }
    }

    #[test]
    fn tight_frame_canonical_dual_is_scaled(seed: u64, n in 1usize..5, c in 0.2f64..5.0) {
        let mut r = rng(seed);
        let q = orthonormal(&mut r, n);
        let atoms: Vec<Vec<f64>> = q.iter().flat_map(|b| {
            let plus: Vec<f64> = b.iter().map(|v| c * v).collect();
            let minus: Vec<f64> = plus.iter().map(|v| -v).collect();
            [plus, minus]
        }).collect();
        let mu = DiscreteMeasure::uniform(atoms).unwrap();
        let report = analyze(&mu, TIGHT_RTOL);
        prop_assert!(report.is_tight);
        let a = c * c / n as f64;
        prop_assert!((report.lower_bound - a).abs() <= 1e-12 * (1.0 + a));
        let (nu, _) = canonical_dual(&mu).unwrap();
        prop_assert!(max_diff(&eye(n).iter().map(|r| r.iter().map(|v| v / a).collect()).collect(), &frame_operator(&nu)) <= 1e-9 * (1.0 + 1.0 / a));
        let scaled = mu.pushforward_linear(&Matrix::identity(n).scale(1.0 / a)).unwrap();
        prop_assert!(nu.same_measure(&scaled, 1e-10));
    }

    #[test]
    fn perturbed_frame_bound_holds(seed: u64, n in 1usize..4, extra in 1usize..6, noise in 0.0f64..1.0) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 50.0);
        let eta = DiscreteMeasure::new(
            mu.atoms().iter().map(|x| x.iter().map(|v| v + noise * r.random_range(-1.0..1.0)).collect()).collect(),
            random_weights(&mut r, mu.len()),
        ).unwrap();
        let rep = perturbed_frame_bound(&mu, &eta, None).unwrap();
        prop_assert!(rep.lambda >= 0.0);
        prop_assert_eq!(rep.flags.quadratic_closeness, Some(rep.lambda < rep.base_lower_bound));
        if rep.flags.quadratic_closeness == Some(true) {
            let floor = (rep.base_lower_bound.sqrt() - rep.lambda.sqrt()).powi(2);
            prop_assert!(min_eig_pd(&frame_op(&eta)) >= floor - 1e-8);
            prop_assert_eq!(rep.assertion, Assertion::Holds);
        } else {
            prop_assert_eq!(rep.assertion, Assertion::NotApplicable);
        }
    }

    #[test]
    fn glued_deviation_under_optimal_plan(seed: u64, n in 1usize..4, extra in 1usize..6, k in 1usize..8, noise in 0.0f64..0.6) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 50.0);
        let eta = DiscreteMeasure::new(
            (0..k).map(|i| mu.atom(i % mu.len()).iter().map(|v| v + noise * r.random_range(-1.0..1.0)).collect()).collect(),
            random_weights(&mut r, k),
        ).unwrap();
        let pi = solve_w2(&eta, &mu).unwrap().plan;
        let (_, dual) = canonical_dual(&mu).unwrap();
        let rep = perturbed_approx_dual(&mu, &dual, &eta, &pi, EXACT_TOL).unwrap();
        let dev = rep.certificate.as_ref().unwrap().deviation;
        let glued = glue(&pi, &dual).unwrap();
        prop_assert!((dev_of(&glued) - dev).abs() <= 1e-9);
        let flags = rep.flags;
        if flags.quadratic_closeness == Some(true) && flags.ac_le_one == Some(true) {
            let ac = rep.base_lower_bound * rep.dual_upper_bound.unwrap();
            prop_assert!(dev < ac.sqrt() + 1e-9);
            prop_assert_eq!(rep.assertion, Assertion::Holds);
        }
    }

    #[test]
    fn matched_mixed_dual_reproduces_base(seed: u64, n in 1usize..4, extra in 1usize..6, q in 0.01f64..0.99, noise in 0.0f64..0.3) {
        let mut r = rng(seed);
        let mu = random_frame(&mut r, n, n + extra, 50.0);
        let target = near_identity(&mut r, n, q);
        let (_, base) = approx_dual_pushforward(&mu, &to_matrix(&target)).unwrap();
        let eta = DiscreteMeasure::new(
            mu.atoms().iter().map(|x| x.iter().map(|v| v + noise * r.random_range(-1.0..1.0)).collect()).collect(),
            mu.weights().to_vec(),
        ).unwrap();
        let pi = solve_w2(&eta, &mu).unwrap().plan;
        prop_assume!(pi.transport_cost() < min_eig_pd(&frame_op(&mu)));
        let (_, xc) = matched_mixed_dual(&mu, &base, &eta, &pi, EXACT_TOL).unwrap();
        let m = mixed_op(xc.source().atoms(), xc.target().atoms(), xc.plan());
        let d = m.iter().flatten().zip(target.iter().flatten()).fold(0.0f64, |s, (p, q)| s.max((p - q).abs()));
        prop_assert!(d <= 1e-9);
    }
}

#[test]
fn redundancy_is_not_continuous_in_w2() {
    let delta1 = fixtures::measure("delta1").unwrap();
    assert_eq!(redundancy_rank(&delta1, None), 0);
    let mut last = f64::INFINITY;
    for k in 1..=200u32 {
        let mk = mu_k(k);
        assert_eq!(redundancy_rank(&mk, None), 1, "k = {k}");
        let w2 = solve_w2(&mk, &delta1).unwrap().w2;
        assert!(w2 < last);
        last = w2;
    }
    assert!(last < 5e-3);
}

#[test]
fn scalar_glued_deviation_shrinks_with_k() {
    let delta1 = fixtures::measure("delta1").unwrap();
    let (_, dual) = canonical_dual(&delta1).unwrap();
    let mut last = f64::INFINITY;
    for k in 1..=20u32 {
        let mk = mu_k(k);
        let pi =
            Coupling::new(mk.clone(), delta1.clone(), Matrix::from_rows(vec![vec![0.5], vec![0.5]]).unwrap()).unwrap();
        let rep = perturbed_approx_dual(&delta1, &dual, &mk, &pi, EXACT_TOL).unwrap();
        let dev = rep.certificate.unwrap().deviation;
        assert!(dev < last, "k = {k}: {dev} !< {last}");
        // glued operator is ½(1 + 1 − 1/(k+1)), deviation 1/(2(k+1))
        assert!((dev - 0.5 / (k as f64 + 1.0)).abs() <= 1e-15);
        last = dev;
    }
}

#[test]
fn coalescing_tolerance_merges_duplicates() {
    let m = DiscreteMeasure::new(vec![vec![1.0], vec![1.0 + COALESCE_TOL / 10.0], vec![2.0]], vec![0.25, 0.25, 0.5])
        .unwrap();
    assert_eq!(redundancy_rank(&m, None), 1);
    assert_eq!(m.coalesced().len(), 2);
}

#[test]
fn larger_subsample_can_increase_w2() {
    // two tight clusters of two atoms each: two atoms (one per cluster) are
    // almost exact, while any three put mass 2/3 on one cluster
    let atoms = vec![vec![0.0, 0.0], vec![0.0, 0.01], vec![1.0, 0.0], vec![1.0, 0.01]];
    let eta = DiscreteMeasure::uniform(atoms.clone()).unwrap();
    let best = |size: usize| {
        (0..1usize << atoms.len())
            .filter(|mask| mask.count_ones() as usize == size)
            .map(|mask| {
                let pick = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect();
                solve_w2(&eta, &DiscreteMeasure::uniform(pick).unwrap()).unwrap().w2
            })
            .fold(f64::INFINITY, f64::min)
    };
    assert!(best(2) < 0.01);
    assert!(best(3) > 0.3);
    let greedy2 = discrete_dual_pipeline(EtaSource::Discrete(&eta), &PipelineConfig::new(2, 1)).unwrap().w2;
    let greedy3 = discrete_dual_pipeline(EtaSource::Discrete(&eta), &PipelineConfig::new(3, 1)).unwrap().w2;
    assert!(greedy2 < greedy3);
}

#[test]
fn greedy_w2_on_cloud_shrinks_over_a_coarse_grid() {
    let eta = fixtures::gaussian_cloud(40, 11);
    let mut last = f64::INFINITY;
    for n in [2, 5, 10, 20, 40] {
        let out = discrete_dual_pipeline(EtaSource::Discrete(&eta), &PipelineConfig::new(n, 3)).unwrap();
        assert!(out.w2 <= last + 1e-12, "N = {n}: {} > {last}", out.w2);
        last = out.w2;
    }
    assert!(last <= 1e-12);
}
