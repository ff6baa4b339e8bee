//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crn_core::corpus;
use crn_core::dsr::{self, DsrOptions};
use crn_core::homeostasis::{self, VerdictKind};
use crn_core::injectivity::{self, InjectivityVerdict, DEFAULT_SUBSET_CAP};
use crn_core::massaction;
use crn_core::model::ReactionNetwork;
use crn_core::numeric::{self, PointKind, SweepOptions};
use crn_core::parser::parse_network;
use crn_core::poly::SparsePolynomial;

fn pass(criterion: usize, detail: &str) {
    println!("ACCEPTANCE criterion {criterion}: PASS ({detail})");
}

fn find_subset_product(
    net: &ReactionNetwork,
    reactions: &[(&[u32], &[u32])],
) -> injectivity::SubsetProduct {
    let products = injectivity::subset_products(net, DEFAULT_SUBSET_CAP).unwrap();
    let mut indices: Vec<usize> = reactions
        .iter()
        .map(|(src, tgt)| {
            net.reactions()
                .iter()
                .position(|r| r.source.coeffs() == *src && r.target.coeffs() == *tgt)
                .expect("reaction present in the network")
        })
        .collect();
    indices.sort_unstable();
    products
        .into_iter()
        .find(|p| p.subset == indices)
        .expect("subset enumerated")
}

#[test]
fn criterion_1_g1_structural_verdict() {
    let started = Instant::now();
    let g1 = parse_network(corpus::G1).unwrap();
    let verdict = homeostasis::structural_verdict(&g1, DsrOptions::default()).unwrap();
    assert_eq!(verdict.kind, VerdictKind::NoInfinitesimalHomeostasis);

    let assoc = homeostasis::associated_network(&g1).unwrap();
    let witness = find_subset_product(
        &assoc.network,
        &[
            (&[1, 1, 0, 0], &[1, 0, 0, 0]), // X1 + X2 -> X1
            (&[0, 1, 1, 0], &[0, 0, 0, 0]), // X2 + X3 -> 0
            (&[0, 0, 1, 1], &[0, 0, 0, 0]), // X3 + X4 -> 0
            (&[0, 0, 0, 1], &[1, 0, 0, 0]), // X4 -> X1
        ],
    );
    assert_eq!(witness.product, 1.into());

    let graph = dsr::build_dsr(&assoc.network, false);
    let cycles = dsr::enumerate_cycles(&graph, dsr::DEFAULT_CYCLE_CAP).unwrap();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].parity, dsr::Parity::O);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        1,
        "G1 verdict NO_INFINITESIMAL_HOMEOSTASIS, witness product +1, one o-cycle",
    );
}

#[test]
fn criterion_2_enzyme_dsr_criterion() {
    let started = Instant::now();
    let net = parse_network(corpus::ENZYME).unwrap();
    let report = dsr::dsr_criterion(&net, DsrOptions::default()).unwrap();
    assert!(report.passes);
    assert_eq!(report.cycles.len(), 2);
    for c in &report.cycles {
        assert_eq!(c.parity, dsr::Parity::E);
        assert!(c.s_cycle);
    }

    // shared edges of the two cycles: one component of two edges, even
    let graph = dsr::build_dsr(&net, false);
    let shared: Vec<usize> = report.cycles[0]
        .steps
        .iter()
        .map(|s| s.edge)
        .filter(|e| report.cycles[1].steps.iter().any(|s| s.edge == *e))
        .collect();
    assert_eq!(shared.len(), 2);
    let endpoints: std::collections::BTreeSet<usize> = shared
        .iter()
        .flat_map(|&e| {
            let edge = &graph.edges[e];
            [edge.species, graph.n_species + edge.reaction_node]
        })
        .collect();
    assert_eq!(endpoints.len(), 3); // a two-edge path: one component
    assert!(!dsr::odd_intersection(
        &graph,
        &report.cycles[0],
        &report.cycles[1]
    ));

    // the four-reaction subset worked out in the narrative
    let witness = find_subset_product(
        &net,
        &[
            (&[1, 1, 0, 0], &[0, 0, 1, 0]), // E + S -> ES
            (&[0, 0, 1, 0], &[1, 0, 0, 1]), // ES -> E + P
            (&[1, 0, 0, 0], &[0, 0, 0, 0]), // E -> 0
            (&[0, 0, 0, 1], &[0, 0, 0, 0]), // P -> 0
        ],
    );
    assert_eq!(num_traits::sign::abs(witness.product.clone()), 1.into());

    let inj = injectivity::injectivity_verdict(&net, DEFAULT_SUBSET_CAP).unwrap();
    assert_eq!(inj.verdict, InjectivityVerdict::Injective);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        2,
        "enzyme network: 2 e/s-cycles, even intersection, product ±1, INJECTIVE",
    );
}

#[test]
fn criterion_3_g2_undetermined_with_located_point() {
    let started = Instant::now();
    let g2 = parse_network(corpus::G2).unwrap();
    let verdict = homeostasis::structural_verdict(&g2, DsrOptions::default()).unwrap();
    assert_eq!(verdict.kind, VerdictKind::Undetermined);
    let dsr_report = verdict.dsr.as_ref().unwrap();
    assert!(dsr_report.condition3);
    assert!(!dsr_report.passes);

    // det B = x3 - 2 x1 x3 at unit rates, as a canonical polynomial
    let b = homeostasis::minor_b(&g2);
    let det = b
        .substitute_rates(&massaction::uniform_rates(g2.n_reactions(), 1))
        .determinant()
        .unwrap();
    let expected = SparsePolynomial::from_int_terms(
        3,
        g2.n_reactions(),
        &[
            (1, &[0, 0, 1], &[0, 0, 0, 0, 0, 0, 0, 0]),
            (-2, &[1, 0, 1], &[0, 0, 0, 0, 0, 0, 0, 0]),
        ],
    );
    assert_eq!(det, expected);

    // the equilibrium branch: x1 = z, x2 = z^2, and x3 = 1 + x1 - x2 from
    // the factor (1 + x1 - x2 - x3) of the x3 equation
    let sweep =
        numeric::branch_sweep(&g2, &[], Some(1.0), 0.25, 1.0, 16, SweepOptions::default()).unwrap();
    assert_eq!(sweep.samples.len(), 16);
    for s in &sweep.samples {
        let z = s.zeta;
        assert!((s.equilibrium.x[0] - z).abs() <= 1e-8);
        assert!((s.equilibrium.x[1] - z * z).abs() <= 1e-8);
        assert!((s.equilibrium.x[2] - (1.0 + z - z * z)).abs() <= 1e-8);
    }

    let (points, _) = numeric::locate_homeostasis_points(&g2, &[], Some(1.0), &sweep).unwrap();
    assert_eq!(points.len(), 1);
    let p = &points[0];
    assert!(matches!(p.kind, PointKind::Infinitesimal));
    assert!((p.zeta_star - 0.5).abs() <= 1e-6);
    assert!((p.x_star[0] - 0.5).abs() <= 1e-8);
    assert!((p.x_star[1] - 0.25).abs() <= 1e-8);
    assert!((p.x_star[2] - 1.25).abs() <= 1e-8);
    assert!(p.stable);

    // spectrum at the located point; the third eigenvalue is the Jacobian
    // entry 1 + x1 - x2 - 2*x3 = -5/4 on the branch at zeta = 1/2
    let (eigs, stable) =
        numeric::stability_spectrum(&g2, &[], Some(1.0), &p.x_star, p.zeta_star).unwrap();
    assert!(stable);
    let s3 = 3f64.sqrt();
    let expected_eigs = [-2.0 - s3, -1.25, -2.0 + s3];
    assert_eq!(eigs.len(), 3);
    for (e, want) in eigs.iter().zip(expected_eigs) {
        assert!((e.re - want).abs() <= 1e-8, "{} vs {want}", e.re);
        assert!(e.im.abs() <= 1e-10);
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(
        3,
        "G2 UNDETERMINED, det B = x3 - 2 x1 x3, branch tracked, point at zeta* = 1/2",
    );
}

#[test]
fn criterion_4_g3_perfect_homeostasis() {
    let started = Instant::now();
    let g3 = parse_network(corpus::G3).unwrap();
    let verdict = homeostasis::structural_verdict(&g3, DsrOptions::default()).unwrap();
    assert_eq!(verdict.kind, VerdictKind::PerfectHomeostasis);

    // every subset product of the associated network is exactly zero
    // (C(5,3) = 10 subsets for the five-reaction associated network)
    let assoc = homeostasis::associated_network(&g3).unwrap();
    let products = injectivity::subset_products(&assoc.network, DEFAULT_SUBSET_CAP).unwrap();
    assert_eq!(assoc.network.n_reactions(), 5);
    assert_eq!(products.len(), 10);
    assert!(products.iter().all(|p| p.product == 0.into()));

    let eqs = numeric::find_equilibria(&g3, &[], Some(1.0), 1.0, 64, 1).unwrap();
    assert_eq!(eqs.len(), 1);
    let e = &eqs[0];
    assert!((e.x[0] - 0.5).abs() <= 1e-8);
    assert!((e.x[1] - 0.5).abs() <= 1e-8);
    assert!((e.x[2] - 1.0).abs() <= 1e-8);
    assert!(e.stable);
    let s17 = 17f64.sqrt();
    let expected_eigs = [(-7.0 - s17) / 4.0, -1.0, (-7.0 + s17) / 4.0];
    for (eig, want) in e.eigenvalues.iter().zip(expected_eigs) {
        assert!((eig.re - want).abs() <= 1e-8, "{} vs {want}", eig.re);
        assert!(eig.im.abs() <= 1e-10);
    }

    let sweep =
        numeric::branch_sweep(&g3, &[], Some(1.0), 0.5, 2.0, 16, SweepOptions::default()).unwrap();
    assert_eq!(sweep.samples.len(), 16);
    for s in &sweep.samples {
        assert!((s.equilibrium.x[2] - 1.0).abs() <= 1e-8);
        assert!(s.io_derivative.abs() <= 1e-6);
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(
        4,
        "G3 PERFECT_HOMEOSTASIS, all products zero, flat branch with zero derivative",
    );
}

#[test]
fn criterion_5_cauchy_binet_oracle() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for i in 0..100 {
        let net = common::random_network(&mut rng, 5, 8, 3);
        let x = common::random_positive(&mut rng, net.n_species(), 0.5, 2.0);
        let k = common::random_positive(&mut rng, net.n_reactions(), 0.5, 2.0);
        let residual = injectivity::cauchy_binet_residual(&net, &x, &k).unwrap();
        assert!(
            residual <= 1e-9,
            "network {i}: residual {residual} exceeds 1e-9"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(5, "100 random networks, Cauchy-Binet residual <= 1e-9");
}

#[test]
fn criterion_6_implicit_function_identities() {
    let g2 = parse_network(corpus::G2).unwrap();
    let g3 = parse_network(corpus::G3).unwrap();
    for (net, lo, hi) in [(&g2, 0.25, 1.0), (&g3, 0.5, 2.0)] {
        let n = net.n_species();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let sweep = numeric::branch_sweep(net, &[], Some(1.0), lo, hi, 16, SweepOptions::default())
            .unwrap();
        let stable: Vec<&numeric::BranchSample> = sweep
            .samples
            .iter()
            .filter(|s| s.equilibrium.stable)
            .collect();
        assert_eq!(stable.len(), sweep.samples.len());
        for s in &stable {
            let lhs = s.io_derivative * s.det_j;
            let rhs = sign * s.det_b;
            assert!(
                (lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()),
                "Cramer identity violated at zeta = {}: {lhs} vs {rhs}",
                s.zeta
            );
        }
        let out = net.output_species();
        for w in sweep.samples.windows(3) {
            let h = w[2].zeta - w[0].zeta;
            let fd = (w[2].equilibrium.x[out] - w[0].equilibrium.x[out]) / h;
            assert!(
                (w[1].io_derivative - fd).abs() <= 1e-4,
                "finite-difference check failed at zeta = {}: {} vs {fd}",
                w[1].zeta,
                w[1].io_derivative
            );
        }
    }
    pass(
        6,
        "io_derivative * detJ = (-1)^n detB to 1e-9 and matches finite differences to 1e-4",
    );
}

#[test]
fn criterion_7_transform_structure_on_random_networks() {
    let mut rng = StdRng::seed_from_u64(0x7ea);
    let mut rank_deficient_seen = 0usize;
    for i in 0..100 {
        let net = common::random_network(&mut rng, 5, 8, 3);
        let assoc = homeostasis::associated_network(&net).unwrap();
        let tilde = &assoc.network;
        let n = tilde.n_species();
        let ret_idx = tilde
            .reactions()
            .iter()
            .position(|r| r.rate.name == assoc.added_rate)
            .unwrap_or_else(|| panic!("network {i}: return reaction missing"));

        // f~_1 = k_{n,1} x_n as a polynomial
        let field = massaction::build_rhs(tilde, false);
        let f1 = &field.components[0];
        assert_eq!(f1.terms().len(), 1, "network {i}: f~_1 not a single term");
        let t = &f1.terms()[0];
        assert!(t
            .rate_exps
            .iter()
            .enumerate()
            .all(|(r, &e)| if r == ret_idx { e == 1 } else { e == 0 }));
        assert!(t.conc_exps.iter().enumerate().all(|(j, &e)| if j == n - 1 {
            e == 1
        } else {
            e == 0
        }));

        // row 1 of the Jacobian: zeros except the last entry = k_{n,1}
        let jac = massaction::build_jacobian(tilde);
        for j in 0..n - 1 {
            assert!(jac.entry(0, j).is_zero(), "network {i}: J~(1,{j}) nonzero");
        }
        let corner = jac.entry(0, n - 1);
        assert_eq!(corner.terms().len(), 1);
        assert!(corner.terms()[0].conc_exps.iter().all(|&e| e == 0));
        assert_eq!(corner.terms()[0].rate_exps[ret_idx], 1);

        // step 1 is idempotent
        let perm = homeostasis::io_permutation(&net);
        let permuted = net.permuted(&perm).unwrap();
        let once = homeostasis::neutralize_input_production(&permuted).unwrap();
        let twice = homeostasis::neutralize_input_production(&once).unwrap();
        assert_eq!(once, twice, "network {i}: step 1 not idempotent");

        // a rank-deficient associated network has every subset product zero
        let products = injectivity::subset_products(tilde, DEFAULT_SUBSET_CAP).unwrap();
        let all_zero = products.iter().all(|p| p.product == 0.into());
        if tilde.stoich_subspace_dim() < n {
            rank_deficient_seen += 1;
            assert!(
                all_zero,
                "network {i}: rank-deficient transform with a nonzero product"
            );
        }
        if !all_zero {
            assert_eq!(
                tilde.stoich_subspace_dim(),
                n,
                "network {i}: nonzero product with rank-deficient transform"
            );
        }
    }
    assert!(
        rank_deficient_seen > 0,
        "family never hit the deficient case"
    );

    // the converse direction fails in general: the associated network of G3
    // has every product zero while its reaction vectors still span all of
    // R^3, so all-zero products do not imply a rank-deficient transform
    let g3 = parse_network(corpus::G3).unwrap();
    let tilde3 = homeostasis::associated_network(&g3).unwrap().network;
    let products = injectivity::subset_products(&tilde3, DEFAULT_SUBSET_CAP).unwrap();
    assert!(products.iter().all(|p| p.product == 0.into()));
    assert_eq!(tilde3.stoich_subspace_dim(), 3);

    pass(
        7,
        "transform structure on 100 random networks; rank deficiency forces all-zero products",
    );
}

#[test]
fn criterion_8_g1_detb_never_crosses_zero() {
    let g1 = parse_network(corpus::G1).unwrap();
    let sweep =
        numeric::branch_sweep(&g1, &[], Some(1.0), 0.1, 10.0, 32, SweepOptions::default()).unwrap();
    assert_eq!(sweep.samples.len(), 32);
    assert!(sweep.gaps.is_empty());
    let first_sign = sweep.samples[0].det_b.signum();
    for s in &sweep.samples {
        assert!(s.equilibrium.stable, "unstable sample at zeta = {}", s.zeta);
        assert_eq!(
            s.det_b.signum(),
            first_sign,
            "det B changed sign at zeta = {}",
            s.zeta
        );
        assert!(
            s.det_b.abs() >= 1e-9,
            "det B entered the zero band at zeta = {}",
            s.zeta
        );
    }
    pass(
        8,
        "G1 branch over [0.1, 10]: det B keeps one sign and stays out of the zero band",
    );
}
