//! Injectivity analysis by exhaustive enumeration of n-reaction subsets with
//! exact integer determinants, and the Cauchy–Binet evaluation oracle tying
//! the subset products to the numeric Jacobian determinant.
//!
//! For a subset S of n reactions the stored record carries
//! `det(y_1,...,y_n)` (source complexes as columns), `det(y_1-y'_1,...)`
//! (source minus target), and their product. The network is injective
//! exactly when the nonzero products all share one sign and at least one is
//! nonzero; when every product vanishes the Jacobian determinant is
//! identically zero.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{CrnError, Result};
use crate::massaction;
use crate::model::ReactionNetwork;

/// Default cap on the number of enumerated subsets.
pub const DEFAULT_SUBSET_CAP: u128 = 2_000_000;

/// Exact determinant data for one n-reaction subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetProduct {
    /// strictly increasing reaction indices
    pub subset: Vec<usize>,
    /// det of the source complexes, columns ordered by `subset`
    pub det_source: BigInt,
    /// det of source-minus-target columns
    pub det_diff: BigInt,
    /// det_source * det_diff
    pub product: BigInt,
}

impl Serialize for SubsetProduct {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SubsetProduct", 4)?;
        s.serialize_field("subset", &self.subset)?;
        s.serialize_field("det_source", &self.det_source.to_string())?;
        s.serialize_field("det_diff", &self.det_diff.to_string())?;
        s.serialize_field("product", &self.product.to_string())?;
        s.end()
    }
}

/// Outcome of the sign analysis over all subset products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InjectivityVerdict {
    #[serde(rename = "INJECTIVE")]
    Injective,
    #[serde(rename = "NOT_INJECTIVE_SIGN_CONFLICT")]
    NotInjectiveSignConflict,
    #[serde(rename = "DEGENERATE_ALL_ZERO")]
    DegenerateAllZero,
}

/// Verdict with counts and up to two witness subsets justifying it.
#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub verdict: InjectivityVerdict,
    pub witnesses: Vec<SubsetProduct>,
    pub n_positive: usize,
    pub n_negative: usize,
    pub n_zero: usize,
}

impl InjectivityReport {
    pub fn total_products(&self) -> usize {
        self.n_positive + self.n_negative + self.n_zero
    }
}

fn binomial(m: u128, n: u128) -> u128 {
    if n > m {
        return 0;
    }
    let n = n.min(m - n);
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc.saturating_mul(m - i) / (i + 1);
    }
    acc
}

/// One record per n-subset of reactions, in lexicographic subset order.
/// Fails explicitly when the subset count exceeds `cap`; sampling would
/// silently weaken an if-and-only-if criterion.
pub fn subset_products(net: &ReactionNetwork, cap: u128) -> Result<Vec<SubsetProduct>> {
    let n = net.n_species();
    let m = net.n_reactions();
    if m < n {
        return Ok(Vec::new());
    }
    let count = binomial(m as u128, n as u128);
    if count > cap {
        return Err(CrnError::CapExceeded {
            what: "reaction subsets",
            count,
            cap,
        });
    }

    let sources: Vec<Vec<BigInt>> = net
        .reactions()
        .iter()
        .map(|r| r.source.coeffs().iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let diffs: Vec<Vec<BigInt>> = net
        .reactions()
        .iter()
        .map(|r| {
            r.source
                .coeffs()
                .iter()
                .zip(r.target.coeffs())
                .map(|(&s, &t)| BigInt::from(s as i64 - t as i64))
                .collect()
        })
        .collect();

    let mut out = Vec::with_capacity(count as usize);
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        out.push(product_for_subset(&subset, &sources, &diffs, n));
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if subset[i] != i + m - n {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..n {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn product_for_subset(
    subset: &[usize],
    sources: &[Vec<BigInt>],
    diffs: &[Vec<BigInt>],
    n: usize,
) -> SubsetProduct {
    let col_major = |data: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|row| subset.iter().map(|&r| data[r][row].clone()).collect())
            .collect()
    };
    let det_source = crate::exact::determinant(col_major(sources));
    let det_diff = crate::exact::determinant(col_major(diffs));
    let product = &det_source * &det_diff;
    SubsetProduct {
        subset: subset.to_vec(),
        det_source,
        det_diff,
        product,
    }
}

/// Sign analysis of the full product list.
pub fn injectivity_verdict(net: &ReactionNetwork, cap: u128) -> Result<InjectivityReport> {
    let products = subset_products(net, cap)?;
    Ok(verdict_from_products(&products))
}

pub fn verdict_from_products(products: &[SubsetProduct]) -> InjectivityReport {
    let mut n_positive = 0;
    let mut n_negative = 0;
    let mut n_zero = 0;
    let mut first_positive: Option<&SubsetProduct> = None;
    let mut first_negative: Option<&SubsetProduct> = None;
    for p in products {
        if p.product.is_zero() {
            n_zero += 1;
        } else if p.product.is_positive() {
            n_positive += 1;
            first_positive.get_or_insert(p);
        } else {
            n_negative += 1;
            first_negative.get_or_insert(p);
        }
    }
    let (verdict, witnesses) = if n_positive > 0 && n_negative > 0 {
        (
            InjectivityVerdict::NotInjectiveSignConflict,
            vec![
                first_positive.unwrap().clone(),
                first_negative.unwrap().clone(),
            ],
        )
    } else if n_positive > 0 {
        (
            InjectivityVerdict::Injective,
            vec![first_positive.unwrap().clone()],
        )
    } else if n_negative > 0 {
        (
            InjectivityVerdict::Injective,
            vec![first_negative.unwrap().clone()],
        )
    } else {
        (InjectivityVerdict::DegenerateAllZero, Vec::new())
    };
    InjectivityReport {
        verdict,
        witnesses,
        n_positive,
        n_negative,
        n_zero,
    }
}

/// Relative defect of the identity
/// `det J(x,k) * prod_i x_i = sum_S det(Y_S) det(Y'_S - Y_S) prod_{r in S} k_r x^{y_r}`
/// with the left side evaluated through the numeric Jacobian. Small values
/// tie the exact subset products to the analytic Jacobian determinant.
pub fn cauchy_binet_residual(net: &ReactionNetwork, x: &[f64], k: &[f64]) -> Result<f64> {
    let n = net.n_species();
    if x.len() != n || k.len() != net.n_reactions() {
        return Err(CrnError::Domain(
            "point/rate dimension does not match the network".into(),
        ));
    }
    let jac = massaction::build_jacobian(net);
    let jmat = jac.evaluate(x, k);
    let det_j = jmat.lu().determinant();
    let lhs = det_j * x.iter().product::<f64>();

    let products = subset_products(net, DEFAULT_SUBSET_CAP)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut rhs = 0.0;
    for p in &products {
        if p.product.is_zero() {
            continue;
        }
        // det(Y'_S - Y_S) = (-1)^n det(Y_S - Y'_S)
        let coeff = sign * bigint_to_f64(&p.product);
        let mut term = coeff;
        for &r in &p.subset {
            let reaction = &net.reactions()[r];
            let mut monom = k[r];
            for (i, &e) in reaction.source.coeffs().iter().enumerate() {
                if e > 0 {
                    monom *= x[i].powi(e as i32);
                }
            }
            term *= monom;
        }
        rhs += term;
    }
    Ok((lhs - rhs).abs() / (1.0 + lhs.abs()))
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::homeostasis::associated_network;
    use crate::parser::parse_network;

    fn find_subset(
        net: &ReactionNetwork,
        products: &[SubsetProduct],
        reactions: &[(&[u32], &[u32])],
    ) -> SubsetProduct {
        let indices: Vec<usize> = reactions
            .iter()
            .map(|(src, tgt)| {
                net.reactions()
                    .iter()
                    .position(|r| r.source.coeffs() == *src && r.target.coeffs() == *tgt)
                    .expect("reaction present")
            })
            .collect();
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        products
            .iter()
            .find(|p| p.subset == sorted)
            .expect("subset enumerated")
            .clone()
    }

    #[test]
    fn g1_associated_witness_subset_has_product_one() {
        let g1 = parse_network(corpus::G1).unwrap();
        let assoc = associated_network(&g1).unwrap();
        let net = &assoc.network;
        let products = subset_products(net, DEFAULT_SUBSET_CAP).unwrap();
        let w = find_subset(
            net,
            &products,
            &[
                (&[1, 1, 0, 0], &[1, 0, 0, 0]), // X1+X2 -> X1
                (&[0, 1, 1, 0], &[0, 0, 0, 0]), // X2+X3 -> 0
                (&[0, 0, 1, 1], &[0, 0, 0, 0]), // X3+X4 -> 0
                (&[0, 0, 0, 1], &[1, 0, 0, 0]), // X4 -> X1
            ],
        );
        assert_eq!(w.det_source, 1.into());
        // det(y' - y) = 1, so in the stored y - y' convention (-1)^4 * 1 = 1
        assert_eq!(w.det_diff, 1.into());
        assert_eq!(w.product, 1.into());
    }

    #[test]
    fn enzyme_subset_product_matches_hand_computation() {
        let net = parse_network(corpus::ENZYME).unwrap();
        let products = subset_products(&net, DEFAULT_SUBSET_CAP).unwrap();
        // {E+S -> ES, ES -> E+P, E -> 0, P -> 0}, species order (E, S, ES, P)
        let w = find_subset(
            &net,
            &products,
            &[
                (&[1, 1, 0, 0], &[0, 0, 1, 0]),
                (&[0, 0, 1, 0], &[1, 0, 0, 1]),
                (&[1, 0, 0, 0], &[0, 0, 0, 0]),
                (&[0, 0, 0, 1], &[0, 0, 0, 0]),
            ],
        );
        assert_eq!(w.product.abs(), 1.into());
        assert_eq!(w.product, 1.into());
    }

    #[test]
    fn g3_associated_products_all_vanish() {
        let g3 = parse_network(corpus::G3).unwrap();
        let assoc = associated_network(&g3).unwrap();
        let products = subset_products(&assoc.network, DEFAULT_SUBSET_CAP).unwrap();
        // the associated network has 5 reactions, so C(5,3) = 10 subsets
        assert_eq!(products.len(), 10);
        assert!(products.iter().all(|p| p.product.is_zero()));
        let report = verdict_from_products(&products);
        assert_eq!(report.verdict, InjectivityVerdict::DegenerateAllZero);
    }

    #[test]
    fn g1_associated_network_is_injective() {
        let g1 = parse_network(corpus::G1).unwrap();
        let assoc = associated_network(&g1).unwrap();
        let report = injectivity_verdict(&assoc.network, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(report.verdict, InjectivityVerdict::Injective);
    }

    #[test]
    fn sign_conflict_detected() {
        // On one species the subsets {2X1 -> 3X1} and {2X1 -> X1} give
        // det(y) det(y - y') = 2 * (-1) and 2 * 1. Embedded with a second
        // species so the network is constructible, the same conflict shows
        // in the 2-subsets against X2 -> 2X2.
        let net = parse_network("2X1 -> 3X1\n2X1 -> X1\nX2 -> 2X2").unwrap();
        let report = injectivity_verdict(&net, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(report.verdict, InjectivityVerdict::NotInjectiveSignConflict);
        assert_eq!(report.witnesses.len(), 2);
        assert!(report.n_positive > 0 && report.n_negative > 0);

        // the underlying one-species determinants, computed directly
        let two = BigInt::from(2);
        assert_eq!(
            crate::exact::determinant(vec![vec![two.clone()]]) * BigInt::from(-1),
            BigInt::from(-2)
        );
        assert_eq!(
            crate::exact::determinant(vec![vec![two]]) * BigInt::from(1),
            BigInt::from(2)
        );
    }

    #[test]
    fn fewer_reactions_than_species_gives_empty_list() {
        let net = parse_network("species: A B C\nA -> B").unwrap();
        assert!(subset_products(&net, DEFAULT_SUBSET_CAP)
            .unwrap()
            .is_empty());
        let report = injectivity_verdict(&net, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(report.verdict, InjectivityVerdict::DegenerateAllZero);
    }

    #[test]
    fn subset_cap_is_enforced() {
        let net = parse_network(corpus::G1).unwrap();
        let err = subset_products(&net, 10).unwrap_err();
        assert!(matches!(err, CrnError::CapExceeded { .. }));
    }

    #[test]
    fn cauchy_binet_residual_is_tiny_on_examples() {
        let g2 = parse_network(corpus::G2).unwrap();
        let x = [1.0, 1.0, 1.0];
        let k = vec![1.0; g2.n_reactions()];
        let residual = cauchy_binet_residual(&g2, &x, &k).unwrap();
        assert!(residual <= 1e-9, "residual {residual}");

        // independent 3x3 determinant of the evaluated Jacobian
        let j = massaction::build_jacobian(&g2).evaluate(&x, &k);
        let det3 = j[(0, 0)] * (j[(1, 1)] * j[(2, 2)] - j[(1, 2)] * j[(2, 1)])
            - j[(0, 1)] * (j[(1, 0)] * j[(2, 2)] - j[(1, 2)] * j[(2, 0)])
            + j[(0, 2)] * (j[(1, 0)] * j[(2, 1)] - j[(1, 1)] * j[(2, 0)]);
        let lhs = det3 * x.iter().product::<f64>();
        let lu = j.lu().determinant() * x.iter().product::<f64>();
        assert!((lhs - lu).abs() <= 1e-9 * (1.0 + lhs.abs()));

        let g3 = parse_network(corpus::G3).unwrap();
        let assoc = associated_network(&g3).unwrap();
        let kk = vec![1.3; assoc.network.n_reactions()];
        let residual = cauchy_binet_residual(&assoc.network, &[0.7, 1.9, 0.4], &kk).unwrap();
        assert!(residual <= 1e-12, "degenerate case residual {residual}");
    }

    #[test]
    fn injective_verdict_means_det_j_never_changes_sign() {
        use rand::{Rng, SeedableRng};
        let enzyme = parse_network(corpus::ENZYME).unwrap();
        let g1_assoc = associated_network(&parse_network(corpus::G1).unwrap())
            .unwrap()
            .network;
        for net in [enzyme, g1_assoc] {
            let report = injectivity_verdict(&net, DEFAULT_SUBSET_CAP).unwrap();
            assert_eq!(report.verdict, InjectivityVerdict::Injective);
            let jac = massaction::build_jacobian(&net);
            let mut rng = rand::rngs::StdRng::seed_from_u64(99);
            let mut sign = 0.0f64;
            for _ in 0..100 {
                let x: Vec<f64> = (0..net.n_species())
                    .map(|_| rng.random_range(0.05..20.0))
                    .collect();
                let k: Vec<f64> = (0..net.n_reactions())
                    .map(|_| rng.random_range(0.05..20.0))
                    .collect();
                let det = jac.evaluate(&x, &k).lu().determinant();
                assert!(det.abs() >= 1e-12, "det J too small: {det}");
                if sign == 0.0 {
                    sign = det.signum();
                } else {
                    assert_eq!(det.signum(), sign, "det J changed sign");
                }
            }
        }
    }

    #[test]
    fn product_multiset_invariant_under_reaction_permutation() {
        // same reactions listed in a different order parse to the same
        // canonical network, hence identical product lists
        let a = parse_network("A + B -> 0\nB -> A\n0 -> B\nA -> 2A").unwrap();
        let b = parse_network("A -> 2A\n0 -> B\nA + B -> 0\nB -> A").unwrap();
        let pa = subset_products(&a, DEFAULT_SUBSET_CAP).unwrap();
        let pb = subset_products(&b, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(pa, pb);
    }

    #[test]
    fn diff_determinant_sign_convention_flip() {
        // det(y - y') = (-1)^n det(y' - y): the verdict never depends on
        // which convention is used.
        let net = parse_network(corpus::ENZYME).unwrap();
        let n = net.n_species();
        let products = subset_products(&net, DEFAULT_SUBSET_CAP).unwrap();
        for p in &products {
            let cols: Vec<Vec<BigInt>> = (0..n)
                .map(|row| {
                    p.subset
                        .iter()
                        .map(|&r| {
                            let reaction = &net.reactions()[r];
                            BigInt::from(
                                reaction.target.coeff(row) as i64
                                    - reaction.source.coeff(row) as i64,
                            )
                        })
                        .collect()
                })
                .collect();
            let det_fwd = crate::exact::determinant(cols);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(p.det_diff, det_fwd * BigInt::from(sign));
        }
    }
}
