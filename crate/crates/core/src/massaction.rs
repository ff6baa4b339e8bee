//! Symbolic construction of the mass-action vector field, the augmented
//! system with an additive input rate, and the Jacobian.
//!
//! Rate symbols are indexed by canonical reaction order. When the input
//! parameter is requested, the flagged reaction's rate symbol plays that
//! role directly; a network without a flagged reaction and without an
//! inflow to the input species gets an extra additive rate symbol instead.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::model::ReactionNetwork;
use crate::poly::{Monomial, PolyMatrix, SparsePolynomial};

/// How the input parameter enters the assembled right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InputForm {
    /// No input parameter (plain mass-action field).
    None,
    /// The input is the rate of reaction `reaction`; rate vector slot
    /// `reaction` carries its value.
    ReactionRate { reaction: usize },
    /// The input enters as an extra additive term on the input species;
    /// rate vector slot `rate_index` (= reaction count) carries its value.
    Additive { rate_index: usize },
}

/// The symbolic right-hand side together with the input wiring.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub components: Vec<SparsePolynomial>,
    pub input_form: InputForm,
    /// number of rate slots expected by `evaluate` (reactions, plus one for
    /// an additive input)
    pub nrates: usize,
}

impl VectorField {
    /// Rate-slot vector for numeric evaluation: per-reaction values with the
    /// input parameter written into its slot.
    pub fn rate_slots(&self, per_reaction: &[f64], zeta: f64) -> Vec<f64> {
        match self.input_form {
            InputForm::None => per_reaction.to_vec(),
            InputForm::ReactionRate { reaction } => {
                let mut v = per_reaction.to_vec();
                v[reaction] = zeta;
                v
            }
            InputForm::Additive { .. } => {
                let mut v = per_reaction.to_vec();
                v.push(zeta);
                v
            }
        }
    }

    pub fn evaluate(&self, x: &[f64], slots: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|p| p.evaluate(x, slots))
            .collect()
    }
}

/// Build the mass-action field `sum_r k_r x^{y_r} (y'_r - y_r)`. With
/// `with_input`, the input parameter is wired in as described on
/// [`InputForm`].
pub fn build_rhs(net: &ReactionNetwork, with_input: bool) -> VectorField {
    let n = net.n_species();
    let m = net.n_reactions();

    let additive_input = with_input
        && net.input_reaction().is_none()
        && !net.reactions().iter().any(|r| {
            r.source.is_empty_complex()
                && r.target.coeffs().iter().enumerate().all(|(i, &c)| {
                    if i == net.input_species() {
                        c == 1
                    } else {
                        c == 0
                    }
                })
        });
    let nrates = if additive_input { m + 1 } else { m };

    let mut components = vec![SparsePolynomial::zero(n, nrates); n];
    for i in 0..n {
        let mut terms: Vec<Monomial> = Vec::new();
        for (j, r) in net.reactions().iter().enumerate() {
            let delta = r.target.coeff(i) as i64 - r.source.coeff(i) as i64;
            if delta == 0 {
                continue;
            }
            let mut rate_exps = vec![0u32; nrates];
            rate_exps[j] = 1;
            terms.push(Monomial {
                coeff: BigRational::from_integer(delta.into()),
                rate_exps,
                conc_exps: r.source.coeffs().to_vec(),
            });
        }
        components[i] = SparsePolynomial::from_terms(n, nrates, terms);
    }

    let input_form = if !with_input {
        InputForm::None
    } else if let Some(flagged) = net.input_reaction() {
        InputForm::ReactionRate { reaction: flagged }
    } else if !additive_input {
        // unique inflow to the input species adopts the input role
        let reaction = net
            .reactions()
            .iter()
            .position(|r| {
                r.source.is_empty_complex()
                    && r.target.coeffs().iter().enumerate().all(|(i, &c)| {
                        if i == net.input_species() {
                            c == 1
                        } else {
                            c == 0
                        }
                    })
            })
            .expect("inflow presence already checked");
        InputForm::ReactionRate { reaction }
    } else {
        // system (4): an additive input term on the input component
        let rate_index = m;
        let mut rate_exps = vec![0u32; nrates];
        rate_exps[rate_index] = 1;
        let term = SparsePolynomial::from_terms(
            n,
            nrates,
            [Monomial {
                coeff: BigRational::from_integer(1.into()),
                rate_exps,
                conc_exps: vec![0; n],
            }],
        );
        components[net.input_species()] = components[net.input_species()].add(&term);
        InputForm::Additive { rate_index }
    };

    VectorField {
        components,
        input_form,
        nrates,
    }
}

/// Formal Jacobian of the mass-action field. The input parameter is constant
/// in x, so the Jacobian of the augmented system is identical.
pub fn build_jacobian(net: &ReactionNetwork) -> PolyMatrix {
    jacobian_of(&build_rhs(net, false).components)
}

/// Jacobian of an arbitrary polynomial field (entry (i, j) = df_i/dx_j).
pub fn jacobian_of(components: &[SparsePolynomial]) -> PolyMatrix {
    let n = components.len();
    let entries = components
        .iter()
        .flat_map(|f| (0..n).map(move |j| f.derivative(j)))
        .collect();
    PolyMatrix::from_entries(n, entries)
}

/// Exact rational rate values for symbolic substitution (all reactions bound
/// to the same exact value, typically one).
pub fn uniform_rates(nrates: usize, value: i64) -> Vec<BigRational> {
    vec![BigRational::from_integer(value.into()); nrates]
}

/// Evaluate a polynomial field at a numeric point.
pub fn evaluate_field(field: &[SparsePolynomial], x: &[f64], k: &[f64]) -> Vec<f64> {
    field.iter().map(|p| p.evaluate(x, k)).collect()
}

/// Numeric rate slots for a network: per-reaction values from
/// [`ReactionNetwork::bind_rates`] arranged for a [`VectorField`].
pub fn numeric_slots(
    net: &ReactionNetwork,
    field: &VectorField,
    overrides: &[(String, f64)],
    default: Option<f64>,
    zeta: f64,
) -> Result<Vec<f64>> {
    // The flagged slot is overwritten by zeta, so bind it permissively.
    let mut overrides = overrides.to_vec();
    if let InputForm::ReactionRate { reaction } = field.input_form {
        overrides.push((net.reactions()[reaction].rate.name.clone(), 1.0));
    }
    let per_reaction = net.bind_rates(&overrides, default)?;
    Ok(field.rate_slots(&per_reaction, zeta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::parser::parse_network;
    use crate::poly::SparsePolynomial;
    use num_traits::One;

    fn unit_sub(p: &SparsePolynomial) -> SparsePolynomial {
        p.substitute_rates(&uniform_rates(p.nrates(), 1))
    }

    #[test]
    fn g2_field_matches_published_system_at_unit_rates() {
        let net = parse_network(corpus::G2).unwrap();
        let field = build_rhs(&net, true);
        assert!(matches!(field.input_form, InputForm::ReactionRate { .. }));
        let m = net.n_reactions();
        assert_eq!(field.nrates, m);

        // with all rates (including zeta) at 1:
        //   f1 = 1 - x1 - 2 x1^2 + 2 x2
        //   f2 = x1^2 - x2
        //   f3 = -x2 x3 + x1 x3 - x3^2 + x3
        let f1 = unit_sub(&field.components[0]);
        let f2 = unit_sub(&field.components[1]);
        let f3 = unit_sub(&field.components[2]);
        let expect1 = SparsePolynomial::from_int_terms(
            3,
            m,
            &[
                (1, &[0, 0, 0], &[0; 8]),
                (-1, &[1, 0, 0], &[0; 8]),
                (-2, &[2, 0, 0], &[0; 8]),
                (2, &[0, 1, 0], &[0; 8]),
            ],
        );
        let expect2 = SparsePolynomial::from_int_terms(
            3,
            m,
            &[(1, &[2, 0, 0], &[0; 8]), (-1, &[0, 1, 0], &[0; 8])],
        );
        let expect3 = SparsePolynomial::from_int_terms(
            3,
            m,
            &[
                (-1, &[0, 1, 1], &[0; 8]),
                (1, &[1, 0, 1], &[0; 8]),
                (-1, &[0, 0, 2], &[0; 8]),
                (1, &[0, 0, 1], &[0; 8]),
            ],
        );
        assert_eq!(f1, expect1);
        assert_eq!(f2, expect2);
        assert_eq!(f3, expect3);
    }

    #[test]
    fn g3_field_matches_published_system_at_unit_rates() {
        let net = parse_network(corpus::G3).unwrap();
        let field = build_rhs(&net, true);
        let m = net.n_reactions();
        let f = |i: usize| unit_sub(&field.components[i]);
        // f1 = 1 - x1 - x1 x3 ; f2 = -x2 + x1 x3 ; f3 = 1 - x3 + x2 - x1 x3
        assert_eq!(
            f(0),
            SparsePolynomial::from_int_terms(
                3,
                m,
                &[
                    (1, &[0, 0, 0], &[0; 6]),
                    (-1, &[1, 0, 0], &[0; 6]),
                    (-1, &[1, 0, 1], &[0; 6]),
                ]
            )
        );
        assert_eq!(
            f(1),
            SparsePolynomial::from_int_terms(
                3,
                m,
                &[(-1, &[0, 1, 0], &[0; 6]), (1, &[1, 0, 1], &[0; 6])]
            )
        );
        assert_eq!(
            f(2),
            SparsePolynomial::from_int_terms(
                3,
                m,
                &[
                    (1, &[0, 0, 0], &[0; 6]),
                    (-1, &[0, 0, 1], &[0; 6]),
                    (1, &[0, 1, 0], &[0; 6]),
                    (-1, &[1, 0, 1], &[0; 6]),
                ]
            )
        );
    }

    #[test]
    fn empty_network_has_zero_field() {
        let net =
            crate::model::ReactionNetwork::new(vec!["A".into(), "B".into()], vec![], None, None)
                .unwrap();
        let field = build_rhs(&net, false);
        assert!(field.components.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn additive_input_used_when_no_inflow_exists() {
        let net = parse_network("A -> B").unwrap();
        let field = build_rhs(&net, true);
        assert!(matches!(field.input_form, InputForm::Additive { .. }));
        assert_eq!(field.nrates, net.n_reactions() + 1);
        // f_A = -k1 A + zeta
        let v = field.evaluate(&[2.0, 0.5], &field.rate_slots(&[3.0], 7.0));
        assert_eq!(v[0], 7.0 - 6.0);
        assert_eq!(v[1], 6.0);
    }

    #[test]
    fn g2_jacobian_matches_published_matrix() {
        let net = parse_network(corpus::G2).unwrap();
        let jac = build_jacobian(&net);
        let ones = uniform_rates(net.n_reactions(), 1);
        let j = jac.substitute_rates(&ones);
        let m = net.n_reactions();
        let e = |terms: &[(i64, [u32; 3])]| {
            SparsePolynomial::from_int_terms(
                3,
                m,
                &terms
                    .iter()
                    .map(|(c, conc)| (*c, &conc[..], &[0u32; 8][..]))
                    .collect::<Vec<_>>(),
            )
        };
        // row 1: (-1 - 4 x1, 2, 0)
        assert_eq!(*j.entry(0, 0), e(&[(-1, [0, 0, 0]), (-4, [1, 0, 0])]));
        assert_eq!(*j.entry(0, 1), e(&[(2, [0, 0, 0])]));
        assert!(j.entry(0, 2).is_zero());
        // row 2: (2 x1, -1, 0)
        assert_eq!(*j.entry(1, 0), e(&[(2, [1, 0, 0])]));
        assert_eq!(*j.entry(1, 1), e(&[(-1, [0, 0, 0])]));
        assert!(j.entry(1, 2).is_zero());
        // row 3: (x3, -x3, -x2 + x1 - 2 x3 + 1)
        assert_eq!(*j.entry(2, 0), e(&[(1, [0, 0, 1])]));
        assert_eq!(*j.entry(2, 1), e(&[(-1, [0, 0, 1])]));
        assert_eq!(
            *j.entry(2, 2),
            e(&[
                (1, [0, 0, 0]),
                (1, [1, 0, 0]),
                (-1, [0, 1, 0]),
                (-2, [0, 0, 1])
            ])
        );
    }

    #[test]
    fn g3_jacobian_matches_published_matrix() {
        let net = parse_network(corpus::G3).unwrap();
        let j = build_jacobian(&net).substitute_rates(&uniform_rates(net.n_reactions(), 1));
        let m = net.n_reactions();
        let e = |terms: &[(i64, [u32; 3])]| {
            SparsePolynomial::from_int_terms(
                3,
                m,
                &terms
                    .iter()
                    .map(|(c, conc)| (*c, &conc[..], &[0u32; 6][..]))
                    .collect::<Vec<_>>(),
            )
        };
        assert_eq!(*j.entry(0, 0), e(&[(-1, [0, 0, 0]), (-1, [0, 0, 1])]));
        assert!(j.entry(0, 1).is_zero());
        assert_eq!(*j.entry(0, 2), e(&[(-1, [1, 0, 0])]));
        assert_eq!(*j.entry(1, 0), e(&[(1, [0, 0, 1])]));
        assert_eq!(*j.entry(1, 1), e(&[(-1, [0, 0, 0])]));
        assert_eq!(*j.entry(1, 2), e(&[(1, [1, 0, 0])]));
        assert_eq!(*j.entry(2, 0), e(&[(-1, [0, 0, 1])]));
        assert_eq!(*j.entry(2, 1), e(&[(1, [0, 0, 0])]));
        assert_eq!(*j.entry(2, 2), e(&[(-1, [0, 0, 0]), (-1, [1, 0, 0])]));
    }

    #[test]
    fn linear_reaction_jacobian() {
        let net = parse_network("X1 -> X2 ; k").unwrap();
        let j = build_jacobian(&net);
        let minus_k = SparsePolynomial::from_int_terms(2, 1, &[(-1, &[0, 0], &[1])]);
        let plus_k = SparsePolynomial::from_int_terms(2, 1, &[(1, &[0, 0], &[1])]);
        assert_eq!(*j.entry(0, 0), minus_k);
        assert!(j.entry(0, 1).is_zero());
        assert_eq!(*j.entry(1, 0), plus_k);
        assert!(j.entry(1, 1).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let g2 = parse_network(corpus::G2).unwrap();
        let field = build_rhs(&g2, true);
        let slots = field.rate_slots(&vec![1.0; g2.n_reactions()], 0.5);
        // f2 vanishes whenever x2 = x1^2
        let v = field.components[1].evaluate(&[0.5, 0.25, 10.0], &slots);
        assert_eq!(v, 0.0);

        let g3 = parse_network(corpus::G3).unwrap();
        let field = build_rhs(&g3, true);
        let slots = field.rate_slots(&vec![1.0; g3.n_reactions()], 1.0);
        let v = field.components[2].evaluate(&[0.5, 0.5, 1.0], &slots);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn field_is_linear_in_rates() {
        let net = parse_network(corpus::G2).unwrap();
        let field = build_rhs(&net, true);
        let x = [0.7, 1.3, 0.4];
        let k1 = field.rate_slots(&vec![1.0; net.n_reactions()], 0.5);
        let k2: Vec<f64> = k1.iter().map(|v| 2.0 * v).collect();
        let f1 = field.evaluate(&x, &k1);
        let f2 = field.evaluate(&x, &k2);
        for (a, b) in f1.iter().zip(&f2) {
            assert!((2.0 * a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn uniform_rates_are_exact_ones() {
        let r = uniform_rates(3, 1);
        assert!(r.iter().all(|v| v.is_one()));
    }
}
