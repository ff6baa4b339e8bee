//! Exact sparse multivariate polynomials in the concentrations and the rate
//! symbols, with rational coefficients. Floating point enters only at
//! evaluation time.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{CrnError, Result};

/// One monomial: an exact rational coefficient times a power product of
/// rate symbols and concentrations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigRational,
    /// exponent per rate symbol (length = number of rate symbols)
    pub rate_exps: Vec<u32>,
    /// exponent per concentration variable (length = species count)
    pub conc_exps: Vec<u32>,
}

/// A canonical sum of monomials: sorted by exponents, no duplicates, no
/// zero coefficients. The zero polynomial has an empty term list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    nrates: usize,
    terms: Vec<Monomial>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize, nrates: usize) -> Self {
        SparsePolynomial {
            nvars,
            nrates,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        nvars: usize,
        nrates: usize,
        terms: impl IntoIterator<Item = Monomial>,
    ) -> Self {
        let mut p = SparsePolynomial {
            nvars,
            nrates,
            terms: terms.into_iter().collect(),
        };
        for t in &p.terms {
            assert_eq!(t.conc_exps.len(), nvars);
            assert_eq!(t.rate_exps.len(), nrates);
        }
        p.normalize();
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, nrates: usize, terms: &[(i64, &[u32], &[u32])]) -> Self {
        Self::from_terms(
            nvars,
            nrates,
            terms.iter().map(|(c, conc, rates)| Monomial {
                coeff: BigRational::from_integer((*c).into()),
                conc_exps: conc.to_vec(),
                rate_exps: rates.to_vec(),
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrates(&self) -> usize {
        self.nrates
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalize(&mut self) {
        self.terms
            .sort_by(|a, b| (&a.conc_exps, &a.rate_exps).cmp(&(&b.conc_exps, &b.rate_exps)));
        let mut merged: Vec<Monomial> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.conc_exps == t.conc_exps && last.rate_exps == t.rate_exps {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coeff.is_zero());
        self.terms = merged;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(self.nrates, other.nrates);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.nvars, self.nrates, terms)
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            nrates: self.nrates,
            terms: self
                .terms
                .iter()
                .map(|t| Monomial {
                    coeff: -t.coeff.clone(),
                    rate_exps: t.rate_exps.clone(),
                    conc_exps: t.conc_exps.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(self.nrates, other.nrates);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Monomial {
                    coeff: &a.coeff * &b.coeff,
                    rate_exps: a
                        .rate_exps
                        .iter()
                        .zip(&b.rate_exps)
                        .map(|(x, y)| x + y)
                        .collect(),
                    conc_exps: a
                        .conc_exps
                        .iter()
                        .zip(&b.conc_exps)
                        .map(|(x, y)| x + y)
                        .collect(),
                });
            }
        }
        Self::from_terms(self.nvars, self.nrates, terms)
    }

    /// Formal partial derivative with respect to concentration variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter_map(|t| {
            let e = t.conc_exps[var];
            if e == 0 {
                return None;
            }
            let mut conc = t.conc_exps.clone();
            conc[var] = e - 1;
            Some(Monomial {
                coeff: &t.coeff * BigRational::from_integer(e.into()),
                rate_exps: t.rate_exps.clone(),
                conc_exps: conc,
            })
        });
        let collected: Vec<Monomial> = terms.collect();
        Self::from_terms(self.nvars, self.nrates, collected)
    }

    /// Substitute exact values for all rate symbols, leaving a polynomial in
    /// the concentrations alone (rate exponents become zero).
    pub fn substitute_rates(&self, values: &[BigRational]) -> Self {
        assert_eq!(values.len(), self.nrates);
        let terms: Vec<Monomial> = self
            .terms
            .iter()
            .map(|t| {
                let mut coeff = t.coeff.clone();
                for (i, &e) in t.rate_exps.iter().enumerate() {
                    for _ in 0..e {
                        coeff *= &values[i];
                    }
                }
                Monomial {
                    coeff,
                    rate_exps: vec![0; self.nrates],
                    conc_exps: t.conc_exps.clone(),
                }
            })
            .collect();
        Self::from_terms(self.nvars, self.nrates, terms)
    }

    /// Evaluate at a numeric point with Neumaier compensated summation.
    pub fn evaluate(&self, x: &[f64], k: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "concentration vector length mismatch");
        assert_eq!(k.len(), self.nrates, "rate vector length mismatch");
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for t in &self.terms {
            let mut v = t.coeff.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in t.rate_exps.iter().enumerate() {
                if e > 0 {
                    v *= k[i].powi(e as i32);
                }
            }
            for (i, &e) in t.conc_exps.iter().enumerate() {
                if e > 0 {
                    v *= x[i].powi(e as i32);
                }
            }
            let s = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - s) + v;
            } else {
                comp += (v - s) + sum;
            }
            sum = s;
        }
        sum + comp
    }

    /// Human-readable form using the supplied variable and rate names.
    pub fn display_with(&self, var_names: &[&str], rate_names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let coeff = &t.coeff;
            let mut factors: Vec<String> = Vec::new();
            for (j, &e) in t.rate_exps.iter().enumerate() {
                if e == 1 {
                    factors.push(rate_names[j].to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", rate_names[j], e));
                }
            }
            for (j, &e) in t.conc_exps.iter().enumerate() {
                if e == 1 {
                    factors.push(var_names[j].to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", var_names[j], e));
                }
            }
            let abs = coeff.abs();
            let is_one = abs == BigRational::from_integer(1.into());
            let magnitude = if is_one && !factors.is_empty() {
                factors.join("*")
            } else if factors.is_empty() {
                format!("{abs}")
            } else {
                format!("{}*{}", abs, factors.join("*"))
            };
            if i == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&magnitude);
        }
        out
    }
}

/// A square matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    size: usize,
    entries: Vec<SparsePolynomial>,
}

impl PolyMatrix {
    pub fn from_entries(size: usize, entries: Vec<SparsePolynomial>) -> Self {
        assert_eq!(entries.len(), size * size);
        PolyMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparsePolynomial {
        &self.entries[i * self.size + j]
    }

    /// Square submatrix selecting the given rows and columns (equal counts).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len());
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.entry(i, j).clone()))
            .collect();
        PolyMatrix {
            size: rows.len(),
            entries,
        }
    }

    /// Simultaneous row/column permutation: entry (i, j) of the result is
    /// entry (perm[i], perm[j]) of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.size);
        let entries = perm
            .iter()
            .flat_map(|&i| perm.iter().map(move |&j| self.entry(i, j).clone()))
            .collect();
        PolyMatrix {
            size: self.size,
            entries,
        }
    }

    pub fn substitute_rates(&self, values: &[num_rational::BigRational]) -> Self {
        PolyMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .map(|p| p.substitute_rates(values))
                .collect(),
        }
    }

    /// Numeric evaluation into a dense matrix.
    pub fn evaluate(&self, x: &[f64], k: &[f64]) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.size, self.size, |i, j| self.entry(i, j).evaluate(x, k))
    }

    /// Exact symbolic determinant by cofactor expansion. Guarded to small
    /// sizes; large determinants are handled numerically downstream.
    pub fn determinant(&self) -> Result<SparsePolynomial> {
        const MAX_SYMBOLIC_DET: usize = 8;
        if self.size > MAX_SYMBOLIC_DET {
            return Err(CrnError::CapExceeded {
                what: "symbolic determinant size",
                count: self.size as u128,
                cap: MAX_SYMBOLIC_DET as u128,
            });
        }
        if self.size == 0 {
            // det of the empty matrix is 1; infer dimensions from context
            return Err(CrnError::Domain(
                "symbolic determinant of an empty matrix".into(),
            ));
        }
        let cols: Vec<usize> = (0..self.size).collect();
        Ok(self.det_rec(0, &cols))
    }

    fn det_rec(&self, row: usize, cols: &[usize]) -> SparsePolynomial {
        let probe = self.entry(0, 0);
        if cols.len() == 1 {
            return self.entry(row, cols[0]).clone();
        }
        let mut acc = SparsePolynomial::zero(probe.nvars(), probe.nrates());
        for (pos, &c) in cols.iter().enumerate() {
            let e = self.entry(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.det_rec(row + 1, &rest);
            let term = e.mul(&minor);
            if pos % 2 == 0 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xvar(nvars: usize, i: usize) -> SparsePolynomial {
        let mut conc = vec![0u32; nvars];
        conc[i] = 1;
        SparsePolynomial::from_int_terms(nvars, 0, &[(1, &conc, &[])])
    }

    #[test]
    fn canonical_collection_cancels() {
        let x = xvar(2, 0);
        let sum = x.add(&x.neg());
        assert!(sum.is_zero());
    }

    #[test]
    fn product_and_derivative() {
        let x = xvar(2, 0);
        let y = xvar(2, 1);
        // d/dx (x^2 y) = 2 x y
        let p = x.mul(&x).mul(&y);
        let d = p.derivative(0);
        let expected = SparsePolynomial::from_int_terms(2, 0, &[(2, &[1, 1], &[])]);
        assert_eq!(d, expected);
    }

    #[test]
    fn evaluation_matches_hand_computation() {
        // 3 x0^2 - x1 at (2, 5) = 12 - 5 = 7
        let p = SparsePolynomial::from_int_terms(2, 0, &[(3, &[2, 0], &[]), (-1, &[0, 1], &[])]);
        assert_eq!(p.evaluate(&[2.0, 5.0], &[]), 7.0);
        assert_eq!(SparsePolynomial::zero(2, 0).evaluate(&[9.0, 9.0], &[]), 0.0);
    }

    #[test]
    fn symbolic_determinant_two_by_two() {
        // det [[x, 1], [1, x]] = x^2 - 1
        let x = xvar(1, 0);
        let one = SparsePolynomial::from_int_terms(1, 0, &[(1, &[0], &[])]);
        let m = PolyMatrix::from_entries(2, vec![x.clone(), one.clone(), one.clone(), x.clone()]);
        let det = m.determinant().unwrap();
        let expected = SparsePolynomial::from_int_terms(1, 0, &[(1, &[2], &[]), (-1, &[0], &[])]);
        assert_eq!(det, expected);
    }

    #[test]
    fn display_renders_signs_and_powers() {
        let p = SparsePolynomial::from_int_terms(2, 1, &[(1, &[0, 1], &[0]), (-2, &[1, 1], &[1])]);
        assert_eq!(p.display_with(&["x1", "x2"], &["k1"]), "x2 - 2*k1*x1*x2");
    }
}
