//! Core network representation: species, complexes, reactions and the
//! reaction network itself, together with elementary structural quantities
//! (stoichiometric matrix, rank of the stoichiometric subspace, complex
//! balance check).
//!
//! Networks are immutable after construction. The constructor canonicalizes
//! its input: duplicate (source, target) pairs are merged by summing rate
//! values, reactions are sorted into a fixed order, unbound rate symbols get
//! default `k{i}` names, and mutually reverse reactions are tagged as a
//! reversible pair.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{CrnError, Result};
use crate::exact;

/// Hard limit on the species count; keeps exact determinant work desk-scale.
pub const MAX_SPECIES: usize = 64;

/// Reserved rate-symbol name for the input parameter.
pub const INPUT_RATE_NAME: &str = "zeta";

/// One chemical species: a 0-based index into the network plus a unique name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpeciesId {
    pub index: usize,
    pub name: String,
}

/// A complex: a vector of nonnegative integer stoichiometric coefficients,
/// one per species. The empty complex is the zero vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Complex {
    coeffs: Vec<u32>,
}

impl Complex {
    pub fn new(coeffs: Vec<u32>) -> Self {
        Complex { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Complex { coeffs: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty_complex(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Copy with the coefficient of species `i` replaced by `c`.
    pub fn with_coeff(&self, i: usize, c: u32) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[i] = c;
        Complex { coeffs }
    }

    /// Copy with species reordered so that new index `i` holds the old
    /// coefficient `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Complex {
            coeffs: perm.iter().map(|&old| self.coeffs[old]).collect(),
        }
    }
}

/// A rate constant: a symbolic name, an optional positive numeric value and
/// a flag marking it as the input parameter of the augmented system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSymbol {
    pub name: String,
    pub value: Option<f64>,
    pub is_input: bool,
}

impl RateSymbol {
    /// Anonymous symbol; the network constructor assigns a default name.
    pub fn anonymous() -> Self {
        RateSymbol {
            name: String::new(),
            value: None,
            is_input: false,
        }
    }

    pub fn named(name: impl Into<String>) -> Self {
        RateSymbol {
            name: name.into(),
            value: None,
            is_input: false,
        }
    }

    pub fn with_value(name: impl Into<String>, value: f64) -> Self {
        RateSymbol {
            name: name.into(),
            value: Some(value),
            is_input: false,
        }
    }

    /// The reserved input-rate symbol.
    pub fn input() -> Self {
        RateSymbol {
            name: INPUT_RATE_NAME.to_string(),
            value: None,
            is_input: true,
        }
    }
}

/// One irreversible reaction `source -> target` with its rate symbol.
/// `pair` is the index of the reverse reaction when both directions are
/// present in the network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reaction {
    pub source: Complex,
    pub target: Complex,
    pub rate: RateSymbol,
    pub pair: Option<usize>,
}

impl Reaction {
    /// Reaction vector target - source as signed integers.
    pub fn stoichiometric_column(&self) -> Vec<i64> {
        self.source
            .coeffs()
            .iter()
            .zip(self.target.coeffs())
            .map(|(&s, &t)| t as i64 - s as i64)
            .collect()
    }
}

/// Raw reaction data fed to the network constructor, before canonicalization.
#[derive(Debug, Clone)]
pub struct RawReaction {
    pub source: Complex,
    pub target: Complex,
    pub rate: RateSymbol,
}

impl RawReaction {
    pub fn new(source: Complex, target: Complex, rate: RateSymbol) -> Self {
        RawReaction {
            source,
            target,
            rate,
        }
    }
}

/// A mass-action reaction network over a fixed species list, with designated
/// input and output species.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReactionNetwork {
    species: Vec<SpeciesId>,
    reactions: Vec<Reaction>,
    input_species: usize,
    output_species: usize,
}

impl ReactionNetwork {
    /// Build and canonicalize a network. `input`/`output` default to the
    /// first and last species.
    pub fn new(
        species_names: Vec<String>,
        raw: Vec<RawReaction>,
        input: Option<usize>,
        output: Option<usize>,
    ) -> Result<Self> {
        let n = species_names.len();
        if n < 2 {
            return Err(CrnError::Invalid(format!(
                "a network needs at least 2 species, got {n}"
            )));
        }
        if n > MAX_SPECIES {
            return Err(CrnError::Invalid(format!(
                "networks with more than {MAX_SPECIES} species are not supported (got {n})"
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &species_names {
            if name.is_empty() {
                return Err(CrnError::Invalid("empty species name".into()));
            }
            if !seen.insert(name.clone()) {
                return Err(CrnError::Invalid(format!(
                    "duplicate species name `{name}`"
                )));
            }
        }

        for r in &raw {
            if r.source.len() != n || r.target.len() != n {
                return Err(CrnError::Invalid(
                    "complex length does not match species count".into(),
                ));
            }
            if r.source == r.target {
                return Err(CrnError::Invalid(format!(
                    "trivial reaction: source equals target ({:?})",
                    r.source.coeffs()
                )));
            }
        }

        // Merge duplicate (source, target) pairs: values sum when all bound,
        // symbolic rates get a fresh sum symbol.
        let mut groups: BTreeMap<(Complex, Complex), Vec<RateSymbol>> = BTreeMap::new();
        for r in raw {
            groups.entry((r.source, r.target)).or_default().push(r.rate);
        }
        let mut reactions: Vec<Reaction> = Vec::with_capacity(groups.len());
        for ((source, target), rates) in groups {
            let rate = if rates.len() == 1 {
                rates.into_iter().next().unwrap()
            } else {
                let value = rates
                    .iter()
                    .map(|r| r.value)
                    .try_fold(0.0, |acc, v| v.map(|v| acc + v));
                let is_input = rates.iter().any(|r| r.is_input);
                let named: Vec<&str> = rates
                    .iter()
                    .map(|r| r.name.as_str())
                    .filter(|s| !s.is_empty())
                    .collect();
                let name = if named.is_empty() {
                    String::new()
                } else {
                    named.join("_plus_")
                };
                RateSymbol {
                    name,
                    value,
                    is_input,
                }
            };
            reactions.push(Reaction {
                source,
                target,
                rate,
                pair: None,
            });
        }

        // BTreeMap iteration already ordered by (source, target): canonical.
        Self::assign_default_rate_names(&mut reactions)?;

        let inputs: Vec<usize> = reactions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.rate.is_input)
            .map(|(i, _)| i)
            .collect();
        if inputs.len() > 1 {
            return Err(CrnError::Invalid(
                "more than one reaction is flagged as the input rate".into(),
            ));
        }
        for r in &reactions {
            if let Some(v) = r.rate.value {
                if !(v > 0.0) {
                    return Err(CrnError::Invalid(format!(
                        "rate `{}` must be positive, got {v}",
                        r.rate.name
                    )));
                }
            }
        }

        Self::derive_pairs(&mut reactions);

        let input_species = input.unwrap_or(0);
        let output_species = output.unwrap_or(n - 1);
        if input_species >= n || output_species >= n {
            return Err(CrnError::Invalid(
                "input/output species out of range".into(),
            ));
        }
        if input_species == output_species {
            return Err(CrnError::Invalid(
                "input and output species must differ".into(),
            ));
        }

        Ok(ReactionNetwork {
            species: species_names
                .into_iter()
                .enumerate()
                .map(|(index, name)| SpeciesId { index, name })
                .collect(),
            reactions,
            input_species,
            output_species,
        })
    }

    fn assign_default_rate_names(reactions: &mut [Reaction]) -> Result<()> {
        let mut used: BTreeSet<String> = BTreeSet::new();
        for r in reactions.iter() {
            if !r.rate.name.is_empty() && !used.insert(r.rate.name.clone()) {
                return Err(CrnError::Invalid(format!(
                    "rate symbol `{}` bound to more than one reaction",
                    r.rate.name
                )));
            }
        }
        let mut counter = 0usize;
        for (idx, r) in reactions.iter_mut().enumerate() {
            if r.rate.name.is_empty() {
                counter = counter.max(idx + 1);
                let mut candidate = format!("k{counter}");
                while used.contains(&candidate) {
                    counter += 1;
                    candidate = format!("k{counter}");
                }
                used.insert(candidate.clone());
                r.rate.name = candidate;
            }
            if r.rate.name == INPUT_RATE_NAME {
                r.rate.is_input = true;
            }
        }
        Ok(())
    }

    fn derive_pairs(reactions: &mut [Reaction]) {
        let index: BTreeMap<(Complex, Complex), usize> = reactions
            .iter()
            .enumerate()
            .map(|(i, r)| ((r.source.clone(), r.target.clone()), i))
            .collect();
        for i in 0..reactions.len() {
            let key = (reactions[i].target.clone(), reactions[i].source.clone());
            if let Some(&j) = index.get(&key) {
                reactions[i].pair = Some(j);
                reactions[j].pair = Some(i);
            }
        }
    }

    pub fn n_species(&self) -> usize {
        self.species.len()
    }

    pub fn n_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species(&self) -> &[SpeciesId] {
        &self.species
    }

    pub fn species_names(&self) -> Vec<&str> {
        self.species.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn input_species(&self) -> usize {
        self.input_species
    }

    pub fn output_species(&self) -> usize {
        self.output_species
    }

    /// Same network with different input/output designations.
    pub fn with_io(&self, input: usize, output: usize) -> Result<Self> {
        if input >= self.n_species() || output >= self.n_species() {
            return Err(CrnError::Invalid(
                "input/output species out of range".into(),
            ));
        }
        if input == output {
            return Err(CrnError::Invalid(
                "input and output species must differ".into(),
            ));
        }
        let mut net = self.clone();
        net.input_species = input;
        net.output_species = output;
        Ok(net)
    }

    /// Index of the reaction flagged as carrying the input rate, if any.
    pub fn input_reaction(&self) -> Option<usize> {
        self.reactions.iter().position(|r| r.rate.is_input)
    }

    /// n x m matrix whose column j is target_j - source_j.
    pub fn stoichiometric_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_species();
        let m = self.n_reactions();
        let mut mat = vec![vec![0i64; m]; n];
        for (j, r) in self.reactions.iter().enumerate() {
            for (i, v) in r.stoichiometric_column().into_iter().enumerate() {
                mat[i][j] = v;
            }
        }
        mat
    }

    /// Exact rank of the stoichiometric matrix over the rationals.
    pub fn stoich_subspace_dim(&self) -> usize {
        let mat: Vec<Vec<BigInt>> = self
            .stoichiometric_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(BigInt::from).collect())
            .collect();
        exact::rank(mat)
    }

    /// Complex-balance check at a positive point for a bound rate vector
    /// (one value per reaction, canonical order): for every vertex y the
    /// total outgoing flux equals the total incoming flux within 1e-12.
    pub fn is_complex_balanced(&self, k: &[f64], x0: &[f64]) -> Result<bool> {
        if k.len() != self.n_reactions() || x0.len() != self.n_species() {
            return Err(CrnError::Domain(
                "rate/point dimension does not match the network".into(),
            ));
        }
        if x0.iter().any(|&v| !(v > 0.0)) {
            return Err(CrnError::Domain("point must be strictly positive".into()));
        }
        if k.iter().any(|&v| !(v > 0.0)) {
            return Err(CrnError::Domain("rates must be strictly positive".into()));
        }
        let monomial = |c: &Complex| -> f64 {
            c.coeffs()
                .iter()
                .zip(x0)
                .map(|(&e, &x)| x.powi(e as i32))
                .product()
        };
        let mut vertices: BTreeSet<&Complex> = BTreeSet::new();
        for r in &self.reactions {
            vertices.insert(&r.source);
            vertices.insert(&r.target);
        }
        for y in vertices {
            let mut out = 0.0;
            let mut inflow = 0.0;
            for (j, r) in self.reactions.iter().enumerate() {
                if &r.source == y {
                    out += k[j] * monomial(&r.source);
                }
                if &r.target == y {
                    inflow += k[j] * monomial(&r.source);
                }
            }
            if (out - inflow).abs() > 1e-12 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Bind one numeric value per reaction: explicit symbol values first,
    /// then `overrides` by symbol name, then `default` for anything left.
    pub fn bind_rates(
        &self,
        overrides: &[(String, f64)],
        default: Option<f64>,
    ) -> Result<Vec<f64>> {
        let mut values = Vec::with_capacity(self.n_reactions());
        for r in &self.reactions {
            let over = overrides
                .iter()
                .rev()
                .find(|(name, _)| *name == r.rate.name)
                .map(|(_, v)| *v);
            let v = over.or(r.rate.value).or(default);
            match v {
                Some(v) if v > 0.0 => values.push(v),
                Some(v) => {
                    return Err(CrnError::Domain(format!(
                        "rate `{}` must be positive, got {v}",
                        r.rate.name
                    )))
                }
                None => return Err(CrnError::UnboundRate(r.rate.name.clone())),
            }
        }
        Ok(values)
    }

    /// Same network with species renumbered so that new index i refers to
    /// old species `perm[i]`. Input/output designations follow.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_species();
        if perm.len() != n {
            return Err(CrnError::Invalid("permutation length mismatch".into()));
        }
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(CrnError::Invalid("not a permutation".into()));
            }
            inverse[old] = new;
        }
        let names = perm
            .iter()
            .map(|&old| self.species[old].name.clone())
            .collect();
        let raw = self
            .reactions
            .iter()
            .map(|r| RawReaction {
                source: r.source.permuted(perm),
                target: r.target.permuted(perm),
                rate: r.rate.clone(),
            })
            .collect();
        ReactionNetwork::new(
            names,
            raw,
            Some(inverse[self.input_species]),
            Some(inverse[self.output_species]),
        )
    }
}
