use rand::rngs::StdRng;
use rand::Rng;

use crn_core::model::{Complex, RateSymbol, RawReaction, ReactionNetwork};

/// Random small network: up to `n_max` species, up to `m_max` reactions,
/// stoichiometric coefficients up to `coeff_max`. Retries until a valid
/// network (distinct complexes per reaction, no duplicate reactions after
/// canonicalization) is produced.
pub fn random_network(
    rng: &mut StdRng,
    n_max: usize,
    m_max: usize,
    coeff_max: u32,
) -> ReactionNetwork {
    loop {
        let n = rng.random_range(2..=n_max);
        let m = rng.random_range(2..=m_max);
        let mut raw = Vec::with_capacity(m);
        for _ in 0..m {
            let source: Vec<u32> = (0..n).map(|_| rng.random_range(0..=coeff_max)).collect();
            let target: Vec<u32> = (0..n).map(|_| rng.random_range(0..=coeff_max)).collect();
            if source == target {
                continue;
            }
            raw.push(RawReaction::new(
                Complex::new(source),
                Complex::new(target),
                RateSymbol::anonymous(),
            ));
        }
        if raw.len() < 2 {
            continue;
        }
        let names = (0..n).map(|i| format!("S{i}")).collect();
        if let Ok(net) = ReactionNetwork::new(names, raw, None, None) {
            return net;
        }
    }
}

/// Positive random vector with entries in [lo, hi].
pub fn random_positive(rng: &mut StdRng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(lo..hi)).collect()
}
