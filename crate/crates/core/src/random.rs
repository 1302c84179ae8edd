//! Seeded random monomial ideals for property tests and the
//! `gen-random-ideal` command.

use std::collections::BTreeSet;

use rand::Rng;

use crate::monomials::{Monomial, MonomialIdeal, Ring};

/// Rejection sampling gives up after this many draws.
pub const MAX_ATTEMPTS: usize = 10_000;

fn random_monomial<R: Rng>(rng: &mut R, ring: &Ring, max_exponent: u32) -> Monomial {
    loop {
        let m =
            Monomial::from_exponents((0..ring.num_vars()).map(|_| rng.gen_range(0..=max_exponent)));
        if !m.is_one() {
            return m;
        }
    }
}

/// At most `generators` minimal generators with exponents in
/// `0..=max_exponent`, none of them `1`. Returns `None` when
/// `generators` or `max_exponent` is zero.
pub fn random_ideal<R: Rng>(
    rng: &mut R,
    ring: &Ring,
    generators: usize,
    max_exponent: u32,
) -> Option<MonomialIdeal> {
    if generators == 0 || max_exponent == 0 {
        return None;
    }
    let gens: Vec<Monomial> = (0..generators)
        .map(|_| random_monomial(rng, ring, max_exponent))
        .collect();
    Some(MonomialIdeal::minimalize(ring, &gens).expect("generated in the ring"))
}

/// No two generators share a nonzero exponent in any variable.
pub fn is_generic(ideal: &MonomialIdeal) -> bool {
    (0..ideal.ring().num_vars()).all(|v| {
        let mut seen = BTreeSet::new();
        ideal
            .generators()
            .iter()
            .map(|g| &g.exponents()[v])
            .filter(|e| !num_traits::Zero::is_zero(*e))
            .all(|e| seen.insert(e))
    })
}

/// A generic ideal with exactly `generators` minimal generators, by rejection
/// sampling.
pub fn random_generic_ideal<R: Rng>(
    rng: &mut R,
    ring: &Ring,
    generators: usize,
    max_exponent: u32,
) -> Option<MonomialIdeal> {
    (0..MAX_ATTEMPTS).find_map(|_| {
        random_ideal(rng, ring, generators, max_exponent)
            .filter(|i| i.len() == generators && is_generic(i))
    })
}
