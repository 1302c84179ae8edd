//! Standard complexes: Taylor and Scarf complexes of a monomial ideal, and
//! minimal CW structures on spheres, real projective spaces and tori.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{CellComplex, CellId, CellRecord, ComplexError};
use crate::monomials::{Monomial, MonomialIdeal, Ring};

/// Subset enumeration stores one lcm per subset; beyond this many generators
/// the Taylor and Scarf constructions are refused.
pub const MAX_SUBSET_GENERATORS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("dimension must be at least 1, got {0}")]
    Dimension(i64),
    #[error("{0} generators is too many for subset enumeration (limit {MAX_SUBSET_GENERATORS})")]
    TooManyGenerators(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Id of the simplex on the given 0-based generator indices: `"1,3,4"`.
pub fn simplex_id(indices: impl IntoIterator<Item = usize>) -> CellId {
    let parts: Vec<String> = indices.into_iter().map(|i| (i + 1).to_string()).collect();
    CellId::new(parts.join(","))
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// lcm of every nonempty subset, indexed by bitmask (index 0 holds `1`).
fn subset_lcms(ideal: &MonomialIdeal) -> Result<Vec<Monomial>, ConstructionError> {
    let gens = ideal.generators();
    if gens.len() > MAX_SUBSET_GENERATORS {
        return Err(ConstructionError::TooManyGenerators(gens.len()));
    }
    let mut lcms = Vec::with_capacity(1 << gens.len());
    lcms.push(ideal.ring().one());
    for mask in 1u32..(1 << gens.len()) {
        let low = mask.trailing_zeros() as usize;
        let rest = lcms[(mask & (mask - 1)) as usize].join(&gens[low]);
        lcms.push(rest);
    }
    Ok(lcms)
}

/// Cells on the given subsets with simplicial signs: removing the `i`-th
/// member (0-based, in generator order) has degree `(-1)^i`.
fn simplicial_complex(
    ring: &Ring,
    masks: impl Iterator<Item = u32>,
    lcms: &[Monomial],
) -> Result<CellComplex, ConstructionError> {
    let records = masks
        .map(|mask| {
            let boundary = if mask.count_ones() == 1 {
                Vec::new()
            } else {
                members(mask)
                    .enumerate()
                    .map(|(pos, g)| {
                        let face = mask & !(1 << g);
                        let sign = if pos % 2 == 0 { 1 } else { -1 };
                        (simplex_id(members(face)), sign)
                    })
                    .collect()
            };
            CellRecord {
                id: simplex_id(members(mask)),
                dim: mask.count_ones() as usize - 1,
                label: lcms[mask as usize].clone(),
                boundary,
            }
        })
        .collect();
    Ok(CellComplex::from_records(ring.clone(), records)?)
}

/// The full simplex on the minimal generators, each face labeled by the lcm
/// of its vertices.
pub fn taylor_complex(ideal: &MonomialIdeal) -> Result<CellComplex, ConstructionError> {
    let lcms = subset_lcms(ideal)?;
    let q = ideal.len() as u32;
    simplicial_complex(ideal.ring(), 1..(1u32 << q), &lcms)
}

/// The subcomplex of the Taylor complex on subsets whose lcm is shared with
/// no other subset.
///
/// Enumerates all `2^q - 1` subsets, so the cost is exponential in the number
/// of generators.
pub fn scarf_complex(ideal: &MonomialIdeal) -> Result<CellComplex, ConstructionError> {
    let lcms = subset_lcms(ideal)?;
    let mut counts: HashMap<&Monomial, usize> = HashMap::new();
    for l in &lcms[1..] {
        *counts.entry(l).or_default() += 1;
    }
    let q = ideal.len() as u32;
    let unique = (1..(1u32 << q)).filter(|&m| counts[&lcms[m as usize]] == 1);
    simplicial_complex(ideal.ring(), unique, &lcms)
}

fn check_dim(n: i64) -> Result<usize, ConstructionError> {
    if n >= 1 {
        Ok(n as usize)
    } else {
        Err(ConstructionError::Dimension(n))
    }
}

fn unit_cell(ring: &Ring, id: String, dim: usize, boundary: Vec<(CellId, i64)>) -> CellRecord {
    CellRecord {
        id: CellId::new(id),
        dim,
        label: ring.one(),
        boundary,
    }
}

/// One 0-cell and one n-cell. For `n = 1` the edge is a loop recorded with
/// degree 0; for larger `n` the top cell has no recorded boundary.
pub fn sphere_complex(ring: &Ring, n: i64) -> Result<CellComplex, ConstructionError> {
    let n = check_dim(n)?;
    let top_boundary = if n == 1 {
        vec![(CellId::from("c0"), 0)]
    } else {
        Vec::new()
    };
    let records = vec![
        unit_cell(ring, "c0".into(), 0, Vec::new()),
        unit_cell(ring, format!("c{n}"), n, top_boundary),
    ];
    Ok(CellComplex::from_records(ring.clone(), records)?)
}

/// One cell `c_k` per dimension `0..=n`, with `alpha(c_k, c_{k-1}) = 1 + (-1)^k`.
pub fn rpn_complex(ring: &Ring, n: i64) -> Result<CellComplex, ConstructionError> {
    let n = check_dim(n)?;
    let records = (0..=n)
        .map(|k| {
            let boundary = if k == 0 {
                Vec::new()
            } else {
                let degree = if k % 2 == 0 { 2 } else { 0 };
                vec![(CellId::new(format!("c{}", k - 1)), degree)]
            };
            unit_cell(ring, format!("c{k}"), k, boundary)
        })
        .collect();
    Ok(CellComplex::from_records(ring.clone(), records)?)
}

fn torus_id(mask: u32) -> String {
    let parts: Vec<String> = members(mask).map(|i| (i + 1).to_string()).collect();
    format!("t{{{}}}", parts.join(","))
}

/// The product cell structure on `n` circles: one cell per subset of
/// `{1..n}`, every attaching degree 0.
pub fn torus_complex(ring: &Ring, n: i64) -> Result<CellComplex, ConstructionError> {
    let n = check_dim(n)?;
    if n > MAX_SUBSET_GENERATORS {
        return Err(ConstructionError::TooManyGenerators(n));
    }
    let records = (0u32..(1 << n))
        .map(|mask| {
            let boundary = members(mask)
                .map(|i| (CellId::new(torus_id(mask & !(1 << i))), 0))
                .collect();
            unit_cell(ring, torus_id(mask), mask.count_ones() as usize, boundary)
        })
        .collect();
    Ok(CellComplex::from_records(ring.clone(), records)?)
}
