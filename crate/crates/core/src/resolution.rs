//! Whether a labeled complex supports a free resolution, whether that
//! resolution is minimal, and its Betti numbers.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellComplex, CellId, ComplexError};
use crate::homology::{homology_at, label_lattice};
use crate::monomials::{Monomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("complex has no vertices, so it resolves no ideal")]
    NoVertices,
    #[error(
        "complex is not a resolution: H_{degree} has rank {rank} in multidegree {multidegree}"
    )]
    NotAResolution {
        multidegree: String,
        degree: i64,
        rank: usize,
    },
    #[error("complex is not minimal: cell {cell} and its face {face} share the label {label}")]
    NotMinimal {
        cell: CellId,
        face: CellId,
        label: String,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Nonzero homology `rank` in homological degree `degree` at `multidegree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub multidegree: Monomial,
    pub degree: i64,
    pub rank: usize,
}

/// Checks acyclicity of every `X_{<=b}` for `b` in the lcm lattice of the
/// cell labels, in increasing order. Returns the first failure.
pub fn resolution_witness(x: &CellComplex) -> Result<Option<Witness>, ResolutionError> {
    if x.cells_of_dim(0).is_empty() {
        return Err(ResolutionError::NoVertices);
    }
    for b in label_lattice(x) {
        let h = homology_at(x, &b)?;
        let failure = h
            .groups()
            .find(|(d, g)| *d >= 0 && g.rank() > 0)
            .map(|(degree, g)| (degree, g.rank()));
        if let Some((degree, rank)) = failure {
            return Ok(Some(Witness {
                multidegree: b,
                degree,
                rank,
            }));
        }
    }
    Ok(None)
}

pub fn is_resolution(x: &CellComplex) -> Result<bool, ResolutionError> {
    Ok(resolution_witness(x)?.is_none())
}

/// First incidence with nonzero degree whose two labels agree.
pub fn minimality_violation(x: &CellComplex) -> Option<(CellId, CellId)> {
    x.cells().iter().find_map(|c| {
        c.boundary().iter().find_map(|&(t, alpha)| {
            let face = &x.cells()[t];
            (alpha != 0 && face.label() == c.label()).then(|| (c.id().clone(), face.id().clone()))
        })
    })
}

/// Label inequality across every nonzero incidence; exactness is not
/// consulted.
pub fn is_minimal(x: &CellComplex) -> bool {
    minimality_violation(x).is_none()
}

/// Betti numbers `beta_{i,b}` of the minimal resolution a complex supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    ring: Ring,
    shifted: bool,
    entries: BTreeMap<i64, BTreeMap<Monomial, usize>>,
}

impl BettiTable {
    /// Requires `x` to be a minimal resolution. When `shifted`, an `i`-cell
    /// counts in homological degree `i + 1` and degree 0 holds the ring
    /// itself; otherwise an `i`-cell counts in degree `i`.
    pub fn new(x: &CellComplex, shifted: bool) -> Result<Self, ResolutionError> {
        if let Some(w) = resolution_witness(x)? {
            return Err(ResolutionError::NotAResolution {
                multidegree: x.ring().render(&w.multidegree),
                degree: w.degree,
                rank: w.rank,
            });
        }
        if let Some((cell, face)) = minimality_violation(x) {
            let label = x.ring().render(x.cell(&cell).expect("found above").label());
            return Err(ResolutionError::NotMinimal { cell, face, label });
        }
        let offset = i64::from(shifted);
        let mut entries: BTreeMap<i64, BTreeMap<Monomial, usize>> = BTreeMap::new();
        if shifted {
            entries.entry(0).or_default().insert(x.ring().one(), 1);
        }
        for c in x.cells() {
            *entries
                .entry(c.dim() as i64 + offset)
                .or_default()
                .entry(c.label().clone())
                .or_default() += 1;
        }
        Ok(BettiTable {
            ring: x.ring().clone(),
            shifted,
            entries,
        })
    }

    pub fn get(&self, degree: i64, multidegree: &Monomial) -> usize {
        self.entries
            .get(&degree)
            .and_then(|m| m.get(multidegree))
            .copied()
            .unwrap_or(0)
    }

    pub fn totals(&self) -> Vec<usize> {
        self.entries.values().map(|m| m.values().sum()).collect()
    }

    pub fn entries(&self) -> &BTreeMap<i64, BTreeMap<Monomial, usize>> {
        &self.entries
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }
}

impl fmt::Display for BettiTable {
    /// One row per homological degree: total, then `count:multidegree` pairs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .keys()
            .map(|d| d.to_string().len())
            .max()
            .unwrap_or(1);
        let total_width = self
            .totals()
            .iter()
            .map(|t| t.to_string().len())
            .max()
            .unwrap_or(1);
        writeln!(f, "{:>width$} | {:>total_width$} | multidegrees", "i", "β")?;
        for (d, row) in &self.entries {
            let total: usize = row.values().sum();
            let parts: Vec<String> = row
                .iter()
                .map(|(m, n)| format!("{n}:{}", self.ring.render(m)))
                .collect();
            writeln!(
                f,
                "{d:>width$} | {total:>total_width$} | {}",
                parts.join(" ")
            )?;
        }
        Ok(())
    }
}

pub fn betti_table(x: &CellComplex, shifted: bool) -> Result<BettiTable, ResolutionError> {
    BettiTable::new(x, shifted)
}
