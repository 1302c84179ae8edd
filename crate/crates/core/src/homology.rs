//! Chain complexes of free modules supported on labeled cell complexes, and
//! their homology.
//!
//! The differential of the complex supported on `X` sends the generator of a
//! cell `C` to `sum_D alpha(C, D) * (m_C / m_D) * e_D`. In reduced form a rank
//! one module sits in homological degree -1 and each vertex maps to its label.
//!
//! Homology in multidegree `b` equals the reduced cellular homology of the
//! subcomplex of cells whose labels divide `b`; [`graded_homology`] evaluates
//! this on the lcm lattice of the cell labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::complex::{CellComplex, CellId, ComplexError};
use crate::linalg::IntegerMatrix;
use crate::monomials::{lcm_lattice, Field, Monomial, MonomialError, Ring};

/// Coefficients for cellular homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Rationals,
    Prime(u64),
    Integers,
}

impl From<Field> for Coefficients {
    fn from(f: Field) -> Self {
        match f {
            Field::Rationals => Coefficients::Rationals,
            Field::Prime(p) => Coefficients::Prime(p),
        }
    }
}

impl FromStr for Coefficients {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" | "ZZ" => Ok(Coefficients::Integers),
            other => other.parse::<Field>().map(Into::into),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Rationals => write!(f, "QQ"),
            Coefficients::Prime(p) => write!(f, "ZZ/{p}"),
            Coefficients::Integers => write!(f, "ZZ"),
        }
    }
}

/// A basis element of a chain module: a cell, or the ambient generator in
/// degree -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub cell: Option<CellId>,
    pub label: Monomial,
}

impl BasisElement {
    pub fn name(&self) -> &str {
        self.cell.as_ref().map_or("ambient", CellId::as_str)
    }
}

/// A nonzero entry `coefficient * monomial` of a differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub coefficient: i64,
    pub monomial: Monomial,
}

/// The differential leaving homological degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub degree: i64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl Differential {
    /// The integer matrix of coefficients, monomials dropped.
    pub fn coefficient_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for e in &self.entries {
            m.set(e.row, e.col, e.coefficient.into());
        }
        m
    }
}

/// The complex `F(X)` with its bases and symbolic differentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplexData {
    ring: Ring,
    lo: i64,
    bases: Vec<Vec<BasisElement>>,
    /// `differentials[k]` maps `bases[k + 1]` to `bases[k]`.
    differentials: Vec<Differential>,
}

impl ChainComplexData {
    pub fn new(x: &CellComplex, reduced: bool) -> Self {
        let ring = x.ring().clone();
        let top = x.max_dim();
        let mut bases: Vec<Vec<BasisElement>> = Vec::new();
        if reduced {
            bases.push(vec![BasisElement {
                cell: None,
                label: ring.one(),
            }]);
        }
        if let Some(top) = top {
            for d in 0..=top {
                bases.push(
                    x.cells_of_dim(d)
                        .iter()
                        .map(|c| BasisElement {
                            cell: Some(c.id().clone()),
                            label: c.label().clone(),
                        })
                        .collect(),
                );
            }
        }
        let lo = if reduced { -1 } else { 0 };

        let mut differentials = Vec::new();
        for k in 0..bases.len().saturating_sub(1) {
            let degree = lo + k as i64 + 1;
            let entries = if degree == 0 {
                // augmentation
                x.cells_of_dim(0)
                    .iter()
                    .enumerate()
                    .map(|(col, v)| Entry {
                        row: 0,
                        col,
                        coefficient: 1,
                        monomial: v.label().clone(),
                    })
                    .collect()
            } else {
                let d = degree as usize;
                let row_offset = x.dim_offset(d - 1);
                let mut entries = Vec::new();
                for (col, c) in x.cells_of_dim(d).iter().enumerate() {
                    for &(t, alpha) in c.boundary() {
                        if alpha == 0 {
                            continue;
                        }
                        let target = &x.cells()[t];
                        let monomial = c
                            .label()
                            .quotient(target.label())
                            .ok()
                            .flatten()
                            .expect("labels of a valid complex divide along incidences");
                        entries.push(Entry {
                            row: t - row_offset,
                            col,
                            coefficient: alpha,
                            monomial,
                        });
                    }
                }
                entries.sort_by_key(|e| (e.row, e.col));
                entries
            };
            differentials.push(Differential {
                degree,
                rows: bases[k].len(),
                cols: bases[k + 1].len(),
                entries,
            });
        }
        ChainComplexData {
            ring,
            lo,
            bases,
            differentials,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Lowest homological degree, or `None` for the zero complex.
    pub fn lo(&self) -> Option<i64> {
        (!self.bases.is_empty()).then_some(self.lo)
    }

    pub fn hi(&self) -> Option<i64> {
        (!self.bases.is_empty()).then(|| self.lo + self.bases.len() as i64 - 1)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.bases.len()).map(|k| self.lo + k as i64)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.basis(degree).map_or(0, <[_]>::len)
    }

    pub fn basis(&self, degree: i64) -> Option<&[BasisElement]> {
        let k = usize::try_from(degree - self.lo).ok()?;
        self.bases.get(k).map(Vec::as_slice)
    }

    /// The differential leaving `degree`.
    pub fn differential(&self, degree: i64) -> Option<&Differential> {
        let k = usize::try_from(degree - self.lo - 1).ok()?;
        self.differentials.get(k)
    }

    pub fn differentials(&self) -> &[Differential] {
        &self.differentials
    }

    /// Re-indexes so the module in degree `i` moves to degree `i - s`.
    pub fn shift(&self, s: i64) -> ChainComplexData {
        let mut out = self.clone();
        out.lo -= s;
        for d in &mut out.differentials {
            d.degree -= s;
        }
        out
    }

    /// Checks that each composite of consecutive differentials vanishes,
    /// multiplying monomials symbolically.
    pub fn composites_vanish(&self) -> bool {
        self.differentials.windows(2).all(|pair| {
            let (lower, upper) = (&pair[0], &pair[1]);
            let mut sums: BTreeMap<(usize, usize, Monomial), i64> = BTreeMap::new();
            for u in &upper.entries {
                for l in lower.entries.iter().filter(|l| l.col == u.row) {
                    let m = l.monomial.mul(&u.monomial).expect("same ring");
                    *sums.entry((l.row, u.col, m)).or_default() += l.coefficient * u.coefficient;
                }
            }
            sums.values().all(|&v| v == 0)
        })
    }

    /// Homology of the coefficient complex (labels forgotten).
    pub fn homology(&self, coefficients: Coefficients) -> Homology {
        let matrices: Vec<IntegerMatrix> = self
            .differentials
            .iter()
            .map(Differential::coefficient_matrix)
            .collect();
        let ranks: Vec<usize> = matrices
            .iter()
            .map(|m| match coefficients {
                Coefficients::Rationals | Coefficients::Integers => m.rank_rational(),
                Coefficients::Prime(p) => m.rank_mod_p(p),
            })
            .collect();
        let groups = (0..self.bases.len())
            .map(|k| {
                let outgoing = if k == 0 { 0 } else { ranks[k - 1] };
                let incoming = ranks.get(k).copied().unwrap_or(0);
                let rank = self.bases[k].len() - outgoing - incoming;
                match coefficients {
                    Coefficients::Integers => {
                        let torsion = matrices
                            .get(k)
                            .map(|m| {
                                m.invariant_factors()
                                    .into_iter()
                                    .filter(|d| !d.is_one())
                                    .collect()
                            })
                            .unwrap_or_default();
                        HomologyGroup::Integral {
                            free: rank,
                            torsion,
                        }
                    }
                    _ => HomologyGroup::Vector(rank),
                }
            })
            .collect();
        Homology {
            coefficients,
            lo: self.lo,
            groups,
        }
    }
}

impl fmt::Display for ChainComplexData {
    /// `S^1 <-- S^4 <-- S^4 <-- S^1` over a line of homological degrees.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bases.is_empty() {
            return writeln!(f, "0");
        }
        let modules: Vec<String> = self
            .bases
            .iter()
            .map(|b| format!("S^{}", b.len()))
            .collect();
        let degrees: Vec<String> = self.degrees().map(|d| d.to_string()).collect();
        let widths: Vec<usize> = modules
            .iter()
            .zip(&degrees)
            .map(|(m, d)| m.len().max(d.len()))
            .collect();
        let mut top = String::new();
        let mut bottom = String::new();
        for (i, w) in widths.iter().enumerate() {
            if i > 0 {
                top.push_str(" <-- ");
                bottom.push_str("     ");
            }
            top.push_str(&format!("{:<w$}", modules[i]));
            bottom.push_str(&format!("{:<w$}", degrees[i]));
        }
        writeln!(f, "{}", top.trim_end())?;
        writeln!(f, "{}", bottom.trim_end())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyGroup {
    /// Dimension over a field.
    Vector(usize),
    /// `ZZ^free` plus cyclic torsion summands.
    Integral { free: usize, torsion: Vec<BigInt> },
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        match self {
            HomologyGroup::Vector(r) => *r == 0,
            HomologyGroup::Integral { free, torsion } => *free == 0 && torsion.is_empty(),
        }
    }

    /// Free rank (the dimension over a field).
    pub fn rank(&self) -> usize {
        match self {
            HomologyGroup::Vector(r) => *r,
            HomologyGroup::Integral { free, .. } => *free,
        }
    }
}

/// Cellular homology with coefficients, one group per homological degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    coefficients: Coefficients,
    lo: i64,
    groups: Vec<HomologyGroup>,
}

impl Homology {
    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn group(&self, degree: i64) -> Option<&HomologyGroup> {
        let k = usize::try_from(degree - self.lo).ok()?;
        self.groups.get(k)
    }

    /// Rank in `degree`; zero outside the range of the complex.
    pub fn rank(&self, degree: i64) -> usize {
        self.group(degree).map_or(0, HomologyGroup::rank)
    }

    pub fn groups(&self) -> impl Iterator<Item = (i64, &HomologyGroup)> {
        self.groups
            .iter()
            .enumerate()
            .map(|(k, g)| (self.lo + k as i64, g))
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.groups.iter().map(HomologyGroup::rank).collect()
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .groups()
            .map(|(d, _)| d.to_string().len())
            .max()
            .unwrap_or(1);
        for (d, g) in self.groups() {
            write!(f, "{d:>width$} : ")?;
            match g {
                g if g.is_zero() => writeln!(f, "0")?,
                HomologyGroup::Vector(r) => writeln!(f, "{}^{r}", self.coefficients)?,
                HomologyGroup::Integral { free, torsion } => {
                    let mut parts = Vec::new();
                    if *free > 0 {
                        parts.push(format!("ZZ^{free}"));
                    }
                    parts.extend(torsion.iter().map(|t| format!("ZZ/{t}")));
                    writeln!(f, "{}", parts.join(" + "))?;
                }
            }
        }
        Ok(())
    }
}

/// Cellular homology of `x` with the given coefficients; labels are ignored.
pub fn coefficient_homology(
    x: &CellComplex,
    coefficients: Coefficients,
    reduced: bool,
) -> Homology {
    ChainComplexData::new(x, reduced).homology(coefficients)
}

/// Reduced homology ranks of the subcomplex of cells whose labels divide
/// `degree`, over the ring's field.
pub fn homology_at(x: &CellComplex, degree: &Monomial) -> Result<Homology, ComplexError> {
    let sub = x.restrict(degree)?;
    Ok(coefficient_homology(&sub, x.ring().field().into(), true))
}

/// Multigraded homology of the chain complex supported on a labeled complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHomology {
    ring: Ring,
    lo: i64,
    hi: i64,
    /// Nonzero ranks only: degree -> multidegree -> rank.
    ranks: BTreeMap<i64, BTreeMap<Monomial, usize>>,
    vertex_labels: Vec<Monomial>,
}

impl GradedHomology {
    pub fn rank_at(&self, degree: i64, multidegree: &Monomial) -> usize {
        self.ranks
            .get(&degree)
            .and_then(|m| m.get(multidegree))
            .copied()
            .unwrap_or(0)
    }

    /// Sum over the evaluated multidegrees.
    pub fn total(&self, degree: i64) -> usize {
        self.ranks.get(&degree).map_or(0, |m| m.values().sum())
    }

    /// Multidegrees carrying nonzero homology in `degree`.
    pub fn support(&self, degree: i64) -> Vec<(&Monomial, usize)> {
        self.ranks
            .get(&degree)
            .map(|m| m.iter().map(|(k, &v)| (k, v)).collect())
            .unwrap_or_default()
    }

    /// `true` when every homology in nonnegative degree vanishes.
    pub fn is_acyclic(&self) -> bool {
        (0..=self.hi).all(|d| self.total(d) == 0)
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for GradedHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .degrees()
            .map(|d| d.to_string().len())
            .max()
            .unwrap_or(1);
        for d in self.degrees() {
            write!(f, "{d:>width$} : ")?;
            if d == -1 {
                // H_{-1} is S / (vertex labels).
                if self.vertex_labels.is_empty() {
                    writeln!(f, "S^1")?;
                } else if self.vertex_labels.iter().any(Monomial::is_one) {
                    writeln!(f, "0")?;
                } else {
                    let labels: Vec<String> = self
                        .vertex_labels
                        .iter()
                        .map(|m| self.ring.render(m))
                        .collect();
                    writeln!(f, "cokernel | {} |", labels.join(" "))?;
                }
                continue;
            }
            let support = self.support(d);
            if support.is_empty() {
                writeln!(f, "0")?;
            } else {
                let at: Vec<String> = support
                    .iter()
                    .map(|(m, r)| {
                        if *r == 1 {
                            self.ring.render(m)
                        } else {
                            format!("{}({r})", self.ring.render(m))
                        }
                    })
                    .collect();
                writeln!(f, "S^{}  at {}", self.total(d), at.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Homology of `F(x)` in each of the given multidegrees; by default every
/// element of the lcm lattice of the cell labels.
pub fn graded_homology(
    x: &CellComplex,
    multidegrees: Option<&[Monomial]>,
) -> Result<GradedHomology, ComplexError> {
    let degrees: BTreeSet<Monomial> = match multidegrees {
        Some(given) => {
            for b in given {
                x.ring().check(b)?;
            }
            given.iter().cloned().collect()
        }
        None => label_lattice(x),
    };
    let mut ranks: BTreeMap<i64, BTreeMap<Monomial, usize>> = BTreeMap::new();
    for b in degrees {
        let h = homology_at(x, &b)?;
        for (d, g) in h.groups() {
            if g.rank() > 0 {
                ranks.entry(d).or_default().insert(b.clone(), g.rank());
            }
        }
    }
    Ok(GradedHomology {
        ring: x.ring().clone(),
        lo: -1,
        hi: x.max_dim().map_or(-1, |d| d as i64),
        ranks,
        vertex_labels: x.vertex_labels().into_iter().cloned().collect(),
    })
}

/// The lcm lattice of every cell label of `x`.
pub fn label_lattice(x: &CellComplex) -> BTreeSet<Monomial> {
    let labels: BTreeSet<Monomial> = x.cells().iter().map(|c| c.label().clone()).collect();
    let labels: Vec<Monomial> = labels.into_iter().collect();
    lcm_lattice(&labels).expect("labels share the complex's ring")
}
