//! Combinatorial cell complexes labeled by monomials.
//!
//! A cell records only its dimension, its label, and the integer attaching
//! degrees to cells one dimension lower. No topological data is kept.
//! [`CellComplex`] is the validated, immutable form: it satisfies the
//! boundary-squared condition, the 1-cell rule, and label divisibility along
//! every nonzero incidence.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntegerMatrix;
use crate::monomials::{Monomial, MonomialError, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error("cell `{0}`: boundary cells have mixed dimensions")]
    MixedBoundaryDimensions(CellId),
    #[error("cell `{cell}`: label is not divisible by the label of boundary cell `{boundary}`")]
    LabelNotDivisible { cell: CellId, boundary: CellId },
    #[error("cell `{cell}`: cannot infer attaching degrees ({reason})")]
    CannotInferDegrees { cell: CellId, reason: String },
    #[error("cell `{cell}` lists boundary cell `{target}` more than once")]
    DuplicateBoundary { cell: CellId, target: CellId },
    #[error("two different cells share the id `{0}`")]
    ConflictingDuplicate(CellId),
    #[error("cell `{cell}` refers to unknown cell `{target}`")]
    UnknownCell { cell: CellId, target: CellId },
    #[error(
        "cell `{cell}` of dimension {dim} has boundary cell `{target}` of dimension {target_dim}"
    )]
    BoundaryDimension {
        cell: CellId,
        dim: usize,
        target: CellId,
        target_dim: usize,
    },
    #[error("0-cell `{0}` has a nonempty boundary")]
    VertexWithBoundary(CellId),
    #[error("no label given for vertex `{0}`")]
    MissingVertexLabel(CellId),
    #[error("`{0}` is not a vertex of the complex")]
    NotAVertex(CellId),
    #[error("invalid cell complex: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Identifier of a cell. Ordered naturally, so `v2 < v10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(String);

impl CellId {
    pub fn new(id: impl Into<String>) -> Self {
        CellId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for CellId {
    fn from(s: &str) -> Self {
        CellId(s.to_string())
    }
}

impl From<String> for CellId {
    fn from(s: String) -> Self {
        CellId(s)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Ord for CellId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CellId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut a = a.as_bytes();
    let mut b = b.as_bytes();
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let na = trim_zeros(&a[..la]);
                let nb = trim_zeros(&b[..lb]);
                let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits
        .iter()
        .position(|&c| c != b'0')
        .unwrap_or(digits.len());
    &digits[start..]
}

/// A free-standing cell. Boundary cells are shared, so complexes can be
/// assembled from their maximal cells. A label of `None` is the unit monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    id: CellId,
    dim: usize,
    boundary: Vec<(Arc<Cell>, i64)>,
    label: Option<Monomial>,
}

impl Cell {
    pub fn vertex(id: impl Into<CellId>, label: Option<Monomial>) -> Arc<Cell> {
        Arc::new(Cell {
            id: id.into(),
            dim: 0,
            boundary: Vec::new(),
            label,
        })
    }

    /// Creates a cell over `boundary`, inferring the attaching degrees.
    ///
    /// An edge over two distinct vertices gets `(+1, -1)` in listed order and
    /// an edge over a single vertex is a loop with degree 0. Higher cells are
    /// oriented so that the boundary squares to zero: whenever a face of
    /// codimension two lies on exactly two listed cells, their signs must
    /// cancel there. Signs are propagated breadth-first from a `+1` seed in
    /// each connected piece. Without an explicit label the cell gets the lcm
    /// of its boundary labels.
    pub fn new(
        id: impl Into<CellId>,
        boundary: &[Arc<Cell>],
        label: Option<Monomial>,
    ) -> Result<Arc<Cell>, ComplexError> {
        let id = id.into();
        if boundary.is_empty() {
            return Ok(Cell::vertex(id, label));
        }
        check_boundary_shape(&id, boundary.iter())?;
        let degrees = if boundary[0].dim == 0 {
            match boundary.len() {
                1 => vec![0],
                2 => vec![1, -1],
                n => {
                    return Err(ComplexError::CannotInferDegrees {
                        cell: id,
                        reason: format!("an edge cannot have {n} endpoints"),
                    })
                }
            }
        } else {
            let facet_boundaries: Vec<Vec<(CellId, i64)>> = boundary
                .iter()
                .map(|c| c.boundary.iter().map(|(t, d)| (t.id.clone(), *d)).collect())
                .collect();
            orient_facets(&facet_boundaries).ok_or_else(|| ComplexError::CannotInferDegrees {
                cell: id.clone(),
                reason: "no choice of signs makes the boundary square to zero".into(),
            })?
        };
        let boundary = boundary.iter().cloned().zip(degrees).collect();
        Cell::with_degrees(id, boundary, label)
    }

    /// Creates a cell with explicitly given attaching degrees.
    pub fn with_degrees(
        id: impl Into<CellId>,
        boundary: Vec<(Arc<Cell>, i64)>,
        label: Option<Monomial>,
    ) -> Result<Arc<Cell>, ComplexError> {
        let id = id.into();
        if boundary.is_empty() {
            return Ok(Cell::vertex(id, label));
        }
        check_boundary_shape(&id, boundary.iter().map(|(c, _)| c))?;
        let dim = boundary[0].0.dim + 1;

        let mut joined: Option<Monomial> = None;
        for (c, _) in &boundary {
            if let Some(l) = &c.label {
                joined = Some(match joined {
                    None => l.clone(),
                    Some(acc) => acc.lcm(l)?,
                });
            }
        }
        let label = match label {
            Some(l) => {
                for (c, _) in &boundary {
                    if let Some(bl) = &c.label {
                        if !bl.divides(&l)? {
                            return Err(ComplexError::LabelNotDivisible {
                                cell: id,
                                boundary: c.id.clone(),
                            });
                        }
                    }
                }
                Some(l)
            }
            None => joined,
        };
        Ok(Arc::new(Cell {
            id,
            dim,
            boundary,
            label,
        }))
    }

    pub fn id(&self) -> &CellId {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boundary(&self) -> &[(Arc<Cell>, i64)] {
        &self.boundary
    }

    pub fn label(&self) -> Option<&Monomial> {
        self.label.as_ref()
    }
}

fn check_boundary_shape<'a>(
    id: &CellId,
    cells: impl Iterator<Item = &'a Arc<Cell>> + Clone,
) -> Result<(), ComplexError> {
    let mut seen: Vec<&CellId> = Vec::new();
    let mut dim = None;
    for c in cells {
        if *dim.get_or_insert(c.dim) != c.dim {
            return Err(ComplexError::MixedBoundaryDimensions(id.clone()));
        }
        if seen.contains(&&c.id) {
            return Err(ComplexError::DuplicateBoundary {
                cell: id.clone(),
                target: c.id.clone(),
            });
        }
        seen.push(&c.id);
    }
    Ok(())
}

/// Chooses signs `s_i` in `{+1, -1}` for the facets of a new cell so that
/// `sum_i s_i * boundary_i` has no codimension-two terms. Returns `None` when
/// no such choice exists.
pub(crate) fn orient_facets<K: Ord + Clone>(
    facet_boundaries: &[Vec<(K, i64)>],
) -> Option<Vec<i64>> {
    let n = facet_boundaries.len();
    let mut ridges: BTreeMap<&K, Vec<(usize, i64)>> = BTreeMap::new();
    for (i, b) in facet_boundaries.iter().enumerate() {
        for (k, d) in b {
            if *d != 0 {
                ridges.entry(k).or_default().push((i, *d));
            }
        }
    }
    let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for incidences in ridges.values() {
        if let [(i, a), (j, b)] = incidences[..] {
            if a.abs() != b.abs() {
                return None;
            }
            // s_i * a + s_j * b = 0  =>  s_j = -s_i * sign(a) * sign(b)
            let rel = -a.signum() * b.signum();
            adjacency[i].push((j, rel));
            adjacency[j].push((i, rel));
        }
    }
    let mut signs = vec![0i64; n];
    for seed in 0..n {
        if signs[seed] != 0 {
            continue;
        }
        signs[seed] = 1;
        let mut queue = VecDeque::from([seed]);
        while let Some(i) = queue.pop_front() {
            for &(j, rel) in &adjacency[i] {
                let want = signs[i] * rel;
                if signs[j] == 0 {
                    signs[j] = want;
                    queue.push_back(j);
                } else if signs[j] != want {
                    return None;
                }
            }
        }
    }
    let consistent = ridges
        .values()
        .all(|inc| inc.iter().map(|&(i, d)| signs[i] * d).sum::<i64>() == 0);
    consistent.then_some(signs)
}

/// The serialized form of a cell: boundary entries refer to cells by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub id: CellId,
    pub dim: usize,
    pub label: Monomial,
    pub boundary: Vec<(CellId, i64)>,
}

/// A cell stored inside a [`CellComplex`]. Boundary entries are indices into
/// [`CellComplex::cells`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexCell {
    id: CellId,
    dim: usize,
    label: Monomial,
    boundary: Vec<(usize, i64)>,
}

impl ComplexCell {
    pub fn id(&self) -> &CellId {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &Monomial {
        &self.label
    }

    pub fn boundary(&self) -> &[(usize, i64)] {
        &self.boundary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// `sum_B alpha(A,B) alpha(B,C) = 0`
    BoundarySquared,
    /// A 1-cell has 0 or 2 nonzero boundary degrees, each `±1`.
    OneCell,
    /// `alpha(C,D) != 0` implies `label(D) | label(C)`.
    Divisibility,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::BoundarySquared => "boundary-squared",
            Rule::OneCell => "1-cell",
            Rule::Divisibility => "divisibility",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub cell: CellId,
    pub other: Option<CellId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] cell `{}`", self.rule, self.cell)?;
        if let Some(o) = &self.other {
            write!(f, " / `{o}`")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// An immutable, validated labeled cell complex.
///
/// Cells are kept in canonical order: by dimension, then by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    ring: Ring,
    cells: Vec<ComplexCell>,
    index: HashMap<CellId, usize>,
    dim_offsets: Vec<usize>,
}

impl CellComplex {
    /// Collects every cell reachable from `maximal` through boundaries and
    /// validates the result.
    pub fn build(ring: &Ring, maximal: &[Arc<Cell>]) -> Result<Self, ComplexError> {
        let mut found: BTreeMap<CellId, &Arc<Cell>> = BTreeMap::new();
        let mut stack: Vec<&Arc<Cell>> = maximal.iter().collect();
        while let Some(c) = stack.pop() {
            match found.get(&c.id) {
                Some(&prev) if Arc::ptr_eq(prev, c) || prev == c => continue,
                Some(_) => return Err(ComplexError::ConflictingDuplicate(c.id.clone())),
                None => {
                    found.insert(c.id.clone(), c);
                    stack.extend(c.boundary.iter().map(|(b, _)| b));
                }
            }
        }
        let records = found
            .into_values()
            .map(|c| CellRecord {
                id: c.id.clone(),
                dim: c.dim,
                label: c.label.clone().unwrap_or_else(|| ring.one()),
                boundary: c.boundary.iter().map(|(b, d)| (b.id.clone(), *d)).collect(),
            })
            .collect();
        Self::from_records(ring.clone(), records)
    }

    /// The complex with no cells.
    pub fn void(ring: &Ring) -> Self {
        CellComplex {
            ring: ring.clone(),
            cells: Vec::new(),
            index: HashMap::new(),
            dim_offsets: vec![0],
        }
    }

    pub fn from_records(ring: Ring, records: Vec<CellRecord>) -> Result<Self, ComplexError> {
        let complex = Self::assemble(ring, records)?;
        let violations = complex.validate();
        if violations.is_empty() {
            Ok(complex)
        } else {
            Err(ComplexError::Invalid(violations))
        }
    }

    /// Structural checks only: ids resolve, dimensions line up, labels live
    /// in the ring.
    pub(crate) fn assemble(ring: Ring, mut records: Vec<CellRecord>) -> Result<Self, ComplexError> {
        records.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.id.cmp(&b.id)));
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if index.insert(r.id.clone(), i).is_some() {
                return Err(ComplexError::ConflictingDuplicate(r.id.clone()));
            }
        }
        let max_dim = records.last().map_or(0, |r| r.dim + 1);
        let mut dim_offsets = vec![0; max_dim + 1];
        for r in &records {
            dim_offsets[r.dim + 1] += 1;
        }
        for d in 1..dim_offsets.len() {
            dim_offsets[d] += dim_offsets[d - 1];
        }

        let mut cells = Vec::with_capacity(records.len());
        for r in &records {
            ring.check(&r.label)?;
            if r.dim == 0 && !r.boundary.is_empty() {
                return Err(ComplexError::VertexWithBoundary(r.id.clone()));
            }
            let mut boundary = Vec::with_capacity(r.boundary.len());
            for (target, degree) in &r.boundary {
                let &t = index.get(target).ok_or_else(|| ComplexError::UnknownCell {
                    cell: r.id.clone(),
                    target: target.clone(),
                })?;
                let target_dim = records[t].dim;
                if target_dim + 1 != r.dim {
                    return Err(ComplexError::BoundaryDimension {
                        cell: r.id.clone(),
                        dim: r.dim,
                        target: target.clone(),
                        target_dim,
                    });
                }
                if boundary.iter().any(|&(b, _)| b == t) {
                    return Err(ComplexError::DuplicateBoundary {
                        cell: r.id.clone(),
                        target: target.clone(),
                    });
                }
                boundary.push((t, *degree));
            }
            boundary.sort_unstable_by_key(|&(t, _)| t);
            cells.push(ComplexCell {
                id: r.id.clone(),
                dim: r.dim,
                label: r.label.clone(),
                boundary,
            });
        }
        Ok(CellComplex {
            ring,
            cells,
            index,
            dim_offsets,
        })
    }

    /// Every violated instance of the boundary-squared, 1-cell and
    /// divisibility rules. Empty for any complex that was built successfully.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for a in &self.cells {
            if a.dim >= 2 {
                let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
                for &(b, ab) in &a.boundary {
                    for &(c, bc) in &self.cells[b].boundary {
                        *sums.entry(c).or_default() += ab * bc;
                    }
                }
                for (c, s) in sums {
                    if s != 0 {
                        out.push(Violation {
                            rule: Rule::BoundarySquared,
                            cell: a.id.clone(),
                            other: Some(self.cells[c].id.clone()),
                            detail: format!("sum of alpha(A,B)*alpha(B,C) over B is {s}"),
                        });
                    }
                }
            }
            if a.dim == 1 {
                let nonzero: Vec<_> = a.boundary.iter().filter(|(_, d)| *d != 0).collect();
                if !nonzero.is_empty() && nonzero.len() != 2 {
                    out.push(Violation {
                        rule: Rule::OneCell,
                        cell: a.id.clone(),
                        other: None,
                        detail: format!("{} boundary cells with nonzero degree", nonzero.len()),
                    });
                }
                for &&(t, d) in &nonzero {
                    if d.abs() != 1 {
                        out.push(Violation {
                            rule: Rule::OneCell,
                            cell: a.id.clone(),
                            other: Some(self.cells[t].id.clone()),
                            detail: format!("attaching degree {d} is not ±1"),
                        });
                    }
                }
            }
            for &(t, d) in &a.boundary {
                let target = &self.cells[t];
                if d != 0 && !target.label.divides_unchecked(&a.label) {
                    out.push(Violation {
                        rule: Rule::Divisibility,
                        cell: a.id.clone(),
                        other: Some(target.id.clone()),
                        detail: format!(
                            "label {} does not divide {}",
                            self.ring.render(&target.label),
                            self.ring.render(&a.label)
                        ),
                    });
                }
            }
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// All cells in canonical order.
    pub fn cells(&self) -> &[ComplexCell] {
        &self.cells
    }

    pub fn cells_of_dim(&self, d: usize) -> &[ComplexCell] {
        match (self.dim_offsets.get(d), self.dim_offsets.get(d + 1)) {
            (Some(&lo), Some(&hi)) => &self.cells[lo..hi],
            _ => &[],
        }
    }

    /// Cells grouped by dimension; only nonempty dimensions appear.
    pub fn cells_by_dim(&self) -> BTreeMap<usize, &[ComplexCell]> {
        (0..=self.max_dim().unwrap_or(0))
            .map(|d| (d, self.cells_of_dim(d)))
            .filter(|(_, c)| !c.is_empty())
            .collect()
    }

    /// Index in [`Self::cells`] of the first cell of dimension `d`.
    pub fn dim_offset(&self, d: usize) -> usize {
        self.dim_offsets.get(d).copied().unwrap_or(self.cells.len())
    }

    pub fn cell(&self, id: &CellId) -> Option<&ComplexCell> {
        self.index.get(id).map(|&i| &self.cells[i])
    }

    pub fn index_of(&self, id: &CellId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cells.last().map(|c| c.dim)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        match self.max_dim() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|d| self.cells_of_dim(d).len()).collect(),
        }
    }

    pub fn vertex_labels(&self) -> Vec<&Monomial> {
        self.cells_of_dim(0).iter().map(|c| &c.label).collect()
    }

    /// The lcm of every cell label.
    pub fn top_label(&self) -> Monomial {
        self.cells
            .iter()
            .fold(self.ring.one(), |acc, c| acc.join(&c.label))
    }

    /// Attaching degrees from dimension `d` cells (columns) to dimension
    /// `d - 1` cells (rows), both in canonical order.
    pub fn boundary_matrix(&self, d: usize) -> IntegerMatrix {
        let cols = self.cells_of_dim(d);
        let rows = if d == 0 {
            &[][..]
        } else {
            self.cells_of_dim(d - 1)
        };
        let row_offset = if d == 0 { 0 } else { self.dim_offset(d - 1) };
        let mut m = IntegerMatrix::zeros(rows.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for &(t, deg) in &c.boundary {
                m.set(t - row_offset, j, deg.into());
            }
        }
        m
    }

    /// The subcomplex of cells whose label divides `degree`.
    pub fn restrict(&self, degree: &Monomial) -> Result<CellComplex, ComplexError> {
        self.ring.check(degree)?;
        Ok(self.subcomplex(|c| c.label.divides_unchecked(degree)))
    }

    /// The subcomplex on the cells selected by `keep`. Boundary entries that
    /// point at dropped cells are dropped with them.
    pub(crate) fn subcomplex(&self, keep: impl Fn(&ComplexCell) -> bool) -> CellComplex {
        let kept: Vec<bool> = self.cells.iter().map(&keep).collect();
        let records = self
            .cells
            .iter()
            .zip(&kept)
            .filter(|(_, &k)| k)
            .map(|(c, _)| CellRecord {
                id: c.id.clone(),
                dim: c.dim,
                label: c.label.clone(),
                boundary: c
                    .boundary
                    .iter()
                    .filter(|&&(t, _)| kept[t])
                    .map(|&(t, d)| (self.cells[t].id.clone(), d))
                    .collect(),
            })
            .collect();
        Self::assemble(self.ring.clone(), records).expect("subcomplex of a valid complex")
    }

    /// Reflexive-transitive closure of the recorded boundary relation, as a
    /// 0/1 matrix over the canonical cell order.
    pub fn face_poset(&self) -> FacePoset {
        let n = self.cells.len();
        let mut below: Vec<Vec<bool>> = vec![vec![false; n]; n];
        // Boundary targets always precede the cell in canonical order.
        for j in 0..n {
            below[j][j] = true;
            for &(t, _) in &self.cells[j].boundary {
                let (done, rest) = below.split_at_mut(j);
                for (flag, &under) in rest[0].iter_mut().zip(&done[t]) {
                    *flag |= under;
                }
            }
        }
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| u8::from(below[j][i])).collect())
            .collect();
        FacePoset {
            cells: self.cells.iter().map(|c| c.id.clone()).collect(),
            matrix,
        }
    }

    /// Replaces the vertex labels and recomputes every higher label as the
    /// lcm of its boundary labels.
    pub fn relabel(
        &self,
        vertex_labels: &BTreeMap<CellId, Monomial>,
    ) -> Result<CellComplex, ComplexError> {
        for id in vertex_labels.keys() {
            match self.cell(id) {
                Some(c) if c.dim == 0 => {}
                _ => return Err(ComplexError::NotAVertex(id.clone())),
            }
        }
        let mut labels: Vec<Monomial> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let label = if c.dim == 0 {
                let l = vertex_labels
                    .get(&c.id)
                    .ok_or_else(|| ComplexError::MissingVertexLabel(c.id.clone()))?;
                self.ring.check(l)?;
                l.clone()
            } else {
                c.boundary
                    .iter()
                    .fold(self.ring.one(), |acc, &(t, _)| acc.join(&labels[t]))
            };
            labels.push(label);
        }
        let records = self
            .cells
            .iter()
            .zip(labels)
            .map(|(c, label)| CellRecord {
                id: c.id.clone(),
                dim: c.dim,
                label,
                boundary: c
                    .boundary
                    .iter()
                    .map(|&(t, d)| (self.cells[t].id.clone(), d))
                    .collect(),
            })
            .collect();
        Self::from_records(self.ring.clone(), records)
    }

    pub fn to_records(&self) -> Vec<CellRecord> {
        self.cells
            .iter()
            .map(|c| CellRecord {
                id: c.id.clone(),
                dim: c.dim,
                label: c.label.clone(),
                boundary: c
                    .boundary
                    .iter()
                    .map(|&(t, d)| (self.cells[t].id.clone(), d))
                    .collect(),
            })
            .collect()
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            ring: self.ring.clone(),
            cells: self.to_records(),
        }
    }
}

/// JSON layout of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub ring: Ring,
    pub cells: Vec<CellRecord>,
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<CellComplex, ComplexError> {
        CellComplex::from_records(self.ring, self.cells)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacePoset {
    pub cells: Vec<CellId>,
    /// `matrix[i][j] == 1` iff cell `i` is a face of cell `j`.
    pub matrix: Vec<Vec<u8>>,
}

impl fmt::Display for FacePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.matrix {
            let entries: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "| {} |", entries.join(" "))?;
        }
        Ok(())
    }
}
