//! Exact rational polyhedra `conv(V) + cone(R)`, their face lattices, and the
//! cell complexes built from bounded faces, including the hull complex of a
//! monomial ideal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{orient_facets, CellComplex, CellId, CellRecord, ComplexError};
use crate::constructors::simplex_id;
use crate::monomials::{Monomial, MonomialIdeal, Ring};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedralError {
    #[error("a polyhedron needs at least one vertex")]
    NoVertices,
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rays must be nonzero")]
    ZeroRay,
    #[error("polyhedron contains a line and has no vertices")]
    NotPointed,
    #[error("face lattice violates the diamond property between {lower:?} and {upper:?}")]
    BrokenLattice {
        lower: Vec<usize>,
        upper: Vec<usize>,
    },
    #[error("facet orientations are inconsistent on face {0}")]
    Orientation(CellId),
    #[error("no label given for vertex {0}")]
    MissingLabel(RationalPoint),
    #[error("member {0} of a polyhedral complex is unbounded")]
    Unbounded(usize),
    #[error("members {first} and {second} meet in a set that is not a common face")]
    NonFaceIntersection { first: usize, second: usize },
    #[error("a polyhedral complex needs at least one member")]
    EmptyComplex,
    #[error("hull parameter t must be at least 2, got {0}")]
    HullParameter(BigInt),
    #[error("exponent {0} is too large for the hull embedding")]
    ExponentTooLarge(BigUint),
    #[error("cannot parse point `{0}`")]
    BadPoint(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A point (or direction) with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(Vec<Q>);

impl RationalPoint {
    pub fn new(coordinates: Vec<BigRational>) -> Self {
        RationalPoint(coordinates)
    }

    pub fn from_integers<T: Into<BigInt>>(coordinates: impl IntoIterator<Item = T>) -> Self {
        RationalPoint(
            coordinates
                .into_iter()
                .map(|c| Q::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coordinates(&self) -> &[BigRational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Accepts `"1,2/3,0"`, optionally wrapped in parentheses or brackets.
impl FromStr for RationalPoint {
    type Err = PolyhedralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyhedralError::BadPoint(s.to_string());
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| inner.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .unwrap_or(inner);
        if inner.trim().is_empty() {
            return Err(bad());
        }
        inner
            .split(',')
            .map(|c| c.trim().parse::<Q>().map_err(|_| bad()))
            .collect::<Result<_, _>>()
            .map(RationalPoint)
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coordinate {
            Int(i64),
            Text(String),
        }
        let raw = Vec::<Coordinate>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|c| match c {
                Coordinate::Int(v) => Ok(Q::from_integer(v.into())),
                Coordinate::Text(s) => s
                    .trim()
                    .parse::<Q>()
                    .map_err(|_| de::Error::custom(format!("`{s}` is not a rational number"))),
            })
            .collect::<Result<_, _>>()
            .map(RationalPoint)
    }
}

/// `conv(vertices) + cone(rays)`, with both lists sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polyhedron {
    vertices: Vec<RationalPoint>,
    rays: Vec<RationalPoint>,
}

impl Polyhedron {
    pub fn new(
        mut vertices: Vec<RationalPoint>,
        mut rays: Vec<RationalPoint>,
    ) -> Result<Self, PolyhedralError> {
        let dim = vertices.first().ok_or(PolyhedralError::NoVertices)?.dim();
        for p in vertices.iter().chain(&rays) {
            if p.dim() != dim {
                return Err(PolyhedralError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        if rays.iter().any(RationalPoint::is_zero) {
            return Err(PolyhedralError::ZeroRay);
        }
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        Ok(Polyhedron { vertices, rays })
    }

    pub fn polytope(vertices: Vec<RationalPoint>) -> Result<Self, PolyhedralError> {
        Self::new(vertices, Vec::new())
    }

    /// The generating points, which may include non-vertices.
    pub fn points(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn rays(&self) -> &[RationalPoint] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn face_lattice(&self) -> Result<FaceLattice, PolyhedralError> {
        FaceLattice::new(self)
    }
}

impl<'de> Deserialize<'de> for Polyhedron {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<RationalPoint>,
            #[serde(default)]
            rays: Vec<RationalPoint>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Polyhedron::new(raw.vertices, raw.rays).map_err(de::Error::custom)
    }
}

/// A nonempty face: indices into [`FaceLattice::vertices`] and into the
/// polyhedron's rays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub vertices: BTreeSet<usize>,
    pub rays: BTreeSet<usize>,
    pub dim: usize,
}

impl Face {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    fn contains(&self, other: &Face) -> bool {
        other.vertices.is_subset(&self.vertices) && other.rays.is_subset(&self.rays)
    }
}

/// `a . x <= b` (or `= b`) in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Constraint {
    normal: Vec<Q>,
    bound: Q,
}

impl Constraint {
    fn slack(&self, x: &[Q]) -> Q {
        &self.bound - dot(&self.normal, x)
    }
}

/// All nonempty faces of a pointed polyhedron, the polyhedron itself
/// included, with cover relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceLattice {
    vertices: Vec<RationalPoint>,
    rays: Vec<RationalPoint>,
    /// Sorted by dimension, then vertex and ray sets.
    faces: Vec<Face>,
    /// `(lower, upper)` face indices with `upper` covering `lower`.
    covers: Vec<(usize, usize)>,
    equations: Vec<Constraint>,
    inequalities: Vec<Constraint>,
}

impl FaceLattice {
    pub fn new(p: &Polyhedron) -> Result<Self, PolyhedralError> {
        let ambient = p.ambient_dim();
        let base = &p.vertices[0];
        let mut directions: Vec<Vec<Q>> = p.vertices[1..]
            .iter()
            .map(|v| sub(&v.0, &base.0))
            .chain(p.rays.iter().map(|r| r.0.clone()))
            .collect();
        let pivots = row_reduce(&mut directions);
        let k = pivots.len();
        let equations = nullspace(&directions, &pivots, ambient)
            .into_iter()
            .map(|n| Constraint {
                bound: dot(&n, &base.0),
                normal: n,
            })
            .collect();

        let project =
            |x: &RationalPoint| -> Vec<Q> { pivots.iter().map(|&j| x.0[j].clone()).collect() };
        let points: Vec<Vec<Q>> = p.vertices.iter().map(project).collect();
        let rays: Vec<Vec<Q>> = p.rays.iter().map(project).collect();
        let all_points: BTreeSet<usize> = (0..points.len()).collect();
        let all_rays: BTreeSet<usize> = (0..rays.len()).collect();

        let mut facets: BTreeMap<(BTreeSet<usize>, BTreeSet<usize>), Constraint> = BTreeMap::new();
        if k > 0 {
            for (normal, bound) in candidate_hyperplanes(&points, &rays, k) {
                let side = |x: &Q| x.signum();
                let pv: Vec<Q> = points.iter().map(|x| &bound - dot(&normal, x)).collect();
                let rv: Vec<Q> = rays.iter().map(|r| -dot(&normal, r)).collect();
                let signs: BTreeSet<Q> = pv
                    .iter()
                    .chain(&rv)
                    .map(side)
                    .filter(|s| !s.is_zero())
                    .collect();
                let flip = match signs.len() {
                    0 => continue,
                    1 => signs.contains(&-Q::one()),
                    _ => continue,
                };
                let vs = (0..points.len()).filter(|&i| pv[i].is_zero()).collect();
                let rs = (0..rays.len()).filter(|&i| rv[i].is_zero()).collect();
                let (normal, bound) = if flip {
                    (normal.iter().map(|c| -c).collect::<Vec<_>>(), -bound)
                } else {
                    (normal, bound)
                };
                let mut lifted = vec![Q::zero(); ambient];
                for (c, &j) in normal.into_iter().zip(&pivots) {
                    lifted[j] = c;
                }
                facets.entry((vs, rs)).or_insert(Constraint {
                    normal: lifted,
                    bound,
                });
            }
        }

        // Close the facets under intersection.
        let mut sets: BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> = BTreeSet::new();
        sets.insert((all_points.clone(), all_rays.clone()));
        let mut frontier: Vec<_> = facets.keys().cloned().collect();
        while let Some(f) = frontier.pop() {
            if f.0.is_empty() || !sets.insert(f.clone()) {
                continue;
            }
            for g in facets.keys() {
                let meet = (
                    f.0.intersection(&g.0).copied().collect(),
                    f.1.intersection(&g.1).copied().collect(),
                );
                if !sets.contains(&meet) {
                    frontier.push(meet);
                }
            }
        }

        let face_dim = |(vs, rs): &(BTreeSet<usize>, BTreeSet<usize>)| -> usize {
            let first = vs.iter().next().expect("faces contain a point");
            let mut dirs: Vec<Vec<Q>> = vs
                .iter()
                .skip(1)
                .map(|&i| sub(&points[i], &points[*first]))
                .chain(rs.iter().map(|&i| rays[i].clone()))
                .collect();
            row_reduce(&mut dirs).len()
        };
        let dims: Vec<usize> = sets.iter().map(face_dim).collect();

        // The true vertices are the zero-dimensional faces.
        let mut vertex_points: Vec<usize> = sets
            .iter()
            .zip(&dims)
            .filter(|(_, &d)| d == 0)
            .map(|(s, _)| *s.0.iter().next().expect("nonempty"))
            .collect();
        if vertex_points.is_empty() {
            return Err(PolyhedralError::NotPointed);
        }
        vertex_points.sort_unstable();
        let renumber: BTreeMap<usize, usize> = vertex_points
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();

        let mut faces: Vec<Face> = sets
            .iter()
            .zip(&dims)
            .map(|((vs, rs), &dim)| Face {
                vertices: vs.iter().filter_map(|i| renumber.get(i).copied()).collect(),
                rays: rs.clone(),
                dim,
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices, &a.rays).cmp(&(b.dim, &b.vertices, &b.rays)));

        let mut covers = Vec::new();
        for (u, upper) in faces.iter().enumerate() {
            for (l, lower) in faces.iter().enumerate() {
                if lower.dim + 1 == upper.dim && upper.contains(lower) {
                    covers.push((l, u));
                }
            }
        }

        let lattice = FaceLattice {
            vertices: vertex_points
                .iter()
                .map(|&i| p.vertices[i].clone())
                .collect(),
            rays: p.rays.clone(),
            faces,
            covers,
            equations,
            inequalities: facets.into_values().collect(),
        };
        lattice.check_diamonds()?;
        Ok(lattice)
    }

    /// The vertices, sorted by coordinates.
    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn rays(&self) -> &[RationalPoint] {
        &self.rays
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn dim(&self) -> usize {
        self.faces.last().map_or(0, |f| f.dim)
    }

    /// Number of faces per dimension, the polyhedron itself included.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    /// The bounded faces with their induced cover relations.
    pub fn bounded(&self) -> FaceLattice {
        let keep: Vec<usize> = (0..self.faces.len())
            .filter(|&i| self.faces[i].is_bounded())
            .collect();
        let position: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        FaceLattice {
            vertices: self.vertices.clone(),
            rays: self.rays.clone(),
            faces: keep.iter().map(|&i| self.faces[i].clone()).collect(),
            covers: self
                .covers
                .iter()
                .filter_map(|(l, u)| Some((*position.get(l)?, *position.get(u)?)))
                .collect(),
            equations: self.equations.clone(),
            inequalities: self.inequalities.clone(),
        }
    }

    /// Every interval of length two between nonempty faces has exactly two
    /// middle elements.
    pub fn check_diamonds(&self) -> Result<(), PolyhedralError> {
        let mut above: Vec<Vec<usize>> = vec![Vec::new(); self.faces.len()];
        for &(l, u) in &self.covers {
            above[l].push(u);
        }
        for (low, ups) in above.iter().enumerate() {
            let mut middles: BTreeMap<usize, usize> = BTreeMap::new();
            for &mid in ups {
                for &top in &above[mid] {
                    *middles.entry(top).or_default() += 1;
                }
            }
            if let Some((&top, _)) = middles.iter().find(|(_, &n)| n != 2) {
                return Err(PolyhedralError::BrokenLattice {
                    lower: self.faces[low].vertices.iter().copied().collect(),
                    upper: self.faces[top].vertices.iter().copied().collect(),
                });
            }
        }
        Ok(())
    }

    fn vertex_set_is_face(&self, vertices: &BTreeSet<&RationalPoint>) -> bool {
        self.faces.iter().any(|f| {
            f.vertices.len() == vertices.len()
                && f.vertices
                    .iter()
                    .all(|&i| vertices.contains(&self.vertices[i]))
        })
    }
}

/// Hyperplanes `(normal, bound)` through `a` affinely independent points and
/// `k - a` ray directions, in a `k`-dimensional space.
fn candidate_hyperplanes(points: &[Vec<Q>], rays: &[Vec<Q>], k: usize) -> Vec<(Vec<Q>, Q)> {
    let mut out = Vec::new();
    for a in 1..=k.min(points.len()) {
        if k - a > rays.len() {
            continue;
        }
        for ps in combinations(points.len(), a) {
            for rs in combinations(rays.len(), k - a) {
                let origin = &points[ps[0]];
                let mut rows: Vec<Vec<Q>> = ps[1..]
                    .iter()
                    .map(|&i| sub(&points[i], origin))
                    .chain(rs.iter().map(|&i| rays[i].clone()))
                    .collect();
                let pivots = row_reduce(&mut rows);
                if pivots.len() + 1 != k {
                    continue;
                }
                let normal = nullspace(&rows, &pivots, k).pop().expect("one-dimensional");
                let bound = dot(&normal, origin);
                out.push((normal, bound));
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form in place; zero rows are dropped. Returns the
/// pivot column of each remaining row.
fn row_reduce(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in &mut rows[r] {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..cols {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the nullspace of a matrix in reduced row echelon form.
fn nullspace(rref: &[Vec<Q>], pivots: &[usize], cols: usize) -> Vec<Vec<Q>> {
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &p) in rref.iter().zip(pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// The unique solution of `rows . x = rhs`, if there is one.
fn solve(rows: &[Vec<Q>], rhs: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut aug: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect())
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) || pivots.len() != cols {
        return None;
    }
    Some(aug.iter().map(|r| r[cols].clone()).collect())
}

/// Vertices of the polytope cut out by the given constraints.
fn polytope_vertices(
    equations: &[Constraint],
    inequalities: &[Constraint],
    dim: usize,
) -> BTreeSet<RationalPoint> {
    let mut eq_rows: Vec<Vec<Q>> = equations.iter().map(|c| c.normal.clone()).collect();
    let eq_rank = row_reduce(&mut eq_rows).len();
    let need = dim - eq_rank;
    let mut found = BTreeSet::new();
    for chosen in combinations(inequalities.len(), need) {
        let active = equations
            .iter()
            .chain(chosen.iter().map(|&i| &inequalities[i]));
        let (rows, rhs): (Vec<Vec<Q>>, Vec<Q>) =
            active.map(|c| (c.normal.clone(), c.bound.clone())).unzip();
        let Some(x) = solve(&rows, &rhs, dim) else {
            continue;
        };
        let feasible = equations.iter().all(|c| c.slack(&x).is_zero())
            && inequalities.iter().all(|c| !c.slack(&x).is_negative());
        if feasible {
            found.insert(RationalPoint(x));
        }
    }
    found
}

/// Polytopes glued along common faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralComplex {
    vertices: Vec<RationalPoint>,
    /// Faces as sets of indices into `vertices`, sorted by dimension.
    faces: Vec<(BTreeSet<usize>, usize)>,
    covers: BTreeSet<(usize, usize)>,
}

impl PolyhedralComplex {
    /// Checks exactly that each pairwise intersection is a face of both
    /// members.
    pub fn new(polytopes: &[Polyhedron]) -> Result<Self, PolyhedralError> {
        if polytopes.is_empty() {
            return Err(PolyhedralError::EmptyComplex);
        }
        let lattices = polytopes
            .iter()
            .map(Polyhedron::face_lattice)
            .collect::<Result<Vec<_>, _>>()?;
        let ambient = polytopes[0].ambient_dim();
        for (i, (p, l)) in polytopes.iter().zip(&lattices).enumerate() {
            if p.ambient_dim() != ambient {
                return Err(PolyhedralError::DimensionMismatch {
                    expected: ambient,
                    found: p.ambient_dim(),
                });
            }
            if !p.rays.is_empty() || l.faces.iter().any(|f| !f.is_bounded()) {
                return Err(PolyhedralError::Unbounded(i));
            }
        }

        for i in 0..lattices.len() {
            for j in i + 1..lattices.len() {
                let (a, b) = (&lattices[i], &lattices[j]);
                let mine: BTreeSet<&RationalPoint> = a.vertices.iter().collect();
                let common: BTreeSet<&RationalPoint> =
                    b.vertices.iter().filter(|v| mine.contains(v)).collect();
                let equations: Vec<Constraint> =
                    a.equations.iter().chain(&b.equations).cloned().collect();
                let inequalities: Vec<Constraint> = a
                    .inequalities
                    .iter()
                    .chain(&b.inequalities)
                    .cloned()
                    .collect();
                let meet = polytope_vertices(&equations, &inequalities, ambient);
                let ok = meet.iter().eq(common.iter().copied())
                    && (common.is_empty()
                        || (a.vertex_set_is_face(&common) && b.vertex_set_is_face(&common)));
                if !ok {
                    return Err(PolyhedralError::NonFaceIntersection {
                        first: i,
                        second: j,
                    });
                }
            }
        }

        let vertices: Vec<RationalPoint> = lattices
            .iter()
            .flat_map(|l| l.vertices.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let global = |l: &FaceLattice, f: &Face| -> BTreeSet<usize> {
            f.vertices
                .iter()
                .map(|&v| {
                    vertices
                        .binary_search(&l.vertices[v])
                        .expect("collected above")
                })
                .collect()
        };
        let mut face_set: BTreeSet<(usize, BTreeSet<usize>)> = BTreeSet::new();
        for l in &lattices {
            for f in &l.faces {
                face_set.insert((f.dim, global(l, f)));
            }
        }
        let faces: Vec<(BTreeSet<usize>, usize)> =
            face_set.into_iter().map(|(d, vs)| (vs, d)).collect();
        let index: BTreeMap<&BTreeSet<usize>, usize> = faces
            .iter()
            .enumerate()
            .map(|(i, (vs, _))| (vs, i))
            .collect();
        let mut covers = BTreeSet::new();
        for l in &lattices {
            for &(lo, up) in &l.covers {
                covers.insert((
                    index[&global(l, &l.faces[lo])],
                    index[&global(l, &l.faces[up])],
                ));
            }
        }
        Ok(PolyhedralComplex {
            vertices,
            faces,
            covers,
        })
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.1).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for (_, d) in &self.faces {
            f[*d] += 1;
        }
        f
    }
}

impl From<&FaceLattice> for PolyhedralComplex {
    /// The bounded faces of a single polyhedron.
    fn from(lattice: &FaceLattice) -> Self {
        let b = lattice.bounded();
        PolyhedralComplex {
            vertices: b.vertices.clone(),
            faces: b
                .faces
                .iter()
                .map(|f| (f.vertices.clone(), f.dim))
                .collect(),
            covers: b.covers.iter().copied().collect(),
        }
    }
}

/// Bounded faces of a polyhedron, or every face of a polyhedral complex.
#[derive(Debug, Clone)]
pub enum PolyhedralInput {
    Polyhedron(Polyhedron),
    Complex(Vec<Polyhedron>),
}

impl<'de> Deserialize<'de> for PolyhedralInput {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(Polyhedron),
            Many(Vec<Polyhedron>),
        }
        Ok(match Raw::deserialize(deserializer)? {
            Raw::One(p) => PolyhedralInput::Polyhedron(p),
            Raw::Many(ps) => PolyhedralInput::Complex(ps),
        })
    }
}

impl PolyhedralInput {
    pub fn to_complex(&self) -> Result<PolyhedralComplex, PolyhedralError> {
        match self {
            PolyhedralInput::Polyhedron(p) => Ok(PolyhedralComplex::from(&p.face_lattice()?)),
            PolyhedralInput::Complex(ps) => PolyhedralComplex::new(ps),
        }
    }
}

fn polyhedral_id(vertices: &BTreeSet<usize>) -> CellId {
    CellId::new(format!(
        "p{}",
        simplex_id(vertices.iter().copied()).as_str()
    ))
}

/// Builds cells from faces given as vertex index sets. Edges run from the
/// lower to the higher vertex index; higher cells are oriented by sign
/// propagation over their facets.
fn cells_from_faces(
    ring: &Ring,
    faces: &[(BTreeSet<usize>, usize)],
    covers: &BTreeSet<(usize, usize)>,
    vertex_labels: &[Monomial],
    id: impl Fn(&BTreeSet<usize>) -> CellId,
) -> Result<CellComplex, PolyhedralError> {
    let mut facets: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for &(lo, up) in covers {
        facets[up].push(lo);
    }
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by_key(|&i| faces[i].1);

    let mut boundaries: Vec<Vec<(usize, i64)>> = vec![Vec::new(); faces.len()];
    for &f in &order {
        let (vs, dim) = &faces[f];
        boundaries[f] = match dim {
            0 => Vec::new(),
            1 => {
                let ends: Vec<usize> = facets[f].clone();
                let by_vertex = |i: usize| *faces[i].0.iter().next().expect("vertex");
                let mut ends = ends;
                ends.sort_by_key(|&i| by_vertex(i));
                vec![(ends[0], -1), (ends[1], 1)]
            }
            _ => {
                let mut fs = facets[f].clone();
                fs.sort_by_key(|&i| id(&faces[i].0));
                let bs: Vec<Vec<(usize, i64)>> =
                    fs.iter().map(|&i| boundaries[i].clone()).collect();
                let signs =
                    orient_facets(&bs).ok_or_else(|| PolyhedralError::Orientation(id(vs)))?;
                fs.into_iter().zip(signs).collect()
            }
        };
    }

    let records = faces
        .iter()
        .enumerate()
        .map(|(i, (vs, dim))| {
            let label = vs.iter().fold(ring.one(), |acc, &v| {
                acc.lcm(&vertex_labels[v]).expect("ring checked")
            });
            CellRecord {
                id: id(vs),
                dim: *dim,
                label,
                boundary: boundaries[i]
                    .iter()
                    .map(|&(j, d)| (id(&faces[j].0), d))
                    .collect(),
            }
        })
        .collect();
    Ok(CellComplex::from_records(ring.clone(), records)?)
}

/// One cell per bounded face, named `p` followed by 1-based vertex indices
/// in sorted coordinate order. Vertices take the given labels (every vertex
/// must be covered) or 1; other faces take the lcm of their vertex labels.
pub fn cell_complex_from_polyhedra(
    ring: &Ring,
    complex: &PolyhedralComplex,
    labels: Option<&BTreeMap<RationalPoint, Monomial>>,
) -> Result<CellComplex, PolyhedralError> {
    let vertex_labels = complex
        .vertices
        .iter()
        .map(|v| match labels {
            None => Ok(ring.one()),
            Some(map) => {
                let m = map
                    .get(v)
                    .ok_or_else(|| PolyhedralError::MissingLabel(v.clone()))?;
                ring.check(m).map_err(ComplexError::from)?;
                Ok(m.clone())
            }
        })
        .collect::<Result<Vec<_>, PolyhedralError>>()?;
    cells_from_faces(
        ring,
        &complex.faces,
        &complex.covers,
        &vertex_labels,
        polyhedral_id,
    )
}

/// Bounded faces of a single polyhedron as a cell complex.
pub fn cell_complex_from_polyhedron(
    ring: &Ring,
    p: &Polyhedron,
    labels: Option<&BTreeMap<RationalPoint, Monomial>>,
) -> Result<CellComplex, PolyhedralError> {
    cell_complex_from_polyhedra(ring, &PolyhedralComplex::from(&p.face_lattice()?), labels)
}

/// `(n + 1)! + 1` for a ring with `n` variables.
pub fn default_hull_parameter(num_vars: usize) -> BigInt {
    (1..=num_vars as u64 + 1)
        .map(BigInt::from)
        .product::<BigInt>()
        + 1
}

/// The bounded faces of `conv{ t^a : x^a a generator } + R^n_{>=0}`. Cells are
/// named by 1-based generator indices, as in the Taylor complex.
pub fn hull_complex(
    ideal: &MonomialIdeal,
    t: Option<&BigInt>,
) -> Result<CellComplex, PolyhedralError> {
    let n = ideal.ring().num_vars();
    let t = t.cloned().unwrap_or_else(|| default_hull_parameter(n));
    if t < BigInt::from(2) {
        return Err(PolyhedralError::HullParameter(t));
    }
    let gens = ideal.generators();
    let points = gens
        .iter()
        .map(|g| {
            g.exponents()
                .iter()
                .map(|e| {
                    let e32 = e
                        .to_u32()
                        .ok_or_else(|| PolyhedralError::ExponentTooLarge(e.clone()))?;
                    Ok(Q::from_integer(t.pow(e32)))
                })
                .collect::<Result<Vec<_>, PolyhedralError>>()
                .map(RationalPoint)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rays = (0..n)
        .map(|i| RationalPoint::from_integers((0..n).map(|j| i32::from(i == j))))
        .collect();
    let lattice = Polyhedron::new(points.clone(), rays)?.face_lattice()?;
    let bounded = PolyhedralComplex::from(&lattice);

    // Vertex indices of the lattice -> generator indices.
    let generator_of: Vec<usize> = bounded
        .vertices
        .iter()
        .map(|v| {
            points
                .iter()
                .position(|p| p == v)
                .expect("vertices are generating points")
        })
        .collect();
    let mut faces: Vec<(BTreeSet<usize>, usize)> = bounded
        .faces
        .iter()
        .map(|(vs, d)| (vs.iter().map(|&v| generator_of[v]).collect(), *d))
        .collect();
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| (faces[a].1, &faces[a].0).cmp(&(faces[b].1, &faces[b].0)));
    let position: BTreeMap<usize, usize> = order.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    faces = order.iter().map(|&o| faces[o].clone()).collect();
    let covers = bounded
        .covers
        .iter()
        .map(|(l, u)| (position[l], position[u]))
        .collect();

    cells_from_faces(ideal.ring(), &faces, &covers, gens, |vs| {
        simplex_id(vs.iter().copied())
    })
}

/// `true` when the hull complex for `t` and for `t + 1` coincide.
pub fn hull_is_stable(ideal: &MonomialIdeal, t: &BigInt) -> Result<bool, PolyhedralError> {
    let next = t + 1;
    Ok(
        hull_complex(ideal, Some(t))?.to_records()
            == hull_complex(ideal, Some(&next))?.to_records(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::Field;

    fn pt(coords: &[i64]) -> RationalPoint {
        RationalPoint::from_integers(coords.iter().copied())
    }

    fn unit(n: usize, i: usize) -> RationalPoint {
        RationalPoint::from_integers((0..n).map(|j| i64::from(i == j)))
    }

    fn prism() -> Polyhedron {
        Polyhedron::polytope(vec![
            pt(&[0, 0, 0]),
            pt(&[0, 1, 0]),
            pt(&[0, 0, 1]),
            pt(&[1, 0, 0]),
            pt(&[1, 1, 0]),
            pt(&[1, 0, 1]),
        ])
        .unwrap()
    }

    fn ring(vars: &[&str]) -> Ring {
        Ring::new(vars.iter().copied(), Field::Rationals).unwrap()
    }

    #[test]
    fn simplex_segment_and_prism() {
        let tet = Polyhedron::polytope((0..4).map(|i| unit(4, i)).collect()).unwrap();
        assert_eq!(tet.face_lattice().unwrap().f_vector(), [4, 6, 4, 1]);
        let seg = Polyhedron::polytope(vec![pt(&[0]), pt(&[1])]).unwrap();
        assert_eq!(seg.face_lattice().unwrap().f_vector(), [2, 1]);
        assert_eq!(prism().face_lattice().unwrap().f_vector(), [6, 9, 5, 1]);
    }

    #[test]
    fn degenerate_and_interior_points() {
        let p = Polyhedron::polytope(vec![pt(&[1, 1]), pt(&[1, 1])]).unwrap();
        let l = p.face_lattice().unwrap();
        assert_eq!(l.f_vector(), [1]);
        let sq = Polyhedron::polytope(vec![
            pt(&[0, 0]),
            pt(&[2, 0]),
            pt(&[0, 2]),
            pt(&[2, 2]),
            pt(&[1, 1]),
            pt(&[1, 0]),
        ])
        .unwrap();
        let l = sq.face_lattice().unwrap();
        assert_eq!(l.f_vector(), [4, 4, 1]);
        assert_eq!(l.vertices().len(), 4);
    }

    #[test]
    fn rational_coordinates() {
        let half: RationalPoint = "1/2, 0".parse().unwrap();
        let tri = Polyhedron::polytope(vec![
            half,
            "(0,1/3)".parse().unwrap(),
            "[0,0]".parse().unwrap(),
        ])
        .unwrap();
        assert_eq!(tri.face_lattice().unwrap().f_vector(), [3, 3, 1]);
        assert!("".parse::<RationalPoint>().is_err());
        assert!("1,a".parse::<RationalPoint>().is_err());
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            Polyhedron::polytope(vec![]),
            Err(PolyhedralError::NoVertices)
        );
        assert_eq!(
            Polyhedron::polytope(vec![pt(&[0]), pt(&[0, 1])]),
            Err(PolyhedralError::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
        assert_eq!(
            Polyhedron::new(vec![pt(&[0])], vec![pt(&[0])]),
            Err(PolyhedralError::ZeroRay)
        );
        let line = Polyhedron::new(vec![pt(&[0, 0])], vec![pt(&[1, 0]), pt(&[-1, 0])]).unwrap();
        assert_eq!(
            line.face_lattice().unwrap_err(),
            PolyhedralError::NotPointed
        );
    }

    #[test]
    fn bounded_faces() {
        let quadrant = Polyhedron::new(vec![pt(&[0, 0])], vec![pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let l = quadrant.face_lattice().unwrap();
        assert_eq!(l.f_vector(), [1, 2, 1]);
        assert_eq!(l.bounded().f_vector(), [1]);
        let p = prism().face_lattice().unwrap();
        assert_eq!(p.bounded().faces(), p.faces());
    }

    #[test]
    fn order_independence() {
        let mut vs = prism().points().to_vec();
        vs.reverse();
        let reversed = Polyhedron::polytope(vs).unwrap();
        assert_eq!(reversed, prism());
        assert_eq!(
            reversed.face_lattice().unwrap(),
            prism().face_lattice().unwrap()
        );
    }

    #[test]
    fn diamonds_hold() {
        for l in [
            prism().face_lattice().unwrap(),
            Polyhedron::new(
                vec![pt(&[1, 3]), pt(&[3, 1])],
                vec![pt(&[1, 0]), pt(&[0, 1])],
            )
            .unwrap()
            .face_lattice()
            .unwrap(),
        ] {
            assert!(l.check_diamonds().is_ok());
        }
    }

    #[test]
    fn polytope_cells() {
        let r = ring(&["a", "b", "c", "d"]);
        let tet = Polyhedron::polytope((0..4).map(|i| unit(4, i)).collect()).unwrap();
        let x = cell_complex_from_polyhedron(&r, &tet, None).unwrap();
        assert_eq!(x.f_vector(), [4, 6, 4, 1]);
        assert!(x.cells().iter().all(|c| c.label().is_one()));
        assert!(x.validate().is_empty());
        // Unit vectors sort in reverse: (0,0,0,1) is vertex 1.
        let e = x.cell(&"p1,2".into()).unwrap();
        let ends: Vec<(&str, i64)> = e
            .boundary()
            .iter()
            .map(|&(i, d)| (x.cells()[i].id().as_str(), d))
            .collect();
        assert_eq!(ends, [("p1", -1), ("p2", 1)]);
    }

    #[test]
    fn prism_complex_with_labels() {
        let r = ring(&["x0", "x1", "x2", "x3", "x4"]);
        let labels: BTreeMap<RationalPoint, Monomial> = [
            ([0, 0, 0], "x1*x4"),
            ([0, 1, 0], "x1*x2"),
            ([0, 0, 1], "x1*x3"),
            ([1, 0, 0], "x0*x4"),
            ([1, 1, 0], "x0*x2"),
            ([1, 0, 1], "x0*x3"),
        ]
        .into_iter()
        .map(|(p, m)| (pt(&p), r.parse(m).unwrap()))
        .collect();
        let x = cell_complex_from_polyhedron(&r, &prism(), Some(&labels)).unwrap();
        assert_eq!(x.f_vector(), [6, 9, 5, 1]);
        assert!(x.validate().is_empty());
        assert_eq!(x.top_label(), r.parse("x0*x1*x2*x3*x4").unwrap());

        let mut partial = labels.clone();
        partial.remove(&pt(&[1, 0, 1]));
        assert_eq!(
            cell_complex_from_polyhedron(&r, &prism(), Some(&partial)).unwrap_err(),
            PolyhedralError::MissingLabel(pt(&[1, 0, 1]))
        );
    }

    fn segments() -> Vec<Polyhedron> {
        [([5, 1], [3, 2]), ([3, 2], [2, 3]), ([2, 3], [0, 7])]
            .iter()
            .map(|(a, b)| Polyhedron::polytope(vec![pt(a), pt(b)]).unwrap())
            .collect()
    }

    #[test]
    fn segment_complex() {
        let pc = PolyhedralComplex::new(&segments()).unwrap();
        assert_eq!(pc.f_vector(), [4, 3]);
        let r = ring(&["a", "b"]);
        let labels: BTreeMap<RationalPoint, Monomial> = pc
            .vertices()
            .iter()
            .map(|v| {
                let e: Vec<u64> = v
                    .coordinates()
                    .iter()
                    .map(|c| c.to_integer().to_u64().unwrap())
                    .collect();
                (v.clone(), Monomial::from_exponents(e))
            })
            .collect();
        let x = cell_complex_from_polyhedra(&r, &pc, Some(&labels)).unwrap();
        let edge_labels: BTreeSet<String> = x
            .cells_of_dim(1)
            .iter()
            .map(|c| r.render(c.label()))
            .collect();
        let expected: BTreeSet<String> = ["a^5*b^2", "a^3*b^3", "a^2*b^7"]
            .iter()
            .map(|s| r.render(&r.parse(s).unwrap()))
            .collect();
        assert_eq!(edge_labels, expected);
    }

    #[test]
    fn glued_triangles() {
        let t1 = Polyhedron::polytope(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let t2 = Polyhedron::polytope(vec![pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap();
        let pc = PolyhedralComplex::new(&[t1.clone(), t2]).unwrap();
        assert_eq!(pc.f_vector(), [4, 5, 2]);
        let x = cell_complex_from_polyhedra(&ring(&["x"]), &pc, None).unwrap();
        assert!(x.validate().is_empty());

        let single = PolyhedralComplex::new(std::slice::from_ref(&t1)).unwrap();
        assert_eq!(single.f_vector(), [3, 3, 1]);

        // Overlapping triangles.
        let t3 = Polyhedron::polytope(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1])]).unwrap();
        assert_eq!(
            PolyhedralComplex::new(&[t1.clone(), t3]).unwrap_err(),
            PolyhedralError::NonFaceIntersection {
                first: 0,
                second: 1
            }
        );
        // A vertex of one triangle in the interior of the other's edge.
        let t4 = Polyhedron::polytope(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, -1])]).unwrap();
        let big = Polyhedron::polytope(vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        assert!(PolyhedralComplex::new(&[big, t4]).is_err());
        let crossing = vec![
            Polyhedron::polytope(vec![pt(&[0, 0]), pt(&[2, 2])]).unwrap(),
            Polyhedron::polytope(vec![pt(&[0, 2]), pt(&[2, 0])]).unwrap(),
        ];
        assert!(PolyhedralComplex::new(&crossing).is_err());
        let unbounded = Polyhedron::new(vec![pt(&[0, 0])], vec![pt(&[1, 0])]).unwrap();
        assert_eq!(
            PolyhedralComplex::new(&[unbounded]).unwrap_err(),
            PolyhedralError::Unbounded(0)
        );
    }

    fn hull_ring() -> Ring {
        ring(&["x", "y", "z", "w"])
    }

    #[test]
    fn hull_of_example_ideals() {
        let i = MonomialIdeal::parse(&hull_ring(), &["y*w", "x*y*z", "x^2*y", "z^4*w"]).unwrap();
        let h = hull_complex(&i, None).unwrap();
        assert_eq!(h.f_vector(), [4, 6, 4, 1]);
        assert!(h.validate().is_empty());

        let r3 = ring(&["x", "y", "z"]);
        let i2 = MonomialIdeal::parse(
            &r3,
            &["x^2*z", "x*y*z", "y^2*z", "x^3*y^5", "x^4*y^4", "x^5*y^3"],
        )
        .unwrap();
        let h2 = hull_complex(&i2, None).unwrap();
        assert_eq!(h2.f_vector(), [6, 7, 2]);
        assert!(h2.validate().is_empty());
        assert_eq!(default_hull_parameter(3), BigInt::from(25));
    }

    #[test]
    fn hull_edge_cases() {
        let r = ring(&["x", "y"]);
        let one = MonomialIdeal::parse(&r, &["x^2*y"]).unwrap();
        assert_eq!(hull_complex(&one, None).unwrap().f_vector(), [1]);
        assert_eq!(
            hull_complex(&one, Some(&BigInt::from(1))).unwrap_err(),
            PolyhedralError::HullParameter(BigInt::from(1))
        );
        let two = MonomialIdeal::parse(&r, &["x^2", "y^3"]).unwrap();
        let h = hull_complex(&two, Some(&BigInt::from(2))).unwrap();
        assert_eq!(h.f_vector(), [2, 1]);
        assert!(hull_is_stable(&two, &BigInt::from(7)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let p: Polyhedron =
            serde_json::from_str(r#"{"vertices": [["0","1/2"], [1, 0]], "rays": [["1","1"]]}"#)
                .unwrap();
        assert_eq!(p.points()[1], "1,0".parse().unwrap());
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"vertices":[["0","1/2"],["1","0"]],"rays":[["1","1"]]}"#
        );
        let input: PolyhedralInput = serde_json::from_str(r#"[{"vertices": [[0],[1]]}]"#).unwrap();
        assert_eq!(input.to_complex().unwrap().f_vector(), [2, 1]);
        assert!(serde_json::from_str::<Polyhedron>(r#"{"vertices": []}"#).is_err());
    }
}
