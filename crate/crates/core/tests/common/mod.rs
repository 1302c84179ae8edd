#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cellres::complex::{Cell, CellComplex, CellId, CellRecord};
use cellres::homology::ChainComplexData;
use cellres::linalg::IntegerMatrix;
use cellres::monomials::{Field, Monomial, MonomialIdeal, Ring};
use cellres::polyhedral::{Polyhedron, RationalPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ring4() -> Ring {
    Ring::new(["x", "y", "z", "w"], Field::Rationals).unwrap()
}

pub fn mono(ring: &Ring, s: &str) -> Monomial {
    ring.parse(s).unwrap()
}

pub fn ideal(ring: &Ring, gens: &[&str]) -> MonomialIdeal {
    MonomialIdeal::parse(ring, gens).unwrap()
}

/// `<yw, xyz, x^2y, z^4w>`
pub fn example_ideal() -> MonomialIdeal {
    ideal(&ring4(), &["y*w", "x*y*z", "x^2*y", "z^4*w"])
}

/// `<x^2z, xyz, y^2z, x^3y^5, x^4y^4, x^5y^3>`
pub fn second_ideal() -> MonomialIdeal {
    let r = Ring::new(["x", "y", "z"], Field::Rationals).unwrap();
    ideal(
        &r,
        &["x^2*z", "x*y*z", "y^2*z", "x^3*y^5", "x^4*y^4", "x^5*y^3"],
    )
}

/// A filled triangle on the first three generators of the example ideal plus
/// an edge to the fourth.
pub fn delta() -> CellComplex {
    let r = ring4();
    let v: Vec<_> = ["y*w", "x*y*z", "x^2*y", "z^4*w"]
        .iter()
        .enumerate()
        .map(|(i, l)| Cell::vertex(format!("v{}", i + 1), Some(mono(&r, l))))
        .collect();
    let e12 = Cell::new("e12", &[v[0].clone(), v[1].clone()], None).unwrap();
    let e13 = Cell::new("e13", &[v[0].clone(), v[2].clone()], None).unwrap();
    let e23 = Cell::new("e23", &[v[1].clone(), v[2].clone()], None).unwrap();
    let e14 = Cell::new("e14", &[v[0].clone(), v[3].clone()], None).unwrap();
    let f = Cell::new("f123", &[e12, e13, e23], None).unwrap();
    CellComplex::build(&r, &[f, e14]).unwrap()
}

pub fn point(coords: &[i64]) -> RationalPoint {
    RationalPoint::from_integers(coords.iter().copied())
}

/// The segment times triangle prism.
pub fn prism() -> Polyhedron {
    Polyhedron::polytope(
        [
            [0, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 0, 0],
            [1, 1, 0],
            [1, 0, 1],
        ]
        .iter()
        .map(|p| point(p))
        .collect(),
    )
    .unwrap()
}

/// Vertex labels of the prism: each vertex gets the product of the
/// variables it avoids in `P^1 x P^2`.
pub fn prism_labels(ring: &Ring) -> BTreeMap<RationalPoint, Monomial> {
    [
        ([0, 0, 0], "x1*x4"),
        ([0, 1, 0], "x1*x2"),
        ([0, 0, 1], "x1*x3"),
        ([1, 0, 0], "x0*x4"),
        ([1, 1, 0], "x0*x2"),
        ([1, 0, 1], "x0*x3"),
    ]
    .into_iter()
    .map(|(p, m)| (point(&p), mono(ring, m)))
    .collect()
}

pub fn prism_ring() -> Ring {
    Ring::new(["x0", "x1", "x2", "x3", "x4"], Field::Rationals).unwrap()
}

/// The three segments of the planar polyhedral complex.
pub fn segments() -> Vec<Polyhedron> {
    [([5, 1], [3, 2]), ([3, 2], [2, 3]), ([2, 3], [0, 7])]
        .iter()
        .map(|(a, b)| Polyhedron::polytope(vec![point(a), point(b)]).unwrap())
        .collect()
}

pub fn random_monomial<R: Rng>(rng: &mut R, n: usize, max_exponent: u32) -> Monomial {
    Monomial::from_exponents((0..n).map(|_| rng.gen_range(0..=max_exponent)))
}

/// A random simplicial complex on at most five vertices with at most ten
/// cells. Vertices get random labels (possibly 1); each higher cell gets the
/// lcm of its facets times a random monomial.
pub fn random_labeled_complex<R: Rng>(rng: &mut R) -> CellComplex {
    let n = rng.gen_range(1..=3);
    let ring = Ring::new(["x", "y", "z"].iter().take(n).copied(), Field::Rationals).unwrap();
    let vertices = rng.gen_range(1..=5u32);
    let mut faces: BTreeSet<u32> = (0..vertices).map(|v| 1 << v).collect();
    let mut candidates: Vec<u32> = (1..(1u32 << vertices))
        .filter(|m| m.count_ones() >= 2)
        .collect();
    candidates.sort_by_key(|m| m.count_ones());
    for mask in candidates {
        if faces.len() >= 10 {
            break;
        }
        let facets_present = (0..vertices)
            .filter(|v| mask & (1 << v) != 0)
            .all(|v| faces.contains(&(mask & !(1 << v))));
        if facets_present && rng.gen_bool(0.5) {
            faces.insert(mask);
        }
    }
    let id = |mask: u32| -> CellId {
        let parts: Vec<String> = (0..vertices)
            .filter(|v| mask & (1 << v) != 0)
            .map(|v| v.to_string())
            .collect();
        CellId::new(format!("s{}", parts.join("_")))
    };
    let mut ordered: Vec<u32> = faces.into_iter().collect();
    ordered.sort_by_key(|m| m.count_ones());
    let mut labels: BTreeMap<u32, Monomial> = BTreeMap::new();
    let mut records = Vec::new();
    for mask in ordered {
        let members: Vec<u32> = (0..vertices).filter(|v| mask & (1 << v) != 0).collect();
        let (label, boundary) = if members.len() == 1 {
            (random_monomial(rng, n, 3), Vec::new())
        } else {
            let mut label = ring.one();
            let mut boundary = Vec::new();
            for (pos, v) in members.iter().enumerate() {
                let facet = mask & !(1 << v);
                label = label.lcm(&labels[&facet]).unwrap();
                boundary.push((id(facet), if pos % 2 == 0 { 1 } else { -1 }));
            }
            let extra = if rng.gen_bool(0.3) {
                random_monomial(rng, n, 1)
            } else {
                ring.one()
            };
            (label.mul(&extra).unwrap(), boundary)
        };
        labels.insert(mask, label.clone());
        records.push(CellRecord {
            id: id(mask),
            dim: members.len() - 1,
            label,
            boundary,
        });
    }
    CellComplex::from_records(ring, records).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_ring<R: Rng>(rng: &mut R) -> Ring {
    let n = rng.gen_range(3..=4);
    Ring::new(
        ["x", "y", "z", "w"].iter().take(n).copied(),
        Field::Rationals,
    )
    .unwrap()
}

pub fn assert_sound(x: &CellComplex, what: &str) {
    assert!(x.validate().is_empty(), "{what}: {:?}", x.validate());
    for reduced in [true, false] {
        assert!(
            ChainComplexData::new(x, reduced).composites_vanish(),
            "{what}: d^2 != 0"
        );
    }
}

/// Ranks of the degree-`b` strand of the symbolic differentials: keep the
/// basis elements whose labels divide `b` and read off coefficients.
pub fn strand_homology(x: &CellComplex, b: &cellres::Monomial) -> Vec<(i64, usize)> {
    let c = ChainComplexData::new(x, true);
    let keep = |degree: i64| -> Vec<usize> {
        c.basis(degree)
            .unwrap_or_default()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label.divides(b).unwrap())
            .map(|(i, _)| i)
            .collect()
    };
    let rank_out = |degree: i64| -> usize {
        match c.differential(degree) {
            None => 0,
            Some(d) => d
                .coefficient_matrix()
                .submatrix(&keep(degree - 1), &keep(degree))
                .rank_rational(),
        }
    };
    c.degrees()
        .map(|d| (d, keep(d).len() - rank_out(d) - rank_out(d + 1)))
        .collect()
}

/// Independent Smith form: repeatedly move a gcd into the pivot with
/// extended-Euclid row and column operations.
pub fn naive_invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                if (&a[i][t] % &a[t][t]).is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                    continue;
                }
                let g = a[t][t].extended_gcd(&a[i][t]);
                let (p, q) = (a[t][t].clone() / &g.gcd, a[i][t].clone() / &g.gcd);
                for j in t..cols {
                    let top = &g.x * &a[t][j] + &g.y * &a[i][j];
                    let bottom = &p * &a[i][j] - &q * &a[t][j];
                    a[t][j] = top;
                    a[i][j] = bottom;
                }
                changed = true;
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                if (&a[t][j] % &a[t][t]).is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                    continue;
                }
                let g = a[t][t].extended_gcd(&a[t][j]);
                let (p, q) = (a[t][t].clone() / &g.gcd, a[t][j].clone() / &g.gcd);
                for i in t..rows {
                    let left = &g.x * &a[i][t] + &g.y * &a[i][j];
                    let right = &p * &a[i][j] - &q * &a[i][t];
                    a[i][t] = left;
                    a[i][j] = right;
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    // Restore the divisibility chain: diag(a, b) ~ diag(gcd, lcm).
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (g, l) = (diag[i].gcd(&diag[j]), diag[i].lcm(&diag[j]));
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}
/// Random integer matrix up to 8x8 with entries in `[-20, 20]`; every third
/// case is mostly zeros.
pub fn random_matrix<R: Rng>(rng: &mut R, case: usize) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    let sparse = case % 3 == 0;
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if sparse && rng.gen_bool(0.6) {
                        0
                    } else {
                        rng.gen_range(-20..=20)
                    }
                })
                .collect()
        })
        .collect()
}
