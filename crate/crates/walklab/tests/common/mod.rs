//! Shared fixtures and independent oracles for the integration suites.
//!
//! The group tables here are built from first principles (permutation
//! composition, dihedral relations, quaternion sign rules) rather than
//! through the library, so they can stand as oracles against it. The same
//! goes for the series exponential, which knows nothing about reflections.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use std::sync::Arc;
use walklab::cayley::ConnectionSet;
use walklab::group::{ElementSet, FiniteGroup};
use walklab::operators::{phase_equal, ComplexMatrix, EvolutionOperator};
use walklab::phenomena::{detect_pst, PhenomenonReport};
use walklab::tessellation::ConnectionPartition;

/// Symmetric group on three symbols via explicit permutation composition,
/// `(p * q)(x) = p(q(x))`.
pub fn s3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let r = compose(p, q);
                    perms.iter().position(|x| *x == r).unwrap()
                })
                .collect()
        })
        .collect()
}

/// Dihedral group of order 8: indices 0..3 are rotations r^k, 4..7 are
/// reflections s r^k, composed through s r = r^{-1} s.
pub fn d4_table() -> Vec<Vec<usize>> {
    let decode = |g: usize| (g % 4, g / 4);
    let encode = |r: usize, f: usize| f * 4 + r % 4;
    (0..8)
        .map(|g| {
            (0..8)
                .map(|h| {
                    let (r1, f1) = decode(g);
                    let (r2, f2) = decode(h);
                    let r = if f1 == 0 { (r1 + r2) % 4 } else { (r1 + 4 - r2) % 4 };
                    encode(r, f1 ^ f2)
                })
                .collect()
        })
        .collect()
}

/// Quaternion group {1, -1, i, -i, j, -j, k, -k} in that index order, from
/// the sign rules i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
pub fn q8_table() -> Vec<Vec<usize>> {
    // (axis, sign): axis 0 is the scalar 1, axes 1..3 are i, j, k.
    let decode = |g: usize| (g / 2, if g % 2 == 0 { 1i32 } else { -1 });
    let encode = |axis: usize, sign: i32| 2 * axis + usize::from(sign < 0);
    let mul = |a: usize, b: usize| -> (usize, i32) {
        match (a, b) {
            (0, x) => (x, 1),
            (x, 0) => (x, 1),
            (x, y) if x == y => (0, -1),
            (1, 2) => (3, 1),
            (2, 3) => (1, 1),
            (3, 1) => (2, 1),
            (2, 1) => (3, -1),
            (3, 2) => (1, -1),
            (1, 3) => (2, -1),
            _ => unreachable!(),
        }
    };
    (0..8)
        .map(|g| {
            (0..8)
                .map(|h| {
                    let (a1, s1) = decode(g);
                    let (a2, s2) = decode(h);
                    let (axis, s3) = mul(a1, a2);
                    encode(axis, s1 * s2 * s3)
                })
                .collect()
        })
        .collect()
}

/// Taylor-series matrix exponential of `i * phi * H`, summed until the next
/// term falls below 1e-16 in max norm. Knows nothing about `H^2 = I`.
pub fn expm_series(h: &DMatrix<f64>, phi: f64) -> ComplexMatrix {
    let n = h.nrows();
    let a = h.map(|x| Complex::new(0.0, phi * x));
    let mut sum = ComplexMatrix::identity(n, n);
    let mut term = ComplexMatrix::identity(n, n);
    for k in 1..200 {
        term = &term * &a / Complex::new(k as f64, 0.0);
        sum += &term;
        let biggest = term.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if biggest < 1e-16 {
            break;
        }
    }
    sum
}

pub fn coords_set(group: &FiniteGroup, coords: &[&[usize]]) -> ElementSet {
    coords
        .iter()
        .map(|c| group.from_coords(c).unwrap())
        .collect()
}

/// Matching-matching-triangles factorization on Z2 x Z2 x Z3 (twelve
/// vertices, gamma profile 2, 2, 3).
pub fn prism_partition() -> ConnectionPartition {
    let g = Arc::new(FiniteGroup::abelian_product(&[2, 2, 3]).unwrap());
    let connection = ConnectionSet::new(
        g.clone(),
        coords_set(&g, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 2]]),
    )
    .unwrap();
    let pieces = vec![
        coords_set(&g, &[&[1, 0, 0]]),
        coords_set(&g, &[&[0, 1, 0]]),
        coords_set(&g, &[&[0, 0, 1], &[0, 0, 2]]),
    ];
    ConnectionPartition::new(connection, pieces, false).unwrap()
}

/// Overlapping covering on Z2 x Z4 whose second and third pieces share the
/// central order-2 element (gamma profile 2, 4, 4).
pub fn overlapping_partition() -> ConnectionPartition {
    let g = Arc::new(FiniteGroup::abelian_product(&[2, 4]).unwrap());
    let connection = ConnectionSet::new(
        g.clone(),
        coords_set(&g, &[&[1, 0], &[0, 1], &[0, 2], &[0, 3], &[1, 1], &[1, 3]]),
    )
    .unwrap();
    let pieces = vec![
        coords_set(&g, &[&[1, 0]]),
        coords_set(&g, &[&[0, 1], &[0, 2], &[0, 3]]),
        coords_set(&g, &[&[1, 1], &[0, 2], &[1, 3]]),
    ];
    ConnectionPartition::new(connection, pieces, true).unwrap()
}

/// Two perfect matchings tiling the four-cycle on Z2 x Z2.
pub fn two_matchings() -> ConnectionPartition {
    let g = Arc::new(FiniteGroup::abelian_product(&[2, 2]).unwrap());
    let e10 = g.from_coords(&[1, 0]).unwrap();
    let e01 = g.from_coords(&[0, 1]).unwrap();
    let connection =
        ConnectionSet::new(g.clone(), ElementSet::new(vec![e10, e01])).unwrap();
    ConnectionPartition::new(
        connection,
        vec![ElementSet::singleton(e10), ElementSet::singleton(e01)],
        false,
    )
    .unwrap()
}

/// Permutation matrix of left multiplication by `g`.
pub fn permutation_by(group: &FiniteGroup, g: usize) -> ComplexMatrix {
    let n = group.order();
    let mut m = ComplexMatrix::zeros(n, n);
    for v in 0..n {
        m[(group.op(g, v), v)] = Complex::new(1.0, 0.0);
    }
    m
}

pub fn transfer_pairs(report: &PhenomenonReport) -> Vec<(usize, usize)> {
    match report {
        PhenomenonReport::Pst { pairs, .. } => pairs.iter().map(|p| (p.from, p.to)).collect(),
        _ => panic!("not a transfer report"),
    }
}

pub fn expected_translation_pairs(group: &FiniteGroup, g: usize) -> Vec<(usize, usize)> {
    (0..group.order()).map(|v| (v, group.op(g, v))).collect()
}

/// Assert that `U^time` is one global phase times the permutation by `g`,
/// and that the transfer detector reports exactly the matching pair list.
pub fn assert_translation(
    u: &EvolutionOperator,
    time: u64,
    group: &FiniteGroup,
    g: usize,
    tol: f64,
) {
    let report = detect_pst(u, time, tol);
    let (pass, permutation_like, fidelities) = match &report {
        PhenomenonReport::Pst {
            pass,
            permutation_like,
            pairs,
            ..
        } => (
            *pass,
            *permutation_like,
            pairs.iter().map(|p| p.fidelity).collect::<Vec<_>>(),
        ),
        _ => unreachable!(),
    };
    assert!(pass && permutation_like);
    for fidelity in fidelities {
        assert!(fidelity >= 1.0 - tol);
    }
    let mut got = transfer_pairs(&report);
    got.sort();
    let mut want = expected_translation_pairs(group, g);
    want.sort();
    assert_eq!(got, want);
    let expected = permutation_by(group, g);
    assert!(phase_equal(&u.power(time), &expected, tol).unwrap());
}

/// Every distinct subgroup of `group`, found as closures of generator sets
/// of size up to four (enough for any group of order at most 16).
pub fn all_subgroups(group: &FiniteGroup) -> Vec<ElementSet> {
    let n = group.order();
    let mut found: Vec<ElementSet> = vec![ElementSet::singleton(group.identity())];
    let push = |h: ElementSet, found: &mut Vec<ElementSet>| {
        if !found.contains(&h) {
            found.push(h);
        }
    };
    let non_id: Vec<usize> = (0..n).filter(|&g| g != group.identity()).collect();
    let m = non_id.len();
    for a in 0..m {
        push(
            group.subgroup_closure(&ElementSet::singleton(non_id[a])),
            &mut found,
        );
        for b in a + 1..m {
            push(
                group.subgroup_closure(&ElementSet::new(vec![non_id[a], non_id[b]])),
                &mut found,
            );
            for c in b + 1..m {
                push(
                    group.subgroup_closure(&ElementSet::new(vec![
                        non_id[a],
                        non_id[b],
                        non_id[c],
                    ])),
                    &mut found,
                );
                for d in c + 1..m {
                    push(
                        group.subgroup_closure(&ElementSet::new(vec![
                            non_id[a],
                            non_id[b],
                            non_id[c],
                            non_id[d],
                        ])),
                        &mut found,
                    );
                }
            }
        }
    }
    found.sort();
    found
}

/// Non-decreasing factor lists (each factor at least `min_factor`) whose
/// product lies in `[2, max_order]`.
pub fn abelian_factorizations(max_order: usize, factors: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        factors: &[usize],
        max_order: usize,
        min_factor: usize,
        product: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        for &f in factors {
            if f < min_factor || product * f > max_order {
                continue;
            }
            current.push(f);
            recurse(factors, max_order, f, product * f, current, out);
            current.pop();
        }
    }
    recurse(factors, max_order, 2, 1, &mut current, &mut out);
    out
}

/// One piece per cyclic factor: the factor's subgroup minus the identity.
pub fn per_factor_pieces(group: &FiniteGroup, orders: &[usize]) -> Vec<ElementSet> {
    orders
        .iter()
        .enumerate()
        .map(|(j, &nj)| {
            (1..nj)
                .map(|a| {
                    let mut coords = vec![0usize; orders.len()];
                    coords[j] = a;
                    group.from_coords(&coords).unwrap()
                })
                .collect()
        })
        .collect()
}

/// Assemble a partition from per-factor pieces over the union connection set.
pub fn per_factor_partition(orders: &[usize]) -> ConnectionPartition {
    let group = Arc::new(FiniteGroup::abelian_product(orders).unwrap());
    let pieces = per_factor_pieces(&group, orders);
    let union: ElementSet = pieces
        .iter()
        .fold(ElementSet::empty(), |acc, p| acc.union(p));
    let connection = ConnectionSet::new(group, union).unwrap();
    ConnectionPartition::new(connection, pieces, false).unwrap()
}
