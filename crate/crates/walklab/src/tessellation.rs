//! Coset tessellations: partition (or cover) a connection set with pieces
//! whose union with the identity is a subgroup, then tile the vertex set by
//! the right cosets of those subgroups.
//!
//! Each piece yields one tessellation: its cells are cliques of equal size
//! `gamma_i = |C_i| + 1` covering every vertex exactly once. A covering
//! where the pieces are pairwise disjoint assigns every edge to exactly one
//! tessellation (a factorization); overlapping pieces share edges.

use crate::cayley::{adjacency_of, AdjacencyMatrix, ConnectionSet};
use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use serde::Serialize;
use std::sync::Arc;

/// Limit for the brute-force partition enumerator.
pub const MAX_ENUMERATION_SET: usize = 12;

/// A validated list of pieces covering a connection set.
#[derive(Debug, Clone)]
pub struct ConnectionPartition {
    connection: ConnectionSet,
    pieces: Vec<ElementSet>,
    overlap_allowed: bool,
}

impl ConnectionPartition {
    /// Validate pieces against the connection set: each piece is a nonempty,
    /// identity-free subset of the set whose union with the identity forms a
    /// subgroup; the pieces jointly cover the set; and unless
    /// `overlap_allowed` they are pairwise disjoint.
    pub fn new(
        connection: ConnectionSet,
        pieces: Vec<ElementSet>,
        overlap_allowed: bool,
    ) -> Result<Self> {
        let group = connection.group().clone();
        if pieces.is_empty() {
            return Err(Error::EmptySet);
        }
        for (index, piece) in pieces.iter().enumerate() {
            if piece.is_empty() {
                return Err(Error::EmptyPiece { index });
            }
            for g in piece.iter() {
                if !connection.elems().contains(g) {
                    return Err(Error::PieceElementNotInConnection { element: g });
                }
            }
            if piece.contains(group.identity()) {
                return Err(Error::IdentityInSet);
            }
            if !group.is_subgroup_with_id(piece)? {
                return Err(Error::PieceNotSubgroup { index });
            }
        }
        if !overlap_allowed {
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    if !pieces[i].is_disjoint(&pieces[j]) {
                        return Err(Error::PiecesOverlap { i, j });
                    }
                }
            }
        }
        for c in connection.elems().iter() {
            if !pieces.iter().any(|p| p.contains(c)) {
                return Err(Error::ElementNotCovered { element: c });
            }
        }
        Ok(ConnectionPartition {
            connection,
            pieces,
            overlap_allowed,
        })
    }

    pub fn connection(&self) -> &ConnectionSet {
        &self.connection
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.connection.group()
    }

    pub fn pieces(&self) -> &[ElementSet] {
        &self.pieces
    }

    pub fn overlap_allowed(&self) -> bool {
        self.overlap_allowed
    }

    pub fn disjoint(&self) -> bool {
        (0..self.pieces.len()).all(|i| {
            (i + 1..self.pieces.len()).all(|j| self.pieces[i].is_disjoint(&self.pieces[j]))
        })
    }

    /// One tessellation per piece: right cosets of `C_i` plus the identity
    /// as cells, and the piece's own Cayley adjacency matrix.
    pub fn build_tessellations(&self) -> Vec<Tessellation> {
        let group = self.group();
        self.pieces
            .iter()
            .map(|piece| {
                let subgroup = piece.with(group.identity());
                let cells = group
                    .right_cosets(&subgroup)
                    .expect("validated piece forms a subgroup with the identity");
                let gamma = subgroup.len();
                for cell in &cells {
                    assert_eq!(cell.len(), gamma, "cosets of one subgroup differ in size");
                    for a in cell.iter() {
                        for b in cell.iter() {
                            let diff = group.op(a, group.inv(b));
                            assert!(
                                a == b || piece.contains(diff),
                                "cell pair falls outside its piece"
                            );
                        }
                    }
                }
                Tessellation {
                    piece: piece.clone(),
                    cells,
                    gamma,
                    adjacency: adjacency_of(group, piece),
                }
            })
            .collect()
    }

    /// Scan every edge of the full Cayley graph, record how many
    /// tessellations contain it, and classify the covering.
    pub fn classify_covering(&self, tessellations: &[Tessellation]) -> Result<CoveringReport> {
        let group = self.group();
        let n = group.order();
        let mut shared_edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let diff = group.op(a, group.inv(b));
                if !self.connection.elems().contains(diff) {
                    continue;
                }
                let owners = tessellations
                    .iter()
                    .filter(|t| t.contains_edge(group, a, b))
                    .count();
                if owners == 0 {
                    return Err(Error::EdgeNotCovered { a, b });
                }
                if owners >= 2 {
                    shared_edges.push((a, b));
                }
            }
        }
        let uniform = tessellations
            .iter()
            .all(|t| t.cells.iter().all(|c| c.len() == t.gamma));
        let kind = if shared_edges.is_empty() && self.disjoint() {
            CoveringKind::Factorization
        } else {
            CoveringKind::Covering
        };
        Ok(CoveringReport {
            kind,
            uniform,
            k: self.pieces.len(),
            gamma_total: tessellations.iter().map(|t| t.gamma).sum(),
            shared_edges,
        })
    }
}

/// The tiling induced by one piece: equal-size clique cells covering every
/// vertex once.
#[derive(Debug, Clone)]
pub struct Tessellation {
    piece: ElementSet,
    cells: Vec<ElementSet>,
    gamma: usize,
    adjacency: AdjacencyMatrix,
}

impl Tessellation {
    pub fn piece(&self) -> &ElementSet {
        &self.piece
    }

    pub fn cells(&self) -> &[ElementSet] {
        &self.cells
    }

    /// Cell size (piece size plus one).
    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn adjacency(&self) -> &AdjacencyMatrix {
        &self.adjacency
    }

    pub fn dim(&self) -> usize {
        self.adjacency.dim()
    }

    /// Is the (a, b) edge inside one of this tessellation's cells?
    fn contains_edge(&self, group: &FiniteGroup, a: usize, b: usize) -> bool {
        self.piece.contains(group.op(a, group.inv(b)))
    }
}

/// How the pieces cover the Cayley graph's edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringKind {
    /// Every edge lies in exactly one tessellation.
    Factorization,
    /// At least one edge is shared (or pieces overlap).
    Covering,
}

/// Summary of an edge-membership scan over all tessellations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub kind: CoveringKind,
    pub uniform: bool,
    pub k: usize,
    pub gamma_total: usize,
    pub shared_edges: Vec<(usize, usize)>,
}

/// Set-theoretic commutation test: with `H_i = C_i + id`, checks
/// `H_i * H_j = H_j * H_i` as sets.
pub fn commute_settheoretic(group: &FiniteGroup, ci: &ElementSet, cj: &ElementSet) -> bool {
    let hi = ci.with(group.identity());
    let hj = cj.with(group.identity());
    group.set_product(&hi, &hj) == group.set_product(&hj, &hi)
}

/// Exact integer test `A_i A_j = A_j A_i`.
pub fn commute_matrix(ai: &AdjacencyMatrix, aj: &AdjacencyMatrix) -> Result<bool> {
    if ai.dim() != aj.dim() {
        return Err(Error::DimensionMismatch(ai.dim(), aj.dim()));
    }
    Ok(ai.commutes_with(aj))
}

/// Every way to split a connection set into disjoint subgroup-pieces, by
/// exhaustive search. Pieces within a partition are ordered by smallest
/// element, so the output is deterministic.
pub fn enumerate_subgroup_partitions(connection: &ConnectionSet) -> Result<Vec<Vec<ElementSet>>> {
    let elems = connection.elems();
    if elems.len() > MAX_ENUMERATION_SET {
        return Err(Error::EnumerationTooLarge(elems.len()));
    }
    let group = connection.group();
    let universe: Vec<usize> = elems.iter().collect();

    // All subsets of the connection set that form a subgroup with the identity.
    let mut candidates: Vec<ElementSet> = Vec::new();
    for mask in 1u32..(1 << universe.len()) {
        let piece: ElementSet = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &g)| g)
            .collect();
        if group.is_subgroup_with_id(&piece).unwrap_or(false) {
            candidates.push(piece);
        }
    }

    let mut out = Vec::new();
    let mut chosen: Vec<ElementSet> = Vec::new();
    let mut covered = ElementSet::empty();
    cover_rest(elems, &candidates, &mut chosen, &mut covered, &mut out);
    Ok(out)
}

fn cover_rest(
    target: &ElementSet,
    candidates: &[ElementSet],
    chosen: &mut Vec<ElementSet>,
    covered: &mut ElementSet,
    out: &mut Vec<Vec<ElementSet>>,
) {
    let next = match target.iter().find(|&g| !covered.contains(g)) {
        None => {
            out.push(chosen.clone());
            return;
        }
        Some(g) => g,
    };
    for cand in candidates {
        if cand.contains(next) && cand.is_disjoint(covered) {
            chosen.push(cand.clone());
            let before = covered.clone();
            *covered = covered.union(cand);
            cover_rest(target, candidates, chosen, covered, out);
            *covered = before;
            chosen.pop();
        }
    }
}
