//! Cayley graphs: connection sets, adjacency matrices, connectivity.
//!
//! A connection set is an identity-free, inverse-closed subset of a finite
//! group. Vertices are group elements; `g` and `h` are adjacent when
//! `g * h^{-1}` lies in the set. Right cosets of a subgroup inside the set
//! then become cliques, which is what the tessellation layer exploits.

use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use nalgebra::DMatrix;
use std::collections::VecDeque;
use std::sync::Arc;

/// An identity-free, inverse-closed subset of a group, with the two optional
/// structure flags checked at construction.
#[derive(Debug, Clone)]
pub struct ConnectionSet {
    group: Arc<FiniteGroup>,
    elems: ElementSet,
    generates: bool,
    power_closed: bool,
}

impl ConnectionSet {
    /// Validate `elems` as a connection set: nonempty, no identity, and
    /// closed under inverses. Whether it generates the whole group and
    /// whether it is closed under powers are recorded as flags.
    pub fn new(group: Arc<FiniteGroup>, elems: ElementSet) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        for g in elems.iter() {
            if g >= group.order() {
                return Err(Error::ElementOutOfRange {
                    element: g,
                    order: group.order(),
                });
            }
        }
        if elems.contains(group.identity()) {
            return Err(Error::IdentityInSet);
        }
        for g in elems.iter() {
            let gi = group.inv(g);
            if !elems.contains(gi) {
                return Err(Error::InverseMissing {
                    element: g,
                    inverse: gi,
                });
            }
        }
        let generates = group.subgroup_closure(&elems).len() == group.order();
        let power_closed = elems.iter().all(|g| {
            let mut acc = g;
            loop {
                acc = group.op(acc, g);
                if acc == group.identity() {
                    break true;
                }
                if !elems.contains(acc) {
                    break false;
                }
            }
        });
        Ok(ConnectionSet {
            group,
            elems,
            generates,
            power_closed,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn elems(&self) -> &ElementSet {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Does the set generate the whole group (equivalently, is the Cayley
    /// graph connected)?
    pub fn generates(&self) -> bool {
        self.generates
    }

    /// Is every power of every element either the identity or in the set?
    pub fn power_closed(&self) -> bool {
        self.power_closed
    }

    /// 0/1 adjacency matrix: `A[g][h] = 1` iff `g * h^{-1}` is in the set.
    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        adjacency_of(&self.group, &self.elems)
    }

    /// Breadth-first connectivity over the adjacency relation. Agrees with
    /// [`ConnectionSet::generates`] but walks the graph instead of closing
    /// the set, so the two routes check each other.
    pub fn is_connected(&self) -> bool {
        let n = self.group.order();
        let a = self.adjacency_matrix();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.group.identity()]);
        seen[self.group.identity()] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if a.0[(w, v)] != 0 && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }
}

/// Integer adjacency matrix of a Cayley graph (or of one tessellation piece).
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix(pub DMatrix<i64>);

impl AdjacencyMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Does this matrix commute with `other`?
    pub fn commutes_with(&self, other: &AdjacencyMatrix) -> bool {
        &self.0 * &other.0 == &other.0 * &self.0
    }

    /// Row sum of the first row; for a Cayley graph every row sum equals the
    /// connection set size.
    pub fn degree(&self) -> i64 {
        self.0.row(0).iter().sum()
    }
}

/// Adjacency matrix of the Cayley graph of `elems` without revalidating the
/// set; used for individual tessellation pieces as well.
pub(crate) fn adjacency_of(group: &FiniteGroup, elems: &ElementSet) -> AdjacencyMatrix {
    let n = group.order();
    let mut m = DMatrix::<i64>::zeros(n, n);
    for g in 0..n {
        for h in 0..n {
            if elems.contains(group.op(g, group.inv(h))) {
                m[(g, h)] = 1;
            }
        }
    }
    AdjacencyMatrix(m)
}
