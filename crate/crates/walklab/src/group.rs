//! Finite-group arithmetic: elements, products, inverses, orders, subgroup
//! closure, cosets, and set products.
//!
//! Elements are canonical indices in `[0, n)`. Abelian product groups encode
//! coordinate tuples through a mixed-radix scheme (first coordinate most
//! significant), so tuple order equals index order. Table-backed groups use
//! the row order of the supplied multiplication table.

use crate::error::{Error, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Largest group order accepted by the constructors.
pub const MAX_GROUP_ORDER: usize = 4096;

/// Orders up to this bound get an exhaustive associativity check; larger
/// tables are validated on 10 000 seeded random triples.
const EXHAUSTIVE_ASSOC_BOUND: usize = 64;

/// A sorted, duplicate-free set of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet {
    elems: Vec<usize>,
}

impl ElementSet {
    pub fn new(mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        ElementSet { elems }
    }

    pub fn empty() -> Self {
        ElementSet { elems: Vec::new() }
    }

    pub fn singleton(g: usize) -> Self {
        ElementSet { elems: vec![g] }
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elems.binary_search(&g).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.elems
    }

    /// The set together with one extra element (typically the identity).
    pub fn with(&self, g: usize) -> Self {
        let mut elems = self.elems.clone();
        elems.push(g);
        ElementSet::new(elems)
    }

    /// Set union.
    pub fn union(&self, other: &Self) -> Self {
        let mut elems = self.elems.clone();
        elems.extend_from_slice(&other.elems);
        ElementSet::new(elems)
    }

    /// Elements common to both sets.
    pub fn intersection(&self, other: &Self) -> Self {
        ElementSet {
            elems: self.iter().filter(|&g| other.contains(g)).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|g| !other.contains(g))
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElementSet::new(iter.into_iter().collect())
    }
}

impl serde::Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(serializer)
    }
}

#[derive(Debug, Clone)]
enum Backing {
    /// Direct product of cyclic groups; op is componentwise addition.
    Product { orders: Vec<usize>, strides: Vec<usize> },
    /// Explicit multiplication table, row-major: `table[g * n + h] = g * h`.
    Table { table: Vec<usize> },
}

/// A finite group with elements `0..n`, identity, and inverse table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    inverses: Vec<usize>,
    abelian: bool,
    backing: Backing,
}

impl FiniteGroup {
    /// Direct product of cyclic groups `Z_{n1} x ... x Z_{nr}`.
    pub fn abelian_product(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::EmptyOrders);
        }
        let mut order: usize = 1;
        for &n in orders {
            if n < 2 {
                return Err(Error::OrderTooSmall(n));
            }
            order = order.checked_mul(n).ok_or(Error::OrderCapExceeded {
                order: usize::MAX,
                cap: MAX_GROUP_ORDER,
            })?;
            if order > MAX_GROUP_ORDER {
                return Err(Error::OrderCapExceeded {
                    order,
                    cap: MAX_GROUP_ORDER,
                });
            }
        }
        // First coordinate most significant: index order = lexicographic tuple order.
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1];
        }
        let backing = Backing::Product {
            orders: orders.to_vec(),
            strides,
        };
        let inverses = (0..order)
            .map(|g| backing_invert_product(&backing, g))
            .collect();
        Ok(FiniteGroup {
            order,
            identity: 0,
            inverses,
            abelian: true,
            backing,
        })
    }

    /// Validate an explicit multiplication table and wrap it as a group.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyOrders);
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::OrderCapExceeded {
                order: n,
                cap: MAX_GROUP_ORDER,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::TableNotSquare {
                    row,
                    len: r.len(),
                    order: n,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(Error::TableEntryOutOfRange {
                        row,
                        col,
                        value,
                        order: n,
                    });
                }
                table.push(value);
            }
        }
        let mul = |a: usize, b: usize| table[a * n + b];

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or(Error::NoIdentity)?;

        let mut inverses = vec![0usize; n];
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or(Error::NoInverse(g))?;
            inverses[g] = inv;
        }

        if n <= EXHAUSTIVE_ASSOC_BOUND {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                            return Err(Error::NonAssociative { a, b, c });
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed);
            for _ in 0..10_000 {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                let c = rng.random_range(0..n);
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(Error::NonAssociative { a, b, c });
                }
            }
        }

        let abelian = (0..n).all(|a| (a..n).all(|b| mul(a, b) == mul(b, a)));

        Ok(FiniteGroup {
            order: n,
            identity,
            inverses,
            abelian,
            backing: Backing::Table { table },
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Cycle orders for product-backed groups.
    pub fn cycle_orders(&self) -> Option<&[usize]> {
        match &self.backing {
            Backing::Product { orders, .. } => Some(orders),
            Backing::Table { .. } => None,
        }
    }

    /// Group product `g * h`. Panics on out-of-range indices.
    pub fn op(&self, g: usize, h: usize) -> usize {
        assert!(g < self.order && h < self.order, "element out of range");
        match &self.backing {
            Backing::Product { orders, strides } => {
                let mut sum = 0;
                for (&nj, &sj) in orders.iter().zip(strides) {
                    let a = g / sj % nj;
                    let b = h / sj % nj;
                    sum += (a + b) % nj * sj;
                }
                sum
            }
            Backing::Table { table } => table[g * self.order + h],
        }
    }

    /// Two-sided inverse of `g`.
    pub fn inv(&self, g: usize) -> usize {
        assert!(g < self.order, "element out of range");
        self.inverses[g]
    }

    /// Least `k >= 1` with `g^k = id`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut acc = g;
        while acc != self.identity {
            acc = self.op(acc, g);
            k += 1;
        }
        k
    }

    /// Decode an element into its coordinate tuple (product groups only).
    pub fn coords(&self, g: usize) -> Option<Vec<usize>> {
        match &self.backing {
            Backing::Product { orders, strides } => Some(
                orders
                    .iter()
                    .zip(strides)
                    .map(|(&nj, &sj)| g / sj % nj)
                    .collect(),
            ),
            Backing::Table { .. } => None,
        }
    }

    /// Encode a coordinate tuple as an element index (product groups only).
    pub fn from_coords(&self, coords: &[usize]) -> Result<usize> {
        match &self.backing {
            Backing::Product { orders, strides } => {
                if coords.len() != orders.len()
                    || coords.iter().zip(orders).any(|(&a, &nj)| a >= nj)
                {
                    return Err(Error::BadCoordinates {
                        coords: coords.to_vec(),
                    });
                }
                Ok(coords.iter().zip(strides).map(|(&a, &sj)| a * sj).sum())
            }
            Backing::Table { .. } => Err(Error::BadCoordinates {
                coords: coords.to_vec(),
            }),
        }
    }

    /// Smallest subgroup containing `s`: fixed-point iteration under
    /// products and inverses.
    pub fn subgroup_closure(&self, s: &ElementSet) -> ElementSet {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut queue: Vec<usize> = Vec::new();
        for g in s.iter() {
            assert!(g < self.order, "element out of range");
            if !member[g] {
                member[g] = true;
                elems.push(g);
                queue.push(g);
            }
        }
        while let Some(g) = queue.pop() {
            let push = |x: usize, member: &mut Vec<bool>, elems: &mut Vec<usize>| {
                if !member[x] {
                    member[x] = true;
                    elems.push(x);
                    x
                } else {
                    usize::MAX
                }
            };
            let gi = self.inv(g);
            let added = push(gi, &mut member, &mut elems);
            if added != usize::MAX {
                queue.push(added);
            }
            // Products with every current member, both sides.
            let snapshot: Vec<usize> = elems.clone();
            for &h in &snapshot {
                for x in [self.op(g, h), self.op(h, g)] {
                    let added = push(x, &mut member, &mut elems);
                    if added != usize::MAX {
                        queue.push(added);
                    }
                }
            }
        }
        ElementSet::new(elems)
    }

    /// Is `ci`, together with the identity, closed under products and
    /// inverses? `ci` itself must not contain the identity.
    pub fn is_subgroup_with_id(&self, ci: &ElementSet) -> Result<bool> {
        if ci.contains(self.identity) {
            return Err(Error::IdentityInSet);
        }
        Ok(self.is_subgroup_set(&ci.with(self.identity)))
    }

    /// Subgroup test for a set that already includes the identity.
    pub(crate) fn is_subgroup_set(&self, h: &ElementSet) -> bool {
        if !h.contains(self.identity) {
            return false;
        }
        h.iter().all(|a| {
            h.contains(self.inv(a)) && h.iter().all(|b| h.contains(self.op(a, b)))
        })
    }

    /// Right cosets `H * g`, each sorted, listed by minimal element.
    pub fn right_cosets(&self, h: &ElementSet) -> Result<Vec<ElementSet>> {
        if !self.is_subgroup_set(h) {
            return Err(Error::NotASubgroup);
        }
        let mut assigned = vec![false; self.order];
        let mut cosets = Vec::with_capacity(self.order / h.len().max(1));
        for g in 0..self.order {
            if assigned[g] {
                continue;
            }
            let coset: ElementSet = h.iter().map(|x| self.op(x, g)).collect();
            for e in coset.iter() {
                assigned[e] = true;
            }
            cosets.push(coset);
        }
        Ok(cosets)
    }

    /// `{s * t : s in S, t in T}`, deduplicated.
    pub fn set_product(&self, s: &ElementSet, t: &ElementSet) -> ElementSet {
        let mut out = Vec::with_capacity(s.len() * t.len());
        for a in s.iter() {
            for b in t.iter() {
                out.push(self.op(a, b));
            }
        }
        ElementSet::new(out)
    }

    /// Convenience: every non-identity element.
    pub fn non_identity(&self) -> ElementSet {
        (0..self.order).filter(|&g| g != self.identity).collect()
    }
}

fn backing_invert_product(backing: &Backing, g: usize) -> usize {
    match backing {
        Backing::Product { orders, strides } => orders
            .iter()
            .zip(strides)
            .map(|(&nj, &sj)| {
                let a = g / sj % nj;
                (nj - a) % nj * sj
            })
            .sum(),
        Backing::Table { .. } => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// S3 as permutations of three symbols, composed left-to-right as
    /// (p * q)(x) = p(q(x)). Independent oracle for table-backed groups.
    fn s3_table() -> Vec<Vec<usize>> {
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

    fn z223() -> FiniteGroup {
        FiniteGroup::abelian_product(&[2, 2, 3]).unwrap()
    }

    fn z24() -> FiniteGroup {
        FiniteGroup::abelian_product(&[2, 4]).unwrap()
    }

    #[test]
    fn abelian_product_orders() {
        assert_eq!(z223().order(), 12);
        let z2 = FiniteGroup::abelian_product(&[2]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.op(1, 1), 0);
        let z24 = z24();
        assert_eq!(z24.order(), 8);
        let a = z24.from_coords(&[1, 3]).unwrap();
        let b = z24.from_coords(&[1, 1]).unwrap();
        assert_eq!(z24.op(a, b), 0);
    }

    #[test]
    fn abelian_product_rejects_bad_input() {
        assert!(matches!(
            FiniteGroup::abelian_product(&[]),
            Err(Error::EmptyOrders)
        ));
        assert!(matches!(
            FiniteGroup::abelian_product(&[2, 1]),
            Err(Error::OrderTooSmall(1))
        ));
        assert!(matches!(
            FiniteGroup::abelian_product(&[64, 65]),
            Err(Error::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn coords_roundtrip() {
        let g = z223();
        for idx in 0..g.order() {
            let c = g.coords(idx).unwrap();
            assert_eq!(g.from_coords(&c).unwrap(), idx);
        }
        assert_eq!(g.from_coords(&[1, 0, 0]).unwrap(), 6);
        assert_eq!(g.from_coords(&[0, 0, 1]).unwrap(), 1);
    }

    #[test]
    fn table_group_z3() {
        let g =
            FiniteGroup::from_table(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_abelian());
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 2);
    }

    #[test]
    fn table_group_s3() {
        let g = FiniteGroup::from_table(s3_table()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        // Index 3 is the cycle (0 1 2) in the oracle's enumeration.
        assert_eq!(g.element_order(3), 3);
    }

    #[test]
    fn table_group_rejects_non_associative() {
        // Z3 addition with one entry corrupted; identity and inverses survive.
        let err = FiniteGroup::from_table(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 2]])
            .unwrap_err();
        match err {
            Error::NonAssociative { a, b, c } => {
                assert_eq!((a, b, c), (1, 1, 2));
            }
            other => panic!("expected NonAssociative, got {other:?}"),
        }
    }

    #[test]
    fn table_group_rejects_missing_identity() {
        // Constant rows: no identity element exists.
        let err = FiniteGroup::from_table(vec![vec![0, 0], vec![0, 0]]).unwrap_err();
        assert_eq!(err, Error::NoIdentity);
    }

    #[test]
    fn element_orders_and_inverses() {
        let g = z223();
        assert_eq!(g.element_order(g.from_coords(&[1, 0, 0]).unwrap()), 2);
        let g24 = z24();
        let e01 = g24.from_coords(&[0, 1]).unwrap();
        assert_eq!(g24.inv(e01), g24.from_coords(&[0, 3]).unwrap());
        assert_eq!(g24.element_order(e01), 4);
    }

    #[test]
    fn closure_examples() {
        let g = z223();
        let c = ElementSet::singleton(g.from_coords(&[0, 0, 1]).unwrap());
        let h = g.subgroup_closure(&c);
        assert_eq!(h, ElementSet::new(vec![0, 1, 2]));

        // The full prism connection set generates everything.
        let full: ElementSet = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 2]]
            .iter()
            .map(|c| g.from_coords(c).unwrap())
            .collect();
        assert_eq!(g.subgroup_closure(&full).len(), 12);

        assert_eq!(
            g.subgroup_closure(&ElementSet::singleton(0)),
            ElementSet::singleton(0)
        );
    }

    #[test]
    fn subgroup_with_id_examples() {
        let g = z24();
        let z4_piece: ElementSet = [[0, 1], [0, 2], [0, 3]]
            .iter()
            .map(|c| g.from_coords(c).unwrap())
            .collect();
        assert!(g.is_subgroup_with_id(&z4_piece).unwrap());

        let twisted: ElementSet = [[1, 1], [0, 2], [1, 3]]
            .iter()
            .map(|c| g.from_coords(c).unwrap())
            .collect();
        assert!(g.is_subgroup_with_id(&twisted).unwrap());

        let open = ElementSet::singleton(g.from_coords(&[0, 1]).unwrap());
        assert!(!g.is_subgroup_with_id(&open).unwrap());

        assert_eq!(
            g.is_subgroup_with_id(&ElementSet::singleton(0)),
            Err(Error::IdentityInSet)
        );
    }

    #[test]
    fn right_cosets_examples() {
        let g = z24();
        let h: ElementSet = [[0, 0], [1, 0]]
            .iter()
            .map(|c| g.from_coords(c).unwrap())
            .collect();
        let cosets = g.right_cosets(&h).unwrap();
        assert_eq!(cosets.len(), 4);
        assert!(cosets.iter().all(|c| c.len() == 2));

        let whole: ElementSet = (0..8).collect();
        assert_eq!(g.right_cosets(&whole).unwrap().len(), 1);

        let g12 = z223();
        let tri = ElementSet::new(vec![0, 1, 2]);
        let cosets = g12.right_cosets(&tri).unwrap();
        assert_eq!(cosets.len(), 4);
        assert!(cosets.iter().all(|c| c.len() == 3));

        assert_eq!(
            g.right_cosets(&ElementSet::new(vec![1])),
            Err(Error::NotASubgroup)
        );
    }

    #[test]
    fn set_product_examples() {
        let g = z24();
        let s: ElementSet = [[0, 0], [1, 0]].iter().map(|c| g.from_coords(c).unwrap()).collect();
        let t: ElementSet = [[0, 0], [0, 2]].iter().map(|c| g.from_coords(c).unwrap()).collect();
        let expect: ElementSet = [[0, 0], [1, 0], [0, 2], [1, 2]]
            .iter()
            .map(|c| g.from_coords(c).unwrap())
            .collect();
        assert_eq!(g.set_product(&s, &t), expect);
        assert_eq!(g.set_product(&ElementSet::singleton(0), &t), t);

        // Two order-2 subgroups of S3 with rs != sr.
        let s3 = FiniteGroup::from_table(s3_table()).unwrap();
        let transpositions: Vec<usize> = (0..6).filter(|&g| s3.element_order(g) == 2).collect();
        assert_eq!(transpositions.len(), 3);
        let a = ElementSet::new(vec![s3.identity(), transpositions[0]]);
        let b = ElementSet::new(vec![s3.identity(), transpositions[1]]);
        assert_ne!(s3.set_product(&a, &b), s3.set_product(&b, &a));
    }

    #[test]
    fn lagrange_exhaustive_small() {
        // Every subgroup-with-id found among subsets has order dividing n.
        for orders in [vec![2, 4], vec![12], vec![2, 2, 3]] {
            let g = FiniteGroup::abelian_product(&orders).unwrap();
            let n = g.order();
            let non_id: Vec<usize> = (1..n).collect();
            for mask in 0u32..(1 << non_id.len().min(11)) {
                let ci: ElementSet = non_id
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &g)| g)
                    .collect();
                if g.is_subgroup_with_id(&ci).unwrap() {
                    assert_eq!(n % (ci.len() + 1), 0, "Lagrange fails for {ci:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn closure_is_subgroup_and_lagrange(
            orders in proptest::collection::vec(2usize..5, 1..3),
            seed in proptest::collection::vec(0usize..100, 1..4),
        ) {
            let g = FiniteGroup::abelian_product(&orders).unwrap();
            let s: ElementSet = seed.iter().map(|&x| x % g.order()).collect();
            let h = g.subgroup_closure(&s);
            prop_assert!(g.is_subgroup_set(&h));
            prop_assert_eq!(g.order() % h.len(), 0);
        }

        #[test]
        fn cosets_partition(
            orders in proptest::collection::vec(2usize..5, 1..3),
            gen in 0usize..100,
        ) {
            let g = FiniteGroup::abelian_product(&orders).unwrap();
            let h = g.subgroup_closure(&ElementSet::singleton(gen % g.order()));
            let cosets = g.right_cosets(&h).unwrap();
            let mut seen = vec![false; g.order()];
            for coset in &cosets {
                prop_assert_eq!(coset.len(), h.len());
                for e in coset.iter() {
                    prop_assert!(!seen[e], "element in two cosets");
                    seen[e] = true;
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
        }

        #[test]
        fn abelian_set_products_commute(
            orders in proptest::collection::vec(2usize..5, 1..3),
            xs in proptest::collection::vec(0usize..100, 1..5),
            ys in proptest::collection::vec(0usize..100, 1..5),
        ) {
            let g = FiniteGroup::abelian_product(&orders).unwrap();
            let s: ElementSet = xs.iter().map(|&x| x % g.order()).collect();
            let t: ElementSet = ys.iter().map(|&y| y % g.order()).collect();
            prop_assert_eq!(g.set_product(&s, &t), g.set_product(&t, &s));
        }

        #[test]
        fn disjoint_subgroup_product_size(
            o1 in 2usize..5,
            o2 in 2usize..5,
        ) {
            // In Z_{o1} x Z_{o2} the two factor subgroups meet only at id,
            // so |S * T| = |S| |T|.
            let g = FiniteGroup::abelian_product(&[o1, o2]).unwrap();
            let s = g.subgroup_closure(&ElementSet::singleton(g.from_coords(&[1, 0]).unwrap()));
            let t = g.subgroup_closure(&ElementSet::singleton(g.from_coords(&[0, 1]).unwrap()));
            prop_assert_eq!(s.intersection(&t).len(), 1);
            prop_assert_eq!(g.set_product(&s, &t).len(), s.len() * t.len());
        }
    }
}
