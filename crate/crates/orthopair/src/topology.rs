use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A finite topological space given extensionally: a point count and the
/// full list of open sets as bitmasks over the points. The lattice must
/// contain the empty set and the whole space and be closed under pairwise
/// union and intersection.
///
/// Open sets keep their input order; every per-open result elsewhere in the
/// crate is indexed against this list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    points: usize,
    opens: Vec<u64>,
}

/// Structural defects reported by `validate_topology`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologyViolation {
    TooManyPoints { points: usize },
    StrayPoint { open: usize },
    DuplicateOpen { first: usize, second: usize },
    MissingEmptySet,
    MissingWholeSpace,
    UnionEscapes { a: usize, b: usize },
    IntersectionEscapes { a: usize, b: usize },
}

impl fmt::Display for TopologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyViolation::TooManyPoints { points } => {
                write!(f, "{points} points exceed the supported 64")
            }
            TopologyViolation::StrayPoint { open } => {
                write!(f, "open {open} mentions a point outside the space")
            }
            TopologyViolation::DuplicateOpen { first, second } => {
                write!(f, "opens {first} and {second} are the same set")
            }
            TopologyViolation::MissingEmptySet => write!(f, "the empty set is not listed"),
            TopologyViolation::MissingWholeSpace => write!(f, "the whole space is not listed"),
            TopologyViolation::UnionEscapes { a, b } => {
                write!(f, "union of opens {a} and {b} is not listed")
            }
            TopologyViolation::IntersectionEscapes { a, b } => {
                write!(f, "intersection of opens {a} and {b} is not listed")
            }
        }
    }
}

impl FiniteSpace {
    /// Builds and validates; use `new_unchecked` plus `validate_topology` to
    /// inspect broken lattices.
    pub fn new(points: usize, opens: Vec<u64>) -> Result<Self> {
        let space = FiniteSpace { points, opens };
        let violations = space.validate_topology();
        if let Some(v) = violations.first() {
            return Err(Error::Invalid(format!("topology: {v}")));
        }
        Ok(space)
    }

    pub fn new_unchecked(points: usize, opens: Vec<u64>) -> Self {
        FiniteSpace { points, opens }
    }

    /// The one-point space: opens are the empty set and the point.
    pub fn point() -> Self {
        FiniteSpace {
            points: 1,
            opens: vec![0b0, 0b1],
        }
    }

    /// Two points with exactly one of them open on its own.
    pub fn sierpinski() -> Self {
        FiniteSpace {
            points: 2,
            opens: vec![0b00, 0b10, 0b11],
        }
    }

    /// Chain of opens {} < {n-1} < {n-2, n-1} < ... < X.
    pub fn chain(points: usize) -> Self {
        let mut opens = vec![0u64];
        let mut mask = 0u64;
        for p in (0..points).rev() {
            mask |= 1 << p;
            opens.push(mask);
        }
        FiniteSpace { points, opens }
    }

    /// Every subset open.
    pub fn discrete(points: usize) -> Self {
        let opens = (0..(1u64 << points)).collect();
        FiniteSpace { points, opens }
    }

    /// Only the empty set and the whole space.
    pub fn indiscrete(points: usize) -> Self {
        FiniteSpace {
            points,
            opens: vec![0, (1u64 << points) - 1],
        }
    }

    /// Closes an arbitrary family (plus the empty set and whole space) under
    /// union and intersection; opens come out sorted by (size, mask).
    pub fn generated(points: usize, family: &[u64]) -> Self {
        let full = if points == 64 {
            u64::MAX
        } else {
            (1u64 << points) - 1
        };
        let mut set: BTreeSet<u64> = BTreeSet::new();
        set.insert(0);
        set.insert(full);
        for &o in family {
            set.insert(o & full);
        }
        loop {
            let current: Vec<u64> = set.iter().copied().collect();
            let before = set.len();
            for (i, &a) in current.iter().enumerate() {
                for &b in &current[i + 1..] {
                    set.insert(a | b);
                    set.insert(a & b);
                }
            }
            if set.len() == before {
                break;
            }
        }
        let mut opens: Vec<u64> = set.into_iter().collect();
        opens.sort_by_key(|o| (o.count_ones(), *o));
        FiniteSpace { points, opens }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn full_mask(&self) -> u64 {
        if self.points == 64 {
            u64::MAX
        } else {
            (1u64 << self.points) - 1
        }
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn open_index(&self, mask: u64) -> Option<usize> {
        self.opens.iter().position(|&o| o == mask)
    }

    /// Indices of nonempty opens, in listing order.
    pub fn nonempty_opens(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.opens.len()).filter(|&i| self.opens[i] != 0)
    }

    /// All (u, v) with opens[v] strictly contained in opens[u].
    pub fn strict_nested_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for u in 0..self.opens.len() {
            for v in 0..self.opens.len() {
                if u != v
                    && self.opens[v] & self.opens[u] == self.opens[v]
                    && self.opens[v] != self.opens[u]
                {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    }

    pub fn validate_topology(&self) -> Vec<TopologyViolation> {
        let mut out = Vec::new();
        if self.points > 64 {
            out.push(TopologyViolation::TooManyPoints {
                points: self.points,
            });
            return out;
        }
        let full = self.full_mask();
        for (i, &o) in self.opens.iter().enumerate() {
            if o & !full != 0 {
                out.push(TopologyViolation::StrayPoint { open: i });
            }
        }
        for i in 0..self.opens.len() {
            for j in i + 1..self.opens.len() {
                if self.opens[i] == self.opens[j] {
                    out.push(TopologyViolation::DuplicateOpen {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        if self.open_index(0).is_none() {
            out.push(TopologyViolation::MissingEmptySet);
        }
        if self.open_index(full).is_none() {
            out.push(TopologyViolation::MissingWholeSpace);
        }
        for i in 0..self.opens.len() {
            for j in i + 1..self.opens.len() {
                let (a, b) = (self.opens[i], self.opens[j]);
                if self.open_index(a | b).is_none() {
                    out.push(TopologyViolation::UnionEscapes { a: i, b: j });
                }
                if self.open_index(a & b).is_none() {
                    out.push(TopologyViolation::IntersectionEscapes { a: i, b: j });
                }
            }
        }
        out
    }

    /// Connected components of the subspace carried by `ambient` (any union
    /// of opens; pass the full mask for the whole space). A part is clopen in
    /// the subspace when both it and its complement within `ambient` are
    /// open; components are the minimal nonempty clopen parts, returned
    /// sorted by their lowest point.
    pub fn components_within(&self, ambient: u64) -> Vec<u64> {
        let clopens: Vec<u64> = self
            .opens
            .iter()
            .copied()
            .filter(|&o| o & ambient == o && self.open_index(ambient & !o).is_some() && o != 0)
            .collect();
        let mut comps: Vec<u64> = Vec::new();
        for p in 0..self.points {
            let bit = 1u64 << p;
            if ambient & bit == 0 {
                continue;
            }
            let mut comp = ambient;
            for &c in &clopens {
                if c & bit != 0 {
                    comp &= c;
                }
            }
            if !comps.contains(&comp) {
                comps.push(comp);
            }
        }
        comps
    }

    /// Components of the whole space.
    pub fn connected_components(&self) -> Vec<u64> {
        self.components_within(self.full_mask())
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// True when every nonempty open is connected as a subspace. Constant
    /// pairings and canonical duals need this, since a disconnected open
    /// cannot carry an invertible restriction to its parts.
    pub fn all_opens_connected(&self) -> bool {
        self.opens
            .iter()
            .all(|&o| o == 0 || self.components_within(o).len() == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_are_valid() {
        for s in [
            FiniteSpace::point(),
            FiniteSpace::sierpinski(),
            FiniteSpace::chain(4),
            FiniteSpace::discrete(3),
            FiniteSpace::indiscrete(3),
            FiniteSpace::generated(3, &[0b001, 0b110]),
        ] {
            assert!(s.validate_topology().is_empty(), "{s:?}");
        }
    }

    #[test]
    fn missing_union_is_reported() {
        // {0} and {1} without {0,1}.
        let s = FiniteSpace::new_unchecked(2, vec![0b00, 0b01, 0b10]);
        let v = s.validate_topology();
        assert!(v.contains(&TopologyViolation::MissingWholeSpace));
        assert!(v
            .iter()
            .any(|x| matches!(x, TopologyViolation::UnionEscapes { .. })));
        assert!(FiniteSpace::new(2, vec![0b00, 0b01, 0b10]).is_err());
    }

    #[test]
    fn missing_intersection_is_reported() {
        let s = FiniteSpace::new_unchecked(3, vec![0b000, 0b011, 0b110, 0b111]);
        let v = s.validate_topology();
        assert_eq!(
            v,
            vec![TopologyViolation::IntersectionEscapes { a: 1, b: 2 }]
        );
    }

    #[test]
    fn duplicates_and_stray_points() {
        let s = FiniteSpace::new_unchecked(1, vec![0b0, 0b1, 0b1]);
        assert!(s
            .validate_topology()
            .contains(&TopologyViolation::DuplicateOpen {
                first: 1,
                second: 2
            }));
        let s = FiniteSpace::new_unchecked(1, vec![0b0, 0b11]);
        assert!(s
            .validate_topology()
            .iter()
            .any(|x| matches!(x, TopologyViolation::StrayPoint { .. })));
    }

    #[test]
    fn sierpinski_is_connected() {
        assert_eq!(FiniteSpace::sierpinski().connected_components().len(), 1);
    }

    #[test]
    fn discrete_points_are_their_own_components() {
        let comps = FiniteSpace::discrete(2).connected_components();
        assert_eq!(comps, vec![0b01, 0b10]);
    }

    #[test]
    fn component_of_an_inner_open() {
        // Opens {}, {0}, {2}, {0,2}, X on three points: X is connected but
        // the open {0,2} splits into two pieces.
        let s = FiniteSpace::new(3, vec![0b000, 0b001, 0b100, 0b101, 0b111]).unwrap();
        assert!(s.is_connected());
        assert_eq!(s.components_within(0b101), vec![0b001, 0b100]);
        assert!(!s.all_opens_connected());
        assert!(FiniteSpace::chain(3).all_opens_connected());
        assert!(FiniteSpace::sierpinski().all_opens_connected());
    }

    #[test]
    fn two_component_space_with_connected_opens() {
        // Two Sierpinski pieces glued side by side.
        let s = FiniteSpace::generated(4, &[0b0010, 0b0011, 0b1000, 0b1100]);
        assert!(s.validate_topology().is_empty());
        assert_eq!(s.connected_components(), vec![0b0011, 0b1100]);
    }
}
