use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::Ring;
use crate::submodule::{kernel_basis, solve};
use crate::topology::FiniteSpace;

/// A family of free modules indexed by the open sets of a finite space,
/// with a restriction matrix for every nested pair. Restriction matrices map
/// coordinates on the larger open to coordinates on the smaller one, so
/// restrict(u, v) has shape rank(v) x rank(u).
///
/// Reflexive restrictions are implicitly the identity, and any restriction
/// into a rank-0 open is implicitly the empty matrix; only strictly nested
/// pairs with a nonzero target rank carry data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafModule {
    space: FiniteSpace,
    ring: Ring,
    ranks: Vec<usize>,
    restrictions: BTreeMap<(usize, usize), ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresheafViolation {
    RankCountMismatch {
        got: usize,
        want: usize,
    },
    EmptyOpenRank {
        rank: usize,
    },
    MissingRestriction {
        u: usize,
        v: usize,
    },
    WrongShape {
        u: usize,
        v: usize,
        got: (usize, usize),
        want: (usize, usize),
    },
    WrongRing {
        u: usize,
        v: usize,
    },
    StrayRestriction {
        u: usize,
        v: usize,
    },
    IdentityLaw {
        u: usize,
    },
    CompositionLaw {
        u: usize,
        v: usize,
        w: usize,
    },
}

impl fmt::Display for PresheafViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PresheafViolation::*;
        match self {
            RankCountMismatch { got, want } => {
                write!(f, "{got} ranks listed for {want} opens")
            }
            EmptyOpenRank { rank } => {
                write!(f, "the empty open must carry rank 0, found {rank}")
            }
            MissingRestriction { u, v } => write!(f, "no restriction from open {u} to open {v}"),
            WrongShape { u, v, got, want } => write!(
                f,
                "restriction {u}>{v} has shape {}x{}, expected {}x{}",
                got.0, got.1, want.0, want.1
            ),
            WrongRing { u, v } => write!(f, "restriction {u}>{v} is over the wrong ring"),
            StrayRestriction { u, v } => {
                write!(
                    f,
                    "restriction {u}>{v} given but open {v} is not inside open {u}"
                )
            }
            IdentityLaw { u } => write!(f, "restriction {u}>{u} is not the identity"),
            CompositionLaw { u, v, w } => write!(
                f,
                "restriction {u}>{w} differs from composing {u}>{v} then {v}>{w}"
            ),
        }
    }
}

/// Outcome of checking both sheaf axioms against one cover. A `None` witness
/// means the axiom holds.
#[derive(Clone, Debug)]
pub struct SheafAxiomReport {
    /// A nonzero section of the covered open restricting to zero on every
    /// member.
    pub locality_witness: Option<ExactMatrix>,
    /// A compatible family (stacked member coordinates) admitting no glued
    /// section.
    pub gluing_witness: Option<ExactMatrix>,
}

impl SheafAxiomReport {
    pub fn locality_holds(&self) -> bool {
        self.locality_witness.is_none()
    }

    pub fn gluing_holds(&self) -> bool {
        self.gluing_witness.is_none()
    }

    pub fn holds(&self) -> bool {
        self.locality_holds() && self.gluing_holds()
    }
}

impl SheafModule {
    pub fn from_parts(
        space: FiniteSpace,
        ring: Ring,
        ranks: Vec<usize>,
        restrictions: BTreeMap<(usize, usize), ExactMatrix>,
    ) -> Self {
        SheafModule {
            space,
            ring,
            ranks,
            restrictions,
        }
    }

    /// The sheaf of locally constant sections with n coordinates per
    /// connected piece: an open carries rank n times its number of
    /// components, and restrictions send each piece of the smaller open the
    /// coordinates of the unique piece of the larger one containing it.
    /// On a space whose opens are all connected this is rank n everywhere
    /// with identity restrictions.
    pub fn constant(space: &FiniteSpace, ring: Ring, n: usize) -> Self {
        let pieces: Vec<Vec<u64>> = space
            .opens()
            .iter()
            .map(|&o| space.components_within(o))
            .collect();
        let ranks: Vec<usize> = pieces.iter().map(|p| p.len() * n).collect();
        let mut restrictions = BTreeMap::new();
        for (u, v) in space.strict_nested_pairs() {
            if ranks[v] == 0 {
                continue;
            }
            let mut m = ExactMatrix::zeros(ring, ranks[v], ranks[u]);
            for (bq, &q) in pieces[v].iter().enumerate() {
                let bp = pieces[u]
                    .iter()
                    .position(|&p| q & p == q)
                    .expect("a connected piece lies in one larger piece");
                for t in 0..n {
                    m.set(bq * n + t, bp * n + t, crate::scalar::Scalar::one(ring));
                }
            }
            restrictions.insert((u, v), m);
        }
        SheafModule {
            space: space.clone(),
            ring,
            ranks,
            restrictions,
        }
    }

    /// The naive constant presheaf: rank n on every nonempty open with
    /// identity restrictions. Coincides with `constant` exactly when every
    /// open of the space is connected; on any other space it is a presheaf
    /// that fails gluing, which makes it a useful negative fixture.
    pub fn constant_presheaf(space: &FiniteSpace, ring: Ring, n: usize) -> Self {
        let ranks: Vec<usize> = space
            .opens()
            .iter()
            .map(|&o| if o == 0 { 0 } else { n })
            .collect();
        let mut restrictions = BTreeMap::new();
        for (u, v) in space.strict_nested_pairs() {
            if ranks[v] == 0 {
                continue;
            }
            restrictions.insert((u, v), ExactMatrix::identity(ring, n));
        }
        SheafModule {
            space: space.clone(),
            ring,
            ranks,
            restrictions,
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank_of(&self, open: usize) -> usize {
        self.ranks[open]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), ExactMatrix> {
        &self.restrictions
    }

    /// Mutable access for building deliberately defective fixtures.
    pub fn restrictions_mut(&mut self) -> &mut BTreeMap<(usize, usize), ExactMatrix> {
        &mut self.restrictions
    }

    /// The stored or implicit restriction matrix, if any.
    pub fn restriction_opt(&self, u: usize, v: usize) -> Option<ExactMatrix> {
        if u == v {
            return Some(ExactMatrix::identity(self.ring, self.ranks[u]));
        }
        if self.ranks[v] == 0 {
            return Some(ExactMatrix::zeros(self.ring, 0, self.ranks[u]));
        }
        self.restrictions.get(&(u, v)).cloned()
    }

    /// Restriction matrix for a nested pair; panics when absent, so validate
    /// first on untrusted data.
    pub fn restriction(&self, u: usize, v: usize) -> ExactMatrix {
        self.restriction_opt(u, v)
            .unwrap_or_else(|| panic!("restriction {u}>{v} missing"))
    }

    /// Identity and composition laws, shapes, and the rank-0 empty open,
    /// checked exactly. Shape-level defects suppress the law checks, which
    /// could not run safely.
    pub fn validate_presheaf(&self) -> Vec<PresheafViolation> {
        let mut out = Vec::new();
        if self.ranks.len() != self.space.open_count() {
            out.push(PresheafViolation::RankCountMismatch {
                got: self.ranks.len(),
                want: self.space.open_count(),
            });
            return out;
        }
        if let Some(e) = self.space.open_index(0) {
            if self.ranks[e] != 0 {
                out.push(PresheafViolation::EmptyOpenRank {
                    rank: self.ranks[e],
                });
            }
        }
        let opens = self.space.opens();
        for (&(u, v), m) in &self.restrictions {
            let nested = u < opens.len() && v < opens.len() && opens[v] & opens[u] == opens[v];
            if !nested || u == v {
                if u == v && u < opens.len() {
                    // Reflexive entries are allowed but must be identities.
                    if m.rows() != self.ranks[u] || m.cols() != self.ranks[u] {
                        out.push(PresheafViolation::WrongShape {
                            u,
                            v,
                            got: (m.rows(), m.cols()),
                            want: (self.ranks[u], self.ranks[u]),
                        });
                    } else if !m.is_identity() {
                        out.push(PresheafViolation::IdentityLaw { u });
                    }
                } else {
                    out.push(PresheafViolation::StrayRestriction { u, v });
                }
                continue;
            }
            let want = (self.ranks[v], self.ranks[u]);
            if (m.rows(), m.cols()) != want {
                out.push(PresheafViolation::WrongShape {
                    u,
                    v,
                    got: (m.rows(), m.cols()),
                    want,
                });
            } else if m.ring() != self.ring {
                out.push(PresheafViolation::WrongRing { u, v });
            }
        }
        for (u, v) in self.space.strict_nested_pairs() {
            if self.restriction_opt(u, v).is_none() {
                out.push(PresheafViolation::MissingRestriction { u, v });
            }
        }
        if !out.is_empty() {
            return out;
        }
        // Laws: restrict(v, w) . restrict(u, v) = restrict(u, w) for every
        // chain w inside v inside u.
        for (u, v) in self.space.strict_nested_pairs() {
            for (v2, w) in self.space.strict_nested_pairs() {
                if v2 != v {
                    continue;
                }
                let uv = self.restriction(u, v);
                let vw = self.restriction(v, w);
                let uw = self.restriction(u, w);
                if vw.mul(&uv) != uw {
                    out.push(PresheafViolation::CompositionLaw { u, v, w });
                }
            }
        }
        out
    }

    /// Locality and gluing for one cover of one open, as exact linear
    /// algebra: locality is triviality of the kernel of the stacked
    /// restriction map, gluing is solvability of the stacked map against
    /// every compatible family (a kernel basis of the pairwise difference
    /// map). Covers must consist of listed opens inside `u` and union to it.
    pub fn check_sheaf_axioms(&self, u: usize, cover: &[usize]) -> Result<SheafAxiomReport> {
        let opens = self.space.opens();
        if u >= opens.len() {
            return Err(Error::BadCover(format!("open index {u} out of range")));
        }
        let mut union = 0u64;
        for &v in cover {
            if v >= opens.len() {
                return Err(Error::BadCover(format!("member index {v} out of range")));
            }
            if opens[v] & opens[u] != opens[v] {
                return Err(Error::BadCover(format!(
                    "member open {v} is not inside open {u}"
                )));
            }
            union |= opens[v];
        }
        if union != opens[u] {
            return Err(Error::BadCover(format!(
                "members cover {union:#b} of open {u} ({:#b})",
                opens[u]
            )));
        }

        let blocks: Vec<ExactMatrix> = cover.iter().map(|&v| self.restriction(u, v)).collect();
        let stacked = if blocks.is_empty() {
            ExactMatrix::zeros(self.ring, 0, self.ranks[u])
        } else {
            ExactMatrix::vstack(&blocks.iter().collect::<Vec<_>>())
        };

        let kernel = kernel_basis(&stacked);
        let locality_witness = if kernel.dim() == 0 {
            None
        } else {
            Some(kernel.generators().col(0))
        };

        // Difference map on stacked member coordinates, one block row per
        // member pair, valued in sections of the pairwise intersections.
        let member_ranks: Vec<usize> = cover.iter().map(|&v| self.ranks[v]).collect();
        let total: usize = member_ranks.iter().sum();
        let mut rows: Vec<ExactMatrix> = Vec::new();
        for i in 0..cover.len() {
            for j in i + 1..cover.len() {
                let w_mask = opens[cover[i]] & opens[cover[j]];
                let w = self
                    .space
                    .open_index(w_mask)
                    .expect("topologies are intersection-closed");
                if self.ranks[w] == 0 {
                    continue;
                }
                let mut row = ExactMatrix::zeros(self.ring, self.ranks[w], total);
                let ri = self.restriction(cover[i], w);
                let rj = self.restriction(cover[j], w);
                let offset_i: usize = member_ranks[..i].iter().sum();
                let offset_j: usize = member_ranks[..j].iter().sum();
                for r in 0..self.ranks[w] {
                    for c in 0..member_ranks[i] {
                        row.set(r, offset_i + c, ri.get(r, c).clone());
                    }
                    for c in 0..member_ranks[j] {
                        row.set(r, offset_j + c, rj.get(r, c).neg());
                    }
                }
                rows.push(row);
            }
        }
        let difference = if rows.is_empty() {
            ExactMatrix::zeros(self.ring, 0, total)
        } else {
            ExactMatrix::vstack(&rows.iter().collect::<Vec<_>>())
        };

        let compatible = kernel_basis(&difference);
        let mut gluing_witness = None;
        for c in 0..compatible.dim() {
            let family = compatible.generators().col(c);
            if solve(&stacked, &family).is_err() {
                gluing_witness = Some(family);
                break;
            }
        }

        Ok(SheafAxiomReport {
            locality_witness,
            gluing_witness,
        })
    }

    /// Locally free of one rank per connected component: within each
    /// component all nonempty opens carry the same rank and all restriction
    /// maps between them are invertible over the ring. Opens meeting several
    /// components are not constrained here; `check_sheaf_axioms` governs how
    /// they decompose.
    pub fn is_vector_sheaf(&self) -> bool {
        let opens = self.space.opens();
        for comp in self.space.connected_components() {
            let inside: Vec<usize> = (0..opens.len())
                .filter(|&i| opens[i] != 0 && opens[i] & comp == opens[i])
                .collect();
            let Some(&first) = inside.first() else {
                continue;
            };
            let r = self.ranks[first];
            if inside.iter().any(|&i| self.ranks[i] != r) {
                return false;
            }
            for &u in &inside {
                for &v in &inside {
                    if u == v || opens[v] & opens[u] != opens[v] {
                        continue;
                    }
                    match self.restriction_opt(u, v) {
                        Some(m) => {
                            if !m.is_unimodular() {
                                return false;
                            }
                        }
                        None => return false,
                    }
                }
            }
        }
        true
    }
}

/// Open-by-open direct sum: ranks add, restrictions join block diagonally.
pub fn direct_sum(a: &SheafModule, b: &SheafModule) -> Result<SheafModule> {
    if a.space() != b.space() {
        return Err(Error::Invalid("summands live on different spaces".into()));
    }
    if a.ring() != b.ring() {
        return Err(Error::MixedRings("summands over different rings".into()));
    }
    let ranks: Vec<usize> = a
        .ranks()
        .iter()
        .zip(b.ranks())
        .map(|(x, y)| x + y)
        .collect();
    let mut restrictions = BTreeMap::new();
    for (u, v) in a.space().strict_nested_pairs() {
        if ranks[v] == 0 {
            continue;
        }
        let ra = a.restriction(u, v);
        let rb = b.restriction(u, v);
        restrictions.insert((u, v), ExactMatrix::block_diag(a.ring(), &[&ra, &rb]));
    }
    Ok(SheafModule::from_parts(
        a.space().clone(),
        a.ring(),
        ranks,
        restrictions,
    ))
}

/// Every open cover of the given open: each subset of the nonempty opens
/// contained in it whose union is the whole open. The empty open has
/// exactly the empty cover. Exponential in the number of sub-opens, which
/// stays small on the few-point spaces this library targets.
pub fn covers_of(space: &FiniteSpace, u: usize) -> Vec<Vec<usize>> {
    let opens = space.opens();
    let target = opens[u];
    if target == 0 {
        return vec![Vec::new()];
    }
    let members: Vec<usize> = (0..opens.len())
        .filter(|&v| opens[v] != 0 && opens[v] & target == opens[v])
        .collect();
    let mut covers = Vec::new();
    for pick in 0u64..(1 << members.len()) {
        let mut union = 0u64;
        let mut cover = Vec::new();
        for (slot, &v) in members.iter().enumerate() {
            if pick & (1 << slot) != 0 {
                union |= opens[v];
                cover.push(v);
            }
        }
        if union == target {
            covers.push(cover);
        }
    }
    covers
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3_constant(n: usize) -> SheafModule {
        SheafModule::constant(&FiniteSpace::chain(3), Ring::Rational, n)
    }

    #[test]
    fn constant_sheaf_on_a_chain_is_plain() {
        let m = chain3_constant(2);
        assert!(m.validate_presheaf().is_empty());
        assert_eq!(m.ranks(), &[0, 2, 2, 2]);
        for (u, v) in m.space().strict_nested_pairs() {
            if m.rank_of(v) > 0 {
                assert!(m.restriction(u, v).is_identity());
            }
        }
        assert!(m.is_vector_sheaf());
    }

    #[test]
    fn constant_sheaf_counts_pieces() {
        // Opens {}, {0}, {2}, {0,2}, X: the open {0,2} has two pieces.
        let s = FiniteSpace::new(3, vec![0b000, 0b001, 0b100, 0b101, 0b111]).unwrap();
        let m = SheafModule::constant(&s, Ring::Integer, 1);
        assert!(m.validate_presheaf().is_empty());
        assert_eq!(m.ranks(), &[0, 1, 1, 2, 1]);
        // X -> {0,2} is the diagonal embedding.
        let x = s.open_index(0b111).unwrap();
        let uv = s.open_index(0b101).unwrap();
        assert_eq!(
            m.restriction(x, uv),
            ExactMatrix::from_i64(Ring::Integer, &[&[1], &[1]])
        );
        // All covers of {0,2} glue, including the disjoint one.
        let c0 = s.open_index(0b001).unwrap();
        let c2 = s.open_index(0b100).unwrap();
        let report = m.check_sheaf_axioms(uv, &[c0, c2]).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn varying_rank_presheaf_on_discrete_points() {
        // Ranks 1 and 3 on the two points of a discrete space; the whole
        // space carries their sum with the projection restrictions.
        let s = FiniteSpace::discrete(2);
        let p0 = s.open_index(0b01).unwrap();
        let p1 = s.open_index(0b10).unwrap();
        let x = s.open_index(0b11).unwrap();
        let mut restrictions = BTreeMap::new();
        restrictions.insert(
            (x, p0),
            ExactMatrix::from_i64(Ring::Rational, &[&[1, 0, 0, 0]]),
        );
        restrictions.insert(
            (x, p1),
            ExactMatrix::from_i64(
                Ring::Rational,
                &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            ),
        );
        let mut ranks = vec![0; 4];
        ranks[p0] = 1;
        ranks[p1] = 3;
        ranks[x] = 4;
        let m = SheafModule::from_parts(s.clone(), Ring::Rational, ranks, restrictions);
        assert!(m.validate_presheaf().is_empty());
        assert!(m.is_vector_sheaf());
        let report = m.check_sheaf_axioms(x, &[p0, p1]).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn identity_and_composition_violations() {
        let mut m = chain3_constant(1);
        let triple = (3usize, 2usize, 1usize); // X > {1,2} > {2}
        m.restrictions.insert(
            (triple.0, triple.2),
            ExactMatrix::from_i64(Ring::Rational, &[&[2]]),
        );
        let v = m.validate_presheaf();
        assert_eq!(
            v,
            vec![PresheafViolation::CompositionLaw { u: 3, v: 2, w: 1 }]
        );

        let mut m = chain3_constant(1);
        m.restrictions
            .insert((2, 2), ExactMatrix::from_i64(Ring::Rational, &[&[5]]));
        assert_eq!(
            m.validate_presheaf(),
            vec![PresheafViolation::IdentityLaw { u: 2 }]
        );
    }

    #[test]
    fn shape_and_missing_violations() {
        let mut m = chain3_constant(2);
        m.restrictions
            .insert((3, 1), ExactMatrix::from_i64(Ring::Rational, &[&[1, 0]]));
        let v = m.validate_presheaf();
        assert!(matches!(
            v[0],
            PresheafViolation::WrongShape { u: 3, v: 1, .. }
        ));

        let mut m = chain3_constant(2);
        m.restrictions.remove(&(3, 1));
        assert_eq!(
            m.validate_presheaf(),
            vec![PresheafViolation::MissingRestriction { u: 3, v: 1 }]
        );

        let mut m = chain3_constant(2);
        m.ranks[0] = 1;
        let v = m.validate_presheaf();
        // The nonzero rank also makes every restriction into the empty open
        // missing, since those are implicit only at rank 0.
        assert_eq!(v[0], PresheafViolation::EmptyOpenRank { rank: 1 });
        assert!(v[1..]
            .iter()
            .all(|x| matches!(x, PresheafViolation::MissingRestriction { v: 0, .. })));
    }

    #[test]
    fn naive_constant_presheaf_fails_gluing_on_a_disjoint_cover() {
        let s = FiniteSpace::discrete(2);
        let m = SheafModule::constant_presheaf(&s, Ring::Rational, 1);
        assert!(m.validate_presheaf().is_empty(), "functorially fine");
        let x = s.open_index(0b11).unwrap();
        let p0 = s.open_index(0b01).unwrap();
        let p1 = s.open_index(0b10).unwrap();
        let report = m.check_sheaf_axioms(x, &[p0, p1]).unwrap();
        assert!(report.locality_holds());
        assert!(!report.gluing_holds());
        // The honest constant sheaf glues.
        let good = SheafModule::constant(&s, Ring::Rational, 1);
        assert!(good.check_sheaf_axioms(x, &[p0, p1]).unwrap().holds());
    }

    #[test]
    fn locality_failure_has_a_witness() {
        // Rank 1 everywhere with zero restrictions out of the top open.
        let s = FiniteSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        let top = s.open_index(0b011).unwrap();
        let a = s.open_index(0b001).unwrap();
        let b = s.open_index(0b010).unwrap();
        let x = s.open_index(0b111).unwrap();
        let mut restrictions = BTreeMap::new();
        for v in [a, b] {
            restrictions.insert((top, v), ExactMatrix::from_i64(Ring::Rational, &[&[0]]));
            restrictions.insert((x, v), ExactMatrix::from_i64(Ring::Rational, &[&[0]]));
        }
        restrictions.insert((x, top), ExactMatrix::from_i64(Ring::Rational, &[&[1]]));
        let m =
            SheafModule::from_parts(s.clone(), Ring::Rational, vec![0, 1, 1, 1, 1], restrictions);
        assert!(m.validate_presheaf().is_empty());
        let report = m.check_sheaf_axioms(top, &[a, b]).unwrap();
        assert!(!report.locality_holds());
        assert!(report.locality_witness.unwrap().rows() == 1);
    }

    #[test]
    fn empty_cover_of_the_empty_open_passes() {
        let m = chain3_constant(2);
        let empty = m.space().open_index(0).unwrap();
        let report = m.check_sheaf_axioms(empty, &[]).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn bad_covers_are_rejected() {
        let m = chain3_constant(1);
        let x = m.space().open_index(0b111).unwrap();
        let small = m.space().open_index(0b100).unwrap();
        // Union does not reach X.
        assert!(matches!(
            m.check_sheaf_axioms(x, &[small]),
            Err(Error::BadCover(_))
        ));
        // Member not inside the covered open.
        assert!(matches!(
            m.check_sheaf_axioms(small, &[x]),
            Err(Error::BadCover(_))
        ));
    }

    #[test]
    fn vector_sheaf_rejects_rank_jumps_on_connected_spaces() {
        let s = FiniteSpace::sierpinski();
        let sub = s.open_index(0b10).unwrap();
        let x = s.open_index(0b11).unwrap();
        let mut restrictions = BTreeMap::new();
        restrictions.insert((x, sub), ExactMatrix::from_i64(Ring::Rational, &[&[1, 0]]));
        let mut ranks = vec![0; 3];
        ranks[sub] = 1;
        ranks[x] = 2;
        let m = SheafModule::from_parts(s, Ring::Rational, ranks, restrictions);
        assert!(m.validate_presheaf().is_empty());
        assert!(!m.is_vector_sheaf());
    }

    #[test]
    fn vector_sheaf_requires_invertible_restrictions() {
        let s = FiniteSpace::sierpinski();
        let sub = s.open_index(0b10).unwrap();
        let x = s.open_index(0b11).unwrap();
        let mut restrictions = BTreeMap::new();
        restrictions.insert((x, sub), ExactMatrix::from_i64(Ring::Integer, &[&[2]]));
        let mut ranks = vec![0; 3];
        ranks[sub] = 1;
        ranks[x] = 1;
        let m = SheafModule::from_parts(s, Ring::Integer, ranks, restrictions);
        assert!(m.validate_presheaf().is_empty());
        // Doubling is injective but not an isomorphism over the integers.
        assert!(!m.is_vector_sheaf());
    }
}
