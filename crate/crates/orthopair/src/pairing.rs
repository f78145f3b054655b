use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::Ring;
use crate::sheaf::SheafModule;
use crate::snf;
use crate::submodule::{intersect, kernel_basis, quotient_presentation, SubmoduleBasis};

/// A bilinear pairing of two module families over the same finite space,
/// given by one gram matrix per open. The value on an open U at sections
/// x of E(U) and y of F(U) is x^T * gram(U) * y, so gram(U) has shape
/// rank_E(U) x rank_F(U), and compatibility with restriction to V inside U
/// reads restrict_E^T * gram(V) * restrict_F = gram(U).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    e: SheafModule,
    f: SheafModule,
    gram: Vec<ExactMatrix>,
    symmetric: bool,
    skew: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairingViolation {
    GramShape {
        open: usize,
        got: (usize, usize),
        want: (usize, usize),
    },
    GramRing {
        open: usize,
    },
    Compatibility {
        u: usize,
        v: usize,
    },
    NotSymmetric {
        open: usize,
    },
    NotSkew {
        open: usize,
    },
}

impl fmt::Display for PairingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PairingViolation::*;
        match self {
            GramShape { open, got, want } => write!(
                f,
                "gram on open {open} has shape {}x{}, expected {}x{}",
                got.0, got.1, want.0, want.1
            ),
            GramRing { open } => write!(f, "gram on open {open} is over the wrong ring"),
            Compatibility { u, v } => write!(
                f,
                "gram on open {u} disagrees with the restricted gram on open {v}"
            ),
            NotSymmetric { open } => write!(f, "gram on open {open} is not symmetric"),
            NotSkew { open } => write!(f, "gram on open {open} is not skew"),
        }
    }
}

/// Projections of a decomposition E = S1 + S2 together with their adjoints
/// on the other side of the pairing, which project onto the orthogonals in
/// reverse order.
#[derive(Clone, Debug)]
pub struct DualProjections {
    /// Projection of E onto S1 along S2.
    pub source_first: ExactMatrix,
    /// Projection of E onto S2 along S1.
    pub source_second: ExactMatrix,
    /// Adjoint of source_second: projects F onto the orthogonal of S1.
    pub dual_first: ExactMatrix,
    /// Adjoint of source_first: projects F onto the orthogonal of S2.
    pub dual_second: ExactMatrix,
}

/// Restriction of functionals to a direct summand.
#[derive(Clone, Debug)]
pub struct DualRestriction {
    /// Maps functionals on E to functionals on the summand; always
    /// surjective for a genuine summand.
    pub to_summand: ExactMatrix,
    /// The insertion of F into functionals on E, followed by restriction to
    /// the summand.
    pub restricted_insertion: ExactMatrix,
    pub surjective: bool,
}

/// The rank bookkeeping for one orthogonal computation: the ambient rank on
/// the opposite side, the input dimension, the orthogonal's dimension, and
/// how much of the input sits in the pairing's kernel. Ranks satisfy
/// ambient - dim_orthogonal = dim_input - dim_kernel_overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimReport {
    pub ambient: usize,
    pub dim_input: usize,
    pub dim_orthogonal: usize,
    pub dim_kernel_overlap: usize,
}

impl CodimReport {
    pub fn holds(&self) -> bool {
        self.ambient - self.dim_orthogonal == self.dim_input - self.dim_kernel_overlap
    }
}

impl Pairing {
    /// Structural constructor: spaces and rings must agree and there must be
    /// one gram per open. Pointwise conditions are left to
    /// `validate_pairing`.
    pub fn new(
        e: SheafModule,
        f: SheafModule,
        gram: Vec<ExactMatrix>,
        symmetric: bool,
        skew: bool,
    ) -> Result<Self> {
        if e.space() != f.space() {
            return Err(Error::Invalid(
                "pairing sides live on different spaces".into(),
            ));
        }
        if e.ring() != f.ring() {
            return Err(Error::MixedRings(
                "pairing sides are over different rings".into(),
            ));
        }
        if gram.len() != e.space().open_count() {
            return Err(Error::Invalid(format!(
                "{} grams listed for {} opens",
                gram.len(),
                e.space().open_count()
            )));
        }
        // One scalar value per open only matches restriction when no open
        // splits into pieces; on other spaces the value module itself has
        // several coordinates and this gram model cannot say what
        // compatibility means.
        if !e.space().all_opens_connected() {
            return Err(Error::Invalid(
                "pairings need every open of the space connected".into(),
            ));
        }
        Ok(Pairing {
            e,
            f,
            gram,
            symmetric,
            skew,
        })
    }

    /// The evaluation pairing of a vector sheaf against its dual: identity
    /// grams, with dual restrictions the inverse transposes. Requires every
    /// open of the space to be connected, since a locally free dual only
    /// mirrors restrictions open by open when no open splits into pieces.
    pub fn canonical(e: &SheafModule) -> Result<Self> {
        if !e.space().all_opens_connected() {
            return Err(Error::Invalid(
                "canonical dual needs every open connected".into(),
            ));
        }
        if !e.is_vector_sheaf() {
            return Err(Error::Invalid(
                "canonical dual needs a locally free module family".into(),
            ));
        }
        let mut restrictions = std::collections::BTreeMap::new();
        for (u, v) in e.space().strict_nested_pairs() {
            if e.rank_of(v) == 0 {
                continue;
            }
            let r = e.restriction(u, v);
            let inv = snf::inverse(&r).expect("vector sheaf restrictions are invertible");
            restrictions.insert((u, v), inv.transpose());
        }
        let dual = SheafModule::from_parts(
            e.space().clone(),
            e.ring(),
            e.ranks().to_vec(),
            restrictions,
        );
        let gram = (0..e.space().open_count())
            .map(|u| ExactMatrix::identity(e.ring(), e.rank_of(u)))
            .collect();
        Pairing::new(e.clone(), dual, gram, false, false)
    }

    pub fn e(&self) -> &SheafModule {
        &self.e
    }

    pub fn f(&self) -> &SheafModule {
        &self.f
    }

    pub fn ring(&self) -> Ring {
        self.e.ring()
    }

    pub fn space(&self) -> &crate::topology::FiniteSpace {
        self.e.space()
    }

    pub fn gram(&self, open: usize) -> &ExactMatrix {
        &self.gram[open]
    }

    pub fn grams(&self) -> &[ExactMatrix] {
        &self.gram
    }

    pub fn is_symmetric_flagged(&self) -> bool {
        self.symmetric
    }

    pub fn is_skew_flagged(&self) -> bool {
        self.skew
    }

    /// Shapes, rings, declared symmetry, and restriction compatibility on
    /// every nested pair of opens. Shape defects suppress the remaining
    /// checks.
    pub fn validate_pairing(&self) -> Vec<PairingViolation> {
        let mut out = Vec::new();
        for (open, g) in self.gram.iter().enumerate() {
            let want = (self.e.rank_of(open), self.f.rank_of(open));
            if (g.rows(), g.cols()) != want {
                out.push(PairingViolation::GramShape {
                    open,
                    got: (g.rows(), g.cols()),
                    want,
                });
            } else if g.rows() * g.cols() > 0 && g.ring() != self.ring() {
                out.push(PairingViolation::GramRing { open });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (open, g) in self.gram.iter().enumerate() {
            if self.symmetric && (g.rows() != g.cols() || *g != g.transpose()) {
                out.push(PairingViolation::NotSymmetric { open });
            }
            if self.skew && (g.rows() != g.cols() || g.transpose() != g.neg()) {
                out.push(PairingViolation::NotSkew { open });
            }
        }
        for (u, v) in self.space().strict_nested_pairs() {
            // Values on the empty open vanish, so nothing is preserved there.
            if self.space().opens()[v] == 0 {
                continue;
            }
            let re = self.e.restriction(u, v);
            let rf = self.f.restriction(u, v);
            let pulled = re.transpose().mul(&self.gram[v]).mul(&rf);
            if pulled != self.gram[u] {
                out.push(PairingViolation::Compatibility { u, v });
            }
        }
        out
    }

    /// Sections of E pairing to zero against all of F on the given open.
    pub fn left_kernel(&self, open: usize) -> SubmoduleBasis {
        kernel_basis(&self.gram[open].transpose())
    }

    /// Sections of F annihilated by all of E on the given open.
    pub fn right_kernel(&self, open: usize) -> SubmoduleBasis {
        kernel_basis(&self.gram[open])
    }

    pub fn is_nondegenerate(&self, open: usize) -> bool {
        self.left_kernel(open).dim() == 0 && self.right_kernel(open).dim() == 0
    }

    /// Whether both insertion maps are isomorphisms: the gram is square with
    /// unit determinant. Strictly stronger than `is_nondegenerate` over the
    /// integers.
    pub fn is_perfect(&self, open: usize) -> bool {
        self.gram[open].is_unimodular()
    }

    /// E(U) -> F(U)*, a section x goes to pairing against x.
    pub fn insertion_left(&self, open: usize) -> ExactMatrix {
        self.gram[open].transpose()
    }

    /// F(U) -> E(U)*, a section y goes to pairing against y.
    pub fn insertion_right(&self, open: usize) -> ExactMatrix {
        self.gram[open].clone()
    }

    pub fn pairing_rank(&self, open: usize) -> usize {
        snf::rank(&self.gram[open])
    }

    /// Orthogonal inside F of a submodule of E(U).
    pub fn orthogonal_in_f(&self, open: usize, s: &SubmoduleBasis) -> SubmoduleBasis {
        assert_eq!(s.ambient_rank(), self.e.rank_of(open), "wrong ambient");
        kernel_basis(&s.generators().transpose().mul(&self.gram[open]))
    }

    /// Orthogonal inside E of a submodule of F(U).
    pub fn orthogonal_in_e(&self, open: usize, t: &SubmoduleBasis) -> SubmoduleBasis {
        assert_eq!(t.ambient_rank(), self.f.rank_of(open), "wrong ambient");
        kernel_basis(&self.gram[open].mul(t.generators()).transpose())
    }

    /// Twice-iterated orthogonal of a submodule of E(U), back inside E(U).
    pub fn biorthogonal(&self, open: usize, s: &SubmoduleBasis) -> SubmoduleBasis {
        self.orthogonal_in_e(open, &self.orthogonal_in_f(open, s))
    }

    /// Rank bookkeeping for the orthogonal of a submodule of E(U).
    pub fn codim_report(&self, open: usize, s: &SubmoduleBasis) -> CodimReport {
        let orth = self.orthogonal_in_f(open, s);
        let overlap = intersect(s, &self.left_kernel(open));
        CodimReport {
            ambient: self.f.rank_of(open),
            dim_input: s.dim(),
            dim_orthogonal: orth.dim(),
            dim_kernel_overlap: overlap.dim(),
        }
    }

    fn check_orthosymmetric(&self, open: usize) -> Result<()> {
        let g = &self.gram[open];
        if self.symmetric && *g == g.transpose() {
            return Ok(());
        }
        if self.skew && g.transpose() == g.neg() {
            return Ok(());
        }
        Err(Error::NotOrthosymmetric(format!(
            "radical needs a symmetric or skew pairing, gram on open {open} is neither"
        )))
    }

    /// Radical of an orthosymmetric pairing on one open: the common kernel
    /// of both insertions.
    pub fn radical(&self, open: usize) -> Result<SubmoduleBasis> {
        self.check_orthosymmetric(open)?;
        Ok(self.right_kernel(open))
    }

    /// The radical on every open at once.
    pub fn radical_family(&self) -> Result<Vec<SubmoduleBasis>> {
        (0..self.space().open_count())
            .map(|u| self.radical(u))
            .collect()
    }

    /// Radical of the pairing restricted to a submodule of a self pairing:
    /// the part of S pairing to zero against all of S, equal to the
    /// intersection of S with its orthogonal.
    pub fn radical_of(&self, open: usize, s: &SubmoduleBasis) -> Result<SubmoduleBasis> {
        self.check_orthosymmetric(open)?;
        if s.ambient_rank() != self.e.rank_of(open) {
            return Err(Error::Shape(format!(
                "submodule lives in rank {}, pairing side has rank {}",
                s.ambient_rank(),
                self.e.rank_of(open)
            )));
        }
        let d = s
            .generators()
            .transpose()
            .mul(&self.gram[open])
            .mul(s.generators());
        let inner = kernel_basis(&d);
        Ok(SubmoduleBasis::span(
            &s.generators().mul(inner.generators()),
        ))
    }

    /// Projections of E(U) = S1 + S2 and their adjoints on F(U). The
    /// decomposition must be genuine (the joint basis invertible over the
    /// ring) and the gram invertible.
    pub fn dual_projections(
        &self,
        open: usize,
        s1: &SubmoduleBasis,
        s2: &SubmoduleBasis,
    ) -> Result<DualProjections> {
        let n = self.e.rank_of(open);
        if s1.ambient_rank() != n || s2.ambient_rank() != n || s1.dim() + s2.dim() != n {
            return Err(Error::NotADecomposition(format!(
                "parts of dimension {} and {} cannot decompose rank {n}",
                s1.dim(),
                s2.dim()
            )));
        }
        let b = ExactMatrix::hstack(&[s1.generators(), s2.generators()]);
        let Some(b_inv) = snf::inverse(&b) else {
            return Err(Error::NotADecomposition(
                "joint basis is not invertible over the ring".into(),
            ));
        };
        let g = &self.gram[open];
        let Some(g_inv) = snf::inverse(g) else {
            return Err(Error::DegenerateForm(
                "dual projections need an invertible gram".into(),
            ));
        };
        let mut cut = ExactMatrix::zeros(self.ring(), n, n);
        for i in 0..s1.dim() {
            cut.set(i, i, crate::scalar::Scalar::one(self.ring()));
        }
        let pi1 = b.mul(&cut).mul(&b_inv);
        let pi2 = ExactMatrix::identity(self.ring(), n).sub(&pi1);
        // Adjoint of a projection pi on E is g_inv * pi^T * g on F; the
        // adjoint of the complementary projection lands on the orthogonal of
        // S1.
        let dual_first = g_inv.mul(&pi2.transpose()).mul(g);
        let dual_second = g_inv.mul(&pi1.transpose()).mul(g);
        Ok(DualProjections {
            source_first: pi1,
            source_second: pi2,
            dual_first,
            dual_second,
        })
    }

    /// Restriction of functionals on E(U) to a direct summand, with the
    /// composite insertion from F(U).
    pub fn dual_restriction(&self, open: usize, s1: &SubmoduleBasis) -> Result<DualRestriction> {
        if s1.ambient_rank() != self.e.rank_of(open) {
            return Err(Error::Shape(format!(
                "summand lives in rank {}, pairing side has rank {}",
                s1.ambient_rank(),
                self.e.rank_of(open)
            )));
        }
        if !s1.is_saturated() {
            return Err(Error::NotASummand(
                "functionals only restrict onto a direct summand".into(),
            ));
        }
        let to_summand = s1.generators().transpose();
        let restricted_insertion = to_summand.mul(&self.gram[open]);
        let s = snf::smith_normal_form(&to_summand);
        let surjective = s.rank() == to_summand.rows() && s.factors_all_units();
        Ok(DualRestriction {
            to_summand,
            restricted_insertion,
            surjective,
        })
    }

    /// The embedding of functionals on E(U)/S into functionals on E(U),
    /// namely the transpose of the quotient projection. Its image consists
    /// exactly of the functionals vanishing on S.
    pub fn quotient_embedding_dual(&self, open: usize, s: &SubmoduleBasis) -> Result<ExactMatrix> {
        if s.ambient_rank() != self.e.rank_of(open) {
            return Err(Error::Shape(format!(
                "submodule lives in rank {}, pairing side has rank {}",
                s.ambient_rank(),
                self.e.rank_of(open)
            )));
        }
        let pres = quotient_presentation(s)?;
        Ok(pres.proj.transpose())
    }

    /// The induced pairing on quotients by families inside the kernels.
    /// s_e[u] must pair to zero against all of F(u) and s_f[u] against all
    /// of E(u); restrictions must carry each family into the smaller open's
    /// family, which makes the induced restrictions well defined.
    pub fn quotient_pairing(
        &self,
        s_e: &[SubmoduleBasis],
        s_f: &[SubmoduleBasis],
    ) -> Result<Pairing> {
        let count = self.space().open_count();
        if s_e.len() != count || s_f.len() != count {
            return Err(Error::Invalid(format!(
                "need one submodule per open ({count}), got {} and {}",
                s_e.len(),
                s_f.len()
            )));
        }
        for u in 0..count {
            if s_e[u].ambient_rank() != self.e.rank_of(u)
                || s_f[u].ambient_rank() != self.f.rank_of(u)
            {
                return Err(Error::Shape(format!(
                    "submodule family has the wrong ambient rank on open {u}"
                )));
            }
            if !s_e[u].generators().transpose().mul(&self.gram[u]).is_zero() {
                return Err(Error::Invalid(format!(
                    "left family on open {u} does not pair to zero"
                )));
            }
            if !self.gram[u].mul(s_f[u].generators()).is_zero() {
                return Err(Error::Invalid(format!(
                    "right family on open {u} does not pair to zero"
                )));
            }
        }
        let pres_e = s_e
            .iter()
            .map(quotient_presentation)
            .collect::<Result<Vec<_>>>()?;
        let pres_f = s_f
            .iter()
            .map(quotient_presentation)
            .collect::<Result<Vec<_>>>()?;

        let build = |side: &SheafModule,
                     family: &[SubmoduleBasis],
                     pres: &[crate::submodule::QuotientPresentation]|
         -> Result<SheafModule> {
            let ranks: Vec<usize> = (0..count).map(|u| pres[u].proj.rows()).collect();
            let mut restrictions = std::collections::BTreeMap::new();
            for (u, v) in side.space().strict_nested_pairs() {
                if ranks[v] == 0 {
                    continue;
                }
                let r = side.restriction(u, v);
                if !pres[v].proj.mul(&r).mul(family[u].generators()).is_zero() {
                    return Err(Error::Invalid(format!(
                        "restriction {u}>{v} does not preserve the family"
                    )));
                }
                restrictions.insert((u, v), pres[v].proj.mul(&r).mul(&pres[u].lift));
            }
            Ok(SheafModule::from_parts(
                side.space().clone(),
                side.ring(),
                ranks,
                restrictions,
            ))
        };
        let qe = build(&self.e, s_e, &pres_e)?;
        let qf = build(&self.f, s_f, &pres_f)?;
        let gram: Vec<ExactMatrix> = (0..count)
            .map(|u| {
                pres_e[u]
                    .lift
                    .transpose()
                    .mul(&self.gram[u])
                    .mul(&pres_f[u].lift)
            })
            .collect();
        let same_family = self.e == self.f && s_e == s_f;
        Pairing::new(
            qe,
            qf,
            gram,
            self.symmetric && same_family,
            self.skew && same_family,
        )
    }

    /// Quotient of an orthosymmetric pairing by its radical on every open.
    pub fn quotient_by_radical(&self) -> Result<Pairing> {
        let rad = self.radical_family()?;
        self.quotient_pairing(&rad, &rad)
    }
}

/// Block-diagonal join of two pairings over the same space and ring.
pub fn orthogonal_sum(a: &Pairing, b: &Pairing) -> Result<Pairing> {
    let e = crate::sheaf::direct_sum(a.e(), b.e())?;
    let f = crate::sheaf::direct_sum(a.f(), b.f())?;
    let gram = (0..a.space().open_count())
        .map(|u| ExactMatrix::block_diag(a.ring(), &[a.gram(u), b.gram(u)]))
        .collect();
    Pairing::new(e, f, gram, a.symmetric && b.symmetric, a.skew && b.skew)
}
