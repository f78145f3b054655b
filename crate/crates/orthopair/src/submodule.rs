use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{Ring, Scalar};
use crate::snf::{column_hermite, smith_normal_form, Smith};

/// A finitely generated submodule of A^ambient_rank, held by an independent
/// generating set in canonical column echelon form. Equality of values is
/// therefore equality of submodules.
///
/// saturated means the submodule is a direct summand of the ambient module;
/// over the rationals every subspace is, over the integers it holds iff all
/// invariant factors of the generator matrix are units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleBasis {
    ambient_rank: usize,
    generators: ExactMatrix,
    saturated: bool,
}

impl SubmoduleBasis {
    /// Canonical basis of the span of arbitrary generating columns.
    /// Dependent columns are absorbed; over the integers the column lattice
    /// is preserved exactly.
    pub fn span(gens: &ExactMatrix) -> Self {
        let basis = column_hermite(gens);
        let saturated = match gens.ring() {
            Ring::Rational => true,
            Ring::Integer => smith_normal_form(&basis).factors_all_units(),
        };
        SubmoduleBasis {
            ambient_rank: gens.rows(),
            generators: basis,
            saturated,
        }
    }

    pub fn zero(ring: Ring, ambient_rank: usize) -> Self {
        Self::span(&ExactMatrix::zeros(ring, ambient_rank, 0))
    }

    pub fn full(ring: Ring, ambient_rank: usize) -> Self {
        Self::span(&ExactMatrix::identity(ring, ambient_rank))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.generators.cols()
    }

    pub fn generators(&self) -> &ExactMatrix {
        &self.generators
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn ring(&self) -> Ring {
        self.generators.ring()
    }

    /// Membership of a column vector, over the ring (integral membership
    /// over the integers).
    pub fn contains(&self, v: &ExactMatrix) -> bool {
        solve(&self.generators, v).is_ok()
    }

    /// Containment of submodules.
    pub fn contains_all(&self, other: &SubmoduleBasis) -> bool {
        (0..other.dim()).all(|j| self.contains(&other.generators.col(j)))
    }
}

/// Kernel of m as a map A^cols -> A^rows. Over the integers the result is
/// the full integral kernel lattice, which is always saturated.
pub fn kernel_basis(m: &ExactMatrix) -> SubmoduleBasis {
    let s = smith_normal_form(m);
    let r = s.rank();
    let free: Vec<usize> = (r..m.cols()).collect();
    SubmoduleBasis::span(&s.v.select_cols(&free))
}

/// Canonical basis of the column span (the image lattice over the integers).
pub fn image_basis(m: &ExactMatrix) -> SubmoduleBasis {
    SubmoduleBasis::span(m)
}

/// Smallest saturated submodule containing the span: divide out the
/// invariant factors.
pub fn saturate(s: &SubmoduleBasis) -> SubmoduleBasis {
    if s.is_saturated() {
        return s.clone();
    }
    let smith = smith_normal_form(s.generators());
    let r = smith.rank();
    let cols: Vec<usize> = (0..r).collect();
    SubmoduleBasis::span(&smith.u_inv.select_cols(&cols))
}

/// Intersection of two spans inside the same ambient module. Solutions of
/// a x = b y form the kernel of [a | -b]; pushing the x parts through a
/// yields exactly the common elements, including the full common lattice
/// over the integers.
pub fn intersect(a: &SubmoduleBasis, b: &SubmoduleBasis) -> SubmoduleBasis {
    assert_eq!(a.ambient_rank(), b.ambient_rank(), "ambients differ");
    let paired = ExactMatrix::hstack(&[a.generators(), &b.generators().neg()]);
    let null = kernel_basis(&paired);
    let xs: Vec<usize> = (0..a.dim()).collect();
    let x_part = null.generators().select_rows(&xs);
    SubmoduleBasis::span(&a.generators().mul(&x_part))
}

/// Solves m * x = b exactly over the ring, for a single column or a block of
/// right-hand sides. The solution with all free coordinates zero is
/// returned, so the output is deterministic.
pub fn solve(m: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    if b.rows() != m.rows() {
        return Err(Error::Shape(format!(
            "solve: {} equations, right side has {} rows",
            m.rows(),
            b.rows()
        )));
    }
    if b.ring() != m.ring() {
        return Err(Error::MixedRings("solve over two rings".into()));
    }
    let s = smith_normal_form(m);
    let r = s.rank();
    let c = s.u.mul(b);
    let mut y = ExactMatrix::zeros(m.ring(), m.cols(), b.cols());
    for t in 0..b.cols() {
        for i in 0..m.rows() {
            let ci = c.get(i, t);
            if i < r {
                match ci.div_exact(s.d.get(i, i)) {
                    Some(q) => y.set(i, t, q),
                    None => {
                        return Err(Error::NoSolution(format!(
                            "invariant factor {} does not divide the transformed right side",
                            s.d.get(i, i)
                        )))
                    }
                }
            } else if !ci.is_zero() {
                return Err(Error::NoSolution(
                    "right side leaves the column span".into(),
                ));
            }
        }
    }
    Ok(s.v.mul(&y))
}

/// A complement T with span(S) (+) span(T) = A^n, i.e. [S | T] invertible
/// over the ring. Over the integers this requires S saturated.
pub fn complement(s: &SubmoduleBasis) -> Result<SubmoduleBasis> {
    let smith = smith_normal_form(s.generators());
    if !smith.factors_all_units() {
        return Err(Error::NotASummand(format!(
            "invariant factors {:?} contain a non-unit",
            smith
                .invariant_factors()
                .iter()
                .map(Scalar::to_string)
                .collect::<Vec<_>>()
        )));
    }
    let k = s.dim();
    debug_assert_eq!(smith.rank(), k, "independent generators");
    let rest: Vec<usize> = (k..s.ambient_rank()).collect();
    Ok(SubmoduleBasis::span(&smith.u_inv.select_cols(&rest)))
}

/// Free presentation of A^n / span(S): proj maps the ambient module onto
/// coordinates of a complement, lift picks representatives.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    /// (n - k) x n, surjective with kernel span(S).
    pub proj: ExactMatrix,
    /// n x (n - k) section of proj: proj * lift = identity.
    pub lift: ExactMatrix,
}

pub fn quotient_presentation(s: &SubmoduleBasis) -> Result<QuotientPresentation> {
    let t = complement(s)?;
    let n = s.ambient_rank();
    let k = s.dim();
    let b = ExactMatrix::hstack(&[s.generators(), t.generators()]);
    let b_inv = crate::snf::inverse(&b).expect("basis completion is invertible");
    let rows: Vec<usize> = (k..n).collect();
    let proj = b_inv.select_rows(&rows);
    let lift = t.generators().clone();
    debug_assert!(proj.mul(&lift).is_identity());
    debug_assert!(proj.mul(s.generators()).is_zero());
    Ok(QuotientPresentation { proj, lift })
}

/// Given a surjection phi and any psi with the same source, produces the
/// unique theta with theta . phi = psi, when it exists.
pub fn factor_through_surjection(phi: &ExactMatrix, psi: &ExactMatrix) -> Result<ExactMatrix> {
    if phi.cols() != psi.cols() {
        return Err(Error::Shape(format!(
            "factor_through_surjection: sources have ranks {} and {}",
            phi.cols(),
            psi.cols()
        )));
    }
    let s = smith_normal_form(phi);
    if s.rank() != phi.rows() || !s.factors_all_units() {
        return Err(Error::NotSurjective(format!(
            "rank {} of {} target coordinates, factors {:?}",
            s.rank(),
            phi.rows(),
            s.invariant_factors()
                .iter()
                .map(Scalar::to_string)
                .collect::<Vec<_>>()
        )));
    }
    let right_inverse = right_inverse_from(&s, phi);
    debug_assert!(phi.mul(&right_inverse).is_identity());
    let theta = psi.mul(&right_inverse);
    if theta.mul(phi) != *psi {
        return Err(Error::NoFactorization(
            "kernel of the surjection is not killed".into(),
        ));
    }
    Ok(theta)
}

fn right_inverse_from(s: &Smith, phi: &ExactMatrix) -> ExactMatrix {
    let mut d_plus = ExactMatrix::zeros(phi.ring(), phi.cols(), phi.rows());
    for i in 0..phi.rows() {
        let w = s.d.get(i, i).inverse().expect("unit invariant factor");
        d_plus.set(i, i, w);
    }
    s.v.mul(&d_plus).mul(&s.u)
}

/// Given an injection phi and any psi into the same target with image inside
/// im(phi), produces the unique theta with phi . theta = psi.
pub fn factor_through_injection(phi: &ExactMatrix, psi: &ExactMatrix) -> Result<ExactMatrix> {
    if phi.rows() != psi.rows() {
        return Err(Error::Shape(format!(
            "factor_through_injection: targets have ranks {} and {}",
            phi.rows(),
            psi.rows()
        )));
    }
    if crate::snf::rank(phi) != phi.cols() {
        return Err(Error::NotInjective("dependent columns".into()));
    }
    solve(phi, psi).map_err(|_| Error::NoFactorization("image leaves im(phi)".into()))
}

/// rank(m) + dim ker(m) against the source rank, both sides computed from
/// scratch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub source_rank: usize,
    pub rank: usize,
    pub nullity: usize,
}

impl DimensionReport {
    pub fn holds(&self) -> bool {
        self.rank + self.nullity == self.source_rank
    }
}

pub fn dimension_formula_check(m: &ExactMatrix) -> DimensionReport {
    DimensionReport {
        source_rank: m.cols(),
        rank: crate::snf::rank(m),
        nullity: kernel_basis(m).dim(),
    }
}
