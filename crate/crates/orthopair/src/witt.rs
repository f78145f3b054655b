use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::pairing::Pairing;
use crate::scalar::{Ring, Scalar};
use crate::submodule::{kernel_basis, solve, SubmoduleBasis};

/// A rank-2 piece span{r, s} with phi(r, s) = c a unit and both vectors
/// isotropic, so the restricted gram is [[0, c], [-c, 0]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicPlane {
    pub r: ExactMatrix,
    pub s: ExactMatrix,
    pub c: Scalar,
}

/// Decomposition of one open's module: pairwise orthogonal hyperbolic
/// planes through the input basis vectors, plus the orthogonal residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecomposition {
    pub planes: Vec<HyperbolicPlane>,
    pub residual: SubmoduleBasis,
}

/// Per-open decompositions, aligned with the space's open list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittResult {
    pub per_open: Vec<WittDecomposition>,
}

/// Outcome of independently rechecking a decomposition.
#[derive(Clone, Debug)]
pub struct WittCheck {
    pub violations: Vec<String>,
}

impl WittCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_skew(g: &ExactMatrix) -> bool {
    g.rows() == g.cols() && g.transpose() == g.neg()
}

/// Cofactor partner of the first basis column: s = sum over i of
/// (-1)^(1+i) det(D_1i) b_i where D is the gram restricted to the basis.
/// Then phi(b_1, s) = det D by cofactor expansion along the first row, and
/// phi(b_j, s) = 0 for j > 1 since the expansion repeats a row.
pub fn find_partner(gram: &ExactMatrix, basis: &ExactMatrix) -> Result<(ExactMatrix, Scalar)> {
    if !is_skew(gram) {
        return Err(Error::Invalid("partner search needs a skew gram".into()));
    }
    if basis.rows() != gram.rows() || basis.cols() == 0 {
        return Err(Error::Shape(format!(
            "basis is {}x{} against a gram of size {}",
            basis.rows(),
            basis.cols(),
            gram.rows()
        )));
    }
    let d = basis.transpose().mul(gram).mul(basis);
    let det = d.det();
    if !det.is_unit() {
        return Err(Error::DegenerateGram(format!(
            "restricted gram determinant {det} is not a unit"
        )));
    }
    let m = d.rows();
    let ring = gram.ring();
    let mut s = ExactMatrix::zeros(ring, basis.rows(), 1);
    for i in 0..m {
        let rows: Vec<usize> = (1..m).collect();
        let cols: Vec<usize> = (0..m).filter(|&c| c != i).collect();
        let minor = d.select_rows(&rows).select_cols(&cols);
        let mut coeff = minor.det();
        if i % 2 == 1 {
            coeff = coeff.neg();
        }
        if !coeff.is_zero() {
            s = s.add(&basis.col(i).scale(&coeff));
        }
    }
    Ok((s, det))
}

/// Splits a non-isotropic submodule off as an orthogonal direct summand:
/// ambient = span(S) + orthogonal of S, mutually orthogonal. The input is
/// echoed back with its complement.
pub fn split_nonisotropic(
    gram: &ExactMatrix,
    s: &SubmoduleBasis,
) -> Result<(SubmoduleBasis, SubmoduleBasis)> {
    if s.ambient_rank() != gram.rows() || gram.rows() != gram.cols() {
        return Err(Error::Shape(format!(
            "submodule of rank {} against a {}x{} gram",
            s.ambient_rank(),
            gram.rows(),
            gram.cols()
        )));
    }
    let d = s.generators().transpose().mul(gram).mul(s.generators());
    if kernel_basis(&d).dim() > 0 {
        return Err(Error::IsotropicInput(
            "submodule has a nonzero radical".into(),
        ));
    }
    if gram.ring() == Ring::Integer && !d.det().is_unit() {
        return Err(Error::NotASummand(format!(
            "restricted gram determinant {} is not a unit, the orthogonal cannot complement",
            d.det()
        )));
    }
    let orth = kernel_basis(&s.generators().transpose().mul(gram));
    Ok((s.clone(), orth))
}

fn orthogonal_within(
    gram: &ExactMatrix,
    against: &ExactMatrix,
    within: &ExactMatrix,
) -> ExactMatrix {
    // Vectors within the column span of `within` annihilated by pairing
    // against every column of `against`, as a canonical ambient basis.
    let functionals = against.transpose().mul(gram).mul(within);
    let kern = kernel_basis(&functionals);
    SubmoduleBasis::span(&within.mul(kern.generators()))
        .generators()
        .clone()
}

/// Theorem-style induction on one open: peel hyperbolic planes off from the
/// last input column to the first. At step i the partner for column r_i is
/// searched in the orthogonal of the earlier columns inside the current
/// complement, taking the first basis vector (in ambient coordinate order)
/// that pairs non-trivially with r_i, scaled so c = 1.
pub fn decompose_at(gram: &ExactMatrix, f: &SubmoduleBasis) -> Result<WittDecomposition> {
    if !is_skew(gram) {
        return Err(Error::Invalid(
            "hyperbolic decomposition needs a skew pairing".into(),
        ));
    }
    if f.ambient_rank() != gram.rows() {
        return Err(Error::Shape(format!(
            "submodule of rank {} against a {}x{} gram",
            f.ambient_rank(),
            gram.rows(),
            gram.cols()
        )));
    }
    if kernel_basis(gram).dim() > 0 {
        return Err(Error::DegenerateForm(
            "the pairing has a nonzero radical".into(),
        ));
    }
    let fg = f.generators();
    if !fg.transpose().mul(gram).mul(fg).is_zero() {
        return Err(Error::NotIsotropic("input is not totally isotropic".into()));
    }

    let ring = gram.ring();
    let n = gram.rows();
    let k = f.dim();
    let mut w = ExactMatrix::identity(ring, n);
    let mut planes: Vec<Option<HyperbolicPlane>> = vec![None; k];
    for i in (0..k).rev() {
        let prior: Vec<usize> = (0..i).collect();
        let g_basis = orthogonal_within(gram, &fg.select_cols(&prior), &w);
        let r_i = fg.col(i);
        let vals = r_i.transpose().mul(gram).mul(&g_basis);
        let Some(j) = (0..vals.cols()).find(|&j| !vals.get(0, j).is_zero()) else {
            return Err(Error::DegenerateForm(format!(
                "no partner pairs with input column {i}"
            )));
        };
        let v = vals.get(0, j).clone();
        let Some(v_inv) = v.inverse() else {
            return Err(Error::NoUnitPartner(format!(
                "first available partner for input column {i} pairs to {v}, not a unit"
            )));
        };
        let s_i = g_basis.col(j).scale(&v_inv);
        let pair = ExactMatrix::hstack(&[&r_i, &s_i]);
        w = orthogonal_within(gram, &pair, &w);
        planes[i] = Some(HyperbolicPlane {
            r: r_i,
            s: s_i,
            c: Scalar::one(ring),
        });
    }
    let residual = SubmoduleBasis::span(&w);
    if 2 * k + residual.dim() != n {
        return Err(Error::DegenerateForm(format!(
            "planes and residual account for {} of rank {n}",
            2 * k + residual.dim()
        )));
    }
    Ok(WittDecomposition {
        planes: planes.into_iter().map(|p| p.unwrap()).collect(),
        residual,
    })
}

/// Runs the decomposition on every open of a skew self pairing over a
/// connected space. The isotropic input gives one submodule per open.
pub fn hyperbolic_decomposition(p: &Pairing, f: &[SubmoduleBasis]) -> Result<WittResult> {
    if p.e() != p.f() {
        return Err(Error::Invalid(
            "hyperbolic decomposition needs a self pairing".into(),
        ));
    }
    if !p.space().is_connected() {
        return Err(Error::Invalid(
            "hyperbolic decomposition needs a connected space".into(),
        ));
    }
    if f.len() != p.space().open_count() {
        return Err(Error::Invalid(format!(
            "need one submodule per open ({}), got {}",
            p.space().open_count(),
            f.len()
        )));
    }
    let per_open = (0..p.space().open_count())
        .map(|u| decompose_at(p.gram(u), &f[u]))
        .collect::<Result<Vec<_>>>()?;
    Ok(WittResult { per_open })
}

fn check_open(
    gram: &ExactMatrix,
    f: &SubmoduleBasis,
    w: &WittDecomposition,
    open: usize,
    violations: &mut Vec<String>,
) {
    let ring = gram.ring();
    let n = gram.rows();
    let k = w.planes.len();
    let mut complain = |msg: String| violations.push(format!("open {open}: {msg}"));

    if f.dim() != k {
        complain(format!("{} planes for an input of rank {}", k, f.dim()));
    }
    if 2 * k + w.residual.dim() != n {
        complain(format!(
            "ranks do not account for the ambient: 2*{k} + {} != {n}",
            w.residual.dim()
        ));
    }
    let value = |a: &ExactMatrix, b: &ExactMatrix| a.transpose().mul(gram).mul(b).get(0, 0).clone();
    for (i, pl) in w.planes.iter().enumerate() {
        if !pl.c.is_unit() {
            complain(format!("plane {i} has non-unit value {}", pl.c));
        }
        if !value(&pl.r, &pl.r).is_zero() || !value(&pl.s, &pl.s).is_zero() {
            complain(format!("plane {i} has a non-isotropic basis vector"));
        }
        if value(&pl.r, &pl.s) != pl.c {
            complain(format!("plane {i} does not pair to its stated value"));
        }
        for (j, other) in w.planes.iter().enumerate().skip(i + 1) {
            let cross = [
                value(&pl.r, &other.r),
                value(&pl.r, &other.s),
                value(&pl.s, &other.r),
                value(&pl.s, &other.s),
            ];
            if cross.iter().any(|x| !x.is_zero()) {
                complain(format!("planes {i} and {j} are not orthogonal"));
            }
        }
        let span = ExactMatrix::hstack(&[&pl.r, &pl.s]);
        let against = w.residual.generators().transpose().mul(gram).mul(&span);
        if !against.is_zero() {
            complain(format!("plane {i} is not orthogonal to the residual"));
        }
    }
    // Every input basis vector must lie in some plane, each plane taken
    // once; decompositions that permute the planes still pass.
    let mut taken = vec![false; k];
    for c in 0..f.dim() {
        let target = f.generators().col(c);
        let found = (0..k).find(|&i| {
            !taken[i]
                && solve(
                    &ExactMatrix::hstack(&[&w.planes[i].r, &w.planes[i].s]),
                    &target,
                )
                .is_ok()
        });
        match found {
            Some(i) => taken[i] = true,
            None => complain(format!("input column {c} lies in no unused plane")),
        }
    }
    // Exact congruence: the assembled basis has unit determinant and
    // produces the block gram of the planes and the residual.
    let mut cols: Vec<ExactMatrix> = Vec::new();
    for pl in &w.planes {
        cols.push(pl.r.clone());
        cols.push(pl.s.clone());
    }
    cols.push(w.residual.generators().clone());
    let b = ExactMatrix::hstack(&cols.iter().collect::<Vec<_>>());
    if b.rows() != b.cols() {
        return;
    }
    if !b.is_unimodular() {
        complain("assembled basis is not invertible over the ring".into());
        return;
    }
    let mut blocks: Vec<ExactMatrix> = Vec::new();
    for pl in &w.planes {
        let mut blk = ExactMatrix::zeros(ring, 2, 2);
        blk.set(0, 1, pl.c.clone());
        blk.set(1, 0, pl.c.neg());
        blocks.push(blk);
    }
    let rg = w.residual.generators();
    blocks.push(rg.transpose().mul(gram).mul(rg));
    let want = ExactMatrix::block_diag(ring, &blocks.iter().collect::<Vec<_>>());
    if b.transpose().mul(gram).mul(&b) != want {
        complain("assembled basis does not produce the block gram".into());
    }
}

/// Rechecks a decomposition from scratch against the pairing and the input,
/// open by open: plane grams, pairwise and residual orthogonality, input
/// membership up to plane order, rank accounting, and exact congruence of
/// the assembled change of basis.
pub fn verify_witt(p: &Pairing, f: &[SubmoduleBasis], w: &WittResult) -> WittCheck {
    let mut violations = Vec::new();
    if w.per_open.len() != p.space().open_count() || f.len() != p.space().open_count() {
        violations.push(format!(
            "decomposition covers {} opens and the input {}, the space has {}",
            w.per_open.len(),
            f.len(),
            p.space().open_count()
        ));
        return WittCheck { violations };
    }
    for (u, (fu, wu)) in f.iter().zip(&w.per_open).enumerate() {
        check_open(p.gram(u), fu, wu, u, &mut violations);
    }
    WittCheck { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_symplectic(ring: Ring, planes: usize) -> ExactMatrix {
        let blk = ExactMatrix::from_i64(ring, &[&[0, 1], &[-1, 0]]);
        let parts: Vec<&ExactMatrix> = std::iter::repeat_n(&blk, planes).collect();
        ExactMatrix::block_diag(ring, &parts)
    }

    fn e(ring: Ring, n: usize, i: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(ring, n, 1);
        m.set(i, 0, Scalar::one(ring));
        m
    }

    #[test]
    fn cofactor_partner_on_the_standard_form() {
        let j = standard_symplectic(Ring::Rational, 2);
        let basis = ExactMatrix::identity(Ring::Rational, 4);
        let (s, c) = find_partner(&j, &basis).unwrap();
        assert_eq!(s, e(Ring::Rational, 4, 1));
        assert!(c.is_one());

        let j2 = standard_symplectic(Ring::Rational, 1);
        let (s, c) = find_partner(&j2, &ExactMatrix::identity(Ring::Rational, 2)).unwrap();
        assert_eq!(s, e(Ring::Rational, 2, 1));
        assert!(c.is_one());
    }

    #[test]
    fn cofactor_partner_pairs_to_the_determinant() {
        // A denser unimodular skew gram: value against the partner is det D
        // exactly and all later basis vectors pair to zero.
        let g = ExactMatrix::from_i64(
            Ring::Rational,
            &[
                &[0, 2, -1, 3],
                &[-2, 0, 4, -1],
                &[1, -4, 0, 2],
                &[-3, 1, -2, 0],
            ],
        );
        let basis = ExactMatrix::identity(Ring::Rational, 4);
        let (s, c) = find_partner(&g, &basis).unwrap();
        assert_eq!(
            e(Ring::Rational, 4, 0)
                .transpose()
                .mul(&g)
                .mul(&s)
                .get(0, 0),
            &c
        );
        for i in 1..4 {
            assert!(e(Ring::Rational, 4, i)
                .transpose()
                .mul(&g)
                .mul(&s)
                .get(0, 0)
                .is_zero());
        }
        assert_eq!(&c, &g.det());
    }

    #[test]
    fn degenerate_gram_has_no_partner() {
        let z = ExactMatrix::zeros(Ring::Rational, 2, 2);
        assert!(matches!(
            find_partner(&z, &ExactMatrix::identity(Ring::Rational, 2)),
            Err(Error::DegenerateGram(_))
        ));
    }

    #[test]
    fn splitting_a_nonisotropic_plane() {
        let j = standard_symplectic(Ring::Rational, 2);
        let s12 = SubmoduleBasis::span(&ExactMatrix::from_i64(
            Ring::Rational,
            &[&[1, 0], &[0, 1], &[0, 0], &[0, 0]],
        ));
        let (_, orth) = split_nonisotropic(&j, &s12).unwrap();
        assert_eq!(
            orth.generators(),
            &ExactMatrix::from_i64(Ring::Rational, &[&[0, 0], &[0, 0], &[1, 0], &[0, 1]])
        );
        let all = SubmoduleBasis::full(Ring::Rational, 4);
        let (_, zero) = split_nonisotropic(&j, &all).unwrap();
        assert_eq!(zero.dim(), 0);
        let line = SubmoduleBasis::span(&e(Ring::Rational, 4, 0));
        assert!(matches!(
            split_nonisotropic(&j, &line),
            Err(Error::IsotropicInput(_))
        ));
    }

    #[test]
    fn integer_splitting_needs_a_unit_determinant() {
        let j = standard_symplectic(Ring::Integer, 1);
        let thick =
            SubmoduleBasis::span(&ExactMatrix::from_i64(Ring::Integer, &[&[1, 0], &[0, 2]]));
        assert!(matches!(
            split_nonisotropic(&j, &thick),
            Err(Error::NotASummand(_))
        ));
    }

    #[test]
    fn lagrangian_of_the_standard_form() {
        let j = standard_symplectic(Ring::Rational, 2);
        let f = SubmoduleBasis::span(&ExactMatrix::from_i64(
            Ring::Rational,
            &[&[1, 0], &[0, 0], &[0, 1], &[0, 0]],
        ));
        let w = decompose_at(&j, &f).unwrap();
        assert_eq!(w.planes.len(), 2);
        assert_eq!(w.residual.dim(), 0);
        assert_eq!(w.planes[0].r, e(Ring::Rational, 4, 0));
        assert_eq!(w.planes[0].s, e(Ring::Rational, 4, 1));
        assert_eq!(w.planes[1].r, e(Ring::Rational, 4, 2));
        assert_eq!(w.planes[1].s, e(Ring::Rational, 4, 3));
        assert!(w.planes.iter().all(|p| p.c.is_one()));
    }

    #[test]
    fn single_line_and_empty_inputs() {
        let j = standard_symplectic(Ring::Rational, 1);
        let f = SubmoduleBasis::span(&e(Ring::Rational, 2, 0));
        let w = decompose_at(&j, &f).unwrap();
        assert_eq!(w.planes.len(), 1);
        assert_eq!(w.planes[0].s, e(Ring::Rational, 2, 1));

        let none = SubmoduleBasis::zero(Ring::Rational, 2);
        let w = decompose_at(&j, &none).unwrap();
        assert!(w.planes.is_empty());
        assert_eq!(w.residual.dim(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let j = standard_symplectic(Ring::Rational, 2);
        let not_iso = SubmoduleBasis::span(&ExactMatrix::from_i64(
            Ring::Rational,
            &[&[1, 0], &[0, 1], &[0, 0], &[0, 0]],
        ));
        assert!(matches!(
            decompose_at(&j, &not_iso),
            Err(Error::NotIsotropic(_))
        ));
        let degenerate = ExactMatrix::zeros(Ring::Rational, 2, 2);
        assert!(matches!(
            decompose_at(&degenerate, &SubmoduleBasis::zero(Ring::Rational, 2)),
            Err(Error::DegenerateForm(_))
        ));
        let sym = ExactMatrix::identity(Ring::Rational, 2);
        assert!(matches!(
            decompose_at(&sym, &SubmoduleBasis::zero(Ring::Rational, 2)),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn integer_forms_can_lack_unit_partners() {
        let g = ExactMatrix::from_i64(Ring::Integer, &[&[0, 2], &[-2, 0]]);
        let f = SubmoduleBasis::span(&e(Ring::Integer, 2, 0));
        assert!(matches!(decompose_at(&g, &f), Err(Error::NoUnitPartner(_))));
        // The same shape over the rationals normalizes the partner instead.
        let g = ExactMatrix::from_i64(Ring::Rational, &[&[0, 2], &[-2, 0]]);
        let f = SubmoduleBasis::span(&e(Ring::Rational, 2, 0));
        let w = decompose_at(&g, &f).unwrap();
        assert!(w.planes[0].c.is_one());
        assert_eq!(
            w.planes[0].s,
            e(Ring::Rational, 2, 1).scale(&Scalar::ratio(1, 2))
        );
    }

    #[test]
    fn verification_catches_tampering() {
        let space = crate::topology::FiniteSpace::point();
        let x = space.open_index(1).unwrap();
        let mut ranks = vec![0; space.open_count()];
        ranks[x] = 4;
        let sheaf = crate::sheaf::SheafModule::from_parts(
            space.clone(),
            Ring::Rational,
            ranks,
            Default::default(),
        );
        let mut gram = vec![ExactMatrix::zeros(Ring::Rational, 0, 0); space.open_count()];
        gram[x] = standard_symplectic(Ring::Rational, 2);
        let p = Pairing::new(sheaf.clone(), sheaf, gram, false, true).unwrap();

        let mut f: Vec<SubmoduleBasis> = (0..space.open_count())
            .map(|u| SubmoduleBasis::zero(Ring::Rational, p.e().rank_of(u)))
            .collect();
        f[x] = SubmoduleBasis::span(&ExactMatrix::from_i64(
            Ring::Rational,
            &[&[1, 0], &[0, 0], &[0, 1], &[0, 0]],
        ));
        let w = hyperbolic_decomposition(&p, &f).unwrap();
        assert!(verify_witt(&p, &f, &w).holds());

        // Swapping whole planes still verifies.
        let mut swapped = w.clone();
        swapped.per_open[x].planes.reverse();
        assert!(verify_witt(&p, &f, &swapped).holds());

        // Replacing a partner with the vector itself does not.
        let mut broken = w.clone();
        broken.per_open[x].planes[0].s = broken.per_open[x].planes[0].r.clone();
        let check = verify_witt(&p, &f, &broken);
        assert!(!check.holds());
        assert!(!check.violations.is_empty());
    }
}
