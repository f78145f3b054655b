//! Deterministic instance generators for the verification suites and the
//! fixture catalogs used by the sheaf acceptance checks. Everything is
//! driven by a seeded stream cipher so the same seed reproduces the same
//! corpus on any platform.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::ExactMatrix;
use crate::scalar::{Ring, Scalar};
use crate::sheaf::SheafModule;
use crate::submodule::{saturate, SubmoduleBasis};
use crate::topology::FiniteSpace;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for one case of a suite: same seed and case index
/// give the same stream regardless of what other cases consumed.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(case);
    r
}

/// Entries are kept small (numerators and denominators in [-9, 9]) so exact
/// arithmetic stays at desk scale.
pub fn random_scalar(rng: &mut ChaCha8Rng, ring: Ring) -> Scalar {
    match ring {
        Ring::Integer => Scalar::from_int(ring, rng.random_range(-9..=9)),
        Ring::Rational => Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=9)),
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, ring: Ring, rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, random_scalar(rng, ring));
        }
    }
    m
}

/// Skewness by antisymmetrization.
pub fn random_skew(rng: &mut ChaCha8Rng, ring: Ring, n: usize) -> ExactMatrix {
    let a = random_matrix(rng, ring, n, n);
    a.sub(&a.transpose())
}

/// Resamples until the determinant is nonzero. Only meaningful over the
/// rationals for odd sizes, since odd skew forms are always degenerate.
pub fn random_nondegenerate_skew(rng: &mut ChaCha8Rng, ring: Ring, n: usize) -> ExactMatrix {
    assert!(n.is_multiple_of(2), "odd skew forms are always degenerate");
    loop {
        let g = random_skew(rng, ring, n);
        if !g.det().is_zero() {
            return g;
        }
    }
}

/// Invertible over the ring: built from row shears and swaps so the
/// determinant is a unit even over the integers.
pub fn random_unimodular(rng: &mut ChaCha8Rng, ring: Ring, n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::identity(ring, n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        while j == i {
            j = rng.random_range(0..n);
        }
        match rng.random_range(0..3u8) {
            0 => m.swap_rows(i, j),
            1 => {
                let c = Scalar::from_int(ring, rng.random_range(-2..=2));
                m.add_row_multiple(i, j, &c);
            }
            _ => {
                let c = Scalar::from_int(ring, rng.random_range(-2..=2));
                m.add_col_multiple(i, j, &c);
            }
        }
    }
    m
}

/// Invertible gram over the given ring: any unimodular matrix works over
/// the integers; over the rationals a dense resampled matrix is used.
pub fn random_invertible(rng: &mut ChaCha8Rng, ring: Ring, n: usize) -> ExactMatrix {
    match ring {
        Ring::Integer => random_unimodular(rng, ring, n),
        Ring::Rational => loop {
            let m = random_matrix(rng, ring, n, n);
            if !m.det().is_zero() {
                return m;
            }
        },
    }
}

/// A square matrix of rank exactly r inside size n, as a product of an
/// n x r block and an r x n block of full rank.
pub fn random_matrix_of_rank(rng: &mut ChaCha8Rng, ring: Ring, n: usize, r: usize) -> ExactMatrix {
    assert!(r <= n);
    if r == 0 {
        return ExactMatrix::zeros(ring, n, n);
    }
    loop {
        let a = random_matrix(rng, ring, n, r);
        let b = random_matrix(rng, ring, r, n);
        let m = a.mul(&b);
        if crate::snf::rank(&m) == r {
            return m;
        }
    }
}

/// A saturated submodule of the requested dimension, as a canonical basis.
pub fn random_saturated(rng: &mut ChaCha8Rng, ring: Ring, n: usize, k: usize) -> SubmoduleBasis {
    assert!(k <= n);
    loop {
        let m = random_matrix(rng, ring, n, k);
        let s = saturate(&SubmoduleBasis::span(&m));
        if s.dim() == k {
            return s;
        }
    }
}

/// The block-diagonal symplectic gram with `planes` blocks [[0,1],[-1,0]].
pub fn standard_symplectic(ring: Ring, planes: usize) -> ExactMatrix {
    let blk = ExactMatrix::from_i64(ring, &[&[0, 1], &[-1, 0]]);
    let parts: Vec<&ExactMatrix> = std::iter::repeat_n(&blk, planes).collect();
    ExactMatrix::block_diag(ring, &parts)
}

/// Transvection x -> x + c * phi(x, v) * v; preserves the skew form j
/// exactly and has determinant 1.
pub fn symplectic_transvection(j: &ExactMatrix, v: &ExactMatrix, c: &Scalar) -> ExactMatrix {
    let outer = v.mul(&v.transpose().mul(&j.transpose()));
    ExactMatrix::identity(j.ring(), j.rows()).add(&outer.scale(c))
}

/// Product of random transvections: a change of basis preserving the
/// standard symplectic form, with entries kept small.
pub fn random_symplectic(rng: &mut ChaCha8Rng, ring: Ring, planes: usize) -> ExactMatrix {
    let n = 2 * planes;
    let j = standard_symplectic(ring, planes);
    let mut m = ExactMatrix::identity(ring, n);
    for _ in 0..2 * n {
        let mut v = ExactMatrix::zeros(ring, n, 1);
        let mut any = false;
        for i in 0..n {
            let e = rng.random_range(-1..=1i64);
            if e != 0 {
                any = true;
            }
            v.set(i, 0, Scalar::from_int(ring, e));
        }
        if !any {
            continue;
        }
        let c = Scalar::from_int(ring, if rng.random_range(0..2u8) == 0 { 1 } else { -1 });
        m = m.mul(&symplectic_transvection(&j, &v, &c));
    }
    m
}

/// A totally isotropic rank-k submodule of the standard symplectic module
/// with `planes` blocks: the image of span{e1, e3, ...} under a random
/// symplectic change of basis.
pub fn random_isotropic(
    rng: &mut ChaCha8Rng,
    ring: Ring,
    planes: usize,
    k: usize,
) -> SubmoduleBasis {
    assert!(k <= planes);
    let m = random_symplectic(rng, ring, planes);
    let cols: Vec<usize> = (0..k).map(|i| 2 * i).collect();
    SubmoduleBasis::span(&m.select_cols(&cols))
}

/// Named finite spaces on up to four points, covering every lattice shape
/// the sheaf checks care about: chains, discrete and indiscrete extremes,
/// particular-point and excluded-point families, a disconnected double, and
/// the four-point circle model.
pub fn topology_catalog() -> Vec<(&'static str, FiniteSpace)> {
    let gen = |points: usize, opens: &[u64]| FiniteSpace::generated(points, opens);
    vec![
        ("point", FiniteSpace::point()),
        ("indiscrete2", FiniteSpace::indiscrete(2)),
        ("sierpinski", FiniteSpace::sierpinski()),
        ("discrete2", FiniteSpace::discrete(2)),
        ("chain3", FiniteSpace::chain(3)),
        ("excluded3", gen(3, &[0b001, 0b010, 0b011])),
        ("particular3", gen(3, &[0b001, 0b011, 0b101])),
        ("discrete3", FiniteSpace::discrete(3)),
        ("chain4", FiniteSpace::chain(4)),
        ("pseudocircle", gen(4, &[0b0100, 0b1000, 0b0111, 0b1011])),
        ("twosierpinski", gen(4, &[0b0010, 0b0011, 0b1000, 0b1100])),
        ("particular4", gen(4, &[0b0001, 0b0011, 0b0101, 0b1001])),
    ]
}

/// Hand-built presheaves that each break exactly one thing, paired with the
/// name of the check expected to catch them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedDefect {
    IdentityLaw,
    CompositionLaw,
    WrongShape,
    Locality,
    Gluing,
}

pub fn broken_presheaf_catalog(ring: Ring) -> Vec<(&'static str, SheafModule, ExpectedDefect)> {
    let mut out = Vec::new();

    // Reflexive entry that is not the identity.
    let chain = FiniteSpace::chain(3);
    let mut m = SheafModule::constant(&chain, ring, 1);
    m.restrictions_mut()
        .insert((2, 2), ExactMatrix::from_i64(ring, &[&[5]]));
    out.push(("reflexive-scaling", m, ExpectedDefect::IdentityLaw));

    // Long restriction disagreeing with the two-step composite.
    let mut m = SheafModule::constant(&chain, ring, 1);
    m.restrictions_mut()
        .insert((3, 1), ExactMatrix::from_i64(ring, &[&[2]]));
    out.push(("skipping-chain", m, ExpectedDefect::CompositionLaw));

    // Restriction with the wrong shape.
    let mut m = SheafModule::constant(&chain, ring, 2);
    m.restrictions_mut()
        .insert((3, 1), ExactMatrix::from_i64(ring, &[&[1, 0]]));
    out.push(("rank-mismatch", m, ExpectedDefect::WrongShape));

    // Functorially fine, but a section of the joined open vanishes on both
    // halves of a cover: locality fails.
    let v = FiniteSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
    let a = v.open_index(0b001).unwrap();
    let b = v.open_index(0b010).unwrap();
    let joined = v.open_index(0b011).unwrap();
    let x = v.open_index(0b111).unwrap();
    let mut restrictions = BTreeMap::new();
    for t in [a, b] {
        restrictions.insert((joined, t), ExactMatrix::zeros(ring, 1, 1));
        restrictions.insert((x, t), ExactMatrix::zeros(ring, 1, 1));
    }
    restrictions.insert((x, joined), ExactMatrix::identity(ring, 1));
    let m = SheafModule::from_parts(v, ring, vec![0, 1, 1, 1, 1], restrictions);
    out.push(("vanishing-restrictions", m, ExpectedDefect::Locality));

    // The naive constant presheaf on two discrete points: compatible
    // families over the disjoint cover do not glue.
    let m = SheafModule::constant_presheaf(&FiniteSpace::discrete(2), ring, 1);
    out.push(("naive-constant", m, ExpectedDefect::Gluing));

    out
}
