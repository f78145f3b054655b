//! Randomized verification suites. Each suite draws instances from a
//! seeded generator, checks one family of identities, and packages every
//! failing case as a standalone workspace whose embedded reproducer
//! re-runs the exact computation. Cross-checks use plain row reduction
//! and gcds of minors, deliberately avoiding the normal form machinery
//! they are auditing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{Repro, SubmoduleFamily, Workspace};
use crate::matrix::ExactMatrix;
use crate::pairing::Pairing;
use crate::sample::{
    broken_presheaf_catalog, case_rng, random_invertible, random_isotropic, random_matrix,
    random_matrix_of_rank, random_nondegenerate_skew, random_saturated, random_unimodular,
    standard_symplectic, topology_catalog, ExpectedDefect,
};
use crate::scalar::{Ring, Scalar};
use crate::sheaf::{covers_of, SheafModule};
use crate::snf::smith_normal_form;
use crate::submodule::{kernel_basis, SubmoduleBasis};
use crate::topology::FiniteSpace;
use crate::witt::{find_partner, hyperbolic_decomposition, verify_witt};

pub const SUITE_NAMES: &[&str] = &[
    "biorthogonality",
    "codim",
    "dimension",
    "insertion",
    "dualdecomp",
    "quotientnondeg",
    "witt",
    "partner",
    "snf",
    "sheaf",
];

pub fn default_cases(suite: &str) -> u64 {
    match suite {
        "dualdecomp" | "quotientnondeg" | "witt" | "partner" => 200,
        _ => 500,
    }
}

pub fn default_max_rank(suite: &str) -> usize {
    match suite {
        "partner" => 8,
        "witt" => 10,
        _ => 6,
    }
}

pub fn default_ring(suite: &str) -> Ring {
    match suite {
        "snf" => Ring::Integer,
        _ => Ring::Rational,
    }
}

#[derive(Clone, Debug)]
pub struct SuiteFailure {
    pub case: u64,
    pub message: String,
    pub reproducer: Workspace,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: String,
    pub ring: Ring,
    pub cases_run: u64,
    pub failures: Vec<SuiteFailure>,
    pub vacuous: bool,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

// ---------------------------------------------------------------------
// Independent oracles.

fn to_rationals(m: &ExactMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| match m.get(i, j) {
                    Scalar::Int(b) => BigRational::from_integer(b.clone()),
                    Scalar::Rat(r) => r.clone(),
                })
                .collect()
        })
        .collect()
}

/// Rank by plain fraction-field row reduction.
pub fn gauss_rank(m: &ExactMatrix) -> usize {
    let mut a = to_rationals(m);
    let rows = m.rows();
    let cols = m.cols();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for i in 0..rows {
            if i != rank && !a[i][col].is_zero() {
                let factor = &a[i][col] / &a[rank][col];
                let (pivot_row, target) = if rank < i {
                    let (head, tail) = a.split_at_mut(i);
                    (&head[rank], &mut tail[0])
                } else {
                    let (head, tail) = a.split_at_mut(rank);
                    (&tail[0], &mut head[i])
                };
                for (t, p) in target[col..].iter_mut().zip(&pivot_row[col..]) {
                    *t = &*t - &factor * p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Determinant by row reduction with swap tracking.
pub fn gauss_det(m: &ExactMatrix) -> BigRational {
    assert_eq!(m.rows(), m.cols(), "determinant of a square matrix");
    let n = m.rows();
    let mut a = to_rationals(m);
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col];
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let factor = &a[i][col] / &a[col][col];
                let (head, tail) = a.split_at_mut(i);
                let pivot_row = &head[col];
                for (t, p) in tail[0][col..].iter_mut().zip(&pivot_row[col..]) {
                    *t = &*t - &factor * p;
                }
            }
        }
    }
    det
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

fn int_minor(entries: &[Vec<BigInt>], rows: &[usize], cols: &[usize]) -> BigInt {
    if rows.len() == 1 {
        return entries[rows[0]][cols[0]].clone();
    }
    let mut det = BigInt::zero();
    let sub_rows = &rows[1..];
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &entries[rows[0]][c] * int_minor(entries, sub_rows, &rest);
        if pos % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Invariant factors of an integer matrix from gcds of k x k minors:
/// the k-th determinantal divisor divided by the (k-1)-st.
pub fn minor_invariant_factors(m: &ExactMatrix) -> Vec<BigInt> {
    assert_eq!(m.ring(), Ring::Integer, "minor oracle works over ZZ");
    let entries: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| match m.get(i, j) {
                    Scalar::Int(b) => b.clone(),
                    Scalar::Rat(_) => unreachable!("integer matrix"),
                })
                .collect()
        })
        .collect();
    let limit = m.rows().min(m.cols());
    let mut previous = BigInt::one();
    let mut factors = Vec::new();
    for k in 1..=limit {
        let mut divisor = BigInt::zero();
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                divisor = divisor.gcd(&int_minor(&entries, &rows, &cols));
            }
        }
        if divisor.is_zero() {
            break;
        }
        factors.push(&divisor / &previous);
        previous = divisor;
    }
    factors
}

// ---------------------------------------------------------------------
// Workspace assembly for reproducers.

fn args_of(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn free_point_sheaf(ring: Ring, n: usize) -> SheafModule {
    SheafModule::from_parts(FiniteSpace::point(), ring, vec![0, n], BTreeMap::new())
}

fn point_pairing(ring: Ring, gram: ExactMatrix, symmetric: bool, skew: bool) -> Pairing {
    let e = free_point_sheaf(ring, gram.rows());
    let f = free_point_sheaf(ring, gram.cols());
    Pairing::new(
        e,
        f,
        vec![ExactMatrix::zeros(ring, 0, 0), gram],
        symmetric,
        skew,
    )
    .expect("a point pairing is structurally sound")
}

fn point_family(sheaf: &str, ring: Ring, s: &SubmoduleBasis) -> SubmoduleFamily {
    SubmoduleFamily {
        sheaf: sheaf.to_string(),
        at: vec![SubmoduleBasis::zero(ring, 0), s.clone()],
    }
}

struct WsParts<'a> {
    ring: Ring,
    pairing: Option<&'a Pairing>,
    sheaves: Vec<(&'a str, SheafModule)>,
    submodules: Vec<(&'a str, SubmoduleFamily)>,
    matrices: Vec<(&'a str, ExactMatrix)>,
}

fn assemble(parts: WsParts, op: &str, args: BTreeMap<String, String>, expect: Value) -> Workspace {
    let space = parts
        .sheaves
        .first()
        .map(|(_, s)| s.space().clone())
        .unwrap_or_else(FiniteSpace::point);
    Workspace {
        ring: parts.ring,
        space,
        sheaves: parts
            .sheaves
            .into_iter()
            .map(|(n, s)| (n.to_string(), s))
            .collect(),
        pairings: parts
            .pairing
            .map(|p| vec![("P".to_string(), p.clone())])
            .unwrap_or_default(),
        submodules: parts
            .submodules
            .into_iter()
            .map(|(n, s)| (n.to_string(), s))
            .collect(),
        matrices: parts
            .matrices
            .into_iter()
            .map(|(n, m)| (n.to_string(), m))
            .collect(),
        seed: None,
        repro: Some(Repro {
            op: op.to_string(),
            args,
            expect,
        }),
    }
}

/// Workspace around one pairing on the point space, with optional
/// submodule families (side: true = E, false = F) and named matrices.
fn pairing_ws(
    p: &Pairing,
    subs: &[(&str, &SubmoduleBasis, bool)],
    matrices: &[(&str, &ExactMatrix)],
    op: &str,
    args: BTreeMap<String, String>,
    expect: Value,
) -> Workspace {
    let ring = p.ring();
    let mut sheaves = vec![("E", p.e().clone())];
    let rectangular = p.e() != p.f();
    if rectangular {
        sheaves.push(("F", p.f().clone()));
    }
    let submodules = subs
        .iter()
        .map(|(name, s, e_side)| {
            let sheaf = if *e_side || !rectangular { "E" } else { "F" };
            (*name, point_family(sheaf, ring, s))
        })
        .collect();
    let matrices = matrices.iter().map(|(n, m)| (*n, (*m).clone())).collect();
    assemble(
        WsParts {
            ring,
            pairing: Some(p),
            sheaves,
            submodules,
            matrices,
        },
        op,
        args,
        expect,
    )
}

fn matrix_ws(ring: Ring, m: &ExactMatrix, op: &str, expect: Value) -> Workspace {
    assemble(
        WsParts {
            ring,
            pairing: None,
            sheaves: Vec::new(),
            submodules: Vec::new(),
            matrices: vec![("M", m.clone())],
        },
        op,
        args_of(&[("matrix", "M")]),
        expect,
    )
}

/// The nonempty open of the one-point space, as it appears in output keys.
const POINT_OPEN: &str = "1";

// ---------------------------------------------------------------------
// The suites.

fn suite_biorthogonality(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let n = rng.random_range(1..=max_rank);
        let k = rng.random_range(0..=n);
        let s = random_saturated(&mut rng, ring, n, k);
        let p = Pairing::canonical(&free_point_sheaf(ring, n)).expect("free sheaf");
        let orth = p.orthogonal_in_f(1, &s);
        let back = p.orthogonal_in_e(1, &orth);
        if back != s {
            failures.push(SuiteFailure {
                case,
                message: format!(
                    "case {case}: double orthogonal of a {k}-dim saturated submodule of rank {n} changed the span"
                ),
                reproducer: pairing_ws(
                    &p,
                    &[("S", &s, true)],
                    &[],
                    "biortho",
                    args_of(&[("pairing", "P"), ("sub", "S")]),
                    json!({POINT_OPEN: {
                        "biorthogonal": crate::io::matrix_to_json(s.generators()),
                        "equals_input": true,
                    }}),
                ),
            });
        }
    }
    failures
}

fn suite_codim(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let n = rng.random_range(1..=max_rank);
        let k = rng.random_range(0..=n);
        let s = random_saturated(&mut rng, ring, n, k);
        let p = Pairing::canonical(&free_point_sheaf(ring, n)).expect("free sheaf");
        let report = p.codim_report(1, &s);
        let numbers_ok = report.holds()
            && report.dim_input == k
            && report.dim_orthogonal == n - k
            && report.dim_kernel_overlap == 0;
        if !numbers_ok {
            failures.push(SuiteFailure {
                case,
                message: format!(
                    "case {case}: rank-{k} submodule of rank {n} reported dims ({}, {}, {}, {})",
                    report.ambient,
                    report.dim_input,
                    report.dim_orthogonal,
                    report.dim_kernel_overlap
                ),
                reproducer: pairing_ws(
                    &p,
                    &[("S", &s, true)],
                    &[],
                    "codim",
                    args_of(&[("pairing", "P"), ("sub", "S")]),
                    json!({POINT_OPEN: {
                        "dim": k,
                        "codim": n - k,
                        "orthogonal_dim": n - k,
                        "orthogonal_codim": k,
                        "holds": true,
                    }}),
                ),
            });
            continue;
        }
        // The dual side: a submodule of F must be recovered from its
        // orthogonal in E.
        let kt = rng.random_range(0..=n);
        let t = random_saturated(&mut rng, ring, n, kt);
        let up = p.orthogonal_in_e(1, &t);
        let back = p.orthogonal_in_f(1, &up);
        if back != t {
            failures.push(SuiteFailure {
                case,
                message: format!(
                    "case {case}: dual-side double orthogonal of a {kt}-dim submodule of rank {n} changed the span"
                ),
                reproducer: pairing_ws(
                    &p,
                    &[("T", &t, false)],
                    &[],
                    "biortho",
                    args_of(&[("pairing", "P"), ("sub", "T"), ("side", "right")]),
                    json!({POINT_OPEN: {
                        "biorthogonal": crate::io::matrix_to_json(t.generators()),
                        "equals_input": true,
                    }}),
                ),
            });
        }
    }
    failures
}

fn suite_dimension(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let rows = rng.random_range(1..=max_rank);
        let cols = rng.random_range(1..=max_rank);
        let m = random_matrix(&mut rng, ring, rows, cols);
        let rank = smith_normal_form(&m).rank();
        let kernel = kernel_basis(&m).dim();
        let oracle = gauss_rank(&m);
        if rank != oracle || rank + kernel != cols {
            failures.push(SuiteFailure {
                case,
                message: format!(
                    "case {case}: {rows}x{cols} matrix has normal form rank {rank}, kernel {kernel}, row reduction says {oracle}"
                ),
                reproducer: matrix_ws(
                    ring,
                    &m,
                    "dimension",
                    json!({
                        "rank": oracle,
                        "kernel_dim": cols - oracle,
                        "cols": cols,
                        "holds": true,
                    }),
                ),
            });
        }
    }
    failures
}

fn suite_insertion(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let n_e = rng.random_range(1..=max_rank);
        let n_f = rng.random_range(1..=max_rank);
        let g = random_matrix(&mut rng, ring, n_e, n_f);
        let oracle = gauss_rank(&g);
        let p = point_pairing(ring, g, false, false);
        let left = smith_normal_form(&p.insertion_left(1)).rank();
        let right = smith_normal_form(&p.insertion_right(1)).rank();
        let quotient = (|| -> Result<usize> {
            let s_e = vec![p.left_kernel(0), p.left_kernel(1)];
            let s_f = vec![p.right_kernel(0), p.right_kernel(1)];
            Ok(p.quotient_pairing(&s_e, &s_f)?.pairing_rank(1))
        })();
        let ok = matches!(quotient, Ok(q) if left == oracle && right == oracle && q == oracle);
        if !ok {
            failures.push(SuiteFailure {
                case,
                message: format!(
                    "case {case}: insertion ranks {left}/{right}, quotient {quotient:?}, row reduction says {oracle} on a {n_e}x{n_f} gram"
                ),
                reproducer: pairing_ws(
                    &p,
                    &[],
                    &[],
                    "insertionrank",
                    args_of(&[("pairing", "P")]),
                    json!({POINT_OPEN: {
                        "left_rank": oracle,
                        "right_rank": oracle,
                        "quotient_rank": oracle,
                        "equal": true,
                    }}),
                ),
            });
        }
    }
    failures
}

fn suite_dualdecomp(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let n = rng.random_range(1..=max_rank);
        let k = rng.random_range(0..=n);
        // Over the integers only a unimodular change of basis yields a
        // genuine direct sum decomposition.
        let b = match ring {
            Ring::Rational => random_invertible(&mut rng, ring, n),
            Ring::Integer => random_unimodular(&mut rng, ring, n),
        };
        let s1 = SubmoduleBasis::span(&b.select_cols(&(0..k).collect::<Vec<_>>()));
        let s2 = SubmoduleBasis::span(&b.select_cols(&(k..n).collect::<Vec<_>>()));
        let p = Pairing::canonical(&free_point_sheaf(ring, n)).expect("free sheaf");
        let fail = |msg: String| SuiteFailure {
            case,
            message: msg,
            reproducer: pairing_ws(
                &p,
                &[("A", &s1, true), ("B", &s2, true)],
                &[],
                "dualproj",
                args_of(&[("pairing", "P"), ("s1", "A"), ("s2", "B")]),
                json!({POINT_OPEN: {
                    "idempotent": true,
                    "sum_identity": true,
                    "images_match": true,
                }}),
            ),
        };
        match p.dual_projections(1, &s1, &s2) {
            Err(e) => failures.push(fail(format!(
                "case {case}: projections for a {k}+{} split of rank {n} failed: {e}",
                n - k
            ))),
            Ok(dp) => {
                let id = ExactMatrix::identity(ring, n);
                let idem = [
                    &dp.source_first,
                    &dp.source_second,
                    &dp.dual_first,
                    &dp.dual_second,
                ]
                .iter()
                .all(|m| m.mul(m) == **m);
                let sums = dp.source_first.add(&dp.source_second) == id
                    && dp.dual_first.add(&dp.dual_second) == id;
                let images = crate::submodule::image_basis(&dp.dual_first)
                    == p.orthogonal_in_f(1, &s1)
                    && crate::submodule::image_basis(&dp.dual_second) == p.orthogonal_in_f(1, &s2);
                if !(idem && sums && images) {
                    failures.push(fail(format!(
                        "case {case}: dual projections of a {k}+{} split of rank {n} broke idempotent={idem} sums={sums} images={images}",
                        n - k
                    )));
                }
            }
        }
    }
    failures
}

fn suite_quotientnondeg(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let n = rng.random_range(1..=max_rank);
        let r = rng.random_range(0..n);
        let g = random_matrix_of_rank(&mut rng, ring, n, r);
        let p = point_pairing(ring, g.clone(), false, false);
        let fail = |msg: String| SuiteFailure {
            case,
            message: msg,
            reproducer: pairing_ws(
                &p,
                &[],
                &[],
                "quotient",
                args_of(&[("pairing", "P")]),
                json!({POINT_OPEN: {"rank": r, "nondegenerate": true}}),
            ),
        };
        let s_e = vec![p.left_kernel(0), p.left_kernel(1)];
        let s_f = vec![p.right_kernel(0), p.right_kernel(1)];
        match p.quotient_pairing(&s_e, &s_f) {
            Err(e) => failures.push(fail(format!(
                "case {case}: quotient of a rank-{r} degenerate gram on rank {n} failed: {e}"
            ))),
            Ok(q) => {
                let oracle = gauss_rank(&g);
                let ok = q.is_nondegenerate(1)
                    && q.pairing_rank(1) == oracle
                    && p.pairing_rank(1) == oracle
                    && oracle == r;
                if !ok {
                    failures.push(fail(format!(
                        "case {case}: quotient rank {} of a rank-{r} gram on rank {n}, nondegenerate={}, row reduction says {oracle}",
                        q.pairing_rank(1),
                        q.is_nondegenerate(1)
                    )));
                }
            }
        }
    }
    failures
}

fn suite_witt(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let planes = rng.random_range(1..=(max_rank / 2).max(1));
        let k = rng.random_range(1..=planes);
        let j = standard_symplectic(ring, planes);
        let f = random_isotropic(&mut rng, ring, planes, k);
        let p = point_pairing(ring, j, false, true);
        let family = vec![SubmoduleBasis::zero(ring, 0), f.clone()];
        let fail = |msg: String| SuiteFailure {
            case,
            message: msg,
            reproducer: pairing_ws(
                &p,
                &[("F", &f, true)],
                &[],
                "witt",
                args_of(&[("pairing", "P"), ("iso", "F")]),
                json!({
                    "plane_count": k,
                    "residual_rank": 2 * planes - 2 * k,
                    "verified": true,
                }),
            ),
        };
        match hyperbolic_decomposition(&p, &family) {
            Err(e) => failures.push(fail(format!(
                "case {case}: decomposition of a rank-{k} isotropic in the standard {planes}-plane form failed: {e}"
            ))),
            Ok(w) => {
                let check = verify_witt(&p, &family, &w);
                let d = &w.per_open[1];
                let ok = check.holds()
                    && d.planes.len() == k
                    && d.residual.dim() == 2 * planes - 2 * k;
                if !ok {
                    failures.push(fail(format!(
                        "case {case}: got {} planes, residual {}, verification: {:?}",
                        d.planes.len(),
                        d.residual.dim(),
                        check.violations
                    )));
                }
            }
        }
    }
    failures
}

fn suite_partner(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let n = 2 * rng.random_range(1..=(max_rank / 2).max(1));
        let g = random_nondegenerate_skew(&mut rng, ring, n);
        let b = random_invertible(&mut rng, ring, n);
        let p = point_pairing(ring, g.clone(), false, true);
        let restricted = b.transpose().mul(&g).mul(&b);
        let det = gauss_det(&restricted);
        let det = Scalar::Rat(det);
        let fail = |msg: String| SuiteFailure {
            case,
            message: msg,
            reproducer: pairing_ws(
                &p,
                &[],
                &[("B", &b)],
                "partner",
                args_of(&[("pairing", "P"), ("basis", "B")]),
                json!({
                    "c": det.to_string(),
                    "pairing_value": det.to_string(),
                    "nonzero": true,
                }),
            ),
        };
        match find_partner(&g, &b) {
            Err(e) => failures.push(fail(format!(
                "case {case}: no partner in a nondegenerate skew {n}x{n} form: {e}"
            ))),
            Ok((s, c)) => {
                let value = b.col(0).transpose().mul(&g).mul(&s);
                let value = value.get(0, 0).clone();
                let ok = !c.is_zero() && value == c && c.to_string() == det.to_string();
                if !ok {
                    failures.push(fail(format!(
                        "case {case}: partner pairs to {value}, c = {c}, row reduction determinant {det}"
                    )));
                }
            }
        }
    }
    failures
}

fn suite_snf(ring: Ring, cases: u64, seed: u64, max_rank: usize) -> Vec<SuiteFailure> {
    let mut failures = Vec::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let rows = rng.random_range(1..=max_rank);
        let cols = rng.random_range(1..=max_rank);
        let m = random_matrix(&mut rng, ring, rows, cols);
        let s = smith_normal_form(&m);
        let factors = s.invariant_factors();

        let mut problems = Vec::new();
        if s.u.mul(&m).mul(&s.v) != s.d {
            problems.push("u*m*v differs from d".to_string());
        }
        if !s.u.is_unimodular() || !s.v.is_unimodular() {
            problems.push("transform determinant is not a unit".to_string());
        }
        let diagonal =
            (0..s.d.rows()).all(|i| (0..s.d.cols()).all(|j| i == j || s.d.get(i, j).is_zero()));
        if !diagonal {
            problems.push("d is not diagonal".to_string());
        }
        if !factors.windows(2).all(|w| w[1].div_exact(&w[0]).is_some()) {
            problems.push("divisibility chain broken".to_string());
        }
        let mut expected_factors: Option<Vec<BigInt>> = None;
        if ring == Ring::Integer && rows <= 4 && cols <= 4 {
            let oracle = minor_invariant_factors(&m);
            let got: Vec<BigInt> = factors
                .iter()
                .map(|f| match f {
                    Scalar::Int(b) => b.clone(),
                    Scalar::Rat(_) => unreachable!("integer factors"),
                })
                .collect();
            if got != oracle {
                problems.push(format!(
                    "invariant factors {got:?} differ from minor gcds {oracle:?}"
                ));
            }
            expected_factors = Some(oracle);
        } else if smith_normal_form(&m).rank() != gauss_rank(&m) {
            problems.push("rank differs from row reduction".to_string());
        }
        if !problems.is_empty() {
            let mut expect = json!({
                "factorization_holds": true,
                "divisibility_holds": true,
                "rank": gauss_rank(&m),
            });
            if let Some(fs) = expected_factors {
                expect["invariant_factors"] =
                    json!(fs.iter().map(|f| f.to_string()).collect::<Vec<_>>());
            }
            failures.push(SuiteFailure {
                case,
                message: format!("case {case}: {rows}x{cols}: {}", problems.join("; ")),
                reproducer: matrix_ws(ring, &m, "smith", expect),
            });
        }
    }
    failures
}

fn sheaf_ws(s: &SheafModule, expect: Value) -> Workspace {
    assemble(
        WsParts {
            ring: s.ring(),
            pairing: None,
            sheaves: vec![("S", s.clone())],
            submodules: Vec::new(),
            matrices: Vec::new(),
        },
        "sheafaxioms",
        args_of(&[("sheaf", "S")]),
        expect,
    )
}

/// Exhaustive rather than randomized: every cover of every open of every
/// catalogued topology, then the broken fixtures. The cases flag only
/// gates vacuous runs; the sweep itself is fixed.
fn suite_sheaf(ring: Ring) -> (u64, Vec<SuiteFailure>) {
    let mut failures = Vec::new();
    let mut case = 0u64;
    for (name, space) in topology_catalog() {
        for rank in [1usize, 2] {
            let s = SheafModule::constant(&space, ring, rank);
            let violations = s.validate_presheaf();
            if !violations.is_empty() {
                failures.push(SuiteFailure {
                    case,
                    message: format!(
                        "constant rank-{rank} module on {name} is not even a presheaf: {violations:?}"
                    ),
                    reproducer: sheaf_ws(&s, json!({"presheaf_ok": true})),
                });
                case += 1;
                continue;
            }
            for u in 0..space.open_count() {
                for cover in covers_of(&space, u) {
                    let report = s
                        .check_sheaf_axioms(u, &cover)
                        .expect("enumerated covers are valid");
                    if !report.holds() {
                        failures.push(SuiteFailure {
                            case,
                            message: format!(
                                "constant rank-{rank} module on {name}: open {u}, cover {cover:?}, locality={}, gluing={}",
                                report.locality_holds(),
                                report.gluing_holds()
                            ),
                            reproducer: sheaf_ws(
                                &s,
                                json!({"presheaf_ok": true, "locality_ok": true, "gluing_ok": true}),
                            ),
                        });
                    }
                    case += 1;
                }
            }
        }
    }
    for (name, s, defect) in broken_presheaf_catalog(ring) {
        let violations = s.validate_presheaf();
        let classes: Vec<&str> = violations
            .iter()
            .map(|v| match v {
                crate::sheaf::PresheafViolation::IdentityLaw { .. } => "IdentityLaw",
                crate::sheaf::PresheafViolation::CompositionLaw { .. } => "CompositionLaw",
                crate::sheaf::PresheafViolation::WrongShape { .. } => "WrongShape",
                _ => "other",
            })
            .collect();
        let (hit, expect) = match defect {
            ExpectedDefect::IdentityLaw => (
                classes.contains(&"IdentityLaw"),
                json!({"presheaf_ok": false, "violation_classes": ["IdentityLaw"]}),
            ),
            ExpectedDefect::CompositionLaw => (
                classes.contains(&"CompositionLaw"),
                json!({"presheaf_ok": false, "violation_classes": ["CompositionLaw"]}),
            ),
            ExpectedDefect::WrongShape => (
                classes.contains(&"WrongShape"),
                json!({"presheaf_ok": false, "violation_classes": ["WrongShape"]}),
            ),
            ExpectedDefect::Locality | ExpectedDefect::Gluing => {
                let want_locality = matches!(defect, ExpectedDefect::Locality);
                let mut found = false;
                if violations.is_empty() {
                    'sweep: for u in 0..s.space().open_count() {
                        for cover in covers_of(s.space(), u) {
                            let report = s
                                .check_sheaf_axioms(u, &cover)
                                .expect("enumerated covers are valid");
                            let broke = if want_locality {
                                !report.locality_holds()
                            } else {
                                !report.gluing_holds()
                            };
                            if broke {
                                found = true;
                                break 'sweep;
                            }
                        }
                    }
                }
                let expect = if want_locality {
                    json!({"presheaf_ok": true, "locality_ok": false})
                } else {
                    json!({"presheaf_ok": true, "gluing_ok": false})
                };
                (found, expect)
            }
        };
        if !hit {
            failures.push(SuiteFailure {
                case,
                message: format!(
                    "fixture {name} was built to fail with {defect:?} but did not (presheaf classes: {classes:?})"
                ),
                reproducer: sheaf_ws(&s, expect),
            });
        }
        case += 1;
    }
    (case, failures)
}

pub fn run_suite(
    suite: &str,
    ring: Ring,
    cases: u64,
    seed: u64,
    max_rank: usize,
) -> Result<SuiteOutcome> {
    let canonical = SUITE_NAMES.iter().find(|&&n| n == suite).ok_or_else(|| {
        Error::Usage(format!(
            "unknown suite {suite:?} (available: {})",
            SUITE_NAMES.join(", ")
        ))
    })?;
    if matches!(*canonical, "witt" | "partner") && ring == Ring::Integer {
        return Err(Error::Usage(format!(
            "the {canonical} suite needs unit pairing values everywhere, which only the rational field guarantees; run it over qq"
        )));
    }
    if cases == 0 {
        return Ok(SuiteOutcome {
            suite: canonical.to_string(),
            ring,
            cases_run: 0,
            failures: Vec::new(),
            vacuous: true,
        });
    }
    if max_rank == 0 {
        return Err(Error::Usage("max-rank must be at least 1".into()));
    }
    let (cases_run, failures) = match *canonical {
        "biorthogonality" => (cases, suite_biorthogonality(ring, cases, seed, max_rank)),
        "codim" => (cases, suite_codim(ring, cases, seed, max_rank)),
        "dimension" => (cases, suite_dimension(ring, cases, seed, max_rank)),
        "insertion" => (cases, suite_insertion(ring, cases, seed, max_rank)),
        "dualdecomp" => (cases, suite_dualdecomp(ring, cases, seed, max_rank)),
        "quotientnondeg" => (cases, suite_quotientnondeg(ring, cases, seed, max_rank)),
        "witt" => (cases, suite_witt(ring, cases, seed, max_rank)),
        "partner" => (cases, suite_partner(ring, cases, seed, max_rank)),
        "snf" => (cases, suite_snf(ring, cases, seed, max_rank)),
        "sheaf" => suite_sheaf(ring),
        _ => unreachable!("name checked above"),
    };
    Ok(SuiteOutcome {
        suite: canonical.to_string(),
        ring,
        cases_run,
        failures,
        vacuous: false,
    })
}
