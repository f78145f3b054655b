use crate::matrix::ExactMatrix;
use crate::scalar::{gcd_ext, Scalar};

/// Smith decomposition u * m * v = d with unit-determinant transforms and
/// their inverses, so bases of kernels, images, and complements can be read
/// off without re-solving.
///
/// d is diagonal with canonical (non-negative) entries forming a
/// divisibility chain d1 | d2 | ... ; over the rationals the chain collapses
/// to ones followed by zeros.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub v_inv: ExactMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    /// The nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<Scalar> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|s| !s.is_zero())
            .collect()
    }

    pub fn factors_all_units(&self) -> bool {
        self.invariant_factors().iter().all(Scalar::is_unit)
    }
}

struct Calc {
    d: ExactMatrix,
    u: ExactMatrix,
    u_inv: ExactMatrix,
    v: ExactMatrix,
    v_inv: ExactMatrix,
}

impl Calc {
    fn new(m: &ExactMatrix) -> Self {
        let ring = m.ring();
        Calc {
            d: m.clone(),
            u: ExactMatrix::identity(ring, m.rows()),
            u_inv: ExactMatrix::identity(ring, m.rows()),
            v: ExactMatrix::identity(ring, m.cols()),
            v_inv: ExactMatrix::identity(ring, m.cols()),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// Applies [[p, q], [r, s]] (determinant 1) to rows (a, b).
    fn row_op(&mut self, a: usize, b: usize, p: &Scalar, q: &Scalar, r: &Scalar, s: &Scalar) {
        self.d.two_row_op(a, b, p, q, r, s);
        self.u.two_row_op(a, b, p, q, r, s);
        // Inverse acts on columns of u_inv from the right.
        self.u_inv.two_col_op(a, b, s, &r.neg(), &q.neg(), p);
    }

    /// Column analogue: (col_a, col_b) := (p col_a + q col_b, r col_a + s col_b)
    /// with ps - qr = 1.
    fn col_op(&mut self, a: usize, b: usize, p: &Scalar, q: &Scalar, r: &Scalar, s: &Scalar) {
        self.d.two_col_op(a, b, p, q, r, s);
        self.v.two_col_op(a, b, p, q, r, s);
        self.v_inv.two_row_op(a, b, s, &r.neg(), &q.neg(), p);
    }

    /// Scales row i by a unit.
    fn scale_row(&mut self, i: usize, w: &Scalar) {
        let w_inv = w.inverse().expect("row scale by a unit");
        self.d.scale_row(i, w);
        self.u.scale_row(i, w);
        self.u_inv.scale_col(i, &w_inv);
    }

    /// Minimal nonzero canonical-associate magnitude in the trailing block,
    /// ties broken by lowest row then lowest column.
    fn select_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.d.rows() {
            for j in k..self.d.cols() {
                let e = self.d.get(i, j);
                if e.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if e.pivot_cmp(self.d.get(bi, bj)) == std::cmp::Ordering::Less {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    /// Clears row k and column k outside the pivot, leaving the pivot equal
    /// to the gcd of everything it absorbed.
    fn eliminate_at(&mut self, k: usize) {
        loop {
            let mut touched = false;
            for i in k + 1..self.d.rows() {
                if self.d.get(i, k).is_zero() {
                    continue;
                }
                touched = true;
                let a = self.d.get(k, k).clone();
                let b = self.d.get(i, k).clone();
                if let Some(q) = b.div_exact(&a) {
                    let one = Scalar::one(a.ring());
                    let zero = Scalar::zero(a.ring());
                    self.row_op(k, i, &one, &zero, &q.neg(), &one);
                } else {
                    let (g, x, y) = gcd_ext(&a, &b).expect("uniform ring");
                    let a1 = a.div_exact(&g).expect("gcd divides");
                    let b1 = b.div_exact(&g).expect("gcd divides");
                    self.row_op(k, i, &x, &y, &b1.neg(), &a1);
                }
            }
            for j in k + 1..self.d.cols() {
                if self.d.get(k, j).is_zero() {
                    continue;
                }
                touched = true;
                let a = self.d.get(k, k).clone();
                let b = self.d.get(k, j).clone();
                if let Some(q) = b.div_exact(&a) {
                    let one = Scalar::one(a.ring());
                    let zero = Scalar::zero(a.ring());
                    self.col_op(k, j, &one, &zero, &q.neg(), &one);
                } else {
                    let (g, x, y) = gcd_ext(&a, &b).expect("uniform ring");
                    let a1 = a.div_exact(&g).expect("gcd divides");
                    let b1 = b.div_exact(&g).expect("gcd divides");
                    self.col_op(k, j, &x, &y, &b1.neg(), &a1);
                }
            }
            if !touched {
                return;
            }
            // Column elimination can refill the pivot column; loop until a
            // full pass leaves both clean. Each gcd step shrinks the pivot's
            // associate magnitude, so this terminates.
            let col_clean = (k + 1..self.d.rows()).all(|i| self.d.get(i, k).is_zero());
            let row_clean = (k + 1..self.d.cols()).all(|j| self.d.get(k, j).is_zero());
            if col_clean && row_clean {
                return;
            }
        }
    }

    fn fix_divisibility(&mut self) {
        let n = self.d.rows().min(self.d.cols());
        loop {
            let mut violation = None;
            for i in 0..n.saturating_sub(1) {
                let a = self.d.get(i, i);
                let b = self.d.get(i + 1, i + 1);
                if b.is_zero() {
                    break;
                }
                if b.div_exact(a).is_none() {
                    violation = Some(i);
                    break;
                }
            }
            let Some(i) = violation else { return };
            // Fold d_{i+1} into column i, then re-eliminate: the pivot
            // becomes gcd(d_i, d_{i+1}) and the other entry their lcm.
            let one = Scalar::one(self.d.ring());
            let zero = Scalar::zero(self.d.ring());
            self.col_op(i, i + 1, &one, &one, &zero, &one); // col_i += col_{i+1}
            debug_assert_eq!(self.d.get(i + 1, i), self.d.get(i + 1, i + 1));
            self.eliminate_at(i);
        }
    }

    fn normalize_diagonal(&mut self) {
        let n = self.d.rows().min(self.d.cols());
        for i in 0..n {
            let e = self.d.get(i, i);
            if e.is_zero() {
                continue;
            }
            let (unit, _) = e.canonical_associate();
            if !unit.is_one() {
                let w = unit.inverse().expect("associate unit");
                self.scale_row(i, &w);
            }
        }
    }
}

/// Computes the Smith decomposition. Pivots are chosen with minimal
/// canonical-associate magnitude (over the rationals every nonzero entry
/// ties, so the first in row-major order wins).
pub fn smith_normal_form(m: &ExactMatrix) -> Smith {
    let mut c = Calc::new(m);
    let n = m.rows().min(m.cols());
    for k in 0..n {
        let Some((pi, pj)) = c.select_pivot(k) else {
            break;
        };
        c.swap_rows(k, pi);
        c.swap_cols(k, pj);
        c.eliminate_at(k);
    }
    c.fix_divisibility();
    c.normalize_diagonal();
    Smith {
        u: c.u,
        u_inv: c.u_inv,
        d: c.d,
        v: c.v,
        v_inv: c.v_inv,
    }
}

/// Rank over the fraction field, read from the invariant factors.
pub fn rank(m: &ExactMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Exact inverse when the matrix is square with unit determinant.
pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if !m.is_square() {
        return None;
    }
    let s = smith_normal_form(m);
    let n = m.rows();
    let mut d_inv = ExactMatrix::zeros(m.ring(), n, n);
    for i in 0..n {
        let w = s.d.get(i, i).inverse()?;
        d_inv.set(i, i, w);
    }
    Some(s.v.mul(&d_inv).mul(&s.u))
}

/// Canonical column echelon form of the column span: over the integers the
/// column-style Hermite normal form of the column lattice, over the
/// rationals the reduced echelon basis of the column space. Zero columns are
/// trimmed, so two inputs span the same submodule iff their forms are equal.
pub fn column_hermite(m: &ExactMatrix) -> ExactMatrix {
    let mut w = m.clone();
    let mut j = 0;
    for i in 0..w.rows() {
        if j == w.cols() {
            break;
        }
        // Combine the trailing columns so column j carries the gcd of the
        // row-i entries and the rest vanish there.
        for jj in j + 1..w.cols() {
            if w.get(i, jj).is_zero() {
                continue;
            }
            let a = w.get(i, j).clone();
            let b = w.get(i, jj).clone();
            if let Some(q) = b.div_exact(&a) {
                w.add_col_multiple(jj, j, &q.neg());
            } else {
                let (g, x, y) = gcd_ext(&a, &b).expect("uniform ring");
                let a1 = a.div_exact(&g).expect("gcd divides");
                let b1 = b.div_exact(&g).expect("gcd divides");
                w.two_col_op(j, jj, &x, &y, &b1.neg(), &a1);
            }
        }
        if w.get(i, j).is_zero() {
            continue;
        }
        let (unit, _) = w.get(i, j).canonical_associate();
        if !unit.is_one() {
            let s = unit.inverse().expect("associate unit");
            w.scale_col(j, &s);
        }
        // Reduce the entries left of the pivot into the canonical window.
        let pivot = w.get(i, j).clone();
        for jj in 0..j {
            let e = w.get(i, jj);
            if e.is_zero() {
                continue;
            }
            let (q, _) = e.div_mod_pivot(&pivot);
            if !q.is_zero() {
                w.add_col_multiple(jj, j, &q.neg());
            }
        }
        j += 1;
    }
    let keep: Vec<usize> = (0..j).collect();
    debug_assert!((j..w.cols()).all(|c| (0..w.rows()).all(|r| w.get(r, c).is_zero())));
    w.select_cols(&keep)
}

/// Same column span (the lattice over the integers, the subspace over the
/// rationals), decided through the canonical form.
pub fn same_span(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    a.rows() == b.rows() && a.ring() == b.ring() && column_hermite(a) == column_hermite(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    fn verify(m: &ExactMatrix, s: &Smith) {
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "u*m*v = d");
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        assert!(s.u.det().is_unit());
        assert!(s.v.det().is_unit());
        let n = s.d.rows().min(s.d.cols());
        for i in 0..n {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero(), "off-diagonal {i},{j}");
                }
            }
            let e = s.d.get(i, i);
            let (unit, _) = e.canonical_associate();
            assert!(unit.is_one(), "canonical diagonal");
            if i + 1 < n && !s.d.get(i + 1, i + 1).is_zero() {
                assert!(
                    s.d.get(i + 1, i + 1).div_exact(e).is_some(),
                    "divisibility chain at {i}"
                );
            }
        }
    }

    #[test]
    fn smith_of_the_two_by_two() {
        let m = ExactMatrix::from_i64(Ring::Integer, &[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        verify(&m, &s);
        assert_eq!(
            s.d,
            ExactMatrix::from_i64(Ring::Integer, &[&[2, 0], &[0, 4]])
        );
    }

    #[test]
    fn smith_over_the_rationals_has_unit_diagonal() {
        let m = ExactMatrix::from_i64(Ring::Rational, &[&[1, 1], &[2, 2]]);
        let s = smith_normal_form(&m);
        verify(&m, &s);
        assert_eq!(
            s.d,
            ExactMatrix::from_i64(Ring::Rational, &[&[1, 0], &[0, 0]])
        );
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn rank_is_ring_independent_on_shared_entries() {
        for ring in [Ring::Integer, Ring::Rational] {
            let m = ExactMatrix::from_i64(ring, &[&[1, 2], &[2, 4]]);
            assert_eq!(rank(&m), 1);
        }
    }

    #[test]
    fn smith_handles_degenerate_shapes() {
        for m in [
            ExactMatrix::zeros(Ring::Integer, 0, 3),
            ExactMatrix::zeros(Ring::Integer, 3, 0),
            ExactMatrix::zeros(Ring::Integer, 2, 2),
            ExactMatrix::from_i64(Ring::Integer, &[&[0, 7]]),
        ] {
            let s = smith_normal_form(&m);
            verify(&m, &s);
        }
    }

    #[test]
    fn smith_chain_needs_fixup() {
        // diag(4, 6) has gcd 2, so the chain must be rebuilt to (2, 12).
        let m = ExactMatrix::from_i64(Ring::Integer, &[&[4, 0], &[0, 6]]);
        let s = smith_normal_form(&m);
        verify(&m, &s);
        assert_eq!(
            s.d,
            ExactMatrix::from_i64(Ring::Integer, &[&[2, 0], &[0, 12]])
        );
    }

    #[test]
    fn inverse_round_trips() {
        let m = ExactMatrix::from_i64(Ring::Integer, &[&[1, 2], &[0, -1]]);
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inverse(&ExactMatrix::from_i64(Ring::Integer, &[&[2]])).is_none());
        let q = ExactMatrix::from_i64(Ring::Rational, &[&[2, 1], &[1, 1]]);
        assert!(q.mul(&inverse(&q).unwrap()).is_identity());
    }

    #[test]
    fn hermite_canonicalizes_spans() {
        let a = ExactMatrix::from_i64(Ring::Integer, &[&[2, 4], &[1, 0]]);
        let b = ExactMatrix::from_i64(Ring::Integer, &[&[4, 2], &[0, 1]]);
        assert!(same_span(&a, &b));
        let h = column_hermite(&a);
        assert_eq!(column_hermite(&h), h, "idempotent");
        // Unimodular recombination never changes the lattice.
        let w = ExactMatrix::from_i64(Ring::Integer, &[&[1, 3], &[0, 1]]);
        assert!(same_span(&a, &a.mul(&w)));
        // Scaling a column does change it.
        let scaled = ExactMatrix::from_i64(Ring::Integer, &[&[4, 4], &[2, 0]]);
        assert!(!same_span(&a, &scaled));
    }

    #[test]
    fn hermite_over_rationals_is_reduced_echelon() {
        let a = ExactMatrix::from_i64(Ring::Rational, &[&[2, 4], &[6, 8]]);
        let h = column_hermite(&a);
        assert_eq!(h, ExactMatrix::identity(Ring::Rational, 2));
        let dependent = ExactMatrix::from_i64(Ring::Rational, &[&[1, 2], &[1, 2]]);
        let h = column_hermite(&dependent);
        assert_eq!(h, ExactMatrix::from_i64(Ring::Rational, &[&[1], &[1]]));
    }

    #[test]
    fn hermite_trims_zero_columns() {
        let a = ExactMatrix::from_i64(Ring::Integer, &[&[0, 3], &[0, 0]]);
        let h = column_hermite(&a);
        assert_eq!(h, ExactMatrix::from_i64(Ring::Integer, &[&[3], &[0]]));
        let z = ExactMatrix::zeros(Ring::Integer, 2, 2);
        assert_eq!(column_hermite(&z).cols(), 0);
    }
}
