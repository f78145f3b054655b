use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

/// Dense row-major matrix with entries in one coefficient ring. The ring tag
/// is kept even for empty shapes so 0 x n edge cases stay well-typed.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    ring: Ring,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            ring,
            data: vec![Scalar::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(ring));
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for s in row {
                if s.ring() != ring {
                    return Err(Error::MixedRings(format!(
                        "matrix over {ring} holds a {} entry",
                        s.ring()
                    )));
                }
                data.push(s);
            }
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            ring,
            data,
        })
    }

    /// Convenience constructor for literals in tests and fixtures.
    pub fn from_i64(ring: Ring, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&n| Scalar::from_int(ring, n)).collect())
            .collect();
        Self::from_rows(ring, rows).expect("literal rows are rectangular")
    }

    pub fn from_fn(
        ring: Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                assert_eq!(s.ring(), ring, "entry ring mismatch");
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j < self.cols);
        i * self.cols + j
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        assert_eq!(s.ring(), self.ring, "entry ring mismatch");
        let k = self.idx(i, j);
        self.data[k] = s;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = i == j;
                let e = self.get(i, j);
                if want != e.is_one() || (!want && !e.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        assert_eq!(s.ring(), self.ring);
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| {
            self.get(i, j).mul(s)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape");
        assert_eq!(self.ring, other.ring, "ring");
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        assert_eq!(self.ring, other.ring, "ring");
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero(self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn col(&self, j: usize) -> Self {
        Self::from_fn(self.ring, self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn select_cols(&self, which: &[usize]) -> Self {
        Self::from_fn(self.ring, self.rows, which.len(), |i, j| {
            self.get(i, which[j]).clone()
        })
    }

    pub fn select_rows(&self, which: &[usize]) -> Self {
        Self::from_fn(self.ring, which.len(), self.cols, |i, j| {
            self.get(which[i], j).clone()
        })
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        let ring = parts[0].ring;
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        for p in parts {
            assert_eq!(p.rows, rows, "row counts");
            assert_eq!(p.ring, ring, "ring");
        }
        let mut out = Self::zeros(ring, rows, cols);
        let mut at = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, at + j, p.get(i, j).clone());
                }
            }
            at += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Self]) -> Self {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        let ring = parts[0].ring;
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        for p in parts {
            assert_eq!(p.cols, cols, "column counts");
            assert_eq!(p.ring, ring, "ring");
        }
        let mut out = Self::zeros(ring, rows, cols);
        let mut at = 0;
        for p in parts {
            for i in 0..p.rows {
                for j in 0..cols {
                    out.set(at + i, j, p.get(i, j).clone());
                }
            }
            at += p.rows;
        }
        out
    }

    pub fn block_diag(ring: Ring, parts: &[&Self]) -> Self {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let (mut ri, mut ci) = (0, 0);
        for p in parts {
            assert_eq!(p.ring, ring, "ring");
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out.set(ri + i, ci + j, p.get(i, j).clone());
                }
            }
            ri += p.rows;
            ci += p.cols;
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (ia, ib) = (self.idx(a, j), self.idx(b, j));
            self.data.swap(ia, ib);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let (ia, ib) = (self.idx(i, a), self.idx(i, b));
            self.data.swap(ia, ib);
        }
    }

    pub fn scale_row(&mut self, i: usize, s: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j).mul(s);
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, s: &Scalar) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(s);
            self.set(i, j, v);
        }
    }

    /// row_dst += s * row_src
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, s: &Scalar) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let v = self.get(dst, j).add(&self.get(src, j).mul(s));
            self.set(dst, j, v);
        }
    }

    /// col_dst += s * col_src
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, s: &Scalar) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let v = self.get(i, dst).add(&self.get(i, src).mul(s));
            self.set(i, dst, v);
        }
    }

    /// (row_a, row_b) := (p*row_a + q*row_b, r*row_a + s*row_b)
    pub fn two_row_op(
        &mut self,
        a: usize,
        b: usize,
        p: &Scalar,
        q: &Scalar,
        r: &Scalar,
        s: &Scalar,
    ) {
        assert_ne!(a, b);
        for j in 0..self.cols {
            let va = self.get(a, j).clone();
            let vb = self.get(b, j).clone();
            self.set(a, j, p.mul(&va).add(&q.mul(&vb)));
            self.set(b, j, r.mul(&va).add(&s.mul(&vb)));
        }
    }

    /// (col_a, col_b) := (p*col_a + q*col_b, r*col_a + s*col_b)
    pub fn two_col_op(
        &mut self,
        a: usize,
        b: usize,
        p: &Scalar,
        q: &Scalar,
        r: &Scalar,
        s: &Scalar,
    ) {
        assert_ne!(a, b);
        for i in 0..self.rows {
            let va = self.get(i, a).clone();
            let vb = self.get(i, b).clone();
            self.set(i, a, p.mul(&va).add(&q.mul(&vb)));
            self.set(i, b, r.mul(&va).add(&s.mul(&vb)));
        }
    }

    /// Exact determinant by fraction-free elimination. The 0 x 0 determinant
    /// is 1.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one(self.ring);
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = Scalar::one(self.ring);
        for k in 0..n - 1 {
            let pivot_row = (k..n).find(|&i| !m.get(i, k).is_zero());
            let Some(p) = pivot_row else {
                return Scalar::zero(self.ring);
            };
            if p != k {
                m.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m
                        .get(k, k)
                        .mul(m.get(i, j))
                        .sub(&m.get(i, k).mul(m.get(k, j)));
                    let v = num.div_exact(&prev).expect("fraction-free step divides");
                    m.set(i, j, v);
                }
                m.set(i, k, Scalar::zero(self.ring));
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        if negate {
            d.neg()
        } else {
            d
        }
    }

    /// True when the matrix is square with unit determinant, i.e. invertible
    /// over its ring.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().is_unit()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ExactMatrix {}x{} over {} [",
            self.rows, self.cols, self.ring
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
