//! Dense matrices over `F_q`, sized for the small systems that show up in
//! form standardization and dual-basis computation.

use crate::field::{FieldContext, FieldElement};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, ctx: &FieldContext, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ctx.mul(a, other.get(k, j));
                    out.set(i, j, ctx.add(out.get(i, j), t));
                }
            }
        }
        out
    }

    /// Column-vector action `M * x`.
    pub fn mul_vec(&self, ctx: &FieldContext, x: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| ctx.dot(self.row(i), x)).collect()
    }

    pub fn rank(&self, ctx: &FieldContext) -> usize {
        let (reduced, _) = self.row_echelon(ctx);
        (0..reduced.rows)
            .filter(|&i| reduced.row(i).iter().any(|v| !v.is_zero()))
            .count()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self, ctx: &FieldContext) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = ctx.inv(a.get(col, col));
            a.scale_row(ctx, col, scale);
            inv.scale_row(ctx, col, scale);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col);
                    a.sub_scaled_row(ctx, r, col, factor);
                    inv.sub_scaled_row(ctx, r, col, factor);
                }
            }
        }
        Some(inv)
    }

    /// A basis of `{x : M x = 0}`.
    pub fn nullspace(&self, ctx: &FieldContext) -> Vec<Vec<FieldElement>> {
        let (reduced, pivots) = self.row_echelon(ctx);
        let mut basis = Vec::new();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![FieldElement::ZERO; self.cols];
            v[free] = FieldElement::ONE;
            for &(r, c) in pivots.iter() {
                // row r: x_c + sum_{j > c} a_j x_j = 0
                v[c] = ctx.neg(reduced.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Reduced row echelon form plus the list of `(row, pivot_col)` pairs.
    fn row_echelon(&self, ctx: &FieldContext) -> (Matrix, Vec<(usize, usize)>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(pivot) = (r..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, r);
            let scale = ctx.inv(a.get(r, col));
            a.scale_row(ctx, r, scale);
            for i in 0..a.rows {
                if i != r && !a.get(i, col).is_zero() {
                    let factor = a.get(i, col);
                    a.sub_scaled_row(ctx, i, r, factor);
                }
            }
            pivots.push((r, col));
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, ctx: &FieldContext, i: usize, s: FieldElement) {
        for c in 0..self.cols {
            let v = ctx.mul(self.get(i, c), s);
            self.set(i, c, v);
        }
    }

    /// row_i -= factor * row_j
    fn sub_scaled_row(&mut self, ctx: &FieldContext, i: usize, j: usize, factor: FieldElement) {
        for c in 0..self.cols {
            let v = ctx.sub(self.get(i, c), ctx.mul(factor, self.get(j, c)));
            self.set(i, c, v);
        }
    }
}
