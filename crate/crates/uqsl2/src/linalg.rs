//! Dense exact linear algebra over Q(zeta_{4p}): Gaussian elimination,
//! rank, nullspace, solving, inversion.  Sizes stay at desk scale
//! (matrices up to a few hundred rows), so plain row reduction over the
//! field is the right tool.

use rayon::prelude::*;

use crate::cyclo::{Ctx, Cyc};

#[derive(Clone, PartialEq)]
pub struct Mat {
    pub ctx: Ctx,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<Cyc>>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in &self.a {
            let row: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(ctx: &Ctx, rows: usize, cols: usize) -> Mat {
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            a: vec![vec![ctx.zero(); cols]; rows],
        }
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Mat {
        let mut m = Mat::zero(ctx, n, n);
        for i in 0..n {
            m.a[i][i] = ctx.one();
        }
        m
    }

    pub fn from_rows(ctx: &Ctx, a: Vec<Vec<Cyc>>) -> Mat {
        let rows = a.len();
        let cols = if rows > 0 { a[0].len() } else { 0 };
        assert!(a.iter().all(|r| r.len() == cols));
        Mat { ctx: ctx.clone(), rows, cols, a }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn scale(&self, c: &Cyc) -> Mat {
        let a = self
            .a
            .iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, a }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let a = self
            .a
            .iter()
            .zip(&o.a)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, a }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let a = self
            .a
            .iter()
            .zip(&o.a)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
            .collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, a }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let ctx = self.ctx.clone();
        let a: Vec<Vec<Cyc>> = self
            .a
            .par_iter()
            .map(|row| {
                let mut out = vec![ctx.zero(); o.cols];
                for (k, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in o.a[k].iter().enumerate() {
                        if !y.is_zero() {
                            out[j] += &(x * y);
                        }
                    }
                }
                out
            })
            .collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: o.cols, a }
    }

    pub fn apply(&self, v: &[Cyc]) -> Vec<Cyc> {
        assert_eq!(self.cols, v.len());
        self.a
            .iter()
            .map(|row| {
                let mut acc = self.ctx.zero();
                for (x, y) in row.iter().zip(v) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut a = vec![vec![self.ctx.zero(); self.rows]; self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                a[j][i] = self.a[i][j].clone();
            }
        }
        Mat { ctx: self.ctx.clone(), rows: self.cols, cols: self.rows, a }
    }

    pub fn pow(&self, k: usize) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(&self.ctx, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Cyc {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.ctx.zero();
        for i in 0..self.rows {
            acc += &self.a[i][i];
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut rr = RowReducer::new(&self.ctx, self.cols);
        for r in &self.a {
            rr.push(r.clone());
        }
        rr.rank()
    }

    /// Basis of the right nullspace {v : A v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Cyc>> {
        let mut rr = RowReducer::new(&self.ctx, self.cols);
        for r in &self.a {
            rr.push(r.clone());
        }
        rr.nullspace()
    }

    /// Solve A x = b; None if inconsistent.  If the system is
    /// underdetermined an arbitrary solution (free vars zero) is given.
    pub fn solve(&self, b: &[Cyc]) -> Option<Vec<Cyc>> {
        assert_eq!(self.rows, b.len());
        let mut rr = RowReducer::new(&self.ctx, self.cols + 1);
        for (row, rhs) in self.a.iter().zip(b) {
            let mut ext = row.clone();
            ext.push(rhs.clone());
            rr.push(ext);
        }
        rr.solve_augmented()
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // eliminate [A | I]
        let mut work: Vec<Vec<Cyc>> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                for j in 0..n {
                    r.push(if i == j { self.ctx.one() } else { self.ctx.zero() });
                }
                r
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..n {
            let Some(pr) = (pivot_row..n).find(|&r| !work[r][col].is_zero()) else {
                return None;
            };
            work.swap(pivot_row, pr);
            let inv = work[pivot_row][col].inv().unwrap();
            for j in col..2 * n {
                work[pivot_row][j] = &work[pivot_row][j] * &inv;
            }
            let pivot = work[pivot_row].clone();
            work.par_iter_mut().enumerate().for_each(|(r, row)| {
                if r != pivot_row && !row[col].is_zero() {
                    let f = row[col].clone();
                    for j in col..2 * n {
                        let d = &f * &pivot[j];
                        row[j] = &row[j] - &d;
                    }
                }
            });
            pivot_row += 1;
        }
        let a = work.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Mat { ctx: self.ctx.clone(), rows: n, cols: n, a })
    }
}

/// Incremental reduced row echelon form: rows can be pushed one at a
/// time, which keeps big constraint systems (many rows, few columns)
/// cheap.
pub struct RowReducer {
    ctx: Ctx,
    cols: usize,
    /// rows in echelon form, each normalized to pivot 1
    rows: Vec<Vec<Cyc>>,
    /// pivot column of each stored row
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new(ctx: &Ctx, cols: usize) -> Self {
        RowReducer { ctx: ctx.clone(), cols, rows: vec![], pivots: vec![] }
    }

    /// Reduce a row against the current basis; if independent, insert it
    /// and return true.
    pub fn push(&mut self, mut row: Vec<Cyc>) -> bool {
        assert_eq!(row.len(), self.cols);
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                for j in 0..self.cols {
                    if !r[j].is_zero() {
                        let d = &f * &r[j];
                        row[j] = &row[j] - &d;
                    }
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].inv().unwrap();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // back-substitute into earlier rows to keep fully reduced form
        for (r, _) in self.rows.iter_mut().zip(&self.pivots) {
            if !r[pc].is_zero() {
                let f = r[pc].clone();
                for j in 0..self.cols {
                    if !row[j].is_zero() {
                        let d = &f * &row[j];
                        r[j] = &r[j] - &d;
                    }
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(pc);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The reduced rows themselves (a basis of the row space).
    pub fn rows_basis(&self) -> Vec<Vec<Cyc>> {
        self.rows.clone()
    }

    /// Nullspace of the pushed row system.
    pub fn nullspace(&self) -> Vec<Vec<Cyc>> {
        let mut is_pivot = vec![false; self.cols];
        for &pc in &self.pivots {
            is_pivot[pc] = true;
        }
        let mut basis = vec![];
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![self.ctx.zero(); self.cols];
            v[free] = self.ctx.one();
            for (r, &pc) in self.rows.iter().zip(&self.pivots) {
                if !r[free].is_zero() {
                    v[pc] = -&r[free];
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Treat the last column as an augmented right-hand side and read
    /// off one solution of the first cols-1 variables.
    fn solve_augmented(&self) -> Option<Vec<Cyc>> {
        let n = self.cols - 1;
        let mut x = vec![self.ctx.zero(); n];
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            if pc == n {
                return None; // row 0 ... 0 | 1
            }
            x[pc] = r[n].clone();
        }
        Some(x)
    }
}

/// Span utility: dimension of the span of a set of vectors.
pub fn span_dim(ctx: &Ctx, vecs: &[Vec<Cyc>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let mut rr = RowReducer::new(ctx, vecs[0].len());
    for v in vecs {
        rr.push(v.clone());
    }
    rr.rank()
}

/// Does `target` lie in the span of `basis`?
pub fn in_span(ctx: &Ctx, basis: &[Vec<Cyc>], target: &[Cyc]) -> bool {
    let mut rr = RowReducer::new(ctx, target.len());
    for v in basis {
        rr.push(v.clone());
    }
    !rr.push(target.to_vec())
}
