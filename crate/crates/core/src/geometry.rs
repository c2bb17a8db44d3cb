//! Linear algebra over a [`FieldCtx`]: matrices, canonical subspaces, and
//! the point/hyperplane enumeration of `PG(r-1, q)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Largest `q^r` for which a [`ProjSpace`] builds its key lookup table.
pub const MAX_VECTORS: usize = 1 << 24;

/// A dense row-major matrix of field elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[")?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for e in row {
                write!(f, "{}", e.0)?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows<R: AsRef<[Elem]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        self.data[i * self.cols + j] = e;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        // chunks_exact panics on zero width
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn as_flat(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&e| f(e)).collect() }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, ctx.add(cur, ctx.mul(a, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = ctx.add(*o, ctx.mul(a, self.get(k, j)));
            }
        }
        out
    }

    /// Reduced row echelon form with zero rows removed, plus pivot columns.
    pub fn rref(&self, ctx: &FieldCtx) -> (Matrix, Vec<usize>) {
        let mut m = self.data.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| !m[r * cols + c].is_zero()) else {
                continue;
            };
            if pr != rank {
                for j in 0..cols {
                    m.swap(pr * cols + j, rank * cols + j);
                }
            }
            let inv = ctx.inv(m[rank * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                m[rank * cols + j] = ctx.mul(m[rank * cols + j], inv);
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = m[r * cols + c];
                if factor.is_zero() {
                    continue;
                }
                let neg = ctx.neg(factor);
                for j in c..cols {
                    let t = ctx.mul(neg, m[rank * cols + j]);
                    m[r * cols + j] = ctx.add(m[r * cols + j], t);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        m.truncate(rank * cols);
        (Matrix { rows: rank, cols, data: m }, pivots)
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.rref(ctx).1.len()
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Elem::ONE);
        }
        let (red, pivots) = aug.rref(ctx);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { Elem::ONE } else { Elem::ZERO }))
    }
}

pub fn dot(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| ctx.add(acc, ctx.mul(x, y)))
}

/// Scales `v` so that its first nonzero entry is 1. Returns `None` for the
/// zero vector.
pub fn normalize(ctx: &FieldCtx, v: &[Elem]) -> Option<Vec<Elem>> {
    let lead = *v.iter().find(|e| !e.is_zero())?;
    let inv = ctx.inv(lead).ok()?;
    Some(v.iter().map(|&e| ctx.mul(e, inv)).collect())
}

/// A subspace of `GF(q)^r`, stored by its reduced row echelon basis.
///
/// Equal subspaces have identical representations, so the derived `Eq`,
/// `Ord` and `Hash` are the mathematical ones (for a fixed field).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    r: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(r={}, {:?})", self.r, self.basis)
    }
}

impl Subspace {
    pub fn zero(r: usize) -> Self {
        Subspace { r, basis: Matrix::zeros(0, r) }
    }

    pub fn full(r: usize) -> Self {
        Subspace { r, basis: Matrix::identity(r) }
    }

    /// Row space of the given rows; zero rows are allowed.
    pub fn from_rows<R: AsRef<[Elem]>>(ctx: &FieldCtx, r: usize, rows: &[R]) -> Result<Self> {
        let m = Matrix::from_rows(r, rows)?;
        Ok(Self::from_matrix(ctx, &m))
    }

    pub fn from_matrix(ctx: &FieldCtx, m: &Matrix) -> Self {
        Subspace { r: m.cols(), basis: m.rref(ctx).0 }
    }

    /// Wraps a matrix already known to be in reduced row echelon form.
    pub(crate) fn from_rref_unchecked(basis: Matrix) -> Self {
        Subspace { r: basis.cols(), basis }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.row_iter().map(|row| row.iter().position(|e| !e.is_zero()).expect("rref rows are nonzero")).collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.r != other.r {
            return Err(Error::DimensionMismatch { expected: self.r, got: other.r });
        }
        Ok(())
    }

    pub fn span(&self, ctx: &FieldCtx, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut data = self.basis.as_flat().to_vec();
        data.extend_from_slice(other.basis.as_flat());
        let m = Matrix::from_flat(self.dim() + other.dim(), self.r, data)?;
        Ok(Self::from_matrix(ctx, &m))
    }

    pub fn intersect_dim(&self, ctx: &FieldCtx, other: &Subspace) -> Result<usize> {
        let span = self.span(ctx, other)?;
        Ok(self.dim() + other.dim() - span.dim())
    }

    pub fn contains(&self, ctx: &FieldCtx, other: &Subspace) -> Result<bool> {
        Ok(self.span(ctx, other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        // reduce v by the basis; v is inside iff nothing remains
        let mut w = v.to_vec();
        for (row, p) in self.basis.row_iter().zip(self.pivots()) {
            let c = w[p];
            if !c.is_zero() {
                let neg = ctx.neg(c);
                for (x, &b) in w.iter_mut().zip(row) {
                    *x = ctx.add(*x, ctx.mul(neg, b));
                }
            }
        }
        w.iter().all(|e| e.is_zero())
    }

    /// Whether every basis row is orthogonal to `normal`.
    pub fn in_hyperplane(&self, ctx: &FieldCtx, normal: &[Elem]) -> Result<bool> {
        if normal.len() != self.r {
            return Err(Error::DimensionMismatch { expected: self.r, got: normal.len() });
        }
        Ok(self.basis.row_iter().all(|row| dot(ctx, row, normal).is_zero()))
    }

    /// The annihilator `{x : b·x = 0 for all b}`.
    pub fn dual(&self, ctx: &FieldCtx) -> Subspace {
        let pivots = self.pivots();
        let mut rows = Vec::with_capacity(self.r - self.dim());
        for f in (0..self.r).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Elem::ZERO; self.r];
            v[f] = Elem::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = ctx.neg(self.basis.get(i, f));
            }
            rows.push(v);
        }
        Subspace::from_rows(ctx, self.r, &rows).expect("rows have ambient width")
    }

    /// Image under the quotient map `GF(q)^r -> GF(q)^r / u`, with the
    /// quotient coordinatized by the non-pivot columns of `u`.
    pub fn project_through(&self, ctx: &FieldCtx, u: &Subspace) -> Result<Subspace> {
        self.check_ambient(u)?;
        let pivots = u.pivots();
        let keep: Vec<usize> = (0..self.r).filter(|c| !pivots.contains(c)).collect();
        let rows: Vec<Vec<Elem>> = self.basis.row_iter().map(|row| project_vector(ctx, row, u, &pivots, &keep)).collect();
        Subspace::from_rows(ctx, keep.len(), &rows)
    }

    /// Applies `f` to every basis row and takes the span of the images.
    pub fn map_rows(&self, ctx: &FieldCtx, r: usize, f: impl Fn(&[Elem]) -> Vec<Elem>) -> Result<Subspace> {
        let rows: Vec<Vec<Elem>> = self.basis.row_iter().map(f).collect();
        Subspace::from_rows(ctx, r, &rows)
    }

    /// Iterates over the normalized vectors (projective points) of this
    /// subspace, as coefficient combinations of the basis.
    pub fn for_each_point(&self, ctx: &FieldCtx, mut f: impl FnMut(&[Elem])) {
        let d = self.dim();
        let q = ctx.q() as usize;
        let mut v = vec![Elem::ZERO; self.r];
        let mut coeffs = vec![0usize; d];
        for lead in 0..d {
            // coefficient 1 at `lead`, zero before, anything after
            let tail = d - lead - 1;
            let total = q.pow(tail as u32);
            coeffs.iter_mut().for_each(|c| *c = 0);
            for code in 0..total {
                let mut c = code;
                for k in (lead + 1..d).rev() {
                    coeffs[k] = c % q;
                    c /= q;
                }
                v.copy_from_slice(self.basis.row(lead));
                for k in lead + 1..d {
                    if coeffs[k] != 0 {
                        let a = Elem(coeffs[k] as u16);
                        for (x, &b) in v.iter_mut().zip(self.basis.row(k)) {
                            *x = ctx.add(*x, ctx.mul(a, b));
                        }
                    }
                }
                f(&v);
            }
        }
    }
}

fn project_vector(ctx: &FieldCtx, v: &[Elem], u: &Subspace, pivots: &[usize], keep: &[usize]) -> Vec<Elem> {
    let mut w = v.to_vec();
    for (row, &p) in u.basis.row_iter().zip(pivots) {
        let c = w[p];
        if !c.is_zero() {
            let neg = ctx.neg(c);
            for (x, &b) in w.iter_mut().zip(row) {
                *x = ctx.add(*x, ctx.mul(neg, b));
            }
        }
    }
    keep.iter().map(|&c| w[c]).collect()
}

/// `[t]_q = (q^t - 1)/(q - 1)`, the number of points of `PG(t-1, q)`.
pub fn gauss_count(q: u64, t: u32) -> u64 {
    (0..t).fold(0, |acc, _| acc * q + 1)
}

/// The Gaussian binomial coefficient: the number of `k`-subspaces of `GF(q)^n`.
pub fn gaussian_binomial(q: u64, n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// The points of `PG(r-1, q)` in canonical order, with a constant-time
/// lookup from normalized vectors to indices.
///
/// Hyperplanes are indexed by their normal vectors, so the same table
/// enumerates both.
#[derive(Clone, Debug)]
pub struct ProjSpace {
    ctx: FieldCtx,
    r: usize,
    points: Vec<Elem>,
    lookup: Vec<u32>,
}

impl ProjSpace {
    pub fn new(ctx: &FieldCtx, r: usize) -> Result<Self> {
        let q = ctx.q() as usize;
        let total = q
            .checked_pow(r as u32)
            .filter(|&t| t <= MAX_VECTORS)
            .ok_or_else(|| Error::InvalidSystem(format!("GF({q})^{r} is too large to enumerate")))?;
        let mut lookup = vec![u32::MAX; total];
        let mut points = Vec::new();
        let mut count = 0u32;
        let mut v = vec![Elem::ZERO; r];
        for key in 0..total {
            let mut k = key;
            for x in v.iter_mut().rev() {
                *x = Elem((k % q) as u16);
                k /= q;
            }
            if v.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE) {
                lookup[key] = count;
                points.extend_from_slice(&v);
                count += 1;
            }
        }
        Ok(ProjSpace { ctx: ctx.clone(), r, points, lookup })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ambient(&self) -> usize {
        self.r
    }

    /// Number of points, which is also the number of hyperplanes.
    pub fn len(&self) -> usize {
        self.points.len() / self.r.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[Elem] {
        &self.points[i * self.r..(i + 1) * self.r]
    }

    /// Index of the point spanned by a nonzero vector.
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        let lead = *v.iter().find(|e| !e.is_zero())?;
        let key = if lead == Elem::ONE {
            self.key(v)
        } else {
            self.key(&normalize(&self.ctx, v)?)
        };
        Some(self.lookup[key] as usize)
    }

    fn key(&self, v: &[Elem]) -> usize {
        let q = self.ctx.q() as usize;
        v.iter().fold(0, |acc, e| acc * q + e.index())
    }

    /// Indices of the points lying in `s`.
    pub fn points_of(&self, s: &Subspace) -> Vec<u32> {
        let mut out = Vec::with_capacity(gauss_count(self.ctx.q() as u64, s.dim() as u32) as usize);
        s.for_each_point(&self.ctx, |v| out.push(self.lookup[self.key(v)]));
        out
    }

    /// Indices of the hyperplanes containing `s`.
    pub fn hyperplanes_containing(&self, s: &Subspace) -> Vec<u32> {
        self.points_of(&s.dual(&self.ctx))
    }

    pub fn point_subspace(&self, i: usize) -> Subspace {
        Subspace::from_rref_unchecked(Matrix::from_flat(1, self.r, self.point(i).to_vec()).expect("point width"))
    }

    /// The hyperplane with normal vector number `i`, as a subspace.
    pub fn hyperplane_subspace(&self, i: usize) -> Subspace {
        self.point_subspace(i).dual(&self.ctx)
    }
}

/// Lazily enumerates all `k`-subspaces of `GF(q)^r` by pivot pattern and
/// free entries, in a deterministic order.
pub struct SubspaceIter {
    ctx: FieldCtx,
    r: usize,
    k: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    counter: Vec<u16>,
    fresh: bool,
}

impl SubspaceIter {
    pub fn new(ctx: &FieldCtx, r: usize, k: usize) -> Self {
        let pivots = (k <= r).then(|| (0..k).collect::<Vec<_>>());
        let mut it = SubspaceIter { ctx: ctx.clone(), r, k, pivots, free: Vec::new(), counter: Vec::new(), fresh: true };
        it.reset_pattern();
        it
    }

    fn reset_pattern(&mut self) {
        self.free.clear();
        if let Some(p) = &self.pivots {
            for (i, &c) in p.iter().enumerate() {
                for j in c + 1..self.r {
                    if !p.contains(&j) {
                        self.free.push((i, j));
                    }
                }
            }
        }
        self.counter = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn next_pattern(&mut self) {
        let Some(p) = self.pivots.as_mut() else { return };
        let (k, r) = (self.k, self.r);
        let mut i = k;
        while i > 0 {
            i -= 1;
            if p[i] < r - k + i {
                p[i] += 1;
                for j in i + 1..k {
                    p[j] = p[j - 1] + 1;
                }
                self.reset_pattern();
                return;
            }
        }
        self.pivots = None;
    }

    fn build(&self) -> Subspace {
        let p = self.pivots.as_ref().expect("active pattern");
        let mut m = Matrix::zeros(self.k, self.r);
        for (i, &c) in p.iter().enumerate() {
            m.set(i, c, Elem::ONE);
        }
        for (&(i, j), &v) in self.free.iter().zip(&self.counter) {
            m.set(i, j, Elem(v));
        }
        Subspace::from_rref_unchecked(m)
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            self.pivots.as_ref()?;
            if self.fresh {
                self.fresh = false;
                return Some(self.build());
            }
            let q = self.ctx.q() as u16;
            let mut carry = true;
            for c in self.counter.iter_mut().rev() {
                *c += 1;
                if *c < q {
                    carry = false;
                    break;
                }
                *c = 0;
            }
            if !carry {
                return Some(self.build());
            }
            self.next_pattern();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    fn ints(ctx: &FieldCtx, rows: &[&[i64]]) -> Vec<Vec<Elem>> {
        rows.iter().map(|r| r.iter().map(|&x| ctx.from_int(x)).collect()).collect()
    }

    #[test]
    fn rref_small_cases() {
        let f2 = gf(2);
        let m = Matrix::from_rows(2, &ints(&f2, &[&[0, 1], &[1, 0]])).unwrap();
        assert!(m.rref(&f2).0.is_identity());
        let f3 = gf(3);
        let m = Matrix::from_rows(2, &ints(&f3, &[&[2, 2], &[1, 1]])).unwrap();
        let (red, piv) = m.rref(&f3);
        assert_eq!(red, Matrix::from_rows(2, &ints(&f3, &[&[1, 1]])).unwrap());
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn rref_of_gf4_generator() {
        let f4 = gf(4);
        let t = |s: &str| f4.parse_token(s).unwrap();
        let rows = vec![
            vec![t("0"), t("1"), t("1"), t("1"), t("1")],
            vec![t("1"), t("0"), t("1"), t("w"), t("v")],
        ];
        let (red, piv) = Matrix::from_rows(5, &rows).unwrap().rref(&f4);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(red.row(0), rows[1].as_slice());
        assert_eq!(red.row(1), rows[0].as_slice());
    }

    #[test]
    fn point_counts() {
        assert_eq!(ProjSpace::new(&gf(2), 3).unwrap().len(), 7);
        assert_eq!(ProjSpace::new(&gf(4), 5).unwrap().len(), 341);
        assert_eq!(ProjSpace::new(&gf(3), 5).unwrap().len(), 121);
        assert_eq!(ProjSpace::new(&gf(2), 4).unwrap().len(), 15);
        assert_eq!(ProjSpace::new(&gf(5), 5).unwrap().len(), 781);
    }

    #[test]
    fn points_are_lexicographic_and_normalized() {
        let ps = ProjSpace::new(&gf(3), 3).unwrap();
        let pts: Vec<Vec<Elem>> = (0..ps.len()).map(|i| ps.point(i).to_vec()).collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(ps.index_of(p), Some(i));
            let scaled: Vec<Elem> = p.iter().map(|&e| ps.ctx().mul(e, ps.ctx().from_int(2))).collect();
            assert_eq!(ps.index_of(&scaled), Some(i));
        }
    }

    #[test]
    fn subspace_from_rows_cases() {
        let f2 = gf(2);
        assert_eq!(Subspace::from_rows(&f2, 5, &ints(&f2, &[&[0; 5]])).unwrap().dim(), 0);
        let plane = Subspace::from_rows(&f2, 5, &ints(&f2, &[&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]])).unwrap();
        assert_eq!(plane.dim(), 2);
        let f3 = gf(3);
        let line = Subspace::from_rows(&f3, 5, &ints(&f3, &[&[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]])).unwrap();
        assert_eq!(line.dim(), 2);
        assert_eq!(line.pivots(), vec![3, 4]);
        let normal = ints(&f3, &[&[1, 0, 0, 0, 0]]).remove(0);
        assert!(line.in_hyperplane(&f3, &normal).unwrap());
        assert!(Subspace::zero(5).in_hyperplane(&f3, &normal).unwrap());
        assert!(!Subspace::full(5).in_hyperplane(&f3, &normal).unwrap());
        assert!(line.in_hyperplane(&f3, &normal[..4]).is_err());
    }

    #[test]
    fn span_and_intersection() {
        let f2 = gf(2);
        let ps = ProjSpace::new(&f2, 4).unwrap();
        let (a, b) = (ps.point_subspace(0), ps.point_subspace(5));
        assert_eq!(a.span(&f2, &b).unwrap().dim(), 2);
        assert_eq!(a.intersect_dim(&f2, &b).unwrap(), 0);
        assert_eq!(a.span(&f2, &a).unwrap(), a);
        assert_eq!(a.intersect_dim(&f2, &a).unwrap(), 1);
    }

    #[test]
    fn projection_cases() {
        let f2 = gf(2);
        let line = Subspace::from_rows(&f2, 4, &ints(&f2, &[&[1, 0, 0, 0], &[0, 1, 1, 0]])).unwrap();
        assert_eq!(line.project_through(&f2, &Subspace::zero(4)).unwrap(), line);
        assert_eq!(line.project_through(&f2, &line).unwrap().dim(), 0);
        let p = Subspace::from_rows(&f2, 4, &ints(&f2, &[&[1, 1, 1, 0]])).unwrap();
        let img = line.project_through(&f2, &p).unwrap();
        assert_eq!((img.ambient(), img.dim()), (3, 1));
    }

    #[test]
    fn dual_cases() {
        let f2 = gf(2);
        assert_eq!(Subspace::full(4).dual(&f2).dim(), 0);
        assert_eq!(Subspace::zero(3).dual(&f2).dim(), 3);
        let p = Subspace::from_rows(&f2, 3, &ints(&f2, &[&[1, 1, 0]])).unwrap();
        let d = p.dual(&f2);
        assert_eq!(d.dim(), 2);
        assert_eq!(d.dual(&f2), p);
    }

    #[test]
    fn subspace_iterator_counts() {
        for (q, r, k) in [(2u32, 4usize, 2usize), (3, 5, 2), (2, 5, 3), (4, 3, 1), (2, 3, 0), (2, 3, 3)] {
            let ctx = gf(q);
            let all: Vec<Subspace> = SubspaceIter::new(&ctx, r, k).collect();
            assert_eq!(all.len() as u64, gaussian_binomial(q as u64, r as u32, k as u32));
            let set: std::collections::HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            for s in &all {
                assert_eq!(Subspace::from_matrix(&ctx, s.basis()), *s);
            }
        }
        assert_eq!(SubspaceIter::new(&gf(2), 2, 3).count(), 0);
    }

    #[test]
    fn inverse_round_trip() {
        let f5 = gf(5);
        let m = Matrix::from_rows(3, &ints(&f5, &[&[1, 2, 0], &[0, 1, 4], &[3, 0, 2]])).unwrap();
        let inv = m.inverse(&f5).unwrap();
        assert!(m.mul(&f5, &inv).unwrap().is_identity());
        let singular = Matrix::from_rows(2, &ints(&f5, &[&[1, 2], &[2, 4]])).unwrap();
        assert!(matches!(singular.inverse(&f5), Err(Error::Singular)));
    }
}
