//! Dense matrices and affine subspaces over `F_p`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Upper bound on the number of minors `is_strongly_regular` will examine.
pub const MINOR_LIMIT: u128 = 1_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        Self {
            ctx,
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have `cols` entries.
    pub fn from_rows(ctx: FieldCtx, cols: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Arity {
                    expected: cols,
                    got: row.len(),
                });
            }
            for x in &row {
                if x.modulus() != ctx.modulus() {
                    return Err(Error::ModulusMismatch {
                        left: ctx.modulus(),
                        right: x.modulus(),
                    });
                }
            }
            data.extend(row);
        }
        Ok(Self {
            ctx,
            rows: n_rows,
            cols,
            data,
        })
    }

    pub fn from_u64_rows(ctx: FieldCtx, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| ctx.try_elem(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ctx, cols, rows)
    }

    #[inline]
    pub fn ctx(&self) -> FieldCtx {
        self.ctx
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

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_u64_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.value()).collect())
            .collect()
    }

    /// Submatrix on the given rows and columns, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.ctx, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::Arity {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.ctx, self.row(i), v)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Arity {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(l, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, pr);
            let inv = m.get(lead, col).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(lead, j) * inv;
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(r, j) - factor * m.get(lead, j);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::Parameter("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = self.ctx.one();
        for col in 0..m.cols {
            let Some(pr) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(self.ctx.zero());
            };
            if pr != col {
                m.swap_rows(col, pr);
                det = -det;
            }
            let pivot = m.get(col, col);
            det *= pivot;
            let inv = pivot.inv()?;
            for r in col + 1..m.rows {
                let factor = m.get(r, col) * inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j) - factor * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Parameter("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, self.ctx.one());
        }
        let (r, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
            return Err(Error::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.submatrix(&rows, &cols))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

pub fn dot(ctx: FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(ctx.zero(), |acc, (&x, &y)| acc + x * y)
}

/// `A[i][j] = gammas[j]^(i+1)` for `i < k`.
pub fn vandermonde(ctx: FieldCtx, k: usize, gammas: &[FieldElement]) -> Result<Matrix> {
    let m = gammas.len();
    if m as u64 > ctx.group_order() {
        return Err(Error::Parameter(format!(
            "{m} distinct nonzero generators do not exist in F_{}",
            ctx.modulus()
        )));
    }
    for (j, g) in gammas.iter().enumerate() {
        if g.modulus() != ctx.modulus() {
            return Err(Error::ModulusMismatch {
                left: ctx.modulus(),
                right: g.modulus(),
            });
        }
        if g.is_zero() {
            return Err(Error::Parameter(format!("generator {j} is zero")));
        }
        if gammas[..j].contains(g) {
            return Err(Error::Parameter(format!("generator {g} repeated")));
        }
    }
    let mut a = Matrix::zeros(ctx, k, m);
    for (j, &g) in gammas.iter().enumerate() {
        let mut power = g;
        for i in 0..k {
            a.set(i, j, power);
            power *= g;
        }
    }
    Ok(a)
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Lexicographic enumeration of the `r`-subsets of `0..n`.
pub(crate) fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Checks that for every `r <= rows`, every `r x r` minor taken from the
/// leading `r` rows is nonsingular. This is the property the construction
/// consumes: restricting to the first `r` rows yields an `r`-regular matrix.
///
/// Exhaustive, so it refuses inputs with more than [`MINOR_LIMIT`] minors.
pub fn is_strongly_regular(a: &Matrix) -> Result<bool> {
    if a.rows() > a.cols() {
        return Ok(false);
    }
    let total: u128 = (1..=a.rows()).map(|r| binomial(a.cols(), r)).sum();
    if total > MINOR_LIMIT {
        return Err(Error::GuardExceeded {
            what: "minor count",
            count: total,
            limit: MINOR_LIMIT,
        });
    }
    for r in 1..=a.rows() {
        let rows: Vec<usize> = (0..r).collect();
        let mut ok = true;
        for_each_combination(a.cols(), r, |cols| {
            let det = a
                .submatrix(&rows, cols)
                .determinant()
                .expect("square submatrix");
            ok = !det.is_zero();
            ok
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves `A x = b` for square regular `A`.
pub fn solve(a: &Matrix, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if a.rows() != a.cols() {
        return Err(Error::Parameter("solve requires a square matrix".into()));
    }
    if b.len() != a.rows() {
        return Err(Error::Arity {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let n = a.rows();
    let ctx = a.ctx();
    let mut aug = Matrix::zeros(ctx, n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n, b[i]);
    }
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return Err(Error::Singular);
    }
    Ok((0..n).map(|i| r.get(i, n)).collect())
}

/// Affine subspace `offset + span(basis rows)` of `F^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSubspace {
    offset: Vec<FieldElement>,
    basis: Matrix,
}

impl AffineSubspace {
    /// Rejects bases whose rows are linearly dependent.
    pub fn new(offset: Vec<FieldElement>, basis: Matrix) -> Result<Self> {
        if basis.cols() != offset.len() {
            return Err(Error::Arity {
                expected: offset.len(),
                got: basis.cols(),
            });
        }
        for x in &offset {
            if x.modulus() != basis.ctx().modulus() {
                return Err(Error::ModulusMismatch {
                    left: basis.ctx().modulus(),
                    right: x.modulus(),
                });
            }
        }
        if basis.rank() != basis.rows() {
            return Err(Error::Parameter(format!(
                "basis of {} rows has rank {}",
                basis.rows(),
                basis.rank()
            )));
        }
        Ok(Self { offset, basis })
    }

    pub fn point(offset: Vec<FieldElement>, ctx: FieldCtx) -> Self {
        let n = offset.len();
        Self {
            offset,
            basis: Matrix::zeros(ctx, 0, n),
        }
    }

    /// A uniformly drawn basis of dimension `dim`, redrawn until independent,
    /// and a uniform offset.
    pub fn random<R: Rng + ?Sized>(ctx: FieldCtx, n: usize, dim: usize, rng: &mut R) -> Result<Self> {
        let offset = random_vector(ctx, n, rng);
        Self::random_through(ctx, offset, dim, rng)
    }

    /// A random `dim`-dimensional subspace that contains `point`. The stored
    /// offset is shifted by a random combination of the directions.
    pub fn random_through<R: Rng + ?Sized>(
        ctx: FieldCtx,
        point: Vec<FieldElement>,
        dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let n = point.len();
        if dim > n {
            return Err(Error::Dimension { dim, max: n });
        }
        let basis = loop {
            let rows = (0..dim).map(|_| random_vector(ctx, n, rng)).collect();
            let b = Matrix::from_rows(ctx, n, rows)?;
            if b.rank() == dim {
                break b;
            }
        };
        let mut offset = point;
        for i in 0..dim {
            let c = ctx.elem(rng.gen_range(0..ctx.modulus()));
            for (o, &b) in offset.iter_mut().zip(basis.row(i)) {
                *o += c * b;
            }
        }
        Ok(Self { offset, basis })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.basis.ctx()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn offset(&self) -> &[FieldElement] {
        &self.offset
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `offset + sum params[i] * basis[i]`.
    pub fn at(&self, params: &[FieldElement]) -> Vec<FieldElement> {
        debug_assert_eq!(params.len(), self.dim());
        let mut x = self.offset.clone();
        for (i, &t) in params.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for (xj, &b) in x.iter_mut().zip(self.basis.row(i)) {
                *xj += t * b;
            }
        }
        x
    }

    pub fn contains(&self, x: &[FieldElement]) -> bool {
        if x.len() != self.ambient_dim() {
            return false;
        }
        let diff: Vec<FieldElement> = x.iter().zip(&self.offset).map(|(&a, &b)| a - b).collect();
        let mut rows = self.basis.row_vecs();
        rows.push(diff);
        let m = Matrix::from_rows(self.ctx(), self.ambient_dim(), rows).expect("consistent widths");
        m.rank() == self.dim()
    }

    /// Every point of the subspace, in parameter-odometer order. Guarded by
    /// `limit` on `p^dim`.
    pub fn points(&self, limit: u128) -> Result<Vec<Vec<FieldElement>>> {
        let mut out = Vec::new();
        for_each_parameter(self.ctx(), self.dim(), limit, |t| {
            out.push(self.at(t));
        })?;
        Ok(out)
    }
}

pub(crate) fn random_vector<R: Rng + ?Sized>(ctx: FieldCtx, n: usize, rng: &mut R) -> Vec<FieldElement> {
    (0..n).map(|_| ctx.elem(rng.gen_range(0..ctx.modulus()))).collect()
}

/// Calls `f` on every vector of `F_p^dim` in lexicographic order.
pub(crate) fn for_each_parameter(
    ctx: FieldCtx,
    dim: usize,
    limit: u128,
    mut f: impl FnMut(&[FieldElement]),
) -> Result<()> {
    let count = (ctx.modulus() as u128)
        .checked_pow(dim as u32)
        .unwrap_or(u128::MAX);
    if count > limit {
        return Err(Error::GuardExceeded {
            what: "points to enumerate",
            count,
            limit,
        });
    }
    let mut t = vec![ctx.zero(); dim];
    loop {
        f(&t);
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            let next = t[i].value() + 1;
            if next < ctx.modulus() {
                t[i] = ctx.elem(next);
                break;
            }
            t[i] = ctx.zero();
        }
    }
}

/// Upper-echelon parametrization of an affine subspace.
///
/// Coordinate `j` of the image is `offset[j] + sum_i coeffs[i][j] * t_i`.
/// Pivot coordinate `pivots[i]` equals `t_i` exactly, and every coordinate
/// before `pivots[i]` is independent of `t_i, t_{i+1}, ...`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EchelonMap {
    pivots: Vec<usize>,
    offset: Vec<FieldElement>,
    coeffs: Matrix,
}

impl EchelonMap {
    pub fn ctx(&self) -> FieldCtx {
        self.coeffs.ctx()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn offset(&self) -> &[FieldElement] {
        &self.offset
    }

    /// Row `i` holds the coefficient of `t_i` in every coordinate.
    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    /// Affine form of coordinate `j`: constant term and one coefficient per
    /// parameter.
    pub fn coordinate(&self, j: usize) -> (FieldElement, Vec<FieldElement>) {
        (self.offset[j], self.coeffs.column(j))
    }

    pub fn apply(&self, t: &[FieldElement]) -> Vec<FieldElement> {
        debug_assert_eq!(t.len(), self.dim());
        let mut x = self.offset.clone();
        for (i, &ti) in t.iter().enumerate() {
            if ti.is_zero() {
                continue;
            }
            for (xj, &c) in x.iter_mut().zip(self.coeffs.row(i)) {
                *xj += ti * c;
            }
        }
        x
    }

    /// Parameters of a point in the image: its pivot coordinates.
    pub fn parameters_of(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        self.pivots.iter().map(|&j| x[j]).collect()
    }

    pub fn to_subspace(&self) -> AffineSubspace {
        AffineSubspace {
            offset: self.offset.clone(),
            basis: self.coeffs.clone(),
        }
    }

    /// Splits off coordinates `0..width`. Returns the map restricted to those
    /// coordinates (parameters whose pivot lies inside) and the number of such
    /// parameters. Parameters with later pivots vanish on the head because
    /// the coefficient rows are in echelon form.
    pub fn head(&self, width: usize) -> EchelonMap {
        let r = self.pivots.iter().take_while(|&&j| j < width).count();
        let rows: Vec<usize> = (0..r).collect();
        let cols: Vec<usize> = (0..width).collect();
        EchelonMap {
            pivots: self.pivots[..r].to_vec(),
            offset: self.offset[..width].to_vec(),
            coeffs: self.coeffs.submatrix(&rows, &cols),
        }
    }

    /// Fixes the parameters belonging to the head (`0..width`) to the values
    /// read off `head_point`, and returns the map on the remaining
    /// coordinates.
    pub fn tail_given(&self, width: usize, head_point: &[FieldElement]) -> EchelonMap {
        let r = self.pivots.iter().take_while(|&&j| j < width).count();
        let n = self.ambient_dim();
        let mut offset = self.offset[width..].to_vec();
        for i in 0..r {
            let t = head_point[self.pivots[i]];
            if t.is_zero() {
                continue;
            }
            for (o, &c) in offset.iter_mut().zip(&self.coeffs.row(i)[width..]) {
                *o += t * c;
            }
        }
        let rows: Vec<usize> = (r..self.dim()).collect();
        let cols: Vec<usize> = (width..n).collect();
        EchelonMap {
            pivots: self.pivots[r..].iter().map(|&j| j - width).collect(),
            offset,
            coeffs: self.coeffs.submatrix(&rows, &cols),
        }
    }
}

/// Rewrites `H` in upper-echelon form with the lexicographically earliest
/// pivots. The basis is row-reduced, and the offset is shifted so that it
/// vanishes on every pivot coordinate.
pub fn normalize(h: &AffineSubspace) -> EchelonMap {
    let (rref, pivots) = h.basis.rref();
    let r = pivots.len();
    let rows: Vec<usize> = (0..r).collect();
    let cols: Vec<usize> = (0..h.ambient_dim()).collect();
    let coeffs = rref.submatrix(&rows, &cols);
    let mut offset = h.offset.clone();
    for (i, &j) in pivots.iter().enumerate() {
        let c = offset[j];
        if c.is_zero() {
            continue;
        }
        for (o, &b) in offset.iter_mut().zip(coeffs.row(i)) {
            *o -= c * b;
        }
    }
    EchelonMap {
        pivots,
        offset,
        coeffs,
    }
}

/// Serialized form of an affine subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub p: u64,
    pub ambient_dim: usize,
    pub dim: usize,
    pub offset: Vec<u64>,
    pub basis: Vec<Vec<u64>>,
}

impl SubspaceFile {
    pub fn from_subspace(h: &AffineSubspace) -> Self {
        Self {
            p: h.ctx().modulus(),
            ambient_dim: h.ambient_dim(),
            dim: h.dim(),
            offset: h.offset.iter().map(|x| x.value()).collect(),
            basis: h.basis.to_u64_rows(),
        }
    }

    pub fn to_subspace(&self) -> Result<AffineSubspace> {
        let ctx = FieldCtx::new(self.p)?;
        if self.offset.len() != self.ambient_dim {
            return Err(Error::Arity {
                expected: self.ambient_dim,
                got: self.offset.len(),
            });
        }
        if self.basis.len() != self.dim {
            return Err(Error::Parameter(format!(
                "dim is {} but {} basis rows given",
                self.dim,
                self.basis.len()
            )));
        }
        let offset = self
            .offset
            .iter()
            .map(|&v| ctx.try_elem(v))
            .collect::<Result<Vec<_>>>()?;
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&v| ctx.try_elem(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let basis = Matrix::from_rows(ctx, self.ambient_dim, rows)?;
        AffineSubspace::new(offset, basis)
    }
}
