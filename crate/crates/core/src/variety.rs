//! One block of the construction: the common zeros in `F^m` of
//! `f_i(x) = sum_j A[i][j] * x_j^{d_j}` for `i < k`.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{for_each_parameter, Matrix};
use crate::params::EvasiveParams;

/// Upper bound on points visited by exhaustive enumeration.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

pub type Point = Vec<FieldElement>;

#[derive(Clone, Debug)]
pub struct BlockVariety {
    ctx: FieldCtx,
    k: usize,
    m: usize,
    degrees: Vec<u64>,
    matrix: Matrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
    inv_exponents: Vec<u64>,
    /// Rows are the vectors `u_i` with `u_i * A' = e_i`, where `A'` is the
    /// restriction of the matrix to the pivot columns.
    pivot_inverse: Matrix,
}

impl BlockVariety {
    pub fn new(params: &EvasiveParams) -> Result<Self> {
        let ctx = params.ctx();
        let k = params.k();
        let m = params.m();
        let matrix = params.matrix();
        let pivots = params.pivot_set().to_vec();
        let all_rows: Vec<usize> = (0..k).collect();
        let pivot_minor = matrix.submatrix(&all_rows, &pivots);
        let pivot_inverse = pivot_minor.inverse().map_err(|_| {
            Error::Invariant("pivot minor is singular; matrix is not strongly regular".into())
        })?;
        let free = (0..m).filter(|j| !pivots.contains(j)).collect();
        Ok(Self {
            ctx,
            k,
            m,
            degrees: params.degrees().to_vec(),
            matrix,
            pivots,
            free,
            inv_exponents: params.inv_exponents().to_vec(),
            pivot_inverse,
        })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees[0]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates that carry the message, `[m] \ J`, ascending.
    pub fn free_coordinates(&self) -> &[usize] {
        &self.free
    }

    pub fn pivot_inverse(&self) -> &Matrix {
        &self.pivot_inverse
    }

    /// `p^(m-k)`, saturating.
    pub fn expected_size(&self) -> u128 {
        (self.ctx.modulus() as u128)
            .checked_pow((self.m - self.k) as u32)
            .unwrap_or(u128::MAX)
    }

    fn check_arity(&self, x: &[FieldElement], expected: usize) -> Result<()> {
        if x.len() != expected {
            return Err(Error::Arity {
                expected,
                got: x.len(),
            });
        }
        for v in x {
            if v.modulus() != self.ctx.modulus() {
                return Err(Error::ModulusMismatch {
                    left: self.ctx.modulus(),
                    right: v.modulus(),
                });
            }
        }
        Ok(())
    }

    fn monomials(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().zip(&self.degrees).map(|(&v, &d)| v.pow(d)).collect()
    }

    /// `(f_1(x), ..., f_k(x))`.
    pub fn evaluate(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check_arity(x, self.m)?;
        self.matrix.mul_vec(&self.monomials(x))
    }

    pub fn member(&self, x: &[FieldElement]) -> Result<bool> {
        Ok(self.evaluate(x)?.iter().all(|v| v.is_zero()))
    }

    /// Membership without arity checks, for hot loops over known-good input.
    pub(crate) fn member_unchecked(&self, x: &[FieldElement]) -> bool {
        let mono = self.monomials(x);
        (0..self.k).all(|i| {
            self.matrix
                .row(i)
                .iter()
                .zip(&mono)
                .fold(self.ctx.zero(), |acc, (&a, &v)| acc + a * v)
                .is_zero()
        })
    }

    /// Places `z` on the free coordinates and solves for the pivot
    /// coordinates: `A' y = -sum_{j free} A[.][j] z_j^{d_j}`, then
    /// `x_{j_i} = y_i^{1/d_{j_i}}`.
    pub fn encode_block(&self, z: &[FieldElement]) -> Result<Point> {
        self.check_arity(z, self.m - self.k)?;
        let mut x = vec![self.ctx.zero(); self.m];
        let mut rhs = vec![self.ctx.zero(); self.k];
        for (&j, &zj) in self.free.iter().zip(z) {
            x[j] = zj;
            let mono = zj.pow(self.degrees[j]);
            for (i, b) in rhs.iter_mut().enumerate() {
                *b -= self.matrix.get(i, j) * mono;
            }
        }
        let y = self.pivot_inverse.mul_vec(&rhs)?;
        for ((&j, &yi), &e) in self.pivots.iter().zip(&y).zip(&self.inv_exponents) {
            x[j] = if yi.is_zero() { yi } else { yi.pow(e) };
        }
        debug_assert!(self.member_unchecked(&x));
        Ok(x)
    }

    /// Projection onto the free coordinates; inverse of [`encode_block`].
    ///
    /// [`encode_block`]: BlockVariety::encode_block
    pub fn decode_block(&self, x: &[FieldElement]) -> Result<Point> {
        if !self.member(x)? {
            return Err(Error::NotAMember);
        }
        Ok(self.free.iter().map(|&j| x[j]).collect())
    }

    /// All members of `F^m` in lexicographic order. Refuses when `p^m`
    /// exceeds [`ENUMERATION_LIMIT`].
    pub fn enumerate_block(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for_each_parameter(self.ctx, self.m, ENUMERATION_LIMIT, |x| {
            if self.member_unchecked(x) {
                out.push(x.to_vec());
            }
        })?;
        Ok(out)
    }
}
