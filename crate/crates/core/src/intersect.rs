//! Computing `S ∩ H` for an affine subspace `H` of dimension at most `k`.
//!
//! `H` is put in echelon form and processed one block at a time. The
//! parameters whose pivots fall in the current block span the projection
//! `T` of `H` onto that block; each point of `V ∩ T` fixes those parameters
//! and leaves a lower-dimensional subspace on the remaining blocks.
//!
//! Restricted to a block, the system is brought to triangular form: mixing
//! the equations with the inverse of the pivot minor and substituting
//! `t_i -> t_i^{D_i}` yields `h_i = t_i^D + r_i` with `deg r_i < D`, which
//! bounds the solution count by `D^r`. Note that the substitution can only
//! increase the number of solutions over the algebraic closure (each
//! `D_i`-th root of a solution is a solution), so the bound transfers back.

use crate::error::{Error, Result};
use crate::evasive::EvasiveSet;
use crate::field::FieldElement;
use crate::linalg::{for_each_parameter, normalize, AffineSubspace, EchelonMap, Matrix};
use crate::poly::MPoly;
use crate::variety::{BlockVariety, Point, ENUMERATION_LIMIT};

/// Restriction of the first `r` block equations to an `r`-dimensional
/// echelon map, in triangular form.
#[derive(Clone, Debug)]
pub struct TriangularSystem {
    pivots: Vec<usize>,
    mixing: Matrix,
    cross: Matrix,
    degree: u64,
    exponents: Vec<u64>,
    restricted: Vec<MPoly>,
    polys: Vec<MPoly>,
}

impl TriangularSystem {
    /// Pivot coordinates `j_1 < ... < j_r` of the echelon map.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Rows `u_i` with `u_i A' = e_i`.
    pub fn mixing(&self) -> &Matrix {
        &self.mixing
    }

    /// Cross coefficient `c_ij = <u_i, A[.][j]>`. On pivot columns this is
    /// the identity.
    pub fn cross(&self, i: usize, j: usize) -> FieldElement {
        self.cross.get(i, j)
    }

    /// `D = prod_i d_{j_i}`; `1` when `r = 0`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// `D_i = D / d_{j_i}`.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `g_i(t) = <u_i, f(l(t))>`, before the power substitution.
    pub fn restricted(&self) -> &[MPoly] {
        &self.restricted
    }

    /// `h_i(t) = g_i(t_1^{D_1}, ..., t_r^{D_r})`.
    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    /// `r_i = h_i - t_i^D`.
    pub fn residual(&self, i: usize) -> MPoly {
        let r = self.dim();
        let ctx = self.mixing.ctx();
        let mut e = vec![0; r];
        e[i] = self.degree;
        self.polys[i].sub(&MPoly::monomial(ctx, e, ctx.one()))
    }

    /// Checks `h_i = t_i^D + r_i` with `deg r_i < D` for every `i`.
    pub fn check_degree_invariant(&self) -> Result<()> {
        for i in 0..self.dim() {
            if let Some(deg) = self.residual(i).total_degree() {
                if deg >= self.degree {
                    return Err(Error::Invariant(format!(
                        "residual {i} has degree {deg} >= D = {}",
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Restricts the block equations to `emap` and triangularizes them.
pub fn triangularize(v: &BlockVariety, emap: &EchelonMap) -> Result<TriangularSystem> {
    let ctx = v.ctx();
    if emap.ambient_dim() != v.m() {
        return Err(Error::Arity {
            expected: v.m(),
            got: emap.ambient_dim(),
        });
    }
    let r = emap.dim();
    if r > v.k() {
        return Err(Error::Dimension { dim: r, max: v.k() });
    }
    let pivots = emap.pivots().to_vec();
    let rows: Vec<usize> = (0..r).collect();
    let all_cols: Vec<usize> = (0..v.m()).collect();
    let leading = v.matrix().submatrix(&rows, &all_cols);
    let mixing = leading.submatrix(&all_cols[..r], &pivots).inverse().map_err(|_| {
        Error::Invariant("leading pivot minor is singular; matrix is not strongly regular".into())
    })?;
    let cross = mixing.mul(&leading)?;
    for i in 0..r {
        for (l, &j) in pivots.iter().enumerate() {
            let want = if i == l { ctx.one() } else { ctx.zero() };
            if cross.get(i, j) != want {
                return Err(Error::Invariant("mixing rows do not invert the pivot minor".into()));
            }
        }
    }

    let degrees = v.degrees();
    let powered: Vec<Option<MPoly>> = (0..v.m())
        .map(|j| {
            if pivots.contains(&j) {
                return None;
            }
            let (c, coeffs) = emap.coordinate(j);
            Some(MPoly::affine(ctx, c, &coeffs).pow(degrees[j]))
        })
        .collect();

    let mut restricted = Vec::with_capacity(r);
    for (i, &ji) in pivots.iter().enumerate() {
        let mut e = vec![0; r];
        e[i] = degrees[ji];
        let mut g = MPoly::monomial(ctx, e, ctx.one());
        for (j, lp) in powered.iter().enumerate() {
            if let Some(lp) = lp {
                g = g.add(&lp.scale(cross.get(i, j)));
            }
        }
        restricted.push(g);
    }

    let degree = pivots.iter().try_fold(1u64, |acc, &j| {
        acc.checked_mul(degrees[j])
            .ok_or_else(|| Error::Parameter("product of pivot degrees overflows".into()))
    })?;
    let exponents: Vec<u64> = pivots.iter().map(|&j| degree / degrees[j]).collect();
    let polys = restricted
        .iter()
        .map(|g| g.substitute_powers(&exponents))
        .collect();

    let system = TriangularSystem {
        pivots,
        mixing,
        cross,
        degree,
        exponents,
        restricted,
        polys,
    };
    system.check_degree_invariant()?;
    Ok(system)
}

/// Finds `V ∩ image(map)` for one block.
pub trait BlockSolver {
    fn solve(&self, v: &BlockVariety, map: &EchelonMap) -> Result<Vec<Point>>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SolverKind {
    /// Scans all `p^r` parameter values.
    #[default]
    Exhaustive,
    /// Root finding on the single restricted equation; only for `r <= 1`.
    Univariate,
}

impl BlockSolver for SolverKind {
    fn solve(&self, v: &BlockVariety, map: &EchelonMap) -> Result<Vec<Point>> {
        if map.ambient_dim() != v.m() {
            return Err(Error::Arity {
                expected: v.m(),
                got: map.ambient_dim(),
            });
        }
        if map.dim() > v.k() {
            return Err(Error::Dimension {
                dim: map.dim(),
                max: v.k(),
            });
        }
        let mut out = match self {
            SolverKind::Exhaustive => exhaustive(v, map)?,
            SolverKind::Univariate => univariate(v, map)?,
        };
        out.sort();
        Ok(out)
    }
}

fn exhaustive(v: &BlockVariety, map: &EchelonMap) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for_each_parameter(v.ctx(), map.dim(), ENUMERATION_LIMIT, |t| {
        let x = map.apply(t);
        if v.member_unchecked(&x) {
            out.push(x);
        }
    })?;
    Ok(out)
}

fn univariate(v: &BlockVariety, map: &EchelonMap) -> Result<Vec<Point>> {
    match map.dim() {
        0 => {
            let x = map.apply(&[]);
            Ok(if v.member_unchecked(&x) { vec![x] } else { vec![] })
        }
        1 => {
            let system = triangularize(v, map)?;
            let h = system.polys()[0].to_univariate()?;
            Ok(h.roots()?
                .into_iter()
                .map(|t| map.apply(&[t]))
                .filter(|x| v.member_unchecked(x))
                .collect())
        }
        r => Err(Error::SolverNotApplicable(format!(
            "univariate solver needs a restriction of dimension <= 1, got {r}"
        ))),
    }
}

/// `V ∩ H` for an affine subspace `H` of `F^m` of dimension at most `k`,
/// lexicographically sorted.
pub fn solve_block(v: &BlockVariety, h: &AffineSubspace) -> Result<Vec<Point>> {
    solve_block_with(v, h, &SolverKind::Exhaustive)
}

pub fn solve_block_with(v: &BlockVariety, h: &AffineSubspace, solver: &dyn BlockSolver) -> Result<Vec<Point>> {
    check_field(v, h)?;
    if h.ambient_dim() != v.m() {
        return Err(Error::Arity {
            expected: v.m(),
            got: h.ambient_dim(),
        });
    }
    let map = normalize(h);
    let out = solve_with_fallback(solver, v, &map)?;
    let bound = (v.max_degree() as u128).saturating_pow(map.dim() as u32);
    if out.len() as u128 > bound {
        return Err(Error::Invariant(format!(
            "{} solutions exceed the bound {bound}",
            out.len()
        )));
    }
    Ok(out)
}

fn check_field(v: &BlockVariety, h: &AffineSubspace) -> Result<()> {
    if h.ctx() != v.ctx() {
        return Err(Error::ModulusMismatch {
            left: v.ctx().modulus(),
            right: h.ctx().modulus(),
        });
    }
    Ok(())
}

fn solve_with_fallback(solver: &dyn BlockSolver, v: &BlockVariety, map: &EchelonMap) -> Result<Vec<Point>> {
    match solver.solve(v, map) {
        Err(Error::SolverNotApplicable(_)) => SolverKind::Exhaustive.solve(v, map),
        other => other,
    }
}

/// `S ∩ H` together with the dimension of the projection of `H` on each
/// block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub points: Vec<Point>,
    pub level_dims: Vec<usize>,
}

/// `S ∩ H`, lexicographically sorted.
pub fn intersect_set(s: &EvasiveSet, h: &AffineSubspace) -> Result<Vec<Point>> {
    Ok(intersect_with(s, h, &SolverKind::Exhaustive)?.points)
}

/// Block-recursive intersection with a chosen per-block solver. Blocks the
/// solver cannot handle fall back to exhaustive search.
pub fn intersect_with(s: &EvasiveSet, h: &AffineSubspace, solver: &dyn BlockSolver) -> Result<Intersection> {
    let v = s.block();
    check_field(v, h)?;
    if h.ambient_dim() != s.n() {
        return Err(Error::Arity {
            expected: s.n(),
            got: h.ambient_dim(),
        });
    }
    let k = s.params().k();
    if h.dim() > k {
        return Err(Error::Dimension { dim: h.dim(), max: k });
    }
    let map = normalize(h);
    let m = v.m();
    let level_dims = (0..s.blocks())
        .map(|b| {
            map.pivots()
                .iter()
                .filter(|&&j| j >= b * m && j < (b + 1) * m)
                .count()
        })
        .collect();

    let mut points = recurse(v, &map, solver)?;
    points.sort();
    let bound = s.params().intersection_bound(h.dim());
    if points.len() as u128 > bound {
        return Err(Error::Invariant(format!(
            "|S ∩ H| = {} exceeds the bound {bound}",
            points.len()
        )));
    }
    Ok(Intersection { points, level_dims })
}

fn recurse(v: &BlockVariety, map: &EchelonMap, solver: &dyn BlockSolver) -> Result<Vec<Point>> {
    let m = v.m();
    let head = map.head(m);
    let first = solve_with_fallback(solver, v, &head)?;
    if map.ambient_dim() == m {
        return Ok(first);
    }
    let mut out = Vec::new();
    for x in first {
        let tail = map.tail_given(m, &x);
        for rest in recurse(v, &tail, solver)? {
            let mut full = x.clone();
            full.extend(rest);
            out.push(full);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evasive::EvasiveSet;
    use crate::field::FieldCtx;
    use crate::params::{gen_params, Coefficients, EvasiveParams};
    use crate::poly::count_common_zeros;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tiny_params(n: usize) -> EvasiveParams {
        EvasiveParams::new(
            7,
            1,
            2,
            n,
            vec![5, 2],
            Coefficients::Explicit(vec![vec![1, 1]]),
            vec![0],
        )
        .unwrap()
    }

    fn tiny_block() -> BlockVariety {
        BlockVariety::new(&tiny_params(2)).unwrap()
    }

    fn line(ctx: FieldCtx, offset: &[u64], dir: &[u64]) -> AffineSubspace {
        AffineSubspace::new(
            ctx.elems(offset),
            Matrix::from_u64_rows(ctx, &[dir.to_vec()]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn triangularize_diagonal_line() {
        let v = tiny_block();
        let c = v.ctx();
        let map = normalize(&line(c, &[0, 0], &[1, 1]));
        let sys = triangularize(&v, &map).unwrap();
        assert_eq!(sys.pivots(), &[0]);
        assert_eq!(sys.mixing().to_u64_rows(), vec![vec![1]]);
        assert_eq!(sys.degree(), 5);
        assert_eq!(sys.exponents(), &[1]);
        let mut expect = MPoly::monomial(c, vec![5], c.one());
        expect.add_term(vec![2], c.one());
        assert_eq!(sys.polys()[0], expect);
        assert_eq!(sys.residual(0).total_degree(), Some(2));
    }

    #[test]
    fn triangularize_shifted_line() {
        let v = tiny_block();
        let c = v.ctx();
        let map = normalize(&line(c, &[0, 3], &[1, 4]));
        let sys = triangularize(&v, &map).unwrap();
        // t^5 + (4t + 3)^2
        let lin = MPoly::affine(c, c.elem(3), &[c.elem(4)]);
        let expect = MPoly::monomial(c, vec![5], c.one()).add(&lin.pow(2));
        assert_eq!(sys.polys()[0], expect);
        assert_eq!(sys.residual(0).total_degree(), Some(2));
        for t in c.iter() {
            let x = map.apply(&[t]);
            assert_eq!(sys.polys()[0].evaluate(&[t]), v.evaluate(&x).unwrap()[0]);
        }
    }

    #[test]
    fn triangularize_point_is_empty() {
        let v = tiny_block();
        let c = v.ctx();
        let map = normalize(&AffineSubspace::point(c.elems(&[6, 1]), c));
        let sys = triangularize(&v, &map).unwrap();
        assert_eq!(sys.dim(), 0);
        assert!(sys.polys().is_empty());
        assert_eq!(sys.degree(), 1);
    }

    #[test]
    fn triangularize_rejects_excess_dimension() {
        let v = tiny_block();
        let c = v.ctx();
        let plane = AffineSubspace::new(c.elems(&[0, 0]), Matrix::identity(c, 2)).unwrap();
        assert!(matches!(
            triangularize(&v, &normalize(&plane)),
            Err(Error::Dimension { dim: 2, max: 1 })
        ));
    }

    #[test]
    fn triangular_systems_p17_match_pointwise() {
        let params = gen_params(2, 4, 8).unwrap();
        let v = BlockVariety::new(&params).unwrap();
        let c = v.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let r = rng.gen_range(0..=2);
            let h = AffineSubspace::random(c, 4, r, &mut rng).unwrap();
            let map = normalize(&h);
            let sys = triangularize(&v, &map).unwrap();
            let u = sys.mixing();
            for _ in 0..20 {
                let t: Vec<_> = (0..r).map(|_| c.elem(rng.gen_range(0..17))).collect();
                let powered: Vec<_> = t.iter().zip(sys.exponents()).map(|(&x, &e)| x.pow(e)).collect();
                let f = v.evaluate(&map.apply(&powered)).unwrap();
                for i in 0..r {
                    let mixed = (0..r).fold(c.zero(), |acc, l| acc + u.get(i, l) * f[l]);
                    assert_eq!(sys.polys()[i].evaluate(&t), mixed);
                }
            }
        }
    }

    #[test]
    fn solve_block_examples() {
        let v = tiny_block();
        let c = v.ctx();
        let h = line(c, &[0, 0], &[1, 1]);
        let want = vec![
            c.elems(&[0, 0]),
            c.elems(&[3, 3]),
            c.elems(&[5, 5]),
            c.elems(&[6, 6]),
        ];
        assert_eq!(solve_block(&v, &h).unwrap(), want);
        assert_eq!(solve_block_with(&v, &h, &SolverKind::Univariate).unwrap(), want);

        let pt = AffineSubspace::point(c.elems(&[6, 1]), c);
        assert_eq!(solve_block(&v, &pt).unwrap(), vec![c.elems(&[6, 1])]);
        let pt = AffineSubspace::point(c.elems(&[1, 1]), c);
        assert!(solve_block(&v, &pt).unwrap().is_empty());
        assert!(solve_block_with(&v, &pt, &SolverKind::Univariate).unwrap().is_empty());

        let plane = AffineSubspace::new(c.elems(&[0, 0]), Matrix::identity(c, 2)).unwrap();
        assert!(matches!(solve_block(&v, &plane), Err(Error::Dimension { .. })));
    }

    #[test]
    fn univariate_rejects_planes_directly() {
        let params = gen_params(2, 4, 8).unwrap();
        let v = BlockVariety::new(&params).unwrap();
        let c = v.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = AffineSubspace::random(c, 4, 2, &mut rng).unwrap();
        assert!(matches!(
            SolverKind::Univariate.solve(&v, &normalize(&h)),
            Err(Error::SolverNotApplicable(_))
        ));
        // through the public entry point it falls back
        assert_eq!(
            solve_block_with(&v, &h, &SolverKind::Univariate).unwrap(),
            solve_block(&v, &h).unwrap()
        );
    }

    #[test]
    fn intersect_examples() {
        let s = EvasiveSet::new(tiny_params(4)).unwrap();
        let c = s.ctx();
        let h = line(c, &[0, 0, 6, 1], &[1, 1, 0, 0]);
        let got = intersect_set(&s, &h).unwrap();
        let want = vec![
            c.elems(&[0, 0, 6, 1]),
            c.elems(&[3, 3, 6, 1]),
            c.elems(&[5, 5, 6, 1]),
            c.elems(&[6, 6, 6, 1]),
        ];
        assert_eq!(got, want);
        let brute: Vec<_> = h
            .points(1000)
            .unwrap()
            .into_iter()
            .filter(|x| s.member_set(x).unwrap())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(got, brute);

        let h = line(c, &[0, 0, 1, 1], &[1, 1, 0, 0]);
        assert!(intersect_set(&s, &h).unwrap().is_empty());

        let pt = AffineSubspace::point(c.elems(&[0, 0, 0, 0]), c);
        assert_eq!(intersect_set(&s, &pt).unwrap(), vec![c.elems(&[0, 0, 0, 0])]);

        let plane = AffineSubspace::new(
            c.elems(&[0, 0, 0, 0]),
            Matrix::from_u64_rows(c, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            intersect_set(&s, &plane),
            Err(Error::Dimension { dim: 2, max: 1 })
        ));
    }

    #[test]
    fn level_dims_sum_to_dimension() {
        let s = EvasiveSet::new(gen_params(2, 4, 12).unwrap()).unwrap();
        let c = s.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let r = rng.gen_range(0..=2);
            let h = AffineSubspace::random(c, 12, r, &mut rng).unwrap();
            let out = intersect_with(&s, &h, &SolverKind::Exhaustive).unwrap();
            assert_eq!(out.level_dims.len(), 3);
            assert_eq!(out.level_dims.iter().sum::<usize>(), r);
        }
    }

    #[test]
    fn triangular_systems_respect_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // t^2 + t over F_5
        let f5 = FieldCtx::new(5).unwrap();
        let mut h = MPoly::monomial(f5, vec![2], f5.one());
        h.add_term(vec![1], f5.one());
        assert_eq!(count_common_zeros(&[h], f5, 1, 100).unwrap(), 2);

        for _ in 0..200 {
            let p = if rng.gen_bool(0.5) { 5 } else { 7 };
            let ctx = FieldCtx::new(p).unwrap();
            let k = rng.gen_range(1..=2usize);
            let d = rng.gen_range(1..=3u64);
            let polys: Vec<MPoly> = (0..k)
                .map(|i| {
                    let mut e = vec![0; k];
                    e[i] = d;
                    let mut h = MPoly::monomial(ctx, e, ctx.one());
                    for _ in 0..4 {
                        let mut e: Vec<u64> = (0..k).map(|_| rng.gen_range(0..d)).collect();
                        while e.iter().sum::<u64>() >= d {
                            let j = rng.gen_range(0..k);
                            e[j] = e[j].saturating_sub(1);
                        }
                        h.add_term(e, ctx.elem(rng.gen_range(0..p)));
                    }
                    h
                })
                .collect();
            let count = count_common_zeros(&polys, ctx, k, 1000).unwrap();
            assert!(count as u64 <= d.pow(k as u32));
        }
    }
}
