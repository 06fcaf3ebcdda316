//! Polynomials over `F_p`: sparse multivariate ones for restricting the
//! block equations to a subspace, and dense univariate ones with root
//! finding.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::for_each_parameter;

/// Sparse polynomial in `nvars` variables. Exponent vectors map to nonzero
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ctx: FieldCtx,
    nvars: usize,
    terms: BTreeMap<Vec<u64>, FieldElement>,
}

impl MPoly {
    pub fn zero(ctx: FieldCtx, nvars: usize) -> Self {
        Self {
            ctx,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: FieldCtx, nvars: usize, c: FieldElement) -> Self {
        Self::monomial(ctx, vec![0; nvars], c)
    }

    pub fn monomial(ctx: FieldCtx, exponents: Vec<u64>, c: FieldElement) -> Self {
        let mut p = Self::zero(ctx, exponents.len());
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn var(ctx: FieldCtx, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(ctx, e, ctx.one())
    }

    /// `constant + sum coeffs[i] * t_i`.
    pub fn affine(ctx: FieldCtx, constant: FieldElement, coeffs: &[FieldElement]) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(ctx, n, constant);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u64], FieldElement)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &[u64]) -> FieldElement {
        self.terms.get(exponents).copied().unwrap_or(self.ctx.zero())
    }

    pub fn add_term(&mut self, exponents: Vec<u64>, c: FieldElement) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(-self.ctx.one()))
    }

    pub fn scale(&self, c: FieldElement) -> MPoly {
        let mut out = MPoly::zero(self.ctx, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, &v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.ctx, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> MPoly {
        let mut acc = MPoly::constant(self.ctx, self.nvars, self.ctx.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `t_i -> t_i^{powers[i]}`.
    pub fn substitute_powers(&self, powers: &[u64]) -> MPoly {
        assert_eq!(powers.len(), self.nvars);
        let mut out = MPoly::zero(self.ctx, self.nvars);
        for (e, &c) in &self.terms {
            let scaled = e.iter().zip(powers).map(|(a, b)| a * b).collect();
            out.add_term(scaled, c);
        }
        out
    }

    pub fn evaluate(&self, t: &[FieldElement]) -> FieldElement {
        assert_eq!(t.len(), self.nvars);
        self.terms.iter().fold(self.ctx.zero(), |acc, (e, &c)| {
            let m = e
                .iter()
                .zip(t)
                .fold(c, |m, (&ei, &ti)| if ei == 0 { m } else { m * ti.pow(ei) });
            acc + m
        })
    }

    /// Converts a polynomial in a single variable to dense form.
    pub fn to_univariate(&self) -> Result<UniPoly> {
        if self.nvars != 1 {
            return Err(Error::Parameter(format!(
                "expected a univariate polynomial, got {} variables",
                self.nvars
            )));
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![self.ctx.zero(); deg + 1];
        for (e, &c) in &self.terms {
            coeffs[e[0] as usize] = c;
        }
        Ok(UniPoly::new(self.ctx, coeffs))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &ei) in e.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{ei}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Number of common zeros in `F_p^nvars`, by enumeration.
pub fn count_common_zeros(polys: &[MPoly], ctx: FieldCtx, nvars: usize, limit: u128) -> Result<usize> {
    let mut count = 0;
    for_each_parameter(ctx, nvars, limit, |t| {
        if polys.iter().all(|h| h.evaluate(t).is_zero()) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Dense univariate polynomial, coefficients from the constant term up.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(ctx: FieldCtx, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { ctx, coeffs }
    }

    pub fn zero(ctx: FieldCtx) -> Self {
        Self::new(ctx, Vec::new())
    }

    /// `t + a`.
    fn linear(ctx: FieldCtx, a: FieldElement) -> Self {
        Self::new(ctx, vec![a, ctx.one()])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> FieldElement {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn evaluate(&self, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, &c| acc * x + c)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        UniPoly::new(self.ctx, self.coeffs.iter().map(|&c| c * inv).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.ctx.zero();
        let coeffs = (0..n)
            .map(|i| *self.coeffs.get(i).unwrap_or(&z) - *other.coeffs.get(i).unwrap_or(&z))
            .collect();
        UniPoly::new(self.ctx, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(self.ctx, out)
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = divisor.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(self.ctx), self.clone());
        }
        let mut quot = vec![self.ctx.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * inv;
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= c * d;
            }
        }
        rem.truncate(dd);
        (UniPoly::new(self.ctx, quot), UniPoly::new(self.ctx, rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::new(self.ctx, vec![self.ctx.one()]).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Distinct roots in `F_p`, ascending.
    ///
    /// Isolates the product of linear factors as `gcd(f, t^p - t)` and splits
    /// it with `gcd(g, (t + a)^((p-1)/2) - 1)` for `a = 0, 1, 2, ...`. The
    /// shift sequence is fixed, so the output is deterministic.
    pub fn roots(&self) -> Result<Vec<FieldElement>> {
        if self.is_zero() {
            return Err(Error::Parameter(
                "every element is a root of the zero polynomial".into(),
            ));
        }
        let ctx = self.ctx;
        let p = ctx.modulus();
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        if p == 2 {
            return Ok(ctx.iter().filter(|&x| self.evaluate(x).is_zero()).collect());
        }
        let f = self.monic();
        let t = UniPoly::linear(ctx, ctx.zero());
        let frob = t.pow_mod(p, &f);
        let split = f.gcd(&frob.sub(&t));
        let mut roots = Vec::new();
        split_linear(&split, &mut roots);
        roots.sort();
        Ok(roots)
    }
}

fn split_linear(g: &UniPoly, out: &mut Vec<FieldElement>) {
    let ctx = g.ctx;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeffs[0]),
        Some(deg) => {
            let half = (ctx.modulus() - 1) / 2;
            let one = UniPoly::new(ctx, vec![ctx.one()]);
            for a in 0..ctx.modulus() {
                let w = UniPoly::linear(ctx, ctx.elem(a)).pow_mod(half, g).sub(&one);
                let d = g.gcd(&w);
                if let Some(dd) = d.degree() {
                    if dd > 0 && dd < deg {
                        let (q, _) = g.div_rem(&d);
                        split_linear(&d, out);
                        split_linear(&q.monic(), out);
                        return;
                    }
                }
            }
            unreachable!("a squarefree product of distinct linear factors always splits");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn univariate_roots_example() {
        // t^5 + t^2 over F_7: t = 0 or t^3 = 6
        let ctx = f(7);
        let g = UniPoly::new(ctx, ctx.elems(&[0, 0, 1, 0, 0, 1]));
        assert_eq!(g.roots().unwrap(), ctx.elems(&[0, 3, 5, 6]));
        // t^2 + t over F_5
        let g = UniPoly::new(f(5), f(5).elems(&[0, 1, 1]));
        assert_eq!(g.roots().unwrap(), f(5).elems(&[0, 4]));
        assert!(UniPoly::zero(ctx).roots().is_err());
        assert!(UniPoly::new(ctx, ctx.elems(&[3])).roots().unwrap().is_empty());
    }

    #[test]
    fn div_rem_reconstructs() {
        let ctx = f(11);
        let a = UniPoly::new(ctx, ctx.elems(&[3, 1, 4, 1, 5, 9, 2]));
        let b = UniPoly::new(ctx, ctx.elems(&[6, 5, 3]));
        let (q, r) = a.div_rem(&b);
        assert!(r.degree().map_or(true, |d| d < 2));
        assert_eq!(q.mul(&b).sub(&a.sub(&r)), UniPoly::zero(ctx));
    }

    #[test]
    fn mpoly_basics() {
        let ctx = f(7);
        let t1 = MPoly::var(ctx, 2, 0);
        let t2 = MPoly::var(ctx, 2, 1);
        let s = t1.add(&t2);
        let sq = s.pow(2);
        assert_eq!(sq.total_degree(), Some(2));
        assert_eq!(sq.coefficient(&[1, 1]).value(), 2);
        assert_eq!(sq.sub(&sq), MPoly::zero(ctx, 2));
        let sub = sq.substitute_powers(&[3, 1]);
        assert_eq!(sub.coefficient(&[6, 0]).value(), 1);
        assert_eq!(sub.total_degree(), Some(6));
        assert_eq!(MPoly::zero(ctx, 2).total_degree(), None);
        // (t1 + t2)^7 = t1^7 + t2^7 in characteristic 7
        assert_eq!(s.pow(7).num_terms(), 2);
    }

    #[test]
    fn count_zeros_of_circle() {
        // x^2 + y^2 - 1 over F_7 has p - (-1/p) = 8 points
        let ctx = f(7);
        let x = MPoly::var(ctx, 2, 0);
        let y = MPoly::var(ctx, 2, 1);
        let c = x
            .pow(2)
            .add(&y.pow(2))
            .sub(&MPoly::constant(ctx, 2, ctx.one()));
        assert_eq!(count_common_zeros(&[c], ctx, 2, 1000).unwrap(), 8);
    }

    proptest! {
        #[test]
        fn roots_match_enumeration(
            p in prop::sample::select(vec![2u64, 3, 5, 7, 13, 31, 101]),
            coeffs in prop::collection::vec(0u64..1000, 1..10),
        ) {
            let ctx = f(p);
            let g = UniPoly::new(ctx, ctx.elems(&coeffs));
            prop_assume!(!g.is_zero());
            let brute: Vec<_> = ctx.iter().filter(|&x| g.evaluate(x).is_zero()).collect();
            prop_assert_eq!(g.roots().unwrap(), brute);
        }

        #[test]
        fn mpoly_evaluation_is_a_ring_map(
            a in prop::collection::vec((0u64..4, 0u64..4, 0u64..13), 0..6),
            b in prop::collection::vec((0u64..4, 0u64..4, 0u64..13), 0..6),
            x in 0u64..13, y in 0u64..13,
        ) {
            let ctx = f(13);
            let build = |ts: &[(u64, u64, u64)]| {
                let mut p = MPoly::zero(ctx, 2);
                for &(i, j, c) in ts {
                    p.add_term(vec![i, j], ctx.elem(c));
                }
                p
            };
            let (pa, pb) = (build(&a), build(&b));
            let pt = [ctx.elem(x), ctx.elem(y)];
            prop_assert_eq!(pa.mul(&pb).evaluate(&pt), pa.evaluate(&pt) * pb.evaluate(&pt));
            prop_assert_eq!(pa.add(&pb).evaluate(&pt), pa.evaluate(&pt) + pb.evaluate(&pt));
        }
    }
}
