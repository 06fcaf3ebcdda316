//! Plain `u64` arithmetic, written independently of the library, used to
//! check it by brute force.
#![allow(dead_code)]

use evasive::{AffineSubspace, Coefficients, EvasiveParams, FieldElement};

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn values(x: &[FieldElement]) -> Vec<u64> {
    x.iter().map(|v| v.value()).collect()
}

/// The block equations `sum_j a_ij x_j^{d_j}` rebuilt from a parameter set.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub p: u64,
    pub k: usize,
    pub m: usize,
    pub degrees: Vec<u64>,
    pub rows: Vec<Vec<u64>>,
}

impl Oracle {
    pub fn new(params: &EvasiveParams) -> Self {
        let p = params.p();
        let rows = match params.coefficients() {
            Coefficients::Vandermonde(g) => (0..params.k())
                .map(|i| g.iter().map(|&gj| pow_mod(gj, i as u64 + 1, p)).collect())
                .collect(),
            Coefficients::Explicit(rows) => rows.clone(),
        };
        Self {
            p,
            k: params.k(),
            m: params.m(),
            degrees: params.degrees().to_vec(),
            rows,
        }
    }

    pub fn eval_block(&self, x: &[u64]) -> Vec<u64> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .zip(&self.degrees)
                    .fold(0, |acc, ((&a, &xj), &d)| (acc + a * pow_mod(xj, d, self.p)) % self.p)
            })
            .collect()
    }

    pub fn member_block(&self, x: &[u64]) -> bool {
        self.eval_block(x).iter().all(|&v| v == 0)
    }

    pub fn member(&self, x: &[u64]) -> bool {
        x.chunks(self.m).all(|c| self.member_block(c))
    }

    /// Every point of `F_p^len`, lexicographic.
    pub fn cube(&self, len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.p).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Every point of `h`, sorted.
    pub fn points(&self, h: &AffineSubspace) -> Vec<Vec<u64>> {
        let offset = values(h.offset());
        let basis: Vec<Vec<u64>> = (0..h.dim()).map(|i| values(h.basis().row(i))).collect();
        let mut out: Vec<Vec<u64>> = self
            .cube(h.dim())
            .into_iter()
            .map(|t| {
                let mut x = offset.clone();
                for (ti, b) in t.iter().zip(&basis) {
                    for (xj, bj) in x.iter_mut().zip(b) {
                        *xj = (*xj + ti * bj) % self.p;
                    }
                }
                x
            })
            .collect();
        out.sort();
        out
    }

    /// `S ∩ h` by enumeration, sorted.
    pub fn intersection(&self, h: &AffineSubspace) -> Vec<Vec<u64>> {
        self.points(h).into_iter().filter(|x| self.member(x)).collect()
    }
}

/// p = 7, k = 1, m = 2, A = [[1, 1]], degrees (5, 2).
pub fn tiny_params(n: usize) -> EvasiveParams {
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

/// p = 7, k = 2, m = 5, Vandermonde with gammas 1..5, degrees (5, 4, 3, 2, 1).
pub fn p7_k2_params() -> EvasiveParams {
    EvasiveParams::new(
        7,
        2,
        5,
        5,
        vec![5, 4, 3, 2, 1],
        Coefficients::Vandermonde(vec![1, 2, 3, 4, 5]),
        vec![0, 4],
    )
    .unwrap()
}
