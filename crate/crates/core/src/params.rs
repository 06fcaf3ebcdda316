//! Field and degree selection, and the full parameter set of one
//! construction instance.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gcd, is_prime, FieldCtx};
use crate::linalg::{is_strongly_regular, vandermonde, Matrix};

pub const PARAMS_VERSION: u32 = 1;

/// A prime together with `k` odd degrees that are all co-prime to `p - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPlan {
    pub p: u64,
    /// Strictly decreasing, each an odd divisor of `modulus` greater than one.
    pub special_degrees: Vec<u64>,
    /// Product of the first `ceil(log2(k + 1))` odd primes.
    pub modulus: u64,
}

fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&q| is_prime(q))
}

fn ceil_log2(x: u64) -> u32 {
    64 - (x - 1).leading_zeros()
}

/// Product of the first `ceil(log2(k + 1))` odd primes. It has
/// `2^ceil(log2(k+1)) - 1 >= k` divisors above one, all odd.
pub fn degree_modulus(k: usize) -> Result<u64> {
    let count = ceil_log2(k as u64 + 1) as usize;
    odd_primes().take(count).try_fold(1u64, |acc, q| {
        acc.checked_mul(q)
            .ok_or_else(|| Error::Parameter(format!("degree modulus overflows for k={k}")))
    })
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let upper: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&e| e * e != n).collect();
    out.extend(upper);
    out
}

/// Picks the `k` smallest odd divisors of `K` above one as degrees and the
/// first prime `p > n` with `p = 2 (mod K)`, searching up to `2nK`. Since
/// `p - 1 = 1 (mod K)`, `p - 1` shares no factor with any divisor of `K`.
pub fn gen_field_plan(k: usize, n: u64) -> Result<FieldPlan> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let modulus = degree_modulus(k)?;
    let mut special_degrees: Vec<u64> = divisors(modulus).into_iter().skip(1).take(k).collect();
    debug_assert_eq!(special_degrees.len(), k);
    special_degrees.reverse();

    let upper = n
        .checked_mul(2)
        .and_then(|x| x.checked_mul(modulus))
        .ok_or_else(|| Error::Parameter(format!("search window 2*{n}*{modulus} overflows")))?;
    // first candidate > n congruent to 2 mod K
    let start = n + 1;
    let shift = (2 + modulus - start % modulus) % modulus;
    let mut candidate = start.checked_add(shift);
    while let Some(c) = candidate {
        if c > upper {
            break;
        }
        if is_prime(c) {
            return Ok(FieldPlan {
                p: c,
                special_degrees,
                modulus,
            });
        }
        candidate = c.checked_add(modulus);
    }
    Err(Error::SearchExhausted {
        modulus,
        lower: n,
        upper,
    })
}

/// How the `k x m` coefficient matrix is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    /// `A[i][j] = gammas[j]^(i+1)`.
    Vandermonde(Vec<u64>),
    /// An explicit matrix, checked for strong regularity.
    Explicit(Vec<Vec<u64>>),
}

/// Everything that defines one instance of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvasiveParams {
    ctx: FieldCtx,
    k: usize,
    m: usize,
    n: usize,
    degrees: Vec<u64>,
    coefficients: Coefficients,
    pivot_set: Vec<usize>,
    inv_exponents: Vec<u64>,
}

impl EvasiveParams {
    /// Validates and assembles a parameter set. `pivot_set` lists (0-based)
    /// the `k` block positions whose degrees are co-prime to `p - 1`.
    pub fn new(
        p: u64,
        k: usize,
        m: usize,
        n: usize,
        degrees: Vec<u64>,
        coefficients: Coefficients,
        pivot_set: Vec<usize>,
    ) -> Result<Self> {
        let ctx = FieldCtx::new(p)?;
        if k == 0 {
            return Err(Error::Parameter("k must be at least 1".into()));
        }
        if m < k {
            return Err(Error::Parameter(format!("block length m={m} is below k={k}")));
        }
        if n == 0 || n % m != 0 {
            return Err(Error::Parameter(format!("m={m} does not divide n={n}")));
        }
        if (m as u64) >= p {
            return Err(Error::Parameter(format!("field size {p} must exceed m={m}")));
        }
        if degrees.len() != m {
            return Err(Error::Arity {
                expected: m,
                got: degrees.len(),
            });
        }
        if degrees.last() == Some(&0) || degrees.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parameter(
                "degrees must be strictly decreasing and positive".into(),
            ));
        }
        if pivot_set.len() != k {
            return Err(Error::Parameter(format!(
                "pivot set has {} entries, expected {k}",
                pivot_set.len()
            )));
        }
        if pivot_set.windows(2).any(|w| w[0] >= w[1]) || pivot_set.iter().any(|&j| j >= m) {
            return Err(Error::Parameter(
                "pivot set must be strictly increasing positions below m".into(),
            ));
        }
        let inv_exponents = pivot_set
            .iter()
            .map(|&j| ctx.inverse_exponent(degrees[j]))
            .collect::<Result<Vec<_>>>()?;

        match &coefficients {
            Coefficients::Vandermonde(gammas) => {
                if gammas.len() != m {
                    return Err(Error::Arity {
                        expected: m,
                        got: gammas.len(),
                    });
                }
                let g = gammas
                    .iter()
                    .map(|&v| ctx.try_elem(v))
                    .collect::<Result<Vec<_>>>()?;
                vandermonde(ctx, k, &g)?;
            }
            Coefficients::Explicit(rows) => {
                if rows.len() != k || rows.iter().any(|r| r.len() != m) {
                    return Err(Error::Parameter(format!("matrix must be {k} x {m}")));
                }
                let a = Matrix::from_u64_rows(ctx, rows)?;
                if !is_strongly_regular(&a)? {
                    return Err(Error::Parameter("matrix is not strongly regular".into()));
                }
            }
        }

        Ok(Self {
            ctx,
            k,
            m,
            n,
            degrees,
            coefficients,
            pivot_set,
            inv_exponents,
        })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.modulus()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> usize {
        self.n / self.m
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Largest degree; the intersection bound is `max_degree^dim`.
    pub fn max_degree(&self) -> u64 {
        self.degrees[0]
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn pivot_set(&self) -> &[usize] {
        &self.pivot_set
    }

    pub fn inv_exponents(&self) -> &[u64] {
        &self.inv_exponents
    }

    /// Message length `(m - k) * n / m`.
    pub fn message_len(&self) -> usize {
        (self.m - self.k) * self.blocks()
    }

    /// `max_degree^dim`, saturating.
    pub fn intersection_bound(&self, dim: usize) -> u128 {
        (self.max_degree() as u128)
            .checked_pow(dim as u32)
            .unwrap_or(u128::MAX)
    }

    /// The `k x m` coefficient matrix.
    pub fn matrix(&self) -> Matrix {
        match &self.coefficients {
            Coefficients::Vandermonde(gammas) => {
                vandermonde(self.ctx, self.k, &self.ctx.elems(gammas)).expect("validated")
            }
            Coefficients::Explicit(rows) => Matrix::from_u64_rows(self.ctx, rows).expect("validated"),
        }
    }

    pub fn to_file(&self) -> ParamsFile {
        let (gammas, matrix) = match &self.coefficients {
            Coefficients::Vandermonde(g) => (g.clone(), None),
            Coefficients::Explicit(rows) => (Vec::new(), Some(rows.clone())),
        };
        ParamsFile {
            version: PARAMS_VERSION,
            p: self.p(),
            k: self.k,
            m: self.m,
            n: self.n,
            degrees: self.degrees.clone(),
            gammas,
            matrix,
            pivot_set: self.pivot_set.clone(),
            inv_exponents: self.inv_exponents.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ParamsFile = serde_json::from_str(s)?;
        file.into_params()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Canonical parameter set for budget `k`, block length `m` and ambient
/// dimension `n`.
///
/// The `k` special degrees come from [`gen_field_plan`]; the remaining
/// `m - k` slots take the smallest integers `>= 2` not already used. All
/// degrees are sorted decreasingly and the pivot set records where the
/// special ones ended up. Generators are `1, 2, ..., m`.
pub fn gen_params(k: usize, m: usize, n: usize) -> Result<EvasiveParams> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if m < k {
        return Err(Error::Parameter(format!("block length m={m} is below k={k}")));
    }
    if n == 0 || n % m != 0 {
        return Err(Error::Parameter(format!("m={m} does not divide n={n}")));
    }
    let plan = gen_field_plan(k, n.max(m + 1) as u64)?;

    let mut degrees = plan.special_degrees.clone();
    let mut filler = 2u64;
    while degrees.len() < m {
        if !plan.special_degrees.contains(&filler) {
            degrees.push(filler);
        }
        filler += 1;
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let pivot_set = degrees
        .iter()
        .enumerate()
        .filter(|(_, d)| plan.special_degrees.contains(d))
        .map(|(j, _)| j)
        .collect();
    let gammas = (1..=m as u64).collect();
    EvasiveParams::new(
        plan.p,
        k,
        m,
        n,
        degrees,
        Coefficients::Vandermonde(gammas),
        pivot_set,
    )
}

/// On-disk form of [`EvasiveParams`]. `matrix` is present only for explicit
/// coefficient matrices, in which case `gammas` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub version: u32,
    pub p: u64,
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub degrees: Vec<u64>,
    #[serde(default)]
    pub gammas: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u64>>>,
    pub pivot_set: Vec<usize>,
    pub inv_exponents: Vec<u64>,
}

impl ParamsFile {
    pub fn into_params(self) -> Result<EvasiveParams> {
        if self.version != PARAMS_VERSION {
            return Err(Error::Parameter(format!(
                "unsupported params version {}",
                self.version
            )));
        }
        let coefficients = match self.matrix {
            Some(rows) => {
                if !self.gammas.is_empty() {
                    return Err(Error::Parameter(
                        "give either gammas or an explicit matrix, not both".into(),
                    ));
                }
                Coefficients::Explicit(rows)
            }
            None => Coefficients::Vandermonde(self.gammas),
        };
        let params = EvasiveParams::new(
            self.p,
            self.k,
            self.m,
            self.n,
            self.degrees,
            coefficients,
            self.pivot_set,
        )?;
        if params.inv_exponents != self.inv_exponents {
            return Err(Error::Parameter(format!(
                "inverse exponents {:?} do not match the degrees (expected {:?})",
                self.inv_exponents, params.inv_exponents
            )));
        }
        Ok(params)
    }
}

/// Checks every documented property of a field plan.
pub fn check_field_plan(plan: &FieldPlan, k: usize, n: u64) -> std::result::Result<(), String> {
    let modulus = degree_modulus(k).map_err(|e| e.to_string())?;
    if plan.modulus != modulus {
        return Err(format!("modulus {} != {modulus}", plan.modulus));
    }
    if !is_prime(plan.p) {
        return Err(format!("{} is not prime", plan.p));
    }
    if plan.p % modulus != 2 % modulus {
        return Err(format!("{} is not 2 mod {modulus}", plan.p));
    }
    if !(plan.p > n && (plan.p as u128) <= 2 * n as u128 * modulus as u128) {
        return Err(format!("{} outside ({n}, {}]", plan.p, 2 * n as u128 * modulus as u128));
    }
    if plan.special_degrees.len() != k {
        return Err(format!("{} degrees, expected {k}", plan.special_degrees.len()));
    }
    if plan.special_degrees.windows(2).any(|w| w[0] <= w[1]) {
        return Err("degrees not strictly decreasing".into());
    }
    for &d in &plan.special_degrees {
        if d <= 1 || d % 2 == 0 || modulus % d != 0 || d > modulus {
            return Err(format!("degree {d} is not an odd divisor of {modulus} above 1"));
        }
        if gcd(plan.p - 1, d) != 1 {
            return Err(format!("gcd({}, {d}) != 1", plan.p - 1));
        }
    }
    Ok(())
}
