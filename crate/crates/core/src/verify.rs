//! Brute-force oracle suite for one parameter set.
//!
//! Every check compares the structured algorithms against plain enumeration
//! over the field. Output contains no timings, so a fixed seed gives a
//! byte-identical report.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evasive::EvasiveSet;
use crate::intersect::{intersect_with, SolverKind};
use crate::linalg::{for_each_parameter, is_strongly_regular, AffineSubspace, Matrix};
use crate::listdec::random_message;
use crate::variety::{Point, ENUMERATION_LIMIT};

/// `S ∩ H` by listing every point of `H` and testing membership.
pub fn brute_force_intersection(s: &EvasiveSet, h: &AffineSubspace) -> Result<Vec<Point>> {
    if h.ambient_dim() != s.n() {
        return Err(Error::Arity {
            expected: s.n(),
            got: h.ambient_dim(),
        });
    }
    if h.ctx() != s.ctx() {
        return Err(Error::ModulusMismatch {
            left: s.ctx().modulus(),
            right: h.ctx().modulus(),
        });
    }
    let out: BTreeSet<Point> = h
        .points(ENUMERATION_LIMIT)?
        .into_iter()
        .filter(|x| s.member_unchecked(x))
        .collect();
    Ok(out.into_iter().collect())
}

/// A random subspace of dimension `dim`. With `through_members` it is the
/// affine span of `dim + 1` random set members (falling back to a uniform
/// subspace if the members are degenerate), which exercises intersections
/// far larger than a uniform subspace would.
pub fn random_test_subspace<R: Rng + ?Sized>(
    s: &EvasiveSet,
    dim: usize,
    through_members: bool,
    rng: &mut R,
) -> Result<AffineSubspace> {
    let ctx = s.ctx();
    let n = s.n();
    if through_members && s.params().message_len() > 0 {
        for _ in 0..8 {
            let base = s.encode(&random_message(s, rng))?;
            let rows = (0..dim)
                .map(|_| {
                    let y = s.encode(&random_message(s, rng))?;
                    Ok(y.iter().zip(&base).map(|(&a, &b)| a - b).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            let basis = Matrix::from_rows(ctx, n, rows)?;
            if basis.rank() == dim {
                return AffineSubspace::new(base, basis);
            }
        }
    }
    AffineSubspace::random(ctx, n, dim, rng)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { trials: 100, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "skip",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub header: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.header).unwrap();
        writeln!(out, "{:<26} {:<6} detail", "check", "result").unwrap();
        for c in &self.checks {
            writeln!(out, "{:<26} {:<6} {}", c.name, c.outcome.label(), c.detail).unwrap();
        }
        let passed = self.checks.iter().filter(|c| c.outcome == Outcome::Pass).count();
        let failed = self.checks.iter().filter(|c| c.outcome == Outcome::Fail).count();
        let skipped = self.checks.len() - passed - failed;
        writeln!(out, "passed={passed} failed={failed} skipped={skipped}").unwrap();
        out
    }
}

fn guarded<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::GuardExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Dimensions `0..=k` whose subspaces are small enough to enumerate.
fn feasible_dims(s: &EvasiveSet, min: usize) -> Vec<usize> {
    let p = s.ctx().modulus() as u128;
    (min..=s.params().k())
        .filter(|&d| p.checked_pow(d as u32).is_some_and(|c| c <= ENUMERATION_LIMIT))
        .collect()
}

pub fn verify(s: &EvasiveSet, cfg: VerifyConfig) -> Result<VerifyReport> {
    let params = s.params();
    let degrees: Vec<String> = params.degrees().iter().map(u64::to_string).collect();
    let header = format!(
        "params p={} k={} m={} n={} degrees={} seed={} trials={}",
        params.p(),
        params.k(),
        params.m(),
        params.n(),
        degrees.join(","),
        cfg.seed,
        cfg.trials
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let checks = vec![
        check_strong_regularity(s)?,
        check_block_size(s)?,
        check_bijection(s, cfg, &mut rng)?,
        check_evasiveness(s, cfg, &mut rng)?,
        check_intersection(s, cfg, &mut rng)?,
    ];
    Ok(VerifyReport { header, checks })
}

fn check_strong_regularity(s: &EvasiveSet) -> Result<CheckResult> {
    let name = "strong_regularity";
    Ok(match guarded(is_strongly_regular(s.block().matrix()))? {
        Some(ok) => CheckResult {
            name,
            outcome: Outcome::from_bool(ok),
            detail: format!("{}x{} leading minors", s.params().k(), s.params().m()),
        },
        None => CheckResult {
            name,
            outcome: Outcome::Skipped,
            detail: "too many minors".into(),
        },
    })
}

fn check_block_size(s: &EvasiveSet) -> Result<CheckResult> {
    let name = "block_size";
    let v = s.block();
    Ok(match guarded(v.enumerate_block())? {
        Some(points) => CheckResult {
            name,
            outcome: Outcome::from_bool(points.len() as u128 == v.expected_size()),
            detail: format!("|V|={} expected={}", points.len(), v.expected_size()),
        },
        None => CheckResult {
            name,
            outcome: Outcome::Skipped,
            detail: "p^m exceeds the enumeration limit".into(),
        },
    })
}

fn check_bijection(s: &EvasiveSet, cfg: VerifyConfig, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let v = s.block();
    let ctx = s.ctx();
    let width = v.m() - v.k();
    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut check = |z: &[crate::field::FieldElement]| -> Result<()> {
        let x = v.encode_block(z)?;
        checked += 1;
        if !v.member(&x)? || v.decode_block(&x)? != z {
            failures += 1;
        }
        Ok(())
    };
    let mut inner: Result<()> = Ok(());
    let exhaustive = for_each_parameter(ctx, width, ENUMERATION_LIMIT, |z| {
        if inner.is_ok() {
            inner = check(z);
        }
    });
    let mode = match exhaustive {
        Ok(()) => {
            inner?;
            "exhaustive"
        }
        Err(Error::GuardExceeded { .. }) => {
            for _ in 0..cfg.trials {
                let z: Vec<_> = (0..width)
                    .map(|_| ctx.elem(rng.gen_range(0..ctx.modulus())))
                    .collect();
                check(&z)?;
            }
            "sampled"
        }
        Err(e) => return Err(e),
    };
    // the other direction: every member decodes and re-encodes to itself
    let mut reverse = 0u64;
    if let Some(points) = guarded(v.enumerate_block())? {
        for x in points {
            reverse += 1;
            if v.encode_block(&v.decode_block(&x)?)? != x {
                failures += 1;
            }
        }
    }
    Ok(CheckResult {
        name: "bijection",
        outcome: Outcome::from_bool(failures == 0),
        detail: format!("{mode} encode={checked} decode={reverse} failures={failures}"),
    })
}

fn check_evasiveness(s: &EvasiveSet, cfg: VerifyConfig, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let dims = feasible_dims(s, 1);
    if dims.is_empty() {
        return Ok(CheckResult {
            name: "evasiveness",
            outcome: Outcome::Skipped,
            detail: "no enumerable subspace dimension".into(),
        });
    }
    let mut violations = 0u64;
    let mut max_hits = 0usize;
    for i in 0..cfg.trials {
        let dim = dims[i % dims.len()];
        let h = random_test_subspace(s, dim, i % 2 == 0, rng)?;
        let hits = brute_force_intersection(s, &h)?.len();
        max_hits = max_hits.max(hits);
        if hits as u128 > s.params().intersection_bound(dim) {
            violations += 1;
        }
    }
    Ok(CheckResult {
        name: "evasiveness",
        outcome: Outcome::from_bool(violations == 0),
        detail: format!(
            "subspaces={} dims={:?} max_hits={max_hits} violations={violations}",
            cfg.trials, dims
        ),
    })
}

fn check_intersection(s: &EvasiveSet, cfg: VerifyConfig, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let dims = feasible_dims(s, 0);
    if dims.is_empty() {
        return Ok(CheckResult {
            name: "intersect_vs_enumeration",
            outcome: Outcome::Skipped,
            detail: "no enumerable subspace dimension".into(),
        });
    }
    let mut mismatches = 0u64;
    let mut total_points = 0usize;
    for i in 0..cfg.trials {
        let dim = dims[i % dims.len()];
        let h = random_test_subspace(s, dim, i % 2 == 0, rng)?;
        let brute = brute_force_intersection(s, &h)?;
        total_points += brute.len();
        for solver in [SolverKind::Exhaustive, SolverKind::Univariate] {
            match guarded(intersect_with(s, &h, &solver))? {
                Some(found) if found.points == brute => {}
                _ => mismatches += 1,
            }
        }
    }
    Ok(CheckResult {
        name: "intersect_vs_enumeration",
        outcome: Outcome::from_bool(mismatches == 0),
        detail: format!(
            "subspaces={} points={total_points} mismatches={mismatches}",
            cfg.trials
        ),
    })
}
