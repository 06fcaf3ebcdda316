//! Subspace filtering as the last stage of list decoding.
//!
//! An outer list decoder is modelled as an oracle that returns a
//! `k`-dimensional affine subspace containing the transmitted word. Messages
//! are pre-encoded into the evasive set, so filtering the subspace against
//! the set leaves at most `max_degree^k` candidates, independent of `n`.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64`; a seed therefore
//! reproduces a trial bit for bit on every platform.

use std::fmt::Write as _;

use num_rational::Ratio;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evasive::{EvasiveSet, Message};
use crate::field::FieldElement;
use crate::intersect::intersect_set;
use crate::linalg::AffineSubspace;

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub set: EvasiveSet,
    pub trials: usize,
    pub seed: u64,
    /// Rate of the outer code, in `(0, 1)`.
    pub base_rate: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialResult {
    pub seed: u64,
    pub planted: Message,
    pub list: Vec<Message>,
    pub contained: bool,
}

impl TrialResult {
    pub fn list_size(&self) -> usize {
        self.list.len()
    }
}

/// A random `k`-dimensional affine subspace through `x`.
pub fn oracle_subspace(s: &EvasiveSet, x: &[FieldElement], seed: u64) -> Result<AffineSubspace> {
    if !s.member_set(x)? {
        return Err(Error::NotAMember);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AffineSubspace::random_through(s.ctx(), x.to_vec(), s.params().k(), &mut rng)
}

/// Encodes `msg`, asks the oracle for a subspace through the codeword, and
/// filters it against the set. A list longer than `max_degree^k` is an
/// error; a list missing the planted message is reported via `contained`.
pub fn run_trial(s: &EvasiveSet, msg: &Message, seed: u64) -> Result<TrialResult> {
    let x = s.encode(msg)?;
    let h = oracle_subspace(s, &x, seed)?;
    let list = intersect_set(s, &h)?
        .iter()
        .map(|y| s.decode(y))
        .collect::<Result<Vec<_>>>()?;
    let contained = list.contains(msg);
    let bound = s.params().intersection_bound(s.params().k());
    if list.len() as u128 > bound {
        return Err(Error::Invariant(format!(
            "list of {} exceeds the bound {bound}",
            list.len()
        )));
    }
    Ok(TrialResult {
        seed,
        planted: msg.clone(),
        list,
        contained,
    })
}

pub fn random_message<R: Rng + ?Sized>(s: &EvasiveSet, rng: &mut R) -> Message {
    let ctx = s.ctx();
    Message(
        (0..s.params().message_len())
            .map(|_| ctx.elem(rng.gen_range(0..ctx.modulus())))
            .collect(),
    )
}

/// Rate after pre-encoding into the evasive set: `(1 - eps) * rate`.
pub fn composed_rate(rate: Rational, eps: Rational) -> Result<Rational> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if rate <= zero || rate >= one {
        return Err(Error::Parameter(format!("rate {rate} outside (0, 1)")));
    }
    if eps <= zero || eps >= one {
        return Err(Error::Parameter(format!("eps {eps} outside (0, 1)")));
    }
    let out = (one - eps) * rate;
    if out < rate - eps {
        return Err(Error::Invariant(format!("{out} < {rate} - {eps}")));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub trials: Vec<TrialResult>,
    pub rate: Rational,
    pub eps: Rational,
    pub composed: Rational,
}

impl SimReport {
    pub fn max_list(&self) -> usize {
        self.trials.iter().map(TrialResult::list_size).max().unwrap_or(0)
    }

    pub fn all_contained(&self) -> bool {
        self.trials.iter().all(|t| t.contained)
    }

    pub fn summary(&self) -> String {
        format!(
            "trials={} max_list={} all_contained={}",
            self.trials.len(),
            self.max_list(),
            self.all_contained()
        )
    }

    /// Per-trial lines, a rate line, and the summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.trials.iter().enumerate() {
            writeln!(
                out,
                "trial={i} seed={} list_size={} contained={}",
                t.seed,
                t.list_size(),
                t.contained
            )
            .unwrap();
        }
        writeln!(
            out,
            "rate base={} eps={} composed={}",
            self.rate, self.eps, self.composed
        )
        .unwrap();
        writeln!(out, "{}", self.summary()).unwrap();
        out
    }
}

/// Runs `cfg.trials` independent trials. Trial seeds are drawn from a
/// generator seeded with `cfg.seed`, and each trial's message is drawn from
/// a generator seeded with the trial seed.
pub fn simulate(cfg: &SimConfig) -> Result<SimReport> {
    if cfg.trials == 0 {
        return Err(Error::Parameter("at least one trial is required".into()));
    }
    let params = cfg.set.params();
    let eps = Rational::new(params.k() as i64, params.m() as i64);
    let composed = composed_rate(cfg.base_rate, eps)?;
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trials = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let seed = master.next_u64();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg = random_message(&cfg.set, &mut rng);
        trials.push(run_trial(&cfg.set, &msg, rng.next_u64())?);
    }
    Ok(SimReport {
        trials,
        rate: cfg.base_rate,
        eps,
        composed,
    })
}
