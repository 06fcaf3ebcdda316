//! The product set `S = V x V x ... x V` in `F^n`, one copy of the block
//! variety per run of `m` consecutive coordinates.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::params::EvasiveParams;
use crate::variety::{BlockVariety, Point};

/// Pre-image of a set member: `m - k` free coordinates per block, block-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message(pub Vec<FieldElement>);

impl Message {
    pub fn as_slice(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct EvasiveSet {
    params: EvasiveParams,
    block: BlockVariety,
}

impl EvasiveSet {
    pub fn new(params: EvasiveParams) -> Result<Self> {
        let block = BlockVariety::new(&params)?;
        Ok(Self { params, block })
    }

    pub fn params(&self) -> &EvasiveParams {
        &self.params
    }

    pub fn block(&self) -> &BlockVariety {
        &self.block
    }

    pub fn ctx(&self) -> FieldCtx {
        self.params.ctx()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn blocks(&self) -> usize {
        self.params.blocks()
    }

    /// `p^((m-k) * n/m)`, saturating.
    pub fn expected_size(&self) -> u128 {
        (self.ctx().modulus() as u128)
            .checked_pow(self.params.message_len() as u32)
            .unwrap_or(u128::MAX)
    }

    fn check_point(&self, x: &[FieldElement]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::Arity {
                expected: self.n(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn member_set(&self, x: &[FieldElement]) -> Result<bool> {
        self.check_point(x)?;
        for chunk in x.chunks(self.params.m()) {
            if !self.block.member(chunk)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn member_unchecked(&self, x: &[FieldElement]) -> bool {
        x.chunks(self.params.m())
            .all(|c| self.block.member_unchecked(c))
    }

    pub fn encode(&self, msg: &Message) -> Result<Point> {
        let width = self.params.m() - self.params.k();
        if msg.len() != self.params.message_len() {
            return Err(Error::Arity {
                expected: self.params.message_len(),
                got: msg.len(),
            });
        }
        let mut x = Vec::with_capacity(self.n());
        if width == 0 {
            for _ in 0..self.blocks() {
                x.extend(self.block.encode_block(&[])?);
            }
            return Ok(x);
        }
        for chunk in msg.0.chunks(width) {
            x.extend(self.block.encode_block(chunk)?);
        }
        Ok(x)
    }

    pub fn decode(&self, x: &[FieldElement]) -> Result<Message> {
        self.check_point(x)?;
        let mut msg = Vec::with_capacity(self.params.message_len());
        for chunk in x.chunks(self.params.m()) {
            msg.extend(self.block.decode_block(chunk)?);
        }
        Ok(Message(msg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::for_each_parameter;
    use crate::params::{gen_params, Coefficients};

    fn tiny() -> EvasiveSet {
        let params = EvasiveParams::new(
            7,
            1,
            2,
            4,
            vec![5, 2],
            Coefficients::Explicit(vec![vec![1, 1]]),
            vec![0],
        )
        .unwrap();
        EvasiveSet::new(params).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = tiny();
        let c = s.ctx();
        assert!(s.member_set(&c.elems(&[6, 1, 0, 0])).unwrap());
        assert!(s.member_set(&c.elems(&[0, 0, 0, 0])).unwrap());
        assert!(!s.member_set(&c.elems(&[6, 1, 1, 1])).unwrap());
        assert!(s.member_set(&c.elems(&[6, 1, 0])).is_err());
    }

    #[test]
    fn encode_decode_examples() {
        let s = tiny();
        let c = s.ctx();
        let msg = Message(c.elems(&[1, 0]));
        assert_eq!(s.encode(&msg).unwrap(), c.elems(&[6, 1, 0, 0]));
        assert_eq!(
            s.encode(&Message(c.elems(&[0, 0]))).unwrap(),
            c.elems(&[0, 0, 0, 0])
        );
        assert_eq!(s.decode(&c.elems(&[6, 1, 0, 0])).unwrap(), msg);
        assert_eq!(
            s.decode(&c.elems(&[0, 0, 0, 0])).unwrap(),
            Message(c.elems(&[0, 0]))
        );
        assert!(matches!(
            s.decode(&c.elems(&[1, 1, 0, 0])),
            Err(Error::NotAMember)
        ));
        assert!(s.encode(&Message(c.elems(&[1]))).is_err());
    }

    #[test]
    fn roundtrip_all_messages() {
        let s = tiny();
        let mut seen = std::collections::BTreeSet::new();
        for_each_parameter(s.ctx(), 2, 100, |z| {
            let msg = Message(z.to_vec());
            let x = s.encode(&msg).unwrap();
            assert!(s.member_set(&x).unwrap());
            assert_eq!(s.decode(&x).unwrap(), msg);
            seen.insert(x);
        })
        .unwrap();
        assert_eq!(seen.len(), 49);
    }

    #[test]
    fn cardinality_by_enumeration() {
        let s = tiny();
        let mut count = 0;
        for_each_parameter(s.ctx(), 4, 10_000, |x| {
            if s.member_set(x).unwrap() {
                count += 1;
            }
        })
        .unwrap();
        assert_eq!(count, 49);
        assert_eq!(s.expected_size(), 49);
    }

    #[test]
    fn full_rank_block_is_a_single_point() {
        let params = gen_params(2, 2, 4).unwrap();
        let s = EvasiveSet::new(params).unwrap();
        let x = s.encode(&Message(vec![])).unwrap();
        assert_eq!(x, vec![s.ctx().zero(); 4]);
        assert_eq!(s.expected_size(), 1);
    }
}
