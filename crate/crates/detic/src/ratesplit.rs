//! Achievability: common/private rate splits, randomized spreading
//! precoders, and exact encode → channel → decode round trips.
//!
//! Each transmitter splits its symbols into a common part, decodable at
//! both receivers, and a private part that is zero-forced into the null
//! space of the cross channel. Random spreading matrices lift the split
//! into the transformed input coordinates; decoding is a left inverse of
//! the resulting full-column-rank system matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::ChannelQuadruple;
use crate::error::{Error, Result};
use crate::linalg::{self, interference_decomposition, left_inverse, InterferenceDecomposition};
use crate::matrix::Matrix;

pub const DEFAULT_RETRY_BUDGET: u32 = 32;

/// How many symbols of each user are common vs private.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateSplit {
    pub r1c: usize,
    pub r1p: usize,
    pub r2c: usize,
    pub r2p: usize,
}

impl RateSplit {
    pub fn r1(&self) -> usize {
        self.r1c + self.r1p
    }

    pub fn r2(&self) -> usize {
        self.r2c + self.r2p
    }
}

/// The seven decodability bounds at one receiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeBounds {
    /// Own common symbols: rank of the direct channel restricted to the
    /// common input directions.
    pub common_own: usize,
    /// Own private symbols: dimension of the cross-channel null space.
    pub private_own: usize,
    /// The other user's common symbols: rank of the incoming cross channel.
    pub common_other: usize,
    /// Own common + private together: rank of the direct channel.
    pub own_total: usize,
    /// Own common + other common.
    pub common_pair: usize,
    /// Own private + other common.
    pub private_common_pair: usize,
    /// Everything this receiver must solve for: its output dimension.
    pub all: usize,
}

/// Decodability bounds at both receivers; a split is feasible when all
/// fourteen inequalities hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitBounds {
    pub rx1: DecodeBounds,
    pub rx2: DecodeBounds,
}

impl SplitBounds {
    pub fn feasible(&self, s: &RateSplit) -> bool {
        let rx1 = &self.rx1;
        let rx2 = &self.rx2;
        s.r1c <= rx1.common_own
            && s.r1p <= rx1.private_own
            && s.r2c <= rx1.common_other
            && s.r1c + s.r1p <= rx1.own_total
            && s.r1c + s.r2c <= rx1.common_pair
            && s.r1p + s.r2c <= rx1.private_common_pair
            && s.r1c + s.r1p + s.r2c <= rx1.all
            && s.r2c <= rx2.common_own
            && s.r2p <= rx2.private_own
            && s.r1c <= rx2.common_other
            && s.r2c + s.r2p <= rx2.own_total
            && s.r2c + s.r1c <= rx2.common_pair
            && s.r2p + s.r1c <= rx2.private_common_pair
            && s.r2c + s.r2p + s.r1c <= rx2.all
    }
}

/// Computes the fourteen decodability bounds from the two cross-channel
/// decompositions (`dec12` for the channel into receiver 1, `dec21` for
/// the channel out of transmitter 1).
pub fn split_bounds(
    ch: &ChannelQuadruple,
    dec12: &InterferenceDecomposition,
    dec21: &InterferenceDecomposition,
) -> Result<SplitBounds> {
    let r12 = dec12.rank;
    let r21 = dec21.rank;
    let r11 = linalg::rank(ch.h11());
    let r22 = linalg::rank(ch.h22());

    let rx1 = DecodeBounds {
        common_own: linalg::rank(&ch.h11().mul(&dec21.v_pre())?),
        private_own: ch.m1() - r21,
        common_other: r12,
        own_total: r11,
        common_pair: r12 + linalg::rank(&dec12.w_bot().mul(ch.h11())?.mul(&dec21.v_pre())?),
        private_common_pair: r12
            + linalg::rank(&dec12.w_bot().mul(ch.h11())?.mul(&dec21.v_kernel())?),
        all: ch.n1(),
    };
    let rx2 = DecodeBounds {
        common_own: linalg::rank(&ch.h22().mul(&dec12.v_pre())?),
        private_own: ch.m2() - r12,
        common_other: r21,
        own_total: r22,
        common_pair: r21 + linalg::rank(&dec21.w_bot().mul(ch.h22())?.mul(&dec12.v_pre())?),
        private_common_pair: r21
            + linalg::rank(&dec21.w_bot().mul(ch.h22())?.mul(&dec12.v_kernel())?),
        all: ch.n2(),
    };
    Ok(SplitBounds { rx1, rx2 })
}

/// Convenience wrapper computing the decompositions internally.
pub fn channel_split_bounds(ch: &ChannelQuadruple) -> Result<SplitBounds> {
    let dec12 = interference_decomposition(ch.h12());
    let dec21 = interference_decomposition(ch.h21());
    split_bounds(ch, &dec12, &dec21)
}

/// The lexicographically-smallest feasible `(r1c, r2c)` split for an
/// integer rate target, or `None` when the target is unachievable.
pub fn find_split(bounds: &SplitBounds, r1: usize, r2: usize) -> Option<RateSplit> {
    for r1c in 0..=r1 {
        for r2c in 0..=r2 {
            let s = RateSplit {
                r1c,
                r1p: r1 - r1c,
                r2c,
                r2p: r2 - r2c,
            };
            if bounds.feasible(&s) {
                return Some(s);
            }
        }
    }
    None
}

/// Messages to be sent: user 1's symbols (common part first), then user 2's.
#[derive(Clone, Debug, PartialEq)]
pub struct MessageVectors {
    pub d1: Matrix,
    pub d2: Matrix,
}

impl MessageVectors {
    pub fn from_ints(ch_field: crate::field::FieldSpec, d1: &[i64], d2: &[i64]) -> Self {
        MessageVectors {
            d1: Matrix::col_vec(ch_field, d1),
            d2: Matrix::col_vec(ch_field, d2),
        }
    }

    pub fn random<R: Rng + ?Sized>(
        field: crate::field::FieldSpec,
        split: &RateSplit,
        rng: &mut R,
    ) -> Self {
        MessageVectors {
            d1: Matrix::random(field, split.r1(), 1, rng),
            d2: Matrix::random(field, split.r2(), 1, rng),
        }
    }
}

/// A fully built achievability scheme: spreading matrices, the two
/// cross-channel decompositions, and the decode system matrices with their
/// left inverses.
#[derive(Clone, Debug)]
pub struct Codec {
    pub split: RateSplit,
    pub e1c: Matrix,
    pub e1p: Matrix,
    pub e2c: Matrix,
    pub e2p: Matrix,
    pub dec12: InterferenceDecomposition,
    pub dec21: InterferenceDecomposition,
    pub sys_rx1: Matrix,
    pub sys_rx1_pinv: Matrix,
    pub sys_rx2: Matrix,
    pub sys_rx2_pinv: Matrix,
    pub seed: u64,
    pub attempts: u32,
}

/// Explicit ingredients for a codec, bypassing the random draw; used to
/// replay worked examples and golden fixtures exactly.
#[derive(Clone, Debug)]
pub struct CodecParts {
    pub e1c: Matrix,
    pub e1p: Matrix,
    pub e2c: Matrix,
    pub e2p: Matrix,
    pub dec12: InterferenceDecomposition,
    pub dec21: InterferenceDecomposition,
}

fn assemble(
    ch: &ChannelQuadruple,
    split: &RateSplit,
    parts: &CodecParts,
) -> Result<(Matrix, Matrix)> {
    let r12 = parts.dec12.rank;
    let r21 = parts.dec21.rank;
    let dims_ok = parts.e1c.rows() == r21
        && parts.e1c.cols() == split.r1c
        && parts.e1p.rows() == ch.m1() - r21
        && parts.e1p.cols() == split.r1p
        && parts.e2c.rows() == r12
        && parts.e2c.cols() == split.r2c
        && parts.e2p.rows() == ch.m2() - r12
        && parts.e2p.cols() == split.r2p;
    if !dims_ok {
        return Err(Error::DimensionMismatch(
            "spreading matrices do not match the split".into(),
        ));
    }
    let sys_rx1 = parts.dec12.w.mul(
        &ch.h11()
            .mul(&parts.dec21.v_pre())?
            .mul(&parts.e1c)?
            .hstack(&ch.h11().mul(&parts.dec21.v_kernel())?.mul(&parts.e1p)?)?
            .hstack(&ch.h12().mul(&parts.dec12.v_pre())?.mul(&parts.e2c)?)?,
    )?;
    let sys_rx2 = parts.dec21.w.mul(
        &ch.h22()
            .mul(&parts.dec12.v_pre())?
            .mul(&parts.e2c)?
            .hstack(&ch.h22().mul(&parts.dec12.v_kernel())?.mul(&parts.e2p)?)?
            .hstack(&ch.h21().mul(&parts.dec21.v_pre())?.mul(&parts.e1c)?)?,
    )?;
    Ok((sys_rx1, sys_rx2))
}

/// Builds a codec from explicit parts, verifying the decomposition
/// invariants and the full-column-rank decode condition.
pub fn build_codec_from_parts(
    ch: &ChannelQuadruple,
    split: RateSplit,
    parts: CodecParts,
) -> Result<Codec> {
    parts.dec12.verify_against(ch.h12())?;
    parts.dec21.verify_against(ch.h21())?;
    let (sys_rx1, sys_rx2) = assemble(ch, &split, &parts)?;
    let rank1 = linalg::rank(&sys_rx1);
    let rank2 = linalg::rank(&sys_rx2);
    if rank1 != sys_rx1.cols() || rank2 != sys_rx2.cols() {
        return Err(Error::RetryBudget {
            attempts: 1,
            detail: format!(
                "decode matrices rank-deficient: rx1 {}/{}, rx2 {}/{}",
                rank1,
                sys_rx1.cols(),
                rank2,
                sys_rx2.cols()
            ),
        });
    }
    let sys_rx1_pinv = left_inverse(&sys_rx1)?;
    let sys_rx2_pinv = left_inverse(&sys_rx2)?;
    Ok(Codec {
        split,
        e1c: parts.e1c,
        e1p: parts.e1p,
        e2c: parts.e2c,
        e2p: parts.e2p,
        dec12: parts.dec12,
        dec21: parts.dec21,
        sys_rx1,
        sys_rx1_pinv,
        sys_rx2,
        sys_rx2_pinv,
        seed: 0,
        attempts: 0,
    })
}

fn attempt_rng(seed: u64, attempt: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E3779B97F4A7C15)))
}

/// Draws i.i.d. uniform spreading matrices from a seeded stream, redrawing
/// with a freshly derived stream until both decode matrices have full
/// column rank or the budget runs out.
pub fn build_codec(
    ch: &ChannelQuadruple,
    split: RateSplit,
    seed: u64,
    retry_budget: u32,
) -> Result<Codec> {
    let dec12 = interference_decomposition(ch.h12());
    let dec21 = interference_decomposition(ch.h21());
    let field = ch.field();
    let r12 = dec12.rank;
    let r21 = dec21.rank;
    let mut last_detail = String::new();
    for attempt in 0..retry_budget.max(1) {
        let mut rng = attempt_rng(seed, attempt);
        let parts = CodecParts {
            e1c: Matrix::random(field, r21, split.r1c, &mut rng),
            e1p: Matrix::random(field, ch.m1() - r21, split.r1p, &mut rng),
            e2c: Matrix::random(field, r12, split.r2c, &mut rng),
            e2p: Matrix::random(field, ch.m2() - r12, split.r2p, &mut rng),
            dec12: dec12.clone(),
            dec21: dec21.clone(),
        };
        let (sys_rx1, sys_rx2) = assemble(ch, &split, &parts)?;
        let rank1 = linalg::rank(&sys_rx1);
        let rank2 = linalg::rank(&sys_rx2);
        if rank1 == sys_rx1.cols() && rank2 == sys_rx2.cols() {
            let sys_rx1_pinv = left_inverse(&sys_rx1)?;
            let sys_rx2_pinv = left_inverse(&sys_rx2)?;
            return Ok(Codec {
                split,
                e1c: parts.e1c,
                e1p: parts.e1p,
                e2c: parts.e2c,
                e2p: parts.e2p,
                dec12: parts.dec12,
                dec21: parts.dec21,
                sys_rx1,
                sys_rx1_pinv,
                sys_rx2,
                sys_rx2_pinv,
                seed,
                attempts: attempt + 1,
            });
        }
        last_detail = format!(
            "decode matrices rank-deficient: rx1 {}/{}, rx2 {}/{}",
            rank1,
            sys_rx1.cols(),
            rank2,
            sys_rx2.cols()
        );
    }
    Err(Error::RetryBudget {
        attempts: retry_budget.max(1),
        detail: last_detail,
    })
}

impl Codec {
    fn check_message_lengths(&self, msgs: &MessageVectors) -> Result<()> {
        if msgs.d1.rows() != self.split.r1()
            || msgs.d1.cols() != 1
            || msgs.d2.rows() != self.split.r2()
            || msgs.d2.cols() != 1
        {
            return Err(Error::DimensionMismatch(format!(
                "messages must be {}x1 and {}x1",
                self.split.r1(),
                self.split.r2()
            )));
        }
        Ok(())
    }

    /// Maps messages to channel inputs: spread each block, then change
    /// coordinates back through the input-side basis.
    pub fn encode(&self, msgs: &MessageVectors) -> Result<(Matrix, Matrix)> {
        self.check_message_lengths(msgs)?;
        let s = &self.split;
        let d1c = msgs.d1.row_range(0, s.r1c);
        let d1p = msgs.d1.row_range(s.r1c, s.r1c + s.r1p);
        let d2c = msgs.d2.row_range(0, s.r2c);
        let d2p = msgs.d2.row_range(s.r2c, s.r2c + s.r2p);
        let x1_t = self.e1c.mul(&d1c)?.vstack(&self.e1p.mul(&d1p)?)?;
        let x2_t = self.e2c.mul(&d2c)?.vstack(&self.e2p.mul(&d2p)?)?;
        let x1 = self.dec21.v_basis.mul(&x1_t)?;
        let x2 = self.dec12.v_basis.mul(&x2_t)?;
        Ok((x1, x2))
    }

    /// Receiver 1: returns `(d1c, d1p, d2c)` exactly.
    pub fn decode_rx1(&self, y1: &Matrix) -> Result<(Matrix, Matrix, Matrix)> {
        let t = self.dec12.w.mul(y1)?;
        let d = self.sys_rx1_pinv.mul(&t)?;
        let s = &self.split;
        Ok((
            d.row_range(0, s.r1c),
            d.row_range(s.r1c, s.r1c + s.r1p),
            d.row_range(s.r1c + s.r1p, s.r1c + s.r1p + s.r2c),
        ))
    }

    /// Receiver 2: returns `(d2c, d2p, d1c)` exactly.
    pub fn decode_rx2(&self, y2: &Matrix) -> Result<(Matrix, Matrix, Matrix)> {
        let t = self.dec21.w.mul(y2)?;
        let d = self.sys_rx2_pinv.mul(&t)?;
        let s = &self.split;
        Ok((
            d.row_range(0, s.r2c),
            d.row_range(s.r2c, s.r2c + s.r2p),
            d.row_range(s.r2c + s.r2p, s.r2c + s.r2p + s.r1c),
        ))
    }
}

/// Applies the channel: `y1 = h11 x1 + h12 x2`, `y2 = h21 x1 + h22 x2`.
pub fn transmit(ch: &ChannelQuadruple, x1: &Matrix, x2: &Matrix) -> Result<(Matrix, Matrix)> {
    let y1 = ch.h11().mul(x1)?.add(&ch.h12().mul(x2)?)?;
    let y2 = ch.h21().mul(x1)?.add(&ch.h22().mul(x2)?)?;
    Ok((y1, y2))
}

/// Encode, transmit, decode; true when both receivers recover their
/// symbols exactly (including the other user's common block).
pub fn round_trip_exact(ch: &ChannelQuadruple, codec: &Codec, msgs: &MessageVectors) -> Result<bool> {
    let (x1, x2) = codec.encode(msgs)?;
    let (y1, y2) = transmit(ch, &x1, &x2)?;
    let (d1c, d1p, d2c_at1) = codec.decode_rx1(&y1)?;
    let (d2c, d2p, d1c_at2) = codec.decode_rx2(&y2)?;
    let s = &codec.split;
    let want_d1c = msgs.d1.row_range(0, s.r1c);
    let want_d1p = msgs.d1.row_range(s.r1c, s.r1());
    let want_d2c = msgs.d2.row_range(0, s.r2c);
    let want_d2p = msgs.d2.row_range(s.r2c, s.r2());
    Ok(d1c == want_d1c
        && d1p == want_d1p
        && d2c_at1 == want_d2c
        && d2c == want_d2c
        && d2p == want_d2p
        && d1c_at2 == want_d1c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::example_channel;
    use crate::field::FieldSpec;
    use crate::region::{capacity_region, RatePair};
    use num::ToPrimitive;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    /// Hand-picked decompositions for the F7 reference channel.
    fn example_parts(e1c: Matrix, e2c: Matrix, e2p: Matrix) -> CodecParts {
        let f = f7();
        let u12 = Matrix::from_int_rows(f, &[vec![1, 0], vec![1, 1]]).unwrap();
        let w12 = linalg::inverse(&u12).unwrap();
        let v12 = Matrix::from_int_rows(f, &[vec![2, 2, 1], vec![1, 1, 5], vec![0, 1, 0]]).unwrap();
        let h12 = example_channel().h12().clone();
        let d12 = w12
            .row_range(0, 2)
            .mul(&h12)
            .unwrap()
            .mul(&v12.col_range(0, 2))
            .unwrap();
        let dec12 = InterferenceDecomposition {
            rank: 2,
            u_basis: u12,
            w: w12,
            v_basis: v12,
            d: d12,
        };

        let u21 =
            Matrix::from_int_rows(f, &[vec![1, 0, 0], vec![2, 3, 3], vec![2, 3, 4]]).unwrap();
        let w21 = linalg::inverse(&u21).unwrap();
        let v21 = Matrix::from_int_rows(f, &[vec![1, 2], vec![0, 3]]).unwrap();
        let h21 = example_channel().h21().clone();
        let d21 = w21
            .row_range(0, 2)
            .mul(&h21)
            .unwrap()
            .mul(&v21.col_range(0, 2))
            .unwrap();
        let dec21 = InterferenceDecomposition {
            rank: 2,
            u_basis: u21,
            w: w21,
            v_basis: v21,
            d: d21,
        };

        CodecParts {
            e1c,
            e1p: Matrix::zeros(f, 0, 0),
            e2c,
            e2p,
            dec12,
            dec21,
        }
    }

    fn example_codec() -> (ChannelQuadruple, Codec) {
        let ch = example_channel();
        let f = f7();
        let parts = example_parts(
            Matrix::col_vec(f, &[4, 3]),
            Matrix::col_vec(f, &[2, 3]),
            Matrix::from_int_rows(f, &[vec![3]]).unwrap(),
        );
        let split = RateSplit {
            r1c: 1,
            r1p: 0,
            r2c: 1,
            r2p: 1,
        };
        let codec = build_codec_from_parts(&ch, split, parts).unwrap();
        (ch, codec)
    }

    #[test]
    fn example_bounds() {
        let ch = example_channel();
        let b = channel_split_bounds(&ch).unwrap();
        assert_eq!(b.rx1.common_other, 2);
        assert_eq!(b.rx2.common_other, 2);
        assert_eq!(b.rx1.private_own, 0);
        assert_eq!(b.rx2.private_own, 1);
        assert_eq!(b.rx1.all, 2);
        assert_eq!(b.rx2.all, 3);
    }

    #[test]
    fn no_interference_bounds_force_private_traffic() {
        let f = f7();
        let ch = ChannelQuadruple::new(
            Matrix::identity(f, 2),
            Matrix::zeros(f, 2, 2),
            Matrix::zeros(f, 2, 2),
            Matrix::identity(f, 2),
        )
        .unwrap();
        let b = channel_split_bounds(&ch).unwrap();
        assert_eq!(b.rx1.common_other, 0);
        assert_eq!(b.rx2.common_other, 0);
        assert_eq!(b.rx1.private_own, 2);
        assert_eq!(b.rx2.private_own, 2);
    }

    #[test]
    fn scalar_all_ones_bounds() {
        let f = FieldSpec::Rational;
        let one = Matrix::from_int_rows(f, &[vec![1]]).unwrap();
        let ch = ChannelQuadruple::new(one.clone(), one.clone(), one.clone(), one).unwrap();
        let b = channel_split_bounds(&ch).unwrap();
        assert_eq!(b.rx1.private_own, 0);
        assert_eq!(b.rx1.common_other, 1);
    }

    #[test]
    fn example_split_search() {
        let ch = example_channel();
        let b = channel_split_bounds(&ch).unwrap();
        assert_eq!(
            find_split(&b, 1, 2),
            Some(RateSplit {
                r1c: 1,
                r1p: 0,
                r2c: 1,
                r2p: 1
            })
        );
        assert_eq!(
            find_split(&b, 0, 0),
            Some(RateSplit {
                r1c: 0,
                r1p: 0,
                r2c: 0,
                r2p: 0
            })
        );
        assert_eq!(find_split(&b, 2, 2), None);
    }

    #[test]
    fn golden_codec_reproduces_printed_vectors() {
        let (ch, codec) = example_codec();
        // Symbolic check at a specific message triple: d11=1, d21=2, d22=3.
        let msgs = MessageVectors::from_ints(f7(), &[1], &[2, 3]);
        let (x1, x2) = codec.encode(&msgs).unwrap();
        assert_eq!(x1, Matrix::col_vec(f7(), &[3, 2]));
        // x2 = (3*2+3*3, 5*2+3, 3*2) = (15, 13, 6) = (1, 6, 6) mod 7.
        assert_eq!(x2, Matrix::col_vec(f7(), &[1, 6, 6]));
        let (y1, y2) = transmit(&ch, &x1, &x2).unwrap();
        // y1 = (6*1+4*2, 5*1) = (0, 5) mod 7.
        assert_eq!(y1, Matrix::col_vec(f7(), &[0, 5]));
        // y2 = (3*2+3*3+3*1, 4*2+5*1, 5*1) = (18, 13, 5) = (4, 6, 5).
        assert_eq!(y2, Matrix::col_vec(f7(), &[4, 6, 5]));
        assert!(round_trip_exact(&ch, &codec, &msgs).unwrap());
    }

    #[test]
    fn golden_codec_symbolic_over_random_messages() {
        let (ch, codec) = example_codec();
        let f = f7();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let d11 = rng.gen_range(0..7) as i64;
            let d21 = rng.gen_range(0..7) as i64;
            let d22 = rng.gen_range(0..7) as i64;
            let msgs = MessageVectors::from_ints(f, &[d11], &[d21, d22]);
            let (x1, x2) = codec.encode(&msgs).unwrap();
            assert_eq!(x1, Matrix::col_vec(f, &[3 * d11, 2 * d11]));
            assert_eq!(
                x2,
                Matrix::col_vec(f, &[3 * d21 + 3 * d22, 5 * d21 + d22, 3 * d21])
            );
            let (y1, y2) = transmit(&ch, &x1, &x2).unwrap();
            assert_eq!(y1, Matrix::col_vec(f, &[6 * d11 + 4 * d21, 5 * d11]));
            assert_eq!(
                y2,
                Matrix::col_vec(f, &[3 * d21 + 3 * d22 + 3 * d11, 4 * d21 + 5 * d11, 5 * d11])
            );
            assert!(round_trip_exact(&ch, &codec, &msgs).unwrap());
        }
    }

    #[test]
    fn zero_messages_give_zero_signals() {
        let (ch, codec) = example_codec();
        let msgs = MessageVectors::from_ints(f7(), &[0], &[0, 0]);
        let (x1, x2) = codec.encode(&msgs).unwrap();
        assert!(x1.is_zero() && x2.is_zero());
        let (y1, y2) = transmit(&ch, &x1, &x2).unwrap();
        assert!(y1.is_zero() && y2.is_zero());
        assert!(round_trip_exact(&ch, &codec, &msgs).unwrap());
    }

    #[test]
    fn decode_recovers_from_received_vector() {
        let (_, codec) = example_codec();
        let y1 = Matrix::col_vec(f7(), &[0, 5]);
        let (d1c, _, d2c) = codec.decode_rx1(&y1).unwrap();
        assert_eq!(d1c, Matrix::col_vec(f7(), &[1]));
        assert_eq!(d2c, Matrix::col_vec(f7(), &[2]));
    }

    #[test]
    fn empty_split_gives_empty_codec() {
        let ch = example_channel();
        let split = RateSplit {
            r1c: 0,
            r1p: 0,
            r2c: 0,
            r2p: 0,
        };
        let codec = build_codec(&ch, split, 1, 4).unwrap();
        assert_eq!(codec.sys_rx1.cols(), 0);
        let msgs = MessageVectors::from_ints(f7(), &[], &[]);
        let (x1, x2) = codec.encode(&msgs).unwrap();
        assert!(x1.is_zero() && x2.is_zero());
        assert!(round_trip_exact(&ch, &codec, &msgs).unwrap());
    }

    #[test]
    fn random_codec_round_trips_at_example_rate() {
        let ch = example_channel();
        let b = channel_split_bounds(&ch).unwrap();
        let split = find_split(&b, 1, 2).unwrap();
        for seed in 0..8u64 {
            let codec = build_codec(&ch, split, seed, DEFAULT_RETRY_BUDGET).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            for _ in 0..5 {
                let msgs = MessageVectors::random(f7(), &split, &mut rng);
                assert!(round_trip_exact(&ch, &codec, &msgs).unwrap());
            }
        }
    }

    #[test]
    fn zero_forcing_hides_private_symbols() {
        let ch = example_channel();
        let b = channel_split_bounds(&ch).unwrap();
        let split = find_split(&b, 1, 2).unwrap();
        assert_eq!(split.r2p, 1);
        let codec = build_codec(&ch, split, 7, DEFAULT_RETRY_BUDGET).unwrap();
        // Vary d2p only: y1 must not move.
        let base = MessageVectors::from_ints(f7(), &[3], &[5, 0]);
        let varied = MessageVectors::from_ints(f7(), &[3], &[5, 6]);
        let (x1a, x2a) = codec.encode(&base).unwrap();
        let (x1b, x2b) = codec.encode(&varied).unwrap();
        let (y1a, _) = transmit(&ch, &x1a, &x2a).unwrap();
        let (y1b, _) = transmit(&ch, &x1b, &x2b).unwrap();
        assert_eq!(y1a, y1b);
    }

    /// Extended variant of the projection check below; run explicitly with
    /// `cargo test -- --ignored` when touching the decomposition or the
    /// split bounds.
    #[test]
    #[ignore = "heavy randomized stress; the seeded variant runs by default"]
    fn split_feasibility_stress() {
        let fields = [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0xACE);
        for field in fields {
            for _ in 0..2500 {
                let dims = (
                    rng.gen_range(1..5),
                    rng.gen_range(1..5),
                    rng.gen_range(1..5),
                    rng.gen_range(1..5),
                );
                let (ch, _) = ChannelQuadruple::random(field, dims, &mut rng).reduce();
                assert_split_matches_region(&ch);
            }
        }
    }

    fn assert_split_matches_region(ch: &ChannelQuadruple) {
        let region = capacity_region(ch);
        let bounds = channel_split_bounds(ch).unwrap();
        let max1 = region.max_r1().to_integer().to_i64().unwrap() as usize;
        let max2 = region.max_r2().to_integer().to_i64().unwrap() as usize;
        for r1 in 0..=max1 + 1 {
            for r2 in 0..=max2 + 1 {
                let inside = region.contains(&RatePair::from_ints(r1 as i64, r2 as i64));
                let split = find_split(&bounds, r1, r2);
                assert_eq!(
                    inside,
                    split.is_some(),
                    "channel {ch:?} rate ({r1},{r2}) inside={inside} split={split:?}"
                );
            }
        }
    }

    /// Extensional check of the projection claim: an integer pair is inside
    /// the capacity region exactly when a feasible split exists. Small
    /// fields and shapes hit the degenerate corners hardest.
    #[test]
    fn split_feasibility_matches_region_on_small_channels() {
        let fields = [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(7).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for field in fields {
            for _ in 0..150 {
                let dims = (
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                );
                let (ch, _) = ChannelQuadruple::random(field, dims, &mut rng).reduce();
                assert_split_matches_region(&ch);
            }
        }
    }
}
