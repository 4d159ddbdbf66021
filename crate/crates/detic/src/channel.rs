//! The four-matrix deterministic channel, its reduction to the standing
//! full-rank assumptions, and the rank profile that determines the
//! capacity region.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{self, interference_decomposition};
use crate::matrix::Matrix;

/// Transition matrices of the two-user channel:
/// `y1 = h11 x1 + h12 x2`, `y2 = h21 x1 + h22 x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelQuadruple {
    field: FieldSpec,
    h11: Matrix,
    h12: Matrix,
    h21: Matrix,
    h22: Matrix,
}

/// Which input/output coordinates the reduction kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub rx1_rows: Vec<usize>,
    pub rx2_rows: Vec<usize>,
    pub tx1_cols: Vec<usize>,
    pub tx2_cols: Vec<usize>,
}

impl ReductionReport {
    pub fn is_identity(&self, ch: &ChannelQuadruple) -> bool {
        self.rx1_rows.len() == ch.n1()
            && self.rx2_rows.len() == ch.n2()
            && self.tx1_cols.len() == ch.m1()
            && self.tx2_cols.len() == ch.m2()
    }
}

impl ChannelQuadruple {
    pub fn new(h11: Matrix, h12: Matrix, h21: Matrix, h22: Matrix) -> Result<Self> {
        let field = h11.field();
        if [&h12, &h21, &h22].iter().any(|m| m.field() != field) {
            return Err(Error::FieldMismatch);
        }
        if h11.rows() != h12.rows()
            || h21.rows() != h22.rows()
            || h11.cols() != h21.cols()
            || h12.cols() != h22.cols()
        {
            return Err(Error::DimensionMismatch(format!(
                "inconsistent channel blocks: h11 {}x{}, h12 {}x{}, h21 {}x{}, h22 {}x{}",
                h11.rows(),
                h11.cols(),
                h12.rows(),
                h12.cols(),
                h21.rows(),
                h21.cols(),
                h22.rows(),
                h22.cols()
            )));
        }
        Ok(ChannelQuadruple {
            field,
            h11,
            h12,
            h21,
            h22,
        })
    }

    pub fn random<R: Rng + ?Sized>(
        field: FieldSpec,
        (m1, m2, n1, n2): (usize, usize, usize, usize),
        rng: &mut R,
    ) -> Self {
        ChannelQuadruple {
            field,
            h11: Matrix::random(field, n1, m1, rng),
            h12: Matrix::random(field, n1, m2, rng),
            h21: Matrix::random(field, n2, m1, rng),
            h22: Matrix::random(field, n2, m2, rng),
        }
    }

    /// Random channel conditioned on the nondegenerate case: every block of
    /// full rank and both padded cross matrices of generic rank, which is
    /// the regime where the capacity region collapses to the min/max form.
    ///
    /// The padded cross matrices carry a structural zero block, so their
    /// generic rank is the maximum matching of the support pattern, not
    /// `min(m1+m2, n1+n2)`: the zero-padded rows can only cover one
    /// transmitter's columns.
    pub fn random_nondegenerate<R: Rng + ?Sized>(
        field: FieldSpec,
        dims @ (m1, m2, n1, n2): (usize, usize, usize, usize),
        rng: &mut R,
    ) -> Self {
        // [[h11, h12], [h21, 0]]: the n2 bottom rows reach only the m1
        // transmitter-1 columns; the n1 top rows reach everything.
        let bottom1 = n2.min(m1);
        let cross1_generic = bottom1 + n1.min(m1 + m2 - bottom1);
        // [[h21, h22], [0, h12]]: the n1 bottom rows reach only the m2
        // transmitter-2 columns.
        let bottom2 = n1.min(m2);
        let cross2_generic = bottom2 + n2.min(m1 + m2 - bottom2);
        loop {
            let ch = ChannelQuadruple::random(field, dims, rng);
            let blocks_full = linalg::rank(&ch.h11) == m1.min(n1)
                && linalg::rank(&ch.h12) == m2.min(n1)
                && linalg::rank(&ch.h21) == m1.min(n2)
                && linalg::rank(&ch.h22) == m2.min(n2);
            if blocks_full
                && linalg::rank(&ch.cross1_matrix()) == cross1_generic
                && linalg::rank(&ch.cross2_matrix()) == cross2_generic
            {
                return ch;
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn h11(&self) -> &Matrix {
        &self.h11
    }

    pub fn h12(&self) -> &Matrix {
        &self.h12
    }

    pub fn h21(&self) -> &Matrix {
        &self.h21
    }

    pub fn h22(&self) -> &Matrix {
        &self.h22
    }

    pub fn m1(&self) -> usize {
        self.h11.cols()
    }

    pub fn m2(&self) -> usize {
        self.h12.cols()
    }

    pub fn n1(&self) -> usize {
        self.h11.rows()
    }

    pub fn n2(&self) -> usize {
        self.h21.rows()
    }

    /// `[h11 h12]`: everything receiver 1 observes.
    pub fn rx1_matrix(&self) -> Matrix {
        self.h11.hstack(&self.h12).expect("row counts match")
    }

    pub fn rx2_matrix(&self) -> Matrix {
        self.h21.hstack(&self.h22).expect("row counts match")
    }

    /// `[h11; h21]`: everything transmitter 1 influences.
    pub fn tx1_matrix(&self) -> Matrix {
        self.h11.vstack(&self.h21).expect("column counts match")
    }

    pub fn tx2_matrix(&self) -> Matrix {
        self.h12.vstack(&self.h22).expect("column counts match")
    }

    /// `[[h11, h12], [h21, 0]]`.
    pub fn cross1_matrix(&self) -> Matrix {
        let top = self.rx1_matrix();
        let bottom = self
            .h21
            .hstack(&Matrix::zeros(self.field, self.n2(), self.m2()))
            .expect("row counts match");
        top.vstack(&bottom).expect("column counts match")
    }

    /// `[[h21, h22], [0, h12]]`.
    pub fn cross2_matrix(&self) -> Matrix {
        let top = self.rx2_matrix();
        let bottom = Matrix::zeros(self.field, self.n1(), self.m1())
            .hstack(&self.h12)
            .expect("row counts match");
        top.vstack(&bottom).expect("column counts match")
    }

    /// Whether the four standing rank assumptions hold: receiver matrices of
    /// full row rank, transmitter matrices of full column rank.
    pub fn is_reduced(&self) -> bool {
        linalg::rank(&self.rx1_matrix()) == self.n1()
            && linalg::rank(&self.rx2_matrix()) == self.n2()
            && linalg::rank(&self.tx1_matrix()) == self.m1()
            && linalg::rank(&self.tx2_matrix()) == self.m2()
    }

    /// Discards dependent received symbols and redundant transmit symbols.
    ///
    /// Kept rows are the lexicographically-first independent rows of each
    /// receiver matrix; kept columns the first independent columns of each
    /// transmitter matrix. The six rank quantities of the profile are
    /// unchanged, so the capacity region is too.
    pub fn reduce(&self) -> (ChannelQuadruple, ReductionReport) {
        let rx1_rows = linalg::pivot_rows(&self.rx1_matrix());
        let rx2_rows = linalg::pivot_rows(&self.rx2_matrix());
        let h11 = self.h11.select_rows(&rx1_rows);
        let h12 = self.h12.select_rows(&rx1_rows);
        let h21 = self.h21.select_rows(&rx2_rows);
        let h22 = self.h22.select_rows(&rx2_rows);

        let tx1_cols = linalg::rank_rref(
            &h11.vstack(&h21).expect("column counts match"),
        )
        .pivots;
        let tx2_cols = linalg::rank_rref(
            &h12.vstack(&h22).expect("column counts match"),
        )
        .pivots;

        let reduced = ChannelQuadruple {
            field: self.field,
            h11: h11.select_cols(&tx1_cols),
            h12: h12.select_cols(&tx2_cols),
            h21: h21.select_cols(&tx1_cols),
            h22: h22.select_cols(&tx2_cols),
        };
        debug_assert!(reduced.is_reduced());
        (
            reduced,
            ReductionReport {
                rx1_rows,
                rx2_rows,
                tx1_cols,
                tx2_cols,
            },
        )
    }

    /// Exchanges the two user indices; the capacity region mirrors across
    /// the rate diagonal.
    pub fn swap_users(&self) -> ChannelQuadruple {
        ChannelQuadruple {
            field: self.field,
            h11: self.h22.clone(),
            h12: self.h21.clone(),
            h21: self.h12.clone(),
            h22: self.h11.clone(),
        }
    }

    /// All eight rank quantities, with the block-rank identities checked
    /// against the decomposition route.
    pub fn rank_profile(&self) -> Result<RankProfile> {
        RankProfile::compute(self)
    }
}

/// Ranks of the channel blocks, of the two padded cross matrices, and of
/// the zero-forced direct channels.
///
/// `zf1` is the rank of user 1's direct channel as seen through the
/// interference-free output coordinates at receiver 1 while transmitting in
/// the null space of the cross channel to receiver 2 (`zf2` mirrored). The
/// identities `cross = zf + r12 + r21` tie the two computation routes
/// together and are verified on every call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub r11: usize,
    pub r12: usize,
    pub r21: usize,
    pub r22: usize,
    pub cross1: usize,
    pub cross2: usize,
    pub zf1: usize,
    pub zf2: usize,
}

impl RankProfile {
    fn compute(ch: &ChannelQuadruple) -> Result<RankProfile> {
        let r11 = linalg::rank(ch.h11());
        let r12 = linalg::rank(ch.h12());
        let r21 = linalg::rank(ch.h21());
        let r22 = linalg::rank(ch.h22());
        let cross1 = linalg::rank(&ch.cross1_matrix());
        let cross2 = linalg::rank(&ch.cross2_matrix());

        let dec12 = interference_decomposition(ch.h12());
        let dec21 = interference_decomposition(ch.h21());
        let zf1 = linalg::rank(
            &dec12
                .w_bot()
                .mul(ch.h11())?
                .mul(&dec21.v_kernel())?,
        );
        let zf2 = linalg::rank(
            &dec21
                .w_bot()
                .mul(ch.h22())?
                .mul(&dec12.v_kernel())?,
        );

        if cross1 != zf1 + r21 + r12 || cross2 != zf2 + r21 + r12 {
            return Err(Error::Internal(format!(
                "block-rank identity failed: cross1={cross1} zf1={zf1} cross2={cross2} zf2={zf2} r12={r12} r21={r21}"
            )));
        }
        Ok(RankProfile {
            r11,
            r12,
            r21,
            r22,
            cross1,
            cross2,
            zf1,
            zf2,
        })
    }
}

/// Reference channel fixture over F7, shaped like a small double-unicast
/// network realization; its region, splits and codec vectors are known in
/// closed form and pinned across the test suites.
pub fn example_channel() -> ChannelQuadruple {
    let f = FieldSpec::prime(7).expect("7 is prime");
    ChannelQuadruple::new(
        Matrix::from_int_rows(f, &[vec![2, 0], vec![2, 3]]).expect("shape"),
        Matrix::from_int_rows(f, &[vec![2, 1, 0], vec![2, 1, 1]]).expect("shape"),
        Matrix::from_int_rows(f, &[vec![1, 0], vec![2, 3], vec![2, 3]]).expect("shape"),
        Matrix::from_int_rows(f, &[vec![1, 0, 0], vec![2, 1, 0], vec![2, 1, 1]]).expect("shape"),
    )
    .expect("consistent dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_channel_profile() {
        let ch = example_channel();
        assert!(ch.is_reduced());
        let p = ch.rank_profile().unwrap();
        assert_eq!(
            p,
            RankProfile {
                r11: 2,
                r12: 2,
                r21: 2,
                r22: 3,
                cross1: 4,
                cross2: 4,
                zf1: 0,
                zf2: 0,
            }
        );
    }

    #[test]
    fn already_reduced_channel_is_unchanged() {
        let ch = example_channel();
        let (red, report) = ch.reduce();
        assert_eq!(red, ch);
        assert!(report.is_identity(&ch));
    }

    #[test]
    fn identity_channel_profile() {
        let f = FieldSpec::prime(7).unwrap();
        let ch = ChannelQuadruple::new(
            Matrix::identity(f, 2),
            Matrix::zeros(f, 2, 2),
            Matrix::zeros(f, 2, 2),
            Matrix::identity(f, 2),
        )
        .unwrap();
        let p = ch.rank_profile().unwrap();
        assert_eq!((p.r11, p.r22, p.r12, p.r21), (2, 2, 0, 0));
        assert_eq!((p.cross1, p.cross2), (2, 2));
    }

    #[test]
    fn generic_rational_channel_has_full_cross_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = ChannelQuadruple::random_nondegenerate(
            FieldSpec::Rational,
            (2, 2, 2, 2),
            &mut rng,
        );
        let p = ch.rank_profile().unwrap();
        assert_eq!((p.cross1, p.cross2), (4, 4));
    }

    #[test]
    fn duplicated_row_is_removed_by_reduction() {
        let ch = example_channel();
        // Duplicate receiver 1's first row.
        let dup = |m: &Matrix| m.select_rows(&[0, 0, 1]);
        let bigger =
            ChannelQuadruple::new(dup(ch.h11()), dup(ch.h12()), ch.h21().clone(), ch.h22().clone())
                .unwrap();
        assert!(!bigger.is_reduced());
        let (red, report) = bigger.reduce();
        assert_eq!(red.n1(), 2);
        assert_eq!(report.rx1_rows, vec![0, 2]);
        assert_eq!(red.rank_profile().unwrap(), ch.rank_profile().unwrap());
        assert!(crate::region::capacity_region(&red)
            .set_eq(&crate::region::capacity_region(&ch)));
    }

    #[test]
    fn zero_row_is_removed_by_reduction() {
        let f = FieldSpec::prime(7).unwrap();
        let ch = ChannelQuadruple::new(
            Matrix::from_int_rows(f, &[vec![1], vec![0]]).unwrap(),
            Matrix::from_int_rows(f, &[vec![2], vec![0]]).unwrap(),
            Matrix::from_int_rows(f, &[vec![1]]).unwrap(),
            Matrix::from_int_rows(f, &[vec![1]]).unwrap(),
        )
        .unwrap();
        let (red, report) = ch.reduce();
        assert_eq!(red.n1(), 1);
        assert_eq!(report.rx1_rows, vec![0]);
        assert!(red.is_reduced());
    }

    #[test]
    fn reduction_preserves_all_profile_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let fields = [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::Rational,
        ];
        for field in fields {
            for _ in 0..25 {
                let dims = (
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                );
                let ch = ChannelQuadruple::random(field, dims, &mut rng);
                let before = ch.rank_profile().unwrap();
                let (red, _) = ch.reduce();
                let after = red.rank_profile().unwrap();
                assert_eq!(before, after);
            }
        }
    }
}
