//! Brute-force and statistical verification of the facts the rest of the
//! crate relies on: block-rank identities, product-rank formulas, subspace
//! counts, conditional-entropy bounds, and the probability that random
//! spreading preserves rank.
//!
//! Each check runs through a code path independent of the implementation
//! it scrutinizes: ranks are recomputed by a column-oriented eliminator,
//! entropies by exhaustive input enumeration, subspace counts by explicit
//! canonical-form generation.

use std::collections::HashMap;

use num::{BigRational, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::ChannelQuadruple;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, gaussian_binomial, random_with_rank};
use crate::matrix::Matrix;
use crate::ratesplit::{self, build_codec, find_split, MessageVectors};
use crate::region::{capacity_region, RatePair};

/// Rank by column-oriented elimination, scanning columns right-to-left and
/// keying reduced columns on their lowest nonzero entry. Deliberately a
/// different traversal from the row-echelon code it cross-checks.
pub fn independent_rank(m: &Matrix) -> usize {
    let f = m.field();
    let mut basis: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for j in (0..m.cols()).rev() {
        let mut col: Vec<Scalar> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
        while let Some(lead) = col.iter().rposition(|v| !f.is_zero(v)) {
            if let Some((_, stored)) = basis.iter().find(|(l, _)| *l == lead) {
                let factor = f.div(&col[lead], &stored[lead]).expect("lead is nonzero");
                for (c, s) in col.iter_mut().zip(stored.iter()) {
                    *c = f.sub(c, &f.mul(&factor, s));
                }
            } else {
                basis.push((lead, col));
                break;
            }
        }
    }
    basis.len()
}

/// Outcome counts of a Monte Carlo run.
#[derive(Clone, Debug)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    pub field: FieldSpec,
    pub params: String,
}

impl TrialReport {
    pub fn success_rate(&self) -> BigRational {
        BigRational::new(self.successes.into(), self.trials.max(1).into())
    }

    pub fn failure_rate(&self) -> BigRational {
        BigRational::new(
            (self.trials - self.successes).into(),
            self.trials.max(1).into(),
        )
    }

    /// Wilson score interval for the success probability.
    pub fn wilson_interval(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.successes, self.trials, z)
    }

    /// Whether the empirical success rate clears the analytic floor
    /// `1 - c/q` for the failure constant `c`.
    pub fn meets_floor(&self, q: u64, c: f64) -> bool {
        let rate = self.successes as f64 / self.trials.max(1) as f64;
        rate >= 1.0 - c / q as f64
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Shapes, prescribed ranks and draw widths for the triple-concatenation
/// full-rank experiment `rank([A1 E1, A2 E2, A3 E3]) = k1 + k2 + k3`.
#[derive(Clone, Copy, Debug)]
pub struct ConcatRankSpec {
    pub ambient: usize,
    pub widths: [usize; 3],
    pub ranks: [usize; 3],
    pub draws: [usize; 3],
}

/// Draws fixed matrices with the prescribed ranks until the seven
/// concatenation-rank conditions hold, then measures how often fresh
/// uniform spreadings keep full column rank.
pub fn concat_rank_trial(
    spec: &ConcatRankSpec,
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    let field = FieldSpec::prime(q)?;
    for (i, (&w, &r)) in spec.widths.iter().zip(spec.ranks.iter()).enumerate() {
        if r > spec.ambient.min(w) {
            return Err(Error::UnsatisfiableRanks(format!(
                "matrix {i}: rank {r} impossible at {}x{w}",
                spec.ambient
            )));
        }
        if spec.draws[i] > r {
            return Err(Error::UnsatisfiableRanks(format!(
                "matrix {i}: draw width {} exceeds rank {r}",
                spec.draws[i]
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_sum = spec.draws.iter().sum::<usize>();

    let mut fixed: Option<[Matrix; 3]> = None;
    for _ in 0..1000 {
        let a: [Matrix; 3] = [
            random_with_rank(field, spec.ambient, spec.widths[0], spec.ranks[0], &mut rng)?,
            random_with_rank(field, spec.ambient, spec.widths[1], spec.ranks[1], &mut rng)?,
            random_with_rank(field, spec.ambient, spec.widths[2], spec.ranks[2], &mut rng)?,
        ];
        let pair = |i: usize, j: usize| {
            linalg::rank(&a[i].hstack(&a[j]).expect("same ambient"))
        };
        let triple = linalg::rank(
            &a[0]
                .hstack(&a[1])
                .expect("same ambient")
                .hstack(&a[2])
                .expect("same ambient"),
        );
        let k = &spec.draws;
        let ok = k[0] + k[1] <= pair(0, 1)
            && k[0] + k[2] <= pair(0, 2)
            && k[1] + k[2] <= pair(1, 2)
            && k_sum <= triple;
        if ok {
            fixed = Some(a);
            break;
        }
    }
    let a = fixed.ok_or_else(|| {
        Error::UnsatisfiableRanks("joint rank conditions never satisfied".into())
    })?;

    let mut successes = 0u64;
    for _ in 0..trials {
        let parts: Vec<Matrix> = (0..3)
            .map(|i| {
                let e = Matrix::random(field, spec.widths[i], spec.draws[i], &mut rng);
                a[i].mul(&e).expect("conformable")
            })
            .collect();
        let cat = parts[0]
            .hstack(&parts[1])
            .expect("same ambient")
            .hstack(&parts[2])
            .expect("same ambient");
        if linalg::rank(&cat) == k_sum {
            successes += 1;
        }
    }
    Ok(TrialReport {
        trials,
        successes,
        field,
        params: format!("{spec:?}"),
    })
}

/// Exact conditional entropy of `a·x` given `b·x` for uniform `x`,
/// computed by exhaustive enumeration and compared to the rank bound.
#[derive(Clone, Debug)]
pub struct EntropyCheck {
    /// In base-q units.
    pub entropy: BigRational,
    pub bound: usize,
    pub pass: bool,
}

pub fn entropy_bound_check(a: &Matrix, b: &Matrix) -> Result<EntropyCheck> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let Some(q) = a.field().modulus() else {
        return Err(Error::InvalidInput("entropy check needs a prime field".into()));
    };
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "input dimensions differ".into(),
        ));
    }
    let l = a.cols();
    let space = q
        .checked_pow(l as u32)
        .filter(|&s| s <= 1 << 16)
        .ok_or_else(|| {
            Error::EnumerationTooLarge(format!("q^l = {q}^{l} exceeds 2^16"))
        })?;

    let to_rows = |m: &Matrix| -> Vec<Vec<u64>> {
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| m.get(i, j).as_residue().expect("prime residue"))
                    .collect()
            })
            .collect()
    };
    let ra = to_rows(a);
    let rb = to_rows(b);
    let apply = |rows: &[Vec<u64>], x: &[u64]| -> Vec<u64> {
        rows.iter()
            .map(|row| {
                let mut acc = 0u128;
                for (c, v) in row.iter().zip(x.iter()) {
                    acc = (acc + *c as u128 * *v as u128) % q as u128;
                }
                acc as u64
            })
            .collect()
    };

    let mut joint: HashMap<(Vec<u64>, Vec<u64>), u64> = HashMap::new();
    let mut marginal: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut x = vec![0u64; l];
    for _ in 0..space {
        let ya = apply(&ra, &x);
        let yb = apply(&rb, &x);
        *marginal.entry(yb.clone()).or_insert(0) += 1;
        *joint.entry((ya, yb)).or_insert(0) += 1;
        // Odometer in base q.
        for digit in x.iter_mut() {
            *digit += 1;
            if *digit < q {
                break;
            }
            *digit = 0;
        }
    }

    // Every conditional class of a linear map is a kernel coset, so each
    // count ratio is an exact power of q and the entropy is rational.
    let mut weighted_exponent = BigUint::from(0u32);
    for ((_, yb), n_ab) in &joint {
        let n_b = marginal[yb];
        let mut ratio = n_b / n_ab;
        if ratio * n_ab != n_b {
            return Err(Error::Internal("count ratio is not integral".into()));
        }
        let mut exp = 0u64;
        while ratio > 1 {
            if ratio % q != 0 {
                return Err(Error::Internal("count ratio is not a power of q".into()));
            }
            ratio /= q;
            exp += 1;
        }
        weighted_exponent += BigUint::from(exp) * BigUint::from(*n_ab);
    }
    let entropy = BigRational::new(weighted_exponent.into(), BigUint::from(space).into());

    let stacked = a.vstack(b)?;
    let bound = linalg::rank(&stacked) - linalg::rank(b);
    let pass = entropy <= BigRational::from_integer((bound as u64).into());
    Ok(EntropyCheck {
        entropy,
        bound,
        pass,
    })
}

/// Aggregate result of a randomized suite; empty `violations` means pass.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub trials: u64,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the block-rank identities (padded cross rank = zero-forced rank
/// plus the two cross ranks) and both product-rank formulas on random
/// instances, with every direct rank recomputed by [`independent_rank`].
pub fn rank_identity_suite(
    trials_per_field: u64,
    max_dim: usize,
    fields: &[FieldSpec],
    seed: u64,
) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut trials = 0;
    for &field in fields {
        for _ in 0..trials_per_field {
            trials += 1;
            let dims = (
                rng.gen_range(0..=max_dim),
                rng.gen_range(0..=max_dim),
                rng.gen_range(0..=max_dim),
                rng.gen_range(0..=max_dim),
            );
            let ch = ChannelQuadruple::random(field, dims, &mut rng);
            if let Err(e) = check_block_identities(&ch) {
                violations.push(format!("{e} on {ch:?}"));
            }

            let p = rng.gen_range(0..=max_dim);
            let l = rng.gen_range(0..=max_dim);
            let k = rng.gen_range(0..=max_dim);
            let a = Matrix::random(field, p, l, &mut rng);
            let b = Matrix::random(field, l, k, &mut rng);
            if let Err(e) = check_product_rank(&a, &b) {
                violations.push(format!("{e} on a={a:?} b={b:?}"));
            }
        }
    }
    SuiteReport { trials, violations }
}

fn check_block_identities(ch: &ChannelQuadruple) -> Result<()> {
    let r12 = linalg::rank(ch.h12());
    let r21 = linalg::rank(ch.h21());
    let dec12 = linalg::interference_decomposition(ch.h12());
    let dec21 = linalg::interference_decomposition(ch.h21());
    let zf1 = linalg::rank(&dec12.w_bot().mul(ch.h11())?.mul(&dec21.v_kernel())?);
    let zf2 = linalg::rank(&dec21.w_bot().mul(ch.h22())?.mul(&dec12.v_kernel())?);
    let cross1 = independent_rank(&ch.cross1_matrix());
    let cross2 = independent_rank(&ch.cross2_matrix());
    if cross1 != zf1 + r12 + r21 {
        return Err(Error::Internal(format!(
            "first block identity: {cross1} != {zf1}+{r12}+{r21}"
        )));
    }
    if cross2 != zf2 + r12 + r21 {
        return Err(Error::Internal(format!(
            "second block identity: {cross2} != {zf2}+{r12}+{r21}"
        )));
    }
    Ok(())
}

fn check_product_rank(a: &Matrix, b: &Matrix) -> Result<()> {
    let prod_rank = independent_rank(&a.mul(b)?);
    // Both intersections live in the shared middle space.
    let left = linalg::rank(a)
        - linalg::subspace_intersection_dim(
            &linalg::null_space_basis(&b.transpose()),
            &linalg::column_space_basis(&a.transpose()),
        )?;
    let right = linalg::rank(b)
        - linalg::subspace_intersection_dim(
            &linalg::null_space_basis(a),
            &linalg::column_space_basis(b),
        )?;
    if prod_rank != left || prod_rank != right {
        return Err(Error::Internal(format!(
            "product rank {prod_rank} vs {left} / {right}"
        )));
    }
    Ok(())
}

/// For every integer point of the capacity region: a split exists, a codec
/// builds within the retry budget, and ten random round trips are exact;
/// for every integer point outside (up to one step past the region's
/// bounding box): no split exists.
pub fn achievability_sweep(ch: &ChannelQuadruple, seed: u64) -> Result<SuiteReport> {
    use num::ToPrimitive;
    let region = capacity_region(ch);
    let bounds = ratesplit::channel_split_bounds(ch)?;
    let max1 = region.max_r1().floor().to_integer().to_i64().unwrap() as usize;
    let max2 = region.max_r2().floor().to_integer().to_i64().unwrap() as usize;
    let mut violations = Vec::new();
    let mut trials = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r1 in 0..=max1 + 1 {
        for r2 in 0..=max2 + 1 {
            trials += 1;
            let inside = region.contains(&RatePair::from_ints(r1 as i64, r2 as i64));
            match find_split(&bounds, r1, r2) {
                None if inside => {
                    violations.push(format!("({r1},{r2}) inside but split infeasible on {ch:?}"));
                }
                Some(split) if !inside => {
                    violations.push(format!(
                        "({r1},{r2}) outside but split {split:?} feasible on {ch:?}"
                    ));
                }
                Some(split) => {
                    match build_codec(ch, split, rng.gen(), ratesplit::DEFAULT_RETRY_BUDGET) {
                        Ok(codec) => {
                            for _ in 0..10 {
                                let msgs = MessageVectors::random(ch.field(), &split, &mut rng);
                                match ratesplit::round_trip_exact(ch, &codec, &msgs) {
                                    Ok(true) => {}
                                    Ok(false) => violations.push(format!(
                                        "({r1},{r2}) round trip corrupted {msgs:?} on {ch:?}"
                                    )),
                                    Err(e) => violations
                                        .push(format!("({r1},{r2}) round trip error {e}")),
                                }
                            }
                        }
                        Err(e) => violations.push(format!("({r1},{r2}) codec failed: {e}")),
                    }
                }
                None => {}
            }
        }
    }
    Ok(SuiteReport { trials, violations })
}

/// Counts all `k`-dimensional subspaces of `F_q^l` for `l <= max_l` by
/// enumerating canonical reduced-row-echelon generator matrices, and
/// compares each count to the closed-form coefficient.
pub fn subspace_count_check(max_l: u64, qs: &[u64]) -> Result<Vec<(u64, u64, u64, BigUint)>> {
    let mut table = Vec::new();
    for &q in qs {
        let field = FieldSpec::prime(q)?;
        for l in 0..=max_l {
            for k in 0..=l {
                let counted = enumerate_subspaces(field, l as usize, k as usize);
                let formula = gaussian_binomial(l, k, q)?;
                if BigUint::from(counted) != formula {
                    return Err(Error::Internal(format!(
                        "subspace count mismatch at l={l} k={k} q={q}: {counted} vs {formula}"
                    )));
                }
                table.push((l, k, q, formula));
            }
        }
    }
    Ok(table)
}

/// Every RREF with `k` pivot rows in `l` columns generates a distinct
/// subspace; enumerate pivot-column sets, then all free-cell fillings.
fn enumerate_subspaces(field: FieldSpec, l: usize, k: usize) -> u64 {
    let q = field.modulus().expect("prime field") as usize;
    let mut count = 0u64;
    for mask in 0u32..(1 << l) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let pivots: Vec<usize> = (0..l).filter(|j| mask & (1 << j) != 0).collect();
        // Free cells: row i, column j with j past pivot i and j not a pivot.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pivots = pivots.clone();
                (0..l).filter_map(move |j| {
                    (j > pivots[i] && !pivots.contains(&j)).then_some((i, j))
                })
            })
            .collect();
        let mut assignment = vec![0usize; free.len()];
        loop {
            let mut m = Matrix::zeros(field, k, l);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, field.one());
            }
            for (&(i, j), &v) in free.iter().zip(assignment.iter()) {
                m.set(i, j, field.from_i64(v as i64));
            }
            debug_assert_eq!(linalg::rank(&m), k);
            count += 1;
            let mut carry = true;
            for digit in assignment.iter_mut() {
                *digit += 1;
                if *digit < q {
                    carry = false;
                    break;
                }
                *digit = 0;
            }
            if carry {
                break;
            }
        }
    }
    count
}
