//! Two-dimensional rate regions: integer halfplanes intersected with the
//! nonnegative quadrant.
//!
//! All geometry is exact. Vertices are rational, computed by pairwise line
//! intersection and a monotone-chain hull; region comparisons are vertex
//! membership checks, so equality is decidable.

use std::fmt;

use num::{BigInt, BigRational, Integer, Signed, Zero};

use crate::channel::ChannelQuadruple;
use crate::linalg::{self, interference_decomposition};

/// `a1*R1 + a2*R2 <= b` with nonnegative integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub a1: i64,
    pub a2: i64,
    pub b: i64,
}

impl Inequality {
    pub fn new(a1: i64, a2: i64, b: i64) -> Self {
        assert!(a1 >= 0 && a2 >= 0, "rate coefficients must be nonnegative");
        assert!(b >= 0, "right-hand side must be nonnegative");
        Inequality { a1, a2, b }
    }

    fn satisfied_by(&self, p: &RatePair) -> bool {
        let lhs = BigRational::from_integer(BigInt::from(self.a1)) * &p.r1
            + BigRational::from_integer(BigInt::from(self.a2)) * &p.r2;
        lhs <= BigRational::from_integer(BigInt::from(self.b))
    }

    fn tight_at(&self, p: &RatePair) -> bool {
        let lhs = BigRational::from_integer(BigInt::from(self.a1)) * &p.r1
            + BigRational::from_integer(BigInt::from(self.a2)) * &p.r2;
        lhs == BigRational::from_integer(BigInt::from(self.b))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: i64, name: &str| match c {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{c}{name}"),
        };
        let t1 = term(self.a1, "R1");
        let t2 = term(self.a2, "R2");
        match (t1.is_empty(), t2.is_empty()) {
            (false, false) => write!(f, "{t1} + {t2} <= {}", self.b),
            (false, true) => write!(f, "{t1} <= {}", self.b),
            (true, false) => write!(f, "{t2} <= {}", self.b),
            (true, true) => write!(f, "0 <= {}", self.b),
        }
    }
}

/// An exact rate point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatePair {
    pub r1: BigRational,
    pub r2: BigRational,
}

impl RatePair {
    pub fn from_ints(r1: i64, r2: i64) -> Self {
        RatePair {
            r1: BigRational::from_integer(BigInt::from(r1)),
            r2: BigRational::from_integer(BigInt::from(r2)),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.r1.is_negative() && !self.r2.is_negative()
    }
}

impl fmt::Display for RatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r1, self.r2)
    }
}

/// Intersection of the stored halfplanes with `R1, R2 >= 0`. Downward
/// closed by construction since every coefficient is nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateRegion {
    inequalities: Vec<Inequality>,
}

/// Which route instantiates the sum-rate constraints of the capacity
/// region: direct ranks of the padded cross matrices, or the reduced
/// closed forms built from the decomposition ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionForm {
    Theorem,
    Reduced,
}

impl RateRegion {
    pub fn new(inequalities: Vec<Inequality>) -> Self {
        let kept = inequalities
            .into_iter()
            .filter(|i| i.a1 > 0 || i.a2 > 0)
            .collect();
        RateRegion { inequalities: kept }
    }

    /// The region containing only the origin.
    pub fn origin() -> Self {
        RateRegion::new(vec![Inequality::new(1, 0, 0), Inequality::new(0, 1, 0)])
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn contains(&self, p: &RatePair) -> bool {
        p.is_nonnegative() && self.inequalities.iter().all(|i| i.satisfied_by(p))
    }

    fn is_bounded(&self) -> bool {
        self.inequalities.iter().any(|i| i.a1 > 0)
            && self.inequalities.iter().any(|i| i.a2 > 0)
    }

    /// Exact vertices of the polygon, counterclockwise starting at the
    /// origin. Panics if the region is unbounded.
    pub fn vertices(&self) -> Vec<RatePair> {
        assert!(self.is_bounded(), "region is unbounded");
        let mut lines: Vec<(i64, i64, i64)> = self
            .inequalities
            .iter()
            .map(|i| (i.a1, i.a2, i.b))
            .collect();
        lines.push((1, 0, 0));
        lines.push((0, 1, 0));

        let mut candidates: Vec<Point> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, a2, b) = lines[i];
                let (c1, c2, d) = lines[j];
                let det = a1 as i128 * c2 as i128 - a2 as i128 * c1 as i128;
                if det == 0 {
                    continue;
                }
                let x_num = b as i128 * c2 as i128 - a2 as i128 * d as i128;
                let y_num = a1 as i128 * d as i128 - b as i128 * c1 as i128;
                let x = big_ratio(x_num, det);
                let y = big_ratio(y_num, det);
                candidates.push((x, y));
            }
        }
        candidates.retain(|(x, y)| {
            !x.is_negative()
                && !y.is_negative()
                && self.inequalities.iter().all(|i| {
                    BigRational::from_integer(BigInt::from(i.a1)) * x
                        + BigRational::from_integer(BigInt::from(i.a2)) * y
                        <= BigRational::from_integer(BigInt::from(i.b))
                })
        });
        let hull = convex_hull(candidates);
        let rotated = rotate_to_origin(hull);
        rotated
            .into_iter()
            .map(|(r1, r2)| RatePair { r1, r2 })
            .collect()
    }

    pub fn max_r1(&self) -> BigRational {
        self.vertices()
            .into_iter()
            .map(|p| p.r1)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn max_r2(&self) -> BigRational {
        self.vertices()
            .into_iter()
            .map(|p| p.r2)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Every vertex of `self` satisfies `other`; for convex regions this is
    /// exactly set containment.
    pub fn subset_of(&self, other: &RateRegion) -> bool {
        self.vertices().iter().all(|v| other.contains(v))
    }

    /// Set equality, independent of how either region is listed.
    pub fn set_eq(&self, other: &RateRegion) -> bool {
        self.subset_of(other) && other.subset_of(self)
    }

    /// Drops redundant inequalities.
    ///
    /// An inequality is removed when a nonnegative *integer* combination of
    /// the others (plus the nonnegativity of the rates) dominates it;
    /// candidates are scanned from the steepest combined coefficients down.
    /// This reproduces the customary minimal listings, which keep a
    /// single-user bound even when a fractional multiple of a sum bound
    /// would imply it. A final sweep drops anything not tight at a vertex.
    pub fn reduce_redundant(&self) -> RateRegion {
        let mut set: Vec<Inequality> = self.inequalities.clone();
        set.sort();
        set.dedup();

        let mut order = set.clone();
        order.sort_by(|x, y| {
            let key = |i: &Inequality| (i.a1 + i.a2, i.a1, i.a2, i.b);
            key(y).cmp(&key(x))
        });
        let mut alive: Vec<Inequality> = set;
        for cand in order {
            let others: Vec<Inequality> =
                alive.iter().copied().filter(|i| *i != cand).collect();
            if integer_cone_implies(&others, cand) {
                alive.retain(|i| *i != cand);
            }
        }

        let region = RateRegion {
            inequalities: alive.clone(),
        };
        let mut kept = alive;
        if region.is_bounded() {
            let verts = region.vertices();
            kept.retain(|i| verts.iter().any(|v| i.tight_at(v)));
        }
        kept.sort_by_key(|i| (i.a1 + i.a2, std::cmp::Reverse(i.a1), i.b));
        RateRegion { inequalities: kept }
    }

    /// Halfplane representation of the convex hull of a vertex set:
    /// outward facet normals with nonnegative components, plus the two
    /// coordinate caps, minimized.
    pub fn from_polygon(points: &[RatePair]) -> RateRegion {
        let pts: Vec<Point> = points.iter().map(|p| (p.r1.clone(), p.r2.clone())).collect();
        if pts.is_empty() {
            return RateRegion::origin();
        }
        let hull = convex_hull(pts);
        let mut ineqs: Vec<Inequality> = Vec::new();

        let max_x = hull.iter().map(|p| p.0.clone()).max().expect("nonempty");
        let max_y = hull.iter().map(|p| p.1.clone()).max().expect("nonempty");
        ineqs.push(cap_inequality(&max_x, true));
        ineqs.push(cap_inequality(&max_y, false));

        if hull.len() >= 2 {
            for k in 0..hull.len() {
                let p = &hull[k];
                let q = &hull[(k + 1) % hull.len()];
                let n1 = &q.1 - &p.1;
                let n2 = &p.0 - &q.0;
                if n1.is_negative() || n2.is_negative() || (n1.is_zero() && n2.is_zero()) {
                    continue;
                }
                let rhs = &n1 * &p.0 + &n2 * &p.1;
                ineqs.push(integerize(&n1, &n2, &rhs));
            }
        }
        RateRegion::new(ineqs).reduce_redundant()
    }

    /// Convex hull of the union of the given regions, as halfplanes.
    pub fn convex_hull_union(regions: &[RateRegion]) -> RateRegion {
        let mut points: Vec<RatePair> = Vec::new();
        for r in regions {
            points.extend(r.vertices());
        }
        if points.is_empty() {
            return RateRegion::origin();
        }
        RateRegion::from_polygon(&points)
    }
}

type Point = (BigRational, BigRational);

fn big_ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn cross(o: &Point, a: &Point, b: &Point) -> BigRational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Monotone chain; counterclockwise, collinear points dropped.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn rotate_to_origin(hull: Vec<Point>) -> Vec<Point> {
    let origin = (BigRational::zero(), BigRational::zero());
    match hull.iter().position(|p| *p == origin) {
        Some(k) => {
            let mut out = hull.clone();
            out.rotate_left(k);
            out
        }
        None => hull,
    }
}

/// `R1 <= value` (or `R2 <=`) with the fraction cleared to integers.
fn cap_inequality(value: &BigRational, first: bool) -> Inequality {
    let den = value.denom().clone();
    let num = value.numer().clone();
    let (a, b) = (to_i64(&den), to_i64(&num));
    if first {
        Inequality::new(a, 0, b)
    } else {
        Inequality::new(0, a, b)
    }
}

fn integerize(n1: &BigRational, n2: &BigRational, rhs: &BigRational) -> Inequality {
    let lcm = n1
        .denom()
        .lcm(n2.denom())
        .lcm(rhs.denom());
    let scale = BigRational::from_integer(lcm);
    let a1 = (n1 * &scale).to_integer();
    let a2 = (n2 * &scale).to_integer();
    let b = (rhs * &scale).to_integer();
    let mut g = a1.gcd(&a2).gcd(&b);
    if g.is_zero() {
        g = BigInt::from(1);
    }
    Inequality::new(to_i64(&(&a1 / &g)), to_i64(&(&a2 / &g)), to_i64(&(&b / &g)))
}

fn to_i64(v: &BigInt) -> i64 {
    i64::try_from(v.clone()).expect("region coefficient fits in i64")
}

/// Minimum total right-hand side of a nonnegative-integer combination of
/// `items` whose coefficient vector dominates `(cand.a1, cand.a2)`;
/// implication holds when that minimum is at most `cand.b`.
fn integer_cone_implies(items: &[Inequality], cand: Inequality) -> bool {
    let t1 = cand.a1 as usize;
    let t2 = cand.a2 as usize;
    const INF: i64 = i64::MAX;
    let mut cost = vec![vec![INF; t2 + 1]; t1 + 1];
    cost[t1][t2] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..=t1 {
            for y in 0..=t2 {
                if cost[x][y] == INF {
                    continue;
                }
                for item in items {
                    let nx = x.saturating_sub(item.a1.max(0) as usize);
                    let ny = y.saturating_sub(item.a2.max(0) as usize);
                    let c = cost[x][y] + item.b;
                    if c < cost[nx][ny] {
                        cost[nx][ny] = c;
                        changed = true;
                    }
                }
            }
        }
    }
    cost[0][0] != INF && cost[0][0] <= cand.b
}

/// The capacity region of a reduced channel, from the seven rank
/// inequalities, minimized.
pub fn capacity_region(ch: &ChannelQuadruple) -> RateRegion {
    capacity_region_form(ch, RegionForm::Theorem)
}

/// Same region through either computation route. The two must agree for
/// every channel; the block-rank identities guarantee it.
pub fn capacity_region_form(ch: &ChannelQuadruple, form: RegionForm) -> RateRegion {
    let r11 = linalg::rank(ch.h11()) as i64;
    let r22 = linalg::rank(ch.h22()) as i64;
    let r12 = linalg::rank(ch.h12()) as i64;
    let r21 = linalg::rank(ch.h21()) as i64;
    let (m1, m2) = (ch.m1() as i64, ch.m2() as i64);
    let (n1, n2) = (ch.n1() as i64, ch.n2() as i64);

    let (sum_cross, surplus1, surplus2) = match form {
        RegionForm::Theorem => {
            let cross1 = linalg::rank(&ch.cross1_matrix()) as i64;
            let cross2 = linalg::rank(&ch.cross2_matrix()) as i64;
            (
                cross1 + cross2 - r12 - r21,
                cross2 - r12 - r21,
                cross1 - r12 - r21,
            )
        }
        RegionForm::Reduced => {
            let dec12 = interference_decomposition(ch.h12());
            let dec21 = interference_decomposition(ch.h21());
            let zf1 = linalg::rank(
                &dec12
                    .w_bot()
                    .mul(ch.h11())
                    .expect("conformable")
                    .mul(&dec21.v_kernel())
                    .expect("conformable"),
            ) as i64;
            let zf2 = linalg::rank(
                &dec21
                    .w_bot()
                    .mul(ch.h22())
                    .expect("conformable")
                    .mul(&dec12.v_kernel())
                    .expect("conformable"),
            ) as i64;
            (zf1 + zf2 + r12 + r21, zf2, zf1)
        }
    };

    RateRegion::new(vec![
        Inequality::new(1, 0, r11),
        Inequality::new(0, 1, r22),
        Inequality::new(1, 1, n1 + m2 - r12),
        Inequality::new(1, 1, n2 + m1 - r21),
        Inequality::new(1, 1, sum_cross),
        Inequality::new(2, 1, n1 + m1 + surplus1),
        Inequality::new(1, 2, n2 + m2 + surplus2),
    ])
    .reduce_redundant()
}

/// The min/max region of the nondegenerate (full-rank, independent) case.
pub fn jafar_region(m1: usize, m2: usize, n1: usize, n2: usize) -> RateRegion {
    assert!(m1 >= 1 && m2 >= 1 && n1 >= 1 && n2 >= 1);
    let single1 = m1.min(n1) as i64;
    let single2 = m2.min(n2) as i64;
    let sum = (m1 + m2)
        .min(n1 + n2)
        .min(m1.max(n2))
        .min(m2.max(n1)) as i64;
    RateRegion::new(vec![
        Inequality::new(1, 0, single1),
        Inequality::new(0, 1, single2),
        Inequality::new(1, 1, sum),
    ])
    .reduce_redundant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::example_channel;
    use crate::field::FieldSpec;
    use crate::matrix::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ineq(a1: i64, a2: i64, b: i64) -> Inequality {
        Inequality::new(a1, a2, b)
    }

    #[test]
    fn example_region_minimal_listing() {
        let region = capacity_region(&example_channel());
        assert_eq!(
            region.inequalities(),
            &[ineq(1, 0, 2), ineq(1, 1, 3), ineq(2, 1, 4)]
        );
        let verts = region.vertices();
        let expect: Vec<RatePair> = [(0, 0), (2, 0), (1, 2), (0, 3)]
            .iter()
            .map(|&(a, b)| RatePair::from_ints(a, b))
            .collect();
        assert_eq!(verts, expect);
    }

    #[test]
    fn example_region_membership() {
        let region = capacity_region(&example_channel());
        assert!(region.contains(&RatePair::from_ints(1, 2)));
        assert!(!region.contains(&RatePair::from_ints(2, 2)));
        assert!(region.contains(&RatePair::from_ints(0, 0)));
    }

    #[test]
    fn no_interference_region_is_a_box() {
        let f = FieldSpec::prime(7).unwrap();
        let ch = ChannelQuadruple::new(
            Matrix::identity(f, 2),
            Matrix::zeros(f, 2, 2),
            Matrix::zeros(f, 2, 2),
            Matrix::identity(f, 2),
        )
        .unwrap();
        let region = capacity_region(&ch);
        assert_eq!(region.inequalities(), &[ineq(1, 0, 2), ineq(0, 1, 2)]);
        let verts = region.vertices();
        let expect: Vec<RatePair> = [(0, 0), (2, 0), (2, 2), (0, 2)]
            .iter()
            .map(|&(a, b)| RatePair::from_ints(a, b))
            .collect();
        assert_eq!(verts, expect);
    }

    #[test]
    fn scalar_all_ones_channel_is_a_triangle() {
        let f = FieldSpec::Rational;
        let one = Matrix::from_int_rows(f, &[vec![1]]).unwrap();
        let ch = ChannelQuadruple::new(one.clone(), one.clone(), one.clone(), one).unwrap();
        let region = capacity_region(&ch);
        assert_eq!(region.inequalities(), &[ineq(1, 1, 1)]);
        let verts = region.vertices();
        let expect: Vec<RatePair> = [(0, 0), (1, 0), (0, 1)]
            .iter()
            .map(|&(a, b)| RatePair::from_ints(a, b))
            .collect();
        assert_eq!(verts, expect);
    }

    #[test]
    fn jafar_examples() {
        let r = jafar_region(2, 2, 2, 2);
        assert!(r.set_eq(&RateRegion::new(vec![
            ineq(1, 0, 2),
            ineq(0, 1, 2),
            ineq(1, 1, 2)
        ])));
        let r = jafar_region(1, 1, 1, 1);
        assert!(r.set_eq(&RateRegion::new(vec![ineq(1, 1, 1)])));
        let r = jafar_region(3, 2, 2, 3);
        assert!(r.set_eq(&RateRegion::new(vec![
            ineq(1, 0, 2),
            ineq(0, 1, 2),
            ineq(1, 1, 2)
        ])));
    }

    #[test]
    fn subset_checks() {
        let example = capacity_region(&example_channel());
        let box23 = RateRegion::new(vec![ineq(1, 0, 2), ineq(0, 1, 3)]);
        assert!(example.subset_of(&box23));
        assert!(!box23.subset_of(&example));
        assert!(example.set_eq(&example));
    }

    #[test]
    fn hull_of_two_segments_is_a_triangle() {
        let a = RateRegion::new(vec![ineq(1, 0, 2), ineq(0, 1, 0)]);
        let b = RateRegion::new(vec![ineq(1, 0, 0), ineq(0, 1, 2)]);
        let hull = RateRegion::convex_hull_union(&[a, b]);
        assert_eq!(hull.inequalities(), &[ineq(1, 1, 2)]);
    }

    #[test]
    fn hull_of_single_region_is_identity() {
        let region = capacity_region(&example_channel());
        let hull = RateRegion::convex_hull_union(std::slice::from_ref(&region));
        assert!(hull.set_eq(&region));
        // Idempotence of vertices -> halfplanes -> vertices.
        let rebuilt = RateRegion::from_polygon(&region.vertices());
        assert_eq!(rebuilt.vertices(), region.vertices());
    }

    #[test]
    fn hull_of_rate_exchange_pair() {
        // R1<=2, 2R1+R2<=2 and the mirrored region, for equal unit cuts 2.
        let r4 = RateRegion::new(vec![ineq(1, 0, 2), ineq(2, 1, 2)]);
        let r5 = RateRegion::new(vec![ineq(0, 1, 2), ineq(1, 2, 2)]);
        let hull = RateRegion::convex_hull_union(&[r4, r5]);
        let expect = RateRegion::new(vec![ineq(1, 1, 2)]);
        assert!(hull.set_eq(&expect));
        let verts = hull.vertices();
        let expect: Vec<RatePair> = [(0, 0), (2, 0), (0, 2)]
            .iter()
            .map(|&(a, b)| RatePair::from_ints(a, b))
            .collect();
        assert_eq!(verts, expect);
    }

    #[test]
    fn degenerate_segment_region() {
        let region = RateRegion::new(vec![ineq(1, 0, 1), ineq(0, 1, 0)]);
        let verts = region.vertices();
        let expect: Vec<RatePair> = [(0, 0), (1, 0)]
            .iter()
            .map(|&(a, b)| RatePair::from_ints(a, b))
            .collect();
        assert_eq!(verts, expect);
        let rebuilt = RateRegion::from_polygon(&verts);
        assert_eq!(rebuilt.inequalities(), &[ineq(1, 0, 1), ineq(0, 1, 0)]);
    }

    #[test]
    fn origin_only_region() {
        let region = RateRegion::origin();
        assert_eq!(region.vertices(), vec![RatePair::from_ints(0, 0)]);
        assert!(region.contains(&RatePair::from_ints(0, 0)));
        assert!(!region.contains(&RatePair::from_ints(1, 0)));
    }

    #[test]
    fn redundancy_removal_keeps_seven_form_listing() {
        // All seven constraints of the worked example, unreduced.
        let raw = RateRegion::new(vec![
            ineq(1, 0, 2),
            ineq(0, 1, 3),
            ineq(1, 1, 3),
            ineq(1, 1, 3),
            ineq(1, 1, 4),
            ineq(2, 1, 4),
            ineq(1, 2, 6),
        ]);
        let min = raw.reduce_redundant();
        assert_eq!(
            min.inequalities(),
            &[ineq(1, 0, 2), ineq(1, 1, 3), ineq(2, 1, 4)]
        );
        assert!(min.set_eq(&raw));
    }

    #[test]
    fn forms_agree_on_random_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let fields = [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::Rational,
        ];
        for field in fields {
            for _ in 0..30 {
                let dims = (
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                    rng.gen_range(1..4),
                );
                let (ch, _) = ChannelQuadruple::random(field, dims, &mut rng).reduce();
                let a = capacity_region_form(&ch, RegionForm::Theorem);
                let b = capacity_region_form(&ch, RegionForm::Reduced);
                assert_eq!(a, b, "forms disagree for {ch:?}");
            }
        }
    }

    #[test]
    fn swap_symmetry_mirrors_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let dims = (
                rng.gen_range(1..4),
                rng.gen_range(1..4),
                rng.gen_range(1..4),
                rng.gen_range(1..4),
            );
            let (ch, _) = ChannelQuadruple::random(FieldSpec::prime(7).unwrap(), dims, &mut rng)
                .reduce();
            let (swapped, _) = ch.swap_users().reduce();
            let region = capacity_region(&ch);
            let mirrored = capacity_region(&swapped);
            for v in region.vertices() {
                assert!(mirrored.contains(&RatePair {
                    r1: v.r2.clone(),
                    r2: v.r1.clone()
                }));
            }
        }
    }

    #[test]
    fn downward_closure() {
        let region = capacity_region(&example_channel());
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let v = &region.vertices()[1..];
            let pick = &v[rng.gen_range(0..v.len())];
            let num1 = rng.gen_range(0..=4i64);
            let num2 = rng.gen_range(0..=4i64);
            let p = RatePair {
                r1: &pick.r1 * big_ratio(num1 as i128, 4),
                r2: &pick.r2 * big_ratio(num2 as i128, 4),
            };
            assert!(region.contains(&p));
        }
    }
}
