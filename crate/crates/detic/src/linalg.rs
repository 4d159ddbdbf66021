//! Exact linear algebra: reduced row echelon forms, kernels, basis
//! completion, left inverses, and the block decomposition that plays the
//! role of an SVD over arbitrary fields.
//!
//! Prime-field elimination is plain Gauss-Jordan on residues. Rational
//! elimination is fraction-free (Bareiss) on cleared denominators to keep
//! intermediate integers small, then normalized into canonical RREF.

use num::{BigInt, BigRational, BigUint, Integer, One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

/// Result of `rank_rref`: the canonical reduced row echelon form together
/// with the pivot column indices.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row echelon form, pivot columns and rank.
pub fn rank_rref(m: &Matrix) -> Rref {
    match m.field() {
        FieldSpec::Prime(p) => rref_mod(m, p),
        FieldSpec::Rational => rref_rational(m),
    }
}

pub fn rank(m: &Matrix) -> usize {
    rank_rref(m).rank
}

/// Indices of a lexicographically-first maximal independent row subset.
pub fn pivot_rows(m: &Matrix) -> Vec<usize> {
    rank_rref(&m.transpose()).pivots
}

fn rref_mod(m: &Matrix, p: u64) -> Rref {
    let (rows, cols) = (m.rows(), m.cols());
    let f = m.field();
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| m.get(i, j).as_residue().expect("prime-field entry"))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut pr = 0usize;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        let Some(piv) = (pr..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(pr, piv);
        let inv = inv_mod(a[pr][col], p);
        for k in col..cols {
            a[pr][k] = mulmod(a[pr][k], inv, p);
        }
        for i in 0..rows {
            if i != pr && a[i][col] != 0 {
                let factor = a[i][col];
                for k in col..cols {
                    let sub = mulmod(factor, a[pr][k], p);
                    a[i][k] = submod(a[i][k], sub, p);
                }
            }
        }
        pivots.push(col);
        pr += 1;
    }
    let data = a
        .into_iter()
        .flatten()
        .map(Scalar::Mod)
        .collect::<Vec<_>>();
    let rref = Matrix::new(f, rows, cols, data).expect("shape preserved");
    Rref {
        rref,
        rank: pivots.len(),
        pivots,
    }
}

fn rref_rational(m: &Matrix) -> Rref {
    let (rows, cols) = (m.rows(), m.cols());
    // Clear denominators row by row; row scaling changes neither pivots nor
    // the normalized RREF.
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..cols {
                if let Scalar::Ratio(r) = m.get(i, j) {
                    lcm = lcm.lcm(r.denom());
                }
            }
            (0..cols)
                .map(|j| match m.get(i, j) {
                    Scalar::Ratio(r) => (r * BigRational::from_integer(lcm.clone())).to_integer(),
                    Scalar::Mod(_) => unreachable!("rational entry expected"),
                })
                .collect()
        })
        .collect();

    // Fraction-free forward elimination. After t steps every entry below is
    // a t+1 minor of the input, so the division by the previous pivot is exact.
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut pr = 0usize;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        let Some(piv) = (pr..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(pr, piv);
        for i in pr + 1..rows {
            for k in col + 1..cols {
                let num = &a[pr][col] * &a[i][k] - &a[i][col] * &a[pr][k];
                a[i][k] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[pr][col].clone();
        pivots.push(col);
        pr += 1;
    }

    // Normalize the integer echelon form into canonical rational RREF.
    let mut q: Vec<Vec<BigRational>> = a
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect();
    for (i, &pc) in pivots.iter().enumerate().rev() {
        let inv = q[i][pc].recip();
        for k in pc..cols {
            q[i][k] = &q[i][k] * &inv;
        }
        for above in 0..i {
            if !q[above][pc].is_zero() {
                let factor = q[above][pc].clone();
                for k in pc..cols {
                    q[above][k] = &q[above][k] - &factor * &q[i][k];
                }
            }
        }
    }
    let data = q
        .into_iter()
        .flatten()
        .map(Scalar::Ratio)
        .collect::<Vec<_>>();
    let rref = Matrix::new(FieldSpec::Rational, rows, cols, data).expect("shape preserved");
    Rref {
        rref,
        rank: pivots.len(),
        pivots,
    }
}

/// Columns form a basis of the right kernel of `m`.
pub fn null_space_basis(m: &Matrix) -> Matrix {
    let f = m.field();
    let Rref { rref, pivots, rank } = rank_rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(f, m.cols(), free.len());
    for (j, &fc) in free.iter().enumerate() {
        basis.set(fc, j, f.one());
        for i in 0..rank {
            let v = rref.get(i, fc);
            if !f.is_zero(v) {
                basis.set(pivots[i], j, f.neg(v));
            }
        }
    }
    basis
}

/// The pivot columns of `m` — a basis of its column space.
pub fn column_space_basis(m: &Matrix) -> Matrix {
    m.select_cols(&rank_rref(m).pivots)
}

/// Completes the independent columns of `b` to a basis of the ambient space
/// and returns only the appended columns: the lexicographically-first
/// standard unit vectors that keep the set independent.
pub fn extend_to_basis(b: &Matrix) -> Result<Matrix> {
    let n = b.rows();
    if rank(b) != b.cols() {
        return Err(Error::NotABasis);
    }
    // Pivot columns of [b | I] are exactly b's columns plus the greedy
    // unit-vector completion.
    let aug = b.hstack(&Matrix::identity(b.field(), n))?;
    let pivots = rank_rref(&aug).pivots;
    let unit_cols: Vec<usize> = pivots
        .iter()
        .filter(|&&c| c >= b.cols())
        .map(|&c| c - b.cols())
        .collect();
    let mut out = Matrix::zeros(b.field(), n, unit_cols.len());
    for (j, &i) in unit_cols.iter().enumerate() {
        out.set(i, j, b.field().one());
    }
    Ok(out)
}

/// A matrix `L` with `L * m = I`, requiring full column rank.
pub fn left_inverse(m: &Matrix) -> Result<Matrix> {
    let (r, c) = (m.rows(), m.cols());
    let aug = m.hstack(&Matrix::identity(m.field(), r))?;
    let Rref { rref, pivots, .. } = rank_rref(&aug);
    let m_pivots = pivots.iter().filter(|&&p| p < c).count();
    if m_pivots != c {
        return Err(Error::NoLeftInverse);
    }
    // rref = E * [m | I] = [E*m | E]; the first c rows of E*m are I_c.
    Ok(rref.row_range(0, c).col_range(c, c + r))
}

/// Inverse of a square matrix.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    left_inverse(m).map_err(|_| Error::Singular)
}

/// Invertible row/column transforms exposing the full-rank block of `h`:
/// `w * h * v_basis = [[d, 0], [0, 0]]` with `w = u_basis^{-1}`.
///
/// The first `rank` columns of `u_basis` span the column space of `h`; the
/// last columns of `v_basis` span its kernel. Unlike a transpose-based
/// construction this succeeds over every field, including the
/// self-orthogonal cases where the column space meets the left kernel.
#[derive(Clone, Debug)]
pub struct InterferenceDecomposition {
    pub rank: usize,
    pub u_basis: Matrix,
    pub w: Matrix,
    pub v_basis: Matrix,
    pub d: Matrix,
}

impl InterferenceDecomposition {
    /// First `rank` rows of `w`: coordinates along the column-space basis.
    pub fn w_top(&self) -> Matrix {
        self.w.row_range(0, self.rank)
    }

    /// Remaining rows of `w`: they annihilate the column space of `h`.
    pub fn w_bot(&self) -> Matrix {
        self.w.row_range(self.rank, self.w.rows())
    }

    /// First `rank` columns of `v_basis`: a complement of the kernel.
    pub fn v_pre(&self) -> Matrix {
        self.v_basis.col_range(0, self.rank)
    }

    /// Last columns of `v_basis`: a kernel basis.
    pub fn v_kernel(&self) -> Matrix {
        self.v_basis.col_range(self.rank, self.v_basis.cols())
    }

    /// First `rank` columns of `u_basis`: a column-space basis.
    pub fn u_image(&self) -> Matrix {
        self.u_basis.col_range(0, self.rank)
    }

    pub fn u_completion(&self) -> Matrix {
        self.u_basis.col_range(self.rank, self.u_basis.cols())
    }

    /// Checks every structural invariant against the matrix being decomposed.
    pub fn verify_against(&self, h: &Matrix) -> Result<()> {
        let (n, m) = (h.rows(), h.cols());
        let r = self.rank;
        let fail = |msg: &str| Err(Error::Internal(format!("decomposition invariant: {msg}")));
        if self.u_basis.rows() != n || self.u_basis.cols() != n {
            return fail("u_basis shape");
        }
        if self.v_basis.rows() != m || self.v_basis.cols() != m {
            return fail("v_basis shape");
        }
        if self.d.rows() != r || self.d.cols() != r {
            return fail("d shape");
        }
        if r != rank(h) {
            return fail("rank");
        }
        if self.w.mul(&self.u_basis)? != Matrix::identity(h.field(), n) {
            return fail("w is not the inverse of u_basis");
        }
        if rank(&self.v_basis) != m {
            return fail("v_basis singular");
        }
        if !h.mul(&self.v_kernel())?.is_zero() {
            return fail("kernel columns not annihilated");
        }
        if rank(&self.d) != r {
            return fail("d singular");
        }
        let whv = self.w.mul(h)?.mul(&self.v_basis)?;
        let mut expect = Matrix::zeros(h.field(), n, m);
        for i in 0..r {
            for j in 0..r {
                expect.set(i, j, self.d.get(i, j).clone());
            }
        }
        if whv != expect {
            return fail("w*h*v_basis is not block diagonal");
        }
        // The image columns must span the column space of h.
        if rank(&self.u_image().hstack(h)?) != r {
            return fail("u_image does not span the column space");
        }
        Ok(())
    }
}

/// Dual-basis decomposition: kernel basis plus unit-vector completions, with
/// `w` taken as a true matrix inverse. Succeeds for every matrix, including
/// zero and empty shapes.
pub fn interference_decomposition(h: &Matrix) -> InterferenceDecomposition {
    let ker = null_space_basis(h);
    let v_pre = extend_to_basis(&ker).expect("kernel basis is independent");
    let v_basis = v_pre.hstack(&ker).expect("same row count");
    let image = h.mul(&v_pre).expect("conformable");
    let completion = extend_to_basis(&image).expect("image has full column rank");
    let u_basis = image.hstack(&completion).expect("same row count");
    let w = inverse(&u_basis).expect("completed basis is invertible");
    let r = v_pre.cols();
    let d = w.row_range(0, r).mul(h).expect("conformable").mul(&v_pre).expect("conformable");
    let dec = InterferenceDecomposition {
        rank: r,
        u_basis,
        w,
        v_basis,
        d,
    };
    debug_assert!(dec.verify_against(h).is_ok());
    dec
}

/// The transpose-basis construction: output bases from the column space of
/// `h` and the kernel of its transpose, decode transform `w` equal to the
/// stacked transposed bases. Errors whenever those bases fail to span,
/// which over finite fields happens exactly when the full-rank block would
/// be singular.
pub fn interference_decomposition_transpose(h: &Matrix) -> Result<InterferenceDecomposition> {
    let (n, m) = (h.rows(), h.cols());
    let ht = h.transpose();
    let u_image = column_space_basis(h);
    let u_left_kernel = null_space_basis(&ht);
    let u_cat = u_image.hstack(&u_left_kernel)?;
    if rank(&u_cat) != n {
        return Err(Error::DegenerateDecomposition(
            "column space meets the left kernel".into(),
        ));
    }
    let v_pre = column_space_basis(&ht);
    let v_basis = v_pre.hstack(&null_space_basis(h))?;
    if rank(&v_basis) != m {
        return Err(Error::DegenerateDecomposition(
            "row space meets the kernel".into(),
        ));
    }
    let w = u_cat.transpose();
    let u_basis = inverse(&w).expect("u_cat has full rank");
    let r = u_image.cols();
    let d = u_image.transpose().mul(h)?.mul(&v_pre)?;
    debug_assert_eq!(rank(&d), r);
    Ok(InterferenceDecomposition {
        rank: r,
        u_basis,
        w,
        v_basis,
        d,
    })
}

/// Dimension of `span(a) ∩ span(b)` for bases in the same ambient space.
pub fn subspace_intersection_dim(a: &Matrix, b: &Matrix) -> Result<usize> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions differ: {} vs {}",
            a.rows(),
            b.rows()
        )));
    }
    Ok(rank(a) + rank(b) - rank(&a.hstack(b)?))
}

/// Number of `k`-dimensional subspaces of an `l`-dimensional space over `F_q`.
pub fn gaussian_binomial(l: u64, k: u64, q: u64) -> Result<BigUint> {
    if k > l {
        return Err(Error::BinomialRange { l, k });
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((l - i) as u32) - BigUint::one();
        den *= q.pow((k - i) as u32) - BigUint::one();
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Uniformly random matrix conditioned on invertibility.
pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::random(field, n, n, rng);
        if rank(&m) == n {
            return m;
        }
    }
}

/// Random matrix with the prescribed rank, drawn as a product of uniform
/// factors and resampled until the rank is exact.
pub fn random_with_rank<R: Rng + ?Sized>(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    r: usize,
    rng: &mut R,
) -> Result<Matrix> {
    if r > rows.min(cols) {
        return Err(Error::UnsatisfiableRanks(format!(
            "rank {r} impossible for a {rows}x{cols} matrix"
        )));
    }
    loop {
        let left = Matrix::random(field, rows, r, rng);
        let right = Matrix::random(field, r, cols, rng);
        let m = left.mul(&right).expect("conformable");
        if rank(&m) == r {
            return Ok(m);
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}
