//! Integer Euler forms, exceptional collections, mutations, and the
//! K-theory shadow of spherical functors and twists.
//!
//! Conventions, fixed once: the Euler pairing of basis classes is
//! `chi(e_i, e_j) = E[i][j]`, extended bilinearly as `chi(x, y) = x^T E y`
//! on column coordinate vectors. A semiorthogonal pair `<A, B>` has no
//! pairings pointing left: `chi(b, a) = 0` for `a` in `A`, `b` in `B`.
//! Mutation base changes are recorded as matrices whose rows express the
//! new basis in the old coordinates, so the form transforms as
//! `M * E * M^T`. Cones contribute `[target] - [source]`, which makes the
//! cotwist `F_S = R S - id` and the twist `T_S = id - S R`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub type QMat = Vec<Vec<BigRational>>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qmat_identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

fn qmat_sub(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn qmat_is_integral(a: &QMat) -> bool {
    a.iter().flatten().all(|x| x.denom().is_one())
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn qmat_det(a: &QMat) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &inv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Solves `A c = rhs` exactly; `None` when `A` is singular.
fn solve_square(a: &QMat, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let inv = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Basis of the solution space of `M x = 0`, by reduced row echelon form.
fn kernel_basis(m: &QMat, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let rows = a.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(p, rank);
        let inv = a[rank][col].clone();
        for c in 0..cols {
            a[rank][c] = &a[rank][c] / &inv;
        }
        for r in 0..rows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..cols {
                let t = &f * &a[rank][c];
                a[r][c] -= t;
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (col, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[col] = -a[*r][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// An integer bilinear Euler form on a free lattice of finite rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerLattice {
    form: Vec<Vec<i64>>,
}

impl EulerLattice {
    pub fn new(form: Vec<Vec<i64>>) -> Result<EulerLattice> {
        let n = form.len();
        if n == 0 || form.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("Euler form must be square and nonempty".into()));
        }
        Ok(EulerLattice { form })
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn form(&self) -> &Vec<Vec<i64>> {
        &self.form
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.form[i][j]
    }

    /// `chi(x, y) = x^T E y` for rational coordinate vectors.
    pub fn chi(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let n = self.rank();
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || self.form[i][j] == 0 {
                    continue;
                }
                acc += &x[i] * q(self.form[i][j]) * &y[j];
            }
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        !qmat_det(&self.to_q()).is_zero()
    }

    fn to_q(&self) -> QMat {
        self.form.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn unit(&self, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.rank()];
        v[i] = BigRational::one();
        v
    }
}

/// Which adjoint characterizes a projection onto a span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Coefficients of the adjoint projection of `x` onto the span of
/// `basis`: for `Side::Left` the unique `p` in the span with
/// `chi(p, basis_j) = chi(x, basis_j)` for all `j`; for `Side::Right`
/// the unique `p` with `chi(basis_j, p) = chi(basis_j, x)`.
pub fn project_coeffs(
    lattice: &EulerLattice,
    basis: &[Vec<BigRational>],
    x: &[BigRational],
    side: Side,
) -> Result<Vec<BigRational>> {
    let k = basis.len();
    let mut gram = vec![vec![BigRational::zero(); k]; k];
    let mut rhs = vec![BigRational::zero(); k];
    for j in 0..k {
        for i in 0..k {
            gram[j][i] = match side {
                Side::Left => lattice.chi(&basis[i], &basis[j]),
                Side::Right => lattice.chi(&basis[j], &basis[i]),
            };
        }
        rhs[j] = match side {
            Side::Left => lattice.chi(x, &basis[j]),
            Side::Right => lattice.chi(&basis[j], x),
        };
    }
    solve_square(&gram, &rhs).ok_or(Error::AdjointUnsolvable)
}

/// Ambient coordinates of the adjoint projection onto a coordinate block,
/// with an integrality flag. The projection lives in the block span; a
/// rational but non-integral solution is permitted and reported.
pub fn adjoint_project(
    lattice: &EulerLattice,
    block: &[usize],
    x: &[i64],
    side: Side,
) -> Result<(Vec<BigRational>, bool)> {
    if x.len() != lattice.rank() {
        return Err(Error::InvalidInput("vector length does not match the lattice rank".into()));
    }
    let basis: Vec<Vec<BigRational>> = block.iter().map(|&i| lattice.unit(i)).collect();
    let xq: Vec<BigRational> = x.iter().map(|&v| q(v)).collect();
    let coeffs = project_coeffs(lattice, &basis, &xq, side)?;
    let mut out = vec![BigRational::zero(); lattice.rank()];
    for (c, b) in coeffs.iter().zip(&basis) {
        for i in 0..lattice.rank() {
            out[i] += c * &b[i];
        }
    }
    let integral = out.iter().all(|v| v.denom().is_one());
    Ok((out, integral))
}

/// An exceptional collection: an Euler form that is upper unitriangular
/// on the chosen basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCollection {
    gram: Vec<Vec<i64>>,
}

impl ExceptionalCollection {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<ExceptionalCollection> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("Gram matrix must be square and nonempty".into()));
        }
        for i in 0..n {
            if gram[i][i] != 1 {
                return Err(Error::InvalidInput("diagonal of an exceptional Gram must be 1".into()));
            }
            for j in 0..i {
                if gram[i][j] != 0 {
                    return Err(Error::InvalidInput(
                        "exceptional Gram must be upper triangular".into(),
                    ));
                }
            }
        }
        Ok(ExceptionalCollection { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Vec<Vec<i64>> {
        &self.gram
    }

    /// Mutates the adjacent pair at slots `k, k+1`. Left mutation replaces
    /// `(f_k, f_{k+1})` by `(f_{k+1} - chi(f_k, f_{k+1}) f_k, f_k)`; right
    /// mutation is its inverse. Returns the new collection together with
    /// the unimodular base change expressing the new basis in the old one.
    pub fn mutate(&self, k: usize, side: Side) -> Result<(ExceptionalCollection, Vec<Vec<i64>>)> {
        let n = self.rank();
        if k + 1 >= n {
            return Err(Error::IndexOutOfRange { what: "mutation slot", index: k });
        }
        let a = self.gram[k][k + 1];
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        match side {
            Side::Left => {
                m[k][k] = -a;
                m[k][k + 1] = 1;
                m[k + 1][k] = 1;
                m[k + 1][k + 1] = 0;
            }
            Side::Right => {
                m[k][k] = 0;
                m[k][k + 1] = 1;
                m[k + 1][k] = 1;
                m[k + 1][k + 1] = -a;
            }
        }
        let new_gram = congruence(&m, &self.gram)?;
        Ok((ExceptionalCollection::new(new_gram)?, m))
    }
}

/// `M G M^T` with overflow-checked integer arithmetic.
fn congruence(m: &[Vec<i64>], g: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = g.len();
    let mut tmp = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc: i128 = 0;
            for l in 0..n {
                acc += m[i][l] as i128 * g[l][j] as i128;
            }
            tmp[i][j] = acc;
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc: i128 = 0;
            for l in 0..n {
                acc += tmp[i][l] * m[j][l] as i128;
            }
            out[i][j] =
                i64::try_from(acc).map_err(|_| Error::Internal("Gram entry overflow".into()))?;
        }
    }
    Ok(out)
}

pub fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc: i128 = 0;
            for l in 0..k {
                acc += a[i][l] as i128 * b[l][j] as i128;
            }
            out[i][j] =
                i64::try_from(acc).map_err(|_| Error::Internal("matrix entry overflow".into()))?;
        }
    }
    Ok(out)
}

/// An Euler lattice with an ordered partition of the basis into
/// semiorthogonal blocks: `chi(later block, earlier block) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSplitting {
    pub lattice: EulerLattice,
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSplitting {
    pub fn new(lattice: EulerLattice, blocks: Vec<Vec<usize>>) -> Result<BlockSplitting> {
        let n = lattice.rank();
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidInput("empty block in splitting".into()));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::InvalidInput("blocks must partition the basis".into()));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidInput("blocks must cover the basis".into()));
        }
        for (bi, b) in blocks.iter().enumerate() {
            for a in blocks.iter().take(bi) {
                for &x in b {
                    for &y in a {
                        if lattice.entry(x, y) != 0 {
                            return Err(Error::InvalidInput(format!(
                                "pairing chi(e{x}, e{y}) must vanish for a \
                                 semiorthogonal splitting"
                            )));
                        }
                    }
                }
            }
        }
        Ok(BlockSplitting { lattice, blocks })
    }
}

/// The K-theory shadow of a spherical functor `S` from the first block to
/// the second block of an ambient two-block splitting, with its right
/// adjoint `R`, cotwist `F_S = R S - id` and twist `T_S = id - S R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistShadow {
    pub s: QMat,
    pub r: QMat,
    pub f_s: QMat,
    pub t_s: QMat,
    /// True when all four matrices are integral.
    pub integral: bool,
}

/// Computes the twist shadow of the splitting `<E, G>` given by two basis
/// index blocks of the lattice.
pub fn spherical_shadow(
    lattice: &EulerLattice,
    e_block: &[usize],
    g_block: &[usize],
) -> Result<TwistShadow> {
    let e_basis: Vec<Vec<BigRational>> = e_block.iter().map(|&i| lattice.unit(i)).collect();
    let g_basis: Vec<Vec<BigRational>> = g_block.iter().map(|&i| lattice.unit(i)).collect();
    spherical_shadow_spanned(lattice, &e_basis, &g_basis)
}

/// As [`spherical_shadow`] but with arbitrary rational bases for both
/// blocks.
pub fn spherical_shadow_spanned(
    lattice: &EulerLattice,
    e_basis: &[Vec<BigRational>],
    g_basis: &[Vec<BigRational>],
) -> Result<TwistShadow> {
    let ne = e_basis.len();
    let ng = g_basis.len();
    // S(e_i): left projection onto the G span
    let mut s = vec![vec![BigRational::zero(); ne]; ng];
    for (i, e) in e_basis.iter().enumerate() {
        let c = project_coeffs(lattice, g_basis, e, Side::Left)?;
        for (row, v) in c.into_iter().enumerate() {
            s[row][i] = v;
        }
    }
    // R(g_j): right projection onto the E span
    let mut r = vec![vec![BigRational::zero(); ng]; ne];
    for (j, g) in g_basis.iter().enumerate() {
        let c = project_coeffs(lattice, e_basis, g, Side::Right)?;
        for (row, v) in c.into_iter().enumerate() {
            r[row][j] = v;
        }
    }
    let f_s = qmat_sub(&qmat_mul(&r, &s), &qmat_identity(ne));
    let t_s = qmat_sub(&qmat_identity(ng), &qmat_mul(&s, &r));
    let integral = [&s, &r, &f_s, &t_s].iter().all(|m| qmat_is_integral(m));
    Ok(TwistShadow { s, r, f_s, t_s, integral })
}

/// Outcome of checking that the twist of `S = i_B^L i_A` equals the
/// composite of the two left mutations through `A` and through the left
/// orthogonal of `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleMutationCheck {
    pub twist: QMat,
    pub double_mutation: QMat,
    pub ok: bool,
}

/// Verifies, inside a nondegenerate ambient form split as `<A, B>`, that
/// the twist shadow along `S: A -> B` equals the composite mutation
/// `B -> B' -> B`, where `B'` is the right orthogonal of `A`.
pub fn verify_double_mutation(
    lattice: &EulerLattice,
    a_block: &[usize],
    b_block: &[usize],
) -> Result<DoubleMutationCheck> {
    BlockSplitting::new(lattice.clone(), vec![a_block.to_vec(), b_block.to_vec()])?;
    if !lattice.is_nondegenerate() {
        return Err(Error::AdjointUnsolvable);
    }
    let shadow = spherical_shadow(lattice, a_block, b_block)?;

    // B' = right orthogonal of A: chi(a, x) = 0 for all a in A
    let n = lattice.rank();
    let rows_bprime: QMat = a_block
        .iter()
        .map(|&a| (0..n).map(|k| q(lattice.entry(a, k))).collect())
        .collect();
    let b_prime = kernel_basis(&rows_bprime, n);
    if b_prime.len() != b_block.len() {
        return Err(Error::AdjointUnsolvable);
    }
    let b_basis: Vec<Vec<BigRational>> = b_block.iter().map(|&i| lattice.unit(i)).collect();

    // mutation through A: left-project B onto B'
    let mut first = vec![vec![BigRational::zero(); b_block.len()]; b_prime.len()];
    for (j, b) in b_basis.iter().enumerate() {
        let c = project_coeffs(lattice, &b_prime, b, Side::Left)?;
        for (row, v) in c.into_iter().enumerate() {
            first[row][j] = v;
        }
    }
    // mutation through the left orthogonal of B: left-project B' onto B
    let mut second = vec![vec![BigRational::zero(); b_prime.len()]; b_block.len()];
    for (j, bp) in b_prime.iter().enumerate() {
        let c = project_coeffs(lattice, &b_basis, bp, Side::Left)?;
        for (row, v) in c.into_iter().enumerate() {
            second[row][j] = v;
        }
    }
    let double_mutation = qmat_mul(&second, &first);
    let ok = double_mutation == shadow.t_s;
    Ok(DoubleMutationCheck { twist: shadow.t_s, double_mutation, ok })
}

/// Requires `chi(later, earlier) = 0` for the listed blocks in order.
fn require_zero_pattern(lattice: &EulerLattice, blocks: &[&[usize]]) -> Result<()> {
    for (bi, b) in blocks.iter().enumerate() {
        for a in blocks.iter().take(bi) {
            for &x in b.iter() {
                for &y in a.iter() {
                    if lattice.entry(x, y) != 0 {
                        return Err(Error::InvalidInput(format!(
                            "pairing chi(e{x}, e{y}) must vanish for a \
                             semiorthogonal splitting"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Outcome of the two-factor twist factorization check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCheck {
    /// K-theory shadow of the splitting hypothesis: `chi(a, F_S b) = 0`
    /// for all basis classes `a` of the first factor and `b` of the
    /// second.
    pub hypothesis_holds: bool,
    /// Whether `T_S = T_{S_A} * T_{S_B}` holds exactly.
    pub identity_holds: bool,
    pub t_s: QMat,
    pub t_a_times_t_b: QMat,
}

/// Checks the twist factorization for the ambient splitting `<E, G>` with
/// `E` split as `<A, B>`.
pub fn verify_twist_factorization(
    lattice: &EulerLattice,
    a_block: &[usize],
    b_block: &[usize],
    g_block: &[usize],
) -> Result<FactorizationCheck> {
    let e_block: Vec<usize> = a_block.iter().chain(b_block).copied().collect();
    // the blocks need not cover the basis, but the listed ones must be
    // pairwise semiorthogonal in order
    require_zero_pattern(lattice, &[a_block, b_block, g_block])?;

    let full = spherical_shadow(lattice, &e_block, g_block)?;

    // cotwist columns for the B part, read in ambient coordinates
    let mut hypothesis_holds = true;
    for (bi, &b) in b_block.iter().enumerate() {
        let col = a_block.len() + bi;
        // F_S(e_b) in E coordinates
        let mut ambient = vec![BigRational::zero(); lattice.rank()];
        for (ei, &e) in e_block.iter().enumerate() {
            ambient[e] = full.f_s[ei][col].clone();
        }
        for &a in a_block {
            if !lattice.chi(&lattice.unit(a), &ambient).is_zero() {
                hypothesis_holds = false;
            }
        }
        let _ = b;
    }

    let ta = spherical_shadow(lattice, a_block, g_block)?.t_s;
    let tb = spherical_shadow(lattice, b_block, g_block)?.t_s;
    let t_a_times_t_b = qmat_mul(&ta, &tb);
    let identity_holds = t_a_times_t_b == full.t_s;
    Ok(FactorizationCheck { hypothesis_holds, identity_holds, t_s: full.t_s, t_a_times_t_b })
}

/// Outcome of iterating the rank-one factorization along a full splitting
/// of the source block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedFactorization {
    /// Hypothesis flag at each level of the iteration.
    pub step_hypotheses: Vec<bool>,
    pub all_hypotheses_hold: bool,
    /// Whether the ordered product of the rank-one twists equals the full
    /// twist.
    pub product_matches: bool,
}

/// Factors the full twist along the rank-one subblocks of `e_block`
/// (taken in order) and compares the ordered product with the full
/// twist. The first factor in the product corresponds to the first basis
/// class; the last factor is applied first.
pub fn iterated_rank_one_factorization(
    lattice: &EulerLattice,
    e_block: &[usize],
    g_block: &[usize],
) -> Result<IteratedFactorization> {
    let full = spherical_shadow(lattice, e_block, g_block)?.t_s;
    let mut step_hypotheses = Vec::new();
    for i in 0..e_block.len().saturating_sub(1) {
        let a = &e_block[i..i + 1];
        let b = &e_block[i + 1..];
        let rest: Vec<usize> = e_block[i..].to_vec();
        let _ = &rest;
        let check = verify_twist_factorization(lattice, a, b, g_block)?;
        step_hypotheses.push(check.hypothesis_holds);
    }
    let mut product = qmat_identity(g_block.len());
    for &e in e_block {
        let t = spherical_shadow(lattice, &[e], g_block)?.t_s;
        product = qmat_mul(&product, &t);
    }
    Ok(IteratedFactorization {
        all_hypotheses_hold: step_hypotheses.iter().all(|&h| h),
        step_hypotheses,
        product_matches: product == full,
    })
}

/// One step of a symbolic twist factorization plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    /// Index of the twisting block.
    pub index: usize,
    pub twist: String,
    /// Category the step starts from and lands in.
    pub from: String,
    pub to: String,
    /// Block indices `j < i`: classes that the restricted object must not
    /// map to at the window weight.
    pub vanish_into: Vec<usize>,
    /// Block indices `j >= i`: classes that must not map to the twisted
    /// restriction at the window weight.
    pub vanish_from: Vec<usize>,
}

/// Symbolic plan factoring a window shift into twists, one per block of a
/// length-`blocks` splitting of the window subquotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistPlan {
    pub blocks: usize,
    pub eta: i64,
    pub weight: i64,
    /// Closed weight window `[w, w + eta]` that all intermediate
    /// categories restrict into.
    pub closed_window: (i64, i64),
    /// Names of the intermediate fractional-window categories, between
    /// the outer windows at weights `w + 1` and `w`.
    pub intermediates: Vec<String>,
    /// Steps in composition order: the last step is applied first.
    pub steps: Vec<PlanStep>,
    pub composition: String,
}

/// Emits the symbolic chain `G[w+1] -> H[N] -> ... -> H[1] -> G[w]` with
/// the grade-restriction annotations of each intermediate window.
pub fn factorization_plan(blocks: usize, eta: i64, weight: i64) -> Result<TwistPlan> {
    if blocks == 0 {
        return Err(Error::InvalidInput("a factorization plan needs at least one block".into()));
    }
    let n = blocks - 1;
    let mut names = Vec::with_capacity(blocks + 1);
    names.push(format!("G[{}]", weight + 1));
    for i in (1..=n).rev() {
        names.push(format!("H[{i}]"));
    }
    names.push(format!("G[{weight}]"));
    let mut steps = Vec::with_capacity(blocks);
    for (pos, i) in (0..blocks).rev().enumerate() {
        steps.push(PlanStep {
            index: i,
            twist: format!("T[S{i}]"),
            from: names[pos].clone(),
            to: names[pos + 1].clone(),
            vanish_into: (0..i).collect(),
            vanish_from: (i..blocks).collect(),
        });
    }
    steps.reverse();
    let composition = steps
        .iter()
        .map(|s| s.twist.clone())
        .collect::<Vec<_>>()
        .join(" . ");
    Ok(TwistPlan {
        blocks,
        eta,
        weight,
        closed_window: (weight, weight + eta),
        intermediates: names[1..names.len() - 1].to_vec(),
        steps,
        composition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn p2() -> ExceptionalCollection {
        ExceptionalCollection::new(vec![vec![1, 3, 6], vec![0, 1, 3], vec![0, 0, 1]]).unwrap()
    }

    fn det_i64(m: &[Vec<i64>]) -> BigRational {
        qmat_det(&m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn left_mutation_of_the_projective_plane_collection() {
        let (c, m) = p2().mutate(1, Side::Left).unwrap();
        assert_eq!(c.gram(), &vec![vec![1, -3, 3], vec![0, 1, -3], vec![0, 0, 1]]);
        assert_eq!(det_i64(&m).abs(), BigRational::one());
        // the oracle: change of basis (e1, e3 - 3 e2, e2) applied to the form
        let g = p2();
        let check = congruence(&m, g.gram()).unwrap();
        assert_eq!(&check, c.gram());
    }

    #[test]
    fn left_then_right_is_the_identity() {
        let c = p2();
        for k in 0..2 {
            let (l, ml) = c.mutate(k, Side::Left).unwrap();
            let (back, mr) = l.mutate(k, Side::Right).unwrap();
            assert_eq!(back.gram(), c.gram());
            assert_eq!(mat_mul_i64(&mr, &ml).unwrap(), qident(3));
        }
    }

    fn qident(n: usize) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        m
    }

    #[test]
    fn orthogonal_pair_mutation_is_a_transposition() {
        let c =
            ExceptionalCollection::new(vec![vec![1, 0, 5], vec![0, 1, 2], vec![0, 0, 1]]).unwrap();
        let (l, m) = c.mutate(0, Side::Left).unwrap();
        // chi(f0, f1) = 0, so only the two basis vectors swap
        assert_eq!(m[0], vec![0, 1, 0]);
        assert_eq!(m[1], vec![1, 0, 0]);
        assert_eq!(l.gram(), &vec![vec![1, 0, 2], vec![0, 1, 5], vec![0, 0, 1]]);
    }

    #[test]
    fn adjoint_projection_solves_the_block_gram() {
        let lat =
            EulerLattice::new(vec![vec![1, 0, 2], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        let (p, integral) = adjoint_project(&lat, &[0, 1], &[0, 0, 1], Side::Right).unwrap();
        assert!(integral);
        assert_eq!(p, vec![q(2), q(1), q(0)]);
        // a vector already in the block projects to itself
        let (p, _) = adjoint_project(&lat, &[0, 1], &[3, -2, 0], Side::Right).unwrap();
        assert_eq!(p, vec![q(3), q(-2), q(0)]);
        // a vector orthogonal to the block on both sides projects to zero
        let lat2 = EulerLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let (p, _) = adjoint_project(&lat2, &[0], &[0, 1], Side::Left).unwrap();
        assert_eq!(p, vec![q(0), q(0)]);
    }

    #[test]
    fn non_integral_projections_are_flagged_not_rejected() {
        // chi(b,b) = 2 and chi(x,b) = 1 force the coefficient 1/2
        let lat = EulerLattice::new(vec![vec![1, 1], vec![0, 2]]).unwrap();
        let (p, integral) = adjoint_project(&lat, &[1], &[1, 0], Side::Left).unwrap();
        assert!(!integral);
        assert_eq!(p, vec![q(0), BigRational::new(1.into(), 2.into())]);
        // a singular block Gram is an error
        let sing = EulerLattice::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(
            adjoint_project(&sing, &[0], &[0, 1], Side::Left),
            Err(Error::AdjointUnsolvable)
        );
    }

    #[test]
    fn twist_shadow_of_an_orthogonal_pair_is_trivial() {
        // G pairs to zero with E on both sides: S = 0, T = id, F = -id
        let lat = EulerLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let shadow = spherical_shadow(&lat, &[0], &[1]).unwrap();
        assert_eq!(shadow.t_s, qmat_identity(1));
        assert_eq!(shadow.f_s, vec![vec![q(-1)]]);
    }

    #[test]
    fn rank_one_twist_matches_the_spherical_class_formula() {
        // chi(a,a) = 1, chi(a,g) = 2, chi(g,g) = 2: S(a) = g is a
        // 2-spherical class and the twist sends it to its negative
        let lat = EulerLattice::new(vec![vec![1, 2], vec![0, 2]]).unwrap();
        let shadow = spherical_shadow(&lat, &[0], &[1]).unwrap();
        assert_eq!(shadow.s, vec![vec![q(1)]]);
        assert_eq!(shadow.t_s, vec![vec![q(-1)]]);
        // a class with chi(s, y) = 0 is fixed: extend G by such a class
        let lat3 =
            EulerLattice::new(vec![vec![1, 2, 0], vec![0, 2, 0], vec![0, 0, 1]]).unwrap();
        let shadow = spherical_shadow(&lat3, &[0], &[1, 2]).unwrap();
        assert_eq!(shadow.t_s[0], vec![q(-1), q(0)]);
        assert_eq!(shadow.t_s[1], vec![q(0), q(1)]);
    }

    #[test]
    fn double_mutation_identity_rank_two_family() {
        // A = <a>, chi(a,a) = 1, B = <b> with chi(b,b) = 1, chi(a,b) = k
        for k in -6..=6 {
            let lat = EulerLattice::new(vec![vec![1, k], vec![0, 1]]).unwrap();
            let check = verify_double_mutation(&lat, &[0], &[1]).unwrap();
            assert!(check.ok, "failed at k = {k}");
            assert_eq!(check.twist, vec![vec![q(1 - k * k)]]);
        }
    }

    #[test]
    fn double_mutation_identity_orthogonal_case() {
        let lat = EulerLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let check = verify_double_mutation(&lat, &[0], &[1]).unwrap();
        assert!(check.ok);
        assert_eq!(check.twist, qmat_identity(1));
        assert_eq!(check.double_mutation, qmat_identity(1));
    }

    #[test]
    fn factorization_orthogonal_second_factor_degenerates() {
        // B orthogonal to everything: S_B = 0, hypothesis trivially true,
        // and the identity reduces to T_S = T_{S_A}
        let lat = EulerLattice::new(vec![
            vec![1, 0, 3],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap();
        let check = verify_twist_factorization(&lat, &[0], &[1], &[2]).unwrap();
        assert!(check.hypothesis_holds);
        assert!(check.identity_holds);
        let ta = spherical_shadow(&lat, &[0], &[2]).unwrap().t_s;
        assert_eq!(check.t_s, ta);
    }

    #[test]
    fn twist_and_cotwist_determinants_agree_up_to_sign() {
        // det(id - S R) = det(id - R S), so det T = (-1)^rank(E) det F
        let lat = EulerLattice::new(vec![
            vec![1, 2, 1, 4],
            vec![0, 1, -1, 2],
            vec![0, 0, 1, 3],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        let shadow = spherical_shadow(&lat, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(qmat_det(&shadow.t_s), qmat_det(&shadow.f_s));
        // a genuinely 2-periodic instance where the twist is unimodular
        let k3 = EulerLattice::new(vec![vec![1, 2], vec![0, 2]]).unwrap();
        let shadow = spherical_shadow(&k3, &[0], &[1]).unwrap();
        assert_eq!(qmat_det(&shadow.t_s).abs(), BigRational::one());
    }

    #[test]
    fn plan_shapes() {
        let plan = factorization_plan(3, 3, 0).unwrap();
        assert_eq!(plan.steps.len(), 3);
        assert_eq!(plan.intermediates, vec!["H[2]", "H[1]"]);
        assert_eq!(plan.composition, "T[S0] . T[S1] . T[S2]");
        assert_eq!(plan.steps[0].vanish_into, Vec::<usize>::new());
        assert_eq!(plan.steps[0].vanish_from, vec![0, 1, 2]);
        assert_eq!(plan.steps[2].vanish_into, vec![0, 1]);
        assert_eq!(plan.steps[2].vanish_from, vec![2]);
        // the last listed twist is applied first, out of G[w+1]
        assert_eq!(plan.steps[2].from, "G[1]");
        assert_eq!(plan.steps[0].to, "G[0]");

        let single = factorization_plan(1, 5, 2).unwrap();
        assert_eq!(single.steps.len(), 1);
        assert!(single.intermediates.is_empty());
        assert_eq!(single.composition, "T[S0]");

        let double = factorization_plan(2, 2, -1).unwrap();
        assert_eq!(double.steps.len(), 2);
        assert_eq!(double.intermediates, vec!["H[1]"]);
    }
}
