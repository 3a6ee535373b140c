//! Exact rational linear algebra.
//!
//! Matrices are stored row-sparse with [`BigRational`] entries. Ranks go
//! through a fraction-free elimination on integer rows: each rational row is
//! cleared of denominators, and row combinations `p·r − a·s` are followed by
//! division by the row content. Kernels and solves are first lifted p-adically
//! and accepted only after exact verification, falling back to the same
//! elimination otherwise. No tolerance is ever involved.
//!
//! Basis choices are deterministic: pivots are taken column by column from the
//! left, so an image basis consists of the leftmost independent columns and a
//! quotient basis of the earliest representatives not already spanned.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

mod modular;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense zero vector.
pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// A `rows × cols` rational matrix, stored as sorted sparse rows without
/// explicit zeros. Two matrices compare equal iff all their entries are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        RatMatrix { rows: n, cols: n, data }
    }

    /// Builds a matrix from (row, col, value) triplets; repeated positions are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) outside {rows}x{cols}");
            *acc[i].entry(j).or_insert_with(Rational::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        RatMatrix { rows, cols, data }
    }

    /// Dense row-major constructor.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect()
            })
            .collect();
        RatMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut data = vec![Vec::new(); rows];
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    data[i].push((j, v.clone()));
                }
            }
        }
        RatMatrix { rows, cols: columns.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let row = &self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => row[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    /// All entries, row-major.
    pub fn entries(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for row in &self.data {
            let mut dense = zero_vec(self.cols);
            for (j, v) in row {
                dense[*j] = v.clone();
            }
            out.extend(dense);
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![zero_vec(self.rows); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out[*j][i] = v.clone();
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        RatMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        RatMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        self.data
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect()
    }

    fn zip_with(&self, other: &RatMatrix, negate_other: bool) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let triplets = self
            .data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v.clone())))
            .chain(other.data.iter().enumerate().flat_map(|(i, r)| {
                r.iter().map(move |(j, v)| (i, *j, if negate_other { -v } else { v.clone() }))
            }));
        RatMatrix::from_triplets(self.rows, self.cols, triplets)
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        self.zip_with(other, false)
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        self.zip_with(other, true)
    }

    /// `diag(scale) · self`.
    pub fn scale_rows(&self, scale: &[Rational]) -> RatMatrix {
        assert_eq!(scale.len(), self.rows);
        let data = self
            .data
            .iter()
            .zip(scale)
            .map(|(row, s)| row.iter().map(|(j, v)| (*j, v * s)).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self · diag(scale)`.
    pub fn scale_cols(&self, scale: &[Rational]) -> RatMatrix {
        assert_eq!(scale.len(), self.cols);
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, v * &scale[*j])).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.cols, v.clone())));
                r
            })
            .collect();
        RatMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        let data = idx.iter().map(|&i| self.data[i].clone()).collect();
        RatMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> RatMatrix {
        let mut remap = vec![None; self.cols];
        for (new, &old) in idx.iter().enumerate() {
            remap[old] = Some(new);
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut r: Vec<(usize, Rational)> =
                    row.iter().filter_map(|(j, v)| remap[*j].map(|nj| (nj, v.clone()))).collect();
                r.sort_by_key(|(j, _)| *j);
                r
            })
            .collect();
        RatMatrix { rows: self.rows, cols: idx.len(), data }
    }
}

/// A linear subspace of `ℚ^n` given by an independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_basis_unchecked(ambient_dim, RatMatrix::identity(ambient_dim).columns())
    }

    /// Checks lengths and linear independence.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        for v in &basis {
            if v.len() != ambient_dim {
                return Err(Error::DimMismatch { expected: ambient_dim, found: v.len() });
            }
        }
        if rank(&RatMatrix::from_columns(ambient_dim, &basis)) != basis.len() {
            return Err(Error::InvalidSpec("basis vectors are linearly dependent".into()));
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// Span of arbitrary vectors; keeps the earliest independent ones.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        let m = RatMatrix::from_columns(ambient_dim, vectors);
        let basis = pivot_columns(&m).into_iter().map(|j| vectors[j].clone()).collect();
        Subspace { ambient_dim, basis }
    }

    pub(crate) fn from_basis_unchecked(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Self {
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim × dim` matrix.
    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient_dim && solve(&self.matrix(), &RatMatrix::from_columns(v.len(), &[v.to_vec()])).is_some()
    }

    /// `true` if every basis vector of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && solve(&self.matrix(), &other.matrix()).is_some()
    }

    /// Image of the subspace under `f` (spanning set, not reduced).
    pub fn map(&self, f: &RatMatrix) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| f.mul_vec(v)).collect()
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination core.

type IntRow = Vec<(usize, BigInt)>;

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Divides by the content and makes the leading coefficient positive.
fn make_primitive(row: &mut IntRow) {
    let Some((_, lead)) = row.first() else { return };
    let negative = lead.is_negative();
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if g.is_one() && !negative {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
        if negative {
            *v = -&*v;
        }
    }
}

fn int_row(row: &[(usize, Rational)]) -> IntRow {
    let l = lcm_of_denominators(row.iter().map(|(_, v)| v));
    let mut out: IntRow = row.iter().map(|(j, v)| (*j, v.numer() * (&l / v.denom()))).collect();
    make_primitive(&mut out);
    out
}

/// `p·target − a·pivot` where both share their leading column; cancels it.
fn combine(target: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &target[0].1;
    let p = &pivot[0].1;
    let g = a.gcd(p);
    let ta = p / &g;
    let tp = a / &g;
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, &ta * &target[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&tp * &pivot[j].1)));
            j += 1;
        } else {
            let v = &ta * &target[i].1 - &tp * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

/// Row echelon form with pivots restricted to columns `< pivot_limit`.
struct Echelon {
    /// Pivot rows in increasing pivot-column order.
    rows: Vec<IntRow>,
    pivots: Vec<usize>,
    /// Reduced rows that vanish on the pivot region but not beyond it.
    rest: Vec<IntRow>,
}

fn echelon(rows: Vec<IntRow>, pivot_limit: usize) -> Echelon {
    let mut buckets: Vec<Vec<IntRow>> = vec![Vec::new(); pivot_limit];
    let mut rest = Vec::new();
    let place = |row: IntRow, buckets: &mut Vec<Vec<IntRow>>, rest: &mut Vec<IntRow>| match row.first() {
        None => {}
        Some((c, _)) if *c < pivot_limit => buckets[*c].push(row),
        Some(_) => rest.push(row),
    };
    for r in rows {
        place(r, &mut buckets, &mut rest);
    }
    let mut out_rows = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..pivot_limit {
        let bucket = std::mem::take(&mut buckets[col]);
        if bucket.is_empty() {
            continue;
        }
        // Sparsest row (then smallest leading magnitude) limits fill-in.
        let best = bucket
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| x.len().cmp(&y.len()).then_with(|| x[0].1.magnitude().cmp(y[0].1.magnitude())))
            .map(|(i, _)| i)
            .unwrap();
        let mut bucket = bucket;
        let pivot = bucket.swap_remove(best);
        for r in bucket {
            place(combine(&r, &pivot), &mut buckets, &mut rest);
        }
        out_rows.push(pivot);
        pivots.push(col);
    }
    Echelon { rows: out_rows, pivots, rest }
}

fn echelon_of(a: &RatMatrix, pivot_limit: usize) -> Echelon {
    echelon(a.data.iter().map(|r| int_row(r)).collect(), pivot_limit)
}

/// Scales a vector to a primitive integer vector with positive leading entry.
fn normalize_vector(v: &mut [Rational]) {
    let l = lcm_of_denominators(v.iter());
    let nums: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = nums.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let sign = if nums.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -g } else { g };
    for (x, n) in v.iter_mut().zip(nums) {
        *x = Rational::from_integer(n / &sign);
    }
}

/// Rank over ℚ.
pub fn rank(a: &RatMatrix) -> usize {
    echelon_of(a, a.cols).pivots.len()
}

/// Indices of the leftmost independent columns.
pub fn pivot_columns(a: &RatMatrix) -> Vec<usize> {
    echelon_of(a, a.cols).pivots
}

/// Basis of `{v : A v = 0}`: one vector per non-pivot column, scaled to a
/// primitive integer vector whose first nonzero entry is positive.
pub fn nullspace_basis(a: &RatMatrix) -> Subspace {
    let rows: Vec<IntRow> = a.data.iter().map(|r| int_row(r)).collect();
    if let Some(kernel) = modular::kernel(&rows, a.cols) {
        let basis = kernel
            .into_iter()
            .map(|(_, v)| {
                let mut x: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
                normalize_vector(&mut x);
                x
            })
            .collect();
        return Subspace { ambient_dim: a.cols, basis };
    }
    nullspace_exact(rows, a.cols)
}

fn nullspace_exact(rows: Vec<IntRow>, cols: usize) -> Subspace {
    let ech = echelon(rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let basis = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut x = zero_vec(cols);
            x[free] = Rational::one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots).rev() {
                let s = row[1..]
                    .iter()
                    .filter(|(j, _)| !x[*j].is_zero())
                    .fold(Rational::zero(), |acc, (j, c)| acc + &x[*j] * c);
                if !s.is_zero() {
                    x[p] = -s / Rational::from_integer(row[0].1.clone());
                }
            }
            normalize_vector(&mut x);
            x
        })
        .collect();
    Subspace { ambient_dim: cols, basis }
}

/// Basis of the column space: the leftmost independent columns of `A`.
pub fn image_basis(a: &RatMatrix) -> Subspace {
    let pivots = pivot_columns(a);
    let cols = a.select_cols(&pivots).columns();
    Subspace { ambient_dim: a.rows, basis: cols }
}

/// One solution `X` of `A X = B` (free variables set to zero), or `None`
/// when some column of `B` lies outside the column space of `A`.
pub fn solve(a: &RatMatrix, b: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(a.rows, b.rows, "row mismatch in solve");
    match solve_modular(a, b) {
        Some(x) => x,
        None => solve_exact(a, b),
    }
}

/// Column-by-column solve through the kernel of `[A | b]`: `b` is consistent
/// exactly when its column is free, and that kernel vector is `(−x, 1)`.
fn solve_modular(a: &RatMatrix, b: &RatMatrix) -> Option<Option<RatMatrix>> {
    let n = a.cols;
    let mut data: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for j in 0..b.cols {
        let aug = a.hstack(&b.select_cols(&[j]));
        let rows: Vec<IntRow> = aug.data.iter().map(|r| int_row(r)).collect();
        let kernel = modular::kernel(&rows, n + 1)?;
        let Some((_, v)) = kernel.into_iter().find(|(f, _)| *f == n) else {
            return Some(None);
        };
        let scale = Rational::from_integer(-v[n].clone());
        for (i, x) in v[..n].iter().enumerate() {
            if !x.is_zero() {
                data[i].push((j, Rational::from_integer(x.clone()) / &scale));
            }
        }
    }
    Some(Some(RatMatrix { rows: n, cols: b.cols, data }))
}

fn solve_exact(a: &RatMatrix, b: &RatMatrix) -> Option<RatMatrix> {
    let n = a.cols;
    let aug = a.hstack(b);
    let ech = echelon_of(&aug, n);
    if !ech.rest.is_empty() {
        return None;
    }
    // Rows of X, filled from the last pivot upward.
    let mut x: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots).rev() {
        let lead = Rational::from_integer(row[0].1.clone());
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, c) in &row[1..] {
            let c = Rational::from_integer(c.clone());
            if *j >= n {
                *acc.entry(j - n).or_insert_with(Rational::zero) += c;
            } else {
                for (col, v) in &x[*j] {
                    *acc.entry(*col).or_insert_with(Rational::zero) -= &c * v;
                }
            }
        }
        x[p] = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v / &lead)).collect();
    }
    let data = x.into_iter().map(|r| r.into_iter().collect()).collect();
    Some(RatMatrix { rows: n, cols: b.cols, data })
}

/// `dim Z − dim B` after checking `B ⊆ Z`.
pub fn quotient_dim(z: &Subspace, b: &Subspace) -> Result<usize> {
    if z.ambient_dim != b.ambient_dim {
        return Err(Error::DimMismatch { expected: z.ambient_dim, found: b.ambient_dim });
    }
    if !z.contains_subspace(b) {
        return Err(Error::NotContained);
    }
    Ok(z.dim() - b.dim())
}

/// Representatives of a basis of `Z / B`: the earliest basis vectors of `Z`
/// not in the span of `B` and the representatives already chosen.
pub fn quotient_basis(z: &Subspace, b: &Subspace) -> Result<Vec<Vec<Rational>>> {
    quotient_dim(z, b)?;
    let mut cols = b.basis.clone();
    cols.extend(z.basis.iter().cloned());
    let m = RatMatrix::from_columns(z.ambient_dim, &cols);
    let offset = b.dim();
    Ok(pivot_columns(&m).into_iter().filter(|&j| j >= offset).map(|j| cols[j].clone()).collect())
}

/// Matrix of the map `Zs/Bs → Zt/Bt` induced by `f`, in the bases returned by
/// [`quotient_basis`].
pub fn induced_map(f: &RatMatrix, zs: &Subspace, bs: &Subspace, zt: &Subspace, bt: &Subspace) -> Result<RatMatrix> {
    if f.cols != zs.ambient_dim {
        return Err(Error::DimMismatch { expected: zs.ambient_dim, found: f.cols });
    }
    if f.rows != zt.ambient_dim {
        return Err(Error::DimMismatch { expected: zt.ambient_dim, found: f.rows });
    }
    let qs = quotient_basis(zs, bs)?;
    let qt = quotient_basis(zt, bt)?;
    let fz = RatMatrix::from_columns(f.rows, &zs.map(f));
    if solve(&zt.matrix(), &fz).is_none() {
        return Err(Error::NotChainCompatible("cocycles not mapped into target cocycles"));
    }
    let fb = RatMatrix::from_columns(f.rows, &bs.map(f));
    if solve(&bt.matrix(), &fb).is_none() {
        return Err(Error::NotChainCompatible("coboundaries not mapped into target coboundaries"));
    }
    if qs.is_empty() || qt.is_empty() {
        return Ok(RatMatrix::zeros(qt.len(), qs.len()));
    }
    let mut target_cols = bt.basis.clone();
    target_cols.extend(qt.iter().cloned());
    let target = RatMatrix::from_columns(f.rows, &target_cols);
    let images: Vec<Vec<Rational>> = qs.iter().map(|v| f.mul_vec(v)).collect();
    let coords = solve(&target, &RatMatrix::from_columns(f.rows, &images))
        .ok_or(Error::NotChainCompatible("image outside target cocycles"))?;
    let keep: Vec<usize> = (bt.dim()..bt.dim() + qt.len()).collect();
    Ok(coords.select_rows(&keep))
}

/// Weighted inner product `Σ w_i u_i v_i`.
pub fn weighted_dot(w: &[Rational], u: &[Rational], v: &[Rational]) -> Rational {
    w.iter()
        .zip(u)
        .zip(v)
        .filter(|((_, a), b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, ((w, a), b)| acc + w * a * b)
}
