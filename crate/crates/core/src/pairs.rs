//! Cohomology of a pair `(X, A)` and its long exact sequence
//!
//! ```text
//! … → H^k(X,A) –i→ H^k(X) –j*→ H^k(A) –b→ H^{k+1}(X,A) → …
//! ```
//!
//! Relative cochains are the cochains of `X` vanishing on `A`; all three
//! cohomologies are computed in explicit cochain coordinates and the maps are
//! induced by inclusion, restriction, and extension-by-zero followed by `d`.

use crate::complex::{extend_by_zero, CellComplex, CochainComplex, Subcomplex};
use crate::error::Result;
use crate::linalg::{induced_map, pivot_columns, quotient_basis, rank, RatMatrix, Rational, Subspace};

#[derive(Debug, Clone)]
pub struct Pair {
    complex: CellComplex,
    sub: Subcomplex,
}

/// Matrices of `i`, `j*` and `b` in degree `k`, in echelonized quotient bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesMaps {
    pub i: RatMatrix,
    pub jstar: RatMatrix,
    pub b: RatMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesDegree {
    pub degree: usize,
    pub rel_dim: usize,
    pub abs_dim: usize,
    pub sub_dim: usize,
    pub rank_i: usize,
    pub rank_j: usize,
    pub rank_b: usize,
    pub exact_at_rel: bool,
    pub exact_at_abs: bool,
    pub exact_at_sub: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesReport {
    pub degrees: Vec<LesDegree>,
    /// `j*∘i`, `b∘j*` and `i∘b` all vanish as matrices.
    pub compositions_vanish: bool,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.compositions_vanish && self.degrees.iter().all(|d| d.exact_at_rel && d.exact_at_abs && d.exact_at_sub)
    }

    /// First degree with a non-exact node, if any.
    pub fn first_failure(&self) -> Option<usize> {
        self.degrees.iter().find(|d| !(d.exact_at_rel && d.exact_at_abs && d.exact_at_sub)).map(|d| d.degree)
    }

    /// `Σ(−1)^k [dim H^k(X,A) − dim H^k(X) + dim H^k(A)]`; zero for an exact sequence.
    pub fn alternating_sum(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| {
                let v = d.rel_dim as i64 - d.abs_dim as i64 + d.sub_dim as i64;
                if d.degree % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }
}

/// Rank of `H^k(X,A) → H^k(X)` and cocycles on `X`, supported off `A`,
/// whose classes span the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRelAbs {
    pub rank: usize,
    pub basis: Vec<Vec<Rational>>,
}

/// Cocycles and coboundaries of one degree.
struct Spaces {
    z: Subspace,
    b: Subspace,
}

impl Pair {
    pub fn new(complex: CellComplex, sub: Subcomplex) -> Result<Pair> {
        sub.check_closed(&complex)?;
        Ok(Pair { complex, sub })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn sub(&self) -> &Subcomplex {
        &self.sub
    }

    fn top(&self) -> usize {
        self.complex.top_dim()
    }

    fn keep_rel(&self) -> Vec<Vec<usize>> {
        (0..=self.top()).map(|k| self.sub.complement(k)).collect()
    }

    fn relative_complex(&self) -> CochainComplex {
        self.complex.cochain_complex().restrict(&self.keep_rel())
    }

    pub fn relative_cohomology(&self, k: usize) -> usize {
        self.relative_complex().betti(k)
    }

    /// Relative cocycles/coboundaries, extended by zero into `C^k(X)`.
    fn rel_spaces(&self, rel: &CochainComplex, keep: &[Vec<usize>], k: usize) -> Spaces {
        let n = self.complex.num_cells(k);
        let lift = |s: Subspace| {
            Subspace::span(n, &s.basis().iter().map(|v| extend_by_zero(&keep[k], n, v)).collect::<Vec<_>>())
        };
        Spaces { z: lift(rel.cocycles(k)), b: lift(rel.coboundaries(k)) }
    }

    fn abs_spaces(full: &CochainComplex, k: usize) -> Spaces {
        Spaces { z: full.cocycles(k), b: full.coboundaries(k) }
    }

    fn restriction(&self, k: usize) -> RatMatrix {
        RatMatrix::identity(self.complex.num_cells(k)).select_rows(&self.sub.cells(k))
    }

    fn extension(&self, k: usize) -> RatMatrix {
        self.restriction(k).transpose()
    }

    fn maps_with(
        &self,
        k: usize,
        rel: &[Spaces],
        abs: &[Spaces],
        sub: &[Spaces],
        full: &CochainComplex,
    ) -> Result<LesMaps> {
        let n = self.complex.num_cells(k);
        let i = induced_map(&RatMatrix::identity(n), &rel[k].z, &rel[k].b, &abs[k].z, &abs[k].b)?;
        let jstar = induced_map(&self.restriction(k), &abs[k].z, &abs[k].b, &sub[k].z, &sub[k].b)?;
        let b = if k < self.top() {
            let f = full.d(k).mul(&self.extension(k));
            induced_map(&f, &sub[k].z, &sub[k].b, &rel[k + 1].z, &rel[k + 1].b)?
        } else {
            RatMatrix::zeros(0, sub[k].z.dim() - sub[k].b.dim())
        };
        Ok(LesMaps { i, jstar, b })
    }

    fn all_spaces(&self) -> (CochainComplex, Vec<Spaces>, Vec<Spaces>, Vec<Spaces>) {
        let full = self.complex.cochain_complex();
        let keep = self.keep_rel();
        let relc = full.restrict(&keep);
        let subc = self.sub.cochain_complex(&self.complex);
        let rel = (0..=self.top()).map(|k| self.rel_spaces(&relc, &keep, k)).collect();
        let abs = (0..=self.top()).map(|k| Self::abs_spaces(&full, k)).collect();
        let sub = (0..=self.top()).map(|k| Spaces { z: subc.cocycles(k), b: subc.coboundaries(k) }).collect();
        (full, rel, abs, sub)
    }

    pub fn les_maps(&self, k: usize) -> Result<LesMaps> {
        let (full, rel, abs, sub) = self.all_spaces();
        if k > self.top() {
            return Ok(LesMaps { i: RatMatrix::zeros(0, 0), jstar: RatMatrix::zeros(0, 0), b: RatMatrix::zeros(0, 0) });
        }
        self.maps_with(k, &rel, &abs, &sub, &full)
    }

    /// Dimensions, ranks and exactness verdicts at every node of the sequence.
    pub fn les_audit(&self) -> Result<LesReport> {
        let (full, rel, abs, sub) = self.all_spaces();
        let maps: Vec<LesMaps> =
            (0..=self.top()).map(|k| self.maps_with(k, &rel, &abs, &sub, &full)).collect::<Result<_>>()?;
        let dims = |s: &[Spaces], k: usize| s[k].z.dim() - s[k].b.dim();
        let mut compositions_vanish = true;
        let mut degrees = Vec::new();
        for k in 0..=self.top() {
            let m = &maps[k];
            compositions_vanish &= m.jstar.mul(&m.i).is_zero() && m.b.mul(&m.jstar).is_zero();
            if k < self.top() {
                compositions_vanish &= maps[k + 1].i.mul(&m.b).is_zero();
            }
            let (rel_dim, abs_dim, sub_dim) = (dims(&rel, k), dims(&abs, k), dims(&sub, k));
            let (rank_i, rank_j, rank_b) = (rank(&m.i), rank(&m.jstar), rank(&m.b));
            let rank_b_prev = if k == 0 { 0 } else { rank(&maps[k - 1].b) };
            degrees.push(LesDegree {
                degree: k,
                rel_dim,
                abs_dim,
                sub_dim,
                rank_i,
                rank_j,
                rank_b,
                exact_at_rel: rank_b_prev == rel_dim - rank_i,
                exact_at_abs: rank_i == abs_dim - rank_j,
                exact_at_sub: rank_j == sub_dim - rank_b,
            });
        }
        Ok(LesReport { degrees, compositions_vanish })
    }

    /// Image of relative cohomology in absolute cohomology.
    pub fn image_rel_to_abs(&self, k: usize) -> Result<ImageRelAbs> {
        if k > self.top() {
            return Ok(ImageRelAbs { rank: 0, basis: Vec::new() });
        }
        let full = self.complex.cochain_complex();
        let keep = self.keep_rel();
        let rel = self.rel_spaces(&full.restrict(&keep), &keep, k);
        let abs = Self::abs_spaces(&full, k);
        let n = self.complex.num_cells(k);
        let i = induced_map(&RatMatrix::identity(n), &rel.z, &rel.b, &abs.z, &abs.b)?;
        let reps = quotient_basis(&rel.z, &rel.b)?;
        let basis: Vec<Vec<Rational>> = pivot_columns(&i).into_iter().map(|j| reps[j].clone()).collect();
        Ok(ImageRelAbs { rank: basis.len(), basis })
    }
}

/// Cohomology of the cochains of `x` that vanish on `t`.
pub fn ker_pullback_cohomology(x: &CellComplex, t: &Subcomplex, k: usize) -> Result<usize> {
    t.check_closed(x)?;
    let keep: Vec<Vec<usize>> = (0..=x.top_dim()).map(|j| t.complement(j)).collect();
    Ok(x.cochain_complex().restrict(&keep).betti(k))
}
