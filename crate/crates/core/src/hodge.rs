//! Weighted cochains: codifferentials, Laplacians, harmonic spaces under
//! absolute and relative boundary conditions, and the Hodge decomposition.
//!
//! The inner product on k-cochains is diagonal in the cell basis,
//! `⟨u, v⟩_k = Σ_σ w_σ u_σ v_σ`, and `δ_k = W_{k−1}^{-1} d_{k−1}ᵀ W_k` is the
//! adjoint of `d_{k−1}` for it. Harmonic cochains are computed as the exact
//! kernel of `d_k` stacked on `δ_k`.

use std::collections::HashMap;

use num_traits::{One, Signed};

use crate::complex::{extend_by_zero, CellComplex, CellularInvolution, CochainComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_basis, rank, solve, weighted_dot, zero_vec, RatMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Plain cochains of the whole complex.
    Absolute,
    /// Cochains vanishing on the boundary subcomplex.
    Relative,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Absolute => "abs",
            Condition::Relative => "rel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedComplex {
    complex: CellComplex,
    weights: Vec<Vec<Rational>>,
}

/// Harmonic cochains of one degree, as full cochains on the complex
/// (relative ones vanish on the boundary subcomplex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub degree: usize,
    pub condition: Condition,
    pub vectors: Vec<Vec<Rational>>,
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `v = harmonic + exact + coexact`, with `exact = d_{k−1}(exact_potential)`
/// and `coexact = δ_{k+1}(coexact_potential)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeSplit {
    pub harmonic: Vec<Rational>,
    pub exact: Vec<Rational>,
    pub coexact: Vec<Rational>,
    pub exact_potential: Vec<Rational>,
    pub coexact_potential: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleSplit {
    pub invariant: usize,
    pub anti_invariant: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualityReport {
    pub degree: usize,
    pub dual_degree: usize,
    pub abs_dim: usize,
    pub rel_dim: usize,
}

impl DualityReport {
    pub fn equal(&self) -> bool {
        self.abs_dim == self.rel_dim
    }
}

/// A cochain complex together with the diagonal weights of each degree.
struct Weighted {
    cochains: CochainComplex,
    weights: Vec<Vec<Rational>>,
}

impl Weighted {
    fn codifferential(&self, k: usize) -> RatMatrix {
        let inv: Vec<Rational> = self.weights[k - 1].iter().map(|w| w.recip()).collect();
        self.cochains.d(k - 1).transpose().scale_cols(&self.weights[k]).scale_rows(&inv)
    }

    fn harmonic(&self, k: usize) -> Vec<Vec<Rational>> {
        let n = self.cochains.dim(k);
        let mut stacked = self.cochains.d(k).clone();
        if k > 0 {
            stacked = stacked.vstack(&self.codifferential(k));
        }
        if n == 0 {
            return Vec::new();
        }
        nullspace_basis(&stacked).basis().to_vec()
    }
}

impl WeightedComplex {
    pub fn uniform(complex: CellComplex) -> Self {
        let weights = (0..=complex.top_dim()).map(|k| vec![Rational::one(); complex.num_cells(k)]).collect();
        WeightedComplex { complex, weights }
    }

    pub fn new(complex: CellComplex, weights: Vec<Vec<Rational>>) -> Result<Self> {
        if weights.len() != complex.top_dim() + 1 {
            return Err(Error::DimMismatch { expected: complex.top_dim() + 1, found: weights.len() });
        }
        for (k, level) in weights.iter().enumerate() {
            if level.len() != complex.num_cells(k) {
                return Err(Error::DimMismatch { expected: complex.num_cells(k), found: level.len() });
            }
            if let Some(i) = level.iter().position(|w| !w.is_positive()) {
                return Err(Error::NonPositiveWeight(complex.id(k, i).to_string()));
            }
        }
        Ok(WeightedComplex { complex, weights })
    }

    /// Weights by cell id. Cells absent from the map get weight 1 only when
    /// `default_unit` is set.
    pub fn from_map(complex: CellComplex, map: &HashMap<String, Rational>, default_unit: bool) -> Result<Self> {
        for id in map.keys() {
            if complex.locate(id).is_none() {
                return Err(Error::UnknownId(id.clone()));
            }
        }
        let mut weights = Vec::with_capacity(complex.top_dim() + 1);
        for k in 0..=complex.top_dim() {
            let mut level = Vec::with_capacity(complex.num_cells(k));
            for id in complex.ids(k) {
                match map.get(id) {
                    Some(w) => level.push(w.clone()),
                    None if default_unit => level.push(Rational::one()),
                    None => return Err(Error::MissingWeight(id.clone())),
                }
            }
            weights.push(level);
        }
        Self::new(complex, weights)
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn weights(&self, k: usize) -> &[Rational] {
        &self.weights[k]
    }

    pub fn inner(&self, k: usize, u: &[Rational], v: &[Rational]) -> Rational {
        weighted_dot(&self.weights[k], u, v)
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.complex.top_dim() {
            return Err(Error::DegreeOutOfRange { degree: k, top: self.complex.top_dim() });
        }
        Ok(())
    }

    fn full(&self) -> Weighted {
        Weighted { cochains: self.complex.cochain_complex(), weights: self.weights.clone() }
    }

    /// Cochains vanishing on `a`, with the weights of the remaining cells.
    fn relative(&self, a: &Subcomplex) -> (Weighted, Vec<Vec<usize>>) {
        let keep: Vec<Vec<usize>> = (0..=self.complex.top_dim()).map(|k| a.complement(k)).collect();
        let weights =
            keep.iter().enumerate().map(|(k, idx)| idx.iter().map(|&i| self.weights[k][i].clone()).collect()).collect();
        let cochains = self.complex.cochain_complex().restrict(&keep);
        (Weighted { cochains, weights }, keep)
    }

    /// `δ_k : C^k → C^{k−1}` for `1 ≤ k ≤ top_dim`.
    pub fn codifferential(&self, k: usize) -> Result<RatMatrix> {
        if k == 0 || k > self.complex.top_dim() {
            return Err(Error::DegreeOutOfRange { degree: k, top: self.complex.top_dim() });
        }
        Ok(self.full().codifferential(k))
    }

    /// `Δ_k = d_{k−1} δ_k + δ_{k+1} d_k`, dropping the terms that do not exist.
    pub fn laplacian(&self, k: usize) -> Result<RatMatrix> {
        self.check_degree(k)?;
        let w = self.full();
        let n = self.complex.num_cells(k);
        let mut lap = RatMatrix::zeros(n, n);
        if k > 0 {
            lap = lap.add(&w.cochains.d(k - 1).mul(&w.codifferential(k)));
        }
        if k < self.complex.top_dim() {
            lap = lap.add(&w.codifferential(k + 1).mul(w.cochains.d(k)));
        }
        Ok(lap)
    }

    /// Basis of `ker d_k ∩ ker δ_k`. For [`Condition::Relative`] the complex
    /// is the one of cochains vanishing on `a`; [`Condition::Absolute`] uses
    /// every cochain of the complex and only checks that `a` is a subcomplex.
    pub fn harmonic_basis(&self, k: usize, condition: Condition, a: &Subcomplex) -> Result<HarmonicBasis> {
        self.check_degree(k)?;
        a.check_closed(&self.complex)?;
        let vectors = match condition {
            Condition::Absolute => self.full().harmonic(k),
            Condition::Relative => {
                let (w, keep) = self.relative(a);
                let n = self.complex.num_cells(k);
                w.harmonic(k).iter().map(|v| extend_by_zero(&keep[k], n, v)).collect()
            }
        };
        Ok(HarmonicBasis { degree: k, condition, vectors })
    }

    /// Orthogonal decomposition of a k-cochain into harmonic, exact and
    /// coexact parts, found by solving the normal equations exactly.
    pub fn hodge_split(&self, k: usize, v: &[Rational]) -> Result<HodgeSplit> {
        self.check_degree(k)?;
        let n = self.complex.num_cells(k);
        if v.len() != n {
            return Err(Error::DimMismatch { expected: n, found: v.len() });
        }
        let w = self.full();
        let wk = &self.weights[k];
        let target = RatMatrix::from_columns(n, &[v.to_vec()]);
        let project = |a: &RatMatrix| -> Vec<Rational> {
            // minimise ‖v − a x‖_W: aᵀ W a x = aᵀ W v
            let at_w = a.transpose().scale_cols(wk);
            let x = solve(&at_w.mul(a), &at_w.mul(&target)).expect("normal equations are consistent");
            x.column(0)
        };
        let (exact_potential, exact) = if k > 0 {
            let d = w.cochains.d(k - 1);
            let b = project(d);
            let e = d.mul_vec(&b);
            (b, e)
        } else {
            (Vec::new(), zero_vec(n))
        };
        let (coexact_potential, coexact) = if k < self.complex.top_dim() {
            let delta = w.codifferential(k + 1);
            let c = project(&delta);
            let e = delta.mul_vec(&c);
            (c, e)
        } else {
            (Vec::new(), zero_vec(n))
        };
        let harmonic = v.iter().zip(&exact).zip(&coexact).map(|((x, e), c)| x - e - c).collect();
        Ok(HodgeSplit { harmonic, exact, coexact, exact_potential, coexact_potential })
    }

    /// Dimensions of the σ-invariant and σ-anti-invariant harmonic k-cochains.
    /// `self` must be weighted symmetrically under σ.
    pub fn double_split(&self, sigma: &CellularInvolution, k: usize) -> Result<DoubleSplit> {
        self.check_degree(k)?;
        if !sigma.is_involution() || !sigma.is_chain_map(&self.complex) {
            return Err(Error::InvalidSpec("map is not a cellular involution of this complex".into()));
        }
        for j in 0..=self.complex.top_dim() {
            for i in 0..self.complex.num_cells(j) {
                if self.weights[j][i] != self.weights[j][sigma.image(j, i).0] {
                    return Err(Error::AsymmetricWeights(self.complex.id(j, i).to_string()));
                }
            }
        }
        let harmonic = self.full().harmonic(k);
        let n = self.complex.num_cells(k);
        let (plus, minus): (Vec<_>, Vec<_>) = harmonic
            .iter()
            .map(|h| {
                let s = sigma.pullback(k, h);
                let p: Vec<Rational> = h.iter().zip(&s).map(|(a, b)| a + b).collect();
                let m: Vec<Rational> = h.iter().zip(&s).map(|(a, b)| a - b).collect();
                (p, m)
            })
            .unzip();
        Ok(DoubleSplit {
            invariant: rank(&RatMatrix::from_columns(n, &plus)),
            anti_invariant: rank(&RatMatrix::from_columns(n, &minus)),
        })
    }

    /// Absolute harmonic dimension in degree `k` against the relative one in
    /// degree `n − k`, for a model with boundary subcomplex `boundary`.
    pub fn duality_check(&self, k: usize, boundary: &Subcomplex) -> Result<DualityReport> {
        self.check_degree(k)?;
        let n = self.complex.top_dim();
        let abs_dim = self.harmonic_basis(k, Condition::Absolute, boundary)?.dim();
        let rel_dim = self.harmonic_basis(n - k, Condition::Relative, boundary)?.dim();
        Ok(DualityReport { degree: k, dual_degree: n - k, abs_dim, rel_dim })
    }
}
