//! Finite cell complexes with signed integer incidences.
//!
//! Cells are grouped by dimension and addressed either by id or by their
//! position inside their dimension. Cochains in degree `k` are vectors indexed
//! by the `k`-cells, and the coboundary `d_k` is the transpose of the boundary
//! matrix `D_{k+1}`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result, Violation};
use crate::linalg::{image_basis, nullspace_basis, rank, rat, RatMatrix, Rational, Subspace};

/// Signed faces of a cell: `(index in dimension k-1, coefficient)`.
pub type Chain = Vec<(usize, i64)>;

/// Per product cell, `(dim in the first factor, index there, index in the second factor)`.
pub type ProductFactors = Vec<Vec<(usize, usize, usize)>>;

type PendingCell = (String, usize, Vec<(i64, String)>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    ids: Vec<Vec<String>>,
    lookup: HashMap<String, (usize, usize)>,
    boundary: Vec<Vec<Chain>>,
}

/// Collects cells in any order and resolves face references on [`build`](Self::build).
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    top_dim: Option<usize>,
    cells: Vec<PendingCell>,
    lookup: HashMap<String, usize>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Forces the top dimension even when no cell reaches it.
    pub fn top_dim(&mut self, n: usize) -> &mut Self {
        self.top_dim = Some(n);
        self
    }

    pub fn cell(&mut self, id: impl Into<String>, dim: usize, boundary: &[(i64, &str)]) -> Result<&mut Self> {
        let id = id.into();
        if self.lookup.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        self.lookup.insert(id.clone(), self.cells.len());
        let bd = boundary.iter().map(|(c, f)| (*c, f.to_string())).collect();
        self.cells.push((id, dim, bd));
        Ok(self)
    }

    /// Replaces the boundary chain of an already declared cell.
    pub fn set_boundary(&mut self, id: &str, boundary: Vec<(i64, String)>) -> Result<()> {
        let &pos = self.lookup.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
        self.cells[pos].2 = boundary;
        Ok(())
    }

    pub fn contains(&self, id: &str) -> bool {
        self.lookup.contains_key(id)
    }

    pub fn dim_of(&self, id: &str) -> Option<usize> {
        self.lookup.get(id).map(|&p| self.cells[p].1)
    }

    pub fn build(self) -> Result<CellComplex> {
        let top = self.cells.iter().map(|c| c.1).max().unwrap_or(0).max(self.top_dim.unwrap_or(0));
        let mut ids = vec![Vec::new(); top + 1];
        let mut lookup = HashMap::new();
        for (id, dim, _) in &self.cells {
            lookup.insert(id.clone(), (*dim, ids[*dim].len()));
            ids[*dim].push(id.clone());
        }
        let mut boundary: Vec<Vec<Chain>> = ids.iter().map(|v| vec![Vec::new(); v.len()]).collect();
        for (id, dim, bd) in &self.cells {
            let (_, pos) = lookup[id];
            if *dim == 0 && bd.iter().any(|(c, _)| *c != 0) {
                return Err(Error::InvalidSpec(format!("0-cell `{id}` cannot have a boundary")));
            }
            let mut acc: Vec<(usize, i64)> = Vec::new();
            for (coef, face) in bd {
                let &(fdim, fpos) = lookup.get(face).ok_or_else(|| Error::UnknownId(face.clone()))?;
                if fdim + 1 != *dim {
                    return Err(Error::InvalidSpec(format!(
                        "face `{face}` of `{id}` has dimension {fdim}, expected {}",
                        dim - 1
                    )));
                }
                acc.push((fpos, *coef));
            }
            boundary[*dim][pos] = normalize_chain(acc);
        }
        Ok(CellComplex { ids, lookup, boundary })
    }
}

fn normalize_chain(mut chain: Vec<(usize, i64)>) -> Chain {
    chain.sort_by_key(|(i, _)| *i);
    let mut out: Chain = Vec::with_capacity(chain.len());
    for (i, c) in chain {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

impl CellComplex {
    /// A single vertex.
    pub fn point(id: &str) -> CellComplex {
        let mut b = ComplexBuilder::new();
        b.cell(id, 0, &[]).expect("fresh builder");
        b.build().expect("single vertex")
    }

    /// Builds directly from per-dimension ids and boundary chains (indices into
    /// the previous dimension). Used by generators that already know indices.
    pub fn from_parts(ids: Vec<Vec<String>>, boundary: Vec<Vec<Chain>>) -> Result<CellComplex> {
        if ids.len() != boundary.len() || ids.is_empty() {
            return Err(Error::InvalidSpec("ids and boundary disagree on dimensions".into()));
        }
        let mut lookup = HashMap::new();
        for (k, level) in ids.iter().enumerate() {
            if level.len() != boundary[k].len() {
                return Err(Error::InvalidSpec(format!("dimension {k}: ids and boundary lengths differ")));
            }
            for (i, id) in level.iter().enumerate() {
                if lookup.insert(id.clone(), (k, i)).is_some() {
                    return Err(Error::DuplicateId(id.clone()));
                }
            }
        }
        let mut boundary = boundary;
        for k in 0..ids.len() {
            let below = if k == 0 { 0 } else { ids[k - 1].len() };
            for (i, chain) in boundary[k].iter_mut().enumerate() {
                if chain.iter().any(|(f, _)| *f >= below) {
                    return Err(Error::InvalidSpec(format!("face index out of range for `{}`", ids[k][i])));
                }
                *chain = normalize_chain(std::mem::take(chain));
            }
        }
        Ok(CellComplex { ids, lookup, boundary })
    }

    pub fn top_dim(&self) -> usize {
        self.ids.len() - 1
    }

    pub fn num_cells(&self, k: usize) -> usize {
        self.ids.get(k).map_or(0, Vec::len)
    }

    pub fn total_cells(&self) -> usize {
        self.ids.iter().map(Vec::len).sum()
    }

    pub fn ids(&self, k: usize) -> &[String] {
        self.ids.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn id(&self, k: usize, i: usize) -> &str {
        &self.ids[k][i]
    }

    /// `(dimension, index)` of a cell id.
    pub fn locate(&self, id: &str) -> Option<(usize, usize)> {
        self.lookup.get(id).copied()
    }

    pub fn faces(&self, k: usize, i: usize) -> &[(usize, i64)] {
        &self.boundary[k][i]
    }

    /// Lists every k-cell whose boundary has nonzero boundary.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        for k in 2..=self.top_dim() {
            for (i, chain) in self.boundary[k].iter().enumerate() {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for (f, c) in chain {
                    for (g, e) in &self.boundary[k - 1][*f] {
                        *acc.entry(*g).or_default() += c * e;
                    }
                }
                if acc.values().any(|v| *v != 0) {
                    violations.push(Violation { dim: k, column: self.ids[k][i].clone() });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn validated(self) -> Result<Self> {
        self.validate().map_err(Error::InvalidComplex)?;
        Ok(self)
    }

    /// `D_k`: k-chains to (k−1)-chains, `num_cells(k-1) × num_cells(k)`.
    pub fn boundary_matrix(&self, k: usize) -> RatMatrix {
        let rows = if k == 0 { 0 } else { self.num_cells(k - 1) };
        let cols = self.num_cells(k);
        let triplets = self
            .boundary
            .get(k)
            .into_iter()
            .flatten()
            .enumerate()
            .flat_map(|(j, chain)| chain.iter().map(move |(i, c)| (*i, j, rat(*c))));
        RatMatrix::from_triplets(rows, cols, triplets)
    }

    /// `d_k = D_{k+1}ᵀ`: k-cochains to (k+1)-cochains.
    pub fn coboundary(&self, k: usize) -> RatMatrix {
        let rows = self.num_cells(k + 1);
        let cols = self.num_cells(k);
        let triplets = self
            .boundary
            .get(k + 1)
            .into_iter()
            .flatten()
            .enumerate()
            .flat_map(|(i, chain)| chain.iter().map(move |(j, c)| (i, *j, rat(*c))));
        RatMatrix::from_triplets(rows, cols, triplets)
    }

    pub fn cochain_complex(&self) -> CochainComplex {
        CochainComplex {
            dims: (0..=self.top_dim()).map(|k| self.num_cells(k)).collect(),
            d: (0..=self.top_dim()).map(|k| self.coboundary(k)).collect(),
        }
    }

    /// Rational Betti number; zero above the top dimension.
    pub fn betti(&self, k: usize) -> usize {
        if k > self.top_dim() {
            return 0;
        }
        let below = if k == 0 { 0 } else { rank(&self.coboundary(k - 1)) };
        self.num_cells(k) - rank(&self.coboundary(k)) - below
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.cochain_complex().betti_numbers()
    }

    pub fn euler(&self) -> i64 {
        alternating(self.ids.iter().map(Vec::len))
    }

    /// Cartesian product with cells `(a,b)` and the graded Leibniz boundary.
    pub fn product(&self, other: &CellComplex) -> CellComplex {
        self.product_with_factors(other).0
    }

    /// Product plus, for every product cell, its factor cells.
    pub fn product_with_factors(&self, other: &CellComplex) -> (CellComplex, ProductFactors) {
        let top = self.top_dim() + other.top_dim();
        let mut ids = vec![Vec::new(); top + 1];
        let mut factors = vec![Vec::new(); top + 1];
        let mut position: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
        for k in 0..=top {
            for p in 0..=k.min(self.top_dim()) {
                let q = k - p;
                if q > other.top_dim() {
                    continue;
                }
                for (ia, a) in self.ids[p].iter().enumerate() {
                    for (ib, b) in other.ids[q].iter().enumerate() {
                        position.insert((p, q, ia, ib), ids[k].len());
                        ids[k].push(format!("({a},{b})"));
                        factors[k].push((p, ia, ib));
                    }
                }
            }
        }
        let mut boundary: Vec<Vec<Chain>> = ids.iter().map(|v| vec![Vec::new(); v.len()]).collect();
        for k in 0..=top {
            for (pos, &(p, ia, ib)) in factors[k].iter().enumerate() {
                let q = k - p;
                let mut chain = Vec::new();
                if p > 0 {
                    for (f, c) in &self.boundary[p][ia] {
                        chain.push((position[&(p - 1, q, *f, ib)], *c));
                    }
                }
                if q > 0 {
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    for (g, c) in &other.boundary[q][ib] {
                        chain.push((position[&(p, q - 1, ia, *g)], sign * c));
                    }
                }
                boundary[k][pos] = chain;
            }
        }
        let complex = CellComplex::from_parts(ids, boundary).expect("product ids are unique");
        (complex, factors)
    }

    /// Two copies of `self` glued along `a`. Cells of `a` keep their ids; the
    /// copies of the remaining cells are suffixed `@0` and `@1`. The involution
    /// swaps the copies and fixes `a`.
    pub fn double(&self, a: &Subcomplex) -> Result<(CellComplex, CellularInvolution)> {
        a.check_closed(self)?;
        let top = self.top_dim();
        let mut ids = vec![Vec::new(); top + 1];
        // new index of (k, i, copy); cells of `a` map both copies to one index
        let mut index: Vec<Vec<[usize; 2]>> = Vec::with_capacity(top + 1);
        let mut perm = vec![Vec::new(); top + 1];
        for k in 0..=top {
            let mut idx = vec![[0usize; 2]; self.num_cells(k)];
            for i in a.cells(k) {
                idx[i] = [ids[k].len(); 2];
                ids[k].push(self.ids[k][i].clone());
            }
            for copy in [0, 1] {
                for i in a.complement(k) {
                    idx[i][copy] = ids[k].len();
                    ids[k].push(format!("{}@{copy}", self.ids[k][i]));
                }
            }
            let mut p = vec![(0usize, 1i64); ids[k].len()];
            for &[x, y] in &idx {
                p[x] = (y, 1);
                p[y] = (x, 1);
            }
            perm[k] = p;
            index.push(idx);
        }
        let mut boundary: Vec<Vec<Chain>> = ids.iter().map(|v| vec![Vec::new(); v.len()]).collect();
        for k in 1..=top {
            for i in 0..self.num_cells(k) {
                for (copy, &target) in index[k][i].iter().enumerate() {
                    boundary[k][target] =
                        self.boundary[k][i].iter().map(|(f, c)| (index[k - 1][*f][copy], *c)).collect();
                }
            }
        }
        let doubled = CellComplex::from_parts(ids, boundary)?;
        Ok((doubled, CellularInvolution { perm }))
    }
}

fn alternating(counts: impl Iterator<Item = usize>) -> i64 {
    counts.enumerate().map(|(k, n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

/// A set of cells closed under taking faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    selected: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn empty(x: &CellComplex) -> Subcomplex {
        Subcomplex { selected: (0..=x.top_dim()).map(|k| vec![false; x.num_cells(k)]).collect() }
    }

    pub fn full(x: &CellComplex) -> Subcomplex {
        Subcomplex { selected: (0..=x.top_dim()).map(|k| vec![true; x.num_cells(k)]).collect() }
    }

    /// Exactly the given cells; fails unless they form a subcomplex.
    pub fn from_ids<S: AsRef<str>>(x: &CellComplex, ids: &[S]) -> Result<Subcomplex> {
        let mut sub = Self::empty(x);
        for id in ids {
            let (k, i) = x.locate(id.as_ref()).ok_or_else(|| Error::UnknownId(id.as_ref().to_string()))?;
            sub.selected[k][i] = true;
        }
        sub.check_closed(x)?;
        Ok(sub)
    }

    pub fn from_mask(x: &CellComplex, selected: Vec<Vec<bool>>) -> Result<Subcomplex> {
        let sub = Subcomplex { selected };
        sub.check_closed(x)?;
        Ok(sub)
    }

    /// Smallest subcomplex containing the seed cells.
    pub fn closure<S: AsRef<str>>(x: &CellComplex, seeds: &[S]) -> Result<Subcomplex> {
        let mut sub = Self::empty(x);
        let mut stack = Vec::new();
        for id in seeds {
            let cell = x.locate(id.as_ref()).ok_or_else(|| Error::UnknownId(id.as_ref().to_string()))?;
            stack.push(cell);
        }
        while let Some((k, i)) = stack.pop() {
            if std::mem::replace(&mut sub.selected[k][i], true) {
                continue;
            }
            if k > 0 {
                stack.extend(x.faces(k, i).iter().map(|(f, _)| (k - 1, *f)));
            }
        }
        Ok(sub)
    }

    /// Confirms the mask fits `x` and is closed under faces.
    pub fn check_closed(&self, x: &CellComplex) -> Result<()> {
        if self.selected.len() != x.top_dim() + 1 {
            return Err(Error::DimMismatch { expected: x.top_dim() + 1, found: self.selected.len() });
        }
        for k in 0..=x.top_dim() {
            if self.selected[k].len() != x.num_cells(k) {
                return Err(Error::DimMismatch { expected: x.num_cells(k), found: self.selected[k].len() });
            }
            if k == 0 {
                continue;
            }
            for i in self.cells(k) {
                if x.faces(k, i).iter().any(|(f, _)| !self.selected[k - 1][*f]) {
                    return Err(Error::NotBoundaryClosed(x.id(k, i).to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, k: usize, i: usize) -> bool {
        self.selected.get(k).and_then(|v| v.get(i)).copied().unwrap_or(false)
    }

    /// Indices of selected k-cells in increasing order.
    pub fn cells(&self, k: usize) -> Vec<usize> {
        self.selected.get(k).map_or_else(Vec::new, |v| (0..v.len()).filter(|&i| v[i]).collect())
    }

    /// Indices of unselected k-cells in increasing order.
    pub fn complement(&self, k: usize) -> Vec<usize> {
        self.selected.get(k).map_or_else(Vec::new, |v| (0..v.len()).filter(|&i| !v[i]).collect())
    }

    pub fn count(&self, k: usize) -> usize {
        self.selected.get(k).map_or(0, |v| v.iter().filter(|b| **b).count())
    }

    pub fn is_empty(&self) -> bool {
        self.selected.iter().flatten().all(|b| !b)
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        let selected = self
            .selected
            .iter()
            .zip(&other.selected)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x || *y).collect())
            .collect();
        Subcomplex { selected }
    }

    pub fn euler(&self) -> i64 {
        alternating(self.selected.iter().map(|v| v.iter().filter(|b| **b).count()))
    }

    pub fn ids<'a>(&self, x: &'a CellComplex) -> Vec<&'a str> {
        (0..self.selected.len()).flat_map(|k| self.cells(k).into_iter().map(move |i| x.id(k, i))).collect()
    }

    /// Cochain complex of the subcomplex itself (restriction of `d`).
    pub fn cochain_complex(&self, x: &CellComplex) -> CochainComplex {
        x.cochain_complex().restrict(&(0..=x.top_dim()).map(|k| self.cells(k)).collect::<Vec<_>>())
    }
}

/// A signed permutation of cells, one per dimension: `perm[k][i] = (j, s)`
/// sends cell `i` to `s·j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularInvolution {
    perm: Vec<Vec<(usize, i64)>>,
}

impl CellularInvolution {
    pub fn new(perm: Vec<Vec<(usize, i64)>>) -> Self {
        CellularInvolution { perm }
    }

    pub fn image(&self, k: usize, i: usize) -> (usize, i64) {
        self.perm[k][i]
    }

    pub fn is_involution(&self) -> bool {
        self.perm.iter().all(|p| {
            p.iter().enumerate().all(|(i, &(j, s))| j < p.len() && p[j].0 == i && p[j].1 * s == 1)
        })
    }

    /// Checks `σ ∂ = ∂ σ` cell by cell.
    pub fn is_chain_map(&self, x: &CellComplex) -> bool {
        if self.perm.len() != x.top_dim() + 1 {
            return false;
        }
        for k in 1..=x.top_dim() {
            for i in 0..x.num_cells(k) {
                let (j, s) = self.perm[k][i];
                let lhs: Chain =
                    normalize_chain(x.faces(k, j).iter().map(|(f, c)| (*f, s * c)).collect());
                let rhs: Chain = normalize_chain(
                    x.faces(k, i)
                        .iter()
                        .map(|(f, c)| {
                            let (g, t) = self.perm[k - 1][*f];
                            (g, t * c)
                        })
                        .collect(),
                );
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Pullback `(σ*α)(c) = α(σ c)` of a k-cochain.
    pub fn pullback(&self, k: usize, alpha: &[Rational]) -> Vec<Rational> {
        self.perm[k]
            .iter()
            .map(|&(j, s)| if s == 1 { alpha[j].clone() } else { -alpha[j].clone() })
            .collect()
    }

    pub fn pullback_matrix(&self, k: usize) -> RatMatrix {
        let n = self.perm[k].len();
        RatMatrix::from_triplets(n, n, self.perm[k].iter().enumerate().map(|(i, &(j, s))| (i, j, rat(s))))
    }
}

/// An abstract finite cochain complex: `d[k]` maps degree `k` to `k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    dims: Vec<usize>,
    d: Vec<RatMatrix>,
}

impl CochainComplex {
    pub fn new(dims: Vec<usize>, d: Vec<RatMatrix>) -> Result<Self> {
        if dims.len() != d.len() {
            return Err(Error::DimMismatch { expected: dims.len(), found: d.len() });
        }
        for (k, m) in d.iter().enumerate() {
            let next = dims.get(k + 1).copied().unwrap_or(0);
            if m.cols() != dims[k] || m.rows() != next {
                return Err(Error::InvalidSpec(format!("coboundary {k} has the wrong shape")));
            }
        }
        Ok(CochainComplex { dims, d })
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn d(&self, k: usize) -> &RatMatrix {
        &self.d[k]
    }

    /// Cochains supported on the kept cells of each degree, with `d` restricted.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> CochainComplex {
        let dims: Vec<usize> = keep.iter().map(Vec::len).collect();
        let d = (0..self.dims.len())
            .map(|k| {
                let rows = keep.get(k + 1).cloned().unwrap_or_default();
                self.d[k].select_rows(&rows).select_cols(&keep[k])
            })
            .collect();
        CochainComplex { dims, d }
    }

    pub fn cocycles(&self, k: usize) -> Subspace {
        if k >= self.dims.len() {
            return Subspace::zero(0);
        }
        nullspace_basis(&self.d[k])
    }

    pub fn coboundaries(&self, k: usize) -> Subspace {
        if k == 0 || k >= self.dims.len() {
            return Subspace::zero(self.dim(k));
        }
        image_basis(&self.d[k - 1])
    }

    pub fn betti(&self, k: usize) -> usize {
        if k >= self.dims.len() {
            return 0;
        }
        let below = if k == 0 { 0 } else { rank(&self.d[k - 1]) };
        self.dims[k] - rank(&self.d[k]) - below
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.iter().map(rank).collect();
        (0..self.dims.len()).map(|k| self.dims[k] - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }).collect()
    }

    /// `true` if every composite `d_{k+1} d_k` vanishes.
    pub fn is_complex(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

/// Embeds a vector on the kept coordinates into the ambient space by zeros.
pub fn extend_by_zero(keep: &[usize], ambient: usize, v: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); ambient];
    for (&i, x) in keep.iter().zip(v) {
        out[i] = x.clone();
    }
    out
}
