//! End contributions for flat ends.
//!
//! A flat end with a finite cover `(ℝ^ν ∖ B) × T^{n−ν}` is described by the
//! finite group `G_E` acting on `H^1(T)`, given as integer matrices. The torus
//! cohomology is the exterior algebra on `H^1(T)`, so every quantity below is
//! an average over `G_E` of traces of exterior powers, i.e. of sums of
//! principal minors, and of `det(I − γ)`.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    m: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(m: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::DimMismatch { expected: m * m, found: entries.len() });
        }
        Ok(IntMatrix { m, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimMismatch { expected: m, found: r.len() });
        }
        Ok(IntMatrix { m, entries: rows.concat() })
    }

    pub fn identity(m: usize) -> Self {
        let mut entries = vec![0; m * m];
        for i in 0..m {
            entries[i * m + i] = 1;
        }
        IntMatrix { m, entries }
    }

    pub fn scalar(m: usize, s: i64) -> Self {
        let mut g = Self::identity(m);
        g.entries.iter_mut().for_each(|x| *x *= s);
        g
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.m + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Product, or `None` on overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        let m = self.m;
        let mut entries = vec![0i64; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0i64;
                for k in 0..m {
                    acc = acc.checked_add(self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries[i * m + j] = acc;
            }
        }
        Some(IntMatrix { m, entries })
    }

    /// `I − self`.
    pub fn one_minus(&self) -> IntMatrix {
        let mut g = Self::identity(self.m);
        for (x, y) in g.entries.iter_mut().zip(&self.entries) {
            *x -= y;
        }
        g
    }

    pub fn det(&self) -> BigInt {
        det_of(self.m, |i, j| BigInt::from(self.get(i, j)))
    }

    /// Minor on rows = columns = `idx`.
    fn principal_minor(&self, idx: &[usize]) -> BigInt {
        det_of(idx.len(), |i, j| BigInt::from(self.get(idx[i], idx[j])))
    }
}

/// Bareiss determinant; the empty determinant is 1.
fn det_of(n: usize, entry: impl Fn(usize, usize) -> BigInt) -> BigInt {
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Inconsistent(format!("{what} does not fit in 64 bits")))
}

/// `t_k = tr Λ^k g`, the sum of the principal `k × k` minors, for `k = 0..=m`.
/// Equivalently `det(I + x g) = Σ t_k x^k`.
pub fn exterior_traces(g: &IntMatrix) -> Vec<i64> {
    let m = g.m;
    let mut traces = vec![BigInt::zero(); m + 1];
    for mask in 0u64..(1u64 << m) {
        let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        traces[idx.len()] += g.principal_minor(&idx);
    }
    traces.iter().map(|t| i64::try_from(t).expect("trace of a small integer matrix")).collect()
}

/// `det(I − g)`, checked against `Σ (−1)^k tr Λ^k g`.
pub fn lefschetz(g: &IntMatrix) -> Result<i64> {
    let det = to_i64(&g.one_minus().det(), "det(I - g)")?;
    let alt: i64 = exterior_traces(g).iter().enumerate().map(|(k, t)| if k % 2 == 0 { *t } else { -t }).sum();
    if det != alt {
        return Err(Error::Inconsistent(format!("det(I - g) = {det} but alternating trace sum = {alt}")));
    }
    Ok(det)
}

pub const DEFAULT_CAP: usize = 10_000;

/// A finite subgroup of `GL(m, ℤ)` with its elements listed in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGroup {
    m: usize,
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
}

impl LatticeGroup {
    pub fn trivial(m: usize) -> Self {
        LatticeGroup { m, generators: Vec::new(), elements: vec![IntMatrix::identity(m)] }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }
}

/// Breadth-first closure of the generators under multiplication. Fails with
/// [`Error::CapExceeded`] once more than `cap` elements appear, or when entries
/// overflow (which only happens for infinite groups).
pub fn closure(m: usize, generators: &[IntMatrix], cap: usize) -> Result<LatticeGroup> {
    for g in generators {
        if g.m != m {
            return Err(Error::DimMismatch { expected: m, found: g.m });
        }
        let det = g.det();
        if det != BigInt::one() && det != -BigInt::one() {
            return Err(Error::NotUnimodular(i64::try_from(&det).unwrap_or(i64::MAX)));
        }
    }
    let id = IntMatrix::identity(m);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.checked_mul(g).ok_or(Error::CapExceeded(cap))?;
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<IntMatrix> = seen.into_iter().collect();
    elements.sort();
    Ok(LatticeGroup { m, generators: generators.to_vec(), elements })
}

fn exact_average(sum: i64, order: usize, what: &str) -> Result<i64> {
    let order = order as i64;
    if sum % order != 0 {
        return Err(Error::NonIntegerAverage(format!("{what}: {sum}/{order}")));
    }
    Ok(sum / order)
}

/// `dim H^k(T)^G = (1/|G|) Σ_γ tr Λ^k γ`.
pub fn invariant_betti(group: &LatticeGroup, k: usize) -> Result<usize> {
    if k > group.m {
        return Ok(0);
    }
    let sum: i64 = group.elements.iter().map(|g| exterior_traces(g)[k]).sum();
    let avg = exact_average(sum, group.order(), &format!("invariant Betti number in degree {k}"))?;
    usize::try_from(avg).map_err(|_| Error::NonIntegerAverage(format!("negative average {avg} in degree {k}")))
}

pub fn invariant_betti_numbers(group: &LatticeGroup) -> Result<Vec<usize>> {
    (0..=group.m).map(|k| invariant_betti(group, k)).collect()
}

/// `χ(T, G) = (1/|G|) Σ_γ det(I − γ)`, checked against the alternating sum of
/// invariant Betti numbers.
pub fn chi_equivariant(group: &LatticeGroup) -> Result<i64> {
    let sum = group.elements.iter().map(lefschetz).sum::<Result<i64>>()?;
    let chi = exact_average(sum, group.order(), "equivariant Euler characteristic")?;
    let alt: i64 = invariant_betti_numbers(group)?
        .iter()
        .enumerate()
        .map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) })
        .sum();
    if alt != chi {
        return Err(Error::Inconsistent(format!("group average {chi} differs from invariant Betti sum {alt}")));
    }
    Ok(chi)
}

/// One flat end: a quotient of `(ℝ^ν ∖ B) × T^{n−ν}`, or a parabolic end
/// (for which no group data is kept).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndDescriptor {
    pub nu: usize,
    pub n: usize,
    group: Option<LatticeGroup>,
    pub cover_order: u64,
    pub parabolic: bool,
}

impl EndDescriptor {
    /// A non-parabolic end; `group` defaults to the trivial group on `H^1(T^{n−ν})`.
    pub fn flat(nu: usize, n: usize, group: Option<LatticeGroup>, cover_order: u64) -> Result<Self> {
        Self::check_dims(nu, n)?;
        if cover_order == 0 {
            return Err(Error::InvalidSpec("cover order must be positive".into()));
        }
        let group = group.unwrap_or_else(|| LatticeGroup::trivial(n - nu));
        if group.m != n - nu {
            return Err(Error::InvalidSpec(format!(
                "group acts on rank {} but the torus has rank {}",
                group.m,
                n - nu
            )));
        }
        Ok(EndDescriptor { nu, n, group: Some(group), cover_order, parabolic: false })
    }

    pub fn parabolic(nu: usize, n: usize) -> Result<Self> {
        Self::check_dims(nu, n)?;
        Ok(EndDescriptor { nu, n, group: None, cover_order: 1, parabolic: true })
    }

    fn check_dims(nu: usize, n: usize) -> Result<()> {
        if nu < 2 || n < nu {
            return Err(Error::InvalidSpec(format!("need 2 <= nu <= n, got nu={nu}, n={n}")));
        }
        Ok(())
    }

    pub fn group(&self) -> Option<&LatticeGroup> {
        self.group.as_ref()
    }

    fn flat_group(&self) -> Result<&LatticeGroup> {
        if self.parabolic {
            return Err(Error::ParabolicEnd);
        }
        self.group.as_ref().ok_or(Error::ParabolicEnd)
    }
}

fn frac(n: i64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// End contribution to the L² Gauss–Bonnet formula.
pub fn q_end(end: &EndDescriptor) -> Result<Rational> {
    let group = end.flat_group()?;
    if end.nu == end.n {
        Ok(frac(1, end.cover_order) - Rational::one())
    } else {
        Ok(frac(-chi_equivariant(group)?, 1))
    }
}

/// Limit of the boundary integral of the Chern form over the end's cross-section.
pub fn boundary_term(end: &EndDescriptor) -> Result<Rational> {
    end.flat_group()?;
    if end.nu < end.n {
        Ok(Rational::zero())
    } else {
        Ok(frac(1, end.cover_order))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiL2 {
    pub chi_l2: Rational,
    /// `χ(M) − Σ boundary terms`.
    pub euler_form_integral: Rational,
    pub q_sum: Rational,
}

/// `χ_{L²}(M) = χ(M) − Σ_E χ(T_E, G_E)`, cross-checked against
/// `∫Ω + Σ_E q(E)`. Any parabolic end is refused.
pub fn chi_l2(chi_m: i64, ends: &[EndDescriptor]) -> Result<ChiL2> {
    let mut chi_l2 = frac(chi_m, 1);
    let mut euler_form_integral = frac(chi_m, 1);
    let mut q_sum = Rational::zero();
    for end in ends {
        chi_l2 -= frac(chi_equivariant(end.flat_group()?)?, 1);
        euler_form_integral -= boundary_term(end)?;
        q_sum += q_end(end)?;
    }
    if chi_l2 != &euler_form_integral + &q_sum {
        return Err(Error::Inconsistent(format!(
            "chi_l2 = {chi_l2} but euler form integral + q = {}",
            &euler_form_integral + &q_sum
        )));
    }
    Ok(ChiL2 { chi_l2, euler_form_integral, q_sum })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarpMode {
    /// `f(r) = a r`.
    Cone,
    /// `f′(r) → 0`.
    Shrinking,
}

/// L² Euler characteristic of an even-dimensional manifold with a warped
/// product end over `∂K`, from `χ(M)` and the Betti numbers `b_0..b_{n−1}` of `∂K`.
pub fn chi_l2_warped(chi_m: i64, betti_boundary: &[i64], mode: WarpMode, n: usize) -> Result<i64> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if betti_boundary.len() != n {
        return Err(Error::DimMismatch { expected: n, found: betti_boundary.len() });
    }
    let k = n / 2;
    let signed = |j: usize| if j.is_multiple_of(2) { betti_boundary[j] } else { -betti_boundary[j] };
    Ok(match mode {
        WarpMode::Cone => chi_m - (0..k.saturating_sub(1)).map(signed).sum::<i64>(),
        WarpMode::Shrinking => chi_m + (0..k).map(signed).sum::<i64>(),
    })
}
