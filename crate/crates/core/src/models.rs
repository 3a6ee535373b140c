//! Generators for the model complexes: circles, intervals, tori, cross-polytope
//! spheres and their cones, annuli, truncated flat ends `S^{ν−1} × I × T^m`
//! and cores `B^ν × T^m`.
//!
//! Every generator returns its designated subcomplexes by name (`boundary`,
//! `inner`, `outer`, `fiber`, where they make sense).

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::complex::{CellComplex, Chain, ProductFactors, Subcomplex};
use crate::error::{Error, Result};
use crate::hodge::{Condition, WeightedComplex};
use crate::linalg::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSpec {
    Circle { res: usize },
    Interval { segments: usize },
    Torus { rank: usize, res: usize },
    /// Boundary of the ν-dimensional cross-polytope, an `(ν−1)`-sphere.
    Sphere { nu: usize },
    /// Cone on `Sphere { nu }`, a ν-ball.
    Ball { nu: usize },
    Annulus { res: usize, segments: usize },
    /// Torus of rank 2 with its first 2-cell removed.
    PuncturedTorus { res: usize },
    EndModel { nu: usize, m: usize, shells: usize, res: usize },
    CoreModel { nu: usize, m: usize, res: usize },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        let res_ok = |res: usize| res >= 3;
        match *self {
            ModelSpec::Circle { res } | ModelSpec::PuncturedTorus { res } if !res_ok(res) => {
                bad("circle resolution must be at least 3")
            }
            ModelSpec::Torus { res, .. } | ModelSpec::CoreModel { res, .. } if !res_ok(res) => {
                bad("circle resolution must be at least 3")
            }
            ModelSpec::Interval { segments: 0 } => bad("an interval needs at least one segment"),
            ModelSpec::Annulus { res, segments } if !res_ok(res) || segments == 0 => {
                bad("annulus needs resolution >= 3 and at least one segment")
            }
            ModelSpec::Sphere { nu } | ModelSpec::Ball { nu } | ModelSpec::CoreModel { nu, .. } if nu < 2 => {
                bad("nu must be at least 2")
            }
            ModelSpec::EndModel { nu, shells, res, .. } if nu < 2 || shells == 0 || !res_ok(res) => {
                bad("end model needs nu >= 2, shells >= 1 and resolution >= 3")
            }
            _ => Ok(()),
        }
    }
}

/// Product factors of one cell of an end model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndCell {
    pub sphere_dim: usize,
    /// 0 for a shell vertex, 1 for a radial segment.
    pub radial_dim: usize,
    /// Shell vertex index, or the index of the inner endpoint of a segment.
    pub shell: usize,
    pub torus_dim: usize,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub spec: ModelSpec,
    pub complex: CellComplex,
    pub subcomplexes: BTreeMap<String, Subcomplex>,
    end_cells: Option<Vec<Vec<EndCell>>>,
}

impl Model {
    pub fn sub(&self, name: &str) -> Result<&Subcomplex> {
        self.subcomplexes.get(name).ok_or_else(|| Error::InvalidSpec(format!("model has no subcomplex `{name}`")))
    }

    pub fn end_cells(&self) -> Option<&[Vec<EndCell>]> {
        self.end_cells.as_deref()
    }
}

pub fn circle(res: usize) -> CellComplex {
    let ids = vec![(0..res).map(|i| format!("v{i}")).collect(), (0..res).map(|i| format!("e{i}")).collect()];
    let edges = (0..res).map(|i| vec![((i + 1) % res, 1), (i, -1)]).collect();
    CellComplex::from_parts(ids, vec![vec![Vec::new(); res], edges]).expect("circle")
}

pub fn interval(segments: usize) -> CellComplex {
    let ids =
        vec![(0..=segments).map(|i| format!("p{i}")).collect(), (0..segments).map(|i| format!("s{i}")).collect()];
    let edges = (0..segments).map(|i| vec![(i + 1, 1), (i, -1)]).collect();
    CellComplex::from_parts(ids, vec![vec![Vec::new(); segments + 1], edges]).expect("interval")
}

/// Product of `rank` circles; a single vertex `o` when `rank == 0`.
pub fn torus(rank: usize, res: usize) -> CellComplex {
    (0..rank).fold(None, |acc: Option<CellComplex>, _| {
        Some(match acc {
            None => circle(res),
            Some(t) => t.product(&circle(res)),
        })
    })
    .unwrap_or_else(|| CellComplex::point("o"))
}

/// Boundary of the cross-polytope with vertices `±e_i`. Simplices are sets of
/// vertices on distinct axes, listed in axis order; ids join the vertex names
/// (`p3` for `+e_3`, `m3` for `−e_3`) with dots.
pub fn sphere(nu: usize) -> CellComplex {
    // all simplices as vertex lists (axis, positive)
    let mut levels: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); nu];
    for mask in 1u64..(1 << nu) {
        let axes: Vec<usize> = (0..nu).filter(|a| mask >> a & 1 == 1).collect();
        let k = axes.len() - 1;
        for signs in 0u64..(1 << axes.len()) {
            let simplex = axes.iter().enumerate().map(|(j, &a)| (a, signs >> j & 1 == 0)).collect();
            levels[k].push(simplex);
        }
    }
    for level in levels.iter_mut() {
        level.sort();
    }
    let name = |s: &[(usize, bool)]| {
        s.iter().map(|(a, pos)| format!("{}{a}", if *pos { 'p' } else { 'm' })).collect::<Vec<_>>().join(".")
    };
    let index: Vec<BTreeMap<Vec<(usize, bool)>, usize>> =
        levels.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
    let ids = levels.iter().map(|l| l.iter().map(|s| name(s)).collect()).collect();
    let boundary = levels
        .iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .iter()
                .map(|s| {
                    if k == 0 {
                        return Vec::new();
                    }
                    (0..s.len())
                        .map(|i| {
                            let mut face = s.clone();
                            face.remove(i);
                            (index[k - 1][&face], if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    CellComplex::from_parts(ids, boundary).expect("cross-polytope")
}

/// Cone on `base` with apex `c`: `∂(c·σ) = σ − c·∂σ`, and `∂(c·v) = v − c`.
fn cone(base: &CellComplex) -> (CellComplex, Subcomplex) {
    let n = base.top_dim();
    let mut ids: Vec<Vec<String>> = vec![Vec::new(); n + 2];
    let mut boundary: Vec<Vec<Chain>> = vec![Vec::new(); n + 2];
    // dimension k: base k-cells first, then cones on (k−1)-cells; apex leads dimension 0
    ids[0].push("c".to_string());
    boundary[0].push(Vec::new());
    let base_offset = |k: usize| usize::from(k == 0);
    let cone_offset = |k: usize| if k == 0 { 0 } else { base.num_cells(k) };
    for k in 0..=n + 1 {
        if k <= n {
            for i in 0..base.num_cells(k) {
                ids[k].push(base.id(k, i).to_string());
                let chain = if k == 0 {
                    Vec::new()
                } else {
                    base.faces(k, i).iter().map(|(f, c)| (base_offset(k - 1) + f, *c)).collect()
                };
                boundary[k].push(chain);
            }
        }
        if k >= 1 {
            for i in 0..base.num_cells(k - 1) {
                ids[k].push(format!("c*{}", base.id(k - 1, i)));
                let mut chain: Chain = vec![(base_offset(k - 1) + i, 1)];
                if k == 1 {
                    chain.push((0, -1));
                } else {
                    chain.extend(base.faces(k - 1, i).iter().map(|(f, c)| (cone_offset(k - 1) + f, -c)));
                }
                boundary[k].push(chain);
            }
        }
    }
    let ball = CellComplex::from_parts(ids, boundary).expect("cone");
    let base_ids: Vec<&str> = (0..=n).flat_map(|k| base.ids(k).iter().map(String::as_str)).collect();
    let sub = Subcomplex::from_ids(&ball, &base_ids).expect("base of a cone is closed");
    (ball, sub)
}

/// Subcomplex of a product given by a predicate on factor cells
/// `(dim_left, idx_left, dim_right, idx_right)`.
fn product_sub(x: &CellComplex, factors: &ProductFactors, pred: impl Fn(usize, usize, usize, usize) -> bool) -> Subcomplex {
    let mask = factors
        .iter()
        .enumerate()
        .map(|(k, level)| level.iter().map(|&(p, a, b)| pred(p, a, k - p, b)).collect())
        .collect();
    Subcomplex::from_mask(x, mask).expect("product of subcomplexes is closed")
}

pub fn build(spec: &ModelSpec) -> Result<Model> {
    spec.validate()?;
    let mut subs = BTreeMap::new();
    let mut end_cells = None;
    let complex = match *spec {
        ModelSpec::Circle { res } => circle(res),
        ModelSpec::Interval { segments } => {
            let x = interval(segments);
            let ends = Subcomplex::from_ids(&x, &["p0".to_string(), format!("p{segments}")])?;
            subs.insert("boundary".to_string(), ends);
            x
        }
        ModelSpec::Torus { rank, res } => torus(rank, res),
        ModelSpec::Sphere { nu } => sphere(nu),
        ModelSpec::Ball { nu } => {
            let (ball, bd) = cone(&sphere(nu));
            subs.insert("boundary".to_string(), bd);
            ball
        }
        ModelSpec::Annulus { res, segments } => {
            let (x, f) = circle(res).product_with_factors(&interval(segments));
            let inner = product_sub(&x, &f, |_, _, q, b| q == 0 && b == 0);
            let outer = product_sub(&x, &f, |_, _, q, b| q == 0 && b == segments);
            subs.insert("boundary".to_string(), inner.union(&outer));
            subs.insert("inner".to_string(), inner);
            subs.insert("outer".to_string(), outer);
            x
        }
        ModelSpec::PuncturedTorus { res } => {
            let t = torus(2, res);
            let ids: Vec<Vec<String>> =
                (0..=2).map(|k| t.ids(k).iter().skip(usize::from(k == 2)).cloned().collect()).collect();
            let boundary: Vec<Vec<Chain>> = (0..=2)
                .map(|k| (usize::from(k == 2)..t.num_cells(k)).map(|i| t.faces(k, i).to_vec()).collect())
                .collect();
            let x = CellComplex::from_parts(ids, boundary)?;
            let hole: Vec<&str> = t.faces(2, 0).iter().map(|(f, _)| t.id(1, *f)).collect();
            subs.insert("boundary".to_string(), Subcomplex::closure(&x, &hole)?);
            x
        }
        ModelSpec::EndModel { nu, m, shells, res } => {
            let s = sphere(nu);
            let (si, f1) = s.product_with_factors(&interval(shells));
            let (x, f2) = si.product_with_factors(&torus(m, res));
            // sphere × interval cell `a` in dimension `p` → (sphere dim, radial dim, shell)
            let split = |p: usize, a: usize| {
                let (ps, _, ii) = f1[p][a];
                (ps, p - ps, ii)
            };
            let cells: Vec<Vec<EndCell>> = f2
                .iter()
                .enumerate()
                .map(|(k, level)| {
                    level
                        .iter()
                        .map(|&(p, a, _)| {
                            let (sphere_dim, radial_dim, shell) = split(p, a);
                            EndCell { sphere_dim, radial_dim, shell, torus_dim: k - p }
                        })
                        .collect()
                })
                .collect();
            let at_shell = |target: usize| {
                move |p: usize, a: usize, _: usize, _: usize| {
                    let (_, rd, sh) = split(p, a);
                    rd == 0 && sh == target
                }
            };
            let inner = product_sub(&x, &f2, at_shell(0));
            let outer = product_sub(&x, &f2, at_shell(shells));
            // first sphere vertex on the innermost shell, times the torus
            let fiber = product_sub(&x, &f2, |p, a, _, _| p == 0 && f1[0][a] == (0, 0, 0));
            subs.insert("boundary".to_string(), inner.union(&outer));
            subs.insert("inner".to_string(), inner);
            subs.insert("outer".to_string(), outer);
            subs.insert("fiber".to_string(), fiber);
            end_cells = Some(cells);
            x
        }
        ModelSpec::CoreModel { nu, m, res } => {
            let (ball, bd) = cone(&sphere(nu));
            let (x, f) = ball.product_with_factors(&torus(m, res));
            // apex is vertex 0 of the ball
            let boundary = product_sub(&x, &f, |p, a, _, _| bd.contains(p, a));
            let fiber = product_sub(&x, &f, |p, a, _, _| p == 0 && a == 0);
            subs.insert("boundary".to_string(), boundary);
            subs.insert("fiber".to_string(), fiber);
            x
        }
    };
    Ok(Model { spec: *spec, complex, subcomplexes: subs, end_cells })
}

/// Weights `r^{ν−1−2p+q}` on an end model, where `r = r0 + shell·step` is the
/// radius of the cell's shell (the inner endpoint for radial segments), `p`
/// counts its sphere and torus legs and `q` its radial legs.
pub fn radial_weights(model: &Model, r0: &Rational, step: &Rational) -> Result<WeightedComplex> {
    let ModelSpec::EndModel { nu, .. } = model.spec else {
        return Err(Error::NotAnEndModel);
    };
    let cells = model.end_cells().ok_or(Error::NotAnEndModel)?;
    if !r0.is_positive() || !step.is_positive() {
        return Err(Error::InvalidSpec("radius and step must be positive".into()));
    }
    let weights = cells
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|c| {
                    let r = r0 + step * rat(c.shell as i64);
                    let p = (c.sphere_dim + c.torus_dim) as i64;
                    let q = c.radial_dim as i64;
                    pow(&r, nu as i64 - 1 - 2 * p + q)
                })
                .collect()
        })
        .collect();
    WeightedComplex::new(model.complex.clone(), weights)
}

fn pow(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}

/// Which end of the truncated end carries the relative condition in [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepBoundary {
    Inner,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub shells: usize,
    /// Relative harmonic dimension under the radial weights.
    pub dim: usize,
    /// Same, with all weights 1.
    pub unit_dim: usize,
}

/// For each shell count, the relative harmonic dimension in degree `k` of the
/// radially weighted end model `end_model(ν, m, shells)`. Rows follow the input order.
pub fn sweep(
    nu: usize,
    m: usize,
    k: usize,
    shell_counts: &[usize],
    boundary: SweepBoundary,
    res: usize,
) -> Result<Vec<SweepRow>> {
    let rows: Vec<SweepRow> = shell_counts
        .par_iter()
        .map(|&shells| {
            let model = build(&ModelSpec::EndModel { nu, m, shells, res })?;
            let bd = match boundary {
                SweepBoundary::Inner => model.sub("inner")?,
                SweepBoundary::Both => model.sub("boundary")?,
            };
            let weighted = radial_weights(&model, &rat(1), &rat(1))?;
            let dim = weighted.harmonic_basis(k, Condition::Relative, bd)?.dim();
            let unit = WeightedComplex::uniform(model.complex.clone());
            let unit_dim = unit.harmonic_basis(k, Condition::Relative, bd)?.dim();
            Ok(SweepRow { shells, dim, unit_dim })
        })
        .collect::<Result<_>>()?;
    if rows.windows(2).any(|w| w[0].unit_dim != w[1].unit_dim) {
        return Err(Error::Inconsistent("unweighted dimension changed with truncation depth".into()));
    }
    Ok(rows)
}
