//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::path::{Path, PathBuf};
use std::process::Command;

use hodgecw::complex::CellComplex;
use hodgecw::flatends::{closure, IntMatrix, LatticeGroup, DEFAULT_CAP};
use hodgecw::hodge::WeightedComplex;
use hodgecw::linalg::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(lo..=hi)), BigInt::from(rng.gen_range(1..=7)))
}

pub fn random_weights(x: &CellComplex, rng: &mut ChaCha8Rng) -> WeightedComplex {
    let weights = (0..=x.top_dim()).map(|k| (0..x.num_cells(k)).map(|_| random_rational(rng, 1, 12)).collect()).collect();
    WeightedComplex::new(x.clone(), weights).expect("positive weights")
}

pub fn random_cochain(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng, -9, 9)).collect()
}

/// Rank by textbook Gaussian elimination on a dense rational matrix.
pub fn dense_rank(mut a: Vec<Vec<Rational>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot;
                for j in c..cols {
                    let delta = &f * &a[rank][j];
                    a[r][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(a: &[Vec<i64>]) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    a[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if m < k {
        return Vec::new();
    }
    let mut out = subsets(m - 1, k);
    for mut s in subsets(m - 1, k - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out
}

/// Matrix of `Λ^k g` in the basis of wedge products of standard basis vectors.
pub fn compound(g: &IntMatrix, k: usize) -> Vec<Vec<i64>> {
    let sets = subsets(g.size(), k);
    sets.iter()
        .map(|rows| {
            sets.iter()
                .map(|cols| {
                    let sub: Vec<Vec<i64>> = rows.iter().map(|&r| cols.iter().map(|&c| g.get(r, c)).collect()).collect();
                    cofactor_det(&sub)
                })
                .collect()
        })
        .collect()
}

/// Rank of the averaging projector `(1/|G|) Σ_γ Λ^k γ`.
pub fn projector_rank(group: &LatticeGroup, k: usize) -> usize {
    if k > group.rank() {
        return 0;
    }
    let n = subsets(group.rank(), k).len();
    let mut sum = vec![vec![0i64; n]; n];
    for g in group.elements() {
        for (row, crow) in sum.iter_mut().zip(compound(g, k)) {
            for (s, c) in row.iter_mut().zip(crow) {
                *s += c;
            }
        }
    }
    let order = Rational::from_integer(BigInt::from(group.order()));
    let averaged = sum.into_iter().map(|row| row.into_iter().map(|v| Rational::from_integer(v.into()) / &order).collect()).collect();
    dense_rank(averaged)
}

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn permutation(perm: &[usize], signs: &[i64]) -> IntMatrix {
    let m = perm.len();
    let mut rows = vec![vec![0; m]; m];
    for (j, &i) in perm.iter().enumerate() {
        rows[i][j] = signs[j];
    }
    IntMatrix::from_rows(&rows).unwrap()
}

fn block(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = a.size() + b.size();
    let mut rows = vec![vec![0; m]; m];
    for i in 0..a.size() {
        for j in 0..a.size() {
            rows[i][j] = a.get(i, j);
        }
    }
    for i in 0..b.size() {
        for j in 0..b.size() {
            rows[a.size() + i][a.size() + j] = b.get(i, j);
        }
    }
    IntMatrix::from_rows(&rows).unwrap()
}

/// Finite subgroups of `GL(m, ℤ)` for `m ≤ 6`.
pub fn group_suite() -> Vec<(String, LatticeGroup)> {
    let rot4 = mat(&[&[0, -1], &[1, 0]]);
    let rot6 = mat(&[&[1, -1], &[1, 0]]);
    let rot3 = mat(&[&[0, -1], &[1, -1]]);
    let swap = mat(&[&[0, 1], &[1, 0]]);
    let suite: Vec<(&str, usize, Vec<IntMatrix>)> = vec![
        ("trivial-0", 0, vec![]),
        ("trivial-1", 1, vec![]),
        ("sign-1", 1, vec![IntMatrix::scalar(1, -1)]),
        ("trivial-2", 2, vec![]),
        ("minus-id-2", 2, vec![IntMatrix::scalar(2, -1)]),
        ("c4", 2, vec![rot4.clone()]),
        ("c3", 2, vec![rot3.clone()]),
        ("c6", 2, vec![rot6.clone()]),
        ("d4", 2, vec![rot4.clone(), swap.clone()]),
        ("d6", 2, vec![rot6.clone(), swap.clone()]),
        ("reflection-2", 2, vec![mat(&[&[1, 0], &[0, -1]])]),
        ("s3-perm", 3, vec![permutation(&[1, 0, 2], &[1, 1, 1]), permutation(&[1, 2, 0], &[1, 1, 1])]),
        ("b3", 3, vec![permutation(&[1, 0, 2], &[1, 1, 1]), permutation(&[1, 2, 0], &[1, 1, 1]), permutation(&[0, 1, 2], &[-1, 1, 1])]),
        ("c4-x-minus", 3, vec![block(&rot4, &IntMatrix::scalar(1, -1))]),
        ("c4-plus-c6", 4, vec![block(&rot4, &IntMatrix::identity(2)), block(&IntMatrix::identity(2), &rot6)]),
        ("s4-perm", 4, vec![permutation(&[1, 0, 2, 3], &[1; 4]), permutation(&[1, 2, 3, 0], &[1; 4])]),
        ("b4", 4, vec![permutation(&[1, 0, 2, 3], &[1; 4]), permutation(&[1, 2, 3, 0], &[1; 4]), permutation(&[0, 1, 2, 3], &[-1, 1, 1, 1])]),
        ("cyclic-5", 5, vec![permutation(&[1, 2, 3, 4, 0], &[1; 5])]),
        ("c6-shift-6", 6, vec![permutation(&[1, 2, 3, 4, 5, 0], &[1; 6])]),
        ("s6-perm", 6, vec![permutation(&[1, 0, 2, 3, 4, 5], &[1; 6]), permutation(&[1, 2, 3, 4, 5, 0], &[1; 6])]),
        ("d4-cubed", 6, vec![
            block(&block(&rot4, &rot4), &rot4),
            block(&block(&swap, &swap), &swap),
            block(&block(&IntMatrix::identity(2), &rot4), &IntMatrix::identity(2)),
        ]),
        ("minus-id-6", 6, vec![IntMatrix::scalar(6, -1)]),
    ];
    suite
        .into_iter()
        .map(|(name, m, gens)| (name.to_string(), closure(m, &gens, DEFAULT_CAP).expect(name)))
        .collect()
}

/// `χ(M) − Σ_{j=0}^{k−2} (−1)^j b_j` (cone) or `χ(M) + Σ_{j=0}^{k−1} (−1)^j b_j`
/// (shrinking), with `k = n/2`, summed term by term.
pub fn warped_oracle(chi: i64, betti: &[i64], cone: bool, n: usize) -> i64 {
    let k = (n / 2) as i64;
    let upper = if cone { k - 2 } else { k - 1 };
    let mut total = chi;
    let mut j = 0i64;
    while j <= upper {
        let term = (-1i64).pow(j as u32) * betti[j as usize];
        if cone {
            total -= term;
        } else {
            total += term;
        }
        j += 1;
    }
    total
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join("transcript.txt")
}

/// Commands of the golden transcript, run with the fixtures directory contents
/// copied into the working directory.
pub const SCRIPT: &[&str] = &[
    // complexes
    "validate circle3.cc",
    "validate flipped_triangle.cc",
    "model sphere --nu 3 --out .",
    "validate sphere.cc",
    "betti sphere.cc",
    "euler sphere.cc",
    "model torus --rank 2 --out .",
    "betti torus.cc",
    "euler torus.cc",
    "euler two_spheres.cc",
    "model circle --res 4",
    "model torus --rank 3 --out .",
    "betti torus.cc",
    "model annulus --out .",
    "betti annulus.cc",
    "model interval --out .",
    "double interval.cc --sub interval.boundary.sc",
    "model ball --nu 2 --out .",
    "betti ball.cc",
    "double ball.cc --sub ball.boundary.sc",
    "double annulus.cc --sub annulus.boundary.sc",
    // weighted cochains
    "harmonic circle3.cc --deg 1",
    "harmonic circle3.cc --weights circle_weights.w",
    "harmonic circle3.cc --weights circle_partial.w",
    "harmonic circle3.cc --weights circle_partial.w --default-unit",
    "harmonic ball.cc --rel ball.boundary.sc",
    "model torus --rank 2 --out .",
    "harmonic torus.cc --deg 1 --weights torus_weights.w",
    "hodge-split circle3.cc --cochain circle_uniform.co",
    "hodge-split circle3.cc --cochain circle_exact.co --weights circle_weights.w",
    "hodge-split torus.cc --cochain torus_edges.co --weights torus_weights.w",
    "duality ball.cc --sub ball.boundary.sc",
    "duality annulus.cc --sub annulus.boundary.sc",
    "duality sphere.cc --sub empty.sc",
    // pairs
    "pair-audit ball.cc --sub ball.boundary.sc",
    "pair-audit annulus.cc --sub annulus.boundary.sc",
    "pair-audit torus.cc --sub torus_cell.sc",
    "pair-audit torus.cc --sub empty.sc",
    "im-rel-abs annulus.cc --sub annulus.boundary.sc",
    "im-rel-abs torus.cc --sub empty.sc",
    "model punctured-torus --out .",
    "im-rel-abs punctured-torus.cc --sub punctured-torus.boundary.sc --deg 1",
    "model core-model --nu 3 --m 1 --out .",
    "betti core-model.cc",
    "ker-pullback core-model.cc --fiber core-model.fiber.sc",
    "ker-pullback core-model.cc --fiber empty.sc",
    // flat ends
    "group-closure trivial2.glz",
    "group-closure rot4.glz",
    "group-closure minus_id.glz",
    "group-closure trivial3.glz",
    "group-closure shear.glz",
    "equiv-betti trivial2.glz",
    "equiv-betti minus_id.glz",
    "equiv-betti rot4.glz",
    "chi-equivariant trivial3.glz",
    "chi-equivariant minus_id.glz",
    "chi-equivariant rank0.glz",
    "q-end --end nu=4,n=4,cover=1",
    "q-end --end nu=4,n=4,cover=2",
    "q-end --end nu=4,n=4,cover=3",
    "q-end --end nu=4,n=4,cover=5",
    "q-end --end nu=2,n=4,group=trivial",
    "q-end --end nu=2,n=4,group=minus_id.glz",
    "q-end --end nu=3,n=4",
    "chi-l2 --chi 0 --end nu=3,n=4,group=trivial,cover=1",
    "chi-l2 --chi 1 --end nu=2,n=4,group=minus_id.glz,cover=1",
    "chi-l2 --chi 0 --end nu=2,n=2,parabolic",
    "chi-l2-warped --chi 5 --betti 1,1 --case cone --n 2",
    "chi-l2-warped --chi 5 --betti 1,3,3,1 --case cone --n 4",
    "chi-l2-warped --chi 5 --betti 1,3,3,1 --case shrinking --n 4",
    "chi-l2-warped --chi 5 --betti 1,2,1 --case cone --n 3",
    // models
    "model end-model --nu 3 --m 1 --shells 4 --out .",
    "betti end-model.cc",
    "model end-model --nu 3 --m 0 --shells 2 --out . --radial",
    "harmonic end-model.cc --weights end-model.weights --rel end-model.boundary.sc",
    "harmonic end-model.cc --rel end-model.boundary.sc",
    "sweep --nu 3 --m 0 --k 0 --shells 1,2,3",
    "sweep --nu 3 --m 0 --k 3 --shells 1,2,3 --boundary both",
    "sweep --nu 3 --m 0 --k 3 --shells 1,2,3",
    "sweep --nu 3 --m 1 --k 1 --shells 2,4,8",
    // malformed input and usage
    "betti missing.cc",
    "betti circle_weights.w",
    "harmonic circle3.cc --deg 7",
    "betti circle3.cc --deg 1",
    "q-end --end nu=2,n=4,colour=red",
];

/// Runs [`SCRIPT`] with the binary in a fresh copy of the fixtures and returns
/// the transcript: each command, its standard output and its exit status.
pub fn transcript(bin: &Path) -> String {
    let dir = tempfile::tempdir().expect("temp dir");
    for entry in std::fs::read_dir(fixtures()).expect("fixtures") {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let mut out = String::new();
    for line in SCRIPT {
        let result = Command::new(bin).args(line.split_whitespace()).current_dir(dir.path()).output().expect("run binary");
        out.push_str(&format!("$ hodgecw {line}\n"));
        out.push_str(&String::from_utf8(result.stdout).expect("utf-8 output"));
        out.push_str(&format!("[exit {}]\n\n", result.status.code().unwrap_or(-1)));
    }
    out
}

pub fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_hodgecw"))
}
