//! Kernels by p-adic lifting, certified by exact verification.
//!
//! The matrix is eliminated once modulo a word-sized prime, recording the row
//! operations. Each kernel vector is then lifted digit by digit and recovered
//! by rational reconstruction, and is kept only once it satisfies every
//! integer row exactly. Reduction mod p can only lower the rank, so a verified
//! vector with `x[f] ≠ 0` supported on columns `≤ f` proves column `f` free
//! over ℚ; one such vector per free column mod p pins down the rational kernel
//! and its echelon basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntRow;

const PRIMES: [u64; 4] = [2_147_483_647, 2_147_483_629, 2_147_483_587, 2_147_483_579];
const MAX_DIGITS: usize = 4096;

type ModRow = Vec<(usize, u64)>;

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn residue(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// `target − t₀·pivot` for a monic pivot sharing the leading column.
fn combine(target: &ModRow, pivot: &ModRow, p: u64) -> ModRow {
    let t = target[0].1;
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i]);
            i += 1;
        } else if cj < ci {
            out.push((cj, (p - t * pivot[j].1 % p) % p));
            j += 1;
        } else {
            let v = (target[i].1 + p - t * pivot[j].1 % p) % p;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

enum Op {
    Scale(usize, u64),
    Eliminate { target: usize, pivot: usize, factor: u64 },
}

/// Echelon form mod p with the row operations that produced it.
struct Factor {
    p: u64,
    cols: usize,
    ops: Vec<Op>,
    /// Monic pivot rows with the index of the right-hand side they carry.
    rows: Vec<(usize, ModRow)>,
    pivots: Vec<usize>,
}

impl Factor {
    fn new(rows: &[IntRow], cols: usize, p: u64) -> Self {
        let mut buckets: Vec<Vec<(usize, ModRow)>> = vec![Vec::new(); cols];
        for (id, r) in rows.iter().enumerate() {
            let r: ModRow = r.iter().map(|(j, v)| (*j, residue(v, p))).filter(|(_, v)| *v != 0).collect();
            if let Some(&(c, _)) = r.first() {
                buckets[c].push((id, r));
            }
        }
        let mut ops = Vec::new();
        let mut out = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..cols {
            let mut bucket = std::mem::take(&mut buckets[col]);
            if bucket.is_empty() {
                continue;
            }
            let best = (0..bucket.len()).min_by_key(|&i| bucket[i].1.len()).unwrap();
            let (pid, mut pivot) = bucket.swap_remove(best);
            let inv = inv_mod(pivot[0].1, p);
            for (_, v) in pivot.iter_mut() {
                *v = *v * inv % p;
            }
            ops.push(Op::Scale(pid, inv));
            for (tid, r) in bucket {
                ops.push(Op::Eliminate { target: tid, pivot: pid, factor: r[0].1 });
                let r = combine(&r, &pivot, p);
                if let Some(&(c, _)) = r.first() {
                    buckets[c].push((tid, r));
                }
            }
            out.push((pid, pivot));
            pivots.push(col);
        }
        Factor { p, cols, ops, rows: out, pivots }
    }

    /// The solution of `A y ≡ rhs` supported on the pivot columns.
    fn solve(&self, mut rhs: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for op in &self.ops {
            match *op {
                Op::Scale(i, s) => rhs[i] = rhs[i] * s % p,
                Op::Eliminate { target, pivot, factor } => rhs[target] = (rhs[target] + p - factor * rhs[pivot] % p) % p,
            }
        }
        let mut y = vec![0u64; self.cols];
        for ((id, row), &c) in self.rows.iter().zip(&self.pivots).rev() {
            let s = row[1..].iter().fold(0, |acc, (j, v)| (acc + v * y[*j]) % p);
            y[c] = (rhs[*id] + p - s) % p;
        }
        y
    }
}

/// `(n, d)` with `n ≡ d·t (mod m)`, `|n| ≤ bound`, `0 < d ≤ bound`.
fn rational_reconstruct(t: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), t.clone());
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > *bound {
        return None;
    }
    if s1.is_negative() {
        Some((-r1, -s1))
    } else {
        Some((r1, s1))
    }
}

/// Integer vector proportional to the rational vector with the given residues.
fn reconstruct(acc: &[BigInt], m: &BigInt) -> Option<Vec<BigInt>> {
    let bound = (m >> 1u32).sqrt();
    let half = m >> 1u32;
    let mut den = BigInt::one();
    let mut out: Vec<BigInt> = Vec::with_capacity(acc.len());
    for a in acc {
        if a.is_zero() {
            out.push(BigInt::zero());
            continue;
        }
        let t = (a * &den).mod_floor(m);
        let s = if t > half { &t - m } else { t.clone() };
        if s.abs() <= bound {
            out.push(s);
            continue;
        }
        let (n, d) = rational_reconstruct(&t, m, &bound)?;
        for v in out.iter_mut() {
            *v *= &d;
        }
        den *= &d;
        if den > bound {
            return None;
        }
        out.push(n);
    }
    Some(out)
}

fn annihilates(rows: &[IntRow], v: &[BigInt]) -> bool {
    rows.iter().all(|r| r.iter().filter(|(j, _)| !v[*j].is_zero()).fold(BigInt::zero(), |acc, (j, c)| acc + c * &v[*j]).is_zero())
}

/// The kernel vector for free column `f`, lifted from `A x = −a_f`.
fn lift(rows: &[IntRow], fac: &Factor, f: usize) -> Option<Vec<BigInt>> {
    let p = fac.p;
    let pb = BigInt::from(p);
    let mut r: Vec<BigInt> = rows.iter().map(|row| row.iter().find(|(j, _)| *j == f).map_or(BigInt::zero(), |(_, v)| -v)).collect();
    let mut x = vec![BigInt::zero(); fac.cols];
    x[f] = BigInt::one();
    let mut modulus = BigInt::one();
    for digit in 1..=MAX_DIGITS {
        let y = fac.solve(r.iter().map(|v| residue(v, p)).collect());
        for (ri, row) in r.iter_mut().zip(rows) {
            let ay = row.iter().filter(|(j, _)| y[*j] != 0).fold(BigInt::zero(), |acc, (j, v)| acc + v * y[*j]);
            let (q, rem) = (&*ri - ay).div_rem(&pb);
            if !rem.is_zero() {
                return None;
            }
            *ri = q;
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            if *yi != 0 {
                *xi += &modulus * *yi;
            }
        }
        modulus *= p;
        let settled = r.iter().all(Zero::is_zero);
        if !settled && !digit.is_power_of_two() {
            continue;
        }
        let cand = if settled { Some(x.clone()) } else { reconstruct(&x, &modulus) };
        if let Some(v) = cand {
            if !v[f].is_zero() && v[f + 1..].iter().all(Zero::is_zero) && annihilates(rows, &v) {
                return Some(v);
            }
        }
        if settled {
            return None;
        }
    }
    None
}

/// Kernel basis of the integer rows: one integer vector per free column,
/// supported on columns up to it. `None` when no certificate was found.
pub(super) fn kernel(rows: &[IntRow], cols: usize) -> Option<Vec<(usize, Vec<BigInt>)>> {
    'prime: for &p in &PRIMES {
        let fac = Factor::new(rows, cols, p);
        let mut is_pivot = vec![false; cols];
        for &c in &fac.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..cols).filter(|&c| !is_pivot[c]) {
            match lift(rows, &fac, f) {
                Some(v) => out.push((f, v)),
                None => continue 'prime,
            }
        }
        return Some(out);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(PRIMES[0]) * BigInt::from(PRIMES[1]);
        let inv7 = BigInt::from(7).extended_gcd(&m).x;
        let t = (BigInt::from(-3) * inv7).mod_floor(&m);
        let v = reconstruct(&[BigInt::from(1), t], &m).unwrap();
        assert_eq!(v, vec![BigInt::from(7), BigInt::from(-3)]);
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let rows: Vec<IntRow> = vec![vec![(0, BigInt::from(2)), (1, BigInt::from(3)), (2, BigInt::from(5))]];
        let k = kernel(&rows, 3).unwrap();
        assert_eq!(k.iter().map(|(f, _)| *f).collect::<Vec<_>>(), vec![1, 2]);
        for (_, v) in &k {
            assert!(annihilates(&rows, v));
        }
    }
}
