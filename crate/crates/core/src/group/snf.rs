//! Smith normal form over ℤ.
//!
//! Elimination runs in checked `i64` and restarts in `BigInt` on overflow,
//! so results are exact for every input. Row operations can be logged, which
//! turns a decomposition `U·M·V = D` into an image-membership test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn to_rows<S: Scalar>(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&x| S::from_i64(x)).collect()).collect()
    }
}

/// Invariant factors `d_1 | d_2 | … | d_r`, all positive; `r` is the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub invariants: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_chain(&self) -> bool {
        self.invariants.iter().all(|d| d.is_positive())
            && self.invariants.windows(2).all(|w| Zero::is_zero(&(&w[1] % &w[0])))
    }
}

impl fmt::Display for SnfResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.invariants.iter().map(BigInt::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

trait Scalar: Clone + PartialEq + fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    /// Truncated quotient, `None` on overflow.
    fn quot(&self, b: &Self) -> Option<Self>;
    /// `self + q·b`, `None` on overflow.
    fn add_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn negate(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quot(&self, b: &Self) -> Option<Self> {
        self.checked_div(*b)
    }
    fn add_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_add(p))
    }
    fn negate(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn quot(&self, b: &Self) -> Option<Self> {
        Some(self / b)
    }
    fn add_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self + q * b)
    }
    fn negate(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug)]
enum RowOp<S> {
    Swap(usize, usize),
    /// `row[target] += factor · row[source]`
    AddMul { target: usize, source: usize, factor: S },
}

struct Decomposition<S> {
    diagonal: Vec<S>,
    ops: Vec<RowOp<S>>,
}

struct Overflow;

fn row_add<S: Scalar>(m: &mut [Vec<S>], target: usize, source: usize, q: &S, from: usize) -> Result<(), Overflow> {
    let (t, s) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for j in from..t.len() {
        if !s[j].is_zero() {
            t[j] = t[j].add_mul(q, &s[j]).ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn col_add<S: Scalar>(m: &mut [Vec<S>], target: usize, source: usize, q: &S, from: usize) -> Result<(), Overflow> {
    for row in m.iter_mut().skip(from) {
        if !row[source].is_zero() {
            row[target] = row[target].add_mul(q, &row[source]).ok_or(Overflow)?;
        }
    }
    Ok(())
}

/// Diagonalizes `m` in place. The diagonal is not yet a divisibility chain.
fn diagonalize<S: Scalar>(mut m: Vec<Vec<S>>, cols: usize, log: bool) -> Result<Decomposition<S>, Overflow> {
    let rows = m.len();
    let mut ops = Vec::new();
    let mut diagonal = Vec::new();
    for k in 0..rows.min(cols) {
        // Pivot: first unit in the trailing block, else an entry of least size.
        let mut best: Option<(usize, usize)> = None;
        'scan: for (i, row) in m.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.is_zero() {
                    continue;
                }
                if x.is_unit() {
                    best = Some((i, j));
                    break 'scan;
                }
                if best.is_none_or(|(bi, bj)| x.abs_lt(&m[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        move_to_pivot(&mut m, &mut ops, log, k, pi, pj);
        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if m[i][k].is_zero() {
                    continue;
                }
                let q = m[i][k].quot(&m[k][k]).and_then(|q| q.negate()).ok_or(Overflow)?;
                row_add(&mut m, i, k, &q, k)?;
                if log {
                    ops.push(RowOp::AddMul { target: i, source: k, factor: q });
                }
                clean &= m[i][k].is_zero();
            }
            for j in k + 1..cols {
                if m[k][j].is_zero() {
                    continue;
                }
                let q = m[k][j].quot(&m[k][k]).and_then(|q| q.negate()).ok_or(Overflow)?;
                col_add(&mut m, j, k, &q, k)?;
                clean &= m[k][j].is_zero();
            }
            if clean {
                break;
            }
            // A remainder is smaller than the pivot: bring it to (k, k).
            let mut best = (k, k);
            for i in k + 1..rows {
                if !m[i][k].is_zero() && m[i][k].abs_lt(&m[best.0][best.1]) {
                    best = (i, k);
                }
            }
            for j in k + 1..cols {
                if !m[k][j].is_zero() && m[k][j].abs_lt(&m[best.0][best.1]) {
                    best = (k, j);
                }
            }
            move_to_pivot(&mut m, &mut ops, log, k, best.0, best.1);
        }
        diagonal.push(m[k][k].clone());
    }
    Ok(Decomposition { diagonal, ops })
}

fn move_to_pivot<S: Scalar>(m: &mut [Vec<S>], ops: &mut Vec<RowOp<S>>, log: bool, k: usize, i: usize, j: usize) {
    if i != k {
        m.swap(i, k);
        if log {
            ops.push(RowOp::Swap(i, k));
        }
    }
    if j != k {
        for row in m.iter_mut() {
            row.swap(j, k);
        }
    }
}

fn chain(diagonal: &[BigInt]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diagonal.iter().map(BigInt::abs).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn decompose(m: &IntMatrix, log: bool) -> Lattice {
    match diagonalize::<i64>(m.to_rows(), m.cols, log) {
        Ok(d) => Lattice::Small(d),
        Err(Overflow) => match diagonalize::<BigInt>(m.to_rows(), m.cols, log) {
            Ok(d) => Lattice::Big(d),
            Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
        },
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let diagonal: Vec<BigInt> = match decompose(m, false) {
        Lattice::Small(d) => d.diagonal.iter().map(Scalar::to_big).collect(),
        Lattice::Big(d) => d.diagonal,
    };
    SnfResult {
        invariants: chain(&diagonal),
    }
}

enum Lattice {
    Small(Decomposition<i64>),
    Big(Decomposition<BigInt>),
}

/// The column span of a matrix, with an exact membership test.
pub struct ImageLattice {
    rows: usize,
    inner: Lattice,
}

impl ImageLattice {
    pub fn new(m: &IntMatrix) -> ImageLattice {
        ImageLattice {
            rows: m.rows,
            inner: decompose(m, true),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Lattice::Small(d) => d.diagonal.len(),
            Lattice::Big(d) => d.diagonal.len(),
        }
    }

    pub fn invariants(&self) -> SnfResult {
        let diagonal: Vec<BigInt> = match &self.inner {
            Lattice::Small(d) => d.diagonal.iter().map(Scalar::to_big).collect(),
            Lattice::Big(d) => d.diagonal.clone(),
        };
        SnfResult {
            invariants: chain(&diagonal),
        }
    }

    /// Whether `c = M·x` for some integer vector `x`.
    pub fn contains(&self, c: &[i64]) -> bool {
        assert_eq!(c.len(), self.rows, "vector length");
        match &self.inner {
            Lattice::Small(d) => {
                let v: Vec<i64> = c.to_vec();
                match reduce(d, v) {
                    Ok(ok) => ok,
                    Err(Overflow) => {
                        let big = Decomposition {
                            diagonal: d.diagonal.iter().map(Scalar::to_big).collect(),
                            ops: d
                                .ops
                                .iter()
                                .map(|op| match op {
                                    RowOp::Swap(a, b) => RowOp::Swap(*a, *b),
                                    RowOp::AddMul { target, source, factor } => RowOp::AddMul {
                                        target: *target,
                                        source: *source,
                                        factor: factor.to_big(),
                                    },
                                })
                                .collect(),
                        };
                        reduce(&big, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap_or(false)
                    }
                }
            }
            Lattice::Big(d) => reduce(d, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap_or(false),
        }
    }
}

fn reduce<S: Scalar>(d: &Decomposition<S>, mut v: Vec<S>) -> Result<bool, Overflow> {
    for op in &d.ops {
        match op {
            RowOp::Swap(a, b) => v.swap(*a, *b),
            RowOp::AddMul { target, source, factor } => {
                if !v[*source].is_zero() {
                    v[*target] = v[*target].add_mul(factor, &v[*source]).ok_or(Overflow)?;
                }
            }
        }
    }
    let r = d.diagonal.len();
    let divisible = d.diagonal.iter().zip(&v).all(|(p, x)| {
        let (p, x) = (p.to_big(), x.to_big());
        Zero::is_zero(&(x % p))
    });
    Ok(divisible && v[r..].iter().all(Scalar::is_zero))
}

/// `i64` view of an invariant factor, for reports.
pub fn small(d: &BigInt) -> Option<i64> {
    d.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_matrix_has_empty_chain() {
        assert!(smith_normal_form(&IntMatrix::zeros(3, 4)).invariants.is_empty());
        assert!(smith_normal_form(&IntMatrix::zeros(0, 0)).invariants.is_empty());
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&m).invariants, ints(&[1, 6]));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let m = IntMatrix::from_rows(&[vec![big, 0], vec![0, big - 1]]);
        let r = smith_normal_form(&m);
        assert!(r.is_chain());
        assert_eq!(r.invariants[0], BigInt::from(1));
        assert_eq!(r.invariants[1], BigInt::from(big) * BigInt::from(big - 1));
    }

    #[test]
    fn membership() {
        // Columns (2, 0) and (0, 3).
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![0, 0]]);
        let l = ImageLattice::new(&m);
        assert!(l.contains(&[4, -3, 0]));
        assert!(!l.contains(&[1, 0, 0]));
        assert!(!l.contains(&[0, 0, 1]));
        assert_eq!(l.rank(), 2);
    }
}
