//! Exact arithmetic in GF(p) for word-sized primes, plus dense vectors,
//! matrices and linear solving used by every other module.
//!
//! Values are always kept as canonical residues in `[0, p)`; every
//! operation reduces before returning. All types are immutable after
//! construction and all operations are pure.

use crate::error::{Error, Result};

/// Largest admissible modulus. Keeping `p < 2^63` lets addition stay in
/// `u64` and multiplication in `u128` without overflow.
pub const MAX_MODULUS: u64 = 1 << 63;

/// Miller-Rabin witnesses. This fixed base set is deterministic for all
/// 64-bit inputs (it already suffices below 3.3 * 10^24); in particular
/// the check is deterministic for every p < 2^32 and beyond.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for word-sized candidates.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in MR_BASES.iter() {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Modular inverse by extended Euclid. Returns `None` for `a == 0`.
fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime");
    Some(s0.rem_euclid(p as i128) as u64)
}

/// A validated prime modulus; the entry point for building field values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement::new(value, self.p)
    }

    pub fn vector(&self, values: &[u64]) -> FieldVector {
        FieldVector::new(self.p, values.to_vec())
    }
}

/// A canonical residue modulo a prime `p`.
///
/// The arithmetic operators panic when the moduli of their operands
/// differ; use [`FieldElement::checked_op`] at boundaries where mixed
/// moduli may legitimately arrive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

/// Binary field operation selector for [`FieldElement::checked_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    /// Creates the canonical residue of `value` mod `p`. `p` is trusted
    /// to be prime here; construct a [`PrimeField`] first when the
    /// modulus comes from the outside world.
    pub fn new(value: u64, p: u64) -> Self {
        debug_assert!(p >= 2 && p < MAX_MODULUS);
        FieldElement { value: value % p, p }
    }

    pub fn zero(p: u64) -> Self {
        FieldElement::new(0, p)
    }

    pub fn one(p: u64) -> Self {
        FieldElement::new(1, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_modulus(&self, other: &FieldElement) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    /// The four basic operations with full error reporting.
    pub fn checked_op(&self, other: &FieldElement, op: FieldOp) -> Result<FieldElement> {
        self.same_modulus(other)?;
        match op {
            FieldOp::Add => Ok(*self + *other),
            FieldOp::Sub => Ok(*self - *other),
            FieldOp::Mul => Ok(*self * *other),
            FieldOp::Div => {
                let inv = other.inv()?;
                Ok(*self * inv)
            }
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        match inv_mod(self.value, self.p) {
            Some(v) => Ok(FieldElement { value: v, p: self.p }),
            None => Err(Error::DivisionByZero { p: self.p }),
        }
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.checked_op(other, FieldOp::Div)
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        FieldElement {
            value: pow_mod(self.value, exp, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let mut v = self.value + rhs.value;
        if v >= self.p {
            v -= self.p;
        }
        FieldElement { value: v, p: self.p }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        FieldElement { value: v, p: self.p }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        FieldElement {
            value: mul_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let v = if self.value == 0 { 0 } else { self.p - self.value };
        FieldElement { value: v, p: self.p }
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A dense vector of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    p: u64,
    entries: Vec<u64>,
}

impl FieldVector {
    pub fn new(p: u64, values: Vec<u64>) -> Self {
        let entries = values.into_iter().map(|v| v % p).collect();
        FieldVector { p, entries }
    }

    pub fn zeros(p: u64, len: usize) -> Self {
        FieldVector {
            p,
            entries: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize) -> FieldElement {
        FieldElement {
            value: self.entries[i],
            p: self.p,
        }
    }

    pub fn set(&mut self, i: usize, v: FieldElement) {
        assert_eq!(self.p, v.p, "modulus mismatch");
        self.entries[i] = v.value;
    }

    pub fn values(&self) -> &[u64] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let p = self.p;
        self.entries.iter().map(move |&v| FieldElement { value: v, p })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn same_shape(&self, other: &FieldVector) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        self.same_shape(other)?;
        Ok(FieldVector {
            p: self.p,
            entries: self
                .iter()
                .zip(other.iter())
                .map(|(a, b)| (a + b).value)
                .collect(),
        })
    }

    pub fn sub(&self, other: &FieldVector) -> Result<FieldVector> {
        self.same_shape(other)?;
        Ok(FieldVector {
            p: self.p,
            entries: self
                .iter()
                .zip(other.iter())
                .map(|(a, b)| (a - b).value)
                .collect(),
        })
    }

    pub fn scale(&self, c: FieldElement) -> FieldVector {
        assert_eq!(self.p, c.p, "modulus mismatch");
        FieldVector {
            p: self.p,
            entries: self.iter().map(|a| (a * c).value).collect(),
        }
    }

    pub fn dot(&self, other: &FieldVector) -> Result<FieldElement> {
        self.same_shape(other)?;
        let mut acc = FieldElement::zero(self.p);
        for (a, b) in self.iter().zip(other.iter()) {
            acc = acc + a * b;
        }
        Ok(acc)
    }
}

/// A dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// Outcome of [`FieldMatrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// Exactly one solution.
    Unique(FieldVector),
    /// A particular solution (zeros in free columns, leftmost-pivot
    /// convention) together with a kernel basis, one vector per free
    /// column in ascending column order.
    Underdetermined {
        particular: FieldVector,
        kernel: Vec<FieldVector>,
    },
    /// The system is inconsistent.
    NoSolution,
}

impl Solution {
    /// A solution vector if one exists (the particular one when
    /// underdetermined).
    pub fn any_solution(&self) -> Option<&FieldVector> {
        match self {
            Solution::Unique(x) => Some(x),
            Solution::Underdetermined { particular, .. } => Some(particular),
            Solution::NoSolution => None,
        }
    }
}

impl FieldMatrix {
    pub fn new(p: u64, rows: usize, cols: usize, values: Vec<u64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                values.len()
            )));
        }
        Ok(FieldMatrix {
            p,
            rows,
            cols,
            entries: values.into_iter().map(|v| v % p).collect(),
        })
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        FieldMatrix::new(p, r, c, rows.concat())
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FieldMatrix::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(r < self.rows && c < self.cols);
        FieldElement {
            value: self.entries[r * self.cols + c],
            p: self.p,
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert!(r < self.rows && c < self.cols);
        assert_eq!(self.p, v.p, "modulus mismatch");
        self.entries[r * self.cols + c] = v.value;
    }

    pub fn row(&self, r: usize) -> FieldVector {
        FieldVector {
            p: self.p,
            entries: self.entries[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    pub fn mul_vec(&self, v: &FieldVector) -> Result<FieldVector> {
        if v.modulus() != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: v.modulus(),
            });
        }
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u128;
            for c in 0..self.cols {
                acc += self.entries[r * self.cols + c] as u128 * v.entries[c] as u128;
                acc %= self.p as u128;
            }
            out.push(acc as u64);
        }
        Ok(FieldVector {
            p: self.p,
            entries: out,
        })
    }

    pub fn mul_mat(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if other.p != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FieldMatrix::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u128;
                for k in 0..self.cols {
                    acc += self.entries[r * self.cols + k] as u128
                        * other.entries[k * other.cols + c] as u128;
                    acc %= self.p as u128;
                }
                out.entries[r * other.cols + c] = acc as u64;
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns pivot column per row rank.
    fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.entries[r * self.cols + col] != 0)
            else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.entries.swap(row * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = inv_mod(self.entries[row * self.cols + col], p).expect("pivot nonzero");
            for c in 0..self.cols {
                self.entries[row * self.cols + c] = mul_mod(self.entries[row * self.cols + c], inv, p);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.entries[r * self.cols + col];
                if factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let sub = mul_mod(factor, self.entries[row * self.cols + c], p);
                    let cur = self.entries[r * self.cols + c];
                    self.entries[r * self.cols + c] =
                        if cur >= sub { cur - sub } else { cur + p - sub };
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Solves `M x = rhs` by Gaussian elimination.
    ///
    /// Underdetermined systems return the particular solution with zeros
    /// in the free columns (leftmost-pivot convention), plus a kernel
    /// basis, so downstream functional choices are reproducible.
    pub fn solve(&self, rhs: &FieldVector) -> Result<Solution> {
        if rhs.modulus() != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: rhs.modulus(),
            });
        }
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, rhs has length {}",
                self.rows,
                rhs.len()
            )));
        }
        // augmented matrix [M | rhs]
        let mut aug = FieldMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.entries[r * (self.cols + 1) + c] = self.entries[r * self.cols + c];
            }
            aug.entries[r * (self.cols + 1) + self.cols] = rhs.entries[r];
        }
        let pivots = aug.rref();
        // inconsistent if a pivot landed in the rhs column
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::NoSolution);
        }
        let mut particular = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.entries[r * (self.cols + 1) + self.cols];
        }
        let particular = FieldVector {
            p: self.p,
            entries: particular,
        };
        if pivots.len() == self.cols {
            return Ok(Solution::Unique(particular));
        }
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut kernel = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut k = vec![0u64; self.cols];
            k[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let coef = aug.entries[r * (self.cols + 1) + free];
                k[pc] = if coef == 0 { 0 } else { self.p - coef };
            }
            kernel.push(FieldVector {
                p: self.p,
                entries: k,
            });
        }
        Ok(Solution::Underdetermined { particular, kernel })
    }

    /// Exact inverse; `Err(Singular)` when none exists.
    pub fn invert(&self) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.entries[r * 2 * n + c] = self.entries[r * n + c];
            }
            aug.entries[r * 2 * n + n + r] = 1 % self.p;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        let mut out = FieldMatrix::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                out.entries[r * n + c] = aug.entries[r * 2 * n + n + c];
            }
        }
        Ok(out)
    }

    /// Basis of the rank-complement: all `x` with `M x = 0`.
    pub fn kernel_basis(&self) -> Vec<FieldVector> {
        match self.solve(&FieldVector::zeros(self.p, self.rows)) {
            Ok(Solution::Underdetermined { kernel, .. }) => kernel,
            _ => Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u64 = 1801;

    fn fe(v: u64) -> FieldElement {
        FieldElement::new(v, P)
    }

    #[test]
    fn wraparound_addition() {
        assert_eq!((fe(1800) + fe(2)).value(), 1);
    }

    #[test]
    fn absorbing_zero() {
        for v in [0u64, 1, 7, 1800] {
            assert_eq!((fe(0) * fe(v)).value(), 0);
        }
    }

    #[test]
    fn inverse_of_four() {
        // independent extended-Euclid oracle
        let inv = fe(4).inv().unwrap();
        assert_eq!(inv.value(), 1351);
        assert_eq!((fe(4) * inv).value(), 1);
    }

    #[test]
    fn division_by_zero_rejected() {
        assert_eq!(
            fe(3).div(&fe(0)),
            Err(Error::DivisionByZero { p: P })
        );
    }

    #[test]
    fn modulus_mismatch_detected() {
        let a = FieldElement::new(1, 7);
        let b = FieldElement::new(1, 11);
        assert!(matches!(
            a.checked_op(&b, FieldOp::Add),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn primality() {
        for p in [2u64, 3, 5, 7, 1801, 4294967291, 18446744073709551557] {
            assert!(is_prime(p), "{p} is prime");
        }
        for c in [0u64, 1, 4, 1800, 4294967295, 18446744073709551555] {
            assert!(!is_prime(c), "{c} is composite");
        }
        assert!(PrimeField::new(1801).is_ok());
        assert_eq!(PrimeField::new(1800), Err(Error::NotPrime(1800)));
    }

    #[test]
    fn solve_identity() {
        let m = FieldMatrix::identity(7, 3);
        let v = FieldVector::new(7, vec![1, 5, 6]);
        assert_eq!(m.solve(&v).unwrap(), Solution::Unique(v));
    }

    #[test]
    fn solve_unique_gf7() {
        let m = FieldMatrix::from_rows(7, &[vec![2, 5], vec![6, 3]]).unwrap();
        let rhs = FieldVector::new(7, vec![1, 0]);
        let sol = m.solve(&rhs).unwrap();
        let x = match &sol {
            Solution::Unique(x) => x.clone(),
            other => panic!("expected unique solution, got {other:?}"),
        };
        assert_eq!(x.values(), &[6, 2]);
        assert_eq!(m.mul_vec(&x).unwrap(), rhs);
    }

    #[test]
    fn solve_inconsistent() {
        let m = FieldMatrix::from_rows(7, &[vec![1, 1], vec![2, 2]]).unwrap();
        let rhs = FieldVector::new(7, vec![1, 3]);
        assert_eq!(m.solve(&rhs).unwrap(), Solution::NoSolution);
    }

    #[test]
    fn solve_underdetermined_zero_free_columns() {
        // one equation, three unknowns: x1 + 2 x2 + 3 x3 = 5 over GF(7)
        let m = FieldMatrix::from_rows(7, &[vec![1, 2, 3]]).unwrap();
        let rhs = FieldVector::new(7, vec![5]);
        match m.solve(&rhs).unwrap() {
            Solution::Underdetermined { particular, kernel } => {
                assert_eq!(particular.values(), &[5, 0, 0]);
                assert_eq!(kernel.len(), 2);
                for k in &kernel {
                    assert!(m.mul_vec(k).unwrap().is_zero());
                }
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn invert_identity() {
        let m = FieldMatrix::identity(P, 4);
        assert_eq!(m.invert().unwrap(), m);
    }

    #[test]
    fn invert_example_lambda1() {
        let m = FieldMatrix::from_rows(P, &[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 0]]).unwrap();
        let mi = m.invert().unwrap();
        // sends (u, v, w) to (v - w, w, u - v + w)
        let expected =
            FieldMatrix::from_rows(P, &[vec![0, 1, 1800], vec![0, 0, 1], vec![1, 1800, 1]])
                .unwrap();
        assert_eq!(mi, expected);
        assert_eq!(m.mul_mat(&mi).unwrap(), FieldMatrix::identity(P, 3));
        assert_eq!(mi.mul_mat(&m).unwrap(), FieldMatrix::identity(P, 3));
    }

    #[test]
    fn invert_zero_is_singular() {
        let m = FieldMatrix::zeros(P, 3, 3);
        assert_eq!(m.invert(), Err(Error::Singular));
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0..P, b in 0..P, c in 0..P) {
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + (-a), fe(0));
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), fe(1));
            }
        }

        #[test]
        fn matrix_inverse_round_trip(seed in 0u64..1_000_000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let vals: Vec<u64> = (0..9).map(|_| rng.random_range(0..P)).collect();
            let m = FieldMatrix::new(P, 3, 3, vals).unwrap();
            match m.invert() {
                Ok(mi) => {
                    prop_assert_eq!(m.mul_mat(&mi).unwrap(), FieldMatrix::identity(P, 3));
                    prop_assert_eq!(mi.mul_mat(&m).unwrap(), FieldMatrix::identity(P, 3));
                }
                Err(Error::Singular) => prop_assert!(m.rank() < 3),
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }

        #[test]
        fn solve_satisfies_system(seed in 0u64..1_000_000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let rows = rng.random_range(1..5usize);
            let cols = rng.random_range(1..5usize);
            let vals: Vec<u64> = (0..rows * cols).map(|_| rng.random_range(0..7)).collect();
            let m = FieldMatrix::new(7, rows, cols, vals).unwrap();
            let rhs = FieldVector::new(7, (0..rows).map(|_| rng.random_range(0..7)).collect());
            match m.solve(&rhs).unwrap() {
                Solution::Unique(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs),
                Solution::Underdetermined { particular, kernel } => {
                    prop_assert_eq!(m.mul_vec(&particular).unwrap(), rhs.clone());
                    for k in &kernel {
                        let shifted = particular.add(k).unwrap();
                        prop_assert_eq!(m.mul_vec(&shifted).unwrap(), rhs.clone());
                    }
                }
                Solution::NoSolution => {}
            }
        }
    }
}
