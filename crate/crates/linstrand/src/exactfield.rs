//! Exact field arithmetic (arbitrary-precision rationals and integers mod a
//! prime) together with the dense linear algebra the rest of the crate is
//! built on: reduced row echelon form, rank, nullspace bases and linear
//! solves, all deterministic and exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactFieldError {
    #[error("matrix entries do not all belong to the stated field")]
    FieldMismatch,
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a valid modulus (need an odd prime)")]
    BadModulus(u64),
    #[error("cannot parse scalar from {0:?}")]
    ParseScalar(String),
}

/// Which exact field a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldDesc {
    Rational,
    Fp { p: u64 },
}

/// Default prime modulus: large enough that random configurations behave
/// generically, small enough for fast residue arithmetic.
pub const DEFAULT_PRIME: u64 = 32003;

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= p) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldDesc {
    pub fn validate(&self) -> Result<(), ExactFieldError> {
        match self {
            FieldDesc::Rational => Ok(()),
            FieldDesc::Fp { p } => {
                if *p < 3 || !is_prime_u64(*p) {
                    Err(ExactFieldError::BadModulus(*p))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rational => write!(f, "rational"),
            FieldDesc::Fp { p } => write!(f, "fp:{p}"),
        }
    }
}

/// An exact field element: a reduced rational or a residue in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Square root mod an odd prime by Tonelli-Shanks; `None` for non-residues.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks for p = 1 mod 4.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

impl Scalar {
    pub fn field(&self) -> FieldDesc {
        match self {
            Scalar::Rat(_) => FieldDesc::Rational,
            Scalar::Fp { p, .. } => FieldDesc::Fp { p: *p },
        }
    }

    pub fn zero(field: FieldDesc) -> Scalar {
        match field {
            FieldDesc::Rational => Scalar::Rat(BigRational::zero()),
            FieldDesc::Fp { p } => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(field: FieldDesc) -> Scalar {
        match field {
            FieldDesc::Rational => Scalar::Rat(BigRational::one()),
            FieldDesc::Fp { p } => Scalar::Fp { v: 1 % p, p },
        }
    }

    pub fn from_i64(field: FieldDesc, v: i64) -> Scalar {
        match field {
            FieldDesc::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldDesc::Fp { p } => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Fp { v: r, p }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, p } => *v == 1 % p,
        }
    }

    fn check_same(&self, rhs: &Scalar) {
        assert_eq!(
            self.field(),
            rhs.field(),
            "scalar arithmetic across distinct fields"
        );
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: (a + b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: (a + p - b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: mulmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: powmod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv().expect("division by zero scalar"))
    }

    /// An exact square root in the field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Fp { v, p } => sqrt_mod_p(*v, *p).map(|r| Scalar::Fp { v: r, p: *p }),
            Scalar::Rat(r) => {
                if r.is_zero() {
                    return Some(Scalar::zero(FieldDesc::Rational));
                }
                if r.is_negative() {
                    return None;
                }
                let (n, d) = (r.numer(), r.denom());
                let sn = n.sqrt();
                let sd = d.sqrt();
                if &(&sn * &sn) == n && &(&sd * &sd) == d {
                    Some(Scalar::Rat(BigRational::new(sn, sd)))
                } else {
                    None
                }
            }
        }
    }

    /// Reduce a rational scalar mod p; `None` if p divides the denominator.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Fp { .. } => None,
            Scalar::Rat(r) => {
                let pb = BigInt::from(p);
                let den = r.denom().mod_floor(&pb);
                if den.is_zero() {
                    return None;
                }
                let num = r.numer().mod_floor(&pb);
                let num_u: u64 = num.try_into().ok()?;
                let den_u: u64 = den.try_into().ok()?;
                Some(Scalar::Fp {
                    v: mulmod(num_u, powmod(den_u, p - 2, p), p),
                    p,
                })
            }
        }
    }

    pub fn parse(field: FieldDesc, s: &str) -> Result<Scalar, ExactFieldError> {
        let s = s.trim();
        let bad = || ExactFieldError::ParseScalar(s.to_string());
        match field {
            FieldDesc::Rational => {
                if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    Ok(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    let n: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(Scalar::Rat(BigRational::from_integer(n)))
                }
            }
            FieldDesc::Fp { p } => {
                let v: i128 = s.parse().map_err(|_| bad())?;
                Ok(Scalar::Fp {
                    v: v.rem_euclid(p as i128) as u64,
                    p,
                })
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Dense row-major matrix over a single exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    field: FieldDesc,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(
        field: FieldDesc,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Matrix, ExactFieldError> {
        if entries.len() != rows * cols {
            return Err(ExactFieldError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(ExactFieldError::FieldMismatch);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(field: FieldDesc, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldDesc, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    /// Build from row vectors; `cols` is explicit so zero-row matrices are
    /// representable.
    pub fn from_rows(
        field: FieldDesc,
        cols: usize,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Matrix, ExactFieldError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(ExactFieldError::DimensionMismatch(format!(
                    "row length {} != {}",
                    r.len(),
                    cols
                )));
            }
            entries.extend(r);
        }
        Matrix::new(field, nrows, cols, entries)
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, ExactFieldError> {
        if self.field != rhs.field {
            return Err(ExactFieldError::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(ExactFieldError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, ExactFieldError> {
        if v.len() != self.cols {
            return Err(ExactFieldError::DimensionMismatch(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols
            )));
        }
        if v.iter().any(|x| x.field() != self.field) {
            return Err(ExactFieldError::FieldMismatch);
        }
        let mut out = vec![Scalar::zero(self.field); self.rows];
        for i in 0..self.rows {
            let mut acc = Scalar::zero(self.field);
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    acc = acc.add(&a.mul(&v[j]));
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Reduced row echelon form with the pivot columns. Deterministic:
    /// leftmost pivot column, first nonzero row from the top.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut piv = None;
            for i in r..m.rows {
                if !m.get(i, c).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(pr) = piv else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right nullspace: one vector per free column,
    /// with a leading 1 in that free coordinate.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![Scalar::zero(self.field); self.cols];
            v[f] = Scalar::one(self.field);
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(pi, f).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, ExactFieldError> {
        if b.len() != self.rows {
            return Err(ExactFieldError::DimensionMismatch(format!(
                "rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        if b.iter().any(|x| x.field() != self.field) {
            return Err(ExactFieldError::FieldMismatch);
        }
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(pi, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Matrix>, ExactFieldError> {
        if self.rows != self.cols {
            return Err(ExactFieldError::DimensionMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one(self.field));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return Ok(None);
        }
        let mut inv = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(Some(inv))
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, ExactFieldError> {
        if self.field != other.field {
            return Err(ExactFieldError::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(ExactFieldError::DimensionMismatch(format!(
                "vstack {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix::new(self.field, self.rows + other.rows, self.cols, entries)
    }
}
