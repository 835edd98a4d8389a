//! Dense exact matrices over a [`FieldSpec`], and matrices with polynomial
//! entries for the exponential forms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;
use crate::scalars::{FieldSpec, Scalar};

/// A dense `d × d` matrix of scalars from a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: FieldSpec,
    dim: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        ExactMatrix { field, dim, data: vec![field.zero(); dim * dim] }
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        let mut m = Self::zero(field, dim);
        for i in 0..dim {
            m.data[i * dim + i] = field.one();
        }
        m
    }

    /// Matrix unit `E_ij` with 0-based indices.
    pub fn unit(field: FieldSpec, dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(field, dim);
        m.set(i, j, field.one());
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(dim, row.len()));
            }
            for v in row {
                if v.field() != field {
                    return Err(Error::FieldMismatch(field, v.field()));
                }
                data.push(v);
            }
        }
        Ok(ExactMatrix { field, dim, data })
    }

    /// Convenience constructor from small integers, reduced into `field`.
    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows).expect("square integer matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field");
        self.data[i * self.dim + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field, self.dim)
    }

    /// Nonzero entries as `(row, col, value)`, 0-based, row-major.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        let d = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / d, k % d, v))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ExactMatrix { field: self.field, dim: self.dim, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.field, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let d = self.dim + other.dim;
        let mut out = Self::zero(self.field, d);
        for (i, j, v) in self.nonzero_entries() {
            out.set(i, j, v.clone());
        }
        for (i, j, v) in other.nonzero_entries() {
            out.set(self.dim + i, self.dim + j, v.clone());
        }
        out
    }

    /// Kronecker product; index `(i1, i2)` maps to `i1 * other.dim + i2`.
    pub fn kronecker(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut out = Self::zero(self.field, d);
        for (i1, j1, a) in self.nonzero_entries() {
            for (i2, j2, b) in other.nonzero_entries() {
                out.set(i1 * other.dim + i2, j1 * other.dim + j2, a * b);
            }
        }
        out
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(self.field, d);
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::Contract("matrix is singular".into()))?;
            if pivot != col {
                for j in 0..d {
                    a.data.swap(pivot * d + j, col * d + j);
                    inv.data.swap(pivot * d + j, col * d + j);
                }
            }
            let scale = a.get(col, col).inv()?;
            for j in 0..d {
                a.data[col * d + j] = a.get(col, j) * &scale;
                inv.data[col * d + j] = inv.get(col, j) * &scale;
            }
            for r in 0..d {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..d {
                    a.data[r * d + j] = a.get(r, j) - &(&factor * a.get(col, j));
                    inv.data[r * d + j] = inv.get(r, j) - &(&factor * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        assert_eq!(self.field, rhs.field, "matrix field mismatch");
        let d = self.dim;
        let mut out = ExactMatrix::zero(self.field, d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * d + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ExactMatrix { field: self.field, dim: self.dim, data }
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ExactMatrix { field: self.field, dim: self.dim, data }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;

    fn neg(self) -> ExactMatrix {
        ExactMatrix { field: self.field, dim: self.dim, data: self.data.iter().map(|v| -v).collect() }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 ({0}x{0})", self.dim);
        }
        f.write_str("{")?;
        for (n, (i, j, v)) in self.nonzero_entries().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{}):{}", i + 1, j + 1, v)?;
        }
        f.write_str("}")
    }
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    a.check_compatible(b)?;
    Ok(&(a * b) - &(b * a))
}

/// Least `N ≥ 1` with `A^N = 0`. A nilpotent `d × d` matrix has `A^d = 0`,
/// which is checked first by repeated squaring.
pub fn nilpotency_index(a: &ExactMatrix) -> Result<usize> {
    let d = a.dim();
    let mut sq = a.clone();
    let mut e = 1usize;
    while e < d {
        sq = &sq * &sq;
        e *= 2;
    }
    if !sq.is_zero() {
        return Err(Error::NotNilpotent);
    }
    let mut power = a.clone();
    for n in 1..=d.max(1) {
        if power.is_zero() {
            return Ok(n);
        }
        power = &power * a;
    }
    Err(Error::NotNilpotent)
}

/// A square matrix whose entries are polynomials over a common field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: FieldSpec,
    nvars: usize,
    dim: usize,
    entries: Vec<SparsePolynomial>,
}

impl PolyMatrix {
    pub fn zero(field: FieldSpec, nvars: usize, dim: usize) -> Self {
        PolyMatrix { field, nvars, dim, entries: vec![SparsePolynomial::zero(field, nvars); dim * dim] }
    }

    pub fn identity(field: FieldSpec, nvars: usize, dim: usize) -> Self {
        let mut m = Self::zero(field, nvars, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = SparsePolynomial::one(field, nvars);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<SparsePolynomial>>) -> Result<Self> {
        let dim = rows.len();
        let first = rows
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::Contract("empty polynomial matrix".into()))?;
        let (field, nvars) = (first.field(), first.nvars());
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(dim, row.len()));
            }
            for p in row {
                if p.field() != field {
                    return Err(Error::FieldMismatch(field, p.field()));
                }
                if p.nvars() != nvars {
                    return Err(Error::ArityMismatch { expected: nvars, found: p.nvars() });
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { field, nvars, dim, entries })
    }

    /// `poly · matrix`.
    pub fn from_scaled(poly: &SparsePolynomial, m: &ExactMatrix) -> Self {
        assert_eq!(poly.field(), m.field(), "field mismatch");
        let mut out = Self::zero(m.field(), poly.nvars(), m.dim());
        for (i, j, v) in m.nonzero_entries() {
            out.entries[i * m.dim() + j] = poly.scale(v);
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePolynomial {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: SparsePolynomial) {
        assert_eq!(p.field(), self.field);
        assert_eq!(p.nvars(), self.nvars);
        self.entries[i * self.dim + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SparsePolynomial::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PolyMatrix {
            field: self.field,
            nvars: self.nvars,
            dim: self.dim,
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Substitutes `v ↦ v^q` in every entry.
    pub fn inflate(&self, q: u32) -> Self {
        PolyMatrix {
            field: self.field,
            nvars: self.nvars,
            dim: self.dim,
            entries: self.entries.iter().map(|p| p.inflate(q)).collect(),
        }
    }
}

impl<'a> Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;

    fn add(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        PolyMatrix {
            field: self.field,
            nvars: self.nvars,
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;

    fn sub(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        PolyMatrix {
            field: self.field,
            nvars: self.nvars,
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;

    fn mul(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = PolyMatrix::zero(self.field, self.nvars, d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * d + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            f.write_str("[")?;
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// `Σ_{k<d} M^k / k!` for a nilpotent polynomial matrix `M` (`M^d = 0` is
/// verified). In characteristic `p` every `k!` with `k < d` must be a unit.
pub fn truncated_exp(m: &PolyMatrix) -> Result<PolyMatrix> {
    let d = m.dim();
    let field = m.field();
    if let Some(p) = field.as_prime() {
        if d >= 2 && (p.as_u64()) <= (d as u64 - 1) {
            return Err(Error::FactorialNotInvertible(p.as_u64(), p.get()));
        }
    }
    let mut acc = PolyMatrix::identity(field, m.nvars(), d);
    let mut power = PolyMatrix::identity(field, m.nvars(), d);
    for k in 1..d {
        power = &power * m;
        let inv = field.factorial(k as u64).inv()?;
        acc = &acc + &power.scale(&inv);
    }
    let top = if d == 0 { power } else { &power * m };
    if !top.is_zero() {
        return Err(Error::NotNilpotent);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn heisenberg_commutator() {
        let f = f7();
        let e12 = ExactMatrix::unit(f, 3, 0, 1);
        let e23 = ExactMatrix::unit(f, 3, 1, 2);
        assert_eq!(commutator(&e12, &e23).unwrap(), ExactMatrix::unit(f, 3, 0, 2));
        assert!(commutator(&e12, &e12).unwrap().is_zero());
    }

    #[test]
    fn commutator_mismatch() {
        let a = ExactMatrix::zero(f7(), 2);
        let b = ExactMatrix::zero(f7(), 3);
        assert!(matches!(commutator(&a, &b), Err(Error::DimensionMismatch(2, 3))));
        let c = ExactMatrix::zero(FieldSpec::Rational, 2);
        assert!(matches!(commutator(&a, &c), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn nilpotency_examples() {
        let q = FieldSpec::Rational;
        assert_eq!(nilpotency_index(&ExactMatrix::zero(q, 4)).unwrap(), 1);
        assert_eq!(nilpotency_index(&ExactMatrix::unit(q, 2, 0, 1)).unwrap(), 2);
        let shift = ExactMatrix::from_i64_rows(q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(nilpotency_index(&shift).unwrap(), 3);
        assert!(matches!(nilpotency_index(&ExactMatrix::identity(q, 3)), Err(Error::NotNilpotent)));
    }

    #[test]
    fn inverse_round_trip() {
        let q = FieldSpec::Rational;
        let a = ExactMatrix::from_i64_rows(q, &[&[2, 1, 0], &[1, 1, 3], &[0, 5, 1]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        let singular = ExactMatrix::from_i64_rows(q, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn kronecker_and_sum_shapes() {
        let q = FieldSpec::Rational;
        let a = ExactMatrix::unit(q, 2, 0, 1);
        let b = ExactMatrix::identity(q, 3);
        let k = a.kronecker(&b);
        assert_eq!(k.dim(), 6);
        assert_eq!(k.nonzero_entries().count(), 3);
        assert!(k.get(0, 3).is_one());
        let s = a.direct_sum(&b);
        assert_eq!(s.dim(), 5);
        assert!(s.get(4, 4).is_one());
    }

    fn poly_var(field: FieldSpec, nvars: usize, i: usize) -> SparsePolynomial {
        SparsePolynomial::variable(field, nvars, i)
    }

    #[test]
    fn exp_of_single_unit() {
        let q = FieldSpec::Rational;
        let x = poly_var(q, 1, 0);
        let m = PolyMatrix::from_scaled(&x, &ExactMatrix::unit(q, 2, 0, 1));
        let e = truncated_exp(&m).unwrap();
        let expected = &PolyMatrix::identity(q, 1, 2) + &m;
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_of_heisenberg_generator() {
        let f = f7();
        let (x, y, z) = (poly_var(f, 3, 0), poly_var(f, 3, 1), poly_var(f, 3, 2));
        let half = f.ratio(1, 2).unwrap();
        let zt = &z - &(&x * &y).scale(&half);
        let m = &(&PolyMatrix::from_scaled(&x, &ExactMatrix::unit(f, 3, 0, 1))
            + &PolyMatrix::from_scaled(&y, &ExactMatrix::unit(f, 3, 1, 2)))
            + &PolyMatrix::from_scaled(&zt, &ExactMatrix::unit(f, 3, 0, 2));
        let e = truncated_exp(&m).unwrap();
        let mut expected = PolyMatrix::identity(f, 3, 3);
        expected.set(0, 1, x);
        expected.set(1, 2, y);
        expected.set(0, 2, z);
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_of_shift_square_term() {
        let q = FieldSpec::Rational;
        let x = poly_var(q, 1, 0);
        let n = ExactMatrix::from_i64_rows(q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = truncated_exp(&PolyMatrix::from_scaled(&x, &n)).unwrap();
        // I + xN + x^2 N^2 / 2, expanded by hand.
        let x2_half = x.pow(2).scale(&q.ratio(1, 2).unwrap());
        let mut expected = PolyMatrix::identity(q, 1, 3);
        expected.set(0, 1, x.clone());
        expected.set(1, 2, x);
        expected.set(0, 2, x2_half);
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_errors() {
        let q = FieldSpec::Rational;
        let x = poly_var(q, 1, 0);
        let not_nil = PolyMatrix::from_scaled(&x, &ExactMatrix::identity(q, 2));
        assert!(matches!(truncated_exp(&not_nil), Err(Error::NotNilpotent)));
        let f2 = FieldSpec::prime(2).unwrap();
        let x2 = poly_var(f2, 1, 0);
        let m = PolyMatrix::from_scaled(&x2, &ExactMatrix::unit(f2, 3, 0, 1));
        assert!(matches!(truncated_exp(&m), Err(Error::FactorialNotInvertible(..))));
        assert!(truncated_exp(&PolyMatrix::zero(q, 1, 3)).unwrap() == PolyMatrix::identity(q, 1, 3));
    }
}
