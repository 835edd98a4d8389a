//! Sparse multivariate polynomials, their tensor squares, and the Hopf
//! structure (comultiplication and counit) of `k[x]` and `k[x, y, z]`.
//!
//! Comultiplication of a monomial is computed as the product of the images
//! of its generators. The closed binomial/multinomial expansion of that
//! product lives only in the fundamental-relation verifier, so the two
//! verifiers in [`crate::rep`] do not share arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalars::{FieldSpec, Scalar};

/// Exponent vector of a monomial; its length is the number of variables.
pub type Exponent = Vec<u32>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// The additive group, represented by `k[x]` with `x` primitive.
    Ga,
    /// The Heisenberg group, represented by `k[x, y, z]` with
    /// `Δz = z⊗1 + x⊗y + 1⊗z`.
    H1,
}

impl GroupKind {
    pub fn arity(self) -> usize {
        match self {
            GroupKind::Ga => 1,
            GroupKind::H1 => 3,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Ga" => Ok(GroupKind::Ga),
            "H1" => Ok(GroupKind::H1),
            _ => Err(Error::Parse(format!("unknown group '{s}', expected Ga or H1"))),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Ga => "Ga",
            GroupKind::H1 => "H1",
        })
    }
}

/// A finitely supported map from exponent vectors to nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl SparsePolynomial {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        SparsePolynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn monomial(field: FieldSpec, exponent: Exponent, coeff: Scalar) -> Self {
        let mut p = Self::zero(field, exponent.len());
        p.add_term(exponent, coeff);
        p
    }

    /// The `i`-th variable.
    pub fn variable(field: FieldSpec, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &[u32]) -> Scalar {
        self.terms.get(exponent).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Adds `coeff · x^exponent` in place, keeping the canonical form.
    pub fn add_term(&mut self, exponent: Exponent, coeff: Scalar) {
        assert_eq!(exponent.len(), self.nvars, "exponent arity");
        assert_eq!(coeff.field(), self.field, "coefficient field");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field, self.nvars);
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

    /// Substitutes `v ↦ v^q` for every variable.
    pub fn inflate(&self, q: u32) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (e, v) in &self.terms {
            out.terms.insert(e.iter().map(|&k| k * q).collect(), v.clone());
        }
        out
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.field, other.field, "polynomial field mismatch");
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
    }
}

impl<'a> Add<&'a SparsePolynomial> for &'a SparsePolynomial {
    type Output = SparsePolynomial;

    fn add(self, rhs: &'a SparsePolynomial) -> SparsePolynomial {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl<'a> Sub<&'a SparsePolynomial> for &'a SparsePolynomial {
    type Output = SparsePolynomial;

    fn sub(self, rhs: &'a SparsePolynomial) -> SparsePolynomial {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), -v);
        }
        out
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn neg(self) -> SparsePolynomial {
        self.scale(&-&self.field.one())
    }
}

impl<'a> Mul<&'a SparsePolynomial> for &'a SparsePolynomial {
    type Output = SparsePolynomial;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &'a SparsePolynomial) -> SparsePolynomial {
        self.check_compatible(rhs);
        let mut out = SparsePolynomial::zero(self.field, self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, va * vb);
            }
        }
        out
    }
}

fn variable_names(nvars: usize) -> Vec<String> {
    match nvars {
        1 => vec!["x".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], names: &[String]) -> fmt::Result {
    let mut any = false;
    for (k, name) in e.iter().zip(names) {
        match k {
            0 => {}
            1 => {
                f.write_str(name)?;
                any = true;
            }
            _ => {
                write!(f, "{name}^{k}")?;
                any = true;
            }
        }
    }
    if !any {
        f.write_str("1")?;
    }
    Ok(())
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Scalar, constant: bool) -> fmt::Result {
    if constant {
        write!(f, "{c}")
    } else if c.is_one() {
        Ok(())
    } else {
        write!(f, "{c}*")
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = variable_names(self.nvars);
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let constant = e.iter().all(|&k| k == 0);
            write_coeff(f, c, constant)?;
            if !constant {
                write_monomial(f, e, &names)?;
            }
        }
        Ok(())
    }
}

/// An element of `A ⊗ A`, stored as a polynomial in twice the variables: the
/// first `arity` exponents belong to the left factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPolynomial {
    arity: usize,
    inner: SparsePolynomial,
}

impl TensorPolynomial {
    pub fn zero(field: FieldSpec, arity: usize) -> Self {
        TensorPolynomial { arity, inner: SparsePolynomial::zero(field, 2 * arity) }
    }

    pub fn one(field: FieldSpec, arity: usize) -> Self {
        TensorPolynomial { arity, inner: SparsePolynomial::one(field, 2 * arity) }
    }

    /// `a ⊗ b`.
    pub fn tensor(a: &SparsePolynomial, b: &SparsePolynomial) -> Self {
        a.check_compatible(b);
        let arity = a.nvars();
        let mut inner = SparsePolynomial::zero(a.field(), 2 * arity);
        for (ea, va) in a.terms() {
            for (eb, vb) in b.terms() {
                let e: Exponent = ea.iter().chain(eb.iter()).copied().collect();
                inner.add_term(e, va * vb);
            }
        }
        TensorPolynomial { arity, inner }
    }

    pub fn field(&self) -> FieldSpec {
        self.inner.field()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Terms as `(left exponent, right exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &Scalar)> {
        let a = self.arity;
        self.inner.terms().map(move |(e, c)| (&e[..a], &e[a..], c))
    }

    pub fn coeff(&self, left: &[u32], right: &[u32]) -> Scalar {
        let e: Exponent = left.iter().chain(right).copied().collect();
        self.inner.coeff(&e)
    }

    pub fn add_term(&mut self, left: &[u32], right: &[u32], coeff: Scalar) {
        let e: Exponent = left.iter().chain(right).copied().collect();
        self.inner.add_term(e, coeff);
    }

    pub fn as_polynomial(&self) -> &SparsePolynomial {
        &self.inner
    }

    /// `(id ⊗ ε)`: keeps the terms whose right factor is constant.
    pub fn counit_right(&self) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.field(), self.arity);
        for (l, r, c) in self.terms() {
            if r.iter().all(|&k| k == 0) {
                out.add_term(l.to_vec(), c.clone());
            }
        }
        out
    }

    /// `(ε ⊗ id)`: keeps the terms whose left factor is constant.
    pub fn counit_left(&self) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.field(), self.arity);
        for (l, r, c) in self.terms() {
            if l.iter().all(|&k| k == 0) {
                out.add_term(r.to_vec(), c.clone());
            }
        }
        out
    }
}

impl<'a> Add<&'a TensorPolynomial> for &'a TensorPolynomial {
    type Output = TensorPolynomial;

    fn add(self, rhs: &'a TensorPolynomial) -> TensorPolynomial {
        TensorPolynomial { arity: self.arity, inner: &self.inner + &rhs.inner }
    }
}

impl<'a> Sub<&'a TensorPolynomial> for &'a TensorPolynomial {
    type Output = TensorPolynomial;

    fn sub(self, rhs: &'a TensorPolynomial) -> TensorPolynomial {
        TensorPolynomial { arity: self.arity, inner: &self.inner - &rhs.inner }
    }
}

impl<'a> Mul<&'a TensorPolynomial> for &'a TensorPolynomial {
    type Output = TensorPolynomial;

    fn mul(self, rhs: &'a TensorPolynomial) -> TensorPolynomial {
        TensorPolynomial { arity: self.arity, inner: &self.inner * &rhs.inner }
    }
}

impl fmt::Display for TensorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = variable_names(self.arity);
        for (i, (l, r, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_coeff(f, c, false)?;
            write_monomial(f, l, &names)?;
            f.write_str("⊗")?;
            write_monomial(f, r, &names)?;
        }
        Ok(())
    }
}

/// Images of the group's generators under `Δ`.
fn generator_images(group: GroupKind, field: FieldSpec) -> Vec<TensorPolynomial> {
    let n = group.arity();
    let var = |i: usize| SparsePolynomial::variable(field, n, i);
    let one = SparsePolynomial::one(field, n);
    let primitive = |i: usize| &TensorPolynomial::tensor(&var(i), &one) + &TensorPolynomial::tensor(&one, &var(i));
    match group {
        GroupKind::Ga => vec![primitive(0)],
        GroupKind::H1 => {
            let z = &primitive(2) + &TensorPolynomial::tensor(&var(0), &var(1));
            vec![primitive(0), primitive(1), z]
        }
    }
}

/// Applies `Δ`, caching generator powers and monomial images across calls.
pub struct Comultiplier {
    group: GroupKind,
    field: FieldSpec,
    generators: Vec<TensorPolynomial>,
    powers: Vec<Vec<TensorPolynomial>>,
    monomials: HashMap<Exponent, TensorPolynomial>,
}

impl Comultiplier {
    pub fn new(group: GroupKind, field: FieldSpec) -> Self {
        let generators = generator_images(group, field);
        let powers = generators
            .iter()
            .map(|_| vec![TensorPolynomial::one(field, group.arity())])
            .collect();
        Comultiplier { group, field, generators, powers, monomials: HashMap::new() }
    }

    fn generator_power(&mut self, i: usize, k: u32) -> &TensorPolynomial {
        while self.powers[i].len() <= k as usize {
            let next = self.powers[i].last().unwrap() * &self.generators[i];
            self.powers[i].push(next);
        }
        &self.powers[i][k as usize]
    }

    /// `Δ(x^e)` as the product of generator powers.
    pub fn monomial(&mut self, e: &[u32]) -> TensorPolynomial {
        if let Some(t) = self.monomials.get(e) {
            return t.clone();
        }
        let mut acc = TensorPolynomial::one(self.field, self.group.arity());
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                acc = &acc * &self.generator_power(i, k).clone();
            }
        }
        self.monomials.insert(e.to_vec(), acc.clone());
        acc
    }

    pub fn apply(&mut self, f: &SparsePolynomial) -> Result<TensorPolynomial> {
        if f.nvars() != self.group.arity() {
            return Err(Error::ArityMismatch { expected: self.group.arity(), found: f.nvars() });
        }
        if f.field() != self.field {
            return Err(Error::FieldMismatch(self.field, f.field()));
        }
        let mut out = TensorPolynomial::zero(self.field, self.group.arity());
        for (e, c) in f.terms() {
            let image = self.monomial(e);
            for (l, r, v) in image.terms() {
                out.add_term(l, r, v * c);
            }
        }
        Ok(out)
    }
}

pub fn comultiply(f: &SparsePolynomial, group: GroupKind) -> Result<TensorPolynomial> {
    Comultiplier::new(group, f.field()).apply(f)
}

/// The counit: evaluation at the identity, i.e. the constant term.
pub fn counit(f: &SparsePolynomial) -> Scalar {
    f.coeff(&vec![0; f.nvars()])
}
