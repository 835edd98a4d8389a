//! Representations as coefficient families, the two independent verifiers,
//! Frobenius-layer extraction and layer-relation checking.
//!
//! A representation with polynomial matrix `(a_ij)` is stored as the map
//! `r ↦ c^r`, where `c^r` is the matrix of coefficients of the monomial
//! `x^r` (or `x^r1 y^r2 z^r3`). The comodule verifier expands `Δ(a_ij)`
//! through [`crate::poly::Comultiplier`]; the fundamental-relation verifier
//! works on the `c^r` with closed binomial coefficients. They agree on every
//! input, which the test suites exercise on valid and corrupted families.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{commutator, ExactMatrix, PolyMatrix};
use crate::poly::{counit, Comultiplier, Exponent, GroupKind, SparsePolynomial, TensorPolynomial};
use crate::scalars::{gamma, p_digits, FieldSpec, Prime, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientFamily {
    group: GroupKind,
    field: FieldSpec,
    dim: usize,
    coeffs: BTreeMap<Exponent, ExactMatrix>,
}

impl CoefficientFamily {
    /// The family with no stored coefficients (polynomial matrix zero).
    pub fn empty(group: GroupKind, field: FieldSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Contract("dimension must be positive".into()));
        }
        Ok(CoefficientFamily { group, field, dim, coeffs: BTreeMap::new() })
    }

    /// The trivial representation: only `c^0 = I`.
    pub fn trivial(group: GroupKind, field: FieldSpec, dim: usize) -> Result<Self> {
        let mut f = Self::empty(group, field, dim)?;
        f.insert(vec![0; group.arity()], ExactMatrix::identity(field, dim))?;
        Ok(f)
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stores `c^exponent = m`, replacing any previous value. Zero matrices
    /// are removed rather than stored.
    pub fn insert(&mut self, exponent: Exponent, m: ExactMatrix) -> Result<()> {
        if exponent.len() != self.group.arity() {
            return Err(Error::ArityMismatch { expected: self.group.arity(), found: exponent.len() });
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch(self.field, m.field()));
        }
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, m.dim()));
        }
        if m.is_zero() {
            self.coeffs.remove(&exponent);
        } else {
            self.coeffs.insert(exponent, m);
        }
        Ok(())
    }

    pub fn get(&self, exponent: &[u32]) -> Option<&ExactMatrix> {
        self.coeffs.get(exponent)
    }

    /// `c^exponent`, the zero matrix when absent.
    pub fn coeff(&self, exponent: &[u32]) -> ExactMatrix {
        self.get(exponent).cloned().unwrap_or_else(|| ExactMatrix::zero(self.field, self.dim))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &ExactMatrix)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest single exponent coordinate in the support.
    pub fn max_coordinate(&self) -> u32 {
        self.coeffs.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    /// Reads `c^r[i][j]` off the polynomial entries.
    pub fn from_polynomial_matrix(m: &PolyMatrix, group: GroupKind) -> Result<Self> {
        if m.nvars() != group.arity() {
            return Err(Error::ArityMismatch { expected: group.arity(), found: m.nvars() });
        }
        let (field, d) = (m.field(), m.dim());
        let mut coeffs: BTreeMap<Exponent, ExactMatrix> = BTreeMap::new();
        for i in 0..d {
            for j in 0..d {
                for (e, v) in m.get(i, j).terms() {
                    coeffs
                        .entry(e.clone())
                        .or_insert_with(|| ExactMatrix::zero(field, d))
                        .set(i, j, v.clone());
                }
            }
        }
        let mut f = Self::empty(group, field, d)?;
        f.coeffs = coeffs;
        Ok(f)
    }

    /// `(a_ij) = Σ_r c^r x^r`.
    pub fn to_polynomial_matrix(&self) -> PolyMatrix {
        let n = self.group.arity();
        let mut rows = vec![vec![SparsePolynomial::zero(self.field, n); self.dim]; self.dim];
        for (e, m) in &self.coeffs {
            for (i, j, v) in m.nonzero_entries() {
                rows[i][j].add_term(e.clone(), v.clone());
            }
        }
        PolyMatrix::from_rows(rows).expect("rows are square and uniform")
    }
}

/// Which of the two verified identities, or which layer condition, failed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Site {
    /// `ε(a_ij) ≠ δ_ij`, 0-based.
    Counit { row: usize, col: usize },
    /// `Δ(a_ij) ≠ Σ_k a_ik ⊗ a_kj`, 0-based.
    Coproduct { row: usize, col: usize },
    /// `c^0 ≠ I`.
    IdentityCoefficient,
    /// The product law failed for `c^s c^t`.
    Relation { s: Exponent, t: Exponent },
    /// A layer identity failed.
    Layer { condition: Condition, left: LayerRef, right: LayerRef },
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Counit { row, col } => write!(f, "counit at entry ({},{})", row + 1, col + 1),
            Site::Coproduct { row, col } => write!(f, "coproduct at entry ({},{})", row + 1, col + 1),
            Site::IdentityCoefficient => f.write_str("constant coefficient"),
            Site::Relation { s, t } => write!(f, "relation at s={s:?}, t={t:?}"),
            Site::Layer { condition, left, right } => {
                write!(f, "condition ({}) at ({left},{right})", condition.id())
            }
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::X => "X",
            Letter::Y => "Y",
            Letter::Z => "Z",
        })
    }
}

/// A layer matrix such as `X_1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerRef {
    pub letter: Letter,
    pub layer: usize,
}

impl fmt::Display for LayerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.layer)
    }
}

/// The layer conditions, in checking order.
///
/// Cross-layer commutation of whole triples decomposes exactly into (b) and
/// (e) for distinct layers together with (c), so it has no separate id.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// (a) every layer matrix is nilpotent within the bound (`p` for
    /// extracted layers, `d` for construction data).
    Nilpotent,
    /// (b) `[X_m, X_n] = [Y_m, Y_n] = [Z_m, Z_n] = 0`.
    SameLetterCommute,
    /// (c) `[Z_n, X_m] = [Z_n, Y_m] = 0` for all `n, m`.
    CentralCommute,
    /// (d) `[X_m, Y_m] = Z_m`.
    Bracket,
    /// (e) `[X_n, Y_m] = 0` for `n ≠ m`.
    CrossCommute,
}

impl Condition {
    pub fn id(self) -> char {
        match self {
            Condition::Nilpotent => 'a',
            Condition::SameLetterCommute => 'b',
            Condition::CentralCommute => 'c',
            Condition::Bracket => 'd',
            Condition::CrossCommute => 'e',
        }
    }

    pub fn from_id(c: char) -> Option<Self> {
        Some(match c {
            'a' => Condition::Nilpotent,
            'b' => Condition::SameLetterCommute,
            'c' => Condition::CentralCommute,
            'd' => Condition::Bracket,
            'e' => Condition::CrossCommute,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    None,
    Scalar(Scalar),
    Matrix(ExactMatrix),
    Tensor(TensorPolynomial),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::None => f.write_str("-"),
            Evidence::Scalar(s) => s.fmt(f),
            Evidence::Matrix(m) => m.fmt(f),
            Evidence::Tensor(t) => t.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub site: Site,
    pub lhs: Evidence,
    pub rhs: Evidence,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    ok: bool,
    violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        VerificationReport { ok: violations.is_empty(), violations }
    }

    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn into_violations(self) -> Vec<Violation> {
        self.violations
    }

    /// Combines two reports, keeping violations in order.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.violations.extend(other.violations);
        self.ok = self.violations.is_empty();
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("ok");
        }
        writeln!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.site, v.description)?;
            writeln!(f, "    lhs = {}", v.lhs)?;
            writeln!(f, "    rhs = {}", v.rhs)?;
        }
        Ok(())
    }
}

/// Checks `Δ(a_ij) = Σ_k a_ik ⊗ a_kj` and `ε(a_ij) = δ_ij` entry by entry.
pub fn verify_comodule_axioms(f: &CoefficientFamily) -> VerificationReport {
    let m = f.to_polynomial_matrix();
    let d = f.dim();
    let field = f.field();
    let mut delta = Comultiplier::new(f.group(), field);
    let mut violations = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let eps = counit(m.get(i, j));
            let expected = if i == j { field.one() } else { field.zero() };
            if eps != expected {
                violations.push(Violation {
                    site: Site::Counit { row: i, col: j },
                    lhs: Evidence::Scalar(eps),
                    rhs: Evidence::Scalar(expected),
                    description: "counit of entry differs from the identity".into(),
                });
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            let lhs = delta.apply(m.get(i, j)).expect("entries share the family's arity");
            let mut rhs = TensorPolynomial::zero(field, f.group().arity());
            for k in 0..d {
                let (a, b) = (m.get(i, k), m.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    rhs = &rhs + &TensorPolynomial::tensor(a, b);
                }
            }
            if lhs != rhs {
                violations.push(Violation {
                    site: Site::Coproduct { row: i, col: j },
                    lhs: Evidence::Tensor(lhs),
                    rhs: Evidence::Tensor(rhs),
                    description: "comultiplied entry differs from the matrix coproduct".into(),
                });
            }
        }
    }
    VerificationReport::from_violations(violations)
}

fn check_identity_coefficient(f: &CoefficientFamily, out: &mut Vec<Violation>) {
    let c0 = f.coeff(&vec![0; f.group().arity()]);
    if !c0.is_identity() {
        out.push(Violation {
            site: Site::IdentityCoefficient,
            lhs: Evidence::Matrix(c0),
            rhs: Evidence::Matrix(ExactMatrix::identity(f.field(), f.dim())),
            description: "c^0 is not the identity".into(),
        });
    }
}

fn require_group(f: &CoefficientFamily, group: GroupKind) -> Result<()> {
    if f.group() != group {
        return Err(Error::WrongGroup { expected: group, found: f.group() });
    }
    Ok(())
}

/// Checks `c^0 = I` and `c^r c^s = C(r+s, r) c^(r+s)`.
///
/// Only pairs where some side can be nonzero are visited: pairs with both
/// exponents in the support, and splittings `r + s = u` of support elements
/// `u`. Every other pair has both sides zero.
pub fn verify_fundamental_relation_ga(f: &CoefficientFamily) -> Result<VerificationReport> {
    require_group(f, GroupKind::Ga)?;
    let mut violations = Vec::new();
    check_identity_coefficient(f, &mut violations);
    let support: Vec<u32> = f.support().map(|e| e[0]).collect();
    let mut pairs = BTreeSet::new();
    for &r in &support {
        for &s in &support {
            pairs.insert((r, s));
        }
    }
    for &u in &support {
        for r in 0..=u {
            pairs.insert((r, u - r));
        }
    }
    let field = f.field();
    for (r, s) in pairs {
        let lhs = match (f.get(&[r]), f.get(&[s])) {
            (Some(a), Some(b)) => a * b,
            _ => ExactMatrix::zero(field, f.dim()),
        };
        let rhs = match f.get(&[r + s]) {
            Some(c) => c.scale(&field.binomial((r + s) as u64, r as u64)),
            None => ExactMatrix::zero(field, f.dim()),
        };
        if lhs != rhs {
            violations.push(Violation {
                site: Site::Relation { s: vec![r], t: vec![s] },
                lhs: Evidence::Matrix(lhs),
                rhs: Evidence::Matrix(rhs),
                description: format!("c^{r} c^{s} != C({},{r}) c^{}", r + s, r + s),
            });
        }
    }
    Ok(VerificationReport::from_violations(violations))
}

/// Coefficient of `c^(s+t+(-l,-l,l))` in the Heisenberg product law.
fn h1_relation_coefficient(field: FieldSpec, s: &[u32], t: &[u32], l: u32) -> Scalar {
    let b1 = field.binomial((s[0] + t[0] - l) as u64, t[0] as u64);
    if b1.is_zero() {
        return b1;
    }
    let b2 = field.binomial((s[1] + t[1] - l) as u64, s[1] as u64);
    if b2.is_zero() {
        return b2;
    }
    let m = field.multinomial(&[s[2] as u64, t[2] as u64, l as u64]);
    &(&b1 * &b2) * &m
}

/// The right-hand side `Σ_l (coefficient) c^(s+t+(-l,-l,l))`, or `None` when
/// every term vanishes because no target exponent is stored.
fn h1_relation_rhs(f: &CoefficientFamily, s: &[u32], t: &[u32]) -> Option<ExactMatrix> {
    let field = f.field();
    let mut acc: Option<ExactMatrix> = None;
    for l in 0..=s[0].min(t[1]) {
        let target = [s[0] + t[0] - l, s[1] + t[1] - l, s[2] + t[2] + l];
        let Some(c) = f.get(&target) else { continue };
        let coef = h1_relation_coefficient(field, s, t, l);
        let term = c.scale(&coef);
        acc = Some(match acc {
            Some(a) => &a + &term,
            None => term,
        });
    }
    acc
}

/// Checks `c^(0,0,0) = I` and, for all `s, t`,
/// `c^s c^t = Σ_{l ≤ min(s1,t2)} C(s1+t1−l, t1) C(s2+t2−l, s2)
/// C(s3+t3+l; s3, t3, l) c^(s+t+(−l,−l,l))`.
///
/// Pairs visited: both exponents in the support, plus every splitting
/// `s + t = u + (l, l, −l)` with `l ≤ min(s1, t2)` of a support element `u`.
/// Any other pair has a zero product and no stored target exponent.
pub fn verify_fundamental_relation_h1(f: &CoefficientFamily) -> Result<VerificationReport> {
    require_group(f, GroupKind::H1)?;
    let mut violations = Vec::new();
    check_identity_coefficient(f, &mut violations);
    let support: Vec<&Exponent> = f.support().collect();
    let mut pairs: BTreeSet<(Exponent, Exponent)> = BTreeSet::new();
    for s in &support {
        for t in &support {
            pairs.insert(((*s).clone(), (*t).clone()));
        }
    }
    for u in &support {
        for l in 0..=u[2] {
            let w = [u[0] + l, u[1] + l, u[2] - l];
            for s1 in l..=w[0] {
                for s2 in 0..=(w[1] - l) {
                    for s3 in 0..=w[2] {
                        let s = vec![s1, s2, s3];
                        let t = vec![w[0] - s1, w[1] - s2, w[2] - s3];
                        pairs.insert((s, t));
                    }
                }
            }
        }
    }
    let field = f.field();
    for (s, t) in pairs {
        let lhs = match (f.get(&s), f.get(&t)) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        let rhs = h1_relation_rhs(f, &s, &t);
        let holds = match (&lhs, &rhs) {
            (None, None) => true,
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (Some(a), Some(b)) => a == b,
        };
        if !holds {
            let zero = || ExactMatrix::zero(field, f.dim());
            violations.push(Violation {
                description: format!("c^{s:?} c^{t:?} differs from the expanded product"),
                site: Site::Relation { s, t },
                lhs: Evidence::Matrix(lhs.unwrap_or_else(zero)),
                rhs: Evidence::Matrix(rhs.unwrap_or_else(zero)),
            });
        }
    }
    Ok(VerificationReport::from_violations(violations))
}

/// Dispatches to the product law of the family's group.
pub fn verify_fundamental_relation(f: &CoefficientFamily) -> VerificationReport {
    match f.group() {
        GroupKind::Ga => verify_fundamental_relation_ga(f),
        GroupKind::H1 => verify_fundamental_relation_h1(f),
    }
    .expect("group matches")
}

/// One Frobenius layer `(X_m, Y_m, Z_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerTriple {
    pub x: ExactMatrix,
    pub y: ExactMatrix,
    pub z: ExactMatrix,
}

impl LayerTriple {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        let z = ExactMatrix::zero(field, dim);
        LayerTriple { x: z.clone(), y: z.clone(), z }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn letter(&self, letter: Letter) -> &ExactMatrix {
        match letter {
            Letter::X => &self.x,
            Letter::Y => &self.y,
            Letter::Z => &self.z,
        }
    }
}

/// Layers `X_m = c^(p^m,0,0)`, `Y_m = c^(0,p^m,0)`, `Z_m = c^(0,0,p^m)` of a
/// characteristic-`p` family, trailing zero layers trimmed. For `G_a` only
/// `X_m` is meaningful; `Y_m` and `Z_m` are stored as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusLayers {
    pub p: Prime,
    pub dim: usize,
    pub group: GroupKind,
    pub layers: Vec<LayerTriple>,
}

impl FrobeniusLayers {
    pub fn field(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    /// `P_(r) = Γ(r)^{-1} P_0^{r_0} ⋯ P_k^{r_k}` rebuilt from the layers.
    pub fn divided_power(&self, letter: Letter, r: u64) -> ExactMatrix {
        let field = self.field();
        let mut acc = ExactMatrix::identity(field, self.dim);
        for (i, &digit) in p_digits(r, self.p).digits().iter().enumerate() {
            if digit == 0 {
                continue;
            }
            match self.layers.get(i) {
                Some(t) => acc = &acc * &t.letter(letter).pow(digit as u64),
                None => return ExactMatrix::zero(field, self.dim),
            }
        }
        acc.scale(&gamma(r, self.p).inv().expect("Γ is a unit"))
    }
}

pub fn extract_layers(f: &CoefficientFamily) -> Result<FrobeniusLayers> {
    let p = f
        .field()
        .as_prime()
        .ok_or_else(|| Error::InvalidField("Frobenius layers need a prime field".into()))?;
    let max = f.max_coordinate() as u64;
    let mut layers = Vec::new();
    let mut q = 1u64;
    while q <= max {
        let qe = q as u32;
        let triple = match f.group() {
            GroupKind::Ga => LayerTriple {
                x: f.coeff(&[qe]),
                y: ExactMatrix::zero(f.field(), f.dim()),
                z: ExactMatrix::zero(f.field(), f.dim()),
            },
            GroupKind::H1 => LayerTriple {
                x: f.coeff(&[qe, 0, 0]),
                y: f.coeff(&[0, qe, 0]),
                z: f.coeff(&[0, 0, qe]),
            },
        };
        layers.push(triple);
        q *= p.as_u64();
    }
    while layers.last().is_some_and(LayerTriple::is_zero) {
        layers.pop();
    }
    Ok(FrobeniusLayers { p, dim: f.dim(), group: f.group(), layers })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Stop at the first failed identity.
    Strict,
    /// Enumerate every failed identity.
    Report,
}

fn layer_ref(letter: Letter, layer: usize) -> LayerRef {
    LayerRef { letter, layer }
}

/// Checks conditions (a)–(e) on a list of layer triples. `nilpotent_bound`
/// is the exponent `N` required to kill each matrix in (a).
pub(crate) fn check_triples(
    triples: &[LayerTriple],
    nilpotent_bound: u64,
    mode: CheckMode,
) -> VerificationReport {
    let mut out = Vec::new();
    let strict = mode == CheckMode::Strict;
    macro_rules! push {
        ($v:expr) => {{
            out.push($v);
            if strict {
                return VerificationReport::from_violations(out);
            }
        }};
    }
    let letters = [Letter::X, Letter::Y, Letter::Z];
    let bracket = |a: &ExactMatrix, b: &ExactMatrix| commutator(a, b).expect("uniform layers");

    for (m, t) in triples.iter().enumerate() {
        for letter in letters {
            let power = t.letter(letter).pow(nilpotent_bound);
            if !power.is_zero() {
                push!(Violation {
                    site: Site::Layer {
                        condition: Condition::Nilpotent,
                        left: layer_ref(letter, m),
                        right: layer_ref(letter, m),
                    },
                    lhs: Evidence::Matrix(power),
                    rhs: Evidence::None,
                    description: format!("{letter}{m}^{nilpotent_bound} != 0"),
                });
            }
        }
    }
    for m in 0..triples.len() {
        for n in (m + 1)..triples.len() {
            for letter in letters {
                let c = bracket(triples[m].letter(letter), triples[n].letter(letter));
                if !c.is_zero() {
                    push!(Violation {
                        site: Site::Layer {
                            condition: Condition::SameLetterCommute,
                            left: layer_ref(letter, m),
                            right: layer_ref(letter, n),
                        },
                        lhs: Evidence::Matrix(c),
                        rhs: Evidence::None,
                        description: format!("[{letter}{m},{letter}{n}] != 0"),
                    });
                }
            }
        }
    }
    for n in 0..triples.len() {
        for m in 0..triples.len() {
            for letter in [Letter::X, Letter::Y] {
                let c = bracket(&triples[n].z, triples[m].letter(letter));
                if !c.is_zero() {
                    push!(Violation {
                        site: Site::Layer {
                            condition: Condition::CentralCommute,
                            left: layer_ref(Letter::Z, n),
                            right: layer_ref(letter, m),
                        },
                        lhs: Evidence::Matrix(c),
                        rhs: Evidence::None,
                        description: format!("[Z{n},{letter}{m}] != 0"),
                    });
                }
            }
        }
    }
    for (m, t) in triples.iter().enumerate() {
        let c = bracket(&t.x, &t.y);
        if c != t.z {
            push!(Violation {
                site: Site::Layer {
                    condition: Condition::Bracket,
                    left: layer_ref(Letter::X, m),
                    right: layer_ref(Letter::Y, m),
                },
                lhs: Evidence::Matrix(c),
                rhs: Evidence::Matrix(t.z.clone()),
                description: format!("[X{m},Y{m}] != Z{m}"),
            });
        }
    }
    for n in 0..triples.len() {
        for m in 0..triples.len() {
            if n == m {
                continue;
            }
            let c = bracket(&triples[n].x, &triples[m].y);
            if !c.is_zero() {
                push!(Violation {
                    site: Site::Layer {
                        condition: Condition::CrossCommute,
                        left: layer_ref(Letter::X, n),
                        right: layer_ref(Letter::Y, m),
                    },
                    lhs: Evidence::Matrix(c),
                    rhs: Evidence::None,
                    description: format!("[X{n},Y{m}] != 0"),
                });
            }
        }
    }
    VerificationReport::from_violations(out)
}

/// Checks the layer conditions: (a) `p`-nilpotency, (b) same-letter
/// commutation across layers, (c) `Z` commuting with every `X` and `Y`,
/// (d) `[X_m, Y_m] = Z_m`, (e) `[X_n, Y_m] = 0` for `n ≠ m`.
pub fn check_layer_relations(layers: &FrobeniusLayers, mode: CheckMode) -> VerificationReport {
    check_triples(&layers.layers, layers.p.as_u64(), mode)
}
