//! Constructions of representations from Lie-layer data (characteristic `p`)
//! and from nilpotent matrices (characteristic zero), the layered
//! exponential form, and the Weyl-type commutation identity.

use crate::error::{Error, Result};
use crate::linalg::{commutator, nilpotency_index, truncated_exp, ExactMatrix, PolyMatrix};
use crate::poly::{GroupKind, SparsePolynomial};
use crate::rep::{check_triples, CheckMode, CoefficientFamily, LayerTriple};
use crate::scalars::{FieldSpec, Prime};

/// Layer data `(X_i, Y_i, Z_i)` over `F_p`, validated at construction:
/// every matrix nilpotent, `[X_i, Y_i] = Z_i`, `Z_i` commuting with `X_i`
/// and `Y_i`, and distinct layers commuting elementwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieLayerData {
    p: Prime,
    dim: usize,
    triples: Vec<LayerTriple>,
}

impl LieLayerData {
    pub fn new(p: Prime, dim: usize, triples: Vec<LayerTriple>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Contract("dimension must be positive".into()));
        }
        let field = FieldSpec::Prime(p);
        for (i, t) in triples.iter().enumerate() {
            for m in [&t.x, &t.y, &t.z] {
                if m.field() != field {
                    return Err(Error::FieldMismatch(field, m.field()));
                }
                if m.dim() != dim {
                    return Err(Error::Contract(format!(
                        "layer {i} holds a {0}x{0} matrix, expected {dim}x{dim}",
                        m.dim()
                    )));
                }
            }
        }
        let report = check_triples(&triples, dim as u64, CheckMode::Strict);
        if let Some(v) = report.violations().first() {
            return Err(Error::Hypothesis(format!("{} ({})", v.description, v.site)));
        }
        Ok(LieLayerData { p, dim, triples })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    pub fn triples(&self) -> &[LayerTriple] {
        &self.triples
    }

    /// Triples with trailing all-zero layers removed.
    pub fn trimmed_triples(&self) -> &[LayerTriple] {
        let keep = self.triples.iter().rposition(|t| !t.is_zero()).map_or(0, |i| i + 1);
        &self.triples[..keep]
    }
}

/// Every `(n, P_(n))` with `P_(n) = Γ(n)^{-1} P_0^{n_0} ⋯ P_k^{n_k} ≠ 0`,
/// where `P_i = layers[i]` are commuting and nilpotent. Digit `n_i` only
/// ranges while `P_i^{n_i} ≠ 0`, so the enumeration stays small.
fn divided_powers(layers: &[&ExactMatrix], p: Prime, dim: usize) -> Vec<(u64, ExactMatrix)> {
    let field = FieldSpec::Prime(p);
    let mut out = vec![(0u64, ExactMatrix::identity(field, dim))];
    let mut place = 1u64;
    for layer in layers {
        // Powers P_i^k / k! for k < p while nonzero.
        let mut scaled = Vec::new();
        let mut power = ExactMatrix::identity(field, dim);
        for k in 0..p.as_u64() {
            if power.is_zero() {
                break;
            }
            let inv = field.factorial(k).inv().expect("k < p");
            scaled.push((k, power.scale(&inv)));
            power = &power * layer;
        }
        let mut next = Vec::new();
        for (n, acc) in &out {
            for (k, pk) in &scaled {
                let prod = if *k == 0 { acc.clone() } else { acc * pk };
                if !prod.is_zero() {
                    next.push((n + k * place, prod));
                }
            }
        }
        out = next;
        place = place.saturating_mul(p.as_u64());
    }
    out.sort_by_key(|(n, _)| *n);
    out
}

fn exponent_u32(n: u64) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Contract(format!("exponent {n} exceeds the supported range")))
}

fn require_large_prime(p: Prime, dim: usize) -> Result<()> {
    if p.as_u64() < 2 * dim as u64 {
        return Err(Error::Hypothesis(format!("p = {p} is below 2d = {}", 2 * dim)));
    }
    Ok(())
}

/// Builds the family `c^(n,m,k) = Z_(k) Y_(m) X_(n)` from layer data with
/// `p ≥ 2d`.
pub fn construct_h1_charp(lie: &LieLayerData) -> Result<CoefficientFamily> {
    require_large_prime(lie.p, lie.dim)?;
    let (p, d) = (lie.p, lie.dim);
    let triples = lie.trimmed_triples();
    let letter = |pick: fn(&LayerTriple) -> &ExactMatrix| -> Vec<&ExactMatrix> { triples.iter().map(pick).collect() };
    let xs = divided_powers(&letter(|t| &t.x), p, d);
    let ys = divided_powers(&letter(|t| &t.y), p, d);
    let zs = divided_powers(&letter(|t| &t.z), p, d);

    let mut family = CoefficientFamily::empty(GroupKind::H1, lie.field(), d)?;
    for (k, zk) in &zs {
        for (m, ym) in &ys {
            let zy = zk * ym;
            if zy.is_zero() {
                continue;
            }
            for (n, xn) in &xs {
                let c = &zy * xn;
                if !c.is_zero() {
                    family.insert(vec![exponent_u32(*n)?, exponent_u32(*m)?, exponent_u32(*k)?], c)?;
                }
            }
        }
    }
    debug_assert!(crate::rep::verify_comodule_axioms(&family).ok());
    Ok(family)
}

/// Builds the `G_a` family `c^r = Γ(r)^{-1} X_0^{r_0} ⋯ X_m^{r_m}` from
/// commuting `p`-nilpotent matrices.
pub fn construct_ga_charp(xs: &[ExactMatrix], p: Prime) -> Result<CoefficientFamily> {
    let field = FieldSpec::Prime(p);
    let dim = xs.first().map(ExactMatrix::dim).ok_or_else(|| Error::Contract("no layer matrices".into()))?;
    for (i, x) in xs.iter().enumerate() {
        if x.field() != field {
            return Err(Error::FieldMismatch(field, x.field()));
        }
        if x.dim() != dim {
            return Err(Error::DimensionMismatch(dim, x.dim()));
        }
        if !x.pow(p.as_u64()).is_zero() {
            return Err(Error::Hypothesis(format!("X{i}^{p} != 0")));
        }
        for (j, y) in xs.iter().enumerate().skip(i + 1) {
            if !commutator(x, y)?.is_zero() {
                return Err(Error::Hypothesis(format!("[X{i},X{j}] != 0")));
            }
        }
    }
    let layers: Vec<&ExactMatrix> = xs.iter().collect();
    let mut family = CoefficientFamily::empty(GroupKind::Ga, field, dim)?;
    for (n, c) in divided_powers(&layers, p, dim) {
        family.insert(vec![exponent_u32(n)?], c)?;
    }
    Ok(family)
}

/// `x·X + y·Y + (z − xy/2)·Z` as a polynomial matrix in `(x, y, z)`.
fn heisenberg_exponent(t: &LayerTriple) -> Result<PolyMatrix> {
    let field = t.x.field();
    let var = |i| SparsePolynomial::variable(field, 3, i);
    let (x, y, z) = (var(0), var(1), var(2));
    let half = field.ratio(1, 2)?;
    let zt = &z - &(&x * &y).scale(&half);
    Ok(&(&PolyMatrix::from_scaled(&x, &t.x) + &PolyMatrix::from_scaled(&y, &t.y)) + &PolyMatrix::from_scaled(&zt, &t.z))
}

/// The product `Π_i exp(x^{p^i} X_i + y^{p^i} Y_i + (z^{p^i} − x^{p^i} y^{p^i}/2) Z_i)`.
///
/// Requires `p ≥ 2d` and `p` odd; for `d = 1` every nilpotent matrix is
/// zero and the result is the `1 × 1` identity.
pub fn exponential_form_h1(lie: &LieLayerData) -> Result<PolyMatrix> {
    let field = lie.field();
    if lie.dim == 1 {
        return Ok(PolyMatrix::identity(field, 3, 1));
    }
    require_large_prime(lie.p, lie.dim)?;
    if lie.p.get() == 2 {
        return Err(Error::Hypothesis("the exponential form divides by 2".into()));
    }
    let mut acc = PolyMatrix::identity(field, 3, lie.dim);
    let mut q = 1u64;
    for t in lie.trimmed_triples() {
        let factor = truncated_exp(&heisenberg_exponent(t)?)?.inflate(exponent_u32(q)?);
        acc = &acc * &factor;
        q *= lie.p.as_u64();
    }
    Ok(acc)
}

fn require_rational(m: &ExactMatrix) -> Result<()> {
    if m.field() != FieldSpec::Rational {
        return Err(Error::InvalidField(format!("expected Q, found {}", m.field())));
    }
    Ok(())
}

/// `e^{xX} = Σ_r x^r X^r / r!` for nilpotent `X` over `Q`.
pub fn construct_ga_char0(x: &ExactMatrix) -> Result<PolyMatrix> {
    require_rational(x)?;
    nilpotency_index(x)?;
    let var = SparsePolynomial::variable(FieldSpec::Rational, 1, 0);
    truncated_exp(&PolyMatrix::from_scaled(&var, x))
}

fn check_heisenberg_triple(x: &ExactMatrix, y: &ExactMatrix, z: &ExactMatrix) -> Result<()> {
    x.check_compatible(y)?;
    x.check_compatible(z)?;
    if commutator(x, y)? != *z {
        return Err(Error::Hypothesis("[X,Y] != Z".into()));
    }
    if !commutator(z, x)?.is_zero() {
        return Err(Error::Hypothesis("[Z,X] != 0".into()));
    }
    if !commutator(z, y)?.is_zero() {
        return Err(Error::Hypothesis("[Z,Y] != 0".into()));
    }
    Ok(())
}

/// `exp(xX + yY + (z − xy/2)Z)` over `Q` for nilpotent `X, Y, Z` with
/// `Z = [X, Y]` central.
pub fn construct_h1_char0(x: &ExactMatrix, y: &ExactMatrix, z: &ExactMatrix) -> Result<PolyMatrix> {
    require_rational(x)?;
    check_heisenberg_triple(x, y, z)?;
    for (name, m) in [("X", x), ("Y", y), ("Z", z)] {
        nilpotency_index(m).map_err(|_| Error::Hypothesis(format!("{name} is not nilpotent")))?;
    }
    let t = LayerTriple { x: x.clone(), y: y.clone(), z: z.clone() };
    truncated_exp(&heisenberg_exponent(&t)?)
}

/// Evaluates both sides of
/// `X^n Y^m = Σ_{l ≤ min(n,m)} l! C(n,l) C(m,l) Z^l Y^{m−l} X^{n−l}`
/// and reports whether they agree. In characteristic `p` the identity is
/// only claimed for `n, m < p`.
pub fn weyl_identity_check(x: &ExactMatrix, y: &ExactMatrix, z: &ExactMatrix, n: u32, m: u32) -> Result<bool> {
    check_heisenberg_triple(x, y, z)?;
    let field = x.field();
    if let Some(p) = field.as_prime() {
        if n >= p.get() || m >= p.get() {
            return Err(Error::Contract(format!("n = {n}, m = {m} must both be below p = {p}")));
        }
    }
    let lhs = &x.pow(n as u64) * &y.pow(m as u64);
    let mut rhs = ExactMatrix::zero(field, x.dim());
    for l in 0..=n.min(m) {
        let coef = &(&field.factorial(l as u64) * &field.binomial(n as u64, l as u64))
            * &field.binomial(m as u64, l as u64);
        let term = &(&z.pow(l as u64) * &y.pow((m - l) as u64)) * &x.pow((n - l) as u64);
        rhs = &rhs + &term.scale(&coef);
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{extract_layers, verify_comodule_axioms, verify_fundamental_relation};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn defining_triple(field: FieldSpec) -> LayerTriple {
        LayerTriple {
            x: ExactMatrix::unit(field, 3, 0, 1),
            y: ExactMatrix::unit(field, 3, 1, 2),
            z: ExactMatrix::unit(field, 3, 0, 2),
        }
    }

    fn defining_matrix(field: FieldSpec) -> PolyMatrix {
        let var = |i| SparsePolynomial::variable(field, 3, i);
        let mut m = PolyMatrix::identity(field, 3, 3);
        m.set(0, 1, var(0));
        m.set(1, 2, var(1));
        m.set(0, 2, var(2));
        m
    }

    #[test]
    fn defining_rep_from_one_layer() {
        let f7 = FieldSpec::prime(7).unwrap();
        let lie = LieLayerData::new(p(7), 3, vec![defining_triple(f7)]).unwrap();
        let fam = construct_h1_charp(&lie).unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.to_polynomial_matrix(), defining_matrix(f7));
        assert_eq!(exponential_form_h1(&lie).unwrap(), defining_matrix(f7));
    }

    #[test]
    fn zero_layer_gives_trivial() {
        let f7 = FieldSpec::prime(7).unwrap();
        let lie = LieLayerData::new(p(7), 3, vec![LayerTriple::zero(f7, 3)]).unwrap();
        let fam = construct_h1_charp(&lie).unwrap();
        assert_eq!(fam, CoefficientFamily::trivial(GroupKind::H1, f7, 3).unwrap());
        assert_eq!(exponential_form_h1(&lie).unwrap(), PolyMatrix::identity(f7, 3, 3));
    }

    #[test]
    fn two_copies_of_defining_layer() {
        let f7 = FieldSpec::prime(7).unwrap();
        let lie = LieLayerData::new(p(7), 3, vec![defining_triple(f7), defining_triple(f7)]);
        // [X0, Y1] = E13 != 0, so two identical defining layers are rejected.
        assert!(matches!(lie, Err(Error::Hypothesis(_))));
        // Layer 1 carrying only the central direction is admissible.
        let second = LayerTriple {
            x: ExactMatrix::unit(f7, 3, 0, 2),
            y: ExactMatrix::zero(f7, 3),
            z: ExactMatrix::zero(f7, 3),
        };
        let lie = LieLayerData::new(p(7), 3, vec![defining_triple(f7), second]).unwrap();
        let fam = construct_h1_charp(&lie).unwrap();
        assert!(fam.get(&[7, 0, 0]).is_some());
        assert_eq!(fam.get(&[1, 0, 0]), Some(&ExactMatrix::unit(f7, 3, 0, 1)));
        assert!(verify_comodule_axioms(&fam).ok());
        assert_eq!(extract_layers(&fam).unwrap().layers, lie.triples());
        assert_eq!(exponential_form_h1(&lie).unwrap(), fam.to_polynomial_matrix());
    }

    #[test]
    fn small_prime_rejected() {
        let f5 = FieldSpec::prime(5).unwrap();
        let lie = LieLayerData::new(p(5), 3, vec![defining_triple(f5)]).unwrap();
        assert!(matches!(construct_h1_charp(&lie), Err(Error::Hypothesis(_))));
        assert!(exponential_form_h1(&lie).is_err());
    }

    #[test]
    fn one_dimensional_in_characteristic_two() {
        let f2 = FieldSpec::prime(2).unwrap();
        let lie = LieLayerData::new(p(2), 1, vec![LayerTriple::zero(f2, 1)]).unwrap();
        assert_eq!(exponential_form_h1(&lie).unwrap(), PolyMatrix::identity(f2, 3, 1));
        assert!(construct_h1_charp(&lie).unwrap().to_polynomial_matrix() == PolyMatrix::identity(f2, 3, 1));
    }

    #[test]
    fn ga_charp_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let e12 = ExactMatrix::unit(f5, 2, 0, 1);
        let fam = construct_ga_charp(std::slice::from_ref(&e12), p(5)).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.get(&[1]), Some(&e12));

        let shift = ExactMatrix::from_i64_rows(f5, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let fam = construct_ga_charp(std::slice::from_ref(&shift), p(5)).unwrap();
        let half = f5.ratio(1, 2).unwrap();
        assert_eq!(fam.get(&[2]), Some(&ExactMatrix::unit(f5, 3, 0, 2).scale(&half)));

        let fam = construct_ga_charp(&[e12.clone(), e12.clone()], p(5)).unwrap();
        let support: Vec<_> = fam.support().cloned().collect();
        assert_eq!(support, vec![vec![0], vec![1], vec![5]]);
        assert_eq!(fam.get(&[5]), Some(&e12));
        assert!(verify_fundamental_relation(&fam).ok());
    }

    #[test]
    fn ga_charp_hypotheses() {
        let f2 = FieldSpec::prime(2).unwrap();
        let shift = ExactMatrix::from_i64_rows(f2, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(matches!(construct_ga_charp(&[shift], p(2)), Err(Error::Hypothesis(_))));
        let f5 = FieldSpec::prime(5).unwrap();
        let a = ExactMatrix::unit(f5, 3, 0, 1);
        let b = ExactMatrix::unit(f5, 3, 1, 2);
        assert!(matches!(construct_ga_charp(&[a, b], p(5)), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn char0_examples() {
        let q = FieldSpec::Rational;
        let x = SparsePolynomial::variable(q, 1, 0);
        let e = construct_ga_char0(&ExactMatrix::unit(q, 2, 0, 1)).unwrap();
        assert_eq!(e.get(0, 1), &x);
        let shift = ExactMatrix::from_i64_rows(q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = construct_ga_char0(&shift).unwrap();
        assert_eq!(e.get(0, 2), &x.pow(2).scale(&q.ratio(1, 2).unwrap()));
        assert_eq!(construct_ga_char0(&ExactMatrix::zero(q, 3)).unwrap(), PolyMatrix::identity(q, 1, 3));
        assert!(construct_ga_char0(&ExactMatrix::identity(q, 2)).is_err());

        let t = defining_triple(q);
        assert_eq!(construct_h1_char0(&t.x, &t.y, &t.z).unwrap(), defining_matrix(q));
        let zero = ExactMatrix::zero(q, 3);
        assert_eq!(construct_h1_char0(&zero, &zero, &zero).unwrap(), PolyMatrix::identity(q, 3, 3));
        assert!(construct_h1_char0(&t.x, &t.y, &zero).is_err());
    }

    #[test]
    fn weyl_base_case_and_errors() {
        let f7 = FieldSpec::prime(7).unwrap();
        let t = defining_triple(f7);
        assert!(weyl_identity_check(&t.x, &t.y, &t.z, 1, 1).unwrap());
        assert!(weyl_identity_check(&t.x, &t.y, &t.z, 3, 2).unwrap());
        assert!(weyl_identity_check(&t.x, &t.y, &t.z, 7, 1).is_err());
        // Z = E12 with X = E12 + E23 gives [Z, X] = E13 != 0.
        let x = &ExactMatrix::unit(f7, 3, 0, 1) + &ExactMatrix::unit(f7, 3, 1, 2);
        let z = ExactMatrix::unit(f7, 3, 0, 1);
        assert!(matches!(weyl_identity_check(&x, &z, &z, 1, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn lie_data_validation_names_identity() {
        let f7 = FieldSpec::prime(7).unwrap();
        let mut t = defining_triple(f7);
        t.z = ExactMatrix::zero(f7, 3);
        let err = LieLayerData::new(p(7), 3, vec![t]).unwrap_err();
        assert!(err.to_string().contains("[X0,Y0] != Z0"), "{err}");
    }
}
