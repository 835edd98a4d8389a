//! Sources of representations: monomial sub-coalgebras of the Hopf algebra
//! (including the full span of all monomials up to a degree), tensor
//! products, direct sums, basis changes, and random valid layer data.
//!
//! Matrix convention: a basis `e_1, …, e_n` of the comodule `V` and
//! `ρ(e_j) = Σ_i e_i ⊗ a_ij`. For `V` spanned by monomials with `ρ = Δ|_V`,
//! `a_ij` collects the right tensor factors of `Δ(m_j)` whose left factor
//! is `m_i`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, PolyMatrix};
use crate::poly::{Comultiplier, Exponent, GroupKind, SparsePolynomial};
use crate::rep::{CoefficientFamily, LayerTriple};
use crate::scalars::{FieldSpec, Prime};
use crate::structure::LieLayerData;

/// Graded order: lower total degree first; within a degree, lexicographically
/// descending exponents, so `x > y > z` (`1, x, y, z, x², xy, xz, y², …`).
pub fn monomial_order(a: &[u32], b: &[u32]) -> Ordering {
    let deg = |e: &[u32]| e.iter().sum::<u32>();
    (deg(a), Reverse(a)).cmp(&(deg(b), Reverse(b)))
}

/// All monomials of total degree at most `max_degree`, in [`monomial_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub group: GroupKind,
    pub max_degree: u32,
    monomials: Vec<Exponent>,
}

impl MonomialBasis {
    pub fn new(group: GroupKind, max_degree: u32) -> Self {
        let mut monomials = Vec::new();
        let n = group.arity();
        let mut e = vec![0u32; n];
        // Odometer over the box [0, D]^n, keeping total degree <= D.
        loop {
            if e.iter().sum::<u32>() <= max_degree {
                monomials.push(e.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    monomials.sort_by(|a, b| monomial_order(a, b));
                    return MonomialBasis { group, max_degree, monomials };
                }
                if e[i] < max_degree {
                    e[i] += 1;
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Dimension of the span of monomials of degree at most `max_degree`.
pub fn coalgebra_dimension(group: GroupKind, max_degree: u32) -> usize {
    let d = max_degree as usize;
    match group {
        GroupKind::Ga => d + 1,
        GroupKind::H1 => (d + 1) * (d + 2) * (d + 3) / 6,
    }
}

/// The comodule `span(monomials)` under `ρ = Δ|_V`, in the given basis
/// order. Fails unless the span is a sub-coalgebra, i.e. every left factor
/// of every `Δ(m_j)` is again in the list.
pub fn span_rep(field: FieldSpec, group: GroupKind, monomials: &[Exponent]) -> Result<CoefficientFamily> {
    let n = group.arity();
    let index: HashMap<&Exponent, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    if index.len() != monomials.len() {
        return Err(Error::Contract("repeated basis monomial".into()));
    }
    let d = monomials.len();
    let mut delta = Comultiplier::new(group, field);
    let mut rows = vec![vec![SparsePolynomial::zero(field, n); d]; d];
    for (j, m) in monomials.iter().enumerate() {
        if m.len() != n {
            return Err(Error::ArityMismatch { expected: n, found: m.len() });
        }
        for (left, right, c) in delta.monomial(m).terms() {
            let i = *index
                .get(&left.to_vec())
                .ok_or_else(|| Error::Contract(format!("span is not closed: Δ{m:?} has left factor {left:?}")))?;
            rows[i][j].add_term(right.to_vec(), c.clone());
        }
    }
    CoefficientFamily::from_polynomial_matrix(&PolyMatrix::from_rows(rows)?, group)
}

/// The representation on all monomials of degree at most `max_degree`.
pub fn monomial_coalgebra_rep(field: FieldSpec, group: GroupKind, max_degree: u32) -> Result<CoefficientFamily> {
    span_rep(field, group, MonomialBasis::new(group, max_degree).monomials())
}

/// Smallest monomial sub-coalgebra containing `seeds`, sorted in
/// [`monomial_order`]. Which left factors appear depends on the field.
pub fn subcoalgebra_closure(field: FieldSpec, group: GroupKind, seeds: &[Exponent]) -> Vec<Exponent> {
    let mut delta = Comultiplier::new(group, field);
    let mut seen: BTreeSet<Exponent> = BTreeSet::new();
    let mut stack: Vec<Exponent> = seeds.to_vec();
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for (left, _, _) in delta.monomial(&m).terms() {
            if !seen.contains(left) {
                stack.push(left.to_vec());
            }
        }
    }
    let mut out: Vec<Exponent> = seen.into_iter().collect();
    out.sort_by(|a, b| monomial_order(a, b));
    out
}

fn require_same_kind(f: &CoefficientFamily, g: &CoefficientFamily) -> Result<()> {
    if f.group() != g.group() {
        return Err(Error::WrongGroup { expected: f.group(), found: g.group() });
    }
    if f.field() != g.field() {
        return Err(Error::FieldMismatch(f.field(), g.field()));
    }
    Ok(())
}

/// Tensor product: the Kronecker product of the polynomial matrices with
/// entries multiplied in the polynomial ring. Index `(i, k)` maps to
/// `i * dim(g) + k`.
pub fn tensor_product(f: &CoefficientFamily, g: &CoefficientFamily) -> Result<CoefficientFamily> {
    require_same_kind(f, g)?;
    let (a, b) = (f.to_polynomial_matrix(), g.to_polynomial_matrix());
    let (da, db) = (f.dim(), g.dim());
    let mut out = PolyMatrix::zero(f.field(), f.group().arity(), da * db);
    for i1 in 0..da {
        for j1 in 0..da {
            let p = a.get(i1, j1);
            if p.is_zero() {
                continue;
            }
            for i2 in 0..db {
                for j2 in 0..db {
                    let q = b.get(i2, j2);
                    if !q.is_zero() {
                        out.set(i1 * db + i2, j1 * db + j2, p * q);
                    }
                }
            }
        }
    }
    CoefficientFamily::from_polynomial_matrix(&out, f.group())
}

/// Block-diagonal sum: `c^r = diag(c^r(f), c^r(g))`.
pub fn direct_sum(f: &CoefficientFamily, g: &CoefficientFamily) -> Result<CoefficientFamily> {
    require_same_kind(f, g)?;
    let mut out = CoefficientFamily::empty(f.group(), f.field(), f.dim() + g.dim())?;
    let exponents: BTreeSet<&Exponent> = f.support().chain(g.support()).collect();
    for e in exponents {
        out.insert(e.clone(), f.coeff(e).direct_sum(&g.coeff(e)))?;
    }
    Ok(out)
}

/// The same representation in the basis given by the columns of `s`:
/// `c^r ↦ s^{-1} c^r s`.
pub fn change_basis(f: &CoefficientFamily, s: &ExactMatrix) -> Result<CoefficientFamily> {
    let s_inv = s.inverse()?;
    let mut out = CoefficientFamily::empty(f.group(), f.field(), f.dim())?;
    for (e, c) in f.iter() {
        out.insert(e.clone(), &(&s_inv * c) * s)?;
    }
    Ok(out)
}

fn small_scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> crate::scalars::Scalar {
    field.from_i64(rng.random_range(-3..=3))
}

/// Random unit upper-triangular matrix with small entries.
pub fn random_unipotent<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, dim: usize) -> ExactMatrix {
    let mut s = ExactMatrix::identity(field, dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            s.set(i, j, small_scalar(rng, field));
        }
    }
    s
}

/// Heisenberg Lie algebra block of the given size: `(X, Y, Z)` with
/// `[X, Y] = Z` central, plus the central direction used by other layers.
fn block_basis(field: FieldSpec, size: usize) -> (LayerTriple, ExactMatrix) {
    let e = |i, j| ExactMatrix::unit(field, size, i, j);
    match size {
        1 => (LayerTriple::zero(field, 1), ExactMatrix::zero(field, 1)),
        2 => (
            LayerTriple { x: e(0, 1), y: e(0, 1), z: ExactMatrix::zero(field, 2) },
            e(0, 1),
        ),
        3 => (LayerTriple { x: e(0, 1), y: e(1, 2), z: e(0, 2) }, e(0, 2)),
        4 => (LayerTriple { x: e(0, 1), y: &e(0, 2) + &e(1, 3), z: e(0, 3) }, e(0, 3)),
        _ => unreachable!("block sizes are 1..=4"),
    }
}

fn embed(big: &mut ExactMatrix, block: &ExactMatrix, offset: usize) {
    for (i, j, v) in block.nonzero_entries() {
        big.set(offset + i, offset + j, v.clone());
    }
}

/// Random strictly upper-triangular layer data satisfying the layer
/// hypotheses over any field: a direct sum of Heisenberg blocks in which one
/// layer takes generic combinations `X' = αX + βY + γZ`, `Y' = α'X + β'Y + γ'Z`,
/// `Z' = (αβ' − βα')Z` and every other layer is a multiple of the block's
/// central direction, conjugated by a random unit upper-triangular matrix.
pub fn random_layer_triples<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    dim: usize,
    layers: usize,
) -> Vec<LayerTriple> {
    let mut triples = vec![LayerTriple::zero(field, dim); layers];
    let generic = rng.random_range(0..layers.max(1));
    let mut offset = 0;
    while offset < dim {
        let size = rng.random_range(1..=(dim - offset).min(4));
        let (base, central) = block_basis(field, size);
        for (layer, t) in triples.iter_mut().enumerate() {
            let block = if layer == generic {
                let c: Vec<_> = (0..6).map(|_| small_scalar(rng, field)).collect();
                let comb = |a: &_, b: &_, g: &_| {
                    &(&base.x.scale(a) + &base.y.scale(b)) + &base.z.scale(g)
                };
                let det = &(&c[0] * &c[4]) - &(&c[1] * &c[3]);
                LayerTriple {
                    x: comb(&c[0], &c[1], &c[2]),
                    y: comb(&c[3], &c[4], &c[5]),
                    z: base.z.scale(&det),
                }
            } else {
                LayerTriple {
                    x: central.scale(&small_scalar(rng, field)),
                    y: central.scale(&small_scalar(rng, field)),
                    z: ExactMatrix::zero(field, size),
                }
            };
            embed(&mut t.x, &block.x, offset);
            embed(&mut t.y, &block.y, offset);
            embed(&mut t.z, &block.z, offset);
        }
        offset += size;
    }
    let s = random_unipotent(rng, field, dim);
    let s_inv = s.inverse().expect("unipotent");
    let conj = |m: &ExactMatrix| &(&s * m) * &s_inv;
    triples
        .iter()
        .map(|t| LayerTriple { x: conj(&t.x), y: conj(&t.y), z: conj(&t.z) })
        .collect()
}

/// Random valid [`LieLayerData`] with `layers` layers whose last layer is
/// nonzero (whenever `dim ≥ 2` makes that possible).
pub fn random_lie_data<R: Rng + ?Sized>(rng: &mut R, p: Prime, dim: usize, layers: usize) -> LieLayerData {
    let field = FieldSpec::Prime(p);
    let mut triples = random_layer_triples(rng, field, dim, layers);
    for _ in 0..64 {
        if dim < 2 || triples.last().is_none_or(|t| !t.is_zero()) {
            break;
        }
        triples = random_layer_triples(rng, field, dim, layers);
    }
    LieLayerData::new(p, dim, triples).expect("generated data satisfies the layer hypotheses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{extract_layers, verify_comodule_axioms, verify_fundamental_relation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_listing_matches_graded_order() {
        let b = MonomialBasis::new(GroupKind::H1, 2);
        let expected: Vec<Exponent> = vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 2, 0],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(b.monomials(), &expected[..]);
        let b3 = MonomialBasis::new(GroupKind::H1, 3);
        assert_eq!(b3.len(), 20);
        assert_eq!(
            &b3.monomials()[10..],
            &[
                vec![3, 0, 0],
                vec![2, 1, 0],
                vec![2, 0, 1],
                vec![1, 2, 0],
                vec![1, 1, 1],
                vec![1, 0, 2],
                vec![0, 3, 0],
                vec![0, 2, 1],
                vec![0, 1, 2],
                vec![0, 0, 3],
            ]
        );
        for d in 0..5 {
            assert_eq!(MonomialBasis::new(GroupKind::H1, d).len(), coalgebra_dimension(GroupKind::H1, d));
            assert_eq!(MonomialBasis::new(GroupKind::Ga, d).len(), coalgebra_dimension(GroupKind::Ga, d));
        }
    }

    #[test]
    fn degree_zero_is_trivial() {
        for field in [FieldSpec::prime(3).unwrap(), FieldSpec::Rational] {
            for group in [GroupKind::Ga, GroupKind::H1] {
                let f = monomial_coalgebra_rep(field, group, 0).unwrap();
                assert_eq!(f, CoefficientFamily::trivial(group, field, 1).unwrap());
            }
        }
    }

    #[test]
    fn degree_one_heisenberg() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f = monomial_coalgebra_rep(f2, GroupKind::H1, 1).unwrap();
        let m = f.to_polynomial_matrix();
        let var = |i| SparsePolynomial::variable(f2, 3, i);
        let mut expected = PolyMatrix::identity(f2, 3, 4);
        expected.set(0, 1, var(0));
        expected.set(0, 2, var(1));
        expected.set(0, 3, var(2));
        expected.set(1, 3, var(1));
        assert_eq!(m, expected);
    }

    #[test]
    fn closure_depends_on_characteristic() {
        let f2 = FieldSpec::prime(2).unwrap();
        let q = FieldSpec::Rational;
        assert_eq!(subcoalgebra_closure(f2, GroupKind::Ga, &[vec![2]]), vec![vec![0], vec![2]]);
        assert_eq!(subcoalgebra_closure(q, GroupKind::Ga, &[vec![2]]), vec![vec![0], vec![1], vec![2]]);
        let z = subcoalgebra_closure(f2, GroupKind::H1, &[vec![0, 0, 1]]);
        assert_eq!(z, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert!(span_rep(f2, GroupKind::H1, &[vec![0, 0, 0], vec![0, 0, 1]]).is_err());
        assert!(verify_comodule_axioms(&span_rep(f2, GroupKind::H1, &z).unwrap()).ok());
    }

    #[test]
    fn closure_under_products_and_sums() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = monomial_coalgebra_rep(f7, GroupKind::H1, 1).unwrap();
        let t = tensor_product(&a, &a).unwrap();
        assert_eq!(t.dim(), 16);
        assert!(verify_comodule_axioms(&t).ok());
        assert!(verify_fundamental_relation(&t).ok());
        let s = direct_sum(&a, &CoefficientFamily::trivial(GroupKind::H1, f7, 1).unwrap()).unwrap();
        assert_eq!(s.dim(), 5);
        assert!(verify_comodule_axioms(&s).ok());
        let trivial = CoefficientFamily::trivial(GroupKind::H1, f7, 1).unwrap();
        assert_eq!(tensor_product(&trivial, &a).unwrap(), a);
        let mismatch = CoefficientFamily::trivial(GroupKind::Ga, f7, 1).unwrap();
        assert!(tensor_product(&a, &mismatch).is_err());
        assert!(direct_sum(&a, &monomial_coalgebra_rep(FieldSpec::Rational, GroupKind::H1, 1).unwrap()).is_err());
    }

    #[test]
    fn layers_of_direct_sum_are_blockwise() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = monomial_coalgebra_rep(f2, GroupKind::H1, 2).unwrap();
        let b = monomial_coalgebra_rep(f2, GroupKind::H1, 1).unwrap();
        let (la, lb) = (extract_layers(&a).unwrap(), extract_layers(&b).unwrap());
        let ls = extract_layers(&direct_sum(&a, &b).unwrap()).unwrap();
        assert_eq!(ls.layers.len(), la.layers.len().max(lb.layers.len()));
        for (m, t) in ls.layers.iter().enumerate() {
            let zero = |d| LayerTriple::zero(f2, d);
            let ta = la.layers.get(m).cloned().unwrap_or_else(|| zero(a.dim()));
            let tb = lb.layers.get(m).cloned().unwrap_or_else(|| zero(b.dim()));
            assert_eq!(t.x, ta.x.direct_sum(&tb.x));
            assert_eq!(t.y, ta.y.direct_sum(&tb.y));
            assert_eq!(t.z, ta.z.direct_sum(&tb.z));
        }
    }

    #[test]
    fn change_of_basis_preserves_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f5 = FieldSpec::prime(5).unwrap();
        let a = monomial_coalgebra_rep(f5, GroupKind::H1, 1).unwrap();
        let s = random_unipotent(&mut rng, f5, 4).transpose();
        let b = change_basis(&a, &s).unwrap();
        assert!(verify_comodule_axioms(&b).ok());
    }

    #[test]
    fn random_data_is_valid_and_strictly_upper() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let dim = rng.random_range(1..=6);
            let layers = rng.random_range(1..=3);
            let lie = random_lie_data(&mut rng, Prime::new(13).unwrap(), dim, layers);
            for t in lie.triples() {
                for m in [&t.x, &t.y, &t.z] {
                    assert!(m.nonzero_entries().all(|(i, j, _)| i < j));
                }
            }
            if dim >= 2 {
                assert!(!lie.triples().last().unwrap().is_zero());
            }
        }
    }
}
