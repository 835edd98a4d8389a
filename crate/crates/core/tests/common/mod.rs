#![allow(dead_code)]

use heisenrep::generators::{direct_sum, monomial_coalgebra_rep, random_layer_triples, span_rep, subcoalgebra_closure, tensor_product};
use heisenrep::linalg::{ExactMatrix, PolyMatrix};
use heisenrep::poly::{GroupKind, SparsePolynomial};
use heisenrep::rep::CoefficientFamily;
use heisenrep::scalars::{FieldSpec, Prime};
use heisenrep::structure::{construct_h1_charp, construct_h1_char0, LieLayerData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// Parses sums like `2x^2 + z + -1/2xy` over `x` (`Ga`) or `x, y, z` (`H1`).
pub fn poly(field: FieldSpec, group: GroupKind, s: &str) -> SparsePolynomial {
    let n = group.arity();
    let mut out = SparsePolynomial::zero(field, n);
    for term in s.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let split = term.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(term.len());
        let (coef, mono) = term.split_at(split);
        let coef = match coef {
            "" => field.one(),
            "-" => -&field.one(),
            c => match c.split_once('/') {
                Some((a, b)) => field.ratio(a.parse().unwrap(), b.parse().unwrap()).unwrap(),
                None => field.from_i64(c.parse().unwrap()),
            },
        };
        let mut e = vec![0u32; n];
        let mut chars = mono.chars().peekable();
        while let Some(v) = chars.next() {
            let i = match v {
                'x' => 0,
                'y' => 1,
                'z' => 2,
                _ => panic!("bad variable {v} in {s:?}"),
            };
            let mut k = 1;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                k = digits.parse().unwrap();
            }
            e[i] += k;
        }
        out.add_term(e, coef);
    }
    out
}

/// Upper-triangular polynomial matrix from row strings; `""` means zero and
/// the missing lower triangle is zero.
pub fn poly_matrix(field: FieldSpec, group: GroupKind, rows: &[&[&str]]) -> PolyMatrix {
    let d = rows.len();
    let rows = rows
        .iter()
        .map(|r| {
            let pad = d - r.len();
            (0..d)
                .map(|j| if j < pad { SparsePolynomial::zero(field, group.arity()) } else { poly(field, group, r[j - pad]) })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows).unwrap()
}

pub fn family(field: FieldSpec, group: GroupKind, rows: &[&[&str]]) -> CoefficientFamily {
    CoefficientFamily::from_polynomial_matrix(&poly_matrix(field, group, rows), group).unwrap()
}

/// Matrix with the given 1-based entries.
pub fn sparse(field: FieldSpec, d: usize, entries: &[(usize, usize, i64)]) -> ExactMatrix {
    let mut m = ExactMatrix::zero(field, d);
    for &(i, j, v) in entries {
        m.set(i - 1, j - 1, field.from_i64(v));
    }
    m
}

pub fn ga_example() -> CoefficientFamily {
    family(FieldSpec::Rational, GroupKind::Ga, &[&["1", "x", "x^2"], &["1", "2x"], &["1"]])
}

pub fn h1_six(field: FieldSpec) -> CoefficientFamily {
    family(
        field,
        GroupKind::H1,
        &[
            &["1", "2x", "x", "2x^2", "z", "2xz"],
            &["1", "0", "x", "0", "z"],
            &["1", "2x", "y", "2xy"],
            &["1", "0", "y"],
            &["1", "2x"],
            &["1"],
        ],
    )
}

/// The ten-dimensional matrix over `F_2` on monomials of degree at most 2.
pub fn m_ten() -> PolyMatrix {
    poly_matrix(
        fp(2),
        GroupKind::H1,
        &[
            &["1", "x", "y", "z", "x^2", "xy", "xz", "y^2", "yz", "z^2"],
            &["1", "0", "y", "0", "y", "z+xy", "0", "y^2", "0"],
            &["1", "0", "0", "x", "0", "0", "z", "0"],
            &["1", "0", "0", "x", "0", "y", "0"],
            &["1", "0", "y", "0", "0", "y^2"],
            &["1", "0", "0", "y", "0"],
            &["1", "0", "0", "0"],
            &["1", "0", "0"],
            &["1", "0"],
            &["1"],
        ],
    )
}

pub fn defining(field: FieldSpec) -> CoefficientFamily {
    family(field, GroupKind::H1, &[&["1", "x", "z"], &["1", "y"], &["1"]])
}

pub fn defining_lie(p: u64) -> LieLayerData {
    let f = fp(p);
    LieLayerData::new(
        prime(p),
        3,
        vec![heisenrep::rep::LayerTriple {
            x: ExactMatrix::unit(f, 3, 0, 1),
            y: ExactMatrix::unit(f, 3, 1, 2),
            z: ExactMatrix::unit(f, 3, 0, 2),
        }],
    )
    .unwrap()
}

/// Random valid layer data over `p ∈ {7, 11}`, `d ∈ {2, 3}`, one or two
/// layers.
pub fn random_instances(count: usize, seed: u64) -> Vec<LieLayerData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = if rng.random_bool(0.5) { 7 } else { 11 };
            let d = rng.random_range(2..=3);
            let layers = rng.random_range(1..=2);
            heisenrep::generators::random_lie_data(&mut rng, prime(p), d, layers)
        })
        .collect()
}

/// Every fixture and generated representation used by corpus-wide checks.
pub fn corpus() -> Vec<(String, CoefficientFamily)> {
    let mut out: Vec<(String, CoefficientFamily)> = Vec::new();
    out.push(("ga-example".into(), ga_example()));
    for (name, field) in [("F3", fp(3)), ("Q", FieldSpec::Rational), ("F2", fp(2)), ("F5", fp(5))] {
        out.push((format!("six-{name}"), h1_six(field)));
        out.push((format!("defining-{name}"), defining(field)));
    }
    out.push(("m-ten".into(), CoefficientFamily::from_polynomial_matrix(&m_ten(), GroupKind::H1).unwrap()));
    for field in [fp(2), fp(3), fp(5), FieldSpec::Rational] {
        for group in [GroupKind::Ga, GroupKind::H1] {
            for d in 0..=3 {
                out.push((format!("coalg-{group}-{field}-{d}"), monomial_coalgebra_rep(field, group, d).unwrap()));
            }
        }
    }
    for p in [2, 3, 5] {
        let f = fp(p);
        let seeds: [&[Vec<u32>]; 3] = [&[vec![0, 0, p as u32]], &[vec![p as u32, 1, 0]], &[vec![1, 0, p as u32], vec![0, 2, 0]]];
        for s in seeds {
            let basis = subcoalgebra_closure(f, GroupKind::H1, s);
            out.push((format!("sub-{f}-{s:?}"), span_rep(f, GroupKind::H1, &basis).unwrap()));
        }
        let a = monomial_coalgebra_rep(f, GroupKind::H1, 1).unwrap();
        let b = defining(f);
        out.push((format!("tensor-{f}"), tensor_product(&a, &b).unwrap()));
        out.push((format!("sum-{f}"), direct_sum(&a, &b).unwrap()));
    }
    let f7 = fp(7);
    out.push(("defining-x-defining-F7".into(), tensor_product(&defining(f7), &defining(f7)).unwrap()));
    for (k, lie) in random_instances(10, 77).into_iter().enumerate() {
        out.push((format!("construct-{k}"), construct_h1_charp(&lie).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..5 {
        let t = random_layer_triples(&mut rng, FieldSpec::Rational, 4, 1).remove(0);
        let m = construct_h1_char0(&t.x, &t.y, &t.z).unwrap();
        out.push((format!("char0-{k}"), CoefficientFamily::from_polynomial_matrix(&m, GroupKind::H1).unwrap()));
    }
    out
}
