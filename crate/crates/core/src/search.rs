//! Seeded search over generated `H_1` representations for failures of the
//! layer conditions (d) and (e).
//!
//! Every candidate is described by a [`Recipe`]: a small tree of generator
//! operations whose random parts are stored explicitly, so any reported
//! violation can be rebuilt and re-checked with [`replay`].

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    coalgebra_dimension, direct_sum, monomial_coalgebra_rep, random_lie_data, span_rep, subcoalgebra_closure,
    tensor_product,
};
use crate::linalg::PolyMatrix;
use crate::poly::{Exponent, GroupKind, SparsePolynomial};
use crate::rep::{check_layer_relations, extract_layers, CheckMode, CoefficientFamily, Condition, Site};
use crate::scalars::{FieldSpec, Prime};
use crate::structure::construct_h1_charp;

pub const CAVEAT: &str = "no violation found within budget; the generated families cover only part of all modules";

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixCategory {
    /// Span of all monomials up to a degree; each admissible degree once,
    /// largest first.
    Coalgebra,
    /// Closure of random seed monomials, or a random 2-dimensional
    /// representation on primitive elements.
    Subcoalgebra,
    Tensor,
    DirectSum,
    /// Random valid layer data fed through the characteristic-`p`
    /// construction; only drawn when `p ≥ 2·target_dim`.
    LieConstruct,
}

impl MixCategory {
    pub const ALL: [MixCategory; 5] = [
        MixCategory::Coalgebra,
        MixCategory::Subcoalgebra,
        MixCategory::Tensor,
        MixCategory::DirectSum,
        MixCategory::LieConstruct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MixCategory::Coalgebra => "coalgebra",
            MixCategory::Subcoalgebra => "subcoalgebra",
            MixCategory::Tensor => "tensor",
            MixCategory::DirectSum => "direct_sum",
            MixCategory::LieConstruct => "lie_construct",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown generator category {s:?}")))
    }
}

/// Relative weights of the generator categories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorMix(BTreeMap<MixCategory, u32>);

impl Default for GeneratorMix {
    fn default() -> Self {
        GeneratorMix(MixCategory::ALL.into_iter().map(|c| (c, 1)).collect())
    }
}

impl GeneratorMix {
    pub fn only(category: MixCategory) -> Self {
        GeneratorMix([(category, 1)].into_iter().collect())
    }

    pub fn from_weights(weights: impl IntoIterator<Item = (MixCategory, u32)>) -> Self {
        GeneratorMix(weights.into_iter().collect())
    }

    /// Parses `name=weight` pairs separated by commas; a bare name means
    /// weight 1. Unlisted categories get weight 0.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, weight) = match part.split_once('=') {
                Some((n, w)) => {
                    let w = w
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Config(format!("bad weight in {part:?}")))?;
                    (n.trim(), w)
                }
                None => (part, 1),
            };
            if out.insert(MixCategory::parse(name)?, weight).is_some() {
                return Err(Error::Config(format!("category {name:?} given twice")));
            }
        }
        Ok(GeneratorMix(out))
    }

    pub fn weight(&self, c: MixCategory) -> u32 {
        self.0.get(&c).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub p: Prime,
    pub target_dim: usize,
    pub budget: usize,
    pub seed: u64,
    pub mix: GeneratorMix,
    pub fail_fast: bool,
}

impl SearchConfig {
    /// Defaults: `target_dim = (p+1)/2`, budget 1000, seed 0, all categories
    /// weighted equally.
    pub fn new(p: Prime) -> Self {
        SearchConfig {
            p,
            target_dim: (p.get() as usize).div_ceil(2),
            budget: 1000,
            seed: 0,
            mix: GeneratorMix::default(),
            fail_fast: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        if self.target_dim == 0 {
            return Err(Error::Config("target dimension must be positive".into()));
        }
        if MixCategory::ALL.iter().all(|&c| self.mix.weight(c) == 0) {
            return Err(Error::Config("generator weights are all zero".into()));
        }
        Ok(())
    }
}

/// Structural description of a candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    Coalgebra { degree: u32 },
    Subcoalgebra { seeds: Vec<Exponent> },
    /// `[[1, Σ_i a_i x^(p^i) + b_i y^(p^i)], [0, 1]]`.
    Primitive { x: Vec<u32>, y: Vec<u32> },
    Tensor { left: Box<Recipe>, right: Box<Recipe> },
    DirectSum { left: Box<Recipe>, right: Box<Recipe> },
    LieConstruct { seed: u64, dim: usize, layers: usize },
}

impl Recipe {
    pub fn dimension(&self, p: Prime) -> usize {
        match self {
            Recipe::Coalgebra { degree } => coalgebra_dimension(GroupKind::H1, *degree),
            Recipe::Subcoalgebra { seeds } => subcoalgebra_closure(FieldSpec::Prime(p), GroupKind::H1, seeds).len(),
            Recipe::Primitive { .. } => 2,
            Recipe::Tensor { left, right } => left.dimension(p) * right.dimension(p),
            Recipe::DirectSum { left, right } => left.dimension(p) + right.dimension(p),
            Recipe::LieConstruct { dim, .. } => *dim,
        }
    }

    pub fn build(&self, p: Prime) -> Result<CoefficientFamily> {
        let field = FieldSpec::Prime(p);
        match self {
            Recipe::Coalgebra { degree } => monomial_coalgebra_rep(field, GroupKind::H1, *degree),
            Recipe::Subcoalgebra { seeds } => {
                span_rep(field, GroupKind::H1, &subcoalgebra_closure(field, GroupKind::H1, seeds))
            }
            Recipe::Primitive { x, y } => {
                let mut f = SparsePolynomial::zero(field, 3);
                let mut q = 1u32;
                for i in 0..x.len().max(y.len()) {
                    let a = x.get(i).copied().unwrap_or(0);
                    let b = y.get(i).copied().unwrap_or(0);
                    f.add_term(vec![q, 0, 0], field.from_u64(a as u64));
                    f.add_term(vec![0, q, 0], field.from_u64(b as u64));
                    q = q.checked_mul(p.get()).ok_or_else(|| Error::Contract("layer exponent overflow".into()))?;
                }
                let mut m = PolyMatrix::identity(field, 3, 2);
                m.set(0, 1, f);
                CoefficientFamily::from_polynomial_matrix(&m, GroupKind::H1)
            }
            Recipe::Tensor { left, right } => tensor_product(&left.build(p)?, &right.build(p)?),
            Recipe::DirectSum { left, right } => direct_sum(&left.build(p)?, &right.build(p)?),
            Recipe::LieConstruct { seed, dim, layers } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                construct_h1_charp(&random_lie_data(&mut rng, p, *dim, *layers))
            }
        }
    }
}

fn exponent_name(e: &[u32]) -> String {
    let mut s = String::new();
    for (v, &k) in ["x", "y", "z"].iter().zip(e) {
        match k {
            0 => {}
            1 => s.push_str(v),
            _ => s.push_str(&format!("{v}^{k}")),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Coalgebra { degree } => write!(f, "coalg(D={degree})"),
            Recipe::Subcoalgebra { seeds } => {
                let names: Vec<_> = seeds.iter().map(|e| exponent_name(e)).collect();
                write!(f, "sub({})", names.join(","))
            }
            Recipe::Primitive { x, y } => write!(f, "prim(x={x:?},y={y:?})"),
            Recipe::Tensor { left, right } => write!(f, "tensor({left},{right})"),
            Recipe::DirectSum { left, right } => write!(f, "sum({left},{right})"),
            Recipe::LieConstruct { seed, dim, layers } => write!(f, "lie(seed={seed},d={dim},layers={layers})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchViolation {
    /// 0-based position of the candidate in the run.
    pub index: usize,
    pub recipe: Recipe,
    pub dimension: usize,
    pub condition: char,
    /// Layer indices of the two matrices in the failed identity.
    pub witness_layers: [usize; 2],
    /// The two matrices, e.g. `["X0", "Y1"]`.
    pub witness: [String; 2],
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternalError {
    pub index: usize,
    pub recipe: Recipe,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub p: u32,
    pub target_dim: usize,
    pub seed: u64,
    pub budget: usize,
    pub candidates_examined: usize,
    pub violations: Vec<SearchViolation>,
    /// Failures that the theory rules out for every representation, such as
    /// condition (c), or candidates that could not be built.
    pub internal_errors: Vec<InternalError>,
    /// The admissible corpus ran out before the budget.
    pub exhausted: bool,
    pub caveat: Option<String>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "search p={} target_dim={} seed={} budget={}: {} candidate(s) examined{}",
            self.p,
            self.target_dim,
            self.seed,
            self.budget,
            self.candidates_examined,
            if self.exhausted { ", corpus exhausted" } else { "" }
        )?;
        for v in &self.violations {
            writeln!(
                f,
                "  #{} {} (dim {}): condition ({}) at ({},{}): {}",
                v.index, v.recipe, v.dimension, v.condition, v.witness[0], v.witness[1], v.description
            )?;
        }
        for e in &self.internal_errors {
            writeln!(f, "  internal error #{} {}: {}", e.index, e.recipe, e.message)?;
        }
        if let Some(c) = &self.caveat {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Violation(SearchViolation),
    Internal(InternalError),
}

fn evaluate(p: Prime, index: usize, recipe: &Recipe) -> Outcome {
    let internal = |message: String| Outcome::Internal(InternalError { index, recipe: recipe.clone(), message });
    let family = match recipe.build(p) {
        Ok(f) => f,
        Err(e) => return internal(format!("build failed: {e}")),
    };
    let layers = match extract_layers(&family) {
        Ok(l) => l,
        Err(e) => return internal(format!("layer extraction failed: {e}")),
    };
    let report = check_layer_relations(&layers, CheckMode::Report);
    let mut first = None;
    for v in report.violations() {
        let Site::Layer { condition, left, right } = &v.site else {
            continue;
        };
        match condition {
            Condition::Bracket | Condition::CrossCommute => {
                first.get_or_insert(SearchViolation {
                    index,
                    recipe: recipe.clone(),
                    dimension: family.dim(),
                    condition: condition.id(),
                    witness_layers: [left.layer, right.layer],
                    witness: [left.to_string(), right.to_string()],
                    description: v.description.clone(),
                });
            }
            _ => return internal(format!("unconditional identity failed: {}", v.description)),
        }
    }
    first.map_or(Outcome::Pass, Outcome::Violation)
}

/// Rebuilds a reported candidate and checks it again.
pub fn replay(p: Prime, violation: &SearchViolation) -> Option<SearchViolation> {
    match evaluate(p, violation.index, &violation.recipe) {
        Outcome::Violation(v) => Some(v),
        _ => None,
    }
}

struct Drawer {
    p: Prime,
    target: usize,
    rng: ChaCha8Rng,
    /// Coalgebra degrees not yet drawn, largest first.
    coalgebra_left: Vec<u32>,
}

impl Drawer {
    fn admissible_degrees(max_dim: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut d = 0;
        while coalgebra_dimension(GroupKind::H1, d) <= max_dim {
            out.push(d);
            d += 1;
        }
        out.reverse();
        out
    }

    fn available(&self, c: MixCategory) -> bool {
        match c {
            MixCategory::Coalgebra => !self.coalgebra_left.is_empty(),
            MixCategory::Subcoalgebra => true,
            MixCategory::Tensor => self.target >= 4,
            MixCategory::DirectSum => self.target >= 2,
            MixCategory::LieConstruct => self.p.get() as usize >= 2 * self.target,
        }
    }

    fn primitive(&mut self) -> Recipe {
        let layers = self.rng.random_range(1..=2);
        let p = self.p.get();
        let mut x: Vec<u32> = (0..layers).map(|_| self.rng.random_range(0..p)).collect();
        let y = (0..layers).map(|_| self.rng.random_range(0..p)).collect();
        if x.iter().all(|&a| a == 0) {
            x[0] = 1;
        }
        Recipe::Primitive { x, y }
    }

    fn seed_monomial(&mut self) -> Exponent {
        let p = self.p.get();
        let choices = [0, 1, 2.min(p), p];
        (0..3).map(|_| choices[self.rng.random_range(0..choices.len())]).collect()
    }

    /// A random atom of dimension at most `max_dim`.
    fn atom(&mut self, max_dim: usize) -> Recipe {
        if max_dim >= 2 && self.rng.random_bool(0.5) {
            for _ in 0..16 {
                let n = self.rng.random_range(1..=2);
                let seeds: Vec<Exponent> = (0..n).map(|_| self.seed_monomial()).collect();
                let r = Recipe::Subcoalgebra { seeds };
                if r.dimension(self.p) <= max_dim {
                    return r;
                }
            }
            return self.primitive();
        }
        let degrees = Self::admissible_degrees(max_dim);
        if max_dim >= 2 && self.rng.random_bool(0.5) {
            return self.primitive();
        }
        Recipe::Coalgebra { degree: degrees[self.rng.random_range(0..degrees.len())] }
    }

    fn draw(&mut self, c: MixCategory) -> Recipe {
        match c {
            MixCategory::Coalgebra => Recipe::Coalgebra { degree: self.coalgebra_left.remove(0) },
            MixCategory::Subcoalgebra => {
                let r = self.atom(self.target);
                match r {
                    Recipe::Coalgebra { .. } if self.target >= 2 => self.primitive(),
                    other => other,
                }
            }
            MixCategory::Tensor => {
                let left = self.atom(self.target / 2);
                let ld = left.dimension(self.p).max(1);
                let right = self.atom(self.target / ld);
                Recipe::Tensor { left: Box::new(left), right: Box::new(right) }
            }
            MixCategory::DirectSum => {
                let left = self.atom(self.target - 1);
                let ld = left.dimension(self.p);
                let right = self.atom(self.target - ld);
                Recipe::DirectSum { left: Box::new(left), right: Box::new(right) }
            }
            MixCategory::LieConstruct => Recipe::LieConstruct {
                seed: self.rng.random(),
                dim: self.rng.random_range(1..=self.target),
                layers: self.rng.random_range(1..=2),
            },
        }
    }
}

/// Runs a deterministic search: identical configurations give identical
/// reports.
pub fn run_conjecture_search(cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    let mut drawer = Drawer {
        p: cfg.p,
        target: cfg.target_dim,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        coalgebra_left: Drawer::admissible_degrees(cfg.target_dim),
    };
    let mut report = SearchReport {
        p: cfg.p.get(),
        target_dim: cfg.target_dim,
        seed: cfg.seed,
        budget: cfg.budget,
        candidates_examined: 0,
        violations: Vec::new(),
        internal_errors: Vec::new(),
        exhausted: false,
        caveat: None,
    };
    for index in 0..cfg.budget {
        let weights: Vec<(MixCategory, u32)> = MixCategory::ALL
            .into_iter()
            .filter(|&c| drawer.available(c))
            .map(|c| (c, cfg.mix.weight(c)))
            .filter(|&(_, w)| w > 0)
            .collect();
        let total: u32 = weights.iter().map(|&(_, w)| w).sum();
        if total == 0 {
            report.exhausted = true;
            break;
        }
        let mut pick = drawer.rng.random_range(0..total);
        let category = weights
            .iter()
            .find(|&&(_, w)| {
                if pick < w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|&(c, _)| c)
            .expect("pick is below the total weight");
        let recipe = drawer.draw(category);
        report.candidates_examined += 1;
        match evaluate(cfg.p, index, &recipe) {
            Outcome::Pass => {}
            Outcome::Violation(v) => {
                report.violations.push(v);
                if cfg.fail_fast {
                    break;
                }
            }
            Outcome::Internal(e) => report.internal_errors.push(e),
        }
    }
    if report.violations.is_empty() {
        report.caveat = Some(CAVEAT.to_string());
    }
    Ok(report)
}
