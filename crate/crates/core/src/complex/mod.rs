//! Free bimodule complexes over a graded algebra Λ.
//!
//! An element of the free bimodule Λ⊗W_n⊗Λ is stored as a sparse map from
//! triples (left basis monomial, generator, right basis monomial) to scalars.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::algebra::{add_deg, add_term, AlgElem, GradedAlgebra};
use crate::field::{Field, Scalar};

mod bar;
mod koszul;
mod lift;
mod tensor;
mod twisted;

pub use bar::BarResolution;
pub use koszul::KoszulDualNumbers;
pub use lift::{check_chain_map, check_commutes, lift_chain_map, ChainMapError};
pub use tensor::{tensor_over_algebra, TensorComplex, TensorGen};
pub use twisted::TwistedTot;

/// (left monomial, generator, right monomial).
pub type Triple = (usize, usize, usize);
pub type ModElem = BTreeMap<Triple, Scalar>;

pub trait Complex: Send + Sync {
    fn algebra(&self) -> &Arc<GradedAlgebra>;
    /// Highest degree through which the complex is built.
    fn top_degree(&self) -> usize;
    fn rank(&self, n: usize) -> usize;
    fn internal_degree(&self, n: usize, g: usize) -> Vec<i64>;
    fn label(&self, n: usize, g: usize) -> String;
    /// Differential of generator `g` of degree `n ≥ 1`, in degree `n − 1`.
    fn differential(&self, n: usize, g: usize) -> Arc<ModElem>;
}

pub type ComplexRef = Arc<dyn Complex>;

/// Memo table for per-generator values.
#[derive(Default)]
pub(crate) struct Memo(RwLock<HashMap<(usize, usize), Arc<ModElem>>>);

impl Memo {
    pub(crate) fn get_or(&self, key: (usize, usize), f: impl FnOnce() -> ModElem) -> Arc<ModElem> {
        if let Some(v) = self.0.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(f());
        self.0.write().unwrap().insert(key, v.clone());
        v
    }
}

impl std::fmt::Debug for Memo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Memo({} entries)", self.0.read().unwrap().len())
    }
}

/// The generator `g` as the element 1⊗g⊗1.
pub fn gen_elem(alg: &GradedAlgebra, g: usize) -> ModElem {
    ModElem::from([((alg.unit(), g, alg.unit()), alg.field().one())])
}

pub fn add_elem(k: &Field, acc: &mut ModElem, x: &ModElem, c: &Scalar) {
    if k.is_zero(c) {
        return;
    }
    let one = k.is_one(c);
    for (key, v) in x {
        if one {
            add_term(k, acc, *key, v);
        } else {
            add_term(k, acc, *key, &k.mul(v, c));
        }
    }
}

pub fn scale_elem(k: &Field, x: &ModElem, c: &Scalar) -> ModElem {
    let mut out = ModElem::new();
    add_elem(k, &mut out, x, c);
    out
}

/// Add `c · a · x · b` into `acc` for basis monomials `a`, `b`.
pub fn add_acted(alg: &GradedAlgebra, acc: &mut ModElem, a: usize, x: &ModElem, b: usize, c: &Scalar) {
    let k = alg.field();
    let u = alg.unit();
    for ((l, g, r), v) in x {
        let cv = k.mul(c, v);
        if a == u && b == u {
            add_term(k, acc, (*l, *g, *r), &cv);
            continue;
        }
        let left = alg.basis_mul(a, *l);
        let right = alg.basis_mul(*r, b);
        for (l2, x1) in left {
            let c1 = k.mul(&cv, x1);
            for (r2, x2) in right {
                add_term(k, acc, (*l2, *g, *r2), &k.mul(&c1, x2));
            }
        }
    }
}

/// `l · x · r` for algebra elements `l`, `r`.
pub fn act(alg: &GradedAlgebra, l: &AlgElem, x: &ModElem, r: &AlgElem) -> ModElem {
    let mut out = ModElem::new();
    for (a, ca) in l {
        for (b, cb) in r {
            add_acted(alg, &mut out, *a, x, *b, &alg.field().mul(ca, cb));
        }
    }
    out
}

/// Extend a map on generators bimodule-linearly to `x`.
pub fn apply_on_gens(
    alg: &GradedAlgebra,
    x: &ModElem,
    mut image: impl FnMut(usize) -> Arc<ModElem>,
) -> ModElem {
    let mut cache: HashMap<usize, Arc<ModElem>> = HashMap::new();
    let mut out = ModElem::new();
    for ((a, g, b), c) in x {
        let y = cache.entry(*g).or_insert_with(|| image(*g)).clone();
        add_acted(alg, &mut out, *a, &y, *b, c);
    }
    out
}

/// Differential of an element of degree `n ≥ 1`.
pub fn d_elem(c: &dyn Complex, n: usize, x: &ModElem) -> ModElem {
    apply_on_gens(c.algebra(), x, |g| c.differential(n, g))
}

/// Internal degree of the triple `(a, g, b)`.
pub fn triple_degree(c: &dyn Complex, n: usize, t: &Triple) -> Vec<i64> {
    let alg = c.algebra();
    add_deg(&add_deg(alg.degree(t.0), &c.internal_degree(n, t.1)), alg.degree(t.2))
}

/// All triples of degree-`n` generators with internal degree `deg`, in order.
pub fn homogeneous_triples(c: &dyn Complex, n: usize, deg: &[i64]) -> Vec<Triple> {
    let alg = c.algebra();
    let dim = alg.dim();
    let mut out = Vec::new();
    for g in 0..c.rank(n) {
        let gd = c.internal_degree(n, g);
        for a in 0..dim {
            let ad = add_deg(alg.degree(a), &gd);
            for b in 0..dim {
                if add_deg(&ad, alg.degree(b)) == deg {
                    out.push((a, g, b));
                }
            }
        }
    }
    out
}

/// Render an element as `coeff*left*gen*right` terms.
pub fn render_elem(c: &dyn Complex, n: usize, x: &ModElem) -> String {
    let alg = c.algebra();
    let terms = x.iter().map(|((a, g, b), v)| {
        let mut parts = Vec::new();
        if *a != alg.unit() {
            parts.push(alg.label(*a).to_string());
        }
        parts.push(c.label(n, *g));
        if *b != alg.unit() {
            parts.push(alg.label(*b).to_string());
        }
        (parts.join("*"), v.clone())
    });
    crate::algebra::render_terms(alg.field(), terms)
}

/// Failures of structural checks, reported per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub degree: usize,
    pub generator: String,
    pub what: String,
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "degree {}, generator {}: {}", self.degree, self.generator, self.what)
    }
}

/// d∘d = 0, internal-degree preservation and, when W_0 is a single
/// generator, augmentation∘d₁ = 0, through `upto`.
pub fn check_complex(c: &dyn Complex, upto: usize) -> Result<(), CheckFailure> {
    let alg = c.algebra();
    let k = alg.field();
    let upto = upto.min(c.top_degree());
    // augmentation Λ⊗Λ → Λ, only for complexes with a single degree-0 generator
    let augmented = c.rank(0) == 1;
    for n in 1..=upto {
        for g in 0..c.rank(n) {
            let fail = |what: &str| CheckFailure {
                degree: n,
                generator: c.label(n, g),
                what: what.into(),
            };
            let dg = c.differential(n, g);
            let deg = c.internal_degree(n, g);
            if dg.keys().any(|t| triple_degree(c, n - 1, t) != deg) {
                return Err(fail("differential does not preserve internal degree"));
            }
            if n == 1 && augmented {
                let mut aug = AlgElem::new();
                for ((a, _, b), v) in dg.iter() {
                    for (m, x) in alg.basis_mul(*a, *b) {
                        add_term(k, &mut aug, *m, &k.mul(v, x));
                    }
                }
                if !aug.is_empty() {
                    return Err(fail("augmentation of d is nonzero"));
                }
            } else if n >= 2 && !d_elem(c, n - 1, &dg).is_empty() {
                return Err(fail("d∘d is nonzero"));
            }
        }
    }
    Ok(())
}

/// Strip `e(` `)` from a Koszul-style label.
pub(crate) fn koszul_index(label: &str) -> Option<&str> {
    label.strip_prefix("e(")?.strip_suffix(')')
}

/// A bimodule map given by images of generators, raising homological
/// degree by `offset()`.
pub trait GenMap: Send + Sync {
    fn offset(&self) -> usize;
    fn image(&self, n: usize, g: usize) -> Arc<ModElem>;
}

/// A generator map computed on demand from a closure and memoized.
pub struct FnMap<F> {
    offset: usize,
    f: F,
    memo: Memo,
}

impl<F: Fn(usize, usize) -> ModElem + Send + Sync> FnMap<F> {
    pub fn new(offset: usize, f: F) -> FnMap<F> {
        FnMap { offset, f, memo: Memo::default() }
    }
}

impl<F: Fn(usize, usize) -> ModElem + Send + Sync> GenMap for FnMap<F> {
    fn offset(&self) -> usize {
        self.offset
    }

    fn image(&self, n: usize, g: usize) -> Arc<ModElem> {
        self.memo.get_or((n, g), || (self.f)(n, g))
    }
}

/// A generator map stored as an explicit table, degree by degree.
#[derive(Debug, Clone)]
pub struct TableMap {
    pub offset: usize,
    pub images: Vec<Vec<Arc<ModElem>>>,
}

impl GenMap for TableMap {
    fn offset(&self) -> usize {
        self.offset
    }

    fn image(&self, n: usize, g: usize) -> Arc<ModElem> {
        self.images[n][g].clone()
    }
}

/// Apply a generator map to an element of degree `n`.
pub fn apply_map(alg: &GradedAlgebra, m: &dyn GenMap, n: usize, x: &ModElem) -> ModElem {
    apply_on_gens(alg, x, |g| m.image(n, g))
}
