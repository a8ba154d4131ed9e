//! Hochschild cochains Hom_{Λ^e}(K_n, Λ)_a on a resolution K, the
//! cohomology HH^{n,a}, cup and circle products and the Gerstenhaber bracket.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{add_deg, add_term, render_terms, AlgElem, GradedAlgebra};
use crate::complex::{apply_map, Complex, ComplexRef, GenMap, ModElem, TensorComplex, TensorGen};
use crate::diagonal::Diagonal;
use crate::field::{Field, Scalar};
use crate::homotopy::{same, Homotopy, MapRef};
use crate::linalg::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HHError {
    #[error("value on generator {generator} has degree {got:?}, expected {expected:?}")]
    Inhomogeneous { generator: String, expected: Vec<i64>, got: Vec<i64> },
    #[error("degree {degree} needs the resolution through degree {needed}, built through {top}")]
    Degree { degree: usize, needed: usize, top: usize },
    #[error("cochains of bidegrees ({0}, {1:?}) and ({2}, {3:?}) cannot be added")]
    Bidegree(usize, Vec<i64>, usize, Vec<i64>),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("bracket of two degree-0 cochains has degree −1")]
    NegativeDegree,
    #[error("diagonal and homotopy are built on different resolutions")]
    Mismatch,
}

/// A homogeneous cochain K_n → Λ of internal degree a: |f(w)| = |w| − a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub n: usize,
    pub deg: Vec<i64>,
    pub values: BTreeMap<usize, AlgElem>,
}

impl Cochain {
    pub fn zero(n: usize, deg: Vec<i64>) -> Cochain {
        Cochain { n, deg, values: BTreeMap::new() }
    }

    /// Validate homogeneity against the resolution `k`.
    pub fn new(k: &dyn Complex, n: usize, deg: Vec<i64>, values: BTreeMap<usize, AlgElem>) -> Result<Cochain, HHError> {
        let alg = k.algebra();
        let mut clean = BTreeMap::new();
        for (g, v) in values {
            if v.is_empty() {
                continue;
            }
            let expected: Vec<i64> = k.internal_degree(n, g).iter().zip(&deg).map(|(w, a)| w - a).collect();
            for m in v.keys() {
                if alg.degree(*m) != expected.as_slice() {
                    return Err(HHError::Inhomogeneous {
                        generator: k.label(n, g),
                        expected,
                        got: alg.degree(*m).to_vec(),
                    });
                }
            }
            clean.insert(g, v);
        }
        Ok(Cochain { n, deg, values: clean })
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, k: &Field, other: &Cochain, c: &Scalar) -> Result<Cochain, HHError> {
        if self.n != other.n || (self.deg != other.deg && !other.is_zero() && !self.is_zero()) {
            return Err(HHError::Bidegree(self.n, self.deg.clone(), other.n, other.deg.clone()));
        }
        let deg = if self.is_zero() { other.deg.clone() } else { self.deg.clone() };
        let mut values = self.values.clone();
        for (g, v) in &other.values {
            let e = values.entry(*g).or_default();
            for (m, x) in v {
                add_term(k, e, *m, &k.mul(x, c));
            }
            if e.is_empty() {
                values.remove(g);
            }
        }
        Ok(Cochain { n: self.n, deg, values })
    }

    pub fn scale(&self, k: &Field, c: &Scalar) -> Cochain {
        Cochain::zero(self.n, self.deg.clone()).add(k, self, c).expect("same bidegree")
    }

    /// `coeff*monomial*label` terms, e.g. `x*e(1,0) - 2*e(2,0)`.
    pub fn render(&self, k: &dyn Complex) -> String {
        let alg = k.algebra();
        let terms = self.values.iter().flat_map(|(g, v)| {
            let label = k.label(self.n, *g);
            v.iter().map(move |(m, c)| {
                let name = if *m == alg.unit() { label.clone() } else { format!("{}*{}", alg.label(*m), label) };
                (name, c.clone())
            })
        });
        render_terms(alg.field(), terms)
    }
}

/// Add `c · l · v · r` into `acc`.
fn add_sandwich(alg: &GradedAlgebra, acc: &mut AlgElem, l: usize, v: &AlgElem, r: usize, c: &Scalar) {
    let k = alg.field();
    for (m, cm) in v {
        let cc = k.mul(c, cm);
        for (m1, c1) in alg.basis_mul(l, *m) {
            let c2 = k.mul(&cc, c1);
            for (m2, c3) in alg.basis_mul(*m1, r) {
                add_term(k, acc, *m2, &k.mul(&c2, c3));
            }
        }
    }
}

/// Cohomology in bidegree (n, a): representatives of a basis of
/// cocycles modulo coboundaries.
#[derive(Clone, Debug)]
pub struct HHBasis {
    pub n: usize,
    pub deg: Vec<i64>,
    pub reps: Vec<Cochain>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
}

struct Space {
    basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

/// Cochain-level structure on a resolution K with a diagonal and a
/// contracting homotopy.
pub struct HHContext {
    k: ComplexRef,
    diag: Diagonal,
    kkk: Arc<TensorComplex>,
    delta2: MapRef,
    homotopy: Homotopy,
    spaces: Mutex<HashMap<(usize, Vec<i64>), Arc<Space>>>,
    cob: Mutex<HashMap<(usize, Vec<i64>), Arc<SparseMatrix>>>,
    classes: Mutex<HashMap<(usize, Vec<i64>), Arc<(HHBasis, SparseMatrix)>>>,
}

impl HHContext {
    pub fn new(diag: Diagonal, homotopy: Homotopy) -> Result<HHContext, HHError> {
        if !same(&diag.k, &homotopy.k) {
            return Err(HHError::Mismatch);
        }
        let (kkk, delta2) = diag.iterated();
        Ok(HHContext {
            k: diag.k.clone(),
            diag,
            kkk,
            delta2,
            homotopy,
            spaces: Mutex::default(),
            cob: Mutex::default(),
            classes: Mutex::default(),
        })
    }

    pub fn resolution(&self) -> &ComplexRef {
        &self.k
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        self.k.algebra()
    }

    pub fn field(&self) -> &Field {
        self.k.algebra().field()
    }

    pub fn top(&self) -> usize {
        self.k.top_degree()
    }

    fn need(&self, degree: usize, needed: usize) -> Result<(), HHError> {
        if needed > self.top() {
            return Err(HHError::Degree { degree, needed, top: self.top() });
        }
        Ok(())
    }

    /// Build a cochain, checking homogeneity.
    pub fn cochain(&self, n: usize, deg: Vec<i64>, values: BTreeMap<usize, AlgElem>) -> Result<Cochain, HHError> {
        self.need(n, n)?;
        Cochain::new(self.k.as_ref(), n, deg, values)
    }

    /// The unit class: 1 on the (first) degree-0 generator.
    pub fn unit(&self) -> Cochain {
        let alg = self.algebra();
        let values = (0..self.k.rank(0)).map(|g| (g, alg.one())).collect();
        Cochain { n: 0, deg: vec![0; alg.grading_rank()], values }
    }

    /// f(x) for x of degree f.n.
    pub fn eval(&self, f: &Cochain, x: &ModElem) -> AlgElem {
        let alg = self.algebra();
        let mut out = AlgElem::new();
        for ((l, g, r), c) in x {
            if let Some(v) = f.values.get(g) {
                add_sandwich(alg, &mut out, *l, v, *r, c);
            }
        }
        out
    }

    /// f∘m on the resolution of `onto`, for a chain map m from that
    /// resolution to this one.
    pub fn pull_back(&self, f: &Cochain, m: &dyn GenMap, onto: &HHContext) -> Result<Cochain, HHError> {
        onto.need(f.n, f.n)?;
        let values = (0..onto.k.rank(f.n))
            .map(|w| (w, self.eval(f, &m.image(f.n, w))))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        Ok(Cochain { n: f.n, deg: f.deg.clone(), values })
    }

    /// (d*f)(w) = f(dw).
    pub fn coboundary(&self, f: &Cochain) -> Result<Cochain, HHError> {
        self.need(f.n, f.n + 1)?;
        let n = f.n + 1;
        let values = (0..self.k.rank(n))
            .map(|w| (w, self.eval(f, &self.k.differential(n, w))))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        Ok(Cochain { n, deg: f.deg.clone(), values })
    }

    pub fn is_cocycle(&self, f: &Cochain) -> Result<bool, HHError> {
        Ok(self.coboundary(f)?.is_zero())
    }

    /// Internal degrees a with C^{n}_a ≠ 0.
    pub fn internal_degrees(&self, n: usize) -> BTreeSet<Vec<i64>> {
        let alg = self.algebra();
        let mut out = BTreeSet::new();
        for g in 0..self.k.rank(n) {
            let w = self.k.internal_degree(n, g);
            for m in 0..alg.dim() {
                out.insert(w.iter().zip(alg.degree(m)).map(|(a, b)| a - b).collect());
            }
        }
        out
    }

    fn space(&self, n: usize, a: &[i64]) -> Arc<Space> {
        let key = (n, a.to_vec());
        if let Some(s) = self.spaces.lock().unwrap().get(&key) {
            return s.clone();
        }
        let alg = self.algebra();
        let mut basis = Vec::new();
        for g in 0..self.k.rank(n) {
            let w = self.k.internal_degree(n, g);
            for m in 0..alg.dim() {
                if add_deg(alg.degree(m), a) == w {
                    basis.push((g, m));
                }
            }
        }
        let index = basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let s = Arc::new(Space { basis, index });
        self.spaces.lock().unwrap().insert(key, s.clone());
        s
    }

    fn to_vec(&self, f: &Cochain, space: &Space) -> Vec<Scalar> {
        let k = self.field();
        let mut v = vec![k.zero(); space.basis.len()];
        for (g, val) in &f.values {
            for (m, c) in val {
                v[space.index[&(*g, *m)]] = c.clone();
            }
        }
        v
    }

    fn from_vec(&self, n: usize, a: &[i64], space: &Space, v: &[Scalar]) -> Cochain {
        let k = self.field();
        let mut values: BTreeMap<usize, AlgElem> = BTreeMap::new();
        for ((g, m), c) in space.basis.iter().zip(v) {
            if !k.is_zero(c) {
                values.entry(*g).or_default().insert(*m, c.clone());
            }
        }
        Cochain { n, deg: a.to_vec(), values }
    }

    /// Matrix of d*: C^n_a → C^{n+1}_a.
    fn coboundary_matrix(&self, n: usize, a: &[i64]) -> Arc<SparseMatrix> {
        let key = (n, a.to_vec());
        if let Some(m) = self.cob.lock().unwrap().get(&key) {
            return m.clone();
        }
        let alg = self.algebra();
        let k = self.field();
        let (src, dst) = (self.space(n, a), self.space(n + 1, a));
        let mut by_gen: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (i, (g, m)) in src.basis.iter().enumerate() {
            by_gen.entry(*g).or_default().push((*m, i));
        }
        let mut mat = SparseMatrix::zeros(k, dst.basis.len(), src.basis.len());
        for w in 0..self.k.rank(n + 1) {
            for ((l, g, r), c) in self.k.differential(n + 1, w).iter() {
                let Some(cols) = by_gen.get(g) else { continue };
                for (m, col) in cols {
                    let mut v = AlgElem::new();
                    add_sandwich(alg, &mut v, *l, &alg.basis(*m), *r, c);
                    for (m2, c2) in v {
                        mat.add_to(dst.index[&(w, m2)], *col, &c2);
                    }
                }
            }
        }
        let mat = Arc::new(mat);
        self.cob.lock().unwrap().insert(key, mat.clone());
        mat
    }

    /// Whether `f` is d* of some cochain.
    pub fn is_coboundary(&self, f: &Cochain) -> Result<bool, HHError> {
        if f.is_zero() {
            return Ok(true);
        }
        if f.n == 0 {
            return Ok(false);
        }
        self.need(f.n, f.n)?;
        let d = self.coboundary_matrix(f.n - 1, &f.deg);
        Ok(d.solve(&self.to_vec(f, &self.space(f.n, &f.deg))).is_some())
    }

    /// f and g represent the same class.
    pub fn same_class(&self, f: &Cochain, g: &Cochain) -> Result<bool, HHError> {
        if f.is_zero() && g.is_zero() {
            return Ok(true);
        }
        let diff = f.add(self.field(), g, &self.field().from_i64(-1))?;
        self.is_coboundary(&diff)
    }

    /// HH^{n,a}.
    pub fn cohomology(&self, n: usize, a: &[i64]) -> Result<HHBasis, HHError> {
        Ok(self.classes(n, a)?.0.clone())
    }

    /// HH^{n,a} for every internal degree a, in order.
    pub fn cohomology_all(&self, n: usize) -> Result<Vec<HHBasis>, HHError> {
        let degs: Vec<Vec<i64>> = self.internal_degrees(n).into_iter().collect();
        degs.par_iter().map(|a| self.cohomology(n, a)).collect()
    }

    fn classes(&self, n: usize, a: &[i64]) -> Result<Arc<(HHBasis, SparseMatrix)>, HHError> {
        self.need(n, n + 1)?;
        let key = (n, a.to_vec());
        if let Some(c) = self.classes.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let k = self.field();
        let space = self.space(n, a);
        let dim = space.basis.len();
        let z = self.coboundary_matrix(n, a).kernel_basis();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        if n > 0 {
            let d = self.coboundary_matrix(n - 1, a);
            for j in 0..d.cols() {
                let mut col = vec![k.zero(); dim];
                for (i, jj, x) in d.entries() {
                    if jj == j {
                        col[i] = x.clone();
                    }
                }
                cols.push(col);
            }
        }
        let as_matrix = |cols: &[Vec<Scalar>]| {
            let mut m = SparseMatrix::zeros(k, dim, cols.len());
            for (j, c) in cols.iter().enumerate() {
                for (i, x) in c.iter().enumerate() {
                    if !k.is_zero(x) {
                        m.set(i, j, x.clone());
                    }
                }
            }
            m
        };
        let mut rank = as_matrix(&cols).rank();
        let coboundary_dim = rank;
        let mut reps = Vec::new();
        for v in z.iter() {
            cols.push(v.clone());
            let r = as_matrix(&cols).rank();
            if r > rank {
                rank = r;
                reps.push(self.from_vec(n, a, &space, v));
            } else {
                cols.pop();
            }
        }
        // columns: coboundary images, then representatives
        let basis = HHBasis { n, deg: a.to_vec(), reps, cocycle_dim: z.len(), coboundary_dim };
        let out = Arc::new((basis, as_matrix(&cols)));
        self.classes.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Coordinates of the class of `f` in the basis of HH^{n,a}.
    pub fn reduce_to_class(&self, f: &Cochain) -> Result<Vec<Scalar>, HHError> {
        let c = self.classes(f.n, &f.deg)?;
        let (basis, m) = (&c.0, &c.1);
        if !self.is_cocycle(f)? {
            return Err(HHError::NotCocycle);
        }
        let x = m.solve(&self.to_vec(f, &self.space(f.n, &f.deg))).expect("cocycles lie in the span");
        let skip = m.cols() - basis.reps.len();
        Ok(x[skip..].to_vec())
    }

    /// (f⌣g)(w) = Σ l f(a) μ g(b) r over terms l⊗(a⊗μ⊗b)⊗r of Δ(w).
    pub fn cup(&self, f: &Cochain, g: &Cochain) -> Result<Cochain, HHError> {
        let n = f.n + g.n;
        self.need(n, n)?;
        let alg = self.algebra();
        let kk = &self.diag.kk;
        let mut values = BTreeMap::new();
        for w in 0..self.k.rank(n) {
            let mut out = AlgElem::new();
            for ((l, h, r), c) in self.diag.delta.image(n, w).iter() {
                let t = kk.decode(n, *h);
                if t.i != f.n {
                    continue;
                }
                let (Some(fa), Some(gb)) = (f.values.get(&t.a), g.values.get(&t.b)) else { continue };
                let mid = alg.mul(&alg.mul(fa, &alg.basis(t.mu)), gb);
                add_sandwich(alg, &mut out, *l, &mid, *r, c);
            }
            if !out.is_empty() {
                values.insert(w, out);
            }
        }
        Ok(Cochain { n, deg: add_deg(&f.deg, &g.deg), values })
    }

    /// f∘g = f φ (1⊗g⊗1) Δ^{(2)}, with the Koszul sign (−1)^{lj} on
    /// x⊗g(y)⊗z for x of degree l and g of degree j.
    pub fn circle(&self, f: &Cochain, g: &Cochain) -> Result<Cochain, HHError> {
        let (i, j) = (f.n, g.n);
        if i + j == 0 {
            return Err(HHError::NegativeDegree);
        }
        let n = i + j - 1;
        let deg = add_deg(&f.deg, &g.deg);
        if i == 0 {
            return Ok(Cochain::zero(n, deg));
        }
        self.need(n, n.max(i))?;
        let alg = self.algebra();
        let k = self.field();
        let kk = &self.homotopy.kk;
        let kk3 = self.inner_kk();
        let phi = &self.homotopy.phi;
        let mut values = BTreeMap::new();
        for w in 0..self.k.rank(n) {
            let mut y = ModElem::new();
            for ((l, h, r), c) in self.delta2.image(n, w).iter() {
                let t = self.kkk.decode(n, *h);
                let s = kk3.decode(t.i, t.a);
                if s.j != j {
                    continue;
                }
                let Some(gv) = g.values.get(&s.b) else { continue };
                let mid = alg.mul(&alg.mul(&alg.basis(s.mu), gv), &alg.basis(t.mu));
                let c = if (s.i * j) % 2 == 1 { k.neg(c) } else { c.clone() };
                for (m, cm) in mid {
                    let key = kk.encode(TensorGen { i: s.i, a: s.a, mu: m, j: t.j, b: t.b });
                    add_term(k, &mut y, (*l, key, *r), &k.mul(&c, &cm));
                }
            }
            if y.is_empty() {
                continue;
            }
            let z = apply_map(alg, phi.as_ref(), i - 1, &y);
            let v = self.eval(f, &z);
            if !v.is_empty() {
                values.insert(w, v);
            }
        }
        Ok(Cochain { n, deg, values })
    }

    fn inner_kk(&self) -> &TensorComplex {
        &self.diag.kk
    }

    /// [f, g] = f∘g − (−1)^{(i−1)(j−1)} g∘f.
    pub fn bracket(&self, f: &Cochain, g: &Cochain) -> Result<Cochain, HHError> {
        let a = self.circle(f, g)?;
        let b = self.circle(g, f)?;
        let k = self.field();
        // (i−1)(j−1) and (i+1)(j+1) have the same parity
        let s = if (f.n + 1) * (g.n + 1) % 2 == 1 { k.from_i64(-1) } else { k.one() };
        a.add(k, &b, &k.neg(&s))
    }

    fn sgn(&self, e: i64) -> Scalar {
        let k = self.field();
        if e.rem_euclid(2) == 1 { k.from_i64(-1) } else { k.one() }
    }

    /// [f, g], or `None` for two degree-0 cochains.
    fn bracket_or_none(&self, f: &Cochain, g: &Cochain) -> Result<Option<Cochain>, HHError> {
        if f.n + g.n == 0 {
            return Ok(None);
        }
        self.bracket(f, g).map(Some)
    }

    /// Σ c·x over the present terms is a coboundary.
    fn vanishes(&self, terms: &[(Scalar, Option<Cochain>)]) -> Result<bool, HHError> {
        let k = self.field();
        let mut acc: Option<Cochain> = None;
        for (c, x) in terms {
            let Some(x) = x else { continue };
            acc = Some(match acc {
                None => x.scale(k, c),
                Some(a) => a.add(k, x, c)?,
            });
        }
        match acc {
            None => Ok(true),
            Some(a) if a.is_zero() => Ok(true),
            Some(a) => self.is_coboundary(&a),
        }
    }

    /// f⌣g − (−1)^{ij} g⌣f is a coboundary.
    pub fn cup_commutes(&self, f: &Cochain, g: &Cochain) -> Result<bool, HHError> {
        let s = self.sgn((f.n * g.n) as i64);
        let k = self.field();
        self.vanishes(&[(k.one(), Some(self.cup(f, g)?)), (k.neg(&s), Some(self.cup(g, f)?))])
    }

    /// [f, g] = −(−1)^{(i−1)(j−1)} [g, f] at the chain level.
    pub fn antisymmetric(&self, f: &Cochain, g: &Cochain) -> Result<bool, HHError> {
        let (a, b) = (self.bracket(f, g)?, self.bracket(g, f)?);
        let s = self.sgn((f.n as i64 - 1) * (g.n as i64 - 1));
        Ok(a.add(self.field(), &b, &s)?.is_zero())
    }

    /// Σ_cyclic (−1)^{(i−1)(l−1)} [f, [g, h]] is a coboundary.
    pub fn jacobi(&self, f: &Cochain, g: &Cochain, h: &Cochain) -> Result<bool, HHError> {
        let (i, j, l) = (f.n as i64 - 1, g.n as i64 - 1, h.n as i64 - 1);
        let outer = |x: &Cochain, y: Option<Cochain>| -> Result<Option<Cochain>, HHError> {
            match y {
                Some(y) => self.bracket_or_none(x, &y),
                None => Ok(None),
            }
        };
        let t1 = outer(f, self.bracket_or_none(g, h)?)?;
        let t2 = outer(g, self.bracket_or_none(h, f)?)?;
        let t3 = outer(h, self.bracket_or_none(f, g)?)?;
        self.vanishes(&[(self.sgn(i * l), t1), (self.sgn(j * i), t2), (self.sgn(l * j), t3)])
    }

    /// [f⌣g, h] − [f, h]⌣g − (−1)^{i(l−1)} f⌣[g, h] is a coboundary.
    pub fn derivation_law(&self, f: &Cochain, g: &Cochain, h: &Cochain) -> Result<bool, HHError> {
        let k = self.field();
        let t1 = self.bracket_or_none(&self.cup(f, g)?, h)?;
        let t2 = self.bracket_or_none(f, h)?.map(|x| self.cup(&x, g)).transpose()?;
        let t3 = self.bracket_or_none(g, h)?.map(|x| self.cup(f, &x)).transpose()?;
        let s = self.sgn(f.n as i64 * (h.n as i64 - 1));
        self.vanishes(&[(k.one(), t1), (k.from_i64(-1), t2), (k.neg(&s), t3)])
    }

    /// a'⌣a − (−1)^{mm'} a⌣a' = (−1)^{m'} d*(a∘a') at the chain level,
    /// for cocycles a, a' of degrees m, m'.
    pub fn commutator_relation(&self, a: &Cochain, a2: &Cochain) -> Result<bool, HHError> {
        let k = self.field();
        let (m, m2) = (a.n as i64, a2.n as i64);
        let lhs = self.cup(a2, a)?.add(k, &self.cup(a, a2)?, &k.neg(&self.sgn(m * m2)))?;
        let rhs = self.coboundary(&self.circle(a, a2)?)?.scale(k, &self.sgn(m2));
        Ok(lhs.add(k, &rhs, &k.from_i64(-1))?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lambda_q, truncated_poly};
    use crate::complex::{BarResolution, KoszulDualNumbers, TwistedTot};
    use crate::diagonal::{diagonal_bar, diagonal_koszul_dual_numbers, diagonal_qci};
    use crate::homotopy::{phi_bar, phi_koszul_dual_numbers, phi_qci};

    fn qci(k: &Field, top: usize) -> (Arc<TwistedTot>, HHContext) {
        let (_, f) = lambda_q(k).unwrap();
        let px = Arc::new(KoszulDualNumbers::over(f.left.clone(), top));
        let py = Arc::new(KoszulDualNumbers::over(f.right.clone(), top));
        let tot = Arc::new(TwistedTot::new(px, py, &f.twist).unwrap());
        let ctx = HHContext::new(diagonal_qci(&tot).unwrap(), phi_qci(&tot)).unwrap();
        (tot, ctx)
    }

    fn cochain(ctx: &HHContext, tot: &TwistedTot, i: usize, l: usize, mono: &str, deg: [i64; 2]) -> Cochain {
        let alg = ctx.algebra();
        let m = alg.index_of(mono).unwrap();
        let values = BTreeMap::from([(tot.encode(i, 0, l, 0), alg.basis(m))]);
        ctx.cochain(i + l, deg.to_vec(), values).unwrap()
    }

    #[test]
    fn coboundaries_on_lambda_q() {
        let k = Field::rational_functions();
        let (tot, ctx) = qci(&k, 4);
        let u0 = cochain(&ctx, &tot, 1, 0, "x", [0, 0]);
        assert!(ctx.is_cocycle(&u0).unwrap());
        let e10 = cochain(&ctx, &tot, 1, 0, "1", [1, 0]);
        assert!(!ctx.is_cocycle(&e10).unwrap());
        let bad = ctx.cochain(1, vec![0, 0], BTreeMap::from([(tot.encode(1, 0, 0, 0), alg_y(&ctx))]));
        assert!(matches!(bad, Err(HHError::Inhomogeneous { .. })));
    }

    fn alg_y(ctx: &HHContext) -> AlgElem {
        ctx.algebra().basis(ctx.algebra().index_of("y").unwrap())
    }

    #[test]
    fn generic_dimensions() {
        let k = Field::rational_functions();
        let (_, ctx) = qci(&k, 5);
        let dims: Vec<usize> = (0..4)
            .map(|n| ctx.cohomology_all(n).unwrap().iter().map(|b| b.reps.len()).sum())
            .collect();
        assert_eq!(dims, vec![2, 2, 1, 0]);
    }

    #[test]
    fn dual_numbers_dimensions() {
        let k = Field::rationals();
        let c = Arc::new(KoszulDualNumbers::new(&k, "x", 7).unwrap());
        let ctx = HHContext::new(diagonal_koszul_dual_numbers(&c), phi_koszul_dual_numbers(&c)).unwrap();
        let dims: Vec<usize> = (0..6)
            .map(|n| ctx.cohomology_all(n).unwrap().iter().map(|b| b.reps.len()).sum())
            .collect();
        assert_eq!(dims, vec![2, 1, 1, 1, 1, 1]);
        // unit class survives in degree 0
        assert!(!ctx.is_coboundary(&ctx.unit()).unwrap());
        assert_eq!(ctx.reduce_to_class(&ctx.unit()).unwrap().len(), 1);
    }

    #[test]
    fn cup_and_circle_on_lambda_q() {
        let k = Field::rational_functions();
        let (tot, ctx) = qci(&k, 5);
        let u0 = cochain(&ctx, &tot, 1, 0, "x", [0, 0]);
        let u1 = cochain(&ctx, &tot, 0, 1, "y", [0, 0]);
        let cup = ctx.cup(&u0, &u1).unwrap();
        let xy = ctx.algebra().index_of("xy").unwrap();
        assert_eq!(cup.values[&tot.encode(1, 0, 1, 0)], ctx.algebra().basis(xy));
        assert_eq!(ctx.cup(&ctx.unit(), &u0).unwrap(), u0);
        let c = ctx.circle(&u0, &u0).unwrap();
        assert_eq!(c.values.get(&tot.encode(1, 0, 0, 0)), Some(&ctx.algebra().basis(ctx.algebra().index_of("x").unwrap())));
        assert!(ctx.circle(&u0, &u1).unwrap().values.get(&tot.encode(0, 0, 1, 0)).is_none());
        assert!(ctx.bracket(&u0, &u0).unwrap().is_zero());
    }

    #[test]
    fn bar_context_matches_koszul_dimensions() {
        let k = Field::rationals();
        let a = Arc::new(truncated_poly(&k, "x", 2).unwrap());
        let b = Arc::new(BarResolution::normalized(a, 5));
        let ctx = HHContext::new(diagonal_bar(&b), phi_bar(&b)).unwrap();
        let dims: Vec<usize> = (0..4)
            .map(|n| ctx.cohomology_all(n).unwrap().iter().map(|b| b.reps.len()).sum())
            .collect();
        assert_eq!(dims, vec![2, 1, 1, 1]);
    }

    #[test]
    fn commutator_relation_on_normalized_bar() {
        for q in ["2", "1", "-1"] {
            let k = Field::rationals().with_q(q).unwrap();
            let (a, _) = lambda_q(&k).unwrap();
            let b = Arc::new(BarResolution::normalized(Arc::new(a), 4));
            let ctx = HHContext::new(diagonal_bar(&b), phi_bar(&b)).unwrap();
            let reps: Vec<Cochain> = (0..3)
                .flat_map(|n| ctx.cohomology_all(n).unwrap())
                .flat_map(|b| b.reps)
                .collect();
            let mut checked = 0;
            for f in &reps {
                for g in &reps {
                    if f.n + g.n <= 4 && f.n + g.n > 0 {
                        assert!(ctx.commutator_relation(f, g).unwrap(), "q={q}: {} / {}", f.render(b.as_ref()), g.render(b.as_ref()));
                        checked += 1;
                    }
                }
            }
            assert!(checked > 20);
        }
    }
}
