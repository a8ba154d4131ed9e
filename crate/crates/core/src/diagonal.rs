//! Diagonal maps K → K⊗_ΛK, the embedding of the qci Koszul resolution in
//! the bar resolution, and the twisted Alexander–Whitney and
//! Eilenberg–Zilber maps between B̄(R⊗^tS) and Tot(B̄R⊗^tB̄S).

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{add_deg, add_term, AlgElem, AlgebraError, GradedAlgebra};
use crate::complex::{
    apply_map, check_commutes, gen_elem, koszul_index, BarResolution, CheckFailure, Complex,
    ComplexRef, FnMap, KoszulDualNumbers, ModElem, TensorComplex, TensorGen, TwistedTot,
};
use crate::field::{Field, Scalar, Twist};
use crate::homotopy::{same, MapRef, Sigma};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagonalError {
    #[error("the embedding is tabulated through degree 3 only, requested {0}")]
    Degree(usize),
    #[error("expected the Koszul resolution of a quantum complete intersection: {0}")]
    NotQci(String),
}

fn sign(k: &Field, e: usize) -> Scalar {
    if e % 2 == 0 {
        k.one()
    } else {
        k.from_i64(-1)
    }
}

/// A degree-preserving map of complexes given on generators, defined
/// through degree `top`.
#[derive(Clone)]
pub struct ChainMap {
    pub source: ComplexRef,
    pub target: ComplexRef,
    pub map: MapRef,
    pub top: usize,
}

impl ChainMap {
    pub fn new(source: ComplexRef, target: ComplexRef, map: MapRef) -> ChainMap {
        let top = source.top_degree().min(target.top_degree());
        ChainMap { source, target, map, top }
    }

    pub fn image(&self, n: usize, g: usize) -> Arc<ModElem> {
        self.map.image(n, g)
    }

    pub fn apply(&self, n: usize, x: &ModElem) -> ModElem {
        apply_map(self.target.algebra(), self.map.as_ref(), n, x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        let (a, b) = (self.map.clone(), other.map.clone());
        let alg = other.target.algebra().clone();
        ChainMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map: Arc::new(FnMap::new(0, move |n, g| apply_map(&alg, b.as_ref(), n, &a.image(n, g)))),
            top: self.top.min(other.top),
        }
    }

    /// d∘f = f∘d through `upto` (clamped to where the map is defined).
    pub fn check(&self, upto: usize) -> Result<(), CheckFailure> {
        check_commutes(self.source.as_ref(), self.target.as_ref(), self.map.as_ref(), upto.min(self.top))
    }

    /// f = identity on generators (source and target share numbering).
    pub fn check_identity(&self, upto: usize) -> Result<(), CheckFailure> {
        let alg = self.source.algebra();
        for n in 0..=upto.min(self.top) {
            for g in 0..self.source.rank(n) {
                if *self.image(n, g) != gen_elem(alg, g) {
                    return Err(CheckFailure {
                        degree: n,
                        generator: self.source.label(n, g),
                        what: "not the identity".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The identity on generators of `c`.
pub fn identity(c: &ComplexRef) -> MapRef {
    let alg = c.algebra().clone();
    Arc::new(FnMap::new(0, move |_, g| gen_elem(&alg, g)))
}

/// f ⊗ g : A⊗_ΛB → A'⊗_ΛB', with (f⊗g)(a⊗μ⊗b) = (−1)^{|g||a|} f(a)μ⊗g(b).
pub fn tensor_chain_maps(
    src: &Arc<TensorComplex>,
    tgt: &Arc<TensorComplex>,
    f: &MapRef,
    g: &MapRef,
) -> MapRef {
    let (src, tgt, f, g) = (src.clone(), tgt.clone(), f.clone(), g.clone());
    Arc::new(FnMap::new(f.offset() + g.offset(), move |n, h| {
        let t = src.decode(n, h);
        let fx = f.image(t.i, t.a);
        let gy = g.image(t.j, t.b);
        let out = tgt.join(t.i + f.offset(), &fx, t.mu, t.j + g.offset(), &gy);
        if (g.offset() * t.i) % 2 == 1 {
            let k = tgt.algebra().field();
            crate::complex::scale_elem(k, &out, &k.from_i64(-1))
        } else {
            out
        }
    }))
}

/// A diagonal map Δ: K → K⊗_ΛK.
#[derive(Clone)]
pub struct Diagonal {
    pub k: ComplexRef,
    pub kk: Arc<TensorComplex>,
    pub delta: MapRef,
}

impl Diagonal {
    fn build(k: ComplexRef, f: impl Fn(&TensorComplex, usize, usize) -> ModElem + Send + Sync + 'static) -> Self {
        let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
        let kk2 = kk.clone();
        let delta: MapRef = Arc::new(FnMap::new(0, move |n, g| f(&kk2, n, g)));
        Diagonal { k, kk, delta }
    }

    pub fn chain_map(&self) -> ChainMap {
        ChainMap::new(self.k.clone(), self.kk.clone(), self.delta.clone())
    }

    /// (K⊗K)⊗K and Δ^{(2)} = (Δ⊗1)Δ into it.
    pub fn iterated(&self) -> (Arc<TensorComplex>, MapRef) {
        let kk: ComplexRef = self.kk.clone();
        let kkk = Arc::new(TensorComplex::new(kk, self.k.clone()));
        let step = tensor_chain_maps(&self.kk, &kkk, &self.delta, &identity(&self.k));
        let delta = self.delta.clone();
        let alg = self.k.algebra().clone();
        let map: MapRef = Arc::new(FnMap::new(0, move |n, g| {
            apply_map(&alg, step.as_ref(), n, &delta.image(n, g))
        }));
        (kkk, map)
    }

    /// (Δ⊗1)Δ = (1⊗Δ)Δ on all generators through `upto`.
    pub fn check_coassociative(&self, upto: usize) -> Result<(), CheckFailure> {
        let alg = self.k.algebra().clone();
        let (left_kkk, left) = self.iterated();
        let kk: ComplexRef = self.kk.clone();
        let right_kkk = Arc::new(TensorComplex::new(self.k.clone(), kk));
        let step = tensor_chain_maps(&self.kk, &right_kkk, &identity(&self.k), &self.delta);
        let upto = upto.min(left_kkk.top_degree());
        for n in 0..=upto {
            for g in 0..self.k.rank(n) {
                let a = flatten_left(&left_kkk, &self.kk, n, &left.image(n, g));
                let rhs = apply_map(&alg, step.as_ref(), n, &self.delta.image(n, g));
                let b = flatten_right(&right_kkk, &self.kk, n, &rhs);
                if a != b {
                    return Err(CheckFailure {
                        degree: n,
                        generator: self.k.label(n, g),
                        what: "not coassociative".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

type Flat = BTreeMap<(usize, [(usize, usize); 3], usize, usize, usize), Scalar>;

fn flatten_left(kkk: &TensorComplex, kk: &TensorComplex, n: usize, x: &ModElem) -> Flat {
    x.iter()
        .map(|((l, h, r), c)| {
            let t = kkk.decode(n, *h);
            let s = kk.decode(t.i, t.a);
            ((*l, [(s.i, s.a), (s.j, s.b), (t.j, t.b)], s.mu, t.mu, *r), c.clone())
        })
        .collect()
}

fn flatten_right(kkk: &TensorComplex, kk: &TensorComplex, n: usize, x: &ModElem) -> Flat {
    x.iter()
        .map(|((l, h, r), c)| {
            let t = kkk.decode(n, *h);
            let s = kk.decode(t.j, t.b);
            ((*l, [(t.i, t.a), (s.i, s.a), (s.j, s.b)], t.mu, s.mu, *r), c.clone())
        })
        .collect()
}

/// Δ[λ₁|…|λ_n] = Σ_j [λ₁|…|λ_j] ⊗ [λ_{j+1}|…|λ_n].
pub fn diagonal_bar(b: &Arc<BarResolution>) -> Diagonal {
    let bar = b.clone();
    Diagonal::build(b.clone(), move |kk, n, g| {
        let alg = bar.algebra();
        let u = alg.unit();
        let t = bar.decode(n, g);
        let mut out = ModElem::new();
        for j in 0..=n {
            let a = bar.encode(&t[..j]).expect("letters of a generator");
            let b = bar.encode(&t[j..]).expect("letters of a generator");
            let h = kk.encode(TensorGen { i: j, a, mu: u, j: n - j, b });
            out.insert((u, h, u), alg.field().one());
        }
        out
    })
}

/// Δ(ε_n) = Σ_w ε_w ⊗ ε_{n−w}.
pub fn diagonal_koszul_dual_numbers(c: &Arc<KoszulDualNumbers>) -> Diagonal {
    Diagonal::build(c.clone(), move |kk, n, _| {
        let alg = kk.algebra();
        let u = alg.unit();
        (0..=n)
            .map(|w| {
                let h = kk.encode(TensorGen { i: w, a: 0, mu: u, j: n - w, b: 0 });
                ((u, h, u), alg.field().one())
            })
            .collect()
    })
}

/// q with t = −q^{−1}, after checking that `tot` is the Koszul resolution
/// of a quantum complete intersection in two variables.
fn qci_parameter(tot: &TwistedTot) -> Result<Scalar, DiagonalError> {
    let t = tot.twist();
    if t.rows() != 1 || t.cols() != 1 {
        return Err(DiagonalError::NotQci("twist must be 1×1".into()));
    }
    for f in [tot.left(), tot.right()] {
        let ok = (0..=f.top_degree()).all(|n| f.rank(n) == 1) && koszul_index(&f.label(1, 0)).is_some();
        if !ok {
            return Err(DiagonalError::NotQci("factors must be Koszul resolutions of dual numbers".into()));
        }
    }
    let k = t.field();
    Ok(k.neg(&k.inv(t.entry(0, 0))))
}

/// Δ(ε_{i,l}) = Σ_w Σ_j q^{j(i+j−w)} ε_{w−j,j} ⊗ ε_{i+j−w,l−j}.
pub fn diagonal_qci(tot: &Arc<TwistedTot>) -> Result<Diagonal, DiagonalError> {
    let q = qci_parameter(tot)?;
    let c = tot.clone();
    Ok(Diagonal::build(tot.clone(), move |kk, n, g| {
        let alg = kk.algebra();
        let k = alg.field();
        let u = alg.unit();
        let (i, _, l, _) = c.decode(n, g);
        let mut out = ModElem::new();
        for w in 0..=n {
            for j in w.saturating_sub(i)..=w.min(l) {
                let a = c.encode(w - j, 0, j, 0);
                let b = c.encode(i + j - w, 0, l - j, 0);
                let h = kk.encode(TensorGen { i: w, a, mu: u, j: n - w, b });
                let e = (j * (i + j - w)) as i64;
                add_term(k, &mut out, (u, h, u), &k.pow(&q, e));
            }
        }
        out
    }))
}

/// Δ_K = σ^{−1}(Δ_P ⊠ Δ_Q) for K = P⊗^tQ.
pub fn diagonal_twisted(tot: &Arc<TwistedTot>, dp: &Diagonal, dq: &Diagonal) -> Diagonal {
    assert!(same(tot.left(), &dp.k) && same(tot.right(), &dq.k), "diagonals of the factors expected");
    let k: ComplexRef = tot.clone();
    let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
    let sigma = Arc::new(Sigma::new(tot, &kk));
    let inv = sigma.inverse();
    let (c, dp, dq) = (tot.clone(), dp.delta.clone(), dq.delta.clone());
    let delta: MapRef = Arc::new(FnMap::new(0, move |n, g| {
        let (i, v, j, w) = c.decode(n, g);
        let z = sigma.target.combine(i, &dp.image(i, v), j, &dq.image(j, w));
        apply_map(c.algebra(), inv.as_ref(), n, &z)
    }));
    Diagonal { k, kk, delta }
}

/// ι: K → B for the qci Koszul resolution, through degree 3:
/// ε_{i,l} ↦ Σ q^{inv} 1⊗w⊗1 over words w in i letters x and l letters y,
/// inv counting pairs with y before x.
pub fn iota_qci(tot: &Arc<TwistedTot>, bar: &Arc<BarResolution>, upto: usize) -> Result<ChainMap, DiagonalError> {
    if upto > 3 {
        return Err(DiagonalError::Degree(upto));
    }
    let q = qci_parameter(tot)?;
    let (c, b) = (tot.clone(), bar.clone());
    let (ur, us) = (tot.left().algebra().unit(), tot.right().algebra().unit());
    let x = c.pair(1 - ur, us);
    let y = c.pair(ur, 1 - us);
    let map = FnMap::new(0, move |n, g| {
        let alg = c.algebra();
        let k = alg.field();
        let u = alg.unit();
        let (i, _, _, _) = c.decode(n, g);
        let mut out = ModElem::new();
        for xs in combinations(n, i) {
            let mut word = vec![y; n];
            let mut inv = 0;
            for (rank, p) in xs.iter().enumerate() {
                word[*p] = x;
                inv += p - rank;
            }
            let h = b.encode(&word).expect("x and y are letters");
            add_term(k, &mut out, (u, h, u), &k.pow(&q, inv as i64));
        }
        out
    });
    Ok(ChainMap { source: tot.clone(), target: bar.clone(), map: Arc::new(map), top: upto })
}

/// All increasing `d`-subsets of 0..n.
fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            if n - p < d - cur.len() {
                break;
            }
            cur.push(p);
            go(p + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Condition (c): Δ_B ι = (ι⊗ι) Δ_K on generators through `upto`.
pub fn check_condition_c(iota: &ChainMap, dk: &Diagonal, db: &Diagonal, upto: usize) -> Result<(), CheckFailure> {
    let ii = tensor_chain_maps(&dk.kk, &db.kk, &iota.map, &iota.map);
    let alg = db.k.algebra();
    for n in 0..=upto.min(iota.top) {
        for g in 0..dk.k.rank(n) {
            let lhs = apply_map(alg, db.delta.as_ref(), n, &iota.image(n, g));
            let rhs = apply_map(alg, ii.as_ref(), n, &dk.delta.image(n, g));
            if lhs != rhs {
                return Err(CheckFailure {
                    degree: n,
                    generator: dk.k.label(n, g),
                    what: "Δ_B ι differs from (ι⊗ι)Δ_K".into(),
                });
            }
        }
    }
    Ok(())
}

/// The complexes attached to a twisted tensor product R⊗^tS of augmented
/// algebras: K = Tot(B̄R ⊗^t B̄S), B̄(R⊗^tS) and B(R⊗^tS).
pub struct TwistedBar {
    pub r: Arc<BarResolution>,
    pub s: Arc<BarResolution>,
    pub tot: Arc<TwistedTot>,
    pub nbar: Arc<BarResolution>,
    pub bar: Arc<BarResolution>,
}

impl TwistedBar {
    pub fn new(
        r: Arc<GradedAlgebra>,
        s: Arc<GradedAlgebra>,
        twist: &Twist,
        top: usize,
    ) -> Result<TwistedBar, AlgebraError> {
        let rb = Arc::new(BarResolution::normalized(r, top));
        let sb = Arc::new(BarResolution::normalized(s, top));
        let tot = Arc::new(TwistedTot::new(rb.clone(), sb.clone(), twist)?);
        let nbar = Arc::new(BarResolution::normalized(tot.algebra().clone(), top));
        let bar = Arc::new(BarResolution::new(tot.algebra().clone(), top));
        Ok(TwistedBar { r: rb, s: sb, tot, nbar, bar })
    }

    fn degrees(&self, letters: &[usize], left: bool) -> Vec<Vec<i64>> {
        let alg = if left { self.r.algebra() } else { self.s.algebra() };
        letters.iter().map(|m| alg.degree(*m).to_vec()).collect()
    }

    /// AW^t: B̄(R⊗^tS) → K,
    /// [r₁s₁|…|r_ns_n] ↦ Σ_d (−1)^{d(n−d)} t* r₁⋯r_d[r_{d+1}|…|r_n] ⊗ [s₁|…|s_d]s_{d+1}⋯s_n
    /// with t* = ∏_{j<k} t^{⟨r_k|s_j⟩}.
    pub fn aw(self: &Arc<Self>) -> ChainMap {
        let me = self.clone();
        let map = FnMap::new(0, move |n, g| {
            let tot = &me.tot;
            let k = tot.algebra().field();
            let (ra, sa) = (me.r.algebra(), me.s.algebra());
            let word = me.nbar.decode(n, g);
            let (rs, ss): (Vec<usize>, Vec<usize>) = word.iter().map(|m| tot.unpair(*m)).unzip();
            let (rd, sd) = (me.degrees(&rs, true), me.degrees(&ss, false));
            let mut tstar = k.one();
            for kk in 0..n {
                for j in 0..kk {
                    tstar = k.mul(&tstar, &tot.tw(&rd[kk], &sd[j]));
                }
            }
            let mut out = ModElem::new();
            for d in 0..=n {
                let (Some(v), Some(w)) = (me.r.encode(&rs[d..]), me.s.encode(&ss[..d])) else {
                    continue;
                };
                let a = rs[..d].iter().fold(ra.one(), |acc, m| ra.mul(&acc, &unit_elem(k, *m)));
                let b = ss[d..].iter().fold(sa.one(), |acc, m| sa.mul(&acc, &unit_elem(k, *m)));
                let c = k.mul(&tstar, &sign(k, d * (n - d)));
                let h = tot.encode(n - d, v, d, w);
                for (am, ac) in &a {
                    for (bm, bc) in &b {
                        let key = (tot.pair(*am, sa.unit()), h, tot.pair(ra.unit(), *bm));
                        add_term(k, &mut out, key, &k.mul(&c, &k.mul(ac, bc)));
                    }
                }
            }
            out
        });
        ChainMap::new(self.nbar.clone(), self.tot.clone(), Arc::new(map))
    }

    /// EZ^t: K → B̄(R⊗^tS), a sum over shuffles ξ of (−1)^{|ξ|} t^{−inv(ξ)}.
    pub fn ez(self: &Arc<Self>) -> ChainMap {
        let me = self.clone();
        let map = FnMap::new(0, move |n, g| {
            let tot = &me.tot;
            let alg = tot.algebra();
            let k = alg.field();
            let (ur, us) = (me.r.algebra().unit(), me.s.algebra().unit());
            let (i, v, d, w) = tot.decode(n, g);
            let rs = me.r.decode(i, v);
            let ss = me.s.decode(d, w);
            let (rd, sd) = (me.degrees(&rs, true), me.degrees(&ss, false));
            let mut out = ModElem::new();
            for spos in combinations(n, d) {
                let mut word = Vec::with_capacity(n);
                let mut c = k.one();
                let mut inversions = 0;
                let (mut ri, mut si) = (0, 0);
                for p in 0..n {
                    if si < d && spos[si] == p {
                        word.push(tot.pair(ur, ss[si]));
                        si += 1;
                    } else {
                        for sdeg in &sd[..si] {
                            c = k.mul(&c, &tot.tw(&rd[ri], sdeg));
                        }
                        inversions += si;
                        word.push(tot.pair(rs[ri], us));
                        ri += 1;
                    }
                }
                let c = k.mul(&k.inv(&c), &sign(k, inversions));
                let h = me.nbar.encode(&word).expect("non-unit letters");
                add_term(k, &mut out, (alg.unit(), h, alg.unit()), &c);
            }
            out
        });
        ChainMap::new(self.tot.clone(), self.nbar.clone(), Arc::new(map))
    }

    /// ι_B: B̄ → B, the inclusion of non-unit words.
    pub fn iota_b(&self) -> ChainMap {
        let (nbar, bar) = (self.nbar.clone(), self.bar.clone());
        let map = FnMap::new(0, move |n, g| {
            let alg = bar.algebra();
            let h = bar.encode(&nbar.decode(n, g)).expect("every letter of B̄ is a letter of B");
            ModElem::from([((alg.unit(), h, alg.unit()), alg.field().one())])
        });
        ChainMap::new(self.nbar.clone(), self.bar.clone(), Arc::new(map))
    }

    /// ι = ι_B ∘ EZ^t.
    pub fn iota(self: &Arc<Self>) -> ChainMap {
        self.ez().then(&self.iota_b())
    }

    /// Δ_K on Tot(B̄R ⊗^t B̄S):
    /// [r|s] ↦ Σ_{j,i} (−1)^{i(n−d−j)} t^{−⟨r_{j+1}⋯|s₁⋯s_i⟩} [r₁⋯r_j|s₁⋯s_i] ⊗ [r_{j+1}⋯|s_{i+1}⋯].
    pub fn diagonal(self: &Arc<Self>) -> Diagonal {
        let me = self.clone();
        Diagonal::build(self.tot.clone(), move |kk, n, g| {
            let tot = &me.tot;
            let alg = tot.algebra();
            let k = alg.field();
            let u = alg.unit();
            let (p, v, d, w) = tot.decode(n, g);
            let rs = me.r.decode(p, v);
            let ss = me.s.decode(d, w);
            let (rd, sd) = (me.degrees(&rs, true), me.degrees(&ss, false));
            let zero_r = vec![0; me.r.algebra().grading_rank()];
            let zero_s = vec![0; me.s.algebra().grading_rank()];
            let mut out = ModElem::new();
            for j in 0..=p {
                let rtail = rd[j..].iter().fold(zero_r.clone(), |a, x| add_deg(&a, x));
                for i in 0..=d {
                    let shead = sd[..i].iter().fold(zero_s.clone(), |a, x| add_deg(&a, x));
                    let c = k.mul(&k.inv(&tot.tw(&rtail, &shead)), &sign(k, i * (p - j)));
                    let a = tot.encode(j, me.r.encode(&rs[..j]).unwrap(), i, me.s.encode(&ss[..i]).unwrap());
                    let b = tot.encode(p - j, me.r.encode(&rs[j..]).unwrap(), d - i, me.s.encode(&ss[i..]).unwrap());
                    let h = kk.encode(TensorGen { i: j + i, a, mu: u, j: n - j - i, b });
                    add_term(k, &mut out, (u, h, u), &c);
                }
            }
            out
        })
    }

    /// AW^t ∘ EZ^t = 1 through `upto`.
    pub fn check_aw_ez(self: &Arc<Self>, upto: usize) -> Result<(), CheckFailure> {
        self.ez().then(&self.aw()).check_identity(upto)
    }

    /// Condition (c) for ι = ι_B EZ^t and the bar diagonal on B.
    pub fn check_condition_c(self: &Arc<Self>, upto: usize) -> Result<(), CheckFailure> {
        check_condition_c(&self.iota(), &self.diagonal(), &diagonal_bar(&self.bar), upto)
    }
}

fn unit_elem(k: &Field, m: usize) -> AlgElem {
    AlgElem::from([(m, k.one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lambda_q, truncated_poly};
    use crate::complex::{check_complex, render_elem};

    struct Qci {
        tot: Arc<TwistedTot>,
        px: Arc<KoszulDualNumbers>,
        py: Arc<KoszulDualNumbers>,
    }

    fn qci(k: &Field, top: usize) -> Qci {
        let (_, f) = lambda_q(k).unwrap();
        let px = Arc::new(KoszulDualNumbers::over(f.left.clone(), top));
        let py = Arc::new(KoszulDualNumbers::over(f.right.clone(), top));
        let tot = Arc::new(TwistedTot::new(px.clone(), py.clone(), &f.twist).unwrap());
        Qci { tot, px, py }
    }

    fn twisted_bar(k: &Field, top: usize) -> Arc<TwistedBar> {
        let (_, f) = lambda_q(k).unwrap();
        Arc::new(TwistedBar::new(f.left, f.right, &f.twist, top).unwrap())
    }

    #[test]
    fn bar_diagonal() {
        let k = Field::rationals();
        let a = Arc::new(truncated_poly(&k, "x", 3).unwrap());
        let b = Arc::new(BarResolution::new(a, 4));
        let d = diagonal_bar(&b);
        assert_eq!(render_elem(d.kk.as_ref(), 0, &d.delta.image(0, 0)), "[]⊗[]");
        let g = b.encode(&[1]).unwrap();
        assert_eq!(render_elem(d.kk.as_ref(), 1, &d.delta.image(1, g)), "[]⊗[x] + [x]⊗[]");
        d.chain_map().check(4).unwrap();
        d.check_coassociative(3).unwrap();
    }

    #[test]
    fn qci_diagonal() {
        let k = Field::rational_functions();
        let c = qci(&k, 6);
        let d = diagonal_qci(&c.tot).unwrap();
        let g = c.tot.encode(1, 0, 1, 0);
        assert_eq!(
            render_elem(d.kk.as_ref(), 2, &d.delta.image(2, g)),
            "e(0,0)⊗e(1,1) + q*e(0,1)⊗e(1,0) + e(1,0)⊗e(0,1) + e(1,1)⊗e(0,0)"
        );
        assert_eq!(render_elem(d.kk.as_ref(), 0, &d.delta.image(0, 0)), "e(0,0)⊗e(0,0)");
        d.chain_map().check(6).unwrap();
        d.check_coassociative(4).unwrap();
    }

    #[test]
    fn qci_diagonal_is_twisted_composite() {
        let k = Field::rational_functions();
        let c = qci(&k, 6);
        let (dx, dy) = (diagonal_koszul_dual_numbers(&c.px), diagonal_koszul_dual_numbers(&c.py));
        dx.chain_map().check(6).unwrap();
        let composite = diagonal_twisted(&c.tot, &dx, &dy);
        let direct = diagonal_qci(&c.tot).unwrap();
        for n in 0..=6 {
            for g in 0..c.tot.rank(n) {
                assert_eq!(composite.delta.image(n, g), direct.delta.image(n, g), "degree {n}");
            }
        }
    }

    #[test]
    fn iota_table_and_condition_c() {
        let k = Field::rational_functions();
        let c = qci(&k, 3);
        let bar = Arc::new(BarResolution::new(c.tot.algebra().clone(), 3));
        let iota = iota_qci(&c.tot, &bar, 3).unwrap();
        let show = |i, l| render_elem(bar.as_ref(), i + l, &iota.image(i + l, c.tot.encode(i, 0, l, 0)));
        assert_eq!(show(0, 0), "[]");
        assert_eq!(show(1, 1), "q*[y|x] + [x|y]");
        assert_eq!(show(1, 2), "q^2*[y|y|x] + q*[y|x|y] + [x|y|y]");
        assert_eq!(show(2, 1), "q^2*[y|x|x] + q*[x|y|x] + [x|x|y]");
        iota.check(3).unwrap();
        let dk = diagonal_qci(&c.tot).unwrap();
        check_condition_c(&iota, &dk, &diagonal_bar(&bar), 3).unwrap();
        assert_eq!(iota_qci(&c.tot, &bar, 4).err(), Some(DiagonalError::Degree(4)));
    }

    #[test]
    fn aw_ez_for_lambda_q() {
        let k = Field::rational_functions();
        let tb = twisted_bar(&k, 4);
        check_complex(tb.tot.as_ref(), 4).unwrap();
        tb.aw().check(3).unwrap();
        tb.ez().check(4).unwrap();
        tb.check_aw_ez(4).unwrap();
    }

    #[test]
    fn aw_degree_zero_twist() {
        let k = Field::rational_functions();
        let tb = twisted_bar(&k, 2);
        let t = &tb.tot;
        let (ra, sa) = (t.left().algebra(), t.right().algebra());
        let (x, y) = (ra.index_of("x").unwrap(), sa.index_of("y").unwrap());
        // (x⊗y)·[]·(x⊗1) ↦ t^{⟨x|y⟩} x⊗x ⊗^t y⊗1
        let src = ModElem::from([((t.pair(x, y), 0, t.pair(x, sa.unit())), k.one())]);
        let got = tb.aw().apply(0, &src);
        let rx = ModElem::from([((x, 0, x), k.one())]);
        let sy = ModElem::from([((y, 0, sa.unit()), k.one())]);
        let expect = crate::complex::scale_elem(&k, &t.combine(0, &rx, 0, &sy), &k.parse("-1/q").unwrap());
        assert_eq!(got, expect);
    }

    #[test]
    fn ez_degree_one_one() {
        let k = Field::rational_functions();
        let tb = twisted_bar(&k, 2);
        let g = tb.tot.encode(1, 0, 1, 0);
        let got = render_elem(tb.nbar.as_ref(), 2, &tb.ez().image(2, g));
        // −t^{−⟨x|y⟩} = −(−q) = q on the swapped shuffle
        assert_eq!(got, "q*[y|x] + [x|y]");
    }

    #[test]
    fn twisted_nbar_diagonal() {
        let k = Field::rational_functions();
        let tb = twisted_bar(&k, 4);
        let d = tb.diagonal();
        let g = tb.tot.encode(1, 0, 1, 0);
        let img = d.delta.image(2, g);
        assert_eq!(img.len(), 4);
        assert!(img.values().any(|c| *c == k.parse("q").unwrap()));
        d.chain_map().check(4).unwrap();
        d.check_coassociative(3).unwrap();
        tb.check_condition_c(3).unwrap();
        // agrees with σ^{−1}(Δ_{B̄R} ⊠ Δ_{B̄S})
        let composite = diagonal_twisted(&tb.tot, &diagonal_bar(&tb.r), &diagonal_bar(&tb.s));
        maps_agree_on(&d, &composite, 4);
    }

    fn maps_agree_on(a: &Diagonal, b: &Diagonal, upto: usize) {
        for n in 0..=upto {
            for g in 0..a.k.rank(n) {
                assert_eq!(a.delta.image(n, g), b.delta.image(n, g), "degree {n} generator {}", a.k.label(n, g));
            }
        }
    }

    #[test]
    fn trivial_twist_coefficients_are_signs() {
        let k = Field::rationals();
        let r = Arc::new(truncated_poly(&k, "x", 3).unwrap());
        let s = Arc::new(truncated_poly(&k, "y", 2).unwrap());
        let tb = Arc::new(TwistedBar::new(r, s, &Twist::trivial(&k, 1, 1), 3).unwrap());
        let (aw, ez) = (tb.aw(), tb.ez());
        for n in 0..=3 {
            for g in 0..tb.nbar.rank(n) {
                assert!(aw.image(n, g).values().all(|c| k.is_one(c) || k.is_one(&k.neg(c))));
            }
            for g in 0..tb.tot.rank(n) {
                assert!(ez.image(n, g).values().all(|c| k.is_one(c) || k.is_one(&k.neg(c))));
            }
        }
        aw.check(3).unwrap();
        tb.check_aw_ez(3).unwrap();
    }
}
