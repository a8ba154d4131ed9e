//! The collapse maps F^l, F^r, F = F^l − F^r on K⊗_ΛK, the isomorphism σ
//! for twisted tensor products, and contracting homotopies φ with
//! dφ + φd = F.

use std::sync::Arc;

use crate::algebra::add_term;
use crate::complex::{
    add_elem, apply_map, d_elem, gen_elem, scale_elem, BarResolution, CheckFailure,
    Complex, ComplexRef, FnMap, GenMap, KoszulDualNumbers, ModElem, TensorComplex, TensorGen,
    TwistedTot,
};
use crate::field::Scalar;

pub type MapRef = Arc<dyn GenMap>;

/// A resolution K together with K⊗_ΛK and a contracting homotopy on it.
#[derive(Clone)]
pub struct Homotopy {
    pub k: ComplexRef,
    pub kk: Arc<TensorComplex>,
    pub phi: MapRef,
}

fn sign(k: &crate::field::Field, e: usize) -> Scalar {
    if e % 2 == 0 {
        k.one()
    } else {
        k.from_i64(-1)
    }
}

pub(crate) fn same<T: ?Sized, U: ?Sized>(a: &Arc<T>, b: &Arc<U>) -> bool {
    std::ptr::eq(Arc::as_ptr(a) as *const (), Arc::as_ptr(b) as *const ())
}

/// F^l: a⊗μ⊗b ↦ μb when a has degree 0, else 0.
pub fn f_left(kk: &Arc<TensorComplex>) -> MapRef {
    let kk = kk.clone();
    Arc::new(FnMap::new(0, move |n, g| {
        let t = kk.decode(n, g);
        let alg = kk.algebra();
        if t.i != 0 {
            return ModElem::new();
        }
        ModElem::from([((t.mu, t.b, alg.unit()), alg.field().one())])
    }))
}

/// F^r: a⊗μ⊗b ↦ aμ when b has degree 0, else 0.
pub fn f_right(kk: &Arc<TensorComplex>) -> MapRef {
    let kk = kk.clone();
    Arc::new(FnMap::new(0, move |n, g| {
        let t = kk.decode(n, g);
        let alg = kk.algebra();
        if t.j != 0 {
            return ModElem::new();
        }
        ModElem::from([((alg.unit(), t.a, t.mu), alg.field().one())])
    }))
}

/// F = F^l − F^r.
pub fn f_total(kk: &Arc<TensorComplex>) -> MapRef {
    let (l, r) = (f_left(kk), f_right(kk));
    let k = kk.algebra().field().clone();
    Arc::new(FnMap::new(0, move |n, g| {
        let mut out = (*l.image(n, g)).clone();
        add_elem(&k, &mut out, &r.image(n, g), &k.from_i64(-1));
        out
    }))
}

/// G on the (normalized) bar resolution: a⊗μ⊗b ↦ (−1)^{|a|} [a|μ|b],
/// zero on μ = 1 in the normalized case.
pub fn phi_bar(b: &Arc<BarResolution>) -> Homotopy {
    let k: ComplexRef = b.clone();
    let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
    let (b2, kk2) = (b.clone(), kk.clone());
    let phi = FnMap::new(1, move |n, g| {
        let t = kk2.decode(n, g);
        let alg = b2.algebra();
        let mut tuple = b2.decode(t.i, t.a);
        tuple.push(t.mu);
        tuple.extend(b2.decode(t.j, t.b));
        match b2.encode(&tuple) {
            Some(h) => ModElem::from([((alg.unit(), h, alg.unit()), sign(alg.field(), t.i))]),
            None => ModElem::new(),
        }
    });
    Homotopy { k, kk, phi: Arc::new(phi) }
}

/// φ(ε_i ⊗ x^m ε_j) = δ_{m,1} (−1)^i ε_{i+j+1} on the Koszul resolution of
/// the dual numbers.
pub fn phi_koszul_dual_numbers(c: &Arc<KoszulDualNumbers>) -> Homotopy {
    let k: ComplexRef = c.clone();
    let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
    let kk2 = kk.clone();
    let phi = FnMap::new(1, move |n, g| {
        let t = kk2.decode(n, g);
        let alg = kk2.algebra();
        if t.mu == alg.unit() {
            return ModElem::new();
        }
        ModElem::from([((alg.unit(), 0, alg.unit()), sign(alg.field(), t.i))])
    });
    Homotopy { k, kk, phi: Arc::new(phi) }
}

/// The explicit piecewise homotopy on the Koszul resolution of Λ_q:
/// φ(ε_{i,j} ⊗ x^l y^m ε_{p,r}).
pub fn phi_qci(tot: &Arc<TwistedTot>) -> Homotopy {
    let k: ComplexRef = tot.clone();
    let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
    let (tot2, kk2) = (tot.clone(), kk.clone());
    let field = tot.algebra().field().clone();
    let q = field.q().expect("Λ_q needs q");
    let mq = field.neg(&q);
    let phi = FnMap::new(1, move |n, g| {
        let t = kk2.decode(n, g);
        let (i, _, j, _) = tot2.decode(t.i, t.a);
        let (p, _, r, _) = tot2.decode(t.j, t.b);
        let (l, m) = tot2.unpair(t.mu);
        let alg = tot2.algebra();
        let u = alg.unit();
        let y_m = tot2.pair(0, m);
        let x_l = tot2.pair(l, 0);
        let mut out = ModElem::new();
        let first = |out: &mut ModElem, deg_p: usize| {
            if l == 1 {
                let c = field.mul(&field.pow(&mq, (m * i + m) as i64), &sign(&field, i));
                let h = tot2.encode(i + deg_p + 1, 0, r, 0);
                add_term(&field, out, (y_m, h, u), &c);
            }
        };
        let second = |out: &mut ModElem, sgn: usize| {
            if m == 1 {
                let c = field.mul(&field.pow(&mq, (l * r + l) as i64), &sign(&field, sgn));
                let h = tot2.encode(i, 0, j + r + 1, 0);
                add_term(&field, out, (u, h, x_l), &c);
            }
        };
        match (j == 0, p == 0) {
            (true, false) => first(&mut out, p),
            (true, true) => {
                first(&mut out, 0);
                second(&mut out, i);
            }
            (false, true) => second(&mut out, i + j),
            (false, false) => {}
        }
        out
    });
    Homotopy { k, kk, phi: Arc::new(phi) }
}

/// The isomorphism σ: (P⊗^tQ) ⊗_Λ (P⊗^tQ) → (P⊗_R P) ⊗^t (Q⊗_S Q) and its
/// inverse, on generators:
/// (x⊗y) ⊗ (r⊗s) ⊗ (x'⊗y') ↦ (−1)^{jp} t^{⟨x'|s⟩+⟨r|y⟩+⟨x'|y⟩} (x⊗r⊗x') ⊗ (y⊗s⊗y').
pub struct Sigma {
    pub tot: Arc<TwistedTot>,
    pub kk: Arc<TensorComplex>,
    pub target: Arc<TwistedTot>,
    pub pp: Arc<TensorComplex>,
    pub qq: Arc<TensorComplex>,
}

impl Sigma {
    pub fn new(tot: &Arc<TwistedTot>, kk: &Arc<TensorComplex>) -> Sigma {
        let pp = Arc::new(TensorComplex::new(tot.left().clone(), tot.left().clone()));
        let qq = Arc::new(TensorComplex::new(tot.right().clone(), tot.right().clone()));
        let target = Arc::new(TwistedTot::with_algebra(
            pp.clone(),
            qq.clone(),
            tot.twist(),
            tot.algebra().clone(),
        ));
        Sigma { tot: tot.clone(), kk: kk.clone(), target, pp, qq }
    }

    /// (coefficient, target generator) for generator `g` of (K⊗K)_n.
    pub fn on_gen(&self, n: usize, g: usize) -> (Scalar, usize) {
        let k = self.tot.algebra().field();
        let t = self.kk.decode(n, g);
        let (i, x, j, y) = self.tot.decode(t.i, t.a);
        let (p, x2, l, y2) = self.tot.decode(t.j, t.b);
        let (r, s) = self.tot.unpair(t.mu);
        let (ra, sa) = (self.tot.left().algebra(), self.tot.right().algebra());
        let dx2 = self.tot.left().internal_degree(p, x2);
        let dy = self.tot.right().internal_degree(j, y);
        let c = k.mul(
            &k.mul(&self.tot.tw(&dx2, sa.degree(s)), &self.tot.tw(ra.degree(r), &dy)),
            &self.tot.tw(&dx2, &dy),
        );
        let c = k.mul(&c, &sign(k, j * p));
        let xg = self.pp.encode(TensorGen { i, a: x, mu: r, j: p, b: x2 });
        let yg = self.qq.encode(TensorGen { i: j, a: y, mu: s, j: l, b: y2 });
        (c, self.target.encode(i + p, xg, j + l, yg))
    }

    /// Inverse on a generator of the target: (coefficient, generator of K⊗K).
    pub fn inverse_on_gen(&self, n: usize, h: usize) -> (Scalar, usize) {
        let k = self.tot.algebra().field();
        let (a, xg, b, yg) = self.target.decode(n, h);
        let xt = self.pp.decode(a, xg);
        let yt = self.qq.decode(b, yg);
        let g1 = self.tot.encode(xt.i, xt.a, yt.i, yt.a);
        let g2 = self.tot.encode(xt.j, xt.b, yt.j, yt.b);
        let mu = self.tot.pair(xt.mu, yt.mu);
        let g = self.kk.encode(TensorGen { i: xt.i + yt.i, a: g1, mu, j: xt.j + yt.j, b: g2 });
        let (c, back) = self.on_gen(n, g);
        debug_assert_eq!(back, h);
        (k.inv(&c), g)
    }

    pub fn forward(self: &Arc<Self>) -> MapRef {
        let s = self.clone();
        Arc::new(FnMap::new(0, move |n, g| {
            let (c, h) = s.on_gen(n, g);
            let u = s.tot.algebra().unit();
            ModElem::from([((u, h, u), c)])
        }))
    }

    pub fn inverse(self: &Arc<Self>) -> MapRef {
        let s = self.clone();
        Arc::new(FnMap::new(0, move |n, h| {
            let (c, g) = s.inverse_on_gen(n, h);
            let u = s.tot.algebra().unit();
            ModElem::from([((u, g, u), c)])
        }))
    }

    /// Apply f ⊠ g to the target generator (X, Y), X of degree a: the
    /// Koszul sign (−1)^{|g|·a} is included.
    pub fn tensor_maps(
        &self,
        f: &dyn GenMap,
        g: &dyn GenMap,
        n: usize,
        h: usize,
    ) -> ModElem {
        let (a, xg, b, yg) = self.target.decode(n, h);
        let fx = f.image(a, xg);
        let gy = g.image(b, yg);
        let out = self.tot.combine(a + f.offset(), &fx, b + g.offset(), &gy);
        if (g.offset() * a) % 2 == 1 {
            scale_elem(self.tot.algebra().field(), &out, &self.tot.algebra().field().from_i64(-1))
        } else {
            out
        }
    }
}

/// φ = (φ_P ⊠ F^l_Q + F^r_P ⊠ φ_Q) σ for K = P⊗^tQ.
pub fn phi_twisted(tot: &Arc<TwistedTot>, hp: &Homotopy, hq: &Homotopy) -> Homotopy {
    assert!(same(tot.left(), &hp.k) && same(tot.right(), &hq.k), "homotopies of the factors expected");
    let k: ComplexRef = tot.clone();
    let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
    let sigma = Arc::new(Sigma::new(tot, &kk));
    // σ builds its own P⊗P, Q⊗Q; the factor homotopies must act on those
    let (php, fr_p) = (rebind(&hp.phi, &hp.kk, &sigma.pp), f_right(&sigma.pp));
    let (phq, fl_q) = (rebind(&hq.phi, &hq.kk, &sigma.qq), f_left(&sigma.qq));
    let s2 = sigma.clone();
    let field = tot.algebra().field().clone();
    let phi = FnMap::new(1, move |n, g| {
        let (c, h) = s2.on_gen(n, g);
        let mut out = s2.tensor_maps(php.as_ref(), fl_q.as_ref(), n, h);
        add_elem(&field, &mut out, &s2.tensor_maps(fr_p.as_ref(), phq.as_ref(), n, h), &field.one());
        scale_elem(&field, &out, &c)
    });
    Homotopy { k, kk, phi: Arc::new(phi) }
}

/// Transport a map defined on one copy of K⊗K to another copy built from
/// the same K (identical generator numbering).
fn rebind(m: &MapRef, from: &Arc<TensorComplex>, to: &Arc<TensorComplex>) -> MapRef {
    assert!(same(from.left(), to.left()) && same(from.right(), to.right()));
    m.clone()
}

/// Check dφ + φd = F on all generators of K⊗K through degree `upto`.
pub fn check_homotopy(h: &Homotopy, upto: usize) -> Result<(), CheckFailure> {
    let f = f_total(&h.kk);
    let alg = h.k.algebra();
    for n in 0..=upto.min(h.kk.top_degree()).min(h.k.top_degree() - 1) {
        for g in 0..h.kk.rank(n) {
            let mut lhs = d_elem(h.k.as_ref(), n + 1, &h.phi.image(n, g));
            if n > 0 {
                let t = apply_map(alg, h.phi.as_ref(), n - 1, &h.kk.differential(n, g));
                add_elem(alg.field(), &mut lhs, &t, &alg.field().one());
            }
            if lhs != *f.image(n, g) {
                return Err(CheckFailure {
                    degree: n,
                    generator: h.kk.label(n, g),
                    what: "dφ + φd differs from F".into(),
                });
            }
        }
    }
    Ok(())
}

/// (F^l_P ⊠ F^l_Q − F^r_P ⊠ F^r_Q) σ = F_{P⊗^tQ} on generators through `upto`.
pub fn check_f_factorization(sigma: &Arc<Sigma>, upto: usize) -> Result<(), CheckFailure> {
    let field = sigma.tot.algebra().field();
    let (flp, flq) = (f_left(&sigma.pp), f_left(&sigma.qq));
    let (frp, frq) = (f_right(&sigma.pp), f_right(&sigma.qq));
    let f = f_total(&sigma.kk);
    for n in 0..=upto.min(sigma.kk.top_degree()) {
        for g in 0..sigma.kk.rank(n) {
            let (c, h) = sigma.on_gen(n, g);
            let mut lhs = sigma.tensor_maps(flp.as_ref(), flq.as_ref(), n, h);
            let r = sigma.tensor_maps(frp.as_ref(), frq.as_ref(), n, h);
            add_elem(field, &mut lhs, &r, &field.from_i64(-1));
            if scale_elem(field, &lhs, &c) != *f.image(n, g) {
                return Err(CheckFailure {
                    degree: n,
                    generator: sigma.kk.label(n, g),
                    what: "F factorization through σ fails".into(),
                });
            }
        }
    }
    Ok(())
}

/// σ is a chain map, and σ⁻¹σ, σσ⁻¹ are identities on generators.
pub fn check_sigma(sigma: &Arc<Sigma>, upto: usize) -> Result<(), CheckFailure> {
    let fwd = sigma.forward();
    let inv = sigma.inverse();
    let upto = upto.min(sigma.kk.top_degree());
    crate::complex::check_commutes(sigma.kk.as_ref(), sigma.target.as_ref(), fwd.as_ref(), upto)?;
    crate::complex::check_commutes(sigma.target.as_ref(), sigma.kk.as_ref(), inv.as_ref(), upto)?;
    let alg = sigma.tot.algebra();
    for n in 0..=upto {
        if sigma.kk.rank(n) != sigma.target.rank(n) {
            return Err(CheckFailure {
                degree: n,
                generator: "-".into(),
                what: "ranks differ".into(),
            });
        }
        for g in 0..sigma.kk.rank(n) {
            let there = fwd.image(n, g);
            let back = apply_map(alg, inv.as_ref(), n, &there);
            let back2 = apply_map(alg, fwd.as_ref(), n, &inv.image(n, g));
            if back != gen_elem(alg, g) || back2 != gen_elem(alg, g) {
                return Err(CheckFailure {
                    degree: n,
                    generator: sigma.kk.label(n, g),
                    what: "σ is not inverted by σ⁻¹".into(),
                });
            }
        }
    }
    Ok(())
}

/// Compare two generator maps on K⊗K through `upto`.
pub fn maps_agree(kk: &TensorComplex, a: &dyn GenMap, b: &dyn GenMap, upto: usize) -> Result<(), CheckFailure> {
    for n in 0..=upto.min(kk.top_degree()) {
        for g in 0..kk.rank(n) {
            if a.image(n, g) != b.image(n, g) {
                return Err(CheckFailure {
                    degree: n,
                    generator: kk.label(n, g),
                    what: "maps differ".into(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lambda_q, truncated_poly};
    use crate::complex::render_elem;
    use crate::field::Field;

    struct Qci {
        tot: Arc<TwistedTot>,
        hp: Homotopy,
        hq: Homotopy,
    }

    fn qci(field: &Field, top: usize) -> Qci {
        let (_, f) = lambda_q(field).unwrap();
        let p = Arc::new(KoszulDualNumbers::over(f.left.clone(), top));
        let q = Arc::new(KoszulDualNumbers::over(f.right.clone(), top));
        let (hp, hq) = (phi_koszul_dual_numbers(&p), phi_koszul_dual_numbers(&q));
        let tot = Arc::new(TwistedTot::new(p, q, &f.twist).unwrap());
        Qci { tot, hp, hq }
    }

    #[test]
    fn collapse_maps_in_degree_zero() {
        let k = KoszulDualNumbers::new(&Field::rationals(), "x", 4).unwrap();
        let k: ComplexRef = Arc::new(k);
        let kk = Arc::new(TensorComplex::new(k.clone(), k.clone()));
        let f = f_total(&kk);
        let g1 = kk.encode(TensorGen { i: 0, a: 0, mu: 0, j: 0, b: 0 });
        assert!(f.image(0, g1).is_empty());
        let gx = kk.encode(TensorGen { i: 0, a: 0, mu: 1, j: 0, b: 0 });
        assert_eq!(render_elem(k.as_ref(), 0, &f.image(0, gx)), "-e(0)*x + x*e(0)");
        crate::complex::check_commutes(kk.as_ref(), k.as_ref(), f.as_ref(), 4).unwrap();
    }

    #[test]
    fn bar_homotopies() {
        let a = Arc::new(truncated_poly(&Field::rationals(), "x", 2).unwrap());
        let h = phi_bar(&Arc::new(BarResolution::new(a.clone(), 5)));
        check_homotopy(&h, 4).unwrap();
        let nb = Arc::new(BarResolution::normalized(a, 7));
        let h = phi_bar(&nb);
        check_homotopy(&h, 6).unwrap();
        // (1⊗1)⊗x⊗(1⊗x⊗1) ↦ 1⊗x⊗x⊗1
        let g = h.kk.encode(TensorGen { i: 0, a: 0, mu: 1, j: 1, b: 0 });
        assert_eq!(render_elem(nb.as_ref(), 2, &h.phi.image(1, g)), "[x|x]");
    }

    #[test]
    fn koszul_homotopy_values() {
        let c = Arc::new(KoszulDualNumbers::new(&Field::rationals(), "x", 7).unwrap());
        let h = phi_koszul_dual_numbers(&c);
        let at = |i, mu, j| h.phi.image(i + j, h.kk.encode(TensorGen { i, a: 0, mu, j, b: 0 }));
        assert_eq!(render_elem(c.as_ref(), 1, &at(0, 1, 0)), "e(1)");
        assert!(at(0, 0, 0).is_empty());
        assert_eq!(render_elem(c.as_ref(), 4, &at(1, 1, 2)), "-e(4)");
        check_homotopy(&h, 6).unwrap();
    }

    #[test]
    fn qci_homotopies_agree() {
        let field = Field::rational_functions();
        let c = qci(&field, 7);
        let tot = c.tot.clone();
        let hq = phi_qci(&tot);
        check_homotopy(&hq, 6).unwrap();
        let ht = phi_twisted(&tot, &c.hp, &c.hq);
        check_homotopy(&ht, 6).unwrap();
        maps_agree(&hq.kk, hq.phi.as_ref(), ht.phi.as_ref(), 6).unwrap();
        let at = |h: &Homotopy, i1, i2, mu, j1, j2| {
            let a = tot.encode(i1, 0, i2, 0);
            let b = tot.encode(j1, 0, j2, 0);
            let n = i1 + i2 + j1 + j2;
            h.phi.image(n, h.kk.encode(TensorGen { i: i1 + i2, a, mu, j: j1 + j2, b }))
        };
        let x = tot.algebra().index_of("x").unwrap();
        let y = tot.algebra().index_of("y").unwrap();
        let xy = tot.algebra().index_of("xy").unwrap();
        assert_eq!(render_elem(tot.as_ref(), 2, &at(&hq, 0, 0, x, 1, 0)), "e(2,0)");
        assert!(at(&hq, 1, 2, xy, 1, 1).is_empty());
        assert_eq!(render_elem(tot.as_ref(), 1, &at(&hq, 0, 0, y, 0, 0)), "e(0,1)");
        assert_eq!(render_elem(tot.as_ref(), 6, &at(&hq, 2, 0, x, 0, 3)), "e(3,3)");
    }

    #[test]
    fn sigma_properties() {
        let field = Field::cyclotomic(3).unwrap();
        let tot = qci(&field, 5).tot;
        let kk = Arc::new(TensorComplex::new(tot.clone(), tot.clone()));
        let s = Arc::new(Sigma::new(&tot, &kk));
        check_sigma(&s, 5).unwrap();
        check_f_factorization(&s, 5).unwrap();
        // (e0⊗e1)⊗1⊗(e1⊗e0) ↦ q^{-1}·...
        let g = kk.encode(TensorGen { i: 1, a: tot.encode(0, 0, 1, 0), mu: 0, j: 1, b: tot.encode(1, 0, 0, 0) });
        let (c, _) = s.on_gen(2, g);
        assert_eq!(c, field.parse("1/q").unwrap());
    }
}
