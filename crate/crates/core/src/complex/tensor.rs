use std::sync::Arc;

use super::{Complex, ComplexRef, Memo, ModElem};
use crate::algebra::{add_deg, add_term, GradedAlgebra};

/// A generator a ⊗ μ ⊗ b of A ⊗_Λ B, with a ∈ W^A_i, b ∈ W^B_j and μ a basis
/// monomial of Λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorGen {
    pub i: usize,
    pub a: usize,
    pub mu: usize,
    pub j: usize,
    pub b: usize,
}

/// A ⊗_Λ B for complexes of free Λ-bimodules, with
/// d(a⊗μ⊗b) = d(a)μ⊗b + (−1)^i a⊗μd(b). Differentials are computed lazily.
pub struct TensorComplex {
    a: ComplexRef,
    b: ComplexRef,
    top: usize,
    blocks: Vec<Vec<(usize, usize)>>,
    ranks: Vec<usize>,
    diff: Memo,
}

impl TensorComplex {
    pub fn new(a: ComplexRef, b: ComplexRef) -> TensorComplex {
        assert_eq!(a.algebra().dim(), b.algebra().dim(), "complexes over different algebras");
        let top = a.top_degree().min(b.top_degree());
        let dim = a.algebra().dim();
        let mut blocks = Vec::new();
        let mut ranks = Vec::new();
        for n in 0..=top {
            let mut off = 0;
            let mut bl = Vec::new();
            for i in 0..=n {
                bl.push((i, off));
                off += a.rank(i) * dim * b.rank(n - i);
            }
            blocks.push(bl);
            ranks.push(off);
        }
        TensorComplex { a, b, top, blocks, ranks, diff: Memo::default() }
    }

    pub fn left(&self) -> &ComplexRef {
        &self.a
    }

    pub fn right(&self) -> &ComplexRef {
        &self.b
    }

    pub fn encode(&self, t: TensorGen) -> usize {
        let dim = self.a.algebra().dim();
        self.blocks[t.i + t.j][t.i].1 + (t.a * dim + t.mu) * self.b.rank(t.j) + t.b
    }

    /// x ⊗ μ ⊗ y for x of degree i in A and y of degree j in B.
    pub fn join(&self, i: usize, x: &ModElem, mu: usize, j: usize, y: &ModElem) -> ModElem {
        let alg = self.algebra();
        let k = alg.field();
        let mut out = ModElem::new();
        for ((l, h, r), c) in x {
            for (m1, c1) in alg.basis_mul(*r, mu) {
                let cc = k.mul(c, c1);
                for ((l2, h2, r2), c2) in y {
                    let c3 = k.mul(&cc, c2);
                    for (m, cm) in alg.basis_mul(*m1, *l2) {
                        let g = self.encode(TensorGen { i, a: *h, mu: *m, j, b: *h2 });
                        add_term(k, &mut out, (*l, g, *r2), &k.mul(&c3, cm));
                    }
                }
            }
        }
        out
    }

    pub fn decode(&self, n: usize, g: usize) -> TensorGen {
        let dim = self.a.algebra().dim();
        let bl = &self.blocks[n];
        let pos = bl.partition_point(|(_, off)| *off <= g) - 1;
        let (i, off) = bl[pos];
        let j = n - i;
        let rb = self.b.rank(j);
        let r = g - off;
        let (am, b) = (r / rb, r % rb);
        TensorGen { i, a: am / dim, mu: am % dim, j, b }
    }
}

impl Complex for TensorComplex {
    fn algebra(&self) -> &Arc<GradedAlgebra> {
        self.a.algebra()
    }

    fn top_degree(&self) -> usize {
        self.top
    }

    fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    fn internal_degree(&self, n: usize, g: usize) -> Vec<i64> {
        let t = self.decode(n, g);
        let d = add_deg(&self.a.internal_degree(t.i, t.a), self.algebra().degree(t.mu));
        add_deg(&d, &self.b.internal_degree(t.j, t.b))
    }

    fn label(&self, n: usize, g: usize) -> String {
        let t = self.decode(n, g);
        let alg = self.algebra();
        let mid = if t.mu == alg.unit() { String::new() } else { format!("{}*", alg.label(t.mu)) };
        format!("{}⊗{}{}", self.a.label(t.i, t.a), mid, self.b.label(t.j, t.b))
    }

    fn differential(&self, n: usize, g: usize) -> Arc<ModElem> {
        self.diff.get_or((n, g), || {
            let alg = self.algebra();
            let k = alg.field();
            let u = alg.unit();
            let t = self.decode(n, g);
            let mut out = ModElem::new();
            if t.i > 0 {
                for ((l, v, r), c) in self.a.differential(t.i, t.a).iter() {
                    for (m, cm) in alg.basis_mul(*r, t.mu) {
                        let h = self.encode(TensorGen { i: t.i - 1, a: *v, mu: *m, ..t });
                        add_term(k, &mut out, (*l, h, u), &k.mul(c, cm));
                    }
                }
            }
            if t.j > 0 {
                let sign = if t.i % 2 == 0 { k.one() } else { k.from_i64(-1) };
                for ((l, v, r), c) in self.b.differential(t.j, t.b).iter() {
                    let sc = k.mul(&sign, c);
                    for (m, cm) in alg.basis_mul(t.mu, *l) {
                        let h = self.encode(TensorGen { mu: *m, j: t.j - 1, b: *v, ..t });
                        add_term(k, &mut out, (u, h, *r), &k.mul(&sc, cm));
                    }
                }
            }
            out
        })
    }
}

/// K ⊗_Λ K (`copies` = 2) or (K ⊗_Λ K) ⊗_Λ K (`copies` = 3).
pub fn tensor_over_algebra(k: ComplexRef, copies: usize) -> Result<Arc<TensorComplex>, String> {
    match copies {
        2 => Ok(Arc::new(TensorComplex::new(k.clone(), k))),
        3 => {
            let kk: ComplexRef = Arc::new(TensorComplex::new(k.clone(), k.clone()));
            Ok(Arc::new(TensorComplex::new(kk, k)))
        }
        _ => Err(format!("copies must be 2 or 3, got {copies}")),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_complex, TwistedTot};
    use super::*;
    use crate::field::Field;

    #[test]
    fn tensor_square_of_qci_koszul() {
        let k = Field::rational_functions();
        let c: ComplexRef = Arc::new(twisted_fixture(&k, 5));
        let kk = tensor_over_algebra(c.clone(), 2).unwrap();
        assert_eq!(kk.rank(1), 16);
        let g = kk.encode(TensorGen { i: 1, a: 1, mu: 1, j: 1, b: 0 });
        // e(1,0) ⊗ y ⊗ e(0,1)
        assert_eq!(kk.label(2, g), "e(1,0)⊗y*e(0,1)");
        assert_eq!(kk.internal_degree(2, g), vec![1, 2]);
        check_complex(kk.as_ref(), 5).unwrap();
        let kkk = tensor_over_algebra(c.clone(), 3).unwrap();
        check_complex(kkk.as_ref(), 3).unwrap();
        assert!(tensor_over_algebra(c, 4).is_err());
    }

    fn twisted_fixture(k: &Field, top: usize) -> TwistedTot {
        use super::super::KoszulDualNumbers;
        use crate::field::Twist;
        let t = Twist::new(k, vec![vec![k.parse("-1/q").unwrap()]]).unwrap();
        let p = Arc::new(KoszulDualNumbers::new(k, "x", top).unwrap());
        let q = Arc::new(KoszulDualNumbers::new(k, "y", top).unwrap());
        TwistedTot::new(p, q, &t).unwrap()
    }
}
