use std::sync::Arc;

use super::{koszul_index, Complex, ComplexRef, Memo, ModElem};
use crate::algebra::{add_term, twisted_tensor_algebra, AlgebraError, GradedAlgebra};
use crate::field::{Scalar, Twist};

/// Total complex of P ⊗^t Q for resolutions P of R and Q of S, a complex of
/// free R⊗^tS-bimodules. Generators of degree n are pairs (v, v') with
/// v ∈ W^P_i, v' ∈ W^Q_j, i + j = n, ordered by i then v then v'.
pub struct TwistedTot {
    p: ComplexRef,
    q: ComplexRef,
    twist: Twist,
    alg: Arc<GradedAlgebra>,
    top: usize,
    /// Per degree: (i, offset) for each block.
    blocks: Vec<Vec<(usize, usize)>>,
    ranks: Vec<usize>,
    diff: Memo,
}

impl TwistedTot {
    pub fn new(p: ComplexRef, q: ComplexRef, twist: &Twist) -> Result<TwistedTot, AlgebraError> {
        let alg = Arc::new(twisted_tensor_algebra(p.algebra(), q.algebra(), twist)?);
        Ok(TwistedTot::with_algebra(p, q, twist, alg))
    }

    /// Use a prebuilt R⊗^tS (must come from `twisted_tensor_algebra`).
    pub fn with_algebra(p: ComplexRef, q: ComplexRef, twist: &Twist, alg: Arc<GradedAlgebra>) -> Self {
        assert_eq!(alg.dim(), p.algebra().dim() * q.algebra().dim());
        let top = p.top_degree().min(q.top_degree());
        let mut blocks = Vec::new();
        let mut ranks = Vec::new();
        for n in 0..=top {
            let mut off = 0;
            let mut b = Vec::new();
            for i in 0..=n {
                b.push((i, off));
                off += p.rank(i) * q.rank(n - i);
            }
            blocks.push(b);
            ranks.push(off);
        }
        TwistedTot { p, q, twist: twist.clone(), alg, top, blocks, ranks, diff: Memo::default() }
    }

    pub fn left(&self) -> &ComplexRef {
        &self.p
    }

    pub fn right(&self) -> &ComplexRef {
        &self.q
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    /// Generator of degree i + j for (v, v').
    pub fn encode(&self, i: usize, v: usize, j: usize, w: usize) -> usize {
        self.blocks[i + j][i].1 + v * self.q.rank(j) + w
    }

    /// (i, v, j, v') for generator `g` of degree `n`.
    pub fn decode(&self, n: usize, g: usize) -> (usize, usize, usize, usize) {
        let b = &self.blocks[n];
        let pos = b.partition_point(|(_, off)| *off <= g) - 1;
        let (i, off) = b[pos];
        let rq = self.q.rank(n - i);
        let r = g - off;
        (i, r / rq, n - i, r % rq)
    }

    /// Index in R⊗^tS of the basis element r⊗s.
    pub fn pair(&self, r: usize, s: usize) -> usize {
        r * self.q.algebra().dim() + s
    }

    /// (r, s) for a basis index of R⊗^tS.
    pub fn unpair(&self, m: usize) -> (usize, usize) {
        let ds = self.q.algebra().dim();
        (m / ds, m % ds)
    }

    pub(crate) fn tw(&self, a: &[i64], b: &[i64]) -> Scalar {
        self.twist.eval(a, b).expect("twist dimensions checked at construction")
    }

    /// Identify x ⊗ y, for x ∈ P_i and y ∈ Q_j, with an element of degree
    /// i + j using the bimodule action on P⊗^tQ:
    /// (a⊗v⊗b)⊗(a'⊗v'⊗b') = t^{−(⟨v|a'⟩+⟨b|v'⟩+⟨b|a'⟩)} (a⊗a')(v⊗v')(b⊗b').
    pub fn combine(&self, i: usize, x: &ModElem, j: usize, y: &ModElem) -> ModElem {
        let k = self.alg.field();
        let (ra, sa) = (self.p.algebra(), self.q.algebra());
        let mut out = ModElem::new();
        for ((a, v, b), c) in x {
            let dv = self.p.internal_degree(i, *v);
            for ((a2, v2, b2), c2) in y {
                let dv2 = self.q.internal_degree(j, *v2);
                let e = k.mul(
                    &k.mul(&self.tw(&dv, sa.degree(*a2)), &self.tw(ra.degree(*b), &dv2)),
                    &self.tw(ra.degree(*b), sa.degree(*a2)),
                );
                let coef = k.div(&k.mul(c, c2), &e).expect("twist entries are invertible");
                let key = (self.pair(*a, *a2), self.encode(i, *v, j, *v2), self.pair(*b, *b2));
                add_term(k, &mut out, key, &coef);
            }
        }
        out
    }
}

impl Complex for TwistedTot {
    fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    fn top_degree(&self) -> usize {
        self.top
    }

    fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    fn internal_degree(&self, n: usize, g: usize) -> Vec<i64> {
        let (i, v, j, w) = self.decode(n, g);
        [self.p.internal_degree(i, v), self.q.internal_degree(j, w)].concat()
    }

    fn label(&self, n: usize, g: usize) -> String {
        let (i, v, j, w) = self.decode(n, g);
        let (lp, lq) = (self.p.label(i, v), self.q.label(j, w));
        match (koszul_index(&lp), koszul_index(&lq)) {
            (Some(a), Some(b)) => format!("e({a},{b})"),
            _ => format!("{lp}⊗{lq}"),
        }
    }

    fn differential(&self, n: usize, g: usize) -> Arc<ModElem> {
        self.diff.get_or((n, g), || {
            let k = self.alg.field();
            let (i, v, j, w) = self.decode(n, g);
            let mut out = ModElem::new();
            if i > 0 {
                let dv = self.p.differential(i, v);
                let y = super::gen_elem(self.q.algebra(), w);
                out = self.combine(i - 1, &dv, j, &y);
            }
            if j > 0 {
                let x = super::gen_elem(self.p.algebra(), v);
                let dw = self.q.differential(j, w);
                let t = self.combine(i, &x, j - 1, &dw);
                let sign = if i % 2 == 0 { k.one() } else { k.from_i64(-1) };
                super::add_elem(k, &mut out, &t, &sign);
            }
            out
        })
    }
}
