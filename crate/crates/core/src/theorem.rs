//! HH of a twisted tensor product R⊗^tS restricted to the twist-trivial
//! internal degrees, compared with HH^{*,A'}(R) ⊗ HH^{*,B'}(S) carrying the
//! tensor Gerstenhaber structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{add_term, AlgElem, AlgebraError, GradedAlgebra};
use crate::cohomology::{Cochain, HHContext, HHError};
use crate::complex::{Complex, TwistedTot};
use crate::diagonal::{diagonal_bar, TwistedBar};
use crate::field::{Field, FieldError, Scalar, Twist};
use crate::homotopy::{phi_bar, phi_twisted};

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cohomology(#[from] HHError),
    #[error("transported cochain {0} is not a cocycle")]
    NotCocycle(String),
}

/// A subgroup of ℤ^m: `index` gives the largest d₁ℤ⊕⋯⊕d_mℤ inside it
/// (0 for an infinite-order direction); `contains` is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub index: Vec<u64>,
    #[serde(skip)]
    test: Vec<Vec<Scalar>>,
    #[serde(skip)]
    field: Option<Field>,
}

impl Subgroup {
    /// a lies in the subgroup iff ∏_u test[u][v]^{a_u} = 1 for every v.
    pub fn contains(&self, a: &[i64]) -> bool {
        let Some(k) = &self.field else { return true };
        (0..self.test.first().map_or(0, Vec::len)).all(|v| {
            let mut acc = k.one();
            for (u, au) in a.iter().enumerate() {
                if *au != 0 {
                    acc = k.mul(&acc, &k.pow(&self.test[u][v], *au));
                }
            }
            k.is_one(&acc)
        })
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// A' = ∩_b ker t^{⟨−|b⟩} ⊆ A and B' = ∩_a ker t^{⟨a|−⟩} ⊆ B.
pub fn subgroup_restriction(t: &Twist) -> Result<(Subgroup, Subgroup), TheoremError> {
    let k = t.field();
    let entries: Vec<Vec<Scalar>> = (0..t.rows()).map(|u| (0..t.cols()).map(|v| t.entry(u, v).clone()).collect()).collect();
    let transposed: Vec<Vec<Scalar>> = (0..t.cols()).map(|v| (0..t.rows()).map(|u| t.entry(u, v).clone()).collect()).collect();
    let index = |rows: &[Vec<Scalar>]| -> Result<Vec<u64>, TheoremError> {
        rows.iter()
            .map(|row| {
                row.iter().try_fold(1, |acc, e| Ok(lcm(acc, k.order(e)?.unwrap_or(0))))
            })
            .collect()
    };
    let a = Subgroup { index: index(&entries)?, test: entries, field: Some(k.clone()) };
    let b = Subgroup { index: index(&transposed)?, test: transposed, field: Some(k.clone()) };
    Ok((a, b))
}

/// Σ c·(α⊗β) with α a cochain on a resolution of R and β one of S.
pub type TensorElem = Vec<(Scalar, Cochain, Cochain)>;

fn sign(k: &Field, e: i64) -> Scalar {
    k.from_i64(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// (f⊗g)⌣(f'⊗g') = (−1)^{m'n} (f⌣f')⊗(g⌣g').
pub fn tensor_cup(hr: &HHContext, hs: &HHContext, x: &TensorElem, y: &TensorElem) -> Result<TensorElem, HHError> {
    let k = hr.field();
    let mut out = TensorElem::new();
    for (c, f, g) in x {
        for (c2, f2, g2) in y {
            let s = k.mul(&k.mul(c, c2), &sign(k, (f2.n * g.n) as i64));
            out.push((s, hr.cup(f, f2)?, hs.cup(g, g2)?));
        }
    }
    Ok(out.into_iter().filter(|(_, a, b)| !a.is_zero() && !b.is_zero()).collect())
}

/// [f⊗g, f'⊗g'] = (−1)^{(m+n−1)n'} [f,f']⊗(g⌣g') + (−1)^{m(m'+n'−1)} (f⌣f')⊗[g,g'].
pub fn tensor_bracket(hr: &HHContext, hs: &HHContext, x: &TensorElem, y: &TensorElem) -> Result<TensorElem, HHError> {
    let k = hr.field();
    let mut out = TensorElem::new();
    for (c, f, g) in x {
        for (c2, f2, g2) in y {
            let cc = k.mul(c, c2);
            let (m, n, m2, n2) = (f.n as i64, g.n as i64, f2.n as i64, g2.n as i64);
            if m + m2 > 0 {
                let s = k.mul(&cc, &sign(k, (m + n - 1) * n2));
                out.push((s, hr.bracket(f, f2)?, hs.cup(g, g2)?));
            }
            if n + n2 > 0 {
                let s = k.mul(&cc, &sign(k, m * (m2 + n2 - 1)));
                out.push((s, hr.cup(f, f2)?, hs.bracket(g, g2)?));
            }
        }
    }
    Ok(out.into_iter().filter(|(_, a, b)| !a.is_zero() && !b.is_zero()).collect())
}

/// T(α⊗β)(u⊗v) = α(u)⊗β(v) on the total complex.
pub fn transport_pair(tot: &TwistedTot, f: &Cochain, g: &Cochain) -> Result<Cochain, HHError> {
    let k = tot.algebra().field();
    let mut values: BTreeMap<usize, AlgElem> = BTreeMap::new();
    for (v, fv) in &f.values {
        for (w, gw) in &g.values {
            let e = values.entry(tot.encode(f.n, *v, g.n, *w)).or_default();
            for (r, a) in fv {
                for (s, b) in gw {
                    add_term(k, e, tot.pair(*r, *s), &k.mul(a, b));
                }
            }
        }
    }
    let deg = f.deg.iter().chain(&g.deg).copied().collect();
    Cochain::new(tot, f.n + g.n, deg, values)
}

/// T applied termwise; `n`, `deg` give the bidegree of an empty sum.
pub fn transport(tot: &TwistedTot, x: &TensorElem, n: usize, deg: &[i64]) -> Result<Cochain, HHError> {
    let k = tot.algebra().field();
    let mut acc = Cochain::zero(n, deg.to_vec());
    for (c, f, g) in x {
        acc = acc.add(k, &transport_pair(tot, f, g)?, c)?;
    }
    Ok(acc)
}

pub fn render_tensor(rk: &dyn Complex, sk: &dyn Complex, x: &TensorElem) -> String {
    let k = rk.algebra().field();
    if x.is_empty() {
        return "0".into();
    }
    x.iter()
        .map(|(c, f, g)| {
            let body = format!("({})⊗({})", f.render(rk), g.render(sk));
            if k.is_one(c) {
                body
            } else {
                format!("({})*{body}", k.render(c))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TheoremCheck {
    pub lhs: String,
    pub rhs: String,
    pub degree: usize,
    /// The tensor-side bracket.
    pub expected: String,
    pub cup: bool,
    pub bracket: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TheoremReport {
    pub a_prime: Vec<u64>,
    pub b_prime: Vec<u64>,
    pub max_degree: usize,
    /// Number of basis elements α⊗β of HH^{*,A'}(R) ⊗ HH^{*,B'}(S) used.
    pub classes: usize,
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn all_match(&self) -> bool {
        self.checks.iter().all(|c| c.cup && c.bracket)
    }
}

/// Basis representatives of HH^{n,a} with a in the subgroup, n ≤ top.
pub fn restricted_basis(ctx: &HHContext, sub: &Subgroup, top: usize) -> Result<Vec<Cochain>, HHError> {
    let mut out = Vec::new();
    for n in 0..=top {
        for b in ctx.cohomology_all(n)? {
            if sub.contains(&b.deg) {
                out.extend(b.reps);
            }
        }
    }
    Ok(out)
}

fn compare(ctx: &HHContext, a: &Cochain, b: &Cochain) -> Result<bool, HHError> {
    if a.n != b.n || (a.deg != b.deg && !a.is_zero() && !b.is_zero()) {
        return Ok(false);
    }
    ctx.same_class(a, b)
}

/// For every pair of basis elements of HH^{*,A'}(R) ⊗ HH^{*,B'}(S) whose
/// bracket has homological degree ≤ `max_degree`, compare cup and bracket
/// of the transported classes on Tot(B̄R ⊗^t B̄S) with the tensor structure.
pub fn verify_main_theorem(
    r: Arc<GradedAlgebra>,
    s: Arc<GradedAlgebra>,
    t: &Twist,
    max_degree: usize,
) -> Result<TheoremReport, TheoremError> {
    let (ap, bp) = subgroup_restriction(t)?;
    let top = max_degree + 1;
    let tb = Arc::new(TwistedBar::new(r, s, t, top)?);
    let hr = HHContext::new(diagonal_bar(&tb.r), phi_bar(&tb.r))?;
    let hs = HHContext::new(diagonal_bar(&tb.s), phi_bar(&tb.s))?;
    let hk = HHContext::new(tb.diagonal(), phi_twisted(&tb.tot, &phi_bar(&tb.r), &phi_bar(&tb.s)))?;
    let k = hk.field().clone();
    let rb = restricted_basis(&hr, &ap, max_degree)?;
    let sb = restricted_basis(&hs, &bp, max_degree)?;
    let mut elems = Vec::new();
    for f in &rb {
        for g in &sb {
            if f.n + g.n <= max_degree {
                let x: TensorElem = vec![(k.one(), f.clone(), g.clone())];
                let tx = transport(&tb.tot, &x, f.n + g.n, &[])?;
                if !hk.is_cocycle(&tx)? {
                    return Err(TheoremError::NotCocycle(render_tensor(tb.r.as_ref(), tb.s.as_ref(), &x)));
                }
                elems.push((x, tx));
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..elems.len() {
        for j in i..elems.len() {
            let d = elems[i].1.n + elems[j].1.n;
            if d >= 1 && d - 1 <= max_degree {
                pairs.push((i, j));
            }
        }
    }
    let checks = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<TheoremCheck, TheoremError> {
            let ((x, tx), (y, ty)) = (&elems[i], &elems[j]);
            let b = hk.bracket(tx, ty)?;
            let tbr = tensor_bracket(&hr, &hs, x, y)?;
            let eb = transport(&tb.tot, &tbr, b.n, &b.deg)?;
            let bracket = compare(&hk, &b, &eb)?;
            let cup = if tx.n + ty.n <= max_degree {
                let c = hk.cup(tx, ty)?;
                let ec = transport(&tb.tot, &tensor_cup(&hr, &hs, x, y)?, c.n, &c.deg)?;
                compare(&hk, &c, &ec)?
            } else {
                true
            };
            Ok(TheoremCheck {
                lhs: render_tensor(tb.r.as_ref(), tb.s.as_ref(), x),
                rhs: render_tensor(tb.r.as_ref(), tb.s.as_ref(), y),
                degree: b.n,
                expected: render_tensor(tb.r.as_ref(), tb.s.as_ref(), &tbr),
                cup,
                bracket,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TheoremReport { a_prime: ap.index, b_prime: bp.index, max_degree, classes: elems.len(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lambda_q, truncated_poly};

    #[test]
    fn subgroups() {
        let k = Field::cyclotomic(3).unwrap();
        let (_, f) = lambda_q(&k).unwrap();
        let (a, b) = subgroup_restriction(&f.twist).unwrap();
        assert_eq!((a.index.clone(), b.index.clone()), (vec![6], vec![6]));
        assert!(a.contains(&[12]) && !a.contains(&[3]));
        let g = Field::rational_functions();
        let (_, f) = lambda_q(&g).unwrap();
        let (a, _) = subgroup_restriction(&f.twist).unwrap();
        assert_eq!(a.index, vec![0]);
        assert!(a.contains(&[0]) && !a.contains(&[1]));
        let q = Field::rationals();
        let (a, b) = subgroup_restriction(&Twist::trivial(&q, 1, 1)).unwrap();
        assert_eq!((a.index, b.index), (vec![1], vec![1]));
        // not a product subgroup: a₁ + a₂ even
        let m = q.from_i64(-1);
        let (a, _) = subgroup_restriction(&Twist::new(&q, vec![vec![m.clone()], vec![m]]).unwrap()).unwrap();
        assert_eq!(a.index, vec![2, 2]);
        assert!(a.contains(&[1, 1]) && !a.contains(&[1, 0]));
    }

    #[test]
    fn trivial_twist_small() {
        let q = Field::rationals();
        let r = Arc::new(truncated_poly(&q, "x", 2).unwrap());
        let s = Arc::new(truncated_poly(&q, "y", 2).unwrap());
        let rep = verify_main_theorem(r, s, &Twist::trivial(&q, 1, 1), 3).unwrap();
        assert!(rep.classes > 0);
        let bad: Vec<_> = rep.checks.iter().filter(|c| !(c.cup && c.bracket)).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn cyclotomic_three() {
        let k = Field::cyclotomic(3).unwrap();
        let (_, f) = lambda_q(&k).unwrap();
        let rep = verify_main_theorem(f.left.clone(), f.right.clone(), &f.twist, 8).unwrap();
        assert!(rep.checks.iter().any(|c| c.expected != "0"));
        let bad: Vec<_> = rep.checks.iter().filter(|c| !(c.cup && c.bracket)).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn trivial_twist_full() {
        let q = Field::rationals();
        let r = Arc::new(truncated_poly(&q, "x", 2).unwrap());
        let s = Arc::new(truncated_poly(&q, "y", 2).unwrap());
        let rep = verify_main_theorem(r, s, &Twist::trivial(&q, 1, 1), 8).unwrap();
        assert!(rep.checks.iter().any(|c| c.expected != "0"));
        let bad: Vec<_> = rep.checks.iter().filter(|c| !(c.cup && c.bracket)).collect();
        assert!(bad.is_empty(), "{} bad: {:#?}", bad.len(), &bad[..bad.len().min(5)]);
    }
}
