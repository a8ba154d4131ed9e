//! Finite-dimensional ℤ^m-graded algebras given by a monomial basis and
//! structure constants.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError, FieldSpec, Scalar, Twist};

/// Sparse algebra element: basis index → nonzero coefficient.
pub type AlgElem = BTreeMap<usize, Scalar>;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("unit not in basis: `{0}`")]
    UnitNotInBasis(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("basis element `{label}` has degree of length {got}, expected {expected}")]
    DegreeRank { label: String, expected: usize, got: usize },
    #[error("product is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("unit law fails on `{0}`")]
    UnitLaw(String),
    #[error("product {0}*{1} has a term `{2}` of the wrong degree")]
    Degree(String, String, String),
    #[error("twist is {rows}x{cols} but gradings have ranks {m} and {n}")]
    TwistMismatch { rows: usize, cols: usize, m: usize, n: usize },
    #[error("truncation order must be at least 2, got {0}")]
    Truncation(usize),
    #[error("invalid algebra presentation: {0}")]
    Schema(String),
}

#[derive(Debug)]
pub struct GradedAlgebra {
    name: String,
    field: Field,
    labels: Vec<String>,
    degrees: Vec<Vec<i64>>,
    rank: usize,
    unit: usize,
    table: Vec<AlgElem>,
}

/// Where a twisted tensor product came from.
#[derive(Debug, Clone)]
pub struct TensorFactors {
    pub left: Arc<GradedAlgebra>,
    pub right: Arc<GradedAlgebra>,
    pub twist: Twist,
}

impl GradedAlgebra {
    /// Build and exhaustively verify an algebra. `products` maps basis pairs
    /// to their product; absent pairs multiply to zero.
    pub fn new(
        name: &str,
        field: &Field,
        labels: Vec<String>,
        degrees: Vec<Vec<i64>>,
        unit: &str,
        products: BTreeMap<(usize, usize), AlgElem>,
    ) -> Result<GradedAlgebra, AlgebraError> {
        let rank = degrees.first().map_or(0, |d| d.len());
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
            if degrees[i].len() != rank {
                return Err(AlgebraError::DegreeRank {
                    label: l.clone(),
                    expected: rank,
                    got: degrees[i].len(),
                });
            }
        }
        let unit = labels
            .iter()
            .position(|l| l == unit)
            .ok_or_else(|| AlgebraError::UnitNotInBasis(unit.to_string()))?;
        let dim = labels.len();
        let mut table = vec![AlgElem::new(); dim * dim];
        for ((i, j), e) in products {
            table[i * dim + j] = e.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        }
        let a = GradedAlgebra { name: name.into(), field: field.clone(), labels, degrees, rank, unit, table };
        a.verify()?;
        Ok(a)
    }

    fn verify(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        let l = |i: usize| self.labels[i].clone();
        for i in 0..dim {
            let e = self.basis(i);
            if self.basis_mul(self.unit, i) != &e || self.basis_mul(i, self.unit) != &e {
                return Err(AlgebraError::UnitLaw(l(i)));
            }
            for j in 0..dim {
                let want = add_deg(&self.degrees[i], &self.degrees[j]);
                for k in self.basis_mul(i, j).keys() {
                    if self.degrees[*k] != want {
                        return Err(AlgebraError::Degree(l(i), l(j), l(*k)));
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.basis_mul(i, j).clone();
                for k in 0..dim {
                    let lhs = self.mul(&ij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), self.basis_mul(j, k));
                    if lhs != rhs {
                        return Err(AlgebraError::NotAssociative(l(i), l(j), l(k)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn grading_rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, i: usize) -> &[i64] {
        &self.degrees[i]
    }

    pub fn basis(&self, i: usize) -> AlgElem {
        AlgElem::from([(i, self.field.one())])
    }

    pub fn one(&self) -> AlgElem {
        self.basis(self.unit)
    }

    pub fn basis_mul(&self, i: usize, j: usize) -> &AlgElem {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let k = &self.field;
        let mut out = AlgElem::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = k.mul(x, y);
                for (m, c) in self.basis_mul(*i, *j) {
                    add_term(k, &mut out, *m, &k.mul(&xy, c));
                }
            }
        }
        out
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = a.clone();
        for (i, x) in b {
            add_term(&self.field, &mut out, *i, x);
        }
        out
    }

    pub fn scale(&self, a: &AlgElem, s: &Scalar) -> AlgElem {
        let k = &self.field;
        if k.is_zero(s) {
            return AlgElem::new();
        }
        a.iter().map(|(i, x)| (*i, k.mul(x, s))).collect()
    }

    /// Degree of a nonzero homogeneous element.
    pub fn elem_degree(&self, a: &AlgElem) -> Option<Vec<i64>> {
        let mut it = a.keys().map(|i| &self.degrees[*i]);
        let d = it.next()?.clone();
        it.all(|e| *e == d).then_some(d)
    }

    pub fn render_elem(&self, a: &AlgElem) -> String {
        render_terms(&self.field, a.iter().map(|(i, c)| (self.labels[*i].clone(), c.clone())))
    }

    /// Indices of the non-unit basis monomials, which span the chosen
    /// complement of the unit.
    pub fn normalization_split(&self) -> (usize, Vec<usize>) {
        (self.unit, (0..self.dim()).filter(|&i| i != self.unit).collect())
    }

    /// Image of `a` in the quotient by the unit span, as an element of the
    /// complement.
    pub fn project_bar(&self, a: &AlgElem) -> AlgElem {
        a.iter().filter(|(i, _)| **i != self.unit).map(|(i, c)| (*i, c.clone())).collect()
    }

    pub fn to_presentation(&self) -> Presentation {
        let k = &self.field;
        let mut products = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let e = self.basis_mul(i, j);
                if e.is_empty() {
                    continue;
                }
                products.push(ProductEntry {
                    left: self.labels[i].clone(),
                    right: self.labels[j].clone(),
                    terms: e
                        .iter()
                        .map(|(m, c)| Term { coeff: k.render(c), basis: self.labels[*m].clone() })
                        .collect(),
                });
            }
        }
        Presentation {
            name: self.name.clone(),
            field: k.spec(),
            grading_rank: self.rank,
            basis: self
                .labels
                .iter()
                .zip(&self.degrees)
                .map(|(l, d)| BasisEntry { label: l.clone(), degree: d.clone() })
                .collect(),
            unit: self.labels[self.unit].clone(),
            products,
        }
    }

    pub fn from_presentation(p: &Presentation) -> Result<GradedAlgebra, AlgebraError> {
        let field = Field::from_spec(&p.field)?;
        let labels: Vec<String> = p.basis.iter().map(|b| b.label.clone()).collect();
        let degrees: Vec<Vec<i64>> = p.basis.iter().map(|b| b.degree.clone()).collect();
        for (b, d) in p.basis.iter().zip(&degrees) {
            if d.len() != p.grading_rank {
                return Err(AlgebraError::DegreeRank {
                    label: b.label.clone(),
                    expected: p.grading_rank,
                    got: d.len(),
                });
            }
        }
        let idx = |l: &str| {
            labels.iter().position(|x| x == l).ok_or_else(|| AlgebraError::UnknownLabel(l.into()))
        };
        let mut products = BTreeMap::new();
        for (n, e) in p.products.iter().enumerate() {
            let key = (idx(&e.left)?, idx(&e.right)?);
            if products.contains_key(&key) {
                return Err(AlgebraError::Schema(format!(
                    "products[{n}]: duplicate entry for {}*{}",
                    e.left, e.right
                )));
            }
            let mut el = AlgElem::new();
            for t in &e.terms {
                let c = field.parse(&t.coeff)?;
                add_term(&field, &mut el, idx(&t.basis)?, &c);
            }
            products.insert(key, el);
        }
        GradedAlgebra::new(&p.name, &field, labels, degrees, &p.unit, products)
    }

    pub fn from_json(s: &str) -> Result<GradedAlgebra, AlgebraError> {
        let p: Presentation =
            serde_json::from_str(s).map_err(|e| AlgebraError::Schema(e.to_string()))?;
        GradedAlgebra::from_presentation(&p)
    }
}

/// JSON presentation of an algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Presentation {
    pub name: String,
    pub field: FieldSpec,
    pub grading_rank: usize,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub label: String,
    pub degree: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: String,
    pub basis: String,
}

pub(crate) fn add_deg(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn add_term<K: Ord>(k: &Field, m: &mut BTreeMap<K, Scalar>, key: K, c: &Scalar) {
    if k.is_zero(c) {
        return;
    }
    match m.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = k.add(o.get(), c);
            if k.is_zero(&s) {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Render a linear combination of named terms: `2*x - q*y`.
pub(crate) fn render_terms(k: &Field, terms: impl Iterator<Item = (String, Scalar)>) -> String {
    let mut out = String::new();
    for (name, c) in terms {
        let s = k.render(&c);
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, s),
        };
        let mag = if mag.contains(['+', '-']) || (mag.contains('/') && mag.contains('q')) {
            format!("({mag})")
        } else {
            mag
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag == "1" {
            out.push_str(&name);
        } else if name == "1" {
            out.push_str(&mag);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// k[x]/(x^m) with |x| = 1.
pub fn truncated_poly(field: &Field, label: &str, m: usize) -> Result<GradedAlgebra, AlgebraError> {
    if m < 2 {
        return Err(AlgebraError::Truncation(m));
    }
    let labels: Vec<String> = (0..m)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => label.to_string(),
            _ => format!("{label}^{i}"),
        })
        .collect();
    let degrees = (0..m as i64).map(|i| vec![i]).collect();
    let mut products = BTreeMap::new();
    for i in 0..m {
        for j in 0..m - i {
            products.insert((i, j), AlgElem::from([(i + j, field.one())]));
        }
    }
    GradedAlgebra::new(&format!("k[{label}]/({label}^{m})"), field, labels, degrees, "1", products)
}

/// R ⊗^t S with (r⊗s)(r'⊗s') = t^{<|r'| | |s|>} rr' ⊗ ss'. Basis index of
/// r⊗s is `r * dim S + s`.
pub fn twisted_tensor_algebra(
    r: &GradedAlgebra,
    s: &GradedAlgebra,
    t: &Twist,
) -> Result<GradedAlgebra, AlgebraError> {
    if t.rows() != r.grading_rank() || t.cols() != s.grading_rank() {
        return Err(AlgebraError::TwistMismatch {
            rows: t.rows(),
            cols: t.cols(),
            m: r.grading_rank(),
            n: s.grading_rank(),
        });
    }
    let k = r.field();
    let (dr, ds) = (r.dim(), s.dim());
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    for i in 0..dr {
        for j in 0..ds {
            labels.push(match (i == r.unit(), j == s.unit()) {
                (true, _) => s.label(j).to_string(),
                (false, true) => r.label(i).to_string(),
                _ => format!("{}{}", r.label(i), s.label(j)),
            });
            degrees.push([r.degree(i), s.degree(j)].concat());
        }
    }
    let mut products = BTreeMap::new();
    for i in 0..dr {
        for j in 0..ds {
            for i2 in 0..dr {
                let f = t.eval(r.degree(i2), s.degree(j))?;
                for j2 in 0..ds {
                    let mut e = AlgElem::new();
                    for (a, x) in r.basis_mul(i, i2) {
                        for (b, y) in s.basis_mul(j, j2) {
                            add_term(k, &mut e, a * ds + b, &k.mul(&f, &k.mul(x, y)));
                        }
                    }
                    if !e.is_empty() {
                        products.insert((i * ds + j, i2 * ds + j2), e);
                    }
                }
            }
        }
    }
    let unit = labels[r.unit() * ds + s.unit()].clone();
    let name = format!("{} (x)^t {}", r.name(), s.name());
    GradedAlgebra::new(&name, k, labels, degrees, &unit, products)
}

/// Λ_q = k[x]/(x²) ⊗^t k[y]/(y²) with t = −q^{−1}; basis 1, y, x, xy.
pub fn lambda_q(field: &Field) -> Result<(GradedAlgebra, TensorFactors), AlgebraError> {
    let r = Arc::new(truncated_poly(field, "x", 2)?);
    let s = Arc::new(truncated_poly(field, "y", 2)?);
    let q = field.q()?;
    let t = Twist::new(field, vec![vec![field.neg(&field.inv(&q))]])?;
    let l = twisted_tensor_algebra(&r, &s, &t)?;
    Ok((l, TensorFactors { left: r, right: s, twist: t }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(a: &GradedAlgebra, s: &str) -> AlgElem {
        a.basis(a.index_of(s).unwrap())
    }

    #[test]
    fn lambda_q_relations() {
        let k = Field::rational_functions();
        let (l, _) = lambda_q(&k).unwrap();
        assert_eq!(l.labels(), &["1", "y", "x", "xy"]);
        let yx = l.mul(&el(&l, "y"), &el(&l, "x"));
        let want = l.scale(&el(&l, "xy"), &k.parse("-1/q").unwrap());
        assert_eq!(yx, want);
        assert!(l.mul(&el(&l, "x"), &el(&l, "x")).is_empty());
        assert_eq!(l.degree(l.index_of("xy").unwrap()), &[1, 1]);
    }

    #[test]
    fn truncated_poly_products() {
        let k = Field::rationals();
        let a = truncated_poly(&k, "x", 3).unwrap();
        assert_eq!(a.mul(&el(&a, "x"), &el(&a, "x")), el(&a, "x^2"));
        assert!(a.mul(&el(&a, "x"), &el(&a, "x^2")).is_empty());
        assert_eq!(a.degree(2), &[2]);
        assert!(truncated_poly(&k, "x", 1).is_err());
    }

    #[test]
    fn trivial_twist_commutes() {
        let k = Field::rationals();
        let r = truncated_poly(&k, "x", 2).unwrap();
        let s = truncated_poly(&k, "y", 2).unwrap();
        let l = twisted_tensor_algebra(&r, &s, &Twist::trivial(&k, 1, 1)).unwrap();
        let (x, y) = (el(&l, "x"), el(&l, "y"));
        assert_eq!(l.mul(&x, &y), l.mul(&y, &x));
    }

    #[test]
    fn normalization_complement() {
        let k = Field::rationals();
        let (l, _) = lambda_q(&k.with_q("1").unwrap()).unwrap();
        let (u, c) = l.normalization_split();
        assert_eq!(l.label(u), "1");
        assert_eq!(c.iter().map(|i| l.label(*i)).collect::<Vec<_>>(), ["y", "x", "xy"]);
    }

    #[test]
    fn presentation_round_trip_and_errors() {
        let k = Field::rational_functions();
        let (l, _) = lambda_q(&k).unwrap();
        let p = l.to_presentation();
        let json = serde_json::to_string(&p).unwrap();
        let back = GradedAlgebra::from_json(&json).unwrap();
        assert_eq!(back.to_presentation(), p);

        let mut bad = p.clone();
        bad.unit = "u".into();
        assert!(matches!(
            GradedAlgebra::from_presentation(&bad),
            Err(AlgebraError::UnitNotInBasis(_))
        ));

        let mut bad = truncated_poly(&Field::rationals(), "x", 4).unwrap().to_presentation();
        let e = bad.products.iter_mut().find(|e| e.left == "x^2" && e.right == "x").unwrap();
        e.terms[0].coeff = "2".into();
        let err = GradedAlgebra::from_presentation(&bad).unwrap_err();
        assert_eq!(err.to_string(), "product is not associative on (x, x, x)");
    }
}
