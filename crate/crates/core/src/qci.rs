//! Quantum complete intersections Λ_q = k⟨x,y⟩/(x², y², xy + qyx): the case
//! split by q, named generator cochains, and the expected bracket tables.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{lambda_q, AlgElem, AlgebraError};
use crate::cohomology::{Cochain, HHContext, HHError};
use crate::complex::{KoszulDualNumbers, TwistedTot};
use crate::diagonal::{diagonal_koszul_dual_numbers, diagonal_qci};
use crate::field::{Field, FieldError, Scalar};
use crate::homotopy::{phi_koszul_dual_numbers, phi_qci, phi_twisted};
use crate::theorem::{render_tensor, tensor_bracket, transport, TensorElem};

#[derive(Debug, Error)]
pub enum QciError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cohomology(#[from] HHError),
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("invalid q specification: {0}")]
    Spec(String),
    #[error("cannot parse cochain `{expr}`: {why}")]
    Parse { expr: String, why: String },
    #[error("generator {0} is not a cocycle")]
    NotCocycle(String),
}

/// Which computation of HH*(Λ_q) applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", content = "r", rename_all = "kebab-case")]
pub enum QciCase {
    /// q not a root of unity.
    Generic,
    /// q = −1, char ≠ 2.
    MinusOne,
    /// q a primitive r-th root of unity, r odd, char ≠ 2.
    OddRoot(u64),
    /// q ≠ 1 a primitive r-th root of unity with r even, or char 2.
    EvenOrChar2Root(u64),
    /// char 2, q = 1.
    Char2One,
    /// char ≠ 2, q = 1.
    Char0One,
}

impl QciCase {
    pub fn name(&self) -> String {
        match self {
            QciCase::Generic => "generic".into(),
            QciCase::MinusOne => "q=-1".into(),
            QciCase::OddRoot(r) => format!("odd-root(r={r})"),
            QciCase::EvenOrChar2Root(r) => format!("even-or-char2-root(r={r})"),
            QciCase::Char2One => "char2-q=1".into(),
            QciCase::Char0One => "q=1".into(),
        }
    }

    pub fn r(&self) -> Option<u64> {
        match self {
            QciCase::OddRoot(r) | QciCase::EvenOrChar2Root(r) => Some(*r),
            _ => None,
        }
    }

    /// Resolution degree needed for the table and its derived checks.
    pub fn default_degree(&self) -> usize {
        match self {
            QciCase::OddRoot(r) => 4 * *r as usize + 1,
            QciCase::EvenOrChar2Root(r) => 2 * *r as usize + 1,
            _ => 6,
        }
    }
}

/// Classify Λ_q by characteristic and the multiplicative order of q.
pub fn classify(field: &Field, q: &Scalar) -> Result<QciCase, QciError> {
    if field.is_zero(q) {
        return Err(QciError::ZeroQ);
    }
    let char2 = field.characteristic() == 2;
    Ok(match field.order(q)? {
        None => QciCase::Generic,
        Some(1) if char2 => QciCase::Char2One,
        Some(1) => QciCase::Char0One,
        Some(2) if !char2 => QciCase::MinusOne,
        Some(r) if r % 2 == 1 && !char2 => QciCase::OddRoot(r),
        Some(r) => QciCase::EvenOrChar2Root(r),
    })
}

/// The field for `--q <generic|root:r|literal> --char <0|p>`.
pub fn field_for(q: &str, characteristic: u64) -> Result<Field, QciError> {
    if q == "generic" {
        if characteristic != 0 {
            return Err(QciError::Spec("generic q is only available in characteristic 0".into()));
        }
        return Ok(Field::rational_functions());
    }
    if let Some(r) = q.strip_prefix("root:") {
        let r: u64 = r.parse().map_err(|_| QciError::Spec(format!("bad root order `{r}`")))?;
        return Ok(if characteristic == 0 { Field::cyclotomic(r)? } else { Field::cyclotomic_mod(characteristic, r)? });
    }
    let base = if characteristic == 0 { Field::rationals() } else { Field::prime(characteristic)? };
    Ok(base.with_q(q)?)
}

/// Which contracting homotopy the brackets use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiChoice {
    /// The explicit piecewise φ on the Koszul resolution.
    Qci,
    /// (φ_P⊠F^l + F^r⊠φ_Q)σ built from the factors.
    Twisted,
}

/// Λ_q with its Koszul resolution K, diagonal, homotopy and named generators.
pub struct QciBuild {
    pub case: QciCase,
    pub field: Field,
    pub tot: Arc<TwistedTot>,
    pub left: Arc<KoszulDualNumbers>,
    pub right: Arc<KoszulDualNumbers>,
    pub ctx: HHContext,
    pub generators: Vec<(String, Cochain)>,
}

pub fn build_case(field: &Field, top: usize, phi: PhiChoice) -> Result<QciBuild, QciError> {
    let q = field.q()?;
    let case = classify(field, &q)?;
    let (_, f) = lambda_q(field)?;
    let px = Arc::new(KoszulDualNumbers::over(f.left.clone(), top));
    let py = Arc::new(KoszulDualNumbers::over(f.right.clone(), top));
    let tot = Arc::new(TwistedTot::new(px.clone(), py.clone(), &f.twist)?);
    let h = match phi {
        PhiChoice::Qci => phi_qci(&tot),
        PhiChoice::Twisted => phi_twisted(&tot, &phi_koszul_dual_numbers(&px), &phi_koszul_dual_numbers(&py)),
    };
    let diag = diagonal_qci(&tot).expect("built as a qci Koszul resolution");
    let ctx = HHContext::new(diag, h)?;
    let mut build = QciBuild {
        case,
        field: field.clone(),
        tot,
        left: px,
        right: py,
        ctx,
        generators: Vec::new(),
    };
    for name in generator_names(case) {
        let c = build.parse(name)?;
        if c.n < top && !build.ctx.is_cocycle(&c)? {
            return Err(QciError::NotCocycle(name.to_string()));
        }
        build.generators.push((name.to_string(), c));
    }
    Ok(build)
}

/// Algebra generators of HH*(Λ_q) for each case, as cochain expressions.
pub fn generator_names(case: QciCase) -> &'static [&'static str] {
    match case {
        QciCase::Generic => &["xy", "x*e(1,0)", "y*e(0,1)"],
        QciCase::MinusOne => &["x", "y", "x*e(1,0)", "y*e(0,1)", "e(2,0)", "e(0,2)"],
        QciCase::OddRoot(_) => &["xy", "x*e(1,0)", "y*e(0,1)", "e(2r,0)", "e(r,r)", "e(0,2r)"],
        QciCase::EvenOrChar2Root(_) => &["xy", "x*e(1,0)", "y*e(0,1)", "e(r,0)", "e(0,r)"],
        QciCase::Char2One => &["x", "y", "e(1,0)", "e(0,1)"],
        QciCase::Char0One => {
            &["xy", "x*e(1,0)", "y*e(1,0)", "x*e(0,1)", "y*e(0,1)", "e(2,0)", "e(1,1)", "e(0,2)"]
        }
    }
}

/// The non-zero brackets among generators, as printed: (f, g, [f, g]).
pub fn expected_table(case: QciCase) -> &'static [(&'static str, &'static str, &'static str)] {
    match case {
        QciCase::Generic => &[("x*e(1,0)", "xy", "xy"), ("y*e(0,1)", "xy", "xy")],
        QciCase::MinusOne => &[
            ("x*e(1,0)", "x", "x"),
            ("y*e(0,1)", "y", "y"),
            ("x*e(1,0)", "e(2,0)", "-2*e(2,0)"),
            ("y*e(0,1)", "e(0,2)", "-2*e(0,2)"),
        ],
        QciCase::OddRoot(_) => &[
            ("x*e(1,0)", "xy", "xy"),
            ("y*e(0,1)", "xy", "xy"),
            ("e(2r,0)", "x*e(1,0)", "2r*e(2r,0)"),
            ("e(r,r)", "x*e(1,0)", "r*e(r,r)"),
            ("e(r,r)", "y*e(0,1)", "r*e(r,r)"),
            ("e(0,2r)", "y*e(0,1)", "2r*e(0,2r)"),
        ],
        QciCase::EvenOrChar2Root(_) => &[
            ("x*e(1,0)", "xy", "xy"),
            ("y*e(0,1)", "xy", "xy"),
            ("e(r,0)", "x*e(1,0)", "r*e(r,0)"),
            ("e(0,r)", "y*e(0,1)", "r*e(0,r)"),
        ],
        QciCase::Char2One => &[("x", "e(1,0)", "1"), ("y", "e(0,1)", "1")],
        QciCase::Char0One => &[
            ("xy", "x*e(1,0)", "-xy"),
            ("xy", "y*e(0,1)", "-xy"),
            ("xy", "e(2,0)", "-2*y*e(1,0)"),
            ("xy", "e(1,1)", "-y*e(0,1) + x*e(1,0)"),
            ("xy", "e(0,2)", "2*x*e(0,1)"),
            ("x*e(1,0)", "y*e(1,0)", "-y*e(1,0)"),
            ("x*e(1,0)", "x*e(0,1)", "x*e(0,1)"),
            ("y*e(1,0)", "x*e(0,1)", "y*e(0,1) - x*e(1,0)"),
            ("y*e(1,0)", "y*e(0,1)", "-y*e(1,0)"),
            ("x*e(0,1)", "y*e(0,1)", "x*e(0,1)"),
            ("x*e(1,0)", "e(2,0)", "-2*e(2,0)"),
            ("x*e(1,0)", "e(1,1)", "-e(1,1)"),
            ("y*e(1,0)", "e(1,1)", "-e(2,0)"),
            ("y*e(1,0)", "e(0,2)", "-2*e(1,1)"),
            ("x*e(0,1)", "e(2,0)", "-2*e(1,1)"),
            ("x*e(0,1)", "e(1,1)", "-e(0,2)"),
            ("y*e(0,1)", "e(1,1)", "-e(1,1)"),
            ("y*e(0,1)", "e(0,2)", "-2*e(0,2)"),
        ],
    }
}

/// Further brackets obtained from the derivation law.
pub fn derived_checks(case: QciCase) -> &'static [(&'static str, &'static str, &'static str)] {
    match case {
        QciCase::OddRoot(_) => &[("e(2r,0) ∪ e(2r,0)", "x*e(1,0)", "4r*e(2r,0) ∪ e(2r,0)")],
        QciCase::Char2One => &[("x*e(1,0)", "e(1,0)", "e(1,0)")],
        QciCase::Char0One => &[
            ("e(2,0)", "xy*e(2,0)", "-2*y*e(1,2)"),
            ("e(2,0)", "xy*e(0,2)", "-2*y*e(1,2)"),
        ],
        _ => &[],
    }
}

/// Values printed for circle products, (f, g, generator, value); compared
/// at chain level.
pub fn expected_circles(case: QciCase) -> &'static [(&'static str, &'static str, &'static str, &'static str)] {
    match case {
        QciCase::Generic => &[
            ("x*e(1,0)", "x*e(1,0)", "e(1,0)", "x"),
            ("x*e(1,0)", "y*e(0,1)", "e(0,1)", "0"),
            ("y*e(0,1)", "x*e(1,0)", "e(1,0)", "0"),
            ("y*e(0,1)", "y*e(0,1)", "e(0,1)", "y"),
        ],
        QciCase::MinusOne => &[
            ("x*e(1,0)", "x", "e(0,0)", "x"),
            ("y*e(0,1)", "y", "e(0,0)", "y"),
            ("x*e(1,0)", "x*e(1,0)", "e(1,0)", "x"),
            ("y*e(0,1)", "y*e(0,1)", "e(0,1)", "y"),
            ("e(2,0)", "x*e(1,0)", "e(2,0)", "2"),
            ("e(0,2)", "y*e(0,1)", "e(0,2)", "2"),
        ],
        _ => &[],
    }
}

fn split_top(s: &str, seps: &[char]) -> Vec<(char, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut sep = '+';
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&ch) {
            if !cur.trim().is_empty() || !out.is_empty() || sep != '+' {
                out.push((sep, std::mem::take(&mut cur)));
            }
            cur.clear();
            sep = ch;
            continue;
        }
        cur.push(ch);
    }
    out.push((sep, cur));
    out.into_iter().filter(|(_, t)| !t.trim().is_empty()).collect()
}

/// `2r` style integer literal with the symbol r.
fn r_literal(tok: &str, r: Option<u64>) -> Option<Result<i64, String>> {
    let body = tok.strip_suffix('r')?;
    if !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let Some(r) = r else { return Some(Err("r is undefined for this q".into())) };
    let m: i64 = if body.is_empty() { 1 } else { body.parse().ok()? };
    Some(Ok(m * r as i64))
}

impl QciBuild {
    pub fn top(&self) -> usize {
        self.ctx.top()
    }

    fn generator(&self, args: &str) -> Result<(usize, usize), String> {
        let inner = args.strip_prefix("e(").and_then(|s| s.strip_suffix(')')).ok_or("malformed generator")?;
        let (a, b) = inner.split_once(',').ok_or("generator needs two indices")?;
        let idx = |t: &str| -> Result<usize, String> {
            let t = t.trim();
            match r_literal(t, self.case.r()) {
                Some(v) => v.map(|v| v as usize),
                None => t.parse().map_err(|_| format!("bad index `{t}`")),
            }
        };
        let (i, l) = (idx(a)?, idx(b)?);
        if i + l > self.top() {
            return Err(format!("degree {} exceeds the built range {}", i + l, self.top()));
        }
        Ok((i, l))
    }

    /// A single `scalar*monomial*e(i,j)` factor.
    fn factor(&self, s: &str) -> Result<Cochain, String> {
        let alg = self.ctx.algebra();
        let k = &self.field;
        let mut coeff = k.one();
        let mut mono = alg.one();
        let mut gen = None;
        for tok in split_top(s, &['*']).into_iter().map(|(_, t)| t.trim().to_string()) {
            if tok.starts_with("e(") {
                if gen.replace(self.generator(&tok)?).is_some() {
                    return Err("more than one generator in a term".into());
                }
            } else if let Some(m) = alg.index_of(&tok) {
                mono = alg.mul(&mono, &alg.basis(m));
            } else if let Some(v) = r_literal(&tok, self.case.r()) {
                coeff = k.mul(&coeff, &k.from_i64(v?));
            } else {
                let v = k.parse(&tok).map_err(|e| format!("`{tok}`: {e}"))?;
                coeff = k.mul(&coeff, &v);
            }
        }
        let (i, l) = gen.unwrap_or((0, 0));
        let value: AlgElem = alg.scale(&mono, &coeff);
        let mdeg = alg.elem_degree(&mono).unwrap_or_else(|| vec![0, 0]);
        let deg = vec![i as i64 - mdeg[0], l as i64 - mdeg[1]];
        let values = BTreeMap::from([(self.tot.encode(i, 0, l, 0), value)]);
        self.ctx.cochain(i + l, deg, values).map_err(|e| e.to_string())
    }

    /// Parse a sum of terms `[scalar*][monomial*]e(i,j)`, where a term may be
    /// a cup product `t ∪ t'`, `r` stands for the root order, and a term
    /// without a generator lives on e(0,0).
    pub fn parse(&self, expr: &str) -> Result<Cochain, QciError> {
        let err = |why: String| QciError::Parse { expr: expr.into(), why };
        let k = &self.field;
        let mut acc: Option<Cochain> = None;
        for (sign, term) in split_top(expr, &['+', '-']) {
            let mut prod: Option<Cochain> = None;
            for part in term.split('∪') {
                let f = self.factor(part.trim()).map_err(err)?;
                prod = Some(match prod {
                    None => f,
                    Some(p) => self.ctx.cup(&p, &f).map_err(|e| err(e.to_string()))?,
                });
            }
            let mut t = prod.ok_or_else(|| err("empty term".into()))?;
            if sign == '-' {
                t = t.scale(k, &k.from_i64(-1));
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(k, &t, &k.one()).map_err(|_| err("inhomogeneous sum".into()))?,
            });
        }
        acc.ok_or_else(|| err("empty expression".into()))
    }

    pub fn render(&self, c: &Cochain) -> String {
        c.render(self.tot.as_ref())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TableEntry {
    pub lhs: String,
    pub rhs: String,
    pub expected: String,
    pub chain_level: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CircleEntry {
    pub f: String,
    pub g: String,
    pub at: String,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BracketTable {
    pub case: QciCase,
    pub field: String,
    pub entries: Vec<TableEntry>,
    pub derived: Vec<TableEntry>,
    pub circles: Vec<CircleEntry>,
}

impl BracketTable {
    /// Entries (and derived checks) that disagree with the expected classes.
    pub fn diff(&self) -> Vec<&TableEntry> {
        self.entries.iter().chain(&self.derived).filter(|e| !e.matches).collect()
    }
}

impl QciBuild {
    fn entry(&self, lhs: &str, rhs: &str, expected: &str) -> Result<TableEntry, QciError> {
        let (f, g) = (self.parse(lhs)?, self.parse(rhs)?);
        let b = self.ctx.bracket(&f, &g)?;
        let e = if expected == "0" { Cochain::zero(b.n, b.deg.clone()) } else { self.parse(expected)? };
        let comparable = b.n == e.n && (b.deg == e.deg || b.is_zero() || e.is_zero());
        let matches = comparable && self.ctx.same_class(&b, &e)?;
        Ok(TableEntry {
            lhs: lhs.into(),
            rhs: rhs.into(),
            expected: expected.into(),
            chain_level: self.render(&b),
            matches,
        })
    }

    /// Generator pairs in table order: listed pairs as printed, the rest
    /// (except degree 0 with degree 0) with expected value 0.
    fn jobs(&self) -> Result<Vec<(String, String, String)>, QciError> {
        let listed = expected_table(self.case);
        let names: Vec<&str> = self.generators.iter().map(|(n, _)| n.as_str()).collect();
        let mut jobs: Vec<(String, String, String)> = Vec::new();
        for (a, i) in names.iter().zip(0..) {
            for b in &names[i..] {
                let hit = listed.iter().find(|(l, r, _)| (l == a && r == b) || (l == b && r == a));
                match hit {
                    Some((l, r, e)) => jobs.push((l.to_string(), r.to_string(), e.to_string())),
                    None if self.parse(a)?.n + self.parse(b)?.n > 0 => {
                        jobs.push((a.to_string(), b.to_string(), "0".into()))
                    }
                    None => {}
                }
            }
        }
        Ok(jobs)
    }

    /// Brackets of all generator pairs (listed ones in printed order, the
    /// rest in generator order, expected zero), the derived checks and the
    /// printed circle values.
    pub fn bracket_table(&self) -> Result<BracketTable, QciError> {
        let jobs = self.jobs()?;
        let entries = jobs
            .par_iter()
            .map(|(l, r, e)| self.entry(l, r, e))
            .collect::<Result<Vec<_>, _>>()?;
        let derived = derived_checks(self.case)
            .par_iter()
            .map(|(l, r, e)| self.entry(l, r, e))
            .collect::<Result<Vec<_>, _>>()?;
        let mut circles = Vec::new();
        for (f, g, at, want) in expected_circles(self.case) {
            let c = self.ctx.circle(&self.parse(f)?, &self.parse(g)?)?;
            let (i, l) = self.generator(at).map_err(|why| QciError::Parse { expr: at.to_string(), why })?;
            let alg = self.ctx.algebra();
            let got = c.values.get(&self.tot.encode(i, 0, l, 0)).cloned().unwrap_or_default();
            let want_v = if *want == "0" {
                AlgElem::new()
            } else {
                match alg.index_of(want) {
                    Some(m) => alg.basis(m),
                    None => alg.scale(&alg.one(), &self.field.parse(want)?),
                }
            };
            circles.push(CircleEntry {
                f: f.to_string(),
                g: g.to_string(),
                at: at.to_string(),
                expected: want.to_string(),
                computed: alg.render_elem(&got),
                matches: got == want_v,
            });
        }
        Ok(BracketTable { case: self.case, field: self.field.describe(), entries, derived, circles })
    }
}

/// q = −1 generators as α⊗β: (degree, value) on K(k[x]/(x²)), then on K(k[y]/(y²)).
const MINUS_ONE_FACTORS: &[(&str, (usize, &str), (usize, &str))] = &[
    ("x", (0, "x"), (0, "1")),
    ("y", (0, "1"), (0, "y")),
    ("x*e(1,0)", (1, "x"), (0, "1")),
    ("y*e(0,1)", (0, "1"), (1, "y")),
    ("e(2,0)", (2, "1"), (0, "1")),
    ("e(0,2)", (0, "1"), (2, "1")),
];

/// Factor brackets on k[x]/(x²) feeding the tensor route.
const MINUS_ONE_FACTOR_TABLE: &[((usize, &str), (usize, &str), &str, (usize, &str))] = &[
    ((1, "x"), (0, "x"), "1", (0, "x")),
    ((2, "1"), (1, "x"), "2", (2, "1")),
];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TensorRouteEntry {
    pub lhs: String,
    pub rhs: String,
    pub expected: String,
    pub tensor: String,
    pub direct: bool,
    pub via_tensor: bool,
    pub routes_agree: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TensorRoute {
    pub factor: Vec<TableEntry>,
    pub entries: Vec<TensorRouteEntry>,
}

impl TensorRoute {
    pub fn all_match(&self) -> bool {
        self.factor.iter().all(|e| e.matches) && self.entries.iter().all(|e| e.direct && e.via_tensor && e.routes_agree)
    }
}

fn factor_cochain(ctx: &HHContext, (n, value): (usize, &str)) -> Result<Cochain, QciError> {
    let alg = ctx.algebra();
    let m = if value == "1" { Some(alg.unit()) } else { alg.index_of(value) };
    let m = m.ok_or_else(|| QciError::Parse { expr: value.to_string(), why: "unknown monomial".into() })?;
    let deg = vec![n as i64 - alg.degree(m)[0]];
    Ok(ctx.cochain(n, deg, BTreeMap::from([(0, alg.basis(m))]))?)
}

impl QciBuild {
    /// q = −1: every generator bracket computed directly on K and through
    /// [f⊗g, f'⊗g'] = ±[f,f']⊗(g⌣g') ± (f⌣f')⊗[g,g'] from the factors.
    pub fn tensor_route(&self) -> Result<TensorRoute, QciError> {
        if self.case != QciCase::MinusOne {
            return Err(QciError::Spec("the tensor route is the q = -1 case".into()));
        }
        let hr = HHContext::new(diagonal_koszul_dual_numbers(&self.left), phi_koszul_dual_numbers(&self.left))?;
        let hs = HHContext::new(diagonal_koszul_dual_numbers(&self.right), phi_koszul_dual_numbers(&self.right))?;
        let k = &self.field;
        let mut factor = Vec::new();
        for (f, g, c, e) in MINUS_ONE_FACTOR_TABLE {
            let (f, g, e) = (factor_cochain(&hr, *f)?, factor_cochain(&hr, *g)?, factor_cochain(&hr, *e)?);
            let b = hr.bracket(&f, &g)?;
            let e = e.scale(k, &k.parse(c)?);
            let render = |x: &Cochain| x.render(self.left.as_ref());
            factor.push(TableEntry {
                lhs: render(&f),
                rhs: render(&g),
                expected: render(&e),
                chain_level: render(&b),
                matches: b.n == e.n && hr.same_class(&b, &e)?,
            });
        }
        let tensor_of = |name: &str| -> Result<TensorElem, QciError> {
            let (_, a, b) = MINUS_ONE_FACTORS.iter().find(|(n, _, _)| *n == name).expect("q = -1 generator");
            Ok(vec![(k.one(), factor_cochain(&hr, *a)?, factor_cochain(&hs, *b)?)])
        };
        let entries = self
            .jobs()?
            .par_iter()
            .map(|(l, r, e)| -> Result<TensorRouteEntry, QciError> {
                let direct = self.entry(l, r, e)?;
                let b = self.ctx.bracket(&self.parse(l)?, &self.parse(r)?)?;
                let t = tensor_bracket(&hr, &hs, &tensor_of(l)?, &tensor_of(r)?)?;
                let tb = transport(&self.tot, &t, b.n, &b.deg)?;
                let want = if e == "0" { Cochain::zero(b.n, b.deg.clone()) } else { self.parse(e)? };
                Ok(TensorRouteEntry {
                    lhs: l.clone(),
                    rhs: r.clone(),
                    expected: e.clone(),
                    tensor: render_tensor(self.left.as_ref(), self.right.as_ref(), &t),
                    direct: direct.matches,
                    via_tensor: tb.deg == want.deg && self.ctx.same_class(&tb, &want)?,
                    routes_agree: self.ctx.same_class(&tb, &b)?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TensorRoute { factor, entries })
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct LawReport {
    /// Checks run per law.
    pub checked: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

impl LawReport {
    fn record(&mut self, law: &str, ok: bool, what: impl FnOnce() -> String) {
        *self.checked.entry(law.to_string()).or_default() += 1;
        if !ok {
            self.failures.push(format!("{law}: {}", what()));
        }
    }
}

impl QciBuild {
    /// Cup commutativity, bracket antisymmetry, Jacobi and the derivation law
    /// on all generator pairs and triples that fit below the top degree.
    pub fn check_laws(&self) -> Result<LawReport, QciError> {
        let top = self.ctx.top();
        let fits = |n: i64| n >= 0 && n < top as i64;
        let gens = &self.generators;
        let mut rep = LawReport::default();
        for (a, f) in gens {
            for (b, g) in gens {
                let (i, j) = (f.n as i64, g.n as i64);
                if fits(i + j) {
                    rep.record("cup-commutativity", self.ctx.cup_commutes(f, g)?, || format!("{a}, {b}"));
                }
                if i + j > 0 && fits(i + j - 1) {
                    rep.record("antisymmetry", self.ctx.antisymmetric(f, g)?, || format!("{a}, {b}"));
                }
            }
        }
        let triples: Vec<(usize, usize, usize)> = (0..gens.len())
            .flat_map(|x| (0..gens.len()).flat_map(move |y| (0..gens.len()).map(move |z| (x, y, z))))
            .collect();
        let results = triples
            .par_iter()
            .map(|&(x, y, z)| -> Result<Vec<(&str, bool, String)>, QciError> {
                let ((a, f), (b, g), (c, h)) = (&gens[x], &gens[y], &gens[z]);
                let (i, j, l) = (f.n as i64, g.n as i64, h.n as i64);
                let what = format!("{a}, {b}, {c}");
                let mut out = Vec::new();
                if x <= y && y <= z && fits(i + j + l - 2) {
                    out.push(("jacobi", self.ctx.jacobi(f, g, h)?, what.clone()));
                }
                if fits(i + j + l - 1) {
                    out.push(("derivation", self.ctx.derivation_law(f, g, h)?, what));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (law, ok, what) in results.into_iter().flatten() {
            rep.record(law, ok, || what);
        }
        Ok(rep)
    }
}
