//! Verification suites over Λ_q and its factors: complexes, homotopies,
//! diagonals, Gerstenhaber laws, φ-independence and the tensor decomposition.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{lambda_q, truncated_poly, AlgebraError, TensorFactors};
use crate::cohomology::{Cochain, HHContext, HHError};
use crate::complex::{
    check_chain_map, check_complex, lift_chain_map, BarResolution, ChainMapError, CheckFailure, Complex, ComplexRef,
    KoszulDualNumbers, TensorComplex, TwistedTot,
};
use crate::diagonal::{
    check_condition_c, diagonal_bar, diagonal_koszul_dual_numbers, diagonal_qci, diagonal_twisted, iota_qci,
    Diagonal, DiagonalError, TwistedBar,
};
use crate::field::{Field, FieldError, Twist};
use crate::homotopy::{
    check_f_factorization, check_homotopy, check_sigma, maps_agree, phi_bar, phi_koszul_dual_numbers, phi_qci,
    phi_twisted, Sigma,
};
use crate::qci::{build_case, classify, PhiChoice, QciError};
use crate::theorem::{verify_main_theorem, TheoremError};

pub const SUITES: &[&str] = &["complex", "homotopy", "diagonal", "awez", "conditions", "laws", "phi", "theorem"];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`; expected one of complex, homotopy, diagonal, awez, conditions, laws, phi, theorem, all")]
    Unknown(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diagonal(#[from] DiagonalError),
    #[error(transparent)]
    ChainMap(#[from] ChainMapError),
    #[error(transparent)]
    Cohomology(#[from] HHError),
    #[error(transparent)]
    Qci(#[from] QciError),
    #[error(transparent)]
    Theorem(#[from] TheoremError),
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, r: Result<(), CheckFailure>) {
        let (degree, generator, detail) = match r {
            Ok(()) => (None, None, None),
            Err(e) => (Some(e.degree), Some(e.generator), Some(e.what)),
        };
        self.checks.push(Check { name: name.into(), passed: detail.is_none(), degree, generator, detail });
    }

    fn push_at(&mut self, name: &str, degree: usize, r: Result<(), CheckFailure>) {
        self.push(name, r);
        let last = self.checks.last_mut().expect("just pushed");
        last.degree = Some(last.degree.unwrap_or(degree));
    }

    fn flag(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        let detail = if passed { None } else { detail };
        self.checks.push(Check { name: name.into(), passed, degree: None, generator: None, detail });
    }
}

/// Λ_q over `field` with the complexes built on it.
struct Fixture {
    field: Field,
    f: TensorFactors,
    px: Arc<KoszulDualNumbers>,
    py: Arc<KoszulDualNumbers>,
    tot: Arc<TwistedTot>,
}

impl Fixture {
    fn new(field: &Field, top: usize) -> Result<Fixture, SuiteError> {
        let (_, f) = lambda_q(field)?;
        let px = Arc::new(KoszulDualNumbers::over(f.left.clone(), top));
        let py = Arc::new(KoszulDualNumbers::over(f.right.clone(), top));
        let tot = Arc::new(TwistedTot::new(px.clone(), py.clone(), &f.twist)?);
        Ok(Fixture { field: field.clone(), f, px, py, tot })
    }

    fn twisted_bar(&self, top: usize) -> Result<Arc<TwistedBar>, SuiteError> {
        Ok(Arc::new(TwistedBar::new(self.f.left.clone(), self.f.right.clone(), &self.f.twist, top)?))
    }

    /// k[x]/(x²) ⊗ k[y]/(y²) with the trivial twist.
    fn trivial_bar(&self, top: usize) -> Result<Arc<TwistedBar>, SuiteError> {
        let base = &self.field;
        let r = Arc::new(truncated_poly(base, "x", 2)?);
        let s = Arc::new(truncated_poly(base, "y", 2)?);
        Ok(Arc::new(TwistedBar::new(r, s, &Twist::trivial(base, 1, 1), top)?))
    }
}

pub fn run_suite(name: &str, field: &Field, max_degree: usize) -> Result<SuiteReport, SuiteError> {
    let n = max_degree;
    match name {
        "complex" => complex_suite(field, n),
        "homotopy" => homotopy_suite(field, n),
        "diagonal" => diagonal_suite(field, n),
        "awez" => awez_suite(field, n),
        "conditions" => conditions_suite(field, n),
        "laws" => laws_suite(field),
        "phi" => phi_suite(field),
        "theorem" => theorem_suite(field, n),
        other => Err(SuiteError::Unknown(other.to_string())),
    }
}

/// d∘d = 0 and degree preservation.
fn complex_suite(field: &Field, n: usize) -> Result<SuiteReport, SuiteError> {
    let fx = Fixture::new(field, n)?;
    let mut rep = SuiteReport { suite: "complex".into(), checks: Vec::new() };
    let lam = fx.tot.algebra().clone();
    let kk: ComplexRef = fx.tot.clone();
    let kos_kk = TensorComplex::new(kk.clone(), kk);
    rep.push("koszul k[x]/(x^2)", check_complex(fx.px.as_ref(), n));
    rep.push("koszul Λ_q", check_complex(fx.tot.as_ref(), n));
    rep.push("koszul Λ_q ⊗_Λ koszul Λ_q", check_complex(&kos_kk, n));
    let rb = BarResolution::normalized(fx.f.left.clone(), n);
    rep.push("normalized bar k[x]/(x^2)", check_complex(&rb, n));
    rep.push("normalized bar Λ_q", check_complex(&BarResolution::normalized(lam.clone(), n), n));
    rep.push("bar Λ_q", check_complex(&BarResolution::new(lam, n), n));
    let tb = fx.twisted_bar(n)?;
    rep.push("Tot(B̄R ⊗^t B̄S)", check_complex(tb.tot.as_ref(), n));
    let trivial = fx.trivial_bar(n)?;
    rep.push("Tot(B̄R ⊗ B̄S), trivial twist", check_complex(trivial.tot.as_ref(), n));
    let rk = (0..=n).all(|i| fx.tot.rank(i) == i + 1);
    rep.flag("koszul Λ_q has n+1 generators in degree n", rk, Some("rank mismatch".into()));
    Ok(rep)
}

/// dφ + φd = F for every homotopy family through min(n, 6); σ and the
/// factorization of F through min(n, 5).
fn homotopy_suite(field: &Field, n: usize) -> Result<SuiteReport, SuiteError> {
    let m = n.min(6);
    let fx = Fixture::new(field, m + 1)?;
    let mut rep = SuiteReport { suite: "homotopy".into(), checks: Vec::new() };
    let hx = phi_koszul_dual_numbers(&fx.px);
    let hy = phi_koszul_dual_numbers(&fx.py);
    rep.push("φ koszul k[x]/(x^2)", check_homotopy(&hx, m));
    let rb = Arc::new(BarResolution::normalized(fx.f.left.clone(), m + 1));
    rep.push("φ normalized bar k[x]/(x^2)", check_homotopy(&phi_bar(&rb), m));
    let full = Arc::new(BarResolution::new(fx.f.left.clone(), m + 1));
    rep.push("φ bar k[x]/(x^2)", check_homotopy(&phi_bar(&full), m));
    let hq = phi_qci(&fx.tot);
    rep.push("φ qci", check_homotopy(&hq, m));
    let ht = phi_twisted(&fx.tot, &hx, &hy);
    rep.push("φ twisted, koszul factors", check_homotopy(&ht, m));
    rep.push("φ twisted = φ qci", maps_agree(&hq.kk, hq.phi.as_ref(), ht.phi.as_ref(), m));
    let tb = fx.twisted_bar(m + 1)?;
    let hb = phi_twisted(&tb.tot, &phi_bar(&tb.r), &phi_bar(&tb.s));
    rep.push("φ twisted, bar factors", check_homotopy(&hb, m));
    let f = n.min(5);
    let k: ComplexRef = fx.tot.clone();
    let kk = Arc::new(TensorComplex::new(k.clone(), k));
    let sigma = Arc::new(Sigma::new(&fx.tot, &kk));
    rep.push("σ bijective chain map", check_sigma(&sigma, f));
    rep.push("(F^l⊠F^l − F^r⊠F^r)σ = F", check_f_factorization(&sigma, f));
    Ok(rep)
}

fn coassociative(rep: &mut SuiteReport, name: &str, d: &Diagonal, upto: usize) {
    rep.push(format!("Δ {name} chain map"), d.chain_map().check(upto));
    rep.push(format!("Δ {name} coassociative"), d.check_coassociative(upto));
}

/// Chain maps and coassociativity through min(n, 6).
fn diagonal_suite(field: &Field, n: usize) -> Result<SuiteReport, SuiteError> {
    let m = n.min(6);
    let fx = Fixture::new(field, m)?;
    let mut rep = SuiteReport { suite: "diagonal".into(), checks: Vec::new() };
    let dx = diagonal_koszul_dual_numbers(&fx.px);
    coassociative(&mut rep, "koszul k[x]/(x^2)", &dx, m);
    let rb = Arc::new(BarResolution::normalized(fx.f.left.clone(), m));
    coassociative(&mut rep, "normalized bar k[x]/(x^2)", &diagonal_bar(&rb), m);
    let dq = diagonal_qci(&fx.tot)?;
    coassociative(&mut rep, "qci", &dq, m);
    let dt = diagonal_twisted(&fx.tot, &dx, &diagonal_koszul_dual_numbers(&fx.py));
    let same = (0..=m).all(|i| (0..fx.tot.rank(i)).all(|g| dt.delta.image(i, g) == dq.delta.image(i, g)));
    rep.flag("σ^{-1}(Δ⊠Δ) = Δ qci", same, Some("diagonals differ".into()));
    let tb = fx.twisted_bar(m)?;
    coassociative(&mut rep, "Tot(B̄R ⊗^t B̄S)", &tb.diagonal(), m);
    Ok(rep)
}

/// One check per degree 1..=upto.
fn per_degree(rep: &mut SuiteReport, name: &str, upto: usize, check: impl Fn(usize) -> Result<(), CheckFailure>) {
    for d in 1..=upto {
        rep.push_at(name, d, check(d));
    }
}

/// EZ^t and AW^t are chain maps and AW^t∘EZ^t = 1 through min(n, 4), for
/// Λ_q and for the trivial twist.
fn awez_suite(field: &Field, n: usize) -> Result<SuiteReport, SuiteError> {
    let a = n.min(4);
    let fx = Fixture::new(field, 1)?;
    let mut rep = SuiteReport { suite: "awez".into(), checks: Vec::new() };
    for (name, tb) in [("Λ_q", fx.twisted_bar(a)?), ("trivial twist", fx.trivial_bar(a)?)] {
        let (aw, ez) = (tb.aw(), tb.ez());
        per_degree(&mut rep, &format!("EZ chain map, {name}"), a, |d| ez.check(d));
        per_degree(&mut rep, &format!("AW chain map, {name}"), a, |d| aw.check(d));
        per_degree(&mut rep, &format!("AW EZ = 1, {name}"), a, |d| tb.check_aw_ez(d));
    }
    Ok(rep)
}

/// Δ_B ι = (ι⊗ι)Δ_K: qci Koszul through min(n, 3), twisted normalized bar
/// through min(n, 4).
fn conditions_suite(field: &Field, n: usize) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport { suite: "conditions".into(), checks: Vec::new() };
    let c = n.min(3);
    let fx = Fixture::new(field, c)?;
    let bar = Arc::new(BarResolution::new(fx.tot.algebra().clone(), c));
    let iota = iota_qci(&fx.tot, &bar, c)?;
    let (dk, db) = (diagonal_qci(&fx.tot)?, diagonal_bar(&bar));
    per_degree(&mut rep, "ι qci chain map", c, |d| iota.check(d));
    per_degree(&mut rep, "condition (c), qci", c, |d| check_condition_c(&iota, &dk, &db, d));
    let a = n.min(4);
    let tb = fx.twisted_bar(a)?;
    let it = tb.iota();
    per_degree(&mut rep, "ι chain map, Tot(B̄R ⊗^t B̄S)", a, |d| it.check(d));
    per_degree(&mut rep, "condition (c), Tot(B̄R ⊗^t B̄S)", a, |d| tb.check_condition_c(d));
    Ok(rep)
}

/// Cup commutativity, antisymmetry, Jacobi and the derivation law on the
/// generators of the case, and the chain-level commutator relation on
/// bar-type resolutions.
fn laws_suite(field: &Field) -> Result<SuiteReport, SuiteError> {
    let case = classify(field, &field.q()?)?;
    let b = build_case(field, case.default_degree(), PhiChoice::Qci)?;
    let laws = b.check_laws()?;
    let mut rep = SuiteReport { suite: "laws".into(), checks: Vec::new() };
    for (law, count) in &laws.checked {
        let bad: Vec<&String> = laws.failures.iter().filter(|f| f.starts_with(&format!("{law}:"))).collect();
        let detail = Some(format!("{} of {count} failed: {}", bad.len(), bad.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("; ")));
        rep.flag(format!("{law} ({count} cases)"), bad.is_empty(), detail);
    }
    let fx = Fixture::new(field, 1)?;
    let nb = Arc::new(BarResolution::normalized(fx.tot.algebra().clone(), 4));
    let ctx = HHContext::new(diagonal_bar(&nb), phi_bar(&nb))?;
    commutator(&mut rep, "normalized bar Λ_q", &ctx, 4)?;
    let tb = fx.twisted_bar(5)?;
    let ctx = HHContext::new(tb.diagonal(), phi_twisted(&tb.tot, &phi_bar(&tb.r), &phi_bar(&tb.s)))?;
    commutator(&mut rep, "Tot(B̄R ⊗^t B̄S)", &ctx, 5)?;
    Ok(rep)
}

/// a'⌣a − (−1)^{mm'} a⌣a' = (−1)^{m'} d*(a∘a') on pairs of basis cocycles.
fn commutator(rep: &mut SuiteReport, name: &str, ctx: &HHContext, top: usize) -> Result<(), SuiteError> {
    let reps: Vec<Cochain> = (0..top)
        .map(|n| ctx.cohomology_all(n))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .flat_map(|b| b.reps)
        .collect();
    let mut count = 0;
    let mut bad = Vec::new();
    for f in &reps {
        for g in &reps {
            if f.n + g.n > 0 && f.n + g.n <= top {
                count += 1;
                if !ctx.commutator_relation(f, g)? {
                    bad.push(format!("{} / {}", f.render(ctx.resolution().as_ref()), g.render(ctx.resolution().as_ref())));
                }
            }
        }
    }
    let detail = Some(bad.join("; "));
    rep.flag(format!("commutator relation, {name} ({count} pairs)"), bad.is_empty() && count > 0, detail);
    Ok(())
}

/// Tables with φ qci and φ twisted agree; brackets on the Koszul resolution
/// and on Tot(B̄R ⊗^t B̄S), moved across by lifted comparison maps, agree as
/// classes.
fn phi_suite(field: &Field) -> Result<SuiteReport, SuiteError> {
    let case = classify(field, &field.q()?)?;
    let top = case.default_degree();
    let mut rep = SuiteReport { suite: "phi".into(), checks: Vec::new() };
    let a = build_case(field, top, PhiChoice::Qci)?;
    let b = build_case(field, top, PhiChoice::Twisted)?;
    let same = a.bracket_table()? == b.bracket_table()?;
    rep.flag("φ qci and φ twisted tables identical", same, Some("tables differ".into()));
    let fx = Fixture::new(field, top)?;
    let tb = fx.twisted_bar(top)?;
    let bar_ctx = HHContext::new(tb.diagonal(), phi_twisted(&tb.tot, &phi_bar(&tb.r), &phi_bar(&tb.s)))?;
    let pi = lift_chain_map(tb.tot.as_ref(), a.tot.as_ref(), top)?;
    rep.push("comparison map Tot(B̄R ⊗^t B̄S) → K", check_chain_map(tb.tot.as_ref(), a.tot.as_ref(), &pi, top));
    let mut count = 0;
    let mut bad = Vec::new();
    for (x, f) in &a.generators {
        for (y, g) in &a.generators {
            let d = f.n + g.n;
            if d == 0 || d > top - 1 {
                continue;
            }
            count += 1;
            let direct = a.ctx.pull_back(&a.ctx.bracket(f, g)?, &pi, &bar_ctx)?;
            let moved = bar_ctx.bracket(&a.ctx.pull_back(f, &pi, &bar_ctx)?, &a.ctx.pull_back(g, &pi, &bar_ctx)?)?;
            if !bar_ctx.same_class(&direct, &moved)? {
                bad.push(format!("[{x}, {y}]"));
            }
        }
    }
    rep.flag(format!("koszul and bar brackets agree ({count} pairs)"), bad.is_empty(), Some(bad.join("; ")));
    Ok(rep)
}

/// The tensor decomposition on Λ_q's factors and on k[x]/(x²) ⊗ k[y]/(y²).
fn theorem_suite(field: &Field, n: usize) -> Result<SuiteReport, SuiteError> {
    let fx = Fixture::new(field, 1)?;
    let mut rep = SuiteReport { suite: "theorem".into(), checks: Vec::new() };
    let t = verify_main_theorem(fx.f.left.clone(), fx.f.right.clone(), &fx.f.twist, n)?;
    let detail = Some(format!("{} of {} failed", t.checks.iter().filter(|c| !(c.cup && c.bracket)).count(), t.checks.len()));
    rep.flag(
        format!("Λ_q, A' = {:?}, B' = {:?} ({} pairs)", t.a_prime, t.b_prime, t.checks.len()),
        t.all_match(),
        detail,
    );
    let r = Arc::new(truncated_poly(field, "x", 2)?);
    let s = Arc::new(truncated_poly(field, "y", 2)?);
    let t = verify_main_theorem(r, s, &Twist::trivial(field, 1, 1), n)?;
    let detail = Some(format!("{} of {} failed", t.checks.iter().filter(|c| !(c.cup && c.bracket)).count(), t.checks.len()));
    rep.flag(format!("trivial twist ({} pairs)", t.checks.len()), t.all_match(), detail);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_a_root_of_unity() {
        let field = Field::cyclotomic(3).unwrap();
        for s in SUITES {
            let n = if *s == "theorem" { 4 } else { 5 };
            let rep = run_suite(s, &field, n).unwrap();
            let bad: Vec<_> = rep.checks.iter().filter(|c| !c.passed).collect();
            assert!(bad.is_empty(), "{s}: {bad:?}");
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &Field::rationals(), 3), Err(SuiteError::Unknown(_))));
    }
}

