//! The checks behind each command, shared by spec files and presets.

use std::sync::Arc;

use thiserror::Error;

use sva_core::ceforms::{dc, verify_su_structure, InvariantForm, SuStructureReport};
use sva_core::geometry::{GeneralizedMetric, Side};
use sva_core::instances::{g_ell, hat_algebra, hopf_on, su2_u1, tduality_matrix};
use sva_core::killing::{from_real_solution, IsotropicPair, Variant};
use sva_core::spinor::SpinorModel;
use sva_core::susy::{
    build_generators, generators, predicted_central_charge, verify_mirror, verify_n2, verify_n4, Construction, SusyError,
};
use sva_core::sva::identities::{appendix_suite, soundness_suite, IdentityReport};
use sva_core::sva::{StateMap, Sva};
use sva_core::{Field, Matrix, QuadraticLieAlgebra, Scalar, Vector};

use crate::expr::{self, ExprError};
use crate::report::Report;
use crate::spec::{Loaded, SpecError};

/// Problems with the input, as opposed to failed verifications.
#[derive(Debug, Error)]
pub enum InputError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("expression {0}")]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Susy(#[from] SusyError),
    #[error("{0}")]
    Other(String),
}

pub fn validate(loaded: &Loaded) -> Report {
    let alg = &loaded.algebra;
    let mut r = Report::new("validate", &loaded.name);
    r.check("antisymmetry and Jacobi identity", true, format!("{} basis triples", alg.dim().pow(3)));
    r.check("pairing symmetric and nondegenerate", true, "");
    r.check("pairing invariant", true, "");
    if let Some(p) = &loaded.pair {
        r.check("isotropic pair", true, format!("dim l = {}, dim of complement = {}", p.dim_l(), p.complement().dim()));
    }
    if let Some(m) = &loaded.metric {
        r.check(
            "generalized metric",
            true,
            format!("dim V₊ = {}, dim V₋ = {}", m.metric.dim(Side::Plus), m.metric.dim(Side::Minus)),
        );
        r.check("orthogonal complex structures on V₊", true, format!("{} given", m.complex_structures.len()));
        if let Some(riemannian) = m.metric.is_riemannian() {
            r.datum("riemannian", riemannian);
        }
    }
    r.datum("dim", alg.dim());
    r.datum("params", alg.field().param_names());
    if let Some(k) = &loaded.level {
        r.datum("level", k.to_string());
    }
    r
}

/// The generalized metric, complex structure and divergence used by the
/// Clifford checks.
pub struct SpinorData<'a> {
    pub metric: &'a GeneralizedMetric,
    pub j: &'a Matrix,
    pub divergence: &'a Vector,
}

pub fn killing(subject: &str, pair: &IsotropicPair, variant: Variant, clifford: Option<SpinorData<'_>>) -> Result<Report, InputError> {
    let alg = pair.algebra().clone();
    let mut r = Report::new("killing", subject);
    let label = serde_json::to_value(variant).expect("variant serializes");
    let label = label.as_str().unwrap_or("full");
    let f = pair.check_fterm(variant);
    let fdetail = f
        .failures
        .iter()
        .map(|b| format!("[{0}_{1}, {0}_{2}] has component {3} outside {0}", b.source, b.left + 1, b.right + 1, alg.show(&b.offending)))
        .collect::<Vec<_>>()
        .join("; ");
    r.check(format!("F-term ({label})"), f.pass, fdetail);
    let d = pair.check_dterm(variant).map_err(|e| InputError::Other(e.to_string()))?;
    let ddetail = if d.pass { String::new() } else { format!("residual {}", alg.show(&d.residual)) };
    r.check(format!("D-term ({label})"), d.pass, ddetail);
    r.datum("w", alg.show(&d.w));
    r.datum("dim_l", pair.dim_l());
    if let Ok(div) = pair.check_divergence() {
        r.datum("divergence_isometry", div.isometry);
        r.datum("divergence_holomorphic", div.holomorphic);
        r.datum("w_orthogonal_to_derived_subalgebras", div.orthogonality);
    }
    let reality = pair.reality();
    r.datum("conjugate_pair", reality.conjugate_pair);
    if let Some(s) = clifford {
        let sm = SpinorModel::new(s.metric.clone(), Side::Plus, s.j.clone()).map_err(|e| InputError::Other(e.to_string()))?;
        let grav: Vec<String> = s
            .metric
            .minus()
            .basis()
            .iter()
            .map(|w| sm.gravitino_residual(w))
            .filter(|res| !res.is_zero())
            .map(|res| res.render())
            .collect();
        r.check("gravitino (Clifford)", grav.is_empty(), grav.join("; "));
        let eps_plus = s.metric.project(Side::Plus, s.divergence);
        let dil = sm.dilatino_residual(&eps_plus);
        r.check("dilatino (Clifford)", dil.is_zero(), if dil.is_zero() { String::new() } else { dil.render() });
    }
    Ok(r)
}

pub fn n2(subject: &str, sva: &Sva, pair: &IsotropicPair, construction: Construction, neveu_schwarz: bool) -> Result<Report, InputError> {
    let sc = build_generators(sva, pair, construction)?;
    let rep = verify_n2(sva, &sc, neveu_schwarz);
    let names = sva.names();
    let mut r = Report::new("n2", subject);
    let show = |v: &sva_core::sva::LambdaValue| if v.is_zero() { String::new() } else { format!("residual {}", v.render(names)) };
    r.check("[J_Λ J] = −(H + λχc/3)", rep.jj_residual.is_zero() && rep.c.is_some(), show(&rep.jj_residual));
    r.check("[H_Λ J] = (2T + 2λ + χS)J", rep.hj_residual.is_zero(), show(&rep.hj_residual));
    if let Some(ns) = &rep.ns_residual {
        r.check("[H_Λ H] = (2T + χS + 3λ)H + χλ²c/3", ns.is_zero(), show(ns));
    }
    let predicted = predicted_central_charge(pair, sva.level(), construction);
    if let Some(c) = &rep.c {
        r.check("central charge matches the prediction", *c == predicted, format!("predicted {predicted}"));
        r.datum("c", c.to_string());
    }
    r.datum("construction", serde_json::to_value(construction).expect("serializes"));
    r.datum("level", sva.level().to_string());
    r.datum("J", sva.render(&sc.j));
    r.datum("H", sva.render(&sc.h));
    Ok(r)
}

pub fn n4(subject: &str, sva: &Sva, metric: &GeneralizedMetric, js: &[Matrix], eps: &Vector) -> Result<Report, InputError> {
    if js.len() != 3 {
        return Err(InputError::Other(format!("n4 needs three complex structures, found {}", js.len())));
    }
    let mut gens = Vec::new();
    for j in js {
        let pair = from_real_solution(metric, j, eps).map_err(|e| InputError::Other(e.to_string()))?;
        gens.push(generators(sva, &pair)?);
    }
    let mut r = Report::new("n4", subject);
    let same_h = gens[0].h_prime == gens[1].h_prime && gens[1].h_prime == gens[2].h_prime;
    r.check("H′ agrees for the three structures", same_h, "");
    let currents = [gens[0].j0.clone(), gens[1].j0.clone(), gens[2].j0.clone()];
    let rep = verify_n4(sva, &currents, &gens[0].h_prime);
    let names = sva.names();
    for (k, d) in rep.diagonal.iter().enumerate() {
        let c = d.c.as_ref().map_or("none".to_string(), |c| c.to_string());
        r.check(format!("N=2 relations for J{}", k + 1), d.pass, format!("c = {c}"));
    }
    for (i, j, res) in &rep.cross {
        let detail = if res.is_zero() { String::new() } else { format!("residual {}", res.render(names)) };
        let k = 3 - i - j;
        let sign = if (j + 3 - i) % 3 == 1 { "−" } else { "+" };
        r.check(format!("[J{}_Λ J{}] = {sign}(S + 2χ)J{}", i + 1, j + 1, k + 1), res.is_zero(), detail);
    }
    for (k, g) in gens.iter().enumerate() {
        r.datum(&format!("J{}", k + 1), sva.render(&g.j0));
    }
    r.datum("H", sva.render(&gens[0].h_prime));
    Ok(r)
}

fn identity_checks(r: &mut Report, reports: &[IdentityReport]) {
    for rep in reports {
        let detail = match rep.failures.first() {
            None => format!("{} tuples", rep.checked),
            Some(first) => format!("{} of {} tuples fail, first at ({first})", rep.failures.len(), rep.checked),
        };
        r.check(rep.name, rep.pass(), detail);
    }
}

pub fn appendix(subject: &str, sva: &Sva, soundness_order: Option<u16>) -> Report {
    let mut r = Report::new("appendix", subject);
    identity_checks(&mut r, &appendix_suite(sva));
    if let Some(order) = soundness_order {
        identity_checks(&mut r, &soundness_suite(sva, order, order));
    }
    r.datum("level", sva.level().to_string());
    r
}

pub fn eval(subject: &str, sva: &Sva, src: &str) -> Result<Report, InputError> {
    let v = expr::evaluate(sva, src)?;
    let mut r = Report::new("eval", subject);
    r.datum("input", src);
    r.datum("value", v.render(sva));
    Ok(r)
}

/// Parameters of the Hopf family; every value is a scalar expression in the
/// symbols `l`, `x`, `a`, `k`, `y`.
#[derive(Debug, Clone)]
pub struct HopfParams {
    pub ell: String,
    pub x: String,
    pub a: String,
    pub k: String,
    pub xhat: String,
}

impl Default for HopfParams {
    fn default() -> HopfParams {
        HopfParams { ell: "l".into(), x: "x".into(), a: "l*x".into(), k: "2".into(), xhat: "1/(l*x)".into() }
    }
}

const SYMBOLS: [&str; 5] = ["l", "x", "a", "k", "y"];

/// The parameter values, parsed in the smallest field containing the
/// symbols they mention.
pub struct HopfValues {
    pub field: Arc<Field>,
    pub ell: Scalar,
    pub x: Scalar,
    pub a: Scalar,
    pub k: Scalar,
    pub xhat: Scalar,
}

impl HopfParams {
    pub fn values(&self) -> Result<HopfValues, InputError> {
        let all = [("--ell", &self.ell), ("--x", &self.x), ("--a", &self.a), ("--k", &self.k), ("--xhat", &self.xhat)];
        let wide = Field::with_params(&SYMBOLS);
        let mut used = Vec::new();
        for (flag, e) in all {
            let s = wide.parse(e).map_err(|err| SpecError::new(flag, err))?;
            for sym in SYMBOLS {
                if s.mentions(sym) && !used.contains(&sym) {
                    used.push(sym);
                }
            }
        }
        let order: Vec<&str> = SYMBOLS.iter().copied().filter(|s| used.contains(s)).collect();
        let field = Field::with_params(&order);
        let p = |flag: &str, e: &str| field.parse(e).map_err(|err| InputError::Spec(SpecError::new(flag, err)));
        let v = HopfValues {
            ell: p("--ell", &self.ell)?,
            x: p("--x", &self.x)?,
            a: p("--a", &self.a)?,
            k: p("--k", &self.k)?,
            xhat: p("--xhat", &self.xhat)?,
            field: field.clone(),
        };
        if v.ell.is_zero() || v.x.is_zero() || v.a.is_zero() {
            return Err(InputError::Other("ℓ, x and a must be nonzero".into()));
        }
        Ok(v)
    }
}

pub fn mirror(p: &HopfParams) -> Result<Report, InputError> {
    let v = p.values()?;
    if v.xhat.is_zero() {
        return Err(InputError::Other("x̂ must be nonzero".into()));
    }
    let g = Arc::new(g_ell(&v.field, &v.ell, "v"));
    let gh = Arc::new(hat_algebra(&v.field, &v.ell));
    let sva = Sva::new(g.clone(), v.k.clone());
    let sva_hat = Arc::new(Sva::new(gh.clone(), v.k.clone()));
    let psi = StateMap::new(&sva, sva_hat.clone(), tduality_matrix()).map_err(|e| InputError::Other(e.to_string()))?;
    let h = hopf_on(g, &v.ell, &v.x, &(&v.ell * &v.x), &v.k, false);
    let hh = hopf_on(gh, &v.ell, &v.xhat, &(&v.ell * &v.xhat), &v.k, true);
    let sc = build_generators(&sva, &h.pair, Construction::JH)?;
    let sc_hat = build_generators(&sva_hat, &hh.pair, Construction::JH)?;
    let rep = verify_mirror(&sc, &sc_hat, &psi);
    let mut r = Report::new("mirror", "Hopf family on g_ℓ and its T-dual");
    let show = |s: &sva_core::sva::State| if s.is_zero() { String::new() } else { format!("residual {}", sva_hat.render(s)) };
    r.check("ψ(J) + Ĵ = 0", rep.j_residual.is_zero(), show(&rep.j_residual));
    r.check("ψ(H) − Ĥ = 0", rep.h_residual.is_zero(), show(&rep.h_residual));
    r.datum("x̂", v.xhat.to_string());
    r.datum("ℓxx̂ − 1", (&(&v.ell * &v.x) * &v.xhat - Scalar::one()).to_string());
    r.datum("j_residual", sva_hat.render(&rep.j_residual));
    r.datum("h_residual", sva_hat.render(&rep.h_residual));
    Ok(r)
}

fn su_checks(r: &mut Report, label: &str, rep: &SuStructureReport) {
    let zero = |s: &str| s == "0";
    for (name, residual) in [
        ("dΨ = θ∧Ψ", &rep.d_psi),
        ("dθ = 0", &rep.d_theta),
        ("dd^cω = 0", &rep.ddc_omega),
        ("H = −d^cω", &rep.torsion),
        ("ω∧Ψ = 0", &rep.compatibility),
    ] {
        let detail = if zero(residual) { String::new() } else { format!("residual {residual}") };
        r.check(format!("{label}: {name}"), zero(residual), detail);
    }
}

pub fn forms(p: &HopfParams) -> Result<Report, InputError> {
    let v = p.values()?;
    let (l, x) = (&v.ell, &v.x);
    let h = su2_u1(&v.field, "v");
    let i = Scalar::i();
    let e = |k: usize| InvariantForm::one_form(4, k - 1);
    let two = |a: usize, b: usize, c: &Scalar| InvariantForm::monomial(4, &[a - 1, b - 1], c.clone());
    let h_ell = InvariantForm::monomial(4, &[0, 1, 2], l.clone());
    let theta = e(4).scale(&-x);
    let xinv = Scalar::one() / x.clone();
    let structure = |images: [(usize, Scalar); 4]| {
        let mut m = Matrix::zero(4, 4);
        for (c, (row, s)) in images.into_iter().enumerate() {
            m[(row - 1, c)] = s;
        }
        m
    };
    // J_x v₁ = −v₄/x, v₂ ↦ v₃; K v₁ = v₂, K v₄ = x v₃.
    let jx = structure([(4, -&xinv), (3, Scalar::one()), (2, Scalar::int(-1)), (1, x.clone())]);
    let kk = structure([(2, Scalar::one()), (1, Scalar::int(-1)), (4, -&xinv), (3, x.clone())]);
    let omega_x = two(4, 1, &(l * x)).add(&two(2, 3, l));
    let psi_x = e(1).scale(&i).add(&e(4).scale(x)).wedge(&e(2).add(&e(3).scale(&i))).scale(&(l / &Scalar::int(2)));
    let omega_k = two(1, 2, l).add(&two(4, 3, &(l * x)));
    let psi_k = e(1).add(&e(2).scale(&i)).wedge(&e(3).scale(&i).add(&e(4).scale(x)));
    let err = |e: sva_core::ceforms::FormError| InputError::Other(e.to_string());
    let mut r = Report::new("forms", "SU(2)-structures on su(2) ⊕ u(1)");
    su_checks(&mut r, "(ω_x, Ψ_x)", &verify_su_structure(&h, &omega_x, &psi_x, &theta, &h_ell, &jx).map_err(err)?);
    su_checks(&mut r, "(ω_K, Ψ_K)", &verify_su_structure(&h, &omega_k, &psi_k, &theta, &h_ell, &kk).map_err(err)?);
    let names: Vec<String> = (1..=4).map(|k| format!("v^{k}")).collect();
    let dck = dc(&h, &omega_k, &kk).map_err(err)?;
    r.check("d^c_K ω_K = −H_ℓ", dck == h_ell.scale(&Scalar::int(-1)), format!("d^c_K ω_K = {}", dck.show(&names)));
    r.datum("θ", theta.show(&names));
    r.datum("H_ℓ", h_ell.show(&names));
    Ok(r)
}

/// The Hopf instance as a generalized metric with its complex structures.
pub struct HopfSetup {
    pub algebra: Arc<QuadraticLieAlgebra>,
    pub metric: GeneralizedMetric,
    pub structures: Vec<Matrix>,
    pub divergence: Vector,
    pub level: Scalar,
    pub pair: IsotropicPair,
}

pub fn hopf_setup(p: &HopfParams) -> Result<HopfSetup, InputError> {
    let v = p.values()?;
    let g = Arc::new(g_ell(&v.field, &v.ell, "v"));
    let h = hopf_on(g.clone(), &v.ell, &v.x, &v.a, &v.k, false);
    let structures = sva_core::instances::hyper_triple(&h).to_vec();
    Ok(HopfSetup {
        algebra: g,
        metric: h.metric.clone(),
        structures,
        divergence: h.eps.clone(),
        level: v.k,
        pair: h.pair,
    })
}
