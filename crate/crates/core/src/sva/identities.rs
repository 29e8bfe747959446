//! Suites of exact identities checked against the engine: the normally
//! ordered product rules on generators of `Πg`, and the soundness properties
//! of the Λ-bracket (skew-symmetry, Jacobi, Wick).

use serde::Serialize;

use super::state::{Gen, State};
use super::Sva;

/// Outcome of one identity over all tuples it was checked on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub checked: usize,
    /// Tuples (as generator names) with a nonzero residual.
    pub failures: Vec<String>,
}

impl IdentityReport {
    fn new(name: &'static str) -> IdentityReport {
        IdentityReport { name, checked: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, tuple: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(tuple());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn gens(sva: &Sva) -> Vec<State> {
    (0..sva.dim()).map(|i| State::gen(Gen::new(i))).collect()
}

/// The nine normally-ordered-product identities on all generator tuples
/// `a, b, c (, d) ∈ Πg`, in order:
///
/// 1. `:ab: = −:ba:`
/// 2. `:a(Sb): = :(Sb)a: + T[a,b]`
/// 3. `:a(:bc:): = :(:bc:)a: + kT(⟨a,b⟩c − ⟨a,c⟩b)`
/// 4. `:(:a(Sb):)c: = :a(:(Sb)c:): + :(Ta)[b,c]: + kT⟨a,c⟩Sb`
/// 5. `:(:ab:)c: = :a(:bc:): + kT(⟨c,b⟩a − ⟨c,a⟩b)`
/// 6. `:a(:bc:): = :b(:ca:): = −:b(:ac:):`
/// 7. `:a(:bc:): = :c(:ab:): = −:c(:ba:):`
/// 8. `:a(:(:bc:)d:): = −:(:(:bc:)d:)a: + k(⟨a,b⟩T:cd: − ⟨a,c⟩T:bd: + ⟨a,d⟩T:bc:)`
/// 9. `:(:a(:bc:):)d: = :a(:(:bc:)d:): + k(:(Ta)(⟨d,c⟩b − ⟨d,b⟩c): + ⟨a,d⟩T:bc:)`
pub fn appendix_suite(sva: &Sva) -> Vec<IdentityReport> {
    let names = [
        "antisymmetry",
        "commutation with S",
        "commutation past a pair",
        "reassociation with S",
        "reassociation",
        "cyclic symmetry in (a, b)",
        "cyclic symmetry in (a, c)",
        "four-factor commutation",
        "four-factor reassociation",
    ];
    let mut reports: Vec<IdentityReport> = names.iter().map(|n| IdentityReport::new(n)).collect();
    let g = gens(sva);
    let n = g.len();
    let k = sva.level().clone();
    let gram = sva.algebra().gram().clone();
    let pair = |a: usize, b: usize| gram[(a, b)].clone();
    let alg = sva.algebra().clone();
    let br = |a: usize, b: usize| sva.pi(&alg.bracket(&alg.basis(a), &alg.basis(b)));
    let nop = |x: &State, y: &State| sva.nop(x, y);
    let tee = |x: &State| sva.apply_t(x);
    let label = |idx: &[usize]| idx.iter().map(|&i| sva.names()[i].as_str()).collect::<Vec<_>>().join(",");
    for a in 0..n {
        for b in 0..n {
            let (ga, gb) = (&g[a], &g[b]);
            reports[0].record(nop(ga, gb) == nop(gb, ga).neg(), || label(&[a, b]));
            let sb = sva.apply_s(gb);
            reports[1].record(nop(ga, &sb) == nop(&sb, ga).add(&tee(&br(a, b))), || label(&[a, b]));
            for c in 0..n {
                let gc = &g[c];
                let bc = nop(gb, gc);
                let abc = nop(ga, &bc);
                let corr = gc.scale(&pair(a, b)).sub(&gb.scale(&pair(a, c)));
                reports[2].record(abc == nop(&bc, ga).add(&tee(&corr).scale(&k)), || label(&[a, b, c]));
                let lhs = nop(&nop(ga, &sb), gc);
                let rhs = nop(ga, &nop(&sb, gc)).add(&nop(&tee(ga), &br(b, c))).add(&tee(&sb).scale(&(&k * &pair(a, c))));
                reports[3].record(lhs == rhs, || label(&[a, b, c]));
                let corr = ga.scale(&pair(c, b)).sub(&gb.scale(&pair(c, a)));
                reports[4].record(nop(&nop(ga, gb), gc) == abc.add(&tee(&corr).scale(&k)), || label(&[a, b, c]));
                let ok6 = abc == nop(gb, &nop(gc, ga)) && abc == nop(gb, &nop(ga, gc)).neg();
                reports[5].record(ok6, || label(&[a, b, c]));
                let ok7 = abc == nop(gc, &nop(ga, gb)) && abc == nop(gc, &nop(gb, ga)).neg();
                reports[6].record(ok7, || label(&[a, b, c]));
                for d in 0..n {
                    let gd = &g[d];
                    let bcd = nop(&bc, gd);
                    let lhs = nop(ga, &bcd);
                    let corr = tee(&nop(gc, gd))
                        .scale(&pair(a, b))
                        .sub(&tee(&nop(gb, gd)).scale(&pair(a, c)))
                        .add(&tee(&bc).scale(&pair(a, d)));
                    reports[7].record(lhs == nop(&bcd, ga).neg().add(&corr.scale(&k)), || label(&[a, b, c, d]));
                    let inner = gb.scale(&pair(d, c)).sub(&gc.scale(&pair(d, b)));
                    let corr = nop(&tee(ga), &inner).add(&tee(&bc).scale(&pair(a, d)));
                    reports[8].record(nop(&abc, gd) == lhs.add(&corr.scale(&k)), || label(&[a, b, c, d]));
                }
            }
        }
    }
    reports
}

/// The generators `T^m S^s Πe_i` with derivative order `2m + s ≤ max_order`.
pub fn derivative_generators(sva: &Sva, max_order: u16) -> Vec<State> {
    let mut out = Vec::new();
    for order in 0..=max_order {
        for i in 0..sva.dim() {
            out.push(State::gen(Gen { t: order / 2, s: order % 2 == 1, idx: i as u16 }));
        }
    }
    out
}

/// Skew-symmetry `[a_Λ b] = (−1)^{|a||b|}[b_{−Λ−∇} a]` on all pairs,
/// the Jacobi identity on all triples, and the Wick formula
/// `[a_Λ :bc:]` (engine) against the SUSY Wick assembly and against
/// skew-symmetry from `[:bc:_{−Λ−∇} a]`, all on generators of derivative
/// order at most `pair_order` (pairs, Wick) and `triple_order` (Jacobi).
pub fn soundness_suite(sva: &Sva, pair_order: u16, triple_order: u16) -> Vec<IdentityReport> {
    let mut skew = IdentityReport::new("skew-symmetry");
    let mut jacobi = IdentityReport::new("Jacobi identity");
    let mut wick = IdentityReport::new("Wick formula");
    let gp = derivative_generators(sva, pair_order);
    let gt = derivative_generators(sva, triple_order);
    let show = |x: &State| sva.render(x);
    for a in &gp {
        for b in &gp {
            skew.record(sva.lambda_bracket(a, b) == sva.skew_value(a, b), || format!("{},{}", show(a), show(b)));
        }
    }
    for a in &gt {
        for b in &gt {
            for c in &gt {
                jacobi.record(sva.jacobi_defect(a, b, c).is_zero(), || format!("{},{},{}", show(a), show(b), show(c)));
            }
        }
    }
    let base = derivative_generators(sva, 0);
    for a in &gp {
        for b in &base {
            for c in &gp {
                let bc = sva.nop(b, c);
                let direct = sva.lambda_bracket(a, &bc);
                let ok = direct == sva.susy_wick(a, b, c) && direct == sva.skew_value(a, &bc);
                wick.record(ok, || format!("{},{},{}", show(a), show(b), show(c)));
            }
        }
    }
    vec![skew, jacobi, wick]
}
