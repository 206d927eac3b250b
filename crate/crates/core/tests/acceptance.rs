//! Acceptance suite: one line per criterion, exact comparisons throughout.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weakpoisson::algebra::{rat, Chart, ChartRef, GradingKind, Poly};
use weakpoisson::bracket::{Brackets, ConnectionData};
use weakpoisson::cohomology::{cohomology_at, operator_matrix, CochainOperator, Truncation};
use weakpoisson::dsl::{expr_to_string, load_system, parse_expression, parse_system, print_system};
use weakpoisson::gauge::Membership;
use weakpoisson::sampling::Sampler;

use common::docs::{document, expr};
use common::{case, completed, load, sign, FIXTURES};

/// Sub-results of one criterion: every check must hold for a pass.
#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, label: impl Into<String>, ok: bool) {
        self.0.push((label.into(), ok));
    }

    fn passed(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
}

fn run(n: u32, title: &str, body: impl FnOnce(&mut Checks)) -> bool {
    let mut checks = Checks::default();
    let result = catch_unwind(AssertUnwindSafe(|| body(&mut checks)));
    let ok = result.is_ok() && checks.passed();
    println!("criterion {n:>2}: {} [exact] {title}", if ok { "PASS" } else { "FAIL" });
    for (label, ok) in &checks.0 {
        println!("             {} {label}", if *ok { "ok  " } else { "FAIL" });
    }
    if let Err(e) = result {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        println!("             panic: {}", msg.unwrap_or_default());
    }
    ok
}

fn heisenberg_jacobi(k: &mut Checks) {
    let loaded = load("heisenberg");
    let sys = &loaded.system;
    let p = sys.spec().bivector.clone().unwrap();
    let pp = sys.brackets().schouten(&p, &p).unwrap();
    let target = loaded.eval("2*wedge(X, Y, Z)").unwrap();
    k.add(format!("[[P,P]] = 2 X^Y^Z (engine: {pp}, 2 X^Y^Z = {target})"), pp == target);
    k.add("[[P,P]] = -2 X^Y^Z", pp == target.scale(&rat(-1)));
    let witness = match sys.ideal_membership(&pp, 2).unwrap() {
        Membership::Member(cert) => {
            let z = sys.spec().generators.iter().position(|g| Some(g) == loaded.named("Z"));
            cert.reconstruct(sys) == pp
                && cert.constraint_factors.iter().all(Poly::is_zero)
                && z.is_some_and(|i| cert.generator_factors.iter().enumerate().all(|(j, f)| (j == i) != f.is_zero()))
        }
        Membership::Inconclusive { .. } => false,
    };
    k.add("membership certificate uses Z alone at bound 2", witness);
}

fn heisenberg_observable(k: &mut Checks) {
    let loaded = load("heisenberg");
    let sys = &loaded.system;
    let v = sys.spec().dynamics.clone().unwrap();
    let f = sys.interior_product(&v, loaded.named("theta").unwrap()).unwrap();
    k.add("i_V theta = (x^2 + y^2)/2", f == loaded.eval("1/2*(x^2 + y^2)").unwrap());
    k.add("V(i_V theta) = 0", sys.lie_derivative_form(&v, &f).unwrap().is_zero());
}

fn contact(k: &mut Checks) {
    for n in 1..=3 {
        let loaded = load(&format!("contact-{n}"));
        let sys = &loaded.system;
        let br = sys.brackets();
        let spec = sys.spec();
        let p = spec.bivector.clone().unwrap();
        let r = spec.generators[0].clone();
        let v = spec.dynamics.clone().unwrap();
        let p_wedge_r = &r * &p;
        let pp = br.schouten(&p, &p).unwrap();
        k.add(format!("n={n}: [[P,P]] - 2 P^R = 0"), (&pp - &p_wedge_r.scale(&rat(2))).is_zero());
        k.add(format!("n={n}: [[P,R]] = 0"), br.schouten(&p, &r).unwrap().is_zero());
        k.add(format!("n={n}: [[V,P]] = 0"), br.schouten(&v, &p).unwrap().is_zero());
        let mut minus_pq = Poly::zero(loaded.chart());
        for i in 1..=n {
            minus_pq -= &loaded.eval(&format!("p{i}*q{i}")).unwrap();
        }
        let f = sys.interior_product(&v, loaded.named("theta").unwrap()).unwrap();
        k.add(format!("n={n}: i_V theta = -sum p^i q^i"), f == minus_pq);
        k.add(format!("n={n}: V(f) = 0"), sys.lie_derivative_form(&v, &f).unwrap().is_zero());
    }
}

fn master_completion(k: &mut Checks) {
    for name in FIXTURES {
        let sys = &load(name).system;
        let s = sys.complete_master(&sys.assemble_s0(), 3, 3).unwrap();
        let report = sys.check_master(&s.value).unwrap();
        k.add(format!("{name}: terminates closed with (S,S) = 0"), s.closed && report.passed());
        for (label, p) in &report.relations {
            k.add(format!("{name}: {label} = 0"), p.is_zero());
        }
    }
}

fn perturbations(s: &Poly) -> Vec<Poly> {
    s.terms()
        .map(|(m, c)| s + &Poly::from_terms(s.chart(), [(m.clone(), c.clone())]))
        .collect()
}

fn lift_consistency(k: &mut Checks) {
    for name in FIXTURES {
        let c = completed(name);
        let sys = &c.loaded.system;
        let br = sys.brackets();
        k.add(format!("{name}: {{Psi,Psi}} = 0"), br.even(&c.psi, &c.psi).unwrap().is_zero());
        let (mut total, mut both) = (0, 0);
        for s in perturbations(&c.s) {
            let psi = sys.lift(&s).unwrap();
            total += 1;
            both += (!br.odd(&s, &s).unwrap().is_zero() && !br.even(&psi, &psi).unwrap().is_zero()) as usize;
        }
        k.add(format!("{name}: {both}/{total} single-coefficient perturbations break both"), total > 0 && both == total);
    }
}

const FORMS_PER_FIXTURE: u64 = 128;

fn operator_identities(k: &mut Checks) {
    for name in FIXTURES {
        let c = completed(name);
        let sys = &c.loaded.system;
        let qhat = c.qhat();
        let pv = c.v.parity().unwrap();
        let (mut q2, mut d2, mut anti, mut cartan, mut classical) = (0, 0, 0, 0, 0);
        for seed in 0..FORMS_PER_FIXTURE {
            let mut s = Sampler::new(seed);
            let w = c.random_form(&mut s, &c.form_vars());
            let qw = qhat.apply(&w);
            let dw = sys.exterior_derivative(&w).unwrap();
            q2 += qhat.apply(&qw).is_zero() as u64;
            d2 += sys.exterior_derivative(&dw).unwrap().is_zero() as u64;
            anti += (&qhat.apply(&dw) + &sys.exterior_derivative(&qw).unwrap()).is_zero() as u64;
            let lie = sys.lie_derivative_form(&c.v, &w).unwrap();
            let di = sys.exterior_derivative(&sys.interior_product(&c.v, &w).unwrap()).unwrap();
            let id = sys.interior_product(&c.v, &dw).unwrap();
            cartan += (lie == &di + &id.scale(&sign(pv))) as u64;
            classical += (lie == &di + &id) as u64;
        }
        let n = FORMS_PER_FIXTURE;
        k.add(format!("{name}: Qhat^2 = 0 on {q2}/{n}"), q2 == n);
        k.add(format!("{name}: d^2 = 0 on {d2}/{n}"), d2 == n);
        k.add(format!("{name}: Qhat d + d Qhat = 0 on {anti}/{n}"), anti == n);
        k.add(format!("{name}: L_V = d i_V + (-1)^V i_V d on {cartan}/{n} (parity of V = {pv}; d i_V + i_V d holds on {classical}/{n})"), cartan == n);
    }
}

const PROPOSITION_SAMPLES: u64 = 32;

fn propositions(k: &mut Checks) {
    for name in FIXTURES {
        let case = case(name);
        let c = &case.c;
        let sys = &c.loaded.system;
        let br = sys.brackets();
        let qhat = c.qhat();
        let gamma = sys.lift(&c.v).unwrap();
        let pv = c.v.parity().unwrap();
        let (mut closed, mut jacobi, mut literal, mut flipped) = (0, 0, 0, 0);
        for seed in 0..PROPOSITION_SAMPLES {
            let mut s = Sampler::new(seed);
            let cocycles = c.qhat_cocycles(&mut s, 2);
            let (w, t) = (&cocycles[0], &cocycles[1]);
            let x = &case.fields[s.below(case.fields.len())];
            let bracket = sys.form_bracket(&c.psi, &[w.clone(), t.clone()]).unwrap();
            closed += (qhat.apply(&bracket).is_zero()
                && qhat.apply(&sys.exterior_derivative(w).unwrap()).is_zero()
                && qhat.apply(&sys.interior_product(x, w).unwrap()).is_zero()) as u64;

            let px = x.parity().unwrap();
            let form = c.random_form(&mut s, &c.form_vars());
            let ix = |w: &Poly| sys.interior_product(x, w).unwrap();
            let dot = |w: &Poly| br.even(&gamma, w).unwrap().restrict_to_lagrangian();
            let jt = br.even(&br.even(&gamma, x).unwrap(), &form).unwrap().restrict_to_lagrangian().scale(&sign(px));
            jacobi += (dot(&ix(&form)) == &ix(&dot(&form)) + &jt) as u64;

            let lie = |w: &Poly| sys.lie_derivative_form(&c.v, w).unwrap();
            let lhs = &lie(&ix(&form)) - &ix(&lie(&form));
            let vx = br.odd(&c.v, x).unwrap();
            let term = br.even(&vx, &form).unwrap().restrict_to_lagrangian().scale(&sign(px + pv));
            literal += (lhs == term) as u64;
            flipped += (lhs == term.scale(&rat(-1))) as u64;
        }
        let n = PROPOSITION_SAMPLES;
        k.add(format!("{name}: bracket, d and i_X keep Qhat-cocycles on {closed}/{n}"), closed == n);
        k.add(format!("{name}: (i_X w)' = i_X w' + (-1)^X {{{{Gamma,X}},w}} on {jacobi}/{n}"), jacobi == n);
        k.add(
            format!("{name}: L_V i_X - i_X L_V = (-1)^(X+V) {{(V,X),w}} on {literal}/{n} (opposite sign holds on {flipped}/{n})"),
            literal == n,
        );
        let mut invariant = true;
        let mut nonzero = 0;
        for w in &case.invariants {
            for t in &case.invariants {
                let b = sys.form_bracket(&c.psi, &[w.clone(), t.clone()]).unwrap();
                invariant &= sys.lie_derivative_form(&c.v, &b).unwrap().is_zero();
                nonzero += !b.is_zero() as usize;
            }
        }
        k.add(format!("{name}: brackets of invariant forms are invariant ({nonzero} nonzero)"), invariant && nonzero > 0);
    }
}

const AXIOM_SAMPLES: u64 = 1000;

fn twisted_brackets() -> (ChartRef, Brackets) {
    let ch = Chart::gauge(&["x", "y"], 1, 2).unwrap();
    let v = |n: &str| Poly::named(&ch, n).unwrap();
    let idx = |n: &str| ch.lookup(n).unwrap();
    let mut conn = ConnectionData::new();
    conn.insert(idx("c1"), idx("x"), idx("c2"), v("y"));
    conn.insert(idx("c2"), idx("y"), idx("c1"), v("x").pow(2));
    conn.insert(idx("eta1"), idx("x"), idx("eta1"), &v("x") * &v("y"));
    let br = Brackets::twisted(&ch, &conn).unwrap();
    (ch, br)
}

fn odd_axioms(ch: &ChartRef, br: &Brackets, seed: u64) -> bool {
    let mut s = Sampler::new(seed);
    let vars: Vec<usize> = ch.cotangent_vars().collect();
    let kinds = [GradingKind::Parity];
    let f = s.homogeneous(ch, &vars, &kinds, 3);
    let g = s.homogeneous(ch, &vars, &kinds, 3);
    let h = s.homogeneous(ch, &vars, &kinds, 3);
    let (pf, pg, ph) = (f.parity().unwrap(), g.parity().unwrap(), h.parity().unwrap());
    let b = |a: &Poly, c: &Poly| br.odd(a, c).unwrap();
    let fg = b(&f, &g);
    let antisymmetry = fg == b(&g, &f).scale(&-sign((pf + 1) * (pg + 1)));
    let jacobi = b(&f, &b(&g, &h)) == &b(&fg, &h) + &b(&g, &b(&f, &h)).scale(&sign((pf + 1) * (pg + 1)));
    let leibniz_right = b(&f, &(&g * &h)) == &(&fg * &h) + &(&g * &b(&f, &h)).scale(&sign((pf + 1) * pg));
    let leibniz_left = b(&(&f * &g), &h) == &(&f * &b(&g, &h)) + &(&b(&f, &h) * &g).scale(&sign(pg * (ph + 1)));
    antisymmetry && jacobi && leibniz_right && leibniz_left
}

fn even_axioms(ch: &ChartRef, br: &Brackets, seed: u64) -> bool {
    let mut s = Sampler::new(seed);
    let vars: Vec<usize> = (0..ch.len()).collect();
    let kinds = [GradingKind::Parity, GradingKind::Ghost];
    let f = s.homogeneous(ch, &vars, &kinds, 3);
    let g = s.homogeneous(ch, &vars, &kinds, 3);
    let h = s.homogeneous(ch, &vars, &kinds, 3);
    let (pf, pg, ph) = (f.parity().unwrap(), g.parity().unwrap(), h.parity().unwrap());
    let b = |a: &Poly, c: &Poly| br.even(a, c).unwrap();
    let fg = b(&f, &g);
    let antisymmetry = fg == b(&g, &f).scale(&-sign(pf * pg));
    let jacobi = b(&f, &b(&g, &h)) == &b(&fg, &h) + &b(&g, &b(&f, &h)).scale(&sign(pf * pg));
    let leibniz_right = b(&f, &(&g * &h)) == &(&fg * &h) + &(&g * &b(&f, &h)).scale(&sign(pf * pg));
    let leibniz_left = b(&(&f * &g), &h) == &(&f * &b(&g, &h)) + &(&b(&f, &h) * &g).scale(&sign(pg * ph));
    antisymmetry && jacobi && leibniz_right && leibniz_left
}

fn bracket_axioms(k: &mut Checks) {
    let flat_ch = Chart::gauge(&["x", "y"], 1, 2).unwrap();
    let flat = Brackets::flat(&flat_ch);
    let (tw_ch, twisted) = twisted_brackets();
    let even_ch = Chart::gauge(&["x"], 1, 1).unwrap();
    let even = Brackets::flat(&even_ch);
    let n = AXIOM_SAMPLES;
    let count = |f: &dyn Fn(u64) -> bool| (0..n).filter(|&seed| f(seed)).count() as u64;
    let a = count(&|seed| odd_axioms(&flat_ch, &flat, seed));
    k.add(format!("odd bracket, flat: {a}/{n}"), a == n);
    let b = count(&|seed| odd_axioms(&tw_ch, &twisted, seed));
    k.add(format!("odd bracket, polynomial connection: {b}/{n}"), b == n);
    let c = count(&|seed| even_axioms(&even_ch, &even, seed));
    k.add(format!("even bracket: {c}/{n}"), c == n);
}

fn cohomology(k: &mut Checks) {
    for name in FIXTURES {
        let c = completed(name);
        let q = CochainOperator::q(&c.loaded.system, &c.s).unwrap();
        if *name == "heisenberg" {
            let h = cohomology_at(&q, &Truncation::momentum(0, 0, 2)).unwrap();
            k.add(format!("heisenberg: dim H^0_0 = {} at base degree 2", h.dimension), h.dimension == 6);
        }
        let mut vanishing = true;
        let mut nilpotent = true;
        for l in -1..=1 {
            for deg in 1..=2 {
                for kk in l + 1..=2 {
                    let h = cohomology_at(&q, &Truncation::momentum(kk, l, deg)).unwrap();
                    vanishing &= h.dimension == 0;
                }
                if name.starts_with("contact") && deg == 2 {
                    continue;
                }
                let first = operator_matrix(&q, &Truncation::momentum(l.max(0), l, deg)).unwrap();
                let second = operator_matrix(&q, &first.target_truncation).unwrap();
                nilpotent &= second.matrix.mul(&first.matrix).is_zero();
            }
        }
        k.add(format!("{name}: every k > l window has dimension 0"), vanishing);
        k.add(format!("{name}: Q matrix squared is zero"), nilpotent);
    }
}

fn diagnostic_is_positioned(text: &str) -> bool {
    match load_system(text) {
        Ok(_) => true,
        Err(d) => d.line >= 1 && d.column >= 1 && d.line <= text.split('\n').count(),
    }
}

fn parser(k: &mut Checks) {
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    let rng = || TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config.clone(), rng());
    let docs = runner.run(&document(), |doc| {
        let text = print_system(&doc);
        let back = parse_system(&text).map_err(|d| TestCaseError::fail(format!("{d}")))?;
        if back != doc || print_system(&back) != text {
            return Err(TestCaseError::fail(text));
        }
        Ok(())
    });
    k.add("print/parse round-trip on 1000 documents", docs.is_ok());
    let mut runner = TestRunner::new_with_rng(config, rng());
    let exprs = runner.run(&expr(), |e| {
        let back = parse_expression(&expr_to_string(&e)).map_err(|d| TestCaseError::fail(format!("{d}")))?;
        if back != e {
            return Err(TestCaseError::fail(expr_to_string(&e)));
        }
        Ok(())
    });
    k.add("print/parse round-trip on 1000 expressions", exprs.is_ok());

    let mut rng = ChaCha8Rng::seed_from_u64(0x6675_7a7a);
    let alphabet = b"coordsvectorgaugewedge xyzd/dp1()+-*^;,=:{}#\n0123456789";
    let mut positioned = 0;
    let n = 100_000;
    for i in 0..n {
        let len = rng.gen_range(0..48);
        let bytes: Vec<u8> = if i % 2 == 0 {
            (0..len).map(|_| rng.gen()).collect()
        } else {
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        };
        let text = String::from_utf8_lossy(&bytes).into_owned();
        positioned += catch_unwind(|| diagnostic_is_positioned(&text)).unwrap_or(false) as usize;
    }
    k.add(format!("random byte strings without a crash: {positioned}/{n}"), positioned == n);
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let results = [
        run(1, "Heisenberg weak Jacobi identity with a Z-witness", heisenberg_jacobi),
        run(2, "Heisenberg observable", heisenberg_observable),
        run(3, "contact fixture relations, n = 1, 2, 3", contact),
        run(4, "master completion at resolution cap 3, degree bound 3", master_completion),
        run(5, "lift nilpotency and perturbation biconditional", lift_consistency),
        run(6, "operator identities on random forms", operator_identities),
        run(7, "projectible-form propositions", propositions),
        run(8, "bracket axioms on 1000 samples each", bracket_axioms),
        run(9, "cohomology dimensions and Q nilpotency", cohomology),
        run(10, "parser round-trip and fuzzing", parser),
    ];
    let passed = results.iter().filter(|ok| **ok).count();
    println!("{passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
