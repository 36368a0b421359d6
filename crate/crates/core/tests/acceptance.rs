//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use maxdiff::frontend::{parse_formula, parse_interpolation, parse_problem, print_formula};
use maxdiff::instantiate::{instantiate, simplify_units};
use maxdiff::interpolate::{ard_interpolate, InterpolationConfig, InterpolationOutcome, LoopState};
use maxdiff::kernel::{Formula, IndexTheory, Literal, Op, Sort, TermId, TermStore};
use maxdiff::oracle::{
    brute_force_check, check_axioms, check_interpolant, check_metric, Bounds, BruteVerdict, CheckOptions,
    FiniteArrayModel,
};
use maxdiff::preprocess::{preprocess, Origin};
use maxdiff::solver::{decide, Decision};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

const FOUR_ATOMS: &str = include_str!("../fixtures/four_atoms.ard");
const FOUR_ATOMS_A: &str = include_str!("../fixtures/four_atoms_a.ard");
const GAP_B: &str = include_str!("../fixtures/gap_b.ard");
const WRITE_A: &str = include_str!("../fixtures/write_a.ard");
const TWO_READS_B: &str = include_str!("../fixtures/two_reads_b.ard");
const STRCPY_A: &str = include_str!("../fixtures/strcpy_a.ard");
const STRCPY_B: &str = include_str!("../fixtures/strcpy_b.ard");
const STRCPY_INV: &str = include_str!("../fixtures/strcpy_inv.ard");

type Verdict = Result<String, String>;

fn to_opts(theory: IndexTheory) -> CheckOptions {
    CheckOptions { theory, brute: None }
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

fn within(d: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if d <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {} (limit {})", ms(d), ms(limit)))
    }
}

fn instance_table() -> Verdict {
    let start = Instant::now();
    let mut s = TermStore::new();
    let p = parse_problem(&mut s, FOUR_ATOMS).map_err(|e| e.to_string())?;
    let pair = preprocess(&mut s, &p.formula()).map_err(|e| e.to_string())?;
    let inst = instantiate(&mut s, &pair, 0, IndexTheory::TotalOrder);
    let clauses: Vec<Vec<Literal>> = inst
        .phi2
        .iter()
        .filter(|e| {
            matches!(
                e.origin,
                Origin::ChainGround(..) | Origin::ChainInstance(..) | Origin::WriteGround(_) | Origin::WriteInstance(_)
            )
        })
        .map(|e| e.formula.literals())
        .collect();
    let got: BTreeSet<BTreeSet<Literal>> = simplify_units(&clauses)
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    let elapsed = start.elapsed();
    let expected_text = [
        "(>= i1 0)",
        "(=> (= (rd a i1) (rd c1 i1)) (= i1 0))",
        "(=> (= (rd b i1) (rd c2 i1)) (= i1 0))",
        "(=> (> i3 i1) (= (rd a i3) (rd c1 i3)))",
        "(=> (> i3 i1) (= (rd b i3) (rd c2 i3)))",
        "(=> (>= i3 0) (= (rd a i3) e3))",
        "(= (rd a1 i1) e1)",
        "(=> (not (= i1 i3)) (= (rd a i1) (rd a1 i1)))",
        "(=> (not (= i1 i3)) (= (rd a1 i3) (rd b i3)))",
        "(=> (not (= i3 0)) (= (rd a 0) (rd a1 0)))",
        "(=> (not (= i1 0)) (= (rd a1 0) (rd b 0)))",
    ];
    let mut expected = BTreeSet::new();
    for t in expected_text {
        let f = parse_formula(&mut s, t).map_err(|e| format!("{t}: {e}"))?;
        let lits = match f.nnf() {
            Formula::Or(gs) => gs.iter().flat_map(|g| g.literals()).collect(),
            g => g.literals(),
        };
        expected.insert(lits.into_iter().map(|l: Literal| l.order_normal()).collect::<BTreeSet<_>>());
    }
    if got != expected {
        let show = |s: &mut TermStore, set: &BTreeSet<BTreeSet<Literal>>, other: &BTreeSet<BTreeSet<Literal>>| {
            set.difference(other)
                .map(|c| print_formula(s, &Formula::clause(c.iter().copied()), false))
                .collect::<Vec<_>>()
                .join("; ")
        };
        let extra = show(&mut s, &got, &expected);
        let missing = show(&mut s, &expected, &got);
        return Err(format!("extra [{extra}] missing [{missing}]"));
    }
    within(elapsed, Duration::from_millis(100), "instantiation")?;
    Ok(format!("{} formulas, {}", got.len(), ms(elapsed)))
}

fn two_iterations() -> Verdict {
    let start = Instant::now();
    let mut s = TermStore::new();
    let p = parse_interpolation(&mut s, FOUR_ATOMS_A, GAP_B).map_err(|e| e.to_string())?;
    let (a, b) = (p.a.formula(), p.b.formula());
    let out = ard_interpolate(&mut s, &a, &b, InterpolationConfig::default()).map_err(|e| e.to_string())?;
    let InterpolationOutcome::Interpolant(th) = out else {
        return Err(format!("expected an interpolant, got {out:?}"));
    };
    if th.iterations != 2 {
        return Err(format!("{} iterations instead of 2", th.iterations));
    }
    let report = check_interpolant(&mut s, &a, &b, &th.formula, to_opts(IndexTheory::TotalOrder)).map_err(|e| e.to_string())?;
    if !report.all_pass() {
        return Err(format!("check failed: {report}"));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "interpolation and check")?;
    Ok(format!("2 iterations, checked, {}", ms(elapsed)))
}

fn write_two_reads() -> Verdict {
    let start = Instant::now();
    let mut s = TermStore::new();
    let p = parse_interpolation(&mut s, WRITE_A, TWO_READS_B).map_err(|e| e.to_string())?;
    let (a, b) = (p.a.formula(), p.b.formula());
    let out = ard_interpolate(&mut s, &a, &b, InterpolationConfig::default()).map_err(|e| e.to_string())?;
    let InterpolationOutcome::Interpolant(th) = out else {
        return Err(format!("expected an interpolant, got {out:?}"));
    };
    let opts = CheckOptions {
        theory: IndexTheory::TotalOrder,
        brute: Some(Bounds {
            max_chain: Some(4),
            max_elems: Some(4),
        }),
    };
    let report = check_interpolant(&mut s, &a, &b, &th.formula, opts).map_err(|e| e.to_string())?;
    if !report.all_pass() || report.a_implies.brute_agrees != Some(true) || report.b_refutes.brute_agrees != Some(true) {
        return Err(format!("check failed: {report}"));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "interpolation and bounded cross-check")?;
    Ok(format!("checked with bounded search agreeing, {}", ms(elapsed)))
}

struct Vocab {
    arrays: Vec<TermId>,
    index: Vec<TermId>,
    elems: Vec<TermId>,
}

fn random_literal(s: &mut TermStore, rng: &mut StdRng, v: &Vocab) -> Literal {
    let x = *v.arrays.choose(rng).unwrap();
    let y = *v.arrays.iter().filter(|&&y| y != x).collect::<Vec<_>>().choose(rng).copied().unwrap_or(&x);
    let i = *v.index.choose(rng).unwrap();
    let j = *v.index.choose(rng).unwrap();
    let e = *v.elems.choose(rng).unwrap();
    match rng.gen_range(0..8) {
        0 => {
            let d = s.diff(x, y);
            Literal::eq(s, d, i)
        }
        1 => {
            let w = s.wr(y, i, e);
            Literal::eq(s, x, w)
        }
        2 => {
            let r = s.rd(x, i);
            Literal::eq(s, r, e)
        }
        3 => {
            let (r1, r2) = (s.rd(x, i), s.rd(y, i));
            Literal::ne(s, r1, r2)
        }
        4 => Literal::lt(i, j),
        5 => Literal::le(i, j),
        6 => Literal::ne(s, x, y),
        _ => {
            let r = s.rd(x, i);
            Literal::ne(s, r, e)
        }
    }
}

/// A random pair of conjunctions over `m` shared arrays and at most five index variables.
fn random_pair(seed: u64) -> (TermStore, Formula, Formula) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut s = TermStore::new();
    let var = |s: &mut TermStore, name: String, sort: Sort| {
        let v = s.declare(&name, sort).unwrap();
        s.var_term(v)
    };
    let m = rng.gen_range(2..=4);
    let common: Vec<TermId> = (1..=m).map(|n| var(&mut s, format!("c{n}"), Sort::Array)).collect();
    let la = var(&mut s, "a".into(), Sort::Array);
    let lb = var(&mut s, "b".into(), Sort::Array);
    let n = rng.gen_range(1..=5);
    let zero = s.zero();
    let (mut ia, mut ib) = (vec![zero], vec![zero]);
    for k in 1..=n {
        let t = var(&mut s, format!("i{k}"), Sort::Index);
        match rng.gen_range(0..3) {
            0 => ia.push(t),
            1 => ib.push(t),
            _ => {
                ia.push(t);
                ib.push(t);
            }
        }
    }
    let e = var(&mut s, "e".into(), Sort::Elem);
    let ea = var(&mut s, "ea".into(), Sort::Elem);
    let eb = var(&mut s, "eb".into(), Sort::Elem);
    let bot = s.bot();
    let mut arrays_a = common.clone();
    arrays_a.push(la);
    let mut arrays_b = common;
    arrays_b.push(lb);
    let va = Vocab {
        arrays: arrays_a,
        index: ia,
        elems: vec![e, ea, bot],
    };
    let vb = Vocab {
        arrays: arrays_b,
        index: ib,
        elems: vec![e, eb, bot],
    };
    let mut side = |s: &mut TermStore, v: &Vocab| {
        let len = rng.gen_range(2..=5);
        Formula::and((0..len).map(|_| Formula::Lit(random_literal(s, &mut rng, v))))
    };
    let a = side(&mut s, &va);
    let b = side(&mut s, &vb);
    (s, a, b)
}

struct BoundRun {
    looped: usize,
    max_iterations: usize,
    violations: Vec<String>,
    models: Vec<FiniteArrayModel>,
}

fn loop_bound(models: &mut Vec<FiniteArrayModel>) -> Verdict {
    let start = Instant::now();
    let target = 500;
    let mut run = BoundRun {
        looped: 0,
        max_iterations: 0,
        violations: Vec::new(),
        models: Vec::new(),
    };
    let mut seed = 0u64;
    while run.looped < target && seed < 200_000 {
        let batch: Vec<_> = (seed..seed + 256)
            .into_par_iter()
            .map(|sd| -> Result<Option<(usize, usize, Option<FiniteArrayModel>)>, String> {
                let (mut s, a, b) = random_pair(sd);
                let theory = IndexTheory::TotalOrder;
                let both = decide(&mut s, theory, &Formula::and([a.clone(), b.clone()])).map_err(|e| format!("seed {sd}: {e}"))?;
                if let Decision::Sat(m) = both {
                    return Ok(Some((usize::MAX, 0, Some(m))));
                }
                if !decide(&mut s, theory, &a).map_err(|e| e.to_string())?.is_sat()
                    || !decide(&mut s, theory, &b).map_err(|e| e.to_string())?.is_sat()
                {
                    return Ok(None);
                }
                let bound = LoopState::new(&mut s, theory, &a, &b).bound();
                let out = ard_interpolate(&mut s, &a, &b, InterpolationConfig::default()).map_err(|e| format!("seed {sd}: {e}"))?;
                let InterpolationOutcome::Interpolant(th) = out else {
                    return Err(format!("seed {sd}: no interpolant"));
                };
                let report = check_interpolant(&mut s, &a, &b, &th.formula, to_opts(theory)).map_err(|e| e.to_string())?;
                if !report.all_pass() {
                    return Err(format!("seed {sd}: invalid interpolant: {report}"));
                }
                Ok(Some((th.iterations, bound, None)))
            })
            .collect();
        seed += 256;
        for r in batch {
            match r {
                Err(e) => run.violations.push(e),
                Ok(None) => {}
                Ok(Some((usize::MAX, _, Some(m)))) => run.models.push(m),
                Ok(Some((it, bound, _))) => {
                    run.looped += 1;
                    run.max_iterations = run.max_iterations.max(it);
                    if it > bound {
                        run.violations.push(format!("{it} iterations above bound {bound}"));
                    }
                }
            }
        }
    }
    models.append(&mut run.models);
    if !run.violations.is_empty() {
        return Err(format!("{} violations, first: {}", run.violations.len(), run.violations[0]));
    }
    if run.looped < target {
        return Err(format!("only {} unsat pairs generated", run.looped));
    }
    Ok(format!(
        "{} unsat pairs, all within bound, max {} iterations, {}",
        run.looped,
        run.max_iterations,
        ms(start.elapsed())
    ))
}

const FLAT_HEADER: &str = "(declare-const a Array) (declare-const b Array) (declare-const i Index) \
(declare-const j Index) (declare-const k Index) (declare-const d Elem) (declare-const e Elem)";

const FLAT_POOL: &[&str] = &[
    "(< i j)",
    "(<= j i)",
    "(< j k)",
    "(= k 0)",
    "(not (= i k))",
    "(= a (wr b i d))",
    "(= b (wr a j e))",
    "(= (diff a b) k)",
    "(= (diff a b) i)",
    "(= (diff a eps) j)",
    "(= a b)",
    "(not (= a b))",
    "(= (rd a i) d)",
    "(= (rd b i) d)",
    "(= (rd a j) e)",
    "(not (= (rd b k) e))",
    "(= (rd a k) (rd b k))",
    "(= d e)",
    "(not (= d e))",
    "(= d bot)",
    "(not (= e bot))",
];

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().map_or(0, |&x: &usize| x + 1);
            for k in from..n {
                let mut t: Vec<usize> = s.clone();
                t.push(k);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn oracle_agreement(models: &mut Vec<FiniteArrayModel>) -> Verdict {
    let start = Instant::now();
    let sets = subsets(FLAT_POOL.len(), 4);
    let results: Vec<Result<(bool, Vec<FiniteArrayModel>), String>> = sets
        .par_iter()
        .map(|set| {
            let mut text = FLAT_HEADER.to_string();
            for &k in set {
                text.push_str(&format!(" (assert {})", FLAT_POOL[k]));
            }
            let mut s = TermStore::new();
            let p = parse_problem(&mut s, &text).map_err(|e| e.to_string())?;
            let f = p.formula();
            let d = decide(&mut s, IndexTheory::TotalOrder, &f).map_err(|e| format!("{text}: {e}"))?;
            let r = brute_force_check(&mut s, IndexTheory::TotalOrder, &f, Bounds::default()).map_err(|e| e.to_string())?;
            if !r.is_complete() {
                return Err(format!("incomplete bounded search on {text}"));
            }
            let mut found = Vec::new();
            if let Decision::Sat(m) = &d {
                found.push(m.clone());
            }
            if let BruteVerdict::Sat(m) = &r.verdict {
                found.push(m.clone());
            }
            if d.is_sat() != r.is_sat() {
                return Err(format!(
                    "disagreement on {}: decide {} bounded {}",
                    set.iter().map(|&k| FLAT_POOL[k]).collect::<Vec<_>>().join(" "),
                    d.is_sat(),
                    r.is_sat()
                ));
            }
            Ok((d.is_sat(), found))
        })
        .collect();
    let mut sat = 0;
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok((v, mut ms)) => {
                sat += v as usize;
                models.append(&mut ms);
            }
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(format!("{} of {} sets failed, first: {}", errors.len(), sets.len(), errors[0]));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(600), "oracle comparison")?;
    Ok(format!("{} sets ({} sat) agree, {}", sets.len(), sat, ms(elapsed)))
}

fn metric_laws(models: &[FiniteArrayModel]) -> Verdict {
    for m in models {
        check_metric(m)?;
        check_axioms(m)?;
    }
    if models.is_empty() {
        return Err("no models collected".into());
    }
    Ok(format!("{} models satisfy the metric laws and array axioms", models.len()))
}

fn strcpy_invariant() -> Verdict {
    let start = Instant::now();
    let mut s = TermStore::new();
    let p = parse_interpolation(&mut s, STRCPY_A, STRCPY_B).map_err(|e| e.to_string())?;
    let theory = p.a.theory();
    if theory != IndexTheory::DifferenceLogic {
        return Err("fixtures are not in difference logic".into());
    }
    let inv = parse_formula(&mut s, STRCPY_INV).map_err(|e| e.to_string())?;
    let report = check_interpolant(&mut s, &p.a.formula(), &p.b.formula(), &inv, to_opts(theory)).map_err(|e| e.to_string())?;
    if !report.all_pass() {
        return Err(format!("check failed: {report}"));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5), "invariant check")?;
    Ok(format!("both conditions hold, {}", ms(elapsed)))
}

fn order_congruence_suite() -> Verdict {
    let cases = [
        (
            "(declare-const i1 Index) (declare-const i3 Index)",
            "(declare-const t Index) (assert (<= i1 t)) (assert (<= t i3))",
            "(assert (< i3 i1))",
            "(<= i1 i3)",
        ),
        (
            "(declare-const i1 Index) (declare-const i3 Index)",
            "(declare-const t Index) (assert (< i1 t)) (assert (<= t i3))",
            "(assert (<= i3 i1))",
            "(< i1 i3)",
        ),
        (
            "(declare-const c1 Index) (declare-const c2 Index)",
            "(declare-const z Index) (assert (<= c1 z)) (assert (<= z c2)) (assert (<= c2 c1))",
            "(declare-const f Array) (assert (not (= (rd f c1) (rd f c2))))",
            "(= c1 c2)",
        ),
    ];
    let mut shown = Vec::new();
    for (header, ta, tb, expected) in cases {
        let mut s = TermStore::new();
        let (ta, tb) = (format!("{header} {ta}"), format!("{header} {tb}"));
        let p = parse_interpolation(&mut s, &ta, &tb).map_err(|e| e.to_string())?;
        let (a, b) = (p.a.formula(), p.b.formula());
        let out = ard_interpolate(&mut s, &a, &b, InterpolationConfig::default()).map_err(|e| e.to_string())?;
        let InterpolationOutcome::Interpolant(th) = out else {
            return Err(format!("expected an interpolant, got {out:?}"));
        };
        let report = check_interpolant(&mut s, &a, &b, &th.formula, to_opts(IndexTheory::TotalOrder)).map_err(|e| e.to_string())?;
        if !report.all_pass() {
            return Err(format!("check failed: {report}"));
        }
        let mut bad = None;
        th.formula.visit_literals(&mut |l| {
            for t in l.atom.terms() {
                if !matches!(s.op(t), Op::Var(_) | Op::Zero) || s.sort(t) != Sort::Index {
                    bad = Some(*l);
                }
            }
        });
        let printed = print_formula(&mut s, &th.formula, false);
        if bad.is_some() {
            return Err(format!("interpolant {printed} has an atom outside the order language"));
        }
        let want = parse_formula(&mut s, expected).map_err(|e| e.to_string())?;
        let same = want.literals().len() == 1 && th.formula.literals().len() == 1 && {
            let (x, y) = (want.literals()[0], th.formula.literals()[0]);
            x == y || x.order_normal() == y.order_normal()
        };
        shown.push(format!("{printed}{}", if same { "" } else { " (equivalent form)" }));
    }
    Ok(shown.join(", "))
}

fn linear_growth() -> Verdict {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=50usize {
        let mut s = TermStore::new();
        let mut text = String::from("(declare-const a Array) (declare-const b Array) (declare-const c Array) (declare-const e Elem)");
        for k in 1..=n {
            text.push_str(&format!(" (declare-const i{k} Index)"));
        }
        text.push_str(" (assert (= a (wr b i1 e))) (assert (= (diff a c) i1))");
        for k in 1..=n {
            text.push_str(&format!(" (assert (= (rd c i{k}) e))"));
        }
        let p = parse_problem(&mut s, &text).map_err(|e| e.to_string())?;
        let pair = preprocess(&mut s, &p.formula()).map_err(|e| e.to_string())?;
        let inst = instantiate(&mut s, &pair, 0, IndexTheory::TotalOrder);
        counts.push((n, inst.phi2.len() - pair.phi2.len()));
    }
    let step = counts[1].1 as i64 - counts[0].1 as i64;
    for w in counts.windows(2) {
        if w[1].1 as i64 - w[0].1 as i64 != step {
            return Err(format!("instance count jumps from {} to {} at {} variables", w[0].1, w[1].1, w[1].0));
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "scaling series")?;
    Ok(format!(
        "{} instances at 1 variable, {} at 50, +{} per variable, {}",
        counts[0].1,
        counts[49].1,
        step,
        ms(elapsed)
    ))
}

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn main() {
    let mut models = Vec::new();
    let mut results: Vec<(&str, Verdict)> = vec![
        ("instance table of the four-atom pair", guarded(instance_table)),
        ("two-iteration interpolation", guarded(two_iterations)),
        ("write against two reads", guarded(write_two_reads)),
    ];
    results.push(("loop bound on random unsat pairs", guarded(|| loop_bound(&mut models))));
    results.push(("decision procedure against bounded search", guarded(|| oracle_agreement(&mut models))));
    results.push(("pseudo-metric laws on produced models", guarded(|| metric_laws(&models))));
    results.push(("copy-loop invariant", guarded(strcpy_invariant)));
    results.push(("order and congruence interpolants", guarded(order_congruence_suite)));
    results.push(("linear growth of instances", guarded(linear_growth)));
    let mut failed = 0;
    for (n, (name, v)) in results.iter().enumerate() {
        match v {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
