use crate::input::{pick_alphabet, pick_structure, read_automaton, read_formula, AutomatonInput, FormulaFile};
use crate::{Cli, Command, Global, Report};
use mwmso::automata::dot::to_dot;
use mwmso::automata::json::{render, to_file};
use mwmso::automata::{multiset_behavior, Alphabet, Automaton};
use mwmso::compiler::{automaton_to_formula, Compiler};
use mwmso::decision::{ratio_emptiness_geq, twocost_emptiness_leq, Decision};
use mwmso::logic::{classify, parse_with, AssignedWord, Evaluator, Formula};
use mwmso::num::{parse_rational, rat, ExtRational, Rational};
use mwmso::omega::{energy_run, ratio_sup, LassoWord, OmegaRun};
use mwmso::structures::{
    validate_omega_structure, validate_structure, DisplacementStructure, EnergyStructure, IntVector,
    OmegaRatioStructure, PvStructure, RatioPair, RatioStructure, StructureSpec, TwoCostStructure, Violation,
    Weight,
};
use mwmso::{Error, FiniteMultiset, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

/// Runs `$body` with `$s` bound to the pv-structure named by `$spec`.
macro_rules! with_pv {
    ($spec:expr, $s:ident => $body:expr) => {
        match $spec {
            StructureSpec::Ratio => {
                let $s = RatioStructure;
                $body
            }
            StructureSpec::TwoCost(p) => {
                let $s = TwoCostStructure::new(p.clone());
                $body
            }
            StructureSpec::Disp(n) => {
                let $s = DisplacementStructure::new(*n);
                $body
            }
            other => Err(Error::Usage(format!("{other} is not a structure for finite words"))),
        }
    };
}

pub fn dispatch(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let mut warnings = Vec::new();
    let mut report = match &cli.command {
        Command::Eval { formula, word, assign } => {
            let ff = read_formula(formula)?;
            let spec = pick_structure(g.structure.as_ref(), ff.structure.as_ref(), &mut warnings)?;
            with_pv!(&spec, s => eval(&s, g, &ff, word, assign.as_deref(), &mut warnings))
        }
        Command::Compile { formula, dot, trace } => {
            let ff = read_formula(formula)?;
            let spec = pick_structure(g.structure.as_ref(), ff.structure.as_ref(), &mut warnings)?;
            with_pv!(&spec, s => compile(&s, &spec, g, &ff, dot.as_deref(), *trace, &mut warnings))
        }
        Command::Behavior { automaton, word } => {
            let input = read_automaton(automaton)?;
            let spec = pick_structure(g.structure.as_ref(), input.structure.as_ref(), &mut warnings)?;
            with_pv!(&spec, s => behavior(&s, &input, word))
        }
        Command::ToFormula { automaton } => {
            let input = read_automaton(automaton)?;
            let spec = pick_structure(g.structure.as_ref(), input.structure.as_ref(), &mut warnings)?;
            with_pv!(&spec, s => to_formula(&s, &spec, &input))
        }
        Command::Check { formula } => {
            let ff = read_formula(formula)?;
            let spec = pick_structure(g.structure.as_ref(), ff.structure.as_ref(), &mut warnings)?;
            with_pv!(&spec, s => check(&s, &ff))
        }
        Command::EmptyGeq { automaton, nu } => {
            let input = read_automaton(automaton)?;
            let default = StructureSpec::Ratio;
            let spec = pick_structure(g.structure.as_ref(), input.structure.as_ref().or(Some(&default)), &mut warnings)?;
            if spec != StructureSpec::Ratio {
                return Err(Error::Usage(format!("empty-geq needs the ratio structure, not {spec}")));
            }
            let a = input.raw.with_elements(&RatioStructure)?;
            Ok(decision_report(&a, ratio_emptiness_geq(&a, &threshold(nu)?)?))
        }
        Command::EmptyLeq { automaton, nu } => {
            let input = read_automaton(automaton)?;
            let spec = pick_structure(g.structure.as_ref(), input.structure.as_ref(), &mut warnings)?;
            let StructureSpec::TwoCost(p) = spec else {
                return Err(Error::Usage(format!("empty-leq needs a twocost(p) structure, not {spec}")));
            };
            let s = TwoCostStructure::new(p);
            let a = input.raw.with_elements(&s)?;
            Ok(decision_report(&a, twocost_emptiness_leq(&a, &s, &threshold(nu)?)?))
        }
        Command::OmegaEval { automaton, word } => {
            let input = read_automaton(automaton)?;
            let spec = pick_structure(g.structure.as_ref(), input.structure.as_ref(), &mut warnings)?;
            omega_eval(&spec, g, &input, word)
        }
        Command::Oracle { formula } => {
            let ff = read_formula(formula)?;
            let spec = pick_structure(g.structure.as_ref(), ff.structure.as_ref(), &mut warnings)?;
            with_pv!(&spec, s => oracle(&s, g, &ff, &mut warnings))
        }
        Command::ValidateStructure { samples } => {
            let spec = g
                .structure
                .clone()
                .ok_or_else(|| Error::Usage("validate-structure needs --structure".into()))?;
            Ok(validate(&spec, g, *samples))
        }
    }?;
    warnings.append(&mut report.warnings);
    report.warnings = warnings;
    Ok(report)
}

fn ok(text: String, json: Value) -> Report {
    Report { text, json, code: 0, warnings: Vec::new() }
}

fn threshold(text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| Error::Usage(format!("bad threshold `{text}`")))
}

fn multiset_json<M: Ord + Clone + Display>(r: &FiniteMultiset<M>) -> Value {
    Value::Array(r.iter().map(|(m, c)| json!([m.to_string(), c.to_string()])).collect())
}

fn formula_alphabet<S: PvStructure>(
    s: &S,
    g: &Global,
    ff: &FormulaFile,
    warnings: &mut Vec<String>,
) -> Result<(Formula<S::Elem>, Alphabet)> {
    let f = parse_with(&ff.body, s, &ff.signature())?;
    let alphabet = pick_alphabet(g.alphabet.as_deref(), ff, f.letters(), warnings)?;
    Ok((f, alphabet))
}

fn eval<S: PvStructure>(
    s: &S,
    g: &Global,
    ff: &FormulaFile,
    word: &str,
    assign: Option<&str>,
    warnings: &mut Vec<String>,
) -> Result<Report> {
    let (f, alphabet) = formula_alphabet(s, g, ff, warnings)?;
    let mut aw = AssignedWord::new(alphabet.parse_word(word, &ff.aliases)?);
    if let Some(text) = assign {
        for (v, val) in AssignedWord::parse_assignment(text)? {
            aw = aw.with(v, val);
        }
    }
    let r = Evaluator::new(s).with_budget(g.budget()).eval_multiset(&f, &alphabet, &aw)?;
    let value = s.phi(&r);
    Ok(ok(
        format!("multiset: {r}\nvalue: {value}"),
        json!({"multiset": multiset_json(&r), "value": value.to_string()}),
    ))
}

fn compile<S: PvStructure>(
    s: &S,
    spec: &StructureSpec,
    g: &Global,
    ff: &FormulaFile,
    dot: Option<&Path>,
    trace: bool,
    warnings: &mut Vec<String>,
) -> Result<Report> {
    let (f, alphabet) = formula_alphabet(s, g, ff, warnings)?;
    let compiled = Compiler::new(s).with_budget(g.budget()).tracing(trace).compile(&f, &alphabet)?;
    let mut file = to_file(&compiled.automaton);
    file.structure = Some(spec.to_string());
    if let Some(path) = dot {
        std::fs::write(path, to_dot(&compiled.automaton, |w| w.to_string()))
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut report = ok(render(&file), serde_json::to_value(&file).expect("automaton files serialize"));
    report.warnings.extend(compiled.trace.iter().map(|t| format!("trace: {t}")));
    Ok(report)
}

fn behavior<S: PvStructure>(s: &S, input: &AutomatonInput, word: &str) -> Result<Report> {
    let a = input.raw.with_elements(s)?;
    let w = a.alphabet().parse_word(word, &BTreeMap::new())?;
    let r = multiset_behavior(&a, &w, s)?;
    let value = s.phi(&r);
    Ok(ok(
        format!("multiset: {r}\nvalue: {value}"),
        json!({"multiset": multiset_json(&r), "value": value.to_string()}),
    ))
}

fn to_formula<S: PvStructure>(s: &S, spec: &StructureSpec, input: &AutomatonInput) -> Result<Report> {
    let a = input.raw.with_elements(s)?;
    let f = automaton_to_formula(&a);
    let letters = a.alphabet().names().join(" ");
    Ok(ok(
        format!("# structure: {spec}\n# alphabet: {letters}\n{f}"),
        json!({"structure": spec.to_string(), "alphabet": a.alphabet().names(), "formula": f.to_string()}),
    ))
}

fn check<S: PvStructure>(s: &S, ff: &FormulaFile) -> Result<Report> {
    let f = parse_with(&ff.body, s, &ff.signature())?;
    let c = classify(&f);
    let mut text = format!(
        "class: {}\nforall-restricted: {}\nand-restricted: {}\nrestricted: {}",
        c.class,
        c.forall_restricted,
        c.and_restricted,
        c.is_restricted()
    );
    for v in &c.violations {
        text.push_str(&format!("\nviolation: {v}"));
    }
    for tag in &c.tags {
        text.push_str(&format!("\n{}{} : {}", "  ".repeat(tag.depth), tag.class, tag.text));
    }
    let json = json!({
        "class": c.class.to_string(),
        "forall_restricted": c.forall_restricted,
        "and_restricted": c.and_restricted,
        "restricted": c.is_restricted(),
        "violations": c.violations,
        "free": f.free_vars().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, code: if c.is_restricted() { 0 } else { 1 }, warnings: Vec::new() })
}

fn decision_report(a: &Automaton<Weight>, d: Decision<ExtRational>) -> Report {
    match &d {
        Decision::Yes { witness, value } => {
            let w = a.alphabet().format_word(witness);
            ok(
                format!("{d}\nwitness: {w}"),
                json!({"answer": "yes", "witness": w, "value": value.to_string()}),
            )
        }
        Decision::No => Report { text: d.to_string(), json: json!({"answer": "no"}), code: 1, warnings: Vec::new() },
    }
}

fn run_text<W: Clone>(a: &Automaton<W>, run: &OmegaRun) -> String {
    let states = |ids: &[usize]| {
        ids.iter().map(|&i| a.transitions()[i].from.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut text = states(&run.stem);
    if !text.is_empty() {
        text.push(' ');
    }
    format!("{text}({})^w", states(&run.cycle))
}

fn omega_eval(spec: &StructureSpec, g: &Global, input: &AutomatonInput, word: &str) -> Result<Report> {
    let lasso = |alphabet: &Alphabet| LassoWord::parse(word, alphabet, &BTreeMap::new());
    let (value, run_desc) = match spec {
        StructureSpec::OmegaRatio => {
            let a = input.raw.with_muller(&OmegaRatioStructure)?;
            let sup = ratio_sup(&a, &lasso(a.alphabet())?, &g.budget())?;
            (sup.value.to_string(), sup.run.map(|r| run_text(a.automaton(), &r)))
        }
        StructureSpec::Energy(emax) => {
            let s = EnergyStructure::new(emax.clone())?;
            let a = input.raw.with_muller(&s)?;
            let run = energy_run(&a, &s, &lasso(a.alphabet())?, &g.budget())?;
            (run.is_some().to_string(), run.map(|r| run_text(a.automaton(), &r)))
        }
        other => return Err(Error::Usage(format!("{other} is not a structure for infinite words"))),
    };
    let mut text = format!("value: {value}");
    if let Some(r) = &run_desc {
        text.push_str(&format!("\nrun: {r}"));
    }
    Ok(ok(text, json!({"value": value, "run": run_desc})))
}

/// Base words of length `1..=max` in length-lexicographic order.
fn all_words(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |a| [w.as_slice(), &[a]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn oracle<S>(s: &S, g: &Global, ff: &FormulaFile, warnings: &mut Vec<String>) -> Result<Report>
where
    S: PvStructure + Sync,
    S::Elem: Send + Sync,
{
    let (f, alphabet) = formula_alphabet(s, g, ff, warnings)?;
    let max = g.max_len.unwrap_or(5);
    let budget = g.budget();
    let compiled = Compiler::new(s).with_budget(budget).compile(&f, &alphabet)?;
    let ext = &compiled.ext;
    let words: Vec<Vec<usize>> = all_words(alphabet.len(), max)
        .iter()
        .flat_map(|w| ext.assignments(w))
        .collect();
    let evaluator = Evaluator::new(s).with_budget(budget);
    let results: Vec<Result<Option<Vec<usize>>>> = words
        .par_iter()
        .map(|w| {
            let expect = evaluator.eval_encoded(&f, ext, w)?;
            let got = multiset_behavior(&compiled.automaton, w, s)?;
            Ok((expect != got).then(|| w.clone()))
        })
        .collect();
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(w) = r? {
            mismatches.push(ext.alphabet().format_word(&w));
        }
    }
    let n = words.len();
    let states = compiled.automaton.num_states();
    let json = json!({"words": n, "states": states, "mismatches": mismatches});
    if mismatches.is_empty() {
        Ok(ok(format!("equal on {n} words ({states} states)"), json))
    } else {
        let text = format!("{} mismatches out of {n} words; first: {}", mismatches.len(), mismatches[0]);
        Ok(Report { text, json, code: 1, warnings: Vec::new() })
    }
}

fn random_rational(rng: &mut ChaCha8Rng, nonnegative: bool) -> Rational {
    let lo = if nonnegative { 0 } else { -6 };
    rat(rng.gen_range(lo..=6), rng.gen_range(1..=4))
}

fn random_weight(rng: &mut ChaCha8Rng, arity: usize, cost_last: bool) -> Weight {
    Weight((0..arity).map(|i| random_rational(rng, cost_last && i + 1 == arity)).collect())
}

fn violations_report(spec: &StructureSpec, n: usize, v: Vec<Violation>) -> Report {
    let lines: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    let json = json!({"structure": spec.to_string(), "samples": n, "violations": lines});
    if lines.is_empty() {
        ok(format!("{spec}: all laws hold on {n} samples"), json)
    } else {
        Report { text: format!("{spec}: {} violations\n{}", lines.len(), lines.join("\n")), json, code: 1, warnings: Vec::new() }
    }
}

fn validate(spec: &StructureSpec, g: &Global, n: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let pad = g.max_len.unwrap_or(4);
    let v = match spec {
        StructureSpec::Ratio => {
            let xs: Vec<Weight> = (0..n).map(|_| random_weight(&mut rng, 2, true)).collect();
            validate_structure(&RatioStructure, &xs, pad)
        }
        StructureSpec::TwoCost(p) => {
            let xs: Vec<Weight> = (0..n).map(|_| random_weight(&mut rng, 2, false)).collect();
            validate_structure(&TwoCostStructure::new(p.clone()), &xs, pad)
        }
        StructureSpec::Disp(d) => {
            let xs: Vec<Weight> = (0..n).map(|_| random_weight(&mut rng, *d, false)).collect();
            validate_structure(&DisplacementStructure::new(*d), &xs, pad)
        }
        StructureSpec::OmegaRatio => {
            let mut xs: Vec<RatioPair> = (0..n)
                .map(|_| RatioPair::new(random_rational(&mut rng, false), random_rational(&mut rng, true)))
                .collect();
            xs.push(RatioPair { reward: ExtRational::PosInf, cost: rat(1, 1) });
            validate_omega_structure(&OmegaRatioStructure, &xs)
        }
        StructureSpec::Energy(emax) => {
            let s = EnergyStructure::new(emax.clone()).expect("parsed bounds are positive");
            let xs: Vec<IntVector> = (0..n)
                .map(|_| IntVector(emax.iter().map(|&e| rng.gen_range(-e..=e)).collect()))
                .collect();
            validate_omega_structure(&s, &xs)
        }
    };
    violations_report(spec, n, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_enumeration() {
        let w = all_words(2, 3);
        assert_eq!(w.len(), 2 + 4 + 8);
        assert_eq!(w[2], vec![0, 0]);
    }
}
