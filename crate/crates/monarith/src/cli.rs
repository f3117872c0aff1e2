//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification suite finds failures,
//! 2 on usage, parse or evaluation errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::check::{self, eval_arith, eval_witness, Assignment, Bound, NatAssignment};
use crate::coding::{
    decode_tuple, encode_tuple, submonoid_member, tuple_to_monomial, word_code, SeqCode,
};
use crate::error::{Error, Result};
use crate::formula::{classify, parse, prenex};
use crate::gadgets::{self, Gens};
use crate::interp::{self, level_gain, translate};
use crate::monoid::{MonoidKind, MonoidModel};
use crate::word::{words_up_to, Alphabet, Word};

pub const SUITES: [&str; 7] = [
    "mult", "trans", "tuple", "concat", "b-pairs", "iso", "orbit",
];

const DEFAULT_MONOID: &str = "free:x1,x2";
const DEFAULT_TRACE: &str = "trace:v1,v2,v3;edges=v1-v3";
const DEFAULT_BOUND: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Witness,
}

/// Settings shared by all subcommands. Read from `--config` (TOML) and
/// overridden by flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    pub monoid: Option<String>,
    pub bound: Option<usize>,
    pub mode: Option<Mode>,
    pub format: Option<Format>,
}

#[derive(Parser, Debug)]
#[command(
    name = "monarith",
    version,
    about = "Gadgets, bounded model checking and interpretations for monoids"
)]
struct Cli {
    /// `free:<g,...>`, `trace:<g,...>;edges=<a-b,...>`, `bs:<k>,<m>`, or `nat`.
    #[arg(long, global = true)]
    monoid: Option<String>,
    /// Length bound for quantified variables.
    #[arg(long, global = true)]
    bound: Option<usize>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML file with `monoid`, `bound`, `mode`, `format`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a formula.
    Eval {
        formula: String,
        /// Free variable values, `name=word`.
        #[arg(long = "let")]
        lets: Vec<String>,
        /// Leading existential witnesses, `name=word` (witness mode).
        #[arg(long)]
        witness: Vec<String>,
    },
    /// Build a catalogue gadget.
    Gadget {
        name: String,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 2)]
        max: usize,
    },
    /// Translate a formula along a named interpretation.
    Translate {
        interpretation: String,
        formula: String,
    },
    /// Decide submonoid membership.
    Member { word: String, gens: Vec<String> },
    /// Hierarchy level of the prenex form.
    Classify { formula: String },
    /// Code of a word or of a tuple `(a,b,...)`.
    Code { input: String },
    /// Tuple (and monomial) of a code.
    Decode { code: String },
}

struct Ctx {
    monoid: Option<String>,
    bound: usize,
    mode: Mode,
    format: Format,
}

impl Ctx {
    fn machine(&self) -> bool {
        self.format == Format::Machine
    }

    fn model_or(&self, default: &str) -> Result<MonoidModel> {
        MonoidModel::parse_spec(self.monoid.as_deref().unwrap_or(default))
    }

    fn gens(&self) -> Result<Gens> {
        let model = self.model_or(DEFAULT_MONOID)?;
        let a = model.alphabet();
        if a.len() < 2 {
            return Err(Error::Param("gadgets need at least two generators".into()));
        }
        Gens::new(a.clone(), &a.names()[0], &a.names()[1])
    }

    fn show(&self, w: &Word) -> String {
        if self.machine() {
            w.to_string()
        } else {
            w.power_notation()
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code and the text to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli) {
        Ok(r) => r,
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn dispatch(cli: Cli) -> Result<(i32, String)> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Param(format!("{}: {e}", p.display())))?;
            toml::from_str::<WorkbenchConfig>(&text)
                .map_err(|e| Error::Param(format!("{}: {e}", p.display())))?
        }
        None => WorkbenchConfig::default(),
    };
    let ctx = Ctx {
        monoid: cli.monoid.or(file.monoid),
        bound: cli.bound.or(file.bound).unwrap_or(DEFAULT_BOUND),
        mode: cli.mode.or(file.mode).unwrap_or(Mode::Exhaustive),
        format: cli.format.or(file.format).unwrap_or(Format::Text),
    };
    match cli.cmd {
        Cmd::Eval {
            formula,
            lets,
            witness,
        } => cmd_eval(&ctx, &formula, &lets, &witness),
        Cmd::Gadget { name, params } => cmd_gadget(&ctx, &name, &params),
        Cmd::Verify { suite, max } => cmd_verify(&ctx, &suite, max),
        Cmd::Translate {
            interpretation,
            formula,
        } => cmd_translate(&ctx, &interpretation, &formula),
        Cmd::Member { word, gens } => cmd_member(&ctx, &word, &gens),
        Cmd::Classify { formula } => {
            let level = classify(&prenex(&parse(&formula)?));
            Ok((
                0,
                if ctx.machine() {
                    format!("level={level}\n")
                } else {
                    format!("{level}\n")
                },
            ))
        }
        Cmd::Code { input } => cmd_code(&ctx, &input),
        Cmd::Decode { code } => cmd_decode(&ctx, &code),
    }
}

fn split_binding(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::Param(format!("expected `name=value`, got `{s}`")))
}

fn cmd_eval(ctx: &Ctx, text: &str, lets: &[String], witness: &[String]) -> Result<(i32, String)> {
    let f = parse(text)?;
    let start = Instant::now();
    if ctx.monoid.as_deref() == Some("nat") {
        if !witness.is_empty() {
            return Err(Error::Param(
                "witness mode applies to monoid formulas".into(),
            ));
        }
        let mut a = NatAssignment::new();
        for l in lets {
            let (k, v) = split_binding(l)?;
            let n = v
                .parse()
                .map_err(|_| Error::Param(format!("`{v}` is not a natural number")))?;
            a.insert(k.to_string(), n);
        }
        let r = eval_arith(&f, &a, ctx.bound as u64)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let out = if ctx.machine() {
            format!("result={r} elapsed_ms={ms:.3}\n")
        } else {
            format!("{r}\nelapsed: {ms:.3} ms\n")
        };
        return Ok((0, out));
    }
    let model = ctx.model_or(DEFAULT_MONOID)?;
    let words = |items: &[String]| -> Result<Assignment> {
        items
            .iter()
            .map(|l| {
                let (k, v) = split_binding(l)?;
                Ok((k.to_string(), model.word(v)?))
            })
            .collect()
    };
    let assign = words(lets)?;
    let wit = words(witness)?;
    if ctx.mode == Mode::Witness && wit.is_empty() {
        return Err(Error::Param(
            "witness mode needs at least one --witness".into(),
        ));
    }
    let (r, nodes) = if wit.is_empty() {
        let (r, stats) = check::eval_with_stats(&model, &f, &assign, ctx.bound)?;
        (r, Some(stats.nodes))
    } else {
        (eval_witness(&model, &f, &assign, &wit, ctx.bound)?, None)
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let nodes = nodes.map_or("-".to_string(), |n| n.to_string());
    let out = if ctx.machine() {
        format!("result={r} nodes={nodes} elapsed_ms={ms:.3}\n")
    } else {
        format!("{r}\nnodes: {nodes}\nelapsed: {ms:.3} ms\n")
    };
    Ok((0, out))
}

fn cmd_gadget(ctx: &Ctx, name: &str, params: &[String]) -> Result<(i32, String)> {
    let g = ctx.gens()?;
    let inst = gadgets::instance(&g, name, params)?;
    let level = inst.level().map_or("-".to_string(), |l| l.to_string());
    let word = inst.word.as_ref().map_or("-".to_string(), |w| ctx.show(w));
    let formula = inst
        .formula
        .as_ref()
        .map_or("-".to_string(), |f| f.to_string());
    let mut out = String::new();
    if ctx.machine() {
        let _ = writeln!(
            out,
            "gadget={name} word={word} witness_bound={} level={level} vars={} formula={formula}",
            inst.witness_bound,
            inst.vars.join(",")
        );
    } else {
        let _ = writeln!(out, "gadget: {name}");
        let _ = writeln!(out, "word: {word}");
        let _ = writeln!(out, "witness bound: {}", inst.witness_bound);
        let _ = writeln!(out, "level: {level}");
        let _ = writeln!(out, "variables: {}", inst.vars.join(", "));
        let _ = writeln!(out, "formula: {formula}");
    }
    Ok((0, out))
}

/// All permutations of `0..n`, in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u8);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn cmd_verify(ctx: &Ctx, suite: &str, max: usize) -> Result<(i32, String)> {
    let mut failures: Vec<String> = Vec::new();
    let mut instances = 0usize;
    let mut note = |ok: bool, what: String| {
        instances += 1;
        if !ok {
            failures.push(what);
        }
    };
    match suite {
        "mult" => {
            let g = ctx.gens()?;
            let f = gadgets::mult_gadget(&g);
            for n in 0..=max {
                for m in 0..=max {
                    let w = gadgets::mult_gadget_word(&g, n, m);
                    let given =
                        Assignment::from([("x".to_string(), g.p1(n)), ("y".to_string(), g.p1(m))]);
                    let sols = check::solutions_given(&g.model(), &f, &given, &["w"], w.len())?;
                    note(sols == vec![vec![w]], format!("mult({n}, {m})"));
                }
            }
        }
        "trans" => {
            let g = ctx.gens()?;
            let bound = Bound::new(gadgets::trans_bound(&g, max)).with_free(max);
            let expected: Vec<Vec<Word>> = (0..=max).map(|k| vec![g.p2(k), g.p1(k)]).collect();
            let report = check::check_definition(
                &g.model(),
                &gadgets::trans(&g),
                &["x", "y"],
                &expected,
                bound,
            )?;
            for t in &report.false_positives {
                note(
                    false,
                    format!("trans: unexpected {}", check::format_tuple(t)),
                );
            }
            for t in &expected {
                let ok = !report.false_negatives.contains(t);
                note(ok, format!("trans: missing {}", check::format_tuple(t)));
            }
        }
        "tuple" => {
            let g = ctx.gens()?;
            for t in small_tuples(max) {
                let w = gadgets::tuple_word(&g, &t)?;
                let inst = gadgets::instance(&g, "length", &[fmt_tuple(&t)])?;
                let tup = gadgets::instance(&g, "tuple", &[fmt_tuple(&t)])?;
                let model = g.model();
                let given = Assignment::from([("x".to_string(), w.clone())]);
                let ok_w = check::eval(
                    &model,
                    tup.formula.as_ref().expect("formula"),
                    &given,
                    tup.bound.clone(),
                )?;
                let f = inst.formula.expect("formula");
                let len = check::solutions_given(
                    &model,
                    &f,
                    &given,
                    &["y"],
                    inst.bound.with_free(w.len()),
                )?;
                note(
                    ok_w && len == vec![vec![g.p1(t.len())]],
                    format!("tuple {}", fmt_tuple(&t)),
                );
            }
        }
        "concat" => {
            let g = ctx.gens()?;
            let f = gadgets::concat(&g);
            let singles: Vec<Vec<usize>> = (0..=max).map(|a| vec![a]).collect();
            for t1 in &singles {
                for t2 in &singles {
                    let joined: Vec<usize> = t1.iter().chain(t2).copied().collect();
                    let w3 = gadgets::tuple_word(&g, &joined)?;
                    let given = Assignment::from([
                        ("x".to_string(), gadgets::tuple_word(&g, t1)?),
                        ("y".to_string(), gadgets::tuple_word(&g, t2)?),
                    ]);
                    let sols = check::solutions_given(&g.model(), &f, &given, &["z"], w3.len())?;
                    note(
                        sols == vec![vec![w3]],
                        format!("concat {} {}", fmt_tuple(t1), fmt_tuple(t2)),
                    );
                }
            }
        }
        "b-pairs" => {
            let g = ctx.gens()?;
            let top = max.max(1);
            let b = gadgets::a_word(&g, top)?.len();
            let mut expected = Vec::new();
            for k in 1..=top {
                expected.push(vec![gadgets::a_word(&g, k)?, g.p1(k)]);
            }
            let sols = check::solutions(&g.model(), &gadgets::b_pairs(&g), &["a", "y"], b)?;
            for t in &expected {
                note(
                    sols.contains(t),
                    format!("b-pairs: missing {}", check::format_tuple(t)),
                );
            }
            for t in sols.iter().filter(|t| !expected.contains(t)) {
                note(
                    false,
                    format!("b-pairs: unexpected {}", check::format_tuple(t)),
                );
            }
        }
        "iso" => {
            let model = ctx.model_or("free:x1,x2,x3")?;
            let a = model.alphabet();
            let g = Gens::new(
                a.clone(),
                &a.names()[0],
                a.names().get(1).map_or("", String::as_str),
            )?;
            let graph = interp::theta1_graph(&g);
            for letters in words_up_to(a.len(), max)
                .into_iter()
                .filter(|w| !w.is_empty())
            {
                let m = Word::from_letters(a, letters)?;
                let w = gadgets::tuple_word(&g, &monomial_indices(&m))?;
                let ok = graph(&interp::Elem::Word(m.clone()), &[interp::Elem::Word(w)])?;
                note(ok, format!("iso {m}"));
            }
        }
        "orbit" => {
            let model = ctx.model_or("free:x1,x2,x3")?;
            let a = model.alphabet();
            let perms = permutations(a.len());
            let g = Gens::new(
                a.clone(),
                &a.names()[0],
                a.names().get(1).map_or("", String::as_str),
            )?;
            for letters in words_up_to(a.len(), max) {
                let w = Word::from_letters(a, letters.clone())?;
                let inst = gadgets::instance(&g, "orbit", &[w.to_string()])?;
                let sols = check::solutions(
                    &model,
                    inst.formula.as_ref().expect("formula"),
                    &["x"],
                    inst.bound,
                )?;
                let want: BTreeSet<Vec<u8>> = perms
                    .iter()
                    .map(|p| letters.iter().map(|&l| p[l as usize]).collect())
                    .collect();
                let got: BTreeSet<Vec<u8>> = sols.iter().map(|t| t[0].letters().to_vec()).collect();
                note(got == want, format!("orbit {w}"));
            }
        }
        other => {
            return Err(Error::Param(format!(
                "unknown suite `{other}`; known: {}",
                SUITES.join(", ")
            )));
        }
    }
    let mut out = String::new();
    if ctx.machine() {
        let _ = writeln!(
            out,
            "suite={suite} instances={instances} failures={}",
            failures.len()
        );
        for f in &failures {
            let _ = writeln!(out, "failure={f}");
        }
    } else if failures.is_empty() {
        let _ = writeln!(out, "OK, {instances} instances");
    } else {
        for f in &failures {
            let _ = writeln!(out, "FAIL {f}");
        }
        let _ = writeln!(out, "{} of {instances} instances failed", failures.len());
    }
    Ok((if failures.is_empty() { 0 } else { 1 }, out))
}

fn monomial_indices(m: &Word) -> Vec<usize> {
    m.letters().iter().map(|&l| l as usize + 1).collect()
}

/// Tuples of length 1 or 2 with entries up to `max`.
fn small_tuples(max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..=max).map(|a| vec![a]).collect();
    for a in 0..=max {
        for b in 0..=max {
            out.push(vec![a, b]);
        }
    }
    out
}

fn fmt_tuple<T: ToString>(t: &[T]) -> String {
    format!(
        "({})",
        t.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn cmd_translate(ctx: &Ctx, name: &str, text: &str) -> Result<(i32, String)> {
    let default = if name == "nat-in-trace" {
        DEFAULT_TRACE
    } else {
        DEFAULT_MONOID
    };
    let model = ctx.model_or(default)?;
    let i = interp::bundle(name, &model)?;
    let psi = parse(text)?;
    let out_f = translate(&psi, &i)?;
    let before = classify(&prenex(&psi));
    let after = classify(&prenex(&out_f));
    let gain = level_gain(&psi, &i)?;
    let out = if ctx.machine() {
        format!("source_level={before} target_level={after} gain={gain} formula={out_f}\n")
    } else {
        format!(
            "formula: {out_f}\nlevel before: {before}\nlevel after: {after}\nlevel gain: {gain}\n"
        )
    };
    Ok((0, out))
}

/// The alphabet for word arguments. Without `--monoid`, generators named
/// `x1 .. xk` give the standard alphabet; otherwise every character is a
/// generator and dots are optional.
fn word_reader(ctx: &Ctx, inputs: &[&str]) -> Result<(Arc<Alphabet>, bool)> {
    if let Some(spec) = &ctx.monoid {
        let model = MonoidModel::parse_spec(spec)?;
        if !matches!(model.kind(), MonoidKind::Free) {
            return Err(Error::WrongKind(
                "membership and codes use free monoids".into(),
            ));
        }
        return Ok((model.alphabet().clone(), false));
    }
    let tokens: Vec<&str> = inputs
        .iter()
        .flat_map(|s| s.split('.'))
        .map(|t| t.split('^').next().unwrap_or("").trim())
        .filter(|t| !t.is_empty() && *t != "1")
        .collect();
    let index = |t: &str| {
        t.strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&k| k >= 1)
    };
    if tokens.iter().all(|t| index(t).is_some()) {
        let n = tokens.iter().filter_map(|t| index(t)).max().unwrap_or(1);
        return Ok((Alphabet::standard(n), false));
    }
    let chars: BTreeSet<char> = inputs
        .iter()
        .flat_map(|s| s.chars())
        .filter(|c| c.is_alphabetic())
        .collect();
    let names: Vec<String> = chars.into_iter().map(String::from).collect();
    Ok((Alphabet::new(&names)?, true))
}

fn read_word(a: &Arc<Alphabet>, chars: bool, s: &str) -> Result<Word> {
    if chars {
        let spaced: Vec<String> = s.chars().filter(|c| *c != '.').map(String::from).collect();
        Word::parse(a, &spaced.join("."))
    } else {
        Word::parse(a, s)
    }
}

fn cmd_member(ctx: &Ctx, g: &str, gens: &[String]) -> Result<(i32, String)> {
    let mut inputs = vec![g];
    inputs.extend(gens.iter().map(String::as_str));
    let (a, chars) = word_reader(ctx, &inputs)?;
    let show = |w: &Word| {
        if chars {
            w.letters().iter().map(|&l| a.name(l)).collect::<String>()
        } else {
            ctx.show(w)
        }
    };
    let target = read_word(&a, chars, g)?;
    let gs = gens
        .iter()
        .map(|s| read_word(&a, chars, s))
        .collect::<Result<Vec<_>>>()?;
    let r = submonoid_member(&target, &gs)?;
    let mut out = String::new();
    for k in &r.dropped {
        let _ = writeln!(out, "warning: ignoring empty generator #{}", k + 1);
    }
    match (&r.witness, ctx.machine()) {
        (Some(w), true) => {
            let idx: Vec<String> = w.iter().map(|k| (k + 1).to_string()).collect();
            let _ = writeln!(out, "member=true witness={}", idx.join(","));
        }
        (Some(w), false) => {
            let parts: String = w.iter().map(|&k| format!("({})", show(&gs[k]))).collect();
            let _ = writeln!(
                out,
                "yes, {}",
                if parts.is_empty() {
                    "()".to_string()
                } else {
                    parts
                }
            );
        }
        (None, true) => {
            let _ = writeln!(out, "member=false");
        }
        (None, false) => {
            let _ = writeln!(out, "no");
        }
    }
    Ok((0, out))
}

fn cmd_code(ctx: &Ctx, input: &str) -> Result<(i32, String)> {
    let s = input.trim();
    let code = if s.starts_with('(') {
        let inner = s.trim_start_matches('(').trim_end_matches(')');
        let t = inner
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| {
                x.parse::<u128>()
                    .map_err(|_| Error::Param(format!("`{x}` is not a natural number")))
            })
            .collect::<Result<Vec<_>>>()?;
        encode_tuple(&t)?
    } else {
        let (a, chars) = word_reader(ctx, &[s])?;
        word_code(&read_word(&a, chars, s)?)?
    };
    Ok((
        0,
        if ctx.machine() {
            format!("code={code}\n")
        } else {
            format!("{code}\n")
        },
    ))
}

fn cmd_decode(ctx: &Ctx, input: &str) -> Result<(i32, String)> {
    let c: u128 = input
        .trim()
        .parse()
        .map_err(|_| Error::Param(format!("`{input}` is not a code")))?;
    let t = decode_tuple(SeqCode(c))?;
    let alphabet = match &ctx.monoid {
        Some(spec) => Some(MonoidModel::parse_spec(spec)?.alphabet().clone()),
        None => t
            .iter()
            .copied()
            .max()
            .filter(|&m| m >= 1 && m <= 255)
            .map(|m| Alphabet::standard(m as usize)),
    };
    let monomial = alphabet.and_then(|a| tuple_to_monomial(&t, &a).ok());
    let tuple = fmt_tuple(&t);
    let out = match (monomial, ctx.machine()) {
        (Some(m), true) => format!("tuple={tuple} word={m}\n"),
        (None, true) => format!("tuple={tuple}\n"),
        (Some(m), false) => format!("{tuple}\n{}\n", ctx.show(&m)),
        (None, false) => format!("{tuple}\n"),
    };
    Ok((0, out))
}
