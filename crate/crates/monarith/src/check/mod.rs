//! Bounded first-order model checking over monoids and over the naturals.
//!
//! Quantifiers range over normal forms of length at most the bound, while
//! equations are decided exactly on the full products. In free monoids the
//! search is guided by candidate sets read off the equations of the body,
//! so gadget formulas with long witnesses stay tractable.

mod arith;
mod compile;
mod eval;
mod guard;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::stem;
use crate::formula::{Formula, Signature};
use crate::monoid::MonoidModel;
use crate::word::{shortlex, Word};

pub use arith::{eval_arith, solutions_arith, NatAssignment};

use compile::Compiler;
use eval::{Engine, Tri, Val};

/// Variable assignment for monoid formulas.
pub type Assignment = BTreeMap<String, Word>;

/// Length bounds for quantified variables.
///
/// A variable's bound is looked up by exact name, then by the name with a
/// trailing `_k` suffix removed, then falls back to `default`. Solution
/// variables of [`solutions`] use `free` when it is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub default: usize,
    pub free: Option<usize>,
    pub overrides: BTreeMap<String, usize>,
}

impl Bound {
    pub fn new(default: usize) -> Bound {
        Bound {
            default,
            free: None,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with(mut self, var: &str, bound: usize) -> Bound {
        self.overrides.insert(var.to_string(), bound);
        self
    }

    pub fn with_free(mut self, bound: usize) -> Bound {
        self.free = Some(bound);
        self
    }

    pub fn for_var(&self, name: &str) -> usize {
        self.overrides
            .get(name)
            .or_else(|| self.overrides.get(stem(name)))
            .copied()
            .unwrap_or(self.default)
    }

    fn for_solution(&self, name: &str) -> usize {
        self.overrides
            .get(name)
            .copied()
            .or(self.free)
            .unwrap_or_else(|| self.for_var(name))
    }
}

impl From<usize> for Bound {
    fn from(b: usize) -> Bound {
        Bound::new(b)
    }
}

/// Search effort of one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Number of quantifier bodies evaluated.
    pub nodes: u64,
}

fn prepare(model: &MonoidModel, f: &Formula) -> Result<()> {
    f.check_sort(&Signature::Monoid(model.alphabet().clone()))
}

fn to_letters(model: &MonoidModel, w: &Word) -> Result<Vec<u8>> {
    if w.alphabet().names() != model.alphabet().names() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(model.normalize(w.letters()))
}

fn to_word(model: &MonoidModel, letters: Vec<u8>) -> Word {
    Word::from_letters(model.alphabet(), letters).expect("letters come from the model's alphabet")
}

/// Truth of `f` under `assignment`, with quantifiers bounded by `bound`.
pub fn eval(
    model: &MonoidModel,
    f: &Formula,
    assignment: &Assignment,
    bound: impl Into<Bound>,
) -> Result<bool> {
    eval_with_stats(model, f, assignment, bound).map(|(b, _)| b)
}

pub fn eval_with_stats(
    model: &MonoidModel,
    f: &Formula,
    assignment: &Assignment,
    bound: impl Into<Bound>,
) -> Result<(bool, Stats)> {
    prepare(model, f)?;
    let bound = bound.into();
    let lookup = |v: &str| bound.for_var(v);
    let mut c = Compiler::new(model, &lookup);
    let mut scope = BTreeMap::new();
    let mut values = Vec::new();
    for v in f.free_vars() {
        let w = assignment
            .get(&v)
            .ok_or_else(|| Error::Unbound(v.clone()))?;
        let slot = c.add_slot(w.len());
        scope.insert(v, slot);
        values.push((slot, to_letters(model, w)?));
    }
    let root = c.compile(f, &scope)?;
    let prog = c.finish(root);
    let mut eng = Engine::new(&prog, model);
    for (slot, w) in values {
        eng.env[slot] = Some(Val::Known(w));
    }
    let r = eng.eval(prog.root);
    debug_assert_ne!(r, Tri::U, "concrete evaluation is always decided");
    Ok((r == Tri::T, Stats { nodes: eng.nodes }))
}

/// Witness mode: the leading existentials named in `witnesses` are
/// instantiated with the given words instead of being searched.
pub fn eval_witness(
    model: &MonoidModel,
    f: &Formula,
    assignment: &Assignment,
    witnesses: &Assignment,
    bound: impl Into<Bound>,
) -> Result<bool> {
    let mut cur = f;
    let mut full = assignment.clone();
    let mut remaining: BTreeSet<&String> = witnesses.keys().collect();
    while let Formula::Exists(v, body) = cur {
        match witnesses.get(v) {
            Some(w) => {
                full.insert(v.clone(), w.clone());
                remaining.remove(v);
                cur = body;
            }
            None => break,
        }
    }
    if let Some(v) = remaining.into_iter().next() {
        return Err(Error::Param(format!(
            "`{v}` is not a leading existential variable"
        )));
    }
    eval(model, cur, &full, bound)
}

/// All tuples of words for `vars` (length within the bound) satisfying `f`,
/// sorted by shortlex order componentwise.
pub fn solutions<S: AsRef<str>>(
    model: &MonoidModel,
    f: &Formula,
    vars: &[S],
    bound: impl Into<Bound>,
) -> Result<Vec<Vec<Word>>> {
    solutions_given(model, f, &Assignment::new(), vars, bound)
}

/// Like [`solutions`], with the remaining free variables fixed by `given`.
pub fn solutions_given<S: AsRef<str>>(
    model: &MonoidModel,
    f: &Formula,
    given: &Assignment,
    vars: &[S],
    bound: impl Into<Bound>,
) -> Result<Vec<Vec<Word>>> {
    prepare(model, f)?;
    let bound = bound.into();
    let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
    let lookup = |v: &str| bound.for_var(v);
    let mut c = Compiler::new(model, &lookup);
    let mut scope = BTreeMap::new();
    let mut values = Vec::new();
    for v in f.free_vars() {
        if names.contains(&v) {
            continue;
        }
        let w = given.get(&v).ok_or_else(|| Error::Unbound(v.clone()))?;
        let slot = c.add_slot(w.len());
        scope.insert(v, slot);
        values.push((slot, to_letters(model, w)?));
    }
    let mut slots = Vec::new();
    for v in &names {
        if slots.len() != scope.len() - values.len() || scope.contains_key(v) {
            return Err(Error::Param(format!(
                "variable `{v}` listed twice or also given"
            )));
        }
        let slot = c.add_slot(bound.for_solution(v));
        scope.insert(v.clone(), slot);
        slots.push(slot);
    }
    let body = c.compile(f, &scope)?;
    let mut chains = vec![body; slots.len().max(1)];
    for i in (0..slots.len().saturating_sub(1)).rev() {
        chains[i] = c.exists_node(slots[i + 1], chains[i + 1]);
    }
    let prog = c.finish(chains[0]);
    let mut eng = Engine::new(&prog, model);
    for (slot, w) in values {
        eng.env[slot] = Some(Val::Known(w));
    }
    if slots.is_empty() {
        return Ok(if eng.eval(body) == Tri::T {
            vec![Vec::new()]
        } else {
            Vec::new()
        });
    }
    let mut out = Vec::new();
    eng.collect(&slots, &chains, 0, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| shortlex(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out.dedup();
    Ok(out
        .into_iter()
        .map(|t| t.into_iter().map(|w| to_word(model, w)).collect())
        .collect())
}

/// Difference between a formula's solutions and an expected set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub false_positives: Vec<Vec<Word>>,
    pub false_negatives: Vec<Vec<Word>>,
    /// Number of solutions found.
    pub found: usize,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.false_positives.is_empty() && self.false_negatives.is_empty()
    }
}

pub fn format_tuple(t: &[Word]) -> String {
    match t {
        [w] => w.to_string(),
        _ => format!(
            "({})",
            t.iter().map(Word::to_string).collect::<Vec<_>>().join(", ")
        ),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.false_positives {
            writeln!(f, "FP {}", format_tuple(t))?;
        }
        for t in &self.false_negatives {
            writeln!(f, "FN {}", format_tuple(t))?;
        }
        if self.is_clean() {
            writeln!(f, "OK {}", self.found)?;
        }
        Ok(())
    }
}

/// Compares `solutions(model, f, vars, bound)` with `expected`.
pub fn check_definition<S: AsRef<str>>(
    model: &MonoidModel,
    f: &Formula,
    vars: &[S],
    expected: &[Vec<Word>],
    bound: impl Into<Bound>,
) -> Result<Report> {
    let found = solutions(model, f, vars, bound)?;
    let norm = |t: &Vec<Word>| -> Result<Vec<Vec<u8>>> {
        t.iter().map(|w| to_letters(model, w)).collect()
    };
    let mut exp: BTreeSet<Vec<Vec<u8>>> = BTreeSet::new();
    for t in expected {
        if t.len() != vars.len() {
            return Err(Error::Param(format!(
                "expected tuple of arity {}, got {}",
                vars.len(),
                t.len()
            )));
        }
        exp.insert(norm(t)?);
    }
    let got: BTreeSet<Vec<Vec<u8>>> = found.iter().map(norm).collect::<Result<_>>()?;
    let back = |t: &Vec<Vec<u8>>| {
        t.iter()
            .map(|w| to_word(model, w.clone()))
            .collect::<Vec<_>>()
    };
    let order = |a: &Vec<Word>, b: &Vec<Word>| a.cmp(b);
    let mut false_positives: Vec<Vec<Word>> = got.difference(&exp).map(back).collect();
    let mut false_negatives: Vec<Vec<Word>> = exp.difference(&got).map(back).collect();
    false_positives.sort_by(order);
    false_negatives.sort_by(order);
    Ok(Report {
        false_positives,
        false_negatives,
        found: found.len(),
    })
}
