//! Interpretations of one structure in another, and the translation of
//! formulas along them.
//!
//! An interpretation of dimension `n` represents each source element by an
//! `n`-tuple of target elements satisfying a domain formula, modulo an
//! equivalence formula, with one formula per source operation (taken as the
//! graph `op(a, b) = c`). Each interpretation also carries executable
//! encoders and decoders so that translations can be tested on instances.
//! Operations given only semantically make [`translate`] fail.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::check::{eval_witness, Assignment, Bound};
use crate::coding::{decode_tuple, encode_tuple, monomial_to_tuple, tuple_to_monomial, SeqCode};
use crate::error::{Error, Result};
use crate::formula::{
    classify, fresh_name, parse, prenex, stem, substitute, substitute_all, Formula, Signature, Term,
};
use crate::gadgets::{self, Gens};
use crate::monoid::MonoidModel;
use crate::word::{Alphabet, Word};

/// Names accepted by [`bundle`].
pub const BUNDLES: [&str; 5] = [
    "nat-in-free",
    "nat-in-free-noparam",
    "nat-in-trace",
    "monoid-in-nat",
    "snn-in-nat",
];

/// Largest code turned into a power word by a composite encoder.
const MAX_POWER: u128 = 1 << 20;

/// A structure taking part in an interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// The naturals with `+`, `*`, `0`, `1`.
    Arithmetic,
    Monoid(MonoidModel),
    /// Tuples of naturals with position, length and concatenation.
    Lists,
}

impl Structure {
    /// The formula signature, absent for the list superstructure.
    pub fn signature(&self) -> Option<Signature> {
        match self {
            Structure::Arithmetic => Some(Signature::Arithmetic),
            Structure::Monoid(m) => Some(Signature::Monoid(m.alphabet().clone())),
            Structure::Lists => None,
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Arithmetic => write!(f, "N"),
            Structure::Monoid(m) => write!(f, "monoid over {}", m.alphabet().names().join(",")),
            Structure::Lists => write!(f, "S(N,N)"),
        }
    }
}

/// An element of some structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elem {
    Nat(u128),
    Word(Word),
    Tuple(Vec<u128>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::Word(w) => write!(f, "{w}"),
            Elem::Tuple(t) => {
                let parts: Vec<String> = t.iter().map(u128::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// The definition of a domain, equivalence or operation.
#[derive(Debug, Clone, PartialEq)]
pub enum Def {
    /// A target formula; `args[k]` names the variables of the `k`-th argument.
    Formula {
        formula: Formula,
        args: Vec<Vec<String>>,
    },
    /// Known only through the encoder; the string describes it.
    Semantic(String),
}

impl Def {
    fn formula(text: &str, args: &[&[&str]]) -> Def {
        let formula = parse(text)
            .unwrap_or_else(|e| panic!("built-in definition does not parse: {e}\n{text}"));
        Def::of(formula, args)
    }

    fn of(formula: Formula, args: &[&[&str]]) -> Def {
        let args = args
            .iter()
            .map(|a| a.iter().map(|s| s.to_string()).collect())
            .collect();
        Def::Formula { formula, args }
    }
}

type Encoder = Arc<dyn Fn(&Elem) -> Result<Vec<Elem>> + Send + Sync>;
type Decoder = Arc<dyn Fn(&[Elem]) -> Result<Elem> + Send + Sync>;
type Hint = Arc<dyn Fn(u64) -> Bound + Send + Sync>;

/// Interpretation data together with executable encoders.
#[derive(Clone)]
pub struct Interpretation {
    pub name: String,
    pub source: Structure,
    pub target: Structure,
    pub dim: usize,
    pub domain: Def,
    pub equiv: Def,
    /// Keyed by `plus`, `times`, `concat`, `position`, `length`, `in`.
    pub ops: BTreeMap<String, Def>,
    /// Target constants the formulas depend on.
    pub params: Vec<Elem>,
    encoder: Encoder,
    decoder: Decoder,
    /// Quantifier bounds for the internal variables, given the largest
    /// operand of a source operation.
    hint: Option<Hint>,
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Interpretation")
            .field("name", &self.name)
            .field("source", &self.source)
            .field("target", &self.target)
            .field("dim", &self.dim)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl Interpretation {
    /// The target tuple representing `a`.
    pub fn encode(&self, a: &Elem) -> Result<Vec<Elem>> {
        let out = (self.encoder)(a)?;
        debug_assert_eq!(out.len(), self.dim);
        Ok(out)
    }

    pub fn decode(&self, t: &[Elem]) -> Result<Elem> {
        if t.len() != self.dim {
            return Err(Error::Interpretation(format!(
                "expected {} components, got {}",
                self.dim,
                t.len()
            )));
        }
        (self.decoder)(t)
    }

    /// Target variable names standing for the source variable `v`.
    pub fn target_names(&self, v: &str) -> Vec<String> {
        if self.dim == 1 {
            vec![v.to_string()]
        } else {
            (1..=self.dim).map(|k| format!("{v}_{k}")).collect()
        }
    }

    /// Target assignment encoding a source assignment (monoid targets).
    pub fn encode_assignment(&self, a: &BTreeMap<String, Elem>) -> Result<Assignment> {
        let mut out = Assignment::new();
        for (v, e) in a {
            for (name, x) in self.target_names(v).into_iter().zip(self.encode(e)?) {
                match x {
                    Elem::Word(w) => out.insert(name, w),
                    other => return Err(Error::Interpretation(format!("`{other}` is not a word"))),
                };
            }
        }
        Ok(out)
    }

    /// Sound quantifier bounds for evaluating `translate(psi)` when source
    /// quantifiers range up to `max_value`, every argument of an operation is
    /// at most `max_operand`, and every term value is at most `max_term`.
    pub fn target_bound(
        &self,
        psi: &Formula,
        max_value: u64,
        max_operand: u64,
        max_term: u64,
    ) -> Result<Bound> {
        let size = |n: u64| -> Result<usize> {
            let enc = self.encode(&self.number(n)?)?;
            Ok(enc.iter().map(elem_size).max().unwrap_or(0))
        };
        let operand = max_operand.max(max_value);
        let term = max_term.max(operand);
        let (value, term_size) = (size(max_value)?, size(term)?);
        let mut b = match &self.hint {
            Some(h) => h(operand),
            None => Bound::new(term_size),
        };
        b = b.with(FLAT, term_size);
        for v in psi.all_vars() {
            for name in self.target_names(&v) {
                b = b.with(&name, value);
            }
        }
        Ok(b)
    }

    fn number(&self, n: u64) -> Result<Elem> {
        match &self.source {
            Structure::Arithmetic => Ok(Elem::Nat(u128::from(n))),
            Structure::Monoid(m) => Ok(Elem::Word(Word::from_letters(
                m.alphabet(),
                vec![0; n as usize],
            )?)),
            Structure::Lists => Ok(Elem::Tuple(vec![0; n as usize])),
        }
    }

    fn def_for(&self, op: &str) -> Result<&Def> {
        self.ops.get(op).ok_or_else(|| {
            Error::Interpretation(format!("{} has no definition for `{op}`", self.name))
        })
    }
}

fn elem_size(e: &Elem) -> usize {
    match e {
        Elem::Word(w) => w.len(),
        Elem::Nat(n) => usize::try_from(*n).unwrap_or(usize::MAX),
        Elem::Tuple(t) => t.len(),
    }
}

/// Base name of the variables introduced for compound terms.
const FLAT: &str = "rk";

/// Base name used when lifting definitions through a composition. These
/// variables range over intermediate gadget values, so they keep the default
/// bound instead of the term-size bound given to `rk`.
const LIFTED: &str = "rl";

struct Translator<'a> {
    i: &'a Interpretation,
    avoid: BTreeSet<String>,
    flat: &'static str,
}

impl Translator<'_> {
    fn fresh(&mut self) -> Vec<String> {
        let v = fresh_name(self.flat, &self.avoid);
        self.avoid.insert(v.clone());
        let names = self.i.target_names(&v);
        self.avoid.extend(names.iter().cloned());
        names
    }

    fn inst(&self, def: &Def, what: &str, args: &[Vec<Term>]) -> Result<Formula> {
        match def {
            Def::Semantic(desc) => Err(Error::Interpretation(format!(
                "`{what}` in {} has no defining formula ({desc})",
                self.i.name
            ))),
            Def::Formula {
                formula,
                args: names,
            } => {
                let mut map = BTreeMap::new();
                for (ns, ts) in names.iter().zip(args) {
                    for (n, t) in ns.iter().zip(ts) {
                        map.insert(n.clone(), t.clone());
                    }
                }
                Ok(substitute_all(formula, &map))
            }
        }
    }

    fn constant(&self, e: Elem) -> Result<Vec<Term>> {
        self.i
            .encode(&e)?
            .into_iter()
            .map(|x| elem_term(&x))
            .collect()
    }

    fn term(
        &mut self,
        t: &Term,
        scope: &BTreeMap<String, Vec<String>>,
        vars: &mut Vec<String>,
        parts: &mut Vec<Formula>,
    ) -> Result<Vec<Term>> {
        let op = match t {
            Term::Var(v) => {
                let names = scope.get(v).ok_or_else(|| Error::Unbound(v.clone()))?;
                return Ok(names.iter().map(|n| Term::Var(n.clone())).collect());
            }
            Term::Num(n) => return self.constant(Elem::Nat(u128::from(*n))),
            Term::Unit => {
                return match &self.i.source {
                    Structure::Monoid(m) => self.constant(Elem::Word(Word::empty(m.alphabet()))),
                    _ => self.constant(Elem::Nat(1)),
                }
            }
            Term::Word(gens) => {
                let Structure::Monoid(m) = &self.i.source else {
                    return Err(Error::Sort(format!("word `{t}` outside a monoid")));
                };
                let letters = gens
                    .iter()
                    .map(|g| {
                        m.alphabet()
                            .letter(g)
                            .ok_or_else(|| Error::UnknownGenerator(g.clone()))
                    })
                    .collect::<Result<Vec<u8>>>()?;
                return self.constant(Elem::Word(Word::from_letters(m.alphabet(), letters)?));
            }
            Term::Plus(..) => "plus",
            Term::Times(..) => "times",
            Term::Concat(..) => "concat",
        };
        let (Term::Plus(a, b) | Term::Times(a, b) | Term::Concat(a, b)) = t else {
            unreachable!()
        };
        let ta = self.term(a, scope, vars, parts)?;
        let tb = self.term(b, scope, vars, parts)?;
        let r = self.fresh();
        let tr: Vec<Term> = r.iter().map(|n| Term::Var(n.clone())).collect();
        parts.push(self.inst(&self.i.domain, "domain", &[tr.clone()])?);
        parts.push(self.inst(self.i.def_for(op)?, op, &[ta, tb, tr.clone()])?);
        vars.extend(r);
        Ok(tr)
    }

    fn formula(&mut self, f: &Formula, scope: &BTreeMap<String, Vec<String>>) -> Result<Formula> {
        Ok(match f {
            Formula::Eq(a, b) => {
                let (mut vars, mut parts) = (Vec::new(), Vec::new());
                let ta = self.term(a, scope, &mut vars, &mut parts)?;
                let tb = self.term(b, scope, &mut vars, &mut parts)?;
                parts.push(self.inst(&self.i.equiv, "equality", &[ta, tb])?);
                Formula::exists_all(&vars, Formula::and_all(parts))
            }
            Formula::Not(g) => Formula::not(self.formula(g, scope)?),
            Formula::And(a, b) => Formula::and(self.formula(a, scope)?, self.formula(b, scope)?),
            Formula::Or(a, b) => Formula::or(self.formula(a, scope)?, self.formula(b, scope)?),
            Formula::Implies(a, b) => {
                Formula::implies(self.formula(a, scope)?, self.formula(b, scope)?)
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let names = self.i.target_names(v);
                let mut inner = scope.clone();
                inner.insert(v.clone(), names.clone());
                let terms: Vec<Term> = names.iter().map(|n| Term::Var(n.clone())).collect();
                let dom = self.inst(&self.i.domain, "domain", &[terms])?;
                let body = self.formula(g, &inner)?;
                if matches!(f, Formula::Exists(..)) {
                    Formula::exists_all(&names, Formula::and(dom, body))
                } else {
                    Formula::forall_all(&names, Formula::implies(dom, body))
                }
            }
        })
    }
}

fn elem_term(e: &Elem) -> Result<Term> {
    match e {
        Elem::Word(w) if w.is_empty() => Ok(Term::Unit),
        Elem::Word(w) => Ok(Term::word(
            &w.letters()
                .iter()
                .map(|&l| w.alphabet().name(l))
                .collect::<Vec<_>>(),
        )),
        Elem::Nat(n) => u64::try_from(*n)
            .map(Term::Num)
            .map_err(|_| Error::Overflow),
        Elem::Tuple(_) => Err(Error::Interpretation(
            "tuples are not first-order constants".into(),
        )),
    }
}

/// The translation `psi*` of a source formula. Free variables keep their
/// names (suffixed `_1 .. _n` in dimension `n > 1`); quantifiers are
/// relativized to the domain; compound terms become fresh existential
/// variables `rk_k` constrained by the operation formulas; every equality
/// goes through the equivalence formula.
pub fn translate(psi: &Formula, i: &Interpretation) -> Result<Formula> {
    let sig = i.source.signature().ok_or_else(|| {
        Error::Interpretation(format!(
            "{} has no formula language on its source side",
            i.name
        ))
    })?;
    psi.check_sort(&sig)?;
    let scope = psi
        .free_vars()
        .into_iter()
        .map(|v| (v.clone(), i.target_names(&v)))
        .collect();
    translate_in(psi, i, scope, FLAT)
}

fn translate_in(
    psi: &Formula,
    i: &Interpretation,
    scope: BTreeMap<String, Vec<String>>,
    flat: &'static str,
) -> Result<Formula> {
    let mut avoid = psi.all_vars();
    for names in scope.values() {
        avoid.extend(names.iter().cloned());
    }
    let mut t = Translator { i, avoid, flat };
    t.formula(psi, &scope)
}

/// Difference of hierarchy levels `n(psi*) - n(psi)`, after prenexing both.
pub fn level_gain(psi: &Formula, i: &Interpretation) -> Result<usize> {
    let before = classify(&prenex(psi)).n();
    let after = classify(&prenex(&translate(psi, i)?)).n();
    Ok(after.saturating_sub(before))
}

/// The largest level gain over a corpus: the measured inflation constant.
pub fn level_inflation(i: &Interpretation, corpus: &[Formula]) -> Result<usize> {
    corpus
        .iter()
        .try_fold(0, |m, psi| Ok(m.max(level_gain(psi, i)?)))
}

/// `i2 ∘ i1`: the source of `i1` interpreted in the target of `i2`.
pub fn compose(i1: &Interpretation, i2: &Interpretation) -> Result<Interpretation> {
    if i1.target != i2.source {
        return Err(Error::Interpretation(format!(
            "cannot compose {} (into {}) with {} (from {})",
            i1.name, i1.target, i2.name, i2.source
        )));
    }
    let lift = |d: &Def, with_domain: bool| -> Result<Def> {
        match d {
            Def::Semantic(s) => Ok(Def::Semantic(s.clone())),
            Def::Formula { formula, args } => {
                let mut scope = BTreeMap::new();
                let mut new_args = Vec::new();
                let mut parts = Vec::new();
                for names in args {
                    let mut flat = Vec::new();
                    for n in names {
                        let ns = i2.target_names(n);
                        if with_domain {
                            let ts: Vec<Term> = ns.iter().map(|x| Term::Var(x.clone())).collect();
                            let t = Translator {
                                i: i2,
                                avoid: BTreeSet::new(),
                                flat: LIFTED,
                            };
                            parts.push(t.inst(&i2.domain, "domain", &[ts])?);
                        }
                        scope.insert(n.clone(), ns.clone());
                        flat.extend(ns);
                    }
                    new_args.push(flat);
                }
                parts.push(translate_in(formula, i2, scope, LIFTED)?);
                Ok(Def::Formula {
                    formula: one_point(&Formula::and_all(parts)),
                    args: new_args,
                })
            }
        }
    };
    let mut ops = BTreeMap::new();
    for (k, d) in &i1.ops {
        ops.insert(k.clone(), lift(d, false)?);
    }
    let mut params = i2.params.clone();
    for p in &i1.params {
        params.extend(i2.encode(p)?);
    }
    let (e1, e2, d1, d2) = (
        i1.encoder.clone(),
        i2.encoder.clone(),
        i1.decoder.clone(),
        i2.decoder.clone(),
    );
    let n2 = i2.dim;
    Ok(Interpretation {
        name: format!("{} via {}", i1.name, i2.name),
        source: i1.source.clone(),
        target: i2.target.clone(),
        dim: i1.dim * i2.dim,
        domain: lift(&i1.domain, true)?,
        equiv: lift(&i1.equiv, false)?,
        ops,
        params,
        encoder: Arc::new(move |a| {
            let mut out = Vec::new();
            for b in e1(a)? {
                out.extend(e2(&b)?);
            }
            Ok(out)
        }),
        decoder: Arc::new(move |t| {
            let mid = t.chunks(n2).map(|c| d2(c)).collect::<Result<Vec<_>>>()?;
            d1(&mid)
        }),
        // The inner hint describes the final target; an identity-like outer
        // step has none, and then the inner one still applies.
        hint: i2.hint.clone().or_else(|| i1.hint.clone()),
    })
}

fn conjuncts(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(*a, out);
            conjuncts(*b, out);
        }
        other => out.push(other),
    }
}

/// Removes lifted variables pinned by an equation, using
/// `E v. (v = t & phi)  <=>  phi[v := t]`, and drops conjuncts `t = t`.
/// Lifting through an interpretation whose operations are equations (such as
/// the identity) then gives back the original equations.
fn one_point(f: &Formula) -> Formula {
    let pinned = |v: &str, c: &Formula| -> Option<Term> {
        let Formula::Eq(a, b) = c else { return None };
        let mut seen = BTreeSet::new();
        match (a, b) {
            (Term::Var(x), t) | (t, Term::Var(x)) if x == v => {
                t.vars(&mut seen);
                (!seen.contains(v)).then(|| t.clone())
            }
            _ => None,
        }
    };
    let trivial = |c: &Formula| matches!(c, Formula::Eq(a, b) if a == b);
    match f {
        Formula::Exists(v, body) => {
            let body = one_point(body);
            if stem(v) != LIFTED {
                return Formula::exists(v, body);
            }
            let mut parts = Vec::new();
            conjuncts(body.clone(), &mut parts);
            let Some(k) = parts.iter().position(|c| pinned(v, c).is_some()) else {
                return Formula::exists(v, body);
            };
            let t = pinned(v, &parts[k]).expect("found above");
            parts.remove(k);
            let rest: Vec<Formula> = parts
                .iter()
                .map(|c| substitute(c, v, &t))
                .filter(|c| !trivial(c))
                .collect();
            if rest.is_empty() {
                Formula::eq(Term::Unit, Term::Unit)
            } else {
                Formula::and_all(rest)
            }
        }
        Formula::Forall(v, body) => Formula::forall(v, one_point(body)),
        Formula::Not(g) => Formula::not(one_point(g)),
        Formula::And(a, b) => Formula::and(one_point(a), one_point(b)),
        Formula::Or(a, b) => Formula::or(one_point(a), one_point(b)),
        Formula::Implies(a, b) => Formula::implies(one_point(a), one_point(b)),
        Formula::Eq(..) => f.clone(),
    }
}

/// The identity interpretation of a structure in itself.
pub fn identity(s: &Structure) -> Interpretation {
    let mut ops = BTreeMap::new();
    let (domain, equiv) = match s {
        Structure::Lists => {
            for op in ["position", "length", "concat", "in"] {
                ops.insert(op.to_string(), Def::Semantic("list operation".into()));
            }
            (
                Def::Semantic("all tuples".into()),
                Def::Semantic("equality".into()),
            )
        }
        _ => {
            if matches!(s, Structure::Arithmetic) {
                ops.insert(
                    "plus".into(),
                    Def::formula("a + b = c", &[&["a"], &["b"], &["c"]]),
                );
                ops.insert(
                    "times".into(),
                    Def::formula("a * b = c", &[&["a"], &["b"], &["c"]]),
                );
            } else {
                ops.insert(
                    "concat".into(),
                    Def::formula("a.b = c", &[&["a"], &["b"], &["c"]]),
                );
            }
            (
                Def::formula("x = x", &[&["x"]]),
                Def::formula("x = y", &[&["x"], &["y"]]),
            )
        }
    };
    Interpretation {
        name: "identity".into(),
        source: s.clone(),
        target: s.clone(),
        dim: 1,
        domain,
        equiv,
        ops,
        params: Vec::new(),
        encoder: Arc::new(|a| Ok(vec![a.clone()])),
        decoder: Arc::new(|t| Ok(t[0].clone())),
        hint: None,
    }
}

fn q(alphabet: &Alphabet, l: u8) -> String {
    format!("'{}'", alphabet.name(l))
}

/// Decodes `c^n` for a single letter `c` accepted by `ok`.
fn power_of(w: &Word, ok: impl Fn(u8) -> bool) -> Result<u128> {
    match w.letters().first() {
        None => Ok(0),
        Some(&c) if ok(c) && w.letters().iter().all(|&l| l == c) => Ok(w.len() as u128),
        _ => Err(Error::Interpretation(format!(
            "`{w}` is not in the interpreted domain"
        ))),
    }
}

fn nat_encoder(alphabet: Arc<Alphabet>, letter: u8) -> Encoder {
    Arc::new(move |a| match a {
        Elem::Nat(n) if *n <= MAX_POWER => Ok(vec![Elem::Word(Word::from_letters(
            &alphabet,
            vec![letter; *n as usize],
        )?)]),
        Elem::Nat(_) => Err(Error::Overflow),
        other => Err(Error::Interpretation(format!(
            "`{other}` is not a natural number"
        ))),
    })
}

fn word_of(e: &Elem) -> Result<&Word> {
    match e {
        Elem::Word(w) => Ok(w),
        other => Err(Error::Interpretation(format!("`{other}` is not a word"))),
    }
}

fn nat_ops(plus: Formula, times: Formula) -> BTreeMap<String, Def> {
    let args: &[&[&str]] = &[&["x"], &["y"], &["z"]];
    BTreeMap::from([
        ("plus".to_string(), Def::of(plus, args)),
        ("times".to_string(), Def::of(times, args)),
    ])
}

fn nat_hint(g: Gens) -> Hint {
    Arc::new(move |t| {
        let t = t as usize;
        Bound::new(gadgets::mult_gadget_word(&g, t, t).len()).with("oc", 1)
    })
}

/// The naturals in a free monoid as the powers of `x1`, with `x1`, `x2` as
/// parameters: `n ↦ x1^n`.
pub fn nat_in_free(g: &Gens) -> Interpretation {
    let a = g.alphabet().clone();
    let x1 = q(&a, g.x1);
    Interpretation {
        name: "nat-in-free".into(),
        source: Structure::Arithmetic,
        target: Structure::Monoid(g.model()),
        dim: 1,
        domain: Def::formula(&format!("{x1}.x = x.{x1}"), &[&["x"]]),
        equiv: Def::formula("x = y", &[&["x"], &["y"]]),
        ops: nat_ops(gadgets::add(g), gadgets::mult(g)),
        params: vec![Elem::Word(g.p1(1)), Elem::Word(g.p2(1))],
        encoder: nat_encoder(a.clone(), g.x1),
        decoder: {
            let x = g.x1;
            Arc::new(move |t| Ok(Elem::Nat(power_of(word_of(&t[0])?, |c| c == x)?)))
        },
        hint: Some(nat_hint(g.clone())),
    }
}

/// The naturals in a free monoid without parameters: `n` is represented by
/// every `xi^n`, identified by the transfer equivalence.
pub fn nat_in_free_noparam(alphabet: &Arc<Alphabet>) -> Result<Interpretation> {
    let g = two_gens(alphabet)?;
    let th = |v: &str| {
        substitute_all(
            &gadgets::basis(),
            &BTreeMap::from([("x".to_string(), Term::var(v))]),
        )
        .to_string()
    };
    let eps = gadgets::trans_noparam();
    let ep = |a: &str, b: &str| {
        substitute_all(
            &eps,
            &BTreeMap::from([
                ("x".to_string(), Term::var(a)),
                ("y".to_string(), Term::var(b)),
            ]),
        )
        .to_string()
    };
    let plus = parse(&format!(
        "E z0. ({t} & z0.x = x.z0 & E y0. (z0.y0 = y0.z0 & {ey} & E u0. (z0.u0 = u0.z0 & {ez} & x.y0 = u0)))",
        t = th("z0"),
        ey = ep("y", "y0"),
        ez = ep("z", "u0"),
    ))?;
    let m = substitute_all(
        &gadgets::mult_with("p1", "p2"),
        &BTreeMap::from([
            ("x".to_string(), Term::var("x0")),
            ("y".to_string(), Term::var("y0")),
            ("z".to_string(), Term::var("u0")),
        ]),
    );
    let times = parse(&format!(
        "E p1. E p2. ({t1} & {t2} & !(p1 = p2) & E x0. (p1.x0 = x0.p1 & {ex} & E y0. (p1.y0 = y0.p1 & {ey} \
         & E u0. (p1.u0 = u0.p1 & {ez} & {m}))))",
        t1 = th("p1"),
        t2 = th("p2"),
        ex = ep("x", "x0"),
        ey = ep("y", "y0"),
        ez = ep("z", "u0"),
    ))?;
    let dom = parse(&format!("E z0. ({} & z0.x = x.z0)", th("z0")))?;
    Ok(Interpretation {
        name: "nat-in-free-noparam".into(),
        source: Structure::Arithmetic,
        target: Structure::Monoid(g.model()),
        dim: 1,
        domain: Def::of(dom, &[&["x"]]),
        equiv: Def::of(eps, &[&["x"], &["y"]]),
        ops: nat_ops(plus, times),
        params: Vec::new(),
        encoder: nat_encoder(alphabet.clone(), 0),
        decoder: Arc::new(|t| Ok(Elem::Nat(power_of(word_of(&t[0])?, |_| true)?))),
        hint: Some(nat_hint(g)),
    })
}

/// The naturals in a trace monoid as the powers of the first generator
/// that has a non-commuting partner.
pub fn nat_in_trace(model: &MonoidModel) -> Result<Interpretation> {
    let a = model.alphabet().clone();
    let n = a.len() as u8;
    let (p1, p2) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && !model.commute(i, j))
        .ok_or_else(|| Error::InvalidMonoid("every pair of generators commutes".into()))?;
    let g = Gens::new(a.clone(), a.name(p1), a.name(p2))?;
    let x1 = q(&a, p1);
    let dom = |v: &str| {
        let others: String = (0..n)
            .filter(|&c| c != p1)
            .map(|c| format!(" & !E u. E v. {v} = u.{}.v", q(&a, c)))
            .collect();
        format!("({x1}.{v} = {v}.{x1}{others})")
    };
    let plus = parse(&format!(
        "({} & {} & {} & x.y = z)",
        dom("x"),
        dom("y"),
        dom("z")
    ))?;
    Ok(Interpretation {
        name: "nat-in-trace".into(),
        source: Structure::Arithmetic,
        target: Structure::Monoid(model.clone()),
        dim: 1,
        domain: Def::formula(&dom("x"), &[&["x"]]),
        equiv: Def::formula("x = y", &[&["x"], &["y"]]),
        ops: nat_ops(plus, gadgets::mult(&g)),
        params: vec![Elem::Word(g.p1(1)), Elem::Word(g.p2(1))],
        encoder: nat_encoder(a, p1),
        decoder: Arc::new(move |t| Ok(Elem::Nat(power_of(word_of(&t[0])?, |c| c == p1)?))),
        hint: Some(nat_hint(g)),
    })
}

fn tuple_of(e: &Elem) -> Result<&[u128]> {
    match e {
        Elem::Tuple(t) => Ok(t),
        other => Err(Error::Interpretation(format!("`{other}` is not a tuple"))),
    }
}

/// Monomials as tuples of generator indices; multiplication is concatenation.
pub fn monoid_in_snn(alphabet: &Arc<Alphabet>) -> Interpretation {
    let a = alphabet.clone();
    let n = a.len();
    Interpretation {
        name: "monoid-in-snn".into(),
        source: Structure::Monoid(MonoidModel::free(a.clone())),
        target: Structure::Lists,
        dim: 1,
        domain: Def::Semantic(format!("tuples with entries in 1..={n}")),
        equiv: Def::Semantic("equality of tuples".into()),
        ops: BTreeMap::from([(
            "concat".to_string(),
            Def::Semantic("concatenation of tuples".into()),
        )]),
        params: Vec::new(),
        encoder: Arc::new(|e| Ok(vec![Elem::Tuple(monomial_to_tuple(word_of(e)?))])),
        decoder: Arc::new(move |t| Ok(Elem::Word(tuple_to_monomial(tuple_of(&t[0])?, &a)?))),
        hint: None,
    }
}

/// Tuples as their sequence codes.
pub fn snn_in_nat() -> Interpretation {
    let sem = |s: &str| Def::Semantic(format!("{s} on decoded tuples"));
    Interpretation {
        name: "snn-in-nat".into(),
        source: Structure::Lists,
        target: Structure::Arithmetic,
        dim: 1,
        domain: Def::Semantic("well-formed codes".into()),
        equiv: Def::Semantic("equality of codes".into()),
        ops: ["position", "length", "concat", "in"]
            .iter()
            .map(|op| (op.to_string(), sem(op)))
            .collect(),
        params: Vec::new(),
        encoder: Arc::new(|e| Ok(vec![Elem::Nat(encode_tuple(tuple_of(e)?)?.0)])),
        decoder: Arc::new(|t| match &t[0] {
            Elem::Nat(c) => Ok(Elem::Tuple(decode_tuple(SeqCode(*c))?)),
            other => Err(Error::Interpretation(format!("`{other}` is not a code"))),
        }),
        hint: None,
    }
}

/// Monomials as the codes of their index tuples.
pub fn monoid_in_nat(alphabet: &Arc<Alphabet>) -> Interpretation {
    let mut i =
        compose(&monoid_in_snn(alphabet), &snn_in_nat()).expect("the list structures match");
    i.name = "monoid-in-nat".into();
    i
}

/// Reads the tuple off a tuple word `x1 x2^(t1+1) x1^2 x2^(t2+1) ...`.
pub fn read_tuple_word(g: &Gens, w: &Word) -> Result<Vec<u128>> {
    let bad = || Error::Interpretation(format!("`{w}` is not a tuple word"));
    let l = w.letters();
    let (mut p, mut out) = (0, Vec::new());
    while p < l.len() {
        let k = l[p..].iter().take_while(|&&c| c == g.x1).count();
        let e = l[p + k..].iter().take_while(|&&c| c == g.x2).count();
        if k != out.len() + 1 || e == 0 {
            return Err(bad());
        }
        out.push((e - 1) as u128);
        p += k + e;
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Nonempty tuples as tuple words, with the position, length, membership
/// and concatenation formulas.
pub fn snn_in_free(g: &Gens) -> Interpretation {
    let g2 = g.clone();
    let g3 = g.clone();
    let ops = BTreeMap::from([
        (
            "position".to_string(),
            Def::of(gadgets::position(g), &[&["x"], &["y"], &["z"]]),
        ),
        (
            "length".to_string(),
            Def::of(gadgets::length(g), &[&["x"], &["y"]]),
        ),
        (
            "in".to_string(),
            Def::of(gadgets::member_in(g), &[&["x"], &["y"]]),
        ),
        (
            "concat".to_string(),
            Def::of(gadgets::concat(g), &[&["x"], &["y"], &["z"]]),
        ),
    ]);
    Interpretation {
        name: "snn-in-free".into(),
        source: Structure::Lists,
        target: Structure::Monoid(g.model()),
        dim: 1,
        domain: Def::of(gadgets::tuple(g), &[&["x"]]),
        equiv: Def::formula("x = y", &[&["x"], &["y"]]),
        ops,
        params: vec![Elem::Word(g.p1(1)), Elem::Word(g.p2(1))],
        encoder: Arc::new(move |e| {
            let t: Vec<usize> = tuple_of(e)?
                .iter()
                .map(|&x| usize::try_from(x).map_err(|_| Error::Overflow))
                .collect::<Result<_>>()?;
            Ok(vec![Elem::Word(gadgets::tuple_word(&g2, &t)?)])
        }),
        decoder: Arc::new(move |t| Ok(Elem::Tuple(read_tuple_word(&g3, word_of(&t[0])?)?))),
        hint: None,
    }
}

fn two_gens(a: &Arc<Alphabet>) -> Result<Gens> {
    if a.len() < 2 {
        return Err(Error::Param(
            "the naturals need at least two generators".into(),
        ));
    }
    Gens::new(a.clone(), &a.names()[0], &a.names()[1])
}

/// A named interpretation over the given alphabet (and trace edges for
/// `nat-in-trace`).
pub fn bundle(name: &str, model: &MonoidModel) -> Result<Interpretation> {
    let a = model.alphabet();
    let free_gens = || -> Result<Gens> {
        if !model.is_free() {
            return Err(Error::WrongKind(format!("{name} needs a free monoid")));
        }
        two_gens(a)
    };
    match name {
        "nat-in-free" => Ok(nat_in_free(&free_gens()?)),
        "nat-in-free-noparam" => {
            free_gens()?;
            nat_in_free_noparam(a)
        }
        "nat-in-trace" => {
            if !matches!(model.kind(), crate::monoid::MonoidKind::Trace { .. }) {
                return Err(Error::WrongKind("nat-in-trace needs a trace monoid".into()));
            }
            nat_in_trace(model)
        }
        "monoid-in-nat" => Ok(monoid_in_nat(a)),
        "snn-in-nat" => Ok(snn_in_nat()),
        other => Err(Error::Interpretation(format!(
            "unknown interpretation `{other}`; known: {}",
            BUNDLES.join(", ")
        ))),
    }
}

/// Outcome of [`check_bi_interpretation`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BiReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl BiReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each instance `a`, computes the round trip `a**` through `i_ab` then
/// `i_ba`, checks that decoding returns `a`, and that `graph(a, a**)` holds.
pub fn check_bi_interpretation(
    i_ab: &Interpretation,
    i_ba: &Interpretation,
    instances: &[Elem],
    graph: &dyn Fn(&Elem, &[Elem]) -> Result<bool>,
) -> Result<BiReport> {
    if i_ab.target != i_ba.source || i_ba.target != i_ab.source {
        return Err(Error::Interpretation(format!(
            "{} and {} are not mutual",
            i_ab.name, i_ba.name
        )));
    }
    let mut report = BiReport::default();
    for a in instances {
        report.checked += 1;
        let mid = i_ab.encode(a)?;
        let mut round = Vec::new();
        for b in &mid {
            round.extend(i_ba.encode(b)?);
        }
        let back = round
            .chunks(i_ba.dim)
            .map(|c| i_ba.decode(c))
            .collect::<Result<Vec<_>>>()?;
        let decoded = i_ab.decode(&back)?;
        if &decoded != a {
            report
                .failures
                .push(format!("{a}: round trip decodes to {decoded}"));
        } else if !graph(a, &round)? {
            let shown: Vec<String> = round.iter().map(Elem::to_string).collect();
            report
                .failures
                .push(format!("{a}: graph rejects ({})", shown.join(", ")));
        }
    }
    Ok(report)
}

/// Monoid side: `theta1(w_M, M)` in witness mode.
pub fn theta1_graph(g: &Gens) -> impl Fn(&Elem, &[Elem]) -> Result<bool> + '_ {
    let f = gadgets::iso_theta1(g);
    move |a, image| {
        let (m, w) = (word_of(a)?, word_of(&image[0])?);
        let inst = gadgets::instance(g, "iso", &[m.to_string()])?;
        let assign = Assignment::from([("x".to_string(), w.clone()), ("y".to_string(), m.clone())]);
        let witnesses = Assignment::from([
            ("m".to_string(), g.p1(m.len())),
            ("a".to_string(), gadgets::a_word(g, m.len())?),
            ("z".to_string(), gadgets::iso_word(g, m)?),
        ]);
        eval_witness(&g.model(), &f, &assign, &witnesses, inst.bound)
    }
}

/// `(1, 2^(t1+1)) ⌢ (1, 1, 2^(t2+1)) ⌢ ...`: the index tuple of the tuple
/// word of `t`.
pub fn tuple_word_indices(t: &[u128]) -> Vec<u128> {
    let mut out = Vec::new();
    for (i, &x) in t.iter().enumerate() {
        out.extend(std::iter::repeat_n(1, i + 1));
        out.extend(std::iter::repeat_n(2, x as usize + 1));
    }
    out
}

/// Arithmetic side: the round trip of `t` is [`tuple_word_indices`]`(t)`.
pub fn expansion_graph(a: &Elem, image: &[Elem]) -> Result<bool> {
    Ok(tuple_of(&image[0])? == tuple_word_indices(tuple_of(a)?).as_slice())
}
