//! First-order formulas over monoid and arithmetic signatures.

mod parse;
mod prenex;
mod print;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::Alphabet;

pub use parse::parse;
pub use prenex::{classify, nnf, prenex};
pub(crate) use subst::stem;
pub use subst::{fresh_name, substitute, substitute_all};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// A word constant given by generator names, e.g. `'x1.x2'`.
    Word(Vec<String>),
    /// The identity of the monoid, or the numeral 1 in arithmetic.
    Unit,
    Num(u64),
    Concat(Box<Term>, Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Signature {
    Monoid(Arc<Alphabet>),
    Arithmetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HierarchyLevel {
    QuantifierFree,
    Sigma(usize),
    Pi(usize),
}

impl HierarchyLevel {
    /// Number of quantifier blocks; 0 for quantifier-free formulas.
    pub fn n(&self) -> usize {
        match self {
            HierarchyLevel::QuantifierFree => 0,
            HierarchyLevel::Sigma(n) | HierarchyLevel::Pi(n) => *n,
        }
    }
}

impl fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HierarchyLevel::QuantifierFree => write!(f, "QF"),
            HierarchyLevel::Sigma(n) => write!(f, "Sigma{n}"),
            HierarchyLevel::Pi(n) => write!(f, "Pi{n}"),
        }
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn word<S: AsRef<str>>(gens: &[S]) -> Term {
        if gens.is_empty() {
            Term::Unit
        } else {
            Term::Word(gens.iter().map(|g| g.as_ref().to_string()).collect())
        }
    }

    /// Left-nested concatenation of `parts`; the identity when empty.
    pub fn cat(parts: Vec<Term>) -> Term {
        let mut it = parts.into_iter();
        match it.next() {
            None => Term::Unit,
            Some(first) => it.fold(first, |acc, t| Term::Concat(Box::new(acc), Box::new(t))),
        }
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Box::new(a), Box::new(b))
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Word(_) | Term::Unit | Term::Num(_) => {}
            Term::Concat(a, b) | Term::Plus(a, b) | Term::Times(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Term::Var(_) | Term::Word(_) | Term::Unit | Term::Num(_)
        )
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    /// Left-nested conjunction; panics on an empty list.
    pub fn and_all(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("non-empty conjunction");
        it.fold(first, Formula::and)
    }

    pub fn or_all(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("non-empty disjunction");
        it.fold(first, Formula::or)
    }

    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    pub fn forall_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                let mut vs = BTreeSet::new();
                a.vars(&mut vs);
                b.vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Not(f) => f.collect_all(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                out.insert(v.clone());
                f.collect_all(out);
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Checks that every term uses only the symbols of `sig`.
    pub fn check_sort(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Eq(a, b) => {
                check_term(a, sig)?;
                check_term(b, sig)
            }
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.check_sort(sig),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check_sort(sig)?;
                b.check_sort(sig)
            }
        }
    }
}

fn check_term(t: &Term, sig: &Signature) -> Result<()> {
    match (t, sig) {
        (Term::Var(_) | Term::Unit, _) => Ok(()),
        (Term::Word(gens), Signature::Monoid(alpha)) => {
            for g in gens {
                if alpha.letter(g).is_none() {
                    return Err(Error::Sort(format!(
                        "generator `{g}` is not in the alphabet"
                    )));
                }
            }
            Ok(())
        }
        (Term::Concat(a, b), Signature::Monoid(_)) => {
            check_term(a, sig)?;
            check_term(b, sig)
        }
        (Term::Num(n), Signature::Arithmetic) => {
            let _ = n;
            Ok(())
        }
        (Term::Plus(a, b) | Term::Times(a, b), Signature::Arithmetic) => {
            check_term(a, sig)?;
            check_term(b, sig)
        }
        (Term::Word(_), Signature::Arithmetic) => Err(Error::Sort(format!(
            "word constant `{t}` in an arithmetic formula"
        ))),
        (Term::Concat(..), Signature::Arithmetic) => Err(Error::Sort(format!(
            "concatenation `{t}` in an arithmetic formula"
        ))),
        (Term::Num(_), Signature::Monoid(_)) => {
            Err(Error::Sort(format!("numeral `{t}` in a monoid formula")))
        }
        (Term::Plus(..) | Term::Times(..), Signature::Monoid(_)) => Err(Error::Sort(format!(
            "arithmetic operation `{t}` in a monoid formula"
        ))),
    }
}
