//! Lowering of monoid formulas to an indexed form for evaluation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::monoid::MonoidModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Atom {
    Var(usize),
    Const(Vec<u8>),
}

pub(crate) type Seq = Vec<Atom>;

#[derive(Debug, Clone)]
pub(crate) enum Kind {
    Eq(Seq, Seq),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
    Exists(usize, usize),
    Forall(usize, usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub kind: Kind,
    /// Sorted slots occurring anywhere below this node.
    pub vars: Vec<usize>,
    /// Sorted slots occurring free in this node.
    pub free: Vec<usize>,
}

impl Node {
    pub fn mentions(&self, slot: usize) -> bool {
        self.vars.binary_search(&slot).is_ok()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub bound: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Program {
    pub nodes: Vec<Node>,
    pub slots: Vec<Slot>,
    pub root: usize,
}

pub(crate) struct Compiler<'a> {
    model: &'a MonoidModel,
    nodes: Vec<Node>,
    slots: Vec<Slot>,
    bound_of: &'a dyn Fn(&str) -> usize,
}

impl<'a> Compiler<'a> {
    pub fn new(model: &'a MonoidModel, bound_of: &'a dyn Fn(&str) -> usize) -> Compiler<'a> {
        Compiler {
            model,
            nodes: Vec::new(),
            slots: Vec::new(),
            bound_of,
        }
    }

    /// Registers an externally assigned variable and returns its slot.
    pub fn add_slot(&mut self, bound: usize) -> usize {
        self.slots.push(Slot { bound });
        self.slots.len() - 1
    }

    pub fn compile(&mut self, f: &Formula, scope: &BTreeMap<String, usize>) -> Result<usize> {
        let mut scope = scope.clone();
        self.node(f, &mut scope)
    }

    /// Wraps `body` in an existential over an already registered slot.
    pub fn exists_node(&mut self, slot: usize, body: usize) -> usize {
        let mut vars = self.nodes[body].vars.clone();
        vars.push(slot);
        self.push(Kind::Exists(slot, body), vars)
    }

    pub fn finish(mut self, root: usize) -> Program {
        // Children always precede their parents.
        for i in 0..self.nodes.len() {
            let mut free = match &self.nodes[i].kind {
                Kind::Eq(..) => self.nodes[i].vars.clone(),
                Kind::Not(c) => self.nodes[*c].free.clone(),
                Kind::And(cs) | Kind::Or(cs) => cs
                    .iter()
                    .flat_map(|&c| self.nodes[c].free.iter().copied())
                    .collect(),
                Kind::Implies(a, b) => [*a, *b]
                    .iter()
                    .flat_map(|&c| self.nodes[c].free.iter().copied())
                    .collect(),
                Kind::Exists(s, b) | Kind::Forall(s, b) => self.nodes[*b]
                    .free
                    .iter()
                    .copied()
                    .filter(|v| v != s)
                    .collect(),
            };
            free.sort_unstable();
            free.dedup();
            self.nodes[i].free = free;
        }
        Program {
            nodes: self.nodes,
            slots: self.slots,
            root,
        }
    }

    fn push(&mut self, kind: Kind, vars: Vec<usize>) -> usize {
        let mut vars = vars;
        vars.sort_unstable();
        vars.dedup();
        self.nodes.push(Node {
            kind,
            vars,
            free: Vec::new(),
        });
        self.nodes.len() - 1
    }

    fn vars_of(&self, ids: &[usize]) -> Vec<usize> {
        ids.iter()
            .flat_map(|&i| self.nodes[i].vars.iter().copied())
            .collect()
    }

    fn node(&mut self, f: &Formula, scope: &mut BTreeMap<String, usize>) -> Result<usize> {
        match f {
            Formula::Eq(a, b) => {
                let (sa, sb) = (self.seq(a, scope)?, self.seq(b, scope)?);
                let vars = sa
                    .iter()
                    .chain(sb.iter())
                    .filter_map(|x| match x {
                        Atom::Var(s) => Some(*s),
                        Atom::Const(_) => None,
                    })
                    .collect();
                Ok(self.push(Kind::Eq(sa, sb), vars))
            }
            Formula::Not(g) => {
                let c = self.node(g, scope)?;
                let vars = self.nodes[c].vars.clone();
                Ok(self.push(Kind::Not(c), vars))
            }
            Formula::And(..) | Formula::Or(..) => {
                let is_and = matches!(f, Formula::And(..));
                let mut parts = Vec::new();
                flatten(f, is_and, &mut parts);
                let mut ids = Vec::new();
                for p in parts {
                    ids.push(self.node(p, scope)?);
                }
                let vars = self.vars_of(&ids);
                Ok(self.push(
                    if is_and {
                        Kind::And(ids)
                    } else {
                        Kind::Or(ids)
                    },
                    vars,
                ))
            }
            Formula::Implies(a, b) => {
                let (ca, cb) = (self.node(a, scope)?, self.node(b, scope)?);
                let vars = self.vars_of(&[ca, cb]);
                Ok(self.push(Kind::Implies(ca, cb), vars))
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let bound = (self.bound_of)(v);
                let slot = self.add_slot(bound);
                let prev = scope.insert(v.clone(), slot);
                let body = self.node(g, scope)?;
                match prev {
                    Some(p) => scope.insert(v.clone(), p),
                    None => scope.remove(v),
                };
                Ok(self.quantify(matches!(f, Formula::Exists(..)), slot, body))
            }
        }
    }

    /// Builds the quantifier node, first moving out the parts of the body
    /// that do not mention `slot` (conjuncts under an existential, disjuncts
    /// and implication premises under a universal).
    fn quantify(&mut self, exists: bool, slot: usize, body: usize) -> usize {
        let wrap = |c: &mut Self, inner: usize| {
            let vars = c.nodes[inner].vars.clone();
            let kind = if exists {
                Kind::Exists(slot, inner)
            } else {
                Kind::Forall(slot, inner)
            };
            c.push(kind, vars)
        };
        match self.nodes[body].kind.clone() {
            Kind::And(ids) if exists => self.split(ids, slot, true, wrap),
            Kind::Or(ids) if !exists => self.split(ids, slot, false, wrap),
            Kind::Implies(a, b)
                if !exists && !self.nodes[a].mentions(slot) && self.nodes[b].mentions(slot) =>
            {
                let q = self.quantify(false, slot, b);
                let vars = self.vars_of(&[a, q]);
                self.push(Kind::Implies(a, q), vars)
            }
            _ => wrap(self, body),
        }
    }

    fn split(
        &mut self,
        ids: Vec<usize>,
        slot: usize,
        is_and: bool,
        wrap: impl Fn(&mut Self, usize) -> usize,
    ) -> usize {
        let (inner, mut outer): (Vec<usize>, Vec<usize>) =
            ids.into_iter().partition(|&i| self.nodes[i].mentions(slot));
        if outer.is_empty() || inner.is_empty() {
            let all: Vec<usize> = inner.into_iter().chain(outer).collect();
            let vars = self.vars_of(&all);
            let body = self.push(
                if is_and {
                    Kind::And(all)
                } else {
                    Kind::Or(all)
                },
                vars,
            );
            return wrap(self, body);
        }
        let body = if inner.len() == 1 {
            inner[0]
        } else {
            let vars = self.vars_of(&inner);
            self.push(
                if is_and {
                    Kind::And(inner)
                } else {
                    Kind::Or(inner)
                },
                vars,
            )
        };
        outer.push(wrap(self, body));
        let vars = self.vars_of(&outer);
        self.push(
            if is_and {
                Kind::And(outer)
            } else {
                Kind::Or(outer)
            },
            vars,
        )
    }

    fn seq(&self, t: &Term, scope: &BTreeMap<String, usize>) -> Result<Seq> {
        let mut out = Vec::new();
        self.flatten_term(t, scope, &mut out)?;
        // Merge adjacent constants.
        let mut merged: Seq = Vec::new();
        for a in out {
            match (merged.last_mut(), a) {
                (Some(Atom::Const(prev)), Atom::Const(k)) => prev.extend_from_slice(&k),
                (_, Atom::Const(k)) if k.is_empty() => {}
                (_, a) => merged.push(a),
            }
        }
        Ok(merged)
    }

    fn flatten_term(&self, t: &Term, scope: &BTreeMap<String, usize>, out: &mut Seq) -> Result<()> {
        match t {
            Term::Var(v) => {
                let s = scope.get(v).ok_or_else(|| Error::Unbound(v.clone()))?;
                out.push(Atom::Var(*s));
            }
            Term::Unit => {}
            Term::Word(gens) => {
                let mut k = Vec::with_capacity(gens.len());
                for g in gens {
                    let l = self.model.alphabet().letter(g).ok_or_else(|| {
                        Error::Sort(format!("generator `{g}` is not in the alphabet"))
                    })?;
                    k.push(l);
                }
                out.push(Atom::Const(k));
            }
            Term::Concat(a, b) => {
                self.flatten_term(a, scope, out)?;
                self.flatten_term(b, scope, out)?;
            }
            Term::Num(_) | Term::Plus(..) | Term::Times(..) => {
                return Err(Error::Sort(format!(
                    "arithmetic term `{t}` in a monoid formula"
                )));
            }
        }
        Ok(())
    }
}

fn flatten<'f>(f: &'f Formula, is_and: bool, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(a, b) if is_and => {
            flatten(a, is_and, out);
            flatten(b, is_and, out);
        }
        Formula::Or(a, b) if !is_and => {
            flatten(a, is_and, out);
            flatten(b, is_and, out);
        }
        _ => out.push(f),
    }
}
