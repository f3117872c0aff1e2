//! Three-valued evaluation with guarded quantifier search.
//!
//! Concrete evaluation binds every variable to a known word and yields a
//! definite answer. To prune the search over long words, a quantified
//! variable can also be bound to a partial value `p·Ω`, where `Ω` is an
//! unknown suffix of bounded length; evaluating the body abstractly then
//! answers for every extension of `p` at once, or says "unknown".

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use super::compile::{Atom, Kind, Program, Seq};
use crate::monoid::MonoidModel;
use crate::word::{count_up_to, words_up_to};

/// Open candidate sets up to this size are enumerated outright.
const ENUM_LIMIT: usize = 4096;
/// Same, while evaluating abstractly.
const ABSTRACT_ENUM_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tri {
    F,
    U,
    T,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::T
        } else {
            Tri::F
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::F => Tri::T,
            Tri::U => Tri::U,
            Tri::T => Tri::F,
        }
    }

    pub fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::F, _) | (_, Tri::F) => Tri::F,
            (Tri::T, Tri::T) => Tri::T,
            _ => Tri::U,
        }
    }

    pub fn or(self, o: Tri) -> Tri {
        self.not().and(o.not()).not()
    }
}

/// A possibly partial word value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Val {
    Known(Vec<u8>),
    /// `p·Ω` for the single shared unknown suffix `Ω`.
    Tail(Vec<u8>),
    /// `p` followed by some unrelated unknown word.
    Open(Vec<u8>),
}

impl Val {
    pub fn prefix(&self) -> &[u8] {
        match self {
            Val::Known(p) | Val::Tail(p) | Val::Open(p) => p,
        }
    }

    pub fn concat(self, o: &Val) -> Val {
        match (self, o) {
            (Val::Known(mut a), Val::Known(b)) => {
                a.extend_from_slice(b);
                Val::Known(a)
            }
            (Val::Known(mut a), Val::Tail(b)) => {
                a.extend_from_slice(b);
                Val::Tail(a)
            }
            (Val::Known(mut a), Val::Open(b)) => {
                a.extend_from_slice(b);
                Val::Open(a)
            }
            (Val::Tail(a), Val::Known(b)) if b.is_empty() => Val::Tail(a),
            (Val::Tail(a), _) | (Val::Open(a), _) => Val::Open(a),
        }
    }
}

pub(crate) fn compatible(a: &[u8], b: &[u8]) -> bool {
    a.starts_with(b) || b.starts_with(a)
}

pub(crate) struct Engine<'p> {
    pub prog: &'p Program,
    pub model: &'p MonoidModel,
    pub free: bool,
    pub letters: usize,
    pub env: Vec<Option<Val>>,
    /// Maximum length of `Ω` while evaluating abstractly.
    pub omega: Option<usize>,
    pub nodes: u64,
    domains: HashMap<usize, Rc<Vec<Vec<u8>>>>,
    /// Concrete results of quantifier nodes keyed by their free values.
    memo: HashMap<(usize, Vec<Vec<u8>>), Tri>,
}

impl<'p> Engine<'p> {
    pub fn new(prog: &'p Program, model: &'p MonoidModel) -> Engine<'p> {
        Engine {
            prog,
            model,
            free: model.is_free(),
            letters: model.alphabet().len(),
            env: vec![None; prog.slots.len()],
            omega: None,
            nodes: 0,
            domains: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, id: usize) -> Tri {
        let prog = self.prog;
        match &prog.nodes[id].kind {
            Kind::Eq(a, b) => self.equation(a, b),
            Kind::Not(c) => self.eval(*c).not(),
            Kind::And(cs) => {
                let mut acc = Tri::T;
                for &c in cs {
                    acc = acc.and(self.eval(c));
                    if acc == Tri::F {
                        break;
                    }
                }
                acc
            }
            Kind::Or(cs) => {
                let mut acc = Tri::F;
                for &c in cs {
                    acc = acc.or(self.eval(c));
                    if acc == Tri::T {
                        break;
                    }
                }
                acc
            }
            Kind::Implies(a, b) => {
                let ra = self.eval(*a);
                if ra == Tri::F {
                    return Tri::T;
                }
                ra.not().or(self.eval(*b))
            }
            Kind::Exists(s, body) => self.memo_quantifier(id, *s, *body, true),
            Kind::Forall(s, body) => self.memo_quantifier(id, *s, *body, false),
        }
    }

    fn memo_quantifier(&mut self, id: usize, slot: usize, body: usize, exists: bool) -> Tri {
        if self.omega.is_some() {
            return self.quantifier(slot, body, exists);
        }
        let mut key = Vec::with_capacity(self.prog.nodes[id].free.len());
        for &v in &self.prog.nodes[id].free {
            match &self.env[v] {
                Some(Val::Known(k)) => key.push(k.clone()),
                _ => return self.quantifier(slot, body, exists),
            }
        }
        let key = (id, key);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = self.quantifier(slot, body, exists);
        self.memo.insert(key, r);
        r
    }

    pub fn seq_val(&self, seq: &Seq) -> Val {
        let mut acc = Val::Known(Vec::new());
        for a in seq {
            acc = match a {
                Atom::Const(k) => acc.concat(&Val::Known(k.clone())),
                Atom::Var(s) => {
                    let v = self.env[*s].as_ref().expect("variable bound before use");
                    acc.concat(v)
                }
            };
            if matches!(acc, Val::Open(_)) {
                break;
            }
        }
        acc
    }

    fn equation(&mut self, a: &Seq, b: &Seq) -> Tri {
        if self.omega.is_none() {
            return Tri::from_bool(self.concrete_eq(a, b));
        }
        let (va, vb) = (self.seq_val(a), self.seq_val(b));
        self.compare(&va, &vb)
    }

    fn concrete_eq(&self, a: &Seq, b: &Seq) -> bool {
        let wa = self.concrete_word(a);
        let wb = self.concrete_word(b);
        if self.free {
            wa == wb
        } else {
            self.model.normalize(&wa) == self.model.normalize(&wb)
        }
    }

    fn concrete_word(&self, seq: &Seq) -> Vec<u8> {
        let mut out = Vec::new();
        for a in seq {
            match a {
                Atom::Const(k) => out.extend_from_slice(k),
                Atom::Var(s) => match self.env[*s].as_ref() {
                    Some(Val::Known(k)) => out.extend_from_slice(k),
                    other => panic!("concrete evaluation met {other:?}"),
                },
            }
        }
        out
    }

    fn compare(&self, a: &Val, b: &Val) -> Tri {
        let omega = self.omega.unwrap_or(0);
        match (a, b) {
            (Val::Known(x), Val::Known(y)) => Tri::from_bool(x == y),
            (Val::Known(k), Val::Tail(t)) | (Val::Tail(t), Val::Known(k)) => {
                if k.starts_with(t) && k.len() - t.len() <= omega {
                    Tri::U
                } else {
                    Tri::F
                }
            }
            (Val::Tail(x), Val::Tail(y)) => Tri::from_bool(x == y),
            (Val::Known(k), Val::Open(o)) | (Val::Open(o), Val::Known(k)) => {
                if k.starts_with(o) {
                    Tri::U
                } else {
                    Tri::F
                }
            }
            (x, y) => {
                if compatible(x.prefix(), y.prefix()) {
                    Tri::U
                } else {
                    Tri::F
                }
            }
        }
    }

    fn domain(&mut self, bound: usize) -> Rc<Vec<Vec<u8>>> {
        if let Some(d) = self.domains.get(&bound) {
            return d.clone();
        }
        let d = Rc::new(self.model.elements_up_to(bound));
        self.domains.insert(bound, d.clone());
        d
    }

    /// Evaluates the body with `slot` bound to `v`, applying the domain
    /// caveat for partial values whose length may exceed the bound.
    fn try_value(&mut self, slot: usize, body: usize, v: Val, exists: bool) -> Tri {
        let bound = self.prog.slots[slot].bound;
        let risky = match &v {
            Val::Known(_) => false,
            Val::Tail(t) => t.len() + self.omega.unwrap_or(0) > bound,
            Val::Open(_) => true,
        };
        self.nodes += 1;
        self.env[slot] = Some(v);
        let r = self.eval(body);
        match (risky, exists, r) {
            (true, true, Tri::T) | (true, false, Tri::F) => Tri::U,
            _ => r,
        }
    }

    fn quantifier(&mut self, slot: usize, body: usize, exists: bool) -> Tri {
        let prog = self.prog;
        if !prog.nodes[body].mentions(slot) {
            return self.eval(body);
        }
        let saved = self.env[slot].take();
        let r = self.search(slot, body, exists);
        self.env[slot] = saved;
        r
    }

    fn search(&mut self, slot: usize, body: usize, exists: bool) -> Tri {
        let target = Tri::from_bool(exists);
        let bound = self.prog.slots[slot].bound;
        let mut acc = Tri::from_bool(!exists);
        let combine = |acc: Tri, r: Tri| if exists { acc.or(r) } else { acc.and(r) };

        if !self.free {
            let dom = self.domain(bound);
            for w in dom.iter() {
                acc = combine(
                    acc,
                    self.try_value(slot, body, Val::Known(w.clone()), exists),
                );
                if acc == target {
                    break;
                }
            }
            return acc;
        }

        let cand = self.guard(body, slot, exists);
        let mut items_seen: HashSet<Val> = HashSet::new();
        for item in cand.items {
            if item.prefix().len() > bound || !items_seen.insert(item.clone()) {
                continue;
            }
            if let Val::Known(k) = &item {
                if cand.open.as_ref().is_some_and(|q| k.starts_with(q)) {
                    // Covered by the open part below.
                    continue;
                }
            }
            acc = combine(acc, self.try_value(slot, body, item, exists));
            if acc == target {
                return acc;
            }
        }
        let Some(q) = cand.open else {
            return acc;
        };
        if q.len() > bound {
            return acc;
        }
        let count = count_up_to(self.letters, bound - q.len());
        let limit = if self.omega.is_some() {
            ABSTRACT_ENUM_LIMIT
        } else {
            ENUM_LIMIT
        };
        if count <= limit {
            for w in words_up_to(self.letters, bound - q.len()) {
                let mut v = q.clone();
                v.extend_from_slice(&w);
                acc = combine(acc, self.try_value(slot, body, Val::Known(v), exists));
                if acc == target {
                    return acc;
                }
            }
            acc
        } else if self.omega.is_some() {
            combine(acc, Tri::U)
        } else {
            let mut p = q;
            if self.dfs(slot, body, exists, &mut p) {
                target
            } else {
                acc
            }
        }
    }

    /// Prefix search over all words extending `p`; returns true once a
    /// value decides the quantifier.
    fn dfs(&mut self, slot: usize, body: usize, exists: bool, p: &mut Vec<u8>) -> bool {
        let bound = self.prog.slots[slot].bound;
        let target = Tri::from_bool(exists);
        if !self.prune_check(slot, body, exists, p, bound) {
            return false;
        }
        if self.try_value(slot, body, Val::Known(p.clone()), exists) == target {
            return true;
        }
        if p.len() < bound {
            for l in 0..self.letters as u8 {
                p.push(l);
                let hit = self.dfs(slot, body, exists, p);
                p.pop();
                if hit {
                    return true;
                }
            }
        }
        false
    }

    /// Abstract look-ahead: false when no extension of `p` can decide the
    /// quantifier.
    fn prune_check(
        &mut self,
        slot: usize,
        body: usize,
        exists: bool,
        p: &[u8],
        bound: usize,
    ) -> bool {
        let saved = self.omega.replace(bound - p.len());
        self.nodes += 1;
        self.env[slot] = Some(Val::Tail(p.to_vec()));
        let r = self.eval(body);
        self.omega = saved;
        r != Tri::from_bool(!exists)
    }

    /// Collects every tuple of values for `slots` that makes `chains[0]`
    /// true. `chains[i]` is the existential closure over `slots[i+1..]`.
    pub fn collect(
        &mut self,
        slots: &[usize],
        chains: &[usize],
        i: usize,
        cur: &mut Vec<Vec<u8>>,
        out: &mut Vec<Vec<Vec<u8>>>,
    ) {
        let slot = slots[i];
        let body = chains[i];
        let bound = self.prog.slots[slot].bound;
        let visit = |eng: &mut Engine<'p>,
                     v: Vec<u8>,
                     cur: &mut Vec<Vec<u8>>,
                     out: &mut Vec<Vec<Vec<u8>>>| {
            eng.nodes += 1;
            eng.env[slot] = Some(Val::Known(v.clone()));
            cur.push(v);
            if i + 1 == slots.len() {
                if eng.eval(body) == Tri::T {
                    out.push(cur.clone());
                }
            } else {
                eng.collect(slots, chains, i + 1, cur, out);
            }
            cur.pop();
        };

        if !self.free {
            let dom = self.domain(bound);
            for w in dom.iter() {
                visit(self, w.clone(), cur, out);
            }
            self.env[slot] = None;
            return;
        }

        let cand = self.guard(body, slot, true);
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        for item in cand.items {
            if let Val::Known(k) = item {
                if k.len() <= bound
                    && !cand.open.as_ref().is_some_and(|q| k.starts_with(q))
                    && seen.insert(k.clone())
                {
                    visit(self, k, cur, out);
                }
            }
        }
        if let Some(q) = cand.open {
            if q.len() <= bound {
                let count = count_up_to(self.letters, bound - q.len());
                if count <= ENUM_LIMIT {
                    for w in words_up_to(self.letters, bound - q.len()) {
                        let mut v = q.clone();
                        v.extend_from_slice(&w);
                        visit(self, v, cur, out);
                    }
                } else {
                    let mut stack = vec![q];
                    while let Some(p) = stack.pop() {
                        if !self.prune_check(slot, body, true, &p, bound) {
                            continue;
                        }
                        visit(self, p.clone(), cur, out);
                        if p.len() < bound {
                            for l in (0..self.letters as u8).rev() {
                                let mut c = p.clone();
                                c.push(l);
                                stack.push(c);
                            }
                        }
                    }
                }
            }
        }
        self.env[slot] = None;
    }
}
