use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Term};

/// `base_k` for the smallest `k >= 1` not in `avoid`. A trailing `_k`
/// suffix of `base` is stripped first so renaming never stacks suffixes.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = stem(base);
    (1..)
        .map(|k| format!("{stem}_{k}"))
        .find(|c| !avoid.contains(c))
        .expect("infinitely many candidates")
}

pub(crate) fn stem(name: &str) -> &str {
    match name.rsplit_once('_') {
        Some((s, k)) if !s.is_empty() && !k.is_empty() && k.chars().all(|c| c.is_ascii_digit()) => {
            s
        }
        _ => name,
    }
}

/// Capture-avoiding substitution `f[var := t]`.
pub fn substitute(f: &Formula, var: &str, t: &Term) -> Formula {
    let mut map = BTreeMap::new();
    map.insert(var.to_string(), t.clone());
    substitute_all(f, &map)
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_all(f: &Formula, map: &BTreeMap<String, Term>) -> Formula {
    let mut avoid = f.all_vars();
    for t in map.values() {
        t.vars(&mut avoid);
    }
    avoid.extend(map.keys().cloned());
    subst(f, map, &mut avoid)
}

fn subst_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Word(_) | Term::Unit | Term::Num(_) => t.clone(),
        Term::Concat(a, b) => {
            Term::Concat(Box::new(subst_term(a, map)), Box::new(subst_term(b, map)))
        }
        Term::Plus(a, b) => Term::Plus(Box::new(subst_term(a, map)), Box::new(subst_term(b, map))),
        Term::Times(a, b) => {
            Term::Times(Box::new(subst_term(a, map)), Box::new(subst_term(b, map)))
        }
    }
}

fn subst(f: &Formula, map: &BTreeMap<String, Term>, avoid: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, map), subst_term(b, map)),
        Formula::Not(g) => Formula::Not(Box::new(subst(g, map, avoid))),
        Formula::And(a, b) => Formula::And(
            Box::new(subst(a, map, avoid)),
            Box::new(subst(b, map, avoid)),
        ),
        Formula::Or(a, b) => Formula::Or(
            Box::new(subst(a, map, avoid)),
            Box::new(subst(b, map, avoid)),
        ),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(subst(a, map, avoid)),
            Box::new(subst(b, map, avoid)),
        ),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let mut inner = map.clone();
            inner.remove(v);
            let captures = {
                let free = g.free_vars();
                inner.iter().any(|(k, t)| {
                    if !free.contains(k) {
                        return false;
                    }
                    let mut vs = BTreeSet::new();
                    t.vars(&mut vs);
                    vs.contains(v)
                })
            };
            let (name, body) = if captures {
                let fresh = fresh_name(v, avoid);
                avoid.insert(fresh.clone());
                let mut rename = BTreeMap::new();
                rename.insert(v.clone(), Term::Var(fresh.clone()));
                let renamed = subst(g, &rename, avoid);
                (fresh, renamed)
            } else {
                (v.clone(), (**g).clone())
            };
            let body = if inner.is_empty() {
                body
            } else {
                subst(&body, &inner, avoid)
            };
            match f {
                Formula::Exists(..) => Formula::Exists(name, Box::new(body)),
                _ => Formula::Forall(name, Box::new(body)),
            }
        }
    }
}
