use std::collections::{BTreeMap, BTreeSet};

use super::subst::{fresh_name, substitute_all};
use super::{Formula, HierarchyLevel, Term};

/// Eliminates `->` and pushes negations down to equations.
pub fn nnf(f: &Formula) -> Formula {
    to_nnf(f, false)
}

fn to_nnf(f: &Formula, neg: bool) -> Formula {
    match f {
        Formula::Eq(..) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => to_nnf(g, !neg),
        Formula::And(a, b) => {
            let (a, b) = (to_nnf(a, neg), to_nnf(b, neg));
            if neg {
                Formula::or(a, b)
            } else {
                Formula::and(a, b)
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (to_nnf(a, neg), to_nnf(b, neg));
            if neg {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (to_nnf(a, !neg), to_nnf(b, neg));
            if neg {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        Formula::Exists(v, g) => {
            let g = to_nnf(g, neg);
            if neg {
                Formula::forall(v, g)
            } else {
                Formula::exists(v, g)
            }
        }
        Formula::Forall(v, g) => {
            let g = to_nnf(g, neg);
            if neg {
                Formula::exists(v, g)
            } else {
                Formula::forall(v, g)
            }
        }
    }
}

/// Prenex normal form. Quantifiers are pulled out left to right,
/// outermost first; a bound variable is renamed (`v_k`) only when its
/// name was already used by a free variable or an earlier binder.
pub fn prenex(f: &Formula) -> Formula {
    let g = nnf(f);
    let mut used = g.free_vars();
    let mut all = g.all_vars();
    let (prefix, matrix) = pull(&g, &mut used, &mut all);
    prefix
        .into_iter()
        .rev()
        .fold(matrix, |acc, (universal, v)| {
            if universal {
                Formula::forall(&v, acc)
            } else {
                Formula::exists(&v, acc)
            }
        })
}

type Prefix = Vec<(bool, String)>;

fn pull(f: &Formula, used: &mut BTreeSet<String>, all: &mut BTreeSet<String>) -> (Prefix, Formula) {
    match f {
        Formula::Eq(..) | Formula::Not(_) => (Vec::new(), f.clone()),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (mut pa, ma) = pull(a, used, all);
            let (pb, mb) = pull(b, used, all);
            pa.extend(pb);
            let m = match f {
                Formula::And(..) => Formula::and(ma, mb),
                _ => Formula::or(ma, mb),
            };
            (pa, m)
        }
        Formula::Implies(..) => pull(&nnf(f), used, all),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let (name, body) = if used.contains(v) {
                let fresh = fresh_name(v, all);
                all.insert(fresh.clone());
                let mut map = BTreeMap::new();
                map.insert(v.clone(), Term::Var(fresh.clone()));
                (fresh, substitute_all(g, &map))
            } else {
                (v.clone(), (**g).clone())
            };
            used.insert(name.clone());
            let (mut rest, m) = pull(&body, used, all);
            let mut prefix = vec![(universal, name)];
            prefix.append(&mut rest);
            (prefix, m)
        }
    }
}

fn prefix_of(f: &Formula) -> Option<Vec<bool>> {
    let mut out = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Exists(_, g) => {
                out.push(false);
                cur = g;
            }
            Formula::Forall(_, g) => {
                out.push(true);
                cur = g;
            }
            _ => break,
        }
    }
    if cur.is_quantifier_free() {
        Some(out)
    } else {
        None
    }
}

/// Sigma/Pi level of the quantifier prefix; non-prenex input is put in
/// prenex form first.
pub fn classify(f: &Formula) -> HierarchyLevel {
    let prefix = match prefix_of(f) {
        Some(p) => p,
        None => prefix_of(&prenex(f)).expect("prenex output is prenex"),
    };
    if prefix.is_empty() {
        return HierarchyLevel::QuantifierFree;
    }
    let blocks = 1 + prefix.windows(2).filter(|w| w[0] != w[1]).count();
    if prefix[0] {
        HierarchyLevel::Pi(blocks)
    } else {
        HierarchyLevel::Sigma(blocks)
    }
}
