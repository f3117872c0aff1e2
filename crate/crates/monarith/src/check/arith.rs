use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature, Term};

pub type NatAssignment = BTreeMap<String, u64>;

fn term(t: &Term, env: &BTreeMap<String, u128>) -> Result<u128> {
    match t {
        Term::Var(v) => env.get(v).copied().ok_or_else(|| Error::Unbound(v.clone())),
        Term::Unit => Ok(1),
        Term::Num(n) => Ok(u128::from(*n)),
        Term::Plus(a, b) => term(a, env)?
            .checked_add(term(b, env)?)
            .ok_or(Error::Overflow),
        Term::Times(a, b) => term(a, env)?
            .checked_mul(term(b, env)?)
            .ok_or(Error::Overflow),
        Term::Word(_) | Term::Concat(..) => Err(Error::Sort(format!(
            "monoid term `{t}` in an arithmetic formula"
        ))),
    }
}

fn formula(f: &Formula, env: &mut BTreeMap<String, u128>, bound: u64) -> Result<bool> {
    Ok(match f {
        Formula::Eq(a, b) => term(a, env)? == term(b, env)?,
        Formula::Not(g) => !formula(g, env, bound)?,
        Formula::And(a, b) => formula(a, env, bound)? && formula(b, env, bound)?,
        Formula::Or(a, b) => formula(a, env, bound)? || formula(b, env, bound)?,
        Formula::Implies(a, b) => !formula(a, env, bound)? || formula(b, env, bound)?,
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let exists = matches!(f, Formula::Exists(..));
            let saved = env.get(v).copied();
            let mut result = !exists;
            for n in 0..=bound {
                env.insert(v.clone(), u128::from(n));
                let r = formula(g, env, bound);
                match r {
                    Ok(b) if b == exists => {
                        result = exists;
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        restore(env, v, saved);
                        return Err(e);
                    }
                }
            }
            restore(env, v, saved);
            result
        }
    })
}

fn restore(env: &mut BTreeMap<String, u128>, v: &str, saved: Option<u128>) {
    match saved {
        Some(x) => env.insert(v.to_string(), x),
        None => env.remove(v),
    };
}

/// Truth of an arithmetic formula with quantifiers ranging over `0..=bound`.
/// Terms are evaluated exactly.
pub fn eval_arith(f: &Formula, assignment: &NatAssignment, bound: u64) -> Result<bool> {
    f.check_sort(&Signature::Arithmetic)?;
    for v in f.free_vars() {
        if !assignment.contains_key(&v) {
            return Err(Error::Unbound(v));
        }
    }
    let mut env = assignment
        .iter()
        .map(|(k, v)| (k.clone(), u128::from(*v)))
        .collect();
    formula(f, &mut env, bound)
}

/// All tuples over `0..=bound` for `vars` satisfying `f`, in lexicographic order.
pub fn solutions_arith<S: AsRef<str>>(
    f: &Formula,
    vars: &[S],
    bound: u64,
) -> Result<Vec<Vec<u64>>> {
    f.check_sort(&Signature::Arithmetic)?;
    let names: Vec<&str> = vars.iter().map(AsRef::as_ref).collect();
    for v in f.free_vars() {
        if !names.contains(&v.as_str()) {
            return Err(Error::Unbound(v));
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; names.len()];
    loop {
        let mut env = names
            .iter()
            .zip(&cur)
            .map(|(k, v)| (k.to_string(), u128::from(*v)))
            .collect();
        if formula(f, &mut env, bound)? {
            out.push(cur.clone());
        }
        // Odometer increment, last position fastest.
        let mut i = names.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}
