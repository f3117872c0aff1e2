use std::fmt;

use super::{Formula, Term};

// Printing is the inverse of parsing: left-nested chains print without
// parentheses, anything else that is compound gets parenthesized.

fn prec(t: &Term) -> u8 {
    match t {
        Term::Plus(..) => 1,
        Term::Times(..) => 2,
        Term::Concat(..) => 3,
        _ => 4,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if prec(t) >= min {
        write!(f, "{t}")
    } else {
        write!(f, "({t})")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Word(g) => write!(f, "'{}'", g.join(".")),
            Term::Unit => write!(f, "1"),
            Term::Num(n) => write!(f, "{n}"),
            Term::Concat(a, b) => {
                write_operand(f, a, 3)?;
                write!(f, ".")?;
                write_operand(f, b, 4)
            }
            Term::Times(a, b) => {
                write_operand(f, a, 2)?;
                write!(f, " * ")?;
                write_operand(f, b, 3)
            }
            Term::Plus(a, b) => {
                write_operand(f, a, 1)?;
                write!(f, " + ")?;
                write_operand(f, b, 2)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => match g.as_ref() {
                Formula::Eq(..) => write!(f, "!({g})"),
                _ => write!(f, "!{g}"),
            },
            Formula::And(a, b) => write_chain(f, self, "&", a, b),
            Formula::Or(a, b) => write_chain(f, self, "|", a, b),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists(v, g) => write!(f, "E {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "A {v}. {g}"),
        }
    }
}

fn write_chain(
    f: &mut fmt::Formatter<'_>,
    node: &Formula,
    op: &str,
    a: &Formula,
    b: &Formula,
) -> fmt::Result {
    // Flatten the left spine of the same connective: ((p & q) & r) prints as (p & q & r).
    let mut items = vec![b];
    let mut cur = a;
    loop {
        match (node, cur) {
            (Formula::And(..), Formula::And(x, y)) | (Formula::Or(..), Formula::Or(x, y)) => {
                items.push(y);
                cur = x;
            }
            _ => break,
        }
    }
    items.push(cur);
    items.reverse();
    write!(f, "(")?;
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write!(f, "{it}")?;
    }
    write!(f, ")")
}
