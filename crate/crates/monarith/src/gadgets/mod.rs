//! Gadget words and their defining formulas, with exact witness bounds.
//!
//! Every gadget is uniform in the choice of the two distinguished
//! generators, carried by [`Gens`].

mod formulas;
mod words;

use std::sync::Arc;

pub use formulas::{
    add, b_pairs, basis, centralizer, concat, f_formula, f_formula_with, in_s, iso_theta0,
    iso_theta1, length, member_in, mult, mult_gadget, mult_gadget_with, mult_with, orbit, position,
    trans, trans_noparam, trans_psi, trans_psi_with, trans_with, tuple,
};
pub use words::{
    a_word, a_word_trace, f_word, iso_word, iso_word_trace, mult_gadget_word, trans_separator,
    tuple_word,
};

use crate::check::Bound;
use crate::error::{Error, Result};
use crate::formula::{classify, Formula, HierarchyLevel};
use crate::monoid::MonoidModel;
use crate::word::{Alphabet, Word};

/// An alphabet with two distinguished generators playing `x1` and `x2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gens {
    alphabet: Arc<Alphabet>,
    pub x1: u8,
    pub x2: u8,
}

impl Gens {
    /// `x1, ..., xn` with the first two distinguished.
    pub fn standard(n: usize) -> Result<Gens> {
        if n < 2 {
            return Err(Error::Param("need at least two generators".into()));
        }
        Ok(Gens {
            alphabet: Alphabet::standard(n),
            x1: 0,
            x2: 1,
        })
    }

    pub fn new(alphabet: Arc<Alphabet>, x1: &str, x2: &str) -> Result<Gens> {
        let l1 = alphabet
            .letter(x1)
            .ok_or_else(|| Error::UnknownGenerator(x1.into()))?;
        let l2 = alphabet
            .letter(x2)
            .ok_or_else(|| Error::UnknownGenerator(x2.into()))?;
        if l1 == l2 {
            return Err(Error::Param(
                "the distinguished generators must differ".into(),
            ));
        }
        Ok(Gens {
            alphabet,
            x1: l1,
            x2: l2,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn model(&self) -> MonoidModel {
        MonoidModel::free(self.alphabet.clone())
    }

    pub fn word(&self, letters: Vec<u8>) -> Word {
        Word::from_letters(&self.alphabet, letters).expect("gadget letters are in the alphabet")
    }

    /// `x1^k`.
    pub fn p1(&self, k: usize) -> Word {
        self.word(vec![self.x1; k])
    }

    /// `x2^k`.
    pub fn p2(&self, k: usize) -> Word {
        self.word(vec![self.x2; k])
    }

    fn c1(&self) -> String {
        format!("'{}'", self.alphabet.name(self.x1))
    }

    fn c2(&self) -> String {
        format!("'{}'", self.alphabet.name(self.x2))
    }

    fn others(&self) -> Vec<String> {
        (0..self.alphabet.len() as u8)
            .filter(|&l| l != self.x1 && l != self.x2)
            .map(|l| format!("'{}'", self.alphabet.name(l)))
            .collect()
    }

    fn all(&self) -> Vec<String> {
        self.alphabet
            .names()
            .iter()
            .map(|n| format!("'{n}'"))
            .collect()
    }
}

/// A word as a formula constant, `1` for the empty word.
pub(crate) fn quote(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        format!("'{w}'")
    }
}

/// Gadget names accepted by [`instance`].
pub const CATALOGUE: [&str; 16] = [
    "centralizer",
    "in-s",
    "mult",
    "trans",
    "basis",
    "trans-noparam",
    "tuple",
    "position",
    "in",
    "length",
    "concat",
    "a-word",
    "b-pairs",
    "iso",
    "iso-trace",
    "orbit",
];

/// A gadget formula together with an instance word and sound bounds.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    /// The defining formula; absent for word-only entries.
    pub formula: Option<Formula>,
    /// Free variables of the formula, in argument order.
    pub vars: Vec<String>,
    /// The intended element for the given parameters, if the gadget has one.
    pub word: Option<Word>,
    /// Exact length of the instance word (0 when there is none).
    pub witness_bound: usize,
    /// Quantifier bounds sufficient to verify the instance.
    pub bound: Bound,
}

impl Instance {
    pub fn level(&self) -> Option<HierarchyLevel> {
        self.formula.as_ref().map(classify)
    }
}

fn nat(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Param(format!("expected a natural number, got `{s}`")))
}

fn nat_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(nat).collect()
}

fn arg<'a>(args: &'a [String], i: usize, what: &str) -> Result<&'a str> {
    args.get(i)
        .map(String::as_str)
        .ok_or_else(|| Error::Param(format!("missing parameter: {what}")))
}

/// Length of the transfer word needed to read entries up to `max_entry`.
pub fn trans_bound(g: &Gens, max_entry: usize) -> usize {
    f_word(g, max_entry.max(1)).len()
}

/// Builds the catalogue entry `name` with textual parameters.
pub fn instance(g: &Gens, name: &str, args: &[String]) -> Result<Instance> {
    let mk = |formula: Option<Formula>, vars: &[&str], word: Option<Word>, bound: Bound| {
        let witness_bound = word.as_ref().map_or(0, Word::len);
        Instance {
            name: name.to_string(),
            formula,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            word,
            witness_bound,
            bound,
        }
    };
    let opt_word = |i: usize| -> Result<Option<Word>> {
        args.get(i)
            .map(|s| Word::parse(g.alphabet(), s))
            .transpose()
    };
    let inst = match name {
        "centralizer" => {
            let c = match args.first() {
                Some(s) => Word::parse(g.alphabet(), s)?,
                None => g.p1(1),
            };
            mk(Some(centralizer(&c)), &["y"], None, Bound::new(0))
        }
        "in-s" => {
            let w = opt_word(0)?;
            let b = w.as_ref().map_or(0, Word::len);
            mk(Some(in_s(g)), &["y"], w, Bound::new(b))
        }
        "basis" => {
            let w = opt_word(0)?;
            let b = w.as_ref().map_or(1, Word::len);
            mk(Some(basis()), &["x"], w, Bound::new(b))
        }
        "mult" => {
            let n = nat(arg(args, 0, "n")?)?;
            let m = nat(arg(args, 1, "m")?)?;
            let w = mult_gadget_word(g, n, m);
            let b = w.len();
            mk(
                Some(mult_gadget(g)),
                &["x", "y", "w"],
                Some(w),
                Bound::new(b),
            )
        }
        "trans" => {
            let s = nat(arg(args, 0, "s")?)?;
            if s == 0 {
                return Err(Error::Param("transfer words start at s = 1".into()));
            }
            let w = f_word(g, s);
            let b = w.len();
            mk(Some(trans(g)), &["x", "y"], Some(w), Bound::new(b))
        }
        "trans-noparam" => {
            let s = match args.first() {
                Some(a) => nat(a)?,
                None => 1,
            };
            let b = trans_bound(g, s);
            mk(
                Some(trans_noparam()),
                &["x", "y"],
                None,
                Bound::new(b).with_free(s),
            )
        }
        "tuple" | "position" | "in" | "length" => {
            let t = nat_list(arg(args, 0, "tuple")?)?;
            let w = tuple_word(g, &t)?;
            let max = t.iter().copied().max().unwrap_or(0);
            let tb = trans_bound(g, max);
            let bound = Bound::new(w.len().max(tb)).with("f", tb);
            match name {
                "tuple" => mk(Some(tuple(g)), &["x"], Some(w), bound),
                "position" => mk(Some(position(g)), &["x", "y", "z"], Some(w), bound),
                "in" => mk(Some(member_in(g)), &["x", "y"], Some(w), bound),
                _ => mk(Some(length(g)), &["x", "y"], Some(w), bound),
            }
        }
        "concat" => {
            let t1 = nat_list(arg(args, 0, "first tuple")?)?;
            let t2 = nat_list(arg(args, 1, "second tuple")?)?;
            tuple_word(g, &t1)?;
            tuple_word(g, &t2)?;
            let joined: Vec<usize> = t1.iter().chain(&t2).copied().collect();
            let w = tuple_word(g, &joined)?;
            let b = w.len();
            mk(Some(concat(g)), &["x", "y", "z"], Some(w), Bound::new(b))
        }
        "a-word" | "b-pairs" => {
            let m = nat(arg(args, 0, "m")?)?;
            let w = a_word(g, m)?;
            let b = w.len();
            mk(Some(b_pairs(g)), &["a", "y"], Some(w), Bound::new(b))
        }
        "iso" => {
            let monomial = Word::parse(g.alphabet(), arg(args, 0, "monomial")?)?;
            let w = iso_word(g, &monomial)?;
            let b = w.len();
            let t: Vec<usize> = monomial.letters().iter().map(|&l| l as usize + 1).collect();
            let max = t.iter().copied().max().unwrap_or(1);
            let tb = trans_bound(g, max.max(monomial.len() + 1));
            mk(
                Some(iso_theta1(g)),
                &["x", "y"],
                Some(w),
                Bound::new(b.max(tb)).with("f", tb),
            )
        }
        "iso-trace" => {
            let spec = args.get(1).map_or("trace:v1,v2,v3", String::as_str);
            let model = MonoidModel::parse_spec(spec)?;
            let monomial = Word::parse(model.alphabet(), arg(args, 0, "monomial")?)?;
            let w = iso_word_trace(&model, &monomial)?;
            let b = w.len();
            mk(None, &["x", "y"], Some(w), Bound::new(b))
        }
        "orbit" => {
            let words: Vec<Word> = match args.first() {
                None => return Err(Error::Param("missing parameter: word".into())),
                Some(_) => args
                    .iter()
                    .map(|s| Word::parse(g.alphabet(), s))
                    .collect::<Result<_>>()?,
            };
            let b = words.iter().map(Word::len).max().unwrap_or(0);
            let vars: Vec<String> = if words.len() == 1 {
                vec!["x".into()]
            } else {
                (1..=words.len()).map(|k| format!("x_{k}")).collect()
            };
            let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            let f = orbit(&words);
            let w = if words.len() == 1 {
                Some(words[0].clone())
            } else {
                None
            };
            let mut i = mk(Some(f), &var_refs, w, Bound::new(b));
            i.witness_bound = b;
            i
        }
        other => {
            return Err(Error::Param(format!(
                "unknown gadget `{other}`; known: {}",
                CATALOGUE.join(", ")
            )));
        }
    };
    Ok(inst)
}
