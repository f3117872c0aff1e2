use super::Gens;
use crate::error::{Error, Result};
use crate::monoid::{MonoidKind, MonoidModel};
use crate::word::Word;

fn run(out: &mut Vec<u8>, l: u8, k: usize) {
    out.extend(std::iter::repeat(l).take(k));
}

/// The word encoding `n * m` as a chain of blocks
/// `x2^2 x1^(n+1-i) x2 x1^(im+m+1)` for `i < n`, closed by `x2^2`.
/// For `n = 0` this is `x2^2 x1 x2 x1^(m+1) x2^2`.
pub fn mult_gadget_word(g: &Gens, n: usize, m: usize) -> Word {
    let (a, b) = (g.x1, g.x2);
    let mut w = Vec::new();
    if n == 0 {
        run(&mut w, b, 2);
        run(&mut w, a, 1);
        run(&mut w, b, 1);
        run(&mut w, a, m + 1);
        run(&mut w, b, 2);
    } else {
        for i in 0..n {
            run(&mut w, b, 2);
            run(&mut w, a, n + 1 - i);
            run(&mut w, b, 1);
            run(&mut w, a, i * m + m + 1);
        }
        run(&mut w, b, 2);
    }
    g.word(w)
}

/// `x1 x2 x1 x2^2`, the separator of the transfer word.
pub fn trans_separator(g: &Gens) -> Word {
    g.word(vec![g.x1, g.x2, g.x1, g.x2, g.x2])
}

/// `a x2 x1 a^2 x2^2 x1^2 a^3 ... x2^s x1^s a^(s+1)` with `a = x1 x2 x1 x2^2`.
pub fn f_word(g: &Gens, s: usize) -> Word {
    let a = trans_separator(g);
    let mut w = a.letters().to_vec();
    for j in 1..=s {
        run(&mut w, g.x2, j);
        run(&mut w, g.x1, j);
        for _ in 0..=j {
            w.extend_from_slice(a.letters());
        }
    }
    g.word(w)
}

/// `x1 x2^(t1+1) x1^2 x2^(t2+1) ... x1^m x2^(tm+1)`.
pub fn tuple_word(g: &Gens, t: &[usize]) -> Result<Word> {
    if t.is_empty() {
        return Err(Error::Param("tuple words need a nonempty tuple".into()));
    }
    let mut w = Vec::new();
    for (i, &ti) in t.iter().enumerate() {
        run(&mut w, g.x1, i + 1);
        run(&mut w, g.x2, ti + 1);
    }
    Ok(g.word(w))
}

/// `x2 x1 x2 x1^2 ... x2 x1^m`.
pub fn a_word(g: &Gens, m: usize) -> Result<Word> {
    if m == 0 {
        return Err(Error::Param("a-words need m >= 1".into()));
    }
    Ok(g.word(a_letters(g.x1, &[g.x2], m)))
}

fn a_letters(x1: u8, sep: &[u8], m: usize) -> Vec<u8> {
    let mut w = Vec::new();
    for i in 1..=m {
        w.extend_from_slice(sep);
        run(&mut w, x1, i);
    }
    w
}

/// Blocks `a^j s^j a^j` for `j = 1..=m+1`, the block for `j` preceded by the
/// first `j-1` letters of `monomial`, with `a` the a-word of `m = |monomial|`
/// and `s` the separator.
fn iso_letters(x1: u8, sep: &[u8], monomial: &[u8]) -> Vec<u8> {
    let m = monomial.len();
    let a = a_letters(x1, sep, m);
    let mut w = Vec::new();
    for j in 1..=m + 1 {
        w.extend_from_slice(&monomial[..j - 1]);
        for _ in 0..j {
            w.extend_from_slice(&a);
        }
        for _ in 0..j {
            w.extend_from_slice(sep);
        }
        for _ in 0..j {
            w.extend_from_slice(&a);
        }
    }
    w
}

/// The word pairing a tuple word with its monomial, built from the monomial.
pub fn iso_word(g: &Gens, monomial: &Word) -> Result<Word> {
    if !monomial.same_alphabet(&g.word(Vec::new())) {
        return Err(Error::AlphabetMismatch);
    }
    if monomial.is_empty() {
        return Err(Error::Param("the monomial must be nonempty".into()));
    }
    Ok(g.word(iso_letters(g.x1, &[g.x2], monomial.letters())))
}

/// Variant of [`iso_word`] for a trace monoid with trivial center: the first
/// generator plays `x1` and the product of all other generators plays `x2`.
pub fn iso_word_trace(model: &MonoidModel, monomial: &Word) -> Result<Word> {
    if !matches!(model.kind(), MonoidKind::Trace { .. }) {
        return Err(Error::WrongKind("iso-trace needs a trace monoid".into()));
    }
    if !model.center_is_trivial()? {
        return Err(Error::InvalidMonoid(
            "the commutation graph has a central vertex".into(),
        ));
    }
    if monomial.alphabet().names() != model.alphabet().names() {
        return Err(Error::AlphabetMismatch);
    }
    if monomial.is_empty() {
        return Err(Error::Param("the monomial must be nonempty".into()));
    }
    let n = model.alphabet().len() as u8;
    let sep: Vec<u8> = (1..n).collect();
    Word::from_letters(model.alphabet(), iso_letters(0, &sep, monomial.letters()))
}

/// The a-word of a trace monoid after the separator substitution.
pub fn a_word_trace(model: &MonoidModel, m: usize) -> Result<Word> {
    if m == 0 {
        return Err(Error::Param("a-words need m >= 1".into()));
    }
    let n = model.alphabet().len() as u8;
    let sep: Vec<u8> = (1..n).collect();
    Word::from_letters(model.alphabet(), a_letters(0, &sep, m))
}
