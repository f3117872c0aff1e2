//! Sequence codes in the naturals, the list superstructure over them, and
//! submonoid membership in free monoids.
//!
//! A tuple `(t1, ..., tn)` is coded as `pair(n, pair(t1, pair(t2, ... pair(tn, 0))))`
//! with the Cantor pairing. Since `pair(0, 0) = 0`, the length prefix is what
//! keeps the code injective.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};
use std::sync::Arc;

/// Longest tuple [`decode_tuple`] will materialize.
pub const MAX_DECODED_LEN: u128 = 1 << 16;

/// A finite sequence of naturals.
pub type NatTuple = Vec<u128>;

/// The code of a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqCode(pub u128);

impl fmt::Display for SeqCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Cantor pairing `(a + b)(a + b + 1)/2 + b`.
pub fn pair(a: u128, b: u128) -> Result<u128> {
    let s = a.checked_add(b).ok_or(Error::Overflow)?;
    let t = if s % 2 == 0 {
        (s / 2).checked_mul(s + 1)
    } else {
        s.checked_mul((s + 1) / 2)
    };
    t.and_then(|t| t.checked_add(b)).ok_or(Error::Overflow)
}

/// Inverse of [`pair`].
pub fn unpair(p: u128) -> (u128, u128) {
    // Largest s with s(s+1)/2 <= p, from a float guess corrected exactly.
    let mut s = (((8.0 * p as f64 + 1.0).sqrt() - 1.0) / 2.0) as u128;
    let tri = |s: u128| -> Option<u128> {
        if s % 2 == 0 {
            (s / 2).checked_mul(s + 1)
        } else {
            s.checked_mul((s + 1) / 2)
        }
    };
    while tri(s).is_none_or(|t| t > p) {
        s -= 1;
    }
    while tri(s + 1).is_some_and(|t| t <= p) {
        s += 1;
    }
    let b = p - tri(s).expect("checked above");
    (s - b, b)
}

pub fn encode_tuple(t: &[u128]) -> Result<SeqCode> {
    let mut fold = 0u128;
    for &x in t.iter().rev() {
        fold = pair(x, fold)?;
    }
    Ok(SeqCode(pair(t.len() as u128, fold)?))
}

/// Inverse of [`encode_tuple`]. A code whose fold has not reached `0` after
/// the announced number of entries is malformed.
pub fn decode_tuple(c: SeqCode) -> Result<NatTuple> {
    let (len, mut fold) = unpair(c.0);
    if len > MAX_DECODED_LEN {
        return Err(Error::MalformedCode(c.0));
    }
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let (x, rest) = unpair(fold);
        out.push(x);
        fold = rest;
    }
    if fold != 0 {
        return Err(Error::MalformedCode(c.0));
    }
    Ok(out)
}

/// The entry `s_i`, for `1 <= i <= l(s)`.
pub fn lss_position(s: &[u128], i: usize) -> Result<u128> {
    if i == 0 || i > s.len() {
        return Err(Error::OutOfRange {
            index: i,
            len: s.len(),
        });
    }
    Ok(s[i - 1])
}

pub fn lss_length(s: &[u128]) -> usize {
    s.len()
}

pub fn lss_concat(s: &[u128], r: &[u128]) -> NatTuple {
    s.iter().chain(r).copied().collect()
}

/// The three-sorted structure of tuples over the naturals with position,
/// length and concatenation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ListSuperstructure;

impl ListSuperstructure {
    /// `t(s, i, a)`.
    pub fn position(&self, s: &[u128], i: u128, a: u128) -> bool {
        usize::try_from(i)
            .ok()
            .and_then(|i| lss_position(s, i).ok())
            == Some(a)
    }

    /// `l(s) = n`.
    pub fn length(&self, s: &[u128], n: u128) -> bool {
        s.len() as u128 == n
    }

    /// `s ⌢ r = q`.
    pub fn concat(&self, s: &[u128], r: &[u128], q: &[u128]) -> bool {
        s.len() + r.len() == q.len() && q.starts_with(s) && q.ends_with(r)
    }

    /// `a` occurs in `s`.
    pub fn member(&self, a: u128, s: &[u128]) -> bool {
        s.contains(&a)
    }
}

/// Generator indices, counted from 1 in alphabet order.
pub fn monomial_to_tuple(m: &Word) -> NatTuple {
    m.letters().iter().map(|&l| u128::from(l) + 1).collect()
}

pub fn tuple_to_monomial(t: &[u128], alphabet: &Arc<Alphabet>) -> Result<Word> {
    let n = alphabet.len();
    let mut letters = Vec::with_capacity(t.len());
    for (i, &x) in t.iter().enumerate() {
        if x == 0 || x > n as u128 {
            return Err(Error::OutOfRange {
                index: i + 1,
                len: n,
            });
        }
        letters.push((x - 1) as u8);
    }
    Word::from_letters(alphabet, letters)
}

pub fn word_code(m: &Word) -> Result<SeqCode> {
    encode_tuple(&monomial_to_tuple(m))
}

/// Outcome of [`submonoid_member`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Indices into the generator list whose product is `g`, when a member.
    pub witness: Option<Vec<usize>>,
    /// Indices of empty generators that were ignored.
    pub dropped: Vec<usize>,
}

/// Decides `g ∈ ⟨gens⟩` in the free monoid. The witness is the
/// lexicographically least factorization by generator index.
pub fn submonoid_member(g: &Word, gens: &[Word]) -> Result<Membership> {
    for h in gens {
        if !h.same_alphabet(g) {
            return Err(Error::AlphabetMismatch);
        }
    }
    let dropped: Vec<usize> = gens
        .iter()
        .enumerate()
        .filter(|(_, h)| h.is_empty())
        .map(|(i, _)| i)
        .collect();
    let w = g.letters();
    let n = w.len();
    // done[p]: the suffix starting at p factors over the generators.
    let mut done = vec![false; n + 1];
    done[n] = true;
    let fits = |p: usize, h: &Word| !h.is_empty() && w[p..].starts_with(h.letters());
    for p in (0..n).rev() {
        done[p] = gens.iter().any(|h| fits(p, h) && done[p + h.len()]);
    }
    if !done[0] {
        return Ok(Membership {
            member: false,
            witness: None,
            dropped,
        });
    }
    let mut witness = Vec::new();
    let mut p = 0;
    while p < n {
        let j = (0..gens.len())
            .find(|&j| fits(p, &gens[j]) && done[p + gens[j].len()])
            .expect("a factorization exists");
        witness.push(j);
        p += gens[j].len();
    }
    Ok(Membership {
        member: true,
        witness: Some(witness),
        dropped,
    })
}

/// Codes of all elements of `⟨gens⟩` of length at most `bound`.
pub fn membership_code_set(gens: &[Word], bound: usize) -> Result<BTreeSet<SeqCode>> {
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    seen.insert(Vec::new());
    let mut frontier = vec![Vec::new()];
    while let Some(w) = frontier.pop() {
        for h in gens.iter().filter(|h| !h.is_empty()) {
            if w.len() + h.len() > bound {
                continue;
            }
            let mut next = w.clone();
            next.extend_from_slice(h.letters());
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.iter()
        .map(|w| encode_tuple(&w.iter().map(|&l| u128::from(l) + 1).collect::<Vec<_>>()))
        .collect()
}
