//! Alphabets and words.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered, duplicate-free list of generator names. The order of
/// `names` is the alphabet order used by normal forms and enumeration.
#[derive(Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, u8>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Alphabet>> {
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        if names.len() > 255 {
            return Err(Error::InvalidAlphabet("too many generators".into()));
        }
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().trim().to_string();
            if !valid_name(&n) {
                return Err(Error::InvalidAlphabet(format!("bad generator name `{n}`")));
            }
            if index.insert(n.clone(), i as u8).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate generator `{n}`")));
            }
            out.push(n);
        }
        Ok(Arc::new(Alphabet { names: out, index }))
    }

    /// `x1, ..., xn`.
    pub fn standard(n: usize) -> Arc<Alphabet> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        Alphabet::new(&names).expect("standard alphabet")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, letter: u8) -> &str {
        &self.names[letter as usize]
    }

    pub fn letter(&self, name: &str) -> Option<u8> {
        self.index.get(name).copied()
    }
}

pub(crate) fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite sequence of generators of a fixed alphabet.
#[derive(Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<u8>,
}

impl Word {
    pub fn empty(alphabet: &Arc<Alphabet>) -> Word {
        Word {
            alphabet: alphabet.clone(),
            letters: Vec::new(),
        }
    }

    pub fn from_letters(alphabet: &Arc<Alphabet>, letters: Vec<u8>) -> Result<Word> {
        if letters.iter().any(|&l| l as usize >= alphabet.len()) {
            return Err(Error::InvalidWord(format!("{letters:?}")));
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters,
        })
    }

    pub fn generator(alphabet: &Arc<Alphabet>, name: &str) -> Result<Word> {
        let l = alphabet
            .letter(name)
            .ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        Ok(Word {
            alphabet: alphabet.clone(),
            letters: vec![l],
        })
    }

    /// Parses `x1.x2.x1`, `1` (the empty word) or power tokens such as `x1^3`.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word> {
        let text = text.trim();
        let mut letters = Vec::new();
        if text == "1" || text.is_empty() {
            return Ok(Word::empty(alphabet));
        }
        for tok in text.split('.') {
            let tok = tok.trim();
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: usize = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidWord(text.into()))?;
                    (n.trim(), e)
                }
                None => (tok, 1),
            };
            if name == "1" {
                continue;
            }
            let l = alphabet
                .letter(name)
                .ok_or_else(|| Error::UnknownGenerator(name.into()))?;
            letters.extend(std::iter::repeat(l).take(exp));
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn same_alphabet(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    /// Juxtaposition. No normalization is applied.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters,
        })
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word {
            alphabet: self.alphabet.clone(),
            letters,
        }
    }

    pub fn has_factor(&self, f: &Word) -> bool {
        has_factor(&self.letters, &f.letters)
    }

    pub fn has_prefix(&self, f: &Word) -> bool {
        self.letters.starts_with(&f.letters)
    }

    pub fn has_suffix(&self, f: &Word) -> bool {
        self.letters.ends_with(&f.letters)
    }

    /// Power notation, e.g. `x2^2.x1`.
    pub fn power_notation(&self) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let name = self.alphabet.name(l);
            if j - i == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join(".")
    }
}

pub fn has_factor(w: &[u8], f: &[u8]) -> bool {
    f.is_empty() || w.windows(f.len()).any(|x| x == f)
}

impl PartialEq for Word {
    fn eq(&self, other: &Word) -> bool {
        self.letters == other.letters && self.same_alphabet(other)
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order: by length, then lexicographically in alphabet order.
impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        shortlex(&self.letters, &other.letters)
    }
}

pub fn shortlex(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", self.alphabet.name(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// All letter sequences of length exactly `n`, in lexicographic order.
pub fn words_of_length(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * k);
        for w in &out {
            for l in 0..k as u8 {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All letter sequences of length at most `n`, in shortlex order.
pub fn words_up_to(k: usize, n: usize) -> Vec<Vec<u8>> {
    (0..=n).flat_map(|len| words_of_length(k, len)).collect()
}

/// Number of words of length at most `n` over `k` letters, saturating.
pub fn count_up_to(k: usize, n: usize) -> usize {
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..=n {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k);
    }
    total
}
