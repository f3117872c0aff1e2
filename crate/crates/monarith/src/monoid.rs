//! Free, trace and Baumslag-Solitar monoids with canonical normal forms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{words_up_to, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidKind {
    Free,
    /// Commuting pairs, stored in both orientations.
    Trace {
        edges: BTreeSet<(u8, u8)>,
    },
    /// `<a, b | a b^k = b^m a>`.
    BaumslagSolitar {
        k: usize,
        m: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidModel {
    alphabet: Arc<Alphabet>,
    kind: MonoidKind,
}

impl MonoidModel {
    pub fn free(alphabet: Arc<Alphabet>) -> MonoidModel {
        MonoidModel {
            alphabet,
            kind: MonoidKind::Free,
        }
    }

    pub fn trace<S: AsRef<str>>(alphabet: Arc<Alphabet>, edges: &[(S, S)]) -> Result<MonoidModel> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            let lu = alphabet
                .letter(u.as_ref())
                .ok_or_else(|| Error::UnknownGenerator(u.as_ref().into()))?;
            let lv = alphabet
                .letter(v.as_ref())
                .ok_or_else(|| Error::UnknownGenerator(v.as_ref().into()))?;
            if lu == lv {
                return Err(Error::InvalidMonoid(format!("loop at `{}`", u.as_ref())));
            }
            set.insert((lu, lv));
            set.insert((lv, lu));
        }
        Ok(MonoidModel {
            alphabet,
            kind: MonoidKind::Trace { edges: set },
        })
    }

    pub fn baumslag_solitar(k: usize, m: usize) -> Result<MonoidModel> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidMonoid("k and m must be positive".into()));
        }
        let alphabet = Alphabet::new(&["a", "b"])?;
        Ok(MonoidModel {
            alphabet,
            kind: MonoidKind::BaumslagSolitar { k, m },
        })
    }

    /// Parses `free:x1,x2`, `trace:a,b,c;edges=a-c` or `bs:3,4`.
    pub fn parse_spec(spec: &str) -> Result<MonoidModel> {
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidMonoid(format!("missing `:` in `{spec}`")))?;
        match kind.trim() {
            "free" => {
                let names: Vec<&str> = rest.split(',').map(str::trim).collect();
                Ok(MonoidModel::free(Alphabet::new(&names)?))
            }
            "trace" => {
                let (gens, edges) = match rest.split_once(';') {
                    Some((g, e)) => (g, Some(e)),
                    None => (rest, None),
                };
                let names: Vec<&str> = gens.split(',').map(str::trim).collect();
                let alphabet = Alphabet::new(&names)?;
                let mut pairs = Vec::new();
                if let Some(e) = edges {
                    let e = e.trim();
                    let list = e.strip_prefix("edges=").ok_or_else(|| {
                        Error::InvalidMonoid(format!("expected `edges=` in `{e}`"))
                    })?;
                    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (u, v) = item
                            .split_once('-')
                            .ok_or_else(|| Error::InvalidMonoid(format!("bad edge `{item}`")))?;
                        pairs.push((u.trim().to_string(), v.trim().to_string()));
                    }
                }
                MonoidModel::trace(alphabet, &pairs)
            }
            "bs" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(Error::InvalidMonoid(format!(
                        "expected `bs:k,m`, got `{spec}`"
                    )));
                }
                let k = parts[0]
                    .parse()
                    .map_err(|_| Error::InvalidMonoid(spec.into()))?;
                let m = parts[1]
                    .parse()
                    .map_err(|_| Error::InvalidMonoid(spec.into()))?;
                MonoidModel::baumslag_solitar(k, m)
            }
            other => Err(Error::InvalidMonoid(format!(
                "unknown monoid kind `{other}`"
            ))),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn kind(&self) -> &MonoidKind {
        &self.kind
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, MonoidKind::Free)
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        Word::parse(&self.alphabet, text)
    }

    pub fn commute(&self, a: u8, b: u8) -> bool {
        match &self.kind {
            MonoidKind::Trace { edges } => a == b || edges.contains(&(a, b)),
            _ => a == b,
        }
    }

    /// Canonical representative of a letter sequence.
    pub fn normalize(&self, w: &[u8]) -> Vec<u8> {
        match &self.kind {
            MonoidKind::Free => w.to_vec(),
            MonoidKind::Trace { .. } => self.trace_nf(w),
            MonoidKind::BaumslagSolitar { k, m } => bs_nf(w, *k, *m),
        }
    }

    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        self.check(w)?;
        Word::from_letters(&self.alphabet, self.normalize(w.letters()))
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.normalize(u.letters()) == self.normalize(v.letters()))
    }

    fn check(&self, w: &Word) -> Result<()> {
        if w.alphabet().as_ref() != self.alphabet.as_ref() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    fn trace_nf(&self, w: &[u8]) -> Vec<u8> {
        let mut rest: Vec<u8> = w.to_vec();
        let mut out = Vec::with_capacity(w.len());
        while !rest.is_empty() {
            // The first occurrence of a letter can move to the front iff it
            // commutes with every letter before it; take the least such letter.
            let mut best: Option<(u8, usize)> = None;
            let mut seen: Vec<u8> = Vec::new();
            for (i, &c) in rest.iter().enumerate() {
                if seen.contains(&c) {
                    continue;
                }
                if rest[..i].iter().all(|&d| self.commute(c, d)) && best.is_none_or(|(b, _)| c < b)
                {
                    best = Some((c, i));
                }
                seen.push(c);
            }
            let (c, i) = best.expect("some letter is always available");
            out.push(c);
            rest.remove(i);
        }
        out
    }

    /// Normal forms of length at most `n`, in shortlex order.
    pub fn elements_up_to(&self, n: usize) -> Vec<Vec<u8>> {
        let all = words_up_to(self.alphabet.len(), n);
        match self.kind {
            MonoidKind::Free => all,
            _ => all
                .into_iter()
                .filter(|w| self.normalize(w) == *w)
                .collect(),
        }
    }

    /// True iff `w` is not the identity and has no factorization into two
    /// non-identity elements.
    pub fn is_irreducible(&self, w: &Word) -> Result<bool> {
        self.check(w)?;
        let nf = self.normalize(w.letters());
        if nf.is_empty() {
            return Ok(false);
        }
        match self.kind {
            // Length is invariant under commutations, so exactly the generators.
            MonoidKind::Free | MonoidKind::Trace { .. } => Ok(nf.len() == 1),
            MonoidKind::BaumslagSolitar { .. } => {
                let bound = w.len().max(nf.len());
                let elems = self.elements_up_to(bound);
                for u in elems.iter().filter(|u| !u.is_empty()) {
                    for v in elems.iter().filter(|v| !v.is_empty()) {
                        let mut uv = u.clone();
                        uv.extend_from_slice(v);
                        if self.normalize(&uv) == nf {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// True iff no vertex of the commutation graph is adjacent to all others.
    pub fn center_is_trivial(&self) -> Result<bool> {
        match &self.kind {
            MonoidKind::Trace { .. } => {
                let n = self.alphabet.len() as u8;
                let central = (0..n).any(|v| (0..n).all(|u| self.commute(u, v)));
                Ok(!central)
            }
            _ => Err(Error::WrongKind(
                "center_is_trivial needs a trace monoid".into(),
            )),
        }
    }
}

impl fmt::Display for MonoidModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.alphabet.names().join(",");
        match &self.kind {
            MonoidKind::Free => write!(f, "free:{names}"),
            MonoidKind::Trace { edges } => {
                let list: Vec<String> = edges
                    .iter()
                    .filter(|(a, b)| a < b)
                    .map(|&(a, b)| format!("{}-{}", self.alphabet.name(a), self.alphabet.name(b)))
                    .collect();
                write!(f, "trace:{names};edges={}", list.join(","))
            }
            MonoidKind::BaumslagSolitar { k, m } => write!(f, "bs:{k},{m}"),
        }
    }
}

/// Single-rule rewriting for `a b^k = b^m a` with `a = 0`, `b = 1`.
/// Oriented `b^m a -> a b^k` when `m >= k`, otherwise `a b^k -> b^m a`.
fn bs_nf(w: &[u8], k: usize, m: usize) -> Vec<u8> {
    let (lhs, rhs) = bs_rule(k, m);
    let mut cur = w.to_vec();
    loop {
        let pos = cur.windows(lhs.len()).position(|x| x == lhs.as_slice());
        match pos {
            None => return cur,
            Some(i) => {
                let mut next = Vec::with_capacity(cur.len() + rhs.len());
                next.extend_from_slice(&cur[..i]);
                next.extend_from_slice(&rhs);
                next.extend_from_slice(&cur[i + lhs.len()..]);
                cur = next;
            }
        }
    }
}

/// The oriented rule `(lhs, rhs)` over letters `a = 0`, `b = 1`.
pub fn bs_rule(k: usize, m: usize) -> (Vec<u8>, Vec<u8>) {
    let abk: Vec<u8> = std::iter::once(0)
        .chain(std::iter::repeat(1).take(k))
        .collect();
    let bma: Vec<u8> = std::iter::repeat(1)
        .take(m)
        .chain(std::iter::once(0))
        .collect();
    if m >= k {
        (bma, abk)
    } else {
        (abk, bma)
    }
}

/// Membership in the set of non-trivial subwords of `x1^i x2^j ...` words
/// (`j` in {1, 2}) for the letters `l1`, `l2`.
pub fn is_in_s_letters(w: &[u8], l1: u8, l2: u8) -> bool {
    !w.is_empty()
        && w.iter().all(|&c| c == l1 || c == l2)
        && !w.windows(3).any(|x| x.iter().all(|&c| c == l2))
}

/// `is_in_s_letters` with the generators named `x1` and `x2`.
pub fn is_in_s(w: &Word) -> bool {
    let a = w.alphabet();
    match (a.letter("x1"), a.letter("x2")) {
        (Some(l1), Some(l2)) => is_in_s_letters(w.letters(), l1, l2),
        _ => false,
    }
}

pub fn factor_occurs(w: &Word, f: &Word) -> bool {
    w.has_factor(f)
}

pub fn is_prefix(w: &Word, p: &Word) -> bool {
    w.has_prefix(p)
}

pub fn is_suffix(w: &Word, s: &Word) -> bool {
    w.has_suffix(s)
}
