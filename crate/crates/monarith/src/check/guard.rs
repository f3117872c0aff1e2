//! Candidate sets for quantified variables in free monoids.
//!
//! For a body `f` and variable `v`, `guard(f, v, true)` returns a set
//! outside of which `f` is false, and `guard(f, v, false)` one outside of
//! which `f` is true. Equations that pin `v` down (prefix, suffix or factor
//! of a known word, or a power of a primitive root) give small sets; all
//! other atoms fall back to the full domain.

use std::collections::HashSet;

use super::compile::{Atom, Kind, Seq};
use super::eval::{compatible, Engine, Val};

#[derive(Debug, Clone)]
pub(crate) struct Cand {
    pub items: Vec<Val>,
    /// Every word starting with this prefix.
    pub open: Option<Vec<u8>>,
}

impl Cand {
    pub fn all() -> Cand {
        Cand {
            items: Vec::new(),
            open: Some(Vec::new()),
        }
    }

    pub fn empty() -> Cand {
        Cand {
            items: Vec::new(),
            open: None,
        }
    }

    fn from_items(items: Vec<Val>) -> Cand {
        Cand { items, open: None }
    }

    fn is_all(&self) -> bool {
        self.open.as_ref().is_some_and(|q| q.is_empty())
    }

    fn is_empty(&self) -> bool {
        self.items.is_empty() && self.open.is_none()
    }

    fn covers(&self, v: &Val) -> bool {
        match (&self.open, v) {
            (None, _) => false,
            (Some(q), Val::Known(k)) => k.starts_with(q),
            (Some(q), other) => compatible(other.prefix(), q),
        }
    }

    /// True when some item of `self` may denote the same word as `v`.
    fn meets(&self, v: &Val) -> bool {
        self.items.iter().any(|x| match (x, v) {
            (a, b) if a == b => true,
            (Val::Tail(t), Val::Known(k)) => k.starts_with(t),
            (Val::Open(o), Val::Known(k)) => k.starts_with(o),
            (Val::Tail(a) | Val::Open(a), Val::Tail(b) | Val::Open(b)) => compatible(a, b),
            _ => false,
        })
    }

    pub fn union(mut self, o: Cand) -> Cand {
        let open = match (self.open, o.open) {
            (Some(a), Some(b)) => {
                let n = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
                Some(a[..n].to_vec())
            }
            (a, b) => a.or(b),
        };
        self.items.extend(o.items);
        Cand {
            items: self.items,
            open,
        }
    }

    pub fn intersect(self, o: Cand) -> Cand {
        let mut items = Vec::new();
        for x in &self.items {
            if o.covers(x) || o.meets(x) {
                items.push(x.clone());
            }
        }
        for y in &o.items {
            let known = matches!(y, Val::Known(_));
            if self.covers(y) || (known && self.meets(y)) {
                items.push(y.clone());
            }
        }
        let open = match (self.open, o.open) {
            (Some(a), Some(b)) if a.starts_with(&b) => Some(a),
            (Some(a), Some(b)) if b.starts_with(&a) => Some(b),
            _ => None,
        };
        Cand { items, open }
    }
}

#[derive(Debug, Clone)]
enum Seg {
    K(Vec<u8>),
    Tail(Vec<u8>),
    Open(Vec<u8>),
    Target,
    Unk,
}

impl Seg {
    fn known_len(&self) -> usize {
        match self {
            Seg::K(k) => k.len(),
            _ => 0,
        }
    }
}

/// `c·v = v·c` with `c` a nonempty known word: `v` is a power of the
/// primitive root of `c`.
fn commutation(sa: &[Seg], sb: &[Seg], bound: usize) -> Cand {
    let c = match (sa, sb) {
        ([Seg::K(c), Seg::Target], [Seg::Target, Seg::K(d)])
        | ([Seg::Target, Seg::K(c)], [Seg::K(d), Seg::Target])
            if c == d && !c.is_empty() =>
        {
            c
        }
        _ => return Cand::all(),
    };
    let root = primitive_root(c);
    let mut items = Vec::new();
    let mut w: Vec<u8> = Vec::new();
    while w.len() <= bound {
        items.push(Val::Known(w.clone()));
        w.extend_from_slice(root);
    }
    Cand::from_items(items)
}

fn primitive_root(c: &[u8]) -> &[u8] {
    (1..=c.len())
        .find(|&d| c.len() % d == 0 && c.chunks(d).all(|ch| ch == &c[..d]))
        .map_or(c, |d| &c[..d])
}

impl Engine<'_> {
    pub(crate) fn guard(&self, id: usize, slot: usize, pol: bool) -> Cand {
        let node = &self.prog.nodes[id];
        if !node.mentions(slot) {
            return Cand::all();
        }
        match &node.kind {
            Kind::Eq(a, b) => {
                if pol {
                    self.solve(a, b, slot)
                } else {
                    Cand::all()
                }
            }
            Kind::Not(c) => self.guard(*c, slot, !pol),
            Kind::And(cs) => self.fold(cs, slot, pol, pol),
            Kind::Or(cs) => self.fold(cs, slot, pol, !pol),
            Kind::Implies(a, b) => {
                if pol {
                    let ga = self.guard(*a, slot, false);
                    if ga.is_all() {
                        return ga;
                    }
                    ga.union(self.guard(*b, slot, true))
                } else {
                    let ga = self.guard(*a, slot, true);
                    if ga.is_empty() {
                        return ga;
                    }
                    ga.intersect(self.guard(*b, slot, false))
                }
            }
            Kind::Exists(_, body) | Kind::Forall(_, body) => self.guard(*body, slot, pol),
        }
    }

    fn fold(&self, cs: &[usize], slot: usize, pol: bool, meet: bool) -> Cand {
        let mut acc: Option<Cand> = None;
        for &c in cs {
            if !self.prog.nodes[c].mentions(slot) {
                // Such a child decides a join on its own.
                if meet {
                    continue;
                }
                return Cand::all();
            }
            let g = self.guard(c, slot, pol);
            acc = Some(match acc {
                None => g,
                Some(a) if meet => a.intersect(g),
                Some(a) => a.union(g),
            });
            let a = acc.as_ref().expect("just set");
            if (meet && a.is_empty()) || (!meet && a.is_all()) {
                break;
            }
        }
        acc.unwrap_or_else(Cand::all)
    }

    fn segs(&self, seq: &Seq, slot: usize) -> Vec<Seg> {
        let mut out: Vec<Seg> = Vec::new();
        let push_known = |out: &mut Vec<Seg>, k: &[u8]| {
            if let Some(Seg::K(prev)) = out.last_mut() {
                prev.extend_from_slice(k);
            } else {
                out.push(Seg::K(k.to_vec()));
            }
        };
        for a in seq {
            match a {
                Atom::Const(k) => push_known(&mut out, k),
                Atom::Var(s) if *s == slot => out.push(Seg::Target),
                Atom::Var(s) => match &self.env[*s] {
                    Some(Val::Known(k)) => {
                        if !k.is_empty() {
                            push_known(&mut out, k)
                        }
                    }
                    Some(Val::Tail(t)) => out.push(Seg::Tail(t.clone())),
                    Some(Val::Open(o)) => out.push(Seg::Open(o.clone())),
                    None => out.push(Seg::Unk),
                },
            }
        }
        out
    }

    fn solve(&self, a: &Seq, b: &Seq, slot: usize) -> Cand {
        let sa = self.segs(a, slot);
        let sb = self.segs(b, slot);
        let ta = sa.iter().any(|s| matches!(s, Seg::Target));
        let tb = sb.iter().any(|s| matches!(s, Seg::Target));
        match (ta, tb) {
            (true, true) => commutation(&sa, &sb, self.prog.slots[slot].bound),
            (true, false) => self.one_sided(&sa, &sb, slot),
            (false, true) => self.one_sided(&sb, &sa, slot),
            (false, false) => Cand::all(),
        }
    }

    fn one_sided(&self, s: &[Seg], d: &[Seg], slot: usize) -> Cand {
        let bound = self.prog.slots[slot].bound;
        if d.iter().any(|x| matches!(x, Seg::Unk | Seg::Target)) {
            if let [Seg::Target] = s {
                let mut prefix = Vec::new();
                for x in d {
                    match x {
                        Seg::K(k) => prefix.extend_from_slice(k),
                        Seg::Tail(t) | Seg::Open(t) => {
                            prefix.extend_from_slice(t);
                            break;
                        }
                        _ => break,
                    }
                }
                return Cand {
                    items: Vec::new(),
                    open: Some(prefix),
                };
            }
            return Cand::all();
        }
        let dv = d.iter().fold(Val::Known(Vec::new()), |acc, x| match x {
            Seg::K(k) => acc.concat(&Val::Known(k.clone())),
            Seg::Tail(t) => acc.concat(&Val::Tail(t.clone())),
            Seg::Open(o) => acc.concat(&Val::Open(o.clone())),
            _ => unreachable!(),
        });
        // Partial values on the target side are treated as opaque.
        let s: Vec<Seg> = s
            .iter()
            .map(|x| match x {
                Seg::Tail(_) | Seg::Open(_) => Seg::Unk,
                other => other.clone(),
            })
            .collect();
        let (a, first) = match &s[0] {
            Seg::K(k) => (k.as_slice(), 1),
            _ => (&[][..], 0),
        };
        let target_first = matches!(s[first], Seg::Target);
        match dv {
            Val::Known(dk) => self.solve_known(&s, a, first, target_first, &dk, bound),
            Val::Tail(t) => {
                if !target_first {
                    return if compatible(a, &t) {
                        Cand::all()
                    } else {
                        Cand::empty()
                    };
                }
                if t.starts_with(a) {
                    let rest = &t[a.len()..];
                    let after = &s[first + 1..];
                    if after.is_empty() {
                        return Cand::from_items(vec![Val::Tail(rest.to_vec())]);
                    }
                    let mut items = Vec::new();
                    for j in 0..=rest.len() {
                        let ok = match &after[0] {
                            Seg::K(k) => compatible(&rest[j..], k),
                            _ => true,
                        };
                        if ok {
                            items.push(Val::Known(rest[..j].to_vec()));
                        }
                    }
                    Cand {
                        items,
                        open: Some(rest.to_vec()),
                    }
                } else if a.starts_with(&t) {
                    Cand::all()
                } else {
                    Cand::empty()
                }
            }
            Val::Open(o) => {
                if !compatible(a, &o) {
                    return Cand::empty();
                }
                if target_first && o.starts_with(a) {
                    let rest = &o[a.len()..];
                    let mut items = Vec::new();
                    if first + 1 < s.len() {
                        items = (0..rest.len())
                            .map(|j| Val::Known(rest[..j].to_vec()))
                            .collect();
                    }
                    return Cand {
                        items,
                        open: Some(rest.to_vec()),
                    };
                }
                Cand::all()
            }
        }
    }

    fn solve_known(
        &self,
        s: &[Seg],
        a: &[u8],
        first: usize,
        target_first: bool,
        d: &[u8],
        bound: usize,
    ) -> Cand {
        if !d.starts_with(a) {
            return Cand::empty();
        }
        let c_end: &[u8] = match s.last() {
            Some(Seg::K(k)) if s.len() > first => k,
            _ => &[],
        };
        if s.len() - 1 > first && !d[a.len()..].ends_with(c_end) {
            return Cand::empty();
        }
        let occ = s.iter().filter(|x| matches!(x, Seg::Target)).count();
        let ksum: usize = s.iter().map(Seg::known_len).sum();
        let has_unk = s.iter().any(|x| matches!(x, Seg::Unk));
        if d.len() < ksum {
            return Cand::empty();
        }
        let free_len = d.len() - ksum;
        let max_j = (free_len / occ).min(bound);
        let fits = |j: usize| {
            if has_unk {
                occ * j <= free_len
            } else {
                occ * j == free_len
            }
        };

        if target_first {
            let r = &d[a.len()..];
            let next = match s.get(first + 1) {
                Some(Seg::K(k)) => Some(k.as_slice()),
                _ => None,
            };
            let items = (0..=max_j.min(r.len()))
                .filter(|&j| fits(j) && next.is_none_or(|k| r[j..].starts_with(k)))
                .map(|j| Val::Known(r[..j].to_vec()))
                .collect();
            return Cand::from_items(items);
        }

        let last = s
            .iter()
            .rposition(|x| !matches!(x, Seg::K(_)))
            .expect("target present");
        if matches!(s[last], Seg::Target) {
            let r = &d[..d.len() - c_end.len().min(d.len())];
            let r = if s.len() - 1 > last { r } else { d };
            let prev = match last.checked_sub(1).map(|p| &s[p]) {
                Some(Seg::K(k)) => Some(k.as_slice()),
                _ => None,
            };
            let items = (0..=max_j.min(r.len()))
                .filter(|&j| fits(j) && prev.is_none_or(|k| r[..r.len() - j].ends_with(k)))
                .map(|j| Val::Known(r[r.len() - j..].to_vec()))
                .collect();
            return Cand::from_items(items);
        }

        // Target strictly between other unknowns: any factor of `d`.
        let pos = s
            .iter()
            .position(|x| matches!(x, Seg::Target))
            .expect("target present");
        let prev = match pos.checked_sub(1).map(|p| &s[p]) {
            Some(Seg::K(k)) => Some(k.as_slice()),
            _ => None,
        };
        let next = match s.get(pos + 1) {
            Some(Seg::K(k)) => Some(k.as_slice()),
            _ => None,
        };
        let mut set: HashSet<&[u8]> = HashSet::new();
        for start in 0..=d.len() {
            if prev.is_some_and(|k| !d[..start].ends_with(k)) {
                continue;
            }
            for j in 0..=max_j.min(d.len() - start) {
                if next.is_some_and(|k| !d[start + j..].starts_with(k)) {
                    continue;
                }
                set.insert(&d[start..start + j]);
            }
        }
        let mut items: Vec<&[u8]> = set.into_iter().collect();
        items.sort_unstable();
        Cand::from_items(items.into_iter().map(|x| Val::Known(x.to_vec())).collect())
    }
}
