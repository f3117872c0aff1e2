//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's search or rewriting code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use monarith::formula::Term;
use monarith::gadgets::Gens;
use monarith::word::words_up_to;
use monarith::{Alphabet, Formula, MonoidModel, Word};

pub fn std_gens(n: usize) -> Gens {
    Gens::standard(n).unwrap()
}

pub fn w(a: &Arc<Alphabet>, s: &str) -> Word {
    Word::parse(a, s).unwrap()
}

pub fn x1_pow(g: &Gens, k: usize) -> Word {
    g.p1(k)
}

/// All words reachable from `w` by swapping adjacent commuting letters.
pub fn commutation_class(w: &[u8], commute: &dyn Fn(u8, u8) -> bool) -> BTreeSet<Vec<u8>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.len().saturating_sub(1) {
            if cur[i] != cur[i + 1] && commute(cur[i], cur[i + 1]) {
                let mut next = cur.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Words reachable from `w` by applying `a b^k <-> b^m a` in either
/// direction anywhere, never exceeding `max_len` letters (`a = 0`, `b = 1`).
pub fn bs_reachable(w: &[u8], k: usize, m: usize, max_len: usize) -> BTreeSet<Vec<u8>> {
    let l: Vec<u8> = std::iter::once(0)
        .chain(std::iter::repeat(1).take(k))
        .collect();
    let r: Vec<u8> = std::iter::repeat(1)
        .take(m)
        .chain(std::iter::once(0))
        .collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    while let Some(cur) = queue.pop_front() {
        for (from, to) in [(&l, &r), (&r, &l)] {
            if cur.len() < from.len() {
                continue;
            }
            for i in 0..=cur.len() - from.len() {
                if cur[i..i + from.len()] == from[..] {
                    let mut next = cur[..i].to_vec();
                    next.extend_from_slice(to);
                    next.extend_from_slice(&cur[i + from.len()..]);
                    if next.len() <= max_len && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    seen
}

/// Every product of the generators of length at most `max_len`.
pub fn brute_products(gens: &[Vec<u8>], max_len: usize) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![Vec::new()];
    out.insert(Vec::new());
    while let Some(cur) = stack.pop() {
        for h in gens.iter().filter(|h| !h.is_empty()) {
            if cur.len() + h.len() <= max_len {
                let mut next = cur.clone();
                next.extend_from_slice(h);
                if out.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    out
}

fn term_value(model: &MonoidModel, t: &Term, env: &BTreeMap<String, Vec<u8>>) -> Vec<u8> {
    match t {
        Term::Var(v) => env[v].clone(),
        Term::Unit => Vec::new(),
        Term::Word(names) => names
            .iter()
            .map(|n| model.alphabet().letter(n).unwrap())
            .collect(),
        Term::Concat(a, b) => {
            let mut x = term_value(model, a, env);
            x.extend(term_value(model, b, env));
            x
        }
        other => panic!("not a monoid term: {other:?}"),
    }
}

/// Textbook bounded semantics: quantifiers range over all normal forms of
/// length at most `bound`, equations compare normal forms of the products.
pub fn naive_eval(
    model: &MonoidModel,
    f: &Formula,
    env: &mut BTreeMap<String, Vec<u8>>,
    bound: usize,
) -> bool {
    match f {
        Formula::Eq(a, b) => {
            model.normalize(&term_value(model, a, env))
                == model.normalize(&term_value(model, b, env))
        }
        Formula::Not(g) => !naive_eval(model, g, env, bound),
        Formula::And(a, b) => naive_eval(model, a, env, bound) && naive_eval(model, b, env, bound),
        Formula::Or(a, b) => naive_eval(model, a, env, bound) || naive_eval(model, b, env, bound),
        Formula::Implies(a, b) => {
            !naive_eval(model, a, env, bound) || naive_eval(model, b, env, bound)
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let exists = matches!(f, Formula::Exists(..));
            let saved = env.get(v).cloned();
            let mut result = !exists;
            for x in model.elements_up_to(bound) {
                env.insert(v.clone(), x);
                if naive_eval(model, g, env, bound) == exists {
                    result = exists;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            result
        }
    }
}

/// All words over `k` letters of length at most `n`, as `Word`s.
pub fn all_words(a: &Arc<Alphabet>, n: usize) -> Vec<Word> {
    words_up_to(a.len(), n)
        .into_iter()
        .map(|l| Word::from_letters(a, l).unwrap())
        .collect()
}

/// Letter-for-letter images of `w` under all injective renamings of its
/// letters into an alphabet of size `k`.
pub fn orbit_oracle(w: &[u8], k: usize) -> BTreeSet<Vec<u8>> {
    let used: Vec<u8> = w
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = BTreeSet::new();
    let mut image = vec![0u8; used.len()];
    fn go(
        i: usize,
        k: usize,
        used: &[u8],
        image: &mut Vec<u8>,
        w: &[u8],
        out: &mut BTreeSet<Vec<u8>>,
    ) {
        if i == used.len() {
            let map: BTreeMap<u8, u8> = used.iter().copied().zip(image.iter().copied()).collect();
            out.insert(w.iter().map(|c| map[c]).collect());
            return;
        }
        for c in 0..k as u8 {
            if !image[..i].contains(&c) {
                image[i] = c;
                go(i + 1, k, used, image, w, out);
            }
        }
    }
    go(0, k, &used, &mut image, w, &mut out);
    out
}

/// Cantor pairing by counting along diagonals.
pub fn pair_by_walk(a: u128, b: u128) -> u128 {
    let mut n = 0;
    for s in 0..a + b {
        n += s + 1;
    }
    n + b
}

fn term_strategy(names: [&'static str; 2]) -> impl proptest::strategy::Strategy<Value = Term> {
    use proptest::prelude::*;
    let leaf = prop_oneof![
        Just(Term::var("x")),
        Just(Term::var("y")),
        Just(Term::var("z")),
        Just(Term::Unit),
        Just(Term::word(&[names[0]])),
        Just(Term::word(&[names[1], names[0]])),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::cat(vec![a, b]))
    })
}

/// Random formulas over the variables `x, y, z` with word constants drawn
/// from `names`.
pub fn formula_strategy(
    names: [&'static str; 2],
) -> impl proptest::strategy::Strategy<Value = Formula> {
    use proptest::prelude::*;
    let atom = (term_strategy(names), term_strategy(names)).prop_map(|(a, b)| Formula::eq(a, b));
    let var = prop_oneof![Just("x"), Just("y"), Just("z")];
    atom.prop_recursive(4, 16, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
            (var.clone(), inner).prop_map(|(v, f)| Formula::forall(v, f)),
        ]
    })
}

/// Proptest settings without on-disk failure persistence.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}

/// Running maxima of operand values and of all term values.
#[derive(Default)]
struct Extremes {
    operand: u128,
    term: u128,
}

fn arith_term(t: &Term, env: &BTreeMap<String, u128>, ex: &mut Extremes) -> u128 {
    let v = match t {
        Term::Var(v) => env[v],
        Term::Unit => 1,
        Term::Num(n) => u128::from(*n),
        Term::Plus(a, b) | Term::Times(a, b) => {
            let (x, y) = (arith_term(a, env, ex), arith_term(b, env, ex));
            ex.operand = ex.operand.max(x).max(y);
            if matches!(t, Term::Plus(..)) {
                x + y
            } else {
                x * y
            }
        }
        other => panic!("not an arithmetic term: {other:?}"),
    };
    ex.term = ex.term.max(v);
    v
}

fn arith_walk(f: &Formula, env: &mut BTreeMap<String, u128>, bound: u128, ex: &mut Extremes) {
    match f {
        Formula::Eq(a, b) => {
            arith_term(a, env, ex);
            arith_term(b, env, ex);
        }
        Formula::Not(g) => arith_walk(g, env, bound, ex),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            arith_walk(a, env, bound, ex);
            arith_walk(b, env, bound, ex);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let saved = env.get(v).copied();
            for n in 0..=bound {
                env.insert(v.clone(), n);
                arith_walk(g, env, bound, ex);
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
        }
    }
}

/// Largest operand of `+` or `*`, and largest value of any term, over all
/// evaluations of `f` with quantifiers ranging over `0..=bound`.
pub fn term_extremes(f: &Formula, env: &BTreeMap<String, u128>, bound: u128) -> (u64, u64) {
    let mut ex = Extremes::default();
    arith_walk(f, &mut env.clone(), bound, &mut ex);
    (ex.operand as u64, ex.term as u64)
}

/// Every graph on `n` vertices over `a, b, c`, with its edges as letter pairs.
pub fn all_graphs(n: usize) -> Vec<(MonoidModel, Vec<(u8, u8)>)> {
    let names = ["a", "b", "c"];
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    (0..1u32 << pairs.len())
        .map(|mask| {
            let chosen: Vec<(u8, u8)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &(i, j))| (i as u8, j as u8))
                .collect();
            let edges: Vec<String> = chosen
                .iter()
                .map(|&(i, j)| format!("{}-{}", names[i as usize], names[j as usize]))
                .collect();
            let spec = format!("trace:{};edges={}", names[..n].join(","), edges.join(","));
            (MonoidModel::parse_spec(&spec).unwrap(), chosen)
        })
        .collect()
}
