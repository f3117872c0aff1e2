//! Defining formulas, written as text templates over the grammar.
//!
//! `X1` and `X2` in a template stand for the two distinguished generators
//! (quoted constants, or variables in the parameter-free variant) and `SEP`
//! for the separator word of the transfer gadget. Sub-formulas are spliced
//! in after a capture-avoiding renaming of their free variables.

use std::collections::BTreeMap;

use super::Gens;
use crate::formula::{parse, substitute_all, Formula, Term};
use crate::word::Word;

fn tpl(text: &str, x1: &str, x2: &str) -> String {
    let sep = format!("{x1}.{x2}.{x1}.{x2}.{x2}");
    text.replace("SEP", &sep)
        .replace("X1", x1)
        .replace("X2", x2)
}

fn build(text: &str) -> Formula {
    match parse(text) {
        Ok(f) => f,
        Err(e) => panic!("gadget template does not parse: {e}\n{text}"),
    }
}

fn term(text: &str) -> Term {
    match build(&format!("{text} = {text}")) {
        Formula::Eq(t, _) => t,
        _ => unreachable!(),
    }
}

/// `f` with its free variables renamed to the given terms, as text.
fn call(f: &Formula, args: &[(&str, &str)]) -> String {
    let map: BTreeMap<String, Term> = args.iter().map(|(v, t)| (v.to_string(), term(t))).collect();
    substitute_all(f, &map).to_string()
}

fn ends(g: &str, a: &str) -> String {
    format!("E eu. {g} = eu.{a}")
}

fn starts(g: &str, a: &str) -> String {
    format!("E su. {g} = {a}.su")
}

fn cent(c: &str, y: &str) -> String {
    format!("{c}.{y} = {y}.{c}")
}

/// `!E u. E v. y = u.g.v` for every generator `g` other than the two
/// distinguished ones.
fn only_pair(g: &Gens, y: &str) -> String {
    g.others()
        .iter()
        .map(|c| format!(" & !E ou. E ov. {y} = ou.{c}.ov"))
        .collect()
}

/// `c.y = y.c` (free: `y`).
pub fn centralizer(c: &Word) -> Formula {
    let q = super::quote(c);
    build(&cent(&q, "y"))
}

/// Nonempty words over the two distinguished generators without a factor
/// `x2^3` (free: `y`).
pub fn in_s(g: &Gens) -> Formula {
    build(&in_s_text(&g.c1(), &g.c2(), &only_pair(g, "y")))
}

fn in_s_text(x1: &str, x2: &str, only: &str) -> String {
    tpl(
        &format!("(!(y = 1) & !E u. E v. y = u.X2.X2.X2.v{only})"),
        x1,
        x2,
    )
}

/// `!E u. E v. y = u.c.v` for every generator `c` other than `x1`, `x2`,
/// with the generators found by the basis formula (bound: `oc`).
fn only_pair_var(x1: &str, x2: &str, y: &str) -> String {
    let th = call(&basis(), &[("x", "oc")]);
    format!(" & A oc. (({th} & !(oc = {x1}) & !(oc = {x2})) -> !E ou. E ov. {y} = ou.oc.ov)")
}

/// The multiplication word is the unique `w` with `mult_gadget(x1^n, x1^m, w)`
/// (free: `x`, `y`, `w`).
pub fn mult_gadget(g: &Gens) -> Formula {
    mult_gadget_text(&g.c1(), &g.c2(), &only_pair(g, "y"))
}

/// [`mult_gadget`] with the distinguished generators given as variables.
pub fn mult_gadget_with(x1: &str, x2: &str) -> Formula {
    mult_gadget_text(x1, x2, &only_pair_var(x1, x2, "y"))
}

fn mult_gadget_text(x1: &str, x2: &str, only: &str) -> Formula {
    let in_s_w = call(&build(&in_s_text(x1, x2, only)), &[("y", "w")]);
    let text = format!(
        "({in_s_w} \
         & E w0. w = X2.X2.x.X1.X2.y.X1.X2.X2.w0 \
         & A w1. A w2. A w3. A v1. A v2. ((w = w1.X2.X2.w2.X2.X2.w3 & w2 = v1.X2.v2 & {c1} & {c2} & !(v1 = X1) & !(v1 = X1.X1)) \
             -> E v3. E v4. E w4. (v1 = v3.X1 & v4 = v2.y & w3 = v3.X2.v4.X2.X2.w4)) \
         & (E w4. E v5. (w = w4.X2.X2.X1.X1.X2.v5.X2.X2 & {c5}) | w = X2.X2.X1.X2.y.X1.X2.X2) \
         & !E u. E v1. E v. E r. (w = u.X2.X2.v1.X2.v.X2.X2.r & (v1 = X1 | v1 = X1.X1) & {cv} & !(r = 1)))",
        c1 = cent("X1", "v1"),
        c2 = cent("X1", "v2"),
        c5 = cent("X1", "v5"),
        cv = cent("X1", "v"),
    );
    build(&tpl(&text, x1, x2))
}

/// Graph of multiplication on powers of `x1` (free: `x`, `y`, `z`).
pub fn mult(g: &Gens) -> Formula {
    mult_text(&mult_gadget(g), &g.c1(), &g.c2())
}

/// [`mult`] with the distinguished generators given as variables.
pub fn mult_with(x1: &str, x2: &str) -> Formula {
    mult_text(&mult_gadget_with(x1, x2), x1, x2)
}

fn mult_text(gadget: &Formula, x1: &str, x2: &str) -> Formula {
    let psi = call(gadget, &[]);
    let text = format!(
        "({cx} & {cy} & {cz} & E w. ({psi} & (E w4. w = w4.X2.X2.X1.X1.X2.z.X1.X2.X2 | (x = 1 & z = 1))))",
        cx = cent("X1", "x"),
        cy = cent("X1", "y"),
        cz = cent("X1", "z"),
    );
    build(&tpl(&text, x1, x2))
}

/// Addition on powers of `x1` (free: `x`, `y`, `z`).
pub fn add(g: &Gens) -> Formula {
    let text = format!(
        "({} & {} & {} & x.y = z)",
        cent("X1", "x"),
        cent("X1", "y"),
        cent("X1", "z")
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// Characterizes the transfer words `f_word(s)`, `s >= 1` (free: `f`).
pub fn f_formula_with(x1: &str, x2: &str) -> Formula {
    let text = format!(
        "(E g3. (f = SEP.X2.X1.SEP.SEP.g3 & !{s_g3}) \
         & A g1. A b. A g2. A g3. ((f = g1.b.g2.b.SEP.g3 & {cb} & !(b = 1) & !(g2 = 1) & !{e_g1} & !{s_g2} & !{e_g2} & !{s_g3}) \
             -> (g3 = 1 | E g4. (g3 = X2.g2.X1.b.SEP.SEP.g4 & !{s_g4}))) \
         & E g1. E b. E u. (f = g1.b.u.b.SEP & {cb} & !(b = 1) & !{e_g1} & !{s_u} & !{e_u} & !E t. E t2. u = t.SEP.t2))",
        cb = cent("SEP", "b"),
        e_g1 = ends("g1", "SEP"),
        e_g2 = ends("g2", "SEP"),
        e_u = ends("u", "SEP"),
        s_g2 = starts("g2", "SEP"),
        s_g3 = starts("g3", "SEP"),
        s_g4 = starts("g4", "SEP"),
        s_u = starts("u", "SEP"),
    );
    build(&tpl(&text, x1, x2))
}

/// `x2^s x1^s` for `s >= 1` (free: `x`).
pub fn trans_psi_with(x1: &str, x2: &str) -> Formula {
    let phi = call(&f_formula_with(x1, x2), &[]);
    let text = format!(
        "E f. E g1. E b. ({phi} & f = g1.b.x.SEP.b & {cb} & !(b = 1) & !{e_g1} & !{e_x} & !{s_x})",
        cb = cent("SEP", "b"),
        e_g1 = ends("g1", "SEP"),
        e_x = ends("x", "SEP"),
        s_x = starts("x", "SEP"),
    );
    build(&tpl(&text, x1, x2))
}

/// Pairs `(x2^s, x1^s)`, `s >= 0` (free: `x`, `y`).
pub fn trans_with(x1: &str, x2: &str) -> Formula {
    let psi = call(&trans_psi_with(x1, x2), &[("x", "z")]);
    let text = format!(
        "({cx} & {cy} & ((x = 1 & y = 1) | E z. (z = x.y & {psi})))",
        cx = cent("X2", "x"),
        cy = cent("X1", "y"),
    );
    build(&tpl(&text, x1, x2))
}

pub fn f_formula(g: &Gens) -> Formula {
    f_formula_with(&g.c1(), &g.c2())
}

pub fn trans_psi(g: &Gens) -> Formula {
    trans_psi_with(&g.c1(), &g.c2())
}

pub fn trans(g: &Gens) -> Formula {
    trans_with(&g.c1(), &g.c2())
}

/// Irreducible elements, i.e. the generators (free: `x`).
pub fn basis() -> Formula {
    build("(!(x = 1) & A y. A z. (x = y.z -> (y = 1 | z = 1)))")
}

/// Parameter-free pairing of `xi^k` with `xj^k` (free: `x`, `y`).
pub fn trans_noparam() -> Formula {
    let th = |v: &str| call(&basis(), &[("x", v)]);
    let tr = call(&trans_with("z1", "z2"), &[]);
    let text = format!(
        "((x = y & E z1. ({t1} & z1.x = x.z1)) | E z1. E z2. ({t1} & {t2} & !(z1 = z2) & {tr}))",
        t1 = th("z1"),
        t2 = th("z2"),
    );
    build(&text)
}

/// Tuple words (free: `x`).
pub fn tuple(g: &Gens) -> Formula {
    let text = format!(
        "(E g1. x = X1.X2.g1 \
         & A g3. A i. A g4. ((x = g3.i.g4 & {ci} & !(i = 1) & !{e_g3} & {s_g4}) \
             -> (E g5. E g6. (g4 = g5.i.X1.g6 & {c5} & {s_g6}) | {c4})) \
         & E g7. x = g7.X2{only})",
        ci = cent("X1", "i"),
        c4 = cent("X2", "g4"),
        c5 = cent("X2", "g5"),
        e_g3 = ends("g3", "X1"),
        s_g4 = starts("g4", "X2"),
        s_g6 = starts("g6", "X2"),
        only = only_pair(g, "x"),
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// Entry `z = x1^a` at position `y = x1^i` of the tuple word `x`
/// (free: `x`, `y`, `z`).
pub fn position(g: &Gens) -> Formula {
    let w = call(&tuple(g), &[]);
    let tr = call(&trans(g), &[("x", "v"), ("y", "z")]);
    let text = format!(
        "({w} & {cy} & !(y = 1) & E g1. E g2. E v. (x = g1.y.X2.v.g2 & !{e_g1} & !{s_g2} & {cv} & {tr}))",
        cy = cent("X1", "y"),
        cv = cent("X2", "v"),
        e_g1 = ends("g1", "X1"),
        s_g2 = starts("g2", "X2"),
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// `x1^a` occurs as an entry of the tuple word `y` (free: `x`, `y`).
pub fn member_in(g: &Gens) -> Formula {
    let t = call(&position(g), &[("x", "y"), ("y", "q"), ("z", "x")]);
    build(&format!("E q. {t}"))
}

/// `y = x1^m` where `m` is the length of the tuple word `x` (free: `x`, `y`).
pub fn length(g: &Gens) -> Formula {
    let w = call(&tuple(g), &[]);
    let text = format!(
        "({w} & {cy} & !(y = 1) & E g1. E g2. (x = g1.y.g2 & !{e_g1} & {cg2}))",
        cy = cent("X1", "y"),
        cg2 = cent("X2", "g2"),
        e_g1 = ends("g1", "X1"),
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// `z` is the tuple word of the concatenation of the tuples of `x` and `y`
/// (free: `x`, `y`, `z`).
pub fn concat(g: &Gens) -> Formula {
    let wx = call(&tuple(g), &[]);
    let wy = call(&tuple(g), &[("x", "y")]);
    let lxm = call(&length(g), &[("y", "m")]);
    let text = format!(
        "({wx} & {wy} & E u. (z = x.u \
         & E m. ({lxm} & E g1. u = m.X1.X2.g1) \
         & A g2. A k. A g3. ((u = g2.k.g3 & {ck} & !(k = 1) & !{e_g2} & {s_g3}) \
             -> E m. E ii. E h1. E r. E h2. (k = m.ii & !(ii = 1) & y = h1.ii.r.h2 & !{e_h1} & !{s_h2} & {cr} & !(r = 1) \
                 & ((g3 = r & h2 = 1) | E g4. (g3 = r.k.X1.g4 & {s_g4})) & {lxm})) \
         & E g5. u = g5.X2))",
        ck = cent("X1", "k"),
        cr = cent("X2", "r"),
        e_g2 = ends("g2", "X1"),
        e_h1 = ends("h1", "X1"),
        s_g3 = starts("g3", "X2"),
        s_h2 = starts("h2", "X2"),
        s_g4 = starts("g4", "X2"),
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// Pairs `(a_m, x1^m)`, `m >= 1` (free: `a`, `y`).
pub fn b_pairs(g: &Gens) -> Formula {
    let text = format!(
        "({cy} & !(y = 1) & (a = X2.X1 | E u. a = X2.X1.X2.u) \
         & A u1. A v. A u2. ((a = u1.X2.v.X2.u2 & {cv}) -> (u2 = v.X1 | E u3. u2 = v.X1.X2.u3)) \
         & E u4. a = u4.X2.y{only})",
        cy = cent("X1", "y"),
        cv = cent("X1", "v"),
        only = only_pair(g, "a"),
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// `p` is the generator whose index `i` satisfies `c = x1^i` (free: `p`, `c`).
fn index_relation(g: &Gens) -> String {
    let parts: Vec<String> = g
        .all()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let pow = vec![g.c1(); i + 1].join(".");
            format!("(p = {q} & c = {pow})")
        })
        .collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(" | "))
    }
}

/// The conditions on `z` relative to `m`, `a` and the tuple word `x`,
/// without the outer quantifiers.
fn iso_body(g: &Gens) -> String {
    let t = position(g);
    let tr = trans(g);
    let rel = index_relation(g);
    let head = format!(
        "E p. E c. E v1. (z = a.X2.a.p.a.a.X2.X2.a.a.v1 & {t0} & {rel})",
        t0 = call(&t, &[("y", "X1"), ("z", "c")]),
    );
    let rec = format!(
        "A v2. A b. A e. A v3. A v4. ((z = v2.b.e.b.v3.b.a.e.X2.b.a.v4 & {cab} & !(b = 1) & {ce} & !(e = 1) & !{e_v2} & !{e_v3} & !{s_v3} & !{s_v4}) \
         -> (v4 = 1 | E q. E p. E c. E v5. (v4 = v3.p.b.a.a.e.X2.X2.b.a.a.v5 & !{s_v5} & {rel} & {t_q} & {tr_eq})))",
        cab = cent("a", "b"),
        ce = cent("X2", "e"),
        e_v2 = ends("v2", "a"),
        e_v3 = ends("v3", "a"),
        s_v3 = starts("v3", "a"),
        s_v4 = starts("v4", "a"),
        s_v5 = starts("v5", "a"),
        tr_eq = call(&tr, &[("x", "e"), ("y", "q")]),
        t_q = call(&t, &[("y", "q.X1"), ("z", "c")]),
    );
    let tail = format!(
        "E v6. E b. E e. (z = v6.b.e.b & {cab} & !(b = 1) & {ce} & !{e_v6} & {tr_m})",
        cab = cent("a", "b"),
        ce = cent("X2", "e"),
        e_v6 = ends("v6", "a"),
        tr_m = call(&tr, &[("x", "e"), ("y", "m.X1")]),
    );
    let l = call(&length(g), &[("y", "m")]);
    let b = call(&b_pairs(g), &[("y", "m")]);
    tpl(
        &format!("{l} & {b} & {head} & {rec} & {tail}"),
        &g.c1(),
        &g.c2(),
    )
}

/// `z` is the pairing word of the tuple word `x` (free: `x`, `z`).
pub fn iso_theta0(g: &Gens) -> Formula {
    build(&format!("E m. E a. ({})", iso_body(g)))
}

/// `y` is the monomial decoded from the tuple word `x` (free: `x`, `y`).
/// The witnesses `m`, `a`, `z` are the leading existentials.
pub fn iso_theta1(g: &Gens) -> Formula {
    let th0 = call(&iso_theta0(g), &[]);
    let text = format!(
        "E m. E a. E z. ({l} & {b} & {th0} & E u. E b. E e. (z = u.b.e.b.y.b.a.e.X2.b.a & {cab} & !(b = 1) & {ce} & !{e_u}))",
        l = call(&length(g), &[("y", "m")]),
        b = call(&b_pairs(g), &[("y", "m")]),
        cab = cent("a", "b"),
        ce = cent("X2", "e"),
        e_u = ends("u", "a"),
    );
    build(&tpl(&text, &g.c1(), &g.c2()))
}

/// Tuples obtained from `words` by an injective renaming of generators.
/// Free variables: `x` for a single word, `x_1 .. x_k` otherwise.
pub fn orbit(words: &[Word]) -> Formula {
    let mut letters: Vec<u8> = Vec::new();
    for w in words {
        for &l in w.letters() {
            if !letters.contains(&l) {
                letters.push(l);
            }
        }
    }
    let y = |l: u8| {
        format!(
            "y{}",
            letters.iter().position(|&c| c == l).expect("collected") + 1
        )
    };
    let mut parts: Vec<String> = Vec::new();
    for (i, _) in letters.iter().enumerate() {
        parts.push(call(&basis(), &[("x", &format!("y{}", i + 1))]));
    }
    for i in 0..letters.len() {
        for j in i + 1..letters.len() {
            parts.push(format!("!(y{} = y{})", i + 1, j + 1));
        }
    }
    for (k, w) in words.iter().enumerate() {
        let var = if words.len() == 1 {
            "x".to_string()
        } else {
            format!("x_{}", k + 1)
        };
        let rhs = if w.is_empty() {
            "1".to_string()
        } else {
            w.letters()
                .iter()
                .map(|&l| y(l))
                .collect::<Vec<_>>()
                .join(".")
        };
        parts.push(format!("{var} = {rhs}"));
    }
    let body = if parts.len() == 1 {
        parts.remove(0)
    } else {
        format!("({})", parts.join(" & "))
    };
    let prefix: String = (1..=letters.len()).map(|i| format!("E y{i}. ")).collect();
    build(&format!("{prefix}{body}"))
}
