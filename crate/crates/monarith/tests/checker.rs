mod common;

use std::collections::BTreeMap;

use monarith::check::{
    check_definition, eval, eval_arith, eval_witness, solutions, solutions_arith, Assignment,
    Bound, NatAssignment,
};
use monarith::formula::prenex;
use monarith::gadgets::{basis, centralizer, instance, trans, trans_bound, tuple_word};
use monarith::{parse, Alphabet, Error, Formula, MonoidModel, Word};
use proptest::prelude::*;

use common::{cases, formula_strategy, naive_eval, std_gens, w};

fn free2() -> MonoidModel {
    MonoidModel::free(Alphabet::standard(2))
}

fn assign(pairs: &[(&str, &Word)]) -> Assignment {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), (*v).clone()))
        .collect()
}

#[test]
fn eval_examples() {
    let m = free2();
    let a = m.alphabet().clone();
    let c = centralizer(&w(&a, "x1"));
    assert!(eval(&m, &c, &assign(&[("y", &w(&a, "x1^3"))]), 4).unwrap());
    assert!(!eval(&m, &c, &assign(&[("y", &w(&a, "x2"))]), 4).unwrap());
    assert!(!eval(&m, &basis(), &assign(&[("x", &w(&a, "x1.x2"))]), 3).unwrap());
    assert!(eval(&m, &basis(), &assign(&[("x", &w(&a, "x2"))]), 3).unwrap());
}

#[test]
fn eval_errors() {
    let m = free2();
    assert!(
        matches!(eval(&m, &basis(), &Assignment::new(), 2), Err(Error::Unbound(v)) if v == "x")
    );
    let arith = parse("x + 1 = 2").unwrap();
    assert!(matches!(
        eval(&m, &arith, &Assignment::new(), 2),
        Err(Error::Sort(_))
    ));
}

#[test]
fn products_may_exceed_the_bound() {
    let m = free2();
    let a = m.alphabet().clone();
    let f = parse("E u. x = u.u").unwrap();
    assert!(eval(&m, &f, &assign(&[("x", &w(&a, "x1.x2.x1.x2"))]), 2).unwrap());
    assert!(!eval(&m, &f, &assign(&[("x", &w(&a, "x1.x2.x1.x2"))]), 1).unwrap());
}

#[test]
fn solution_sets() {
    let m = free2();
    let a = m.alphabet().clone();
    let got = solutions(&m, &basis(), &["x"], 3).unwrap();
    assert_eq!(got, vec![vec![w(&a, "x1")], vec![w(&a, "x2")]]);
    let all = solutions(&m, &parse("x = x").unwrap(), &["x"], 1).unwrap();
    assert_eq!(
        all,
        vec![vec![Word::empty(&a)], vec![w(&a, "x1")], vec![w(&a, "x2")]]
    );
}

#[test]
fn trans_solutions_up_to_three() {
    let g = std_gens(2);
    let m = g.model();
    let bound = Bound::new(trans_bound(&g, 3)).with_free(3);
    let got = solutions(&m, &trans(&g), &["x", "y"], bound).unwrap();
    let expected: Vec<Vec<Word>> = (0..=3).map(|s| vec![g.p2(s), g.p1(s)]).collect();
    assert_eq!(got, expected);
}

#[test]
fn definition_reports() {
    let g = std_gens(2);
    let m = g.model();
    let a = g.alphabet().clone();
    let expected: Vec<Vec<Word>> = (0..=3).map(|s| vec![g.p2(s), g.p1(s)]).collect();
    let r = check_definition(
        &m,
        &trans(&g),
        &["x", "y"],
        &expected,
        Bound::new(trans_bound(&g, 3)).with_free(3),
    )
    .unwrap();
    assert!(r.is_clean(), "{r}");
    assert_eq!(r.to_string(), "OK 4\n");

    let r = check_definition(
        &m,
        &parse("x = x").unwrap(),
        &["x"],
        &[vec![Word::empty(&a)]],
        1,
    )
    .unwrap();
    assert_eq!(
        r.false_positives,
        vec![vec![w(&a, "x1")], vec![w(&a, "x2")]]
    );
    assert!(r.false_negatives.is_empty());
    assert_eq!(r.to_string(), "FP x1\nFP x2\n");

    let r = check_definition(&m, &parse("!(x = x)").unwrap(), &["x"], &[], 2).unwrap();
    assert!(r.is_clean());

    let r = check_definition(&m, &basis(), &["x"], &[vec![w(&a, "x1.x1")]], 2).unwrap();
    assert_eq!(r.to_string(), "FP x1\nFP x2\nFN x1.x1\n");
}

#[test]
fn witness_mode() {
    let m = free2();
    let a = m.alphabet().clone();
    let f = parse("E u. E v. x = u.'x2'.v").unwrap();
    let x = w(&a, "x1.x2.x1");
    let good = assign(&[("u", &w(&a, "x1")), ("v", &w(&a, "x1"))]);
    let bad = assign(&[("u", &w(&a, "x1.x2")), ("v", &w(&a, "x1"))]);
    assert!(eval_witness(&m, &f, &assign(&[("x", &x)]), &good, 0).unwrap());
    assert!(!eval_witness(&m, &f, &assign(&[("x", &x)]), &bad, 0).unwrap());
    let stray = assign(&[("q", &x)]);
    assert!(eval_witness(&m, &f, &assign(&[("x", &x)]), &stray, 0).is_err());
}

#[test]
fn witness_mode_agrees_with_search_on_gadgets() {
    let g = std_gens(2);
    let m = g.model();
    for (n, k) in [(0, 2), (1, 1), (2, 1), (1, 3)] {
        let inst = instance(&g, "mult", &[n.to_string(), k.to_string()]).unwrap();
        let psi = inst.formula.unwrap();
        let word = inst.word.unwrap();
        let given = assign(&[("x", &g.p1(n)), ("y", &g.p1(k))]);
        let closed = Formula::exists("w", psi.clone());
        let searched = eval(&m, &closed, &given, inst.bound.clone()).unwrap();
        let plugged =
            eval_witness(&m, &closed, &given, &assign(&[("w", &word)]), inst.bound).unwrap();
        assert!(searched && plugged, "mult {n} {k}");
    }
    for t in [vec![0], vec![1, 2], vec![2, 0]] {
        let inst = instance(
            &g,
            "tuple",
            &[format!(
                "({})",
                t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            )],
        )
        .unwrap();
        let f = inst.formula.unwrap();
        let word = inst.word.unwrap();
        assert!(
            eval(&m, &f, &assign(&[("x", &word)]), inst.bound.clone()).unwrap(),
            "tuple {t:?}"
        );
        let found = solutions(&m, &f, &["x"], inst.bound.with_free(word.len())).unwrap();
        let expected = all_tuple_words(&g, word.len());
        assert_eq!(found, expected, "tuple {t:?}");
    }
}

/// Tuple words of length at most `n`, in shortlex order.
fn all_tuple_words(g: &monarith::gadgets::Gens, n: usize) -> Vec<Vec<Word>> {
    let mut out: Vec<Word> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|e| vec![e]).collect();
    while let Some(t) = stack.pop() {
        let word = tuple_word(g, &t).unwrap();
        if word.len() > n {
            continue;
        }
        out.push(word);
        for e in 0..n {
            let mut next = t.clone();
            next.push(e);
            stack.push(next);
        }
    }
    out.sort_by(|a, b| monarith::word::shortlex(a.letters(), b.letters()));
    out.into_iter().map(|w| vec![w]).collect()
}

#[test]
fn bound_lookup_by_name_then_stem() {
    let b = Bound::new(3).with("f", 9).with("x_2", 1).with_free(5);
    assert_eq!(b.for_var("f"), 9);
    assert_eq!(b.for_var("f_4"), 9);
    assert_eq!(b.for_var("x_2"), 1);
    assert_eq!(b.for_var("q"), 3);
}

#[test]
fn arithmetic_evaluation() {
    let f = parse("E x. x + x = 7").unwrap();
    assert!(!eval_arith(&f, &NatAssignment::new(), 8).unwrap());
    let f = parse("E x. x * x = 4").unwrap();
    assert!(eval_arith(&f, &NatAssignment::new(), 8).unwrap());
    let f = parse("x + y = 3").unwrap();
    let sols = solutions_arith(&f, &["x", "y"], 5).unwrap();
    assert_eq!(sols, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
    assert!(eval_arith(&parse("x.y = 1").unwrap(), &NatAssignment::new(), 2).is_err());
}

#[test]
fn solutions_are_deterministic() {
    let g = std_gens(3);
    let m = g.model();
    let f = parse("E u. (x = u.'x3' | x.u = 'x2.x1')").unwrap();
    let first = solutions(&m, &f, &["x"], 3).unwrap();
    for _ in 0..3 {
        assert_eq!(solutions(&m, &f, &["x"], 3).unwrap(), first);
    }
}

fn models() -> Vec<MonoidModel> {
    vec![
        free2(),
        MonoidModel::free(Alphabet::standard(3)),
        MonoidModel::parse_spec("trace:x1,x2,x3;edges=x1-x3").unwrap(),
        MonoidModel::parse_spec("trace:x1,x2;edges=x1-x2").unwrap(),
    ]
}

fn to_env(
    m: &MonoidModel,
    picks: [usize; 3],
    bound: usize,
) -> (BTreeMap<String, Vec<u8>>, Assignment) {
    let elems = m.elements_up_to(bound);
    let mut raw = BTreeMap::new();
    let mut words = Assignment::new();
    for (v, i) in ["x", "y", "z"].into_iter().zip(picks) {
        let e = elems[i % elems.len()].clone();
        words.insert(
            v.to_string(),
            Word::from_letters(m.alphabet(), e.clone()).unwrap(),
        );
        raw.insert(v.to_string(), e);
    }
    (raw, words)
}

fn matrix(f: &Formula) -> &Formula {
    match f {
        Formula::Exists(_, g) | Formula::Forall(_, g) => matrix(g),
        other => other,
    }
}

fn bs_formula() -> impl Strategy<Value = Formula> {
    formula_strategy(["a", "b"])
}

proptest! {
    #![proptest_config(cases(300))]

    #[test]
    fn agrees_with_naive_evaluation(
        f in formula_strategy(["x1", "x2"]),
        which in 0usize..4,
        picks in proptest::array::uniform3(0usize..40),
        bound in 0usize..=3,
    ) {
        let m = &models()[which];
        let (mut raw, words) = to_env(m, picks, 2);
        let expected = naive_eval(m, &f, &mut raw, bound);
        prop_assert_eq!(eval(m, &f, &words, bound).unwrap(), expected, "{} in {}", f, m);
    }

    #[test]
    fn agrees_with_naive_evaluation_in_bs(
        f in bs_formula(),
        k in 1usize..=4,
        picks in proptest::array::uniform3(0usize..40),
        bound in 0usize..=3,
    ) {
        let m = MonoidModel::baumslag_solitar(k, 5 - k).unwrap();
        let (mut raw, words) = to_env(&m, picks, 3);
        let expected = naive_eval(&m, &f, &mut raw, bound);
        prop_assert_eq!(eval(&m, &f, &words, bound).unwrap(), expected, "{} in {}", f, m);
    }

    #[test]
    fn existential_truth_is_monotone_in_the_bound(
        f in formula_strategy(["x1", "x2"]),
        which in 0usize..4,
        picks in proptest::array::uniform3(0usize..40),
    ) {
        let m = &models()[which];
        let body = prenex(&f);
        let qf = matrix(&body);
        let mut sentence = qf.clone();
        for v in qf.free_vars().into_iter().filter(|v| v != "x") {
            sentence = Formula::exists(&v, sentence);
        }
        let (_, words) = to_env(m, picks, 2);
        let mut prev = false;
        for bound in 0..=3 {
            let now = eval(m, &sentence, &words, bound).unwrap();
            prop_assert!(!prev || now, "true at {} but false at {}", bound - 1, bound);
            prev = now;
        }
    }

    #[test]
    fn quantifier_free_truth_ignores_the_bound(
        f in formula_strategy(["x1", "x2"]),
        picks in proptest::array::uniform3(0usize..40),
    ) {
        let m = free2();
        let body = prenex(&f);
        let qf = matrix(&body);
        let elems = m.elements_up_to(3);
        let mut raw = BTreeMap::new();
        let mut words = Assignment::new();
        for (i, v) in qf.free_vars().into_iter().enumerate() {
            let e = elems[picks[i % 3].wrapping_add(i) % elems.len()].clone();
            words.insert(v.clone(), Word::from_letters(m.alphabet(), e.clone()).unwrap());
            raw.insert(v, e);
        }
        let direct = naive_eval(&m, qf, &mut raw, 0);
        for bound in [0, 1, 5] {
            prop_assert_eq!(eval(&m, qf, &words, bound).unwrap(), direct);
        }
    }
}
