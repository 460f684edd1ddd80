//! Seeded generators for term sets, ground sequents and solvable inputs.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cutintro::herbrand::TermSet;
use cutintro::syntax::{Formula, Sequent, Symbol, Term};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A ground term over `a/0, s/1, g/2` of depth at most `depth`.
pub fn ground(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return Term::constant("a");
    }
    if rng.gen_bool(0.6) {
        Term::app("s", vec![ground(rng, depth - 1)])
    } else {
        Term::app("g", vec![ground(rng, depth - 1), ground(rng, depth - 1)])
    }
}

/// A term over `a, s, g` and `α1 … αm`.
fn pattern(rng: &mut ChaCha8Rng, depth: usize, m: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return if m > 0 && rng.gen_bool(0.7) { Term::alpha(rng.gen_range(1..=m)) } else { Term::constant("a") };
    }
    if rng.gen_bool(0.6) {
        Term::app("s", vec![pattern(rng, depth - 1, m)])
    } else {
        Term::app("g", vec![pattern(rng, depth - 1, m), pattern(rng, depth - 1, m)])
    }
}

fn root(rng: &mut ChaCha8Rng, arg: &mut dyn FnMut(&mut ChaCha8Rng) -> Term) -> Term {
    if rng.gen_bool(0.5) {
        Term::App(Symbol::reserved_head(1), vec![arg(rng)])
    } else {
        Term::App(Symbol::reserved_head(2), vec![arg(rng), arg(rng)])
    }
}

fn instantiate(u: &Term, row: &[Term]) -> Term {
    cutintro::decomposition::instantiate(u, row)
}

/// A term set of at most 8 terms headed by `#f1/1` or `#f2/2` with argument
/// depth at most 3. Half of the sets are expansions of a random grammar with
/// a little noise, so that compressible sets are common.
pub fn termset(rng: &mut ChaCha8Rng) -> TermSet {
    let mut terms: Vec<Term> = Vec::new();
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=8);
        while terms.len() < n {
            let t = root(rng, &mut |r| ground(r, 3));
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
    } else {
        let m = rng.gen_range(1..=2);
        let (p, k) = *[(2, 3), (2, 4), (3, 2), (2, 2)].choose(rng).unwrap();
        let k = if m == 1 { k.min(3) } else { k };
        let mut rows: Vec<Vec<Term>> = Vec::new();
        while rows.len() < k {
            let row: Vec<Term> = (0..m).map(|_| ground(rng, 1)).collect();
            if !rows.contains(&row) {
                rows.push(row);
            }
        }
        let mut patterns: Vec<Term> = Vec::new();
        while patterns.len() < p {
            let u = root(rng, &mut |r| pattern(r, 1, m));
            if (1..=m).all(|i| u.vars().contains(&Symbol::alpha(i))) && !patterns.contains(&u) {
                patterns.push(u);
            }
        }
        for u in &patterns {
            for row in &rows {
                let t = instantiate(u, row);
                if t.depth() <= 4 && !terms.contains(&t) {
                    terms.push(t);
                }
            }
        }
        for _ in 0..rng.gen_range(0..=1) {
            let t = root(rng, &mut |r| ground(r, 2));
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
        terms.shuffle(rng);
        terms.truncate(8);
    }
    TermSet::new(terms)
}

fn gterm(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    let consts = ["a", "b", "c"];
    if depth == 0 || rng.gen_bool(0.4) {
        return Term::constant(consts.choose(rng).unwrap());
    }
    if rng.gen_bool(0.7) {
        Term::app("f", vec![gterm(rng, depth - 1)])
    } else {
        Term::app("h", vec![gterm(rng, depth - 1), gterm(rng, depth - 1)])
    }
}

fn gatom(rng: &mut ChaCha8Rng) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::pred("P", vec![gterm(rng, 2)]),
        1 => Formula::pred("Q", vec![gterm(rng, 1), gterm(rng, 1)]),
        _ => Formula::eq(gterm(rng, 2), gterm(rng, 2)),
    }
}

fn gformula(rng: &mut ChaCha8Rng, pool: &[Formula], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.5) {
        let a = pool.choose(rng).unwrap().clone();
        return if rng.gen_bool(0.25) { Formula::not(a) } else { a };
    }
    let (x, y) = (gformula(rng, pool, depth - 1), gformula(rng, pool, depth - 1));
    match rng.gen_range(0..4) {
        0 => Formula::and(x, y),
        1 => Formula::or(x, y),
        2 => Formula::imp(x, y),
        _ => Formula::not(x),
    }
}

/// A ground sequent over constants `a, b, c`, functions `f/1, h/2` and
/// predicates `P/1, Q/2` with at most 8 distinct atoms. A third of them
/// state an equational chain whose conclusion needs congruence.
pub fn ground_sequent(rng: &mut ChaCha8Rng) -> Sequent {
    if rng.gen_bool(1.0 / 3.0) {
        let xs: Vec<Term> = (0..4).map(|_| gterm(rng, 1)).collect();
        let mut ante: Vec<Formula> = xs.windows(2).filter(|_| rng.gen_bool(0.85)).map(|w| Formula::eq(w[0].clone(), w[1].clone())).collect();
        ante.push(Formula::pred("P", vec![Term::app("f", vec![xs[0].clone()])]));
        let goal = if rng.gen_bool(0.5) {
            Formula::pred("P", vec![Term::app("f", vec![xs[3].clone()])])
        } else {
            Formula::eq(Term::app("h", vec![xs[0].clone(), xs[1].clone()]), Term::app("h", vec![xs[2].clone(), xs[3].clone()]))
        };
        return Sequent::new(ante, vec![goal]);
    }
    let pool: Vec<Formula> = (0..rng.gen_range(2..=6)).map(|_| gatom(rng)).collect();
    let ante = (0..rng.gen_range(1..=3)).map(|_| gformula(rng, &pool, 2)).collect();
    let succ = (0..rng.gen_range(0..=2)).map(|_| gformula(rng, &pool, 2)).collect();
    Sequent::new(ante, succ)
}

fn iter_str(head: &str, n: usize, base: &str) -> String {
    let mut s = base.to_string();
    for _ in 0..n {
        s = format!("{head}({s})");
    }
    s
}

/// A `.cis` input with a valid Herbrand sequent, drawn from parametrized
/// families, sometimes with one redundant instance.
pub fn solvable_input(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    // Instance lists per formula, then the formula that may get a redundant tuple.
    let (mut inst, extra_at): (Vec<(usize, Vec<String>)>, usize) = match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(4..=9);
            writeln!(out, "ante P(a).\nante all x: P(x) -> P(h(x)).\nsucc P({}).", iter_str("h", n, "a")).unwrap();
            (vec![(2, (0..n).map(|i| iter_str("h", i, "a")).collect())], 0)
        }
        1 => {
            let n = rng.gen_range(4..=9);
            writeln!(out, "ante Q({}).\nante all x: g(x) = x.\nsucc Q(a).", iter_str("g", n, "a")).unwrap();
            (vec![(2, (0..n).map(|i| iter_str("g", i, "a")).collect())], 0)
        }
        2 => {
            let n = rng.gen_range(2..=4);
            let fa = iter_str("f", n, "a");
            writeln!(out, "ante P({fa}, a).\nante all x: f(x) = s(s(x)).\nante all x y: P(s(x), y) -> P(x, s(y)).\nsucc P(a, {fa}).").unwrap();
            let steps = (0..2 * n).map(|i| format!("({}, {})", iter_str("s", 2 * n - 1 - i, "a"), iter_str("s", i, "a"))).collect();
            (vec![(2, (0..n).map(|i| iter_str("f", i, "a")).collect()), (3, steps)], 1)
        }
        _ => {
            let n = rng.gen_range(3..=6);
            writeln!(out, "ante R(a, b).\nante all x y: R(x, y) -> R(k(x), k(y)).\nsucc R({}, {}).", iter_str("k", n, "a"), iter_str("k", n, "b")).unwrap();
            (vec![(2, (0..n).map(|i| format!("({}, {})", iter_str("k", i, "a"), iter_str("k", i, "b"))).collect())], 0)
        }
    };
    if rng.gen_bool(0.3) {
        let list = &mut inst[extra_at].1;
        let t = if list[0].starts_with('(') { "(s(b), a)".to_string() } else { "s(b)".to_string() };
        list.push(t);
    }
    for (i, tuples) in inst {
        writeln!(out, "inst {i}: {}.", tuples.join("; ")).unwrap();
    }
    out
}
