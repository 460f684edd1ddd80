//! Exhaustive minimum over decompositions whose rows are spanned by the
//! term set: some pattern mentioning every column instantiates into `T`.
//!
//! Candidate row sets come from choosing, for a subset `T0` of `T`, a cut
//! through the common prefix of its elements; columns are the vectors of
//! subterms at the cut, with constant and repeated columns removed. Patterns
//! are all abstractions of elements of `T` over the first row, and the cover
//! is a dynamic program over bitmasks.

use std::collections::{BTreeMap, BTreeSet};

use cutintro::decomposition::{validate_decomposition, Decomposition};
use cutintro::herbrand::TermSet;
use cutintro::syntax::{Symbol, Term};

type Column = Vec<Term>;

/// All column sets obtainable by cutting the common prefix of `ts`.
fn cuts(ts: &[&Term]) -> Vec<BTreeSet<Column>> {
    let v: Column = ts.iter().map(|t| (*t).clone()).collect();
    if v.iter().all(|t| *t == v[0]) {
        return vec![BTreeSet::new()];
    }
    let mut out = vec![BTreeSet::from([v.clone()])];
    let head = ts[0].head();
    let same_head = head.is_some() && ts.iter().all(|t| t.head() == head && t.args().len() == ts[0].args().len());
    if same_head {
        let mut acc = vec![BTreeSet::new()];
        for i in 0..ts[0].args().len() {
            let sub: Vec<&Term> = ts.iter().map(|t| &t.args()[i]).collect();
            let opts = cuts(&sub);
            acc = acc.iter().flat_map(|a| opts.iter().map(move |o| a.union(o).cloned().collect())).collect();
        }
        out.extend(acc);
    }
    out
}

fn alpha(j: usize) -> Term {
    Term::alpha(j + 1)
}

fn instantiate(u: &Term, row: &[Term]) -> Term {
    match u {
        Term::Var(v) => match v.as_str().strip_prefix(cutintro::syntax::ALPHA_PREFIX).and_then(|n| n.parse::<usize>().ok()) {
            Some(j) => row[j - 1].clone(),
            None => u.clone(),
        },
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| instantiate(a, row)).collect()),
    }
}

/// Every `u` with `u∘row = t`.
fn abstractions(t: &Term, row: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = row.iter().enumerate().filter(|(_, w)| *w == t).map(|(j, _)| alpha(j)).collect();
    match t {
        Term::App(f, args) => {
            let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
            for a in args {
                let opts = abstractions(a, row);
                acc = acc.iter().flat_map(|p| opts.iter().map(move |o| [p.clone(), vec![o.clone()]].concat())).collect();
            }
            out.extend(acc.into_iter().map(|args| Term::App(f.clone(), args)));
        }
        Term::Var(_) => out.push(t.clone()),
    }
    out
}

/// Row sets with at least two rows and one column, as sorted row vectors.
pub fn spanned_row_sets(t: &TermSet) -> BTreeSet<Vec<Vec<Term>>> {
    let terms: Vec<&Term> = t.iter().collect();
    let n = terms.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << n {
        if mask.count_ones() < 2 {
            continue;
        }
        let sub: Vec<&Term> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
        for cols in cuts(&sub) {
            if cols.is_empty() {
                continue;
            }
            let cols: Vec<Column> = cols.into_iter().collect();
            let mut rows: Vec<Vec<Term>> = (0..sub.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            rows.sort();
            rows.dedup();
            out.insert(rows);
        }
    }
    out
}

/// Smallest `|U| + |W|` over row sets `W`, or `None` if none of the row sets
/// gives a decomposition of size at most `|T|`.
pub fn spanning_minimum(t: &TermSet) -> Option<usize> {
    spanning_minimum_with(t, usize::MAX)
}

/// As [`spanning_minimum`], over rows of at most `max_m` columns.
pub fn spanning_minimum_with(t: &TermSet, max_m: usize) -> Option<usize> {
    let terms: Vec<Term> = t.iter().cloned().collect();
    let n = terms.len();
    if n == 0 || n > 16 {
        return None;
    }
    let full = (1usize << n) - 1;
    let index = |x: &Term| terms.binary_search(x).ok();
    let mut best: Option<usize> = None;
    for w in spanned_row_sets(t) {
        let r = w.len();
        if r >= n || w[0].len() > max_m {
            continue;
        }
        let mut masks = BTreeSet::new();
        for x in &terms {
            for u in abstractions(x, &w[0]) {
                let mask = w.iter().try_fold(0usize, |m, row| index(&instantiate(&u, row)).map(|i| m | 1 << i));
                if let Some(m) = mask {
                    masks.insert(m);
                }
            }
        }
        let mut dp = vec![usize::MAX; full + 1];
        dp[0] = 0;
        for s in 0..=full {
            if dp[s] == usize::MAX {
                continue;
            }
            for &m in &masks {
                let next = s | m;
                dp[next] = dp[next].min(dp[s] + 1);
            }
        }
        if dp[full] != usize::MAX {
            let size = dp[full] + r;
            if size <= n && best.is_none_or(|b| size < b) {
                best = Some(size);
            }
        }
    }
    best
}

/// Smallest decomposition of `t` over all grammars whose patterns have a
/// function head, if one has size at most `|T|`.
///
/// A headed `u` yields at most `|W|` terms, all with its head, so a class of
/// `c` terms needs `⌈c/r⌉` patterns when `|W| = r`. The bound is met by
/// giving each pattern its own argument columns and listing the class along
/// the rows; a row-index column keeps the rows distinct.
pub fn headed_minimum(t: &TermSet) -> Option<Decomposition> {
    let n = t.len();
    let mut classes: BTreeMap<(Symbol, usize), Vec<&Term>> = BTreeMap::new();
    for x in t.iter() {
        let Term::App(f, args) = x else { return None };
        classes.entry((f.clone(), args.len())).or_default().push(x);
    }
    let cost = |r: usize| r + classes.values().map(|c| c.len().div_ceil(r)).sum::<usize>();
    let r = (2..=n).min_by_key(|&r| (cost(r), r))?;
    if cost(r) > n {
        return None;
    }
    let mut u = BTreeSet::new();
    let mut rows: Vec<Vec<Term>> = vec![Vec::new(); r];
    for ((f, arity), members) in &classes {
        for l in 0..members.len().div_ceil(r) {
            let first = rows[0].len();
            u.insert(Term::App(f.clone(), (0..*arity).map(|i| Term::alpha(first + i + 1)).collect()));
            for (j, row) in rows.iter_mut().enumerate() {
                row.extend(members[(l * r + j) % members.len()].args().iter().cloned());
            }
        }
    }
    for (j, row) in rows.iter_mut().enumerate() {
        row.push(Term::iterate("s", j, Term::constant("a")));
    }
    let m = rows[0].len();
    let d = Decomposition { u, w: rows.into_iter().collect(), m };
    assert!(validate_decomposition(&d, t), "witness {d} does not generate {t:?}");
    Some(d)
}
