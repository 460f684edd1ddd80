//! Folding the Δ-table: covering `T` by the pairs available under one key.
//!
//! Under a key `W` of arity `m`, a pair `(u', T')` stored under `W'` is usable
//! whenever some injective column map `φ` projects the rows of `W` onto
//! exactly `W'`; `u'` is then renamed along `φ` and still generates `T'`.
//! Ground pairs `(t, {t})` are usable under every key.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use super::table::{DeltaTable, Key};
use super::{Decomposition, DecompositionError};
use crate::herbrand::TermSet;
use crate::syntax::{Substitution, Symbol, Term};

struct Entry<'a> {
    key: &'a Key,
    cols: Vec<usize>,
    pairs: Vec<(&'a Term, u32)>,
}

fn column_support(key: &Key, j: usize) -> BTreeSet<&Term> {
    key.iter().map(|row| &row[j]).collect()
}

fn rename(u: &Term, phi: &[usize]) -> Term {
    let mut sigma = Substitution::new();
    for (j, &k) in phi.iter().enumerate() {
        sigma.insert(Symbol::alpha(j + 1), Term::alpha(k + 1));
    }
    u.apply(&sigma)
}

/// All injective `φ` with `{ w̄∘φ | w̄ ∈ W } = W'`, where `φ(j')` must be a
/// column of `W` with the same value set as column `j'` of `W'`.
fn projections(key: &Key, key_cols: &[usize], entry: &Entry<'_>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut phi = Vec::with_capacity(entry.cols.len());
    let mut used = vec![false; key_cols.len()];
    fn go(key: &Key, key_cols: &[usize], entry: &Entry<'_>, phi: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let j = phi.len();
        if j == entry.cols.len() {
            let projected: BTreeSet<Vec<&Term>> = key.iter().map(|row| phi.iter().map(|&k| &row[k]).collect()).collect();
            if projected.len() == entry.key.len() && projected.iter().zip(entry.key).all(|(p, e)| p.iter().copied().eq(e.iter())) {
                out.push(phi.clone());
            }
            return;
        }
        for k in 0..key_cols.len() {
            if !used[k] && key_cols[k] == entry.cols[j] {
                used[k] = true;
                phi.push(k);
                go(key, key_cols, entry, phi, used, out);
                phi.pop();
                used[k] = false;
            }
        }
    }
    go(key, key_cols, entry, &mut phi, &mut used, &mut out);
    out
}

/// Smallest set of masks covering `full`, at most `limit` of them.
fn min_cover(full: u32, cands: &[(u32, String)], limit: usize) -> Option<Vec<usize>> {
    let n = full.count_ones() as usize;
    let mut by_elem: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (mask, _)) in cands.iter().enumerate() {
        for (e, list) in by_elem.iter_mut().enumerate() {
            if mask >> e & 1 == 1 {
                list.push(i);
            }
        }
    }
    for list in &mut by_elem {
        list.sort_by(|&a, &b| cands[b].0.count_ones().cmp(&cands[a].0.count_ones()).then_with(|| cands[a].1.cmp(&cands[b].1)));
    }
    let max_pop = cands.iter().map(|c| c.0.count_ones()).max()? as usize;
    struct Search<'a> {
        full: u32,
        cands: &'a [(u32, String)],
        by_elem: &'a [Vec<usize>],
        max_pop: usize,
        best: Option<Vec<usize>>,
        best_len: usize,
    }
    impl Search<'_> {
        fn go(&mut self, covered: u32, chosen: &mut Vec<usize>) {
            if covered == self.full {
                if chosen.len() < self.best_len {
                    self.best_len = chosen.len();
                    self.best = Some(chosen.clone());
                }
                return;
            }
            let missing = (self.full & !covered).count_ones() as usize;
            if chosen.len() + missing.div_ceil(self.max_pop) >= self.best_len {
                return;
            }
            let e = (self.full & !covered).trailing_zeros() as usize;
            for &i in &self.by_elem[e] {
                chosen.push(i);
                self.go(covered | self.cands[i].0, chosen);
                chosen.pop();
            }
        }
    }
    let mut s = Search { full, cands, by_elem: &by_elem, max_pop, best: None, best_len: limit + 1 };
    s.go(0, &mut Vec::new());
    s.best
}

/// [`fold_delta_table_until`] without a deadline.
pub fn fold_delta_table(dt: &DeltaTable, t: &TermSet) -> Vec<Decomposition> {
    fold_delta_table_until(dt, t, None).expect("no deadline")
}

/// All minimal decompositions of size at most `|T|` obtainable by folding,
/// one per key, ordered by `(|W|, printed form)`. Empty if none exists.
pub fn fold_delta_table_until(dt: &DeltaTable, t: &TermSet, deadline: Option<Instant>) -> Result<Vec<Decomposition>, DecompositionError> {
    let n = t.len();
    if n == 0 || n > 32 {
        return Ok(Vec::new());
    }
    let index: HashMap<&Term, usize> = t.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mask_of = |set: &BTreeSet<Term>| -> Option<u32> {
        set.iter().try_fold(0u32, |m, x| index.get(x).map(|&i| m | 1 << i))
    };

    let mut supports: HashMap<BTreeSet<&Term>, usize> = HashMap::new();
    let mut entries = Vec::new();
    for (key, pairs) in dt.entries() {
        let m = DeltaTable::key_arity(key);
        if m == 0 {
            continue;
        }
        let cols = (0..m)
            .map(|j| {
                let next = supports.len();
                *supports.entry(column_support(key, j)).or_insert(next)
            })
            .collect();
        let pairs = pairs.iter().filter_map(|(u, ts)| mask_of(ts).map(|mask| (u, mask))).collect();
        entries.push(Entry { key, cols, pairs });
    }
    // Entries by the value set of their first column.
    let mut by_first: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in entries.iter().enumerate() {
        by_first.entry(e.cols[0]).or_default().push(i);
    }

    let ground: Vec<(Term, u32)> = t.iter().enumerate().map(|(i, x)| (x.clone(), 1u32 << i)).collect();
    let mut best = n;
    let mut found: Vec<Decomposition> = Vec::new();
    for target in &entries {
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Err(DecompositionError::Timeout);
        }
        let key = target.key;
        let r = key.len();
        if r + n.div_ceil(r) > best {
            continue;
        }
        let key_cols = &target.cols;
        let distinct: BTreeSet<usize> = key_cols.iter().copied().collect();
        // Best pattern per covered subset.
        let mut by_mask: BTreeMap<u32, (String, Term)> = BTreeMap::new();
        let mut offer = |mask: u32, u: Term| {
            let printed = u.to_string();
            match by_mask.get(&mask) {
                Some((p, _)) if *p <= printed => {}
                _ => {
                    by_mask.insert(mask, (printed, u));
                }
            }
        };
        for (u, mask) in &ground {
            offer(*mask, u.clone());
        }
        for c in &distinct {
            for &ei in by_first.get(c).into_iter().flatten() {
                let e = &entries[ei];
                if e.key.len() > r || e.cols.len() > key_cols.len() || !e.cols.iter().all(|c| distinct.contains(c)) {
                    continue;
                }
                for phi in projections(key, key_cols, e) {
                    for &(u, mask) in &e.pairs {
                        offer(mask, rename(u, &phi));
                    }
                }
            }
        }
        // Masks contained in another mask never help a minimum cover.
        let masks: Vec<u32> = by_mask.keys().copied().collect();
        let cands: Vec<(u32, String)> = by_mask
            .iter()
            .filter(|(m, _)| !masks.iter().any(|o| o != *m && o & **m == **m))
            .map(|(m, (p, _))| (*m, p.clone()))
            .collect();
        let limit = best - r;
        let Some(cover) = min_cover(full, &cands, limit) else { continue };
        let size = cover.len() + r;
        if size < best {
            best = size;
            found.clear();
        }
        let u = cover.iter().map(|&i| by_mask[&cands[i].0].1.clone()).collect();
        found.push(Decomposition { u, w: key.iter().cloned().collect(), m: key_cols.len() });
    }
    found.retain(|d| d.size() == best);
    found.sort_by_cached_key(|d| (d.w.len(), d.to_string()));
    found.dedup();
    Ok(found)
}
