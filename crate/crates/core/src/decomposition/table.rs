//! The Δ-table: simple decompositions of subsets of a term set, keyed by `W`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use super::{delta_g, DecompositionError};
use crate::herbrand::TermSet;
use crate::syntax::Term;

/// Hard cap on `|T|` for exhaustive subset enumeration.
pub const DEFAULT_TERMSET_LIMIT: usize = 22;

/// Rows of `W` as a sorted set; empty for `m = 0`.
pub type Key = Vec<Vec<Term>>;

/// `(u, T')` with `{u} ∘ W = T'`.
pub type Pair = (Term, BTreeSet<Term>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaTable {
    entries: BTreeMap<Key, BTreeSet<Pair>>,
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    /// Largest subset size enumerated; `None` means all of `T`.
    pub max_subset: Option<usize>,
    pub limit: usize,
    pub deadline: Option<Instant>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { max_subset: None, limit: DEFAULT_TERMSET_LIMIT, deadline: None }
    }
}

impl DeltaTable {
    pub fn entries(&self) -> &BTreeMap<Key, BTreeSet<Pair>> {
        &self.entries
    }

    pub fn get(&self, key: &[Vec<Term>]) -> Option<&BTreeSet<Pair>> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Arity of the rows of `key`.
    pub fn key_arity(key: &[Vec<Term>]) -> usize {
        key.first().map_or(0, Vec::len)
    }

    fn insert(&mut self, key: Key, pair: Pair) {
        self.entries.entry(key).or_default().insert(pair);
    }

    fn merge(&mut self, other: DeltaTable) {
        for (k, pairs) in other.entries {
            self.entries.entry(k).or_default().extend(pairs);
        }
    }
}

fn subset_entry(terms: &[Term], mask: u64) -> (Key, Pair) {
    let subset: Vec<Term> = (0..terms.len()).filter(|i| mask >> i & 1 == 1).map(|i| terms[i].clone()).collect();
    let d = delta_g(&subset);
    let key: Key = if d.m() == 0 { Vec::new() } else { d.rows().into_iter().collect::<BTreeSet<_>>().into_iter().collect() };
    (key, (d.u, subset.into_iter().collect()))
}

/// Inserts `Δ_G(T')` for every nonempty `T' ⊆ T` with `|T'| ≤ max_subset`.
///
/// Subsets are lists in the order of `T`. Work is split across threads and
/// merged by set union, so the result does not depend on scheduling.
pub fn build_delta_table(t: &TermSet, opts: &TableOptions) -> Result<DeltaTable, DecompositionError> {
    let n = t.len();
    if n > opts.limit || n >= 64 {
        return Err(DecompositionError::TooLarge { size: n, limit: opts.limit.min(63) });
    }
    let terms: Vec<Term> = t.iter().cloned().collect();
    let max = opts.max_subset.unwrap_or(n);
    let total: u64 = 1 << n;
    let threads = std::thread::available_parallelism().map_or(1, usize::from).min(16) as u64;
    let threads = if total < 4096 { 1 } else { threads };
    let chunk = total.div_ceil(threads);
    let parts: Vec<Result<DeltaTable, DecompositionError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let terms = &terms;
                scope.spawn(move || {
                    let mut local = DeltaTable::default();
                    let lo = (k * chunk).max(1);
                    let hi = ((k + 1) * chunk).min(total);
                    for mask in lo..hi {
                        if mask & 0xfff == 0 && opts.deadline.is_some_and(|d| Instant::now() > d) {
                            return Err(DecompositionError::Timeout);
                        }
                        if mask.count_ones() as usize <= max {
                            let (key, pair) = subset_entry(terms, mask);
                            local.insert(key, pair);
                        }
                    }
                    Ok(local)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("table worker panicked")).collect()
    });
    let mut table = DeltaTable::default();
    for part in parts {
        table.merge(part?);
    }
    Ok(table)
}

/// Keeps only entries whose rows have arity one.
pub fn restrict_ci1(dt: &DeltaTable) -> DeltaTable {
    DeltaTable { entries: dt.entries.iter().filter(|(k, _)| DeltaTable::key_arity(k) == 1).map(|(k, v)| (k.clone(), v.clone())).collect() }
}
