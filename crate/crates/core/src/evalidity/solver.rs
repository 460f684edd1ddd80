//! Ground satisfiability modulo equality: DPLL over the propositional
//! skeleton, with a congruence-closure consistency check on every partial
//! assignment. Free variables are treated as constants.

use std::collections::HashMap;

use super::cnf::{mk_and, nnf, Atom, Nnf};
use crate::syntax::{Formula, Symbol, Term};

type Lit = u32;

const AUX_TOP: usize = (u32::MAX >> 2) as usize;

fn lit(var: usize, positive: bool) -> Lit {
    ((var as u32) << 1) | u32::from(!positive)
}

fn var_of(l: Lit) -> usize {
    (l >> 1) as usize
}

fn is_pos(l: Lit) -> bool {
    l & 1 == 0
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Head {
    Fun(Symbol),
    Var(Symbol),
    Pred(Symbol),
    True,
}

/// Term DAG over the subterm universe of the query.
struct TermGraph {
    nodes: Vec<(Head, Vec<usize>)>,
    index: HashMap<(Head, Vec<usize>), usize>,
    true_node: usize,
}

impl TermGraph {
    fn new() -> Self {
        let mut g = TermGraph { nodes: Vec::new(), index: HashMap::new(), true_node: 0 };
        g.true_node = g.intern(Head::True, Vec::new());
        g
    }

    fn intern(&mut self, head: Head, args: Vec<usize>) -> usize {
        let key = (head, args);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(key.clone());
        self.index.insert(key, id);
        id
    }

    fn term(&mut self, t: &Term) -> usize {
        match t {
            Term::Var(v) => self.intern(Head::Var(v.clone()), Vec::new()),
            Term::App(f, args) => {
                let ids = args.iter().map(|a| self.term(a)).collect();
                self.intern(Head::Fun(f.clone()), ids)
            }
        }
    }
}

/// How an atom constrains the term graph when assigned.
#[derive(Clone, Copy)]
enum TheoryAtom {
    /// `l = r`.
    Eq(usize, usize),
    /// A predicate application node, compared against the `true` node.
    Pred(usize),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }
}

pub(crate) struct Problem {
    clauses: Vec<Vec<Lit>>,
    num_vars: usize,
    num_atoms: usize,
    theory: Option<(TermGraph, Vec<TheoryAtom>)>,
    trivially_unsat: bool,
}

struct Encoder {
    atoms: HashMap<Atom, usize>,
    atom_list: Vec<Atom>,
    clauses: Vec<Vec<Lit>>,
    aux: usize,
}

impl Encoder {
    fn atom_var(&mut self, a: &Atom) -> usize {
        if let Some(&v) = self.atoms.get(a) {
            return v;
        }
        let v = self.atom_list.len();
        self.atoms.insert(a.clone(), v);
        self.atom_list.push(a.clone());
        v
    }

    /// Returns a literal that implies `n` (positive-polarity definitions).
    fn define(&mut self, n: &Nnf, defs: &mut Vec<Vec<Lit>>) -> Lit {
        match n {
            Nnf::Lit(l) => lit(self.atom_var(&l.atom), l.positive),
            Nnf::And(parts) => {
                let me = self.fresh();
                for p in parts {
                    let pl = self.define(p, defs);
                    defs.push(vec![me ^ 1, pl]);
                }
                me
            }
            Nnf::Or(parts) => {
                let me = self.fresh();
                let mut clause = vec![me ^ 1];
                for p in parts {
                    clause.push(self.define(p, defs));
                }
                defs.push(clause);
                me
            }
            Nnf::True | Nnf::False => unreachable!("constants are simplified away"),
        }
    }

    /// Auxiliary variables count down from a high index and are renumbered
    /// to follow the atoms once encoding finishes.
    fn fresh(&mut self) -> Lit {
        let v = AUX_TOP - self.aux;
        self.aux += 1;
        lit(v, true)
    }

    /// Adds clauses asserting `n`.
    fn assert(&mut self, n: &Nnf, defs: &mut Vec<Vec<Lit>>) -> bool {
        match n {
            Nnf::True => true,
            Nnf::False => false,
            Nnf::And(parts) => {
                for p in parts {
                    if !self.assert(p, defs) {
                        return false;
                    }
                }
                true
            }
            Nnf::Or(parts) => {
                let clause = parts.iter().map(|p| self.define(p, defs)).collect();
                self.clauses.push(clause);
                true
            }
            Nnf::Lit(_) => {
                let l = self.define(n, defs);
                self.clauses.push(vec![l]);
                true
            }
        }
    }
}

impl Problem {
    /// Encodes the satisfiability of `⋀ assertions`. With `equality` unset,
    /// equations are opaque propositional atoms and predicates are not
    /// subject to congruence. Returns `None` if a formula is quantified.
    pub(crate) fn new(assertions: &[Formula], equality: bool) -> Option<Problem> {
        let mut parts = Vec::new();
        for f in assertions {
            parts.push(nnf(f, true).ok()?);
        }
        let root = mk_and(parts);
        let mut enc = Encoder { atoms: HashMap::new(), atom_list: Vec::new(), clauses: Vec::new(), aux: 0 };
        let mut defs = Vec::new();
        let ok = enc.assert(&root, &mut defs);
        enc.clauses.extend(defs);
        let num_atoms = enc.atom_list.len();
        // Renumber auxiliary variables to sit directly after the atoms.
        let top = AUX_TOP;
        let remap = |l: Lit| -> Lit {
            let v = var_of(l);
            if v < num_atoms {
                l
            } else {
                let idx = top - v;
                lit(num_atoms + idx, is_pos(l))
            }
        };
        let clauses: Vec<Vec<Lit>> = enc.clauses.iter().map(|c| c.iter().map(|&l| remap(l)).collect()).collect();
        let theory = equality.then(|| {
            let mut g = TermGraph::new();
            let atoms = enc
                .atom_list
                .iter()
                .map(|a| match a {
                    Atom::Eq(l, r) => TheoryAtom::Eq(g.term(l), g.term(r)),
                    Atom::Pred(p, args) => {
                        let ids = args.iter().map(|t| g.term(t)).collect();
                        TheoryAtom::Pred(g.intern(Head::Pred(p.clone()), ids))
                    }
                })
                .collect();
            (g, atoms)
        });
        Some(Problem { clauses, num_vars: num_atoms + enc.aux, num_atoms, theory, trivially_unsat: !ok })
    }
}

/// The search gave up after exhausting its step budget.
pub(crate) struct Exhausted;

struct Search<'a> {
    p: &'a Problem,
    assign: Vec<i8>,
    trail: Vec<usize>,
    steps: usize,
    cap: usize,
}

impl Search<'_> {
    fn value(&self, l: Lit) -> i8 {
        let v = self.assign[var_of(l)];
        if is_pos(l) {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, l: Lit) {
        self.assign[var_of(l)] = if is_pos(l) { 1 } else { -1 };
        self.trail.push(var_of(l));
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.assign[v] = 0;
        }
    }

    /// Unit propagation to fixpoint; false on a falsified clause.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in &self.p.clauses {
                let mut unassigned = None;
                let mut count = 0;
                let mut sat = false;
                for &l in c {
                    match self.value(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            count += 1;
                            unassigned = Some(l);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match count {
                    0 => return false,
                    1 => {
                        let l = unassigned.unwrap();
                        self.assign[var_of(l)] = if is_pos(l) { 1 } else { -1 };
                        self.trail.push(var_of(l));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn theory_consistent(&self) -> bool {
        let Some((graph, atoms)) = &self.p.theory else { return true };
        let n = graph.nodes.len();
        let mut uf = UnionFind::new(n);
        let mut diseqs = Vec::new();
        for (v, atom) in atoms.iter().enumerate() {
            let val = self.assign[v];
            if val == 0 {
                continue;
            }
            let (a, b) = match *atom {
                TheoryAtom::Eq(l, r) => (l, r),
                TheoryAtom::Pred(node) => (node, graph.true_node),
            };
            if val > 0 {
                uf.union(a, b);
            } else {
                diseqs.push((a, b));
            }
        }
        if diseqs.is_empty() {
            return true;
        }
        // Congruence closure by repeated signature hashing.
        let mut sigs: HashMap<(&Head, Vec<usize>), usize> = HashMap::with_capacity(n);
        loop {
            let mut merged = false;
            sigs.clear();
            for (id, (head, args)) in graph.nodes.iter().enumerate() {
                if args.is_empty() {
                    continue;
                }
                let key = (head, args.iter().map(|&a| uf.find(a)).collect::<Vec<_>>());
                match sigs.get(&key) {
                    Some(&other) => merged |= uf.union(other, id),
                    None => {
                        sigs.insert(key, id);
                    }
                }
            }
            if !merged {
                break;
            }
        }
        diseqs.into_iter().all(|(a, b)| uf.find(a) != uf.find(b))
    }

    fn branch_literal(&self) -> Option<Lit> {
        for c in &self.p.clauses {
            if c.iter().any(|&l| self.value(l) == 1) {
                continue;
            }
            // Prefer atoms over auxiliary definitions.
            let mut best = None;
            for &l in c {
                if self.value(l) == 0 {
                    if var_of(l) < self.p.num_atoms {
                        return Some(l);
                    }
                    best.get_or_insert(l);
                }
            }
            if best.is_some() {
                return best;
            }
        }
        None
    }

    fn solve(&mut self) -> Result<bool, Exhausted> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Exhausted);
        }
        if !self.propagate() || !self.theory_consistent() {
            return Ok(false);
        }
        let Some(l) = self.branch_literal() else { return Ok(true) };
        for choice in [l, l ^ 1] {
            let mark = self.trail.len();
            self.set(choice);
            if self.solve()? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

impl Problem {
    pub(crate) fn satisfiable(&self, step_cap: usize) -> Result<bool, Exhausted> {
        if self.trivially_unsat {
            return Ok(false);
        }
        let mut s = Search { p: self, assign: vec![0; self.num_vars], trail: Vec::new(), steps: 0, cap: step_cap };
        s.solve()
    }
}
