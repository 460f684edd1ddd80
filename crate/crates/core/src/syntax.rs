//! First-order syntax with equality: terms, formulas, substitutions and sequents.
//!
//! Everything here is an immutable value with structural equality and a total
//! order, so terms and formulas can be used directly as keys of ordered sets
//! and maps (the decomposition table and the solution search rely on that).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Prefix of generated eigen-/grammar variables. The parser rejects it.
pub const ALPHA_PREFIX: &str = "α";
/// Prefix of the per-formula head symbols used to encode a Herbrand structure.
pub const RESERVED_HEAD_PREFIX: &str = "#f";

/// An interned-by-refcount symbol name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The `i`-th grammar variable `αi` (1-based).
    pub fn alpha(i: usize) -> Self {
        Symbol::new(&format!("{ALPHA_PREFIX}{i}"))
    }

    pub fn is_alpha(&self) -> bool {
        self.0.starts_with(ALPHA_PREFIX)
    }

    /// The head symbol tagging instances of formula `i` (1-based).
    pub fn reserved_head(i: usize) -> Self {
        Symbol::new(&format!("{RESERVED_HEAD_PREFIX}{i}"))
    }

    /// Formula index of a reserved head symbol.
    pub fn reserved_index(&self) -> Option<usize> {
        self.0.strip_prefix(RESERVED_HEAD_PREFIX)?.parse().ok()
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Symbol::new(&s))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(Symbol),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Self {
        Term::App(Symbol::new(name), Vec::new())
    }

    pub fn app(head: &str, args: Vec<Term>) -> Self {
        Term::App(Symbol::new(head), args)
    }

    pub fn alpha(i: usize) -> Self {
        Term::Var(Symbol::alpha(i))
    }

    /// `head` applied `n` times to `t`, e.g. `iterate("s", 3, a)` is `s(s(s(a)))`.
    pub fn iterate(head: &str, n: usize, t: Term) -> Self {
        (0..n).fold(t, |acc, _| Term::app(head, vec![acc]))
    }

    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::App(h, _) => Some(h),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_alpha(&self) -> bool {
        match self {
            Term::Var(v) => v.is_alpha(),
            Term::App(_, args) => args.iter().any(Term::contains_alpha),
        }
    }

    pub fn apply(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(h, args) => Term::App(h.clone(), args.iter().map(|a| a.apply(sigma)).collect()),
        }
    }

    /// Visits every subterm, parents before children.
    pub fn for_each_subterm<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for a in self.args() {
            a.for_each_subterm(f);
        }
    }

    /// Records `symbol -> arity` for every function symbol occurring in the term.
    pub fn collect_signature(&self, out: &mut BTreeMap<Symbol, usize>) -> Result<(), (Symbol, usize, usize)> {
        if let Term::App(h, args) = self {
            if let Some(&k) = out.get(h) {
                if k != args.len() {
                    return Err((h.clone(), k, args.len()));
                }
            } else {
                out.insert(h.clone(), args.len());
            }
            for a in args {
                a.collect_signature(out)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(h, args) if args.is_empty() => write!(f, "{h}"),
            Term::App(h, args) => {
                write!(f, "{h}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Prints a tuple of terms as `(t1,...,tn)`, or the bare term when `n = 1`.
pub struct Tuple<'a>(pub &'a [Term]);

impl fmt::Display for Tuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// Simultaneous substitution of terms for variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<Symbol, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// `[x̄ \ t̄]`. Panics if the lengths differ.
    pub fn from_pairs(vars: &[Symbol], terms: &[Term]) -> Self {
        assert_eq!(vars.len(), terms.len(), "substitution arity mismatch");
        Substitution(vars.iter().cloned().zip(terms.iter().cloned()).collect())
    }

    pub fn insert(&mut self, v: Symbol, t: Term) {
        self.0.insert(v, t);
    }

    pub fn get(&self, v: &Symbol) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.0.iter()
    }

    /// `other ∘ self`: applying the result equals applying `self`, then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out: BTreeMap<Symbol, Term> =
            self.0.iter().map(|(v, t)| (v.clone(), t.apply(other))).collect();
        for (v, t) in &other.0 {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Pred(Symbol, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Vec<Symbol>, Box<Formula>),
}

impl Formula {
    pub fn pred(name: &str, args: Vec<Term>) -> Self {
        Formula::Pred(Symbol::new(name), args)
    }

    pub fn eq(l: Term, r: Term) -> Self {
        Formula::Eq(l, r)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quantifier, vars: Vec<Symbol>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Quant(q, vars, Box::new(body))
        }
    }

    /// Left-nested conjunction; `True` for the empty list.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; `False` for the empty list.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Pred(..) | Formula::Eq(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Quant(..) => false,
        }
    }

    pub fn has_equality(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::True | Formula::False | Formula::Pred(..) => false,
            Formula::Not(a) | Formula::Quant(_, _, a) => a.has_equality(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.has_equality() || b.has_equality(),
        }
    }

    /// Number of logical-symbol and atom nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Pred(..) | Formula::Eq(..) => 1,
            Formula::Not(a) | Formula::Quant(_, _, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Pred(_, args) => args.iter().for_each(&mut *f),
            Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Not(a) | Formula::Quant(_, _, a) => a.for_each_term(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.for_each_term(f);
                b.for_each_term(f);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Quant(_, vars, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free_vars(&mut inner);
                for v in inner {
                    if !vars.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            _ => self.for_each_term(&mut |t| t.collect_vars(out)),
        }
    }

    /// Simultaneous substitution. Bound variables of a quantifier block are
    /// never replaced inside it; the terms substituted are assumed not to
    /// contain variables bound by the block (true for ground and α-terms).
    pub fn apply(&self, sigma: &Substitution) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|t| t.apply(sigma)).collect()),
            Formula::Eq(l, r) => Formula::Eq(l.apply(sigma), r.apply(sigma)),
            Formula::Not(a) => Formula::not(a.apply(sigma)),
            Formula::And(a, b) => Formula::and(a.apply(sigma), b.apply(sigma)),
            Formula::Or(a, b) => Formula::or(a.apply(sigma), b.apply(sigma)),
            Formula::Imp(a, b) => Formula::imp(a.apply(sigma), b.apply(sigma)),
            Formula::Quant(q, vars, body) => {
                let mut inner = Substitution::new();
                for (v, t) in sigma.iter() {
                    if !vars.contains(v) {
                        inner.insert(v.clone(), t.clone());
                    }
                }
                Formula::Quant(*q, vars.clone(), Box::new(body.apply(&inner)))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Quant(..) => 0,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let paren = prec < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::True => f.write_str("$true")?,
            Formula::False => f.write_str("$false")?,
            Formula::Pred(p, args) => write!(f, "{}", Term::App(p.clone(), args.clone()))?,
            Formula::Eq(l, r) => write!(f, "{l} = {r}")?,
            Formula::Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, 4)?;
            }
            // & and | associate to the left, -> to the right.
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Imp(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Quant(q, vars, body) => {
                f.write_str(match q {
                    Quantifier::Forall => "all",
                    Quantifier::Exists => "ex",
                })?;
                for v in vars {
                    write!(f, " {v}")?;
                }
                f.write_str(": ")?;
                body.fmt_prec(f, 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A sequent `ante ⊢ succ`, read as multisets.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Self {
        Sequent { ante, succ }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.ante.iter().chain(&self.succ).all(Formula::is_quantifier_free)
    }

    pub fn has_equality(&self) -> bool {
        self.ante.iter().chain(&self.succ).any(Formula::has_equality)
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        self.ante.iter().chain(&self.succ).flat_map(Formula::free_vars).collect()
    }

    /// The formula `⋀ante → ⋁succ`.
    pub fn to_formula(&self) -> Formula {
        Formula::imp(Formula::conj(self.ante.iter().cloned()), Formula::disj(self.succ.iter().cloned()))
    }

    /// Multiset equality of both sides.
    pub fn same_multiset(&self, other: &Sequent) -> bool {
        fn sorted(v: &[Formula]) -> Vec<&Formula> {
            let mut s: Vec<&Formula> = v.iter().collect();
            s.sort();
            s
        }
        sorted(&self.ante) == sorted(&other.ante) && sorted(&self.succ) == sorted(&other.succ)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.ante.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(if self.ante.is_empty() { "⊢" } else { " ⊢" })?;
        for (i, s) in self.succ.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One formula of a Σ1-sequent: a (possibly empty) weak quantifier block over
/// a quantifier-free matrix. Its polarity is given by the side it sits on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrenexFormula {
    pub vars: Vec<Symbol>,
    pub matrix: Formula,
}

impl PrenexFormula {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn instance(&self, tuple: &[Term]) -> Formula {
        self.matrix.apply(&Substitution::from_pairs(&self.vars, tuple))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Ante,
    Succ,
}

/// `∀x̄₁F₁, …, ∀x̄ₚFₚ ⊢ ∃x̄ₚ₊₁Fₚ₊₁, …, ∃x̄_qF_q` with quantifier-free `Fᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma1Sequent {
    pub ante: Vec<PrenexFormula>,
    pub succ: Vec<PrenexFormula>,
}

impl Sigma1Sequent {
    /// Number of antecedent formulas.
    pub fn p(&self) -> usize {
        self.ante.len()
    }

    /// Total number of formulas.
    pub fn q(&self) -> usize {
        self.ante.len() + self.succ.len()
    }

    /// Formula `i`, 1-based in antecedent-then-succedent order.
    pub fn formula(&self, i: usize) -> &PrenexFormula {
        assert!(i >= 1 && i <= self.q(), "formula index {i} out of range");
        if i <= self.p() {
            &self.ante[i - 1]
        } else {
            &self.succ[i - 1 - self.p()]
        }
    }

    pub fn side(&self, i: usize) -> Side {
        if i <= self.p() {
            Side::Ante
        } else {
            Side::Succ
        }
    }

    pub fn arities(&self) -> Vec<usize> {
        self.ante.iter().chain(&self.succ).map(PrenexFormula::arity).collect()
    }

    pub fn has_equality(&self) -> bool {
        self.ante.iter().chain(&self.succ).any(|f| f.matrix.has_equality())
    }

    /// Formula `i` with its quantifier block in place.
    pub fn quantified(&self, i: usize) -> Formula {
        let pf = self.formula(i);
        let q = match self.side(i) {
            Side::Ante => Quantifier::Forall,
            Side::Succ => Quantifier::Exists,
        };
        Formula::quant(q, pf.vars.clone(), pf.matrix.clone())
    }

    pub fn to_sequent(&self) -> Sequent {
        let p = self.p();
        Sequent::new(
            (1..=p).map(|i| self.quantified(i)).collect(),
            (p + 1..=self.q()).map(|i| self.quantified(i)).collect(),
        )
    }
}
