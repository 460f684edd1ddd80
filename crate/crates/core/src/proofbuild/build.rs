//! Proof construction from a solved schematic sequent, and the cut-free
//! proof of a Herbrand structure.

use std::mem;

use super::{Inference, LKProof, ProofError, ProofNode};
use crate::cutformula::{check_solution, SchematicEhs, SolutionCandidate};
use crate::evalidity::Oracle;
use crate::herbrand::{herbrand_sequent, HerbrandStructure};
use crate::syntax::{Formula, Quantifier, Sequent, Side, Sigma1Sequent, Substitution, Symbol, Term};

/// A branch of unary inferences, recorded from the conclusion upwards.
struct Chain {
    steps: Vec<(Sequent, Inference)>,
    cur: Sequent,
}

impl Chain {
    fn new(conclusion: Sequent) -> Self {
        Chain { steps: Vec::new(), cur: conclusion }
    }

    fn push(&mut self, inference: Inference, premise: Sequent) {
        let conclusion = mem::replace(&mut self.cur, premise);
        self.steps.push((conclusion, inference));
    }

    fn contract(&mut self, f: &Formula, side: Side) {
        let mut p = self.cur.clone();
        let inference = match side {
            Side::Ante => {
                p.ante.push(f.clone());
                Inference::ContractionLeft { formula: f.clone() }
            }
            Side::Succ => {
                p.succ.push(f.clone());
                Inference::ContractionRight { formula: f.clone() }
            }
        };
        self.push(inference, p);
    }

    fn replace(&mut self, side: Side, old: &Formula, new: Option<Formula>) -> Sequent {
        let mut p = self.cur.clone();
        let v = match side {
            Side::Ante => &mut p.ante,
            Side::Succ => &mut p.succ,
        };
        let i = v.iter().position(|x| x == old).expect("principal formula present");
        v.remove(i);
        v.extend(new);
        p
    }

    /// Introduces `principal` once per tuple, keeping one copy in the
    /// premise when `keep` is set and weakening it away when there are none.
    fn instantiate(&mut self, principal: &Formula, side: Side, tuples: &[Vec<Term>], keep: bool) {
        let Formula::Quant(_, vars, body) = principal else { return };
        if tuples.is_empty() && !keep {
            let p = self.replace(side, principal, None);
            let formula = principal.clone();
            let inference = match side {
                Side::Ante => Inference::WeakeningLeft { formula },
                Side::Succ => Inference::WeakeningRight { formula },
            };
            self.push(inference, p);
            return;
        }
        for (j, t) in tuples.iter().enumerate() {
            if keep || j + 1 < tuples.len() {
                self.contract(principal, side);
            }
            let inst = body.apply(&Substitution::from_pairs(vars, t));
            let p = self.replace(side, principal, Some(inst));
            let (principal, tuple) = (principal.clone(), t.clone());
            let inference = match side {
                Side::Ante => Inference::ForallLeft { principal, tuple },
                Side::Succ => Inference::ExistsRight { principal, tuple },
            };
            self.push(inference, p);
        }
    }

    fn leaf(self, oracle: &dyn Oracle) -> ProofNode {
        let certified = oracle.check(&self.cur).is_valid();
        let top = ProofNode::leaf(self.cur.clone(), Inference::OracleLeaf { certified });
        self.finish(top)
    }

    fn finish(self, top: ProofNode) -> ProofNode {
        self.steps.into_iter().rev().fold(top, |node, (conclusion, inference)| ProofNode { conclusion, inference, premises: vec![node] })
    }
}

/// A proof of the end-sequent with one cut on `∀x̄.A[ᾱ\x̄]`. Ground instances
/// are introduced below the cut and contracted into both branches; instances
/// containing `ᾱ` sit above the `∀:r` of the left branch, and the right
/// branch instantiates the cut formula once per row of `W`.
pub fn build_proof_with_cut(e: &SchematicEhs, a: &SolutionCandidate, oracle: &dyn Oracle) -> Result<LKProof, ProofError> {
    if e.k() == 0 {
        return Err(ProofError::EmptyW);
    }
    let a = &a.formula;
    if !check_solution(e, a, oracle).is_valid() {
        return Err(ProofError::NotASolution);
    }
    let right = e.right_sequent(a);
    if !oracle.check(&right).is_valid() {
        return Err(ProofError::RightPremise(right.to_string()));
    }
    let left = e.left_sequent(a);
    if !oracle.check(&left).is_valid() {
        return Err(ProofError::LeftPremise(left.to_string()));
    }

    let s = &e.base;
    let m = e.vars.len();
    let xs: Vec<Symbol> = (1..=m).map(|i| Symbol::new(&format!("x{i}"))).collect();
    let to_x = Substitution::from_pairs(&e.vars, &xs.iter().map(|x| Term::Var(x.clone())).collect::<Vec<_>>());
    let cut = Formula::quant(Quantifier::Forall, xs, a.apply(&to_x));

    let mut below = Chain::new(s.to_sequent());
    let mut alpha_tuples = Vec::new();
    for i in 1..=s.q() {
        if s.formula(i).arity() == 0 {
            continue;
        }
        // Split as `ground_context` does: by whether the instance mentions `ᾱ`.
        let pf = s.formula(i);
        let (ground, open): (Vec<Vec<Term>>, Vec<Vec<Term>>) =
            e.decomposition.get(i).iter().cloned().partition(|t| !pf.instance(t).free_vars().iter().any(Symbol::is_alpha));
        below.instantiate(&s.quantified(i), s.side(i), &ground, !open.is_empty());
        if !open.is_empty() {
            alpha_tuples.push((i, open));
        }
    }
    let (g0, d0) = e.ground_context();
    let shared = below.cur.clone();
    for f in &g0 {
        below.contract(f, Side::Ante);
    }
    for f in &d0 {
        below.contract(f, Side::Succ);
    }

    let mut left = shared.clone();
    left.succ.push(cut.clone());
    let mut lchain = Chain::new(left);
    if m > 0 {
        let free = lchain.cur.free_vars();
        if let Some(v) = e.vars.iter().find(|v| free.contains(*v)) {
            return Err(ProofError::Eigenvariable(v.to_string()));
        }
        let p = lchain.replace(Side::Succ, &cut, Some(a.clone()));
        lchain.push(Inference::ForallRight { principal: cut.clone(), eigenvars: e.vars.clone() }, p);
    }
    for (i, tuples) in &alpha_tuples {
        lchain.instantiate(&s.quantified(*i), s.side(*i), tuples, false);
    }

    let mut rchain = Chain::new(Sequent::new(std::iter::once(cut.clone()).chain(g0).collect(), d0));
    rchain.instantiate(&cut, Side::Ante, &e.w, false);

    let node = ProofNode { conclusion: below.cur.clone(), inference: Inference::Cut { formula: cut }, premises: vec![lchain.leaf(oracle), rchain.leaf(oracle)] };
    Ok(LKProof { root: below.finish(node) })
}

/// The cut-free proof: every tuple of `h` introduced directly above the
/// end-sequent, closed by the Herbrand sequent as a single leaf.
pub fn build_cut_free_proof(s: &Sigma1Sequent, h: &HerbrandStructure, oracle: &dyn Oracle) -> Result<LKProof, ProofError> {
    let leaf = herbrand_sequent(s, h);
    if !oracle.check(&leaf).is_valid() {
        return Err(ProofError::HerbrandSequent(leaf.to_string()));
    }
    let mut chain = Chain::new(s.to_sequent());
    for i in 1..=s.q() {
        if s.formula(i).arity() > 0 {
            let tuples: Vec<Vec<Term>> = h.get(i).iter().cloned().collect();
            chain.instantiate(&s.quantified(i), s.side(i), &tuples, false);
        }
    }
    Ok(LKProof { root: chain.leaf(oracle) })
}
