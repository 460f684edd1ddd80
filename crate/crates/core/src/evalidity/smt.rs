//! SMT-LIB2 export of quasi-tautology queries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::syntax::{Formula, Sequent, Term};

fn quoted(kind: char, name: &str) -> String {
    let clean: String = name.chars().map(|c| if c == '|' || c == '\\' { '_' } else { c }).collect();
    format!("|{kind}:{clean}|")
}

fn term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&quoted('v', v.as_str())),
        Term::App(f, args) if args.is_empty() => out.push_str(&quoted('f', f.as_str())),
        Term::App(f, args) => {
            out.push('(');
            out.push_str(&quoted('f', f.as_str()));
            for a in args {
                out.push(' ');
                term(a, out);
            }
            out.push(')');
        }
    }
}

fn formula(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Pred(p, args) if args.is_empty() => out.push_str(&quoted('p', p.as_str())),
        Formula::Pred(p, args) => {
            out.push('(');
            out.push_str(&quoted('p', p.as_str()));
            for a in args {
                out.push(' ');
                term(a, out);
            }
            out.push(')');
        }
        Formula::Eq(l, r) => {
            out.push_str("(= ");
            term(l, out);
            out.push(' ');
            term(r, out);
            out.push(')');
        }
        Formula::Not(a) => {
            out.push_str("(not ");
            formula(a, out);
            out.push(')');
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            let op = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                _ => "=>",
            };
            write!(out, "({op} ").unwrap();
            formula(a, out);
            out.push(' ');
            formula(b, out);
            out.push(')');
        }
        Formula::Quant(..) => panic!("SMT export expects a quantifier-free sequent"),
    }
}

fn collect_term(t: &Term, funs: &mut BTreeMap<String, usize>) {
    match t {
        Term::Var(v) => {
            funs.insert(quoted('v', v.as_str()), 0);
        }
        Term::App(f, args) => {
            funs.insert(quoted('f', f.as_str()), args.len());
            args.iter().for_each(|a| collect_term(a, funs));
        }
    }
}

fn collect(f: &Formula, funs: &mut BTreeMap<String, usize>, preds: &mut BTreeMap<String, usize>) {
    match f {
        Formula::Pred(p, args) => {
            preds.insert(quoted('p', p.as_str()), args.len());
            args.iter().for_each(|a| collect_term(a, funs));
        }
        Formula::Eq(l, r) => {
            collect_term(l, funs);
            collect_term(r, funs);
        }
        Formula::Not(a) | Formula::Quant(_, _, a) => collect(a, funs, preds),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect(a, funs, preds);
            collect(b, funs, preds);
        }
        Formula::True | Formula::False => {}
    }
}

/// A QF_UF script asserting the negation of `s`: `unsat` iff `s` is a
/// quasi-tautology. Free variables are declared as constants.
pub fn export_smt2(s: &Sequent) -> String {
    let mut funs = BTreeMap::new();
    let mut preds = BTreeMap::new();
    for f in s.ante.iter().chain(&s.succ) {
        collect(f, &mut funs, &mut preds);
    }
    let mut out = String::new();
    out.push_str("(set-logic QF_UF)\n(declare-sort U 0)\n");
    for (name, arity) in &funs {
        let args = vec!["U"; *arity].join(" ");
        writeln!(out, "(declare-fun {name} ({args}) U)").unwrap();
    }
    for (name, arity) in &preds {
        let args = vec!["U"; *arity].join(" ");
        writeln!(out, "(declare-fun {name} ({args}) Bool)").unwrap();
    }
    let mut goal = String::new();
    formula(&s.to_formula(), &mut goal);
    writeln!(out, "(assert (not {goal}))").unwrap();
    out.push_str("(check-sat)\n(exit)\n");
    out
}
