//! Reader and writer for `.cis` problem files.
//!
//! ```text
//! % running example
//! ante p(f(f(a)), a).
//! ante all x: f(x) = s(s(x)).
//! succ ex x y: p(x, y).
//! inst 2: a; f(a).
//! inst 3: (a, b); (b, a).
//! ```
//!
//! Formulas are numbered from 1 in antecedent-then-succedent order. An `inst`
//! line may be empty and may be repeated; tuples accumulate as a set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::herbrand::HerbrandStructure;
use crate::syntax::{Formula, PrenexFormula, Sigma1Sequent, Symbol, Term, Tuple, ALPHA_PREFIX};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: symbol `{symbol}` used with {found} argument(s), elsewhere with {expected}")]
    Arity { line: usize, col: usize, symbol: String, expected: usize, found: usize },
    #[error("{line}:{col}: instance for formula {index} has {found} term(s), expected {expected}")]
    InstanceArity { line: usize, col: usize, index: usize, expected: usize, found: usize },
    #[error("{line}:{col}: formula {index} has no quantifier block and takes no instances")]
    UnquantifiedInstance { line: usize, col: usize, index: usize },
    #[error("{line}:{col}: no formula with index {index}")]
    UnknownFormula { line: usize, col: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Eq,
    True,
    False,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('%') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let err = |msg: String| ParseError::Syntax { line, col, msg };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semi),
                ':' => Some(Tok::Colon),
                '.' => Some(Tok::Dot),
                '~' => Some(Tok::Not),
                '&' => Some(Tok::And),
                '|' => Some(Tok::Or),
                '=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, col });
                i += 1;
            } else if c == '-' {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Spanned { tok: Tok::Imp, line, col });
                    i += 2;
                } else {
                    return Err(err("expected `->`".into()));
                }
            } else if c == '$' {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => return Err(err(format!("unknown constant `${word}`"))),
                };
                out.push(Spanned { tok, line, col });
                i = j;
            } else if is_ident_char(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word.starts_with(ALPHA_PREFIX) {
                    return Err(err(format!("identifier `{word}` uses the reserved prefix `{ALPHA_PREFIX}`")));
                }
                out.push(Spanned { tok: Tok::Ident(word), line, col });
            } else if c == '#' {
                return Err(err("`#` symbols are reserved".into()));
            } else {
                return Err(err(format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct PendingInst {
    index: usize,
    line: usize,
    col: usize,
    tuples: Vec<(Vec<Term>, usize, usize)>,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// `symbol -> arity`, functions and predicates kept apart.
    functions: BTreeMap<Symbol, usize>,
    predicates: BTreeMap<Symbol, usize>,
    bound: Vec<Symbol>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn loc(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(s) => (s.line, s.col),
            None => (1, 1),
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.loc();
        Err(ParseError::Syntax { line, col, msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn record_arity(&mut self, pred: bool, name: &Symbol, arity: usize, at: (usize, usize)) -> Result<(), ParseError> {
        let table = if pred { &mut self.predicates } else { &mut self.functions };
        match table.get(name) {
            Some(&k) if k != arity => Err(ParseError::Arity {
                line: at.0,
                col: at.1,
                symbol: name.to_string(),
                expected: k,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                table.insert(name.clone(), arity);
                Ok(())
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.loc();
        let name = self.ident("a term")?;
        let sym = Symbol::new(&name);
        let args = self.opt_args()?;
        if self.bound.contains(&sym) {
            if args.is_some() {
                return Err(ParseError::Syntax {
                    line: at.0,
                    col: at.1,
                    msg: format!("bound variable `{name}` applied to arguments"),
                });
            }
            return Ok(Term::Var(sym));
        }
        let args = args.unwrap_or_default();
        self.record_arity(false, &sym, args.len(), at)?;
        Ok(Term::App(sym, args))
    }

    fn opt_args(&mut self) -> Result<Option<Vec<Term>>, ParseError> {
        if self.peek() != Some(&Tok::LParen) {
            return Ok(None);
        }
        self.pos += 1;
        let mut args = vec![self.term()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(Some(args))
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.imp()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(s)) if is_keyword(s) => {
                self.error("quantifiers are only allowed at the top of a formula")
            }
            Some(Tok::Ident(_)) => self.atomic(),
            _ => self.error("expected a formula"),
        }
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        let at = self.loc();
        let name = self.ident("an atom")?;
        let args = self.opt_args()?;
        if self.peek() == Some(&Tok::Eq) {
            self.pos = start;
            let lhs = self.term()?;
            self.expect(Tok::Eq, "`=`")?;
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        let sym = Symbol::new(&name);
        if self.bound.contains(&sym) {
            return Err(ParseError::Syntax {
                line: at.0,
                col: at.1,
                msg: format!("bound variable `{name}` used as a predicate"),
            });
        }
        let args = args.unwrap_or_default();
        self.record_arity(true, &sym, args.len(), at)?;
        Ok(Formula::Pred(sym, args))
    }

    /// `formula := "all" vars ":" qf | "ex" vars ":" qf | qf`
    fn prenex(&mut self, expected_kind: &str) -> Result<PrenexFormula, ParseError> {
        let mut vars = Vec::new();
        if let Some(Tok::Ident(kw)) = self.peek() {
            if is_keyword(kw) {
                if kw != expected_kind {
                    return self.error(format!(
                        "strong quantifier: `{kw}` not allowed here, use `{expected_kind}` or no prefix"
                    ));
                }
                self.pos += 1;
                loop {
                    let v = Symbol::new(&self.ident("a variable")?);
                    if vars.contains(&v) {
                        return self.error(format!("variable `{v}` bound twice"));
                    }
                    vars.push(v);
                    match self.peek() {
                        Some(Tok::Comma) => self.pos += 1,
                        Some(Tok::Colon) => break,
                        Some(Tok::Ident(_)) => {}
                        _ => return self.error("expected `:` after quantifier variables"),
                    }
                }
                self.expect(Tok::Colon, "`:`")?;
            }
        }
        self.bound = vars.clone();
        let matrix = self.imp()?;
        self.bound.clear();
        Ok(PrenexFormula { vars, matrix })
    }

    fn tuple(&mut self) -> Result<Vec<Term>, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let mut ts = vec![self.term()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                ts.push(self.term()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            Ok(ts)
        } else {
            Ok(vec![self.term()?])
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "all" | "ex" | "ante" | "succ" | "inst")
}

/// Parses a `.cis` file into its Σ1-sequent and instance sets.
pub fn parse_input(text: &str) -> Result<(Sigma1Sequent, HerbrandStructure), ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        functions: BTreeMap::new(),
        predicates: BTreeMap::new(),
        bound: Vec::new(),
    };
    let mut ante = Vec::new();
    let mut succ = Vec::new();
    let mut insts: Vec<PendingInst> = Vec::new();

    while p.peek().is_some() {
        let (line, col) = p.loc();
        match p.bump() {
            Some(Tok::Ident(kw)) if kw == "ante" => ante.push(p.prenex("all")?),
            Some(Tok::Ident(kw)) if kw == "succ" => succ.push(p.prenex("ex")?),
            Some(Tok::Ident(kw)) if kw == "inst" => {
                let num = match p.bump() {
                    Some(Tok::Ident(n)) => n,
                    _ => return Err(ParseError::Syntax { line, col, msg: "expected formula index after `inst`".into() }),
                };
                let index: usize = num.parse().map_err(|_| ParseError::Syntax {
                    line,
                    col,
                    msg: format!("`{num}` is not a formula index"),
                })?;
                p.expect(Tok::Colon, "`:`")?;
                let mut pending = PendingInst { index, line, col, tuples: Vec::new() };
                if p.peek() != Some(&Tok::Dot) {
                    loop {
                        let (tl, tc) = p.loc();
                        pending.tuples.push((p.tuple()?, tl, tc));
                        if p.peek() == Some(&Tok::Semi) {
                            p.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                insts.push(pending);
            }
            _ => return Err(ParseError::Syntax { line, col, msg: "expected `ante`, `succ` or `inst`".into() }),
        }
        p.expect(Tok::Dot, "`.` at end of declaration")?;
    }

    let seq = Sigma1Sequent { ante, succ };
    let arities = seq.arities();
    let mut sets: Vec<BTreeSet<Vec<Term>>> = vec![BTreeSet::new(); seq.q()];
    for inst in insts {
        if inst.index == 0 || inst.index > seq.q() {
            return Err(ParseError::UnknownFormula { line: inst.line, col: inst.col, index: inst.index });
        }
        let k = arities[inst.index - 1];
        if k == 0 && !inst.tuples.is_empty() {
            return Err(ParseError::UnquantifiedInstance { line: inst.line, col: inst.col, index: inst.index });
        }
        for (tuple, line, col) in inst.tuples {
            if tuple.len() != k {
                return Err(ParseError::InstanceArity { line, col, index: inst.index, expected: k, found: tuple.len() });
            }
            sets[inst.index - 1].insert(tuple);
        }
    }
    Ok((seq, HerbrandStructure::new(sets)))
}

/// Writes a sequent and its instances back in `.cis` syntax.
pub fn to_cis(seq: &Sigma1Sequent, h: &HerbrandStructure) -> String {
    let mut out = String::new();
    for i in 1..=seq.q() {
        let kw = if i <= seq.p() { "ante" } else { "succ" };
        let _ = writeln!(out, "{kw} {}.", seq.quantified(i));
    }
    for i in 1..=seq.q() {
        if seq.formula(i).arity() == 0 {
            continue;
        }
        let tuples: Vec<String> = h.get(i).iter().map(|t| Tuple(t).to_string()).collect();
        let _ = writeln!(out, "inst {i}: {}.", tuples.join("; "));
    }
    out
}
