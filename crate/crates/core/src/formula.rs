//! Formulas of the resource-indexed modal languages: AST, parser, printer,
//! expansion of derived operators, and bounded enumeration.
//!
//! Surface syntax: `~`/`!`, `&`, `|`, `->` (right associative), `true`,
//! `false`, `F[a]`, `box`, `dia`, `box[a]`, `dia[a]`, `A`, `E`, `B[a,b]`,
//! `K[a,b]`. Unary operators bind tightest, then `&`, `|`, `->`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A semiring literal, kept as text until evaluated against a model.
pub type Lit = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(Arc<str>),
    Top,
    Bot,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    F(Lit, Arc<Formula>),
    Box(Arc<Formula>),
    Dia(Arc<Formula>),
    BoxA(Lit, Arc<Formula>),
    DiaA(Lit, Arc<Formula>),
    All(Arc<Formula>),
    Exists(Arc<Formula>),
    Bel(Lit, Lit, Arc<Formula>),
    Kn(Lit, Lit, Arc<Formula>),
}

use Formula as Fm;

/// Constructors.
impl Formula {
    pub fn prop(name: &str) -> Formula {
        Fm::Prop(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Fm::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Fm::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Fm::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Fm::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn f(lit: &str, a: Formula) -> Formula {
        Fm::F(lit.into(), Arc::new(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Fm::Box(Arc::new(a))
    }

    pub fn dia(a: Formula) -> Formula {
        Fm::Dia(Arc::new(a))
    }

    pub fn box_a(lit: &str, a: Formula) -> Formula {
        Fm::BoxA(lit.into(), Arc::new(a))
    }

    pub fn dia_a(lit: &str, a: Formula) -> Formula {
        Fm::DiaA(lit.into(), Arc::new(a))
    }

    pub fn all(a: Formula) -> Formula {
        Fm::All(Arc::new(a))
    }

    pub fn exists(a: Formula) -> Formula {
        Fm::Exists(Arc::new(a))
    }

    pub fn bel(a: &str, b: &str, f: Formula) -> Formula {
        Fm::Bel(a.into(), b.into(), Arc::new(f))
    }

    pub fn kn(a: &str, b: &str, f: Formula) -> Formula {
        Fm::Kn(a.into(), b.into(), Arc::new(f))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }
}

impl Formula {
    /// Rewrites into the core `{prop, ⊤, ⊥, ¬, ∧, F, □, A}`.
    pub fn expand(&self) -> Formula {
        let e = |f: &Arc<Formula>| f.expand();
        match self {
            Fm::Prop(_) | Fm::Top | Fm::Bot => self.clone(),
            Fm::Not(a) => Formula::not(e(a)),
            Fm::And(a, b) => Formula::and(e(a), e(b)),
            Fm::Or(a, b) => Formula::not(Formula::and(Formula::not(e(a)), Formula::not(e(b)))),
            Fm::Implies(a, b) => Formula::not(Formula::and(e(a), Formula::not(e(b)))),
            Fm::F(l, a) => Fm::F(l.clone(), Arc::new(e(a))),
            Fm::Box(a) => Formula::boxed(e(a)),
            Fm::Dia(a) => Formula::not(Formula::boxed(Formula::not(e(a)))),
            Fm::BoxA(l, a) => box_a_core(l, e(a)),
            Fm::DiaA(l, a) => Formula::not(box_a_core(l, Formula::not(e(a)))),
            Fm::All(a) => Formula::all(e(a)),
            Fm::Exists(a) => Formula::not(Formula::all(Formula::not(e(a)))),
            Fm::Bel(a, b, f) => bel_core(a, b, e(f)),
            Fm::Kn(a, b, f) => {
                let inner = e(f);
                Formula::and(box_a_core(a, inner.clone()), bel_core(a, b, inner))
            }
        }
    }

    /// True for formulas of the language without the global modality.
    pub fn is_lk(&self) -> bool {
        !self.any_node(&|f| matches!(f, Fm::All(_) | Fm::Exists(_) | Fm::Bel(..) | Fm::Kn(..)))
    }

    fn any_node(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().iter().any(|c| c.any_node(pred))
    }

    fn children(&self) -> Vec<&Arc<Formula>> {
        match self {
            Fm::Prop(_) | Fm::Top | Fm::Bot => vec![],
            Fm::Not(a)
            | Fm::F(_, a)
            | Fm::Box(a)
            | Fm::Dia(a)
            | Fm::BoxA(_, a)
            | Fm::DiaA(_, a)
            | Fm::All(a)
            | Fm::Exists(a)
            | Fm::Bel(_, _, a)
            | Fm::Kn(_, _, a) => vec![a],
            Fm::And(a, b) | Fm::Or(a, b) | Fm::Implies(a, b) => vec![a, b],
        }
    }

    /// Nesting depth of `F`, `□` and `A` in the expanded formula.
    pub fn modal_depth(&self) -> usize {
        fn go(f: &Formula) -> usize {
            match f {
                Fm::Prop(_) | Fm::Top | Fm::Bot => 0,
                Fm::Not(a) => go(a),
                Fm::And(a, b) => go(a).max(go(b)),
                Fm::F(_, a) | Fm::Box(a) | Fm::All(a) => 1 + go(a),
                _ => unreachable!("expanded formula"),
            }
        }
        go(&self.expand())
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Fm::Prop(p) = f {
                out.insert(p.to_string());
            }
        });
        out
    }

    pub fn literals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Fm::F(l, _) | Fm::BoxA(l, _) | Fm::DiaA(l, _) => {
                out.insert(l.to_string());
            }
            Fm::Bel(a, b, _) | Fm::Kn(a, b, _) => {
                out.insert(a.to_string());
                out.insert(b.to_string());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Replaces propositions and literals homomorphically.
    pub fn substitute(
        &self,
        props: &dyn Fn(&str) -> Option<Formula>,
        lits: &dyn Fn(&str) -> String,
    ) -> Formula {
        let s = |a: &Arc<Formula>| Arc::new(a.substitute(props, lits));
        let l = |x: &Lit| -> Lit { lits(x).into() };
        match self {
            Fm::Prop(p) => props(p).unwrap_or_else(|| self.clone()),
            Fm::Top | Fm::Bot => self.clone(),
            Fm::Not(a) => Fm::Not(s(a)),
            Fm::And(a, b) => Fm::And(s(a), s(b)),
            Fm::Or(a, b) => Fm::Or(s(a), s(b)),
            Fm::Implies(a, b) => Fm::Implies(s(a), s(b)),
            Fm::F(x, a) => Fm::F(l(x), s(a)),
            Fm::Box(a) => Fm::Box(s(a)),
            Fm::Dia(a) => Fm::Dia(s(a)),
            Fm::BoxA(x, a) => Fm::BoxA(l(x), s(a)),
            Fm::DiaA(x, a) => Fm::DiaA(l(x), s(a)),
            Fm::All(a) => Fm::All(s(a)),
            Fm::Exists(a) => Fm::Exists(s(a)),
            Fm::Bel(x, y, a) => Fm::Bel(l(x), l(y), s(a)),
            Fm::Kn(x, y, a) => Fm::Kn(l(x), l(y), s(a)),
        }
    }
}

fn box_a_core(l: &Lit, inner: Formula) -> Formula {
    Formula::and(
        Fm::F(l.clone(), Arc::new(inner.clone())),
        Formula::boxed(inner),
    )
}

fn bel_core(a: &Lit, b: &Lit, inner: Formula) -> Formula {
    let boxed = box_a_core(a, inner);
    Formula::all(Formula::not(box_a_core(b, Formula::not(boxed))))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

/// Prints a formula so that [`parse`] returns the same tree. Binary
/// subformulas are always parenthesized.
pub fn print(f: &Formula) -> String {
    fn operand(f: &Formula) -> String {
        match f {
            Fm::And(..) | Fm::Or(..) | Fm::Implies(..) => format!("({})", print(f)),
            _ => print(f),
        }
    }
    match f {
        Fm::Prop(p) => p.to_string(),
        Fm::Top => "true".into(),
        Fm::Bot => "false".into(),
        Fm::Not(a) => format!("~{}", operand(a)),
        Fm::And(a, b) => format!("{} & {}", operand(a), operand(b)),
        Fm::Or(a, b) => format!("{} | {}", operand(a), operand(b)),
        Fm::Implies(a, b) => format!("{} -> {}", operand(a), operand(b)),
        Fm::F(l, a) => format!("F[{l}] {}", operand(a)),
        Fm::Box(a) => format!("box {}", operand(a)),
        Fm::Dia(a) => format!("dia {}", operand(a)),
        Fm::BoxA(l, a) => format!("box[{l}] {}", operand(a)),
        Fm::DiaA(l, a) => format!("dia[{l}] {}", operand(a)),
        Fm::All(a) => format!("A {}", operand(a)),
        Fm::Exists(a) => format!("E {}", operand(a)),
        Fm::Bel(x, y, a) => format!("B[{x},{y}] {}", operand(a)),
        Fm::Kn(x, y, a) => format!("K[{x},{y}] {}", operand(a)),
    }
}

const KEYWORDS: &[&str] = &["true", "false", "box", "dia", "F", "A", "E", "B", "K"];

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(f)
}

/// Parses a formula file: one formula per line, `#` starts a comment.
pub fn parse_file(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        match parse(body) {
            Ok(f) => out.push(f),
            Err(Error::Syntax {
                column, message, ..
            }) => {
                return Err(Error::Syntax {
                    line: n + 1,
                    column,
                    message,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: String) -> Error {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = 1 + before.iter().filter(|&&c| c == '\n').count();
        let column = 1 + before.iter().rev().take_while(|&&c| c != '\n').count();
        Error::Syntax {
            line,
            column,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .copied()
                .eq(s.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.error("unexpected end of formula".into())),
            Some('~') | Some('!') | Some('¬') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some('(') => {
                self.pos += 1;
                let f = self.implication()?;
                if !self.eat(")") {
                    return Err(self.error("expected ')'".into()));
                }
                Ok(f)
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "true" => Ok(Fm::Top),
                    "false" => Ok(Fm::Bot),
                    "box" | "dia" => {
                        let lit = if self.peek() == Some('[') {
                            Some(self.lits(1)?.remove(0))
                        } else {
                            None
                        };
                        let a = self.unary()?;
                        Ok(match (word.as_str(), lit) {
                            ("box", None) => Formula::boxed(a),
                            ("box", Some(l)) => Formula::box_a(&l, a),
                            ("dia", None) => Formula::dia(a),
                            (_, Some(l)) => Formula::dia_a(&l, a),
                            _ => unreachable!(),
                        })
                    }
                    "F" => {
                        let l = self.lits(1)?;
                        Ok(Formula::f(&l[0], self.unary()?))
                    }
                    "B" | "K" => {
                        let l = self.lits(2)?;
                        let a = self.unary()?;
                        Ok(if word == "B" {
                            Formula::bel(&l[0], &l[1], a)
                        } else {
                            Formula::kn(&l[0], &l[1], a)
                        })
                    }
                    "A" => Ok(Formula::all(self.unary()?)),
                    "E" => Ok(Formula::exists(self.unary()?)),
                    _ => {
                        if self.peek() == Some('[') {
                            self.pos = start;
                            return Err(self.error(format!("unknown operator {word:?}")));
                        }
                        Ok(Formula::prop(&word))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// `[l1,…,ln]`; commas inside braces belong to the literal.
    fn lits(&mut self, n: usize) -> Result<Vec<String>> {
        if !self.eat("[") {
            return Err(self.error("expected '['".into()));
        }
        let mut out = Vec::new();
        let mut cur = String::new();
        let mut depth = 0usize;
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                return Err(self.error("unterminated literal list".into()));
            };
            self.pos += 1;
            match c {
                '{' => {
                    depth += 1;
                    cur.push(c);
                }
                '}' => {
                    depth = depth.saturating_sub(1);
                    cur.push(c);
                }
                ',' | ']' if depth == 0 => {
                    let lit = cur.trim().to_string();
                    if lit.is_empty() {
                        self.pos -= 1;
                        return Err(self.error("empty semiring literal".into()));
                    }
                    out.push(lit);
                    cur.clear();
                    if c == ']' {
                        break;
                    }
                }
                _ => cur.push(c),
            }
        }
        if out.len() != n {
            return Err(self.error(format!("expected {n} literal(s), found {}", out.len())));
        }
        Ok(out)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// True when `name` can be printed as a proposition.
pub fn is_prop_name(name: &str) -> bool {
    let mut cs = name.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_char) && !KEYWORDS.contains(&name)
}

/// All core formulas of modal depth at most `depth`: literals over atoms
/// and conjunctions of two literals, where atoms at each depth are the
/// previous atoms plus `□φ`, `F_l φ` (and `Aφ` when `global`) for every
/// formula `φ` of the previous depth. Fails with a budget error past `cap`.
pub fn enumerate_formulas(
    vars: &[&str],
    lits: &[&str],
    depth: usize,
    global: bool,
    cap: usize,
) -> Result<Vec<Formula>> {
    let mut atoms: Vec<Formula> = vars.iter().map(|v| Formula::prop(v)).collect();
    atoms.push(Fm::Top);
    atoms.push(Fm::Bot);
    let mut set = close_level(&atoms, cap)?;
    for _ in 0..depth {
        let mut seen: HashSet<Formula> = atoms.iter().cloned().collect();
        let mut next = atoms.clone();
        let mut push = |f: Formula, next: &mut Vec<Formula>| -> Result<()> {
            if seen.insert(f.clone()) {
                next.push(f);
                if next.len() > cap {
                    return Err(Error::Budget {
                        message: "formula enumeration exceeded its cap".into(),
                        partial: next.len(),
                    });
                }
            }
            Ok(())
        };
        for phi in &set {
            push(Formula::boxed(phi.clone()), &mut next)?;
            for l in lits {
                push(Formula::f(l, phi.clone()), &mut next)?;
            }
            if global {
                push(Formula::all(phi.clone()), &mut next)?;
            }
        }
        atoms = next;
        set = close_level(&atoms, cap)?;
    }
    Ok(set)
}

fn close_level(atoms: &[Formula], cap: usize) -> Result<Vec<Formula>> {
    let literals: Vec<Formula> = atoms
        .iter()
        .flat_map(|a| [a.clone(), Formula::not(a.clone())])
        .collect();
    let n = literals.len();
    let total = n + n * (n + 1) / 2;
    if total > cap {
        return Err(Error::Budget {
            message: "formula enumeration exceeded its cap".into(),
            partial: n,
        });
    }
    let mut out = literals.clone();
    for i in 0..n {
        for j in i..n {
            out.push(Formula::and(literals[i].clone(), literals[j].clone()));
        }
    }
    Ok(out)
}
