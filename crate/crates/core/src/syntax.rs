//! Formula AST shared by the strategic (`[i]`, `[E:i]`) and classical
//! (`[stit:i]`) languages, with a concrete ASCII grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "box" unary | "dia" unary
//!          | "[" AGENT "]" unary | "[E:" AGENT "]" unary | "<E:" AGENT ">" unary
//!          | "[stit:" AGENT "]" unary | "<stit:" AGENT ">" unary
//!          | "true" | "false" | IDENT | "(" formula ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reserved atom used to encode `true` as `_top | ~_top`.
///
/// It cannot be written in the concrete grammar (identifiers start with a
/// letter), so it never clashes with user atoms.
pub const TOP_ATOM: &str = "_top";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(AgentId(name))
        } else {
            Err(Error::Format(format!("`{name}` is not a valid agent identifier")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Historical necessity `box`.
    Necessity(Box<Formula>),
    /// `dia`, sugar for `~box~`.
    Possibility(Box<Formula>),
    /// Strategic ability `[i]`.
    Ability(AgentId, Box<Formula>),
    AbilityDual(AgentId, Box<Formula>),
    /// `[E:i]`: truth on every outcome of every core action of `i`.
    ForallCore(AgentId, Box<Formula>),
    ForallCoreDual(AgentId, Box<Formula>),
    /// Classical `[stit:i]`.
    Stit(AgentId, Box<Formula>),
    StitDual(AgentId, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn top() -> Self {
        let t = Formula::atom(TOP_ATOM);
        Formula::or(t.clone(), Formula::not(t))
    }

    pub fn bottom() -> Self {
        Formula::not(Formula::top())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn nec(f: Formula) -> Self {
        Formula::Necessity(Box::new(f))
    }

    pub fn poss(f: Formula) -> Self {
        Formula::Possibility(Box::new(f))
    }

    pub fn ability(agent: &AgentId, f: Formula) -> Self {
        Formula::Ability(agent.clone(), Box::new(f))
    }

    pub fn forall_core(agent: &AgentId, f: Formula) -> Self {
        Formula::ForallCore(agent.clone(), Box::new(f))
    }

    pub fn forall_core_dual(agent: &AgentId, f: Formula) -> Self {
        Formula::ForallCoreDual(agent.clone(), Box::new(f))
    }

    pub fn stit(agent: &AgentId, f: Formula) -> Self {
        Formula::Stit(agent.clone(), Box::new(f))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Or(a, b)
            if matches!(&**a, Formula::Atom(p) if p == TOP_ATOM)
            && matches!(&**b, Formula::Not(n) if matches!(&**n, Formula::Atom(p) if p == TOP_ATOM)))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Not(inner) if inner.is_top())
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) => vec![],
            Not(a) | Necessity(a) | Possibility(a) => vec![a],
            Ability(_, a) | AbilityDual(_, a) | ForallCore(_, a) | ForallCoreDual(_, a) => vec![a],
            Stit(_, a) | StitDual(_, a) => vec![a],
            Or(a, b) | And(a, b) | Implies(a, b) | Iff(a, b) => vec![a, b],
        }
    }

    fn any_node(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    /// No classical `[stit:i]` operators.
    pub fn is_osstit_pure(&self) -> bool {
        !self.any_node(&|f| matches!(f, Formula::Stit(..) | Formula::StitDual(..)))
    }

    /// No strategic `[i]` / `[E:i]` operators.
    pub fn is_cstit_pure(&self) -> bool {
        !self.any_node(&|f| {
            matches!(
                f,
                Formula::Ability(..)
                    | Formula::AbilityDual(..)
                    | Formula::ForallCore(..)
                    | Formula::ForallCoreDual(..)
            )
        })
    }

    pub fn contains_forall_core(&self) -> bool {
        self.any_node(&|f| matches!(f, Formula::ForallCore(..) | Formula::ForallCoreDual(..)))
    }

    /// Rewrites into the core connectives `{atom, ~, |, box, [i], [E:i], [stit:i]}`.
    pub fn normalize(&self) -> Formula {
        use Formula::*;
        let n = |f: &Formula| f.normalize();
        match self {
            Atom(p) => Atom(p.clone()),
            Not(a) => Formula::not(n(a)),
            Or(a, b) => Formula::or(n(a), n(b)),
            And(a, b) => Formula::not(Formula::or(Formula::not(n(a)), Formula::not(n(b)))),
            Implies(a, b) => Formula::or(Formula::not(n(a)), n(b)),
            Iff(a, b) => {
                let (a, b) = (n(a), n(b));
                let ab = Formula::or(Formula::not(a.clone()), b.clone());
                let ba = Formula::or(Formula::not(b), a);
                Formula::not(Formula::or(Formula::not(ab), Formula::not(ba)))
            }
            Necessity(a) => Formula::nec(n(a)),
            Possibility(a) => Formula::not(Formula::nec(Formula::not(n(a)))),
            Ability(i, a) => Formula::ability(i, n(a)),
            AbilityDual(i, a) => Formula::not(Formula::ability(i, Formula::not(n(a)))),
            ForallCore(i, a) => Formula::forall_core(i, n(a)),
            ForallCoreDual(i, a) => Formula::not(Formula::forall_core(i, Formula::not(n(a)))),
            Stit(i, a) => Formula::stit(i, n(a)),
            StitDual(i, a) => Formula::not(Formula::stit(i, Formula::not(n(a)))),
        }
    }

    /// Atoms occurring in the formula, excluding the reserved `true` atom.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(p) = self {
            if p != TOP_ATOM {
                out.insert(p.clone());
            }
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<AgentId>) {
        use Formula::*;
        match self {
            Ability(i, _) | AbilityDual(i, _) | ForallCore(i, _) | ForallCoreDual(i, _) | Stit(i, _)
            | StitDual(i, _) => {
                out.insert(i.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_agents(out);
        }
    }

    /// Maximal nesting of modal operators (duals and `dia` count as modalities).
    pub fn modal_depth(&self) -> usize {
        use Formula::*;
        let below = self.children().into_iter().map(Formula::modal_depth).max().unwrap_or(0);
        match self {
            Atom(_) | Not(_) | Or(..) | And(..) | Implies(..) | Iff(..) => below,
            _ => below + 1,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Rewrites every `[E:i]`/`<E:i>` into `box`/`dia`.
    pub fn forall_core_as_box(&self) -> Formula {
        use Formula::*;
        let m = |f: &Formula| f.forall_core_as_box();
        match self {
            Atom(p) => Atom(p.clone()),
            Not(a) => Formula::not(m(a)),
            Or(a, b) => Formula::or(m(a), m(b)),
            And(a, b) => Formula::and(m(a), m(b)),
            Implies(a, b) => Formula::implies(m(a), m(b)),
            Iff(a, b) => Formula::iff(m(a), m(b)),
            Necessity(a) | ForallCore(_, a) => Formula::nec(m(a)),
            Possibility(a) | ForallCoreDual(_, a) => Formula::poss(m(a)),
            Ability(i, a) => Ability(i.clone(), Box::new(m(a))),
            AbilityDual(i, a) => AbilityDual(i.clone(), Box::new(m(a))),
            Stit(i, a) => Stit(i.clone(), Box::new(m(a))),
            StitDual(i, a) => StitDual(i.clone(), Box::new(m(a))),
        }
    }
}

/// Translation of the strategic language into the classical one:
/// `[i]φ` becomes `dia [stit:i] tr(φ)`, all other connectives are kept.
pub fn translate_tr(f: &Formula) -> Result<Formula> {
    use Formula::*;
    let t = |g: &Formula| translate_tr(g);
    Ok(match f {
        Atom(p) => Atom(p.clone()),
        Not(a) => Formula::not(t(a)?),
        Or(a, b) => Formula::or(t(a)?, t(b)?),
        And(a, b) => Formula::and(t(a)?, t(b)?),
        Implies(a, b) => Formula::implies(t(a)?, t(b)?),
        Iff(a, b) => Formula::iff(t(a)?, t(b)?),
        Necessity(a) => Formula::nec(t(a)?),
        Possibility(a) => Formula::poss(t(a)?),
        Ability(i, a) => Formula::poss(Formula::stit(i, t(a)?)),
        AbilityDual(i, a) => Formula::not(Formula::poss(Formula::stit(i, Formula::not(t(a)?)))),
        ForallCore(..) | ForallCoreDual(..) => {
            return Err(Error::UnsupportedOperator(
                "translation has no clause for [E:i]".to_string(),
            ))
        }
        Stit(..) | StitDual(..) => {
            return Err(Error::UnsupportedOperator(
                "translation input must not contain [stit:i]".to_string(),
            ))
        }
    })
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    if f.is_top() || f.is_bottom() {
        return PREC_ATOM;
    }
    match f {
        Formula::Atom(_) => PREC_ATOM,
        Formula::Iff(..) => PREC_IFF,
        Formula::Implies(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn write_at(out: &mut String, f: &Formula, min: u8) {
    if precedence(f) < min {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_prefix(out: &mut String, prefix: &str, body: &Formula) {
    out.push_str(prefix);
    write_at(out, body, PREC_UNARY);
}

fn write_formula(out: &mut String, f: &Formula) {
    use Formula::*;
    if f.is_top() {
        out.push_str("true");
        return;
    }
    if f.is_bottom() {
        out.push_str("false");
        return;
    }
    let mut binary = |a: &Formula, op: &str, b: &Formula, lmin: u8, rmin: u8| {
        write_at(out, a, lmin);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_at(out, b, rmin);
    };
    match f {
        Atom(p) => out.push_str(p),
        Iff(a, b) => binary(a, "<->", b, PREC_IFF, PREC_IFF + 1),
        Implies(a, b) => binary(a, "->", b, PREC_IMP + 1, PREC_IMP),
        Or(a, b) => binary(a, "|", b, PREC_OR, PREC_OR + 1),
        And(a, b) => binary(a, "&", b, PREC_AND, PREC_AND + 1),
        Not(a) => write_prefix(out, "~", a),
        Necessity(a) => write_prefix(out, "box ", a),
        Possibility(a) => write_prefix(out, "dia ", a),
        Ability(i, a) => write_prefix(out, &format!("[{i}] "), a),
        // The grammar has no diamond for [i]; print its definition.
        AbilityDual(i, a) => write_prefix(out, &format!("~[{i}] "), &Formula::not((**a).clone())),
        ForallCore(i, a) => write_prefix(out, &format!("[E:{i}] "), a),
        ForallCoreDual(i, a) => write_prefix(out, &format!("<E:{i}> "), a),
        Stit(i, a) => write_prefix(out, &format!("[stit:{i}] "), a),
        StitDual(i, a) => write_prefix(out, &format!("<stit:{i}> "), a),
    }
}

pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Colon,
    Tilde,
    Arrow,
    DArrow,
    Bar,
    Amp,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'>' => Tok::Gt,
            b':' => Tok::Colon,
            b'~' => Tok::Tilde,
            b'|' => Tok::Bar,
            b'&' => Tok::Amp,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 2;
                Tok::DArrow
            }
            b'<' => Tok::Lt,
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let found = text[start..].chars().next().unwrap_or(' ');
                return Err(Error::Syntax {
                    offset: start,
                    expected: vec!["a token".into()],
                    found: format!("`{found}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

const KEYWORDS: [&str; 4] = ["box", "dia", "true", "false"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[name])
        }
    }

    fn agent(&mut self) -> Result<AgentId> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(AgentId(name))
            }
            _ => self.error(&["agent identifier"]),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    const UNARY_START: [&'static str; 9] =
        ["`~`", "`box`", "`dia`", "`[`", "`<`", "`(`", "`true`", "`false`", "atom"];

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::LBrack => {
                self.bump();
                let tag = match (self.peek(), self.toks.get(self.pos + 1)) {
                    (Tok::Ident(t), Some((_, Tok::Colon))) => Some(t.clone()),
                    _ => None,
                };
                if let Some(tag) = tag {
                    if tag != "E" && tag != "stit" {
                        return self.error(&["`E`", "`stit`", "agent identifier"]);
                    }
                    self.bump();
                    self.bump();
                    let agent = self.agent()?;
                    self.expect(Tok::RBrack, "`]`")?;
                    let body = Box::new(self.unary()?);
                    Ok(if tag == "E" {
                        Formula::ForallCore(agent, body)
                    } else {
                        Formula::Stit(agent, body)
                    })
                } else {
                    let agent = self.agent()?;
                    self.expect(Tok::RBrack, "`]`")?;
                    Ok(Formula::Ability(agent, Box::new(self.unary()?)))
                }
            }
            Tok::Lt => {
                self.bump();
                let tag = match self.peek().clone() {
                    Tok::Ident(t) if t == "E" || t == "stit" => t,
                    _ => return self.error(&["`E`", "`stit`"]),
                };
                self.bump();
                self.expect(Tok::Colon, "`:`")?;
                let agent = self.agent()?;
                self.expect(Tok::Gt, "`>`")?;
                let body = Box::new(self.unary()?);
                Ok(if tag == "E" {
                    Formula::ForallCoreDual(agent, body)
                } else {
                    Formula::StitDual(agent, body)
                })
            }
            Tok::Ident(word) => {
                self.bump();
                match word.as_str() {
                    "box" => Ok(Formula::nec(self.unary()?)),
                    "dia" => Ok(Formula::poss(self.unary()?)),
                    "true" => Ok(Formula::top()),
                    "false" => Ok(Formula::bottom()),
                    _ => Ok(Formula::Atom(word)),
                }
            }
            _ => self.error(&Self::UNARY_START),
        }
    }
}

/// Parses the concrete syntax into an AST (sugar is kept; see [`Formula::normalize`]).
pub fn parse(text: &str) -> Result<Formula> {
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return parser.error(&["`<->`", "`->`", "`|`", "`&`", "end of input"]);
    }
    Ok(f)
}

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}
