//! Textual entropy expressions.
//!
//! ```text
//! query  := expr rel expr
//! rel    := ">=" | "<=" | "="
//! expr   := ["-"] term { ("+" | "-") term }
//! term   := [ coeff [ "*" ] ] atom
//! coeff  := INT | INT "/" INT | DECIMAL
//! atom   := "S(" list [ "|" list ] ")" | "I(" list ";" list [ "|" list ] ")"
//! list   := NAME { "," NAME }
//! ```
//!
//! A side may also be a bare number; it must be zero since only homogeneous
//! statements are meaningful. Whitespace is ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::space::{LinearForm, SystemContext, DEFAULT_MAX_PARTIES};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Atom {
    /// `S(x|given)`
    Entropy { x: Vec<String>, given: Vec<String> },
    /// `I(x;y|given)`
    Mutual {
        x: Vec<String>,
        y: Vec<String>,
        given: Vec<String>,
    },
}

#[derive(Clone, Debug)]
struct Term {
    coeff: Rational,
    atom: Atom,
}

/// Parsed but not yet resolved against a context.
#[derive(Clone, Debug)]
struct Statement {
    lhs: Vec<Term>,
    rel: Rel,
    rhs: Vec<Term>,
}

impl Statement {
    fn names(&self) -> Vec<&String> {
        let mut out = Vec::new();
        for t in self.lhs.iter().chain(&self.rhs) {
            match &t.atom {
                Atom::Entropy { x, given } => out.extend(x.iter().chain(given)),
                Atom::Mutual { x, y, given } => out.extend(x.iter().chain(y).chain(given)),
            }
        }
        out
    }

    /// `lhs - rhs` for `>=` and `=`, `rhs - lhs` for `<=`.
    fn resolve(&self, ctx: &SystemContext) -> Result<LinearForm> {
        let l = side_form(&self.lhs, ctx)?;
        let r = side_form(&self.rhs, ctx)?;
        Ok(match self.rel {
            Rel::Ge | Rel::Eq => &l - &r,
            Rel::Le => &r - &l,
        })
    }
}

fn side_form(terms: &[Term], ctx: &SystemContext) -> Result<LinearForm> {
    let mut form = LinearForm::zero(ctx);
    for term in terms {
        let c = &term.coeff;
        match &term.atom {
            Atom::Entropy { x, given } => {
                let x = mask_of(x, ctx)?;
                let z = mask_of(given, ctx)?;
                form.add_term(x | z, c);
                form.add_term(z, &-c);
            }
            Atom::Mutual { x, y, given } => {
                let x = mask_of(x, ctx)?;
                let y = mask_of(y, ctx)?;
                let z = mask_of(given, ctx)?;
                form.add_term(x | z, c);
                form.add_term(y | z, c);
                form.add_term(x | y | z, &-c);
                form.add_term(z, &-c);
            }
        }
    }
    Ok(form)
}

fn mask_of(names: &[String], ctx: &SystemContext) -> Result<u32> {
    let mut mask = 0;
    for name in names {
        let idx = ctx
            .party_index(name)
            .ok_or_else(|| Error::UnknownParty(name.clone()))?;
        mask |= 1 << idx;
    }
    Ok(mask)
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn error(&mut self, message: impl Into<String>) -> Error {
        self.skip_ws();
        let found = match self.src.get(self.pos) {
            Some(&c) => format!(", found '{}'", c as char),
            None => ", found end of input".to_string(),
        };
        Error::syntax(self.pos, format!("{}{}", message.into(), found))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn rel(&mut self) -> Result<Rel> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let rest = &self.src[start..];
        let (rel, len) = if rest.starts_with(b">=") {
            (Rel::Ge, 2)
        } else if rest.starts_with(b"<=") {
            (Rel::Le, 2)
        } else if rest.starts_with(b"==") {
            (Rel::Eq, 2)
        } else if rest.starts_with(b"=") {
            (Rel::Eq, 1)
        } else if rest.starts_with(b">") || rest.starts_with(b"<") || rest.starts_with(b"!=") {
            return Err(Error::syntax(start, "unknown relation (use >=, <= or =)"));
        } else {
            return Err(self.error("expected relation"));
        };
        self.pos += len;
        Ok(rel)
    }

    fn integer(&mut self) -> Option<(BigInt, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Some((digits.parse().expect("digits parse"), self.pos - start))
    }

    /// `INT | INT "/" INT | DECIMAL`, if a number starts here.
    fn coeff(&mut self) -> Result<Option<Rational>> {
        let Some((int, _)) = self.integer() else {
            if self.peek() == Some(b'.') {
                return Err(self.error("decimal needs a leading digit"));
            }
            return Ok(None);
        };
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.error("expected digits after decimal point"));
            }
            let frac = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            let scale = BigInt::from(10).pow((self.pos - start) as u32);
            let numer = int * &scale + frac.parse::<BigInt>().expect("digits parse");
            return Ok(Some(Rational::new(numer, scale)));
        }
        if self.eat(b'/') {
            let at = self.pos;
            let Some((den, _)) = self.integer() else {
                return Err(self.error("expected denominator"));
            };
            if den.is_zero() {
                return Err(Error::syntax(at, "zero denominator"));
            }
            return Ok(Some(Rational::new(int, den)));
        }
        Ok(Some(Rational::from_integer(int)))
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphabetic()) {
            return Err(self.error("expected party name"));
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Ok(String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii name"))
    }

    fn list(&mut self) -> Result<Vec<String>> {
        let mut names = vec![self.name()?];
        while self.eat(b',') {
            names.push(self.name()?);
        }
        Ok(names)
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        let start = self.pos;
        let head = self.src.get(self.pos).copied();
        let is_call = self.src.get(self.pos + 1..).is_some_and(|rest| {
            rest.iter()
                .find(|c| !c.is_ascii_whitespace())
                .is_some_and(|&c| c == b'(')
        });
        match head {
            Some(b'S') if is_call => {
                self.pos += 1;
                self.expect(b'(')?;
                let x = self.list()?;
                let given = if self.eat(b'|') {
                    self.list()?
                } else {
                    Vec::new()
                };
                self.expect(b')')?;
                Ok(Atom::Entropy { x, given })
            }
            Some(b'I') if is_call => {
                self.pos += 1;
                self.expect(b'(')?;
                let x = self.list()?;
                self.expect(b';')?;
                let y = self.list()?;
                let given = if self.eat(b'|') {
                    self.list()?
                } else {
                    Vec::new()
                };
                self.expect(b')')?;
                Ok(Atom::Mutual { x, y, given })
            }
            _ => {
                self.pos = start;
                Err(self.error("expected S(...) or I(...)"))
            }
        }
    }

    /// Parses one side. Bare numbers are collected as constants.
    fn expr(&mut self) -> Result<(Vec<Term>, Rational, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut terms = Vec::new();
        let mut constant = Rational::zero();
        let mut sign = if self.eat(b'-') {
            -Rational::one()
        } else {
            Rational::one()
        };
        loop {
            let coeff = self.coeff()?;
            let has_star = coeff.is_some() && self.eat(b'*');
            match self.peek() {
                Some(b'S') | Some(b'I') => {
                    let atom = self.atom()?;
                    let c = coeff.unwrap_or_else(Rational::one) * &sign;
                    terms.push(Term { coeff: c, atom });
                }
                _ if has_star => return Err(self.error("expected S(...) or I(...) after '*'")),
                _ => match coeff {
                    Some(c) => constant += c * &sign,
                    None if self.pos == start
                        || matches!(self.peek(), Some(b'>' | b'<' | b'=') | None) =>
                    {
                        return Err(Error::syntax(self.pos, "empty side"));
                    }
                    None => return Err(self.error("expected a term")),
                },
            }
            sign = if self.eat(b'+') {
                Rational::one()
            } else if self.eat(b'-') {
                -Rational::one()
            } else {
                break;
            };
        }
        Ok((terms, constant, start))
    }
}

fn parse_statement(text: &str) -> Result<Statement> {
    let mut cur = Cursor::new(text);
    let (lhs, lc, lstart) = cur.expr()?;
    let rel = cur.rel()?;
    let (rhs, rc, rstart) = cur.expr()?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    for (c, at) in [(lc, lstart), (rc, rstart)] {
        if !c.is_zero() {
            return Err(Error::syntax(
                at,
                "constant term present; only homogeneous statements are supported",
            ));
        }
    }
    Ok(Statement { lhs, rel, rhs })
}

fn infer_context(statements: &[&Statement], max_parties: usize) -> Result<SystemContext> {
    let names: BTreeSet<String> = statements
        .iter()
        .flat_map(|s| s.names().into_iter().cloned())
        .collect();
    SystemContext::with_max_parties(names, max_parties)
}

fn parse_with_rel(text: &str, want_eq: bool) -> Result<Statement> {
    let st = parse_statement(text)?;
    match (st.rel, want_eq) {
        (Rel::Eq, false) => Err(Error::syntax(
            0,
            "expected an inequality (>= or <=), found '='",
        )),
        (Rel::Ge | Rel::Le, true) => Err(Error::syntax(0, "expected an equality constraint ('=')")),
        _ => Ok(st),
    }
}

/// Checks only the grammar of an inequality (`equality = false`) or a
/// constraint (`equality = true`).
pub fn validate_syntax(text: &str, equality: bool) -> Result<()> {
    parse_with_rel(text, equality).map(|_| ())
}

/// Parses `L >= R` or `L <= R` into `b` with `b⊤s >= 0`, over the parties
/// the text mentions.
pub fn parse_inequality(text: &str) -> Result<LinearForm> {
    let st = parse_with_rel(text, false)?;
    let ctx = infer_context(&[&st], DEFAULT_MAX_PARTIES)?;
    st.resolve(&ctx)
}

/// Like [`parse_inequality`] over a given context.
pub fn parse_inequality_in(text: &str, ctx: &SystemContext) -> Result<LinearForm> {
    parse_with_rel(text, false)?.resolve(ctx)
}

/// Parses `L = R` into the constraint row `L - R` (meaning `row⊤s = 0`).
pub fn parse_constraint(text: &str) -> Result<LinearForm> {
    let st = parse_with_rel(text, true)?;
    let ctx = infer_context(&[&st], DEFAULT_MAX_PARTIES)?;
    st.resolve(&ctx)
}

pub fn parse_constraint_in(text: &str, ctx: &SystemContext) -> Result<LinearForm> {
    parse_with_rel(text, true)?.resolve(ctx)
}

/// An inequality `b⊤s >= 0` together with constraints `Qs = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub context: SystemContext,
    pub b: LinearForm,
    pub constraints: Vec<LinearForm>,
}

impl Query {
    pub fn new(b: LinearForm, constraints: Vec<LinearForm>) -> Result<Self> {
        let context = b.context().clone();
        for q in &constraints {
            context.check_same(q.context())?;
        }
        Ok(Query {
            context,
            b,
            constraints,
        })
    }

    pub fn unconstrained(b: LinearForm) -> Self {
        Query {
            context: b.context().clone(),
            b,
            constraints: Vec::new(),
        }
    }

    /// Parses an inequality and constraints over the parties they mention.
    pub fn parse<S: AsRef<str>>(inequality: &str, constraints: &[S]) -> Result<Self> {
        Self::parse_with(inequality, constraints, None, DEFAULT_MAX_PARTIES)
    }

    /// Parses over an explicit roster when `parties` is given, otherwise
    /// over the sorted union of mentioned parties.
    pub fn parse_with<S: AsRef<str>>(
        inequality: &str,
        constraints: &[S],
        parties: Option<&[String]>,
        max_parties: usize,
    ) -> Result<Self> {
        let ineq = parse_with_rel(inequality, false)?;
        let cons = constraints
            .iter()
            .map(|c| parse_with_rel(c.as_ref(), true))
            .collect::<Result<Vec<_>>>()?;
        let ctx = match parties {
            Some(p) => SystemContext::with_max_parties(p.iter().cloned(), max_parties)?,
            None => {
                let all: Vec<&Statement> = std::iter::once(&ineq).chain(&cons).collect();
                infer_context(&all, max_parties)?
            }
        };
        let b = ineq.resolve(&ctx)?;
        let constraints = cons
            .iter()
            .map(|c| c.resolve(&ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(Query {
            context: ctx,
            b,
            constraints,
        })
    }

    /// Relabels parties: party `i` becomes party `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Query {
        Query {
            context: self.context.clone(),
            b: self.b.permute(perm),
            constraints: self.constraints.iter().map(|q| q.permute(perm)).collect(),
        }
    }
}

fn write_coeff_term(out: &mut String, coeff: &Rational, label: &str, first: bool) {
    let negative = coeff.is_negative();
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let mag = coeff.abs();
    if !mag.is_one() {
        let _ = write!(out, "{mag} ");
    }
    let _ = write!(out, "S({label})");
}

/// `Σ c_I S(I)` in coordinate order, or `0` for the zero form.
pub fn render_expr(form: &LinearForm) -> String {
    let ctx = form.context();
    let mut out = String::new();
    for subset in ctx.subsets() {
        let c = form.coeff(subset);
        if c.is_zero() {
            continue;
        }
        let first = out.is_empty();
        write_coeff_term(&mut out, c, &ctx.subset_label(subset), first);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of `form⊤s >= 0`, e.g. `1/2 S(A,B) - S(C) >= 0`.
pub fn render(form: &LinearForm) -> String {
    format!("{} >= 0", render_expr(form))
}

/// Canonical text of the constraint `form⊤s = 0`.
pub fn render_constraint(form: &LinearForm) -> String {
    format!("{} = 0", render_expr(form))
}

/// `form⊤s = 0` with positive terms on the left and negated negative terms
/// on the right, e.g. `S(A,B) + S(B,C) = S(B) + S(A,B,C)`.
pub fn render_balanced_equality(form: &LinearForm) -> String {
    let ctx = form.context();
    let mut left = String::new();
    let mut right = String::new();
    for subset in ctx.subsets() {
        let c = form.coeff(subset);
        if c.is_zero() {
            continue;
        }
        let label = ctx.subset_label(subset);
        if c.is_positive() {
            let first = left.is_empty();
            write_coeff_term(&mut left, c, &label, first);
        } else {
            let first = right.is_empty();
            write_coeff_term(&mut right, &-c, &label, first);
        }
    }
    if left.is_empty() {
        left.push('0');
    }
    if right.is_empty() {
        right.push('0');
    }
    format!("{left} = {right}")
}
