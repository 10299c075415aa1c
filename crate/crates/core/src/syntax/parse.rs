//! Concrete syntax for types, terms and formulas.
//!
//! One item per line. Types: `N`, `A*B`, `A->B` with `*` binding tighter
//! and `->` associating right. Terms: `0`, `S(t)`, `f(t1,...,tk)`,
//! `K[A,B]`, `Sig[A,B,C]`, `R[A]`, `D[A,B]`, `D0[A,B]`, `D1[A,B]`,
//! `app(t,u)`, `F[a:A]`, plus decimal numerals as sugar for `S(..S(0))`.
//! Formulas: `t =A u`, `&`, `|`, `->`, `exists x:A.`, `forall x:A.`.

use num_traits::Num;
use thiserror::Error;

use super::formula::Formula;
use super::signature::Signature;
use super::term::Term;
use super::ty::Type;
use crate::Nat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(Nat),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Star,
    Arrow,
    Equals,
    Amp,
    Pipe,
    Turnstile,
}

fn lex(input: &str) -> PResult<Vec<(Tok, usize)>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '[' => {
                toks.push((Tok::LBracket, i));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBracket, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, i));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, i));
                i += 1;
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    toks.push((Tok::Turnstile, i));
                    i += 2;
                } else {
                    toks.push((Tok::Pipe, i));
                    i += 1;
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: "expected '->'".into(),
                    });
                }
            }
            '=' => {
                toks.push((Tok::Equals, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = Nat::from_str_radix(&input[start..i], 10).unwrap();
                toks.push((Tok::Number(n), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(toks)
}

pub(crate) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
    len: usize,
    /// Bound variables in scope, innermost last, plus free-variable context.
    scope: Vec<(String, Type)>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(input: &str, sig: &'a Signature, free: &[(String, Type)]) -> PResult<Self> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            sig,
            len: input.len(),
            scope: free.to_vec(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn eat_ident(&mut self, name: &str) -> bool {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == name {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    pub(crate) fn expect_end(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.here(),
                msg: "trailing input".into(),
            })
        }
    }

    // ---- types ----

    pub(crate) fn ty(&mut self) -> PResult<Type> {
        let lhs = self.ty_prod()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_prod(&mut self) -> PResult<Type> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.ty_prod()?;
            Ok(Type::prod(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> PResult<Type> {
        match self.next() {
            Some(Tok::Ident(s)) if s == "N" => Ok(Type::Nat),
            Some(Tok::LParen) => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a type")
            }
        }
    }

    fn bracket_types(&mut self, n: usize) -> PResult<Vec<Type>> {
        self.expect(Tok::LBracket, "'['")?;
        let mut tys = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma, "','")?;
            }
            tys.push(self.ty()?);
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(tys)
    }

    // ---- terms ----

    pub(crate) fn term(&mut self) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                self.pos += 1;
                let mut t = Term::Zero;
                let mut k = n;
                while !num_traits::Zero::is_zero(&k) {
                    t = Term::succ_of(t);
                    k -= 1u32;
                }
                Ok(t)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "S" => {
                        if self.peek() == Some(&Tok::LParen) {
                            self.pos += 1;
                            let t = self.term()?;
                            self.expect(Tok::RParen, "')'")?;
                            Ok(Term::succ_of(t))
                        } else {
                            Ok(Term::Succ)
                        }
                    }
                    "app" => {
                        self.expect(Tok::LParen, "'('")?;
                        let f = self.term()?;
                        self.expect(Tok::Comma, "','")?;
                        let x = self.term()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Term::app(f, x))
                    }
                    "K" => {
                        let t = self.bracket_types(2)?;
                        Ok(Term::CombK(t[0].clone(), t[1].clone()))
                    }
                    "Sig" => {
                        let t = self.bracket_types(3)?;
                        Ok(Term::CombS(t[0].clone(), t[1].clone(), t[2].clone()))
                    }
                    "R" => {
                        let t = self.bracket_types(1)?;
                        Ok(Term::Rec(t[0].clone()))
                    }
                    "D" => {
                        let t = self.bracket_types(2)?;
                        Ok(Term::PairC(t[0].clone(), t[1].clone()))
                    }
                    "D0" => {
                        let t = self.bracket_types(2)?;
                        Ok(Term::Proj0(t[0].clone(), t[1].clone()))
                    }
                    "D1" => {
                        let t = self.bracket_types(2)?;
                        Ok(Term::Proj1(t[0].clone(), t[1].clone()))
                    }
                    "F" => {
                        self.expect(Tok::LBracket, "'['")?;
                        let idx = match self.next() {
                            Some(Tok::Number(n)) => n,
                            _ => return self.err("expected an index number"),
                        };
                        self.expect(Tok::Colon, "':'")?;
                        let ty = self.ty()?;
                        self.expect(Tok::RBracket, "']'")?;
                        Ok(Term::Heo(idx, ty))
                    }
                    _ => {
                        if self.sig.contains(&name) {
                            self.expect(Tok::LParen, "'(' after function symbol")?;
                            let mut args = Vec::new();
                            loop {
                                args.push(self.term()?);
                                match self.next() {
                                    Some(Tok::Comma) => continue,
                                    Some(Tok::RParen) => break,
                                    _ => return self.err("expected ',' or ')'"),
                                }
                            }
                            Ok(Term::Prim(name, args))
                        } else {
                            match self.scope.iter().rev().find(|(n, _)| *n == name) {
                                Some((_, ty)) => Ok(Term::Var(name, ty.clone())),
                                None => self.err(format!("unknown variable '{name}'")),
                            }
                        }
                    }
                }
            }
            _ => self.err("expected a term"),
        }
    }

    // ---- formulas ----

    pub(crate) fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.formula_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn formula_or(&mut self) -> PResult<Formula> {
        let lhs = self.formula_and()?;
        if self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.formula_or()?;
            Ok(Formula::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn formula_and(&mut self) -> PResult<Formula> {
        let lhs = self.formula_atom()?;
        if self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.formula_and()?;
            Ok(Formula::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn quantifier(&mut self, exists: bool) -> PResult<Formula> {
        let x = match self.next() {
            Some(Tok::Ident(s)) => s,
            _ => return self.err("expected a variable"),
        };
        self.expect(Tok::Colon, "':'")?;
        let ty = self.ty()?;
        self.expect(Tok::Dot, "'.'")?;
        self.scope.push((x.clone(), ty.clone()));
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        Ok(if exists {
            Formula::Exists(x, ty, Box::new(body))
        } else {
            Formula::Forall(x, ty, Box::new(body))
        })
    }

    fn formula_atom(&mut self) -> PResult<Formula> {
        if self.eat_ident("forall") {
            return self.quantifier(false);
        }
        if self.eat_ident("exists") {
            return self.quantifier(true);
        }
        if self.peek() == Some(&Tok::LParen) {
            // Either a parenthesized formula or a parenthesized term on
            // the left of an equation; try the formula reading first.
            let save = self.pos;
            self.pos += 1;
            if let Ok(inner) = self.formula() {
                if self.peek() == Some(&Tok::RParen) {
                    let after = self.pos + 1;
                    // An '(' formula ')' not followed by '=' is a group.
                    if self.toks.get(after).map(|(t, _)| t) != Some(&Tok::Equals) {
                        self.pos = after;
                        return Ok(inner);
                    }
                }
            }
            self.pos = save;
        }
        self.equation()
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        self.expect(Tok::Equals, "'='")?;
        let ty = self.ty()?;
        let rhs = self.term()?;
        Ok(Formula::Eq(ty, lhs, rhs))
    }

    // ---- proof steps ----

    /// The tail of a `step` line: `<id>: rule <n> [premises: i,j]
    /// [with: term t | var x] |- <formula>`.
    pub(crate) fn proof_step(&mut self) -> PResult<StepLine> {
        use num_traits::ToPrimitive;
        let id = match self.next() {
            Some(Tok::Number(n)) => n,
            _ => return self.err("expected a step id"),
        };
        self.expect(Tok::Colon, "':'")?;
        if !self.eat_ident("rule") {
            return self.err("expected 'rule'");
        }
        let rule = match self.next() {
            Some(Tok::Number(n)) => {
                n.to_u8()
                    .filter(|r| (1..=25).contains(r))
                    .ok_or(ParseError::Syntax {
                        pos: self.here(),
                        msg: "rule id out of range".into(),
                    })?
            }
            _ => return self.err("expected a rule number"),
        };
        let mut premises = Vec::new();
        if self.eat_ident("premises") {
            self.expect(Tok::Colon, "':'")?;
            loop {
                match self.next() {
                    Some(Tok::Number(n)) => {
                        premises.push(n.to_u64().ok_or(ParseError::Syntax {
                            pos: self.here(),
                            msg: "premise id out of range".into(),
                        })?);
                    }
                    _ => return self.err("expected a premise id"),
                }
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        let mut payload = None;
        if self.eat_ident("with") {
            self.expect(Tok::Colon, "':'")?;
            if self.eat_ident("term") {
                payload = Some(Payload::Term(self.term()?));
            } else if self.eat_ident("var") {
                match self.next() {
                    Some(Tok::Ident(x)) => payload = Some(Payload::Var(x)),
                    _ => return self.err("expected a variable name"),
                }
            } else {
                return self.err("expected 'term' or 'var'");
            }
        }
        self.expect(Tok::Turnstile, "'|-'")?;
        let conclusion = self.formula()?;
        Ok(StepLine {
            id,
            rule,
            premises,
            payload,
            conclusion,
        })
    }
}

pub(crate) struct StepLine {
    pub id: Nat,
    pub rule: u8,
    pub premises: Vec<u64>,
    pub payload: Option<super::derivation::Payload>,
    pub conclusion: Formula,
}

use super::derivation::Payload;

/// Parse a type from its concrete syntax.
pub fn parse_type(input: &str) -> PResult<Type> {
    let sig = Signature::standard();
    let mut p = Parser::new(input, &sig, &[])?;
    let t = p.ty()?;
    p.expect_end()?;
    Ok(t)
}

/// Parse a closed term.
pub fn parse_term(input: &str, sig: &Signature) -> PResult<Term> {
    parse_term_with(input, sig, &[])
}

/// Parse a term with free variables drawn from the given context.
pub fn parse_term_with(input: &str, sig: &Signature, free: &[(String, Type)]) -> PResult<Term> {
    let mut p = Parser::new(input, sig, free)?;
    let t = p.term()?;
    p.expect_end()?;
    t.sort(sig).map_err(|e| ParseError::Sort(e.to_string()))?;
    Ok(t)
}

/// Parse and sort-check a closed formula.
pub fn parse_formula(input: &str, sig: &Signature) -> PResult<Formula> {
    parse_formula_with(input, sig, &[])
}

/// Parse and sort-check a formula with free variables from the context.
pub fn parse_formula_with(
    input: &str,
    sig: &Signature,
    free: &[(String, Type)],
) -> PResult<Formula> {
    let mut p = Parser::new(input, sig, free)?;
    let phi = p.formula()?;
    p.expect_end()?;
    phi.check_sorts(sig)
        .map_err(|e| ParseError::Sort(e.to_string()))?;
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::standard()
    }

    #[test]
    fn parses_quantified_reflexivity() {
        let phi = parse_formula("forall x:N. x =N x", &sig()).unwrap();
        assert_eq!(
            phi,
            Formula::forall(
                "x",
                Type::Nat,
                Formula::eq_n(Term::nvar("x"), Term::nvar("x"))
            )
        );
    }

    #[test]
    fn parses_zero_equals_one() {
        let phi = parse_formula("0 =N S(0)", &sig()).unwrap();
        assert_eq!(phi, Formula::eq_n(Term::Zero, Term::numeral(1)));
    }

    #[test]
    fn parses_higher_type_quantifiers() {
        let phi = parse_formula(
            "forall x:N->N. exists e:N. forall y:N. app(x,y) =N app(x,y)",
            &sig(),
        )
        .unwrap();
        match phi {
            Formula::Forall(_, ty, _) => {
                assert_eq!(ty, Type::arrow(Type::Nat, Type::Nat));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_ill_sorted_application() {
        // app(x, y) with x:N is not well-sorted.
        let err = parse_formula_with(
            "app(x,y) =N 0",
            &sig(),
            &[("x".into(), Type::Nat), ("y".into(), Type::Nat)],
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Sort(_)));
    }

    #[test]
    fn rejects_unknown_variables_with_position() {
        let err = parse_formula("mystery =N 0", &sig()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn numeral_sugar() {
        assert_eq!(parse_term("3", &sig()).unwrap(), Term::numeral(3));
    }

    #[test]
    fn parenthesized_formulas_and_equations() {
        let a = parse_formula("(0 =N 0 -> 0 =N 0) -> 0 =N 0", &sig()).unwrap();
        match a {
            Formula::Imp(l, _) => assert!(matches!(*l, Formula::Imp(_, _))),
            other => panic!("unexpected {other}"),
        }
        let b = parse_formula("(0) =N 0", &sig()).unwrap();
        assert_eq!(b, Formula::eq_n(Term::Zero, Term::Zero));
    }
}
