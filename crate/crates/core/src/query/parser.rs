//! Recursive-descent parser for TEG-QL.
//!
//! ```text
//! query     := SELECT select (',' select)* FROM path (',' path)*
//!              [WHERE or_expr] [SNAPSHOT (int | NOW) | IN interval]
//! select    := '*' | path
//! path      := nodestep (edgestep nodestep)*
//! nodestep  := ident [AS ident] ['(' ('*' | ident (',' ident)*) ')']
//! edgestep  := '-' ident [bounds] '->' | '<-' ident [bounds] '-'
//! bounds    := '[' int '..' int ']'
//! or_expr   := and_expr (OR and_expr)*
//! and_expr  := cmp (AND cmp)*
//! cmp       := ident '.' ident relop literal | '(' or_expr ')'
//! interval  := '[' int '-' (int | NOW) ']'
//! ```
//!
//! Projections are only legal in `SELECT` paths, and `*` cannot be mixed
//! with other select items.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::SyntaxError;
use crate::temporal::{Interval, IntervalEnd};

pub fn parse(text: &str) -> Result<Query, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let q = p.query()?;
    p.expect(TokenKind::Eof, "end of input")?;
    Ok(q)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, n: usize) -> &TokenKind {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error_here(&self, expected: &[&str]) -> SyntaxError {
        let t = &self.tokens[self.pos];
        SyntaxError {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.kind.to_string(),
            message: String::new(),
        }
    }

    fn error_with(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            message: message.into(),
            ..self.error_here(&[])
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, SyntaxError> {
        if *self.peek() == kind {
            Ok(self.advance())
        } else {
            Err(self.error_here(&[what]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            TokenKind::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.error_here(&[what])),
        }
    }

    fn query(&mut self) -> Result<Query, SyntaxError> {
        self.expect(TokenKind::Select, "SELECT")?;
        let select = self.select_list()?;
        self.expect(TokenKind::From, "FROM")?;
        let mut from = vec![self.path(false)?];
        while self.eat(&TokenKind::Comma) {
            from.push(self.path(false)?);
        }
        let condition = if self.eat(&TokenKind::Where) {
            Some(self.or_expr()?)
        } else {
            None
        };
        let temporal = match self.peek() {
            TokenKind::Snapshot => {
                self.advance();
                Some(TemporalModifier::Snapshot(self.time_point(true)?))
            }
            TokenKind::In => {
                self.advance();
                Some(TemporalModifier::In(self.interval()?))
            }
            _ => None,
        };
        if temporal.is_none() && !matches!(self.peek(), TokenKind::Eof) {
            let mut expected = vec!["`,`"];
            if condition.is_none() {
                expected.push("WHERE");
            } else {
                expected.extend(["AND", "OR"]);
            }
            expected.extend(["SNAPSHOT", "IN", "end of input"]);
            return Err(self.error_here(&expected));
        }
        Ok(Query {
            select,
            from,
            condition,
            temporal,
        })
    }

    fn select_list(&mut self) -> Result<Select, SyntaxError> {
        if self.eat(&TokenKind::Star) {
            if matches!(self.peek(), TokenKind::Comma) {
                return Err(self.error_with("`*` cannot be combined with other select items"));
            }
            return Ok(Select::Star);
        }
        if !matches!(self.peek(), TokenKind::Ident(_)) {
            return Err(self.error_here(&["`*`", "path"]));
        }
        let mut paths = vec![self.path(true)?];
        while self.eat(&TokenKind::Comma) {
            if matches!(self.peek(), TokenKind::Star) {
                return Err(self.error_with("`*` cannot be combined with other select items"));
            }
            paths.push(self.path(true)?);
        }
        Ok(Select::Paths(paths))
    }

    fn path(&mut self, allow_projection: bool) -> Result<PathPattern, SyntaxError> {
        let start = self.node_step(allow_projection)?;
        let mut hops = Vec::new();
        while matches!(self.peek(), TokenKind::Minus | TokenKind::LeftArrow) {
            let edge = self.edge_step()?;
            let node = self.node_step(allow_projection)?;
            hops.push(Hop { edge, node });
        }
        Ok(PathPattern { start, hops })
    }

    fn node_step(&mut self, allow_projection: bool) -> Result<NodeStep, SyntaxError> {
        let label = self.ident("node label")?;
        let alias = if self.eat(&TokenKind::As) {
            Some(self.ident("alias")?)
        } else {
            None
        };
        let projection = if matches!(self.peek(), TokenKind::LParen) {
            if !allow_projection {
                return Err(self.error_with("attribute projections are only allowed in SELECT"));
            }
            self.advance();
            let proj = if self.eat(&TokenKind::Star) {
                Projection::All
            } else {
                let mut attrs = vec![self.ident("attribute name")?];
                while self.eat(&TokenKind::Comma) {
                    attrs.push(self.ident("attribute name")?);
                }
                Projection::Attributes(attrs)
            };
            self.expect(TokenKind::RParen, "`)`")?;
            Some(proj)
        } else {
            None
        };
        Ok(NodeStep {
            label,
            alias,
            projection,
        })
    }

    fn edge_step(&mut self) -> Result<EdgeStep, SyntaxError> {
        let direction = match self.advance().kind {
            TokenKind::Minus => Direction::Forward,
            _ => Direction::Backward,
        };
        let label = self.ident("edge label")?;
        let bounds = if matches!(self.peek(), TokenKind::LBracket) {
            Some(self.bounds()?)
        } else {
            None
        };
        match direction {
            Direction::Forward => self.expect(TokenKind::Arrow, "`->`")?,
            Direction::Backward => self.expect(TokenKind::Minus, "`-`")?,
        };
        Ok(EdgeStep {
            label,
            direction,
            bounds,
        })
    }

    fn bounds(&mut self) -> Result<Bounds, SyntaxError> {
        let here = self.pos;
        self.expect(TokenKind::LBracket, "`[`")?;
        let min = self.unsigned("minimum hop count")?;
        self.expect(TokenKind::DotDot, "`..`")?;
        let max = self.unsigned("maximum hop count")?;
        if min < 1 || min > max {
            let t = &self.tokens[here];
            return Err(SyntaxError {
                line: t.line,
                column: t.column,
                expected: Vec::new(),
                found: format!("[{min}..{max}]"),
                message: "hop bounds must satisfy 1 <= min <= max".into(),
            });
        }
        self.expect(TokenKind::RBracket, "`]`")?;
        Ok(Bounds { min, max })
    }

    fn unsigned(&mut self, what: &str) -> Result<u32, SyntaxError> {
        match *self.peek() {
            TokenKind::Int(i) if i <= u32::MAX as i64 => {
                self.advance();
                Ok(i as u32)
            }
            _ => Err(self.error_here(&[what])),
        }
    }

    fn signed(&mut self, what: &str) -> Result<i64, SyntaxError> {
        let negative = self.eat(&TokenKind::Minus);
        match *self.peek() {
            TokenKind::Int(i) => {
                self.advance();
                Ok(if negative { -i } else { i })
            }
            _ => Err(self.error_here(&[what])),
        }
    }

    fn time_point(&mut self, allow_now: bool) -> Result<IntervalEnd, SyntaxError> {
        if allow_now && self.eat(&TokenKind::Now) {
            return Ok(IntervalEnd::Now);
        }
        if allow_now && !matches!(self.peek(), TokenKind::Int(_) | TokenKind::Minus) {
            return Err(self.error_here(&["instant", "NOW"]));
        }
        self.signed("instant").map(IntervalEnd::At)
    }

    fn interval(&mut self) -> Result<Interval, SyntaxError> {
        let open = self.expect(TokenKind::LBracket, "`[`")?;
        let start = self.signed("interval start")?;
        self.expect(TokenKind::Minus, "`-`")?;
        let end = self.time_point(true)?;
        self.expect(TokenKind::RBracket, "`]`")?;
        Interval::new(start, end).map_err(|e| SyntaxError {
            line: open.line,
            column: open.column,
            expected: Vec::new(),
            found: format!("[{start}-{end}]"),
            message: e.to_string(),
        })
    }

    fn or_expr(&mut self) -> Result<Condition, SyntaxError> {
        let mut terms = vec![self.and_expr()?];
        while self.eat(&TokenKind::Or) {
            terms.push(self.and_expr()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Condition::Or(terms)
        })
    }

    fn and_expr(&mut self) -> Result<Condition, SyntaxError> {
        let mut terms = vec![self.primary()?];
        while self.eat(&TokenKind::And) {
            terms.push(self.primary()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Condition::And(terms)
        })
    }

    fn primary(&mut self) -> Result<Condition, SyntaxError> {
        if self.eat(&TokenKind::LParen) {
            let inner = self.or_expr()?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(inner);
        }
        if !matches!(self.peek(), TokenKind::Ident(_)) {
            return Err(self.error_here(&["alias", "`(`"]));
        }
        let subject = self.ident("alias")?;
        self.expect(TokenKind::Dot, "`.`")?;
        let attribute = self.ident("attribute name")?;
        // `<-5` lexes as a left arrow; read it as `<` followed by a sign.
        let (op, negate) = match self.peek() {
            TokenKind::Eq => (CompareOp::Eq, false),
            TokenKind::Ne => (CompareOp::Ne, false),
            TokenKind::Lt => (CompareOp::Lt, false),
            TokenKind::Le => (CompareOp::Le, false),
            TokenKind::Gt => (CompareOp::Gt, false),
            TokenKind::Ge => (CompareOp::Ge, false),
            TokenKind::LeftArrow if matches!(self.peek_at(1), TokenKind::Int(_)) => {
                (CompareOp::Lt, true)
            }
            _ => return Err(self.error_here(&["`=`", "`<>`", "`<`", "`<=`", "`>`", "`>=`"])),
        };
        self.advance();
        let literal = match self.peek().clone() {
            TokenKind::Str(s) if !negate => {
                self.advance();
                Literal::Str(s)
            }
            TokenKind::Int(_) if negate => Literal::Int(-self.signed("integer")?),
            TokenKind::Int(_) | TokenKind::Minus => Literal::Int(self.signed("integer")?),
            _ => return Err(self.error_here(&["string literal", "integer"])),
        };
        Ok(Condition::Compare(Comparison {
            subject,
            attribute,
            op,
            literal,
        }))
    }
}
