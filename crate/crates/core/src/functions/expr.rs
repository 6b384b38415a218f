//! Tiny expression parser for user-supplied objectives.
//!
//! Grammar: `+ - * / ^` with usual precedence (`^` binds tightest and is
//! right-associative), unary minus, parentheses, the functions `sin`, `cos`,
//! `exp`, `log`, variables `x1..xd`, the constant `pi`, and `norm2` for the
//! Euclidean norm of the evaluation point.

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use crate::error::Error;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
pub enum Node {
    Const(f64),
    Var(usize),
    Norm2,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Sin(Box<Node>),
    Cos(Box<Node>),
    Exp(Box<Node>),
    Log(Box<Node>),
}

/// A parsed expression bound to a fixed dimension.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Node,
    pub dim: usize,
    pub text: String,
}

impl Expr {
    pub fn parse(text: &str, dim: usize) -> Result<Self, Error> {
        let toks = lex(text)?;
        let mut p = Parser { toks, pos: 0, dim, text };
        let root = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Expr { root, dim, text: text.to_string() })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let norm = crate::linalg::norm2(x);
        eval_node(&self.root, x, norm)
    }
}

fn eval_node(n: &Node, x: &[f64], norm: f64) -> f64 {
    match n {
        Node::Const(c) => *c,
        Node::Var(i) => x[*i],
        Node::Norm2 => norm,
        Node::Neg(a) => -eval_node(a, x, norm),
        Node::Add(a, b) => eval_node(a, x, norm) + eval_node(b, x, norm),
        Node::Sub(a, b) => eval_node(a, x, norm) - eval_node(b, x, norm),
        Node::Mul(a, b) => eval_node(a, x, norm) * eval_node(b, x, norm),
        Node::Div(a, b) => eval_node(a, x, norm) / eval_node(b, x, norm),
        Node::Pow(a, b) => eval_node(a, x, norm).powf(eval_node(b, x, norm)),
        Node::Sin(a) => eval_node(a, x, norm).sin(),
        Node::Cos(a) => eval_node(a, x, norm).cos(),
        Node::Exp(a) => eval_node(a, x, norm).exp(),
        Node::Log(a) => eval_node(a, x, norm).ln(),
    }
}

fn lex(text: &str) -> Result<Vec<Tok>, Error> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                toks.push(Tok::Minus);
                i += c.len_utf8();
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == b'.'
                        || bytes[i] == b'e'
                        || bytes[i] == b'E'
                        || ((bytes[i] == b'+' || bytes[i] == b'-')
                            && i > start
                            && (bytes[i - 1] == b'e' || bytes[i - 1] == b'E')))
                {
                    i += 1;
                }
                let s = &text[start..i];
                let v: f64 = s.parse().map_err(|_| Error::ExprParse {
                    offset: start,
                    message: format!("bad number '{s}'"),
                })?;
                toks.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push(Tok::Ident(text[start..i].to_string()));
            }
            _ => {
                return Err(Error::ExprParse {
                    offset: i,
                    message: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    dim: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::ExprParse { offset: self.pos.min(self.text.len()), message: msg.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node, Error> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, Error> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, Error> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if matches!(self.peek(), Some(Tok::Plus)) {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, Error> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            // right-associative; unary minus allowed in the exponent
            let exp = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, Error> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Node::Const(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(Tok::Ident(name)) => self.ident(name),
            _ => Err(self.err("expected a value")),
        }
    }

    fn ident(&mut self, name: String) -> Result<Node, Error> {
        match name.as_str() {
            "pi" => return Ok(Node::Const(core::f64::consts::PI)),
            "e" => return Ok(Node::Const(core::f64::consts::E)),
            "norm2" => return Ok(Node::Norm2),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(k) = rest.parse::<usize>() {
                if k >= 1 && k <= self.dim {
                    return Ok(Node::Var(k - 1));
                }
                return Err(self.err(&format!("variable {name} outside dimension {}", self.dim)));
            }
        }
        // function call
        let func = name;
        match self.bump() {
            Some(Tok::LParen) => {}
            _ => return Err(self.err(&format!("unknown identifier '{func}'"))),
        }
        let arg = self.expr()?;
        match self.bump() {
            Some(Tok::RParen) => {}
            _ => return Err(self.err("expected ')'")),
        }
        let arg = Box::new(arg);
        Ok(match func.as_str() {
            "sin" => Node::Sin(arg),
            "cos" => Node::Cos(arg),
            "exp" => Node::Exp(arg),
            "log" => Node::Log(arg),
            _ => return Err(self.err(&format!("unknown function '{func}'"))),
        })
    }
}
