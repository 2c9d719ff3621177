//! Arithmetic expressions over `x1..xd` for command-line functions and densities.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'pi' | 'e' | var | name '(' expr (',' expr)* ')' | '(' expr ')'
//! var     := 'x' | 'x1' | 'x2' | ...          ('x' is 'x1')
//! ```
//!
//! Functions: `sin cos tan exp ln sqrt abs` (one argument), `min max` (two),
//! `step(a, lo, hi)` which is `lo` when `x1 <= a` and `hi` otherwise, and
//! `step(u, a, lo, hi)` which tests `u <= a` for an arbitrary expression `u`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at column {column} in `{source_text}`")]
pub struct ExprError {
    pub column: usize,
    pub message: String,
    pub source_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func1 {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call1(Func1, Box<Node>),
    Min(Box<Node>, Box<Node>),
    Max(Box<Node>, Box<Node>),
    Step {
        arg: Box<Node>,
        at: Box<Node>,
        lo: Box<Node>,
        hi: Box<Node>,
    },
}

impl Node {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Node::Num(v) => *v,
            Node::Var(i) => x[*i],
            Node::Neg(a) => -a.eval(x),
            Node::Add(a, b) => a.eval(x) + b.eval(x),
            Node::Sub(a, b) => a.eval(x) - b.eval(x),
            Node::Mul(a, b) => a.eval(x) * b.eval(x),
            Node::Div(a, b) => a.eval(x) / b.eval(x),
            Node::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Node::Call1(f, a) => {
                let v = a.eval(x);
                match f {
                    Func1::Sin => v.sin(),
                    Func1::Cos => v.cos(),
                    Func1::Tan => v.tan(),
                    Func1::Exp => v.exp(),
                    Func1::Ln => v.ln(),
                    Func1::Sqrt => v.sqrt(),
                    Func1::Abs => v.abs(),
                }
            }
            Node::Min(a, b) => a.eval(x).min(b.eval(x)),
            Node::Max(a, b) => a.eval(x).max(b.eval(x)),
            Node::Step { arg, at, lo, hi } => {
                if arg.eval(x) <= at.eval(x) {
                    lo.eval(x)
                } else {
                    hi.eval(x)
                }
            }
        }
    }
}

/// A parsed expression in `dim` variables.
#[derive(Clone, PartialEq)]
pub struct Expr {
    root: Node,
    dim: usize,
    text: String,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?}, dim = {})", self.text, self.dim)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Expr {
    /// Parses `text`, accepting variables `x1..x{dim}`.
    pub fn parse(text: &str, dim: usize) -> Result<Self, ExprError> {
        let mut p = Parser {
            src: text,
            bytes: text.as_bytes(),
            pos: 0,
            dim,
        };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Expr {
            root,
            dim,
            text: text.to_string(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates at `x`; `x.len()` must be at least `dim`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.root.eval(x)
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            column: self.pos + 1,
            message: message.into(),
            source_text: self.src.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        self.skip_ws();
        let Some(&c) = self.bytes.get(self.pos) else {
            return Err(self.error("unexpected end of input"));
        };
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let name = &self.src[start..self.pos];
            return self.named(name, start);
        }
        Err(self.error(format!("unexpected `{}`", c as char)))
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mut look = self.pos + 1;
            if look < b.len() && (b[look] == b'+' || b[look] == b'-') {
                look += 1;
            }
            if look < b.len() && b[look].is_ascii_digit() {
                self.pos = look;
                while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = &self.src[start..self.pos];
        text.parse().map(Node::Num).map_err(|_| ExprError {
            column: start + 1,
            message: format!("bad number `{text}`"),
            source_text: self.src.to_string(),
        })
    }

    fn named(&mut self, name: &str, start: usize) -> Result<Node, ExprError> {
        let at = |msg: String| ExprError {
            column: start + 1,
            message: msg,
            source_text: self.src.to_string(),
        };
        match name {
            "pi" => return Ok(Node::Num(std::f64::consts::PI)),
            "e" => return Ok(Node::Num(std::f64::consts::E)),
            "x" => {
                return if self.dim >= 1 {
                    Ok(Node::Var(0))
                } else {
                    Err(at("no variables available".into()))
                }
            }
            _ => {}
        }
        if let Some(index) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            if index == 0 || index > self.dim {
                return Err(at(format!("variable `{name}` outside x1..x{}", self.dim)));
            }
            return Ok(Node::Var(index - 1));
        }
        let func1 = match name {
            "sin" => Some(Func1::Sin),
            "cos" => Some(Func1::Cos),
            "tan" => Some(Func1::Tan),
            "exp" => Some(Func1::Exp),
            "ln" | "log" => Some(Func1::Ln),
            "sqrt" => Some(Func1::Sqrt),
            "abs" => Some(Func1::Abs),
            _ => None,
        };
        if func1.is_none() && !matches!(name, "min" | "max" | "step") {
            return Err(at(format!("unknown name `{name}`")));
        }
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        let arity = |n: &[usize]| -> Result<(), ExprError> {
            if n.contains(&args.len()) {
                Ok(())
            } else {
                Err(at(format!("`{name}` takes {n:?} arguments, got {}", args.len())))
            }
        };
        if let Some(f) = func1 {
            arity(&[1])?;
            return Ok(Node::Call1(f, Box::new(args.remove(0))));
        }
        match name {
            "min" | "max" => {
                arity(&[2])?;
                let b = Box::new(args.pop().unwrap());
                let a = Box::new(args.pop().unwrap());
                Ok(if name == "min" { Node::Min(a, b) } else { Node::Max(a, b) })
            }
            _ => {
                arity(&[3, 4])?;
                if args.len() == 3 {
                    if self.dim == 0 {
                        return Err(at("step(a, lo, hi) needs x1".into()));
                    }
                    args.insert(0, Node::Var(0));
                }
                let mut it = args.into_iter().map(Box::new);
                Ok(Node::Step {
                    arg: it.next().unwrap(),
                    at: it.next().unwrap(),
                    lo: it.next().unwrap(),
                    hi: it.next().unwrap(),
                })
            }
        }
    }
}
