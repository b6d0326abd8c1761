//! Tiny expression language used by custom projections and planar maps.
//!
//! Grammar: `+ - * / ^` with the usual precedence (`^` right-associative,
//! unary minus binding between `*` and `^`), parentheses, numeric literals,
//! the constant `pi`, the functions `sin cos tan ln sqrt`, and a caller-chosen
//! set of variable names. Unknown identifiers are rejected at parse time with
//! a byte offset; evaluation itself never fails — domain violations show up
//! as non-finite values at the call site.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Ln,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Parsed expression tree over a fixed variable list.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parse `src` over the given variable names.
    pub fn parse(src: &str, vars: &[&str]) -> Result<Expr> {
        let tokens = tokenize(src, 0)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            vars,
            end_offset: src.len(),
        };
        let e = p.parse_expr(0)?;
        if let Some(t) = p.peek() {
            return Err(Error::Parse {
                offset: t.offset,
                msg: format!("unexpected `{}`", t.text()),
            });
        }
        Ok(e)
    }

    pub fn eval(&self, vars: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => vars[*i],
            Expr::Neg(e) => -e.eval(vars),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(vars), b.eval(vars));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => x.powf(y),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(vars)),
        }
    }

    /// Canonical fully-parenthesized text; reparsing yields an identical tree.
    pub fn to_text(&self, vars: &[&str]) -> String {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 {
                    format!("({v:?})")
                } else {
                    format!("{v:?}")
                }
            }
            Expr::Var(i) => vars[*i].to_string(),
            Expr::Neg(e) => format!("(-{})", e.to_text(vars)),
            Expr::Bin(op, a, b) => {
                format!("({} {} {})", a.to_text(vars), op.symbol(), b.to_text(vars))
            }
            Expr::Call(f, e) => format!("{}({})", f.name(), e.to_text(vars)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Num(f64),
    Ident(String),
    Op(char), // + - * / ^ ( ) = ;
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokKind,
    offset: usize,
}

impl Token {
    fn text(&self) -> String {
        match &self.kind {
            TokKind::Num(v) => format!("{v}"),
            TokKind::Ident(s) => s.clone(),
            TokKind::Op(c) => c.to_string(),
        }
    }
}

fn tokenize(src: &str, base: usize) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let offset = base + i;
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| Error::Parse {
                offset,
                msg: format!("bad number `{text}`"),
            })?;
            out.push(Token {
                kind: TokKind::Num(value),
                offset,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push(Token {
                kind: TokKind::Ident(src[start..i].to_string()),
                offset,
            });
        } else if "+-*/^()=;".contains(c) {
            out.push(Token {
                kind: TokKind::Op(c),
                offset,
            });
            i += 1;
        } else {
            return Err(Error::Parse {
                offset,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    vars: &'a [&'a str],
    end_offset: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_error(&self) -> Error {
        Error::Parse {
            offset: self.end_offset,
            msg: "unexpected end of input".into(),
        }
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (op, l_bp, r_bp) = match self.peek() {
                Some(Token {
                    kind: TokKind::Op(c),
                    ..
                }) => match c {
                    '+' => (BinOp::Add, 1, 2),
                    '-' => (BinOp::Sub, 1, 2),
                    '*' => (BinOp::Mul, 3, 4),
                    '/' => (BinOp::Div, 3, 4),
                    '^' => (BinOp::Pow, 8, 7),
                    _ => break,
                },
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            self.next();
            let rhs = self.parse_expr(r_bp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> Result<Expr> {
        let t = match self.next() {
            Some(t) => t.clone(),
            None => return Err(self.eof_error()),
        };
        match t.kind {
            TokKind::Num(v) => Ok(Expr::Num(v)),
            TokKind::Ident(name) => {
                if let Some(Token {
                    kind: TokKind::Op('('),
                    ..
                }) = self.peek()
                {
                    let func = Func::from_name(&name).ok_or(Error::Parse {
                        offset: t.offset,
                        msg: format!("unknown function `{name}`"),
                    })?;
                    self.next(); // (
                    let arg = self.parse_expr(0)?;
                    match self.next() {
                        Some(Token {
                            kind: TokKind::Op(')'),
                            ..
                        }) => Ok(Expr::Call(func, Box::new(arg))),
                        Some(t) => Err(Error::Parse {
                            offset: t.offset,
                            msg: format!("expected `)`, found `{}`", t.text()),
                        }),
                        None => Err(self.eof_error()),
                    }
                } else if name == "pi" {
                    Ok(Expr::Num(std::f64::consts::PI))
                } else if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(Expr::Var(i))
                } else {
                    Err(Error::Parse {
                        offset: t.offset,
                        msg: format!("unknown identifier `{name}`"),
                    })
                }
            }
            TokKind::Op('(') => {
                let inner = self.parse_expr(0)?;
                match self.next() {
                    Some(Token {
                        kind: TokKind::Op(')'),
                        ..
                    }) => Ok(inner),
                    Some(t) => Err(Error::Parse {
                        offset: t.offset,
                        msg: format!("expected `)`, found `{}`", t.text()),
                    }),
                    None => Err(self.eof_error()),
                }
            }
            TokKind::Op('-') => {
                let inner = self.parse_expr(5)?;
                Ok(Expr::Neg(Box::new(inner)))
            }
            TokKind::Op('+') => self.parse_prefix(),
            TokKind::Op(c) => Err(Error::Parse {
                offset: t.offset,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// A pair of expressions defining a plane map, e.g. `x = m * cos(l); y = l`.
///
/// `lhs` names the two output coordinates, `vars` the two input variables;
/// both are fixed by the caller so projection configs (`x`, `y` over `l`, `m`)
/// and planar maps (`u`, `v` over `x`, `y`) share the parser.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprMap2 {
    pub first: Expr,
    pub second: Expr,
    lhs: [String; 2],
    vars: [String; 2],
}

impl ExprMap2 {
    /// Parse the compact `lhs0 = expr; lhs1 = expr` form. Byte offsets in
    /// errors refer to the whole input string.
    pub fn parse(text: &str, lhs: [&str; 2], vars: [&str; 2]) -> Result<ExprMap2> {
        let tokens = tokenize(text, 0)?;
        let var_refs: Vec<&str> = vars.to_vec();
        let mut pos = 0;
        let mut exprs: Vec<Expr> = Vec::new();
        for (k, name) in lhs.iter().enumerate() {
            match tokens.get(pos) {
                Some(Token {
                    kind: TokKind::Ident(id),
                    offset,
                }) if id == name => {
                    let _ = offset;
                    pos += 1;
                }
                Some(t) => {
                    return Err(Error::Parse {
                        offset: t.offset,
                        msg: format!("expected `{name} =`, found `{}`", t.text()),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        offset: text.len(),
                        msg: format!("expected `{name} =`"),
                    })
                }
            }
            match tokens.get(pos) {
                Some(Token {
                    kind: TokKind::Op('='),
                    ..
                }) => pos += 1,
                Some(t) => {
                    return Err(Error::Parse {
                        offset: t.offset,
                        msg: format!("expected `=`, found `{}`", t.text()),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        offset: text.len(),
                        msg: "expected `=`".into(),
                    })
                }
            }
            // expression runs until `;` or end
            let mut p = Parser {
                tokens: &tokens[pos..],
                pos: 0,
                vars: &var_refs,
                end_offset: text.len(),
            };
            let e = p.parse_expr(0)?;
            pos += p.pos;
            exprs.push(e);
            match tokens.get(pos) {
                Some(Token {
                    kind: TokKind::Op(';'),
                    ..
                }) => pos += 1,
                Some(t) if k + 1 == lhs.len() => {
                    return Err(Error::Parse {
                        offset: t.offset,
                        msg: format!("unexpected `{}`", t.text()),
                    })
                }
                Some(t) => {
                    return Err(Error::Parse {
                        offset: t.offset,
                        msg: format!("expected `;`, found `{}`", t.text()),
                    })
                }
                None => {}
            }
        }
        if let Some(t) = tokens.get(pos) {
            return Err(Error::Parse {
                offset: t.offset,
                msg: format!("unexpected `{}`", t.text()),
            });
        }
        let second = exprs.pop().unwrap();
        let first = exprs.pop().unwrap();
        Ok(ExprMap2 {
            first,
            second,
            lhs: [lhs[0].to_string(), lhs[1].to_string()],
            vars: [vars[0].to_string(), vars[1].to_string()],
        })
    }

    /// Build from two separate expression strings (the JSON config form).
    pub fn from_parts(first: &str, second: &str, lhs: [&str; 2], vars: [&str; 2]) -> Result<ExprMap2> {
        let var_refs: Vec<&str> = vars.to_vec();
        Ok(ExprMap2 {
            first: Expr::parse(first, &var_refs)?,
            second: Expr::parse(second, &var_refs)?,
            lhs: [lhs[0].to_string(), lhs[1].to_string()],
            vars: [vars[0].to_string(), vars[1].to_string()],
        })
    }

    pub fn eval(&self, a: f64, b: f64) -> (f64, f64) {
        let vars = [a, b];
        (self.first.eval(&vars), self.second.eval(&vars))
    }

    /// Canonical `lhs0 = ...; lhs1 = ...` serialization.
    pub fn to_text(&self) -> String {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        format!(
            "{} = {}; {} = {}",
            self.lhs[0],
            self.first.to_text(&vars),
            self.lhs[1],
            self.second.to_text(&vars)
        )
    }

    pub fn var_names(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    pub fn lhs_names(&self) -> [&str; 2] {
        [&self.lhs[0], &self.lhs[1]]
    }
}
