//! Text parser for polynomial expressions.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' natural)*
//! atom   := integer | variable | '(' expr ')'
//! ```
//!
//! Variables are single lowercase letters; whitespace is ignored. The integer
//! front end additionally accepts `/` between factors as exact division by a
//! constant, and can bind letters to integer constants.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::modulus::Modulus;
use super::poly::{IntPoly, ModPoly};
use crate::error::{Error, Result};

const MAX_EXPONENT: u64 = 1 << 31;

#[derive(Debug, Clone)]
enum Ast {
    Num(String),
    Var(char),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, u32),
    /// Exponent given by a bound letter (integer front end only).
    PowSym(Box<Ast>, char, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_div: bool,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&mut self, what: &str) -> Error {
        match self.peek() {
            None => Error::Syntax {
                offset: self.pos,
                message: format!("expected {what}, found end of input"),
            },
            Some(c) if is_known(c, self.allow_div) => Error::Syntax {
                offset: self.pos,
                message: format!("expected {what}, found {:?}", c as char),
            },
            Some(_) => {
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{fffd}');
                Error::UnknownChar { offset: self.pos, ch }
            }
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = if self.peek() == Some(b'-') {
            self.pos += 1;
            Ast::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') if self.allow_div => {
                    let at = self.pos;
                    self.pos += 1;
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if self.allow_div && c.is_ascii_lowercase() => {
                    base = Ast::PowSym(Box::new(base), c as char, self.pos);
                    self.pos += 1;
                }
                _ => {
                    let n = self.natural()?;
                    base = Ast::Pow(Box::new(base), n);
                }
            }
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match digits.parse::<u64>() {
            Ok(n) if n <= MAX_EXPONENT && n <= u32::MAX as u64 => Ok(n as u32),
            _ => Err(Error::ExponentOverflow { offset: start }),
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                Ok(Ast::Num(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap()))
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(Ast::Var(c as char))
            }
            _ => Err(self.unexpected("integer, variable or '('")),
        }
    }
}

fn is_known(c: u8, allow_div: bool) -> bool {
    c.is_ascii_digit() || c.is_ascii_lowercase() || b"+-*^()".contains(&c) || (allow_div && c == b'/')
}

fn parse_ast(src: &str, allow_div: bool) -> Result<Ast> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        allow_div,
    };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(ast)
}

fn collect_vars(ast: &Ast, out: &mut BTreeSet<char>) {
    match ast {
        Ast::Num(_) => {}
        Ast::Var(c) => {
            out.insert(*c);
        }
        Ast::Neg(a) | Ast::Pow(a, _) => collect_vars(a, out),
        Ast::PowSym(a, c, _) => {
            out.insert(*c);
            collect_vars(a, out);
        }
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b, _) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

/// Parses over `Z/p^e`; variables are the distinct letters in alphabetical order.
pub fn parse_poly(src: &str, modulus: Modulus) -> Result<ModPoly> {
    let ast = parse_ast(src, false)?;
    let mut vars = BTreeSet::new();
    collect_vars(&ast, &mut vars);
    let names: Vec<String> = vars.into_iter().map(|c| c.to_string()).collect();
    eval_mod(&ast, &ModPoly::zero(modulus, Arc::new(names)))
}

/// Parses into a fixed variable list; letters outside it are rejected.
pub fn parse_poly_in(src: &str, modulus: Modulus, vars: &[&str]) -> Result<ModPoly> {
    let ast = parse_ast(src, false)?;
    let mut seen = BTreeSet::new();
    collect_vars(&ast, &mut seen);
    for c in seen {
        if !vars.contains(&c.to_string().as_str()) {
            return Err(Error::RingMismatch(format!("variable {c} is not among {vars:?}")));
        }
    }
    eval_mod(&ast, &ModPoly::with_var_names(modulus, vars))
}

fn eval_mod(ast: &Ast, ring: &ModPoly) -> Result<ModPoly> {
    Ok(match ast {
        Ast::Num(d) => {
            let m = ring.modulus();
            let q = m.order() as u128;
            let v = d.bytes().fold(0u128, |acc, b| (acc * 10 + (b - b'0') as u128) % q);
            ring.constant_like(v as u64)
        }
        Ast::Var(c) => ring.var(ring.var_index(&c.to_string()).expect("collected variable")),
        Ast::Neg(a) => eval_mod(a, ring)?.neg(),
        Ast::Add(a, b) => eval_mod(a, ring)?.add(&eval_mod(b, ring)?),
        Ast::Sub(a, b) => eval_mod(a, ring)?.sub(&eval_mod(b, ring)?),
        Ast::Mul(a, b) => eval_mod(a, ring)?.mul(&eval_mod(b, ring)?),
        Ast::Pow(a, n) => eval_mod(a, ring)?.pow(*n as u64),
        Ast::Div(_, _, at) | Ast::PowSym(_, _, at) => {
            return Err(Error::Syntax {
                offset: *at,
                message: "not supported over Z/p^e".into(),
            })
        }
    })
}

/// Parses over the integers. Letters in `bindings` are replaced by constants;
/// the remaining letters must appear in `vars`. `/` divides exactly by a
/// nonzero constant.
pub fn parse_int_poly(src: &str, vars: &[&str], bindings: &BTreeMap<char, i128>) -> Result<IntPoly> {
    let ast = parse_ast(src, true)?;
    let mut seen = BTreeSet::new();
    collect_vars(&ast, &mut seen);
    for c in seen {
        if !bindings.contains_key(&c) && !vars.contains(&c.to_string().as_str()) {
            return Err(Error::RingMismatch(format!("variable {c} is not among {vars:?}")));
        }
    }
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    eval_int(&ast, &names, bindings)
}

fn overflow() -> Error {
    Error::Inconsistent("integer coefficient overflow".into())
}

fn int_const(names: &[String], c: i128) -> IntPoly {
    let mut r = IntPoly::new(names.to_vec());
    r.add_term(vec![0; names.len()], c);
    r
}

fn checked_mul(a: &IntPoly, b: &IntPoly) -> Result<IntPoly> {
    let mut r = IntPoly::new(a.vars.clone());
    for (ea, &ca) in &a.terms {
        for (eb, &cb) in &b.terms {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca.checked_mul(cb).ok_or_else(overflow)?;
            let cur = r.terms.get(&e).copied().unwrap_or(0);
            cur.checked_add(c).ok_or_else(overflow)?;
            r.add_term(e, c);
        }
    }
    Ok(r)
}

fn eval_int(ast: &Ast, names: &[String], bindings: &BTreeMap<char, i128>) -> Result<IntPoly> {
    Ok(match ast {
        Ast::Num(d) => int_const(names, d.parse::<i128>().map_err(|_| overflow())?),
        Ast::Var(c) => match bindings.get(c) {
            Some(&v) => int_const(names, v),
            None => {
                let i = names.iter().position(|n| n == &c.to_string()).expect("checked variable");
                let mut e = vec![0; names.len()];
                e[i] = 1;
                let mut r = IntPoly::new(names.to_vec());
                r.add_term(e, 1);
                r
            }
        },
        Ast::Neg(a) => {
            let a = eval_int(a, names, bindings)?;
            int_const(names, 0).sub(&a)
        }
        Ast::Add(a, b) => {
            let a = eval_int(a, names, bindings)?;
            let b = eval_int(b, names, bindings)?;
            a.sub(&int_const(names, 0).sub(&b))
        }
        Ast::Sub(a, b) => eval_int(a, names, bindings)?.sub(&eval_int(b, names, bindings)?),
        Ast::Mul(a, b) => checked_mul(&eval_int(a, names, bindings)?, &eval_int(b, names, bindings)?)?,
        Ast::Pow(a, n) => {
            let a = eval_int(a, names, bindings)?;
            let mut r = int_const(names, 1);
            for _ in 0..*n {
                r = checked_mul(&r, &a)?;
            }
            r
        }
        Ast::PowSym(a, c, at) => {
            let n = match bindings.get(c) {
                Some(&n) if (0..=MAX_EXPONENT as i128).contains(&n) => n as u32,
                Some(_) => return Err(Error::ExponentOverflow { offset: *at }),
                None => {
                    return Err(Error::Syntax {
                        offset: *at,
                        message: format!("exponent {c} is not a bound constant"),
                    })
                }
            };
            eval_int(&Ast::Pow(a.clone(), n), names, bindings)?
        }
        Ast::Div(a, b, at) => {
            let a = eval_int(a, names, bindings)?;
            let b = eval_int(b, names, bindings)?;
            let zero = vec![0; names.len()];
            let d = match (b.terms.len(), b.terms.get(&zero)) {
                (1, Some(&d)) => d,
                _ => {
                    return Err(Error::Syntax {
                        offset: *at,
                        message: "divisor must be a nonzero constant".into(),
                    })
                }
            };
            let mut r = IntPoly::new(names.to_vec());
            for (e, &c) in &a.terms {
                if c % d != 0 {
                    return Err(Error::Syntax {
                        offset: *at,
                        message: format!("division by {d} is not exact"),
                    });
                }
                r.add_term(e.clone(), c / d);
            }
            r
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let m5 = Modulus::prime(5).unwrap();
        let f = parse_poly("y^2 - x^3 - x", m5).unwrap();
        assert_eq!(f.vars().as_slice(), ["x", "y"]);
        assert_eq!(f.len(), 3);
        assert_eq!(f.coeff(&[0, 2]), 1);
        assert_eq!(f.coeff(&[3, 0]), 4);
        assert_eq!(f.coeff(&[1, 0]), 4);

        let g = parse_poly("(x+y)^2", Modulus::prime(3).unwrap()).unwrap();
        assert_eq!((g.coeff(&[2, 0]), g.coeff(&[1, 1]), g.coeff(&[0, 2])), (1, 2, 1));

        assert_eq!(
            parse_poly("x^", m5).unwrap_err(),
            Error::Syntax {
                offset: 2,
                message: "expected exponent, found end of input".into()
            }
        );
    }

    #[test]
    fn parse_errors() {
        let m5 = Modulus::prime(5).unwrap();
        assert!(matches!(parse_poly("x^4294967296", m5), Err(Error::ExponentOverflow { offset: 2 })));
        assert!(matches!(parse_poly("x + $", m5), Err(Error::UnknownChar { offset: 4, ch: '$' })));
        assert!(matches!(parse_poly("x y", m5), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_poly("(x", m5), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_poly("X", m5), Err(Error::UnknownChar { offset: 0, ch: 'X' })));
    }

    #[test]
    fn integer_front_end() {
        let mut b = BTreeMap::new();
        b.insert('p', 5);
        let f = parse_int_poly("((1+t)^p-1-t^p)/p", &["t"], &b).unwrap();
        assert_eq!(f.terms.get(&vec![1]), Some(&1));
        assert_eq!(f.terms.get(&vec![2]), Some(&2));
        assert_eq!(f.terms.get(&vec![4]), Some(&1));
        assert!(parse_int_poly("t/2", &["t"], &b).is_err());
    }
}
