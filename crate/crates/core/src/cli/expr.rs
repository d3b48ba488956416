//! Recursive-descent parser for trigonometric-polynomial expressions such as
//! `0.5 - 0.25*cos(2*t1 - t3) + sqrt(2)*sin(t2)*cos(t4)`.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'pi' | '(' expr ')' | 'sqrt' '(' expr ')'
//!         | ('cos' | 'sin') '(' phase ')'
//! phase  := ['-'] pterm (('+' | '-') pterm)*
//! pterm  := integer ['*' var] | var
//! var    := 't1' … 't<dim>'
//! ```
//! Division and `sqrt` accept constant operands only.

use std::f64::consts::PI;

use crate::fields::ScalarField;

/// A parse failure at a byte offset within the expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

type PResult<T> = std::result::Result<T, ExprError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> PResult<Self> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit()
                || (c == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit()))
            {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s = &text[start..i];
                let tok = if s.bytes().all(|b| b.is_ascii_digit()) {
                    match s.parse::<i64>() {
                        Ok(n) => Tok::Int(n),
                        Err(_) => Tok::Num(s.parse().map_err(|_| err(start, "malformed number"))?),
                    }
                } else {
                    Tok::Num(
                        s.parse()
                            .map_err(|_| err(start, format!("malformed number `{s}`")))?,
                    )
                };
                toks.push((tok, start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            } else if "+-*/^(),".contains(c) {
                toks.push((Tok::Sym(c), i));
                i += 1;
            } else {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(err(i, format!("unexpected character `{ch}`")));
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Lexer { toks })
    }
}

fn err(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError {
        offset,
        message: message.into(),
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.offset(), format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> PResult<ScalarField> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<ScalarField> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = acc.try_mul(&rhs).map_err(|e| err(at, e.to_string()))?;
            } else if self.eat('/') {
                let rhs_at = self.offset();
                let rhs = self.unary()?;
                match rhs.as_constant() {
                    Some(c) if c != 0.0 => acc = acc.scale(1.0 / c),
                    Some(_) => return Err(err(rhs_at, "division by zero")),
                    None => return Err(err(rhs_at, "divisor must be a constant")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<ScalarField> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> PResult<ScalarField> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let n = match self.bump() {
            Tok::Int(n) if n <= 16 => n,
            _ => return Err(err(at, "exponent must be an integer between 0 and 16")),
        };
        let mut acc = ScalarField::one(self.dim);
        for _ in 0..n {
            acc = acc.try_mul(&base).map_err(|e| err(at, e.to_string()))?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> PResult<ScalarField> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(x) => Ok(ScalarField::constant(self.dim, x)),
            Tok::Int(n) => Ok(ScalarField::constant(self.dim, n as f64)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(ScalarField::constant(self.dim, PI)),
                "sqrt" => {
                    self.expect('(')?;
                    let inner_at = self.offset();
                    let e = self.expr()?;
                    self.expect(')')?;
                    match e.as_constant() {
                        Some(c) if c >= 0.0 => Ok(ScalarField::constant(self.dim, c.sqrt())),
                        Some(_) => Err(err(inner_at, "square root of a negative number")),
                        None => Err(err(inner_at, "sqrt takes a constant argument")),
                    }
                }
                "cos" | "sin" => {
                    self.expect('(')?;
                    let k = self.phase()?;
                    self.expect(')')?;
                    let f = if name == "cos" {
                        ScalarField::cos(self.dim, &k)
                    } else {
                        ScalarField::sin(self.dim, &k)
                    };
                    f.map_err(|e| err(at, e.to_string()))
                }
                other if self.var_index(other).is_some() => Err(err(
                    at,
                    format!("`{other}` may only appear inside cos(…) or sin(…)"),
                )),
                other => Err(err(at, format!("unknown name `{other}`"))),
            },
            Tok::End => Err(err(at, "unexpected end of expression")),
            Tok::Sym(c) => Err(err(at, format!("unexpected `{c}`"))),
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        let i: usize = name.strip_prefix('t')?.parse().ok()?;
        (1..=self.dim).contains(&i).then(|| i - 1)
    }

    fn phase(&mut self) -> PResult<Vec<i32>> {
        let mut k = vec![0i64; self.dim];
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            let at = self.offset();
            let (coef, var) = match self.bump() {
                Tok::Int(n) => {
                    if !self.eat('*') {
                        return Err(err(at, "constant phase offsets are not supported"));
                    }
                    let vat = self.offset();
                    match self.bump() {
                        Tok::Ident(v) => (
                            n,
                            self.var_index(&v)
                                .ok_or_else(|| err(vat, format!("unknown variable `{v}`")))?,
                        ),
                        _ => return Err(err(vat, "expected a variable t1…")),
                    }
                }
                Tok::Ident(v) => (
                    1,
                    self.var_index(&v)
                        .ok_or_else(|| err(at, format!("unknown variable `{v}`")))?,
                ),
                Tok::Num(_) => return Err(err(at, "frequencies must be integers")),
                _ => return Err(err(at, "expected a frequency term such as 2*t1")),
            };
            k[var] += sign * coef;
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        k.into_iter()
            .map(|x| i32::try_from(x).map_err(|_| err(0, "frequency out of range")))
            .collect()
    }
}

/// Parses one expression in `dim` variables `t1 … t<dim>`.
pub fn parse_expression(text: &str, dim: usize) -> Result<ScalarField, ExprError> {
    let lexer = Lexer::new(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        dim,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(err(p.offset(), "unexpected trailing input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_expands_to_two_terms() {
        // cos(2t₁) sin(t₃) = ½ sin(2t₁ + t₃) − ½ sin(2t₁ − t₃)
        let f = parse_expression("cos(2*t1)*sin(t3)", 4).unwrap();
        let expected = &ScalarField::sin(4, &[2, 0, 1, 0]).unwrap().scale(0.5)
            - &ScalarField::sin(4, &[2, 0, -1, 0]).unwrap().scale(0.5);
        assert_eq!(f, expected);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn display_round_trips() {
        let f =
            parse_expression("0.3 - 1.4142135623730951*cos(t1 - 2*t4) + sin(3*t2)/7", 4).unwrap();
        assert_eq!(parse_expression(&f.to_string(), 4).unwrap(), f);
        let z = ScalarField::zero(4);
        assert_eq!(parse_expression(&z.to_string(), 4).unwrap(), z);
    }

    #[test]
    fn constants_and_powers() {
        let f = parse_expression("sqrt(2)*pi/2 + cos(t1)^2", 4).unwrap();
        let p = [0.4, 0.0, 0.0, 0.0];
        let want = 2f64.sqrt() * PI / 2.0 + 0.4f64.cos().powi(2);
        assert!((f.value(&p) - want).abs() < 1e-14);
        assert_eq!(
            parse_expression("1e-3", 4).unwrap().as_constant(),
            Some(1e-3)
        );
    }

    #[test]
    fn positioned_errors() {
        assert_eq!(parse_expression("1 + t2", 4).unwrap_err().offset, 4);
        assert_eq!(parse_expression("cos(0.5*t1)", 4).unwrap_err().offset, 4);
        assert_eq!(parse_expression("cos(t5)", 4).unwrap_err().offset, 4);
        assert_eq!(
            parse_expression("2 * (1 + cos(t1)", 4).unwrap_err().offset,
            16
        );
        assert_eq!(parse_expression("1 / cos(t1)", 4).unwrap_err().offset, 4);
        assert_eq!(parse_expression("3 $", 4).unwrap_err().offset, 2);
        assert!(parse_expression("cos(1)", 4).is_err());
        assert!(parse_expression("", 4).is_err());
    }
}
