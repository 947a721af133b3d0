//! Recursive-descent parser for the term grammar:
//!
//! ```text
//! expr    := term (("+"|"-") term)*
//! term    := unary (("*"|"/") unary)*
//! unary   := "-" unary | postfix
//! postfix := atom ("!")?
//! atom    := NUMBER | "n" | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//!          | atom "^" unary
//! ```
//!
//! `^` is right-associative (its exponent re-enters `unary`), and binds
//! tighter than unary minus on the left while admitting it on the right:
//! `-n^2` is `-(n^2)` and `2^-n` is `2^(-n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::ast::{factorial_check, ExprKind, Node, TermExpr};
use super::lex::{Token, TokenKind};
use crate::error::{ParseError, ParseErrorKind};

pub fn parse(tokens: &[Token], source_len: usize) -> Result<TermExpr, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        source_len,
    };
    let root = p.expr()?;
    if p.pos < tokens.len() {
        return Err(p.err_here(ParseErrorKind::UnexpectedToken));
    }
    Ok(TermExpr::from_root(root))
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    source_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_op(&self, op: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Operator && t.lexeme == op)
    }

    fn at_paren(&self, p: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Paren && t.lexeme == p)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.position).unwrap_or(self.source_len)
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.here(),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while self.at_op("+") || self.at_op("-") {
            let op = self.bump().unwrap().lexeme.clone();
            let rhs = self.term()?;
            let span = (lhs.span.0, rhs.span.1);
            let kind = if op == "+" {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node::new(kind, span);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while self.at_op("*") || self.at_op("/") {
            let op = self.bump().unwrap().lexeme.clone();
            let rhs = self.unary()?;
            let span = (lhs.span.0, rhs.span.1);
            let kind = if op == "*" {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node::new(kind, span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.at_op("-") {
            let start = self.bump().unwrap().position;
            let inner = self.unary()?;
            let span = (start, inner.span.1);
            return Ok(Node::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Node, ParseError> {
        let inner = self.atom()?;
        if self.at_op("!") {
            let bang = self.bump().unwrap();
            factorial_check(&inner, inner.span.0)?;
            let span = (inner.span.0, bang.position + 1);
            return Ok(Node::new(ExprKind::Factorial(Box::new(inner)), span));
        }
        Ok(inner)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let head = match self.peek() {
            Some(t) => t,
            None => return Err(self.err_here(ParseErrorKind::UnexpectedToken)),
        };
        let mut node = match head.kind {
            TokenKind::Number => {
                let t = self.bump().unwrap();
                let value = number_to_rational(&t.lexeme).ok_or(ParseError {
                    kind: ParseErrorKind::MalformedNumber,
                    position: t.position,
                })?;
                Node::new(
                    ExprKind::Const(value),
                    (t.position, t.position + t.lexeme.len()),
                )
            }
            TokenKind::Identifier => {
                let t = self.bump().unwrap();
                if t.lexeme == "n" {
                    Node::new(ExprKind::Var, (t.position, t.position + 1))
                } else {
                    self.call(t)?
                }
            }
            TokenKind::Paren if head.lexeme == "(" => {
                let open = self.bump().unwrap();
                let inner = self.expr()?;
                if !self.at_paren(")") {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnbalancedParen,
                        position: open.position,
                    });
                }
                let close = self.bump().unwrap();
                Node::new(inner.kind, (open.position, close.position + 1))
            }
            _ => return Err(self.err_here(ParseErrorKind::UnexpectedToken)),
        };
        if self.at_op("^") {
            self.bump();
            let exponent = self.unary()?;
            let span = (node.span.0, exponent.span.1);
            node = Node::new(ExprKind::Pow(Box::new(node), Box::new(exponent)), span);
        }
        Ok(node)
    }

    fn call(&mut self, name: &Token) -> Result<Node, ParseError> {
        let arity = match name.lexeme.as_str() {
            "ln" | "exp" | "sqrt" | "fact" => 1,
            "pow" => 2,
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnknownFunction,
                    position: name.position,
                })
            }
        };
        if !self.at_paren("(") {
            return Err(self.err_here(ParseErrorKind::UnexpectedToken));
        }
        let open = self.bump().unwrap();
        let mut args = vec![self.expr()?];
        while matches!(self.peek(), Some(t) if t.kind == TokenKind::Comma) {
            self.bump();
            args.push(self.expr()?);
        }
        if !self.at_paren(")") {
            return Err(ParseError {
                kind: ParseErrorKind::UnbalancedParen,
                position: open.position,
            });
        }
        let close = self.bump().unwrap();
        if args.len() != arity {
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken,
                position: close.position,
            });
        }
        let span = (name.position, close.position + 1);
        let kind = match name.lexeme.as_str() {
            "ln" => ExprKind::Ln(Box::new(args.pop().unwrap())),
            "exp" => ExprKind::Exp(Box::new(args.pop().unwrap())),
            "sqrt" => ExprKind::Sqrt(Box::new(args.pop().unwrap())),
            "fact" => {
                let arg = args.pop().unwrap();
                factorial_check(&arg, arg.span.0)?;
                ExprKind::Factorial(Box::new(arg))
            }
            "pow" => {
                let e = args.pop().unwrap();
                let b = args.pop().unwrap();
                ExprKind::Pow(Box::new(b), Box::new(e))
            }
            _ => unreachable!(),
        };
        Ok(Node::new(kind, span))
    }
}

/// Convert a NUMBER lexeme (`digits ("." digits)?`) to an exact rational.
fn number_to_rational(lexeme: &str) -> Option<BigRational> {
    let (int_part, frac_part) = match lexeme.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lexeme, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = if frac_part.is_empty() {
        BigInt::one()
    } else {
        BigInt::from(10u32).pow(frac_part.len())
    };
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::super::ast::TermExpr;
    use crate::error::ParseErrorKind;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn p(src: &str) -> TermExpr {
        TermExpr::parse(src).unwrap()
    }

    fn perr(src: &str) -> crate::error::ParseError {
        TermExpr::parse(src).unwrap_err()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("2+3*4"), p("2+(3*4)"));
        assert_eq!(p("2^3^2"), p("2^(3^2)"));
        assert_eq!(p("-n^2"), p("-(n^2)"));
        assert_eq!(p("2^-n"), p("2^(-n)"));
        assert_eq!(p("2-3-4"), p("(2-3)-4"));
        assert_eq!(p("8/4/2"), p("(8/4)/2"));
    }

    #[test]
    fn structural_examples() {
        // 1/(n*ln(n)^2) groups as div(1, mul(n, pow(ln(n), 2)))
        assert_eq!(p("1/(n*ln(n)^2)"), p("1 / ( n * ( ln(n) ^ 2 ) )"));
        assert_eq!(p("pow(n, 2)"), p("n^2"));
        assert_eq!(p("fact(n)"), p("n!"));
    }

    #[test]
    fn decimal_literals_are_exact() {
        let e = p("0.5");
        match &e.root().kind {
            super::super::ast::ExprKind::Const(c) => {
                assert_eq!(*c, BigRational::new(BigInt::from(1), BigInt::from(2)));
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn double_factorial_is_rejected() {
        let err = perr("n!!");
        assert_eq!(err.kind, ParseErrorKind::UnexpectedToken);
        assert_eq!(err.position, 2);
    }

    #[test]
    fn factorial_whitelist() {
        assert!(TermExpr::parse("n!").is_ok());
        assert!(TermExpr::parse("(n+3)!").is_ok());
        assert!(TermExpr::parse("(2*n)!").is_ok());
        assert!(TermExpr::parse("5!").is_ok());
        assert_eq!(
            perr("(n/2)!").kind,
            ParseErrorKind::FactorialOfNonInteger
        );
        assert_eq!(perr("fact(n^2)").kind, ParseErrorKind::FactorialOfNonInteger);
    }

    #[test]
    fn error_kinds_and_positions() {
        assert_eq!(perr("(1+2").kind, ParseErrorKind::UnbalancedParen);
        assert_eq!(perr("(1+2").position, 0);
        assert_eq!(perr("sin(n)").kind, ParseErrorKind::UnknownFunction);
        assert_eq!(perr("sin(n)").position, 0);
        assert_eq!(perr("2*").kind, ParseErrorKind::UnexpectedToken);
        assert_eq!(perr("2*").position, 2);
        assert_eq!(perr("").kind, ParseErrorKind::UnexpectedToken);
    }
}
