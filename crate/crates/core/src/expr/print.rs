//! Precedence-aware printing. For any expression produced by the parser,
//! `parse(print(e)) == e` structurally.

use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ast::{ExprKind, Node};

// Binding strength used to decide parenthesization: addition 1,
// multiplication 2, unary minus 3, power 4, postfix factorial 5, atoms 6.
fn prec(n: &Node) -> u8 {
    use ExprKind::*;
    match &n.kind {
        Add(_, _) | Sub(_, _) => 1,
        Mul(_, _) | Div(_, _) => 2,
        Neg(_) => 3,
        Pow(_, _) => 4,
        Factorial(_) => 5,
        Var | Ln(_) | Exp(_) | Sqrt(_) => 6,
        Const(c) => const_prec(c),
    }
}

fn const_prec(c: &BigRational) -> u8 {
    if c.is_negative() {
        3
    } else if decimal_scale(c.denom()).is_some() {
        6
    } else {
        // Falls back to a division rendering.
        2
    }
}

/// If `d` = 2^a 5^b, the number of decimal digits needed after the point.
fn decimal_scale(d: &BigInt) -> Option<u32> {
    let mut d = d.clone();
    let (mut a, mut b) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if d.is_one() {
        Some(a.max(b))
    } else {
        None
    }
}

fn write_const(c: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_negative() {
        f.write_char('-')?;
        return write_const(&-c, f);
    }
    if c.is_integer() {
        return write!(f, "{}", c.numer());
    }
    match decimal_scale(c.denom()) {
        Some(k) => {
            let scaled = c.numer() * BigInt::from(10).pow(k) / c.denom();
            let digits = scaled.to_string();
            let k = k as usize;
            if digits.len() > k {
                let (int_part, frac_part) = digits.split_at(digits.len() - k);
                write!(f, "{int_part}.{frac_part}")
            } else {
                write!(f, "0.{}{digits}", "0".repeat(k - digits.len()))
            }
        }
        None => write!(f, "{}/{}", c.numer(), c.denom()),
    }
}

fn child(n: &Node, need: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(n) < need {
        f.write_char('(')?;
        print_node(n, f)?;
        f.write_char(')')
    } else {
        print_node(n, f)
    }
}

pub fn print_node(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    use ExprKind::*;
    match &n.kind {
        Const(c) => write_const(c, f),
        Var => f.write_char('n'),
        Neg(a) => {
            f.write_char('-')?;
            child(a, 3, f)
        }
        Add(a, b) => {
            child(a, 1, f)?;
            f.write_char('+')?;
            child(b, 2, f)
        }
        Sub(a, b) => {
            child(a, 1, f)?;
            f.write_char('-')?;
            child(b, 2, f)
        }
        Mul(a, b) => {
            child(a, 2, f)?;
            f.write_char('*')?;
            child(b, 3, f)
        }
        Div(a, b) => {
            child(a, 2, f)?;
            f.write_char('/')?;
            child(b, 3, f)
        }
        Pow(a, b) => {
            // The grammar's power base is a bare atom, so anything weaker
            // (including another power) must be parenthesized.
            child(a, 6, f)?;
            f.write_char('^')?;
            child(b, 3, f)
        }
        Ln(a) => {
            f.write_str("ln(")?;
            print_node(a, f)?;
            f.write_char(')')
        }
        Exp(a) => {
            f.write_str("exp(")?;
            print_node(a, f)?;
            f.write_char(')')
        }
        Sqrt(a) => {
            f.write_str("sqrt(")?;
            print_node(a, f)?;
            f.write_char(')')
        }
        Factorial(a) => {
            child(a, 6, f)?;
            f.write_char('!')
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::TermExpr;

    fn round_trip(src: &str) {
        let parsed = TermExpr::parse(src).unwrap();
        let printed = parsed.to_string();
        let reparsed = TermExpr::parse(&printed)
            .unwrap_or_else(|e| panic!("printed form {printed:?} of {src:?} fails: {e}"));
        assert_eq!(parsed, reparsed, "round trip of {src:?} via {printed:?}");
    }

    #[test]
    fn round_trips() {
        for src in [
            "1/2^n",
            "2^-n",
            "1/(n*ln(n)^2)",
            "n!/n^n",
            "(n+3)!",
            "2+3*4",
            "2^3^2",
            "-n^2",
            "2-(3-4)",
            "8/4/2",
            "0.5^n",
            "1/(n^2+1)",
            "sqrt(n)/(n^2-0.25)",
            "exp(-n)",
            "pow(n, 2)",
            "fact(2*n)",
            "(1+1/n)^n/2^n",
            "n*(n+1)",
            "--n",
            "(n+1)/(2*n^3)",
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn canonical_strings() {
        let s = |src: &str| TermExpr::parse(src).unwrap().to_string();
        assert_eq!(s("1 / 2 ^ n"), "1/2^n");
        assert_eq!(s("2+(3*4)"), "2+3*4");
        assert_eq!(s("(2+3)*4"), "(2+3)*4");
        assert_eq!(s("2^(3^2)"), "2^3^2");
        assert_eq!(s("-(n^2)"), "-n^2");
        assert_eq!(s("0.25"), "0.25");
        assert_eq!(s("fact(n)"), "n!");
        assert_eq!(s("pow(2, n)"), "2^n");
    }

    #[test]
    fn mul_right_division_keeps_grouping() {
        let s = TermExpr::parse("8/(4/2)").unwrap().to_string();
        assert_eq!(s, "8/(4/2)");
        round_trip("8/(4/2)");
    }
}
