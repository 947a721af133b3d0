use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::ast::{eval_exact_subtree, is_integer_valued, ExprKind, Node};
use crate::error::EvalError;
use crate::precision::PrecisionConfig;
use crate::scalar::{NumError, Scalar, MAGNITUDE_CAP_BITS};

fn lift(err: NumError, n: u64) -> EvalError {
    match err {
        NumError::DivisionByZero => EvalError::DivisionByZero { n },
        NumError::Overflow => EvalError::Overflow { n },
        NumError::Domain(reason) => EvalError::Domain { n, reason },
        NumError::ExactUnsupported(what) => EvalError::ExactUnsupported(what),
    }
}

fn capped<S: Scalar>(v: S, n: u64) -> Result<S, EvalError> {
    if v.magnitude_bits() > MAGNITUDE_CAP_BITS {
        Err(EvalError::Overflow { n })
    } else {
        Ok(v)
    }
}

pub fn eval<S: Scalar>(node: &Node, n: u64, cfg: &PrecisionConfig) -> Result<S, EvalError> {
    use ExprKind::*;
    let v = match &node.kind {
        Const(c) => S::from_ratio(c, cfg),
        Var => S::from_u64(n, cfg),
        Neg(a) => eval::<S>(a, n, cfg)?.neg(),
        Add(a, b) => eval::<S>(a, n, cfg)?.add(&eval(b, n, cfg)?),
        Sub(a, b) => eval::<S>(a, n, cfg)?.sub(&eval(b, n, cfg)?),
        Mul(a, b) => eval::<S>(a, n, cfg)?.mul(&eval(b, n, cfg)?),
        Div(a, b) => {
            let num = eval::<S>(a, n, cfg)?;
            let den = eval::<S>(b, n, cfg)?;
            // Unreduced quotient: reducing here costs a gcd on operands that
            // grow to tens of kilobits for factorial/power terms, per index.
            // Values compare correctly unreduced; reporting sites compress.
            num.div_unreduced(&den).map_err(|e| lift(e, n))?
        }
        Pow(base, exp) => {
            let b = eval::<S>(base, n, cfg)?;
            if is_integer_valued(exp) {
                // Integer-valued exponents are computed exactly regardless of
                // the scalar mode, so 2^-n works in exact arithmetic.
                let e = eval_exact_subtree(exp, n, cfg)?;
                debug_assert!(e.is_integer());
                b.pow_bigint(e.numer()).map_err(|e| lift(e, n))?
            } else {
                let e = eval::<S>(exp, n, cfg)?;
                b.pow_scalar(&e).map_err(|e| lift(e, n))?
            }
        }
        Ln(a) => eval::<S>(a, n, cfg)?.ln().map_err(|e| lift(e, n))?,
        Exp(a) => eval::<S>(a, n, cfg)?.exp().map_err(|e| lift(e, n))?,
        Sqrt(a) => eval::<S>(a, n, cfg)?.sqrt().map_err(|e| lift(e, n))?,
        Factorial(a) => {
            let k = eval_exact_subtree(a, n, cfg)?;
            let f = factorial(&k, n)?;
            S::from_bigint(&f, cfg)
        }
    };
    capped(v, n)
}

/// Exact factorial of a (whitelisted, hence integer) operand value.
fn factorial(k: &BigRational, n: u64) -> Result<BigInt, EvalError> {
    if !k.is_integer() {
        return Err(EvalError::Domain {
            n,
            reason: "factorial of a non-integer value",
        });
    }
    if Signed::is_negative(k) {
        return Err(EvalError::Domain {
            n,
            reason: "factorial of a negative value",
        });
    }
    let m = k.numer().to_u64().ok_or(EvalError::Overflow { n })?;
    let mut acc = BigInt::one();
    for i in 2..=m {
        acc *= i;
        if acc.bits() as i64 > MAGNITUDE_CAP_BITS {
            return Err(EvalError::Overflow { n });
        }
    }
    Ok(acc)
}
