use num_rational::BigRational;
use num_traits::Signed;

use crate::error::ParseError;
use crate::error::{EvalError, ParseErrorKind};
use crate::precision::PrecisionConfig;
use crate::scalar::{Scalar, Value};

/// Evaluation mode of an expression: exact rational arithmetic is possible
/// iff the tree contains no ln/exp/sqrt and no non-integer exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rationality {
    ExactRational,
    Transcendental,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    /// Exact rational constant (decimal literals convert exactly).
    Const(BigRational),
    /// The index variable `n`.
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Ln(Box<Node>),
    Exp(Box<Node>),
    Sqrt(Box<Node>),
    Factorial(Box<Node>),
}

/// An AST node with its source span (byte offsets, half-open).
#[derive(Debug, Clone)]
pub struct Node {
    pub kind: ExprKind,
    pub span: (usize, usize),
}

impl Node {
    pub fn new(kind: ExprKind, span: (usize, usize)) -> Self {
        Node { kind, span }
    }
}

/// Structural equality ignores spans.
impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Const(a), Const(b)) => a == b,
            (Var, Var) => true,
            (Neg(a), Neg(b))
            | (Ln(a), Ln(b))
            | (Exp(a), Exp(b))
            | (Sqrt(a), Sqrt(b))
            | (Factorial(a), Factorial(b)) => a == b,
            (Add(a1, a2), Add(b1, b2))
            | (Sub(a1, a2), Sub(b1, b2))
            | (Mul(a1, a2), Mul(b1, b2))
            | (Div(a1, a2), Div(b1, b2))
            | (Pow(a1, a2), Pow(b1, b2)) => a1 == b1 && a2 == b2,
            _ => false,
        }
    }
}

impl Eq for Node {}

/// A parsed term formula `a_n`. Immutable after construction and safe to
/// share across concurrent analyses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermExpr {
    root: Node,
}

impl TermExpr {
    pub(crate) fn from_root(root: Node) -> Self {
        TermExpr { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Parse source text into a term expression.
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let tokens = super::lex::tokenize(source)?;
        super::parse::parse(&tokens, source.len())
    }

    /// Classification is syntactic: see [`Rationality`].
    pub fn classify(&self) -> Rationality {
        if node_is_exact_rational(&self.root) {
            Rationality::ExactRational
        } else {
            Rationality::Transcendental
        }
    }

    /// Evaluate at index `n >= 1` in the scalar type `S`.
    pub fn evaluate<S: Scalar>(&self, n: u64, cfg: &PrecisionConfig) -> Result<S, EvalError> {
        super::eval::eval(&self.root, n, cfg)
    }

    /// Evaluate dispatching on the classification: exact rational result for
    /// exact expressions, floating otherwise.
    pub fn evaluate_value(&self, n: u64, cfg: &PrecisionConfig) -> Result<Value, EvalError> {
        match self.classify() {
            Rationality::ExactRational => {
                Ok(Value::Exact(Scalar::compress(&self.evaluate(n, cfg)?)))
            }
            Rationality::Transcendental => Ok(Value::Float(self.evaluate(n, cfg)?)),
        }
    }
}

impl TermExpr {
    /// The reciprocal 1/e; 1/(1/q) simplifies to q.
    pub fn reciprocal(&self) -> TermExpr {
        use ExprKind::*;
        if let Div(a, b) = &self.root.kind {
            if matches!(&a.kind, Const(c) if c == &BigRational::from_integer(1.into())) {
                return TermExpr {
                    root: (**b).clone(),
                };
            }
        }
        let one = Node::new(ExprKind::Const(BigRational::from_integer(1.into())), (0, 0));
        let span = self.root.span;
        TermExpr {
            root: Node::new(Div(Box::new(one), Box::new(self.root.clone())), span),
        }
    }
}

impl std::fmt::Display for TermExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        super::print::print_node(&self.root, f)
    }
}

fn node_is_exact_rational(n: &Node) -> bool {
    use ExprKind::*;
    match &n.kind {
        Const(_) | Var => true,
        Neg(a) | Factorial(a) => node_is_exact_rational(a),
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
            node_is_exact_rational(a) && node_is_exact_rational(b)
        }
        Pow(a, b) => node_is_exact_rational(a) && is_integer_valued(b),
        Ln(_) | Exp(_) | Sqrt(_) => false,
    }
}

/// Syntactic proof that a subexpression takes integer values for all n >= 1.
pub(crate) fn is_integer_valued(n: &Node) -> bool {
    use ExprKind::*;
    match &n.kind {
        Const(c) => c.is_integer(),
        Var => true,
        Neg(a) => is_integer_valued(a),
        Add(a, b) | Sub(a, b) | Mul(a, b) => is_integer_valued(a) && is_integer_valued(b),
        Pow(a, b) => {
            is_integer_valued(a)
                && matches!(&b.kind, Const(c) if c.is_integer() && !Signed::is_negative(c))
        }
        Factorial(_) => factorial_operand_admissible(n_factorial_operand(n)),
        Div(_, _) | Ln(_) | Exp(_) | Sqrt(_) => false,
    }
}

fn n_factorial_operand(n: &Node) -> &Node {
    match &n.kind {
        ExprKind::Factorial(a) => a,
        _ => n,
    }
}

/// Whitelist of factorial operands provably integer-valued for all n >= 1:
/// integer constants, `n`, `n + k`, `k + n`, `k * n`, `n * k` with integer
/// constant `k`. The check is syntactic by design.
pub(crate) fn factorial_operand_admissible(op: &Node) -> bool {
    use ExprKind::*;
    let is_int_const = |x: &Node| matches!(&x.kind, Const(c) if c.is_integer());
    match &op.kind {
        Const(c) => c.is_integer(),
        Var => true,
        Add(a, b) => {
            (matches!(a.kind, Var) && is_int_const(b)) || (is_int_const(a) && matches!(b.kind, Var))
        }
        Mul(a, b) => {
            (matches!(a.kind, Var) && is_int_const(b)) || (is_int_const(a) && matches!(b.kind, Var))
        }
        _ => false,
    }
}

pub(crate) fn factorial_check(op: &Node, position: usize) -> Result<(), ParseError> {
    if factorial_operand_admissible(op) {
        Ok(())
    } else {
        Err(ParseError {
            kind: ParseErrorKind::FactorialOfNonInteger,
            position,
        })
    }
}

/// Exact rational evaluation of an integer-valued subtree (used for
/// exponents and factorial operands in either mode).
pub(crate) fn eval_exact_subtree(
    node: &Node,
    n: u64,
    cfg: &PrecisionConfig,
) -> Result<BigRational, EvalError> {
    super::eval::eval::<BigRational>(node, n, cfg)
}
