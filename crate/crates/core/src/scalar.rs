//! Scalar abstraction: exact rational arithmetic and high-precision floating
//! arithmetic behind one trait, so series operations can be written once.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::precision::PrecisionConfig;

/// Magnitude cap: any intermediate with |x| > 2^(2^20) raises an overflow.
pub const MAGNITUDE_CAP_BITS: i64 = 1 << 20;
/// Resource guard: exact rationals whose representation would exceed this many
/// bits abort with an overflow instead of exhausting memory.
pub const SIZE_CAP_BITS: u64 = 1 << 26;

const RM: RoundingMode = RoundingMode::ToEven;

/// Numeric errors independent of the evaluation site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumError {
    DivisionByZero,
    Overflow,
    Domain(&'static str),
    ExactUnsupported(&'static str),
}

/// A number as exposed to reports and callers: exact rational or floating
/// with its precision.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(BigRational),
    Float(Fp),
}

impl Value {
    /// Canonical string rendering: exact rationals as `num/den` (bare integer
    /// when the denominator is one), floats as decimal scientific notation
    /// tagged with the mantissa precision.
    pub fn render(&self) -> String {
        match self {
            Value::Exact(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Value::Float(f) => format!("{}@{}", f.x, f.prec),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            (Value::Float(a), Value::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// The scalar interface shared by `BigRational` (exact mode) and [`Fp`]
/// (floating mode). Floating values carry their precision, so binary
/// operations need no external configuration.
pub trait Scalar: Clone + PartialEq + PartialOrd + std::fmt::Debug + 'static {
    const EXACT: bool;

    fn from_u64(v: u64, cfg: &PrecisionConfig) -> Self;
    fn from_bigint(v: &BigInt, cfg: &PrecisionConfig) -> Self;
    fn from_ratio(v: &BigRational, cfg: &PrecisionConfig) -> Self;
    fn zero(cfg: &PrecisionConfig) -> Self;
    fn one(cfg: &PrecisionConfig) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self, NumError>;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;

    fn pow_bigint(&self, e: &BigInt) -> Result<Self, NumError>;
    /// Raise to a non-integer rational exponent (floating mode only).
    fn pow_ratio(&self, e: &BigRational) -> Result<Self, NumError>;
    /// Raise to an arbitrary scalar exponent via exp(e ln x) (floating mode only).
    fn pow_scalar(&self, e: &Self) -> Result<Self, NumError>;
    fn ln(&self) -> Result<Self, NumError>;
    fn exp(&self) -> Result<Self, NumError>;
    fn sqrt(&self) -> Result<Self, NumError>;

    /// Approximate position of the most significant bit of |x| (log2-ish);
    /// used for the magnitude cap.
    fn magnitude_bits(&self) -> i64;

    /// Comparison with tolerance: floating mode treats values within `tol` as
    /// equal; exact mode compares exactly.
    fn cmp_tol(&self, o: &Self, tol: &BigRational) -> Ordering;

    fn to_value(&self) -> Value;
    fn to_f64_lossy(&self) -> f64;

    /// Sum `term(lo) + ... + term(hi)`. Implementations may reorder the
    /// Addition that may skip normalization. Exact mode returns an unreduced
    /// fraction so that accumulating onto a very large partial sum stays
    /// linear instead of paying a multi-megabit gcd per step.
    fn add_unreduced(&self, o: &Self) -> Self {
        self.add(o)
    }

    /// Subtraction counterpart of [`Scalar::add_unreduced`].
    fn sub_unreduced(&self, o: &Self) -> Self {
        self.sub(o)
    }

    /// Exact value comparison safe for unreduced operands. The derived
    /// rational ordering recurses once per continued-fraction quotient, which
    /// overflows the stack when two equal values with long expansions meet;
    /// exact mode cross-multiplies instead (constant depth).
    fn cmp_values(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap()
    }

    /// Multiplication counterpart of [`Scalar::add_unreduced`].
    fn mul_unreduced(&self, o: &Self) -> Self {
        self.mul(o)
    }

    /// Division counterpart of [`Scalar::add_unreduced`].
    fn div_unreduced(&self, o: &Self) -> Result<Self, NumError> {
        self.div(o)
    }

    /// Shrink a potentially unreduced value to a reporting-friendly size.
    /// Exact mode reduces outright when the denominator is small and
    /// otherwise rounds to a dyadic fraction with ~192 significant bits;
    /// the sign of a nonzero value is always preserved. Identity for floats.
    fn compress(&self) -> Self {
        self.clone()
    }

    /// additions; exact mode uses divide-and-conquer to keep large range sums
    /// tractable.
    fn sum_range<E>(
        cfg: &PrecisionConfig,
        lo: u64,
        hi: u64,
        term: &mut dyn FnMut(u64) -> Result<Self, E>,
    ) -> Result<Self, E> {
        let mut acc = Self::zero(cfg);
        let mut n = lo;
        while n <= hi {
            acc = acc.add(&term(n)?);
            n += 1;
        }
        Ok(acc)
    }
}

fn ratio_bits(r: &BigRational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_u64(v: u64, _cfg: &PrecisionConfig) -> Self {
        BigRational::from_integer(v.into())
    }

    fn from_bigint(v: &BigInt, _cfg: &PrecisionConfig) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_ratio(v: &BigRational, _cfg: &PrecisionConfig) -> Self {
        v.clone()
    }

    fn zero(_cfg: &PrecisionConfig) -> Self {
        <BigRational as Zero>::zero()
    }

    fn one(_cfg: &PrecisionConfig) -> Self {
        <BigRational as One>::one()
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Result<Self, NumError> {
        if Zero::is_zero(o) {
            return Err(NumError::DivisionByZero);
        }
        Ok(self / o)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn pow_bigint(&self, e: &BigInt) -> Result<Self, NumError> {
        if e.is_zero() {
            return Ok(One::one());
        }
        if Zero::is_zero(self) {
            return if e.is_negative() {
                Err(NumError::DivisionByZero)
            } else {
                Ok(Zero::zero())
            };
        }
        let mag = e.magnitude();
        let exp = mag.to_u64().ok_or(NumError::Overflow)?;
        // Size guard before computing: |numer|^e and |denom|^e both grow linearly in e.
        let out_bits = ratio_bits(self).saturating_mul(exp);
        if out_bits > SIZE_CAP_BITS {
            return Err(NumError::Overflow);
        }
        let num = num_traits::pow::pow(self.numer().clone(), exp as usize);
        let den = num_traits::pow::pow(self.denom().clone(), exp as usize);
        // A reduced base stays reduced under powers, so no gcd pass is needed;
        // an unreduced base just stays unreduced.
        let r = BigRational::new_raw(num, den);
        Ok(if e.is_negative() { r.recip() } else { r })
    }

    fn pow_ratio(&self, _e: &BigRational) -> Result<Self, NumError> {
        Err(NumError::ExactUnsupported("non-integer exponent"))
    }

    fn pow_scalar(&self, _e: &Self) -> Result<Self, NumError> {
        Err(NumError::ExactUnsupported("transcendental exponent"))
    }

    fn ln(&self) -> Result<Self, NumError> {
        Err(NumError::ExactUnsupported("ln"))
    }

    fn exp(&self) -> Result<Self, NumError> {
        Err(NumError::ExactUnsupported("exp"))
    }

    fn sqrt(&self) -> Result<Self, NumError> {
        Err(NumError::ExactUnsupported("sqrt"))
    }

    fn magnitude_bits(&self) -> i64 {
        if Zero::is_zero(self) {
            return 0;
        }
        self.numer().bits() as i64 - self.denom().bits() as i64
    }

    fn cmp_tol(&self, o: &Self, _tol: &BigRational) -> Ordering {
        self.cmp_values(o)
    }

    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }

    fn to_f64_lossy(&self) -> f64 {
        let nb = self.numer().bits();
        let db = self.denom().bits();
        let shift = nb.max(db).saturating_sub(512);
        let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    }

    fn add_unreduced(&self, o: &Self) -> Self {
        BigRational::new_raw(
            self.numer() * o.denom() + o.numer() * self.denom(),
            self.denom() * o.denom(),
        )
    }

    fn sub_unreduced(&self, o: &Self) -> Self {
        BigRational::new_raw(
            self.numer() * o.denom() - o.numer() * self.denom(),
            self.denom() * o.denom(),
        )
    }

    fn cmp_values(&self, o: &Self) -> Ordering {
        // Denominators stay positive under every constructor used here.
        (self.numer() * o.denom()).cmp(&(o.numer() * self.denom()))
    }

    fn mul_unreduced(&self, o: &Self) -> Self {
        BigRational::new_raw(self.numer() * o.numer(), self.denom() * o.denom())
    }

    fn div_unreduced(&self, o: &Self) -> Result<Self, NumError> {
        if Zero::is_zero(o) {
            return Err(NumError::DivisionByZero);
        }
        let mut num = self.numer() * o.denom();
        let mut den = self.denom() * o.numer();
        if Signed::is_negative(&den) {
            num = -num;
            den = -den;
        }
        Ok(BigRational::new_raw(num, den))
    }

    fn compress(&self) -> Self {
        if self.denom().bits() <= 1 << 16 {
            return self.reduced();
        }
        if self.numer().is_zero() {
            return BigRational::from_integer(BigInt::zero());
        }
        // Dyadic floor with enough bits that ordering and sign survive; the
        // quotient stays small so the division cost is linear in the operand
        // size even for multi-megabit unreduced fractions.
        let nb = self.numer().bits() as i128;
        let db = self.denom().bits() as i128;
        let shift = (192 + db - nb).max(0) as usize;
        let q = (self.numer() << shift) / self.denom();
        BigRational::new(q, BigInt::one() << shift)
    }

    fn sum_range<E>(
        cfg: &PrecisionConfig,
        lo: u64,
        hi: u64,
        term: &mut dyn FnMut(u64) -> Result<Self, E>,
    ) -> Result<Self, E> {
        if lo > hi {
            return Ok(Scalar::zero(cfg));
        }
        // Divide-and-conquer over unreduced fractions; a single gcd pass at the
        // end when the result is small enough to be worth normalizing.
        fn dc<E>(
            lo: u64,
            hi: u64,
            term: &mut dyn FnMut(u64) -> Result<BigRational, E>,
        ) -> Result<(BigInt, BigInt), E> {
            if hi - lo < 32 {
                let mut num = BigInt::zero();
                let mut den = BigInt::one();
                for n in lo..=hi {
                    let t = term(n)?;
                    num = num * t.denom() + t.numer() * &den;
                    den *= t.denom();
                }
                Ok((num, den))
            } else {
                let mid = lo + (hi - lo) / 2;
                let (n1, d1) = dc(lo, mid, term)?;
                let (n2, d2) = dc(mid + 1, hi, term)?;
                Ok((&n1 * &d2 + &n2 * &d1, d1 * d2))
            }
        }
        let (num, den) = dc(lo, hi, term)?;
        if den.bits() <= 1 << 16 {
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::new_raw(num, den))
        }
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// High-precision binary floating point number (correctly rounded operations),
/// tagged with its working precision in bits.
#[derive(Clone, Debug)]
pub struct Fp {
    x: BigFloat,
    prec: usize,
}

impl Fp {
    fn wrap(&self, x: BigFloat) -> Fp {
        debug_assert!(!x.is_nan());
        Fp { x, prec: self.prec }
    }

    fn join(&self, o: &Fp) -> usize {
        self.prec.max(o.prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn inner(&self) -> &BigFloat {
        &self.x
    }

    fn bigint_to_bigfloat(v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::from_i8(0, PrecisionConfig::MIN_MANTISSA_BITS);
        }
        let (sign, mag) = (v.sign(), v.magnitude());
        let words = mag.to_u64_digits();
        let e = (words.len() * 64) as astro_float::Exponent;
        let s = if sign == IntSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        BigFloat::from_words(&words, s, e)
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        self.x.cmp(&other.x) == Some(0)
    }
}

impl PartialOrd for Fp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.cmp(&other.x).map(|s| s.cmp(&0))
    }
}

impl Scalar for Fp {
    const EXACT: bool = false;

    fn from_u64(v: u64, cfg: &PrecisionConfig) -> Self {
        Fp {
            x: BigFloat::from_u64(v, cfg.mantissa_bits()),
            prec: cfg.mantissa_bits(),
        }
    }

    fn from_bigint(v: &BigInt, cfg: &PrecisionConfig) -> Self {
        Fp {
            x: Self::bigint_to_bigfloat(v),
            prec: cfg.mantissa_bits(),
        }
    }

    fn from_ratio(v: &BigRational, cfg: &PrecisionConfig) -> Self {
        let p = cfg.mantissa_bits();
        let num = Self::bigint_to_bigfloat(v.numer());
        let den = Self::bigint_to_bigfloat(v.denom());
        Fp {
            x: num.div(&den, p, RM),
            prec: p,
        }
    }

    fn zero(cfg: &PrecisionConfig) -> Self {
        Self::from_u64(0, cfg)
    }

    fn one(cfg: &PrecisionConfig) -> Self {
        Self::from_u64(1, cfg)
    }

    fn add(&self, o: &Self) -> Self {
        let p = self.join(o);
        Fp {
            x: self.x.add(&o.x, p, RM),
            prec: p,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let p = self.join(o);
        Fp {
            x: self.x.sub(&o.x, p, RM),
            prec: p,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let p = self.join(o);
        Fp {
            x: self.x.mul(&o.x, p, RM),
            prec: p,
        }
    }

    fn div(&self, o: &Self) -> Result<Self, NumError> {
        if o.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let p = self.join(o);
        Ok(Fp {
            x: self.x.div(&o.x, p, RM),
            prec: p,
        })
    }

    fn neg(&self) -> Self {
        self.wrap(self.x.neg())
    }

    fn abs(&self) -> Self {
        self.wrap(self.x.abs())
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    fn is_positive(&self) -> bool {
        self.x.is_positive() && !self.x.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.x.is_negative() && !self.x.is_zero()
    }

    fn pow_bigint(&self, e: &BigInt) -> Result<Self, NumError> {
        if e.is_zero() {
            return Ok(self.wrap(BigFloat::from_u8(1, self.prec)));
        }
        if self.is_zero() {
            return if e.is_negative() {
                Err(NumError::DivisionByZero)
            } else {
                Ok(self.clone())
            };
        }
        let exp = e.magnitude().to_u64().ok_or(NumError::Overflow)?;
        let mag = self.magnitude_bits().unsigned_abs();
        if mag.saturating_mul(exp) > MAGNITUDE_CAP_BITS as u64 + 64 {
            return Err(NumError::Overflow);
        }
        let powed = self.x.powi(exp as usize, self.prec, RM);
        if e.is_negative() {
            Ok(self.wrap(BigFloat::from_u8(1, self.prec).div(&powed, self.prec, RM)))
        } else {
            Ok(self.wrap(powed))
        }
    }

    fn pow_ratio(&self, e: &BigRational) -> Result<Self, NumError> {
        if e.is_integer() {
            return self.pow_bigint(e.numer());
        }
        let cfg = PrecisionConfig::new(self.prec.max(PrecisionConfig::MIN_MANTISSA_BITS));
        let ef = Fp::from_ratio(e, &cfg);
        self.pow_scalar(&ef)
    }

    fn pow_scalar(&self, e: &Self) -> Result<Self, NumError> {
        // x^e = exp(e ln x); requires x > 0 (x = 0 allowed for positive e).
        if self.is_zero() {
            return if e.is_positive() {
                Ok(self.clone())
            } else {
                Err(NumError::DivisionByZero)
            };
        }
        if self.is_negative() {
            return Err(NumError::Domain("power of a negative base"));
        }
        let l = self.ln()?;
        l.mul(e).exp()
    }

    fn ln(&self) -> Result<Self, NumError> {
        if !self.is_positive() {
            return Err(NumError::Domain("ln of a non-positive value"));
        }
        let x = CONSTS.with(|cc| self.x.ln(self.prec, RM, &mut cc.borrow_mut()));
        Ok(self.wrap(x))
    }

    fn exp(&self) -> Result<Self, NumError> {
        if self.magnitude_bits() > 21 {
            // |x| > 2^21 means exp(x) blows through the magnitude cap.
            if self.is_positive() {
                return Err(NumError::Overflow);
            }
        }
        let x = CONSTS.with(|cc| self.x.exp(self.prec, RM, &mut cc.borrow_mut()));
        Ok(self.wrap(x))
    }

    fn sqrt(&self) -> Result<Self, NumError> {
        if self.is_negative() {
            return Err(NumError::Domain("sqrt of a negative value"));
        }
        Ok(self.wrap(self.x.sqrt(self.prec, RM)))
    }

    fn magnitude_bits(&self) -> i64 {
        match self.x.exponent() {
            Some(e) => e as i64,
            None => 0,
        }
    }

    fn cmp_tol(&self, o: &Self, tol: &BigRational) -> Ordering {
        let diff = self.sub(o);
        let cfg = PrecisionConfig::new(self.prec.max(PrecisionConfig::MIN_MANTISSA_BITS));
        let t = Fp::from_ratio(tol, &cfg);
        if diff.abs() < t {
            Ordering::Equal
        } else if diff.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn to_value(&self) -> Value {
        Value::Float(self.clone())
    }

    fn to_f64_lossy(&self) -> f64 {
        if self.x.is_zero() {
            return 0.0;
        }
        match self.x.as_raw_parts() {
            Some((words, _n, sign, e, _)) => {
                let msw = *words.last().unwrap_or(&0);
                let frac = msw as f64 / 2f64.powi(64);
                let v = frac * 2f64.powi(e);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            None => f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn bigint_to_float_is_exact() {
        let v = BigInt::from(123456789u64) << 100;
        let f = Fp::from_bigint(&v, &cfg());
        let back = Fp::from_bigint(&v, &cfg());
        assert_eq!(f, back);
        assert_eq!(f.magnitude_bits(), v.bits() as i64);
    }

    #[test]
    fn ratio_division_round_trips_through_float() {
        let r = BigRational::new(BigInt::from(3), BigInt::from(8));
        let f = Fp::from_ratio(&r, &cfg());
        assert!((f.to_f64_lossy() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn ln_of_one_is_zero() {
        let one = Fp::one(&cfg());
        assert!(one.ln().unwrap().is_zero());
    }

    #[test]
    fn exact_sum_range_matches_sequential() {
        let c = cfg();
        let mut f = |n: u64| -> Result<BigRational, ()> {
            Ok(BigRational::new(BigInt::one(), BigInt::from(n)))
        };
        let dc = <BigRational as Scalar>::sum_range(&c, 1, 100, &mut f).unwrap();
        let mut seq = <BigRational as Scalar>::zero(&c);
        for n in 1..=100u64 {
            seq += BigRational::new(BigInt::one(), BigInt::from(n));
        }
        assert_eq!(dc, seq);
    }

    #[test]
    fn tolerant_compare_treats_tiny_differences_as_equal() {
        let c = cfg();
        let a = Fp::from_u64(1, &c);
        let eps = BigRational::new(BigInt::one(), BigInt::one() << 200);
        let b = a.add(&Fp::from_ratio(&eps, &c));
        let tol = BigRational::new(BigInt::one(), BigInt::one() << 128);
        assert_eq!(a.cmp_tol(&b, &tol), Ordering::Equal);
        assert_eq!(
            a.cmp_tol(&b, &BigRational::new(BigInt::one(), BigInt::one() << 300)),
            Ordering::Less
        );
    }
}
