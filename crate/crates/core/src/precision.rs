use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Numeric configuration for evaluation: mantissa width for floating mode and
/// the tolerance used for floating-mode comparisons.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionConfig {
    mantissa_bits: usize,
    comparison_tolerance: BigRational,
}

impl PrecisionConfig {
    pub const MIN_MANTISSA_BITS: usize = 64;

    /// Default comparison tolerance is 2^-128.
    pub fn new(mantissa_bits: usize) -> Self {
        assert!(
            mantissa_bits >= Self::MIN_MANTISSA_BITS,
            "mantissa_bits must be at least {}",
            Self::MIN_MANTISSA_BITS
        );
        PrecisionConfig {
            mantissa_bits,
            comparison_tolerance: BigRational::new(BigInt::one(), BigInt::one() << 128),
        }
    }

    pub fn with_tolerance(mut self, tolerance: BigRational) -> Self {
        assert!(!tolerance.lt(&BigRational::new(0.into(), 1.into())));
        self.comparison_tolerance = tolerance;
        self
    }

    pub fn mantissa_bits(&self) -> usize {
        self.mantissa_bits
    }

    pub fn comparison_tolerance(&self) -> &BigRational {
        &self.comparison_tolerance
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::new(256)
    }
}
