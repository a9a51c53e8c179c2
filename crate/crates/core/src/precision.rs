//! Working precision and the absolute thresholds derived from it.

use rug::Float;
use thiserror::Error;

/// Smallest accepted significand width.
pub const MIN_BITS: u32 = 64;

/// Default significand width (about 154 decimal digits).
pub const DEFAULT_BITS: u32 = 512;

/// Environment variable that overrides [`DEFAULT_BITS`] in the CLI.
pub const PRECISION_ENV: &str = "STEFBENCH_PRECISION_BITS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrecisionError {
    #[error("invalid precision: {bits} bits (minimum is {MIN_BITS})")]
    InvalidPrecision { bits: u32 },
}

/// Binary working precision together with the breakdown and convergence
/// floors derived from it.
///
/// Every value in the crate is carried at `bits` binary digits. The floors
/// are scale-free absolute thresholds:
///
/// * `breakdown_floor = 2^(-0.9 bits)`: a difference denominator smaller than
///   this makes a step numerically meaningless.
/// * `convergence_floor = 2^(-0.95 bits)`: a residual at or below this is
///   treated as "at the root".
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionContext {
    bits: u32,
    breakdown_floor: Float,
    convergence_floor: Float,
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self, PrecisionError> {
        if bits < MIN_BITS {
            return Err(PrecisionError::InvalidPrecision { bits });
        }
        Ok(Self {
            bits,
            breakdown_floor: pow2_fraction(bits, -0.9),
            convergence_floor: pow2_fraction(bits, -0.95),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn breakdown_floor(&self) -> &Float {
        &self.breakdown_floor
    }

    pub fn convergence_floor(&self) -> &Float {
        &self.convergence_floor
    }

    /// Same context at `factor` times the precision.
    pub fn scaled(&self, factor: u32) -> Self {
        Self::new(self.bits * factor).expect("scaling a valid precision stays valid")
    }

    /// `2^(fraction * bits)` at working precision, for thresholds such as the
    /// COC usability guard band.
    pub fn pow2_of_bits(&self, fraction: f64) -> Float {
        pow2_fraction(self.bits, fraction)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits)
    }

    pub fn int(&self, value: i64) -> Float {
        Float::with_val(self.bits, value)
    }

    /// Parses a decimal literal directly at working precision, without
    /// staging through a machine float.
    pub fn parse_decimal(&self, text: &str) -> Option<Float> {
        Float::parse(text.trim())
            .ok()
            .map(|p| Float::with_val(self.bits, p))
    }

    /// Lifts an `f64` (exactly; every finite `f64` fits in 64 bits).
    pub fn from_f64(&self, value: f64) -> Float {
        Float::with_val(self.bits, value)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(DEFAULT_BITS).expect("default precision is valid")
    }
}

/// Shorthand for [`PrecisionContext::new`].
pub fn make_context(bits: u32) -> Result<PrecisionContext, PrecisionError> {
    PrecisionContext::new(bits)
}

// 2^(fraction * bits) = 2^q * 2^r with q integral, r in [0, 1).
fn pow2_fraction(bits: u32, fraction: f64) -> Float {
    let exponent = Float::with_val(bits, bits) * fraction;
    let whole = exponent.clone().floor();
    let rest = exponent - &whole;
    let q = whole.to_i32_saturating().expect("finite exponent");
    let scaled = Float::with_val(bits, rest.exp2());
    scaled << q
}
