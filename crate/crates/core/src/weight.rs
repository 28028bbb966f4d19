//! Conceptual weights: exact non-negative decimals.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

/// Most fractional digits a weight may carry.
pub const MAX_SCALE: u8 = 18;

/// A non-negative decimal number `mantissa / 10^scale`, kept in canonical
/// form (no trailing fractional zeros) so that derived equality is numeric
/// equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    mantissa: u64,
    scale: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("weight is empty")]
    Empty,
    #[error("weight {0:?} is not a non-negative decimal")]
    Malformed(alloc::string::String),
    #[error("weight {0:?} is out of range")]
    OutOfRange(alloc::string::String),
}

impl Weight {
    pub const ZERO: Weight = Weight { mantissa: 0, scale: 0 };
    pub const ONE: Weight = Weight { mantissa: 1, scale: 0 };

    pub fn from_integer(value: u64) -> Self {
        Weight { mantissa: value, scale: 0 }
    }

    /// Builds `mantissa / 10^scale`. Returns `None` if `scale` exceeds
    /// [`MAX_SCALE`].
    pub fn from_parts(mantissa: u64, scale: u8) -> Option<Self> {
        if scale > MAX_SCALE {
            return None;
        }
        let mut w = Weight { mantissa, scale };
        w.normalize();
        Some(w)
    }

    fn normalize(&mut self) {
        if self.mantissa == 0 {
            self.scale = 0;
        }
        while self.scale > 0 && self.mantissa.is_multiple_of(10) {
            self.mantissa /= 10;
            self.scale -= 1;
        }
    }

    pub fn mantissa(&self) -> u64 {
        self.mantissa
    }

    pub fn scale(&self) -> u8 {
        self.scale
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::ONE
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        // Bring both to the larger scale. u64::MAX * 10^18 fits in u128.
        let scale = self.scale.max(other.scale);
        let lhs = u128::from(self.mantissa) * 10u128.pow(u32::from(scale - self.scale));
        let rhs = u128::from(other.mantissa) * 10u128.pow(u32::from(scale - other.scale));
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(WeightError::Empty);
        }
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let digits_ok = |part: &str| part.bytes().all(|b| b.is_ascii_digit());
        if int.is_empty() || !digits_ok(int) || !digits_ok(frac) || (s.contains('.') && frac.is_empty()) {
            return Err(WeightError::Malformed(s.into()));
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > usize::from(MAX_SCALE) {
            return Err(WeightError::OutOfRange(s.into()));
        }
        let mut mantissa: u64 = 0;
        for b in int.bytes().chain(frac.bytes()) {
            mantissa = mantissa
                .checked_mul(10)
                .and_then(|m| m.checked_add(u64::from(b - b'0')))
                .ok_or_else(|| WeightError::OutOfRange(s.into()))?;
        }
        // frac.len() <= MAX_SCALE was checked above.
        Ok(Weight::from_parts(mantissa, frac.len() as u8).expect("scale in range"))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mantissa);
        }
        let divisor = 10u64.pow(u32::from(self.scale));
        write!(
            f,
            "{}.{:0width$}",
            self.mantissa / divisor,
            self.mantissa % divisor,
            width = usize::from(self.scale)
        )
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
