//! The scalar functions the inequalities are instantiated with.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// `Power { exponent: r }` is `t ↦ t^r`, `Log { base: b }` is `t ↦ log_b t`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum ScalarFunction {
    Power { exponent: f64 },
    Log { base: f64 },
}

impl ScalarFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(Error::InvalidParameter(format!("exponent {exponent} is not finite")));
        }
        Ok(ScalarFunction::Power { exponent })
    }

    pub fn log(base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 1.0) {
            return Err(Error::InvalidParameter(format!("log base must be finite and > 1, got {base}")));
        }
        Ok(ScalarFunction::Log { base })
    }

    /// Common logarithm, the default base.
    pub fn log10() -> Self {
        ScalarFunction::Log { base: 10.0 }
    }

    /// `t^r` is defined for `t > 0`, at `t = 0` when `r > 0`, and on the whole
    /// real line for integer `r`. `log_b` needs `t > 0`.
    pub fn is_defined_at(&self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        match *self {
            ScalarFunction::Power { exponent } => {
                if t > 0.0 {
                    true
                } else if t == 0.0 {
                    exponent >= 0.0
                } else {
                    libm::trunc(exponent) == exponent
                }
            }
            ScalarFunction::Log { .. } => t > 0.0,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.is_defined_at(t) {
            return Err(Error::Domain(format!("{self} is undefined at {t}")));
        }
        Ok(self.eval_unchecked(t))
    }

    /// Evaluation without the domain check; callers guarantee `t` is valid.
    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        match *self {
            ScalarFunction::Power { exponent } => libm::pow(t, exponent),
            ScalarFunction::Log { base } => {
                if base == 10.0 {
                    libm::log10(t)
                } else if base == 2.0 {
                    libm::log2(t)
                } else {
                    libm::log(t) / libm::log(base)
                }
            }
        }
    }

    /// True when the function is defined on every point of `[lo, hi]`.
    pub fn is_defined_on(&self, lo: f64, hi: f64) -> bool {
        // Both families have a domain that is an interval containing (0, ∞)
        // or the full line, so checking the endpoints and 0 suffices.
        self.is_defined_at(lo) && self.is_defined_at(hi) && (lo > 0.0 || hi < 0.0 || self.is_defined_at(0.0))
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFunction::Power { exponent } => write!(f, "pow:{exponent}"),
            ScalarFunction::Log { base } => write!(f, "log:{base}"),
        }
    }
}

/// Parses the `pow:<r>` / `log:<base>` mini-grammar.
impl FromStr for ScalarFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("function spec `{s}` must look like pow:<r> or log:<base>")))?;
        let value: f64 = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse `{arg}` as a number")))?;
        match kind.trim() {
            "pow" => ScalarFunction::power(value),
            "log" => ScalarFunction::log(value),
            other => Err(Error::InvalidParameter(format!("unknown function kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_and_displays() {
        assert_eq!("pow:2".parse::<ScalarFunction>().unwrap(), ScalarFunction::Power { exponent: 2.0 });
        assert_eq!("log:10".parse::<ScalarFunction>().unwrap(), ScalarFunction::log10());
        assert_eq!(ScalarFunction::Power { exponent: 0.5 }.to_string(), "pow:0.5");
        assert!("log:1".parse::<ScalarFunction>().is_err());
        assert!("exp:2".parse::<ScalarFunction>().is_err());
        assert!("pow".parse::<ScalarFunction>().is_err());
        assert!("pow:x".parse::<ScalarFunction>().is_err());
    }

    #[test]
    fn domains() {
        let sqrt = ScalarFunction::Power { exponent: 0.5 };
        assert!(sqrt.eval(-1.0).is_err());
        assert_eq!(sqrt.eval(0.0).unwrap(), 0.0);
        let inv = ScalarFunction::Power { exponent: -1.0 };
        assert!(inv.eval(0.0).is_err());
        assert_eq!(inv.eval(-2.0).unwrap(), -0.5);
        let log = ScalarFunction::log10();
        assert!(log.eval(0.0).is_err());
        assert_eq!(log.eval(1000.0).unwrap(), 3.0);
        assert!(ScalarFunction::log(2.0).unwrap().eval(8.0).unwrap() == 3.0);
        assert!(!log.is_defined_on(-1.0, 2.0));
        assert!(sqrt.is_defined_on(0.0, 2.0));
    }

    #[test]
    fn common_log_of_remark_inner_product() {
        let v = ScalarFunction::log10().eval(1.05).unwrap();
        assert!((v - 0.021189).abs() < 5e-7);
    }
}
