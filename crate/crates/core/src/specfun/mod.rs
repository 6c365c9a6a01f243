//! Special-function kernel: gamma and beta families, Pochhammer ratios,
//! Appell F1, Poisson tails and adaptive quadrature.
//!
//! Every function here is pure and safe to call from any thread.

mod appell;
mod beta;
mod gamma;
mod poisson;
mod quadrature;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use appell::{appell_f1, appell_f1_with};
pub use beta::{beta_density, reg_inc_beta};
pub use gamma::{beta, ln_beta, ln_gamma, ln_gamma_ratio, pochhammer_rising};
pub use poisson::{ln_poisson_pmf, ln_poisson_upper_tail};
pub use quadrature::{integrate, integrate_with_error, Estimate, QuadratureSpec};

pub(crate) use gamma::{
    ln_beta_unchecked, ln_gamma_unchecked, ln_pochhammer_quotient, unit_ball_volume_unchecked,
};

/// A non-negative quantity that may be positively infinite.
///
/// Divergent moments are results, not failures, so they are carried as an
/// explicit variant instead of an overflowed float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MomentValue {
    Finite(f64),
    #[serde(with = "inf_token")]
    Infinite,
}

impl MomentValue {
    pub fn is_infinite(self) -> bool {
        matches!(self, MomentValue::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            MomentValue::Finite(v) => Some(v),
            MomentValue::Infinite => None,
        }
    }

    /// The value as a float, with `f64::INFINITY` for the infinite branch.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn scale(self, factor: f64) -> MomentValue {
        match self {
            MomentValue::Finite(v) => MomentValue::Finite(v * factor),
            MomentValue::Infinite => MomentValue::Infinite,
        }
    }
}

impl fmt::Display for MomentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentValue::Finite(v) => write!(f, "{v}"),
            MomentValue::Infinite => f.write_str("inf"),
        }
    }
}

mod inf_token {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let token = String::deserialize(d)?;
        if token == "inf" {
            Ok(())
        } else {
            Err(de::Error::custom(format!("expected \"inf\", got {token:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_value_serde() {
        let v = vec![MomentValue::Finite(0.5), MomentValue::Infinite];
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"[0.5,"inf"]"#);
        let back: Vec<MomentValue> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn moment_value_display() {
        assert_eq!(MomentValue::Infinite.to_string(), "inf");
        assert_eq!(MomentValue::Finite(0.25).to_string(), "0.25");
        assert_eq!(MomentValue::Infinite.value(), f64::INFINITY);
    }
}
