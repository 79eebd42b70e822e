//! The tracking constants and the exact-arithmetic checks they must pass.

use num::rational::Rational64;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Exact rational scalar used wherever equality matters.
pub type Rat = Rational64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("cannot parse {0:?} as a rational (use p/q, a decimal, or an integer)")]
    Unparseable(String),
    #[error("parameter {0} must be positive, got {1}")]
    NotPositive(&'static str, String),
}

/// Parses `"p/q"`, a decimal such as `"0.25"`, or an integer, exactly.
pub fn parse_rational(s: &str) -> Result<Rat, ParamError> {
    let s = s.trim();
    let bad = || ParamError::Unparseable(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') { -1i64 } else { 1 };
        let w: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: i64 = frac.parse().map_err(|_| bad())?;
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        return Ok(Rat::from_integer(w) + Rat::new(sign * digits, scale));
    }
    let n: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The five tracking constants. Stored as exact rationals; envelope
/// formulas read them as `f64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    alpha: Rat,
    beta: Rat,
    kappa: Rat,
    mu: Rat,
    gamma: Rat,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self::reference_values()
    }
}

impl ParamSet {
    /// The reference constants (α, β, κ, μ, γ) = (1, 1/2, 1/4, 1/4, 1/2),
    /// which satisfy the four key conditions with slacks (0, 0, 0, 1/8).
    pub fn reference_values() -> Self {
        ParamSet {
            alpha: Rat::from_integer(1),
            beta: Rat::new(1, 2),
            kappa: Rat::new(1, 4),
            mu: Rat::new(1, 4),
            gamma: Rat::new(1, 2),
        }
    }

    pub fn new(alpha: Rat, beta: Rat, kappa: Rat, mu: Rat, gamma: Rat) -> Result<Self, ParamError> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("kappa", kappa), ("mu", mu), ("gamma", gamma)] {
            if !v.is_positive() {
                return Err(ParamError::NotPositive(name, fmt_rat(&v)));
            }
        }
        Ok(ParamSet { alpha, beta, kappa, mu, gamma })
    }

    pub fn alpha(&self) -> Rat {
        self.alpha
    }
    pub fn beta(&self) -> Rat {
        self.beta
    }
    pub fn kappa(&self) -> Rat {
        self.kappa
    }
    pub fn mu(&self) -> Rat {
        self.mu
    }
    pub fn gamma(&self) -> Rat {
        self.gamma
    }

    pub fn alpha_f64(&self) -> f64 {
        rat_f64(self.alpha)
    }
    pub fn beta_f64(&self) -> f64 {
        rat_f64(self.beta)
    }
    pub fn kappa_f64(&self) -> f64 {
        rat_f64(self.kappa)
    }
    pub fn mu_f64(&self) -> f64 {
        rat_f64(self.mu)
    }
    pub fn gamma_f64(&self) -> f64 {
        rat_f64(self.gamma)
    }

    /// Evaluates the four key inequalities the constants must satisfy,
    /// in exact rational arithmetic, reporting the slack of each.
    pub fn check_constants(&self) -> ConstantsReport {
        let one = Rat::from_integer(1);
        let two = Rat::from_integer(2);
        let three = Rat::from_integer(3);
        let four = Rat::from_integer(4);
        let conditions = [
            Condition::eval("(1-gamma)*beta >= kappa", (one - self.gamma) * self.beta, self.kappa),
            Condition::eval(
                "(2-gamma)*alpha >= 2*beta + 2*kappa",
                (two - self.gamma) * self.alpha,
                two * self.beta + two * self.kappa,
            ),
            Condition::eval(
                "(4-2*gamma)*mu >= beta + kappa",
                (four - two * self.gamma) * self.mu,
                self.beta + self.kappa,
            ),
            Condition::eval("(3-gamma)*kappa >= 2*mu", (three - self.gamma) * self.kappa, two * self.mu),
        ];
        ConstantsReport { conditions }
    }
}

fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// One inequality with its exact slack `lhs - rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: &'static str,
    pub lhs: Rat,
    pub rhs: Rat,
    pub slack: Rat,
    pub holds: bool,
}

impl Condition {
    fn eval(name: &'static str, lhs: Rat, rhs: Rat) -> Self {
        let slack = lhs - rhs;
        Condition { name, lhs, rhs, slack, holds: slack >= Rat::zero() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsReport {
    pub conditions: [Condition; 4],
}

impl ConstantsReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn slacks(&self) -> [Rat; 4] {
        [
            self.conditions[0].slack,
            self.conditions[1].slack,
            self.conditions[2].slack,
            self.conditions[3].slack,
        ]
    }
}

impl fmt::Display for ConstantsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(
                f,
                "{:<40} lhs={:<8} rhs={:<8} slack={:<8} {}",
                c.name,
                fmt_rat(&c.lhs),
                fmt_rat(&c.rhs),
                fmt_rat(&c.slack),
                if c.holds { "ok" } else { "VIOLATED" }
            )?;
        }
        Ok(())
    }
}

// Serialized as rational strings so config echoes stay exact.
#[derive(Serialize, Deserialize)]
struct ParamSetRepr {
    alpha: String,
    beta: String,
    kappa: String,
    mu: String,
    gamma: String,
}

impl Serialize for ParamSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ParamSetRepr {
            alpha: fmt_rat(&self.alpha),
            beta: fmt_rat(&self.beta),
            kappa: fmt_rat(&self.kappa),
            mu: fmt_rat(&self.mu),
            gamma: fmt_rat(&self.gamma),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ParamSetRepr::deserialize(d)?;
        let parse = |s: &str| parse_rational(s).map_err(D::Error::custom);
        ParamSet::new(
            parse(&repr.alpha)?,
            parse(&repr.beta)?,
            parse(&repr.kappa)?,
            parse(&repr.mu)?,
            parse(&repr.gamma)?,
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values_hold_with_expected_slacks() {
        let report = ParamSet::reference_values().check_constants();
        assert!(report.all_hold());
        assert_eq!(
            report.slacks(),
            [Rat::zero(), Rat::zero(), Rat::zero(), Rat::new(1, 8)]
        );
    }

    #[test]
    fn inflated_kappa_is_flagged() {
        let p = ParamSet::new(
            Rat::from_integer(1),
            Rat::new(1, 2),
            parse_rational("0.3").unwrap(),
            Rat::new(1, 4),
            Rat::new(1, 2),
        )
        .unwrap();
        let report = p.check_constants();
        assert!(!report.conditions[0].holds); // (1-γ)β = 1/4 < 3/10
        assert!(!report.all_hold());
    }

    #[test]
    fn gamma_near_one_breaks_first_condition() {
        let p = ParamSet::new(
            Rat::from_integer(1),
            Rat::new(1, 2),
            Rat::new(1, 4),
            Rat::new(1, 4),
            Rat::new(999, 1000),
        )
        .unwrap();
        assert!(!p.check_constants().conditions[0].holds);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), Rat::new(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), Rat::new(1, 4));
        assert_eq!(parse_rational("3").unwrap(), Rat::from_integer(3));
        assert_eq!(parse_rational("1.5").unwrap(), Rat::new(3, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), Rat::new(-1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(ParamSet::new(Rat::zero(), Rat::new(1, 2), Rat::new(1, 4), Rat::new(1, 4), Rat::new(1, 2)).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = ParamSet::reference_values();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"1/2\""));
        let back: ParamSet = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
    }
}
