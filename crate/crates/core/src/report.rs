//! Verified inequality instances.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::{compare_exprs, Expr};
use crate::power::CompareConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
        }
    }

    pub fn is_ok(self) -> bool {
        self != Verdict::Violated
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification of a violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// The hypotheses of a proven statement hold and it still failed.
    ContradictsTheorem,
    /// Counterexample to the antiferromagnetic biclique conjecture.
    ConjectureCounterexample,
    /// Violation outside the hypotheses of any proven statement.
    Finding,
}

/// One checked instance of `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IneqReport {
    pub ineq: String,
    pub instance: String,
    #[serde(rename = "lhs_factors")]
    pub lhs: Expr,
    #[serde(rename = "rhs_factors")]
    pub rhs: Expr,
    pub verdict: Verdict,
    pub exact: bool,
    /// `log10(rhs / lhs)`, absent when a side is zero.
    pub slack_log10: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Flag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IneqReport {
    /// Compares the sides and fills in verdict, exactness and slack.
    pub fn decide(
        ineq: impl Into<String>,
        instance: impl Into<String>,
        lhs: Expr,
        rhs: Expr,
        cfg: &CompareConfig,
    ) -> Result<Self> {
        let cmp = compare_exprs(&lhs, &rhs, cfg)?;
        let verdict = match cmp.ordering {
            Ordering::Less => Verdict::Holds,
            Ordering::Equal => Verdict::Equality,
            Ordering::Greater => Verdict::Violated,
        };
        let raw = (rhs.ln() - lhs.ln()) / std::f64::consts::LN_10;
        let slack_log10 = raw.is_finite().then(|| match verdict {
            Verdict::Equality => 0.0,
            Verdict::Holds => raw.max(0.0),
            Verdict::Violated => raw.min(0.0),
        });
        Ok(IneqReport {
            ineq: ineq.into(),
            instance: instance.into(),
            lhs,
            rhs,
            verdict,
            exact: cmp.exact,
            slack_log10,
            flag: None,
            note: None,
        })
    }

    /// Sets `flag` on violations only.
    pub fn flag_if_violated(mut self, flag: Flag) -> Self {
        if self.verdict == Verdict::Violated {
            self.flag = Some(flag);
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_ok(&self) -> bool {
        self.verdict.is_ok()
    }
}

impl fmt::Display for IneqReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {} vs {} -> {}",
            self.ineq, self.instance, self.lhs, self.rhs, self.verdict
        )?;
        if !self.exact {
            f.write_str(" (interval)")?;
        }
        if let Some(s) = self.slack_log10 {
            write!(f, ", slack {s:.3e}")?;
        }
        if let Some(flag) = self.flag {
            write!(
                f,
                ", {}",
                serde_json::to_value(flag)
                    .map_err(|_| fmt::Error)?
                    .as_str()
                    .unwrap_or("")
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn verdicts() {
        let cfg = CompareConfig::default();
        let r = IneqReport::decide(
            "t",
            "a",
            Expr::int(66),
            Expr::power(int(18), rat(3, 2)),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.exact);
        assert!(r.slack_log10.unwrap() > 0.0);
        let r = IneqReport::decide("t", "b", Expr::int(6), Expr::int(6), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Equality);
        assert_eq!(r.slack_log10, Some(0.0));
        let r = IneqReport::decide("t", "c", Expr::int(7), Expr::int(6), &cfg)
            .unwrap()
            .flag_if_violated(Flag::Finding);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.flag, Some(Flag::Finding));
        assert!(r.slack_log10.unwrap() < 0.0);
        let r = IneqReport::decide("t", "d", Expr::zero(), Expr::int(6), &cfg).unwrap();
        assert_eq!(r.slack_log10, None);
    }

    #[test]
    fn json_round_trip() {
        let cfg = CompareConfig::default();
        let r = IneqReport::decide(
            "t",
            "x",
            Expr::int(113),
            Expr::prod([Expr::power(int(7), int(2)), Expr::power(int(63), rat(1, 5))]),
            &cfg,
        )
        .unwrap()
        .flag_if_violated(Flag::Finding);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("lhs_factors"));
        let back: IneqReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
