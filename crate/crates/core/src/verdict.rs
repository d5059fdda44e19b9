//! Contribution verdicts and the evidence that backs them.

use std::fmt;

use serde::Serialize;

use crate::lattice::PicClass;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Contributes,
    DoesNotContribute,
    #[serde(rename = "undecidable-with-given-data")]
    Undecidable,
}

impl Verdict {
    /// CLI exit code: 0 contributes, 1 does not, 2 undecidable.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Contributes => 0,
            Verdict::DoesNotContribute => 1,
            Verdict::Undecidable => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Contributes => "contributes",
            Verdict::DoesNotContribute => "does-not-contribute",
            Verdict::Undecidable => "undecidable-with-given-data",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SurfaceDegree,
    LatticeEffectivity,
    #[serde(rename = "criterion-Pn")]
    CriterionPn,
    #[serde(rename = "criterion-Pn-centers")]
    CriterionPnCenters,
    CriterionTwoInfinitelyNear,
    NecessaryConditionFailed,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::SurfaceDegree => "surface-degree",
            Method::LatticeEffectivity => "lattice-effectivity",
            Method::CriterionPn => "criterion-Pn",
            Method::CriterionPnCenters => "criterion-Pn-centers",
            Method::CriterionTwoInfinitelyNear => "criterion-two-infinitely-near",
            Method::NecessaryConditionFailed => "necessary-condition-failed",
        })
    }
}

/// One integer inequality `lhs >= rhs` (or `lhs <= rhs`), evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub description: String,
    pub lhs: i64,
    pub op: &'static str,
    pub rhs: i64,
    pub holds: bool,
}

impl Inequality {
    pub fn ge(description: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Inequality {
            description: description.into(),
            lhs,
            op: ">=",
            rhs,
            holds: lhs >= rhs,
        }
    }

    pub fn le(description: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Inequality {
            description: description.into(),
            lhs,
            op: "<=",
            rhs,
            holds: lhs <= rhs,
        }
    }

    pub fn eq(description: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Inequality {
            description: description.into(),
            lhs,
            op: "=",
            rhs,
            holds: lhs == rhs,
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.description,
            self.lhs,
            self.op,
            self.rhs,
            if self.holds { "holds" } else { "fails" }
        )
    }
}

/// Nonnegative combination of cone generators equal to a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeCertificate {
    pub generators: Vec<PicClass>,
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Evidence {
    /// Surface case: per-component degrees of `(K_π − ⌊λπ*C⌋ + E)|_{E_i}`
    /// and the components left after forced-vanishing pruning.
    SurfaceDegree {
        degrees: Vec<(String, i64)>,
        surviving: Vec<String>,
        inequality: Option<Inequality>,
    },
    /// `K_E − ⌊λπ*D⌋|_E` and, if effective, the certificate.
    Lattice {
        floor_restriction: PicClass,
        class: PicClass,
        certificate: Option<ConeCertificate>,
    },
    Criterion {
        inputs: Vec<(String, i64)>,
        inequalities: Vec<Inequality>,
    },
    /// `K_E + E°|_E` that failed to be effective and nonzero.
    NecessaryCondition {
        class: PicClass,
        effective: Option<bool>,
    },
    None {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContributionVerdict {
    pub divisors: Vec<String>,
    pub lambda: Rational,
    pub verdict: Verdict,
    pub method: Method,
    pub evidence: Evidence,
}

impl ContributionVerdict {
    pub fn contributes(&self) -> bool {
        self.verdict == Verdict::Contributes
    }
}

impl fmt::Display for ContributionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} at lambda = {}: {} (method: {})",
            self.divisors.join("+"),
            self.lambda,
            self.verdict,
            self.method
        )?;
        match &self.evidence {
            Evidence::SurfaceDegree {
                degrees,
                surviving,
                inequality,
            } => {
                let ds: Vec<String> = degrees.iter().map(|(id, d)| format!("{id}:{d}")).collect();
                writeln!(
                    f,
                    "  degrees of (K + E - floor(lambda pi*C))|_Ei: {}",
                    ds.join(", ")
                )?;
                if let Some(ineq) = inequality {
                    writeln!(f, "  {ineq}")?;
                }
                write!(
                    f,
                    "  surviving components: {}",
                    if surviving.is_empty() {
                        "none".into()
                    } else {
                        surviving.join(", ")
                    }
                )
            }
            Evidence::Lattice {
                floor_restriction,
                class,
                certificate,
            } => {
                writeln!(f, "  floor(lambda pi*D)|_E = {floor_restriction}")?;
                write!(f, "  K_E - floor(lambda pi*D)|_E = {class}")?;
                if let Some(c) = certificate {
                    let terms: Vec<String> = c
                        .generators
                        .iter()
                        .zip(&c.multipliers)
                        .filter(|(_, m)| !m.is_zero())
                        .map(|(g, m)| format!("{m}*({g})"))
                        .collect();
                    write!(
                        f,
                        "\n  certificate: {}",
                        if terms.is_empty() {
                            "empty combination".into()
                        } else {
                            terms.join(" + ")
                        }
                    )?;
                }
                Ok(())
            }
            Evidence::Criterion {
                inputs,
                inequalities,
            } => {
                let xs: Vec<String> = inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "  inputs: {}", xs.join(", "))?;
                for i in inequalities {
                    write!(f, "\n  {i}")?;
                }
                Ok(())
            }
            Evidence::NecessaryCondition { class, effective } => {
                let eff = match effective {
                    Some(true) => "effective",
                    Some(false) => "not effective",
                    None => "effectivity unknown",
                };
                write!(
                    f,
                    "  K_E + E°|_E = {class} ({eff}{})",
                    if class.is_zero() { ", zero" } else { "" }
                )
            }
            Evidence::None { reason } => write!(f, "  {reason}"),
        }
    }
}
