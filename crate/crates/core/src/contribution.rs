//! Contribution verdicts in arbitrary dimension: the effectivity test on `Pic E`,
//! the necessary condition, the closed-form criteria, and contraction sufficiency.

use std::fmt;

use serde::Serialize;

use crate::candidates;
use crate::error::{Error, Result};
use crate::lattice::{self, Configuration, Effectivity, ExcDivLattice, PicClass};
use crate::model::ResolutionData;
use crate::rational::Rational;
use crate::surface;
use crate::verdict::{ConeCertificate, ContributionVerdict, Evidence, Inequality, Method, Verdict};

fn lattice_for<'a>(data: &'a ResolutionData, e: &str) -> Result<&'a ExcDivLattice> {
    let div = data.divisor(e)?;
    if !div.is_exceptional() {
        return Err(Error::Precondition(format!("{e} is not exceptional")));
    }
    data.lattices.get(e).ok_or_else(|| {
        Error::Configuration(format!(
            "no lattice declared for divisor {e}; add lattices.{e} to the fixture"
        ))
    })
}

/// `K_E − ⌊λπ*D⌋|_E` effective ⇔ `E` contributes `λ`.
pub fn contributes_by_effectivity(
    data: &ResolutionData,
    e: &str,
    lambda: &Rational,
) -> Result<ContributionVerdict> {
    let lat = lattice_for(data, e)?;
    let floor = lattice::floor_pullback_restriction(data, e, lambda)?;
    let direct = lattice::floor_pullback_restriction_direct(data, e, lambda)?;
    if floor != direct {
        return Err(Error::Inconsistent(format!(
            "floor(lambda pi*D)|_{e} differs between fractional ({floor}) and integral ({direct}) routes"
        )));
    }
    let class = lattice::canonical_class(lat).sub(&floor);
    let (verdict, certificate) = match lattice::is_effective(lat, &class) {
        Effectivity::Yes {
            generators,
            multipliers,
        } => (
            Verdict::Contributes,
            Some(ConeCertificate {
                generators,
                multipliers,
            }),
        ),
        Effectivity::No => (Verdict::DoesNotContribute, None),
        Effectivity::Unknown => (Verdict::Undecidable, None),
    };
    Ok(ContributionVerdict {
        divisors: vec![e.to_string()],
        lambda: lambda.clone(),
        verdict,
        method: Method::LatticeEffectivity,
        evidence: Evidence::Lattice {
            floor_restriction: floor,
            class,
            certificate,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Necessity {
    Passes,
    Fails,
    /// No effective-cone generators are known for this configuration.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryOutcome {
    pub outcome: Necessity,
    /// `K_E + E°|_E`.
    pub class: PicClass,
    pub effective: Option<bool>,
}

/// `K_E + E°|_E` effective and nonzero; failure rules out every candidate.
pub fn necessary_condition(data: &ResolutionData, e: &str) -> Result<NecessaryOutcome> {
    let lat = lattice_for(data, e)?;
    if !lat.flags.effectivity_as_q_divisor {
        return Err(Error::Precondition(format!(
            "the necessary condition assumes K_Y + Delta effective as a Q-divisor; set effectivity_as_Q_divisor on lattices.{e}"
        )));
    }
    let mut class = lattice::canonical_class(lat);
    for (id, cls) in &lat.restrictions {
        if id != e {
            class = class.add(cls);
        }
    }
    let eff = lattice::is_effective(lat, &class);
    let (outcome, effective) = match eff {
        _ if class.is_zero() => (Necessity::Fails, Some(true)),
        Effectivity::Yes { .. } => (Necessity::Passes, Some(true)),
        Effectivity::No => (Necessity::Fails, Some(false)),
        Effectivity::Unknown => (Necessity::Unknown, None),
    };
    Ok(NecessaryOutcome {
        outcome,
        class,
        effective,
    })
}

/// Three-way outcome of a closed-form criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Zone {
    /// `E` contributes, in particular `1 − 1/a`.
    #[serde(rename = "contributes-1-minus-1-over-a")]
    Contributes,
    /// `E` is contracted in the log canonical model and contributes nothing.
    #[serde(rename = "contracted")]
    Contracted,
    #[serde(rename = "open-zone")]
    OpenZone,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Zone::Contributes => "contributes-1-minus-1-over-a",
            Zone::Contracted => "contracted",
            Zone::OpenZone => "open-zone",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub zone: Zone,
    pub inequalities: Vec<Inequality>,
}

/// `E ≅ ℙ^{n−1}`: contributes iff `d ≥ n + 1`.
pub fn criterion_pn(n: i64, d: i64) -> CriterionResult {
    let ineq = Inequality::ge("d >= n + 1", d, n + 1);
    let zone = if ineq.holds {
        Zone::Contributes
    } else {
        Zone::Contracted
    };
    CriterionResult {
        zone,
        inequalities: vec![ineq],
    }
}

/// `ℙ^{n−1}` blown up along disjoint centers in one hyperplane, given as `(k_l, μ_l)`.
pub fn criterion_pn_centers(n: i64, d: i64, centers: &[(i64, i64)]) -> CriterionResult {
    let mut inequalities = vec![Inequality::ge("d >= n + 1", d, n + 1)];
    for (l, &(k, mu)) in centers.iter().enumerate() {
        let l = l + 1;
        inequalities.push(Inequality::ge(
            format!("d - mu_{l} >= k_{l} + 2"),
            d - mu,
            k + 2,
        ));
    }
    let zone = if inequalities.iter().all(|i| i.holds) {
        Zone::Contributes
    } else {
        Zone::Contracted
    };
    CriterionResult { zone, inequalities }
}

/// `ℙ²` blown up at a point and then at a point of its exceptional curve.
/// `a` is not needed for the zone; the contributed number is `1 − 1/a`.
pub fn classify_two_infinitely_near(d: i64, mu1: i64, mu2: i64, _a: i64) -> CriterionResult {
    let inequalities = vec![
        Inequality::ge("d >= 4", d, 4),
        Inequality::ge("d - mu_1 >= 2", d - mu1, 2),
        Inequality::ge("2d - mu_1 - mu_2 >= 5", 2 * d - mu1 - mu2, 5),
    ];
    let contributes = inequalities.iter().all(|i| i.holds);
    let contracted = d <= 3 || d - mu1 <= 1 || 2 * d - mu1 - mu2 <= 3;
    let zone = match (contributes, contracted) {
        (true, false) => Zone::Contributes,
        (false, true) => Zone::Contracted,
        (false, false) => Zone::OpenZone,
        (true, true) => unreachable!("zones are disjoint"),
    };
    CriterionResult { zone, inequalities }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub divisor: String,
    pub method: Method,
    pub a: i64,
    pub inputs: Vec<(String, i64)>,
    pub result: CriterionResult,
}

impl CriterionReport {
    pub fn one_minus_one_over_a(&self) -> Rational {
        Rational::one() - Rational::new(1, self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Applicability {
    Applies(CriterionReport),
    NotApplicable { reason: String },
}

/// The closed-form criterion matching `E`'s data, if any.
pub fn applicable_criterion(data: &ResolutionData, e: &str) -> Result<Applicability> {
    let div = data.divisor(e)?;
    if !div.is_exceptional() {
        return Err(Error::Precondition(format!("{e} is not exceptional")));
    }
    let a = div.mult;
    let not = |reason: &str| {
        Ok(Applicability::NotApplicable {
            reason: reason.to_string(),
        })
    };

    let Some(lat) = data.lattices.get(e) else {
        if data.ambient_dim != 2 {
            return not("no lattice declared and the ambient space is not a surface");
        }
        if !data.flags.minimal_resolution {
            return not("surface criterion d >= 3 needs flags.minimal_resolution");
        }
        let d: i64 = data.neighbors(e).map(|(_, w)| w).sum();
        return Ok(Applicability::Applies(CriterionReport {
            divisor: e.to_string(),
            method: Method::CriterionPn,
            a,
            inputs: vec![("n".into(), 2), ("d".into(), d)],
            result: criterion_pn(2, d),
        }));
    };

    let (d, mu) = lat.degree_data();
    let n = lat.n;
    let report = |method, inputs, result| {
        Ok(Applicability::Applies(CriterionReport {
            divisor: e.to_string(),
            method,
            a,
            inputs,
            result,
        }))
    };
    let no_proximity = lat.centers.iter().all(|c| c.proximities().next().is_none());
    match lat.configuration() {
        Configuration::Projective => report(
            Method::CriterionPn,
            vec![("n".into(), n), ("d".into(), d)],
            criterion_pn(n, d),
        ),
        Configuration::TwoInfinitelyNear => report(
            Method::CriterionTwoInfinitelyNear,
            vec![
                ("d".into(), d),
                ("mu_1".into(), mu[0]),
                ("mu_2".into(), mu[1]),
            ],
            classify_two_infinitely_near(d, mu[0], mu[1], a),
        ),
        _ if no_proximity
            && lat.flags.centers_in_hyperplane
            && lat.flags.created_by_point_blowup =>
        {
            let centers: Vec<(i64, i64)> = lat
                .centers
                .iter()
                .zip(&mu)
                .map(|(c, &m)| (c.dim, m))
                .collect();
            let mut inputs = vec![("n".into(), n), ("d".into(), d)];
            for (l, (k, m)) in centers.iter().enumerate() {
                inputs.push((format!("k_{}", l + 1), *k));
                inputs.push((format!("mu_{}", l + 1), *m));
            }
            report(
                Method::CriterionPnCenters,
                inputs,
                criterion_pn_centers(n, d, &centers),
            )
        }
        _ if no_proximity => {
            not("disjoint centers need centers_in_hyperplane and created_by_point_blowup asserted")
        }
        _ => not("no closed-form criterion covers this center configuration"),
    }
}

/// Verdict at `λ` implied by the applicable criterion alone.
pub fn contributes_by_criterion(
    data: &ResolutionData,
    e: &str,
    lambda: &Rational,
) -> Result<ContributionVerdict> {
    check_candidate(data, &[e], lambda)?;
    let divisors = vec![e.to_string()];
    let rep = match applicable_criterion(data, e)? {
        Applicability::Applies(r) => r,
        Applicability::NotApplicable { reason } => {
            return Ok(ContributionVerdict {
                divisors,
                lambda: lambda.clone(),
                verdict: Verdict::Undecidable,
                method: Method::CriterionPn,
                evidence: Evidence::None { reason },
            })
        }
    };
    let verdict = match rep.result.zone {
        Zone::Contracted => Verdict::DoesNotContribute,
        Zone::Contributes if *lambda == rep.one_minus_one_over_a() => Verdict::Contributes,
        Zone::Contributes | Zone::OpenZone => Verdict::Undecidable,
    };
    Ok(ContributionVerdict {
        divisors,
        lambda: lambda.clone(),
        verdict,
        method: rep.method,
        evidence: Evidence::Criterion {
            inputs: rep.inputs,
            inequalities: rep.result.inequalities,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionOutcome {
    pub family: String,
    pub strict: bool,
    /// `K_E + E°|_E`.
    pub class: PicClass,
    pub pairing: Rational,
    pub fires: bool,
}

/// `(K_E + E°|_E)·C < 0` (strict: contracted in a dlt model) or `≤ 0`
/// (contracted in the log canonical model) for the curves `C` of a family.
pub fn contraction_sufficiency(
    data: &ResolutionData,
    e: &str,
    family: &str,
    strict: bool,
) -> Result<ContractionOutcome> {
    let lat = lattice_for(data, e)?;
    let fam = lat.family(family)?;
    let mut class = lattice::canonical_class(lat);
    for (id, cls) in &lat.restrictions {
        if id != e {
            class = class.add(cls);
        }
    }
    let pairing = lattice::pair(&class, fam)?;
    let fires = if strict {
        pairing.is_negative()
    } else {
        !pairing.is_positive()
    };
    Ok(ContractionOutcome {
        family: family.to_string(),
        strict,
        class,
        pairing,
        fires,
    })
}

fn check_candidate(data: &ResolutionData, components: &[&str], lambda: &Rational) -> Result<()> {
    if candidates::is_candidate_for(data, components, lambda)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "lambda = {lambda} is not a candidate for {}: lambda * a must be a positive integer",
            components.join("+")
        )))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    #[default]
    Auto,
    Effectivity,
    Criterion,
}

/// Verdict for `E` (one or more components) at `λ`.
///
/// Surfaces use the dual-graph degree test. In higher dimension `auto` runs
/// the necessary condition, then effectivity, then the closed-form criterion.
pub fn contributes(
    data: &ResolutionData,
    components: &[&str],
    lambda: &Rational,
    choice: MethodChoice,
) -> Result<ContributionVerdict> {
    if components.is_empty() {
        return Err(Error::Precondition("no divisor given".into()));
    }
    for c in components {
        if !data.divisor(c)?.is_exceptional() {
            return Err(Error::Precondition(format!("{c} is not exceptional")));
        }
    }
    check_candidate(data, components, lambda)?;

    if components.len() > 1 {
        if data.ambient_dim == 2 && choice != MethodChoice::Criterion {
            return surface::surface_contributes(data, components, lambda);
        }
        return Ok(ContributionVerdict {
            divisors: components.iter().map(|s| s.to_string()).collect(),
            lambda: lambda.clone(),
            verdict: Verdict::Undecidable,
            method: Method::LatticeEffectivity,
            evidence: Evidence::None {
                reason: "reducible E is only handled on surfaces".into(),
            },
        });
    }
    let e = components[0];
    match choice {
        MethodChoice::Effectivity => contributes_by_effectivity(data, e, lambda),
        MethodChoice::Criterion => contributes_by_criterion(data, e, lambda),
        MethodChoice::Auto if data.ambient_dim == 2 && !data.lattices.contains_key(e) => {
            surface::surface_contributes(data, components, lambda)
        }
        MethodChoice::Auto => {
            let lat = lattice_for(data, e)?;
            if lat.flags.effectivity_as_q_divisor {
                let nc = necessary_condition(data, e)?;
                if nc.outcome == Necessity::Fails {
                    return Ok(ContributionVerdict {
                        divisors: vec![e.to_string()],
                        lambda: lambda.clone(),
                        verdict: Verdict::DoesNotContribute,
                        method: Method::NecessaryConditionFailed,
                        evidence: Evidence::NecessaryCondition {
                            class: nc.class,
                            effective: nc.effective,
                        },
                    });
                }
            }
            let v = contributes_by_effectivity(data, e, lambda)?;
            if v.verdict != Verdict::Undecidable {
                return Ok(v);
            }
            let c = contributes_by_criterion(data, e, lambda)?;
            Ok(if c.verdict == Verdict::Undecidable {
                v
            } else {
                c
            })
        }
    }
}
