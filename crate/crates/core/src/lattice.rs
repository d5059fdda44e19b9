//! Picard-lattice arithmetic on an exceptional divisor `E ≅ ℙ^{n-1}` blown up
//! along a list of centers.
//!
//! Classes are integer vectors over the basis `(h; e_1, …, e_r)`, where `h` is
//! the pullback of a hyperplane and `e_l` the *total transform* of the
//! exceptional divisor over the `l`-th center. With this basis the strict
//! transform of the `l`-th exceptional divisor is `e_l − Σ e_{l'}` over the
//! centers `l'` proximate to `l`.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::cone::{self, Membership};
use crate::error::{Error, Result};
use crate::model::ResolutionData;
use crate::rational::Rational;

/// Integer class `c_0 h + Σ c_l e_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PicClass(pub Vec<i64>);

impl PicClass {
    pub fn zero(rank: usize) -> Self {
        PicClass(vec![0; rank])
    }

    pub fn hyperplane(rank: usize) -> Self {
        let mut c = vec![0; rank];
        c[0] = 1;
        PicClass(c)
    }

    /// `e_l` for the `l`-th center (zero-based).
    pub fn exceptional(rank: usize, l: usize) -> Self {
        let mut c = vec![0; rank];
        c[l + 1] = 1;
        PicClass(c)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn degree(&self) -> i64 {
        self.0[0]
    }

    pub fn add(&self, other: &PicClass) -> PicClass {
        assert_eq!(self.rank(), other.rank(), "class rank mismatch");
        PicClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &PicClass) -> PicClass {
        assert_eq!(self.rank(), other.rank(), "class rank mismatch");
        PicClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> PicClass {
        PicClass(self.0.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> PicClass {
        self.scale(-1)
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| Rational::from(c)).collect()
    }

    /// Narrow a rational class, failing if any coordinate is fractional.
    pub fn from_rational(coords: &[Rational]) -> Option<PicClass> {
        coords
            .iter()
            .map(Rational::to_i64)
            .collect::<Option<Vec<_>>>()
            .map(PicClass)
    }
}

/// Renders as e.g. `3h-e_1-e_2`, `-e_2`, or `0`.
impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sym = if i == 0 {
                "h".to_string()
            } else {
                format!("e_{i}")
            };
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{sym}"));
            } else {
                out.push_str(&format!("{sign}{mag}{sym}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Center {
    /// Id of the divisor created by blowing up this center.
    pub label: String,
    /// Dimension `k_l` of the center on `E`.
    pub dim: i64,
    /// 1 iff the ambient center lies inside `E`.
    #[serde(default)]
    pub delta: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinitely_near_parent: Option<String>,
    /// Further centers this one is proximate to (satellite points), besides the parent.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub proximate_to: Vec<String>,
}

impl Center {
    /// Parent first, then the satellite proximities.
    pub fn proximities(&self) -> impl Iterator<Item = &String> {
        self.infinitely_near_parent
            .iter()
            .chain(self.proximate_to.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFamily {
    pub name: String,
    /// `(h·C, e_1·C, …, e_r·C)`.
    pub pairings: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentHistory {
    pub d: i64,
    #[serde(default)]
    pub mu: IndexMap<String, i64>,
    #[serde(default)]
    pub m: i64,
    #[serde(default)]
    pub m_after: IndexMap<String, i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterHistory {
    #[serde(default)]
    pub m: i64,
}

/// Blow-up bookkeeping on `E` after its creation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupHistory {
    /// Non-center components `j ∈ J'`.
    #[serde(default)]
    pub components: IndexMap<String, ComponentHistory>,
    #[serde(default)]
    pub centers: IndexMap<String, CenterHistory>,
}

/// Caller-asserted hypotheses; none of these can be checked from lattice data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFlags {
    #[serde(default)]
    pub created_by_point_blowup: bool,
    #[serde(default)]
    pub centers_in_hyperplane: bool,
    #[serde(default)]
    pub minimal_resolution: bool,
    #[serde(default, rename = "effectivity_as_Q_divisor")]
    pub effectivity_as_q_divisor: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcDivLattice {
    pub divisor_id: String,
    /// Ambient dimension; `E` is `ℙ^{n-1}` blown up.
    pub n: i64,
    pub centers: Vec<Center>,
    pub restrictions: IndexMap<String, PicClass>,
    pub effective_cone: Vec<PicClass>,
    pub curve_families: Vec<CurveFamily>,
    pub history: Option<BlowupHistory>,
    pub flags: LatticeFlags,
}

/// Which default effective-cone generator set applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Configuration {
    /// No centers.
    Projective,
    /// `ℙ²` blown up at distinct points, asserted collinear.
    CollinearPoints,
    /// `ℙ²` blown up at a point and a second point on its exceptional curve.
    TwoInfinitelyNear,
    Other,
}

impl ExcDivLattice {
    pub fn rank(&self) -> usize {
        1 + self.centers.len()
    }

    pub fn center_index(&self, label: &str) -> Option<usize> {
        self.centers.iter().position(|c| c.label == label)
    }

    pub fn is_center(&self, id: &str) -> bool {
        self.center_index(id).is_some()
    }

    pub fn restriction(&self, id: &str) -> PicClass {
        self.restrictions
            .get(id)
            .cloned()
            .unwrap_or_else(|| PicClass::zero(self.rank()))
    }

    pub fn configuration(&self) -> Configuration {
        let points = self.centers.iter().all(|c| c.dim == 0);
        let near = self
            .centers
            .iter()
            .any(|c| c.proximities().next().is_some());
        match self.centers.len() {
            0 => Configuration::Projective,
            _ if self.n == 3 && points && !near && self.flags.centers_in_hyperplane => {
                Configuration::CollinearPoints
            }
            2 if self.n == 3
                && points
                && self.centers[0].proximities().next().is_none()
                && self.centers[1].infinitely_near_parent.as_deref()
                    == Some(&self.centers[0].label)
                && self.centers[1].proximate_to.is_empty() =>
            {
                Configuration::TwoInfinitelyNear
            }
            _ => Configuration::Other,
        }
    }

    /// Declared generators, else the default set for a recognised configuration.
    pub fn cone_generators(&self) -> Option<Vec<PicClass>> {
        if !self.effective_cone.is_empty() {
            return Some(self.effective_cone.clone());
        }
        let r = self.rank();
        match self.configuration() {
            Configuration::Projective => Some(vec![PicClass::hyperplane(r)]),
            Configuration::CollinearPoints => {
                let mut gens: Vec<PicClass> = (0..self.centers.len())
                    .map(|l| PicClass::exceptional(r, l))
                    .collect();
                let mut line = vec![-1; r];
                line[0] = 1;
                gens.push(PicClass(line));
                Some(gens)
            }
            Configuration::TwoInfinitelyNear => Some(vec![
                PicClass(vec![0, 0, 1]),
                PicClass(vec![0, 1, -1]),
                PicClass(vec![1, -1, -1]),
            ]),
            Configuration::Other => None,
        }
    }

    pub fn family(&self, name: &str) -> Result<&CurveFamily> {
        self.curve_families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| {
                Error::Configuration(format!(
                    "lattice of {} has no curve family {name:?}",
                    self.divisor_id
                ))
            })
    }

    /// Components of `E°` that are not exceptional over a center (`J'`).
    pub fn non_center_components(&self) -> impl Iterator<Item = (&String, &PicClass)> {
        self.restrictions
            .iter()
            .filter(move |(id, _)| *id != &self.divisor_id && !self.is_center(id))
    }

    /// `d = Σ_{j∈J'} d_j` and `μ_l = Σ_{j∈J'} μ_jl` read off the restriction classes.
    pub fn degree_data(&self) -> (i64, Vec<i64>) {
        let mut d = 0;
        let mut mu = vec![0; self.centers.len()];
        for (_, cls) in self.non_center_components() {
            d += cls.0[0];
            for (l, m) in mu.iter_mut().enumerate() {
                *m -= cls.0[l + 1];
            }
        }
        (d, mu)
    }
}

/// `K_E = −n h + Σ (n − k_l − 2) e_l`.
pub fn canonical_class(lat: &ExcDivLattice) -> PicClass {
    let mut c = vec![-lat.n];
    c.extend(lat.centers.iter().map(|z| lat.n - z.dim - 2));
    PicClass(c)
}

/// One violated blow-up-history relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryViolation {
    pub relation: &'static str,
    pub message: String,
}

/// Check `Σ d_j a_j = (1 + Σ d_j m_j) a` and, for every center `l`,
/// `a_l = Σ μ_jl a_j + Σ_{l' ≺ l} a_{l'} + (m_l − Σ μ_jl m_j^{(l)} + δ_l) a`,
/// where `l' ≺ l` ranges over the centers `l` is proximate to.
pub fn check_history(
    lat: &ExcDivLattice,
    hist: &BlowupHistory,
    a: i64,
    mults: &IndexMap<String, i64>,
) -> Vec<HistoryViolation> {
    let mut out = Vec::new();
    let mult = |id: &str| mults.get(id).copied();

    let mut lhs = 0;
    let mut dm = 0;
    for (id, c) in &hist.components {
        match mult(id) {
            Some(aj) => lhs += c.d * aj,
            None => out.push(HistoryViolation {
                relation: "history",
                message: format!("history component {id} has no multiplicity"),
            }),
        }
        dm += c.d * c.m;
        if c.m < 0 || c.d < 0 || c.mu.values().any(|&x| x < 0) || c.m_after.values().any(|&x| x < 0)
        {
            out.push(HistoryViolation {
                relation: "history",
                message: format!("history component {id} has a negative entry"),
            });
        }
        for (l, &ml) in &c.m_after {
            if ml > c.m {
                out.push(HistoryViolation {
                    relation: "history",
                    message: format!("component {id}: m_j^({l}) = {ml} exceeds m_j = {}", c.m),
                });
            }
        }
    }
    let rhs = (1 + dm) * a;
    if lhs != rhs {
        out.push(HistoryViolation {
            relation: "sum d_j a_j = (1 + sum d_j m_j) a",
            message: format!(
                "on {}: sum d_j a_j = {lhs} but (1 + sum d_j m_j) a = {rhs}",
                lat.divisor_id
            ),
        });
    }

    for z in &lat.centers {
        let Some(al) = mult(&z.label) else {
            out.push(HistoryViolation {
                relation: "history",
                message: format!("center {} has no multiplicity", z.label),
            });
            continue;
        };
        let ml = hist.centers.get(&z.label).map(|c| c.m).unwrap_or(0);
        let mut mu_a = 0;
        let mut mu_m = 0;
        for (id, c) in &hist.components {
            let mu = c.mu.get(&z.label).copied().unwrap_or(0);
            mu_a += mu * mult(id).unwrap_or(0);
            mu_m += mu * c.m_after.get(&z.label).copied().unwrap_or(0);
        }
        let prox: i64 = z.proximities().map(|p| mult(p).unwrap_or(0)).sum();
        let expected = mu_a + prox + (ml - mu_m + z.delta as i64) * a;
        if al != expected {
            out.push(HistoryViolation {
                relation: "a_l = sum mu_jl a_j + (m_l - sum mu_jl m_j^(l) + delta_l) a",
                message: format!(
                    "on {}: center {} has a_l = {al}, relation gives {expected}",
                    lat.divisor_id, z.label
                ),
            });
        }
    }
    out
}

/// `E|_E = −(1 + Σ d_j m_j) h − Σ (m_l − Σ μ_jl m_j^{(l)} + δ_l) e_l`,
/// after checking the history relations that justify it.
pub fn self_restriction(
    lat: &ExcDivLattice,
    hist: &BlowupHistory,
    a: i64,
    mults: &IndexMap<String, i64>,
) -> Result<PicClass> {
    let violations = check_history(lat, hist, a, mults);
    if let Some(v) = violations.first() {
        return Err(Error::Inconsistent(format!(
            "inconsistent blow-up history ({}): {}",
            v.relation, v.message
        )));
    }
    let dm: i64 = hist.components.values().map(|c| c.d * c.m).sum();
    let mut c = vec![-(1 + dm)];
    for z in &lat.centers {
        let ml = hist.centers.get(&z.label).map(|c| c.m).unwrap_or(0);
        let mu_m: i64 = hist
            .components
            .values()
            .map(|c| {
                c.mu.get(&z.label).copied().unwrap_or(0)
                    * c.m_after.get(&z.label).copied().unwrap_or(0)
            })
            .sum();
        c.push(-(ml - mu_m + z.delta as i64));
    }
    Ok(PicClass(c))
}

fn lattice_of<'a>(data: &'a ResolutionData, e: &str) -> Result<&'a ExcDivLattice> {
    data.lattices
        .get(e)
        .ok_or_else(|| Error::Configuration(format!("no lattice declared for divisor {e}")))
}

/// `E|_E`: the declared restriction if present, else derived from the history.
pub fn self_class(data: &ResolutionData, e: &str) -> Result<PicClass> {
    let lat = lattice_of(data, e)?;
    if let Some(c) = lat.restrictions.get(e) {
        return Ok(c.clone());
    }
    let hist = lat.history.as_ref().ok_or_else(|| {
        Error::Configuration(format!(
            "lattice of {e} declares neither E|_E nor a blow-up history"
        ))
    })?;
    self_restriction(lat, hist, data.divisor(e)?.mult, &data.multiplicities())
}

fn check_candidate(data: &ResolutionData, e: &str, lambda: &Rational) -> Result<i64> {
    let a = data.divisor(e)?.mult;
    if !lambda.is_positive() {
        return Err(Error::Precondition(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    if !(lambda * &Rational::from(a)).is_integer() {
        return Err(Error::Precondition(format!(
            "lambda = {lambda} is not a candidate for {e} (lambda * {a} not an integer)"
        )));
    }
    Ok(a)
}

/// `⌊λ π*D⌋|_E = −Σ_{i≠E} {λ a_i} E_i|_E`, using `π*D|_E = 0`.
///
/// The sum is formed over the rationals and must come out integral.
pub fn floor_pullback_restriction(
    data: &ResolutionData,
    e: &str,
    lambda: &Rational,
) -> Result<PicClass> {
    check_candidate(data, e, lambda)?;
    let lat = lattice_of(data, e)?;
    let mut acc = vec![Rational::zero(); lat.rank()];
    for div in &data.divisors {
        if div.id == e {
            continue;
        }
        let cls = lat.restriction(&div.id);
        if cls.is_zero() {
            continue;
        }
        let frac = (lambda * &Rational::from(div.mult)).fract();
        for (slot, &c) in acc.iter_mut().zip(&cls.0) {
            *slot = &*slot - &(&frac * &Rational::from(c));
        }
    }
    PicClass::from_rational(&acc).ok_or_else(|| {
        let shown: Vec<String> = acc.iter().map(|c| c.to_string()).collect();
        Error::Inconsistent(format!(
            "floor(lambda pi*D)|_{e} at lambda = {lambda} is not integral: ({}); declared restrictions are inconsistent",
            shown.join(", ")
        ))
    })
}

/// Same class computed from integer parts: `Σ_{i≠E} ⌊λ a_i⌋ E_i|_E + λ a E|_E`.
pub fn floor_pullback_restriction_direct(
    data: &ResolutionData,
    e: &str,
    lambda: &Rational,
) -> Result<PicClass> {
    let a = check_candidate(data, e, lambda)?;
    let lat = lattice_of(data, e)?;
    let la = (lambda * &Rational::from(a))
        .to_i64()
        .expect("checked integral");
    let mut acc = self_class(data, e)?.scale(la);
    for div in &data.divisors {
        if div.id == e {
            continue;
        }
        let fl = (lambda * &Rational::from(div.mult)).floor_i64();
        acc = acc.add(&lat.restriction(&div.id).scale(fl));
    }
    Ok(acc)
}

/// Outcome of an effectivity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Effectivity {
    /// Nonnegative rational multipliers for `generators`.
    Yes {
        generators: Vec<PicClass>,
        multipliers: Vec<Rational>,
    },
    No,
    Unknown,
}

impl Effectivity {
    pub fn is_yes(&self) -> bool {
        matches!(self, Effectivity::Yes { .. })
    }
}

/// Rational cone membership against the lattice's effective-cone generators.
pub fn is_effective(lat: &ExcDivLattice, cls: &PicClass) -> Effectivity {
    let Some(gens) = lat.cone_generators() else {
        return Effectivity::Unknown;
    };
    let rows: Vec<Vec<Rational>> = gens.iter().map(PicClass::to_rational).collect();
    match cone::membership(&rows, &cls.to_rational()) {
        Membership::Inside(multipliers) => Effectivity::Yes {
            generators: gens,
            multipliers,
        },
        Membership::Outside => Effectivity::No,
    }
}

/// `cls · C` for a curve of the family.
pub fn pair(cls: &PicClass, family: &CurveFamily) -> Result<Rational> {
    if cls.rank() != family.pairings.len() {
        return Err(Error::Precondition(format!(
            "class of rank {} paired with family {:?} of length {}",
            cls.rank(),
            family.name,
            family.pairings.len()
        )));
    }
    Ok(Rational::from(
        cls.0
            .iter()
            .zip(&family.pairings)
            .map(|(a, b)| a * b)
            .sum::<i64>(),
    ))
}
