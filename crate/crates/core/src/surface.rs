//! Curves on smooth surfaces: antinef closures, complete jumping numbers, and
//! contribution by exceptional curves from dual-graph data.
//!
//! On a surface, `π_*O_Y(−D)` depends only on the antinef closure of `D`
//! (strict-transform coefficients held fixed), so a jump of the multiplier
//! ideal at `λ` shows up as a change of closure between `λ` and `λ − ε`.

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::candidates;
use crate::error::{Error, Result};
use crate::model::{self, ResolutionData};
use crate::rational::Rational;
use crate::verdict::{ContributionVerdict, Evidence, Inequality, Method, Verdict};

/// Unloading steps allowed before declaring the input non-negative-definite.
pub const UNLOADING_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceProfile {
    pub id: String,
    pub a: i64,
    pub k: i64,
    pub self_int: i64,
    /// `E·E°`: total intersection with the other components of `(π*C)_red`.
    pub d: i64,
}

pub fn profiles(data: &ResolutionData) -> Result<Vec<SurfaceProfile>> {
    let self_ints = model::self_intersections(data)?;
    Ok(data
        .exceptional()
        .map(|e| SurfaceProfile {
            id: e.id.clone(),
            a: e.mult,
            k: e.discrepancy,
            self_int: self_ints[&e.id],
            d: data.neighbors(&e.id).map(|(_, w)| w).sum(),
        })
        .collect())
}

/// Exceptional ids (file order) and their intersection matrix.
pub fn intersection_matrix(data: &ResolutionData) -> Result<(Vec<String>, Vec<Vec<i64>>)> {
    let self_ints = model::self_intersections(data)?;
    let ids: Vec<String> = data.exceptional().map(|d| d.id.clone()).collect();
    let m = ids
        .iter()
        .map(|a| {
            ids.iter()
                .map(|b| {
                    if a == b {
                        self_ints[a]
                    } else {
                        data.intersection(a, b)
                    }
                })
                .collect()
        })
        .collect();
    Ok((ids, m))
}

/// Leading principal minors of `−M` all positive (fraction-free elimination).
pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(-x)).collect())
        .collect();
    let mut prev = BigInt::from(1);
    for k in 0..n {
        // a[k][k] is the (k+1)-th leading principal minor of −M.
        if !a[k][k].is_positive() {
            return false;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    true
}

/// Divisor whose exceptional part pairs nonpositively with every exceptional curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntinefDivisor {
    pub exceptional: IndexMap<String, i64>,
    pub strict: IndexMap<String, i64>,
}

impl AntinefDivisor {
    pub fn coefficient(&self, id: &str) -> i64 {
        self.exceptional
            .get(id)
            .or_else(|| self.strict.get(id))
            .copied()
            .unwrap_or(0)
    }
}

fn pairing(
    data: &ResolutionData,
    self_ints: &IndexMap<String, i64>,
    coeffs: &IndexMap<String, i64>,
    e: &str,
) -> i64 {
    let own = coeffs.get(e).copied().unwrap_or(0) * self_ints[e];
    own + data
        .neighbors(e)
        .map(|(f, w)| coeffs.get(f).copied().unwrap_or(0) * w)
        .sum::<i64>()
}

/// Smallest `D' ≥ div` (equal on strict transforms) with `D'·E ≤ 0` for every
/// exceptional `E`, by unloading.
pub fn unloading_closure(
    data: &ResolutionData,
    div: &IndexMap<String, i64>,
) -> Result<AntinefDivisor> {
    data.require_surface()?;
    for id in div.keys() {
        data.divisor(id)?;
    }
    let self_ints = model::self_intersections(data)?;
    let mut coeffs: IndexMap<String, i64> = data
        .divisors
        .iter()
        .map(|d| (d.id.clone(), div.get(&d.id).copied().unwrap_or(0)))
        .collect();
    let exc: Vec<&str> = data.exceptional().map(|d| d.id.as_str()).collect();

    let mut steps = 0;
    loop {
        let hot = exc.iter().find_map(|&e| {
            let t = pairing(data, &self_ints, &coeffs, e);
            (t > 0).then_some((e, t))
        });
        let Some((e, t)) = hot else { break };
        steps += 1;
        if steps > UNLOADING_CAP {
            return Err(Error::NonTerminating(UNLOADING_CAP));
        }
        let s = -self_ints[e];
        if s <= 0 {
            return Err(Error::Inconsistent(format!(
                "{e} has nonnegative self-intersection {}",
                -s
            )));
        }
        coeffs[e] += (t + s - 1) / s;
    }
    debug_assert!(exc
        .iter()
        .all(|e| pairing(data, &self_ints, &coeffs, e) <= 0));

    let mut out = AntinefDivisor {
        exceptional: IndexMap::new(),
        strict: IndexMap::new(),
    };
    for d in &data.divisors {
        let c = coeffs[&d.id];
        if d.is_exceptional() {
            out.exceptional.insert(d.id.clone(), c);
        } else {
            out.strict.insert(d.id.clone(), c);
        }
    }
    Ok(out)
}

/// Whether `div` pairs nonpositively with every exceptional curve.
pub fn is_antinef(data: &ResolutionData, div: &AntinefDivisor) -> Result<bool> {
    let self_ints = model::self_intersections(data)?;
    let mut coeffs = div.exceptional.clone();
    coeffs.extend(div.strict.iter().map(|(k, v)| (k.clone(), *v)));
    Ok(data
        .exceptional()
        .all(|e| pairing(data, &self_ints, &coeffs, &e.id) <= 0))
}

/// `⌊λπ*C⌋ − K_π` (or `⌈λπ*C⌉ − 1 − K_π` for the value just below `λ`),
/// exceptional part clipped at zero: `π_*O(−D)` only sees `max(D, 0)` there.
pub fn ideal_divisor(
    data: &ResolutionData,
    lambda: &Rational,
    just_below: bool,
) -> IndexMap<String, i64> {
    data.divisors
        .iter()
        .map(|d| {
            let scaled = lambda * &Rational::from(d.mult);
            let f = if just_below {
                scaled.ceil_i64() - 1
            } else {
                scaled.floor_i64()
            };
            let c = f - d.discrepancy;
            (d.id.clone(), if d.is_exceptional() { c.max(0) } else { c })
        })
        .collect()
}

/// Antinef closure of the multiplier-ideal divisor at `λ`.
pub fn multiplier_closure(
    data: &ResolutionData,
    lambda: &Rational,
    just_below: bool,
) -> Result<AntinefDivisor> {
    unloading_closure(data, &ideal_divisor(data, lambda, just_below))
}

fn require_negative_definite(data: &ResolutionData) -> Result<()> {
    let (_, m) = intersection_matrix(data)?;
    if !is_negative_definite(&m) {
        return Err(Error::Inconsistent(
            "exceptional intersection matrix is not negative definite".into(),
        ));
    }
    Ok(())
}

/// All jumping numbers in `(0, upper]`.
pub fn surface_jumping_numbers(data: &ResolutionData, upper: &Rational) -> Result<Vec<Rational>> {
    data.require_surface()?;
    require_negative_definite(data)?;
    let mut walk = candidates::candidates(data, upper)?.values();
    let top = upper.floor_i64();
    walk.extend((1..=top).map(Rational::from));
    walk.sort();
    walk.dedup();

    let mut out = Vec::new();
    for lambda in walk {
        let jumps = lambda.is_integer()
            || multiplier_closure(data, &lambda, false)?
                != multiplier_closure(data, &lambda, true)?;
        if jumps {
            out.push(lambda);
        }
    }
    Ok(out)
}

/// Contribution of `λ` by a prime exceptional curve or a connected tree of them.
pub fn surface_contributes(
    data: &ResolutionData,
    components: &[&str],
    lambda: &Rational,
) -> Result<ContributionVerdict> {
    data.require_surface()?;
    if components.is_empty() {
        return Err(Error::Precondition("no components given".into()));
    }
    for (i, c) in components.iter().enumerate() {
        if !data.divisor(c)?.is_exceptional() {
            return Err(Error::Precondition(format!("{c} is not exceptional")));
        }
        if components[..i].contains(c) {
            return Err(Error::Precondition(format!("{c} listed twice")));
        }
    }
    if !candidates::is_candidate_for(data, components, lambda)? {
        return Err(Error::Precondition(format!(
            "lambda = {lambda} is not a candidate for {} (lambda * a_F must be an integer for every component)",
            components.join("+")
        )));
    }
    let self_ints = model::self_intersections(data)?;
    let ids: Vec<String> = components.iter().map(|s| s.to_string()).collect();

    if components.len() > 1 {
        let internal: Vec<(usize, usize, i64)> = (0..components.len())
            .flat_map(|i| ((i + 1)..components.len()).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let w = data.intersection(components[i], components[j]);
                (w > 0).then_some((i, j, w))
            })
            .collect();
        let is_tree = internal.len() == components.len() - 1
            && internal.iter().all(|&(_, _, w)| w == 1)
            && connected(components.len(), &internal);
        if !is_tree {
            return Ok(ContributionVerdict {
                divisors: ids,
                lambda: lambda.clone(),
                verdict: Verdict::Undecidable,
                method: Method::SurfaceDegree,
                evidence: Evidence::None {
                    reason: "reducible E must be a connected tree of transversal components".into(),
                },
            });
        }
    }

    // deg of ⌊λπ*C⌋|_{E_i}, then of L = (K_π + E − ⌊λπ*C⌋)|_{E_i}.
    let floor_deg = |e: &str| -> Result<i64> {
        let a = data.divisor(e)?.mult;
        let own = (lambda * &Rational::from(a)).to_i64().expect("candidate") * self_ints[e];
        let mut s = own;
        for (f, w) in data.neighbors(e) {
            s += (lambda * &Rational::from(data.divisor(f)?.mult)).floor_i64() * w;
        }
        Ok(s)
    };
    let mut degrees: Vec<(String, i64)> = Vec::new();
    let mut floor_degs = Vec::new();
    for &e in components {
        let fd = floor_deg(e)?;
        let inside: i64 = components
            .iter()
            .filter(|&&o| o != e)
            .map(|o| data.intersection(e, o))
            .sum();
        floor_degs.push(fd);
        degrees.push((e.to_string(), -2 + inside - fd));
    }

    // Components of negative degree carry no sections; neighbours must vanish at the node.
    let mut alive = vec![true; components.len()];
    let mut deg: Vec<i64> = degrees.iter().map(|(_, d)| *d).collect();
    while let Some(i) = (0..components.len()).find(|&i| alive[i] && deg[i] < 0) {
        alive[i] = false;
        for j in 0..components.len() {
            if alive[j] {
                deg[j] -= data.intersection(components[i], components[j]);
            }
        }
    }
    let surviving: Vec<String> = (0..components.len())
        .filter(|&i| alive[i])
        .map(|i| ids[i].clone())
        .collect();
    let inequality = (components.len() == 1).then(|| {
        Inequality::le(
            format!("deg floor(lambda pi*C)|_{}", components[0]),
            floor_degs[0],
            -2,
        )
    });
    let verdict = if surviving.is_empty() {
        Verdict::DoesNotContribute
    } else {
        Verdict::Contributes
    };
    Ok(ContributionVerdict {
        divisors: ids,
        lambda: lambda.clone(),
        verdict,
        method: Method::SurfaceDegree,
        evidence: Evidence::SurfaceDegree {
            degrees,
            surviving,
            inequality,
        },
    })
}

fn connected(n: usize, edges: &[(usize, usize, i64)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b, _) in edges {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalClassRecord {
    pub id: String,
    pub a: i64,
    pub d: i64,
    /// `d ≥ 3`: contributes, and equivalently survives in the log canonical model.
    pub contributes: bool,
    pub contributed_number: Rational,
    pub survives_lc_model: bool,
}

/// Per-divisor `d ≥ 3` classification on a minimal embedded resolution.
pub fn minimal_classification(data: &ResolutionData) -> Result<Vec<MinimalClassRecord>> {
    data.require_surface()?;
    if !data.flags.minimal_resolution {
        return Err(Error::Precondition(
            "the d >= 3 classification needs the minimal embedded resolution; set flags.minimal_resolution".into(),
        ));
    }
    Ok(profiles(data)?
        .into_iter()
        .map(|p| MinimalClassRecord {
            contributes: p.d >= 3,
            contributed_number: Rational::one() - Rational::new(1, p.a),
            survives_lc_model: p.d >= 3,
            id: p.id,
            a: p.a,
            d: p.d,
        })
        .collect())
}
