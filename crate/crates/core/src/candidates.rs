//! Candidate jumping numbers, the log canonical threshold, and Skoda periodicity.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{PrimeDivisor, ResolutionData};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateEntry {
    pub lambda: Rational,
    /// Divisors `i` with `lambda = (k_i + n)/a_i` for some `n >= 1`, in file order.
    pub supporters: Vec<String>,
}

/// Sorted candidates in `(0, upper]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateList {
    pub upper: Rational,
    pub entries: Vec<CandidateEntry>,
}

impl CandidateList {
    pub fn values(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.lambda.clone()).collect()
    }

    /// Values generated by one divisor.
    pub fn for_divisor(&self, id: &str) -> Vec<Rational> {
        self.entries
            .iter()
            .filter(|e| e.supporters.iter().any(|s| s == id))
            .map(|e| e.lambda.clone())
            .collect()
    }
}

/// `(k + n)/a` for `n = 1, 2, …` up to `upper`.
pub fn divisor_candidates(div: &PrimeDivisor, upper: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut n = 1;
    loop {
        let v = Rational::new(div.discrepancy + n, div.mult);
        if &v > upper {
            break;
        }
        if v.is_positive() {
            out.push(v);
        }
        n += 1;
    }
    out
}

pub fn candidates(data: &ResolutionData, upper: &Rational) -> Result<CandidateList> {
    if !upper.is_positive() {
        return Err(Error::Precondition(format!(
            "upper = {upper} must be positive"
        )));
    }
    let mut merged: BTreeMap<Rational, Vec<String>> = BTreeMap::new();
    for div in &data.divisors {
        for v in divisor_candidates(div, upper) {
            merged.entry(v).or_default().push(div.id.clone());
        }
    }
    Ok(CandidateList {
        upper: upper.clone(),
        entries: merged
            .into_iter()
            .map(|(lambda, supporters)| CandidateEntry { lambda, supporters })
            .collect(),
    })
}

/// `λ a_F ∈ ℤ` for every component `F` of `E`; weaker than membership in
/// `F`'s generated list.
pub fn is_candidate_for(
    data: &ResolutionData,
    components: &[&str],
    lambda: &Rational,
) -> Result<bool> {
    if !lambda.is_positive() {
        return Ok(false);
    }
    for id in components {
        let a = data.divisor(id)?.mult;
        if !(lambda * &Rational::from(a)).is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `λ ∈ (0, upper]` at which some `⌊λ a_i⌋` changes.
pub fn breakpoints(data: &ResolutionData, upper: &Rational) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    for div in &data.divisors {
        let top = (upper * &Rational::from(div.mult)).floor_i64();
        for n in 1..=top {
            set.insert(Rational::new(n, div.mult));
        }
    }
    set.into_iter().collect()
}

/// `min_i (k_i + 1)/a_i` and the divisors achieving it.
pub fn lct(data: &ResolutionData) -> Result<(Rational, Vec<String>)> {
    let mut best: Option<Rational> = None;
    let mut who = Vec::new();
    for div in &data.divisors {
        let v = Rational::new(div.discrepancy + 1, div.mult);
        match &best {
            Some(b) if &v > b => {}
            Some(b) if &v == b => who.push(div.id.clone()),
            _ => {
                best = Some(v);
                who = vec![div.id.clone()];
            }
        }
    }
    best.map(|b| (b, who))
        .ok_or_else(|| Error::Precondition("no divisors declared".into()))
}

/// `{λ + m : λ ∈ input, m ∈ ℤ≥0, λ + m ≤ upper}`.
pub fn skoda_extend(
    jumping_numbers: &BTreeSet<Rational>,
    upper: &Rational,
) -> Result<BTreeSet<Rational>> {
    let one = Rational::one();
    let mut out = BTreeSet::new();
    for l in jumping_numbers {
        if !l.is_positive() || l > &one {
            return Err(Error::Precondition(format!("{l} is not in (0, 1]")));
        }
        let mut v = l.clone();
        while &v <= upper {
            out.insert(v.clone());
            v = v + &one;
        }
    }
    Ok(out)
}
