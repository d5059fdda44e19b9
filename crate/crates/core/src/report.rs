//! Per-divisor reports in text, JSON and DOT form.

use std::fmt::Write as _;

use serde::Serialize;

use crate::candidates;
use crate::contribution::{
    self, Applicability, ContractionOutcome, MethodChoice, NecessaryOutcome,
};
use crate::error::Result;
use crate::fixture;
use crate::model::{self, DivisorKind, ResolutionData};
use crate::rational::Rational;
use crate::surface::{self, MinimalClassRecord};
use crate::verdict::{Method, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct VerdictLine {
    pub lambda: Rational,
    pub verdict: Verdict,
    pub method: Method,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub id: String,
    pub name: String,
    pub kind: DivisorKind,
    pub mult: i64,
    pub discrepancy: i64,
    /// This divisor's candidates in `(0, 1]`.
    pub candidates: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<Applicability>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub necessary_condition: Option<NecessaryOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub contraction: Vec<ContractionOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub lct: Rational,
    pub lct_achievers: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jumping_numbers: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_resolution_classification: Option<Vec<MinimalClassRecord>>,
    pub divisors: Vec<DivisorReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn build(data: &ResolutionData) -> Result<Report> {
    let (lct, lct_achievers) = candidates::lct(data)?;
    let one = Rational::one();
    let mut notes = Vec::new();
    let surface = data.ambient_dim == 2 && data.dual_graph.is_some();

    let (jumping_numbers, classification, self_ints) = if surface {
        let jn = surface::surface_jumping_numbers(data, &one)
            .map_err(|e| notes.push(format!("jumping numbers: {e}")))
            .ok();
        let classes = if data.flags.minimal_resolution {
            surface::minimal_classification(data).ok()
        } else {
            None
        };
        (jn, classes, model::self_intersections(data).ok())
    } else {
        (None, None, None)
    };

    let mut divisors = Vec::new();
    for div in &data.divisors {
        let mut r = DivisorReport {
            id: div.id.clone(),
            name: div.name.clone(),
            kind: div.kind,
            mult: div.mult,
            discrepancy: div.discrepancy,
            candidates: candidates::divisor_candidates(div, &one),
            self_intersection: self_ints.as_ref().and_then(|s| s.get(&div.id).copied()),
            d: None,
            criterion: None,
            necessary_condition: None,
            verdicts: Vec::new(),
            contraction: Vec::new(),
            notes: Vec::new(),
        };
        if div.is_exceptional() {
            exceptional_report(data, &mut r, surface);
        }
        divisors.push(r);
    }
    Ok(Report {
        lct,
        lct_achievers,
        jumping_numbers,
        minimal_resolution_classification: classification,
        divisors,
        notes,
    })
}

fn exceptional_report(data: &ResolutionData, r: &mut DivisorReport, surface: bool) {
    let e = r.id.as_str();
    if surface {
        r.d = Some(data.neighbors(e).map(|(_, w)| w).sum());
    }
    match contribution::applicable_criterion(data, e) {
        Ok(a) => r.criterion = Some(a),
        Err(err) => r.notes.push(format!("criterion: {err}")),
    }
    let lat = data.lattices.get(e);
    if let Some(lat) = lat {
        if lat.flags.effectivity_as_q_divisor {
            match contribution::necessary_condition(data, e) {
                Ok(n) => r.necessary_condition = Some(n),
                Err(err) => r.notes.push(format!("necessary condition: {err}")),
            }
        }
        for fam in &lat.curve_families {
            for strict in [true, false] {
                match contribution::contraction_sufficiency(data, e, &fam.name, strict) {
                    Ok(c) => r.contraction.push(c),
                    Err(err) => r.notes.push(format!("contraction ({}): {err}", fam.name)),
                }
            }
        }
    } else if !surface {
        r.notes
            .push("no lattice declared; per-candidate verdicts need one".into());
        return;
    }
    for lambda in r.candidates.clone() {
        match contribution::contributes(data, &[e], &lambda, MethodChoice::Auto) {
            Ok(v) => r.verdicts.push(VerdictLine {
                lambda,
                verdict: v.verdict,
                method: v.method,
            }),
            Err(err) => r.notes.push(format!("lambda = {lambda}: {err}")),
        }
    }
}

fn join(xs: &[Rational]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn text(data: &ResolutionData) -> Result<String> {
    let rep = build(data)?;
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, "ambient_dim: {}", data.ambient_dim);
    if !data.provenance.is_empty() {
        let _ = writeln!(w, "provenance: {}", data.provenance);
    }
    let _ = writeln!(w, "lct: {} ({})", rep.lct, rep.lct_achievers.join(", "));
    if let Some(jn) = &rep.jumping_numbers {
        let _ = writeln!(w, "jumping numbers in (0, 1]: {}", join(jn));
    }
    for n in &rep.notes {
        let _ = writeln!(w, "note: {n}");
    }
    for d in &rep.divisors {
        let kind = if d.kind == DivisorKind::Exceptional {
            "exceptional"
        } else {
            "strict transform"
        };
        let _ = writeln!(
            w,
            "\n{} ({kind}) a = {} k = {}",
            d.id, d.mult, d.discrepancy
        );
        if !d.name.is_empty() {
            let _ = writeln!(w, "  name: {}", d.name);
        }
        let _ = writeln!(
            w,
            "  candidates in (0, 1]: {}",
            if d.candidates.is_empty() {
                "none".into()
            } else {
                join(&d.candidates)
            }
        );
        if let Some(si) = d.self_intersection {
            let _ = writeln!(w, "  self-intersection: {si}");
        }
        if let Some(dd) = d.d {
            let _ = writeln!(w, "  d: {dd}");
        }
        match &d.criterion {
            Some(Applicability::Applies(c)) => {
                let inputs: Vec<String> =
                    c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(
                    w,
                    "  criterion: {} ({}) -> {}",
                    c.method,
                    inputs.join(", "),
                    c.result.zone
                );
            }
            Some(Applicability::NotApplicable { reason }) => {
                let _ = writeln!(w, "  criterion: none ({reason})");
            }
            None => {}
        }
        if let Some(n) = &d.necessary_condition {
            let _ = writeln!(
                w,
                "  necessary condition: K_E + E°|_E = {} -> {:?}",
                n.class, n.outcome
            );
        }
        for c in &d.contraction {
            let _ = writeln!(
                w,
                "  contraction via {} ({}): pairing {} -> {}",
                c.family,
                if c.strict { "strict" } else { "non-strict" },
                c.pairing,
                if c.fires { "fires" } else { "does not fire" }
            );
        }
        for v in &d.verdicts {
            let _ = writeln!(w, "  lambda = {}: {} ({})", v.lambda, v.verdict, v.method);
        }
        for n in &d.notes {
            let _ = writeln!(w, "  note: {n}");
        }
    }
    Ok(s)
}

/// The fixture itself with the report attached under `report`.
pub fn json(data: &ResolutionData) -> Result<String> {
    let rep = serde_json::to_value(build(data)?).expect("report serializes");
    Ok(fixture::to_json(data, Some(rep)))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Dual graph on surfaces; otherwise restriction and proximity edges of every lattice.
pub fn dot(data: &ResolutionData) -> String {
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, "graph resolution {{");
    for d in &data.divisors {
        let shape = if d.is_exceptional() { "ellipse" } else { "box" };
        let _ = writeln!(
            w,
            "  {} [label={}, shape={shape}];",
            quote(&d.id),
            quote(&d.id)
        );
    }
    if data.dual_graph.is_some() {
        for e in data.edges() {
            let _ = writeln!(
                w,
                "  {} -- {} [label=\"{}\"];",
                quote(&e.a),
                quote(&e.b),
                e.intersection
            );
        }
    } else {
        for (id, lat) in &data.lattices {
            for (other, cls) in &lat.restrictions {
                if other != id && !cls.is_zero() {
                    let _ = writeln!(
                        w,
                        "  {} -- {} [label={}];",
                        quote(id),
                        quote(other),
                        quote(&cls.to_string())
                    );
                }
            }
            for c in &lat.centers {
                for p in c.proximities() {
                    let _ = writeln!(
                        w,
                        "  {} -- {} [style=dashed, label=\"proximate\"];",
                        quote(&c.label),
                        quote(p)
                    );
                }
            }
        }
    }
    let _ = writeln!(w, "}}");
    s
}
