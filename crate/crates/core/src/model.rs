//! Resolution data and its consistency checks.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, ExcDivLattice, PicClass};
use crate::surface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisorKind {
    Exceptional,
    StrictTransform,
}

/// A component `E_i` of `π^{-1}(D)` with `a_i` from `π*D` and `k_i` from `K_π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeDivisor {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub mult: i64,
    pub discrepancy: i64,
    pub kind: DivisorKind,
}

impl PrimeDivisor {
    pub fn is_exceptional(&self) -> bool {
        self.kind == DivisorKind::Exceptional
    }

    pub fn display_name(&self) -> &str {
        if self.name.is_empty() {
            &self.id
        } else {
            &self.name
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualGraphEdge {
    pub a: String,
    pub b: String,
    pub intersection: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionFlags {
    /// Caller asserts the surface resolution is the minimal embedded one.
    #[serde(default)]
    pub minimal_resolution: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub ambient_dim: i64,
    pub divisors: Vec<PrimeDivisor>,
    pub dual_graph: Option<Vec<DualGraphEdge>>,
    pub lattices: IndexMap<String, ExcDivLattice>,
    pub flags: ResolutionFlags,
    pub provenance: String,
}

impl ResolutionData {
    pub fn divisor(&self, id: &str) -> Result<&PrimeDivisor> {
        self.divisors
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| Error::UnknownDivisor(id.to_string()))
    }

    pub fn has_divisor(&self, id: &str) -> bool {
        self.divisors.iter().any(|d| d.id == id)
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &PrimeDivisor> {
        self.divisors.iter().filter(|d| d.is_exceptional())
    }

    pub fn multiplicities(&self) -> IndexMap<String, i64> {
        self.divisors
            .iter()
            .map(|d| (d.id.clone(), d.mult))
            .collect()
    }

    pub fn edges(&self) -> &[DualGraphEdge] {
        self.dual_graph.as_deref().unwrap_or(&[])
    }

    /// `A·B` for distinct components, zero when no edge is declared.
    pub fn intersection(&self, a: &str, b: &str) -> i64 {
        self.edges()
            .iter()
            .filter(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map(|e| e.intersection)
            .sum()
    }

    /// Neighbours of `id` in the dual graph with their intersection numbers.
    pub fn neighbors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = (&'a str, i64)> + 'a {
        self.edges().iter().filter_map(move |e| {
            if e.a == id {
                Some((e.b.as_str(), e.intersection))
            } else if e.b == id {
                Some((e.a.as_str(), e.intersection))
            } else {
                None
            }
        })
    }

    pub fn require_surface(&self) -> Result<()> {
        if self.ambient_dim != 2 {
            return Err(Error::Unsupported(format!(
                "operation needs a surface (ambient_dim = 2), got ambient_dim = {}",
                self.ambient_dim
            )));
        }
        if self.dual_graph.is_none() {
            return Err(Error::Configuration(
                "surface data without a dual graph".into(),
            ));
        }
        Ok(())
    }
}

/// A violated invariant or consistency relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub divisor: Option<String>,
    pub relation: String,
    pub message: String,
}

impl Diagnostic {
    fn new(divisor: Option<&str>, relation: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            divisor: divisor.map(str::to_string),
            relation: relation.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.divisor {
            Some(d) => write!(f, "[{d}] {}: {}", self.relation, self.message),
            None => write!(f, "{}: {}", self.relation, self.message),
        }
    }
}

/// All violated invariants and consistency relations; empty means valid.
pub fn validate(data: &ResolutionData) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if data.ambient_dim < 2 {
        out.push(Diagnostic::new(
            None,
            "ambient_dim >= 2",
            format!("ambient_dim = {}", data.ambient_dim),
        ));
    }
    if data.divisors.is_empty() {
        out.push(Diagnostic::new(None, "divisors", "no divisors declared"));
    }

    for (i, d) in data.divisors.iter().enumerate() {
        if data.divisors[..i].iter().any(|p| p.id == d.id) {
            out.push(Diagnostic::new(
                Some(&d.id),
                "unique ids",
                "divisor id declared twice",
            ));
        }
        if d.mult < 1 {
            out.push(Diagnostic::new(
                Some(&d.id),
                "mult >= 1",
                format!("mult = {}", d.mult),
            ));
        }
        match d.kind {
            DivisorKind::Exceptional if d.discrepancy < 1 => out.push(Diagnostic::new(
                Some(&d.id),
                "exceptional discrepancy >= 1",
                format!("discrepancy = {}", d.discrepancy),
            )),
            DivisorKind::StrictTransform if d.discrepancy != 0 => out.push(Diagnostic::new(
                Some(&d.id),
                "strict transform discrepancy = 0",
                format!("discrepancy = {}", d.discrepancy),
            )),
            _ => {}
        }
    }

    if data.ambient_dim == 2 && data.dual_graph.is_none() {
        out.push(Diagnostic::new(
            None,
            "dual graph",
            "ambient_dim = 2 requires a dual graph",
        ));
    }
    let edges = data.edges();
    for (i, e) in edges.iter().enumerate() {
        for end in [&e.a, &e.b] {
            if !data.has_divisor(end) {
                out.push(Diagnostic::new(
                    Some(end),
                    "dual graph reference",
                    "edge endpoint is not a declared divisor",
                ));
            }
        }
        if e.a == e.b {
            out.push(Diagnostic::new(
                Some(&e.a),
                "no self-loops",
                "edge joins a divisor to itself",
            ));
        }
        if e.intersection < 1 {
            out.push(Diagnostic::new(
                Some(&e.a),
                "positive intersection",
                format!("edge {}-{} has intersection {}", e.a, e.b, e.intersection),
            ));
        }
        let dup = edges[..i]
            .iter()
            .any(|p| (p.a == e.a && p.b == e.b) || (p.a == e.b && p.b == e.a));
        if dup {
            out.push(Diagnostic::new(
                Some(&e.a),
                "one edge per pair",
                format!("duplicate edge {}-{}", e.a, e.b),
            ));
        }
    }

    let structural_ok = out.is_empty();
    if structural_ok && data.ambient_dim == 2 && data.dual_graph.is_some() {
        out.extend(surface_consistency(data));
    }

    for (key, lat) in &data.lattices {
        out.extend(lattice_consistency(data, key, lat));
    }
    out
}

fn surface_consistency(data: &ResolutionData) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for e in data.exceptional() {
        let s: i64 = data
            .neighbors(&e.id)
            .map(|(f, w)| data.divisor(f).map(|d| d.mult).unwrap_or(0) * w)
            .sum();
        if s % e.mult != 0 {
            out.push(Diagnostic::new(
                Some(&e.id),
                format!("π*C·{} ≠ 0", e.id),
                format!(
                    "sum a_F (F·{}) = {s} is not divisible by a = {}",
                    e.id, e.mult
                ),
            ));
        } else if s == 0 {
            out.push(Diagnostic::new(
                Some(&e.id),
                format!("π*C·{} ≠ 0", e.id),
                format!(
                    "{} meets no other component, self-intersection would be 0",
                    e.id
                ),
            ));
        }
    }
    if out.is_empty() {
        // Exceptional curves are smooth rational: K_π·E = −2 − E².
        if let Ok(si) = self_intersections(data) {
            for e in data.exceptional() {
                let exc_k = |f: &str| {
                    data.divisor(f)
                        .ok()
                        .filter(|d| d.is_exceptional())
                        .map_or(0, |d| d.discrepancy)
                };
                let lhs = (e.discrepancy + 1) * si[&e.id]
                    + data
                        .neighbors(&e.id)
                        .map(|(f, w)| exc_k(f) * w)
                        .sum::<i64>();
                if lhs != -2 {
                    out.push(Diagnostic::new(
                        Some(&e.id),
                        format!("adjunction (K_π + {id})·{id} = -2", id = e.id),
                        format!(
                            "with {id}^2 = {} the left side is {lhs}",
                            si[&e.id],
                            id = e.id
                        ),
                    ));
                }
            }
        }
    }
    if out.is_empty() {
        match surface::intersection_matrix(data) {
            Ok((ids, m)) if !ids.is_empty() && !surface::is_negative_definite(&m) => {
                out.push(Diagnostic::new(
                    None,
                    "negative definite",
                    "exceptional intersection matrix is not negative definite",
                ));
            }
            Err(e) => out.push(Diagnostic::new(None, "self-intersections", e.to_string())),
            _ => {}
        }
    }
    out
}

fn lattice_consistency(data: &ResolutionData, key: &str, lat: &ExcDivLattice) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let here = Some(key);
    if lat.divisor_id != key {
        out.push(Diagnostic::new(
            here,
            "lattice key",
            format!("lattice keyed {key} describes {}", lat.divisor_id),
        ));
    }
    let Ok(owner) = data.divisor(key) else {
        out.push(Diagnostic::new(
            here,
            "lattice reference",
            "lattice for an undeclared divisor",
        ));
        return out;
    };
    if !owner.is_exceptional() {
        out.push(Diagnostic::new(
            here,
            "lattice owner",
            "lattices describe exceptional divisors only",
        ));
    }
    if lat.n != data.ambient_dim {
        out.push(Diagnostic::new(
            here,
            "lattice dimension",
            format!("n = {} but ambient_dim = {}", lat.n, data.ambient_dim),
        ));
    }
    let r = lat.rank();
    for (i, z) in lat.centers.iter().enumerate() {
        if !data.has_divisor(&z.label) {
            out.push(Diagnostic::new(
                here,
                "center reference",
                format!("center {} is not a declared divisor", z.label),
            ));
        }
        if z.dim < 0 || z.dim > lat.n - 2 {
            out.push(Diagnostic::new(
                here,
                "center dimension",
                format!("center {} has dim {}", z.label, z.dim),
            ));
        }
        if z.delta > 1 {
            out.push(Diagnostic::new(
                here,
                "delta in {0,1}",
                format!("center {} has delta {}", z.label, z.delta),
            ));
        }
        for p in z.proximities() {
            if !lat.centers[..i].iter().any(|c| &c.label == p) {
                out.push(Diagnostic::new(
                    here,
                    "proximity reference",
                    format!(
                        "center {} is proximate to {p}, which is not an earlier center",
                        z.label
                    ),
                ));
            }
        }
    }
    let mut ranks_ok = true;
    for (id, cls) in &lat.restrictions {
        if !data.has_divisor(id) {
            out.push(Diagnostic::new(
                here,
                "restriction reference",
                format!("restriction of undeclared divisor {id}"),
            ));
        }
        if cls.rank() != r {
            ranks_ok = false;
            out.push(Diagnostic::new(
                here,
                "class length",
                format!("class of {id} has length {}, expected {r}", cls.rank()),
            ));
        }
    }
    for g in &lat.effective_cone {
        if g.rank() != r {
            ranks_ok = false;
            out.push(Diagnostic::new(
                here,
                "class length",
                format!("cone generator {g:?} has length {}, expected {r}", g.rank()),
            ));
        }
    }
    for f in &lat.curve_families {
        if f.pairings.len() != r {
            out.push(Diagnostic::new(
                here,
                "pairing length",
                format!(
                    "family {} has {} pairings, expected {r}",
                    f.name,
                    f.pairings.len()
                ),
            ));
        }
        if f.pairings.iter().all(|&p| p == 0) {
            out.push(Diagnostic::new(
                here,
                "nonzero pairing",
                format!("family {} pairs to zero with everything", f.name),
            ));
        }
    }
    if !out.is_empty() || !ranks_ok {
        return out;
    }

    let mults = data.multiplicities();
    if let Some(hist) = &lat.history {
        for id in hist.components.keys().chain(hist.centers.keys()) {
            if !data.has_divisor(id) {
                out.push(Diagnostic::new(
                    here,
                    "history reference",
                    format!("history names undeclared divisor {id}"),
                ));
            }
        }
        for v in lattice::check_history(lat, hist, owner.mult, &mults) {
            out.push(Diagnostic::new(here, v.relation, v.message));
        }
        // History degrees must match the declared restriction classes.
        for (id, c) in &hist.components {
            if let Some(cls) = lat.restrictions.get(id) {
                let mut expected = vec![c.d];
                expected.extend(
                    lat.centers
                        .iter()
                        .map(|z| -c.mu.get(&z.label).copied().unwrap_or(0)),
                );
                if cls.0 != expected {
                    out.push(Diagnostic::new(
                        here,
                        "history matches restrictions",
                        format!(
                            "{id}|_{key} = {cls} but history gives {}",
                            PicClass(expected)
                        ),
                    ));
                }
            }
        }
    }

    // π*D|_E = 0.
    match lattice::self_class(data, key) {
        Ok(self_cls) => {
            let mut total = self_cls.scale(owner.mult);
            for (id, cls) in &lat.restrictions {
                if id == key {
                    continue;
                }
                total = total.add(&cls.scale(mults.get(id).copied().unwrap_or(0)));
            }
            if !total.is_zero() {
                out.push(Diagnostic::new(
                    here,
                    format!("π*D|_{key} = 0"),
                    format!("sum of a_i E_i|_{key} is {total}, not 0"),
                ));
            }
        }
        Err(Error::Configuration(_)) => {}
        Err(e) => out.push(Diagnostic::new(here, "self restriction", e.to_string())),
    }
    out
}

/// `E² = −(Σ_{F≠E} a_F (F·E)) / a_E` for every exceptional `E`.
pub fn self_intersections(data: &ResolutionData) -> Result<IndexMap<String, i64>> {
    data.require_surface()?;
    let mut out = IndexMap::new();
    for e in data.exceptional() {
        let mut s = 0;
        for (f, w) in data.neighbors(&e.id) {
            s += data.divisor(f)?.mult * w;
        }
        if s % e.mult != 0 {
            return Err(Error::Inconsistent(format!(
                "π*C·{id} ≠ 0: sum a_F (F·{id}) = {s} is not divisible by a_{id} = {a}",
                id = e.id,
                a = e.mult
            )));
        }
        out.insert(e.id.clone(), -s / e.mult);
    }
    Ok(out)
}
