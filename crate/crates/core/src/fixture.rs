//! JSON fixture files: strict parsing, validation, emission, and the
//! `x^p = y^q` generator.

use std::collections::BTreeMap;
use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BlowupHistory, Center, CurveFamily, ExcDivLattice, LatticeFlags, PicClass};
use crate::model::{
    self, DivisorKind, DualGraphEdge, PrimeDivisor, ResolutionData, ResolutionFlags,
};

/// Colon-separated directories searched for relative fixture paths that do not exist as given.
pub const SEARCH_PATH_VAR: &str = "JUMPNUM_FIXTURE_PATH";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeEntry {
    pub n: i64,
    #[serde(default)]
    pub centers: Vec<Center>,
    #[serde(default)]
    pub restrictions: IndexMap<String, PicClass>,
    #[serde(default)]
    pub effective_cone: Vec<PicClass>,
    #[serde(default)]
    pub curve_families: Vec<CurveFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup_history: Option<BlowupHistory>,
    #[serde(default)]
    pub flags: LatticeFlags,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub ambient_dim: i64,
    pub divisors: Vec<PrimeDivisor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_graph: Option<Vec<DualGraphEdge>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub lattices: IndexMap<String, LatticeEntry>,
    #[serde(default)]
    pub flags: ResolutionFlags,
    #[serde(default)]
    pub provenance: String,
    /// Output of `report --format json`; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

impl FixtureFile {
    pub fn into_data(self) -> ResolutionData {
        ResolutionData {
            ambient_dim: self.ambient_dim,
            divisors: self.divisors,
            dual_graph: self.dual_graph,
            lattices: self
                .lattices
                .into_iter()
                .map(|(id, l)| {
                    let lat = ExcDivLattice {
                        divisor_id: id.clone(),
                        n: l.n,
                        centers: l.centers,
                        restrictions: l.restrictions,
                        effective_cone: l.effective_cone,
                        curve_families: l.curve_families,
                        history: l.blowup_history,
                        flags: l.flags,
                    };
                    (id, lat)
                })
                .collect(),
            flags: self.flags,
            provenance: self.provenance,
        }
    }

    pub fn from_data(data: &ResolutionData) -> Self {
        FixtureFile {
            ambient_dim: data.ambient_dim,
            divisors: data.divisors.clone(),
            dual_graph: data.dual_graph.clone(),
            lattices: data
                .lattices
                .iter()
                .map(|(id, l)| {
                    let entry = LatticeEntry {
                        n: l.n,
                        centers: l.centers.clone(),
                        restrictions: l.restrictions.clone(),
                        effective_cone: l.effective_cone.clone(),
                        curve_families: l.curve_families.clone(),
                        blowup_history: l.history.clone(),
                        flags: l.flags.clone(),
                    };
                    (id.clone(), entry)
                })
                .collect(),
            flags: data.flags.clone(),
            provenance: data.provenance.clone(),
            report: None,
        }
    }
}

/// Parse fixture text without validating it. `origin` prefixes error positions.
pub fn parse_str(text: &str, origin: &str) -> Result<ResolutionData> {
    if text.trim().is_empty() {
        return Err(Error::Parse(format!("{origin}: empty fixture")));
    }
    let file: FixtureFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    Ok(file.into_data())
}

/// `path` as given if it exists, else the first match under the search path.
pub fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    if let Some(dirs) = env::var_os(SEARCH_PATH_VAR) {
        for dir in env::split_paths(&dirs) {
            let p = dir.join(path);
            if p.exists() {
                return p;
            }
        }
    }
    path.to_path_buf()
}

pub fn read(path: &Path) -> Result<ResolutionData> {
    let path = resolve(path);
    let text = fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_str(&text, &path.display().to_string())
}

/// Read and validate; any diagnostic is an error unless `force`.
pub fn load(path: &Path, force: bool) -> Result<ResolutionData> {
    let data = read(path)?;
    let diags = model::validate(&data);
    if !diags.is_empty() && !force {
        return Err(Error::Invalid(
            diags.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(data)
}

pub fn to_json(data: &ResolutionData, report: Option<serde_json::Value>) -> String {
    let mut file = FixtureFile::from_data(data);
    file.report = report;
    serde_json::to_string_pretty(&file).expect("fixture serializes")
}

/// Minimal embedded resolution of `x^p = y^q` (coprime `p, q ≥ 2`) by
/// repeated point blow-ups.
pub fn xpyq(p: i64, q: i64) -> Result<ResolutionData> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::Precondition(format!(
            "x^p = y^q needs coprime p, q >= 2, got p = {p}, q = {q}"
        )));
    }
    let mut divisors: Vec<PrimeDivisor> = Vec::new();
    // Unordered pairs with their intersection number.
    let mut edges: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    // Local equation u^alpha = v^beta; u = 0 is `ud`, v = 0 is `vd` (when exceptional).
    let (mut alpha, mut beta) = (p, q);
    let (mut ud, mut vd): (Option<usize>, Option<usize>) = (None, None);
    let mut curve_meets: Option<usize> = None;

    let mut blow_up =
        |alpha: i64, ud: Option<usize>, vd: Option<usize>, divisors: &mut Vec<PrimeDivisor>| {
            let a = ud.map_or(0, |i| divisors[i].mult) + vd.map_or(0, |i| divisors[i].mult) + alpha;
            let k = ud.map_or(0, |i| divisors[i].discrepancy)
                + vd.map_or(0, |i| divisors[i].discrepancy)
                + 1;
            let idx = divisors.len();
            divisors.push(PrimeDivisor {
                id: format!("E{}", idx + 1),
                name: String::new(),
                mult: a,
                discrepancy: k,
                kind: DivisorKind::Exceptional,
            });
            for old in [ud, vd].into_iter().flatten() {
                edges.insert(key(idx, old), 1);
            }
            if let (Some(u), Some(v)) = (ud, vd) {
                edges.remove(&key(u, v));
            }
            idx
        };

    loop {
        if alpha > beta {
            std::mem::swap(&mut alpha, &mut beta);
            std::mem::swap(&mut ud, &mut vd);
        }
        if alpha == 1 {
            if beta == 1 {
                match (ud, vd) {
                    (Some(_), Some(_)) => curve_meets = Some(blow_up(1, ud, vd, &mut divisors)),
                    (Some(x), None) | (None, Some(x)) => curve_meets = Some(x),
                    (None, None) => {}
                }
                break;
            }
            if ud.is_none() {
                curve_meets = vd;
                break;
            }
        }
        let new = blow_up(alpha, ud, vd, &mut divisors);
        beta -= alpha;
        vd = Some(new);
    }

    let mut dual_graph: Vec<DualGraphEdge> = edges
        .into_iter()
        .map(|((a, b), w)| DualGraphEdge {
            a: divisors[a].id.clone(),
            b: divisors[b].id.clone(),
            intersection: w,
        })
        .collect();
    if let Some(x) = curve_meets {
        dual_graph.push(DualGraphEdge {
            a: divisors[x].id.clone(),
            b: "C".into(),
            intersection: 1,
        });
    }
    divisors.push(PrimeDivisor {
        id: "C".into(),
        name: format!("x^{p} = y^{q}"),
        mult: 1,
        discrepancy: 0,
        kind: DivisorKind::StrictTransform,
    });
    Ok(ResolutionData {
        ambient_dim: 2,
        divisors,
        dual_graph: Some(dual_graph),
        lattices: IndexMap::new(),
        flags: ResolutionFlags {
            minimal_resolution: true,
        },
        provenance: format!(
            "generated: minimal embedded resolution of x^{p} = y^{q} by Euclidean point blow-ups"
        ),
    })
}
