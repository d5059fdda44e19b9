#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use indexmap::IndexMap;
use jumpnum::fixture;
use jumpnum::lattice::{
    BlowupHistory, Center, ComponentHistory, CurveFamily, ExcDivLattice, LatticeFlags, PicClass,
};
use jumpnum::model::{DivisorKind, DualGraphEdge, PrimeDivisor, ResolutionData, ResolutionFlags};
use jumpnum::Rational;

pub const FIXTURES: [&str; 10] = [
    "ex45",
    "ex61",
    "ex62_d5",
    "sec7",
    "cusp",
    "x2y5",
    "node",
    "triple",
    "smooth",
    "point_blowup",
];

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

pub fn load(name: &str) -> ResolutionData {
    fixture::load(&fixture_path(name), false).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn all_fixtures() -> Vec<(&'static str, ResolutionData)> {
    FIXTURES.iter().map(|n| (*n, load(n))).collect()
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_jumpnum"))
        .args(args)
        .env_remove(fixture::SEARCH_PATH_VAR)
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

pub fn parse_list(s: &str) -> Vec<Rational> {
    s.trim()
        .split(", ")
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().unwrap())
        .collect()
}

/// `{i/p + j/q : i, j ≥ 1} ∩ (0, 1)` together with 1.
pub fn xpyq_oracle(p: i64, q: i64) -> BTreeSet<Rational> {
    let mut out = BTreeSet::new();
    for i in 1..p {
        for j in 1..q {
            let v = r(i, p) + r(j, q);
            if v < Rational::one() {
                out.insert(v);
            }
        }
    }
    out.insert(Rational::one());
    out
}

fn div(id: &str, a: i64, k: i64, kind: DivisorKind) -> PrimeDivisor {
    PrimeDivisor {
        id: id.into(),
        name: String::new(),
        mult: a,
        discrepancy: k,
        kind,
    }
}

/// One non-center component of `E°` on `E`.
#[derive(Clone, Debug)]
pub struct Component {
    pub d: i64,
    pub b: i64,
    pub m: i64,
    pub mu: Vec<i64>,
}

/// `E ≅ ℙ^{n−1}` blown up at `centers` disjoint points (`n = 3` when centers
/// are present), meeting components of degree `d_j`, point multiplicities
/// `μ_jl` and `a_j = m_j a + b_j` with `a = Σ d_j b_j`.
pub fn projective_case(n: i64, comps: &[Component], centers: usize) -> Option<ResolutionData> {
    let a: i64 = comps.iter().map(|c| c.d * c.b).sum();
    if a < 2 {
        return None;
    }
    let rank = 1 + centers;
    let mut divisors = vec![div("E", a, n - 1, DivisorKind::Exceptional)];
    let mut restrictions = IndexMap::new();
    let mut history = BlowupHistory::default();
    let dm: i64 = comps.iter().map(|c| c.d * c.m).sum();
    let mut self_cls = vec![0; rank];
    self_cls[0] = -(1 + dm);
    restrictions.insert("E".to_string(), PicClass(self_cls));
    let mut edges = Vec::new();
    for (j, c) in comps.iter().enumerate() {
        let id = format!("D{}", j + 1);
        divisors.push(div(&id, c.m * a + c.b, 0, DivisorKind::StrictTransform));
        let mut cls = vec![c.d];
        cls.extend(c.mu.iter().map(|m| -m));
        restrictions.insert(id.clone(), PicClass(cls));
        let mut mu = IndexMap::new();
        for (l, &m) in c.mu.iter().enumerate() {
            mu.insert(format!("Z{}", l + 1), m);
        }
        history.components.insert(
            id.clone(),
            ComponentHistory {
                d: c.d,
                mu,
                m: c.m,
                m_after: IndexMap::new(),
            },
        );
        edges.push(DualGraphEdge {
            a: "E".into(),
            b: id,
            intersection: c.d,
        });
    }
    let mut center_list = Vec::new();
    for l in 0..centers {
        let id = format!("Z{}", l + 1);
        let al: i64 = comps.iter().map(|c| c.mu[l] * (c.m * a + c.b)).sum();
        if al < 1 {
            return None;
        }
        divisors.push(div(&id, al, 2, DivisorKind::Exceptional));
        restrictions.insert(id.clone(), PicClass::exceptional(rank, l));
        center_list.push(Center {
            label: id,
            dim: 0,
            delta: 0,
            infinitely_near_parent: None,
            proximate_to: vec![],
        });
    }
    let mut line = vec![0; rank];
    line[0] = 1;
    let lat = ExcDivLattice {
        divisor_id: "E".into(),
        n,
        centers: center_list,
        restrictions,
        effective_cone: vec![],
        curve_families: vec![CurveFamily {
            name: "line".into(),
            pairings: line,
        }],
        history: Some(history),
        flags: LatticeFlags {
            created_by_point_blowup: true,
            centers_in_hyperplane: centers > 0,
            minimal_resolution: false,
            effectivity_as_q_divisor: true,
        },
    };
    let mut lattices = IndexMap::new();
    lattices.insert("E".to_string(), lat);
    Some(ResolutionData {
        ambient_dim: n,
        divisors,
        dual_graph: (n == 2).then_some(edges),
        lattices,
        flags: ResolutionFlags::default(),
        provenance: "randomized consistent history".into(),
    })
}

/// Deterministic draws of `(n, components, centers)` for [`projective_case`].
/// On surfaces `m_j = 0`, since `E` is then a first blow-up and must satisfy adjunction.
pub fn random_projective_cases(count: usize, with_centers: bool, seed: u64) -> Vec<ResolutionData> {
    use proptest::strategy::{Strategy, ValueTree};
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::from_seed(RngAlgorithm::ChaCha, &bytes),
    );
    let strategy = (
        2i64..=4,
        0usize..=2,
        proptest::collection::vec((1i64..=4, 1i64..=4, 0i64..=2, 0i64..=3, 0i64..=3), 1..=4),
    );
    let mut out = Vec::new();
    while out.len() < count {
        let (n, nc, raw) = strategy.new_tree(&mut runner).unwrap().current();
        let (n, centers) = if with_centers { (3, nc.max(1)) } else { (n, 0) };
        let comps: Vec<Component> = raw
            .into_iter()
            .map(|(d, b, m, m1, m2)| Component {
                d,
                b,
                m: if n == 2 { 0 } else { m },
                mu: vec![m1.min(d), m2.min(d)][..centers].to_vec(),
            })
            .collect();
        if let Some(data) = projective_case(n, &comps, centers) {
            out.push(data);
        }
    }
    out
}

/// Componentwise minimum of all antinef divisors `≥ div` inside a box, found by enumeration.
pub fn brute_closure(
    data: &ResolutionData,
    div: &IndexMap<String, i64>,
    bound: i64,
) -> Option<IndexMap<String, i64>> {
    let exc: Vec<String> = data.exceptional().map(|d| d.id.clone()).collect();
    let si = jumpnum::model::self_intersections(data).unwrap();
    let base: Vec<i64> = exc
        .iter()
        .map(|e| div.get(e).copied().unwrap_or(0))
        .collect();
    let mut best: Option<Vec<i64>> = None;
    let mut cur = base.clone();
    loop {
        let coeff = |id: &str| -> i64 {
            match exc.iter().position(|e| e == id) {
                Some(i) => cur[i],
                None => div.get(id).copied().unwrap_or(0),
            }
        };
        let antinef = exc.iter().all(|e| {
            let s: i64 =
                coeff(e) * si[e] + data.neighbors(e).map(|(f, w)| coeff(f) * w).sum::<i64>();
            s <= 0
        });
        if antinef {
            best = Some(match best {
                None => cur.clone(),
                Some(b) => b.iter().zip(&cur).map(|(x, y)| *x.min(y)).collect(),
            });
        }
        // Odometer over base[i] ..= bound.
        let mut i = 0;
        loop {
            if i == cur.len() {
                return best.map(|b| {
                    let mut out: IndexMap<String, i64> = data
                        .divisors
                        .iter()
                        .map(|d| (d.id.clone(), div.get(&d.id).copied().unwrap_or(0)))
                        .collect();
                    for (e, v) in exc.iter().zip(b) {
                        out[e] = v;
                    }
                    out
                });
            }
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = base[i];
            i += 1;
        }
    }
}
