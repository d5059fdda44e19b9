//! Exact membership in a finitely generated rational polyhedral cone.
//!
//! Decides whether `target = Σ x_g · g` has a solution with every `x_g ≥ 0`.
//! The equality system is reduced by Gauss–Jordan elimination; the remaining
//! sign constraints on the free variables are decided by Fourier–Motzkin
//! elimination, and a witness is recovered by back-substitution through the
//! stored elimination stages.

use crate::rational::Rational;

/// One inequality `coeffs · y <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    coeffs: Vec<Rational>,
    bound: Rational,
}

impl Row {
    /// Scale so the first nonzero entry (coefficients, then bound) has absolute value one.
    fn normalized(mut self) -> Row {
        let pivot = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.bound))
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        if let Some(p) = pivot {
            for c in self.coeffs.iter_mut() {
                *c = c.div(&p);
            }
            self.bound = self.bound.div(&p);
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }
}

/// Result of a membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Nonnegative multipliers, one per generator, reproducing the target.
    Inside(Vec<Rational>),
    Outside,
}

/// Decide whether `target` lies in the cone spanned by `generators`.
///
/// All vectors must share the target's length.
pub fn membership(generators: &[Vec<Rational>], target: &[Rational]) -> Membership {
    let dim = target.len();
    let ngen = generators.len();
    assert!(
        generators.iter().all(|g| g.len() == dim),
        "generator length mismatch"
    );

    // Augmented matrix [G | t], one row per coordinate.
    let mut m: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rational> = generators.iter().map(|g| g[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();

    // Reduced row echelon form.
    let mut pivots: Vec<usize> = Vec::new();
    let mut prow = 0;
    for col in 0..ngen {
        let Some(sel) = (prow..dim).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(prow, sel);
        let p = m[prow][col].clone();
        for c in 0..=ngen {
            m[prow][c] = m[prow][c].div(&p);
        }
        for r in 0..dim {
            if r != prow && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=ngen {
                    let delta = &f * &m[prow][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        prow += 1;
        if prow == dim {
            break;
        }
    }
    // Inconsistent equalities.
    if m[prow..].iter().any(|row| !row[ngen].is_zero()) {
        return Membership::Outside;
    }

    let free: Vec<usize> = (0..ngen).filter(|c| !pivots.contains(c)).collect();
    let nfree = free.len();

    // x_pivot = rhs - Σ m[r][f] y_f  >= 0   <=>   Σ m[r][f] y_f <= rhs
    // y_f >= 0                              <=>   -y_f <= 0
    let mut rows: Vec<Row> = Vec::new();
    for (r, _) in pivots.iter().enumerate() {
        rows.push(Row {
            coeffs: free.iter().map(|&f| m[r][f].clone()).collect(),
            bound: m[r][ngen].clone(),
        });
    }
    for i in 0..nfree {
        let mut coeffs = vec![Rational::zero(); nfree];
        coeffs[i] = Rational::from(-1);
        rows.push(Row {
            coeffs,
            bound: Rational::zero(),
        });
    }

    let Some(y) = fourier_motzkin(rows, nfree) else {
        return Membership::Outside;
    };

    let mut x = vec![Rational::zero(); ngen];
    for (i, &f) in free.iter().enumerate() {
        x[f] = y[i].clone();
    }
    for (r, &pc) in pivots.iter().enumerate() {
        let mut v = m[r][ngen].clone();
        for (i, &f) in free.iter().enumerate() {
            v = v - &m[r][f] * &y[i];
        }
        x[pc] = v;
    }
    debug_assert!(verify(generators, target, &x));
    Membership::Inside(x)
}

/// Check a claimed certificate: nonnegative multipliers reproducing the target.
pub fn verify(generators: &[Vec<Rational>], target: &[Rational], multipliers: &[Rational]) -> bool {
    if multipliers.len() != generators.len() || multipliers.iter().any(Rational::is_negative) {
        return false;
    }
    (0..target.len()).all(|r| {
        let sum = generators
            .iter()
            .zip(multipliers)
            .fold(Rational::zero(), |acc, (g, x)| acc + &g[r] * x);
        sum == target[r]
    })
}

/// Feasibility of `rows` over `nvars` variables; returns a feasible point.
fn fourier_motzkin(rows: Vec<Row>, nvars: usize) -> Option<Vec<Rational>> {
    let mut stages: Vec<Vec<Row>> = vec![dedup(rows)];
    for k in 0..nvars {
        let cur = stages.last().unwrap();
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for row in cur {
            if row.coeffs[k].is_positive() {
                pos.push(row);
            } else if row.coeffs[k].is_negative() {
                neg.push(row);
            } else {
                next.push(row.clone());
            }
        }
        for p in &pos {
            for n in &neg {
                let wp = -&n.coeffs[k];
                let wn = p.coeffs[k].clone();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| &wp * a + &wn * b)
                    .collect();
                let bound = &wp * &p.bound + &wn * &n.bound;
                next.push(Row { coeffs, bound });
            }
        }
        stages.push(dedup(next));
    }

    // No variables left: every row reads 0 <= bound.
    if stages[nvars].iter().any(|r| r.bound.is_negative()) {
        return None;
    }

    let mut y = vec![Rational::zero(); nvars];
    for k in (0..nvars).rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for row in &stages[k] {
            let a = &row.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let mut rest = row.bound.clone();
            for j in (k + 1)..nvars {
                rest = rest - &row.coeffs[j] * &y[j];
            }
            let v = rest.div(a);
            if a.is_positive() {
                hi = Some(match hi {
                    Some(h) if h <= v => h,
                    _ => v,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l >= v => l,
                    _ => v,
                });
            }
        }
        let val = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
        y[k] = val;
    }
    Some(y)
}

fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for r in rows.into_iter().map(Row::normalized) {
        if r.is_trivial() && !r.bound.is_negative() {
            continue;
        }
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}
