//! Sign-pattern linear program: `min Σ τ_p` subject to
//! `Σ_p τ_p s_p,k s_p,l = w_kl` for every pair and `τ ≥ 0`.

use serde::Serialize;

use crate::config::Config;
use crate::model::{SignInterval, SignSchedule, WeightedGraph};

use super::PlanError;

/// Pivot limit across both phases.
pub const MAX_PIVOTS: usize = 1_000_000;

const PIVOT_EPS: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const STALL_LIMIT: usize = 50;
const COST_EPS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    IterationCap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpSolution {
    pub mu: f64,
    #[serde(skip)]
    pub schedule: SignSchedule,
    /// Sign-pattern indices with positive duration, ascending.
    pub basis: Vec<usize>,
    pub status: LpStatus,
    pub pivots: usize,
    /// Dual prices per pair row (pairs in lexicographic order).
    pub dual: Vec<f64>,
}

/// Signs of pattern `p`: qubit 0 is `+`, qubit `i ≥ 1` is `−` when bit
/// `i − 1` of `p` is set.
pub fn pattern_signs(p: usize, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if i > 0 && (p >> (i - 1)) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// Index of a sign vector's class under global flip.
pub fn pattern_index(signs: &[i8]) -> usize {
    let flip = signs.first().copied().unwrap_or(1) < 0;
    signs
        .iter()
        .skip(1)
        .enumerate()
        .filter(|(_, &s)| (s < 0) != flip)
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Pairs `(k, l)`, `k < l`, in row order.
pub fn pair_rows(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|k| ((k + 1)..n).map(move |l| (k, l))).collect()
}

/// Column of pattern `p`: the sign products `s_k s_l` in row order.
fn column(p: usize, rows: &[(usize, usize)]) -> Vec<f64> {
    rows.iter()
        .map(|&(k, l)| {
            let bk = k > 0 && (p >> (k - 1)) & 1 == 1;
            let bl = (p >> (l - 1)) & 1 == 1;
            if bk == bl {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

/// Right-hand side offsets that break the degeneracy of absent edges.
fn perturbation(i: usize) -> f64 {
    PERTURB * (1.0 + (i as f64 * 0.618_033_988_749_895).fract())
}

const PERTURB: f64 = 1e-7;

/// Pivots between rebuilds of the tableau from the original rows, at least.
const REINVERT_EVERY: usize = 64;

struct Tableau {
    m: usize,
    width: usize,
    /// `m` constraint rows followed by the objective row; last column is the RHS.
    t: Vec<f64>,
    /// Constraint rows as first built.
    orig: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    since_reinvert: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.t[i * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.t[r * w + c];
        for x in &mut self.t[r * w..(r + 1) * w] {
            *x /= p;
        }
        let pivot_row: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * w..(i + 1) * w];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x -= f * pv;
            }
            row[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
        self.since_reinvert += 1;
    }

    /// Objective row `c − c_B B⁻¹ A` for the current rows and costs.
    fn price(&mut self) {
        let (m, w) = (self.m, self.width);
        for j in 0..w {
            let mut d = if j < w - 1 { self.cost[j] } else { 0.0 };
            for i in 0..m {
                d -= self.cost[self.basis[i]] * self.t[i * w + j];
            }
            self.t[m * w + j] = d;
        }
        for i in 0..m {
            self.t[m * w + self.basis[i]] = 0.0;
        }
    }

    /// Rebuilds `B⁻¹ [A | I | b]` from the original rows, discarding
    /// accumulated round-off.
    fn reinvert(&mut self) -> Result<(), PlanError> {
        let (m, w) = (self.m, self.width);
        let mut bm: Vec<Vec<f64>> = (0..m)
            .map(|i| self.basis.iter().map(|&c| self.orig[i * w + c]).collect())
            .collect();
        let mut rhs: Vec<Vec<f64>> = (0..m).map(|i| self.orig[i * w..(i + 1) * w].to_vec()).collect();
        for c in 0..m {
            let p = (c..m)
                .max_by(|&i, &j| bm[i][c].abs().total_cmp(&bm[j][c].abs()))
                .unwrap_or(c);
            if bm[p][c].abs() < 1e-12 {
                return Err(PlanError::Singular);
            }
            bm.swap(p, c);
            rhs.swap(p, c);
            let inv = 1.0 / bm[c][c];
            for x in bm[c].iter_mut() {
                *x *= inv;
            }
            for x in rhs[c].iter_mut() {
                *x *= inv;
            }
            let (prow, prhs) = (bm[c].clone(), rhs[c].clone());
            for r in 0..m {
                let f = bm[r][c];
                if r == c || f == 0.0 {
                    continue;
                }
                for (x, y) in bm[r].iter_mut().zip(&prow) {
                    *x -= f * y;
                }
                for (x, y) in rhs[r].iter_mut().zip(&prhs) {
                    *x -= f * y;
                }
            }
        }
        for (i, row) in rhs.iter().enumerate() {
            self.t[i * w..(i + 1) * w].copy_from_slice(row);
            self.t[i * w + self.basis[i]] = 1.0;
        }
        self.price();
        self.since_reinvert = 0;
        Ok(())
    }

    /// Dantzig pricing over columns `< allowed`, falling back to Bland's
    /// rule after a run of degenerate pivots. Returns `false` when the pivot
    /// cap is hit.
    fn run(&mut self, allowed: usize) -> Result<bool, PlanError> {
        let obj = self.m;
        let mut stalled = 0usize;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Ok(false);
            }
            if self.since_reinvert >= REINVERT_EVERY.max(2 * self.m) {
                self.reinvert()?;
            }
            let bland = stalled >= STALL_LIMIT;
            let entering = if bland {
                (0..allowed).find(|&j| self.at(obj, j) < -COST_EPS)
            } else {
                (0..allowed)
                    .filter(|&j| self.at(obj, j) < -COST_EPS)
                    .min_by(|&i, &j| self.at(obj, i).total_cmp(&self.at(obj, j)))
            };
            let Some(c) = entering else {
                if self.since_reinvert > 0 {
                    self.reinvert()?;
                    continue;
                }
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                        let better_tie = if bland {
                            self.basis[i] < self.basis[r]
                        } else {
                            a > self.at(r, c)
                        };
                        if ratio < best && !tie || tie && better_tie {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
            match leave {
                Some((r, ratio)) => {
                    stalled = if ratio <= 1e-12 { stalled + 1 } else { 0 };
                    self.pivot(r, c);
                }
                None if self.since_reinvert > 0 => self.reinvert()?,
                None => return Err(PlanError::Unbounded),
            }
        }
    }
}

impl Tableau {
    /// Dual simplex over columns `< allowed` until every basic value is
    /// nonnegative. Returns `false` when the pivot cap is hit.
    fn dual_run(&mut self, allowed: usize) -> Result<bool, PlanError> {
        let obj = self.m;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Ok(false);
            }
            if self.since_reinvert >= REINVERT_EVERY.max(2 * self.m) {
                self.reinvert()?;
            }
            let leaving = (0..self.m)
                .filter(|&i| self.rhs(i) < -1e-13)
                .min_by(|&i, &j| self.rhs(i).total_cmp(&self.rhs(j)));
            let Some(r) = leaving else {
                return Ok(true);
            };
            let entering = (0..allowed).filter(|&j| self.at(r, j) < -PIVOT_EPS).min_by(|&i, &j| {
                let ri = self.at(obj, i).max(0.0) / -self.at(r, i);
                let rj = self.at(obj, j).max(0.0) / -self.at(r, j);
                ri.total_cmp(&rj)
            });
            match entering {
                Some(c) => self.pivot(r, c),
                None if self.since_reinvert > 0 => self.reinvert()?,
                None => return Err(PlanError::Infeasible),
            }
        }
    }
}

/// Minimum-overhead sign schedule for a zz target against the complete
/// unit-weight drift, by two-phase dense simplex over all `2^(n−1)` sign
/// patterns. Dantzig pricing, Bland's rule once pivots stall.
pub fn optimal_zz_plan(target: &WeightedGraph, cfg: &Config) -> Result<LpSolution, PlanError> {
    let n = target.n();
    if n > cfg.lp_cap_n {
        return Err(PlanError::CapExceeded { n, cap: cfg.lp_cap_n });
    }
    let rows = pair_rows(n);
    let m = rows.len();
    let scale = target.max_abs_weight();
    if m == 0 || scale == 0.0 {
        return Ok(LpSolution {
            mu: 0.0,
            schedule: SignSchedule::new(n, Vec::new())?,
            basis: Vec::new(),
            status: LpStatus::Optimal,
            pivots: 0,
            dual: vec![0.0; m],
        });
    }
    let b: Vec<f64> = rows.iter().map(|&(k, l)| target.weight(k, l) / scale).collect();
    let cols = 1usize << (n - 1);
    let width = cols + m + 1;
    let mut tab = Tableau {
        m,
        width,
        t: vec![0.0; (m + 1) * width],
        orig: Vec::new(),
        cost: (0..width - 1).map(|j| if j >= cols { 1.0 } else { 0.0 }).collect(),
        basis: (cols..cols + m).collect(),
        pivots: 0,
        since_reinvert: 0,
    };
    for p in 0..cols {
        for (i, a) in column(p, &rows).into_iter().enumerate() {
            tab.t[i * width + p] = a;
        }
    }
    for i in 0..m {
        let flip = b[i] < 0.0;
        for j in 0..cols {
            if flip {
                tab.t[i * width + j] = -tab.t[i * width + j];
            }
        }
        tab.t[i * width + cols + i] = 1.0;
        tab.t[i * width + width - 1] = b[i].abs() + perturbation(i);
    }
    tab.orig = tab.t[..m * width].to_vec();
    // phase I objective: minimise the artificials
    tab.price();
    if !tab.run(cols + m)? {
        return Err(PlanError::IterationCap);
    }
    if -tab.t[m * width + width - 1] > 1e-9 {
        return Err(PlanError::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] >= cols {
            let best = (0..cols).max_by(|&i, &j| tab.at(r, i).abs().total_cmp(&tab.at(r, j).abs()));
            if let Some(c) = best.filter(|&c| tab.at(r, c).abs() > 1e-9) {
                tab.pivot(r, c);
            }
        }
    }
    // phase II objective: unit cost per structural column
    tab.cost = (0..width - 1).map(|j| if j < cols { 1.0 } else { 0.0 }).collect();
    tab.price();
    let mut finished = tab.run(cols)?;
    // drop the perturbation; the basis stays dual feasible
    for i in 0..m {
        tab.orig[i * width + width - 1] = b[i].abs();
    }
    tab.reinvert()?;
    finished = finished && tab.dual_run(cols)? && tab.run(cols)?;
    let status = if finished {
        LpStatus::Optimal
    } else {
        LpStatus::IterationCap
    };

    let (tau, dual) = refine(&tab.basis, cols, &rows, &b)?;
    let mut entries: Vec<(usize, f64)> = tab
        .basis
        .iter()
        .zip(&tau)
        .filter(|(&p, &t)| p < cols && t > 1e-12)
        .map(|(&p, &t)| (p, t * scale))
        .collect();
    entries.sort_by_key(|e| e.0);
    let intervals = entries
        .iter()
        .map(|&(p, t)| SignInterval {
            signs: pattern_signs(p, n),
            duration: t,
        })
        .collect();
    let schedule = SignSchedule::new(n, intervals)?;
    Ok(LpSolution {
        mu: schedule.overhead(),
        schedule,
        basis: entries.iter().map(|e| e.0).collect(),
        status,
        pivots: tab.pivots,
        dual,
    })
}

/// Re-solves `B τ = b` and `Bᵀ y = c_B` from the original columns for full
/// accuracy; tiny negative durations from round-off are clipped.
fn refine(basis: &[usize], cols: usize, rows: &[(usize, usize)], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>), PlanError> {
    let m = rows.len();
    let mut bm = vec![vec![0.0; m]; m];
    let mut cost = vec![0.0; m];
    for (j, &p) in basis.iter().enumerate() {
        let col = if p < cols {
            cost[j] = 1.0;
            column(p, rows)
        } else {
            let mut e = vec![0.0; m];
            e[p - cols] = 1.0;
            e
        };
        for i in 0..m {
            bm[i][j] = col[i];
        }
    }
    let tau = solve(&bm, b).ok_or(PlanError::Singular)?;
    let bt: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| bm[j][i]).collect()).collect();
    let y = solve(&bt, &cost).ok_or(PlanError::Singular)?;
    let tau = tau
        .into_iter()
        .map(|t| {
            if t < -1e-9 {
                Err(PlanError::Infeasible)
            } else {
                Ok(t.max(0.0))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((tau, y))
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = b.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut x = b.to_vec();
    for c in 0..m {
        let p = (c..m).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(p, c);
        x.swap(p, c);
        for r in (c + 1)..m {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..m {
                    a[r][k] -= f * a[c][k];
                }
                x[r] -= f * x[c];
            }
        }
    }
    for c in (0..m).rev() {
        let s: f64 = ((c + 1)..m).map(|k| a[c][k] * x[k]).sum();
        x[c] = (x[c] - s) / a[c][c];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::average_zz;

    fn plan(g: &WeightedGraph) -> LpSolution {
        optimal_zz_plan(g, &Config::default()).unwrap()
    }

    fn reproduces(sol: &LpSolution, g: &WeightedGraph) {
        let avg = average_zz(&sol.schedule, &WeightedGraph::complete(g.n())).unwrap();
        for (k, l) in pair_rows(g.n()) {
            assert!((avg.weight(k, l) - g.weight(k, l)).abs() < 1e-9, "pair ({k},{l})");
        }
    }

    #[test]
    fn pattern_round_trip() {
        for p in 0..16 {
            let s = pattern_signs(p, 5);
            assert_eq!(s[0], 1);
            assert_eq!(pattern_index(&s), p);
            let flipped: Vec<i8> = s.iter().map(|x| -x).collect();
            assert_eq!(pattern_index(&flipped), p);
        }
    }

    #[test]
    fn star_overhead_two() {
        let star = WeightedGraph::from_one_based(5, (2..=5).map(|l| (1, l, 1.0))).unwrap();
        let sol = plan(&star);
        assert!((sol.mu - 2.0).abs() < 1e-9);
        assert_eq!(sol.status, LpStatus::Optimal);
        reproduces(&sol, &star);
    }

    #[test]
    fn drift_itself_is_free() {
        let sol = plan(&WeightedGraph::complete(3));
        assert!((sol.mu - 1.0).abs() < 1e-12);
        assert_eq!(sol.schedule.intervals.len(), 1);
        assert_eq!(sol.schedule.intervals[0].sign_string(), "+++");
    }

    #[test]
    fn negative_k4_costs_three() {
        let sol = plan(&WeightedGraph::complete(4).negated());
        assert!((sol.mu - 3.0).abs() < 1e-9);
        reproduces(&sol, &WeightedGraph::complete(4).negated());
    }

    #[test]
    fn negative_k3_costs_three() {
        assert!((plan(&WeightedGraph::complete(3).negated()).mu - 3.0).abs() < 1e-9);
    }

    #[test]
    fn dual_certifies_optimum() {
        let g = WeightedGraph::new(4, [(0, 1, 0.3), (0, 2, -1.2), (1, 3, 0.8), (2, 3, 0.5)]).unwrap();
        let sol = plan(&g);
        let rows = pair_rows(4);
        let dual_obj: f64 = rows.iter().zip(&sol.dual).map(|(&(k, l), y)| g.weight(k, l) * y).sum();
        assert!((dual_obj - sol.mu).abs() < 1e-9);
        for p in 0..8 {
            let reduced: f64 = column(p, &rows).iter().zip(&sol.dual).map(|(a, y)| a * y).sum();
            assert!(reduced <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn trivial_registers() {
        assert_eq!(plan(&WeightedGraph::empty(1)).mu, 0.0);
        assert_eq!(plan(&WeightedGraph::empty(4)).mu, 0.0);
        let cfg = Config {
            lp_cap_n: 3,
            ..Config::default()
        };
        assert!(matches!(
            optimal_zz_plan(&WeightedGraph::complete(4), &cfg),
            Err(PlanError::CapExceeded { n: 4, cap: 3 })
        ));
    }
}
