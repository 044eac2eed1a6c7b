//! Least-absolute-deviations fitting for two-column regressions.
//!
//! Minimizes `F(a, b) = Σ_q |y_q − a·x1_q − b·x2_q|`. Two routes are
//! implemented:
//!
//! * **IRLS** — iteratively reweighted least squares on the smoothed
//!   objective `Σ sqrt(r² + ε²)` with `ε = 1e-8`. Cheap and good to several
//!   digits, but only heuristically convergent on the non-smooth problem.
//! * **Exact** — a vertex walk (the simplex method specialized to two
//!   columns). Some optimal point of the piecewise-linear convex objective
//!   interpolates two observations, so the solver moves from one such vertex
//!   to a better one until a dual certificate proves global optimality.
//!   The certificate is exact even at degenerate vertices: with `Z` the set
//!   of interpolated rows and `g` the signed sum of the remaining columns,
//!   the point is optimal iff `−g` lies in the zonotope
//!   `{Σ_{q∈Z} v_q·x_q : |v_q| ≤ 1}`; since a 2-D zonotope's facets are
//!   parallel to its generators, testing the support inequality along each
//!   generator's normal decides membership exactly. A violated normal is
//!   itself a strict descent direction along the edge that keeps that
//!   generator's row interpolated; the exact minimizer along the edge is a
//!   weighted median of breakpoints, which lands on the next vertex.
//!
//! The default `Auto` mode warm-starts the vertex walk from a few IRLS steps
//! and certifies the result exactly for problem sizes up to 4096 rows,
//! falling back to plain IRLS above that. Everything is deterministic: ties
//! break on index order, and no randomness is involved.

/// Solver route selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadAlgorithm {
    /// Smoothed iteratively reweighted least squares only.
    Irls,
    /// IRLS warm start plus the certified vertex walk.
    Exact,
    /// `Exact` up to 4096 rows, `Irls` beyond.
    Auto,
}

/// Solver knobs.
#[derive(Debug, Clone, Copy)]
pub struct LadOptions {
    /// Relative objective-change tolerance for the IRLS stopping rule.
    pub tol: f64,
    /// IRLS iteration cap.
    pub max_iterations: usize,
    /// Route selection.
    pub algorithm: LadAlgorithm,
}

impl Default for LadOptions {
    fn default() -> Self {
        LadOptions {
            tol: 1e-8,
            max_iterations: 200,
            algorithm: LadAlgorithm::Auto,
        }
    }
}

/// Result of an L1 fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadFit {
    /// Fitted coefficient pair `(a, b)`.
    pub beta: (f64, f64),
    /// Achieved L1 objective `Σ|residual|`.
    pub objective: f64,
    /// IRLS iterations plus vertex pivots.
    pub iterations: usize,
    /// True when the stopping contract held: dual certificate for the exact
    /// route, objective-change tolerance for IRLS. A `false` fit still
    /// carries the best iterate found.
    pub converged: bool,
}

/// Smoothing constant of the IRLS objective.
const IRLS_EPSILON: f64 = 1e-8;
/// Largest row count the `Auto` route certifies exactly.
const EXACT_MAX_ROWS: usize = 4096;
/// Dual-feasibility slack: multipliers up to `1 + CERT_SLACK` pass.
const CERT_SLACK: f64 = 1e-9;
/// Relative determinant floor when picking interpolation pairs.
const DET_TOL: f64 = 1e-9;

/// L1 objective at `(a, b)`.
fn l1_objective(x1: &[f64], x2: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    let mut acc = 0.0;
    for q in 0..y.len() {
        acc += (y[q] - a * x1[q] - b * x2[q]).abs();
    }
    acc
}

/// Solves the 2×2 system `[[m11, m12], [m21, m22]]·v = [r1, r2]`.
fn solve_2x2(m11: f64, m12: f64, m21: f64, m22: f64, r1: f64, r2: f64) -> Option<(f64, f64)> {
    let det = m11 * m22 - m12 * m21;
    let scale = (m11.abs() + m12.abs()) * (m21.abs() + m22.abs());
    if det.abs() <= f64::MIN_POSITIVE.max(1e-300) || det.abs() < 1e-15 * scale {
        return None;
    }
    Some(((r1 * m22 - r2 * m12) / det, (m11 * r2 - m21 * r1) / det))
}

/// Weighted least squares via the 2×2 normal equations.
fn weighted_ls(x1: &[f64], x2: &[f64], y: &[f64], w: Option<&[f64]>) -> Option<(f64, f64)> {
    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for q in 0..y.len() {
        let wq = w.map_or(1.0, |w| w[q]);
        s11 += wq * x1[q] * x1[q];
        s12 += wq * x1[q] * x2[q];
        s22 += wq * x2[q] * x2[q];
        s1y += wq * x1[q] * y[q];
        s2y += wq * x2[q] * y[q];
    }
    solve_2x2(s11, s12, s12, s22, s1y, s2y)
}

/// IRLS on the ε-smoothed objective. Returns the best iterate by true L1
/// objective, the iteration count, and whether the change tolerance was met.
fn irls(x1: &[f64], x2: &[f64], y: &[f64], tol: f64, cap: usize) -> ((f64, f64), f64, usize, bool) {
    let n = y.len();
    // Objective at beta = 0; a fit whose objective is negligible relative to
    // this has interpolated the data, and the relative-change rule (which
    // compares round-off against round-off there) must not be consulted.
    let obj0: f64 = y.iter().map(|v| v.abs()).sum();
    let floor = 1e-13 * obj0;

    let mut beta = weighted_ls(x1, x2, y, None).unwrap_or((0.0, 0.0));
    let mut obj = l1_objective(x1, x2, y, beta.0, beta.1);
    let (mut best_beta, mut best_obj) = (beta, obj);
    let mut weights = vec![0.0; n];
    let mut converged = obj <= floor;
    let mut iterations = 0;

    while !converged && iterations < cap {
        iterations += 1;
        for q in 0..n {
            let r = y[q] - beta.0 * x1[q] - beta.1 * x2[q];
            weights[q] = 1.0 / (r * r + IRLS_EPSILON * IRLS_EPSILON).sqrt();
        }
        let Some(next) = weighted_ls(x1, x2, y, Some(&weights)) else {
            break;
        };
        let next_obj = l1_objective(x1, x2, y, next.0, next.1);
        if next_obj < best_obj {
            best_beta = next;
            best_obj = next_obj;
        }
        let change = (obj - next_obj).abs();
        beta = next;
        obj = next_obj;
        if obj <= floor || change <= tol * obj.max(floor) {
            converged = true;
        }
    }
    (best_beta, best_obj, iterations, converged)
}

/// Residual sign with a dead zone for numerically-zero residuals.
fn residual_sign(r: f64, zero_tol: f64) -> f64 {
    if r > zero_tol {
        1.0
    } else if r < -zero_tol {
        -1.0
    } else {
        0.0
    }
}

/// State of the vertex walk: the two interpolated row indices.
struct Vertex {
    i: usize,
    j: usize,
}

/// Certified vertex walk, warm-started near `beta0`.
///
/// Returns `(beta, objective, pivots, certified)`; `certified` means the dual
/// certificate held, i.e. the point is a global minimizer of the L1 problem.
fn exact_walk(
    x1: &[f64],
    x2: &[f64],
    y: &[f64],
    beta0: (f64, f64),
    pivot_cap: usize,
) -> ((f64, f64), f64, usize, bool) {
    let n = y.len();
    let col_scale = (0..n)
        .map(|q| x1[q].hypot(x2[q]))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let y_scale = y.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let zero_tol = 1e-11 * y_scale;

    let dependent = |p: usize, q: usize| -> bool {
        let det = x1[p] * x2[q] - x1[q] * x2[p];
        det.abs() <= DET_TOL * (x1[p].hypot(x2[p])) * (x1[q].hypot(x2[q]))
    };

    // Initial vertex: the two smallest-|residual| rows that are independent.
    let mut order: Vec<usize> = (0..n).collect();
    let key = |q: usize| (y[q] - beta0.0 * x1[q] - beta0.1 * x2[q]).abs();
    order.sort_by(|&p, &q| key(p).total_cmp(&key(q)).then(p.cmp(&q)));
    let mut vertex: Option<Vertex> = None;
    'anchors: for ai in 0..order.len().min(4) {
        for &cand in order.iter().skip(ai + 1) {
            if !dependent(order[ai], cand) {
                vertex = Some(Vertex {
                    i: order[ai],
                    j: cand,
                });
                break 'anchors;
            }
        }
    }
    let Some(mut vertex) = vertex else {
        // Rank-deficient design; nothing to certify.
        let obj = l1_objective(x1, x2, y, beta0.0, beta0.1);
        return (beta0, obj, 0, false);
    };

    let fallback_obj = l1_objective(x1, x2, y, beta0.0, beta0.1);
    let (mut best_beta, mut best_obj) = (beta0, fallback_obj);
    let mut residuals = vec![0.0; n];
    let mut active: Vec<usize> = Vec::new();
    let mut prev_obj = f64::INFINITY;
    let mut no_progress = 0usize;
    let mut pivots = 0usize;

    for _ in 0..pivot_cap {
        let (i, j) = (vertex.i, vertex.j);
        let Some(beta) = solve_2x2(x1[i], x2[i], x1[j], x2[j], y[i], y[j]) else {
            return (best_beta, best_obj, pivots, false);
        };

        let mut obj = 0.0;
        for q in 0..n {
            let r = if q == i || q == j {
                0.0
            } else {
                y[q] - beta.0 * x1[q] - beta.1 * x2[q]
            };
            residuals[q] = r;
            obj += r.abs();
        }
        if obj < best_obj {
            best_beta = beta;
            best_obj = obj;
        }

        // Optimality certificate. `active` holds every interpolated row (the
        // basis pair and any further zero residuals — it depends only on the
        // point, not on which pair is called the basis), `g` the signed sum
        // of the remaining columns. The point is optimal iff −g lies in the
        // zonotope {Σ_{q∈active} v_q·x_q : |v_q| ≤ 1}. The facets of a 2-D
        // zonotope are parallel to its generators, so it is enough to test
        // the support inequality |g·n̂_q| ≤ Σ_p |x_p·n̂_q| along each
        // generator's unit normal n̂_q.
        active.clear();
        let (mut g1, mut g2) = (0.0, 0.0);
        for q in 0..n {
            let s = residual_sign(residuals[q], zero_tol);
            if s == 0.0 {
                active.push(q);
            } else {
                g1 += s * x1[q];
                g2 += s * x2[q];
            }
        }

        let mut worst_viol = f64::NEG_INFINITY;
        let mut keep = usize::MAX;
        let mut dir = (0.0, 0.0);
        let mut cert_scale = g1.hypot(g2);
        for &q in &active {
            let norm_q = x1[q].hypot(x2[q]);
            if norm_q <= DET_TOL * col_scale {
                continue;
            }
            let nq = (-x2[q] / norm_q, x1[q] / norm_q);
            let g_n = g1 * nq.0 + g2 * nq.1;
            let support: f64 = active
                .iter()
                .map(|&p| (x1[p] * nq.0 + x2[p] * nq.1).abs())
                .sum();
            cert_scale = cert_scale.max(support);
            let viol = g_n.abs() - support;
            if viol > worst_viol {
                worst_viol = viol;
                keep = q;
                let s = if g_n > 0.0 { 1.0 } else { -1.0 };
                dir = (s * nq.0, s * nq.1);
            }
        }
        let slack = CERT_SLACK * (1.0 + cert_scale);
        if keep == usize::MAX {
            // No usable generator (all active columns ~0): optimal iff g ~ 0.
            let ok = g1.hypot(g2) <= slack;
            return if ok {
                (beta, obj, pivots, true)
            } else {
                (best_beta, best_obj, pivots, false)
            };
        }
        if worst_viol <= slack {
            return (beta, obj, pivots, true);
        }

        // The violated normal is a strict descent direction keeping row
        // `keep` interpolated: the line minimum of Σ|r_q − t·(x_q·d)| is a
        // weighted median of the breakpoints t_q = r_q/(x_q·d) with weights
        // |x_q·d|.
        let step_tol = 1e-13 * col_scale;
        let mut breaks: Vec<(f64, f64, usize)> = Vec::with_capacity(n);
        let mut total_weight = 0.0;
        for q in 0..n {
            if q == keep {
                continue;
            }
            let a = x1[q] * dir.0 + x2[q] * dir.1;
            if a.abs() > step_tol {
                breaks.push((residuals[q] / a, a.abs(), q));
                total_weight += a.abs();
            }
        }
        if breaks.is_empty() {
            return (best_beta, best_obj, pivots, false);
        }
        breaks.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.2.cmp(&q.2)));
        let mut cum = 0.0;
        let mut entering = breaks[breaks.len() - 1].2;
        for &(_, w, q) in &breaks {
            cum += w;
            if cum >= total_weight / 2.0 {
                entering = q;
                break;
            }
        }

        // Each pivot must strictly descend; repeated failure to do so means
        // floating-point round-off has pinned the walk, so stop honestly
        // rather than certify.
        if obj >= prev_obj - 1e-12 * (1.0 + prev_obj) {
            no_progress += 1;
            if no_progress > 4 {
                return (best_beta, best_obj, pivots, false);
            }
        } else {
            no_progress = 0;
        }
        prev_obj = obj;
        vertex = Vertex {
            i: entering,
            j: keep,
        };
        pivots += 1;
    }
    (best_beta, best_obj, pivots, false)
}

/// Fits `y ≈ a·x1 + b·x2` under the L1 loss.
///
/// All three slices must share a length. Deterministic for fixed inputs; the
/// minimizer set of an L1 problem can be a segment, in which case the
/// documented behavior is simply "the vertex this walk certifies first",
/// which is stable across runs.
pub fn l1_fit(x1: &[f64], x2: &[f64], y: &[f64], opts: &LadOptions) -> LadFit {
    assert_eq!(x1.len(), y.len(), "column x1 length mismatch");
    assert_eq!(x2.len(), y.len(), "column x2 length mismatch");
    let n = y.len();
    if n == 0 {
        return LadFit {
            beta: (0.0, 0.0),
            objective: 0.0,
            iterations: 0,
            converged: true,
        };
    }

    let exact = match opts.algorithm {
        LadAlgorithm::Exact => true,
        LadAlgorithm::Irls => false,
        LadAlgorithm::Auto => n <= EXACT_MAX_ROWS,
    };

    if exact {
        // A short warm start positions the walk next to the optimum; the
        // certificate does the real work.
        let warm_cap = opts.max_iterations.min(60);
        let (warm, _, warm_iters, _) = irls(x1, x2, y, 1e-6, warm_cap);
        let pivot_cap = 4 * n + 32;
        let (beta, objective, pivots, certified) = exact_walk(x1, x2, y, warm, pivot_cap);
        LadFit {
            beta,
            objective,
            iterations: warm_iters + pivots,
            converged: certified,
        }
    } else {
        let (beta, objective, iterations, converged) =
            irls(x1, x2, y, opts.tol, opts.max_iterations);
        LadFit {
            beta,
            objective,
            iterations,
            converged,
        }
    }
}
