//! Lipschitz seminorms and certified metrics on state spaces.
//!
//! Three layers live here. The bottom layer is plain numerics: the order-unit
//! norm of a Hermitian operator is its spectral norm, and the Lipschitz
//! constant of a function is a maximum over element pairs. The middle layer
//! is the translation-induced seminorm on truncated operators,
//!
//! ```text
//! ‖T‖_λ = max_{g≠e} ‖λ_g(T) − T‖ / d(g, e)
//! ```
//!
//! (and the ρ version), where the reduction from a supremum over pairs to a
//! supremum over single elements uses unitarity of the conjugation and left
//! invariance of the metric; the pair form is kept alongside as a test
//! oracle. The top layer computes distances between states by maximizing
//! `(σ−τ)(T)` over the seminorm unit ball — each spectral-norm constraint is
//! outer-approximated by supporting hyperplanes from extreme eigenvectors,
//! an LP master problem supplies certified upper bounds, and rescaled
//! iterates supply feasible lower bounds, so every reported value carries a
//! bracketing gap.

use thiserror::Error;

use crate::group::{distance_profile, FiniteMetricGroup};
use crate::linalg::{hermitian_eigen, hermiticity_residual, spectral_norm_hermitian, CMat, CVec};
use crate::lp::{self, LpError};
use crate::truncation::{
    trace_prod_re, Action, RealFunction, TruncatedOperator, TruncationContext,
};

/// Hermiticity tolerance for operator-norm inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default certification tolerance for state metrics.
pub const DEFAULT_TOL: f64 = 1e-4;

/// Iteration cap for the cutting-plane loop.
pub const MAX_CUT_ITERATIONS: usize = 10_000;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("operator is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("not a probability vector: {0}")]
    BadMeasure(String),
    #[error("state/context dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Order-unit norm of a Hermitian operator: the largest absolute eigenvalue.
pub fn operator_norm(m: &CMat) -> Result<f64, MetricError> {
    let res = hermiticity_residual(m);
    if !(res <= HERMITIAN_TOL) {
        return Err(MetricError::NotHermitian(res));
    }
    Ok(spectral_norm_hermitian(m))
}

/// Lipschitz constant of a function: `max_{x≠y} |f(x)−f(y)| / d(x,y)`.
/// Zero exactly when the function is constant.
pub fn lip_norm_function(f: &RealFunction, g: &FiniteMetricGroup) -> f64 {
    let n = g.order;
    let mut best = 0.0f64;
    for x in 0..n {
        for y in x + 1..n {
            best = best.max((f.0[x] - f.0[y]).abs() / g.dist(x, y));
        }
    }
    best
}

/// Which translation actions enter the operator seminorm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipMode {
    OperatorLeft,
    OperatorRight,
    OperatorBoth,
}

/// Evaluates translation-induced Lipschitz seminorms on truncated operators.
pub struct LipEvaluator<'a> {
    pub ctx: &'a TruncationContext,
    pub mode: LipMode,
}

impl<'a> LipEvaluator<'a> {
    pub fn new(ctx: &'a TruncationContext, mode: LipMode) -> Self {
        LipEvaluator { ctx, mode }
    }

    fn sides(&self) -> &'static [Action] {
        match self.mode {
            LipMode::OperatorLeft => &[Action::Left],
            LipMode::OperatorRight => &[Action::Right],
            LipMode::OperatorBoth => &[Action::Left, Action::Right],
        }
    }

    /// Single-supremum form: `max_{g≠e} ‖act_g(T) − T‖ / d(g,e)`.
    pub fn seminorm(&self, t: &TruncatedOperator) -> f64 {
        let grp = &self.ctx.group;
        let mut best = 0.0f64;
        for &side in self.sides() {
            for g in 1..grp.order {
                let moved = self.ctx.act(side, g, t);
                let diff = &moved.matrix - &t.matrix;
                best = best.max(spectral_norm_hermitian(&diff) / grp.dist(grp.identity, g));
            }
        }
        best
    }

    /// Definitional double-supremum form, kept as an independent oracle:
    /// `max_{x≠y} ‖act_x(T) − act_y(T)‖ / d(x,y)`.
    pub fn seminorm_double_sup(&self, t: &TruncatedOperator) -> f64 {
        let grp = &self.ctx.group;
        let n = grp.order;
        let mut best = 0.0f64;
        for &side in self.sides() {
            let moved: Vec<CMat> = (0..n).map(|x| self.ctx.act(side, x, t).matrix).collect();
            for x in 0..n {
                for y in x + 1..n {
                    let diff = &moved[x] - &moved[y];
                    best = best.max(spectral_norm_hermitian(&diff) / grp.dist(x, y));
                }
            }
        }
        best
    }
}

/// Seminorm of a truncated operator under the evaluator's mode.
pub fn lip_seminorm_operator(t: &TruncatedOperator, evaluator: &LipEvaluator<'_>) -> f64 {
    evaluator.seminorm(t)
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// A state on functions: a probability weight vector over group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureState {
    pub weights: Vec<f64>,
}

impl MeasureState {
    pub fn new(weights: Vec<f64>) -> Result<Self, MetricError> {
        if let Some((i, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| !w.is_finite() || w < -1e-12)
        {
            return Err(MetricError::BadMeasure(format!("bad weight {w} at {i}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(MetricError::BadMeasure(format!("weights sum to {sum}")));
        }
        Ok(MeasureState { weights })
    }

    pub fn dirac(x: usize, order: usize) -> Self {
        let mut weights = vec![0.0; order];
        weights[x] = 1.0;
        MeasureState { weights }
    }

    pub fn haar(order: usize) -> Self {
        MeasureState {
            weights: vec![1.0 / order as f64; order],
        }
    }

    /// Expectation of a function.
    pub fn integrate(&self, f: &RealFunction) -> f64 {
        self.weights.iter().zip(&f.0).map(|(w, v)| w * v).sum()
    }
}

/// A state on the compressed algebra, stored as coordinates against the
/// context's trace-orthonormal basis; pairing with an operator is then a dot
/// product of coordinate vectors. The unit pairing `σ(P) = 1` fixes the
/// coordinate at the unit index to `1/√rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraState {
    pub coeffs: Vec<f64>,
}

impl AlgebraState {
    /// State induced by a density matrix: `σ(T) = trace(ρ·T)`.
    pub fn from_density(ctx: &TruncationContext, rho: &CMat) -> Result<Self, MetricError> {
        let k = ctx.ambient_dim;
        if rho.shape() != (k, k) {
            return Err(MetricError::DimensionMismatch {
                expected: k,
                got: rho.nrows(),
            });
        }
        let coeffs = ctx
            .algebra_basis
            .iter()
            .map(|b| trace_prod_re(rho, b))
            .collect();
        Ok(AlgebraState { coeffs })
    }

    pub fn evaluate(&self, ctx: &TruncationContext, t: &TruncatedOperator) -> f64 {
        self.coeffs
            .iter()
            .zip(ctx.coeffs(t))
            .map(|(s, c)| s * c)
            .sum()
    }

    /// `σ(unit) = 1` within `tol`.
    pub fn is_unital(&self, ctx: &TruncationContext, tol: f64) -> bool {
        let root_k = (ctx.ambient_dim as f64).sqrt();
        (self.coeffs[ctx.unit_index] * root_k - 1.0).abs() <= tol
    }
}

/// A certified optimum: a feasible value, the witness that attains it, and a
/// relaxation upper bound bracketing the true optimum.
#[derive(Debug, Clone)]
pub struct MetricCertificate {
    /// Feasible (lower-bound) value; the reported metric.
    pub value: f64,
    /// Witness: dual potential values (transport) or algebra coordinates
    /// (state metric), with Lipschitz value at most one.
    pub maximizer: Vec<f64>,
    /// Relaxation upper bound on the true optimum.
    pub upper: f64,
    /// `upper − value`, nonnegative; at most the requested tolerance when
    /// `converged` is set.
    pub gap: f64,
    pub converged: bool,
    pub iterations: usize,
}

// ---------------------------------------------------------------------------
// Kantorovich distance
// ---------------------------------------------------------------------------

/// Exact Kantorovich (transport) distance between two probability vectors.
///
/// Solves the dual: maximize `Σ (μ−ν)(x)·φ(x)` over potentials with
/// `φ(x) − φ(y) ≤ d(x,y)`, pinned at the identity. The shadow prices of the
/// pair constraints form an optimal transport flow whose cost certifies the
/// optimum from above; both the flow's marginals and the potential's
/// Lipschitz bound are verified before returning.
pub fn kantorovich_w1(
    mu: &MeasureState,
    nu: &MeasureState,
    g: &FiniteMetricGroup,
) -> Result<MetricCertificate, MetricError> {
    let n = g.order;
    if mu.weights.len() != n || nu.weights.len() != n {
        return Err(MetricError::DimensionMismatch {
            expected: n,
            got: mu.weights.len().max(nu.weights.len()),
        });
    }
    // Re-validate the simplex constraints on the way in.
    MeasureState::new(mu.weights.clone())?;
    MeasureState::new(nu.weights.clone())?;

    let w: Vec<f64> = mu
        .weights
        .iter()
        .zip(&nu.weights)
        .map(|(a, b)| a - b)
        .collect();
    // Variables: φ(x) for x ≠ identity; φ(identity) = 0.
    let var_of = |x: usize| -> Option<usize> { (x != 0).then(|| x - 1) };
    let c: Vec<f64> = (1..n).map(|x| w[x]).collect();

    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n * (n - 1));
    let mut pair_of_row: Vec<(usize, usize)> = Vec::with_capacity(n * (n - 1));
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let mut row = vec![0.0; n - 1];
            if let Some(v) = var_of(x) {
                row[v] += 1.0;
            }
            if let Some(v) = var_of(y) {
                row[v] -= 1.0;
            }
            rows.push((row, g.dist(x, y)));
            pair_of_row.push((x, y));
        }
    }

    let sol = lp::solve(&c, &rows)?;
    let mut potential = vec![0.0; n];
    potential[1..n].copy_from_slice(&sol.x);

    // Certificate checks: the potential is 1-Lipschitz and the flow from the
    // shadow prices moves μ to ν.
    let mut lip = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                lip = lip.max((potential[x] - potential[y]).abs() / g.dist(x, y));
            }
        }
    }
    if lip > 1.0 + 1e-9 {
        return Err(MetricError::Certificate(format!(
            "potential has Lipschitz value {lip}"
        )));
    }
    let mut net = vec![0.0f64; n];
    let mut upper = 0.0f64;
    for (r, &(x, y)) in pair_of_row.iter().enumerate() {
        let flow = sol.duals[r];
        net[x] += flow;
        net[y] -= flow;
        upper += flow * g.dist(x, y);
    }
    for x in 0..n {
        if (net[x] - w[x]).abs() > 1e-9 {
            return Err(MetricError::Certificate(format!(
                "transport flow misses marginal at {x} by {:e}",
                (net[x] - w[x]).abs()
            )));
        }
    }
    let value = sol.value;
    let gap = upper - value;
    if gap.abs() > 1e-9 {
        return Err(MetricError::Certificate(format!("duality gap {gap:e}")));
    }
    Ok(MetricCertificate {
        value,
        maximizer: potential,
        upper,
        gap: gap.max(0.0),
        converged: true,
        iterations: 1,
    })
}

// ---------------------------------------------------------------------------
// State metric via cutting planes
// ---------------------------------------------------------------------------

/// Distance between two states on the compressed algebra:
/// `sup {(σ−τ)(T) : T ∈ A_Λ, ‖T‖_{λ,ρ} ≤ 1}`.
///
/// The unit direction is pinned out (its coefficient set to zero): the
/// seminorm vanishes there while unital states cannot separate along it, so
/// the optimum is unchanged and the feasible set becomes compact. Each
/// seminorm constraint `‖act_g(T) − T‖ ≤ d(g,e)` is enforced through
/// supporting hyperplanes `±⟨v, (act_g(T) − T)·v⟩ ≤ d(g,e)` taken at extreme
/// eigenvectors of the violated iterate; an a-priori coefficient box keeps
/// the master LP bounded (a pinned operator with seminorm at most one has
/// operator norm at most the Haar mean of Δ, hence Frobenius norm at most
/// `√k` times that).
pub fn state_metric(
    sigma: &AlgebraState,
    tau: &AlgebraState,
    evaluator: &LipEvaluator<'_>,
    tol: f64,
) -> Result<MetricCertificate, MetricError> {
    if tol <= 0.0 {
        return Err(MetricError::BadTolerance(tol));
    }
    let ctx = evaluator.ctx;
    let r = ctx.algebra_dim();
    if sigma.coeffs.len() != r || tau.coeffs.len() != r {
        return Err(MetricError::DimensionMismatch {
            expected: r,
            got: sigma.coeffs.len().max(tau.coeffs.len()),
        });
    }
    if r <= 1 {
        // The algebra is the scalars; all unital states coincide.
        return Ok(MetricCertificate {
            value: 0.0,
            maximizer: vec![0.0; r],
            upper: 0.0,
            gap: 0.0,
            converged: true,
            iterations: 0,
        });
    }

    let grp = &ctx.group;
    let unit = ctx.unit_index;
    // Variable layout: algebra coordinates with the unit index removed.
    let vars: Vec<usize> = (0..r).filter(|&i| i != unit).collect();
    let objective: Vec<f64> = vars
        .iter()
        .map(|&i| sigma.coeffs[i] - tau.coeffs[i])
        .collect();

    let delta = distance_profile(grp);
    let haar_mean = delta.haar_mean();
    let box_radius = (ctx.ambient_dim as f64).sqrt() * haar_mean * (1.0 + 1e-9);

    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(2 * vars.len());
    for v in 0..vars.len() {
        let mut plus = vec![0.0; vars.len()];
        plus[v] = 1.0;
        let mut minus = vec![0.0; vars.len()];
        minus[v] = -1.0;
        rows.push((plus, box_radius));
        rows.push((minus, box_radius));
    }

    let sides = evaluator.sides();
    let mut best_value = 0.0f64;
    let mut best_coeffs = vec![0.0; r];
    let mut master_value = f64::INFINITY;

    for iteration in 1..=MAX_CUT_ITERATIONS {
        let sol = lp::solve(&objective, &rows)?;
        master_value = sol.value;

        let mut full = vec![0.0; r];
        for (slot, &i) in vars.iter().enumerate() {
            full[i] = sol.x[slot];
        }
        let t = ctx.from_coeffs(&full);

        // Scan every constraint; collect cuts at violated ones and track the
        // overall seminorm for the rescaled feasible candidate.
        let mut seminorm = 0.0f64;
        let mut new_cuts: Vec<(Vec<f64>, f64)> = Vec::new();
        for &side in sides {
            for g_el in 1..grp.order {
                let bound = grp.dist(grp.identity, g_el);
                let moved = ctx.act(side, g_el, &t);
                let diff = &moved.matrix - &t.matrix;
                let eigen = hermitian_eigen(&diff);
                let lo = eigen.values[0];
                let hi = eigen.values[eigen.values.len() - 1];
                let norm = hi.max(-lo);
                seminorm = seminorm.max(norm / bound);
                if norm > bound * (1.0 + 1e-12) + 1e-12 {
                    let (col, sign) = if hi >= -lo {
                        (
                            eigen.vectors.column(eigen.values.len() - 1).into_owned(),
                            1.0,
                        )
                    } else {
                        (eigen.vectors.column(0).into_owned(), -1.0)
                    };
                    new_cuts.push(support_cut(ctx, side, g_el, &col, sign, &vars, bound));
                }
            }
        }

        if seminorm > 1e-14 {
            let candidate = sol.value / seminorm;
            if candidate > best_value {
                best_value = candidate;
                for (dst, &src) in best_coeffs.iter_mut().zip(&full) {
                    *dst = src / seminorm;
                }
            }
        } else if sol.value > best_value {
            // Zero seminorm means the iterate is (numerically) scalar, which
            // pinning forces to zero; the objective there is zero as well.
            best_value = sol.value.max(best_value);
        }

        let gap = master_value - best_value;
        if gap <= tol {
            return Ok(MetricCertificate {
                value: best_value,
                maximizer: best_coeffs,
                upper: master_value,
                gap: gap.max(0.0),
                converged: true,
                iterations: iteration,
            });
        }
        if new_cuts.is_empty() {
            // Feasible master optimum: the bracket is already tight.
            return Ok(MetricCertificate {
                value: master_value,
                maximizer: full,
                upper: master_value,
                gap: 0.0,
                converged: true,
                iterations: iteration,
            });
        }
        rows.extend(new_cuts);
    }

    Ok(MetricCertificate {
        value: best_value,
        maximizer: best_coeffs,
        upper: master_value,
        gap: master_value - best_value,
        converged: false,
        iterations: MAX_CUT_ITERATIONS,
    })
}

/// Supporting hyperplane of `‖act_g(T) − T‖ ≤ bound` at the extreme
/// eigenvector `v`: coefficients of `sign·⟨v, (act_g(B_i) − B_i)·v⟩` over the
/// non-unit basis. Conjugating the vector instead of every basis element
/// turns each coefficient into two quadratic forms.
fn support_cut(
    ctx: &TruncationContext,
    side: Action,
    g_el: usize,
    v: &CVec,
    sign: f64,
    vars: &[usize],
    bound: f64,
) -> (Vec<f64>, f64) {
    let u = match side {
        Action::Left => ctx.left_unitary(g_el),
        Action::Right => ctx.right_unitary(g_el),
    };
    let pulled = u.adjoint() * v;
    let coeffs = vars
        .iter()
        .map(|&i| {
            let b = &ctx.algebra_basis[i];
            let forward = quadratic_form(b, &pulled);
            let stationary = quadratic_form(b, v);
            sign * (forward - stationary)
        })
        .collect();
    (coeffs, bound)
}

/// `Re ⟨v, M v⟩` for Hermitian `M`.
fn quadratic_form(m: &CMat, v: &CVec) -> f64 {
    let mv = m * v;
    v.dotc(&mv).re
}
