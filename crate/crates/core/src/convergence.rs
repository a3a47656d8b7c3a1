//! Liftable states and Gromov–Hausdorff bounds for truncation chains.
//!
//! A probability measure on the group is liftable to a truncation when it is
//! the pullback of a state on the compressed algebra; density matrices on the
//! truncated space realize exactly those states, with
//! `w(x) = trace(ρ·compress(δ_x))` as the lifted measure. Pairing a liftable
//! measure with the distance-to-identity profile gives an upper bound on the
//! Gromov–Hausdorff distance between the truncated and untruncated state
//! spaces, and the best liftable value of that pairing is the smallest
//! eigenvalue of the compressed distance operator. Growing the truncation
//! along a chain of label sets drives the bound to zero.

use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::group::{distance_profile, DistanceProfile, FiniteMetricGroup};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, CMat, CVec};
use crate::metric::{lip_norm_function, LipEvaluator, LipMode};
use crate::peter_weyl::{build_irreps, build_projection, IrrepSet, PwError};
use crate::rng::Rng;
use crate::truncation::{
    build_context, trace_prod_re, RealFunction, TruncationContext, TruncationError,
};

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error(transparent)]
    Representation(#[from] PwError),
    #[error(transparent)]
    Truncation(#[from] TruncationError),
    #[error("density matrix invalid: {0}")]
    BadDensity(String),
    #[error("measure was lifted for a different truncation context")]
    NotLiftable,
    #[error("chain is not nested at step {step}")]
    ChainNotNested { step: usize },
    #[error("chain step count {got} does not match supplied states {expected}")]
    ChainStateCount { got: usize, expected: usize },
    #[error("the irrep set has no trivial representation")]
    NoTrivial,
}

/// A state on the compressed algebra in density-matrix form: positive
/// semidefinite with unit trace on the truncated space.
#[derive(Debug, Clone)]
pub struct DensityState {
    pub rho: CMat,
}

impl DensityState {
    /// Validate shape, positivity, and normalization against a context.
    pub fn validate(&self, ctx: &TruncationContext) -> Result<(), ConvergenceError> {
        let k = ctx.ambient_dim;
        if self.rho.shape() != (k, k) {
            return Err(ConvergenceError::BadDensity(format!(
                "expected {k}×{k}, got {}×{}",
                self.rho.nrows(),
                self.rho.ncols()
            )));
        }
        if self
            .rho
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(ConvergenceError::BadDensity(
                "entries must be finite".to_string(),
            ));
        }
        let herm = crate::linalg::hermiticity_residual(&self.rho);
        if herm > 1e-10 {
            return Err(ConvergenceError::BadDensity(format!(
                "not Hermitian ({herm:e})"
            )));
        }
        let eigs = hermitian_eigenvalues(&self.rho);
        if eigs[0] < -1e-10 {
            return Err(ConvergenceError::BadDensity(format!(
                "negative eigenvalue {}",
                eigs[0]
            )));
        }
        let trace = crate::linalg::trace_re(&self.rho);
        if (trace - 1.0).abs() > 1e-10 {
            return Err(ConvergenceError::BadDensity(format!("trace {trace}")));
        }
        Ok(())
    }

    /// Rank-one state from a (not necessarily normalized) vector.
    pub fn from_vector(psi: &CVec) -> Self {
        let unit = psi.clone().unscale(psi.norm());
        DensityState {
            rho: &unit * unit.adjoint(),
        }
    }

    /// The maximally mixed state; its lifted measure is exactly Haar.
    pub fn maximally_mixed(ctx: &TruncationContext) -> Self {
        let k = ctx.ambient_dim;
        DensityState {
            rho: CMat::identity(k, k).unscale(k as f64),
        }
    }

    /// Vector state at the compressed delta of `x`; at the full truncation
    /// its lifted measure is the point mass at `x`.
    pub fn dirac_vector(ctx: &TruncationContext, x: usize) -> Self {
        let k = ctx.ambient_dim;
        let c = CVec::from_iterator(k, (0..k).map(|a| ctx.projection.basis[(x, a)].conj()));
        Self::from_vector(&c)
    }

    /// Mixture of compressed-delta vector states with the given weights: the
    /// canonical liftable realization of a weight vector.
    pub fn from_weights_mixture(
        ctx: &TruncationContext,
        weights: &[f64],
    ) -> Result<Self, ConvergenceError> {
        let n = ctx.group.order;
        if weights.len() != n {
            return Err(ConvergenceError::BadDensity(format!(
                "weights length {} does not match group order {n}",
                weights.len()
            )));
        }
        let k = ctx.ambient_dim;
        let mut rho = CMat::zeros(k, k);
        for (x, &w) in weights.iter().enumerate() {
            if w != 0.0 {
                rho += DensityState::dirac_vector(ctx, x).rho.scale(w);
            }
        }
        let state = DensityState { rho };
        state.validate(ctx)?;
        Ok(state)
    }
}

/// A measure on the group together with evidence of which truncation lifted
/// it; the Gromov–Hausdorff bound only accepts measures with evidence for
/// its own context.
#[derive(Debug, Clone)]
pub struct LiftedMeasure {
    pub weights: Vec<f64>,
    ctx_id: u64,
}

impl LiftedMeasure {
    pub fn certifies(&self, ctx: &TruncationContext) -> bool {
        self.ctx_id == context_id(ctx)
    }
}

/// Stable identity of a context: the projection basis pointer does not move
/// once built, so its address distinguishes live contexts.
fn context_id(ctx: &TruncationContext) -> u64 {
    ctx.projection.basis.as_slice().as_ptr() as u64
}

/// Pull a density state back to a measure: `w(x) = trace(ρ·compress(δ_x))`.
pub fn lifted_measure(
    ctx: &TruncationContext,
    state: &DensityState,
) -> Result<LiftedMeasure, ConvergenceError> {
    state.validate(ctx)?;
    let weights: Vec<f64> = (0..ctx.group.order)
        .map(|x| trace_prod_re(&state.rho, ctx.compressed_delta(x)))
        .collect();
    debug_assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    Ok(LiftedMeasure {
        weights,
        ctx_id: context_id(ctx),
    })
}

/// Minimize `∫Δ dμ` over liftable measures: the smallest eigenvalue of the
/// compressed distance operator, attained at a bottom-eigenvector state.
/// A linear functional over density matrices is minimized at a rank-one
/// state, so searching vector states loses nothing and the eigenvalue
/// formulation is exact.
pub fn optimal_liftable_state(
    ctx: &TruncationContext,
    profile: &DistanceProfile,
) -> (f64, DensityState) {
    let t = ctx.compress(&RealFunction(profile.delta.clone()));
    let eigen = hermitian_eigen(&t.matrix);
    let epsilon = eigen.values[0].max(0.0);
    debug_assert!(
        eigen.values[0] > -1e-9,
        "compressed distance operator must be PSD"
    );
    let bottom = eigen.vectors.column(0).into_owned();
    (epsilon, DensityState::from_vector(&bottom))
}

/// The Gromov–Hausdorff upper bound `Σ_x Δ(x)·μ(x)` for a measure lifted on
/// this context.
pub fn gh_upper_bound(
    ctx: &TruncationContext,
    mu: &LiftedMeasure,
    profile: &DistanceProfile,
) -> Result<f64, ConvergenceError> {
    if !mu.certifies(ctx) {
        return Err(ConvergenceError::NotLiftable);
    }
    Ok(mu
        .weights
        .iter()
        .zip(&profile.delta)
        .map(|(w, d)| w * d)
        .sum())
}

// ---------------------------------------------------------------------------
// Approximate order isomorphism checks
// ---------------------------------------------------------------------------

/// Additive slack for the round-trip and morphism inequalities.
pub const APPROX_ISO_TOL: f64 = 1e-9;

/// Outcome of randomized round-trip and morphism checks for one truncation
/// and one liftable state.
#[derive(Debug, Clone)]
pub struct ApproxIsoReport {
    /// The bound `∫Δ dμ` the round trips are tested against.
    pub epsilon: f64,
    pub trials: usize,
    /// max over trials of `‖υ(τ(f)) − f‖_∞ / L(f)`
    pub max_fn_roundtrip_ratio: f64,
    /// max over trials of `‖τ(υ(T)) − T‖ / L_Λ(T)`
    pub max_op_roundtrip_ratio: f64,
    /// max over trials of `L_Λ(τ(f)) − L(f)` (should stay ≤ tolerance)
    pub max_fn_morphism_excess: f64,
    /// max over trials of `L(υ(T)) − L_Λ(T)` (should stay ≤ tolerance)
    pub max_op_morphism_excess: f64,
    pub violations: Vec<String>,
}

impl ApproxIsoReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Randomized verification that the compression and the reverse map form an
/// approximate order isomorphism at level `ε = ∫Δ dμ`:
/// `‖υ∘τ(f) − f‖_∞ ≤ ε·L(f)` and `‖τ∘υ(T) − T‖ ≤ ε·L_Λ(T)`, plus the two
/// morphism inequalities. Test functions have i.i.d. uniform values.
pub fn verify_c1_approx_iso(
    ctx: &TruncationContext,
    state: &DensityState,
    trials: usize,
    seed: u64,
) -> Result<ApproxIsoReport, ConvergenceError> {
    let grp = &ctx.group;
    let n = grp.order;
    let profile = distance_profile(grp);
    let mu = lifted_measure(ctx, state)?;
    let epsilon = gh_upper_bound(ctx, &mu, &profile)?;
    let evaluator = LipEvaluator::new(ctx, LipMode::OperatorBoth);

    // υ(T)(g) = trace(ρ·ρ_g(T)) = trace((v_g† ρ v_g)·T); precompute the
    // conjugated states once.
    let dragged: Vec<CMat> = (0..n)
        .map(|g| {
            let v = ctx.right_unitary(g);
            v.adjoint() * &state.rho * v
        })
        .collect();
    let upsilon = |t: &crate::truncation::TruncatedOperator| -> RealFunction {
        RealFunction(
            (0..n)
                .map(|g| trace_prod_re(&dragged[g], &t.matrix))
                .collect(),
        )
    };

    let mut rng = Rng::new(seed).stream(0xC1);
    let mut report = ApproxIsoReport {
        epsilon,
        trials,
        max_fn_roundtrip_ratio: 0.0,
        max_op_roundtrip_ratio: 0.0,
        max_fn_morphism_excess: f64::NEG_INFINITY,
        max_op_morphism_excess: f64::NEG_INFINITY,
        violations: Vec::new(),
    };

    for trial in 0..trials {
        // Function round trip and the compression morphism inequality.
        let f = RealFunction(rng.uniform_vec(n));
        let lip_f = lip_norm_function(&f, grp);
        let tf = ctx.compress(&f);
        let deviation = upsilon(&tf).sub(&f).sup_norm();
        if deviation > epsilon * lip_f + APPROX_ISO_TOL {
            report.violations.push(format!(
                "trial {trial}: ‖υτ(f) − f‖ = {deviation} exceeds ε·L(f) = {}",
                epsilon * lip_f
            ));
        }
        if lip_f > 1e-12 {
            report.max_fn_roundtrip_ratio = report.max_fn_roundtrip_ratio.max(deviation / lip_f);
        }
        let lip_tf = evaluator.seminorm(&tf);
        let excess = lip_tf - lip_f;
        report.max_fn_morphism_excess = report.max_fn_morphism_excess.max(excess);
        if excess > APPROX_ISO_TOL {
            report.violations.push(format!(
                "trial {trial}: L_Λ(τf) = {lip_tf} exceeds L(f) = {lip_f}"
            ));
        }

        // Operator round trip and the reverse-map morphism inequality.
        let t = ctx.compress(&RealFunction(rng.uniform_vec(n)));
        let lip_t = evaluator.seminorm(&t);
        let back = upsilon(&t);
        let lip_back = lip_norm_function(&back, grp);
        let op_excess = lip_back - lip_t;
        report.max_op_morphism_excess = report.max_op_morphism_excess.max(op_excess);
        if op_excess > APPROX_ISO_TOL {
            report.violations.push(format!(
                "trial {trial}: L(υT) = {lip_back} exceeds L_Λ(T) = {lip_t}"
            ));
        }
        let round = ctx.compress(&back);
        let op_dev = crate::linalg::spectral_norm_hermitian(&(&round.matrix - &t.matrix));
        if op_dev > epsilon * lip_t + APPROX_ISO_TOL {
            report.violations.push(format!(
                "trial {trial}: ‖τυ(T) − T‖ = {op_dev} exceeds ε·L_Λ(T) = {}",
                epsilon * lip_t
            ));
        }
        if lip_t > 1e-12 {
            report.max_op_roundtrip_ratio = report.max_op_roundtrip_ratio.max(op_dev / lip_t);
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Truncation chains
// ---------------------------------------------------------------------------

/// How to choose the liftable state at each chain step.
#[derive(Debug, Clone)]
pub enum MuRule {
    /// Bottom eigenvector of the compressed distance operator.
    Optimal,
    /// Maximally mixed state (lifted Haar).
    Haar,
    /// Caller-provided density state per chain step.
    Custom(Vec<DensityState>),
}

/// Chain of label sets to sweep.
#[derive(Debug, Clone)]
pub enum ChainSpec {
    /// Grow by (dimension, construction order), trivial representation
    /// first, adding each irrep together with its conjugate partner so every
    /// step is closed under conjugation.
    Auto,
    Explicit(Vec<Vec<String>>),
}

/// The auto chain: deterministic nested label sets ending at the full dual.
pub fn auto_chain(set: &IrrepSet, order: usize) -> Result<Vec<Vec<String>>, ConvergenceError> {
    let trivial = set.trivial().ok_or(ConvergenceError::NoTrivial)?;
    let mut by_dim: Vec<usize> = (0..set.irreps.len()).collect();
    by_dim.sort_by_key(|&i| (set.irreps[i].dim, i));

    let mut included = vec![false; set.irreps.len()];
    let mut steps: Vec<Vec<String>> = Vec::new();
    let snapshot = |included: &[bool]| -> Vec<String> {
        included
            .iter()
            .enumerate()
            .filter(|&(_, &inc)| inc)
            .map(|(i, _)| set.irreps[i].label.clone())
            .collect()
    };
    included[trivial] = true;
    steps.push(snapshot(&included));
    for &i in &by_dim {
        if included[i] {
            continue;
        }
        included[i] = true;
        let partner = set.conjugate_partner(i, order);
        included[partner] = true;
        steps.push(snapshot(&included));
    }
    Ok(steps)
}

/// One row of a chain report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GHRow {
    pub step: usize,
    pub lambda: Vec<String>,
    pub dim_l2: usize,
    pub dim_algebra: usize,
    pub epsilon: f64,
    /// How the liftable state was chosen at this step.
    pub optimizer: String,
    /// The realized measure the bound integrates against.
    pub mu_weights: Vec<f64>,
    pub time_ms: f64,
}

/// Λ-indexed record of Gromov–Hausdorff bounds along a chain.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GHReport {
    pub group: String,
    pub mu_rule: String,
    pub rows: Vec<GHRow>,
}

/// Sweep a nested chain of truncations and record the bound at each step.
pub fn convergence_experiment(
    group: Arc<FiniteMetricGroup>,
    chain: ChainSpec,
    mu_rule: MuRule,
) -> Result<GHReport, ConvergenceError> {
    convergence_experiment_parallel(group, chain, mu_rule, 1)
}

/// Chain sweep with independent steps distributed over up to `threads`
/// workers. Rows are assembled in chain order regardless of scheduling, so
/// the report is identical to the sequential one.
pub fn convergence_experiment_parallel(
    group: Arc<FiniteMetricGroup>,
    chain: ChainSpec,
    mu_rule: MuRule,
    threads: usize,
) -> Result<GHReport, ConvergenceError> {
    let set = build_irreps(&group)?;
    let steps = match chain {
        ChainSpec::Auto => auto_chain(&set, group.order)?,
        ChainSpec::Explicit(steps) => {
            for (i, window) in steps.windows(2).enumerate() {
                let (prev, next) = (&window[0], &window[1]);
                if !prev.iter().all(|l| next.contains(l)) {
                    return Err(ConvergenceError::ChainNotNested { step: i + 1 });
                }
            }
            steps
        }
    };
    if let MuRule::Custom(states) = &mu_rule {
        if states.len() != steps.len() {
            return Err(ConvergenceError::ChainStateCount {
                got: steps.len(),
                expected: states.len(),
            });
        }
    }

    let profile = distance_profile(&group);
    let run_step = |step: usize, lambda: &[String]| -> Result<GHRow, ConvergenceError> {
        let started = Instant::now();
        let projection = build_projection(&set, lambda, &group)?;
        let ctx = build_context(projection, group.clone());
        let (state, optimizer) = match &mu_rule {
            MuRule::Optimal => (
                optimal_liftable_state(&ctx, &profile).1,
                "bottom eigenvector of the compressed distance operator",
            ),
            MuRule::Haar => (DensityState::maximally_mixed(&ctx), "maximally mixed state"),
            MuRule::Custom(states) => (states[step].clone(), "supplied density state"),
        };
        let mu = lifted_measure(&ctx, &state)?;
        let epsilon = gh_upper_bound(&ctx, &mu, &profile)?;
        Ok(GHRow {
            step,
            lambda: ctx.projection.lambda.clone(),
            dim_l2: ctx.ambient_dim,
            dim_algebra: ctx.algebra_dim(),
            epsilon,
            optimizer: optimizer.to_string(),
            mu_weights: mu.weights.clone(),
            time_ms: started.elapsed().as_secs_f64() * 1e3,
        })
    };

    let workers = threads.max(1).min(steps.len().max(1));
    let rows: Vec<GHRow> = if workers <= 1 {
        steps
            .iter()
            .enumerate()
            .map(|(i, lambda)| run_step(i, lambda))
            .collect::<Result<_, _>>()?
    } else {
        let mut results: Vec<Option<Result<GHRow, ConvergenceError>>> =
            (0..steps.len()).map(|_| None).collect();
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots = std::sync::Mutex::new(&mut results);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= steps.len() {
                        break;
                    }
                    let row = run_step(i, &steps[i]);
                    slots.lock().expect("result slot lock")[i] = Some(row);
                });
            }
        });
        results
            .into_iter()
            .map(|slot| slot.expect("every step computed"))
            .collect::<Result<_, _>>()?
    };

    let mu_rule_name = match &mu_rule {
        MuRule::Optimal => "optimal",
        MuRule::Haar => "haar",
        MuRule::Custom(_) => "custom",
    };
    Ok(GHReport {
        group: group.name.clone(),
        mu_rule: mu_rule_name.to_string(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_catalog_group, parse_descriptor};
    use crate::rng::Rng;

    fn arc_group(desc: &str) -> Arc<FiniteMetricGroup> {
        let (f, m) = parse_descriptor(desc).unwrap();
        Arc::new(make_catalog_group(&f, m).unwrap())
    }

    fn context_for(group: &Arc<FiniteMetricGroup>, lambda: &[&str]) -> TruncationContext {
        let set = build_irreps(group).unwrap();
        let labels: Vec<String> = if lambda.is_empty() {
            set.labels()
        } else {
            lambda.iter().map(|s| s.to_string()).collect()
        };
        let p = build_projection(&set, &labels, group).unwrap();
        build_context(p, group.clone())
    }

    #[test]
    fn haar_state_lifts_haar_measure() {
        let g = arc_group("cyclic:6:word");
        let ctx = context_for(&g, &["chi_0", "chi_1", "chi_5"]);
        let mu = lifted_measure(&ctx, &DensityState::maximally_mixed(&ctx)).unwrap();
        for &w in &mu.weights {
            assert!((w - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_vector_state_lifts_haar() {
        let g = arc_group("cyclic:3:word");
        let ctx = context_for(&g, &[]);
        let k = ctx.ambient_dim;
        // Normalized constant function lives in the trivial block.
        let psi = CVec::from_iterator(
            k,
            (0..k).map(|a| {
                (0..3)
                    .map(|x| ctx.projection.basis[(x, a)].conj())
                    .sum::<crate::linalg::C64>()
            }),
        );
        let state = DensityState::from_vector(&psi);
        let mu = lifted_measure(&ctx, &state).unwrap();
        for &w in &mu.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dirac_vector_at_full_truncation_is_point_mass() {
        let g = arc_group("cyclic:4:word");
        let ctx = context_for(&g, &[]);
        let mu = lifted_measure(&ctx, &DensityState::dirac_vector(&ctx, 0)).unwrap();
        assert!((mu.weights[0] - 1.0).abs() < 1e-10);
        for &w in &mu.weights[1..] {
            assert!(w.abs() < 1e-10);
        }
    }

    #[test]
    fn pullback_identity_random_functions() {
        let g = arc_group("cyclic:6:word");
        let ctx = context_for(&g, &["chi_0", "chi_1", "chi_5"]);
        let profile = distance_profile(&g);
        let (_, state) = optimal_liftable_state(&ctx, &profile);
        let mu = lifted_measure(&ctx, &state).unwrap();
        let mut rng = Rng::new(1);
        for _ in 0..100 {
            let f = RealFunction(rng.uniform_vec(6));
            let lhs = trace_prod_re(&state.rho, &ctx.compress(&f).matrix);
            let rhs: f64 = f.0.iter().zip(&mu.weights).map(|(v, w)| v * w).sum();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn z3_partial_truncation_epsilon_is_one_third() {
        let g = arc_group("cyclic:3:word");
        let ctx = context_for(&g, &["chi_0", "chi_1"]);
        let profile = distance_profile(&g);
        let (eps, state) = optimal_liftable_state(&ctx, &profile);
        assert!((eps - 1.0 / 3.0).abs() < 1e-10, "epsilon {eps}");
        let mu = lifted_measure(&ctx, &state).unwrap();
        let bound = gh_upper_bound(&ctx, &mu, &profile).unwrap();
        assert!((bound - eps).abs() < 1e-10);
    }

    #[test]
    fn full_truncation_epsilon_vanishes_with_dirac_lift() {
        let g = arc_group("cyclic:5:word");
        let ctx = context_for(&g, &[]);
        let profile = distance_profile(&g);
        let (eps, state) = optimal_liftable_state(&ctx, &profile);
        assert!(eps.abs() < 1e-10);
        let mu = lifted_measure(&ctx, &state).unwrap();
        assert!(
            (mu.weights[0] - 1.0).abs() < 1e-8,
            "optimal lift concentrates at identity"
        );
    }

    #[test]
    fn trivial_truncation_forces_haar() {
        for (desc, expect) in [("cyclic:3:word", 2.0 / 3.0), ("cyclic:4:word", 1.0)] {
            let g = arc_group(desc);
            let ctx = context_for(&g, &["chi_0"]);
            let profile = distance_profile(&g);
            let (eps, _) = optimal_liftable_state(&ctx, &profile);
            assert!((eps - expect).abs() < 1e-10, "{desc}: {eps}");
            assert!((eps - profile.haar_mean()).abs() < 1e-10);
        }
    }

    #[test]
    fn density_states_reject_non_finite_entries() {
        let g = arc_group("cyclic:3:word");
        let ctx = context_for(&g, &["chi_0", "chi_1"]);
        let mut rho = DensityState::maximally_mixed(&ctx).rho;
        rho[(0, 1)] = crate::linalg::C64::new(f64::NAN, 0.0);
        assert!(matches!(
            DensityState { rho }.validate(&ctx),
            Err(ConvergenceError::BadDensity(_))
        ));
    }

    #[test]
    fn gh_bound_rejects_foreign_context() {
        let g = arc_group("cyclic:4:word");
        let ctx_a = context_for(&g, &["chi_0", "chi_1"]);
        let ctx_b = context_for(&g, &["chi_0", "chi_2"]);
        let profile = distance_profile(&g);
        let mu = lifted_measure(&ctx_a, &DensityState::maximally_mixed(&ctx_a)).unwrap();
        assert!(matches!(
            gh_upper_bound(&ctx_b, &mu, &profile),
            Err(ConvergenceError::NotLiftable)
        ));
    }

    #[test]
    fn auto_chain_on_cyclic_12_pairs_conjugates() {
        let g = arc_group("cyclic:12:geodesic");
        let set = build_irreps(&g).unwrap();
        let steps = auto_chain(&set, 12).unwrap();
        let sizes: Vec<usize> = steps.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 3, 5, 7, 9, 11, 12]);
        assert_eq!(steps[0], vec!["chi_0".to_string()]);
        assert!(steps[1].contains(&"chi_1".to_string()));
        assert!(steps[1].contains(&"chi_11".to_string()));
    }

    #[test]
    fn z2_chain_epsilons() {
        let g = arc_group("cyclic:2:word");
        let report = convergence_experiment(g, ChainSpec::Auto, MuRule::Optimal).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!((report.rows[0].epsilon - 0.5).abs() < 1e-12);
        assert!(report.rows[1].epsilon.abs() < 1e-12);
    }

    #[test]
    fn epsilon_monotone_under_optimal_rule() {
        for desc in ["cyclic:12:geodesic", "dihedral:4:word", "quaternion8:word"] {
            let g = arc_group(desc);
            let report = convergence_experiment(g, ChainSpec::Auto, MuRule::Optimal).unwrap();
            for pair in report.rows.windows(2) {
                assert!(
                    pair[1].epsilon <= pair[0].epsilon + 1e-12,
                    "{desc}: {} -> {}",
                    pair[0].epsilon,
                    pair[1].epsilon
                );
            }
            let last = report.rows.last().unwrap();
            assert!(last.epsilon < 1e-9, "{desc} ends at zero");
        }
    }

    #[test]
    fn repeated_chain_step_keeps_epsilon() {
        let g = arc_group("cyclic:4:word");
        let chain = ChainSpec::Explicit(vec![
            vec!["chi_0".to_string()],
            vec!["chi_0".to_string(), "chi_1".to_string()],
            vec!["chi_0".to_string(), "chi_1".to_string()],
        ]);
        let report = convergence_experiment(g, chain, MuRule::Optimal).unwrap();
        assert!((report.rows[1].epsilon - report.rows[2].epsilon).abs() < 1e-12);
    }

    #[test]
    fn non_nested_chain_is_rejected() {
        let g = arc_group("cyclic:4:word");
        let chain = ChainSpec::Explicit(vec![
            vec!["chi_0".to_string(), "chi_1".to_string()],
            vec!["chi_0".to_string(), "chi_2".to_string()],
        ]);
        assert!(matches!(
            convergence_experiment(g, chain, MuRule::Optimal),
            Err(ConvergenceError::ChainNotNested { step: 1 })
        ));
    }

    #[test]
    fn approx_iso_full_truncation_is_exact() {
        let g = arc_group("cyclic:4:word");
        let ctx = context_for(&g, &[]);
        let profile = distance_profile(&g);
        let (_, state) = optimal_liftable_state(&ctx, &profile);
        let report = verify_c1_approx_iso(&ctx, &state, 50, 0).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.epsilon.abs() < 1e-10);
        assert!(report.max_fn_roundtrip_ratio < 1e-9);
    }

    #[test]
    fn approx_iso_z3_partial_respects_bound() {
        let g = arc_group("cyclic:3:word");
        let ctx = context_for(&g, &["chi_0", "chi_1"]);
        let profile = distance_profile(&g);
        let (eps, state) = optimal_liftable_state(&ctx, &profile);
        let report = verify_c1_approx_iso(&ctx, &state, 1000, 0).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!((report.epsilon - eps).abs() < 1e-10);
        assert!(report.max_fn_roundtrip_ratio <= eps + 1e-9);
    }

    #[test]
    fn constant_functions_round_trip_exactly() {
        let g = arc_group("cyclic:6:word");
        let ctx = context_for(&g, &["chi_0", "chi_1", "chi_5"]);
        let state = DensityState::maximally_mixed(&ctx);
        let f = RealFunction::constant(2.5, 6);
        let t = ctx.compress(&f);
        let back = ctx.upsilon(&state.rho, &t).unwrap();
        for v in &back.0 {
            assert!((v - 2.5).abs() < 1e-12);
        }
    }
}
