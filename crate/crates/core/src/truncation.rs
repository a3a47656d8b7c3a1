//! The compressed function algebra on a truncated Hilbert space.
//!
//! Compressing a multiplication operator `M_f` by the projection `P_Λ` gives
//! `τ_Λ(f) = P_Λ M_f P_Λ`, an operator on the range of `P_Λ`. Everything here
//! works in an orthonormal basis of that range, so operators are small `k×k`
//! Hermitian matrices with `k = rank P_Λ`, the translation actions become
//! conjugation by `k×k` unitaries, and the compressed algebra is a real span
//! of Hermitian matrices with the compressed identity as order unit.
//!
//! The reverse map sends a truncated operator back to a function on the
//! group by pairing with a state dragged along the right action:
//! `υ(T)(g) = ⟨state, ρ_g(T)⟩`.

use std::sync::Arc;

use thiserror::Error;

use crate::group::FiniteMetricGroup;
use crate::linalg::{symmetric_eigen_real, trace_inner, CMat, CVec};
use crate::peter_weyl::{build_regular_actions, Projection};

/// Relative rank tolerance for the Gram spectrum of compressed
/// multiplication operators.
const GRAM_RANK_TOL: f64 = 1e-9;

/// A real-valued function on group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunction(pub Vec<f64>);

impl RealFunction {
    pub fn constant(value: f64, order: usize) -> Self {
        RealFunction(vec![value; order])
    }

    /// Indicator of a single element.
    pub fn delta(x: usize, order: usize) -> Self {
        let mut v = vec![0.0; order];
        v[x] = 1.0;
        RealFunction(v)
    }

    /// `λ_g f (x) = f(g⁻¹·x)`
    pub fn translate_left(&self, g: usize, grp: &FiniteMetricGroup) -> Self {
        let gi = grp.inverse(g);
        RealFunction((0..grp.order).map(|x| self.0[grp.mul(gi, x)]).collect())
    }

    /// `ρ_g f (x) = f(x·g)`
    pub fn translate_right(&self, g: usize, grp: &FiniteMetricGroup) -> Self {
        RealFunction((0..grp.order).map(|x| self.0[grp.mul(x, g)]).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        RealFunction(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Which translation action conjugates the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// λ: conjugation by the left regular unitaries.
    Left,
    /// ρ: conjugation by the right regular unitaries.
    Right,
}

/// How the right action composes under operator conjugation. With
/// `(V_g ψ)(x) = ψ(x·g)` the map `g ↦ V_g` is multiplicative, so
/// `ρ_g∘ρ_h = ρ_{g·h}`; the exhaustive action-axiom test pins this down.
pub const RIGHT_ACTION_COMPOSITION: &str = "rho_g . rho_h = rho_{g*h}";

/// An element of the compressed algebra: a Hermitian matrix on the truncated
/// space, expressible in the context's algebra basis.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub matrix: CMat,
}

#[derive(Debug, Error)]
pub enum TruncationError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Everything needed to work inside one truncation: the projection, the
/// compressed translation unitaries, and a trace-orthonormal Hermitian basis
/// of the compressed algebra with the unit pinned at a known index.
#[derive(Debug)]
pub struct TruncationContext {
    pub group: Arc<FiniteMetricGroup>,
    pub projection: Projection,
    /// Dimension of the truncated Hilbert space (rank of the projection).
    pub ambient_dim: usize,
    /// Trace-orthonormal Hermitian matrices spanning the compressed algebra.
    pub algebra_basis: Vec<CMat>,
    /// Position of the normalized unit `P/√rank` in `algebra_basis`.
    pub unit_index: usize,
    left_unitaries: Vec<CMat>,
    right_unitaries: Vec<CMat>,
    compressed_deltas: Vec<CMat>,
}

/// Build the working context for one projection.
pub fn build_context(projection: Projection, group: Arc<FiniteMetricGroup>) -> TruncationContext {
    let n = group.order;
    let k = projection.rank;
    let basis = &projection.basis;
    let acts = build_regular_actions(&group);

    let compress_action = |perm: &[usize]| -> CMat {
        // Rows of the basis permuted by the action, then projected back.
        let mut permuted = CMat::zeros(n, k);
        for y in 0..n {
            for b in 0..k {
                permuted[(perm[y], b)] = basis[(y, b)];
            }
        }
        basis.adjoint() * permuted
    };
    let left_unitaries: Vec<CMat> = (0..n).map(|g| compress_action(&acts.left[g])).collect();
    let right_unitaries: Vec<CMat> = (0..n).map(|g| compress_action(&acts.right[g])).collect();

    // compress(δ_x) is rank one: the outer product of the conjugated x-th
    // basis row.
    let compressed_deltas: Vec<CMat> = (0..n)
        .map(|x| {
            let c = CVec::from_iterator(k, (0..k).map(|a| basis[(x, a)].conj()));
            &c * c.adjoint()
        })
        .collect();

    // Algebra basis: the normalized unit first, then eigenvectors of the
    // Gram matrix of the unit-orthogonal parts of the compressed deltas,
    // keeping the spectrum above the relative rank tolerance.
    let unit = CMat::identity(k, k).unscale((k as f64).sqrt());
    let deflated: Vec<CMat> = compressed_deltas
        .iter()
        .map(|d| {
            let overlap = trace_inner(&unit, d).re;
            d - unit.scale(overlap)
        })
        .collect();
    let mut gram = nalgebra::DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        for y in x..n {
            let v = trace_inner(&deflated[x], &deflated[y]).re;
            gram[(x, y)] = v;
            gram[(y, x)] = v;
        }
    }
    let (vals, vecs) = symmetric_eigen_real(&gram);
    let max_val = vals.last().copied().unwrap_or(0.0).max(0.0);
    let mut algebra_basis = vec![unit];
    for m in (0..n).rev() {
        let val = vals[m];
        if max_val <= 0.0 || val <= GRAM_RANK_TOL * max_val {
            break;
        }
        let mut b = CMat::zeros(k, k);
        for x in 0..n {
            b += deflated[x].scale(vecs[(x, m)]);
        }
        algebra_basis.push(b.unscale(val.sqrt()));
    }

    TruncationContext {
        group,
        projection,
        ambient_dim: k,
        algebra_basis,
        unit_index: 0,
        left_unitaries,
        right_unitaries,
        compressed_deltas,
    }
}

impl TruncationContext {
    /// Dimension of the compressed algebra as a real vector space.
    pub fn algebra_dim(&self) -> usize {
        self.algebra_basis.len()
    }

    pub fn left_unitary(&self, g: usize) -> &CMat {
        &self.left_unitaries[g]
    }

    pub fn right_unitary(&self, g: usize) -> &CMat {
        &self.right_unitaries[g]
    }

    pub fn compressed_delta(&self, x: usize) -> &CMat {
        &self.compressed_deltas[x]
    }

    /// The order unit: the projection seen on its own range.
    pub fn unit(&self) -> TruncatedOperator {
        TruncatedOperator {
            matrix: CMat::identity(self.ambient_dim, self.ambient_dim),
        }
    }

    /// `τ(f) = P M_f P` restricted to the truncated space.
    pub fn compress(&self, f: &RealFunction) -> TruncatedOperator {
        let k = self.ambient_dim;
        let mut m = CMat::zeros(k, k);
        for (x, &v) in f.0.iter().enumerate() {
            if v != 0.0 {
                m += self.compressed_deltas[x].scale(v);
            }
        }
        TruncatedOperator { matrix: m }
    }

    /// Conjugate by the compressed translation unitary of `g`.
    pub fn act(&self, action: Action, g: usize, t: &TruncatedOperator) -> TruncatedOperator {
        let u = match action {
            Action::Left => &self.left_unitaries[g],
            Action::Right => &self.right_unitaries[g],
        };
        TruncatedOperator {
            matrix: u * &t.matrix * u.adjoint(),
        }
    }

    /// Coordinates of `t` in the algebra basis.
    pub fn coeffs(&self, t: &TruncatedOperator) -> Vec<f64> {
        self.algebra_basis
            .iter()
            .map(|b| trace_inner(b, &t.matrix).re)
            .collect()
    }

    /// Reassemble an operator from algebra-basis coordinates.
    pub fn from_coeffs(&self, coeffs: &[f64]) -> TruncatedOperator {
        let k = self.ambient_dim;
        let mut m = CMat::zeros(k, k);
        for (b, &c) in self.algebra_basis.iter().zip(coeffs) {
            if c != 0.0 {
                m += b.scale(c);
            }
        }
        TruncatedOperator { matrix: m }
    }

    /// Distance from `t` to its projection onto the algebra span.
    pub fn reconstruction_residual(&self, t: &TruncatedOperator) -> f64 {
        let rebuilt = self.from_coeffs(&self.coeffs(t));
        crate::linalg::max_abs_diff(&rebuilt.matrix, &t.matrix)
    }

    /// The reverse map: `υ(T)(g) = ⟨state, ρ_g(T)⟩` for a density matrix
    /// `state` on the truncated space.
    pub fn upsilon(
        &self,
        state: &CMat,
        t: &TruncatedOperator,
    ) -> Result<RealFunction, TruncationError> {
        let k = self.ambient_dim;
        if state.shape() != (k, k) {
            return Err(TruncationError::DimensionMismatch {
                expected: k,
                got: state.nrows(),
            });
        }
        let values = (0..self.group.order)
            .map(|g| {
                let moved = self.act(Action::Right, g, t);
                trace_prod_re(state, &moved.matrix)
            })
            .collect();
        Ok(RealFunction(values))
    }
}

/// `Re trace(a·b)` without forming the product.
pub fn trace_prod_re(a: &CMat, b: &CMat) -> f64 {
    let k = a.nrows();
    let mut acc = 0.0;
    for i in 0..k {
        for j in 0..k {
            let p = a[(i, j)] * b[(j, i)];
            acc += p.re;
        }
    }
    acc
}
