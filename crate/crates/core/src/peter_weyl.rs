//! Irreducible unitary representations and the block decomposition of the
//! regular representation.
//!
//! For a finite group the square-integrable functions decompose into blocks
//! indexed by irreducible representations, one block per irrep of dimension
//! `d_ν²`, spanned by the matrix coefficients `g ↦ √d_ν·ν(g)_{ij}`. Under the
//! normalized counting inner product these coefficients are orthonormal, so
//! the projection onto any finite label set Λ is a plain sum of outer
//! products. Catalog families come with explicit matrices; abelian groups get
//! their characters constructed by successive cyclic extensions; anything
//! else must ship matrices in its group-spec document.

use thiserror::Error;

use crate::group::{Family, FiniteMetricGroup, GroupOrigin, SuppliedIrrep};
use crate::linalg::{cr, kron, max_abs_diff, CMat, CVec, C64};

/// Residual tolerance for unitarity, multiplicativity, and Schur
/// orthogonality of representation matrices.
pub const IRREP_TOL: f64 = 1e-10;

/// Re-orthonormalization tolerance for matrix-coefficient vectors.
const GRAM_SCHMIDT_TOL: f64 = 1e-12;

/// One irreducible unitary representation: a matrix per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<CMat>,
}

impl Irrep {
    /// Character value at element `g`.
    pub fn character(&self, g: usize) -> C64 {
        self.matrices[g].trace()
    }
}

/// A complete set of pairwise-inequivalent irreps for one group.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    pub irreps: Vec<Irrep>,
}

impl IrrepSet {
    pub fn labels(&self) -> Vec<String> {
        self.irreps.iter().map(|r| r.label.clone()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.label == label)
    }

    /// Index of the trivial representation (dim 1, identically one).
    pub fn trivial(&self) -> Option<usize> {
        self.irreps.iter().position(|r| {
            r.dim == 1
                && r.matrices
                    .iter()
                    .all(|m| (m[(0, 0)] - cr(1.0)).norm() < 1e-8)
        })
    }

    /// Index of the irrep whose character is the complex conjugate of
    /// `idx`'s character. Characters separate irreps, so this is unique.
    pub fn conjugate_partner(&self, idx: usize, order: usize) -> usize {
        let target: Vec<C64> = (0..order)
            .map(|g| self.irreps[idx].character(g).conj())
            .collect();
        for (j, r) in self.irreps.iter().enumerate() {
            let worst = (0..order)
                .map(|g| (r.character(g) - target[g]).norm())
                .fold(0.0f64, f64::max);
            if worst < 1e-8 {
                return j;
            }
        }
        idx
    }
}

#[derive(Debug, Error)]
pub enum PwError {
    #[error("irreps must be supplied for non-catalog nonabelian groups")]
    NeedSuppliedIrreps,
    #[error("incomplete irrep set: sum of squared dimensions is {got}, group order is {order}")]
    Incomplete { got: usize, order: usize },
    #[error("irrep {label} is not unitary at element {element} (residual {residual:e})")]
    NotUnitary {
        label: String,
        element: usize,
        residual: f64,
    },
    #[error("irrep {label} is not multiplicative at pair ({x},{y}) (residual {residual:e})")]
    NotMultiplicative {
        label: String,
        x: usize,
        y: usize,
        residual: f64,
    },
    #[error("irrep {label} does not map the identity to the identity matrix")]
    IdentityImage { label: String },
    #[error("Schur orthogonality fails: residual {0:e}")]
    SchurResidual(f64),
    #[error("irrep {0} contains non-finite matrix entries")]
    NonFiniteEntries(String),
    #[error("unknown irrep label: {0}")]
    UnknownLabel(String),
    #[error("label set must be nonempty")]
    EmptyLabelSet,
    #[error(
        "matrix-coefficient vectors degenerate for label set (kept {kept}, expected {expected})"
    )]
    DegenerateCoefficients { kept: usize, expected: usize },
}

// ---------------------------------------------------------------------------
// Catalog representations
// ---------------------------------------------------------------------------

fn cyclic_irreps(n: usize) -> Vec<Irrep> {
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .map(|k| Irrep {
            label: format!("chi_{k}"),
            dim: 1,
            matrices: (0..n)
                .map(|j| CMat::from_element(1, 1, C64::from_polar(1.0, tau * ((j * k) % n) as f64)))
                .collect(),
        })
        .collect()
}

fn dihedral_irreps(n: usize) -> Vec<Irrep> {
    let order = 2 * n;
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let mut out = Vec::new();
    let one_dim = |label: &str, f: &dyn Fn(bool, usize) -> f64| Irrep {
        label: label.to_string(),
        dim: 1,
        matrices: (0..order)
            .map(|e| CMat::from_element(1, 1, cr(f(e >= n, e % n))))
            .collect(),
    };
    out.push(one_dim("triv", &|_, _| 1.0));
    out.push(one_dim("sgn_s", &|refl, _| if refl { -1.0 } else { 1.0 }));
    if n.is_multiple_of(2) {
        out.push(one_dim("sgn_r", &|_, j| {
            if j % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }));
        out.push(one_dim("sgn_rs", &|refl, j| {
            let base = if j % 2 == 0 { 1.0 } else { -1.0 };
            if refl {
                -base
            } else {
                base
            }
        }));
    }
    let two_dim_count = if n.is_multiple_of(2) {
        n / 2 - 1
    } else {
        (n - 1) / 2
    };
    for h in 1..=two_dim_count {
        let matrices = (0..order)
            .map(|e| {
                let (refl, j) = (e >= n, e % n);
                let w = C64::from_polar(1.0, tau * ((h * j) % n) as f64);
                let zero = C64::default();
                if refl {
                    CMat::from_row_slice(2, 2, &[zero, w.conj(), w, zero])
                } else {
                    CMat::from_row_slice(2, 2, &[w, zero, zero, w.conj()])
                }
            })
            .collect();
        out.push(Irrep {
            label: format!("rho_{h}"),
            dim: 2,
            matrices,
        });
    }
    out
}

fn perm_sign(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Orthonormal rows spanning the sum-zero subspace of ℝ^k.
fn helmert_rows(k: usize) -> Vec<Vec<f64>> {
    (1..k)
        .map(|j| {
            let norm = (j as f64 * (j as f64 + 1.0)).sqrt();
            let mut row = vec![0.0; k];
            for item in row.iter_mut().take(j) {
                *item = 1.0 / norm;
            }
            row[j] = -(j as f64) / norm;
            row
        })
        .collect()
}

/// Permutation action on the orthogonal complement of the constants: the
/// `(k-1)`-dimensional standard representation, real orthogonal.
fn perm_complement_matrix(p: &[usize]) -> CMat {
    let k = p.len();
    let h = helmert_rows(k);
    let mut out = CMat::zeros(k - 1, k - 1);
    for a in 0..k - 1 {
        for b in 0..k - 1 {
            // (H M_p Hᵀ)[a][b] = Σ_i h[a][p(i)]·h[b][i]
            let mut acc = 0.0;
            for i in 0..k {
                acc += h[a][p[i]] * h[b][i];
            }
            out[(a, b)] = cr(acc);
        }
    }
    out
}

fn symmetric_irreps(k: usize) -> Vec<Irrep> {
    let perms = crate::group::permutations_lex(k);
    let order = perms.len();
    let mut out = Vec::new();
    out.push(Irrep {
        label: "triv".to_string(),
        dim: 1,
        matrices: (0..order)
            .map(|_| CMat::from_element(1, 1, cr(1.0)))
            .collect(),
    });
    out.push(Irrep {
        label: "sgn".to_string(),
        dim: 1,
        matrices: perms
            .iter()
            .map(|p| CMat::from_element(1, 1, cr(perm_sign(p))))
            .collect(),
    });
    if k == 4 {
        // The action on the three pairings {01|23, 02|13, 03|12} factors
        // through a quotient of order 6; compose with its 2-dim standard rep.
        let pairing_perm = |p: &[usize]| -> Vec<usize> {
            let partner_of_zero = [1usize, 2, 3];
            (0..3)
                .map(|m| {
                    let a = p[0];
                    let b = p[partner_of_zero[m]];
                    // Image pairing is indexed by the partner of 0.
                    let partner = if a == 0 {
                        b
                    } else if b == 0 {
                        a
                    } else {
                        (1..4)
                            .find(|&c| c != a && c != b)
                            .expect("complement element")
                    };
                    partner - 1
                })
                .collect()
        };
        out.push(Irrep {
            label: "pair".to_string(),
            dim: 2,
            matrices: perms
                .iter()
                .map(|p| perm_complement_matrix(&pairing_perm(p)))
                .collect(),
        });
    }
    if k >= 3 {
        let std_mats: Vec<CMat> = perms.iter().map(|p| perm_complement_matrix(p)).collect();
        out.push(Irrep {
            label: "std".to_string(),
            dim: k - 1,
            matrices: std_mats.clone(),
        });
        if k == 4 {
            let twisted = perms
                .iter()
                .zip(&std_mats)
                .map(|(p, m)| m.scale(perm_sign(p)))
                .collect();
            out.push(Irrep {
                label: "std_sgn".to_string(),
                dim: k - 1,
                matrices: twisted,
            });
        }
    }
    out
}

fn quaternion_irreps() -> Vec<Irrep> {
    let i = C64::new(0.0, 1.0);
    let zero = C64::default();
    let one = cr(1.0);
    // Basis images for 1, i, j, k of the 2-dim representation.
    let base = [
        CMat::identity(2, 2),
        CMat::from_row_slice(2, 2, &[i, zero, zero, -i]),
        CMat::from_row_slice(2, 2, &[zero, one, -one, zero]),
        CMat::from_row_slice(2, 2, &[zero, i, i, zero]),
    ];
    // Element e = 2·basis + (sign bit), matching the group table layout.
    let spin_mats: Vec<CMat> = (0..8)
        .map(|e: usize| {
            let m = base[e / 2].clone();
            if e.is_multiple_of(2) {
                m
            } else {
                -m
            }
        })
        .collect();
    let chi = |a: f64, b: f64| -> Vec<CMat> {
        // χ(±1)=1, χ(±i)=a, χ(±j)=b, χ(±k)=ab
        [1.0, 1.0, a, a, b, b, a * b, a * b]
            .iter()
            .map(|&v| CMat::from_element(1, 1, cr(v)))
            .collect()
    };
    vec![
        Irrep {
            label: "triv".to_string(),
            dim: 1,
            matrices: chi(1.0, 1.0),
        },
        Irrep {
            label: "chi_i".to_string(),
            dim: 1,
            matrices: chi(1.0, -1.0),
        },
        Irrep {
            label: "chi_j".to_string(),
            dim: 1,
            matrices: chi(-1.0, 1.0),
        },
        Irrep {
            label: "chi_k".to_string(),
            dim: 1,
            matrices: chi(-1.0, -1.0),
        },
        Irrep {
            label: "spin".to_string(),
            dim: 2,
            matrices: spin_mats,
        },
    ]
}

fn product_irreps(factors: &[Family]) -> Result<Vec<Irrep>, PwError> {
    let factor_sets: Result<Vec<Vec<Irrep>>, PwError> = factors.iter().map(family_irreps).collect();
    let factor_sets = factor_sets?;
    let orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let total: usize = orders.iter().product();
    let unrank = |mut e: usize| -> Vec<usize> {
        let mut parts = vec![0usize; orders.len()];
        for i in (0..orders.len()).rev() {
            parts[i] = e % orders[i];
            e /= orders[i];
        }
        parts
    };

    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for set in &factor_sets {
        let mut next = Vec::new();
        for c in &combos {
            for r in 0..set.len() {
                let mut c2 = c.clone();
                c2.push(r);
                next.push(c2);
            }
        }
        combos = next;
    }

    let mut out = Vec::new();
    for combo in combos {
        let parts: Vec<&Irrep> = combo
            .iter()
            .zip(&factor_sets)
            .map(|(&r, set)| &set[r])
            .collect();
        let dim: usize = parts.iter().map(|r| r.dim).product();
        let label = parts
            .iter()
            .map(|r| r.label.as_str())
            .collect::<Vec<_>>()
            .join("*");
        let matrices = (0..total)
            .map(|e| {
                let idx = unrank(e);
                let mut m = CMat::identity(1, 1);
                for (r, &part_elem) in parts.iter().zip(&idx) {
                    m = kron(&m, &r.matrices[part_elem]);
                }
                m
            })
            .collect();
        out.push(Irrep {
            label,
            dim,
            matrices,
        });
    }
    Ok(out)
}

fn family_irreps(family: &Family) -> Result<Vec<Irrep>, PwError> {
    match family {
        Family::Cyclic(n) => Ok(cyclic_irreps(*n)),
        Family::Dihedral(n) => Ok(dihedral_irreps(*n)),
        Family::Symmetric(k) => Ok(symmetric_irreps(*k)),
        Family::Quaternion8 => Ok(quaternion_irreps()),
        Family::Product(fs) => product_irreps(fs),
    }
}

// ---------------------------------------------------------------------------
// Abelian groups: characters by successive cyclic extension
// ---------------------------------------------------------------------------

/// Characters of an abelian group from its multiplication table. Maintains a
/// subgroup together with its full character list; each step adjoins the
/// smallest missing element and extends every character along all roots of
/// unity of the relative order.
fn abelian_characters(g: &FiniteMetricGroup) -> Vec<Irrep> {
    let n = g.order;
    let mut in_h = vec![false; n];
    in_h[0] = true;
    let mut h_elems = vec![0usize];
    // Character values indexed by group element; only subgroup entries valid.
    let mut chars: Vec<Vec<C64>> = vec![vec![cr(1.0); n]];

    while h_elems.len() < n {
        let gen = (0..n)
            .find(|&x| !in_h[x])
            .expect("proper subgroup has a complement element");
        let mut m = 1usize;
        let mut p = gen;
        while !in_h[p] {
            p = g.mul(p, gen);
            m += 1;
        }
        let h0 = p; // gen^m, inside the current subgroup

        let mut gen_powers = vec![0usize; m];
        for j in 1..m {
            gen_powers[j] = g.mul(gen_powers[j - 1], gen);
        }

        let tau = 2.0 * std::f64::consts::PI;
        let mut new_chars = Vec::with_capacity(chars.len() * m);
        for chi in &chars {
            let theta = chi[h0].arg();
            for t in 0..m {
                let zeta = C64::from_polar(1.0, (theta + tau * t as f64) / m as f64);
                let mut v = vec![C64::default(); n];
                let mut zpow = cr(1.0);
                for &gp in gen_powers.iter() {
                    for &e in &h_elems {
                        v[g.mul(e, gp)] = chi[e] * zpow;
                    }
                    zpow *= zeta;
                }
                new_chars.push(v);
            }
        }

        let mut new_elems = Vec::with_capacity(h_elems.len() * m);
        for &gp in &gen_powers {
            for &e in &h_elems {
                let x = g.mul(e, gp);
                in_h[x] = true;
                new_elems.push(x);
            }
        }
        h_elems = new_elems;
        chars = new_chars;
    }

    chars
        .into_iter()
        .enumerate()
        .map(|(k, v)| Irrep {
            label: format!("chi_{k}"),
            dim: 1,
            matrices: v.into_iter().map(|c| CMat::from_element(1, 1, c)).collect(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Construction and verification
// ---------------------------------------------------------------------------

fn convert_supplied(data: &[SuppliedIrrep]) -> Vec<Irrep> {
    data.iter()
        .map(|d| Irrep {
            label: d.label.clone(),
            dim: d.dim,
            matrices: d
                .matrices
                .iter()
                .map(|m| {
                    let entries: Vec<C64> = m.iter().map(|&(re, im)| C64::new(re, im)).collect();
                    CMat::from_row_slice(d.dim, d.dim, &entries)
                })
                .collect(),
        })
        .collect()
}

/// Build the complete validated irrep set for a group.
pub fn build_irreps(g: &FiniteMetricGroup) -> Result<IrrepSet, PwError> {
    let irreps = match &g.origin {
        GroupOrigin::Catalog(family) => family_irreps(family)?,
        GroupOrigin::Document { irreps: Some(data) } => convert_supplied(data),
        GroupOrigin::Document { irreps: None } => {
            if g.is_abelian() {
                abelian_characters(g)
            } else {
                return Err(PwError::NeedSuppliedIrreps);
            }
        }
    };
    let set = IrrepSet { irreps };
    verify_irrep_set(&set, g)?;
    Ok(set)
}

/// Full validation: completeness, identity image, unitarity,
/// multiplicativity, and Schur orthogonality.
pub fn verify_irrep_set(set: &IrrepSet, g: &FiniteMetricGroup) -> Result<(), PwError> {
    let n = g.order;
    let total: usize = set.irreps.iter().map(|r| r.dim * r.dim).sum();
    if total != n {
        return Err(PwError::Incomplete {
            got: total,
            order: n,
        });
    }
    for r in &set.irreps {
        let finite = r
            .matrices
            .iter()
            .all(|m| m.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        if !finite {
            return Err(PwError::NonFiniteEntries(r.label.clone()));
        }
        let eye = CMat::identity(r.dim, r.dim);
        if max_abs_diff(&r.matrices[g.identity], &eye) > IRREP_TOL {
            return Err(PwError::IdentityImage {
                label: r.label.clone(),
            });
        }
        for (e, m) in r.matrices.iter().enumerate() {
            let residual = max_abs_diff(&(m * m.adjoint()), &eye);
            if residual > IRREP_TOL {
                return Err(PwError::NotUnitary {
                    label: r.label.clone(),
                    element: e,
                    residual,
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                let residual =
                    max_abs_diff(&r.matrices[g.mul(x, y)], &(&r.matrices[x] * &r.matrices[y]));
                if residual > IRREP_TOL {
                    return Err(PwError::NotMultiplicative {
                        label: r.label.clone(),
                        x,
                        y,
                        residual,
                    });
                }
            }
        }
    }
    let residual = verify_schur(set, g);
    if residual > IRREP_TOL {
        return Err(PwError::SchurResidual(residual));
    }
    Ok(())
}

/// Max Schur-orthogonality residual over all coefficient pairs:
/// `|(1/|G|)·Σ_g ν(g)_{ij}·conj(ν′(g)_{kl}) − δ_{νν′}δ_{ik}δ_{jl}/d_ν|`.
pub fn verify_schur(set: &IrrepSet, g: &FiniteMetricGroup) -> f64 {
    let n = g.order as f64;
    let mut worst = 0.0f64;
    for (a, ra) in set.irreps.iter().enumerate() {
        for (b, rb) in set.irreps.iter().enumerate() {
            for i in 0..ra.dim {
                for j in 0..ra.dim {
                    for k in 0..rb.dim {
                        for l in 0..rb.dim {
                            let mut acc = C64::default();
                            for e in 0..g.order {
                                acc += ra.matrices[e][(i, j)] * rb.matrices[e][(k, l)].conj();
                            }
                            acc /= cr(n);
                            let expect = if a == b && i == k && j == l {
                                cr(1.0 / ra.dim as f64)
                            } else {
                                C64::default()
                            };
                            worst = worst.max((acc - expect).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Regular actions
// ---------------------------------------------------------------------------

/// Left and right regular representations as permutations of the delta basis:
/// the left action sends `δ_y ↦ δ_{g·y}` and the right action `δ_y ↦ δ_{y·g⁻¹}`,
/// realizing `(U_g ψ)(x) = ψ(g⁻¹x)` and `(V_g ψ)(x) = ψ(x·g)`.
#[derive(Debug, Clone)]
pub struct RegularActions {
    /// `left[g][y] = g·y`
    pub left: Vec<Vec<usize>>,
    /// `right[g][y] = y·g⁻¹`
    pub right: Vec<Vec<usize>>,
}

pub fn build_regular_actions(g: &FiniteMetricGroup) -> RegularActions {
    let n = g.order;
    let left = (0..n)
        .map(|t| (0..n).map(|y| g.mul(t, y)).collect())
        .collect();
    let right = (0..n)
        .map(|t| (0..n).map(|y| g.mul(y, g.inverse(t))).collect())
        .collect();
    RegularActions { left, right }
}

impl RegularActions {
    fn perm_matrix(perm: &[usize]) -> CMat {
        let n = perm.len();
        let mut m = CMat::zeros(n, n);
        for (y, &img) in perm.iter().enumerate() {
            m[(img, y)] = cr(1.0);
        }
        m
    }

    /// Dense unitary for the left action of `g`.
    pub fn left_matrix(&self, g: usize) -> CMat {
        Self::perm_matrix(&self.left[g])
    }

    /// Dense unitary for the right action of `g`.
    pub fn right_matrix(&self, g: usize) -> CMat {
        Self::perm_matrix(&self.right[g])
    }
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

/// Orthogonal projection onto the blocks of a label set Λ.
#[derive(Debug, Clone)]
pub struct Projection {
    /// Canonically ordered (by irrep-set position), deduplicated labels.
    pub lambda: Vec<String>,
    /// Hermitian idempotent on the delta basis.
    pub matrix: CMat,
    /// Σ over Λ of d_ν², equals the trace of `matrix`.
    pub rank: usize,
    /// Orthonormal columns spanning the range (the re-orthonormalized
    /// matrix-coefficient vectors, in deterministic order).
    pub basis: CMat,
}

/// Build `P_Λ` from orthonormalized matrix-coefficient vectors
/// `e_{ν,i,j}(g) = √d_ν·ν(g)_{ij}` under the Haar-normalized inner product.
pub fn build_projection(
    set: &IrrepSet,
    lambda: &[String],
    g: &FiniteMetricGroup,
) -> Result<Projection, PwError> {
    let n = g.order;
    if lambda.is_empty() {
        return Err(PwError::EmptyLabelSet);
    }
    let mut selected: Vec<usize> = Vec::new();
    for label in lambda {
        let pos = set
            .position(label)
            .ok_or_else(|| PwError::UnknownLabel(label.clone()))?;
        if !selected.contains(&pos) {
            selected.push(pos);
        }
    }
    selected.sort_unstable();

    let expected: usize = selected.iter().map(|&p| set.irreps[p].dim.pow(2)).sum();
    let mut kept: Vec<CVec> = Vec::with_capacity(expected);
    let scale = 1.0 / (n as f64).sqrt();
    for &p in &selected {
        let r = &set.irreps[p];
        let root_d = (r.dim as f64).sqrt();
        for i in 0..r.dim {
            for j in 0..r.dim {
                let mut v = CVec::from_iterator(
                    n,
                    (0..n).map(|e| r.matrices[e][(i, j)].scale(root_d * scale)),
                );
                // Two orthogonalization passes to clear rounding drift.
                for _ in 0..2 {
                    for b in &kept {
                        let overlap = b.dotc(&v);
                        v -= b.scale_cpx(overlap);
                    }
                }
                let norm = v.norm();
                if norm < GRAM_SCHMIDT_TOL {
                    continue;
                }
                kept.push(v.unscale(norm));
            }
        }
    }
    if kept.len() != expected {
        return Err(PwError::DegenerateCoefficients {
            kept: kept.len(),
            expected,
        });
    }

    let mut basis = CMat::zeros(n, kept.len());
    for (c, v) in kept.iter().enumerate() {
        basis.set_column(c, v);
    }
    let matrix = &basis * basis.adjoint();
    Ok(Projection {
        lambda: selected
            .iter()
            .map(|&p| set.irreps[p].label.clone())
            .collect(),
        matrix,
        rank: expected,
        basis,
    })
}

trait ScaleCpx {
    fn scale_cpx(&self, s: C64) -> Self;
}

impl ScaleCpx for CVec {
    fn scale_cpx(&self, s: C64) -> Self {
        self.map(|x| x * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_catalog_group, parse_descriptor, standard_catalog_descriptors};
    use crate::linalg::trace_re;

    fn group(desc: &str) -> FiniteMetricGroup {
        let (f, m) = parse_descriptor(desc).unwrap();
        make_catalog_group(&f, m).unwrap()
    }

    #[test]
    fn z2_characters_are_signs() {
        let g = group("cyclic:2:word");
        let set = build_irreps(&g).unwrap();
        assert_eq!(set.irreps.len(), 2);
        assert_eq!(set.irreps[0].matrices[1][(0, 0)], cr(1.0));
        assert!((set.irreps[1].matrices[1][(0, 0)] - cr(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn cyclic_characters_match_roots_of_unity() {
        let n = 5;
        let g = group("cyclic:5:word");
        let set = build_irreps(&g).unwrap();
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        for k in 0..n {
            for j in 0..n {
                let expect = C64::from_polar(1.0, tau * (j * k) as f64);
                let got = set.irreps[k].matrices[j][(0, 0)];
                assert!((got - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn s3_dimensions_and_completeness() {
        let g = group("symmetric:3:word");
        let set = build_irreps(&g).unwrap();
        let dims: Vec<usize> = set.irreps.iter().map(|r| r.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        let total: usize = dims.iter().map(|d| d * d).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn schur_residuals_small_on_catalog() {
        for desc in [
            "cyclic:3:word",
            "symmetric:3:word",
            "symmetric:4:word",
            "quaternion8:word",
        ] {
            let g = group(desc);
            let set = build_irreps(&g).unwrap();
            let res = verify_schur(&set, &g);
            assert!(res <= 1e-10, "{desc}: residual {res:e}");
        }
    }

    #[test]
    fn duplicated_irrep_is_flagged_by_schur() {
        let g = group("cyclic:3:word");
        let set = build_irreps(&g).unwrap();
        let mut bad = set.clone();
        bad.irreps[2] = bad.irreps[1].clone();
        let res = verify_schur(&bad, &g);
        // Orthogonality fails for equivalent pairs with residual ≈ 1/d = 1.
        assert!(res > 0.5, "residual {res}");
    }

    #[test]
    fn abelian_duality_from_document_table() {
        // A z6 table with no supplied irreps exercises the extension
        // algorithm rather than the catalog formula.
        let n = 6;
        let doc = crate::format::GroupSpecDoc {
            name: "z6".to_string(),
            order: n,
            labels: (0..n).map(|j| j.to_string()).collect(),
            mult_table: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a + b) % n))
                .collect(),
            metric: {
                let delta = [0.0, 1.0, 2.0, 3.0, 2.0, 1.0];
                (0..n)
                    .flat_map(|a| (0..n).map(move |b| delta[(b + n - a) % n]))
                    .collect()
            },
            irreps: None,
        };
        let g = crate::format::group_from_doc(doc).unwrap();
        let set = build_irreps(&g).unwrap();
        assert_eq!(set.irreps.len(), 6);
        assert_eq!(set.trivial(), Some(0));
        assert!(verify_schur(&set, &g) < 1e-10);
    }

    #[test]
    fn nonabelian_document_without_irreps_is_rejected() {
        let s3 = group("symmetric:3:word");
        let mut doc_group = s3.clone();
        doc_group.origin = GroupOrigin::Document { irreps: None };
        assert!(matches!(
            build_irreps(&doc_group),
            Err(PwError::NeedSuppliedIrreps)
        ));
    }

    fn as_supplied(set: &IrrepSet) -> Vec<SuppliedIrrep> {
        set.irreps
            .iter()
            .map(|r| SuppliedIrrep {
                label: r.label.clone(),
                dim: r.dim,
                matrices: r
                    .matrices
                    .iter()
                    .map(|m| {
                        let mut flat = Vec::with_capacity(r.dim * r.dim);
                        for i in 0..r.dim {
                            for j in 0..r.dim {
                                flat.push((m[(i, j)].re, m[(i, j)].im));
                            }
                        }
                        flat
                    })
                    .collect(),
            })
            .collect()
    }

    #[test]
    fn supplied_irreps_round_trip_for_nonabelian_document() {
        let s3 = group("symmetric:3:word");
        let set = build_irreps(&s3).unwrap();
        let mut doc_group = s3.clone();
        doc_group.origin = GroupOrigin::Document {
            irreps: Some(as_supplied(&set)),
        };
        let rebuilt = build_irreps(&doc_group).unwrap();
        assert_eq!(rebuilt.irreps.len(), 3);
        assert!(verify_schur(&rebuilt, &doc_group) < 1e-10);
    }

    #[test]
    fn corrupted_supplied_irreps_are_rejected() {
        let s3 = group("symmetric:3:word");
        let set = build_irreps(&s3).unwrap();

        let mut non_unitary = as_supplied(&set);
        non_unitary[2].matrices[1][0].0 += 0.5;
        let mut doc_group = s3.clone();
        doc_group.origin = GroupOrigin::Document {
            irreps: Some(non_unitary),
        };
        assert!(matches!(
            build_irreps(&doc_group),
            Err(PwError::NotUnitary { .. } | PwError::NotMultiplicative { .. })
        ));

        let mut incomplete = as_supplied(&set);
        incomplete.pop();
        let mut doc_group = s3.clone();
        doc_group.origin = GroupOrigin::Document {
            irreps: Some(incomplete),
        };
        assert!(matches!(
            build_irreps(&doc_group),
            Err(PwError::Incomplete { got: 2, order: 6 })
        ));
    }

    #[test]
    fn regular_actions_are_permutations_that_commute() {
        let g = group("dihedral:4:word");
        let acts = build_regular_actions(&g);
        let n = g.order;
        let eye = CMat::identity(n, n);
        assert_eq!(max_abs_diff(&acts.left_matrix(0), &eye), 0.0);
        assert_eq!(max_abs_diff(&acts.right_matrix(0), &eye), 0.0);
        for a in 0..n {
            for b in 0..n {
                let ufirst = &acts.right_matrix(b) * acts.left_matrix(a);
                let vfirst = &acts.left_matrix(a) * acts.right_matrix(b);
                assert_eq!(max_abs_diff(&ufirst, &vfirst), 0.0, "U_{a} V_{b}");
            }
        }
    }

    #[test]
    fn left_action_is_translation_on_z3() {
        let g = group("cyclic:3:word");
        let acts = build_regular_actions(&g);
        // U_1 sends δ_x to δ_{1+x}
        assert_eq!(acts.left[1], vec![1, 2, 0]);
    }

    #[test]
    fn trivial_projection_is_uniform_averaging() {
        let g = group("cyclic:3:word");
        let set = build_irreps(&g).unwrap();
        let p = build_projection(&set, &["chi_0".to_string()], &g).unwrap();
        assert_eq!(p.rank, 1);
        for i in 0..3 {
            for j in 0..3 {
                assert!((p.matrix[(i, j)] - cr(1.0 / 3.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn full_projection_is_identity() {
        for desc in ["cyclic:4:word", "symmetric:3:word", "quaternion8:word"] {
            let g = group(desc);
            let set = build_irreps(&g).unwrap();
            let p = build_projection(&set, &set.labels(), &g).unwrap();
            assert_eq!(p.rank, g.order);
            assert!(
                max_abs_diff(&p.matrix, &CMat::identity(g.order, g.order)) < 1e-12,
                "{desc}"
            );
        }
    }

    #[test]
    fn projection_invariants_on_partial_lambda() {
        let g = group("cyclic:3:word");
        let set = build_irreps(&g).unwrap();
        let p = build_projection(&set, &["chi_0".to_string(), "chi_1".to_string()], &g).unwrap();
        assert_eq!(p.rank, 2);
        assert!(max_abs_diff(&(&p.matrix * &p.matrix), &p.matrix) < 1e-12);
        assert!(max_abs_diff(&p.matrix.adjoint(), &p.matrix) < 1e-14);
        assert!((trace_re(&p.matrix) - 2.0).abs() < 1e-12);
        let acts = build_regular_actions(&g);
        for t in 0..3 {
            let u = acts.left_matrix(t);
            let v = acts.right_matrix(t);
            assert!(max_abs_diff(&(&p.matrix * &u), &(&u * &p.matrix)) < 1e-12);
            assert!(max_abs_diff(&(&p.matrix * &v), &(&v * &p.matrix)) < 1e-12);
        }
    }

    #[test]
    fn intersection_of_projections() {
        let g = group("cyclic:5:word");
        let set = build_irreps(&g).unwrap();
        let l1: Vec<String> = vec!["chi_0".into(), "chi_1".into(), "chi_2".into()];
        let l2: Vec<String> = vec!["chi_1".into(), "chi_3".into()];
        let l12: Vec<String> = vec!["chi_1".into()];
        let p1 = build_projection(&set, &l1, &g).unwrap();
        let p2 = build_projection(&set, &l2, &g).unwrap();
        let p12 = build_projection(&set, &l12, &g).unwrap();
        assert!(max_abs_diff(&(&p1.matrix * &p2.matrix), &p12.matrix) < 1e-12);
    }

    #[test]
    fn unknown_label_is_an_error() {
        let g = group("cyclic:3:word");
        let set = build_irreps(&g).unwrap();
        assert!(matches!(
            build_projection(&set, &["nope".to_string()], &g),
            Err(PwError::UnknownLabel(_))
        ));
        assert!(matches!(
            build_projection(&set, &[], &g),
            Err(PwError::EmptyLabelSet)
        ));
    }

    #[test]
    fn whole_catalog_passes_validation() {
        for desc in standard_catalog_descriptors(24) {
            let g = group(&desc);
            let set = build_irreps(&g).unwrap();
            let total: usize = set.irreps.iter().map(|r| r.dim * r.dim).sum();
            assert_eq!(total, g.order, "{desc}");
        }
    }

    #[test]
    fn conjugate_partner_pairs_cyclic_characters() {
        let g = group("cyclic:12:word");
        let set = build_irreps(&g).unwrap();
        assert_eq!(set.conjugate_partner(1, g.order), 11);
        assert_eq!(set.conjugate_partner(6, g.order), 6);
        assert_eq!(set.conjugate_partner(0, g.order), 0);
    }
}
