//! Finite groups carrying a bi-invariant metric.
//!
//! A metric `d` on a group is bi-invariant when
//! `d(gx, gy) = d(x, y) = d(xg, yg)` for all `g, x, y`. Word metrics built
//! from conjugation-closed generating sets have this property exactly (word
//! length is a class function when the generating set is closed under
//! conjugation), which is why every catalog family ships such a set.
//!
//! Element 0 is always the identity; metrics are stored as a full matrix of
//! doubles derived from the single distance-to-identity table, so translation
//! invariance holds as exact float equality for catalog groups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for metric identities (symmetry, triangle, bi-invariance).
/// Group-table axioms are integer-exact and checked with tolerance zero.
pub const METRIC_TOL: f64 = 1e-12;

/// Raw irreducible-representation data supplied alongside a group document.
///
/// Matrices are stored per group element, row-major, as (re, im) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SuppliedIrrep {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<Vec<(f64, f64)>>,
}

/// Catalog family descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Product(Vec<Family>),
}

impl Family {
    pub fn order(&self) -> usize {
        match self {
            Family::Cyclic(n) => *n,
            Family::Dihedral(n) => 2 * n,
            Family::Symmetric(k) => (1..=*k).product(),
            Family::Quaternion8 => 8,
            Family::Product(fs) => fs.iter().map(|f| f.order()).product(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Family::Cyclic(n) => format!("cyclic({n})"),
            Family::Dihedral(n) => format!("dihedral({n})"),
            Family::Symmetric(k) => format!("symmetric({k})"),
            Family::Quaternion8 => "quaternion8".to_string(),
            Family::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.describe()).collect();
                format!("product({})", parts.join(","))
            }
        }
    }
}

/// Metric selection when constructing a catalog group.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricKind {
    /// Word metric of the built-in conjugation-closed generating set.
    Word,
    /// Arc-length metric `d(j,k) = (2π/n)·min(|j−k|, n−|j−k|)`; cyclic only.
    Geodesic,
    /// Caller-provided full matrix, row-major; must pass validation.
    Custom(Vec<f64>),
}

/// Where a group came from; drives irreducible-representation construction.
#[derive(Debug, Clone)]
pub enum GroupOrigin {
    Catalog(Family),
    /// Loaded from a group-spec document, possibly with supplied irreps.
    Document {
        irreps: Option<Vec<SuppliedIrrep>>,
    },
}

/// A finite group with a bi-invariant metric.
#[derive(Debug, Clone)]
pub struct FiniteMetricGroup {
    pub name: String,
    pub order: usize,
    pub labels: Vec<String>,
    /// Row-major multiplication table: `mult[a * order + b] = a·b`.
    pub mult: Vec<usize>,
    pub inv: Vec<usize>,
    /// Always 0 by construction; validation enforces it.
    pub identity: usize,
    /// Row-major distance matrix.
    pub metric: Vec<f64>,
    pub origin: GroupOrigin,
}

/// The unique translation-invariant probability measure: uniform weights.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarMeasure {
    pub weights: Vec<f64>,
}

/// The function Δ(x) = d(e, x).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub delta: Vec<f64>,
}

impl FiniteMetricGroup {
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> f64 {
        self.metric[x * self.order + y]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn diameter(&self) -> f64 {
        self.metric.iter().copied().fold(0.0, f64::max)
    }

    pub fn haar(&self) -> HaarMeasure {
        HaarMeasure {
            weights: vec![1.0 / self.order as f64; self.order],
        }
    }
}

/// Δ(x) = d(identity, x) for a validated group.
pub fn distance_profile(g: &FiniteMetricGroup) -> DistanceProfile {
    DistanceProfile {
        delta: (0..g.order).map(|x| g.dist(g.identity, x)).collect(),
    }
}

impl DistanceProfile {
    /// Mean of Δ under the Haar measure.
    pub fn haar_mean(&self) -> f64 {
        self.delta.iter().sum::<f64>() / self.delta.len() as f64
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// A single violated axiom with witness indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NotAssociative {
        x: usize,
        y: usize,
        z: usize,
    },
    IdentityNotNeutral {
        x: usize,
    },
    IdentityNotZero {
        claimed: usize,
    },
    InverseFailed {
        x: usize,
    },
    MetricNotSymmetric {
        x: usize,
        y: usize,
    },
    MetricDiagonalNonzero {
        x: usize,
        value: f64,
    },
    MetricVanishesOffDiagonal {
        x: usize,
        y: usize,
    },
    MetricNegative {
        x: usize,
        y: usize,
        value: f64,
    },
    MetricNotFinite {
        x: usize,
        y: usize,
    },
    TriangleInequality {
        x: usize,
        y: usize,
        z: usize,
        excess: f64,
    },
    NotLeftInvariant {
        g: usize,
        x: usize,
        y: usize,
    },
    NotRightInvariant {
        g: usize,
        x: usize,
        y: usize,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotAssociative { x, y, z } => {
                write!(f, "multiplication not associative at ({x},{y},{z})")
            }
            Violation::IdentityNotNeutral { x } => {
                write!(f, "identity is not two-sided neutral at {x}")
            }
            Violation::IdentityNotZero { claimed } => {
                write!(f, "identity must be element 0, found {claimed}")
            }
            Violation::InverseFailed { x } => write!(f, "inverse table fails at {x}"),
            Violation::MetricNotSymmetric { x, y } => {
                write!(f, "metric not symmetric at ({x},{y})")
            }
            Violation::MetricDiagonalNonzero { x, value } => {
                write!(f, "metric not zero on diagonal at {x} (value {value})")
            }
            Violation::MetricVanishesOffDiagonal { x, y } => {
                write!(f, "metric vanishes off the diagonal at ({x},{y})")
            }
            Violation::MetricNegative { x, y, value } => {
                write!(f, "metric negative at ({x},{y}) (value {value})")
            }
            Violation::MetricNotFinite { x, y } => {
                write!(f, "metric entry not finite at ({x},{y})")
            }
            Violation::TriangleInequality { x, y, z, excess } => {
                write!(
                    f,
                    "triangle inequality fails at ({x},{y},{z}) by {excess:e}"
                )
            }
            Violation::NotLeftInvariant { g, x, y } => {
                write!(f, "metric not left-invariant: g={g}, pair ({x},{y})")
            }
            Violation::NotRightInvariant { g, x, y } => {
                write!(f, "metric not right-invariant: g={g}, pair ({x},{y})")
            }
        }
    }
}

/// Result of scanning every axiom; empty iff the group is valid.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive axiom scan. Violations are report entries, not errors.
pub fn validate_group(g: &FiniteMetricGroup) -> ValidationReport {
    let n = g.order;
    let mut report = ValidationReport::default();

    if g.identity != 0 {
        report.violations.push(Violation::IdentityNotZero {
            claimed: g.identity,
        });
    }
    for x in 0..n {
        if g.mul(g.identity, x) != x || g.mul(x, g.identity) != x {
            report.violations.push(Violation::IdentityNotNeutral { x });
        }
        if g.mul(x, g.inv[x]) != g.identity || g.mul(g.inv[x], x) != g.identity {
            report.violations.push(Violation::InverseFailed { x });
        }
    }
    'assoc: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if g.mul(g.mul(x, y), z) != g.mul(x, g.mul(y, z)) {
                    report
                        .violations
                        .push(Violation::NotAssociative { x, y, z });
                    break 'assoc;
                }
            }
        }
    }

    for x in 0..n {
        let dxx = g.dist(x, x);
        if !(dxx.abs() <= METRIC_TOL) {
            report
                .violations
                .push(Violation::MetricDiagonalNonzero { x, value: dxx });
        }
        for y in 0..n {
            let d = g.dist(x, y);
            if !d.is_finite() {
                report.violations.push(Violation::MetricNotFinite { x, y });
                continue;
            }
            if d < -METRIC_TOL {
                report
                    .violations
                    .push(Violation::MetricNegative { x, y, value: d });
            }
            if x != y && d.abs() <= METRIC_TOL {
                report
                    .violations
                    .push(Violation::MetricVanishesOffDiagonal { x, y });
            }
            if (d - g.dist(y, x)).abs() > METRIC_TOL {
                report
                    .violations
                    .push(Violation::MetricNotSymmetric { x, y });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let excess = g.dist(x, z) - g.dist(x, y) - g.dist(y, z);
                if excess > METRIC_TOL {
                    report
                        .violations
                        .push(Violation::TriangleInequality { x, y, z, excess });
                }
            }
        }
    }
    for g_el in 0..n {
        for x in 0..n {
            for y in 0..n {
                let d = g.dist(x, y);
                if (g.dist(g.mul(g_el, x), g.mul(g_el, y)) - d).abs() > METRIC_TOL {
                    report
                        .violations
                        .push(Violation::NotLeftInvariant { g: g_el, x, y });
                }
                if (g.dist(g.mul(x, g_el), g.mul(y, g_el)) - d).abs() > METRIC_TOL {
                    report
                        .violations
                        .push(Violation::NotRightInvariant { g: g_el, x, y });
                }
            }
        }
    }

    report
}

// ---------------------------------------------------------------------------
// Catalog construction
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unsupported family parameter: {0}")]
    UnsupportedFamily(String),
    #[error("group validation failed: {} violation(s), first: {}", .0.violations.len(), .0.violations[0])]
    Validation(ValidationReport),
    #[error("custom metric has wrong length: expected {expected}, got {got}")]
    MetricShape { expected: usize, got: usize },
    #[error("geodesic metric is only defined for cyclic groups")]
    GeodesicNotCyclic,
}

struct Table {
    labels: Vec<String>,
    mult: Vec<usize>,
    /// Conjugation-closed generating set (element indices).
    generators: Vec<usize>,
}

fn cyclic_table(n: usize) -> Table {
    let mult = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a + b) % n))
        .collect();
    let mut generators = vec![1 % n];
    if n > 2 {
        generators.push(n - 1);
    }
    Table {
        labels: (0..n).map(|j| j.to_string()).collect(),
        mult,
        generators,
    }
}

/// Dihedral group of order 2n: indices 0..n are rotations r^j, n..2n are
/// reflections s·r^j.
fn dihedral_table(n: usize) -> Table {
    let order = 2 * n;
    let mut mult = vec![0usize; order * order];
    let idx = |refl: bool, j: usize| if refl { n + j % n } else { j % n };
    for a in 0..order {
        for b in 0..order {
            let (ra, ja) = (a >= n, a % n);
            let (rb, jb) = (b >= n, b % n);
            // r^i·r^j = r^{i+j}; r^i·sr^j = sr^{j-i}; sr^i·r^j = sr^{i+j};
            // sr^i·sr^j = r^{j-i}.
            let prod = match (ra, rb) {
                (false, false) => idx(false, ja + jb),
                (false, true) => idx(true, (jb + n - ja) % n),
                (true, false) => idx(true, ja + jb),
                (true, true) => idx(false, (jb + n - ja) % n),
            };
            mult[a * order + b] = prod;
        }
    }
    let mut labels: Vec<String> = (0..n).map(|j| format!("r{j}")).collect();
    labels.extend((0..n).map(|j| format!("s{j}")));
    // {r, r^-1} is a conjugacy class; reflections are a union of classes.
    let mut generators = vec![1 % n];
    if n > 2 {
        generators.push(n - 1);
    }
    generators.extend(n..2 * n);
    generators.retain(|&g| g != 0);
    generators.dedup();
    Table {
        labels,
        mult,
        generators,
    }
}

/// All permutations of 0..k in lexicographic one-line order; the group
/// element indexing of the symmetric family.
pub(crate) fn permutations_lex(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in out {
            for v in 0..k {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn symmetric_table(k: usize) -> Table {
    let perms = permutations_lex(k);
    let order = perms.len();
    let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let mut mult = vec![0usize; order * order];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            // (σ·τ)(x) = σ(τ(x))
            let prod: Vec<usize> = (0..k).map(|x| pa[pb[x]]).collect();
            mult[a * order + b] = index_of(&prod);
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|v| (v + 1).to_string()).collect::<String>())
        .collect();
    // All transpositions: a full conjugacy class that generates.
    let mut generators = Vec::new();
    for (a, p) in perms.iter().enumerate() {
        let moved: Vec<usize> = (0..k).filter(|&x| p[x] != x).collect();
        if moved.len() == 2 && p[moved[0]] == moved[1] {
            generators.push(a);
        }
    }
    Table {
        labels,
        mult,
        generators,
    }
}

/// Basis-element products for {1, i, j, k}: `(sign, index)`.
const QUATERNION_BASIS: [[(i8, usize); 4]; 4] = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
];

/// Quaternion group: indices 0..8 are 1, -1, i, -i, j, -j, k, -k.
fn quaternion_table() -> Table {
    let enc = |sign: i8, basis: usize| -> usize { 2 * basis + usize::from(sign < 0) };
    let dec = |e: usize| -> (i8, usize) { (if e.is_multiple_of(2) { 1 } else { -1 }, e / 2) };
    let order = 8;
    let mut mult = vec![0usize; order * order];
    for a in 0..order {
        for b in 0..order {
            let (sa, ba) = dec(a);
            let (sb, bb) = dec(b);
            let (sp, bp) = QUATERNION_BASIS[ba][bb];
            mult[a * order + b] = enc(sa * sb * sp, bp);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Table {
        labels,
        mult,
        generators: vec![2, 3, 4, 5, 6, 7],
    }
}

fn product_table(factors: &[Table]) -> Table {
    let orders: Vec<usize> = factors.iter().map(|t| t.labels.len()).collect();
    let order: usize = orders.iter().product();
    let unrank = |mut e: usize| -> Vec<usize> {
        let mut parts = vec![0usize; orders.len()];
        for i in (0..orders.len()).rev() {
            parts[i] = e % orders[i];
            e /= orders[i];
        }
        parts
    };
    let rank = |parts: &[usize]| -> usize {
        parts
            .iter()
            .zip(&orders)
            .fold(0, |acc, (&p, &n)| acc * n + p)
    };
    let mut mult = vec![0usize; order * order];
    for a in 0..order {
        let pa = unrank(a);
        for b in 0..order {
            let pb = unrank(b);
            let prod: Vec<usize> = pa
                .iter()
                .zip(&pb)
                .zip(factors)
                .map(|((&x, &y), t)| t.mult[x * t.labels.len() + y])
                .collect();
            mult[a * order + b] = rank(&prod);
        }
    }
    let labels = (0..order)
        .map(|e| {
            unrank(e)
                .iter()
                .zip(factors)
                .map(|(&p, t)| t.labels[p].clone())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    let mut generators = Vec::new();
    for (i, t) in factors.iter().enumerate() {
        for &s in &t.generators {
            let mut parts = vec![0usize; factors.len()];
            parts[i] = s;
            generators.push(rank(&parts));
        }
    }
    Table {
        labels,
        mult,
        generators,
    }
}

fn build_table(family: &Family) -> Result<Table, GroupError> {
    match family {
        Family::Cyclic(n) if *n >= 2 => Ok(cyclic_table(*n)),
        Family::Dihedral(n) if *n >= 2 => Ok(dihedral_table(*n)),
        Family::Symmetric(k) if (2..=4).contains(k) => Ok(symmetric_table(*k)),
        Family::Quaternion8 => Ok(quaternion_table()),
        Family::Product(fs) if fs.len() >= 2 => {
            let tables: Result<Vec<Table>, GroupError> = fs.iter().map(build_table).collect();
            Ok(product_table(&tables?))
        }
        other => Err(GroupError::UnsupportedFamily(other.describe())),
    }
}

fn inverse_table(order: usize, mult: &[usize]) -> Vec<usize> {
    (0..order)
        .map(|a| {
            (0..order)
                .find(|&b| mult[a * order + b] == 0)
                .expect("finite group element has an inverse")
        })
        .collect()
}

/// Word lengths from the identity by breadth-first search over the Cayley
/// graph of the generating set.
fn word_lengths(
    order: usize,
    mult: &[usize],
    generators: &[usize],
) -> Result<Vec<f64>, GroupError> {
    let mut dist = vec![usize::MAX; order];
    dist[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in generators {
            let y = mult[x * order + s];
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return Err(GroupError::UnsupportedFamily(
            "generating set does not generate the group".to_string(),
        ));
    }
    Ok(dist.into_iter().map(|d| d as f64).collect())
}

/// Expand a distance-to-identity profile into the full left-invariant metric
/// `d(x, y) = δ(x⁻¹·y)`. Entries related by translation are the same table
/// lookup, so invariance holds as exact float equality.
fn metric_from_profile(order: usize, mult: &[usize], inv: &[usize], delta: &[f64]) -> Vec<f64> {
    let mut metric = vec![0.0; order * order];
    for x in 0..order {
        for y in 0..order {
            metric[x * order + y] = delta[mult[inv[x] * order + y]];
        }
    }
    metric
}

/// Build a validated catalog group.
pub fn make_catalog_group(
    family: &Family,
    metric: MetricKind,
) -> Result<FiniteMetricGroup, GroupError> {
    let table = build_table(family)?;
    let order = table.labels.len();
    let inv = inverse_table(order, &table.mult);

    let metric_matrix = match &metric {
        MetricKind::Word => {
            let delta = word_lengths(order, &table.mult, &table.generators)?;
            metric_from_profile(order, &table.mult, &inv, &delta)
        }
        MetricKind::Geodesic => {
            let Family::Cyclic(n) = family else {
                return Err(GroupError::GeodesicNotCyclic);
            };
            let delta: Vec<f64> = (0..*n)
                .map(|j| {
                    let m = j.min(n - j) as f64;
                    (2.0 * m / *n as f64) * std::f64::consts::PI
                })
                .collect();
            metric_from_profile(order, &table.mult, &inv, &delta)
        }
        MetricKind::Custom(entries) => {
            if entries.len() != order * order {
                return Err(GroupError::MetricShape {
                    expected: order * order,
                    got: entries.len(),
                });
            }
            entries.clone()
        }
    };

    let metric_name = match &metric {
        MetricKind::Word => "word",
        MetricKind::Geodesic => "geodesic",
        MetricKind::Custom(_) => "custom",
    };
    let group = FiniteMetricGroup {
        name: format!("{}:{}", family.describe(), metric_name),
        order,
        labels: table.labels,
        mult: table.mult,
        inv,
        identity: 0,
        metric: metric_matrix,
        origin: GroupOrigin::Catalog(family.clone()),
    };

    let report = validate_group(&group);
    if !report.is_valid() {
        return Err(GroupError::Validation(report));
    }
    Ok(group)
}

// ---------------------------------------------------------------------------
// Catalog descriptors
// ---------------------------------------------------------------------------

/// Parse `family:params:metric` descriptors, e.g. `cyclic:12:geodesic`,
/// `dihedral:4:word`, `quaternion8:word`, `product:2x3:word`,
/// `product:cyclic(2)xdihedral(3):word`.
pub fn parse_descriptor(desc: &str) -> Result<(Family, MetricKind), GroupError> {
    let parts: Vec<&str> = desc.split(':').collect();
    let bad = || GroupError::UnsupportedFamily(desc.to_string());
    let (family_name, params, metric_name) = match parts.as_slice() {
        [f, p, m] => (*f, *p, *m),
        [f, m] if *f == "quaternion8" => (*f, "", *m),
        [f] if *f == "quaternion8" => (*f, "", "word"),
        [f, p] => (*f, *p, "word"),
        _ => return Err(bad()),
    };
    let metric = match metric_name {
        "word" => MetricKind::Word,
        "geodesic" => MetricKind::Geodesic,
        _ => return Err(bad()),
    };
    let family = parse_family(family_name, params).ok_or_else(bad)?;
    Ok((family, metric))
}

fn parse_family(name: &str, params: &str) -> Option<Family> {
    match name {
        "cyclic" => params.parse().ok().map(Family::Cyclic),
        "dihedral" => params.parse().ok().map(Family::Dihedral),
        "symmetric" => params.parse().ok().map(Family::Symmetric),
        "quaternion8" => Some(Family::Quaternion8),
        "product" => {
            let factors: Option<Vec<Family>> = params.split('x').map(parse_factor).collect();
            factors.filter(|fs| fs.len() >= 2).map(Family::Product)
        }
        _ => None,
    }
}

/// A product factor: a bare integer means cyclic(n); otherwise `name(arg)`.
fn parse_factor(s: &str) -> Option<Family> {
    if let Ok(n) = s.parse::<usize>() {
        return Some(Family::Cyclic(n));
    }
    let open = s.find('(')?;
    if !s.ends_with(')') {
        return None;
    }
    let name = &s[..open];
    let arg = &s[open + 1..s.len() - 1];
    parse_family(name, arg)
}

/// Descriptors of the canonical catalog enumeration up to `max_order`,
/// used by verification suites.
pub fn standard_catalog_descriptors(max_order: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 2..=12 {
        out.push(format!("cyclic:{n}:word"));
    }
    out.push("cyclic:6:geodesic".to_string());
    out.push("cyclic:12:geodesic".to_string());
    for n in 2..=12 {
        out.push(format!("dihedral:{n}:word"));
    }
    out.push("symmetric:3:word".to_string());
    out.push("symmetric:4:word".to_string());
    out.push("quaternion8:word".to_string());
    out.push("product:2x2:word".to_string());
    out.push("product:2x3:word".to_string());
    out.push("product:3x3:word".to_string());
    out.push("product:2x2x3:word".to_string());
    out.retain(|d| {
        let (family, _) = parse_descriptor(d).expect("catalog descriptor parses");
        family.order() <= max_order
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(desc: &str) -> FiniteMetricGroup {
        let (f, m) = parse_descriptor(desc).unwrap();
        make_catalog_group(&f, m).unwrap()
    }

    #[test]
    fn cyclic_word_profiles() {
        let z2 = group("cyclic:2:word");
        assert_eq!(distance_profile(&z2).delta, vec![0.0, 1.0]);
        let z4 = group("cyclic:4:word");
        assert_eq!(distance_profile(&z4).delta, vec![0.0, 1.0, 2.0, 1.0]);
        let z3 = group("cyclic:3:word");
        assert_eq!(distance_profile(&z3).delta, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn cyclic_geodesic_profile() {
        use std::f64::consts::PI;
        let z6 = group("cyclic:6:geodesic");
        let d = distance_profile(&z6).delta;
        let expect = [0.0, PI / 3.0, 2.0 * PI / 3.0, PI, 2.0 * PI / 3.0, PI / 3.0];
        for (a, b) in d.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert_eq!(z6.dist(0, 3), PI);
    }

    #[test]
    fn catalog_groups_validate_and_are_exactly_bi_invariant() {
        for desc in standard_catalog_descriptors(24) {
            let g = group(&desc);
            assert!(validate_group(&g).is_valid(), "{desc}");
            let n = g.order;
            for t in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        let d = g.dist(x, y);
                        // Exact float equality by construction.
                        assert_eq!(d, g.dist(g.mul(t, x), g.mul(t, y)), "{desc} left");
                        assert_eq!(d, g.dist(g.mul(x, t), g.mul(y, t)), "{desc} right");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_symmetric_under_inverse() {
        for desc in standard_catalog_descriptors(24) {
            let g = group(&desc);
            let p = distance_profile(&g);
            for x in 0..g.order {
                assert_eq!(p.delta[x], p.delta[g.inverse(x)], "{desc}");
            }
        }
    }

    #[test]
    fn haar_weights_uniform_and_normalized() {
        let g = group("dihedral:4:word");
        let h = g.haar();
        assert!((h.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for &w in &h.weights {
            assert_eq!(w, 1.0 / 8.0);
        }
    }

    #[test]
    fn broken_triangle_is_reported() {
        let (f, _) = parse_descriptor("cyclic:3:word").unwrap();
        // d(0,2)=3 violates both invariance and the triangle inequality.
        let metric = vec![
            0.0, 1.0, 3.0, //
            1.0, 0.0, 1.0, //
            3.0, 1.0, 0.0,
        ];
        let err = make_catalog_group(&f, MetricKind::Custom(metric)).unwrap_err();
        let GroupError::Validation(report) = err else {
            panic!("expected validation failure");
        };
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TriangleInequality { .. })));
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::NotLeftInvariant { .. } | Violation::NotRightInvariant { .. }
        )));
    }

    #[test]
    fn diagonal_violation_is_reported() {
        let (f, _) = parse_descriptor("cyclic:3:word").unwrap();
        let metric = vec![
            1.0, 1.0, 1.0, //
            1.0, 0.0, 1.0, //
            1.0, 1.0, 0.0,
        ];
        let err = make_catalog_group(&f, MetricKind::Custom(metric)).unwrap_err();
        let GroupError::Validation(report) = err else {
            panic!("expected validation failure");
        };
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MetricDiagonalNonzero { x: 0, .. })));
    }

    #[test]
    fn symmetric_group_composition_convention() {
        let s3 = group("symmetric:3:word");
        assert_eq!(s3.order, 6);
        assert_eq!(s3.labels[0], "123");
        // Transpositions are at word distance 1, 3-cycles at distance 2.
        let p = distance_profile(&s3);
        let dist_counts = p.delta.iter().filter(|&&d| d == 1.0).count();
        assert_eq!(dist_counts, 3);
        assert_eq!(p.delta.iter().filter(|&&d| d == 2.0).count(), 2);
    }

    #[test]
    fn quaternion_structure() {
        let q8 = group("quaternion8:word");
        // i * j = k
        assert_eq!(q8.mul(2, 4), 6);
        // j * i = -k
        assert_eq!(q8.mul(4, 2), 7);
        // i * i = -1
        assert_eq!(q8.mul(2, 2), 1);
        // -1 is central at word distance 2
        assert_eq!(distance_profile(&q8).delta[1], 2.0);
    }

    #[test]
    fn product_orders_and_metric() {
        let g = group("product:2x3:word");
        assert_eq!(g.order, 6);
        assert!(g.is_abelian());
        // Product word metric is the sum of factor word metrics.
        let p = distance_profile(&g);
        // element (1,1) has index 1*3+1 = 4: distance 1 (z2) + 1 (z3) = 2
        assert_eq!(p.delta[4], 2.0);
    }

    #[test]
    fn non_finite_metric_entries_are_reported() {
        let (f, _) = parse_descriptor("cyclic:3:word").unwrap();
        let metric = vec![0.0, 1.0, f64::NAN, 1.0, 0.0, 1.0, f64::INFINITY, 1.0, 0.0];
        let err = make_catalog_group(&f, MetricKind::Custom(metric)).unwrap_err();
        let GroupError::Validation(report) = err else {
            panic!("expected validation failure");
        };
        let hits = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::MetricNotFinite { .. }))
            .count();
        assert_eq!(hits, 2);
    }

    #[test]
    fn unsupported_family_parameters_are_rejected() {
        for desc in [
            "symmetric:5:word",
            "cyclic:1:word",
            "cyclic:0:word",
            "dihedral:1:word",
        ] {
            let result =
                parse_descriptor(desc).and_then(|(f, m)| make_catalog_group(&f, m).map(|_| ()));
            assert!(
                matches!(result, Err(GroupError::UnsupportedFamily(_))),
                "{desc} should be rejected"
            );
        }
        assert!(matches!(
            parse_descriptor("symmetric:3:geodesic")
                .and_then(|(f, m)| make_catalog_group(&f, m).map(|_| ())),
            Err(GroupError::GeodesicNotCyclic)
        ));
    }
}
