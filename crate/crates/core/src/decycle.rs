//! Decycling (feedback vertex) sets for `BS_n`: exact bound formulas, the
//! constructions that reserve a small family of odd vertices and remove every
//! other odd vertex, and verification of the resulting certificates.
//!
//! The structural idea behind every construction here: all odd vertices
//! together form one side of the bipartition, so removing all of them leaves
//! the independent even side, a forest trivially. Keeping a few odd vertices
//! back is safe exactly when the kept family is spread out enough that no two
//! members close a cycle through shared even neighbors.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{BubbleSortStarGraph, VertexId};
use crate::metrics;
use crate::perm::{
    factorial, paired_permutation_set, rotation_set, skewed_rotation_set, Parity, Permutation,
    MAX_DIMENSION, MIN_DIMENSION,
};

fn check_dimension(n: usize) -> Result<(), Error> {
    if (MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            n,
            min: MIN_DIMENSION,
            max: MAX_DIMENSION,
        })
    }
}

fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Cycle-rank lower bound for any graph: a feedback vertex set of a graph
/// with `v` vertices, `e` edges, and maximum degree `max_deg` has at least
/// `ceil((e - v + 1) / (max_deg - 1))` vertices, floored at 0.
pub fn lower_bound_general(v: u64, e: u64, max_deg: u64) -> Result<u64, Error> {
    if max_deg < 2 {
        return Err(Error::DegreeTooSmall { max_deg });
    }
    if e < v {
        return Ok(0);
    }
    let num = e + 1 - v;
    let den = max_deg - 1;
    Ok(num.div_ceil(den))
}

/// The general bound instantiated with the parameters of `BS_n`:
/// `ceil((n!(2n-5) + 2) / (4n-8))`. Exact integer arithmetic throughout.
pub fn lower_bound(n: usize) -> Result<u64, Error> {
    check_dimension(n)?;
    let num = factorial_u128(n) * (2 * n as u128 - 5) + 2;
    let den = 4 * n as u128 - 8;
    Ok(num.div_ceil(den) as u64)
}

/// Size of the no-thought decycling set: remove every odd vertex, `n!/2`.
pub fn trivial_upper_bound(n: usize) -> Result<u64, Error> {
    check_dimension(n)?;
    Ok(factorial(n) / 2)
}

/// Size of the best decycling set this crate can construct: the exact values
/// 2, 10, 51 for n = 3, 4, 5, and for n >= 6 the paired-block certificate
/// sizes `n!/2 - (n/2)!` (even n) or `n!/2 - 2((n-1)/2)! + 1` (odd n).
pub fn upper_bound(n: usize) -> Result<u64, Error> {
    check_dimension(n)?;
    Ok(match n {
        3 => 2,
        4 => 10,
        5 => 51,
        _ if n.is_multiple_of(2) => factorial(n) / 2 - factorial(n / 2),
        _ => factorial(n) / 2 - 2 * factorial((n - 1) / 2) + 1,
    })
}

/// All three bounds for one dimension, with a note explaining each number.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub lower: u64,
    pub upper_constructive: u64,
    pub upper_trivial: u64,
    /// The decycling number itself, known only when the constructive upper
    /// bound meets the lower bound (n <= 5).
    pub exact: Option<u64>,
    pub lower_note: String,
    pub upper_constructive_note: String,
    pub upper_trivial_note: String,
}

pub fn bounds_report(n: usize) -> Result<BoundsReport, Error> {
    let lower = lower_bound(n)?;
    let upper_constructive = upper_bound(n)?;
    let upper_trivial = trivial_upper_bound(n)?;
    let exact = (lower == upper_constructive).then_some(lower);
    let upper_constructive_note = if exact.is_some() {
        "verified certificate size; meets the lower bound, so the value is exact".to_string()
    } else if n.is_multiple_of(2) {
        "n!/2 - (n/2)! via the paired-block certificate".to_string()
    } else {
        "n!/2 - 2((n-1)/2)! + 1 via the paired-block certificate".to_string()
    };
    Ok(BoundsReport {
        n,
        lower,
        upper_constructive,
        upper_trivial,
        exact,
        lower_note: "ceil((n!(2n-5)+2)/(4n-8)), the cycle-rank bound for a (2n-3)-regular graph"
            .to_string(),
        upper_constructive_note,
        upper_trivial_note: "n!/2, remove every odd vertex".to_string(),
    })
}

/// Which construction produced a certificate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionMethod {
    /// Dimension 3: keep one odd vertex.
    SmallN3,
    /// Dimension 4: keep an odd vertex and its rotation by 2.
    SmallN4,
    /// Dimension 5: keep nine of the ten rotation/skewed-rotation vertices.
    SmallN5,
    /// Dimension >= 6: keep the paired-block family of the base.
    PairedBlocks,
    /// Produced by the exact solver; removal is an explicit list.
    Exact,
    /// Hand-written; all semantics carried by the explicit fields.
    Manual,
}

impl std::fmt::Display for ConstructionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstructionMethod::SmallN3 => "small_n3",
            ConstructionMethod::SmallN4 => "small_n4",
            ConstructionMethod::SmallN5 => "small_n5",
            ConstructionMethod::PairedBlocks => "paired_blocks",
            ConstructionMethod::Exact => "exact",
            ConstructionMethod::Manual => "manual",
        })
    }
}

/// How the removed set is recovered from the certificate fields.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalRule {
    /// Remove every odd vertex except the reserved ones. Keeps certificates
    /// small: the reserved family has factorial-of-n/2 size, the removed set
    /// factorial-of-n.
    AllOddExceptReserved,
    /// Remove exactly the vertices in `explicit_removed`.
    ExplicitList,
}

/// A machine-checkable description of a decycling set for `BS_n`.
///
/// Serialized as JSON with fields in declaration order; permutations use the
/// crate's text format. `explicit_removed` is omitted unless the removal rule
/// needs it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecyclingCertificate {
    pub n: usize,
    pub method: ConstructionMethod,
    /// Odd vertex the reserved family is generated from.
    pub base: Permutation,
    /// Odd vertices kept when removing the odd side.
    pub reserved: Vec<Permutation>,
    pub removal_rule: RemovalRule,
    pub removed_count: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explicit_removed: Option<Vec<Permutation>>,
}

impl DecyclingCertificate {
    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Default base vertex for constructions: the lexicographically smallest odd
/// permutation, `(1, 2, ..., n-2, n, n-1)`.
pub fn default_base(n: usize) -> Result<Permutation, Error> {
    check_dimension(n)?;
    let mut symbols: Vec<u8> = (1..=n as u8).collect();
    symbols.swap(n - 2, n - 1);
    Permutation::new(symbols)
}

fn check_base(n: usize, base: &Permutation) -> Result<(), Error> {
    if base.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: base.n(),
        });
    }
    if base.is_even() {
        return Err(Error::EvenBase {
            base: base.to_string(),
        });
    }
    Ok(())
}

fn certificate_from_reserved(
    n: usize,
    method: ConstructionMethod,
    base: Permutation,
    reserved: Vec<Permutation>,
) -> DecyclingCertificate {
    let removed_count = factorial(n) / 2 - reserved.len() as u64;
    DecyclingCertificate {
        n,
        method,
        base,
        reserved,
        removal_rule: RemovalRule::AllOddExceptReserved,
        removed_count,
        explicit_removed: None,
    }
}

/// Builds the decycling certificate for dimension `n`, using `base` or the
/// [`default_base`] when none is given.
pub fn construct(n: usize, base: Option<&Permutation>) -> Result<DecyclingCertificate, Error> {
    let owned;
    let base = match base {
        Some(b) => b,
        None => {
            owned = default_base(n)?;
            &owned
        }
    };
    construct_small(n, base)
}

/// The small-dimension constructions. Dimensions 3, 4, 5 reserve explicit
/// families; anything larger is forwarded to [`construct_general`].
pub fn construct_small(n: usize, base: &Permutation) -> Result<DecyclingCertificate, Error> {
    check_dimension(n)?;
    check_base(n, base)?;
    let (method, reserved) = match n {
        3 => (ConstructionMethod::SmallN3, vec![base.clone()]),
        4 => (
            ConstructionMethod::SmallN4,
            vec![base.clone(), base.rotate(2)],
        ),
        5 => {
            let mut family = rotation_set(base);
            family.extend(skewed_rotation_set(base)?);
            debug_assert_eq!(family.len(), 10);
            // All ten keep the removed graph down to a single cycle; dropping
            // any one of them breaks it. Drop the lexicographically largest
            // for determinism.
            let largest = family.iter().max().expect("family is nonempty").clone();
            family.retain(|p| *p != largest);
            (ConstructionMethod::SmallN5, family)
        }
        _ => return construct_general(n, base),
    };
    Ok(certificate_from_reserved(n, method, base.clone(), reserved))
}

/// The paired-block construction for `n >= 6`: reserve the paired-block
/// family of `base` and remove every other odd vertex.
pub fn construct_general(n: usize, base: &Permutation) -> Result<DecyclingCertificate, Error> {
    check_dimension(n)?;
    if n < 6 {
        return Err(Error::UnsupportedDimension {
            n,
            min: 6,
            max: MAX_DIMENSION,
        });
    }
    check_base(n, base)?;
    let reserved = paired_permutation_set(base)?;
    let cert =
        certificate_from_reserved(n, ConstructionMethod::PairedBlocks, base.clone(), reserved);
    debug_assert_eq!(cert.removed_count, upper_bound(n)?);
    Ok(cert)
}

/// Result of a forest check on the graph minus a removed set.
#[derive(Clone, Debug)]
pub struct AcyclicityCheck {
    pub acyclic: bool,
    pub remaining_vertices: usize,
    pub remaining_edges: u64,
    /// On failure, one concrete cycle, as a closed vertex sequence without
    /// the repeated endpoint.
    pub cycle: Option<Vec<VertexId>>,
}

/// Union-find with path halving; plain indices, no ranks needed at the sizes
/// involved here.
struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(size: usize) -> Self {
        DisjointSets {
            parent: (0..size as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            false
        } else {
            self.parent[ra as usize] = rb;
            true
        }
    }
}

/// Checks whether removing `removed` leaves a forest. Scans every surviving
/// edge through a union-find; the first edge that closes a component yields a
/// concrete cycle witness via a BFS that avoids that edge.
pub fn verify_acyclic(
    g: &BubbleSortStarGraph,
    removed: &[VertexId],
) -> Result<AcyclicityCheck, Error> {
    let count = g.vertex_count();
    let mut gone = vec![false; count];
    for &v in removed {
        if v >= count {
            return Err(Error::VertexOutOfRange { v, count });
        }
        gone[v] = true;
    }
    let remaining_vertices = count - gone.iter().filter(|&&g| g).count();
    let mut sets = DisjointSets::new(count);
    let mut remaining_edges = 0u64;
    let mut cycle_edge: Option<(VertexId, VertexId)> = None;
    for v in 0..count {
        if gone[v] {
            continue;
        }
        let mut edges = Vec::with_capacity(g.degree());
        g.for_each_neighbor(v, |w| {
            if w > v && !gone[w] {
                edges.push(w);
            }
        })?;
        for w in edges {
            remaining_edges += 1;
            if cycle_edge.is_none() && !sets.union(v as u32, w as u32) {
                cycle_edge = Some((v, w));
            }
        }
    }
    let cycle = match cycle_edge {
        None => None,
        Some((v, w)) => Some(cycle_through(g, &gone, v, w)?),
    };
    Ok(AcyclicityCheck {
        acyclic: cycle.is_none(),
        remaining_vertices,
        remaining_edges,
        cycle,
    })
}

/// Finds the shortest surviving path from `v` to `w` that does not use the
/// edge `(v,w)` itself, and returns it as a cycle. Only called when the
/// union-find has proven such a path exists.
fn cycle_through(
    g: &BubbleSortStarGraph,
    gone: &[bool],
    v: VertexId,
    w: VertexId,
) -> Result<Vec<VertexId>, Error> {
    let count = g.vertex_count();
    let mut parent: Vec<usize> = vec![usize::MAX; count];
    parent[v] = v;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(v);
    'sweep: while let Some(x) = queue.pop_front() {
        let mut found = false;
        g.for_each_neighbor(x, |y| {
            if gone[y] || parent[y] != usize::MAX {
                return;
            }
            if x == v && y == w {
                return; // skip the closing edge itself
            }
            parent[y] = x;
            queue.push_back(y);
            if y == w {
                found = true;
            }
        })?;
        if found {
            break 'sweep;
        }
    }
    assert_ne!(parent[w], usize::MAX, "union-find promised a second path");
    let mut path = vec![w];
    let mut x = w;
    while x != v {
        x = parent[x];
        path.push(x);
    }
    path.reverse(); // v ... w; the closing edge w-v is implicit
    Ok(path)
}

/// Materializes the removed vertex set of a certificate, sorted ascending.
pub fn removed_vertices(
    g: &BubbleSortStarGraph,
    cert: &DecyclingCertificate,
) -> Result<Vec<VertexId>, Error> {
    if cert.n != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: cert.n,
        });
    }
    let mut removed = match cert.removal_rule {
        RemovalRule::AllOddExceptReserved => {
            let mut keep = vec![false; g.vertex_count()];
            for p in &cert.reserved {
                keep[g.vertex_of(p)?] = true;
            }
            (0..g.vertex_count())
                .filter(|&v| {
                    !keep[v]
                        && crate::perm::rank_parity(v as u64, cert.n).expect("vertex in range")
                            == Parity::Odd
                })
                .collect::<Vec<_>>()
        }
        RemovalRule::ExplicitList => {
            let list = cert
                .explicit_removed
                .as_ref()
                .ok_or_else(|| Error::InvalidCertificate {
                    reason: "removal rule explicit_list without explicit_removed".into(),
                })?;
            list.iter()
                .map(|p| g.vertex_of(p))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    removed.sort_unstable();
    removed.dedup();
    Ok(removed)
}

/// One line of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Itemized outcome of [`verify_certificate`].
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub method: ConstructionMethod,
    pub removed_count: u64,
    pub deep: bool,
    pub checks: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every certificate check against the graph:
///
/// - `base-parity`, `reserved-parity`: the base and all reserved vertices
///   are odd;
/// - `reserved-distinct`: no reserved vertex is listed twice;
/// - `removed-count`: the materialized removed set has the declared size;
/// - `acyclic`: removing the set leaves a forest;
/// - `independence` (only with `deep`, only for the paired-block method):
///   the reserved family is pairwise at distance >= 4;
/// - `bounds-window`: the declared size sits between the dimension's lower
///   bound and `n!/2`, noting when it meets the lower bound exactly.
pub fn verify_certificate(
    g: &BubbleSortStarGraph,
    cert: &DecyclingCertificate,
    deep: bool,
) -> Result<VerificationReport, Error> {
    if cert.n != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: cert.n,
        });
    }
    if cert.base.n() != cert.n || cert.reserved.iter().any(|p| p.n() != cert.n) {
        return Err(Error::InvalidCertificate {
            reason: "base or reserved permutation has the wrong dimension".into(),
        });
    }
    let mut checks = Vec::new();

    checks.push(CheckItem {
        name: "base-parity",
        passed: cert.base.is_odd(),
        detail: format!("base {} is {}", cert.base, cert.base.parity()),
    });

    let even_reserved: Vec<String> = cert
        .reserved
        .iter()
        .filter(|p| p.is_even())
        .map(|p| p.to_string())
        .collect();
    checks.push(CheckItem {
        name: "reserved-parity",
        passed: even_reserved.is_empty(),
        detail: if even_reserved.is_empty() {
            format!("all {} reserved vertices are odd", cert.reserved.len())
        } else {
            format!(
                "even vertices in reserved set: {}",
                even_reserved.join(", ")
            )
        },
    });

    let mut sorted = cert.reserved.clone();
    sorted.sort();
    sorted.dedup();
    checks.push(CheckItem {
        name: "reserved-distinct",
        passed: sorted.len() == cert.reserved.len(),
        detail: format!(
            "{} reserved entries, {} distinct",
            cert.reserved.len(),
            sorted.len()
        ),
    });

    let removed = removed_vertices(g, cert)?;
    checks.push(CheckItem {
        name: "removed-count",
        passed: removed.len() as u64 == cert.removed_count,
        detail: format!(
            "materialized removed set has {} vertices, certificate declares {}",
            removed.len(),
            cert.removed_count
        ),
    });

    let forest = verify_acyclic(g, &removed)?;
    checks.push(CheckItem {
        name: "acyclic",
        passed: forest.acyclic,
        detail: match &forest.cycle {
            None => format!(
                "forest with {} vertices and {} edges",
                forest.remaining_vertices, forest.remaining_edges
            ),
            Some(cycle) => format!(
                "cycle of length {} through vertex {}",
                cycle.len(),
                cycle[0]
            ),
        },
    });

    if deep && cert.method == ConstructionMethod::PairedBlocks {
        let ids: Vec<VertexId> = cert
            .reserved
            .iter()
            .map(|p| g.vertex_of(p))
            .collect::<Result<_, _>>()?;
        let report = metrics::is_distance_k_independent(g, &ids, 4)?;
        let detail = match report.witness {
            None => "fewer than two reserved vertices".to_string(),
            Some((a, b, d)) => format!(
                "minimum pairwise distance {} between {} and {}",
                d,
                g.permutation_of(a)?,
                g.permutation_of(b)?
            ),
        };
        checks.push(CheckItem {
            name: "independence",
            passed: report.independent,
            detail,
        });
    }

    let lower = lower_bound(cert.n)?;
    let trivial = trivial_upper_bound(cert.n)?;
    let within = lower <= cert.removed_count && cert.removed_count <= trivial;
    checks.push(CheckItem {
        name: "bounds-window",
        passed: within,
        detail: if cert.removed_count == lower {
            format!(
                "size {} meets the lower bound exactly; the set is optimal",
                lower
            )
        } else {
            format!(
                "size {} within [{}, {}]; decycling number bounded accordingly",
                cert.removed_count, lower, trivial
            )
        },
    });

    Ok(VerificationReport {
        n: cert.n,
        method: cert.method,
        removed_count: cert.removed_count,
        deep,
        checks,
    })
}
