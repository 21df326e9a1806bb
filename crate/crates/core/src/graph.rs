//! The bubble-sort star graph `BS_n` as a concrete, queryable object.
//!
//! Vertices are identified by their Lehmer rank (0-based, dense), never by
//! raw permutations, so adjacency can live in flat arrays. Two adjacency
//! modes exist: `Cached` precomputes the full neighbor table at build time,
//! `Implicit` recomputes neighbors on demand and is the only option for
//! dimensions too large to tabulate.

use std::io::Write;

use crate::error::Error;
use crate::perm::{
    self, factorial, generator_set, Parity, Permutation, Transposition, MAX_DIMENSION,
    MIN_DIMENSION,
};

/// Dense vertex identifier: the Lehmer rank of the vertex's permutation.
pub type VertexId = usize;

/// Build refuses dimensions above this unless the caller raises the cap.
pub const DEFAULT_DIMENSION_CAP: usize = 10;
/// Cached adjacency is never built above this dimension; 10! vertices with
/// degree 17 is already a ~247 MB table.
pub const CACHED_DIMENSION_LIMIT: usize = 10;
/// Default ceiling on the cached table size, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;
/// DOT output stops being readable well before this; larger graphs need an
/// explicit override.
pub const DOT_DIMENSION_LIMIT: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdjacencyMode {
    /// Recompute neighbors on demand; no precomputed storage.
    Implicit,
    /// Precompute the full neighbor table at build time.
    Cached,
}

/// Knobs for [`BubbleSortStarGraph::build`].
#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub mode: AdjacencyMode,
    /// Largest dimension this build will accept.
    pub dimension_cap: usize,
    /// Largest cached table, in bytes, this build will allocate.
    pub memory_budget_bytes: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            mode: AdjacencyMode::Cached,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            memory_budget_bytes: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl BuildOptions {
    pub fn implicit() -> Self {
        BuildOptions {
            mode: AdjacencyMode::Implicit,
            ..Default::default()
        }
    }

    pub fn cached() -> Self {
        BuildOptions::default()
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.dimension_cap = cap;
        self
    }
}

/// `BS_n`: all `n!` permutations of `{1..n}`, joined whenever they differ by
/// one generator transposition. `(2n-3)`-regular and bipartite by parity.
pub struct BubbleSortStarGraph {
    n: usize,
    vertex_count: usize,
    generators: Vec<Transposition>,
    cache: Option<Vec<u32>>,
}

impl BubbleSortStarGraph {
    pub fn build(n: usize, options: BuildOptions) -> Result<Self, Error> {
        let cap = options.dimension_cap.min(MAX_DIMENSION);
        if !(MIN_DIMENSION..=cap).contains(&n) {
            return Err(Error::UnsupportedDimension {
                n,
                min: MIN_DIMENSION,
                max: cap,
            });
        }
        let vertex_count = factorial(n) as usize;
        let generators = generator_set(n)?;
        let cache = match options.mode {
            AdjacencyMode::Implicit => None,
            AdjacencyMode::Cached => {
                if n > CACHED_DIMENSION_LIMIT {
                    return Err(Error::CacheUnsupported {
                        n,
                        max: CACHED_DIMENSION_LIMIT,
                    });
                }
                let degree = generators.len();
                let required = vertex_count as u64 * degree as u64 * 4;
                if required > options.memory_budget_bytes {
                    return Err(Error::MemoryBudgetExceeded {
                        n,
                        required,
                        budget: options.memory_budget_bytes,
                    });
                }
                let mut table = Vec::with_capacity(vertex_count * degree);
                let mut symbols = vec![0u8; n];
                for v in 0..vertex_count {
                    let p = Permutation::unrank(v as u64, n)?;
                    symbols.copy_from_slice(p.symbols());
                    for t in &generators {
                        symbols.swap(t.first() - 1, t.second() - 1);
                        table.push(perm::rank_slice(&symbols) as u32);
                        symbols.swap(t.first() - 1, t.second() - 1);
                    }
                }
                Some(table)
            }
        };
        Ok(BubbleSortStarGraph {
            n,
            vertex_count,
            generators,
            cache,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Uniform vertex degree, `2n-3`.
    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.vertex_count as u64 * self.degree() as u64 / 2
    }

    pub fn mode(&self) -> AdjacencyMode {
        if self.cache.is_some() {
            AdjacencyMode::Cached
        } else {
            AdjacencyMode::Implicit
        }
    }

    pub fn generators(&self) -> &[Transposition] {
        &self.generators
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), Error> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                v,
                count: self.vertex_count,
            })
        }
    }

    /// The permutation labelling vertex `v`.
    pub fn permutation_of(&self, v: VertexId) -> Result<Permutation, Error> {
        self.check_vertex(v)?;
        Permutation::unrank(v as u64, self.n)
    }

    /// The vertex labelled by `p`.
    pub fn vertex_of(&self, p: &Permutation) -> Result<VertexId, Error> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        Ok(p.rank() as VertexId)
    }

    pub fn parity_of(&self, v: VertexId) -> Result<Parity, Error> {
        self.check_vertex(v)?;
        perm::rank_parity(v as u64, self.n)
    }

    /// Calls `f` with each neighbor of `v`, in generator order. The cheap
    /// path for traversals: no allocation in cached mode, one scratch buffer
    /// in implicit mode.
    pub fn for_each_neighbor<F: FnMut(VertexId)>(
        &self,
        v: VertexId,
        mut f: F,
    ) -> Result<(), Error> {
        self.check_vertex(v)?;
        match &self.cache {
            Some(table) => {
                let d = self.degree();
                for &w in &table[v * d..(v + 1) * d] {
                    f(w as VertexId);
                }
            }
            None => {
                let p = Permutation::unrank(v as u64, self.n)?;
                let mut symbols = p.symbols().to_vec();
                for t in &self.generators {
                    symbols.swap(t.first() - 1, t.second() - 1);
                    f(perm::rank_slice(&symbols) as VertexId);
                    symbols.swap(t.first() - 1, t.second() - 1);
                }
            }
        }
        Ok(())
    }

    /// Neighbors of `v` in generator order; length `2n-3`, no duplicates.
    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>, Error> {
        let mut out = Vec::with_capacity(self.degree());
        self.for_each_neighbor(v, |w| out.push(w))?;
        Ok(out)
    }

    /// Every undirected edge exactly once, as `(v, w)` pairs with `v < w`,
    /// in ascending order of `v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count).flat_map(move |v| {
            let mut ws = self.neighbors(v).expect("vertex id in range");
            ws.retain(|&w| w > v);
            ws.into_iter().map(move |w| (v, w))
        })
    }

    /// DOT text: one node per vertex labelled with its permutation, filled by
    /// parity and carrying a `parity` attribute, then one line per edge.
    /// Refuses dimensions above [`DOT_DIMENSION_LIMIT`] unless `force` is set.
    pub fn write_dot<W: Write>(&self, out: &mut W, force: bool) -> Result<(), Error> {
        if self.n > DOT_DIMENSION_LIMIT && !force {
            return Err(Error::ExportTooLarge {
                n: self.n,
                max: DOT_DIMENSION_LIMIT,
            });
        }
        writeln!(out, "graph bs{} {{", self.n)?;
        writeln!(out, "  node [shape=ellipse, style=filled];")?;
        for v in 0..self.vertex_count {
            let p = self.permutation_of(v)?;
            let parity = self.parity_of(v)?;
            let fill = match parity {
                Parity::Even => "white",
                Parity::Odd => "gray80",
            };
            writeln!(
                out,
                "  v{v} [label=\"{p}\", parity=\"{parity}\", fillcolor=\"{fill}\"];"
            )?;
        }
        for (v, w) in self.edges() {
            writeln!(out, "  v{v} -- v{w};")?;
        }
        writeln!(out, "}}")?;
        Ok(())
    }

    /// Edge-list text: one `u v` line per edge, 0-based ranks, `v > u`.
    pub fn write_edge_list<W: Write>(&self, out: &mut W) -> Result<(), Error> {
        for (v, w) in self.edges() {
            writeln!(out, "{v} {w}")?;
        }
        Ok(())
    }
}

/// Reads the edge-list text format back: one `u v` pair per line, 0-based.
/// Blank lines and lines starting with `#` are skipped. The vertex count is
/// inferred as one past the largest endpoint mentioned.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>), Error> {
    let mut edges = Vec::new();
    let mut vertices = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut endpoint = |name: &str| -> Result<usize, Error> {
            fields
                .next()
                .ok_or_else(|| Error::ParseEdgeList {
                    line: idx + 1,
                    reason: format!("missing {name} endpoint"),
                })?
                .parse()
                .map_err(|_| Error::ParseEdgeList {
                    line: idx + 1,
                    reason: format!("{name} endpoint is not a nonnegative integer"),
                })
        };
        let a = endpoint("first")?;
        let b = endpoint("second")?;
        if fields.next().is_some() {
            return Err(Error::ParseEdgeList {
                line: idx + 1,
                reason: "expected exactly two endpoints".into(),
            });
        }
        vertices = vertices.max(a + 1).max(b + 1);
        edges.push((a, b));
    }
    Ok((vertices, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cached(n: usize) -> BubbleSortStarGraph {
        BubbleSortStarGraph::build(n, BuildOptions::cached()).unwrap()
    }

    #[test]
    fn counts_and_regularity() {
        for (n, vertices, edges) in [(3, 6, 9), (4, 24, 60), (5, 120, 420), (6, 720, 3240)] {
            let g = cached(n);
            assert_eq!(g.vertex_count(), vertices);
            assert_eq!(g.edge_count(), edges);
            assert_eq!(g.degree(), 2 * n - 3);
            assert_eq!(g.edges().count() as u64, g.edge_count());
        }
    }

    #[test]
    fn bs3_adjacency_table() {
        let g = cached(3);
        let expect: [&[VertexId]; 6] = [
            &[2, 5, 1],
            &[4, 3, 0],
            &[0, 4, 3],
            &[5, 1, 2],
            &[1, 2, 5],
            &[3, 0, 4],
        ];
        for (v, row) in expect.iter().enumerate() {
            assert_eq!(g.neighbors(v).unwrap(), *row);
        }
    }

    #[test]
    fn bs3_looks_like_k33() {
        let g = cached(3);
        // Bipartite by parity rules out odd cycles; a 4-cycle exists whenever
        // two vertices share two neighbors. Girth 4 plus 3-regularity on six
        // vertices pins the structure down.
        for (v, w) in g.edges() {
            assert_ne!(g.parity_of(v).unwrap(), g.parity_of(w).unwrap());
        }
        let n0 = g.neighbors(0).unwrap();
        let n3 = g.neighbors(3).unwrap();
        let shared = n0.iter().filter(|v| n3.contains(v)).count();
        assert!(shared >= 2, "no 4-cycle through vertices 0 and 3");
    }

    #[test]
    fn neighbors_of_identity_n4() {
        let g = cached(4);
        let id = g.vertex_of(&Permutation::identity(4).unwrap()).unwrap();
        assert_eq!(id, 0);
        assert_eq!(g.neighbors(id).unwrap(), [6, 14, 21, 2, 1]);
        let labels: Vec<String> = g
            .neighbors(id)
            .unwrap()
            .iter()
            .map(|&w| g.permutation_of(w).unwrap().to_string())
            .collect();
        assert_eq!(labels, ["2134", "3214", "4231", "1324", "1243"]);
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive_n4() {
        let g = cached(4);
        for v in 0..g.vertex_count() {
            let ws = g.neighbors(v).unwrap();
            assert_eq!(ws.len(), g.degree());
            assert!(!ws.contains(&v));
            for &w in &ws {
                assert!(g.neighbors(w).unwrap().contains(&v));
            }
        }
    }

    #[test]
    fn implicit_matches_cached() {
        for n in 3..=5 {
            let c = cached(n);
            let i = BubbleSortStarGraph::build(n, BuildOptions::implicit()).unwrap();
            assert_eq!(i.mode(), AdjacencyMode::Implicit);
            for v in 0..c.vertex_count() {
                assert_eq!(c.neighbors(v).unwrap(), i.neighbors(v).unwrap());
            }
        }
    }

    #[test]
    fn build_rejects_out_of_range_dimensions() {
        assert!(matches!(
            BubbleSortStarGraph::build(2, BuildOptions::default()),
            Err(Error::UnsupportedDimension { n: 2, .. })
        ));
        assert!(matches!(
            BubbleSortStarGraph::build(11, BuildOptions::default()),
            Err(Error::UnsupportedDimension { n: 11, max: 10, .. })
        ));
        assert!(matches!(
            BubbleSortStarGraph::build(12, BuildOptions::cached().with_cap(12)),
            Err(Error::CacheUnsupported { n: 12, .. })
        ));
        let opts = BuildOptions {
            memory_budget_bytes: 1,
            ..BuildOptions::cached()
        };
        assert!(matches!(
            BubbleSortStarGraph::build(8, opts),
            Err(Error::MemoryBudgetExceeded { n: 8, .. })
        ));
        // Implicit mode has no cache to cap, so the same dimension is fine.
        let g = BubbleSortStarGraph::build(11, BuildOptions::implicit().with_cap(11)).unwrap();
        assert_eq!(g.vertex_count(), 39_916_800);
    }

    #[test]
    fn vertex_lookups_reject_mismatches() {
        let g = cached(4);
        assert!(matches!(
            g.neighbors(24),
            Err(Error::VertexOutOfRange { v: 24, count: 24 })
        ));
        let p5 = Permutation::identity(5).unwrap();
        assert!(matches!(
            g.vertex_of(&p5),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 5
            })
        ));
    }

    #[test]
    fn dot_export() {
        let g = cached(3);
        let mut out = Vec::new();
        g.write_dot(&mut out, false).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("label=\"123\""));
        assert!(text.contains("label=\"213\""));
        assert_eq!(text.matches("parity=\"even\"").count(), 3);
        assert_eq!(text.matches("parity=\"odd\"").count(), 3);
        assert_eq!(text.matches(" -- ").count(), 9);
    }

    #[test]
    fn dot_export_guards_large_dimensions() {
        let g = BubbleSortStarGraph::build(7, BuildOptions::implicit()).unwrap();
        assert!(matches!(
            g.write_dot(&mut Vec::new(), false),
            Err(Error::ExportTooLarge { n: 7, max: 6 })
        ));
        // Forcing works; sink the output into a counter to avoid a 190 MB
        // string.
        struct Count(u64);
        impl std::io::Write for Count {
            fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
                self.0 += buf.len() as u64;
                Ok(buf.len())
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        // Keep the forced path cheap by using n=4 instead of n=7.
        let g4 = cached(4);
        let mut sink = Count(0);
        g4.write_dot(&mut sink, true).unwrap();
        assert!(sink.0 > 0);
    }

    #[test]
    fn edge_list_export() {
        let g = cached(4);
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 60);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it.next().unwrap().parse().unwrap();
            let v: usize = it.next().unwrap().parse().unwrap();
            assert!(it.next().is_none());
            assert!(v > u);
            assert!(g.neighbors(u).unwrap().contains(&v));
        }
    }

    #[test]
    fn parity_classes_balance() {
        for n in 3..=6 {
            let g = cached(n);
            let odd = (0..g.vertex_count())
                .filter(|&v| g.parity_of(v).unwrap() == Parity::Odd)
                .count();
            assert_eq!(odd, g.vertex_count() / 2);
        }
    }

    #[test]
    fn edge_list_round_trips() {
        let g = cached(3);
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let (vertices, edges) = parse_edge_list(&text).unwrap();
        assert_eq!(vertices, 6);
        assert_eq!(edges.len(), 9);
        assert_eq!(edges, g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_parser_tolerates_comments_and_rejects_garbage() {
        let (vertices, edges) = parse_edge_list("# header\n\n0 3\n2 1\n").unwrap();
        assert_eq!(vertices, 4);
        assert_eq!(edges, vec![(0, 3), (2, 1)]);
        assert_eq!(parse_edge_list("").unwrap(), (0, Vec::new()));
        for (bad, line) in [("0\n", 1), ("0 1\n2 x\n", 2), ("0 1 2\n", 1)] {
            match parse_edge_list(bad) {
                Err(Error::ParseEdgeList { line: l, .. }) => assert_eq!(l, line),
                other => panic!("expected parse error for {bad:?}, got {other:?}"),
            }
        }
    }
}
