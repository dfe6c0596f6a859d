//! Weighted undirected graphs and deterministic shortest paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Undirected graph with nonnegative edge weights. Parallel edges are
/// collapsed to the lightest one; adjacency lists are kept sorted by
/// neighbour index so path tie-breaking is deterministic.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    boundary: Vec<bool>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            adj: vec![Vec::new(); vertex_count],
            boundary: vec![false; vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn set_boundary(&mut self, v: usize, flag: bool) {
        self.boundary[v] = flag;
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::Invalid(format!(
                "edge ({u}, {v}) out of range for {n} vertices"
            )));
        }
        if u == v {
            return Err(Error::Invalid(format!("self-loop at {u}")));
        }
        if !(weight >= 0.0) {
            return domain(format!("edge weight must be nonnegative, got {weight}"));
        }
        self.insert(u, v, weight);
        self.insert(v, u, weight);
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize, weight: f64) {
        let list = &mut self.adj[u];
        match list.binary_search_by_key(&v, |e| e.0) {
            Ok(i) => list[i].1 = list[i].1.min(weight),
            Err(i) => list.insert(i, (v, weight)),
        }
    }

    pub fn neighbours(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u]
            .binary_search_by_key(&v, |e| e.0)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    /// Single-source shortest paths. If `targets` is given, the search stops
    /// once all of them are settled; distances of settled vertices are exact.
    pub fn shortest_paths(&self, source: usize, targets: Option<&[usize]>) -> ShortestPaths {
        self.shortest_paths_within(source, targets, f64::INFINITY)
    }

    /// Like [`shortest_paths`](Self::shortest_paths), but vertices farther
    /// than `radius` are never settled.
    pub fn shortest_paths_within(
        &self,
        source: usize,
        targets: Option<&[usize]>,
        radius: f64,
    ) -> ShortestPaths {
        self.shortest_paths_excluding(source, targets, radius, None)
    }

    /// Like [`shortest_paths_within`](Self::shortest_paths_within), but the
    /// vertex `sink` (other than the source) is settled without relaxing its
    /// edges, so no path passes through it.
    pub fn shortest_paths_excluding(
        &self,
        source: usize,
        targets: Option<&[usize]>,
        radius: f64,
        sink: Option<usize>,
    ) -> ShortestPaths {
        let n = self.vertex_count();
        let mut sp = ShortestPaths {
            source,
            dist: vec![f64::INFINITY; n],
            hops: vec![u32::MAX; n],
            settled: vec![false; n],
        };
        let mut remaining = targets.map(|t| {
            let mut want = vec![false; n];
            let mut count = 0;
            for &v in t {
                if !want[v] {
                    want[v] = true;
                    count += 1;
                }
            }
            (want, count)
        });
        sp.dist[source] = 0.0;
        sp.hops[source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem {
            dist: 0.0,
            hops: 0,
            v: source,
        });
        while let Some(HeapItem { dist, hops, v }) = heap.pop() {
            if dist > radius {
                break;
            }
            if sp.settled[v] || dist > sp.dist[v] || (dist == sp.dist[v] && hops > sp.hops[v]) {
                continue;
            }
            sp.settled[v] = true;
            if let Some((want, count)) = remaining.as_mut() {
                if want[v] {
                    *count -= 1;
                    if *count == 0 {
                        break;
                    }
                }
            }
            if sink == Some(v) && v != source {
                continue;
            }
            for &(u, w) in &self.adj[v] {
                let nd = dist + w;
                let nh = hops + 1;
                if nd < sp.dist[u] || (nd == sp.dist[u] && nh < sp.hops[u]) {
                    sp.dist[u] = nd;
                    sp.hops[u] = nh;
                    heap.push(HeapItem {
                        dist: nd,
                        hops: nh,
                        v: u,
                    });
                }
            }
        }
        sp
    }

    /// A shortest path from `from` to the source of `tree`, as a vertex
    /// sequence starting at `from`.
    ///
    /// Among all shortest paths, the one with the fewest edges is chosen, and
    /// among those the lexicographically smallest vertex sequence.
    pub fn path_to_source(&self, from: usize, tree: &ShortestPaths) -> Option<Vec<usize>> {
        if !tree.settled[from] {
            return None;
        }
        let mut path = vec![from];
        let mut u = from;
        while u != tree.source {
            let du = tree.dist[u];
            let tol = 1e-9 * du.abs().max(1.0);
            let next = self.adj[u].iter().find(|&&(v, w)| {
                tree.settled[v]
                    && tree.hops[v] + 1 == tree.hops[u]
                    && (tree.dist[v] + w - du).abs() <= tol
            })?;
            u = next.0;
            path.push(u);
        }
        Some(path)
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    hops: u32,
    v: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    // Reversed so the max-heap pops the smallest (dist, hops, v).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.v.cmp(&self.v))
    }
}

/// Result of a single-source search.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<f64>,
    pub hops: Vec<u32>,
    pub settled: Vec<bool>,
}

impl ShortestPaths {
    /// Exact distance if `v` was settled, otherwise infinity.
    pub fn distance(&self, v: usize) -> f64 {
        if self.settled[v] {
            self.dist[v]
        } else {
            f64::INFINITY
        }
    }
}

/// Pairwise distances and representative shortest paths among `sources`.
#[derive(Debug, Clone)]
pub struct MinPaths {
    pub sources: Vec<usize>,
    /// `dist[i][j]` between `sources[i]` and `sources[j]`.
    pub dist: Vec<Vec<f64>>,
    /// `paths[i][j]` from `sources[i]` to `sources[j]`; empty if disconnected.
    pub paths: Vec<Vec<Vec<usize>>>,
}

pub fn all_pairs_min_paths(graph: &WeightedGraph, sources: &[usize]) -> Result<MinPaths> {
    if let Some(&v) = sources.iter().find(|&&v| v >= graph.vertex_count()) {
        return Err(Error::Invalid(format!("source {v} out of range")));
    }
    let trees: Vec<ShortestPaths> = sources
        .iter()
        .map(|&s| graph.shortest_paths(s, None))
        .collect();
    let k = sources.len();
    let mut dist = vec![vec![0.0; k]; k];
    let mut paths = vec![vec![Vec::new(); k]; k];
    for i in 0..k {
        for j in 0..k {
            dist[i][j] = trees[j].distance(sources[i]);
            paths[i][j] = graph
                .path_to_source(sources[i], &trees[j])
                .unwrap_or_default();
        }
    }
    Ok(MinPaths {
        sources: sources.to_vec(),
        dist,
        paths,
    })
}
