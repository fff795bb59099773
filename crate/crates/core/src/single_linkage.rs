//! Single-linkage agglomeration with a full merge trace, and min-max
//! (bottleneck) distances read off the minimum spanning tree.

use crate::error::{invalid, Error, Result};
use crate::instance::Clustering;
use crate::oracle::DistanceOracle;

/// One pairwise merge. `round` counts distinct merge distances from 1;
/// cluster ids are the smallest member position, and the merged cluster
/// keeps `a` (the smaller id).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeEvent {
    pub round: usize,
    pub distance: f64,
    pub a: usize,
    pub b: usize,
}

/// Complete dendrogram over the points a run was given (positions `0..n`
/// local to that run).
#[derive(Debug, Clone)]
pub struct MergeTrace {
    points: Vec<usize>,
    events: Vec<MergeEvent>,
    mst: Vec<(usize, usize, f64)>,
}

impl MergeTrace {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Instance indices of the clustered points, by local position.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    /// Minimum spanning tree edges in local positions, in merge order.
    pub fn mst(&self) -> &[(usize, usize, f64)] {
        &self.mst
    }

    /// Distinct merge distances `d_1 < d_2 < ...`.
    pub fn round_distances(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for e in &self.events {
            if out.last() != Some(&e.distance) {
                out.push(e.distance);
            }
        }
        out
    }

    /// Number of merges completed by the end of each round.
    pub fn round_ends(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, e) in self.events.iter().enumerate() {
            if self.events.get(i + 1).is_none_or(|next| next.round != e.round) {
                out.push(i + 1);
            }
        }
        out
    }

    /// Cluster id (smallest member position) of every point after the first
    /// `merges` merges.
    pub fn labels_after(&self, merges: usize) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n());
        for e in &self.events[..merges.min(self.events.len())] {
            uf.union(e.a, e.b);
        }
        (0..self.n()).map(|x| uf.find(x)).collect()
    }

    /// True when the `k`-cluster snapshot falls strictly inside a round of
    /// equal-distance merges.
    pub fn splits_round(&self, k: usize) -> bool {
        let merges = self.n().saturating_sub(k);
        merges > 0 && merges < self.events.len() && self.events[merges - 1].round == self.events[merges].round
    }

    /// The clustering with exactly `k` clusters, ids ordered by smallest member.
    pub fn snapshot(&self, k: usize) -> Result<Clustering> {
        if k == 0 || k > self.n() {
            return Err(invalid(format!("k must be in 1..={}, got {k}", self.n())));
        }
        let roots = self.labels_after(self.n() - k);
        let mut id = vec![usize::MAX; self.n()];
        let mut next = 0;
        let labels = roots
            .iter()
            .map(|&r| {
                if id[r] == usize::MAX {
                    id[r] = next;
                    next += 1;
                }
                id[r]
            })
            .collect();
        Clustering::new(self.points.clone(), labels, k)
    }

    /// All-pairs min-max distances over this run's points.
    pub fn minmax(&self) -> MinMaxDistances {
        MinMaxDistances::from_tree(self.n(), &self.mst)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links the two roots under the smaller one, so a root is always its
    /// cluster's smallest member.
    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        lo
    }
}

/// Pairwise distances among `points`, queried once per unordered pair.
fn distance_matrix(oracle: &DistanceOracle, points: &[usize]) -> Vec<f64> {
    let n = points.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = oracle.distance_unchecked(points[i], points[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    d
}

/// Dense Prim; edges are returned sorted by weight (stable on discovery order).
fn prim(n: usize, d: &[f64]) -> Vec<(usize, usize, f64)> {
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return edges;
    }
    in_tree[0] = true;
    best[1..n].copy_from_slice(&d[1..n]);
    for _ in 1..n {
        let mut v = usize::MAX;
        for j in 0..n {
            if !in_tree[j] && (v == usize::MAX || best[j] < best[v]) {
                v = j;
            }
        }
        in_tree[v] = true;
        let p = parent[v];
        edges.push((p.min(v), p.max(v), best[v]));
        for j in 0..n {
            if !in_tree[j] && d[v * n + j] < best[j] {
                best[j] = d[v * n + j];
                parent[j] = v;
            }
        }
    }
    edges.sort_by(|a, b| a.2.total_cmp(&b.2));
    edges
}

/// Single linkage on the whole instance; returns the `k`-cluster snapshot
/// and the full trace.
pub fn single_linkage(oracle: &DistanceOracle, k: usize) -> Result<(Clustering, MergeTrace)> {
    let all: Vec<usize> = (0..oracle.n()).collect();
    single_linkage_on(oracle, &all, k)
}

/// Single linkage on a subset of instance points (which may repeat). Uses
/// `|points|^2 / 2` distance queries without a cache.
pub fn single_linkage_on(oracle: &DistanceOracle, points: &[usize], k: usize) -> Result<(Clustering, MergeTrace)> {
    let n = points.len();
    if let Some(&bad) = points.iter().find(|&&p| p >= oracle.n()) {
        return Err(Error::IndexOutOfRange { index: bad, len: oracle.n() });
    }
    if k == 0 || k > n {
        return Err(invalid(format!("k must be in 1..={n}, got {k}")));
    }
    let d = distance_matrix(oracle, points);
    let mst = prim(n, &d);

    let mut uf = UnionFind::new(n);
    let mut events = Vec::with_capacity(n.saturating_sub(1));
    let mut order = Vec::with_capacity(mst.len());
    let mut start = 0;
    let mut round = 0;
    while start < mst.len() {
        let dist = mst[start].2;
        let mut end = start;
        while end < mst.len() && mst[end].2 == dist {
            end += 1;
        }
        round += 1;
        if end - start == 1 {
            let (u, v, _) = mst[start];
            let (a, b) = (uf.find(u), uf.find(v));
            uf.union(a, b);
            events.push(MergeEvent { round, distance: dist, a: a.min(b), b: a.max(b) });
            order.push(mst[start]);
        } else {
            // ties: merge the lexicographically smallest pair of cluster ids
            // joined by some point pair at exactly `dist`, one at a time
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i * n + j] == dist)
                .collect();
            for _ in start..end {
                let mut pick: Option<(usize, usize, usize, usize)> = None;
                for &(i, j) in &pairs {
                    let (ri, rj) = (uf.find(i), uf.find(j));
                    if ri == rj {
                        continue;
                    }
                    let key = (ri.min(rj), ri.max(rj), i, j);
                    if pick.is_none_or(|p| (key.0, key.1) < (p.0, p.1)) {
                        pick = Some(key);
                    }
                }
                let (a, b, i, j) = pick.expect("a tie round has as many crossing pairs as tree edges");
                uf.union(a, b);
                events.push(MergeEvent { round, distance: dist, a, b });
                order.push((i, j, dist));
            }
        }
        start = end;
    }

    let trace = MergeTrace { points: points.to_vec(), events, mst: order };
    Ok((trace.snapshot(k)?, trace))
}

/// All-pairs min-max distances, i.e. the largest edge on each tree path.
#[derive(Debug, Clone)]
pub struct MinMaxDistances {
    n: usize,
    m: Vec<f64>,
}

impl MinMaxDistances {
    /// Builds the minimum spanning tree of the whole instance.
    pub fn new(oracle: &DistanceOracle) -> Self {
        let all: Vec<usize> = (0..oracle.n()).collect();
        let d = distance_matrix(oracle, &all);
        Self::from_tree(all.len(), &prim(all.len(), &d))
    }

    fn from_tree(n: usize, tree: &[(usize, usize, f64)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in tree {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut m = vec![0.0f64; n * n];
        let mut stack = Vec::new();
        for s in 0..n {
            let row = &mut m[s * n..(s + 1) * n];
            let mut seen = vec![false; n];
            seen[s] = true;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, w) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        row[y] = row[x].max(w);
                        stack.push(y);
                    }
                }
            }
        }
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        for x in [i, j] {
            if x >= self.n {
                return Err(Error::IndexOutOfRange { index: x, len: self.n });
            }
        }
        Ok(self.m[i * self.n + j])
    }

    /// `max_{x,y in set} d_B(x, y)`.
    pub fn bottleneck(&self, set: &[usize]) -> Result<f64> {
        if set.is_empty() {
            return Err(invalid("bottleneck of an empty set"));
        }
        let mut best = 0.0f64;
        for (p, &x) in set.iter().enumerate() {
            for &y in &set[p + 1..] {
                best = best.max(self.get(x, y)?);
            }
        }
        Ok(best)
    }
}

/// Min-max distance between two instance points.
pub fn minmax_distance(oracle: &DistanceOracle, i: usize, j: usize) -> Result<f64> {
    MinMaxDistances::new(oracle).get(i, j)
}

/// Bottleneck distance of a set of instance points.
pub fn bottleneck_of_set(oracle: &DistanceOracle, set: &[usize]) -> Result<f64> {
    MinMaxDistances::new(oracle).bottleneck(set)
}
