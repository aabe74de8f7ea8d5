//! Cluster graphs: named presets, JSON cluster files, and grouping of
//! site pairs into equivalence classes.
//!
//! Preset site labels are 0-based. Where a preset mirrors a published
//! figure, figure label `n` corresponds to site `n - 1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest cluster the bit-word basis can hold.
pub const MAX_SITES: usize = 30;

/// Labeled undirected graph of spin sites with its nearest-neighbor bonds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterGraph {
    name: String,
    num_sites: usize,
    edges: Vec<(usize, usize)>,
    pair_class_labels: BTreeMap<(usize, usize), String>,
}

impl ClusterGraph {
    /// Builds a validated graph. Edges are normalized to `(min, max)` and
    /// sorted; duplicates, self-loops, out-of-range sites and disconnected
    /// graphs are rejected with the offending edge position.
    pub fn new(
        name: impl Into<String>,
        num_sites: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let name = name.into();
        if num_sites == 0 || num_sites > MAX_SITES {
            return Err(Error::InvalidCluster(format!(
                "num_sites must be in 1..={MAX_SITES}, got {num_sites}"
            )));
        }
        let mut seen = BTreeSet::new();
        for (pos, (a, b)) in edges.into_iter().enumerate() {
            if a >= num_sites || b >= num_sites {
                return Err(Error::InvalidCluster(format!(
                    "edges[{pos}] = [{a},{b}]: site index out of range 0..{num_sites}"
                )));
            }
            if a == b {
                return Err(Error::InvalidCluster(format!(
                    "edges[{pos}] = [{a},{b}]: self-loop"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidCluster(format!(
                    "edges[{pos}] = [{a},{b}]: duplicate edge"
                )));
            }
        }
        let graph = ClusterGraph {
            name,
            num_sites,
            edges: seen.into_iter().collect(),
            pair_class_labels: BTreeMap::new(),
        };
        if !graph.is_connected() {
            return Err(Error::InvalidCluster(format!(
                "graph `{}` is not connected",
                graph.name
            )));
        }
        Ok(graph)
    }

    /// Attaches explicit pair-class labels, overriding observable-based grouping.
    pub fn with_pair_class_labels(
        mut self,
        labels: impl IntoIterator<Item = ((usize, usize), String)>,
    ) -> Result<Self> {
        for ((a, b), label) in labels {
            if a >= self.num_sites || b >= self.num_sites || a == b {
                return Err(Error::InvalidCluster(format!(
                    "pair_class_labels: invalid pair {a}-{b}"
                )));
            }
            self.pair_class_labels.insert((a.min(b), a.max(b)), label);
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// Sorted bond list, each as `(min, max)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of nearest-neighbor bonds, N_n.
    pub fn num_bonds(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    pub fn pair_class_label(&self, i: usize, j: usize) -> Option<&str> {
        self.pair_class_labels
            .get(&(i.min(j), i.max(j)))
            .map(String::as_str)
    }

    pub fn pair_class_labels(&self) -> &BTreeMap<(usize, usize), String> {
        &self.pair_class_labels
    }

    pub fn neighbors(&self, site: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == site {
                Some(b)
            } else if b == site {
                Some(a)
            } else {
                None
            }
        })
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_sites];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_sites];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(s) = queue.pop_front() {
            for &t in &adj[s] {
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    queue.push_back(t);
                }
            }
        }
        count == self.num_sites
    }

    /// Two-coloring check; `false` means the graph has an odd cycle.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.num_sites];
        color[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(s) = queue.pop_front() {
            for &t in &adj[s] {
                if color[t] == u8::MAX {
                    color[t] = 1 - color[s];
                    queue.push_back(t);
                } else if color[t] == color[s] {
                    return false;
                }
            }
        }
        true
    }

    /// Graph distance from `site` to every site (BFS hop count).
    pub fn distances_from(&self, site: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut dist = vec![usize::MAX; self.num_sites];
        dist[site] = 0;
        let mut queue = VecDeque::from([site]);
        while let Some(s) = queue.pop_front() {
            for &t in &adj[s] {
                if dist[t] == usize::MAX {
                    dist[t] = dist[s] + 1;
                    queue.push_back(t);
                }
            }
        }
        dist
    }

    /// All unordered pairs `(i, j)` with `i < j`, lexicographic.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        all_pairs(self.num_sites)
    }
}

pub fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

pub const PRESET_IDS: &[&str] = &[
    "chain:<N>",
    "square:4x4",
    "tictactoe:12",
    "tri:10",
    "tri:4x4",
    "davidstar:12",
    "complete:<N>",
];

/// Builds a named preset cluster.
pub fn preset(name: &str) -> Result<ClusterGraph> {
    let unknown = || Error::UnknownPreset {
        name: name.to_string(),
        valid: PRESET_IDS.join(", "),
    };
    let (kind, arg) = name.split_once(':').ok_or_else(unknown)?;
    match (kind, arg) {
        ("chain", n) => {
            let n = parse_size(n).ok_or_else(unknown)?;
            chain(n)
        }
        ("complete", n) => {
            let n = parse_size(n).ok_or_else(unknown)?;
            complete(n)
        }
        ("square", "4x4") => square_torus_4x4(),
        ("tictactoe", "12") => tictactoe_12(),
        ("tri", "10") => triangular_10(),
        ("tri", "4x4") => triangular_torus_4x4(),
        ("davidstar", "12") => david_star_12(),
        _ => Err(unknown()),
    }
}

fn parse_size(s: &str) -> Option<usize> {
    s.parse::<usize>()
        .ok()
        .filter(|&n| (2..=MAX_SITES).contains(&n))
}

/// Ring of `n` sites, site i bonded to (i + 1) mod n.
pub fn chain(n: usize) -> Result<ClusterGraph> {
    ClusterGraph::new(
        format!("chain:{n}"),
        n,
        ring_edges(n).collect::<BTreeSet<_>>(),
    )
}

fn ring_edges(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).map(move |i| {
        let j = (i + 1) % n;
        (i.min(j), i.max(j))
    })
}

pub fn complete(n: usize) -> Result<ClusterGraph> {
    ClusterGraph::new(format!("complete:{n}"), n, all_pairs(n))
}

/// 4×4 square lattice with periodic boundaries; site = 4y + x.
fn square_torus_4x4() -> Result<ClusterGraph> {
    let mut edges = Vec::new();
    for y in 0..4 {
        for x in 0..4 {
            let s = 4 * y + x;
            edges.push((s, 4 * y + (x + 1) % 4));
            edges.push((s, 4 * ((y + 1) % 4) + x));
        }
    }
    ClusterGraph::new("square:4x4", 16, edges)
}

/// Tic-Tac-Toe ("#") cluster: an inner square of four sites, each carrying
/// two pendant sites along the arms of the "#".
///
/// Sites sit on a 4×4 grid without its corners, numbered row by row:
///
/// ```text
///        0   1
///    2   3   4   5
///    6   7   8   9
///       10  11
/// ```
///
/// Bonds run only along the four lines of the "#", so the boundary sites
/// 0 and 1 are not bonded to each other.
fn tictactoe_12() -> Result<ClusterGraph> {
    let edges = [
        // inner square
        (3, 4),
        (4, 8),
        (7, 8),
        (3, 7),
        // arms
        (0, 3),
        (2, 3),
        (1, 4),
        (4, 5),
        (6, 7),
        (7, 10),
        (8, 9),
        (8, 11),
    ];
    ClusterGraph::new("tictactoe:12", 12, edges)
}

/// Ten-site triangular-lattice patch with rows of 3, 4 and 3 sites:
///
/// ```text
///      0   1   2
///    3   4   5   6
///      7   8   9
/// ```
fn triangular_10() -> Result<ClusterGraph> {
    let mut edges = vec![(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (7, 8), (8, 9)];
    for x in 0..3 {
        // top row site x touches middle-row sites x and x + 1; same below
        edges.push((x, 3 + x));
        edges.push((x, 4 + x));
        edges.push((7 + x, 3 + x));
        edges.push((7 + x, 4 + x));
    }
    ClusterGraph::new("tri:10", 10, edges)
}

/// 16-site triangular cluster with periodic boundaries; site = 4y + x.
///
/// Rows are drawn zigzag: odd rows are shifted half a spacing to the left,
/// so an even-row site x touches x and x + 1 in the next row while an
/// odd-row site x touches x - 1 and x. Both directions wrap with period 4.
/// Four horizontal steps return to the start; four slanted steps do not.
/// Site 0 gets the wrap-around neighbors 3, 12 and 13.
fn triangular_torus_4x4() -> Result<ClusterGraph> {
    let mut edges = Vec::new();
    for y in 0..4usize {
        for x in 0..4usize {
            let s = 4 * y + x;
            edges.push((s, 4 * y + (x + 1) % 4));
            let next = 4 * ((y + 1) % 4);
            let (a, b) = if y % 2 == 0 { (x, x + 1) } else { (x + 3, x) };
            edges.push((s, next + a % 4));
            edges.push((s, next + b % 4));
        }
    }
    ClusterGraph::new("tri:4x4", 16, edges)
}

/// Horizontal bonds of `tri:4x4` (both ends in the same row).
pub fn is_horizontal_tri_bond(i: usize, j: usize) -> bool {
    i / 4 == j / 4
}

/// Kagome David star: the 12-site perimeter ring plus the inner hexagon
/// joining every second site (0-2-4-6-8-10). Odd sites are the star tips.
fn david_star_12() -> Result<ClusterGraph> {
    let chords = (0..6).map(|k| {
        let (a, b) = (2 * k, (2 * k + 2) % 12);
        (a.min(b), a.max(b))
    });
    ClusterGraph::new("davidstar:12", 12, ring_edges(12).chain(chords))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterFile {
    name: String,
    num_sites: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    pair_class_labels: Option<BTreeMap<String, String>>,
}

/// Parses and validates a JSON cluster file.
pub fn load_cluster(text: &str) -> Result<ClusterGraph> {
    let file: ClusterFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let graph = ClusterGraph::new(
        file.name,
        file.num_sites,
        file.edges.iter().map(|e| (e[0], e[1])),
    )?;
    let mut labels = Vec::new();
    for (key, label) in file.pair_class_labels.unwrap_or_default() {
        let pair = key
            .split_once('-')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "pair_class_labels key `{key}` is not of the form \"i-j\""
                ))
            })?;
        labels.push((pair, label));
    }
    graph.with_pair_class_labels(labels)
}

/// Serializes a graph in the cluster-file format.
pub fn to_cluster_json(graph: &ClusterGraph) -> String {
    let labels = graph
        .pair_class_labels
        .iter()
        .map(|(&(a, b), l)| (format!("{a}-{b}"), l.clone()))
        .collect::<BTreeMap<_, _>>();
    let file = ClusterFile {
        name: graph.name.clone(),
        num_sites: graph.num_sites,
        edges: graph.edges.iter().map(|&(a, b)| [a, b]).collect(),
        pair_class_labels: (!labels.is_empty()).then_some(labels),
    };
    serde_json::to_string_pretty(&file).expect("cluster file serializes")
}

/// Default tolerance on Γ and z for grouping pairs.
pub const PAIR_CLASS_TOL: f64 = 1e-6;

/// Observable fingerprint of one pair used for class grouping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSignature {
    pub i: usize,
    pub j: usize,
    pub gamma: f64,
    pub z: f64,
}

/// Groups pairs whose (Γ, z) agree within `tol`. Class ids are `c0`, `c1`,
/// ... in order of first appearance; explicit labels on the graph win.
pub fn pair_classes(graph: &ClusterGraph, pairs: &[PairSignature], tol: f64) -> Vec<String> {
    let mut reps: Vec<(f64, f64)> = Vec::new();
    pairs
        .iter()
        .map(|p| {
            if let Some(label) = graph.pair_class_label(p.i, p.j) {
                return label.to_string();
            }
            let found = reps
                .iter()
                .position(|&(g, z)| (g - p.gamma).abs() <= tol && (z - p.z).abs() <= tol);
            let id = found.unwrap_or_else(|| {
                reps.push((p.gamma, p.z));
                reps.len() - 1
            });
            format!("c{id}")
        })
        .collect()
}
