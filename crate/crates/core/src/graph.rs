//! Undirected networks and their degree statistics.
//!
//! A [`Network`] is stored in compressed sparse row form: the neighbours of
//! agent `i` are `neighbors[offsets[i]..offsets[i + 1]]`, sorted ascending.
//! Every signal buffer in the crate is laid out against these offsets.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub type AgentId = u32;

/// Default number of full restarts for the pairing construction.
pub const DEFAULT_REGULAR_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    offsets: Vec<usize>,
    neighbors: Vec<AgentId>,
    /// Original ids when the network was loaded from a file.
    external_ids: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    /// Lower median of the degree sequence.
    pub median_degree: usize,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

impl Network {
    /// Builds a network from an undirected edge list over agents `0..n`.
    ///
    /// Self-loops are rejected; duplicate edges (in either orientation) are
    /// collapsed.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (AgentId, AgentId)>) -> Result<Self> {
        let mut adjacency: Vec<Vec<AgentId>> = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(Error::input(format!("self-loop on agent {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::input(format!("edge ({a}, {b}) outside 0..{n}")));
            }
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        Ok(Self::from_adjacency(adjacency))
    }

    fn from_adjacency(mut adjacency: Vec<Vec<AgentId>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Network {
            offsets,
            neighbors,
            external_ids: None,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[AgentId] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Row offsets into the flat neighbour array (length `n + 1`).
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Total number of directed (sender, receiver) slots, i.e. twice the edge count.
    pub fn slot_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&(b as AgentId)).is_ok()
    }

    /// Original file id of agent `i`, if the network was loaded from an edge list.
    pub fn external_id(&self, i: usize) -> Option<u64> {
        self.external_ids.as_ref().map(|ids| ids[i])
    }

    pub fn edges(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .filter(move |&&j| (j as usize) > i)
                .map(move |&j| (i as AgentId, j))
        })
    }

    pub fn degree_stats(&self) -> DegreeStats {
        degree_stats(&self.degrees())
    }
}

/// Summary statistics of a degree sequence. The median is the lower median,
/// the element at index `(len - 1) / 2` of the sorted sequence.
///
/// # Panics
///
/// Panics on an empty sequence.
pub fn degree_stats(degrees: &[usize]) -> DegreeStats {
    assert!(!degrees.is_empty(), "degree statistics need at least one agent");
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let sum: usize = sorted.iter().sum();
    DegreeStats {
        median_degree: sorted[(sorted.len() - 1) / 2],
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        mean: sum as f64 / sorted.len() as f64,
    }
}

pub fn build_complete(n: usize) -> Result<Network> {
    if n < 2 {
        return Err(Error::param(format!("complete network needs n >= 2, got {n}")));
    }
    let adjacency = (0..n)
        .map(|i| (0..n as AgentId).filter(|&j| j as usize != i).collect())
        .collect();
    Ok(Network::from_adjacency(adjacency))
}

/// Uniform-ish random `d`-regular graph via the pairing model.
///
/// Points are matched two at a time; a pair that would create a self-loop or
/// a repeated edge is rejected and redrawn. If the remaining points admit no
/// valid pair the whole pairing restarts, at most `retries` times.
pub fn build_random_regular(n: usize, d: usize, seed: u64) -> Result<Network> {
    build_random_regular_with_retries(n, d, seed, DEFAULT_REGULAR_RETRIES)
}

pub fn build_random_regular_with_retries(
    n: usize,
    d: usize,
    seed: u64,
    retries: usize,
) -> Result<Network> {
    if d >= n {
        return Err(Error::param(format!("degree {d} must be below n = {n}")));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::param(format!("n * d = {} is odd", n * d)));
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..retries.max(1) {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            return Network::from_edges(n, edges);
        }
    }
    Err(Error::ConstructionFailure {
        attempts: retries.max(1),
        reason: format!("no simple {d}-regular pairing found on {n} agents"),
    })
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(AgentId, AgentId)>> {
    let mut points: Vec<AgentId> = (0..n as AgentId)
        .flat_map(|i| std::iter::repeat_n(i, d))
        .collect();
    let mut seen: HashSet<(AgentId, AgentId)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    let key = |a: AgentId, b: AgentId| if a < b { (a, b) } else { (b, a) };

    let mut misses = 0usize;
    while !points.is_empty() {
        let len = points.len();
        let x = rng.random_range(0..len);
        let y = rng.random_range(0..len);
        let (a, b) = (points[x], points[y]);
        if x != y && a != b && !seen.contains(&key(a, b)) {
            seen.insert(key(a, b));
            edges.push((a, b));
            // remove the higher index first so the lower one stays valid
            let (hi, lo) = if x > y { (x, y) } else { (y, x) };
            points.swap_remove(hi);
            points.swap_remove(lo);
            misses = 0;
            continue;
        }
        misses += 1;
        if misses >= 64 {
            // Many consecutive rejections: scan exhaustively for any valid pair.
            let mut found = None;
            'scan: for p in 0..len {
                for q in p + 1..len {
                    let (a, b) = (points[p], points[q]);
                    if a != b && !seen.contains(&key(a, b)) {
                        found = Some((p, q));
                        break 'scan;
                    }
                }
            }
            let (p, q) = found?;
            let (a, b) = (points[p], points[q]);
            seen.insert(key(a, b));
            edges.push((a, b));
            points.swap_remove(q);
            points.swap_remove(p);
            misses = 0;
        }
    }
    Some(edges)
}

pub fn build_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Network> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i as AgentId, j as AgentId));
            }
        }
    }
    Network::from_edges(n, edges)
}

/// Preferential-attachment network: starts from a star on `m + 1` agents and
/// attaches every further agent to `m` distinct existing agents chosen with
/// probability proportional to degree. Gives a heavy-tailed degree sequence
/// with minimum degree `m`.
pub fn build_preferential_attachment(n: usize, m: usize, seed: u64) -> Result<Network> {
    if m < 1 || m >= n {
        return Err(Error::param(format!("attachment count m = {m} must be in 1..{n}")));
    }
    let mut rng = rng::seeded(seed);
    let mut edges: Vec<(AgentId, AgentId)> = (1..=m as AgentId).map(|j| (0, j)).collect();
    let mut repeated: Vec<AgentId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut targets: Vec<AgentId> = Vec::with_capacity(m);
    for source in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((source as AgentId, t));
            repeated.push(source as AgentId);
            repeated.push(t);
        }
    }
    Network::from_edges(n, edges)
}

/// Loads a whitespace-separated edge list.
///
/// Lines starting with `#` are comments, blank lines are skipped. A comment
/// of the form `# nodes: 3 17 42` declares ids that are kept even when they
/// have no edges. Ids are remapped densely in ascending order of the original
/// id; the mapping is available through [`Network::external_id`].
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Network> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_edge_list(reader: impl BufRead) -> Result<Network> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut ids: BTreeMap<u64, AgentId> = BTreeMap::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::io("<edge list>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(list) = comment.trim().strip_prefix("nodes:") {
                for token in list.split_whitespace() {
                    ids.insert(parse_id(token, line_no)?, 0);
                }
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two ids, got {trimmed:?}"),
            });
        };
        let (a, b) = (parse_id(a, line_no)?, parse_id(b, line_no)?);
        if a == b {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop on id {a}"),
            });
        }
        ids.insert(a, 0);
        ids.insert(b, 0);
        raw_edges.push((a, b));
    }
    for (dense, slot) in ids.values_mut().enumerate() {
        *slot = dense as AgentId;
    }
    let edges = raw_edges.iter().map(|(a, b)| (ids[a], ids[b]));
    let mut net = Network::from_edges(ids.len(), edges)?;
    net.external_ids = Some(ids.into_keys().collect());
    Ok(net)
}

fn parse_id(token: &str, line: usize) -> Result<u64> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{token:?} is not a non-negative integer id"),
    })
}

/// Writes the network as an edge list readable by [`load_edge_list`].
pub fn write_edge_list(net: &Network, mut out: impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "# undirected edge list: {} nodes, {} edges", net.n(), net.edge_count())?;
    let isolated: Vec<String> = (0..net.n())
        .filter(|&i| net.degree(i) == 0)
        .map(|i| net.external_id(i).unwrap_or(i as u64).to_string())
        .collect();
    if !isolated.is_empty() {
        writeln!(out, "# nodes: {}", isolated.join(" "))?;
    }
    for (a, b) in net.edges() {
        let a = net.external_id(a as usize).unwrap_or(a as u64);
        let b = net.external_id(b as usize).unwrap_or(b as u64);
        writeln!(out, "{a}\t{b}")?;
    }
    Ok(())
}

/// Random relabelling of agents; used to check permutation invariance.
pub fn permuted(net: &Network, seed: u64) -> Network {
    let mut perm: Vec<AgentId> = (0..net.n() as AgentId).collect();
    perm.shuffle(&mut rng::seeded(seed));
    let edges: Vec<_> = net
        .edges()
        .map(|(a, b)| (perm[a as usize], perm[b as usize]))
        .collect();
    Network::from_edges(net.n(), edges).expect("relabelled edges stay valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_well_formed(net: &Network) {
        for i in 0..net.n() {
            let nb = net.neighbors(i);
            assert!(nb.windows(2).all(|w| w[0] < w[1]), "sorted, no duplicates");
            for &j in nb {
                assert_ne!(j as usize, i, "self-loop");
                assert!(net.has_edge(j as usize, i), "asymmetric edge");
            }
        }
        let sum: usize = net.degrees().iter().sum();
        assert_eq!(sum, 2 * net.edge_count());
    }

    #[test]
    fn complete_graphs() {
        let k2 = build_complete(2).unwrap();
        assert_eq!(k2.degrees(), vec![1, 1]);
        let k4 = build_complete(4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.degrees().iter().all(|&d| d == 3));
        assert_eq!(build_complete(100).unwrap().degree_stats().median_degree, 99);
        assert!(matches!(build_complete(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn small_regular_graphs_are_forced() {
        let c4 = build_random_regular(4, 2, 3).unwrap();
        assert_well_formed(&c4);
        assert!(c4.degrees().iter().all(|&d| d == 2));
        // the only simple 2-regular graph on 4 vertices is the 4-cycle
        let opposite = (0..4).filter(|&i| !c4.has_edge(0, i) && i != 0).count();
        assert_eq!(opposite, 1);

        let tri = build_random_regular(3, 2, 1).unwrap();
        assert_eq!(tri.edge_count(), 3);
    }

    #[test]
    fn regular_graph_degrees() {
        let net = build_random_regular(1000, 50, 7).unwrap();
        assert_well_formed(&net);
        let stats = net.degree_stats();
        assert_eq!((stats.min, stats.max, stats.median_degree), (50, 50, 50));
    }

    #[test]
    fn regular_graph_rejects_bad_parameters() {
        assert!(matches!(build_random_regular(5, 3, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_random_regular(4, 4, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn regular_graph_is_seed_deterministic() {
        let a = build_random_regular(200, 10, 11).unwrap();
        let b = build_random_regular(200, 10, 11).unwrap();
        let c = build_random_regular(200, 10, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn erdos_renyi_extremes() {
        let empty = build_erdos_renyi(30, 0.0, 1).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert!(empty.degrees().iter().all(|&d| d == 0));
        let full = build_erdos_renyi(30, 1.0, 1).unwrap();
        assert_eq!(full, build_complete(30).unwrap());
        assert!(build_erdos_renyi(3, 1.5, 0).is_err());
        assert!(build_erdos_renyi(3, -0.1, 0).is_err());
    }

    #[test]
    fn erdos_renyi_mean_degree() {
        let n = 2000;
        let p = 0.05;
        let net = build_erdos_renyi(n, p, 1).unwrap();
        assert_well_formed(&net);
        // edge count ~ Bin(n(n-1)/2, p); mean degree = 2E/n
        let pairs = (n * (n - 1) / 2) as f64;
        let sd_mean_degree = 2.0 * (pairs * p * (1.0 - p)).sqrt() / n as f64;
        let expected = p * (n - 1) as f64;
        assert!((expected - 99.95).abs() < 1e-9);
        let mean = net.degree_stats().mean;
        assert!((mean - expected).abs() < 3.0 * sd_mean_degree, "mean degree {mean}");
    }

    #[test]
    fn preferential_attachment_shape() {
        let net = build_preferential_attachment(3000, 5, 2).unwrap();
        assert_well_formed(&net);
        let stats = net.degree_stats();
        assert_eq!(stats.min, 5);
        assert!(stats.max > 10 * stats.median_degree);
        assert_eq!(net.edge_count(), 5 + (3000 - 6) * 5);
    }

    #[test]
    fn median_is_lower_median() {
        assert_eq!(degree_stats(&[3, 3, 3]).median_degree, 3);
        assert_eq!(degree_stats(&[1, 2, 3, 10]).median_degree, 2);
        let s = degree_stats(&[10, 1, 3, 2]);
        assert_eq!((s.min, s.max, s.median_degree), (1, 10, 2));
        assert_eq!(s.mean, 4.0);
    }

    #[test]
    fn parse_path_graph() {
        let net = parse_edge_list("0 1\n1 2".as_bytes()).unwrap();
        assert_eq!(net.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn parse_dedups_and_skips_comments() {
        let net = parse_edge_list("# header\n\n0 1\n1 0\n0\t1\n".as_bytes()).unwrap();
        assert_eq!(net.n(), 2);
        assert_eq!(net.edge_count(), 1);
    }

    #[test]
    fn parse_remaps_sparse_ids_and_keeps_isolated() {
        let net = parse_edge_list("# nodes: 5 900\n100 7\n7 42\n".as_bytes()).unwrap();
        assert_eq!(net.n(), 5);
        let ids: Vec<u64> = (0..5).map(|i| net.external_id(i).unwrap()).collect();
        assert_eq!(ids, vec![5, 7, 42, 100, 900]);
        assert_eq!(net.degrees(), vec![0, 2, 1, 1, 0]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("0 1\n1 x\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("0 1\n\n3\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("-1 2\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_edge_list("/nonexistent/edges.txt").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/edges.txt"));
    }
}
