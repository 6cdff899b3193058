//! Undirected, unweighted graphs in compressed adjacency form.
//!
//! Every [`Graph`] keeps the original node labels next to the dense
//! `0..n` indices, so results can always be written back in terms of the
//! labels found in the input file. Indices follow the sorted order of the
//! labels: numerically when every label is an integer, lexicographically
//! otherwise.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_count: usize,
}

/// What the loader dropped while cleaning the input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops: usize,
    pub duplicate_edges: usize,
    /// Nodes outside the largest connected component.
    pub dropped_nodes: usize,
    /// Edges outside the largest connected component.
    pub dropped_edges: usize,
}

impl Graph {
    /// Builds a graph over `labels.len()` nodes from index pairs.
    ///
    /// Self-loops and repeated edges (in either orientation) are dropped and
    /// counted in the returned report. Connectivity is not enforced here; see
    /// [`Graph::largest_connected_component`].
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<(Self, LoadReport)> {
        let n = labels.len();
        let mut report = LoadReport::default();
        let mut pairs = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::LabelOutOfRange {
                    label: a.max(b),
                    nodes: n,
                });
            }
            if a == b {
                report.self_loops += 1;
                continue;
            }
            pairs.push((a.min(b), a.max(b)));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        report.duplicate_edges = before - pairs.len();
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let mut degree = vec![0usize; n];
        for &(a, b) in &pairs {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(a, b) in &pairs {
            neighbors[cursor[a]] = b;
            cursor[a] += 1;
            neighbors[cursor[b]] = a;
            cursor[b] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }

        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect::<HashMap<_, _>>();
        if index.len() != n {
            return Err(Error::InvalidConfig("node labels must be distinct".into()));
        }

        let graph = Graph {
            labels,
            index,
            offsets,
            neighbors,
            edge_count: pairs.len(),
        };
        Ok((graph, report))
    }

    /// Convenience constructor with labels `"0".."n-1"`.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Graph::from_edges(labels, edges).map(|(g, _)| g)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges, `m`.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `2m` as a float, the normalizer used by every descriptor.
    pub fn volume(&self) -> f64 {
        (2 * self.edge_count) as f64
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&j).is_ok()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edges `(i, j)` with `i < j`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Connected components as lists of node indices, ordered by their
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(i) = queue.pop_front() {
                members.push(i);
                for &j in self.neighbors(i) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subgraph induced on the largest connected component, reindexed in the
    /// original order. Ties go to the component holding the smallest label.
    pub fn largest_connected_component(&self) -> Result<Graph> {
        self.largest_component_with_map().map(|(g, _)| g)
    }

    /// Like [`Graph::largest_connected_component`], also returning for each new
    /// index the index it had in `self`.
    pub fn largest_component_with_map(&self) -> Result<(Graph, Vec<usize>)> {
        let components = self.components();
        // `max_by_key` keeps the last maximum, so scan manually for the first.
        let mut best = 0;
        for (c, members) in components.iter().enumerate() {
            if members.len() > components[best].len() {
                best = c;
            }
        }
        let keep = &components[best];
        if keep.len() == self.node_count() {
            return Ok((self.clone(), keep.clone()));
        }
        self.induced_subgraph(keep)
    }

    /// Subgraph induced on `nodes` (sorted, distinct), preserving their order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut new_index = vec![usize::MAX; self.node_count()];
        for (k, &i) in nodes.iter().enumerate() {
            new_index[i] = k;
        }
        let labels = nodes.iter().map(|&i| self.labels[i].clone()).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(i, j)| new_index[i] != usize::MAX && new_index[j] != usize::MAX)
            .map(|(i, j)| (new_index[i], new_index[j]))
            .collect();
        let (g, _) = Graph::from_edges(labels, &edges)?;
        Ok((g, nodes.to_vec()))
    }

    /// Writes one `label label` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, j) in self.edges() {
            writeln!(out, "{} {}", self.labels[i], self.labels[j])?;
        }
        Ok(())
    }

    /// SHA-256 over the canonical edge list, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (i, j) in self.edges() {
            hasher.update(self.labels[i].as_bytes());
            hasher.update(b" ");
            hasher.update(self.labels[j].as_bytes());
            hasher.update(b"\n");
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect()
}

/// Yields `(line_number, tokens)` for every non-blank, non-comment line.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Vec<String>)>> {
    reader.lines().enumerate().filter_map(|(k, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(e.into())),
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        Some(Ok((
            k + 1,
            tokens(trimmed).into_iter().map(str::to_owned).collect(),
        )))
    })
}

/// Sorts labels numerically when all of them are non-negative integers,
/// lexicographically otherwise.
fn sort_labels(labels: &mut [String]) {
    let numeric: Option<Vec<u128>> = labels.iter().map(|l| l.parse::<u128>().ok()).collect();
    match numeric {
        Some(_) => labels.sort_by(|a, b| {
            let (x, y) = (a.parse::<u128>().unwrap(), b.parse::<u128>().unwrap());
            x.cmp(&y).then_with(|| a.cmp(b))
        }),
        None => labels.sort(),
    }
}

/// Reads an edge list and returns the graph over its largest connected
/// component.
///
/// One edge per line, two tokens separated by whitespace or commas. Lines
/// starting with `#` are comments. A third token is treated as a weight and
/// rejected.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Graph, LoadReport)> {
    let mut raw = Vec::new();
    for item in data_lines(reader) {
        let (line, toks) = item?;
        match toks.len() {
            2 => raw.push((toks[0].clone(), toks[1].clone())),
            3 => {
                return Err(Error::WeightedEdge { line, tokens: 3 });
            }
            t => {
                return Err(Error::parse(
                    line,
                    format!("expected two node labels, found {t} tokens"),
                ))
            }
        }
    }
    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut labels: Vec<String> = raw
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    sort_labels(&mut labels);
    labels.dedup();
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let edges: Vec<(usize, usize)> = raw
        .iter()
        .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
        .collect();
    drop(index);

    let (full, mut report) = Graph::from_edges(labels, &edges)?;
    let component = full.largest_connected_component()?;
    report.dropped_nodes = full.node_count() - component.node_count();
    report.dropped_edges = full.edge_count() - component.edge_count();
    Ok((component, report))
}

/// Reads `node community` lines and returns one community id per node of
/// `graph`, renumbered `0..` in order of first appearance along the node
/// indices.
pub fn load_ground_truth<R: BufRead>(reader: R, graph: &Graph) -> Result<Vec<usize>> {
    let n = graph.node_count();
    let mut raw: Vec<Option<String>> = vec![None; n];
    for item in data_lines(reader) {
        let (line, toks) = item?;
        if toks.len() != 2 {
            return Err(Error::parse(
                line,
                format!("expected `node community`, found {} tokens", toks.len()),
            ));
        }
        let i = graph
            .index_of(&toks[0])
            .ok_or_else(|| Error::UnknownNode(toks[0].clone()))?;
        match &raw[i] {
            Some(c) if *c != toks[1] => return Err(Error::ConflictingLabel(toks[0].clone())),
            _ => raw[i] = Some(toks[1].clone()),
        }
    }
    let missing: Vec<usize> = (0..n).filter(|&i| raw[i].is_none()).collect();
    if let Some(&first) = missing.first() {
        return Err(Error::MissingLabels {
            missing: missing.len(),
            first: graph.label(first).to_owned(),
        });
    }
    Ok(canonical_labels(raw.iter().map(|c| c.as_deref().unwrap())))
}

/// Renumbers arbitrary labels to `0..` by first appearance.
pub fn canonical_labels<T, I>(labels: I) -> Vec<usize>
where
    T: Eq + std::hash::Hash,
    I: IntoIterator<Item = T>,
{
    let mut ids = HashMap::new();
    labels
        .into_iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect()
}
