//! Immutable undirected graphs over contiguous node ids, edge-list file
//! ingestion, dense feature matrices, and summary statistics.
//!
//! Storage is symmetric: every undirected edge {u, v} is held as the two
//! directed records (u, v) and (v, u). Self-loops and duplicates are
//! rejected or deduplicated at construction, and a CSR index is built
//! eagerly; graphs are immutable values afterwards.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::nnkit::Dense2D;
use crate::{Error, Result};

/// Undirected graph with symmetric directed edge records and a CSR index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    edge_records: Vec<(usize, usize)>,
    csr_offsets: Vec<usize>,
    csr_targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph from undirected pairs. Pairs are symmetrized and
    /// deduplicated; invalid ids and self-loops are rejected.
    pub fn from_pairs<I>(num_nodes: usize, pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (u, v) in pairs {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) references a node id >= num_nodes ({num_nodes})"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop ({u},{u}) is not allowed")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_canonical_pairs(num_nodes, &set))
    }

    fn from_canonical_pairs(num_nodes: usize, pairs: &BTreeSet<(usize, usize)>) -> Graph {
        let mut records = Vec::with_capacity(pairs.len() * 2);
        for &(u, v) in pairs {
            records.push((u, v));
            records.push((v, u));
        }
        records.sort_unstable();
        let mut offsets = vec![0usize; num_nodes + 1];
        for &(src, _) in &records {
            offsets[src + 1] += 1;
        }
        for i in 0..num_nodes {
            offsets[i + 1] += offsets[i];
        }
        let targets = records.iter().map(|&(_, dst)| dst).collect();
        Graph {
            num_nodes,
            edge_records: records,
            csr_offsets: offsets,
            csr_targets: targets,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Number of directed records (twice the undirected edge count).
    pub fn num_edge_records(&self) -> usize {
        self.edge_records.len()
    }

    pub fn edge_records(&self) -> &[(usize, usize)] {
        &self.edge_records
    }

    pub fn degree(&self, v: usize) -> usize {
        self.csr_offsets[v + 1] - self.csr_offsets[v]
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.csr_targets[self.csr_offsets[v]..self.csr_offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected pairs (u < v) in ascending order.
    pub fn undirected_pairs(&self) -> Vec<(usize, usize)> {
        self.edge_records.iter().filter(|&&(u, v)| u < v).copied().collect()
    }

    pub fn num_zero_degree_nodes(&self) -> usize {
        (0..self.num_nodes).filter(|&v| self.degree(v) == 0).count()
    }

    /// New graph with the given pairs added (symmetrized, deduplicated);
    /// existing edges are never removed.
    pub fn add_edges(&self, pairs: &[(usize, usize)]) -> Result<Graph> {
        let mut set: BTreeSet<(usize, usize)> =
            self.undirected_pairs().into_iter().collect();
        for &(u, v) in pairs {
            if u >= self.num_nodes || v >= self.num_nodes {
                return Err(Error::invalid(format!(
                    "cannot add edge ({u},{v}): node id out of range (num_nodes = {})",
                    self.num_nodes
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("cannot add self-loop ({u},{u})")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_canonical_pairs(self.num_nodes, &set))
    }

    /// Subgraph induced on `keep`, with nodes relabelled contiguously in
    /// ascending original-id order. Returns the subgraph and the
    /// old-to-new id map.
    pub fn induced_subgraph(&self, keep: &BTreeSet<usize>) -> Result<(Graph, BTreeMap<usize, usize>)> {
        if keep.is_empty() {
            return Err(Error::invalid("induced_subgraph: empty node set"));
        }
        if let Some(&max) = keep.iter().next_back() {
            if max >= self.num_nodes {
                return Err(Error::invalid(format!(
                    "induced_subgraph: node id {max} out of range"
                )));
            }
        }
        let map: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut pairs = Vec::new();
        for (u, v) in self.undirected_pairs() {
            if let (Some(&nu), Some(&nv)) = (map.get(&u), map.get(&v)) {
                pairs.push((nu, nv));
            }
        }
        let sub = Graph::from_pairs(keep.len(), pairs)?;
        Ok((sub, map))
    }

    /// Writes the canonical sorted symmetric edge list, one `src,dst` per line.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for &(u, v) in &self.edge_records {
            writeln!(f, "{u},{v}")?;
        }
        Ok(())
    }
}

/// Loads a two-column integer edge list. Comma or whitespace separated,
/// `#`-prefixed comment lines ignored; rows lacking their reverse are
/// symmetrized, duplicates dropped.
pub fn load_graph(edge_path: &Path, num_nodes: usize) -> Result<Graph> {
    let file_name = edge_path.display().to_string();
    let f = std::io::BufReader::new(std::fs::File::open(edge_path)?);
    let mut pairs = Vec::new();
    for (idx, line) in f.lines().enumerate() {
        let line = line?;
        let row = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
        let parse = |tok: Option<&str>| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::parse(&file_name, row, "expected two integers"))?;
            tok.parse::<usize>()
                .map_err(|_| Error::parse(&file_name, row, format!("unparsable token '{tok}'")))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::parse(&file_name, row, "more than two columns"));
        }
        if u >= num_nodes || v >= num_nodes {
            return Err(Error::parse(
                &file_name,
                row,
                format!("node id out of range: ({u},{v}) with num_nodes {num_nodes}"),
            ));
        }
        if u == v {
            return Err(Error::parse(&file_name, row, format!("self-loop ({u},{u})")));
        }
        pairs.push((u, v));
    }
    Graph::from_pairs(num_nodes, pairs)
}

/// Loads an undirected pair list (`u,v` per line) without building a graph.
pub fn load_pairs(path: &Path) -> Result<Vec<(usize, usize)>> {
    let file_name = path.display().to_string();
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut pairs = Vec::new();
    for (idx, line) in f.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(&file_name, idx + 1, "expected two integers"))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(&file_name, idx + 1, "expected two integers"))?;
        pairs.push((u, v));
    }
    Ok(pairs)
}

/// Writes undirected pairs, one `u,v` per line.
pub fn save_pairs(pairs: &[(usize, usize)], path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for &(u, v) in pairs {
        writeln!(f, "{u},{v}")?;
    }
    Ok(())
}

/// Dense per-node attribute vectors; row i holds the features of node i.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    data: Dense2D,
}

/// On-disk feature encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureFormat {
    /// Text CSV of reals, one node per row.
    Csv,
    /// Raw little-endian f32 row-major binary.
    F32Binary,
}

impl FeatureMatrix {
    pub fn from_dense(data: Dense2D) -> Result<FeatureMatrix> {
        if !data.is_finite() {
            return Err(Error::NonFinite("feature matrix entries".into()));
        }
        Ok(FeatureMatrix { data })
    }

    pub fn num_nodes(&self) -> usize {
        self.data.rows()
    }

    pub fn dim(&self) -> usize {
        self.data.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.data.row(i)
    }

    pub fn dense(&self) -> &Dense2D {
        &self.data
    }

    /// Rows for the given nodes, in the given order.
    pub fn subset(&self, nodes: &[usize]) -> FeatureMatrix {
        let mut out = Dense2D::zeros(nodes.len(), self.dim());
        for (new, &old) in nodes.iter().enumerate() {
            out.row_mut(new).copy_from_slice(self.data.row(old));
        }
        FeatureMatrix { data: out }
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for i in 0..self.num_nodes() {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(f, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Loads a feature matrix from CSV or raw f32-LE binary, validating the
/// expected shape and rejecting NaN/Inf entries.
pub fn load_features(
    path: &Path,
    num_nodes: usize,
    dim: usize,
    format: FeatureFormat,
) -> Result<FeatureMatrix> {
    let file_name = path.display().to_string();
    let mut data = Dense2D::zeros(num_nodes, dim);
    match format {
        FeatureFormat::Csv => {
            let f = std::io::BufReader::new(std::fs::File::open(path)?);
            let mut row = 0usize;
            for (idx, line) in f.lines().enumerate() {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                if row >= num_nodes {
                    return Err(Error::invalid(format!(
                        "{file_name}: expected {num_nodes} rows, found more"
                    )));
                }
                let values: Vec<&str> = trimmed
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .collect();
                if values.len() != dim {
                    return Err(Error::parse(
                        &file_name,
                        idx + 1,
                        format!("expected {dim} columns, got {}", values.len()),
                    ));
                }
                for (c, tok) in values.iter().enumerate() {
                    let v: f64 = tok
                        .parse()
                        .map_err(|_| Error::parse(&file_name, idx + 1, format!("unparsable value '{tok}'")))?;
                    if !v.is_finite() {
                        return Err(Error::NonFinite(format!("{file_name} line {}", idx + 1)));
                    }
                    *data.at_mut(row, c) = v;
                }
                row += 1;
            }
            if row != num_nodes {
                return Err(Error::invalid(format!(
                    "{file_name}: expected {num_nodes} rows, got {row}"
                )));
            }
        }
        FeatureFormat::F32Binary => {
            let bytes = std::fs::read(path)?;
            let expected = num_nodes * dim * 4;
            if bytes.len() != expected {
                return Err(Error::invalid(format!(
                    "{file_name}: expected {expected} bytes ({num_nodes} x {dim} f32), got {}",
                    bytes.len()
                )));
            }
            for (i, chunk) in bytes.chunks_exact(4).enumerate() {
                let v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as f64;
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("{file_name} value index {i}")));
                }
                data.data_mut()[i] = v;
            }
        }
    }
    FeatureMatrix::from_dense(data)
}

/// The summary statistics of a graph (node/edge counts, zero-degree share,
/// adjacency sparsity). Percentages are stored at full precision and
/// formatted to two decimals for reporting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub num_nodes: usize,
    pub num_edge_records: usize,
    pub num_zero_degree_nodes: usize,
    pub pct_zero_degree: f64,
    pub sparsity: f64,
}

impl GraphStats {
    /// The pure formula path: sparsity = 100 (1 - records / n^2),
    /// pct_zero = 100 zero / n.
    pub fn from_counts(num_nodes: usize, num_edge_records: usize, num_zero_degree_nodes: usize) -> GraphStats {
        let n = num_nodes as f64;
        let sparsity = if num_nodes == 0 {
            100.0
        } else {
            100.0 * (1.0 - num_edge_records as f64 / (n * n))
        };
        let pct_zero = if num_nodes == 0 {
            0.0
        } else {
            100.0 * num_zero_degree_nodes as f64 / n
        };
        GraphStats {
            num_nodes,
            num_edge_records,
            num_zero_degree_nodes,
            pct_zero_degree: pct_zero,
            sparsity,
        }
    }
}

impl std::fmt::Display for GraphStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Number of nodes              {}", self.num_nodes)?;
        writeln!(f, "Number of zero-degree nodes  {}", self.num_zero_degree_nodes)?;
        writeln!(f, "Percentage of zero degree    {:.2}%", self.pct_zero_degree)?;
        writeln!(f, "Number of edges              {}", self.num_edge_records)?;
        write!(f, "Sparsity                     {:.2}%", self.sparsity)
    }
}

pub fn stats(g: &Graph) -> GraphStats {
    GraphStats::from_counts(g.num_nodes(), g.num_edge_records(), g.num_zero_degree_nodes())
}
