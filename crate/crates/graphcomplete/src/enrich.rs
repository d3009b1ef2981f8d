//! One-pass graph enrichment: low-degree nodes are scored against every
//! other node with the inductive model, and pairs above a calibrated
//! probability threshold are added to the graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deal::{DealModel, ScoreMode};
use crate::graphstore::{stats, FeatureMatrix, Graph, GraphStats};
use crate::nnkit::Dense2D;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnrichConfig {
    /// Eligibility: nodes with degree <= d_max are enrichment sources.
    pub d_max: usize,
    /// Keep candidate pairs with link probability >= p_min.
    pub p_min: f64,
    /// Optional cap on added edges per source (top by probability,
    /// ties broken by smaller candidate id).
    pub c_max: Option<usize>,
    /// Scoring batch size; affects performance only, never the result.
    pub candidate_block: usize,
}

impl Default for EnrichConfig {
    fn default() -> Self {
        EnrichConfig {
            d_max: 5,
            p_min: 0.85,
            c_max: None,
            candidate_block: 4096,
        }
    }
}

/// Summary of one enrichment pass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnrichReport {
    pub sources_considered: usize,
    pub pairs_scored: usize,
    /// Undirected count; the record-count delta is twice this.
    pub edges_added: usize,
    pub stats_before: GraphStats,
    pub stats_after: GraphStats,
    pub d_max: usize,
    pub p_min: f64,
    pub c_max: Option<usize>,
}

fn candidates_for_source(
    g: &Graph,
    emb: &Dense2D,
    model: &DealModel,
    cfg: &EnrichConfig,
    v: usize,
) -> Result<Vec<(usize, usize)>> {
    let n = g.num_nodes();
    let mut kept: Vec<(usize, f64)> = Vec::new();
    let block = cfg.candidate_block.max(1);
    let mut start = 0usize;
    while start < n {
        let end = (start + block).min(n);
        for u in start..end {
            if u == v || g.has_edge(v, u) {
                continue;
            }
            let p = model.link_probability(emb, v, u, ScoreMode::Inductive)?;
            if p >= cfg.p_min {
                kept.push((u, p));
            }
        }
        start = end;
    }
    if let Some(cap) = cfg.c_max {
        if kept.len() > cap {
            // highest probability first, ties by smaller candidate id
            kept.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            kept.truncate(cap);
            kept.sort_by_key(|&(u, _)| u);
        }
    }
    Ok(kept.into_iter().map(|(u, _)| (v, u)).collect())
}

/// Scores every node with degree <= d_max against all other nodes and adds
/// pairs with probability >= p_min. Existing edges are never removed.
pub fn enrich_graph(
    g: &Graph,
    model: &DealModel,
    x: &FeatureMatrix,
    cfg: &EnrichConfig,
) -> Result<(Graph, Vec<(usize, usize)>, EnrichReport)> {
    if !(0.0..=1.0).contains(&cfg.p_min) {
        return Err(Error::invalid(format!("p_min {} outside [0,1]", cfg.p_min)));
    }
    if x.num_nodes() != g.num_nodes() {
        return Err(Error::shape(
            "enrich",
            format!("features cover {} nodes, graph has {}", x.num_nodes(), g.num_nodes()),
        ));
    }
    let emb = model.encode_attr(x)?;
    let sources: Vec<usize> = (0..g.num_nodes()).filter(|&v| g.degree(v) <= cfg.d_max).collect();

    // parallel over sources; collect() keeps ascending source order
    let per_source: Vec<Result<Vec<(usize, usize)>>> = sources
        .par_iter()
        .map(|&v| candidates_for_source(g, &emb, model, cfg, v))
        .collect();

    let mut added: Vec<(usize, usize)> = Vec::new();
    let mut seen: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    for res in per_source {
        for (v, u) in res? {
            let key = (v.min(u), v.max(u));
            if seen.insert(key) {
                added.push(key);
            }
        }
    }
    added.sort_unstable();

    let enriched = g.add_edges(&added)?;
    let report = EnrichReport {
        sources_considered: sources.len(),
        pairs_scored: sources.len() * (g.num_nodes() - 1),
        edges_added: (enriched.num_edge_records() - g.num_edge_records()) / 2,
        stats_before: stats(g),
        stats_after: stats(&enriched),
        d_max: cfg.d_max,
        p_min: cfg.p_min,
        c_max: cfg.c_max,
    };
    Ok((enriched, added, report))
}

/// Human-readable before/after table.
pub fn enrich_report_text(r: &EnrichReport) -> String {
    format!(
        "Enrichment (d_max = {}, p_min = {}, c_max = {})\n\
         sources considered  {}\n\
         pairs scored        {}\n\
         edges added         {}\n\
         --- before ---\n{}\n\
         --- after ---\n{}",
        r.d_max,
        r.p_min,
        r.c_max.map_or("none".to_string(), |c| c.to_string()),
        r.sources_considered,
        r.pairs_scored,
        r.edges_added,
        r.stats_before,
        r.stats_after,
    )
}

/// Machine-readable JSON summary.
pub fn enrich_report_json(r: &EnrichReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(r)?)
}
