//! Train/validation/test splits and seeded uniform negative-edge sampling.
//!
//! Inductive splits hold out node sets (evaluation edges touch unseen
//! nodes); transductive splits partition the undirected edge set. All
//! operations are pure functions of (inputs, seed); evaluation negatives
//! are sampled once and kept fixed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graphstore::{load_pairs, save_pairs, Graph};
use crate::{Error, Result};

#[inline]
fn canon(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Seeded uniform sampler over the non-edges of a graph, minus an
/// explicit exclusion set. Identical seed + graph give an identical
/// output sequence.
pub struct NegativeSampler {
    rng: ChaCha8Rng,
    exclude: HashSet<(usize, usize)>,
}

impl NegativeSampler {
    pub fn new(seed: u64) -> NegativeSampler {
        NegativeSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            exclude: HashSet::new(),
        }
    }

    pub fn exclude_pairs<I: IntoIterator<Item = (usize, usize)>>(&mut self, pairs: I) {
        for (u, v) in pairs {
            self.exclude.insert(canon(u, v));
        }
    }

    /// Draws `count` distinct undirected non-edges of `g` (also outside the
    /// exclusion set), uniform over the eligible population.
    pub fn sample(&mut self, g: &Graph, count: usize) -> Result<Vec<(usize, usize)>> {
        let n = g.num_nodes();
        let total_pairs = n * n.saturating_sub(1) / 2;
        let mut forbidden = g.undirected_pairs().len();
        for &(u, v) in &self.exclude {
            if u < n && v < n && u != v && !g.has_edge(u, v) {
                forbidden += 1;
            }
        }
        let available = total_pairs.saturating_sub(forbidden);
        if count > available {
            return Err(Error::invalid(format!(
                "requested {count} negative edges but only {available} non-edges are available"
            )));
        }
        let mut out = Vec::with_capacity(count);
        let mut chosen: HashSet<(usize, usize)> = HashSet::new();
        let max_attempts = 200 * count + 10_000;
        let mut attempts = 0usize;
        while out.len() < count && attempts < max_attempts {
            attempts += 1;
            let u = self.rng.gen_range(0..n);
            let v = self.rng.gen_range(0..n);
            if u == v {
                continue;
            }
            let p = canon(u, v);
            if g.has_edge(p.0, p.1) || self.exclude.contains(&p) || chosen.contains(&p) {
                continue;
            }
            chosen.insert(p);
            out.push(p);
        }
        if out.len() < count {
            // dense graph: enumerate the remaining eligible pairs and draw
            // without replacement (still uniform, still seeded)
            let mut remaining: Vec<(usize, usize)> = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    let p = (u, v);
                    if !g.has_edge(u, v) && !self.exclude.contains(&p) && !chosen.contains(&p) {
                        remaining.push(p);
                    }
                }
            }
            let need = count - out.len();
            if remaining.len() < need {
                return Err(Error::invalid(format!(
                    "negative sampling exhausted after {attempts} attempts: \
                     {need} more non-edges requested than exist"
                )));
            }
            remaining.shuffle(&mut self.rng);
            out.extend(remaining.into_iter().take(need));
        }
        Ok(out)
    }

    /// Draws `count` distinct non-edges with at least one endpoint in
    /// `anchors`, uniform over that population.
    pub fn sample_touching(
        &mut self,
        g: &Graph,
        count: usize,
        anchors: &BTreeSet<usize>,
    ) -> Result<Vec<(usize, usize)>> {
        if anchors.is_empty() {
            return Err(Error::invalid("sample_touching: empty anchor set"));
        }
        let n = g.num_nodes();
        let anchor_vec: Vec<usize> = anchors.iter().copied().collect();
        let mut out = Vec::with_capacity(count);
        let mut chosen: HashSet<(usize, usize)> = HashSet::new();
        let max_attempts = 400 * count + 20_000;
        let mut attempts = 0usize;
        while out.len() < count && attempts < max_attempts {
            attempts += 1;
            let u = anchor_vec[self.rng.gen_range(0..anchor_vec.len())];
            let v = self.rng.gen_range(0..n);
            if u == v {
                continue;
            }
            // a pair with both endpoints anchored is proposed twice as often;
            // halve its acceptance to keep the distribution uniform
            if anchors.contains(&v) && self.rng.gen_bool(0.5) {
                continue;
            }
            let p = canon(u, v);
            if g.has_edge(p.0, p.1) || self.exclude.contains(&p) || chosen.contains(&p) {
                continue;
            }
            chosen.insert(p);
            out.push(p);
        }
        if out.len() < count {
            return Err(Error::invalid(format!(
                "anchored negative sampling exhausted after {attempts} attempts \
                 ({} of {count} found)",
                out.len()
            )));
        }
        Ok(out)
    }
}

/// Node-basis split: held-out node sets with evaluation edges touching them.
#[derive(Clone, Debug)]
pub struct InductiveSplit {
    pub train_nodes: BTreeSet<usize>,
    pub val_nodes: BTreeSet<usize>,
    pub test_nodes: BTreeSet<usize>,
    /// Induced subgraph over `train_nodes`, relabelled contiguously.
    pub train_graph: Graph,
    /// Old-to-new id map for `train_graph`.
    pub id_map: BTreeMap<usize, usize>,
    /// Evaluation edges in original ids.
    pub val_pos: Vec<(usize, usize)>,
    pub val_neg: Vec<(usize, usize)>,
    pub test_pos: Vec<(usize, usize)>,
    pub test_neg: Vec<(usize, usize)>,
}

/// Edge-basis split: edge lists partitioned into train/val/test over a
/// shared node set.
#[derive(Clone, Debug)]
pub struct TransductiveSplit {
    /// Graph built from the train edges only, over all nodes.
    pub train_graph: Graph,
    pub train_pos: Vec<(usize, usize)>,
    pub val_pos: Vec<(usize, usize)>,
    pub val_neg: Vec<(usize, usize)>,
    pub test_pos: Vec<(usize, usize)>,
    pub test_neg: Vec<(usize, usize)>,
}

fn check_fracs(val_frac: f64, test_frac: f64) -> Result<()> {
    if !(val_frac > 0.0 && test_frac > 0.0 && val_frac + test_frac < 1.0) {
        return Err(Error::invalid(format!(
            "fractions out of range: val {val_frac}, test {test_frac} (need 0 < val + test < 1)"
        )));
    }
    Ok(())
}

/// Node-basis split. Held-out node sets are drawn uniformly without
/// replacement (sizes floor(frac * n)); an edge touching both a val and a
/// test node goes to test.
pub fn split_inductive(
    g: &Graph,
    val_frac: f64,
    test_frac: f64,
    seed: u64,
) -> Result<InductiveSplit> {
    check_fracs(val_frac, test_frac)?;
    let n = g.num_nodes();
    let n_val = (val_frac * n as f64).floor() as usize;
    let n_test = (test_frac * n as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let val_nodes: BTreeSet<usize> = perm[..n_val].iter().copied().collect();
    let test_nodes: BTreeSet<usize> = perm[n_val..n_val + n_test].iter().copied().collect();
    let train_nodes: BTreeSet<usize> = perm[n_val + n_test..].iter().copied().collect();

    let (train_graph, id_map) = g.induced_subgraph(&train_nodes)?;
    if train_graph.num_edge_records() == 0 {
        return Err(Error::invalid("inductive split leaves zero training edges"));
    }

    let mut val_pos = Vec::new();
    let mut test_pos = Vec::new();
    for (u, v) in g.undirected_pairs() {
        let in_test = test_nodes.contains(&u) || test_nodes.contains(&v);
        let in_val = val_nodes.contains(&u) || val_nodes.contains(&v);
        if in_test {
            test_pos.push((u, v));
        } else if in_val {
            val_pos.push((u, v));
        }
    }

    let mut sampler = NegativeSampler::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let val_neg = if val_pos.is_empty() {
        Vec::new()
    } else {
        sampler.sample_touching(g, val_pos.len(), &val_nodes)?
    };
    sampler.exclude_pairs(val_neg.iter().copied());
    let test_neg = if test_pos.is_empty() {
        Vec::new()
    } else {
        sampler.sample_touching(g, test_pos.len(), &test_nodes)?
    };

    Ok(InductiveSplit {
        train_nodes,
        val_nodes,
        test_nodes,
        train_graph,
        id_map,
        val_pos,
        val_neg,
        test_pos,
        test_neg,
    })
}

/// Edge-basis split: undirected pairs are shuffled by seed and partitioned;
/// the train graph keeps every node.
pub fn split_transductive(
    g: &Graph,
    val_frac: f64,
    test_frac: f64,
    seed: u64,
) -> Result<TransductiveSplit> {
    check_fracs(val_frac, test_frac)?;
    let mut pairs = g.undirected_pairs();
    if pairs.len() < 10 {
        return Err(Error::invalid(format!(
            "transductive split needs at least 10 undirected edges, got {}",
            pairs.len()
        )));
    }
    let m = pairs.len();
    let n_val = (val_frac * m as f64).floor() as usize;
    let n_test = (test_frac * m as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    let val_pos: Vec<(usize, usize)> = pairs[..n_val].to_vec();
    let test_pos: Vec<(usize, usize)> = pairs[n_val..n_val + n_test].to_vec();
    let train_pos: Vec<(usize, usize)> = pairs[n_val + n_test..].to_vec();

    let train_graph = Graph::from_pairs(g.num_nodes(), train_pos.iter().copied())?;

    let mut sampler = NegativeSampler::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let val_neg = sampler.sample(g, val_pos.len())?;
    sampler.exclude_pairs(val_neg.iter().copied());
    let test_neg = sampler.sample(g, test_pos.len())?;

    Ok(TransductiveSplit {
        train_graph,
        train_pos,
        val_pos,
        val_neg,
        test_pos,
        test_neg,
    })
}

/// What a split directory records besides the edge CSVs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitManifest {
    pub mode: String,
    pub seed: u64,
    pub val_frac: f64,
    pub test_frac: f64,
    pub num_nodes: usize,
    #[serde(default)]
    pub val_nodes: Vec<usize>,
    #[serde(default)]
    pub test_nodes: Vec<usize>,
}

fn write_manifest(manifest: &SplitManifest, dir: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(manifest)?;
    std::fs::write(dir.join("split.json"), json)?;
    Ok(())
}

/// Serializes an inductive split (edge lists in original node ids).
pub fn save_inductive_split(
    split: &InductiveSplit,
    g: &Graph,
    val_frac: f64,
    test_frac: f64,
    seed: u64,
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    // train edges in original ids: both endpoints in the train set
    let train_pairs: Vec<(usize, usize)> = g
        .undirected_pairs()
        .into_iter()
        .filter(|(u, v)| split.train_nodes.contains(u) && split.train_nodes.contains(v))
        .collect();
    save_pairs(&train_pairs, &dir.join("train_edges.csv"))?;
    save_pairs(&split.val_pos, &dir.join("val_pos.csv"))?;
    save_pairs(&split.val_neg, &dir.join("val_neg.csv"))?;
    save_pairs(&split.test_pos, &dir.join("test_pos.csv"))?;
    save_pairs(&split.test_neg, &dir.join("test_neg.csv"))?;
    write_manifest(
        &SplitManifest {
            mode: "inductive".into(),
            seed,
            val_frac,
            test_frac,
            num_nodes: g.num_nodes(),
            val_nodes: split.val_nodes.iter().copied().collect(),
            test_nodes: split.test_nodes.iter().copied().collect(),
        },
        dir,
    )
}

pub fn save_transductive_split(
    split: &TransductiveSplit,
    val_frac: f64,
    test_frac: f64,
    seed: u64,
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    save_pairs(&split.train_pos, &dir.join("train_edges.csv"))?;
    save_pairs(&split.val_pos, &dir.join("val_pos.csv"))?;
    save_pairs(&split.val_neg, &dir.join("val_neg.csv"))?;
    save_pairs(&split.test_pos, &dir.join("test_pos.csv"))?;
    save_pairs(&split.test_neg, &dir.join("test_neg.csv"))?;
    write_manifest(
        &SplitManifest {
            mode: "transductive".into(),
            seed,
            val_frac,
            test_frac,
            num_nodes: split.train_graph.num_nodes(),
            val_nodes: Vec::new(),
            test_nodes: Vec::new(),
        },
        dir,
    )
}

/// Raw contents of a split directory.
pub struct LoadedSplit {
    pub manifest: SplitManifest,
    pub train_pairs: Vec<(usize, usize)>,
    pub val_pos: Vec<(usize, usize)>,
    pub val_neg: Vec<(usize, usize)>,
    pub test_pos: Vec<(usize, usize)>,
    pub test_neg: Vec<(usize, usize)>,
}

pub fn load_split_dir(dir: &Path) -> Result<LoadedSplit> {
    let manifest: SplitManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("split.json"))?)?;
    Ok(LoadedSplit {
        manifest,
        train_pairs: load_pairs(&dir.join("train_edges.csv"))?,
        val_pos: load_pairs(&dir.join("val_pos.csv"))?,
        val_neg: load_pairs(&dir.join("val_neg.csv"))?,
        test_pos: load_pairs(&dir.join("test_pos.csv"))?,
        test_neg: load_pairs(&dir.join("test_neg.csv"))?,
    })
}

impl LoadedSplit {
    /// Rebuilds the in-memory inductive split.
    pub fn to_inductive(&self) -> Result<InductiveSplit> {
        if self.manifest.mode != "inductive" {
            return Err(Error::invalid(format!(
                "split directory has mode '{}', expected 'inductive'",
                self.manifest.mode
            )));
        }
        let n = self.manifest.num_nodes;
        let val_nodes: BTreeSet<usize> = self.manifest.val_nodes.iter().copied().collect();
        let test_nodes: BTreeSet<usize> = self.manifest.test_nodes.iter().copied().collect();
        let train_nodes: BTreeSet<usize> = (0..n)
            .filter(|v| !val_nodes.contains(v) && !test_nodes.contains(v))
            .collect();
        let full_train = Graph::from_pairs(n, self.train_pairs.iter().copied())?;
        let (train_graph, id_map) = full_train.induced_subgraph(&train_nodes)?;
        Ok(InductiveSplit {
            train_nodes,
            val_nodes,
            test_nodes,
            train_graph,
            id_map,
            val_pos: self.val_pos.clone(),
            val_neg: self.val_neg.clone(),
            test_pos: self.test_pos.clone(),
            test_neg: self.test_neg.clone(),
        })
    }

    /// Rebuilds the in-memory transductive split.
    pub fn to_transductive(&self) -> Result<TransductiveSplit> {
        if self.manifest.mode != "transductive" {
            return Err(Error::invalid(format!(
                "split directory has mode '{}', expected 'transductive'",
                self.manifest.mode
            )));
        }
        let train_graph =
            Graph::from_pairs(self.manifest.num_nodes, self.train_pairs.iter().copied())?;
        Ok(TransductiveSplit {
            train_graph,
            train_pos: self.train_pairs.clone(),
            val_pos: self.val_pos.clone(),
            val_neg: self.val_neg.clone(),
            test_pos: self.test_pos.clone(),
            test_neg: self.test_neg.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        Graph::from_pairs(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn gnp(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    pairs.push((u, v));
                }
            }
        }
        Graph::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn sampler_finds_the_only_non_edge() {
        let g = Graph::from_pairs(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let mut s = NegativeSampler::new(5);
        assert_eq!(s.sample(&g, 1).unwrap(), vec![(2, 3)]);
    }

    #[test]
    fn sampler_errors_on_complete_graph() {
        let g = Graph::from_pairs(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mut s = NegativeSampler::new(5);
        assert!(s.sample(&g, 1).is_err());
    }

    #[test]
    fn sampler_is_deterministic_per_seed() {
        let g = gnp(30, 0.1, 3);
        let a = NegativeSampler::new(17).sample(&g, 20).unwrap();
        let b = NegativeSampler::new(17).sample(&g, 20).unwrap();
        assert_eq!(a, b);
        let c = NegativeSampler::new(18).sample(&g, 20).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampler_is_uniform_chi_square() {
        // 6-node graph with a few edges: count draw frequencies over the
        // non-edge population and compare to the multinomial expectation
        let g = Graph::from_pairs(6, vec![(0, 1), (2, 3), (4, 5)]).unwrap();
        let non_edges: Vec<(usize, usize)> = {
            let mut v = Vec::new();
            for u in 0..6 {
                for w in (u + 1)..6 {
                    if !g.has_edge(u, w) {
                        v.push((u, w));
                    }
                }
            }
            v
        };
        let k = non_edges.len();
        let draws = 100_000usize;
        let mut counts: HashSet<(usize, usize)> = HashSet::new();
        let mut freq = std::collections::HashMap::new();
        let mut s = NegativeSampler::new(99);
        for _ in 0..draws {
            let e = s.sample(&g, 1).unwrap()[0];
            counts.insert(e);
            *freq.entry(e).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), k);
        let expected = draws as f64 / k as f64;
        let sigma = (draws as f64 * (1.0 / k as f64) * (1.0 - 1.0 / k as f64)).sqrt();
        for (_, &c) in freq.iter() {
            assert!(
                (c as f64 - expected).abs() < 3.0 * sigma,
                "count {c} vs expected {expected} (sigma {sigma})"
            );
        }
    }

    #[test]
    fn inductive_split_on_path() {
        let g = path_graph(5);
        let s = split_inductive(&g, 0.2, 0.2, 7).unwrap();
        assert_eq!(s.val_nodes.len(), 1);
        assert_eq!(s.test_nodes.len(), 1);
        // every path edge touching a held-out node is an eval positive
        for (u, v) in g.undirected_pairs() {
            let touches_test = s.test_nodes.contains(&u) || s.test_nodes.contains(&v);
            let touches_val = s.val_nodes.contains(&u) || s.val_nodes.contains(&v);
            if touches_test {
                assert!(s.test_pos.contains(&(u, v)));
            } else if touches_val {
                assert!(s.val_pos.contains(&(u, v)));
            }
        }
        assert_eq!(s.val_neg.len(), s.val_pos.len());
        assert_eq!(s.test_neg.len(), s.test_pos.len());
    }

    #[test]
    fn inductive_split_is_deterministic() {
        let g = gnp(50, 0.1, 11);
        let a = split_inductive(&g, 0.1, 0.1, 21).unwrap();
        let b = split_inductive(&g, 0.1, 0.1, 21).unwrap();
        assert_eq!(a.val_nodes, b.val_nodes);
        assert_eq!(a.test_nodes, b.test_nodes);
        assert_eq!(a.val_pos, b.val_pos);
        assert_eq!(a.val_neg, b.val_neg);
        assert_eq!(a.test_neg, b.test_neg);
    }

    #[test]
    fn inductive_positives_satisfy_membership_predicate() {
        let g = gnp(100, 0.1, 13);
        let s = split_inductive(&g, 0.1, 0.1, 5).unwrap();
        for &(u, v) in &s.val_pos {
            assert!(s.val_nodes.contains(&u) || s.val_nodes.contains(&v));
            assert!(!s.test_nodes.contains(&u) && !s.test_nodes.contains(&v));
            assert!(g.has_edge(u, v));
        }
        for &(u, v) in &s.test_pos {
            assert!(s.test_nodes.contains(&u) || s.test_nodes.contains(&v));
            assert!(g.has_edge(u, v));
        }
        // leak-freedom: no train-graph edge touches a held-out node
        let rev: BTreeMap<usize, usize> =
            s.id_map.iter().map(|(&old, &new)| (new, old)).collect();
        for (u, v) in s.train_graph.undirected_pairs() {
            let (ou, ov) = (rev[&u], rev[&v]);
            assert!(s.train_nodes.contains(&ou) && s.train_nodes.contains(&ov));
        }
        // negatives are non-edges
        for &(u, v) in s.val_neg.iter().chain(&s.test_neg) {
            assert!(!g.has_edge(u, v));
            assert_ne!(u, v);
        }
    }

    #[test]
    fn transductive_split_counts_and_partition() {
        let g = path_graph(11); // 10 edges
        let s = split_transductive(&g, 0.1, 0.2, 3).unwrap();
        assert_eq!(s.val_pos.len(), 1);
        assert_eq!(s.test_pos.len(), 2);
        assert_eq!(s.train_pos.len(), 7);
        let mut all: Vec<(usize, usize)> = s
            .train_pos
            .iter()
            .chain(&s.val_pos)
            .chain(&s.test_pos)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, g.undirected_pairs());
    }

    #[test]
    fn transductive_split_rejects_tiny_graphs() {
        let g = path_graph(5);
        assert!(split_transductive(&g, 0.1, 0.2, 3).is_err());
    }

    #[test]
    fn transductive_negatives_avoid_all_edges() {
        let g = gnp(50, 0.2, 17);
        let s = split_transductive(&g, 0.05, 0.1, 23).unwrap();
        for &(u, v) in s.val_neg.iter().chain(&s.test_neg) {
            assert!(!g.has_edge(u, v), "negative ({u},{v}) is an edge");
        }
        // no val/test positive appears in train graph
        for &(u, v) in s.val_pos.iter().chain(&s.test_pos) {
            assert!(!s.train_graph.has_edge(u, v));
        }
    }

    #[test]
    fn split_directory_round_trip() {
        let g = gnp(40, 0.15, 29);
        let dir = tempfile::tempdir().unwrap();

        let ind = split_inductive(&g, 0.15, 0.15, 31).unwrap();
        let ind_dir = dir.path().join("ind");
        save_inductive_split(&ind, &g, 0.15, 0.15, 31, &ind_dir).unwrap();
        let loaded = load_split_dir(&ind_dir).unwrap().to_inductive().unwrap();
        assert_eq!(loaded.val_pos, ind.val_pos);
        assert_eq!(loaded.test_neg, ind.test_neg);
        assert_eq!(loaded.train_graph.edge_records(), ind.train_graph.edge_records());

        let tra = split_transductive(&g, 0.05, 0.1, 31).unwrap();
        let tra_dir = dir.path().join("tra");
        save_transductive_split(&tra, 0.05, 0.1, 31, &tra_dir).unwrap();
        let loaded = load_split_dir(&tra_dir).unwrap().to_transductive().unwrap();
        assert_eq!(loaded.train_pos, tra.train_pos);
        assert_eq!(loaded.val_neg, tra.val_neg);
        assert_eq!(
            loaded.train_graph.edge_records(),
            tra.train_graph.edge_records()
        );
    }

    #[test]
    fn bad_fractions_are_rejected() {
        let g = gnp(30, 0.2, 1);
        assert!(split_transductive(&g, 0.5, 0.6, 1).is_err());
        assert!(split_inductive(&g, 0.0, 0.1, 1).is_err());
    }
}
