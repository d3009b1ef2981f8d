//! Stochastic-block-model generator with noisy block-indicator features
//! and a planted cold-start mechanism: intra-block edges touching a
//! designated sparse node subset are hidden and returned as ground truth.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::graphstore::{FeatureMatrix, Graph};
use crate::nnkit::Dense2D;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SbmSpec {
    pub n: usize,
    pub k: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub feature_dim: usize,
    /// Sigma of additive Gaussian noise on the block-indicator features.
    pub feature_noise: f64,
    /// Probability that an intra-block edge touching a sparse node is hidden.
    pub hide_frac: f64,
    /// Fraction of nodes designated sparse.
    pub sparse_frac: f64,
    pub seed: u64,
}

impl SbmSpec {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return Err(Error::invalid("sbm: need 0 < k <= n"));
        }
        if !(self.p_out >= 0.0 && self.p_out < self.p_in && self.p_in <= 1.0) {
            return Err(Error::invalid("sbm: need 0 <= p_out < p_in <= 1"));
        }
        if self.feature_dim < self.k {
            return Err(Error::invalid("sbm: feature_dim must be >= k"));
        }
        for (name, v) in [("hide_frac", self.hide_frac), ("sparse_frac", self.sparse_frac)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("sbm: {name} must be in [0,1]")));
            }
        }
        Ok(())
    }

    /// Block of node i: contiguous, balanced assignment.
    pub fn block_of(&self, i: usize) -> usize {
        i * self.k / self.n
    }
}

/// Generates (graph, features, hidden-edge list), deterministic per seed.
pub fn sbm_generate(spec: &SbmSpec) -> Result<(Graph, FeatureMatrix, Vec<(usize, usize)>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in (u + 1)..spec.n {
            let p = if spec.block_of(u) == spec.block_of(v) {
                spec.p_in
            } else {
                spec.p_out
            };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }

    let n_sparse = (spec.sparse_frac * spec.n as f64).floor() as usize;
    let mut perm: Vec<usize> = (0..spec.n).collect();
    perm.shuffle(&mut rng);
    let sparse: std::collections::BTreeSet<usize> = perm[..n_sparse].iter().copied().collect();

    let mut kept = Vec::new();
    let mut hidden = Vec::new();
    for (u, v) in edges {
        let intra = spec.block_of(u) == spec.block_of(v);
        let touches_sparse = sparse.contains(&u) || sparse.contains(&v);
        if intra && touches_sparse && rng.gen::<f64>() < spec.hide_frac {
            hidden.push((u, v));
        } else {
            kept.push((u, v));
        }
    }
    if kept.is_empty() {
        return Err(Error::invalid("sbm: parameters yield an empty graph"));
    }
    let graph = Graph::from_pairs(spec.n, kept)?;

    let mut features = Dense2D::zeros(spec.n, spec.feature_dim);
    for i in 0..spec.n {
        *features.at_mut(i, spec.block_of(i)) = 1.0;
        for c in 0..spec.feature_dim {
            let noise: f64 = StandardNormal.sample(&mut rng);
            *features.at_mut(i, c) += spec.feature_noise * noise;
        }
    }
    let features = FeatureMatrix::from_dense(features)?;
    Ok((graph, features, hidden))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> SbmSpec {
        SbmSpec {
            n: 20,
            k: 2,
            p_in: 1.0,
            p_out: 0.0,
            feature_dim: 2,
            feature_noise: 0.0,
            hide_frac: 0.0,
            sparse_frac: 0.0,
            seed: 1,
        }
    }

    #[test]
    fn two_disjoint_cliques() {
        let (g, x, hidden) = sbm_generate(&base_spec()).unwrap();
        assert!(hidden.is_empty());
        // each block of 10 is a clique, no cross edges
        assert_eq!(g.num_edge_records(), 2 * 2 * (10 * 9 / 2));
        for u in 0..10 {
            for v in 10..20 {
                assert!(!g.has_edge(u, v));
            }
        }
        assert_eq!(x.row(0), &[1.0, 0.0]);
        assert_eq!(x.row(19), &[0.0, 1.0]);
    }

    #[test]
    fn full_hiding_hides_every_intra_edge() {
        let mut spec = base_spec();
        spec.p_out = 0.5;
        spec.p_in = 1.0;
        spec.hide_frac = 1.0;
        spec.sparse_frac = 1.0;
        let (g, _, hidden) = sbm_generate(&spec).unwrap();
        // everything left is inter-block, everything hidden is intra
        for (u, v) in g.undirected_pairs() {
            assert_ne!(spec.block_of(u), spec.block_of(v));
        }
        assert_eq!(hidden.len(), 2 * (10 * 9 / 2));
        for &(u, v) in &hidden {
            assert_eq!(spec.block_of(u), spec.block_of(v));
        }
    }

    #[test]
    fn densities_match_binomial_expectation() {
        let spec = SbmSpec {
            n: 400,
            k: 8,
            p_in: 0.15,
            p_out: 0.01,
            feature_dim: 8,
            feature_noise: 0.0,
            hide_frac: 0.0,
            sparse_frac: 0.0,
            seed: 7,
        };
        let (g, _, _) = sbm_generate(&spec).unwrap();
        let mut intra = 0usize;
        let mut inter = 0usize;
        for (u, v) in g.undirected_pairs() {
            if spec.block_of(u) == spec.block_of(v) {
                intra += 1;
            } else {
                inter += 1;
            }
        }
        let intra_pairs: f64 = 8.0 * (50.0 * 49.0 / 2.0);
        let inter_pairs: f64 = (400.0 * 399.0 / 2.0) - intra_pairs;
        let intra_sigma = (intra_pairs * 0.15 * 0.85).sqrt();
        let inter_sigma = (inter_pairs * 0.01 * 0.99).sqrt();
        assert!((intra as f64 - intra_pairs * 0.15).abs() < 3.0 * intra_sigma);
        assert!((inter as f64 - inter_pairs * 0.01).abs() < 3.0 * inter_sigma);
    }

    #[test]
    fn deterministic_per_seed() {
        let mut spec = base_spec();
        spec.p_in = 0.5;
        spec.feature_noise = 0.2;
        spec.sparse_frac = 0.3;
        spec.hide_frac = 0.5;
        let (g1, x1, h1) = sbm_generate(&spec).unwrap();
        let (g2, x2, h2) = sbm_generate(&spec).unwrap();
        assert_eq!(g1.edge_records(), g2.edge_records());
        assert_eq!(x1, x2);
        assert_eq!(h1, h2);
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = base_spec();
        spec.p_out = 1.0; // p_out >= p_in
        assert!(sbm_generate(&spec).is_err());
        let mut spec = base_spec();
        spec.feature_dim = 1;
        assert!(sbm_generate(&spec).is_err());
    }
}
