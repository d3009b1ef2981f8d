//! Inductive dual-encoder link predictor.
//!
//! An attribute-oriented encoder (MLP or linear embedding layer) maps node
//! features into the embedding space; a structure-oriented per-node
//! embedding table covers the training nodes. Pair scores are cosine
//! similarities, combined losses are a logistic pairwise ranking term on
//! attribute and structure scores, a cosine-gap alignment term pulling the
//! two embeddings of each node together, and a small calibrated-BCE term
//! that turns cosines into link probabilities via sigmoid(a * s + c).

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graphstore::{FeatureMatrix, Graph};
use crate::nnkit::{
    self, add_bias, add_bias_backward, cosine, cosine_grad_accum, glorot_uniform, matmul,
    matmul_backward, relu, relu_backward, sigmoid_scalar, softplus_scalar, Adam, Dense2D,
    ParamStore,
};
use crate::splitkit::NegativeSampler;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncoderKind {
    Mlp,
    Embedding,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DealConfig {
    pub encoder_kind: EncoderKind,
    pub embed_dim: usize,
    pub mlp_hidden: usize,
    pub lambda_aa: f64,
    pub lambda_ss: f64,
    pub lambda_align: f64,
    pub lambda_bce: f64,
    /// Ranking temperature.
    pub theta_r: f64,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
    /// Inference weight on the attribute-attribute score.
    pub w_attr: f64,
    /// Inference weight on the cross attribute/structure score.
    pub w_cross: f64,
}

impl Default for DealConfig {
    fn default() -> Self {
        DealConfig {
            encoder_kind: EncoderKind::Mlp,
            embed_dim: 64,
            mlp_hidden: 256,
            lambda_aa: 1.0,
            lambda_ss: 1.0,
            lambda_align: 1.0,
            lambda_bce: 0.1,
            theta_r: 10.0,
            epochs: 200,
            lr: 5e-3,
            seed: 0,
            w_attr: 1.0,
            w_cross: 0.0,
        }
    }
}

impl DealConfig {
    fn validate(&self) -> Result<()> {
        if self.embed_dim == 0 || self.mlp_hidden == 0 {
            return Err(Error::invalid("deal: dims must be >= 1"));
        }
        for (name, v) in [
            ("lambda_aa", self.lambda_aa),
            ("lambda_ss", self.lambda_ss),
            ("lambda_align", self.lambda_align),
            ("lambda_bce", self.lambda_bce),
            ("w_attr", self.w_attr),
            ("w_cross", self.w_cross),
        ] {
            if v < 0.0 {
                return Err(Error::invalid(format!("deal: {name} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// How pair scores are combined at inference time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoreMode {
    /// Attribute embeddings only; works for unseen nodes.
    Inductive,
    /// Attribute plus cross attribute/structure scores; training nodes only.
    Full,
}

/// Pair score components. Structure-dependent components are `None` when a
/// structure embedding is absent (unseen node).
#[derive(Clone, Copy, Debug)]
pub struct ScoreComponents {
    pub s_aa: f64,
    pub s_ss: Option<f64>,
    pub s_cross: Option<f64>,
}

pub fn score_components(
    attr_i: &[f64],
    attr_j: &[f64],
    struct_i: Option<&[f64]>,
    struct_j: Option<&[f64]>,
) -> ScoreComponents {
    let s_aa = cosine(attr_i, attr_j);
    let (s_ss, s_cross) = match (struct_i, struct_j) {
        (Some(si), Some(sj)) => (
            Some(cosine(si, sj)),
            Some((cosine(attr_i, sj) + cosine(si, attr_j)) / 2.0),
        ),
        _ => (None, None),
    };
    ScoreComponents { s_aa, s_ss, s_cross }
}

/// Mean logistic pairwise ranking loss over index-paired scores:
/// mean_k softplus(-theta * (pos_k - neg_k)).
pub fn pairwise_ranking_loss(pos: &[f64], neg: &[f64], theta: f64) -> f64 {
    assert_eq!(pos.len(), neg.len());
    pos.iter()
        .zip(neg)
        .map(|(&p, &n)| softplus_scalar(-theta * (p - n)))
        .sum::<f64>()
        / pos.len() as f64
}

const PARAM_W1: &str = "attr.w1";
const PARAM_B1: &str = "attr.b1";
const PARAM_W2: &str = "attr.w2";
const PARAM_B2: &str = "attr.b2";
const PARAM_EMBED: &str = "attr.embed";
const PARAM_STRUCT: &str = "struct.table";
const PARAM_CALIB: &str = "calib";

/// Trained dual-encoder model: attribute encoder parameters, structure
/// embedding table (one row per training-graph node), and the probability
/// calibration scalars (a, c).
pub struct DealModel {
    pub cfg: DealConfig,
    pub feature_dim: usize,
    pub num_struct_nodes: usize,
    store: ParamStore,
}

struct AttrCache {
    /// MLP pre-activation of the hidden layer.
    z1: Option<Dense2D>,
    /// MLP hidden activations.
    h1: Option<Dense2D>,
}

impl DealModel {
    pub fn new(cfg: DealConfig, feature_dim: usize, num_struct_nodes: usize) -> Result<DealModel> {
        cfg.validate()?;
        if feature_dim == 0 || num_struct_nodes == 0 {
            return Err(Error::invalid("deal: feature_dim and node count must be >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut store = ParamStore::new();
        match cfg.encoder_kind {
            EncoderKind::Mlp => {
                store.insert(PARAM_W1, glorot_uniform(feature_dim, cfg.mlp_hidden, &mut rng))?;
                store.insert(PARAM_B1, Dense2D::zeros(1, cfg.mlp_hidden))?;
                store.insert(PARAM_W2, glorot_uniform(cfg.mlp_hidden, cfg.embed_dim, &mut rng))?;
                store.insert(PARAM_B2, Dense2D::zeros(1, cfg.embed_dim))?;
            }
            EncoderKind::Embedding => {
                store.insert(PARAM_EMBED, glorot_uniform(feature_dim, cfg.embed_dim, &mut rng))?;
            }
        }
        store.insert(PARAM_STRUCT, glorot_uniform(num_struct_nodes, cfg.embed_dim, &mut rng))?;
        store.insert(PARAM_CALIB, Dense2D::from_vec(1, 2, vec![4.0, 0.0])?)?;
        Ok(DealModel {
            cfg,
            feature_dim,
            num_struct_nodes,
            store,
        })
    }

    pub fn store(&self) -> &ParamStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut ParamStore {
        &mut self.store
    }

    /// Calibration scalars (a, c) of sigmoid(a * s + c).
    pub fn calibration(&self) -> (f64, f64) {
        let c = self.store.value(PARAM_CALIB);
        (c.at(0, 0), c.at(0, 1))
    }

    pub fn struct_embedding(&self, node: usize) -> &[f64] {
        self.store.value(PARAM_STRUCT).row(node)
    }

    fn forward_attr(&self, x: &Dense2D) -> Result<(Dense2D, AttrCache)> {
        if x.cols() != self.feature_dim {
            return Err(Error::shape(
                "encode_attr",
                format!("features have dim {}, encoder expects {}", x.cols(), self.feature_dim),
            ));
        }
        match self.cfg.encoder_kind {
            EncoderKind::Mlp => {
                let z1 = add_bias(&matmul(x, self.store.value(PARAM_W1))?, self.store.value(PARAM_B1))?;
                let h1 = relu(&z1);
                let emb = add_bias(&matmul(&h1, self.store.value(PARAM_W2))?, self.store.value(PARAM_B2))?;
                Ok((
                    emb,
                    AttrCache {
                        z1: Some(z1),
                        h1: Some(h1),
                    },
                ))
            }
            EncoderKind::Embedding => {
                let emb = matmul(x, self.store.value(PARAM_EMBED))?;
                Ok((emb, AttrCache { z1: None, h1: None }))
            }
        }
    }

    fn backward_attr(&mut self, x: &Dense2D, cache: &AttrCache, d_emb: &Dense2D) -> Result<()> {
        match self.cfg.encoder_kind {
            EncoderKind::Mlp => {
                let z1 = cache.z1.as_ref().unwrap();
                let h1 = cache.h1.as_ref().unwrap();
                let (d_out, d_b2) = add_bias_backward(d_emb);
                let w2 = self.store.value(PARAM_W2).clone();
                let (d_h1, d_w2) = matmul_backward(h1, &w2, &d_out)?;
                let d_z1 = relu_backward(z1, &d_h1);
                let (d_z1, d_b1) = add_bias_backward(&d_z1);
                let w1 = self.store.value(PARAM_W1).clone();
                let (_d_x, d_w1) = matmul_backward(x, &w1, &d_z1)?;
                self.store.accumulate_grad(PARAM_W1, &d_w1)?;
                self.store.accumulate_grad(PARAM_B1, &d_b1)?;
                self.store.accumulate_grad(PARAM_W2, &d_w2)?;
                self.store.accumulate_grad(PARAM_B2, &d_b2)?;
            }
            EncoderKind::Embedding => {
                let e = self.store.value(PARAM_EMBED).clone();
                let (_d_x, d_e) = matmul_backward(x, &e, d_emb)?;
                self.store.accumulate_grad(PARAM_EMBED, &d_e)?;
            }
        }
        Ok(())
    }

    /// Attribute embeddings, one row per node of `x`.
    pub fn encode_attr(&self, x: &FeatureMatrix) -> Result<Dense2D> {
        Ok(self.forward_attr(x.dense())?.0)
    }

    /// Combined pair score before calibration.
    fn raw_score(&self, emb_attr: &Dense2D, i: usize, j: usize, mode: ScoreMode) -> Result<f64> {
        let s_aa = cosine(emb_attr.row(i), emb_attr.row(j));
        match mode {
            ScoreMode::Inductive => Ok(self.cfg.w_attr * s_aa),
            ScoreMode::Full => {
                if i >= self.num_struct_nodes || j >= self.num_struct_nodes {
                    return Err(Error::invalid(format!(
                        "full scoring of ({i},{j}): node outside the structure table \
                         ({} rows)",
                        self.num_struct_nodes
                    )));
                }
                let table = self.store.value(PARAM_STRUCT);
                let s_cross = (cosine(emb_attr.row(i), table.row(j))
                    + cosine(table.row(i), emb_attr.row(j)))
                    / 2.0;
                Ok(self.cfg.w_attr * s_aa + self.cfg.w_cross * s_cross)
            }
        }
    }

    /// Calibrated link probability sigmoid(a * s + c), strictly inside (0,1).
    pub fn link_probability(
        &self,
        emb_attr: &Dense2D,
        i: usize,
        j: usize,
        mode: ScoreMode,
    ) -> Result<f64> {
        let (a, c) = self.calibration();
        let s = self.raw_score(emb_attr, i, j, mode)?;
        Ok(sigmoid_scalar(a * s + c))
    }

    pub fn score_pairs(
        &self,
        emb_attr: &Dense2D,
        pairs: &[(usize, usize)],
        mode: ScoreMode,
    ) -> Result<Vec<f64>> {
        pairs
            .iter()
            .map(|&(i, j)| self.link_probability(emb_attr, i, j, mode))
            .collect()
    }

    /// Full training loss with analytic gradients written into the store.
    ///
    /// L = lambda_aa R(s_aa) + lambda_ss R(s_ss) + lambda_align A + lambda_bce B,
    /// with pos/neg pairs matched 1:1 by index.
    pub fn deal_loss(
        &mut self,
        train_graph: &Graph,
        x: &FeatureMatrix,
        pos_pairs: &[(usize, usize)],
        neg_pairs: &[(usize, usize)],
    ) -> Result<f64> {
        if pos_pairs.is_empty() {
            return Err(Error::invalid("deal_loss: empty positive set"));
        }
        if pos_pairs.len() != neg_pairs.len() {
            return Err(Error::invalid(format!(
                "deal_loss: {} positives vs {} negatives (must pair 1:1)",
                pos_pairs.len(),
                neg_pairs.len()
            )));
        }
        let n = train_graph.num_nodes();
        if x.num_nodes() != n || n != self.num_struct_nodes {
            return Err(Error::shape(
                "deal_loss",
                format!(
                    "graph has {n} nodes, features {}, structure table {}",
                    x.num_nodes(),
                    self.num_struct_nodes
                ),
            ));
        }
        self.store.zero_grads();
        let (ha, cache) = self.forward_attr(x.dense())?;
        let hs = self.store.value(PARAM_STRUCT).clone();
        let (a, c) = self.calibration();
        let cfg = self.cfg.clone();

        let mut d_ha = Dense2D::zeros(ha.rows(), ha.cols());
        let mut d_hs = Dense2D::zeros(hs.rows(), hs.cols());
        let mut d_a = 0.0;
        let mut d_c = 0.0;
        let k = pos_pairs.len() as f64;
        let theta = cfg.theta_r;

        // ranking terms on attribute and structure scores
        let mut loss_aa = 0.0;
        let mut loss_ss = 0.0;
        for (&(pu, pv), &(nu, nv)) in pos_pairs.iter().zip(neg_pairs) {
            let sp_aa = cosine(ha.row(pu), ha.row(pv));
            let sn_aa = cosine(ha.row(nu), ha.row(nv));
            let m_aa = theta * (sp_aa - sn_aa);
            loss_aa += softplus_scalar(-m_aa) / k;
            let g = sigmoid_scalar(-m_aa) * theta / k; // -dL/dsp = dL/dsn
            let up_p = -g * cfg.lambda_aa;
            let up_n = g * cfg.lambda_aa;
            {
                let (ru, rv) = split_two_rows(&mut d_ha, pu, pv);
                cosine_grad_accum(ha.row(pu), ha.row(pv), up_p, ru, rv);
            }
            {
                let (ru, rv) = split_two_rows(&mut d_ha, nu, nv);
                cosine_grad_accum(ha.row(nu), ha.row(nv), up_n, ru, rv);
            }

            let sp_ss = cosine(hs.row(pu), hs.row(pv));
            let sn_ss = cosine(hs.row(nu), hs.row(nv));
            let m_ss = theta * (sp_ss - sn_ss);
            loss_ss += softplus_scalar(-m_ss) / k;
            let g = sigmoid_scalar(-m_ss) * theta / k;
            let up_p = -g * cfg.lambda_ss;
            let up_n = g * cfg.lambda_ss;
            {
                let (ru, rv) = split_two_rows(&mut d_hs, pu, pv);
                cosine_grad_accum(hs.row(pu), hs.row(pv), up_p, ru, rv);
            }
            {
                let (ru, rv) = split_two_rows(&mut d_hs, nu, nv);
                cosine_grad_accum(hs.row(nu), hs.row(nv), up_n, ru, rv);
            }
        }

        // tight alignment: mean over nodes of (1 - cos(ha_i, hs_i))
        let mut loss_align = 0.0;
        for i in 0..n {
            loss_align += (1.0 - cosine(ha.row(i), hs.row(i))) / n as f64;
            let up = -cfg.lambda_align / n as f64;
            cosine_grad_accum(ha.row(i), hs.row(i), up, d_ha.row_mut(i), d_hs.row_mut(i));
        }

        // calibrated BCE on the attribute score
        let m_bce = (pos_pairs.len() + neg_pairs.len()) as f64;
        let mut loss_bce = 0.0;
        for (pairs, y) in [(pos_pairs, 1.0f64), (neg_pairs, 0.0f64)] {
            for &(u, v) in pairs {
                let s_aa = cosine(ha.row(u), ha.row(v));
                let s = cfg.w_attr * s_aa;
                let logit = a * s + c;
                loss_bce += (softplus_scalar(logit) - y * logit) / m_bce;
                let d_logit = (sigmoid_scalar(logit) - y) / m_bce * cfg.lambda_bce;
                d_a += d_logit * s;
                d_c += d_logit;
                let up = d_logit * a * cfg.w_attr;
                let (ru, rv) = split_two_rows(&mut d_ha, u, v);
                cosine_grad_accum(ha.row(u), ha.row(v), up, ru, rv);
            }
        }

        let loss = cfg.lambda_aa * loss_aa
            + cfg.lambda_ss * loss_ss
            + cfg.lambda_align * loss_align
            + cfg.lambda_bce * loss_bce;

        self.backward_attr(x.dense(), &cache, &d_ha)?;
        self.store.accumulate_grad(PARAM_STRUCT, &d_hs)?;
        self.store
            .accumulate_grad(PARAM_CALIB, &Dense2D::from_vec(1, 2, vec![d_a, d_c])?)?;
        Ok(loss)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        nnkit::save_params(&self.store, &dir.join("model.bin"))?;
        let meta = DealModelMeta {
            cfg: self.cfg.clone(),
            feature_dim: self.feature_dim,
            num_struct_nodes: self.num_struct_nodes,
        };
        std::fs::write(dir.join("deal.json"), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<DealModel> {
        let meta: DealModelMeta =
            serde_json::from_str(&std::fs::read_to_string(dir.join("deal.json"))?)?;
        let store = nnkit::load_params(&dir.join("model.bin"))?;
        Ok(DealModel {
            cfg: meta.cfg,
            feature_dim: meta.feature_dim,
            num_struct_nodes: meta.num_struct_nodes,
            store,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct DealModelMeta {
    cfg: DealConfig,
    feature_dim: usize,
    num_struct_nodes: usize,
}

/// Two disjoint mutable row views of the same matrix (u != v).
fn split_two_rows(m: &mut Dense2D, u: usize, v: usize) -> (&mut [f64], &mut [f64]) {
    assert_ne!(u, v);
    let cols = m.cols();
    let (lo, hi) = (u.min(v), u.max(v));
    let (head, tail) = m.data_mut().split_at_mut(hi * cols);
    let row_lo = &mut head[lo * cols..(lo + 1) * cols];
    let row_hi = &mut tail[..cols];
    if u < v {
        (row_lo, row_hi)
    } else {
        (row_hi, row_lo)
    }
}

/// Per-epoch training record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub val_auc: Option<f64>,
}

/// Validation set scored inductively on the full feature matrix
/// (pairs in original node ids).
pub struct DealValSet<'a> {
    pub features_full: &'a FeatureMatrix,
    pub pos: &'a [(usize, usize)],
    pub neg: &'a [(usize, usize)],
}

/// Full-batch training: positives are all train edges, negatives resampled
/// 1:1 each epoch, Adam updates; returns the parameter snapshot with the
/// best validation ROC-AUC (final epoch when no validation set is given).
pub fn train_deal(
    g_train: &Graph,
    x_train: &FeatureMatrix,
    cfg: &DealConfig,
    val: Option<&DealValSet<'_>>,
) -> Result<(DealModel, Vec<EpochRecord>)> {
    if x_train.num_nodes() != g_train.num_nodes() {
        return Err(Error::shape(
            "train_deal",
            format!(
                "features cover {} nodes, graph has {}",
                x_train.num_nodes(),
                g_train.num_nodes()
            ),
        ));
    }
    let mut model = DealModel::new(cfg.clone(), x_train.dim(), g_train.num_nodes())?;
    let mut adam = Adam::new(cfg.lr);
    let pos = g_train.undirected_pairs();
    if pos.is_empty() {
        return Err(Error::invalid("train_deal: training graph has no edges"));
    }
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, ParamStore)> = None;
    for epoch in 0..cfg.epochs {
        let mut sampler = NegativeSampler::new(cfg.seed.wrapping_add(epoch as u64));
        let neg = sampler.sample(g_train, pos.len())?;
        let loss = model.deal_loss(g_train, x_train, &pos, &neg)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite(format!("deal loss at epoch {epoch}")));
        }
        adam.step(&mut model.store)?;
        let val_auc = match val {
            Some(v) if !v.pos.is_empty() && !v.neg.is_empty() => {
                let emb = model.encode_attr(v.features_full)?;
                let pos_scores = model.score_pairs(&emb, v.pos, ScoreMode::Inductive)?;
                let neg_scores = model.score_pairs(&emb, v.neg, ScoreMode::Inductive)?;
                let d = crate::evalkit::ScoredLabels::from_pos_neg(&pos_scores, &neg_scores)?;
                Some(crate::evalkit::roc_auc(&d)?)
            }
            _ => None,
        };
        if let Some(auc) = val_auc {
            if best.as_ref().map_or(true, |(b, _)| auc > *b) {
                best = Some((auc, model.store.clone()));
            }
        }
        history.push(EpochRecord {
            epoch,
            loss,
            val_auc,
        });
    }
    if let Some((_, store)) = best {
        model.store.copy_values_from(&store)?;
    }
    Ok((model, history))
}

/// Writes epoch, loss, val_auc columns.
pub fn save_history_csv(history: &[EpochRecord], path: &Path) -> Result<()> {
    use std::io::Write;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "epoch,loss,val_auc")?;
    for r in history {
        match r.val_auc {
            Some(auc) => writeln!(f, "{},{},{}", r.epoch, r.loss, auc)?,
            None => writeln!(f, "{},{},", r.epoch, r.loss)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nnkit::grad_check;
    use crate::sbm::{sbm_generate, SbmSpec};
    use rand::Rng;

    fn toy_features(n: usize, dim: usize, seed: u64) -> FeatureMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Dense2D::zeros(n, dim);
        x.data_mut().iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        FeatureMatrix::from_dense(x).unwrap()
    }

    fn small_cfg(kind: EncoderKind) -> DealConfig {
        DealConfig {
            encoder_kind: kind,
            embed_dim: 4,
            mlp_hidden: 5,
            epochs: 10,
            ..DealConfig::default()
        }
    }

    #[test]
    fn embedding_encoder_one_hot_selects_row() {
        let model = DealModel::new(small_cfg(EncoderKind::Embedding), 3, 2).unwrap();
        let mut x = Dense2D::zeros(3, 3);
        for i in 0..3 {
            *x.at_mut(i, i) = 1.0;
        }
        let emb = model.encode_attr(&FeatureMatrix::from_dense(x).unwrap()).unwrap();
        let e = model.store().value(PARAM_EMBED);
        for i in 0..3 {
            assert_eq!(emb.row(i), e.row(i));
        }
    }

    #[test]
    fn mlp_zero_weights_give_zero_embeddings() {
        let mut model = DealModel::new(small_cfg(EncoderKind::Mlp), 3, 2).unwrap();
        model.store_mut().value_mut(PARAM_W1).fill(0.0);
        model.store_mut().value_mut(PARAM_W2).fill(0.0);
        let emb = model.encode_attr(&toy_features(4, 3, 1)).unwrap();
        assert!(emb.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mlp_matches_straight_line_recomputation() {
        let model = DealModel::new(small_cfg(EncoderKind::Mlp), 3, 2).unwrap();
        let x = toy_features(5, 3, 2);
        let emb = model.encode_attr(&x).unwrap();
        let w1 = model.store().value(PARAM_W1);
        let b1 = model.store().value(PARAM_B1);
        let w2 = model.store().value(PARAM_W2);
        let b2 = model.store().value(PARAM_B2);
        for i in 0..5 {
            for o in 0..model.cfg.embed_dim {
                let mut acc = b2.at(0, o);
                for h in 0..model.cfg.mlp_hidden {
                    let mut z = b1.at(0, h);
                    for f in 0..3 {
                        z += x.row(i)[f] * w1.at(f, h);
                    }
                    acc += z.max(0.0) * w2.at(h, o);
                }
                assert!((emb.at(i, o) - acc).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn score_components_examples() {
        let c = score_components(&[1.0, 0.0], &[1.0, 0.0], None, None);
        assert!((c.s_aa - 1.0).abs() < 1e-15);
        assert!(c.s_ss.is_none() && c.s_cross.is_none());

        let c = score_components(&[1.0, 0.0], &[0.0, 1.0], Some(&[0.0, 0.0]), Some(&[0.0, 0.0]));
        assert_eq!(c.s_ss, Some(0.0)); // zero-norm convention

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let si: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sj: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = score_components(&a, &b, Some(&si), Some(&sj));
        let direct = |x: &[f64], y: &[f64]| {
            let d: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
            let nx: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let ny: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            d / (nx * ny)
        };
        assert!((c.s_aa - direct(&a, &b)).abs() < 1e-12);
        assert!((c.s_ss.unwrap() - direct(&si, &sj)).abs() < 1e-12);
        assert!((c.s_cross.unwrap() - (direct(&a, &sj) + direct(&si, &b)) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn link_probability_calibration() {
        // a = 4, c = 0 at init; identical embeddings give s_aa = 1
        let model = DealModel::new(small_cfg(EncoderKind::Embedding), 3, 2).unwrap();
        let emb = Dense2D::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let p_same = model.link_probability(&emb, 0, 1, ScoreMode::Inductive).unwrap();
        assert!((p_same - sigmoid_scalar(4.0)).abs() < 1e-12);
        let p_orth = model.link_probability(&emb, 0, 2, ScoreMode::Inductive).unwrap();
        assert!((p_orth - 0.5).abs() < 1e-12);
        // full mode on a node outside the structure table errors
        assert!(model.link_probability(&emb, 0, 2, ScoreMode::Full).is_err());
    }

    #[test]
    fn link_probability_monotone_in_score() {
        let (a, c) = (4.0, 0.0);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=20 {
            let s = -1.0 + 0.1 * i as f64;
            let p = sigmoid_scalar(a * s + c);
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn ranking_loss_symmetric_scores_give_log2() {
        let r = pairwise_ranking_loss(&[0.3, -0.2, 0.9], &[0.3, -0.2, 0.9], 10.0);
        assert!((r - (2.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn ranking_loss_shift_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pos: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let neg: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r1 = pairwise_ranking_loss(&pos, &neg, 7.0);
        let shifted_pos: Vec<f64> = pos.iter().map(|v| v + 3.7).collect();
        let shifted_neg: Vec<f64> = neg.iter().map(|v| v + 3.7).collect();
        let r2 = pairwise_ranking_loss(&shifted_pos, &shifted_neg, 7.0);
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn cosine_scale_invariance_of_attribute_score() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let scaled: Vec<f64> = a.iter().map(|v| v * 17.3).collect();
        assert!((cosine(&a, &b) - cosine(&scaled, &b)).abs() < 1e-12);
    }

    fn toy_graph_and_pairs() -> (Graph, Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let g = Graph::from_pairs(6, vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 2)]).unwrap();
        let pos = g.undirected_pairs();
        let neg = vec![(0, 3), (1, 4), (2, 5), (0, 5), (1, 3)];
        (g, pos, neg)
    }

    #[test]
    fn deal_loss_gradients_pass_grad_check_mlp_and_embedding() {
        for kind in [EncoderKind::Mlp, EncoderKind::Embedding] {
            let (g, pos, neg) = toy_graph_and_pairs();
            let x = toy_features(6, 3, 6);
            let mut model = DealModel::new(small_cfg(kind), 3, 6).unwrap();
            model.deal_loss(&g, &x, &pos, &neg).unwrap();
            // clone params into a scratch model the closure can evaluate
            let cfg = model.cfg.clone();
            let gq = g.clone();
            let xq = x.clone();
            let posq = pos.clone();
            let negq = neg.clone();
            let err = grad_check(
                move |store| {
                    let mut m = DealModel::new(cfg.clone(), 3, 6).unwrap();
                    m.store.copy_values_from(store).unwrap();
                    m.deal_loss(&gq, &xq, &posq, &negq)
                },
                &mut model.store,
                1e-5,
                0,
                0,
            )
            .unwrap();
            assert!(err < 1e-4, "{kind:?}: grad check rel err {err}");
        }
    }

    #[test]
    fn deal_loss_alignment_zero_when_encoders_agree() {
        // embedding encoder with identity features makes ha = E; copying E
        // into the structure table zeroes the alignment term
        let (g, pos, neg) = toy_graph_and_pairs();
        let mut x = Dense2D::zeros(6, 6);
        for i in 0..6 {
            *x.at_mut(i, i) = 1.0;
        }
        let x = FeatureMatrix::from_dense(x).unwrap();
        let mut cfg = small_cfg(EncoderKind::Embedding);
        cfg.lambda_aa = 0.0;
        cfg.lambda_ss = 0.0;
        cfg.lambda_bce = 0.0;
        cfg.lambda_align = 1.0;
        let mut model = DealModel::new(cfg, 6, 6).unwrap();
        let e = model.store().value(PARAM_EMBED).clone();
        *model.store_mut().value_mut(PARAM_STRUCT) = e;
        let loss = model.deal_loss(&g, &x, &pos, &neg).unwrap();
        assert!(loss.abs() < 1e-12, "alignment loss = {loss}");
    }

    #[test]
    fn deal_loss_rejects_bad_inputs() {
        let (g, pos, _) = toy_graph_and_pairs();
        let x = toy_features(6, 3, 7);
        let mut model = DealModel::new(small_cfg(EncoderKind::Mlp), 3, 6).unwrap();
        assert!(model.deal_loss(&g, &x, &[], &[]).is_err());
        assert!(model.deal_loss(&g, &x, &pos, &pos[..1]).is_err());
    }

    fn sbm_block_features(hide: bool) -> (Graph, FeatureMatrix) {
        let spec = SbmSpec {
            n: 20,
            k: 2,
            p_in: 0.8,
            p_out: 0.05,
            feature_dim: 2,
            feature_noise: 0.1,
            hide_frac: if hide { 0.3 } else { 0.0 },
            sparse_frac: if hide { 0.5 } else { 0.0 },
            seed: 11,
        };
        let (g, x, _) = sbm_generate(&spec).unwrap();
        (g, x)
    }

    #[test]
    fn training_descends_and_is_deterministic() {
        let (g, x) = sbm_block_features(false);
        let mut cfg = small_cfg(EncoderKind::Mlp);
        cfg.epochs = 40;
        cfg.lr = 5e-3;
        let (_, h1) = train_deal(&g, &x, &cfg, None).unwrap();
        let (_, h2) = train_deal(&g, &x, &cfg, None).unwrap();
        assert!(h1.last().unwrap().loss < h1.first().unwrap().loss);
        let l1: Vec<f64> = h1.iter().map(|r| r.loss).collect();
        let l2: Vec<f64> = h2.iter().map(|r| r.loss).collect();
        assert_eq!(l1, l2);
    }

    #[test]
    fn training_improves_alignment() {
        let (g, x) = sbm_block_features(false);
        let mut cfg = small_cfg(EncoderKind::Mlp);
        cfg.epochs = 60;
        let init = DealModel::new(cfg.clone(), x.dim(), g.num_nodes()).unwrap();
        let (trained, _) = train_deal(&g, &x, &cfg, None).unwrap();
        let mean_align = |m: &DealModel| {
            let ha = m.encode_attr(&x).unwrap();
            (0..g.num_nodes())
                .map(|i| cosine(ha.row(i), m.struct_embedding(i)))
                .sum::<f64>()
                / g.num_nodes() as f64
        };
        assert!(mean_align(&trained) > mean_align(&init));
    }

    #[test]
    fn held_out_nodes_score_above_090_auc_on_planted_blocks() {
        // planted 2-block structure with informative features: an inductive
        // encoder must separate held-out same-block from cross-block pairs
        let spec = SbmSpec {
            n: 30,
            k: 2,
            p_in: 0.7,
            p_out: 0.02,
            feature_dim: 2,
            feature_noise: 0.15,
            hide_frac: 0.0,
            sparse_frac: 0.0,
            seed: 21,
        };
        let (g, x, _) = sbm_generate(&spec).unwrap();
        let split = crate::splitkit::split_inductive(&g, 0.15, 0.15, 21).unwrap();
        let train_nodes: Vec<usize> = split.train_nodes.iter().copied().collect();
        let x_train = x.subset(&train_nodes);
        let mut cfg = small_cfg(EncoderKind::Mlp);
        cfg.epochs = 200;
        let (model, _) = train_deal(&split.train_graph, &x_train, &cfg, None).unwrap();
        let emb = model.encode_attr(&x).unwrap();
        let pos = model.score_pairs(&emb, &split.test_pos, ScoreMode::Inductive).unwrap();
        let neg = model.score_pairs(&emb, &split.test_neg, ScoreMode::Inductive).unwrap();
        let m = crate::evalkit::metrics_from_scores(&pos, &neg).unwrap();
        assert!(m.roc_auc > 0.9, "test AUC = {}", m.roc_auc);
    }

    #[test]
    fn model_save_load_round_trip() {
        let model = DealModel::new(small_cfg(EncoderKind::Mlp), 3, 4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        model.save(dir.path()).unwrap();
        let loaded = DealModel::load(dir.path()).unwrap();
        assert_eq!(loaded.feature_dim, 3);
        assert_eq!(loaded.num_struct_nodes, 4);
        let x = toy_features(4, 3, 8);
        assert_eq!(model.encode_attr(&x).unwrap(), loaded.encode_attr(&x).unwrap());
    }
}
