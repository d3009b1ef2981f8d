//! Transductive link predictors: GCN, mean-aggregator GraphSAGE, and GAT
//! layer stacks over a CSR graph, with a parameter-free dot-product decoder
//! trained by BCE against uniformly resampled negatives.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deal::EpochRecord;
use crate::evalkit::{self, Metrics};
use crate::graphstore::{FeatureMatrix, Graph};
use crate::nnkit::{
    self, glorot_uniform, matmul, matmul_backward, relu, relu_backward, sigmoid_scalar,
    softplus_scalar, Adam, Dense2D, ParamStore,
};
use crate::splitkit::{NegativeSampler, TransductiveSplit};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GnnKind {
    Gcn,
    Sage,
    Gat,
}

impl std::str::FromStr for GnnKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GnnKind> {
        match s {
            "gcn" => Ok(GnnKind::Gcn),
            "sage" => Ok(GnnKind::Sage),
            "gat" => Ok(GnnKind::Gat),
            other => Err(Error::invalid(format!("unknown gnn kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GnnConfig {
    pub kind: GnnKind,
    pub layers: usize,
    pub hidden_dim: usize,
    pub out_dim: usize,
    pub gat_heads: usize,
    pub leaky_slope: f64,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

impl Default for GnnConfig {
    fn default() -> Self {
        GnnConfig {
            kind: GnnKind::Gcn,
            layers: 2,
            hidden_dim: 128,
            out_dim: 64,
            gat_heads: 4,
            leaky_slope: 0.2,
            epochs: 200,
            lr: 1e-2,
            seed: 0,
        }
    }
}

impl GnnConfig {
    fn validate(&self) -> Result<()> {
        if self.layers == 0 || self.hidden_dim == 0 || self.out_dim == 0 || self.gat_heads == 0 {
            return Err(Error::invalid("gnn: layers, dims and heads must be >= 1"));
        }
        if self.kind == GnnKind::Gat && self.layers > 1 && self.hidden_dim % self.gat_heads != 0 {
            return Err(Error::invalid(format!(
                "gnn: hidden_dim {} must be divisible by gat_heads {}",
                self.hidden_dim, self.gat_heads
            )));
        }
        Ok(())
    }

    /// Input/output dim of each layer given the feature dim.
    fn layer_dims(&self, in_dim: usize) -> Vec<(usize, usize)> {
        let mut dims = Vec::with_capacity(self.layers);
        let mut d = in_dim;
        for l in 0..self.layers {
            let out = if l + 1 == self.layers { self.out_dim } else { self.hidden_dim };
            dims.push((d, out));
            d = out;
        }
        dims
    }
}

/// Symmetric-normalized aggregation with self-loops:
/// out_v = h_v / d~_v + sum_{u in N(v)} h_u / sqrt(d~_v d~_u), d~ = deg + 1.
pub fn gcn_aggregate(g: &Graph, h: &Dense2D) -> Result<Dense2D> {
    let n = g.num_nodes();
    if h.rows() != n {
        return Err(Error::shape("gcn_aggregate", format!("{} rows for {n} nodes", h.rows())));
    }
    let cols = h.cols();
    let mut out = Dense2D::zeros(n, cols);
    let dtil: Vec<f64> = (0..n).map(|v| (g.degree(v) + 1) as f64).collect();
    for v in 0..n {
        let self_coef = 1.0 / dtil[v];
        {
            let hv = h.row(v);
            let ov = out.row_mut(v);
            for c in 0..cols {
                ov[c] += self_coef * hv[c];
            }
        }
        for &u in g.neighbors(v) {
            let coef = 1.0 / (dtil[v] * dtil[u]).sqrt();
            let hu = h.row(u);
            let ov = out.row_mut(v);
            for c in 0..cols {
                ov[c] += coef * hu[c];
            }
        }
    }
    Ok(out)
}

/// Mean of neighbor rows; zero vector for zero-degree nodes.
pub fn neighbor_mean(g: &Graph, h: &Dense2D) -> Result<Dense2D> {
    let n = g.num_nodes();
    if h.rows() != n {
        return Err(Error::shape("neighbor_mean", format!("{} rows for {n} nodes", h.rows())));
    }
    let cols = h.cols();
    let mut out = Dense2D::zeros(n, cols);
    for v in 0..n {
        let deg = g.degree(v);
        if deg == 0 {
            continue;
        }
        let inv = 1.0 / deg as f64;
        for &u in g.neighbors(v) {
            let hu = h.row(u);
            let ov = out.row_mut(v);
            for c in 0..cols {
                ov[c] += inv * hu[c];
            }
        }
    }
    Ok(out)
}

/// Transpose of [`neighbor_mean`]: out_u = sum_{v in N(u)} h_v / deg(v).
fn neighbor_mean_transpose(g: &Graph, h: &Dense2D) -> Result<Dense2D> {
    let n = g.num_nodes();
    let cols = h.cols();
    let mut out = Dense2D::zeros(n, cols);
    for u in 0..n {
        for &v in g.neighbors(u) {
            let coef = 1.0 / g.degree(v) as f64;
            let hv = h.row(v);
            let ou = out.row_mut(u);
            for c in 0..cols {
                ou[c] += coef * hv[c];
            }
        }
    }
    Ok(out)
}

struct GatHeadCache {
    /// Projected features G = H W.
    g: Dense2D,
    /// Attention logits before leaky-relu, per node over its closed
    /// neighborhood [self, neighbors...].
    pre: Vec<Vec<f64>>,
    /// Softmax attention weights, same layout as `pre`.
    alpha: Vec<Vec<f64>>,
}

struct LayerCache {
    input: Dense2D,
    /// Pre-activation output (what relu sees on hidden layers).
    pre_act: Dense2D,
    /// GCN: aggregated input; SAGE: neighbor mean of the input.
    agg: Option<Dense2D>,
    gat: Vec<GatHeadCache>,
}

/// GNN encoder; the link decoder is the parameter-free dot product.
pub struct GnnModel {
    pub cfg: GnnConfig,
    pub in_dim: usize,
    store: ParamStore,
}

fn w_name(layer: usize) -> String {
    format!("layer{layer}.w")
}
fn w_self_name(layer: usize) -> String {
    format!("layer{layer}.w_self")
}
fn w_neigh_name(layer: usize) -> String {
    format!("layer{layer}.w_neigh")
}
fn gat_w_name(layer: usize, head: usize) -> String {
    format!("layer{layer}.h{head}.w")
}
fn gat_a_name(layer: usize, head: usize) -> String {
    format!("layer{layer}.h{head}.a")
}

impl GnnModel {
    pub fn new(cfg: GnnConfig, in_dim: usize) -> Result<GnnModel> {
        cfg.validate()?;
        if in_dim == 0 {
            return Err(Error::invalid("gnn: in_dim must be >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut store = ParamStore::new();
        for (l, (d_in, d_out)) in cfg.layer_dims(in_dim).into_iter().enumerate() {
            match cfg.kind {
                GnnKind::Gcn => {
                    store.insert(&w_name(l), glorot_uniform(d_in, d_out, &mut rng))?;
                }
                GnnKind::Sage => {
                    store.insert(&w_self_name(l), glorot_uniform(d_in, d_out, &mut rng))?;
                    store.insert(&w_neigh_name(l), glorot_uniform(d_in, d_out, &mut rng))?;
                }
                GnnKind::Gat => {
                    let last = l + 1 == cfg.layers;
                    let head_dim = if last { d_out } else { d_out / cfg.gat_heads };
                    for hd in 0..cfg.gat_heads {
                        store.insert(&gat_w_name(l, hd), glorot_uniform(d_in, head_dim, &mut rng))?;
                        store.insert(&gat_a_name(l, hd), glorot_uniform(2 * head_dim, 1, &mut rng))?;
                    }
                }
            }
        }
        Ok(GnnModel { cfg, in_dim, store })
    }

    pub fn store(&self) -> &ParamStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut ParamStore {
        &mut self.store
    }

    /// Node embeddings from message passing over `g`.
    pub fn forward(&self, g: &Graph, x: &Dense2D) -> Result<Dense2D> {
        Ok(self.forward_with_cache(g, x)?.0)
    }

    fn forward_with_cache(&self, g: &Graph, x: &Dense2D) -> Result<(Dense2D, Vec<LayerCache>)> {
        if x.rows() != g.num_nodes() {
            return Err(Error::shape(
                "gnn forward",
                format!("{} feature rows for {} nodes", x.rows(), g.num_nodes()),
            ));
        }
        if x.cols() != self.in_dim {
            return Err(Error::shape(
                "gnn forward",
                format!("feature dim {} but model expects {}", x.cols(), self.in_dim),
            ));
        }
        let mut h = x.clone();
        let mut caches = Vec::with_capacity(self.cfg.layers);
        for l in 0..self.cfg.layers {
            let last = l + 1 == self.cfg.layers;
            let input = h.clone();
            let (pre_act, agg, gat) = match self.cfg.kind {
                GnnKind::Gcn => {
                    let m = gcn_aggregate(g, &input)?;
                    let z = matmul(&m, self.store.value(&w_name(l)))?;
                    (z, Some(m), Vec::new())
                }
                GnnKind::Sage => {
                    let m = neighbor_mean(g, &input)?;
                    let mut z = matmul(&input, self.store.value(&w_self_name(l)))?;
                    z.add_assign(&matmul(&m, self.store.value(&w_neigh_name(l)))?)?;
                    (z, Some(m), Vec::new())
                }
                GnnKind::Gat => {
                    let mut heads = Vec::with_capacity(self.cfg.gat_heads);
                    let mut outs = Vec::with_capacity(self.cfg.gat_heads);
                    for hd in 0..self.cfg.gat_heads {
                        let w = self.store.value(&gat_w_name(l, hd));
                        let a = self.store.value(&gat_a_name(l, hd));
                        let (out, cache) = gat_head_forward(g, &input, w, a, self.cfg.leaky_slope)?;
                        outs.push(out);
                        heads.push(cache);
                    }
                    let z = if last {
                        // average heads
                        let mut z = outs[0].clone();
                        for o in &outs[1..] {
                            z.add_assign(o)?;
                        }
                        z.scale(1.0 / outs.len() as f64);
                        z
                    } else {
                        // concatenate heads
                        let dh = outs[0].cols();
                        let mut z = Dense2D::zeros(input.rows(), dh * outs.len());
                        for (hd, o) in outs.iter().enumerate() {
                            for r in 0..o.rows() {
                                z.row_mut(r)[hd * dh..(hd + 1) * dh].copy_from_slice(o.row(r));
                            }
                        }
                        z
                    };
                    (z, None, heads)
                }
            };
            h = if last { pre_act.clone() } else { relu(&pre_act) };
            caches.push(LayerCache {
                input,
                pre_act,
                agg,
                gat,
            });
        }
        Ok((h, caches))
    }

    /// Backpropagates d(loss)/d(embeddings), accumulating parameter
    /// gradients into the store.
    fn backward(&mut self, g: &Graph, caches: &[LayerCache], d_out: Dense2D) -> Result<()> {
        let mut d = d_out;
        for l in (0..self.cfg.layers).rev() {
            let last = l + 1 == self.cfg.layers;
            let cache = &caches[l];
            if !last {
                d = relu_backward(&cache.pre_act, &d);
            }
            d = match self.cfg.kind {
                GnnKind::Gcn => {
                    let w = self.store.value(&w_name(l)).clone();
                    let m = cache.agg.as_ref().unwrap();
                    let (d_m, d_w) = matmul_backward(m, &w, &d)?;
                    self.store.accumulate_grad(&w_name(l), &d_w)?;
                    // symmetric operator: transpose application is itself
                    gcn_aggregate(g, &d_m)?
                }
                GnnKind::Sage => {
                    let ws = self.store.value(&w_self_name(l)).clone();
                    let wn = self.store.value(&w_neigh_name(l)).clone();
                    let m = cache.agg.as_ref().unwrap();
                    let (d_h_self, d_ws) = matmul_backward(&cache.input, &ws, &d)?;
                    let (d_m, d_wn) = matmul_backward(m, &wn, &d)?;
                    self.store.accumulate_grad(&w_self_name(l), &d_ws)?;
                    self.store.accumulate_grad(&w_neigh_name(l), &d_wn)?;
                    let mut d_h = d_h_self;
                    d_h.add_assign(&neighbor_mean_transpose(g, &d_m)?)?;
                    d_h
                }
                GnnKind::Gat => {
                    let heads = self.cfg.gat_heads;
                    let mut d_input = Dense2D::zeros(cache.input.rows(), cache.input.cols());
                    for hd in 0..heads {
                        let head_cache = &cache.gat[hd];
                        let dh = head_cache.g.cols();
                        // slice this head's share of the upstream gradient
                        let mut d_head = Dense2D::zeros(d.rows(), dh);
                        if last {
                            for r in 0..d.rows() {
                                for c in 0..dh {
                                    *d_head.at_mut(r, c) = d.at(r, c) / heads as f64;
                                }
                            }
                        } else {
                            for r in 0..d.rows() {
                                d_head
                                    .row_mut(r)
                                    .copy_from_slice(&d.row(r)[hd * dh..(hd + 1) * dh]);
                            }
                        }
                        let w = self.store.value(&gat_w_name(l, hd)).clone();
                        let a = self.store.value(&gat_a_name(l, hd)).clone();
                        let (d_h, d_w, d_a) = gat_head_backward(
                            g,
                            &cache.input,
                            &w,
                            &a,
                            self.cfg.leaky_slope,
                            head_cache,
                            &d_head,
                        )?;
                        self.store.accumulate_grad(&gat_w_name(l, hd), &d_w)?;
                        self.store.accumulate_grad(&gat_a_name(l, hd), &d_a)?;
                        d_input.add_assign(&d_h)?;
                    }
                    d_input
                }
            };
        }
        Ok(())
    }

    /// BCE loss over labeled pairs of node embeddings, with gradients
    /// accumulated into the store (grads are zeroed first).
    pub fn bce_loss_and_grad(
        &mut self,
        g: &Graph,
        x: &Dense2D,
        pos: &[(usize, usize)],
        neg: &[(usize, usize)],
    ) -> Result<f64> {
        if pos.is_empty() {
            return Err(Error::invalid("bce loss: empty positive set"));
        }
        self.store.zero_grads();
        let (z, caches) = self.forward_with_cache(g, x)?;
        let m = (pos.len() + neg.len()) as f64;
        let mut loss = 0.0;
        let mut d_z = Dense2D::zeros(z.rows(), z.cols());
        for (pairs, y) in [(pos, 1.0f64), (neg, 0.0f64)] {
            for &(i, j) in pairs {
                let logit: f64 = z.row(i).iter().zip(z.row(j)).map(|(a, b)| a * b).sum();
                loss += (softplus_scalar(logit) - y * logit) / m;
                let d = (sigmoid_scalar(logit) - y) / m;
                for c in 0..z.cols() {
                    *d_z.at_mut(i, c) += d * z.at(j, c);
                    *d_z.at_mut(j, c) += d * z.at(i, c);
                }
            }
        }
        self.backward(g, &caches, d_z)?;
        Ok(loss)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        nnkit::save_params(&self.store, &dir.join("model.bin"))?;
        let meta = GnnModelMeta {
            cfg: self.cfg.clone(),
            in_dim: self.in_dim,
        };
        std::fs::write(dir.join("gnn.json"), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<GnnModel> {
        let meta: GnnModelMeta =
            serde_json::from_str(&std::fs::read_to_string(dir.join("gnn.json"))?)?;
        let store = nnkit::load_params(&dir.join("model.bin"))?;
        Ok(GnnModel {
            cfg: meta.cfg,
            in_dim: meta.in_dim,
            store,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GnnModelMeta {
    cfg: GnnConfig,
    in_dim: usize,
}

fn gat_head_forward(
    g: &Graph,
    h: &Dense2D,
    w: &Dense2D,
    a: &Dense2D,
    slope: f64,
) -> Result<(Dense2D, GatHeadCache)> {
    let n = g.num_nodes();
    let proj = matmul(h, w)?;
    let dh = proj.cols();
    if a.rows() != 2 * dh || a.cols() != 1 {
        return Err(Error::shape(
            "gat attention",
            format!("attention vector {}x{} for head dim {dh}", a.rows(), a.cols()),
        ));
    }
    let a_src: Vec<f64> = (0..dh).map(|i| a.at(i, 0)).collect();
    let a_dst: Vec<f64> = (0..dh).map(|i| a.at(dh + i, 0)).collect();
    let s: Vec<f64> = (0..n)
        .map(|i| proj.row(i).iter().zip(&a_src).map(|(x, y)| x * y).sum())
        .collect();
    let t: Vec<f64> = (0..n)
        .map(|i| proj.row(i).iter().zip(&a_dst).map(|(x, y)| x * y).sum())
        .collect();
    let mut pre = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    let mut out = Dense2D::zeros(n, dh);
    for i in 0..n {
        // closed neighborhood: self first, then neighbors ascending
        let mut pre_i = Vec::with_capacity(1 + g.degree(i));
        pre_i.push(s[i] + t[i]);
        for &j in g.neighbors(i) {
            pre_i.push(s[i] + t[j]);
        }
        let logits: Vec<f64> = pre_i
            .iter()
            .map(|&e| if e < 0.0 { slope * e } else { e })
            .collect();
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|&e| (e - max).exp()).collect();
        let sum: f64 = exps.iter().sum();
        let alpha_i: Vec<f64> = exps.iter().map(|&e| e / sum).collect();
        {
            let oi = out.row_mut(i);
            let mut add = |coef: f64, row: &[f64]| {
                for c in 0..dh {
                    oi[c] += coef * row[c];
                }
            };
            add(alpha_i[0], proj.row(i));
            for (idx, &j) in g.neighbors(i).iter().enumerate() {
                add(alpha_i[idx + 1], proj.row(j));
            }
        }
        pre.push(pre_i);
        alpha.push(alpha_i);
    }
    Ok((
        out,
        GatHeadCache {
            g: proj,
            pre,
            alpha,
        },
    ))
}

fn gat_head_backward(
    g: &Graph,
    h: &Dense2D,
    w: &Dense2D,
    a: &Dense2D,
    slope: f64,
    cache: &GatHeadCache,
    d_out: &Dense2D,
) -> Result<(Dense2D, Dense2D, Dense2D)> {
    let n = g.num_nodes();
    let dh = cache.g.cols();
    let a_src: Vec<f64> = (0..dh).map(|i| a.at(i, 0)).collect();
    let a_dst: Vec<f64> = (0..dh).map(|i| a.at(dh + i, 0)).collect();
    let mut d_g = Dense2D::zeros(n, dh);
    let mut d_s = vec![0.0f64; n];
    let mut d_t = vec![0.0f64; n];
    for i in 0..n {
        let nb: Vec<usize> = std::iter::once(i).chain(g.neighbors(i).iter().copied()).collect();
        let alpha = &cache.alpha[i];
        let pre = &cache.pre[i];
        let d_i = d_out.row(i);
        // d(alpha_idx) = d_out_i . g_j ; aggregate d_g[j] += alpha * d_out_i
        let mut d_alpha = Vec::with_capacity(nb.len());
        for (idx, &j) in nb.iter().enumerate() {
            let gj = cache.g.row(j);
            d_alpha.push(d_i.iter().zip(gj).map(|(x, y)| x * y).sum::<f64>());
            let gr = d_g.row_mut(j);
            for c in 0..dh {
                gr[c] += alpha[idx] * d_i[c];
            }
        }
        // softmax backward over the closed neighborhood
        let common: f64 = alpha.iter().zip(&d_alpha).map(|(x, y)| x * y).sum();
        for (idx, &j) in nb.iter().enumerate() {
            let d_e = alpha[idx] * (d_alpha[idx] - common);
            let d_pre = if pre[idx] <= 0.0 { d_e * slope } else { d_e };
            d_s[i] += d_pre;
            d_t[j] += d_pre;
        }
    }
    // s_i = a_src . g_i, t_j = a_dst . g_j
    let mut d_a = Dense2D::zeros(2 * dh, 1);
    for i in 0..n {
        let gi = cache.g.row(i);
        let gr = d_g.row_mut(i);
        for c in 0..dh {
            gr[c] += d_s[i] * a_src[c] + d_t[i] * a_dst[c];
            *d_a.at_mut(c, 0) += d_s[i] * gi[c];
            *d_a.at_mut(dh + c, 0) += d_t[i] * gi[c];
        }
    }
    let (d_h, d_w) = matmul_backward(h, w, &d_g)?;
    Ok((d_h, d_w, d_a))
}

/// Dot-product decoder: sigmoid(z_i . z_j).
pub fn decode_link(z: &Dense2D, i: usize, j: usize) -> f64 {
    sigmoid_scalar(z.row(i).iter().zip(z.row(j)).map(|(a, b)| a * b).sum())
}

pub fn decode_pairs(z: &Dense2D, pairs: &[(usize, usize)]) -> Vec<f64> {
    pairs.iter().map(|&(i, j)| decode_link(z, i, j)).collect()
}

/// Full-batch training on the split's train graph; negatives resampled 1:1
/// each epoch from the non-edges of the full graph; returns the snapshot
/// with the best validation ROC-AUC.
pub fn train_gnn(
    split: &TransductiveSplit,
    x: &FeatureMatrix,
    cfg: &GnnConfig,
) -> Result<(GnnModel, Vec<EpochRecord>)> {
    let g = &split.train_graph;
    if x.num_nodes() != g.num_nodes() {
        return Err(Error::shape(
            "train_gnn",
            format!("features cover {} nodes, graph has {}", x.num_nodes(), g.num_nodes()),
        ));
    }
    let mut model = GnnModel::new(cfg.clone(), x.dim())?;
    let mut adam = Adam::new(cfg.lr);
    // training negatives must avoid every edge of the full graph
    let full_pairs: Vec<(usize, usize)> = split
        .train_pos
        .iter()
        .chain(&split.val_pos)
        .chain(&split.test_pos)
        .copied()
        .collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, ParamStore)> = None;
    for epoch in 0..cfg.epochs {
        let mut sampler = NegativeSampler::new(cfg.seed.wrapping_add(epoch as u64));
        sampler.exclude_pairs(full_pairs.iter().copied());
        let neg = sampler.sample(g, split.train_pos.len())?;
        let loss = model.bce_loss_and_grad(g, x.dense(), &split.train_pos, &neg)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite(format!("gnn loss at epoch {epoch}")));
        }
        adam.step(&mut model.store)?;
        let val_auc = if split.val_pos.is_empty() || split.val_neg.is_empty() {
            None
        } else {
            let z = model.forward(g, x.dense())?;
            let pos_scores = decode_pairs(&z, &split.val_pos);
            let neg_scores = decode_pairs(&z, &split.val_neg);
            let d = evalkit::ScoredLabels::from_pos_neg(&pos_scores, &neg_scores)?;
            Some(evalkit::roc_auc(&d)?)
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

/// Metrics of the decoder over explicit positive/negative pairs, with
/// message passing over `g_msg`.
pub fn evaluate(
    model: &GnnModel,
    g_msg: &Graph,
    x: &FeatureMatrix,
    pos: &[(usize, usize)],
    neg: &[(usize, usize)],
) -> Result<Metrics> {
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::invalid("evaluate: empty evaluation set"));
    }
    let z = model.forward(g_msg, x.dense())?;
    evalkit::metrics_from_scores(&decode_pairs(&z, pos), &decode_pairs(&z, neg))
}
