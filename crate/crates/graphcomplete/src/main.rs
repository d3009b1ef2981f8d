//! Command-line pipeline driver: synthetic data generation, splitting,
//! inductive training, enrichment, transductive training, evaluation, and
//! hyperparameter search.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use graphcomplete::deal::{
    save_history_csv, train_deal, DealConfig, DealModel, DealValSet, EncoderKind, ScoreMode,
};
use graphcomplete::enrich::{enrich_graph, enrich_report_json, enrich_report_text, EnrichConfig};
use graphcomplete::evalkit::{metrics_from_scores, Metrics};
use graphcomplete::gnn::{evaluate as gnn_evaluate, train_gnn, GnnConfig, GnnModel};
use graphcomplete::graphstore::{
    load_features, load_graph, save_pairs, stats, FeatureFormat, FeatureMatrix,
};
use graphcomplete::sbm::{sbm_generate, SbmSpec};
use graphcomplete::search::{
    save_trials_csv, search_deal, search_gnn, DealSearchSpace, GnnSearchSpace,
};
use graphcomplete::splitkit::{
    load_split_dir, save_inductive_split, save_transductive_split, split_inductive,
    split_transductive, InductiveSplit,
};
use graphcomplete::{Error, Result};

#[derive(Parser)]
#[command(name = "graphcomplete", version, about = "Link prediction and graph enrichment pipeline")]
struct Cli {
    /// Flat JSON config with dotted keys (e.g. "deal.lr"); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print graph summary statistics.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        num_nodes: usize,
        /// Also write report.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic stochastic-block-model dataset.
    Sbm {
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 0.15)]
        p_in: f64,
        #[arg(long, default_value_t = 0.01)]
        p_out: f64,
        #[arg(long, default_value_t = 8)]
        feature_dim: usize,
        #[arg(long, default_value_t = 0.3)]
        feature_noise: f64,
        #[arg(long, default_value_t = 0.7)]
        hide_frac: f64,
        #[arg(long, default_value_t = 0.3)]
        sparse_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a graph for training and evaluation.
    Split {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        num_nodes: usize,
        /// "inductive" (node basis) or "transductive" (edge basis).
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = 0.1)]
        val_frac: f64,
        #[arg(long, default_value_t = 0.1)]
        test_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the inductive dual-encoder model on an inductive split.
    TrainInductive {
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        feature_dim: Option<usize>,
        #[arg(long, default_value = "csv")]
        features_format: String,
        #[arg(long)]
        encoder: Option<String>,
        #[arg(long)]
        embed_dim: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Add high-confidence predicted edges to a graph.
    Enrich {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        num_nodes: usize,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        feature_dim: Option<usize>,
        #[arg(long, default_value = "csv")]
        features_format: String,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        c_max: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a transductive GNN link predictor on a transductive split.
    TrainTransductive {
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        feature_dim: Option<usize>,
        #[arg(long, default_value = "csv")]
        features_format: String,
        /// "gcn", "sage" or "gat".
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        hidden_dim: Option<usize>,
        #[arg(long)]
        out_dim: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a saved model on a split's test pairs.
    Evaluate {
        /// "deal" or "gnn".
        #[arg(long)]
        model_kind: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        feature_dim: Option<usize>,
        #[arg(long, default_value = "csv")]
        features_format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random hyperparameter search.
    Search {
        /// "deal" or "gnn".
        #[arg(long)]
        target: String,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        feature_dim: Option<usize>,
        #[arg(long, default_value = "csv")]
        features_format: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Flat dotted-key JSON config.
struct Config(serde_json::Map<String, serde_json::Value>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        let map = match path {
            None => serde_json::Map::new(),
            Some(p) => {
                let value: serde_json::Value =
                    serde_json::from_str(&std::fs::read_to_string(p)?)?;
                match value {
                    serde_json::Value::Object(map) => map,
                    _ => {
                        return Err(Error::invalid(format!(
                            "{}: config must be a JSON object",
                            p.display()
                        )))
                    }
                }
            }
        };
        Ok(Config(map))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| Error::invalid(format!("config key '{key}' is not a number"))),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|x| Some(x as usize))
                .ok_or_else(|| Error::invalid(format!("config key '{key}' is not an integer"))),
        }
    }

    fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| Error::invalid(format!("config key '{key}' is not an integer"))),
        }
    }

    fn str(&self, key: &str) -> Result<Option<&str>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| Error::invalid(format!("config key '{key}' is not a string"))),
        }
    }

    fn deal_config(&self) -> Result<DealConfig> {
        let mut cfg = DealConfig::default();
        if let Some(kind) = self.str("deal.encoder")? {
            cfg.encoder_kind = parse_encoder(kind)?;
        }
        if let Some(v) = self.usize("deal.embed_dim")? {
            cfg.embed_dim = v;
        }
        if let Some(v) = self.usize("deal.mlp_hidden")? {
            cfg.mlp_hidden = v;
        }
        if let Some(v) = self.f64("deal.lambda_aa")? {
            cfg.lambda_aa = v;
        }
        if let Some(v) = self.f64("deal.lambda_ss")? {
            cfg.lambda_ss = v;
        }
        if let Some(v) = self.f64("deal.lambda_align")? {
            cfg.lambda_align = v;
        }
        if let Some(v) = self.f64("deal.lambda_bce")? {
            cfg.lambda_bce = v;
        }
        if let Some(v) = self.f64("deal.theta_r")? {
            cfg.theta_r = v;
        }
        if let Some(v) = self.usize("deal.epochs")? {
            cfg.epochs = v;
        }
        if let Some(v) = self.f64("deal.lr")? {
            cfg.lr = v;
        }
        if let Some(v) = self.u64("deal.seed")? {
            cfg.seed = v;
        }
        if let Some(v) = self.f64("deal.w_attr")? {
            cfg.w_attr = v;
        }
        if let Some(v) = self.f64("deal.w_cross")? {
            cfg.w_cross = v;
        }
        Ok(cfg)
    }

    fn gnn_config(&self) -> Result<GnnConfig> {
        let mut cfg = GnnConfig::default();
        if let Some(kind) = self.str("gnn.kind")? {
            cfg.kind = kind.parse()?;
        }
        if let Some(v) = self.usize("gnn.layers")? {
            cfg.layers = v;
        }
        if let Some(v) = self.usize("gnn.hidden_dim")? {
            cfg.hidden_dim = v;
        }
        if let Some(v) = self.usize("gnn.out_dim")? {
            cfg.out_dim = v;
        }
        if let Some(v) = self.usize("gnn.gat_heads")? {
            cfg.gat_heads = v;
        }
        if let Some(v) = self.f64("gnn.leaky_slope")? {
            cfg.leaky_slope = v;
        }
        if let Some(v) = self.usize("gnn.epochs")? {
            cfg.epochs = v;
        }
        if let Some(v) = self.f64("gnn.lr")? {
            cfg.lr = v;
        }
        if let Some(v) = self.u64("gnn.seed")? {
            cfg.seed = v;
        }
        Ok(cfg)
    }

    fn enrich_config(&self) -> Result<EnrichConfig> {
        let mut cfg = EnrichConfig::default();
        if let Some(v) = self.usize("enrich.d_max")? {
            cfg.d_max = v;
        }
        if let Some(v) = self.f64("enrich.p_min")? {
            cfg.p_min = v;
        }
        if let Some(v) = self.usize("enrich.c_max")? {
            cfg.c_max = Some(v);
        }
        if let Some(v) = self.usize("enrich.candidate_block")? {
            cfg.candidate_block = v;
        }
        Ok(cfg)
    }
}

fn parse_encoder(s: &str) -> Result<EncoderKind> {
    match s {
        "mlp" => Ok(EncoderKind::Mlp),
        "embedding" => Ok(EncoderKind::Embedding),
        other => Err(Error::invalid(format!("unknown encoder '{other}'"))),
    }
}

fn parse_feature_format(s: &str) -> Result<FeatureFormat> {
    match s {
        "csv" => Ok(FeatureFormat::Csv),
        "f32" => Ok(FeatureFormat::F32Binary),
        other => Err(Error::invalid(format!(
            "unknown feature format '{other}' (expected 'csv' or 'f32')"
        ))),
    }
}

/// Loads features; for CSV, the dim is inferred from the first data row
/// when not given explicitly.
fn load_features_auto(
    path: &Path,
    num_nodes: usize,
    dim: Option<usize>,
    format: FeatureFormat,
) -> Result<FeatureMatrix> {
    let dim = match (dim, format) {
        (Some(d), _) => d,
        (None, FeatureFormat::Csv) => {
            let text = std::fs::read_to_string(path)?;
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'))
                .ok_or_else(|| Error::invalid(format!("{}: no data rows", path.display())))?;
            first
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .count()
        }
        (None, FeatureFormat::F32Binary) => {
            return Err(Error::invalid(
                "--feature-dim is required for binary features",
            ))
        }
    };
    load_features(path, num_nodes, dim, format)
}

fn write_metrics(path: &Path, metrics: &serde_json::Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(metrics)?)?;
    Ok(())
}

/// Inductive-model metrics on pairs in original node ids.
fn deal_metrics(
    model: &DealModel,
    x_full: &FeatureMatrix,
    pos: &[(usize, usize)],
    neg: &[(usize, usize)],
) -> Result<Metrics> {
    let emb = model.encode_attr(x_full)?;
    let pos_scores = model.score_pairs(&emb, pos, ScoreMode::Inductive)?;
    let neg_scores = model.score_pairs(&emb, neg, ScoreMode::Inductive)?;
    metrics_from_scores(&pos_scores, &neg_scores)
}

fn train_features(split: &InductiveSplit, x_full: &FeatureMatrix) -> FeatureMatrix {
    let order: Vec<usize> = split.train_nodes.iter().copied().collect();
    x_full.subset(&order)
}

fn run(cli: Cli) -> Result<()> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Stats { graph, num_nodes, out } => {
            let g = load_graph(&graph, num_nodes)?;
            let s = stats(&g);
            println!("{s}");
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&s)?)?;
            }
        }
        Command::Sbm {
            n,
            k,
            p_in,
            p_out,
            feature_dim,
            feature_noise,
            hide_frac,
            sparse_frac,
            seed,
            out,
        } => {
            let spec = SbmSpec {
                n,
                k,
                p_in,
                p_out,
                feature_dim,
                feature_noise,
                hide_frac,
                sparse_frac,
                seed,
            };
            let (g, x, hidden) = sbm_generate(&spec)?;
            std::fs::create_dir_all(&out)?;
            g.save(&out.join("edges.csv"))?;
            x.save_csv(&out.join("features.csv"))?;
            save_pairs(&hidden, &out.join("hidden_edges.csv"))?;
            std::fs::write(out.join("spec.json"), serde_json::to_string_pretty(&spec)?)?;
            println!("{}", stats(&g));
        }
        Command::Split {
            graph,
            num_nodes,
            mode,
            val_frac,
            test_frac,
            seed,
            out,
        } => {
            let g = load_graph(&graph, num_nodes)?;
            match mode.as_str() {
                "inductive" => {
                    let split = split_inductive(&g, val_frac, test_frac, seed)?;
                    save_inductive_split(&split, &g, val_frac, test_frac, seed, &out)?;
                }
                "transductive" => {
                    let split = split_transductive(&g, val_frac, test_frac, seed)?;
                    save_transductive_split(&split, val_frac, test_frac, seed, &out)?;
                }
                other => return Err(Error::invalid(format!("unknown split mode '{other}'"))),
            }
        }
        Command::TrainInductive {
            split,
            features,
            feature_dim,
            features_format,
            encoder,
            embed_dim,
            epochs,
            lr,
            seed,
            out,
        } => {
            let loaded = load_split_dir(&split)?;
            let ind = loaded.to_inductive()?;
            let format = parse_feature_format(&features_format)?;
            let x_full =
                load_features_auto(&features, loaded.manifest.num_nodes, feature_dim, format)?;
            let mut cfg = config.deal_config()?;
            if let Some(e) = encoder {
                cfg.encoder_kind = parse_encoder(&e)?;
            }
            if let Some(v) = embed_dim {
                cfg.embed_dim = v;
            }
            if let Some(v) = epochs {
                cfg.epochs = v;
            }
            if let Some(v) = lr {
                cfg.lr = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            let x_train = train_features(&ind, &x_full);
            let val = DealValSet {
                features_full: &x_full,
                pos: &ind.val_pos,
                neg: &ind.val_neg,
            };
            let (model, history) = train_deal(&ind.train_graph, &x_train, &cfg, Some(&val))?;
            std::fs::create_dir_all(&out)?;
            model.save(&out)?;
            save_history_csv(&history, &out.join("history.csv"))?;
            let val_m = deal_metrics(&model, &x_full, &ind.val_pos, &ind.val_neg)?;
            let test_m = deal_metrics(&model, &x_full, &ind.test_pos, &ind.test_neg)?;
            let summary = serde_json::json!({ "val": val_m, "test": test_m });
            write_metrics(&out.join("metrics.json"), &summary)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Enrich {
            model,
            graph,
            num_nodes,
            features,
            feature_dim,
            features_format,
            d_max,
            p_min,
            c_max,
            out,
        } => {
            let g = load_graph(&graph, num_nodes)?;
            let format = parse_feature_format(&features_format)?;
            let x = load_features_auto(&features, num_nodes, feature_dim, format)?;
            let m = DealModel::load(&model)?;
            let mut cfg = config.enrich_config()?;
            if let Some(v) = d_max {
                cfg.d_max = v;
            }
            if let Some(v) = p_min {
                cfg.p_min = v;
            }
            if let Some(v) = c_max {
                cfg.c_max = Some(v);
            }
            let (enriched, added, report) = enrich_graph(&g, &m, &x, &cfg)?;
            std::fs::create_dir_all(&out)?;
            enriched.save(&out.join("enriched_edges.csv"))?;
            save_pairs(&added, &out.join("added_edges.csv"))?;
            std::fs::write(out.join("report.json"), enrich_report_json(&report)?)?;
            println!("{}", enrich_report_text(&report));
        }
        Command::TrainTransductive {
            split,
            features,
            feature_dim,
            features_format,
            kind,
            hidden_dim,
            out_dim,
            epochs,
            lr,
            seed,
            out,
        } => {
            let loaded = load_split_dir(&split)?;
            let tr = loaded.to_transductive()?;
            let format = parse_feature_format(&features_format)?;
            let x = load_features_auto(&features, loaded.manifest.num_nodes, feature_dim, format)?;
            let mut cfg = config.gnn_config()?;
            if let Some(k) = kind {
                cfg.kind = k.parse()?;
            }
            if let Some(v) = hidden_dim {
                cfg.hidden_dim = v;
            }
            if let Some(v) = out_dim {
                cfg.out_dim = v;
            }
            if let Some(v) = epochs {
                cfg.epochs = v;
            }
            if let Some(v) = lr {
                cfg.lr = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            let (model, history) = train_gnn(&tr, &x, &cfg)?;
            std::fs::create_dir_all(&out)?;
            model.save(&out)?;
            save_history_csv(&history, &out.join("history.csv"))?;
            let val_m = gnn_evaluate(&model, &tr.train_graph, &x, &tr.val_pos, &tr.val_neg)?;
            let test_m = gnn_evaluate(&model, &tr.train_graph, &x, &tr.test_pos, &tr.test_neg)?;
            let summary = serde_json::json!({ "val": val_m, "test": test_m });
            write_metrics(&out.join("metrics.json"), &summary)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Evaluate {
            model_kind,
            model,
            split,
            features,
            feature_dim,
            features_format,
            out,
        } => {
            let loaded = load_split_dir(&split)?;
            let format = parse_feature_format(&features_format)?;
            let x = load_features_auto(&features, loaded.manifest.num_nodes, feature_dim, format)?;
            let test_m = match model_kind.as_str() {
                "deal" => {
                    let m = DealModel::load(&model)?;
                    deal_metrics(&m, &x, &loaded.test_pos, &loaded.test_neg)?
                }
                "gnn" => {
                    let tr = loaded.to_transductive()?;
                    let m = GnnModel::load(&model)?;
                    gnn_evaluate(&m, &tr.train_graph, &x, &tr.test_pos, &tr.test_neg)?
                }
                other => return Err(Error::invalid(format!("unknown model kind '{other}'"))),
            };
            let summary = serde_json::json!({ "test": test_m });
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                write_metrics(&dir.join("metrics.json"), &summary)?;
            }
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Search {
            target,
            split,
            features,
            feature_dim,
            features_format,
            trials,
            seed,
            out,
        } => {
            let loaded = load_split_dir(&split)?;
            let format = parse_feature_format(&features_format)?;
            let x = load_features_auto(&features, loaded.manifest.num_nodes, feature_dim, format)?;
            std::fs::create_dir_all(&out)?;
            match target.as_str() {
                "deal" => {
                    let ind = loaded.to_inductive()?;
                    let x_train = train_features(&ind, &x);
                    let val = DealValSet {
                        features_full: &x,
                        pos: &ind.val_pos,
                        neg: &ind.val_neg,
                    };
                    let base = config.deal_config()?;
                    let space = DealSearchSpace::default();
                    let results = search_deal(
                        &ind.train_graph,
                        &x_train,
                        &val,
                        &base,
                        &space,
                        trials,
                        seed,
                    )?;
                    save_trials_csv(&results, &out.join("trials.csv"))?;
                    if let Some(best) = results.first() {
                        println!("best trial {}: val AUC {}", best.index, best.val_auc);
                    }
                }
                "gnn" => {
                    let tr = loaded.to_transductive()?;
                    let base = config.gnn_config()?;
                    let space = GnnSearchSpace::default();
                    let results = search_gnn(&tr, &x, &base, &space, trials, seed)?;
                    save_trials_csv(&results, &out.join("trials.csv"))?;
                    if let Some(best) = results.first() {
                        println!("best trial {}: val AUC {}", best.index, best.val_auc);
                    }
                }
                other => return Err(Error::invalid(format!("unknown search target '{other}'"))),
            }
        }
    }
    Ok(())
}

fn main() {
    if let Ok(threads) = std::env::var("GRAPHCOMPLETE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
