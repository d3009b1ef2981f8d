//! Link-prediction toolkit for sparse item-compatibility graphs.
//!
//! The pipeline has three stages: train an inductive dual-encoder model
//! ([`deal`]) on a node-basis split, use it to add high-confidence edges to
//! the graph ([`enrich`]), then train transductive GNN link predictors
//! ([`gnn`]) on the original and enriched graphs and compare ([`evalkit`]).

pub mod deal;
pub mod enrich;
pub mod evalkit;
pub mod gnn;
pub mod graphstore;
pub mod nnkit;
pub mod sbm;
pub mod search;
pub mod splitkit;

mod error;
pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
