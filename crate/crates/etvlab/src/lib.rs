//! A deterministic population-dynamics laboratory.
//!
//! The crate evolves TSP populations with a configurable genetic algorithm,
//! builds genealogical graphs from the resulting birth records, computes
//! Event Takeover Value (ETV) impact distributions, fits their time
//! evolution with q-exponential curves, and summarizes the parameter
//! trajectories with power-trend functions.
//!
//! The pipeline, end to end:
//!
//! 1. [`tsp`] parses TSPLIB instances and evaluates tours.
//! 2. [`ga`] evolves a fixed-size population, emitting one
//!    [`ga::BirthRecord`] per created individual.
//! 3. [`genealogy`] turns record streams into parent-edge forests and
//!    computes per-node ETV values, optionally eliminating genetic
//!    hitchhiking by detaching sole-conduit ancestors.
//! 4. [`stats`] pools per-run ETV histograms into frequency distributions.
//! 5. [`qexp`] fits q-exponential curves to pooled distributions.
//! 6. [`trend`] fits `a*t^b + c` trends to the fitted-parameter series.
//! 7. [`experiment`] orchestrates seeded multi-run batches and writes
//!    distribution, fit, trend, plot, and manifest files.

pub mod config;
pub mod experiment;
pub mod ga;
pub mod genealogy;
pub mod qexp;
pub mod stats;
pub mod trend;
pub mod tsp;

pub use config::ExperimentConfig;
pub use experiment::{run_experiment, ExperimentResult, RunManifest};
pub use ga::{BirthRecord, GaConfig, Individual, NodeId};
pub use genealogy::{build_graph, EtvTable, GenealogyGraph};
pub use qexp::{QExpFit, QExpParams};
pub use stats::{EtvHistogram, PooledDistribution};
pub use trend::{Metric, MetricSeries, PowerTrendParams};
pub use tsp::{Tour, TspInstance};
