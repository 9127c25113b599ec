//! Batch experiment orchestration: R seeded GA runs, per-checkpoint ETV
//! snapshots with hitchhiking elimination, cross-run pooling, q-exponential
//! fits, power-trend analysis, anomaly detection, and file emission.
//!
//! Per-run seeds are derived from the master seed with a SplitMix64 step, so
//! runs can execute on any number of workers while the outputs stay
//! byte-identical for a given master seed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::ga::{self, BirthRecord, GaConfigError, GenerationSummary};
use crate::genealogy::build_graph;
use crate::qexp::{self, QExpFit};
use crate::stats::{histogram, pool, EtvHistogram, MaxEtvSeries, PooledDistribution};
use crate::trend::{fit_trend, Metric, MetricSeries, PowerTrendParams};
use crate::tsp::{parse_tsplib, ParseError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ga(#[from] GaConfigError),
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
}

/// Deterministic per-run seed: SplitMix64 over the master seed and run index.
pub fn derive_run_seed(master_seed: u64, run_index: u32) -> u64 {
    let mut z = master_seed ^ u64::from(run_index).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Everything kept from one GA run for the analysis stage.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub seed: u64,
    pub records: Vec<BirthRecord>,
    pub summaries: Vec<GenerationSummary>,
    /// One histogram per configured checkpoint.
    pub histograms: Vec<EtvHistogram>,
    /// Run-maximum ETV per configured checkpoint.
    pub max_etv: Vec<u32>,
}

/// In-memory results of a whole experiment.
#[derive(Debug)]
pub struct ExperimentResult {
    pub checkpoints: Vec<u32>,
    pub population_size: u32,
    pub runs: Vec<RunArtifacts>,
    pub pooled: Vec<PooledDistribution>,
    /// Per-checkpoint fit or the reason it failed.
    pub fits: Vec<Result<QExpFit, String>>,
    pub max_etv: MaxEtvSeries,
    pub trends: Vec<(Metric, Option<PowerTrendParams>)>,
    pub anomaly: Option<AnomalyReport>,
}

impl ExperimentResult {
    pub fn fit_at(&self, checkpoint: u32) -> Option<&QExpFit> {
        let k = self.checkpoints.iter().position(|&c| c == checkpoint)?;
        self.fits[k].as_ref().ok()
    }

    pub fn trend_for(&self, metric: Metric) -> Option<&PowerTrendParams> {
        self.trends
            .iter()
            .find(|(m, _)| *m == metric)
            .and_then(|(_, p)| p.as_ref())
    }
}

/// Run the whole pipeline without touching the filesystem (apart from
/// reading the instance).
pub fn execute(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<ExperimentResult, ExperimentError> {
    config.validate()?;
    config.ga_config(0).validate()?;
    let text = fs::read_to_string(&config.instance_path).map_err(|source| ExperimentError::Io {
        path: config.instance_path.clone(),
        source,
    })?;
    let instance = parse_tsplib(&text)?;

    let seeds: Vec<u64> = (0..config.runs)
        .map(|r| derive_run_seed(config.master_seed, r))
        .collect();

    let run_one = |seed: u64| -> RunArtifacts {
        let result = ga::run(&instance, &config.ga_config(seed));
        let graph = build_graph(&result.records).expect("engine streams are well-formed");
        let tables = graph.compute_etv_snapshots(&config.checkpoints, config.edge_cap, true);
        RunArtifacts {
            seed,
            histograms: tables.iter().map(histogram).collect(),
            max_etv: tables.iter().map(|t| t.max_value()).collect(),
            records: result.records,
            summaries: result.summaries,
        }
    };

    let artifacts: Vec<RunArtifacts> = match workers {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
            pool.install(|| seeds.par_iter().map(|&s| run_one(s)).collect())
        }
        None => seeds.par_iter().map(|&s| run_one(s)).collect(),
    };

    let mut pooled = Vec::with_capacity(config.checkpoints.len());
    let mut fits = Vec::with_capacity(config.checkpoints.len());
    let mut mean_max = Vec::with_capacity(config.checkpoints.len());
    for k in 0..config.checkpoints.len() {
        let hists: Vec<EtvHistogram> = artifacts.iter().map(|a| a.histograms[k].clone()).collect();
        let dist = pool(&hists);
        fits.push(qexp::fit(&dist).map_err(|e| e.to_string()));
        pooled.push(dist);
        let mean = artifacts
            .iter()
            .map(|a| f64::from(a.max_etv[k]))
            .sum::<f64>()
            / artifacts.len() as f64;
        mean_max.push(mean);
    }
    let max_etv = MaxEtvSeries::new(config.checkpoints.clone(), mean_max.clone());

    // Trend analysis uses the checkpoints where the fit succeeded so the
    // four series stay aligned.
    let ok_idx: Vec<usize> = fits
        .iter()
        .enumerate()
        .filter_map(|(k, f)| f.is_ok().then_some(k))
        .collect();
    let trends: Vec<(Metric, Option<PowerTrendParams>)> = Metric::ALL
        .iter()
        .map(|&metric| {
            if ok_idx.len() < 4 {
                return (metric, None);
            }
            let checkpoints: Vec<u32> = ok_idx.iter().map(|&k| config.checkpoints[k]).collect();
            let values: Vec<f64> = ok_idx
                .iter()
                .map(|&k| {
                    let fit = fits[k].as_ref().unwrap();
                    match metric {
                        Metric::Etv => mean_max[k],
                        Metric::Q => fit.params.q,
                        Metric::X0 => fit.params.x0,
                        Metric::Gamma => fit.gamma,
                    }
                })
                .collect();
            let series = MetricSeries::new(metric, checkpoints, values)
                .expect("aligned checkpoint series");
            (metric, Some(fit_trend(&series)))
        })
        .collect();

    let anomaly = if config.elitism {
        Some(detect_anomaly(
            &artifacts,
            pooled.last().unwrap(),
            fits.last().unwrap().as_ref().ok(),
            config.population_size,
        ))
    } else {
        None
    };

    Ok(ExperimentResult {
        checkpoints: config.checkpoints.clone(),
        population_size: config.population_size,
        runs: artifacts,
        pooled,
        fits,
        max_etv,
        trends,
        anomaly,
    })
}

// ---------------------------------------------------------------------------
// Anomaly detection
// ---------------------------------------------------------------------------

/// Per-run and tail diagnostics of the elitism convergence anomaly.
#[derive(Clone, Debug, Serialize)]
pub struct AnomalyReport {
    pub per_run: Vec<RunAnomaly>,
    pub tail: Option<TailAnomaly>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RunAnomaly {
    pub run: usize,
    /// First generation where every individual shares one fitness value.
    pub balance_generation: Option<u32>,
    /// Whether every later non-uncoupled birth was an elitism clone.
    pub clones_only_after_balance: Option<bool>,
    /// Longest chain of consecutive clone births along parent links.
    pub max_clone_chain: u32,
}

/// Pooled mass near the population cap compared to the fitted prediction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailAnomaly {
    pub threshold_x: u32,
    pub observed_mass: f64,
    pub predicted_mass: f64,
    pub ratio: f64,
    pub flagged: bool,
}

/// Ratio above which the pooled tail mass counts as anomalous.
const TAIL_RATIO_THRESHOLD: f64 = 10.0;

/// Scan elitism runs for the fitness-balance anomaly: the balance onset,
/// whether only clones are added afterwards, and whether the pooled tail at
/// `x >= 0.9 N` carries far more mass than the fitted curve predicts.
pub fn detect_anomaly(
    runs: &[RunArtifacts],
    pooled_final: &PooledDistribution,
    final_fit: Option<&QExpFit>,
    population_size: u32,
) -> AnomalyReport {
    let per_run = runs
        .iter()
        .enumerate()
        .map(|(idx, run)| {
            let balance = run
                .summaries
                .iter()
                .find(|s| s.fitness_balance)
                .map(|s| s.generation);
            let clones_only = balance.map(|g| {
                run.records
                    .iter()
                    .filter(|r| r.id.gen > g && !r.uncoupled)
                    .all(|r| r.is_clone)
            });
            RunAnomaly {
                run: idx,
                balance_generation: balance,
                clones_only_after_balance: clones_only,
                max_clone_chain: max_clone_chain(&run.records),
            }
        })
        .collect();

    let tail = final_fit.map(|fit| {
        let threshold_x = (0.9 * f64::from(population_size)).ceil() as u32;
        let observed_mass: f64 = pooled_final
            .frequencies()
            .iter()
            .filter(|&&(x, _)| x >= threshold_x)
            .map(|&(_, f)| f)
            .sum();
        let predicted_mass: f64 = (threshold_x..=population_size)
            .map(|x| qexp::q_exponential(&fit.params, f64::from(x)))
            .sum();
        let ratio = if predicted_mass > 0.0 {
            observed_mass / predicted_mass
        } else if observed_mass > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        TailAnomaly {
            threshold_x,
            observed_mass,
            predicted_mass,
            ratio,
            flagged: ratio > TAIL_RATIO_THRESHOLD,
        }
    });

    AnomalyReport { per_run, tail }
}

/// Longest run of consecutive clone births along dominant-parent links.
pub fn max_clone_chain(records: &[BirthRecord]) -> u32 {
    use std::collections::HashMap;
    let mut chain: HashMap<crate::ga::NodeId, u32> = HashMap::new();
    let mut longest = 0;
    for r in records {
        let len = if r.is_clone {
            r.dominant_parent
                .and_then(|p| chain.get(&p).copied())
                .unwrap_or(0)
                + 1
        } else {
            0
        };
        if len > 0 {
            chain.insert(r.id, len);
        }
        longest = longest.max(len);
    }
    longest
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotScale {
    /// Columns `(x, ln_q observed, ln_q fitted)`; includes the x = 0
    /// intercept row with an observed placeholder.
    QLog,
    /// Columns `(log10 x, log10 observed, log10 fitted)`; rows with a
    /// nonpositive value in either column are omitted.
    LogLog,
}

/// Render a fitted checkpoint distribution as plot-ready text columns.
pub fn emit_plot_data(dist: &PooledDistribution, fit: &QExpFit, scale: PlotScale) -> String {
    let mut out = String::new();
    match scale {
        PlotScale::QLog => {
            out.push_str("# x qlog_observed qlog_fitted\n");
            let q = fit.params.q;
            let _ = writeln!(out, "0 nan {}", qexp::q_logarithm(q, fit.params.p0()));
            for &(x, f) in dist.frequencies() {
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    x,
                    qexp::q_logarithm(q, f),
                    qexp::linearized_form(&fit.params, f64::from(x))
                );
            }
        }
        PlotScale::LogLog => {
            out.push_str("# log10_x log10_observed log10_fitted\n");
            for &(x, f) in dist.frequencies() {
                let fitted = qexp::q_exponential(&fit.params, f64::from(x));
                if f <= 0.0 || fitted <= 0.0 {
                    continue;
                }
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    f64::from(x).log10(),
                    f.log10(),
                    fitted.log10()
                );
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

/// Paths and provenance of everything one experiment wrote.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub run_seeds: Vec<u64>,
    pub distribution_files: Vec<String>,
    pub record_files: Vec<String>,
    pub plot_files: Vec<String>,
    pub fit_file: String,
    pub trend_file: String,
    pub anomaly_file: Option<String>,
    pub wall_clock_seconds: f64,
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExperimentError> {
    fs::write(path, contents).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn make_dir(path: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Render the per-checkpoint fit series, one row per checkpoint.
pub fn render_fit_series(result: &ExperimentResult) -> String {
    let mut out = String::from("# checkpoint mean_max_etv q x0 p0 gamma score status\n");
    for (k, &cp) in result.checkpoints.iter().enumerate() {
        let mean_max = result.max_etv.values[k];
        match &result.fits[k] {
            Ok(fit) => {
                let _ = writeln!(
                    out,
                    "{} {} {} {} {} {} {} ok",
                    cp,
                    mean_max,
                    fit.params.q,
                    fit.params.x0,
                    fit.params.p0(),
                    fit.gamma,
                    fit.score
                );
            }
            Err(reason) => {
                let _ = writeln!(
                    out,
                    "{} {} - - - - - error:{}",
                    cp,
                    mean_max,
                    reason.replace(char::is_whitespace, "_")
                );
            }
        }
    }
    out
}

/// One parsed row of a fit-series file.
#[derive(Clone, Copy, Debug)]
pub struct FitSeriesRow {
    pub checkpoint: u32,
    pub mean_max_etv: f64,
    pub q: Option<f64>,
    pub x0: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FitSeriesError {
    #[error("line {line}: malformed fit-series row `{text}`")]
    BadRow { line: usize, text: String },
    #[error("need at least 4 fitted checkpoints to build trends, found {0}")]
    TooFewRows(usize),
}

/// Parse the fit-series format written by [`render_fit_series`].
pub fn parse_fit_series(text: &str) -> Result<Vec<FitSeriesRow>, FitSeriesError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || FitSeriesError::BadRow {
            line: idx + 1,
            text: line.to_string(),
        };
        if fields.len() != 8 {
            return Err(bad());
        }
        let checkpoint: u32 = fields[0].parse().map_err(|_| bad())?;
        let mean_max_etv: f64 = fields[1].parse().map_err(|_| bad())?;
        let opt = |s: &str| -> Result<Option<f64>, FitSeriesError> {
            if s == "-" {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad())
            }
        };
        rows.push(FitSeriesRow {
            checkpoint,
            mean_max_etv,
            q: opt(fields[2])?,
            x0: opt(fields[3])?,
            gamma: opt(fields[5])?,
        });
    }
    Ok(rows)
}

/// Rebuild the four metric trends from parsed fit-series rows.
pub fn trends_from_rows(
    rows: &[FitSeriesRow],
) -> Result<Vec<(Metric, Option<PowerTrendParams>)>, FitSeriesError> {
    let ok: Vec<&FitSeriesRow> = rows.iter().filter(|r| r.q.is_some()).collect();
    if ok.len() < 4 {
        return Err(FitSeriesError::TooFewRows(ok.len()));
    }
    let checkpoints: Vec<u32> = ok.iter().map(|r| r.checkpoint).collect();
    Ok(Metric::ALL
        .iter()
        .map(|&metric| {
            let values: Vec<f64> = ok
                .iter()
                .map(|r| match metric {
                    Metric::Etv => r.mean_max_etv,
                    Metric::Q => r.q.unwrap(),
                    Metric::X0 => r.x0.unwrap(),
                    Metric::Gamma => r.gamma.unwrap(),
                })
                .collect();
            let trend = MetricSeries::new(metric, checkpoints.clone(), values)
                .ok()
                .map(|s| fit_trend(&s));
            (metric, trend)
        })
        .collect())
}

/// Render the trend summary table (metric, a, b, c, R).
pub fn render_trend_table(trends: &[(Metric, Option<PowerTrendParams>)]) -> String {
    let mut out = String::from("# metric a b c R\n");
    for (metric, params) in trends {
        match params {
            Some(p) => {
                let _ = writeln!(out, "{} {} {} {} {}", metric, p.a, p.b, p.c, p.r);
            }
            None => {
                let _ = writeln!(out, "{metric} - - - -");
            }
        }
    }
    out
}

/// Render one pooled distribution as two text columns.
pub fn render_distribution(dist: &PooledDistribution) -> String {
    let mut out = String::from("# x frequency\n");
    for &(x, f) in dist.frequencies() {
        let _ = writeln!(out, "{x} {f}");
    }
    out
}

/// Execute the experiment and write every output file under the configured
/// directory. The manifest is written last and is the only file whose bytes
/// depend on anything besides the master seed (its wall-clock field).
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<(ExperimentResult, RunManifest), ExperimentError> {
    let started = Instant::now();
    let result = execute(config, workers)?;

    let out = &config.out_dir;
    make_dir(out)?;
    make_dir(&out.join("dist"))?;
    make_dir(&out.join("plot"))?;
    make_dir(&out.join("runs"))?;

    let mut distribution_files = Vec::new();
    let mut plot_files = Vec::new();
    for (k, &cp) in result.checkpoints.iter().enumerate() {
        let rel = format!("dist/dist_t{cp:05}.txt");
        write_file(&out.join(&rel), &render_distribution(&result.pooled[k]))?;
        distribution_files.push(rel);

        if let Ok(fit) = &result.fits[k] {
            for (scale, tag) in [(PlotScale::QLog, "qlog"), (PlotScale::LogLog, "loglog")] {
                let rel = format!("plot/{tag}_t{cp:05}.txt");
                write_file(&out.join(&rel), &emit_plot_data(&result.pooled[k], fit, scale))?;
                plot_files.push(rel);
            }
        }
    }

    let mut record_files = Vec::new();
    for (r, run) in result.runs.iter().enumerate() {
        let rel = format!("runs/run_{r:03}_records.txt");
        write_file(&out.join(&rel), &ga::records_to_lines(&run.records))?;
        record_files.push(rel);
    }

    let fit_file = String::from("fits.txt");
    write_file(&out.join(&fit_file), &render_fit_series(&result))?;
    let trend_file = String::from("trend.txt");
    write_file(&out.join(&trend_file), &render_trend_table(&result.trends))?;

    let anomaly_file = match &result.anomaly {
        Some(report) => {
            let rel = String::from("anomaly.json");
            let json = serde_json::to_string_pretty(report).expect("report serializes");
            write_file(&out.join(&rel), &json)?;
            Some(rel)
        }
        None => None,
    };

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        run_seeds: result.runs.iter().map(|r| r.seed).collect(),
        distribution_files,
        record_files,
        plot_files,
        fit_file,
        trend_file,
        anomaly_file,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&out.join("manifest.json"), &json)?;

    Ok((result, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::NodeId;
    use crate::qexp::QExpParams;

    #[test]
    fn run_seeds_are_distinct_and_deterministic() {
        let seeds: Vec<u64> = (0..64).map(|r| derive_run_seed(12345, r)).collect();
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), seeds.len());
        assert_eq!(derive_run_seed(12345, 7), seeds[7]);
        assert_ne!(derive_run_seed(12346, 7), seeds[7]);
    }

    #[test]
    fn tail_anomaly_threshold_arithmetic() {
        // Mass 0.01 at x = N against a fit predicting ~1e-5 there: the
        // ratio is on the order of 1e3 and must flag.
        let n = 100u32;
        let dist = PooledDistribution::from_frequencies(
            vec![(1, 0.89), (2, 0.1), (100, 0.01)],
            1,
            500,
        );
        // Steep parameters make the predicted tail tiny.
        let fit = QExpFit {
            params: QExpParams::new(1.05, 0.5),
            gamma: 20.0,
            score: 0.99,
        };
        let report = detect_anomaly(&[], &dist, Some(&fit), n);
        let tail = report.tail.unwrap();
        assert_eq!(tail.threshold_x, 90);
        assert!(tail.predicted_mass < 1e-4);
        assert!(tail.ratio > 100.0);
        assert!(tail.flagged);
    }

    #[test]
    fn tail_anomaly_stays_quiet_without_excess_mass() {
        let params = QExpParams::new(1.3, 0.7);
        let points: Vec<(u32, f64)> = (1..=100)
            .map(|x| (x, qexp::q_exponential(&params, f64::from(x))))
            .collect();
        let dist = PooledDistribution::from_frequencies(points, 1, 500);
        let fit = QExpFit {
            params,
            gamma: qexp::gamma_of(1.3),
            score: 1.0,
        };
        let report = detect_anomaly(&[], &dist, Some(&fit), 100);
        let tail = report.tail.unwrap();
        assert!((tail.ratio - 1.0).abs() < 1e-9);
        assert!(!tail.flagged);
    }

    #[test]
    fn clone_chain_scanner() {
        let rec = |gen, slot, parent: Option<(u32, u32)>, clone| BirthRecord {
            id: NodeId::new(gen, slot),
            dominant_parent: parent.map(|(g, s)| NodeId::new(g, s)),
            is_clone: clone,
            uncoupled: parent.is_none(),
        };
        let records = vec![
            rec(1, 1, None, false),
            rec(2, 1, Some((1, 1)), true),
            rec(3, 1, Some((2, 1)), true),
            rec(4, 1, Some((3, 1)), false),
            rec(5, 1, Some((4, 1)), true),
        ];
        assert_eq!(max_clone_chain(&records), 2);
    }

    #[test]
    fn qlog_plot_starts_at_the_intercept() {
        let params = QExpParams::new(1.2, 0.8);
        let points: Vec<(u32, f64)> = (1..=10)
            .map(|x| (x, qexp::q_exponential(&params, f64::from(x))))
            .collect();
        let dist = PooledDistribution::from_frequencies(points, 1, 100);
        let fit = QExpFit {
            params,
            gamma: qexp::gamma_of(1.2),
            score: 1.0,
        };
        let text = emit_plot_data(&dist, &fit, PlotScale::QLog);
        let first = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = first.split_whitespace().collect();
        assert_eq!(fields[0], "0");
        assert_eq!(fields[1], "nan");
        let intercept: f64 = fields[2].parse().unwrap();
        let expected = qexp::q_logarithm(1.2, params.p0());
        assert!((intercept - expected).abs() < 1e-12);
        // 1 header + intercept + 10 support rows.
        assert_eq!(text.lines().count(), 12);
    }

    #[test]
    fn loglog_plot_omits_nonpositive_rows() {
        // q < 1 truncates the support, so far points have a fitted value of
        // zero and must be dropped in log-log scale.
        let params = QExpParams::new(0.5, 2.0);
        let dist = PooledDistribution::from_frequencies(
            vec![(1, 0.6), (2, 0.3), (5, 0.1)],
            1,
            100,
        );
        let fit = QExpFit {
            params,
            gamma: 1.0,
            score: 1.0,
        };
        let text = emit_plot_data(&dist, &fit, PlotScale::LogLog);
        // Support ends at x0/(1-q) = 4; x = 5 has q_exponential = 0.
        assert_eq!(text.lines().count(), 1 + 2);
        assert!(!text.contains("inf"));
    }
}
