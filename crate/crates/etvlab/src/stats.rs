//! ETV frequency statistics: per-run histograms, cross-run pooling, and the
//! max-ETV time series.
//!
//! Pooling follows the law-of-large-numbers recipe: summed counts over
//! summed node totals, `Pr[ETV = x] ~ sum_r n_r(x) / sum_r N_r`. Zero-count
//! values are never stored, matching log-scale plotting where zeros are
//! undefined.

use std::collections::BTreeMap;

use crate::genealogy::EtvTable;

/// Integer-valued ETV counts of a single run at one snapshot horizon.
#[derive(Clone, Debug)]
pub struct EtvHistogram {
    counts: BTreeMap<u32, u64>,
    total: u64,
    horizon: u32,
}

impl EtvHistogram {
    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    /// Total number of individuals in the genealogy (N*t for fixed
    /// generation sizes).
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Assemble a histogram from raw counts; test and tooling constructor.
    pub fn from_counts(counts: BTreeMap<u32, u64>, horizon: u32) -> Self {
        assert!(counts.keys().all(|&x| x >= 1), "ETV values start at 1");
        let total = counts.values().sum();
        Self {
            counts,
            total,
            horizon,
        }
    }
}

/// Count ETV occurrences over every node of a snapshot table.
pub fn histogram(table: &EtvTable) -> EtvHistogram {
    assert!(!table.is_empty(), "histogram of an empty table");
    let mut counts = BTreeMap::new();
    for &v in table.values() {
        *counts.entry(v).or_insert(0u64) += 1;
    }
    EtvHistogram {
        counts,
        total: table.len() as u64,
        horizon: table.horizon(),
    }
}

/// Cross-run pooled frequencies approximating `Pr[ETV = x]`.
#[derive(Clone, Debug)]
pub struct PooledDistribution {
    points: Vec<(u32, f64)>,
    runs: usize,
    horizon: u32,
}

impl PooledDistribution {
    /// `(x, frequency)` pairs sorted by ascending x; only positive
    /// frequencies are present.
    pub fn frequencies(&self) -> &[(u32, f64)] {
        &self.points
    }

    pub fn frequency_at(&self, x: u32) -> f64 {
        self.points
            .binary_search_by_key(&x, |&(x, _)| x)
            .map(|k| self.points[k].1)
            .unwrap_or(0.0)
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn total_mass(&self) -> f64 {
        self.points.iter().map(|&(_, f)| f).sum()
    }

    pub fn max_support(&self) -> Option<u32> {
        self.points.last().map(|&(x, _)| x)
    }

    /// Build a distribution from explicit `(x, frequency)` pairs, e.g. read
    /// back from a distribution file or synthesized in tests.
    pub fn from_frequencies(mut points: Vec<(u32, f64)>, runs: usize, horizon: u32) -> Self {
        points.sort_by_key(|&(x, _)| x);
        points.retain(|&(_, f)| f > 0.0);
        Self {
            points,
            runs,
            horizon,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DistFileError {
    #[error("line {line}: expected `x frequency`, got `{text}`")]
    BadRow { line: usize, text: String },
    #[error("no data rows found")]
    Empty,
}

/// Parse a two-column `x frequency` distribution file (as written by the
/// experiment runner); `#` lines are comments.
pub fn parse_distribution(text: &str) -> Result<PooledDistribution, DistFileError> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let row = (|| {
            let x: u32 = it.next()?.parse().ok()?;
            let f: f64 = it.next()?.parse().ok()?;
            if it.next().is_some() {
                return None;
            }
            Some((x, f))
        })();
        match row {
            Some(p) => points.push(p),
            None => {
                return Err(DistFileError::BadRow {
                    line: idx + 1,
                    text: line.to_string(),
                })
            }
        }
    }
    if points.is_empty() {
        return Err(DistFileError::Empty);
    }
    Ok(PooledDistribution::from_frequencies(points, 1, 0))
}

/// Pool histograms from R runs into one frequency distribution.
pub fn pool(hists: &[EtvHistogram]) -> PooledDistribution {
    assert!(!hists.is_empty(), "pooling requires at least one run");
    let horizon = hists[0].horizon;
    assert!(
        hists.iter().all(|h| h.horizon == horizon),
        "histograms pooled across different horizons"
    );
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut total = 0u64;
    for h in hists {
        total += h.total;
        for (&x, &n) in &h.counts {
            *counts.entry(x).or_insert(0) += n;
        }
    }
    let points = counts
        .into_iter()
        .map(|(x, n)| (x, n as f64 / total as f64))
        .collect();
    PooledDistribution {
        points,
        runs: hists.len(),
        horizon,
    }
}

/// Mean over runs of each run's maximum ETV.
pub fn max_etv_mean(tables: &[EtvTable]) -> f64 {
    assert!(!tables.is_empty(), "need at least one run");
    tables.iter().map(|t| f64::from(t.max_value())).sum::<f64>() / tables.len() as f64
}

/// Mean max-ETV per checkpoint across runs.
#[derive(Clone, Debug)]
pub struct MaxEtvSeries {
    pub checkpoints: Vec<u32>,
    pub values: Vec<f64>,
}

impl MaxEtvSeries {
    pub fn new(checkpoints: Vec<u32>, values: Vec<f64>) -> Self {
        assert_eq!(checkpoints.len(), values.len());
        Self {
            checkpoints,
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::{BirthRecord, NodeId};
    use crate::genealogy::build_graph;

    fn record(gen: u32, slot: u32, parent: Option<(u32, u32)>) -> BirthRecord {
        BirthRecord {
            id: NodeId::new(gen, slot),
            dominant_parent: parent.map(|(g, s)| NodeId::new(g, s)),
            is_clone: false,
            uncoupled: parent.is_none(),
        }
    }

    fn hist(pairs: &[(u32, u64)], horizon: u32) -> EtvHistogram {
        EtvHistogram::from_counts(pairs.iter().copied().collect(), horizon)
    }

    #[test]
    fn histogram_of_uniform_table() {
        let records: Vec<BirthRecord> = (1..=10).map(|s| record(1, s, None)).collect();
        let table = build_graph(&records)
            .unwrap()
            .compute_etv_snapshot(1, None, false);
        let h = histogram(&table);
        assert_eq!(h.total(), 10);
        assert_eq!(h.counts().get(&1), Some(&10));
        assert_eq!(h.counts().len(), 1);
    }

    #[test]
    fn histogram_of_detached_chain_fixture() {
        // A -> B -> {C1, C2} with detachment: ETVs are {A: 1, B: 2, C: 1, 1}.
        let graph = build_graph(&[
            record(1, 1, None),
            record(2, 1, Some((1, 1))),
            record(3, 1, Some((2, 1))),
            record(3, 2, Some((2, 1))),
        ])
        .unwrap();
        let h = histogram(&graph.compute_etv_snapshot(3, None, true));
        assert_eq!(h.counts().get(&1), Some(&3));
        assert_eq!(h.counts().get(&2), Some(&1));
        assert_eq!(h.total(), 4);
    }

    #[test]
    fn pooling_matches_hand_arithmetic() {
        // Run 1 counts {1: 8, 3: 2} of 10, run 2 counts {1: 6, 2: 4} of 10:
        // pooled Pr[1] = 14/20, Pr[2] = 4/20, Pr[3] = 2/20.
        let pooled = pool(&[hist(&[(1, 8), (3, 2)], 5), hist(&[(1, 6), (2, 4)], 5)]);
        assert_eq!(pooled.runs(), 2);
        assert_eq!(pooled.frequency_at(1), 0.7);
        assert_eq!(pooled.frequency_at(2), 0.2);
        assert_eq!(pooled.frequency_at(3), 0.1);
        assert_eq!(pooled.frequency_at(4), 0.0);
    }

    #[test]
    fn pooling_single_run_is_identity() {
        let h = hist(&[(1, 7), (2, 2), (5, 1)], 4);
        let pooled = pool(std::slice::from_ref(&h));
        assert_eq!(pooled.frequency_at(1), 0.7);
        assert_eq!(pooled.frequency_at(2), 0.2);
        assert_eq!(pooled.frequency_at(5), 0.1);
        assert!((pooled.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pooling_is_order_invariant_and_normalized() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let hists: Vec<EtvHistogram> = (0..5)
                .map(|_| {
                    let pairs: Vec<(u32, u64)> = (1..=rng.random_range(1..8u32))
                        .map(|x| (x, rng.random_range(1..50u64)))
                        .collect();
                    hist(&pairs, 9)
                })
                .collect();
            let forward = pool(&hists);
            let mut reversed_inputs = hists.clone();
            reversed_inputs.reverse();
            let backward = pool(&reversed_inputs);
            assert_eq!(forward.frequencies(), backward.frequencies());
            assert!((forward.total_mass() - 1.0).abs() < 1e-12);
            assert!(forward.frequencies().iter().all(|&(x, f)| x >= 1 && f > 0.0));
        }
    }

    #[test]
    fn pooling_identical_histograms_is_identity() {
        let h = hist(&[(1, 5), (2, 3), (4, 2)], 3);
        let pooled = pool(&[h.clone(), h.clone(), h.clone()]);
        let single = pool(std::slice::from_ref(&h));
        assert_eq!(pooled.frequencies(), single.frequencies());
    }

    #[test]
    fn max_etv_mean_examples() {
        let mk = |n: u32| {
            // One root, n clones-of-it chain in a two-generation graph to
            // force a max of n descendants.
            let mut records = vec![];
            for s in 1..=n {
                records.push(record(1, s, None));
            }
            for s in 1..=n {
                records.push(record(2, s, Some((1, 1))));
            }
            build_graph(&records)
                .unwrap()
                .compute_etv_snapshot(2, None, false)
        };
        let tables = [mk(10), mk(12)];
        assert_eq!(max_etv_mean(&tables), 11.0);
        let saturated = [mk(8), mk(8)];
        assert_eq!(max_etv_mean(&saturated), 8.0);
    }
}
