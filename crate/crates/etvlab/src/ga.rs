//! Generational genetic algorithm over TSP tours.
//!
//! Every generation produces exactly N new individuals. Parents are drawn by
//! fitness-proportional roulette, children are built with Enhanced Edge
//! Recombination (EER) and sub-string inversion mutation, and the population
//! update optionally applies elitism (a child that does not beat its dominant
//! parent is discarded and the parent survives as a clone), aging, and
//! reverse insertion of duplicated routes. Each created individual emits one
//! [`BirthRecord`] carrying its dominant-parent link, which is all the
//! genealogy analysis needs.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tsp::{random_tour, Tour, TspInstance};

/// Knobs of a single GA run. `seed` makes the run fully deterministic.
#[derive(Clone, Debug)]
pub struct GaConfig {
    /// Individuals per generation (N).
    pub population_size: u32,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub elitism: bool,
    /// Maximum number of consecutive generations an elitist parent may
    /// survive as a clone. Only meaningful when `elitism` is on.
    pub max_age: Option<u32>,
    /// Cap on per-generation descendant counts, consumed by the genealogy
    /// analysis rather than the engine itself.
    pub edge_cap: Option<u32>,
    /// Number of generations to evolve (t).
    pub max_generations: u32,
    pub seed: u64,
    /// Replace a duplicated route by its reverse coding when the reverse is
    /// not yet present.
    pub reverse_insertion: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            crossover_prob: 0.9,
            mutation_prob: 0.05,
            elitism: false,
            max_age: None,
            edge_cap: None,
            max_generations: 500,
            seed: 0,
            reverse_insertion: true,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GaConfigError {
    #[error("population_size must be at least 2, got {0}")]
    PopulationTooSmall(u32),
    #[error("{name} must lie in [0, 1], got {value}")]
    ProbabilityRange { name: &'static str, value: f64 },
    #[error("max_age must be at least 1")]
    ZeroMaxAge,
    #[error("edge_cap must be at least 1")]
    ZeroEdgeCap,
    #[error("max_generations must be at least 1")]
    ZeroGenerations,
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaConfigError> {
        if self.population_size < 2 {
            return Err(GaConfigError::PopulationTooSmall(self.population_size));
        }
        for (name, value) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GaConfigError::ProbabilityRange { name, value });
            }
        }
        if self.max_age == Some(0) {
            return Err(GaConfigError::ZeroMaxAge);
        }
        if self.edge_cap == Some(0) {
            return Err(GaConfigError::ZeroEdgeCap);
        }
        if self.max_generations == 0 {
            return Err(GaConfigError::ZeroGenerations);
        }
        Ok(())
    }
}

/// Identity of an individual: birth slot `i` within generation `j`,
/// both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub gen: u32,
    pub slot: u32,
}

impl NodeId {
    pub fn new(gen: u32, slot: u32) -> Self {
        Self { gen, slot }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // (i,j) order: birth index first, generation second.
        write!(f, "{},{}", self.slot, self.gen)
    }
}

/// A live member of some generation's population.
#[derive(Clone, Debug)]
pub struct Individual {
    pub id: NodeId,
    pub tour: Tour,
    pub length: f64,
    pub fitness: f64,
    pub dominant_parent: Option<NodeId>,
    pub other_parent: Option<NodeId>,
    /// True for generation-1 roots, reverse insertions, and detached nodes.
    pub uncoupled: bool,
    /// True when this individual is an elitism survivor copy of its parent.
    pub is_clone: bool,
    /// Consecutive generations survived as a clone; fresh children are 0.
    pub age: u32,
}

/// One line of the genealogy stream: who was born, from whom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BirthRecord {
    pub id: NodeId,
    pub dominant_parent: Option<NodeId>,
    pub is_clone: bool,
    pub uncoupled: bool,
}

impl BirthRecord {
    pub fn generation(&self) -> u32 {
        self.id.gen
    }

    fn of(ind: &Individual) -> Self {
        Self {
            id: ind.id,
            dominant_parent: ind.dominant_parent,
            is_clone: ind.is_clone,
            uncoupled: ind.uncoupled,
        }
    }
}

/// Per-generation fitness bookkeeping.
#[derive(Clone, Copy, Debug)]
pub struct GenerationSummary {
    pub generation: u32,
    pub best_length: f64,
    pub mean_length: f64,
    /// True when every individual in the generation has the same fitness.
    pub fitness_balance: bool,
}

/// Everything a finished run hands to the analysis side.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub final_population: Vec<Individual>,
    pub records: Vec<BirthRecord>,
    pub summaries: Vec<GenerationSummary>,
}

/// Maximization score for the roulette: shorter tours score higher.
pub fn fitness_transform(length: f64) -> f64 {
    assert!(length > 0.0, "tour length must be positive");
    1.0 / length
}

struct RouletteWheel {
    cumulative: Vec<f64>,
}

impl RouletteWheel {
    fn new(pop: &[Individual]) -> Self {
        assert!(!pop.is_empty(), "roulette over an empty population");
        let mut cumulative = Vec::with_capacity(pop.len());
        let mut acc = 0.0;
        for ind in pop {
            debug_assert!(ind.fitness > 0.0);
            acc += ind.fitness;
            cumulative.push(acc);
        }
        Self { cumulative }
    }

    fn spin<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.random_range(0.0..total);
        self.cumulative.partition_point(|&c| c <= u)
    }
}

/// Fitness-proportional selection: individual k is returned with probability
/// `fitness_k / sum(fitness)`.
pub fn roulette_select<'a, R: Rng>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    let wheel = RouletteWheel::new(pop);
    &pop[wheel.spin(rng)]
}

/// Union adjacency of two parent tours. Each city has at most four
/// neighbors; edges present in both parents are flagged common.
struct EdgeMap {
    neighbors: Vec<[u32; 4]>,
    common: Vec<[bool; 4]>,
    len: Vec<u8>,
}

impl EdgeMap {
    fn build(a: &Tour, b: &Tour) -> Self {
        let n = a.len();
        let mut map = Self {
            neighbors: vec![[0; 4]; n],
            common: vec![[false; 4]; n],
            len: vec![0; n],
        };
        for tour in [a, b] {
            let c = tour.cities();
            for k in 0..n {
                let u = c[k];
                let v = c[(k + 1) % n];
                map.add(u, v);
                map.add(v, u);
            }
        }
        map
    }

    fn add(&mut self, u: u32, v: u32) {
        let ui = u as usize;
        let l = self.len[ui] as usize;
        for k in 0..l {
            if self.neighbors[ui][k] == v {
                self.common[ui][k] = true;
                return;
            }
        }
        self.neighbors[ui][l] = v;
        self.len[ui] += 1;
    }

    fn remove(&mut self, u: u32, v: u32) {
        let ui = u as usize;
        let l = self.len[ui] as usize;
        for k in 0..l {
            if self.neighbors[ui][k] == v {
                self.neighbors[ui][k] = self.neighbors[ui][l - 1];
                self.common[ui][k] = self.common[ui][l - 1];
                self.len[ui] -= 1;
                return;
            }
        }
    }

    /// Drop a freshly visited city from its neighbors' candidate lists.
    fn mark_visited(&mut self, city: u32) {
        let l = self.len[city as usize] as usize;
        let neighbors: Vec<u32> = self.neighbors[city as usize][..l].to_vec();
        for v in neighbors {
            self.remove(v, city);
        }
    }
}

/// Enhanced Edge Recombination crossover.
///
/// The child is grown from city 0 by repeatedly following the edge map:
/// edges common to both parents take priority, then the neighbor whose own
/// list has the fewest remaining entries; residual ties go to the lowest
/// city index, so the only randomness is the fallback jump to a uniformly
/// random unvisited city when the current city's list is empty.
///
/// The dominant parent is the one sharing more undirected edges with the
/// child; ties go to the fitter parent, then to `p1`.
pub fn eer_crossover<R: Rng>(p1: &Individual, p2: &Individual, rng: &mut R) -> (Tour, NodeId) {
    let n = p1.tour.len();
    debug_assert_eq!(n, p2.tour.len());
    let mut map = EdgeMap::build(&p1.tour, &p2.tour);

    let mut visited = vec![false; n];
    let mut child = Vec::with_capacity(n);
    let mut current = 0u32;
    visited[0] = true;
    child.push(0u32);
    map.mark_visited(0);

    for _ in 1..n {
        let ci = current as usize;
        let l = map.len[ci] as usize;
        let next = if l > 0 {
            let has_common = map.common[ci][..l].iter().any(|&c| c);
            let mut best = u32::MAX;
            let mut best_len = usize::MAX;
            for k in 0..l {
                if has_common && !map.common[ci][k] {
                    continue;
                }
                let cand = map.neighbors[ci][k];
                let cand_len = map.len[cand as usize] as usize;
                if cand_len < best_len || (cand_len == best_len && cand < best) {
                    best = cand;
                    best_len = cand_len;
                }
            }
            best
        } else {
            // The map emptied: continue from a random unvisited city.
            let unvisited: Vec<u32> = (0..n as u32).filter(|&c| !visited[c as usize]).collect();
            unvisited[rng.random_range(0..unvisited.len())]
        };
        visited[next as usize] = true;
        child.push(next);
        map.mark_visited(next);
        current = next;
    }

    let child = Tour::new(child).expect("EER constructs a canonical permutation");
    let c1 = shared_edge_count(&child, &p1.tour);
    let c2 = shared_edge_count(&child, &p2.tour);
    let dominant = if c1 > c2 {
        p1.id
    } else if c2 > c1 {
        p2.id
    } else if p1.fitness >= p2.fitness {
        p1.id
    } else {
        p2.id
    };
    (child, dominant)
}

/// Number of undirected edges two tours share (out of n each).
pub fn shared_edge_count(a: &Tour, b: &Tour) -> usize {
    let n = a.len();
    let mut adj = vec![[u32::MAX; 2]; n];
    let bc = b.cities();
    for k in 0..n {
        let u = bc[k] as usize;
        adj[u][0] = bc[(k + n - 1) % n];
        adj[u][1] = bc[(k + 1) % n];
    }
    let ac = a.cities();
    (0..n)
        .filter(|&k| {
            let u = ac[k] as usize;
            let v = ac[(k + 1) % n];
            adj[u][0] == v || adj[u][1] == v
        })
        .count()
}

fn invert_span(tour: &Tour, a: usize, b: usize) -> Tour {
    debug_assert!(a >= 1 && a < b && b < tour.len());
    let mut cities = tour.cities().to_vec();
    cities[a..=b].reverse();
    Tour::new(cities).expect("span inversion preserves the permutation")
}

/// Sub-string inversion mutation: a random span of length >= 2 inside
/// positions 1..n-1 is reversed. City 0 stays fixed.
pub fn inversion_mutate<R: Rng>(tour: &Tour, rng: &mut R) -> Tour {
    let n = tour.len();
    let a = rng.random_range(1..n - 1);
    let b = rng.random_range(a + 1..n);
    invert_span(tour, a, b)
}

/// Replace one copy of each duplicated route by its reverse coding when the
/// reverse is absent, turning it into a historically uncoupled individual.
///
/// All duplicate/reverse checks run against the population as passed in, so
/// replacements never cascade within one call; for each qualifying route the
/// last duplicate slot in scan order is replaced.
pub fn reverse_insertion(pop: &mut [Individual]) {
    let mut index: HashMap<Tour, usize> = HashMap::new();
    let mut groups: Vec<(Tour, Vec<usize>)> = Vec::new();
    for (slot, ind) in pop.iter().enumerate() {
        match index.get(&ind.tour) {
            Some(&g) => groups[g].1.push(slot),
            None => {
                index.insert(ind.tour.clone(), groups.len());
                groups.push((ind.tour.clone(), vec![slot]));
            }
        }
    }
    let mut replacements: Vec<(usize, Tour)> = Vec::new();
    for (tour, slots) in &groups {
        if slots.len() < 2 {
            continue;
        }
        let rev = tour.reversed();
        if index.contains_key(&rev) {
            continue;
        }
        replacements.push((*slots.last().unwrap(), rev));
    }
    for (slot, rev) in replacements {
        let ind = &mut pop[slot];
        // Symmetric distances: the reverse coding keeps length and fitness.
        ind.tour = rev;
        ind.dominant_parent = None;
        ind.other_parent = None;
        ind.uncoupled = true;
        ind.is_clone = false;
        ind.age = 0;
    }
}

/// Produce generation j+1 from generation j, emitting one record per slot.
pub fn step_generation<R: Rng>(
    inst: &TspInstance,
    pop: &[Individual],
    config: &GaConfig,
    rng: &mut R,
) -> (Vec<Individual>, Vec<BirthRecord>) {
    let n = config.population_size;
    assert_eq!(pop.len(), n as usize, "population size drifted");
    let next_gen = pop[0].id.gen + 1;
    let wheel = RouletteWheel::new(pop);

    let mut next = Vec::with_capacity(pop.len());
    for slot in 1..=n {
        let k1 = wheel.spin(rng);
        let k2 = wheel.spin(rng);
        let (sel1, sel2) = (&pop[k1], &pop[k2]);

        let (child_tour, dominant_id, other_id) = if rng.random::<f64>() < config.crossover_prob {
            let (tour, dominant) = eer_crossover(sel1, sel2, rng);
            let other = if dominant == sel1.id { sel2.id } else { sel1.id };
            (tour, dominant, Some(other))
        } else {
            // No crossover: the child is a copy of the first selected parent.
            (sel1.tour.clone(), sel1.id, None)
        };
        let child_tour = if rng.random::<f64>() < config.mutation_prob {
            inversion_mutate(&child_tour, rng)
        } else {
            child_tour
        };

        let length = inst.tour_length(&child_tour);
        let fitness = fitness_transform(length);
        let dominant = if dominant_id == sel1.id { sel1 } else { sel2 };

        let id = NodeId::new(next_gen, slot);
        let parent_can_stay = config.max_age.map_or(true, |m| dominant.age < m);
        let individual = if config.elitism && fitness <= dominant.fitness && parent_can_stay {
            // Elitism: the offspring is discarded and the parent survives as
            // a clone, one generation older.
            Individual {
                id,
                tour: dominant.tour.clone(),
                length: dominant.length,
                fitness: dominant.fitness,
                dominant_parent: Some(dominant.id),
                other_parent: None,
                uncoupled: false,
                is_clone: true,
                age: dominant.age + 1,
            }
        } else {
            Individual {
                id,
                tour: child_tour,
                length,
                fitness,
                dominant_parent: Some(dominant_id),
                other_parent: other_id,
                uncoupled: false,
                is_clone: false,
                age: 0,
            }
        };
        next.push(individual);
    }

    if config.reverse_insertion {
        reverse_insertion(&mut next);
    }
    let records = next.iter().map(BirthRecord::of).collect();
    (next, records)
}

fn summarize(pop: &[Individual]) -> GenerationSummary {
    let best = pop.iter().map(|i| i.length).fold(f64::INFINITY, f64::min);
    let mean = pop.iter().map(|i| i.length).sum::<f64>() / pop.len() as f64;
    // Lengths are integer-valued for all supported weight kinds, so exact
    // equality is the right balance test.
    let balance = pop.iter().all(|i| i.length == pop[0].length);
    GenerationSummary {
        generation: pop[0].id.gen,
        best_length: best,
        mean_length: mean,
        fitness_balance: balance,
    }
}

/// Evolve a full run: generation 1 is random and uncoupled, generations
/// 2..=t come from [`step_generation`]. The record stream contains exactly
/// N*t records.
pub fn run(inst: &TspInstance, config: &GaConfig) -> RunResult {
    config.validate().expect("invalid GA configuration");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.population_size;

    let mut pop: Vec<Individual> = (1..=n)
        .map(|slot| {
            let tour = random_tour(inst.n(), &mut rng);
            let length = inst.tour_length(&tour);
            Individual {
                id: NodeId::new(1, slot),
                length,
                fitness: fitness_transform(length),
                tour,
                dominant_parent: None,
                other_parent: None,
                uncoupled: true,
                is_clone: false,
                age: 0,
            }
        })
        .collect();

    let mut records: Vec<BirthRecord> =
        Vec::with_capacity((n as usize) * config.max_generations as usize);
    records.extend(pop.iter().map(BirthRecord::of));
    let mut summaries = Vec::with_capacity(config.max_generations as usize);
    summaries.push(summarize(&pop));

    for _ in 2..=config.max_generations {
        let (next, batch) = step_generation(inst, &pop, config, &mut rng);
        records.extend(batch);
        pop = next;
        summaries.push(summarize(&pop));
    }

    RunResult {
        final_population: pop,
        records,
        summaries,
    }
}

/// Serialize records as one line each: `j i parent_j parent_i clone uncoupled`,
/// with `- -` for the missing parent of uncoupled individuals.
pub fn records_to_lines(records: &[BirthRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 16);
    for r in records {
        let (pj, pi) = match r.dominant_parent {
            Some(p) => (p.gen.to_string(), p.slot.to_string()),
            None => ("-".to_string(), "-".to_string()),
        };
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            r.id.gen,
            r.id.slot,
            pj,
            pi,
            u8::from(r.is_clone),
            u8::from(r.uncoupled),
        ));
    }
    out
}

#[derive(Debug, Error, PartialEq)]
pub enum RecordLineError {
    #[error("line {line}: expected 6 fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: invalid {what} `{value}`")]
    Invalid {
        line: usize,
        what: &'static str,
        value: String,
    },
}

/// Parse the line format written by [`records_to_lines`].
pub fn records_from_lines(text: &str) -> Result<Vec<BirthRecord>, RecordLineError> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(RecordLineError::FieldCount {
                line: line_no,
                found: fields.len(),
            });
        }
        let num = |what: &'static str, s: &str| {
            s.parse::<u32>().map_err(|_| RecordLineError::Invalid {
                line: line_no,
                what,
                value: s.to_string(),
            })
        };
        let gen = num("generation", fields[0])?;
        let slot = num("birth index", fields[1])?;
        let parent = match (fields[2], fields[3]) {
            ("-", "-") => None,
            (pj, pi) => Some(NodeId::new(num("parent generation", pj)?, num("parent index", pi)?)),
        };
        let flag = |what: &'static str, s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(RecordLineError::Invalid {
                line: line_no,
                what,
                value: s.to_string(),
            }),
        };
        records.push(BirthRecord {
            id: NodeId::new(gen, slot),
            dominant_parent: parent,
            is_clone: flag("clone flag", fields[4])?,
            uncoupled: flag("uncoupled flag", fields[5])?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn test_instance(n: usize, seed: u64) -> TspInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                (
                    rng.random_range(0.0..1000.0),
                    rng.random_range(0.0..1000.0),
                )
            })
            .collect();
        TspInstance::from_euc2d("test", &coords).unwrap()
    }

    fn individual(id: NodeId, tour: Tour, length: f64) -> Individual {
        Individual {
            id,
            fitness: fitness_transform(length),
            length,
            tour,
            dominant_parent: None,
            other_parent: None,
            uncoupled: true,
            is_clone: false,
            age: 0,
        }
    }

    fn edge_set(t: &Tour) -> std::collections::HashSet<(u32, u32)> {
        let c = t.cities();
        let n = c.len();
        (0..n)
            .map(|k| {
                let (a, b) = (c[k], c[(k + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    #[test]
    fn fitness_transform_basics() {
        assert_eq!(fitness_transform(12.0), 1.0 / 12.0);
        assert!(fitness_transform(10.0) > fitness_transform(11.0));
        // A tour and its reverse have the same length, hence equal fitness.
        assert_eq!(fitness_transform(250.0), fitness_transform(250.0));
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn fitness_transform_rejects_zero() {
        fitness_transform(0.0);
    }

    #[test]
    fn roulette_single_individual() {
        let t = Tour::new(vec![0, 1, 2]).unwrap();
        let pop = vec![individual(NodeId::new(1, 1), t, 10.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            assert_eq!(roulette_select(&pop, &mut rng).id, NodeId::new(1, 1));
        }
    }

    #[test]
    fn roulette_matches_fitness_ratio() {
        // Fitness 3 vs 1: the first should win ~75% of 1e5 draws to
        // within three sigma of the exact binomial deviation.
        let t = Tour::new(vec![0, 1, 2]).unwrap();
        let pop = vec![
            individual(NodeId::new(1, 1), t.clone(), 1.0 / 3.0),
            individual(NodeId::new(1, 2), t, 1.0),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let draws = 100_000;
        let mut hits = 0u32;
        for _ in 0..draws {
            if roulette_select(&pop, &mut rng).id.slot == 1 {
                hits += 1;
            }
        }
        let freq = f64::from(hits) / draws as f64;
        let sigma = (0.75 * 0.25 / draws as f64).sqrt();
        assert!(
            (freq - 0.75).abs() < 3.0 * sigma,
            "freq = {freq}, sigma = {sigma}"
        );
    }

    #[test]
    fn roulette_uniform_when_fitness_equal() {
        let t = Tour::new(vec![0, 1, 2]).unwrap();
        let pop: Vec<Individual> = (1..=4)
            .map(|i| individual(NodeId::new(1, i), t.clone(), 8.0))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let draws = 100_000usize;
        let mut counts = [0f64; 4];
        for _ in 0..draws {
            counts[roulette_select(&pop, &mut rng).id.slot as usize - 1] += 1.0;
        }
        let expected = draws as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // 3 degrees of freedom; 16.3 is the 0.999 quantile.
        assert!(chi2 < 16.3, "chi2 = {chi2}");
    }

    #[test]
    #[should_panic(expected = "empty population")]
    fn roulette_rejects_empty_population() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        roulette_select(&[], &mut rng);
    }

    #[test]
    fn eer_identical_parents_reproduce_the_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let t = crate::tsp::random_tour(9, &mut rng);
            let p1 = individual(NodeId::new(1, 1), t.clone(), 100.0);
            let p2 = individual(NodeId::new(1, 2), t.clone(), 100.0);
            let (child, dominant) = eer_crossover(&p1, &p2, &mut rng);
            // The edge map holds only the parents' edges, so the child is the
            // same cycle (possibly in the reverse coding).
            assert_eq!(edge_set(&child), edge_set(&t));
            // Full overlap on both sides, equal fitness: p1 wins the tie.
            assert_eq!(dominant, p1.id);
        }
    }

    #[test]
    fn eer_hand_traced_fixture() {
        // Parents [0,1,2,3,4] and [0,2,1,3,4]; common edges {1-2, 3-4, 4-0}.
        // The traced map walk is 0 ->4 (only common candidate) -> 3 (only
        // candidate) -> 1 (tie on list size, lowest index) -> 2, with no
        // fallback firing, giving the unique outcome [0,4,3,1,2]. That child
        // shares 3 edges with p1 and all 5 with p2.
        let t1 = Tour::new(vec![0, 1, 2, 3, 4]).unwrap();
        let t2 = Tour::new(vec![0, 2, 1, 3, 4]).unwrap();
        let p1 = individual(NodeId::new(1, 1), t1, 10.0);
        let p2 = individual(NodeId::new(1, 2), t2, 11.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (child, dominant) = eer_crossover(&p1, &p2, &mut rng);
        assert_eq!(child.cities(), &[0, 4, 3, 1, 2]);
        assert_eq!(dominant, p2.id);
        assert_eq!(shared_edge_count(&child, &p1.tour), 3);
        assert_eq!(shared_edge_count(&child, &p2.tour), 5);
    }

    #[test]
    fn eer_child_is_valid_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..500 {
            let a = crate::tsp::random_tour(12, &mut rng);
            let b = crate::tsp::random_tour(12, &mut rng);
            let p1 = individual(NodeId::new(1, 1), a, 10.0);
            let p2 = individual(NodeId::new(1, 2), b, 12.0);
            let (child, _) = eer_crossover(&p1, &p2, &mut rng);
            assert_eq!(child.len(), 12);
        }
    }

    #[test]
    fn inversion_span_example() {
        let t = Tour::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(invert_span(&t, 1, 2).cities(), &[0, 2, 1, 3]);
    }

    #[test]
    fn inversion_all_spans_change_the_tour() {
        let t = Tour::new(vec![0, 1, 2, 3, 4]).unwrap();
        for a in 1..4 {
            for b in (a + 1)..5 {
                assert_ne!(invert_span(&t, a, b), t, "span ({a},{b})");
            }
        }
    }

    #[test]
    fn inversion_mutate_keeps_canonical_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10_000 {
            let t = crate::tsp::random_tour(7, &mut rng);
            let m = inversion_mutate(&t, &mut rng);
            assert_eq!(m.cities()[0], 0);
            assert_eq!(m.len(), 7);
            assert_ne!(m, t);
        }
    }

    fn pop_of(tours: &[Tour]) -> Vec<Individual> {
        tours
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let mut ind = individual(NodeId::new(2, k as u32 + 1), t.clone(), 50.0);
                ind.uncoupled = false;
                ind.dominant_parent = Some(NodeId::new(1, 1));
                ind
            })
            .collect()
    }

    #[test]
    fn reverse_insertion_replaces_last_duplicate() {
        let t = Tour::new(vec![0, 1, 2, 3]).unwrap();
        let u = Tour::new(vec![0, 2, 3, 1]).unwrap();
        let mut pop = pop_of(&[t.clone(), t.clone(), u.clone()]);
        reverse_insertion(&mut pop);
        assert_eq!(pop[0].tour, t);
        assert_eq!(pop[1].tour, t.reversed());
        assert!(pop[1].uncoupled);
        assert!(pop[1].dominant_parent.is_none());
        assert_eq!(pop[2].tour, u);
        assert!(!pop[2].uncoupled);
    }

    #[test]
    fn reverse_insertion_skips_when_reverse_present() {
        let t = Tour::new(vec![0, 1, 2, 3]).unwrap();
        let mut pop = pop_of(&[t.clone(), t.reversed(), t.clone()]);
        let before: Vec<Tour> = pop.iter().map(|i| i.tour.clone()).collect();
        reverse_insertion(&mut pop);
        let after: Vec<Tour> = pop.iter().map(|i| i.tour.clone()).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn reverse_insertion_ignores_distinct_population() {
        let tours = [
            Tour::new(vec![0, 1, 2, 3]).unwrap(),
            Tour::new(vec![0, 2, 1, 3]).unwrap(),
            Tour::new(vec![0, 3, 2, 1]).unwrap(),
        ];
        let mut pop = pop_of(&tours);
        reverse_insertion(&mut pop);
        for (ind, t) in pop.iter().zip(&tours) {
            assert_eq!(&ind.tour, t);
        }
    }

    #[test]
    fn reverse_insertion_preserves_fitness_multiset() {
        let inst = test_instance(8, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            // Small tour space to force duplicates.
            let mut pop: Vec<Individual> = (1..=10)
                .map(|i| {
                    let tour = crate::tsp::random_tour(5, &mut rng);
                    let mut cities = tour.cities().to_vec();
                    cities.extend(5..8);
                    let tour = Tour::new(cities).unwrap();
                    let length = inst.tour_length(&tour);
                    individual(NodeId::new(3, i), tour, length)
                })
                .collect();
            let mut before: Vec<u64> = pop.iter().map(|i| i.fitness.to_bits()).collect();
            reverse_insertion(&mut pop);
            let mut after: Vec<u64> = pop.iter().map(|i| i.fitness.to_bits()).collect();
            before.sort_unstable();
            after.sort_unstable();
            assert_eq!(before, after);
        }
    }

    fn small_config(elitism: bool, max_age: Option<u32>, seed: u64) -> GaConfig {
        GaConfig {
            population_size: 20,
            max_generations: 60,
            elitism,
            max_age,
            seed,
            ..GaConfig::default()
        }
    }

    #[test]
    fn no_elitism_means_no_clones() {
        let inst = test_instance(10, 1);
        let result = run(&inst, &small_config(false, None, 11));
        assert!(result.records.iter().all(|r| !r.is_clone));
    }

    #[test]
    fn aging_bounds_clone_chains() {
        let inst = test_instance(10, 1);
        let result = run(&inst, &small_config(true, Some(2), 13));
        // Chain length per node: clones extend their parent's chain.
        let mut chain: HashMap<NodeId, u32> = HashMap::new();
        let mut longest = 0;
        for r in &result.records {
            let len = if r.is_clone {
                chain.get(&r.dominant_parent.unwrap()).copied().unwrap_or(0) + 1
            } else {
                0
            };
            chain.insert(r.id, len);
            longest = longest.max(len);
        }
        assert!(longest <= 2, "clone chain of length {longest}");
        // The mechanism actually fires in this configuration.
        assert!(result.records.iter().any(|r| r.is_clone));
    }

    #[test]
    fn record_stream_is_deterministic() {
        let inst = test_instance(10, 1);
        let a = run(&inst, &small_config(true, None, 99));
        let b = run(&inst, &small_config(true, None, 99));
        assert_eq!(records_to_lines(&a.records), records_to_lines(&b.records));
        let c = run(&inst, &small_config(true, None, 100));
        assert_ne!(records_to_lines(&a.records), records_to_lines(&c.records));
    }

    #[test]
    fn run_emits_n_times_t_records() {
        let inst = test_instance(10, 1);
        let cfg = small_config(false, None, 7);
        let result = run(&inst, &cfg);
        assert_eq!(result.records.len(), 20 * 60);
        assert_eq!(result.summaries.len(), 60);
        // Slot numbering is 1..=N within each generation.
        for (k, r) in result.records.iter().enumerate() {
            assert_eq!(r.id.gen as usize, k / 20 + 1);
            assert_eq!(r.id.slot as usize, k % 20 + 1);
        }
    }

    #[test]
    fn single_generation_run_is_all_uncoupled() {
        let inst = test_instance(10, 1);
        let cfg = GaConfig {
            max_generations: 1,
            ..small_config(false, None, 3)
        };
        let result = run(&inst, &cfg);
        assert_eq!(result.records.len(), 20);
        assert!(result.records.iter().all(|r| r.uncoupled && r.dominant_parent.is_none()));
    }

    #[test]
    fn parents_come_from_previous_generation() {
        let inst = test_instance(10, 1);
        let result = run(&inst, &small_config(true, Some(3), 21));
        for r in &result.records {
            if let Some(p) = r.dominant_parent {
                assert_eq!(p.gen, r.id.gen - 1);
                assert!(p.slot >= 1 && p.slot <= 20);
            }
        }
    }

    #[test]
    fn elitism_never_emits_below_the_dominant_parent() {
        // Per-slot elitism guarantees every emitted individual is at least
        // as fit as its dominant parent (absent aging), which is what pulls
        // the best length downward in practice.
        let inst = test_instance(12, 2);
        let cfg = small_config(true, None, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut pop: Vec<Individual> = (1..=cfg.population_size)
            .map(|slot| {
                let tour = crate::tsp::random_tour(inst.n(), &mut rng);
                let length = inst.tour_length(&tour);
                individual(NodeId::new(1, slot), tour, length)
            })
            .collect();
        for _ in 2..=cfg.max_generations {
            let by_id: HashMap<NodeId, f64> = pop.iter().map(|i| (i.id, i.fitness)).collect();
            let (next, _) = step_generation(&inst, &pop, &cfg, &mut rng);
            for ind in &next {
                if let Some(p) = ind.dominant_parent {
                    assert!(
                        ind.fitness >= by_id[&p],
                        "slot {:?} emitted below its dominant parent",
                        ind.id
                    );
                }
            }
            pop = next;
        }
    }

    #[test]
    fn balance_turns_the_stream_into_clones() {
        // A transient balance can still break when a mutant beats the
        // plateau, so anchor on the terminal balance stretch: once balance
        // holds through the horizon, only clones (and reverse insertions)
        // enter the population.
        let inst = test_instance(7, 9);
        let cfg = GaConfig {
            population_size: 16,
            max_generations: 400,
            elitism: true,
            seed: 33,
            ..GaConfig::default()
        };
        let result = run(&inst, &cfg);
        assert!(
            result.summaries.last().unwrap().fitness_balance,
            "this seeded elitist run converges to fitness balance"
        );
        let onset = result
            .summaries
            .iter()
            .rev()
            .take_while(|s| s.fitness_balance)
            .last()
            .unwrap()
            .generation;
        assert!(onset + 50 < cfg.max_generations, "onset = {onset}");
        for r in &result.records {
            if r.id.gen > onset && !r.uncoupled {
                assert!(
                    r.is_clone,
                    "non-clone birth {:?} after balance held from generation {onset}",
                    r.id
                );
            }
        }
    }

    #[test]
    fn record_lines_round_trip() {
        let inst = test_instance(10, 1);
        let result = run(&inst, &small_config(true, Some(2), 55));
        let text = records_to_lines(&result.records);
        let parsed = records_from_lines(&text).unwrap();
        assert_eq!(parsed, result.records);
    }

    #[test]
    fn record_line_errors() {
        assert_eq!(
            records_from_lines("1 2 3\n").unwrap_err(),
            RecordLineError::FieldCount { line: 1, found: 3 }
        );
        assert!(matches!(
            records_from_lines("1 x - - 0 1\n").unwrap_err(),
            RecordLineError::Invalid { what: "birth index", .. }
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = GaConfig::default();
        cfg.population_size = 1;
        assert_eq!(cfg.validate(), Err(GaConfigError::PopulationTooSmall(1)));
        cfg = GaConfig::default();
        cfg.crossover_prob = 1.2;
        assert!(matches!(
            cfg.validate(),
            Err(GaConfigError::ProbabilityRange { name: "crossover_prob", .. })
        ));
        cfg = GaConfig::default();
        cfg.max_age = Some(0);
        assert_eq!(cfg.validate(), Err(GaConfigError::ZeroMaxAge));
    }
}

