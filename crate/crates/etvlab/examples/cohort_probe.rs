use etvlab::config::ExperimentConfig;
use etvlab::ga;
use etvlab::tsp::parse_tsplib;
use std::collections::HashMap;

fn main() {
    let text = std::fs::read_to_string("data/swiss42.tsp").unwrap();
    let inst = parse_tsplib(&text).unwrap();
    let cfg = ExperimentConfig { instance_path: "data/swiss42.tsp".into(), ..Default::default() };
    let mut child_counts: HashMap<u32, Vec<u32>> = HashMap::new(); // cohort gen -> children count per node
    let mut uncoupled_per_gen = vec![0u32; 501];
    for run in 0..10u32 {
        let ga_cfg = cfg.ga_config(etvlab::experiment::derive_run_seed(42, run));
        let result = ga::run(&inst, &ga_cfg);
        let mut children: HashMap<etvlab::ga::NodeId, u32> = HashMap::new();
        for r in &result.records {
            if let Some(p) = r.dominant_parent {
                *children.entry(p).or_default() += 1;
            }
            if r.uncoupled && r.id.gen > 1 {
                uncoupled_per_gen[r.id.gen as usize] += 1;
            }
        }
        for r in &result.records {
            if r.id.gen < 500 {
                child_counts.entry(r.id.gen).or_default().push(children.get(&r.id).copied().unwrap_or(0));
            }
        }
    }
    for window in [(1u32, 10u32), (20, 30), (60, 80), (150, 200), (350, 400), (450, 490)] {
        let mut multi = 0usize;
        let mut total = 0usize;
        for g in window.0..=window.1 {
            for &c in &child_counts[&g] {
                total += 1;
                if c >= 2 { multi += 1; }
            }
        }
        println!("cohorts {:3}-{:3}: P(>=2 children) = {:.4}", window.0, window.1, multi as f64 / total as f64);
    }
    for window in [(2u32, 30u32), (100, 150), (300, 350), (450, 500)] {
        let total: u32 = (window.0..=window.1).map(|g| uncoupled_per_gen[g as usize]).sum();
        let gens = (window.1 - window.0 + 1) as f64 * 10.0;
        println!("uncoupled insertions per generation, gens {:3}-{:3}: {:.3}", window.0, window.1, f64::from(total) / gens);
    }
}
