use etvlab::config::ExperimentConfig;
use etvlab::ga;
use etvlab::tsp::parse_tsplib;

fn main() {
    let text = std::fs::read_to_string("data/swiss42.tsp").unwrap();
    let inst = parse_tsplib(&text).unwrap();
    let cfg = ExperimentConfig::default();
    for elitism in [false, true] {
        let mut ga_cfg = cfg.ga_config(777);
        ga_cfg.elitism = elitism;
        let result = ga::run(&inst, &ga_cfg);
        println!("elitism={elitism}");
        for g in [1u32, 25, 50, 100, 200, 300, 400, 500] {
            let s = &result.summaries[(g - 1) as usize];
            println!("  gen {:3}: best {:7.1} mean {:8.2} balance {}", g, s.best_length, s.mean_length, s.fitness_balance);
        }
    }
}
