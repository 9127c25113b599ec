use etvlab::config::ExperimentConfig;
use etvlab::experiment::execute;
use etvlab::trend::Metric;

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] { j += 1; }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j { r[idx[k]] = avg; }
            i = j + 1;
        }
        r
    }
    etvlab::trend::pearson(&ranks(xs), &ranks(ys))
}

fn main() {
    for seed in [11u64, 22, 33] {
        let cfg = ExperimentConfig {
            instance_path: "data/swiss42.tsp".into(),
            master_seed: seed,
            ..ExperimentConfig::default()
        };
        let result = execute(&cfg, None).unwrap();
        let t: Vec<f64> = result.checkpoints.iter().map(|&c| f64::from(c)).collect();
        let q: Vec<f64> = result.fits.iter().map(|f| f.as_ref().unwrap().params.q).collect();
        let x0: Vec<f64> = result.fits.iter().map(|f| f.as_ref().unwrap().params.x0).collect();
        let r = |m: Metric| result.trend_for(m).map(|p| p.r).unwrap_or(f64::NAN);
        println!(
            "seed {seed}: S_q={:+.3} S_x0={:+.3} | R: etv={:.3} x0={:.3} q={:.3} g={:.3} | q500={:.3} g500={:.2} max500={:.1}",
            spearman(&q, &t), spearman(&x0, &t),
            r(Metric::Etv), r(Metric::X0), r(Metric::Q), r(Metric::Gamma),
            q.last().unwrap(), 1.0 / (q.last().unwrap() - 1.0), result.max_etv.values.last().unwrap()
        );
    }
}
