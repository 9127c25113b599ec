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
    let cfg = ExperimentConfig {
        instance_path: "data/swiss42.tsp".into(),
        master_seed: 20260810,
        ..ExperimentConfig::default()
    };
    let result = execute(&cfg, None).unwrap();
    let t: Vec<f64> = result.checkpoints.iter().map(|&c| f64::from(c)).collect();
    let q: Vec<f64> = result.fits.iter().map(|f| f.as_ref().unwrap().params.q).collect();
    let x0: Vec<f64> = result.fits.iter().map(|f| f.as_ref().unwrap().params.x0).collect();
    let g: Vec<f64> = result.fits.iter().map(|f| f.as_ref().unwrap().gamma).collect();
    println!("maxETV: {:?}", result.max_etv.values.iter().map(|v| (v * 10.0).round() / 10.0).collect::<Vec<_>>());
    println!("q:  {q:.4?}");
    println!("x0: {:?}", x0.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("spearman q/t = {:.3}, x0/t = {:.3}, gamma/t = {:.3}", spearman(&q, &t), spearman(&x0, &t), spearman(&g, &t));
    for (m, p) in &result.trends {
        if let Some(p) = p {
            println!("trend {m}: a={:.4} b={:.4} c={:.4} R={:.4}", p.a, p.b, p.c, p.r);
        }
    }
    println!("q(500)={} gamma(500)={:.3} maxETV(500)={}", q.last().unwrap(), g.last().unwrap(), result.max_etv.values.last().unwrap());
    let sm = &result.runs[0].summaries;
    let lens: Vec<f64> = [1u32, 25, 50, 100, 150, 250, 400, 500].iter().map(|&g| sm[(g - 1) as usize].mean_length).collect();
    println!("mean length trajectory: {:?}", lens.iter().map(|v| v.round()).collect::<Vec<_>>());
}
