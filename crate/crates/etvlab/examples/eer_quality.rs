use etvlab::ga::{eer_crossover, fitness_transform, shared_edge_count, Individual, NodeId};
use etvlab::tsp::{parse_tsplib, random_tour};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let text = std::fs::read_to_string("data/swiss42.tsp").unwrap();
    let inst = parse_tsplib(&text).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = inst.n();
    let mut foreign_edges = 0usize;
    let mut total_edges = 0usize;
    let mut child_len_sum = 0.0;
    let mut parent_len_sum = 0.0;
    for _ in 0..2000 {
        let t1 = random_tour(n, &mut rng);
        let t2 = random_tour(n, &mut rng);
        let l1 = inst.tour_length(&t1);
        let l2 = inst.tour_length(&t2);
        let p1 = Individual { id: NodeId::new(1, 1), fitness: fitness_transform(l1), length: l1, tour: t1, dominant_parent: None, other_parent: None, uncoupled: true, is_clone: false, age: 0 };
        let p2 = Individual { id: NodeId::new(1, 2), fitness: fitness_transform(l2), length: l2, tour: t2, dominant_parent: None, other_parent: None, uncoupled: true, is_clone: false, age: 0 };
        let (child, _) = eer_crossover(&p1, &p2, &mut rng);
        let s1 = shared_edge_count(&child, &p1.tour);
        let s2 = shared_edge_count(&child, &p2.tour);
        // union overlap: edges in either parent
        let mut union_shared = 0;
        let cc = child.cities();
        for k in 0..n {
            let a = cc[k]; let b = cc[(k + 1) % n];
            let in1 = shares(&p1.tour, a, b);
            let in2 = shares(&p2.tour, a, b);
            if in1 || in2 { union_shared += 1; }
        }
        foreign_edges += n - union_shared;
        total_edges += n;
        child_len_sum += inst.tour_length(&child);
        parent_len_sum += (l1 + l2) / 2.0;
        let _ = (s1, s2);
    }
    println!("foreign edge rate: {:.4}", foreign_edges as f64 / total_edges as f64);
    println!("mean child length {:.1} vs mean parent length {:.1}", child_len_sum / 2000.0, parent_len_sum / 2000.0);
}

fn shares(t: &etvlab::tsp::Tour, a: u32, b: u32) -> bool {
    let c = t.cities();
    let n = c.len();
    for k in 0..n {
        let (u, v) = (c[k], c[(k + 1) % n]);
        if (u == a && v == b) || (u == b && v == a) { return true; }
    }
    false
}
