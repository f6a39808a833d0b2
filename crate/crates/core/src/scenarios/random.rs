use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netflow::CapacitatedNetwork;

/// Random connected network on `n` nodes: a random spanning tree plus each
/// remaining pair with probability `extra`. Capacities are integers in
/// `1..=10` or reals in `[0.1, 10)`.
pub fn random_network(seed: u64, n: usize, extra: f64, integer: bool) -> CapacitatedNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = |rng: &mut ChaCha8Rng| {
        if integer {
            rng.gen_range(1..=10) as f64
        } else {
            rng.gen_range(0.1..10.0)
        }
    };
    let mut present = vec![vec![false; n]; n];
    let mut links = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        present[u][v] = true;
        let c = cap(&mut rng);
        links.push((u, v, c));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.gen_bool(extra.clamp(0.0, 1.0)) {
                let c = cap(&mut rng);
                links.push((u, v, c));
            }
        }
    }
    CapacitatedNetwork::new(n, links).expect("generated links are valid")
}
