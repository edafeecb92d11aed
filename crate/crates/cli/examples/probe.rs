use fimod_cli::formats;
use fimod_cli::fuzz::{self, FuzzProfile};
use fimod_core::homology;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let profile = FuzzProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut slow = Vec::new();
    for k in 0..100 {
        let pf = fuzz::generate_presentation(&mut rng, &profile, None);
        let m = formats::materialize(&pf).unwrap();
        let t0 = Instant::now();
        let _a = homology::homology(&m, 3);
        let t_a = t0.elapsed();
        let t1 = Instant::now();
        let b = homology::homology_oracle(&m, 3, 6);
        let t_b = t1.elapsed();
        let total = t0.elapsed();
        if total.as_millis() > 900 || !b.complete {
            slow.push((k, pf.field, pf.window, pf.generators.iter().map(|(_,d)|*d).collect::<Vec<_>>(), pf.relations.len(), t_a, t_b, b.complete));
        }
    }
    println!("slow/incomplete cases: {}", slow.len());
    for s in &slow {
        println!("{:?}", s);
    }
}
