use fimod_cli::formats;
use fimod_cli::fuzz::{self, FuzzProfile};
use fimod_core::homology::{self, CoverStrategy, ResolveOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let profile = FuzzProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    for k in 0..=29 {
        let pf = fuzz::generate_presentation(&mut rng, &profile, None);
        if k < 29 {
            continue;
        }
        println!("case {k}: field {:?} window {} gens {:?} rels {}", pf.field, pf.window,
            pf.generators, pf.relations.len());
        let m = formats::materialize(&pf).unwrap();
        println!("dims {:?}", m.dims());
        let t = Instant::now();
        let opts = ResolveOptions { strategy: CoverStrategy::Redundant, degree_cap: Some(6), dim_budget: 2500 };
        let r = homology::resolve_with(&m, 3, opts);
        println!("oracle resolution in {:?}, complete {}", t.elapsed(), r.complete);
        for (s, st) in r.steps.iter().enumerate() {
            println!("  step {s}: spec {:?} dims {:?}", st.spec.generators, st.free.dims());
        }
    }
}
