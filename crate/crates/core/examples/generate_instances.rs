//! Write random instances in the standard text format.
//!
//!     cargo run --example generate_instances -- out/gen 5

use std::path::PathBuf;

use fjsp::generate::{generate, GenConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "generated".into()));
    let count: u64 = args.next().map(|s| s.parse().expect("count")).unwrap_or(3);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = GenConfig::mk01_like();
    for seed in 0..count {
        let inst = generate(&cfg, &mut ChaCha8Rng::seed_from_u64(seed));
        let path = dir.join(format!("gen{seed:02}.fjs"));
        std::fs::write(&path, inst.to_text()).unwrap();
        println!("{}: {} jobs, {} ops", path.display(), inst.num_jobs, inst.total_ops());
    }
}
