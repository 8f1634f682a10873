//! Evaluate dispatching rules over a directory of instances.
//!
//!     cargo run --release --example pdr_sweep -- data/brandimarte
//!
//! Without a directory, eight generated instances are used.

use std::path::PathBuf;
use std::sync::Arc;

use fjsp::bench::{instance_files, load_instances, pdr_sweep, NamedInstance};
use fjsp::generate::{generate, GenConfig};
use fjsp::{JobRule, MachineRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let instances: Vec<NamedInstance> = match std::env::args().nth(1) {
        Some(dir) => {
            let root = PathBuf::from(dir);
            let files = instance_files(&root).expect("readable directory");
            let report = load_instances(&files, &root);
            for (name, e) in &report.failed {
                eprintln!("skipping {name}: {e}");
            }
            report.loaded
        }
        None => (0..8)
            .map(|s| NamedInstance {
                name: format!("gen{s:02}"),
                instance: Arc::new(generate(&GenConfig::mk01_like(), &mut ChaCha8Rng::seed_from_u64(s))),
            })
            .collect(),
    };

    let table = pdr_sweep(&instances, &JobRule::ALL, &MachineRule::ALL).unwrap();
    println!("{:<10} {:>8} {:>8}", "job rule", "SPT", "LPT");
    for jr in JobRule::ALL {
        let avg = |mr| table.average(jr, mr).unwrap();
        println!("{:<10} {:>8.2} {:>8.2}", jr.name(), avg(MachineRule::Spt), avg(MachineRule::Lpt));
    }
    println!("{:<10} {:>8.2}", "min PDR", table.min_pdr_average().unwrap());
}
