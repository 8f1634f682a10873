//! Parse an instance file and print its shape.
//!
//!     cargo run --example parse_instance -- data/mk01.fjs
//!
//! With no argument a small built-in instance is used.

use fjsp::parse_instance;

const DEMO: &str = "3 3 1.67
2 2 1 3 2 5 1 3 4
3 1 2 2 2 1 6 3 3 1 1 7
1 3 1 2 2 4 3 3
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| {
            eprintln!("{path}: {e}");
            std::process::exit(2)
        }),
        None => DEMO.to_string(),
    };
    let inst = match parse_instance(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("parse error: {e}");
            std::process::exit(1)
        }
    };

    println!("{} jobs, {} machines, {} operations", inst.num_jobs, inst.num_machines, inst.total_ops());
    if let Some(avg) = inst.avg_machines_per_op {
        println!("header says {avg} machines per operation");
    }
    for (j, job) in inst.jobs.iter().enumerate() {
        let ops: Vec<String> = job
            .operations
            .iter()
            .map(|op| {
                let alts: Vec<String> =
                    op.alternatives.iter().map(|a| format!("M{}:{}", a.machine, a.duration)).collect();
                format!("[{}]", alts.join(" "))
            })
            .collect();
        println!("job {j}: {}", ops.join(" -> "));
    }

    let again = parse_instance(&inst.to_text()).expect("own output parses");
    assert_eq!(again.jobs, inst.jobs);
    println!("round trip through to_text: ok");
}
