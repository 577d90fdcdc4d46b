//! Twenty seeded realizations over 100 s, run in parallel.

use mjls::config::three_mode_example;
use mjls::simulator::monte_carlo;

fn main() {
    let cfg = three_mode_example()
        .with_overrides(Some(100.0), Some(1), None)
        .unwrap();
    let started = std::time::Instant::now();
    let summary = monte_carlo(&cfg.scenario, 20).unwrap();

    for r in &summary.runs {
        println!(
            "seed {:2}  jumps {:2}  resyncs {}  exponent {:+.4}",
            r.seed, r.jumps, r.resyncs, r.exponent
        );
    }
    print!("{}", summary.to_text());
    println!("elapsed {:?}", started.elapsed());
}
