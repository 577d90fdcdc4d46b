//! One closed-loop run of the bundled example.
//!
//! `cargo run --example simulate_three_mode -- [seed] [out-dir]` writes the
//! trajectory and quantizer CSVs plus SVG plots when a directory is given.

use std::fs;
use std::path::PathBuf;

use mjls::cli::trajectory_plots;
use mjls::config::three_mode_example;
use mjls::simulator::{
    intersample_bound_check, lyapunov_exponent, quantizer_csv, simulate, trajectory_csv,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(7, |s| s.parse().expect("seed"));
    let out = args.next().map(PathBuf::from);

    let cfg = three_mode_example()
        .with_overrides(Some(20.0), Some(seed), None)
        .unwrap();
    let traj = simulate(&cfg.scenario).unwrap();
    let est = lyapunov_exponent(&traj).unwrap();

    println!("jumps {:?}", traj.path.jump_times());
    println!(
        "modes {:?}",
        traj.path.modes().iter().map(|m| m + 1).collect::<Vec<_>>()
    );
    for r in traj.quantizer_log.iter().step_by(20) {
        println!(
            "t={:5.1}  x*=({:+.4}, {:+.4})  E={:.3e}  box={:3}  mode={}",
            r.t,
            r.xstar[0],
            r.xstar[1],
            r.e,
            r.symbol.box_index,
            r.symbol.mode + 1
        );
    }
    println!("exponent {:.4}", est.exponent);
    println!("violations {}", traj.containment_violations());
    println!(
        "intersample {:?}",
        intersample_bound_check(&cfg.scenario, &traj)
    );

    if let Some(dir) = out {
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("trajectory.csv"), trajectory_csv(&traj)).unwrap();
        fs::write(dir.join("quantizer.csv"), quantizer_csv(&traj)).unwrap();
        for (name, svg) in trajectory_plots(&traj) {
            fs::write(dir.join(name), svg).unwrap();
        }
        println!("wrote {}", dir.display());
    }
}
