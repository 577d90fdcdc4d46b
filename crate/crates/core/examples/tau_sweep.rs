//! Condition value as a function of the sampling period, with the data
//! rate each period costs.

use mjls::cli::{tau_sweep, TauSweep};
use mjls::config::three_mode_example;
use mjls::protocol::data_rate;

fn main() {
    let cfg = three_mode_example();
    let sweep = TauSweep {
        lo: 0.02,
        hi: 0.4,
        steps: 12,
    };
    let p = &cfg.scenario.protocol;
    println!("  tau     R [bit/s]   condition");
    for row in tau_sweep(&cfg, sweep).unwrap() {
        let value = row
            .condition_value
            .map_or("data-rate condition fails".to_string(), |v| {
                format!("{v:+.5}")
            });
        println!(
            "{:6.3}  {:10.2}   {value}{}",
            row.tau,
            data_rate(p.levels, p.state_dim, p.modes, row.tau),
            if row.passes { "  pass" } else { "" }
        );
    }
}
