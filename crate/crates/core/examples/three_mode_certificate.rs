//! Certificate for the bundled three-mode example under both estimators.

use mjls::certificate::optimize_with;
use mjls::config::three_mode_example;
use mjls::protocol::WorstStrategy;

fn main() {
    let cfg = three_mode_example();
    let sc = &cfg.scenario;

    for strategy in [WorstStrategy::Bound, WorstStrategy::GridDp] {
        let mut protocol = sc.protocol.clone();
        protocol.worst_strategy = strategy;
        let report =
            optimize_with(&sc.systems, &sc.law, &protocol, &cfg.certificate).expect("certificate");

        println!("== {strategy:?}");
        println!(
            "condition value {:+.6}  passes {}",
            report.condition_value, report.passes
        );
        println!(" p  class           nu        upsilon   mu        pi");
        for p in 0..report.modes() {
            let class = if report.stabilizable[p] {
                "stabilizable  "
            } else {
                "unstabilizable"
            };
            let show = |v: Option<f64>| v.map_or("-".to_string(), |u| format!("{u:.4}"));
            println!(
                " {}  {class}  {:<8}  {:<8}  {:<8.3}  {:.4}",
                p + 1,
                show(report.gains.nu[p]),
                show(report.gains.upsilon[p]),
                report.gains.mu[p],
                report.stationary[p]
            );
        }
    }
}
