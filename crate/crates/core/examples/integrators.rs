//! Event-exact propagation against explicit Euler on one stabilizable mode.

use mjls::config::LoadedConfig;
use mjls::simulator::{simulate, Integrator};

const SCENARIO: &str = r#"
[[modes]]
a = [[1.0, 0.0], [0.0, -1.0]]
b = [[1.0], [0.0]]
k = [[-2.0, 0.0]]

[law]
kind = "fixed"

[protocol]
tau = 0.1
N = 11
E0 = 10.0

[experiment]
x0 = [-5.0, 8.9]
"#;

fn main() {
    let cfg = LoadedConfig::from_str(SCENARIO).unwrap();
    let exact = simulate(&cfg.scenario).unwrap();
    for dt in [1e-2, 1e-3, 1e-4] {
        let mut sc = cfg.scenario.clone();
        sc.integrator = Integrator::FixedStep { dt };
        let euler = simulate(&sc).unwrap();
        let gap = exact
            .quantizer_log
            .iter()
            .zip(&euler.quantizer_log)
            .flat_map(|(a, b)| a.x.iter().zip(&b.x).map(|(u, v)| (u - v).abs()))
            .fold(0.0, f64::max);
        println!("dt = {dt:e}: max sample gap {gap:.3e}");
    }
}
