//! Only the unstabilizable mode: every run grows like e^t.

use mjls::config::LoadedConfig;
use mjls::simulator::monte_carlo;

const SCENARIO: &str = r#"
[[modes]]
a = [[1.0, 0.0], [0.0, -1.0]]
b = [[0.0], [1.0]]
k = [[0.0, 0.0]]

[law]
kind = "fixed"

[protocol]
tau = 0.1
N = 10
E0 = 10.0

[experiment]
x0 = [-5.0, 8.9]
horizon = 50.0
"#;

fn main() {
    let cfg = LoadedConfig::from_str(SCENARIO).unwrap();
    let summary = monte_carlo(&cfg.scenario, 5).unwrap();
    print!("{}", summary.to_text());
}
