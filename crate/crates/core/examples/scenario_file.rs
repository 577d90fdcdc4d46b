//! Scenario files: parse, validate, emit the effective document, reload.

use mjls::config::{ConfigDocument, LoadedConfig, THREE_MODE_EXAMPLE};

fn main() {
    let cfg = LoadedConfig::from_str(THREE_MODE_EXAMPLE).unwrap();
    let text = cfg.document.to_toml().unwrap();
    println!("{text}");
    let again = LoadedConfig::from_str(&text).unwrap();
    assert_eq!(again.scenario, cfg.scenario);

    let broken = THREE_MODE_EXAMPLE.replace("[0.075, -0.15, 0.075]", "[0.075, -0.15, 0.07]");
    match ConfigDocument::parse(&broken).and_then(|d| d.build()) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    let typo = THREE_MODE_EXAMPLE.replace("horizon = 10.0", "horizn = 10.0");
    println!("rejected: {}", ConfigDocument::parse(&typo).unwrap_err());
}
