//! Encoder and decoder as two separate link instances. The decoder sees
//! only the symbols, yet tracks the same box and the same centers.

use mjls::config::three_mode_example;
use mjls::mathkit::vec_inf_dist;
use mjls::protocol::{decode_bits, encode_bits, transition_estimates, BitLayout, ProtocolLink};
use mjls::simulator::simulate;

fn main() {
    let cfg = three_mode_example()
        .with_overrides(Some(30.0), Some(4), None)
        .unwrap();
    let sc = &cfg.scenario;
    let traj = simulate(sc).unwrap();

    let est = transition_estimates(&sc.systems, &sc.law, &sc.protocol).unwrap();
    let layout = BitLayout::new(&sc.protocol).unwrap();
    let mut encoder = ProtocolLink::new(&sc.systems, &sc.protocol, &est, sc.initial_mode);
    let mut decoder = ProtocolLink::new(&sc.systems, &sc.protocol, &est, sc.initial_mode);

    let mut worst = 0.0f64;
    for rec in &traj.quantizer_log {
        encoder.begin_sample(rec.symbol.mode);
        let sym = encoder.encode(&rec.x);
        let wire = encode_bits(&sym, &layout).unwrap();
        let (c_enc, event) = encoder.absorb(&sym).unwrap();

        let received = decode_bits(&wire, &layout).unwrap();
        decoder.begin_sample(received.mode);
        let (c_dec, _) = decoder.absorb(&received).unwrap();

        assert_eq!(c_enc, c_dec);
        assert_eq!(encoder.state(), decoder.state());
        worst = worst.max(vec_inf_dist(&rec.x, &c_dec) / encoder.state().e);
        if rec.k % 50 == 0 || event.as_str() != "regular" {
            println!(
                "k={:3} {wire} {:8} E={:.3e}",
                rec.k,
                event.as_str(),
                encoder.state().e
            );
        }
    }
    println!(
        "max |x - c| / E = {worst:.4} (at most 1/N = {})",
        1.0 / sc.protocol.levels as f64
    );
}
