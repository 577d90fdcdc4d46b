//! Channel budget: bits per second and the fixed symbol layout.

use mjls::protocol::{data_rate, decode_bits, encode_bits, BitLayout, ProtocolConfig, Symbol};

fn main() {
    println!("   N  n  M  tau   R [bit/s]   bits/sample");
    for (levels, n, m, tau) in [
        (10, 2, 3, 0.1),
        (11, 2, 3, 0.1),
        (10, 2, 3, 0.05),
        (3, 4, 2, 1.0),
    ] {
        let cfg = ProtocolConfig::new(tau, levels, n, m, 1.0);
        let layout = BitLayout::new(&cfg).unwrap();
        println!(
            "{levels:4} {n:2} {m:2}  {tau:<4}  {:10.4}   {}",
            data_rate(levels, n, m, tau),
            layout.bits_per_sample()
        );
    }

    let cfg = ProtocolConfig::new(0.1, 10, 2, 3, 1.0);
    let layout = BitLayout::new(&cfg).unwrap();
    for sym in [
        Symbol {
            box_index: 0,
            mode: 0,
        },
        Symbol {
            box_index: 57,
            mode: 2,
        },
        Symbol {
            box_index: 100,
            mode: 1,
        },
    ] {
        let bits = encode_bits(&sym, &layout).unwrap();
        assert_eq!(decode_bits(&bits, &layout).unwrap(), sym);
        println!("{sym:?} -> {bits}");
    }
}
