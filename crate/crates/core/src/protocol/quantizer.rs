use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::ProtocolConfig;
use crate::error::{Error, Result};
use crate::mathkit::vec_inf_dist;

/// Shared encoder/decoder quantizer state: box center `x*`, radius `E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerState {
    pub k: usize,
    pub xstar: Vec<f64>,
    pub e: f64,
    /// Zero-based mode sampled at `t_k`.
    pub mode: usize,
}

impl QuantizerState {
    pub fn initial(cfg: &ProtocolConfig, mode: usize) -> Self {
        Self {
            k: 0,
            xstar: cfg.xstar0.clone(),
            e: cfg.e0,
            mode,
        }
    }

    /// `||x - x*||_inf <= E`.
    pub fn contains(&self, x: &[f64]) -> bool {
        vec_inf_dist(x, &self.xstar) <= self.e
    }
}

/// One transmitted symbol: box index (0 is the overflow symbol) and the
/// zero-based sampled mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub box_index: u64,
    pub mode: usize,
}

impl Symbol {
    pub fn is_overflow(&self) -> bool {
        self.box_index == 0
    }
}

/// Maps `x` to the index of its cell in the `N^n` partition of the
/// hypercube around `x*`, or to 0 when `x` lies outside it.
///
/// Cell `d_i = min(floor((x_i - x*_i + E) N / (2E)), N - 1)`; dimension 0 is
/// the least significant digit. Interior boundary points go to the upper
/// cell and the top face is clamped into cell `N - 1`.
pub fn quantize(x: &[f64], state: &QuantizerState, levels: u64) -> Symbol {
    let overflow = Symbol {
        box_index: 0,
        mode: state.mode,
    };
    if x.len() != state.xstar.len() || !state.contains(x) {
        return overflow;
    }
    let nf = levels as f64;
    let mut index = 0u64;
    let mut place = 1u64;
    for (xi, ci) in x.iter().zip(&state.xstar) {
        let raw = ((xi - (ci - state.e)) * nf / (2.0 * state.e)).floor();
        let d = raw.clamp(0.0, nf - 1.0) as u64;
        index += d * place;
        place = place.saturating_mul(levels);
    }
    Symbol {
        box_index: index + 1,
        mode: state.mode,
    }
}

/// Center of the box named by `sym`.
pub fn decode_center(sym: &Symbol, state: &QuantizerState, levels: u64) -> Result<Vec<f64>> {
    if sym.is_overflow() {
        return Err(Error::OverflowSymbol);
    }
    let nf = levels as f64;
    let width = 2.0 * state.e / nf;
    let mut rest = sym.box_index - 1;
    let mut center = Vec::with_capacity(state.xstar.len());
    for ci in &state.xstar {
        let d = rest % levels;
        rest /= levels;
        center.push(ci - state.e + (d as f64 + 0.5) * width);
    }
    if rest != 0 {
        return Err(Error::SymbolRange(format!(
            "box index {} exceeds N^n",
            sym.box_index
        )));
    }
    Ok(center)
}

/// Fixed-width bit layout of a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitLayout {
    pub box_bits: u32,
    pub mode_bits: u32,
    pub box_count: u64,
    pub modes: usize,
}

fn bit_length(v: u64) -> u32 {
    u64::BITS - v.leading_zeros()
}

impl BitLayout {
    /// `ceil(log2(N^n + 1))` box bits then `ceil(log2 M)` mode bits.
    pub fn new(cfg: &ProtocolConfig) -> Result<Self> {
        let box_count = cfg.box_count()?;
        Ok(Self {
            box_bits: bit_length(box_count),
            mode_bits: bit_length(cfg.modes.saturating_sub(1) as u64),
            box_count,
            modes: cfg.modes,
        })
    }

    pub fn bits_per_sample(&self) -> u32 {
        self.box_bits + self.mode_bits
    }
}

/// A packed symbol, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString(pub Vec<bool>);

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn push_bits(out: &mut Vec<bool>, value: u64, width: u32) {
    for i in (0..width).rev() {
        out.push((value >> i) & 1 == 1);
    }
}

fn read_bits(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, b| (acc << 1) | u64::from(*b))
}

pub fn encode_bits(sym: &Symbol, layout: &BitLayout) -> Result<BitString> {
    if sym.box_index > layout.box_count {
        return Err(Error::SymbolRange(format!(
            "box index {} > {}",
            sym.box_index, layout.box_count
        )));
    }
    if sym.mode >= layout.modes {
        return Err(Error::SymbolRange(format!(
            "mode {} > {}",
            sym.mode + 1,
            layout.modes
        )));
    }
    let mut out = Vec::with_capacity(layout.bits_per_sample() as usize);
    push_bits(&mut out, sym.box_index, layout.box_bits);
    push_bits(&mut out, sym.mode as u64, layout.mode_bits);
    Ok(BitString(out))
}

pub fn decode_bits(bits: &BitString, layout: &BitLayout) -> Result<Symbol> {
    let expected = layout.bits_per_sample() as usize;
    if bits.0.len() != expected {
        return Err(Error::BitLength {
            got: bits.0.len(),
            expected,
        });
    }
    let (b, m) = bits.0.split_at(layout.box_bits as usize);
    let sym = Symbol {
        box_index: read_bits(b),
        mode: read_bits(m) as usize,
    };
    if sym.box_index > layout.box_count || sym.mode >= layout.modes {
        return Err(Error::SymbolRange(format!(
            "decoded ({}, {}) outside the alphabet",
            sym.box_index,
            sym.mode + 1
        )));
    }
    Ok(sym)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(xstar: Vec<f64>, e: f64) -> QuantizerState {
        QuantizerState {
            k: 0,
            xstar,
            e,
            mode: 0,
        }
    }

    #[test]
    fn scalar_partition() {
        let s = state(vec![0.0], 1.0);
        assert_eq!(quantize(&[0.5], &s, 3).box_index, 3);
        assert_eq!(quantize(&[1.0], &s, 3).box_index, 3);
        assert_eq!(quantize(&[-1.0], &s, 3).box_index, 1);
        assert_eq!(quantize(&[0.0], &s, 3).box_index, 2);
        assert_eq!(quantize(&[1.5], &s, 3).box_index, 0);
        let c = decode_center(
            &Symbol {
                box_index: 3,
                mode: 0,
            },
            &s,
            3,
        )
        .unwrap();
        assert!((c[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn overflow_cannot_be_decoded() {
        let s = state(vec![0.0], 1.0);
        assert!(matches!(
            decode_center(
                &Symbol {
                    box_index: 0,
                    mode: 0
                },
                &s,
                3
            ),
            Err(Error::OverflowSymbol)
        ));
    }

    #[test]
    fn center_of_own_box() {
        let s = state(vec![0.3, -2.0], 0.7);
        let sym = quantize(&s.xstar, &s, 10);
        let c = decode_center(&sym, &s, 10).unwrap();
        assert!(vec_inf_dist(&c, &s.xstar) <= s.e / 10.0 + 1e-15);
    }

    #[test]
    fn smallest_layout() {
        let mut cfg = ProtocolConfig::new(1.0, 1, 1, 2, 1.0);
        cfg.levels = 1;
        let layout = BitLayout::new(&cfg).unwrap();
        assert_eq!((layout.box_bits, layout.mode_bits), (1, 1));
        let bits = encode_bits(
            &Symbol {
                box_index: 1,
                mode: 1,
            },
            &layout,
        )
        .unwrap();
        assert_eq!(bits.to_string(), "11");
    }

    #[test]
    fn example_layout_is_nine_bits() {
        let cfg = ProtocolConfig::new(0.1, 10, 2, 3, 1.0);
        let layout = BitLayout::new(&cfg).unwrap();
        assert_eq!((layout.box_bits, layout.mode_bits), (7, 2));
        assert_eq!(layout.bits_per_sample(), 9);
    }

    #[test]
    fn wrong_length_rejected() {
        let cfg = ProtocolConfig::new(0.1, 3, 2, 3, 1.0);
        let layout = BitLayout::new(&cfg).unwrap();
        assert!(matches!(
            decode_bits(&BitString(vec![true; 3]), &layout),
            Err(Error::BitLength {
                got: 3,
                expected: 6
            })
        ));
    }
}
