//! The finite data-rate channel: hypercube quantizer, symbol packing, data
//! rate, interval propagator estimates and the center/radius update laws.

mod config;
mod estimates;
mod link;
mod quantizer;

pub use config::{
    data_rate, ProtocolConfig, WorstStrategy, DEFAULT_GRID_POINTS, DEFAULT_MAX_SWITCHES,
    DEFAULT_ROUNDING_MARGIN,
};
pub use estimates::{
    expected_segments, expected_transition, transition_estimates, update_no_switch,
    update_with_switch, visiting_order, worst_transition, TransitionEstimates,
};
pub use link::{ProtocolLink, SampleEvent};
pub use quantizer::{
    decode_bits, decode_center, encode_bits, quantize, BitLayout, BitString, QuantizerState, Symbol,
};
