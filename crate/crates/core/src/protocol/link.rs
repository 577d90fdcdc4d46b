use serde::Serialize;

use super::config::ProtocolConfig;
use super::estimates::{update_no_switch, update_with_switch, TransitionEstimates};
use super::quantizer::{decode_center, quantize, QuantizerState, Symbol};
use crate::error::Result;
use crate::mathkit::vec_inf_norm;
use crate::system::ModeSet;

/// What happened at a sample, from the channel's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleEvent {
    /// An in-range box index was sent.
    Regular,
    /// The overflow symbol followed a no-switch update. A mode excursion
    /// that returned before the sample is invisible in the mode field, so
    /// both sides fall back to the switch update for this interval.
    Resync,
    /// The overflow symbol with no fallback left: the radius doubles.
    Overflow,
}

impl SampleEvent {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Regular => "regular",
            Self::Resync => "resync",
            Self::Overflow => "overflow",
        }
    }
}

#[derive(Debug, Clone)]
struct Previous {
    state: QuantizerState,
    center: Vec<f64>,
    levels: f64,
}

/// The rule book both channel ends execute. An encoder calls
/// [`begin_sample`](Self::begin_sample), [`encode`](Self::encode) and
/// [`absorb`](Self::absorb); a decoder does the same without `encode`,
/// taking the mode from the received symbol. Given the same symbol stream
/// the two evolve bit-identically.
#[derive(Debug, Clone)]
pub struct ProtocolLink<'a> {
    systems: &'a ModeSet,
    cfg: &'a ProtocolConfig,
    estimates: &'a [TransitionEstimates],
    state: QuantizerState,
    previous: Option<Previous>,
    switched: bool,
    started: bool,
}

impl<'a> ProtocolLink<'a> {
    pub fn new(
        systems: &'a ModeSet,
        cfg: &'a ProtocolConfig,
        estimates: &'a [TransitionEstimates],
        initial_mode: usize,
    ) -> Self {
        Self {
            systems,
            cfg,
            estimates,
            state: QuantizerState::initial(cfg, initial_mode),
            previous: None,
            switched: false,
            started: false,
        }
    }

    pub fn state(&self) -> &QuantizerState {
        &self.state
    }

    /// Whether the last update used the switch law.
    pub fn switched(&self) -> bool {
        self.switched
    }

    fn pad(&self, mut next: QuantizerState, center: &[f64]) -> QuantizerState {
        next.e += self.cfg.rounding_margin * (vec_inf_norm(&next.xstar) + vec_inf_norm(center))
            + f64::MIN_POSITIVE;
        next
    }

    fn advance(&self, prev: &Previous, switched: bool) -> QuantizerState {
        let next = if switched {
            update_with_switch(
                &prev.state,
                &prev.center,
                &self.estimates[prev.state.mode],
                prev.levels,
            )
        } else {
            update_no_switch(&prev.state, &prev.center, self.systems, prev.levels)
        };
        self.pad(next, &prev.center)
    }

    /// Moves the shared state to the next sample, whose mode is `mode`.
    pub fn begin_sample(&mut self, mode: usize) -> &QuantizerState {
        if self.started {
            let prev = self
                .previous
                .as_ref()
                .expect("absorb must be called once per sample");
            self.switched = mode != prev.state.mode;
            self.state = self.advance(prev, self.switched);
        } else {
            self.started = true;
            self.switched = false;
        }
        self.state.mode = mode;
        &self.state
    }

    /// Encoder side: the symbol for plant state `x`.
    pub fn encode(&self, x: &[f64]) -> Symbol {
        quantize(x, &self.state, self.cfg.levels)
    }

    /// Both sides: consumes the sample's symbol and returns the decoded
    /// center, which is also the auxiliary state after the sample.
    pub fn absorb(&mut self, sym: &Symbol) -> Result<(Vec<f64>, SampleEvent)> {
        let (center, levels, event) = if sym.is_overflow() {
            let event = match &self.previous {
                Some(prev) if !self.switched => {
                    let (mode, missed) = (self.state.mode, self.state.e);
                    self.state = self.advance(prev, true);
                    self.state.mode = mode;
                    // Back-to-back misses: the radius must at least double
                    // so a state outside the model is eventually recaptured.
                    if prev.levels == 1.0 {
                        self.state.e = self.state.e.max(2.0 * missed);
                    }
                    self.switched = true;
                    SampleEvent::Resync
                }
                _ => {
                    self.state.e *= 2.0;
                    SampleEvent::Overflow
                }
            };
            (self.state.xstar.clone(), 1.0, event)
        } else {
            let c = decode_center(sym, &self.state, self.cfg.levels)?;
            (c, self.cfg.levels as f64, SampleEvent::Regular)
        };
        self.previous = Some(Previous {
            state: self.state.clone(),
            center: center.clone(),
            levels,
        });
        Ok((center, event))
    }
}
