//! Mode processes: Markov generators, semi-Markov kernels, sojourn laws and
//! seeded sample paths.

mod law;
mod path;
mod sojourn;

pub use law::{embedded_chain, MarkovLaw, SemiMarkovLaw, SwitchingLaw};
pub use path::{
    rng_from_seed, sample_path_markov, sample_path_semimarkov, SwitchRng, SwitchingPath,
};
pub use sojourn::{sojourn_cdf_mass, SojournDistribution};
