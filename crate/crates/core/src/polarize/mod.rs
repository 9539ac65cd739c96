//! Sub-channel statistics, successive-cancellation decoding and the
//! Bhattacharyya tree process.

mod channel;
mod exact;
mod monte_carlo;
mod sc;
mod tree;

use crate::error::Result;
use crate::kernel::Kernel;

pub use channel::DiscreteChannel;
pub use exact::{subchannel_exact, synthesize, EXACT_MAX_LENGTH};
pub use monte_carlo::{subchannel_monte_carlo, subchannel_monte_carlo_all, trial_rng, McEstimate, MIN_SAMPLES};
pub use sc::{bec_design, frozen_worst, genie_error_rates, sc_decode, simulate_sc, ScSummary};
pub use tree::{
    bec_arikan_tree, exact_tree, fraction, polarized_fraction, rate_threshold, tree_process, TreeProcess,
    TreeSample, DEFAULT_ALPHABET_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// I(W^{(i)}) and Z(W^{(i)}) for i = 1..ℓ.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SubchannelStats {
    pub channel: String,
    pub capacity: Vec<f64>,
    pub bhattacharyya: Vec<f64>,
    /// Standard errors of (I, Z), Monte-Carlo only.
    pub stderr: Option<Vec<(f64, f64)>>,
    #[serde(flatten)]
    pub method: Method,
}

impl SubchannelStats {
    pub fn exact(kernel: &Kernel, channel: &DiscreteChannel) -> Result<SubchannelStats> {
        let (capacity, bhattacharyya) = (1..=kernel.length())
            .map(|i| subchannel_exact(kernel, channel, i))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(SubchannelStats {
            channel: channel.label().to_string(),
            capacity,
            bhattacharyya,
            stderr: None,
            method: Method::Exact,
        })
    }

    pub fn monte_carlo(kernel: &Kernel, channel: &DiscreteChannel, samples: usize, seed: u64) -> Result<SubchannelStats> {
        let est = subchannel_monte_carlo_all(kernel, channel, samples, seed)?;
        Ok(SubchannelStats {
            channel: channel.label().to_string(),
            capacity: est.iter().map(|e| e.capacity).collect(),
            bhattacharyya: est.iter().map(|e| e.bhattacharyya).collect(),
            stderr: Some(est.iter().map(|e| (e.capacity_stderr, e.bhattacharyya_stderr)).collect()),
            method: Method::MonteCarlo { samples, seed },
        })
    }

    pub fn total_capacity(&self) -> f64 {
        self.capacity.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_is_conserved() {
        for channel in [DiscreteChannel::bec(0.5).unwrap(), DiscreteChannel::bsc(0.1).unwrap()] {
            for k in [Kernel::arikan(), Kernel::parity_repetition_4()] {
                let s = SubchannelStats::exact(&k, &channel).unwrap();
                let want = k.length() as f64 * channel.capacity();
                assert!((s.total_capacity() - want).abs() < 1e-9, "{channel}");
            }
        }
    }

    #[test]
    fn values_stay_in_range() {
        let k = Kernel::parity_repetition_4();
        for channel in [DiscreteChannel::bec(0.2).unwrap(), DiscreteChannel::bsc(0.3).unwrap()] {
            let s = SubchannelStats::exact(&k, &channel).unwrap();
            for (&c, &z) in s.capacity.iter().zip(&s.bhattacharyya) {
                assert!((-1e-12..=1.0 + 1e-12).contains(&c));
                assert!((-1e-12..=1.0 + 1e-12).contains(&z));
                assert!(c >= 1.0 - z - 1e-12);
                assert!(c <= (1.0 - z * z).sqrt() + 1e-12);
            }
        }
    }

    #[test]
    fn stats_serialize_with_method() {
        let s = SubchannelStats::exact(&Kernel::arikan(), &DiscreteChannel::bec(0.5).unwrap()).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"method\":\"exact\""));
        let m = SubchannelStats::monte_carlo(&Kernel::arikan(), &DiscreteChannel::bec(0.5).unwrap(), 1000, 4).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"method\":\"monte-carlo\"") && json.contains("\"seed\":4"));
    }
}
