//! Strategy selection and a single entry point over all strategies.

use alloc::string::ToString;

use crate::baselines::{random_sample, topk_prune, uniform_stride, ImportanceScores};
use crate::error::{Error, Result};
use crate::oracle::oracle_fuse_counted;
use crate::sequence::TokenSequence;
use crate::tofu::{check_tau, dynamic_threshold, fuse_counted, ReducedSequence};

/// A reduction strategy together with exactly the parameters it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Tofu { tau: f64 },
    TofuAuto,
    Random { budget: usize, seed: u64 },
    TopK { budget: usize },
    Stride { budget: usize },
    Oracle { tau: f64 },
}

impl Strategy {
    pub const NAMES: [&'static str; 6] =
        ["tofu", "tofu-auto", "random", "topk", "stride", "oracle"];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tofu { .. } => "tofu",
            Self::TofuAuto => "tofu-auto",
            Self::Random { .. } => "random",
            Self::TopK { .. } => "topk",
            Self::Stride { .. } => "stride",
            Self::Oracle { .. } => "oracle",
        }
    }

    /// Canonical strategy name; `_` is accepted in place of `-`.
    pub fn canonical_name(name: &str) -> Result<&'static str> {
        let normalized = name.replace('_', "-");
        Self::NAMES
            .iter()
            .copied()
            .find(|n| *n == normalized)
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    /// Builds a strategy from loose parameters, rejecting missing ones and
    /// ones the strategy does not use.
    pub fn from_parts(
        name: &str,
        tau: Option<f64>,
        budget: Option<usize>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let name = Self::canonical_name(name)?;
        let (wants_tau, wants_budget, wants_seed) = match name {
            "tofu" | "oracle" => (true, false, false),
            "tofu-auto" => (false, false, false),
            "random" => (false, true, true),
            _ => (false, true, false),
        };
        let check = |present: bool, wanted: bool, param: &'static str| match (present, wanted) {
            (true, false) => Err(Error::UnexpectedParameter {
                strategy: name,
                param,
            }),
            (false, true) if param != "seed" => Err(Error::MissingParameter {
                strategy: name,
                param,
            }),
            _ => Ok(()),
        };
        check(tau.is_some(), wants_tau, "tau")?;
        check(budget.is_some(), wants_budget, "budget")?;
        check(seed.is_some(), wants_seed, "seed")?;

        let strategy = match name {
            "tofu" => Self::Tofu {
                tau: tau.unwrap_or_default(),
            },
            "oracle" => Self::Oracle {
                tau: tau.unwrap_or_default(),
            },
            "tofu-auto" => Self::TofuAuto,
            "random" => Self::Random {
                budget: budget.unwrap_or_default(),
                seed: seed.unwrap_or_default(),
            },
            "topk" => Self::TopK {
                budget: budget.unwrap_or_default(),
            },
            _ => Self::Stride {
                budget: budget.unwrap_or_default(),
            },
        };
        if let Self::Tofu { tau } | Self::Oracle { tau } = strategy {
            check_tau(tau)?;
        }
        Ok(strategy)
    }

    pub fn tau(&self) -> Option<f64> {
        match *self {
            Self::Tofu { tau } | Self::Oracle { tau } => Some(tau),
            _ => None,
        }
    }

    pub fn budget(&self) -> Option<usize> {
        match *self {
            Self::Random { budget, .. } | Self::TopK { budget } | Self::Stride { budget } => {
                Some(budget)
            }
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            Self::Random { seed, .. } => Some(seed),
            _ => None,
        }
    }
}

/// Full configuration of one reduction run.
///
/// Means and similarities are always accumulated in 64-bit floats; there is
/// no knob for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionConfig {
    pub strategy: Strategy,
}

impl From<Strategy> for ReductionConfig {
    fn from(strategy: Strategy) -> Self {
        Self { strategy }
    }
}

/// Result of [`reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub reduced: ReducedSequence,
    /// Threshold actually used (fusion strategies only).
    pub tau: Option<f64>,
    /// Similarity evaluations performed (0 for pruning strategies).
    pub pair_evals: u64,
}

/// Runs the configured strategy. `scores` is required by top-k only.
pub fn reduce(
    seq: &TokenSequence,
    config: &ReductionConfig,
    scores: Option<&ImportanceScores>,
) -> Result<Reduction> {
    let fused = |(reduced, pair_evals), tau| Reduction {
        reduced,
        tau: Some(tau),
        pair_evals,
    };
    let pruned = |reduced| Reduction {
        reduced,
        tau: None,
        pair_evals: 0,
    };
    Ok(match config.strategy {
        Strategy::Tofu { tau } => fused(fuse_counted(seq, tau)?, tau),
        Strategy::TofuAuto => {
            let tau = dynamic_threshold(seq.rows())?;
            fused(fuse_counted(seq, tau)?, tau)
        }
        Strategy::Oracle { tau } => fused(oracle_fuse_counted(seq, tau)?, tau),
        Strategy::Random { budget, seed } => pruned(random_sample(seq, budget, seed)?),
        Strategy::TopK { budget } => {
            let scores = scores.ok_or(Error::MissingParameter {
                strategy: "topk",
                param: "scores",
            })?;
            pruned(topk_prune(seq, scores, budget)?)
        }
        Strategy::Stride { budget } => pruned(uniform_stride(seq, budget)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parameters_must_match_strategy() {
        assert_eq!(
            Strategy::from_parts("tofu", Some(0.8), None, None).unwrap(),
            Strategy::Tofu { tau: 0.8 }
        );
        assert_eq!(
            Strategy::from_parts("tofu_auto", None, None, None).unwrap(),
            Strategy::TofuAuto
        );
        assert_eq!(
            Strategy::from_parts("random", None, Some(3), None).unwrap(),
            Strategy::Random { budget: 3, seed: 0 }
        );
        assert!(matches!(
            Strategy::from_parts("tofu", None, None, None),
            Err(Error::MissingParameter { param: "tau", .. })
        ));
        assert!(matches!(
            Strategy::from_parts("stride", Some(0.5), Some(2), None),
            Err(Error::UnexpectedParameter { param: "tau", .. })
        ));
        assert!(matches!(
            Strategy::from_parts("topk", None, Some(2), Some(1)),
            Err(Error::UnexpectedParameter { param: "seed", .. })
        ));
        assert!(matches!(
            Strategy::from_parts("magic", None, None, None),
            Err(Error::UnknownStrategy(_))
        ));
        assert!(matches!(
            Strategy::from_parts("oracle", Some(2.0), None, None),
            Err(Error::Threshold(_))
        ));
    }

    #[test]
    fn dispatch() {
        let seq = TokenSequence::from_rows(&[[1.0f32, 0.0], [0.8, 0.6], [0.0, 1.0]]).unwrap();
        let r = reduce(&seq, &Strategy::Tofu { tau: 0.75 }.into(), None).unwrap();
        assert_eq!(r.reduced.len(), 2);
        assert_eq!(r.pair_evals, 2);
        let r = reduce(&seq, &Strategy::TofuAuto.into(), None).unwrap();
        assert_eq!(r.tau, Some(0.9));
        assert!(matches!(
            reduce(&seq, &Strategy::TopK { budget: 1 }.into(), None),
            Err(Error::MissingParameter {
                param: "scores",
                ..
            })
        ));
        let scores = ImportanceScores::new(vec![0.0, 0.0, 1.0]).unwrap();
        let r = reduce(&seq, &Strategy::TopK { budget: 1 }.into(), Some(&scores)).unwrap();
        assert_eq!(r.reduced.tokens(), seq.row(2));
    }
}
