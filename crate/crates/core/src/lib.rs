//! Gain and cumulative-gain evaluation of ranked classifier output, with
//! annotation-budget planning on top.
//!
//! The pipeline is: load a prediction file ([`dataset`]), order it by score
//! ([`ranking`]), split the order into quantiles and count positives per
//! quantile ([`metrics`]), then price annotation of leading quantiles
//! ([`budget`]). [`report`] renders the results and [`cli`] wires it all into
//! the `gainbudget` command.
//!
//! ```
//! use gainbudget::fixtures::worked_example;
//! use gainbudget::metrics::gain_profile;
//! use gainbudget::ranking::{partition_quantiles, rank_instances, TiePolicy};
//!
//! let data = worked_example("S1-M2", &[1, 2, 6, 5, 3, 4]);
//! let ranked = rank_instances(&data, TiePolicy::Stable);
//! let profile = gain_profile(&partition_quantiles(&ranked, 3)?)?;
//! assert_eq!(profile.cumulative_positive_count, vec![2, 2, 3]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod budget;
pub mod cli;
pub mod dataset;
pub mod fixtures;
pub mod format;
pub mod metrics;
pub mod money;
pub mod ranking;
pub mod report;

#[cfg(doctest)]
mod book;
