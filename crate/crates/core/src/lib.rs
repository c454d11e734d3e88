#![forbid(unsafe_code)]

//! Waiting-time derivative estimation for the FCFS single-server queue.
//!
//! The crate simulates customer waiting times through the Lindley recursion
//! `W[i+1] = (W[i] + S[i] - A[i])+` and, along each sample path, runs
//! recursive estimators of the first three derivatives of the expected
//! waiting time with respect to a parameter `theta` of the first customer's
//! service-time distribution:
//!
//! * order 1 — the pathwise (IPA) recursion, unbiased;
//! * orders 2 and 3 — recursions that augment the pathwise terms with
//!   density corrections evaluated at the busy-period boundary, keeping the
//!   estimators unbiased where plain repeated pathwise differentiation is
//!   not;
//! * the plain repeated-pathwise values are carried alongside as the
//!   `*_naive` statistics, solely to exhibit their bias on identical
//!   randomness.
//!
//! A replication harness aggregates estimates into means, standard errors,
//! and confidence intervals, and two independent oracles (nested adaptive
//! quadrature of the exact expectation, and common-random-number finite
//! differences) verify the estimators empirically.
//!
//! All numerics are generic over the scalar type via [`Real`]; concrete
//! `f64`/`f32` aliases live at the crate root.

pub mod distributions;
pub mod error;
pub mod estimators;
pub mod lindley;
pub mod montecarlo;
pub mod oracles;
pub mod quad;
pub mod real;
pub mod report;
pub mod rng;
pub mod scenario;

pub use error::{SimError, Violation};
pub use real::Real;
pub use rng::RandomStream;

/// Concrete aliases for the common scalar choices.
pub type ContinuousDistributionF64 = distributions::ContinuousDistribution<f64>;
pub type ContinuousDistributionF32 = distributions::ContinuousDistribution<f32>;
pub type ServiceModelF64 = distributions::ServiceModel<f64>;
pub type ServiceModelF32 = distributions::ServiceModel<f32>;
pub type ScenarioF64 = scenario::Scenario<f64>;
pub type ScenarioF32 = scenario::Scenario<f32>;
pub type PathF64 = lindley::Path<f64>;
pub type PathF32 = lindley::Path<f32>;
pub type EstimatePathF64 = estimators::EstimatePath<f64>;
pub type EstimatePathF32 = estimators::EstimatePath<f32>;
pub type AggregateReportF64 = montecarlo::AggregateReport<f64>;
pub type AggregateReportF32 = montecarlo::AggregateReport<f32>;
