//! Sequential Minimax dimension for finite hypothesis classes under bounded
//! losses, the classical online dimensions it generalizes, and exact
//! learner/adversary games that exercise the associated regret bounds.

pub mod adversaries;
pub mod dimensions;
pub mod error;
pub mod exec;
pub mod game;
pub mod instances;
pub mod learners;
pub mod problem;
pub mod rational;
pub mod simulation;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use problem::{
    expected_loss, restrict, validate_problem, Candidate, HypothesisClass, Mixture, Problem, Stream,
    Task, ThresholdedExample, VersionSpace,
};
pub use rational::Rational;
