//! Periodic multi-path routing that minimizes peak or average age of
//! information under throughput bounds.
//!
//! The exact solver enumerates admissible periods, finds the minimal
//! maximum delay of each by binary search over a max-flow program on the
//! time-expanded network, and converts delays to AoI in closed form. An
//! approximation framework lifts a unit-period min-max-delay flow instead.

pub mod error;
pub mod expander;
pub mod experiments;
pub mod fixtures;
pub mod io;
pub mod lp;
pub mod mmd;
pub mod model;
pub mod par;
pub mod rational;
pub mod schedule;
pub mod simulate;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{
    aoi_from_max_delay, feasible_periods, AoiReport, Instance, Link, Network, PeriodicSolution,
    ScheduleEntry,
};
pub use mmd::{min_max_delay, min_max_delay_oracle, MmdResult};
pub use rational::Rational;
pub use solvers::{approx_solve, solve_mmd_problem, solve_optimal, Objective, SolveOutcome};
