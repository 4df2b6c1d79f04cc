//! Closed-form cost model of robust rescheduling and robustness metrics.

mod robustness;
mod theory;

pub use robustness::{robustness, RobustnessEntry, RobustnessReport};
pub use theory::{makespan, Crossover, TheoryParams, FIRST_ORDER_LIMIT};
