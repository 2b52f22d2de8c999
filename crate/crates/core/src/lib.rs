//! Simulation of elastic optical networks whose connections move their
//! destination over time, with bridging-based path reconfiguration.

pub mod cli;
pub mod error;
pub mod reconfig;
pub mod routing;
pub mod simulator;
pub mod spectrum;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};
pub use reconfig::{Connection, Outcome, ReconfigAlg, ReconfigResult};
pub use routing::{Path, RouteSetup, RoutingAlg};
pub use simulator::{run, FailurePolicy, Metric, RunConfig, RunReport};
pub use spectrum::{Policy, SliceSet, Slot};
pub use topology::{EonGraph, GraphStats, NodeId};
