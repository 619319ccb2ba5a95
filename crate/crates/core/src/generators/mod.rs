//! Instance generators: 3-SAT gadgets, set-cover metrics, planted random walks.

pub mod dimacs;
pub mod fixtures;
pub mod sat3;
pub mod setcover;
pub mod walkers;

pub use dimacs::{Cnf3, Literal};
pub use sat3::{gen_sat3, GadgetParams, Sat3Instance};
pub use setcover::{gen_setcover_metric, SetCoverInstance};
pub use walkers::{gen_random_walkers, WalkerParams};
