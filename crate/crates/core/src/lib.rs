//! Exact arithmetic for Markov dynamics on the Young lattice and the Thoma
//! cone: links, jump-rate generators, Meixner and Laguerre symmetric
//! functions, z-measures, simulation and correlation measures.

pub mod correlations;
pub mod error;
pub mod generators;
pub mod links;
pub mod measures;
pub mod partitions;
pub mod rational;
pub mod stats;
pub mod symfunc;

pub use error::{Error, Result};
pub use partitions::{dim, enumerate, enumerate_up_to, skew_dim, FrobeniusCoords, Partition};
pub use rational::Rat;
pub use symfunc::{Basis, ParamPair, SymFn, ThomaPoint};
