//! Exact higher-genus Gromov–Witten theory of local P² and its orbifold
//! partner `[C³/μ₃]`, computed genus by genus from Picard–Fuchs data,
//! propagator transforms and holomorphic-ambiguity fitting.

pub mod fock;
pub mod graphs;
pub mod linalg;
pub mod mirror;
pub mod rational;
pub mod rpoly;
pub mod series;
pub mod solver;

pub use rational::Rational;
pub use series::{Series, SeriesError, Var};
