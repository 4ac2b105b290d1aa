//! Numerical calculus of Young functions and Orlicz-type spaces: optimal
//! fractional Sobolev targets, rearrangements, norms, Hardy operators and
//! fractional Gagliardo modulars, with checks of the associated inequalities.

pub mod asymptotics;
pub mod cheb;
pub mod error;
pub mod extension;
pub mod gagliardo;
pub mod grid;
pub mod norms;
pub mod operators1d;
pub mod quad;
pub mod rearrange;
pub mod report;
pub mod roots;
pub mod suite;
pub mod targets;
pub mod young;

pub use error::{Error, Result};
pub use young::YoungFunction;
