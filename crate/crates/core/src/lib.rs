//! Modular data of the quantum-group categories `C(g,k)`, local modules over
//! simple-current algebras, and numeric case checks built on top of them.

pub mod alcove;
pub mod angle;
pub mod bundle;
pub mod cli;
pub mod currents;
pub mod error;
pub mod fusion;
pub mod localmods;
pub mod modular;
pub mod rootsys;
pub mod suites;
pub mod verifier;
pub mod wittlab;

pub use angle::RationalAngle;
pub use error::{Error, Result};
pub use rootsys::{RootSystem, Series, Weight};
