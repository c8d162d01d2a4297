pub mod classifier;
pub mod config;
pub mod curve;
pub mod error;
pub mod family;
pub mod jacobian;
pub mod lattice;
pub mod pencils;
pub mod poly;
pub mod projective;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod twistor;
pub mod verify;

pub use error::{Error, Result};
