//! Unit disk visibility graphs over exact rational scenes.

pub mod cli;
pub mod coloring;
pub mod error;
pub mod gadgets;
pub mod lemmas;
pub mod geometry;
mod kernel;
pub mod reduce_poly;
pub mod reduce_sat;
pub mod visibility;

pub use error::{Error, Result};
