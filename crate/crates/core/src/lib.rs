pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod dmodule;
pub mod weights;
pub mod ring;
pub mod birkhoff;
pub mod pipeline;
pub mod report;
pub mod golden;
