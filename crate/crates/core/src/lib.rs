pub mod arith;
pub mod cli;
pub mod artin;
pub mod cohomology;
pub mod density;
pub mod error;
pub mod forms;
pub mod ideals;
pub mod oracle;
pub mod padic;
pub mod quadfield;
pub mod rayclass;
pub mod verify;

pub use error::{Error, Result};
