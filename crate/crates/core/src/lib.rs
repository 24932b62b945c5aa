pub mod algebra;
pub mod biham;
pub mod cli;
pub mod dual;
pub mod error;
pub mod fields;
pub mod gns;
pub mod kahler;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod state;

pub use error::{Error, Result};
