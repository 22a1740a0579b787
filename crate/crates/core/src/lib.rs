pub mod adelic;
pub mod cli;
pub mod channel;
pub mod error;
pub mod factor;
pub mod lattice;
pub mod ledger;
pub mod linalg;
pub mod oracle;
pub mod padic;
pub mod sample;

pub use error::{Error, Result};
