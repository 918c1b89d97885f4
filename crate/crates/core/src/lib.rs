pub mod bench;
pub mod dataset;
pub mod error;
pub mod model;
pub mod output;
pub mod query;
pub mod service_uri;
pub mod triplify;

pub use error::{Error, Result};
