pub mod bits;
pub mod dsp;
pub mod ecc;
pub mod error;
pub mod protocol;
pub mod quantizer;
pub mod signal;
pub mod sync;

pub use bits::BitString;
pub use error::{Error, Result};
