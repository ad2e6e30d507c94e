//! Numerical diagnostics on solved graphs: flux of the unit field, the
//! stability inequality along level curves, conformal moduli of annuli and
//! the exhaustion driver that grows Scherk domains.

mod exhaustion;
mod flux;
mod modulus;
mod stability;

pub use exhaustion::*;
pub use flux::*;
pub use modulus::*;
pub use stability::*;
