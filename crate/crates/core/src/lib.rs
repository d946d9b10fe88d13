//! Exact combinatorics and operator-valued moment computations for the
//! strong Haagerup inequality over finite alphabets.

pub mod cumulants;
pub mod engine;
pub mod error;
pub mod families;
pub mod harness;
pub mod oracles;
pub mod partition;
pub mod symmetrize;

pub use error::{Error, Result};
pub use partition::{CyclicIndex, Partition};
pub use symmetrize::{GridShape, TerminalKind};
