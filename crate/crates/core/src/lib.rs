//! Graph states, local complementation, and sequential measurement-based
//! computation with a static memory and flying registers.
//!
//! * [`graph`]: exact weighted graphs and local complementation.
//! * [`qudit`]: dense state vectors for qubits and qudits.
//! * [`cv`]: symplectic and Gaussian machinery for qumodes.
//! * [`protocol`]: the memory / flying-register engines.
//! * [`suites`]: batch verification runs producing [`report::Report`]s.

pub mod error;
pub mod graph;
pub mod par;
pub mod qudit;
pub mod cv;
pub mod protocol;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
