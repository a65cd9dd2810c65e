//! Properly coloured Hamiltonian cycles in edge-coloured complete graphs.

pub mod absorbing;
pub mod certificate;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod rotations;

pub use certificate::{verify_certificate, Certificate, CertificateKind, Verdict};
pub use error::{Error, Result};
pub use graph::{Colour, ColouredComplete, DirectedCycle, DirectedPath, EdgeColouring};
pub use par::Exec;
