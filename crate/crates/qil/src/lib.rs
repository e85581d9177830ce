//! Symbolic qubit information logic with a numerical cross-check oracle.

pub mod dsl;
pub mod gf2;
pub mod oracle;
pub mod qie;
pub mod reasoner;
pub mod report;
pub mod scenario;
pub mod verify;
