//! Exact arithmetic, polynomial algebra over finite fields and numerical
//! tools for Hilbert–Kunz multiplicities and Néron–Severi lattice cones.

pub mod asymptotics;
pub mod determinantal;
pub mod exact_arith;
pub mod hilbert_kunz;
pub mod lattice;
pub mod poly;
pub mod presets;
