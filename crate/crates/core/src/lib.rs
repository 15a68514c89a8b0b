//! Constructions and certificates for the branched-cover groups built from
//! the sizeable graph Γ: the graph itself, the square complex X_Γ, finite
//! pieces of its cyclic Morse cover, relator extraction, and finite-quotient
//! tools for the resulting presentations.

pub mod complex;
pub mod gamma;
pub mod group;
pub mod morse;
pub mod relators;
