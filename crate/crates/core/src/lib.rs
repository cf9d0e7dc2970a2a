pub mod cli;
pub mod continuum;
pub mod dynamics;
pub mod error;
pub mod generate;
pub mod graph;
pub mod matrix;
pub mod morse;
pub mod operators;
pub mod rewiring;
pub mod spectral;
pub mod susy;
pub mod walks;
