pub mod cli;
pub mod complementable;
pub mod douglas;
pub mod error;
pub mod json;
pub mod matrix;
pub mod numeric;
pub mod rng;
pub mod scalar;
pub mod seqspace;
pub mod subspace;
