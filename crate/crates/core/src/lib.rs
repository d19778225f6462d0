pub mod catalog;
pub mod config;
pub mod curriculum;
pub mod io;
pub mod prep;
pub mod ptb;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod tregex;
