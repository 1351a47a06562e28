//! Command-line front end over `ctpower-core`, with parallel sampling.

pub mod app;
pub mod args;
pub mod config;
pub mod report;
pub mod reproduce;
pub mod runner;

pub use runner::Parallel;
