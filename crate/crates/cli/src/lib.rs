//! Command line and HTTP front end for the proof checker.

pub mod bank;
pub mod service;
