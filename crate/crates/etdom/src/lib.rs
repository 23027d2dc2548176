//! File formats, command line and game service for `etdom-core`.

pub mod cache;
pub mod cli;
pub mod format;
pub mod gen;
pub mod json;
pub mod service;
pub mod strategies;
pub mod verify;
