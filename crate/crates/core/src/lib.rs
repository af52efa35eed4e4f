//! Learning-progress analytics over discontinuous tutoring session transcripts.

pub mod analytics;
pub mod api;
pub mod caf;
pub mod config;
pub mod feedback;
pub mod mapper;
pub mod oracles;
pub mod store;
pub mod uptake;
