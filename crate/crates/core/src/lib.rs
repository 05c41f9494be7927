pub mod analysis;
pub mod backend;
pub mod bundle;
pub mod classify;
pub mod config;
pub mod explain;
pub mod ingest;
pub mod lexicon;
pub mod pipeline;
pub mod presentation;
pub mod semantics;
pub mod structure;
pub mod text;
