//! Graph documents and the synthetic workload generator.

mod document;
mod workload;

pub use document::{
    load, load_file, save, EdgeRecord, GraphDocument, LoadError, LoadOptions, Loaded, NodeRecord,
    FILE_EXTENSION, SCHEMA_VERSION,
};
pub use workload::{
    generate_workload, WorkloadConfig, WorkloadError, OPEN_HORIZON_SPAN, SPECIAL_PERSON,
};
