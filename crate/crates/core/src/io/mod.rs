//! Problem documents, training data, reports and SDPA export.

mod csv;
mod problem;
mod report;
pub mod sdpa;

pub use self::csv::{ingest_csv, parse_csv};
pub use problem::{
    parse_problem, parse_problem_document, serialize_document, serialize_problem, ConeDocument,
    ProblemDocument,
};
pub use report::{sha256_hex, ReportDocument};
pub use sdpa::{export_sdpa, parse_sdpa, SdpaProblem};
