use serde::Serialize;
use sha2::{Digest, Sha256};

/// A result wrapped with the producing tool, its version and a hash of the
/// input it was computed from.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument<T: Serialize, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_sha256: String,
    pub config: C,
    #[serde(flatten)]
    pub result: T,
}

impl<T: Serialize, C: Serialize> ReportDocument<T, C> {
    pub fn new(input: &[u8], config: C, result: T) -> Self {
        ReportDocument {
            tool: "rrf",
            version: env!("CARGO_PKG_VERSION"),
            input_sha256: sha256_hex(input),
            config,
            result,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports always serialize");
        out.push('\n');
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::rrf_bounds;
    use crate::model::{ConeKind, NominalProblem};
    use crate::solver::SolverConfig;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn report_is_deterministic_and_flat() {
        let p = NominalProblem::from_rows(
            &[vec![2.0], vec![-1.0]],
            &[0.0, -3.0],
            ConeKind::NonnegOrthant { m: 2 },
        )
        .unwrap();
        let cfg = SolverConfig::default();
        let make = || ReportDocument::new(b"input", cfg, rrf_bounds(&p, &cfg).unwrap()).to_json();
        let text = make();
        assert_eq!(text, make());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["tool"], "rrf");
        assert_eq!(v["exact"], true);
        assert!(v["rrf_lower"].as_f64().unwrap() <= v["rrf_upper"].as_f64().unwrap());
        assert_eq!(v["config"]["gap_tol"], 1e-8);
    }
}
