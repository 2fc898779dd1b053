//! JSON wire formats: point configurations, generator specs, and verdicts.
//! Scalars travel as strings ("a/b" or "a" over the rationals, decimal
//! residues mod p) so every value round-trips exactly.

use crate::exactfield::{FieldDesc, Scalar};
use crate::harness::{GenSpec, GroundTruth};
use crate::projective::PointConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("field {field}: {msg}")]
    Schema { field: String, msg: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct ConfigJson {
    n: usize,
    field: FieldDesc,
    points: Vec<Vec<String>>,
}

pub fn config_to_json(cfg: &PointConfig) -> serde_json::Value {
    let points: Vec<Vec<String>> = cfg
        .points()
        .iter()
        .map(|p| p.coords().iter().map(|c| c.to_string()).collect())
        .collect();
    serde_json::json!({
        "n": cfg.n(),
        "field": cfg.field(),
        "points": points,
    })
}

pub fn config_from_str(s: &str) -> Result<PointConfig, IoError> {
    let parsed: ConfigJson = serde_json::from_str(s).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    if parsed.points.is_empty() {
        return Err(IoError::Schema {
            field: "points".into(),
            msg: "empty points array".into(),
        });
    }
    let mut raw = Vec::with_capacity(parsed.points.len());
    for (i, coords) in parsed.points.iter().enumerate() {
        let mut row = Vec::with_capacity(coords.len());
        for (j, c) in coords.iter().enumerate() {
            let sc = Scalar::parse(parsed.field, c).map_err(|e| IoError::Schema {
                field: format!("points[{i}][{j}]"),
                msg: e.to_string(),
            })?;
            row.push(sc);
        }
        raw.push(row);
    }
    PointConfig::new(parsed.n, parsed.field, raw).map_err(|e| IoError::Schema {
        field: "points".into(),
        msg: e.to_string(),
    })
}

pub fn genspec_to_json(spec: &GenSpec) -> serde_json::Value {
    serde_json::to_value(spec).expect("spec serializes")
}

pub fn genspec_from_str(s: &str) -> Result<GenSpec, IoError> {
    serde_json::from_str(s).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

pub fn ground_truth_to_json(gt: &GroundTruth) -> serde_json::Value {
    match gt {
        GroundTruth::Rnc { params } => serde_json::json!({
            "family": "rnc",
            "params": params.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        }),
        GroundTruth::Union { forms_a, forms_b, assignment } => {
            let forms = |fs: &[crate::ideal::LinearForm]| {
                fs.iter()
                    .map(|f| f.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            };
            serde_json::json!({
                "family": "union_of_subspaces",
                "subspace_a_forms": forms(forms_a),
                "subspace_b_forms": forms(forms_b),
                "assignment": assignment.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
            })
        }
        GroundTruth::General => serde_json::json!({ "family": "general_random" }),
        GroundTruth::Special { i, witness } => serde_json::json!({
            "family": "special_random",
            "i": i,
            "witness": witness,
        }),
    }
}

/// Parse a field descriptor from the command-line syntax "rational" or
/// "fp:P".
pub fn field_from_flag(s: &str) -> Result<FieldDesc, IoError> {
    let makes = |msg: String| IoError::Schema { field: "--field".into(), msg };
    if s == "rational" {
        return Ok(FieldDesc::Rational);
    }
    if let Some(p) = s.strip_prefix("fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| makes(format!("cannot parse modulus from {s:?}")))?;
        let field = FieldDesc::Fp { p };
        field.validate().map_err(|e| makes(e.to_string()))?;
        return Ok(field);
    }
    Err(makes(format!("expected \"rational\" or \"fp:P\", got {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::DEFAULT_PRIME;
    use crate::harness::{generate, Family};

    #[test]
    fn config_round_trip() {
        let spec = GenSpec {
            family: Family::Rnc,
            n: 3,
            s: 8,
            field: FieldDesc::Fp { p: DEFAULT_PRIME },
            seed: 4,
        };
        let (cfg, _) = generate(&spec).unwrap();
        let json = config_to_json(&cfg).to_string();
        let back = config_from_str(&json).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn rational_config_round_trip() {
        let s = r#"{"n":2,"field":{"type":"rational"},"points":[["1","0","0"],["0","1","0"],["0","0","1"],["1","1/2","-3"]]}"#;
        let cfg = config_from_str(s).unwrap();
        let json = config_to_json(&cfg).to_string();
        assert_eq!(cfg, config_from_str(&json).unwrap());
    }

    #[test]
    fn schema_errors_carry_location() {
        let bad = r#"{"n":2,"field":{"type":"rational"},"points":[]}"#;
        match config_from_str(bad) {
            Err(IoError::Schema { field, .. }) => assert_eq!(field, "points"),
            other => panic!("expected schema error, got {other:?}"),
        }
        let unparsable = r#"{"n":2,"#;
        assert!(matches!(config_from_str(unparsable), Err(IoError::Parse { .. })));
        let badscalar = r#"{"n":2,"field":{"type":"rational"},"points":[["1","x","0"],["0","1","0"],["0","0","1"]]}"#;
        match config_from_str(badscalar) {
            Err(IoError::Schema { field, .. }) => assert_eq!(field, "points[0][1]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn field_flag_parsing() {
        assert_eq!(field_from_flag("rational").unwrap(), FieldDesc::Rational);
        assert_eq!(
            field_from_flag("fp:32003").unwrap(),
            FieldDesc::Fp { p: 32003 }
        );
        assert!(field_from_flag("fp:4").is_err());
        assert!(field_from_flag("real").is_err());
    }

    #[test]
    fn genspec_round_trip() {
        let spec = GenSpec {
            family: Family::UnionOfSubspaces { k: 1, r: 2, s_a: 3, s_b: 5 },
            n: 3,
            s: 8,
            field: FieldDesc::Fp { p: DEFAULT_PRIME },
            seed: 77,
        };
        let json = genspec_to_json(&spec).to_string();
        assert_eq!(spec, genspec_from_str(&json).unwrap());
    }
}
