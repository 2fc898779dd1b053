//! Browser bindings for the interactive demo page: generate a configuration
//! family member, compute its strand numbers, and classify it. All three
//! entry points speak JSON strings so the page stays a plain static file.

use linstrand::classify::{classify, VerdictTag};
use linstrand::exactfield::{FieldDesc, DEFAULT_PRIME};
use linstrand::harness::{generate, Family, GenSpec};
use linstrand::io;
use linstrand::koszul;
use wasm_bindgen::prelude::wasm_bindgen;

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

/// Generate a configuration. `family` is one of "rnc", "union", "general",
/// "special"; `k` is the first subspace dimension for unions and the
/// degeneracy index for the special family (ignored otherwise).
#[wasm_bindgen]
pub fn generate_config(family: &str, n: usize, s: usize, k: usize, seed: u64) -> String {
    let field = FieldDesc::Fp { p: DEFAULT_PRIME };
    let fam = match family {
        "rnc" => Family::Rnc,
        "general" => Family::GeneralRandom,
        "special" => Family::SpecialRandom { i: k },
        "union" => {
            if k == 0 || k >= n {
                return err_json("union needs 0 < k < n");
            }
            let s_a = (k + 2).min(s.saturating_sub(n - k + 1));
            if s_a < k + 1 {
                return err_json("not enough points for the union shape");
            }
            Family::UnionOfSubspaces { k, r: n - k, s_a, s_b: s - s_a }
        }
        other => return err_json(format!("unknown family {other:?}")),
    };
    let spec = GenSpec { family: fam, n, s, field, seed };
    match generate(&spec) {
        Ok((cfg, _)) => io::config_to_json(&cfg).to_string(),
        Err(e) => err_json(e),
    }
}

/// Strand numbers, the quadric space dimension, and Hilbert function values
/// of a configuration given as JSON.
#[wasm_bindgen]
pub fn strand_report(config_json: &str) -> String {
    let cfg = match io::config_from_str(config_json) {
        Ok(cfg) => cfg,
        Err(e) => return err_json(e),
    };
    let strand = koszul::strand_betti(&cfg);
    let i2 = match linstrand::ideal::ideal_degree_part(&cfg, 2) {
        Ok(fs) => fs.basis.len(),
        Err(e) => return err_json(e),
    };
    let hf: Vec<usize> = (1..=4u32)
        .filter_map(|d| linstrand::ideal::hilbert_function(&cfg, d).ok())
        .collect();
    serde_json::json!({
        "n": cfg.n(),
        "s": cfg.s(),
        "a": strand.a,
        "a_top": strand.a_top(),
        "dim_i2": i2,
        "hilbert_function": hf,
    })
    .to_string()
}

/// Full classification of a configuration given as JSON.
#[wasm_bindgen]
pub fn classify_config(config_json: &str) -> String {
    let cfg = match io::config_from_str(config_json) {
        Ok(cfg) => cfg,
        Err(e) => return err_json(e),
    };
    match classify(&cfg) {
        Ok(v) => {
            let mut out = v.to_json();
            let summary = match &v.tag {
                VerdictTag::NoLinearStrand => "no linear strand".to_string(),
                VerdictTag::OnRnc(_) => "the points lie on a rational normal curve".to_string(),
                VerdictTag::OnUnion(w) => format!(
                    "the points lie on a union of a P^{} and a P^{}",
                    w.k, w.r
                ),
                VerdictTag::UnsplitOverBaseField(_) => {
                    "no witness over the base field".to_string()
                }
            };
            out["summary"] = serde_json::json!(summary);
            out.to_string()
        }
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_then_classify() {
        let cfg = generate_config("rnc", 3, 8, 0, 7);
        assert!(!cfg.contains("error"), "{cfg}");
        let strand = strand_report(&cfg);
        let v: serde_json::Value = serde_json::from_str(&strand).unwrap();
        assert_eq!(v["a"], serde_json::json!([3, 2, 0]));
        let verdict = classify_config(&cfg);
        let v: serde_json::Value = serde_json::from_str(&verdict).unwrap();
        assert_eq!(v["tag"], serde_json::json!("OnRNC"));
    }

    #[test]
    fn union_demo_flow() {
        let cfg = generate_config("union", 3, 9, 1, 3);
        assert!(!cfg.contains("error"), "{cfg}");
        let verdict = classify_config(&cfg);
        let v: serde_json::Value = serde_json::from_str(&verdict).unwrap();
        assert_eq!(v["tag"], serde_json::json!("OnUnion"));
    }

    #[test]
    fn bad_json_reports_error() {
        let out = strand_report("{");
        assert!(out.contains("error"));
    }
}
