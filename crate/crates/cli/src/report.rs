//! Versioned report emission.

use serde_json::Value;

use crate::config::OutputFormat;

pub const REPORT_VERSION: u32 = 1;

/// Renders `results` as `{"version":1,"results":[...]}` (json) or one line per
/// result (text). Each result is expected to carry `relation_id` or `id` and `status`.
pub fn emit_report(results: &[Value], format: OutputFormat) -> Result<String, String> {
    match format {
        OutputFormat::Json => {
            let body = serde_json::to_string(results).expect("json");
            Ok(format!("{{\"version\":{},\"results\":{}}}", REPORT_VERSION, body))
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for r in results {
                let id = r.get("relation_id").or_else(|| r.get("id")).and_then(Value::as_str).unwrap_or("?");
                let status = r.get("status").and_then(Value::as_str).unwrap_or("?");
                out.push_str(&format!("{:<13} {}\n", status, id));
            }
            Ok(out)
        }
        OutputFormat::Dot => Err("reports have no dot rendering".into()),
    }
}
