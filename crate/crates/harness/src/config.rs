//! Tolerance overrides from the environment.

use cstar_frames::Tolerances;

use crate::error::{HarnessError, Result};

/// JSON object of [`Tolerances`] fields, e.g. `{"residual": 1e-7}`; unset fields keep defaults.
pub const TOLERANCE_ENV: &str = "CSTAR_TOLERANCES";

pub const SOURCE_DEFAULT: &str = "default";
pub const SOURCE_ENV: &str = "env:CSTAR_TOLERANCES";

/// Parses an override and rejects values below the round-off floor.
pub fn parse_tolerances(text: &str, source_name: &str) -> Result<Tolerances> {
    let tol: Tolerances = serde_json::from_str(text).map_err(|e| HarnessError::Tolerance {
        source_name: source_name.to_string(),
        message: e.to_string(),
    })?;
    check_floor(&tol, source_name)?;
    Ok(tol)
}

pub fn check_floor(tol: &Tolerances, source_name: &str) -> Result<()> {
    match tol.below_floor() {
        Some(field) => Err(HarnessError::Tolerance {
            source_name: source_name.to_string(),
            message: format!("`{field}` is below the floor {:e}", Tolerances::FLOOR),
        }),
        None => Ok(()),
    }
}

pub const SOURCE_SCENARIO: &str = "scenario";

type JsonMap = serde_json::Map<String, serde_json::Value>;

fn env_override() -> Result<Option<JsonMap>> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(text) if !text.trim().is_empty() => {
            let map: JsonMap = serde_json::from_str(&text).map_err(|e| HarnessError::Tolerance {
                source_name: SOURCE_ENV.to_string(),
                message: e.to_string(),
            })?;
            Ok(Some(map))
        }
        _ => Ok(None),
    }
}

/// Defaults, overlaid by scenario fields, overlaid by [`TOLERANCE_ENV`] fields.
///
/// Returns the tolerances and a label naming every layer that contributed.
pub fn resolve_tolerances(scenario: Option<&JsonMap>) -> Result<(Tolerances, String)> {
    let env = env_override()?;
    let mut merged = JsonMap::new();
    let mut sources = Vec::new();
    for (layer, name) in [(scenario, SOURCE_SCENARIO), (env.as_ref(), SOURCE_ENV)] {
        if let Some(map) = layer {
            merged.extend(map.clone());
            sources.push(name);
        }
    }
    if sources.is_empty() {
        return Ok((Tolerances::default(), SOURCE_DEFAULT.to_string()));
    }
    let label = sources.join("+");
    let text = serde_json::Value::Object(merged).to_string();
    Ok((parse_tolerances(&text, &label)?, label))
}

/// Tolerances and their source label, from [`TOLERANCE_ENV`] if set.
pub fn tolerances_from_env() -> Result<(Tolerances, String)> {
    resolve_tolerances(None)
}
