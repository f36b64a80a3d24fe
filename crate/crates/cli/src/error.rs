use std::fmt::Debug;

use serde_json::{json, Value};

use minfill::metric::SpaceError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{message}")]
    Domain { kind: String, message: String, detail: Value },
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({ "kind": "Usage", "message": m }),
            CliError::Domain { kind, message, detail } => {
                let mut v = json!({ "kind": kind, "message": message });
                if !detail.is_null() {
                    v["detail"] = detail.clone();
                }
                v
            }
        }
    }

    pub fn usage(m: impl Into<String>) -> Self {
        CliError::Usage(m.into())
    }
}

/// Innermost variant name from the debug form, e.g. `Tree(NotBinary)` gives
/// `NotBinary`.
fn variant_name(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let ident: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        let after = &rest[ident.len()..];
        match after.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return ident,
        }
    }
}

pub fn domain<E: std::error::Error + Debug>(e: E) -> CliError {
    CliError::Domain {
        kind: variant_name(&format!("{e:?}")),
        message: e.to_string(),
        detail: Value::Null,
    }
}

pub fn invalid_space(e: SpaceError) -> CliError {
    let detail = match &e {
        SpaceError::Violations(v) => json!({ "violations": v }),
        _ => Value::Null,
    };
    CliError::Domain {
        kind: "InvalidSpace".into(),
        message: e.to_string(),
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names() {
        assert_eq!(variant_name("NotAdditive { quadruple: Some([0, 1, 2, 3]) }"), "NotAdditive");
        assert_eq!(variant_name("Filling(Tree(NotBinary))"), "NotBinary");
        assert_eq!(variant_name("TooLarge { n: 12, cap: 9 }"), "TooLarge");
        assert_eq!(variant_name("Malformed(\"x\")"), "Malformed");
    }
}
