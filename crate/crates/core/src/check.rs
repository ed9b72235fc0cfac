use serde::Serialize;

/// One verdict produced by a verification routine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool) -> Self {
        Check {
            id: id.into(),
            pass,
            detail: String::new(),
        }
    }

    pub fn with_detail(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            pass,
            detail: detail.into(),
        }
    }

    /// Compare two displayable values, recording both on mismatch.
    pub fn equal<T: PartialEq + std::fmt::Debug>(id: impl Into<String>, got: &T, want: &T) -> Self {
        if got == want {
            Check::new(id, true)
        } else {
            Check::with_detail(id, false, format!("got {got:?}, expected {want:?}"))
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
