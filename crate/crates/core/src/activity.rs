use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Name of a process activity. Case-sensitive, never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Activity(String);

impl Activity {
    pub fn new(name: impl Into<String>) -> Self {
        Activity(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Activity {
    fn from(s: &str) -> Self {
        Activity(s.to_string())
    }
}

impl From<String> for Activity {
    fn from(s: String) -> Self {
        Activity(s)
    }
}

impl Borrow<str> for Activity {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Builds a sequence of activities from single-token names, e.g. `seq(&["a", "b"])`.
pub fn seq(names: &[&str]) -> Vec<Activity> {
    names.iter().map(|n| Activity::from(*n)).collect()
}

/// Renders a sequence as `⟨a,b,c⟩`.
pub fn show_seq(s: &[Activity]) -> String {
    let inner: Vec<&str> = s.iter().map(Activity::as_str).collect();
    format!("⟨{}⟩", inner.join(","))
}
