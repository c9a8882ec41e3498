use std::fmt::Display;
use std::io::Write;

use serde_json::{json, Value};

use crate::input::CliError;

/// Overall result of a command, mapped to the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failed,
    Unknown,
    Usage,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failed => 1,
            Status::Unknown => 2,
            Status::Usage => 3,
        }
    }

    /// Failures dominate unknowns, which dominate success.
    pub fn and(self, other: Status) -> Status {
        let rank = |s| match s {
            Status::Success => 0,
            Status::Unknown => 1,
            Status::Failed => 2,
            Status::Usage => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

pub struct Output {
    json: bool,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Output { json }
    }

    pub fn is_json(&self) -> bool {
        self.json
    }

    /// Prints `text` in text mode and `record` as one line in JSON mode.
    pub fn emit(&self, text: impl Display, record: Value) {
        let mut stdout = std::io::stdout().lock();
        let _ = if self.json {
            writeln!(stdout, "{record}")
        } else {
            writeln!(stdout, "{text}")
        };
    }

    pub fn error(&self, e: &CliError) {
        if self.json {
            self.emit("", json!({ "kind": "error", "message": e.to_string() }));
        }
        eprintln!("error: {e}");
    }
}
