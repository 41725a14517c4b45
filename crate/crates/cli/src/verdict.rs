use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Verified,
    Rejected,
    Error,
}

impl Answer {
    pub fn exit_code(self) -> i32 {
        match self {
            Answer::Yes | Answer::Verified => 0,
            Answer::No | Answer::Rejected => 1,
            Answer::Error => 2,
        }
    }
}

/// What every command prints on standard output, as one line of JSON.
/// Rationals inside the payload are canonical `p/q` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub command: String,
    pub answer: Answer,
    #[serde(default)]
    pub payload: Value,
}

impl Verdict {
    pub fn new(command: &str, answer: Answer, payload: Value) -> Self {
        Verdict { command: command.to_string(), answer, payload }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }

    pub fn from_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}
