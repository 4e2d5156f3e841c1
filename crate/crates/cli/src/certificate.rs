use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    /// The statement this check exercises.
    pub anchor: String,
    pub pass: bool,
    pub witness: Value,
}

impl Check {
    pub fn new(name: &str, anchor: &str, pass: bool, witness: Value) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            witness,
        }
    }
}

/// Result of one run: what was asked, what was computed, and the checks
/// that certify it.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Certificate {
    pub command: String,
    pub version: String,
    pub inputs_digest: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub summary: Vec<String>,
}

impl Certificate {
    pub fn new(command: &str, inputs: Value, outputs: Value, checks: Vec<Check>, summary: Vec<String>) -> Self {
        let digest = Sha256::digest(serde_json::to_string(&inputs).expect("serializable").as_bytes());
        let pass = checks.iter().all(|c| c.pass);
        Certificate {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            inputs_digest: hex::encode(digest),
            inputs,
            outputs,
            checks,
            pass,
            summary,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("skewpencil {} {}\ninputs sha256 {}\n", self.command, self.version, self.inputs_digest);
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.anchor));
            if !c.pass {
                out.push_str(&format!("     witness {}\n", c.witness));
            }
        }
        out.push_str(if self.pass { "result PASS\n" } else { "result FAIL\n" });
        out
    }
}
