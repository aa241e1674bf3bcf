// SPDX-License-Identifier: Apache-2.0

//! Flat `key=value` run reports, one pair per line.

use std::fmt;
use std::time::Instant;

use apsp_core::StretchAudit;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub algorithm: Option<String>,
    /// `r`, `p`, `eps`, `k`, `seed` and friends, as given or defaulted.
    pub params: Vec<(String, String)>,
    /// Wall time per phase in seconds.
    pub phases: Vec<(String, f64)>,
    /// Table sizes: entry counts and bytes.
    pub sizes: Vec<(String, u64)>,
    pub audit: Option<AuditSummary>,
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditSummary {
    pub contract: String,
    pub pairs: u64,
    pub max_ratio: f64,
    pub max_surplus: u64,
    pub violations: u64,
}

impl AuditSummary {
    pub fn new(contract: impl fmt::Display, a: &StretchAudit) -> Self {
        AuditSummary {
            contract: contract.to_string(),
            pairs: a.pairs,
            max_ratio: a.max_ratio,
            max_surplus: a.max_surplus,
            violations: a.violations,
        }
    }
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn size(&mut self, key: &str, value: usize) {
        self.sizes.push((key.into(), value as u64));
    }

    /// Runs `f` and records its wall time under `phase`.
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.phases
            .push((phase.into(), start.elapsed().as_secs_f64()));
        out
    }

    pub fn violations(&self) -> u64 {
        self.audit.as_ref().map_or(0, |a| a.violations)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut r = RunReport::default();
        let mut audit: Vec<(&str, &str)> = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("not a key=value line: {line:?}"))?;
            let float = |v: &str| v.parse::<f64>().map_err(|e| format!("{key}: {e}"));
            let int = |v: &str| v.parse::<u64>().map_err(|e| format!("{key}: {e}"));
            match key {
                "command" => r.command = value.into(),
                "algorithm" => r.algorithm = Some(value.into()),
                "output" => r.output = Some(value.into()),
                _ => {
                    if let Some(k) = key.strip_prefix("param.") {
                        r.params.push((k.into(), value.into()));
                    } else if let Some(k) = key.strip_prefix("time.") {
                        r.phases.push((k.into(), float(value)?));
                    } else if let Some(k) = key.strip_prefix("size.") {
                        r.sizes.push((k.into(), int(value)?));
                    } else if let Some(k) = key.strip_prefix("audit.") {
                        audit.push((k, value));
                    } else {
                        return Err(format!("unknown key {key:?}"));
                    }
                }
            }
        }
        if !audit.is_empty() {
            let get = |k: &str| {
                audit
                    .iter()
                    .find(|(a, _)| *a == k)
                    .map(|(_, v)| *v)
                    .ok_or_else(|| format!("missing audit.{k}"))
            };
            let int = |k: &str| {
                get(k)?
                    .parse::<u64>()
                    .map_err(|e| format!("audit.{k}: {e}"))
            };
            r.audit = Some(AuditSummary {
                contract: get("contract")?.into(),
                pairs: int("pairs")?,
                max_ratio: get("max_ratio")?
                    .parse()
                    .map_err(|e| format!("audit.max_ratio: {e}"))?,
                max_surplus: int("max_surplus")?,
                violations: int("violations")?,
            });
        }
        Ok(r)
    }
}

// f64 Display is the shortest string that parses back to the same value,
// which is what makes the record lossless.
impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command={}", self.command)?;
        if let Some(a) = &self.algorithm {
            writeln!(f, "algorithm={a}")?;
        }
        for (k, v) in &self.params {
            writeln!(f, "param.{k}={v}")?;
        }
        for (k, secs) in &self.phases {
            writeln!(f, "time.{k}={secs}")?;
        }
        for (k, v) in &self.sizes {
            writeln!(f, "size.{k}={v}")?;
        }
        if let Some(a) = &self.audit {
            writeln!(f, "audit.contract={}", a.contract)?;
            writeln!(f, "audit.pairs={}", a.pairs)?;
            writeln!(f, "audit.max_ratio={}", a.max_ratio)?;
            writeln!(f, "audit.max_surplus={}", a.max_surplus)?;
            writeln!(f, "audit.violations={}", a.violations)?;
        }
        if let Some(o) = &self.output {
            writeln!(f, "output={o}")?;
        }
        Ok(())
    }
}
