use std::fmt;

/// One named check and, on failure, the witness that refutes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub witness: Option<Vec<String>>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<String>) -> Self {
        Check {
            name: name.into(),
            witness: Some(witness),
        }
    }

    pub fn from_outcome(name: impl Into<String>, outcome: Option<Vec<String>>) -> Self {
        Check {
            name: name.into(),
            witness: outcome,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// `PASS <check>` or `FAIL <check> <witness...>`.
    pub fn line(&self) -> String {
        match &self.witness {
            None => format!("PASS {}", self.name),
            Some(w) if w.is_empty() => format!("FAIL {}", self.name),
            Some(w) => format!("FAIL {} {}", self.name, w.join(" ")),
        }
    }
}

/// Ordered list of checks for one subject, plus informational notes that do
/// not affect the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let mut l = c.line();
                if let Some(rest) = l.strip_prefix("PASS ") {
                    l = format!("PASS {}:{}", self.subject, rest);
                } else if let Some(rest) = l.strip_prefix("FAIL ") {
                    l = format!("FAIL {}:{}", self.subject, rest);
                }
                l
            })
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.subject,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "  ok    {}", c.name)?,
                Some(w) => writeln!(f, "  FAIL  {}  witness: ({})", c.name, w.join(", "))?,
            }
        }
        for n in &self.notes {
            writeln!(f, "  note  {n}")?;
        }
        Ok(())
    }
}
