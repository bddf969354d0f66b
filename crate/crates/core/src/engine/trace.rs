use std::fmt;
use std::io::{self, Write};

/// Header line of the per-iteration history CSV.
pub const HISTORY_CSV_HEADER: &str = "iter,objective,optimality,feasibility,step_norm";

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Converged,
    BudgetExhausted,
    Diverged,
    EvaluationError(String),
}

impl SolveStatus {
    /// Stable identifier used in CSV output and status lines.
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::BudgetExhausted => "budget_exhausted",
            SolveStatus::Diverged => "diverged",
            SolveStatus::EvaluationError(_) => "evaluation_error",
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, SolveStatus::Converged)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of the convergence history. `step_norm` is the length of the
/// (clipped) step that produced this iterate; it is 0 for the initial point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub objective: f64,
    pub optimality: f64,
    pub feasibility: f64,
    pub step_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub status: SolveStatus,
    /// Number of residual evaluations issued during the solve.
    pub residual_evaluations: usize,
}

impl IterationTrace {
    /// Number of steps taken.
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// Smallest optimality norm seen over the run.
    pub fn best_optimality(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.optimality)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest feasibility norm seen over the run.
    pub fn best_feasibility(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.feasibility)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{HISTORY_CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{:e},{:e},{:e},{:e}",
                r.iter, r.objective, r.optimality, r.feasibility, r.step_norm
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let trace = IterationTrace {
            records: vec![
                IterationRecord {
                    iter: 0,
                    objective: 4.5,
                    optimality: 3.0,
                    feasibility: 0.0,
                    step_norm: 0.0,
                },
                IterationRecord {
                    iter: 1,
                    objective: 0.125,
                    optimality: 0.5,
                    feasibility: 0.0,
                    step_norm: 1.0,
                },
            ],
            status: SolveStatus::BudgetExhausted,
            residual_evaluations: 2,
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(HISTORY_CSV_HEADER));
        assert_eq!(lines.next(), Some("0,4.5e0,3e0,0e0,0e0"));
        assert_eq!(lines.count(), 1);
        assert_eq!(trace.iterations(), 1);
        assert_eq!(trace.best_optimality(), 0.5);
    }

    #[test]
    fn status_names() {
        assert_eq!(SolveStatus::Converged.to_string(), "converged");
        assert_eq!(SolveStatus::BudgetExhausted.to_string(), "budget_exhausted");
        assert_eq!(SolveStatus::Diverged.to_string(), "diverged");
        assert_eq!(
            SolveStatus::EvaluationError("x".into()).to_string(),
            "evaluation_error"
        );
    }
}
