use std::fmt;

use super::{AnalysisError, CampaignReport};

/// Killed mutants over all mutants, kept as an exact ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Score {
    pub kills: u64,
    pub mutants: u64,
}

impl Score {
    /// Fails for an empty campaign, whose score is undefined.
    pub fn new(kills: u64, mutants: u64) -> Result<Score, AnalysisError> {
        if mutants == 0 {
            return Err(AnalysisError::UndefinedScore);
        }
        assert!(kills <= mutants, "{kills} kills out of {mutants} mutants");
        Ok(Score { kills, mutants })
    }

    pub fn ratio(self) -> f64 {
        self.kills as f64 / self.mutants as f64
    }

    /// Percentage in hundredths of a percent, rounded half up.
    pub fn basis_points(self) -> u64 {
        let (k, m) = (self.kills as u128, self.mutants as u128);
        ((20_000 * k + m) / (2 * m)) as u64
    }

    /// `64.71%`
    pub fn percent(self) -> String {
        let bp = self.basis_points();
        format!("{}.{:02}%", bp / 100, bp % 100)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.percent())
    }
}

/// Renders an optional score, `—` when undefined.
pub fn render_score(score: Option<Score>) -> String {
    score.map_or_else(|| "—".to_owned(), Score::percent)
}

/// Overall score of a campaign; classes reported as N/A do not count.
pub fn mutation_score(report: &CampaignReport) -> Result<Score, AnalysisError> {
    let total = report.total();
    Score::new(total.kills_total, total.mutants)
}
