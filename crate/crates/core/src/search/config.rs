use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Width of both the main and the auxiliary beam.
    pub beam_width: usize,
    /// Quantile cut points per numeric column.
    pub n_cutpoints: usize,
    /// Consecutive non-improving beam iterations before rule growth stops.
    pub k_stop: usize,
    pub seed: u64,
    /// Cluster growth candidates by coverage ratio before selection.
    pub patience_diversity: bool,
    /// Require every growth step to pass the MDL local test.
    pub local_test: bool,
    /// Rank the auxiliary beam by the complementary score when it is cut
    /// back to the beam width (instead of the learning speed).
    pub auxiliary_rank_complementary: bool,
    pub max_rules: Option<usize>,
    pub score_tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            beam_width: 10,
            n_cutpoints: 20,
            k_stop: 3,
            seed: 0,
            patience_diversity: true,
            local_test: true,
            auxiliary_rank_complementary: false,
            max_rules: None,
            score_tolerance: 1e-10,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.beam_width == 0 {
            return fail("beam width must be at least 1");
        }
        if self.n_cutpoints == 0 {
            return fail("number of cut points must be at least 1");
        }
        if self.k_stop == 0 {
            return fail("k_stop must be at least 1");
        }
        if self.score_tolerance.is_nan() || self.score_tolerance < 0.0 {
            return fail("score tolerance must be nonnegative");
        }
        Ok(())
    }

    /// Applies `key: value` lines (blank lines and `#` comments skipped).
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::InvalidConfig(format!("line {}: {reason}", lineno + 1));
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err("expected `key: value`".into()))?;
            let value = value.trim();
            let key = key.trim().replace('-', "_");
            match key.as_str() {
                "beam_width" => self.beam_width = parse(value).map_err(err)?,
                "n_cutpoints" => self.n_cutpoints = parse(value).map_err(err)?,
                "k_stop" => self.k_stop = parse(value).map_err(err)?,
                "seed" => self.seed = parse(value).map_err(err)?,
                "patience_diversity" => self.patience_diversity = parse(value).map_err(err)?,
                "local_test" => self.local_test = parse(value).map_err(err)?,
                "auxiliary_rank_complementary" => {
                    self.auxiliary_rank_complementary = parse(value).map_err(err)?
                }
                "max_rules" => self.max_rules = Some(parse(value).map_err(err)?),
                "score_tolerance" => self.score_tolerance = parse(value).map_err(err)?,
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(())
    }
}

fn parse<T: FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("cannot parse `{value}`"))
}
