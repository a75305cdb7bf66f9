use serde::{Deserialize, Serialize};

use crate::model::ModelError;

/// Tolerances and size caps shared by the planner, verifier and CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tol: f64,
    /// Largest register for which the sign-pattern LP is solved.
    pub lp_cap_n: usize,
    /// Largest edge count for exact coloring searches.
    pub exact_coloring_edge_cap: usize,
    pub sim_cap_diagonal: usize,
    pub sim_cap_general: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-9,
            lp_cap_n: 16,
            exact_coloring_edge_cap: 12,
            sim_cap_diagonal: 10,
            sim_cap_general: 6,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(ModelError::Invalid(format!("tol must be positive, got {}", self.tol)));
        }
        let caps = [
            ("lp_cap_n", self.lp_cap_n),
            ("exact_coloring_edge_cap", self.exact_coloring_edge_cap),
            ("sim_cap_diagonal", self.sim_cap_diagonal),
            ("sim_cap_general", self.sim_cap_general),
        ];
        for (name, v) in caps {
            if v < 2 {
                return Err(ModelError::Invalid(format!("{name} must be at least 2, got {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(Config::default().validate().is_ok());
    }

    #[test]
    fn rejects_small_caps_and_bad_tol() {
        let c = Config {
            lp_cap_n: 1,
            ..Config::default()
        };
        assert!(c.validate().is_err());
        let c = Config {
            tol: 0.0,
            ..Config::default()
        };
        assert!(c.validate().is_err());
    }
}
