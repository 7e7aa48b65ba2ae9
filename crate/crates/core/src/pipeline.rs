//! Source text to stable models: parse, expand, ground, solve, and drop
//! models that contain an atom together with its strong negation.

use num_bigint::BigInt;
use thiserror::Error;

use crate::ast::CoreProgram;
use crate::desugar::{expand_program, DesugarError};
use crate::formula::{stable_models, BudgetError, Interpretation, SolveConfig};
use crate::grounder::{ground_program, GroundConfig, GroundError, Grounding};
use crate::oracle::is_consistent;
use crate::parser::{parse_program_with, Constants, ParseError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Desugar(#[from] DesugarError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub constants: Constants,
    pub ground: GroundConfig,
    pub solve: SolveConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    /// Consistent stable models, sorted.
    pub models: Vec<Interpretation>,
    /// Stable models removed by the consistency filter.
    pub inconsistent: Vec<Interpretation>,
    pub complete: bool,
}

pub fn core_program(src: &str, constants: &Constants) -> Result<CoreProgram, PipelineError> {
    Ok(expand_program(&parse_program_with(src, constants)?)?)
}

pub fn ground(src: &str, cfg: &Config) -> Result<Grounding, PipelineError> {
    Ok(ground_program(
        &core_program(src, &cfg.constants)?,
        &cfg.ground,
    )?)
}

/// `cfg.solve.max_models` limits the consistent models; the solver limit is
/// widened while filtered models leave the count short.
pub fn answer_sets(src: &str, cfg: &Config) -> Result<Answer, PipelineError> {
    let grounding = ground(src, cfg)?;
    let wanted = cfg.solve.max_models;
    let mut solve = cfg.solve.clone();
    loop {
        let outcome = stable_models(grounding.formulas.iter().cloned(), &solve)?;
        let (mut models, inconsistent): (Vec<_>, Vec<_>) =
            outcome.models.into_iter().partition(is_consistent);
        let enough = wanted.is_some_and(|w| models.len() >= w);
        if outcome.complete || enough {
            if let Some(w) = wanted {
                models.truncate(w);
            }
            return Ok(Answer {
                models,
                inconsistent,
                complete: outcome.complete,
            });
        }
        solve.max_models = solve.max_models.map(|m| m.saturating_mul(2).max(1));
    }
}

/// [`answer_sets`] with the constant `n` defined.
pub fn answer_sets_with_n(src: &str, n: i64, cfg: &Config) -> Result<Answer, PipelineError> {
    let mut cfg = cfg.clone();
    cfg.constants.insert("n".to_string(), BigInt::from(n));
    answer_sets(src, &cfg)
}
