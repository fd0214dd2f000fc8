use std::io;
use std::path::PathBuf;

use temporepair_core::bench::GenError;
use temporepair_core::explain::ExplainError;
use temporepair_core::kb::ParseError;
use temporepair_core::reasoner::{OracleError, ReasonerError};
use temporepair_core::repair::RepairError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Explain(#[from] ExplainError),
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 3 when a search budget ran out, 1 for an unsatisfiable TBox, else 2.
    pub fn exit_code(&self) -> u8 {
        let budget = |e: &ReasonerError| matches!(e, ReasonerError::Budget(_));
        match self {
            CliError::Reasoner(e) if budget(e) => 3,
            CliError::Explain(ExplainError::Reasoner(e)) if budget(e) => 3,
            CliError::Repair(RepairError::Reasoner(e)) if budget(e) => 3,
            CliError::Repair(RepairError::Explain(ExplainError::Reasoner(e))) if budget(e) => 3,
            CliError::Repair(RepairError::TBoxUnsatisfiable) => 1,
            CliError::Oracle(OracleError::Budget(_) | OracleError::LimitExceeded { .. }) => 3,
            _ => 2,
        }
    }
}
