use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod code {
    pub const PARSE: i32 = 1;
    pub const STRUCTURE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const VIOLATION: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Load {
        path: PathBuf,
        source: mrp_core::Error,
    },
    #[error("{}: not unichain, recurrent classes {}", path.display(), format_classes(classes))]
    NotUnichain {
        path: PathBuf,
        classes: Vec<Vec<String>>,
    },
    /// A failure inside one of the analysis stages.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: mrp_core::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_classes(classes: &[Vec<String>]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" and ")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use mrp_core::Error as E;
        match self {
            CliError::NotUnichain { .. } => code::STRUCTURE,
            CliError::Load { source, .. } | CliError::Stage { source, .. } => match source {
                E::NotUnichain { .. } => code::STRUCTURE,
                E::SingularSystem { .. }
                | E::ConstancyViolation { .. }
                | E::InfeasibleRequest(_) => code::NUMERICAL,
                _ => code::PARSE,
            },
            CliError::Usage(_) | CliError::Io(_) | CliError::Json(_) => code::PARSE,
        }
    }
}

/// Attaches the stage name to core errors.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError>;
}

impl<T> StageExt<T> for mrp_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Stage { stage, source })
    }
}
