use thiserror::Error;

/// CLI failure with a stable exit code and a machine-readable stderr form.
///
/// 1: I/O failure; 2: input data failed to parse or validate; 3: bad
/// configuration; 4: internal consistency alarm (oracle mismatch).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Data(_) => "data",
            CliError::Config(_) => "config",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Data(_) => 2,
            CliError::Config(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn to_machine_readable(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.to_string() }
        })
        .to_string()
    }
}

impl From<bitarm::dataset::DatasetError> for CliError {
    fn from(e: bitarm::dataset::DatasetError) -> Self {
        use bitarm::dataset::DatasetError::*;
        match e {
            InvalidPercentage(_) | InvalidThreshold(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<bitarm::miner::MineError> for CliError {
    fn from(e: bitarm::miner::MineError) -> Self {
        use bitarm::miner::MineError::*;
        match e {
            InvalidSupport(_) | InvalidMaxK => CliError::Config(e.to_string()),
            EmptyInput => CliError::Data(e.to_string()),
            BitMatrix(inner) => CliError::Internal(inner.to_string()),
        }
    }
}

impl From<bitarm::rules::RulesError> for CliError {
    fn from(e: bitarm::rules::RulesError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<bitarm::synth::SynthError> for CliError {
    fn from(e: bitarm::synth::SynthError) -> Self {
        CliError::Config(e.to_string())
    }
}
