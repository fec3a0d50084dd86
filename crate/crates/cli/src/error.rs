use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

/// Failures of a CLI invocation, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// The configuration or an input file does not exist.
    Missing(PathBuf),
    /// Offending keys, or messages naming them.
    Schema(Vec<String>),
    /// The run itself broke down; details were written to `diagnostics`.
    Numerical { message: String, diagnostics: PathBuf },
    Other(String),
}

impl CliError {
    pub fn field(key: &str, detail: impl fmt::Display) -> Self {
        CliError::Schema(vec![format!("{key}: {detail}")])
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Missing(_) => 2,
            CliError::Schema(_) => 3,
            CliError::Numerical { .. } => 4,
            CliError::Other(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Missing(path) => write!(f, "no such file: {}", path.display()),
            CliError::Schema(keys) => {
                writeln!(f, "configuration rejected, offending keys:")?;
                for key in keys {
                    writeln!(f, "  {key}")?;
                }
                Ok(())
            }
            CliError::Numerical { message, diagnostics } => {
                write!(f, "numerical failure: {message}\ndiagnostics: {}", diagnostics.display())
            }
            CliError::Other(msg) => f.write_str(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(format!("i/o error: {e}"))
    }
}
