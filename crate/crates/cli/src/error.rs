use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    /// A key whose value is malformed or outside its allowed range.
    #[error("{}", field_message(.key, *.line, .message))]
    Field {
        key: String,
        line: Option<usize>,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] myers_core::Error),
}

fn field_message(key: &str, line: Option<usize>, message: &str) -> String {
    match line {
        Some(line) => format!("config line {line}: `{key}`: {message}"),
        None => format!("`{key}`: {message}"),
    }
}
