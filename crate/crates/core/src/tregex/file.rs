//! Pattern files: one pattern per logical line. A trailing `\` continues the
//! pattern on the next line, `#` starts a comment line, blank lines are skipped.

use thiserror::Error;

use super::{compile_pattern, CompileError, Pattern};

#[derive(Debug, Clone, PartialEq)]
pub struct PatternLine {
    /// 1-based line where the pattern starts.
    pub line: usize,
    pub source: String,
    pub pattern: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternFileError {
    #[error("line {line}: {error}")]
    Compile { line: usize, error: CompileError },
    #[error("line {line}: continuation at end of file")]
    DanglingContinuation { line: usize },
}

impl PatternFileError {
    pub fn line(&self) -> usize {
        match self {
            PatternFileError::Compile { line, .. } | PatternFileError::DanglingContinuation { line } => *line,
        }
    }
}

pub fn parse_pattern_file(text: &str) -> Result<Vec<PatternLine>, PatternFileError> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if pending.is_none() && (trimmed.is_empty() || trimmed.starts_with('#')) {
            continue;
        }
        let (body, continues) = match trimmed.strip_suffix('\\') {
            Some(body) => (body.trim_end(), true),
            None => (trimmed, false),
        };
        let (start, mut source) = pending.take().unwrap_or((line_no, String::new()));
        if !source.is_empty() && !body.is_empty() {
            source.push(' ');
        }
        source.push_str(body);
        if continues {
            pending = Some((start, source));
            continue;
        }
        let pattern = compile_pattern(&source).map_err(|error| PatternFileError::Compile { line: start, error })?;
        out.push(PatternLine { line: start, source, pattern });
    }
    if let Some((line, _)) = pending {
        return Err(PatternFileError::DanglingContinuation { line });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blanks_and_continuations() {
        let text = "# header\n\nNP < DT\n(S < NP \\\n   < VP)\n  # trailing comment\nVP\n";
        let lines = parse_pattern_file(text).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].line, 4);
        assert_eq!(lines[1].source, "(S < NP < VP)");
        assert_eq!(lines[2].line, 7);
    }

    #[test]
    fn compile_error_reports_start_line() {
        let err = parse_pattern_file("NP\n\nS < \\\n  (VP <\n").unwrap_err();
        assert_eq!(err.line(), 3);
    }

    #[test]
    fn dangling_continuation() {
        let err = parse_pattern_file("NP < \\\n").unwrap_err();
        assert_eq!(err, PatternFileError::DanglingContinuation { line: 1 });
    }
}
