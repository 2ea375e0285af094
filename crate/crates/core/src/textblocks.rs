use crate::error::ParseError;

/// Splits text into `[label]`-headed sections. Returns, for each entry of
/// `labels`, the numbered lines of its section (empty when absent).
pub(crate) fn split_blocks<'a>(text: &'a str, labels: &[&str]) -> Result<Vec<Vec<(usize, &'a str)>>, ParseError> {
    let mut out: Vec<Vec<(usize, &str)>> = vec![Vec::new(); labels.len()];
    let mut seen = vec![false; labels.len()];
    let mut current: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let pos = labels
                .iter()
                .position(|l| *l == name)
                .ok_or_else(|| ParseError::Polynomial { line: lineno, message: format!("unknown block {name:?}") })?;
            if seen[pos] {
                return Err(ParseError::Polynomial { line: lineno, message: format!("duplicate block {name:?}") });
            }
            seen[pos] = true;
            current = Some(pos);
        } else if !t.is_empty() {
            let pos = current.ok_or_else(|| ParseError::Polynomial {
                line: lineno,
                message: "term outside of a labelled block".into(),
            })?;
            out[pos].push((lineno, line));
        }
    }
    Ok(out)
}
