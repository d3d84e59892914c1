//! Parser for the structured output stream, used to check that emitted
//! output maps back onto the transcript and summary data losslessly.

use std::collections::BTreeMap;

use qsdc_core::Transcript;

/// A structured invocation's output: per-run transcripts plus the summary
/// record's key/value fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedOutput {
    pub runs: Vec<(u32, Transcript)>,
    pub summary: BTreeMap<String, String>,
}

/// Parses the stream emitted under `--format structured`: any number of
/// `run <index>` blocks of transcript event lines, then one `summary` line.
pub fn parse_structured(text: &str) -> Result<ParsedOutput, String> {
    let mut runs: Vec<(u32, String)> = Vec::new();
    let mut summary: Option<BTreeMap<String, String>> = None;
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("run ") {
            let index: u32 = rest
                .trim()
                .parse()
                .map_err(|_| format!("line {lineno}: bad run index '{rest}'"))?;
            runs.push((index, String::new()));
        } else if let Some(rest) = line.strip_prefix("summary ") {
            if summary.is_some() {
                return Err(format!("line {lineno}: second summary line"));
            }
            let mut fields = BTreeMap::new();
            for pair in rest.split_whitespace() {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| format!("line {lineno}: summary field '{pair}' lacks '='"))?;
                fields.insert(k.to_string(), v.to_string());
            }
            summary = Some(fields);
        } else if line.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            let (_, buf) = runs
                .last_mut()
                .ok_or_else(|| format!("line {lineno}: event before any run header"))?;
            buf.push_str(line);
            buf.push('\n');
        } else {
            return Err(format!("line {lineno}: unrecognized line '{line}'"));
        }
    }
    let summary = summary.ok_or("missing summary line")?;
    let mut parsed_runs = Vec::with_capacity(runs.len());
    for (index, buf) in runs {
        let transcript = Transcript::parse(&buf).map_err(|e| format!("run {index}: {e}"))?;
        parsed_runs.push((index, transcript));
    }
    Ok(ParsedOutput {
        runs: parsed_runs,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_runs_and_summary() {
        let text = "run 0\n\
                    0 qubit_sent alice bob B\n\
                    1 receipt_ack bob\n\
                    run 1\n\
                    0 qubit_sent alice bob B\n\
                    summary command=teleport seed=42 trials=2\n";
        let parsed = parse_structured(text).unwrap();
        assert_eq!(parsed.runs.len(), 2);
        assert_eq!(parsed.runs[0].1.len(), 2);
        assert_eq!(parsed.runs[1].1.len(), 1);
        assert_eq!(
            parsed.summary.get("command").map(String::as_str),
            Some("teleport")
        );
        assert_eq!(parsed.summary.get("trials").map(String::as_str), Some("2"));
    }

    #[test]
    fn rejects_streams_without_summary() {
        assert!(parse_structured("run 0\n0 receipt_ack bob\n").is_err());
    }

    #[test]
    fn rejects_orphan_events() {
        assert!(parse_structured("0 receipt_ack bob\nsummary command=x\n").is_err());
    }
}
