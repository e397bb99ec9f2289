//! Integer label files: the primary ingestion format.
//!
//! ```text
//! # optional comments and blank lines
//! 2 3        <- header: ell m
//! 0 0 1      <- one clustering per line, m labels in 0..ell
//! 0 1 1      <- separators: spaces and/or commas
//! ```

use std::path::Path;

use meanpart_core::{GroundTruth, LabeledPartition, Partition, Sample};

use crate::error::{CliError, CliResult};

/// Parsed header and label rows.
#[derive(Debug)]
pub struct LabelFile {
    pub ell: usize,
    #[cfg_attr(not(test), allow(dead_code))]
    pub m: usize,
    pub rows: Vec<Vec<usize>>,
}

pub fn parse_label_text(text: &str) -> CliResult<LabelFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(CliError::parse(
                        line_no,
                        format!("expected header `ell m`, got {:?}", line),
                    ));
                }
                let ell = fields[0]
                    .parse::<usize>()
                    .map_err(|e| CliError::parse(line_no, format!("bad ell: {e}")))?;
                let m = fields[1]
                    .parse::<usize>()
                    .map_err(|e| CliError::parse(line_no, format!("bad m: {e}")))?;
                if ell == 0 || m == 0 {
                    return Err(CliError::parse(line_no, "ell and m must be positive"));
                }
                header = Some((ell, m));
            }
            Some((ell, m)) => {
                if fields.len() != m {
                    return Err(CliError::parse(
                        line_no,
                        format!("expected {m} labels, got {}", fields.len()),
                    ));
                }
                let mut labels = Vec::with_capacity(m);
                for f in fields {
                    let label = f
                        .parse::<usize>()
                        .map_err(|e| CliError::parse(line_no, format!("bad label `{f}`: {e}")))?;
                    if label >= ell {
                        return Err(CliError::new(
                            "label-out-of-range",
                            format!("line {line_no}: label {label} not below ell = {ell}"),
                        ));
                    }
                    labels.push(label);
                }
                rows.push(labels);
            }
        }
    }
    let (ell, m) = header.ok_or_else(|| CliError::parse(0, "missing `ell m` header"))?;
    if rows.is_empty() {
        return Err(CliError::parse(0, "no clusterings after the header"));
    }
    Ok(LabelFile { ell, m, rows })
}

/// Parse a label file into a sample of canonicalized hard partitions.
pub fn parse_labels(path: &Path) -> CliResult<Sample> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_label_text(&text)?;
    let elements = file
        .rows
        .iter()
        .map(|labels| Partition::from_labels(file.ell, labels))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sample::new(elements)?)
}

/// Parse a ground truth: the first clustering of the file, with the file's
/// labeling kept as the fixed representative.
pub fn parse_truth(path: &Path) -> CliResult<GroundTruth> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_label_text(&text)?;
    let rep = LabeledPartition::from_labels(file.ell, &file.rows[0])?;
    Ok(GroundTruth::with_representative(rep)?)
}

/// Render a hard sample back to the label-file format (canonical labels).
#[cfg_attr(not(test), allow(dead_code))]
pub fn write_labels(sample: &Sample) -> CliResult<String> {
    let mut out = format!("{} {}\n", sample.ell(), sample.m());
    for p in sample.elements() {
        let labels = p.canonical().labels().ok_or_else(|| {
            CliError::new(
                "hard-partition-required",
                "label export requires hard partitions",
            )
        })?;
        let line: Vec<String> = labels.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}
