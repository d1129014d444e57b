use std::fs;
use std::path::Path;

use polardim::pipeline::{
    build_window_network, parse_edge_list, parse_records, InteractionRecord, WindowSpec,
};
use polardim::SparseAdjacency;
use sha2::{Digest, Sha256};

use crate::args::{InputFormat, NetworkArgs};
use crate::error::CliError;

const SHOWN_REJECTS: usize = 5;

pub struct InputFile {
    pub text: String,
    pub digest: String,
}

pub fn read_input(path: &Path) -> Result<InputFile, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{} is not valid UTF-8", path.display())))?;
    Ok(InputFile { text, digest })
}

/// Records are recognised by a JSON object, a four-field tab-separated line
/// or the record header on the first content line.
pub fn detect_format(text: &str) -> InputFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with('{') => InputFormat::Records,
        Some(l) if l.split('\t').count() == 4 => InputFormat::Records,
        Some(l) if l.starts_with("source_user") => InputFormat::Records,
        _ => InputFormat::Edges,
    }
}

pub struct LoadedNetwork {
    pub graph: SparseAdjacency,
    pub digest: String,
}

pub fn load_network(args: &NetworkArgs) -> Result<LoadedNetwork, CliError> {
    let input = read_input(&args.input)?;
    let format = match args.format {
        InputFormat::Auto => detect_format(&input.text),
        f => f,
    };
    let graph = match format {
        InputFormat::Records => {
            let records = load_records(&input.text)?;
            let all = WindowSpec::with_kinds("all", 0, u64::MAX, args.kinds.clone())?;
            build_window_network(&records, &all, args.directed)?
        }
        _ => parse_edge_list(&input.text, args.directed)?,
    };
    Ok(LoadedNetwork {
        graph,
        digest: input.digest,
    })
}

/// Parses interaction records and reports skipped lines on standard error.
pub fn load_records(text: &str) -> Result<Vec<InteractionRecord>, CliError> {
    let parsed = parse_records(text)?;
    for r in parsed.rejects.iter().take(SHOWN_REJECTS) {
        crate::log::warn(&format!("skipped line {}: {}", r.line, r.reason));
    }
    if parsed.rejects.len() > SHOWN_REJECTS {
        crate::log::warn(&format!(
            "skipped {} malformed lines in total",
            parsed.rejects.len()
        ));
    }
    if parsed.records.is_empty() {
        return Err(CliError::Input("no valid interaction records".into()));
    }
    Ok(parsed.records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_formats() {
        assert_eq!(detect_format("a\tb\n"), InputFormat::Edges);
        assert_eq!(detect_format("# c\n1 2\n"), InputFormat::Edges);
        assert_eq!(
            detect_format("{\"source_user\":\"a\"}\n"),
            InputFormat::Records
        );
        assert_eq!(detect_format("a\tb\treply\t3\n"), InputFormat::Records);
        assert_eq!(
            detect_format("source_user target_user kind timestamp\n"),
            InputFormat::Records
        );
    }
}
