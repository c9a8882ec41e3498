use std::io::Read;
use std::path::Path;

use lambdac::models::{KleisliModel, KleisliValues, ModelConfig};
use lambdac::syntax::{parse_signature, parse_term_file, Definition, Signature};
use thiserror::Error;

use crate::TermInput;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: String,
        #[source]
        source: lambdac::Error,
    },
    #[error(transparent)]
    Lib(#[from] lambdac::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<String> {
    let shown = path.display().to_string();
    if shown == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::Io { path: shown, source })?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown, source })
}

pub fn signature(path: Option<&Path>) -> CliResult<Signature> {
    match path {
        None => Ok(Signature::new()),
        Some(p) => parse_signature(&read_file(p)?).map_err(|source| CliError::Input {
            path: p.display().to_string(),
            source,
        }),
    }
}

/// The signature (file declarations included) and the definitions.
pub fn terms(input: &TermInput) -> CliResult<(Signature, Vec<Definition>)> {
    let sig = signature(input.sig.as_deref())?;
    let text = read_file(&input.file)?;
    parse_term_file(&text, &sig).map_err(|source| CliError::Input {
        path: input.file.display().to_string(),
        source,
    })
}

pub fn find<'a>(defs: &'a [Definition], name: &str) -> CliResult<&'a Definition> {
    defs.iter()
        .find(|d| d.name == name)
        .ok_or_else(|| CliError::Usage(format!("no definition named `{name}`")))
}

/// A built-in id (`maybe2`, `writer3`, …) or a JSON model file.
pub fn model_config(spec: &str) -> CliResult<ModelConfig> {
    if let Some(config) = ModelConfig::builtin_id(spec) {
        return Ok(config);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "unknown model `{spec}`: use maybeN, writerN, powersetN or a JSON file"
        )));
    }
    ModelConfig::from_json(&read_file(path)?).map_err(|source| CliError::Input {
        path: spec.to_string(),
        source,
    })
}

/// The operad a word file names in its header.
pub enum WordOperad {
    /// `valuesN`: functions on N atoms.
    Values(KleisliValues),
    /// A model id or file: its Kleisli computations.
    Comps(KleisliModel),
}

pub fn word_operad(over: &str) -> CliResult<WordOperad> {
    if let Some(k) = over.strip_prefix("values") {
        let k = if k.is_empty() { 2 } else { k.parse().map_err(|_| CliError::Usage(format!("bad operad `{over}`")))? };
        if !(1..=6).contains(&k) {
            return Err(CliError::Usage(format!("`{over}`: between 1 and 6 atoms")));
        }
        return Ok(WordOperad::Values(KleisliValues::new(k)));
    }
    let structure = lambdac::models::build_kleisli_model(&model_config(over)?)?;
    Ok(WordOperad::Comps(structure.freyd))
}
