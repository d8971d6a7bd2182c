//! Personality statement catalogs and persona corpora.
//!
//! The built-in catalog ships five extravert and five introvert
//! statements; alternative catalogs (other dimensions, other languages)
//! load from a TOML document. Personas load from either a plain-text
//! block format or line-delimited JSON.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::domain::{
    BigFiveAxis, DomainError, Persona, PersonalityDimension, PersonalitySpec,
    PersonalityStatement, Pole,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed statement catalog: {0}")]
    Format(String),
    #[error("dimension {0} declares an empty statement list")]
    EmptyDimension(PersonalityDimension),
    #[error("dimension {0} is not in the catalog")]
    MissingDimension(PersonalityDimension),
    #[error("persona format: {0}")]
    PersonaFormat(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Statements grouped by personality dimension.
#[derive(Debug, Clone)]
pub struct StatementCatalog {
    entries: BTreeMap<PersonalityDimension, Vec<PersonalityStatement>>,
}

impl StatementCatalog {
    pub fn new(
        entries: BTreeMap<PersonalityDimension, Vec<PersonalityStatement>>,
    ) -> Result<Self, CatalogError> {
        for (dim, statements) in &entries {
            if statements.is_empty() {
                return Err(CatalogError::EmptyDimension(*dim));
            }
        }
        Ok(Self { entries })
    }

    /// The built-in English catalog: five extravert and five introvert
    /// statements.
    pub fn builtin() -> Self {
        let extravert = [
            "I am the life of the party.",
            "I feel comfortable around people.",
            "I start conversations.",
            "I talk to a lot of different people at parties.",
            "I don't mind being the center of attention.",
        ];
        let introvert = [
            "I don't talk a lot.",
            "I keep in the background.",
            "I have little to say.",
            "I don't like to draw attention to myself.",
            "I am quiet around strangers.",
        ];
        let mut entries = BTreeMap::new();
        entries.insert(
            PersonalityDimension::extravert(),
            extravert
                .iter()
                .map(|t| PersonalityStatement::new(PersonalityDimension::extravert(), *t).unwrap())
                .collect(),
        );
        entries.insert(
            PersonalityDimension::introvert(),
            introvert
                .iter()
                .map(|t| PersonalityStatement::new(PersonalityDimension::introvert(), *t).unwrap())
                .collect(),
        );
        Self { entries }
    }

    pub fn entries(&self) -> &BTreeMap<PersonalityDimension, Vec<PersonalityStatement>> {
        &self.entries
    }

    pub fn statements(&self, dim: PersonalityDimension) -> Option<&[PersonalityStatement]> {
        self.entries.get(&dim).map(|v| v.as_slice())
    }

    pub fn contains(&self, dim: PersonalityDimension) -> bool {
        self.entries.contains_key(&dim)
    }
}

/// Loads a statement catalog from its TOML document form:
///
/// ```toml
/// [extraversion]
/// high = ["I am the life of the party.", "..."]
/// low = ["I don't talk a lot.", "..."]
/// ```
pub fn load_statements(source: &str) -> Result<StatementCatalog, CatalogError> {
    type RawCatalog = BTreeMap<String, BTreeMap<String, Vec<String>>>;
    let raw: RawCatalog =
        toml::from_str(source).map_err(|e| CatalogError::Format(e.to_string()))?;
    let mut entries = BTreeMap::new();
    for (axis_name, poles) in raw {
        let axis: BigFiveAxis = axis_name
            .parse()
            .map_err(|_| CatalogError::Format(format!("unknown axis '{axis_name}'")))?;
        for (pole_name, texts) in poles {
            let pole = match pole_name.as_str() {
                "high" => Pole::High,
                "low" => Pole::Low,
                other => {
                    return Err(CatalogError::Format(format!(
                        "unknown pole '{other}' under axis '{axis_name}'"
                    )))
                }
            };
            let dim = PersonalityDimension::new(axis, pole);
            if texts.is_empty() {
                return Err(CatalogError::EmptyDimension(dim));
            }
            let statements = texts
                .into_iter()
                .map(|t| PersonalityStatement::new(dim, t))
                .collect::<Result<Vec<_>, _>>()?;
            entries.insert(dim, statements);
        }
    }
    StatementCatalog::new(entries)
}

/// Loads a statement catalog from a TOML file on disk.
pub fn load_statements_file(path: &Path) -> Result<StatementCatalog, CatalogError> {
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_statements(&text)
}

/// Uniformly samples one statement for the given dimension. Sampling is
/// with replacement across calls; the same seed yields the same pick.
pub fn sample_statement<R: Rng + ?Sized>(
    catalog: &StatementCatalog,
    dim: PersonalityDimension,
    rng: &mut R,
) -> Result<PersonalityStatement, CatalogError> {
    let statements = catalog
        .statements(dim)
        .ok_or(CatalogError::MissingDimension(dim))?;
    Ok(statements
        .choose(rng)
        .expect("catalog dimensions are non-empty")
        .clone())
}

/// Samples one statement per person and returns the single-dimension
/// personality assignment for a dialogue session.
pub fn assign_pair<R: Rng + ?Sized>(
    catalog: &StatementCatalog,
    dim_a: PersonalityDimension,
    dim_b: PersonalityDimension,
    rng: &mut R,
) -> Result<PersonalitySpec, CatalogError> {
    let a = sample_statement(catalog, dim_a, rng)?;
    let b = sample_statement(catalog, dim_b, rng)?;
    Ok(PersonalitySpec::single(a, b))
}

/// A loaded persona corpus plus non-fatal validation warnings.
#[derive(Debug, Clone)]
pub struct PersonaCorpus {
    pub personas: Vec<Persona>,
    pub warnings: Vec<String>,
}

/// The number of profile sentences below which a persona draws a warning.
pub const PERSONA_RECOMMENDED_MIN: usize = 5;

/// Loads personas from a corpus file. Files ending in `.jsonl`, `.ndjson`
/// or `.json` are read as line-delimited JSON objects
/// `{"id": optional string, "persona": ["...", ...]}`; anything else is
/// read as plain text with one sentence per line and personas separated
/// by blank lines.
///
/// Personas with fewer than five sentences are accepted with a warning;
/// `strict` turns those warnings into errors.
pub fn load_personas(path: &Path, strict: bool) -> Result<PersonaCorpus, CatalogError> {
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let jsonl = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("jsonl") | Some("ndjson") | Some("json")
    ) || text.trim_start().starts_with('{');
    let personas = if jsonl {
        parse_personas_jsonl(&text)?
    } else {
        parse_personas_text(&text)?
    };
    let mut warnings = Vec::new();
    for persona in &personas {
        let len = persona.profiles().len();
        if len < PERSONA_RECOMMENDED_MIN {
            let message = format!(
                "persona '{}' has {} profile sentence(s); {} or more are recommended",
                persona.id, len, PERSONA_RECOMMENDED_MIN
            );
            if strict {
                return Err(CatalogError::PersonaFormat(message));
            }
            warnings.push(message);
        }
    }
    Ok(PersonaCorpus { personas, warnings })
}

fn parse_personas_text(text: &str) -> Result<Vec<Persona>, CatalogError> {
    let mut personas = Vec::new();
    let mut block: Vec<String> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            if !block.is_empty() {
                personas.push(Persona::new(format!("p{:04}", personas.len()), std::mem::take(&mut block))?);
            }
        } else {
            block.push(line.to_string());
        }
    }
    if !block.is_empty() {
        personas.push(Persona::new(format!("p{:04}", personas.len()), block)?);
    }
    Ok(personas)
}

#[derive(Deserialize)]
struct PersonaLine {
    id: Option<String>,
    persona: Vec<String>,
}

fn parse_personas_jsonl(text: &str) -> Result<Vec<Persona>, CatalogError> {
    let mut personas = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: PersonaLine = serde_json::from_str(line).map_err(|e| {
            CatalogError::PersonaFormat(format!("line {}: {}", lineno + 1, e))
        })?;
        let id = parsed
            .id
            .unwrap_or_else(|| format!("p{:04}", personas.len()));
        personas.push(Persona::new(id, parsed.persona)?);
    }
    Ok(personas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::io::Write;

    #[test]
    fn builtin_catalog_matches_published_statement_lists() {
        let cat = StatementCatalog::builtin();
        let ext = cat.statements(PersonalityDimension::extravert()).unwrap();
        let int = cat.statements(PersonalityDimension::introvert()).unwrap();
        assert_eq!(ext.len(), 5);
        assert_eq!(int.len(), 5);
        assert_eq!(ext[0].text(), "I am the life of the party.");
        assert_eq!(ext[4].text(), "I don't mind being the center of attention.");
        assert_eq!(int[0].text(), "I don't talk a lot.");
        assert_eq!(int[4].text(), "I am quiet around strangers.");
    }

    #[test]
    fn load_statements_round_trips_a_singleton() {
        let cat = load_statements("[openness]\nhigh = [\"I have a vivid imagination.\"]\n").unwrap();
        let dim = PersonalityDimension::new(BigFiveAxis::Openness, Pole::High);
        assert_eq!(cat.statements(dim).unwrap().len(), 1);
    }

    #[test]
    fn load_statements_rejects_empty_list_and_bad_toml() {
        assert!(matches!(
            load_statements("[extraversion]\nhigh = []\n"),
            Err(CatalogError::EmptyDimension(_))
        ));
        assert!(matches!(
            load_statements("not toml ["),
            Err(CatalogError::Format(_))
        ));
        assert!(matches!(
            load_statements("[charisma]\nhigh = [\"x\"]\n"),
            Err(CatalogError::Format(_))
        ));
    }

    #[test]
    fn sample_statement_stays_in_catalog_and_is_seed_deterministic() {
        let cat = StatementCatalog::builtin();
        let dim = PersonalityDimension::extravert();
        let texts: Vec<&str> = cat.statements(dim).unwrap().iter().map(|s| s.text()).collect();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picked = sample_statement(&cat, dim, &mut rng).unwrap();
            assert!(texts.contains(&picked.text()));
            let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
            let picked2 = sample_statement(&cat, dim, &mut rng2).unwrap();
            assert_eq!(picked, picked2);
        }
    }

    #[test]
    fn single_statement_catalog_always_returns_it() {
        let cat = load_statements("[extraversion]\nlow = [\"I keep in the background.\"]\n").unwrap();
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picked = sample_statement(&cat, PersonalityDimension::introvert(), &mut rng).unwrap();
            assert_eq!(picked.text(), "I keep in the background.");
        }
    }

    #[test]
    fn missing_dimension_is_an_error() {
        let cat = load_statements("[extraversion]\nhigh = [\"x\"]\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_statement(&cat, PersonalityDimension::introvert(), &mut rng),
            Err(CatalogError::MissingDimension(_))
        ));
        assert!(matches!(
            assign_pair(
                &cat,
                PersonalityDimension::extravert(),
                PersonalityDimension::introvert(),
                &mut rng
            ),
            Err(CatalogError::MissingDimension(_))
        ));
    }

    #[test]
    fn assign_pair_builds_a_single_dimension_spec() {
        let cat = StatementCatalog::builtin();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = assign_pair(
            &cat,
            PersonalityDimension::extravert(),
            PersonalityDimension::introvert(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(spec.n(), 1);
        assert_eq!(spec.dim_a(), PersonalityDimension::extravert());
        assert_eq!(spec.dim_b(), PersonalityDimension::introvert());
    }

    #[test]
    fn plain_text_personas_split_on_blank_lines() {
        let mut f = tempfile::NamedTempFile::with_suffix(".txt").unwrap();
        write!(
            f,
            "I love travelling.\nI am a nurse.\n\nI love to read.\nI enjoy video games.\n"
        )
        .unwrap();
        let corpus = load_personas(f.path(), false).unwrap();
        assert_eq!(corpus.personas.len(), 2);
        assert_eq!(corpus.personas[0].id, "p0000");
        assert_eq!(corpus.personas[0].profiles().len(), 2);
        assert_eq!(corpus.warnings.len(), 2); // both under five sentences
    }

    #[test]
    fn jsonl_personas_keep_explicit_ids() {
        let mut f = tempfile::NamedTempFile::with_suffix(".jsonl").unwrap();
        writeln!(
            f,
            r#"{{"id":"alpha","persona":["a","b","c","d","e"]}}"#
        )
        .unwrap();
        writeln!(f, r#"{{"persona":["one","two","three","four","five"]}}"#).unwrap();
        let corpus = load_personas(f.path(), false).unwrap();
        assert_eq!(corpus.personas.len(), 2);
        assert_eq!(corpus.personas[0].id, "alpha");
        assert_eq!(corpus.personas[1].id, "p0001");
        assert!(corpus.warnings.is_empty());
    }

    #[test]
    fn strict_mode_rejects_short_personas() {
        let mut f = tempfile::NamedTempFile::with_suffix(".txt").unwrap();
        write!(f, "just one sentence\n").unwrap();
        assert!(matches!(
            load_personas(f.path(), true),
            Err(CatalogError::PersonaFormat(_))
        ));
    }

    #[test]
    fn empty_persona_file_loads_empty_corpus() {
        let f = tempfile::NamedTempFile::with_suffix(".txt").unwrap();
        let corpus = load_personas(f.path(), false).unwrap();
        assert!(corpus.personas.is_empty());
    }

    #[test]
    fn zero_sentence_jsonl_persona_is_rejected() {
        let mut f = tempfile::NamedTempFile::with_suffix(".jsonl").unwrap();
        writeln!(f, r#"{{"id":"empty","persona":[]}}"#).unwrap();
        assert!(load_personas(f.path(), false).is_err());
    }
}
