//! Shared domain types and validation logic.
//!
//! Everything here is an immutable value type: safe to clone, share, and
//! send between workers. Construction goes through fallible constructors
//! that enforce the invariants; deserialization routes through the same
//! checks.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors produced by domain-type constructors and validators.
#[derive(Debug, Error)]
pub enum DomainError {
    #[error("personality statement text is empty")]
    EmptyStatement,
    #[error("utterance text is empty after trimming")]
    EmptyUtterance,
    #[error("utterance text contains a newline")]
    UtteranceWithNewline,
    #[error("utterance text starts with a speaker label marker")]
    UtteranceWithLabelPrefix,
    #[error("invalid dialogue: {0:?}")]
    InvalidDialogue(Vec<DialogueViolation>),
    #[error("personality spec lists differ in length: person A has {a}, person B has {b}")]
    SpecLengthMismatch { a: usize, b: usize },
    #[error("personality spec must cover 1..=5 dimensions, got {0}")]
    SpecDimensionCount(usize),
    #[error("persona '{0}' has no profile sentences")]
    EmptyPersona(String),
    #[error("persona '{0}' contains an empty profile sentence")]
    EmptyProfileSentence(String),
    #[error("cannot parse personality dimension from '{0}'")]
    InvalidDimension(String),
    #[error("cannot parse sample status from '{0}'")]
    InvalidStatus(String),
}

/// One of the Big Five personality axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BigFiveAxis {
    Openness,
    Conscientiousness,
    Extraversion,
    Agreeableness,
    Neuroticism,
}

impl BigFiveAxis {
    pub const ALL: [BigFiveAxis; 5] = [
        BigFiveAxis::Openness,
        BigFiveAxis::Conscientiousness,
        BigFiveAxis::Extraversion,
        BigFiveAxis::Agreeableness,
        BigFiveAxis::Neuroticism,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BigFiveAxis::Openness => "openness",
            BigFiveAxis::Conscientiousness => "conscientiousness",
            BigFiveAxis::Extraversion => "extraversion",
            BigFiveAxis::Agreeableness => "agreeableness",
            BigFiveAxis::Neuroticism => "neuroticism",
        }
    }
}

impl FromStr for BigFiveAxis {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "openness" => Ok(BigFiveAxis::Openness),
            "conscientiousness" => Ok(BigFiveAxis::Conscientiousness),
            "extraversion" => Ok(BigFiveAxis::Extraversion),
            "agreeableness" => Ok(BigFiveAxis::Agreeableness),
            "neuroticism" => Ok(BigFiveAxis::Neuroticism),
            other => Err(DomainError::InvalidDimension(other.to_string())),
        }
    }
}

/// High or low pole of an axis. For Extraversion, high = extravert and
/// low = introvert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pole {
    High,
    Low,
}

impl Pole {
    pub fn name(&self) -> &'static str {
        match self {
            Pole::High => "high",
            Pole::Low => "low",
        }
    }
}

/// A personality assignment: one Big Five axis at one pole.
///
/// Serialized as the compact string `"<axis>:<pole>"`, e.g.
/// `"extraversion:high"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PersonalityDimension {
    pub axis: BigFiveAxis,
    pub pole: Pole,
}

impl PersonalityDimension {
    pub fn new(axis: BigFiveAxis, pole: Pole) -> Self {
        Self { axis, pole }
    }

    pub fn extravert() -> Self {
        Self::new(BigFiveAxis::Extraversion, Pole::High)
    }

    pub fn introvert() -> Self {
        Self::new(BigFiveAxis::Extraversion, Pole::Low)
    }

    /// Human-readable noun phrase used inside prompts, e.g. "extravert".
    pub fn descriptor(&self) -> String {
        match (self.axis, self.pole) {
            (BigFiveAxis::Extraversion, Pole::High) => "extravert".to_string(),
            (BigFiveAxis::Extraversion, Pole::Low) => "introvert".to_string(),
            (axis, pole) => format!("{} in {}", pole.name(), axis.name()),
        }
    }

    /// Parses a classifier or verdict label. Accepts the canonical
    /// `"axis:pole"` form plus the Extraversion shorthands
    /// `"extravert"` / `"extrovert"` / `"introvert"`.
    pub fn from_label(label: &str) -> Result<Self, DomainError> {
        let lower = label.trim().to_ascii_lowercase();
        match lower.as_str() {
            "extravert" | "extrovert" | "extraversion" => return Ok(Self::extravert()),
            "introvert" | "introversion" => return Ok(Self::introvert()),
            _ => {}
        }
        lower.parse()
    }
}

impl fmt::Display for PersonalityDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.axis.name(), self.pole.name())
    }
}

impl FromStr for PersonalityDimension {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (axis, pole) = s
            .split_once(':')
            .ok_or_else(|| DomainError::InvalidDimension(s.to_string()))?;
        let axis: BigFiveAxis = axis.parse()?;
        let pole = match pole.trim().to_ascii_lowercase().as_str() {
            "high" => Pole::High,
            "low" => Pole::Low,
            _ => return Err(DomainError::InvalidDimension(s.to_string())),
        };
        Ok(Self::new(axis, pole))
    }
}

impl Serialize for PersonalityDimension {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PersonalityDimension {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A natural-language sentence describing one personality dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawStatement")]
pub struct PersonalityStatement {
    pub dimension: PersonalityDimension,
    text: String,
}

#[derive(Deserialize)]
struct RawStatement {
    dimension: PersonalityDimension,
    text: String,
}

impl TryFrom<RawStatement> for PersonalityStatement {
    type Error = DomainError;

    fn try_from(raw: RawStatement) -> Result<Self, Self::Error> {
        PersonalityStatement::new(raw.dimension, raw.text)
    }
}

impl PersonalityStatement {
    pub fn new(dimension: PersonalityDimension, text: impl Into<String>) -> Result<Self, DomainError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(DomainError::EmptyStatement);
        }
        Ok(Self {
            dimension,
            text: text.trim().to_string(),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// The personality assignment for both interlocutors: `n` statements per
/// person, one per assigned dimension, with 1 <= n <= 5.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct PersonalitySpec {
    person_a: Vec<PersonalityStatement>,
    person_b: Vec<PersonalityStatement>,
}

#[derive(Deserialize)]
struct RawSpec {
    person_a: Vec<PersonalityStatement>,
    person_b: Vec<PersonalityStatement>,
}

impl TryFrom<RawSpec> for PersonalitySpec {
    type Error = DomainError;

    fn try_from(raw: RawSpec) -> Result<Self, Self::Error> {
        PersonalitySpec::new(raw.person_a, raw.person_b)
    }
}

impl PersonalitySpec {
    pub fn new(
        person_a: Vec<PersonalityStatement>,
        person_b: Vec<PersonalityStatement>,
    ) -> Result<Self, DomainError> {
        if person_a.len() != person_b.len() {
            return Err(DomainError::SpecLengthMismatch {
                a: person_a.len(),
                b: person_b.len(),
            });
        }
        if person_a.is_empty() || person_a.len() > 5 {
            return Err(DomainError::SpecDimensionCount(person_a.len()));
        }
        Ok(Self { person_a, person_b })
    }

    /// Single-dimension spec, the shape the pipeline produces.
    pub fn single(a: PersonalityStatement, b: PersonalityStatement) -> Self {
        Self {
            person_a: vec![a],
            person_b: vec![b],
        }
    }

    pub fn n(&self) -> usize {
        self.person_a.len()
    }

    pub fn person_a(&self) -> &[PersonalityStatement] {
        &self.person_a
    }

    pub fn person_b(&self) -> &[PersonalityStatement] {
        &self.person_b
    }

    pub fn statements_for(&self, speaker: Speaker) -> &[PersonalityStatement] {
        match speaker {
            Speaker::PersonA => &self.person_a,
            Speaker::PersonB => &self.person_b,
        }
    }

    /// The first (and for pipeline runs, only) dimension assigned to Person A.
    pub fn dim_a(&self) -> PersonalityDimension {
        self.person_a[0].dimension
    }

    pub fn dim_b(&self) -> PersonalityDimension {
        self.person_b[0].dimension
    }
}

/// A persona: an identifier plus its profile sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPersona")]
pub struct Persona {
    pub id: String,
    profiles: Vec<String>,
}

#[derive(Deserialize)]
struct RawPersona {
    id: String,
    profiles: Vec<String>,
}

impl TryFrom<RawPersona> for Persona {
    type Error = DomainError;

    fn try_from(raw: RawPersona) -> Result<Self, Self::Error> {
        Persona::new(raw.id, raw.profiles)
    }
}

impl Persona {
    pub fn new(id: impl Into<String>, profiles: Vec<String>) -> Result<Self, DomainError> {
        let id = id.into();
        if profiles.is_empty() {
            return Err(DomainError::EmptyPersona(id));
        }
        let profiles: Vec<String> = profiles.iter().map(|p| p.trim().to_string()).collect();
        if profiles.iter().any(|p| p.is_empty()) {
            return Err(DomainError::EmptyProfileSentence(id));
        }
        Ok(Self { id, profiles })
    }

    pub fn profiles(&self) -> &[String] {
        &self.profiles
    }
}

/// The two interlocutors. Person A plays the system, Person B the user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Speaker {
    PersonA,
    PersonB,
}

impl Speaker {
    pub fn other(&self) -> Speaker {
        match self {
            Speaker::PersonA => Speaker::PersonB,
            Speaker::PersonB => Speaker::PersonA,
        }
    }

    /// Canonical transcript label, without the trailing colon.
    pub fn label(&self) -> &'static str {
        match self {
            Speaker::PersonA => "Person A",
            Speaker::PersonB => "Person B",
        }
    }
}

impl fmt::Display for Speaker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One utterance by one speaker. The text carries no `Person X:` prefix
/// (that is a serialization concern) and no internal newlines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawUtterance")]
pub struct Utterance {
    pub speaker: Speaker,
    text: String,
}

#[derive(Deserialize)]
struct RawUtterance {
    speaker: Speaker,
    text: String,
}

impl TryFrom<RawUtterance> for Utterance {
    type Error = DomainError;

    fn try_from(raw: RawUtterance) -> Result<Self, Self::Error> {
        Utterance::new(raw.speaker, raw.text)
    }
}

impl Utterance {
    pub fn new(speaker: Speaker, text: impl Into<String>) -> Result<Self, DomainError> {
        let text = text.into();
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(DomainError::EmptyUtterance);
        }
        if trimmed.contains('\n') || trimmed.contains('\r') {
            return Err(DomainError::UtteranceWithNewline);
        }
        let lower = trimmed.to_ascii_lowercase();
        if lower.starts_with("person a:") || lower.starts_with("person b:") {
            return Err(DomainError::UtteranceWithLabelPrefix);
        }
        Ok(Self {
            speaker,
            text: trimmed.to_string(),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// A rule violated by an utterance sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DialogueViolation {
    /// Fewer than two utterances.
    TooShort { len: usize },
    /// Same speaker twice in a row, first offending index given.
    NonAlternating { index: usize },
    /// The first speaker is not the expected initiator.
    WrongInitiator { expected: Speaker, actual: Speaker },
}

/// Checks alternation, minimum length, and (when given) the expected
/// initiator over a raw utterance sequence. Violations are data, not
/// faults: an empty result means the sequence is a legal dialogue.
pub fn validate_utterances(
    utterances: &[Utterance],
    expected_first: Option<Speaker>,
) -> Vec<DialogueViolation> {
    let mut violations = Vec::new();
    if utterances.len() < 2 {
        violations.push(DialogueViolation::TooShort {
            len: utterances.len(),
        });
    }
    for i in 1..utterances.len() {
        if utterances[i].speaker == utterances[i - 1].speaker {
            violations.push(DialogueViolation::NonAlternating { index: i });
            break;
        }
    }
    if let (Some(expected), Some(first)) = (expected_first, utterances.first()) {
        if first.speaker != expected {
            violations.push(DialogueViolation::WrongInitiator {
                expected,
                actual: first.speaker,
            });
        }
    }
    violations
}

/// An ordered, strictly alternating exchange of at least two utterances.
///
/// The final speaker is stored explicitly so a record stays
/// self-describing even after utterances are truncated during pair
/// extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dialogue {
    utterances: Vec<Utterance>,
    first_speaker: Speaker,
    final_speaker: Speaker,
}

impl Dialogue {
    pub fn try_new(utterances: Vec<Utterance>) -> Result<Self, DomainError> {
        let violations = validate_utterances(&utterances, None);
        if !violations.is_empty() {
            return Err(DomainError::InvalidDialogue(violations));
        }
        let first_speaker = utterances[0].speaker;
        let final_speaker = utterances[utterances.len() - 1].speaker;
        Ok(Self {
            utterances,
            first_speaker,
            final_speaker,
        })
    }

    pub fn utterances(&self) -> &[Utterance] {
        &self.utterances
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    pub fn first_speaker(&self) -> Speaker {
        self.first_speaker
    }

    pub fn final_speaker(&self) -> Speaker {
        self.final_speaker
    }
}

// A dialogue travels over the wire as its plain utterance list; the
// speakers are recomputed and revalidated on the way back in.
impl Serialize for Dialogue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.utterances.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dialogue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let utterances = Vec::<Utterance>::deserialize(deserializer)?;
        Dialogue::try_new(utterances).map_err(serde::de::Error::custom)
    }
}

/// Validates a dialogue against the expected initiator. Returns the empty
/// list when the dialogue is acceptable.
pub fn validate_dialogue(d: &Dialogue, expected_first: Speaker) -> Vec<DialogueViolation> {
    validate_utterances(d.utterances(), Some(expected_first))
}

/// Final classification of one pipeline sample. Every sample ends in
/// exactly one status; `Positive` and `Discarded` are terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Positive,
    NegativeProfile,
    NegativePersonality,
    NegativeStyle,
    SelectionFailure,
    Unparseable,
    Discarded,
}

impl SampleStatus {
    pub const ALL: [SampleStatus; 7] = [
        SampleStatus::Positive,
        SampleStatus::NegativeProfile,
        SampleStatus::NegativePersonality,
        SampleStatus::NegativeStyle,
        SampleStatus::SelectionFailure,
        SampleStatus::Unparseable,
        SampleStatus::Discarded,
    ];

    pub fn is_terminal(&self) -> bool {
        matches!(self, SampleStatus::Positive | SampleStatus::Discarded)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SampleStatus::Positive => "positive",
            SampleStatus::NegativeProfile => "negative_profile",
            SampleStatus::NegativePersonality => "negative_personality",
            SampleStatus::NegativeStyle => "negative_style",
            SampleStatus::SelectionFailure => "selection_failure",
            SampleStatus::Unparseable => "unparseable",
            SampleStatus::Discarded => "discarded",
        }
    }
}

impl fmt::Display for SampleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleStatus {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SampleStatus::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| DomainError::InvalidStatus(s.to_string()))
    }
}
