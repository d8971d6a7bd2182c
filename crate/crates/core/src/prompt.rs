//! Prompt assembly from user-editable templates.
//!
//! Three call kinds are assembled here: the profile-selection prompt, the
//! four-part dialogue-generation prompt (profile, personality, character,
//! style sub-prompts), and the three-question filtering prompt. Rendering
//! is pure: the same inputs always produce a byte-identical bundle.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::chat::{ChatMessage, Role};
use crate::domain::{Dialogue, Persona, PersonalityDimension, PersonalitySpec};
use crate::transcript;

/// The literal completion that signals no profile sentence matches the
/// designated personality.
pub const SELECTION_SENTINEL: &str = "cannot select the profile";

/// Placeholder names a template is allowed to use.
pub const PLACEHOLDERS: [&str; 7] = [
    "profile",
    "personality_a",
    "personality_b",
    "persona_sentences",
    "dialogue",
    "statement_a",
    "statement_b",
];

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("template '{template}' uses unknown placeholder '{{{name}}}'")]
    UnknownPlaceholder { template: String, name: String },
    #[error("template '{template}' has an unterminated '{{' placeholder")]
    UnterminatedPlaceholder { template: String },
    #[error("template '{template}' placeholder '{{{name}}}' has no value in this context")]
    Unresolved { template: String, name: String },
    #[error("template set is missing '{0}'")]
    MissingTemplate(String),
    #[error("dialogue generation needs 4 templates (profile, personality, character, style), got {0}")]
    TemplateCount(usize),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed template file: {0}")]
    Format(String),
}

/// What a rendered bundle is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Selection,
    Generation,
    Filtering,
}

/// A named template: an ordered sequence of role-tagged texts with
/// `{placeholder}` slots. `{{` and `}}` escape literal braces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    name: String,
    role_sequence: Vec<(Role, String)>,
}

impl PromptTemplate {
    pub fn new(
        name: impl Into<String>,
        role_sequence: Vec<(Role, String)>,
    ) -> Result<Self, PromptError> {
        let name = name.into();
        for (_, text) in &role_sequence {
            scan_placeholders(&name, text)?;
        }
        Ok(Self {
            name,
            role_sequence,
        })
    }

    pub fn user(name: impl Into<String>, text: impl Into<String>) -> Result<Self, PromptError> {
        Self::new(name, vec![(Role::User, text.into())])
    }

    pub fn system(name: impl Into<String>, text: impl Into<String>) -> Result<Self, PromptError> {
        Self::new(name, vec![(Role::System, text.into())])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role_sequence(&self) -> &[(Role, String)] {
        &self.role_sequence
    }

    /// Renders every message of the template against a value map.
    pub fn render(
        &self,
        values: &BTreeMap<&str, String>,
    ) -> Result<Vec<ChatMessage>, PromptError> {
        self.role_sequence
            .iter()
            .map(|(role, text)| {
                Ok(ChatMessage {
                    role: *role,
                    content: render_text(&self.name, text, values)?,
                })
            })
            .collect()
    }
}

/// A fully rendered prompt ready for a chat backend: no unresolved
/// placeholders remain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub messages: Vec<ChatMessage>,
    pub purpose: Purpose,
}

impl PromptBundle {
    /// All message contents joined, for substring assertions in tests and
    /// script matchers.
    pub fn joined_text(&self) -> String {
        self.messages
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn scan_placeholders(template: &str, text: &str) -> Result<Vec<String>, PromptError> {
    let mut names = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '{' => {
                if chars.peek() == Some(&'{') {
                    chars.next();
                    continue;
                }
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('}') => break,
                        Some(ch) if ch.is_ascii_lowercase() || ch == '_' => name.push(ch),
                        Some(_) | None => {
                            return Err(PromptError::UnterminatedPlaceholder {
                                template: template.to_string(),
                            })
                        }
                    }
                }
                if !PLACEHOLDERS.contains(&name.as_str()) {
                    return Err(PromptError::UnknownPlaceholder {
                        template: template.to_string(),
                        name,
                    });
                }
                names.push(name);
            }
            '}' => {
                if chars.peek() == Some(&'}') {
                    chars.next();
                }
            }
            _ => {}
        }
    }
    Ok(names)
}

fn render_text(
    template: &str,
    text: &str,
    values: &BTreeMap<&str, String>,
) -> Result<String, PromptError> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '{' => {
                if chars.peek() == Some(&'{') {
                    chars.next();
                    out.push('{');
                    continue;
                }
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('}') => break,
                        Some(ch) => name.push(ch),
                        None => {
                            return Err(PromptError::UnterminatedPlaceholder {
                                template: template.to_string(),
                            })
                        }
                    }
                }
                let value = values.get(name.as_str()).ok_or_else(|| PromptError::Unresolved {
                    template: template.to_string(),
                    name: name.clone(),
                })?;
                out.push_str(value);
            }
            '}' => {
                if chars.peek() == Some(&'}') {
                    chars.next();
                }
                out.push('}');
            }
            _ => out.push(c),
        }
    }
    Ok(out)
}

/// The four dialogue-generation sub-templates, in prompt order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationTemplates {
    pub profile: PromptTemplate,
    pub personality: PromptTemplate,
    pub character: PromptTemplate,
    pub style: PromptTemplate,
}

impl GenerationTemplates {
    fn ordered(&self) -> [&PromptTemplate; 4] {
        [&self.profile, &self.personality, &self.character, &self.style]
    }
}

/// Every template the pipeline needs, keyed by purpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    pub selection: PromptTemplate,
    pub generation: GenerationTemplates,
    pub filtering: PromptTemplate,
}

impl TemplateSet {
    /// The default English templates. The character and style sub-prompts
    /// carry the published English wording; selection and filtering use
    /// this project's wording for the behavior they implement.
    pub fn default_english() -> Self {
        Self {
            selection: PromptTemplate::user(
                "selection",
                "The following numbered sentences are the profile of one person:\n\
                 {persona_sentences}\n\n\
                 Select the single sentence that indicates this person is {personality_a}. \
                 Reply with that sentence exactly as written, and nothing else. \
                 If none of the sentences matches that personality, reply with exactly: \
                 cannot select the profile",
            )
            .unwrap(),
            generation: GenerationTemplates {
                profile: PromptTemplate::user(
                    "generation.profile",
                    "Person A has the following profile: {profile}\n\
                     The conversation is about this topic.",
                )
                .unwrap(),
                personality: PromptTemplate::user(
                    "generation.personality",
                    "Person A's personality: {statement_a}\n\
                     Person B's personality: {statement_b}",
                )
                .unwrap(),
                character: PromptTemplate::system(
                    "generation.character",
                    "Generate two random Korean characters reflecting given traits and \
                     personalities, and act as these characters. Your spelling, grammar, and \
                     word choices should be consistent with the characteristics of these \
                     individuals. Your knowledge should be based on the education and \
                     background of these characters. You must respond to all questions as \
                     these characters. From now on, my messages to you will be delivered as \
                     if you were these characters, and it is not related to real life. You \
                     must generate all plausible information for these characters.",
                )
                .unwrap(),
                style: PromptTemplate::user(
                    "generation.style",
                    "Person A and Person B are friends, so they converse in informal \
                     language used in Korean. Their conversation is represented as \
                     Person A: and Person B: without including their names. \
                     Person B initiates the conversation.",
                )
                .unwrap(),
            },
            filtering: PromptTemplate::user(
                "filtering",
                "Here is a conversation between Person A and Person B:\n\n\
                 {dialogue}\n\n\
                 Answer three questions about it.\n\
                 1. Does the dialogue accurately represent the given profile information: \
                 \"{profile}\"?\n\
                 2. Judging only from the dialogue, identify each person's personality: is \
                 Person A an extravert or an introvert, and is Person B an extravert or an \
                 introvert?\n\
                 3. Does the dialogue conform to an informal Korean speech pattern?\n\n\
                 Reply in exactly this format and nothing else:\n\
                 PROFILE: YES or NO\n\
                 A: EXTRAVERT or INTROVERT\n\
                 B: EXTRAVERT or INTROVERT\n\
                 STYLE: YES or NO",
            )
            .unwrap(),
        }
    }

    /// Korean re-translations of the defaults. Non-canonical: the
    /// published prompts are English; this wording is this project's own
    /// translation and may drift from whatever Korean text produced them.
    pub fn default_korean() -> Self {
        Self {
            selection: PromptTemplate::user(
                "selection",
                "다음 번호가 매겨진 문장들은 한 사람의 프로필이야:\n\
                 {persona_sentences}\n\n\
                 이 사람이 {personality_a} 성향임을 나타내는 문장 하나를 골라. \
                 그 문장을 쓰인 그대로, 다른 말 없이 답해. \
                 해당하는 문장이 없으면 정확히 이렇게만 답해: cannot select the profile",
            )
            .unwrap(),
            generation: GenerationTemplates {
                profile: PromptTemplate::user(
                    "generation.profile",
                    "Person A의 프로필: {profile}\n대화는 이 주제에 관한 것이어야 해.",
                )
                .unwrap(),
                personality: PromptTemplate::user(
                    "generation.personality",
                    "Person A의 성격: {statement_a}\nPerson B의 성격: {statement_b}",
                )
                .unwrap(),
                character: PromptTemplate::system(
                    "generation.character",
                    "주어진 특성과 성격을 반영하는 두 명의 한국인 캐릭터를 무작위로 만들어서 \
                     그 캐릭터로서 행동해 줘. 맞춤법, 문법, 단어 선택은 이 인물들의 특성과 \
                     일치해야 해. 지식은 이 인물들의 교육과 배경에 기반해야 해. 모든 질문에 \
                     이 캐릭터로서 답해야 해. 지금부터 내 메시지는 네가 이 캐릭터인 것처럼 \
                     전달되며, 실제 삶과는 관련이 없어. 이 캐릭터에 대한 그럴듯한 정보를 \
                     모두 만들어 내야 해.",
                )
                .unwrap(),
                style: PromptTemplate::user(
                    "generation.style",
                    "Person A와 Person B는 친구 사이라서 한국어 반말로 대화해. 대화는 이름 \
                     없이 Person A: 와 Person B: 로만 표시해. Person B가 대화를 시작해.",
                )
                .unwrap(),
            },
            filtering: PromptTemplate::user(
                "filtering",
                "다음은 Person A와 Person B의 대화야:\n\n\
                 {dialogue}\n\n\
                 세 가지 질문에 답해.\n\
                 1. 이 대화가 주어진 프로필 정보 \"{profile}\"를 정확하게 반영하고 있어?\n\
                 2. 대화만 보고 각 사람의 성격을 판단해: Person A는 외향적이야 내향적이야? \
                 Person B는 외향적이야 내향적이야?\n\
                 3. 대화가 한국어 반말체로 이루어져 있어?\n\n\
                 정확히 이 형식으로만 답해:\n\
                 PROFILE: YES or NO\n\
                 A: EXTRAVERT or INTROVERT\n\
                 B: EXTRAVERT or INTROVERT\n\
                 STYLE: YES or NO",
            )
            .unwrap(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawTemplate {
    Single { role: String, text: String },
    Sequence { messages: Vec<RawMessage> },
}

#[derive(Deserialize)]
struct RawMessage {
    role: String,
    text: String,
}

#[derive(Deserialize)]
struct RawGeneration {
    profile: RawTemplate,
    personality: RawTemplate,
    character: RawTemplate,
    style: RawTemplate,
}

#[derive(Deserialize)]
struct RawTemplateSet {
    selection: RawTemplate,
    generation: RawGeneration,
    filtering: RawTemplate,
}

fn parse_role(role: &str) -> Result<Role, PromptError> {
    match role {
        "system" => Ok(Role::System),
        "user" => Ok(Role::User),
        other => Err(PromptError::Format(format!("unknown role '{other}'"))),
    }
}

fn build_template(name: &str, raw: RawTemplate) -> Result<PromptTemplate, PromptError> {
    let sequence = match raw {
        RawTemplate::Single { role, text } => vec![(parse_role(&role)?, text)],
        RawTemplate::Sequence { messages } => messages
            .into_iter()
            .map(|m| Ok((parse_role(&m.role)?, m.text)))
            .collect::<Result<Vec<_>, PromptError>>()?,
    };
    PromptTemplate::new(name, sequence)
}

/// Loads a template set from its TOML document form. Each purpose key
/// (`selection`, `generation.profile`, `generation.personality`,
/// `generation.character`, `generation.style`, `filtering`) maps to
/// either `{ role, text }` or `{ messages = [{ role, text }, ...] }`.
pub fn load_templates(source: &str) -> Result<TemplateSet, PromptError> {
    let raw: RawTemplateSet =
        toml::from_str(source).map_err(|e| PromptError::Format(e.to_string()))?;
    Ok(TemplateSet {
        selection: build_template("selection", raw.selection)?,
        generation: GenerationTemplates {
            profile: build_template("generation.profile", raw.generation.profile)?,
            personality: build_template("generation.personality", raw.generation.personality)?,
            character: build_template("generation.character", raw.generation.character)?,
            style: build_template("generation.style", raw.generation.style)?,
        },
        filtering: build_template("filtering", raw.filtering)?,
    })
}

/// Loads a template set from a TOML file on disk.
pub fn load_templates_file(path: &Path) -> Result<TemplateSet, PromptError> {
    let text = fs::read_to_string(path).map_err(|source| PromptError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_templates(&text)
}

fn joined_statements(statements: &[crate::domain::PersonalityStatement]) -> String {
    statements
        .iter()
        .map(|s| s.text())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Builds the profile-selection prompt: persona sentences appear
/// verbatim, numbered, and the model is told to answer with one sentence
/// or the sentinel phrase.
pub fn build_selection_prompt(
    persona: &Persona,
    dim: PersonalityDimension,
    template: &PromptTemplate,
) -> Result<PromptBundle, PromptError> {
    let numbered = persona
        .profiles()
        .iter()
        .enumerate()
        .map(|(i, sentence)| format!("{}. {}", i + 1, sentence))
        .collect::<Vec<_>>()
        .join("\n");
    let mut values = BTreeMap::new();
    values.insert("persona_sentences", numbered);
    values.insert("personality_a", format!("an {}", dim.descriptor()));
    let messages = template.render(&values)?;
    Ok(PromptBundle {
        messages,
        purpose: Purpose::Selection,
    })
}

/// Builds the four-part dialogue-generation prompt. The sub-prompts are
/// rendered in the order profile, personality, character, style and then
/// grouped by role: system parts first (one message), user parts second
/// (one message), preserving sub-prompt order within each group.
pub fn build_generation_prompt(
    profile: &str,
    spec: &PersonalitySpec,
    templates: &GenerationTemplates,
) -> Result<PromptBundle, PromptError> {
    let mut values = BTreeMap::new();
    values.insert("profile", profile.to_string());
    values.insert("statement_a", joined_statements(spec.person_a()));
    values.insert("statement_b", joined_statements(spec.person_b()));
    values.insert(
        "personality_a",
        format!("an {}", spec.dim_a().descriptor()),
    );
    values.insert(
        "personality_b",
        format!("an {}", spec.dim_b().descriptor()),
    );

    let mut system_parts: Vec<String> = Vec::new();
    let mut user_parts: Vec<String> = Vec::new();
    for template in templates.ordered() {
        for message in template.render(&values)? {
            match message.role {
                Role::System => system_parts.push(message.content),
                Role::User => user_parts.push(message.content),
            }
        }
    }
    let mut messages = Vec::new();
    if !system_parts.is_empty() {
        messages.push(ChatMessage::system(system_parts.join("\n\n")));
    }
    if !user_parts.is_empty() {
        messages.push(ChatMessage::user(user_parts.join("\n\n")));
    }
    Ok(PromptBundle {
        messages,
        purpose: Purpose::Generation,
    })
}

/// Builds the filtering prompt: the serialized dialogue embedded
/// verbatim, the three filter questions, and the machine-readable verdict
/// format instruction.
pub fn build_filter_prompt(
    dialogue: &Dialogue,
    profile: &str,
    spec: &PersonalitySpec,
    template: &PromptTemplate,
) -> Result<PromptBundle, PromptError> {
    let mut values = BTreeMap::new();
    values.insert("dialogue", transcript::serialize(dialogue));
    values.insert("profile", profile.to_string());
    values.insert(
        "personality_a",
        format!("an {}", spec.dim_a().descriptor()),
    );
    values.insert(
        "personality_b",
        format!("an {}", spec.dim_b().descriptor()),
    );
    let messages = template.render(&values)?;
    Ok(PromptBundle {
        messages,
        purpose: Purpose::Filtering,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{PersonalityStatement, Speaker, Utterance};

    fn sample_spec() -> PersonalitySpec {
        PersonalitySpec::single(
            PersonalityStatement::new(
                PersonalityDimension::extravert(),
                "I feel comfortable around people.",
            )
            .unwrap(),
            PersonalityStatement::new(PersonalityDimension::introvert(), "I don't talk a lot.")
                .unwrap(),
        )
    }

    fn sample_dialogue() -> Dialogue {
        Dialogue::try_new(vec![
            Utterance::new(Speaker::PersonB, "요즘 뭐해?").unwrap(),
            Utterance::new(Speaker::PersonA, "맛집 탐방 다녀!").unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn selection_prompt_numbers_sentences_and_keeps_sentinel() {
        let persona =
            Persona::new("p0", vec!["I love travelling.".into(), "I am a nurse.".into()]).unwrap();
        let set = TemplateSet::default_english();
        let bundle =
            build_selection_prompt(&persona, PersonalityDimension::extravert(), &set.selection)
                .unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("1. I love travelling."));
        assert!(text.contains("2. I am a nurse."));
        assert!(text.contains(SELECTION_SENTINEL));
        assert!(text.contains("an extravert"));
        assert_eq!(bundle.purpose, Purpose::Selection);
    }

    #[test]
    fn selection_prompt_single_sentence_persona() {
        let persona = Persona::new("p0", vec!["I love food.".into()]).unwrap();
        let set = TemplateSet::default_english();
        let bundle =
            build_selection_prompt(&persona, PersonalityDimension::introvert(), &set.selection)
                .unwrap();
        assert!(bundle.joined_text().contains("1. I love food."));
    }

    #[test]
    fn generation_prompt_contains_all_four_parts() {
        let set = TemplateSet::default_english();
        let bundle = build_generation_prompt("I love food", &sample_spec(), &set.generation).unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("I love food"));
        assert!(text.contains("I feel comfortable around people."));
        assert!(text.contains("I don't talk a lot."));
        assert!(text.contains("Generate two random Korean characters"));
        assert!(text.contains("Person B initiates the conversation."));
        // character prompt goes out as the system message
        assert_eq!(bundle.messages[0].role, Role::System);
        assert!(bundle.messages[0].content.starts_with("Generate two random"));
        assert_eq!(bundle.messages[1].role, Role::User);
    }

    #[test]
    fn placeholder_free_templates_render_unchanged() {
        let templates = GenerationTemplates {
            profile: PromptTemplate::user("generation.profile", "fixed profile text").unwrap(),
            personality: PromptTemplate::user("generation.personality", "fixed personality").unwrap(),
            character: PromptTemplate::system("generation.character", "fixed character").unwrap(),
            style: PromptTemplate::user("generation.style", "fixed style").unwrap(),
        };
        let bundle = build_generation_prompt("ignored", &sample_spec(), &templates).unwrap();
        assert_eq!(bundle.messages[0].content, "fixed character");
        assert_eq!(
            bundle.messages[1].content,
            "fixed profile text\n\nfixed personality\n\nfixed style"
        );
    }

    #[test]
    fn filter_prompt_embeds_dialogue_verbatim() {
        let set = TemplateSet::default_english();
        let d = sample_dialogue();
        let bundle = build_filter_prompt(&d, "I love food", &sample_spec(), &set.filtering).unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("Person B: 요즘 뭐해?\nPerson A: 맛집 탐방 다녀!"));
        assert!(text.contains("accurately represent the given profile information"));
        assert!(text.contains("informal Korean speech pattern"));
        assert!(text.contains("PROFILE: YES or NO"));
    }

    #[test]
    fn filter_template_without_dialogue_placeholder_is_usable_but_weird() {
        // a template may omit placeholders; what it cannot do is name
        // unknown ones
        assert!(PromptTemplate::user("filtering", "rate this {conversation}").is_err());
    }

    #[test]
    fn unknown_placeholder_is_rejected_at_construction() {
        let err = PromptTemplate::user("x", "hello {nope}").unwrap_err();
        assert!(matches!(err, PromptError::UnknownPlaceholder { .. }));
    }

    #[test]
    fn unterminated_placeholder_is_rejected() {
        assert!(matches!(
            PromptTemplate::user("x", "hello {profile"),
            Err(PromptError::UnterminatedPlaceholder { .. })
        ));
    }

    #[test]
    fn escaped_braces_render_literally() {
        let t = PromptTemplate::user("x", "answer as {{\"label\": {profile}}}").unwrap();
        let mut values = BTreeMap::new();
        values.insert("profile", "1".to_string());
        let rendered = t.render(&values).unwrap();
        assert_eq!(rendered[0].content, "answer as {\"label\": 1}");
    }

    #[test]
    fn rendering_is_pure() {
        let set = TemplateSet::default_english();
        let spec = sample_spec();
        let a = build_generation_prompt("I love food", &spec, &set.generation).unwrap();
        let b = build_generation_prompt("I love food", &spec, &set.generation).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn template_set_loads_from_toml() {
        let toml_text = r#"
[selection]
role = "user"
text = "pick for {personality_a}: {persona_sentences}"

[generation.profile]
role = "user"
text = "topic: {profile}"

[generation.personality]
role = "user"
text = "{statement_a} / {statement_b}"

[generation.character]
role = "system"
text = "act it out"

[generation.style]
role = "user"
text = "informal; Person B starts"

[filtering]
messages = [{ role = "user", text = "check {dialogue} against {profile}" }]
"#;
        let set = load_templates(toml_text).unwrap();
        assert_eq!(set.generation.character.role_sequence()[0].0, Role::System);
        let persona = Persona::new("p", vec!["s1".into()]).unwrap();
        let bundle =
            build_selection_prompt(&persona, PersonalityDimension::extravert(), &set.selection)
                .unwrap();
        assert_eq!(bundle.messages[0].content, "pick for an extravert: 1. s1");
    }

    #[test]
    fn template_file_with_missing_section_errors() {
        assert!(matches!(
            load_templates("[selection]\nrole=\"user\"\ntext=\"x\"\n"),
            Err(PromptError::Format(_))
        ));
    }

    #[test]
    fn korean_defaults_render() {
        let set = TemplateSet::default_korean();
        let bundle = build_generation_prompt("여행", &sample_spec(), &set.generation).unwrap();
        assert!(bundle.joined_text().contains("Person B가 대화를 시작해."));
    }
}
