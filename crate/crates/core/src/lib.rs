//! Personality-conditioned chit-chat dialogue synthesis.
//!
//! This crate implements a backend-pluggable pipeline that prompts a
//! chat-completion model through five stages per sample — personality
//! setting, profile selecting, dialogue generation, dialogue filtering,
//! and bounded regeneration — and persists every iteration with full
//! accounting. It also ships corpus statistics (pairing distribution,
//! turn/token-length summaries, profile frequency, the iteration ledger)
//! and from-scratch text-generation metrics (BLEU-2, ROUGE-1/2/L, n-gram
//! perplexity, personality accuracy via a pluggable classifier).
//!
//! Module map:
//! - [`domain`]: shared value types (dimensions, statements, dialogues, statuses)
//! - [`catalog`]: personality-statement catalogs and persona corpora
//! - [`chat`]: chat message plumbing shared by prompts and backends
//! - [`prompt`]: template loading and prompt assembly for all three call kinds
//! - [`gateway`]: chat-completion backends (HTTP with retry/rate-limit, scripted)
//! - [`transcript`]: `Person A:` / `Person B:` line-protocol parsing and serialization
//! - [`pipeline`]: per-sample orchestration, verdict parsing, the iteration ledger
//! - [`store`]: JSONL record persistence and single-turn pair extraction
//! - [`stats`]: corpus-level reports
//! - [`metrics`]: BLEU/ROUGE/perplexity/personality-accuracy

pub mod catalog;
pub mod chat;
pub mod domain;
pub mod gateway;
pub mod metrics;
pub mod normalize;
pub mod pipeline;
pub mod prompt;
pub mod stats;
pub mod store;
pub mod transcript;

pub use domain::{
    BigFiveAxis, Dialogue, DomainError, Persona, PersonalityDimension, PersonalitySpec,
    PersonalityStatement, Pole, SampleStatus, Speaker, Utterance,
};
