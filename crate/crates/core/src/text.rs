//! Noun-phrase normalization and headword extraction.
//!
//! Every participant, location and answer string in the engine is keyed by
//! its headword, so this is the single place where surface text becomes an
//! identity.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("empty noun phrase")]
pub struct EmptyPhrase;

const DETERMINERS: &[&str] = &["a", "an", "the", "this", "that", "these", "those"];

const LEADING_PREPOSITIONS: &[&str] = &[
    "in", "into", "inside", "within", "at", "on", "onto", "to", "from", "out", "of", "off", "by", "with", "through",
];

const TRAILING_PUNCTUATION: &[char] = &['.', ',', ';', ':', '!', '?', '"', '\''];

/// Lowercases and collapses internal whitespace.
pub fn normalize(text: &str) -> String {
    text.split_whitespace()
        .map(|t| t.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

fn strip_parentheticals(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

/// Canonical head of a noun phrase.
///
/// Lowercases, drops parentheticals and trailing punctuation, strips leading
/// determiners and prepositions, and cuts a trailing `of`-complement
/// ("the leaf of the plant" -> "leaf"). Multiword heads are kept whole:
/// "carbon dioxide", "recycling facility" and the conjunction
/// "water and minerals" are each one participant.
pub fn headword(np: &str) -> Result<String, EmptyPhrase> {
    let cleaned = normalize(&strip_parentheticals(np));
    let mut tokens: Vec<&str> = cleaned
        .split(' ')
        .map(|t| t.trim_matches(TRAILING_PUNCTUATION))
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(EmptyPhrase);
    }
    let last = tokens[tokens.len() - 1].to_string();

    let mut start = 0;
    while start < tokens.len()
        && (DETERMINERS.contains(&tokens[start]) || LEADING_PREPOSITIONS.contains(&tokens[start]))
    {
        start += 1;
    }
    tokens.drain(..start);
    if let Some(of) = tokens.iter().position(|t| *t == "of") {
        if of > 0 {
            tokens.truncate(of);
        }
    }
    if tokens.is_empty() {
        // Phrase made only of function words; keep its final token.
        return Ok(last);
    }
    Ok(tokens.join(" "))
}

/// Headword, falling back to the normalized text for phrases that have none.
pub fn canonical(np: &str) -> String {
    headword(np).unwrap_or_else(|_| normalize(np))
}
