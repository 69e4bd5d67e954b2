//! Line-oriented lexicon format.
//!
//! ```text
//! prep-src: from, out of, off, out
//! verb: enter | class: escape-51.1-2 | pattern: Theme "enter" Destination | before: not is-at(Theme,Destination) | after: is-at(Theme,Destination)
//! ```

use std::collections::BTreeSet;

use super::{
    Lexicon, LexiconError, LexiconErrorKind, Literal, Predicate, PrepClasses, PrepSpec, SyntacticPattern, Term,
    VerbRule,
};
use crate::text::normalize;

type Result<T> = std::result::Result<T, LexiconErrorKind>;

fn malformed(msg: impl Into<String>) -> LexiconErrorKind {
    LexiconErrorKind::MalformedLine(msg.into())
}

/// Parses a whole lexicon file. Any bad entry rejects the file.
pub fn parse_lexicon(source: &str) -> std::result::Result<Lexicon, LexiconError> {
    let mut classes = PrepClasses::default();
    let mut rules = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |kind| LexiconError { line: idx + 1, kind };
        if let Some(header) = header_line(line) {
            if !rules.is_empty() {
                return Err(at(malformed("preposition class header after the first rule")));
            }
            let (key, members) = header;
            match key {
                "prep-src" => classes.source = members,
                _ => classes.destination = members,
            }
            continue;
        }
        rules.push(parse_rule(line).map_err(at)?);
    }
    Ok(Lexicon::new(rules, classes))
}

fn header_line(line: &str) -> Option<(&'static str, Vec<String>)> {
    for key in ["prep-src", "prep-dest"] {
        if let Some(rest) = line.strip_prefix(key).and_then(|r| r.trim_start().strip_prefix(':')) {
            let members = rest.split(',').map(normalize).filter(|m| !m.is_empty()).collect();
            return Some((key, members));
        }
    }
    None
}

fn parse_rule(line: &str) -> Result<VerbRule> {
    let mut verb = None;
    let mut class_id = None;
    let mut sense_id = None;
    let mut pattern_src = None;
    let mut before_src = None;
    let mut after_src = None;

    for field in line.split('|') {
        let field = field.trim();
        let (key, value) = field
            .split_once(':')
            .ok_or_else(|| malformed(format!("field `{field}` has no `key:`")))?;
        let value = value.trim().to_string();
        let slot = match key.trim() {
            "verb" => &mut verb,
            "class" => &mut class_id,
            "sense" => &mut sense_id,
            "pattern" => &mut pattern_src,
            "before" => &mut before_src,
            "after" => &mut after_src,
            other => return Err(malformed(format!("unknown field `{other}`"))),
        };
        if slot.replace(value).is_some() {
            return Err(malformed(format!("duplicate field `{}`", key.trim())));
        }
    }

    let verb = normalize(&verb.ok_or_else(|| malformed("missing `verb:` field"))?);
    if verb.is_empty() {
        return Err(malformed("empty verb"));
    }
    let pattern = parse_pattern(&pattern_src.ok_or_else(|| malformed("missing `pattern:` field"))?)?;
    if pattern.verb != verb {
        return Err(malformed(format!(
            "pattern verb `{}` differs from entry verb `{verb}`",
            pattern.verb
        )));
    }
    let before = parse_literal_list(before_src.as_deref().unwrap_or(""))?;
    let after = parse_literal_list(after_src.as_deref().unwrap_or(""))?;
    for lit in before.iter().chain(&after) {
        for role in lit.roles() {
            if !pattern.has_role(role) {
                return Err(LexiconErrorKind::UnboundRole(role.to_string()));
            }
        }
    }
    Ok(VerbRule {
        verb,
        class_id: class_id.unwrap_or_default(),
        sense_id: sense_id.unwrap_or_default(),
        pattern,
        before,
        after,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Quoted(String),
    Word(String),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(malformed("unterminated quote in pattern")),
                    }
                }
                tokens.push(Token::Quoted(normalize(&s)));
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                tokens.push(Token::Word(s));
            }
        }
    }
    Ok(tokens)
}

fn is_role_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn expect_role(tok: Option<Token>) -> Result<String> {
    match tok {
        Some(Token::Word(w)) if is_role_name(&w) => Ok(w),
        other => Err(malformed(format!("expected a role name, found {other:?}"))),
    }
}

fn parse_prep_spec(tok: Token) -> Result<PrepSpec> {
    match tok {
        Token::Quoted(w) if !w.is_empty() => Ok(PrepSpec::Word(w)),
        Token::Word(w) if w == "PREP-src" => Ok(PrepSpec::Source),
        Token::Word(w) if w == "PREP-dest" => Ok(PrepSpec::Destination),
        other => Err(malformed(format!("expected a preposition, found {other:?}"))),
    }
}

/// `ROLE "verb" (ROLE | -) ((PREP ROLE))*`, optionally wrapped in parens;
/// parens around each prepositional slot are optional.
pub(super) fn parse_pattern(src: &str) -> Result<SyntacticPattern> {
    let mut tokens = tokenize(src)?;
    if tokens.first() == Some(&Token::Open) && tokens.last() == Some(&Token::Close) {
        // Only unwrap if the outer parens enclose the whole pattern.
        let mut depth = 0i32;
        let mut encloses = true;
        for (i, t) in tokens.iter().enumerate() {
            match t {
                Token::Open => depth += 1,
                Token::Close => depth -= 1,
                _ => {}
            }
            if depth == 0 && i + 1 < tokens.len() {
                encloses = false;
                break;
            }
        }
        if encloses {
            tokens.remove(0);
            tokens.pop();
        }
    }

    let mut it = tokens.into_iter();
    let subject = expect_role(it.next())?;
    let verb = match it.next() {
        Some(Token::Quoted(v)) if !v.is_empty() => v,
        other => return Err(malformed(format!("expected quoted verb, found {other:?}"))),
    };
    let object = match it.next() {
        Some(Token::Word(w)) if w == "-" => None,
        Some(Token::Word(w)) if is_role_name(&w) => Some(w),
        None => return Err(malformed("pattern is missing its object slot (role or `-`)")),
        other => return Err(malformed(format!("expected object role or `-`, found {other:?}"))),
    };

    let mut preps = Vec::new();
    while let Some(tok) = it.next() {
        if tok == Token::Open {
            let spec = parse_prep_spec(it.next().ok_or_else(|| malformed("dangling `(`"))?)?;
            let role = expect_role(it.next())?;
            if it.next() != Some(Token::Close) {
                return Err(malformed("expected `)` after prepositional slot"));
            }
            preps.push((spec, role));
        } else {
            let spec = parse_prep_spec(tok)?;
            let role = expect_role(it.next())?;
            preps.push((spec, role));
        }
    }

    let pattern = SyntacticPattern {
        subject,
        verb,
        object,
        preps,
    };
    let mut seen = BTreeSet::new();
    for role in pattern.roles() {
        if !seen.insert(role) {
            return Err(malformed(format!("role `{role}` appears twice in pattern")));
        }
    }
    Ok(pattern)
}

/// Splits on commas outside parentheses and quotes.
fn split_top_level(src: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut quoted = false;
    let mut start = 0;
    for (i, c) in src.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '(' if !quoted => depth += 1,
            ')' if !quoted => depth -= 1,
            ',' if !quoted && depth == 0 => {
                parts.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
}

pub(super) fn parse_literal_list(src: &str) -> Result<Vec<Literal>> {
    if src.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(src).into_iter().map(parse_literal).collect()
}

pub(super) fn parse_literal(src: &str) -> Result<Literal> {
    let mut s = src.trim();
    let mut negated = false;
    if let Some(rest) = s.strip_prefix('~') {
        negated = true;
        s = rest.trim_start();
    } else if let Some(rest) = s.strip_prefix("not ") {
        negated = true;
        s = rest.trim_start();
    }
    let open = s
        .find('(')
        .ok_or_else(|| malformed(format!("literal `{}` has no argument list", src.trim())))?;
    if !s.ends_with(')') {
        return Err(malformed(format!("literal `{}` is not closed", src.trim())));
    }
    let name = s[..open].trim();
    let predicate: Predicate = name
        .parse()
        .map_err(|_| LexiconErrorKind::UnknownPredicate(name.to_string()))?;
    let inner = &s[open + 1..s.len() - 1];
    let args: Vec<Term> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        split_top_level(inner)
            .into_iter()
            .map(parse_term)
            .collect::<Result<_>>()?
    };
    if args.len() != predicate.arity() {
        return Err(LexiconErrorKind::ArityMismatch {
            predicate: predicate.name().to_string(),
            expected: predicate.arity(),
            found: args.len(),
        });
    }
    if let (Some(domain), Some(Term::Const(value))) = (predicate.value_domain(), args.get(1)) {
        if !domain.contains(&value.as_str()) {
            return Err(LexiconErrorKind::BadValueDomain {
                predicate: predicate.name().to_string(),
                value: value.clone(),
            });
        }
    }
    Ok(Literal {
        predicate,
        args,
        negated,
    })
}

fn parse_term(src: &str) -> Result<Term> {
    let s = src.trim();
    if s.is_empty() {
        return Err(malformed("empty literal argument"));
    }
    if let Some(inner) = s.strip_prefix('"') {
        let inner = inner
            .strip_suffix('"')
            .ok_or_else(|| malformed(format!("unterminated constant `{s}`")))?;
        let value = normalize(inner);
        if value.is_empty() {
            return Err(malformed("empty constant"));
        }
        return Ok(Term::Const(value));
    }
    if is_role_name(s) {
        Ok(Term::Role(s.to_string()))
    } else if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        Ok(Term::Const(s.to_lowercase()))
    } else {
        Err(malformed(format!("bad literal argument `{s}`")))
    }
}
