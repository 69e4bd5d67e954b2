use std::fmt;
use std::str::FromStr;

/// The five state predicates a rule may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    IsAt,
    Exists,
    Size,
    Temperature,
    Phase,
}

pub const DIRECTION_VALUES: &[&str] = &["increased", "decreased"];
pub const PHASE_VALUES: &[&str] = &["solid", "liquid", "gas"];

impl Predicate {
    pub const ALL: [Predicate; 5] = [
        Predicate::IsAt,
        Predicate::Exists,
        Predicate::Size,
        Predicate::Temperature,
        Predicate::Phase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::IsAt => "is-at",
            Predicate::Exists => "exists",
            Predicate::Size => "size",
            Predicate::Temperature => "temperature",
            Predicate::Phase => "phase",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Predicate::Exists => 1,
            _ => 2,
        }
    }

    /// Closed set the second argument must come from, if any.
    pub fn value_domain(self) -> Option<&'static [&'static str]> {
        match self {
            Predicate::Size | Predicate::Temperature => Some(DIRECTION_VALUES),
            Predicate::Phase => Some(PHASE_VALUES),
            Predicate::IsAt | Predicate::Exists => None,
        }
    }

    /// Fluents persist across time points; size and temperature are markers
    /// scoped to the event that asserted them.
    pub fn is_fluent(self) -> bool {
        matches!(self, Predicate::IsAt | Predicate::Exists | Predicate::Phase)
    }

    /// A thing has at most one location and one phase at a time.
    pub fn is_functional(self) -> bool {
        matches!(self, Predicate::IsAt | Predicate::Phase)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// A literal argument in a rule template.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Semantic role variable, bound from the syntactic pattern.
    Role(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Role(r) => f.write_str(r),
            Term::Const(c) => write!(f, "\"{c}\""),
        }
    }
}

/// Rule template literal, possibly strongly negated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub predicate: Predicate,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl Literal {
    pub fn roles(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|a| match a {
            Term::Role(r) => Some(r.as_str()),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}(", self.predicate)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

/// A literal whose arguments are all canonical noun-phrase headwords or
/// value-domain constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundLiteral {
    pub predicate: Predicate,
    pub args: Vec<String>,
    pub negated: bool,
}

impl GroundLiteral {
    pub fn new(predicate: Predicate, args: Vec<String>, negated: bool) -> Self {
        GroundLiteral {
            predicate,
            args,
            negated,
        }
    }

    pub fn is_at(thing: impl Into<String>, location: impl Into<String>) -> Self {
        Self::new(Predicate::IsAt, vec![thing.into(), location.into()], false)
    }

    pub fn exists(thing: impl Into<String>) -> Self {
        Self::new(Predicate::Exists, vec![thing.into()], false)
    }

    pub fn phase(thing: impl Into<String>, state: impl Into<String>) -> Self {
        Self::new(Predicate::Phase, vec![thing.into(), state.into()], false)
    }

    pub fn temperature(thing: impl Into<String>, direction: impl Into<String>) -> Self {
        Self::new(Predicate::Temperature, vec![thing.into(), direction.into()], false)
    }

    pub fn size(thing: impl Into<String>, direction: impl Into<String>) -> Self {
        Self::new(Predicate::Size, vec![thing.into(), direction.into()], false)
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn subject(&self) -> &str {
        &self.args[0]
    }

    pub fn value(&self) -> Option<&str> {
        self.args.get(1).map(String::as_str)
    }

    pub fn is_positive(&self, predicate: Predicate) -> bool {
        !self.negated && self.predicate == predicate
    }
}

impl fmt::Display for GroundLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        write!(f, "{}({})", self.predicate, self.args.join(", "))
    }
}
