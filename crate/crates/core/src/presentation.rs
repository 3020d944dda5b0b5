//! Presentation data model, the v1 text format, and structural validation.
//!
//! ```text
//! upho-presentation v1
//! generators: x1 x2
//! class: homogeneous
//! zero
//! rel x1 x2 = x2 x1
//! zrel x2 x2
//! ```
//!
//! The header line is optional on input and always emitted on output. The
//! `class:` line is optional; without it no class promise is made.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

pub const HEADER: &str = "upho-presentation v1";

/// Class a presentation promises to belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclaredClass {
    /// No promise; validation flags still describe the relations.
    General,
    Free,
    Homogeneous,
    HeadChanging,
    FreeZero,
}

impl DeclaredClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DeclaredClass::General => "general",
            DeclaredClass::Free => "free",
            DeclaredClass::Homogeneous => "homogeneous",
            DeclaredClass::HeadChanging => "head_changing",
            DeclaredClass::FreeZero => "free_zero",
        }
    }
}

impl FromStr for DeclaredClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "general" => DeclaredClass::General,
            "free" => DeclaredClass::Free,
            "homogeneous" => DeclaredClass::Homogeneous,
            "head_changing" => DeclaredClass::HeadChanging,
            "free_zero" => DeclaredClass::FreeZero,
            other => return Err(Error::InvalidInput(format!("unknown class `{other}`"))),
        })
    }
}

impl fmt::Display for DeclaredClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    Equation {
        lhs: Word,
        rhs: Word,
    },
    /// `word = 0`
    Zero(Word),
}

/// `⟨X | R⟩`, optionally with an absorbing zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    has_zero: bool,
    equations: Vec<(Word, Word)>,
    zero_words: Vec<Word>,
    declared: DeclaredClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub homogeneous: bool,
    pub head_changing: bool,
    pub free_zero: bool,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// `xW = yW` with single-letter heads `x != y` and a shared tail.
pub fn is_head_changing(lhs: &Word, rhs: &Word) -> bool {
    lhs.len() == rhs.len()
        && !lhs.is_empty()
        && lhs.letters()[0] != rhs.letters()[0]
        && lhs.letters()[1..] == rhs.letters()[1..]
}

impl Presentation {
    /// Builds and checks a presentation. Fails on structural errors and on
    /// any violation of the declared class.
    pub fn new(
        alphabet: Alphabet,
        has_zero: bool,
        equations: Vec<(Word, Word)>,
        zero_words: Vec<Word>,
        declared: DeclaredClass,
    ) -> Result<Self> {
        let p = Presentation { alphabet, has_zero, equations, zero_words, declared };
        p.check_structure()?;
        let report = p.validate();
        if let Some(issue) = report.issues.first() {
            return Err(if issue.contains("not length preserving") {
                Error::Heterogeneous(issue.clone())
            } else {
                Error::DeclaredClass(issue.clone())
            });
        }
        Ok(p)
    }

    pub fn free(alphabet: Alphabet) -> Self {
        Presentation {
            alphabet,
            has_zero: false,
            equations: Vec::new(),
            zero_words: Vec::new(),
            declared: DeclaredClass::Free,
        }
    }

    /// Free 0-monoid with the given zero words.
    pub fn free_zero(alphabet: Alphabet, zero_words: Vec<Word>) -> Result<Self> {
        Presentation::new(alphabet, true, Vec::new(), zero_words, DeclaredClass::FreeZero)
    }

    fn check_structure(&self) -> Result<()> {
        let m = self.alphabet.len();
        let in_range = |w: &Word| w.letters().iter().all(|&l| l < m);
        for (l, r) in &self.equations {
            if l.is_empty() || r.is_empty() {
                return Err(Error::InvalidInput("relation sides must be nonempty".into()));
            }
            if !in_range(l) || !in_range(r) {
                return Err(Error::InvalidInput("letter index out of range".into()));
            }
            if l == r {
                return Err(Error::InvalidInput(format!(
                    "trivial relation {} = {}",
                    self.alphabet.render(l),
                    self.alphabet.render(r)
                )));
            }
        }
        for z in &self.zero_words {
            if z.is_empty() {
                return Err(Error::InvalidInput("zero relation must be nonempty".into()));
            }
            if !in_range(z) {
                return Err(Error::InvalidInput("letter index out of range".into()));
            }
        }
        if !self.zero_words.is_empty() && !self.has_zero {
            return Err(Error::ZeroWithoutDeclaration);
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn has_zero(&self) -> bool {
        self.has_zero
    }

    pub fn equations(&self) -> &[(Word, Word)] {
        &self.equations
    }

    pub fn zero_words(&self) -> &[Word] {
        &self.zero_words
    }

    pub fn declared(&self) -> DeclaredClass {
        self.declared
    }

    pub fn relations(&self) -> Vec<Relation> {
        self.equations
            .iter()
            .map(|(l, r)| Relation::Equation { lhs: l.clone(), rhs: r.clone() })
            .chain(self.zero_words.iter().cloned().map(Relation::Zero))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.equations.iter().all(|(l, r)| l.len() == r.len())
    }

    /// Same presentation with a different class promise, re-checked.
    pub fn with_declared(&self, declared: DeclaredClass) -> Result<Self> {
        Presentation::new(
            self.alphabet.clone(),
            self.has_zero,
            self.equations.clone(),
            self.zero_words.clone(),
            declared,
        )
    }

    /// Same presentation with every generator name prefixed.
    pub fn renamed(&self, prefix: &str) -> Result<Self> {
        let alphabet = Alphabet::new(self.alphabet.names().iter().map(|n| format!("{prefix}{n}")))?;
        Ok(Presentation { alphabet, ..self.clone() })
    }

    /// Same presentation over a new alphabet of equal size.
    pub fn relabeled(&self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::LengthMismatch { expected: self.alphabet.len(), got: alphabet.len() });
        }
        Ok(Presentation { alphabet, ..self.clone() })
    }

    /// Most specific class the relations satisfy.
    pub fn inferred_class(&self) -> DeclaredClass {
        let r = self.validate();
        if self.equations.is_empty() && !self.has_zero {
            DeclaredClass::Free
        } else if r.free_zero {
            DeclaredClass::FreeZero
        } else if r.head_changing {
            DeclaredClass::HeadChanging
        } else if r.homogeneous {
            DeclaredClass::Homogeneous
        } else {
            DeclaredClass::General
        }
    }

    /// Syntactic flags plus every violated declaration. Never fails.
    pub fn validate(&self) -> ValidationReport {
        let homogeneous = self.is_homogeneous();
        let head_changing = self.zero_words.is_empty() && self.equations.iter().all(|(l, r)| is_head_changing(l, r));
        let free_zero = self.has_zero && self.equations.is_empty();
        let mut issues = Vec::new();
        let show = |l: &Word, r: &Word| format!("{} = {}", self.alphabet.render(l), self.alphabet.render(r));

        let needs_homogeneous = matches!(self.declared, DeclaredClass::Homogeneous | DeclaredClass::HeadChanging);
        if needs_homogeneous {
            for (l, r) in self.equations.iter().filter(|(l, r)| l.len() != r.len()) {
                issues.push(format!("{} is not length preserving", show(l, r)));
            }
        }
        match self.declared {
            DeclaredClass::Free => {
                if !self.equations.is_empty() || self.has_zero {
                    issues.push("declared free but has relations or a zero".into());
                }
            }
            DeclaredClass::HeadChanging => {
                for (l, r) in self.equations.iter().filter(|(l, r)| !is_head_changing(l, r)) {
                    issues.push(format!("{} is not head-changing", show(l, r)));
                }
                if self.has_zero {
                    issues.push("declared head_changing but declares a zero".into());
                }
            }
            DeclaredClass::FreeZero => {
                if !self.equations.is_empty() {
                    issues.push("declared free_zero but has equational relations".into());
                }
                if !self.has_zero {
                    issues.push("declared free_zero without a zero".into());
                }
            }
            DeclaredClass::General | DeclaredClass::Homogeneous => {}
        }
        ValidationReport { homogeneous, head_changing, free_zero, issues }
    }

    /// Parses the v1 text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut declared = DeclaredClass::General;
        let mut has_zero = false;
        let mut equations = Vec::new();
        let mut zero_words = Vec::new();
        let mut seen_content = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: String| Error::Syntax { line: line_no, msg };
            let first_content = !seen_content;
            seen_content = true;

            if line == HEADER || line.starts_with("upho-presentation") {
                if line != HEADER {
                    return Err(syntax(format!("unsupported header `{line}`")));
                }
                if !first_content {
                    return Err(syntax("header must be the first line".into()));
                }
                continue;
            }
            let (keyword, rest) = match line.find(char::is_whitespace) {
                Some(i) => (&line[..i], line[i..].trim()),
                None => (line, ""),
            };
            match keyword {
                "generators:" => {
                    if alphabet.is_some() {
                        return Err(syntax("generators declared twice".into()));
                    }
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    if names.is_empty() {
                        return Err(syntax("`generators:` needs at least one identifier".into()));
                    }
                    if let Some(bad) = names.iter().find(|n| !crate::word::is_identifier(n)) {
                        return Err(syntax(format!("invalid identifier `{bad}`")));
                    }
                    alphabet = Some(Alphabet::new(names)?);
                }
                "class:" => {
                    declared = rest.parse().map_err(|e: Error| syntax(e.to_string()))?;
                }
                "zero" => {
                    if !rest.is_empty() {
                        return Err(syntax("`zero` takes no arguments".into()));
                    }
                    has_zero = true;
                }
                "rel" => {
                    let x = alphabet.as_ref().ok_or_else(|| syntax("relation before `generators:`".into()))?;
                    let mut sides = rest.split('=');
                    let (l, r) = match (sides.next(), sides.next(), sides.next()) {
                        (Some(l), Some(r), None) => (l, r),
                        _ => return Err(syntax("expected `rel WORD = WORD`".into())),
                    };
                    let lhs = x.parse_word(l).map_err(|e| syntax(e.to_string()))?;
                    let rhs = x.parse_word(r).map_err(|e| syntax(e.to_string()))?;
                    if lhs.is_empty() || rhs.is_empty() {
                        return Err(syntax("relation sides must be nonempty".into()));
                    }
                    equations.push((lhs, rhs));
                }
                "zrel" => {
                    let x = alphabet.as_ref().ok_or_else(|| syntax("relation before `generators:`".into()))?;
                    let w = x.parse_word(rest).map_err(|e| syntax(e.to_string()))?;
                    if w.is_empty() {
                        return Err(syntax("`zrel` needs a nonempty word".into()));
                    }
                    zero_words.push(w);
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or(Error::Syntax { line: 0, msg: "missing `generators:`".into() })?;
        Presentation::new(alphabet, has_zero, equations, zero_words, declared)
    }

    /// Parses raw bytes, which must be UTF-8.
    pub fn parse_bytes(bytes: &[u8]) -> Result<Self> {
        let text =
            std::str::from_utf8(bytes).map_err(|e| Error::Syntax { line: 0, msg: format!("invalid UTF-8: {e}") })?;
        Presentation::parse(text)
    }

    /// Canonical v1 text: header, generators, class, zero, rel lines, zrel lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str("generators:");
        for n in self.alphabet.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        if self.declared != DeclaredClass::General {
            out.push_str(&format!("class: {}\n", self.declared));
        }
        if self.has_zero {
            out.push_str("zero\n");
        }
        for (l, r) in &self.equations {
            out.push_str(&format!("rel {} = {}\n", self.alphabet.render(l), self.alphabet.render(r)));
        }
        for z in &self.zero_words {
            out.push_str(&format!("zrel {}\n", self.alphabet.render(z)));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_file() {
        let p = Presentation::parse("generators: a\n").unwrap();
        assert_eq!(p.alphabet().len(), 1);
        assert!(p.equations().is_empty() && !p.has_zero());
    }

    #[test]
    fn commutative() {
        let p = Presentation::parse("generators: x1 x2\nrel x1 x2 = x2 x1\n").unwrap();
        let r = p.validate();
        assert!(r.homogeneous);
        assert!(!r.head_changing);
        assert_eq!(p.equations().len(), 1);
    }

    #[test]
    fn zero_with_equations() {
        let text = "generators: a b\nzero\nzrel b b\nrel a b = b a\n";
        assert!(Presentation::parse(text).is_ok());
        let declared = "generators: a b\nclass: free_zero\nzero\nzrel b b\nrel a b = b a\n";
        assert!(matches!(Presentation::parse(declared), Err(Error::DeclaredClass(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Presentation::parse("generators: a a\n"), Err(Error::DuplicateGenerator(_))));
        assert!(matches!(Presentation::parse("generators: a\nzrel a a\n"), Err(Error::ZeroWithoutDeclaration)));
        assert!(matches!(
            Presentation::parse("generators: a b\nclass: homogeneous\nrel a a a = b a\n"),
            Err(Error::Heterogeneous(_))
        ));
        match Presentation::parse("generators: a\n\nrel a = q\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Presentation::parse("rel a = a\n"), Err(Error::Syntax { .. })));
        assert!(matches!(Presentation::parse("generators: a\nfoo\n"), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn validate_examples() {
        let p = Presentation::parse("generators: a b c\nrel c a = a a\n").unwrap();
        let r = p.validate();
        assert!(r.head_changing && r.homogeneous);

        let p = Presentation::parse("generators: x1 x2\nrel x1 x1 x1 = x2 x1\n").unwrap();
        let r = p.validate();
        assert!(!r.homogeneous);
    }

    #[test]
    fn roundtrip_with_comments() {
        let text = "# comment\nupho-presentation v1\ngenerators:  a   b # trailing\nclass: homogeneous\nzero\nzrel b b\nrel a b = b a\n";
        let p = Presentation::parse(text).unwrap();
        let out = p.to_text();
        assert_eq!(out, "upho-presentation v1\ngenerators: a b\nclass: homogeneous\nzero\nrel a b = b a\nzrel b b\n");
        assert_eq!(Presentation::parse(&out).unwrap(), p);
    }
}
