//! Text catalog of named functions.
//!
//! ```text
//! # comment
//! function OR4
//! n 4
//! q 2
//! builtin OR 4
//! end
//!
//! function XOR2
//! n 2
//! q 2
//! 00 0
//! 01 1
//! 10 1
//! 11 0
//! end
//! ```
//!
//! A record either names a builtin constructor or lists `string bit` lines.
//! The `n` and `q` lines are optional for builtins and checked when present.
//! Builtins that take function arguments refer to records defined earlier.

use std::fmt;

use thiserror::Error;

use super::{
    compose_full, compose_index, compose_uind, format_word, parse_word, sabotage, BoolFnError,
    PartialFunction,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("function {name}: {source}")]
    Function { name: String, source: BoolFnError },
    #[error("function {0} is defined twice")]
    DuplicateName(String),
    #[error("unknown function {0}")]
    UnknownFunction(String),
}

/// A constructor call naming one of the builtin families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinSpec {
    Or(usize),
    And(usize),
    Parity(usize),
    Maj(usize),
    Id,
    Const(usize, bool),
    UniqueOr(usize),
    Collision(usize),
    Ind(usize, String),
    UInd(usize, String),
    Sab(String),
    Compose(String, String),
    Neg(String),
}

impl BuiltinSpec {
    /// Parses whitespace-separated tokens such as `IND 2 OR4`.
    pub fn parse(tokens: &[&str]) -> Result<Self, String> {
        let num = |i: usize| -> Result<usize, String> {
            let t = tokens.get(i).ok_or("missing numeric argument")?;
            t.parse::<usize>().map_err(|_| format!("bad number {t:?}"))
        };
        let name = |i: usize| -> Result<String, String> {
            tokens.get(i).map(|s| s.to_string()).ok_or_else(|| "missing function name".into())
        };
        let (head, arity) = match tokens.first() {
            Some(h) => (h.to_ascii_uppercase(), tokens.len() - 1),
            None => return Err("empty constructor".into()),
        };
        let expect = |k: usize| {
            if arity == k {
                Ok(())
            } else {
                Err(format!("{head} takes {k} argument(s), got {arity}"))
            }
        };
        let spec = match head.as_str() {
            "OR" => expect(1).and(num(1)).map(Self::Or)?,
            "AND" => expect(1).and(num(1)).map(Self::And)?,
            "PARITY" | "XOR" => expect(1).and(num(1)).map(Self::Parity)?,
            "MAJ" => expect(1).and(num(1)).map(Self::Maj)?,
            "ID" => expect(0).map(|_| Self::Id)?,
            "CONST" => {
                expect(2)?;
                let bit = match tokens[2] {
                    "0" => false,
                    "1" => true,
                    other => return Err(format!("bad constant {other:?}")),
                };
                Self::Const(num(1)?, bit)
            }
            "UOR" => expect(1).and(num(1)).map(Self::UniqueOr)?,
            "COLLISION" => expect(1).and(num(1)).map(Self::Collision)?,
            "IND" => {
                expect(2)?;
                Self::Ind(num(1)?, name(2)?)
            }
            "UIND" => {
                expect(2)?;
                Self::UInd(num(1)?, name(2)?)
            }
            "SAB" => expect(1).and(name(1)).map(Self::Sab)?,
            "COMPOSE" | "COMP" => {
                expect(2)?;
                Self::Compose(name(1)?, name(2)?)
            }
            "NEG" => expect(1).and(name(1)).map(Self::Neg)?,
            other => return Err(format!("unknown constructor {other}")),
        };
        Ok(spec)
    }

    /// Names of catalog functions this spec refers to.
    pub fn dependencies(&self) -> Vec<&str> {
        match self {
            Self::Ind(_, f) | Self::UInd(_, f) | Self::Sab(f) | Self::Neg(f) => vec![f],
            Self::Compose(f, g) => vec![f, g],
            _ => vec![],
        }
    }

    /// Builds the function, resolving names through `lookup`.
    pub fn build<'a>(
        &self,
        lookup: impl Fn(&str) -> Option<&'a PartialFunction>,
        cap: usize,
    ) -> Result<PartialFunction, CatalogError> {
        let get = |name: &str| lookup(name).ok_or_else(|| CatalogError::UnknownFunction(name.into()));
        let small = |n: usize| -> Result<usize, BoolFnError> {
            if n == 0 || (1u64 << n.min(63)) > cap as u64 || n > 63 {
                Err(BoolFnError::ArityOverflow { required: format!("2^{n}"), cap })
            } else {
                Ok(n)
            }
        };
        let wrap = |source: BoolFnError| CatalogError::Function { name: self.to_string(), source };
        let f = match self {
            Self::Or(n) => PartialFunction::or(small(*n).map_err(wrap)?),
            Self::And(n) => PartialFunction::and(small(*n).map_err(wrap)?),
            Self::Parity(n) => PartialFunction::parity(small(*n).map_err(wrap)?),
            Self::Maj(n) => PartialFunction::majority(small(*n).map_err(wrap)?),
            Self::Id => PartialFunction::identity(),
            Self::Const(n, b) => PartialFunction::constant(small(*n).map_err(wrap)?, *b),
            Self::UniqueOr(n) => {
                if *n == 0 || *n > 63 || *n > cap {
                    return Err(wrap(BoolFnError::ArityOverflow { required: n.to_string(), cap }));
                }
                PartialFunction::unique_marked_or(*n)
            }
            Self::Collision(n) => {
                if *n < 2 || *n > 8 {
                    return Err(wrap(BoolFnError::ArityOverflow { required: format!("{n}^{n}"), cap }));
                }
                PartialFunction::collision(*n).map_err(wrap)?
            }
            Self::Ind(k, name) => compose_index(get(name)?, *k, cap).map_err(wrap)?,
            Self::UInd(k, name) => compose_uind(get(name)?, *k, cap).map_err(wrap)?,
            Self::Sab(name) => {
                let f = get(name)?;
                if 4u64.checked_pow(f.n() as u32).is_none_or(|s| s > cap as u64) {
                    return Err(wrap(BoolFnError::ArityOverflow {
                        required: format!("4^{}", f.n()),
                        cap,
                    }));
                }
                sabotage(f).map_err(wrap)?
            }
            Self::Compose(outer, inner) => compose_full(get(outer)?, get(inner)?, cap).map_err(wrap)?,
            Self::Neg(name) => get(name)?.negate(),
        };
        Ok(f)
    }

    /// Default catalog name for the constructed function.
    pub fn derived_name(&self) -> String {
        match self {
            Self::Or(n) => format!("OR{n}"),
            Self::And(n) => format!("AND{n}"),
            Self::Parity(n) => format!("PARITY{n}"),
            Self::Maj(n) => format!("MAJ{n}"),
            Self::Id => "ID1".into(),
            Self::Const(n, b) => format!("CONST{}_{n}", *b as u8),
            Self::UniqueOr(n) => format!("UOR{n}"),
            Self::Collision(n) => format!("COLLISION{n}"),
            Self::Ind(k, f) => format!("IND{k}_{f}"),
            Self::UInd(k, f) => format!("UIND{k}_{f}"),
            Self::Sab(f) => format!("SAB_{f}"),
            Self::Compose(f, g) => format!("{f}o{g}"),
            Self::Neg(f) => format!("NOT_{f}"),
        }
    }
}

impl fmt::Display for BuiltinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Or(n) => write!(f, "OR {n}"),
            Self::And(n) => write!(f, "AND {n}"),
            Self::Parity(n) => write!(f, "PARITY {n}"),
            Self::Maj(n) => write!(f, "MAJ {n}"),
            Self::Id => write!(f, "ID"),
            Self::Const(n, b) => write!(f, "CONST {n} {}", *b as u8),
            Self::UniqueOr(n) => write!(f, "UOR {n}"),
            Self::Collision(n) => write!(f, "COLLISION {n}"),
            Self::Ind(k, g) => write!(f, "IND {k} {g}"),
            Self::UInd(k, g) => write!(f, "UIND {k} {g}"),
            Self::Sab(g) => write!(f, "SAB {g}"),
            Self::Compose(g, h) => write!(f, "COMPOSE {g} {h}"),
            Self::Neg(g) => write!(f, "NEG {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntrySource {
    Builtin(BuiltinSpec),
    Listing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub source: EntrySource,
    pub function: PartialFunction,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&PartialFunction> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.function)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// Builds and appends a builtin record.
    pub fn add_builtin(
        &mut self,
        name: &str,
        spec: BuiltinSpec,
        cap: usize,
    ) -> Result<&CatalogEntry, CatalogError> {
        if self.get(name).is_some() {
            return Err(CatalogError::DuplicateName(name.into()));
        }
        let function = spec.build(|n| self.get(n), cap)?.with_name(name);
        self.entries.push(CatalogEntry { name: name.into(), source: EntrySource::Builtin(spec), function });
        Ok(self.entries.last().unwrap())
    }

    /// Appends an explicitly listed function.
    pub fn add_listing(&mut self, name: &str, function: PartialFunction) -> Result<(), CatalogError> {
        if self.get(name).is_some() {
            return Err(CatalogError::DuplicateName(name.into()));
        }
        let function = function.with_name(name);
        self.entries.push(CatalogEntry { name: name.into(), source: EntrySource::Listing, function });
        Ok(())
    }

    /// Serializes to the text format; `parse_catalog` reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# querybench catalog v1\n");
        for e in &self.entries {
            let f = &e.function;
            out.push_str(&format!("\nfunction {}\nn {}\nq {}\n", e.name, f.n(), f.q()));
            match &e.source {
                EntrySource::Builtin(spec) => out.push_str(&format!("builtin {spec}\n")),
                EntrySource::Listing => {
                    for (x, v) in f.entries() {
                        out.push_str(&format!("{} {}\n", format_word(&x, f.q()), v as u8));
                    }
                }
            }
            out.push_str("end\n");
        }
        out
    }
}

/// Parses the catalog text format, building every function with the given
/// enumeration cap.
pub fn parse_catalog(text: &str, cap: usize) -> Result<Catalog, CatalogError> {
    let mut catalog = Catalog::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let syntax = |line: usize, message: &str| CatalogError::Syntax { line, message: message.into() };

    while let Some((lineno, line)) = lines.next() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let name = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["function", name] => name.to_string(),
            _ => return Err(syntax(lineno, "expected `function <name>`")),
        };
        let mut n: Option<usize> = None;
        let mut q: Option<u8> = None;
        let mut builtin: Option<BuiltinSpec> = None;
        let mut listing = Vec::new();
        let mut closed = false;
        for (lineno, line) in lines.by_ref() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["end"] => {
                    closed = true;
                    break;
                }
                ["n", v] => n = Some(v.parse().map_err(|_| syntax(lineno, "bad n"))?),
                ["q", v] => q = Some(v.parse().map_err(|_| syntax(lineno, "bad q"))?),
                ["builtin", rest @ ..] => {
                    if builtin.is_some() {
                        return Err(syntax(lineno, "second builtin line"));
                    }
                    builtin = Some(BuiltinSpec::parse(rest).map_err(|m| syntax(lineno, &m))?);
                }
                [word, bit] => {
                    let x = parse_word(word).ok_or_else(|| syntax(lineno, "bad letter string"))?;
                    let v = match *bit {
                        "0" => false,
                        "1" => true,
                        _ => return Err(syntax(lineno, "value must be 0 or 1")),
                    };
                    listing.push((x, v, lineno));
                }
                _ => return Err(syntax(lineno, "unrecognized line")),
            }
        }
        if !closed {
            return Err(syntax(lineno, "record is missing `end`"));
        }
        let wrap = |source| CatalogError::Function { name: name.clone(), source };
        match builtin {
            Some(spec) => {
                if !listing.is_empty() {
                    return Err(syntax(lineno, "record has both a builtin and a listing"));
                }
                let entry = catalog.add_builtin(&name, spec, cap)?;
                let f = &entry.function;
                if n.is_some_and(|n| n != f.n()) || q.is_some_and(|q| q != f.q()) {
                    return Err(syntax(lineno, "declared n/q do not match the builtin"));
                }
            }
            None => {
                let (n, q) = match (n, q) {
                    (Some(n), Some(q)) => (n, q),
                    _ => return Err(syntax(lineno, "listing needs `n` and `q` lines")),
                };
                if listing.len() > cap {
                    return Err(wrap(BoolFnError::ArityOverflow {
                        required: listing.len().to_string(),
                        cap,
                    }));
                }
                let f = PartialFunction::new(n, q, listing.into_iter().map(|(x, v, _)| (x, v)))
                    .map_err(wrap)?;
                catalog.add_listing(&name, f)?;
            }
        }
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::DEFAULT_DOMAIN_CAP;

    const SAMPLE: &str = "\
# sample
function OR4
builtin OR 4
end

function ID1
n 1
q 2
builtin ID
end

function XOR2
n 2
q 2
00 0
01 1
10 1
11 0
end

function IND1_ID1
builtin IND 1 ID1
end

function SAB_XOR2
builtin SAB XOR2
end
";

    #[test]
    fn parses_sample() {
        let c = parse_catalog(SAMPLE, DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(c.names().collect::<Vec<_>>(), ["OR4", "ID1", "XOR2", "IND1_ID1", "SAB_XOR2"]);
        assert_eq!(c.get("XOR2").unwrap(), &PartialFunction::parity(2));
        assert_eq!(c.get("IND1_ID1").unwrap().n(), 3);
        assert_eq!(c.get("SAB_XOR2").unwrap().q(), 4);
    }

    #[test]
    fn round_trips_through_text() {
        let c = parse_catalog(SAMPLE, DEFAULT_DOMAIN_CAP).unwrap();
        let again = parse_catalog(&c.to_text(), DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn sabotage_listing_uses_symbols() {
        let mut c = Catalog::new();
        c.add_builtin("AND2", BuiltinSpec::And(2), DEFAULT_DOMAIN_CAP).unwrap();
        let sab = sabotage(c.get("AND2").unwrap()).unwrap();
        c.add_listing("S", sab).unwrap();
        let text = c.to_text();
        assert!(text.contains("1* 0"));
        assert!(text.contains("†† 1"));
        assert_eq!(parse_catalog(&text, DEFAULT_DOMAIN_CAP).unwrap(), c);
    }

    #[test]
    fn errors() {
        let cases = [
            ("function A\nbuiltin OR 2\n", "missing `end`"),
            ("function A\nbuiltin FOO 2\nend\n", "unknown constructor"),
            ("function A\nbuiltin IND 1 B\nend\n", "unknown function"),
            ("function A\nn 1\nq 2\n0 1\n0 0\nend\n", "listed twice"),
            ("function A\nn 2\nbuiltin OR 2\nend\nfunction A\nbuiltin OR 2\nend\n", "twice"),
            ("function A\nn 3\nbuiltin OR 2\nend\n", "do not match"),
            ("garbage\n", "expected `function"),
        ];
        for (text, needle) in cases {
            let err = parse_catalog(text, DEFAULT_DOMAIN_CAP).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} gave {err}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let text = "function O\nbuiltin OR 4\nend\nfunction I\nbuiltin IND 5 O\nend\n";
        let err = parse_catalog(text, DEFAULT_DOMAIN_CAP).unwrap_err();
        assert!(matches!(
            err,
            CatalogError::Function { source: BoolFnError::ArityOverflow { .. }, .. }
        ));
        assert!(parse_catalog("function O\nbuiltin OR 30\nend\n", 1 << 20).is_err());
    }
}
