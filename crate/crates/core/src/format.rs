//! The line-oriented presentation file format.
//!
//! ```text
//! signature
//!   op f 1
//!   op e 0
//! generators a b
//! relations
//!   f(f(a)) = a
//! equations
//!   vars x
//!   f(f(x)) = f(x)
//! algebra Flip
//!   carrier 0 1
//!   op f: (0)->1 (1)->0
//!   op e: ()->0
//! monoid Bool
//!   carrier 0 1
//!   unit 1
//!   mult (0,0)->0 (0,1)->0 (1,0)->0 (1,1)->1
//! monad powerset
//! ```
//!
//! A line that starts in column 1 opens a block; indented lines belong to
//! the block above. `#` starts a comment. Blocks may come in any order.
//! Printing is canonical: two-space indent, one declaration per line, `\n`
//! line endings, named blocks sorted by name.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::adjunction::{monoid_corpus, monoid_from_rows, FiniteMonoid};
use crate::algebra::{FiniteAlgebra, OpRows};
use crate::congruence::{GroundPresentation, Relation};
use crate::equational::{Equation, EquationalPresentation};
use crate::finset::{Atom, FinSet};
use crate::signature::Signature;
use crate::term::{is_identifier, parse_term, Term, TermSyntaxError, TermSyntaxErrorKind};

/// Which monad a file asks for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonadSpec {
    Identity,
    Powerset,
    /// Free `M`-sets for the named monoid block.
    FreeMSet(String),
    /// The free monad on the file's signature.
    Terms,
    /// The monad presented by the file's signature and equations.
    Presented,
}

impl fmt::Display for MonadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadSpec::Identity => f.write_str("identity"),
            MonadSpec::Powerset => f.write_str("powerset"),
            MonadSpec::FreeMSet(m) => write!(f, "free {m}"),
            MonadSpec::Terms => f.write_str("terms"),
            MonadSpec::Presented => f.write_str("presented"),
        }
    }
}

/// Everything a presentation file can declare.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationFile {
    pub signature: Signature,
    pub generators: Option<FinSet>,
    pub relations: Vec<Relation>,
    pub equations: Vec<Equation>,
    pub algebras: BTreeMap<String, FiniteAlgebra>,
    pub monoids: BTreeMap<String, FiniteMonoid>,
    pub monad: Option<MonadSpec>,
}

impl PresentationFile {
    pub fn generators(&self) -> FinSet {
        self.generators.clone().unwrap_or_default()
    }

    pub fn ground_presentation(&self) -> crate::Result<GroundPresentation> {
        GroundPresentation::new(
            self.signature.clone(),
            self.generators(),
            self.relations.clone(),
        )
    }

    pub fn equational_presentation(&self) -> crate::Result<EquationalPresentation> {
        EquationalPresentation::new(self.signature.clone(), self.equations.clone())
    }
}

/// A parse failure with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: expected {expected}")]
    SyntaxError {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("line {line}, column {col}: `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        line: usize,
        col: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {col}: unknown symbol `{name}`")]
    UnknownSymbol {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("line {line}, column {col}: {message}")]
    Invalid {
        line: usize,
        col: usize,
        message: String,
    },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match self {
            FormatError::SyntaxError { line, .. }
            | FormatError::ArityMismatch { line, .. }
            | FormatError::UnknownSymbol { line, .. }
            | FormatError::Invalid { line, .. } => *line,
        }
    }

    pub fn col(&self) -> usize {
        match self {
            FormatError::SyntaxError { col, .. }
            | FormatError::ArityMismatch { col, .. }
            | FormatError::UnknownSymbol { col, .. }
            | FormatError::Invalid { col, .. } => *col,
        }
    }
}

type Parsed<T> = Result<T, FormatError>;

/// A word of a line and its 1-based column.
#[derive(Clone, Copy, Debug)]
struct Word<'a> {
    col: usize,
    text: &'a str,
}

#[derive(Clone, Debug)]
struct Line<'a> {
    no: usize,
    /// Column of `text`'s first character.
    col: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn words(&self) -> Vec<Word<'a>> {
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        for (byte, c) in self.text.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(self.word_at(s, byte));
                }
            } else if start.is_none() {
                start = Some(byte);
            }
        }
        if let Some(s) = start {
            out.push(self.word_at(s, self.text.len()));
        }
        out
    }

    fn word_at(&self, from: usize, to: usize) -> Word<'a> {
        Word {
            col: self.col_of(from),
            text: &self.text[from..to],
        }
    }

    /// Column of a byte offset into `text`.
    fn col_of(&self, byte: usize) -> usize {
        self.col + self.text[..byte].chars().count()
    }

    fn syntax(&self, byte: usize, expected: impl Into<String>) -> FormatError {
        FormatError::SyntaxError {
            line: self.no,
            col: self.col_of(byte),
            expected: expected.into(),
        }
    }

    fn invalid(&self, col: usize, message: impl Into<String>) -> FormatError {
        FormatError::Invalid {
            line: self.no,
            col,
            message: message.into(),
        }
    }
}

struct Block<'a> {
    header: Line<'a>,
    body: Vec<Line<'a>>,
}

fn split_lines(text: &str) -> Parsed<Vec<Block<'_>>> {
    let mut blocks: Vec<Block<'_>> = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let trimmed = content.trim_start();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let line = Line {
            no: i + 1,
            col: content[..lead].chars().count() + 1,
            text: trimmed,
        };
        if lead == 0 {
            blocks.push(Block {
                header: line,
                body: Vec::new(),
            });
        } else {
            match blocks.last_mut() {
                Some(b) => b.body.push(line),
                None => return Err(line.syntax(0, "a block keyword before indented lines")),
            }
        }
    }
    Ok(blocks)
}

const KEYWORDS: &str =
    "`signature`, `generators`, `relations`, `equations`, `algebra`, `monoid` or `monad`";

fn identifier(line: &Line<'_>, w: Word<'_>, what: &str) -> Parsed<String> {
    if is_identifier(w.text) {
        Ok(w.text.to_string())
    } else {
        Err(FormatError::SyntaxError {
            line: line.no,
            col: w.col,
            expected: what.to_string(),
        })
    }
}

fn is_label(s: &str) -> bool {
    !s.is_empty()
        && !s.contains(['(', ')', ',', ':', ';', '#'])
        && !s.contains("->")
        && !s.chars().any(char::is_whitespace)
}

fn label(line: &Line<'_>, w: Word<'_>) -> Parsed<Atom> {
    if is_label(w.text) {
        Ok(Atom::name(w.text))
    } else {
        Err(FormatError::SyntaxError {
            line: line.no,
            col: w.col,
            expected: "an element label".into(),
        })
    }
}

fn term_error(line: &Line<'_>, start_col: usize, part: &str, e: TermSyntaxError) -> FormatError {
    let col = start_col + part[..(e.col - 1).min(part.len())].chars().count();
    match e.kind {
        TermSyntaxErrorKind::Expected(what) => FormatError::SyntaxError {
            line: line.no,
            col,
            expected: what.to_string(),
        },
        TermSyntaxErrorKind::UnknownSymbol(name) => FormatError::UnknownSymbol {
            name,
            line: line.no,
            col,
        },
        TermSyntaxErrorKind::UnknownGenerator(name) => FormatError::Invalid {
            line: line.no,
            col,
            message: format!("`{name}` is not a declared generator or variable"),
        },
        TermSyntaxErrorKind::ArityMismatch {
            symbol,
            expected,
            found,
        } => FormatError::ArityMismatch {
            symbol,
            line: line.no,
            col,
            expected,
            found,
        },
    }
}

/// Reads `lhs = rhs`.
fn term_pair(
    line: &Line<'_>,
    sig: &Signature,
    leaves: &FinSet,
) -> Parsed<(Term<Atom>, Term<Atom>)> {
    let eq = line
        .text
        .find('=')
        .ok_or_else(|| line.syntax(line.text.len(), "`=`"))?;
    let (lhs, rhs) = (&line.text[..eq], &line.text[eq + 1..]);
    let l = parse_term(lhs, sig, Some(leaves)).map_err(|e| term_error(line, line.col, lhs, e))?;
    let rcol = line.col_of(eq + 1);
    let r = parse_term(rhs, sig, Some(leaves)).map_err(|e| term_error(line, rcol, rhs, e))?;
    Ok((l, r))
}

/// Reads `(a,b)->c` entries, returning argument and value labels.
fn table_entries(line: &Line<'_>, from: usize) -> Parsed<Vec<(Vec<Atom>, Atom)>> {
    let rest = Line {
        no: line.no,
        col: line.col_of(from),
        text: &line.text[from..],
    };
    let mut out = Vec::new();
    for w in rest.words() {
        let bad = || FormatError::SyntaxError {
            line: line.no,
            col: w.col,
            expected: "an entry `(a,b)->c`".into(),
        };
        let (args, value) = w.text.split_once("->").ok_or_else(bad)?;
        let inner = args
            .strip_prefix('(')
            .and_then(|a| a.strip_suffix(')'))
            .ok_or_else(bad)?;
        let args = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|a| {
                    if is_label(a) {
                        Ok(Atom::name(a))
                    } else {
                        Err(bad())
                    }
                })
                .collect::<Parsed<Vec<_>>>()?
        };
        if !is_label(value) {
            return Err(bad());
        }
        out.push((args, Atom::name(value)));
    }
    Ok(out)
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: &Line<'_>, what: &str) -> Parsed<()> {
    if slot.is_some() {
        return Err(line.invalid(line.col, format!("second {what} block")));
    }
    *slot = Some(value);
    Ok(())
}

fn no_body(b: &Block<'_>) -> Parsed<()> {
    match b.body.first() {
        Some(l) => Err(l.syntax(0, "a new block; this block takes no indented lines")),
        None => Ok(()),
    }
}

fn parse_signature(b: &Block<'_>) -> Parsed<Signature> {
    let mut ops: Vec<(String, usize)> = Vec::new();
    for line in &b.body {
        let w = line.words();
        if w.first().map(|w| w.text) != Some("op") {
            return Err(line.syntax(0, "`op <name> <arity>`"));
        }
        let name = identifier(
            line,
            *w.get(1)
                .ok_or_else(|| line.syntax(line.text.len(), "an operation name"))?,
            "an operation name",
        )?;
        let arity_word = w
            .get(2)
            .ok_or_else(|| line.syntax(line.text.len(), "an arity"))?;
        let arity: usize =
            arity_word
                .text
                .parse()
                .ok()
                .filter(|&a| a <= 16)
                .ok_or(FormatError::SyntaxError {
                    line: line.no,
                    col: arity_word.col,
                    expected: "an arity between 0 and 16".into(),
                })?;
        if let Some(extra) = w.get(3) {
            return Err(FormatError::SyntaxError {
                line: line.no,
                col: extra.col,
                expected: "end of line".into(),
            });
        }
        if ops.iter().any(|(n, _)| *n == name) {
            return Err(line.invalid(w[1].col, format!("operation `{name}` declared twice")));
        }
        ops.push((name, arity));
    }
    Signature::new(ops).map_err(|e| b.header.invalid(b.header.col, e.to_string()))
}

/// Reads identifiers that are not operation names.
fn leaf_names(line: &Line<'_>, words: &[Word<'_>], sig: &Signature, what: &str) -> Parsed<FinSet> {
    let mut out = Vec::new();
    for &w in words {
        let name = identifier(line, w, what)?;
        if sig.arity(&name).is_some() {
            return Err(line.invalid(w.col, format!("`{name}` is already an operation")));
        }
        let a = Atom::name(&name);
        if out.contains(&a) {
            return Err(line.invalid(w.col, format!("`{name}` listed twice")));
        }
        out.push(a);
    }
    Ok(FinSet::collect(out))
}

fn parse_algebra(b: &Block<'_>, sig: &Signature) -> Parsed<FiniteAlgebra> {
    let mut carrier: Option<FinSet> = None;
    let mut rows: Vec<OpRows> = Vec::new();
    for line in &b.body {
        let w = line.words();
        match w[0].text {
            "carrier" => {
                let labels = w[1..]
                    .iter()
                    .map(|&x| label(line, x))
                    .collect::<Parsed<Vec<_>>>()?;
                let set = FinSet::new(labels).map_err(|e| line.invalid(line.col, e.to_string()))?;
                set_once(&mut carrier, set, line, "carrier")?;
            }
            "op" => {
                let carrier = carrier.as_ref().ok_or_else(|| {
                    line.invalid(line.col, "`carrier` must come before the tables")
                })?;
                let colon = line
                    .text
                    .find(':')
                    .ok_or_else(|| line.syntax(line.text.len(), "`:` after the operation name"))?;
                let name_part = line.text[2..colon].trim();
                let name_col = line.col_of(2 + line.text[2..colon].find(name_part).unwrap_or(0));
                if !is_identifier(name_part) {
                    return Err(FormatError::SyntaxError {
                        line: line.no,
                        col: name_col,
                        expected: "an operation name".into(),
                    });
                }
                let arity = sig
                    .arity(name_part)
                    .ok_or_else(|| FormatError::UnknownSymbol {
                        name: name_part.to_string(),
                        line: line.no,
                        col: name_col,
                    })?;
                let entries = table_entries(line, colon + 1)?;
                for (args, value) in &entries {
                    if args.len() != arity {
                        return Err(FormatError::ArityMismatch {
                            symbol: name_part.to_string(),
                            line: line.no,
                            col: name_col,
                            expected: arity,
                            found: args.len(),
                        });
                    }
                    if let Some(x) = args.iter().chain([value]).find(|x| !carrier.contains(x)) {
                        return Err(line.invalid(name_col, format!("`{x}` is not in the carrier")));
                    }
                }
                match rows.iter_mut().find(|(n, _)| n == name_part) {
                    Some((_, es)) => es.extend(entries),
                    None => rows.push((name_part.to_string(), entries)),
                }
            }
            _ => return Err(line.syntax(0, "`carrier` or `op`")),
        }
    }
    let carrier =
        carrier.ok_or_else(|| b.header.invalid(b.header.col, "algebra without `carrier`"))?;
    FiniteAlgebra::from_rows(sig.clone(), carrier, &rows)
        .map_err(|e| b.header.invalid(b.header.col, e.to_string()))
}

fn parse_monoid(b: &Block<'_>) -> Parsed<FiniteMonoid> {
    let mut carrier: Option<FinSet> = None;
    let mut unit: Option<String> = None;
    let mut rows: Vec<(String, String, String)> = Vec::new();
    for line in &b.body {
        let w = line.words();
        match w[0].text {
            "carrier" => {
                let labels = w[1..]
                    .iter()
                    .map(|&x| label(line, x))
                    .collect::<Parsed<Vec<_>>>()?;
                let set = FinSet::new(labels).map_err(|e| line.invalid(line.col, e.to_string()))?;
                set_once(&mut carrier, set, line, "carrier")?;
            }
            "unit" => {
                if w.len() != 2 {
                    return Err(line.syntax(line.text.len(), "exactly one unit element"));
                }
                let u = label(line, w[1])?;
                set_once(&mut unit, u.to_string(), line, "unit")?;
            }
            "mult" => {
                for (args, value) in table_entries(line, 4)? {
                    if args.len() != 2 {
                        return Err(FormatError::ArityMismatch {
                            symbol: "mult".into(),
                            line: line.no,
                            col: line.col,
                            expected: 2,
                            found: args.len(),
                        });
                    }
                    rows.push((args[0].to_string(), args[1].to_string(), value.to_string()));
                }
            }
            _ => return Err(line.syntax(0, "`carrier`, `unit` or `mult`")),
        }
    }
    let invalid = |m: String| b.header.invalid(b.header.col, m);
    let carrier = carrier.ok_or_else(|| invalid("monoid without `carrier`".into()))?;
    let unit = unit.ok_or_else(|| invalid("monoid without `unit`".into()))?;
    monoid_from_rows(carrier, &unit, &rows).map_err(|e| invalid(e.to_string()))
}

/// `parse`: reads and validates a presentation file.
pub fn parse(text: &str) -> Result<PresentationFile, FormatError> {
    let blocks = split_lines(text)?;
    let mut file = PresentationFile::default();

    fn keyword<'a>(b: &Block<'a>) -> &'a str {
        b.header.words()[0].text
    }
    let mut seen_signature = false;
    for b in blocks.iter().filter(|b| keyword(b) == "signature") {
        if seen_signature {
            return Err(b.header.invalid(b.header.col, "second signature block"));
        }
        if let Some(extra) = b.header.words().get(1) {
            return Err(FormatError::SyntaxError {
                line: b.header.no,
                col: extra.col,
                expected: "end of line".into(),
            });
        }
        seen_signature = true;
        file.signature = parse_signature(b)?;
    }
    let sig = file.signature.clone();
    for b in blocks.iter().filter(|b| keyword(b) == "generators") {
        no_body(b)?;
        let gens = leaf_names(&b.header, &b.header.words()[1..], &sig, "a generator name")?;
        set_once(&mut file.generators, gens, &b.header, "generators")?;
    }
    let gens = file.generators();

    let mut free_refs: Vec<(Line<'_>, String)> = Vec::new();
    for b in &blocks {
        let words = b.header.words();
        let extra = |k: usize| -> Parsed<()> {
            match words.get(k) {
                Some(w) => Err(FormatError::SyntaxError {
                    line: b.header.no,
                    col: w.col,
                    expected: "end of line".into(),
                }),
                None => Ok(()),
            }
        };
        let name = |what: &str| -> Parsed<String> {
            let w = words.get(1).ok_or_else(|| {
                b.header
                    .syntax(b.header.text.len(), format!("a {what} name"))
            })?;
            identifier(&b.header, *w, &format!("a {what} name"))
        };
        match words[0].text {
            "signature" | "generators" => {}
            "relations" => {
                extra(1)?;
                for line in &b.body {
                    file.relations.push(term_pair(line, &sig, &gens)?);
                }
            }
            "equations" => {
                extra(1)?;
                let mut vars = FinSet::empty();
                for line in &b.body {
                    let w = line.words();
                    if w[0].text == "vars" {
                        vars = leaf_names(line, &w[1..], &sig, "a variable name")?;
                        continue;
                    }
                    let (lhs, rhs) = term_pair(line, &sig, &vars)?;
                    let eq = Equation::new(&sig, vars.clone(), lhs, rhs)
                        .map_err(|e| line.invalid(line.col, e.to_string()))?;
                    file.equations.push(eq);
                }
            }
            "algebra" => {
                let n = name("algebra")?;
                extra(2)?;
                let a = parse_algebra(b, &sig)?;
                if file.algebras.insert(n.clone(), a).is_some() {
                    return Err(b
                        .header
                        .invalid(words[1].col, format!("algebra `{n}` declared twice")));
                }
            }
            "monoid" => {
                let n = name("monoid")?;
                extra(2)?;
                let m = parse_monoid(b)?;
                if file.monoids.insert(n.clone(), m).is_some() {
                    return Err(b
                        .header
                        .invalid(words[1].col, format!("monoid `{n}` declared twice")));
                }
            }
            "monad" => {
                no_body(b)?;
                let kind = words
                    .get(1)
                    .ok_or_else(|| b.header.syntax(b.header.text.len(), "a monad kind"))?;
                let spec =
                    match kind.text {
                        "identity" => MonadSpec::Identity,
                        "powerset" => MonadSpec::Powerset,
                        "terms" => MonadSpec::Terms,
                        "presented" => MonadSpec::Presented,
                        "free" => {
                            let m = words.get(2).ok_or_else(|| {
                                b.header.syntax(b.header.text.len(), "a monoid name")
                            })?;
                            let m = identifier(&b.header, *m, "a monoid name")?;
                            free_refs.push((b.header.clone(), m.clone()));
                            extra(3)?;
                            MonadSpec::FreeMSet(m)
                        }
                        _ => return Err(FormatError::SyntaxError {
                            line: b.header.no,
                            col: kind.col,
                            expected:
                                "`identity`, `powerset`, `free <monoid>`, `terms` or `presented`"
                                    .into(),
                        }),
                    };
                if !matches!(spec, MonadSpec::FreeMSet(_)) {
                    extra(2)?;
                }
                set_once(&mut file.monad, spec, &b.header, "monad")?;
            }
            _ => return Err(b.header.syntax(0, KEYWORDS)),
        }
    }
    for (line, m) in free_refs {
        if !file.monoids.contains_key(&m) {
            return Err(line.invalid(line.col, format!("no monoid block named `{m}`")));
        }
    }
    Ok(file)
}

/// [`parse`] for raw bytes; invalid UTF-8 is a syntax error.
pub fn parse_bytes(bytes: &[u8]) -> Result<PresentationFile, FormatError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let good = &bytes[..e.valid_up_to()];
            let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
            let line_start = good.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            let col = std::str::from_utf8(&good[line_start..]).map_or(1, |s| s.chars().count() + 1);
            Err(FormatError::SyntaxError {
                line,
                col,
                expected: "UTF-8 text".into(),
            })
        }
    }
}

fn push_entry(out: &mut String, args: impl Iterator<Item = String>, value: &Atom) {
    out.push_str(" (");
    out.push_str(&args.collect::<Vec<_>>().join(","));
    out.push_str(")->");
    out.push_str(&value.to_string());
}

/// `print`: the canonical text of a file.
pub fn print(file: &PresentationFile) -> String {
    let mut out = String::new();
    if !file.signature.is_empty() {
        out.push_str("signature\n");
        for (op, arity) in file.signature.ops() {
            out.push_str(&format!("  op {op} {arity}\n"));
        }
    }
    if let Some(g) = &file.generators {
        out.push_str("generators");
        for a in g.iter() {
            out.push_str(&format!(" {a}"));
        }
        out.push('\n');
    }
    if !file.relations.is_empty() {
        out.push_str("relations\n");
        for (l, r) in &file.relations {
            out.push_str(&format!("  {l} = {r}\n"));
        }
    }
    if !file.equations.is_empty() {
        out.push_str("equations\n");
        let mut vars: Option<&FinSet> = None;
        for eq in &file.equations {
            if vars != Some(&eq.vars) {
                out.push_str("  vars");
                for v in eq.vars.iter() {
                    out.push_str(&format!(" {v}"));
                }
                out.push('\n');
                vars = Some(&eq.vars);
            }
            out.push_str(&format!("  {} = {}\n", eq.lhs, eq.rhs));
        }
    }
    for (name, a) in &file.algebras {
        out.push_str(&format!("algebra {name}\n  carrier"));
        for x in a.carrier().iter() {
            out.push_str(&format!(" {x}"));
        }
        out.push('\n');
        let mut current: Option<usize> = None;
        for (pos, args, value) in a.entries() {
            if current != Some(pos) {
                if current.is_some() {
                    out.push('\n');
                }
                let (op, _) = a.signature().ops().nth(pos).unwrap();
                out.push_str(&format!("  op {op}:"));
                current = Some(pos);
            }
            let carrier = a.carrier();
            push_entry(
                &mut out,
                args.iter().map(|&i| carrier.get(i).unwrap().to_string()),
                carrier.get(value).unwrap(),
            );
        }
        if current.is_some() {
            out.push('\n');
        }
        // Operations with empty tables still get a line.
        let listed: Vec<usize> = a.entries().map(|(p, _, _)| p).collect();
        for (pos, (op, _)) in a.signature().ops().enumerate() {
            if !listed.contains(&pos) {
                out.push_str(&format!("  op {op}:\n"));
            }
        }
    }
    for (name, m) in &file.monoids {
        out.push_str(&format!("monoid {name}\n  carrier"));
        for x in m.carrier().iter() {
            out.push_str(&format!(" {x}"));
        }
        out.push_str(&format!("\n  unit {}\n  mult", m.unit()));
        for (i, a) in m.carrier().iter().enumerate() {
            for (j, b) in m.carrier().iter().enumerate() {
                push_entry(
                    &mut out,
                    [a.to_string(), b.to_string()].into_iter(),
                    m.carrier().get(m.mult(i, j)).unwrap(),
                );
            }
        }
        out.push('\n');
    }
    if let Some(spec) = &file.monad {
        out.push_str(&format!("monad {spec}\n"));
    }
    out
}

impl fmt::Display for PresentationFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Random well-formed files, for round-trip and robustness testing.
pub fn random_file(seed: u64) -> PresentationFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op_pool = ["f", "g", "h", "k", "e", "c"];
    let leaf_pool = ["a", "b", "x0", "y_1", "z"];
    let n_ops = rng.gen_range(0..=4);
    let mut names: Vec<&str> = op_pool.to_vec();
    names.shuffle(&mut rng);
    let ops: Vec<(&str, usize)> = names[..n_ops]
        .iter()
        .map(|&n| (n, rng.gen_range(0..=2)))
        .collect();
    let signature = Signature::new(ops.iter().copied()).unwrap();

    let random_leaves = |rng: &mut ChaCha8Rng| {
        let mut pool = leaf_pool.to_vec();
        pool.shuffle(rng);
        let k = rng.gen_range(0..=3);
        FinSet::collect(pool[..k].iter().map(|n| Atom::name(n)))
    };
    let generators = if rng.gen_bool(0.8) {
        Some(random_leaves(&mut rng))
    } else {
        None
    };

    fn random_term(
        sig: &Signature,
        leaves: &FinSet,
        depth: usize,
        rng: &mut ChaCha8Rng,
    ) -> Option<Term<Atom>> {
        let ops: Vec<(crate::Symbol, usize)> = sig.ops().map(|(s, a)| (s.clone(), a)).collect();
        let leaf_ok = !leaves.is_empty();
        let usable: Vec<&(crate::Symbol, usize)> =
            ops.iter().filter(|(_, a)| depth > 0 || *a == 0).collect();
        if leaf_ok && (usable.is_empty() || rng.gen_bool(0.4)) {
            return Some(Term::Var(
                leaves.get(rng.gen_range(0..leaves.len())).unwrap().clone(),
            ));
        }
        let (op, arity) = (*usable.choose(rng)?).clone();
        let args = (0..arity)
            .map(|_| random_term(sig, leaves, depth.saturating_sub(1), rng))
            .collect::<Option<Vec<_>>>()?;
        Some(Term::app(op, args))
    }

    let gens = generators.clone().unwrap_or_default();
    let mut relations = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        if let (Some(l), Some(r)) = (
            random_term(&signature, &gens, 3, &mut rng),
            random_term(&signature, &gens, 3, &mut rng),
        ) {
            relations.push((l, r));
        }
    }
    let mut equations = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let vars = random_leaves(&mut rng);
        if let (Some(l), Some(r)) = (
            random_term(&signature, &vars, 2, &mut rng),
            random_term(&signature, &vars, 2, &mut rng),
        ) {
            equations.push(Equation::new(&signature, vars, l, r).unwrap());
        }
    }
    let mut algebras = BTreeMap::new();
    for i in 0..rng.gen_range(0..=2) {
        let n = rng.gen_range(1..=3);
        let labels: Vec<Atom> = (0..n)
            .map(|k| Atom::name(&format!("{}{k}", ["", "q", "v-"][i % 3])))
            .collect();
        let seed_table: Vec<u64> = (0..64).map(|_| rng.gen()).collect();
        let a = FiniteAlgebra::from_fn(signature.clone(), FinSet::collect(labels), |pos, args| {
            let mut h = seed_table[pos % 64];
            for &x in args {
                h = h.wrapping_mul(31).wrapping_add(x as u64 + 7);
            }
            (h % n as u64) as usize
        })
        .unwrap();
        algebras.insert(format!("A{i}"), a);
    }
    static CORPUS: OnceLock<Vec<FiniteMonoid>> = OnceLock::new();
    let corpus = CORPUS.get_or_init(monoid_corpus);
    let mut monoids = BTreeMap::new();
    for i in 0..rng.gen_range(0..=2) {
        monoids.insert(format!("M{i}"), corpus.choose(&mut rng).unwrap().clone());
    }
    let monad = match rng.gen_range(0..6) {
        0 => None,
        1 => Some(MonadSpec::Identity),
        2 => Some(MonadSpec::Powerset),
        3 => Some(MonadSpec::Terms),
        4 => Some(MonadSpec::Presented),
        _ => monoids.keys().next().cloned().map(MonadSpec::FreeMSet),
    };
    PresentationFile {
        signature,
        generators,
        relations,
        equations,
        algebras,
        monoids,
        monad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P1: &str = "signature\n op f 1\ngenerators a\nrelations\n f(f(a)) = a";

    #[test]
    fn reads_the_smallest_presentation() {
        let file = parse(P1).unwrap();
        assert_eq!(file.signature.arity("f"), Some(1));
        assert_eq!(file.generators().len(), 1);
        assert_eq!(file.relations.len(), 1);
        assert_eq!(
            print(&file),
            "signature\n  op f 1\ngenerators a\nrelations\n  f(f(a)) = a\n"
        );
    }

    #[test]
    fn empty_file_is_empty() {
        let file = parse("").unwrap();
        assert!(file.signature.is_empty());
        assert_eq!(file, PresentationFile::default());
        assert_eq!(print(&file), "");
        assert_eq!(parse("\n  \n# only a comment\n").unwrap(), file);
    }

    #[test]
    fn arity_mismatch_is_located() {
        let e = parse("signature\n  op g 2\ngenerators a\nrelations\n  g(a) = a\n").unwrap_err();
        match e {
            FormatError::ArityMismatch {
                symbol, line, col, ..
            } => {
                assert_eq!(symbol, "g");
                assert_eq!(line, 5);
                assert_eq!(col, 3);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_symbol_is_located() {
        let e = parse("signature\n  op f 1\ngenerators a\nrelations\n  f(a) = h(a)\n").unwrap_err();
        assert_eq!(
            e,
            FormatError::UnknownSymbol {
                name: "h".into(),
                line: 5,
                col: 10
            }
        );
    }

    #[test]
    fn syntax_errors_are_located() {
        let e = parse("signature\n  op f one\n").unwrap_err();
        assert_eq!((e.line(), e.col()), (2, 8));
        let e = parse("  op f 1\n").unwrap_err();
        assert_eq!((e.line(), e.col()), (1, 3));
        let e = parse("signatures\n").unwrap_err();
        assert!(matches!(
            e,
            FormatError::SyntaxError {
                line: 1,
                col: 1,
                ..
            }
        ));
        let e = parse("signature\n  op f 1\ngenerators a\nrelations\n  f(a) f(a)\n").unwrap_err();
        assert!(matches!(e, FormatError::SyntaxError { line: 5, .. }));
        let e = parse("signature\n  op f 1\ngenerators a\nrelations\n  f(a = a\n").unwrap_err();
        assert!(
            matches!(
                e,
                FormatError::SyntaxError {
                    line: 5,
                    col: 7,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_bytes(b"generators a\n  \xff").unwrap_err();
        assert!(
            matches!(
                e,
                FormatError::SyntaxError {
                    line: 2,
                    col: 3,
                    ..
                }
            ),
            "{e}"
        );
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(
            parse("generators a\nrelations\n  b = a\n").unwrap_err(),
            FormatError::Invalid {
                line: 3,
                col: 3,
                ..
            }
        ));
        assert!(parse("signature\n  op a 0\ngenerators a\n").is_err());
        assert!(parse("monad free M\n").is_err());
        assert!(parse("signature\n  op f 1\n  op f 2\n").is_err());
        assert!(parse(
            "monoid M\n  carrier 0 1\n  unit 0\n  mult (0,0)->1 (0,1)->1 (1,0)->1 (1,1)->1\n"
        )
        .is_err());
        assert!(parse("signature\n  op f 1\nalgebra A\n  carrier 0 1\n  op f: (0)->1\n").is_err());
    }

    #[test]
    fn full_file_round_trips() {
        let text = "\
signature
  op g 2
  op e 0
generators a b
relations
  g(a, b) = g(b, a)
equations
  vars x y z
  g(g(x, y), z) = g(x, g(y, z))
  vars x
  g(e, x) = x
  g(x, e) = x
algebra Bool
  carrier 0 1
  op g: (0,0)->0 (0,1)->0 (1,0)->0 (1,1)->1
  op e: ()->1
monoid Z2
  carrier 0 1
  unit 0
  mult (0,0)->0 (0,1)->1 (1,0)->1 (1,1)->0
monad free Z2
";
        let file = parse(text).unwrap();
        assert_eq!(print(&file), text);
        assert_eq!(file.equations.len(), 3);
        assert_eq!(file.monad, Some(MonadSpec::FreeMSet("Z2".into())));
        assert_eq!(file.monoids["Z2"], FiniteMonoid::cyclic(2));
    }

    #[test]
    fn block_order_does_not_matter() {
        let a = parse("relations\n  f(a) = a\nsignature\n  op f 1\ngenerators a\n").unwrap();
        let b = parse("signature\n  op f 1\ngenerators a\nrelations\n  f(a) = a\n").unwrap();
        assert_eq!(a, b);
        let m1 = "monoid B\n  carrier 0\n  unit 0\n  mult (0,0)->0\nmonoid A\n  carrier 0\n  unit 0\n  mult (0,0)->0\n";
        let m2 = "monoid A\n  carrier 0\n  unit 0\n  mult (0,0)->0\nmonoid B\n  carrier 0\n  unit 0\n  mult (0,0)->0\n";
        assert_eq!(print(&parse(m1).unwrap()), print(&parse(m2).unwrap()));
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = format!(
            "signature\n  op f 1\ngenerators a\nrelations\n  {}a{} = a\n",
            "f(".repeat(5000),
            ")".repeat(5000)
        );
        assert!(parse(&deep).is_err());
    }

    #[test]
    fn random_files_round_trip() {
        for seed in 0..200 {
            let file = random_file(seed);
            let text = print(&file);
            let back = parse(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
            assert_eq!(back, file, "seed {seed}");
            assert_eq!(print(&back), text);
        }
    }

    proptest! {
        #[test]
        fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
            if let Err(e) = parse_bytes(&bytes) {
                prop_assert!(e.line() >= 1 && e.col() >= 1);
            }
        }

        #[test]
        fn mutated_files_never_panic(seed in 0u64..500, cut in 0usize..400, insert in "[ a-z(),=>#:\n-]{0,8}") {
            let text = print(&random_file(seed));
            let mut at = cut.min(text.len());
            while !text.is_char_boundary(at) {
                at -= 1;
            }
            let mutated = format!("{}{}{}", &text[..at], insert, &text[at..]);
            if let Ok(file) = parse(&mutated) {
                prop_assert_eq!(parse(&print(&file)).unwrap(), file);
            }
        }
    }
}
