//! The operations behind the static page in `www/`. Each takes the text of
//! a presentation file and returns a plain-text report; failures come back
//! as a report starting with `error:` so the page never has to catch.

use falg::algebra::{saturate as saturate_presentation, Saturation};
use falg::congruence::{closure_build, CongruenceClass};
use falg::equational::{bounded_theory_congruence, Verdict};
use falg::format::{self, PresentationFile};
use falg::term::parse_term;
use falg::{Limits, Term};
use wasm_bindgen::prelude::*;

/// Tighter than the library default so a page stays responsive.
const LIMITS: Limits = Limits {
    node_cap: 200_000,
    max_depth: 8,
};

/// Depth of instantiation used when the file has equations.
const INST_DEPTH: usize = 2;

fn load(source: &str) -> Result<PresentationFile, String> {
    format::parse(source).map_err(|e| e.to_string())
}

fn read_term(file: &PresentationFile, text: &str) -> Result<Term<falg::Atom>, String> {
    parse_term(text, &file.signature, Some(&file.generators()))
        .map_err(|e| format!("`{text}`: {e}"))
}

fn report(result: Result<String, String>) -> String {
    result.unwrap_or_else(|e| format!("error: {e}\n"))
}

pub fn word_report(source: &str, left: &str, right: &str) -> Result<String, String> {
    let file = load(source)?;
    let p = file.ground_presentation().map_err(|e| e.to_string())?;
    let t = read_term(&file, left)?;
    let u = read_term(&file, right)?;
    if file.equations.is_empty() {
        let mut idx = closure_build(&p, &[], &LIMITS).map_err(|e| e.to_string())?;
        let equal = idx.word_equal(&t, &u).map_err(|e| e.to_string())?;
        return Ok(if equal { "equal\n" } else { "not equal\n" }.to_string());
    }
    let mut th = bounded_theory_congruence(
        &p.signature,
        &file.equations,
        &p.generators,
        &p.relations,
        INST_DEPTH,
        0,
        &LIMITS,
    )
    .map_err(|e| e.to_string())?;
    Ok(match th.query(&t, &u).map_err(|e| e.to_string())? {
        Verdict::Equal => "equal\n".to_string(),
        Verdict::Unknown => format!("unknown: no proof using instances up to depth {INST_DEPTH}\n"),
    })
}

pub fn saturate_report(source: &str, max_classes: usize) -> Result<String, String> {
    let file = load(source)?;
    let p = file.ground_presentation().map_err(|e| e.to_string())?;
    match saturate_presentation(&p, max_classes, &LIMITS).map_err(|e| e.to_string())? {
        Saturation::Finite(q) => {
            let mut text = format!("finite quotient with {} elements\n", q.algebra.len());
            for (i, r) in q.representatives.iter().enumerate() {
                text.push_str(&format!("{i} = {r}\n"));
            }
            let mut out = PresentationFile::default();
            out.algebras.insert("quotient".to_string(), q.algebra);
            text.push_str(&format::print(&out));
            Ok(text)
        }
        Saturation::Inconclusive { classes_found } => Ok(format!(
            "inconclusive: {classes_found} classes found before reaching the limit of {max_classes}\n"
        )),
    }
}

pub fn classes_report(source: &str, depth: usize) -> Result<String, String> {
    let file = load(source)?;
    let p = file.ground_presentation().map_err(|e| e.to_string())?;
    let list: Vec<CongruenceClass> = if file.equations.is_empty() {
        closure_build(&p, &[], &LIMITS).and_then(|mut idx| idx.enumerate_classes(depth, &LIMITS))
    } else {
        bounded_theory_congruence(
            &p.signature,
            &file.equations,
            &p.generators,
            &p.relations,
            INST_DEPTH,
            depth,
            &LIMITS,
        )
        .and_then(|mut th| th.enumerate_classes(depth, &LIMITS))
    }
    .map_err(|e| e.to_string())?;
    let terms: usize = list.iter().map(|c| c.members.len()).sum();
    let mut text = format!(
        "{} classes among {terms} terms of depth <= {depth}\n",
        list.len()
    );
    for c in &list {
        let members: Vec<String> = c.members.iter().map(ToString::to_string).collect();
        text.push_str(&format!("{}: {}\n", c.representative, members.join(", ")));
    }
    Ok(text)
}

/// Whether two terms are equal in the presented algebra.
#[wasm_bindgen]
pub fn word_equal(source: &str, left: &str, right: &str) -> String {
    report(word_report(source, left, right))
}

/// The finite quotient as a table, if one is found within `max_classes`.
#[wasm_bindgen]
pub fn saturate(source: &str, max_classes: usize) -> String {
    report(saturate_report(source, max_classes))
}

/// The congruence classes of all terms up to `depth`.
#[wasm_bindgen]
pub fn classes(source: &str, depth: usize) -> String {
    report(classes_report(source, depth))
}
