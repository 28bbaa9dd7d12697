//! Text formats: presentations, words, word lists and prime sets.
//!
//! A presentation file reads
//!
//! ```text
//! group H
//! gen a order inf weight 1
//! gen b order inf weight 1
//! gen c order inf weight 2
//! conj b ^ a = b^1 c^1
//! ```
//!
//! with `pow <id> = <word>` lines for power relations. Omitted relations are
//! trivial. Blank lines and lines starting with `#` are ignored on input.
//! [`write_presentation`] emits the canonical form: no comments, power lines
//! in generator order and conjugation lines ordered by the conjugated
//! generator, both only when nontrivial.

use std::fs;
use std::path::Path;

use nilsep_core::{Element, GeneratorSpec, Int, PcPresentation, PrimeSet, RelativeOrder, Word};

use crate::error::{Error, Result};

pub fn read_presentation(path: &Path) -> Result<PcPresentation> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_presentation(&text)
}

pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    let mut name: Option<String> = None;
    let mut gens: Vec<GeneratorSpec> = Vec::new();
    let mut powers = Vec::new();
    let mut conjugates = Vec::new();
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && !t[0].starts_with('#'))
        .collect();
    // generators first, so relations may refer to any of them
    for (line, t) in &lines {
        match t[0] {
            "group" => {
                if name.is_some() {
                    return Err(Error::parse(*line, "second group line"));
                }
                if t.len() != 2 {
                    return Err(Error::parse(*line, "expected `group <name>`"));
                }
                name = Some(t[1].to_string());
            }
            "gen" => {
                if t.len() != 6 || t[2] != "order" || t[4] != "weight" {
                    return Err(Error::parse(*line, "expected `gen <id> order <int|inf> weight <int>`"));
                }
                check_id(*line, t[1])?;
                let order = match t[3] {
                    "inf" => RelativeOrder::Infinite,
                    s => RelativeOrder::Finite(parse_int(*line, s)?),
                };
                let weight = t[5].parse::<u32>().map_err(|_| Error::parse(*line, format!("bad weight `{}`", t[5])))?;
                gens.push(GeneratorSpec::new(t[1], order, weight));
            }
            "pow" | "conj" => {}
            other => return Err(Error::parse(*line, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| Error::parse(1, "missing `group <name>` line"))?;
    if lines.first().map(|(_, t)| t[0]) != Some("group") {
        return Err(Error::parse(lines[0].0, "the first line must be `group <name>`"));
    }
    let index = |line: usize, id: &str| {
        gens.iter().position(|g| g.name == id).ok_or_else(|| Error::parse(line, format!("unknown generator `{id}`")))
    };
    for (line, t) in &lines {
        match t[0] {
            "pow" => {
                if t.len() < 4 || t[2] != "=" {
                    return Err(Error::parse(*line, "expected `pow <id> = <word>`"));
                }
                powers.push((index(*line, t[1])?, parse_letters(*line, &t[3..], &index)?));
            }
            "conj" => {
                if t.len() < 6 || t[2] != "^" || t[4] != "=" {
                    return Err(Error::parse(*line, "expected `conj <id> ^ <id> = <word>`"));
                }
                let j = index(*line, t[1])?;
                let i = index(*line, t[3])?;
                conjugates.push((j, i, parse_letters(*line, &t[5..], &index)?));
            }
            _ => {}
        }
    }
    Ok(PcPresentation::new(name, gens, powers, conjugates)?)
}

fn check_id(line: usize, id: &str) -> Result<()> {
    let ok = id.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::parse(line, format!("bad generator name `{id}`")))
    }
}

fn parse_int(line: usize, s: &str) -> Result<Int> {
    s.parse::<Int>().map_err(|_| Error::parse(line, format!("bad integer `{s}`")))
}

/// Factors `<id>^<int>` (or a bare `<id>`), or the single token `1`.
fn parse_letters(line: usize, tokens: &[&str], index: &dyn Fn(usize, &str) -> Result<usize>) -> Result<Word> {
    if tokens == ["1"] {
        return Ok(Vec::new());
    }
    tokens
        .iter()
        .map(|tok| match tok.split_once('^') {
            Some((id, e)) => Ok((index(line, id)?, parse_int(line, e)?)),
            None => Ok((index(line, tok)?, 1)),
        })
        .collect()
}

/// Canonical text of a presentation.
pub fn write_presentation(x: &PcPresentation) -> String {
    let mut out = format!("group {}\n", x.name());
    for g in x.generators() {
        out.push_str(&format!("gen {} order {} weight {}\n", g.name, g.order, g.weight));
    }
    for i in 0..x.rank() {
        if let Some(w) = x.power_relation(i) {
            if !w.is_identity() {
                out.push_str(&format!("pow {} = {}\n", x.generators()[i].name, x.format_element(&w)));
            }
        }
    }
    for j in 0..x.rank() {
        for i in 0..j {
            let w = x.conjugation_relation(j, i);
            if w != x.generator(j) {
                let names = x.generators();
                out.push_str(&format!("conj {} ^ {} = {}\n", names[j].name, names[i].name, x.format_element(&w)));
            }
        }
    }
    out
}

/// A word over the generators of `x`, collected to normal form.
pub fn parse_word(x: &PcPresentation, s: &str) -> Result<Element> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::Syntax("empty word".into()));
    }
    let index = |_: usize, id: &str| x.generator_index(id).ok_or_else(|| Error::Syntax(format!("unknown generator `{id}`")));
    let w = parse_letters(0, &tokens, &index).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Syntax(message),
        e => e,
    })?;
    Ok(x.normal_form(&w)?)
}

/// Words separated by `;`. Blank input gives the empty list.
pub fn parse_word_list(x: &PcPresentation, s: &str) -> Result<Vec<Element>> {
    s.split(';').map(str::trim).filter(|w| !w.is_empty()).map(|w| parse_word(x, w)).collect()
}

/// `2,3`, `all`, or `all-except:2,3`.
pub fn parse_primes(s: &str) -> Result<PrimeSet> {
    let s = s.trim();
    let list = |t: &str| -> Result<Vec<u64>> {
        t.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u64>().map_err(|_| Error::Syntax(format!("bad prime `{p}`"))))
            .collect()
    };
    if s == "all" {
        return Ok(PrimeSet::All);
    }
    if let Some(rest) = s.strip_prefix("all-except:") {
        return Ok(PrimeSet::all_except(list(rest)?)?);
    }
    Ok(PrimeSet::explicit(list(s)?)?)
}
