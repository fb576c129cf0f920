//! Line-based text format for pc-presentations with named subgroups and elements.
//!
//! ```text
//! name Phi_2(311)a
//! family 2
//! p 3
//! gens 5
//! power 1 = g4
//! commutator 2 1 = g5
//! subgroup Z = g4, g3
//! element alpha = g1
//! ```
//!
//! Generators are numbered from 1. Relation right-hand sides are words in strictly
//! increasing generators; trivial relations may be omitted. `#` starts a comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pc::{Elem, PcGroup, PcPresentation};

/// A word `g_{i1}^{e1} * g_{i2}^{e2} * ...` with 0-based generator indices.
pub type Word = Vec<(usize, i64)>;

/// A parsed presentation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationText {
    pub name: String,
    pub family: Option<u8>,
    pub presentation: PcPresentation,
    pub subgroups: Vec<(String, Vec<Word>)>,
    pub elements: Vec<(String, Word)>,
}

/// Parses `g1^2*g3^-1`; `1` is the empty word.
pub fn parse_word(s: &str, ngens: usize) -> Result<Word> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('*')
        .map(|tok| {
            let tok = tok.trim();
            let bad = || Error::Parse(format!("malformed word factor {tok:?}"));
            let rest = tok.strip_prefix('g').ok_or_else(bad)?;
            let (idx, exp) = match rest.split_once('^') {
                Some((a, b)) => (a, b.trim().parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let idx: usize = idx.trim().parse().map_err(|_| bad())?;
            if idx == 0 || idx > ngens {
                return Err(Error::Parse(format!("generator g{idx} out of range 1..={ngens}")));
            }
            Ok((idx - 1, exp))
        })
        .collect()
}

/// Formats a word, `1` for the empty word.
pub fn word_text(w: &[(usize, i64)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(i, e)| if e == 1 { format!("g{}", i + 1) } else { format!("g{}^{}", i + 1, e) })
        .collect::<Vec<_>>()
        .join("*")
}

fn vector_of(w: &Word, ngens: usize, p: u32) -> Result<Vec<u32>> {
    let mut v = vec![0u32; ngens];
    let mut last = None;
    for &(i, e) in w {
        if last.is_some_and(|l| i <= l) {
            return Err(Error::Parse(format!("relation word {} is not in increasing generator order", word_text(w))));
        }
        last = Some(i);
        v[i] = e.rem_euclid(p as i64) as u32;
    }
    Ok(v)
}

fn word_of(v: &[u32]) -> Word {
    v.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e as i64)).collect()
}

/// Evaluates a word in a group.
pub fn eval_word(g: &PcGroup, w: &[(usize, i64)]) -> Result<Elem> {
    g.collect(w)
}

impl PresentationText {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut family = None;
        let mut p = None;
        let mut ngens = None;
        let mut pres: Option<PcPresentation> = None;
        let mut subgroups = Vec::new();
        let mut elements = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let at = |m: String| Error::Parse(format!("line {}: {m}", lineno + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let ready = |pres: &mut Option<PcPresentation>| -> Result<()> {
                if pres.is_none() {
                    let (p, n) = match (p, ngens) {
                        (Some(p), Some(n)) => (p, n),
                        _ => return Err(at("'p' and 'gens' must precede relations".into())),
                    };
                    *pres = Some(PcPresentation::new(p, n)?);
                }
                Ok(())
            };
            match key {
                "name" => name = Some(rest.to_string()),
                "family" => family = Some(rest.parse::<u8>().map_err(|_| at(format!("bad family {rest:?}")))?),
                "p" => p = Some(rest.parse::<u32>().map_err(|_| at(format!("bad prime {rest:?}")))?),
                "gens" => ngens = Some(rest.parse::<usize>().map_err(|_| at(format!("bad generator count {rest:?}")))?),
                "power" | "commutator" => {
                    ready(&mut pres)?;
                    let pr = pres.as_mut().unwrap();
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| at("missing '='".into()))?;
                    let idx: Vec<usize> = lhs
                        .split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|_| at(format!("bad index {t:?}"))))
                        .collect::<Result<_>>()?;
                    let w = parse_word(rhs, pr.ngens()).map_err(|e| at(e.to_string()))?;
                    let v = vector_of(&w, pr.ngens(), pr.p()).map_err(|e| at(e.to_string()))?;
                    match (key, idx.as_slice()) {
                        ("power", [i]) if *i >= 1 => pr.set_power(i - 1, &v)?,
                        ("commutator", [j, i]) if *i >= 1 && *j >= 1 => pr.set_commutator(j - 1, i - 1, &v)?,
                        _ => return Err(at(format!("bad indices for {key}"))),
                    }
                }
                "subgroup" => {
                    ready(&mut pres)?;
                    let n = pres.as_ref().unwrap().ngens();
                    let (nm, rhs) = rest.split_once('=').ok_or_else(|| at("missing '='".into()))?;
                    let words = rhs
                        .split(',')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(|t| parse_word(t, n))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| at(e.to_string()))?;
                    subgroups.push((nm.trim().to_string(), words));
                }
                "element" => {
                    ready(&mut pres)?;
                    let n = pres.as_ref().unwrap().ngens();
                    let (nm, rhs) = rest.split_once('=').ok_or_else(|| at("missing '='".into()))?;
                    elements.push((nm.trim().to_string(), parse_word(rhs, n).map_err(|e| at(e.to_string()))?));
                }
                _ => return Err(at(format!("unknown keyword {key:?}"))),
            }
        }
        let mut pres = pres;
        if pres.is_none() {
            match (p, ngens) {
                (Some(p), Some(n)) => pres = Some(PcPresentation::new(p, n)?),
                _ => return Err(Error::Parse("missing 'p' or 'gens'".into())),
            }
        }
        Ok(PresentationText {
            name: name.unwrap_or_else(|| "unnamed".into()),
            family,
            presentation: pres.unwrap(),
            subgroups,
            elements,
        })
    }

    /// Canonical text; `parse(to_text(x)) == x`.
    pub fn to_text(&self) -> String {
        let pr = &self.presentation;
        let mut s = String::new();
        writeln!(s, "name {}", self.name).unwrap();
        if let Some(f) = self.family {
            writeln!(s, "family {f}").unwrap();
        }
        writeln!(s, "p {}", pr.p()).unwrap();
        writeln!(s, "gens {}", pr.ngens()).unwrap();
        for i in 0..pr.ngens() {
            let w = word_of(pr.power(i));
            if !w.is_empty() {
                writeln!(s, "power {} = {}", i + 1, word_text(&w)).unwrap();
            }
        }
        for j in 0..pr.ngens() {
            for i in 0..j {
                let w = word_of(pr.commutator(j, i));
                if !w.is_empty() {
                    writeln!(s, "commutator {} {} = {}", j + 1, i + 1, word_text(&w)).unwrap();
                }
            }
        }
        for (nm, ws) in &self.subgroups {
            let body: Vec<String> = ws.iter().map(|w| word_text(w)).collect();
            if body.is_empty() {
                writeln!(s, "subgroup {nm} =").unwrap();
            } else {
                writeln!(s, "subgroup {nm} = {}", body.join(", ")).unwrap();
            }
        }
        for (nm, w) in &self.elements {
            writeln!(s, "element {nm} = {}", word_text(w)).unwrap();
        }
        s
    }

    /// Text for a bare presentation.
    pub fn from_presentation(name: &str, family: Option<u8>, presentation: PcPresentation) -> Self {
        PresentationText { name: name.into(), family, presentation, subgroups: Vec::new(), elements: Vec::new() }
    }
}
