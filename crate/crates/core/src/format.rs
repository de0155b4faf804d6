//! Line-oriented text format for lubpos and rpos.
//!
//! ```text
//! # comment
//! elements a b c d e
//! order d<b e<b e<c b<a c<a
//! mode general
//! natural {b,c} -> a
//! natural {d,e} -> b
//! proper a b          # rpo files only
//! ```

use crate::error::{Error, Result};
use crate::lubpo::{make_lubpo, Lubpo, Mode};
use crate::order::{ElemSet, Poset};
use crate::realize::{make_rpo, Rpo};

/// Result of parsing a file: a lubpo, or an rpo when a `proper` line is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Lubpo(Lubpo),
    Rpo(Rpo),
}

impl Parsed {
    pub fn into_lubpo(self) -> Result<Lubpo> {
        match self {
            Parsed::Lubpo(d) => Ok(d),
            Parsed::Rpo(_) => Err(parse_err(0, 0, "expected a lubpo file, found a `proper` line")),
        }
    }
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    /// 1-based column of a subslice of this line.
    fn col(&self, part: &str) -> usize {
        part.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }

    fn err(&self, part: &str, msg: impl Into<String>) -> Error {
        parse_err(self.no, self.col(part), msg)
    }
}

/// Splits on `sep` outside parentheses, keeping subslices of the input.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn lookup(line: &Line, names: &[String], tok: &str) -> Result<usize> {
    let t = tok.trim();
    names
        .iter()
        .position(|n| n == t)
        .ok_or_else(|| line.err(tok, format!("unknown element `{t}`")))
}

/// Parses `{x,y,…}` against the element names.
pub fn parse_set_in(line_no: usize, text: &str, names: &[String]) -> Result<ElemSet> {
    let line = Line { no: line_no, text };
    parse_set(&line, text, names)
}

fn parse_set(line: &Line, part: &str, names: &[String]) -> Result<ElemSet> {
    let t = part.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| line.err(part, "expected a set like {x,y}"))?;
    if inner.trim().is_empty() {
        return Ok(ElemSet::EMPTY);
    }
    split_top(inner, ',')
        .into_iter()
        .map(|tok| lookup(line, names, tok))
        .collect()
}

/// Parses a lubpo or rpo file.
pub fn parse_file(text: &str) -> Result<Parsed> {
    let mut names: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    let mut mode = None;
    let mut naturals = Vec::new();
    let mut proper: Option<ElemSet> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = Line { no: idx + 1, text: raw };
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let kw_end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let (kw, rest) = trimmed.split_at(kw_end);
        let need_names = |what: &str| {
            names
                .clone()
                .ok_or_else(|| line.err(kw, format!("`{what}` before `elements`")))
        };
        match kw {
            "elements" => {
                if names.is_some() {
                    return Err(line.err(kw, "duplicate `elements` line"));
                }
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.is_empty() {
                    return Err(line.err(kw, "empty `elements` line"));
                }
                for (i, t) in toks.iter().enumerate() {
                    if toks[..i].contains(t) {
                        return Err(line.err(t, format!("duplicate element `{t}`")));
                    }
                    if t.contains(['{', '}', '<']) || t.contains("->") {
                        return Err(line.err(t, format!("bad element name `{t}`")));
                    }
                }
                names = Some(toks.iter().map(|s| s.to_string()).collect());
            }
            "order" => {
                let ns = need_names("order")?;
                for tok in rest.split_whitespace() {
                    let parts = split_top(tok, '<');
                    if parts.len() < 2 {
                        return Err(line.err(tok, "expected x<y"));
                    }
                    let idxs = parts
                        .iter()
                        .map(|p| lookup(&line, &ns, p))
                        .collect::<Result<Vec<_>>>()?;
                    pairs.extend(idxs.windows(2).map(|w| (w[0], w[1])));
                }
            }
            "mode" => {
                let m = rest.trim();
                mode = Some(match m {
                    "general" => Mode::General,
                    "directed" => Mode::Directed,
                    _ => return Err(line.err(rest.trim_start(), format!("unknown mode `{m}`"))),
                });
            }
            "natural" => {
                let ns = need_names("natural")?;
                let (set_part, lub_part) = rest
                    .split_once("->")
                    .ok_or_else(|| line.err(kw, "expected `natural {…} -> x`"))?;
                let s = parse_set(&line, set_part, &ns)?;
                let x = lookup(&line, &ns, lub_part)?;
                naturals.push((s, x));
            }
            "proper" => {
                let ns = need_names("proper")?;
                proper = Some(
                    rest.split_whitespace()
                        .map(|t| lookup(&line, &ns, t))
                        .collect::<Result<ElemSet>>()?,
                );
            }
            _ => return Err(line.err(kw, format!("unknown keyword `{kw}`"))),
        }
    }
    let names = names.ok_or_else(|| parse_err(1, 1, "missing `elements` line"))?;
    let poset = Poset::with_labels(names.len(), &pairs, names)?;
    match proper {
        Some(pr) => Ok(Parsed::Rpo(make_rpo(poset, pr)?)),
        None => Ok(Parsed::Lubpo(make_lubpo(poset, &naturals, mode.unwrap_or(Mode::General))?)),
    }
}

fn order_line(p: &Poset) -> String {
    let pairs: Vec<String> = p
        .hasse_pairs()
        .into_iter()
        .map(|(x, y)| format!("{}<{}", p.label(x), p.label(y)))
        .collect();
    pairs.join(" ")
}

/// Text form of a lubpo; only non-singleton naturals are written.
pub fn serialize(d: &Lubpo) -> String {
    let p = d.poset();
    let mut out = format!("elements {}\n", p.labels().join(" "));
    let order = order_line(p);
    if !order.is_empty() {
        out.push_str(&format!("order {order}\n"));
    }
    out.push_str(&format!("mode {}\n", d.mode()));
    for (a, x) in d.nontrivial_naturals() {
        out.push_str(&format!("natural {} -> {}\n", d.show(a), p.label(x)));
    }
    out
}

/// Text form of an rpo.
pub fn serialize_rpo(r: &Rpo) -> String {
    let p = r.realizers();
    let mut out = format!("elements {}\n", p.labels().join(" "));
    let order = order_line(p);
    if !order.is_empty() {
        out.push_str(&format!("order {order}\n"));
    }
    let prop: Vec<&str> = r.proper().iter().map(|x| p.label(x)).collect();
    out.push_str(&format!("proper {}\n", prop.join(" ")));
    out
}
