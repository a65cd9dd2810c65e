//! Plain-text graph format.
//!
//! ```text
//! n k
//! c(0,1) c(0,2) ... c(0,n-1)
//! c(1,2) ... c(1,n-1)
//! ...
//! c(n-2,n-1)
//! ```
//!
//! Blank lines are ignored. For `n = 1` only the header is present.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Colour, ColouredComplete};

pub fn write_graph(g: &ColouredComplete) -> String {
    let n = g.n();
    let mut out = String::new();
    writeln!(out, "{} {}", n, g.colour_count()).unwrap();
    for u in 0..n.saturating_sub(1) {
        let row: Vec<String> = (u + 1..n).map(|v| g.colour(u, v).to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of one line with their 1-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn read_graph(text: &str) -> Result<ColouredComplete> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty input"))?;
    let htoks = tokens(header);
    if htoks.len() != 2 {
        let col = htoks.get(2).map_or(header.len() + 1, |t| t.0);
        return Err(parse_err(hline, col, "header must be `n k`"));
    }
    let n: usize = htoks[0]
        .1
        .parse()
        .map_err(|_| parse_err(hline, htoks[0].0, format!("bad vertex count `{}`", htoks[0].1)))?;
    let k: Colour = htoks[1]
        .1
        .parse()
        .map_err(|_| parse_err(hline, htoks[1].0, format!("bad colour count `{}`", htoks[1].1)))?;
    if n == 0 {
        return Err(parse_err(hline, htoks[0].0, "vertex count must be at least 1"));
    }

    let mut table = Vec::with_capacity(n * (n - 1) / 2);
    let mut last_line = hline;
    for u in 0..n - 1 {
        let (lno, line) = lines.next().ok_or_else(|| {
            parse_err(last_line + 1, 1, format!("missing row for vertex {u}"))
        })?;
        last_line = lno;
        let toks = tokens(line);
        let expected = n - 1 - u;
        if toks.len() != expected {
            let col = toks.get(expected).map_or(line.len() + 1, |t| t.0);
            return Err(parse_err(
                lno,
                col,
                format!("row for vertex {u} needs {expected} colours, found {}", toks.len()),
            ));
        }
        for (col, tok) in toks {
            let c: Colour = tok
                .parse()
                .map_err(|_| parse_err(lno, col, format!("bad colour `{tok}`")))?;
            if c >= k {
                return Err(parse_err(lno, col, format!("colour {c} not below k = {k}")));
            }
            table.push(c);
        }
    }
    if let Some((lno, line)) = lines.next() {
        let col = tokens(line).first().map_or(1, |t| t.0);
        return Err(parse_err(lno, col, "unexpected trailing data"));
    }
    ColouredComplete::new(n, k, table)
}
