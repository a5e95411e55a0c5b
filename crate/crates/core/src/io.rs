//! Text formats: edge lists and Latin squares.
//!
//! Edge list: one `u v c` triple of non-negative integers per line.
//! Latin square: a line holding the order `n`, then `n` rows of `n`
//! symbols in `0..n`. Both formats skip blank lines and lines starting
//! with `#`, and both report 1-based line numbers on errors.

use crate::generators::LatinSquare;
use crate::graph::ColoredGraph;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_u32(token: &str, line: usize, what: &str) -> Result<u32, ParseError> {
    token.parse::<u32>().map_err(|_| {
        err(
            line,
            format!("{what} `{token}` is not an integer in 0..2^32"),
        )
    })
}

/// Parses `u v c` lines into edge triples for [`ColoredGraph::build`].
pub fn parse_edge_list(text: &str) -> Result<Vec<(u32, u32, u32)>, ParseError> {
    let mut edges = Vec::new();
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(err(
                line,
                format!("expected `u v c`, found {} field(s)", tokens.len()),
            ));
        }
        edges.push((
            parse_u32(tokens[0], line, "vertex")?,
            parse_u32(tokens[1], line, "vertex")?,
            parse_u32(tokens[2], line, "color")?,
        ));
    }
    Ok(edges)
}

/// Canonical edge-list text for a graph: live edges in (u, v) order.
pub fn format_edge_list(graph: &ColoredGraph) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.color));
    }
    out
}

/// Parses the Latin-square format, rejecting symbols outside `0..n` and
/// row/column repeats with the offending location.
pub fn parse_latin(text: &str) -> Result<LatinSquare, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing order line".to_string()))?;
    let n = parse_u32(header, header_line, "order")? as usize;
    if n == 0 {
        return Err(err(header_line, "order must be at least 1"));
    }

    let mut cells: Vec<u32> = Vec::with_capacity(n * n);
    let mut row_lines = Vec::with_capacity(n);
    for row in 0..n {
        let (line, content) = lines
            .next()
            .ok_or_else(|| err(text.lines().count(), format!("missing row {row} of {n}")))?;
        row_lines.push(line);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != n {
            return Err(err(
                line,
                format!("row {row}: expected {n} symbols, found {}", tokens.len()),
            ));
        }
        for (col, token) in tokens.iter().enumerate() {
            let symbol = parse_u32(token, line, "symbol")?;
            if symbol as usize >= n {
                return Err(err(
                    line,
                    format!("row {row}, column {col}: symbol {symbol} out of range 0..{n}"),
                ));
            }
            cells.push(symbol);
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "unexpected content after the square"));
    }

    // Latin property: each symbol once per row and once per column.
    let mut seen = vec![usize::MAX; n];
    for row in 0..n {
        seen.fill(usize::MAX);
        for col in 0..n {
            let symbol = cells[row * n + col] as usize;
            if seen[symbol] != usize::MAX {
                return Err(err(
                    row_lines[row],
                    format!(
                        "row {row}: symbol {symbol} repeats at columns {} and {col}",
                        seen[symbol]
                    ),
                ));
            }
            seen[symbol] = col;
        }
    }
    for col in 0..n {
        seen.fill(usize::MAX);
        for row in 0..n {
            let symbol = cells[row * n + col] as usize;
            if seen[symbol] != usize::MAX {
                return Err(err(
                    row_lines[row],
                    format!(
                        "column {col}: symbol {symbol} repeats at rows {} and {row}",
                        seen[symbol]
                    ),
                ));
            }
            seen[symbol] = row;
        }
    }

    Ok(LatinSquare::from_validated(n, cells))
}

/// Latin-square text: order line, then one row per line.
pub fn format_latin(square: &LatinSquare) -> String {
    let n = square.order();
    let mut out = format!("{n}\n");
    for row in 0..n {
        let symbols: Vec<String> = (0..n).map(|col| square.get(row, col).to_string()).collect();
        out.push_str(&symbols.join(" "));
        out.push('\n');
    }
    out
}
