//! Line-based text format for DFAs, and Graphviz DOT output.
//!
//! ```text
//! # words over {a_0, a_1} ending in a_0
//! dfa 2 2 0
//! finals 1
//! trans 0 1 0
//! trans 1 1 0
//! ```
//!
//! The header gives the state count, the alphabet size and the initial
//! state. `trans q t0 t1 ...` lists the target of `q` under each symbol in
//! index order and must appear exactly once per state. `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::{AutomatonError, Dfa, EpsilonNfa};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn number(tok: &Token<'_>, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.text.parse().map_err(|_| ParseError {
        line,
        column: tok.column,
        message: format!("expected {what}, found `{}`", tok.text),
    })
}

/// Parses one DFA in the text format.
pub fn parse_dfa(input: &str) -> Result<Dfa, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut finals: Option<Vec<usize>> = None;
    let mut rows: Vec<Option<Vec<usize>>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(keyword) = toks.first() else {
            continue;
        };
        let err = |column: usize, message: String| ParseError {
            line: line_no,
            column,
            message,
        };

        match (keyword.text, header) {
            ("dfa", None) => {
                if toks.len() != 4 {
                    return Err(err(
                        keyword.column,
                        "header must be `dfa <state_count> <alphabet_size> <initial>`".into(),
                    ));
                }
                let states = number(&toks[1], line_no, "a state count")?;
                let alphabet = number(&toks[2], line_no, "an alphabet size")?;
                let initial = number(&toks[3], line_no, "an initial state")?;
                if states == 0 {
                    return Err(err(toks[1].column, "state count must be positive".into()));
                }
                if alphabet == 0 {
                    return Err(err(toks[2].column, "alphabet size must be positive".into()));
                }
                if initial >= states {
                    return Err(err(
                        toks[3].column,
                        format!("initial state {initial} out of range"),
                    ));
                }
                header = Some((states, alphabet, initial));
                rows = vec![None; states];
            }
            ("dfa", Some(_)) => {
                return Err(err(keyword.column, "only one automaton per file".into()));
            }
            (_, None) => {
                return Err(err(
                    keyword.column,
                    format!("expected `dfa` header, found `{}`", keyword.text),
                ));
            }
            ("finals", Some((states, _, _))) => {
                if finals.is_some() {
                    return Err(err(keyword.column, "duplicate `finals` line".into()));
                }
                let mut fs = Vec::new();
                for tok in &toks[1..] {
                    let f = number(tok, line_no, "a final state")?;
                    if f >= states {
                        return Err(err(tok.column, format!("final state {f} out of range")));
                    }
                    fs.push(f);
                }
                finals = Some(fs);
            }
            ("trans", Some((states, alphabet, _))) => {
                let Some(state_tok) = toks.get(1) else {
                    return Err(err(keyword.column, "`trans` needs a state".into()));
                };
                let state = number(state_tok, line_no, "a state")?;
                if state >= states {
                    return Err(err(state_tok.column, format!("state {state} out of range")));
                }
                if rows[state].is_some() {
                    return Err(err(
                        state_tok.column,
                        format!("duplicate `trans` line for state {state}"),
                    ));
                }
                let targets = &toks[2..];
                if targets.len() != alphabet {
                    let column = targets
                        .get(alphabet)
                        .map_or(content.trim_end().chars().count() + 1, |t| t.column);
                    return Err(err(
                        column,
                        format!(
                            "state {state} has {} targets, expected {alphabet}",
                            targets.len()
                        ),
                    ));
                }
                let mut row = Vec::with_capacity(alphabet);
                for tok in targets {
                    let t = number(tok, line_no, "a target state")?;
                    if t >= states {
                        return Err(err(tok.column, format!("target {t} out of range")));
                    }
                    row.push(t);
                }
                rows[state] = Some(row);
            }
            (other, Some(_)) => {
                return Err(err(keyword.column, format!("unknown keyword `{other}`")));
            }
        }
    }

    let eof = |message: String| ParseError {
        line: last_line + 1,
        column: 1,
        message,
    };
    let (states, alphabet, initial) = header.ok_or_else(|| eof("missing `dfa` header".into()))?;
    let finals = finals.ok_or_else(|| eof("missing `finals` line".into()))?;
    let mut table = Vec::with_capacity(states * alphabet);
    for (q, row) in rows.into_iter().enumerate() {
        table.extend(row.ok_or_else(|| eof(format!("missing `trans` line for state {q}")))?);
    }
    Dfa::new(states, alphabet, table, initial, &finals)
        .map_err(|e: AutomatonError| eof(e.to_string()))
}

/// Renders a DFA in the text format. `parse_dfa(&render_dfa(d)) == d`.
pub fn render_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dfa {} {} {}",
        dfa.state_count(),
        dfa.alphabet_size(),
        dfa.initial()
    );
    out.push_str("finals");
    for f in dfa.finals() {
        let _ = write!(out, " {f}");
    }
    out.push('\n');
    for q in 0..dfa.state_count() {
        let _ = write!(out, "trans {q}");
        for t in dfa.row(q) {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}

/// Graphviz description of a DFA: one node per state (double circle for
/// finals, an arrow from an invisible start node to the initial state) and
/// one edge per `(state, symbol)`.
pub fn dfa_to_dot(dfa: &Dfa) -> String {
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..dfa.state_count() {
        let shape = if dfa.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  q{q} [label=\"{q}\", shape={shape}];");
    }
    let _ = writeln!(out, "  start -> q{};", dfa.initial());
    for q in 0..dfa.state_count() {
        for (a, t) in dfa.row(q).iter().enumerate() {
            let _ = writeln!(out, "  q{q} -> q{t} [label=\"a_{a}\"];");
        }
    }
    out.push_str("}\n");
    out
}

/// Graphviz description of a pair-state ε-NFA.
pub fn epsilon_nfa_to_dot(nfa: &EpsilonNfa) -> String {
    let mut out = String::from("digraph nfa {\n  rankdir=LR;\n  start [shape=point];\n");
    let finals = nfa.finals();
    let id = |s| nfa.index_of(s).expect("state of this automaton");
    for s in nfa.states() {
        let shape = if finals.contains(&s) {
            "doublecircle"
        } else {
            "ellipse"
        };
        let _ = writeln!(out, "  n{} [label=\"{s}\", shape={shape}];", id(s));
    }
    for s in &nfa.initials() {
        let _ = writeln!(out, "  start -> n{};", id(*s));
    }
    for (from, a, to) in nfa.labeled_transitions() {
        let _ = writeln!(out, "  n{} -> n{} [label=\"a_{a}\"];", id(from), id(to));
    }
    for (from, to) in nfa.epsilon_transitions() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"ε\", style=dashed];",
            id(from),
            id(to)
        );
    }
    out.push_str("}\n");
    out
}
