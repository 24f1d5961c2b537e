//! Line-oriented grammar file format, configuration literals, and writers.
//!
//! ```text
//! zcfgr 1
//! counters c1 c2
//! nonterminals S A
//! axiom S
//! rule p1: S -> A A | reset c1 | add c1 +1 c2 -2
//! rule p2: A -> eps
//! ```
//!
//! `#` starts a comment. Declarations must precede the rules so that every
//! symbol a rule mentions can be checked on the spot. A configuration literal
//! is `<word or eps> ; <name>=<int> ...`; counters left out default to zero.

use std::fmt;

use thiserror::Error;

use crate::config::{Configuration, Valuation};
use crate::grammar::{Grammar, GrammarError, Production};
use crate::word::CommutativeWord;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: SourcePos, message: String },
    #[error("{pos}: undeclared symbol `{symbol}`")]
    Undeclared { pos: SourcePos, symbol: String },
    #[error("{pos}: duplicate production id `{id}`")]
    DuplicateProduction { pos: SourcePos, id: String },
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

fn syntax(pos: SourcePos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, message: message.into() }
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    pos: SourcePos,
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut column = 0;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            continue;
        }
        let start_of_token = i == 0 || line[..i].ends_with(|c: char| c.is_whitespace());
        if start_of_token {
            let end = line[i..]
                .find(char::is_whitespace)
                .map(|j| i + j)
                .unwrap_or(line.len());
            tokens.push(Token {
                text: &line[i..end],
                pos: SourcePos { line: line_no, column: i + 1 },
            });
        }
        column = i;
    }
    let _ = column;
    tokens
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '~' => {}
        _ => return false,
    }
    s != "eps" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '~')
}

fn expect_name(token: &Token) -> Result<String, ParseError> {
    if is_name(token.text) {
        Ok(token.text.to_string())
    } else {
        Err(syntax(token.pos, format!("expected a symbol name, found `{}`", token.text)))
    }
}

fn parse_int(token: &Token) -> Result<i64, ParseError> {
    token
        .text
        .parse::<i64>()
        .map_err(|_| syntax(token.pos, format!("expected an integer, found `{}`", token.text)))
}

struct Declarations {
    nonterminals: Vec<String>,
    counters: Vec<String>,
    axiom: Option<String>,
}

impl Declarations {
    fn check_nonterminal(&self, token: &Token) -> Result<String, ParseError> {
        let name = expect_name(token)?;
        if self.nonterminals.iter().any(|n| *n == name) {
            Ok(name)
        } else {
            Err(ParseError::Undeclared { pos: token.pos, symbol: name })
        }
    }

    fn check_counter(&self, token: &Token) -> Result<String, ParseError> {
        let name = expect_name(token)?;
        if self.counters.iter().any(|c| *c == name) {
            Ok(name)
        } else {
            Err(ParseError::Undeclared { pos: token.pos, symbol: name })
        }
    }
}

fn parse_rule(tokens: &[Token], decls: &Declarations) -> Result<Production, ParseError> {
    let end_pos = tokens.last().map(|t| t.pos).unwrap_or(SourcePos { line: 0, column: 0 });
    let mut i = 1; // past `rule`
    let id_token = tokens.get(i).ok_or_else(|| syntax(end_pos, "expected production id"))?;
    let id_text = id_token
        .text
        .strip_suffix(':')
        .ok_or_else(|| syntax(id_token.pos, "expected `<id>:`"))?;
    if !is_name(id_text) {
        return Err(syntax(id_token.pos, format!("invalid production id `{id_text}`")));
    }
    i += 1;
    let lhs_token = tokens.get(i).ok_or_else(|| syntax(end_pos, "expected left-hand side"))?;
    let lhs = decls.check_nonterminal(lhs_token)?;
    i += 1;
    match tokens.get(i) {
        Some(t) if t.text == "->" => i += 1,
        Some(t) => return Err(syntax(t.pos, format!("expected `->`, found `{}`", t.text))),
        None => return Err(syntax(end_pos, "expected `->`")),
    }

    let mut rhs = CommutativeWord::empty();
    let mut saw_eps = false;
    let mut rhs_tokens = 0;
    while let Some(t) = tokens.get(i) {
        if t.text == "|" {
            break;
        }
        if t.text == "eps" {
            saw_eps = true;
            i += 1;
            rhs_tokens += 1;
            continue;
        }
        let symbol = decls.check_nonterminal(t)?;
        rhs.insert(symbol, 1);
        i += 1;
        rhs_tokens += 1;
    }
    if rhs_tokens == 0 {
        return Err(syntax(end_pos, "expected right-hand side words or `eps`"));
    }
    if saw_eps && !rhs.is_empty() {
        return Err(syntax(end_pos, "`eps` cannot be mixed with symbols"));
    }

    let mut resets = std::collections::BTreeSet::new();
    let mut update = std::collections::BTreeMap::new();
    if let Some(t) = tokens.get(i) {
        if t.text == "|" {
            let section = tokens
                .get(i + 1)
                .ok_or_else(|| syntax(end_pos, "expected `reset` or `add` after `|`"))?;
            if section.text == "reset" {
                i += 2;
                let mut count = 0;
                while let Some(t) = tokens.get(i) {
                    if t.text == "|" {
                        break;
                    }
                    resets.insert(decls.check_counter(t)?);
                    i += 1;
                    count += 1;
                }
                if count == 0 {
                    return Err(syntax(section.pos, "expected counter names after `reset`"));
                }
            }
        }
    }
    if let Some(t) = tokens.get(i) {
        if t.text == "|" {
            let section = tokens
                .get(i + 1)
                .ok_or_else(|| syntax(end_pos, "expected `add` after `|`"))?;
            if section.text != "add" {
                return Err(syntax(section.pos, format!("expected `add`, found `{}`", section.text)));
            }
            i += 2;
            let mut count = 0;
            while i < tokens.len() {
                let name = decls.check_counter(&tokens[i])?;
                let value_token = tokens
                    .get(i + 1)
                    .ok_or_else(|| syntax(tokens[i].pos, format!("expected update value for `{name}`")))?;
                let value = parse_int(value_token)?;
                *update.entry(name).or_insert(0) += value;
                i += 2;
                count += 1;
            }
            if count == 0 {
                return Err(syntax(section.pos, "expected counter/value pairs after `add`"));
            }
        }
    }
    if let Some(t) = tokens.get(i) {
        return Err(syntax(t.pos, format!("unexpected `{}`", t.text)));
    }

    Ok(Production {
        id: id_text.to_string(),
        lhs,
        resets,
        update,
        rhs,
    })
}

/// Parses a grammar document.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, line)| (n + 1, tokenize(line, n + 1)))
        .filter(|(_, tokens)| !tokens.is_empty());

    match lines.next() {
        Some((_, tokens)) if tokens.len() == 2 && tokens[0].text == "zcfgr" && tokens[1].text == "1" => {}
        Some((_, tokens)) => return Err(syntax(tokens[0].pos, "expected header `zcfgr 1`")),
        None => {
            return Err(syntax(SourcePos { line: 1, column: 1 }, "empty document; expected header `zcfgr 1`"))
        }
    }

    let mut decls = Declarations { nonterminals: Vec::new(), counters: Vec::new(), axiom: None };
    let mut productions: Vec<Production> = Vec::new();
    let mut ids: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut rules_started = false;

    for (_, tokens) in lines {
        let keyword = &tokens[0];
        match keyword.text {
            "nonterminals" | "counters" | "axiom" if rules_started => {
                return Err(syntax(keyword.pos, "declarations must precede rules"));
            }
            "nonterminals" => {
                for t in &tokens[1..] {
                    decls.nonterminals.push(expect_name(t)?);
                }
                if tokens.len() == 1 {
                    return Err(syntax(keyword.pos, "expected nonterminal names"));
                }
            }
            "counters" => {
                for t in &tokens[1..] {
                    decls.counters.push(expect_name(t)?);
                }
                if tokens.len() == 1 {
                    return Err(syntax(keyword.pos, "expected counter names"));
                }
            }
            "axiom" => {
                if tokens.len() != 2 {
                    return Err(syntax(keyword.pos, "expected exactly one axiom name"));
                }
                if decls.axiom.is_some() {
                    return Err(syntax(keyword.pos, "duplicate axiom declaration"));
                }
                decls.axiom = Some(decls.check_nonterminal(&tokens[1])?);
            }
            "rule" => {
                rules_started = true;
                let p = parse_rule(&tokens, &decls)?;
                if !ids.insert(p.id.clone()) {
                    return Err(ParseError::DuplicateProduction { pos: keyword.pos, id: p.id });
                }
                productions.push(p);
            }
            other => {
                return Err(syntax(keyword.pos, format!("unknown directive `{other}`")));
            }
        }
    }

    let axiom = decls.axiom.ok_or_else(|| {
        syntax(SourcePos { line: 1, column: 1 }, "missing `axiom` declaration")
    })?;
    Ok(Grammar::new(decls.nonterminals, decls.counters, productions, axiom)?)
}

/// Parses a configuration literal such as `S A A ; c1=3 c2=-1` against a
/// grammar. Counters not mentioned default to zero.
pub fn parse_configuration(text: &str, g: &Grammar) -> Result<Configuration, ParseError> {
    let (word_part, counter_part) = match text.find(';') {
        Some(i) => (&text[..i], &text[i + 1..]),
        None => (text, ""),
    };

    let mut word = CommutativeWord::empty();
    let mut saw_eps = false;
    let word_tokens = tokenize(word_part, 1);
    for t in &word_tokens {
        if t.text == "eps" {
            saw_eps = true;
            continue;
        }
        let name = expect_name(t)?;
        if !g.is_nonterminal(&name) {
            return Err(ParseError::Undeclared { pos: t.pos, symbol: name });
        }
        word.insert(name, 1);
    }
    if word_tokens.is_empty() {
        return Err(syntax(SourcePos { line: 1, column: 1 }, "expected a word or `eps`"));
    }
    if saw_eps && !word.is_empty() {
        return Err(syntax(word_tokens[0].pos, "`eps` cannot be mixed with symbols"));
    }

    let mut counters = Valuation::default();
    let offset = word_part.len() + 1;
    for t in tokenize(counter_part, 1) {
        let pos = SourcePos { line: 1, column: t.pos.column + offset };
        let (name, value) = t
            .text
            .split_once('=')
            .ok_or_else(|| syntax(pos, format!("expected `<name>=<int>`, found `{}`", t.text)))?;
        if !g.is_counter(name) {
            return Err(ParseError::Undeclared { pos, symbol: name.to_string() });
        }
        let value: i64 = value
            .parse()
            .map_err(|_| syntax(pos, format!("expected an integer value, found `{value}`")))?;
        counters.set(name, value);
    }
    let counters = counters
        .complete_for(g)
        .expect("counter names were checked above");
    Ok(Configuration::new(word, counters))
}

/// Renders a grammar in the file format; `parse_grammar` accepts the output.
pub fn write_grammar(g: &Grammar) -> String {
    let mut out = String::from("zcfgr 1\n");
    if !g.counters().is_empty() {
        out.push_str(&format!("counters {}\n", g.counters().join(" ")));
    }
    out.push_str(&format!("nonterminals {}\n", g.nonterminals().join(" ")));
    out.push_str(&format!("axiom {}\n", g.axiom()));
    for p in g.productions() {
        let mut line = format!("rule {}: {} -> {}", p.id, p.lhs, p.rhs);
        if !p.resets.is_empty() {
            let names: Vec<&str> = p.resets.iter().map(String::as_str).collect();
            line.push_str(&format!(" | reset {}", names.join(" ")));
        }
        let updates: Vec<String> = g
            .counters()
            .iter()
            .filter(|c| p.update_of(c) != 0)
            .map(|c| format!("{c} {}", p.update_of(c)))
            .collect();
        if !updates.is_empty() {
            line.push_str(&format!(" | add {}", updates.join(" ")));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
