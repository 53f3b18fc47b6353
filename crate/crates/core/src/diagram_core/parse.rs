//! Text format for Coxeter diagrams.
//!
//! ```text
//! file   := stmt (";" stmt)* [";"]
//! stmt   := "nodes" range | edge | param
//! range  := INT ".." INT | IDENT ("," IDENT)*
//! edge   := IDENT "-" IDENT [":" order]
//! order  := INT | "inf" | IDENT
//! param  := "let" IDENT "=" (INT | "inf")
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Pairs without an
//! edge have order 2 and edges without a label have order 3. A label that is an
//! identifier is a symbolic parameter, bound either by a `let` statement or by
//! [`DiagramTemplate::bind`].

use std::collections::{BTreeMap, BTreeSet};

use super::{CoxeterSystem, Order};
use crate::error::{Error, Result};

/// Edge label before parameter binding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    /// A concrete order.
    Order(Order),
    /// A symbolic parameter.
    Param(String),
}

/// A parsed diagram whose edge labels may still be symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramTemplate {
    generators: Vec<String>,
    edges: Vec<(usize, usize, Label)>,
    lets: BTreeMap<String, Order>,
}

impl DiagramTemplate {
    /// Declared generator names.
    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// Every symbolic parameter used on an edge.
    pub fn parameters(&self) -> BTreeSet<String> {
        self.edges
            .iter()
            .filter_map(|(_, _, l)| match l {
                Label::Param(p) => Some(p.clone()),
                Label::Order(_) => None,
            })
            .collect()
    }

    /// Parameters used on edges that no `let` statement binds.
    pub fn unbound(&self) -> BTreeSet<String> {
        self.parameters().into_iter().filter(|p| !self.lets.contains_key(p)).collect()
    }

    /// Concrete system with the given parameter values; they override `let`s.
    pub fn bind(&self, values: &BTreeMap<String, Order>) -> Result<CoxeterSystem> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (s, t, label) in &self.edges {
            let m = match label {
                Label::Order(m) => *m,
                Label::Param(p) => *values
                    .get(p)
                    .or_else(|| self.lets.get(p))
                    .ok_or_else(|| Error::UnboundParameter(p.clone()))?,
            };
            if m == Order::Finite(1) || m == Order::Finite(0) {
                return Err(Error::InvalidInput(format!("parameter value {m} is not an order")));
            }
            edges.push((*s, *t, m));
        }
        CoxeterSystem::new(&self.generators, &edges)
    }

    /// Binds a single parameter.
    pub fn bind_one(&self, name: &str, value: Order) -> Result<CoxeterSystem> {
        let mut values = BTreeMap::new();
        values.insert(name.to_string(), value);
        self.bind(&values)
    }
}

/// Parses a diagram in which every parameter is bound by `let`.
pub fn parse_diagram(text: &str) -> Result<CoxeterSystem> {
    parse_template(text)?.bind(&BTreeMap::new())
}

/// Parses a diagram, keeping symbolic parameters.
pub fn parse_template(text: &str) -> Result<DiagramTemplate> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0, end: end_position(text) }.file()
}

/// Canonical text form: declared node order, then edges sorted by position.
pub fn serialize(w: &CoxeterSystem) -> String {
    let n = w.rank();
    let numeric = w.generators().iter().enumerate().all(|(i, g)| *g == (i + 1).to_string());
    let mut out = if n == 0 {
        String::from("nodes")
    } else if numeric {
        format!("nodes 1..{n}")
    } else {
        format!("nodes {}", w.generators().join(","))
    };
    for (i, j, m) in w.edges() {
        out.push_str("; ");
        out.push_str(&w.generators()[i]);
        out.push('-');
        out.push_str(&w.generators()[j]);
        if m != Order::Finite(3) {
            out.push(':');
            out.push_str(&m.to_string());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Int(u64),
    DotDot,
    Minus,
    Colon,
    Semi,
    Comma,
    Equals,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn end_position(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(1, |l| l.chars().count() + 1);
    (line, column)
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '-' => Some(Tok::Minus),
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Equals),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Token { tok, line, column });
                i += 1;
                continue;
            }
            if c == '.' {
                if chars.get(i + 1) == Some(&'.') {
                    out.push(Token { tok: Tok::DotDot, line, column });
                    i += 2;
                    continue;
                }
                return Err(syntax(line, column, "expected `..`"));
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = if word.chars().all(|c| c.is_ascii_digit()) {
                    Tok::Int(word.parse().map_err(|_| syntax(line, column, "integer too large"))?)
                } else {
                    Tok::Word(word)
                };
                out.push(Token { tok, line, column });
                continue;
            }
            return Err(syntax(line, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn file(&mut self) -> Result<DiagramTemplate> {
        if self.tokens.is_empty() {
            return Err(syntax(1, 1, "empty diagram"));
        }
        let mut generators: Vec<String> = Vec::new();
        let mut edges: Vec<(usize, usize, Label)> = Vec::new();
        let mut lets = BTreeMap::new();
        let mut seen_pairs = BTreeSet::new();
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                None => break,
                Some(Tok::Semi) => {
                    self.pos += 1;
                    continue;
                }
                Some(Tok::Word(w)) if w == "nodes" => {
                    self.pos += 1;
                    for name in self.range()? {
                        if generators.contains(&name) {
                            return Err(Error::DuplicateNode(name));
                        }
                        generators.push(name);
                    }
                }
                Some(Tok::Word(w)) if w == "let" => {
                    self.pos += 1;
                    let (line, column) = self.here();
                    let name = match self.next().map(|t| t.tok) {
                        Some(Tok::Word(p)) if p != "inf" => p,
                        _ => return Err(syntax(line, column, "expected parameter name")),
                    };
                    self.expect(Tok::Equals, "`=`")?;
                    let value = self.order_value()?;
                    if lets.insert(name.clone(), value).is_some() {
                        return Err(syntax(line, column, format!("parameter `{name}` bound twice")));
                    }
                }
                Some(_) => {
                    let (s, t, label) = self.edge(&generators)?;
                    if s == t {
                        return Err(Error::SelfEdge(generators[s].clone()));
                    }
                    if !seen_pairs.insert((s.min(t), s.max(t))) {
                        return Err(Error::DuplicateEdge(generators[s].clone(), generators[t].clone()));
                    }
                    edges.push((s, t, label));
                }
            }
            match self.peek().map(|t| t.tok.clone()) {
                None => break,
                Some(Tok::Semi) => self.pos += 1,
                Some(_) => return Err(self.error("expected `;`")),
            }
        }
        if generators.is_empty() {
            return Err(syntax(1, 1, "no nodes declared"));
        }
        Ok(DiagramTemplate { generators, edges, lets })
    }

    fn node_name(&mut self) -> Result<String> {
        let (line, column) = self.here();
        match self.next().map(|t| t.tok) {
            Some(Tok::Int(i)) => Ok(i.to_string()),
            Some(Tok::Word(w)) if !matches!(w.as_str(), "inf" | "let" | "nodes") => Ok(w),
            _ => Err(syntax(line, column, "expected node name")),
        }
    }

    fn range(&mut self) -> Result<Vec<String>> {
        let first_pos = self.pos;
        if let (Some(Tok::Int(a)), Some(Tok::DotDot)) = (
            self.tokens.get(first_pos).map(|t| t.tok.clone()),
            self.tokens.get(first_pos + 1).map(|t| t.tok.clone()),
        ) {
            self.pos += 2;
            let (line, column) = self.here();
            let b = match self.next().map(|t| t.tok) {
                Some(Tok::Int(b)) => b,
                _ => return Err(syntax(line, column, "expected integer after `..`")),
            };
            if b < a {
                return Err(syntax(line, column, "empty node range"));
            }
            return Ok((a..=b).map(|i| i.to_string()).collect());
        }
        let mut names = vec![self.node_name()?];
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Comma)) {
            self.pos += 1;
            names.push(self.node_name()?);
        }
        Ok(names)
    }

    fn lookup(&self, generators: &[String], name: &str, at: (usize, usize)) -> Result<usize> {
        generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| syntax(at.0, at.1, format!("unknown node `{name}`")))
    }

    fn edge(&mut self, generators: &[String]) -> Result<(usize, usize, Label)> {
        let at_s = self.here();
        let s = self.node_name()?;
        let s = self.lookup(generators, &s, at_s)?;
        self.expect(Tok::Minus, "`-`")?;
        let at_t = self.here();
        let t = self.node_name()?;
        let t = self.lookup(generators, &t, at_t)?;
        let label = if matches!(self.peek().map(|t| &t.tok), Some(Tok::Colon)) {
            self.pos += 1;
            let (line, column) = self.here();
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Word(w)) if w != "inf" => {
                    self.pos += 1;
                    if !w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                        return Err(syntax(line, column, "parameter names start with a letter"));
                    }
                    Label::Param(w)
                }
                _ => Label::Order(self.order_value()?),
            }
        } else {
            Label::Order(Order::Finite(3))
        };
        Ok((s, t, label))
    }

    fn order_value(&mut self) -> Result<Order> {
        let (line, column) = self.here();
        match self.next().map(|t| t.tok) {
            Some(Tok::Int(m)) if m >= 2 && m <= u32::MAX as u64 => Ok(Order::Finite(m as u32)),
            Some(Tok::Int(_)) => Err(syntax(line, column, "orders must be at least 2")),
            Some(Tok::Word(w)) if w == "inf" => Ok(Order::Infinite),
            _ => Err(syntax(line, column, "expected an order (integer or `inf`)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_w1_7() {
        let w = parse_diagram("nodes 1..6; 1-2; 2-3; 1-3; 3-4; 4-5; 5-6:7").unwrap();
        assert_eq!(w.rank(), 6);
        assert_eq!(w.order(4, 5), Order::Finite(7));
        assert_eq!(w.order(0, 2), Order::Finite(3));
        assert_eq!(w.order(0, 3), Order::Finite(2));
    }

    #[test]
    fn parses_infinite_and_triangle() {
        let w = parse_diagram("nodes 1..2; 1-2:inf").unwrap();
        assert_eq!(w.order(0, 1), Order::Infinite);
        let w = parse_diagram("nodes 1..3; 1-2:4; 2-3:4; 1-3:4").unwrap();
        assert!(w.edges().iter().all(|e| e.2 == Order::Finite(4)));
    }

    #[test]
    fn comments_lets_and_named_nodes() {
        let text = "# W1 family\nnodes a, b, c # three nodes\n; a-b:m; b-c;\nlet m = 7;";
        let w = parse_diagram(text).unwrap();
        assert_eq!(w.order_by_name("a", "b").unwrap(), Order::Finite(7));
    }

    #[test]
    fn symbolic_parameters_stay_unbound() {
        let t = parse_template("nodes 1..6; 1-2; 2-3; 1-3; 3-4; 4-5; 5-6:m").unwrap();
        assert_eq!(t.unbound().into_iter().collect::<Vec<_>>(), vec!["m".to_string()]);
        assert!(matches!(parse_diagram("nodes 1..2; 1-2:m"), Err(Error::UnboundParameter(_))));
        let w = t.bind_one("m", Order::Infinite).unwrap();
        assert_eq!(w.order(4, 5), Order::Infinite);
    }

    #[test]
    fn reports_errors() {
        match parse_diagram("nodes 1..3;\n1-2; 2-x") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_diagram(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_diagram("nodes 1..3; 1-2; 2-1"), Err(Error::DuplicateEdge(_, _))));
        assert!(matches!(parse_diagram("nodes 1..3; 2-2"), Err(Error::SelfEdge(_))));
        assert!(matches!(parse_diagram("nodes 1..3; 1-2:1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_diagram("nodes 1..3 1-2"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn serialization_is_canonical() {
        let w = parse_diagram("nodes 1..4; 3-4:inf; 1-2:5; 2-3").unwrap();
        assert_eq!(w.to_dsl(), "nodes 1..4; 1-2:5; 2-3; 3-4:inf");
        let w = parse_diagram("nodes x,y; y-x:4").unwrap();
        assert_eq!(w.to_dsl(), "nodes x,y; x-y:4");
    }

    fn arb_system() -> impl Strategy<Value = CoxeterSystem> {
        (1usize..8).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(prop_oneof![Just(0u32), Just(2), 3u32..9, Just(u32::MAX)], pairs)
                .prop_map(move |labels| {
                    let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for i in 0..n {
                        for j in i + 1..n {
                            match labels[k] {
                                0 | 2 => {}
                                u32::MAX => edges.push((i, j, Order::Infinite)),
                                m => edges.push((i, j, Order::Finite(m))),
                            }
                            k += 1;
                        }
                    }
                    CoxeterSystem::new(&names, &edges).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn parse_serialize_round_trip(w in arb_system()) {
            let back = parse_diagram(&w.to_dsl()).unwrap();
            prop_assert_eq!(back, w);
        }
    }
}
