//! Recursive descent over the token list with one token of lookahead,
//! followed by a semantic pass that collects every problem it finds.

use std::collections::{BTreeMap, HashMap};

use super::lexer::{tokenize, Token, TokenKind};
use super::*;
use crate::arith::DigitPattern;
use crate::permgrp::CENTRALIZER_DEGREE_CAP;

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> PResult<Self> {
        Ok(Self { text, tokens: tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>, span: Span) -> PResult<T> {
        Err(Diagnostic::error(message, span, self.text))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        let t = self.peek();
        self.error(format!("expected {wanted}, found {}", t.kind.describe()), t.span)
    }

    fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.at(&kind) {
            Ok(self.next())
        } else {
            self.unexpected(&kind.describe())
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.next();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.at_keyword(kw) {
            Ok(self.next().span)
        } else {
            self.unexpected(&format!("'{kw}'"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let text = s.clone();
                Ok(Ident { text, span: self.next().span })
            }
            _ => self.unexpected(what),
        }
    }

    fn string(&mut self, what: &str) -> PResult<StrLit> {
        match &self.peek().kind {
            TokenKind::Str(s) => {
                let value = s.clone();
                Ok(StrLit { value, span: self.next().span })
            }
            _ => self.unexpected(what),
        }
    }

    fn int(&mut self, what: &str) -> PResult<(u64, Span)> {
        match self.peek().kind {
            TokenKind::Int(n) => Ok((n, self.next().span)),
            _ => self.unexpected(what),
        }
    }

    fn number(&mut self) -> PResult<f64> {
        match self.peek().kind {
            TokenKind::Int(n) => {
                self.next();
                Ok(n as f64)
            }
            TokenKind::Float(x) => {
                self.next();
                Ok(x)
            }
            _ => self.unexpected("a number"),
        }
    }

    /// A letter or symbol: an identifier, number or string of exactly one character.
    fn symbol(&mut self, what: &str) -> PResult<(String, Span)> {
        let t = self.peek().clone();
        let raw = match &t.kind {
            TokenKind::Ident(_) | TokenKind::Int(_) => self.text[t.span.offset..t.span.offset + t.span.len].to_string(),
            TokenKind::Str(s) => s.clone(),
            _ => return self.unexpected(what),
        };
        if raw.chars().count() != 1 {
            return self.error(format!("{what} must be a single character, found '{raw}'"), t.span);
        }
        self.next();
        Ok((raw, t.span))
    }

    fn document(&mut self) -> PResult<SpecDocument> {
        let mut declarations = Vec::new();
        while !self.at(&TokenKind::Eof) {
            declarations.push(self.declaration()?);
        }
        Ok(SpecDocument { declarations })
    }

    fn declaration(&mut self) -> PResult<Declaration> {
        let kw = match &self.peek().kind {
            TokenKind::Ident(s) => s.clone(),
            _ => return self.unexpected("a declaration"),
        };
        match kw.as_str() {
            "substitution" => self.substitution().map(Declaration::Substitution),
            "morse" => self.morse().map(Declaration::Morse),
            "rs" => self.rs().map(Declaration::Rs),
            "veech" => self.veech().map(Declaration::Veech),
            "observable" => self.observable().map(Declaration::Observable),
            "experiment" => self.experiment().map(Declaration::Experiment),
            _ => self.error(
                format!("unknown declaration '{kw}' (expected substitution, morse, rs, veech, observable or experiment)"),
                self.peek().span,
            ),
        }
    }

    fn substitution(&mut self) -> PResult<SubstitutionDecl> {
        self.keyword("substitution")?;
        let name = self.ident("a name")?;
        self.keyword("on")?;
        self.expect(TokenKind::LBrace)?;
        let mut letters = Vec::new();
        loop {
            let (s, span) = self.symbol("a letter")?;
            letters.push((s.chars().next().unwrap(), span));
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RBrace)?;
        self.expect(TokenKind::LBrace)?;
        let mut rules = Vec::new();
        while !self.at(&TokenKind::RBrace) {
            let (s, letter_span) = self.symbol("a letter")?;
            self.expect(TokenKind::Arrow)?;
            let image = self.string("a quoted image word")?;
            rules.push(Rule { letter: s.chars().next().unwrap(), letter_span, image });
            if !self.eat(&TokenKind::Semi) {
                break;
            }
        }
        self.expect(TokenKind::RBrace)?;
        Ok(SubstitutionDecl { name, letters, rules })
    }

    fn group(&mut self) -> PResult<(GroupExpr, Span)> {
        let id = self.ident("a group (Z2, Zn(k), Sym(r) or cover-of NAME)")?;
        let g = match id.text.as_str() {
            "Z2" => GroupExpr::Z2,
            "Zn" | "Sym" => {
                self.expect(TokenKind::LParen)?;
                let (k, _) = self.int("a group parameter")?;
                self.expect(TokenKind::RParen)?;
                if id.text == "Zn" {
                    GroupExpr::Zn(k)
                } else {
                    GroupExpr::Sym(k)
                }
            }
            "cover-of" => GroupExpr::CoverOf(self.ident("a substitution name")?),
            other => return self.error(format!("unknown group '{other}'"), id.span),
        };
        Ok((g, id.span))
    }

    fn morse(&mut self) -> PResult<MorseDecl> {
        let start = self.keyword("morse")?;
        let name = self.ident("a name")?;
        self.keyword("over")?;
        let (group, group_span) = self.group()?;
        self.keyword("blocks")?;
        self.expect(TokenKind::LBracket)?;
        let mut prefix = Vec::new();
        let mut cycle = Vec::new();
        let mut repeating = false;
        while !self.at(&TokenKind::RBracket) {
            if self.at_keyword("repeat") {
                let span = self.next().span;
                if repeating {
                    return self.error("'repeat' may appear only once", span);
                }
                repeating = true;
            }
            let b = self.string("a quoted block")?;
            if repeating {
                cycle.push(b);
            } else {
                prefix.push(b);
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        let close = self.expect(TokenKind::RBracket)?;
        if cycle.is_empty() {
            let _ = start;
            return self.error("block list needs a 'repeat' part", close.span);
        }
        Ok(MorseDecl { name, group, group_span, prefix, cycle })
    }

    fn rs(&mut self) -> PResult<RsDecl> {
        self.keyword("rs")?;
        let name = self.ident("a name")?;
        self.keyword("pattern")?;
        let pattern = self.string("a quoted digit pattern")?;
        Ok(RsDecl { name, pattern })
    }

    fn veech(&mut self) -> PResult<VeechDecl> {
        self.keyword("veech")?;
        let name = self.ident("a name")?;
        self.keyword("base")?;
        let (base, base_span) = self.int("the odometer base")?;
        self.keyword("group")?;
        let (group, group_span) = self.group()?;
        self.keyword("psi")?;
        let psi_prefix = if matches!(self.peek().kind, TokenKind::Str(_)) { Some(self.string("Ψ values")?) } else { None };
        self.keyword("repeat")?;
        let psi_cycle = self.string("repeating Ψ values")?;
        Ok(VeechDecl { name, base, base_span, group, group_span, psi_prefix, psi_cycle })
    }

    fn observable(&mut self) -> PResult<ObservableDecl> {
        self.keyword("observable")?;
        let name = self.ident("a name")?;
        self.expect(TokenKind::Equals)?;
        let expr = self.observable_expr()?;
        Ok(ObservableDecl { name, expr })
    }

    fn observable_expr(&mut self) -> PResult<ObservableExpr> {
        let kind = self.ident("walsh, indicator or table")?;
        match kind.text.as_str() {
            "walsh" => {
                self.expect(TokenKind::LBrace)?;
                let mut offsets = Vec::new();
                while !self.at(&TokenKind::RBrace) {
                    offsets.push(self.int("an offset")?.0);
                    if !self.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
                Ok(ObservableExpr::Walsh(offsets))
            }
            "indicator" => {
                let block = self.string("a quoted block")?;
                let offset = if self.at_keyword("at") {
                    self.next();
                    self.int("an offset")?.0
                } else {
                    0
                };
                Ok(ObservableExpr::Indicator { block, offset })
            }
            "table" => {
                self.expect(TokenKind::LBrace)?;
                let mut entries = Vec::new();
                while !self.at(&TokenKind::RBrace) {
                    let (symbol, symbol_span) = self.symbol("a symbol")?;
                    self.expect(TokenKind::Colon)?;
                    let (re, im) = if self.eat(&TokenKind::LParen) {
                        let re = self.number()?;
                        self.expect(TokenKind::Comma)?;
                        let im = self.number()?;
                        self.expect(TokenKind::RParen)?;
                        (re, im)
                    } else {
                        (self.number()?, 0.0)
                    };
                    entries.push(TableEntry { symbol, symbol_span, re, im });
                    if !self.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
                Ok(ObservableExpr::Table(entries))
            }
            other => self.error(format!("unknown observable kind '{other}'"), kind.span),
        }
    }

    fn experiment(&mut self) -> PResult<ExperimentDecl> {
        self.keyword("experiment")?;
        let name = self.ident("a name")?;
        self.expect(TokenKind::LBrace)?;
        let mut system = None;
        let mut observable = None;
        let mut weight = None;
        let mut n = None;
        let mut checkpoints = None;
        let mut kbsz = None;
        let mut seen: HashMap<String, Span> = HashMap::new();
        while !self.at(&TokenKind::RBrace) {
            let field = self.ident("a field name")?;
            if let Some(first) = seen.get(&field.text) {
                return self.error(
                    format!("field '{}' repeated (first given at {}:{})", field.text, first.line, first.column),
                    field.span,
                );
            }
            seen.insert(field.text.clone(), field.span);
            self.expect(TokenKind::Colon)?;
            match field.text.as_str() {
                "system" => system = Some(self.ident("a system name")?),
                "observable" => observable = Some(self.ident("an observable name")?),
                "weight" => {
                    let w = self.ident("moebius, liouville or none")?;
                    weight = Some(match w.text.as_str() {
                        "moebius" => WeightChoice::Moebius,
                        "liouville" => WeightChoice::Liouville,
                        "none" => WeightChoice::None,
                        other => return self.error(format!("unknown weight '{other}'"), w.span),
                    });
                }
                "N" => n = Some(self.int("a sample size")?),
                "checkpoints" => {
                    checkpoints = Some(if self.at_keyword("pow2") {
                        self.next();
                        CheckpointSpec::Pow2
                    } else {
                        self.expect(TokenKind::LBracket)?;
                        let mut list = Vec::new();
                        while !self.at(&TokenKind::RBracket) {
                            list.push(self.int("a checkpoint")?.0);
                            if !self.eat(&TokenKind::Comma) {
                                break;
                            }
                        }
                        self.expect(TokenKind::RBracket)?;
                        CheckpointSpec::List(list)
                    });
                }
                "kbsz" => {
                    self.expect(TokenKind::LParen)?;
                    let (r, _) = self.int("a prime")?;
                    self.expect(TokenKind::Comma)?;
                    let (s, _) = self.int("a prime")?;
                    self.expect(TokenKind::RParen)?;
                    kbsz = Some((r, s));
                }
                other => return self.error(format!("unknown experiment field '{other}'"), field.span),
            }
            if !self.eat(&TokenKind::Semi) {
                break;
            }
        }
        self.expect(TokenKind::RBrace)?;
        let missing = |f: &str| Diagnostic::error(format!("experiment '{}' has no '{f}' field", name.text), name.span, self.text);
        let system = system.ok_or_else(|| missing("system"))?;
        let observable = observable.ok_or_else(|| missing("observable"))?;
        let (n, _) = n.ok_or_else(|| missing("N"))?;
        Ok(ExperimentDecl { name, system, observable, weight, n, checkpoints, kbsz })
    }
}

/// Parse a whole document. Any error-severity diagnostic rejects it.
pub fn parse_spec(text: &str) -> Result<SpecDocument, Vec<Diagnostic>> {
    let doc = Parser::new(text).and_then(|mut p| p.document()).map_err(|d| vec![d])?;
    let diags = validate(&doc, text);
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(doc)
    }
}

/// Parse a lone observable expression such as `walsh {0, 1}`.
pub fn parse_observable_expr(text: &str) -> Result<ObservableExpr, Diagnostic> {
    let mut p = Parser::new(text)?;
    let expr = p.observable_expr()?;
    if !p.at(&TokenKind::Eof) {
        return p.unexpected("end of input");
    }
    let probe = ObservableDecl { name: Ident { text: String::new(), span: Span::default() }, expr };
    let mut diags = Vec::new();
    check_observable(&probe, text, &mut diags);
    match diags.into_iter().next() {
        Some(d) => Err(d),
        None => Ok(probe.expr),
    }
}

fn group_order(g: &GroupExpr) -> Option<Result<u64, String>> {
    match g {
        GroupExpr::Z2 => Some(Ok(2)),
        GroupExpr::Zn(0) => Some(Err("Zn needs a positive order".into())),
        GroupExpr::Zn(k) => Some(Ok(*k)),
        GroupExpr::Sym(r) if *r == 0 || *r > CENTRALIZER_DEGREE_CAP as u64 => {
            Some(Err(format!("Sym(r) is supported for 1 ≤ r ≤ {CENTRALIZER_DEGREE_CAP}")))
        }
        GroupExpr::Sym(r) => Some(Ok((1..=*r).product())),
        GroupExpr::CoverOf(_) => None,
    }
}

/// Group elements are written as base-36 digits `0-9a-z`, `0` the identity.
fn check_elements(lit: &StrLit, order: Option<u64>, text: &str, diags: &mut Vec<Diagnostic>) {
    for (i, c) in lit.value.chars().enumerate() {
        match c.to_digit(36) {
            None => diags.push(Diagnostic::error(
                format!("'{c}' is not a group element (use 0-9, a-z)"),
                lit.char_span(i),
                text,
            )),
            Some(d) if order.is_some_and(|m| u64::from(d) >= m) => diags.push(Diagnostic::error(
                format!("element '{c}' is outside a group of order {}", order.unwrap()),
                lit.char_span(i),
                text,
            )),
            _ => {}
        }
    }
}

fn check_group(g: &GroupExpr, span: Span, doc: &SpecDocument, text: &str, diags: &mut Vec<Diagnostic>) -> Option<u64> {
    match group_order(g) {
        Some(Ok(m)) => Some(m),
        Some(Err(msg)) => {
            diags.push(Diagnostic::error(msg, span, text));
            None
        }
        None => {
            if let GroupExpr::CoverOf(target) = g {
                match doc.get(&target.text) {
                    Some(Declaration::Substitution(_)) => {}
                    Some(other) => diags.push(Diagnostic::error(
                        format!("'{}' is a {}, not a substitution", target.text, other.keyword()),
                        target.span,
                        text,
                    )),
                    None => diags.push(Diagnostic::error(
                        format!("unresolved reference '{}'", target.text),
                        target.span,
                        text,
                    )),
                }
            }
            None
        }
    }
}

fn check_observable(d: &ObservableDecl, text: &str, diags: &mut Vec<Diagnostic>) {
    match &d.expr {
        ObservableExpr::Walsh(_) => {}
        ObservableExpr::Indicator { block, .. } => {
            if block.value.is_empty() {
                diags.push(Diagnostic::error("indicator block is empty", block.span, text));
            }
        }
        ObservableExpr::Table(entries) => {
            if entries.is_empty() {
                diags.push(Diagnostic::error("table has no entries", d.name.span, text));
            }
            let mut seen: BTreeMap<&str, Span> = BTreeMap::new();
            for e in entries {
                if let Some(first) = seen.get(e.symbol.as_str()) {
                    diags.push(Diagnostic::error(
                        format!("symbol '{}' listed twice (first at {}:{})", e.symbol, first.line, first.column),
                        e.symbol_span,
                        text,
                    ));
                } else {
                    seen.insert(&e.symbol, e.symbol_span);
                }
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn validate(doc: &SpecDocument, text: &str) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut names: HashMap<&str, Span> = HashMap::new();
    for d in &doc.declarations {
        let name = d.name();
        if let Some(first) = names.get(name.text.as_str()) {
            diags.push(Diagnostic::error(
                format!(
                    "duplicate name '{}' at {}:{} (first declared at {}:{})",
                    name.text, name.span.line, name.span.column, first.line, first.column
                ),
                name.span,
                text,
            ));
        } else {
            names.insert(&name.text, name.span);
        }
    }

    for d in &doc.declarations {
        match d {
            Declaration::Substitution(s) => check_substitution(s, text, &mut diags),
            Declaration::Morse(m) => {
                let order = check_group(&m.group, m.group_span, doc, text, &mut diags);
                for b in m.prefix.iter().chain(&m.cycle) {
                    if b.value.chars().count() < 2 {
                        diags.push(Diagnostic::error("blocks need at least two symbols", b.span, text));
                    } else if !b.value.starts_with('0') {
                        diags.push(Diagnostic::error("blocks must start with the identity '0'", b.char_span(0), text));
                    }
                    check_elements(b, order, text, &mut diags);
                }
            }
            Declaration::Rs(r) => {
                if let Err(e) = r.pattern.value.parse::<DigitPattern>() {
                    diags.push(Diagnostic::error(format!("bad digit pattern: {e}"), r.pattern.span, text));
                }
            }
            Declaration::Veech(v) => {
                if v.base < 2 {
                    diags.push(Diagnostic::error("odometer base must be at least 2", v.base_span, text));
                }
                let order = check_group(&v.group, v.group_span, doc, text, &mut diags);
                if v.psi_cycle.value.is_empty() {
                    diags.push(Diagnostic::error("repeating Ψ values are empty", v.psi_cycle.span, text));
                }
                for lit in v.psi_prefix.iter().chain(std::iter::once(&v.psi_cycle)) {
                    check_elements(lit, order, text, &mut diags);
                }
            }
            Declaration::Observable(o) => check_observable(o, text, &mut diags),
            Declaration::Experiment(e) => check_experiment(e, doc, text, &mut diags),
        }
    }
    diags
}

fn check_substitution(s: &SubstitutionDecl, text: &str, diags: &mut Vec<Diagnostic>) {
    let mut letters: BTreeMap<char, Span> = BTreeMap::new();
    for &(c, span) in &s.letters {
        if let Some(first) = letters.get(&c) {
            diags.push(Diagnostic::error(
                format!("letter '{c}' listed twice (first at {}:{})", first.line, first.column),
                span,
                text,
            ));
        } else {
            letters.insert(c, span);
        }
    }
    if letters.len() < 2 {
        diags.push(Diagnostic::error("a substitution needs at least two letters", s.name.span, text));
    }
    let mut ruled: BTreeMap<char, Span> = BTreeMap::new();
    let expected_len = s.rules.first().map(|r| r.image.value.chars().count());
    for r in &s.rules {
        if !letters.contains_key(&r.letter) {
            diags.push(Diagnostic::error(
                format!("unknown letter '{}' (alphabet is {{{}}})", r.letter, alphabet_list(s)),
                r.letter_span,
                text,
            ));
        }
        if let Some(first) = ruled.get(&r.letter) {
            diags.push(Diagnostic::error(
                format!("second rule for '{}' (first at {}:{})", r.letter, first.line, first.column),
                r.letter_span,
                text,
            ));
        } else {
            ruled.insert(r.letter, r.letter_span);
        }
        for (i, c) in r.image.value.chars().enumerate() {
            if !letters.contains_key(&c) {
                diags.push(Diagnostic::error(
                    format!("unknown letter '{c}' in the image of '{}'", r.letter),
                    r.image.char_span(i),
                    text,
                ));
            }
        }
        let len = r.image.value.chars().count();
        if len < 2 {
            diags.push(Diagnostic::error("images need at least two letters", r.image.span, text));
        } else if Some(len) != expected_len {
            diags.push(Diagnostic::error(
                format!("image of '{}' has length {len}, expected {}", r.letter, expected_len.unwrap()),
                r.image.span,
                text,
            ));
        }
    }
    for (&c, _) in letters.iter().filter(|(c, _)| !ruled.contains_key(c)) {
        diags.push(Diagnostic::error(format!("letter '{c}' has no rule"), s.name.span, text));
    }
}

fn alphabet_list(s: &SubstitutionDecl) -> String {
    s.letters.iter().map(|(c, _)| c.to_string()).collect::<Vec<_>>().join(",")
}

fn check_experiment(e: &ExperimentDecl, doc: &SpecDocument, text: &str, diags: &mut Vec<Diagnostic>) {
    match doc.get(&e.system.text) {
        Some(d) if d.is_system() => {}
        Some(d) => diags.push(Diagnostic::error(
            format!("'{}' is a {}, not a system", e.system.text, d.keyword()),
            e.system.span,
            text,
        )),
        None => diags.push(Diagnostic::error(format!("unresolved reference '{}'", e.system.text), e.system.span, text)),
    }
    match doc.get(&e.observable.text) {
        Some(Declaration::Observable(_)) => {}
        Some(d) => diags.push(Diagnostic::error(
            format!("'{}' is a {}, not an observable", e.observable.text, d.keyword()),
            e.observable.span,
            text,
        )),
        None => diags.push(Diagnostic::error(
            format!("unresolved reference '{}'", e.observable.text),
            e.observable.span,
            text,
        )),
    }
    if e.n == 0 {
        diags.push(Diagnostic::error("N must be positive", e.name.span, text));
    }
    if let Some(CheckpointSpec::List(list)) = &e.checkpoints {
        if list.is_empty() || list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) || list.last() > Some(&e.n) {
            diags.push(Diagnostic::error("checkpoints must increase strictly within 1..=N", e.name.span, text));
        }
    }
    if let Some((r, s)) = e.kbsz {
        if r == s || !is_prime(r) || !is_prime(s) {
            diags.push(Diagnostic::error(format!("kbsz needs two different primes, got ({r}, {s})"), e.name.span, text));
        }
        if matches!(e.weight, Some(WeightChoice::Moebius | WeightChoice::Liouville)) {
            diags.push(Diagnostic::error("kbsz experiments take no arithmetic weight", e.name.span, text));
        }
    }
}
