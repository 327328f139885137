//! A small declarative format for systems, observables and experiments.
//!
//! ```text
//! substitution tm on {0, 1} { 0 -> "01"; 1 -> "10" }
//! observable w0 = walsh {0}
//! experiment sarnak-tm { system: tm; observable: w0; weight: moebius; N: 1048576 }
//! ```
//!
//! [`parse_spec`] either returns a whole document or the diagnostics that
//! prevented it; [`print_spec`] writes the canonical form; [`build`] turns
//! declarations into runnable objects.

mod build;
mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use build::{builtin_document, resolve_symbols, System};
pub use parser::{parse_observable_expr, parse_spec};
pub use printer::{print_declaration, print_spec};

/// Source position of a token. Positions never take part in equality, so
/// documents compare by content.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub len: usize,
}

impl Span {
    pub fn new(line: usize, column: usize, offset: usize, len: usize) -> Self {
        Self { line, column, offset, len }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub column: usize,
    /// The source line containing the position.
    pub excerpt: String,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: Span, text: &str) -> Self {
        let excerpt = text.lines().nth(span.line.saturating_sub(1)).unwrap_or("").to_string();
        Self { severity: Severity::Error, message: message.into(), line: span.line, column: span.column, excerpt }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: error: message`, the excerpt and a caret.
    pub fn render(&self, file: &str) -> String {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let pad: String = self
            .excerpt
            .chars()
            .take(self.column.saturating_sub(1))
            .map(|c| if c == '\t' { '\t' } else { ' ' })
            .collect();
        format!("{file}:{}:{}: {sev}: {}\n  {}\n  {pad}^", self.line, self.column, self.message, self.excerpt)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrLit {
    pub value: String,
    pub span: Span,
}

impl StrLit {
    /// Span of the `i`-th character inside the quotes.
    pub fn char_span(&self, i: usize) -> Span {
        let col = self.span.column + 1 + i;
        Span::new(self.span.line, col, self.span.offset, self.span.len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub letter: char,
    pub letter_span: Span,
    pub image: StrLit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionDecl {
    pub name: Ident,
    pub letters: Vec<(char, Span)>,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupExpr {
    Z2,
    Zn(u64),
    Sym(u64),
    CoverOf(Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorseDecl {
    pub name: Ident,
    pub group: GroupExpr,
    pub group_span: Span,
    pub prefix: Vec<StrLit>,
    /// Blocks after `repeat`; never empty.
    pub cycle: Vec<StrLit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsDecl {
    pub name: Ident,
    pub pattern: StrLit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VeechDecl {
    pub name: Ident,
    pub base: u64,
    pub base_span: Span,
    pub group: GroupExpr,
    pub group_span: Span,
    /// `Ψ(1), Ψ(2), ...` before the repeating part.
    pub psi_prefix: Option<StrLit>,
    pub psi_cycle: StrLit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub symbol: String,
    pub symbol_span: Span,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableExpr {
    Walsh(Vec<u64>),
    Indicator { block: StrLit, offset: u64 },
    Table(Vec<TableEntry>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableDecl {
    pub name: Ident,
    pub expr: ObservableExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightChoice {
    Moebius,
    Liouville,
    None,
}

impl WeightChoice {
    pub fn keyword(self) -> &'static str {
        match self {
            WeightChoice::Moebius => "moebius",
            WeightChoice::Liouville => "liouville",
            WeightChoice::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckpointSpec {
    Pow2,
    List(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentDecl {
    pub name: Ident,
    pub system: Ident,
    pub observable: Ident,
    pub weight: Option<WeightChoice>,
    pub n: u64,
    pub checkpoints: Option<CheckpointSpec>,
    pub kbsz: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Substitution(SubstitutionDecl),
    Morse(MorseDecl),
    Rs(RsDecl),
    Veech(VeechDecl),
    Observable(ObservableDecl),
    Experiment(ExperimentDecl),
}

impl Declaration {
    pub fn name(&self) -> &Ident {
        match self {
            Declaration::Substitution(d) => &d.name,
            Declaration::Morse(d) => &d.name,
            Declaration::Rs(d) => &d.name,
            Declaration::Veech(d) => &d.name,
            Declaration::Observable(d) => &d.name,
            Declaration::Experiment(d) => &d.name,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Declaration::Substitution(_) => "substitution",
            Declaration::Morse(_) => "morse",
            Declaration::Rs(_) => "rs",
            Declaration::Veech(_) => "veech",
            Declaration::Observable(_) => "observable",
            Declaration::Experiment(_) => "experiment",
        }
    }

    pub fn is_system(&self) -> bool {
        matches!(
            self,
            Declaration::Substitution(_) | Declaration::Morse(_) | Declaration::Rs(_) | Declaration::Veech(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecDocument {
    pub declarations: Vec<Declaration>,
}

impl SpecDocument {
    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name().text == name)
    }

    pub fn systems(&self) -> impl Iterator<Item = &Declaration> {
        self.declarations.iter().filter(|d| d.is_system())
    }

    pub fn experiments(&self) -> impl Iterator<Item = &ExperimentDecl> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::Experiment(e) => Some(e),
            _ => None,
        })
    }
}
