//! From declarations to runnable objects.

use std::sync::Arc;

use num_complex::Complex64;

use super::*;
use crate::arith::{DigitPattern, PatternParitySource, WeightKind};
use crate::error::{invalid, Error, Result};
use crate::experiment::{ExperimentConfig, Mode};
use crate::morse::MorseSpec;
use crate::odometer::{OdometerSpec, VeechSpec};
use crate::permgrp::FiniteGroup;
use crate::seq::EventuallyPeriodic;
use crate::spectral::{make_block_indicator, make_symbol_table, make_walsh, Observable};
use crate::stream::SymbolSource;
use crate::subst::{group_cover, Substitution};

/// Systems every command can use without a file.
const BUILTINS: &str = r#"
substitution thue-morse on {0, 1} { 0 -> "01"; 1 -> "10" }
substitution herning on {a, b, c} { a -> "aabaa"; b -> "bcabb"; c -> "cbccc" }
substitution rudin-shapiro on {a, b, c, d} { a -> "ab"; b -> "ac"; c -> "db"; d -> "dc" }
substitution period-doubling on {1, 0} { 1 -> "10"; 0 -> "11" }
morse thue-morse-z2 over Z2 blocks [repeat "01"]
rs rs-11 pattern "11"
veech veech-pd base 2 group Z2 psi repeat "10"
"#;

pub fn builtin_document() -> SpecDocument {
    parse_spec(BUILTINS).expect("built-in declarations parse")
}

/// A resolved symbolic system.
#[derive(Debug, Clone)]
pub enum System {
    Substitution(Substitution),
    Morse(MorseSpec),
    Rs(PatternParitySource),
    Veech(VeechSpec),
}

fn group_of(g: &GroupExpr, doc: &SpecDocument) -> Result<FiniteGroup> {
    match g {
        GroupExpr::Z2 => FiniteGroup::cyclic(2),
        GroupExpr::Zn(k) => FiniteGroup::cyclic(*k as usize),
        GroupExpr::Sym(r) => Ok(FiniteGroup::symmetric(*r as usize)?.0),
        GroupExpr::CoverOf(name) => match System::build(doc, &name.text)? {
            System::Substitution(s) => Ok(group_cover(&s)?.0.group),
            _ => invalid(format!("'{}' is not a substitution", name.text)),
        },
    }
}

fn elements(lit: &StrLit) -> Vec<usize> {
    lit.value.chars().map(|c| c.to_digit(36).unwrap_or(u32::MAX) as usize).collect()
}

impl System {
    pub fn build(doc: &SpecDocument, name: &str) -> Result<Self> {
        let decl = doc.get(name).ok_or_else(|| Error::InvalidArgument(format!("no system named '{name}'")))?;
        match decl {
            Declaration::Substitution(s) => {
                let letters: Vec<char> = s.letters.iter().map(|l| l.0).collect();
                let mut rows = vec![Vec::new(); letters.len()];
                for r in &s.rules {
                    let a = letters.iter().position(|&l| l == r.letter).expect("validated letter");
                    rows[a] = r
                        .image
                        .value
                        .chars()
                        .map(|c| letters.iter().position(|&l| l == c).expect("validated letter"))
                        .collect();
                }
                Ok(System::Substitution(Substitution::new(letters, rows, 0)?))
            }
            Declaration::Morse(m) => {
                let group = group_of(&m.group, doc)?;
                let blocks = EventuallyPeriodic::new(
                    m.prefix.iter().map(elements).collect(),
                    m.cycle.iter().map(elements).collect(),
                )?;
                Ok(System::Morse(MorseSpec::new(group, blocks)?))
            }
            Declaration::Rs(r) => Ok(System::Rs(PatternParitySource::new(r.pattern.value.parse::<DigitPattern>()?))),
            Declaration::Veech(v) => {
                let group = group_of(&v.group, doc)?;
                let psi = EventuallyPeriodic::new(
                    v.psi_prefix.as_ref().map(elements).unwrap_or_default(),
                    elements(&v.psi_cycle),
                )?;
                Ok(System::Veech(VeechSpec::new(OdometerSpec::constant(v.base as usize)?, group, psi)?))
            }
            other => invalid(format!("'{name}' is a {}, not a system", other.keyword())),
        }
    }

    pub fn source(&self) -> Result<Arc<dyn SymbolSource>> {
        Ok(match self {
            System::Substitution(s) => Arc::new(s.fixed_point_source()?),
            System::Morse(m) => Arc::new(m.clone()),
            System::Rs(r) => Arc::new(r.clone()),
            System::Veech(v) => Arc::new(v.stream(&v.odometer.point(0))?),
        })
    }

    /// The display character of each symbol.
    pub fn symbol_chars(&self) -> Vec<char> {
        match self {
            System::Substitution(s) => s.letters().to_vec(),
            _ => {
                let n = self.alphabet_size();
                (0..n as u32).map(|i| std::char::from_digit(i % 36, 36).unwrap()).collect()
            }
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            System::Substitution(s) => s.alphabet_size(),
            System::Morse(m) => m.group().order(),
            System::Rs(_) => 2,
            System::Veech(v) => v.group.order(),
        }
    }

    pub fn render(&self, word: &[usize]) -> String {
        let chars = self.symbol_chars();
        word.iter().map(|&s| chars.get(s).copied().unwrap_or('?')).collect()
    }

    /// The group in which `hat` is taken, if the symbols are group elements.
    /// Two-letter substitutions are read as `Z/2`.
    pub fn hat_group(&self) -> Option<FiniteGroup> {
        match self {
            System::Substitution(s) if s.alphabet_size() == 2 => FiniteGroup::cyclic(2).ok(),
            System::Substitution(_) => None,
            System::Morse(m) => Some(m.group().clone()),
            System::Rs(_) => FiniteGroup::cyclic(2).ok(),
            System::Veech(v) => Some(v.group.clone()),
        }
    }

    /// Build an observable for this system's alphabet.
    pub fn observable(&self, expr: &ObservableExpr) -> Result<Observable> {
        let obs = match expr {
            ObservableExpr::Walsh(offsets) => make_walsh(&offsets.iter().map(|&o| o as usize).collect::<Vec<_>>()),
            ObservableExpr::Indicator { block, offset } => {
                make_block_indicator(&resolve_symbols(self, &block.value)?, *offset as usize)?
            }
            ObservableExpr::Table(entries) => {
                let mut values = vec![None; self.alphabet_size()];
                for e in entries {
                    let s = resolve_symbols(self, &e.symbol)?[0];
                    values[s] = Some(Complex64::new(e.re, e.im));
                }
                make_symbol_table(&values, self.alphabet_size())?
            }
        };
        obs.check_alphabet(self.alphabet_size())?;
        Ok(obs)
    }
}

/// Map display characters to symbol indices.
pub fn resolve_symbols(system: &System, word: &str) -> Result<Vec<usize>> {
    let chars = system.symbol_chars();
    word.chars()
        .map(|c| {
            chars
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| Error::InvalidArgument(format!("'{c}' is not a symbol of this system")))
        })
        .collect()
}

impl ExperimentDecl {
    /// Resolve references and build the runnable configuration.
    pub fn build(&self, doc: &SpecDocument) -> Result<ExperimentConfig> {
        let system = System::build(doc, &self.system.text)?;
        let Some(Declaration::Observable(o)) = doc.get(&self.observable.text) else {
            return invalid(format!("no observable named '{}'", self.observable.text));
        };
        let observable = system.observable(&o.expr)?;
        let mode = match (self.kbsz, self.weight) {
            (Some((r, s)), _) => Mode::Kbsz { r: r as usize, s: s as usize },
            (None, Some(WeightChoice::Moebius)) => Mode::Sarnak(Some(WeightKind::Moebius)),
            (None, Some(WeightChoice::Liouville)) => Mode::Sarnak(Some(WeightKind::Liouville)),
            (None, _) => Mode::Sarnak(None),
        };
        let checkpoints = match &self.checkpoints {
            Some(CheckpointSpec::List(l)) => Some(l.iter().map(|&m| m as usize).collect()),
            _ => None,
        };
        let config = ExperimentConfig {
            name: self.name.text.clone(),
            system_name: self.system.text.clone(),
            observable_name: self.observable.text.clone(),
            source: system.source()?,
            observable,
            mode,
            sample_size: self.n as usize,
            checkpoints,
        };
        config.validate()?;
        Ok(config)
    }
}
