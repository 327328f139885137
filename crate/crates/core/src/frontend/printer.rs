//! Canonical text for documents; `parse_spec(print_spec(d)) == d`.

use std::fmt::Write as _;

use super::*;

fn symbol(c: char) -> String {
    if c.is_alphabetic() || c == '_' || c.is_ascii_digit() {
        c.to_string()
    } else {
        format!("\"{c}\"")
    }
}

fn quoted(s: &StrLit) -> String {
    format!("\"{}\"", s.value)
}

fn group(g: &GroupExpr) -> String {
    match g {
        GroupExpr::Z2 => "Z2".into(),
        GroupExpr::Zn(k) => format!("Zn({k})"),
        GroupExpr::Sym(r) => format!("Sym({r})"),
        GroupExpr::CoverOf(name) => format!("cover-of {}", name.text),
    }
}

pub fn print_declaration(d: &Declaration) -> String {
    let mut out = String::new();
    match d {
        Declaration::Substitution(s) => {
            let letters: Vec<String> = s.letters.iter().map(|&(c, _)| symbol(c)).collect();
            let _ = writeln!(out, "substitution {} on {{{}}} {{", s.name.text, letters.join(", "));
            let rules: Vec<String> = s
                .rules
                .iter()
                .map(|r| format!("  {} -> {}", symbol(r.letter), quoted(&r.image)))
                .collect();
            let _ = writeln!(out, "{}", rules.join(";\n"));
            out.push('}');
        }
        Declaration::Morse(m) => {
            let mut items: Vec<String> = m.prefix.iter().map(quoted).collect();
            for (i, b) in m.cycle.iter().enumerate() {
                items.push(if i == 0 { format!("repeat {}", quoted(b)) } else { quoted(b) });
            }
            let _ = write!(out, "morse {} over {} blocks [{}]", m.name.text, group(&m.group), items.join(", "));
        }
        Declaration::Rs(r) => {
            let _ = write!(out, "rs {} pattern {}", r.name.text, quoted(&r.pattern));
        }
        Declaration::Veech(v) => {
            let _ = write!(out, "veech {} base {} group {} psi ", v.name.text, v.base, group(&v.group));
            if let Some(p) = &v.psi_prefix {
                let _ = write!(out, "{} ", quoted(p));
            }
            let _ = write!(out, "repeat {}", quoted(&v.psi_cycle));
        }
        Declaration::Observable(o) => {
            let _ = write!(out, "observable {} = {}", o.name.text, observable_expr(&o.expr));
        }
        Declaration::Experiment(e) => {
            let mut fields = vec![
                format!("system: {}", e.system.text),
                format!("observable: {}", e.observable.text),
            ];
            if let Some(w) = e.weight {
                fields.push(format!("weight: {}", w.keyword()));
            }
            fields.push(format!("N: {}", e.n));
            match &e.checkpoints {
                Some(CheckpointSpec::Pow2) => fields.push("checkpoints: pow2".into()),
                Some(CheckpointSpec::List(l)) => fields.push(format!(
                    "checkpoints: [{}]",
                    l.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
                )),
                None => {}
            }
            if let Some((r, s)) = e.kbsz {
                fields.push(format!("kbsz: ({r}, {s})"));
            }
            let _ = write!(out, "experiment {} {{\n  {}\n}}", e.name.text, fields.join(";\n  "));
        }
    }
    out
}

pub fn observable_expr(expr: &ObservableExpr) -> String {
    match expr {
        ObservableExpr::Walsh(offsets) => format!(
            "walsh {{{}}}",
            offsets.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        ),
        ObservableExpr::Indicator { block, offset } => format!("indicator {} at {offset}", quoted(block)),
        ObservableExpr::Table(entries) => {
            let items: Vec<String> = entries
                .iter()
                .map(|e| {
                    let c = e.symbol.chars().next().unwrap_or('?');
                    if e.im == 0.0 {
                        format!("{}: {}", symbol(c), e.re)
                    } else {
                        format!("{}: ({}, {})", symbol(c), e.re, e.im)
                    }
                })
                .collect();
            format!("table {{ {} }}", items.join(", "))
        }
    }
}

pub fn print_spec(doc: &SpecDocument) -> String {
    let mut out = String::new();
    for d in &doc.declarations {
        out.push_str(&print_declaration(d));
        out.push('\n');
    }
    out
}
