//! Machine-readable result documents and their human renderings.
//!
//! Every document is pretty-printed JSON; parsing one back into its type and
//! re-emitting it reproduces the same bytes.

use std::fmt::Write;

use freeprod::free_fusion::Nondegeneracy;
use freeprod::fusion::{SpecDocument, ValidationReport};
use freeprod::realization::VerificationReport;
use serde::{Deserialize, Serialize};

pub fn to_machine<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("output documents always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorValidation {
    pub source: String,
    pub description: String,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateOutput {
    pub factors: Vec<FactorValidation>,
    /// Glued 0-cells of the amalgam, when more than one factor was given.
    pub cells: Vec<String>,
    pub clean: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub word: String,
    pub mult: u64,
    pub qdim: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOutput {
    pub word: String,
    pub source: String,
    pub target: String,
    pub max_len: usize,
    pub irr_depth: usize,
    pub terms: Vec<Term>,
    /// Σ mult · qdim over the terms.
    pub total_qdim: String,
    /// Product of the letter dimensions of the input word.
    pub word_qdim: String,
    pub conserved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomDimOutput {
    pub left: String,
    pub right: String,
    pub hom_dim: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrreducibleInfo {
    pub word: String,
    pub source: String,
    pub target: String,
    pub dual: String,
    pub qdim: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrreduciblesOutput {
    pub max_len: usize,
    pub irr_depth: usize,
    pub irreducibles: Vec<IrreducibleInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDimsOutput {
    pub pointed: String,
    pub point_qdim: String,
    pub dims: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeComposeOutput {
    pub a: String,
    pub b: String,
    pub point: Vec<Term>,
    pub point_qdim: String,
    pub nondegeneracy: Nondegeneracy,
}

/// What a command produced, before formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Validate(ValidateOutput),
    Decompose(DecomposeOutput),
    HomDim(HomDimOutput),
    Irreducibles(IrreduciblesOutput),
    BoxDims(BoxDimsOutput),
    FreeProduct(SpecDocument),
    FreeCompose(FreeComposeOutput),
    Verify(VerificationReport),
}

impl Output {
    /// Whether the result records a mathematical violation (exit status 1).
    pub fn is_violation(&self) -> bool {
        match self {
            Output::Validate(v) => !v.clean,
            Output::Decompose(d) => !d.conserved,
            Output::FreeCompose(c) => !c.nondegeneracy.holds(),
            Output::Verify(r) => !r.all_pass(),
            _ => false,
        }
    }

    pub fn machine(&self) -> String {
        match self {
            Output::Validate(x) => to_machine(x),
            Output::Decompose(x) => to_machine(x),
            Output::HomDim(x) => to_machine(x),
            Output::Irreducibles(x) => to_machine(x),
            Output::BoxDims(x) => to_machine(x),
            Output::FreeProduct(x) => x.to_json(),
            Output::FreeCompose(x) => to_machine(x),
            Output::Verify(x) => x.to_json(),
        }
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Validate(v) => {
                for (k, f) in v.factors.iter().enumerate() {
                    let status = if f.report.is_clean() {
                        "clean".to_string()
                    } else {
                        format!("{} violation(s)", f.report.violations.len())
                    };
                    writeln!(s, "factor {} `{}` ({}): {status}, {} checked", k + 1, f.source, f.description, f.report.explored)
                        .unwrap();
                    for violation in &f.report.violations {
                        writeln!(s, "  {violation}").unwrap();
                    }
                }
                if !v.cells.is_empty() {
                    writeln!(s, "0-cells after gluing: {}", v.cells.join(", ")).unwrap();
                }
                writeln!(s, "{}", if v.clean { "valid" } else { "INVALID" }).unwrap();
            }
            Output::Decompose(d) => {
                for t in &d.terms {
                    writeln!(s, "{} : {}    qdim {}", t.word, t.mult, t.qdim).unwrap();
                }
                let rel = if d.conserved { "=" } else { "!=" };
                writeln!(s, "qdim: sum of mult*qdim = {} {rel} {} = d({})", d.total_qdim, d.word_qdim, d.word).unwrap();
            }
            Output::HomDim(h) => {
                writeln!(s, "dim Hom({}, {}) = {}", h.left, h.right, h.hom_dim).unwrap();
            }
            Output::Irreducibles(x) => {
                let width = x.irreducibles.iter().map(|i| i.word.chars().count()).max().unwrap_or(0);
                for i in &x.irreducibles {
                    writeln!(s, "{:width$}  {} -> {}  dual {}  qdim {}", i.word, i.source, i.target, i.dual, i.qdim)
                        .unwrap();
                }
                writeln!(s, "{} irreducibles (max-len {}, irr-depth {})", x.irreducibles.len(), x.max_len, x.irr_depth)
                    .unwrap();
            }
            Output::BoxDims(b) => {
                writeln!(s, "{} (point qdim {})", b.pointed, b.point_qdim).unwrap();
                writeln!(s, "n  dim").unwrap();
                for (n, d) in b.dims.iter().enumerate() {
                    writeln!(s, "{n}  {d}").unwrap();
                }
            }
            Output::FreeProduct(doc) => {
                writeln!(s, "0-cells: {}", doc.zero_cells.join(", ")).unwrap();
                for e in &doc.irreducibles {
                    writeln!(s, "{}  {} -> {}  dual {}  qdim {}", e.label, e.source, e.target, e.dual, qdim_text(&e.qdim))
                        .unwrap();
                }
                writeln!(s, "{} irreducibles, {} fusion rows", doc.irreducibles.len(), doc.fusion.len()).unwrap();
            }
            Output::FreeCompose(c) => {
                let point: Vec<String> = c.point.iter().map(|t| format!("{} x{}", t.word, t.mult)).collect();
                writeln!(s, "point {} -> {}: {}", c.a, c.b, point.join(" + ")).unwrap();
                writeln!(s, "point qdim: {}", c.point_qdim).unwrap();
                let n = &c.nondegeneracy;
                if n.holds() {
                    writeln!(s, "nondegenerate up to depth {} ({} irreducibles reached)", n.depth, n.checked).unwrap();
                } else {
                    writeln!(s, "DEGENERATE at depth {}: missing {}", n.depth, n.missing.join(", ")).unwrap();
                }
            }
            Output::Verify(r) => {
                writeln!(s, "factors {} at depth {} (seed {})", r.factors.join(" * "), r.depth, r.seed).unwrap();
                writeln!(s, "{:<26} {:>9} {:>8}  max deviation", "tag", "instances", "failures").unwrap();
                for t in r.summary() {
                    let dev = t.max_deviation.map_or("error".to_string(), |d| format!("{d:.3e}"));
                    writeln!(s, "{:<26} {:>9} {:>8}  {dev}", t.tag, t.instances, t.failures).unwrap();
                }
                let failures: Vec<_> = r.failures().collect();
                for f in &failures {
                    let what = match (&f.error, f.max_deviation) {
                        (Some(e), _) => format!("error: {e}"),
                        (None, Some(d)) => format!("deviation {d:.3e} > {:.1e}", f.tolerance),
                        (None, None) => "failed".into(),
                    };
                    writeln!(s, "FAIL {} [{}]: {what}", f.tag, f.instance).unwrap();
                }
                if failures.is_empty() {
                    writeln!(s, "all {} checks pass", r.checks.len()).unwrap();
                } else {
                    writeln!(s, "{} of {} checks failed", failures.len(), r.checks.len()).unwrap();
                }
            }
        }
        s
    }
}

fn qdim_text(q: &freeprod::fusion::QdimValue) -> String {
    match q {
        freeprod::fusion::QdimValue::Number(n) => n.to_string(),
        freeprod::fusion::QdimValue::Text(t) => t.clone(),
    }
}
