//! Command-line front end for the `freeprod` library.

pub mod output;
pub mod source;

use clap::{Parser, Subcommand, ValueEnum};
use freeprod::free_fusion::{
    box_dims, decompose_word, free_compose, free_product_spec, hom_dim_words, nondegenerate, word_qdim, Bound,
    PointedSpec,
};
use freeprod::realization::{verify_suite, ConcreteAmalgam, VerifyOptions};
use freeprod::words::Amalgam;
use freeprod::{Bundle, Scalar, ZeroCell};
use thiserror::Error;

use output::{
    BoxDimsOutput, DecomposeOutput, FactorValidation, FreeComposeOutput, HomDimOutput, IrreducibleInfo,
    IrreduciblesOutput, Output, Term, ValidateOutput,
};
use source::{Built, Factor, Glue, Source};

const DEFAULT_MAX_LEN: usize = 3;
const DEFAULT_IRR_DEPTH: usize = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] freeprod::Error),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for mathematical failures, 2 for usage and input problems.
    pub fn exit_code(&self) -> u8 {
        use freeprod::Error::*;
        match self {
            CliError::Core(Validation(_) | NonExtendable(_) | Layout(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "freeprod", version, about = "Fusion rules and numerical realizations of free products")]
pub struct Cli {
    /// Factor: spec file, Z1..Z6, S3, rep(NAME), rep(group.json,reps.json), tlj(δ) or pointed-tlj(δ).
    #[arg(long = "spec", global = true)]
    pub specs: Vec<String>,
    /// Glue 0-cells across factors: S:cell@i=cell@j (1-based factor indices).
    #[arg(long, global = true)]
    pub amalgamate: Vec<String>,
    /// Maximum reduced-word length (verification: instance depth).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_len: Option<u64>,
    /// Window depth for factors with infinitely many irreducibles.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub irr_depth: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Comparison tolerance for floating-point specs and verification.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed for sampled checks in `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the fusion axioms of every factor.
    Validate,
    /// Decompose a word such as [std@1][g@2][std@1] into reduced words.
    Decompose { word: String },
    /// Dimension of the 2-cell space between two words.
    HomDim { left: String, right: String },
    /// List reduced words between two 0-cells.
    Irreducibles {
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Box-space dimensions of one pointed spec, or of the free composition of two.
    BoxDims { n_max: usize },
    /// Snapshot of the free product as a spec document.
    FreeProduct,
    /// Free composition of two pointed specs.
    FreeCompose,
    /// Run the realization checks over group factors.
    Verify,
}

macro_rules! with_amalgam {
    ($built:expr, $am:ident => $body:expr) => {
        match $built {
            Built::Exact($am) => $body,
            Built::Float($am) => $body,
        }
    };
}

fn size(x: Option<u64>, default: usize) -> usize {
    x.map_or(default, |v| v as usize)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("--tolerance must be positive, got {t}")));
        }
    }
    let sources = cli.specs.iter().map(|s| source::load(s, cli.tolerance)).collect::<Result<Vec<_>, _>>()?;
    let glue = cli.amalgamate.iter().map(|g| Glue::parse(g)).collect::<Result<Vec<_>, _>>()?;
    let max_len = size(cli.max_len, DEFAULT_MAX_LEN);
    let irr_depth = size(cli.irr_depth, DEFAULT_IRR_DEPTH);
    Ok(match &cli.command {
        Command::Validate => Output::Validate(validate(&sources, &glue, irr_depth)?),
        Command::Decompose { word } => {
            with_amalgam!(source::build(&sources, &glue)?, am => Output::Decompose(decompose(&am, word, cli)?))
        }
        Command::HomDim { left, right } => with_amalgam!(source::build(&sources, &glue)?, am => {
            let hom_dim = hom_dim_words(&am, &am.parse_word(left)?, &am.parse_word(right)?)?;
            Output::HomDim(HomDimOutput { left: left.clone(), right: right.clone(), hom_dim })
        }),
        Command::Irreducibles { from, to } => with_amalgam!(source::build(&sources, &glue)?, am => {
            Output::Irreducibles(irreducibles(&am, from.as_deref(), to.as_deref(), max_len, irr_depth)?)
        }),
        Command::BoxDims { n_max } => {
            let (name, p) = pointed(&sources, "box-dims")?;
            let dims = box_dims(&p, *n_max)?;
            Output::BoxDims(BoxDimsOutput { pointed: name, point_qdim: p.point_qdim()?.render(), dims })
        }
        Command::FreeProduct => with_amalgam!(source::build(&sources, &glue)?, am => {
            let spec = free_product_spec(&am, Bound::new(max_len, irr_depth));
            Output::FreeProduct(spec.to_document(max_len)?)
        }),
        Command::FreeCompose => {
            if sources.len() != 2 {
                return Err(CliError::Usage("free-compose needs exactly two pointed sources".into()));
            }
            let (_, p) = pointed(&sources, "free-compose")?;
            Output::FreeCompose(FreeComposeOutput {
                a: p.a.to_string(),
                b: p.b.to_string(),
                point: terms(&p.ambient, &p.point)?,
                point_qdim: p.point_qdim()?.render(),
                nondegeneracy: nondegenerate(&p, irr_depth)?,
            })
        }
        Command::Verify => Output::Verify(verify(&sources, &glue, cli)?),
    })
}

fn validate(sources: &[Source], glue: &[Glue], depth: usize) -> Result<ValidateOutput, CliError> {
    if sources.is_empty() {
        return Err(CliError::Usage("no --spec given".into()));
    }
    let mut factors = Vec::new();
    for s in sources {
        let report = match s.exact_spec() {
            Some(spec) => spec.validate(depth)?,
            None => s.float_spec().validate(depth)?,
        };
        factors.push(FactorValidation { source: s.text.clone(), description: s.describe(), report });
    }
    let cells = if sources.len() > 1 {
        with_amalgam!(source::build(sources, glue)?, am => am.cells().iter().map(|c| c.to_string()).collect())
    } else {
        Vec::new()
    };
    let clean = factors.iter().all(|f| f.report.is_clean());
    Ok(ValidateOutput { factors, cells, clean })
}

fn decompose<S: Scalar>(am: &Amalgam<S>, text: &str, cli: &Cli) -> Result<DecomposeOutput, CliError> {
    let v = am.parse_word(text)?;
    // Without explicit bounds, pick ones that always hold every term.
    let depth_sum: usize = v.letters().iter().map(|l| am.factor(l.factor).depth_of(&l.irr)).sum();
    let bound = Bound::new(size(cli.max_len, v.len()), size(cli.irr_depth, depth_sum.max(1)));
    let dec = decompose_word(am, &v, bound)?;
    let terms = dec
        .terms
        .iter()
        .map(|(w, &mult)| Ok(Term { word: w.to_string(), mult, qdim: word_qdim(am, w)?.render() }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let (total, expected) = (dec.total_qdim(am)?, word_qdim(am, &v)?);
    let tol = am.factors().iter().map(|f| f.tolerance()).fold(0.0, f64::max);
    Ok(DecomposeOutput {
        word: v.to_string(),
        source: v.source().to_string(),
        target: v.target().to_string(),
        max_len: bound.max_len,
        irr_depth: bound.irr_depth,
        terms,
        conserved: total.approx_eq(&expected, tol),
        total_qdim: total.render(),
        word_qdim: expected.render(),
    })
}

fn cell<S: Scalar>(am: &Amalgam<S>, label: &str) -> Result<ZeroCell, CliError> {
    let c = ZeroCell::new(label);
    if am.has_cell(&c) {
        Ok(c)
    } else {
        let known: Vec<String> = am.cells().iter().map(|c| c.to_string()).collect();
        Err(CliError::Usage(format!("unknown 0-cell `{label}`; the amalgam has {}", known.join(", "))))
    }
}

fn irreducibles<S: Scalar>(
    am: &Amalgam<S>,
    from: Option<&str>,
    to: Option<&str>,
    max_len: usize,
    irr_depth: usize,
) -> Result<IrreduciblesOutput, CliError> {
    let pick = |c: Option<&str>| -> Result<Vec<ZeroCell>, CliError> {
        match c {
            Some(label) => Ok(vec![cell(am, label)?]),
            None => Ok(am.cells()),
        }
    };
    let mut out = Vec::new();
    for a in pick(from)? {
        for b in pick(to)? {
            for w in am.enumerate_reduced(&a, &b, max_len, irr_depth)? {
                out.push(IrreducibleInfo {
                    word: w.to_string(),
                    source: a.to_string(),
                    target: b.to_string(),
                    dual: am.dual_reduced(&w)?.to_string(),
                    qdim: word_qdim(am, &w)?.render(),
                });
            }
        }
    }
    Ok(IrreduciblesOutput { max_len, irr_depth, irreducibles: out })
}

/// One pointed source as is, or the free composition of two.
fn pointed(sources: &[Source], cmd: &str) -> Result<(String, PointedSpec<f64>), CliError> {
    let points: Vec<&PointedSpec<f64>> = sources
        .iter()
        .filter_map(|s| match &s.factor {
            Factor::Pointed(p) => Some(p),
            _ => None,
        })
        .collect();
    if points.len() != sources.len() || points.is_empty() || points.len() > 2 {
        return Err(CliError::Usage(format!(
            "{cmd} needs one or two pointed sources such as --spec 'pointed-tlj(2.5)'"
        )));
    }
    Ok(match points.as_slice() {
        [p] => (sources[0].text.clone(), (*p).clone()),
        [p, q] => (format!("free composition of {} and {}", sources[0].text, sources[1].text), free_compose(p, q)?),
        _ => unreachable!("checked above"),
    })
}

fn terms<S: Scalar>(spec: &freeprod::CategorySpec<S>, b: &Bundle) -> Result<Vec<Term>, CliError> {
    b.terms()
        .map(|(x, mult)| Ok(Term { word: x.label().to_string(), mult, qdim: spec.qdim(x)?.render() }))
        .collect()
}

fn verify(sources: &[Source], glue: &[Glue], cli: &Cli) -> Result<freeprod::realization::VerificationReport, CliError> {
    if sources.is_empty() {
        return Err(CliError::Usage("no --spec given".into()));
    }
    if !glue.is_empty() {
        return Err(CliError::Usage("verify glues the single 0-cells of its group factors; drop --amalgamate".into()));
    }
    let mut cats = Vec::new();
    for (k, s) in sources.iter().enumerate() {
        match &s.factor {
            Factor::Concrete(c) => cats.push(c.clone()),
            _ => {
                return Err(freeprod::Error::UnsupportedFactor(format!(
                    "factor {} `{}` has fusion rules only, no realization; verify needs finite-group factors \
                     (Z1..Z6, S3, rep(...)). Use validate, decompose, hom-dim, irreducibles, box-dims, \
                     free-product or free-compose for fusion-level questions",
                    k + 1,
                    s.text
                ))
                .into())
            }
        }
    }
    let ca = ConcreteAmalgam::new(cats)?;
    let mut opts = VerifyOptions { depth: size(cli.max_len, 3), seed: cli.seed, ..Default::default() };
    if let Some(t) = cli.tolerance {
        opts = opts.with_tolerance(t);
    }
    Ok(verify_suite(&ca, &opts))
}
