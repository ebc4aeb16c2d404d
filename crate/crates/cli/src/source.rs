//! Turning `--spec` and `--amalgamate` arguments into factors and amalgams.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use freeprod::free_fusion::PointedSpec;
use freeprod::fusion::{AnySpec, SpecDocument};
use freeprod::rep_groups::{builtin_category, category_from_files, ConcreteCategory};
use freeprod::tlj::{pointed_tlj, tlj_spec, TljParams};
use freeprod::words::Amalgam;
use freeprod::{ExactAmalgam, ExactSpec, FloatAmalgam, FloatSpec, Scalar, ZeroCell};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Factor {
    Table(AnySpec),
    Tlj(FloatSpec),
    Pointed(PointedSpec<f64>),
    Concrete(Arc<ConcreteCategory>),
}

/// One `--spec` argument together with what it resolved to.
#[derive(Debug, Clone)]
pub struct Source {
    pub text: String,
    pub factor: Factor,
}

impl Source {
    pub fn exact_spec(&self) -> Option<ExactSpec> {
        match &self.factor {
            Factor::Table(AnySpec::Exact(s)) => Some(s.clone()),
            Factor::Concrete(c) => Some(c.spec().clone()),
            _ => None,
        }
    }

    pub fn float_spec(&self) -> FloatSpec {
        match &self.factor {
            Factor::Table(s) => s.to_float(),
            Factor::Tlj(s) => s.clone(),
            Factor::Pointed(p) => p.ambient.clone(),
            Factor::Concrete(c) => c.spec().convert(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.factor {
            Factor::Concrete(c) => format!("Rep({})", c.group().name()),
            _ => self.float_spec().describe(),
        }
    }

    fn with_tolerance(mut self, tol: f64) -> Self {
        match &mut self.factor {
            Factor::Table(AnySpec::Float(s)) | Factor::Tlj(s) => *s = s.clone().with_tolerance(tol),
            Factor::Pointed(p) => p.ambient = p.ambient.clone().with_tolerance(tol),
            _ => {}
        }
        self
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn delta(name: &str, arg: &str) -> Result<f64, CliError> {
    arg.trim()
        .parse::<f64>()
        .or_else(|_| f64::parse_scalar(arg).ok_or(()))
        .map_err(|_| CliError::Usage(format!("{name}: cannot read delta `{arg}`")))
}

/// Resolves `tlj(δ)`, `pointed-tlj(δ)`, `rep(NAME)`, `rep(group.json, reps.json)`,
/// a built-in group name or a spec document path.
pub fn load(text: &str, tolerance: Option<f64>) -> Result<Source, CliError> {
    let call = text.strip_suffix(')').and_then(|t| t.split_once('('));
    let factor = match call {
        Some(("tlj", arg)) => Factor::Tlj(tlj_spec(&TljParams::new(delta("tlj", arg)?)?)?),
        Some(("pointed-tlj", arg)) => Factor::Pointed(pointed_tlj(&TljParams::new(delta("pointed-tlj", arg)?)?)?),
        Some(("rep", arg)) => match arg.split_once(',') {
            Some((group, reps)) => {
                Factor::Concrete(Arc::new(category_from_files(&read(group.trim())?, &read(reps.trim())?)?))
            }
            None => Factor::Concrete(Arc::new(builtin_category(arg.trim())?)),
        },
        Some((name, _)) => return Err(CliError::Usage(format!("unknown spec source `{name}(...)`"))),
        None if Path::new(text).is_file() => {
            Factor::Table(AnySpec::from_document(&SpecDocument::from_json(&read(text)?)?)?)
        }
        None => match builtin_category(text) {
            Ok(cat) => Factor::Concrete(Arc::new(cat)),
            Err(_) => {
                return Err(CliError::Usage(format!("`{text}` is neither a readable file nor a built-in group")))
            }
        },
    };
    let source = Source { text: text.to_string(), factor };
    Ok(match tolerance {
        Some(t) => source.with_tolerance(t),
        None => source,
    })
}

/// A parsed `--amalgamate S:cell@i=cell@j` argument (1-based factor indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glue {
    pub label: String,
    pub images: Vec<(String, usize)>,
}

impl Glue {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot read --amalgamate `{text}`; expected S:cell@i=cell@j"));
        let (label, rest) = text.split_once(':').ok_or_else(bad)?;
        let images = rest
            .split('=')
            .map(|part| {
                let (cell, i) = part.trim().rsplit_once('@').ok_or_else(bad)?;
                let i: usize = i.parse().map_err(|_| bad())?;
                Ok((cell.to_string(), i))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        if label.is_empty() || images.len() < 2 {
            return Err(bad());
        }
        Ok(Glue { label: label.to_string(), images })
    }

    /// One image per factor, in factor order.
    fn cells(&self, n: usize) -> Result<Vec<ZeroCell>, CliError> {
        let mut out: Vec<Option<ZeroCell>> = vec![None; n];
        for (cell, i) in &self.images {
            let slot = i
                .checked_sub(1)
                .and_then(|k| out.get_mut(k))
                .ok_or_else(|| CliError::Usage(format!("--amalgamate {}: no factor {i}", self.label)))?;
            if slot.replace(ZeroCell::new(cell)).is_some() {
                return Err(CliError::Usage(format!("--amalgamate {}: factor {i} named twice", self.label)));
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(k, c)| {
                c.ok_or_else(|| CliError::Usage(format!("--amalgamate {}: factor {} has no image", self.label, k + 1)))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum Built {
    Exact(ExactAmalgam),
    Float(FloatAmalgam),
}

fn assemble<S: Scalar>(factors: Vec<freeprod::CategorySpec<S>>, glue: &[Glue]) -> Result<Amalgam<S>, CliError> {
    if glue.is_empty() {
        return Ok(if factors.iter().all(|f| f.zero_cells().len() == 1) {
            Amalgam::over_single_cell(factors)?
        } else {
            Amalgam::disjoint(factors)?
        });
    }
    let mut shared = BTreeMap::new();
    for g in glue {
        if shared.insert(g.label.clone(), g.cells(factors.len())?).is_some() {
            return Err(CliError::Usage(format!("--amalgamate label `{}` used twice", g.label)));
        }
    }
    Ok(Amalgam::new(factors, shared)?)
}

/// Exact arithmetic when every factor is exact, doubles otherwise.
pub fn build(sources: &[Source], glue: &[Glue]) -> Result<Built, CliError> {
    if sources.is_empty() {
        return Err(CliError::Usage("no --spec given".into()));
    }
    let exact: Option<Vec<ExactSpec>> = sources.iter().map(Source::exact_spec).collect();
    Ok(match exact {
        Some(specs) => Built::Exact(assemble(specs, glue)?),
        None => Built::Float(assemble(sources.iter().map(Source::float_spec).collect(), glue)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glue_parsing() {
        let g = Glue::parse("*:b@1=a@2").unwrap();
        assert_eq!(g.label, "*");
        assert_eq!(g.images, vec![("b".to_string(), 1), ("a".to_string(), 2)]);
        assert_eq!(g.cells(2).unwrap(), vec![ZeroCell::new("b"), ZeroCell::new("a")]);
        assert!(g.cells(3).is_err());
        assert!(Glue::parse("b@1=a@2").is_err());
        assert!(Glue::parse("S:b@1").is_err());
        assert!(Glue::parse("S:b@x=a@2").is_err());
        assert!(Glue::parse("S:b@1=a@1").unwrap().cells(2).is_err());
    }

    #[test]
    fn sources_resolve() {
        assert!(matches!(load("tlj(2.5)", None).unwrap().factor, Factor::Tlj(_)));
        assert!(matches!(load("pointed-tlj(3)", None).unwrap().factor, Factor::Pointed(_)));
        assert!(matches!(load("rep(S3)", None).unwrap().factor, Factor::Concrete(_)));
        assert!(matches!(load("Z2", None).unwrap().factor, Factor::Concrete(_)));
        assert!(matches!(load("tlj(1.5)", None), Err(CliError::Core(freeprod::Error::Parameter(_)))));
        assert!(matches!(load("tlj(x)", None), Err(CliError::Usage(_))));
        assert!(matches!(load("nope(1)", None), Err(CliError::Usage(_))));
        assert!(matches!(load("/no/such/file.json", None), Err(CliError::Usage(_))));
    }

    #[test]
    fn exactness_follows_the_factors() {
        let exact = [load("Z2", None).unwrap(), load("S3", None).unwrap()];
        assert!(matches!(build(&exact, &[]).unwrap(), Built::Exact(_)));
        let mixed = [load("Z2", None).unwrap(), load("tlj(2.5)", None).unwrap()];
        assert!(matches!(build(&mixed, &[]).unwrap(), Built::Float(_)));
        assert!(matches!(build(&[], &[]), Err(CliError::Usage(_))));
    }
}
