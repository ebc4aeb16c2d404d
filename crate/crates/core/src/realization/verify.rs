//! Batch verification of the realization: unitarity of the structure maps,
//! coherence diagrams, assembly relations and the laws of the universal
//! functor, each on every instance within a depth bound.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::assembly::{
    check_assembly_left_identity, check_assembly_orthogonality, check_assembly_right_identity,
    check_assembly_right_version,
};
use super::functor::CWrMorphism;
use super::{ConcreteAmalgam, GradedMap, GradedSpace, RLetter};
use crate::error::Result;
use crate::free_fusion::{hom_dim_words, mult_in_word};
use crate::linalg::{deviation, identity, kron, op_norm, rank, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Bound on the total number of letters in an instance.
    pub depth: usize,
    /// Tolerance for single maps (unitarity, assembly relations, functor laws).
    pub exact_tolerance: f64,
    /// Tolerance for composite diagrams, where errors accumulate.
    pub diagram_tolerance: f64,
    pub seed: u64,
    /// Number of random 2-cells per functor law.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { depth: 3, exact_tolerance: 1e-10, diagram_tolerance: 1e-8, seed: 0, samples: 4 }
    }
}

impl VerifyOptions {
    /// Same tolerance for every check.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.exact_tolerance = tol;
        self.diagram_tolerance = tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Human-readable statement of the identity.
    pub identity: String,
    /// Short stable name of the relation, shared by all its instances.
    pub tag: String,
    pub instance: String,
    /// Largest absolute entry difference; `None` if the check errored.
    pub max_deviation: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Aggregate over the instances of one tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagSummary {
    pub tag: String,
    pub identity: String,
    pub instances: usize,
    pub failures: usize,
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub factors: Vec<String>,
    pub depth: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn with_tag<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a CheckResult> {
        self.checks.iter().filter(move |c| c.tag == tag)
    }

    /// One entry per tag, in order of first appearance.
    pub fn summary(&self) -> Vec<TagSummary> {
        let mut order: Vec<String> = Vec::new();
        let mut acc: BTreeMap<String, TagSummary> = BTreeMap::new();
        for c in &self.checks {
            let e = acc.entry(c.tag.clone()).or_insert_with(|| {
                order.push(c.tag.clone());
                TagSummary {
                    tag: c.tag.clone(),
                    identity: c.identity.clone(),
                    instances: 0,
                    failures: 0,
                    max_deviation: Some(0.0),
                }
            });
            e.instances += 1;
            if !c.pass {
                e.failures += 1;
            }
            e.max_deviation = match (e.max_deviation, c.max_deviation) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
        order.into_iter().map(|t| acc.remove(&t).expect("present")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Parse(e.to_string()))
    }
}

struct Runner<'a> {
    ca: &'a ConcreteAmalgam,
    checks: Vec<CheckResult>,
}

impl Runner<'_> {
    fn record(&mut self, tag: &str, identity: &str, instance: String, tol: f64, f: impl FnOnce() -> Result<f64>) {
        let (max_deviation, error) = match f() {
            Ok(d) if d.is_finite() => (Some(d), None),
            Ok(_) => (None, Some("shape mismatch".to_string())),
            Err(e) => (None, Some(e.to_string())),
        };
        let pass = max_deviation.is_some_and(|d| d <= tol);
        self.checks.push(CheckResult {
            identity: identity.to_string(),
            tag: tag.to_string(),
            instance,
            max_deviation,
            tolerance: tol,
            pass,
            error,
        });
    }

    fn word(&self, v: &[RLetter]) -> String {
        self.ca.word_of(v).to_string()
    }

    fn obj(&self, i: usize, x: &[usize]) -> String {
        if x.is_empty() {
            return "ε".to_string();
        }
        x.iter().map(|&k| self.ca.cat(i).irr(k).to_string()).collect::<Vec<_>>().join("⊗")
    }
}

/// Non-unit letters of every factor.
fn letters(ca: &ConcreteAmalgam) -> Vec<RLetter> {
    (0..ca.num_factors())
        .flat_map(|i| {
            let u = ca.cat(i).unit_index();
            (0..ca.cat(i).len()).filter(move |&k| k != u).map(move |k| (i, k))
        })
        .collect()
}

/// All general words in the non-unit letters with at most `n` letters.
fn words_upto(ca: &ConcreteAmalgam, n: usize) -> Vec<Vec<RLetter>> {
    let ls = letters(ca);
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let next: Vec<Vec<RLetter>> = layer
            .iter()
            .flat_map(|w: &Vec<RLetter>| {
                ls.iter().map(move |&l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn factor_letters(ca: &ConcreteAmalgam, i: usize) -> Vec<usize> {
    let u = ca.cat(i).unit_index();
    (0..ca.cat(i).len()).filter(|&k| k != u).collect()
}

fn vacuum_space(ca: &ConcreteAmalgam, v: &[RLetter]) -> Result<GradedSpace> {
    Ok(ca.word_action(v, &ca.star())?.space().clone())
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_combination(ca: &ConcreteAmalgam, basis: &[CWrMorphism], rng: &mut ChaCha8Rng) -> Result<CWrMorphism> {
    let first = &basis[0];
    let mut star = GradedMap::zero(first.star.domain().clone(), first.star.codomain().clone());
    for b in basis {
        star = star.add(&b.star.scale(random_c64(rng)))?;
    }
    CWrMorphism::new(ca, first.source.clone(), first.target.clone(), star)
}

fn count_deviation(a: usize, b: usize) -> f64 {
    (a as f64 - b as f64).abs()
}

/// Runs every check on `ca` and collects the results. Individual failures,
/// including construction errors, are recorded rather than returned.
pub fn verify_suite(ca: &ConcreteAmalgam, opts: &VerifyOptions) -> VerificationReport {
    let mut r = Runner { ca, checks: Vec::new() };
    let depth = opts.depth.max(1);
    let spaces: Vec<(Vec<RLetter>, GradedSpace)> = words_upto(ca, depth - 1)
        .into_iter()
        .filter_map(|v| vacuum_space(ca, &v).ok().map(|h| (v, h)))
        .collect();
    // Structure maps act with up to two letters on H, so H is kept shallower.
    let shallow: Vec<&(Vec<RLetter>, GradedSpace)> = spaces.iter().filter(|(v, _)| v.len() + 2 <= depth.max(2)).collect();

    structure_unitarity(&mut r, &spaces, opts.exact_tolerance);
    coherence(&mut r, &shallow, opts.diagram_tolerance);
    assembly_relations(&mut r, depth, opts.exact_tolerance);
    functor_laws(&mut r, depth, opts);
    gradings(&mut r, depth);

    VerificationReport {
        factors: (0..ca.num_factors()).map(|i| ca.cat(i).group().name().to_string()).collect(),
        depth,
        seed: opts.seed,
        checks: r.checks,
    }
}

fn structure_unitarity(r: &mut Runner, spaces: &[(Vec<RLetter>, GradedSpace)], tol: f64) {
    let ca = r.ca;
    let n = ca.num_factors();
    for (v, h) in spaces {
        let hv = r.word(v);
        for i in 0..n {
            r.record("unitor-left-unitary", "υ^ℓ_H is unitary", format!("factor {}, H = {hv}▷⋆", i + 1), tol, || {
                Ok(ca.unitor_left(i, h)?.unitarity_defect())
            });
            r.record("unitor-right-unitary", "υ^r_H is unitary", format!("factor {}, H = {hv}▷⋆", i + 1), tol, || {
                Ok(ca.unitor_right(i, h)?.unitarity_defect())
            });
            let xs = factor_letters(ca, i);
            for &x in &xs {
                for &y in &xs {
                    let inst = format!("X = {}, Y = {}, H = {hv}▷⋆", r.obj(i, &[x]), r.obj(i, &[y]));
                    r.record("assoc-left-unitary", "μ^ℓ_{X,Y,H} is unitary", inst.clone(), tol, || {
                        Ok(ca.assoc_left(i, &[x], &[y], h)?.unitarity_defect())
                    });
                    r.record("assoc-right-unitary", "μ^r_{H,X,Y} is unitary", inst, tol, || {
                        Ok(ca.assoc_right(i, h, &[x], &[y])?.unitarity_defect())
                    });
                }
            }
            for j in 0..n {
                for &x in &xs {
                    for &y in &factor_letters(ca, j) {
                        let inst = format!(
                            "X = {} (factor {}), H = {hv}▷⋆, Y = {} (factor {})",
                            r.obj(i, &[x]),
                            i + 1,
                            r.obj(j, &[y]),
                            j + 1
                        );
                        r.record("swap-unitary", "Σ_{X,H,Y} is unitary", inst, tol, || {
                            Ok(ca.sigma(i, &[x], h, j, &[y])?.unitarity_defect())
                        });
                    }
                }
            }
        }
    }
    for i in 0..n {
        let xs = factor_letters(ca, i);
        let mut objects: Vec<Vec<usize>> = xs.iter().map(|&x| vec![x]).collect();
        objects.extend(xs.iter().flat_map(|&x| xs.iter().map(move |&y| vec![x, y])));
        for x in objects {
            r.record("vacuum-swap-unitary", "T_X: ⋆◁X → X▷⋆ is unitary", format!("X = {}", r.obj(i, &x)), tol, || {
                Ok(ca.vacuum_swap(i, &x)?.unitarity_defect())
            });
        }
    }
}

fn coherence(r: &mut Runner, spaces: &[&(Vec<RLetter>, GradedSpace)], tol: f64) {
    let ca = r.ca;
    let n = ca.num_factors();
    for (v, h) in spaces.iter().map(|p| (&p.0, &p.1)) {
        let hv = r.word(v);
        for i in 0..n {
            let xs = factor_letters(ca, i);
            for &x in &xs {
                let inst = format!("X = {}, H = {hv}▷⋆", r.obj(i, &[x]));
                r.record("left-triangle", "μ^ℓ_{X,ε,H} = X▷υ^ℓ_H and μ^ℓ_{ε,X,H} = υ^ℓ_{X▷H}", inst.clone(), tol, || {
                    let a = ca.assoc_left(i, &[x], &[], h)?.deviation(&ca.act_left_map(i, &[x], &ca.unitor_left(i, h)?)?);
                    let xh = ca.act_left(i, &[x], h)?.space.clone();
                    let b = ca.assoc_left(i, &[], &[x], h)?.deviation(&ca.unitor_left(i, &xh)?);
                    Ok(a.max(b))
                });
                r.record("right-triangle", "μ^r_{H,ε,X} = υ^r_H◁1_X and μ^r_{H,X,ε} = υ^r_{H◁X}", inst, tol, || {
                    let a = ca.assoc_right(i, h, &[], &[x])?.deviation(&ca.act_right_map(i, &ca.unitor_right(i, h)?, &[x])?);
                    let hx = ca.act_right(i, h, &[x])?.space.clone();
                    let b = ca.assoc_right(i, h, &[x], &[])?.deviation(&ca.unitor_right(i, &hx)?);
                    Ok(a.max(b))
                });
                for &y in &xs {
                    for &z in &xs {
                        let inst = format!(
                            "X = {}, Y = {}, Z = {}, H = {hv}▷⋆",
                            r.obj(i, &[x]),
                            r.obj(i, &[y]),
                            r.obj(i, &[z])
                        );
                        r.record(
                            "left-pentagon",
                            "μ^ℓ_{X,YZ,H}∘(X▷μ^ℓ_{Y,Z,H}) = μ^ℓ_{XY,Z,H}∘μ^ℓ_{X,Y,Z▷H}",
                            inst.clone(),
                            tol,
                            || {
                                let lhs = ca
                                    .assoc_left(i, &[x], &[y, z], h)?
                                    .compose(&ca.act_left_map(i, &[x], &ca.assoc_left(i, &[y], &[z], h)?)?)?;
                                let zh = ca.act_left(i, &[z], h)?.space.clone();
                                let rhs = ca.assoc_left(i, &[x, y], &[z], h)?.compose(&ca.assoc_left(i, &[x], &[y], &zh)?)?;
                                Ok(lhs.deviation(&rhs))
                            },
                        );
                        r.record(
                            "right-pentagon",
                            "μ^r_{H,X,YZ}∘μ^r_{H◁X,Y,Z} = μ^r_{H,XY,Z}∘(μ^r_{H,X,Y}◁1_Z)",
                            inst,
                            tol,
                            || {
                                let hx = ca.act_right(i, h, &[x])?.space.clone();
                                let lhs = ca.assoc_right(i, h, &[x], &[y, z])?.compose(&ca.assoc_right(i, &hx, &[y], &[z])?)?;
                                let rhs = ca
                                    .assoc_right(i, h, &[x, y], &[z])?
                                    .compose(&ca.act_right_map(i, &ca.assoc_right(i, h, &[x], &[y])?, &[z])?)?;
                                Ok(lhs.deviation(&rhs))
                            },
                        );
                    }
                }
            }
            for j in 0..n {
                let ys = factor_letters(ca, j);
                for &x in &xs {
                    let inst = format!("X = {} (factor {}), H = {hv}▷⋆, factor {}", r.obj(i, &[x]), i + 1, j + 1);
                    r.record("commutant-unitor", "(X▷υ^r_H)∘Σ_{X,H,ε} = υ^r_{X▷H}", inst, tol, || {
                        let lhs = ca.act_left_map(i, &[x], &ca.unitor_right(j, h)?)?.compose(&*ca.sigma(i, &[x], h, j, &[])?)?;
                        let xh = ca.act_left(i, &[x], h)?.space.clone();
                        Ok(lhs.deviation(&ca.unitor_right(j, &xh)?))
                    });
                    for &y in &ys {
                        let inst = format!(
                            "X = {} (factor {}), H = {hv}▷⋆, Y = {} (factor {})",
                            r.obj(i, &[x]),
                            i + 1,
                            r.obj(j, &[y]),
                            j + 1
                        );
                        r.record("swap-left-unitor", "υ^ℓ_{H◁Y}∘Σ_{ε,H,Y} = υ^ℓ_H◁1_Y", inst.clone(), tol, || {
                            let hy = ca.act_right(j, h, &[y])?.space.clone();
                            let lhs = ca.unitor_left(i, &hy)?.compose(&*ca.sigma(i, &[], h, j, &[y])?)?;
                            let rhs = ca.act_right_map(j, &ca.unitor_left(i, h)?, &[y])?;
                            Ok(lhs.deviation(&rhs))
                        });
                        for &z in &ys {
                            let inst = format!("{inst}, Z = {}", r.obj(j, &[z]));
                            r.record(
                                "commutant-assoc",
                                "Σ_{X,H,YZ}∘μ^r_{X▷H,Y,Z} = (X▷μ^r_{H,Y,Z})∘Σ_{X,H◁Y,Z}∘(Σ_{X,H,Y}◁1_Z)",
                                inst,
                                tol,
                                || {
                                    let xh = ca.act_left(i, &[x], h)?.space.clone();
                                    let hy = ca.act_right(j, h, &[y])?.space.clone();
                                    let lhs = ca.sigma(i, &[x], h, j, &[y, z])?.compose(&ca.assoc_right(j, &xh, &[y], &[z])?)?;
                                    let rhs = ca
                                        .act_left_map(i, &[x], &ca.assoc_right(j, h, &[y], &[z])?)?
                                        .compose(&*ca.sigma(i, &[x], &hy, j, &[z])?)?
                                        .compose(&ca.act_right_map(j, &*ca.sigma(i, &[x], h, j, &[y])?, &[z])?)?;
                                    Ok(lhs.deviation(&rhs))
                                },
                            );
                        }
                        for &x2 in &xs {
                            let inst = format!("{inst}, X′ = {}", r.obj(i, &[x2]));
                            r.record(
                                "swap-left-assoc",
                                "μ^ℓ_{X,X′,H◁Y}∘(X▷Σ_{X′,H,Y})∘Σ_{X,X′▷H,Y} = Σ_{XX′,H,Y}∘(μ^ℓ_{X,X′,H}◁1_Y)",
                                inst,
                                tol,
                                || {
                                    let hy = ca.act_right(j, h, &[y])?.space.clone();
                                    let x2h = ca.act_left(i, &[x2], h)?.space.clone();
                                    let lhs = ca
                                        .assoc_left(i, &[x], &[x2], &hy)?
                                        .compose(&ca.act_left_map(i, &[x], &*ca.sigma(i, &[x2], h, j, &[y])?)?)?
                                        .compose(&*ca.sigma(i, &[x], &x2h, j, &[y])?)?;
                                    let rhs = ca
                                        .sigma(i, &[x, x2], h, j, &[y])?
                                        .compose(&ca.act_right_map(j, &ca.assoc_left(i, &[x], &[x2], h)?, &[y])?)?;
                                    Ok(lhs.deviation(&rhs))
                                },
                            );
                        }
                    }
                }
            }
        }
    }
}

fn assembly_relations(r: &mut Runner, depth: usize, tol: f64) {
    let ca = r.ca;
    let all = words_upto(ca, depth);
    let shorter = words_upto(ca, depth - 1);
    for v in &all {
        r.record(
            "assembly-orthogonality",
            "(Ψ_{v,w}ζ)*(Ψ_{v,w′}ζ′) = δ_{w,w′} d(w)⁻¹⟨ζ′,ζ⟩",
            format!("v = {}", r.word(v)),
            tol,
            || check_assembly_orthogonality(ca, v),
        );
    }
    for &alpha in &letters(ca) {
        for v in &shorter {
            let inst = format!("v = {}, α = {}", r.word(v), r.word(&[alpha]));
            r.record(
                "assembly-right-version",
                "Ψ_{vα,w:π}(Σ̃δ(ξ⊗V)) = d(γ)^{1/2}(Ψ_{v,w:γ}ξ⊗1_α)(1_w⊗V)",
                inst,
                tol,
                || check_assembly_right_version(ca, v, alpha),
            );
            for v2 in shorter.iter().filter(|v2| v2.len() == v.len()) {
                let inst = format!("α = {}, v = {}, v′ = {}", r.word(&[alpha]), r.word(v), r.word(v2));
                r.record(
                    "assembly-left-identity",
                    "Σ_{π,V} d(π)Ψ(δ(V⊗ξ))Ψ(δ(V⊗ξ′))* = d(γ)·1_α⊗(Ψξ)(Ψξ′)*",
                    inst.clone(),
                    tol,
                    || check_assembly_left_identity(ca, alpha, v, v2),
                );
                r.record(
                    "assembly-right-identity",
                    "Σ_{π,V} d(π)Ψ(Σ̃δ(ξ⊗V))Ψ(Σ̃δ(ξ′⊗V))* = d(γ)·(Ψξ)(Ψξ′)*⊗1_α",
                    inst,
                    tol,
                    || check_assembly_right_identity(ca, v, v2, alpha),
                );
            }
        }
    }
}

/// Pairs (v, v′) with a nonzero morphism space, by the fusion-level count.
fn connected_pairs(ca: &ConcreteAmalgam, words: &[Vec<RLetter>]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (a, v) in words.iter().enumerate() {
        for (b, v2) in words.iter().enumerate() {
            if hom_dim_words(ca.amalgam(), &ca.word_of(v), &ca.word_of(v2))? > 0 {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// Commutant dimension of the group actions of all factors on the carrier
/// of v, from the linear system X ρ(g) = ρ(g) X.
fn commutant_dimension(ca: &ConcreteAmalgam, v: &[RLetter]) -> usize {
    let n = ca.carrier_dim(v);
    let mut blocks: Vec<CMat> = Vec::new();
    for i in 0..ca.num_factors() {
        for g in 0..ca.cat(i).group().order() {
            let rho = ca.group_action(v, i, g);
            // vec(Xρ − ρX) = (ρᵀ⊗1 − 1⊗ρ) vec(X)
            blocks.push(kron(&rho.transpose(), &identity(n)) - kron(&identity(n), &rho));
        }
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = CMat::zeros(rows, n * n);
    let mut at = 0;
    for b in &blocks {
        m.view_mut((at, 0), b.shape()).copy_from(b);
        at += b.nrows();
    }
    n * n - rank(&m, 1e-9)
}

fn functor_laws(r: &mut Runner, depth: usize, opts: &VerifyOptions) {
    let ca = r.ca;
    let tol = opts.exact_tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let words = words_upto(ca, depth - 1);
    let all = words_upto(ca, depth);

    for v in &words {
        r.record("functor-identity", "Ψ(1_v) = 1", format!("v = {}", r.word(v)), tol, || {
            let id = CWrMorphism::identity(ca, v)?;
            Ok(deviation(&ca.universal_functor(&id)?, &identity(ca.carrier_dim(v))))
        });
    }

    for v in &all {
        r.record(
            "free-independence",
            "Ψ maps End(ℒ_v) injectively into the commutant of the factor group actions",
            format!("v = {}", r.word(v)),
            0.5,
            || {
                let expected = hom_dim_words(ca.amalgam(), &ca.word_of(v), &ca.word_of(v))? as usize;
                let images: Vec<CMat> = ca
                    .extendable_basis(v, v, depth)?
                    .iter()
                    .map(|b| ca.universal_functor(b))
                    .collect::<Result<_>>()?;
                let n = ca.carrier_dim(v);
                let m = CMat::from_fn(n * n, images.len(), |row, k| images[k][(row % n, row / n)]);
                let got = rank(&m, 1e-8);
                // The commutant of the classical actions only bounds it from above.
                let excess = got.saturating_sub(commutant_dimension(ca, v));
                Ok(count_deviation(got, expected) + excess as f64)
            },
        );
    }

    // Morphism spaces between word functors, cut out by naturality.
    let pairs = match connected_pairs(ca, &words) {
        Ok(p) => p,
        Err(e) => {
            r.record("extendable-dimension", "extendable vacuum components", "pairs".into(), 0.5, || Err(e));
            return;
        }
    };
    let mut bases: BTreeMap<(usize, usize), Vec<CWrMorphism>> = BTreeMap::new();
    for &(a, b) in &pairs {
        let (v, v2) = (&words[a], &words[b]);
        let inst = format!("v = {}, v′ = {}", r.word(v), r.word(v2));
        let mut found = None;
        r.record(
            "extendable-dimension",
            "dim of natural vacuum components ℒ_v ⇒ ℒ_v′ equals hom(v, v′)",
            inst,
            0.5,
            || {
                let basis = ca.extendable_basis(v, v2, depth)?;
                let expected = hom_dim_words(ca.amalgam(), &ca.word_of(v), &ca.word_of(v2))? as usize;
                let d = count_deviation(basis.len(), expected);
                found = Some(basis);
                Ok(d)
            },
        );
        if let Some(basis) = found.filter(|b| !b.is_empty()) {
            bases.insert((a, b), basis);
        }
    }
    let keys: Vec<(usize, usize)> = bases.keys().copied().collect();
    if keys.is_empty() {
        return;
    }
    let ls = letters(ca);
    for _ in 0..opts.samples {
        let (a, b) = keys[rng.random_range(0..keys.len())];
        let eta = match random_combination(ca, &bases[&(a, b)], &mut rng) {
            Ok(e) => e,
            Err(e) => {
                r.record("functor-sampling", "random 2-cell", String::new(), tol, || Err(e));
                continue;
            }
        };
        let inst = format!("η: {} ⇒ {}", r.word(&words[a]), r.word(&words[b]));

        r.record("functor-involution", "Ψ(η*) = Ψ(η)*", inst.clone(), tol, || {
            Ok(deviation(&ca.universal_functor(&eta.adjoint())?, &ca.universal_functor(&eta)?.adjoint()))
        });

        let nexts: Vec<usize> = keys.iter().filter(|k| k.0 == b).map(|k| k.1).collect();
        let c2 = nexts[rng.random_range(0..nexts.len())];
        let eta2 = random_combination(ca, &bases[&(b, c2)], &mut rng);
        r.record(
            "functor-composition",
            "Ψ(η′∘η) = Ψ(η′)Ψ(η)",
            format!("{inst}, η′: ⇒ {}", r.word(&words[c2])),
            tol,
            || {
                let eta2 = eta2?;
                let lhs = ca.universal_functor(&eta2.compose(&eta)?)?;
                Ok(deviation(&lhs, &(ca.universal_functor(&eta2)? * ca.universal_functor(&eta)?)))
            },
        );

        let alpha = ls[rng.random_range(0..ls.len())];
        let inst_a = format!("{inst}, α = {}", r.word(&[alpha]));
        let dim_a = ca.cat(alpha.0).dim(alpha.1);
        r.record("functor-left-tensor", "Ψ(1_α⊗η) = 1_α⊗Ψ(η)", inst_a.clone(), tol, || {
            let lhs = ca.universal_functor(&eta.whisker_left(ca, alpha)?)?;
            Ok(deviation(&lhs, &kron(&identity(dim_a), &ca.universal_functor(&eta)?)))
        });
        r.record("functor-right-tensor", "Ψ(η⊗1_α) = Ψ(η)⊗1_α", inst_a, tol, || {
            let lhs = ca.universal_functor(&eta.whisker_right(ca, alpha)?)?;
            Ok(deviation(&lhs, &kron(&ca.universal_functor(&eta)?, &identity(dim_a))))
        });

        r.record("functor-equivariance", "Ψ(η) intertwines the free product group actions", inst.clone(), tol, || {
            let psi = ca.universal_functor(&eta)?;
            let mut worst: f64 = 0.0;
            for i in 0..ca.num_factors() {
                for g in 0..ca.cat(i).group().order() {
                    let lhs = &psi * ca.group_action(&eta.source, i, g);
                    let rhs = ca.group_action(&eta.target, i, g) * &psi;
                    worst = worst.max(deviation(&lhs, &rhs));
                }
            }
            Ok(worst)
        });

        r.record("extension-restriction", "extending η_⋆ and restricting to ⋆ returns η_⋆", inst.clone(), tol, || {
            Ok(ca.extend_morphism(&eta, &ca.star())?.deviation(&eta.star))
        });

        let u = &words[rng.random_range(0..words.len())];
        let (j, y) = ls[rng.random_range(0..ls.len())];
        let inst_h = format!("{inst}, H = {}▷⋆, Y = {}", r.word(u), r.word(&[(j, y)]));
        r.record(
            "extended-naturality",
            "η_{H◁Y}∘c_v(H,Y) = c_v′(H,Y)∘(η_H◁1_Y)",
            inst_h.clone(),
            opts.diagram_tolerance,
            || {
                let h = vacuum_space(ca, u)?;
                Ok(ca.naturality_defect(&eta, &h, j, &[y])?.max_abs())
            },
        );
        r.record("extension-norm", "‖η_H‖ ≤ ‖η_⋆‖", inst_h, tol, || {
            let h = vacuum_space(ca, u)?;
            let ext = ca.extend_morphism(&eta, &h)?;
            let norm = |m: &GradedMap| m.blocks().values().map(op_norm).fold(0.0, f64::max);
            Ok((norm(&ext) - norm(&eta.star)).max(0.0))
        });
    }

    // Embeddings of the factors.
    for i in 0..ca.num_factors() {
        let xs = factor_letters(ca, i);
        let mut objects: Vec<Vec<usize>> = vec![Vec::new()];
        objects.extend(xs.iter().map(|&x| vec![x]));
        objects.extend(xs.iter().flat_map(|&x| xs.iter().map(move |&y| vec![x, y])));
        objects.retain(|o| o.len() < depth);
        for x in &objects {
            for y in &objects {
                let inst = format!("factor {}, X = {}, Y = {}", i + 1, r.obj(i, x), r.obj(i, y));
                let hom = ca.cat(i).hom_space(x, y);
                r.record(
                    "full-faithfulness",
                    "Hom(X, Y) ≅ 2-cells ℒ_X ⇒ ℒ_Y through Φ_i",
                    inst.clone(),
                    0.5,
                    || {
                        let vx: Vec<RLetter> = x.iter().map(|&k| (i, k)).collect();
                        let vy: Vec<RLetter> = y.iter().map(|&k| (i, k)).collect();
                        let (rk, dim) = ca.factor_image_rank(i, x, y)?;
                        let ext = ca.extendable_dimension(&vx, &vy, depth)?;
                        Ok(count_deviation(rk, dim).max(count_deviation(ext, dim)))
                    },
                );
                if hom.is_empty() {
                    continue;
                }
                let mut phi = CMat::zeros(hom[0].nrows(), hom[0].ncols());
                for b in hom.iter() {
                    phi += b * random_c64(&mut rng);
                }
                r.record("functor-on-factor", "Ψ(Φ_i(φ)) = φ", inst, tol, || {
                    let m = ca.factor_morphism(i, &phi, x, y)?;
                    Ok(deviation(&ca.universal_functor(&m)?, &phi))
                });
            }
        }
    }
}

fn gradings(r: &mut Runner, depth: usize) {
    let ca = r.ca;
    for v in words_upto(ca, depth) {
        r.record(
            "grading-bridge",
            "dim (v▷⋆)_w = multiplicity of w in v",
            format!("v = {}", r.word(&v)),
            0.5,
            || {
                let space = vacuum_space(ca, &v)?;
                let word = ca.word_of(&v);
                let mut worst: f64 = 0.0;
                for (w, d) in space.components() {
                    worst = worst.max(count_deviation(d, mult_in_word(ca.amalgam(), w, &word)? as usize));
                }
                // Components missing from the space must have multiplicity zero.
                let total: u64 = space.components().map(|(_, d)| d as u64).sum();
                let dec = crate::free_fusion::decompose_word(ca.amalgam(), &word, crate::free_fusion::Bound::new(depth + 1, 8))?;
                let expected: u64 = dec.entries().iter().map(|(_, m)| *m).sum();
                Ok(worst.max(count_deviation(total as usize, expected as usize)))
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::builtin_amalgam;

    #[test]
    fn depth_one_suite_passes_on_two_cyclic_factors() {
        let ca = builtin_amalgam(&["Z2", "Z2"]).unwrap();
        let rep = verify_suite(&ca, &VerifyOptions { depth: 1, ..Default::default() });
        let bad: Vec<_> = rep.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn report_round_trips() {
        let ca = builtin_amalgam(&["Z2", "Z2"]).unwrap();
        let rep = verify_suite(&ca, &VerifyOptions { depth: 1, ..Default::default() });
        let text = rep.to_json();
        assert_eq!(VerificationReport::from_json(&text).unwrap().to_json(), text);
    }
}
