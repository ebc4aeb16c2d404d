//! Representation categories of finite groups with explicit matrices.
//!
//! An object is a list of irreducible indices read as a tensor product; its
//! carrier is the Kronecker product of the carriers. Intertwiner spaces are
//! the fixed points of the group average of `X ↦ A(g) X B(g)⁻¹`.

mod group;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use nalgebra::DVector;
use num_rational::Rational64;

pub use group::{cyclic_irreps, symmetric3_irreps, FiniteGroup, GroupFile, RepEntry, RepsFile, UnitaryRep};

use crate::error::{Error, Result};
use crate::fusion::{CategorySpec, IrrId, IrrRow, TableRules, ZeroCell};
use crate::linalg::{c, deviation, identity, kron, kron_all, orthonormalize, unvectorize, CMat, C64};
use crate::ExactSpec;

const TOL: f64 = 1e-10;
const CELL: &str = "a";

/// Basis of intertwiners from `gamma` into `alpha ⊗ beta`, orthonormal for
/// ⟨V, W⟩ = Tr(W*V).
#[derive(Debug, Clone)]
pub struct IntertwinerBasis {
    pub alpha: IrrId,
    pub beta: IrrId,
    pub gamma: IrrId,
    pub vectors: Vec<CMat>,
}

type HomKey = (Vec<usize>, Vec<usize>);

/// Rep(G) restricted to a chosen set of irreducibles, with standard solutions.
pub struct ConcreteCategory {
    group: FiniteGroup,
    reps: Vec<UnitaryRep>,
    irrs: Vec<IrrId>,
    index: HashMap<String, usize>,
    unit: usize,
    duals: Vec<usize>,
    /// Unitary intertwiner from the entrywise conjugate of α to ᾱ.
    conj_maps: Vec<CMat>,
    spec: ExactSpec,
    homs: Mutex<HashMap<HomKey, Arc<Vec<CMat>>>>,
}

impl std::fmt::Debug for ConcreteCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConcreteCategory")
            .field("group", &self.group.name())
            .field("irreps", &self.irrs)
            .finish()
    }
}

/// Orthonormal basis (Frobenius pairing) of all T with T A(g) = B(g) T.
fn fixed_space(group: &FiniteGroup, src: &dyn Fn(usize) -> CMat, tgt: &dyn Fn(usize) -> CMat) -> Vec<CMat> {
    let (ds, dt) = {
        let e = group.identity();
        (src(e).nrows(), tgt(e).nrows())
    };
    let n = ds * dt;
    if n == 0 {
        return Vec::new();
    }
    // vec(B T A⁻¹) = (conj A ⊗ B) vec(T) for unitary A.
    let mut proj = CMat::zeros(n, n);
    for g in 0..group.order() {
        proj += kron(&src(g).conjugate(), &tgt(g));
    }
    proj /= c(group.order() as f64);
    let rank = proj.trace().re.round() as usize;
    if rank == 0 {
        return Vec::new();
    }
    let cols = (0..n).map(|k| DVector::from_iterator(n, proj.column(k).iter().cloned()));
    orthonormalize(cols, rank, 1e-8)
        .into_iter()
        .map(|v| unvectorize(v.as_slice(), dt, ds))
        .collect()
}

impl ConcreteCategory {
    /// Builds the category on the given irreducibles. `complete` additionally
    /// demands Σ dim² = |G|.
    pub fn build(group: FiniteGroup, reps: Vec<UnitaryRep>, complete: bool) -> Result<Self> {
        let cell = ZeroCell::new(CELL);
        let mut index = HashMap::new();
        for (k, r) in reps.iter().enumerate() {
            r.check(&group)?;
            if index.insert(r.label.clone(), k).is_some() {
                return Err(Error::Validation(format!("irrep label `{}` used twice", r.label)));
            }
        }
        let of = |r: &UnitaryRep| {
            let r = r.clone();
            move |g: usize| r.matrices[g].clone()
        };
        for (k, a) in reps.iter().enumerate() {
            let comm = fixed_space(&group, &of(a), &of(a)).len();
            if comm != 1 {
                return Err(Error::Validation(format!(
                    "rep `{}` is reducible (commutant dimension {comm})",
                    a.label
                )));
            }
            for b in &reps[..k] {
                if !fixed_space(&group, &of(a), &of(b)).is_empty() {
                    return Err(Error::Validation(format!(
                        "reps `{}` and `{}` are isomorphic",
                        b.label, a.label
                    )));
                }
            }
        }
        let unit = reps
            .iter()
            .position(|r| r.dim() == 1 && r.matrices.iter().all(|m| (m[(0, 0)] - c(1.0)).norm() < TOL))
            .ok_or_else(|| Error::Validation("the trivial representation is missing".into()))?;
        if complete {
            let total: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
            if total != group.order() {
                return Err(Error::Validation(format!(
                    "Σ dim² = {total} but the group has order {}",
                    group.order()
                )));
            }
        }

        let mut duals = Vec::with_capacity(reps.len());
        let mut conj_maps = Vec::with_capacity(reps.len());
        for a in &reps {
            let conj = a.conjugate();
            let found = reps.iter().enumerate().find_map(|(k, b)| {
                let basis = fixed_space(&group, &of(&conj), &of(b));
                basis.into_iter().next().map(|j| (k, j * c((a.dim() as f64).sqrt())))
            });
            let (k, j) = found.ok_or_else(|| {
                Error::Validation(format!("the conjugate of `{}` is not among the given reps", a.label))
            })?;
            duals.push(k);
            conj_maps.push(j);
        }

        let n = reps.len();
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let pair = |g: usize| kron(&reps[a].matrices[g], &reps[b].matrices[g]);
                let mut result = BTreeMap::new();
                let mut covered = 0;
                for (k, r) in reps.iter().enumerate() {
                    let m = fixed_space(&group, &of(r), &pair).len();
                    if m > 0 {
                        result.insert(reps[k].label.clone(), m as u64);
                        covered += m * r.dim();
                    }
                }
                if covered != reps[a].dim() * reps[b].dim() {
                    return Err(Error::Validation(format!(
                        "`{}` ⊗ `{}` has constituents outside the given reps",
                        reps[a].label, reps[b].label
                    )));
                }
                fusion.push((reps[a].label.clone(), reps[b].label.clone(), result));
            }
        }
        let rows = (0..n)
            .map(|k| IrrRow {
                label: reps[k].label.clone(),
                source: CELL.into(),
                target: CELL.into(),
                dual: reps[duals[k]].label.clone(),
                qdim: Rational64::from_integer(reps[k].dim() as i64),
            })
            .collect();
        let units = BTreeMap::from([(CELL.to_string(), reps[unit].label.clone())]);
        let rules = TableRules::new(format!("Rep({})", group.name()), &[CELL.into()], rows, &units, &fusion)?;

        let irrs = reps.iter().map(|r| IrrId::new(&r.label, cell.clone(), cell.clone())).collect();
        let cat = ConcreteCategory {
            group,
            reps,
            irrs,
            index,
            unit,
            duals,
            conj_maps,
            spec: CategorySpec::new(rules),
            homs: Mutex::new(HashMap::new()),
        };
        cat.check_standard_solutions()?;
        Ok(cat)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn spec(&self) -> &ExactSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, k: usize) -> &UnitaryRep {
        &self.reps[k]
    }

    pub fn irr(&self, k: usize) -> &IrrId {
        &self.irrs[k]
    }

    pub fn irrs(&self) -> &[IrrId] {
        &self.irrs
    }

    pub fn index_of(&self, irr: &IrrId) -> Result<usize> {
        self.index
            .get(irr.label())
            .copied()
            .filter(|&k| &self.irrs[k] == irr)
            .ok_or_else(|| Error::lookup("irreducible", irr.label()))
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn dual_index(&self, k: usize) -> usize {
        self.duals[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.reps[k].dim()
    }

    /// Quantum dimension; equal to the carrier dimension here.
    pub fn qdim(&self, k: usize) -> f64 {
        self.reps[k].dim() as f64
    }

    pub fn carrier_dim(&self, obj: &[usize]) -> usize {
        obj.iter().map(|&k| self.dim(k)).product()
    }

    pub fn object_matrix(&self, obj: &[usize], g: usize) -> CMat {
        kron_all(obj.iter().map(|&k| &self.reps[k].matrices[g]))
    }

    /// Orthonormal basis of intertwiners from `src` into `tgt`.
    pub fn hom_space(&self, src: &[usize], tgt: &[usize]) -> Arc<Vec<CMat>> {
        let key = (src.to_vec(), tgt.to_vec());
        if let Some(hit) = self.homs.lock().expect("cache poisoned").get(&key) {
            return hit.clone();
        }
        let basis = Arc::new(fixed_space(
            &self.group,
            &|g| self.object_matrix(src, g),
            &|g| self.object_matrix(tgt, g),
        ));
        self.homs.lock().expect("cache poisoned").insert(key, basis.clone());
        basis
    }

    /// Basis of (X, γ): maps from the irreducible γ into the object X.
    pub fn intertwiners(&self, obj: &[usize], gamma: usize) -> Arc<Vec<CMat>> {
        self.hom_space(&[gamma], obj)
    }

    pub fn intertwiner_basis(&self, alpha: &IrrId, beta: &IrrId, gamma: &IrrId) -> Result<IntertwinerBasis> {
        let (a, b, g) = (self.index_of(alpha)?, self.index_of(beta)?, self.index_of(gamma)?);
        Ok(IntertwinerBasis {
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            vectors: self.intertwiners(&[a, b], g).as_ref().clone(),
        })
    }

    /// Unitary intertwiner from the conjugate representation of `k` to its dual.
    pub fn conj_map(&self, k: usize) -> &CMat {
        &self.conj_maps[k]
    }

    /// `(s, t)` with s = Σ e_k ⊗ J e_k into α⊗ᾱ and t = Σ J e_k ⊗ e_k into ᾱ⊗α.
    pub fn standard_solution(&self, k: usize) -> (CMat, CMat) {
        let d = self.dim(k);
        let dd = self.dim(self.duals[k]);
        let j = &self.conj_maps[k];
        let mut s = CMat::zeros(d * dd, 1);
        let mut t = CMat::zeros(dd * d, 1);
        for e in 0..d {
            for f in 0..dd {
                s[(e * dd + f, 0)] += j[(f, e)];
                t[(f * d + e, 0)] += j[(f, e)];
            }
        }
        (s, t)
    }

    /// Tr_α(T) = s*(T ⊗ 1)s.
    pub fn categorical_trace(&self, alpha: &IrrId, t: &CMat) -> Result<C64> {
        let k = self.index_of(alpha)?;
        let d = self.dim(k);
        if t.shape() != (d, d) {
            return Err(Error::Argument(format!(
                "expected a {d}×{d} matrix for `{alpha}`, got {}×{}",
                t.nrows(),
                t.ncols()
            )));
        }
        let (s, _) = self.standard_solution(k);
        let lifted = kron(t, &identity(self.dim(self.duals[k])));
        Ok((s.adjoint() * lifted * &s)[(0, 0)])
    }

    fn check_standard_solutions(&self) -> Result<()> {
        for k in 0..self.len() {
            let (s, t) = self.standard_solution(k);
            let (d, dd) = (self.dim(k), self.dim(self.duals[k]));
            let zig = kron(&s.adjoint(), &identity(d)) * kron(&identity(d), &t);
            let zag = kron(&t.adjoint(), &identity(dd)) * kron(&identity(dd), &s);
            if deviation(&zig, &identity(d)) > TOL || deviation(&zag, &identity(dd)) > TOL {
                return Err(Error::Validation(format!(
                    "conjugate equations fail for `{}`",
                    self.reps[k].label
                )));
            }
            let norm = (s.adjoint() * &s)[(0, 0)];
            if (norm - c(d as f64)).norm() > TOL {
                return Err(Error::Validation(format!("s*s ≠ dim for `{}`", self.reps[k].label)));
            }
            for g in 0..self.group.order() {
                let act = kron(&self.reps[k].matrices[g], &self.reps[self.duals[k]].matrices[g]);
                if deviation(&(act * &s), &s) > TOL {
                    return Err(Error::Validation(format!(
                        "s is not invariant for `{}`",
                        self.reps[k].label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Names accepted by [`builtin_category`]: `Z1` … `Z6` (also `Z/n`) and `S3`.
pub fn builtin_category(name: &str) -> Result<ConcreteCategory> {
    let norm = name.replace('/', "");
    if norm == "S3" {
        return ConcreteCategory::build(FiniteGroup::symmetric3(), symmetric3_irreps(), true);
    }
    let n = norm
        .strip_prefix('Z')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|n| (1..=6).contains(n))
        .ok_or_else(|| Error::lookup("built-in group", name))?;
    let group = FiniteGroup::cyclic(n)?;
    let reps = cyclic_irreps(&group);
    ConcreteCategory::build(group, reps, true)
}

pub fn builtin_spec(name: &str) -> Result<ExactSpec> {
    Ok(builtin_category(name)?.spec().clone())
}

/// Category from a group file and a representation file (both JSON).
pub fn category_from_files(group_json: &str, reps_json: &str) -> Result<ConcreteCategory> {
    let group = GroupFile::from_json(group_json)?.into_group()?;
    let reps = RepsFile::from_json(reps_json)?.into_reps()?;
    ConcreteCategory::build(group, reps, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn z2_matches_hand_table() {
        let spec = builtin_spec("Z2").unwrap();
        let g = spec.irreducible("g").unwrap();
        let one = spec.irreducible("1").unwrap();
        assert_eq!(spec.fuse_pair(&g, &g).unwrap().to_string(), "1");
        assert_eq!(spec.dual(&g).unwrap(), g);
        assert!(spec.is_unit(&one));
        assert!(spec.validate(0).unwrap().is_clean());
    }

    #[test]
    fn z3_duals_swap() {
        let spec = builtin_spec("Z/3").unwrap();
        let w = spec.irreducible("w").unwrap();
        assert_eq!(spec.dual(&w).unwrap().label(), "w2");
        assert_eq!(spec.fuse_pair(&w, &w).unwrap().to_string(), "w2");
    }

    #[test]
    fn s3_std_squared() {
        let cat = builtin_category("S3").unwrap();
        let std = cat.spec().irreducible("std").unwrap();
        let row = cat.spec().fuse_pair(&std, &std).unwrap();
        for g in ["1", "sgn", "std"] {
            assert_eq!(row.mult(&cat.spec().irreducible(g).unwrap()), 1);
        }
        let one = cat.spec().irreducible("1").unwrap();
        let b = cat.intertwiner_basis(&std, &std, &one).unwrap();
        assert_eq!(b.vectors.len(), 1);
        // Proportional to the invariant pairing Σ e_k ⊗ e_k (real rep).
        let v = &b.vectors[0];
        assert!((v[(0, 0)].norm() - v[(3, 0)].norm()).abs() < 1e-10);
        assert!(v[(1, 0)].norm() < 1e-10 && v[(2, 0)].norm() < 1e-10);
        assert!((frobenius(v, v).re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unit_constraint_and_empty_spaces() {
        let cat = builtin_category("S3").unwrap();
        let std = cat.irr(2).clone();
        let one = cat.irr(0).clone();
        let sgn = cat.irr(1).clone();
        let b = cat.intertwiner_basis(&one, &std, &std).unwrap();
        assert_eq!(b.vectors.len(), 1);
        // 1 ⊗ std = std, so the basis vector is a multiple of identity / √2.
        let scaled = &b.vectors[0] * c(2f64.sqrt());
        let phase = scaled[(0, 0)];
        assert!(deviation(&scaled, &(identity(2) * phase)) < 1e-10);
        assert!(cat.intertwiner_basis(&sgn, &sgn, &std).unwrap().vectors.is_empty());
    }

    #[test]
    fn traces() {
        let cat = builtin_category("S3").unwrap();
        let std = cat.irr(2).clone();
        assert!((cat.categorical_trace(&std, &identity(2)).unwrap() - c(2.0)).norm() < 1e-10);
        let a = CMat::from_fn(2, 2, |i, j| C64::new(i as f64 + 0.5, j as f64));
        let b = CMat::from_fn(2, 2, |i, j| C64::new(j as f64 - i as f64, 1.0));
        let comm = &a * &b - &b * &a;
        assert!(cat.categorical_trace(&std, &comm).unwrap().norm() < 1e-10);
        assert!(matches!(cat.categorical_trace(&std, &identity(3)), Err(Error::Argument(_))));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = FiniteGroup::symmetric3();
        let mut reps = symmetric3_irreps();
        reps.push(reps[2].clone());
        reps[3].label = "std2".into();
        assert!(matches!(ConcreteCategory::build(g.clone(), reps, false), Err(Error::Validation(_))));
        let reps = symmetric3_irreps()[..2].to_vec();
        assert!(ConcreteCategory::build(g.clone(), reps.clone(), true).is_err());
        // {1, sgn} is closed, so it is fine without the completeness flag.
        assert!(ConcreteCategory::build(g.clone(), reps, false).is_ok());
        let reducible: Vec<CMat> = symmetric3_irreps()[1].matrices.iter().map(|m| kron(m, &identity(2))).collect();
        let reps = vec![symmetric3_irreps()[0].clone(), UnitaryRep::new("two", reducible)];
        assert!(ConcreteCategory::build(g, reps, false).is_err());
    }
}
