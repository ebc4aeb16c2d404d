//! Temperley–Lieb–Jones fusion data in the generic regime δ ≥ 2.
//!
//! The irreducibles are the Jones–Wenzl projections `f0, f1, ...` with
//! `f_m ⊗ f_n = ⊕ f_k` over |m−n| ≤ k ≤ m+n, k ≡ m+n mod 2, and quantum
//! dimensions given by the Chebyshev recursion S₀ = 1, S₁ = δ,
//! S_{n+1} = δ S_n − S_{n−1}.

use crate::error::{Error, Result};
use crate::free_fusion::PointedSpec;
use crate::fusion::{Bundle, CategorySpec, FusionRules, IrrId, ZeroCell};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct TljParams<S> {
    pub delta: S,
    /// Default window depth for callers that enumerate irreducibles.
    pub level_hint: usize,
}

impl<S: Scalar> TljParams<S> {
    pub fn new(delta: S) -> Result<Self> {
        let p = TljParams { delta, level_hint: 6 };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.delta < S::from_count(2) {
            return Err(Error::Parameter(format!(
                "delta must be at least 2, got {}",
                self.delta.render()
            )));
        }
        Ok(())
    }
}

/// S_n(δ) for n = 0..=n_max.
pub fn chebyshev_dims<S: Scalar>(delta: &S, n_max: usize) -> Vec<S> {
    let mut out = vec![S::one(), delta.clone()];
    while out.len() <= n_max {
        let n = out.len();
        out.push(delta.clone() * out[n - 1].clone() - out[n - 2].clone());
    }
    out.truncate(n_max + 1);
    out
}

/// Admissible k in f_m ⊗ f_n.
pub fn fusion_channels(m: usize, n: usize) -> impl Iterator<Item = usize> {
    (m.abs_diff(n)..=m + n).step_by(2)
}

fn parse_index(label: &str) -> Option<usize> {
    let digits = label.strip_prefix('f')?;
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

struct TljRules<S> {
    delta: S,
    cell: ZeroCell,
}

impl<S: Scalar> TljRules<S> {
    fn irr(&self, n: usize) -> IrrId {
        IrrId::new(format!("f{n}"), self.cell.clone(), self.cell.clone())
    }

    fn index(&self, irr: &IrrId) -> Result<usize> {
        parse_index(irr.label())
            .filter(|_| irr.source() == &self.cell && irr.target() == &self.cell)
            .ok_or_else(|| Error::lookup("irreducible", irr.label()))
    }
}

impl<S: Scalar> FusionRules<S> for TljRules<S> {
    fn zero_cells(&self) -> Vec<ZeroCell> {
        vec![self.cell.clone()]
    }

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId> {
        (cell == &self.cell).then(|| self.irr(0))
    }

    fn irreducible(&self, label: &str) -> Option<IrrId> {
        parse_index(label).map(|n| self.irr(n))
    }

    fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        self.index(irr)?;
        Ok(irr.clone())
    }

    fn qdim(&self, irr: &IrrId) -> Result<S> {
        let n = self.index(irr)?;
        Ok(chebyshev_dims(&self.delta, n).pop().expect("nonempty"))
    }

    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        let (m, n) = (self.index(a)?, self.index(b)?);
        Ok(Bundle::from_terms(
            self.cell.clone(),
            self.cell.clone(),
            fusion_channels(m, n).map(|k| (self.irr(k), 1)),
        ))
    }

    fn window(&self, depth: usize) -> Vec<IrrId> {
        (0..=depth).map(|n| self.irr(n)).collect()
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn depth_of(&self, irr: &IrrId) -> usize {
        self.index(irr).unwrap_or(usize::MAX)
    }

    fn describe(&self) -> String {
        format!("TLJ(delta={})", self.delta.render())
    }
}

/// One 0-cell `a`, irreducibles `f0, f1, ...`, all self-dual.
pub fn tlj_spec<S: Scalar>(params: &TljParams<S>) -> Result<CategorySpec<S>> {
    params.check()?;
    Ok(CategorySpec::new(TljRules { delta: params.delta.clone(), cell: ZeroCell::new("a") }))
}

/// Two-cell version: `f{n}_{xy}` lives in (x, y) with even n on the diagonal
/// and odd n off it.
struct PointedTljRules<S> {
    delta: S,
}

const CELLS: [&str; 2] = ["a", "b"];

fn parse_pointed(label: &str) -> Option<(usize, usize, usize)> {
    let (n, ends) = label.rsplit_once('_')?;
    let n = parse_index(n)?;
    let mut ends = ends.chars();
    let pos = |c: char| CELLS.iter().position(|x| x.starts_with(c));
    let x = pos(ends.next()?)?;
    let y = pos(ends.next()?)?;
    if ends.next().is_some() || ((x == y) != (n % 2 == 0)) {
        return None;
    }
    Some((n, x, y))
}

impl<S: Scalar> PointedTljRules<S> {
    fn irr(n: usize, x: usize, y: usize) -> IrrId {
        IrrId::new(
            format!("f{n}_{}{}", CELLS[x], CELLS[y]),
            ZeroCell::new(CELLS[x]),
            ZeroCell::new(CELLS[y]),
        )
    }

    fn parts(irr: &IrrId) -> Result<(usize, usize, usize)> {
        parse_pointed(irr.label())
            .filter(|&(_, x, y)| irr.source().label() == CELLS[x] && irr.target().label() == CELLS[y])
            .ok_or_else(|| Error::lookup("irreducible", irr.label()))
    }
}

impl<S: Scalar> FusionRules<S> for PointedTljRules<S> {
    fn zero_cells(&self) -> Vec<ZeroCell> {
        CELLS.iter().map(ZeroCell::new).collect()
    }

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId> {
        let x = CELLS.iter().position(|c| *c == cell.label())?;
        Some(Self::irr(0, x, x))
    }

    fn irreducible(&self, label: &str) -> Option<IrrId> {
        parse_pointed(label).map(|(n, x, y)| Self::irr(n, x, y))
    }

    fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        let (n, x, y) = Self::parts(irr)?;
        Ok(Self::irr(n, y, x))
    }

    fn qdim(&self, irr: &IrrId) -> Result<S> {
        let (n, _, _) = Self::parts(irr)?;
        Ok(chebyshev_dims(&self.delta, n).pop().expect("nonempty"))
    }

    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        let (m, x, _) = Self::parts(a)?;
        let (n, _, z) = Self::parts(b)?;
        Ok(Bundle::from_terms(
            a.source().clone(),
            b.target().clone(),
            fusion_channels(m, n).map(|k| (Self::irr(k, x, z), 1)),
        ))
    }

    fn window(&self, depth: usize) -> Vec<IrrId> {
        let mut out = Vec::new();
        for n in 0..=depth {
            for x in 0..2 {
                for y in 0..2 {
                    if (x == y) == (n % 2 == 0) {
                        out.push(Self::irr(n, x, y));
                    }
                }
            }
        }
        out
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn depth_of(&self, irr: &IrrId) -> usize {
        Self::parts(irr).map_or(usize::MAX, |(n, _, _)| n)
    }

    fn describe(&self) -> String {
        format!("pointed TLJ(delta={})", self.delta.render())
    }
}

/// Pointed at `f1_ab`.
pub fn pointed_tlj<S: Scalar>(params: &TljParams<S>) -> Result<PointedSpec<S>> {
    params.check()?;
    let spec = CategorySpec::new(PointedTljRules { delta: params.delta.clone() });
    let u = PointedTljRules::<S>::irr(1, 0, 1);
    PointedSpec::new(&spec, ZeroCell::new("a"), ZeroCell::new("b"), Bundle::single(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn rejects_small_delta() {
        assert!(matches!(TljParams::new(1.5f64), Err(Error::Parameter(_))));
        assert!(TljParams::new(2.0f64).is_ok());
    }

    #[test]
    fn integer_dims_at_two() {
        let dims = chebyshev_dims(&Rational64::from_integer(2), 6);
        let expected: Vec<Rational64> = (1..=7).map(Rational64::from_integer).collect();
        assert_eq!(dims, expected);
    }

    #[test]
    fn labels_round_trip() {
        let spec = tlj_spec(&TljParams::new(2.5f64).unwrap()).unwrap();
        assert!(spec.irreducible("f12").is_ok());
        assert!(spec.irreducible("f012").is_err());
        assert!(spec.irreducible("g1").is_err());
        let p = pointed_tlj(&TljParams::new(2.5f64).unwrap()).unwrap();
        assert!(p.ambient.irreducible("f1_ab").is_ok());
        assert!(p.ambient.irreducible("f1_aa").is_err());
        assert!(p.ambient.irreducible("f2_ab").is_err());
        let f3 = p.ambient.irreducible("f3_ba").unwrap();
        assert_eq!(p.ambient.dual(&f3).unwrap().label(), "f3_ab");
    }

    #[test]
    fn two_box_fusion() {
        let spec = tlj_spec(&TljParams::new(2.0f64).unwrap()).unwrap();
        let f1 = spec.irreducible("f1").unwrap();
        let row = spec.fuse_pair(&f1, &f1).unwrap();
        assert_eq!(row.to_string(), "f0 ⊕ f2");
    }
}
