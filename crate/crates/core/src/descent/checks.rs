use std::sync::Arc;

use serde::Serialize;

use crate::bar::{bar_cosimplicial, grading_split, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{CoefficientRing, FgAbelianGroup};
use crate::sset::{cohomology_with_coeffs, cohomology_with_ring, product_power, FiniteSimplicialSet, SpaceCohomology};

/// `H^*(S; A)` checked against `A` in degree 0 and zero in degrees `1..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub coefficients: String,
    pub groups: Vec<FgAbelianGroup>,
    pub passed: bool,
}

/// Whether `S` is cohomologically `(k-1)`-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityVerdict {
    pub k: usize,
    /// `H^0(S; Z) .. H^k(S; Z)` as far as the cells determine them.
    pub integral: Vec<FgAbelianGroup>,
    pub spot_checks: Vec<SpotCheck>,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Checks `H^0(S;Z) = Z`, `H^i(S;Z) = 0` for `0 < i < k` and `H^k(S;Z)`
/// torsion-free, which together force `H^0(S;A) = A` and `H^i(S;A) = 0` for
/// `0 < i < k` and every `A`. Each group in `spot` is also checked directly.
pub fn connectivity_check(s: &FiniteSimplicialSet, k: usize, spot: &[FgAbelianGroup]) -> ConnectivityVerdict {
    let mut failures = Vec::new();
    let integral = match SpaceCohomology::new(s, CoefficientRing::Integers, Some(k)) {
        Ok(h) => (0..=k).map(|q| h.subquotient(q).group()).collect(),
        Err(e) => {
            failures.push(format!("cannot determine H^{k}: {e}"));
            Vec::new()
        }
    };
    for (i, g) in integral.iter().enumerate() {
        if i == 0 && *g != FgAbelianGroup::free(1) {
            failures.push(format!("H^0(S;Z) = {g}, expected Z"));
        } else if i > 0 && i < k && !g.is_zero() {
            failures.push(format!("H^{i}(S;Z) = {g}, expected 0"));
        } else if i == k && k > 0 && !g.torsion.is_empty() {
            failures.push(format!("H^{k}(S;Z) = {g} has torsion"));
        }
    }
    let mut spot_checks = Vec::new();
    for a in spot {
        let (groups, passed) = match cohomology_with_coeffs(s, a) {
            Ok(hs) => {
                let ok = hs.first().is_some_and(|h0| h0 == a) && (1..k).all(|i| hs.get(i).map_or(s.is_complete(), FgAbelianGroup::is_zero));
                (hs.into_iter().take(k.max(1)).collect(), ok)
            }
            Err(_) => (Vec::new(), false),
        };
        if !passed {
            failures.push(format!("H^*(S;{a}) = ({}) is not {a} in degree 0 and zero below degree {k}", join(&groups)));
        }
        spot_checks.push(SpotCheck { coefficients: a.to_string(), groups, passed });
    }
    let passed = failures.is_empty();
    ConnectivityVerdict { k, integral, spot_checks, failures, passed }
}

fn join(groups: &[FgAbelianGroup]) -> String {
    groups.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// One degree of `0 -> H^i(S;Z)⊗A -> H^i(S;A) -> T -> 0` with both candidates for `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UctDegree {
    pub i: usize,
    pub integral: FgAbelianGroup,
    pub tensor: FgAbelianGroup,
    pub middle: FgAbelianGroup,
    /// `Tor(H^{i-1}(S;Z), A)`.
    pub tor_lower: FgAbelianGroup,
    /// `Tor(H^{i+1}(S;Z), A)`.
    pub tor_upper: FgAbelianGroup,
    pub lower_balances: bool,
    pub upper_balances: bool,
    /// The middle term is isomorphic to the direct sum of the outer terms (upper variant).
    pub upper_splits: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UctReport {
    pub coefficients: String,
    pub degrees: Vec<UctDegree>,
    /// Degrees where the two variants disagree.
    pub distinguishing: Vec<usize>,
    /// `"upper"`, `"lower"`, `"both"` or `"neither"`: which variant balances in every degree.
    pub convention: String,
}

impl UctReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.upper_balances)
    }
}

fn balances(left: &FgAbelianGroup, middle: &FgAbelianGroup, right: &FgAbelianGroup) -> bool {
    middle.rank == left.rank + right.rank && middle.torsion_order() == left.torsion_order() * right.torsion_order()
}

/// Compares `H^i(S;A)` with the outer terms of both index conventions.
pub fn uct_verify(s: &FiniteSimplicialSet, a: &FgAbelianGroup) -> Result<UctReport> {
    let integral = cohomology_with_ring(s, CoefficientRing::Integers)?;
    let middle = cohomology_with_coeffs(s, a)?;
    let top = integral.len() - 1;
    let last = if s.is_complete() { top } else { top.saturating_sub(1) };
    let h = |i: usize| integral.get(i).cloned().unwrap_or_default();
    let mut degrees = Vec::new();
    for i in 0..=last {
        let tensor = h(i).tensor(a);
        let tor_lower = if i == 0 { FgAbelianGroup::zero() } else { h(i - 1).tor(a) };
        let tor_upper = h(i + 1).tor(a);
        let m = middle[i].clone();
        degrees.push(UctDegree {
            i,
            integral: h(i),
            lower_balances: balances(&tensor, &m, &tor_lower),
            upper_balances: balances(&tensor, &m, &tor_upper),
            upper_splits: m == tensor.direct_sum(&tor_upper),
            tensor,
            middle: m,
            tor_lower,
            tor_upper,
        });
    }
    let distinguishing = degrees.iter().filter(|d| d.lower_balances != d.upper_balances).map(|d| d.i).collect();
    let upper = degrees.iter().all(|d| d.upper_balances);
    let lower = degrees.iter().all(|d| d.lower_balances);
    let convention = match (upper, lower) {
        (true, true) => "both",
        (true, false) => "upper",
        (false, true) => "lower",
        (false, false) => "neither",
    };
    Ok(UctReport { coefficients: a.to_string(), degrees, distinguishing, convention: convention.into() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunnethCell {
    pub n: usize,
    pub m: usize,
    /// `dim H^m(S^{n+1}; K)`.
    pub space: usize,
    /// `Σ Π dim H^{i_s}(S; K)` over compositions `m = i_0 + ... + i_n`.
    pub compositions: usize,
    /// `dim C^{n,m}` of the bar construction, when an algebra was given.
    pub bar: Option<usize>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunnethReport {
    pub n_max: usize,
    pub m_max: usize,
    /// `dim H^i(S; K)` for `i <= m_max`.
    pub cohomology: Vec<usize>,
    pub cells: Vec<KunnethCell>,
}

impl KunnethReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.agrees)
    }
}

/// `dim H^m(S^{n+1}; K)` against the composition count and, given the
/// cohomology algebra, against `dim C^{n,m}` of its bar construction.
pub fn kunneth_dim_check(
    s: &Arc<FiniteSimplicialSet>,
    field: CoefficientRing,
    n_max: usize,
    m_max: usize,
    algebra: Option<&GradedAlgebra>,
) -> Result<KunnethReport> {
    if !field.is_field() {
        return Err(Error::FieldRequired);
    }
    let dim = |h: &SpaceCohomology, q: usize| h.subquotient(q).group().rank;
    let hs = SpaceCohomology::new(s, field, Some(m_max))?;
    let cohomology: Vec<usize> = (0..=m_max).map(|q| dim(&hs, q)).collect();
    let bar_parts = match algebra {
        Some(r) => {
            if r.field() != field {
                return Err(Error::InvalidInput("the algebra is over a different field".into()));
            }
            let mut dims = r.degree_dims();
            dims.resize(dims.len().max(m_max + 1), 0);
            if dims[..=m_max] != cohomology[..] {
                return Err(Error::InvalidInput(format!(
                    "the algebra has degree dimensions {:?}, but H^*(S) has {:?}",
                    r.degree_dims(),
                    cohomology
                )));
            }
            Some(grading_split(r, &bar_cosimplicial(r, n_max)?, m_max)?)
        }
        None => None,
    };
    let mut comp = vec![vec![0usize; m_max + 1]; n_max + 1];
    comp[0] = cohomology.clone();
    for n in 1..=n_max {
        for m in 0..=m_max {
            comp[n][m] = (0..=m).map(|i| cohomology[i] * comp[n - 1][m - i]).sum();
        }
    }
    let mut cells = Vec::new();
    for n in 0..=n_max {
        let power = product_power(s, n + 1, m_max + 1)?;
        let h = SpaceCohomology::new(&power.set, field, Some(m_max))?;
        for m in 0..=m_max {
            let space = dim(&h, m);
            let bar = bar_parts.as_ref().map(|parts| parts[m].level_sizes()[n]);
            let agrees = space == comp[n][m] && bar.is_none_or(|b| b == space);
            cells.push(KunnethCell { n, m, space, compositions: comp[n][m], bar, agrees });
        }
    }
    Ok(KunnethReport { n_max, m_max, cohomology, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::builtin;

    fn z(m: u64) -> FgAbelianGroup {
        FgAbelianGroup::cyclic(m)
    }

    #[test]
    fn connectivity_of_spheres_and_negatives() {
        let spot = [z(2), z(3)];
        assert!(connectivity_check(&builtin("sphere1").unwrap(), 1, &spot).passed);
        assert!(connectivity_check(&builtin("sphere2").unwrap(), 2, &spot).passed);
        assert!(connectivity_check(&builtin("point").unwrap(), 3, &spot).passed);
        let s0 = connectivity_check(&builtin("s0").unwrap(), 1, &spot);
        assert!(!s0.passed);
        assert!(s0.failures[0].contains("H^0(S;Z) = Z^2"), "{:?}", s0.failures);
        let rp2 = connectivity_check(&builtin("rp2").unwrap(), 2, &spot);
        assert!(!rp2.passed);
        assert!(rp2.failures.iter().any(|f| f.contains("torsion")));
        assert!(!rp2.spot_checks[0].passed);
        assert!(rp2.spot_checks[1].passed);
        // sphere1 is not 1-connected
        assert!(!connectivity_check(&builtin("sphere1").unwrap(), 2, &spot).passed);
    }

    #[test]
    fn uct_on_rp2_prefers_upper_index() {
        let r = uct_verify(&builtin("rp2").unwrap(), &z(2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.convention, "upper");
        let d1 = &r.degrees[1];
        assert_eq!(d1.middle, z(2));
        assert!(d1.tensor.is_zero());
        assert_eq!(d1.tor_upper, z(2));
        assert!(d1.tor_lower.is_zero());
        assert!(!d1.lower_balances);
        assert!(r.distinguishing.contains(&1));
    }

    #[test]
    fn uct_on_torsion_free_space() {
        let a = FgAbelianGroup::parse("Z^2+Z/2").unwrap();
        let r = uct_verify(&builtin("sphere2").unwrap(), &a).unwrap();
        assert_eq!(r.convention, "both");
        assert!(r.degrees.iter().all(|d| d.middle == d.tensor && d.upper_splits));
    }

    #[test]
    fn kunneth_circle() {
        let s = Arc::new(builtin("sphere1").unwrap());
        let q = CoefficientRing::Rationals;
        let r = GradedAlgebra::dual_numbers(q, 1).unwrap();
        let rep = kunneth_dim_check(&s, q, 1, 2, Some(&r)).unwrap();
        assert!(rep.passed());
        let cell = |n, m| rep.cells.iter().find(|c| c.n == n && c.m == m).unwrap().space;
        assert_eq!((cell(1, 0), cell(1, 1), cell(1, 2)), (1, 2, 1));
        let wrong = GradedAlgebra::dual_numbers(q, 2).unwrap();
        assert!(kunneth_dim_check(&s, q, 1, 2, Some(&wrong)).is_err());
    }
}
