//! Cosimplicial abelian groups: identity checking, the associated cochain
//! complex, normalization, the degenerate-image quotient and the Dold–Kan
//! inverse functor.

mod dold_kan;

pub use dold_kan::{
    dold_kan_gamma, dold_kan_gamma_to, dold_kan_roundtrip, gamma_morphism, surjections, DoldKanDegree, DoldKanReport, Surjection,
};

use std::fmt;

use serde::Serialize;

use crate::complexes::{CochainComplex, Term};
use crate::error::{Error, Result};
use crate::linalg::{CoefficientRing, FgAbelianGroup, IntegerMatrix, Lattice, Subquotient};

/// A structure map, named by its target level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StructureMap {
    /// `δ^i: A^{level-1} -> A^level`.
    Coface { level: usize, i: usize },
    /// `s^i: A^{level+1} -> A^level`.
    Codegeneracy { level: usize, i: usize },
}

impl fmt::Display for StructureMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureMap::Coface { level, i } => write!(f, "δ^{i}: A^{} -> A^{level}", level - 1),
            StructureMap::Codegeneracy { level, i } => write!(f, "s^{i}: A^{} -> A^{level}", level + 1),
        }
    }
}

/// One failed identity, with the maps on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub maps: Vec<StructureMap>,
}

impl Violation {
    pub fn involves(&self, m: StructureMap) -> bool {
        self.maps.contains(&m)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.identity)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Levels `A^0 .. A^L`, each a subquotient `span / relations` of a free module
/// (the whole module with no relations for free levels).
#[derive(Clone, Debug)]
pub struct CosimplicialAbelianGroup {
    ring: CoefficientRing,
    levels: Vec<Term>,
    /// `cofaces[n][i] = δ^i: A^{n-1} -> A^n`; `cofaces[0]` is empty.
    cofaces: Vec<Vec<IntegerMatrix>>,
    /// `codegeneracies[n][i] = s^i: A^{n+1} -> A^n`, for `n < L`.
    codegeneracies: Vec<Vec<IntegerMatrix>>,
}

impl CosimplicialAbelianGroup {
    /// Checks shapes only; see [`validate`] for the identities.
    pub fn new(
        ring: CoefficientRing,
        levels: Vec<Term>,
        cofaces: Vec<Vec<IntegerMatrix>>,
        codegeneracies: Vec<Vec<IntegerMatrix>>,
    ) -> Result<Self> {
        let l = levels.len();
        if l == 0 {
            return Err(Error::InvalidInput("a cosimplicial object needs level 0".into()));
        }
        if cofaces.len() != l || codegeneracies.len() != l - 1 {
            return Err(Error::DimensionMismatch(format!(
                "{l} levels need {l} coface lists and {} codegeneracy lists",
                l - 1
            )));
        }
        let domain = ring.domain();
        let size = |n: usize| levels[n].ambient();
        for (n, maps) in cofaces.iter().enumerate() {
            let expected = if n == 0 { 0 } else { n + 1 };
            if maps.len() != expected {
                return Err(Error::DimensionMismatch(format!("level {n} needs {expected} cofaces")));
            }
            for (i, m) in maps.iter().enumerate() {
                if m.rows() != size(n) || m.cols() != size(n - 1) {
                    return Err(Error::DimensionMismatch(format!("δ^{i} into level {n} has the wrong shape")));
                }
            }
        }
        for (n, maps) in codegeneracies.iter().enumerate() {
            if maps.len() != n + 1 {
                return Err(Error::DimensionMismatch(format!("level {n} needs {} codegeneracies", n + 1)));
            }
            for (i, m) in maps.iter().enumerate() {
                if m.rows() != size(n) || m.cols() != size(n + 1) {
                    return Err(Error::DimensionMismatch(format!("s^{i} into level {n} has the wrong shape")));
                }
            }
        }
        let reduce = |v: Vec<Vec<IntegerMatrix>>| -> Vec<Vec<IntegerMatrix>> {
            v.into_iter().map(|ms| ms.into_iter().map(|m| m.reduced(domain)).collect()).collect()
        };
        Ok(Self { ring, levels, cofaces: reduce(cofaces), codegeneracies: reduce(codegeneracies) })
    }

    /// All levels free of the given ranks.
    pub fn free(
        ring: CoefficientRing,
        sizes: &[usize],
        cofaces: Vec<Vec<IntegerMatrix>>,
        codegeneracies: Vec<Vec<IntegerMatrix>>,
    ) -> Result<Self> {
        let levels = sizes.iter().map(|&s| Term::free(ring, s)).collect();
        Self::new(ring, levels, cofaces, codegeneracies)
    }

    /// Every level equal to `ring^rank`, every structure map the identity.
    pub fn constant(ring: CoefficientRing, rank: usize, top: usize) -> Self {
        let id = IntegerMatrix::identity(rank);
        let cofaces = (0..=top).map(|n| if n == 0 { vec![] } else { vec![id.clone(); n + 1] }).collect();
        let codegeneracies = (0..top).map(|n| vec![id.clone(); n + 1]).collect();
        Self::free(ring, &vec![rank; top + 1], cofaces, codegeneracies).expect("constant object is well formed")
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    /// Highest level `L`.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Term {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Term] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Term::ambient).collect()
    }

    pub fn level_group(&self, n: usize) -> Result<FgAbelianGroup> {
        self.levels[n].group(self.ring)
    }

    /// `δ^i: A^{n-1} -> A^n`.
    pub fn coface(&self, n: usize, i: usize) -> &IntegerMatrix {
        &self.cofaces[n][i]
    }

    /// `s^i: A^{n+1} -> A^n`.
    pub fn codegeneracy(&self, n: usize, i: usize) -> &IntegerMatrix {
        &self.codegeneracies[n][i]
    }

    /// Levels `0..=top`.
    pub fn truncate(&self, top: usize) -> Self {
        let top = top.min(self.top());
        Self {
            ring: self.ring,
            levels: self.levels[..=top].to_vec(),
            cofaces: self.cofaces[..=top].to_vec(),
            codegeneracies: self.codegeneracies[..top].to_vec(),
        }
    }

    fn map(&self, m: StructureMap) -> &IntegerMatrix {
        match m {
            StructureMap::Coface { level, i } => self.coface(level, i),
            StructureMap::Codegeneracy { level, i } => self.codegeneracy(level, i),
        }
    }

    fn source(m: StructureMap) -> usize {
        match m {
            StructureMap::Coface { level, .. } => level - 1,
            StructureMap::Codegeneracy { level, .. } => level + 1,
        }
    }

    fn target(m: StructureMap) -> usize {
        match m {
            StructureMap::Coface { level, .. } | StructureMap::Codegeneracy { level, .. } => level,
        }
    }

    /// Composite of maps applied right to left, as an ambient matrix.
    fn composite(&self, maps: &[StructureMap]) -> IntegerMatrix {
        let mut it = maps.iter().rev();
        let first = it.next().expect("nonempty composite");
        let mut m = self.map(*first).clone();
        for x in it {
            m = self.map(*x).mul(&m);
        }
        m
    }

    /// Whether `f` and `g` agree on `A^source` modulo the relations of `A^target`.
    fn agree(&self, f: &IntegerMatrix, g: &IntegerMatrix, source: usize, target: usize) -> bool {
        let diff = f.sub(g);
        self.levels[target].relations.contains_lattice(&self.levels[source].span.image(&diff))
    }
}

/// Every violated cosimplicial identity, and every structure map that fails to
/// be a homomorphism of the level subquotients.
pub fn validate(a: &CosimplicialAbelianGroup) -> ValidationReport {
    use StructureMap::{Codegeneracy as S, Coface as D};
    let mut violations = Vec::new();
    let l = a.top();
    let mut all_maps = Vec::new();
    for n in 1..=l {
        all_maps.extend((0..=n).map(|i| D { level: n, i }));
    }
    for n in 0..l {
        all_maps.extend((0..=n).map(|i| S { level: n, i }));
    }
    for &m in &all_maps {
        let (s, t) = (CosimplicialAbelianGroup::source(m), CosimplicialAbelianGroup::target(m));
        let mat = a.map(m);
        if !a.levels[t].span.contains_lattice(&a.levels[s].span.image(mat))
            || !a.levels[t].relations.contains_lattice(&a.levels[s].relations.image(mat))
        {
            violations.push(Violation { identity: format!("{m} is not a homomorphism"), maps: vec![m] });
        }
    }
    let mut check = |name: String, lhs: Vec<StructureMap>, rhs: Vec<StructureMap>, source: usize, target: usize| {
        let f = a.composite(&lhs);
        let g = if rhs.is_empty() { IntegerMatrix::identity(a.levels[source].ambient()) } else { a.composite(&rhs) };
        if !a.agree(&f, &g, source, target) {
            let mut maps = lhs;
            maps.extend(rhs);
            violations.push(Violation { identity: name, maps });
        }
    };
    // δ^j δ^i = δ^i δ^{j-1}, i < j, on A^{n-1}
    for n in 1..l {
        for j in 1..=n + 1 {
            for i in 0..j {
                check(
                    format!("δ^{j}δ^{i} = δ^{i}δ^{} on A^{}", j - 1, n - 1),
                    vec![D { level: n + 1, i: j }, D { level: n, i }],
                    vec![D { level: n + 1, i }, D { level: n, i: j - 1 }],
                    n - 1,
                    n + 1,
                );
            }
        }
    }
    // s^j s^i = s^i s^{j+1}, i <= j, on A^{n+1}
    for n in 1..l {
        for j in 0..n {
            for i in 0..=j {
                check(
                    format!("s^{j}s^{i} = s^{i}s^{} on A^{}", j + 1, n + 1),
                    vec![S { level: n - 1, i: j }, S { level: n, i }],
                    vec![S { level: n - 1, i }, S { level: n, i: j + 1 }],
                    n + 1,
                    n - 1,
                );
            }
        }
    }
    // s^j δ^i on A^n
    for n in 0..l {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = vec![S { level: n, i: j }, D { level: n + 1, i }];
                let (name, rhs) = if i < j {
                    (format!("s^{j}δ^{i} = δ^{i}s^{} on A^{n}", j - 1), vec![D { level: n, i }, S { level: n - 1, i: j - 1 }])
                } else if i == j || i == j + 1 {
                    (format!("s^{j}δ^{i} = id on A^{n}"), vec![])
                } else {
                    (format!("s^{j}δ^{i} = δ^{}s^{j} on A^{n}", i - 1), vec![D { level: n, i: i - 1 }, S { level: n - 1, i: j }])
                };
                check(name, lhs, rhs, n, n);
            }
        }
    }
    ValidationReport { violations }
}

/// `d^n = Σ_{i=0}^{n+1} (-1)^i δ^i: A^n -> A^{n+1}`.
pub fn coboundary(a: &CosimplicialAbelianGroup, n: usize) -> IntegerMatrix {
    let mut d = IntegerMatrix::zeros(a.levels[n + 1].ambient(), a.levels[n].ambient());
    for i in 0..=n + 1 {
        let m = a.coface(n + 1, i);
        d = if i % 2 == 0 { d.add(m) } else { d.sub(m) };
    }
    d.reduced(a.ring.domain())
}

/// The cochain complex `(A^*, Σ (-1)^i δ^i)`.
pub fn associated_complex(a: &CosimplicialAbelianGroup) -> Result<CochainComplex> {
    let ds = (0..a.top()).map(|n| coboundary(a, n)).collect();
    CochainComplex::new(a.ring, a.levels.clone(), ds)
}

/// `N^n = ∩_{i<n} ker(s^i)` as a lattice of level-`n` representatives.
pub fn normalized_span(a: &CosimplicialAbelianGroup, n: usize) -> Lattice {
    let mut span = a.levels[n].span.clone();
    if n > 0 {
        for i in 0..n {
            span = span.preimage(a.codegeneracy(n - 1, i), &a.levels[n - 1].relations);
        }
    }
    span
}

/// The normalized subcomplex with the restricted differential. The top level
/// `L` uses `s^0..s^{L-1}`, all of which are available.
pub fn normalization(a: &CosimplicialAbelianGroup) -> Result<CochainComplex> {
    let terms = (0..=a.top())
        .map(|n| Term { span: normalized_span(a, n), relations: a.levels[n].relations.clone() })
        .collect();
    let ds = (0..a.top()).map(|n| coboundary(a, n)).collect();
    CochainComplex::new(a.ring, terms, ds)
}

/// `A^n / (im δ^0 + ... + im δ^{n-1})`.
pub fn degenerate_quotient(a: &CosimplicialAbelianGroup, n: usize) -> Result<FgAbelianGroup> {
    let level = &a.levels[n];
    let mut rel = level.relations.clone();
    if n > 0 {
        for i in 0..n {
            rel = rel.sum(&a.levels[n - 1].span.image(a.coface(n, i)));
        }
    }
    Ok(Subquotient::new(level.span.clone(), rel, a.ring.drops_torsion())?.group())
}

/// Degreewise groups `N^n`.
pub fn normalized_groups(a: &CosimplicialAbelianGroup) -> Result<Vec<FgAbelianGroup>> {
    (0..=a.top())
        .map(|n| {
            let sq = Subquotient::new(normalized_span(a, n), a.levels[n].relations.clone(), a.ring.drops_torsion())?;
            Ok(sq.group())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    #[test]
    fn constant_object() {
        let a = CosimplicialAbelianGroup::constant(CoefficientRing::Integers, 1, 4);
        assert!(validate(&a).is_valid());
        let c = associated_complex(&a).unwrap();
        let expected: Vec<bool> = vec![true, false, true, false, true];
        for (n, d) in c.differentials().iter().enumerate() {
            assert_eq!(d.is_zero(), expected[n]);
        }
        let h = c.cohomology().unwrap();
        assert_eq!(h[0], FgAbelianGroup::free(1));
        assert!(h[1..].iter().all(FgAbelianGroup::is_zero));
        let n = normalized_groups(&a).unwrap();
        assert_eq!(n[0], FgAbelianGroup::free(1));
        assert!(n[1..].iter().all(FgAbelianGroup::is_zero));
        assert_eq!(degenerate_quotient(&a, 0).unwrap(), FgAbelianGroup::free(1));
        assert!(degenerate_quotient(&a, 1).unwrap().is_zero());
    }

    #[test]
    fn single_level() {
        let a = CosimplicialAbelianGroup::constant(CoefficientRing::Rationals, 2, 0);
        let c = associated_complex(&a).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.cohomology().unwrap(), vec![FgAbelianGroup::free(2)]);
    }

    #[test]
    fn perturbed_coface_is_located() {
        let a = CosimplicialAbelianGroup::constant(CoefficientRing::Integers, 1, 3);
        let mut cofaces = a.cofaces.clone();
        cofaces[2][2][(0, 0)] = BigInt::from(2);
        let b = CosimplicialAbelianGroup::free(a.ring, &a.level_sizes(), cofaces, a.codegeneracies.clone()).unwrap();
        let report = validate(&b);
        assert!(!report.is_valid());
        let bad = StructureMap::Coface { level: 2, i: 2 };
        assert!(report.violations.iter().all(|v| v.involves(bad)));
    }

    #[test]
    fn gamma_of_a_point() {
        let c = CochainComplex::free(CoefficientRing::Integers, &[1], vec![]).unwrap();
        let g = dold_kan_gamma_to(&c, 3).unwrap();
        assert!(validate(&g).is_valid());
        assert_eq!(g.level_sizes(), vec![1, 1, 1, 1]);
        for n in 1..=3 {
            for i in 0..=n {
                assert_eq!(g.coface(n, i), &IntegerMatrix::identity(1));
            }
        }
    }

    #[test]
    fn gamma_of_a_degree_one_class() {
        let c = CochainComplex::free(CoefficientRing::Integers, &[0, 1], vec![IntegerMatrix::zeros(1, 0)]).unwrap();
        let g = dold_kan_gamma_to(&c, 3).unwrap();
        assert_eq!(g.level_sizes(), vec![0, 1, 2, 3]);
        assert!(validate(&g).is_valid());
    }

    #[test]
    fn normalization_of_gamma_is_the_identity_summand() {
        let d0 = IntegerMatrix::from_rows(2, &[vec![1, 2], vec![0, 3]]);
        let d1 = IntegerMatrix::from_rows(2, &[vec![0, 0]]);
        let c = CochainComplex::free(CoefficientRing::Integers, &[2, 2, 1], vec![d0, d1]).unwrap();
        let g = dold_kan_gamma(&c).unwrap();
        assert!(validate(&g).is_valid());
        let nc = normalization(&g).unwrap();
        for n in 0..=2 {
            let k = c.ambient_ranks()[n];
            let id = IntegerMatrix::identity(g.level_sizes()[n]).select_columns(&(0..k).collect::<Vec<_>>());
            let expected = Lattice::from_generators(g.ring().domain(), g.level_sizes()[n], &id);
            assert!(nc.term(n).span.same_as(&expected), "degree {n}");
            if n < 2 {
                let rows: Vec<usize> = (0..c.ambient_ranks()[n + 1]).collect();
                let cols: Vec<usize> = (0..k).collect();
                assert_eq!(nc.differential(n).select_rows(&rows).select_columns(&cols), c.differential(n).clone());
            }
        }
        assert_eq!(nc.cohomology().unwrap(), c.cohomology().unwrap());
        // the top level has no outgoing coboundary, so compare below it
        assert_eq!(associated_complex(&g).unwrap().cohomology().unwrap()[..2], c.cohomology().unwrap()[..2]);
    }
}
