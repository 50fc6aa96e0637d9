//! Graded connected algebras and the cosimplicial module `C^n(R) = R^{⊗(n+1)}`
//! with unit-insertion cofaces and multiplication codegeneracies.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cosimplicial::{normalized_span, CosimplicialAbelianGroup};
use crate::error::{Error, Result};
use crate::linalg::{CoefficientRing, IntegerMatrix};

/// A finite-dimensional graded algebra over a field, on a homogeneous basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: CoefficientRing,
    names: Vec<String>,
    degrees: Vec<usize>,
    unit: usize,
    /// `products[a][b]` = coordinates of `e_a e_b`.
    products: Vec<Vec<Vec<BigInt>>>,
    /// Products of total degree above the top degree were dropped.
    truncated: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeJson {
    deg: usize,
    basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductJson {
    a: String,
    b: String,
    value: Vec<(i64, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraJson {
    field: String,
    degrees: Vec<DegreeJson>,
    unit: String,
    products: Vec<ProductJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    truncated: bool,
}

impl GradedAlgebra {
    /// Validates field, unit, grading and associativity. Products with the
    /// unit that are not listed are filled in by unitality.
    pub fn new(
        field: CoefficientRing,
        basis: Vec<(String, usize)>,
        unit: &str,
        products: &[(String, String, Vec<(i64, String)>)],
        truncated: bool,
    ) -> Result<Self> {
        if !field.is_field() {
            return Err(Error::FieldRequired);
        }
        let dim = basis.len();
        let mut index = HashMap::new();
        for (i, (name, _)) in basis.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("basis element `{name}` listed twice")));
            }
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| Error::InvalidInput(format!("unknown basis element `{n}`")));
        let unit = lookup(unit)?;
        let (names, degrees): (Vec<String>, Vec<usize>) = basis.into_iter().unzip();
        if degrees[unit] != 0 {
            return Err(Error::InvalidInput("the unit must have degree 0".into()));
        }
        if degrees.iter().filter(|&&d| d == 0).count() != 1 {
            return Err(Error::InvalidInput("the algebra is not connected: degree 0 must be spanned by the unit".into()));
        }
        let domain = field.domain();
        let mut table: Vec<Vec<Option<Vec<BigInt>>>> = vec![vec![None; dim]; dim];
        for (a, b, value) in products {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if table[ia][ib].is_some() {
                return Err(Error::InvalidInput(format!("product {a}*{b} listed twice")));
            }
            let mut v = vec![BigInt::zero(); dim];
            for (c, name) in value {
                let j = lookup(name)?;
                v[j] += BigInt::from(*c);
            }
            let v: Vec<BigInt> = v.into_iter().map(|x| domain.reduce(x)).collect();
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() && degrees[j] != degrees[ia] + degrees[ib] {
                    return Err(Error::InvalidInput(format!("product {a}*{b} is not homogeneous of degree {}", degrees[ia] + degrees[ib])));
                }
            }
            table[ia][ib] = Some(v);
        }
        let basis_vec = |j: usize| {
            let mut v = vec![BigInt::zero(); dim];
            v[j] = BigInt::one();
            v
        };
        for x in 0..dim {
            for (a, b) in [(unit, x), (x, unit)] {
                match &table[a][b] {
                    Some(v) if *v != basis_vec(x) => {
                        return Err(Error::InvalidInput(format!("unit law fails for `{}`", names[x])));
                    }
                    Some(_) => {}
                    None => table[a][b] = Some(basis_vec(x)),
                }
            }
        }
        let products: Vec<Vec<Vec<BigInt>>> =
            table.into_iter().map(|row| row.into_iter().map(|v| v.unwrap_or_else(|| vec![BigInt::zero(); dim])).collect()).collect();
        let alg = Self { field, names, degrees, unit, products, truncated };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let left = alg.multiply(&alg.multiply(&basis_vec(a), &basis_vec(b)), &basis_vec(c));
                    let right = alg.multiply(&basis_vec(a), &alg.multiply(&basis_vec(b), &basis_vec(c)));
                    if left != right {
                        return Err(Error::InvalidInput(format!(
                            "associativity fails on ({}, {}, {})",
                            alg.names[a], alg.names[b], alg.names[c]
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// `K[ε]/(ε²)` with `|ε| = deg`.
    pub fn dual_numbers(field: CoefficientRing, deg: usize) -> Result<Self> {
        if deg == 0 {
            return Err(Error::InvalidInput("ε must have positive degree".into()));
        }
        Self::new(field, vec![("1".into(), 0), ("e".into(), deg)], "1", &[], false)
    }

    /// The ground field in degree 0.
    pub fn ground(field: CoefficientRing) -> Result<Self> {
        Self::new(field, vec![("1".into(), 0)], "1", &[], false)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: AlgebraJson = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("graded algebra: {e}")))?;
        let field = CoefficientRing::parse(&j.field)?;
        let mut basis = Vec::new();
        for d in &j.degrees {
            basis.extend(d.basis.iter().map(|n| (n.clone(), d.deg)));
        }
        let products: Vec<(String, String, Vec<(i64, String)>)> = j.products.into_iter().map(|p| (p.a, p.b, p.value)).collect();
        Self::new(field, basis, &j.unit, &products, j.truncated)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut by_degree: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (n, &d) in self.names.iter().zip(&self.degrees) {
            by_degree.entry(d).or_default().push(n.clone());
        }
        let mut products = Vec::new();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let v = &self.products[a][b];
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let value: Vec<(i64, String)> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (i64::try_from(x.clone()).expect("coefficient fits"), self.names[j].clone()))
                    .collect();
                products.push(ProductJson { a: self.names[a].clone(), b: self.names[b].clone(), value });
            }
        }
        let j = AlgebraJson {
            field: self.field.to_string(),
            degrees: by_degree.into_iter().map(|(deg, basis)| DegreeJson { deg, basis }).collect(),
            unit: self.names[self.unit].clone(),
            products,
            truncated: self.truncated,
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn field(&self) -> CoefficientRing {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `dim R^i` for `i = 0..=top`.
    pub fn degree_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.top_degree() + 1];
        for &d in &self.degrees {
            dims[d] += 1;
        }
        dims
    }

    /// `R^i = 0` for `0 < i < k`.
    pub fn is_connected_below(&self, k: usize) -> bool {
        self.degrees.iter().all(|&d| d == 0 || d >= k)
    }

    pub fn product(&self, a: usize, b: usize) -> &[BigInt] {
        &self.products[a][b]
    }

    pub fn multiply(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xa * yb;
                for (j, p) in self.products[a][b].iter().enumerate() {
                    if !p.is_zero() {
                        out[j] += &c * p;
                    }
                }
            }
        }
        out.into_iter().map(|v| self.field.domain().reduce(v)).collect()
    }

    /// Basis tuples of `R^{⊗(n+1)}` in lexicographic order.
    pub fn tensor_basis(&self, n: usize) -> Vec<Vec<usize>> {
        let d = self.dim();
        let count = d.pow(n as u32 + 1);
        (0..count)
            .map(|mut idx| {
                let mut t = vec![0; n + 1];
                for slot in t.iter_mut().rev() {
                    *slot = idx % d;
                    idx /= d;
                }
                t
            })
            .collect()
    }

    pub fn weight(&self, tuple: &[usize]) -> usize {
        tuple.iter().map(|&x| self.degrees[x]).sum()
    }

    fn tensor_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.dim() + x)
    }
}

/// `C^n(R)` for `n = 0..=n_max`.
pub fn bar_cosimplicial(r: &GradedAlgebra, n_max: usize) -> Result<CosimplicialAbelianGroup> {
    let d = r.dim();
    let size = |n: usize| d.pow(n as u32 + 1);
    let sizes: Vec<usize> = (0..=n_max).map(size).collect();
    let mut cofaces = vec![Vec::new()];
    for n in 1..=n_max {
        let src = r.tensor_basis(n - 1);
        let mut maps = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut m = IntegerMatrix::zeros(size(n), size(n - 1));
            for (col, t) in src.iter().enumerate() {
                let mut u = t.clone();
                u.insert(i, r.unit);
                m[(r.tensor_index(&u), col)] = BigInt::one();
            }
            maps.push(m);
        }
        cofaces.push(maps);
    }
    let mut codegeneracies = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let src = r.tensor_basis(n + 1);
        let mut maps = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut m = IntegerMatrix::zeros(size(n), size(n + 1));
            for (col, t) in src.iter().enumerate() {
                for (j, c) in r.product(t[i], t[i + 1]).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut u = t.clone();
                    u.remove(i + 1);
                    u[i] = j;
                    m[(r.tensor_index(&u), col)] += c;
                }
            }
            maps.push(m);
        }
        codegeneracies.push(maps);
    }
    CosimplicialAbelianGroup::free(r.field, &sizes, cofaces, codegeneracies)
}

/// Weight-`m` summands `C^{*m}` for `m = 0..=m_max`. Fails if a structure map
/// of `c` mixes weights.
pub fn grading_split(r: &GradedAlgebra, c: &CosimplicialAbelianGroup, m_max: usize) -> Result<Vec<CosimplicialAbelianGroup>> {
    let top = c.top();
    let weights: Vec<Vec<usize>> = (0..=top).map(|n| r.tensor_basis(n).iter().map(|t| r.weight(t)).collect()).collect();
    if weights.iter().zip(c.level_sizes()).any(|(w, s)| w.len() != s) {
        return Err(Error::DimensionMismatch("cosimplicial object is not C*(R) for this algebra".into()));
    }
    let check = |m: &IntegerMatrix, src: usize, dst: usize| -> Result<()> {
        for i in 0..m.rows() {
            for (j, x) in m.row(i).iter().enumerate() {
                if !x.is_zero() && weights[dst][i] != weights[src][j] {
                    return Err(Error::NotWellDefined(format!("structure map A^{src} -> A^{dst} does not preserve weight")));
                }
            }
        }
        Ok(())
    };
    for n in 1..=top {
        for i in 0..=n {
            check(c.coface(n, i), n - 1, n)?;
        }
    }
    for n in 0..top {
        for i in 0..=n {
            check(c.codegeneracy(n, i), n + 1, n)?;
        }
    }
    (0..=m_max)
        .map(|m| {
            let idx: Vec<Vec<usize>> = weights.iter().map(|w| (0..w.len()).filter(|&j| w[j] == m).collect()).collect();
            let restrict = |mat: &IntegerMatrix, src: usize, dst: usize| mat.select_rows(&idx[dst]).select_columns(&idx[src]);
            let cofaces = (0..=top).map(|n| if n == 0 { vec![] } else { (0..=n).map(|i| restrict(c.coface(n, i), n - 1, n)).collect() }).collect();
            let codegeneracies = (0..top).map(|n| (0..=n).map(|i| restrict(c.codegeneracy(n, i), n + 1, n)).collect()).collect();
            let sizes: Vec<usize> = idx.iter().map(Vec::len).collect();
            CosimplicialAbelianGroup::free(c.ring(), &sizes, cofaces, codegeneracies)
        })
        .collect()
}

/// Table of `dim N^n C^{*m}` with the vanishing verdict below the line `m < kn`.
#[derive(Clone, Debug, Serialize)]
pub struct BarReport {
    pub k: usize,
    pub n_max: usize,
    pub m_max: usize,
    /// `table[n][m] = dim N^n C^{*m}`.
    pub table: Vec<Vec<usize>>,
    /// `dim N^n C^*(R)` by kernel intersection on the whole level.
    pub kernel_dims: Vec<usize>,
    /// `(dim R - 1)^n · dim R`.
    pub formula_dims: Vec<usize>,
    /// Cells `(n, m)` with `m < kn` and nonzero `N`.
    pub failures: Vec<(usize, usize)>,
}

impl BarReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.kernel_dims == self.formula_dims
    }
}

/// Computes `dim N^n C^{*m}` for `n <= n_max`, `m <= m_max` and checks that it
/// vanishes whenever `m < kn`.
pub fn bar_vanishing_check(r: &GradedAlgebra, k: usize, n_max: usize, m_max: usize) -> Result<BarReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if !r.is_connected_below(k) {
        return Err(Error::HypothesisViolated(format!("the algebra is not {}-connected: it has classes in degrees 1..{}", k - 1, k - 1)));
    }
    if r.is_truncated() && m_max > r.top_degree() {
        return Err(Error::TruncationExceeded { needed: m_max, available: r.top_degree() });
    }
    let c = bar_cosimplicial(r, n_max)?;
    let parts = grading_split(r, &c, m_max)?;
    let mut table = vec![vec![0; m_max + 1]; n_max + 1];
    for (m, part) in parts.iter().enumerate() {
        for (n, row) in table.iter_mut().enumerate() {
            row[m] = normalized_span(part, n).rank();
        }
    }
    let kernel_dims = (0..=n_max).map(|n| normalized_span(&c, n).rank()).collect();
    let formula_dims = (0..=n_max).map(|n| (r.dim() - 1).pow(n as u32) * r.dim()).collect();
    let mut failures = Vec::new();
    for (n, row) in table.iter().enumerate() {
        for (m, &v) in row.iter().enumerate() {
            if m < k * n && v != 0 {
                failures.push((n, m));
            }
        }
    }
    Ok(BarReport { k, n_max, m_max, table, kernel_dims, formula_dims, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosimplicial::validate;

    fn q() -> CoefficientRing {
        CoefficientRing::Rationals
    }

    fn vec_of(c: &IntegerMatrix, col: usize) -> Vec<i64> {
        c.column(col).iter().map(|x| i64::try_from(x.clone()).unwrap()).collect()
    }

    #[test]
    fn ground_field_gives_constant_object() {
        let r = GradedAlgebra::ground(q()).unwrap();
        let c = bar_cosimplicial(&r, 3).unwrap();
        assert_eq!(c.level_sizes(), vec![1, 1, 1, 1]);
        assert!(validate(&c).is_valid());
        for n in 1..=3 {
            for i in 0..=n {
                assert_eq!(c.coface(n, i), &IntegerMatrix::identity(1));
            }
        }
    }

    #[test]
    fn dual_numbers_structure_maps() {
        let r = GradedAlgebra::dual_numbers(q(), 1).unwrap();
        let c = bar_cosimplicial(&r, 3).unwrap();
        assert_eq!(c.level_sizes(), vec![2, 4, 8, 16]);
        assert!(validate(&c).is_valid());
        // basis of C^1: (1,1), (1,e), (e,1), (e,e)
        assert_eq!(vec_of(c.codegeneracy(0, 0), 3), vec![0, 0]);
        assert_eq!(vec_of(c.codegeneracy(0, 0), 1), vec![0, 1]);
        assert_eq!(vec_of(c.coface(1, 1), 1), vec![0, 0, 1, 0]);
        assert_eq!(vec_of(c.coface(1, 0), 1), vec![0, 1, 0, 0]);
    }

    #[test]
    fn weights_partition_levels() {
        let r = GradedAlgebra::dual_numbers(q(), 1).unwrap();
        let c = bar_cosimplicial(&r, 3).unwrap();
        let parts = grading_split(&r, &c, 4).unwrap();
        assert_eq!(parts[1].level_sizes()[1], 2);
        for n in 0..=3 {
            assert_eq!(parts.iter().map(|p| p.level_sizes()[n]).sum::<usize>(), c.level_sizes()[n]);
        }
        assert!(parts.iter().all(|p| validate(p).is_valid()));
        let w0 = &parts[0];
        assert_eq!(w0.level_sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn vanishing_for_dual_numbers() {
        let r = GradedAlgebra::dual_numbers(q(), 1).unwrap();
        let rep = bar_vanishing_check(&r, 1, 3, 4).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.table[2], vec![0, 0, 1, 1, 0]);
        assert_eq!(rep.kernel_dims, vec![2, 2, 2, 2]);
        let r2 = GradedAlgebra::dual_numbers(CoefficientRing::PrimeField(2), 2).unwrap();
        let rep = bar_vanishing_check(&r2, 2, 2, 4).unwrap();
        assert_eq!(rep.table[1][1], 0);
        assert_eq!(rep.table[2][3], 0);
        assert!(rep.passed());
    }

    #[test]
    fn connectivity_is_enforced() {
        let r = GradedAlgebra::dual_numbers(q(), 1).unwrap();
        assert!(matches!(bar_vanishing_check(&r, 2, 2, 2), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn invalid_algebras_are_rejected() {
        let basis = vec![("1".to_string(), 0), ("x".to_string(), 1), ("y".to_string(), 2)];
        let bad_grading = [("x".to_string(), "x".to_string(), vec![(1, "x".to_string())])];
        assert!(GradedAlgebra::new(q(), basis.clone(), "1", &bad_grading, false).is_err());
        assert!(matches!(GradedAlgebra::new(CoefficientRing::Integers, basis.clone(), "1", &[], false), Err(Error::FieldRequired)));
        let two_units = vec![("1".to_string(), 0), ("u".to_string(), 0)];
        assert!(GradedAlgebra::new(q(), two_units, "1", &[], false).is_err());
        let ok = [("x".to_string(), "x".to_string(), vec![(1, "y".to_string())])];
        let r = GradedAlgebra::new(q(), basis, "1", &ok, false).unwrap();
        assert_eq!(r.degree_dims(), vec![1, 1, 1]);
    }

    #[test]
    fn json_round_trip() {
        let r = GradedAlgebra::dual_numbers(CoefficientRing::PrimeField(3), 2).unwrap();
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert_eq!(GradedAlgebra::from_json(&text).unwrap(), r);
        assert!(GradedAlgebra::from_json("{\"field\": \"Q\"}").is_err());
    }
}
