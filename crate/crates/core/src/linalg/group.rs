use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::lattice::Lattice;
use super::matrix::IntegerMatrix;
use super::ring::Domain;
use super::smith::{smith_normal_form, smith_over};
use crate::error::{Error, Result};

/// `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_s` with `t_i | t_{i+1}`, `t_i >= 2`.
///
/// Over a field the torsion list is empty and `rank` is the dimension.
#[derive(Clone, Debug, Default)]
pub struct FgAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    /// Ambient vectors representing the chosen generators, torsion first.
    pub generator_lifts: Option<Vec<Vec<BigInt>>>,
}

impl PartialEq for FgAbelianGroup {
    /// Isomorphism type only; lifts are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }
}

impl Eq for FgAbelianGroup {}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, ..Self::default() }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_cyclic_factors(0, &[BigInt::from(order)])
    }

    /// Normalizes an arbitrary list of cyclic orders (entries `0` count as `Z`,
    /// entries `1` vanish) into invariant-factor form.
    pub fn from_cyclic_factors(rank: usize, orders: &[BigInt]) -> Self {
        let finite: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).map(|o| o.abs()).collect();
        let extra_free = orders.iter().filter(|o| o.is_zero()).count();
        let diag = IntegerMatrix::diagonal(finite.len(), finite.len(), &finite);
        let torsion = smith_normal_form(&diag).divisors.into_iter().filter(|d| !d.is_one()).collect();
        Self { rank: rank + extra_free, torsion, generator_lifts: None }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Orders of the generators in lift order: torsion orders, then `0` per free summand.
    pub fn orders(&self) -> Vec<BigInt> {
        self.torsion.iter().cloned().chain(std::iter::repeat(BigInt::zero()).take(self.rank)).collect()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let all: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_factors(self.rank + other.rank, &all)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut factors = Vec::new();
        for a in self.orders() {
            for b in other.orders() {
                // Z⊗Z = Z, Z⊗Z/n = Z/n, Z/m⊗Z/n = Z/gcd
                factors.push(if a.is_zero() { b.clone() } else if b.is_zero() { a.clone() } else { a.gcd(&b) });
            }
        }
        Self::from_cyclic_factors(0, &factors)
    }

    pub fn tor(&self, other: &Self) -> Self {
        let mut factors = Vec::new();
        for a in &self.torsion {
            for b in &other.torsion {
                factors.push(a.gcd(b));
            }
        }
        Self::from_cyclic_factors(0, &factors)
    }

    pub fn without_torsion(&self) -> Self {
        Self::free(self.rank)
    }

    /// Parses sums such as `0`, `Z`, `Z^2+Z/2` or `Z/4^3` (three copies of `Z/4`).
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |part: &str| Error::InvalidInput(format!("cannot parse `{part}` in group `{s}`"));
        let mut rank = 0;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "0" {
                continue;
            }
            let (base, times) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad(part))?),
                None => (part, 1),
            };
            if base == "Z" {
                rank += times;
            } else if let Some(m) = base.strip_prefix("Z/") {
                let m: u64 = m.parse().map_err(|_| bad(part))?;
                if m == 0 {
                    return Err(bad(part));
                }
                orders.extend(std::iter::repeat(BigInt::from(m)).take(times));
            } else {
                return Err(bad(part));
            }
        }
        Ok(Self::from_cyclic_factors(rank, &orders))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

pub(crate) fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FgAbelianGroup", 2)?;
        st.serialize_field("rank", &self.rank)?;
        let t: Vec<serde_json::Value> = self.torsion.iter().map(bigint_json).collect();
        st.serialize_field("torsion", &t)?;
        st.end()
    }
}

/// A subquotient `cycles / relations` of a free module, with chosen generators
/// and a coordinate map onto them.
#[derive(Clone, Debug)]
pub struct Subquotient {
    domain: Domain,
    drop_torsion: bool,
    cycles: Lattice,
    relations: Lattice,
    /// Change of coordinates on the cycle lattice adapted to the relations.
    transform: IntegerMatrix,
    /// Per adapted coordinate: divisor (`1` killed, `>1` torsion) or `0` (free).
    coordinate_orders: Vec<BigInt>,
    kept: Vec<usize>,
    lifts: Vec<Vec<BigInt>>,
}

impl Subquotient {
    /// `relations` must lie inside `cycles`.
    pub fn new(cycles: Lattice, relations: Lattice, drop_torsion: bool) -> Result<Self> {
        let domain = cycles.domain();
        let k = cycles.rank();
        let mut rel_coords = Vec::with_capacity(relations.rank());
        for col in relations.basis().columns() {
            let c = cycles
                .coordinates(&col)
                .ok_or_else(|| Error::NotWellDefined("relation outside the cycle lattice".into()))?;
            rel_coords.push(c);
        }
        let y = IntegerMatrix::from_columns(k, &rel_coords);
        let s = smith_over(domain, &y);
        let mut coordinate_orders: Vec<BigInt> = s.divisors.clone();
        coordinate_orders.resize(k, BigInt::zero());
        let kept: Vec<usize> = (0..k)
            .filter(|&j| {
                let o = &coordinate_orders[j];
                if drop_torsion {
                    o.is_zero()
                } else {
                    !o.is_one()
                }
            })
            .collect();
        let lift_basis = cycles.basis().mul(&s.u_inv).reduced(domain);
        let lifts = kept.iter().map(|&j| lift_basis.column(j)).collect();
        Ok(Self { domain, drop_torsion, cycles, relations, transform: s.u, coordinate_orders, kept, lifts })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn cycles(&self) -> &Lattice {
        &self.cycles
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn ambient(&self) -> usize {
        self.cycles.ambient()
    }

    pub fn num_generators(&self) -> usize {
        self.kept.len()
    }

    /// Generator orders in coordinate order (`0` = free).
    pub fn orders(&self) -> Vec<BigInt> {
        self.kept.iter().map(|&j| self.coordinate_orders[j].clone()).collect()
    }

    pub fn lifts(&self) -> &[Vec<BigInt>] {
        &self.lifts
    }

    pub fn group(&self) -> FgAbelianGroup {
        let orders = self.orders();
        let torsion: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).cloned().collect();
        FgAbelianGroup {
            rank: orders.len() - torsion.len(),
            torsion,
            generator_lifts: Some(self.lifts.clone()),
        }
    }

    /// Coordinates of the class of `x` on the chosen generators, reduced modulo
    /// the generator orders. `None` if `x` is not a cycle.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.cycles.coordinates(x)?;
        let adapted = self.transform.mul_vec(&c);
        Some(
            self.kept
                .iter()
                .map(|&j| {
                    let o = &self.coordinate_orders[j];
                    let v = self.domain.reduce(adapted[j].clone());
                    if o.is_zero() {
                        v
                    } else {
                        v.mod_floor(o)
                    }
                })
                .collect(),
        )
    }

    pub fn is_trivial(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn drops_torsion(&self) -> bool {
        self.drop_torsion
    }
}

/// Matrix of the map induced on subquotients by an ambient map `map`.
///
/// Verifies that generator lifts land in the target cycles and that the
/// source relations land in the target relations.
pub fn induced_map(source: &Subquotient, target: &Subquotient, map: &IntegerMatrix) -> Result<IntegerMatrix> {
    if map.cols() != source.ambient() || map.rows() != target.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "chain map is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            target.ambient(),
            source.ambient()
        )));
    }
    for col in source.relations().basis().columns() {
        if !target.relations().contains(&map.mul_vec(&col)) {
            return Err(Error::NotWellDefined("a relation maps outside the target relations".into()));
        }
    }
    let mut columns = Vec::with_capacity(source.num_generators());
    for (j, lift) in source.lifts().iter().enumerate() {
        let image = map.mul_vec(lift);
        let c = target
            .coordinates(&image)
            .ok_or_else(|| Error::NotWellDefined(format!("generator {j} maps outside the target cycles")))?;
        columns.push(c);
    }
    Ok(IntegerMatrix::from_columns(target.num_generators(), &columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn normalization_of_cyclic_factors() {
        let g = FgAbelianGroup::from_cyclic_factors(1, &[b(2), b(3), b(4), b(1)]);
        assert_eq!(g.rank, 1);
        assert_eq!(g.torsion, vec![b(2), b(12)]);
        assert_eq!(g.to_string(), "Z+Z/2+Z/12");
    }

    #[test]
    fn parse_round_trips_display() {
        for text in ["0", "Z", "Z^2+Z/2", "Z/2+Z/12", "Z^3+Z/4+Z/4"] {
            assert_eq!(FgAbelianGroup::parse(text).unwrap().to_string(), text);
        }
        assert_eq!(FgAbelianGroup::parse("Z/4^2+Z").unwrap().to_string(), "Z+Z/4+Z/4");
        assert!(FgAbelianGroup::parse("Z/0").is_err());
        assert!(FgAbelianGroup::parse("Q").is_err());
    }

    #[test]
    fn tensor_and_tor() {
        let a = FgAbelianGroup::from_cyclic_factors(1, &[b(4)]);
        let c = FgAbelianGroup::from_cyclic_factors(2, &[b(2)]);
        // (Z+Z/4)⊗(Z^2+Z/2) = Z^2 + Z/2 + (Z/4)^2 + Z/2
        let t = a.tensor(&c);
        assert_eq!(t.rank, 2);
        assert_eq!(t.torsion, vec![b(2), b(2), b(4), b(4)]);
        assert_eq!(a.tor(&c), FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn subquotient_with_torsion() {
        let d = Domain::Integers;
        let cycles = Lattice::full(d, 2);
        let rel = Lattice::from_generators(d, 2, &IntegerMatrix::from_rows(1, &[vec![2], vec![2]]));
        let sq = Subquotient::new(cycles, rel, false).unwrap();
        let g = sq.group();
        assert_eq!((g.rank, g.torsion.clone()), (1, vec![b(2)]));
        assert_eq!(sq.coordinates(&[b(2), b(2)]).unwrap().iter().filter(|x| !x.is_zero()).count(), 0);
        for lift in sq.lifts() {
            let c = sq.coordinates(lift).unwrap();
            assert_eq!(c.iter().filter(|x| x.is_one()).count(), 1);
        }
    }
}
