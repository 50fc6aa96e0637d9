//! The descent spectral sequence of a nerve with constant coefficients and
//! the checks built on it.

mod abutment;
mod bundle;
mod checks;
mod report;

pub use abutment::{abutment_check, AbutmentReport};
pub use bundle::{disjoint_union, Bundle};
pub use checks::{connectivity_check, kunneth_dim_check, uct_verify, ConnectivityVerdict, KunnethCell, KunnethReport, SpotCheck, UctDegree, UctReport};
pub use report::{vanishing_report, CellVerdict, Certification, DescentOptions, DescentReport, Verdict};

use num_traits::ToPrimitive;

use crate::complexes::Term;
use crate::cosimplicial::{normalization, validate, CosimplicialAbelianGroup};
use crate::error::{Error, Result};
use crate::linalg::{CoefficientRing, FgAbelianGroup};
use crate::sset::{induced_on_cohomology, SimplicialObject, SpaceCohomology};

/// Constant coefficients: a ring, or a finitely generated group handled one
/// cyclic summand at a time.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    Ring(CoefficientRing),
    Group(FgAbelianGroup),
}

impl Coefficients {
    /// `Z`, `Q`, `F<p>`, `Z/<m>`, or a sum such as `Z^2+Z/2`.
    pub fn parse(s: &str) -> Result<Self> {
        match CoefficientRing::parse(s) {
            Ok(r) => Ok(Self::Ring(r)),
            Err(_) => {
                let g = FgAbelianGroup::parse(s)
                    .map_err(|_| Error::InvalidInput(format!("unknown coefficients `{s}`: expected Z, Q, F<p>, Z/<m> or a sum like Z^2+Z/2")))?;
                Ok(Self::Group(g))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Ring(CoefficientRing::Integers) => "Z".into(),
            Self::Ring(CoefficientRing::Rationals) => "Q".into(),
            Self::Ring(CoefficientRing::PrimeField(p)) => format!("F{p}"),
            Self::Ring(CoefficientRing::IntegersMod(m)) => format!("Z/{m}"),
            Self::Group(g) => g.to_string(),
        }
    }

    /// The field, when the coefficients are one.
    pub fn field(&self) -> Option<CoefficientRing> {
        match self {
            Self::Ring(r) if r.is_field() => Some(*r),
            _ => None,
        }
    }

    /// The coefficients as an abelian group, when they are not a field.
    pub fn group(&self) -> Option<FgAbelianGroup> {
        match self {
            Self::Ring(CoefficientRing::Integers) => Some(FgAbelianGroup::free(1)),
            Self::Ring(CoefficientRing::IntegersMod(m)) => Some(FgAbelianGroup::cyclic(*m)),
            Self::Ring(_) => None,
            Self::Group(g) => Some(g.clone()),
        }
    }

    /// Rings whose direct sum (with multiplicity) gives the coefficients.
    pub fn summands(&self) -> Result<Vec<(CoefficientRing, usize)>> {
        match self {
            Self::Ring(r) => Ok(vec![(*r, 1)]),
            Self::Group(g) => {
                let mut out = Vec::new();
                if g.rank > 0 {
                    out.push((CoefficientRing::Integers, g.rank));
                }
                for t in &g.torsion {
                    let m = t.to_u64().ok_or_else(|| Error::InvalidInput(format!("torsion order {t} is too large")))?;
                    out.push((CoefficientRing::IntegersMod(m), 1));
                }
                Ok(out)
            }
        }
    }
}

/// `E_1^{*q}` for `q = 0..=q_max`: the cosimplicial group `[p] -> H^q(X_p)`
/// with cofaces induced by the face maps and codegeneracies by the
/// degeneracy maps of the nerve.
pub fn e1_page(nerve: &SimplicialObject, ring: CoefficientRing, q_max: usize) -> Result<Vec<CosimplicialAbelianGroup>> {
    let p_max = nerve.p_max();
    let h = (0..=p_max).map(|p| SpaceCohomology::new(nerve.level(p), ring, Some(q_max))).collect::<Result<Vec<_>>>()?;
    (0..=q_max)
        .map(|q| {
            let levels = h.iter().map(|hp| Term::presented(ring, &hp.orders(q))).collect();
            let mut cofaces = vec![Vec::new()];
            for p in 1..=p_max {
                cofaces.push((0..=p).map(|i| induced_on_cohomology(&nerve.faces[p][i], &h[p], &h[p - 1], q)).collect::<Result<Vec<_>>>()?);
            }
            let codegeneracies = (0..p_max)
                .map(|p| (0..=p).map(|i| induced_on_cohomology(&nerve.degeneracies[p][i], &h[p], &h[p + 1], q)).collect())
                .collect::<Result<Vec<_>>>()?;
            let a = CosimplicialAbelianGroup::new(ring, levels, cofaces, codegeneracies)?;
            if let Some(v) = validate(&a).violations.first() {
                return Err(Error::NotWellDefined(format!("E_1 row q={q} violates {}", v.identity)));
            }
            Ok(a)
        })
        .collect()
}

/// `E_2^{pq}` indexed `[p][q]`, the cohomology of the normalized complex of
/// each row. In the top column this is the quotient `N^P / d N^{P-1}`, an
/// upper bound for the true group.
pub fn e2_page(e1: &[CosimplicialAbelianGroup]) -> Result<Vec<Vec<FgAbelianGroup>>> {
    let rows = e1.iter().map(|a| normalization(a)?.cohomology()).collect::<Result<Vec<_>>>()?;
    Ok(transpose(rows))
}

pub(crate) fn transpose(rows: Vec<Vec<FgAbelianGroup>>) -> Vec<Vec<FgAbelianGroup>> {
    let p_len = rows.first().map_or(0, Vec::len);
    (0..p_len).map(|p| rows.iter().map(|r| r[p].clone()).collect()).collect()
}
