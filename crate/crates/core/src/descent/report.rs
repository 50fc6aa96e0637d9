use std::fmt::Write as _;

use serde::Serialize;

use super::{abutment_check, connectivity_check, e1_page, e2_page, transpose, AbutmentReport, Bundle, Coefficients, ConnectivityVerdict};
use crate::cosimplicial::{associated_complex, degenerate_quotient, normalized_groups};
use crate::error::{Error, Result};
use crate::linalg::FgAbelianGroup;

#[derive(Clone, Debug)]
pub struct DescentOptions {
    pub k: usize,
    pub p_max: usize,
    pub q_max: usize,
    /// Coefficient groups checked directly when certifying fibers.
    pub spot_checks: Vec<FgAbelianGroup>,
    /// Fail with `HypothesisViolated` instead of reporting descriptively.
    pub require_certification: bool,
    /// Attach the page tables and abutment comparison (field coefficients).
    pub abutment: bool,
}

impl DescentOptions {
    pub fn new(k: usize, p_max: usize, q_max: usize) -> Self {
        Self {
            k,
            p_max,
            q_max,
            spot_checks: vec![FgAbelianGroup::cyclic(2), FgAbelianGroup::cyclic(3)],
            require_certification: false,
            abutment: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Uncertified,
}

/// A cell below the line `q < pk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellVerdict {
    pub p: usize,
    pub q: usize,
    pub e2_zero: bool,
    pub normalized_zero: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub certified: bool,
    pub shape: String,
    pub fibers: Vec<(String, ConnectivityVerdict)>,
    pub reason: Option<String>,
}

/// `E_1` and `N` are exact on the whole window; `E_2` is exact for `p < p_max`
/// and the upper bound `N^p / d N^{p-1}` in column `p_max`.
#[derive(Clone, Debug, Serialize)]
pub struct DescentWindow {
    pub p_max: usize,
    pub q_max: usize,
    /// Cells of each nerve level were built through this dimension.
    pub truncation: usize,
    pub e2_bound_column: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub shape: String,
    pub coefficients: String,
    pub k: usize,
    pub window: DescentWindow,
    /// Tables indexed `[p][q]`.
    pub e1: Vec<Vec<FgAbelianGroup>>,
    pub e2: Vec<Vec<FgAbelianGroup>>,
    pub normalized: Vec<Vec<FgAbelianGroup>>,
    pub cells: Vec<CellVerdict>,
    pub certification: Certification,
    /// Failed internal cross-checks; empty on a correct run.
    pub inconsistencies: Vec<String>,
    pub abutment: Option<AbutmentReport>,
}

impl DescentReport {
    pub fn failing_cells(&self) -> Vec<(usize, usize)> {
        self.cells.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| (c.p, c.q)).collect()
    }

    /// Certified, every cell below the line vanishes, and every cross-check holds.
    pub fn passed(&self) -> bool {
        self.certification.certified
            && self.failing_cells().is_empty()
            && self.inconsistencies.is_empty()
            && self.abutment.as_ref().is_none_or(AbutmentReport::passed)
    }

    /// Aligned text rendering of the tables and verdicts.
    pub fn to_table(&self) -> String {
        let w = &self.window;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "descent over a {}, coefficients {}, k = {}, window p <= {}, q <= {} (cells through dimension {})",
            self.shape, self.coefficients, self.k, w.p_max, w.q_max, w.truncation
        );
        match (&self.certification.certified, &self.certification.reason) {
            (true, _) => out.push_str("hypothesis: certified\n"),
            (false, Some(r)) => {
                let _ = writeln!(out, "hypothesis: not certified ({r})");
            }
            (false, None) => out.push_str("hypothesis: not certified\n"),
        }
        let field = Coefficients::parse(&self.coefficients).ok().and_then(|c| c.field()).map(|_| self.coefficients.as_str());
        for (title, table) in [("E1", &self.e1), ("E2", &self.e2), ("N", &self.normalized)] {
            out.push('\n');
            out.push_str(title);
            if title == "E2" {
                let _ = write!(out, " (column {} is an upper bound)", w.e2_bound_column);
            }
            out.push('\n');
            out.push_str(&grid(table, field));
        }
        out.push_str("\ncells with q < pk:\n");
        for c in &self.cells {
            let v = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Uncertified => "-",
            };
            let _ = writeln!(out, "  ({}, {})  E2 {}  N {}  {v}", c.p, c.q, zero(c.e2_zero), zero(c.normalized_zero));
        }
        if let Some(a) = &self.abutment {
            let _ = writeln!(
                out,
                "\nabutment: E_inf totals {:?}, H^*(base) {:?}, E2 cells compared {}, mismatches {}",
                a.e_infinity_totals,
                a.base_cohomology,
                a.e2_cells_compared,
                a.e2_mismatches.len()
            );
        }
        for i in &self.inconsistencies {
            let _ = writeln!(out, "inconsistency: {i}");
        }
        let verdict = if !self.certification.certified {
            "hypothesis not certified, tables are descriptive".to_string()
        } else if self.passed() {
            "pass".to_string()
        } else if let Some((p, q)) = self.failing_cells().first() {
            format!("fail at (p, q) = ({p}, {q})")
        } else {
            "fail".to_string()
        };
        let _ = writeln!(out, "\nverdict: {verdict}");
        out
    }
}

fn zero(z: bool) -> &'static str {
    if z {
        "0"
    } else {
        "nonzero"
    }
}

/// Over a field the entries are vector spaces `K^r`.
fn entry(g: &FgAbelianGroup, field: Option<&str>) -> String {
    match (field, g.rank) {
        (None, _) | (_, 0) => g.to_string(),
        (Some(k), 1) => k.to_string(),
        (Some(k), r) => format!("{k}^{r}"),
    }
}

/// Rows `q` from the top, columns `p`.
fn grid(table: &[Vec<FgAbelianGroup>], field: Option<&str>) -> String {
    let p_len = table.len();
    let q_len = table.first().map_or(0, Vec::len);
    let cells: Vec<Vec<String>> = (0..p_len).map(|p| table[p].iter().map(|g| entry(g, field)).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1).max(2);
    let mut out = String::new();
    for q in (0..q_len).rev() {
        let _ = write!(out, "  q={q:<2}|");
        for col in &cells {
            let _ = write!(out, " {:>width$}", col[q]);
        }
        out.push('\n');
    }
    let _ = write!(out, "      +");
    for p in 0..p_len {
        let _ = write!(out, " {:>width$}", format!("p{p}"));
    }
    out.push('\n');
    out
}

fn certify(bundle: &Bundle, k: usize, spot: &[FgAbelianGroup]) -> Certification {
    let shape = bundle.shape().to_string();
    if let Bundle::Map(_) = bundle {
        return Certification {
            certified: false,
            shape,
            fibers: Vec::new(),
            reason: Some("only trivial bundles and discrete bases are certified; a general map is reported descriptively".into()),
        };
    }
    let fibers: Vec<(String, ConnectivityVerdict)> =
        bundle.fibers().into_iter().map(|(label, f)| (label, connectivity_check(&f, k, spot))).collect();
    let reason = fibers.iter().find(|(_, v)| !v.passed).map(|(label, v)| {
        format!("fiber `{label}` is not cohomologically {}-connected: {}", k.saturating_sub(1), v.failures.join("; "))
    });
    Certification { certified: reason.is_none(), shape, fibers, reason }
}

fn add_into(acc: &mut Vec<Vec<FgAbelianGroup>>, table: &[Vec<FgAbelianGroup>], times: usize) {
    if acc.is_empty() {
        *acc = table.iter().map(|col| vec![FgAbelianGroup::zero(); col.len()]).collect();
    }
    for (a, t) in acc.iter_mut().zip(table) {
        for (x, y) in a.iter_mut().zip(t) {
            for _ in 0..times {
                *x = x.direct_sum(y);
            }
        }
    }
}

/// Full descent tables for `bundle` with the vanishing verdicts below `q < pk`.
pub fn vanishing_report(bundle: &Bundle, coeffs: &Coefficients, opts: &DescentOptions) -> Result<DescentReport> {
    let (k, p_max, q_max) = (opts.k, opts.p_max, opts.q_max);
    let mut spot = opts.spot_checks.clone();
    if let Some(g) = coeffs.group() {
        if !g.is_zero() && g != FgAbelianGroup::free(1) && !spot.contains(&g) {
            spot.push(g);
        }
    }
    let certification = certify(bundle, k, &spot);
    if opts.require_certification && !certification.certified {
        return Err(Error::HypothesisViolated(certification.reason.clone().unwrap_or_default()));
    }
    let truncation = q_max + 1;
    let nerve = bundle.nerve(p_max, truncation)?;
    let (mut e1, mut e2, mut normalized) = (Vec::new(), Vec::new(), Vec::new());
    let mut inconsistencies = Vec::new();
    for (ring, times) in coeffs.summands()? {
        let rows = e1_page(&nerve, ring, q_max)?;
        let e1_part = transpose(rows.iter().map(|a| (0..=p_max).map(|p| a.level_group(p)).collect()).collect::<Result<_>>()?);
        let e2_part = e2_page(&rows)?;
        let n_part = transpose(rows.iter().map(normalized_groups).collect::<Result<_>>()?);
        for (q, a) in rows.iter().enumerate() {
            let unnormalized = associated_complex(a)?.cohomology()?;
            for p in 0..=p_max {
                let quotient = degenerate_quotient(a, p)?;
                if quotient != n_part[p][q] {
                    inconsistencies.push(format!("{ring:?}, ({p}, {q}): degenerate quotient {quotient} but N = {}", n_part[p][q]));
                }
                if p < p_max && unnormalized[p] != e2_part[p][q] {
                    inconsistencies.push(format!(
                        "{ring:?}, ({p}, {q}): unnormalized cohomology {} but normalized {}",
                        unnormalized[p], e2_part[p][q]
                    ));
                }
                if n_part[p][q].is_zero() && !e2_part[p][q].is_zero() {
                    inconsistencies.push(format!("{ring:?}, ({p}, {q}): N vanishes but E2 = {}", e2_part[p][q]));
                }
            }
        }
        add_into(&mut e1, &e1_part, times);
        add_into(&mut e2, &e2_part, times);
        add_into(&mut normalized, &n_part, times);
    }
    let mut cells = Vec::new();
    for p in 0..=p_max {
        for q in 0..=q_max.min((p * k).saturating_sub(1)) {
            if q >= p * k {
                continue;
            }
            let e2_zero = e2[p][q].is_zero();
            let normalized_zero = normalized[p][q].is_zero();
            let verdict = match (certification.certified, e2_zero && normalized_zero) {
                (false, _) => Verdict::Uncertified,
                (true, true) => Verdict::Pass,
                (true, false) => Verdict::Fail,
            };
            cells.push(CellVerdict { p, q, e2_zero, normalized_zero, verdict });
        }
    }
    let abutment = if opts.abutment {
        let field = coeffs.field().ok_or(Error::FieldRequired)?;
        Some(abutment_check(&nerve, field, p_max.min(truncation))?)
    } else {
        None
    };
    Ok(DescentReport {
        shape: bundle.shape().to_string(),
        coefficients: coeffs.label(),
        k,
        window: DescentWindow { p_max, q_max, truncation, e2_bound_column: p_max },
        e1,
        e2,
        normalized,
        cells,
        certification,
        inconsistencies,
        abutment,
    })
}
