use std::fmt::Write as _;

use descent_core::bar::BarReport;
use descent_core::complexes::{PageTable, SpectralSequencePages};
use descent_core::cosimplicial::DoldKanReport;
use descent_core::descent::{AbutmentReport, KunnethReport, UctReport};
use descent_core::linalg::FgAbelianGroup;

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn cohomology(space: &str, coeffs: &str, groups: &[FgAbelianGroup]) -> String {
    let mut out = format!("H^*({space}; {coeffs})\n");
    for (i, g) in groups.iter().enumerate() {
        let _ = writeln!(out, "  H^{i} = {g}");
    }
    out
}

pub fn bar(r: &BarReport, passed: bool) -> String {
    let mut out = format!("dim N^n C^(*m), k = {}, n <= {}, m <= {}\n", r.k, r.n_max, r.m_max);
    let width = r.table.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1).max(2);
    let _ = write!(out, "      ");
    for m in 0..=r.m_max {
        let _ = write!(out, " {:>width$}", format!("m{m}"));
    }
    out.push('\n');
    for (n, row) in r.table.iter().enumerate() {
        let _ = write!(out, "  n={n:<2}");
        for (m, v) in row.iter().enumerate() {
            let cell = if m < r.k * n { format!("{v}*") } else { v.to_string() };
            let _ = write!(out, " {cell:>width$}");
        }
        out.push('\n');
    }
    out.push_str("  (* marks cells with m < kn)\n");
    let _ = writeln!(out, "dim N^n: {:?}, formula (dim R - 1)^n dim R: {:?}", r.kernel_dims, r.formula_dims);
    for (n, m) in &r.failures {
        let _ = writeln!(out, "nonzero below the line at (n, m) = ({n}, {m})");
    }
    let _ = writeln!(out, "verdict: {}", if passed { "pass" } else { "fail" });
    out
}

pub fn uct(space: &str, r: &UctReport) -> String {
    let mut out = format!("universal coefficients for {space} with A = {}\n", r.coefficients);
    out.push_str("  i  H^i(Z)  H^i(Z)(x)A  H^i(A)  Tor(H^(i-1),A)  Tor(H^(i+1),A)  lower  upper\n");
    for d in &r.degrees {
        let _ = writeln!(
            out,
            "  {:<2} {:>7} {:>11} {:>7} {:>15} {:>15}  {:>5}  {:>5}",
            d.i,
            d.integral.to_string(),
            d.tensor.to_string(),
            d.middle.to_string(),
            d.tor_lower.to_string(),
            d.tor_upper.to_string(),
            mark(d.lower_balances),
            mark(d.upper_balances)
        );
    }
    let _ = writeln!(out, "balancing convention: {}; degrees distinguishing the two: {:?}", r.convention, r.distinguishing);
    let _ = writeln!(out, "verdict: {}", if r.passed() { "pass" } else { "fail" });
    out
}

pub fn kunneth(space: &str, r: &KunnethReport) -> String {
    let mut out = format!("Kunneth dimensions for {space}, n <= {}, m <= {}; dim H^i(S) = {:?}\n", r.n_max, r.m_max, r.cohomology);
    out.push_str("  n  m  H^m(S^(n+1))  compositions  bar\n");
    for c in &r.cells {
        let bar = c.bar.map_or("-".to_string(), |b| b.to_string());
        let _ = writeln!(out, "  {:<2} {:<2} {:>12} {:>13} {:>4}  {}", c.n, c.m, c.space, c.compositions, bar, mark(c.agrees));
    }
    let _ = writeln!(out, "verdict: {}", if r.passed() { "pass" } else { "fail" });
    out
}

fn page(out: &mut String, title: &str, t: &PageTable) {
    let _ = writeln!(out, "\n{title} (# marks cells outside the trusted window)");
    let q_len = t.dims.first().map_or(0, Vec::len);
    for q in (0..q_len).rev() {
        let _ = write!(out, "  q={q:<2}|");
        for p in 0..t.dims.len() {
            let cell = format!("{}{}", t.dim(p, q), if t.is_trusted(p, q) { "" } else { "#" });
            let _ = write!(out, " {cell:>4}");
        }
        out.push('\n');
    }
    let _ = write!(out, "      +");
    for p in 0..t.dims.len() {
        let _ = write!(out, " {:>4}", format!("p{p}"));
    }
    out.push('\n');
}

pub fn pages(s: &SpectralSequencePages) -> String {
    let mut out = format!("spectral sequence, p <= {}, q <= {}\n", s.p_max, s.q_max);
    for t in &s.pages {
        page(&mut out, &format!("E{}", t.r.unwrap_or(0)), t);
    }
    page(&mut out, "E_inf", &s.e_infinity);
    let _ = writeln!(out, "\ndim H^n(Tot): {:?}", s.abutment);
    out
}

pub fn abutment(a: &AbutmentReport) -> String {
    let mut out = pages(&a.pages);
    let _ = writeln!(out, "E_inf totals in trusted degrees: {:?}", a.e_infinity_totals);
    let _ = writeln!(out, "dim H^n(base): {:?}", a.base_cohomology);
    let _ = writeln!(out, "E2 cells compared with the cosimplicial E2: {}", a.e2_cells_compared);
    for (p, q, engine, cos) in &a.e2_mismatches {
        let _ = writeln!(out, "E2 mismatch at ({p}, {q}): engine {engine}, cosimplicial {cos}");
    }
    let _ = writeln!(out, "verdict: {}", if a.passed() { "pass" } else { "fail" });
    out
}

pub fn dold_kan(r: &DoldKanReport) -> String {
    let mut out = format!("Dold-Kan round trip, levels of Gamma(C): {:?}\n", r.level_sizes);
    let _ = writeln!(out, "cosimplicial identities: {}", mark(r.cosimplicial_identities));
    out.push_str("  n      C^n  N^n(GC)  H^n(C)  H^n(GC)  H^n(NGC)\n");
    for d in &r.degrees {
        let _ = writeln!(
            out,
            "  {:<2} {:>8} {:>8} {:>7} {:>8} {:>9}  {}",
            d.n,
            d.complex.to_string(),
            d.normalized.to_string(),
            d.h_complex.to_string(),
            d.h_gamma.to_string(),
            d.h_normalized.to_string(),
            mark(d.passed())
        );
    }
    let _ = writeln!(out, "verdict: {}", if r.passed() { "pass" } else { "fail" });
    out
}
