use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use super::ring::Domain;

/// `u * m * v = d` with `u`, `v` invertible over the domain and `d` diagonal,
/// each nonzero diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
    /// Nonzero diagonal entries of `d`, in order.
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

/// Smith normal form over the integers.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    smith_over(Domain::Integers, m)
}

pub fn smith_over(domain: Domain, m: &IntegerMatrix) -> SmithDecomposition {
    match domain {
        Domain::Integers => integer_smith(m, true),
        Domain::Field(p) => field_smith(m, p, true),
    }
}

/// Elementary divisors only; skips the transforms.
pub fn divisors_over(domain: Domain, m: &IntegerMatrix) -> Vec<BigInt> {
    match domain {
        Domain::Integers => integer_smith(m, false).divisors,
        Domain::Field(p) => field_smith(m, p, false).divisors,
    }
}

pub fn rank_over(domain: Domain, m: &IntegerMatrix) -> usize {
    divisors_over(domain, m).len()
}

struct Transforms {
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

struct Work {
    a: IntegerMatrix,
    t: Option<Transforms>,
}

impl Work {
    fn row_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(t) = &mut self.t {
            t.u.add_row_multiple(dst, src, c);
            t.u_inv.add_col_multiple(src, dst, &-c);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(t) = &mut self.t {
            t.v.add_col_multiple(dst, src, c);
            t.v_inv.add_row_multiple(src, dst, &-c);
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap_rows(i, k);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(i, k);
            t.u_inv.swap_cols(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        self.a.swap_cols(j, k);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(j, k);
            t.v_inv.swap_rows(j, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.t {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }
}

fn min_abs_in(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
            if x.abs().is_one() {
                return best;
            }
        }
    }
    best
}

fn integer_smith(m: &IntegerMatrix, with_transforms: bool) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        t: with_transforms.then(|| Transforms {
            u: IntegerMatrix::identity(rows),
            u_inv: IntegerMatrix::identity(rows),
            v: IntegerMatrix::identity(cols),
            v_inv: IntegerMatrix::identity(cols),
        }),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_in(&w.a, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[(i, t)].is_zero() {
                    let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                    w.row_add(i, t, &-q);
                    clean &= w.a[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[(t, j)].is_zero() {
                    let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                    w.col_add(j, t, &-q);
                    clean &= w.a[(t, j)].is_zero();
                }
            }
            if !clean {
                // a smaller remainder appeared in row or column t; make it the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = &w.a[(i, t)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = &w.a[(t, j)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let divisors: Vec<BigInt> = (0..rows.min(cols)).map(|i| w.a[(i, i)].clone()).take_while(|x| !x.is_zero()).collect();
    finish(w, rows, cols, divisors)
}

fn finish(w: Work, rows: usize, cols: usize, divisors: Vec<BigInt>) -> SmithDecomposition {
    let (u, u_inv, v, v_inv) = match w.t {
        Some(t) => (t.u, t.u_inv, t.v, t.v_inv),
        None => (
            IntegerMatrix::zeros(0, 0),
            IntegerMatrix::zeros(0, 0),
            IntegerMatrix::zeros(0, 0),
            IntegerMatrix::zeros(0, 0),
        ),
    };
    SmithDecomposition { u, d: IntegerMatrix::diagonal(rows, cols, &divisors), v, u_inv, v_inv, divisors }
}

/// Dense matrix over F_p with word-sized entries.
struct ModMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    fn from_integer(m: &IntegerMatrix, p: u64) -> Self {
        let bp = BigInt::from(p);
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for x in m.row(i) {
                let r = x.mod_floor(&bp);
                data.push(r.try_into().expect("residue fits in u64"));
            }
        }
        Self { rows: m.rows(), cols: m.cols(), p, data }
    }

    fn identity(n: usize, p: u64) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { rows: n, cols: n, p, data }
    }

    fn to_integer(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = BigInt::from(self.data[i * self.cols + j]);
            }
        }
        m
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    fn row_axpy(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let (p, n) = (self.p, self.cols);
        for j in 0..n {
            let s = self.data[src * n + j];
            if s != 0 {
                let d = &mut self.data[dst * n + j];
                *d = ((*d as u128 + s as u128 * c as u128) % p as u128) as u64;
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let (p, n) = (self.p, self.cols);
        for i in 0..self.rows {
            let s = self.data[i * n + src];
            if s != 0 {
                let d = &mut self.data[i * n + dst];
                *d = ((*d as u128 + s as u128 * c as u128) % p as u128) as u64;
            }
        }
    }

    fn row_scale(&mut self, i: usize, c: u64) {
        let p = self.p;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = ((*x as u128 * c as u128) % p as u128) as u64;
        }
    }

    fn col_scale(&mut self, j: usize, c: u64) {
        let p = self.p;
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = ((*x as u128 * c as u128) % p as u128) as u64;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn field_smith(m: &IntegerMatrix, p: u64, with_transforms: bool) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = ModMatrix::from_integer(m, p);
    let mut tr = with_transforms.then(|| {
        (ModMatrix::identity(rows, p), ModMatrix::identity(rows, p), ModMatrix::identity(cols, p), ModMatrix::identity(cols, p))
    });
    let neg = |x: u64| if x == 0 { 0 } else { p - x };
    let mut rank = 0;
    while rank < rows.min(cols) {
        let t = rank;
        let pivot = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j))).find(|&(i, j)| a.at(i, j) != 0);
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        let x = a.at(t, t);
        let xi = inv_mod(x, p);
        a.row_scale(t, xi);
        if let Some((u, ui, v, vi)) = &mut tr {
            u.swap_rows(t, pi);
            ui.swap_cols(t, pi);
            v.swap_cols(t, pj);
            vi.swap_rows(t, pj);
            u.row_scale(t, xi);
            ui.col_scale(t, x);
        }
        for i in t + 1..rows {
            let c = a.at(i, t);
            if c != 0 {
                a.row_axpy(i, t, neg(c));
                if let Some((u, ui, _, _)) = &mut tr {
                    u.row_axpy(i, t, neg(c));
                    ui.col_axpy(t, i, c);
                }
            }
        }
        for j in t + 1..cols {
            let c = a.at(t, j);
            if c != 0 {
                a.col_axpy(j, t, neg(c));
                if let Some((_, _, v, vi)) = &mut tr {
                    v.col_axpy(j, t, neg(c));
                    vi.row_axpy(t, j, c);
                }
            }
        }
        rank += 1;
    }
    let divisors = vec![BigInt::one(); rank];
    let t = tr.map(|(u, ui, v, vi)| Transforms {
        u: u.to_integer(),
        u_inv: ui.to_integer(),
        v: v.to_integer(),
        v_inv: vi.to_integer(),
    });
    finish(Work { a: IntegerMatrix::zeros(0, 0), t }, rows, cols, divisors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntegerMatrix, s: &SmithDecomposition, domain: Domain) {
        let d = s.u.mul(m).mul(&s.v).reduced(domain);
        assert_eq!(d, s.d.clone().reduced(domain));
        let n = m.rows();
        assert_eq!(s.u.mul(&s.u_inv).reduced(domain), IntegerMatrix::identity(n).reduced(domain));
        assert_eq!(s.v.mul(&s.v_inv).reduced(domain), IntegerMatrix::identity(m.cols()).reduced(domain));
        for w in s.divisors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    /// Divisors by the determinantal-divisor definition: d_1 * ... * d_k is the gcd
    /// of all k x k minors. Only used on 2x2 inputs here.
    fn naive_two_by_two(m: &[[i64; 2]; 2]) -> Vec<i64> {
        let g1 = m.iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
        match (g1, det) {
            (0, _) => vec![],
            (g, 0) => vec![g],
            (g, d) => vec![g, d / g],
        }
    }

    #[test]
    fn two_by_two_example() {
        let m = IntegerMatrix::from_rows(2, &[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        check(&m, &s, Domain::Integers);
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(naive_two_by_two(&[[2, 4], [6, 8]]), vec![2, 4]);
        let prod: BigInt = s.divisors.iter().product();
        assert_eq!(prod, BigInt::from(8));
    }

    #[test]
    fn identity_and_zero() {
        let s = smith_normal_form(&IntegerMatrix::identity(4));
        assert_eq!(s.divisors, vec![BigInt::one(); 4]);
        let z = IntegerMatrix::zeros(3, 5);
        let s = smith_normal_form(&z);
        assert!(s.divisors.is_empty());
        check(&z, &s, Domain::Integers);
        let e = IntegerMatrix::zeros(0, 3);
        let s = smith_normal_form(&e);
        assert!(s.divisors.is_empty());
    }

    #[test]
    fn field_elimination_reconstructs() {
        let m = IntegerMatrix::from_rows(3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let s = smith_over(Domain::Field(2), &m);
        check(&m, &s, Domain::Field(2));
        assert_eq!(s.rank(), 2);
        let s3 = smith_over(Domain::Field(3), &m);
        assert_eq!(s3.rank(), 3);
        assert_eq!(smith_normal_form(&m).divisors, vec![BigInt::one(), BigInt::one(), BigInt::from(2)]);
    }

    #[test]
    fn all_two_by_two_small_entries_match_minors() {
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -2..=2i64 {
                    for d in -2..=2i64 {
                        let m = IntegerMatrix::from_rows(2, &[vec![a, b], vec![c, d]]);
                        let s = smith_normal_form(&m);
                        check(&m, &s, Domain::Integers);
                        let expect: Vec<BigInt> = naive_two_by_two(&[[a, b], [c, d]]).into_iter().map(BigInt::from).collect();
                        assert_eq!(s.divisors, expect, "{a} {b} {c} {d}");
                    }
                }
            }
        }
    }
}
