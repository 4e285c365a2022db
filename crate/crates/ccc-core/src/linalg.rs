//! Exact linear algebra over the rationals and small integer lattice solves.
//!
//! Everything here is dense and unoptimized on purpose: ambient dimensions in
//! this crate never exceed four and chain complexes stay in the low hundreds,
//! so exact arithmetic with simple elimination is the right trade.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Q = num_rational::BigRational;
pub type Z = BigInt;

pub fn q_from_i64(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Dot product of a lattice vector against a rational vector.
pub fn dot_zq(a: &[i64], x: &[Q]) -> Q {
    assert_eq!(a.len(), x.len(), "dot product length mismatch");
    let mut acc = Q::zero();
    for (ai, xi) in a.iter().zip(x) {
        if *ai != 0 {
            acc += xi * q_from_i64(*ai);
        }
    }
    acc
}

pub fn dot_zz(a: &[i64], b: &[i64]) -> i64 {
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_qq(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Divide an integer vector by the gcd of its entries; `(0,…,0)` stays put.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let mut g: i64 = 0;
    for &x in v {
        g = g.gcd(&x);
    }
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Scale a rational vector to a primitive integer vector pointing the same way.
pub fn primitive_of_rational(v: &[Q]) -> Vec<i64> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter()
        .map(|x| {
            let r = x / &g;
            i64::try_from(&r).expect("primitive vector entry exceeds i64")
        })
        .collect()
}

/// Dense matrix over Q, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

impl QMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vec<Q>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        for r in &data {
            assert_eq!(r.len(), cols, "ragged matrix rows");
        }
        QMat { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::new(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| q_from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        self.data.iter().map(|row| dot_qq(row, v)).collect()
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = QMat::new(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other.data[k][j].is_zero() {
                        continue;
                    }
                    let prod = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += prod;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// Reduced row echelon form; returns (echelon matrix, pivot column per pivot row).
    pub fn echelon(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.data[r][col].is_zero()) else {
                continue;
            };
            m.data.swap(row, p);
            let inv = m.data[row][col].recip();
            for j in col..m.cols {
                let v = &m.data[row][j] * &inv;
                m.data[row][j] = v;
            }
            for r in 0..m.rows {
                if r != row && !m.data[r][col].is_zero() {
                    let factor = m.data[r][col].clone();
                    for j in col..m.cols {
                        let v = &m.data[r][j] - &factor * &m.data[row][j];
                        m.data[r][j] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis vectors of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (ech, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -ech.data[prow][f].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * x = b`; returns one solution if consistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len(), "solve dimension mismatch");
        let mut aug = self.clone();
        for (i, row) in aug.data.iter_mut().enumerate() {
            row.push(b[i].clone());
        }
        aug.cols += 1;
        let (ech, pivots) = aug.echelon();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constants column: inconsistent
        }
        let mut x = vec![Q::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = ech.data[prow][self.cols].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix; None if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = QMat::new(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = Q::one();
        }
        let (ech, pivots) = aug.echelon();
        if pivots.len() < n || pivots.iter().take(n).cloned().ne(0..n) {
            return None;
        }
        let mut out = QMat::new(n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i][j] = ech.data[i][n + j].clone();
            }
        }
        Some(out)
    }
}

/// A subspace of Q^n, stored as an echelonized basis (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, QMat::identity(ambient).data)
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<Q>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "span vector of wrong length");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let (ech, pivots) = QMat::from_rows(vectors).echelon();
        let basis = ech.data.into_iter().take(pivots.len()).collect();
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut vecs = self.basis.clone();
        vecs.push(v.to_vec());
        Subspace::span(self.ambient, vecs).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, vecs)
    }

    /// Intersection via the kernel of the stacked coordinate map.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // a·basisA − b·basisB = 0: kernel of the (ambient)×(dimA+dimB) matrix.
        let mut rows = Vec::new();
        for i in 0..self.ambient {
            let mut row = Vec::with_capacity(self.dim() + other.dim());
            for v in &self.basis {
                row.push(v[i].clone());
            }
            for w in &other.basis {
                row.push(-w[i].clone());
            }
            rows.push(row);
        }
        let ker = QMat::from_rows(rows).nullspace();
        let vecs: Vec<Vec<Q>> = ker
            .iter()
            .map(|coef| {
                let mut v = vec![Q::zero(); self.ambient];
                for (k, bvec) in self.basis.iter().enumerate() {
                    for i in 0..self.ambient {
                        let add = &coef[k] * &bvec[i];
                        v[i] += add;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, vecs)
    }
}

/// Hermite normal form (row style): returns (H, U) with U unimodular, U·A = H.
pub fn hnf(a: &[Vec<i64>]) -> (Vec<Vec<Z>>, Vec<Vec<Z>>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<Z>> = a
        .iter()
        .map(|r| r.iter().map(|&v| Z::from(v)).collect())
        .collect();
    let mut u: Vec<Vec<Z>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { Z::one() } else { Z::zero() })
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !h[r][col].is_zero() {
                    match best {
                        Some(b) if h[r][col].abs() >= h[b][col].abs() => {}
                        _ => best = Some(r),
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows {
                if !h[r][col].is_zero() {
                    let q = h[r][col].div_floor(&h[pivot_row][col]);
                    if !q.is_zero() {
                        for c in 0..cols {
                            let sub = &q * &h[pivot_row][c];
                            h[r][c] -= sub;
                        }
                        for c in 0..rows {
                            let sub = &q * &u[pivot_row][c];
                            u[r][c] -= sub;
                        }
                    }
                    if !h[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !h[pivot_row][col].is_zero() {
            if h[pivot_row][col].is_negative() {
                for c in 0..cols {
                    h[pivot_row][c] = -h[pivot_row][c].clone();
                }
                for c in 0..rows {
                    u[pivot_row][c] = -u[pivot_row][c].clone();
                }
            }
            for r in 0..pivot_row {
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                if !q.is_zero() {
                    for c in 0..cols {
                        let sub = &q * &h[pivot_row][c];
                        h[r][c] -= sub;
                    }
                    for c in 0..rows {
                        let sub = &q * &u[pivot_row][c];
                        u[r][c] -= sub;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    (h, u)
}

/// Solve `A x = b` over the integers; returns one solution if any exists.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![0; n]);
    }
    // x A^T = b for row vector x. With U A^T = H, set x = y U and solve y H = b.
    let at: Vec<Vec<i64>> = (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
    let (h, u) = hnf(&at);
    let mut y = vec![Z::zero(); n];
    let mut bb: Vec<Z> = b.iter().map(|&v| Z::from(v)).collect();
    for (row, hrow) in h.iter().enumerate() {
        let Some(pc) = hrow.iter().position(|v| !v.is_zero()) else {
            continue;
        };
        let (q, r) = bb[pc].div_rem(&hrow[pc]);
        if !r.is_zero() {
            return None;
        }
        y[row] = q;
        for c in 0..m {
            let sub = &y[row] * &hrow[c];
            bb[c] -= sub;
        }
    }
    if bb.iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Z::zero(); n];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for j in 0..n {
            let add = yi * &u[i][j];
            x[j] += add;
        }
    }
    Some(
        x.iter()
            .map(|v| i64::try_from(v).expect("integer solution exceeds i64"))
            .collect(),
    )
}

/// Basis of the saturated integer kernel {x ∈ Z^n : A x = 0}.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.first().map_or(0, |r| r.len());
    if a.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    let at: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..a.len()).map(|i| a[i][j]).collect())
        .collect();
    let (h, u) = hnf(&at);
    // Rows of U whose HNF row vanished span {x : x A^T = 0} = {x : A x = 0}.
    let mut out = Vec::new();
    for (i, hrow) in h.iter().enumerate() {
        if hrow.iter().all(|v| v.is_zero()) {
            out.push(
                u[i].iter()
                    .map(|v| i64::try_from(v).expect("kernel basis entry exceeds i64"))
                    .collect(),
            );
        }
    }
    out
}
