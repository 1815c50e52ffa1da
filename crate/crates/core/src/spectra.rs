//! Eigenvalues, characteristic polynomials, and equitable-partition
//! quotients.
//!
//! The eigensolver is a self-contained cyclic Jacobi iteration: it is
//! dependency-free and more than accurate enough for the dense symmetric
//! matrices of order at most a few dozen that this crate works with.
//! Rotations are applied until the off-diagonal Frobenius norm drops below
//! `1e-12`, which leaves comfortable headroom for the `1e-9` tolerances used
//! by downstream assertions.
//!
//! Characteristic polynomials are computed with exact 128-bit integer
//! arithmetic (Faddeev-LeVerrier recurrence), so polynomial identities can
//! be checked coefficient-exact rather than approximately.

use crate::graph::{SignedGraph, SignedMatrix};
use crate::{Error, Result};

const OFF_NORM_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 128;

/// Cyclic Jacobi on a row-major symmetric matrix. On return the diagonal of
/// `a` holds the eigenvalues (unsorted); when `vectors` is given it is
/// overwritten with the eigenvector matrix, column `j` pairing with
/// `a[j*n+j]`. Allocation-free so enumeration loops can reuse buffers.
pub(crate) fn jacobi_eigen(n: usize, a: &mut [f64], mut vectors: Option<&mut [f64]>) {
    debug_assert_eq!(a.len(), n * n);
    if let Some(v) = vectors.as_deref_mut() {
        debug_assert_eq!(v.len(), n * n);
        v.fill(0.0);
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    if n < 2 {
        return;
    }
    for _sweep in 0..MAX_SWEEPS {
        let mut off2 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off2 += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off2.sqrt() < OFF_NORM_TOL {
            return;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                a[p * n + p] -= h;
                a[q * n + q] += h;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let g = a[j * n + p];
                    let h2 = a[j * n + q];
                    let np = g - s * (h2 + g * tau);
                    let nq = h2 + s * (g - h2 * tau);
                    a[j * n + p] = np;
                    a[p * n + j] = np;
                    a[j * n + q] = nq;
                    a[q * n + j] = nq;
                }
                if let Some(v) = vectors.as_deref_mut() {
                    for j in 0..n {
                        let g = v[j * n + p];
                        let h2 = v[j * n + q];
                        v[j * n + p] = g - s * (h2 + g * tau);
                        v[j * n + q] = h2 + s * (g - h2 * tau);
                    }
                }
            }
        }
    }
    panic!("jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps");
}

/// Sorted eigenvalue list of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub(crate) fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        Spectrum { values }
    }

    /// Eigenvalues in non-increasing order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The index: the largest eigenvalue.
    pub fn index(&self) -> f64 {
        *self
            .values
            .first()
            .expect("spectrum of an order-0 matrix has no index")
    }

    /// The smallest eigenvalue.
    pub fn min(&self) -> f64 {
        *self
            .values
            .last()
            .expect("spectrum of an order-0 matrix has no minimum")
    }

    /// Spectral radius: `max(lambda_1, -lambda_n)`.
    pub fn spectral_radius(&self) -> f64 {
        self.index().max(-self.min())
    }
}

/// All eigenvalues of a signed adjacency matrix, sorted non-increasing.
pub fn eigenvalues(m: &SignedMatrix) -> Spectrum {
    let n = m.order();
    let mut a = m.to_f64();
    jacobi_eigen(n, &mut a, None);
    Spectrum::from_unsorted((0..n).map(|i| a[i * n + i]).collect())
}

/// Eigenvalues of an arbitrary symmetric matrix given row-major.
pub fn symmetric_eigenvalues(n: usize, data: &[f64]) -> Result<Spectrum> {
    if data.len() != n * n {
        return Err(Error::ParameterRange(format!(
            "matrix data length {} does not match order {}",
            data.len(),
            n
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (data[i * n + j] - data[j * n + i]).abs() > 1e-9 {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let mut a = data.to_vec();
    jacobi_eigen(n, &mut a, None);
    Ok(Spectrum::from_unsorted(
        (0..n).map(|i| a[i * n + i]).collect(),
    ))
}

/// The spectrum of a signed graph.
pub fn spectrum(g: &SignedGraph) -> Spectrum {
    eigenvalues(&g.adjacency_matrix())
}

/// The index (largest adjacency eigenvalue) of a signed graph of order at
/// least 1.
pub fn index(g: &SignedGraph) -> f64 {
    spectrum(g).index()
}

/// Largest eigenvalue together with a unit eigenvector for it.
///
/// When the top eigenvalue is degenerate any unit vector of the eigenspace
/// may be returned; only the residual bound is promised.
pub fn leading_eigenpair(g: &SignedGraph) -> (f64, Vec<f64>) {
    let n = g.order();
    assert!(n >= 1, "leading eigenpair requires at least one vertex");
    let mut a = g.adjacency_matrix().to_f64();
    let mut v = vec![0.0; n * n];
    jacobi_eigen(n, &mut a, Some(&mut v));
    let mut best = 0;
    for i in 1..n {
        if a[i * n + i] > a[best * n + best] {
            best = i;
        }
    }
    let lambda = a[best * n + best];
    let mut x: Vec<f64> = (0..n).map(|j| v[j * n + best]).collect();
    let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    if norm > 0.0 {
        for t in &mut x {
            *t /= norm;
        }
    }
    (lambda, x)
}

/// A unit eigenvector for the index of `g`.
pub fn leading_eigenvector(g: &SignedGraph) -> Vec<f64> {
    leading_eigenpair(g).1
}

/// Square integer matrix with 128-bit entries; all arithmetic on it is
/// exact and overflow-checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i128>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::ParameterRange("matrix is not square".into()));
            }
            entries.extend_from_slice(row);
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        assert!(i < self.n && j < self.n, "index out of range");
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i128) {
        assert!(i < self.n && j < self.n, "index out of range");
        self.entries[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[i128] {
        &self.entries
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&x| x as f64).collect()
    }

    fn mul_checked(&self, other: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    let term = self.entries[i * n + k]
                        .checked_mul(other.entries[k * n + j])
                        .ok_or(Error::Overflow)?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow)?;
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    fn trace_checked(&self) -> Result<i128> {
        let mut acc: i128 = 0;
        for i in 0..self.n {
            acc = acc
                .checked_add(self.entries[i * self.n + i])
                .ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }
}

impl From<&SignedMatrix> for IntMatrix {
    fn from(m: &SignedMatrix) -> Self {
        IntMatrix {
            n: m.order(),
            entries: m.entries().iter().map(|&x| x as i128).collect(),
        }
    }
}

/// Exact characteristic polynomial `det(xI - A)` of an integer matrix,
/// computed by the Faddeev-LeVerrier recurrence. Every division in the
/// recurrence is exact, so the coefficients come out as true integers.
pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial> {
    let n = m.order();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    // work = M_{k-1}, starting from the identity
    let mut work = IntMatrix::zero(n);
    for i in 0..n {
        work.set(i, i, 1);
    }
    for k in 1..=n {
        let am = m.mul_checked(&work)?;
        let tr = am.trace_checked()?;
        let k_i = k as i128;
        debug_assert_eq!(tr % k_i, 0, "Faddeev-LeVerrier trace must divide exactly");
        let c = -(tr / k_i);
        coeffs[n - k] = c;
        work = am;
        for i in 0..n {
            let d = work.get(i, i).checked_add(c).ok_or(Error::Overflow)?;
            work.set(i, i, d);
        }
    }
    Ok(IntPolynomial::new(coeffs))
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Univariate polynomial with exact integer coefficients, constant term
/// first. The zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// Coefficients, constant term first; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> i128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c as f64;
        }
        acc
    }

    /// Exact evaluation at an integer point.
    pub fn eval_exact(&self, x: i128) -> Result<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|t| t.checked_add(c))
                .ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as i128)
            .collect();
        IntPolynomial::new(coeffs)
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPolynomial::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(Error::Overflow)?;
                out[i + j] = out[i + j].checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        Ok(IntPolynomial::new(out))
    }

    fn content(&self) -> i128 {
        self.coeffs.iter().fold(0, |acc, &c| gcd_i128(acc, c))
    }

    /// Divides out the content and normalizes the leading coefficient to be
    /// positive.
    fn primitive(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = self.content();
        if self.leading() < 0 {
            c = -c;
        }
        IntPolynomial::new(self.coeffs.iter().map(|&x| x / c).collect())
    }

    /// Pseudo-remainder step chain: repeatedly cancels the leading term of
    /// `self` against `div` after cross-multiplying by leading coefficients.
    fn pseudo_rem(&self, div: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = div.degree().expect("division by zero polynomial");
        let lead_d = div.leading();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lead_r = r.leading();
            let shift = dr - dd;
            let mut next = vec![0i128; dr + 1];
            for (i, &c) in r.coeffs.iter().enumerate() {
                next[i] = c.checked_mul(lead_d).ok_or(Error::Overflow)?;
            }
            for (j, &c) in div.coeffs.iter().enumerate() {
                let term = c.checked_mul(lead_r).ok_or(Error::Overflow)?;
                next[shift + j] = next[shift + j].checked_sub(term).ok_or(Error::Overflow)?;
            }
            debug_assert_eq!(next[dr], 0, "leading term must cancel");
            // keep coefficients small between steps
            r = IntPolynomial::new(next).primitive();
        }
        Ok(r)
    }

    /// Greatest common divisor (primitive, positive leading coefficient)
    /// via the primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.is_zero() {
            return Ok(other.primitive());
        }
        if other.is_zero() {
            return Ok(self.primitive());
        }
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.primitive())
    }

    /// Exact division; panics if `d` does not divide `self` in the integer
    /// polynomial ring.
    fn div_exact(&self, d: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_d = d.leading();
        let mut rem = self.coeffs.clone();
        let deg_self = self.degree().expect("division of zero polynomial");
        assert!(deg_self >= dd, "exact division with smaller dividend");
        let mut q = vec![0i128; deg_self - dd + 1];
        for top in (dd..=deg_self).rev() {
            let lead_r = rem[top];
            if lead_r == 0 {
                continue;
            }
            assert_eq!(lead_r % lead_d, 0, "division is not exact");
            let qi = lead_r / lead_d;
            q[top - dd] = qi;
            for (j, &c) in d.coeffs.iter().enumerate() {
                let term = c.checked_mul(qi).ok_or(Error::Overflow)?;
                rem[top - dd + j] = rem[top - dd + j].checked_sub(term).ok_or(Error::Overflow)?;
            }
        }
        assert!(rem.iter().all(|&c| c == 0), "division is not exact");
        Ok(IntPolynomial::new(q))
    }

    /// The squarefree part: a primitive polynomial with the same set of
    /// roots, each with multiplicity one.
    pub fn squarefree_part(&self) -> Result<IntPolynomial> {
        let pp = self.primitive();
        match pp.degree() {
            None | Some(0) => Ok(pp),
            Some(1) => Ok(pp),
            _ => {
                let g = pp.gcd(&pp.derivative())?;
                if g.degree() == Some(0) {
                    Ok(pp)
                } else {
                    pp.div_exact(&g)
                }
            }
        }
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ordered partition of `0..n` into disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        order: n,
                    });
                }
                if seen[v] {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in more than one block"
                    )));
                }
                seen[v] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {covered} of {n} vertices"
            )));
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Partition { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            n,
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

/// Quotient matrix of a signed adjacency matrix with respect to an
/// equitable partition: entry `(i, j)` is the constant row sum of the block
/// submatrix. Equitability is verified, never assumed; a violation reports
/// the offending block pair and rows.
pub fn quotient_matrix(m: &SignedMatrix, p: &Partition) -> Result<IntMatrix> {
    if p.order() != m.order() {
        return Err(Error::ParameterRange(format!(
            "partition order {} does not match matrix order {}",
            p.order(),
            m.order()
        )));
    }
    let k = p.blocks().len();
    let mut q = IntMatrix::zero(k);
    for (bi, rows) in p.blocks().iter().enumerate() {
        for (bj, cols) in p.blocks().iter().enumerate() {
            let row_sum = |u: usize| -> i64 { cols.iter().map(|&v| m.get(u, v) as i64).sum() };
            let first = rows[0];
            let sum = row_sum(first);
            for &u in &rows[1..] {
                let s = row_sum(u);
                if s != sum {
                    return Err(Error::NotEquitable {
                        block_row: bi,
                        block_col: bj,
                        vertex_a: first,
                        sum_a: sum,
                        vertex_b: u,
                        sum_b: s,
                    });
                }
            }
            q.set(bi, bj, sum as i128);
        }
    }
    Ok(q)
}

/// Eigenvalues of the quotient matrix of an equitable partition.
///
/// The quotient is not symmetric in general, but for an equitable partition
/// of a symmetric matrix it is similar to a symmetric matrix by the
/// diagonal block-size scaling, which is what gets solved here. Every
/// returned eigenvalue is an eigenvalue of `m`.
pub fn quotient_spectrum(m: &SignedMatrix, p: &Partition) -> Result<Spectrum> {
    let q = quotient_matrix(m, p)?;
    let sizes = p.block_sizes();
    let k = q.order();
    let mut b = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            // d_i * q_ij == d_j * q_ji for quotients of symmetric matrices
            debug_assert_eq!(
                sizes[i] as i128 * q.get(i, j),
                sizes[j] as i128 * q.get(j, i)
            );
            b[i * k + j] = q.get(i, j) as f64 * (sizes[i] as f64 / sizes[j] as f64).sqrt();
        }
    }
    // force exact symmetry against rounding in the scaling
    for i in 0..k {
        for j in i + 1..k {
            let avg = 0.5 * (b[i * k + j] + b[j * k + i]);
            b[i * k + j] = avg;
            b[j * k + i] = avg;
        }
    }
    let mut a = b;
    jacobi_eigen(k, &mut a, None);
    Ok(Spectrum::from_unsorted(
        (0..k).map(|i| a[i * k + i]).collect(),
    ))
}

/// The cubic `x^3 + (3-n)x^2 + (3-n-r)x + (n+4)r - (r^2+n+7)` whose largest
/// root is the index of the one-negative-edge extremal construction on
/// parameters `(n, r)`.
pub fn gamma_cubic(n: usize, r: usize) -> Result<IntPolynomial> {
    if !(3..=n.saturating_sub(1)).contains(&r) {
        return Err(Error::ParameterRange(format!(
            "gamma cubic requires 3 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let (n, r) = (n as i128, r as i128);
    Ok(IntPolynomial::new(vec![
        (n + 4) * r - (r * r + n + 7),
        3 - n - r,
        3 - n,
        1,
    ]))
}

const ROOT_GRID_STEP: f64 = 1e-3;
const ROOT_BISECT_TOL: f64 = 1e-13;

/// The largest real root of `p` in `[lo, hi]`, to absolute accuracy 1e-12.
///
/// Works on the squarefree part of `p` (same root set, odd multiplicities),
/// isolates the rightmost sign change on a 1e-3 grid walked down from `hi`,
/// and bisects. A grid point where the evaluation is exactly zero is
/// returned as a root directly.
pub fn largest_real_root(p: &IntPolynomial, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::ParameterRange(format!(
            "invalid bracket [{lo}, {hi}]"
        )));
    }
    if p.degree().is_none_or(|d| d == 0) {
        return Err(Error::ParameterRange(
            "root isolation needs a nonconstant polynomial".into(),
        ));
    }
    let q = p.squarefree_part()?;
    let mut prev_x = hi;
    let mut prev_f = q.eval_f64(hi);
    if prev_f == 0.0 {
        return Ok(hi);
    }
    let steps = ((hi - lo) / ROOT_GRID_STEP).ceil().max(1.0) as usize;
    for i in 1..=steps {
        let x = if i == steps {
            lo
        } else {
            hi - i as f64 * ROOT_GRID_STEP
        };
        let fx = q.eval_f64(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) != (prev_f > 0.0) {
            return Ok(bisect(&q, x, fx, prev_x));
        }
        prev_x = x;
        prev_f = fx;
    }
    Err(Error::NoSignChange { lo, hi })
}

fn bisect(q: &IntPolynomial, mut lo: f64, f_lo: f64, mut hi: f64) -> f64 {
    let lo_positive = f_lo > 0.0;
    while hi - lo > ROOT_BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = q.eval_f64(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, gamma_construction};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn assert_multiset_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert_close(*x, *y, tol);
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let s = spectrum(&complete(3, 1).unwrap());
        assert_multiset_close(s.values(), &[2.0, -1.0, -1.0], 1e-10);
    }

    #[test]
    fn one_negative_edge_triangle_spectrum() {
        // characteristic polynomial x^3 - 3x + 2 = (x-1)^2 (x+2)
        let g = SignedGraph::new(3, &[(0, 1, 1), (0, 2, 1), (1, 2, -1)]).unwrap();
        let s = spectrum(&g);
        assert_multiset_close(s.values(), &[1.0, 1.0, -2.0], 1e-10);
        assert_close(s.spectral_radius(), 2.0, 1e-10);
        assert_close(s.index(), 1.0, 1e-10);
    }

    #[test]
    fn index_examples() {
        for n in 2..=8 {
            assert_close(index(&complete(n, 1).unwrap()), (n - 1) as f64, 1e-9);
        }
        assert_close(index(&SignedGraph::new(3, &[]).unwrap()), 0.0, 1e-12);
        // the r = 3 construction pins the index at exactly n - 2
        for n in 4..=12 {
            assert_close(
                index(&gamma_construction(n, 3).unwrap()),
                (n - 2) as f64,
                1e-9,
            );
        }
    }

    #[test]
    fn gamma_index_bracket_matches_cubic_signs() {
        let g = gamma_construction(10, 4).unwrap();
        let lambda = index(&g);
        assert!(lambda > 8.0 && lambda < 8.05, "index {lambda}");
        let f = gamma_cubic(10, 4).unwrap();
        assert_eq!(f.eval_exact(8).unwrap(), -1);
        assert!(f.eval_f64(8.05) > 0.0);
    }

    #[test]
    fn leading_eigenvector_examples() {
        let (lambda, x) = leading_eigenpair(&complete(3, 1).unwrap());
        assert_close(lambda, 2.0, 1e-10);
        let inv = 1.0 / 3f64.sqrt();
        let aligned =
            x.iter().all(|&t| (t - inv).abs() < 1e-8) || x.iter().all(|&t| (t + inv).abs() < 1e-8);
        assert!(aligned, "expected uniform eigenvector, got {x:?}");

        // degenerate top eigenvalue: only the residual is promised
        let g = SignedGraph::new(3, &[(0, 1, 1), (0, 2, 1), (1, 2, -1)]).unwrap();
        check_residual(&g, 1e-8);
        check_residual(&gamma_construction(5, 3).unwrap(), 1e-8);
    }

    fn check_residual(g: &SignedGraph, tol: f64) {
        let (lambda, x) = leading_eigenpair(g);
        let m = g.adjacency_matrix();
        let n = g.order();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut ax = 0.0;
            for j in 0..n {
                ax += m.get(i, j) as f64 * x[j];
            }
            worst = worst.max((ax - lambda * x[i]).abs());
        }
        assert!(worst < tol, "residual {worst}");
    }

    #[test]
    fn char_poly_examples() {
        let g = SignedGraph::new(3, &[(0, 1, 1), (0, 2, 1), (1, 2, -1)]).unwrap();
        let p = char_poly(&IntMatrix::from(&g.adjacency_matrix())).unwrap();
        assert_eq!(p.coeffs(), &[2, -3, 0, 1]);
        assert_eq!(p.to_string(), "x^3 - 3x + 2");

        let zero = IntMatrix::zero(2);
        assert_eq!(char_poly(&zero).unwrap().coeffs(), &[0, 0, 1]);
    }

    #[test]
    fn quotient_of_gamma_matches_known_matrix() {
        let (n, r) = (10usize, 4usize);
        let g = gamma_construction(n, r).unwrap();
        let p = Partition::new(
            n,
            vec![vec![0], vec![1], (2..r).collect(), (r..n).collect()],
        )
        .unwrap();
        let q = quotient_matrix(&g.adjacency_matrix(), &p).unwrap();
        let (ni, ri) = (n as i128, r as i128);
        let expected = [
            [0, -1, ri - 2, 0],
            [-1, 0, ri - 2, ni - ri],
            [1, 1, ri - 3, ni - ri],
            [0, 1, ri - 2, ni - ri - 1],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(q.get(i, j), expected[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn quotient_char_poly_factors_through_cubic() {
        for n in 5..=14 {
            for r in 3..n {
                let g = gamma_construction(n, r).unwrap();
                let p = Partition::new(
                    n,
                    vec![vec![0], vec![1], (2..r).collect(), (r..n).collect()],
                )
                .unwrap();
                let q = quotient_matrix(&g.adjacency_matrix(), &p).unwrap();
                let qp = char_poly(&q).unwrap();
                let f = gamma_cubic(n, r).unwrap();
                let expected = IntPolynomial::new(vec![1, 1]).mul(&f).unwrap();
                assert_eq!(qp, expected, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn quotient_trivial_partitions() {
        let k4 = complete(4, 1).unwrap();
        let m = k4.adjacency_matrix();
        let q = quotient_matrix(&m, &Partition::singletons(4)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(q.get(i, j), m.get(i, j) as i128);
            }
        }
        let whole = Partition::new(4, vec![(0..4).collect()]).unwrap();
        let q1 = quotient_matrix(&m, &whole).unwrap();
        assert_eq!(q1.get(0, 0), 3);
    }

    #[test]
    fn quotient_rejects_non_equitable_partition() {
        // path 0-1-2: {0,1} vs {2} is not equitable
        let path = SignedGraph::new(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let err = quotient_matrix(&path.adjacency_matrix(), &p).unwrap_err();
        match err {
            Error::NotEquitable {
                block_row,
                block_col,
                vertex_a,
                sum_a,
                vertex_b,
                sum_b,
            } => {
                assert_eq!((block_row, block_col), (0, 1));
                assert_eq!((vertex_a, sum_a), (0, 0));
                assert_eq!((vertex_b, sum_b), (1, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn quotient_eigenvalues_are_graph_eigenvalues() {
        let (n, r) = (9usize, 5usize);
        let g = gamma_construction(n, r).unwrap();
        let p = Partition::new(
            n,
            vec![vec![0], vec![1], (2..r).collect(), (r..n).collect()],
        )
        .unwrap();
        let qs = quotient_spectrum(&g.adjacency_matrix(), &p).unwrap();
        let full = spectrum(&g);
        // each quotient eigenvalue appears in the full spectrum
        for &lam in qs.values() {
            assert!(
                full.values().iter().any(|&mu| (mu - lam).abs() < 1e-8),
                "missing eigenvalue {lam}"
            );
        }
        // and the remainder is -1 with multiplicity n - 4
        let mut rest: Vec<f64> = full.values().to_vec();
        for &lam in qs.values() {
            let pos = rest
                .iter()
                .position(|&mu| (mu - lam).abs() < 1e-8)
                .expect("eigenvalue present");
            rest.remove(pos);
        }
        assert_eq!(rest.len(), n - 4);
        for &mu in &rest {
            assert_close(mu, -1.0, 1e-8);
        }
    }

    #[test]
    fn gamma_cubic_examples() {
        let f = gamma_cubic(10, 4).unwrap();
        assert_eq!(f.coeffs(), &[23, -11, -7, 1]);
        assert_eq!(f.to_string(), "x^3 - 7x^2 - 11x + 23");
        assert_eq!(f.eval_exact(8).unwrap(), -1);
        // the exact boundary value is -(r-3)^2: non-positive for every r,
        // zero exactly at r = 3
        for n in 4..=30 {
            for r in 3..n {
                let f = gamma_cubic(n, r).unwrap();
                let at = f.eval_exact(n as i128 - 2).unwrap();
                let r = r as i128;
                assert_eq!(at, -(r - 3) * (r - 3), "f(n-2) at n={n}, r={r}");
            }
        }
        assert_eq!(gamma_cubic(10, 3).unwrap().eval_exact(8).unwrap(), 0);
        assert!(gamma_cubic(10, 2).is_err());
        assert!(gamma_cubic(5, 5).is_err());
    }

    #[test]
    fn largest_real_root_handles_double_roots() {
        // (x-1)^2 (x+2): the largest root is the double root at 1
        let p = IntPolynomial::new(vec![2, -3, 0, 1]);
        let root = largest_real_root(&p, 0.0, 3.0).unwrap();
        assert_close(root, 1.0, 1e-12);
    }

    #[test]
    fn largest_real_root_exact_grid_hit() {
        let f = gamma_cubic(10, 3).unwrap();
        let root = largest_real_root(&f, 8.0, 9.0).unwrap();
        assert_eq!(root, 8.0);
    }

    #[test]
    fn largest_real_root_matches_index() {
        let f = gamma_cubic(10, 4).unwrap();
        let root = largest_real_root(&f, 8.0, 9.0).unwrap();
        let lambda = index(&gamma_construction(10, 4).unwrap());
        assert_close(root, lambda, 1e-9);
    }

    #[test]
    fn largest_real_root_errors_without_roots() {
        let p = IntPolynomial::new(vec![1, 0, 1]); // x^2 + 1
        assert!(matches!(
            largest_real_root(&p, -5.0, 5.0),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn polynomial_gcd_and_squarefree() {
        let p = IntPolynomial::new(vec![2, -3, 0, 1]); // (x-1)^2 (x+2)
        let sf = p.squarefree_part().unwrap();
        assert_eq!(sf.coeffs(), &[-2, 1, 1]); // (x-1)(x+2) = x^2 + x - 2
        let d = p.gcd(&p.derivative()).unwrap();
        assert_eq!(d.coeffs(), &[-1, 1]); // x - 1
                                          // coprime case
        let a = IntPolynomial::new(vec![-1, 1]);
        let b = IntPolynomial::new(vec![2, 1]);
        assert_eq!(a.gcd(&b).unwrap().coeffs(), &[1]);
    }

    #[test]
    fn spectrum_has_zero_trace_for_graphs() {
        let g = gamma_construction(8, 5).unwrap();
        let s = spectrum(&g);
        let sum: f64 = s.values().iter().sum();
        assert!(sum.abs() <= 1e-9 * g.order() as f64);
    }

    #[test]
    fn symmetric_eigenvalues_rejects_asymmetry() {
        let data = vec![0.0, 1.0, 0.0, 0.0];
        assert!(matches!(
            symmetric_eigenvalues(2, &data),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        ));
    }
}
