//! Integer matrices and lattices in `Z^n`: Hermite and Smith normal forms,
//! kernels, intersections and canonical coset representatives.
//!
//! Lattice vectors are rows. Arithmetic is checked `i64`; the exponent
//! lattices arising here have small entries and an overflow is a bug.

use num_integer::Integer;

pub type IntMatrix = Vec<Vec<i64>>;

fn ck(v: Option<i64>) -> i64 {
    v.expect("integer overflow in lattice arithmetic")
}

fn axpy(dst: &mut [i64], q: i64, src: &[i64]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        *d = ck(d.checked_sub(ck(q.checked_mul(*s))));
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(0i64, |acc, k| ck(acc.checked_add(ck(row[k].checked_mul(b[k][j])))))
                })
                .collect()
        })
        .collect()
}

/// `v * M` for a row vector `v`.
pub fn vec_mat(v: &[i64], m: &[Vec<i64>], cols: usize) -> Vec<i64> {
    (0..cols)
        .map(|j| v.iter().zip(m).fold(0i64, |acc, (a, row)| ck(acc.checked_add(ck(a.checked_mul(row[j]))))))
        .collect()
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`; nonnegative, each entry
    /// divides the next, zeros last.
    pub d: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> Snf {
    let r = a.len();
    let c = cols;
    let mut m: IntMatrix = a.to_vec();
    let mut u = identity(r);
    let mut v = identity(c);
    let mut vi = identity(c);

    let swap_cols = |m: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };
    // col_j -= q * col_t
    let col_op = |m: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, t: usize, j: usize, q: i64| {
        for row in m.iter_mut() {
            row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))));
        }
        for row in v.iter_mut() {
            row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))));
        }
        let rj = vi[j].clone();
        axpy(&mut vi[t], -q, &rj);
    };

    let n = r.min(c);
    for t in 0..n {
        // pivot: smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, &mut v, &mut vi, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if m[i][t] != 0 {
                    let q = Integer::div_floor(&m[i][t], &m[t][t]);
                    let (rt, ut) = (m[t].clone(), u[t].clone());
                    axpy(&mut m[i], q, &rt);
                    axpy(&mut u[i], q, &ut);
                    clean &= m[i][t] == 0;
                }
            }
            for j in t + 1..c {
                if m[t][j] != 0 {
                    let q = Integer::div_floor(&m[t][j], &m[t][t]);
                    col_op(&mut m, &mut v, &mut vi, t, j, q);
                    clean &= m[t][j] == 0;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..r {
                    if m[i][t] != 0 && m[i][t].abs() < m[bi][bj].abs() {
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..c {
                    if m[t][j] != 0 && m[t][j].abs() < m[bi][bj].abs() {
                        (bi, bj) = (t, j);
                    }
                }
                m.swap(t, bi);
                u.swap(t, bi);
                swap_cols(&mut m, &mut v, &mut vi, t, bj);
                continue;
            }
            // divisibility of the trailing block
            let p = m[t][t];
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let (ri, ui) = (m[i].clone(), u[i].clone());
                    axpy(&mut m[t], -1, &ri);
                    axpy(&mut u[t], -1, &ui);
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let d = (0..n).map(|i| m[i][i]).collect();
    Snf { u, v, v_inv: vi, d, rows: r, cols: c }
}

/// Row Hermite normal form basis of the lattice spanned by `gens`:
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_basis(gens: &[Vec<i64>], cols: usize) -> IntMatrix {
    let mut m: IntMatrix = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
    let mut out: IntMatrix = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        loop {
            let piv = (row..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].abs());
            let Some(p) = piv else { break };
            m.swap(row, p);
            let mut done = true;
            for i in row + 1..m.len() {
                if m[i][col] != 0 {
                    let q = Integer::div_floor(&m[i][col], &m[row][col]);
                    let r0 = m[row].clone();
                    axpy(&mut m[i], q, &r0);
                    done &= m[i][col] == 0;
                }
            }
            if done {
                break;
            }
        }
        if m[row][col] == 0 {
            continue;
        }
        if m[row][col] < 0 {
            for x in m[row].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..row {
            let q = Integer::div_floor(&m[i][col], &m[row][col]);
            if q != 0 {
                let r0 = m[row].clone();
                axpy(&mut m[i], q, &r0);
            }
        }
        row += 1;
    }
    out.extend(m.into_iter().take(row));
    out
}

/// Basis (in Hermite form) of `{x in Z^cols : A x = 0}`.
pub fn integer_kernel(a: &[Vec<i64>], cols: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(cols);
    }
    let snf = smith_normal_form(a, cols);
    let rank = snf.rank();
    let gens: IntMatrix = (rank..cols).map(|j| snf.v.iter().map(|row| row[j]).collect()).collect();
    hermite_basis(&gens, cols)
}

/// A sublattice of `Z^dim`, stored by its Hermite basis together with a
/// Smith decomposition for coset reduction.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    dim: usize,
    basis: IntMatrix,
    snf: Snf,
}

impl PartialEq for IntegerLattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis == other.basis
    }
}

impl Eq for IntegerLattice {}

impl IntegerLattice {
    pub fn new(dim: usize, gens: &[Vec<i64>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), dim, "lattice generator has wrong length");
        }
        let basis = hermite_basis(gens, dim);
        let snf = smith_normal_form(&basis, dim);
        IntegerLattice { dim, basis, snf }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, &[])
    }

    pub fn full(dim: usize) -> Self {
        Self::new(dim, &identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Smith data of the Hermite basis: `U * B * V = D`.
    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// Canonical representative of `v + L`: in the coordinates `y = v V`
    /// each entry against a nonzero invariant `d_i` is reduced into
    /// `[0, d_i)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut y = vec_mat(v, &self.snf.v, self.dim);
        for (i, &d) in self.snf.d.iter().enumerate() {
            if d != 0 {
                y[i] = y[i].mod_floor(&d);
            }
        }
        vec_mat(&y, &self.snf.v_inv, self.dim)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_lattice(&self, other: &IntegerLattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &IntegerLattice) -> Self {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::new(self.dim, &gens)
    }

    pub fn intersect(&self, other: &IntegerLattice) -> Self {
        let (r1, r2) = (self.rank(), other.rank());
        if r1 == 0 || r2 == 0 {
            return Self::zero(self.dim);
        }
        // a B1 - b B2 = 0
        let m: IntMatrix = (0..self.dim)
            .map(|j| {
                let mut row: Vec<i64> = self.basis.iter().map(|b| b[j]).collect();
                row.extend(other.basis.iter().map(|b| -b[j]));
                row
            })
            .collect();
        let ker = integer_kernel(&m, r1 + r2);
        let gens: IntMatrix = ker.iter().map(|k| vec_mat(&k[..r1], &self.basis, self.dim)).collect();
        Self::new(self.dim, &gens)
    }

    /// Invariant factors of `Z^dim / L`: the torsion orders greater than
    /// one, followed by a `0` for every free summand.
    pub fn quotient_invariants(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.snf.d.iter().copied().filter(|&d| d > 1).collect();
        out.extend(std::iter::repeat_n(0, self.dim - self.rank()));
        out
    }

    /// Order of `Z^dim / L`, `None` when infinite.
    pub fn index(&self) -> Option<u64> {
        (self.rank() == self.dim).then(|| self.snf.d.iter().map(|&d| d as u64).product())
    }

    /// `[sup : self]` for `self` contained in `sup`; `None` if infinite.
    pub fn index_in(&self, sup: &IntegerLattice) -> Option<u64> {
        assert!(sup.contains_lattice(self), "not a sublattice");
        if self.rank() != sup.rank() {
            return None;
        }
        let (a, b) = (self.index_sat(), sup.index_sat());
        Some(a / b)
    }

    // order of the torsion part of Z^dim / L
    fn index_sat(&self) -> u64 {
        self.snf.d.iter().filter(|&&d| d != 0).map(|&d| d as u64).product()
    }

    /// `L ⊗ Q ∩ Z^dim`.
    pub fn saturation(&self) -> Self {
        // the rows of V^{-1} against nonzero invariants span the saturation
        let gens: IntMatrix = (0..self.rank()).map(|i| self.snf.v_inv[i].clone()).collect();
        Self::new(self.dim, &gens)
    }
}
