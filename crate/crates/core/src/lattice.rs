//! Exact integer-lattice algorithms: Hermite and Smith normal forms, integer
//! kernels and P'-saturation of subgroups of finitely generated abelian groups.
//!
//! Vectors are rows; a lattice is the row span of a matrix. Matrices hold
//! arbitrary-precision entries because unimodular transforms grow quickly;
//! the lattice helpers take and return `Int` rows and reduce to Hermite form
//! before converting back.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::pc::Int;
use crate::primes::PrimeSet;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

pub(crate) fn big(x: Int) -> BigInt {
    BigInt::from(x)
}

pub(crate) fn small(x: &BigInt) -> Result<Int> {
    x.to_i128().ok_or(Error::Overflow)
}

fn small_rows(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<Int>>> {
    rows.iter().map(|r| r.iter().map(small).collect()).collect()
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[Vec<Int>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().map(|&x| big(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_big_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as `Int`, failing when an entry does not fit.
    pub fn to_rows(&self) -> Result<Vec<Vec<Int>>> {
        small_rows(&self.big_rows())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination; square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        bareiss(self)
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

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if !k.is_zero() {
            for j in 0..self.cols {
                let v = k * &self.data[src * self.cols + j];
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if !k.is_zero() {
            for i in 0..self.rows {
                let v = k * &self.data[i * self.cols + src];
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -core::mem::take(x);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = -core::mem::take(x);
        }
    }

    /// Right-multiplies by the inverse of the row move `mix_rows(r, i, e)`.
    fn mix_cols_inverse(&mut self, r: usize, i: usize, (s, u, v, w): (&BigInt, &BigInt, &BigInt, &BigInt)) {
        for k in 0..self.rows {
            let (a, b) = (self[(k, r)].clone(), self[(k, i)].clone());
            self[(k, r)] = w * &a - v * &b;
            self[(k, i)] = s * &b - u * &a;
        }
    }

    /// Column move: new col `i` = s col_i + u col_j, new col `j` = v col_i + w col_j.
    fn mix_cols(&mut self, i: usize, j: usize, (s, u, v, w): (&BigInt, &BigInt, &BigInt, &BigInt)) {
        for k in 0..self.rows {
            let (a, b) = (self[(k, i)].clone(), self[(k, j)].clone());
            self[(k, i)] = s * &a + u * &b;
            self[(k, j)] = v * &a + w * &b;
        }
    }

    fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Replaces rows `r, i` by `[s u; v w] * [row r; row i]`.
    fn mix_rows(&mut self, r: usize, i: usize, (s, u, v, w): (&BigInt, &BigInt, &BigInt, &BigInt)) {
        for j in 0..self.cols {
            let (a, b) = (self[(r, j)].clone(), self[(i, j)].clone());
            self[(r, j)] = s * &a + u * &b;
            self[(i, j)] = v * &a + w * &b;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

fn bareiss(t: &IntMatrix) -> BigInt {
    let n = t.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = t.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = x / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Row echelon (Hermite) form with transform: `transform * input = form`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub form: IntMatrix,
    pub transform: IntMatrix,
    /// Inverse of `transform`.
    pub inverse: IntMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Hermite normal form of the row lattice: positive pivots, entries above a
/// pivot reduced into `[0, pivot)`, zero rows last.
pub fn row_echelon(m: &IntMatrix) -> Echelon {
    let mut a = m.clone();
    let mut t = IntMatrix::identity(m.rows);
    let mut ti = IntMatrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        // gcd-combine all rows below r into row r
        for i in r + 1..m.rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            if a[(r, c)].is_zero() {
                a.swap_rows(r, i);
                t.swap_rows(r, i);
                ti.swap_cols(r, i);
                continue;
            }
            let (x, y) = (a[(r, c)].clone(), a[(i, c)].clone());
            if y.is_multiple_of(&x) {
                let k = -(&y / &x);
                a.add_row(i, r, &k);
                t.add_row(i, r, &k);
                ti.add_col(r, i, &-k);
                continue;
            }
            let e = x.extended_gcd(&y);
            let (p, q) = (&x / &e.gcd, &y / &e.gcd);
            // [s u; -q p] has determinant s*p + u*q = 1
            let mq = -q;
            a.mix_rows(r, i, (&e.x, &e.y, &mq, &p));
            t.mix_rows(r, i, (&e.x, &e.y, &mq, &p));
            ti.mix_cols_inverse(r, i, (&e.x, &e.y, &mq, &p));
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
            t.negate_row(r);
            ti.negate_col(r);
        }
        let piv = a[(r, c)].clone();
        for i in 0..r {
            let k = -a[(i, c)].div_floor(&piv);
            a.add_row(i, r, &k);
            t.add_row(i, r, &k);
            ti.add_col(r, i, &-k);
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { form: a, transform: t, inverse: ti, pivots, rank: r }
}

fn big_basis(cols: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let e = row_echelon(&IntMatrix::from_big_rows(cols, rows));
    (0..e.rank).map(|i| e.form.row(i).to_vec()).collect()
}

/// HNF basis (nonzero rows) of the lattice spanned by `rows` in `Z^cols`.
pub fn lattice_basis(cols: usize, rows: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
    small_rows(&big_basis(cols, &rows))
}

/// Membership of `v` in the lattice with HNF basis `basis`.
pub fn lattice_contains(basis: &[Vec<Int>], v: &[Int]) -> bool {
    let mut v: Vec<BigInt> = v.iter().map(|&x| big(x)).collect();
    for b in basis {
        let c = match b.iter().position(|&x| x != 0) {
            Some(c) => c,
            None => continue,
        };
        if let Some(first) = v.iter().position(|x| !x.is_zero()) {
            if first < c {
                return false;
            }
        }
        let bc = big(b[c]);
        if !v[c].is_multiple_of(&bc) {
            return false;
        }
        let k = &v[c] / &bc;
        for (x, &y) in v.iter_mut().zip(b) {
            *x -= &k * big(y);
        }
    }
    v.iter().all(Zero::is_zero)
}

/// Hermite-reduced basis of `{ y : y * m = 0 }`.
pub fn left_kernel(m: &IntMatrix) -> Result<Vec<Vec<Int>>> {
    let e = row_echelon(m);
    let rows: Vec<Vec<BigInt>> = (e.rank..m.rows).map(|i| e.transform.row(i).to_vec()).collect();
    small_rows(&big_basis(m.rows, &rows))
}

/// Smith normal form `u * m * v = s` with `v_inv = v^-1`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// Diagonal entries `s[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Smith normal form by alternating row and column Hermite reduction, then
/// gcd/lcm moves on the diagonal. Reducing modulo pivots at every pass keeps
/// entry growth in check.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let mut vi = IntMatrix::identity(m.cols);
    loop {
        let e = row_echelon(&a);
        a = e.form;
        u = e.transform.mul(&u);
        if a.is_diagonal() {
            break;
        }
        // column pass: T a^T = F  =>  a T^T = F^T
        let e = row_echelon(&a.transpose());
        a = e.form.transpose();
        v = v.mul(&e.transform.transpose());
        vi = e.inverse.transpose().mul(&vi);
        if a.is_diagonal() {
            break;
        }
    }
    let k = (0..m.rows.min(m.cols)).take_while(|&i| !a[(i, i)].is_zero()).count();
    for i in 0..k {
        for j in i + 1..k {
            let (x, y) = (a[(i, i)].clone(), a[(j, j)].clone());
            if y.is_multiple_of(&x) {
                continue;
            }
            let e = x.extended_gcd(&y);
            let g = e.gcd;
            let (xg, yg) = (&x / &g, &y / &g);
            // row i += row j, then columns by [s -y/g; t x/g], then clear (j, i)
            a.add_row(i, j, &BigInt::one());
            u.add_row(i, j, &BigInt::one());
            let c = (&e.x, &e.y, &-&yg, &xg);
            a.mix_cols(i, j, c);
            v.mix_cols(i, j, c);
            vi.mix_rows(i, j, (&xg, &yg, &-&e.y, &e.x));
            let k = -(&a[(j, i)] / &a[(i, i)]);
            a.add_row(j, i, &k);
            u.add_row(j, i, &k);
        }
    }
    for i in 0..k {
        if a[(i, i)].is_negative() {
            a.negate_row(i);
            u.negate_row(i);
        }
    }
    Smith { u, s: a, v, v_inv: vi }
}

/// A finitely generated abelian group `Z^rank / <relations>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub relations: Vec<Vec<Int>>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, relations: Vec::new() }
    }

    pub fn new(rank: usize, relations: Vec<Vec<Int>>) -> Result<Self> {
        Ok(AbelianGroup { rank, relations: lattice_basis(rank, &relations)? })
    }

    /// Invariant factors: torsion coefficients (>1) followed by zeros for the free rank.
    pub fn invariants(&self) -> Result<Vec<Int>> {
        if self.rank == 0 {
            return Ok(Vec::new());
        }
        let mut d: Vec<Int> = if self.relations.is_empty() {
            Vec::new()
        } else {
            let s = smith_normal_form(&IntMatrix::from_rows(self.rank, &self.relations));
            s.diagonal().iter().map(small).collect::<Result<_>>()?
        };
        d.resize(self.rank, 0);
        let mut out: Vec<Int> = d.iter().copied().filter(|&x| x != 1 && x != 0).collect();
        out.extend(d.iter().filter(|&&x| x == 0));
        Ok(out)
    }

    pub fn free_rank(&self) -> usize {
        // the relations are a Hermite basis, so their count is the lattice rank
        self.rank - self.relations.len()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Result<Int> {
        self.invariants()?.iter().filter(|&&x| x != 0).try_fold(1 as Int, |a, &x| a.checked_mul(x).ok_or(Error::Overflow))
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Is `v` zero in the group?
    pub fn is_zero(&self, v: &[Int]) -> bool {
        lattice_contains(&self.relations, v)
    }
}

/// `{ x in A : q x in Y for some P'-number q }` where `A = Z^r / R`.
///
/// Returns an HNF basis of the saturated lattice in `Z^r`; it always contains
/// `R` and `Y`. In Smith coordinates of `Y + R` this keeps exactly the P-parts
/// of the elementary divisors.
pub fn abelian_saturation(group: &AbelianGroup, subgroup: &[Vec<Int>], primes: &PrimeSet) -> Result<Vec<Vec<Int>>> {
    let r = group.rank;
    let mut gens: Vec<Vec<Int>> = group.relations.clone();
    gens.extend(subgroup.iter().cloned());
    gens.retain(|g| g.iter().any(|&x| x != 0));
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(r, &gens));
    let mut out = Vec::new();
    for (i, d) in snf.diagonal().iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let k = big(primes.p_part(small(d)?));
        out.push(snf.v_inv.row(i).iter().map(|x| x * &k).collect());
    }
    small_rows(&big_basis(r, &out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&[Int]]) -> IntMatrix {
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(cols, &rows)
    }

    fn diag(s: &Smith) -> Vec<Int> {
        s.diagonal().iter().map(|x| small(x).unwrap()).collect()
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&m(2, &[&[6, 0], &[0, 10]]));
        assert_eq!(diag(&s), vec![2, 30]);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert!(z.s.is_zero());
        let id = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(id.s, IntMatrix::identity(3));
    }

    #[test]
    fn saturation_examples() {
        let z = AbelianGroup::free(1);
        let two = PrimeSet::single(2).unwrap();
        assert_eq!(abelian_saturation(&z, &[vec![12]], &two).unwrap(), vec![vec![4]]);
        assert_eq!(abelian_saturation(&z, &[vec![1]], &two).unwrap(), vec![vec![1]]);
        assert_eq!(abelian_saturation(&z, &[vec![12]], &PrimeSet::All).unwrap(), vec![vec![12]]);
        // Z/12 with Y = 0: the 3-torsion is {2}'-torsion
        let c12 = AbelianGroup::new(1, vec![vec![12]]).unwrap();
        assert_eq!(abelian_saturation(&c12, &[], &two).unwrap(), vec![vec![4]]);
    }

    #[test]
    fn saturation_matches_exhaustive_roots_in_z() {
        let z = AbelianGroup::free(1);
        let sat = abelian_saturation(&z, &[vec![12]], &PrimeSet::single(2).unwrap()).unwrap();
        for x in -100i128..=100 {
            let rooted = (1..=23).step_by(2).any(|q| (q * x) % 12 == 0);
            assert_eq!(lattice_contains(&sat, &[x]), rooted, "x = {x}");
        }
    }

    #[test]
    fn kernel_and_membership() {
        let a = m(1, &[&[2], &[3]]);
        let k = left_kernel(&a).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(2 * k[0][0] + 3 * k[0][1], 0);
        let basis = lattice_basis(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert!(lattice_contains(&basis, &[4, -3]));
        assert!(!lattice_contains(&basis, &[1, 0]));
        assert_eq!(m(2, &[&[2, 1], &[1, 1]]).determinant(), big(1));
        assert_eq!(m(2, &[&[0, 1], &[1, 0]]).determinant(), big(-1));
        assert_eq!(m(2, &[&[4, 6], &[2, 3]]).determinant(), big(0));
    }

    #[test]
    fn invariants_of_abelian_groups() {
        let inv = |rows: Vec<Vec<Int>>| AbelianGroup::new(2, rows).unwrap().invariants().unwrap();
        assert_eq!(inv(vec![vec![4, 0], vec![0, 2]]), vec![2, 4]);
        assert_eq!(inv(vec![vec![6, 0]]), vec![6, 0]);
        assert_eq!(inv(vec![vec![2, 0], vec![0, 3]]), vec![6]);
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<Int>>> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-50i128..=50, c), r))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn smith_is_a_valid_decomposition(rows in matrix_strategy()) {
            let a = IntMatrix::from_rows(rows[0].len(), &rows);
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.s.clone());
            prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.ncols()));
            prop_assert_eq!(s.u.determinant().abs(), BigInt::one());
            prop_assert_eq!(s.v.determinant().abs(), BigInt::one());
            for i in 0..s.s.nrows() {
                for j in 0..s.s.ncols() {
                    if i != j { prop_assert!(s.s[(i, j)].is_zero()); }
                }
            }
            let d = s.diagonal();
            for w in d.windows(2) {
                prop_assert!(!w[0].is_negative());
                if w[0].is_zero() { prop_assert!(w[1].is_zero()); } else { prop_assert!(w[1].is_multiple_of(&w[0])); }
            }
        }

        #[test]
        fn saturation_is_idempotent_and_monotone(
            a in 1i128..60, b in 1i128..60, c in 0i128..60, extra in 1i128..60, mask in 1u8..8
        ) {
            let chosen: Vec<u64> = [2u64, 3, 5].iter().enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| *p).collect();
            let p = PrimeSet::explicit(chosen).unwrap();
            let g = AbelianGroup::new(2, vec![vec![0, extra * 4]]).unwrap();
            let y = vec![vec![a, c], vec![0, b]];
            let s1 = abelian_saturation(&g, &y, &p).unwrap();
            let s2 = abelian_saturation(&g, &s1, &p).unwrap();
            prop_assert_eq!(&s1, &s2);
            let mut bigger = y.clone();
            bigger.push(vec![1, 1]);
            let sb = abelian_saturation(&g, &bigger, &p).unwrap();
            for row in &s1 {
                prop_assert!(lattice_contains(&sb, row));
            }
        }
    }
}
