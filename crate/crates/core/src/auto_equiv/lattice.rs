//! Integer row reduction: Hermite and Smith normal forms, quotient groups.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AutoEquivError;

/// Integers with arithmetic that may report overflow.
pub trait ExactInt: Clone + PartialEq + Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn try_add(&self, other: &Self) -> Option<Self>;
    fn try_sub(&self, other: &Self) -> Option<Self>;
    fn try_mul(&self, other: &Self) -> Option<Self>;
    fn try_neg(&self) -> Option<Self>;
    /// Truncating quotient.
    fn quot(&self, other: &Self) -> Option<Self>;
    /// Floor quotient, so `a - q·b` lies in `[0, |b|)` for `b > 0`.
    fn floor_quot(&self, other: &Self) -> Option<Self>;
}

impl ExactInt for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn try_add(&self, other: &Self) -> Option<Self> {
        i64::checked_add(*self, *other)
    }
    fn try_sub(&self, other: &Self) -> Option<Self> {
        i64::checked_sub(*self, *other)
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        i64::checked_mul(*self, *other)
    }
    fn try_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn quot(&self, other: &Self) -> Option<Self> {
        i64::checked_div(*self, *other)
    }
    fn floor_quot(&self, other: &Self) -> Option<Self> {
        let q = i64::checked_div(*self, *other)?;
        if (*self % *other != 0) && ((*self < 0) != (*other < 0)) {
            q.checked_sub(1)
        } else {
            Some(q)
        }
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn try_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn try_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn try_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }
    fn floor_quot(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| num_integer::Integer::div_floor(self, other))
    }
}

type Matrix<T> = Vec<Vec<T>>;

fn ovf<T>(v: Option<T>) -> Result<T, AutoEquivError> {
    v.ok_or(AutoEquivError::Overflow)
}

/// `rows[dst] -= q · rows[src]`.
fn row_axpy<T: ExactInt>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) -> Result<(), AutoEquivError> {
    if q.is_zero() {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        let d = ovf(m[src][j].try_mul(q))?;
        m[dst][j] = ovf(m[dst][j].try_sub(&d))?;
    }
    Ok(())
}

/// `cols[dst] -= q · cols[src]`.
fn col_axpy<T: ExactInt>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) -> Result<(), AutoEquivError> {
    if q.is_zero() {
        return Ok(());
    }
    for row in m.iter_mut() {
        let d = ovf(row[src].try_mul(q))?;
        row[dst] = ovf(row[dst].try_sub(&d))?;
    }
    Ok(())
}

fn negate_row<T: ExactInt>(m: &mut Matrix<T>, i: usize) -> Result<(), AutoEquivError> {
    for v in m[i].iter_mut() {
        *v = ovf(v.try_neg())?;
    }
    Ok(())
}

fn identity<T: ExactInt>(n: usize) -> Matrix<T> {
    (0..n).map(|i| (0..n).map(|j| T::from_i64((i == j) as i64)).collect()).collect()
}

/// Row-style Hermite normal form of the row span: echelon, positive pivots,
/// entries above a pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn hermite_rows<T: ExactInt>(rows: &[Vec<T>]) -> Result<Matrix<T>, AutoEquivError> {
    let mut m: Matrix<T> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            let pivot = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| {
                    if m[a][c].abs_lt(&m[b][c]) {
                        std::cmp::Ordering::Less
                    } else if m[b][c].abs_lt(&m[a][c]) {
                        std::cmp::Ordering::Greater
                    } else {
                        a.cmp(&b)
                    }
                });
            let Some(p) = pivot else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                let q = ovf(m[i][c].quot(&m[r][c]))?;
                row_axpy(&mut m, i, r, &q)?;
                done &= m[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            negate_row(&mut m, r)?;
        }
        for i in 0..r {
            let q = ovf(m[i][c].floor_quot(&m[r][c]))?;
            row_axpy(&mut m, i, r, &q)?;
        }
        r += 1;
    }
    m.truncate(r);
    Ok(m)
}

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snf<T> {
    pub u: Vec<Vec<T>>,
    pub s: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
}

impl<T: ExactInt> Snf<T> {
    pub fn diagonal(&self) -> Vec<T> {
        let k = self.s.len().min(self.s.first().map_or(0, Vec::len));
        (0..k).map(|i| self.s[i][i].clone()).collect()
    }
}

/// Smith normal form in `T` arithmetic. Pivots are chosen by least
/// absolute value to limit entry growth.
pub fn smith_normal_form_in<T: ExactInt>(mat: &[Vec<T>]) -> Result<Snf<T>, AutoEquivError> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    if mat.iter().any(|r| r.len() != cols) {
        return Err(AutoEquivError::Shape("rows of unequal length".into()));
    }
    let mut a: Matrix<T> = mat.to_vec();
    let mut u = identity::<T>(rows);
    let mut v = identity::<T>(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs_lt(&a[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = ovf(a[i][t].quot(&a[t][t]))?;
                row_axpy(&mut a, i, t, &q)?;
                row_axpy(&mut u, i, t, &q)?;
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = ovf(a[t][j].quot(&a[t][t]))?;
                col_axpy(&mut a, j, t, &q)?;
                col_axpy(&mut v, j, t, &q)?;
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a offending row into the pivot row
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| {
                    a[i][j]
                        .quot(&a[t][t])
                        .and_then(|q| q.try_mul(&a[t][t]))
                        .is_none_or(|m| m != a[i][j])
                })
            });
            match offender {
                Some(i) => {
                    let minus_one = T::from_i64(-1);
                    row_axpy(&mut a, t, i, &minus_one)?;
                    row_axpy(&mut u, t, i, &minus_one)?;
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            negate_row(&mut a, t)?;
            negate_row(&mut u, t)?;
        }
    }
    Ok(Snf { u, s: a, v })
}

/// Smith normal form of an `i64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SmithForm {
    /// Computed in checked 64-bit arithmetic.
    Fixed(Snf<i64>),
    /// An intermediate overflowed and the computation was redone in
    /// arbitrary precision.
    Escalated(Snf<BigInt>),
}

impl SmithForm {
    pub fn to_big(&self) -> Snf<BigInt> {
        match self {
            SmithForm::Fixed(f) => {
                let lift = |m: &Matrix<i64>| m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                Snf { u: lift(&f.u), s: lift(&f.s), v: lift(&f.v) }
            }
            SmithForm::Escalated(b) => b.clone(),
        }
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        self.to_big().diagonal()
    }
}

/// Smith normal form, escalating to big integers on overflow.
pub fn smith_normal_form(mat: &[Vec<i64>]) -> Result<SmithForm, AutoEquivError> {
    match smith_normal_form_in(mat) {
        Ok(f) => Ok(SmithForm::Fixed(f)),
        Err(AutoEquivError::Overflow) => {
            let big: Matrix<BigInt> = mat.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            smith_normal_form_in(&big).map(SmithForm::Escalated)
        }
        Err(e) => Err(e),
    }
}

/// Hermite normal form of `i64` rows, escalating internally on overflow.
pub fn hermite(rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, AutoEquivError> {
    match hermite_rows(rows) {
        Err(AutoEquivError::Overflow) => {
            let big: Matrix<BigInt> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            hermite_rows(&big)?
                .into_iter()
                .map(|r| r.iter().map(|x| x.to_i64().ok_or(AutoEquivError::Overflow)).collect())
                .collect()
        }
        other => other,
    }
}

/// Generators of a subgroup of `Z^A`, kept in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub arity: usize,
    pub rows: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn zero(arity: usize) -> Self {
        LatticeBasis { arity, rows: Vec::new() }
    }

    pub fn new(arity: usize, rows: Vec<Vec<i64>>) -> Result<Self, AutoEquivError> {
        if rows.iter().any(|r| r.len() != arity) {
            return Err(AutoEquivError::Shape(format!("lattice rows must have {arity} entries")));
        }
        let rows = hermite(&rows)?;
        Ok(LatticeBasis { arity, rows })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether `v` lies in the row span.
    pub fn contains(&self, v: &[i64]) -> Result<bool, AutoEquivError> {
        let mut with = self.rows.clone();
        with.push(v.to_vec());
        Ok(hermite(&with)? == self.rows)
    }

    /// Whether this lattice is a sublattice of `other`.
    pub fn is_sublattice_of(&self, other: &LatticeBasis) -> Result<bool, AutoEquivError> {
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Z^A / L` as `Z^m ⊕ Z/d_1 ⊕ … ⊕ Z/d_r` with the images of the unit vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientStructure {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    /// One vector per unit vector `e_a`: free coordinates, then torsion
    /// residues.
    pub atom_images: Vec<Vec<i64>>,
}

/// Computes the quotient group via Smith normal form. Free coordinates of
/// the images are normalized by a unimodular change of basis (column
/// Hermite form of the image matrix).
pub fn quotient_structure(l: &LatticeBasis, atom_count: usize) -> Result<QuotientStructure, AutoEquivError> {
    if l.arity != atom_count {
        return Err(AutoEquivError::Shape(format!(
            "lattice has arity {} but there are {atom_count} atoms",
            l.arity
        )));
    }
    let (diag, v): (Vec<BigInt>, Matrix<BigInt>) = if l.rows.is_empty() {
        (Vec::new(), identity::<BigInt>(atom_count))
    } else {
        let snf = smith_normal_form(&l.rows)?.to_big();
        (snf.diagonal(), snf.v)
    };
    let rank = diag.iter().take_while(|d| !Zero::is_zero(*d)).count();
    let to_i64 = |x: &BigInt| x.to_i64().ok_or(AutoEquivError::Overflow);
    let torsion_idx: Vec<usize> = (0..rank).filter(|&i| !diag[i].is_one()).collect();
    let torsion: Vec<i64> = torsion_idx.iter().map(|&i| to_i64(&diag[i])).collect::<Result<_, _>>()?;
    let free_rank = atom_count - rank;
    // image of e_a is row a of V, read in the diagonal coordinates
    let free: Matrix<i64> = (0..atom_count)
        .map(|a| (rank..atom_count).map(|i| to_i64(&v[a][i])).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let free = normalize_columns(&free, free_rank)?;
    let atom_images = (0..atom_count)
        .map(|a| {
            let mut img = free[a].clone();
            for (&i, &d) in torsion_idx.iter().zip(&torsion) {
                img.push(to_i64(&v[a][i])?.rem_euclid(d));
            }
            Ok(img)
        })
        .collect::<Result<_, AutoEquivError>>()?;
    Ok(QuotientStructure { free_rank, torsion, atom_images })
}

/// Column Hermite form of an `A × m` matrix of full column rank: a change
/// of basis of `Z^m`.
fn normalize_columns(m: &Matrix<i64>, width: usize) -> Result<Matrix<i64>, AutoEquivError> {
    if width == 0 {
        return Ok(m.clone());
    }
    let transposed: Matrix<i64> = (0..width).map(|j| m.iter().map(|r| r[j]).collect()).collect();
    let h = hermite(&transposed)?;
    if h.len() != width {
        return Err(AutoEquivError::Shape("image matrix lost rank".into()));
    }
    Ok((0..m.len()).map(|a| h.iter().map(|r| r[a]).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &Matrix<i64>, b: &Matrix<i64>) -> Matrix<i64> {
        let k = b.len();
        a.iter()
            .map(|r| (0..b[0].len()).map(|j| (0..k).map(|t| r[t] * b[t][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn snf_examples() {
        let SmithForm::Fixed(f) = smith_normal_form(&[vec![5, -3]]).unwrap() else { panic!() };
        assert_eq!(f.s, vec![vec![1, 0]]);
        assert_eq!(mul(&mul(&f.u, &vec![vec![5, -3]]), &f.v), f.s);
        let SmithForm::Fixed(f) = smith_normal_form(&[vec![2, 0], vec![0, 2]]).unwrap() else { panic!() };
        assert_eq!(f.s, vec![vec![2, 0], vec![0, 2]]);
        let SmithForm::Fixed(f) = smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap()
        else {
            panic!()
        };
        assert_eq!(f.diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn snf_escalates() {
        let out = smith_normal_form(&[vec![i64::MAX, 1], vec![1, i64::MAX]]).unwrap();
        assert!(matches!(out, SmithForm::Escalated(_)));
        let m = BigInt::from(i64::MAX);
        assert_eq!(out.diagonal(), vec![BigInt::from(1), &m * &m - 1]);
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(&[vec![-5, 3], vec![10, -6]]).unwrap(), vec![vec![5, -3]]);
        assert_eq!(hermite(&[vec![2, 0], vec![3, 1]]).unwrap(), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn quotients() {
        let q = quotient_structure(&LatticeBasis::new(2, vec![vec![5, -3]]).unwrap(), 2).unwrap();
        assert_eq!((q.free_rank, q.torsion.clone()), (1, vec![]));
        assert_eq!(q.atom_images, vec![vec![3], vec![5]]);
        let q = quotient_structure(&LatticeBasis::zero(2), 2).unwrap();
        assert_eq!(q.atom_images, vec![vec![1, 0], vec![0, 1]]);
        let q = quotient_structure(&LatticeBasis::new(1, vec![vec![2]]).unwrap(), 1).unwrap();
        assert_eq!((q.free_rank, q.torsion.clone(), q.atom_images.clone()), (0, vec![2], vec![vec![1]]));
    }
}
