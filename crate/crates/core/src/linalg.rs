//! Exact sparse linear algebra over ℚ(i): incremental echelon bases, rank,
//! kernels and coordinates in a chosen basis.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};

use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `a + f·b` on sparse vectors.
pub fn axpy(a: &SparseVec, f: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(f * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale(v: &SparseVec, f: &Scalar) -> SparseVec {
    v.iter().map(|(i, c)| (*i, c * f)).collect()
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    /// Expression of `vec` as a combination of inserted vectors.
    combo: SparseVec,
}

/// Incrementally built echelon basis of a subspace.
///
/// Every stored row has leading entry 1 at its pivot. When `track` is on,
/// each row also remembers how it is combined from the vectors passed to
/// [`Echelon::insert`], which gives coordinates and kernel relations.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, Row>,
    track: bool,
    inserted: usize,
}

/// Outcome of inserting a vector.
#[derive(Clone, Debug)]
pub enum Insert {
    /// The vector was independent; the id it was recorded under.
    Independent(usize),
    /// The vector was dependent: `v = Σ coeff · inserted[id]`.
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Echelon { rows: HashMap::new(), track, inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis. Returns the residue and, when tracking,
    /// the combination `c` of inserted vectors with `v = residue + Σ c`.
    fn reduce_full(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut cur = v.clone();
        let mut combo: SparseVec = Vec::new();
        let mut pos = 0;
        while pos < cur.len() {
            let (idx, ref c) = cur[pos];
            if let Some(row) = self.rows.get(&idx) {
                let f = c.clone();
                let neg = -&f;
                if self.track {
                    combo = axpy(&combo, &f, &row.combo);
                }
                cur = axpy(&cur, &neg, &row.vec);
                // entries before `pos` are untouched because rows start at their pivot
            } else {
                pos += 1;
            }
        }
        (cur, combo)
    }

    /// Residue of `v` modulo the span; zero iff `v` is in the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_full(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Express `v` (assumed in the span) as a combination of inserted vectors.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let (res, combo) = self.reduce_full(v);
        if res.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let (res, combo) = self.reduce_full(v);
        if res.is_empty() {
            return Insert::Dependent(combo);
        }
        let id = self.inserted;
        self.inserted += 1;
        let inv = res[0].1.inv().unwrap();
        let pivot = res[0].0;
        let vec = scale(&res, &inv);
        let combo = if self.track {
            // res = v - combo  =>  row = inv·(e_id - combo)
            let minus: SparseVec = combo.iter().map(|(i, c)| (*i, -c)).collect();
            let with_self = axpy(&minus, &Scalar::one(), &vec![(id, Scalar::one())]);
            scale(&with_self, &inv)
        } else {
            Vec::new()
        };
        self.rows.insert(pivot, Row { vec, combo });
        Insert::Independent(id)
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new(false);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Dense matrix helper used for small determinants.
pub fn det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut d = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let piv = a[col][col].clone();
        d = &d * &piv;
        let inv = piv.inv().unwrap();
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    d
}

/// Inverse of a square dense matrix, `None` if singular.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let inv = a[col][col].inv().unwrap();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_coordinates() {
        let v0: SparseVec = vec![(0, s(1)), (1, s(2))];
        let v1: SparseVec = vec![(1, s(1)), (2, s(1))];
        let v2: SparseVec = vec![(0, s(1)), (1, s(4)), (2, s(2))]; // v0 + 2 v1
        let mut e = Echelon::new(true);
        assert!(matches!(e.insert(&v0), Insert::Independent(0)));
        assert!(matches!(e.insert(&v1), Insert::Independent(1)));
        match e.insert(&v2) {
            Insert::Dependent(c) => assert_eq!(c, vec![(0, s(1)), (1, s(2))]),
            _ => panic!("expected dependence"),
        }
        assert_eq!(e.rank(), 2);
        let w: SparseVec = vec![(0, s(3)), (1, s(5)), (2, s(-1))]; // 3 v0 - v1
        assert_eq!(e.coordinates(&w).unwrap(), vec![(0, s(3)), (1, s(-1))]);
        assert!(e.coordinates(&vec![(2, s(1))]).is_none());
    }

    #[test]
    fn dense_helpers() {
        let m = vec![vec![s(0), s(1)], vec![s(-1), s(0)]];
        assert_eq!(det(&m), s(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![s(0), s(-1)], vec![s(1), s(0)]]);
        assert!(inverse(&vec![vec![s(1), s(2)], vec![s(2), s(4)]]).is_none());
    }
}
