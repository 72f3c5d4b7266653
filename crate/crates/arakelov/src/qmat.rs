//! Exact dense linear algebra over the rationals. Sizes here are the
//! degree of the number field, so plain Gaussian elimination is fine.

use rug::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Rational>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, a: vec![Rational::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::from(1);
        }
        m
    }

    /// Build from column vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Self {
        let nc = cols.len();
        let nr = if nc == 0 { 0 } else { cols[0].len() };
        let mut m = QMat::zero(nr, nc);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nr, "ragged columns");
            for i in 0..nr {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.a[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for j in 0..self.cols {
                    acc += Rational::from(self.at(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::new();
                for k in 0..self.cols {
                    acc += Rational::from(self.at(i, k) * other.at(k, j));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::from(1);
        for col in 0..n {
            let pivot = (col..n).find(|&r| m.at(r, col).cmp0() != std::cmp::Ordering::Equal);
            let pivot = match pivot {
                Some(p) => p,
                None => return Rational::new(),
            };
            if pivot != col {
                for j in 0..n {
                    let tmp = m.at(pivot, j).clone();
                    *m.at_mut(pivot, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                }
                det = -det;
            }
            let p = m.at(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                let factor = Rational::from(m.at(r, col) / &p);
                if factor.cmp0() == std::cmp::Ordering::Equal {
                    continue;
                }
                for j in col..n {
                    let sub = Rational::from(&factor * m.at(col, j));
                    *m.at_mut(r, j) -= sub;
                }
            }
        }
        det
    }

    /// Solve self * x = b; None when singular.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut m = self.clone();
        let mut rhs: Vec<Rational> = b.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| m.at(r, col).cmp0() != std::cmp::Ordering::Equal)?;
            if pivot != col {
                for j in 0..n {
                    let tmp = m.at(pivot, j).clone();
                    *m.at_mut(pivot, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                }
                rhs.swap(pivot, col);
            }
            let p = m.at(col, col).clone();
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = Rational::from(m.at(r, col) / &p);
                if factor.cmp0() == std::cmp::Ordering::Equal {
                    continue;
                }
                for j in col..n {
                    let sub = Rational::from(&factor * m.at(col, j));
                    *m.at_mut(r, j) -= sub;
                }
                let sub = Rational::from(&factor * &rhs[col]);
                rhs[r] -= sub;
            }
        }
        for i in 0..n {
            rhs[i] /= m.at(i, i);
        }
        Some(rhs)
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = QMat::zero(n, n);
        let id = QMat::identity(n);
        for j in 0..n {
            let x = self.solve(&id.column(j))?;
            for i in 0..n {
                *out.at_mut(i, j) = x[i].clone();
            }
        }
        Some(out)
    }
}
