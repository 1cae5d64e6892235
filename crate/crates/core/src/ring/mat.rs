use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::Zero;

use super::poly::Poly;
use super::rat::Rat;
use super::scalar::Scalar;

/// Dense matrix over an exact scalar ring, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant dispatch: cofactor expansion for n <= 4, fraction-free
    /// Bareiss elimination above that.  The two routes are cross-checked
    /// against each other in the test suite.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of non-square matrix");
        if self.rows <= 4 {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion over column subsets with memoization.  Exponential
    /// in principle but exact and independent of division, which makes it
    /// the oracle for the elimination route.
    pub fn det_cofactor(&self) -> S {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        assert!(n <= 20, "cofactor determinant limited to n <= 20");
        if n == 0 {
            return S::one();
        }
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut memo: HashMap<u32, S> = HashMap::new();
        memo.insert(0, S::one());
        self.minor_memo(full, &mut memo)
    }

    /// Minor of the last `popcount(mask)` rows against the columns in `mask`.
    fn minor_memo(&self, mask: u32, memo: &mut HashMap<u32, S>) -> S {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let k = mask.count_ones() as usize;
        let row = self.rows - k;
        let mut acc = S::zero();
        let mut sign_pos = true;
        for j in 0..self.cols {
            if mask & (1 << j) == 0 {
                continue;
            }
            let entry = &self[(row, j)];
            if !entry.is_zero() {
                let sub = self.minor_memo(mask & !(1 << j), memo);
                let term = entry.clone() * sub;
                acc = if sign_pos { acc + term } else { acc - term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Fraction-free Gaussian elimination (Bareiss).  Every division is
    /// exact in the ring; row swaps only flip the sign.
    pub fn det_bareiss(&self) -> S {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        let mut m = self.clone();
        let mut prev = S::one();
        let mut sign_pos = true;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign_pos = !sign_pos;
                    }
                    None => return S::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(k, k)].clone() * m[(i, j)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = num
                        .exact_div(&prev)
                        .expect("Bareiss division must be exact");
                }
                m[(i, k)] = S::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign_pos {
            d
        } else {
            -d
        }
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Matrix<S>) -> Matrix<S> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .zip(rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Mul for Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl Matrix<Poly> {
    /// Rational view of a matrix whose entries are all constants.
    pub fn to_rational(&self) -> crate::Result<Matrix<Rat>> {
        let mut out = Matrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].as_rat().ok_or(crate::Error::NotRational)?;
            }
        }
        Ok(out)
    }

    /// Evaluate every entry at a full point of the registry.
    pub fn eval(&self, point: &[Rat]) -> Matrix<Rat> {
        self.map(|p| p.eval(point))
    }

    pub fn substitute(&self, map: &std::collections::BTreeMap<usize, Poly>) -> Matrix<Poly> {
        self.map(|p| p.substitute(map))
    }
}

impl Matrix<Rat> {
    pub fn to_poly(&self) -> Matrix<Poly> {
        self.map(|r| Poly::constant(r.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int, VarSet};
    use proptest::prelude::*;

    #[test]
    fn det_small_known_values() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(3), rat_int(4)],
        ]);
        assert_eq!(m.det(), rat_int(-2));
        assert_eq!(Matrix::<Rat>::identity(5).det(), rat_int(1));
        assert_eq!(Matrix::<Rat>::zero(3, 3).det(), rat_int(0));
    }

    #[test]
    fn det_symbolic_diag() {
        let vs = VarSet::numbered("a", 2);
        let a1 = Poly::var(&vs, 0);
        let m = Matrix::from_rows(vec![
            vec![-a1.clone(), Poly::zero()],
            vec![Poly::zero(), -(a1.clone() + a1.clone())],
        ]);
        let d = m.det();
        assert_eq!(d.to_string(), "2*a1^2");
    }

    fn rat_strategy() -> impl Strategy<Value = Rat> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_rational(
            n in 1usize..=6,
            seed in proptest::collection::vec(rat_strategy(), 36),
        ) {
            let m = Matrix::from_fn(n, n, |i, j| seed[i * 6 + j].clone());
            prop_assert_eq!(m.det_bareiss(), m.det_cofactor());
        }

        #[test]
        fn bareiss_matches_cofactor_polynomial(
            n in 1usize..=4,
            coeffs in proptest::collection::vec((-3i64..=3, 0usize..=2), 16),
        ) {
            let vs = VarSet::numbered("x", 3);
            let m = Matrix::from_fn(n, n, |i, j| {
                let (c, v) = coeffs[i * 4 + j];
                Poly::int(c) * Poly::var(&vs, v) + Poly::int(1)
            });
            prop_assert_eq!(m.det_bareiss(), m.det_cofactor());
        }

        #[test]
        fn det_of_product_is_product_of_dets(
            a in proptest::collection::vec(rat_strategy(), 9),
            b in proptest::collection::vec(rat_strategy(), 9),
        ) {
            let ma = Matrix::from_fn(3, 3, |i, j| a[i * 3 + j].clone());
            let mb = Matrix::from_fn(3, 3, |i, j| b[i * 3 + j].clone());
            let prod = ma.clone() * mb.clone();
            prop_assert_eq!(prod.det(), ma.det() * mb.det());
        }
    }
}
