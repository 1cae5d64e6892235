use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::mat::Matrix;
use super::poly::Poly;
use super::rat::Rat;
use super::scalar::{Scalar, ScalarField};
use super::vars::VarSet;
use crate::{Error, Result};

/// Pivot bookkeeping produced alongside a reduced row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct RrefInfo {
    /// (row, column) of each pivot, in row order.
    pub pivots: Vec<(usize, usize)>,
    pub rank: usize,
}

impl RrefInfo {
    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(_, c)| c).collect()
    }

    pub fn free_cols(&self, ncols: usize) -> Vec<usize> {
        let pivots = self.pivot_cols();
        (0..ncols).filter(|c| !pivots.contains(c)).collect()
    }
}

/// Reduced row echelon form over a field.  Pivot choice is the first
/// nonzero entry in column order, so the output is deterministic.
pub fn rref<F: ScalarField>(m: &Matrix<F>) -> (Matrix<F>, RrefInfo) {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].inv().expect("pivot is nonzero");
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    let sub = f.clone() * a[(r, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - sub;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let rank = pivots.len();
    (a, RrefInfo { pivots, rank })
}

/// Basis of the right null space, one vector per free column, ordered by
/// free column index.
pub fn kernel_basis<F: ScalarField>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let (r, info) = rref(m);
    let cols = m.ncols();
    let pivot_cols = info.pivot_cols();
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![F::zero(); cols];
        v[f] = F::one();
        for &(row, pc) in &info.pivots {
            v[pc] = -r[(row, f)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Canonical basis of the span of `vectors`: the nonzero rows of the
/// reduced row echelon form, paired with their pivot columns.  Unique for
/// a given span, independent of the input ordering.
pub fn row_reduced_basis<F: ScalarField>(vectors: &[Vec<F>]) -> (Vec<Vec<F>>, Vec<usize>) {
    if vectors.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let m = Matrix::from_rows(vectors.to_vec());
    let (r, info) = rref(&m);
    let rows = info
        .pivots
        .iter()
        .map(|&(row, _)| r.row(row).to_vec())
        .collect();
    (rows, info.pivot_cols())
}

/// Reduce `v` modulo the row space spanned by `rows` (already in reduced
/// echelon form with pivot columns `pivots`).  The result is the unique
/// representative of `v`'s coset with zeros in every pivot column.
pub fn reduce_against<F: ScalarField>(v: &[F], rows: &[Vec<F>], pivots: &[usize]) -> Vec<F> {
    let mut out = v.to_vec();
    for (row, &p) in rows.iter().zip(pivots) {
        if out[p].is_zero() {
            continue;
        }
        let c = out[p].clone();
        for j in 0..out.len() {
            let sub = c.clone() * row[j].clone();
            out[j] = out[j].clone() - sub;
        }
    }
    out
}

/// Solve `A x = rhs` with both sides over one scalar field.  Returns
/// `None` when the system is inconsistent; free variables are set to zero.
pub fn solve_field<F: ScalarField>(a: &Matrix<F>, rhs: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.nrows(), rhs.len(), "rhs length mismatch");
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut aug = Matrix::from_fn(rows, cols + 1, |i, j| {
        if j == cols {
            rhs[i].clone()
        } else {
            a[(i, j)].clone()
        }
    });
    aug = rref(&aug).0;
    let mut x = vec![F::zero(); cols];
    for i in 0..rows {
        let Some(p) = (0..=cols).find(|&j| !aug[(i, j)].is_zero()) else {
            continue;
        };
        if p == cols {
            return None;
        }
        x[p] = aug[(i, cols)].clone();
    }
    Some(x)
}

/// Inverse of a square matrix over a field, `None` when singular.
pub fn invert<F: ScalarField>(m: &Matrix<F>) -> Option<Matrix<F>> {
    assert!(m.is_square(), "inverse of non-square matrix");
    let n = m.nrows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j == n + i {
            F::one()
        } else {
            F::zero()
        }
    });
    let (r, info) = rref(&aug);
    if info.rank < n || info.pivots.iter().any(|&(_, c)| c >= n) {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Solve `A x = rhs` with a rational coefficient matrix and a right hand
/// side in any scalar ring containing the rationals.  All pivoting happens
/// on the rational side; generic entries are only scaled and subtracted.
/// Returns `None` when the system is inconsistent (some zero row of the
/// reduced matrix faces a nonzero right hand side).  Free variables are
/// set to zero.
pub fn solve_with_rhs<S: Scalar>(a: &Matrix<Rat>, rhs: &[S]) -> Option<Vec<S>> {
    assert_eq!(a.nrows(), rhs.len(), "rhs length mismatch");
    let mut lhs = a.clone();
    let mut b: Vec<S> = rhs.to_vec();
    let (rows, cols) = (lhs.nrows(), lhs.ncols());
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !lhs[(i, c)].is_zero()) else {
            continue;
        };
        lhs.swap_rows(r, p);
        b.swap(r, p);
        let inv = Rat::one() / lhs[(r, c)].clone();
        for j in c..cols {
            lhs[(r, j)] = lhs[(r, j)].clone() * inv.clone();
        }
        b[r] = b[r].clone() * S::from_rat(&inv);
        for i in 0..rows {
            if i != r && !lhs[(i, c)].is_zero() {
                let f = lhs[(i, c)].clone();
                for j in c..cols {
                    let sub = f.clone() * lhs[(r, j)].clone();
                    lhs[(i, j)] = lhs[(i, j)].clone() - sub;
                }
                let sub = b[r].clone() * S::from_rat(&f);
                b[i] = b[i].clone() - sub;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![S::zero(); cols];
    for &(row, c) in &pivots {
        x[c] = b[row].clone();
    }
    Some(x)
}

/// A system of affine equations `p = 0` over a shared variable registry.
/// Every polynomial pushed must have total degree at most one.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    vars: VarSet,
    equations: Vec<Poly>,
}

impl LinearSystem {
    pub fn new(vars: VarSet) -> Self {
        LinearSystem { vars, equations: Vec::new() }
    }

    pub fn push(&mut self, p: Poly) {
        assert!(p.degree() <= 1, "affine equation expected");
        if !p.is_zero() {
            self.equations.push(p.in_registry(&self.vars));
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }
}

/// Solution set of an affine system: `particular + span(basis)`.  The basis
/// comes from the reduced echelon form, so for free column `f` the basis
/// vector has a 1 in position `f` and zeros in the other free positions.
#[derive(Clone, Debug)]
pub struct LinSolution {
    vars: VarSet,
    pivot_cols: Vec<usize>,
    free_cols: Vec<usize>,
    particular: Vec<Rat>,
    basis: Vec<Vec<Rat>>,
}

impl LinSolution {
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Dimension of the solution set.
    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn free_cols(&self) -> &[usize] {
        &self.free_cols
    }

    pub fn is_unique(&self) -> bool {
        self.free_cols.is_empty()
    }

    pub fn particular(&self) -> &[Rat] {
        &self.particular
    }

    /// Expressions for the pivot variables as affine polynomials in the
    /// free variables.
    pub fn substitution_map(&self) -> BTreeMap<usize, Poly> {
        let mut map = BTreeMap::new();
        for &p in &self.pivot_cols {
            let mut expr = Poly::term(&self.vars, super::poly::Monomial::one(), self.particular[p].clone());
            for (b, &f) in self.basis.iter().zip(&self.free_cols) {
                if !b[p].is_zero() {
                    expr = expr + Poly::term(&self.vars, super::poly::Monomial::var(f), b[p].clone());
                }
            }
            map.insert(p, expr);
        }
        map
    }

    /// Rewrite `p` on the solution set: pivot variables are replaced by
    /// their expressions in the free variables.
    pub fn substitute(&self, p: &Poly) -> Poly {
        p.in_registry(&self.vars).substitute(&self.substitution_map())
    }

    /// The point of the solution set with the given free variable values.
    pub fn point(&self, free_values: &[Rat]) -> Vec<Rat> {
        assert_eq!(free_values.len(), self.free_cols.len(), "free value count mismatch");
        let mut x = self.particular.clone();
        for (b, t) in self.basis.iter().zip(free_values) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += t * bi;
            }
        }
        x
    }
}

/// Solve an affine system exactly.  `Err(Inconsistent)` when no solution
/// exists.
pub fn solve_affine(system: &LinearSystem) -> Result<LinSolution> {
    let n = system.vars.len();
    let vars = system.vars.clone();
    if system.equations.is_empty() {
        let basis = (0..n)
            .map(|f| {
                let mut v = vec![Rat::zero(); n];
                v[f] = Rat::one();
                v
            })
            .collect();
        return Ok(LinSolution {
            vars,
            pivot_cols: Vec::new(),
            free_cols: (0..n).collect(),
            particular: vec![Rat::zero(); n],
            basis,
        });
    }
    let mut aug = Matrix::zero(system.equations.len(), n + 1);
    for (i, eq) in system.equations.iter().enumerate() {
        let (c0, lin) = eq.linear_parts().expect("affine equation expected");
        for (idx, coef) in lin {
            aug[(i, idx)] = coef;
        }
        aug[(i, n)] = -c0;
    }
    let (r, info) = rref(&aug);
    if info.pivots.iter().any(|&(_, c)| c == n) {
        return Err(Error::Inconsistent);
    }
    let pivot_cols = info.pivot_cols();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut particular = vec![Rat::zero(); n];
    for &(row, c) in &info.pivots {
        particular[c] = r[(row, n)].clone();
    }
    let mut basis = Vec::new();
    for &f in &free_cols {
        let mut v = vec![Rat::zero(); n];
        v[f] = Rat::one();
        for &(row, c) in &info.pivots {
            v[c] = -r[(row, f)].clone();
        }
        basis.push(v);
    }
    Ok(LinSolution { vars, pivot_cols, free_cols, particular, basis })
}

/// Characteristic polynomial `det(t I - M)` in the single variable `t`,
/// computed by fraction-free elimination over the polynomial ring.
pub fn char_poly(m: &Matrix<Rat>) -> Poly {
    assert!(m.is_square(), "characteristic polynomial of non-square matrix");
    let vs = VarSet::new(["t"]);
    let t = Poly::var(&vs, 0);
    let n = m.nrows();
    let a = Matrix::from_fn(n, n, |i, j| {
        let entry = Poly::constant(-m[(i, j)].clone());
        if i == j {
            t.clone() + entry
        } else {
            entry
        }
    });
    a.det()
}

/// Coefficients `c_0 .. c_n` (ascending powers, `c_n = 1`) of
/// `det(t I - M)`, by the Faddeev-LeVerrier recurrence.  A division-based
/// route independent of `char_poly`, kept separate as a cross-check.
pub fn char_poly_coeffs<F: ScalarField>(m: &Matrix<F>) -> Vec<F> {
    assert!(m.is_square(), "characteristic polynomial of non-square matrix");
    let n = m.nrows();
    let mut coeffs = vec![F::zero(); n + 1];
    coeffs[n] = F::one();
    let mut aux = Matrix::<F>::zero(n, n);
    for k in 1..=n {
        let mut shifted = aux;
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)].clone() + coeffs[n - k + 1].clone();
        }
        aux = m.clone() * shifted;
        let mut trace = F::zero();
        for i in 0..n {
            trace = trace + aux[(i, i)].clone();
        }
        let k_inv = F::from_int(k as i64)
            .inv()
            .expect("characteristic zero: small integers are invertible");
        coeffs[n - k] = -(trace * k_inv);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int};
    use proptest::prelude::*;

    fn rat_mat(rows: Vec<Vec<i64>>) -> Matrix<Rat> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_known() {
        let m = rat_mat(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]]);
        let (r, info) = rref(&m);
        assert_eq!(info.rank, 2);
        assert_eq!(info.pivot_cols(), vec![0, 1]);
        assert_eq!(r.row(0), &[rat_int(1), rat_int(0), rat_int(-1)]);
        assert_eq!(r.row(1), &[rat_int(0), rat_int(1), rat_int(2)]);
    }

    #[test]
    fn kernel_vectors_lie_in_kernel() {
        let m = rat_mat(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn row_reduced_basis_is_order_independent() {
        let a = vec![
            vec![rat_int(0), rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(1), rat_int(0)],
        ];
        let b = vec![
            vec![rat_int(1), rat_int(2), rat_int(1)],
            vec![rat_int(0), rat_int(2), rat_int(2)],
        ];
        assert_eq!(row_reduced_basis(&a), row_reduced_basis(&b));
    }

    #[test]
    fn solve_affine_unique() {
        let vs = VarSet::numbered("x", 2);
        let mut sys = LinearSystem::new(vs.clone());
        sys.push(Poly::var(&vs, 0) + Poly::var(&vs, 1) - Poly::int(3));
        sys.push(Poly::var(&vs, 0) - Poly::var(&vs, 1) - Poly::int(1));
        let sol = solve_affine(&sys).unwrap();
        assert!(sol.is_unique());
        assert_eq!(sol.particular(), &[rat_int(2), rat_int(1)]);
    }

    #[test]
    fn solve_affine_inconsistent() {
        let vs = VarSet::numbered("x", 1);
        let mut sys = LinearSystem::new(vs.clone());
        sys.push(Poly::var(&vs, 0) - Poly::int(1));
        sys.push(Poly::var(&vs, 0) - Poly::int(2));
        assert!(matches!(solve_affine(&sys), Err(Error::Inconsistent)));
    }

    #[test]
    fn solve_affine_substitution_kills_equations() {
        let vs = VarSet::numbered("a", 3);
        let mut sys = LinearSystem::new(vs.clone());
        let eq = Poly::var(&vs, 0) + Poly::var(&vs, 1) + Poly::var(&vs, 2);
        sys.push(eq.clone());
        let sol = solve_affine(&sys).unwrap();
        assert_eq!(sol.dim(), 2);
        assert!(sol.substitute(&eq).is_zero());
        // a1 is the pivot, so a2^2 survives untouched
        let q = Poly::var(&vs, 1) * Poly::var(&vs, 1);
        assert_eq!(sol.substitute(&q), q);
        // each sampled point satisfies the original equation
        let p = sol.point(&[rat_int(5), rat(-1, 2)]);
        assert!(eq.eval(&p).is_zero());
    }

    #[test]
    fn solve_with_rhs_symbolic() {
        let vs = VarSet::numbered("y", 2);
        let a = rat_mat(vec![vec![1, 2], vec![3, 4]]);
        let rhs = vec![Poly::var(&vs, 0), Poly::var(&vs, 1)];
        let x = solve_with_rhs(&a, &rhs).unwrap();
        // reconstruct A x and compare with the right hand side
        for i in 0..2 {
            let mut acc = Poly::zero();
            for j in 0..2 {
                acc = acc + Poly::constant(a[(i, j)].clone()) * x[j].clone();
            }
            assert_eq!(acc, rhs[i]);
        }
    }

    #[test]
    fn solve_with_rhs_detects_inconsistency() {
        let vs = VarSet::numbered("y", 2);
        let a = rat_mat(vec![vec![1], vec![1]]);
        let rhs = vec![Poly::var(&vs, 0), Poly::var(&vs, 1)];
        assert!(solve_with_rhs(&a, &rhs).is_none());
        let same = vec![Poly::var(&vs, 0), Poly::var(&vs, 0)];
        assert_eq!(
            solve_with_rhs(&a, &same).unwrap(),
            vec![Poly::var(&vs, 0)]
        );
    }

    #[test]
    fn char_poly_known() {
        let m = rat_mat(vec![vec![-1, 0], vec![0, -2]]);
        assert_eq!(char_poly(&m).to_string(), "t^2 + 3*t + 2");
        let coeffs = char_poly_coeffs(&m);
        assert_eq!(coeffs, vec![rat_int(2), rat_int(3), rat_int(1)]);
    }

    fn rat_strategy() -> impl Strategy<Value = Rat> {
        (-5i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn rank_nullity(
            rows in 1usize..=4,
            cols in 1usize..=5,
            seed in proptest::collection::vec(rat_strategy(), 20),
        ) {
            let m = Matrix::from_fn(rows, cols, |i, j| seed[i * 5 + j].clone());
            let (_, info) = rref(&m);
            let ker = kernel_basis(&m);
            prop_assert_eq!(info.rank + ker.len(), cols);
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(num_traits::Zero::is_zero));
            }
        }

        #[test]
        fn char_poly_routes_agree(
            n in 1usize..=5,
            seed in proptest::collection::vec(-4i64..=4, 25),
        ) {
            let m = Matrix::from_fn(n, n, |i, j| rat_int(seed[i * 5 + j]));
            let p = char_poly(&m);
            let coeffs = char_poly_coeffs(&m);
            for (k, c) in coeffs.iter().enumerate() {
                let mono = if k == 0 {
                    super::super::poly::Monomial::one()
                } else {
                    super::super::poly::Monomial::from_pairs(vec![(0, k as u16)])
                };
                prop_assert_eq!(&p.coeff(&mono), c);
            }
        }

        #[test]
        fn cayley_hamilton(
            n in 1usize..=4,
            seed in proptest::collection::vec(-3i64..=3, 16),
        ) {
            let m = Matrix::from_fn(n, n, |i, j| rat_int(seed[i * 4 + j]));
            let coeffs = char_poly_coeffs(&m);
            let mut acc = Matrix::<Rat>::zero(n, n);
            let mut power = Matrix::<Rat>::identity(n);
            for c in &coeffs {
                acc = acc + power.scale(c);
                power = power * m.clone();
            }
            prop_assert!(acc.is_zero_matrix());
        }
    }
}
