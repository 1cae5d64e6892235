//! The derivation Lie algebra of a given algebra, computed exactly: the
//! Leibniz identity on all basis pairs is a rational linear system in the
//! matrix entries, and its null space is presented in a canonical form so
//! parameter names are reproducible run to run.

use num_traits::Zero;

use crate::liealg::LieAlgebra;
use crate::ring::{kernel_basis, row_reduced_basis, Matrix, Monomial, Poly, Rat, VarSet};

/// The space of derivations of a Lie algebra, with a generic element whose
/// entries are affine in canonical parameters a1..a_d.
///
/// Canonical form: the null space of the Leibniz system (unknowns ordered
/// as the row-major matrix entries) is row reduced, and parameter a_m is
/// the value of the generic matrix at the m-th pivot position.  Pivots come
/// first in row-major order, so a1 sits at the earliest free entry.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    algebra_dim: usize,
    vars: VarSet,
    generic: Matrix<Poly>,
    basis: Vec<Matrix<Rat>>,
    pivot_entries: Vec<(usize, usize)>,
}

impl DerivationSpace {
    /// Number of parameters.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn generic(&self) -> &Matrix<Poly> {
        &self.generic
    }

    pub fn basis(&self) -> &[Matrix<Rat>] {
        &self.basis
    }

    /// (row, column) positions, 0-based, where the parameters live.
    pub fn pivot_entries(&self) -> &[(usize, usize)] {
        &self.pivot_entries
    }

    /// The derivation with the given parameter values.
    pub fn at_point(&self, params: &[Rat]) -> Matrix<Rat> {
        assert_eq!(params.len(), self.dim(), "parameter count mismatch");
        self.generic.eval(params)
    }
}

/// Compute the derivation space of `la` from the Leibniz identity
/// D[e_i, e_j] = [D e_i, e_j] + [e_i, D e_j].
pub fn derivation_space(la: &LieAlgebra) -> DerivationSpace {
    let n = la.dim();
    let unknown = |r: usize, c: usize| r * n + c; // 0-based row-major
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                let mut row = vec![Rat::zero(); n * n];
                for l in 1..=n {
                    let c = la.structure_constant(i, j, l);
                    if !c.is_zero() {
                        row[unknown(k - 1, l - 1)] += c;
                    }
                }
                for m in 1..=n {
                    let c = la.structure_constant(m, j, k);
                    if !c.is_zero() {
                        row[unknown(m - 1, i - 1)] -= c;
                    }
                    let c = la.structure_constant(i, m, k);
                    if !c.is_zero() {
                        row[unknown(m - 1, j - 1)] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        // no constraints: every matrix is a derivation
        (0..n * n)
            .map(|m| {
                let mut v = vec![Rat::zero(); n * n];
                v[m] = num_traits::One::one();
                v
            })
            .collect()
    } else {
        kernel_basis(&Matrix::from_rows(rows))
    };
    let (canon, pivots) = row_reduced_basis(&kernel);
    let d = canon.len();
    let vars = VarSet::numbered("a", d);
    let generic = Matrix::from_fn(n, n, |r, c| {
        let mut p = Poly::zero();
        for (m, vec) in canon.iter().enumerate() {
            let coeff = &vec[unknown(r, c)];
            if !coeff.is_zero() {
                p = p + Poly::term(&vars, Monomial::var(m), coeff.clone());
            }
        }
        p
    });
    let basis: Vec<Matrix<Rat>> = canon
        .iter()
        .map(|vec| Matrix::from_fn(n, n, |r, c| vec[unknown(r, c)].clone()))
        .collect();
    for b in &basis {
        assert!(
            la.derivation_defect(b).is_none(),
            "null space vector fails the Leibniz identity"
        );
    }
    let pivot_entries = pivots.iter().map(|&p| (p / n, p % n)).collect();
    DerivationSpace { algebra_dim: n, vars, generic, basis, pivot_entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{KForm, MIdx};
    use crate::ring::{rat, rat_int};
    use proptest::prelude::*;

    fn form2(terms: Vec<(&[usize], i64)>) -> KForm<Rat> {
        KForm::from_terms(
            2,
            terms
                .into_iter()
                .map(|(m, c)| (MIdx::from_indices(m), rat_int(c)))
                .collect(),
        )
    }

    fn algebra(tuple: Vec<Vec<(&[usize], i64)>>) -> LieAlgebra {
        LieAlgebra::nilpotent_from_tuple(tuple.into_iter().map(form2).collect()).unwrap()
    }

    fn worked() -> LieAlgebra {
        algebra(vec![
            vec![],
            vec![],
            vec![(&[1, 2], 1)],
            vec![(&[1, 3], 1)],
            vec![(&[1, 4], 1), (&[2, 3], 1)],
            vec![(&[3, 4], 1), (&[2, 5], -1)],
        ])
    }

    fn n1() -> LieAlgebra {
        algebra(vec![
            vec![],
            vec![],
            vec![],
            vec![],
            vec![(&[1, 2], 1)],
            vec![(&[3, 4], 1)],
        ])
    }

    fn n2() -> LieAlgebra {
        algebra(vec![
            vec![],
            vec![],
            vec![],
            vec![],
            vec![(&[1, 3], 1), (&[2, 4], -1)],
            vec![(&[1, 4], 1), (&[2, 3], 1)],
        ])
    }

    fn rows_as_strings(m: &Matrix<Poly>) -> Vec<Vec<String>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect())
            .collect()
    }

    #[test]
    fn generic_derivation_of_worked_example() {
        let ds = derivation_space(&worked());
        assert_eq!(ds.dim(), 8);
        assert_eq!(
            rows_as_strings(ds.generic()),
            vec![
                vec!["a1", "0", "0", "0", "0", "0"],
                vec!["0", "2*a1", "0", "0", "0", "0"],
                vec!["a2", "a3", "3*a1", "0", "0", "0"],
                vec!["a4", "0", "a3", "4*a1", "0", "0"],
                vec!["a5", "a6", "-a2", "a3", "5*a1", "0"],
                vec!["a7", "a8", "a5", "-a4", "a2", "7*a1"],
            ]
        );
    }

    #[test]
    fn generic_derivation_of_two_step_algebra_one() {
        let ds = derivation_space(&n1());
        assert_eq!(ds.dim(), 16);
        assert_eq!(
            rows_as_strings(ds.generic()),
            vec![
                vec!["a1", "a2", "0", "0", "0", "0"],
                vec!["a3", "a4", "0", "0", "0", "0"],
                vec!["0", "0", "a5", "a6", "0", "0"],
                vec!["0", "0", "a7", "a8", "0", "0"],
                vec!["a9", "a10", "a11", "a12", "a1 + a4", "0"],
                vec!["a13", "a14", "a15", "a16", "0", "a5 + a8"],
            ]
        );
    }

    #[test]
    fn generic_derivation_of_two_step_algebra_two() {
        let ds = derivation_space(&n2());
        assert_eq!(ds.dim(), 16);
        assert_eq!(
            rows_as_strings(ds.generic()),
            vec![
                vec!["a1", "a2", "a3", "a4", "0", "0"],
                vec!["-a2", "a1", "-a4", "a3", "0", "0"],
                vec!["a5", "a6", "a7", "a8", "0", "0"],
                vec!["-a6", "a5", "-a8", "a7", "0", "0"],
                vec!["a9", "a10", "a11", "a12", "a1 + a7", "a2 + a8"],
                vec!["a13", "a14", "a15", "a16", "-a2 - a8", "a1 + a7"],
            ]
        );
    }

    #[test]
    fn abelian_algebra_has_full_endomorphism_space() {
        let ab = algebra(vec![vec![]; 6]);
        let ds = derivation_space(&ab);
        assert_eq!(ds.dim(), 36);
    }

    #[test]
    fn parameters_sit_at_pivot_positions() {
        for la in [worked(), n1(), n2()] {
            let ds = derivation_space(&la);
            for (m, &(r, c)) in ds.pivot_entries().iter().enumerate() {
                assert_eq!(ds.generic()[(r, c)], Poly::var(ds.vars(), m));
            }
        }
    }

    proptest! {
        #[test]
        fn every_parameter_point_is_a_derivation(
            params in proptest::collection::vec((-5i64..=5, 1i64..=3), 16),
        ) {
            for la in [worked(), n1(), n2()] {
                let ds = derivation_space(&la);
                let point: Vec<Rat> = params
                    .iter()
                    .take(ds.dim())
                    .map(|&(p, q)| rat(p, q))
                    .collect();
                let d = ds.at_point(&point);
                prop_assert!(la.derivation_defect(&d).is_none());
            }
        }
    }
}
