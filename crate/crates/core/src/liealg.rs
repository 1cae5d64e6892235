//! Lie algebras presented dually: the differential of each basis 1-form is
//! a 2-form, with d eta(x, y) = -eta([x, y]).  Provides Jacobi validation,
//! Chevalley-Eilenberg cohomology with canonical representatives, lower
//! central series, unimodularity traces, and rank-one extensions by a
//! derivation.

use num_traits::{One, Zero};

use crate::exterior::{extend_linear, KForm, MIdx};
use crate::ring::{
    kernel_basis, reduce_against, row_reduced_basis, solve_with_rhs, Matrix, Rat, Scalar,
};
use crate::{Error, Result};

/// Apply the differential determined by `diffs` (where `diffs[i]` is
/// d e^{i+1}) to a k-form, extending as an antiderivation.
pub fn d_form<S: Scalar>(diffs: &[KForm<S>], form: &KForm<S>) -> KForm<S> {
    if form.degree() == 0 || form.is_zero() {
        return KForm::zero(form.degree() + 1);
    }
    extend_linear(&mut |i| diffs[i - 1].clone(), form)
}

/// A linear subspace of coordinate space, stored as a reduced row echelon
/// basis so each span has one canonical representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(ambient: usize, vectors: &[Vec<Rat>]) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == ambient), "ambient mismatch");
        let (rows, pivots) = row_reduced_basis(vectors);
        Subspace { ambient, rows, pivots }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis_rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// Pivot column of each echelon basis row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        reduce_against(v, &self.rows, &self.pivots)
            .iter()
            .all(Zero::is_zero)
    }

    /// Coordinates of `v` in the echelon basis; `None` when `v` is outside.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Cohomology space H^k with canonical representatives.  Representatives
/// are kernel vectors reduced against the image and re-echelonized, so the
/// basis depends only on the algebra, not on enumeration order.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degree: usize,
    masks: Vec<MIdx>,
    reps: Vec<KForm<Rat>>,
    /// Columns: representatives, then an echelon basis of the image of the
    /// previous differential.  Used to split a closed form into class
    /// coordinates plus an exact remainder.
    solve_matrix: Matrix<Rat>,
}

impl Cohomology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn masks(&self) -> &[MIdx] {
        &self.masks
    }

    pub fn representatives(&self) -> &[KForm<Rat>] {
        &self.reps
    }

    /// Coordinates of the class of `form` in the representative basis.
    /// `None` when the form is not a cocycle (its coordinates do not lie in
    /// the span of representatives and exact forms).  Works for any scalar
    /// ring over the rationals, including symbolic coefficients.
    pub fn coords<S: Scalar>(&self, form: &KForm<S>) -> Option<Vec<S>> {
        assert_eq!(form.degree(), self.degree, "degree mismatch");
        let rhs = form.to_coords(&self.masks);
        let sol = solve_with_rhs(&self.solve_matrix, &rhs)?;
        Some(sol[..self.reps.len()].to_vec())
    }
}

/// Failure detail for the strong unimodularity test.
#[derive(Clone, Debug, PartialEq)]
pub struct SuWitness {
    /// 1-based basis index of the element whose induced action fails.
    pub basis_index: usize,
    /// Level i of the central series quotient n^i / n^{i+1}.
    pub level: usize,
    /// The nonzero induced trace.
    pub trace: Rat,
}

#[derive(Clone, Debug)]
pub struct UnimodularityReport {
    pub unimodular: bool,
    /// First basis element with nonzero full trace, with that trace.
    pub nonunimodular_witness: Option<(usize, Rat)>,
    pub strongly_unimodular: bool,
    /// Deepest failing central series quotient of the first failing basis
    /// element.
    pub strong_witness: Option<SuWitness>,
}

/// A finite-dimensional Lie algebra given by the differentials of its basis
/// 1-forms, together with a designated nilpotent ideal (the nilradical for
/// the solvable algebras this crate works with; the whole algebra when it
/// is nilpotent).
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    diffs: Vec<KForm<Rat>>,
    nilradical: Vec<usize>,
}

impl LieAlgebra {
    /// Validates Jacobi (via the bracket form of the identity), that the
    /// designated span is an ideal, and that it is nilpotent.
    pub fn from_differentials(diffs: Vec<KForm<Rat>>, nilradical: Vec<usize>) -> Result<LieAlgebra> {
        let dim = diffs.len();
        if dim == 0 || dim > 16 {
            return Err(Error::Dimension(format!("unsupported dimension {dim}")));
        }
        for (i, f) in diffs.iter().enumerate() {
            if f.degree() != 2 {
                return Err(Error::Dimension(format!(
                    "differential of e{} has degree {}",
                    i + 1,
                    f.degree()
                )));
            }
            if f.support().iter().any(|m| m.indices().iter().any(|&j| j > dim)) {
                return Err(Error::Dimension(format!(
                    "differential of e{} mentions indices beyond e{dim}",
                    i + 1
                )));
            }
        }
        for &i in &nilradical {
            if i == 0 || i > dim {
                return Err(Error::Dimension(format!("nilradical index e{i} out of range")));
            }
        }
        let la = LieAlgebra { dim, diffs, nilradical };
        la.check_jacobi()?;
        la.check_nilradical()?;
        Ok(la)
    }

    /// A nilpotent algebra presented as a tuple of differentials; the
    /// designated ideal is the whole algebra.
    pub fn nilpotent_from_tuple(diffs: Vec<KForm<Rat>>) -> Result<LieAlgebra> {
        let dim = diffs.len();
        LieAlgebra::from_differentials(diffs, (1..=dim).collect())
    }

    fn check_jacobi(&self) -> Result<()> {
        for i in 1..=self.dim {
            for j in i + 1..=self.dim {
                for k in j + 1..=self.dim {
                    let ei = self.basis_vector(i);
                    let ej = self.basis_vector(j);
                    let ek = self.basis_vector(k);
                    let mut defect = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let t2 = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let t3 = self.bracket(&self.bracket(&ek, &ei), &ej);
                    for m in 0..self.dim {
                        defect[m] += &t2[m] + &t3[m];
                    }
                    if defect.iter().any(|c| !c.is_zero()) {
                        return Err(Error::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_nilradical(&self) -> Result<()> {
        let span = Subspace::from_spanning(
            self.dim,
            &self
                .nilradical
                .iter()
                .map(|&i| self.basis_vector(i))
                .collect::<Vec<_>>(),
        );
        for i in 1..=self.dim {
            for &j in &self.nilradical {
                let image = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
                if !span.contains(&image) {
                    return Err(Error::NotIdeal(i, j));
                }
            }
        }
        let series = self.central_series();
        if !series.last().expect("series is never empty").is_zero() {
            return Err(Error::NotNilpotent);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// d e^{i} for a 1-based index.
    pub fn differential(&self, i: usize) -> &KForm<Rat> {
        &self.diffs[i - 1]
    }

    pub fn differentials(&self) -> &[KForm<Rat>] {
        &self.diffs
    }

    /// The differentials with coefficients converted into another scalar
    /// ring (used to mix them with symbolic data).
    pub fn differentials_as<S: Scalar>(&self) -> Vec<KForm<S>> {
        self.diffs.iter().map(|f| f.map(|c| S::from_rat(c))).collect()
    }

    pub fn nilradical_indices(&self) -> &[usize] {
        &self.nilradical
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilradical.len() == self.dim
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i - 1] = Rat::one();
        v
    }

    pub fn d(&self, form: &KForm<Rat>) -> KForm<Rat> {
        d_form(&self.diffs, form)
    }

    /// Structure constant of e_k in [e_i, e_j] (i, j, k all 1-based).
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rat {
        if i == j {
            return Rat::zero();
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let c = -self.diffs[k - 1].coeff(MIdx::from_indices(&[a, b]));
        if sign > 0 {
            c
        } else {
            -c
        }
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert!(x.len() == self.dim && y.len() == self.dim, "coordinate length");
        let mut out = vec![Rat::zero(); self.dim];
        for i in 1..=self.dim {
            if x[i - 1].is_zero() {
                continue;
            }
            for j in 1..=self.dim {
                if i == j || y[j - 1].is_zero() {
                    continue;
                }
                let scale = &x[i - 1] * &y[j - 1];
                for k in 1..=self.dim {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        out[k - 1] += c * &scale;
                    }
                }
            }
        }
        out
    }

    /// Matrix of ad_{e_i}: column j holds the coordinates of [e_i, e_j].
    pub fn ad_matrix(&self, i: usize) -> Matrix<Rat> {
        let mut m = Matrix::zero(self.dim, self.dim);
        for j in 1..=self.dim {
            let col = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
            for k in 0..self.dim {
                m[(k, j - 1)] = col[k].clone();
            }
        }
        m
    }

    /// Matrix of d restricted to degree k, in the canonical multi-index
    /// bases of degree k (columns) and k+1 (rows).
    pub fn d_matrix(&self, k: usize) -> Matrix<Rat> {
        let cols = MIdx::enumerate(self.dim, k);
        let rows = MIdx::enumerate(self.dim, k + 1);
        let mut m = Matrix::zero(rows.len(), cols.len());
        for (j, mask) in cols.iter().enumerate() {
            let image = self.d(&KForm::basis_element(*mask, Rat::one()));
            for (i, rmask) in rows.iter().enumerate() {
                m[(i, j)] = image.coeff(*rmask);
            }
        }
        m
    }

    pub fn betti(&self, k: usize) -> usize {
        self.cohomology(k).dim()
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.betti(k)).collect()
    }

    pub fn cohomology(&self, k: usize) -> Cohomology {
        let masks = MIdx::enumerate(self.dim, k);
        let dk = self.d_matrix(k);
        let kernel = kernel_basis(&dk);
        let image_vectors: Vec<Vec<Rat>> = if k == 0 {
            Vec::new()
        } else {
            MIdx::enumerate(self.dim, k - 1)
                .into_iter()
                .map(|m| {
                    self.d(&KForm::basis_element(m, Rat::one()))
                        .to_coords(&masks)
                })
                .collect()
        };
        let (img_rows, img_pivots) = row_reduced_basis(&image_vectors);
        let reduced: Vec<Vec<Rat>> = kernel
            .iter()
            .map(|v| reduce_against(v, &img_rows, &img_pivots))
            .collect();
        let (rep_rows, _) = row_reduced_basis(&reduced);
        let reps: Vec<KForm<Rat>> = rep_rows
            .iter()
            .map(|r| KForm::from_coords(k, &masks, r))
            .collect();
        let mut solve_matrix = Matrix::zero(masks.len(), reps.len() + img_rows.len());
        for (j, r) in rep_rows.iter().enumerate() {
            for (i, c) in r.iter().enumerate() {
                solve_matrix[(i, j)] = c.clone();
            }
        }
        for (j, r) in img_rows.iter().enumerate() {
            for (i, c) in r.iter().enumerate() {
                solve_matrix[(i, reps.len() + j)] = c.clone();
            }
        }
        Cohomology { degree: k, masks, reps, solve_matrix }
    }

    /// Lower central series of the designated nilpotent ideal n:
    /// n^0 = n, n^{i+1} = [n, n^i], listed down to the first zero term.
    pub fn central_series(&self) -> Vec<Subspace> {
        let n0: Vec<Vec<Rat>> = self.nilradical.iter().map(|&i| self.basis_vector(i)).collect();
        let mut series = vec![Subspace::from_spanning(self.dim, &n0)];
        loop {
            let prev = series.last().expect("series is never empty");
            if prev.is_zero() {
                break;
            }
            let mut spans = Vec::new();
            for x in &n0 {
                for y in prev.basis_rows() {
                    spans.push(self.bracket(x, y));
                }
            }
            let next = Subspace::from_spanning(self.dim, &spans);
            // nilpotency check elsewhere: guard against non-descending input
            if next.dim() >= prev.dim() {
                series.push(next);
                break;
            }
            series.push(next);
        }
        series
    }

    /// Trace of a matrix restricted to an invariant subspace (asserts
    /// invariance).
    fn trace_on(&self, m: &Matrix<Rat>, sub: &Subspace) -> Rat {
        let mut tr = Rat::zero();
        for (row, &p) in sub.basis_rows().iter().zip(&sub.pivots) {
            let image = m.mul_vec(row);
            assert!(sub.contains(&image), "subspace not invariant");
            tr += &image[p];
        }
        tr
    }

    /// Unimodularity (all adjoint traces vanish) and strong unimodularity
    /// (the trace induced on every central series quotient of the
    /// designated nilpotent ideal vanishes, for the adjoint action of every
    /// basis element).
    pub fn unimodularity(&self) -> UnimodularityReport {
        let series = self.central_series();
        let mut nonunimodular_witness = None;
        let mut strong_witness: Option<SuWitness> = None;
        for x in 1..=self.dim {
            let ad = self.ad_matrix(x);
            if nonunimodular_witness.is_none() {
                let mut tr = Rat::zero();
                for i in 0..self.dim {
                    tr += &ad[(i, i)];
                }
                if !tr.is_zero() {
                    nonunimodular_witness = Some((x, tr));
                }
            }
            if strong_witness.is_none() {
                let mut deepest: Option<SuWitness> = None;
                for i in 0..series.len().saturating_sub(1) {
                    let t = self.trace_on(&ad, &series[i]) - self.trace_on(&ad, &series[i + 1]);
                    if !t.is_zero() {
                        deepest = Some(SuWitness { basis_index: x, level: i, trace: t });
                    }
                }
                strong_witness = deepest;
            }
        }
        UnimodularityReport {
            unimodular: nonunimodular_witness.is_none(),
            nonunimodular_witness,
            strongly_unimodular: strong_witness.is_none(),
            strong_witness,
        }
    }

    /// Check the derivation property entry by entry; returns the first pair
    /// (i, j) where D[e_i, e_j] differs from [D e_i, e_j] + [e_i, D e_j].
    pub fn derivation_defect(&self, d: &Matrix<Rat>) -> Option<(usize, usize)> {
        assert!(d.nrows() == self.dim && d.ncols() == self.dim, "derivation shape");
        for i in 1..=self.dim {
            for j in i + 1..=self.dim {
                let ei = self.basis_vector(i);
                let ej = self.basis_vector(j);
                let lhs = d.mul_vec(&self.bracket(&ei, &ej));
                let rhs_a = self.bracket(&d.mul_vec(&ei), &ej);
                let rhs_b = self.bracket(&ei, &d.mul_vec(&ej));
                let ok = (0..self.dim).all(|k| lhs[k] == &rhs_a[k] + &rhs_b[k]);
                if !ok {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Differential tuple of the rank-one extension by the derivation D:
    /// d e^i picks up the extra term (D^T e^i) wedge e^{n+1} and
    /// d e^{n+1} = 0.  Jacobi for the extension is equivalent to the
    /// derivation property, which is checked; nilpotent D (including zero)
    /// is allowed here, unlike in `extend_by_derivation`.
    pub fn extension_differentials(&self, d: &Matrix<Rat>) -> Result<Vec<KForm<Rat>>> {
        assert!(self.is_nilpotent(), "extensions start from a nilpotent algebra");
        if let Some((i, j)) = self.derivation_defect(d) {
            return Err(Error::NotDerivation(i, j));
        }
        let new = self.dim + 1;
        let e_new = KForm::basis_element(MIdx::from_indices(&[new]), Rat::one());
        let mut diffs = Vec::with_capacity(new);
        for i in 1..=self.dim {
            let dual_row: Vec<Rat> = (0..self.dim).map(|j| d[(i - 1, j)].clone()).collect();
            let extra = KForm::one_form(&dual_row).wedge(&e_new);
            diffs.push(self.diffs[i - 1].clone() + extra);
        }
        diffs.push(KForm::zero(2));
        Ok(diffs)
    }

    /// Rank-one extension by a non-nilpotent derivation D of a nilpotent
    /// algebra: the new basis vector e_{n+1} acts on the old ones by D.
    /// The old algebra becomes the designated nilradical.
    pub fn extend_by_derivation(&self, d: &Matrix<Rat>) -> Result<LieAlgebra> {
        let diffs = self.extension_differentials(d)?;
        // nilpotent D would make the extension nilpotent, not rank-one solvable
        let mut power = Matrix::identity(self.dim);
        for _ in 0..self.dim {
            power = power * d.clone();
        }
        if power.is_zero_matrix() {
            return Err(Error::NilpotentDerivation(self.dim));
        }
        LieAlgebra::from_differentials(diffs, (1..=self.dim).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int};

    fn e(indices: &[usize]) -> MIdx {
        MIdx::from_indices(indices)
    }

    fn form2(terms: Vec<(&[usize], Rat)>) -> KForm<Rat> {
        KForm::from_terms(2, terms.into_iter().map(|(m, c)| (e(m), c)).collect())
    }

    fn zform() -> KForm<Rat> {
        KForm::zero(2)
    }

    /// Six-dimensional nilpotent algebra (0, 0, e12, e13, e14+e23, e34-e25).
    fn worked() -> LieAlgebra {
        LieAlgebra::nilpotent_from_tuple(vec![
            zform(),
            zform(),
            form2(vec![(&[1, 2], rat_int(1))]),
            form2(vec![(&[1, 3], rat_int(1))]),
            form2(vec![(&[1, 4], rat_int(1)), (&[2, 3], rat_int(1))]),
            form2(vec![(&[3, 4], rat_int(1)), (&[2, 5], rat_int(-1))]),
        ])
        .unwrap()
    }

    /// Seven-dimensional solvable example with nilradical e1..e6.
    fn example_s() -> LieAlgebra {
        LieAlgebra::from_differentials(
            vec![
                form2(vec![(&[1, 7], rat_int(-2))]),
                form2(vec![(&[2, 7], rat_int(-4))]),
                form2(vec![(&[3, 7], rat(9, 2))]),
                form2(vec![(&[4, 7], rat(5, 2)), (&[1, 3], rat_int(-1))]),
                form2(vec![
                    (&[5, 7], rat(1, 2)),
                    (&[3, 7], rat_int(-6)),
                    (&[1, 4], rat_int(-1)),
                    (&[2, 3], rat_int(-1)),
                ]),
                form2(vec![
                    (&[6, 7], rat(-3, 2)),
                    (&[4, 7], rat_int(-6)),
                    (&[1, 3], rat_int(3)),
                    (&[1, 5], rat_int(1)),
                    (&[2, 4], rat_int(1)),
                ]),
                zform(),
            ],
            (1..=6).collect(),
        )
        .unwrap()
    }

    #[test]
    fn structure_constants_match_differentials() {
        let la = worked();
        // de3 = e12 means [e1, e2] = -e3
        assert_eq!(la.structure_constant(1, 2, 3), rat_int(-1));
        assert_eq!(la.structure_constant(2, 1, 3), rat_int(1));
        let b = la.bracket(&la.basis_vector(2), &la.basis_vector(5));
        // de6 = e34 - e25 means [e2, e5] = e6
        assert_eq!(b, vec![
            rat_int(0), rat_int(0), rat_int(0), rat_int(0), rat_int(0), rat_int(1)
        ]);
    }

    #[test]
    fn d_squared_vanishes_on_all_basis_forms() {
        for la in [worked(), example_s()] {
            for k in 1..=la.dim() {
                for mask in MIdx::enumerate(la.dim(), k) {
                    let dd = la.d(&la.d(&KForm::basis_element(mask, Rat::one())));
                    assert!(dd.is_zero(), "d^2 not zero on {mask}");
                }
            }
        }
    }

    #[test]
    fn corrupted_structure_constants_fail_jacobi_with_witness() {
        // dropping the 3 e13 term from d e6 breaks Jacobi
        let bad = LieAlgebra::from_differentials(
            vec![
                form2(vec![(&[1, 7], rat_int(-2))]),
                form2(vec![(&[2, 7], rat_int(-4))]),
                form2(vec![(&[3, 7], rat(9, 2))]),
                form2(vec![(&[4, 7], rat(5, 2)), (&[1, 3], rat_int(-1))]),
                form2(vec![
                    (&[5, 7], rat(1, 2)),
                    (&[3, 7], rat_int(-6)),
                    (&[1, 4], rat_int(-1)),
                    (&[2, 3], rat_int(-1)),
                ]),
                form2(vec![
                    (&[6, 7], rat(-3, 2)),
                    (&[4, 7], rat_int(-6)),
                    (&[1, 5], rat_int(1)),
                    (&[2, 4], rat_int(1)),
                ]),
                zform(),
            ],
            (1..=6).collect(),
        );
        assert!(matches!(bad, Err(Error::Jacobi(1, 3, 7))));
    }

    #[test]
    fn central_series_of_worked_example() {
        let la = worked();
        let dims: Vec<usize> = la.central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![6, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn central_series_of_seven_dim_example() {
        let la = example_s();
        let series = la.central_series();
        let dims: Vec<usize> = series.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![6, 3, 2, 1, 0]);
        // n^1 = span(e4 - 3 e6, e5, e6)
        let mut v = vec![Rat::zero(); 7];
        v[3] = rat_int(1);
        v[5] = rat_int(-3);
        assert!(series[1].contains(&v));
        assert!(!series[2].contains(&v));
    }

    #[test]
    fn nilpotent_algebras_are_strongly_unimodular() {
        let rep = worked().unimodularity();
        assert!(rep.unimodular && rep.strongly_unimodular);
        assert!(rep.strong_witness.is_none());
    }

    #[test]
    fn strong_unimodularity_witness_of_seven_dim_example() {
        let rep = example_s().unimodularity();
        assert!(rep.unimodular, "full traces vanish");
        assert!(!rep.strongly_unimodular);
        let w = rep.strong_witness.unwrap();
        assert_eq!((w.basis_index, w.level), (7, 3));
        assert_eq!(w.trace, rat(-3, 2));
    }

    #[test]
    fn betti_numbers_of_worked_example() {
        let la = worked();
        let b = la.betti_vector();
        assert_eq!(b[0], 1);
        assert_eq!(b[1], 2);
        // unimodular: top cohomology survives, and duality pairs the rest
        assert_eq!(b[6], 1);
        for k in 0..=6 {
            assert_eq!(b[k], b[6 - k], "duality fails at degree {k}");
        }
        let euler: i64 = b.iter().enumerate().map(|(k, &bk)| if k % 2 == 0 { bk as i64 } else { -(bk as i64) }).sum();
        assert_eq!(euler, 0);
    }

    #[test]
    fn seven_dim_example_has_trivial_middle_cohomology() {
        let la = example_s();
        assert_eq!(la.betti(2), 0);
        assert_eq!(la.betti(3), 0);
    }

    #[test]
    fn cohomology_coords_split_class_and_exact_part() {
        let la = worked();
        let h1 = la.cohomology(1);
        assert_eq!(h1.dim(), 2);
        // e1 + d(anything of degree 0) = e1; class coords (1, 0)
        let alpha = KForm::one_form(&[rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(0), rat_int(0)]);
        assert_eq!(h1.coords(&alpha), Some(vec![rat_int(1), rat_int(0)]));
        // a non-closed form has no class
        let e3 = KForm::one_form(&[rat_int(0), rat_int(0), rat_int(1), rat_int(0), rat_int(0), rat_int(0)]);
        assert_eq!(h1.coords(&e3), None);
        // an exact 2-form has zero class coordinates
        let h2 = la.cohomology(2);
        let exact = la.d(&e3);
        let coords = h2.coords(&exact).unwrap();
        assert!(coords[..h2.dim()].iter().all(Zero::is_zero));
    }

    #[test]
    fn extension_by_diagonal_derivation() {
        let la = worked();
        let d = Matrix::from_fn(6, 6, |i, j| {
            if i == j {
                rat_int([1, 2, 3, 4, 5, 7][i])
            } else {
                Rat::zero()
            }
        });
        let ext = la.extend_by_derivation(&d).unwrap();
        assert_eq!(ext.dim(), 7);
        assert_eq!(ext.nilradical_indices(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(
            ext.differential(3),
            &form2(vec![(&[1, 2], rat_int(1)), (&[3, 7], rat_int(3))])
        );
        assert!(ext.differential(7).is_zero());
        // the extension is solvable but not nilpotent, and stays unimodular
        // because the weights were chosen with nonzero sum; check traces
        let rep = ext.unimodularity();
        assert!(!rep.unimodular);
        assert_eq!(rep.nonunimodular_witness, Some((7, rat_int(22))));
    }

    #[test]
    fn extension_rejects_non_derivations_with_witness() {
        let la = worked();
        let id = Matrix::<Rat>::identity(6);
        assert!(matches!(
            la.extend_by_derivation(&id),
            Err(Error::NotDerivation(1, 2))
        ));
    }

    #[test]
    fn extension_rejects_nilpotent_derivations() {
        let la = worked();
        // e1 -> e6 and everything else to zero is a square-zero derivation
        let mut d = Matrix::<Rat>::zero(6, 6);
        d[(5, 0)] = rat_int(1);
        assert!(matches!(
            la.extend_by_derivation(&d),
            Err(Error::NilpotentDerivation(6))
        ));
    }

    #[test]
    fn ad_action_matches_extension_derivation() {
        let la = worked();
        let d = Matrix::from_fn(6, 6, |i, j| {
            if i == j {
                rat_int([1, 2, 3, 4, 5, 7][i])
            } else {
                Rat::zero()
            }
        });
        let ext = la.extend_by_derivation(&d).unwrap();
        let ad7 = ext.ad_matrix(7);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(ad7[(i, j)], d[(i, j)]);
            }
        }
    }
}
