//! G2-structure tests on a seven-dimensional frame: the nondegeneracy
//! criterion through the associated bilinear form, metric and volume
//! extraction with exact ninth roots where possible, closedness and exact
//! primitives, and obstruction certificates showing that no exact 3-form
//! on a constrained family can be nondegenerate.
//!
//! The bilinear form of a 3-form phi is B(v, w) = coefficient of e^{1..7}
//! in i_v phi ^ i_w phi ^ phi; phi defines a G2-structure exactly when B
//! is definite (either sign).  Definiteness is decided twice, through the
//! characteristic-polynomial sign pattern and through a symmetric
//! congruence diagonalization, and the two verdicts are asserted to agree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::classify::symbolic_extension_differentials;
use crate::error::Error;
use crate::exterior::{KForm, MIdx};
use crate::liealg::{d_form, LieAlgebra};
use crate::ring::{
    char_poly_coeffs, kernel_basis, rat_int, solve_affine, solve_field, LinearSystem, Matrix,
    Poly, Rat, Scalar, ScalarField, VarSet,
};
use crate::Result;

const AMBIENT: usize = 7;

/// Default decimal precision for inexact ninth roots.
pub const DEFAULT_ROOT_DIGITS: usize = 50;

/// A 3-form on a seven-dimensional coframe together with the coframe
/// differentials (needed for closedness and primitives; the pointwise
/// constructor uses zero differentials).
#[derive(Clone, Debug)]
pub struct G2Candidate<F: ScalarField> {
    diffs: Vec<KForm<F>>,
    phi: KForm<F>,
}

impl G2Candidate<Rat> {
    /// Candidate on a seven-dimensional Lie algebra.
    pub fn on_algebra(la: &LieAlgebra, phi: KForm<Rat>) -> Result<Self> {
        G2Candidate::from_differentials(la.differentials().to_vec(), phi)
    }
}

impl<F: ScalarField> G2Candidate<F> {
    pub fn from_differentials(diffs: Vec<KForm<F>>, phi: KForm<F>) -> Result<Self> {
        if diffs.len() != AMBIENT {
            return Err(Error::Usage(format!(
                "expected {AMBIENT} coframe differentials, got {}",
                diffs.len()
            )));
        }
        if phi.degree() != 3 {
            return Err(Error::Usage(format!(
                "a G2 candidate is a 3-form, got degree {}",
                phi.degree()
            )));
        }
        Ok(G2Candidate { diffs, phi })
    }

    /// Candidate with zero differentials: only the pointwise questions
    /// (bilinear form, nondegeneracy, metric) are meaningful.
    pub fn pointwise(phi: KForm<F>) -> Result<Self> {
        G2Candidate::from_differentials(vec![KForm::zero(2); AMBIENT], phi)
    }

    pub fn phi(&self) -> &KForm<F> {
        &self.phi
    }

    pub fn differentials(&self) -> &[KForm<F>] {
        &self.diffs
    }

    fn d(&self, form: &KForm<F>) -> KForm<F> {
        d_form(&self.diffs, form)
    }

    pub fn is_closed(&self) -> bool {
        self.d(&self.phi).is_zero()
    }

    pub fn exact_primitive(&self) -> Result<PrimitiveOutcome<F>> {
        primitive_or_class(&self.diffs, &self.phi)
    }
}

/// The adapted form e^{127}+e^{347}+e^{567}+e^{135}-e^{146}-e^{236}-e^{245},
/// whose frame is orthonormal for the induced metric.
pub fn standard_adapted_form<S: Scalar>() -> KForm<S> {
    let term = |idx: &[usize], s: i64| KForm::basis_element(MIdx::from_indices(idx), S::from_int(s));
    term(&[1, 2, 7], 1)
        + term(&[3, 4, 7], 1)
        + term(&[5, 6, 7], 1)
        + term(&[1, 3, 5], 1)
        + term(&[1, 4, 6], -1)
        + term(&[2, 3, 6], -1)
        + term(&[2, 4, 5], -1)
}

/// The symmetric bilinear form of a 3-form and its determinant.
#[derive(Clone, Debug)]
pub struct BilinearData<F: ScalarField> {
    pub matrix: Matrix<F>,
    pub det: F,
}

pub fn g2_bilinear<F: ScalarField>(c: &G2Candidate<F>) -> BilinearData<F> {
    let contractions: Vec<KForm<F>> = (1..=AMBIENT).map(|i| c.phi.contract(i)).collect();
    let matrix = Matrix::from_fn(AMBIENT, AMBIENT, |i, j| {
        contractions[i]
            .wedge(&contractions[j])
            .wedge(&c.phi)
            .top_coeff(AMBIENT)
    });
    assert_eq!(matrix, matrix.transpose(), "the bilinear form must be symmetric");
    let det = matrix.det();
    BilinearData { matrix, det }
}

/// Congruence diagonalization: returns (P, d) with P^T B P = diag(d).
/// Column k of P is a basis vector u_k with B(u_k, u_k) = d_k.
fn congruence_diagonal<F: ScalarField>(b: &Matrix<F>) -> (Matrix<F>, Vec<F>) {
    let n = b.nrows();
    let mut m = b.clone();
    let mut p = Matrix::<F>::identity(n);
    let swap_cols = |mat: &mut Matrix<F>, a: usize, c: usize| {
        for i in 0..n {
            let tmp = mat[(i, a)].clone();
            mat[(i, a)] = mat[(i, c)].clone();
            mat[(i, c)] = tmp;
        }
    };
    for k in 0..n {
        if m[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                m.swap_rows(k, j);
                swap_cols(&mut m, k, j);
                swap_cols(&mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !m[(k, j)].is_zero()) {
                // u_k += u_j turns the zero diagonal entry into 2 B(u_k, u_j)
                for t in 0..n {
                    let add = m[(j, t)].clone();
                    m[(k, t)] = m[(k, t)].clone() + add;
                }
                for t in 0..n {
                    let add = m[(t, j)].clone();
                    m[(t, k)] = m[(t, k)].clone() + add;
                }
                for t in 0..n {
                    let add = p[(t, j)].clone();
                    p[(t, k)] = p[(t, k)].clone() + add;
                }
            } else {
                continue;
            }
        }
        let pivot = m[(k, k)].clone();
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = (m[(i, k)].clone() * pivot.inv().expect("pivot is nonzero")).clone();
            for t in 0..n {
                let sub = f.clone() * m[(k, t)].clone();
                m[(i, t)] = m[(i, t)].clone() - sub;
            }
            for t in 0..n {
                let sub = f.clone() * m[(t, k)].clone();
                m[(t, i)] = m[(t, i)].clone() - sub;
            }
            for t in 0..n {
                let sub = f.clone() * p[(t, k)].clone();
                p[(t, i)] = p[(t, i)].clone() - sub;
            }
        }
    }
    let d: Vec<F> = (0..n).map(|k| m[(k, k)].clone()).collect();
    let mut check = p.transpose() * b.clone() * p.clone();
    for k in 0..n {
        check[(k, k)] = check[(k, k)].clone() - d[k].clone();
    }
    assert!(check.is_zero_matrix(), "congruence diagonalization must verify");
    (p, d)
}

/// Verdict of the pointwise G2 criterion: `is_g2` iff the bilinear form is
/// definite; `sign` is its definite sign; on failure `witness` is a vector
/// v with B(v, v) zero or of the minority sign.
#[derive(Clone, Debug)]
pub struct Nondegeneracy<F: ScalarField> {
    pub is_g2: bool,
    pub sign: Option<i8>,
    pub witness: Option<Vec<F>>,
}

pub fn g2_nondegenerate<F: ScalarField>(c: &G2Candidate<F>) -> Nondegeneracy<F> {
    let data = g2_bilinear(c);
    let b = &data.matrix;
    let n = AMBIENT;
    let (p, diag) = congruence_diagonal(b);
    let signs: Vec<i8> = diag.iter().map(ScalarField::signum).collect();
    let pos = signs.iter().filter(|&&s| s > 0).count();
    let neg = signs.iter().filter(|&&s| s < 0).count();
    // independent second opinion: det(tI - B) has all roots real, so B is
    // positive definite iff the coefficients alternate in sign strictly and
    // negative definite iff they are all positive
    let coeffs = char_poly_coeffs(b);
    let pos_def_cp = (0..=n).all(|k| coeffs[k].signum() == if (n - k).is_multiple_of(2) { 1 } else { -1 });
    let neg_def_cp = (0..=n).all(|k| coeffs[k].signum() == 1);
    assert_eq!(pos == n, pos_def_cp, "definiteness routes disagree");
    assert_eq!(neg == n, neg_def_cp, "definiteness routes disagree");
    if pos == n || neg == n {
        return Nondegeneracy {
            is_g2: true,
            sign: Some(if pos == n { 1 } else { -1 }),
            witness: None,
        };
    }
    // failure witness, deterministic: an isotropic basis vector (scanned
    // from the extension direction downward), else a kernel vector, else
    // the congruence column carrying the minority sign
    let witness = if let Some(k) = (0..n).rev().find(|&k| b[(k, k)].is_zero()) {
        let mut v = vec![F::zero(); n];
        v[k] = F::one();
        v
    } else if pos + neg < n {
        kernel_basis(b).into_iter().next().expect("rank-deficient form has a kernel")
    } else {
        let minority: i8 = if pos >= neg { -1 } else { 1 };
        let k = signs.iter().position(|&s| s == minority).expect("indefinite form");
        (0..n).map(|i| p[(i, k)].clone()).collect()
    };
    Nondegeneracy { is_g2: false, sign: None, witness: Some(witness) }
}

/// Scalars that can reveal an exactly rational value.
pub trait RationalContent {
    fn to_rat(&self) -> Option<Rat>;
}

impl RationalContent for Rat {
    fn to_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

impl RationalContent for crate::ring::Quad {
    fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }
}

/// Ninth root of the volume determinant: exact rational when one exists,
/// otherwise a decimal truncation `value` with `value^9 <= |r| <`
/// `(value + 2*10^-digits)^9`.
#[derive(Clone, Debug, PartialEq)]
pub enum NinthRoot {
    Exact(Rat),
    Approx { value: Rat, digits: usize },
}

fn pow9(r: &Rat) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..9 {
        acc *= r.clone();
    }
    acc
}

/// Odd ninth root of a nonzero rational: exact branch when numerator and
/// denominator are perfect ninth powers, else a floor truncation.
fn ninth_root(r: &Rat, digits: usize) -> NinthRoot {
    assert!(!r.is_zero(), "ninth root of zero volume");
    let sign = if r.is_negative() { -1 } else { 1 };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let rn = num.nth_root(9);
    let rd = den.nth_root(9);
    if num == rn.pow(9u32) && den == rd.pow(9u32) {
        let root = Rat::new(rn, rd) * rat_int(sign);
        return NinthRoot::Exact(root);
    }
    let scale = BigInt::from(10u32).pow(digits as u32);
    let shifted = num * scale.pow(9u32) / den;
    let w = shifted.nth_root(9);
    let value = Rat::new(w, scale) * rat_int(sign);
    // certify the truncation bracket exactly
    let abs = if sign < 0 { -r.clone() } else { r.clone() };
    let v = if sign < 0 { -value.clone() } else { value.clone() };
    let step = Rat::new(BigInt::from(2u32), BigInt::from(10u32).pow(digits as u32));
    assert!(pow9(&v) <= abs && abs < pow9(&(v + step)), "root truncation out of bracket");
    NinthRoot::Approx { value, digits }
}

/// Metric and volume data of a definite candidate: with b = B/6 relative
/// to the reference volume e^{1..7}, the metric is g = (det b)^{-1/9} b and
/// the volume form is dV = (det b)^{1/9} e^{1..7}.
#[derive(Clone, Debug)]
pub struct MetricVolume<F: ScalarField> {
    pub b: Matrix<F>,
    pub det_b: F,
    pub sign: i8,
    /// (det b)^{1/9}; negative exactly when the orientation is reversed.
    pub root: NinthRoot,
    /// Exact metric when the root is exact.
    pub metric: Option<Matrix<F>>,
}

pub fn metric_volume<F: ScalarField + RationalContent>(
    c: &G2Candidate<F>,
    digits: usize,
) -> Result<MetricVolume<F>> {
    let nd = g2_nondegenerate(c);
    if !nd.is_g2 {
        return Err(Error::Usage("not a G2-form: the bilinear form is not definite".into()));
    }
    let data = g2_bilinear(c);
    let sixth = F::from_rat(&Rat::new(BigInt::one(), BigInt::from(6u32)));
    let b = data.matrix.scale(&sixth);
    let det_b = b.det();
    let root = match det_b.to_rat() {
        Some(r) => ninth_root(&r, digits),
        None => NinthRoot::Approx {
            value: approx_root_of_quad(&det_b, digits),
            digits,
        },
    };
    let metric = match &root {
        NinthRoot::Exact(r) => {
            let inv = Rat::one() / r.clone();
            Some(b.scale(&F::from_rat(&inv)))
        }
        NinthRoot::Approx { .. } => None,
    };
    Ok(MetricVolume { b, det_b, sign: nd.sign.expect("definite"), root, metric })
}

/// Decimal truncation of the ninth root of a scalar that is not exactly
/// rational, via a rational bracket of the scalar itself.
fn approx_root_of_quad<F: ScalarField + RationalContent>(x: &F, digits: usize) -> Rat {
    let sgn = x.signum();
    assert!(sgn != 0, "ninth root of zero volume");
    let ax = if sgn < 0 { -x.clone() } else { x.clone() };
    // bracket |x| between rationals by binary search on k/10^(digits+9),
    // deciding each comparison with the field's exact signum
    let scale = BigInt::from(10u32).pow((digits + 9) as u32);
    let mut lo = BigInt::from(0);
    let mut hi = BigInt::one();
    let above = |k: &BigInt| {
        let q = F::from_rat(&Rat::new(k.clone(), scale.clone()));
        (ax.clone() - q).signum() >= 0
    };
    while above(&hi) {
        hi = &hi * 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if above(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lower = Rat::new(lo, scale);
    let root = match ninth_root(&lower, digits) {
        NinthRoot::Exact(r) => r,
        NinthRoot::Approx { value, .. } => value,
    };
    if sgn < 0 {
        -root
    } else {
        root
    }
}

/// Outcome of the primitive solve d(alpha) = form.
#[derive(Clone, Debug)]
pub enum PrimitiveOutcome<F: ScalarField> {
    Primitive(KForm<F>),
    /// The form is closed but not exact; the residue is its reduction
    /// against the image of d, a nonzero representative of its class.
    NonExact { residue: KForm<F> },
}

/// Solves d(alpha) = form over the full lower-degree exterior power, for a
/// closed form of any degree on a seven-dimensional coframe.
pub fn primitive_or_class<F: ScalarField>(
    diffs: &[KForm<F>],
    form: &KForm<F>,
) -> Result<PrimitiveOutcome<F>> {
    let n = diffs.len();
    let k = form.degree();
    assert!(k >= 1 && k <= n, "degree out of range");
    if !d_form(diffs, form).is_zero() {
        return Err(Error::NotClosed(k));
    }
    let lower: Vec<MIdx> = MIdx::enumerate(n, k - 1);
    let target: Vec<MIdx> = MIdx::enumerate(n, k);
    let images: Vec<Vec<F>> = lower
        .iter()
        .map(|m| d_form(diffs, &KForm::basis_element(*m, F::one())).to_coords(&target))
        .collect();
    let a = Matrix::from_fn(target.len(), lower.len(), |i, j| images[j][i].clone());
    let rhs = form.to_coords(&target);
    if let Some(x) = solve_field(&a, &rhs) {
        let alpha = KForm::from_terms(
            k - 1,
            lower.iter().zip(&x).map(|(m, c)| (*m, c.clone())).collect(),
        );
        assert_eq!(d_form(diffs, &alpha), *form, "primitive must differentiate back");
        return Ok(PrimitiveOutcome::Primitive(alpha));
    }
    let (rows, pivots) = crate::ring::row_reduced_basis(&images);
    let residue_coords = crate::ring::reduce_against(&rhs, &rows, &pivots);
    let residue = KForm::from_terms(
        k,
        target.iter().zip(&residue_coords).map(|(m, c)| (*m, c.clone())).collect(),
    );
    assert!(!residue.is_zero(), "unsolvable system must leave a nonzero residue");
    Ok(PrimitiveOutcome::NonExact { residue })
}

/// The generic exact 3-form d(alpha) on the rank-one extension of `n` by a
/// symbolic derivation, with alpha = sum of c-variables over all 2-form
/// indices; the registry appends the 21 c-variables to the derivation
/// parameters.
pub struct SymbolicExactForm {
    pub vars: VarSet,
    pub alpha: KForm<Poly>,
    pub d_alpha: KForm<Poly>,
}

pub fn generic_exact_form(n: &LieAlgebra, generic: &Matrix<Poly>) -> SymbolicExactForm {
    let base = crate::classify::registry_of(generic);
    let masks: Vec<MIdx> = MIdx::enumerate(AMBIENT, 2);
    let names: Vec<String> = masks
        .iter()
        .map(|m| {
            let ix = m.indices();
            format!("c{}{}", ix[0], ix[1])
        })
        .collect();
    let vars = base.extended(names);
    let alpha = KForm::from_terms(
        2,
        masks
            .iter()
            .enumerate()
            .map(|(t, m)| (*m, Poly::var(&vars, base.len() + t)))
            .collect(),
    );
    let diffs: Vec<KForm<Poly>> = symbolic_extension_differentials(n, generic)
        .into_iter()
        .map(|f| f.map(|p| p.in_registry(&vars)))
        .collect();
    let d_alpha = d_form(&diffs, &alpha);
    SymbolicExactForm { vars, alpha, d_alpha }
}

/// One certifying basis vector: P_v = coefficient of e^{1..7} in
/// i_v d(alpha) ^ i_v d(alpha) ^ d(alpha) vanishes for every parameter
/// choice satisfying the constraints.
#[derive(Clone, Debug)]
pub struct WitnessRecord {
    /// Basis index of the witness vector.
    pub vector: usize,
    /// P_v before constraint substitution.
    pub raw: Poly,
    /// Whether P_v vanishes even without the constraints.
    pub identically_zero: bool,
}

/// A symbolic proof that no member of the constrained family carries an
/// exact nondegenerate 3-form, listing every certifying basis vector in
/// ascending order.
#[derive(Clone, Debug)]
pub struct ObstructionCertificate {
    pub witnesses: Vec<WitnessRecord>,
}

impl ObstructionCertificate {
    /// First certifying vector in the e1..e7 scan.
    pub fn primary(&self) -> &WitnessRecord {
        &self.witnesses[0]
    }

    pub fn find(&self, vector: usize) -> Option<&WitnessRecord> {
        self.witnesses.iter().find(|w| w.vector == vector)
    }
}

#[derive(Clone, Debug)]
pub enum Obstruction {
    Certificate(ObstructionCertificate),
    /// No basis vector certifies; the nonzero substituted remainders.
    Refuted { remainders: Vec<(usize, Poly)> },
}

pub fn exactness_obstruction(
    n: &LieAlgebra,
    generic: &Matrix<Poly>,
    constraints: &LinearSystem,
) -> Result<Obstruction> {
    if n.dim() + 1 != AMBIENT {
        return Err(Error::Usage(format!(
            "the obstruction applies to extensions of six-dimensional algebras, got dim {}",
            n.dim()
        )));
    }
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let sef = generic_exact_form(n, generic);
    let sol = solve_affine(constraints)?;
    let lifted: BTreeMap<usize, Poly> = sol
        .substitution_map()
        .into_iter()
        .map(|(k, v)| (k, v.in_registry(&sef.vars)))
        .collect();
    let mut witnesses = Vec::new();
    let mut remainders = Vec::new();
    for v in 1..=AMBIENT {
        let iv = sef.d_alpha.contract(v);
        let pv = iv.wedge(&iv).wedge(&sef.d_alpha).top_coeff(AMBIENT);
        if pv.is_zero() {
            witnesses.push(WitnessRecord { vector: v, raw: pv, identically_zero: true });
            continue;
        }
        let substituted = pv.in_registry(&sef.vars).substitute(&lifted);
        if substituted.is_zero() {
            witnesses.push(WitnessRecord { vector: v, raw: pv, identically_zero: false });
        } else {
            remainders.push((v, substituted));
        }
    }
    if witnesses.is_empty() {
        Ok(Obstruction::Refuted { remainders })
    } else {
        Ok(Obstruction::Certificate(ObstructionCertificate { witnesses }))
    }
}
