//! Exterior algebra on a basis e1..en: multi-index bitmasks, homogeneous
//! k-forms with coefficients in any exact scalar ring, wedge and interior
//! products, and the extension of linear actions on 1-forms to all degrees.
//! Every sign in the crate funnels through [`wedge_sign`].

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{Matrix, Scalar};

/// Multi-index e^{i1 < i2 < ... < ik} stored as a bitmask (bit i-1 set means
/// index i is present).  Ordered lexicographically by the ascending index
/// tuple, so for degree 2 on seven indices: e12 < e13 < ... < e17 < e23 < ...
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MIdx(u16);

impl MIdx {
    pub const EMPTY: MIdx = MIdx(0);

    /// Build from distinct 1-based indices (any order).
    pub fn from_indices(indices: &[usize]) -> MIdx {
        let mut bits = 0u16;
        for &i in indices {
            assert!((1..=16).contains(&i), "index out of range");
            let bit = 1u16 << (i - 1);
            assert!(bits & bit == 0, "repeated index in multi-index");
            bits |= bit;
        }
        MIdx(bits)
    }

    /// The full multi-index e^{1...n}.
    pub fn full(n: usize) -> MIdx {
        assert!(n <= 16);
        MIdx(((1u32 << n) - 1) as u16)
    }

    pub fn bits(&self) -> u16 {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, idx: usize) -> bool {
        (1..=16).contains(&idx) && self.0 & (1 << (idx - 1)) != 0
    }

    /// Ascending 1-based indices.
    pub fn indices(&self) -> Vec<usize> {
        (1..=16).filter(|&i| self.contains(i)).collect()
    }

    pub fn without(&self, idx: usize) -> MIdx {
        assert!(self.contains(idx));
        MIdx(self.0 & !(1 << (idx - 1)))
    }

    pub fn is_disjoint(&self, other: MIdx) -> bool {
        self.0 & other.0 == 0
    }

    /// All degree-k multi-indices on e1..en, in ascending order.
    pub fn enumerate(n: usize, k: usize) -> Vec<MIdx> {
        assert!(n <= 16);
        let mut out: Vec<MIdx> = (0..1u32 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| MIdx(m as u16))
            .collect();
        out.sort();
        out
    }
}

impl Ord for MIdx {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl PartialOrd for MIdx {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Sign of e^a wedge e^b relative to the ascending merge of the two index
/// sets: (-1)^(inversions between a and b).  Returns `None` when the sets
/// overlap (the wedge is zero).  This is the single audited sign routine;
/// wedge, contraction and differential all reduce to it.
pub fn wedge_sign(a: MIdx, b: MIdx) -> Option<i8> {
    if !a.is_disjoint(b) {
        return None;
    }
    let mut inversions = 0u32;
    for j in b.indices() {
        // count indices of a that must move past j
        let above = a.bits() >> j; // bits for indices strictly greater than j
        inversions += above.count_ones();
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Homogeneous k-form with coefficients in S.  Zero coefficients are never
/// stored, so equality is structural.
#[derive(Clone, PartialEq, Debug)]
pub struct KForm<S: Scalar> {
    degree: usize,
    terms: BTreeMap<MIdx, S>,
}

impl<S: Scalar> KForm<S> {
    pub fn zero(degree: usize) -> Self {
        KForm { degree, terms: BTreeMap::new() }
    }

    pub fn basis_element(mask: MIdx, coeff: S) -> Self {
        let mut form = KForm::zero(mask.degree());
        form.add_term(mask, coeff);
        form
    }

    pub fn from_terms(degree: usize, list: Vec<(MIdx, S)>) -> Self {
        let mut form = KForm::zero(degree);
        for (mask, c) in list {
            form.add_term(mask, c);
        }
        form
    }

    /// The 1-form with the given coefficients on e1..en.
    pub fn one_form(coords: &[S]) -> Self {
        let mut form = KForm::zero(1);
        for (i, c) in coords.iter().enumerate() {
            form.add_term(MIdx::from_indices(&[i + 1]), c.clone());
        }
        form
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MIdx, &S)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<MIdx> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, mask: MIdx) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, mask: MIdx, coeff: S) {
        assert_eq!(mask.degree(), self.degree, "mixed degrees in one form");
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            None => {
                self.terms.insert(mask, coeff);
            }
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(mask, sum);
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> KForm<S> {
        let mut out = KForm::zero(self.degree);
        for (mask, v) in &self.terms {
            out.add_term(*mask, v.clone() * c.clone());
        }
        out
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> KForm<T> {
        let mut out = KForm::zero(self.degree);
        for (mask, v) in &self.terms {
            out.add_term(*mask, f(v));
        }
        out
    }

    pub fn wedge(&self, other: &KForm<S>) -> KForm<S> {
        let mut out = KForm::zero(self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(sign) = wedge_sign(*ma, *mb) {
                    let merged = MIdx(ma.bits() | mb.bits());
                    let prod = ca.clone() * cb.clone();
                    out.add_term(merged, if sign > 0 { prod } else { -prod });
                }
            }
        }
        out
    }

    /// Interior product with the basis vector e_idx.
    pub fn contract(&self, idx: usize) -> KForm<S> {
        assert!(self.degree >= 1, "contraction needs positive degree");
        let mut out = KForm::zero(self.degree - 1);
        for (mask, c) in &self.terms {
            if !mask.contains(idx) {
                continue;
            }
            let rest = mask.without(idx);
            let sign = wedge_sign(MIdx::from_indices(&[idx]), rest)
                .expect("index removed from the set is disjoint from the rest");
            let val = c.clone();
            out.add_term(rest, if sign > 0 { val } else { -val });
        }
        out
    }

    /// Coefficient of the top form e^{1...n}.
    pub fn top_coeff(&self, n: usize) -> S {
        assert_eq!(self.degree, n, "not a top-degree form");
        self.coeff(MIdx::full(n))
    }

    /// Coordinates with respect to an explicit list of multi-indices; the
    /// support must be contained in the list.
    pub fn to_coords(&self, basis: &[MIdx]) -> Vec<S> {
        let coords: Vec<S> = basis.iter().map(|m| self.coeff(*m)).collect();
        let covered: std::collections::HashSet<MIdx> = basis.iter().copied().collect();
        for mask in self.terms.keys() {
            assert!(covered.contains(mask), "support outside the chosen basis");
        }
        coords
    }

    pub fn from_coords(degree: usize, basis: &[MIdx], coords: &[S]) -> KForm<S> {
        assert_eq!(basis.len(), coords.len());
        let mut out = KForm::zero(degree);
        for (m, c) in basis.iter().zip(coords) {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Rewrite in a new frame f1..fm, where row j of `p` expresses the old
    /// basis 1-form e^{j+1} as a combination of the f^i.  Extends the 1-form
    /// substitution multiplicatively.
    pub fn change_of_frame(&self, p: &Matrix<S>) -> KForm<S> {
        let mut out = KForm::zero(self.degree);
        for (mask, c) in &self.terms {
            let mut acc = KForm::basis_element(MIdx::EMPTY, c.clone());
            for j in mask.indices() {
                let row: Vec<S> = p.row(j - 1).to_vec();
                acc = acc.wedge(&KForm::one_form(&row));
            }
            out = out + acc;
        }
        out
    }
}

impl<S: Scalar> std::ops::Add for KForm<S> {
    type Output = KForm<S>;
    fn add(self, rhs: KForm<S>) -> KForm<S> {
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        let mut out = self;
        for (mask, c) in rhs.terms {
            out.add_term(mask, c);
        }
        out
    }
}

impl<S: Scalar> std::ops::Sub for KForm<S> {
    type Output = KForm<S>;
    fn sub(self, rhs: KForm<S>) -> KForm<S> {
        self + (-rhs)
    }
}

impl<S: Scalar> std::ops::Neg for KForm<S> {
    type Output = KForm<S>;
    fn neg(self) -> KForm<S> {
        let degree = self.degree;
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        KForm { degree, terms }
    }
}

/// Extend a linear action on basis 1-forms (e^i maps to `action(i)`, any
/// homogeneous image degree) to a k-form by the Leibniz rule
/// L(e^S) = sum_p (-1)^(p-1) L(e^{s_p}) wedge e^{S minus s_p}.
/// With 1-form images this is the degree-0 derivation extension; with
/// 2-form images it is the antiderivation extension used by differentials.
pub fn extend_linear<S: Scalar>(
    action: &mut dyn FnMut(usize) -> KForm<S>,
    form: &KForm<S>,
) -> KForm<S> {
    let image_degree = |k: usize, img: usize| k - 1 + img;
    let mut out: Option<KForm<S>> = None;
    for (mask, c) in form.terms() {
        for (p, idx) in mask.indices().into_iter().enumerate() {
            let rest = mask.without(idx);
            let image = action(idx);
            let target = image_degree(form.degree(), image.degree());
            let sign_c = if p % 2 == 0 { c.clone() } else { -c.clone() };
            let contrib = image
                .scale(&sign_c)
                .wedge(&KForm::basis_element(rest, S::one()));
            out = Some(match out {
                None => contrib,
                Some(acc) => {
                    assert_eq!(acc.degree(), target, "inhomogeneous action images");
                    acc + contrib
                }
            });
        }
    }
    out.unwrap_or_else(|| KForm::zero(form.degree()))
}

impl<S: Scalar> fmt::Display for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, c) in &self.terms {
            let cs = c.to_string();
            // multi-term or fractional coefficients get parentheses
            let needs_parens = cs[1..].contains(" + ") || cs[1..].contains(" - ");
            let (neg, body) = if !needs_parens && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let rendered = if mask.degree() == 0 {
                body
            } else if body == "1" {
                mask.to_string()
            } else if needs_parens {
                format!("({body})*{mask}")
            } else {
                format!("{body}*{mask}")
            };
            if first {
                if neg {
                    write!(f, "-{rendered}")?;
                } else {
                    write!(f, "{rendered}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {rendered}")?;
            } else {
                write!(f, " + {rendered}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int, Poly, Rat, VarSet};
    use proptest::prelude::*;

    fn e(indices: &[usize]) -> MIdx {
        MIdx::from_indices(indices)
    }

    fn rform(terms: Vec<(&[usize], i64)>) -> KForm<Rat> {
        let degree = terms.first().map_or(0, |(m, _)| m.len());
        KForm::from_terms(
            degree,
            terms.into_iter().map(|(m, c)| (e(m), rat_int(c))).collect(),
        )
    }

    /// Adapted-frame 3-form used across the crate's tests.
    fn phi0() -> KForm<Rat> {
        rform(vec![
            (&[1, 2, 7], 1),
            (&[3, 4, 7], 1),
            (&[5, 6, 7], 1),
            (&[1, 3, 5], 1),
            (&[1, 4, 6], -1),
            (&[2, 3, 6], -1),
            (&[2, 4, 5], -1),
        ])
    }

    #[test]
    fn multi_index_order_is_tuple_lex() {
        let masks = MIdx::enumerate(7, 2);
        assert_eq!(masks.len(), 21);
        let head: Vec<String> = masks.iter().take(7).map(|m| m.to_string()).collect();
        assert_eq!(head, vec!["e12", "e13", "e14", "e15", "e16", "e17", "e23"]);
    }

    #[test]
    fn wedge_sign_counts_inversions() {
        assert_eq!(wedge_sign(e(&[1, 2]), e(&[3])), Some(1));
        assert_eq!(wedge_sign(e(&[2]), e(&[1])), Some(-1));
        assert_eq!(wedge_sign(e(&[3]), e(&[1, 2])), Some(1));
        assert_eq!(wedge_sign(e(&[2, 4]), e(&[1, 3])), Some(-1));
        assert_eq!(wedge_sign(e(&[1, 2]), e(&[2, 3])), None);
    }

    #[test]
    fn contraction_of_adapted_form() {
        let got = phi0().contract(1);
        assert_eq!(got, rform(vec![(&[2, 7], 1), (&[3, 5], 1), (&[4, 6], -1)]));
        assert_eq!(got.to_string(), "e27 + e35 - e46");
    }

    #[test]
    fn display_canonical() {
        assert_eq!(rform(vec![(&[3, 4], 1), (&[2, 5], -1)]).to_string(), "-e25 + e34");
        assert_eq!(rform(vec![(&[1, 4], 1), (&[2, 3], 1)]).to_string(), "e14 + e23");
        assert_eq!(KForm::<Rat>::zero(2).to_string(), "0");
        let vs = VarSet::numbered("a", 2);
        let poly_form = KForm::from_terms(
            2,
            vec![(e(&[5, 6]), Poly::var(&vs, 0) + Poly::var(&vs, 1))],
        );
        assert_eq!(poly_form.to_string(), "(a1 + a2)*e56");
        let half = KForm::from_terms(2, vec![(e(&[1, 2]), rat(-1, 2))]);
        assert_eq!(half.to_string(), "-1/2*e12");
    }

    #[test]
    fn extend_linear_reproduces_leibniz_signs() {
        // action on 1-forms: e1 -> e12, e2 -> 0, e3 -> e13
        let mut action = |i: usize| match i {
            1 => rform(vec![(&[1, 2], 1)]),
            3 => rform(vec![(&[1, 3], 1)]),
            _ => KForm::zero(2),
        };
        // d(e13) = d(e1)^e3 - e1^d(e3) = e123 - 0
        let got = extend_linear(&mut action, &rform(vec![(&[1, 3], 1)]));
        assert_eq!(got, rform(vec![(&[1, 2, 3], 1)]));
        // d(e23) = -e2^d(e3) = -e2^e13 = e123
        let got = extend_linear(&mut action, &rform(vec![(&[2, 3], 1)]));
        assert_eq!(got, rform(vec![(&[1, 2, 3], 1)]));
    }

    #[test]
    fn change_of_frame_scales_and_mixes() {
        // e1 = 2 f1, e2 = f2 + f3, e3 = f3
        let p = crate::ring::Matrix::from_rows(vec![
            vec![rat_int(2), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ]);
        let got = rform(vec![(&[1, 2], 1)]).change_of_frame(&p);
        assert_eq!(got, rform(vec![(&[1, 2], 2), (&[1, 3], 2)]));
    }

    fn small_form(degree: usize) -> impl Strategy<Value = KForm<Rat>> {
        let masks = MIdx::enumerate(6, degree);
        proptest::collection::vec(-3i64..=3, masks.len()).prop_map(move |coeffs| {
            KForm::from_terms(
                degree,
                masks.iter().copied().zip(coeffs.into_iter().map(rat_int)).collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn wedge_graded_commutativity(
            (j, a) in (1usize..=3).prop_flat_map(|j| (Just(j), small_form(j))),
            (k, b) in (1usize..=3).prop_flat_map(|k| (Just(k), small_form(k))),
        ) {
            let ab = a.wedge(&b);
            let ba = b.wedge(&a);
            let expect = if (j * k) % 2 == 0 { ba.clone() } else { -ba.clone() };
            prop_assert_eq!(ab, expect);
        }

        #[test]
        fn wedge_associativity(
            a in small_form(1),
            b in small_form(1),
            c in small_form(2),
        ) {
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        }

        #[test]
        fn contraction_is_an_antiderivation(
            a in small_form(2),
            b in small_form(1),
            v in 1usize..=6,
        ) {
            let lhs = a.wedge(&b).contract(v);
            let rhs = a.contract(v).wedge(&b) + a.wedge(&b.contract(v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn contractions_anticommute(a in small_form(3), v in 1usize..=6, w in 1usize..=6) {
            prop_assume!(v != w);
            let vw = a.contract(w).contract(v);
            let wv = a.contract(v).contract(w);
            prop_assert_eq!(vw, -wv);
        }
    }
}
