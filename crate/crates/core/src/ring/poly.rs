use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat_int, Rat};
use super::scalar::Scalar;
use super::vars::{unify, VarSet};

/// Exponent vector, stored sparsely as (variable index, exponent) pairs
/// sorted by index with no zero exponents.  Ordering is graded lexicographic
/// with respect to the registry order, so a `BTreeMap` keyed by `Monomial`
/// iterates in ascending graded-lex order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    exps: Vec<(u16, u16)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(idx: usize) -> Self {
        Monomial { exps: vec![(idx as u16, 1)] }
    }

    pub fn from_pairs(mut pairs: Vec<(u16, u16)>) -> Self {
        pairs.retain(|&(_, e)| e != 0);
        pairs.sort_by_key(|&(v, _)| v);
        for w in pairs.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate variable in monomial");
        }
        Monomial { exps: pairs }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, idx: usize) -> u16 {
        self.exps
            .iter()
            .find(|&&(v, _)| v as usize == idx)
            .map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(u16, u16)] {
        &self.exps
    }

    pub fn max_var(&self) -> Option<usize> {
        self.exps.last().map(|&(v, _)| v as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            if j == other.exps.len()
                || (i < self.exps.len() && self.exps[i].0 < other.exps[j].0)
            {
                out.push(self.exps[i]);
                i += 1;
            } else if i == self.exps.len() || other.exps[j].0 < self.exps[i].0 {
                out.push(other.exps[j]);
                j += 1;
            } else {
                out.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial { exps: out }
    }

    /// Componentwise quotient, `None` when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut rem = e;
            if j < other.exps.len() && other.exps[j].0 < v {
                return None; // divisor uses a variable we lack
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                if other.exps[j].1 > e {
                    return None;
                }
                rem = e - other.exps[j].1;
                j += 1;
            }
            if rem != 0 {
                out.push((v, rem));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps: out })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lexicographic on exponent vectors: at the first (lowest-index)
        // variable where they differ, the larger exponent is the larger
        // monomial.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater; // we have a positive power earlier
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients over a shared
/// [`VarSet`].  Invariants: no zero coefficients are stored, every variable
/// index is in range for the registry, and constants may carry the empty
/// registry so they unify with anything.
#[derive(Clone, Debug)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { vars: VarSet::empty(), terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat_int(n))
    }

    pub fn var(vars: &VarSet, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(idx), rat_int(1));
        Poly { vars: vars.clone(), terms }
    }

    pub fn var_named(vars: &VarSet, name: &str) -> Self {
        let idx = vars
            .index(name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        Poly::var(vars, idx)
    }

    pub fn term(vars: &VarSet, mono: Monomial, coeff: Rat) -> Self {
        if let Some(m) = mono.max_var() {
            assert!(m < vars.len(), "variable index out of range");
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn from_terms(vars: &VarSet, list: Vec<(Monomial, Rat)>) -> Self {
        let mut p = Poly { vars: vars.clone(), terms: BTreeMap::new() };
        for (m, c) in list {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The rational value when constant.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            Some(rat_int(0))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rat {
        self.terms.get(mono).cloned().unwrap_or_else(|| rat_int(0))
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Primitive normal form: coefficients scaled to coprime integers with
    /// the leading coefficient positive.  Zero maps to zero.  Two rational
    /// multiples of the same polynomial normalize identically, which makes
    /// equation sets comparable and deduplicable.
    pub fn primitive_normal(&self) -> Poly {
        let mut it = self.terms.values();
        let first = match it.next() {
            Some(c) => c.clone(),
            None => return self.clone(),
        };
        let mut num = first.numer().clone();
        let mut den = first.denom().clone();
        for c in it {
            num = num_integer::Integer::gcd(&num, c.numer());
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut scaled = self.scale(&Rat::new(den, num));
        if scaled.leading().is_some_and(|(_, c)| c.is_negative()) {
            scaled = -scaled;
        }
        scaled
    }

    /// Reinterpret in a registry that extends the current one.
    pub fn in_registry(&self, bigger: &VarSet) -> Poly {
        assert!(
            self.vars.is_prefix_of(bigger),
            "registry {:?} does not extend {:?}",
            bigger,
            self.vars
        );
        Poly { vars: bigger.clone(), terms: self.terms.clone() }
    }

    /// Evaluate at a full point, one value per registry variable.  A
    /// constant (empty registry) accepts a point of any arity.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert!(
            self.vars.is_empty() || point.len() == self.vars.len(),
            "point arity mismatch"
        );
        let mut acc = rat_int(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                for _ in 0..e {
                    t *= &point[v as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute polynomials for a subset of variables; untouched variables
    /// remain.  Replacement polynomials must live in (a prefix-compatible
    /// extension of) the same registry.
    pub fn substitute(&self, map: &BTreeMap<usize, Poly>) -> Poly {
        let mut acc = Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let mut t = Poly::term(&self.vars, Monomial::one(), c.clone());
            let mut kept: Vec<(u16, u16)> = Vec::new();
            for &(v, e) in m.pairs() {
                if let Some(rep) = map.get(&(v as usize)) {
                    let mut pw = rep.clone();
                    for _ in 1..e {
                        pw = pw * rep.clone();
                    }
                    t = t * pw;
                } else {
                    kept.push((v, e));
                }
            }
            let t = t * Poly::term(&self.vars, Monomial::from_pairs(kept), rat_int(1));
            acc = acc + t;
        }
        acc
    }

    pub fn substitute_var(&self, idx: usize, replacement: &Poly) -> Poly {
        let mut map = BTreeMap::new();
        map.insert(idx, replacement.clone());
        self.substitute(&map)
    }

    /// Decompose a polynomial of total degree <= 1 into constant part and
    /// variable coefficients; `None` when some term is nonlinear.
    pub fn linear_parts(&self) -> Option<(Rat, Vec<(usize, Rat)>)> {
        let mut constant = rat_int(0);
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            match m.degree() {
                0 => constant = c.clone(),
                1 => coeffs.push((m.max_var().unwrap(), c.clone())),
                _ => return None,
            }
        }
        Some((constant, coeffs))
    }

    /// Divide out the rational content and normalize the sign of the leading
    /// coefficient to be positive; zero stays zero.  Used to deduplicate
    /// linear constraint equations.
    pub fn normalized(&self) -> Poly {
        if self.terms.is_empty() {
            return self.clone();
        }
        let lead = self.leading().unwrap().1.clone();
        let mut scale = lead.clone();
        // Make all coefficients integral with gcd 1 for readability.
        let mut denom_lcm = num_bigint::BigInt::from(1);
        let mut numer_gcd = num_bigint::BigInt::from(0);
        for c in self.terms.values() {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
            numer_gcd = num_integer::gcd(numer_gcd, c.numer().clone());
        }
        if !numer_gcd.is_zero() {
            scale = Rat::new(numer_gcd, denom_lcm);
            if lead.is_negative() {
                scale = -scale;
            }
        }
        let inv = scale.recip();
        self.scale(&inv)
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if !(self.vars.is_empty() || other.vars.is_empty() || self.vars == other.vars) {
            return false;
        }
        self.terms == other.terms
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let vars = unify(&self.vars, &rhs.vars);
        let mut out = Poly { vars, terms: self.terms };
        for (m, c) in rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let vars = unify(&self.vars, &rhs.vars);
        let mut out = Poly { vars, terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { vars: VarSet::empty(), terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::int(1)
    }
}

impl Scalar for Poly {
    fn from_rat(r: &Rat) -> Self {
        Poly::constant(r.clone())
    }

    /// Exact multivariate division by repeated leading-term elimination.
    /// Returns `None` when the quotient does not exist in the ring; the
    /// fraction-free determinant relies on exactness of its divisions.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let vars = unify(&self.vars, &rhs.vars);
        let (lm, lc) = rhs.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Poly { vars: vars.clone(), terms: BTreeMap::new() };
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.div(&lm)?;
            let qc = &rc / &lc;
            let qt = Poly::term(&vars, qm, qc);
            rem = rem - qt.clone() * rhs.clone();
            quot = quot + qt;
        }
        Some(quot)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Descending graded-lex, leading term first.
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                let mut factors: Vec<(u16, u16)> = m.pairs().to_vec();
                // Highest powers first; ties keep registry order.
                factors.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                let mut sep = "";
                for (v, e) in factors {
                    write!(f, "{sep}{}", self.vars.name(v as usize))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                    sep = "*";
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn reg() -> VarSet {
        let mut names: Vec<String> = (1..=16).map(|i| format!("a{i}")).collect();
        for i in 1..=6 {
            for j in (i + 1)..=7 {
                names.push(format!("c{i}{j}"));
            }
        }
        VarSet::new(names)
    }

    fn v(vs: &VarSet, name: &str) -> Poly {
        Poly::var_named(vs, name)
    }

    #[test]
    fn primitive_normal_form_is_scale_invariant() {
        let vs = reg();
        let p = v(&vs, "a1").scale(&rat(-2, 3)) + v(&vs, "a2").scale(&rat(4, 9));
        let n = p.primitive_normal();
        assert_eq!(n, v(&vs, "a1") * Poly::int(3) - v(&vs, "a2") * Poly::int(2));
        assert_eq!(p.scale(&rat(-7, 5)).primitive_normal(), n);
        assert!(Poly::zero().primitive_normal().is_zero());
        assert_eq!(Poly::constant(rat(-3, 4)).primitive_normal(), Poly::int(1));
    }

    #[test]
    fn canonical_display_matches_frozen_form() {
        let vs = reg();
        let c56 = v(&vs, "c56");
        let a1 = v(&vs, "a1");
        let a7 = v(&vs, "a7");
        let p = Poly::int(-12) * c56.clone() * c56.clone() * c56 * (a1 + a7);
        assert_eq!(p.to_string(), "-12*c56^3*a1 - 12*c56^3*a7");
    }

    #[test]
    fn display_edge_cases() {
        let vs = reg();
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::int(-3).to_string(), "-3");
        assert_eq!(Poly::constant(rat(23, 7)).to_string(), "23/7");
        let p = v(&vs, "a2") - Poly::int(1);
        assert_eq!(p.to_string(), "a2 - 1");
        let q = (v(&vs, "a1") * v(&vs, "a1")) - v(&vs, "a2").scale(&rat(1, 2));
        assert_eq!(q.to_string(), "a1^2 - 1/2*a2");
    }

    #[test]
    fn graded_lex_orders_by_degree_then_lex() {
        let vs = reg();
        let a1 = v(&vs, "a1");
        let a2 = v(&vs, "a2");
        // a1^2 (deg 2) > a2 (deg 1); among degree 1, a1 > a2.
        let p = a2.clone() + a1.clone() * a1.clone() + a1.clone();
        assert_eq!(p.to_string(), "a1^2 + a1 + a2");
    }

    #[test]
    fn exact_division_round_trip() {
        let vs = reg();
        let f = v(&vs, "a1") + v(&vs, "a2").scale(&rat(3, 2)) - Poly::int(2);
        let g = v(&vs, "a1") * v(&vs, "a3") - v(&vs, "a4");
        let prod = f.clone() * g.clone();
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        assert_eq!(prod.exact_div(&f).unwrap(), g);
        // Not exactly divisible.
        let h = v(&vs, "a5") + Poly::int(1);
        assert!(f.exact_div(&h).is_none());
    }

    #[test]
    fn substitution_eliminates_variable() {
        let vs = reg();
        let a1 = v(&vs, "a1");
        let a4 = v(&vs, "a4");
        let a5 = v(&vs, "a5");
        let a8 = v(&vs, "a8");
        let p = a1.clone() + a4.clone() + a5.clone() + a8.clone();
        let rep = -(a1 + a4 + a5);
        let idx = vs.index("a8").unwrap();
        assert!(p.substitute_var(idx, &rep).is_zero());
    }

    #[test]
    fn eval_agrees_with_substitution() {
        let vs = VarSet::numbered("x", 3);
        let p = Poly::var(&vs, 0) * Poly::var(&vs, 1) + Poly::var(&vs, 2).scale(&rat(1, 3));
        let point = vec![rat(2, 1), rat(-3, 1), rat(6, 1)];
        assert_eq!(p.eval(&point), rat(-4, 1));
    }

    #[test]
    fn constants_unify_with_any_registry() {
        let vs = reg();
        let p = v(&vs, "a1") + Poly::int(5);
        assert_eq!(p.coeff(&Monomial::one()), rat(5, 1));
        let q = Poly::int(5) * v(&vs, "a1");
        assert_eq!(q.to_string(), "5*a1");
    }

    #[test]
    #[should_panic(expected = "registry mismatch")]
    fn mixing_registries_panics() {
        let va = VarSet::numbered("x", 2);
        let vb = VarSet::numbered("y", 2);
        let _ = Poly::var(&va, 0) + Poly::var(&vb, 0);
    }

    #[test]
    fn normalized_scales_to_primitive_integer_form() {
        let vs = reg();
        let p = (v(&vs, "a1") + v(&vs, "a2")).scale(&rat(-3, 7));
        assert_eq!(p.normalized().to_string(), "a1 + a2");
    }
}
