use std::fmt;
use std::sync::Arc;

/// Ordered registry of variable names shared by a family of polynomials.
/// Variables are addressed by position; the order fixes both the graded-lex
/// comparison and the canonical parameter numbering used everywhere else.
#[derive(Clone, Eq)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate variable name `{n}`");
        }
        VarSet { names: Arc::new(names) }
    }

    /// Registry with no variables; constants live here and unify with any
    /// other registry.
    pub fn empty() -> Self {
        VarSet { names: Arc::new(Vec::new()) }
    }

    /// `a1..a<count>` style run of numbered names.
    pub fn numbered(prefix: &str, count: usize) -> Self {
        VarSet::new((1..=count).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// True when `self` is a prefix of `other`, so terms keep their variable
    /// indices when reinterpreted in the larger registry.
    pub fn is_prefix_of(&self, other: &VarSet) -> bool {
        self.len() <= other.len() && other.names[..self.len()] == self.names[..]
    }

    /// Registry extended by appending `extra` names.
    pub fn extended<S: Into<String>, I: IntoIterator<Item = S>>(&self, extra: I) -> VarSet {
        let mut names: Vec<String> = self.names.as_ref().clone();
        names.extend(extra.into_iter().map(Into::into));
        VarSet::new(names)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet{:?}", self.names)
    }
}

/// Resolve the registry for a binary operation: constants (empty registry)
/// unify with anything, otherwise the registries must agree.
pub(crate) fn unify(a: &VarSet, b: &VarSet) -> VarSet {
    if a.is_empty() {
        b.clone()
    } else if b.is_empty() || a == b {
        a.clone()
    } else {
        panic!("variable registry mismatch: {a:?} vs {b:?}");
    }
}
