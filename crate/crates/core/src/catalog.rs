//! Embedded candidate list and transcribed reference data.
//!
//! The catalog lists the thirty-four six-dimensional nilpotent Lie algebras
//! swept by the classification, one per line, each validated on load. The
//! fixtures file carries the transcribed worked examples (structure
//! equations, bracket table, adapted basis) and the printed induced-action
//! tables for the two admitting two-step algebras, including flags for cells
//! whose printing is ambiguous in the source tables.

use crate::error::Error;
use crate::exterior::KForm;
use crate::Result;
use crate::liealg::LieAlgebra;
use crate::notation::{
    parse_kform, parse_kform_quad, parse_matrix_linear, parse_matrix_quad, parse_tuple,
    parse_structure_equations,
};
use crate::ring::{Matrix, Poly, Quad, Rat, VarSet};

/// One catalog line: a validated six-dimensional nilpotent Lie algebra.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: usize,
    pub tuple: String,
    pub note: String,
    pub algebra: LieAlgebra,
}

/// Loads the embedded catalog, or the file named by `LIEG2_CATALOG_PATH`
/// when that variable is set (used to sweep alternate candidate lists).
pub fn load_catalog() -> Result<Vec<CatalogEntry>> {
    match std::env::var("LIEG2_CATALOG_PATH") {
        Ok(path) => parse_catalog(&std::fs::read_to_string(path)?),
        Err(_) => parse_catalog(include_str!("../data/catalog.txt")),
    }
}

/// Parses catalog text: `<id> <tuple> # <note>` per line, ids sequential
/// from 1, every tuple validated as nilpotent structure equations.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::CatalogData(lineno, msg);
        let (id_part, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected `<id> <tuple> # <note>`".into()))?;
        let id: usize = id_part
            .parse()
            .map_err(|_| bad(format!("bad id `{id_part}`")))?;
        if id != entries.len() + 1 {
            return Err(bad(format!(
                "ids must be sequential; expected {}",
                entries.len() + 1
            )));
        }
        let (tuple, note) = match rest.split_once('#') {
            Some((t, n)) => (t.trim(), n.trim()),
            None => (rest.trim(), ""),
        };
        let diffs = parse_tuple(tuple).map_err(|e| bad(e.to_string()))?;
        if diffs.len() != 6 {
            return Err(bad(format!(
                "expected six structure equations, got {}",
                diffs.len()
            )));
        }
        let algebra = LieAlgebra::nilpotent_from_tuple(diffs).map_err(|e| bad(e.to_string()))?;
        entries.push(CatalogEntry {
            id,
            tuple: tuple.to_string(),
            note: note.to_string(),
            algebra,
        });
    }
    if entries.is_empty() {
        return Err(Error::CatalogData(0, "catalog is empty".into()));
    }
    Ok(entries)
}

/// Resolves a command-line key to a catalog entry: a numeral, or one of the
/// aliases `worked`, `abelian`, `n1`, `n2` (which name fixed ids in the
/// embedded list).
pub fn resolve_entry<'a>(entries: &'a [CatalogEntry], key: &str) -> Result<&'a CatalogEntry> {
    let id = match key {
        "worked" => 1,
        "abelian" => 32,
        "n1" => 33,
        "n2" => 34,
        _ => key
            .parse::<usize>()
            .map_err(|_| Error::UnknownCatalogId(key.to_string()))?,
    };
    entries
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownCatalogId(key.to_string()))
}

/// Registry for the derivation parameters appearing in the reference action
/// tables.
pub fn action_table_vars() -> VarSet {
    VarSet::numbered("a", 16)
}

/// A transcribed induced-action table: the printed basis of one cohomology
/// degree and the matrix of the generic derivation action on it. Positions
/// are 1-based in the `unreliable` lists.
#[derive(Debug, Clone)]
pub struct ReferenceAction {
    pub degree: usize,
    pub basis: Vec<KForm<Rat>>,
    pub basis_unreliable: Vec<usize>,
    pub matrix: Matrix<Poly>,
    pub unreliable: Vec<(usize, usize)>,
}

/// Transcribed reference data: the two solvable worked examples and the
/// action tables for the two admitting two-step nilradicals.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub s_example: LieAlgebra,
    pub s_brackets: Vec<(usize, usize, KForm<Rat>)>,
    pub s_primitive: KForm<Rat>,
    pub h_example: LieAlgebra,
    pub h_basis_change: Matrix<Quad>,
    pub h_new_differentials: Vec<KForm<Quad>>,
    pub h_primitive: KForm<Rat>,
    pub n1_actions: [ReferenceAction; 3],
    pub n2_actions: [ReferenceAction; 3],
}

/// Loads the embedded fixtures file.
pub fn fixtures() -> Result<Fixtures> {
    parse_fixtures(include_str!("../data/fixtures.txt"))
}

struct Section {
    name: String,
    line: usize,
    pairs: Vec<(usize, String, String)>,
}

impl Section {
    fn one(&self, key: &str) -> Result<(usize, &str)> {
        let mut found = None;
        for (line, k, v) in &self.pairs {
            if k == key {
                if found.is_some() {
                    return Err(Error::CatalogData(*line, format!("duplicate key `{key}`")));
                }
                found = Some((*line, v.as_str()));
            }
        }
        found.ok_or_else(|| {
            Error::CatalogData(self.line, format!("section `{}` lacks `{key}`", self.name))
        })
    }

    fn opt(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
    }

    fn all(&self, key: &str) -> Vec<(usize, &str)> {
        self.pairs
            .iter()
            .filter(|(_, k, _)| k == key)
            .map(|(line, _, v)| (*line, v.as_str()))
            .collect()
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(body) = line.strip_prefix('[') {
            let name = body.strip_suffix(']').ok_or_else(|| {
                Error::CatalogData(lineno, "unterminated section header".into())
            })?;
            sections.push(Section {
                name: name.to_string(),
                line: lineno,
                pairs: Vec::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::CatalogData(lineno, "expected `key = value`".into()))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| Error::CatalogData(lineno, "entry before first section".into()))?;
        section
            .pairs
            .push((lineno, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(sections)
}

fn at<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::CatalogData(line, e.to_string()))
}

fn parse_index_list(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|w| {
            w.parse::<usize>()
                .map_err(|_| Error::CatalogData(line, format!("bad index `{w}`")))
        })
        .collect()
}

fn parse_example(section: &Section) -> Result<LieAlgebra> {
    let (line, tuple) = section.one("tuple")?;
    let algebra = at(line, parse_structure_equations(tuple))?;
    let (nline, nr) = section.one("nilradical")?;
    let declared = parse_index_list(nline, nr)?;
    if declared != algebra.nilradical_indices() {
        return Err(Error::CatalogData(
            nline,
            format!(
                "declared nilradical {declared:?} but structure equations give {:?}",
                algebra.nilradical_indices()
            ),
        ));
    }
    Ok(algebra)
}

fn parse_actions(section: &Section, vars: &VarSet) -> Result<[ReferenceAction; 3]> {
    let mut out = Vec::with_capacity(3);
    for degree in 1..=3 {
        let (bline, btext) = section.one(&format!("basis-{degree}"))?;
        let basis: Vec<KForm<Rat>> = btext
            .split(',')
            .map(|part| at(bline, parse_kform(part.trim(), 6, degree)))
            .collect::<Result<_>>()?;
        let (mline, mtext) = section.one(&format!("action-{degree}"))?;
        let matrix = at(mline, parse_matrix_linear(mtext, vars))?;
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::CatalogData(
                mline,
                format!(
                    "action-{degree} is {}x{} but the basis has {} forms",
                    matrix.nrows(),
                    matrix.ncols(),
                    basis.len()
                ),
            ));
        }
        let unreliable = match section.opt(&format!("action-{degree}-unreliable")) {
            Some(text) => text
                .split_whitespace()
                .map(|w| {
                    let (r, c) = w.split_once(':').ok_or_else(|| {
                        Error::CatalogData(mline, format!("bad cell position `{w}`"))
                    })?;
                    Ok((
                        r.parse::<usize>()
                            .map_err(|_| Error::CatalogData(mline, format!("bad row `{r}`")))?,
                        c.parse::<usize>()
                            .map_err(|_| Error::CatalogData(mline, format!("bad col `{c}`")))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let basis_unreliable = match section.opt(&format!("basis-{degree}-unreliable")) {
            Some(text) => parse_index_list(bline, text)?,
            None => Vec::new(),
        };
        out.push(ReferenceAction {
            degree,
            basis,
            basis_unreliable,
            matrix,
            unreliable,
        });
    }
    Ok(out.try_into().expect("three degrees"))
}

fn parse_fixtures(text: &str) -> Result<Fixtures> {
    let sections = split_sections(text)?;
    let find = |name: &str| -> Result<&Section> {
        sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::CatalogData(0, format!("missing section `[{name}]`")))
    };

    let s_sec = find("s-example")?;
    let s_example = parse_example(s_sec)?;
    let mut s_brackets = Vec::new();
    for (line, value) in s_sec.all("bracket") {
        let mut parts = value.splitn(3, char::is_whitespace);
        let mut next = || {
            parts
                .next()
                .ok_or_else(|| Error::CatalogData(line, "expected `<i> <j> <one-form>`".into()))
        };
        let i: usize = next()?
            .parse()
            .map_err(|_| Error::CatalogData(line, "bad bracket index".into()))?;
        let j: usize = next()?
            .parse()
            .map_err(|_| Error::CatalogData(line, "bad bracket index".into()))?;
        let form = at(line, parse_kform(next()?.trim(), s_example.dim(), 1))?;
        s_brackets.push((i, j, form));
    }
    let (pline, ptext) = s_sec.one("primitive")?;
    let s_primitive = at(pline, parse_kform(ptext, s_example.dim(), 2))?;

    let h_sec = find("h-example")?;
    let h_example = parse_example(h_sec)?;
    let (cline, ctext) = h_sec.one("basis-change")?;
    let h_basis_change = at(cline, parse_matrix_quad(ctext))?;
    if h_basis_change.nrows() != 7 || h_basis_change.ncols() != 7 {
        return Err(Error::CatalogData(cline, "basis change must be 7x7".into()));
    }
    let mut h_new_differentials = Vec::with_capacity(7);
    for i in 1..=7 {
        let (dline, dtext) = h_sec.one(&format!("new-diff-{i}"))?;
        h_new_differentials.push(at(dline, parse_kform_quad(dtext, 7, 2))?);
    }
    let (pline, ptext) = h_sec.one("primitive")?;
    let h_primitive = at(pline, parse_kform(ptext, 7, 2))?;

    let vars = action_table_vars();
    let n1_actions = parse_actions(find("reference-actions-n1")?, &vars)?;
    let n2_actions = parse_actions(find("reference-actions-n2")?, &vars)?;

    Ok(Fixtures {
        s_example,
        s_brackets,
        s_primitive,
        h_example,
        h_basis_change,
        h_new_differentials,
        h_primitive,
        n1_actions,
        n2_actions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::render_structure_equations;
    use num_traits::Zero;
    use std::collections::BTreeSet;

    #[test]
    fn catalog_loads_thirty_four_validated_entries() {
        let entries = load_catalog().unwrap();
        assert_eq!(entries.len(), 34);
        for (i, e) in entries.iter().enumerate() {
            assert_eq!(e.id, i + 1);
            assert_eq!(e.algebra.dim(), 6);
            assert!(e.algebra.is_nilpotent());
            assert!(!e.note.is_empty(), "entry {} lacks a note", e.id);
        }
        assert_eq!(entries[0].tuple, "(0,0,e12,e13,e14+e23,e34-e25)");
        assert_eq!(entries[31].note, "admits (abelian)");
    }

    #[test]
    fn catalog_tuples_survive_a_render_parse_cycle() {
        for e in load_catalog().unwrap() {
            let rendered = render_structure_equations(&e.algebra);
            let back = parse_structure_equations(&rendered).unwrap();
            assert_eq!(back, e.algebra, "entry {}", e.id);
        }
    }

    #[test]
    fn catalog_parser_rejects_bad_lines() {
        let err = parse_catalog("1 (0,0,e12)\n").unwrap_err();
        assert!(matches!(err, Error::CatalogData(1, _)), "{err}");
        let err = parse_catalog("2 (0,0,0,0,0,e12) # late\n").unwrap_err();
        assert!(err.to_string().contains("sequential"), "{err}");
        let err = parse_catalog("1 (0,0,e12,e13,e24,0) # bad\n").unwrap_err();
        assert!(err.to_string().contains("Jacobi"), "{err}");
    }

    #[test]
    fn catalog_keys_resolve_to_entries() {
        let entries = load_catalog().unwrap();
        assert_eq!(resolve_entry(&entries, "worked").unwrap().id, 1);
        assert_eq!(resolve_entry(&entries, "abelian").unwrap().id, 32);
        assert_eq!(resolve_entry(&entries, "n1").unwrap().id, 33);
        assert_eq!(resolve_entry(&entries, "n2").unwrap().id, 34);
        assert_eq!(resolve_entry(&entries, "17").unwrap().id, 17);
        assert!(resolve_entry(&entries, "35").is_err());
        assert!(resolve_entry(&entries, "e12").is_err());
    }

    #[test]
    fn fixture_examples_parse_with_the_declared_nilradicals() {
        let fx = fixtures().unwrap();
        assert_eq!(fx.s_example.dim(), 7);
        assert_eq!(fx.s_example.nilradical_indices(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(fx.h_example.dim(), 7);
        assert_eq!(fx.h_example.nilradical_indices(), &[3, 4, 5, 6, 7]);
        assert_eq!(fx.h_new_differentials.len(), 7);
        assert!(fx.h_new_differentials[1].is_zero());
        assert!(fx.h_new_differentials[6].is_zero());
        assert_eq!(fx.s_primitive.num_terms(), 5);
        assert_eq!(fx.h_primitive.num_terms(), 3);
    }

    #[test]
    fn bracket_table_matches_the_parsed_structure_equations() {
        let fx = fixtures().unwrap();
        let la = &fx.s_example;
        let mut listed = BTreeSet::new();
        for (i, j, expect) in &fx.s_brackets {
            let v = la.bracket(&la.basis_vector(*i), &la.basis_vector(*j));
            assert_eq!(&KForm::one_form(&v), expect, "[e{i}, e{j}]");
            listed.insert((*i, *j));
        }
        assert_eq!(listed.len(), 11);
        for i in 1..=7 {
            for j in (i + 1)..=7 {
                if listed.contains(&(i, j)) {
                    continue;
                }
                let v = la.bracket(&la.basis_vector(i), &la.basis_vector(j));
                assert!(v.iter().all(Rat::is_zero), "[e{i}, e{j}] should vanish");
            }
        }
    }

    #[test]
    fn action_tables_have_the_printed_shapes_and_flags() {
        let fx = fixtures().unwrap();
        let sizes = [4, 8, 10];
        for (actions, name) in [(&fx.n1_actions, "n1"), (&fx.n2_actions, "n2")] {
            for (i, a) in actions.iter().enumerate() {
                assert_eq!(a.degree, i + 1);
                assert_eq!(a.basis.len(), sizes[i], "{name} degree {}", i + 1);
                assert_eq!(a.matrix.nrows(), sizes[i]);
                assert_eq!(a.matrix.ncols(), sizes[i]);
                for f in &a.basis {
                    assert_eq!(f.degree(), i + 1);
                }
            }
        }
        assert_eq!(fx.n1_actions[1].unreliable, vec![(2, 2)]);
        assert_eq!(fx.n2_actions[1].unreliable, vec![(3, 6), (4, 2)]);
        assert_eq!(fx.n2_actions[2].basis_unreliable, vec![5, 6, 7, 8, 9, 10]);
        assert!(fx.n1_actions[0].unreliable.is_empty());
    }

    #[test]
    fn degree_one_table_cells_read_back_as_polynomials() {
        let fx = fixtures().unwrap();
        let vars = action_table_vars();
        let a = |n: &str| Poly::var_named(&vars, n);
        let m = &fx.n1_actions[0].matrix;
        assert_eq!(m[(0, 0)], -a("a1"));
        assert_eq!(m[(0, 1)], -a("a3"));
        assert_eq!(m[(3, 3)], a("a1") + a("a4") + a("a5"));
        let m = &fx.n2_actions[0].matrix;
        assert_eq!(m[(0, 1)], a("a2"));
        assert_eq!(m[(2, 3)], a("a8"));
        assert_eq!(m[(3, 2)], -a("a8"));
    }
}
