//! Text notation for structure tuples, k-forms, matrices and scalars.
//!
//! The tuple grammar is
//!
//! ```text
//! tuple ::= '(' entry (',' entry)* ')'
//! entry ::= '0' | ['-'] term (('+' | '-') term)*
//! term  ::= [rational] 'e' index+
//! ```
//!
//! with optional `^{..}` braces and whitespace tolerated, so typeset inputs
//! such as `e^{12}` and `9/2 e37` parse as written. Indices are single
//! digits; `e127` denotes e1∧e2∧e7. Renderers emit a canonical compact form
//! with terms in multi-index order; parse∘render is the identity on the
//! underlying structure tensor, not on the input text.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exterior::{KForm, MIdx};
use crate::liealg::LieAlgebra;
use crate::ring::{Matrix, Poly, Quad, Rat, Scalar, VarSet};
use crate::Result;

/// Byte scanner with line/column tracking; inputs are ASCII by construction.
struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Scanner<'a> {
        Scanner { src: text.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn eat(&mut self, want: u8) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(b) if b == want => {
                self.bump();
                Ok(())
            }
            Some(b) => self.err(format!("expected `{}`, found `{}`", want as char, b as char)),
            None => self.err(format!("expected `{}`, found end of input", want as char)),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(b) => self.err(format!("unexpected trailing `{}`", b as char)),
        }
    }

    fn scan_digits(&mut self) -> Result<String> {
        let mut s = String::new();
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            s.push(self.bump().unwrap() as char);
        }
        if s.is_empty() {
            return self.err("expected a digit");
        }
        Ok(s)
    }

    /// `[-] digits [/ digits]`, with whitespace allowed around `/`.
    fn scan_rational(&mut self) -> Result<Rat> {
        self.skip_ws();
        let negative = if self.peek() == Some(b'-') {
            self.bump();
            self.skip_ws();
            true
        } else {
            false
        };
        let num_digits = self.scan_digits()?;
        let mut num = BigInt::from_str(&num_digits).expect("digit string parses");
        let save = (self.pos, self.line, self.col);
        self.skip_ws();
        let den = if self.peek() == Some(b'/') {
            self.bump();
            self.skip_ws();
            let den_digits = self.scan_digits()?;
            let den = BigInt::from_str(&den_digits).expect("digit string parses");
            if den.is_zero() {
                return self.err("zero denominator");
            }
            den
        } else {
            (self.pos, self.line, self.col) = save;
            BigInt::from(1)
        };
        if negative {
            num = -num;
        }
        Ok(Rat::new(num, den))
    }

    /// `'e' ['^'] ['{'] digit+ ['}']`; returns the 1-based indices in input order.
    fn scan_indices(&mut self, dim: usize) -> Result<Vec<usize>> {
        if self.peek() != Some(b'e') {
            return self.err("expected basis symbol `e`");
        }
        self.bump();
        if self.peek() == Some(b'^') {
            self.bump();
        }
        let braced = self.peek() == Some(b'{');
        if braced {
            self.bump();
        }
        let mut indices = Vec::new();
        while let Some(b @ b'0'..=b'9') = self.peek() {
            let idx = (b - b'0') as usize;
            if idx == 0 || idx > dim {
                return self.err(format!("index {} out of range 1..{}", idx, dim));
            }
            if indices.contains(&idx) {
                return self.err(format!("repeated index {}", idx));
            }
            self.bump();
            indices.push(idx);
        }
        if indices.is_empty() {
            return self.err("expected at least one index digit");
        }
        if braced {
            if self.peek() != Some(b'}') {
                return self.err("unclosed `{` in index group");
            }
            self.bump();
        }
        Ok(indices)
    }

    /// One signed-sum entry of k-form terms; `0` denotes the zero form.
    fn scan_kform(&mut self, dim: usize, degree: usize) -> Result<KForm<Rat>> {
        self.skip_ws();
        let mut form = KForm::zero(degree);
        if self.peek() == Some(b'0') {
            let save = (self.pos, self.line, self.col);
            self.bump();
            self.skip_ws();
            if matches!(self.peek(), None | Some(b',' | b')' | b']')) {
                return Ok(form);
            }
            (self.pos, self.line, self.col) = save;
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some(b'-') => {
                    self.bump();
                    -1
                }
                Some(b'+') if !first => {
                    self.bump();
                    1
                }
                Some(b'+') => return self.err("leading `+` is not allowed"),
                _ if first => 1,
                _ => break,
            };
            self.skip_ws();
            let coeff = if matches!(self.peek(), Some(b'0'..=b'9')) {
                self.scan_rational()?
            } else {
                Rat::from_integer(BigInt::from(1))
            };
            self.skip_ws();
            let indices = self.scan_indices(dim)?;
            if indices.len() != degree {
                return self.err(format!(
                    "term has {} indices where a {}-form is required",
                    indices.len(),
                    degree
                ));
            }
            let mut sorted = indices.clone();
            sorted.sort_unstable();
            // Count the inversions of the written order so e21 means -e12.
            let mut inversions = 0;
            for i in 0..indices.len() {
                for j in (i + 1)..indices.len() {
                    if indices[i] > indices[j] {
                        inversions += 1;
                    }
                }
            }
            let orient = if inversions % 2 == 0 { 1 } else { -1 };
            let signed = coeff * Rat::from_integer(BigInt::from(sign * orient));
            form.add_term(MIdx::from_indices(&sorted), signed);
            first = false;
            self.skip_ws();
            if !matches!(self.peek(), Some(b'+' | b'-')) {
                break;
            }
        }
        Ok(form)
    }
}

/// Parses a rational scalar such as `-23/7`; the full text must be consumed.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let mut s = Scanner::new(text);
    let r = s.scan_rational()?;
    s.expect_end()?;
    Ok(r)
}

/// Parses a k-form of the given degree over indices 1..=dim.
pub fn parse_kform(text: &str, dim: usize, degree: usize) -> Result<KForm<Rat>> {
    let mut s = Scanner::new(text);
    let form = s.scan_kform(dim, degree)?;
    s.expect_end()?;
    Ok(form)
}

/// Parses a structure tuple into the list of differentials `de^1..de^n`,
/// where n is the number of entries.
pub fn parse_tuple(text: &str) -> Result<Vec<KForm<Rat>>> {
    // The dimension equals the entry count, needed up front to range-check
    // indices; commas only occur as entry separators in this grammar.
    let dim = text.bytes().filter(|&b| b == b',').count() + 1;
    if !(2..=9).contains(&dim) {
        let mut s = Scanner::new(text);
        s.skip_ws();
        return s.err(format!("tuple has {} entries; expected 2..=9", dim));
    }
    let mut s = Scanner::new(text);
    s.eat(b'(')?;
    let mut diffs = Vec::with_capacity(dim);
    loop {
        diffs.push(s.scan_kform(dim, 2)?);
        s.skip_ws();
        match s.peek() {
            Some(b',') => {
                s.bump();
            }
            Some(b')') => {
                s.bump();
                break;
            }
            Some(b) => return s.err(format!("expected `,` or `)`, found `{}`", b as char)),
            None => return s.err("unterminated tuple"),
        }
    }
    s.expect_end()?;
    assert_eq!(diffs.len(), dim, "entry count matches the comma scan");
    Ok(diffs)
}

/// Parses a structure tuple and builds the Lie algebra, designating as
/// nilpotent ideal the largest basis-index subset that validates as one
/// (ties broken lexicographically). Nilpotent algebras get the full index
/// set; for the solvable fixtures in range the detected subset matches the
/// actual nilradical.
pub fn parse_structure_equations(text: &str) -> Result<LieAlgebra> {
    let diffs = parse_tuple(text)?;
    let dim = diffs.len();
    // Jacobi failures are real input errors; report them from the full-set
    // attempt instead of swallowing them during the subset search.
    if let Err(e @ Error::Jacobi(..)) = LieAlgebra::from_differentials(diffs.clone(), (1..=dim).collect()) {
        return Err(e);
    }
    let mut subsets: Vec<Vec<usize>> = (0..1u32 << dim)
        .map(|mask| (1..=dim).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    for cand in subsets {
        match LieAlgebra::from_differentials(diffs.clone(), cand) {
            Ok(la) => return Ok(la),
            Err(Error::NotIdeal(..)) | Err(Error::NotNilpotent) => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("the empty subset always validates")
}

fn parse_matrix_with<S: Scalar>(
    text: &str,
    mut cell: impl FnMut(&mut Scanner) -> Result<S>,
) -> Result<Matrix<S>> {
    let mut s = Scanner::new(text);
    s.eat(b'[')?;
    let mut rows: Vec<Vec<S>> = Vec::new();
    loop {
        s.eat(b'[')?;
        let mut row = Vec::new();
        loop {
            s.skip_ws();
            row.push(cell(&mut s)?);
            s.skip_ws();
            match s.peek() {
                Some(b',') => {
                    s.bump();
                }
                Some(b']') => {
                    s.bump();
                    break;
                }
                Some(b) => return s.err(format!("expected `,` or `]`, found `{}`", b as char)),
                None => return s.err("unterminated row"),
            }
        }
        if let Some(prev) = rows.last() {
            if prev.len() != row.len() {
                return s.err(format!("row has {} entries; previous rows have {}", row.len(), prev.len()));
            }
        }
        rows.push(row);
        s.skip_ws();
        match s.peek() {
            Some(b',') => {
                s.bump();
            }
            Some(b']') => {
                s.bump();
                break;
            }
            Some(b) => return s.err(format!("expected `,` or `]`, found `{}`", b as char)),
            None => return s.err("unterminated matrix"),
        }
    }
    s.expect_end()?;
    Ok(Matrix::from_rows(rows))
}

/// Parses a rational matrix literal such as `[[1,0],[-1/2,3]]`.
pub fn parse_matrix_rat(text: &str) -> Result<Matrix<Rat>> {
    parse_matrix_with(text, |s| s.scan_rational())
}

fn scan_quad(s: &mut Scanner) -> Result<Quad> {
    // sum of terms, each `rational`, `s3`, or `rational '*' s3`
    let mut total = Quad::zero();
    let mut first = true;
    loop {
        s.skip_ws();
        let sign = match s.peek() {
            Some(b'-') => {
                s.bump();
                -1
            }
            Some(b'+') if !first => {
                s.bump();
                1
            }
            _ if first => 1,
            _ => break,
        };
        s.skip_ws();
        let term = if s.peek() == Some(b's') {
            s.bump();
            if s.peek() != Some(b'3') {
                return s.err("expected `s3`");
            }
            s.bump();
            Quad::sqrt3()
        } else {
            let r = s.scan_rational()?;
            if s.peek() == Some(b'*') {
                s.bump();
                s.skip_ws();
                if s.bump() != Some(b's') || s.bump() != Some(b'3') {
                    return s.err("expected `s3` after `*`");
                }
                Quad::new(Rat::zero(), r)
            } else {
                Quad::from_rat(&r)
            }
        };
        let term = if sign < 0 { -term } else { term };
        total = total + term;
        first = false;
        s.skip_ws();
        if !matches!(s.peek(), Some(b'+' | b'-')) {
            break;
        }
    }
    if first {
        return s.err("expected a scalar");
    }
    Ok(total)
}

/// Parses a scalar over ℚ(√3), e.g. `1/12*s3` or `2-s3`.
pub fn parse_quad(text: &str) -> Result<Quad> {
    let mut s = Scanner::new(text);
    let q = scan_quad(&mut s)?;
    s.expect_end()?;
    Ok(q)
}

/// Parses a matrix literal with ℚ(√3) entries.
pub fn parse_matrix_quad(text: &str) -> Result<Matrix<Quad>> {
    parse_matrix_with(text, scan_quad)
}

/// Parses a k-form whose coefficients live in ℚ(√3), written like
/// `-e37+2*s3e14-s3e23+6e25`.
pub fn parse_kform_quad(text: &str, dim: usize, degree: usize) -> Result<KForm<Quad>> {
    let mut s = Scanner::new(text);
    s.skip_ws();
    let mut form = KForm::zero(degree);
    if s.peek() == Some(b'0') {
        s.bump();
        s.expect_end()?;
        return Ok(form);
    }
    let mut first = true;
    loop {
        s.skip_ws();
        let sign = match s.peek() {
            Some(b'-') => {
                s.bump();
                -1
            }
            Some(b'+') if !first => {
                s.bump();
                1
            }
            _ if first => 1,
            _ => break,
        };
        s.skip_ws();
        let coeff = if s.peek() == Some(b'e') {
            Quad::one()
        } else if s.peek() == Some(b's') {
            s.bump();
            if s.bump() != Some(b'3') {
                return s.err("expected `s3`");
            }
            Quad::sqrt3()
        } else {
            let r = s.scan_rational()?;
            if s.peek() == Some(b'*') {
                s.bump();
                if s.bump() != Some(b's') || s.bump() != Some(b'3') {
                    return s.err("expected `s3` after `*`");
                }
                Quad::new(Rat::zero(), r)
            } else {
                Quad::from_rat(&r)
            }
        };
        s.skip_ws();
        let indices = s.scan_indices(dim)?;
        if indices.len() != degree {
            return s.err(format!("term has {} indices where a {}-form is required", indices.len(), degree));
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        let mut inversions = 0;
        for i in 0..indices.len() {
            for j in (i + 1)..indices.len() {
                if indices[i] > indices[j] {
                    inversions += 1;
                }
            }
        }
        let flip = (sign < 0) ^ (inversions % 2 == 1);
        let signed = if flip { -coeff } else { coeff };
        form.add_term(MIdx::from_indices(&sorted), signed);
        first = false;
        s.skip_ws();
        if !matches!(s.peek(), Some(b'+' | b'-')) {
            break;
        }
    }
    s.expect_end()?;
    Ok(form)
}

/// Parses a matrix whose cells are affine expressions in the named
/// parameters, e.g. `[[-a1-a5,-a7],[0,2*a1]]` over `a1..a16`.
pub fn parse_matrix_linear(text: &str, vars: &VarSet) -> Result<Matrix<Poly>> {
    parse_matrix_with(text, |s| scan_linear_poly(s, vars))
}

fn scan_linear_poly(s: &mut Scanner, vars: &VarSet) -> Result<Poly> {
    let mut total = Poly::constant(Rat::zero());
    let mut first = true;
    loop {
        s.skip_ws();
        let sign = match s.peek() {
            Some(b'-') => {
                s.bump();
                -1
            }
            Some(b'+') if !first => {
                s.bump();
                1
            }
            _ if first => 1,
            _ => break,
        };
        s.skip_ws();
        let coeff = if matches!(s.peek(), Some(b'0'..=b'9')) {
            let r = s.scan_rational()?;
            if s.peek() == Some(b'*') {
                s.bump();
            }
            r
        } else {
            Rat::from_integer(BigInt::from(1))
        };
        s.skip_ws();
        let term = if matches!(s.peek(), Some(b) if b.is_ascii_alphabetic()) {
            let mut name = String::new();
            name.push(s.bump().unwrap() as char);
            while matches!(s.peek(), Some(b'0'..=b'9')) {
                name.push(s.bump().unwrap() as char);
            }
            match vars.index(&name) {
                Some(idx) => Poly::var(vars, idx).scale(&coeff),
                None => return s.err(format!("unknown parameter `{}`", name)),
            }
        } else {
            Poly::constant(coeff)
        };
        total = if sign < 0 { total - term } else { total + term };
        first = false;
        s.skip_ws();
        if !matches!(s.peek(), Some(b'+' | b'-')) {
            break;
        }
    }
    if first {
        return s.err("expected an expression");
    }
    Ok(total)
}

/// Renders a rational-coefficient k-form in compact canonical text: terms in
/// multi-index order, unit coefficients elided, no interior whitespace.
pub fn render_kform_compact(form: &KForm<Rat>) -> String {
    if form.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (mask, coeff) in form.terms() {
        let negative = coeff.is_negative();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        let abs = coeff.abs();
        if abs != Rat::from_integer(BigInt::from(1)) {
            out.push_str(&abs.to_string());
        }
        out.push('e');
        for idx in mask.indices() {
            out.push_str(&idx.to_string());
        }
    }
    out
}

/// Renders the differentials of an algebra as a canonical structure tuple.
pub fn render_structure_equations(la: &LieAlgebra) -> String {
    let entries: Vec<String> = la.differentials().iter().map(render_kform_compact).collect();
    format!("({})", entries.join(","))
}

/// Renders a matrix as a bracketed literal with `Display`-formatted cells.
pub fn render_matrix<S: Scalar>(m: &Matrix<S>) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|r| {
            let cells: Vec<String> = (0..m.ncols()).map(|c| m[(r, c)].to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}
