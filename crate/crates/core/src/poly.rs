//! Sparse homogeneous polynomials in `X0..Xn` over an exact field.
//!
//! Monomials are ordered graded reverse-lexicographically with `X0 > X1 > .. > Xn`.
//! Text form:
//!
//! ```text
//! poly   := term (("+" | "-") term)*        leading "-" allowed
//! term   := coeff | [coeff "*"] factor ("*" factor)*
//! factor := "X" nat ["^" nat]
//! coeff  := nat
//! ```

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector of length `nvars`. `Ord` is graded reverse-lex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The variable `X_k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Smaller exponent in the last differing variable wins.
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "X{k}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `d` in `nvars` variables, largest first in grevlex.
/// Empty for `d < 0`.
pub fn monomials_of_degree(nvars: usize, d: i64) -> Vec<Monomial> {
    if d < 0 || nvars == 0 {
        return if d == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
    }
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(nvars), d as u32, nvars, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Sparse polynomial; no stored zero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.field.spec() == other.field.spec() && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        Self::term(field, Monomial::one(nvars), c)
    }

    pub fn term(field: F, mono: Monomial, c: F::Elem) -> Self {
        let nvars = mono.nvars();
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(mono, c);
        p
    }

    /// Parses the text grammar described in the module docs.
    pub fn parse(text: &str, nvars: usize, field: F) -> Result<Self> {
        Parser { src: text.as_bytes(), pos: 0, nvars, field }.poly()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, mono: Monomial, c: F::Elem) {
        debug_assert_eq!(mono.nvars(), self.nvars);
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v = self.field.add(v, &c);
                if self.field.is_zero(v) {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    /// Common degree of all terms; `None` for the zero polynomial or an inhomogeneous one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Formal derivative with respect to `X_k`.
    pub fn partial_derivative(&self, k: usize) -> Result<Self> {
        if k >= self.nvars {
            return Err(Error::IndexOutOfRange { index: k, bound: self.nvars });
        }
        let mut out = Polynomial::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[k] -= 1;
            out.add_term(Monomial(exps), self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::FieldMismatch { left: self.field.spec(), right: other.field.spec() });
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.field.clone(), self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Polynomial::zero(self.field.clone(), self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), self.field.mul(v, c));
        }
        out
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    /// Largest monomial first; `F_p` coefficients print as balanced residues.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, magnitude) = match self.field.to_integer(c) {
                Some(v) => (v.is_negative(), v.abs().to_string()),
                None => {
                    let s = self.field.render(c);
                    match s.strip_prefix('-') {
                        Some(rest) => (true, rest.to_string()),
                        None => (false, s),
                    }
                }
            };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.degree() == 0;
            if is_const {
                f.write_str(&magnitude)?;
            } else if magnitude == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a, F: Field> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    field: F,
}

impl<F: Field> Parser<'_, F> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'/') | Some(b'e') | Some(b'E')) {
            return Err(Error::NonIntegerCoefficient { pos: start });
        }
        Ok(BigInt::parse_bytes(&self.src[start..self.pos], 10).expect("digits parse"))
    }

    fn small_nat(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let v = self.nat()?;
        u32::try_from(&v).map_err(|_| Error::Syntax { pos: start, msg: alloc::format!("{what} too large") })
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        if self.peek() != Some(b'X') {
            return self.err("expected a variable X<k>");
        }
        self.pos += 1;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err("expected a variable index after X");
        }
        let index = self.small_nat("variable index")? as usize;
        if index >= self.nvars {
            return Err(Error::VariableOutOfRange { index, nvars: self.nvars });
        }
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            e = self.small_nat("exponent")?;
        }
        exps[index] += e;
        Ok(())
    }

    fn term(&mut self) -> Result<(BigInt, Monomial)> {
        let mut exps = vec![0u32; self.nvars];
        let mut coeff = BigInt::one();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = self.nat()?;
                if self.peek() != Some(b'*') {
                    return Ok((coeff, Monomial(exps)));
                }
                self.pos += 1;
                self.factor(&mut exps)?;
            }
            Some(b'X') => self.factor(&mut exps)?,
            Some(b'.') => return Err(Error::NonIntegerCoefficient { pos: self.pos }),
            _ => return self.err("expected a term"),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        Ok((coeff, Monomial(exps)))
    }

    fn poly(&mut self) -> Result<Polynomial<F>> {
        let mut out = Polynomial::zero(self.field.clone(), self.nvars);
        let mut sign = Sign::Plus;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = Sign::Minus;
        }
        loop {
            let (c, m) = self.term()?;
            let c = if sign == Sign::Minus { -c } else { c };
            out.add_term(m, self.field.from_bigint(&c));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = Sign::Plus,
                Some(b'-') => sign = Sign::Minus,
                Some(b'.') | Some(b'/') => return Err(Error::NonIntegerCoefficient { pos: self.pos }),
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
    }
}
