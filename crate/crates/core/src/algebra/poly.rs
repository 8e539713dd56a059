//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::field::{Field, GaussianRational, Rational};
use crate::error::AlgebraError;

/// Exponent vector, ordered graded-lexicographically: higher total degree
/// first, ties broken lexicographically with the first variable largest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable names for curves in ℂ².
pub const COMPLEX_VARS: [&str; 2] = ["z1", "z2"];
/// Variable names for ℝ⁴ = ι(ℂ²).
pub const REAL4_VARS: [&str; 4] = ["x1", "y1", "x2", "y2"];
/// Variable names for the real plane.
pub const PLANE_VARS: [&str; 2] = ["x", "y"];

/// A polynomial in `nvars` variables. Zero coefficients are never stored,
/// so two equal polynomials have identical term maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    /// The coordinate function of variable `index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range");
        Self::monomial(nvars, Monomial::var(nvars, index), F::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { nvars, terms }
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, F)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(AlgebraError::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, exps: &[u32]) -> F {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Real and imaginary parts of the coefficients.
    pub fn split_re_im(&self) -> (MultiPoly<Rational>, MultiPoly<Rational>) {
        (self.map_coeffs(|c| c.re()), self.map_coeffs(|c| c.im()))
    }

    pub fn to_gaussian(&self) -> MultiPoly<GaussianRational> {
        self.map_coeffs(|c| GaussianRational::new(c.re(), c.im()))
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &[F]) -> Result<F, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let powers = power_table(point, |v| self.degree_in(v));
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable {var} out of range");
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c.clone() * F::from_i64(e as i64));
        }
        out
    }

    pub fn gradient_polys(&self) -> Vec<Self> {
        (0..self.nvars).map(|v| self.partial(v)).collect()
    }

    /// ∇p evaluated at `point`.
    pub fn gradient(&self, point: &[F]) -> Result<Vec<F>, AlgebraError> {
        (0..self.nvars)
            .map(|v| self.partial(v).eval(point))
            .collect()
    }

    /// Substitutes `subs[k]` for variable `k`. All substitutes must share a
    /// variable count, which becomes the variable count of the result.
    pub fn substitute(&self, subs: &[MultiPoly<F>]) -> Result<MultiPoly<F>, AlgebraError> {
        if subs.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let out_vars = subs.first().map_or(0, |s| s.nvars);
        if let Some(bad) = subs.iter().find(|s| s.nvars != out_vars) {
            return Err(AlgebraError::DimensionMismatch {
                expected: out_vars,
                got: bad.nvars,
            });
        }
        let powers: Vec<Vec<MultiPoly<F>>> = (0..self.nvars)
            .map(|v| {
                let top = self.degree_in(v) as usize;
                let mut row = vec![MultiPoly::one(out_vars)];
                for k in 1..=top {
                    let next = &row[k - 1] * &subs[v];
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = MultiPoly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(out_vars, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[v][e as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Reinterprets the polynomial in `new_nvars` variables, sending
    /// variable `k` to `map[k]`.
    pub fn remap_vars(&self, new_nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_nvars];
            for (k, &x) in m.0.iter().enumerate() {
                e[map[k]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`. The
    /// coefficients keep the full variable set with `var` absent.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0) as usize;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm)?;
            let qc = rc.clone() * &lc_inv;
            let t = Self::monomial(self.nvars, qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Divides out the content (over ℚ) or the leading coefficient (over
    /// ℚ(i)) so that polynomials equal up to a nonzero scalar coincide.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs: Vec<&F> = self.terms.values().rev().collect();
        let unit = F::normalizing_unit(&coeffs);
        let inv = unit.inv().expect("nonzero normalizing unit");
        self.scale(&inv)
    }

    /// Dense coefficient vector of a polynomial in which at most one
    /// variable occurs; entry `k` multiplies the `k`-th power.
    pub fn to_dense_univariate(&self) -> Result<Vec<F>, AlgebraError> {
        let used: Vec<usize> = (0..self.nvars)
            .filter(|&v| self.degree_in(v) > 0)
            .collect();
        match used.as_slice() {
            [] => Ok(vec![self.constant_term()]),
            [v] => {
                let mut out = vec![F::zero(); self.degree_in(*v) as usize + 1];
                for (m, c) in &self.terms {
                    out[m.0[*v] as usize] = c.clone();
                }
                Ok(out)
            }
            _ => Err(AlgebraError::NotUnivariate),
        }
    }

    pub fn from_dense_univariate(coeffs: &[F]) -> Self {
        let mut p = Self::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial(vec![k as u32]), c.clone());
        }
        p
    }

    /// Human-readable form using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> PolyDisplay<'a, F> {
        PolyDisplay { poly: self, names }
    }

    /// Parses expressions such as `z2 - (1+2i)*z1^2 + 3/4`.
    pub fn parse(src: &str, names: &[&str]) -> Result<Self, AlgebraError> {
        let mut parser = Parser {
            tokens: tokenize(src)?,
            pos: 0,
            names,
        };
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(AlgebraError::Parse(format!(
                "unexpected token {:?}",
                parser.tokens[parser.pos]
            )));
        }
        Ok(p)
    }
}

fn power_table<F: Field>(point: &[F], top: impl Fn(usize) -> u32) -> Vec<Vec<F>> {
    point
        .iter()
        .enumerate()
        .map(|(v, x)| {
            let d = top(v) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(F::one());
            for k in 1..=d {
                let next = row[k - 1].clone() * x;
                row.push(next);
            }
            row
        })
        .collect()
}

impl<'a, F: Field> Add<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: &'a MultiPoly<F>) -> MultiPoly<F> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, F: Field> Sub<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: &'a MultiPoly<F>) -> MultiPoly<F> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, F: Field> Mul<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: &'a MultiPoly<F>) -> MultiPoly<F> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb);
            }
        }
        out
    }
}

impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> Add for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        -&self
    }
}

pub struct PolyDisplay<'a, F> {
    poly: &'a MultiPoly<F>,
    names: &'a [&'a str],
}

impl<F: Field> fmt::Display for PolyDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_real() && c.re().signum() < 0 {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if mag != F::one() || m.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                let name = self.names.get(v).copied().unwrap_or("?");
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|k| format!("v{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.display_with(&refs))
    }
}

#[derive(Serialize)]
struct TermOut<'a, F> {
    exp: &'a [u32],
    coef: &'a F,
}

impl<F: Field> Serialize for MultiPoly<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<TermOut<'_, F>> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermOut { exp: &m.0, coef: c })
            .collect();
        let mut s = serializer.serialize_struct("MultiPoly", 3)?;
        s.serialize_field("field", F::TAG)?;
        s.serialize_field("vars", &self.nvars)?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

#[derive(Deserialize)]
struct PolyIn {
    #[serde(default)]
    field: Option<String>,
    vars: usize,
    terms: Vec<TermIn>,
}

#[derive(Deserialize)]
struct TermIn {
    exp: Vec<u32>,
    coef: Value,
}

/// Reads a coefficient written either as a `"num/den"` string or as a
/// `{"re": .., "im": ..}` object.
pub(crate) fn coefficient_from_json(v: &Value) -> Result<GaussianRational, String> {
    match v {
        Value::String(s) => s
            .parse::<Rational>()
            .map(GaussianRational::from)
            .map_err(|e| e.to_string()),
        Value::Number(n) => n
            .as_i64()
            .map(|k| GaussianRational::from(Rational::from(k)))
            .ok_or_else(|| format!("non-integer numeric coefficient {n}")),
        Value::Object(_) => {
            serde_json::from_value::<GaussianRational>(v.clone()).map_err(|e| e.to_string())
        }
        other => Err(format!("invalid coefficient {other}")),
    }
}

impl<'de, F: Field> Deserialize<'de> for MultiPoly<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolyIn::deserialize(deserializer)?;
        if let Some(tag) = &raw.field {
            if tag != "Q" && tag != "Q(i)" {
                return Err(D::Error::custom(format!("unknown field {tag:?}")));
            }
            if tag == "Q(i)" && F::TAG == "Q" {
                return Err(D::Error::custom("expected a polynomial over Q, found Q(i)"));
            }
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let z = coefficient_from_json(&t.coef).map_err(D::Error::custom)?;
            let c = F::from_gaussian(z)
                .ok_or_else(|| D::Error::custom("non-real coefficient in a polynomial over Q"))?;
            terms.push((t.exp, c));
        }
        MultiPoly::from_terms(raw.vars, terms).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>, AlgebraError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            out.push(Token::Num(text.parse()?));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Token::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Token::Op(ch));
            k += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<F: Field>(&mut self) -> Result<MultiPoly<F>, AlgebraError> {
        let mut acc = if self.eat('-') {
            -self.term::<F>()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::Op('('))
        )
    }

    fn term<F: Field>(&mut self) -> Result<MultiPoly<F>, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power::<F>()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(AlgebraError::Parse(
                        "division only by nonzero constants".into(),
                    ));
                }
                let inv = d.constant_term().inv().ok_or(AlgebraError::DivisionByZero)?;
                acc = acc.scale(&inv);
            } else if self.starts_factor() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power<F: Field>(&mut self) -> Result<MultiPoly<F>, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n
                        .to_string()
                        .parse()
                        .map_err(|_| AlgebraError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(AlgebraError::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom<F: Field>(&mut self) -> Result<MultiPoly<F>, AlgebraError> {
        let nvars = self.names.len();
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(nvars, F::from_rational(n)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if let Some(v) = self.names.iter().position(|n| *n == name) {
                    Ok(MultiPoly::var(nvars, v))
                } else if name == "i" {
                    let unit = F::from_gaussian(GaussianRational::i()).ok_or_else(|| {
                        AlgebraError::Parse("imaginary unit in a real polynomial".into())
                    })?;
                    Ok(MultiPoly::constant(nvars, unit))
                } else {
                    Err(AlgebraError::Parse(format!("unknown variable {name:?}")))
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(AlgebraError::Parse("missing ')'".into()));
                }
                Ok(inner)
            }
            other => Err(AlgebraError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
