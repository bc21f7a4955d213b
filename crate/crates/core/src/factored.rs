//! Rational maps in the factored family
//! `λ · ∏ z_j^{a_j} · ∏ (z_j − 1)^{b_j} · ∏ (z_i − z_j)^{c_ij}`.
//!
//! Every coordinate of an automorphism of `Ω_k`, and every cross-ratio map
//! `Ω_k → Ω_3`, lives in this family. Factors `z_i − z_j` are always stored
//! with `i < j`, the orientation sign being folded into `λ`, so two maps are
//! equal as functions exactly when their stored forms are equal.
//!
//! Textual form (whitespace-free):
//!
//! ```text
//! map  := coef ("*" term)*
//! coef := "1" | "-1" | rational
//! term := atom "^" int | atom
//! atom := "z" idx | "(z" idx "-1)" | "(z" idx "-z" idx ")"
//! ```
//!
//! e.g. `-1*(z2-1)^-1` is `1/(1 − z_2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::projective::{parse_rational, sample_omega_point, OmegaPoint, ProjPoint, Rational};
use crate::quadratic::Scalar;

/// Sample height used by [`FactoredMap::equal_randomized`] by default.
pub const RANDOMIZED_HEIGHT: u64 = 1000;
/// Number of trials used by [`FactoredMap::equal_randomized`] by default.
pub const RANDOMIZED_TRIALS: usize = 8;

/// One of the hyperplane equations `z_j`, `z_j − 1`, `z_i − z_j` (`i < j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinearFactor {
    Var(usize),
    VarMinusOne(usize),
    VarDiff(usize, usize),
}

impl LinearFactor {
    fn max_index(&self) -> usize {
        match *self {
            LinearFactor::Var(j) | LinearFactor::VarMinusOne(j) => j,
            LinearFactor::VarDiff(_, j) => j,
        }
    }

    fn eval<S: Scalar>(&self, values: &[S]) -> S {
        match *self {
            LinearFactor::Var(j) => values[j - 1].clone(),
            LinearFactor::VarMinusOne(j) => values[j - 1].sub(&S::from_rational(&Rational::one())),
            LinearFactor::VarDiff(i, j) => values[i - 1].sub(&values[j - 1]),
        }
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LinearFactor::Var(j) => write!(f, "z{j}"),
            LinearFactor::VarMinusOne(j) => write!(f, "(z{j}-1)"),
            LinearFactor::VarDiff(i, j) => write!(f, "(z{i}-z{j})"),
        }
    }
}

/// A rational map on `Ω_k` in canonical factored form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactoredMap {
    ambient_k: usize,
    lambda: Rational,
    factors: BTreeMap<LinearFactor, i32>,
}

impl FactoredMap {
    /// The constant map `λ`.
    pub fn constant(ambient_k: usize, lambda: Rational) -> Result<Self> {
        check_ambient(ambient_k)?;
        if lambda.is_zero() {
            return Err(Error::InvalidParameter("λ must be nonzero".into()));
        }
        Ok(FactoredMap {
            ambient_k,
            lambda,
            factors: BTreeMap::new(),
        })
    }

    pub fn one(ambient_k: usize) -> Result<Self> {
        Self::constant(ambient_k, Rational::one())
    }

    /// `z_j`.
    pub fn var(ambient_k: usize, j: usize) -> Result<Self> {
        Self::single(ambient_k, Rational::one(), LinearFactor::Var(j))
    }

    /// `z_j − 1`.
    pub fn var_minus_one(ambient_k: usize, j: usize) -> Result<Self> {
        Self::single(ambient_k, Rational::one(), LinearFactor::VarMinusOne(j))
    }

    /// `z_i − z_j` for any `i ≠ j`; for `i > j` this is stored as `−(z_j − z_i)`.
    pub fn var_diff(ambient_k: usize, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::IdenticalPoints);
        }
        if i < j {
            Self::single(ambient_k, Rational::one(), LinearFactor::VarDiff(i, j))
        } else {
            Self::single(ambient_k, -Rational::one(), LinearFactor::VarDiff(j, i))
        }
    }

    fn single(ambient_k: usize, lambda: Rational, factor: LinearFactor) -> Result<Self> {
        check_ambient(ambient_k)?;
        check_factor(ambient_k, &factor)?;
        let mut factors = BTreeMap::new();
        factors.insert(factor, 1);
        Ok(FactoredMap {
            ambient_k,
            lambda,
            factors,
        })
    }

    /// Builds a map from raw parts, validating indices and dropping zero exponents.
    pub fn from_parts(
        ambient_k: usize,
        lambda: Rational,
        factors: impl IntoIterator<Item = (LinearFactor, i32)>,
    ) -> Result<Self> {
        let mut map = Self::constant(ambient_k, lambda)?;
        for (factor, exp) in factors {
            check_factor(ambient_k, &factor)?;
            map.bump(factor, exp);
        }
        Ok(map)
    }

    pub fn ambient_k(&self) -> usize {
        self.ambient_k
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// Factors with their (nonzero) exponents, in canonical order.
    pub fn factors(&self) -> impl Iterator<Item = (&LinearFactor, &i32)> {
        self.factors.iter()
    }

    pub fn exponent(&self, factor: &LinearFactor) -> i32 {
        self.factors.get(factor).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    fn bump(&mut self, factor: LinearFactor, by: i32) {
        let e = self.factors.entry(factor).or_insert(0);
        *e += by;
        if *e == 0 {
            self.factors.remove(&factor);
        }
    }

    fn check_same_ambient(&self, other: &FactoredMap) -> Result<()> {
        if self.ambient_k != other.ambient_k {
            return Err(Error::AmbientMismatch {
                left: self.ambient_k,
                right: other.ambient_k,
            });
        }
        Ok(())
    }

    /// Product of two maps on the same `Ω_k`.
    pub fn multiply(&self, other: &FactoredMap) -> Result<FactoredMap> {
        self.check_same_ambient(other)?;
        let mut out = self.clone();
        out.lambda = &self.lambda * &other.lambda;
        for (f, e) in &other.factors {
            out.bump(*f, *e);
        }
        Ok(out)
    }

    /// Multiplicative inverse.
    pub fn invert(&self) -> FactoredMap {
        FactoredMap {
            ambient_k: self.ambient_k,
            lambda: self.lambda.recip(),
            factors: self.factors.iter().map(|(f, e)| (*f, -e)).collect(),
        }
    }

    /// Structural equality of canonical forms, which coincides with equality of functions.
    pub fn equal(&self, other: &FactoredMap) -> Result<bool> {
        self.check_same_ambient(other)?;
        Ok(self == other)
    }

    /// Compares the two maps at `trials` sampled points of `Ω_k`.
    pub fn equal_randomized(&self, other: &FactoredMap, trials: usize, seed: u64) -> Result<bool> {
        self.check_same_ambient(other)?;
        for t in 0..trials {
            let z = sample_omega_point(
                self.ambient_k,
                seed.wrapping_add(t as u64),
                RANDOMIZED_HEIGHT,
            )?;
            if self.evaluate(&z)? != other.evaluate(&z)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Evaluates over any scalar field. Returns `None` when a factor with a
    /// negative exponent vanishes (the value is `∞`).
    pub fn eval_with<S: Scalar>(&self, values: &[S]) -> Result<Option<S>> {
        let expected = self.ambient_k - 2;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        let mut num = S::from_rational(&self.lambda);
        let mut den = S::from_rational(&Rational::one());
        for (f, e) in &self.factors {
            let v = f.eval(values);
            let target = if *e > 0 { &mut num } else { &mut den };
            for _ in 0..e.unsigned_abs() {
                *target = target.mul(&v);
            }
        }
        Ok(den.inv().map(|d| num.mul(&d)))
    }

    /// Exact value at a point of `Ω_k`.
    pub fn evaluate(&self, z: &OmegaPoint) -> Result<ProjPoint> {
        Ok(match self.eval_with(z.coords())? {
            Some(v) => ProjPoint::finite(&v),
            None => ProjPoint::infinity(),
        })
    }

    /// `max |exponent|`, sum of positive exponents, sum of negative exponents.
    pub fn exponent_profile(&self) -> (u32, i32, i32) {
        let max_abs = self
            .factors
            .values()
            .map(|e| e.unsigned_abs())
            .max()
            .unwrap_or(0);
        let pos = self.factors.values().filter(|e| **e > 0).sum();
        let neg = self.factors.values().filter(|e| **e < 0).sum();
        (max_abs, pos, neg)
    }

    /// Exponents in `{−1, 0, 1}`, positive exponents summing to at most 2 and
    /// negative ones to at least −2.
    pub fn satisfies_coordinate_bounds(&self) -> bool {
        let (max_abs, pos, neg) = self.exponent_profile();
        max_abs <= 1 && pos <= 2 && neg >= -2
    }

    /// Substitutes `z_i ↦ z_{mapping[i−1]}` and moves the map to `Ω_{new_k}`.
    pub fn rename(&self, new_k: usize, mapping: &[usize]) -> Result<FactoredMap> {
        if mapping.len() != self.ambient_k - 2 {
            return Err(Error::LengthMismatch {
                expected: self.ambient_k - 2,
                actual: mapping.len(),
            });
        }
        let mut out = FactoredMap::constant(new_k, self.lambda.clone())?;
        for (f, e) in &self.factors {
            let image = match *f {
                LinearFactor::Var(j) => FactoredMap::var(new_k, mapping[j - 1])?,
                LinearFactor::VarMinusOne(j) => FactoredMap::var_minus_one(new_k, mapping[j - 1])?,
                LinearFactor::VarDiff(i, j) => {
                    FactoredMap::var_diff(new_k, mapping[i - 1], mapping[j - 1])?
                }
            };
            let image = if *e > 0 { image } else { image.invert() };
            for _ in 0..e.unsigned_abs() {
                out = out.multiply(&image)?;
            }
        }
        Ok(out)
    }

    /// Parses the textual form on `Ω_k`. Atoms `(zi-zj)` with `i > j` are
    /// accepted and canonicalized.
    pub fn parse(text: &str, ambient_k: usize) -> Result<FactoredMap> {
        let template = Template::parse(text)?;
        if !template.letters().is_empty() {
            return Err(Error::MalformedInput(format!(
                "unexpected index variable in {text:?}"
            )));
        }
        template.instantiate(ambient_k, &BTreeMap::new())
    }
}

fn check_ambient(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "ambient marking must be at least 3, got {k}"
        )));
    }
    Ok(())
}

fn check_factor(k: usize, factor: &LinearFactor) -> Result<()> {
    let ok = match *factor {
        LinearFactor::Var(j) | LinearFactor::VarMinusOne(j) => j >= 1,
        LinearFactor::VarDiff(i, j) => i >= 1 && i < j,
    };
    if !ok {
        return Err(Error::MalformedInput(format!(
            "non-canonical factor {factor}"
        )));
    }
    if factor.max_index() > k - 2 {
        return Err(Error::OutOfRange {
            entry: factor.max_index(),
            max: k - 2,
        });
    }
    Ok(())
}

impl fmt::Display for FactoredMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ProjPoint::finite(&self.lambda))?;
        for (factor, e) in &self.factors {
            if *e == 1 {
                write!(f, "*{factor}")?;
            } else {
                write!(f, "*{factor}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A symbolic marked point: `∞`, `0`, `1` or a coordinate variable `z_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolicPoint {
    Infinity,
    Zero,
    One,
    Var(usize),
}

impl SymbolicPoint {
    /// The `i`-th point (1-based) of the marked tuple `(∞, 0, 1, z_1, …)`.
    pub fn marked(i: usize) -> SymbolicPoint {
        match i {
            1 => SymbolicPoint::Infinity,
            2 => SymbolicPoint::Zero,
            3 => SymbolicPoint::One,
            _ => SymbolicPoint::Var(i - 3),
        }
    }
}

/// Result of subtracting two symbolic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Difference {
    Finite(FactoredMap),
    /// One of the operands was `∞`.
    Infinity,
}

/// `p − q` for symbolic points on `Ω_k`.
pub fn symbolic_diff(ambient_k: usize, p: SymbolicPoint, q: SymbolicPoint) -> Result<Difference> {
    use SymbolicPoint::*;
    check_ambient(ambient_k)?;
    for s in [p, q] {
        if let Var(j) = s {
            if j == 0 || j > ambient_k - 2 {
                return Err(Error::OutOfRange {
                    entry: j,
                    max: ambient_k - 2,
                });
            }
        }
    }
    if p == q {
        return Err(Error::IdenticalPoints);
    }
    let neg = |m: FactoredMap| FactoredMap {
        lambda: -m.lambda,
        ..m
    };
    let map = match (p, q) {
        (Infinity, _) | (_, Infinity) => return Ok(Difference::Infinity),
        (Zero, One) => FactoredMap::constant(ambient_k, -Rational::one())?,
        (One, Zero) => FactoredMap::one(ambient_k)?,
        (Var(j), Zero) => FactoredMap::var(ambient_k, j)?,
        (Zero, Var(j)) => neg(FactoredMap::var(ambient_k, j)?),
        (Var(j), One) => FactoredMap::var_minus_one(ambient_k, j)?,
        (One, Var(j)) => neg(FactoredMap::var_minus_one(ambient_k, j)?),
        (Var(i), Var(j)) => FactoredMap::var_diff(ambient_k, i, j)?,
        (Zero, Zero) | (One, One) => unreachable!(),
    };
    Ok(Difference::Finite(map))
}

/// The cross-ratio `[a, b, c, d] = (d − b)(c − a) / ((d − a)(c − b))` of symbolic
/// points. A point at `∞` appears in exactly one numerator and one
/// denominator difference; that pair is dropped.
pub fn cross_ratio_symbolic(
    ambient_k: usize,
    a: SymbolicPoint,
    b: SymbolicPoint,
    c: SymbolicPoint,
    d: SymbolicPoint,
) -> Result<FactoredMap> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::DegenerateTuple);
            }
        }
    }
    let mut out = FactoredMap::one(ambient_k)?;
    for (p, q, numerator) in [(d, b, true), (c, a, true), (d, a, false), (c, b, false)] {
        match symbolic_diff(ambient_k, p, q)? {
            Difference::Infinity => {}
            Difference::Finite(m) => {
                let m = if numerator { m } else { m.invert() };
                out = out.multiply(&m)?;
            }
        }
    }
    Ok(out)
}

impl FromStr for SymbolicPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(SymbolicPoint::Infinity),
            "0" => Ok(SymbolicPoint::Zero),
            "1" => Ok(SymbolicPoint::One),
            other => other
                .strip_prefix('z')
                .and_then(|j| j.parse::<usize>().ok())
                .filter(|j| *j >= 1)
                .map(SymbolicPoint::Var)
                .ok_or_else(|| Error::MalformedInput(format!("not a symbolic point: {s:?}"))),
        }
    }
}

/// Index inside a template atom: a literal or a placeholder letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Index {
    Literal(usize),
    Letter(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AtomTemplate {
    Var(Index),
    VarMinusOne(Index),
    VarDiff(Index, Index),
}

/// A factored map whose variable indices may be placeholder letters, used for
/// families like `z_s / (z_s − z_l)` with `s ≠ l`.
#[derive(Debug, Clone)]
pub struct Template {
    lambda: Rational,
    terms: Vec<(AtomTemplate, i32)>,
}

impl Template {
    pub fn parse(text: &str) -> Result<Template> {
        let bad = || Error::MalformedInput(format!("not a factored map: {text:?}"));
        let text = text.trim();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(bad());
        }
        let mut pieces = text.split('*').peekable();
        let mut lambda = Rational::one();
        if let Some(first) = pieces.peek() {
            if !first.starts_with('z') && !first.starts_with('(') {
                lambda = parse_rational(first).map_err(|_| bad())?;
                if lambda.is_zero() {
                    return Err(Error::InvalidParameter("λ must be nonzero".into()));
                }
                pieces.next();
            }
        }
        let mut terms = Vec::new();
        for piece in pieces {
            let (atom, exp) = match piece.split_once('^') {
                Some((atom, exp)) => (atom, exp.parse::<i32>().map_err(|_| bad())?),
                None => (piece, 1),
            };
            terms.push((parse_atom(atom).ok_or_else(bad)?, exp));
        }
        Ok(Template { lambda, terms })
    }

    /// Placeholder letters in order of first appearance.
    pub fn letters(&self) -> Vec<char> {
        let mut out = Vec::new();
        let mut push = |i: &Index| {
            if let Index::Letter(c) = i {
                if !out.contains(c) {
                    out.push(*c);
                }
            }
        };
        for (atom, _) in &self.terms {
            match atom {
                AtomTemplate::Var(i) | AtomTemplate::VarMinusOne(i) => push(i),
                AtomTemplate::VarDiff(i, j) => {
                    push(i);
                    push(j);
                }
            }
        }
        out
    }

    /// Substitutes letters by indices and canonicalizes.
    pub fn instantiate(
        &self,
        ambient_k: usize,
        assignment: &BTreeMap<char, usize>,
    ) -> Result<FactoredMap> {
        let resolve = |i: &Index| match i {
            Index::Literal(n) => Ok(*n),
            Index::Letter(c) => assignment
                .get(c)
                .copied()
                .ok_or_else(|| Error::MalformedInput(format!("unassigned index variable {c}"))),
        };
        let mut out = FactoredMap::constant(ambient_k, self.lambda.clone())?;
        for (atom, exp) in &self.terms {
            let base = match atom {
                AtomTemplate::Var(i) => FactoredMap::var(ambient_k, resolve(i)?)?,
                AtomTemplate::VarMinusOne(i) => FactoredMap::var_minus_one(ambient_k, resolve(i)?)?,
                AtomTemplate::VarDiff(i, j) => {
                    FactoredMap::var_diff(ambient_k, resolve(i)?, resolve(j)?)?
                }
            };
            let base = if *exp >= 0 { base } else { base.invert() };
            for _ in 0..exp.unsigned_abs() {
                out = out.multiply(&base)?;
            }
        }
        Ok(out)
    }

    /// All instantiations with pairwise distinct letters in `1..=k−2`.
    pub fn instantiate_all(&self, ambient_k: usize) -> Result<Vec<FactoredMap>> {
        use itertools::Itertools;
        let letters = self.letters();
        let vars = ambient_k.saturating_sub(2);
        if letters.len() > vars {
            return Ok(Vec::new());
        }
        (1..=vars)
            .permutations(letters.len())
            .map(|choice| {
                let assignment = letters.iter().copied().zip(choice).collect();
                self.instantiate(ambient_k, &assignment)
            })
            .collect()
    }
}

fn parse_index(s: &str) -> Option<Index> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => Some(Index::Letter(c)),
        _ => s
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .map(Index::Literal),
    }
}

fn parse_atom(s: &str) -> Option<AtomTemplate> {
    if let Some(inner) = s.strip_prefix("(z").and_then(|r| r.strip_suffix(')')) {
        let (lhs, rhs) = inner.split_once('-')?;
        let i = parse_index(lhs)?;
        if rhs == "1" {
            return Some(AtomTemplate::VarMinusOne(i));
        }
        let j = parse_index(rhs.strip_prefix('z')?)?;
        return Some(AtomTemplate::VarDiff(i, j));
    }
    s.strip_prefix('z')
        .and_then(parse_index)
        .map(AtomTemplate::Var)
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Difference::Finite(m) => m.fmt(f),
            Difference::Infinity => f.write_str("inf"),
        }
    }
}

/// Helper for building rationals in tests and fixtures.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `λ ∈ {+1, −1}`.
pub fn is_unit_sign(lambda: &Rational) -> bool {
    lambda.is_integer() && lambda.numer().abs().is_one()
}
