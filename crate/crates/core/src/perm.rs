//! Permutations of `{1, …, n}` in one-line notation.
//!
//! Composition follows the usual function convention: `σ.compose(τ)` applies
//! `τ` first. Cycle notation is only an input/output format.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest degree [`enumerate_group`] accepts by default (`8! = 40320`).
pub const DEFAULT_MAX_DEGREE: usize = 8;

/// A bijection of `{1, …, degree}`; `images[i]` is the image of `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (1..=degree).collect(),
        }
    }

    /// Builds a permutation from its one-line images (1-based).
    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n {
                return Err(Error::OutOfRange { entry: x, max: n });
            }
            if seen[x] {
                return Err(Error::RepeatedEntry(x));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Product of disjoint-or-not cycles, applied right to left.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut out = Permutation::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut seen = Vec::with_capacity(cycle.len());
            for &x in cycle {
                if x == 0 || x > degree {
                    return Err(Error::OutOfRange {
                        entry: x,
                        max: degree,
                    });
                }
                if seen.contains(&x) {
                    return Err(Error::RepeatedEntry(x));
                }
                seen.push(x);
            }
            let mut c = Permutation::identity(degree);
            for (i, &x) in cycle.iter().enumerate() {
                c.images[x - 1] = cycle[(i + 1) % cycle.len()];
            }
            out = c.compose_unchecked(&out);
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(x)` for `x` in `1..=degree`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x - 1]).collect(),
        }
    }

    /// `σ ∘ τ`, i.e. `x ↦ σ(τ(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    /// Smallest `r ≥ 1` with `σ^r = id`.
    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, num_integer::lcm)
    }

    /// Nontrivial cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle notation with fixed points omitted; the identity is `()`.
    pub fn format_cycles(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().join(" ")))
            .collect()
    }

    /// One-line notation `[σ(1),…,σ(n)]`.
    pub fn format_one_line(&self) -> String {
        format!("[{}]", self.images.iter().join(","))
    }

    /// Parses cycle notation `(a b …)(…)` (entries separated by spaces or
    /// commas, singleton cycles allowed) or one-line notation `[i1,…,in]`.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation> {
        let text = text.trim();
        let malformed = || Error::MalformedInput(format!("not a permutation: {text:?}"));
        if let Some(inner) = text.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(malformed)?;
            let images = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| malformed()))
                .collect::<Result<Vec<_>>>()?;
            if images.len() != degree {
                return Err(Error::MalformedInput(format!(
                    "one-line notation has {} entries, expected {degree}",
                    images.len()
                )));
            }
            return Permutation::from_images(images);
        }
        if text.is_empty() {
            return Err(malformed());
        }
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(malformed)?;
            let end = body.find(')').ok_or_else(malformed)?;
            let entries = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| malformed()))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(entries);
            rest = body[end + 1..].trim_start();
        }
        // a point may not appear in two cycles
        let mut seen = vec![false; degree + 1];
        for &x in cycles.iter().flatten() {
            if x == 0 || x > degree {
                return Err(Error::OutOfRange {
                    entry: x,
                    max: degree,
                });
            }
            if seen[x] {
                return Err(Error::RepeatedEntry(x));
            }
            seen[x] = true;
        }
        Permutation::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_cycles())
    }
}

/// All `degree!` permutations in lexicographic order of one-line notation.
pub fn enumerate_group(degree: usize) -> Result<impl Iterator<Item = Permutation>> {
    enumerate_group_with_ceiling(degree, DEFAULT_MAX_DEGREE)
}

pub fn enumerate_group_with_ceiling(
    degree: usize,
    ceiling: usize,
) -> Result<impl Iterator<Item = Permutation>> {
    if degree > ceiling {
        return Err(Error::DegreeTooLarge { degree, ceiling });
    }
    Ok((1..=degree)
        .permutations(degree)
        .map(|images| Permutation { images }))
}
