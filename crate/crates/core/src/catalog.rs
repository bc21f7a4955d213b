//! Catalogs of the coordinate functions `T_j^σ` of `Aut(Ω_k)` and their
//! comparison with the reference lists of forms (bundled as templates under
//! `fixtures/`).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factored::{cross_ratio_symbolic, is_unit_sign, FactoredMap, SymbolicPoint, Template};
use crate::group::{theta, MATCH_HEIGHT};
use crate::perm::enumerate_group_with_ceiling;
use crate::projective::{sample_omega_point, Rational};
use crate::DEFAULT_MAX_K;

const LIST_K4: &str = include_str!("../fixtures/catalog_k4.txt");
const LIST_K5: &str = include_str!("../fixtures/catalog_k5.txt");
const LIST_K6: &str = include_str!("../fixtures/catalog_k6.txt");

/// The three reference lists of coordinate forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FormList {
    /// `k = 4`, indices `s ≠ l`.
    K4,
    /// `k = 5`, indices `s, l, i` pairwise distinct.
    K5,
    /// `k ≥ 6`, indices `s, l, i, r` pairwise distinct.
    K6Plus,
}

impl FormList {
    /// The list stated for marking `k`, if any.
    pub fn for_k(k: usize) -> Option<FormList> {
        match k {
            4 => Some(FormList::K4),
            5 => Some(FormList::K5),
            k if k >= 6 => Some(FormList::K6Plus),
            _ => None,
        }
    }

    /// Every list stated for some marking `≤ k`.
    pub fn up_to(k: usize) -> Vec<FormList> {
        [FormList::K4, FormList::K5, FormList::K6Plus]
            .into_iter()
            .filter(|l| l.min_k() <= k)
            .collect()
    }

    fn min_k(&self) -> usize {
        match self {
            FormList::K4 => 4,
            FormList::K5 => 5,
            FormList::K6Plus => 6,
        }
    }

    fn source(&self) -> &'static str {
        match self {
            FormList::K4 => LIST_K4,
            FormList::K5 => LIST_K5,
            FormList::K6Plus => LIST_K6,
        }
    }

    pub fn templates(&self) -> Result<Vec<Template>> {
        self.source()
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(Template::parse)
            .collect()
    }

    /// All instantiations of the list's templates on `Ω_k`.
    pub fn forms(&self, k: usize) -> Result<BTreeSet<FactoredMap>> {
        let mut out = BTreeSet::new();
        for t in self.templates()? {
            out.extend(t.instantiate_all(k)?);
        }
        Ok(out)
    }
}

/// The deduplicated set `{T_j^σ : σ ∈ S_{k+1}, 1 ≤ j ≤ k − 2}`, each member
/// tagged with the lexicographically smallest marked-point quadruple
/// `(σ⁻¹(1), σ⁻¹(2), σ⁻¹(3), σ⁻¹(3 + j))` producing it.
#[derive(Debug, Clone)]
pub struct Catalog {
    ambient_k: usize,
    functions: BTreeMap<FactoredMap, [usize; 4]>,
}

pub fn coordinate_catalog(k: usize) -> Result<Catalog> {
    coordinate_catalog_with_ceiling(k, DEFAULT_MAX_K)
}

pub fn coordinate_catalog_with_ceiling(k: usize, max_k: usize) -> Result<Catalog> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 3, got {k}"
        )));
    }
    if k > max_k {
        return Err(Error::DegreeTooLarge {
            degree: k + 1,
            ceiling: max_k + 1,
        });
    }
    let perms: Vec<_> = enumerate_group_with_ceiling(k + 1, max_k + 1)?.collect();
    let rows = perms
        .par_iter()
        .map(|sigma| {
            let t = theta(k, sigma)?;
            let inv = sigma.inverse();
            Ok(t.coords()
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    (
                        f.clone(),
                        [inv.apply(1), inv.apply(2), inv.apply(3), inv.apply(4 + j)],
                    )
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut functions: BTreeMap<FactoredMap, [usize; 4]> = BTreeMap::new();
    for (f, quad) in rows.into_iter().flatten() {
        functions
            .entry(f)
            .and_modify(|q| *q = (*q).min(quad))
            .or_insert(quad);
    }
    Ok(Catalog {
        ambient_k: k,
        functions,
    })
}

impl Catalog {
    pub fn ambient_k(&self) -> usize {
        self.ambient_k
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn contains(&self, f: &FactoredMap) -> bool {
        self.functions.contains_key(f)
    }

    pub fn functions(&self) -> impl Iterator<Item = &FactoredMap> {
        self.functions.keys()
    }

    /// Members with their representative quadruple of marked-point indices.
    pub fn entries(&self) -> impl Iterator<Item = (&FactoredMap, &[usize; 4])> {
        self.functions.iter()
    }

    pub fn to_set(&self) -> BTreeSet<FactoredMap> {
        self.functions.keys().cloned().collect()
    }

    /// Members violating the exponent bounds (entries in `{−1, 0, 1}`,
    /// positive sum `≤ 2`, negative sum `≥ −2`).
    pub fn bound_violations(&self) -> Vec<&FactoredMap> {
        self.functions()
            .filter(|f| !f.satisfies_coordinate_bounds())
            .collect()
    }

    /// Members whose leading constant is not `±1`.
    pub fn non_unit_lambdas(&self) -> Vec<&FactoredMap> {
        self.functions()
            .filter(|f| !is_unit_sign(f.lambda()))
            .collect()
    }

    /// Checks that `F⁻¹(1)` lies on the hyperplanes `z_j = 0, 1` and
    /// `z_i = z_j`: for `F = [a, b, c, d]` one has `1 − F = [a, c, b, d]`,
    /// another factored map, so its zero set is a union of hyperplanes.
    /// The identity is confirmed at `trials` sampled points.
    pub fn verify_unit_preimages(&self, trials: usize, seed: u64) -> Result<()> {
        let k = self.ambient_k;
        let points = (0..trials)
            .map(|t| sample_omega_point(k, seed.wrapping_add(t as u64), MATCH_HEIGHT))
            .collect::<Result<Vec<_>>>()?;
        for (f, q) in &self.functions {
            let p = |i: usize| SymbolicPoint::marked(q[i]);
            let complement = cross_ratio_symbolic(k, p(0), p(2), p(1), p(3))?;
            for z in &points {
                let lhs = f.eval_with(z.coords())?;
                let rhs = complement.eval_with(z.coords())?;
                match (lhs, rhs) {
                    (Some(a), Some(b)) if &a + &b == Rational::one() => {}
                    _ => {
                        return Err(Error::NotInOmega(format!(
                            "1 - ({f}) is not ({complement})"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// Set comparison against the reference lists.
    pub fn diff_lists(&self) -> Result<ListDiff> {
        let k = self.ambient_k;
        let list = FormList::for_k(k);
        let strict = match list {
            Some(l) => l.forms(k)?,
            None => BTreeSet::new(),
        };
        let mut cumulative = BTreeSet::new();
        for l in FormList::up_to(k) {
            cumulative.extend(l.forms(k)?);
        }
        let ours = self.to_set();
        Ok(ListDiff {
            k,
            list,
            catalog_size: ours.len(),
            list_size: strict.len(),
            cumulative_size: cumulative.len(),
            missing_from_catalog: cumulative
                .difference(&ours)
                .map(|f| f.to_string())
                .collect(),
            absent_from_list: ours.difference(&strict).map(|f| f.to_string()).collect(),
            absent_from_cumulative: ours
                .difference(&cumulative)
                .map(|f| f.to_string())
                .collect(),
        })
    }
}

/// Differences between a computed catalog and the reference lists.
///
/// `absent_from_list` compares against the list stated for this `k` alone;
/// `absent_from_cumulative` against the union of the lists for all
/// markings up to `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ListDiff {
    pub k: usize,
    pub list: Option<FormList>,
    pub catalog_size: usize,
    pub list_size: usize,
    pub cumulative_size: usize,
    /// Listed forms that do not occur as coordinates.
    pub missing_from_catalog: Vec<String>,
    pub absent_from_list: Vec<String>,
    pub absent_from_cumulative: Vec<String>,
}

impl ListDiff {
    /// The list for this `k` matches the catalog exactly.
    pub fn is_exact(&self) -> bool {
        self.list.is_some()
            && self.missing_from_catalog.is_empty()
            && self.absent_from_list.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sizes() {
        assert_eq!(coordinate_catalog(3).unwrap().len(), 6);
        assert_eq!(coordinate_catalog(4).unwrap().len(), 30);
        assert_eq!(
            coordinate_catalog(9).unwrap_err(),
            Error::DegreeTooLarge {
                degree: 10,
                ceiling: 8
            }
        );
    }

    #[test]
    fn k4_list_is_exact() {
        let diff = coordinate_catalog(4).unwrap().diff_lists().unwrap();
        assert_eq!(diff.list_size, 30);
        assert!(diff.is_exact(), "{diff:?}");
    }

    #[test]
    fn templates_parse() {
        assert_eq!(FormList::K4.templates().unwrap().len(), 15);
        assert_eq!(FormList::K5.templates().unwrap().len(), 12);
        assert_eq!(FormList::K6Plus.templates().unwrap().len(), 10);
    }

    #[test]
    fn unit_preimages_lie_on_hyperplanes() {
        coordinate_catalog(5)
            .unwrap()
            .verify_unit_preimages(3, 0)
            .unwrap();
    }
}
