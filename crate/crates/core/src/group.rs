//! The automorphism group `G_k = Aut(Ω_k)` and the isomorphism
//! `Θ_k : S_{k+1} → G_k`.
//!
//! For `σ ∈ S_{k+1}` let `M_σ` be the Möbius map sending
//! `p_{σ⁻¹(1)}, p_{σ⁻¹(2)}, p_{σ⁻¹(3)}` to `∞, 0, 1`, where
//! `(p_1, …, p_{k+1}) = (∞, 0, 1, z_1, …, z_{k−2})`. Then
//! `Θ_k(σ) = (M_σ(p_{σ⁻¹(4)}), …, M_σ(p_{σ⁻¹(k+1)}))`. With composition
//! read right to left, `Θ_k(στ) = Θ_k(σ) ∘ Θ_k(τ)`.
//!
//! Group products are computed on permutations and mapped through `Θ_k`;
//! a composite of factored maps is not factored in general.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factored::{cross_ratio_symbolic, FactoredMap, SymbolicPoint};
use crate::perm::{enumerate_group_with_ceiling, Permutation};
use crate::projective::{cross_ratio, sample_omega_point, OmegaPoint, ProjPoint};
use crate::DEFAULT_MAX_K;

/// Sample height for the points used to match and verify group elements.
pub(crate) const MATCH_HEIGHT: u64 = 1000;

/// An automorphism of `Ω_k`, given by its `k − 2` coordinate functions.
///
/// Equality, ordering and hashing only look at the coordinates; the
/// optional source permutation is provenance.
#[derive(Debug, Clone)]
pub struct GroupElement {
    ambient_k: usize,
    coords: Vec<FactoredMap>,
    source_perm: Option<Permutation>,
}

impl GroupElement {
    /// Wraps a coordinate tuple. Checks shape only; use
    /// [`GroupElement::check_on_samples`] or [`find_permutation`] to confirm
    /// membership in `G_k`.
    pub fn from_coords(ambient_k: usize, coords: Vec<FactoredMap>) -> Result<GroupElement> {
        if ambient_k < 3 {
            return Err(Error::InvalidParameter(format!(
                "k must be at least 3, got {ambient_k}"
            )));
        }
        if coords.len() != ambient_k - 2 {
            return Err(Error::LengthMismatch {
                expected: ambient_k - 2,
                actual: coords.len(),
            });
        }
        for c in &coords {
            if c.ambient_k() != ambient_k {
                return Err(Error::AmbientMismatch {
                    left: ambient_k,
                    right: c.ambient_k(),
                });
            }
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::NotAGroupElement);
            }
        }
        Ok(GroupElement {
            ambient_k,
            coords,
            source_perm: None,
        })
    }

    pub fn identity(ambient_k: usize) -> Result<GroupElement> {
        theta(ambient_k, &Permutation::identity(ambient_k + 1))
    }

    pub fn ambient_k(&self) -> usize {
        self.ambient_k
    }

    pub fn coords(&self) -> &[FactoredMap] {
        &self.coords
    }

    pub fn source_perm(&self) -> Option<&Permutation> {
        self.source_perm.as_ref()
    }

    pub fn with_source_perm(mut self, sigma: Permutation) -> GroupElement {
        self.source_perm = Some(sigma);
        self
    }

    /// Returns a copy carrying a source permutation, found by search if missing.
    pub fn resolved(&self) -> Result<GroupElement> {
        match self.source_perm {
            Some(_) => Ok(self.clone()),
            None => {
                let sigma =
                    find_permutation(self.ambient_k, self).map_err(|_| Error::MissingProvenance)?;
                Ok(self.clone().with_source_perm(sigma))
            }
        }
    }

    /// Applies the map to a point of `Ω_k`; the image must again lie in `Ω_k`.
    pub fn apply(&self, z: &OmegaPoint) -> Result<OmegaPoint> {
        let values = self
            .coords
            .iter()
            .map(|c| c.evaluate(z))
            .collect::<Result<Vec<_>>>()?;
        OmegaPoint::from_proj(&values)
    }

    /// Values of the coordinates at `z` (which may include `∞` for
    /// non-members).
    pub fn values_at(&self, z: &OmegaPoint) -> Result<Vec<ProjPoint>> {
        self.coords.iter().map(|c| c.evaluate(z)).collect()
    }

    /// Checks that `trials` sampled points are mapped into `Ω_k`.
    pub fn check_on_samples(&self, trials: usize, seed: u64) -> Result<()> {
        for t in 0..trials {
            let z = sample_omega_point(self.ambient_k, seed.wrapping_add(t as u64), MATCH_HEIGHT)?;
            self.apply(&z)?;
        }
        Ok(())
    }

    /// `(T_{τ(1)}, …, T_{τ(k−2)})` for `τ ∈ S_{k−2}`.
    pub fn permute_coords(&self, tau: &Permutation) -> Result<GroupElement> {
        if tau.degree() != self.ambient_k - 2 {
            return Err(Error::DegreeMismatch {
                left: tau.degree(),
                right: self.ambient_k - 2,
            });
        }
        let coords = (1..=tau.degree())
            .map(|i| self.coords[tau.apply(i) - 1].clone())
            .collect();
        GroupElement::from_coords(self.ambient_k, coords)
    }

    /// Coordinates in the textual factored form, joined by `" , "`.
    pub fn format_coords(&self) -> String {
        self.coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" , ")
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_k == other.ambient_k && self.coords == other.coords
    }
}

impl Eq for GroupElement {}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_k, &self.coords).cmp(&(other.ambient_k, &other.coords))
    }
}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_k.hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_coords())
    }
}

/// `Θ_k(σ)`.
pub fn theta(k: usize, sigma: &Permutation) -> Result<GroupElement> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 3, got {k}"
        )));
    }
    if sigma.degree() != k + 1 {
        return Err(Error::DegreeMismatch {
            left: sigma.degree(),
            right: k + 1,
        });
    }
    let inv = sigma.inverse();
    let p = |i: usize| SymbolicPoint::marked(inv.apply(i));
    let coords = (1..=k - 2)
        .map(|j| cross_ratio_symbolic(k, p(1), p(2), p(3), p(3 + j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupElement {
        ambient_k: k,
        coords,
        source_perm: Some(sigma.clone()),
    })
}

/// The generators `A(z) = (1/z_1, …, 1/z_{k−2})` and
/// `B(z) = (z_{k−2}/(z_{k−2} − 1), z_{k−2}/(z_{k−2} − z_1), …, z_{k−2}/(z_{k−2} − z_{k−3}))`,
/// built from their closed formulas (no source permutation attached).
pub fn standard_generators(k: usize) -> Result<(GroupElement, GroupElement)> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 3, got {k}"
        )));
    }
    let last = k - 2;
    let a = (1..=last)
        .map(|j| Ok(FactoredMap::var(k, j)?.invert()))
        .collect::<Result<Vec<_>>>()?;
    let z_last = FactoredMap::var(k, last)?;
    let mut b = vec![z_last.multiply(&FactoredMap::var_minus_one(k, last)?.invert())?];
    for j in 1..last {
        b.push(z_last.multiply(&FactoredMap::var_diff(k, last, j)?.invert())?);
    }
    Ok((
        GroupElement::from_coords(k, a)?,
        GroupElement::from_coords(k, b)?,
    ))
}

/// Numeric `Θ_k(σ)(z)` straight from cross-ratios of the marked points.
pub(crate) fn theta_values(marked: &[ProjPoint], sigma: &Permutation) -> Result<Vec<ProjPoint>> {
    let inv = sigma.inverse();
    let p = |i: usize| &marked[inv.apply(i) - 1];
    (4..marked.len() + 1)
        .map(|i| cross_ratio(p(1), p(2), p(3), p(i)))
        .collect()
}

fn check_k(k: usize, max_k: usize) -> Result<()> {
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
    Ok(())
}

/// All `σ` with `Θ_k(σ) = m`, in lexicographic order. For `k ≥ 4` there is
/// at most one; for `k = 3` each element has four preimages.
pub fn find_permutations(k: usize, m: &GroupElement) -> Result<Vec<Permutation>> {
    find_permutations_with_ceiling(k, m, DEFAULT_MAX_K)
}

pub fn find_permutations_with_ceiling(
    k: usize,
    m: &GroupElement,
    max_k: usize,
) -> Result<Vec<Permutation>> {
    check_k(k, max_k)?;
    if m.ambient_k != k {
        return Err(Error::AmbientMismatch {
            left: k,
            right: m.ambient_k,
        });
    }
    let z = sample_omega_point(k, 0x7e11, MATCH_HEIGHT)?;
    let target = m.values_at(&z)?;
    let marked = z.marked_points();
    let mut out = Vec::new();
    for sigma in enumerate_group_with_ceiling(k + 1, max_k + 1)? {
        if theta_values(&marked, &sigma)? == target && theta(k, &sigma)? == *m {
            out.push(sigma);
        }
    }
    if out.is_empty() {
        return Err(Error::NotAGroupElement);
    }
    Ok(out)
}

/// The (first) `σ` with `Θ_k(σ) = m`.
pub fn find_permutation(k: usize, m: &GroupElement) -> Result<Permutation> {
    Ok(find_permutations(k, m)?.remove(0))
}

/// Identifies an automorphism given only as an evaluator: values are matched
/// at one sampled point and the match is confirmed at `confirmations` more.
pub fn find_permutation_by<F>(
    k: usize,
    evaluator: F,
    confirmations: usize,
    seed: u64,
) -> Result<Permutation>
where
    F: Fn(&OmegaPoint) -> Result<Vec<ProjPoint>>,
{
    check_k(k, DEFAULT_MAX_K)?;
    let z = sample_omega_point(k, seed, MATCH_HEIGHT)?;
    let target = evaluator(&z)?;
    let marked = z.marked_points();
    'candidates: for sigma in enumerate_group_with_ceiling(k + 1, DEFAULT_MAX_K + 1)? {
        if theta_values(&marked, &sigma)? != target {
            continue;
        }
        for t in 1..=confirmations {
            let w = sample_omega_point(k, seed.wrapping_add(t as u64), MATCH_HEIGHT)?;
            if theta_values(&w.marked_points(), &sigma)? != evaluator(&w)? {
                continue 'candidates;
            }
        }
        return Ok(sigma);
    }
    Err(Error::NotAGroupElement)
}

/// The subgroup of `G_k` generated by `generators`, in canonical order. Each
/// element carries the lexicographically smallest permutation realizing it.
pub fn closure(k: usize, generators: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let gens = generators
        .iter()
        .map(|g| {
            if g.ambient_k != k {
                return Err(Error::AmbientMismatch {
                    left: k,
                    right: g.ambient_k,
                });
            }
            g.resolved()
                .map(|g| g.source_perm.expect("resolved element has provenance"))
        })
        .collect::<Result<Vec<_>>>()?;
    let id = Permutation::identity(k + 1);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.compose(&x)?;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: BTreeMap<Vec<FactoredMap>, GroupElement> = BTreeMap::new();
    for sigma in seen {
        let t = theta(k, &sigma)?;
        out.entry(t.coords.clone()).or_insert(t);
    }
    Ok(out.into_values().collect())
}

/// The full image `Θ_k(S_{k+1})`, deduplicated, in canonical order.
pub fn theta_image(k: usize) -> Result<Vec<GroupElement>> {
    theta_image_with_ceiling(k, DEFAULT_MAX_K)
}

pub fn theta_image_with_ceiling(k: usize, max_k: usize) -> Result<Vec<GroupElement>> {
    check_k(k, max_k)?;
    let perms: Vec<_> = enumerate_group_with_ceiling(k + 1, max_k + 1)?.collect();
    let elements = perms
        .par_iter()
        .map(|s| theta(k, s))
        .collect::<Result<Vec<_>>>()?;
    let mut out: BTreeMap<Vec<FactoredMap>, GroupElement> = BTreeMap::new();
    for t in elements {
        out.entry(t.coords.clone()).or_insert(t);
    }
    Ok(out.into_values().collect())
}

/// The permutations of `S_4` acting trivially on `Ω_3`.
pub fn kernel_theta3() -> Vec<Permutation> {
    let identity = GroupElement::identity(3).expect("k = 3 is valid");
    enumerate_group_with_ceiling(4, 4)
        .expect("degree 4 is within ceiling")
        .filter(|s| theta(3, s).expect("degree 4 matches k = 3") == identity)
        .collect()
}
