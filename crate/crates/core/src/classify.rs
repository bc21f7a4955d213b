//! Cross-ratio maps `L_C : Ω_k → Ω_3`, the criterion deciding when two of
//! them never coincide, and the classification of non-constant holomorphic
//! maps `Ω_m → Ω_n` as `(T_{j_1}, …, T_{j_{n−2}})` with `T ∈ G_m`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factored::{cross_ratio_symbolic, FactoredMap, LinearFactor, SymbolicPoint};
use crate::group::{theta, theta_values, GroupElement, MATCH_HEIGHT};
use crate::perm::{enumerate_group_with_ceiling, Permutation};
use crate::projective::{sample_omega_point, OmegaPoint, Rational};
use crate::quadratic::{QuadraticNumber, Scalar};
use crate::DEFAULT_MAX_K;

/// Height of the rational values used to specialize variables in the witness search.
pub const WITNESS_HEIGHT: u64 = 60;
/// Specializations tried per pair by default.
pub const DEFAULT_WITNESS_BUDGET: usize = 50;
/// Sampled points used to verify lifts.
const LIFT_CHECKS: usize = 5;

/// An ordered quadruple `C = (i_1, i_2, i_3, i_4)` of pairwise distinct
/// indices into the marked points `(∞, 0, 1, z_1, …, z_{k−2})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossRatioSpec {
    ambient_k: usize,
    indices: [usize; 4],
}

impl CrossRatioSpec {
    pub fn new(ambient_k: usize, indices: [usize; 4]) -> Result<CrossRatioSpec> {
        if ambient_k < 4 {
            return Err(Error::InvalidParameter(format!(
                "cross-ratio maps need k >= 4, got {ambient_k}"
            )));
        }
        for (n, &i) in indices.iter().enumerate() {
            if i == 0 || i > ambient_k + 1 {
                return Err(Error::OutOfRange {
                    entry: i,
                    max: ambient_k + 1,
                });
            }
            if indices[..n].contains(&i) {
                return Err(Error::RepeatedEntry(i));
            }
        }
        Ok(CrossRatioSpec { ambient_k, indices })
    }

    /// Parses `"i1,i2,i3,i4"`.
    pub fn parse(text: &str, ambient_k: usize) -> Result<CrossRatioSpec> {
        let malformed =
            || Error::MalformedInput(format!("expected four comma-separated indices: {text:?}"));
        let parts = text
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| malformed()))
            .collect::<Result<Vec<_>>>()?;
        let indices: [usize; 4] = parts.try_into().map_err(|_| malformed())?;
        CrossRatioSpec::new(ambient_k, indices)
    }

    /// Parses semicolon-separated quadruples, e.g. `"1,2,3,4;1,2,3,5"`.
    pub fn parse_list(text: &str, ambient_k: usize) -> Result<Vec<CrossRatioSpec>> {
        text.split(';')
            .map(|s| CrossRatioSpec::parse(s, ambient_k))
            .collect()
    }

    /// Every ordered quadruple of distinct indices in `1..=k+1`.
    pub fn all(ambient_k: usize) -> Result<Vec<CrossRatioSpec>> {
        (1..=ambient_k + 1)
            .permutations(4)
            .map(|v| CrossRatioSpec::new(ambient_k, [v[0], v[1], v[2], v[3]]))
            .collect()
    }

    pub fn ambient_k(&self) -> usize {
        self.ambient_k
    }

    pub fn indices(&self) -> [usize; 4] {
        self.indices
    }

    /// The four quadruples with the same cross-ratio:
    /// `(a,b,c,d), (b,a,d,c), (c,d,a,b), (d,c,b,a)`.
    pub fn klein_orbit(&self) -> [CrossRatioSpec; 4] {
        let [a, b, c, d] = self.indices;
        let k = self.ambient_k;
        [[a, b, c, d], [b, a, d, c], [c, d, a, b], [d, c, b, a]].map(|indices| CrossRatioSpec {
            ambient_k: k,
            indices,
        })
    }
}

impl fmt::Display for CrossRatioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.indices.iter().join(","))
    }
}

/// `L_C(z) = [p_{i_1}(z), p_{i_2}(z), p_{i_3}(z), p_{i_4}(z)]`.
pub fn lc_map(spec: &CrossRatioSpec) -> Result<FactoredMap> {
    let p = |n: usize| SymbolicPoint::marked(spec.indices[n]);
    cross_ratio_symbolic(spec.ambient_k, p(0), p(1), p(2), p(3))
}

/// Which of the four admissible agreement patterns separates two quadruples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CollisionCase {
    /// `(i_1, i_2, i_3) = (j_1, j_2, j_3)`, `i_4 ≠ j_4`.
    A,
    /// `(i_1, i_2, i_4) = (j_1, j_2, j_4)`, `i_3 ≠ j_3`.
    B,
    /// `(i_1, i_3, i_4) = (j_1, j_3, j_4)`, `i_2 ≠ j_2`.
    C,
    /// `(i_2, i_3, i_4) = (j_2, j_3, j_4)`, `i_1 ≠ j_1`.
    D,
}

impl CollisionCase {
    pub fn letter(&self) -> char {
        match self {
            CollisionCase::A => 'a',
            CollisionCase::B => 'b',
            CollisionCase::C => 'c',
            CollisionCase::D => 'd',
        }
    }

    fn of(c1: &[usize; 4], c2: &[usize; 4]) -> Option<CollisionCase> {
        let differing: Vec<usize> = (0..4).filter(|&n| c1[n] != c2[n]).collect();
        match differing.as_slice() {
            [3] => Some(CollisionCase::A),
            [2] => Some(CollisionCase::B),
            [1] => Some(CollisionCase::C),
            [0] => Some(CollisionCase::D),
            _ => None,
        }
    }
}

fn check_pair(c1: &CrossRatioSpec, c2: &CrossRatioSpec) -> Result<()> {
    if c1.ambient_k != c2.ambient_k {
        return Err(Error::AmbientMismatch {
            left: c1.ambient_k,
            right: c2.ambient_k,
        });
    }
    Ok(())
}

/// The agreement pattern certifying that `L_{C1}(z) = L_{C2}(z)` has no
/// solution on `Ω_k`, or `None` if a solution exists.
///
/// The cases compare quadruples slot by slot. `L_C` only depends on `C` up
/// to the Klein four-group, so `C1` is tried in each of its four equivalent
/// orders (the plain order first).
pub fn collision_case(c1: &CrossRatioSpec, c2: &CrossRatioSpec) -> Result<Option<CollisionCase>> {
    check_pair(c1, c2)?;
    Ok(c1
        .klein_orbit()
        .iter()
        .find_map(|r| CollisionCase::of(&r.indices, &c2.indices)))
}

/// `true` iff `L_{C1}(z) = L_{C2}(z)` has no solution `z ∈ Ω_k`.
pub fn collision_free(c1: &CrossRatioSpec, c2: &CrossRatioSpec) -> Result<bool> {
    Ok(collision_case(c1, c2)?.is_some())
}

/// An exact point of `Ω_k` where two cross-ratio maps agree. Coordinates are
/// rational or lie in a single quadratic field `ℚ(√d)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Rational(OmegaPoint),
    Quadratic(Vec<QuadraticNumber>),
}

impl Witness {
    pub fn coords(&self) -> Vec<QuadraticNumber> {
        match self {
            Witness::Rational(z) => z
                .coords()
                .iter()
                .map(QuadraticNumber::from_rational)
                .collect(),
            Witness::Quadratic(c) => c.clone(),
        }
    }

    /// Re-checks the witness exactly: the point lies in `Ω_k` and both maps
    /// take the same finite value there.
    pub fn verify(&self, c1: &CrossRatioSpec, c2: &CrossRatioSpec) -> Result<bool> {
        check_pair(c1, c2)?;
        let z = self.coords();
        if !in_omega(&z) {
            return Ok(false);
        }
        let a = lc_map(c1)?.eval_with(&z)?;
        let b = lc_map(c2)?.eval_with(&z)?;
        Ok(a.is_some() && a == b)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Rational(z) => z.fmt(f),
            Witness::Quadratic(c) => f.write_str(&c.iter().join(",")),
        }
    }
}

fn in_omega(z: &[QuadraticNumber]) -> bool {
    let one = QuadraticNumber::from_rational(&Rational::one());
    z.iter()
        .enumerate()
        .all(|(i, w)| !w.is_nil() && *w != one && !z[..i].contains(w))
}

/// Dense univariate polynomial over `ℚ`, lowest degree first.
type Poly = Vec<Rational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Roots of a polynomial of degree 1 or 2, exactly. Higher degrees are not
/// solved and yield no roots.
fn solve(p: &Poly) -> Vec<QuadraticNumber> {
    let r = |q: Rational| QuadraticNumber::from_rational(&q);
    match p.len() {
        2 => vec![r(-&p[0] / &p[1])],
        3 => {
            let (c0, c1, c2) = (&p[0], &p[1], &p[2]);
            let two_a = c2 * Rational::from_integer(BigInt::from(2));
            let disc = c1 * c1 - c2 * c0 * Rational::from_integer(BigInt::from(4));
            if let Some(s) = rational_sqrt(&disc) {
                return vec![r((-c1 + &s) / &two_a), r((-c1 - s) / &two_a)];
            }
            // √(p/q) = √(p·q) / q
            let d = disc.numer() * disc.denom();
            let base = -c1 / &two_a;
            let coef = Rational::new(BigInt::one(), disc.denom().clone()) / &two_a;
            vec![
                QuadraticNumber::new(base.clone(), coef.clone(), d.clone()),
                QuadraticNumber::new(base, -coef, d),
            ]
        }
        _ => Vec::new(),
    }
}

/// The factor as a polynomial in the free variable, other variables fixed.
fn factor_poly(f: &LinearFactor, values: &[Rational], free: usize) -> Poly {
    let one = Rational::one;
    let v = |j: usize| values[j - 1].clone();
    match *f {
        LinearFactor::Var(j) if j == free => vec![Rational::zero(), one()],
        LinearFactor::Var(j) => vec![v(j)],
        LinearFactor::VarMinusOne(j) if j == free => vec![-one(), one()],
        LinearFactor::VarMinusOne(j) => vec![v(j) - one()],
        LinearFactor::VarDiff(i, j) if i == free => vec![-v(j), one()],
        LinearFactor::VarDiff(i, j) if j == free => vec![v(i), -one()],
        LinearFactor::VarDiff(i, j) => vec![v(i) - v(j)],
    }
}

fn pair_seed(seed: u64, c1: &CrossRatioSpec, c2: &CrossRatioSpec) -> u64 {
    c1.indices
        .iter()
        .chain(c2.indices.iter())
        .fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, &i| {
            h.rotate_left(7).wrapping_mul(0x100_0000_01b3) ^ i as u64
        })
}

/// Searches for an exact point where `L_{C1} = L_{C2}`.
///
/// Each attempt fixes all coordinates but one at sampled rationals and
/// solves the resulting equation in the remaining variable (degree at most
/// two) exactly, over `ℚ` or `ℚ(√d)`. Returns
/// [`Error::BudgetExhausted`] after `budget` attempts; that outcome is
/// inconclusive and not a proof that no collision exists.
pub fn collision_witness(
    c1: &CrossRatioSpec,
    c2: &CrossRatioSpec,
    budget: usize,
    seed: u64,
) -> Result<Witness> {
    collision_witness_with_height(c1, c2, budget, seed, WITNESS_HEIGHT)
}

/// [`collision_witness`] with the specialization height chosen by the caller.
pub fn collision_witness_with_height(
    c1: &CrossRatioSpec,
    c2: &CrossRatioSpec,
    budget: usize,
    seed: u64,
    height: u64,
) -> Result<Witness> {
    check_pair(c1, c2)?;
    let k = c1.ambient_k;
    let vars = k - 2;
    let (f1, f2) = (lc_map(c1)?, lc_map(c2)?);
    let ratio = f1.multiply(&f2.invert())?;
    let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(seed, c1, c2));
    for attempt in 0..budget {
        let free = attempt % vars + 1;
        let base = sample_omega_point(k, rng.next_u64(), height)?;
        let values = base.coords();
        // ratio = 1  ⟺  λ·∏_{e>0} f^e − ∏_{e<0} f^{−e} = 0
        let mut num: Poly = vec![ratio.lambda().clone()];
        let mut den: Poly = vec![Rational::one()];
        for (f, e) in ratio.factors() {
            let lin = factor_poly(f, values, free);
            let target = if *e > 0 { &mut num } else { &mut den };
            for _ in 0..e.unsigned_abs() {
                *target = poly_mul(target, &lin);
            }
        }
        let len = num.len().max(den.len());
        num.resize(len, Rational::zero());
        den.resize(len, Rational::zero());
        let eq = poly_trim(num.iter().zip(&den).map(|(a, b)| a - b).collect());
        let roots = if eq.is_empty() {
            // identically satisfied along this line
            vec![QuadraticNumber::from_rational(&values[free - 1])]
        } else {
            solve(&eq)
        };
        for root in roots {
            let mut z: Vec<QuadraticNumber> =
                values.iter().map(QuadraticNumber::from_rational).collect();
            z[free - 1] = root;
            let candidate = if z.iter().all(QuadraticNumber::is_rational) {
                let coords = z.iter().map(|w| w.rational_part().clone()).collect();
                match OmegaPoint::new(coords) {
                    Ok(p) => Witness::Rational(p),
                    Err(_) => continue,
                }
            } else {
                Witness::Quadratic(z)
            };
            if candidate.verify(c1, c2)? {
                return Ok(candidate);
            }
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// Outcome of checking a tuple `(L_{C_1}, …, L_{C_l})` as a map into `Ω_{l+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ValidMap {
        n: usize,
    },
    /// 1-based positions of the first pair that collides.
    CollisionAt(usize, usize),
    TooManyCoordinates,
}

pub fn validate_tuple(specs: &[CrossRatioSpec], k: usize) -> Result<Verdict> {
    if specs.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one cross-ratio is required".into(),
        ));
    }
    for s in specs {
        if s.ambient_k != k {
            return Err(Error::AmbientMismatch {
                left: k,
                right: s.ambient_k,
            });
        }
    }
    if specs.len() > k - 2 {
        return Ok(Verdict::TooManyCoordinates);
    }
    let maps = specs.iter().map(lc_map).collect::<Result<Vec<_>>>()?;
    for (i, j) in (0..specs.len()).tuple_combinations() {
        if !collision_free(&specs[i], &specs[j])? || maps[i] == maps[j] {
            return Ok(Verdict::CollisionAt(i + 1, j + 1));
        }
    }
    Ok(Verdict::ValidMap { n: specs.len() + 2 })
}

/// Every `T ∈ G_k` whose leading coordinates are the given cross-ratio maps,
/// in lexicographic order of the realizing permutation.
pub fn extensions(specs: &[CrossRatioSpec], k: usize) -> Result<Vec<GroupElement>> {
    match validate_tuple(specs, k)? {
        Verdict::ValidMap { .. } => {}
        other => {
            return Err(Error::InvalidParameter(format!(
                "tuple is not a valid map: {other:?}"
            )))
        }
    }
    if k > DEFAULT_MAX_K {
        return Err(Error::DegreeTooLarge {
            degree: k + 1,
            ceiling: DEFAULT_MAX_K + 1,
        });
    }
    let maps = specs.iter().map(lc_map).collect::<Result<Vec<_>>>()?;
    let z = sample_omega_point(k, 0x5eed, MATCH_HEIGHT)?;
    let target = maps
        .iter()
        .map(|f| f.evaluate(&z))
        .collect::<Result<Vec<_>>>()?;
    let marked = z.marked_points();
    let mut out = Vec::new();
    for sigma in enumerate_group_with_ceiling(k + 1, DEFAULT_MAX_K + 1)? {
        if theta_values(&marked, &sigma)?[..maps.len()] != target[..] {
            continue;
        }
        let t = theta(k, &sigma)?;
        if t.coords()[..maps.len()] == maps[..] {
            out.push(t);
        }
    }
    Ok(out)
}

/// Some `T ∈ G_k` of the form `(L_{C_1}, …, L_{C_l}, T_{l+1}, …, T_{k−2})`.
pub fn extend_to_group_element(specs: &[CrossRatioSpec], k: usize) -> Result<GroupElement> {
    extensions(specs, k)?
        .into_iter()
        .next()
        .ok_or(Error::NoExtension)
}

/// Ordered `l`-tuples of pairwise distinct cross-ratio maps on `Ω_k` that are
/// pairwise collision-free, one quadruple per distinct map. No bound on `l`
/// is imposed.
pub fn collision_free_tuples(k: usize, l: usize) -> Result<Vec<Vec<CrossRatioSpec>>> {
    let mut classes: BTreeMap<FactoredMap, CrossRatioSpec> = BTreeMap::new();
    for c in CrossRatioSpec::all(k)? {
        classes.entry(lc_map(&c)?).or_insert(c);
    }
    let reps: Vec<CrossRatioSpec> = classes.into_values().collect();
    let n = reps.len();
    let mut ok = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            ok[i][j] = i != j && collision_free(&reps[i], &reps[j])?;
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(
        ok: &[Vec<bool>],
        reps: &[CrossRatioSpec],
        l: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<CrossRatioSpec>>,
    ) {
        if stack.len() == l {
            out.push(stack.iter().map(|&i| reps[i]).collect());
            return;
        }
        for c in 0..reps.len() {
            if stack.iter().all(|&s| ok[s][c]) {
                stack.push(c);
                extend(ok, reps, l, stack, out);
                stack.pop();
            }
        }
    }
    extend(&ok, &reps, l, &mut stack, &mut out);
    Ok(out)
}

/// A non-constant holomorphic map `Ω_m → Ω_n` written as
/// `(T_{j_1}, …, T_{j_{n−2}})` with `T = Θ_m(σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoloMapDescriptor {
    pub m: usize,
    pub n: usize,
    pub sigma: Permutation,
    pub index_tuple: Vec<usize>,
    pub coords: Vec<FactoredMap>,
}

/// Serializable form of a [`HoloMapDescriptor`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescriptorRecord {
    pub m: usize,
    pub n: usize,
    pub sigma: String,
    #[serde(rename = "J")]
    pub index_tuple: Vec<usize>,
    pub coords: Vec<String>,
}

impl HoloMapDescriptor {
    pub fn record(&self) -> DescriptorRecord {
        DescriptorRecord {
            m: self.m,
            n: self.n,
            sigma: self.sigma.format_cycles(),
            index_tuple: self.index_tuple.clone(),
            coords: self.coords.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn format_coords(&self) -> String {
        self.coords.iter().map(|c| c.to_string()).join(" , ")
    }

    /// Checks that `trials` sampled points of `Ω_m` land in `Ω_n`.
    pub fn check_on_samples(&self, trials: usize, seed: u64) -> Result<()> {
        for t in 0..trials {
            let z = sample_omega_point(self.m, seed.wrapping_add(t as u64), MATCH_HEIGHT)?;
            let values = self
                .coords
                .iter()
                .map(|c| c.evaluate(&z))
                .collect::<Result<Vec<_>>>()?;
            OmegaPoint::from_proj(&values)?;
        }
        Ok(())
    }
}

impl fmt::Display for HoloMapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sigma={} J=({}) : {}",
            self.sigma.format_cycles(),
            self.index_tuple.iter().join(","),
            self.format_coords()
        )
    }
}

/// All non-constant holomorphic maps `Ω_m → Ω_n`, deduplicated by coordinate
/// tuple, in order of first appearance over `σ` (lexicographic) then `J`.
pub fn enumerate_maps(m: usize, n: usize) -> Result<Vec<HoloMapDescriptor>> {
    enumerate_maps_with_ceiling(m, n, DEFAULT_MAX_K)
}

pub fn enumerate_maps_with_ceiling(
    m: usize,
    n: usize,
    max_k: usize,
) -> Result<Vec<HoloMapDescriptor>> {
    if m < 3 || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "markings must be at least 3, got m = {m}, n = {n}"
        )));
    }
    if n > m {
        return Err(Error::TargetLargerThanSource { m, n });
    }
    if m > max_k {
        return Err(Error::DegreeTooLarge {
            degree: m + 1,
            ceiling: max_k + 1,
        });
    }
    let perms: Vec<_> = enumerate_group_with_ceiling(m + 1, max_k + 1)?.collect();
    let tuples: Vec<Vec<usize>> = (1..=m - 2).permutations(n - 2).collect();
    let elements = perms
        .par_iter()
        .map(|s| theta(m, s))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in elements {
        for j in &tuples {
            let coords: Vec<FactoredMap> = j.iter().map(|&i| t.coords()[i - 1].clone()).collect();
            if seen.insert(coords.clone()) {
                out.push(HoloMapDescriptor {
                    m,
                    n,
                    sigma: t.source_perm().expect("Θ attaches provenance").clone(),
                    index_tuple: j.clone(),
                    coords,
                });
            }
        }
    }
    Ok(out)
}

/// The forgetful projection `π_J : Ω_m → Ω_n`, `z ↦ (z_{j_1}, …, z_{j_{n−2}})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgetfulSpec {
    m: usize,
    n: usize,
    indices: Vec<usize>,
}

impl ForgetfulSpec {
    pub fn new(m: usize, n: usize, indices: Vec<usize>) -> Result<ForgetfulSpec> {
        if n < 3 || n > m {
            return Err(Error::InvalidParameter(format!(
                "need 3 <= n <= m, got m = {m}, n = {n}"
            )));
        }
        if indices.len() != n - 2 {
            return Err(Error::LengthMismatch {
                expected: n - 2,
                actual: indices.len(),
            });
        }
        for (p, &j) in indices.iter().enumerate() {
            if j == 0 || j > m - 2 {
                return Err(Error::OutOfRange {
                    entry: j,
                    max: m - 2,
                });
            }
            if indices[..p].contains(&j) {
                return Err(Error::RepeatedEntry(j));
            }
        }
        Ok(ForgetfulSpec { m, n, indices })
    }

    /// Parses a comma-separated index list such as `"1,3"`.
    pub fn parse(text: &str, m: usize) -> Result<ForgetfulSpec> {
        let indices = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::MalformedInput(format!("not an index list: {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ForgetfulSpec::new(m, indices.len() + 2, indices)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn apply(&self, z: &OmegaPoint) -> Result<OmegaPoint> {
        if z.len() != self.m - 2 {
            return Err(Error::LengthMismatch {
                expected: self.m - 2,
                actual: z.len(),
            });
        }
        OmegaPoint::new(
            self.indices
                .iter()
                .map(|&j| z.coords()[j - 1].clone())
                .collect(),
        )
    }

    /// The coordinate functions `z_{j_i}` on `Ω_m`.
    pub fn coords(&self) -> Result<Vec<FactoredMap>> {
        self.indices
            .iter()
            .map(|&j| FactoredMap::var(self.m, j))
            .collect()
    }

    /// `ι : {1, …, n+1} → {1, …, m+1}` matching marked points of `Ω_n` with
    /// those of `Ω_m` under the projection.
    fn embed(&self, x: usize) -> usize {
        if x <= 3 {
            x
        } else {
            self.indices[x - 4] + 3
        }
    }
}

/// How a lift was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LiftRoute {
    /// The piecewise formula as printed, verified.
    Printed,
    /// `σ̂ ∘ ι = ι ∘ σ` on the embedded marked points, identity elsewhere.
    Embedded,
    /// Exhaustive search over permutations of the embedded marked points.
    Search,
}

/// A verified `σ̂ ∈ S_{m+1}` with `π_J ∘ Θ_m(σ̂) = Θ_n(σ) ∘ π_J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub sigma_hat: Permutation,
    pub route: LiftRoute,
    /// What the printed piecewise formula produces, when it yields a permutation at all.
    pub printed_candidate: Option<Permutation>,
}

/// The piecewise formula as printed:
/// `σ̂(r) = σ(r)` if `σ(r) ∈ {1,2,3}`, else `σ(j_{σ(r)−3}) + 3` for `r ≤ 3`,
/// and likewise `σ̂(j_t + 3)` from `σ(t + 3)`; all other points fixed.
fn printed_formula(sigma: &Permutation, spec: &ForgetfulSpec) -> Option<Permutation> {
    let n1 = sigma.degree();
    let j = spec.indices();
    let rule = |s: usize| -> Option<usize> {
        if s <= 3 {
            Some(s)
        } else {
            let inner = *j.get(s - 4)?;
            (inner <= n1).then(|| sigma.apply(inner) + 3)
        }
    };
    let mut images: Vec<usize> = (1..=spec.m + 1).collect();
    for r in 1..=3 {
        images[r - 1] = rule(sigma.apply(r))?;
    }
    for (t, &jt) in j.iter().enumerate() {
        images[jt + 2] = rule(sigma.apply(t + 4))?;
    }
    Permutation::from_images(images).ok()
}

fn embedded_formula(sigma: &Permutation, spec: &ForgetfulSpec) -> Permutation {
    let mut images: Vec<usize> = (1..=spec.m + 1).collect();
    for x in 1..=sigma.degree() {
        images[spec.embed(x) - 1] = spec.embed(sigma.apply(x));
    }
    Permutation::from_images(images).expect("ι conjugates a permutation to a permutation")
}

fn verify_lift(sigma: &Permutation, sigma_hat: &Permutation, spec: &ForgetfulSpec) -> Result<bool> {
    let t = theta(spec.n, sigma)?;
    let u = theta(spec.m, sigma_hat)?;
    for s in 0..LIFT_CHECKS {
        let z = sample_omega_point(spec.m, 0x11f7 + s as u64, MATCH_HEIGHT)?;
        let lhs = spec.apply(&u.apply(&z)?)?;
        let rhs = t.apply(&spec.apply(&z)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lifts `σ ∈ S_{n+1}` to `σ̂ ∈ S_{m+1}` so that the forgetful projection
/// `π_J` intertwines `Θ_m(σ̂)` and `Θ_n(σ)`. The printed formula is tried
/// first, then the embedding `ι`, then a search over permutations of
/// `{1, 2, 3, j_1 + 3, …, j_{n−2} + 3}`; every candidate is verified at
/// sampled points.
pub fn lift_permutation(sigma: &Permutation, m: usize, j: &[usize]) -> Result<Lift> {
    if sigma.degree() < 4 {
        return Err(Error::InvalidParameter(
            "σ must act on at least 4 points".into(),
        ));
    }
    let spec = ForgetfulSpec::new(m, sigma.degree() - 1, j.to_vec())?;
    let printed_candidate = printed_formula(sigma, &spec);
    if let Some(p) = &printed_candidate {
        if verify_lift(sigma, p, &spec)? {
            return Ok(Lift {
                sigma_hat: p.clone(),
                route: LiftRoute::Printed,
                printed_candidate,
            });
        }
    }
    let embedded = embedded_formula(sigma, &spec);
    if verify_lift(sigma, &embedded, &spec)? {
        return Ok(Lift {
            sigma_hat: embedded,
            route: LiftRoute::Embedded,
            printed_candidate,
        });
    }
    let support: Vec<usize> = (1..=sigma.degree()).map(|x| spec.embed(x)).collect();
    for arrangement in support.iter().copied().permutations(support.len()) {
        let mut images: Vec<usize> = (1..=m + 1).collect();
        for (&from, &to) in support.iter().zip(&arrangement) {
            images[from - 1] = to;
        }
        let candidate = Permutation::from_images(images)?;
        if verify_lift(sigma, &candidate, &spec)? {
            return Ok(Lift {
                sigma_hat: candidate,
                route: LiftRoute::Search,
                printed_candidate,
            });
        }
    }
    Err(Error::LiftVerificationFailed)
}

impl FromStr for CollisionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(CollisionCase::A),
            "b" => Ok(CollisionCase::B),
            "c" => Ok(CollisionCase::C),
            "d" => Ok(CollisionCase::D),
            _ => Err(Error::MalformedInput(format!("unknown case {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize, i: [usize; 4]) -> CrossRatioSpec {
        CrossRatioSpec::new(k, i).unwrap()
    }

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CrossRatioSpec::new(3, [1, 2, 3, 4]).is_err());
        assert_eq!(
            CrossRatioSpec::new(4, [1, 2, 3, 6]).unwrap_err(),
            Error::OutOfRange { entry: 6, max: 5 }
        );
        assert_eq!(
            CrossRatioSpec::new(4, [1, 2, 2, 4]).unwrap_err(),
            Error::RepeatedEntry(2)
        );
        assert_eq!(
            CrossRatioSpec::parse("1,2,3,4", 4).unwrap(),
            spec(4, [1, 2, 3, 4])
        );
        assert!(CrossRatioSpec::parse("1,2,3", 4).is_err());
        assert_eq!(
            CrossRatioSpec::parse_list("1,2,3,4;1,2,3,5", 4)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(CrossRatioSpec::all(4).unwrap().len(), 120);
    }

    #[test]
    fn lc_map_examples() {
        assert_eq!(lc_map(&spec(4, [1, 2, 3, 4])).unwrap().to_string(), "1*z1");
        assert_eq!(
            lc_map(&spec(4, [2, 1, 3, 4])).unwrap().to_string(),
            "1*z1^-1"
        );
        assert_eq!(
            lc_map(&spec(4, [1, 3, 2, 5])).unwrap().to_string(),
            "-1*(z2-1)"
        );
    }

    #[test]
    fn collision_criterion_examples() {
        let c = spec(4, [1, 2, 3, 4]);
        assert_eq!(
            collision_case(&c, &spec(4, [1, 2, 3, 5])).unwrap(),
            Some(CollisionCase::A)
        );
        assert!(!collision_free(&c, &spec(4, [2, 1, 3, 4])).unwrap());
        assert!(!collision_free(&c, &c).unwrap());
        assert_eq!(
            collision_case(&c, &spec(4, [1, 2, 5, 4])).unwrap(),
            Some(CollisionCase::B)
        );
        assert_eq!(
            collision_case(&c, &spec(4, [1, 5, 3, 4])).unwrap(),
            Some(CollisionCase::C)
        );
        assert_eq!(
            collision_case(&c, &spec(4, [5, 2, 3, 4])).unwrap(),
            Some(CollisionCase::D)
        );
        // z1 against z2 written in a Klein-equivalent order
        assert!(collision_free(&c, &spec(4, [2, 1, 5, 3])).unwrap());
        assert!(collision_free(&c, &spec(5, [1, 2, 3, 4])).is_err());
    }

    #[test]
    fn witness_examples() {
        let c = spec(4, [1, 2, 3, 4]);
        let w = collision_witness(&c, &spec(4, [2, 1, 3, 4]), 50, 0).unwrap();
        match &w {
            Witness::Rational(z) => assert_eq!(z.coords()[0], -Rational::one()),
            other => panic!("expected a rational witness, got {other}"),
        }
        assert_eq!(
            collision_witness(&c, &spec(4, [1, 2, 3, 5]), 50, 0).unwrap_err(),
            Error::BudgetExhausted(50)
        );
        let other = spec(4, [1, 2, 4, 3]);
        let w = collision_witness(&c, &other, 50, 0).unwrap();
        assert!(w.verify(&c, &other).unwrap());
    }

    #[test]
    fn witness_at_sixth_root_of_unity() {
        // z1 = 1/(1 − z1) only at the primitive sixth roots of unity
        let c = spec(4, [1, 2, 3, 4]);
        let other = (1..=5)
            .permutations(4)
            .map(|v| spec(4, [v[0], v[1], v[2], v[3]]))
            .find(|s| lc_map(s).unwrap().to_string() == "-1*(z1-1)^-1")
            .unwrap();
        let w = collision_witness(&c, &other, 50, 0).unwrap();
        assert!(matches!(w, Witness::Quadratic(_)));
        assert!(w.verify(&c, &other).unwrap());
    }

    #[test]
    fn validate_examples() {
        let ok = [spec(4, [1, 2, 3, 4]), spec(4, [1, 2, 3, 5])];
        assert_eq!(validate_tuple(&ok, 4).unwrap(), Verdict::ValidMap { n: 4 });
        let bad = [spec(4, [1, 2, 3, 4]), spec(4, [2, 1, 3, 4])];
        assert_eq!(validate_tuple(&bad, 4).unwrap(), Verdict::CollisionAt(1, 2));
        let three = [
            spec(4, [1, 2, 3, 4]),
            spec(4, [1, 2, 3, 5]),
            spec(4, [1, 2, 4, 5]),
        ];
        assert_eq!(
            validate_tuple(&three, 4).unwrap(),
            Verdict::TooManyCoordinates
        );
        assert!(validate_tuple(&[], 4).is_err());
    }

    #[test]
    fn extension_examples() {
        let id = extend_to_group_element(&[spec(4, [1, 2, 3, 4])], 4).unwrap();
        assert_eq!(id.format_coords(), "1*z1 , 1*z2");
        let all = extensions(&[spec(4, [1, 3, 2, 5])], 4).unwrap();
        assert!(all.iter().all(|t| t.coords()[0].to_string() == "-1*(z2-1)"));
        assert!(all
            .iter()
            .any(|t| t.format_coords() == "-1*(z2-1) , -1*(z1-1)"));
        let full = [spec(4, [1, 3, 2, 5]), spec(4, [1, 3, 2, 4])];
        let t = extend_to_group_element(&full, 4).unwrap();
        assert_eq!(t.format_coords(), "-1*(z2-1) , -1*(z1-1)");
        assert_eq!(t.source_perm().unwrap(), &perm("(2 3)(4 5)", 5));
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_maps(3, 3).unwrap().len(), 6);
        assert_eq!(enumerate_maps(4, 3).unwrap().len(), 30);
        assert_eq!(
            enumerate_maps(3, 4).unwrap_err(),
            Error::TargetLargerThanSource { m: 3, n: 4 }
        );
    }

    #[test]
    fn forgetful_examples() {
        let pi = ForgetfulSpec::new(5, 4, vec![1, 2]).unwrap();
        let z: OmegaPoint = "2,3,5".parse().unwrap();
        assert_eq!(pi.apply(&z).unwrap().to_string(), "2,3");
        let full = ForgetfulSpec::new(4, 4, vec![1, 2]).unwrap();
        assert_eq!(
            full.apply(&"2,3".parse().unwrap()).unwrap().to_string(),
            "2,3"
        );
        let swap = ForgetfulSpec::new(4, 4, vec![2, 1]).unwrap();
        assert_eq!(
            swap.apply(&"2,3".parse().unwrap()).unwrap().to_string(),
            "3,2"
        );
        assert_eq!(
            ForgetfulSpec::new(5, 4, vec![1, 1]).unwrap_err(),
            Error::RepeatedEntry(1)
        );
        assert_eq!(
            ForgetfulSpec::new(5, 4, vec![1, 4]).unwrap_err(),
            Error::OutOfRange { entry: 4, max: 3 }
        );
        assert!(ForgetfulSpec::new(4, 5, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn lift_reproduces_worked_example() {
        let sigma = perm("(2 3)(4 5)", 5);
        let lift = lift_permutation(&sigma, 5, &[1, 2]).unwrap();
        assert_eq!(lift.sigma_hat, perm("(2 3)(4 5)", 6));
        assert_eq!(lift.route, LiftRoute::Embedded);
        // the printed rule sends both 4 and 6 to 6 here
        assert_eq!(lift.printed_candidate, None);
        let u = theta(5, &lift.sigma_hat).unwrap();
        assert_eq!(u.format_coords(), "-1*(z2-1) , -1*(z1-1) , -1*(z3-1)");
    }

    #[test]
    fn lift_identity_and_transposition() {
        let lift = lift_permutation(&Permutation::identity(5), 5, &[1, 2]).unwrap();
        assert!(lift.sigma_hat.is_identity());
        let lift = lift_permutation(&perm("(1 2)", 5), 6, &[1, 3]).unwrap();
        assert_eq!(lift.sigma_hat, perm("(1 2)", 7));
    }
}
