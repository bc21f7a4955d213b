//! Exact arithmetic on the rational projective line and the configuration
//! space `Ω_k` of `k - 2` pairwise distinct values avoiding `0` and `1`.
//!
//! Points of the line are homogeneous pairs `[x : y]` over the integers,
//! normalized so that `y >= 0`, `gcd(|x|, y) = 1` and infinity is exactly
//! `[1 : 0]`. Finite points round-trip through [`Rational`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// A point of `ℚ ∪ {∞}` in normalized homogeneous coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

impl ProjPoint {
    /// Builds `[x : y]`, normalizing sign and common factors.
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::MalformedInput(
                "[0 : 0] is not a projective point".into(),
            ));
        }
        if y.is_zero() {
            return Ok(Self::infinity());
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / &g, y / &g);
        if y.is_negative() {
            x = -x;
            y = -y;
        }
        Ok(ProjPoint { x, y })
    }

    pub fn infinity() -> Self {
        ProjPoint {
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    pub fn finite(value: &Rational) -> Self {
        ProjPoint {
            x: value.numer().clone(),
            y: value.denom().clone(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        ProjPoint {
            x: BigInt::from(n),
            y: BigInt::one(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.y.is_zero()
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    /// The finite value, or `None` at infinity.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_infinite() {
            None
        } else {
            Some(Rational::new(self.x.clone(), self.y.clone()))
        }
    }

    /// Projective product; `0 · ∞` is rejected.
    pub fn mul(&self, other: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(&self.x * &other.x, &self.y * &other.y)
    }

    /// `x_self · y_other − x_other · y_self`, the homogeneous form of `self − other`.
    fn det(&self, other: &ProjPoint) -> BigInt {
        &self.x * &other.y - &other.x * &self.y
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ProjPoint::infinity());
        }
        let value = parse_rational(s)?;
        Ok(ProjPoint::finite(&value))
    }
}

impl From<Rational> for ProjPoint {
    fn from(value: Rational) -> Self {
        ProjPoint::finite(&value)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim())
        .map_err(|_| Error::MalformedInput(format!("not a rational number: {s:?}")))
}

/// The cross-ratio `[a, b, c, d] = (d − b)(c − a) / ((d − a)(c − b))`.
///
/// Evaluated with homogeneous determinants, so infinite entries need no
/// special casing.
pub fn cross_ratio(
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
    d: &ProjPoint,
) -> Result<ProjPoint> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::DegenerateTuple);
            }
        }
    }
    let num = d.det(b) * c.det(a);
    let den = d.det(a) * c.det(b);
    ProjPoint::new(num, den)
}

/// A point of `Ω_k`: `k − 2` pairwise distinct finite values, none equal to 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaPoint {
    coords: Vec<Rational>,
}

impl OmegaPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::NotInOmega(
                "a point of Ω_k needs at least one coordinate".into(),
            ));
        }
        for (i, z) in coords.iter().enumerate() {
            if z.is_zero() || z.is_one() {
                return Err(Error::NotInOmega(format!(
                    "coordinate {} equals {}",
                    i + 1,
                    z
                )));
            }
            if let Some(j) = coords[..i].iter().position(|w| w == z) {
                return Err(Error::NotInOmega(format!(
                    "coordinates {} and {} coincide",
                    j + 1,
                    i + 1
                )));
            }
        }
        Ok(OmegaPoint { coords })
    }

    /// Builds a point from projective coordinates, all of which must be finite.
    pub fn from_proj(points: &[ProjPoint]) -> Result<Self> {
        let coords = points
            .iter()
            .map(|p| {
                p.to_rational()
                    .ok_or_else(|| Error::NotInOmega("coordinate at infinity".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        OmegaPoint::new(coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The marking `k` of the ambient space, i.e. number of coordinates plus two.
    pub fn ambient_k(&self) -> usize {
        self.coords.len() + 2
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn proj_coords(&self) -> Vec<ProjPoint> {
        self.coords.iter().map(ProjPoint::finite).collect()
    }

    /// The marked tuple `(∞, 0, 1, z_1, …, z_{k−2})`.
    pub fn marked_points(&self) -> Vec<ProjPoint> {
        let mut pts = vec![
            ProjPoint::infinity(),
            ProjPoint::from_integer(0),
            ProjPoint::from_integer(1),
        ];
        pts.extend(self.proj_coords());
        pts
    }
}

impl fmt::Display for OmegaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|z| ProjPoint::finite(z).to_string())
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for OmegaPoint {
    type Err = Error;

    /// Comma-separated coordinates, e.g. `"2,-1/3,5"`.
    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .split(',')
            .map(ProjPoint::from_str)
            .collect::<Result<Vec<_>>>()?;
        OmegaPoint::from_proj(&points)
    }
}

/// Deterministically samples a point of `Ω_k` whose coordinates have
/// numerator and denominator magnitude at most `height`.
pub fn sample_omega_point(k: usize, seed: u64, height: u64) -> Result<OmegaPoint> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 3, got {k}"
        )));
    }
    let needed = k - 2;
    let exhausted = Error::ExhaustedSampleSpace { k, height, needed };
    if height == 0 {
        return Err(exhausted);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h =
        i64::try_from(height).map_err(|_| Error::InvalidParameter("height too large".into()))?;
    let max_attempts = 1000 + 200 * needed;
    let mut coords: Vec<Rational> = Vec::with_capacity(needed);
    for _ in 0..max_attempts {
        if coords.len() == needed {
            break;
        }
        let n = rng.gen_range(-h..=h);
        let d = rng.gen_range(1..=h);
        let z = Rational::new(BigInt::from(n), BigInt::from(d));
        if z.is_zero() || z.is_one() || coords.contains(&z) {
            continue;
        }
        coords.push(z);
    }
    if coords.len() < needed {
        return Err(exhausted);
    }
    OmegaPoint::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(n: i64, d: i64) -> ProjPoint {
        ProjPoint::finite(&q(n, d))
    }

    #[test]
    fn normalizes_homogeneous_pairs() {
        let pt = ProjPoint::new(BigInt::from(4), BigInt::from(-6)).unwrap();
        assert_eq!(pt.to_string(), "-2/3");
        let inf = ProjPoint::new(BigInt::from(-7), BigInt::zero()).unwrap();
        assert_eq!(inf, ProjPoint::infinity());
        assert!(ProjPoint::new(BigInt::zero(), BigInt::zero()).is_err());
        assert_eq!(
            ProjPoint::new(BigInt::zero(), BigInt::from(5))
                .unwrap()
                .to_string(),
            "0"
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["inf", "0", "-3", "5/7", "-12/5"] {
            assert_eq!(s.parse::<ProjPoint>().unwrap().to_string(), s);
        }
        assert_eq!("6/4".parse::<ProjPoint>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<ProjPoint>().is_err());
        assert!("x".parse::<ProjPoint>().is_err());
    }

    #[test]
    fn cross_ratio_examples() {
        let inf = ProjPoint::infinity();
        assert_eq!(
            cross_ratio(&inf, &p(0, 1), &p(1, 1), &p(5, 1)).unwrap(),
            p(5, 1)
        );
        assert_eq!(
            cross_ratio(&p(0, 1), &inf, &p(1, 1), &p(4, 1)).unwrap(),
            p(1, 4)
        );
        assert_eq!(
            cross_ratio(&p(2, 1), &p(0, 1), &p(1, 1), &p(3, 1)).unwrap(),
            p(-3, 1)
        );
    }

    #[test]
    fn cross_ratio_rejects_coincident_points() {
        let err = cross_ratio(&p(2, 1), &p(0, 1), &p(2, 1), &p(3, 1)).unwrap_err();
        assert_eq!(err, Error::DegenerateTuple);
        let inf = ProjPoint::infinity();
        assert!(cross_ratio(&inf, &p(0, 1), &inf, &p(3, 1)).is_err());
    }

    #[test]
    fn omega_point_invariants() {
        assert!(OmegaPoint::new(vec![q(2, 1), q(3, 1)]).is_ok());
        assert!(OmegaPoint::new(vec![q(0, 1)]).is_err());
        assert!(OmegaPoint::new(vec![q(2, 1), q(1, 1)]).is_err());
        assert!(OmegaPoint::new(vec![q(2, 1), q(4, 2)]).is_err());
        assert!("2,inf".parse::<OmegaPoint>().is_err());
        assert_eq!(
            "2,-1/3".parse::<OmegaPoint>().unwrap().to_string(),
            "2,-1/3"
        );
    }

    #[test]
    fn sampler_examples() {
        let z = sample_omega_point(3, 0, 10).unwrap();
        assert_eq!(z.len(), 1);
        let z = sample_omega_point(5, 7, 100).unwrap();
        assert_eq!(z.len(), 3);
        assert_eq!(z, sample_omega_point(5, 7, 100).unwrap());
        assert_ne!(z, sample_omega_point(5, 8, 100).unwrap());
    }

    #[test]
    fn sampler_reports_exhaustion() {
        // height 1 only admits the value -1
        assert!(sample_omega_point(3, 1, 1).is_ok());
        let err = sample_omega_point(4, 1, 1).unwrap_err();
        assert_eq!(err.name(), "ExhaustedSampleSpace");
        assert!(sample_omega_point(2, 0, 10).is_err());
    }
}
