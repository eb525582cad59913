//! Observation and action spaces.
//!
//! A [`SpaceDescriptor`] declares the set of legal values; an [`Element`] is a
//! single value drawn from one. Countable spaces can be encoded to a
//! [`StateKey`] with a mixed-radix code so that tabular learners can index
//! them directly.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SpaceError;

/// A single observation or action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Element {
    Discrete(usize),
    MultiDiscrete(Vec<usize>),
    Real(Vec<f64>),
}

pub type Observation = Element;
pub type Action = Element;

impl Element {
    pub fn as_discrete(&self) -> Option<usize> {
        match self {
            Element::Discrete(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_multi(&self) -> Option<&[usize]> {
        match self {
            Element::MultiDiscrete(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Element::Real(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Discrete(v) => write!(f, "{v}"),
            Element::MultiDiscrete(v) => write!(f, "{v:?}"),
            Element::Real(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x:.3}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Canonical integer key of a countable observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateKey(pub u64);

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Declares an observation or action space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpaceDescriptor {
    Discrete { n: usize },
    MultiDiscrete { dims: Vec<usize> },
    /// Real box; `low`/`high` hold one bound per flattened component.
    Box { low: Vec<f64>, high: Vec<f64>, shape: Vec<usize> },
}

impl SpaceDescriptor {
    pub fn discrete(n: usize) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::Invalid("discrete space needs n >= 1".into()));
        }
        Ok(SpaceDescriptor::Discrete { n })
    }

    pub fn multi_discrete(dims: Vec<usize>) -> Result<Self, SpaceError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(SpaceError::Invalid(format!(
                "multi-discrete dims must be non-empty and >= 1, got {dims:?}"
            )));
        }
        Ok(SpaceDescriptor::MultiDiscrete { dims })
    }

    /// Box with the same bounds on every component.
    pub fn uniform_box(low: f64, high: f64, shape: Vec<usize>) -> Result<Self, SpaceError> {
        let len: usize = shape.iter().product();
        Self::bounded_box(vec![low; len], vec![high; len], shape)
    }

    pub fn bounded_box(low: Vec<f64>, high: Vec<f64>, shape: Vec<usize>) -> Result<Self, SpaceError> {
        let len: usize = shape.iter().product();
        if shape.is_empty() || len == 0 || low.len() != len || high.len() != len {
            return Err(SpaceError::Invalid(format!(
                "box bounds must match shape {shape:?} ({} / {} bounds)",
                low.len(),
                high.len()
            )));
        }
        if low.iter().zip(&high).any(|(l, h)| !(l <= h)) {
            return Err(SpaceError::Invalid("box requires low <= high elementwise".into()));
        }
        Ok(SpaceDescriptor::Box { low, high, shape })
    }

    pub fn is_countable(&self) -> bool {
        !matches!(self, SpaceDescriptor::Box { .. })
    }

    /// Number of elements of a countable space; `None` for boxes or on overflow.
    pub fn cardinality(&self) -> Option<u128> {
        match self {
            SpaceDescriptor::Discrete { n } => Some(*n as u128),
            SpaceDescriptor::MultiDiscrete { dims } => dims
                .iter()
                .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128)),
            SpaceDescriptor::Box { .. } => None,
        }
    }

    /// Number of flattened components of an element.
    pub fn flat_len(&self) -> usize {
        match self {
            SpaceDescriptor::Discrete { .. } => 1,
            SpaceDescriptor::MultiDiscrete { dims } => dims.len(),
            SpaceDescriptor::Box { low, .. } => low.len(),
        }
    }

    pub fn contains(&self, value: &Element) -> bool {
        match (self, value) {
            (SpaceDescriptor::Discrete { n }, Element::Discrete(v)) => v < n,
            (SpaceDescriptor::MultiDiscrete { dims }, Element::MultiDiscrete(v)) => {
                v.len() == dims.len() && v.iter().zip(dims).all(|(x, d)| x < d)
            }
            (SpaceDescriptor::Box { low, high, .. }, Element::Real(v)) => {
                v.len() == low.len()
                    && v
                        .iter()
                        .zip(low.iter().zip(high))
                        .all(|(x, (l, h))| x.is_finite() && *x >= *l && *x <= *h)
            }
            _ => false,
        }
    }

    /// Uniform sample. Boxes with infinite bounds are not sampleable and
    /// fall back to clamping a standard draw to the bounds.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match self {
            SpaceDescriptor::Discrete { n } => Element::Discrete(rng.random_range(0..*n)),
            SpaceDescriptor::MultiDiscrete { dims } => {
                Element::MultiDiscrete(dims.iter().map(|&d| rng.random_range(0..d)).collect())
            }
            SpaceDescriptor::Box { low, high, .. } => Element::Real(
                low.iter()
                    .zip(high)
                    .map(|(&l, &h)| {
                        if l == h {
                            l
                        } else if l.is_finite() && h.is_finite() {
                            rng.random_range(l..=h)
                        } else {
                            rng.random::<f64>().clamp(l, h)
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Mixed-radix key of a countable element: component `i` is weighted by
    /// the product of all earlier dims.
    pub fn key_of(&self, value: &Element) -> Result<StateKey, SpaceError> {
        if !self.contains(value) {
            return Err(SpaceError::NotContained(value.to_string()));
        }
        match (self, value) {
            (SpaceDescriptor::Discrete { .. }, Element::Discrete(v)) => Ok(StateKey(*v as u64)),
            (SpaceDescriptor::MultiDiscrete { dims }, Element::MultiDiscrete(v)) => {
                mixed_radix(v, dims).map(StateKey)
            }
            _ => Err(SpaceError::Unsupported(
                "continuous observation needs a discretizer".into(),
            )),
        }
    }

    /// Inverse of [`SpaceDescriptor::key_of`].
    pub fn element_at(&self, key: StateKey) -> Result<Element, SpaceError> {
        let card = self
            .cardinality()
            .ok_or_else(|| SpaceError::Unsupported("box spaces are not enumerable".into()))?;
        if key.0 as u128 >= card {
            return Err(SpaceError::NotContained(format!("key {key}")));
        }
        match self {
            SpaceDescriptor::Discrete { .. } => Ok(Element::Discrete(key.0 as usize)),
            SpaceDescriptor::MultiDiscrete { dims } => {
                let mut rest = key.0;
                let mut out = Vec::with_capacity(dims.len());
                for &d in dims {
                    out.push((rest % d as u64) as usize);
                    rest /= d as u64;
                }
                Ok(Element::MultiDiscrete(out))
            }
            SpaceDescriptor::Box { .. } => unreachable!(),
        }
    }
}

fn mixed_radix(values: &[usize], dims: &[usize]) -> Result<u64, SpaceError> {
    let mut key: u64 = 0;
    let mut weight: u64 = 1;
    for (i, (&v, &d)) in values.iter().zip(dims).enumerate() {
        key = (v as u64)
            .checked_mul(weight)
            .and_then(|t| key.checked_add(t))
            .ok_or(SpaceError::KeyOverflow)?;
        if i + 1 < dims.len() {
            weight = weight.checked_mul(d as u64).ok_or(SpaceError::KeyOverflow)?;
        }
    }
    Ok(key)
}

/// Uniform binning of a box, one bin count per component.
#[derive(Clone, Debug, PartialEq)]
pub struct Discretizer {
    low: Vec<f64>,
    high: Vec<f64>,
    bins: Vec<usize>,
}

impl Discretizer {
    pub fn new(low: Vec<f64>, high: Vec<f64>, bins: Vec<usize>) -> Result<Self, SpaceError> {
        if low.len() != high.len() || low.len() != bins.len() || bins.contains(&0) {
            return Err(SpaceError::Invalid("discretizer bounds and bins must align".into()));
        }
        if low.iter().zip(&high).any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h)) {
            return Err(SpaceError::Invalid("discretizer needs finite low < high".into()));
        }
        Ok(Self { low, high, bins })
    }

    /// Same number of bins on every component of `space`.
    pub fn for_box(space: &SpaceDescriptor, bins: usize) -> Result<Self, SpaceError> {
        match space {
            SpaceDescriptor::Box { low, high, .. } => {
                Self::new(low.clone(), high.clone(), vec![bins; low.len()])
            }
            _ => Err(SpaceError::Invalid("discretizer requires a box space".into())),
        }
    }

    pub fn bin_indices(&self, values: &[f64]) -> Result<Vec<usize>, SpaceError> {
        if values.len() != self.bins.len() {
            return Err(SpaceError::NotContained(format!(
                "expected {} components, got {}",
                self.bins.len(),
                values.len()
            )));
        }
        Ok(values
            .iter()
            .zip(self.low.iter().zip(&self.high).zip(&self.bins))
            .map(|(&x, ((&l, &h), &b))| {
                let t = ((x - l) / (h - l)).clamp(0.0, 1.0);
                ((t * b as f64) as usize).min(b - 1)
            })
            .collect())
    }

    pub fn key(&self, values: &[f64]) -> Result<StateKey, SpaceError> {
        mixed_radix(&self.bin_indices(values)?, &self.bins).map(StateKey)
    }
}

/// Maps observations of one space to state keys.
#[derive(Clone, Debug)]
pub struct KeyEncoder {
    space: SpaceDescriptor,
    discretizer: Option<Discretizer>,
}

impl KeyEncoder {
    pub fn new(space: SpaceDescriptor, discretizer: Option<Discretizer>) -> Self {
        Self { space, discretizer }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn encode(&self, obs: &Element) -> Result<StateKey, SpaceError> {
        match (&self.space, obs) {
            (SpaceDescriptor::Box { .. }, Element::Real(v)) => match &self.discretizer {
                Some(d) => d.key(v),
                None => Err(SpaceError::Unsupported(
                    "continuous observation without a configured discretizer".into(),
                )),
            },
            _ => self.space.key_of(obs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use std::collections::HashSet;

    #[test]
    fn constructors_validate() {
        assert!(SpaceDescriptor::discrete(0).is_err());
        assert!(SpaceDescriptor::multi_discrete(vec![3, 0]).is_err());
        assert!(SpaceDescriptor::multi_discrete(vec![]).is_err());
        assert!(SpaceDescriptor::bounded_box(vec![1.0], vec![0.0], vec![1]).is_err());
        assert!(SpaceDescriptor::uniform_box(0.0, 1.0, vec![2, 3]).is_ok());
    }

    #[test]
    fn discrete_key_is_identity() {
        let s = SpaceDescriptor::discrete(10).unwrap();
        assert_eq!(s.key_of(&Element::Discrete(7)).unwrap(), StateKey(7));
    }

    #[test]
    fn mixed_radix_key_example() {
        let s = SpaceDescriptor::multi_discrete(vec![5, 5, 10]).unwrap();
        let k = s.key_of(&Element::MultiDiscrete(vec![1, 2, 3])).unwrap();
        assert_eq!(k, StateKey(1 + 5 * 2 + 25 * 3));
        assert_eq!(k, StateKey(86));
    }

    #[test]
    fn mixed_radix_is_injective_on_full_enumeration() {
        let dims = vec![5, 5, 10];
        let s = SpaceDescriptor::multi_discrete(dims.clone()).unwrap();
        let mut seen = HashSet::new();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..10 {
                    let e = Element::MultiDiscrete(vec![a, b, c]);
                    let k = s.key_of(&e).unwrap();
                    assert!(seen.insert(k));
                    assert_eq!(s.element_at(k).unwrap(), e);
                }
            }
        }
        assert_eq!(seen.len(), 250);
    }

    #[test]
    fn box_key_requires_discretizer() {
        let s = SpaceDescriptor::uniform_box(0.0, 1.0, vec![2]).unwrap();
        let enc = KeyEncoder::new(s.clone(), None);
        assert!(matches!(
            enc.encode(&Element::Real(vec![0.5, 0.5])),
            Err(SpaceError::Unsupported(_))
        ));
        let enc = KeyEncoder::new(s.clone(), Some(Discretizer::for_box(&s, 2).unwrap()));
        assert_eq!(enc.encode(&Element::Real(vec![0.0, 1.0])).unwrap(), StateKey(2));
    }

    #[test]
    fn overflow_is_reported() {
        let s = SpaceDescriptor::multi_discrete(vec![1 << 20; 4]).unwrap();
        let e = Element::MultiDiscrete(vec![(1 << 20) - 1; 4]);
        assert_eq!(s.key_of(&e), Err(SpaceError::KeyOverflow));
    }

    fn arb_space() -> impl Strategy<Value = SpaceDescriptor> {
        prop_oneof![
            (1usize..20).prop_map(|n| SpaceDescriptor::discrete(n).unwrap()),
            prop::collection::vec(1usize..6, 1..5)
                .prop_map(|d| SpaceDescriptor::multi_discrete(d).unwrap()),
            (prop::collection::vec(-5.0f64..5.0, 1..4), 0.0f64..3.0).prop_map(|(low, w)| {
                let high = low.iter().map(|l| l + w).collect();
                let n = low.len();
                SpaceDescriptor::bounded_box(low, high, vec![n]).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn sampled_values_are_contained(space in arb_space(), seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20 {
                let v = space.sample(&mut rng);
                prop_assert!(space.contains(&v));
            }
        }

        #[test]
        fn keys_round_trip(dims in prop::collection::vec(1usize..7, 1..5), seed in any::<u64>()) {
            let space = SpaceDescriptor::multi_discrete(dims).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = space.sample(&mut rng);
            let k = space.key_of(&v).unwrap();
            prop_assert!((k.0 as u128) < space.cardinality().unwrap());
            prop_assert_eq!(space.element_at(k).unwrap(), v);
        }
    }
}
