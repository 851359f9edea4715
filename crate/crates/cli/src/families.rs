//! Zoo families addressable by name.

use qfi_core::zoo::{
    counterexample_family, CoherentFamily, GeometricFamily, LambdaProfile, RandomAnalyticFamily, TwoLevelFamily1,
    TwoLevelFamily2,
};
use qfi_core::{Interval, StateFamily};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Entry, Span};

pub const FAMILY_NAMES: &[&str] = &["two_level_1", "two_level_2", "geometric", "coherent", "counterexample31", "random"];

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// `lambda = None` is the tanh profile.
    TwoLevel1 { lambda: Option<f64> },
    TwoLevel2 { r: f64 },
    /// Without `trunc_dim` the truncation is chosen per θ.
    Geometric { trunc_dim: Option<usize> },
    Coherent { m: f64, trunc_dim: Option<usize> },
    Counterexample,
    Random { dim: usize, seed: u64, commuting: bool },
}

fn allowed(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "two_level_1" => &["profile", "lambda"],
        "two_level_2" => &["r"],
        "geometric" => &["trunc_dim"],
        "coherent" => &["M", "trunc_dim"],
        "counterexample31" => &[],
        "random" => &["dim", "seed", "commuting"],
        _ => return None,
    })
}

impl FamilySpec {
    /// Numeric parameters of `name` that a sweep may vary, or `None` for an
    /// unknown family.
    pub fn sweepable(name: &str) -> Option<&'static [&'static str]> {
        allowed(name)?;
        Some(match name {
            "two_level_1" => &["lambda"],
            "two_level_2" => &["r"],
            "coherent" => &["M"],
            _ => &[],
        })
    }

    pub fn from_entries(name: &str, entries: &[Entry]) -> Result<Self, ConfigError> {
        let keys = allowed(name).ok_or_else(|| {
            ConfigError::new(Span::default(), format!("unknown family `{name}` (expected one of {})", FAMILY_NAMES.join(", ")))
        })?;
        for e in entries {
            if !keys.contains(&e.key.as_str()) {
                return Err(ConfigError::new(e.key_span, format!("family `{name}` has no parameter `{}`", e.key)));
            }
        }
        let get = |k: &str| entries.iter().find(|e| e.key == k);
        let missing = |k: &str| ConfigError::new(Span::default(), format!("family `{name}` needs parameter `{k}`"));
        let positive_dim = |e: &Entry| -> Result<usize, ConfigError> {
            let n = e.integer()?;
            if n == 0 {
                return Err(e.error("dimension must be positive"));
            }
            Ok(n)
        };

        Ok(match name {
            "two_level_1" => {
                let lambda = get("lambda").map(|e| e.number()).transpose()?;
                match get("profile").map(|e| (e, e.value.as_str())) {
                    None => {}
                    Some((e, "tanh")) if lambda.is_some() => return Err(e.error("the tanh profile takes no `lambda`")),
                    Some((_, "tanh")) => {}
                    Some((e, "constant")) if lambda.is_none() => {
                        return Err(e.error("a constant profile needs `lambda`"))
                    }
                    Some((_, "constant")) => {}
                    Some((e, other)) => return Err(e.error(format!("unknown profile `{other}`"))),
                }
                if let (Some(l), Some(e)) = (lambda, get("lambda")) {
                    if !(l > 0.0 && l < 1.0) {
                        return Err(e.error("lambda must lie in (0, 1)"));
                    }
                }
                FamilySpec::TwoLevel1 { lambda }
            }
            "two_level_2" => {
                let e = get("r").ok_or_else(|| missing("r"))?;
                let r = e.number()?;
                TwoLevelFamily2::new(r).map_err(|_| e.error("r must lie in [0, 1)"))?;
                FamilySpec::TwoLevel2 { r }
            }
            "geometric" => FamilySpec::Geometric { trunc_dim: get("trunc_dim").map(positive_dim).transpose()? },
            "coherent" => {
                let e = get("M").ok_or_else(|| missing("M"))?;
                let m = e.number()?;
                if m <= 0.0 {
                    return Err(e.error("M must be positive"));
                }
                let trunc_dim = get("trunc_dim").map(positive_dim).transpose()?;
                if let (Some(n), Some(e)) = (trunc_dim, get("trunc_dim")) {
                    CoherentFamily::new(m, n).map_err(|err| e.error(err.to_string()))?;
                }
                FamilySpec::Coherent { m, trunc_dim }
            }
            "counterexample31" => FamilySpec::Counterexample,
            "random" => FamilySpec::Random {
                dim: get("dim").map(positive_dim).transpose()?.unwrap_or(4),
                seed: get("seed").map(|e| e.integer()).transpose()?.unwrap_or(0) as u64,
                commuting: get("commuting").map(|e| e.boolean()).transpose()?.unwrap_or(false),
            },
            _ => unreachable!(),
        })
    }

    /// Parses `k=v` pairs given on the command line.
    pub fn from_pairs(name: &str, pairs: &[String]) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        for p in pairs {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| ConfigError::new(Span::default(), format!("parameter `{p}` is not of the form k=v")))?;
            entries.push(Entry {
                key: k.trim().to_string(),
                value: v.trim().to_string(),
                key_span: Span::default(),
                value_span: Span::default(),
            });
        }
        Self::from_entries(name, &entries)
    }

    pub fn domain(&self) -> Interval {
        match self {
            FamilySpec::Geometric { .. } => Interval::new(0.0, f64::INFINITY),
            FamilySpec::Counterexample | FamilySpec::Random { .. } => Interval::new(-1.0, 1.0),
            _ => Interval::REAL_LINE,
        }
    }

    /// Builds whatever can be shared across θ.
    pub fn instantiate(&self) -> qfi_core::Result<Instance> {
        Ok(match self {
            FamilySpec::TwoLevel1 { lambda } => {
                let profile = lambda.map_or(LambdaProfile::Tanh, LambdaProfile::Constant);
                Instance::Fixed(TwoLevelFamily1::new(profile).family())
            }
            FamilySpec::TwoLevel2 { r } => Instance::Fixed(TwoLevelFamily2::new(*r)?.family()),
            FamilySpec::Geometric { trunc_dim: Some(n) } => Instance::Fixed(GeometricFamily::new(*n)?.family()),
            FamilySpec::Geometric { trunc_dim: None } => Instance::GeometricPerTheta,
            FamilySpec::Coherent { m, trunc_dim } => {
                let f = match trunc_dim {
                    Some(n) => CoherentFamily::new(*m, *n)?,
                    None => CoherentFamily::with_default_truncation(*m)?,
                };
                Instance::Fixed(f.family())
            }
            FamilySpec::Counterexample => Instance::Fixed(counterexample_family()),
            FamilySpec::Random { dim, seed, commuting } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Instance::Fixed(RandomAnalyticFamily::sample(*dim, *commuting, &mut rng)?.family())
            }
        })
    }
}

#[derive(Clone)]
pub enum Instance {
    Fixed(StateFamily),
    GeometricPerTheta,
}

impl Instance {
    pub fn at(&self, theta: f64) -> qfi_core::Result<StateFamily> {
        match self {
            Instance::Fixed(f) => Ok(f.clone()),
            Instance::GeometricPerTheta => Ok(GeometricFamily::for_theta(theta)?.family()),
        }
    }
}
