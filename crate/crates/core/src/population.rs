//! Role sampling and population regimes.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Rebel,
    Obedient,
    Undercover,
}

/// Rebel fraction `rho` and undercover probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationParams {
    pub rho: f64,
    pub undercover_prob: f64,
}

impl PopulationParams {
    pub fn new(rho: f64, undercover_prob: f64) -> Result<Self> {
        let params = PopulationParams {
            rho,
            undercover_prob,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !unit.contains(&self.rho) || !unit.contains(&self.undercover_prob) {
            return Err(Error::param(format!(
                "rho = {} and undercover_prob = {} must lie in [0, 1]",
                self.rho, self.undercover_prob
            )));
        }
        if self.rho + self.undercover_prob > 1.0 {
            return Err(Error::param(format!(
                "rho + undercover_prob = {} exceeds 1",
                self.rho + self.undercover_prob
            )));
        }
        Ok(())
    }

    /// Expected fraction of agents that end up rebels.
    pub fn rebel_fraction(&self) -> f64 {
        self.rho * (1.0 - self.undercover_prob)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleAssignment {
    roles: Vec<Role>,
}

impl RoleAssignment {
    pub fn from_roles(roles: Vec<Role>) -> Self {
        RoleAssignment { roles }
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn into_roles(self) -> Vec<Role> {
        self.roles
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn count(&self, role: Role) -> usize {
        self.roles.iter().filter(|&&r| r == role).count()
    }

    pub fn get(&self, i: usize) -> Role {
        self.roles[i]
    }
}

/// Independent role draws: each agent is undercover with probability `u`,
/// otherwise a rebel with probability `rho`, otherwise obedient.
pub fn sample_roles<R: Rng + ?Sized>(n: usize, params: &PopulationParams, rng: &mut R) -> Result<RoleAssignment> {
    params.validate()?;
    let roles = (0..n)
        .map(|_| {
            if rng.random_bool(params.undercover_prob) {
                Role::Undercover
            } else if rng.random_bool(params.rho) {
                Role::Rebel
            } else {
                Role::Obedient
            }
        })
        .collect();
    Ok(RoleAssignment { roles })
}

/// Role sampler with optional planted agents.
///
/// `planted_undercover` agents are placed uniformly at random first. If
/// `planted_rebels` is set, exactly that many of the remaining agents become
/// rebels and the rest are obedient; otherwise the remaining agents are drawn
/// independently from `params` (with the undercover draw still applied).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleSampler {
    pub params: PopulationParams,
    pub planted_rebels: Option<usize>,
    pub planted_undercover: usize,
}

impl RoleSampler {
    pub fn independent(params: PopulationParams) -> Self {
        RoleSampler {
            params,
            planted_rebels: None,
            planted_undercover: 0,
        }
    }

    /// The `rho` a trial under this sampler is reported with.
    pub fn effective_rho(&self, n: usize) -> f64 {
        match self.planted_rebels {
            Some(k) => k as f64 / n as f64,
            None => self.params.rho,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<RoleAssignment> {
        self.params.validate()?;
        let planted = self.planted_undercover + self.planted_rebels.unwrap_or(0);
        if planted > n {
            return Err(Error::param(format!("{planted} planted agents exceed n = {n}")));
        }
        if self.planted_undercover == 0 && self.planted_rebels.is_none() {
            return sample_roles(n, &self.params, rng);
        }
        let mut roles = vec![Role::Obedient; n];
        let chosen = index::sample(rng, n, planted);
        let mut chosen = chosen.iter();
        for i in chosen.by_ref().take(self.planted_undercover) {
            roles[i] = Role::Undercover;
        }
        match self.planted_rebels {
            Some(_) => {
                for i in chosen {
                    roles[i] = Role::Rebel;
                }
            }
            None => {
                for role in roles.iter_mut().filter(|r| **r != Role::Undercover) {
                    *role = if rng.random_bool(self.params.undercover_prob) {
                        Role::Undercover
                    } else if rng.random_bool(self.params.rho) {
                        Role::Rebel
                    } else {
                        Role::Obedient
                    };
                }
            }
        }
        Ok(RoleAssignment { roles })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Many,
    Few,
    Neither,
}

pub const MANY_THRESHOLD: f64 = 0.8;
pub const FEW_THRESHOLD: f64 = 0.2;

pub fn regime(rho: f64) -> Regime {
    if rho >= MANY_THRESHOLD {
        Regime::Many
    } else if rho <= FEW_THRESHOLD {
        Regime::Few
    } else {
        Regime::Neither
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Many => "many",
            Regime::Few => "few",
            Regime::Neither => "neither",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn degenerate_rho() {
        let mut r = rng::seeded(1);
        let all = sample_roles(50, &PopulationParams::new(1.0, 0.0).unwrap(), &mut r).unwrap();
        assert_eq!(all.count(Role::Rebel), 50);
        let none = sample_roles(50, &PopulationParams::new(0.0, 0.0).unwrap(), &mut r).unwrap();
        assert_eq!(none.count(Role::Obedient), 50);
    }

    #[test]
    fn rebel_count_concentrates() {
        let n = 100_000;
        let roles = sample_roles(n, &PopulationParams::new(0.8, 0.0).unwrap(), &mut rng::seeded(3)).unwrap();
        let count = roles.count(Role::Rebel) as f64;
        let bound = 4.0 * (n as f64 * 0.8 * 0.2).sqrt();
        assert!((count - 80_000.0).abs() < bound, "{count}");
    }

    #[test]
    fn undercover_first_composition() {
        let n = 200_000;
        let params = PopulationParams::new(0.5, 0.1).unwrap();
        let roles = sample_roles(n, &params, &mut rng::seeded(9)).unwrap();
        let p = params.rebel_fraction();
        let rebels = roles.count(Role::Rebel) as f64;
        assert!((rebels / n as f64 - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
        let u = roles.count(Role::Undercover) as f64 / n as f64;
        assert!((u - 0.1).abs() < 4.0 * (0.09 / n as f64).sqrt());
    }

    #[test]
    fn invalid_params() {
        assert!(PopulationParams::new(1.2, 0.0).is_err());
        assert!(PopulationParams::new(0.9, 0.2).is_err());
        assert!(PopulationParams::new(0.5, -0.1).is_err());
    }

    #[test]
    fn planted_agents() {
        let sampler = RoleSampler {
            params: PopulationParams::new(0.0, 0.0).unwrap(),
            planted_rebels: Some(1),
            planted_undercover: 0,
        };
        let roles = sampler.sample(100, &mut rng::seeded(4)).unwrap();
        assert_eq!(roles.count(Role::Rebel), 1);
        assert_eq!(roles.count(Role::Obedient), 99);
        assert_eq!(sampler.effective_rho(100), 0.01);

        let spy = RoleSampler {
            params: PopulationParams::new(0.2, 0.0).unwrap(),
            planted_rebels: None,
            planted_undercover: 1,
        };
        let roles = spy.sample(1000, &mut rng::seeded(5)).unwrap();
        assert_eq!(roles.count(Role::Undercover), 1);
        assert!(roles.count(Role::Rebel) > 100);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let params = PopulationParams::new(0.3, 0.05).unwrap();
        let a = sample_roles(500, &params, &mut rng::seeded(8)).unwrap();
        let b = sample_roles(500, &params, &mut rng::seeded(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn regimes() {
        assert_eq!(regime(0.8), Regime::Many);
        assert_eq!(regime(0.2), Regime::Few);
        assert_eq!(regime(0.5), Regime::Neither);
        assert_eq!(regime(1.0), Regime::Many);
        assert_eq!(regime(0.0), Regime::Few);
    }
}
