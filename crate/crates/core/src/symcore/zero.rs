//! Semi-decision procedure for `e == 0`.
//!
//! Exact normalization proves zero for the rational fragment. When kernels
//! block a proof the expression is probed at seeded random rational points.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::CompiledPoly;
use super::{Poly, SymError, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTestConfig {
    pub probes: usize,
    /// Relative tolerance: a probe counts as zero when
    /// `|value| <= tolerance * Σ|term values|`.
    pub tolerance: f64,
    pub seed: u64,
    pub max_denominator: u32,
    /// Coordinates are drawn from `[-range, range]`.
    pub range: u32,
    /// Draws allowed per required probe before giving up on singular points.
    pub attempts_per_probe: usize,
}

impl Default for ZeroTestConfig {
    fn default() -> Self {
        ZeroTestConfig {
            probes: 32,
            tolerance: 1e-9,
            seed: 0,
            max_denominator: 64,
            range: 2,
            attempts_per_probe: 50,
        }
    }
}

impl ZeroTestConfig {
    pub fn with_seed(seed: u64) -> Self {
        ZeroTestConfig { seed, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroVerdict {
    ProvedZero,
    NumericallyZero { probes: usize, tolerance: f64 },
    Nonzero { witness: Vec<(Var, f64)>, value: f64, scale: f64 },
}

impl ZeroVerdict {
    /// Zero either by proof or by passing every probe.
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::Nonzero { .. })
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, ZeroVerdict::ProvedZero)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::ProvedZero => "ProvedZero",
            ZeroVerdict::NumericallyZero { .. } => "NumericallyZero",
            ZeroVerdict::Nonzero { .. } => "Nonzero",
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, cfg: &ZeroTestConfig) -> f64 {
    let den = rng.gen_range(1..=cfg.max_denominator.max(1)) as i64;
    let bound = den * cfg.range as i64;
    let num = rng.gen_range(-bound..=bound);
    num as f64 / den as f64
}

pub fn is_zero(e: &Poly, cfg: &ZeroTestConfig) -> Result<ZeroVerdict, SymError> {
    if e.is_zero() {
        return Ok(ZeroVerdict::ProvedZero);
    }
    let vars: Vec<Var> = e.vars().into_iter().collect();
    let compiled = CompiledPoly::new(e);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_attempts = cfg.probes.max(1) * cfg.attempts_per_probe.max(1);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < cfg.probes {
        if attempts == max_attempts {
            return Err(SymError::ProbeDomainExhausted { attempts });
        }
        attempts += 1;
        let point: BTreeMap<Var, f64> = vars.iter().map(|v| (*v, draw(&mut rng, cfg))).collect();
        let (value, scale) = match compiled.eval_with_scale(&point) {
            Ok(vs) => vs,
            Err(SymError::DomainError(_)) => continue,
            Err(other) => return Err(other),
        };
        if value.abs() > cfg.tolerance * scale {
            return Ok(ZeroVerdict::Nonzero { witness: point.into_iter().collect(), value, scale });
        }
        accepted += 1;
    }
    Ok(ZeroVerdict::NumericallyZero { probes: accepted, tolerance: cfg.tolerance })
}
