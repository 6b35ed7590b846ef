//! Exact-arithmetic toolkit for Inoue surfaces of types S0, S+ and S-.
//!
//! A surface is described by its integer defining data (a hyperbolic matrix,
//! twist integers `p, q, r`, an orientation sign). The crate decides homotopy
//! equivalence between such descriptions by group-theoretic criteria, builds
//! and verifies explicit biholomorphisms on the upper-half-plane model, and
//! enumerates deformation-class representatives (at most 16 for S+, 8 for S-,
//! exactly 2 for S0). All structural decisions run in exact integer or
//! quadratic-field arithmetic; floating point is used only to spot-check maps
//! on H x C against a fixed sample grid.

pub mod census;
pub mod cli;
pub mod equivalence;
pub mod exact;
pub mod gamma_r;
pub mod groups;
pub mod surfaces;

use serde::{Deserialize, Serialize};

/// The three Inoue surface types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "S0")]
    S0,
    #[serde(rename = "S+")]
    SPlus,
    #[serde(rename = "S-")]
    SMinus,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::S0 => "S0",
            Kind::SPlus => "S+",
            Kind::SMinus => "S-",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bounds for the bounded searches (conjugators, translation offsets).
///
/// Absence of a witness within a bound is reported as inconclusive, never as
/// a proof of inequivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Coefficient box for GL(2,Z) conjugator and centralizer-unit searches.
    pub conjugator: u32,
    /// Box for the translation offset eta = (l1, l2) in the map builders.
    pub eta: i64,
    /// Coefficient box for the GL(3,Z) conjugator search (S0).
    pub s0: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            conjugator: 64,
            eta: 8,
            s0: 16,
        }
    }
}

impl SearchBounds {
    /// Apply overrides of the form `conjugator=64,eta=8,s0=16` (any subset,
    /// any order), as accepted from the `INOUE_DEFAULT_BOUNDS` environment
    /// variable.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, String> {
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
            let value = value.trim();
            match key.trim() {
                "conjugator" => {
                    self.conjugator = value.parse().map_err(|e| format!("conjugator: {e}"))?
                }
                "eta" => self.eta = value.parse().map_err(|e| format!("eta: {e}"))?,
                "s0" => self.s0 = value.parse().map_err(|e| format!("s0: {e}"))?,
                other => return Err(format!("unknown bound `{other}`")),
            }
        }
        Ok(self)
    }

    /// Bounds from `SearchBounds::default()` adjusted by the
    /// `INOUE_DEFAULT_BOUNDS` environment variable when it is set.
    pub fn from_env() -> Self {
        match std::env::var("INOUE_DEFAULT_BOUNDS") {
            Ok(spec) => SearchBounds::default()
                .with_overrides(&spec)
                .unwrap_or_default(),
            Err(_) => SearchBounds::default(),
        }
    }
}
