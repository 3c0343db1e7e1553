use crate::error::{Error, Result};

/// Enumeration guardrails. Validators and constructions refuse inputs or
/// outputs beyond these sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBounds {
    pub max_obs: usize,
    pub max_ones: usize,
    pub max_twos: usize,
    /// Largest functor pool accepted by direct universal-property checks.
    pub max_pool: usize,
    /// Largest number of raw candidates an exhaustive search may visit.
    pub max_candidates: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds {
            max_obs: 64,
            max_ones: 512,
            max_twos: 4096,
            max_pool: 4,
            max_candidates: 1_000_000,
        }
    }
}

impl SizeBounds {
    pub fn unbounded() -> Self {
        SizeBounds {
            max_obs: usize::MAX,
            max_ones: usize::MAX,
            max_twos: usize::MAX,
            max_pool: usize::MAX,
            max_candidates: usize::MAX,
        }
    }

    pub(crate) fn check(what: &str, actual: usize, limit: usize) -> Result<()> {
        if actual > limit {
            Err(Error::SizeLimit {
                what: what.to_string(),
                actual,
                limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_bicategory(&self, obs: usize, ones: usize, twos: usize) -> Result<()> {
        Self::check("0-cells", obs, self.max_obs)?;
        Self::check("1-cells", ones, self.max_ones)?;
        Self::check("2-cells", twos, self.max_twos)
    }

    /// Categories are bounded like the hom-level of a bicategory: objects by
    /// the 1-cell bound, morphisms by the 2-cell bound.
    pub fn check_category(&self, objects: usize, morphisms: usize) -> Result<()> {
        Self::check("objects", objects, self.max_ones)?;
        Self::check("morphisms", morphisms, self.max_twos)
    }

    pub fn check_candidates(&self, what: &str, count: usize) -> Result<()> {
        Self::check(what, count, self.max_candidates)
    }
}
