//! Truncation orders shared by every computation.

use serde::{Deserialize, Serialize};

use crate::element::Key;
use crate::error::{Error, Result};

/// All truncation orders of a run.
///
/// * `jet_order` caps the total base degree of 0-forms; `k`-forms get the
///   cap `jet_order - k`. It is also the jet order of the Whitney quotient.
/// * `fedosov_order` caps `|beta| + 2·(h power)`.
/// * `[hbar_min, hbar_order]` is the retained window of `h` powers.
///
/// `jet_cap` switches the base-degree cap off for computations that must stay
/// exact in the base variables (the Fedosov recursion runs with it off, since
/// the homotopy `delta_inv` does not respect the base-degree schedule).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub n: usize,
    pub jet_order: u32,
    pub fedosov_order: u32,
    pub hbar_order: i32,
    pub hbar_min: i32,
    #[serde(default = "default_true")]
    pub jet_cap: bool,
}

fn default_true() -> bool {
    true
}

impl TruncationPolicy {
    pub fn new(n: usize, jet_order: u32, fedosov_order: u32, hbar_order: i32) -> Self {
        TruncationPolicy { n, jet_order, fedosov_order, hbar_order, hbar_min: 0, jet_cap: true }
    }

    /// Effectively no truncation; for pure identities.
    pub fn unbounded(n: usize) -> Self {
        TruncationPolicy {
            n,
            jet_order: u32::MAX / 4,
            fedosov_order: u32::MAX / 4,
            hbar_order: i32::MAX / 4,
            hbar_min: i32::MIN / 4,
            jet_cap: false,
        }
    }

    pub fn without_jet_cap(&self) -> Self {
        TruncationPolicy { jet_cap: false, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || 2 * self.n > crate::element::MAX_DIM {
            return Err(Error::Invalid(format!("half-dimension n = {} outside 1..=4", self.n)));
        }
        if self.hbar_min > self.hbar_order {
            return Err(Error::Invalid(format!(
                "empty h window [{}, {}]",
                self.hbar_min, self.hbar_order
            )));
        }
        Ok(())
    }

    /// Base-degree cap for `k`-forms, `None` when the schedule leaves no room.
    pub fn base_cap(&self, k: usize) -> Option<u32> {
        self.jet_order.checked_sub(k as u32)
    }

    #[inline]
    pub fn keeps(&self, key: &Key) -> bool {
        if key.hbar > self.hbar_order || key.hbar < self.hbar_min {
            return false;
        }
        let fd = key.fedosov_degree();
        if fd > self.fedosov_order as i64 {
            return false;
        }
        if self.jet_cap {
            match self.base_cap(key.form_degree()) {
                Some(cap) => key.alpha.degree() <= cap,
                None => false,
            }
        } else {
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::MultiIndex;

    #[test]
    fn schedule() {
        let p = TruncationPolicy::new(1, 2, 4, 1);
        let mut k = Key::one();
        k.alpha = MultiIndex::from_slice(&[2, 0]);
        assert!(p.keeps(&k));
        k.forms = 1;
        assert!(!p.keeps(&k));
        assert!(p.without_jet_cap().keeps(&k));
        let mut y = Key::one();
        y.beta = MultiIndex::from_slice(&[3, 0]);
        assert!(p.keeps(&y));
        y.hbar = 1;
        assert!(!p.keeps(&y));
    }
}
