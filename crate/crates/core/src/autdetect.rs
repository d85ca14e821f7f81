//! Automorphism detection for `G = ⟨a, b; Sⁿ⟩`.
//!
//! A basis-preserving map of F(a, b) induces an automorphism of G exactly
//! when it carries `S` to a conjugate of `S` or of `S⁻¹`. Roots are unique up
//! to conjugacy in a free group, so the test runs on `S` rather than `Sⁿ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::GenMap;
use crate::words::{cyclically_equal, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AutVerdict {
    NotAut,
    FixesRelator,
    InvertsRelator,
}

impl AutVerdict {
    pub fn is_aut(self) -> bool {
        self != AutVerdict::NotAut
    }
}

pub fn is_relator_auto(s: &Word, m: &GenMap) -> Result<AutVerdict> {
    if !m.is_basis() {
        return Err(Error::NotBasis(m.to_string()));
    }
    Ok(relator_verdict(s, m))
}

/// The verdict without the basis check; `m` must already be known invertible.
pub(crate) fn relator_verdict(s: &Word, m: &GenMap) -> AutVerdict {
    let (s, _) = s.cyclic_reduce();
    let (image, _) = m.apply(&s).cyclic_reduce();
    if image.len() != s.len() {
        AutVerdict::NotAut
    } else if cyclically_equal(&image, &s) {
        AutVerdict::FixesRelator
    } else if cyclically_equal(&image, &s.inverse()) {
        AutVerdict::InvertsRelator
    } else {
        AutVerdict::NotAut
    }
}
