//! Controlled single-coefficient perturbations.
//!
//! A [`Mutation`] threads through the operator builders so the verification
//! suite can be shown to reject a construction that is wrong by a small
//! relative amount.

use serde::Serialize;

use crate::qnum::HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum Perturbation {
    /// `α⁰_l` at one shell.
    Alpha0 { l: HalfInt },
    /// `α⁺_l` at one shell; `α⁻_{l+1}` follows it.
    AlphaPlus { l: HalfInt },
    /// The constant `1/(1+q²)` in the diagonal part of `π(A)`.
    AConstant,
    /// The phase of one column `|l,m⟩_+` of `J`.
    JPhase { l: HalfInt, m: HalfInt },
    /// The Dirac eigenvalue on one shell, both chiralities.
    DiracEigenvalue { l: HalfInt },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mutation {
    #[serde(flatten)]
    pub target: Perturbation,
    pub relative: f64,
}

impl Mutation {
    pub fn new(target: Perturbation, relative: f64) -> Self {
        Self { target, relative }
    }

    fn factor(&self, hit: bool) -> f64 {
        if hit {
            1.0 + self.relative
        } else {
            1.0
        }
    }

    pub fn alpha0(&self, l: HalfInt) -> f64 {
        self.factor(matches!(self.target, Perturbation::Alpha0 { l: t } if t == l))
    }

    pub fn alpha_plus(&self, l: HalfInt) -> f64 {
        self.factor(matches!(self.target, Perturbation::AlphaPlus { l: t } if t == l))
    }

    pub fn a_constant(&self) -> f64 {
        self.factor(matches!(self.target, Perturbation::AConstant))
    }

    pub fn j_phase(&self, l: HalfInt, m: HalfInt) -> f64 {
        self.factor(matches!(self.target, Perturbation::JPhase { l: tl, m: tm } if tl == l && tm == m))
    }

    pub fn dirac(&self, l: HalfInt) -> f64 {
        self.factor(matches!(self.target, Perturbation::DiracEigenvalue { l: t } if t == l))
    }
}

/// Applies an optional mutation's factor, `1` when absent.
pub(crate) fn factor(m: Option<&Mutation>, f: impl FnOnce(&Mutation) -> f64) -> f64 {
    m.map_or(1.0, f)
}
