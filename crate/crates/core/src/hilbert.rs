//! Basis labelling of the truncated spinor space `H = H+ ⊕ H-`.
//!
//! Each chirality block carries the half-integer spin towers
//! `V_{1/2} ⊕ V_{3/2} ⊕ ... ⊕ V_{n-1/2}`. Vectors are ordered Plus block
//! first, then by `l` ascending, then by `m` from `-l` to `l`.

use thiserror::Error;

use crate::operators::LinearOp;
use crate::qnum::HalfInt;

pub const DEFAULT_MARGIN: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("truncation needs at least one shell")]
    NoShells,
    #[error("empty interior: margin {margin} leaves no shell below the cutoff of {shells} shells")]
    EmptyInterior { shells: u32, margin: u32 },
    #[error("invalid basis label l = {l}, m = {m}")]
    InvalidLabel { l: HalfInt, m: HalfInt },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Chirality::Plus => 1.0,
            Chirality::Minus => -1.0,
        }
    }
}

/// A label `|l, m>_±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub l: HalfInt,
    pub m: HalfInt,
    pub chirality: Chirality,
}

impl BasisIndex {
    pub fn new(l: HalfInt, m: HalfInt, chirality: Chirality) -> Result<Self, HilbertError> {
        let ok = !l.is_integer() && l >= HalfInt::HALF && m.abs() <= l && (l - m).is_integer();
        if ok {
            Ok(Self { l, m, chirality })
        } else {
            Err(HilbertError::InvalidLabel { l, m })
        }
    }

    /// Zero-based shell number, `l - 1/2`.
    #[inline]
    pub fn shell(&self) -> u32 {
        ((self.l.twice() - 1) / 2) as u32
    }
}

/// Shell cutoff plus the interior margin used by identity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    shells: u32,
    margin: u32,
}

impl Truncation {
    pub fn new(shells: u32, margin: u32) -> Result<Self, HilbertError> {
        if shells == 0 {
            return Err(HilbertError::NoShells);
        }
        Ok(Self { shells, margin })
    }

    pub fn with_default_margin(shells: u32) -> Result<Self, HilbertError> {
        Self::new(shells, DEFAULT_MARGIN)
    }

    #[inline]
    pub fn shells(&self) -> u32 {
        self.shells
    }

    #[inline]
    pub fn margin(&self) -> u32 {
        self.margin
    }

    /// Same cutoff with a different margin.
    pub fn with_margin(&self, margin: u32) -> Self {
        Self { shells: self.shells, margin }
    }

    /// Largest included `l`, `n - 1/2`.
    pub fn l_max(&self) -> HalfInt {
        HalfInt::from_twice(2 * self.shells as i32 - 1)
    }

    pub fn block_dim(&self) -> usize {
        let n = self.shells as usize;
        n * (n + 1)
    }

    pub fn dim(&self) -> usize {
        2 * self.block_dim()
    }

    pub fn contains(&self, l: HalfInt) -> bool {
        l >= HalfInt::HALF && l <= self.l_max() && !l.is_integer()
    }

    /// Position of `idx`, or `None` when its shell is cut off.
    pub fn position(&self, idx: &BasisIndex) -> Option<usize> {
        if !self.contains(idx.l) || idx.m.abs() > idx.l {
            return None;
        }
        let k = idx.shell() as usize;
        let offset = match idx.chirality {
            Chirality::Plus => 0,
            Chirality::Minus => self.block_dim(),
        };
        Some(offset + k * (k + 1) + ((idx.m + idx.l).twice() / 2) as usize)
    }

    pub fn enumerate(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for chirality in [Chirality::Plus, Chirality::Minus] {
            for k in 0..self.shells as i32 {
                let l = HalfInt::from_twice(2 * k + 1);
                let mut m = -l;
                while m <= l {
                    out.push(BasisIndex { l, m, chirality });
                    m = m + 1;
                }
            }
        }
        out
    }

    /// Largest `l` of the interior at `margin + extra_margin`.
    pub fn interior_l_max(&self, extra_margin: u32) -> Result<HalfInt, HilbertError> {
        let margin = self.margin + extra_margin;
        if margin >= self.shells {
            return Err(HilbertError::EmptyInterior { shells: self.shells, margin });
        }
        Ok(self.l_max() - margin as i32)
    }

    /// Orthogonal projector onto the interior shells.
    pub fn interior_projector(&self, extra_margin: u32) -> Result<LinearOp, HilbertError> {
        let lmax = self.interior_l_max(extra_margin)?;
        Ok(LinearOp::diagonal(
            self.enumerate().iter().map(|b| if b.l <= lmax { 1.0 } else { 0.0 }),
        ))
    }

    /// Interior projector further restricted to one chirality block.
    pub fn block_interior_projector(
        &self,
        chirality: Chirality,
        extra_margin: u32,
    ) -> Result<LinearOp, HilbertError> {
        let lmax = self.interior_l_max(extra_margin)?;
        Ok(LinearOp::diagonal(self.enumerate().iter().map(|b| {
            if b.l <= lmax && b.chirality == chirality {
                1.0
            } else {
                0.0
            }
        })))
    }
}
