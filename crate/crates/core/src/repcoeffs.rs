//! Matrix coefficients of the two equivariant representations `π±`.
//!
//! In the basis `|l,m⟩` of `V_{1/2} ⊕ V_{3/2} ⊕ ...` each generator moves
//! `l` by at most one step:
//!
//! ```text
//! B  |l,m⟩ = B⁺ |l+1,m+1⟩ + B⁰ |l,m+1⟩ + B⁻ |l-1,m+1⟩
//! B* |l,m⟩ = B̃⁺ |l+1,m-1⟩ + B̃⁰ |l,m-1⟩ + B̃⁻ |l-1,m-1⟩
//! A  |l,m⟩ = A⁺ |l+1,m⟩   + A⁰ |l,m⟩   + A⁻ |l-1,m⟩
//! ```
//!
//! All coefficients are closed forms in the three shell functions `α⁰_l`,
//! `α⁺_l`, `α⁻_l`. The recurrences those functions satisfy are exposed as
//! residual functions so they can be checked independently of the closed
//! forms.

use serde::Serialize;

use crate::mutation::{factor, Mutation};
use crate::qnum::{HalfInt, QContext};

/// Which of the two inequivalent representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    #[serde(rename = "pi+")]
    PiPlus,
    #[serde(rename = "pi-")]
    PiMinus,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::PiPlus => "pi+",
            Variant::PiMinus => "pi-",
        }
    }
}

/// Change of `l` produced by one term of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shift {
    Up,
    Same,
    Down,
}

impl Shift {
    pub const ALL: [Shift; 3] = [Shift::Up, Shift::Same, Shift::Down];

    pub fn delta(self) -> i32 {
        match self {
            Shift::Up => 1,
            Shift::Same => 0,
            Shift::Down => -1,
        }
    }
}

fn valid(l: HalfInt, m: HalfInt) -> bool {
    l >= HalfInt::HALF && !l.is_integer() && m.abs() <= l && (l - m).is_integer()
}

/// Shell functions and coefficients of one representation.
#[derive(Clone, Debug)]
pub struct CoeffSet {
    ctx: QContext,
    variant: Variant,
    mutation: Option<Mutation>,
}

impl CoeffSet {
    pub fn new(ctx: QContext, variant: Variant) -> Self {
        Self { ctx, variant, mutation: None }
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    fn qn(&self, x: f64) -> f64 {
        self.ctx.qn(x)
    }

    fn qp(&self, x: f64) -> f64 {
        self.ctx.qp(x)
    }

    /// `sqrt([a][b])`, zero when either factor is non-positive.
    fn sqrt_pair(&self, a: f64, b: f64) -> f64 {
        if a <= 0.0 || b <= 0.0 {
            0.0
        } else {
            self.ctx.sqrt_qn(a) * self.ctx.sqrt_qn(b)
        }
    }

    pub fn alpha0(&self, l: HalfInt) -> f64 {
        if l < HalfInt::HALF {
            return 0.0;
        }
        let mutation = factor(self.mutation.as_ref(), |m| m.alpha0(l));
        let q = self.ctx.q();
        let l = l.value();
        let shift = match self.variant {
            Variant::PiPlus => q,
            Variant::PiMinus => -1.0 / q,
        };
        let (d1, d2) = (self.qn(2.0 * l), self.qn(2.0 * l + 2.0));
        // split so no single product approaches the f64 range
        let grow = (q - 1.0 / q) * (self.qn(l - 0.5) / d1) * (self.qn(l + 1.5) / d2);
        let value = (grow + shift / d1 / d2) / q.sqrt();
        value * mutation
    }

    /// `α⁺_l`, positive root; zero below `l = 1/2`.
    pub fn alpha_plus(&self, l: HalfInt) -> f64 {
        if l < HalfInt::HALF {
            return 0.0;
        }
        let mutation = factor(self.mutation.as_ref(), |m| m.alpha_plus(l));
        let l = l.value();
        let exponent = match self.variant {
            Variant::PiPlus => -l - 2.0,
            Variant::PiMinus => -l - 1.0,
        };
        // ln of [2l+2]([4l+4] + [2][2l+2]) without forming the product
        let ln_a = self.ctx.ln_qn(2.0 * l + 2.0);
        let ln_b = self.ctx.ln_qn(4.0 * l + 4.0);
        let ratio = (self.ctx.ln_qn(2.0) + ln_a - ln_b).exp();
        let ln_radical = ln_a + ln_b + ratio.ln_1p();
        (exponent * self.ctx.log_q() - 0.5 * ln_radical).exp() * mutation
    }

    /// `α⁻_l = -q^{2l} α⁺_{l-1}`; zero for `l = 1/2` where it multiplies a vanishing factor.
    pub fn alpha_minus(&self, l: HalfInt) -> f64 {
        if l < HalfInt::from_twice(3) {
            return 0.0;
        }
        -self.qp(2.0 * l.value()) * self.alpha_plus(l - 1)
    }

    /// Coefficient of `|l+j, m+1⟩` in `B|l,m⟩`.
    pub fn b(&self, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
        if !valid(l, m) {
            return 0.0;
        }
        let (lv, mv) = (l.value(), m.value());
        let qm = self.qp(mv);
        match j {
            Shift::Up => qm * self.sqrt_pair(lv + mv + 1.0, lv + mv + 2.0) * self.alpha_plus(l),
            Shift::Same => qm * self.sqrt_pair(lv + mv + 1.0, lv - mv) * self.alpha0(l),
            Shift::Down => qm * self.sqrt_pair(lv - mv, lv - mv - 1.0) * self.alpha_minus(l),
        }
    }

    /// Coefficient of `|l+j, m-1⟩` in `B*|l,m⟩`.
    pub fn b_star(&self, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
        if !valid(l, m) {
            return 0.0;
        }
        let (lv, mv) = (l.value(), m.value());
        let qm = self.qp(mv - 1.0);
        match j {
            Shift::Up => qm * self.sqrt_pair(lv - mv + 2.0, lv - mv + 1.0) * self.alpha_minus(l + 1),
            Shift::Same => qm * self.sqrt_pair(lv + mv, lv - mv + 1.0) * self.alpha0(l),
            Shift::Down => qm * self.sqrt_pair(lv + mv, lv + mv - 1.0) * self.alpha_plus(l - 1),
        }
    }

    /// Coefficient of `|l+j, m⟩` in `A|l,m⟩`.
    pub fn a(&self, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
        if !valid(l, m) {
            return 0.0;
        }
        let q = self.ctx.q();
        let (lv, mv) = (l.value(), m.value());
        match j {
            Shift::Up => {
                -self.qp(mv + lv + 0.5) * self.sqrt_pair(lv - mv + 1.0, lv + mv + 1.0) * self.alpha_plus(l)
            }
            Shift::Same => {
                let bracket = self.qn(lv - mv + 1.0) * self.qn(lv + mv)
                    - q * q * self.qn(lv - mv) * self.qn(lv + mv + 1.0);
                let constant = factor(self.mutation.as_ref(), Mutation::a_constant) / (1.0 + q * q);
                bracket * self.alpha0(l) / (q.sqrt() * (1.0 + q * q)) + constant
            }
            Shift::Down => {
                self.qp(mv - lv - 0.5) * self.sqrt_pair(lv - mv, lv + mv) * self.alpha_minus(l)
            }
        }
    }

    /// Relative residual of `α⁰_{l+1}[2l+4] = α⁰_l[2l] + (q - q⁻¹)/√q`.
    pub fn alpha0_recurrence_residual(&self, l: HalfInt) -> f64 {
        let q = self.ctx.q();
        let lv = l.value();
        let lhs = self.alpha0(l + 1) * self.qn(2.0 * lv + 4.0);
        let t1 = self.alpha0(l) * self.qn(2.0 * lv);
        let t2 = (q - 1.0 / q) / q.sqrt();
        relative(lhs - t1 - t2, &[lhs, t1, t2])
    }

    /// Relative residual of the `m`-recursion that `f` imposes on `B^j_{l,m}`:
    /// `q⁻¹ B^j_{l,m+1} √([l-m][l+m+1]) = B^j_{l,m} √([l+j-m-1][l+j+m+2])`.
    pub fn b_recursion_residual(&self, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
        let (lv, mv, jv) = (l.value(), m.value(), f64::from(j.delta()));
        let lhs = self.b(j, l, m + 1) * self.sqrt_pair(lv - mv, lv + mv + 1.0) / self.ctx.q();
        let rhs = self.b(j, l, m) * self.sqrt_pair(lv + jv - mv - 1.0, lv + jv + mv + 2.0);
        relative(lhs - rhs, &[lhs, rhs])
    }

    /// Relative residual of `(α⁺_{1/2})² = q^{-4∓1} / ([3]²[4])`.
    pub fn initial_value_residual(&self) -> f64 {
        let sign = match self.variant {
            Variant::PiPlus => 1.0,
            Variant::PiMinus => -1.0,
        };
        let lhs = self.alpha_plus(HalfInt::HALF).powi(2);
        let rhs = self.qp(-4.0 - sign) / (self.qn(3.0).powi(2) * self.qn(4.0));
        relative(lhs - rhs, &[lhs, rhs])
    }

    /// Residuals of the two quadratic relations between `α⁺_l`, `α⁺_{l-1}`
    /// and `α⁰_l` that come from `B*B - q⁴BB* = (1-q²)A`; each is scaled by
    /// its largest term.
    pub fn quadratic_residuals(&self, l: HalfInt) -> (f64, f64) {
        let q = self.ctx.q();
        let lv = l.value();
        let ap = self.alpha_plus(l);
        let apm = self.alpha_plus(l - 1);
        let a0 = self.alpha0(l);
        let n = |x: f64| self.qn(x);
        let ratio = n(4.0 * lv + 2.0) / n(2.0 * lv + 1.0);
        let dq = q - 1.0 / q;
        let first = [
            ap * ap * self.qp(2.0 * lv + 3.0) * n(2.0 * lv + 3.0) * n(2.0),
            -apm * apm * self.qp(2.0 * lv + 1.0) * n(2.0 * lv - 1.0) * n(2.0),
            -a0 * a0 * q * ratio,
            a0 * q.sqrt() * dq,
        ];
        let second = [
            -ap * ap * self.qp(2.0 * lv + 3.0) * n(4.0 * lv + 6.0) * n(2.0),
            apm * apm * self.qp(2.0 * lv + 1.0) * n(4.0 * lv - 2.0) * n(2.0),
            a0 * a0 * q * n(2.0).powi(2),
            -a0 * q.sqrt() * dq * ratio,
            dq * dq,
        ];
        (relative(first.iter().sum(), &first), relative(second.iter().sum(), &second))
    }
}

fn relative(diff: f64, terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
    if scale == 0.0 {
        diff.abs()
    } else {
        diff.abs() / scale
    }
}

pub fn alpha0(ctx: &QContext, variant: Variant, l: HalfInt) -> f64 {
    CoeffSet::new(*ctx, variant).alpha0(l)
}

pub fn alpha_plus(ctx: &QContext, variant: Variant, l: HalfInt) -> f64 {
    CoeffSet::new(*ctx, variant).alpha_plus(l)
}

pub fn alpha_minus(ctx: &QContext, variant: Variant, l: HalfInt) -> f64 {
    CoeffSet::new(*ctx, variant).alpha_minus(l)
}

pub fn coeff_b(ctx: &QContext, variant: Variant, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
    CoeffSet::new(*ctx, variant).b(j, l, m)
}

pub fn coeff_b_star(ctx: &QContext, variant: Variant, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
    CoeffSet::new(*ctx, variant).b_star(j, l, m)
}

pub fn coeff_a(ctx: &QContext, variant: Variant, j: Shift, l: HalfInt, m: HalfInt) -> f64 {
    CoeffSet::new(*ctx, variant).a(j, l, m)
}
