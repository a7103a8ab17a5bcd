//! Matrices of the spectral triple on a truncated spinor space.
//!
//! Generators that would leave the top shell are compressed: their
//! out-of-range components are dropped. Identities are only asserted on
//! interior vectors, where compression is invisible.

mod linalg;

pub use linalg::{adjoint, anticommutator, commutator, sandwich_j, AntilinearOp, LinearOp, OpError, C64};

use crate::hilbert::{BasisIndex, Chirality, Truncation};
use crate::mutation::{factor, Mutation};
use crate::qnum::{HalfInt, QContext};
use crate::repcoeffs::{CoeffSet, Shift, Variant};
use crate::Error;

/// Generators `A`, `B`, `B*` of the sphere algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SphereGen {
    A,
    B,
    BStar,
}

impl SphereGen {
    pub const ALL: [SphereGen; 3] = [SphereGen::A, SphereGen::B, SphereGen::BStar];

    pub fn label(self) -> &'static str {
        match self {
            SphereGen::A => "A",
            SphereGen::B => "B",
            SphereGen::BStar => "Bstar",
        }
    }
}

/// Generators `e`, `f`, `k`, `k⁻¹` of the quantum enveloping algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UqGen {
    E,
    F,
    K,
    KInv,
}

impl UqGen {
    pub fn label(self) -> &'static str {
        match self {
            UqGen::E => "e",
            UqGen::F => "f",
            UqGen::K => "k",
            UqGen::KInv => "kinv",
        }
    }
}

/// Scale `z` of the Dirac operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracParams {
    z: C64,
}

impl DiracParams {
    pub fn new(z: C64) -> Result<Self, Error> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
            return Err(Error::InvalidParameter(format!("Dirac scale z = {z} must be finite and nonzero")));
        }
        Ok(Self { z })
    }

    pub fn z(&self) -> C64 {
        self.z
    }
}

impl Default for DiracParams {
    fn default() -> Self {
        Self { z: C64::new(1.0, 0.0) }
    }
}

fn coeff_set(ctx: &QContext, chirality: Chirality, mutation: Option<&Mutation>) -> CoeffSet {
    let variant = match chirality {
        Chirality::Plus => Variant::PiPlus,
        Chirality::Minus => Variant::PiMinus,
    };
    CoeffSet::new(*ctx, variant).with_mutation(mutation.copied())
}

/// Collects `(target, value)` contributions per basis vector into a matrix.
fn assemble<F>(trunc: &Truncation, mut column: F) -> LinearOp
where
    F: FnMut(&BasisIndex) -> Vec<(BasisIndex, C64)>,
{
    let basis = trunc.enumerate();
    let mut entries = Vec::new();
    for (col, idx) in basis.iter().enumerate() {
        for (target, value) in column(idx) {
            if let Some(row) = trunc.position(&target) {
                entries.push((row, col, value));
            }
        }
    }
    LinearOp::from_triplets(trunc.dim(), entries)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `π(A)`, `π(B)` or `π(B*)` with `π₊` on the Plus block and `π₋` on the Minus block.
pub fn build_sphere_gen(ctx: &QContext, trunc: &Truncation, gen: SphereGen) -> LinearOp {
    build_sphere_gen_mutated(ctx, trunc, gen, None)
}

pub fn build_sphere_gen_mutated(
    ctx: &QContext,
    trunc: &Truncation,
    gen: SphereGen,
    mutation: Option<&Mutation>,
) -> LinearOp {
    let sets = [
        coeff_set(ctx, Chirality::Plus, mutation),
        coeff_set(ctx, Chirality::Minus, mutation),
    ];
    assemble(trunc, |idx| {
        let set = &sets[(idx.chirality == Chirality::Minus) as usize];
        Shift::ALL
            .iter()
            .map(|&j| {
                let (dm, value) = match gen {
                    SphereGen::B => (1, set.b(j, idx.l, idx.m)),
                    SphereGen::BStar => (-1, set.b_star(j, idx.l, idx.m)),
                    SphereGen::A => (0, set.a(j, idx.l, idx.m)),
                };
                let target = BasisIndex { l: idx.l + j.delta(), m: idx.m + dm, chirality: idx.chirality };
                (target, real(value))
            })
            .filter(|(_, v)| *v != C64::new(0.0, 0.0))
            .collect()
    })
}

/// `e`, `f`, `k`, `k⁻¹` acting identically on both chirality blocks.
pub fn build_uq_gen(ctx: &QContext, trunc: &Truncation, gen: UqGen) -> LinearOp {
    assemble(trunc, |idx| {
        let (l, m) = (idx.l.value(), idx.m.value());
        let at = |dm: i32| BasisIndex { l: idx.l, m: idx.m + dm, chirality: idx.chirality };
        let sqrt2 = |a: f64, b: f64| {
            let v = ctx.qn(a) * ctx.qn(b);
            if v > 0.0 {
                v.sqrt()
            } else {
                0.0
            }
        };
        let out = match gen {
            UqGen::F => (at(1), sqrt2(l - m, l + m + 1.0)),
            UqGen::E => (at(-1), sqrt2(l - m + 1.0, l + m)),
            UqGen::K => (at(0), ctx.qp(m)),
            UqGen::KInv => (at(0), ctx.qp(-m)),
        };
        if out.1 == 0.0 || out.0.m.abs() > out.0.l {
            Vec::new()
        } else {
            vec![(out.0, real(out.1))]
        }
    })
}

/// Chirality grading, `+1` on the Plus block and `-1` on the Minus block.
pub fn build_gamma(trunc: &Truncation) -> LinearOp {
    LinearOp::diagonal(trunc.enumerate().iter().map(|b| b.chirality.sign()))
}

/// `i^{2m}` for odd `2m`.
fn phase(m: HalfInt) -> C64 {
    match m.twice().rem_euclid(4) {
        1 => C64::new(0.0, 1.0),
        3 => C64::new(0.0, -1.0),
        0 => real(1.0),
        _ => real(-1.0),
    }
}

/// Reality operator `J|l,m⟩_± = i^{2m} p^m |l,-m⟩_∓`.
pub fn build_j(trunc: &Truncation, p: f64) -> Result<AntilinearOp, Error> {
    build_j_mutated(trunc, p, None)
}

pub fn build_j_mutated(trunc: &Truncation, p: f64, mutation: Option<&Mutation>) -> Result<AntilinearOp, Error> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!("reality parameter p = {p} must be positive")));
    }
    let matrix = assemble(trunc, |idx| {
        let mut value = phase(idx.m) * p.powf(idx.m.value());
        if idx.chirality == Chirality::Plus {
            value *= factor(mutation, |mu| mu.j_phase(idx.l, idx.m));
        }
        let target = BasisIndex { l: idx.l, m: -idx.m, chirality: idx.chirality.flip() };
        vec![(target, value)]
    });
    Ok(AntilinearOp::new(matrix))
}

/// Dirac operator with eigenvalue law `d_l = [l + 1/2]`.
pub fn build_d(ctx: &QContext, trunc: &Truncation, params: &DiracParams) -> LinearOp {
    build_d_mutated(ctx, trunc, params, None)
}

pub fn build_d_mutated(
    ctx: &QContext,
    trunc: &Truncation,
    params: &DiracParams,
    mutation: Option<&Mutation>,
) -> LinearOp {
    build_d_with_law(trunc, params, |l| {
        ctx.qn(l.value() + 0.5) * factor(mutation, |mu| mu.dirac(l))
    })
}

/// Off-diagonal chirality operator with an arbitrary shell law `d_l`:
/// `|l,m⟩_+ ↦ z d_l |l,m⟩_-` and `|l,m⟩_- ↦ z̄ d_l |l,m⟩_+`.
pub fn build_d_with_law(trunc: &Truncation, params: &DiracParams, law: impl Fn(HalfInt) -> f64) -> LinearOp {
    let z = params.z();
    assemble(trunc, |idx| {
        let d = law(idx.l);
        let scale = match idx.chirality {
            Chirality::Plus => z,
            Chirality::Minus => z.conj(),
        };
        let target = BasisIndex { chirality: idx.chirality.flip(), ..*idx };
        vec![(target, scale * d)]
    })
}

/// Everything needed to evaluate the axioms at one parameter point.
#[derive(Clone, Debug)]
pub struct TripleConfig {
    pub ctx: QContext,
    pub trunc: Truncation,
    /// Reality parameter; the equivariant choice is `p = q`.
    pub p: f64,
    pub dirac: DiracParams,
    pub mutation: Option<Mutation>,
}

impl TripleConfig {
    pub fn new(ctx: QContext, trunc: Truncation) -> Self {
        Self { p: ctx.q(), ctx, trunc, dirac: DiracParams::default(), mutation: None }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_z(mut self, dirac: DiracParams) -> Self {
        self.dirac = dirac;
        self
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = Some(mutation);
        self
    }
}

/// Built operators of the spectral triple.
#[derive(Clone, Debug)]
pub struct SpectralTriple {
    pub config: TripleConfig,
    pub a: LinearOp,
    pub b: LinearOp,
    pub b_star: LinearOp,
    pub e: LinearOp,
    pub f: LinearOp,
    pub k: LinearOp,
    pub k_inv: LinearOp,
    pub gamma: LinearOp,
    pub j: AntilinearOp,
    pub d: LinearOp,
}

impl SpectralTriple {
    pub fn build(config: TripleConfig) -> Result<Self, Error> {
        let TripleConfig { ctx, trunc, p, dirac, mutation } = &config;
        ctx.preflight(trunc.shells())?;
        let mutation = mutation.as_ref();
        let sphere = |g| build_sphere_gen_mutated(ctx, trunc, g, mutation);
        let uq = |g| build_uq_gen(ctx, trunc, g);
        Ok(Self {
            a: sphere(SphereGen::A),
            b: sphere(SphereGen::B),
            b_star: sphere(SphereGen::BStar),
            e: uq(UqGen::E),
            f: uq(UqGen::F),
            k: uq(UqGen::K),
            k_inv: uq(UqGen::KInv),
            gamma: build_gamma(trunc),
            j: build_j_mutated(trunc, *p, mutation)?,
            d: build_d_mutated(ctx, trunc, dirac, mutation),
            config,
        })
    }

    pub fn ctx(&self) -> &QContext {
        &self.config.ctx
    }

    pub fn trunc(&self) -> &Truncation {
        &self.config.trunc
    }

    pub fn dim(&self) -> usize {
        self.config.trunc.dim()
    }

    pub fn sphere(&self, gen: SphereGen) -> &LinearOp {
        match gen {
            SphereGen::A => &self.a,
            SphereGen::B => &self.b,
            SphereGen::BStar => &self.b_star,
        }
    }

    pub fn uq(&self, gen: UqGen) -> &LinearOp {
        match gen {
            UqGen::E => &self.e,
            UqGen::F => &self.f,
            UqGen::K => &self.k,
            UqGen::KInv => &self.k_inv,
        }
    }

    /// Looks up an operator by its export name.
    pub fn named(&self, name: &str) -> Option<&LinearOp> {
        Some(match name {
            "A" => &self.a,
            "B" => &self.b,
            "Bstar" | "B*" => &self.b_star,
            "e" => &self.e,
            "f" => &self.f,
            "k" => &self.k,
            "kinv" => &self.k_inv,
            "gamma" => &self.gamma,
            "J" => self.j.matrix(),
            "D" => &self.d,
            _ => return None,
        })
    }
}

pub const OPERATOR_NAMES: [&str; 10] = ["A", "B", "Bstar", "e", "f", "k", "kinv", "gamma", "J", "D"];
