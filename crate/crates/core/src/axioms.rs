//! Named residual checks for every identity of the triple, plus the
//! boundedness and classical-limit scans.
//!
//! An identity `LHS = RHS` is evaluated as
//! `‖(LHS - RHS) P‖ / max(1, ‖LHS P‖)` where `P` projects onto interior
//! shells. Each sphere generator moves `l` by at most one, so with a margin
//! of at least the number of generator factors in the expression, every
//! intermediate vector stays inside the truncation and the residual is
//! free of cutoff effects.
//!
//! Negative controls are checks whose residual must exceed a threshold:
//! they demonstrate that a wrong choice of `J` or `D` is detected.

use serde::Serialize;

use crate::hilbert::{Chirality, Truncation};
use crate::operators::{
    build_d_with_law, build_j, commutator, AntilinearOp, DiracParams, LinearOp, SpectralTriple,
    SphereGen, TripleConfig, UqGen, C64,
};
use crate::qnum::{HalfInt, QContext};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Entrywise tolerance for the `*`-structure checks.
pub const STAR_TOLERANCE: f64 = 1e-12;
/// Tolerance for comparisons against closed-form spectra.
pub const ANALYTIC_TOLERANCE: f64 = 1e-12;
/// `J` built with `p ≠ q` must miss equivariance by at least this much.
pub const J_EQUIVARIANCE_VIOLATION: f64 = 1e-2;
/// A Dirac operator with the wrong eigenvalue law must miss the first-order condition by this much.
pub const FIRST_ORDER_VIOLATION: f64 = 1e-3;
/// Largest `l` used for the closed-form eigenvalue recurrence.
pub const RECURRENCE_L_MAX: i32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// Residual at most the tolerance.
    Holds,
    /// Residual strictly above the tolerance.
    Violated,
}

/// Static description of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckSpec {
    pub name: String,
    pub paper_anchor: &'static str,
    /// Number of sphere-generator factors in the widest term; the interior
    /// margin used is at least this.
    pub degree: u32,
    pub tolerance: f64,
    pub expect: Expectation,
}

impl CheckSpec {
    fn holds(name: impl Into<String>, anchor: &'static str, degree: u32, tolerance: f64) -> Self {
        Self { name: name.into(), paper_anchor: anchor, degree, tolerance, expect: Expectation::Holds }
    }

    fn violated(name: impl Into<String>, anchor: &'static str, degree: u32, threshold: f64) -> Self {
        Self { name: name.into(), paper_anchor: anchor, degree, tolerance: threshold, expect: Expectation::Violated }
    }
}

/// Outcome of one check at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub paper_anchor: String,
    pub q: f64,
    pub shells: u32,
    pub p: f64,
    pub z: [f64; 2],
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub negative_control: bool,
}

/// Linear combination `c₁·1 + c_A·A + c_B·B + c_B*·B*` of sphere generators.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SphereElement {
    pub unit: f64,
    pub a: f64,
    pub b: f64,
    pub b_star: f64,
}

impl SphereElement {
    pub fn generator(gen: SphereGen, coeff: f64) -> Self {
        let mut x = Self::default();
        match gen {
            SphereGen::A => x.a = coeff,
            SphereGen::B => x.b = coeff,
            SphereGen::BStar => x.b_star = coeff,
        }
        x
    }

    pub fn to_op(&self, triple: &SpectralTriple) -> LinearOp {
        let mut out = LinearOp::identity(triple.dim()).scale(C64::new(self.unit, 0.0));
        for (c, op) in [(self.a, &triple.a), (self.b, &triple.b), (self.b_star, &triple.b_star)] {
            if c != 0.0 {
                out = &out + &(op * c);
            }
        }
        out
    }
}

/// `h ▷ x` for `h ∈ {e, f, k, k⁻¹}` on the sphere generators.
pub fn act(ctx: &QContext, h: UqGen, x: SphereGen) -> SphereElement {
    let q = ctx.q();
    let s = q.sqrt();
    let g = SphereElement::generator;
    match (h, x) {
        (UqGen::K, SphereGen::B) => g(SphereGen::B, q),
        (UqGen::K, SphereGen::BStar) => g(SphereGen::BStar, 1.0 / q),
        (UqGen::K, SphereGen::A) => g(SphereGen::A, 1.0),
        (UqGen::KInv, SphereGen::B) => g(SphereGen::B, 1.0 / q),
        (UqGen::KInv, SphereGen::BStar) => g(SphereGen::BStar, q),
        (UqGen::KInv, SphereGen::A) => g(SphereGen::A, 1.0),
        (UqGen::E, SphereGen::B) => {
            let q32 = 1.0 / (q * s);
            SphereElement { unit: q32, a: -(s + q32), ..Default::default() }
        }
        (UqGen::E, SphereGen::BStar) => SphereElement::default(),
        (UqGen::E, SphereGen::A) => g(SphereGen::BStar, 1.0 / s),
        (UqGen::F, SphereGen::B) => SphereElement::default(),
        (UqGen::F, SphereGen::BStar) => SphereElement { unit: -1.0 / s, a: q * s + 1.0 / s, ..Default::default() },
        (UqGen::F, SphereGen::A) => g(SphereGen::B, -s),
    }
}

/// `(S h)*` for the generators, as an operator.
fn antipode_star(triple: &SpectralTriple, h: UqGen) -> LinearOp {
    let q = triple.ctx().q();
    match h {
        UqGen::K => triple.k_inv.clone(),
        UqGen::KInv => triple.k.clone(),
        UqGen::E => &triple.f * (-1.0 / q),
        UqGen::F => &triple.e * (-q),
    }
}

fn rel_residual(lhs: &LinearOp, rhs: &LinearOp, proj: &LinearOp) -> f64 {
    let lp = lhs * proj;
    let diff = &lp - &(rhs * proj);
    diff.op_norm() / lp.op_norm().max(1.0)
}

/// Runs checks against one built triple.
#[derive(Clone, Debug)]
pub struct Verifier {
    triple: SpectralTriple,
    tolerance: f64,
}

impl Verifier {
    pub fn new(config: TripleConfig, tolerance: f64) -> Result<Self> {
        Self::from_triple(SpectralTriple::build(config)?, tolerance)
    }

    pub fn from_triple(triple: SpectralTriple, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {tolerance} must be positive")));
        }
        triple.trunc().interior_l_max(0)?;
        Ok(Self { triple, tolerance })
    }

    pub fn triple(&self) -> &SpectralTriple {
        &self.triple
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn trunc(&self) -> &Truncation {
        self.triple.trunc()
    }

    /// Interior projector for an expression of the given degree; degree 0
    /// expressions act within each shell and are checked on the full space.
    fn projector(&self, degree: u32) -> Result<LinearOp> {
        if degree == 0 {
            return Ok(LinearOp::identity(self.triple.dim()));
        }
        let extra = degree.saturating_sub(self.trunc().margin());
        Ok(self.trunc().interior_projector(extra)?)
    }

    fn report(&self, spec: &CheckSpec, residual: f64) -> CheckReport {
        let cfg = &self.triple.config;
        let passed = match spec.expect {
            Expectation::Holds => residual <= spec.tolerance,
            Expectation::Violated => residual > spec.tolerance,
        };
        CheckReport {
            check: spec.name.clone(),
            paper_anchor: spec.paper_anchor.to_string(),
            q: cfg.ctx.q(),
            shells: cfg.trunc.shells(),
            p: cfg.p,
            z: [cfg.dirac.z().re, cfg.dirac.z().im],
            residual,
            tolerance: spec.tolerance,
            passed,
            negative_control: spec.expect == Expectation::Violated,
        }
    }

    fn identity(&self, spec: CheckSpec, lhs: &LinearOp, rhs: &LinearOp) -> Result<CheckReport> {
        let proj = self.projector(spec.degree)?;
        Ok(self.report(&spec, rel_residual(lhs, rhs, &proj)))
    }

    fn tol(&self) -> f64 {
        self.tolerance
    }

    /// The four defining relations and the combination `B*B - q⁴BB* = (1-q²)A`,
    /// separately on each representation block.
    pub fn sphere_relations(&self) -> Result<Vec<CheckReport>> {
        let t = &self.triple;
        let q = t.ctx().q();
        let q2 = q * q;
        let id = LinearOp::identity(t.dim());
        let one_minus_a = &id - &t.a;
        let relations: [(&str, &'static str, LinearOp, LinearOp); 5] = [
            ("sphere.ab", "AB = q^2 BA", &t.a * &t.b, &(&t.b * &t.a) * q2),
            ("sphere.abstar", "AB* = q^-2 B*A", &t.a * &t.b_star, &(&t.b_star * &t.a) * (1.0 / q2)),
            ("sphere.bbstar", "BB* = q^-2 A(1 - A)", &t.b * &t.b_star, &(&t.a * &one_minus_a) * (1.0 / q2)),
            (
                "sphere.bstarb",
                "B*B = A(1 - q^2 A)",
                &t.b_star * &t.b,
                &t.a * &(&id - &(&t.a * q2)),
            ),
            (
                "sphere.combination",
                "B*B - q^4 BB* = (1 - q^2) A",
                &(&t.b_star * &t.b) - &(&(&t.b * &t.b_star) * (q2 * q2)),
                &t.a * (1.0 - q2),
            ),
        ];
        let mut out = Vec::new();
        for (chirality, label) in [(Chirality::Plus, "pi+"), (Chirality::Minus, "pi-")] {
            let proj = self.trunc().block_interior_projector(chirality, 2u32.saturating_sub(self.trunc().margin()))?;
            for (name, anchor, lhs, rhs) in &relations {
                let spec = CheckSpec::holds(format!("{name}[{label}]"), anchor, 2, self.tol());
                out.push(self.report(&spec, rel_residual(lhs, rhs, &proj)));
            }
        }
        Ok(out)
    }

    /// `π(B)† = π(B*)` and `π(A)† = π(A)`, entrywise on the full truncation.
    pub fn star_structure(&self) -> Vec<CheckReport> {
        let t = &self.triple;
        let b = (&t.b.adjoint() - &t.b_star).max_abs();
        let a = (&t.a.adjoint() - &t.a).max_abs();
        vec![
            self.report(&CheckSpec::holds("star.b_adjoint", "pi(B)^dagger = pi(B*)", 0, STAR_TOLERANCE), b),
            self.report(&CheckSpec::holds("star.a_selfadjoint", "pi(A)^dagger = pi(A)", 0, STAR_TOLERANCE), a),
        ]
    }

    /// Relations and `*`-structure of the represented `e, f, k`.
    pub fn uq_relations(&self) -> Result<Vec<CheckReport>> {
        let t = &self.triple;
        let q = t.ctx().q();
        let id = LinearOp::identity(t.dim());
        let k2 = &t.k * &t.k;
        let kinv2 = &t.k_inv * &t.k_inv;
        let fe_ef = &(&t.f * &t.e) - &(&t.e * &t.f);
        let cases = [
            ("uq.ek", "ek = q ke", &t.e * &t.k, &(&t.k * &t.e) * q),
            ("uq.kf", "kf = q fk", &t.k * &t.f, &(&t.f * &t.k) * q),
            ("uq.cartan", "k^2 - k^-2 = (q - q^-1)(fe - ef)", &k2 - &kinv2, &fe_ef * (q - 1.0 / q)),
            ("uq.k_inverse", "k k^-1 = 1", &t.k * &t.k_inv, id),
            ("uq.star_e", "e* = f", t.e.adjoint(), t.f.clone()),
            ("uq.star_k", "k* = k", t.k.adjoint(), t.k.clone()),
        ];
        cases
            .into_iter()
            .map(|(name, anchor, lhs, rhs)| self.identity(CheckSpec::holds(name, anchor, 0, self.tol()), &lhs, &rhs))
            .collect()
    }

    /// `h π(x) = π(h₍₁₎ ▷ x) h₍₂₎` for `h ∈ {k, e, f}` and each generator `x`.
    pub fn equivariance(&self) -> Result<Vec<CheckReport>> {
        let t = &self.triple;
        let ctx = t.ctx();
        let mut out = Vec::new();
        for h in [UqGen::K, UqGen::E, UqGen::F] {
            for x in SphereGen::ALL {
                let lhs = t.uq(h) * t.sphere(x);
                let rhs = match h {
                    // Δk = k ⊗ k
                    UqGen::K => &act(ctx, UqGen::K, x).to_op(t) * &t.k,
                    // Δh = h ⊗ k + k⁻¹ ⊗ h
                    _ => {
                        let first = &act(ctx, h, x).to_op(t) * &t.k;
                        let second = &act(ctx, UqGen::KInv, x).to_op(t) * t.uq(h);
                        &first + &second
                    }
                };
                let spec = CheckSpec::holds(
                    format!("equivariance.{}.{}", h.label(), x.label()),
                    "h(x v) = (h_(1) |> x)(h_(2) v)",
                    1,
                    self.tol(),
                );
                out.push(self.identity(spec, &lhs, &rhs)?);
            }
        }
        Ok(out)
    }

    fn j_equivariance_residual(&self, j: &AntilinearOp, h: UqGen) -> Result<f64> {
        let t = &self.triple;
        // h ∘ J and J ∘ (Sh)* are antilinear with matrices h·M and M·conj((Sh)*)
        let lhs = j.before_linear(t.uq(h))?;
        let rhs = j.after_linear(&antipode_star(t, h))?;
        Ok(rel_residual(lhs.matrix(), rhs.matrix(), &self.projector(0)?))
    }

    /// `J² = -1`, `γJ = -Jγ`, the commutant property and equivariance of `J`.
    pub fn reality(&self) -> Result<Vec<CheckReport>> {
        let t = &self.triple;
        let j = &t.j;
        let id = LinearOp::identity(t.dim());
        let mut out = vec![
            self.identity(CheckSpec::holds("reality.j_squared", "J^2 = -1", 0, self.tol()), &j.square(), &(-&id))?,
            self.identity(
                CheckSpec::holds("reality.gamma_j", "gamma J = -J gamma", 0, self.tol()),
                j.before_linear(&t.gamma)?.matrix(),
                &(-j.after_linear(&t.gamma)?.matrix()),
            )?,
        ];
        for x in SphereGen::ALL {
            let jxj = j.sandwich(t.sphere(x))?;
            for y in SphereGen::ALL {
                let py = t.sphere(y);
                let spec = CheckSpec::holds(
                    format!("reality.commutant.{}.{}", x.label(), y.label()),
                    "J pi(a) J pi(b) = pi(b) J pi(a) J",
                    2,
                    self.tol(),
                );
                out.push(self.identity(spec, &(&jxj * py), &(py * &jxj))?);
            }
        }
        for h in [UqGen::K, UqGen::E, UqGen::F] {
            let spec = CheckSpec::holds(format!("reality.j_equivariance.{}", h.label()), "h J = J (S h)*", 0, self.tol());
            let r = self.j_equivariance_residual(j, h)?;
            out.push(self.report(&spec, r));
        }
        Ok(out)
    }

    /// Distinct values among the configured `p`, `q` and `1`, in that order.
    fn reality_parameters(&self) -> Vec<f64> {
        let cfg = &self.triple.config;
        let mut ps = vec![cfg.p];
        for p in [cfg.ctx.q(), 1.0] {
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
        ps
    }

    fn first_order_residual(&self, d: &LinearOp, x: SphereGen, y: SphereGen) -> Result<f64> {
        let t = &self.triple;
        let dx = commutator(d, t.sphere(x))?;
        let jyj = t.j.sandwich(t.sphere(y))?;
        Ok(rel_residual(&(&dx * &jyj), &(&jyj * &dx), &self.projector(2)?))
    }

    /// Shell eigenvalues `|⟨l,l|_- D |l,l⟩_+|` read back from the built matrix.
    fn built_shell_eigenvalues(&self) -> Vec<f64> {
        let t = &self.triple;
        let trunc = t.trunc();
        let basis = trunc.enumerate();
        let z = t.config.dirac.z().norm();
        (0..trunc.shells())
            .map(|k| {
                let l = HalfInt::from_twice(2 * k as i32 + 1);
                let plus = basis.iter().position(|b| b.l == l && b.chirality == Chirality::Plus).unwrap();
                let minus = trunc.block_dim() + plus;
                t.d.get(minus, plus).norm() / z
            })
            .collect()
    }

    /// Analytic spectrum `±|z|[l+1/2]` with multiplicity `2l+1`, ascending.
    pub fn analytic_spectrum(&self) -> Vec<f64> {
        analytic_dirac_spectrum(self.triple.ctx(), self.trunc(), &self.triple.config.dirac)
    }

    /// Properties of `D`: grading, reality, equivariance, first order, spectrum.
    pub fn dirac(&self) -> Result<Vec<CheckReport>> {
        let t = &self.triple;
        let d = &t.d;
        let mut out = vec![self.identity(
            CheckSpec::holds("dirac.gamma", "D gamma = -gamma D", 0, self.tol()),
            &(d * &t.gamma),
            &(-&(&t.gamma * d)),
        )?];
        for p in self.reality_parameters() {
            let j = build_j(t.trunc(), p)?;
            let lhs = j.before_linear(d)?;
            let rhs = j.after_linear(d)?;
            let spec = CheckSpec::holds(format!("dirac.j_commute[p={p}]"), "D J = J D", 0, self.tol());
            out.push(self.identity(spec, lhs.matrix(), rhs.matrix())?);
        }
        for h in [UqGen::E, UqGen::F, UqGen::K] {
            let spec = CheckSpec::holds(format!("dirac.equivariance.{}", h.label()), "D h = h D", 0, self.tol());
            out.push(self.identity(spec, &(d * t.uq(h)), &(t.uq(h) * d))?);
        }
        for x in SphereGen::ALL {
            for y in SphereGen::ALL {
                let spec = CheckSpec::holds(
                    format!("dirac.first_order.{}.{}", x.label(), y.label()),
                    "[[D, pi(a)], J pi(b) J] = 0",
                    2,
                    self.tol(),
                );
                let r = self.first_order_residual(d, x, y)?;
                out.push(self.report(&spec, r));
            }
        }

        let ctx = t.ctx();
        let two = ctx.qn(2.0);
        let recurrence = |d: &dyn Fn(usize) -> f64, count: usize| {
            (0..count.saturating_sub(2))
                .map(|k| {
                    let lhs = d(k) + d(k + 2);
                    let rhs = two * d(k + 1);
                    (lhs - rhs).abs() / rhs.abs().max(1.0)
                })
                .fold(0.0, f64::max)
        };
        let built = self.built_shell_eigenvalues();
        out.push(self.report(
            &CheckSpec::holds("dirac.eigenvalue_recurrence", "d_l + d_(l+2) = [2] d_(l+1)", 0, ANALYTIC_TOLERANCE),
            recurrence(&|k| built[k], built.len()),
        ));
        let l_max = recurrence_l_max(ctx);
        let analytic = |k: usize| ctx.qn(k as f64 + 1.0);
        out.push(self.report(
            &CheckSpec::holds(
                format!("dirac.eigenvalue_recurrence_closed_form[l<={l_max}]"),
                "d_l + d_(l+2) = [2] d_(l+1)",
                0,
                ANALYTIC_TOLERANCE,
            ),
            recurrence(&analytic, (l_max.twice() as usize - 1) / 2 + 3),
        ));

        let got = d.eigenvalues()?;
        let want = self.analytic_spectrum();
        let deviation = got
            .iter()
            .zip(&want)
            .map(|(g, w)| (g - w).abs() / w.abs().max(1.0))
            .fold(0.0, f64::max);
        out.push(self.report(
            &CheckSpec::holds("dirac.spectrum", "spec D = {+-|z|[l + 1/2]}", 0, ANALYTIC_TOLERANCE),
            deviation,
        ));
        Ok(out)
    }

    /// Wrong choices that must be rejected: a non-equivariant `J` (`p = 1`
    /// when `q < 1`) and a Dirac operator with a different eigenvalue law.
    pub fn negative_controls(&self) -> Result<Vec<CheckReport>> {
        let t = &self.triple;
        let ctx = t.ctx();
        let mut out = Vec::new();
        if !ctx.is_classical() {
            let j1 = build_j(t.trunc(), 1.0)?;
            let r = self.j_equivariance_residual(&j1, UqGen::E)?;
            let spec = CheckSpec::violated("negative.j_equivariance.e[p=1]", "h J = J (S h)*", 0, J_EQUIVARIANCE_VIOLATION);
            out.push(self.report(&spec, r));
        }
        let alt = build_d_with_law(t.trunc(), &t.config.dirac, |l| alternative_law(ctx, l));
        let mut worst: f64 = 0.0;
        for x in SphereGen::ALL {
            for y in SphereGen::ALL {
                worst = worst.max(self.first_order_residual(&alt, x, y)?);
            }
        }
        let spec = CheckSpec::violated(
            "negative.first_order.alternative_law",
            "[[D, pi(a)], J pi(b) J] = 0",
            2,
            FIRST_ORDER_VIOLATION,
        );
        out.push(self.report(&spec, worst));
        Ok(out)
    }

    /// Every check in the default suite, in a fixed order.
    pub fn run_all(&self) -> Result<Vec<CheckReport>> {
        let mut out = self.sphere_relations()?;
        out.extend(self.star_structure());
        out.extend(self.uq_relations()?);
        out.extend(self.equivariance()?);
        out.extend(self.reality()?);
        out.extend(self.dirac()?);
        out.extend(self.negative_controls()?);
        Ok(out)
    }
}

/// Eigenvalue law used by the first-order negative control: `q^{-l}` for
/// `q < 1` (the `y`-only solution of the shell recurrence) and `(l+1/2)²`
/// classically, where `q^{-l}` would be constant.
pub fn alternative_law(ctx: &QContext, l: HalfInt) -> f64 {
    if ctx.is_classical() {
        (l.value() + 0.5).powi(2)
    } else {
        ctx.qp(-l.value())
    }
}

fn recurrence_l_max(ctx: &QContext) -> HalfInt {
    let mut l = HalfInt::from_twice(2 * RECURRENCE_L_MAX + 1);
    while l > HalfInt::HALF && ctx.q_number(l.value() + 2.5).is_err() {
        l = l - 1;
    }
    l
}

/// `±|z|[l+1/2]`, each with multiplicity `2l+1`, ascending.
pub fn analytic_dirac_spectrum(ctx: &QContext, trunc: &Truncation, params: &DiracParams) -> Vec<f64> {
    let z = params.z().norm();
    let mut out = Vec::with_capacity(trunc.dim());
    for k in 0..trunc.shells() {
        let l = f64::from(k) + 0.5;
        let v = z * ctx.qn(l + 0.5);
        for _ in 0..(2 * k + 2) {
            out.push(v);
            out.push(-v);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn check_sphere_relations(ctx: &QContext, trunc: &Truncation) -> Result<Vec<CheckReport>> {
    Verifier::new(TripleConfig::new(*ctx, *trunc), DEFAULT_TOLERANCE)?.sphere_relations()
}

pub fn check_equivariance(ctx: &QContext, trunc: &Truncation) -> Result<Vec<CheckReport>> {
    Verifier::new(TripleConfig::new(*ctx, *trunc), DEFAULT_TOLERANCE)?.equivariance()
}

pub fn check_reality(ctx: &QContext, trunc: &Truncation, p: f64) -> Result<Vec<CheckReport>> {
    Verifier::new(TripleConfig::new(*ctx, *trunc).with_p(p), DEFAULT_TOLERANCE)?.reality()
}

pub fn check_dirac(ctx: &QContext, trunc: &Truncation, params: &DiracParams) -> Result<Vec<CheckReport>> {
    Verifier::new(TripleConfig::new(*ctx, *trunc).with_z(*params), DEFAULT_TOLERANCE)?.dirac()
}

/// One row of a scan table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    /// Shell count (bound scan) or deformation parameter (limit scan).
    pub key: f64,
    pub alpha: String,
    pub value: f64,
}

/// Norms of `[D, π(x)]` on the interior for growing truncations, the norm
/// of `D` itself, and the largest `Plus → Minus` matrix element of
/// `[D, π(B)]` for each shift `j` of `l`.
pub fn bound_scan(ctx: &QContext, params: &DiracParams, margin: u32, shells_list: &[u32]) -> Result<Vec<ScanRow>> {
    if shells_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("shell list must be strictly ascending".into()));
    }
    let mut rows = Vec::new();
    for &shells in shells_list {
        let trunc = Truncation::new(shells, margin)?;
        let triple = SpectralTriple::build(TripleConfig::new(*ctx, trunc).with_z(*params))?;
        let proj = trunc.interior_projector(0)?;
        let key = f64::from(shells);
        for x in SphereGen::ALL {
            let c = commutator(&triple.d, triple.sphere(x))?;
            rows.push(ScanRow { key, alpha: x.label().to_string(), value: (&c * &proj).op_norm() });
        }
        rows.push(ScanRow { key, alpha: "D".into(), value: triple.d.op_norm() });

        let c = commutator(&triple.d, &triple.b)?;
        let basis = trunc.enumerate();
        let lmax = trunc.interior_l_max(0)?;
        let mut maxima = [0.0f64; 3];
        for (r, col, v) in c.triplets() {
            let (to, from) = (basis[r], basis[col]);
            if from.chirality == Chirality::Plus && to.chirality == Chirality::Minus && from.l <= lmax {
                let j = ((to.l.twice() - from.l.twice()) / 2 + 1) as usize;
                maxima[j] = maxima[j].max(v.norm());
            }
        }
        for (j, label) in [(2usize, "B:j=+1"), (1, "B:j=0"), (0, "B:j=-1")] {
            rows.push(ScanRow { key, alpha: label.into(), value: maxima[j] });
        }
    }
    Ok(rows)
}

/// Distance of the spectrum and of the check residuals from the `q = 1`
/// picture for each `q` in the list.
pub fn classical_limit_scan(q_list: &[f64], trunc: &Truncation, params: &DiracParams) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for &q in q_list {
        let ctx = QContext::new(q)?;
        let verifier = Verifier::new(TripleConfig::new(ctx, *trunc).with_z(*params), DEFAULT_TOLERANCE)?;
        let got = verifier.triple().d.eigenvalues()?;
        let classical = analytic_dirac_spectrum(&QContext::classical(), trunc, params);
        let spectral = got.iter().zip(&classical).map(|(g, c)| (g - c).abs()).fold(0.0, f64::max);

        // spacing of consecutive shells relative to the classical unit spacing
        let gap = (0..trunc.shells().saturating_sub(1))
            .map(|k| {
                let l = f64::from(k) + 0.5;
                ((ctx.qn(l + 1.5) - ctx.qn(l + 0.5)) - 1.0).abs()
            })
            .fold(0.0, f64::max);

        let drift = verifier
            .run_all()?
            .iter()
            .filter(|r| !r.negative_control)
            .map(|r| r.residual)
            .fold(0.0, f64::max);
        rows.push(ScanRow { key: q, alpha: "spectrum".into(), value: spectral });
        rows.push(ScanRow { key: q, alpha: "gap".into(), value: gap });
        rows.push(ScanRow { key: q, alpha: "checks".into(), value: drift });
    }
    Ok(rows)
}
