//! Registry of summation and transformation identities between
//! very-well-poised series, each with a constraint solver, evaluators for
//! both sides and a residual check.

mod checks;
mod coeffs;
mod limits;
mod params;

use std::fmt;
use std::str::FromStr;

pub use limits::{check_limit_regime, limit_parts, semi_finite_lhs_spec, LimitParts};
pub use params::{Param, ParamSet};

use crate::error::{Error, Result};
use crate::mpnum::{complex_abs_bounds, BoundedValue, EvalContext, Mag};
use crate::qseries::SeriesSpec;
use checks::{lambda_of, modulus, r, Builder, Ten};

/// Smallest modulus accepted for a derived parameter; near-zero values
/// make prefactors such as `(q/lambda)_inf` explode.
pub const DERIVED_MODULUS_MIN: f64 = 0.05;

/// Convergence moduli must stay below `1 - CONVERGENCE_MARGIN`, so a series
/// certifies within the default term budget (`0.98^6000 < 10^-52`).
pub const CONVERGENCE_MARGIN: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    SixPsi6Sum,
    EightPhi7Ext,
    Semi6Psi6,
    EightPhi7Trans,
    Semi8Phi7,
    SixPsi6Trans,
    TenPhi9FourTerm,
    Semi10Phi9,
    EightPsi8Trans,
    SixPhi5Sum,
    OnePsi1Sum,
}

use IdentityId::*;

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        SixPsi6Sum,
        EightPhi7Ext,
        Semi6Psi6,
        EightPhi7Trans,
        Semi8Phi7,
        SixPsi6Trans,
        TenPhi9FourTerm,
        Semi10Phi9,
        EightPsi8Trans,
        SixPhi5Sum,
        OnePsi1Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SixPsi6Sum => "SIXPSI6_SUM",
            EightPhi7Ext => "EIGHTPHI7_EXT",
            Semi6Psi6 => "SEMI_6PSI6",
            EightPhi7Trans => "EIGHTPHI7_TRANS",
            Semi8Phi7 => "SEMI_8PHI7",
            SixPsi6Trans => "SIXPSI6_TRANS",
            TenPhi9FourTerm => "TENPHI9_4TERM",
            Semi10Phi9 => "SEMI_10PHI9",
            EightPsi8Trans => "EIGHTPSI8_TRANS",
            SixPhi5Sum => "SIXPHI5_SUM",
            OnePsi1Sum => "ONEPSI1_SUM",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SixPsi6Sum => "Bailey's very-well-poised 6psi6 summation",
            EightPhi7Ext => "three-term nonterminating very-well-poised 8phi7 summation",
            Semi6Psi6 => "semi-finite (k >= -n) form of the three-term 8phi7 summation",
            EightPhi7Trans => "two-term very-well-poised 8phi7 transformation",
            Semi8Phi7 => "semi-finite (k >= -n) form of the 8phi7 transformation",
            SixPsi6Trans => "very-well-poised 6psi6 transformation with an extra parameter b",
            TenPhi9FourTerm => "Bailey's four-term very-well-poised 10phi9 transformation",
            Semi10Phi9 => "semi-finite (k >= -n) form of the four-term 10phi9 transformation",
            EightPsi8Trans => "8psi8 transformation into an 8psi8 and two 8phi7 series",
            SixPhi5Sum => "very-well-poised 6phi5 summation",
            OnePsi1Sum => "Ramanujan's 1psi1 summation",
        }
    }

    /// The relations that fix the derived parameters.
    pub fn constraint(self) -> &'static str {
        match self {
            SixPsi6Sum => "z = qa^2/bcde, |z| < 1",
            EightPhi7Ext | Semi6Psi6 => "b = qa^2/cdef",
            EightPhi7Trans | Semi8Phi7 => "lambda = qa^2/bcd, |q^2a^2/bcdef| < 1, |aq/ef| < 1",
            SixPsi6Trans => "lambda = qa^2/bcd, |qa^2/cdef| < 1",
            TenPhi9FourTerm | Semi10Phi9 => "c = q^2a^3/bdefgh, lambda = qa^2/cde",
            EightPsi8Trans => "c = q^2a^3/bdefgh, lambda = qa^2/cde, |c| < 1, |aq/de| < 1",
            SixPhi5Sum => "|aq/bcd| < 1",
            OnePsi1Sum => "|b/a| < |z| < 1",
        }
    }

    /// Parameters that must be supplied (besides `q` and `n`).
    pub fn free_params(self) -> &'static [Param] {
        use Param::*;
        match self {
            SixPhi5Sum => &[A, B, C, D],
            OnePsi1Sum => &[A, B, Z],
            SixPsi6Sum => &[A, B, C, D, E],
            EightPhi7Ext | Semi6Psi6 => &[A, C, D, E, F],
            EightPhi7Trans | Semi8Phi7 | SixPsi6Trans => &[A, B, C, D, E, F],
            TenPhi9FourTerm | Semi10Phi9 | EightPsi8Trans => &[A, B, D, E, F, G, H],
        }
    }

    /// Parameters computed by [`solve_constraints`].
    pub fn derived_params(self) -> &'static [Param] {
        use Param::*;
        match self {
            SixPhi5Sum | OnePsi1Sum | SixPsi6Sum => &[],
            EightPhi7Ext | Semi6Psi6 => &[B],
            EightPhi7Trans | Semi8Phi7 | SixPsi6Trans => &[Lambda],
            TenPhi9FourTerm | Semi10Phi9 | EightPsi8Trans => &[C, Lambda],
        }
    }

    /// Whether the identity involves a sum over `k >= -n`.
    pub fn is_semi_finite(self) -> bool {
        matches!(self, Semi6Psi6 | Semi8Phi7 | Semi10Phi9)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<IdentityId> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == wanted)
            .ok_or_else(|| Error::Config(format!("unknown identity {s:?}")))
    }
}

/// Evaluation record of one series component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentDiagnostic {
    pub label: String,
    /// The series that was summed.
    pub spec: SeriesSpec,
    pub value: BoundedValue,
    pub terms_up: usize,
    pub terms_down: usize,
    pub tail_bound: Mag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub params: ParamSet,
    pub lhs: BoundedValue,
    pub rhs: BoundedValue,
    /// `|lhs - rhs| / (|lhs| + |rhs| + 10^-digits)` on the centers.
    pub residual: Mag,
    /// `10 (err_lhs + err_rhs) / (|lhs| + |rhs|)`: the largest residual the
    /// certified error bounds can account for.
    pub explained: Mag,
    pub pass: bool,
    pub diagnostics: Vec<ComponentDiagnostic>,
}

/// Symmetric relative residual and the part of it the certified bounds explain.
pub fn residual(lhs: &BoundedValue, rhs: &BoundedValue, ctx: &EvalContext) -> (Mag, Mag) {
    let diff = (lhs - rhs).mid_upper();
    let scale = complex_abs_bounds(&lhs.value)
        .0
        .add(complex_abs_bounds(&rhs.value).0);
    let res = diff.div(scale.add(ctx.residual_floor()));
    let explained = lhs.abs_err.add(rhs.abs_err).mul_f64(10.0).div(scale);
    (res, explained)
}

fn violation(msg: String) -> Error {
    Error::ConstraintViolation(msg)
}

fn require_below_one(what: &str, x: &BoundedValue) -> Result<()> {
    let m = modulus(x);
    if m <= 1.0 - CONVERGENCE_MARGIN {
        Ok(())
    } else {
        Err(violation(format!(
            "|{what}| = {m:.6} must be < 1 (at most {})",
            1.0 - CONVERGENCE_MARGIN
        )))
    }
}

fn require_derived(p: Param, x: &BoundedValue, below_one: bool) -> Result<()> {
    let m = x.abs_lower().to_f64();
    if m < DERIVED_MODULUS_MIN {
        return Err(violation(format!(
            "derived |{p}| = {m:.6} is below {DERIVED_MODULUS_MIN}"
        )));
    }
    if below_one {
        require_below_one(p.name(), x)?;
    }
    Ok(())
}

fn require_apart(what: &str, x: &BoundedValue, y: &BoundedValue, ctx: &EvalContext) -> Result<()> {
    let gap = (x - y).abs_lower().to_f64();
    if gap > ctx.pole_distance_min() {
        Ok(())
    } else {
        Err(violation(format!(
            "{what}: |difference| = {gap:.3e} makes the identity trivial"
        )))
    }
}

/// Completes `free` with the derived parameters of `id` and checks the
/// convergence moduli and degeneracy guards.
pub fn solve_constraints(id: IdentityId, free: &ParamSet, ctx: &EvalContext) -> Result<ParamSet> {
    for &p in id.free_params() {
        free.get(p)?;
    }
    for (p, _) in free.entries() {
        if id.derived_params().contains(&p) {
            return Err(Error::Config(format!(
                "parameter `{p}` of {id} is derived ({}) and must not be given",
                id.constraint()
            )));
        }
        if !id.free_params().contains(&p) {
            return Err(Error::Config(format!(
                "parameter `{p}` is not used by {id}"
            )));
        }
    }
    let mut out = free.clone();
    if !id.is_semi_finite() {
        out.n = 0;
    }
    let q = free.q().clone();
    let g = |p: Param| free.get(p);
    use Param::*;
    match id {
        SixPhi5Sum => {
            require_below_one("aq/bcd", &r(&[g(A)?, &q], &[g(B)?, g(C)?, g(D)?])?)?;
        }
        OnePsi1Sum => {
            let (a, b, z) = (g(A)?, g(B)?, g(Z)?);
            require_below_one("z", z)?;
            let ratio = modulus(&r(&[b], &[a])?);
            if ratio > z.abs_lower().to_f64() * (1.0 - CONVERGENCE_MARGIN) {
                return Err(violation(format!(
                    "|b/a| = {ratio:.6} must be < |z| = {:.6}",
                    modulus(z)
                )));
            }
        }
        SixPsi6Sum => {
            let z = r(&[&q, g(A)?, g(A)?], &[g(B)?, g(C)?, g(D)?, g(E)?])?;
            require_below_one("qa^2/bcde", &z)?;
        }
        EightPhi7Ext | Semi6Psi6 => {
            let b = lambda_of(&q, g(A)?, g(C)?, g(D)?, &(g(E)? * g(F)?))?;
            require_derived(B, &b, true)?;
            out.set(B, b);
        }
        EightPhi7Trans | Semi8Phi7 | SixPsi6Trans => {
            let (a, b, c, d, e, f) = (g(A)?, g(B)?, g(C)?, g(D)?, g(E)?, g(F)?);
            let l = lambda_of(&q, a, b, c, d)?;
            require_derived(Lambda, &l, false)?;
            if id == SixPsi6Trans {
                require_below_one("qa^2/cdef", &r(&[&q, a, a], &[c, d, e, f])?)?;
            } else {
                require_below_one("q^2a^2/bcdef", &r(&[&q, &q, a, a], &[b, c, d, e, f])?)?;
                require_below_one("aq/ef", &r(&[a, &q], &[e, f])?)?;
            }
            out.set(Lambda, l);
        }
        TenPhi9FourTerm | Semi10Phi9 | EightPsi8Trans => {
            let a = g(A)?;
            let c = r(
                &[&q, &q, a, a, a],
                &[g(B)?, g(D)?, g(E)?, g(F)?, g(G)?, g(H)?],
            )?;
            require_derived(C, &c, true)?;
            let l = lambda_of(&q, a, &c, g(D)?, g(E)?)?;
            require_derived(Lambda, &l, false)?;
            if id != TenPhi9FourTerm {
                require_below_one("aq/de", &r(&[a, &q], &[g(D)?, g(E)?])?)?;
            }
            if id == EightPsi8Trans {
                require_apart("lambda = a", &l, a, ctx)?;
                require_apart("b = a", g(B)?, a, ctx)?;
            }
            out.set(C, c);
            out.set(Lambda, l);
        }
    }
    Ok(out)
}

/// Evaluates both sides of `id` at `params` (as returned by
/// [`solve_constraints`]) and compares them. Errors carry the label of the
/// component that raised them.
pub fn check_identity(
    id: IdentityId,
    params: &ParamSet,
    ctx: &EvalContext,
    tolerance: f64,
) -> Result<IdentityReport> {
    let mut bd = Builder::new(id, params, ctx);
    let sides = checks::evaluate(id, params, &mut bd)?;
    let (res, explained) = residual(&sides.lhs, &sides.rhs, ctx);
    let pass = res.to_f64() <= tolerance && res <= explained;
    Ok(IdentityReport {
        identity: id,
        params: params.clone(),
        lhs: sides.lhs,
        rhs: sides.rhs,
        residual: res,
        explained,
        pass,
        diagnostics: bd.diagnostics,
    })
}

/// Whether a failed check is one a sweep reports as skipped rather than
/// failed: non-convergence of the right-hand `8phi7` of the semi-finite
/// three-term summation, whose convergence at finite `n` is not known a priori.
pub fn is_skippable(id: IdentityId, err: &Error) -> bool {
    let wanted = format!("{} {}", Semi6Psi6.name(), checks::SEMI_6PSI6_RHS_SERIES);
    id == Semi6Psi6
        && err.is_no_convergence()
        && matches!(err, Error::Component { label, .. } if *label == wanted)
}

fn ten_family(params: &ParamSet) -> Result<Ten<'_>> {
    Ten::of(params)
}

/// `alpha_n` of the semi-finite four-term identity at `params.n`.
pub fn coeff_alpha(params: &ParamSet, ctx: &EvalContext) -> Result<BoundedValue> {
    let bd = Builder::new(Semi10Phi9, params, ctx);
    coeffs::alpha(&bd, &ten_family(params)?, params.n)
}

/// `beta_n` of the semi-finite four-term identity at `params.n`.
pub fn coeff_beta(params: &ParamSet, ctx: &EvalContext) -> Result<BoundedValue> {
    let bd = Builder::new(Semi10Phi9, params, ctx);
    coeffs::beta(&bd, &ten_family(params)?, params.n)
}

/// `gamma_n` of the semi-finite four-term identity at `params.n`.
pub fn coeff_gamma(params: &ParamSet, ctx: &EvalContext) -> Result<BoundedValue> {
    let bd = Builder::new(Semi10Phi9, params, ctx);
    coeffs::gamma(&bd, &ten_family(params)?, params.n)
}
