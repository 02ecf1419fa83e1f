//! Fixed inputs shared by the benchmarks.

use qpsi_core::{
    solve_constraints, BoundedValue, EvalContext, IdentityId, Lower, ParamSet, QBase, SeriesSpec,
};

pub fn context(digits: u32) -> EvalContext {
    EvalContext::new(digits).expect("benchmark precision is valid")
}

pub fn real(x: f64, ctx: &EvalContext) -> BoundedValue {
    BoundedValue::from_f64(x, ctx.bits())
}

pub fn base(q: f64, ctx: &EvalContext) -> QBase {
    QBase::from_f64(q, ctx).expect("benchmark base is valid")
}

/// A fixed admissible point of `id` at `q = 0.3` and depth `n`.
pub fn identity_point(id: IdentityId, n: u32, ctx: &EvalContext) -> ParamSet {
    let vals: &[f64] = match id {
        IdentityId::SixPhi5Sum => &[0.4, 0.5, 0.6, 0.7],
        IdentityId::OnePsi1Sum => &[0.8, 0.2, 0.6],
        IdentityId::SixPsi6Sum => &[0.4, 0.5, 0.6, 0.7, 0.8],
        IdentityId::EightPhi7Ext | IdentityId::Semi6Psi6 => &[0.4, 0.5, 0.6, 0.7, 0.8],
        IdentityId::EightPhi7Trans | IdentityId::Semi8Phi7 | IdentityId::SixPsi6Trans => {
            &[0.4, 0.5, 0.5, 0.6, 0.7, 0.8]
        }
        IdentityId::TenPhi9FourTerm | IdentityId::Semi10Phi9 | IdentityId::EightPsi8Trans => {
            &[0.62, 0.5, 0.65, 0.7, 0.8, 0.5, 0.6]
        }
    };
    let mut free = ParamSet::new(base(0.3, ctx)).with_n(n);
    for (&p, &v) in id.free_params().iter().zip(vals) {
        free.set(p, real(v, ctx));
    }
    solve_constraints(id, &free, ctx).expect("benchmark point is admissible")
}

/// A very-well-poised series with four free numerator pairs.
pub fn vwp_series(lower: Lower, ctx: &EvalContext) -> SeriesSpec {
    let a = real(0.4, ctx);
    let us: Vec<_> = [0.5, 0.6, 0.7, 0.8].iter().map(|&x| real(x, ctx)).collect();
    SeriesSpec::vwp_from_numerators(&a, &us, real(0.15, ctx), lower, &base(0.3, ctx))
        .expect("valid series")
}
