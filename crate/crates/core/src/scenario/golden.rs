//! Built-in scenarios: the rank-three worked example and its negative
//! control.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::orthogonal::OrthogonalModule;
use crate::regulators::EigenGramMatrix;
use crate::series::{GradedElement, IwasawaSeries, SeriesContext};
use crate::tau_modules::{HermitianPairing, SemiLinearModule, TauGauge};

use super::{Arithmetic, Scenario};

pub const EXAMPLES: [&str; 2] = ["rank3-worked", "rank3-negative"];

pub fn default_context() -> SeriesContext {
    SeriesContext::new(5, 8, 12).expect("static context")
}

pub fn by_name(name: &str) -> Option<Result<Scenario>> {
    let ctx = default_context();
    match name {
        "rank3-worked" => Some(rank3_worked(ctx)),
        "rank3-negative" => Some(rank3_negative(ctx)),
        _ => None,
    }
}

fn arithmetic(ctx: SeriesContext, r_plus: u32, r_minus: u32) -> Arithmetic {
    let one = ctx.padic().one();
    Arithmetic {
        r_plus,
        r_minus,
        modular_degree: one,
        sha: one,
        tamagawa: one,
        c_triv: one,
        t_idx: one,
    }
}

fn module(g: Vec<Vec<IwasawaSeries>>, u: Vec<Vec<IwasawaSeries>>, gauge: IwasawaSeries) -> Result<OrthogonalModule> {
    OrthogonalModule::new(
        SemiLinearModule::new(Matrix::from_rows(u)?)?,
        HermitianPairing::new(Matrix::from_rows(g)?)?,
        TauGauge::new(gauge)?,
    )
}

/// `G = [[S,0,0],[0,0,S+T²],[0,τ(S+T²),0]]`, `U` swapping the last two
/// basis vectors, `r = (3, 0)`.
pub fn rank3_worked(ctx: SeriesContext) -> Result<Scenario> {
    let (z, o) = (ctx.zero(), ctx.one());
    let h = ctx.s().add(&ctx.t().pow(2));
    let v = module(
        vec![
            vec![ctx.s(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), h.clone()],
            vec![z.clone(), h.tau(), z.clone()],
        ],
        vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone()],
            vec![z.clone(), o.clone(), z.clone()],
        ],
        o,
    )?;
    let pc = ctx.padic();
    let s = GradedElement::linear(pc.one(), pc.zero());
    let gz = GradedElement::zero(pc, 1);
    let reg = EigenGramMatrix::new(
        3,
        0,
        pc.one(),
        Matrix::from_rows(vec![
            vec![s.clone(), gz.clone(), gz.clone()],
            vec![gz.clone(), gz.clone(), s.clone()],
            vec![gz.clone(), s, gz],
        ])?,
    )?;
    Scenario::new(v, arithmetic(ctx, 3, 0), Some(reg), Vec::new(), 0)
}

/// `G = diag(S², S+Tτ(T), S+Tτ(T))`, `U = I`: the torsion is unchanged
/// but the derived pairing on `V(K_anti)` degenerates.
pub fn rank3_negative(ctx: SeriesContext) -> Result<Scenario> {
    let (z, o) = (ctx.zero(), ctx.one());
    let h = ctx.s().add(&ctx.t().mul(&ctx.t().tau()));
    let v = module(
        vec![
            vec![ctx.s().pow(2), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), z.clone()],
            vec![z.clone(), z.clone(), h],
        ],
        vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone()],
            vec![z.clone(), z, o.clone()],
        ],
        o,
    )?;
    Scenario::new(v, arithmetic(ctx, 3, 0), None, Vec::new(), 0)
}
