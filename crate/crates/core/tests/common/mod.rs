#![allow(dead_code)]

use orthlab_core::linalg::Matrix;
use orthlab_core::{IwasawaSeries, Line, LineSeries, SeriesContext};
use proptest::prelude::*;

pub fn ctx() -> SeriesContext {
    SeriesContext::new(5, 8, 12).unwrap()
}

/// Integer coefficients of a series with total degree below `cap`.
pub fn coeff_grid(cap: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-40i64..=40, cap * (cap + 1) / 2)
}

pub fn series_from(ctx: SeriesContext, coeffs: &[i64]) -> IwasawaSeries {
    let mut f = ctx.zero();
    let mut k = 0;
    for i in 0..ctx.cap() {
        for j in 0..ctx.cap() - i {
            f.set_coeff(i, j, ctx.scalar(coeffs[k]));
            k += 1;
        }
    }
    f
}

pub fn line_from(ctx: SeriesContext, line: Line, coeffs: &[i64]) -> LineSeries {
    ctx.line(line).from_integers(coeffs)
}

/// Unit lower-triangular times a diagonal of small unit constants, with
/// small polynomial entries: an invertible change of basis.
pub fn basis_change(ctx: SeriesContext, n: usize, seeds: &[i64]) -> Matrix<IwasawaSeries> {
    let mut k = 0;
    let mut next = || {
        let v = seeds[k % seeds.len()];
        k += 1;
        v
    };
    let lower = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            ctx.one()
        } else if i > j {
            ctx.constant(ctx.scalar(next()))
                .add(&ctx.s().scale(&ctx.scalar(next())))
                .add(&ctx.t().scale(&ctx.scalar(next())))
        } else {
            ctx.zero()
        }
    });
    let upper = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            let c = next().rem_euclid(4) + 1;
            ctx.constant(ctx.scalar(c))
        } else if i < j {
            ctx.t().scale(&ctx.scalar(next()))
        } else {
            ctx.zero()
        }
    });
    lower.mul(&upper)
}
