use super::{minors_by_mask, smith_line, Matrix, RingElement};
use crate::error::{Error, Result};
use crate::series::ideal::IdealGenerator;
use crate::series::prep2::gcd2;
use crate::series::{IwasawaSeries, LineSeries};

/// Characteristic ideal of `coker(a)` over a line ring: the product of the
/// elementary divisors.
pub fn char_ideal_line(a: &Matrix<LineSeries>) -> Result<IdealGenerator> {
    if a.rows() > a.cols() {
        return Err(Error::NotTorsion(format!(
            "{} generators but only {} relations",
            a.rows(),
            a.cols()
        )));
    }
    let snf = smith_line(a)?;
    let mut acc = a.get(0, 0).one_like();
    for (k, d) in snf.diag.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::NotTorsion(format!("elementary divisor {k} vanishes")));
        }
        acc = acc.mul(d);
    }
    Ok(IdealGenerator::line(acc))
}

/// All maximal (row-size) minors, skipping structural zeros.
pub fn maximal_minors<R: RingElement>(a: &Matrix<R>) -> Vec<R> {
    minors_by_mask(a).into_iter().filter_map(|(_, v)| v).collect()
}

/// Remove rows and columns through unit pivots (Schur complements).
fn eliminate_units(a: &Matrix<IwasawaSeries>) -> Result<Matrix<IwasawaSeries>> {
    let mut cur = a.clone();
    loop {
        let pivot = (0..cur.rows())
            .flat_map(|i| (0..cur.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| cur.get(i, j).is_unit())
            .min_by_key(|&(i, j)| cur.get(i, j).constant_term().valuation());
        let Some((pi, pj)) = pivot else {
            return Ok(cur);
        };
        let inv = cur.get(pi, pj).inverse()?;
        let rows: Vec<usize> = (0..cur.rows()).filter(|&i| i != pi).collect();
        let cols: Vec<usize> = (0..cur.cols()).filter(|&j| j != pj).collect();
        let next = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            let (r, c) = (rows[i], cols[j]);
            let corr = cur.get(r, pj).mul(&inv).mul(cur.get(pi, c));
            cur.get(r, c).sub(&corr)
        });
        cur = next;
        if cur.rows() == 0 || cur.cols() == 0 {
            return Ok(cur);
        }
    }
}

/// Divisorial part of the 0th Fitting ideal of `coker(a)` over the
/// two-variable ring.
pub fn char_gcd_two_var(a: &Matrix<IwasawaSeries>) -> Result<IdealGenerator> {
    let ctx = a
        .entries()
        .first()
        .ok_or_else(|| Error::Dimension("empty presentation".into()))?
        .context();
    if a.rows() > a.cols() {
        return Err(Error::NotTorsion(format!(
            "{} generators but only {} relations",
            a.rows(),
            a.cols()
        )));
    }
    let rest = eliminate_units(a)?;
    if rest.rows() == 0 {
        return Ok(IdealGenerator::two_var(ctx.one()));
    }
    let minors: Vec<IwasawaSeries> = maximal_minors(&rest)
        .into_iter()
        .filter(|m| !m.is_zero())
        .collect();
    let mut iter = minors.into_iter();
    let mut acc = iter
        .next()
        .ok_or_else(|| Error::NotTorsion("all maximal minors vanish".into()))?;
    for m in iter {
        if acc.is_unit() {
            break;
        }
        acc = gcd2(&acc, &m)?;
    }
    Ok(IdealGenerator::two_var(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Line, SeriesContext};

    #[test]
    fn line_examples() {
        let c = SeriesContext::new(5, 8, 12).unwrap();
        let l = c.line(Line::Anti);
        let t = l.var();
        let tp = t.add(&l.constant(c.scalar(5)));
        let diag = Matrix::from_rows(vec![vec![t.clone(), l.zero()], vec![l.zero(), tp.clone()]]).unwrap();
        let got = char_ideal_line(&diag).unwrap();
        let want = IdealGenerator::line(t.mul(&tp));
        assert!(got.equivalent(&want, 6).unwrap().equal);

        let tri = Matrix::from_rows(vec![vec![t.clone(), l.one()], vec![l.zero(), t.clone()]]).unwrap();
        let got = char_ideal_line(&tri).unwrap();
        assert!(got.equivalent(&IdealGenerator::line(t.pow(2)), 6).unwrap().equal);

        let free = Matrix::from_rows(vec![vec![t.clone(), l.zero()], vec![l.zero(), l.zero()]]).unwrap();
        assert!(matches!(char_ideal_line(&free), Err(Error::NotTorsion(_))));
    }

    #[test]
    fn two_variable_examples() {
        let c = SeriesContext::new(5, 8, 12).unwrap();
        let diag = Matrix::from_rows(vec![vec![c.s(), c.zero()], vec![c.zero(), c.t()]]).unwrap();
        let got = char_gcd_two_var(&diag).unwrap();
        let want = IdealGenerator::two_var(c.s().mul(&c.t()));
        assert!(got.equivalent(&want, 6).unwrap().equal);

        let row = Matrix::from_rows(vec![vec![c.s(), c.t()]]).unwrap();
        let got = char_gcd_two_var(&row).unwrap();
        assert!(matches!(got.generator(), crate::series::ideal::Generator::Two(g) if g.is_unit()));
    }
}
