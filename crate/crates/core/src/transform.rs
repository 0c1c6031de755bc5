//! Rational changes of the derivation basis `(Δ′, D′) = M(Δ, D)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::linalg::{determinant, inverse};
use crate::arith::rational::format_rational;
use crate::arith::{Coeff, Rational};
use crate::base_field::{check_commutativity, BaseElem, BaseField, DerivationVector};
use crate::delta::{DeltaPoly, DeltaRing, DerivOp, Indet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    Dimension { rows: usize, cols: usize, expected: usize },
    #[error("matrix rows have unequal lengths")]
    Ragged,
    #[error("r = {r} exceeds m = {m}")]
    BlockIndex { r: usize, m: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, TransformError> {
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(TransformError::Ragged);
            }
        }
        Ok(RationalMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
                .collect(),
        }
    }

    /// The elementary matrix interchanging rows `i` and `j`.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::identity(n);
        m.rows.swap(i, j);
        m
    }

    /// `diag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let n = a.nrows() + b.nrows();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, r) in a.rows.iter().enumerate() {
            rows[i][..r.len()].clone_from_slice(r);
        }
        let off = a.nrows();
        for (i, r) in b.rows.iter().enumerate() {
            rows[off + i][off..off + r.len()].clone_from_slice(r);
        }
        RationalMatrix { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    fn require_square(&self, expected: usize) -> Result<(), TransformError> {
        if self.nrows() != expected || self.ncols() != expected {
            return Err(TransformError::Dimension { rows: self.nrows(), cols: self.ncols(), expected });
        }
        Ok(())
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        determinant(&self.rows)
    }

    pub fn inverse(&self) -> Result<Self, TransformError> {
        self.require_square(self.nrows())?;
        inverse(&self.rows).map(|rows| RationalMatrix { rows }).ok_or(TransformError::SingularMatrix)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.nrows(), "matrix shapes");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols())
                    .map(|j| r.iter().enumerate().fold(Rational::zero(), |acc, (k, a)| acc + a * &other.rows[k][j]))
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    /// Row `i` as a derivation vector.
    pub fn row_vector(&self, i: usize) -> DerivationVector {
        DerivationVector(self.rows[i].clone())
    }
}

impl std::fmt::Display for RationalMatrix {
    /// Rows separated by `;`, entries by `,`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

fn require_invertible(m: &RationalMatrix, size: usize) -> Result<(), TransformError> {
    m.require_square(size)?;
    if m.determinant().is_zero() {
        return Err(TransformError::SingularMatrix);
    }
    Ok(())
}

/// `(Δ′, D′)`: row `i` of `M` gives `δ′_i`, the last row gives `D′`.
pub fn make_transformed(
    m: &RationalMatrix,
    field: &BaseField,
) -> Result<(Vec<DerivationVector>, DerivationVector), TransformError> {
    let size = field.num_derivations();
    require_invertible(m, size)?;
    let deltas = (0..size - 1).map(|i| m.row_vector(i)).collect();
    Ok((deltas, m.row_vector(size - 1)))
}

/// The ring `K{x̄}` with `Δ′` acting structurally and `D′` as `D`.
pub fn transformed_ring(m: &RationalMatrix, field: Arc<BaseField>, n: usize) -> Result<DeltaRing, TransformError> {
    let (deltas, d) = make_transformed(m, &field)?;
    Ok(DeltaRing::with_derivations(field, n, deltas, d))
}

type OpPoly = BTreeMap<Vec<u32>, Rational>;

fn op_mul(a: &OpPoly, b: &OpPoly) -> OpPoly {
    let mut out = OpPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca * cb;
            let entry = out.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `(δ′)^α` as a polynomial in the commuting `δ_1, …, δ_m, D`.
fn expand_operator(m: &RationalMatrix, alpha: &[u32]) -> OpPoly {
    let size = m.nrows();
    let mut acc: OpPoly = [(vec![0; size], Rational::one())].into_iter().collect();
    for (i, &a) in alpha.iter().enumerate() {
        let row: OpPoly = (0..size)
            .filter(|&k| !m.get(i, k).is_zero())
            .map(|k| {
                let mut e = vec![0; size];
                e[k] = 1;
                (e, m.get(i, k).clone())
            })
            .collect();
        for _ in 0..a {
            acc = op_mul(&acc, &row);
        }
    }
    acc
}

/// Rewrites jets over `Δ′ ∪ {D′}` as jets over `Δ ∪ {D}`. Operators of
/// `f` have length `m + 1`, the last slot being `D′`.
pub fn rewrite_jets(f: &DeltaPoly, m: &RationalMatrix) -> Result<DeltaPoly, TransformError> {
    let size = m.nrows();
    require_invertible(m, size)?;
    let mut cache: BTreeMap<DerivOp, OpPoly> = BTreeMap::new();
    Ok(f.substitute(|u: &Indet| {
        assert_eq!(u.op.len(), size, "jet over the full alphabet expected");
        let ops = cache.entry(u.op.clone()).or_insert_with(|| expand_operator(m, u.op.exponents()));
        let mut out = DeltaPoly::zero();
        for (e, c) in ops.iter() {
            out.add_term(
                crate::arith::Monomial::var(Indet::new(u.block, u.var, DerivOp::from_exponents(e.clone()))),
                BaseElem::rational(c.clone()),
            );
        }
        out
    }))
}

/// `E · diag(M′, I) · E · N`, where `E` interchanges rows `r + 1` and
/// `m + 1` (1-based).
pub fn kolchin_matrix(
    mp: &RationalMatrix,
    r: usize,
    m: usize,
    n: &RationalMatrix,
) -> Result<RationalMatrix, TransformError> {
    if r > m {
        return Err(TransformError::BlockIndex { r, m });
    }
    require_invertible(mp, r + 1)?;
    require_invertible(n, m + 1)?;
    let e = RationalMatrix::swap(m + 1, r, m);
    let block = RationalMatrix::block_diag(mp, &RationalMatrix::identity(m - r));
    Ok(e.mul(&block).mul(&e).mul(n))
}

/// A pair of transformed derivations that fail to commute.
#[derive(Clone, Debug, PartialEq)]
pub struct CommuteFailure {
    pub first: usize,
    pub second: usize,
    /// What the commutator was applied to.
    pub subject: String,
}

/// Verifies that the rows of `M` give commuting derivations, both on the
/// generators of `K` and on jets `x_j`, `g·x_j` of the full jet ring.
pub fn check_transformed_commute(
    m: &RationalMatrix,
    field: &Arc<BaseField>,
    n: usize,
) -> Result<Result<(), CommuteFailure>, TransformError> {
    let size = field.num_derivations();
    require_invertible(m, size)?;
    let vectors: Vec<DerivationVector> = (0..size).map(|i| m.row_vector(i)).collect();
    if let Err(report) = check_commutativity(&field.with_derivations(&vectors)) {
        return Ok(Err(CommuteFailure {
            first: report.first,
            second: report.second,
            subject: format!("generator {}", report.generator),
        }));
    }
    let full = DeltaRing::full(field.clone(), n);
    let act = |i: usize, f: &DeltaPoly| -> DeltaPoly {
        (0..size).fold(DeltaPoly::zero(), |acc, k| {
            let c = m.get(i, k);
            if c.is_zero() {
                acc
            } else {
                acc + full.apply_delta(k, f).scale(&BaseElem::rational(c.clone()))
            }
        })
    };
    let mut subjects: Vec<(String, DeltaPoly)> = Vec::new();
    for j in 0..n {
        subjects.push((format!("x{}", j + 1), full.x(j)));
        for (g, name) in field.generators().iter().enumerate() {
            subjects.push((format!("{}*x{}", name, j + 1), full.x(j).scale(&BaseElem::generator(g))));
        }
    }
    for i in 0..size {
        for k in i + 1..size {
            for (label, f) in &subjects {
                if act(i, &act(k, f)) != act(k, &act(i, f)) {
                    return Ok(Err(CommuteFailure { first: i, second: k, subject: label.clone() }));
                }
            }
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn make_transformed_examples() {
        let field = BaseField::rationals(2);
        let (d, dd) = make_transformed(&RationalMatrix::identity(2), &field).unwrap();
        assert_eq!(d, vec![field.basis_vector(0)]);
        assert_eq!(dd, field.d_vector());
        let (d, dd) = make_transformed(&mat(&[&[0, 1], &[1, 0]]), &field).unwrap();
        assert_eq!(d, vec![field.d_vector()]);
        assert_eq!(dd, field.basis_vector(0));
        assert_eq!(make_transformed(&mat(&[&[1, 2], &[2, 4]]), &field), Err(TransformError::SingularMatrix));
    }

    #[test]
    fn rewrite_examples() {
        let field = Arc::new(BaseField::rationals(2));
        let full = DeltaRing::full(field, 1);
        let m = mat(&[&[1, 1], &[0, 1]]);
        let d1 = full.jet(0, 0, &[1, 0]);
        let dd = full.jet(0, 0, &[0, 1]);
        assert_eq!(rewrite_jets(&d1, &m).unwrap(), &d1 + &dd);
        let two = full.jet(0, 0, &[2, 0]);
        let expect = &(&two + &full.jet(0, 0, &[1, 1]).scale(&BaseElem::rational(int(2)))) + &full.jet(0, 0, &[0, 2]);
        assert_eq!(rewrite_jets(&two, &m).unwrap(), expect);
        let f = &two * &d1;
        assert_eq!(rewrite_jets(&f, &RationalMatrix::identity(2)).unwrap(), f);
        let back = rewrite_jets(&rewrite_jets(&f, &m).unwrap(), &m.inverse().unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn kolchin_examples() {
        let id2 = RationalMatrix::identity(2);
        assert_eq!(kolchin_matrix(&id2, 1, 1, &id2).unwrap(), id2);
        assert_eq!(kolchin_matrix(&mat(&[&[2]]), 0, 1, &id2).unwrap(), mat(&[&[1, 0], &[0, 2]]));
        let mp = mat(&[&[1, 1], &[0, 1]]);
        let n = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(kolchin_matrix(&mp, 1, 1, &n).unwrap(), mp.mul(&n));
        assert_eq!(kolchin_matrix(&mat(&[&[0]]), 0, 1, &id2), Err(TransformError::SingularMatrix));
    }

    #[test]
    fn commute_examples() {
        let field = Arc::new(BaseField::partials(&["t1", "t2"], 2));
        assert_eq!(check_transformed_commute(&RationalMatrix::identity(2), &field, 1), Ok(Ok(())));
        assert_eq!(check_transformed_commute(&mat(&[&[0, 1], &[1, 0]]), &field, 1), Ok(Ok(())));
        assert_eq!(check_transformed_commute(&mat(&[&[2, 3], &[1, -1]]), &field, 2), Ok(Ok(())));
    }
}
