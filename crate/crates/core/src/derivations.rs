//! Derivation algebras and inner derivations.
//!
//! An operator `D` is stored as a `d×d` matrix acting on row vectors, so
//! row `i` is `D(b_i)`. Operator spaces are subspaces of the `d²`
//! coordinates obtained by flattening row-major: entry `(i,j)` is
//! coordinate `i·d + j`.

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraResult, Element, NAryAlgebra, SymmetryHint};
use crate::catalog::{skew_part, InvolutiveAlgebra};
use crate::checks::{leibniz_basis, ArgGroup, Verdict, Witness, WitnessKind};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{EchelonBuilder, Matrix, SubspaceBasis};

/// A subspace of `End(𝔽^d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSpace {
    dim_ambient: usize,
    basis: SubspaceBasis,
}

impl OperatorSpace {
    pub fn new(dim_ambient: usize, basis: SubspaceBasis) -> AlgebraResult<Self> {
        if basis.ambient_dim() != dim_ambient * dim_ambient {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim_ambient * dim_ambient,
                found: basis.ambient_dim(),
            });
        }
        Ok(OperatorSpace { dim_ambient, basis })
    }

    pub fn span(field: &FieldSpec, d: usize, operators: &[Matrix]) -> AlgebraResult<Self> {
        let mut b = EchelonBuilder::new(field, d * d);
        for m in operators {
            b.insert(&m.flatten())?;
        }
        OperatorSpace::new(d, b.into_subspace())
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    /// Canonical basis operators.
    pub fn operators(&self) -> Vec<Matrix> {
        self.basis
            .vectors()
            .iter()
            .map(|v| Matrix::from_flat(self.basis.field(), self.dim_ambient, v).expect("d² coordinates"))
            .collect()
    }

    pub fn contains(&self, m: &Matrix) -> AlgebraResult<bool> {
        if m.rows() != self.dim_ambient || m.cols() != self.dim_ambient {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim_ambient,
                found: m.rows(),
            });
        }
        Ok(self.basis.member(&m.flatten())?)
    }

    /// Closed under the commutator `[A,B] = AB − BA`, checked on basis pairs.
    pub fn is_lie_closed(&self) -> bool {
        let ops = self.operators();
        ops.iter()
            .tuple_combinations()
            .all(|(a, b)| self.contains(&a.commutator(b).expect("square")).unwrap_or(false))
    }
}

/// Leibniz equations for the unknown `D` at one basis tuple: one row per
/// output coordinate, over the `d²` entries of `D`.
fn leibniz_rows(alg: &NAryAlgebra, t: &[usize]) -> Vec<Vec<Scalar>> {
    let d = alg.dim();
    let f = alg.field();
    let mut rows = vec![vec![f.zero(); d * d]; d];
    // D⟦b_t⟧ = Σ_k c_k D(b_k): unknown (k, j) contributes c_k to coordinate j.
    for (k, c) in alg.basis_product(t) {
        for (j, row) in rows.iter_mut().enumerate() {
            row[k * d + j] = row[k * d + j].add(c);
        }
    }
    // Σ_s ⟦…, D(b_{t_s}), …⟧: unknown (t_s, m) contributes ⟦…, b_m, …⟧.
    let mut u = t.to_vec();
    for s in 0..t.len() {
        for m in 0..d {
            u[s] = m;
            for (r, c) in alg.basis_product(&u) {
                let v = &mut rows[*r][t[s] * d + m];
                *v = v.sub(c);
            }
        }
        u[s] = t[s];
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// `Der(alg)`: all `D` with `D⟦b_{i₁},…,b_{iₙ}⟧ = Σ_s ⟦…, D b_{i_s}, …⟧` on
/// every basis tuple (enough by multilinearity). For totally symmetric
/// tables one tuple per orbit gives the same equations.
pub fn derivation_algebra(alg: &NAryAlgebra) -> OperatorSpace {
    let d = alg.dim();
    let total = alg.symmetry() == SymmetryHint::Total;
    let tuples: Vec<Vec<usize>> = alg
        .tuples()
        .filter(|t| !total || t.windows(2).all(|w| w[0] <= w[1]))
        .collect();
    let blocks: Vec<Vec<Vec<Scalar>>> = tuples.par_iter().map(|t| leibniz_rows(alg, t)).collect();
    let mut system = EchelonBuilder::new(alg.field(), d * d);
    for row in blocks.iter().flatten() {
        system.insert(row).expect("d² columns");
        if system.is_full() {
            break;
        }
    }
    OperatorSpace::new(d, system.into_subspace().annihilator()).expect("d² columns")
}

/// Span of `D_{x,y}` over pairs of basis `(n−1)`-tuples.
pub fn inner_derivation_space(alg: &NAryAlgebra) -> OperatorSpace {
    let d = alg.dim();
    let total = alg.symmetry() == SymmetryHint::Total;
    let short: Vec<Vec<usize>> = (0..alg.arity() - 1)
        .map(|_| 0..d)
        .multi_cartesian_product()
        .filter(|t| !total || t.windows(2).all(|w| w[0] <= w[1]))
        .collect();
    let mut span = EchelonBuilder::new(alg.field(), d * d);
    for (x, y) in short.iter().tuple_combinations() {
        span.insert(&alg.d_operator_basis(x, y).flatten()).expect("d² columns");
        if span.is_full() {
            break;
        }
    }
    OperatorSpace::new(d, span.into_subspace()).expect("d² columns")
}

/// Leibniz rule for `op` on every basis tuple; the first failing tuple in
/// lexicographic order is reported.
pub fn is_derivation(alg: &NAryAlgebra, op: &Matrix) -> AlgebraResult<Verdict> {
    let d = alg.dim();
    if op.rows() != d || op.cols() != d {
        return Err(AlgebraError::DimensionMismatch {
            expected: d,
            found: op.rows(),
        });
    }
    let tuples: Vec<Vec<usize>> = alg.tuples().collect();
    let found = tuples.par_iter().find_map_first(|t| {
        let (l, r) = leibniz_basis(alg, op, t);
        (l != r).then(|| (t.clone(), l, r))
    });
    Ok(Verdict::from_witness(found.map(|(t, l, r)| {
        let z = t.iter().map(|&i| alg.basis_element(i)).collect();
        let mut w = Witness::new(
            WitnessKind::Derivation,
            vec![ArgGroup::new("z", z)],
            Element::new(l),
            Element::new(r),
        );
        w.operator = Some(op.clone());
        w
    })))
}

/// `so(d)`: the span of `e_ij − e_ji`, `i < j`.
pub fn skew_space(field: &FieldSpec, d: usize) -> OperatorSpace {
    let ops: Vec<Matrix> = (0..d)
        .tuple_combinations()
        .map(|(i, j)| {
            Matrix::unit(field, d, i, j)
                .sub(&Matrix::unit(field, d, j, i))
                .expect("same shape")
        })
        .collect();
    OperatorSpace::span(field, d, &ops).expect("d² columns")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inclusion {
    Equal,
    /// The first space is properly contained in the second.
    FirstInSecond,
    /// The second space is properly contained in the first.
    SecondInFirst,
    Incomparable,
}

pub fn compare(a: &OperatorSpace, b: &OperatorSpace) -> AlgebraResult<Inclusion> {
    let ab = b.basis.contains(&a.basis)?;
    let ba = a.basis.contains(&b.basis)?;
    Ok(match (ab, ba) {
        (true, true) => Inclusion::Equal,
        (true, false) => Inclusion::FirstInSecond,
        (false, true) => Inclusion::SecondInFirst,
        (false, false) => Inclusion::Incomparable,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("the operator is not a derivation of the ternary algebra")]
    NotTernaryDerivation(Box<Witness>),
    #[error("D(1) is not in the skew part")]
    UnitImageNotSkew(Element),
    #[error("D − Ψ is not a derivation of the binary algebra")]
    PhiNotDerivation(Box<Witness>),
    #[error("D − Ψ does not kill the unit")]
    PhiMovesUnit(Element),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<crate::linalg::LinalgError> for DecompositionError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        DecompositionError::Algebra(e.into())
    }
}

/// `D = Φ + Ψ` with `Ψ(x) = x·D(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2Decomposition {
    pub phi: Matrix,
    pub psi: Matrix,
}

/// Split a derivation of `⟦x,y,z⟧ = (xȳ)z` into a binary derivation `Φ` of
/// `h` and a right multiplication `Ψ` by the skew element `D(1)`, verifying
/// every step.
pub fn d2_decompose(h: &InvolutiveAlgebra, op: &Matrix) -> Result<D2Decomposition, DecompositionError> {
    let ternary = crate::catalog::ternary_from_involutive(h);
    let verdict = is_derivation(&ternary, op)?;
    if let Some(w) = verdict.witness {
        return Err(DecompositionError::NotTernaryDerivation(Box::new(w)));
    }
    let d1 = h.unit().apply(op)?;
    if !skew_part(h)?.member(d1.coords())? {
        return Err(DecompositionError::UnitImageNotSkew(d1));
    }
    let rows: Vec<Vec<Scalar>> = (0..h.dim())
        .map(|i| h.mul(&h.algebra().basis_element(i), &d1).into_coords())
        .collect();
    let psi = Matrix::from_rows(h.field(), &rows)?;
    let phi = op.sub(&psi)?;
    if let Some(w) = is_derivation(h.algebra(), &phi)?.witness {
        return Err(DecompositionError::PhiNotDerivation(Box::new(w)));
    }
    let phi_unit = h.unit().apply(&phi)?;
    if !phi_unit.is_zero() {
        return Err(DecompositionError::PhiMovesUnit(phi_unit));
    }
    Ok(D2Decomposition { phi, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_a, make_vfgh, quaternions, ternary_from_involutive, zero_algebra, FormFlags};
    use crate::checks::recheck;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn der_of_a_is_so_n() {
        let a = make_a(&q(), 4).unwrap();
        let der = derivation_algebra(&a);
        assert_eq!(der.dim(), 6);
        assert_eq!(compare(&der, &skew_space(&q(), 4)).unwrap(), Inclusion::Equal);
        assert_eq!(compare(&inner_derivation_space(&a), &der).unwrap(), Inclusion::Equal);
        for m in der.operators() {
            assert_eq!(m.transpose(), m.neg());
        }
        assert!(der.is_lie_closed());
    }

    #[test]
    fn inner_derivations_of_a_dim_three() {
        let a = make_a(&q(), 3).unwrap();
        assert_eq!(
            compare(&inner_derivation_space(&a), &skew_space(&q(), 3)).unwrap(),
            Inclusion::Equal
        );
    }

    #[test]
    fn invertible_derivation_of_a() {
        let f = q();
        let a = make_a(&f, 4).unwrap();
        let mut op = Matrix::zeros(&f, 4, 4);
        for (i, j) in (0..4).tuple_combinations() {
            op.set(i, j, f.one());
            op.set(j, i, f.one().neg());
        }
        assert!(is_derivation(&a, &op).unwrap().passed());
        assert_eq!(op.determinant().unwrap(), f.one());
        let a2 = make_a(&f, 2).unwrap();
        let v = is_derivation(&a2, &Matrix::unit(&f, 2, 0, 0)).unwrap();
        assert!(!v.passed());
        assert!(recheck(&a2, v.witness.as_ref().unwrap()).unwrap());
        assert!(is_derivation(&a2, &Matrix::unit(&f, 3, 0, 0)).is_err());
    }

    #[test]
    fn vfgh_without_forms() {
        let v = make_vfgh(&q(), 2, FormFlags::default()).unwrap();
        let der = derivation_algebra(&v);
        assert_eq!(der.dim(), 4);
        for m in der.operators() {
            assert!(m.row(0).iter().all(Scalar::is_zero));
            assert!((1..3).all(|i| m.get(i, 0).is_zero()));
        }
        assert_eq!(inner_derivation_space(&v).dim(), 0);
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(
            derivation_algebra(&make_vfgh(&f2, 1, FormFlags::default()).unwrap()).dim(),
            4
        );
        for n in 2..=3 {
            let der = derivation_algebra(&make_vfgh(&f2, n, FormFlags::default()).unwrap());
            assert_eq!(der.dim(), n * n + n + 1);
        }
    }

    #[test]
    fn zero_algebra_has_every_derivation_and_no_inner_ones() {
        let z = zero_algebra(&q(), 3, 2).unwrap();
        assert_eq!(derivation_algebra(&z).dim(), 4);
        assert_eq!(inner_derivation_space(&z).dim(), 0);
        assert!(is_derivation(&z, &Matrix::zeros(&q(), 2, 2)).unwrap().passed());
    }

    #[test]
    fn quaternion_ternary_derivations_decompose() {
        let f = q();
        let h = quaternions(&f, &f.from_i64(-1), &f.from_i64(-1)).unwrap();
        let d2 = ternary_from_involutive(&h);
        let der = derivation_algebra(&d2);
        assert_eq!(der.dim(), 6);
        assert_eq!(derivation_algebra(h.algebra()).dim(), 3);
        for op in der.operators() {
            let dec = d2_decompose(&h, &op).unwrap();
            assert_eq!(dec.phi.add(&dec.psi).unwrap(), op);
        }
        let zero = d2_decompose(&h, &Matrix::zeros(&f, 4, 4)).unwrap();
        assert!(zero.phi.is_zero() && zero.psi.is_zero());
        let rows: Vec<Vec<Scalar>> = (0..4)
            .map(|k| {
                h.mul(&h.algebra().basis_element(k), &h.algebra().basis_element(1))
                    .into_coords()
            })
            .collect();
        let right_i = Matrix::from_rows(&f, &rows).unwrap();
        let dec = d2_decompose(&h, &right_i).unwrap();
        assert!(dec.phi.is_zero());
        assert_eq!(h.unit().apply(&dec.psi).unwrap(), h.algebra().basis_element(1));
        assert!(matches!(
            d2_decompose(&h, &Matrix::identity(&f, 4)),
            Err(DecompositionError::NotTernaryDerivation(_))
        ));
    }
}
