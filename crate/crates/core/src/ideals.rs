//! Ideals, subalgebras and the simplicity procedure.

use itertools::Itertools;

use crate::algebra::{format_combination, AlgebraResult, Element, NAryAlgebra, SymmetryHint};
use crate::linalg::{matrix_algebra_closure, EchelonBuilder, Matrix, SubspaceBasis};

/// Every operator `v ↦ ⟦…, v at slot s, …⟧` with basis elements in the other
/// slots. For totally symmetric tables slot 0 with sorted companions suffices.
/// Order: slot-major, then companion tuples lexicographically.
pub fn slot_multiplication_operators(alg: &NAryAlgebra) -> Vec<Matrix> {
    let n = alg.arity();
    let d = alg.dim();
    let total = alg.symmetry() == SymmetryHint::Total;
    let slots = if total { 1 } else { n };
    let companions: Vec<Vec<usize>> = (0..n - 1).map(|_| 0..d).multi_cartesian_product().collect();
    let mut ops = Vec::new();
    for slot in 0..slots {
        for others in &companions {
            if total && !others.windows(2).all(|w| w[0] <= w[1]) {
                continue;
            }
            ops.push(alg.slot_operator_basis(slot, others));
        }
    }
    ops
}

/// Nonzero operators with duplicates removed, keeping first occurrences.
fn distinct_nonzero(ops: Vec<Matrix>) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::new();
    for op in ops {
        if !op.is_zero() && !out.contains(&op) {
            out.push(op);
        }
    }
    out
}

fn saturate(alg: &NAryAlgebra, ops: &[Matrix], generators: &[Vec<crate::field::Scalar>]) -> SubspaceBasis {
    let mut span = EchelonBuilder::new(alg.field(), alg.dim());
    let mut queue = Vec::new();
    for g in generators {
        if span.insert(g).expect("dimension checked") {
            queue.push(g.clone());
        }
    }
    let mut next = 0;
    while next < queue.len() && !span.is_full() {
        let v = queue[next].clone();
        next += 1;
        for op in ops {
            let image = op.apply_row(&v).expect("square operator");
            if span.insert(&image).expect("dimension checked") {
                queue.push(image);
            }
        }
    }
    span.into_subspace()
}

/// Smallest subspace containing the generators and invariant under every
/// slot-multiplication operator.
pub fn ideal_closure(alg: &NAryAlgebra, generators: &[Element]) -> AlgebraResult<SubspaceBasis> {
    for g in generators {
        alg.element(g.coords().to_vec())?;
    }
    let ops = distinct_nonzero(slot_multiplication_operators(alg));
    let gens: Vec<_> = generators.iter().map(|g| g.coords().to_vec()).collect();
    Ok(saturate(alg, &ops, &gens))
}

/// True when `sub` is mapped into itself by every slot-multiplication operator.
pub fn is_ideal(alg: &NAryAlgebra, sub: &SubspaceBasis) -> bool {
    slot_multiplication_operators(alg).iter().all(|op| {
        sub.vectors()
            .iter()
            .all(|v| sub.member(&op.apply_row(v).expect("square operator")).unwrap_or(false))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplicityStatus {
    Simple,
    NotSimple,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityCertificate {
    /// The multiplication operators generate all `d×d` matrices.
    Burnside { dim: usize },
    /// The ideal generated by this element is proper and nonzero.
    WitnessSpin { generator: Element },
    /// The product is identically zero.
    Abelian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub status: SimplicityStatus,
    pub ideal: Option<SubspaceBasis>,
    pub certificate: Option<SimplicityCertificate>,
}

/// Candidate generators for a proper ideal, in a fixed order: basis vectors,
/// `b_i + b_j` and `b_i − b_j` for `i < j`, left-kernel vectors of each
/// distinct operator, then of each pairwise commutator.
fn candidate_generators(alg: &NAryAlgebra, ops: &[Matrix]) -> Vec<Element> {
    let d = alg.dim();
    let mut out: Vec<Element> = (0..d).map(|i| alg.basis_element(i)).collect();
    for (i, j) in (0..d).tuple_combinations() {
        let (bi, bj) = (alg.basis_element(i), alg.basis_element(j));
        out.push(bi.add(&bj));
        out.push(bi.sub(&bj));
    }
    let mut kernel_sources: Vec<Matrix> = ops.to_vec();
    for (a, b) in ops.iter().tuple_combinations() {
        let c = a.commutator(b).expect("square operators");
        if !c.is_zero() {
            kernel_sources.push(c);
        }
    }
    for m in &kernel_sources {
        for v in m.left_nullspace().vectors() {
            out.push(Element::new(v.clone()));
        }
    }
    out
}

/// Three-outcome simplicity test.
///
/// A zero product is never simple. If the multiplication operators generate
/// the full matrix algebra there is no proper invariant subspace (Burnside),
/// so the algebra is simple; this is tried first because it settles the
/// common case without spinning candidates, and it cannot change the outcome
/// of the candidate search. Otherwise the ideal generated by each candidate
/// is computed and the first proper one is reported.
pub fn simplicity(alg: &NAryAlgebra) -> SimplicityReport {
    if alg.is_zero_product() {
        return SimplicityReport {
            status: SimplicityStatus::NotSimple,
            ideal: (alg.dim() > 1).then(|| {
                SubspaceBasis::span(alg.field(), alg.dim(), &[alg.basis_element(0).into_coords()])
                    .expect("dimension agrees")
            }),
            certificate: Some(SimplicityCertificate::Abelian),
        };
    }
    let d = alg.dim();
    let ops = distinct_nonzero(slot_multiplication_operators(alg));
    let closure = matrix_algebra_closure(alg.field(), d, &ops).expect("square operators");
    if closure.dim() == d * d {
        return SimplicityReport {
            status: SimplicityStatus::Simple,
            ideal: None,
            certificate: Some(SimplicityCertificate::Burnside { dim: closure.dim() }),
        };
    }
    for g in candidate_generators(alg, &ops) {
        if g.is_zero() {
            continue;
        }
        let ideal = saturate(alg, &ops, &[g.coords().to_vec()]);
        if !ideal.is_full() {
            return SimplicityReport {
                status: SimplicityStatus::NotSimple,
                ideal: Some(ideal),
                certificate: Some(SimplicityCertificate::WitnessSpin { generator: g }),
            };
        }
    }
    SimplicityReport {
        status: SimplicityStatus::Undetermined,
        ideal: None,
        certificate: None,
    }
}

/// Re-verify a report against the algebra.
pub fn verify_simplicity_report(alg: &NAryAlgebra, report: &SimplicityReport) -> bool {
    match (&report.status, &report.certificate) {
        (SimplicityStatus::Simple, Some(SimplicityCertificate::Burnside { dim })) => {
            let ops = distinct_nonzero(slot_multiplication_operators(alg));
            let closure = matrix_algebra_closure(alg.field(), alg.dim(), &ops).expect("square operators");
            *dim == alg.dim() * alg.dim() && closure.dim() == *dim && !alg.is_zero_product()
        }
        (SimplicityStatus::NotSimple, Some(SimplicityCertificate::Abelian)) => alg.is_zero_product(),
        (SimplicityStatus::NotSimple, Some(SimplicityCertificate::WitnessSpin { generator })) => match &report.ideal {
            Some(ideal) => {
                !ideal.is_zero()
                    && !ideal.is_full()
                    && ideal.member(generator.coords()).unwrap_or(false)
                    && is_ideal(alg, ideal)
            }
            None => false,
        },
        (SimplicityStatus::Undetermined, None) => true,
        _ => false,
    }
}

/// Smallest product-closed subspace containing the generators, and the
/// algebra it carries in its canonical basis. Canonical basis vectors that
/// are basis elements keep their labels; others are named `v1`, `v2`, ….
pub fn subalgebra_closure(alg: &NAryAlgebra, generators: &[Element]) -> AlgebraResult<(SubspaceBasis, NAryAlgebra)> {
    let mut span = EchelonBuilder::new(alg.field(), alg.dim());
    for g in generators {
        span.insert(alg.element(g.coords().to_vec())?.coords())?;
    }
    loop {
        let current = span.to_subspace();
        let vectors = current.vectors();
        let mut grew = false;
        for idx in (0..alg.arity()).map(|_| 0..vectors.len()).multi_cartesian_product() {
            let args: Vec<&[crate::field::Scalar]> = idx.iter().map(|&i| vectors[i].as_slice()).collect();
            let p = alg.multiply_coords(&args);
            grew |= span.insert(&p)?;
        }
        if !grew {
            break;
        }
    }
    let sub = span.into_subspace();
    let labels = subspace_labels(alg, &sub);
    let induced = alg.restrict(&sub, labels)?;
    Ok((sub, induced))
}

pub(crate) fn subspace_labels(alg: &NAryAlgebra, sub: &SubspaceBasis) -> Vec<String> {
    let mut fresh = 0;
    sub.vectors()
        .iter()
        .map(|v| {
            let support: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            if support.len() == 1 && v[support[0]].is_one() {
                alg.labels()[support[0]].clone()
            } else {
                fresh += 1;
                format!("v{fresh}")
            }
        })
        .collect()
}

/// Describe a subspace as labelled combinations, one per canonical basis vector.
pub fn describe_subspace(alg: &NAryAlgebra, sub: &SubspaceBasis) -> Vec<String> {
    sub.vectors()
        .iter()
        .map(|v| format_combination(alg.labels(), v))
        .collect()
}
