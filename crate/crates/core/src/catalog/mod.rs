//! Constructors for the concrete algebras used throughout the crate.
//!
//! Forms are the Kronecker delta on the standard basis. Unless noted
//! otherwise, basis elements of `𝔽 ⊕ 𝕍` are labelled `1, b1, …, bn`, or
//! `1, b` when `dim 𝕍 = 1`.

mod cayley_dickson;
mod tkk;

pub use cayley_dickson::{
    cd_base, cd_double, composition_lemma_check, form, norm, octonions, quaternions, skew_part,
    ternary_from_involutive, trace, InvolutiveAlgebra,
};
pub use tkk::{tkk_grading_a1, tkk_lminus1, tkk_ternary, GradedTernary, Symmetrizer};

use itertools::Itertools;

use crate::algebra::{default_labels, AlgebraError, AlgebraResult, NAryAlgebra, SymmetryHint};
use crate::field::{FieldSpec, Scalar};
use crate::ideals::subalgebra_closure;

/// Which of the forms `f`, `g`, `h` are the delta form (the rest vanish).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FormFlags {
    pub f: bool,
    pub g: bool,
    pub h: bool,
}

impl FormFlags {
    pub fn new(f: bool, g: bool, h: bool) -> Self {
        FormFlags { f, g, h }
    }

    /// All eight flag combinations, `f` most significant.
    pub fn all() -> Vec<FormFlags> {
        (0..8u8)
            .map(|m| FormFlags::new(m & 4 != 0, m & 2 != 0, m & 1 != 0))
            .collect()
    }

    /// Short name such as `f0h` (a zero marks a vanishing form).
    pub fn name(&self) -> String {
        format!(
            "{}{}{}",
            if self.f { 'f' } else { '0' },
            if self.g { 'g' } else { '0' },
            if self.h { 'h' } else { '0' }
        )
    }
}

fn unit_plus_vector_labels(dim_v: usize) -> Vec<String> {
    let mut labels = vec!["1".to_string()];
    if dim_v == 1 {
        labels.push("b".into());
    } else {
        labels.extend((1..=dim_v).map(|i| format!("b{i}")));
    }
    labels
}

fn ensure_positive(dim: usize) -> AlgebraResult<()> {
    if dim == 0 {
        Err(AlgebraError::ZeroDimension)
    } else {
        Ok(())
    }
}

/// The ternary algebra `𝒱_{f,g,h}` on `𝔽 ⊕ 𝕍`:
///
/// `⟦α₁+v₁, α₂+v₂, α₃+v₃⟧ = α₁α₂α₃ + α₁f(v₂,v₃) + α₂f(v₁,v₃) + α₃f(v₁,v₂) + g(v₁,v₂,v₃)
///  + (α₂α₃ + h(v₂,v₃))v₁ + (α₁α₃ + h(v₁,v₃))v₂ + (α₁α₂ + h(v₁,v₂))v₃`.
pub fn make_vfgh(field: &FieldSpec, dim_v: usize, flags: FormFlags) -> AlgebraResult<NAryAlgebra> {
    ensure_positive(dim_v)?;
    let dim = dim_v + 1;
    let one = field.one();
    NAryAlgebra::from_fn(
        field,
        3,
        dim,
        unit_plus_vector_labels(dim_v),
        SymmetryHint::Total,
        |t| {
            let alpha = |s: usize| t[s] == 0;
            let delta = |a: usize, b: usize| t[a] != 0 && t[a] == t[b];
            let mut out = vec![field.zero(); dim];
            let mut scalar = 0i64;
            if alpha(0) && alpha(1) && alpha(2) {
                scalar += 1;
            }
            for (s, a, b) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
                if flags.f && alpha(s) && delta(a, b) {
                    scalar += 1;
                }
                if t[s] != 0 && ((alpha(a) && alpha(b)) || (flags.h && delta(a, b))) {
                    out[t[s]] = out[t[s]].add(&one);
                }
            }
            if flags.g && delta(0, 1) && delta(1, 2) {
                scalar += 1;
            }
            out[0] = field.from_i64(scalar);
            out
        },
    )
}

/// The ternary algebra `𝔸` on `𝕍`: `⟦x,y,z⟧ = (y,z)x + (x,z)y + (x,y)z`.
pub fn make_a(field: &FieldSpec, dim: usize) -> AlgebraResult<NAryAlgebra> {
    ensure_positive(dim)?;
    NAryAlgebra::from_fn(field, 3, dim, default_labels(dim), SymmetryHint::Total, |t| {
        let mut out = vec![field.zero(); dim];
        for (s, a, b) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
            if t[a] == t[b] {
                out[t[s]] = out[t[s]].add(&field.one());
            }
        }
        out
    })
}

/// The binary Jordan algebra `J(𝕍,f)`: `(α+u)(β+v) = αβ + f(u,v) + αv + βu`.
pub fn make_j_of_form(field: &FieldSpec, dim_v: usize) -> AlgebraResult<NAryAlgebra> {
    ensure_positive(dim_v)?;
    let dim = dim_v + 1;
    NAryAlgebra::from_fn(
        field,
        2,
        dim,
        unit_plus_vector_labels(dim_v),
        SymmetryHint::Total,
        |t| {
            let mut out = vec![field.zero(); dim];
            match (t[0], t[1]) {
                (0, j) | (j, 0) => out[j] = field.one(),
                (i, j) if i == j => out[0] = field.one(),
                _ => {}
            }
            out
        },
    )
}

fn matrix_unit_label(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("e{}{}", i + 1, j + 1)
    } else {
        format!("e{}_{}", i + 1, j + 1)
    }
}

/// `M_n` with `⟦A,B,C⟧ = Σ_{σ∈S₃} σ(A)σ(B)σ(C)`, on matrix units `e_ij`
/// (index `n·(i−1) + (j−1)`).
pub fn make_sym_matrix(field: &FieldSpec, n: usize) -> AlgebraResult<NAryAlgebra> {
    if n < 2 {
        return Err(AlgebraError::InvalidParameter(format!(
            "matrix size must be at least 2, got {n}"
        )));
    }
    let labels = (0..n)
        .cartesian_product(0..n)
        .map(|(i, j)| matrix_unit_label(n, i, j))
        .collect();
    NAryAlgebra::from_fn(field, 3, n * n, labels, SymmetryHint::Total, |t| {
        let mut out = vec![field.zero(); n * n];
        for p in t.iter().permutations(3) {
            let (a, b, c) = (*p[0], *p[1], *p[2]);
            let ((r1, c1), (r2, c2), (r3, c3)) = ((a / n, a % n), (b / n, b % n), (c / n, c % n));
            if c1 == r2 && c2 == r3 {
                let k = r1 * n + c3;
                out[k] = out[k].add(&field.one());
            }
        }
        out
    })
}

fn matrix_subalgebra(field: &FieldSpec, n: usize, gens: [(usize, usize); 2]) -> AlgebraResult<NAryAlgebra> {
    let m = make_sym_matrix(field, n)?;
    let generators: Vec<_> = gens
        .iter()
        .map(|&(i, j)| m.basis_element((i - 1) * n + (j - 1)))
        .collect();
    Ok(subalgebra_closure(&m, &generators)?.1)
}

fn check_unit_indices(n: usize, i: usize, j: usize) -> AlgebraResult<()> {
    if i == j {
        return Err(AlgebraError::InvalidParameter(format!(
            "indices must differ, got i = j = {i}"
        )));
    }
    for k in [i, j] {
        if k == 0 || k > n {
            return Err(AlgebraError::InvalidParameter(format!("index {k} outside 1..={n}")));
        }
    }
    Ok(())
}

/// The subalgebra of `make_sym_matrix(n)` generated by `e_ii, e_ij` (1-based).
pub fn s1(field: &FieldSpec, n: usize, i: usize, j: usize) -> AlgebraResult<NAryAlgebra> {
    check_unit_indices(n, i, j)?;
    matrix_subalgebra(field, n, [(i, i), (i, j)])
}

/// The subalgebra of `make_sym_matrix(n)` generated by `e_ij, e_ji` (1-based).
pub fn s2(field: &FieldSpec, n: usize, i: usize, j: usize) -> AlgebraResult<NAryAlgebra> {
    check_unit_indices(n, i, j)?;
    matrix_subalgebra(field, n, [(i, j), (j, i)])
}

/// Sign of the permutation sorting `t` (entries assumed distinct).
fn sorting_sign(t: &[usize]) -> i64 {
    let inversions = (0..t.len()).tuple_combinations().filter(|&(a, b)| t[a] > t[b]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The 4-dimensional Filippov algebra `A₁`:
/// `[e₁,…,ê_i,…,e₄] = (−1)^i e_i`, extended alternatingly.
pub fn filippov_a1(field: &FieldSpec) -> AlgebraResult<NAryAlgebra> {
    NAryAlgebra::from_fn(
        field,
        3,
        4,
        default_labels(4).iter().map(|l| l.replace('b', "e")).collect(),
        SymmetryHint::None,
        |t| {
            let mut out = vec![field.zero(); 4];
            if t.iter().all_unique() {
                let missing = (0..4).find(|k| !t.contains(k)).expect("three of four indices");
                let hat_sign = if (missing + 1) % 2 == 0 { 1 } else { -1 };
                out[missing] = field.from_i64(hat_sign * sorting_sign(t));
            }
            out
        },
    )
}

/// `{x,y,z} = (1/6)(−(y,z)x + (x,z)y − (x,y)z + [x,y,z])` on `A₁` with the delta form.
pub fn a1_brace(field: &FieldSpec) -> AlgebraResult<NAryAlgebra> {
    let p = field.characteristic();
    if p == 2 || p == 3 {
        return Err(AlgebraError::Characteristic {
            characteristic: p,
            reason: "the brace divides by 6".into(),
        });
    }
    let a1 = filippov_a1(field)?;
    let sixth = field.from_i64(6).inv()?;
    NAryAlgebra::from_fn(field, 3, 4, a1.labels().to_vec(), SymmetryHint::None, |t| {
        let mut out = a1.basis_product_element(t).into_coords();
        for (s, a, b, sign) in [(0, 1, 2, -1), (1, 0, 2, 1), (2, 0, 1, -1)] {
            if t[a] == t[b] {
                out[t[s]] = out[t[s]].add(&field.from_i64(sign));
            }
        }
        out.iter().map(|c| c.mul(&sixth)).collect()
    })
}

/// The 2-dimensional totally commutative algebra on `a, b` with
/// `⟦a,a,a⟧ = 6b, ⟦a,a,b⟧ = 2a, ⟦a,b,b⟧ = −2b, ⟦b,b,b⟧ = −6a`, over any field.
pub fn make_tca1(field: &FieldSpec) -> AlgebraResult<NAryAlgebra> {
    let c = |n: i64| field.from_i64(n);
    NAryAlgebra::build(
        field,
        3,
        2,
        vec!["a".into(), "b".into()],
        &[
            (vec![0, 0, 0], vec![(1, c(6))]),
            (vec![0, 0, 1], vec![(0, c(2))]),
            (vec![0, 1, 1], vec![(1, c(-2))]),
            (vec![1, 1, 1], vec![(0, c(-6))]),
        ],
        SymmetryHint::Total,
    )
}

/// The ternary algebra of the given dimension with zero product.
pub fn zero_algebra(field: &FieldSpec, arity: usize, dim: usize) -> AlgebraResult<NAryAlgebra> {
    NAryAlgebra::build(field, arity, dim, default_labels(dim), &[], SymmetryHint::Total)
}

/// A small named collection of catalog algebras, used for property tests.
pub fn examples() -> Vec<(String, NAryAlgebra)> {
    let q = FieldSpec::rationals();
    let f2 = FieldSpec::prime(2).expect("2 is prime");
    let f3 = FieldSpec::prime(3).expect("3 is prime");
    let mut out = Vec::new();
    for flags in FormFlags::all() {
        out.push((format!("vfgh-{}-1-Q", flags.name()), make_vfgh(&q, 1, flags)));
    }
    out.push((
        "vfgh-0g0-2-F2".into(),
        make_vfgh(&f2, 2, FormFlags::new(false, true, false)),
    ));
    out.push((
        "vfgh-f0h-1-F2".into(),
        make_vfgh(&f2, 1, FormFlags::new(true, false, true)),
    ));
    out.push(("A-2-Q".into(), make_a(&q, 2)));
    out.push(("A-3-F3".into(), make_a(&f3, 3)));
    out.push(("tca1-Q".into(), make_tca1(&q)));
    out.push(("tca1-F2".into(), make_tca1(&f2)));
    out.push(("sym-M2-Q".into(), make_sym_matrix(&q, 2)));
    out.push(("s1-Q".into(), s1(&q, 2, 1, 2)));
    out.push(("s2-Q".into(), s2(&q, 2, 1, 2)));
    out.push(("A1-Q".into(), filippov_a1(&q)));
    out.push((
        "D2-Q".into(),
        quaternions(&q, &q.from_i64(-1), &q.from_i64(-1)).map(|h| ternary_from_involutive(&h)),
    ));
    out.push(("zero-2-Q".into(), zero_algebra(&q, 3, 2)));
    out.into_iter()
        .map(|(name, alg)| (name, alg.expect("catalog constructor")))
        .collect()
}

/// Scalar helper for callers building parameters from integers.
pub fn scalar(field: &FieldSpec, n: i64) -> Scalar {
    field.from_i64(n)
}
