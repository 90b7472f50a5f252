use nalg_core::catalog::{make_a, quaternions, ternary_from_involutive};
use nalg_core::identities::{
    identity_space, lifting_span, parse_identity, span_of_identities, verify_identity, IdentitySpace, Mode,
};
use nalg_core::{FieldSpec, NAryAlgebra};

fn d2() -> NAryAlgebra {
    let q = FieldSpec::rationals();
    ternary_from_involutive(&quaternions(&q, &q.from_i64(-1), &q.from_i64(-1)).unwrap())
}

fn closure_of(texts: &[&str], degree: usize) -> IdentitySpace {
    let q = FieldSpec::rationals();
    let vectors: Vec<_> = texts
        .iter()
        .map(|t| {
            let p = parse_identity(&q, t).unwrap();
            assert_eq!(p.degree, degree);
            p.coefficients
        })
        .collect();
    span_of_identities(&q, 3, degree, Mode::General, &vectors).unwrap()
}

#[test]
fn quaternion_degree_one_identities_follow_from_one_relation() {
    let space = identity_space(&d2(), 1, Mode::General).unwrap();
    let generated = closure_of(&["[y,x,x] = [x,x,y]"], 1);
    assert_eq!(space, generated);
}

#[test]
fn quaternion_degree_two_identities_need_two_new_relations() {
    let alg = d2();
    let base = identity_space(&alg, 1, Mode::General).unwrap();
    let full = identity_space(&alg, 2, Mode::General).unwrap();
    let lifted = lifting_span(&base, Mode::General).unwrap();
    assert!(full.contains(&lifted).unwrap());
    assert!(lifted.dim() < full.dim());
    let extra = closure_of(&["[[x,y,z],u,v] = [x,y,[z,u,v]]", "[[x,y,z],u,v] = [x,[u,z,y],v]"], 2);
    assert!(full.contains(&extra).unwrap());
    assert_eq!(lifted.sum(&extra).unwrap(), full);
}

#[test]
fn every_solution_vector_verifies() {
    let alg = d2();
    for degree in [1, 2] {
        let space = identity_space(&alg, degree, Mode::General).unwrap();
        for v in space.solutions().vectors().iter().take(20) {
            assert!(verify_identity(&alg, space.monomials(), v).unwrap().passed());
        }
    }
}

#[test]
fn lifting_total_commutativity_explains_degree_two() {
    let a = make_a(&FieldSpec::rationals(), 2).unwrap();
    let base = identity_space(&a, 1, Mode::General).unwrap();
    let full = identity_space(&a, 2, Mode::General).unwrap();
    assert_eq!(lifting_span(&base, Mode::General).unwrap(), full);
    let base = identity_space(&a, 1, Mode::Commutative).unwrap();
    let full = identity_space(&a, 2, Mode::Commutative).unwrap();
    assert_eq!(lifting_span(&base, Mode::Commutative).unwrap(), full);
}
