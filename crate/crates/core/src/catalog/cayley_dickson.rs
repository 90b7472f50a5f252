//! Cayley–Dickson doubling, composition-form utilities and the ternary
//! product `⟦x,y,z⟧ = (xȳ)z`.

use itertools::Itertools;

use crate::algebra::{AlgebraError, AlgebraResult, Element, NAryAlgebra, SymmetryHint};
use crate::checks::{ArgGroup, Verdict, Witness, WitnessKind};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Matrix, SubspaceBasis};

/// A unital binary algebra with an involution such that `x + x̄` and `xx̄`
/// are scalar multiples of the unit for every basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutiveAlgebra {
    algebra: NAryAlgebra,
    unit: Element,
    involution: Matrix,
}

impl InvolutiveAlgebra {
    /// Checks every invariant on basis elements before accepting the data.
    pub fn new(algebra: NAryAlgebra, unit: Element, involution: Matrix) -> AlgebraResult<Self> {
        if algebra.arity() != 2 {
            return Err(AlgebraError::ArityMismatch {
                expected: 2,
                found: algebra.arity(),
            });
        }
        let d = algebra.dim();
        algebra.element(unit.coords().to_vec())?;
        if involution.rows() != d || involution.cols() != d {
            return Err(AlgebraError::DimensionMismatch {
                expected: d,
                found: involution.rows(),
            });
        }
        let a = InvolutiveAlgebra {
            algebra,
            unit,
            involution,
        };
        let violation = |what: String| Err(AlgebraError::InvariantViolation(what));
        if a.involution.mul(&a.involution)? != Matrix::identity(a.algebra.field(), d) {
            return violation("the involution does not square to the identity".into());
        }
        if a.conj(&a.unit) != a.unit {
            return violation("the involution moves the unit".into());
        }
        for i in 0..d {
            let x = a.algebra.basis_element(i);
            let label = &a.algebra.labels()[i];
            if a.mul(&a.unit, &x) != x || a.mul(&x, &a.unit) != x {
                return violation(format!("the unit is not an identity for {label}"));
            }
            if a.unit_coefficient(&x.add(&a.conj(&x))).is_none() {
                return violation(format!("{label} + conj({label}) is not a scalar"));
            }
            if a.unit_coefficient(&a.mul(&x, &a.conj(&x))).is_none() {
                return violation(format!("{label}·conj({label}) is not a scalar"));
            }
        }
        Ok(a)
    }

    pub fn algebra(&self) -> &NAryAlgebra {
        &self.algebra
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn involution(&self) -> &Matrix {
        &self.involution
    }

    pub fn field(&self) -> &FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        Element::new(self.algebra.multiply_coords(&[x.coords(), y.coords()]))
    }

    pub fn conj(&self, x: &Element) -> Element {
        x.apply(&self.involution).expect("square involution")
    }

    /// `λ` with `v = λ·1`, if `v` is a multiple of the unit.
    pub fn unit_coefficient(&self, v: &Element) -> Option<Scalar> {
        let k = self.unit.coords().iter().position(|c| !c.is_zero())?;
        let lambda = v.coords()[k].div(&self.unit.coords()[k]).ok()?;
        (self.unit.scale(&lambda) == *v).then_some(lambda)
    }
}

/// The ground field as a 1-dimensional involutive algebra with basis `1`.
pub fn cd_base(field: &FieldSpec) -> InvolutiveAlgebra {
    let alg = NAryAlgebra::build(
        field,
        2,
        1,
        vec!["1".into()],
        &[(vec![0, 0], vec![(0, field.one())])],
        SymmetryHint::Total,
    )
    .expect("valid table");
    InvolutiveAlgebra::new(alg, Element::basis(field, 1, 0), Matrix::identity(field, 1))
        .expect("the field is involutive")
}

fn doubled_label(base: &str, generator: &str) -> String {
    match base {
        "1" => generator.to_string(),
        b if b.chars().count() == 1 => format!("{b}{generator}"),
        b => format!("({b}){generator}"),
    }
}

/// One doubling step `(A, a)`:
/// `(x₁,x₂)(y₁,y₂) = (x₁y₁ + a·y₂x̄₂, x̄₁y₂ + y₁x₂)`, `(x₁,x₂)‾ = (x̄₁, −x₂)`.
///
/// The basis is `(e_k, 0)` followed by `(e_k, 0)·g = (0, ē_k)` with
/// `g = (0, 1)`, so a label such as `ab` names the product `a·b`.
pub fn cd_double(base: &InvolutiveAlgebra, a: &Scalar, generator: &str) -> AlgebraResult<InvolutiveAlgebra> {
    let field = base.field().clone();
    field.check(a)?;
    if a.is_zero() {
        return Err(AlgebraError::InvalidParameter(
            "the doubling parameter must be nonzero".into(),
        ));
    }
    let m = base.dim();
    let split = |v: &[Scalar]| (Element::new(v[..m].to_vec()), Element::new(v[m..].to_vec()));
    let join = |u: Element, w: Element| {
        let mut v = u.into_coords();
        v.extend(w.into_coords());
        v
    };
    // Coordinates in the (e_k, 0), (0, ē_k) basis relate to pairs by
    // conjugating the second half; the map is its own inverse.
    let to_pair = |v: &[Scalar]| {
        let (u, w) = split(v);
        (u, base.conj(&w))
    };
    let labels: Vec<String> = base
        .algebra()
        .labels()
        .iter()
        .cloned()
        .chain(base.algebra().labels().iter().map(|l| doubled_label(l, generator)))
        .collect();
    let basis = |i: usize| Element::basis(&field, 2 * m, i).into_coords();
    let alg = NAryAlgebra::from_fn(&field, 2, 2 * m, labels, SymmetryHint::None, |t| {
        let (x1, x2) = to_pair(&basis(t[0]));
        let (y1, y2) = to_pair(&basis(t[1]));
        let first = base.mul(&x1, &y1).add(&base.mul(&y2, &base.conj(&x2)).scale(a));
        let second = base.mul(&base.conj(&x1), &y2).add(&base.mul(&y1, &x2));
        join(first, base.conj(&second))
    })?;
    let mut involution = Matrix::zeros(&field, 2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            involution.set(i, j, base.involution().get(i, j).clone());
        }
        involution.set(m + i, m + i, field.one().neg());
    }
    let unit = join(base.unit().clone(), Element::zero(&field, m));
    InvolutiveAlgebra::new(alg, Element::new(unit), involution)
}

fn require_odd_characteristic(field: &FieldSpec, what: &str) -> AlgebraResult<()> {
    if field.characteristic() == 2 {
        return Err(AlgebraError::Characteristic {
            characteristic: 2,
            reason: what.to_string(),
        });
    }
    Ok(())
}

/// Generalized quaternions `ℍ(a,b)` with basis `1, a, b, ab`.
pub fn quaternions(field: &FieldSpec, a: &Scalar, b: &Scalar) -> AlgebraResult<InvolutiveAlgebra> {
    require_odd_characteristic(field, "Cayley–Dickson algebras need characteristic other than 2")?;
    let c = cd_double(&cd_base(field), a, "a")?;
    cd_double(&c, b, "b")
}

/// Generalized octonions `𝕆(a,b,c)` with basis `1, a, b, ab, c, ac, bc, (ab)c`.
pub fn octonions(field: &FieldSpec, a: &Scalar, b: &Scalar, c: &Scalar) -> AlgebraResult<InvolutiveAlgebra> {
    cd_double(&quaternions(field, a, b)?, c, "c")
}

fn scalar_part(alg: &InvolutiveAlgebra, v: &Element, what: &str) -> AlgebraResult<Scalar> {
    alg.unit_coefficient(v)
        .ok_or_else(|| AlgebraError::InvariantViolation(format!("{what} is not a scalar")))
}

/// `n(x)`, the unit coefficient of `xx̄`.
pub fn norm(alg: &InvolutiveAlgebra, x: &Element) -> AlgebraResult<Scalar> {
    alg.algebra().element(x.coords().to_vec())?;
    scalar_part(alg, &alg.mul(x, &alg.conj(x)), "x·conj(x)")
}

/// `t(x)`, the unit coefficient of `x + x̄`.
pub fn trace(alg: &InvolutiveAlgebra, x: &Element) -> AlgebraResult<Scalar> {
    alg.algebra().element(x.coords().to_vec())?;
    scalar_part(alg, &x.add(&alg.conj(x)), "x + conj(x)")
}

/// `⟨x,y⟩ = (n(x+y) − n(x) − n(y))/2`.
pub fn form(alg: &InvolutiveAlgebra, x: &Element, y: &Element) -> AlgebraResult<Scalar> {
    require_odd_characteristic(alg.field(), "the polar form divides by 2")?;
    let twice = norm(alg, &x.add(y))?.sub(&norm(alg, x)?).sub(&norm(alg, y)?);
    Ok(twice.div(&alg.field().from_i64(2))?)
}

/// The kernel of the trace.
pub fn skew_part(alg: &InvolutiveAlgebra) -> AlgebraResult<SubspaceBasis> {
    let traces = (0..alg.dim())
        .map(|i| trace(alg, &alg.algebra().basis_element(i)))
        .collect::<AlgebraResult<Vec<_>>>()?;
    Ok(SubspaceBasis::span(alg.field(), alg.dim(), &[traces])?.annihilator())
}

/// Checks the standard composition algebra identities:
///
/// 1. `(aā)b = a(āb) = n(a)b = (bā)a = b(āa)`
/// 2. `(ab̄)c + (ac̄)b = 2⟨b,c⟩a`
/// 3. `a(b̄c) + b(āc) = 2⟨a,b⟩c`
///
/// on all basis triples, and for pairwise distinct basis elements
///
/// 4. `(āb)ā = −n(a)b̄`
/// 5. `(ab̄)c = −(ac̄)b`
/// 6. `a(b̄c) = −b(āc)`.
///
/// Property 4 carries the factor `n(a)` so that it also covers bases that
/// are orthogonal but not normalized; for `n(a) = 1` it is `āba = −b̄`.
pub fn composition_lemma_check(alg: &InvolutiveAlgebra) -> AlgebraResult<Verdict> {
    require_odd_characteristic(alg.field(), "the polar form divides by 2")?;
    let d = alg.dim();
    let e = |i: usize| alg.algebra().basis_element(i);
    let m = |x: &Element, y: &Element| alg.mul(x, y);
    let c = |x: &Element| alg.conj(x);
    let two = alg.field().from_i64(2);
    let fail = |k: u8, names: &[(&str, usize)], lhs: Element, rhs: Element, note: &str| {
        let args = names.iter().map(|&(n, i)| ArgGroup::new(n, vec![e(i)])).collect();
        let mut w = Witness::new(WitnessKind::Composition(k), args, lhs, rhs);
        w.note = Some(note.to_string());
        Ok(Verdict::fail(w))
    };
    for (i, j) in (0..d).cartesian_product(0..d) {
        let (a, b) = (e(i), e(j));
        let target = b.scale(&norm(alg, &a)?);
        let sides = [
            (m(&m(&a, &c(&a)), &b), "(a conj(a))b = n(a)b"),
            (m(&a, &m(&c(&a), &b)), "a(conj(a)b) = n(a)b"),
            (m(&m(&b, &c(&a)), &a), "(b conj(a))a = n(a)b"),
            (m(&b, &m(&c(&a), &a)), "b(conj(a)a) = n(a)b"),
        ];
        for (lhs, note) in sides {
            if lhs != target {
                return fail(1, &[("a", i), ("b", j)], lhs, target, note);
            }
        }
    }
    for t in (0..3).map(|_| 0..d).multi_cartesian_product() {
        let (a, b, cc) = (e(t[0]), e(t[1]), e(t[2]));
        let names = [("a", t[0]), ("b", t[1]), ("c", t[2])];
        let lhs = m(&m(&a, &c(&b)), &cc).add(&m(&m(&a, &c(&cc)), &b));
        let rhs = a.scale(&two.mul(&form(alg, &b, &cc)?));
        if lhs != rhs {
            return fail(2, &names, lhs, rhs, "(a conj(b))c + (a conj(c))b = 2<b,c>a");
        }
        let lhs = m(&a, &m(&c(&b), &cc)).add(&m(&b, &m(&c(&a), &cc)));
        let rhs = cc.scale(&two.mul(&form(alg, &a, &b)?));
        if lhs != rhs {
            return fail(3, &names, lhs, rhs, "a(conj(b)c) + b(conj(a)c) = 2<a,b>c");
        }
    }
    for (i, j) in (0..d).cartesian_product(0..d).filter(|(i, j)| i != j) {
        let (a, b) = (e(i), e(j));
        let lhs = m(&m(&c(&a), &b), &c(&a));
        let rhs = c(&b).scale(&norm(alg, &a)?).neg();
        if lhs != rhs {
            return fail(4, &[("a", i), ("b", j)], lhs, rhs, "(conj(a)b)conj(a) = -n(a)conj(b)");
        }
    }
    for t in (0..3)
        .map(|_| 0..d)
        .multi_cartesian_product()
        .filter(|t| t.iter().all_unique())
    {
        let (a, b, cc) = (e(t[0]), e(t[1]), e(t[2]));
        let names = [("a", t[0]), ("b", t[1]), ("c", t[2])];
        let lhs = m(&m(&a, &c(&b)), &cc);
        let rhs = m(&m(&a, &c(&cc)), &b).neg();
        if lhs != rhs {
            return fail(5, &names, lhs, rhs, "(a conj(b))c = -(a conj(c))b");
        }
        let lhs = m(&a, &m(&c(&b), &cc));
        let rhs = m(&b, &m(&c(&a), &cc)).neg();
        if lhs != rhs {
            return fail(6, &names, lhs, rhs, "a(conj(b)c) = -b(conj(a)c)");
        }
    }
    Ok(Verdict::pass())
}

/// The ternary algebra `⟦x,y,z⟧ = (xȳ)z` on the same space and labels.
pub fn ternary_from_involutive(alg: &InvolutiveAlgebra) -> NAryAlgebra {
    let d = alg.dim();
    let e = |i: usize| alg.algebra().basis_element(i);
    NAryAlgebra::from_fn(
        alg.field(),
        3,
        d,
        alg.algebra().labels().to_vec(),
        SymmetryHint::None,
        |t| alg.mul(&alg.mul(&e(t[0]), &alg.conj(&e(t[1]))), &e(t[2])).into_coords(),
    )
    .expect("products of a valid algebra")
}
