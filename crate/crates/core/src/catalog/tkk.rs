//! 3-graded ternary algebras and the Kantor-style products they induce on
//! their graded components.

use itertools::Itertools;

use super::filippov_a1;
use crate::algebra::{AlgebraError, AlgebraResult, Element, NAryAlgebra, SymmetryHint};
use crate::field::{FieldSpec, Scalar};
use crate::ideals::subspace_labels;
use crate::linalg::{Matrix, SubspaceBasis};

/// A ternary algebra `L = L₋₁ ⊕ L₀ ⊕ L₁` with `[L_i,L_j,L_k] ⊆ L_{i+j+k}`,
/// degrees added modulo 3 with representatives `−1, 0, 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedTernary {
    algebra: NAryAlgebra,
    grading: [SubspaceBasis; 3],
}

/// Position of degree `deg ∈ {−1,0,1}` in the grading array.
fn slot(deg: i32) -> usize {
    (deg.rem_euclid(3) as usize + 1) % 3
}

fn degree_name(deg: i32) -> String {
    format!("L{deg}")
}

impl GradedTernary {
    /// `grading` lists `L₋₁, L₀, L₁`. Independence, spanning and the
    /// grading rule on basis triples are verified.
    pub fn new(algebra: NAryAlgebra, grading: [SubspaceBasis; 3]) -> AlgebraResult<Self> {
        if algebra.arity() != 3 {
            return Err(AlgebraError::ArityMismatch {
                expected: 3,
                found: algebra.arity(),
            });
        }
        let d = algebra.dim();
        let total = grading[0].sum(&grading[1])?.sum(&grading[2])?;
        let dims: usize = grading.iter().map(SubspaceBasis::dim).sum();
        if !total.is_full() || dims != d {
            return Err(AlgebraError::InvariantViolation(
                "the components are not independent or do not span the space".into(),
            ));
        }
        let g = GradedTernary { algebra, grading };
        for degs in (0..3).map(|_| -1..=1).multi_cartesian_product() {
            let target = g.component(degs.iter().sum());
            let parts: Vec<&SubspaceBasis> = degs.iter().map(|&k| g.component(k)).collect();
            for idx in parts.iter().map(|p| 0..p.dim()).multi_cartesian_product() {
                let args: Vec<&[Scalar]> = idx
                    .iter()
                    .zip(&parts)
                    .map(|(&i, p)| p.vectors()[i].as_slice())
                    .collect();
                if !target.member(&g.algebra.multiply_coords(&args))? {
                    return Err(AlgebraError::InvariantViolation(format!(
                        "[{}, {}, {}] is not contained in its graded component",
                        degree_name(degs[0]),
                        degree_name(degs[1]),
                        degree_name(degs[2])
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn algebra(&self) -> &NAryAlgebra {
        &self.algebra
    }

    /// `L_deg` for any integer degree, reduced modulo 3.
    pub fn component(&self, deg: i32) -> &SubspaceBasis {
        &self.grading[slot(deg)]
    }

    fn require(&self, x: &Element, deg: i32, name: &str) -> AlgebraResult<()> {
        self.algebra.element(x.coords().to_vec())?;
        if self.component(deg).member(x.coords())? {
            Ok(())
        } else {
            Err(AlgebraError::ComponentMismatch {
                argument: name.to_string(),
                expected: degree_name(deg),
            })
        }
    }

    fn bracket(&self, x: &Element, y: &Element, z: &Element) -> Element {
        Element::new(self.algebra.multiply_coords(&[x.coords(), y.coords(), z.coords()]))
    }

    /// The totally commutative ternary algebra on `L_deg` whose product on
    /// basis vectors is `S_{x,y,z} term(x,y,z)`.
    fn induced(
        &self,
        deg: i32,
        symmetrizer: Symmetrizer,
        term: impl Fn(&Element, &Element, &Element) -> Element,
    ) -> AlgebraResult<NAryAlgebra> {
        let field = self.algebra.field().clone();
        let factor = symmetrizer.factor(&field)?;
        let sub = self.component(deg).clone();
        let vectors: Vec<Element> = sub.vectors().iter().cloned().map(Element::new).collect();
        let mut outside = false;
        let alg = NAryAlgebra::from_fn(
            &field,
            3,
            sub.dim(),
            subspace_labels(&self.algebra, &sub),
            SymmetryHint::Total,
            |t| {
                let mut acc = Element::zero(&field, self.algebra.dim());
                for p in t.iter().permutations(3) {
                    acc = acc.add(&term(&vectors[*p[0]], &vectors[*p[1]], &vectors[*p[2]]));
                }
                match sub
                    .coordinates(acc.scale(&factor).coords())
                    .expect("ambient dimension agrees")
                {
                    Some(c) => c,
                    None => {
                        outside = true;
                        vec![field.zero(); sub.dim()]
                    }
                }
            },
        )?;
        if outside {
            return Err(AlgebraError::InvariantViolation(format!(
                "the induced product leaves {}",
                degree_name(deg)
            )));
        }
        Ok(alg)
    }
}

/// Normalization of the symmetrization operator `S_{x,y,z}`: the plain sum
/// over the six orderings, or that sum divided by 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetrizer {
    Sum,
    Average,
}

impl Symmetrizer {
    fn factor(self, field: &FieldSpec) -> AlgebraResult<Scalar> {
        match self {
            Symmetrizer::Sum => Ok(field.one()),
            Symmetrizer::Average => {
                let p = field.characteristic();
                if p == 2 || p == 3 {
                    return Err(AlgebraError::Characteristic {
                        characteristic: p,
                        reason: "averaging divides by 6".into(),
                    });
                }
                Ok(field.from_i64(6).inv()?)
            }
        }
    }
}

/// `A₁` in the basis `a = (𝐢/2)e₁, b = (1/2)e₂, am1 = e₃ − 𝐢e₄, a1 = e₃ + 𝐢e₄`
/// with the grading `⟨am1⟩ ⊕ ⟨a,b⟩ ⊕ ⟨a1⟩`.
pub fn tkk_grading_a1(field: &FieldSpec) -> AlgebraResult<GradedTernary> {
    if field.characteristic() == 2 {
        return Err(AlgebraError::Characteristic {
            characteristic: 2,
            reason: "the graded basis divides by 2".into(),
        });
    }
    let i = field
        .sqrt_minus_one()
        .cloned()
        .ok_or_else(|| AlgebraError::InvalidParameter(format!("{} has no chosen square root of -1", field.name())))?;
    let half = field.from_i64(2).inv()?;
    let (zero, one) = (field.zero(), field.one());
    let p = Matrix::from_rows(
        field,
        &[
            vec![i.mul(&half), zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), half.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone(), i.neg()],
            vec![zero.clone(), zero.clone(), one.clone(), i.clone()],
        ],
    )?;
    let labels = ["a", "b", "am1", "a1"].map(String::from).to_vec();
    let alg = filippov_a1(field)?.change_basis(&p, labels)?;
    let unit = |k: usize| vec![Element::basis(field, 4, k).into_coords()];
    let grading = [
        SubspaceBasis::span(field, 4, &unit(2))?,
        SubspaceBasis::span(field, 4, &[unit(0)[0].clone(), unit(1)[0].clone()])?,
        SubspaceBasis::span(field, 4, &unit(3))?,
    ];
    let g = GradedTernary::new(alg, grading)?;
    let two = field.from_i64(-2);
    let e = |k: usize| g.algebra.basis_element(k);
    if g.bracket(&e(0), &e(2), &e(3)) != e(1).scale(&two) || g.bracket(&e(1), &e(2), &e(3)) != e(0).scale(&two) {
        return Err(AlgebraError::InvariantViolation(
            "[a, am1, a1] = -2b and [b, am1, a1] = -2a do not hold".into(),
        ));
    }
    Ok(g)
}

/// `⟦x,y,z⟧ = S_{x,y,z}[[[u₋₁,x,u₁],y,v₋₁],z,v₁]` on `L₀`.
pub fn tkk_ternary(
    g: &GradedTernary,
    u_minus: &Element,
    v_minus: &Element,
    u_plus: &Element,
    v_plus: &Element,
    symmetrizer: Symmetrizer,
) -> AlgebraResult<NAryAlgebra> {
    g.require(u_minus, -1, "u-1")?;
    g.require(v_minus, -1, "v-1")?;
    g.require(u_plus, 1, "u1")?;
    g.require(v_plus, 1, "v1")?;
    g.induced(0, symmetrizer, |x, y, z| {
        g.bracket(&g.bracket(&g.bracket(u_minus, x, u_plus), y, v_minus), z, v_plus)
    })
}

/// `⟦x,y,z⟧ = S_{x,y,z}[[[u₀,x,u₁],y,v₁],z,v₀]` on `L₋₁`.
pub fn tkk_lminus1(
    g: &GradedTernary,
    u0: &Element,
    v0: &Element,
    u_plus: &Element,
    v_plus: &Element,
    symmetrizer: Symmetrizer,
) -> AlgebraResult<NAryAlgebra> {
    g.require(u0, 0, "u0")?;
    g.require(v0, 0, "v0")?;
    g.require(u_plus, 1, "u1")?;
    g.require(v_plus, 1, "v1")?;
    g.induced(-1, symmetrizer, |x, y, z| {
        g.bracket(&g.bracket(&g.bracket(u0, x, u_plus), y, v_plus), z, v0)
    })
}
