//! Brute-force identity checks with reproducible counterexamples.
//!
//! Every check below evaluates a multilinear identity only on basis
//! elements. This suffices: both sides are linear in each argument, so if
//! they agree on all basis tuples they agree everywhere. Scans walk index
//! tuples in lexicographic order and report the first failure in that
//! order, also when the work is spread over several threads.

use itertools::Itertools;
use rayon::prelude::*;

use crate::algebra::{AlgebraError, AlgebraResult, Element, NAryAlgebra, SymmetryHint};
use crate::field::Scalar;
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
}

/// Which identity a witness violates; decides how it is re-evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessKind {
    /// `tuple` vs `permuted`.
    TotalCommutativity,
    /// `x`, `y` are `(n−1)`-tuples, `z` an `n`-tuple.
    Dxy,
    /// `⟦x,y,z⟧ = ⟦z,y,x⟧`.
    PartialCommutativity,
    /// The Jordan triple system identity in `x,y,z,u,v`.
    Jts,
    /// Linearized binary Jordan identity in `x1,x2,x3,y`.
    JordanLinearized,
    /// Raw binary Jordan identity in `x,y`.
    JordanRaw,
    /// Leibniz rule for the operator stored in the witness, at the tuple `z`.
    Derivation,
    /// Multilinear identity; re-evaluated by the identity module.
    Identity,
    /// Composition algebra property with the given index (1–6).
    Composition(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgGroup {
    pub name: String,
    pub elements: Vec<Element>,
}

impl ArgGroup {
    pub fn new(name: &str, elements: Vec<Element>) -> Self {
        ArgGroup {
            name: name.to_string(),
            elements,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub args: Vec<ArgGroup>,
    pub lhs: Element,
    pub rhs: Element,
    pub operator: Option<Matrix>,
    pub note: Option<String>,
}

impl Witness {
    pub fn new(kind: WitnessKind, args: Vec<ArgGroup>, lhs: Element, rhs: Element) -> Self {
        Witness {
            kind,
            args,
            lhs,
            rhs,
            operator: None,
            note: None,
        }
    }

    pub fn group(&self, name: &str) -> Option<&[Element]> {
        self.args.iter().find(|g| g.name == name).map(|g| g.elements.as_slice())
    }

    fn require(&self, name: &str) -> AlgebraResult<&[Element]> {
        self.group(name)
            .ok_or_else(|| AlgebraError::Unsupported(format!("witness lacks argument group {name}")))
    }

    /// Human-readable lines: one per argument group, then both sides.
    pub fn describe(&self, alg: &NAryAlgebra) -> Vec<String> {
        let mut lines = Vec::new();
        for g in &self.args {
            let items: Vec<String> = g.elements.iter().map(|e| alg.format_element(e)).collect();
            lines.push(format!("{} = ({})", g.name, items.join(", ")));
        }
        lines.push(format!("LHS = {}", alg.format_element(&self.lhs)));
        lines.push(format!("RHS = {}", alg.format_element(&self.rhs)));
        if let Some(note) = &self.note {
            lines.push(format!("note: {note}"));
        }
        lines
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            status: Status::Fail,
            witness: Some(witness),
        }
    }

    pub fn from_witness(w: Option<Witness>) -> Self {
        w.map_or_else(Verdict::pass, Verdict::fail)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Both sides of the identity recorded in `w`, recomputed from its arguments.
pub fn recompute(alg: &NAryAlgebra, w: &Witness) -> AlgebraResult<(Element, Element)> {
    match w.kind {
        WitnessKind::TotalCommutativity => Ok((
            alg.multiply(w.require("tuple")?)?,
            alg.multiply(w.require("permuted")?)?,
        )),
        WitnessKind::Dxy => dxy_sides(alg, w.require("x")?, w.require("y")?, w.require("z")?),
        WitnessKind::PartialCommutativity => {
            let a = w.require("args")?;
            let rev: Vec<Element> = a.iter().rev().cloned().collect();
            Ok((alg.multiply(a)?, alg.multiply(&rev)?))
        }
        WitnessKind::Jts => jts_sides(alg, w.require("args")?),
        WitnessKind::JordanLinearized => jordan_linearized_sides(alg, w.require("x")?, &w.require("y")?[0]),
        WitnessKind::JordanRaw => jordan_sides(alg, &w.require("x")?[0], &w.require("y")?[0]),
        WitnessKind::Derivation => {
            let d = w
                .operator
                .as_ref()
                .ok_or_else(|| AlgebraError::Unsupported("derivation witness lacks its operator".into()))?;
            leibniz_sides(alg, d, w.require("z")?)
        }
        WitnessKind::Identity | WitnessKind::Composition(_) => Err(AlgebraError::Unsupported(
            "this witness is re-evaluated by the module that produced it".into(),
        )),
    }
}

/// True when the witness still evaluates to its stored sides and they differ.
pub fn recheck(alg: &NAryAlgebra, w: &Witness) -> AlgebraResult<bool> {
    let (l, r) = recompute(alg, w)?;
    Ok(l == w.lhs && r == w.rhs && l != r)
}

fn basis_elements(alg: &NAryAlgebra, idx: &[usize]) -> Vec<Element> {
    idx.iter().map(|&i| alg.basis_element(i)).collect()
}

fn is_sorted(t: &[usize]) -> bool {
    t.windows(2).all(|w| w[0] <= w[1])
}

/// Total commutativity: the tensor is constant on every `S_n`-orbit.
pub fn check_total_commutativity(alg: &NAryAlgebra) -> Verdict {
    let n = alg.arity();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    for tuple in alg.tuples() {
        let base = alg.basis_product(&tuple);
        for p in &perms {
            let permuted: Vec<usize> = p.iter().map(|&k| tuple[k]).collect();
            if alg.basis_product(&permuted) != base {
                let args = vec![
                    ArgGroup::new("tuple", basis_elements(alg, &tuple)),
                    ArgGroup::new("permuted", basis_elements(alg, &permuted)),
                ];
                return Verdict::fail(Witness::new(
                    WitnessKind::TotalCommutativity,
                    args,
                    alg.basis_product_element(&tuple),
                    alg.basis_product_element(&permuted),
                ));
            }
        }
    }
    Verdict::pass()
}

/// Both sides of the `D_{x,y}`-identity
/// `D⟦z₁,…,zₙ⟧ = Σ_s ⟦z₁,…,D(z_s),…,zₙ⟧`.
pub fn dxy_sides(alg: &NAryAlgebra, x: &[Element], y: &[Element], z: &[Element]) -> AlgebraResult<(Element, Element)> {
    let d = alg.d_operator(x, y)?;
    leibniz_sides(alg, &d, z)
}

/// Both sides of the Leibniz rule for an arbitrary operator `d`.
pub fn leibniz_sides(alg: &NAryAlgebra, d: &Matrix, z: &[Element]) -> AlgebraResult<(Element, Element)> {
    if d.rows() != alg.dim() || d.cols() != alg.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: alg.dim(),
            found: d.rows(),
        });
    }
    let lhs = alg.multiply(z)?.apply(d)?;
    let mut rhs = alg.zero_element();
    for s in 0..z.len() {
        let mut args = z.to_vec();
        args[s] = z[s].apply(d)?;
        rhs = rhs.add(&alg.multiply(&args)?);
    }
    Ok((lhs, rhs))
}

/// Leibniz defect of `d` on a basis tuple, computed straight from the table.
pub(crate) fn leibniz_basis(alg: &NAryAlgebra, d: &Matrix, z: &[usize]) -> (Vec<Scalar>, Vec<Scalar>) {
    let dim = alg.dim();
    let f = alg.field();
    let mut lhs = vec![f.zero(); dim];
    for (k, c) in alg.basis_product(z) {
        for (j, l) in lhs.iter_mut().enumerate() {
            l.add_mul_assign(c, d.get(*k, j));
        }
    }
    let mut rhs = vec![f.zero(); dim];
    let mut t = z.to_vec();
    for s in 0..z.len() {
        for m in 0..dim {
            let coef = d.get(z[s], m);
            if coef.is_zero() {
                continue;
            }
            t[s] = m;
            for (k, c) in alg.basis_product(&t) {
                rhs[*k].add_mul_assign(coef, c);
            }
        }
        t[s] = z[s];
    }
    (lhs, rhs)
}

type TuplePair = (Vec<usize>, Vec<usize>);

/// Index tuples for `x`, `y` and `z` in a `D_{x,y}` scan. Uses `D_{x,x} = 0`,
/// `D_{y,x} = −D_{x,y}` and, for totally symmetric tables, invariance under
/// reordering inside each tuple.
fn dxy_search_space(alg: &NAryAlgebra) -> (Vec<TuplePair>, Vec<Vec<usize>>) {
    let total = alg.symmetry() == SymmetryHint::Total;
    let n = alg.arity();
    let d = alg.dim();
    let short: Vec<Vec<usize>> = (0..n - 1)
        .map(|_| 0..d)
        .multi_cartesian_product()
        .filter(|t| !total || is_sorted(t))
        .collect();
    let pairs = short
        .iter()
        .enumerate()
        .flat_map(|(i, x)| short[i + 1..].iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let zs = alg.tuples().filter(|t| !total || is_sorted(t)).collect();
    (pairs, zs)
}

/// The `D_{x,y}`-identity on all basis arguments.
pub fn check_dxy_identity(alg: &NAryAlgebra) -> Verdict {
    let (pairs, zs) = dxy_search_space(alg);
    let found = pairs.par_iter().find_map_first(|(x, y)| {
        let d = alg.d_operator_basis(x, y);
        if d.is_zero() {
            return None;
        }
        zs.iter().find_map(|z| {
            let (l, r) = leibniz_basis(alg, &d, z);
            (l != r).then(|| (x.clone(), y.clone(), z.clone(), l, r))
        })
    });
    Verdict::from_witness(found.map(|(x, y, z, l, r)| {
        Witness::new(
            WitnessKind::Dxy,
            vec![
                ArgGroup::new("x", basis_elements(alg, &x)),
                ArgGroup::new("y", basis_elements(alg, &y)),
                ArgGroup::new("z", basis_elements(alg, &z)),
            ],
            Element::new(l),
            Element::new(r),
        )
    }))
}

/// Both sides of `⟦⟦x,y,z⟧,u,v⟧ + ⟦z,u,⟦x,y,v⟧⟧ = ⟦x,y,⟦z,u,v⟧⟧ + ⟦z,⟦y,x,u⟧,v⟧`.
pub fn jts_sides(alg: &NAryAlgebra, args: &[Element]) -> AlgebraResult<(Element, Element)> {
    if alg.arity() != 3 {
        return Err(AlgebraError::ArityMismatch {
            expected: 3,
            found: alg.arity(),
        });
    }
    if args.len() != 5 {
        return Err(AlgebraError::ArityMismatch {
            expected: 5,
            found: args.len(),
        });
    }
    let [x, y, z, u, v] = [&args[0], &args[1], &args[2], &args[3], &args[4]];
    let m = |a: &Element, b: &Element, c: &Element| alg.multiply(&[a.clone(), b.clone(), c.clone()]);
    let lhs = m(&m(x, y, z)?, u, v)?.add(&m(z, u, &m(x, y, v)?)?);
    let rhs = m(x, y, &m(z, u, v)?)?.add(&m(z, &m(y, x, u)?, v)?);
    Ok((lhs, rhs))
}

/// Jordan triple system axioms: `⟦x,y,z⟧ = ⟦z,y,x⟧` and the identity above.
pub fn check_jts_identity(alg: &NAryAlgebra) -> AlgebraResult<Verdict> {
    if alg.arity() != 3 {
        return Err(AlgebraError::ArityMismatch {
            expected: 3,
            found: alg.arity(),
        });
    }
    for t in alg.tuples() {
        let rev: Vec<usize> = t.iter().rev().copied().collect();
        if alg.basis_product(&t) != alg.basis_product(&rev) {
            return Ok(Verdict::fail(Witness::new(
                WitnessKind::PartialCommutativity,
                vec![ArgGroup::new("args", basis_elements(alg, &t))],
                alg.basis_product_element(&t),
                alg.basis_product_element(&rev),
            )));
        }
    }
    let d = alg.dim();
    let firsts: Vec<usize> = (0..d).collect();
    let found = firsts.par_iter().find_map_first(|&x| {
        (0..4).map(|_| 0..d).multi_cartesian_product().find_map(|rest| {
            let idx: Vec<usize> = std::iter::once(x).chain(rest).collect();
            let args = basis_elements(alg, &idx);
            let (l, r) = jts_sides(alg, &args).expect("arity checked");
            (l != r).then_some((args, l, r))
        })
    });
    Ok(Verdict::from_witness(found.map(|(args, l, r)| {
        Witness::new(WitnessKind::Jts, vec![ArgGroup::new("args", args)], l, r)
    })))
}

fn binary(alg: &NAryAlgebra, a: &Element, b: &Element) -> AlgebraResult<Element> {
    alg.multiply(&[a.clone(), b.clone()])
}

/// Both sides of `(xy)x² = x(yx²)`.
pub fn jordan_sides(alg: &NAryAlgebra, x: &Element, y: &Element) -> AlgebraResult<(Element, Element)> {
    let x2 = binary(alg, x, x)?;
    let lhs = binary(alg, &binary(alg, x, y)?, &x2)?;
    let rhs = binary(alg, x, &binary(alg, y, &x2)?)?;
    Ok((lhs, rhs))
}

/// Both sides of the linearized Jordan identity
/// `Σ_i (x_i y)(x_j x_k) = Σ_i x_i(y(x_j x_k))`, `{i,j,k} = {1,2,3}`.
pub fn jordan_linearized_sides(alg: &NAryAlgebra, x: &[Element], y: &Element) -> AlgebraResult<(Element, Element)> {
    if x.len() != 3 {
        return Err(AlgebraError::ArityMismatch {
            expected: 3,
            found: x.len(),
        });
    }
    let mut lhs = alg.zero_element();
    let mut rhs = alg.zero_element();
    for (i, j, k) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        let xjxk = binary(alg, &x[j], &x[k])?;
        lhs = lhs.add(&binary(alg, &binary(alg, &x[i], y)?, &xjxk)?);
        rhs = rhs.add(&binary(alg, &x[i], &binary(alg, y, &xjxk)?)?);
    }
    Ok((lhs, rhs))
}

/// Binary Jordan identity for a commutative binary algebra.
///
/// The decisive test is the linearized identity on basis elements, valid in
/// every characteristic; the raw identity is additionally evaluated on every
/// `b_i` and `b_i + b_j`.
pub fn check_binary_jordan(alg: &NAryAlgebra) -> AlgebraResult<Verdict> {
    if alg.arity() != 2 {
        return Err(AlgebraError::ArityMismatch {
            expected: 2,
            found: alg.arity(),
        });
    }
    if !check_total_commutativity(alg).passed() {
        return Err(AlgebraError::NotCommutative);
    }
    let d = alg.dim();
    let triples: Vec<Vec<usize>> = (0..3)
        .map(|_| 0..d)
        .multi_cartesian_product()
        .filter(|t| is_sorted(t))
        .collect();
    let found = triples.par_iter().find_map_first(|t| {
        let xs = basis_elements(alg, t);
        (0..d).find_map(|yi| {
            let y = alg.basis_element(yi);
            let (l, r) = jordan_linearized_sides(alg, &xs, &y).expect("arity checked");
            (l != r).then(|| (xs.clone(), y, l, r))
        })
    });
    if let Some((xs, y, l, r)) = found {
        return Ok(Verdict::fail(Witness::new(
            WitnessKind::JordanLinearized,
            vec![ArgGroup::new("x", xs), ArgGroup::new("y", vec![y])],
            l,
            r,
        )));
    }
    let mut samples: Vec<Element> = (0..d).map(|i| alg.basis_element(i)).collect();
    for (i, j) in (0..d).tuple_combinations() {
        samples.push(alg.basis_element(i).add(&alg.basis_element(j)));
    }
    for x in &samples {
        for yi in 0..d {
            let y = alg.basis_element(yi);
            let (l, r) = jordan_sides(alg, x, &y)?;
            if l != r {
                return Ok(Verdict::fail(Witness::new(
                    WitnessKind::JordanRaw,
                    vec![ArgGroup::new("x", vec![x.clone()]), ArgGroup::new("y", vec![y])],
                    l,
                    r,
                )));
            }
        }
    }
    Ok(Verdict::pass())
}
