//! Multilinear polynomial identities of degree 1 and 2.
//!
//! A degree-1 identity of an `n`-ary algebra is a combination of the `n!`
//! products `⟦x_{σ(1)},…,x_{σ(n)}⟧`. A degree-2 identity of a ternary
//! algebra combines the 360 products with one nested ternary product; in
//! commutative mode only the 10 canonical products
//! `⟦⟦x_i,x_j,x_k⟧,x_l,x_m⟧` with `i<j<k`, `l<m` remain. An identity holds
//! iff it vanishes on every substitution of basis elements (multilinearity).

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::algebra::{AlgebraError, AlgebraResult, Element, NAryAlgebra};
use crate::checks::{check_total_commutativity, ArgGroup, Verdict, Witness, WitnessKind};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{EchelonBuilder, SubspaceBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    General,
    /// Canonical representatives modulo total commutativity.
    Commutative,
}

/// A multilinear monomial; variables are indices into the variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    /// `⟦v₀,…,v_{n−1}⟧`.
    Flat(Vec<usize>),
    /// A ternary product whose outer slot `inner_slot` holds a ternary
    /// product; `vars` lists all five variables in reading order.
    Nested { inner_slot: usize, vars: Vec<usize> },
}

impl Monomial {
    pub fn degree(&self) -> usize {
        match self {
            Monomial::Flat(_) => 1,
            Monomial::Nested { .. } => 2,
        }
    }

    pub fn variables(&self) -> &[usize] {
        match self {
            Monomial::Flat(v) | Monomial::Nested { vars: v, .. } => v,
        }
    }

    fn with_variables(&self, vars: Vec<usize>) -> Monomial {
        match self {
            Monomial::Flat(_) => Monomial::Flat(vars),
            Monomial::Nested { inner_slot, .. } => Monomial::Nested {
                inner_slot: *inner_slot,
                vars,
            },
        }
    }

    /// Apply the variable renaming `k ↦ pi[k]`.
    pub fn renamed(&self, pi: &[usize]) -> Monomial {
        self.with_variables(self.variables().iter().map(|&k| pi[k]).collect())
    }

    /// Representative modulo total commutativity: arguments of each product
    /// sorted, nested product moved to the first slot.
    pub fn canonical(&self, mode: Mode) -> Monomial {
        if mode == Mode::General {
            return self.clone();
        }
        match self {
            Monomial::Flat(v) => Monomial::Flat(v.iter().copied().sorted().collect()),
            Monomial::Nested { inner_slot, vars } => {
                let s = *inner_slot;
                let inner = vars[s..s + 3].iter().copied().sorted();
                let outer = vars[..s].iter().chain(&vars[s + 3..]).copied().sorted();
                Monomial::Nested {
                    inner_slot: 0,
                    vars: inner.chain(outer).collect(),
                }
            }
        }
    }

    /// Text form such as `[[x,y,z],u,v]`.
    pub fn format(&self, names: &[String]) -> String {
        let v: Vec<&str> = self.variables().iter().map(|&k| names[k].as_str()).collect();
        match self {
            Monomial::Flat(_) => format!("[{}]", v.join(",")),
            Monomial::Nested { inner_slot, .. } => {
                let s = *inner_slot;
                let inner = format!("[{}]", v[s..s + 3].join(","));
                let outer: Vec<String> = v[..s]
                    .iter()
                    .map(|x| x.to_string())
                    .chain(std::iter::once(inner))
                    .chain(v[s + 3..].iter().map(|x| x.to_string()))
                    .collect();
                format!("[{}]", outer.join(","))
            }
        }
    }

    /// Value on basis elements, `subst[k]` being the basis index of variable `k`.
    pub fn evaluate_basis(&self, alg: &NAryAlgebra, subst: &[usize]) -> Vec<Scalar> {
        let mut out = vec![alg.field().zero(); alg.dim()];
        match self {
            Monomial::Flat(v) => {
                let t: Vec<usize> = v.iter().map(|&k| subst[k]).collect();
                for (k, c) in alg.basis_product(&t) {
                    out[*k] = c.clone();
                }
            }
            Monomial::Nested { inner_slot, vars } => {
                let s = *inner_slot;
                let idx: Vec<usize> = vars.iter().map(|&k| subst[k]).collect();
                let mut outer: Vec<usize> = idx[..s]
                    .iter()
                    .chain(std::iter::once(&0))
                    .chain(&idx[s + 3..])
                    .copied()
                    .collect();
                for (k, c) in alg.basis_product(&idx[s..s + 3]) {
                    outer[s] = *k;
                    for (r, e) in alg.basis_product(&outer) {
                        out[*r].add_mul_assign(c, e);
                    }
                }
            }
        }
        out
    }

    /// Value on arbitrary elements.
    pub fn evaluate(&self, alg: &NAryAlgebra, args: &[Element]) -> AlgebraResult<Element> {
        let pick = |ks: &[usize]| ks.iter().map(|&k| args[k].clone()).collect::<Vec<_>>();
        match self {
            Monomial::Flat(v) => alg.multiply(&pick(v)),
            Monomial::Nested { inner_slot, vars } => {
                let s = *inner_slot;
                let inner = alg.multiply(&pick(&vars[s..s + 3]))?;
                let mut outer = pick(&vars[..s]);
                outer.push(inner);
                outer.extend(pick(&vars[s + 3..]));
                alg.multiply(&outer)
            }
        }
    }
}

/// `x, y, z, u, v` for up to five variables, else `x1, x2, …`.
pub fn variable_names(count: usize) -> Vec<String> {
    if count <= 5 {
        ["x", "y", "z", "u", "v"][..count]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=count).map(|i| format!("x{i}")).collect()
    }
}

fn variable_count(arity: usize, degree: usize) -> usize {
    degree * (arity - 1) + 1
}

/// Monomials in a fixed order. General mode: degree 1 lists permutations
/// lexicographically; degree 2 lists the nested slot first, then
/// permutations of the five variables lexicographically. Commutative mode,
/// degree 2: the inner triple runs over 3-subsets lexicographically, the
/// remaining pair outside.
pub fn monomial_basis(arity: usize, degree: usize, mode: Mode) -> AlgebraResult<Vec<Monomial>> {
    match (arity, degree, mode) {
        (n, 1, Mode::General) if n >= 2 => Ok((0..n).permutations(n).map(Monomial::Flat).collect()),
        (n, 1, Mode::Commutative) if n >= 2 => Ok(vec![Monomial::Flat((0..n).collect())]),
        (3, 2, Mode::General) => Ok((0..3)
            .flat_map(|s| {
                (0..5)
                    .permutations(5)
                    .map(move |vars| Monomial::Nested { inner_slot: s, vars })
            })
            .collect()),
        (3, 2, Mode::Commutative) => Ok((0..5)
            .combinations(3)
            .map(|inner| {
                let outer = (0..5).filter(|k| !inner.contains(k));
                Monomial::Nested {
                    inner_slot: 0,
                    vars: inner.iter().copied().chain(outer).collect(),
                }
            })
            .collect()),
        _ => Err(AlgebraError::Unsupported(format!(
            "no monomial basis for arity {arity}, degree {degree}"
        ))),
    }
}

/// Coefficient rows contributed by one substitution: row `r` holds
/// coordinate `r` of every monomial's value.
pub fn substitution_rows(alg: &NAryAlgebra, monomials: &[Monomial], subst: &[usize]) -> Vec<Vec<Scalar>> {
    let values: Vec<Vec<Scalar>> = monomials.iter().map(|m| m.evaluate_basis(alg, subst)).collect();
    (0..alg.dim())
        .map(|r| values.iter().map(|v| v[r].clone()).collect())
        .collect()
}

fn substitutions(nvars: usize, d: usize) -> Vec<Vec<usize>> {
    (0..nvars).map(|_| 0..d).multi_cartesian_product().collect()
}

/// A space of identities: coefficient vectors over an ordered monomial list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySpace {
    arity: usize,
    degree: usize,
    mode: Mode,
    monomials: Vec<Monomial>,
    solutions: SubspaceBasis,
}

impl IdentitySpace {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn solutions(&self) -> &SubspaceBasis {
        &self.solutions
    }

    pub fn dim(&self) -> usize {
        self.solutions.dim()
    }

    pub fn field(&self) -> &FieldSpec {
        self.solutions.field()
    }

    pub fn variable_names(&self) -> Vec<String> {
        variable_names(variable_count(self.arity, self.degree))
    }

    /// False in characteristic `p ≤ degree + 1`, where multilinear identities
    /// need not capture identities with repeated variables.
    pub fn linearization_exact(&self) -> bool {
        let p = self.field().characteristic();
        p == 0 || p > self.degree as u64 + 1
    }

    fn same_shape(&self, other: &IdentitySpace) -> AlgebraResult<()> {
        if (self.arity, self.degree, self.mode) != (other.arity, other.degree, other.mode) {
            return Err(AlgebraError::SignatureMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, other: &IdentitySpace) -> AlgebraResult<bool> {
        self.same_shape(other)?;
        Ok(self.solutions.contains(&other.solutions)?)
    }

    pub fn contains_vector(&self, coefficients: &[Scalar]) -> AlgebraResult<bool> {
        Ok(self.solutions.member(coefficients)?)
    }

    pub fn sum(&self, other: &IdentitySpace) -> AlgebraResult<IdentitySpace> {
        self.same_shape(other)?;
        Ok(IdentitySpace {
            solutions: self.solutions.sum(&other.solutions)?,
            ..self.clone()
        })
    }

    /// The identities as text, one per canonical basis vector.
    pub fn describe(&self) -> Vec<String> {
        let names = self.variable_names();
        self.solutions
            .vectors()
            .iter()
            .map(|v| format_identity(&self.monomials, v, &names))
            .collect()
    }
}

/// `Σ c_m·m = 0` as text.
pub fn format_identity(monomials: &[Monomial], coefficients: &[Scalar], names: &[String]) -> String {
    let labels: Vec<String> = monomials.iter().map(|m| m.format(names)).collect();
    format!("{} = 0", crate::algebra::format_combination(&labels, coefficients))
}

/// All identities of the given degree and mode satisfied by `alg`.
/// Commutative mode requires a totally commutative algebra.
pub fn identity_space(alg: &NAryAlgebra, degree: usize, mode: Mode) -> AlgebraResult<IdentitySpace> {
    let monomials = monomial_basis(alg.arity(), degree, mode)?;
    if mode == Mode::Commutative && !check_total_commutativity(alg).passed() {
        return Err(AlgebraError::NotCommutative);
    }
    let subs = substitutions(variable_count(alg.arity(), degree), alg.dim());
    let rows = SubspaceBasis::span_parallel(alg.field(), monomials.len(), &subs, |s| {
        substitution_rows(alg, &monomials, s)
    })?;
    Ok(IdentitySpace {
        arity: alg.arity(),
        degree,
        mode,
        monomials,
        solutions: rows.annihilator(),
    })
}

fn monomial_index(monomials: &[Monomial]) -> HashMap<Monomial, usize> {
    monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Accumulate `c·m` into `out`, canonicalizing `m` for the mode.
fn add_term(out: &mut [Scalar], index: &HashMap<Monomial, usize>, mode: Mode, m: &Monomial, c: &Scalar) {
    let k = index[&m.canonical(mode)];
    out[k] = out[k].add(c);
}

/// The span of the given identities and of all their variable renamings.
pub fn span_of_identities(
    field: &FieldSpec,
    arity: usize,
    degree: usize,
    mode: Mode,
    vectors: &[Vec<Scalar>],
) -> AlgebraResult<IdentitySpace> {
    let monomials = monomial_basis(arity, degree, mode)?;
    for v in vectors {
        if v.len() != monomials.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: monomials.len(),
                found: v.len(),
            });
        }
    }
    let index = monomial_index(&monomials);
    let nvars = variable_count(arity, degree);
    let renamings: Vec<Vec<usize>> = (0..nvars).permutations(nvars).collect();
    let mut span = EchelonBuilder::new(field, monomials.len());
    for v in vectors {
        for pi in &renamings {
            let mut w = vec![field.zero(); monomials.len()];
            for (m, c) in monomials.iter().zip(v).filter(|(_, c)| !c.is_zero()) {
                add_term(&mut w, &index, mode, &m.renamed(pi), c);
            }
            span.insert(&w)?;
        }
    }
    Ok(IdentitySpace {
        arity,
        degree,
        mode,
        monomials,
        solutions: span.into_subspace(),
    })
}

/// Degree-2 consequences of a degree-1 space of ternary identities:
/// each identity embedded in every slot of an outer product, and each
/// identity with one variable replaced by a product of three variables,
/// closed under renaming of all five variables.
pub fn lifting_span(base: &IdentitySpace, mode: Mode) -> AlgebraResult<IdentitySpace> {
    if base.arity != 3 || base.degree != 1 {
        return Err(AlgebraError::Unsupported(
            "lifting needs a degree-1 space of ternary identities".into(),
        ));
    }
    if base.mode != mode {
        return Err(AlgebraError::Unsupported("the base space uses a different mode".into()));
    }
    let field = base.field().clone();
    let target = monomial_basis(3, 2, mode)?;
    let index = monomial_index(&target);
    let mut lifted = Vec::new();
    for v in base.solutions.vectors() {
        let terms: Vec<(&Vec<usize>, &Scalar)> = base
            .monomials
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| {
                (
                    match m {
                        Monomial::Flat(vars) => vars,
                        Monomial::Nested { .. } => unreachable!("degree-1 base"),
                    },
                    c,
                )
            })
            .collect();
        // Embedding: the identity fills slot s, fresh variables 3 and 4 the others.
        for s in 0..3 {
            let mut w = vec![field.zero(); target.len()];
            for (vars, c) in &terms {
                let mut outer = vec![3, 4];
                outer.splice(s..s, vars.iter().copied());
                add_term(
                    &mut w,
                    &index,
                    mode,
                    &Monomial::Nested {
                        inner_slot: s,
                        vars: outer,
                    },
                    c,
                );
            }
            lifted.push(w);
        }
        // Substitution: variable k becomes the product ⟦k,3,4⟧.
        for k in 0..3 {
            let mut w = vec![field.zero(); target.len()];
            for (vars, c) in &terms {
                let p = vars.iter().position(|&x| x == k).expect("multilinear monomial");
                let mut all = vars.to_vec();
                all.splice(p + 1..p + 1, [3, 4]);
                add_term(
                    &mut w,
                    &index,
                    mode,
                    &Monomial::Nested {
                        inner_slot: p,
                        vars: all,
                    },
                    c,
                );
            }
            lifted.push(w);
        }
    }
    span_of_identities(&field, 3, 2, mode, &lifted)
}

/// Value of `Σ c_m·m` at arbitrary elements.
pub fn evaluate_combination(
    alg: &NAryAlgebra,
    monomials: &[Monomial],
    coefficients: &[Scalar],
    args: &[Element],
) -> AlgebraResult<Element> {
    let mut acc = alg.zero_element();
    for (m, c) in monomials.iter().zip(coefficients).filter(|(_, c)| !c.is_zero()) {
        acc = acc.add(&m.evaluate(alg, args)?.scale(c));
    }
    Ok(acc)
}

/// Whether `Σ c_m·m` vanishes on all basis substitutions. A failure
/// reports the lexicographically first substitution, one argument group
/// per variable, with the value as LHS and zero as RHS.
pub fn verify_identity(alg: &NAryAlgebra, monomials: &[Monomial], coefficients: &[Scalar]) -> AlgebraResult<Verdict> {
    if monomials.len() != coefficients.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: monomials.len(),
            found: coefficients.len(),
        });
    }
    let Some(first) = monomials.first() else {
        return Ok(Verdict::pass());
    };
    let n = first.variables().len();
    if monomials.iter().any(|m| m.variables().len() != n) {
        return Err(AlgebraError::Unsupported("monomials in different variables".into()));
    }
    if first.degree() == 1 && n != alg.arity() || first.degree() == 2 && alg.arity() != 3 {
        return Err(AlgebraError::ArityMismatch {
            expected: alg.arity(),
            found: if first.degree() == 1 { n } else { 3 },
        });
    }
    let subs = substitutions(n, alg.dim());
    let found = subs.par_iter().find_map_first(|s| {
        let mut acc = vec![alg.field().zero(); alg.dim()];
        for (m, c) in monomials.iter().zip(coefficients).filter(|(_, c)| !c.is_zero()) {
            for (a, v) in acc.iter_mut().zip(m.evaluate_basis(alg, s)) {
                a.add_mul_assign(c, &v);
            }
        }
        acc.iter().any(|x| !x.is_zero()).then(|| (s.clone(), acc))
    });
    let names = variable_names(n);
    Ok(Verdict::from_witness(found.map(|(s, value)| {
        let args = names
            .iter()
            .zip(&s)
            .map(|(name, &i)| ArgGroup::new(name, vec![alg.basis_element(i)]))
            .collect();
        let mut w = Witness::new(WitnessKind::Identity, args, Element::new(value), alg.zero_element());
        w.note = Some(format_identity(monomials, coefficients, &names));
        w
    })))
}

/// Re-evaluate an identity witness produced by [`verify_identity`].
pub fn recheck_identity(
    alg: &NAryAlgebra,
    monomials: &[Monomial],
    coefficients: &[Scalar],
    w: &Witness,
) -> AlgebraResult<bool> {
    let n = monomials.first().map_or(0, |m| m.variables().len());
    let args = variable_names(n)
        .iter()
        .map(|name| {
            w.group(name)
                .and_then(|g| g.first().cloned())
                .ok_or_else(|| AlgebraError::Unsupported(format!("witness lacks variable {name}")))
        })
        .collect::<AlgebraResult<Vec<_>>>()?;
    let value = evaluate_combination(alg, monomials, coefficients, &args)?;
    Ok(value == w.lhs && w.rhs.is_zero() && !value.is_zero())
}

/// A parsed identity, fully linearized, as coefficients over
/// `monomial_basis(arity, degree, General)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedIdentity {
    pub arity: usize,
    pub degree: usize,
    /// Names after linearization; a variable occurring `k > 1` times
    /// becomes `name1 … namek`.
    pub variables: Vec<String>,
    pub monomials: Vec<Monomial>,
    pub coefficients: Vec<Scalar>,
}

impl fmt::Display for ParsedIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            format_identity(&self.monomials, &self.coefficients, &self.variables)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Var(String),
    Prod(Vec<Node>),
}

impl Node {
    fn leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Node::Var(v) => out.push(v),
            Node::Prod(children) => children.iter().for_each(|c| c.leaves(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Comma,
    Plus,
    Minus,
    Star,
    Equals,
    Word(String),
    Number(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '[' | '⟦' => {
                chars.next();
                out.push(Token::Open);
            }
            ']' | '⟧' => {
                chars.next();
                out.push(Token::Close);
            }
            ',' => {
                chars.next();
                out.push(Token::Comma);
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' | '\u{2212}' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '=' => {
                chars.next();
                out.push(Token::Equals);
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() || d == '/' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Number(s));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Word(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

/// `(negative, coefficient, product)`.
type Term = (bool, Option<String>, Option<Node>);

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Token) -> Result<(), String> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(format!("expected {t:?}, found {got:?}")),
        }
    }

    fn node(&mut self) -> Result<Node, String> {
        match self.next() {
            Some(Token::Word(w)) => Ok(Node::Var(w)),
            Some(Token::Open) => {
                let mut children = vec![self.node()?];
                while self.peek() == Some(&Token::Comma) {
                    self.next();
                    children.push(self.node()?);
                }
                self.expect(Token::Close)?;
                Ok(Node::Prod(children))
            }
            t => Err(format!("expected a variable or '[', found {t:?}")),
        }
    }

    /// Signed terms `(negative, coefficient, product)`; a bare number must be 0.
    fn terms(&mut self) -> Result<Vec<Term>, String> {
        let mut out = Vec::new();
        let mut flip = false;
        let mut first = true;
        while self.peek().is_some() {
            let mut negative = flip;
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                }
                Some(Token::Minus) => {
                    self.next();
                    negative = !negative;
                }
                Some(Token::Equals) if !first && !flip && !out.is_empty() => {
                    self.next();
                    flip = true;
                    first = true;
                    continue;
                }
                _ if first => {}
                t => return Err(format!("expected '+', '-' or '=', found {t:?}")),
            }
            first = false;
            let coef = match self.peek() {
                Some(Token::Number(_)) => match self.next() {
                    Some(Token::Number(n)) => Some(n),
                    _ => unreachable!(),
                },
                _ => None,
            };
            let node = match (&coef, self.peek()) {
                (Some(_), Some(Token::Star)) => {
                    self.next();
                    Some(self.node()?)
                }
                (Some(_), Some(Token::Open)) => Some(self.node()?),
                (Some(_), _) => None,
                (None, _) => Some(self.node()?),
            };
            out.push((negative, coef, node));
        }
        Ok(out)
    }
}

/// The shape of one product term: arity, degree, and for degree 2 the slot
/// of the inner product.
fn term_shape(node: &Node) -> Result<(usize, usize, Option<usize>), String> {
    let Node::Prod(children) = node else {
        return Err("a term must be a product".into());
    };
    let n = children.len();
    let nested: Vec<usize> = (0..n).filter(|&i| matches!(children[i], Node::Prod(_))).collect();
    match nested.as_slice() {
        [] => Ok((n, 1, None)),
        [s] => match &children[*s] {
            Node::Prod(inner) if inner.len() == n && inner.iter().all(|c| matches!(c, Node::Var(_))) => {
                if n != 3 {
                    Err("degree-2 identities are supported for ternary products only".into())
                } else {
                    Ok((n, 2, Some(*s)))
                }
            }
            _ => Err("only identities of degree 1 and 2 are supported".into()),
        },
        _ => Err("only identities of degree 1 and 2 are supported".into()),
    }
}

/// Parse a homogeneous identity such as `[[x,y,z],u,v] - [x,y,[z,u,v]]` or
/// `[y,x,x] = [x,x,y]` and linearize it fully: a variable occurring `k`
/// times is replaced by the sum over all ways of assigning `k` distinct
/// copies to its occurrences.
pub fn parse_identity(field: &FieldSpec, text: &str) -> AlgebraResult<ParsedIdentity> {
    let err = |reason: String| AlgebraError::ParseElement {
        text: text.to_string(),
        reason,
    };
    let tokens = tokenize(text).map_err(err)?;
    let mut parser = Parser { tokens, pos: 0 };
    let raw = parser.terms().map_err(err)?;
    let mut terms = Vec::new();
    for (negative, coef, node) in raw {
        let c = match &coef {
            Some(n) => field.parse_scalar(n).map_err(|e| err(e.to_string()))?,
            None => field.one(),
        };
        match node {
            Some(node) => terms.push((if negative { c.neg() } else { c }, node)),
            None if c.is_zero() => {}
            None => return Err(err("a constant term must be 0".into())),
        }
    }
    let Some((_, first)) = terms.first() else {
        return Err(err("no product terms".into()));
    };
    let (arity, degree, _) = term_shape(first).map_err(err)?;
    let mut leaves = Vec::new();
    first.leaves(&mut leaves);
    let order: Vec<&str> = leaves.iter().copied().unique().collect();
    let multiplicity: HashMap<&str, usize> = leaves.iter().copied().counts();
    // Copies of variable `v` are indices base[v] .. base[v] + multiplicity[v].
    let mut base = HashMap::new();
    let mut variables = Vec::new();
    for v in &order {
        base.insert(*v, variables.len());
        let k = multiplicity[v];
        if k == 1 {
            variables.push(v.to_string());
        } else {
            variables.extend((1..=k).map(|i| format!("{v}{i}")));
        }
    }
    let monomials = monomial_basis(arity, degree, Mode::General)?;
    let index = monomial_index(&monomials);
    let mut coefficients = vec![field.zero(); monomials.len()];
    for (c, node) in &terms {
        let (a, d, slot) = term_shape(node).map_err(err)?;
        if (a, d) != (arity, degree) {
            return Err(err("terms have different shapes".into()));
        }
        let mut here = Vec::new();
        node.leaves(&mut here);
        if here.iter().copied().counts() != multiplicity {
            return Err(err("terms use different variables".into()));
        }
        // For each variable, every bijection of its copies onto its occurrences.
        let per_var: Vec<Vec<Vec<usize>>> = order
            .iter()
            .map(|v| {
                let k = multiplicity[v];
                (0..k)
                    .permutations(k)
                    .map(|p| p.iter().map(|i| base[v] + i).collect())
                    .collect()
            })
            .collect();
        for choice in per_var.iter().map(|opts| opts.iter()).multi_cartesian_product() {
            let mut used: HashMap<&str, usize> = HashMap::new();
            let vars: Vec<usize> = here
                .iter()
                .map(|v| {
                    let which = order.iter().position(|o| o == v).expect("known variable");
                    let seen = used.entry(v).or_insert(0);
                    *seen += 1;
                    choice[which][*seen - 1]
                })
                .collect();
            let m = match slot {
                None => Monomial::Flat(vars),
                Some(s) => Monomial::Nested { inner_slot: s, vars },
            };
            let k = index[&m];
            coefficients[k] = coefficients[k].add(c);
        }
    }
    Ok(ParsedIdentity {
        arity,
        degree,
        variables,
        monomials,
        coefficients,
    })
}
