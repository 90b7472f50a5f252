//! The n-ary algebra type: a sparse structure tensor over an exact field.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};
use crate::linalg::{LinalgError, Matrix, SubspaceBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebras must have positive dimension")]
    ZeroDimension,
    #[error("arity must be at least {min}, got {found}")]
    ArityTooSmall { min: usize, found: usize },
    #[error("expected arity {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} basis labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("conflicting products for the orbit of {tuple:?}")]
    OrbitConflict { tuple: Vec<usize> },
    #[error("table is not totally symmetric at {tuple:?}")]
    NotSymmetric { tuple: Vec<usize> },
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("subspace is not closed under the product")]
    NotClosed,
    #[error("algebras have different signatures")]
    SignatureMismatch,
    #[error("cannot parse element {text:?}: {reason}")]
    ParseElement { text: String, reason: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("characteristic {characteristic} not allowed: {reason}")]
    Characteristic { characteristic: u64, reason: String },
    #[error("{argument} does not lie in the {expected} component")]
    ComponentMismatch { argument: String, expected: String },
    #[error("construction invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type AlgebraResult<T> = Result<T, AlgebraError>;

/// Declared symmetry of the structure tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryHint {
    None,
    /// Constant on every `S_n`-orbit of index tuples (verified on construction).
    Total,
}

/// Coordinate vector of an algebra element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<Scalar>,
}

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Element { coords }
    }

    pub fn zero(field: &FieldSpec, dim: usize) -> Self {
        Element::new(vec![field.zero(); dim])
    }

    pub fn basis(field: &FieldSpec, dim: usize, i: usize) -> Self {
        let mut e = Self::zero(field, dim);
        e.coords[i] = field.one();
        e
    }

    /// Build from `(index, coefficient)` pairs.
    pub fn from_terms(field: &FieldSpec, dim: usize, terms: &[(usize, Scalar)]) -> Self {
        let mut e = Self::zero(field, dim);
        for (i, c) in terms {
            e.coords[*i] = e.coords[*i].add(c);
        }
        e
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element::new(self.coords.iter().map(|a| a.mul(c)).collect())
    }

    pub fn neg(&self) -> Element {
        Element::new(self.coords.iter().map(Scalar::neg).collect())
    }

    /// `self·M` under the row-vector convention.
    pub fn apply(&self, m: &Matrix) -> AlgebraResult<Element> {
        Ok(Element::new(m.apply_row(&self.coords)?))
    }
}

/// A finite-dimensional n-ary algebra given by structure constants.
///
/// `table[flat(i₁,…,iₙ)]` lists the nonzero coordinates of `⟦b_{i₁},…,b_{iₙ}⟧`
/// in increasing index order; missing entries are zero products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NAryAlgebra {
    field: FieldSpec,
    arity: usize,
    dim: usize,
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    symmetry: SymmetryHint,
}

/// One structure constant entry: an index tuple and the sparse product vector.
pub type TableEntry = (Vec<usize>, Vec<(usize, Scalar)>);

fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn normalize_sparse(field: &FieldSpec, dim: usize, terms: &[(usize, Scalar)]) -> AlgebraResult<Vec<(usize, Scalar)>> {
    let mut dense = vec![field.zero(); dim];
    for (k, c) in terms {
        if *k >= dim {
            return Err(AlgebraError::IndexOutOfRange { index: *k, dim });
        }
        field.check(c)?;
        dense[*k] = dense[*k].add(c);
    }
    Ok(sparse(&dense))
}

/// Default labels `b1, …, bd`.
pub fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("b{i}")).collect()
}

impl NAryAlgebra {
    fn empty(
        field: &FieldSpec,
        arity: usize,
        dim: usize,
        labels: Vec<String>,
        symmetry: SymmetryHint,
    ) -> AlgebraResult<Self> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if arity < 2 {
            return Err(AlgebraError::ArityTooSmall { min: 2, found: arity });
        }
        if labels.len() != dim {
            return Err(AlgebraError::LabelCount {
                expected: dim,
                found: labels.len(),
            });
        }
        if let Some(dup) = labels.iter().duplicates().next() {
            return Err(AlgebraError::DuplicateLabel(dup.clone()));
        }
        let size = dim
            .checked_pow(arity as u32)
            .ok_or_else(|| AlgebraError::Unsupported(format!("dimension {dim} with arity {arity} is too large")))?;
        Ok(NAryAlgebra {
            field: field.clone(),
            arity,
            dim,
            labels,
            table: vec![Vec::new(); size],
            symmetry,
        })
    }

    /// Build from sparse entries. With [`SymmetryHint::Total`] each entry fills its
    /// whole orbit; two entries disagreeing on one orbit are rejected.
    pub fn build(
        field: &FieldSpec,
        arity: usize,
        dim: usize,
        labels: Vec<String>,
        entries: &[TableEntry],
        symmetry: SymmetryHint,
    ) -> AlgebraResult<Self> {
        let mut alg = Self::empty(field, arity, dim, labels, symmetry)?;
        let mut assigned: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
        for (tuple, value) in entries {
            if tuple.len() != arity {
                return Err(AlgebraError::ArityMismatch {
                    expected: arity,
                    found: tuple.len(),
                });
            }
            if let Some(&bad) = tuple.iter().find(|&&i| i >= dim) {
                return Err(AlgebraError::IndexOutOfRange { index: bad, dim });
            }
            let value = normalize_sparse(field, dim, value)?;
            let targets: Vec<usize> = match symmetry {
                SymmetryHint::None => vec![alg.flat_index(tuple)],
                SymmetryHint::Total => tuple
                    .iter()
                    .copied()
                    .permutations(arity)
                    .map(|p| alg.flat_index(&p))
                    .unique()
                    .collect(),
            };
            for t in targets {
                if let Some(prev) = assigned.get(&t) {
                    if *prev != value {
                        return Err(AlgebraError::OrbitConflict { tuple: tuple.clone() });
                    }
                }
                assigned.insert(t, value.clone());
                alg.table[t] = value.clone();
            }
        }
        Ok(alg)
    }

    /// Build by evaluating `f` on every basis index tuple. With
    /// [`SymmetryHint::Total`] the resulting table is checked for symmetry.
    pub fn from_fn(
        field: &FieldSpec,
        arity: usize,
        dim: usize,
        labels: Vec<String>,
        symmetry: SymmetryHint,
        mut f: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> AlgebraResult<Self> {
        let mut alg = Self::empty(field, arity, dim, labels, symmetry)?;
        for flat in 0..alg.table.len() {
            let tuple = alg.tuple_of(flat);
            let v = f(&tuple);
            if v.len() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            for s in &v {
                field.check(s)?;
            }
            alg.table[flat] = sparse(&v);
        }
        if symmetry == SymmetryHint::Total {
            alg.verify_total_symmetry()?;
        }
        Ok(alg)
    }

    fn verify_total_symmetry(&self) -> AlgebraResult<()> {
        for flat in 0..self.table.len() {
            let tuple = self.tuple_of(flat);
            for k in 0..self.arity - 1 {
                let mut swapped = tuple.clone();
                swapped.swap(k, k + 1);
                if self.table[self.flat_index(&swapped)] != self.table[flat] {
                    return Err(AlgebraError::NotSymmetric { tuple });
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn symmetry(&self) -> SymmetryHint {
        self.symmetry
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> AlgebraResult<Self> {
        if labels.len() != self.dim {
            return Err(AlgebraError::LabelCount {
                expected: self.dim,
                found: labels.len(),
            });
        }
        if let Some(dup) = labels.iter().duplicates().next() {
            return Err(AlgebraError::DuplicateLabel(dup.clone()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn flat_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn tuple_of(&self, mut flat: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in (0..self.arity).rev() {
            t[slot] = flat % self.dim;
            flat /= self.dim;
        }
        t
    }

    /// Number of basis index tuples, `d^n`.
    pub fn tuple_count(&self) -> usize {
        self.table.len()
    }

    /// All basis index tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.table.len()).map(|f| self.tuple_of(f))
    }

    /// Sparse product of basis elements.
    pub fn basis_product(&self, tuple: &[usize]) -> &[(usize, Scalar)] {
        &self.table[self.flat_index(tuple)]
    }

    pub fn basis_product_element(&self, tuple: &[usize]) -> Element {
        Element::from_terms(&self.field, self.dim, self.basis_product(tuple))
    }

    /// Nonzero table entries in lexicographic order.
    pub fn entries(&self) -> Vec<TableEntry> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(f, v)| (self.tuple_of(f), v.clone()))
            .collect()
    }

    pub fn is_zero_product(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    pub fn element(&self, coords: Vec<Scalar>) -> AlgebraResult<Element> {
        self.check_coords(&coords)?;
        Ok(Element::new(coords))
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(&self.field, self.dim, i)
    }

    pub fn zero_element(&self) -> Element {
        Element::zero(&self.field, self.dim)
    }

    fn check_coords(&self, coords: &[Scalar]) -> AlgebraResult<()> {
        if coords.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: coords.len(),
            });
        }
        for c in coords {
            self.field.check(c)?;
        }
        Ok(())
    }

    fn check_args(&self, args: &[Element], expected: usize) -> AlgebraResult<()> {
        if args.len() != expected {
            return Err(AlgebraError::ArityMismatch {
                expected,
                found: args.len(),
            });
        }
        for a in args {
            self.check_coords(a.coords())?;
        }
        Ok(())
    }

    /// The multilinear product `⟦x₁,…,xₙ⟧`.
    pub fn multiply(&self, args: &[Element]) -> AlgebraResult<Element> {
        self.check_args(args, self.arity)?;
        let refs: Vec<&[Scalar]> = args.iter().map(Element::coords).collect();
        Ok(Element::new(self.multiply_coords(&refs)))
    }

    /// Unchecked product on coordinate slices; callers guarantee shapes.
    pub(crate) fn multiply_coords(&self, args: &[&[Scalar]]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        let supports: Vec<Vec<usize>> = args
            .iter()
            .map(|a| (0..self.dim).filter(|&i| !a[i].is_zero()).collect())
            .collect();
        if supports.iter().any(Vec::is_empty) {
            return out;
        }
        for tuple in supports.iter().multi_cartesian_product() {
            let entry = &self.table[tuple.iter().fold(0, |acc, &&i| acc * self.dim + i)];
            if entry.is_empty() {
                continue;
            }
            let mut coef = self.field.one();
            for (slot, &&i) in tuple.iter().enumerate() {
                coef = coef.mul(&args[slot][i]);
            }
            for (k, c) in entry {
                out[*k].add_mul_assign(&coef, c);
            }
        }
        out
    }

    /// Operator `v ↦ ⟦…, v at slot, …⟧` with the remaining slots filled by
    /// `others` in order. Row `j` is the image of `b_j`.
    pub fn slot_operator(&self, slot: usize, others: &[Element]) -> AlgebraResult<Matrix> {
        if slot >= self.arity {
            return Err(AlgebraError::SlotOutOfRange {
                slot,
                arity: self.arity,
            });
        }
        self.check_args(others, self.arity - 1)?;
        let basis: Vec<Element> = (0..self.dim).map(|j| self.basis_element(j)).collect();
        let mut rows = Vec::with_capacity(self.dim);
        for b in &basis {
            let mut args: Vec<&[Scalar]> = others.iter().map(Element::coords).collect();
            args.insert(slot, b.coords());
            rows.push(self.multiply_coords(&args));
        }
        Ok(Matrix::from_rows(&self.field, &rows)?)
    }

    /// Slot operator for basis elements given by index, read off the table directly.
    pub fn slot_operator_basis(&self, slot: usize, others: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
        let mut tuple: Vec<usize> = others.to_vec();
        tuple.insert(slot, 0);
        for j in 0..self.dim {
            tuple[slot] = j;
            for (k, c) in self.basis_product(&tuple) {
                m.set(j, *k, c.clone());
            }
        }
        m
    }

    /// `R_{(x₂,…,xₙ)}`: row `j` holds `⟦b_j, x₂,…,xₙ⟧`.
    pub fn right_operator(&self, fixed: &[Element]) -> AlgebraResult<Matrix> {
        self.slot_operator(0, fixed)
    }

    /// `D_{x,y} = R_x R_y − R_y R_x` under the row-vector convention.
    pub fn d_operator(&self, x: &[Element], y: &[Element]) -> AlgebraResult<Matrix> {
        let rx = self.right_operator(x)?;
        let ry = self.right_operator(y)?;
        Ok(rx.commutator(&ry)?)
    }

    pub fn d_operator_basis(&self, x: &[usize], y: &[usize]) -> Matrix {
        let rx = self.slot_operator_basis(0, x);
        let ry = self.slot_operator_basis(0, y);
        rx.commutator(&ry).expect("square operators")
    }

    /// Tensor entry at `t` becomes the sum over all permutations of the entry at the permuted tuple.
    pub fn symmetrize(&self) -> NAryAlgebra {
        let perms: Vec<Vec<usize>> = (0..self.arity).permutations(self.arity).collect();
        let mut out = self.clone();
        out.symmetry = SymmetryHint::Total;
        for flat in 0..self.table.len() {
            let tuple = self.tuple_of(flat);
            let mut acc = vec![self.field.zero(); self.dim];
            for p in &perms {
                let permuted: Vec<usize> = p.iter().map(|&k| tuple[k]).collect();
                for (k, c) in self.basis_product(&permuted) {
                    acc[*k] = acc[*k].add(c);
                }
            }
            out.table[flat] = sparse(&acc);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> NAryAlgebra {
        let mut out = self.clone();
        for entry in &mut out.table {
            let scaled: Vec<Scalar> = {
                let mut dense = vec![self.field.zero(); self.dim];
                for (k, v) in entry.iter() {
                    dense[*k] = v.mul(c);
                }
                dense
            };
            *entry = sparse(&scaled);
        }
        out
    }

    /// Exact equality of signature and structure tensor; labels and hints are ignored.
    pub fn algebras_equal(&self, other: &NAryAlgebra) -> bool {
        self.field.same_field(&other.field)
            && self.arity == other.arity
            && self.dim == other.dim
            && self.table == other.table
    }

    /// The reduced `(n−1)`-ary algebra with `a` frozen in slot `position` (1-based).
    pub fn reduce(&self, position: usize, a: &Element) -> AlgebraResult<NAryAlgebra> {
        if self.arity < 3 {
            return Err(AlgebraError::ArityTooSmall {
                min: 3,
                found: self.arity,
            });
        }
        if position == 0 || position > self.arity {
            return Err(AlgebraError::SlotOutOfRange {
                slot: position,
                arity: self.arity,
            });
        }
        self.check_coords(a.coords())?;
        let slot = position - 1;
        let hint = self.symmetry;
        NAryAlgebra::from_fn(&self.field, self.arity - 1, self.dim, self.labels.clone(), hint, |t| {
            let mut acc = vec![self.field.zero(); self.dim];
            let mut full = t.to_vec();
            full.insert(slot, 0);
            for (i, ai) in a.coords().iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                full[slot] = i;
                for (k, c) in self.basis_product(&full) {
                    acc[*k].add_mul_assign(ai, c);
                }
            }
            acc
        })
    }

    /// Re-express the algebra in the basis whose vectors are the rows of `p`.
    pub fn change_basis(&self, p: &Matrix, labels: Vec<String>) -> AlgebraResult<NAryAlgebra> {
        let inv = p.inverse()?;
        let rows = p.row_vectors();
        let alg = NAryAlgebra::from_fn(&self.field, self.arity, self.dim, labels, SymmetryHint::None, |t| {
            let args: Vec<&[Scalar]> = t.iter().map(|&i| rows[i].as_slice()).collect();
            let v = self.multiply_coords(&args);
            inv.apply_row(&v).expect("square inverse")
        })?;
        Ok(alg.with_symmetry_if_total(self.symmetry))
    }

    fn with_symmetry_if_total(mut self, hint: SymmetryHint) -> Self {
        if hint == SymmetryHint::Total && self.verify_total_symmetry().is_ok() {
            self.symmetry = SymmetryHint::Total;
        }
        self
    }

    /// The algebra induced on a product-closed subspace, in the subspace's canonical basis.
    pub fn restrict(&self, sub: &SubspaceBasis, labels: Vec<String>) -> AlgebraResult<NAryAlgebra> {
        if sub.is_zero() {
            return Err(AlgebraError::ZeroDimension);
        }
        let vectors = sub.vectors();
        let mut failed = false;
        let alg = NAryAlgebra::from_fn(&self.field, self.arity, sub.dim(), labels, SymmetryHint::None, |t| {
            let args: Vec<&[Scalar]> = t.iter().map(|&i| vectors[i].as_slice()).collect();
            let v = self.multiply_coords(&args);
            match sub.coordinates(&v).expect("ambient dimension agrees") {
                Some(c) => c,
                None => {
                    failed = true;
                    vec![self.field.zero(); sub.dim()]
                }
            }
        });
        if failed {
            return Err(AlgebraError::NotClosed);
        }
        Ok(alg?.with_symmetry_if_total(self.symmetry))
    }

    /// Format an element as a labelled linear combination, e.g. `-2*a + 1/2*b`.
    pub fn format_element(&self, e: &Element) -> String {
        format_combination(&self.labels, e.coords())
    }

    /// Parse a labelled linear combination such as `2*e12 - e21` or `1/2*a + b`.
    pub fn parse_element(&self, text: &str) -> AlgebraResult<Element> {
        parse_combination(&self.field, &self.labels, text).map(Element::new)
    }
}

/// Render coordinates against labels; `0` for the zero vector.
pub fn format_combination(labels: &[String], coords: &[Scalar]) -> String {
    let mut out = String::new();
    for (label, c) in labels.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let negative = c.rational_sign() == Some(std::cmp::Ordering::Less);
        let magnitude = if negative { c.neg() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if magnitude.is_one() {
            out.push_str(label);
        } else {
            out.push_str(&format!("{magnitude}*{label}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parse a linear combination of labels; terms are split on top-level `+`/`-`.
pub fn parse_combination(field: &FieldSpec, labels: &[String], text: &str) -> AlgebraResult<Vec<Scalar>> {
    let err = |reason: &str| AlgebraError::ParseElement {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let cleaned: String = text
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return Err(err("empty input"));
    }
    let mut coords = vec![field.zero(); labels.len()];
    if cleaned == "0" {
        return Ok(coords);
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    for ch in cleaned.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth -= 1;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                    negative = false;
                }
                if ch == '-' {
                    negative = !negative;
                }
            }
            _ => current.push(ch),
        }
    }
    if current.is_empty() {
        return Err(err("dangling sign"));
    }
    terms.push((negative, current));
    for (negative, term) in terms {
        let (coef, label) = match term.rsplit_once('*') {
            Some((c, l)) => (field.parse_scalar(c).map_err(|e| err(&e.to_string()))?, l.to_string()),
            None => (field.one(), term.clone()),
        };
        let idx = labels
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| err(&format!("unknown basis label {label:?}")))?;
        let coef = if negative { coef.neg() } else { coef };
        coords[idx] = coords[idx].add(&coef);
    }
    Ok(coords)
}

impl fmt::Display for NAryAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}-ary algebra of dimension {} over {} (basis {})",
            self.arity,
            self.dim,
            self.field,
            self.labels.join(", ")
        )?;
        for (tuple, value) in self.entries() {
            if self.symmetry == SymmetryHint::Total && !tuple.windows(2).all(|w| w[0] <= w[1]) {
                continue;
            }
            let args: Vec<&str> = tuple.iter().map(|&i| self.labels[i].as_str()).collect();
            let e = Element::from_terms(&self.field, self.dim, &value);
            writeln!(f, "  [{}] = {}", args.join(", "), self.format_element(&e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn case_one() -> NAryAlgebra {
        let f = q();
        let one = f.one();
        NAryAlgebra::build(
            &f,
            3,
            2,
            vec!["1".into(), "b".into()],
            &[
                (vec![0, 0, 0], vec![(0, one.clone())]),
                (vec![0, 0, 1], vec![(1, one.clone())]),
                (vec![1, 1, 1], vec![(1, f.from_i64(3))]),
            ],
            SymmetryHint::Total,
        )
        .unwrap()
    }

    #[test]
    fn orbit_population_and_products() {
        let alg = case_one();
        assert_eq!(alg.basis_product(&[1, 0, 0]), &[(1, q().one())]);
        assert_eq!(alg.basis_product(&[0, 1, 0]), &[(1, q().one())]);
        assert!(alg.basis_product(&[0, 1, 1]).is_empty());
    }

    #[test]
    fn orbit_conflicts_are_rejected() {
        let f = q();
        let r = NAryAlgebra::build(
            &f,
            3,
            2,
            default_labels(2),
            &[(vec![0, 0, 1], vec![(1, f.one())]), (vec![1, 0, 0], vec![(0, f.one())])],
            SymmetryHint::Total,
        );
        assert!(matches!(r, Err(AlgebraError::OrbitConflict { .. })));
        let r = NAryAlgebra::build(&f, 3, 0, vec![], &[], SymmetryHint::None);
        assert_eq!(r, Err(AlgebraError::ZeroDimension));
        let r = NAryAlgebra::build(
            &f,
            3,
            2,
            default_labels(2),
            &[(vec![0, 0, 2], vec![])],
            SymmetryHint::None,
        );
        assert!(matches!(r, Err(AlgebraError::IndexOutOfRange { .. })));
    }

    #[test]
    fn case_one_operators() {
        let alg = case_one();
        let f = q();
        let one = alg.basis_element(0);
        let b = alg.basis_element(1);
        let r1b = alg.right_operator(&[one.clone(), b.clone()]).unwrap();
        assert_eq!(r1b, Matrix::unit(&f, 2, 0, 1));
        let rbb = alg.right_operator(&[b.clone(), b.clone()]).unwrap();
        assert_eq!(rbb, Matrix::unit(&f, 2, 1, 1).scale(&f.from_i64(3)));
        let d = alg.d_operator(&[one, b.clone()], &[b.clone(), b]).unwrap();
        assert_eq!(d, Matrix::unit(&f, 2, 0, 1).scale(&f.from_i64(3)));
    }

    #[test]
    fn multilinear_scaling() {
        let alg = case_one();
        let f = q();
        let x = alg.parse_element("1 + 2*b").unwrap();
        let y = alg.parse_element("-b").unwrap();
        let z = alg.parse_element("1/2*1 + b").unwrap();
        let p = alg.multiply(&[x.clone(), y.clone(), z.clone()]).unwrap();
        let p2 = alg.multiply(&[x.scale(&f.from_i64(2)), y, z]).unwrap();
        assert_eq!(p2, p.scale(&f.from_i64(2)));
    }

    #[test]
    fn element_text_round_trip() {
        let alg = case_one();
        let e = alg.parse_element("-2*1 + 1/2*b").unwrap();
        assert_eq!(alg.format_element(&e), "-2*1 + 1/2*b");
        assert_eq!(alg.format_element(&alg.zero_element()), "0");
        assert_eq!(alg.parse_element("b - b").unwrap(), alg.zero_element());
        assert!(alg.parse_element("c").is_err());
        assert!(alg.parse_element("b +").is_err());
    }

    #[test]
    fn reduce_rejects_bad_slots() {
        let alg = case_one();
        let b = alg.basis_element(1);
        assert!(alg.reduce(0, &b).is_err());
        assert!(alg.reduce(4, &b).is_err());
        let red = alg.reduce(1, &b).unwrap();
        assert_eq!(red.arity(), 2);
        assert_eq!(red.basis_product(&[1, 1]), &[(1, q().from_i64(3))]);
    }

    #[test]
    fn scale_by_zero_gives_zero_algebra() {
        let alg = case_one();
        assert!(alg.scale(&q().zero()).is_zero_product());
        assert!(alg.scale(&q().one()).algebras_equal(&alg));
    }
}
