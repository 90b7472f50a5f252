//! Catalog algebras addressable by name.

use clap::Args;
use nalg_core::catalog::{
    filippov_a1, make_a, make_j_of_form, make_sym_matrix, make_tca1, make_vfgh, octonions, quaternions, s1, s2,
    ternary_from_involutive, tkk_grading_a1, tkk_ternary, zero_algebra, FormFlags, Symmetrizer,
};
use nalg_core::{FieldSpec, NAryAlgebra, Scalar};

use crate::CliError;

pub const NAMES: &[&str] = &[
    "vfgh",
    "A",
    "J-form",
    "sym-matrix",
    "s1",
    "s2",
    "quaternion-ternary",
    "octonion-ternary",
    "a1",
    "tca1",
    "tkk-J",
    "zero",
];

#[derive(Debug, Clone, Default, Args)]
pub struct CatalogArgs {
    /// One of: vfgh, A, J-form, sym-matrix, s1, s2, quaternion-ternary,
    /// octonion-ternary, a1, tca1, tkk-J, zero.
    pub name: String,
    /// `Q` or `F<p>` for a prime `p`.
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// Chosen square root of -1 in a prime field.
    #[arg(long = "sqrt-minus-one")]
    pub sqrt_minus_one: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub dimv: Option<usize>,
    #[arg(long)]
    pub arity: Option<usize>,
    /// Use the delta form for f.
    #[arg(long)]
    pub f: bool,
    /// Use the delta form for g.
    #[arg(long)]
    pub g: bool,
    /// Use the delta form for h.
    #[arg(long)]
    pub h: bool,
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Cayley–Dickson parameters.
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    pub a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    pub b: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    pub c: String,
    /// Write the file here instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// `Q`, `F<p>` or `GF(<p>)`.
pub fn parse_field(text: &str, sqrt_minus_one: Option<&str>) -> Result<FieldSpec, CliError> {
    let t = text.trim();
    let field = if t == "Q" {
        FieldSpec::rationals()
    } else {
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| CliError::Input(format!("unknown field {text:?}; use Q or F<p>")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| CliError::Input(format!("unknown field {text:?}; use Q or F<p>")))?;
        FieldSpec::prime(p)?
    };
    match sqrt_minus_one {
        None => Ok(field),
        Some(r) => {
            let root = field.parse_scalar(r)?;
            Ok(field.with_sqrt_minus_one(root)?)
        }
    }
}

fn need(value: Option<usize>, flag: &str, name: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Input(format!("{name} needs --{flag}")))
}

fn scalar(field: &FieldSpec, text: &str) -> Result<Scalar, CliError> {
    Ok(field.parse_scalar(text)?)
}

pub fn build(args: &CatalogArgs) -> Result<NAryAlgebra, CliError> {
    let mut field = parse_field(&args.field, args.sqrt_minus_one.as_deref())?;
    let name = args.name.as_str();
    let alg = match name {
        "vfgh" => make_vfgh(
            &field,
            need(args.dimv, "dimv", name)?,
            FormFlags::new(args.f, args.g, args.h),
        )?,
        "A" => make_a(&field, need(args.dim, "dim", name)?)?,
        "J-form" => make_j_of_form(&field, need(args.dimv, "dimv", name)?)?,
        "sym-matrix" => make_sym_matrix(&field, need(args.n, "n", name)?)?,
        "s1" | "s2" => {
            let (n, i, j) = (
                need(args.n, "n", name)?,
                need(args.i, "i", name)?,
                need(args.j, "j", name)?,
            );
            if name == "s1" {
                s1(&field, n, i, j)?
            } else {
                s2(&field, n, i, j)?
            }
        }
        "quaternion-ternary" => ternary_from_involutive(&quaternions(
            &field,
            &scalar(&field, &args.a)?,
            &scalar(&field, &args.b)?,
        )?),
        "octonion-ternary" => ternary_from_involutive(&octonions(
            &field,
            &scalar(&field, &args.a)?,
            &scalar(&field, &args.b)?,
            &scalar(&field, &args.c)?,
        )?),
        "a1" => filippov_a1(&field)?,
        "tca1" => make_tca1(&field)?,
        "tkk-J" => {
            if field.sqrt_minus_one().is_none() {
                if let nalg_core::FieldKind::Prime(p) = field.kind() {
                    field = FieldSpec::prime_with_sqrt_minus_one(p)?;
                }
            }
            let g = tkk_grading_a1(&field)?;
            let e = |k| g.algebra().basis_element(k);
            tkk_ternary(&g, &e(2), &e(2), &e(3), &e(3), Symmetrizer::Sum)?
        }
        "zero" => zero_algebra(&field, args.arity.unwrap_or(3), need(args.dim, "dim", name)?)?,
        _ => {
            return Err(CliError::Input(format!(
                "unknown catalog name {name:?}; known names: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(alg)
}
