//! Named four-dimensional algebras, a generalised Cayley-Dickson table
//! builder, and exhaustive property probes over basis elements.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::str::FromStr;

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};

/// The built-in algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraName {
    Real,
    Complex,
    Quaternion,
    /// R[+1,+1], hyperbolic quaternions.
    CdPp,
    /// R[-1,+1], split quaternions.
    CdMp,
    /// R[+1,-1].
    CdPm,
    Clifford11,
    Tessarine,
    Klein4,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 9] = [
        AlgebraName::Real,
        AlgebraName::Complex,
        AlgebraName::Quaternion,
        AlgebraName::CdPp,
        AlgebraName::CdMp,
        AlgebraName::CdPm,
        AlgebraName::Clifford11,
        AlgebraName::Tessarine,
        AlgebraName::Klein4,
    ];

    /// The seven four-dimensional algebras used by the benchmarks.
    pub const FOUR_DIMENSIONAL: [AlgebraName; 7] = [
        AlgebraName::Quaternion,
        AlgebraName::CdPp,
        AlgebraName::CdMp,
        AlgebraName::CdPm,
        AlgebraName::Clifford11,
        AlgebraName::Tessarine,
        AlgebraName::Klein4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraName::Real => "real",
            AlgebraName::Complex => "complex",
            AlgebraName::Quaternion => "quaternion",
            AlgebraName::CdPp => "cd_pp",
            AlgebraName::CdMp => "cd_mp",
            AlgebraName::CdPm => "cd_pm",
            AlgebraName::Clifford11 => "clifford_1_1",
            AlgebraName::Tessarine => "tessarine",
            AlgebraName::Klein4 => "klein4",
        }
    }

    /// Conventional mathematical label.
    pub fn label(self) -> &'static str {
        match self {
            AlgebraName::Real => "R",
            AlgebraName::Complex => "C",
            AlgebraName::Quaternion => "H = R[-1,-1]",
            AlgebraName::CdPp => "R[+1,+1]",
            AlgebraName::CdMp => "R[-1,+1]",
            AlgebraName::CdPm => "R[+1,-1]",
            AlgebraName::Clifford11 => "Cl(1,1)",
            AlgebraName::Tessarine => "T",
            AlgebraName::Klein4 => "K4",
        }
    }

    pub fn from_spec_name(name: &str) -> Option<AlgebraName> {
        AlgebraName::ALL.into_iter().find(|a| a.as_str() == name)
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let name = match s.trim().to_ascii_lowercase().as_str() {
            "real" | "r" => AlgebraName::Real,
            "complex" | "c" => AlgebraName::Complex,
            "quaternion" | "quaternions" | "q" | "h" | "cd_mm" => AlgebraName::Quaternion,
            "cd_pp" | "r[+1,+1]" => AlgebraName::CdPp,
            "cd_mp" | "r[-1,+1]" => AlgebraName::CdMp,
            "cd_pm" | "r[+1,-1]" => AlgebraName::CdPm,
            "clifford_1_1" | "cl11" | "cl_1_1" => AlgebraName::Clifford11,
            "tessarine" | "tessarines" | "t" => AlgebraName::Tessarine,
            "klein4" | "k4" | "klein" => AlgebraName::Klein4,
            _ => return Err(Error::UnknownAlgebra(String::from(s))),
        };
        Ok(name)
    }
}

/// `(sign, unit)` with unit 0 the real unit; rows/columns are i, j, k.
type SignedTable = [[(i8, usize); 3]; 3];

const QUATERNION: SignedTable = [
    [(-1, 0), (1, 3), (-1, 2)],
    [(-1, 3), (-1, 0), (1, 1)],
    [(1, 2), (-1, 1), (-1, 0)],
];
const CD_PP: SignedTable = [
    [(1, 0), (1, 3), (1, 2)],
    [(-1, 3), (1, 0), (-1, 1)],
    [(-1, 2), (1, 1), (-1, 0)],
];
const CD_MP: SignedTable = [
    [(-1, 0), (1, 3), (-1, 2)],
    [(-1, 3), (1, 0), (-1, 1)],
    [(1, 2), (1, 1), (1, 0)],
];
const CD_PM: SignedTable = [
    [(1, 0), (1, 3), (1, 2)],
    [(-1, 3), (-1, 0), (1, 1)],
    [(-1, 2), (-1, 1), (1, 0)],
];
const CLIFFORD_1_1: SignedTable = [
    [(1, 0), (-1, 3), (-1, 2)],
    [(1, 3), (1, 0), (-1, 1)],
    [(1, 2), (1, 1), (1, 0)],
];
const TESSARINE: SignedTable = [
    [(-1, 0), (1, 3), (-1, 2)],
    [(1, 3), (1, 0), (1, 1)],
    [(-1, 2), (1, 1), (-1, 0)],
];
const KLEIN4: SignedTable = [
    [(1, 0), (1, 3), (1, 2)],
    [(1, 3), (1, 0), (1, 1)],
    [(1, 2), (1, 1), (1, 0)],
];

fn from_signed(name: &str, t: &SignedTable) -> AlgebraSpec {
    let mut flat = Vec::with_capacity(36);
    for row in t {
        for &(sign, unit) in row {
            let mut e = [0.0; 4];
            e[unit] = f64::from(sign);
            flat.extend_from_slice(&e);
        }
    }
    AlgebraSpec::from_flat(name, 4, flat).expect("built-in tables are well formed")
}

/// The built-in algebra `name`.
pub fn builtin(name: AlgebraName) -> AlgebraSpec {
    let label = name.as_str();
    match name {
        AlgebraName::Real => AlgebraSpec::reals(),
        AlgebraName::Complex => AlgebraSpec::from_flat(label, 2, vec![-1.0, 0.0])
            .expect("built-in tables are well formed"),
        AlgebraName::Quaternion => from_signed(label, &QUATERNION),
        AlgebraName::CdPp => from_signed(label, &CD_PP),
        AlgebraName::CdMp => from_signed(label, &CD_MP),
        AlgebraName::CdPm => from_signed(label, &CD_PM),
        AlgebraName::Clifford11 => from_signed(label, &CLIFFORD_1_1),
        AlgebraName::Tessarine => from_signed(label, &TESSARINE),
        AlgebraName::Klein4 => from_signed(label, &KLEIN4),
    }
}

/// Looks up a built-in algebra by any accepted alias.
pub fn builtin_by_name(name: &str) -> Result<AlgebraSpec> {
    Ok(builtin(name.parse()?))
}

fn conj(x: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = x.iter().map(|v| -v).collect();
    c[0] = x[0];
    c
}

/// Product in the doubled algebra with parameters `gammas` (innermost first):
/// `(a, b)(c, d) = (ac + g conj(d) b, d a + b conj(c))`.
fn cd_mul(x: &[f64], y: &[f64], gammas: &[f64]) -> Vec<f64> {
    let Some((&g, inner)) = gammas.split_last() else {
        return vec![x[0] * y[0]];
    };
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c, inner);
    let db = cd_mul(&conj(d), b, inner);
    let da = cd_mul(d, a, inner);
    let bc = cd_mul(b, &conj(c), inner);
    let mut out = Vec::with_capacity(x.len());
    out.extend(ac.iter().zip(&db).map(|(p, q)| p + g * q));
    out.extend(da.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

/// Generalised Cayley-Dickson algebra of dimension `2^gammas.len()`.
///
/// `cayley_dickson(&[g1, g2])` gives `i^2 = g1`, `j^2 = g2` and `k = ij`.
pub fn cayley_dickson(gammas: &[f64]) -> Result<AlgebraSpec> {
    if gammas.is_empty() {
        return Err(Error::EmptyParameterList);
    }
    if gammas.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("Cayley-Dickson parameters"));
    }
    if gammas.len() > 16 {
        return Err(Error::InvalidConfig(format!(
            "{} doublings exceed the supported dimension",
            gammas.len()
        )));
    }
    let dim = 1usize << gammas.len();
    let mut flat = Vec::with_capacity((dim - 1) * (dim - 1) * dim);
    let basis = |k: usize| {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        e
    };
    for i in 1..dim {
        for j in 1..dim {
            flat.extend(cd_mul(&basis(i), &basis(j), gammas));
        }
    }
    let signs: Vec<String> = gammas
        .iter()
        .map(|g| if *g >= 0.0 { format!("+{}", g) } else { format!("{}", g) })
        .collect();
    AlgebraSpec::from_flat(format!("R[{}]", signs.join(",")), dim, flat)
}

/// Algebraic properties decided on basis elements (exhaustive by bilinearity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyReport {
    pub commutative: bool,
    pub associative: bool,
    /// Every hyperimaginary unit squares to `+1`.
    pub units_self_inverse: bool,
}

const PROPERTY_TOL: f64 = 1e-12;

fn basis_product(spec: &AlgebraSpec, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; spec.dim()];
    spec.mul_coeffs(a, b, &mut out);
    out
}

fn close(x: &[f64], y: &[f64]) -> bool {
    x.iter().zip(y).all(|(a, b)| libm::fabs(a - b) <= PROPERTY_TOL)
}

pub fn check_properties(spec: &AlgebraSpec) -> PropertyReport {
    let n = spec.dim();
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            e
        })
        .collect();
    let mut commutative = true;
    let mut associative = true;
    for a in &basis {
        for b in &basis {
            let ab = basis_product(spec, a, b);
            if !close(&ab, &basis_product(spec, b, a)) {
                commutative = false;
            }
            for c in &basis {
                let left = basis_product(spec, &ab, c);
                let right = basis_product(spec, a, &basis_product(spec, b, c));
                if !close(&left, &right) {
                    associative = false;
                }
            }
        }
    }
    let units_self_inverse = (1..n).all(|k| close(&basis_product(spec, &basis[k], &basis[k]), &basis[0]));
    PropertyReport {
        commutative,
        associative,
        units_self_inverse,
    }
}

/// Unit names: `1, i, j, k` for dimension four, `1, i1, ..., in` otherwise.
pub fn unit_names(dim: usize) -> Vec<String> {
    if dim == 2 {
        return vec![String::from("1"), String::from("i")];
    }
    if dim == 4 {
        return ["1", "i", "j", "k"].iter().map(|s| String::from(*s)).collect();
    }
    (0..dim)
        .map(|k| if k == 0 { String::from("1") } else { format!("i{}", k) })
        .collect()
}

/// Renders coefficients as `2 - i + 0.5k`.
pub fn format_coeffs(coeffs: &[f64]) -> String {
    let names = unit_names(coeffs.len());
    let mut out = String::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mag = libm::fabs(c);
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        if k == 0 {
            let _ = write!(out, "{}", mag);
        } else if mag == 1.0 {
            out.push_str(&names[k]);
        } else {
            let _ = write!(out, "{}{}", mag, names[k]);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Multiplication table laid out with rows as left factors and columns as right factors.
pub fn render_table(spec: &AlgebraSpec) -> String {
    let n = spec.dim();
    let names = unit_names(n);
    let cells: Vec<Vec<String>> = (1..n)
        .map(|i| (1..n).map(|j| format_coeffs(spec.unit_product(i, j))).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.len())
        .chain(names.iter().map(|s| s.len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    let _ = write!(out, "{:>w$} |", "", w = width);
    for name in &names[1..] {
        let _ = write!(out, " {:>w$}", name, w = width);
    }
    out.push('\n');
    out.push_str(&"-".repeat(width + 2 + (n - 1) * (width + 1)));
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        let _ = write!(out, "{:>w$} |", names[i + 1], w = width);
        for cell in row {
            let _ = write!(out, " {:>w$}", cell, w = width);
        }
        out.push('\n');
    }
    out
}
