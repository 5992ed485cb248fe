//! Instance specifications: JSON parsing and the named example algebras.

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldDescriptor, FieldError, Scalar};
use crate::kalgebra::{endo_from_character, group_algebra, quaternion_algebra, AlgebraError, AlgebraK, Endo, GroupData, KElem, Origin, Trig};
use crate::linalg::Mat;
use crate::monogenic::{MonogenicAlgebra, MonogenicError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("at {path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("at {path}: {source}")]
    Field { path: String, source: FieldError },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monogenic(#[from] MonogenicError),
}

fn invalid(path: &str, msg: impl Into<String>) -> SpecError {
    SpecError::Invalid { path: path.to_string(), msg: msg.into() }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpecOptions {
    pub oracle_bound: Option<usize>,
    pub witness_candidates: Vec<Value>,
    pub checks: Vec<String>,
}

/// A parsed instance together with the JSON it came from.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub source: Value,
    pub algebra: MonogenicAlgebra,
    pub max_degree: Option<usize>,
    pub options: SpecOptions,
}

/// Parsed pieces of an instance before the monogenic conditions are checked.
#[derive(Clone, Debug)]
pub struct RawInstance {
    pub source: Value,
    pub k: AlgebraK,
    pub alpha: Endo,
    pub lambdas: Vec<KElem>,
    pub max_degree: Option<usize>,
    pub options: SpecOptions,
}

impl RawInstance {
    pub fn from_json(v: &Value) -> Result<Self, SpecError> {
        let obj = v.as_object().ok_or_else(|| invalid("$", "expected an object"))?;
        for key in obj.keys() {
            if !["field", "K", "alpha", "f", "max_degree", "options", "name"].contains(&key.as_str()) {
                return Err(invalid(&format!("$.{key}"), "unknown key"));
            }
        }
        let fdesc = FieldDescriptor::from_json(obj.get("field").ok_or_else(|| invalid("$.field", "missing"))?)
            .map_err(|source| SpecError::Field { path: "$.field".into(), source })?;
        let field = Field::new(fdesc).map_err(|source| SpecError::Field { path: "$.field".into(), source })?;
        let k = parse_k(&field, obj.get("K").ok_or_else(|| invalid("$.K", "missing"))?)?;
        let alpha = parse_alpha(&k, obj.get("alpha").ok_or_else(|| invalid("$.alpha", "missing"))?)?;
        let fv = obj.get("f").ok_or_else(|| invalid("$.f", "missing"))?;
        let lams = fv.get("lambdas").and_then(Value::as_array).ok_or_else(|| invalid("$.f.lambdas", "expected an array"))?;
        let lambdas = lams.iter().enumerate().map(|(i, e)| parse_k_elem(&k, e, &format!("$.f.lambdas[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        let max_degree = match obj.get("max_degree") {
            None | Some(Value::Null) => None,
            Some(d) => Some(d.as_u64().ok_or_else(|| invalid("$.max_degree", "expected a non-negative integer"))? as usize),
        };
        let options = match obj.get("options") {
            None => SpecOptions::default(),
            Some(o) => SpecOptions {
                oracle_bound: o.get("oracle_bound").and_then(Value::as_u64).map(|b| b as usize),
                witness_candidates: o.get("witness_candidates").and_then(Value::as_array).cloned().unwrap_or_default(),
                checks: o
                    .get("checks")
                    .and_then(Value::as_array)
                    .map(|a| a.iter().filter_map(Value::as_str).map(String::from).collect())
                    .unwrap_or_default(),
            },
        };
        Ok(RawInstance { source: v.clone(), k, alpha, lambdas, max_degree, options })
    }

    pub fn build(self) -> Result<InstanceSpec, SpecError> {
        let algebra = MonogenicAlgebra::new(self.k, self.alpha, self.lambdas)?;
        Ok(InstanceSpec { source: self.source, algebra, max_degree: self.max_degree, options: self.options })
    }
}

pub fn parse_json_text(text: &str) -> Result<Value, SpecError> {
    serde_json::from_str(text).map_err(|e| invalid(&format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

impl InstanceSpec {
    pub fn from_json(v: &Value) -> Result<Self, SpecError> {
        RawInstance::from_json(v)?.build()
    }

    pub fn parse_text(text: &str) -> Result<Self, SpecError> {
        InstanceSpec::from_json(&parse_json_text(text)?)
    }

    pub fn witness_candidates(&self) -> Result<Vec<KElem>, SpecError> {
        self.options
            .witness_candidates
            .iter()
            .enumerate()
            .map(|(i, v)| parse_k_elem(&self.algebra.k, v, &format!("$.options.witness_candidates[{i}]")))
            .collect()
    }

    /// Degree bound: explicit value, else `2v + 2` for a period `2v` with
    /// `v <= 6`, else 6.
    pub fn degree_bound(&self) -> usize {
        self.max_degree.unwrap_or_else(|| default_bound(&self.algebra))
    }
}

pub fn default_bound(alg: &MonogenicAlgebra) -> usize {
    match alg.alpha_n_order() {
        Some(v) if v <= 6 => 2 * v + 2,
        _ => 6,
    }
}

fn scalar(field: &Field, v: &Value, path: &str) -> Result<Scalar, SpecError> {
    field.decode(v).map_err(|source| SpecError::Field { path: path.to_string(), source })
}

/// A `K` element: dense coordinate array or an object keyed by basis name.
pub fn parse_k_elem(k: &AlgebraK, v: &Value, path: &str) -> Result<KElem, SpecError> {
    match v {
        Value::Array(items) => {
            if items.len() != k.dim {
                return Err(invalid(path, format!("expected {} coordinates, found {}", k.dim, items.len())));
            }
            items.iter().enumerate().map(|(i, c)| scalar(&k.field, c, &format!("{path}[{i}]"))).collect()
        }
        Value::Object(map) => {
            let mut out = k.zero();
            for (name, c) in map {
                let idx = k.basis_names.iter().position(|b| b == name).ok_or_else(|| invalid(path, format!("unknown basis element {name:?}")))?;
                out[idx] = k.field.add(&out[idx], &scalar(&k.field, c, &format!("{path}.{name}"))?);
            }
            Ok(out)
        }
        _ => Err(invalid(path, "expected an array or an object")),
    }
}

fn usize_at(v: &Value, key: &str, path: &str) -> Result<usize, SpecError> {
    v.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| invalid(&format!("{path}.{key}"), "expected a non-negative integer"))
}

fn parse_k(field: &Field, v: &Value) -> Result<AlgebraK, SpecError> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| invalid("$.K.kind", "missing"))?;
    match kind {
        "scalars" => Ok(AlgebraK::scalars(field)),
        "table" => {
            let dim = usize_at(v, "dim", "$.K")?;
            let names: Vec<String> = match v.get("basis").and_then(Value::as_array) {
                Some(b) => b.iter().map(|s| s.as_str().map(String::from).ok_or_else(|| invalid("$.K.basis", "expected strings"))).collect::<Result<_, _>>()?,
                None => (1..=dim).map(|i| format!("e{i}")).collect(),
            };
            if names.len() != dim {
                return Err(invalid("$.K.basis", "length differs from dim"));
            }
            let unit_v = v.get("unit").and_then(Value::as_array).ok_or_else(|| invalid("$.K.unit", "expected an array"))?;
            let unit = unit_v.iter().enumerate().map(|(i, c)| scalar(field, c, &format!("$.K.unit[{i}]"))).collect::<Result<Vec<_>, _>>()?;
            let mut constants = Vec::new();
            for (t, entry) in v.get("mul").and_then(Value::as_array).ok_or_else(|| invalid("$.K.mul", "expected an array"))?.iter().enumerate() {
                let path = format!("$.K.mul[{t}]");
                let e = entry.as_array().filter(|e| e.len() == 4).ok_or_else(|| invalid(&path, "expected [i, j, k, scalar]"))?;
                let idx = |x: &Value| x.as_u64().map(|u| u as usize).ok_or_else(|| invalid(&path, "indices must be integers"));
                constants.push((idx(&e[0])?, idx(&e[1])?, idx(&e[2])?, scalar(field, &e[3], &path)?));
            }
            let k = AlgebraK::from_structure_constants(field, names, unit, &constants)?;
            let val = k.validate();
            if !val.ok {
                return Err(AlgebraError::Invalid(val.failure.unwrap_or_default()).into());
            }
            Ok(k)
        }
        "group" => {
            let gv = v.get("group").ok_or_else(|| invalid("$.K.group", "missing"))?;
            let gkind = gv.get("kind").and_then(Value::as_str).ok_or_else(|| invalid("$.K.group.kind", "missing"))?;
            let g = match gkind {
                "cyclic" => GroupData::cyclic(usize_at(gv, "order", "$.K.group")?),
                "gh4" => GroupData::gh4(usize_at(gv, "u", "$.K.group")?),
                "table" => {
                    let rows = gv.get("table").and_then(Value::as_array).ok_or_else(|| invalid("$.K.group.table", "expected an array"))?;
                    let table: Vec<Vec<usize>> = rows
                        .iter()
                        .map(|r| r.as_array().map(|a| a.iter().filter_map(Value::as_u64).map(|x| x as usize).collect()).ok_or_else(|| invalid("$.K.group.table", "expected rows of integers")))
                        .collect::<Result<_, _>>()?;
                    let labels = match gv.get("labels").and_then(Value::as_array) {
                        Some(l) => l.iter().map(|s| s.as_str().unwrap_or("?").to_string()).collect(),
                        None => (0..table.len()).map(|i| format!("s{i}")).collect(),
                    };
                    GroupData::from_table(labels, table)?
                }
                other => return Err(invalid("$.K.group.kind", format!("unknown group kind {other:?}"))),
            };
            let g = match v.get("character") {
                None => g,
                Some(c) => {
                    if let Some(vals) = c.get("values").and_then(Value::as_array) {
                        let values = vals.iter().enumerate().map(|(i, x)| scalar(field, x, &format!("$.K.character.values[{i}]"))).collect::<Result<_, _>>()?;
                        g.with_character(field, values)?
                    } else if gkind == "cyclic" {
                        let s = scalar(field, c.get("g").ok_or_else(|| invalid("$.K.character.g", "missing"))?, "$.K.character.g")?;
                        g.cyclic_character(field, &s)?
                    } else if gkind == "gh4" {
                        let sg = scalar(field, c.get("g").ok_or_else(|| invalid("$.K.character.g", "missing"))?, "$.K.character.g")?;
                        let sh = scalar(field, c.get("h").ok_or_else(|| invalid("$.K.character.h", "missing"))?, "$.K.character.h")?;
                        g.gh4_character(field, &sg, &sh)?
                    } else {
                        return Err(invalid("$.K.character", "table groups need \"values\""));
                    }
                }
            };
            Ok(group_algebra(&g, field))
        }
        "quaternion" => {
            let get = |key: &str| scalar(field, v.get(key).ok_or_else(|| invalid(&format!("$.K.{key}"), "missing"))?, &format!("$.K.{key}"));
            let trig = Trig { cos: get("cos")?, sin: get("sin")?, cos_half: get("cos_half")?, sin_half: get("sin_half")? };
            Ok(quaternion_algebra(field, trig)?.0)
        }
        other => Err(invalid("$.K.kind", format!("unknown kind {other:?}"))),
    }
}

fn parse_alpha(k: &AlgebraK, v: &Value) -> Result<Endo, SpecError> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| invalid("$.alpha.kind", "missing"))?;
    match kind {
        "identity" => Ok(Endo::identity(k)),
        "character" => {
            let g = k.group().ok_or_else(|| invalid("$.alpha", "character twist needs a group algebra"))?;
            Ok(endo_from_character(g, &k.field)?)
        }
        "rotation" => match &k.origin {
            Origin::Quaternion(t) => Ok(quaternion_algebra(&k.field, t.clone())?.1),
            _ => Err(invalid("$.alpha", "rotation needs a quaternion algebra")),
        },
        "matrix" => {
            let rows = v.get("rows").and_then(Value::as_array).ok_or_else(|| invalid("$.alpha.rows", "expected an array"))?;
            let mut m = Mat::zeros(&k.field, k.dim, k.dim);
            if rows.len() != k.dim {
                return Err(invalid("$.alpha.rows", format!("expected {} rows", k.dim)));
            }
            for (i, row) in rows.iter().enumerate() {
                let entries = row.as_array().filter(|r| r.len() == k.dim).ok_or_else(|| invalid(&format!("$.alpha.rows[{i}]"), format!("expected {} entries", k.dim)))?;
                for (j, e) in entries.iter().enumerate() {
                    m.set(i, j, scalar(&k.field, e, &format!("$.alpha.rows[{i}][{j}]"))?);
                }
            }
            Ok(Endo::for_algebra(k, m)?)
        }
        other => Err(invalid("$.alpha.kind", format!("unknown kind {other:?}"))),
    }
}

// --- named instances --------------------------------------------------------------

/// `Q[C_2][x, alpha] / <x^2>` with the sign character.
pub fn sweedler() -> MonogenicAlgebra {
    taft(2)
}

/// `F[C_n][x, alpha] / <x^n>` over the `n`-th cyclotomic field (or `Q` for `n = 2`).
pub fn taft(n: usize) -> MonogenicAlgebra {
    let field = if n == 2 { Field::rationals() } else { Field::cyclotomic(n as u64) };
    let zeta = if n == 2 { field.from_i64(-1) } else { field.generator() };
    let g = GroupData::cyclic(n).cyclic_character(&field, &zeta).expect("valid character");
    let k = group_algebra(&g, &field);
    let alpha = endo_from_character(&g, &field).expect("character twist");
    MonogenicAlgebra::new(k.clone(), alpha, vec![k.zero(); n]).expect("x^n is admissible")
}

pub fn gaussian_field() -> Field {
    Field::q_extension(&[1, 0, 1], "i").expect("t^2 + 1 is irreducible")
}

/// `Q(i)[G][x, alpha] / <x^2>` for `G = <g, h : g^u = h^4 = 1, h g = g^-1 h>`
/// and `chi(g^j h^l) = i^l`.
pub fn gh4_instance(u: usize) -> MonogenicAlgebra {
    let field = gaussian_field();
    let g = GroupData::gh4(u).gh4_character(&field, &field.one(), &field.generator()).expect("valid character");
    let k = group_algebra(&g, &field);
    let alpha = endo_from_character(&g, &field).expect("character twist");
    MonogenicAlgebra::new(k.clone(), alpha, vec![k.zero(), k.zero()]).expect("x^2 is admissible")
}

pub fn trig_pi(field: &Field) -> Trig {
    Trig { cos: field.from_i64(-1), sin: field.zero(), cos_half: field.zero(), sin_half: field.one() }
}

/// Quaternions rotated by `pi` about `k`, `f = x^2 - rho`.
pub fn quaternion_pi(rho: i64) -> MonogenicAlgebra {
    let field = Field::rationals();
    let (k, alpha) = quaternion_algebra(&field, trig_pi(&field)).expect("consistent constants");
    let lam2 = k.scalar(&field.from_i64(-rho));
    MonogenicAlgebra::new(k.clone(), alpha, vec![k.zero(), lam2]).expect("x^2 - rho is admissible")
}

/// `field[x] / <f>` with `f = x^n + c_1 x^{n-1} + ... + c_n`.
pub fn truncated(field: &Field, coeffs: &[i64]) -> MonogenicAlgebra {
    let k = AlgebraK::scalars(field);
    MonogenicAlgebra::new(k.clone(), Endo::identity(&k), coeffs.iter().map(|&c| vec![field.from_i64(c)]).collect()).expect("scalar coefficients are admissible")
}

/// `Q x Q` with the coordinate swap and `f = x^n`.
pub fn swap_instance(n: usize) -> MonogenicAlgebra {
    let field = Field::rationals();
    let k = AlgebraK::split_product(&field);
    let m = Mat::from_i64(&field, &[&[0, 1], &[1, 0]]);
    let alpha = Endo::for_algebra(&k, m).expect("swap is an automorphism");
    MonogenicAlgebra::new(k.clone(), alpha, vec![k.zero(); n]).expect("x^n is admissible")
}

/// Data of `k[G][x, alpha] / <x^n - xi (g_1^n - 1)>`.
#[derive(Clone, Debug)]
pub struct HopfData {
    pub field: Field,
    pub group: GroupData,
    pub g1: usize,
    pub n: usize,
    pub xi: Scalar,
}

/// `C_m = <g>` with `chi(g) = chi_g`, `g_1 = g^e`, `n`, `xi = 1`.
pub fn hopf_cyclic(field: &Field, m: usize, chi_g: &Scalar, e: usize, n: usize) -> HopfData {
    let group = GroupData::cyclic(m).cyclic_character(field, chi_g).expect("valid character");
    HopfData { field: field.clone(), g1: e % m, group, n, xi: field.one() }
}

/// Short description used in reports.
pub fn describe(alg: &MonogenicAlgebra) -> Value {
    let k = &alg.k;
    json!({
        "field": k.field.descriptor().to_json(),
        "dim_K": k.dim,
        "basis_K": k.basis_names,
        "n": alg.n,
        "f": (1..=alg.n).map(|i| k.display(&alg.lambda(i))).collect::<Vec<_>>(),
        "dim_A": alg.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sweedler_spec() {
        let text = r#"{"field":{"kind":"Q"},"K":{"kind":"group","group":{"kind":"cyclic","order":2},"character":{"g":"-1"}},
            "alpha":{"kind":"character"},"f":{"lambdas":[["0","0"],{}]},"max_degree":4}"#;
        let spec = InstanceSpec::parse_text(text).unwrap();
        assert_eq!(spec.algebra.dim(), 4);
        assert_eq!(spec.degree_bound(), 4);
    }

    #[test]
    fn rejects_bad_coefficient() {
        let text = r#"{"field":{"kind":"Q"},"K":{"kind":"group","group":{"kind":"cyclic","order":2},"character":{"g":"-1"}},
            "alpha":{"kind":"character"},"f":{"lambdas":[{"g":"1"},{}]}}"#;
        let err = InstanceSpec::parse_text(text).unwrap_err();
        assert!(err.to_string().contains("coefficient") || matches!(err, SpecError::Monogenic(MonogenicError::InvalidF(_))), "{err}");
    }

    #[test]
    fn reports_json_location() {
        let err = InstanceSpec::parse_text("{\"field\": ").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn quaternion_and_matrix_specs() {
        let text = r#"{"field":{"kind":"Q"},"K":{"kind":"quaternion","cos":"-1","sin":"0","cos_half":"0","sin_half":"1"},
            "alpha":{"kind":"rotation"},"f":{"lambdas":[{},{"1":"-1"}]}}"#;
        assert_eq!(InstanceSpec::parse_text(text).unwrap().algebra.dim(), 8);
        let swap = r#"{"field":{"kind":"Q"},"K":{"kind":"table","dim":2,"basis":["e1","e2"],"unit":["1","1"],"mul":[[0,0,0,"1"],[1,1,1,"1"]]},
            "alpha":{"kind":"matrix","rows":[["0","1"],["1","0"]]},"f":{"lambdas":[{},{},{}]}}"#;
        assert_eq!(InstanceSpec::parse_text(swap).unwrap().algebra.n, 3);
    }

    #[test]
    fn named_instances_build() {
        assert_eq!(taft(3).dim(), 9);
        assert_eq!(gh4_instance(3).dim(), 24);
        assert_eq!(quaternion_pi(1).dim(), 8);
        assert_eq!(swap_instance(3).dim(), 6);
    }
}
