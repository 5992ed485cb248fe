//! Report assembly for each verb. Everything is a `serde_json::Value` with
//! sorted keys, so identical inputs give byte-identical output.

use monogen::closedforms::{self as cf, TheoremCheck, Witness};
use monogen::cohomology::{CohomologyGroup, SmallComplex};
use monogen::instances::{InstanceSpec, RawInstance};
use monogen::kalgebra::KElem;
use monogen::monogenic::{validate_f, MonogenicAlgebra};
use monogen::products::{self, BRACKET_DEGREE_BOUND};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Input(String),
    #[error("computation failed: {0}")]
    Math(String),
}

fn math<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Math(e.to_string())
}

/// Outcome of a verb: the report and whether every mathematical check passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

pub const THEOREM_NAMES: &[&str] = &[
    "invariant-shape",
    "shape-differentials",
    "shape-cohomology",
    "cyclic-group",
    "diagonalizable-twist",
    "odd-products",
    "identity-twist",
    "identity-twist-complex",
    "group-algebra",
    "brackets",
    "quaternion-rotation",
    "f-independence",
];

pub struct Context {
    pub spec: InstanceSpec,
    pub max_degree: usize,
    pub oracle_bound: usize,
    pub witness: Option<KElem>,
}

impl Context {
    pub fn alg(&self) -> &MonogenicAlgebra {
        &self.spec.algebra
    }

    pub fn complex(&self) -> Result<SmallComplex, RunError> {
        SmallComplex::regular(self.alg(), self.max_degree + 1).map_err(math)
    }

    pub fn find_witness(&self) -> Option<Witness> {
        let mut user: Vec<KElem> = self.witness.iter().cloned().collect();
        user.extend(self.spec.witness_candidates().unwrap_or_default());
        cf::find_witness(self.alg(), &user)
    }
}

fn validation_entry(name: &str, v: &monogen::kalgebra::Validation) -> Value {
    json!({"check": name, "ok": v.ok, "failure": v.failure})
}

/// Structural checks; stops before building the algebra if `f` is rejected.
pub fn validate(raw: &RawInstance, bound: usize) -> Result<(Outcome, Option<InstanceSpec>), RunError> {
    let mut checks = Vec::new();
    let kv = raw.k.validate();
    checks.push(validation_entry("algebra_validate", &kv));
    let ev = raw.alpha.validate(&raw.k);
    checks.push(validation_entry("endo_validate", &ev));
    let fv = validate_f(&raw.k, &raw.alpha, &raw.lambdas);
    checks.push(validation_entry("validate_f", &fv));
    let mut built = None;
    if kv.ok && ev.ok && fv.ok {
        let spec = raw.clone().build().map_err(|e| RunError::Input(e.to_string()))?;
        let alg = &spec.algebra;
        checks.push(validation_entry("derivative_identity_check", &alg.derivative_identity_check()));
        checks.push(validation_entry("contraction_check", &alg.contraction_check(bound)));
        let complex = SmallComplex::regular(alg, bound + 1).map_err(math)?;
        checks.push(validation_entry("chain_map_check", &products::chain_map_check(alg, &complex, bound.min(5))));
        built = Some(spec);
    }
    let ok = checks.iter().all(|c| c["ok"] == json!(true));
    Ok((Outcome { report: json!({"validation": checks}), ok }, built))
}

fn coords_json(alg: &MonogenicAlgebra, v: &[monogen::Scalar]) -> Value {
    let f = alg.field();
    Value::Array(v.iter().map(|x| f.encode(x)).collect())
}

fn group_json(alg: &MonogenicAlgebra, g: &CohomologyGroup) -> Value {
    json!({
        "degree": g.degree,
        "dim": g.dim,
        "representatives": g.reps.iter().enumerate().map(|(i, r)| json!({
            "basis_index": i,
            "label": alg.display(r),
        })).collect::<Vec<_>>(),
    })
}

pub fn cohomology(ctx: &Context) -> Result<Outcome, RunError> {
    let complex = ctx.complex()?;
    let groups = complex.all_cohomology().map_err(math)?;
    let alg = ctx.alg();
    Ok(Outcome {
        report: json!({
            "max_degree": ctx.max_degree,
            "dimensions": groups.iter().map(|g| g.dim).collect::<Vec<_>>(),
            "groups": groups.iter().map(|g| group_json(alg, g)).collect::<Vec<_>>(),
        }),
        ok: true,
    })
}

pub fn products(ctx: &Context) -> Result<Outcome, RunError> {
    let alg = ctx.alg();
    let complex = ctx.complex()?;
    let groups = complex.all_cohomology().map_err(math)?;
    let top = groups.len();
    let mut ok = true;
    let mut cups = Vec::new();
    for p in 0..top {
        for q in 0..top - p {
            for (ia, a) in groups[p].reps.iter().enumerate() {
                for (ib, b) in groups[q].reps.iter().enumerate() {
                    let closed = products::cup_small(alg, a, p, b, q);
                    let generic = products::cup_generic(alg, a, p, b, q);
                    let agree = complex.classes_equal(p + q, &closed, &generic).map_err(math)?;
                    ok &= agree;
                    let class = groups[p + q].class_coords(&complex, &closed).map_err(math)?;
                    cups.push(json!({
                        "deg_a": p, "deg_b": q, "basis_index_a": ia, "basis_index_b": ib,
                        "result_class_coords": coords_json(alg, &class),
                        "source": "closed", "generic_agrees": agree,
                    }));
                }
            }
        }
    }
    let witness = ctx.find_witness();
    let limit = ctx.oracle_bound.min(BRACKET_DEGREE_BOUND);
    let mut brackets = Vec::new();
    for r in 0..top {
        for rp in 0..top {
            if r + rp == 0 || r + rp > top || r + rp > limit {
                continue;
            }
            let t = r + rp - 1;
            for (ia, a) in groups[r].reps.iter().enumerate() {
                for (ib, b) in groups[rp].reps.iter().enumerate() {
                    let generic = products::bracket_small_generic(alg, a, r, b, rp).map_err(math)?;
                    let (source, agree) = match &witness {
                        Some(_) => {
                            let closed = products::bracket_small_closed(alg, a, r, b, rp).map_err(math)?;
                            let agree = complex.classes_equal(t, &closed, &generic).map_err(math)?;
                            ok &= agree;
                            ("closed+generic", Some(agree))
                        }
                        None => ("generic", None),
                    };
                    let class = groups[t].class_coords(&complex, &generic).map_err(math)?;
                    brackets.push(json!({
                        "deg_a": r, "deg_b": rp, "basis_index_a": ia, "basis_index_b": ib,
                        "result_class_coords": coords_json(alg, &class),
                        "source": source, "closed_agrees": agree,
                    }));
                }
            }
        }
    }
    Ok(Outcome {
        report: json!({
            "basis": groups.iter().map(|g| group_json(alg, g)).collect::<Vec<_>>(),
            "cup": cups,
            "bracket": brackets,
            "bracket_degree_limit": limit,
        }),
        ok,
    })
}

fn check_json(c: &TheoremCheck) -> Value {
    c.to_json()
}

pub fn theorems(ctx: &Context, which: &[String]) -> Result<Outcome, RunError> {
    for w in which {
        if !THEOREM_NAMES.contains(&w.as_str()) {
            return Err(RunError::Input(format!("unknown check {w:?}; expected one of {}", THEOREM_NAMES.join(", "))));
        }
    }
    let selected: Vec<&str> = if which.is_empty() { THEOREM_NAMES.to_vec() } else { which.iter().map(String::as_str).collect() };
    let alg = ctx.alg();
    let complex = ctx.complex()?;
    let witness = ctx.find_witness();
    let w = witness.as_ref();
    let mut checks = Vec::new();
    let mut ok = true;
    let mut push = |c: TheoremCheck, checks: &mut Vec<Value>| {
        ok &= c.skipped || c.matches;
        checks.push(check_json(&c));
    };
    for name in &selected {
        match *name {
            "invariant-shape" => push(cf::shape_modules_check(alg, &complex, w), &mut checks),
            "shape-differentials" => push(cf::shape_differentials_check(alg, &complex, w), &mut checks),
            "shape-cohomology" => push(cf::shape_cohomology(alg, &complex, w), &mut checks),
            "cyclic-group" => push(cf::cyclic_group_check(alg, &complex, w).map_err(math)?, &mut checks),
            "diagonalizable-twist" => push(cf::diagonalizable_cohomology(alg, &complex, w), &mut checks),
            "odd-products" => push(cf::odd_products_check(alg, &complex, w).map_err(math)?, &mut checks),
            "identity-twist" => push(cf::identity_twist_cohomology(alg, &complex), &mut checks),
            "identity-twist-complex" => push(cf::identity_twist_complex(alg, &complex), &mut checks),
            "group-algebra" => push(cf::group_algebra_cohomology(alg, &complex), &mut checks),
            "brackets" => {
                let mut c = TheoremCheck { theorem: "closed brackets".into(), ..Default::default() };
                match cf::bracket_cross_check(alg, &complex, 3.min(ctx.max_degree)) {
                    Ok(cmp) => {
                        for b in cmp.iter().filter(|b| !b.agree) {
                            c.mismatches.push(format!("[{}#{}, {}#{}] differs from the generic bracket", b.deg_a, b.index_a, b.deg_b, b.index_b));
                        }
                        c.matches = c.mismatches.is_empty();
                        c.notes.push(format!("{} pairs compared", cmp.len()));
                    }
                    Err(monogen::products::ProductError::NoWitness) => {
                        c.skipped = true;
                        c.notes.push("no witness".into());
                    }
                    Err(e) => return Err(math(e)),
                }
                push(c, &mut checks);
            }
            "quaternion-rotation" => {
                let mut c = TheoremCheck { theorem: "quaternion rotation".into(), ..Default::default() };
                match cf::quaternion_rotation(alg, &complex).map_err(math)? {
                    Some(q) => {
                        c.closed_table = q.closed_dims.clone();
                        c.generic_table = q.generic_dims.clone();
                        for (name, holds) in [("invariants", q.invariants_match), ("differentials", q.differentials_match), ("theta isomorphism", q.theta_isomorphism)] {
                            if !holds {
                                c.mismatches.push(format!("{name} differ"));
                            }
                        }
                        if q.closed_dims != q.generic_dims {
                            c.mismatches.push("dimension tables differ".into());
                        }
                        c.matches = c.mismatches.is_empty();
                    }
                    None => c.skipped = true,
                }
                push(c, &mut checks);
            }
            "f-independence" => {
                let r = cf::f_independence(alg, ctx.max_degree.min(4)).map_err(math)?;
                let mut c = TheoremCheck { theorem: "independence of middle coefficients".into(), ..Default::default() };
                c.skipped = !r.compared;
                c.matches = r.holds();
                if let Some(reason) = r.reason.clone() {
                    c.notes.push(reason);
                }
                if r.compared && !r.holds() {
                    c.mismatches.push(format!("dims equal {}, cups equal {}, brackets equal {}", r.dims_equal, r.cups_equal, r.brackets_equal));
                }
                push(c, &mut checks);
            }
            _ => unreachable!(),
        }
    }
    let dims: Vec<usize> = complex.all_cohomology().map_err(math)?.iter().map(|g| g.dim).collect();
    Ok(Outcome {
        report: json!({
            "witness": witness.as_ref().map(|w| w.label.clone()).unwrap_or_else(|| "none".into()),
            "witness_obstruction": cf::witness_obstruction(alg),
            "generic_dimensions": dims,
            "checks": checks,
        }),
        ok,
    })
}
