//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic only.
//!
//! Two criteria cannot hold as stated. They are computed in full and reported
//! as FAIL; the run itself only fails if a result differs from the recorded
//! expectation or the recorded obstruction stops holding.

use std::process::ExitCode;
use std::time::Instant;

use monogen::closedforms::{self as cf};
use monogen::cohomology::SmallComplex;
use monogen::instances::*;
use monogen::monogenic::MonogenicAlgebra;
use monogen::products;
use monogen::Field;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

type Check = fn() -> Outcome;

fn complex(alg: &MonogenicAlgebra, bound: usize) -> SmallComplex {
    SmallComplex::regular(alg, bound).expect("complex builds")
}

fn dims(c: &SmallComplex) -> Vec<usize> {
    c.all_cohomology().expect("cohomology").iter().map(|g| g.dim).collect()
}

fn flagship() -> Vec<(&'static str, MonogenicAlgebra)> {
    vec![("sweedler", sweedler()), ("taft n=3", taft(3)), ("gh4 u=3", gh4_instance(3)), ("quaternion pi", quaternion_pi(1))]
}

fn contractibility() -> Outcome {
    let mut bad = Vec::new();
    for (name, alg) in flagship() {
        let t = Instant::now();
        let v = alg.contraction_check(6);
        if !v.ok {
            bad.push(format!("{name}: {}", v.failure.unwrap_or_default()));
        } else if t.elapsed().as_secs_f64() > 5.0 {
            bad.push(format!("{name}: {:.1}s", t.elapsed().as_secs_f64()));
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "m sigma_0 = id and d'sigma + sigma d' = id through degree 6 on four instances".into() } else { bad.join("; ") })
}

fn chain_maps() -> Outcome {
    let mut bad = Vec::new();
    for (name, alg) in flagship() {
        // building the complex checks d o d = 0 in every degree
        let c = match SmallComplex::regular(&alg, 6) {
            Ok(c) => c,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        for (what, v) in [
            ("bar b o b", products::bar_square_check(&alg, 5)),
            ("chain maps", products::chain_map_check(&alg, &c, 5)),
            ("recursion", products::comparison_recursion_check(&alg, 4)),
        ] {
            if !v.ok {
                bad.push(format!("{name} {what}: {}", v.failure.unwrap_or_default()));
            }
        }
        match products::phi_psi_identity_check(&alg, &c) {
            Ok(v) if v.ok => {}
            Ok(v) => bad.push(format!("{name} phi psi: {}", v.failure.unwrap_or_default())),
            Err(e) => bad.push(format!("{name} phi psi: {e}")),
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "d o d = 0, d phi = phi b, b psi = psi d through degree 5; closed maps equal the recursion through degree 4".into() } else { bad.join("; ") })
}

fn taft_dimensions() -> Outcome {
    let mut bad = Vec::new();
    for (name, alg) in [("sweedler", sweedler()), ("taft n=3", taft(3))] {
        let c = complex(&alg, 7);
        let groups = c.all_cohomology().unwrap();
        let d: Vec<usize> = groups.iter().map(|g| g.dim).collect();
        if d != vec![1; 7] {
            bad.push(format!("{name}: dims {d:?}"));
            continue;
        }
        let x = &groups[1].reps[0];
        let xx = cf::cup_class(&alg, &c, &groups, x, 1, x, 1).unwrap();
        if xx.iter().any(|v| !alg.field().is_zero(v)) {
            bad.push(format!("{name}: x.x != 0"));
        }
        if !cf::cup_bijective(&alg, &c, &groups, &groups[2].reps[0], 2).unwrap() {
            bad.push(format!("{name}: cup by y not bijective"));
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "dims 1 in degrees 0..6, x.x = 0, cup by y bijective, n = 2, 3".into() } else { bad.join("; ") })
}

fn identity_twist() -> Outcome {
    let q = Field::rationals();
    let mut bad = Vec::new();
    for (field, coeffs, want) in [
        (q.clone(), vec![0, 0], vec![2, 1, 1, 1, 1]),
        (q.clone(), vec![0, -1], vec![2, 0, 0, 0, 0]),
        (Field::prime(3).unwrap(), vec![0, 0, 0], vec![3, 3, 3, 3, 3]),
    ] {
        let alg = truncated(&field, &coeffs);
        let c = complex(&alg, 5);
        let chk = cf::identity_twist_cohomology(&alg, &c);
        let cx = cf::identity_twist_complex(&alg, &c);
        if !(chk.matches && cx.matches && chk.generic_table == want && chk.closed_table == want) {
            bad.push(format!("{coeffs:?}: closed {:?} generic {:?} {:?}", chk.closed_table, chk.generic_table, chk.mismatches));
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "x^2, x^2 - 1 over Q and x^3 over GF(3): annihilator of f' tables match generic".into() } else { bad.join("; ") })
}

fn gh4_example() -> Outcome {
    let alg = gh4_instance(3);
    let c = complex(&alg, 9);
    let groups = c.all_cohomology().unwrap();
    let d: Vec<usize> = groups.iter().map(|g| g.dim).collect();
    let k = &alg.k;
    let (g, g2) = (k.basis(4), k.basis(8));
    let a = alg.from_k(&k.add(&g, &g2));
    let b = alg.from_k(&k.sub(&g, &g2));
    let x = alg.mono(&k.one(), 1);
    let gens = vec![(0, a), (1, x), (2, b), (4, alg.one())];
    let spans = cf::generated_spans(&alg, &c, &groups, &gens).unwrap();
    let bij = cf::cup_bijective(&alg, &c, &groups, &alg.one(), 4).unwrap();
    let per = cf::periodicity(&alg, &d).unwrap();
    let pass = d[..4] == [2, 2, 1, 1] && per.period == 4 && per.periodic && spans.iter().all(|&s| s) && bij;
    Outcome::new(pass, format!("dims {d:?}, period {}, generated {}, c bijective {bij}", per.period, spans.iter().all(|&s| s)))
}

fn rank_one_hopf() -> Outcome {
    let q = Field::rationals();
    let i = gaussian_field();
    // chi^n nontrivial: C_8, chi(g) = i, g_1 = g^2, n = 2
    let h = hopf_cyclic(&i, 8, &i.generator(), 2, 2);
    let r1 = cf::rank_one_hopf(&h.field, &h.group, h.g1, h.n, &h.xi, 6).unwrap();
    let first = !r1.chi_n_trivial && r1.ideal_identity == Some(true) && r1.closed.matches && r1.positive_dims_equal;
    // chi^n trivial: C_4, chi(g) = -1, g_1 = g, n = 2, xi = 1
    let h = hopf_cyclic(&q, 4, &q.from_i64(-1), 1, 2);
    let r2 = cf::rank_one_hopf(&h.field, &h.group, h.g1, h.n, &h.xi, 6).unwrap();
    let odd_claims: Vec<&(usize, usize, bool)> = r2.bracket_claims.iter().filter(|(a, b, _)| a % 2 == 1 && b % 2 == 1).collect();
    let brackets = odd_claims.iter().all(|c| c.2);
    let second = r2.chi_n_trivial && r2.closed.matches && r2.odd_cups_vanish == Some(true) && r2.positive_dims_equal;
    let failing: Vec<String> = odd_claims.iter().filter(|c| !c.2).map(|c| format!("({}, {})", c.0, c.1)).collect();
    Outcome::new(
        first && second && brackets,
        format!(
            "quotient model {} (dims {:?}); closed formulas {}, odd cups vanish {}, dims equal {}; [lx, mx] = lm - ml fails in degrees {}",
            first,
            r1.dims,
            r2.closed.matches,
            r2.odd_cups_vanish == Some(true),
            r2.positive_dims_equal,
            if failing.is_empty() { "none".into() } else { failing.join(" ") }
        ),
    )
}

fn bracket_cross_validation() -> Outcome {
    let q = Field::rationals();
    let i = gaussian_field();
    let h1 = hopf_cyclic(&i, 8, &i.generator(), 2, 2);
    let h2 = hopf_cyclic(&q, 4, &q.from_i64(-1), 1, 2);
    let mut bad = Vec::new();
    let mut pairs = 0;
    for (name, alg) in [
        ("sweedler", sweedler()),
        ("chi^n nontrivial", cf::hopf_model(&h1.field, &h1.group, h1.g1, h1.n, &h1.xi).unwrap()),
        ("chi^n trivial", cf::hopf_model(&h2.field, &h2.group, h2.g1, h2.n, &h2.xi).unwrap()),
    ] {
        let c = complex(&alg, 6);
        match cf::bracket_cross_check(&alg, &c, 3) {
            Ok(cmp) => {
                pairs += cmp.len();
                if cmp.iter().any(|b| !b.agree) {
                    bad.push(format!("{name}: closed and generic differ"));
                }
            }
            Err(e) => bad.push(format!("{name}: {e}")),
        }
        if !cf::even_brackets_vanish(&alg, &c, 4).unwrap() {
            bad.push(format!("{name}: even bracket nonzero"));
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { format!("{pairs} pairs agree as classes; [even, even] = 0") } else { bad.join("; ") })
}

fn quaternion() -> Outcome {
    let q = Field::rationals();
    let alg = quaternion_pi(1);
    let k = &alg.k;
    let trig = trig_pi(&q);
    let cands = vec![k.one(), k.scalar(&q.from_i64(-3)), k.zero(), k.basis(1), k.basis(2), k.basis(3), k.add(&k.one(), &k.basis(3))];
    let got = cf::classify_quaternion_coefficients(k, &trig, 2, &cands);
    let classify = got == vec![true, true, true, false, false, false, false];
    let mut parts = vec![format!("classification {classify}")];
    let mut pass = classify;
    for (rho, want) in [(1, vec![2, 0, 0, 0, 0]), (0, vec![2, 1, 1, 1, 1])] {
        let alg = quaternion_pi(rho);
        let c = complex(&alg, 5);
        let rep = cf::quaternion_rotation(&alg, &c).unwrap().unwrap();
        let ok = rep.theta_isomorphism && rep.invariants_match && rep.differentials_match && rep.closed_dims == want && rep.generic_dims == want;
        parts.push(format!("rho = {rho}: dims {:?}, theta iso {}", rep.generic_dims, rep.theta_isomorphism));
        pass &= ok;
    }
    Outcome::new(pass, parts.join(", "))
}

fn f_independence() -> Outcome {
    let alg = taft(3);
    let r = cf::f_independence(&alg, 4).unwrap();
    let detail = match &r.reason {
        Some(reason) => format!("not comparable: {reason} (admissible lambda_1 space has dimension {})", r.admissible_dim),
        None => format!("dims {}, cups {}, brackets {}", r.dims_equal, r.cups_equal, r.brackets_equal),
    };
    Outcome::new(r.holds(), detail)
}

fn negative_control() -> Outcome {
    let alg = swap_instance(3);
    let no_witness = cf::find_witness(&alg, &[]).is_none();
    let c = match SmallComplex::regular(&alg, 5) {
        Ok(c) => c,
        Err(e) => return Outcome::new(false, format!("generic pipeline failed: {e}")),
    };
    let groups = c.all_cohomology().unwrap();
    let skipped = cf::shape_cohomology(&alg, &c, None).skipped && cf::shape_modules_check(&alg, &c, None).skipped;
    let commutative = cf::graded_commutative(&alg, &c, &groups).unwrap();
    let d = dims(&c);
    Outcome::new(no_witness && skipped && commutative, format!("witness: none {no_witness}, closed forms skipped {skipped}, dims {d:?}, graded-commutative {commutative}"))
}

/// Criteria that do not hold as stated, with a check that the recorded
/// obstruction is still the reason.
fn obstruction_confirmed(name: &str) -> bool {
    match name {
        "independence of middle coefficients" => {
            // a witness forces lambda_i = 0 for 0 < i < n
            let alg = taft(3);
            cf::find_witness(&alg, &[]).is_some() && cf::admissible_first_coefficients(&alg).is_empty()
        }
        "rank one hopf algebras" => {
            // the closed bracket, which agrees with the generic one, is nonzero on odd pairs
            let q = Field::rationals();
            let h = hopf_cyclic(&q, 4, &q.from_i64(-1), 1, 2);
            let alg = cf::hopf_model(&h.field, &h.group, h.g1, h.n, &h.xi).unwrap();
            let c = complex(&alg, 5);
            let groups = c.all_cohomology().unwrap();
            let (a, b) = (&groups[1].reps[0], &groups[3].reps[0]);
            let closed = products::bracket_small_closed(&alg, a, 1, b, 3).unwrap();
            let generic = products::bracket_small_generic(&alg, a, 1, b, 3).unwrap();
            c.classes_equal(3, &closed, &generic).unwrap() && !c.is_coboundary(3, &generic)
        }
        _ => false,
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Check)> = vec![
        ("resolution contractibility", contractibility),
        ("chain maps and comparison recursion", chain_maps),
        ("cyclic group algebra dimensions and ring structure", taft_dimensions),
        ("identity twist truncated polynomials", identity_twist),
        ("dihedral-type example at u = 3", gh4_example),
        ("rank one hopf algebras", rank_one_hopf),
        ("bracket cross-validation", bracket_cross_validation),
        ("quaternions rotated by pi", quaternion),
        ("independence of middle coefficients", f_independence),
        ("negative control without witness", negative_control),
    ];
    let expected_failures = ["rank one hopf algebras", "independence of middle coefficients"];
    let mut unexpected = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("{status} {name}: {} [{:.2}s]", out.detail, t.elapsed().as_secs_f64());
        let known = expected_failures.contains(&name);
        if out.pass == known || (known && !obstruction_confirmed(name)) {
            println!("  unexpected result for {name}");
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
