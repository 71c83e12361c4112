//! Deterministic checks over the bundled models and the worked examples.

use subadj_core::families::{cbf_report, contract_and_degree, dbar, LogFibration};
use subadj_core::omega::{self, Collision, MarkedLine};
use subadj_core::rational::{self, int, ratio};
use subadj_core::surfaces::{fiber_name, SurfaceModel};
use subadj_core::trees::{enumerate_decompositions, Decomposition};
use subadj_core::weights::{distinguished_component, f_charge, WeightVector};
use subadj_core::{LabelSet, Rational};

use crate::models;
use crate::report::{CheckRow, VerifyReport};
use crate::schema::TreeSpec;
use crate::CliError;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Assertion(what()))
    }
}

fn expect_eq(label: &str, got: &Rational, want: &Rational) -> Result<(), CliError> {
    ensure(got == want, || format!("{label}: got {got}, expected {want}"))
}

fn ls(v: &[u32]) -> LabelSet {
    LabelSet::from_labels(v.iter().copied()).expect("small labels")
}

/// Two-sided splits of `{1..n}` with both sides of size ≥ 2, by subset scan.
pub fn brute_force_split_count(n: u32) -> usize {
    (0u64..1 << n)
        .filter(|m| m & 1 == 1 && m.count_ones() >= 2 && n - m.count_ones() >= 2)
        .count()
}

/// `P1 = C₀` and `P2 = C₀ + nF` meeting only at `Q` with contact order `n`;
/// `P2` crosses the constant sections `P3`, `P4` at `n` points each.
pub fn tangency_model(n: u32) -> Result<SurfaceModel, CliError> {
    let mut points = vec![String::from("Q")];
    points.extend((1..=n).map(|i| format!("R{i}")));
    points.extend((1..=n).map(|i| format!("S{i}")));
    let half = ratio(1, 2);
    let mut m = SurfaceModel::new_ruled(0, 0, &points)?;
    for (name, a) in [("P1", 0), ("P2", n as i64), ("P3", 0), ("P4", 0)] {
        m = m.add_section(name, int(a), half.clone())?;
    }
    let mut last = fiber_name("Q");
    for k in 1..=n {
        let name = format!("E{k}");
        m = m.blow_up(
            "Q",
            &[("P1".into(), 1), ("P2".into(), 1), (last.clone(), 1)],
            rational::zero(),
            Some(&name),
        )?;
        last = name;
    }
    for (prefix, other) in [("R", "P3"), ("S", "P4")] {
        for i in 1..=n {
            let p = format!("{prefix}{i}");
            m = m.blow_up(&p, &[("P2".into(), 1), (other.into(), 1), (fiber_name(&p), 1)], rational::zero(), None)?;
        }
    }
    Ok(m)
}

fn boundary_counts() -> Result<String, CliError> {
    let mut got = Vec::new();
    for n in 3..=6 {
        let listed = enumerate_decompositions(n)?.len();
        ensure(listed == brute_force_split_count(n), || format!("n = {n}: {listed} listed"))?;
        got.push(listed);
    }
    ensure(got == [0, 3, 10, 25], || format!("{got:?}"))?;
    Ok(format!("n = 3..6 → {got:?}"))
}

fn remark5_weights() -> Result<String, CliError> {
    let d = WeightVector::new(vec![ratio(4, 7), ratio(4, 7), ratio(2, 7), ratio(2, 7), ratio(2, 7)])?;
    let alpha = d.alpha(ls(&[1, 2]))?;
    expect_eq("α({1,2})", &alpha, &ratio(8, 7))?;
    let charge = f_charge(&d, &Decomposition::new(5, ls(&[1, 2]))?)?;
    expect_eq("F-charge", &charge.coefficient, &ratio(1, 7))?;
    ensure(charge.charged == ls(&[3, 4, 5]), || format!("charged side {}", charge.charged))?;
    let spec: TreeSpec = serde_json::from_str(models::bundled("five-point-tree.json").expect("bundled"))
        .map_err(|e| CliError::Json(e.to_string()))?;
    let c0 = distinguished_component(&spec.build(), &d)?;
    ensure(c0 == 0, || format!("distinguished vertex {c0}"))?;
    Ok(String::from("α = 8/7, charge 1/7 on {3,4,5}, kept vertex carries {1,2}"))
}

fn remark5_family() -> Result<String, CliError> {
    let fam = models::family("remark5.json")?;
    let (c, deg) = contract_and_degree(&fam)?;
    ensure(c.component == "X1", || format!("kept component {}", c.component))?;
    let pushed: Vec<Rational> = c.pushed.iter().map(|p| p.coefficient.clone()).collect();
    ensure(pushed == [ratio(4, 7), ratio(4, 7), ratio(6, 7)], || format!("pushed {pushed:?}"))?;
    expect_eq("deg L", &deg, &rational::zero())?;
    Ok(String::from("kept X1, pushed (4/7, 4/7, 6/7), deg L = 0"))
}

fn canonical_section_values() -> Result<String, CliError> {
    let d = WeightVector::uniform(4)?;
    let line = MarkedLine::standard(4);
    let w = omega::canonical_section(&line, &d, 2)?;
    ensure(w.p == 24, || format!("p = {}", w.p))?;
    for l in 1..=4 {
        ensure(w.pole_order(l)? == 24, || format!("pole order at {l}"))?;
    }
    ensure(w.divisor().is_empty(), || String::from("zero divisor not empty"))?;
    let order = omega::collision_order(&d, 2, &line, &Collision::transversal(ls(&[1, 2]), int(-1)))?;
    ensure(order == 8, || format!("collision order {order}"))?;
    expect_eq("boundary coefficient", &omega::moduli_coefficient(&d, 2, ls(&[1, 2]))?, &ratio(1, 6))?;
    Ok(String::from("p = 24, poles 24, empty zero divisor, order 8, coefficient 1/6"))
}

fn tangential_scaling() -> Result<String, CliError> {
    let d = WeightVector::uniform(4)?;
    let line = MarkedLine::standard(4);
    for n in 1..=5u32 {
        let mut c = Collision::transversal(ls(&[1, 2]), int(-1));
        c.tangency = n;
        let order = omega::collision_order(&d, 2, &line, &c)?;
        let value = ratio(order as i64, 48);
        expect_eq(&format!("n = {n}"), &value, &ratio(n as i64, 6))?;
        expect_eq(&format!("n = {n} (I_2n)"), &value, &ratio(2 * n as i64, 12))?;
    }
    Ok(String::from("order/(mp) = n/6 = 2n/12 for n = 1..5"))
}

fn universal_pencil() -> Result<String, CliError> {
    let fib = LogFibration::new(models::surface("universal4.json")?)?;
    let r = cbf_report(&fib)?;
    expect_eq("deg L", &r.deg_l, &ratio(1, 2))?;
    expect_eq("deg Δ", &r.discriminant_degree(), &rational::zero())?;
    expect_eq("deg M", &r.deg_m, &ratio(1, 2))?;
    let coefficient = omega::moduli_coefficient(&WeightVector::uniform(4)?, 2, ls(&[1, 2]))?;
    expect_eq("3 × boundary coefficient", &(coefficient * int(3)), &r.deg_m)?;
    let fam = subadj_core::families::FamilyModel::single(
        fib.surface().clone(),
        &["P1", "P2", "P3", "P4"],
        WeightVector::uniform(4)?,
    )?;
    let (_, deg) = contract_and_degree(&fam)?;
    expect_eq("contraction deg L", &deg, &r.deg_l)?;
    Ok(String::from("deg L = 1/2, Δ = 0, deg M = 1/2 = 3 × 1/6"))
}

fn asymmetric_pencil() -> Result<String, CliError> {
    let fam = models::family("universal4-family.json")?;
    let (c, deg) = contract_and_degree(&fam)?;
    expect_eq("deg L", &deg, &ratio(1, 4))?;
    expect_eq("Δ", &c.discriminant_degree(), &rational::zero())?;
    let d = fam.weights();
    let mut total = rational::zero();
    for side in [[1, 4], [2, 4], [3, 4]] {
        total += omega::moduli_coefficient(d, 4, ls(&side))?;
    }
    expect_eq("Σ boundary coefficients (m = 4)", &total, &deg)?;
    Ok(String::from("deg L = 1/4 = 3/28 + 3/28 + 1/28"))
}

fn multiple_fiber() -> Result<String, CliError> {
    let r = cbf_report(&LogFibration::new(models::surface("multiplicity2.json")?)?)?;
    let q = r.fibers.iter().find(|f| f.point == "Q").expect("point Q");
    expect_eq("δ_Q", &q.delta, &dbar(&rational::zero(), 2)?)?;
    expect_eq("deg L", &r.deg_l, &int(1))?;
    expect_eq("deg M", &r.deg_m, &ratio(1, 2))?;
    ensure(r.all_delta_below_one && r.deg_m_nonnegative, || String::from("flags"))?;
    Ok(String::from("δ_Q = 1/2 = (2−1)/2, deg M = 1/2"))
}

fn tangency_family() -> Result<String, CliError> {
    let sixth = omega::moduli_coefficient(&WeightVector::uniform(4)?, 2, ls(&[1, 2]))?;
    for n in 1..=5u32 {
        let r = cbf_report(&LogFibration::new(tangency_model(n)?)?)?;
        expect_eq(&format!("n = {n} Δ"), &r.discriminant_degree(), &rational::zero())?;
        let n_q = int(n as i64);
        let predicted = &sixth * &n_q + &sixth * int(2 * n as i64);
        expect_eq(&format!("n = {n} deg M"), &r.deg_m, &predicted)?;
        expect_eq(&format!("n = {n} deg M"), &r.deg_m, &ratio(n as i64, 2))?;
    }
    let bundled = models::surface("example8-n3.json")?;
    ensure(bundled == tangency_model(3)?, || String::from("bundled n = 3 model differs"))?;
    Ok(String::from("deg M = n/6 + 2n·(1/6) = n/2 for n = 1..5"))
}

fn nonnegative_moduli_part() -> Result<String, CliError> {
    let mut seen = Vec::new();
    for name in ["universal4.json", "multiplicity2.json", "example8-n3.json"] {
        let r = cbf_report(&LogFibration::new(models::surface(name)?)?)?;
        ensure(r.deg_m_nonnegative, || format!("{name}: deg M = {}", r.deg_m))?;
        seen.push(format!("{name}: {}", r.deg_m));
    }
    for name in ["remark5.json", "universal4-family.json"] {
        let (c, deg) = contract_and_degree(&models::family(name)?)?;
        let m = deg - c.discriminant_degree();
        ensure(m >= rational::zero(), || format!("{name}: deg M = {m}"))?;
        seen.push(format!("{name}: {m}"));
    }
    Ok(seen.join(", "))
}

type Check = fn() -> Result<String, CliError>;

pub const CHECKS: &[(&str, Check)] = &[
    ("boundary-counts", boundary_counts),
    ("remark5-weights", remark5_weights),
    ("remark5-family", remark5_family),
    ("canonical-section", canonical_section_values),
    ("tangential-scaling", tangential_scaling),
    ("universal-pencil", universal_pencil),
    ("asymmetric-pencil", asymmetric_pencil),
    ("multiple-fiber", multiple_fiber),
    ("tangency-family", tangency_family),
    ("nonnegative-moduli-part", nonnegative_moduli_part),
];

pub fn run_all() -> VerifyReport {
    let checks: Vec<CheckRow> = CHECKS
        .iter()
        .map(|(name, f)| match f() {
            Ok(detail) => CheckRow { name: name.to_string(), passed: true, detail },
            Err(e) => CheckRow { name: name.to_string(), passed: false, detail: format!("[{}] {e}", e.code()) },
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { checks, passed }
}
