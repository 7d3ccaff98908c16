//! End-to-end acceptance: each test drives the binary (and, where the
//! check is exact, the library) through one complete scenario and prints
//! one `ACCEPTANCE n: PASS` line.

use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use holoscope::formats::{parse_rat, write_recurrence, write_sequence};
use holoscope_core::asympt::{fit_exponent, fit_growth, power_sequence};
use holoscope_core::exact::rational::{rat_i, rat_to_f64};
use holoscope_core::exact::roots::isolate_roots;
use holoscope_core::multisum::eval_sequence;
use holoscope_core::ode::{analyze, rec_to_ode, root_radius, series_consistency};
use holoscope_core::recurrence::{extend_sequence, verify_recurrence};
use holoscope_core::term::{
    check_balance, check_finiteness, enumerate_support, eval_binomial_form, eval_term, parse_term,
    to_binomial_form, BalancedTerm, FactorialCache, LinearForm, Sign,
};
use holoscope_core::{Int, PolyQ, Rat, Recurrence};

const COUNTEREXAMPLE_REC: &str = "order 2\nP_0: 1 2\nP_1: -11 -7\nP_2: 1 2\n";
const APERY_TERM: &str = "sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2\n";
const POW2_TERM: &str = "sum k: binom(n, k)\n";

fn counterexample() -> Recurrence {
    Recurrence::new(vec![
        PolyQ::from_i64(&[1, 2]),
        PolyQ::from_i64(&[-11, -7]),
        PolyQ::from_i64(&[1, 2]),
    ])
    .unwrap()
}

/// Run the binary; returns the parsed JSON report, the exit code, and the
/// raw bytes.
fn run_cli(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_holoscope"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let raw = String::from_utf8(out.stdout).expect("utf8 output");
    let json = serde_json::from_str(&raw).unwrap_or(Value::Null);
    (json, code, raw)
}

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.display().to_string()
}

/// `sqrt(x)` as a rational, correct to about 60 decimal digits.
fn sqrt_rat(x: u64) -> Rat {
    let scale = Int::from(10u64).pow(60);
    let root = (Int::from(x) * &scale * &scale).sqrt();
    Rat::new(root, scale)
}

fn small_rat(num: i64, pow10: u32) -> Rat {
    Rat::new(Int::from(num), Int::from(10u64).pow(pow10))
}

fn assert_close_rat(value: &Rat, reference: &Rat, eps: &Rat, what: &str) {
    let d = value - reference;
    assert!(
        d < *eps && d > -eps.clone(),
        "{what}: {} not within {} of reference",
        rat_to_f64(value),
        rat_to_f64(eps),
    );
}

fn finish(start: Instant, budget_secs: u64, criterion: u32) {
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < budget_secs,
        "criterion {criterion} took {elapsed:?}, budget {budget_secs} s"
    );
    println!("ACCEPTANCE {criterion}: PASS");
}

#[test]
fn acceptance_1_counterexample_pipeline() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let rec_path = write_file(&dir, "cx.rec", COUNTEREXAMPLE_REC);

    let (report, code, _) = run_cli(&["obstruct", &rec_path, "--initial", "0,1", "--nmax", "400"]);
    assert_eq!(code, 10, "obstruction exit code");
    assert_eq!(
        report["verdict"]["kind"].as_str().unwrap(),
        "ObstructionIrrationalExponent"
    );
    assert_eq!(report["ode"]["leading"].as_str().unwrap(), "2*z^3 - 7*z^2 + 2*z");

    // The same equation in exact form: leading z(2z^2 - 7z + 2), checked
    // by substituting the power series through order 100.
    let rec = counterexample();
    let s = extend_sequence(&rec, &[rat_i(0), rat_i(1)], 120).unwrap();
    let ode = rec_to_ode(&rec, &[rat_i(0), rat_i(1)]);
    assert_eq!(ode.leading(), &PolyQ::from_i64(&[0, 2, -7, 2]));
    assert!(series_consistency(&ode, &s), "series substitution to order 100");

    let sing = analyze(&ode);
    let quad = sing
        .factors
        .iter()
        .find(|f| f.poly.degree() == Some(2))
        .expect("quadratic factor");
    let sqrt33 = sqrt_rat(33);
    let lam_lo = (rat_i(7) - &sqrt33) / rat_i(4);
    let lam_hi = (rat_i(7) + &sqrt33) / rat_i(4);
    let box_eps = small_rat(1, 12);
    assert_eq!(quad.roots.len(), 2);
    for (root, reference) in quad.roots.iter().zip([&lam_lo, &lam_hi]) {
        assert!(root.root.radius <= box_eps, "box radius below 1e-12");
        assert_eq!(root.root.center_im, rat_i(0));
        assert_close_rat(&root.root.center_re, reference, &box_eps, "singularity");
    }

    // Exponents -1 +- (5/2) sqrt(3/11), read off the exact eliminant.
    let eliminant = quad.exponent_poly.as_ref().expect("exponent polynomial");
    assert_eq!(eliminant, &PolyQ::from_i64(&[-31, 88, 44]));
    assert!(quad.has_irrational_exponent);
    assert!(quad.rational_exponents.is_empty());
    let half_gap = rat_i(5) * &sqrt33 / rat_i(22);
    let alpha_lo = rat_i(-1) - &half_gap;
    let alpha_hi = rat_i(-1) + &half_gap;
    let exp_eps = small_rat(1, 20);
    let exps = isolate_roots(eliminant, &root_radius());
    assert_eq!(exps.len(), 2);
    for (root, reference) in exps.iter().zip([&alpha_lo, &alpha_hi]) {
        assert_eq!(root.root.center_im, rat_i(0));
        assert_close_rat(&root.root.center_re, reference, &exp_eps, "exponent");
    }

    finish(start, 10, 1);
}

#[test]
fn acceptance_2_apery_pipeline() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let term_path = write_file(&dir, "apery.term", APERY_TERM);

    let (report, code, _) = run_cli(&["analyze-term", &term_path, "--nmax", "60"]);
    assert_eq!(code, 0);
    let prefix: Vec<&str> = report["sequence"]["prefix"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(&prefix[..5], &["1", "5", "73", "1445", "33001"]);

    // Integrality through n = 60: the denominator certificate is
    // identically one, i.e. its log-lcm curve is identically zero.
    let denom = &report["certificates"]["denominator"];
    assert!(!denom["alarm"].as_bool().unwrap());
    let curve = denom["curve"].as_array().unwrap();
    assert_eq!(curve.last().unwrap()["n"].as_u64().unwrap(), 60);
    assert!(curve.iter().all(|p| p["value"].as_f64().unwrap() == 1.0));

    // The guessed recurrence, rebuilt from the report, checks out on
    // held-out values through n = 200.
    assert_eq!(report["recurrence"]["order"].as_u64().unwrap(), 2);
    assert_eq!(report["recurrence"]["degree"].as_u64().unwrap(), 3);
    let coeffs: Vec<PolyQ> = report["recurrence"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|poly| {
            PolyQ::from_coeffs(
                poly.as_array()
                    .unwrap()
                    .iter()
                    .map(|c| parse_rat(c.as_str().unwrap()).unwrap())
                    .collect(),
            )
        })
        .collect();
    let rec = Recurrence::new(coeffs).unwrap();
    let term = parse_term(APERY_TERM).unwrap();
    let held_out = eval_sequence(&term, 200).unwrap();
    assert_eq!(verify_recurrence(&rec, &held_out), Ok(true));

    // Growth and theta against the derived local exponents.
    let rec_path = write_file(&dir, "apery.rec", &write_recurrence(&rec));
    let (report, code, _) =
        run_cli(&["obstruct", &rec_path, "--initial", "1,5", "--nmax", "400"]);
    assert_eq!(code, 0, "consistent verdict exit code");
    assert_eq!(
        report["verdict"]["kind"].as_str().unwrap(),
        "ConsistentRationalExponents"
    );
    let xval = &report["cross_validation"];
    assert!(xval["consistent"].as_bool().unwrap());
    let growth = xval["growth"]["fitted"].as_f64().unwrap();
    assert!((growth - 33.9706).abs() < 1e-3, "growth {growth}");
    assert!(xval["growth"]["within"].as_bool().unwrap());
    let theta = report["fit"]["theta"]["estimate"]["float"].as_f64().unwrap();
    assert!((theta - (-1.5)).abs() < 5e-2, "theta {theta}");
    assert!(xval["theta"]["within"].as_bool().unwrap());

    finish(start, 60, 2);
}

#[test]
fn acceptance_3_binomial_smoke_pipeline() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let term_path = write_file(&dir, "pow2.term", POW2_TERM);

    let (report, code, _) = run_cli(&["analyze-term", &term_path, "--nmax", "200"]);
    assert_eq!(code, 0);
    assert_eq!(
        report["verdict"]["kind"].as_str().unwrap(),
        "ConsistentRationalExponents"
    );
    assert_eq!(report["recurrence"]["order"].as_u64().unwrap(), 1);

    let term = parse_term(POW2_TERM).unwrap();
    let s = eval_sequence(&term, 200).unwrap();
    let mut expected = rat_i(1);
    for v in &s.values {
        assert_eq!(v, &expected, "a_n = 2^n exactly");
        expected = expected * rat_i(2);
    }

    let factors = report["singularities"]["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 1);
    let factor = &factors[0];
    assert_eq!(factor["polynomial"].as_str().unwrap(), "2*z - 1");
    assert_eq!(factor["roots"][0]["re"]["float"].as_f64().unwrap(), 0.5);
    let exps: Vec<&str> = factor["rational_exponents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(exps, ["-1"]);
    assert!(report["cross_validation"]["consistent"].as_bool().unwrap());

    finish(start, 5, 3);
}

fn random_form(rng: &mut StdRng, arity: usize) -> LinearForm {
    loop {
        let form = LinearForm {
            coeff_n: rng.gen_range(-3..=3),
            coeff_k: (0..arity).map(|_| rng.gen_range(-3..=3)).collect(),
            constant: rng.gen_range(-3..=3),
        };
        if !form.is_zero() {
            return form;
        }
    }
}

fn random_sign(rng: &mut StdRng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn in_bounds(form: &LinearForm) -> bool {
    form.coeff_n.abs() <= 3
        && form.constant.abs() <= 3
        && form.coeff_k.iter().all(|c| c.abs() <= 3)
}

/// One random balanced term with finite support, or `None` when the
/// draw cannot be balanced within the coefficient bounds.
fn random_balanced_term(rng: &mut StdRng) -> Option<BalancedTerm> {
    let arity = rng.gen_range(1..=2);
    let vars: Vec<String> = ["j", "k"][2 - arity..].iter().map(|s| s.to_string()).collect();
    let count = rng.gen_range(2..=6);
    let mut factors: Vec<(LinearForm, Sign)> = (0..count - 1)
        .map(|_| (random_form(rng, arity), random_sign(rng)))
        .collect();
    let residual = check_sum(&factors, arity);
    if residual.is_zero() {
        if factors.is_empty() {
            return None;
        }
    } else {
        let sign = random_sign(rng);
        let form = residual.scale(-sign.value());
        if !in_bounds(&form) {
            return None;
        }
        factors.push((form, sign));
    }
    let bases = [rat_i(1), rat_i(2), rat_i(-1), Rat::new(1.into(), 2.into())];
    let c0 = bases[rng.gen_range(0..bases.len())].clone();
    let c: Vec<Rat> = (0..arity)
        .map(|_| bases[rng.gen_range(0..bases.len())].clone())
        .collect();
    let t = BalancedTerm::new(c0, c, factors, vars).ok()?;
    check_finiteness(&t).then_some(t)
}

fn check_sum(factors: &[(LinearForm, Sign)], arity: usize) -> LinearForm {
    factors.iter().fold(LinearForm::zero(arity), |acc, (a, s)| {
        acc.add(&a.scale(s.value()))
    })
}

#[test]
fn acceptance_4_binomial_form_property_suite() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE97);
    let mut cache = FactorialCache::new();
    let mut accepted = 0;
    let mut support_points = 0u64;
    let mut draws = 0;
    while accepted < 200 {
        draws += 1;
        assert!(draws < 100_000, "generator starved");
        let Some(t) = random_balanced_term(&mut rng) else {
            continue;
        };
        accepted += 1;

        let bf = to_binomial_form(&t).expect("balanced terms convert");
        for n in 0..=10 {
            let slice = enumerate_support(&t, n).expect("finite support");
            for k in &slice.points {
                let direct = eval_term(&t, n, k, &mut cache).unwrap();
                let via_binomials = eval_binomial_form(&bf, n, k, &mut cache).unwrap();
                assert_eq!(direct, via_binomials, "value preserved at n={n}, k={k:?}");
                support_points += 1;
            }
        }

        // An unbalanced mutant: bump one coefficient of one factor.
        let mut factors = t.factors().to_vec();
        let idx = rng.gen_range(0..factors.len());
        match rng.gen_range(0..2 + factors[idx].0.coeff_k.len()) {
            0 => factors[idx].0.coeff_n += 1,
            1 => factors[idx].0.constant += 1,
            slot => factors[idx].0.coeff_k[slot - 2] += 1,
        }
        let mutant = BalancedTerm::new(
            t.c0().clone(),
            t.c().to_vec(),
            factors,
            t.vars().to_vec(),
        )
        .unwrap();
        assert!(!check_balance(&mutant).balanced);
        assert!(to_binomial_form(&mutant).is_err(), "mutant rejected");
    }
    assert!(support_points > 0, "the suite exercised real support points");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 4 took {elapsed:?}");
    println!("ACCEPTANCE 4: PASS");
}

#[test]
fn acceptance_5_lcm_table() {
    let start = Instant::now();
    let (report, code, _) = run_cli(&["lcm-table", "--nmax", "500"]);
    assert_eq!(code, 0);
    let rows = report["lcm_table"].as_array().unwrap();
    assert_eq!(rows.len(), 500);
    assert_eq!(rows[3]["lcm"].as_str().unwrap(), "12");

    let gcd = |mut a: Int, mut b: Int| {
        while b != Int::from(0) {
            let r = &a % &b;
            a = b;
            b = r;
        }
        a
    };
    let mut full = Int::from(1);
    for row in rows {
        let n = row["n"].as_u64().unwrap();
        let value: Int = row["lcm"].as_str().unwrap().parse().unwrap();
        let ratio = row["log_ratio"].as_f64().unwrap();
        if (20..=500).contains(&n) {
            assert!(ratio < 1.1, "log L_{n} / {n} = {ratio}");
        }
        let g = gcd(full.clone(), Int::from(n));
        full = full / g * Int::from(n);
        assert_eq!(&full % &value, Int::from(0), "L_{n} divides lcm(1..{n})");
    }

    finish(start, 30, 5);
}

#[test]
fn acceptance_6_asymptotics_calibration() {
    let start = Instant::now();
    let lambdas = [Rat::new(1.into(), 2.into()), rat_i(2), rat_i(10)];
    let thetas = [(-3i64, 2i64), (0, 1), (5, 2)];
    for lambda in &lambdas {
        for &(tn, td) in &thetas {
            let s = power_sequence(lambda, tn, td, 500);
            let growth = fit_growth(&s, 4).unwrap();
            let expected = rat_to_f64(lambda).abs();
            assert!(
                (growth.estimate - expected).abs() < 1e-8,
                "growth for lambda {lambda}, theta {tn}/{td}: {}",
                growth.estimate
            );
            let theta = fit_exponent(&s, growth.estimate, 4).unwrap();
            let expected_theta = tn as f64 / td as f64;
            assert!(
                (theta.estimate - expected_theta).abs() < 1e-4,
                "theta for lambda {lambda}, theta {tn}/{td}: {}",
                theta.estimate
            );
        }
    }

    let s = extend_sequence(&counterexample(), &[rat_i(0), rat_i(1)], 2000).unwrap();
    let growth = fit_growth(&s, 4).unwrap();
    let lam = (7.0 + rat_to_f64(&sqrt_rat(33))) / 4.0;
    assert!((growth.estimate - lam).abs() < 1e-6);
    let theta = fit_exponent(&s, growth.estimate, 4).unwrap();
    let reference = 5.0 * rat_to_f64(&sqrt_rat(33)) / 22.0;
    assert!(
        (theta.estimate - reference).abs() < 1e-2,
        "theta {} vs 5 sqrt(33)/22 = {reference}",
        theta.estimate
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "criterion 6 took {elapsed:?}");
    println!("ACCEPTANCE 6: PASS");
}

#[test]
fn acceptance_7_certificates_contrast() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();

    // Counterexample side: den(a_5) = 7, denominator-lcm growth, alarm.
    let s = extend_sequence(&counterexample(), &[rat_i(0), rat_i(1)], 200).unwrap();
    assert_eq!(s.get(5).unwrap(), &Rat::new(9593.into(), 7.into()));
    let lcm_at = |end: u64| {
        let gcd = |mut a: Int, mut b: Int| {
            while b != Int::from(0) {
                let r = &a % &b;
                a = b;
                b = r;
            }
            a
        };
        let mut acc = Int::from(1);
        for n in 0..=end {
            let d = s.get(n).unwrap().denom().clone();
            let g = gcd(acc.clone(), d.clone());
            acc = acc / g * d;
        }
        acc
    };
    let (l50, l100, l200) = (lcm_at(50), lcm_at(100), lcm_at(200));
    assert!(l50 < l100 && l100 < l200, "denominator lcm grows through n = 200");

    let rec_path = write_file(&dir, "cx.rec", COUNTEREXAMPLE_REC);
    let (report, code, _) = run_cli(&["obstruct", &rec_path, "--initial", "0,1", "--nmax", "200"]);
    assert_eq!(code, 10);
    assert_eq!(report["sequence"]["prefix"][5].as_str().unwrap(), "9593/7");
    let denom = &report["certificates"]["denominator"];
    assert!(denom["alarm"].as_bool().unwrap(), "denominator alarm at n = 200");
    let curve: Vec<f64> = denom["curve"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["value"].as_f64().unwrap())
        .collect();
    // Increasing in the sense the alarm tests: the means of six equal
    // blocks of the tail half rise strictly.
    let tail = &curve[curve.len() / 2..];
    let block = tail.len() / 6;
    let means: Vec<f64> = (0..6)
        .map(|b| tail[b * block..(b + 1) * block].iter().sum::<f64>() / block as f64)
        .collect();
    assert!(
        means.windows(2).all(|w| w[1] > w[0]),
        "block means rise: {means:?}"
    );
    assert!(curve.last().unwrap() > curve.first().unwrap());
    assert_eq!(
        report["certificates"]["verdict"].as_str().unwrap(),
        "DenominatorGrowthAlarm"
    );

    // Apery side: flat zero curve, no alarm.
    let apery = parse_term(APERY_TERM).unwrap();
    let apery_seq = eval_sequence(&apery, 120).unwrap();
    let seq_path = write_file(&dir, "apery.seq", &write_sequence(&apery_seq));
    let (report, code, _) = run_cli(&["certify", &seq_path]);
    assert_eq!(code, 0);
    let denom = &report["certificates"]["denominator"];
    assert!(!denom["alarm"].as_bool().unwrap());
    assert_eq!(denom["bound"].as_f64().unwrap(), 1.0);
    assert!(denom["curve"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["value"].as_f64().unwrap() == 1.0));
    assert_eq!(
        report["certificates"]["verdict"].as_str().unwrap(),
        "ConsistentWithGFunction"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 7 took {elapsed:?}");
    println!("ACCEPTANCE 7: PASS");
}

#[test]
fn acceptance_8_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let term_path = write_file(&dir, "pow2.term", POW2_TERM);
    let apery_path = write_file(&dir, "apery.term", APERY_TERM);
    let rec_path = write_file(&dir, "cx.rec", COUNTEREXAMPLE_REC);
    let seq = extend_sequence(&counterexample(), &[rat_i(0), rat_i(1)], 200).unwrap();
    let seq_path = write_file(&dir, "cx.seq", &write_sequence(&seq));

    let strip_timing = |raw: &str| -> String {
        raw.lines()
            .filter(|line| !line.contains("\"timing_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    };

    let commands: Vec<Vec<&str>> = vec![
        vec!["analyze-term", &term_path, "--nmax", "60"],
        vec!["analyze-term", &apery_path, "--nmax", "40"],
        vec!["obstruct", &rec_path, "--initial", "0,1", "--nmax", "200"],
        vec!["fit", &seq_path, "--depth", "3"],
        vec!["certify", &seq_path],
        vec!["lcm-table", "--nmax", "60"],
    ];
    for args in &commands {
        let (_, code_a, raw_a) = run_cli(args);
        let (_, code_b, raw_b) = run_cli(args);
        assert_eq!(code_a, code_b, "stable exit for {args:?}");
        assert!(!raw_a.is_empty());
        assert_eq!(
            strip_timing(&raw_a),
            strip_timing(&raw_b),
            "byte-identical JSON modulo timing for {args:?}"
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 8 took {elapsed:?}");
    println!("ACCEPTANCE 8: PASS");
}
