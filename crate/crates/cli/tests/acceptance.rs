//! Acceptance suite. Each criterion prints one line; known failures are
//! reported as such and asserted to fail in the documented way.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use dprolong::arith::rational::int;
use dprolong::base_field::{BaseElem, BaseField};
use dprolong::checks::{self, CheckReport};
use dprolong::delta::DeltaRing;
use dprolong::frontend::print_poly;
use dprolong::geometry::{component_fiber_check, FiberVerdict, VarietySystem};
use dprolong::prolong::{nested_pairing_cofactor, tau, tau_power_cofactor, ProlongError};
use dprolong::transform::{kolchin_matrix, RationalMatrix};

const SEED: u64 = 20_240_601;

enum Outcome {
    Pass,
    Fail(String),
    KnownFail(String),
}

fn reports(list: Vec<CheckReport>) -> Outcome {
    let failed: Vec<String> = list.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
    if failed.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(failed.join("\n"))
    }
}

fn with_pins(list: Vec<CheckReport>, pins: Result<(), String>) -> Outcome {
    match (reports(list), pins) {
        (Outcome::Pass, Err(e)) => Outcome::Fail(e),
        (Outcome::Fail(a), Err(e)) => Outcome::Fail(format!("{a}\n{e}")),
        (other, Ok(())) => other,
        (Outcome::KnownFail(_), Err(e)) => Outcome::Fail(e),
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn q(n: i64) -> BaseElem {
    BaseElem::rational(int(n))
}

fn ring_q(m: usize) -> DeltaRing {
    DeltaRing::new(Arc::new(BaseField::rationals(m + 1)), 1)
}

fn matrix(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::new(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
}

fn cofactor_pins() -> Result<(), String> {
    let r = ring_q(1);
    let names: Vec<String> = Vec::new();
    let p = tau_power_cofactor(&r, &r.x(0), 2).map_err(|e| e.to_string())?;
    ensure(print_poly(&p, &names) == "2*x1_3", || format!("cofactor for x, k = 2 is {}", print_poly(&p, &names)))?;
    match nested_pairing_cofactor(&r, &r.x(0), 2) {
        Err(ProlongError::DivisionFails { .. }) => Ok(()),
        other => Err(format!("nested pairing division should fail, got {other:?}")),
    }
}

fn radical() -> Outcome {
    let valid = checks::radical_valid(SEED, 200);
    let general = checks::radical_general(SEED, 200);
    if !valid.passed() {
        return Outcome::Fail(valid.to_string());
    }
    if general.passed() {
        return Outcome::Fail("radical transfer over {A} unexpectedly verified every case".into());
    }
    let first = general.failures.first().cloned().unwrap_or_default();
    if !first.starts_with("case 0:") || !first.ends_with("tau(f)(a, b) = 1") {
        return Outcome::Fail(format!("unexpected first witness: {first}"));
    }
    Outcome::KnownFail(format!(
        "{} of {} cases give TauNonzero; A = {{x^2}}, a = 0, b = 1 has tau(x)(0, 1) = 1",
        general.failures.len(),
        general.cases
    ))
}

fn component_pin() -> Result<(), String> {
    let r = ring_q(1);
    let x = r.x(0);
    let x1 = &x - &r.rational(int(1));
    let v = VarietySystem::new(vec![&x * &x1]).unwrap();
    let comps = vec![VarietySystem::new(vec![x.clone()]).unwrap(), VarietySystem::new(vec![x1.clone()]).unwrap()];
    let samples = vec![vec![q(0)], vec![q(3)], vec![q(-2)]];
    let verdict = component_fiber_check(&r, &v, &comps, 0, &[None, Some(x1)], &[q(0)], &samples);
    ensure(verdict == Ok(FiberVerdict::Agree { samples_checked: 3 }), || format!("V(x(x-1)) at 0: {verdict:?}"))
}

fn kolchin_pins() -> Result<(), String> {
    let cases = [
        (2, 1, matrix(&[&[1, 2], &[3, 4]]), RationalMatrix::identity(3), matrix(&[&[1, 0, 2], &[0, 1, 0], &[3, 0, 4]])),
        (
            2,
            0,
            matrix(&[&[5]]),
            matrix(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            matrix(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 5]]),
        ),
        (
            3,
            1,
            matrix(&[&[1, -1], &[2, 1]]),
            RationalMatrix::identity(4),
            matrix(&[&[1, 0, 0, -1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[2, 0, 0, 1]]),
        ),
    ];
    for (i, (m, r, mp, n, expected)) in cases.into_iter().enumerate() {
        let got = kolchin_matrix(&mp, r, m, &n).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("kolchin case {}: {got:?}", i + 1))?;
    }
    Ok(())
}

fn golden() -> Result<(), String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = std::fs::read_to_string(dir.join("cases.txt")).map_err(|e| e.to_string())?;
    let mut count = 0;
    for line in cases.lines().filter(|l| !l.trim().is_empty()) {
        let mut words = line.split_whitespace();
        let name = words.next().unwrap_or_default();
        let input = dir.join(words.next().unwrap_or_default());
        let out = Command::new(env!("CARGO_BIN_EXE_dprolong"))
            .arg("--input")
            .arg(&input)
            .args(words)
            .output()
            .map_err(|e| e.to_string())?;
        let expected = std::fs::read(dir.join(format!("{name}.out"))).map_err(|e| e.to_string())?;
        ensure(out.status.success() && out.stdout == expected, || format!("golden {name} differs"))?;
        count += 1;
    }
    ensure(count == 10, || format!("{count} golden files, expected 10"))
}

fn frontend_pins() -> Result<(), String> {
    let r = ring_q(0);
    let printed = print_poly(&tau(&r, &r.x(0).pow(2)), &[]);
    ensure(printed == "2*x1*y1", || format!("tau(x^2) printed as {printed}"))?;
    golden()
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("first-order identity", Box::new(|| reports(vec![checks::first_order_identity(SEED, 200)]))),
        ("second-order identity", Box::new(|| reports(vec![checks::second_order_identity(SEED, 200)]))),
        ("tau is a derivation commuting with delta", Box::new(|| reports(vec![checks::tau_derivation(SEED, 200)]))),
        ("nabla evaluation, k = 1..3", Box::new(|| reports(vec![checks::nabla_identity(SEED, 200, &[1, 2, 3])]))),
        (
            "cofactor division, k = 1..3",
            Box::new(|| with_pins(vec![checks::power_cofactor(SEED, 200, &[1, 2, 3])], cofactor_pins())),
        ),
        ("extension of D", Box::new(|| reports(vec![checks::extension(SEED, 200)]))),
        ("radical transfer", Box::new(radical)),
        (
            "geometry: section, torsor, tangent, components",
            Box::new(|| {
                with_pins(
                    vec![
                        checks::section(SEED, 200),
                        checks::torsor(SEED, 200),
                        checks::tangent_coincidence(SEED, 200),
                        checks::component_family(SEED, 200),
                    ],
                    component_pin(),
                )
            }),
        ),
        (
            "transforms: commute, rewrite, kolchin",
            Box::new(|| with_pins(vec![checks::commute(SEED, 100), checks::rewrite_roundtrip(SEED, 200)], kolchin_pins())),
        ),
        ("frontend round trip and golden files", Box::new(|| with_pins(vec![checks::print_roundtrip(SEED, 500)], frontend_pins()))),
    ];

    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Outcome::Pass => println!("criterion {:>2} PASS  {name} ({secs:.1}s)", i + 1),
            Outcome::KnownFail(why) => println!("criterion {:>2} FAIL (known)  {name} ({secs:.1}s): {why}", i + 1),
            Outcome::Fail(why) => {
                unexpected += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s)\n{why}", i + 1);
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
