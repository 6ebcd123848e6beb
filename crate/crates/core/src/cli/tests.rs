use super::*;

fn product(l: u32, q: u32, lhs: &str, rhs: &str) -> String {
    let field = PrimeField::new(l).unwrap();
    let tau = field.reduce(q as i64);
    multiply_symbols(&parse_symbol(lhs).unwrap(), &parse_symbol(rhs).unwrap(), field, tau)
}

#[test]
fn quadratic_relation_renders_with_tau() {
    assert_eq!(product(3, 4, "[w]", "[w]"), "[1] + [w]^1");
    assert_eq!(product(5, 4, "[w]", "[w]"), "4·[1] + [w]^1");
    assert_eq!(product(7, 4, "[w]", "[w]"), "4·[1] + [w]^1");
    assert_eq!(product(7, 4, "[w]_f", "[w]_g"), "4·[1]_{fg} + [w]^1_{fg}");
}

#[test]
fn identity_is_neutral() {
    assert_eq!(product(5, 4, "[1]", "[t^2 w' w]^1"), "[t^2·w'·w]^1");
    assert_eq!(product(5, 4, "[t w]", "[1]"), "[t·w]");
}

#[test]
fn length_two_product() {
    // [t²w'w] = [t²w'][w], so the product with [w] is [t²w'](τ[1] + [w]^1)
    let rendered = product(7, 4, "[t^2 w' w]", "[w]");
    let mut terms: Vec<&str> = rendered.split(" + ").collect();
    terms.sort();
    assert_eq!(terms, vec!["4·[t^2·w']", "[t^2·w'·w]^1"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(["hecke", "fpoly", "-l", "3", "-q", "4", "-k", "1", "--rep", "trivial"]), EXIT_PASS);
    assert_eq!(run(["hecke", "fpoly", "-l", "4", "-q", "5"]), EXIT_CONFIG);
    assert_eq!(run(["hecke", "fpoly", "-l", "2", "-q", "4"]), EXIT_CONFIG);
    assert_eq!(run(["hecke", "fpoly", "-l", "3", "-q", "4", "-k", "3"]), EXIT_CONFIG);
    assert_eq!(run(["hecke", "mul", "[w", "[w]", "-q", "4", "-l", "5"]), EXIT_CONFIG);
    assert_eq!(run(["hecke", "verify", "--suite", "nonsense"]), EXIT_CONFIG);
    assert_eq!(run(["hecke", "verify", "--suite", "iwahori", "-q", "4", "-l", "7"]), EXIT_CONFIG);
    assert_eq!(run(["hecke", "verify", "--suite", "iwahori", "-q", "4", "-l", "3"]), EXIT_PASS);
}

#[test]
fn fpoly_examples() {
    let cfg = |l: u32| SystemConfig::new(1, 4, l, 0, RepChoice::Rho);
    assert_eq!(fpoly_for(&cfg(3)).unwrap().to_string(), "T");
    assert_eq!(fpoly_for(&cfg(5)).unwrap().to_string(), "T^2 + 1");
}

#[test]
fn cases_suite_passes_for_q3() {
    let cli = Cli::try_parse_from(["hecke", "verify", "--suite", "cases", "-k", "1", "-q", "3", "-l", "2"]).unwrap();
    let Command::Verify { suite, config, samples } = cli.command else { panic!() };
    let report = run_suite(suite, &config, samples).unwrap();
    assert_eq!(report.checks.len(), 16);
    assert!(report.passed(), "{}", report.to_text());
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["suite"], "cases");
    for key in ["name", "paper_anchor", "inputs", "status", "detail"] {
        assert!(v["checks"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn reports_are_deterministic() {
    let cli = Cli::try_parse_from(["hecke", "verify", "--suite", "assoc", "-q", "4", "-l", "3", "--seed", "7"]).unwrap();
    let Command::Verify { suite, config, .. } = cli.command else { panic!() };
    let a = run_suite(suite, &config, Some(20)).unwrap().to_json();
    let b = run_suite(suite, &config, Some(20)).unwrap().to_json();
    assert_eq!(a, b);
}
