use super::{all_systems, CliError, RunConfig};
use crate::cli::report::{Check, Report};
use crate::finhecke::{compute_fpoly, coset_count, tstar_square_check, ConvolutionOracle, FinHecke};
use crate::gfp::{is_prime, prime_power, PrimeField};
use crate::heckealg::{grade, low_cases, Coefficients, ConcreteCoefficients, FreeCoefficients, HeckeAlgebra};
use crate::modrep::{build_coefficient_system, CoefficientSystem, RepChoice};
use crate::residue::oracle_product;
use crate::twisted::{build_psi, iso_e_g, iso_zeta, iwahori_compare, IsoReport};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cases,
    Oracle,
    Iso,
    Iwahori,
    Assoc,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Cases => "cases",
            Suite::Oracle => "oracle",
            Suite::Iso => "iso",
            Suite::Iwahori => "iwahori",
            Suite::Assoc => "assoc",
            Suite::All => "all",
        }
    }
}

const ANCHOR_CASES: &str = "length-dropping products of length-one symbols";
const ANCHOR_CONV: &str = "finite Hecke algebra as a convolution algebra";
const ANCHOR_COSETS: &str = "size of the big double coset";
const ANCHOR_TSTAR: &str = "square of the distinguished intertwiner";
const ANCHOR_FPOLY: &str = "characteristic polynomial when l divides q-1";
const ANCHOR_ISO: &str = "Hecke algebra as a twisted tensor product over the lattice";
const ANCHOR_ZETA: &str = "Hecke algebra as a twisted tensor product with the finite Hecke algebra";
const ANCHOR_ASSOC: &str = "associativity of the multiplication rules";
const ANCHOR_IWAHORI: &str = "scalar Iwahori-Hecke algebra";

fn rep_label(c: RepChoice) -> &'static str {
    match c {
        RepChoice::Rho => "rho",
        RepChoice::ProjectiveCover => "P+P*",
    }
}

fn inputs(s: &CoefficientSystem) -> Value {
    let c = &s.config;
    json!({"k": c.k, "q": c.q, "l": c.ell, "V": rep_label(c.choice), "cuspidal": c.cuspidal})
}

fn primes_dividing(n: u64) -> Vec<u32> {
    (2..=n as u32).filter(|&p| is_prime(p) && n % p as u64 == 0).collect()
}

fn characteristic(q: u32) -> u32 {
    prime_power(q).map(|(p, _)| p).unwrap_or(q)
}

impl RunConfig {
    fn choices(&self) -> Vec<RepChoice> {
        match self.rep {
            Some(_) => vec![self.choice()],
            None => vec![RepChoice::Rho, RepChoice::ProjectiveCover],
        }
    }

    /// The systems for one `(k, q, ℓ)`: a single cuspidal if one was chosen,
    /// otherwise every cuspidal; `all_cuspidals = false` keeps only index 0.
    fn systems(&self, k: usize, q: u32, ell: u32, all_cuspidals: bool) -> Result<Vec<Arc<CoefficientSystem>>, CliError> {
        let mut out = Vec::new();
        for choice in self.choices() {
            match self.cuspidal {
                Some(i) => {
                    let mut c = self.system_config(k, q, ell);
                    c.cuspidal = i;
                    c.choice = choice;
                    out.push(Arc::new(build_coefficient_system(&c)?));
                }
                None if all_cuspidals => out.extend(all_systems(k, q, ell, choice)?.into_iter().map(Arc::new)),
                None => {
                    let mut c = self.system_config(k, q, ell);
                    c.choice = choice;
                    out.push(Arc::new(build_coefficient_system(&c)?));
                }
            }
        }
        Ok(out)
    }

    /// `(k, q, ℓ)` triples: the explicit one, or `default` filtered by the
    /// parameters that were given.
    fn triples(&self, default: &[(usize, u32, u32)]) -> Vec<(usize, u32, u32)> {
        default
            .iter()
            .copied()
            .filter(|&(k, q, l)| self.k.is_none_or(|v| v == k) && self.q.is_none_or(|v| v == q) && self.ell.is_none_or(|v| v == l))
            .collect()
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig, samples: Option<usize>) -> Result<Report, CliError> {
    let mut report = Report::new(suite.name());
    match suite {
        Suite::Cases => report.extend(cases(cfg)?),
        Suite::Oracle => report.extend(finite(cfg, samples.unwrap_or(200))?),
        Suite::Iso => report.extend(iso(cfg, samples.unwrap_or(1000))?),
        Suite::Iwahori => report.extend(iwahori(cfg)?),
        Suite::Assoc => report.extend(assoc(cfg, samples.unwrap_or(1000))?),
        Suite::All => {
            for s in [Suite::Cases, Suite::Oracle, Suite::Iso, Suite::Iwahori, Suite::Assoc] {
                report.extend(run_suite(s, cfg, samples)?);
            }
        }
    }
    if report.checks.is_empty() {
        return Err(CliError::Config(format!("no configuration of suite {} matches the given parameters", suite.name())));
    }
    Ok(report)
}

fn explicit_or(cfg: &RunConfig, default: Vec<(usize, u32, u32)>) -> Vec<(usize, u32, u32)> {
    match (cfg.q, cfg.ell) {
        (Some(q), Some(l)) => vec![(cfg.k.unwrap_or(1), q, l)],
        _ => cfg.triples(&default),
    }
}

fn cases(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut report = Report::new("cases");
    let mut default = Vec::new();
    for q in [3u32, 4, 5] {
        for l in primes_dividing((q as u64).pow(2) - 1) {
            if l != characteristic(q) {
                default.push((1, q, l));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (k, q, l) in explicit_or(cfg, default) {
        for s in cfg.systems(k, q, l, true)? {
            let alg = HeckeAlgebra::new(ConcreteCoefficients::new(s.clone()));
            let tau = s.tau;
            for case in low_cases() {
                let f = alg.coeffs.sample(&mut rng, grade(&case.eta));
                let g = alg.coeffs.sample(&mut rng, grade(&case.delta));
                let fg = alg.coeffs.compose(&f, &g);
                let product = alg.mul(&alg.symbol(case.eta, 0, &f).unwrap(), &alg.symbol(case.delta, 0, &g).unwrap());
                let expected = alg.add(
                    &alg.scale(&alg.symbol(case.tau_term, 0, &fg).unwrap(), tau),
                    &alg.symbol(case.tstar_term, 1, &fg).unwrap(),
                );
                let formula = product == expected;
                let (oracle_ok, detail) = match oracle_product(&case.eta, &case.delta, &f, &g, &s) {
                    Ok(o) => (o.terms == product.terms, format!("oracle support {:?}", o.admissible.keys().map(|e| e.to_string()).collect::<Vec<_>>())),
                    Err(e) => (false, e.to_string()),
                };
                let detail = match (formula, oracle_ok) {
                    (true, true) => detail,
                    (false, _) => format!("engine gives {} instead of the closed form", alg.render(&product)),
                    (true, false) => format!("oracle disagrees with the engine; {detail}"),
                };
                report.push(Check::new(format!("case {}", case.name), ANCHOR_CASES, inputs(&s), formula && oracle_ok, detail));
            }
        }
    }
    Ok(report)
}

fn finite(cfg: &RunConfig, samples: usize) -> Result<Report, CliError> {
    let mut report = Report::new("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut conv_default = Vec::new();
    for q in [2u32, 3, 4, 5] {
        for l in [3u32, 5, 7] {
            if l != characteristic(q) {
                conv_default.push((1, q, l));
            }
        }
    }
    conv_default.extend([(2, 2, 3), (2, 2, 5), (2, 2, 7)]);
    for (k, q, l) in explicit_or(cfg, conv_default) {
        let mut systems = cfg.systems(k, q, l, false)?;
        if k == 2 && cfg.rep.is_none() {
            systems.retain(|s| s.config.choice == RepChoice::Rho);
        }
        for s in systems {
            let h = FinHecke::new(s.clone());
            let (ok, detail) = match ConvolutionOracle::new(s.clone()) {
                Err(e) => (false, e.to_string()),
                Ok(oracle) => {
                    let mut first = None;
                    for trial in 0..samples {
                        let a = h.random(&mut rng);
                        let b = h.random(&mut rng);
                        let agrees = match oracle.convolve(&a, &b, cfg.seed ^ trial as u64) {
                            Ok(c) => c == h.mul(&a, &b),
                            Err(e) => {
                                first.get_or_insert(format!("pair {trial}: {e}"));
                                false
                            }
                        };
                        if !agrees {
                            first.get_or_insert(format!("pair {trial} differs"));
                        }
                    }
                    match first {
                        None => (true, format!("{samples} pairs agree")),
                        Some(f) => (false, f),
                    }
                }
            };
            report.push(Check::new("convolution", ANCHOR_CONV, inputs(&s), ok, detail));
        }
    }

    for (k, q, _) in explicit_or(cfg, vec![(1, 2, 0), (1, 3, 0), (1, 4, 0), (1, 5, 0), (2, 2, 0)]) {
        let expected = (q as usize).pow((k * k) as u32);
        let (ok, detail) = match coset_count(k, q) {
            Ok(n) => (n == expected, format!("{n} cosets, expected {expected}")),
            Err(e) => (false, e.to_string()),
        };
        report.push(Check::new("coset count", ANCHOR_COSETS, json!({"k": k, "q": q}), ok, detail));
    }

    let mut sq_default = Vec::new();
    for k in [1usize, 2] {
        for q in [2u32, 3, 4] {
            for l in primes_dividing(q as u64 - 1) {
                if l != characteristic(q) {
                    sq_default.push((k, q, l));
                }
            }
        }
    }
    for (k, q, l) in explicit_or(cfg, sq_default) {
        let inputs = json!({"k": k, "q": q, "l": l});
        match tstar_square_check(k, q, l) {
            Ok(r) if (q - 1) % l == 0 => report.push(Check::new("T* squared", ANCHOR_TSTAR, inputs, r.is_zero, format!("support of the square: {}", r.support))),
            Ok(r) => report.push(Check::info("T* squared", ANCHOR_TSTAR, inputs, format!("l does not divide q-1; square is {:?} times T*", r.multiple_of_tstar))),
            Err(e) => report.push(Check::new("T* squared", ANCHOR_TSTAR, inputs, false, e.to_string())),
        }
    }
    if cfg.q.is_none() {
        let witness = tstar_square_check(1, 4, 5).map_err(|e| CliError::Computation(e.to_string()))?;
        let detail = match witness.multiple_of_tstar {
            Some(c) if c != 0 => format!("(T*)^2 = {c}·T*, so T* is not nilpotent"),
            other => format!("square is {other:?} times T*"),
        };
        report.push(Check::info("non-nilpotency witness", ANCHOR_TSTAR, json!({"k": 1, "q": 4, "l": 5}), detail));
    }

    let mut branch_default = Vec::new();
    for q in [3u32, 4, 5] {
        for l in primes_dividing(q as u64 - 1) {
            branch_default.push((1, q, l));
        }
    }
    let mut seen = (false, false);
    for (k, q, l) in explicit_or(cfg, branch_default) {
        if (q - 1) % l != 0 {
            continue;
        }
        for s in cfg.systems(k, q, l, true)? {
            let (ok, detail) = match compute_fpoly(&s) {
                Ok(fp) => {
                    let nonzero = !s.tstar.is_zero();
                    let expected: &[u32] = if nonzero { &[0, 0, 1] } else { &[0, 1] };
                    if fp.coeffs == expected {
                        if nonzero {
                            seen.1 = true;
                        } else {
                            seen.0 = true;
                        }
                    }
                    (fp.coeffs == expected, format!("F = {fp}, T* {} on V", if nonzero { "nonzero" } else { "zero" }))
                }
                Err(e) => (false, e.to_string()),
            };
            report.push(Check::new("characteristic polynomial branch", ANCHOR_FPOLY, inputs(&s), ok, detail));
        }
    }
    if cfg.q.is_none() && cfg.ell.is_none() && cfg.rep.is_none() {
        report.push(Check::new(
            "both branches exercised",
            ANCHOR_FPOLY,
            json!({}),
            seen.0 && seen.1,
            format!("F = T seen: {}, F = T^2 seen: {}", seen.0, seen.1),
        ));
    }
    Ok(report)
}

fn iso_check(name: &str, anchor: &str, s: &CoefficientSystem, r: &IsoReport) -> Check {
    let detail = format!(
        "{} round trips ({} failed), {} products ({} failed), {} twisting-axiom failures{}",
        r.round_trips,
        r.round_trip_failures,
        r.products,
        r.product_failures,
        r.twisting_axiom_failures,
        r.first_failure.as_deref().map(|f| format!("; first failure: {f}")).unwrap_or_default()
    );
    Check::new(name, anchor, inputs(s), r.passed(), detail)
}

fn iso(cfg: &RunConfig, pairs: usize) -> Result<Report, CliError> {
    let mut report = Report::new("iso");
    let default: Vec<(usize, u32, u32, RepChoice)> = vec![
        (1, 4, 3, RepChoice::ProjectiveCover),
        (1, 4, 3, RepChoice::Rho),
        (1, 4, 5, RepChoice::Rho),
        (1, 3, 2, RepChoice::Rho),
        (1, 5, 3, RepChoice::ProjectiveCover),
    ];
    let mut systems = Vec::new();
    if cfg.q.is_some() && cfg.ell.is_some() {
        let (k, q, l) = cfg.require()?;
        systems.extend(cfg.systems(k, q, l, false)?);
    } else {
        for (k, q, l, c) in default {
            if cfg.triples(&[(k, q, l)]).is_empty() || cfg.rep.is_some_and(|_| cfg.choice() != c) {
                continue;
            }
            let mut sc = cfg.system_config(k, q, l);
            sc.choice = c;
            systems.push(Arc::new(build_coefficient_system(&sc)?));
        }
    }
    for s in systems {
        let alg = HeckeAlgebra::new(ConcreteCoefficients::new(s.clone()));
        let fp = compute_fpoly(&s).map_err(|e| CliError::Computation(e.to_string()))?;
        let psi = build_psi(s.tau, &fp).map_err(|e| CliError::Computation(e.to_string()))?;
        let r = iso_e_g(&alg, &psi, 3, pairs, cfg.seed);
        report.push(iso_check("lattice twisted tensor product", ANCHOR_ISO, &s, &r));
        let r = iso_zeta(&alg, &psi.ring, 3, pairs, cfg.seed);
        report.push(iso_check("finite Hecke twisted tensor product", ANCHOR_ZETA, &s, &r));
    }
    Ok(report)
}

fn associativity<C: Coefficients>(alg: &HeckeAlgebra<C>, triples: usize, seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..triples {
        let a = alg.random_element(&mut rng, 6, 2);
        let b = alg.random_element(&mut rng, 6, 2);
        let c = alg.random_element(&mut rng, 6, 2);
        if alg.mul(&alg.mul(&a, &b), &c) != alg.mul(&a, &alg.mul(&b, &c)) {
            return (false, format!("triple {i}: {} | {} | {}", alg.render(&a), alg.render(&b), alg.render(&c)));
        }
    }
    (true, format!("{triples} triples"))
}

fn assoc(cfg: &RunConfig, triples: usize) -> Result<Report, CliError> {
    let mut report = Report::new("assoc");
    if cfg.q.is_none() {
        let field = PrimeField::new(5).expect("5 is prime");
        let free = HeckeAlgebra::new(FreeCoefficients::new(field, 3, &[("f", 1), ("g", 1), ("h", 0)], None));
        let (ok, detail) = associativity(&free, triples, cfg.seed);
        report.push(Check::new("free coefficients", ANCHOR_ASSOC, json!({"l": 5, "tau": 3, "generators": ["f", "g", "h"]}), ok, detail));
    }
    let default = vec![(1, 4, 3), (1, 5, 3)];
    let explicit = cfg.q.is_some() && cfg.ell.is_some();
    for (k, q, l) in explicit_or(cfg, default.clone()) {
        let mut sc = cfg.system_config(k, q, l);
        if !explicit && cfg.rep.is_none() {
            sc.choice = if (k, q, l) == default[0] { RepChoice::ProjectiveCover } else { RepChoice::Rho };
        }
        let s = Arc::new(build_coefficient_system(&sc)?);
        let alg = HeckeAlgebra::new(ConcreteCoefficients::new(s.clone()));
        let (ok, detail) = associativity(&alg, triples, cfg.seed);
        report.push(Check::new("concrete coefficients", ANCHOR_ASSOC, inputs(&s), ok, detail));
    }
    Ok(report)
}

fn iwahori(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut report = Report::new("iwahori");
    for (_, q, l) in explicit_or(cfg, vec![(1, 4, 3), (1, 3, 2)]) {
        let inputs = json!({"q": q, "l": l});
        match iwahori_compare(q, l, 2) {
            Ok(models) => {
                for m in models {
                    let detail = format!(
                        "{:?}: {} products, {} mismatches{}",
                        m.model,
                        m.products,
                        m.mismatches,
                        m.first_mismatch.as_deref().map(|f| format!("; first: {f}")).unwrap_or_default()
                    );
                    report.push(Check::new("structure constants", ANCHOR_IWAHORI, inputs.clone(), m.passed(), detail));
                }
            }
            Err(e) => return Err(CliError::Config(e.to_string())),
        }
    }
    Ok(report)
}
