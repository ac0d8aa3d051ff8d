//! The acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails. Runs under `cargo test` (custom harness).

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tame_core::artinschreier::{
    coker_routes, homotopy_check, purity_check, purity_instance, tame_cohomology_with, CokerRing, Space, DEFAULT_BOUNDS,
};
use tame_core::cech::{
    amitsur_complex, cech_o_plus, cech_p1_o, laurent_cech_with, truncated_homology, verify_homotopy, ChartCover, Window,
};
use tame_core::funcfield::{parse_place, FiniteField, PlaceValuation, Poly, RatFunc};
use tame_core::huber::HuberPairDesc;
use tame_core::kummer::sample::{build_config, random_element, standard_configs};
use tame_core::kummer::{least_field_for, vandermonde, Matrix};
use tame_core::tameness::{extend_valuation, ExtensionDesc, RamClass};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn issues(v: &[String]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        format!("; {}", v.join("; "))
    }
}

fn integrality_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut agree, mut total, mut problems) = (0, 0, Vec::new());
    for (q, gens) in standard_configs() {
        let l = gens.iter().fold(1u32, |acc, (m, _)| acc.lcm(m));
        if least_field_for(l).map(|f| f.q()) != Some(q) {
            problems.push(format!("q = {q} is not least for lcm {l}"));
        }
        let alg = build_config(q, &gens);
        for n in 1..=3 {
            for _ in 0..500 {
                let x = random_element(&alg, n, 64, 4, &mut rng);
                total += 1;
                if alg.is_integral(&x) == alg.is_integral_oracle(&x) {
                    agree += 1;
                } else if problems.len() < 3 {
                    problems.push(format!("{}: {}", alg.describe(), alg.render_tensor(&x)));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = agree == total && problems.is_empty() && secs < 120.0;
    verdict(pass, format!("{agree}/{total} agree in {secs:.1}s{}", issues(&problems)))
}

fn amitsur_exactness() -> Verdict {
    let mut configs = standard_configs();
    configs.extend([
        (9, vec![(2, "t")]),
        (3, vec![(2, "t^3")]),
        (7, vec![(6, "t + t^3")]),
        (5, vec![(4, "t^3")]),
    ]);
    let mut failures = Vec::new();
    let mut slowest = 0f64;
    let mut checked = 0;
    for (q, gens) in &configs {
        let start = Instant::now();
        let alg = build_config(*q, gens);
        let top = if alg.degree() > 4 { 3 } else { 4 };
        let c = amitsur_complex(&alg, top).unwrap();
        let h = verify_homotopy(&c);
        checked += h.checked;
        let r = truncated_homology(c.complex(), Window::default()).unwrap();
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        if !h.pass || !h.violations.is_empty() || !r.higher_vanish() || secs >= 60.0 {
            failures.push(format!("{} over GF({q}): homotopy {} dims {:?} {secs:.1}s", alg.describe(), h.pass, r.dims()));
        }
    }
    let pass = failures.is_empty() && configs.len() >= 10;
    verdict(pass, format!("{} configurations, {checked} homotopy checks, slowest {slowest:.2}s{}", configs.len(), issues(&failures)))
}

fn vandermonde_inverse() -> Verdict {
    let mut bad = Vec::new();
    let mut count = 0;
    for m in 2..=5u32 {
        let f = least_field_for(m).unwrap();
        for n in [2, 3] {
            let (v, inv) = vandermonde(&f, m, n).unwrap();
            let id = Matrix::identity(v.rows);
            count += 1;
            if v.mul(&inv, &f) != id || inv.mul(&v, &f) != id {
                bad.push(format!("m = {m}, n = {n} over GF({})", f.q()));
            }
        }
    }
    let mut rejected = 0;
    for (m, q) in [(2, 2), (2, 4), (2, 8), (3, 3), (3, 9), (4, 2), (4, 4), (5, 5), (5, 25)] {
        if vandermonde(&FiniteField::new(q).unwrap(), m, 2).is_err() {
            rejected += 1;
        } else {
            bad.push(format!("accepted m = {m} over GF({q})"));
        }
    }
    verdict(bad.is_empty(), format!("{count} inverses exact, {rejected}/9 wild cases rejected{}", issues(&bad)))
}

fn random_ratfunc(f: &FiniteField, rng: &mut ChaCha8Rng) -> RatFunc {
    let q = f.q() as u16;
    loop {
        let num = Poly::new(f, (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..q)).collect());
        let den = Poly::new(f, (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..q)).collect());
        if num.is_zero() || den.is_zero() {
            continue;
        }
        let g = RatFunc::new(num, den);
        if !g.is_constant() {
            return g;
        }
    }
}

fn laurent_acyclicity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut bad = Vec::new();
    let count = 12;
    for i in 0..count {
        let f = FiniteField::new([3, 4, 5][i % 3]).unwrap();
        let size = rng.gen_range(1..=3);
        let mut s: Vec<PlaceValuation> = Vec::new();
        while s.len() < size {
            let a = rng.gen_range(0..=f.q() as u16);
            let p = if a == f.q() as u16 { PlaceValuation::Infinite } else { PlaceValuation::at(&f, a) };
            if !s.contains(&p) {
                s.push(p);
            }
        }
        let pair = HuberPairDesc::place_set(&f, s).unwrap();
        let g = random_ratfunc(&f, &mut rng);
        let r = laurent_cech_with(&pair, &g, Window::default(), 16, i as u64).unwrap();
        if !r.exact() {
            bad.push(format!("{} with f = {}: {:?}", pair.render(), g.render(), r.report.dims()));
        }
    }
    verdict(bad.is_empty(), format!("{count} seeded (S, f) instances{}", issues(&bad)))
}

fn cech_comparison() -> Verdict {
    let mut bad = Vec::new();
    for q in [2, 3, 4, 9] {
        let a = cech_o_plus(&ChartCover::preset("spa-a1-p1", q).unwrap(), Window::default()).unwrap();
        let b = cech_p1_o(q, Window::default()).unwrap();
        let stable = a.degrees.iter().chain(&b.degrees).all(|d| d.stable);
        if a.dims() != [1, 0] || b.dims() != [1, 0] || !stable {
            bad.push(format!("q = {q}: {:?} vs {:?}", a.dims(), b.dims()));
        }
    }
    verdict(bad.is_empty(), format!("(1, 0) both ways for q in {{2, 3, 4, 9}}{}", issues(&bad)))
}

fn purity() -> Verdict {
    let mut bad = Vec::new();
    for q in [2, 3, 4] {
        let (open, ambient) = purity_instance("gm-in-a1", q).unwrap();
        let c = purity_check(&open, &ambient, &DEFAULT_BOUNDS).unwrap();
        if !c.equal || c.open.h1.dim != Some(1) || c.ambient.h1.dim != Some(1) {
            bad.push(format!("q = {q}: {:?} vs {:?}", c.open.h1.dim, c.ambient.h1.dim));
        }
    }
    for p in [2u32, 3, 5] {
        let t = tame_cohomology_with(&Space::parse("affine-line", p).unwrap(), &[8, 16, 32]).unwrap();
        let expected: Vec<usize> = [8, 16, 32].iter().map(|&n| n - n / p as usize + 1).collect();
        let got: Vec<usize> = t.h1.truncated.iter().map(|d| d.dim).collect();
        if got != expected || t.h1.stable {
            bad.push(format!("control p = {p}: {got:?}, expected {expected:?}"));
        }
    }
    verdict(bad.is_empty(), format!("H¹ = 1 on both sides for q in {{2, 3, 4}}, control grows as N - N/p + 1{}", issues(&bad)))
}

fn homotopy_invariance() -> Verdict {
    let mut bad = Vec::new();
    for q in [2, 4, 9] {
        let h = homotopy_check(q).unwrap();
        if !h.holds || h.line.h0.dim != h.point.kernel || h.line.h1.dim != Some(h.point.dim) {
            bad.push(format!("q = {q}: point ({}, {}) line ({}, {:?})", h.point.kernel, h.point.dim, h.line.h0.dim, h.line.h1.dim));
        }
    }
    verdict(bad.is_empty(), format!("equal H⁰ and H¹ for q in {{2, 4, 9}}{}", issues(&bad)))
}

/// (field, place, polynomial, expected (e, f) per branch, expected class),
/// worked out by hand from the Newton polygon and the residual polynomial.
const RAMIFICATION_TABLE: &[(u32, &str, &str, &[(u32, u32)], RamClass)] = &[
    (3, "t", "T^2 - t", &[(2, 1)], RamClass::Tame),
    (4, "t", "T^3 - t", &[(3, 1)], RamClass::Tame),
    (5, "t", "T^4 - t^3", &[(4, 1)], RamClass::Tame),
    (3, "inf", "T^2 - t", &[(2, 1)], RamClass::Tame),
    (5, "t-1", "T^2 - t", &[(1, 1), (1, 1)], RamClass::Unramified),
    (3, "t", "T^2 - 2", &[(1, 2)], RamClass::Unramified),
    (4, "t", "T^3 - t^3", &[(1, 1), (1, 1), (1, 1)], RamClass::Unramified),
    (2, "t", "T^2 + T + 1/t", &[(2, 1)], RamClass::Wild),
    (3, "t", "T^3 - T - 1/t^2", &[(3, 1)], RamClass::Wild),
    (2, "inf", "T^2 + T + t", &[(2, 1)], RamClass::Wild),
    (2, "t", "T^2 + T + t", &[(1, 1), (1, 1)], RamClass::Unramified),
    (2, "t", "T^2 + T + 1", &[(1, 2)], RamClass::Unramified),
];

fn e_formula_instances(count: usize) -> Vec<String> {
    let pairs = [(2, 3), (2, 5), (3, 4), (3, 7), (4, 5), (5, 11), (6, 7), (2, 9), (4, 9), (3, 13), (4, 13), (6, 13)];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut bad = Vec::new();
    for _ in 0..count {
        let (m, q) = pairs[rng.gen_range(0..pairs.len())];
        let f = FiniteField::new(q).unwrap();
        let qq = q as u16;
        let unit_at = |a: u16, rng: &mut ChaCha8Rng| loop {
            let u = Poly::new(&f, (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..qq)).collect());
            if !u.is_zero() && u.eval(a) != 0 {
                return u;
            }
        };
        let v: i64 = rng.gen_range(-5..=5);
        // α = π^v · unit, so v(α) = v by construction
        let (place, alpha) = if rng.gen_range(0..4) == 0 {
            let u = unit_at(0, &mut rng);
            let k = -v - u.degree().unwrap() as i64;
            (PlaceValuation::Infinite, &RatFunc::from_poly(u) * &RatFunc::monomial(&f, 1, k))
        } else {
            let a = rng.gen_range(0..qq);
            let u = unit_at(a, &mut rng);
            let pi = RatFunc::from_poly(Poly::new(&f, vec![f.neg(a), 1]));
            (PlaceValuation::at(&f, a), &RatFunc::from_poly(u) * &pi.pow(v))
        };
        let e = m as i64 / (m as i64).gcd(&v);
        let ext = ExtensionDesc::Kummer { m, alpha: alpha.clone() };
        match extend_valuation(&place, &ext) {
            Ok(r) if r.branches.iter().all(|b| b.e as i64 == e) && r.total_degree() == m => {}
            other => bad.push(format!("T^{m} - ({}) at {place} over GF({q}): expected e = {e}, got {other:?}", alpha.render())),
        }
    }
    bad
}

fn ramification_classifier() -> Verdict {
    let mut bad = Vec::new();
    for &(q, place, poly, branches, class) in RAMIFICATION_TABLE {
        let f = FiniteField::new(q).unwrap();
        let r = extend_valuation(&parse_place(&f, place).unwrap(), &ExtensionDesc::parse(&f, poly).unwrap());
        let ok = match &r {
            Ok(r) => {
                let mut got: Vec<(u32, u32)> = r.branches.iter().map(|b| (b.e, b.f)).collect();
                got.sort();
                got == branches && r.class == class
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(format!("{poly} at {place} over GF({q}): {r:?}"));
        }
    }
    let rows = RAMIFICATION_TABLE.len();
    let random_bad = e_formula_instances(200);
    let pass = bad.is_empty() && random_bad.is_empty() && rows == 12;
    verdict(
        pass,
        format!("{}/{rows} table rows, {}/200 random e = m/gcd(m, v){}{}", rows - bad.len(), 200 - random_bad.len(), issues(&bad), issues(&random_bad)),
    )
}

fn coker_consistency() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for q in [2, 3, 4, 5, 9] {
        let f = FiniteField::new(q).unwrap();
        for n in 0..=64 {
            let r = coker_routes(&CokerRing::polynomials(&f), n).unwrap();
            checked += 1;
            if r.linear_algebra != r.canonical {
                bad.push(format!("GF({q})[t], N = {n}: {} vs {}", r.linear_algebra, r.canonical));
            }
        }
    }
    let tame = |extra: &[&str]| {
        let mut args = vec!["coker", "--ring", "GF(2)[t]", "--N", "6"];
        args.extend(extra);
        Command::new(env!("CARGO_BIN_EXE_tame")).args(&args).output().unwrap().status.code()
    };
    let (clean, perturbed) = (tame(&[]), tame(&["--perturb-canonical"]));
    if clean != Some(0) || perturbed != Some(2) {
        bad.push(format!("exit codes {clean:?} / {perturbed:?}, expected 0 / 2"));
    }
    verdict(bad.is_empty(), format!("{checked} (q, N) pairs agree, mismatch exits 2{}", issues(&bad)))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("integrality criterion vs oracle", integrality_oracle),
        ("Amitsur exactness", amitsur_exactness),
        ("Vandermonde inverse", vandermonde_inverse),
        ("Laurent acyclicity", laurent_acyclicity),
        ("Čech comparison on P¹", cech_comparison),
        ("purity", purity),
        ("homotopy invariance", homotopy_invariance),
        ("ramification classifier", ramification_classifier),
        ("Artin-Schreier cokernel routes", coker_consistency),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        failed += !v.pass as usize;
        println!("{tag} {}. {name} ({:.2}s): {}", i + 1, start.elapsed().as_secs_f64(), v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
