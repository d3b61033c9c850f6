//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use pgk_core::filtered::{build_dkap, build_dkl, Admissibility, FilteredPhiNModule};
use pgk_core::modp::{correspond, pi_normal_form, reduce_crystalline, CharModP, Fp2, GaloisSS, Reduction};
use pgk_core::phigamma::{
    frobenius, gamma_act, psi, required_unit_precision, B2Elem, BoxSeq, GammaUnit, PhiGammaModule, SeriesMatrix,
};
use pgk_core::slopes::{Etale, FiltrationKind, TriangularPhiModule};
use pgk_core::smooth::{p1_dim, p1_points, sp_dim, tree_dim, Mat2, P1Function, TreeFunction, Vertex};
use pgk_core::trianguline::{ext_dim, unramified_with_slope, CharacterP, ParamClass, TriParam};
use pgk_core::{LaurentSeries, PadicScalar, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("operator identities", operator_identities),
        ("admissibility table", admissibility_table),
        ("reduction table", reduction_table),
        ("correspondence well-definedness", correspondence_well_defined),
        ("central characters", central_characters),
        ("trianguline suite", trianguline_suite),
        ("tree suite", tree_suite),
        ("box sequences", box_sequences),
        ("determinism and round trips", determinism_and_round_trips),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

// 1 ------------------------------------------------------------------------

fn random_series(rng: &mut ChaCha8Rng, p: u64, a: u32, n: i64) -> LaurentSeries {
    let m = (p as i128).pow(a);
    let dmin = rng.gen_range(-3..=0);
    let terms: Vec<(i64, i128)> = (dmin..n).map(|d| (d, rng.gen_range(0..m))).collect();
    LaurentSeries::from_terms_with_dmin(p, a, &terms, n, dmin).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng, p: u64, prec: u32) -> GammaUnit {
    let m = (p as i128).pow(prec.min(20));
    loop {
        let x = rng.gen_range(1..m);
        if x % p as i128 != 0 {
            return GammaUnit::new(p, x, prec).unwrap();
        }
    }
}

fn operator_identities() -> Check {
    let (a, n, per_prime) = (8u32, 64i64, 500);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    for p in [3u64, 5, 7] {
        let shifts: Vec<_> = (0..p as i64).map(|i| LaurentSeries::one_plus_x_pow(p, a, -i, n).unwrap()).collect();
        let backs: Vec<_> = (0..p as i64).map(|i| LaurentSeries::one_plus_x_pow(p, a, i, n).unwrap()).collect();
        for case in 0..per_prime {
            let f = random_series(&mut rng, p, a, n);
            let g = random_series(&mut rng, p, a, n);
            let tag = format!("p={p} case {case}");
            let ff = frobenius(&f);
            ensure!(psi(&ff).agrees(&f), "psi(phi(f)) != f at {tag}");
            let l = psi(&ff.mul(&g).unwrap());
            ensure!(l.agrees(&f.mul(&psi(&g)).unwrap()), "psi(phi(f)g) != f psi(g) at {tag}");
            let l = psi(&f.mul(&frobenius(&g)).unwrap());
            ensure!(l.agrees(&psi(&f).mul(&g).unwrap()), "psi(f phi(g)) != psi(f) g at {tag}");
            let u = random_unit(&mut rng, p, required_unit_precision(&ff));
            let l = ok(gamma_act(u, &ff), "gamma")?;
            ensure!(l.agrees(&frobenius(&ok(gamma_act(u, &f), "gamma")?)), "gamma does not commute with phi at {tag}");
            let l = ok(gamma_act(u, &psi(&f)), "gamma")?;
            ensure!(l.agrees(&psi(&ok(gamma_act(u, &f), "gamma")?)), "gamma does not commute with psi at {tag}");
            let mut total = LaurentSeries::zero(p, a, n).unwrap();
            for i in 0..p as usize {
                let piece = frobenius(&psi(&shifts[i].mul(&f).unwrap())).mul(&backs[i]).unwrap();
                total = total.add(&piece).unwrap();
            }
            ensure!(total.agrees(&f), "partition of unity fails at {tag}");
            checks += 6;
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}, limit 60s");
    Ok(format!("{checks} identities on {} series, 0 failures, {:.2}s", 3 * per_prime, took.as_secs_f64()))
}

// 2 ------------------------------------------------------------------------

fn exact(p: u64, n: i128) -> PadicScalar {
    PadicScalar::from_int(p, n, 30)
}

fn admissibility_table() -> Check {
    let mut count = 0;
    for p in [3u64, 5, 7] {
        for k in 2..=12 {
            for v in [Q::new(1, 2), Q::from_integer(1), Q::from_integer(2)] {
                for u in [1i128, 2] {
                    let base = PadicScalar::p_power(p, v, 20);
                    let ap = base.mul(&PadicScalar::from_int(p, u, 20).with_ramification(base.e()).unwrap()).unwrap();
                    let r = ok(ok(build_dkap(p, k, ap), "build")?.is_admissible(), "admissible")?;
                    ensure!(r.verdict == Admissibility::Admissible, "D(k={k}, val={v}) at p={p}: {:?}", r.certificate);
                    count += 1;
                }
            }
            for k in [4i64, 6, 8] {
                for l in [0i128, 1, p as i128] {
                    let r = ok(ok(build_dkl(p, k, exact(p, l)), "build")?.is_admissible(), "admissible")?;
                    ensure!(r.verdict == Admissibility::Admissible, "D(k={k}, L={l}) at p={p}: {:?}", r.certificate);
                    count += 1;
                }
            }
        }
    }
    let p = 5;
    let z = PadicScalar::zero(p);
    let one = exact(p, 1);
    let d = ok(
        FilteredPhiNModule::new(
            vec![vec![one, z], vec![z, exact(p, 5)]],
            vec![vec![z, z], vec![z, z]],
            vec![(0, vec![vec![one, z], vec![z, one]]), (1, vec![vec![one, z]])],
        ),
        "negative example",
    )?;
    let r = ok(d.is_admissible(), "admissible")?;
    ensure!(r.verdict == Admissibility::NotAdmissible, "negative example verdict {:?}", r.verdict);
    let line = r.certificate.iter().find(|l| l.contains("t_H = 1 > t_N = 0"));
    ensure!(line.is_some(), "certificate {:?}", r.certificate);
    Ok(format!("{count} modules ADMISSIBLE; negative example certified by \"{}\"", line.unwrap()))
}

// 3 ------------------------------------------------------------------------

fn fp2_elements(p: u64) -> Vec<Fp2> {
    (0..p as i128).flat_map(|re| (0..p as i128).map(move |im| Fp2::new(p, re, im))).collect()
}

fn roots_of_reciprocal(p: u64, c: u64) -> Vec<Fp2> {
    let c = Fp2::from_int(p, c as i128);
    fp2_elements(p).into_iter().filter(|x| x.mul(x).sub(&c.mul(x)).add(&Fp2::one(p)).is_zero()).collect()
}

fn omega_mu(t: i64, l: Fp2) -> CharModP {
    CharModP::new(l, t)
}

fn ind(p: u64, h: i64) -> GaloisSS {
    let q = p as i64 + 1;
    if h.rem_euclid(q) == 0 {
        let m = h.div_euclid(q);
        let minus_one = Fp2::from_int(p, -1);
        let i = fp2_elements(p).into_iter().find(|x| x.mul(x) == minus_one).unwrap();
        return GaloisSS::split(omega_mu(m, i), omega_mu(m, i.neg()));
    }
    let r = h.rem_euclid(q) - 1;
    let m = (h - r - 1) / q;
    GaloisSS::irred(r as u64, CharModP::omega_pow(p, m)).unwrap()
}

fn split_family(p: u64, t1: i64, t2: i64, c: u64) -> GaloisSS {
    let l = roots_of_reciprocal(p, c)[0];
    GaloisSS::split(omega_mu(t1, l), omega_mu(t2, l.inv().unwrap()))
}

#[derive(Debug, PartialEq)]
enum Expected {
    Rep(GaloisSS, &'static str),
    Either(GaloisSS, &'static str),
    Unknown,
}

fn expected_reduction(p: u64, k: i64, ap: &PadicScalar) -> Expected {
    let v = ap.val().unwrap();
    let one = Q::from_integer(1);
    let pk = p as i64;
    let residue_over_p = || ap.shift(-1).residue().unwrap();
    if k <= pk + 1 {
        return Expected::Rep(ind(p, k - 1), "1");
    }
    if k == pk + 2 {
        return if v < one {
            Expected::Rep(ind(p, 2), "2a")
        } else {
            Expected::Rep(split_family(p, 1, 1, residue_over_p()), "2b")
        };
    }
    if k <= 2 * pk {
        return if v < one {
            Expected::Rep(ind(p, k - pk), "3a")
        } else if v == one {
            let l = Fp2::from_int(p, residue_over_p() as i128 * (k - 1) as i128);
            Expected::Rep(GaloisSS::split(omega_mu(k - 2, l), omega_mu(1, l.inv().unwrap())), "3b")
        } else {
            Expected::Rep(ind(p, k - 1), "3c")
        };
    }
    if k == 2 * pk + 1 {
        let w = if v * 2 != one {
            (v * 2).min(one)
        } else {
            let u = ap.unit_part().unwrap() as i128;
            let mut t = u * u + 1;
            let mut n = 0;
            while t % p as i128 == 0 {
                t /= p as i128;
                n += 1;
            }
            one + Q::from_integer(n)
        };
        let half = Q::new(3, 2);
        assert_ne!(w, half, "grid point with val(a_p^2 + p) = 3/2 needs a non-monomial a_p");
        return if w < half {
            Expected::Rep(ind(p, 2), "4a")
        } else {
            Expected::Rep(split_family(p, 1, 1, 0), "4b")
        };
    }
    if v > Q::from_integer((k - 2) / (pk - 1)) {
        return Expected::Rep(ind(p, k - 1), "5a");
    }
    if v < one {
        let t = (k - 2).rem_euclid(pk - 1) + 1;
        return if (k - 3) % (pk - 1) != 0 {
            Expected::Rep(ind(p, t), "5b-i")
        } else {
            Expected::Either(ind(p, t), "5b-ii")
        };
    }
    Expected::Unknown
}

fn sample_aps(p: u64) -> Vec<PadicScalar> {
    let prec = 14;
    let mut v = Vec::new();
    for u in [1i128, 2, 3] {
        v.push(PadicScalar::monomial(p, 1, 1, u, prec));
    }
    for (e, ord, u) in [(2u32, 1i64, 1i128), (2, 1, 2), (3, 1, 1), (3, 2, 2), (2, 3, 1), (2, 5, 3)] {
        v.push(PadicScalar::monomial(p, e, ord, u, prec));
    }
    for ord in [2i64, 3, 5, 7, 9] {
        v.push(PadicScalar::monomial(p, 1, ord, 1, prec));
    }
    if p == 5 {
        for u in [2i128, 3, 7] {
            v.push(PadicScalar::monomial(p, 2, 1, u, prec));
        }
    }
    v
}

fn reduction_table() -> Check {
    let start = Instant::now();
    let mut cases = BTreeSet::new();
    let mut points = 0;
    for p in [5u64, 7] {
        let mu = CharModP::mu(Fp2::from_int(p, -1));
        for k in 2..=(4 * p as i64 + 2) {
            for ap in sample_aps(p) {
                let got = ok(reduce_crystalline(p, k, &ap, None), "reduce")?;
                let want = expected_reduction(p, k, &ap);
                let tag = format!("p={p} k={k} a_p={ap}");
                match (&got, &want) {
                    (Reduction::Decided { rep, case }, Expected::Rep(w, c)) => {
                        ensure!(rep == w && case == c, "{tag}: got {got}, expected {w} [case {c}]");
                        cases.insert(case.clone());
                    }
                    (Reduction::Ambiguous { ind, split_twist, case }, Expected::Either(w, c)) => {
                        let omega = CharModP::omega(p);
                        let twist_ok = *split_twist == omega || *split_twist == omega.mul(&mu);
                        ensure!(ind == w && case == c && twist_ok, "{tag}: got {got}, expected {w} or split [case {c}]");
                        cases.insert(case.clone());
                    }
                    (Reduction::Unknown { .. }, Expected::Unknown) => {
                        cases.insert("unknown".into());
                    }
                    _ => return Err(format!("{tag}: got {got}, expected {want:?}")),
                }
                if k <= p as i64 + 1 {
                    ensure!(matches!(&got, Reduction::Decided { rep, .. } if *rep == ind(p, k - 1)), "{tag}: not ind(w2^(k-1))");
                }
                points += 1;
            }
        }
    }
    let all = ["1", "2a", "2b", "3a", "3b", "3c", "4a", "4b", "5a", "5b-i", "5b-ii", "unknown"];
    let missing: Vec<_> = all.iter().filter(|c| !cases.contains(**c)).collect();
    ensure!(missing.is_empty(), "branches never reached: {missing:?}");
    ensure!(points >= 40, "only {points} grid points");
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(10), "took {took:?}, limit 10s");
    Ok(format!("{points} grid points, all {} branches matched", all.len()))
}

// 4, 5 ---------------------------------------------------------------------

fn all_characters(p: u64) -> Vec<CharModP> {
    let units: Vec<Fp2> = fp2_elements(p).into_iter().filter(|x| !x.is_zero()).collect();
    (0..p as i64 - 1).flat_map(|t| units.iter().map(move |l| CharModP::new(*l, t))).collect()
}

fn all_equal<T: PartialEq>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

fn correspondence_well_defined() -> Check {
    let mut params = 0;
    let mut pairs = 0;
    let mut outside = 0;
    let mut orbits = 0;
    for p in [3u64, 5, 7] {
        let chars = all_characters(p);
        let m = CharModP::mu(Fp2::from_int(p, -1));
        for r in 0..p as i64 - 1 {
            for l in fp2_elements(p).into_iter().filter(|x| !x.is_zero()) {
                for chi in &chars {
                    let a = CharModP::omega_pow(p, r + 1).mul(chi).mul(&CharModP::mu(l));
                    let b = chi.mul(&CharModP::mu(l.inv().unwrap()));
                    let one = ok(correspond(&GaloisSS::Split { chars: [a, b] }), "correspond")?;
                    let two = ok(correspond(&GaloisSS::Split { chars: [b, a] }), "correspond")?;
                    ensure!(one == two, "p={p} (r={r}, λ={l}, χ={chi}): {one} vs {two}");
                    params += 1;
                }
            }
        }
        for a in &chars {
            for b in &chars {
                let one = correspond(&GaloisSS::Split { chars: [*a, *b] });
                let two = correspond(&GaloisSS::Split { chars: [*b, *a] });
                match (one, two) {
                    (Ok(x), Ok(y)) => ensure!(x == y, "p={p}: {a} ⊕ {b} gives {x} and {y}"),
                    (Err(pgk_core::Error::ResidueFieldTooSmall(_)), Err(pgk_core::Error::ResidueFieldTooSmall(_))) => {
                        outside += 1
                    }
                    (x, y) => return Err(format!("p={p}: {a} ⊕ {b}: {x:?} vs {y:?}")),
                }
                pairs += 1;
            }
        }
        for r in 0..p {
            for chi in &chars {
                let tw = chi.mul(&CharModP::omega_pow(p, r as i64));
                let gal = [(r, *chi), (r, chi.mul(&m)), (p - 1 - r, tw), (p - 1 - r, tw.mul(&m))];
                let forms: Vec<GaloisSS> = gal.iter().map(|&(r, c)| GaloisSS::irred(r, c).unwrap()).collect();
                ensure!(all_equal(&forms), "p={p} r={r} chi={chi}: Galois orbit gives {forms:?}");
                let images: Vec<_> = gal.iter().map(|&(r, c)| correspond(&GaloisSS::irred(r, c).unwrap()).unwrap()).collect();
                ensure!(all_equal(&images), "p={p} r={r} chi={chi}: correspondence not constant on orbit");
                let zero = Fp2::zero(p);
                let pis: Vec<_> = gal.iter().map(|&(r, c)| pi_normal_form(r, zero, c).unwrap()).collect();
                ensure!(all_equal(&pis), "p={p} r={r} chi={chi}: pi orbit gives {pis:?}");
                for l in fp2_elements(p).into_iter().filter(|x| !x.is_zero()) {
                    let x = pi_normal_form(r, l, *chi).ok();
                    let y = pi_normal_form(r, l.neg(), chi.mul(&m)).ok();
                    ensure!(x == y, "p={p}: pi({r},{l},{chi}) and its sign twin differ");
                }
                orbits += 1;
            }
        }
    }
    Ok(format!(
        "{params} parameters (r, λ, χ) agree in both orders; {pairs} arbitrary ordered pairs agree ({outside} need a field beyond F_p^2); {orbits} orbits collapse"
    ))
}

fn central_characters() -> Check {
    let mut checked = 0;
    for p in [3u64, 5, 7] {
        let chars = all_characters(p);
        let inv_omega = CharModP::omega_pow(p, -1);
        let mut reps: Vec<GaloisSS> = Vec::new();
        for a in &chars {
            for b in &chars {
                reps.push(GaloisSS::Split { chars: [*a, *b] });
            }
        }
        for r in 0..p {
            reps.extend(chars.iter().map(|c| GaloisSS::irred(r, *c).unwrap()));
        }
        for w in &reps {
            let pi = match correspond(w) {
                Ok(pi) => pi,
                Err(pgk_core::Error::ResidueFieldTooSmall(_)) => continue,
                Err(e) => return Err(format!("{w}: {e}")),
            };
            let want = inv_omega.mul(&w.det());
            ensure!(pi.central_character() == Some(want), "p={p}: {w} has central character {:?}, want {want}", pi.central_character());
            checked += 1;
        }
    }
    Ok(format!("{checked} representations, 0 exceptions"))
}

// 6 ------------------------------------------------------------------------

fn character(p: u64, w: i64, v: Q, u: i128) -> CharacterP {
    CharacterP::x_power(p, w).mul(&unramified_with_slope(p, v, u, 20).unwrap()).unwrap()
}

fn special_shape(p: u64, eta: &CharacterP) -> bool {
    let Ok(Some((s, 1))) = eta.s.rational_reconstruction() else { return false };
    let j_ok = eta.j as i128 == s.rem_euclid(p as i128 - 1);
    let target = if s <= 0 { s } else { s - 1 };
    j_ok && eta.c_p.agrees(&exact(p, 1).shift(target as i64))
}

fn trianguline_suite() -> Check {
    let p = 5u64;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut special = 0;
    for i in 0..10i64 {
        let d2 = character(p, rng.gen_range(-3..=3), Q::new(rng.gen_range(-4..=4), 2), rng.gen_range(1..5));
        let minus = d2.mul(&CharacterP::x_power(p, -i)).unwrap();
        let abs = d2.mul(&CharacterP::x_norm(p)).unwrap().mul(&CharacterP::x_power(p, i)).unwrap();
        ensure!(ok(ext_dim(&minus, &d2), "ext")? == 2, "x^-{i} twist is not special");
        ensure!(ok(ext_dim(&abs, &d2), "ext")? == 2, "|x|x^{} twist is not special", i + 1);
        special += 2;
    }
    let mut generic = 0;
    while generic < 200 {
        let d1 = CharacterP::new(
            exact(p, rng.gen_range(1..5)).shift(rng.gen_range(-3..=3)),
            rng.gen_range(0..4),
            exact(p, rng.gen_range(-4..=4)),
        )
        .unwrap();
        let d2 = character(p, rng.gen_range(-3..=3), Q::from_integer(rng.gen_range(-2..=2)), 1);
        if special_shape(p, &d1.div(&d2).unwrap()) {
            continue;
        }
        ensure!(ok(ext_dim(&d1, &d2), "ext")? == 1, "non-special pair {:?} / {:?} has dimension 2", d1, d2);
        generic += 1;
    }

    let slopes: Vec<Q> = [-3i64, -2, -1, 1, 2, 3].iter().map(|n| Q::new(*n, 2)).collect();
    let off = LaurentSeries::parse("1 + X", p, 4, 10).unwrap();
    let (mut grid, mut cris, mut irreducible) = (0, 0, 0);
    for &u1 in &slopes {
        for &u2 in &slopes {
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    let s = TriParam::new(character(p, a, u1 - a, 2), character(p, b, u2 - b, 3), None).unwrap();
                    let class = ok(s.classify(), "classify")?;
                    if class == ParamClass::Cris {
                        let t = ok(s.involution(), "involution")?;
                        ensure!(t.classify().unwrap() == ParamClass::Cris, "involution leaves CRIS at {s:?}");
                        ensure!(t.involution().unwrap().agrees(&s), "involution is not an involution at {s:?}");
                        cris += 1;
                    }
                    let hn = ok(TriangularPhiModule::from_param(s, off.clone()).and_then(|m| m.hn_verdict()), "hn")?;
                    let iso_etale = hn.filtration == FiltrationKind::Isocline && hn.etale == Etale::True;
                    ensure!(iso_etale == class.is_irreducible(), "hn verdict {hn:?} for class {class:?}");
                    irreducible += class.is_irreducible() as usize;
                    grid += 1;
                }
            }
        }
    }
    ensure!(cris >= 50, "only {cris} crystalline parameters");
    Ok(format!(
        "{special} special and {generic} generic pairs; involution on {cris} CRIS points; isocline/etale on exactly {irreducible} of {grid}"
    ))
}

// 7 ------------------------------------------------------------------------

fn brute_ball(p: u64, radius: u32) -> u64 {
    let mut count = 0;
    for d in 0..=radius {
        for a in 0..=d {
            let c = d - a;
            for b in 0..p.pow(c) {
                if a == 0 || c == 0 || b % p != 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

fn brute_p1(p: u64, n: u32) -> u64 {
    let q = p.pow(n);
    let primitive = (0..q).flat_map(|u| (0..q).map(move |v| (u, v))).filter(|(u, v)| u % p != 0 || v % p != 0).count() as u64;
    let units = (0..q).filter(|x| x % p != 0).count() as u64;
    primitive / units
}

fn random_tree_function(rng: &mut ChaCha8Rng, p: u64, r: u32, radius: u32) -> TreeFunction {
    let mut f = TreeFunction::zero(p, r, radius + 1);
    let im = if p == 2 { 1 } else { p };
    for v in Vertex::ball(p, radius) {
        if rng.gen_bool(0.4) {
            let x: Vec<Fp2> =
                (0..=r).map(|_| Fp2::new(p, rng.gen_range(0..p) as i128, rng.gen_range(0..im) as i128)).collect();
            if x.iter().any(|z| !z.is_zero()) {
                f.values.insert(v, x);
            }
        }
    }
    f
}

fn random_k_element(rng: &mut ChaCha8Rng, p: u64) -> Mat2 {
    let m = (p as i128).pow(3);
    loop {
        let e: [i128; 4] = std::array::from_fn(|_| rng.gen_range(0..m));
        if (e[0] * e[3] - e[1] * e[2]) % p as i128 != 0 {
            return Mat2::from_ints(e[0], e[1], e[2], e[3]);
        }
    }
}

fn tree_suite() -> Check {
    for p in [2u64, 3, 5] {
        for radius in 0..=4u32 {
            let ball = Vertex::ball(p, radius);
            let inside: BTreeSet<Vertex> = ball.iter().copied().collect();
            let mut edges: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
            for v in &ball {
                let t = ok(TreeFunction::delta(p, 0, radius, *v, 0), "delta")?.hecke_t();
                ensure!(t.values.len() == p as usize + 1, "p={p}: T(delta) has {} terms", t.values.len());
                for (w, x) in &t.values {
                    ensure!(x[0] == Fp2::one(p), "p={p}: adjacency weight {:?}", x[0]);
                    ensure!(w.distance().abs_diff(v.distance()) == 1, "p={p}: T moves {v:?} to {w:?}");
                    if inside.contains(w) {
                        edges.entry(*v).or_default().insert(*w);
                    }
                }
            }
            let n_edges: usize = edges.values().map(|s| s.len()).sum();
            for (v, ws) in &edges {
                for w in ws {
                    ensure!(edges.get(w).is_some_and(|s| s.contains(v)), "p={p}: adjacency not symmetric");
                }
            }
            let mut seen = BTreeSet::from([Vertex::ROOT]);
            let mut queue = VecDeque::from([Vertex::ROOT]);
            while let Some(v) = queue.pop_front() {
                for w in edges.get(&v).into_iter().flatten() {
                    if seen.insert(*w) {
                        queue.push_back(*w);
                    }
                }
            }
            ensure!(seen.len() == ball.len() && n_edges == 2 * (ball.len() - 1), "p={p} R={radius}: not a tree");
            ensure!(ball.len() as u64 == brute_ball(p, radius), "p={p} R={radius}: ball size");
        }
        let t2 = TreeFunction::delta(p, 0, 0, Vertex::ROOT, 0).unwrap().hecke_t().hecke_t();
        ensure!(t2.get(&Vertex::ROOT)[0] == Fp2::from_int(p, p as i128 + 1), "p={p}: T^2 at the root");
        let far: Vec<_> = t2.values.iter().filter(|(v, _)| v.distance() == 2).collect();
        ensure!(far.len() as u64 == (p + 1) * p && far.iter().all(|(_, x)| x[0] == Fp2::one(p)), "p={p}: T^2 paths of length 2");
        ensure!(t2.values.len() as u64 == (p + 1) * p + 1, "p={p}: T^2 support");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut functions = 0;
    for p in [2u64, 3, 5] {
        for r in 0..=2u32 {
            for radius in 1..=3u32 {
                for _ in 0..100 {
                    let f = random_tree_function(&mut rng, p, r, radius);
                    let g = random_k_element(&mut rng, p);
                    let lhs = ok(f.act(&g), "act")?.hecke_t();
                    let rhs = ok(f.hecke_t().act(&g), "act")?;
                    ensure!(lhs.values == rhs.values, "p={p} r={r} R={radius}: T not equivariant for {g:?}");
                    functions += 1;
                }
            }
        }
    }

    for p in [2u64, 3, 5] {
        for radius in 0..=3u32 {
            for r in 0..=2u32 {
                ensure!(tree_dim(p, r, radius) == (r as u64 + 1) * brute_ball(p, radius), "tree_dim({p},{r},{radius})");
            }
        }
        for n in 1..=3u32 {
            let brute = brute_p1(p, n);
            ensure!(p1_dim(p, n) == brute && p1_points(p, n).len() as u64 == brute, "p1_dim({p},{n})");
            ensure!(sp_dim(p, n) == brute - 1, "sp_dim({p},{n})");
            let c = P1Function::constant(p, n, Fp2::one(p));
            let g = [[1i128, 1], [0, 1]];
            ensure!(ok(c.act(&g), "p1 act")? == c, "constants move under p1 action");
        }
    }
    Ok(format!("adjacency and T^2 for p in {{2,3,5}}, equivariance on {functions} functions, dimensions match"))
}

// 8 ------------------------------------------------------------------------

fn generator(rng: &mut ChaCha8Rng, p: u64) -> B2Elem {
    let unit = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen_range(1..200i128);
        if x % p as i128 != 0 {
            return exact(p, x);
        }
    };
    match rng.gen_range(0..4) {
        0 => B2Elem::p_diagonal(p, rng.gen_range(-1..=2)),
        1 => B2Elem::unit_diagonal(unit(rng)),
        2 => B2Elem::unipotent(exact(p, rng.gen_range(0..50)).shift(rng.gen_range(-1..=1))),
        _ => B2Elem::center(unit(rng)),
    }
}

fn box_sequences() -> Check {
    let p = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let module = PhiGammaModule::trivial(p, 4, 20).unwrap();
    let top = vec![LaurentSeries::parse("2 + X^-1 + 3*X^2", p, 4, 20).unwrap()];
    let x = ok(BoxSeq::from_top(module.clone(), CharacterP::x_power(p, 2), -2, 4, top), "box")?;
    let (mut agreed, mut skipped) = (0, 0);
    while agreed < 50 {
        ensure!(skipped < 500, "too many generator pairs with empty windows");
        let g = generator(&mut rng, p);
        let h = generator(&mut rng, p);
        let lhs = x.act(&h).and_then(|y| y.act(&g));
        let rhs = g.mul(&h).and_then(|gh| x.act(&gh));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                ensure!(l.agrees_on_overlap(&r), "group law fails for {g:?} * {h:?}");
                agreed += 1;
            }
            _ => skipped += 1,
        }
    }

    let mut zeros = 0;
    for p in [3u64, 5, 7] {
        let a = 4;
        let trivial = PhiGammaModule::trivial(p, a, 30).unwrap();
        let c = |n: i128| LaurentSeries::from_terms(p, a, &[(0, n)], 30).unwrap();
        let rank_two = ok(
            SeriesMatrix::from_rows(vec![vec![c(0), c(-1)], vec![c(1), c(3)]]).and_then(PhiGammaModule::with_constant_frobenius),
            "rank two",
        )?;
        for module in [trivial, rank_two] {
            for _ in 0..50 {
                let z: Vec<_> = (0..module.rank()).map(|_| random_series(&mut rng, p, a, 30)).collect();
                let res = ok(module.res_zpx(&ok(module.phi(&z), "phi")?), "res")?;
                ensure!(res.iter().all(|s| s.is_zero_within_precision()), "res(phi(z)) != 0 at p={p}");
                zeros += 1;
            }
        }
        let m = PhiGammaModule::trivial(p, a, 20).unwrap();
        for fixed in ["1", "X^-1", "3 + X^-1"] {
            let y = vec![LaurentSeries::parse(fixed, p, a, 20).unwrap()];
            let s = ok(BoxSeq::constant(m.clone(), CharacterP::trivial(p), -2, 2, y), "constant")?;
            ensure!(ok(s.is_bounded_sharp(), "sharp")?, "constant sequence {fixed} rejected at p={p}");
        }
        for bad in ["X^-2", "1 + X^-3", "X^-2 + X^-1"] {
            let top = vec![LaurentSeries::parse(bad, p, a, 20).unwrap()];
            let s = ok(BoxSeq::from_top(m.clone(), CharacterP::trivial(p), 0, 1, top), "from_top")?;
            ensure!(!ok(s.is_bounded_sharp(), "sharp")?, "sequence with {bad} accepted at p={p}");
        }
    }
    Ok(format!("{agreed} generator pairs coherent ({skipped} empty windows), {zeros} residues vanish, sharp lattice test exact"))
}

// 9 ------------------------------------------------------------------------

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(x: &T, what: &str) -> Result<(), String> {
    for pretty in [false, true] {
        let text = if pretty { serde_json::to_string_pretty(x) } else { serde_json::to_string(x) }.map_err(|e| e.to_string())?;
        let back: T = serde_json::from_str(&text).map_err(|e| format!("{what}: {e}"))?;
        ensure!(back == *x, "{what}: value changed");
        let again = if pretty { serde_json::to_string_pretty(&back) } else { serde_json::to_string(&back) }.unwrap();
        ensure!(again == text, "{what}: bytes changed");
    }
    Ok(())
}

fn pgk(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pgk"))
        .args(args)
        .env_remove("PGK_CACHE")
        .env_remove("PGK_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(matches!(out.status.code(), Some(0) | Some(3)), "pgk {args:?} exited with {:?}", out.status.code());
    Ok(out.stdout)
}

fn determinism_and_round_trips() -> Check {
    let p = 5;
    let mut n = 0;
    for s in [
        PadicScalar::zero(p),
        PadicScalar::from_int(p, 0, 6),
        exact(p, 75),
        PadicScalar::monomial(p, 2, 3, 7, 10),
        PadicScalar::from_ratio(p, 3, 25, 8).unwrap(),
    ] {
        round_trip(&s, "scalar")?;
        n += 1;
    }
    round_trip(&LaurentSeries::parse("3 + X^-2 - 7*X^5", p, 6, 20).unwrap(), "series")?;
    let module = PhiGammaModule::trivial(p, 4, 20).unwrap();
    round_trip(&module, "phi_gamma_module")?;
    let y = vec![LaurentSeries::parse("X^-1", p, 4, 20).unwrap()];
    round_trip(&BoxSeq::constant(module, CharacterP::x_power(p, 1), -1, 2, y).unwrap(), "box_seq")?;
    round_trip(&build_dkap(p, 5, PadicScalar::p_power(p, Q::new(1, 2), 10)).unwrap(), "filtered_module")?;
    round_trip(&build_dkl(p, 6, exact(p, 5)).unwrap(), "filtered_module")?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    round_trip(&random_tree_function(&mut rng, p, 2, 2), "tree_function")?;
    round_trip(&P1Function::indicator(p, 2, p1_points(p, 2)[3]), "p1_function")?;
    let w = GaloisSS::split(CharModP::new(Fp2::from_int(p, 2), 1), CharModP::omega(p));
    round_trip(&w, "galois")?;
    round_trip(&correspond(&w).unwrap(), "gl2")?;
    round_trip(&reduce_crystalline(p, 15, &PadicScalar::monomial(p, 2, 1, 1, 10), None).unwrap(), "reduction")?;
    let s = TriParam::new(character(p, 3, Q::new(-5, 2), 2), character(p, 0, Q::new(1, 2), 1), None).unwrap();
    round_trip(&s, "trianguline parameter")?;
    n += 14;

    let commands: [&[&str]; 8] = [
        &["series", "phi", "--p", "5", "--f", "1 + X^-1"],
        &["admissible", "--p", "5", "--k", "6", "--linv", "5"],
        &["reduce", "--p", "5", "--k", "8", "--ap", "10"],
        &["correspond", "--input", r#"{"p":5,"kind":"split","chars":[{"t":0,"lambda":2},{"t":1,"lambda":[1,1]}]}"#],
        &["classify-trianguline", "--p", "5", "--d1", r#"{"c_p":"5^2","j":2,"s":"2"}"#, "--d2", r#"{"c_p":"5^-2","j":0,"s":"0"}"#],
        &["tree", "--p", "3", "--r", "1", "--radius", "1"],
        &["box", "--op", "demo", "--p", "5"],
        &["sweep", "--p", "5", "--k", "2..12", "--vals", "1/2,1,2", "--format", "json"],
    ];
    for args in commands {
        let first = pgk(args)?;
        ensure!(pgk(args)? == first, "pgk {args:?} is not byte-stable");
        let v: serde_json::Value = serde_json::from_slice(&first).map_err(|e| format!("{args:?}: {e}"))?;
        ensure!(v["schema"].as_str().is_some_and(|s| s.starts_with("pgk.")), "{args:?}: missing schema");
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        ensure!(again.as_bytes() == first.as_slice(), "{args:?}: output does not round-trip bit-exactly");
        n += 1;
    }
    let csv = ["sweep", "--p", "7", "--k", "2..20", "--vals", "1/2,1,3/2,2"];
    let first = pgk(&csv)?;
    ensure!(pgk(&csv)? == first, "csv sweep is not byte-stable");
    let doc = pgk_cli::input::galois_json(&w);
    let parsed = pgk_cli::input::galois(&doc).map_err(|e| e.to_string())?;
    ensure!(parsed == w && pgk_cli::input::galois_json(&parsed) == doc, "galois document round trip");
    Ok(format!("{n} documents round-trip bit-exactly; sweeps byte-stable"))
}
