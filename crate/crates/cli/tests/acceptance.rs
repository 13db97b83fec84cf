//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::error::Error;
use std::process::Command;
use std::time::{Duration, Instant};

use canon_symmetry::gallery;
use canon_symmetry::Problem;
use canon_symmetry_core::canonical::{
    first_integral_test, poisson_bracket, HamiltonianSystem, IntegralCandidate, PhaseSpace,
};
use canon_symmetry_core::correspondence::{
    field_from_integral, integral_from_field, levy_cerruti_split, normalize_addend,
};
use canon_symmetry_core::discovery::{discover_integrals, enumerate_basis};
use canon_symmetry_core::fields::{invariance_check, ContactField};
use canon_symmetry_core::numverify::{drift_report, flow_commutation_check, integrate_hamilton, Method};
use canon_symmetry_core::symcore::{Poly, Var, ZeroTestConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Res<T> = Result<T, Box<dyn Error>>;

const SEED: u64 = 20_240_917;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Res<String>); 8] = [
        ("integral iff invariant field", Some(60), equivalence),
        ("field round trip", None, round_trip),
        ("bracket algebra", None, bracket_algebra),
        ("discovery exactness", Some(10), discovery_exactness),
        ("kinetic/potential split", None, kinetic_potential_split),
        ("numerical coherence", Some(60), numerical_coherence),
        ("finite-difference gradients", None, finite_differences),
        ("cli determinism and exit codes", None, cli_determinism),
    ];
    let mut failed = 0;
    for (i, (title, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs(*secs) => {
                Err(format!("took {:.1} s, limit {secs} s", elapsed.as_secs_f64()))
            }
            (Ok(detail), _) => Ok(detail),
            (Err(e), _) => Err(e.to_string()),
        };
        let (mark, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!("criterion {} {mark} {title}: {detail} ({:.2} s)", i + 1, elapsed.as_secs_f64());
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn cfg() -> ZeroTestConfig {
    ZeroTestConfig::with_seed(SEED)
}

fn vars(n: usize, with_t: bool) -> Vec<Var> {
    let mut v: Vec<Var> = (0..n).map(Var::X).chain((0..n).map(Var::P)).collect();
    if with_t {
        v.push(Var::T);
    }
    v
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var], degree: u32, max_terms: usize) -> Poly {
    (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let mut term = Poly::integer(rng.gen_range(-5..=5));
            for _ in 0..rng.gen_range(0..=degree) {
                term = &term * &Poly::var(vars[rng.gen_range(0..vars.len())]);
            }
            term
        })
        .sum()
}

fn system(n: usize, h: Poly) -> Res<HamiltonianSystem> {
    Ok(HamiltonianSystem::new(PhaseSpace::new(n)?, h)?)
}

fn gallery() -> Res<Vec<Problem>> {
    Ok(gallery::problems()?)
}

fn only_t(p: &Poly) -> bool {
    p.vars().iter().all(|v| *v == Var::T)
}

/// Verdicts of the first-integral test and of the invariance check on the
/// field of `w`, after fixing the additive function of `t`.
fn integral_and_invariant(w: &Poly, sys: &HamiltonianSystem) -> Res<(bool, bool)> {
    let raw = IntegralCandidate::new(w.clone())?;
    let w = normalize_addend(&raw, sys).unwrap_or(raw);
    let integral = first_integral_test(&w, sys, &cfg())?.passed();
    let invariant = invariance_check(&field_from_integral(&w, &sys.space()), sys, &cfg())?.passed();
    Ok((integral, invariant))
}

fn equivalence() -> Res<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut pairs, mut integrals) = (0, 0);
    let mut check = |w: &Poly, sys: &HamiltonianSystem, must_hold: bool| -> Res<()> {
        let (integral, invariant) = integral_and_invariant(w, sys)?;
        ensure!(integral == invariant, "W = {w}, H = {}: integral {integral}, invariant {invariant}", sys.hamiltonian());
        ensure!(!must_hold || integral, "W = {w} should be an integral of H = {}", sys.hamiltonian());
        pairs += 1;
        integrals += usize::from(integral);
        Ok(())
    };
    for p in gallery()? {
        for (_, w) in &p.candidates {
            check(&w.w, &p.system, false)?;
        }
    }
    for _ in 0..200 {
        let n = rng.gen_range(1..=2);
        let with_t = rng.gen_bool(0.3);
        let h = random_poly(&mut rng, &vars(n, with_t), 4, 5);
        let w = random_poly(&mut rng, &vars(n, true), 3, 5);
        check(&w, &system(n, h)?, false)?;
    }
    // integrals by construction: functions of H, a cyclic momentum, and a t-addend
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let mut hv = vars(n, false);
        let cyclic = n == 2 && rng.gen_bool(0.5);
        if cyclic {
            hv.retain(|v| *v != Var::X(1));
        }
        let h = random_poly(&mut rng, &hv, 3, 4);
        let mut w = &(&h * &Poly::integer(rng.gen_range(-3..=3)))
            + &(&Poly::var(Var::T) * &Poly::integer(rng.gen_range(-3..=3)));
        w = &w + &(&h * &h);
        if cyclic {
            w = &w + &Poly::var(Var::P(1));
        }
        check(&w, &system(n, h)?, true)?;
    }
    Ok(format!("{pairs} pairs, {integrals} integrals, 0 disagreements"))
}

fn same_field(a: &ContactField, b: &ContactField) -> bool {
    a.xi().iter().zip(b.xi()).chain(a.pi().iter().zip(b.pi())).all(|(x, y)| (x - y).is_zero())
}

fn round_trip_one(w: &Poly, sys: &HamiltonianSystem) -> Res<()> {
    let space = sys.space();
    let cand = IntegralCandidate::new(w.clone())?;
    let field = field_from_integral(&cand, &space);
    let rec = integral_from_field(&field, sys, None, &cfg())?;
    ensure!(same_field(&field, &field_from_integral(&rec.candidate, &space)), "field of {w} changed in the round trip");
    let diff = match normalize_addend(&cand, sys) {
        Ok(norm) => {
            ensure!(rec.candidate.normalized, "reconstruction of {w} was not normalized");
            let diff = &rec.candidate.w - &norm.w;
            ensure!(diff.as_constant().is_some(), "{w} came back as {}", rec.candidate.w);
            diff
        }
        Err(_) => &rec.candidate.w - w,
    };
    ensure!(only_t(&diff), "{w} came back as {}", rec.candidate.w);
    Ok(())
}

fn round_trip() -> Res<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut count = 0;
    for p in gallery()? {
        for (_, w) in &p.candidates {
            round_trip_one(&w.w, &p.system)?;
            count += 1;
        }
        for (name, f) in &p.fields {
            let rec = integral_from_field(f, &p.system, None, &cfg())?;
            ensure!(same_field(f, &field_from_integral(&rec.candidate, &p.space())), "gallery field {name}");
            count += 1;
        }
    }
    let mut integrals = 0;
    for i in 0..100 {
        let n = rng.gen_range(1..=2);
        let mut h = random_poly(&mut rng, &vars(n, false), 4, 5);
        let mut w = random_poly(&mut rng, &vars(n, true), 3, 5);
        if i % 2 == 0 {
            h = random_poly(&mut rng, &vars(n, false), 3, 3);
            // an integral plus a t-addend the normalization has to remove
            w = &(&h * &h) + &(&Poly::var(Var::T) * &Poly::integer(rng.gen_range(1..=4)));
        }
        let sys = system(n, h)?;
        integrals += usize::from(normalize_addend(&IntegralCandidate::new(w.clone())?, &sys).is_ok());
        round_trip_one(&w, &sys)?;
        count += 1;
    }
    Ok(format!("{count} round trips ({integrals} random integrals), 0 failures"))
}

fn bracket_algebra() -> Res<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..120 {
        let n = rng.gen_range(1..=3);
        let space = PhaseSpace::new(n)?;
        let v = vars(n, true);
        let [f, g, k] = [0; 3].map(|_| random_poly(&mut rng, &v, 3, 4));
        let br = |a: &Poly, b: &Poly| poisson_bracket(a, b, &space);
        ensure!((&br(&f, &g)? + &br(&g, &f)?).is_zero(), "antisymmetry: {f}, {g}");
        let leibniz = &br(&(&f * &g), &k)? - &(&(&f * &br(&g, &k)?) + &(&g * &br(&f, &k)?));
        ensure!(leibniz.is_zero(), "Leibniz: {f}, {g}, {k}");
        let jacobi = &(&br(&f, &br(&g, &k)?)? + &br(&g, &br(&k, &f)?)?) + &br(&k, &br(&f, &g)?)?;
        ensure!(jacobi.is_zero(), "Jacobi: {f}, {g}, {k}");
        for i in 0..n {
            let (x, p) = (Poly::var(Var::X(i)), Poly::var(Var::P(i)));
            ensure!((&br(&x, &f)? - &f.diff(Var::P(i))).is_zero(), "{{x{}, F}} for {f}", i + 1);
            ensure!((&br(&p, &f)? + &f.diff(Var::X(i))).is_zero(), "{{p{}, F}} for {f}", i + 1);
            for j in 0..n {
                let (xj, pj) = (Poly::var(Var::X(j)), Poly::var(Var::P(j)));
                ensure!(br(&x, &xj)?.is_zero() && br(&p, &pj)?.is_zero(), "{{x, x}} or {{p, p}} at {i}, {j}");
                let delta = Poly::integer(i64::from(i == j));
                ensure!((&br(&x, &pj)? - &delta).is_zero(), "{{x{}, p{}}}", i + 1, j + 1);
            }
        }
    }
    Ok("120 triples: antisymmetry, Leibniz, Jacobi and canonical relations all exactly 0".into())
}

/// Exponent vectors over `x1..xn, p1..pn, t` with exact coefficients, kept
/// apart from the library's own polynomial type.
type Dense = BTreeMap<Vec<u32>, BigRational>;

fn d_add(a: &mut Dense, e: Vec<u32>, c: BigRational) {
    let slot = a.entry(e.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        a.remove(&e);
    }
}

fn d_diff(a: &Dense, k: usize) -> Dense {
    let mut out = Dense::new();
    for (e, c) in a {
        if e[k] > 0 {
            let mut e2 = e.clone();
            e2[k] -= 1;
            d_add(&mut out, e2, c * BigRational::from_integer(BigInt::from(e[k])));
        }
    }
    out
}

fn d_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            d_add(&mut out, ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
        }
    }
    out
}

/// `∂m/∂t + Σ (∂m/∂xᵢ ∂H/∂pᵢ − ∂m/∂pᵢ ∂H/∂xᵢ)`.
fn d_image(m: &Dense, h: &Dense, n: usize) -> Dense {
    let mut out = d_diff(m, 2 * n);
    for i in 0..n {
        for (e, c) in d_mul(&d_diff(m, i), &d_diff(h, n + i)) {
            d_add(&mut out, e, c);
        }
        for (e, c) in d_mul(&d_diff(m, n + i), &d_diff(h, i)) {
            d_add(&mut out, e, -c);
        }
    }
    out
}

fn d_basis(n: usize, degree: u32, with_t: bool) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for slot in 0..=2 * n {
        let top = if slot == 2 * n && !with_t { 0 } else { degree };
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| (0..=top).map(move |k| [e.clone(), vec![k]].concat()))
            .filter(|e| e[..e.len().min(2 * n)].iter().sum::<u32>() <= degree)
            .collect();
    }
    out
}

/// Row echelon form by first non-zero pivot.
fn naive_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(r) = (rank..rows.len()).find(|r| !rows[*r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        for below in rank + 1..rows.len() {
            let f = &rows[below][col] / &rows[rank][col];
            for c in col..ncols {
                let sub = &f * &rows[rank][c];
                rows[below][c] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

fn to_dense(p: &Poly, n: usize) -> Res<Dense> {
    let mut out = Dense::new();
    for (m, c) in p.terms() {
        let mut e = Vec::with_capacity(2 * n + 1);
        for v in vars(n, true) {
            let k = m.exponent_of(v);
            ensure!(k >= 0, "negative power in {p}");
            e.push(k as u32);
        }
        ensure!(m.factors().len() == e.iter().filter(|k| **k > 0).count(), "non-polynomial term in {p}");
        d_add(&mut out, e, c.clone());
    }
    Ok(out)
}

fn discovery_exactness() -> Res<String> {
    let half = || BigRational::new(BigInt::one(), BigInt::from(2));
    let cases: [(&str, usize, &str, Vec<(Vec<u32>, BigRational)>, u32, bool, usize); 3] = [
        ("oscillator", 1, "p1^2/2 + x1^2/2", vec![(vec![2, 0, 0], half()), (vec![0, 2, 0], half())], 2, false, 2),
        ("free particle with t", 1, "p1^2/2", vec![(vec![0, 2, 0], half())], 1, true, 3),
        ("free particle 2d", 2, "(p1^2 + p2^2)/2", vec![(vec![0, 0, 2, 0, 0], half()), (vec![0, 0, 0, 2, 0], half())], 2, false, 7),
    ];
    let mut out = vec![];
    for (name, n, h_text, h_dense, degree, with_t, expected) in cases {
        let sys = HamiltonianSystem::parse(PhaseSpace::new(n)?, h_text)?;
        let found = discover_integrals(&sys, &enumerate_basis(sys.space(), degree, with_t)?)?;

        let h: Dense = h_dense.into_iter().collect();
        let basis = d_basis(n, degree, with_t);
        let images: Vec<Dense> = basis
            .iter()
            .map(|e| d_image(&[(e.clone(), BigRational::one())].into_iter().collect(), &h, n))
            .collect();
        let mut row_keys: Vec<&Vec<u32>> = images.iter().flat_map(|m| m.keys()).collect();
        row_keys.sort();
        row_keys.dedup();
        let matrix: Vec<Vec<BigRational>> = row_keys
            .iter()
            .map(|k| images.iter().map(|m| m.get(*k).cloned().unwrap_or_else(BigRational::zero)).collect())
            .collect();
        let nullity = basis.len() - naive_rank(matrix);

        ensure!(found.dimension == expected, "{name}: library dimension {}", found.dimension);
        ensure!(nullity == expected, "{name}: oracle nullity {nullity}");
        let mut coords = vec![];
        for g in &found.generators {
            let d = to_dense(&g.w, n)?;
            ensure!(d_image(&d, &h, n).is_empty(), "{name}: generator {} fails the oracle", g.w);
            coords.push(basis.iter().map(|e| d.get(e).cloned().unwrap_or_else(BigRational::zero)).collect());
        }
        ensure!(naive_rank(coords) == expected, "{name}: generators are dependent");
        out.push(format!("{name} {expected}"));
    }
    Ok(format!("dimensions {} match the oracle", out.join(", ")))
}

fn kinetic_potential_split() -> Res<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let potentials = ["x1^2", "0", "-(x1^2 + x2^2)/2", "x2", "x1*x2", "x1^2 + x2^2", "x1^3 - 3*x1*x2^2"];
    let fixed = ["p1", "p2", "x1*p2 - x2*p1", "x1*p1 + x2*p2", "x2*p1", "(x1 + x2)*p2", "x1^2*p1 + x1*x2*p2"];
    let space = PhaseSpace::new(2)?;
    let (mut total, mut integrals, mut designed) = (0, 0, false);
    for u in potentials {
        let sys = HamiltonianSystem::parse(space, &format!("(p1^2 + p2^2)/2 - ({u})"))?;
        let mut ws: Vec<Poly> = fixed.iter().map(|w| space.parse(w)).collect::<Result<_, _>>()?;
        while ws.len() < fixed.len() + 10 {
            let xv = [Var::X(0), Var::X(1)];
            let w = &(&Poly::var(Var::P(0)) * &random_poly(&mut rng, &xv, 2, 3))
                + &(&Poly::var(Var::P(1)) * &random_poly(&mut rng, &xv, 2, 3));
            if !w.is_zero() {
                ws.push(w);
            }
        }
        for w in ws {
            let w = IntegralCandidate::new(w)?;
            let integral = first_integral_test(&w, &sys, &cfg())?.passed();
            let report = levy_cerruti_split(&w, &sys, &cfg())?;
            ensure!(report.is_linear_homogeneous, "{} should be linear homogeneous", w.w);
            let ok = |v: &Option<_>| v.as_ref().is_some_and(canon_symmetry_core::ZeroVerdict::is_zero);
            let split = ok(&report.t_admits) && ok(&report.u_admits);
            ensure!(integral == split, "U = {u}, W = {}: integral {integral}, split {split}", w.w);
            if u == "x1^2" && w.w == Poly::var(Var::P(0)) {
                ensure!(!integral && ok(&report.t_admits) && !ok(&report.u_admits), "designed failure misjudged");
                designed = true;
            }
            total += 1;
            integrals += usize::from(integral);
        }
    }
    ensure!(designed, "designed failure not exercised");
    Ok(format!("{total} pairs over {} potentials, {integrals} integrals, designed failure caught", potentials.len()))
}

fn numerical_coherence() -> Res<String> {
    let (t1, h) = (10.0, 1e-3);
    let (mut pairs, mut worst_drift, mut worst_commute) = (0, 0.0f64, 0.0f64);
    for p in gallery()? {
        let Some(sim) = &p.simulate else { continue };
        let method = Method::preferred_for(&p.system);
        let traj = integrate_hamilton(&p.system, &sim.initial, 0.0, t1, h, method)?;
        for (name, w) in &p.candidates {
            if !first_integral_test(w, &p.system, &cfg())?.verdict.is_proved() {
                continue;
            }
            let drift = drift_report(w, &traj, false)?.max_abs_deviation;
            ensure!(drift < 1e-6, "{}/{name}: drift {drift:e}", p.name);
            let c = flow_commutation_check(w, &p.system, &sim.initial, sim.flow_parameter, 0.0, t1, h, method, 1e-6)?;
            ensure!(c.passed(), "{}/{name}: commutation error {:e}", p.name, c.error);
            worst_drift = worst_drift.max(drift);
            worst_commute = worst_commute.max(c.error);
            pairs += 1;
        }
    }

    let osc = HamiltonianSystem::parse(PhaseSpace::new(1)?, "p1^2/2 + x1^2/2")?;
    let energy = IntegralCandidate::new(osc.hamiltonian().clone())?;
    let drifts = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|h| Ok(drift_report(&energy, &integrate_hamilton(&osc, &[1.0, 0.0], 0.0, t1, *h, Method::Verlet)?, false)?.max_abs_deviation))
        .collect::<Res<Vec<f64>>>()?;
    let ratios = [drifts[0] / drifts[1], drifts[1] / drifts[2]];
    ensure!(ratios.iter().all(|r| (3.0..=5.0).contains(r)), "verlet energy ratios {ratios:?}");

    let free = HamiltonianSystem::parse(PhaseSpace::new(1)?, "p1^2/2")?;
    let dilation = IntegralCandidate::new(free.space().parse("x1*p1")?)?;
    let c = flow_commutation_check(&dilation, &free, &[0.5, 1.0], 0.1, 0.0, t1, h, Method::Verlet, 1e-6)?;
    ensure!(c.error > 1e-3, "dilation commutes to {:e}", c.error);
    Ok(format!(
        "{pairs} pairs, max drift {worst_drift:.1e}, max commutation error {worst_commute:.1e}; \
         verlet ratios {:.2}, {:.2}; dilation error {:.2}",
        ratios[0], ratios[1], c.error
    ))
}

fn finite_differences() -> Res<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let h = 1e-4;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=2);
        let v = vars(n, true);
        let terms: Vec<String> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let mut t = format!("{}/{}", rng.gen_range(-5..=5), rng.gen_range(1..=4));
                for _ in 0..rng.gen_range(0..=3) {
                    t.push_str(&format!("*{}", v[rng.gen_range(0..v.len())]));
                }
                t
            })
            .collect();
        let text = terms.join(" + ");
        let e = PhaseSpace::new(n)?.parse(&text)?;
        let point: BTreeMap<Var, f64> = v.iter().map(|x| (*x, rng.gen_range(-1.0..=1.0))).collect();
        for x in &v {
            let at = |dx: f64| {
                let mut q = point.clone();
                *q.get_mut(x).unwrap() += dx;
                e.eval(&q)
            };
            let fd = (at(h)? - at(-h)?) / (2.0 * h);
            let err = (e.diff(*x).eval(&point)? - fd).abs();
            ensure!(err < 1e-6, "d/d{x} of {text}: error {err:e}");
            worst = worst.max(err);
        }
    }
    Ok(format!("100 expressions, max error {worst:.1e}"))
}

fn cli(args: &[&str]) -> Res<(Option<i32>, Vec<u8>)> {
    let out = Command::new(env!("CARGO_BIN_EXE_canon-symmetry")).args(args).output()?;
    Ok((out.status.code(), out.stdout))
}

fn cli_determinism() -> Res<String> {
    let dir = tempfile::tempdir()?;
    let commands =
        ["verify", "correspond", "reconstruct", "invariance", "levy-cerruti", "discover", "simulate", "commute"];
    for cmd in commands {
        let mut runs = vec![];
        for k in 0..2 {
            let path = dir.path().join(format!("{cmd}-{k}.json"));
            let (code, _) = cli(&[cmd, "--gallery", "--seed", "11", "--json", path.to_str().unwrap()])?;
            ensure!(matches!(code, Some(0 | 1)), "{cmd} --gallery exited with {code:?}");
            runs.push((code, std::fs::read(path)?));
        }
        ensure!(runs[0] == runs[1], "{cmd} --gallery is not reproducible");
    }
    let write = |name: &str, text: &str| -> Res<String> {
        let path = dir.path().join(name);
        std::fs::write(&path, text)?;
        Ok(path.display().to_string())
    };
    let pass = write("pass.json", r#"{"n": 1, "hamiltonian": "p1^2/2 + x1^2/2", "candidates": [{"name": "energy", "expression": "p1^2/2 + x1^2/2"}]}"#)?;
    let fail = write("fail.json", r#"{"n": 1, "hamiltonian": "p1^2/2", "candidates": [{"name": "position", "expression": "x1"}]}"#)?;
    let malformed = write("malformed.json", r#"{"n": 1, "hamiltonian": "p1^2/2 *"}"#)?;
    let (code, _) = cli(&["verify", &pass])?;
    ensure!(code == Some(0), "passing problem exited with {code:?}");
    let (code, stdout) = cli(&["verify", &fail])?;
    ensure!(code == Some(1), "failing problem exited with {code:?}");
    ensure!(String::from_utf8_lossy(&stdout).contains("residual: p1"), "failing problem did not report its residual");
    let (code, _) = cli(&["verify", &malformed])?;
    ensure!(code == Some(2), "malformed problem exited with {code:?}");
    Ok(format!("{} commands byte-identical across runs; exit codes 0, 1, 2 as documented", commands.len()))
}
