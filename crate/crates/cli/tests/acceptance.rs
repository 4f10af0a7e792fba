//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p crosshull-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use crosshull::cross::{random_cross, verify_prop24, CrossSpec, WClass};
use crosshull::extremal::remark22_campaign;
use crosshull::polytope::{Cell, HPolytope, Halfspace, VData};
use crosshull::random::{random_extremal_problem, Sampler};
use crosshull::reinhardt::{
    cross_envelope_verify, h_star, DohVerdict, LogPoint, ReinhardtCross, ReinhardtDomain,
};
use crosshull::{LpOutcome, LpProblem, Rational};
use crosshull_cli::{run, Command, RunConfig};

const LP_COUNT: usize = 1000;
const LP_LIMIT: Duration = Duration::from_secs(30);
const PHI_PROBLEMS: usize = 102;
const PHI_POINTS: usize = 10;
const PHI_LIMIT: Duration = Duration::from_secs(60);
const REMARK_INSTANCES: usize = 60;
const REMARK_SAMPLES: usize = 12;
const CROSS_SPECS: usize = 20;
const CROSS_SAMPLES: usize = 1000;
const CROSS_LIMIT: Duration = Duration::from_secs(300);
const ADDITIVITY_SPECS: usize = 12;
const ADDITIVITY_MIN: usize = 200;
const REINHARDT_SAMPLES: usize = 500;

type Check = Result<String, String>;

type Criterion = (&'static str, Option<Duration>, fn() -> Check);

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn z(n: i64) -> Rational {
    q(n, 1)
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| z(n)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cell(lo: &[i64], hi: &[i64], ext: &[usize]) -> Cell {
    Cell::new(HPolytope::from_box(&ints(lo), &ints(hi)).unwrap(), ext.to_vec()).unwrap()
}

fn domain(n: usize, cells: Vec<Cell>, flags: &[bool]) -> ReinhardtDomain {
    ReinhardtDomain::new(n, cells, flags.to_vec()).unwrap()
}

fn disc(lo: i64, hi: i64) -> ReinhardtDomain {
    domain(1, vec![cell(&[lo], &[hi], &[0])], &[true])
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn random_lp(s: &mut Sampler) -> LpProblem {
    let n = s.int(1, 8) as usize;
    let boxed = s.chance(3, 4);
    let budget = if boxed { 24 - 2 * n } else { 24 };
    let rows = s.int(1, budget as i64) as usize;
    let eqs = if n > 1 && s.chance(1, 3) { s.int(1, 2) as usize } else { 0 };
    let mut lp = LpProblem::new(n).maximize((0..n).map(|_| z(s.int(-5, 5))).collect());
    for i in 0..rows {
        let coeffs: Vec<Rational> = (0..n)
            .map(|_| if s.chance(1, 4) { z(0) } else { q(s.int(-6, 6), s.int(1, 3)) })
            .collect();
        let rhs = q(s.int(-4, 12), s.int(1, 2));
        if i < eqs {
            lp.add_eq(coeffs, rhs);
        } else {
            lp.add_le(coeffs, rhs);
        }
    }
    if boxed {
        for j in 0..n {
            let mut e = vec![z(0); n];
            e[j] = z(1);
            lp.add_le(e.clone(), z(20));
            lp.add_ge(e, z(-20));
        }
    }
    lp
}

fn lp_certificates() -> Check {
    let mut s = Sampler::new(1);
    let (mut optimal, mut infeasible, mut unbounded) = (0, 0, 0);
    for i in 0..LP_COUNT {
        let lp = random_lp(&mut s);
        ensure(lp.num_vars <= 8 && lp.ineqs.len() + lp.eqs.len() <= 24, || format!("LP {i} too large"))?;
        match lp.solve().map_err(|e| format!("LP {i}: {e}"))? {
            LpOutcome::Optimal(sol) => {
                sol.verify(&lp).map_err(|e| format!("LP {i}: {e}"))?;
                optimal += 1;
            }
            LpOutcome::Infeasible => infeasible += 1,
            LpOutcome::Unbounded => unbounded += 1,
        }
    }
    ensure(optimal >= LP_COUNT / 2, || format!("only {optimal} optimal outcomes"))?;
    Ok(format!(
        "{LP_COUNT} LPs: {optimal} optimal certificates verified, {infeasible} infeasible, {unbounded} unbounded"
    ))
}

fn phi_formulations() -> Check {
    let mut s = Sampler::new(2);
    let mut compared = 0;
    for i in 0..PHI_PROBLEMS {
        let dim = 1 + i % 3;
        let prob = random_extremal_problem(&mut s, dim).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < PHI_POINTS {
            let x = s.hull_point(prob.u_vdata());
            if !prob.is_interior(&x).map_err(|e| e.to_string())? {
                continue;
            }
            let (dual, _) = prob.phi_dual(&x).map_err(|e| e.to_string())?;
            let gauge = prob.phi_gauge(&x).map_err(|e| e.to_string())?;
            ensure(dual == gauge, || format!("problem {i}: dual {dual} vs gauge {gauge} at {x:?}"))?;
            done += 1;
        }
        compared += done;
    }
    Ok(format!("{PHI_PROBLEMS} problems (n = 1, 2, 3), {compared} points, 0 mismatches"))
}

fn remark_suite() -> Check {
    let mut s = Sampler::new(3);
    let mut checked = [0usize; 4];
    for i in 0..REMARK_INSTANCES {
        let prob = random_extremal_problem(&mut s, 1 + i % 3).map_err(|e| e.to_string())?;
        let (mu, r) = remark22_campaign(&prob, REMARK_SAMPLES, i as u64).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("instance {i} (mu = {mu}): {r:?}"))?;
        for (c, p) in checked.iter_mut().zip([&r.range, &r.hull_invariance, &r.rescaling, &r.monotone]) {
            *c += p.checked;
        }
    }
    ensure(checked.iter().all(|&c| c > 0), || format!("a property was never exercised: {checked:?}"))?;
    Ok(format!(
        "{REMARK_INSTANCES} instances; checks range {} hull {} rescaling {} monotone {}; 0 violations",
        checked[0], checked[1], checked[2], checked[3]
    ))
}

fn random_dims(s: &mut Sampler) -> Vec<usize> {
    let n = s.int(2, 3) as usize;
    (0..n).map(|_| s.int(1, 2) as usize).collect()
}

fn convex_cross() -> Check {
    let mut s = Sampler::new(4);
    let mut totals = [0usize; 4];
    for i in 0..CROSS_SPECS {
        let dims = random_dims(&mut s);
        let spec = random_cross(&mut s, &dims).map_err(|e| e.to_string())?;
        let r = verify_prop24(&spec, CROSS_SAMPLES, i as u64).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("spec {i} {dims:?}: {:?}", r.violations.first()))?;
        ensure(r.samples == CROSS_SAMPLES, || format!("spec {i}: {} samples", r.samples))?;
        for (t, c) in totals.iter_mut().zip([r.inside, r.boundary, r.outside, r.skipped]) {
            *t += c;
        }
    }
    ensure(totals[..3].iter().all(|&c| c > 0), || format!("class missing: {totals:?}"))?;
    Ok(format!(
        "{CROSS_SPECS} specs x {CROSS_SAMPLES} samples; inside {} boundary {} outside {} skipped {}; routes agree, 0 violations",
        totals[0], totals[1], totals[2], totals[3]
    ))
}

fn additivity() -> Check {
    let mut s = Sampler::new(5);
    let mut checked = 0;
    for i in 0..ADDITIVITY_SPECS {
        let dims = random_dims(&mut s);
        let spec = random_cross(&mut s, &dims).map_err(|e| e.to_string())?;
        for x in spec.sample_points(&mut s, 40).map_err(|e| e.to_string())? {
            match spec.product_phi_check(&x) {
                Ok((lhs, rhs)) => {
                    ensure(lhs == rhs, || format!("spec {i} at {x:?}: {lhs} vs {rhs}"))?;
                    checked += 1;
                }
                Err(crosshull::Error::Domain(_)) => {}
                Err(e) => return Err(format!("spec {i}: {e}")),
            }
        }
    }
    ensure(checked >= ADDITIVITY_MIN, || format!("only {checked} interior samples"))?;
    Ok(format!("{checked} interior samples across {ADDITIVITY_SPECS} specs, 0 violations"))
}

fn diamond() -> CrossSpec {
    let factor = || {
        let s = Cell::bounded(HPolytope::from_box(&[q(-1, 4)], &[q(1, 4)]).unwrap());
        let u = Cell::bounded(HPolytope::from_box(&[z(-1)], &[z(1)]).unwrap());
        crosshull::cross::CrossFactor::new(vec![s], u).unwrap()
    };
    CrossSpec::new(vec![factor(), factor()]).unwrap()
}

fn worked_diamond() -> Check {
    let spec = diamond();
    let cases = [
        ((1, 2), q(2, 3), WClass::Inside, true),
        ((3, 4), q(4, 3), WClass::Outside, false),
        ((5, 8), z(1), WClass::Boundary, true),
    ];
    for ((n, d), sum, class, member) in cases {
        let x = vec![q(n, d), q(n, d)];
        let t = spec.conv_cross_classify(&x).map_err(|e| e.to_string())?;
        ensure(t.phi_sum == sum && t.w_class == class && t.hull_member == member, || {
            format!("({n}/{d}, {n}/{d}): {t:?}")
        })?;
    }
    Ok("(1/2,1/2) sum 2/3 inside; (3/4,3/4) sum 4/3 outside; (5/8,5/8) sum 1 boundary, in hull".into())
}

fn envelopes() -> Check {
    let lshape = domain(
        2,
        vec![
            Cell::bounded(HPolytope::from_box(&ints(&[-2, -2]), &ints(&[0, -1])).unwrap()),
            Cell::bounded(HPolytope::from_box(&ints(&[-2, -2]), &ints(&[-1, 0])).unwrap()),
        ],
        &[false, false],
    );
    let env = lshape.envelope().map_err(|e| e.to_string())?;
    let hrep = env.hrep.clone().ok_or("no H-representation")?;
    ensure(hrep.rows().len() == 5, || format!("{} facets", hrep.rows().len()))?;
    let cut = Halfspace::new(ints(&[1, 1]), z(-1));
    ensure(hrep.rows().contains(&cut), || format!("facet x+y <= -1 missing: {:?}", hrep.rows()))?;
    ensure(env.axis_meets == [false, false], || "L-shape flags changed".into())?;

    let hartogs = domain(
        2,
        vec![cell(&[-3, -1], &[0, 0], &[0]), cell(&[-3, -3], &[-2, 0], &[0, 1])],
        &[true, true],
    );
    let h_env = hartogs.envelope().map_err(|e| e.to_string())?;
    let bidisc = VData::new(2, vec![ints(&[0, 0])], vec![0, 1]).unwrap();
    ensure(h_env.hull == bidisc, || format!("Hartogs hull {:?}", h_env.hull))?;
    ensure(h_env.axis_meets == [true, true], || "Hartogs flags changed".into())?;

    for (name, e) in [("L-shape", &env), ("Hartogs", &h_env)] {
        let dom = e.to_domain().map_err(|e| e.to_string())?;
        ensure(dom.is_doh().map_err(|e| e.to_string())? == DohVerdict::Holds, || {
            format!("{name} envelope fails is_doh")
        })?;
        let again = dom.envelope().map_err(|e| e.to_string())?;
        ensure(again.hull == e.hull && again.axis_meets == e.axis_meets, || {
            format!("{name} envelope not idempotent")
        })?;
    }
    Ok("L-shape -> pentagon with x+y <= -1; Hartogs -> bidisc, flags (true,true); is_doh holds; idempotent".into())
}

fn h_star_closed_form() -> Check {
    let (a, d) = (disc(-4, -1), disc(-4, 0));
    let at = |x: Rational| h_star(&a, &d, &LogPoint::finite(&[x])).map_err(|e| e.to_string());
    let half = at(q(-1, 2))?;
    ensure(half == q(1, 2), || format!("h*(-1/2) = {half}"))?;
    for x in [z(-1), q(-3, 2), z(-2), q(-7, 2)] {
        let v = at(x.clone())?;
        ensure(v == z(0), || format!("h*({x}) = {v} on log A"))?;
    }
    Ok("h*(-1/2) = 1/2; h* = 0 at -1, -3/2, -2, -7/2".into())
}

fn reinhardt_crosses() -> Vec<(&'static str, ReinhardtCross)> {
    let disc_pair = || (disc(-4, -1), disc(-4, 0));
    let bidisc = domain(2, vec![cell(&[-4, -4], &[0, 0], &[0, 1])], &[true, true]);
    let small_bidisc = domain(2, vec![cell(&[-4, -4], &[-1, -2], &[0, 1])], &[true, true]);
    let ring = domain(2, vec![cell(&[-4, -1], &[0, 0], &[0])], &[true, false]);
    let ring_a = domain(
        2,
        vec![Cell::new(
            HPolytope::from_box(&[z(-4), q(-3, 4)], &[z(-1), q(-1, 4)]).unwrap(),
            vec![0],
        )
        .unwrap()],
        &[true, false],
    );
    let hartogs = domain(
        2,
        vec![cell(&[-3, -1], &[0, 0], &[0]), cell(&[-3, -3], &[-2, 0], &[0, 1])],
        &[true, true],
    );
    let hartogs_env = hartogs.envelope().unwrap().to_domain().unwrap();
    let inner = domain(2, vec![Cell::bounded(HPolytope::from_box(&ints(&[-2, -2]), &ints(&[-1, -1])).unwrap())], &[false, false]);
    let pd = ReinhardtDomain::polydisc(&[z(0), q(-1, 2)], &z(8)).unwrap();
    let pd_a = ReinhardtDomain::polydisc(&[z(-2), z(-1)], &z(8)).unwrap();
    let annulus = domain(1, vec![cell(&[-3], &[0], &[])], &[false]);
    let annulus_a = domain(1, vec![cell(&[-2], &[-1], &[])], &[false]);
    vec![
        ("disc x disc", ReinhardtCross::new(vec![disc_pair(), disc_pair()]).unwrap()),
        ("three discs", ReinhardtCross::new(vec![disc_pair(), disc_pair(), disc_pair()]).unwrap()),
        ("bidisc x disc", ReinhardtCross::new(vec![(small_bidisc, bidisc), disc_pair()]).unwrap()),
        ("ring x Hartogs envelope", ReinhardtCross::new(vec![(ring_a, ring), (inner, hartogs_env)]).unwrap()),
        ("polydisc x annulus", ReinhardtCross::new(vec![(pd_a, pd), (annulus_a, annulus)]).unwrap()),
    ]
}

fn reinhardt_cross_theorem() -> Check {
    let crosses = reinhardt_crosses();
    // worked points of the disc example
    let disc2 = &crosses[0].1;
    for ((x, y), sum, class) in [
        ((q(-1, 2), q(-3, 4)), q(3, 4), WClass::Inside),
        ((q(-1, 8), q(-1, 4)), q(13, 8), WClass::Outside),
    ] {
        let p = [x, y];
        let h = disc2.h_star_sum(&LogPoint::finite(&p)).map_err(|e| e.to_string())?;
        let t = disc2.log_spec().conv_cross_classify(&p).map_err(|e| e.to_string())?;
        ensure(h == sum && t.w_class == class && t.phi_sum == h, || format!("{p:?}: h* sum {h}, {t:?}"))?;
    }
    let mut total = 0;
    let mut axes = 0;
    for (i, (name, x)) in crosses.iter().enumerate() {
        let r = cross_envelope_verify(x, REINHARDT_SAMPLES, 100 + i as u64).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), || format!("{name}: {:?} {:?}", r.hull.violations.first(), r.axis_checks))?;
        ensure(r.h_star_checked >= REINHARDT_SAMPLES * 9 / 10, || {
            format!("{name}: only {} samples compared", r.h_star_checked)
        })?;
        let flagged: usize = x
            .blocks()
            .iter()
            .map(|(_, d)| d.axis_meets().iter().filter(|&&f| f).count())
            .sum();
        ensure(r.axis_checks.len() == flagged, || format!("{name}: {} axis witnesses for {flagged} axes", r.axis_checks.len()))?;
        total += r.h_star_checked;
        axes += r.axis_checks.len();
    }
    Ok(format!(
        "{} crosses, {total} samples compared, {axes} axis witnesses in X, 0 violations",
        crosses.len()
    ))
}

fn determinism() -> Check {
    let configs = [
        Command::CrossVerify { spec: fixture("diamond.json"), samples: 400, seed: 7 },
        Command::ReinhardtCrossVerify { spec: fixture("disc_cross.json"), samples: 200, seed: 5 },
        Command::PhiVerify { spec: fixture("point_interval.json"), samples: 30, seed: 2 },
    ];
    for cmd in configs {
        let cfg = RunConfig::new(cmd);
        let (a, b) = (run(&cfg), run(&cfg));
        ensure(a.exit_code == 0, || format!("{}: exit {} {}", cfg.command.name(), a.exit_code, a.render()))?;
        ensure(a.render() == b.render(), || format!("{}: reports differ", cfg.command.name()))?;
    }
    let spec = diamond();
    let (a, b) = (verify_prop24(&spec, 300, 9), verify_prop24(&spec, 300, 9));
    ensure(a == b, || "campaign reports differ".into())?;
    Ok("3 CLI reports byte-identical across runs; campaign reports equal".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("LP kernel self-verification", Some(LP_LIMIT), lp_certificates),
        ("dual and gauge formulations agree", Some(PHI_LIMIT), phi_formulations),
        ("range, hull invariance, rescaling, monotonicity", None, remark_suite),
        ("convex cross trichotomy", Some(CROSS_LIMIT), convex_cross),
        ("additivity on products", None, additivity),
        ("worked diamond example", None, worked_diamond),
        ("envelopes of holomorphy", None, envelopes),
        ("relative extremal closed form", None, h_star_closed_form),
        ("Reinhardt cross envelopes", None, reinhardt_cross_theorem),
        ("deterministic reports", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        let budget = limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}{budget}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}{budget}]", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
