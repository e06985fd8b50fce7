//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails. All comparisons are exact.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qr_core::corpus;
use qr_core::geometry::{construct_cone, moment_polytope, HalfSpace};
use qr_core::linalg::{q, qf, to_q, zeros};
use qr_core::localization::{kostant_partition, truncated_series_oracle, Multiplicities};
use qr_core::quasipoly::{self, FitDomain, FitOptions};
use qr_core::reduction::{kawasaki_point_sum, qr_check, OrbifoldPoint, QrCheckOptions, QrMode, ReducedLevelData};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut checked = 0usize;
    for name in corpus::NAMES {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let mut eval = Multiplicities::with_seed(&m, &rs, 1).unwrap();
        for k in 0..=10 {
            let b = common::moment_box(&m, k, 2);
            let fixed = eval.index_character(k, &b);
            let oracle = truncated_series_oracle(&m, k, &b);
            ensure(fixed == oracle, || format!("{name}, k = {k}: characters differ"))?;
            checked += b.len();
        }
    }
    Ok(format!("{} models, k <= 10, {checked} coefficients", corpus::NAMES.len()))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for name in corpus::NAMES {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let mut evals: Vec<Multiplicities> = (1..=3).map(|s| Multiplicities::with_seed(&m, &rs, s).unwrap()).collect();
        let vs: Vec<_> = evals.iter().map(|e| e.polarization().v.clone()).collect();
        ensure(vs[0] != vs[1] && vs[1] != vs[2] && vs[0] != vs[2], || format!("{name}: polarizations coincide"))?;
        for k in 0..=10 {
            let b = common::moment_box(&m, k, 2);
            let first = evals[0].m_character(k, &b);
            for e in &mut evals[1..] {
                ensure(e.m_character(k, &b) == first, || format!("{name}, k = {k}: polarizations disagree"))?;
            }
            count += 1;
        }
    }
    Ok(format!("3 polarizations, {count} (model, k) pairs"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nonzero = 0;
    for instance in 0..200 {
        let r = rng.gen_range(1..=2usize);
        let v: Vec<i64> = loop {
            let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-4..=4)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let n = rng.gen_range(0..=4usize);
        let mut gens = Vec::new();
        while gens.len() < n {
            let g: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
            let p: i64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
            if p != 0 {
                gens.push(if p > 0 { g } else { g.iter().map(|x| -x).collect() });
            }
        }
        let target: Vec<i64> = (0..r).map(|_| rng.gen_range(-10..=10)).collect();
        let dp = kostant_partition(&gens, &target, &v);
        let naive = common::naive_partitions(&gens, &target, &v);
        ensure(dp == naive, || format!("instance {instance}: gens {gens:?}, target {target:?}: {dp} vs {naive}"))?;
        if !dp.is_zero() {
            nonzero += 1;
        }
    }
    Ok(format!("200 instances, {nonzero} with a nonzero count"))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0usize;
    for name in ["su2-orbit", "p1xp1-su2-diagonal", "su3-flag"] {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let mut eval = Multiplicities::with_seed(&m, &rs, 1).unwrap();
        for k in 0..=10 {
            let b = common::moment_box(&m, k, 4);
            let c = eval.m_character(k, &b);
            for mu in b.points() {
                let value = c.coefficient(&mu);
                for w in rs.weyl_group() {
                    let img = rs.shifted_action(w, &mu);
                    if !b.contains(&img) {
                        ensure(value.is_zero(), || format!("{name}, k = {k}: image of {mu:?} leaves the box"))?;
                        continue;
                    }
                    ensure(c.coefficient(&img) == &value * BigInt::from(w.sign()), || {
                        format!("{name}, k = {k}: m at {img:?} is not the signed value at {mu:?}")
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("3 nonabelian models, {pairs} (w, mu) pairs"))
}

fn criterion_5() -> Outcome {
    let m = corpus::cp1_shifted();
    let rs = m.root_system().unwrap();
    let delta = moment_polytope(&m, &rs).unwrap();
    ensure(!delta.contains(&zeros(1)), || "0 lies in the moment polytope".into())?;
    let mut opts = QrCheckOptions::new(QrMode::Vanishing);
    opts.kmax = 20;
    let cert = qr_check(&m, &rs, &opts).map_err(|e| e.to_string())?;
    let mut eval = Multiplicities::with_seed(&m, &rs, 9).unwrap();
    for k in 1..=20 {
        ensure(eval.m(k, &[0]).is_zero(), || format!("m({k}, 0) != 0"))?;
    }
    Ok(format!("m(k,0) = 0 for 1 <= k <= 20 ({} certified)", cert.comparisons.len()))
}

fn criterion_6() -> Outcome {
    let mut held_out = 0usize;
    for name in ["s2-symmetric", "cp1", "cp2", "p1xp1-weight2"] {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let cone = construct_cone(&m, &rs, None).map_err(|e| format!("{name}: {e}"))?;
        let mut eval = Multiplicities::with_seed(&m, &rs, 1).unwrap();
        let mut opts = FitOptions::for_dimension(m.dim());
        opts.horizon = 30;
        let qp = quasipoly::fit(&mut |x: &[i64]| eval.m(x[0], &x[1..]), &cone.region, &opts).map_err(|e| format!("{name}: {e}"))?;
        ensure(qp.modulus() <= 2, || format!("{name}: period {}", qp.modulus()))?;
        for k in 1..=30 {
            for x in cone.region.points_at_depth(k) {
                let value = eval.m(k, &x[1..]);
                ensure(quasipoly::eval_int(&qp, &x) == value, || format!("{name}: fit differs from m at {x:?}"))?;
                let toric = common::toric_index(name, k, &x[1..]).unwrap();
                ensure(value == BigInt::from(toric), || format!("{name}: m differs from the lattice-point count at {x:?}"))?;
                if k > opts.horizon / 2 {
                    held_out += 1;
                }
            }
        }
    }
    Ok(format!("4 models, period <= 2, {held_out} held-out points with 15 < k <= 30"))
}

fn criterion_7() -> Outcome {
    let mut points = 0;
    for (name, order) in [("cp1", 1usize), ("p1xp1-weight2", 2)] {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let mut opts = QrCheckOptions::new(QrMode::PointCase);
        opts.kmax = 20;
        let cert = qr_check(&m, &rs, &opts).map_err(|e| format!("{name}: {e}"))?;
        let level = cert.level.as_ref().unwrap();
        ensure(level.d() == order, || format!("{name}: stabiliser of order {}", level.d()))?;
        ensure(cert.chamber_verified == Some(true), || format!("{name}: level not in the chamber of gamma"))?;
        for c in &cert.comparisons {
            let expected = if name == "cp1" { 1 } else { ((c.k - c.lambda[1]).rem_euclid(2) == 0) as i64 };
            ensure(c.right == BigInt::from(expected), || format!("{name}: reduced side at k = {}, {:?}", c.k, c.lambda))?;
        }
        points += cert.comparisons.len();
    }
    Ok(format!("{points} lattice points of C_p with k <= 20, parity law on Z/2"))
}

fn criterion_8() -> Outcome {
    let m = corpus::by_name("p1xp1-su2-diagonal").unwrap();
    let rs = m.root_system().unwrap();
    let mut eval = Multiplicities::with_seed(&m, &rs, 1).unwrap();
    for k in 1..=20 {
        let value = eval.dominant(k, &[0]).unwrap();
        ensure(value == BigInt::one(), || format!("m({k}, 0) = {value}"))?;
        ensure(value == BigInt::from(common::clebsch_gordan(k, 0)), || format!("Clebsch-Gordan disagrees at k = {k}"))?;
    }
    let level = ReducedLevelData::new(
        vec![qf(1, 2)],
        vec![vec![q(0)], vec![qf(1, 2)]],
        vec![OrbifoldPoint { gl_phase: vec![q(0), q(0)] }],
    )
    .unwrap();
    let mut opts = QrCheckOptions::new(QrMode::FitCase);
    opts.kmax = 20;
    opts.level = Some(level.clone());
    let cert = qr_check(&m, &rs, &opts).map_err(|e| e.to_string())?;
    let at_one = cert.comparisons.iter().find(|c| c.k == 1 && c.label.starts_with("fit(1,0)")).unwrap();
    ensure(at_one.left == BigInt::one() && at_one.right == BigInt::one(), || "fit(1,0) != 1".into())?;
    ensure(kawasaki_point_sum(&level, 1, &[0]) == 1, || "reduced side at (1,0) != 1".into())?;
    Ok("m(k,0) = 1 for k <= 20, fit(1,0) = reduced value = 1".into())
}

fn criterion_9() -> Outcome {
    let m = corpus::s2_symmetric();
    let rs = m.root_system().unwrap();
    let cone = construct_cone(&m, &rs, None).map_err(|e| e.to_string())?;
    ensure(cone.p.vertices() == [to_q(&[-1]), to_q(&[1])], || format!("p = {}", cone.p))?;
    let mut certs: Vec<HalfSpace> = cone.certificates().map(|h| h.halfspace.clone().unwrap().normalized()).collect();
    certs.sort_by(|a, b| a.normal.cmp(&b.normal));
    let expected = vec![HalfSpace::new(vec![q(-1)], q(1)), HalfSpace::new(vec![q(1)], q(1))];
    ensure(certs == expected, || format!("certificates {certs:?}"))?;
    let mut checked = Vec::new();
    for name in corpus::NAMES {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let delta = moment_polytope(&m, &rs).unwrap();
        if !delta.contains(&zeros(m.rank())) {
            continue;
        }
        let cone = construct_cone(&m, &rs, None).map_err(|e| format!("{name}: {e}"))?;
        ensure(cone.p.contains(&zeros(m.rank())), || format!("{name}: 0 not in p"))?;
        ensure(cone.p.dim() == delta.dim(), || format!("{name}: dim p = {} != dim delta = {}", cone.p.dim(), delta.dim()))?;
        checked.push(*name);
    }
    Ok(format!("s2-symmetric p = [-1,1] with 2 certificates; 0 in p and dim p = dim delta on {}", checked.join(", ")))
}

fn criterion_10() -> Outcome {
    let runs: &[&[&str]] = &[
        &["mult-table", "--example", "su3-flag", "--k", "1..4", "--seed", "17"],
        &["mult-table", "--example", "cp2", "--k", "0..5", "--format", "csv", "--seed", "3"],
        &["fit-qp", "--example", "p1xp1-weight2", "--seed", "5"],
        &["qr-check", "--example", "p1xp1-weight2", "--mode", "point-case", "--kmax", "8", "--seed", "2"],
        &["oracle", "--example", "p1xp1", "--k", "0..3"],
        &["examples", "su3-flag"],
    ];
    let exe = env!("CARGO_BIN_EXE_qr");
    for args in runs {
        let outputs: Vec<Vec<u8>> = ["1", "4", "4"]
            .iter()
            .map(|t| Command::new(exe).args(*args).env("QR_THREADS", t).output().expect("run qr").stdout)
            .collect();
        ensure(!outputs[0].is_empty(), || format!("{args:?}: no output"))?;
        ensure(outputs.iter().all(|o| *o == outputs[0]), || format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} commands, 3 runs each, byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("localization vs truncated series", criterion_1),
        ("polarization independence", criterion_2),
        ("partition DP vs enumeration", criterion_3),
        ("shifted Weyl antisymmetry", criterion_4),
        ("vanishing when 0 is outside the polytope", criterion_5),
        ("quasi-polynomial fit on C_p", criterion_6),
        ("point case vs orbifold sum", criterion_7),
        ("SU(2) diagonal instance", criterion_8),
        ("construction of p", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
