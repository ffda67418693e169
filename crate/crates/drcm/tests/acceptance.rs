//! Acceptance criteria 1-11; prints one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use drcm::drmonoid::{build_dr_monoid, functions_through, sim_n_congruence, spans, vector_congruence, AdelicContext, MonoidCongruence};
use drcm::intmath::{Int, Mat};
use drcm::mvector::{
    build_modular_vector, compare_with_sim_n, crosscheck_theta_path, degree_audit, frobenius_congruence_check, level_family,
    verify_equivariance, ModularVectorSpec,
};
use drcm::numeric::{pi, Cx};
use drcm::quadfield::{enumerate_ideals, QuadField, QuadIdeal, RayClassGroup, Rat};
use drcm::recognize::{recognize, RecognitionConfig};
use drcm::symplectic::{cm_point, frobenius_reduce, j_delta, AlternatingIntMatrix, CMPointData, SiegelPoint};
use drcm::theta::{default_radius, j_invariant, siegel_from_f64, theta, theta_null_vector, Lattice, ThetaChar, TorsionIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

fn gaussian() -> QuadField {
    QuadField::gaussian()
}

fn idx(n: Int, a1: Int, a2: Int) -> TorsionIndex {
    TorsionIndex::new(vec![Rat::new(a1, n)], vec![Rat::new(a2, n)])
}

fn crit1() -> Outcome {
    let mut tables = 0;
    for d in [1, 2, 3, 5, 7] {
        let k = QuadField::new(d).map_err(e)?;
        for f in enumerate_ideals(k).take_while(|f| f.norm_int() <= 50) {
            let t = build_dr_monoid(k, &f).map_err(e)?;
            let expected: usize = f
                .divisors()
                .map_err(e)?
                .iter()
                .map(|dd| RayClassGroup::new(&f.div(dd).unwrap()).map(|g| g.order_from_sequence()))
                .sum::<drcm::Result<usize>>()
                .map_err(e)?;
            ensure(t.len() == expected, format!("d={d} f={f}: |DR|={} expected {expected}", t.len()))?;
            let cf = RayClassGroup::new(&f).map_err(e)?;
            ensure(t.unit_group_divisors() == cf.divisors(), format!("d={d} f={f}: unit group"))?;
            for o in t.unit_orbits() {
                let l = t.label(o[0]);
                let want = RayClassGroup::new(&f.div(t.label_ideal(o[0])).unwrap()).map_err(e)?.order_from_sequence();
                ensure(o.iter().all(|&x| t.label(x) == l) && o.len() == want, format!("d={d} f={f}: orbit size"))?;
            }
            tables += 1;
        }
    }
    Ok(format!("{tables} monoids"))
}

/// Direct summation of `exp(pi i w^t tau w + 2 pi i w.u)` over `w in k + Z^g`, `|w_i - k_i| <= r`.
fn oracle_theta(k: &[Rat], u: &[Cx], tau: &SiegelPoint, r: i64, prec: u32) -> Cx {
    let g = k.len();
    let p = pi(prec);
    let t: Vec<Vec<Cx>> = tau.tau.rows.iter().map(|row| row.iter().map(|z| z.with_prec(prec)).collect()).collect();
    let mut acc = Cx::zero(prec);
    let side = (2 * r + 1) as usize;
    for flat in 0..side.pow(g as u32) {
        let mut rem = flat;
        let w: Vec<Cx> = (0..g)
            .map(|i| {
                let n = (rem % side) as i64 - r;
                rem /= side;
                Cx::from_rat(prec, &(k[i] + Rat::from(n as Int)), &Rat::from(0))
            })
            .collect();
        let mut q = Cx::zero(prec);
        for i in 0..g {
            for j in 0..g {
                q = q.add(&w[i].mul(&t[i][j]).mul(&w[j]));
            }
        }
        let mut lin = Cx::zero(prec);
        for i in 0..g {
            lin = lin.add(&w[i].mul(&u[i].with_prec(prec)));
        }
        let arg = q.add(&lin.mul_int(2)).mul(&Cx::i(prec)).scale(&p);
        acc = acc.add(&arg.exp());
    }
    acc
}

fn random_point(rng: &mut ChaCha8Rng, g: usize, prec: u32) -> (Vec<Rat>, Vec<Cx>, SiegelPoint) {
    let mut m = vec![vec![(0.0, 0.0); g]; g];
    for i in 0..g {
        for j in i..g {
            let x = rng.gen_range(-0.5..0.5);
            let y = if i == j { rng.gen_range(0.8..1.5) } else { rng.gen_range(-0.3..0.3) };
            m[i][j] = (x, y);
            m[j][i] = (x, y);
        }
    }
    let tau = siegel_from_f64(&m, prec).unwrap();
    let den: Int = rng.gen_range(1..=5);
    let k: Vec<Rat> = (0..g).map(|_| Rat::new(rng.gen_range(0..den), den)).collect();
    let u: Vec<Cx> = (0..g).map(|_| Cx::from_f64(prec, rng.gen_range(0.0..1.0), rng.gen_range(-0.2..0.2))).collect();
    (k, u, tau)
}

fn crit2() -> Outcome {
    let prec = 128;
    let tol = Float::with_val(30, 1) >> 120;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = f64::NEG_INFINITY;
    for inst in 0..20 {
        let g = if inst < 10 { 1 } else { 2 };
        let (k, u, tau) = random_point(&mut rng, g, prec);
        let ch = ThetaChar::free(k.clone());
        let th = theta(&ch, &u, &tau, prec).map_err(e)?;
        let r = default_radius(&u, &tau, prec).map_err(e)? as i64;
        let oracle = oracle_theta(&k, &u, &tau, 2 * (r + 1), prec + 64);
        let d = th.v.with_prec(prec + 64).dist(&oracle);
        worst = worst.max(d.to_f64().log2());
        ensure(d < tol, format!("instance {inst}: oracle distance 2^{:.1}", d.to_f64().log2()))?;

        // theta^k(u + e_j) = e(k_j) theta^k(u)
        // theta^k(u + tau e_j) = e(-tau_jj / 2 - u_j) theta^k(u)
        // theta^{k+b}(u) = e(b^t tau b / 2 + b.u) theta^k(u + tau b)
        // theta^{-k}(-u) = theta^k(u)
        for j in 0..g {
            let mut shifted = u.clone();
            shifted[j] = shifted[j].add(&Cx::one(prec));
            let lhs = theta(&ch, &shifted, &tau, prec).map_err(e)?;
            let rhs = th.v.mul(&Cx::from_rat(prec, &k[j], &Rat::from(0)).exp2pii());
            ensure(lhs.v.dist(&rhs) < tol, format!("instance {inst}: real period {j}"))?;

            let mut shifted = u.clone();
            for (i, s) in shifted.iter_mut().enumerate() {
                *s = s.add(&tau.tau.rows[i][j]);
            }
            let lhs = theta(&ch, &shifted, &tau, prec).map_err(e)?;
            let phase = tau.tau.rows[j][j].mul(&Cx::from_f64(prec, -0.5, 0.0)).sub(&u[j]).exp2pii();
            let d = lhs.v.div(&phase).dist(&th.v);
            ensure(d < tol, format!("instance {inst}: tau period {j}: 2^{:.1}", d.to_f64().log2()))?;
        }
        let b: Vec<Rat> = (0..g).map(|_| Rat::new(rng.gen_range(1..3), 3)).collect();
        let kb: Vec<Rat> = k.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = theta(&ThetaChar::free(kb), &u, &tau, prec).map_err(e)?;
        let bc: Vec<Cx> = b.iter().map(|x| Cx::from_rat(prec, x, &Rat::from(0))).collect();
        let mut moved = u.clone();
        let mut btb = Cx::zero(prec);
        let mut bu = Cx::zero(prec);
        for i in 0..g {
            for j in 0..g {
                moved[i] = moved[i].add(&tau.tau.rows[i][j].mul(&bc[j]));
                btb = btb.add(&bc[i].mul(&tau.tau.rows[i][j]).mul(&bc[j]));
            }
            bu = bu.add(&bc[i].mul(&u[i]));
        }
        let rhs = theta(&ch, &moved, &tau, prec).map_err(e)?;
        let phase = btb.mul(&Cx::from_f64(prec, 0.5, 0.0)).add(&bu).exp2pii();
        let d = lhs.v.dist(&rhs.v.mul(&phase));
        ensure(d < tol, format!("instance {inst}: reindexing: 2^{:.1}", d.to_f64().log2()))?;
        let neg: Vec<Cx> = u.iter().map(Cx::neg).collect();
        let lhs = theta(&ch.neg(), &neg, &tau, prec).map_err(e)?;
        ensure(lhs.v.dist(&th.v) < tol, format!("instance {inst}: characteristic negation"))?;
    }
    Ok(format!("worst oracle distance 2^{worst:.1}"))
}

fn crit3() -> Outcome {
    let prec = 256;
    let cfg = RecognitionConfig::default();
    let k3 = QuadField::new(3).map_err(e)?;
    let (wr, wi) = k3.omega_float(prec + 64);
    for (tau, want) in [(Cx::i(prec + 64), 1728), (Cx::new(wr, wi), 0)] {
        let j = j_invariant(&Lattice::from_tau(tau).map_err(e)?, prec + 32).map_err(e)?;
        let v = recognize(&j.with_prec(prec), &cfg).map_err(e)?;
        ensure(v.as_rational() == Some(rug::Rational::from(want)), format!("j recognized as {:?}", v.minpoly))?;
    }
    let k = gaussian();
    let mut degrees = Vec::new();
    for n in [2, 3] {
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, n)).map_err(e)?;
        for a in [idx(n, 0, 1), idx(n, 1, 1)] {
            let v = build_modular_vector(&ModularVectorSpec::weber(a), &t, prec, &cfg).map_err(e)?;
            ensure(v.fully_recognized(), format!("N={n}: unrecognized components"))?;
            for audit in degree_audit(&v, &t) {
                ensure(audit.pass, format!("N={n}: degrees {:?} vs 2*{}", audit.degrees, audit.ray_class_number))?;
                degrees.extend(audit.degrees);
            }
        }
    }
    Ok(format!("max degree {}", degrees.iter().max().unwrap_or(&0)))
}

fn crit4() -> Outcome {
    let k = gaussian();
    let t = build_dr_monoid(k, &QuadIdeal::rational(k, 3)).map_err(e)?;
    let v = build_modular_vector(&ModularVectorSpec::weber(idx(3, 0, 1)), &t, 256, &RecognitionConfig::default()).map_err(e)?;
    let r = verify_equivariance(&v, &t, -64.0);
    let worst = r.orbits.iter().map(|o| o.residual_log2).fold(f64::NEG_INFINITY, f64::max);
    ensure(r.pass, format!("orbits {:?}", r.orbits.iter().map(|o| o.pass).collect::<Vec<_>>()))?;
    Ok(format!("{} orbits, worst residual 2^{worst:.1}", r.orbits.len()))
}

fn crit5() -> Outcome {
    let k = gaussian();
    for n in [2, 3, 4, 5] {
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, n)).map_err(e)?;
        let sim = sim_n_congruence(&t).map_err(e)?;
        ensure(sim.blocks() == MonoidCongruence::identity(t.len()).blocks(), format!("N={n}: {:?}", sim.blocks()))?;
    }
    let k5 = QuadField::new(5).map_err(e)?;
    let mut info = Vec::new();
    for n in [2, 3] {
        let t = build_dr_monoid(k5, &QuadIdeal::rational(k5, n)).map_err(e)?;
        let sim = sim_n_congruence(&t).map_err(e)?;
        info.push(format!("Q(sqrt-5) N={n}: {} blocks on {} classes", sim.block_count(), t.len()));
    }
    Ok(info.join("; "))
}

fn crit6() -> Outcome {
    let k = gaussian();
    let t = build_dr_monoid(k, &QuadIdeal::rational(k, 3)).map_err(e)?;
    let specs = level_family(k, 3, 128).map_err(e)?;
    let vs = specs
        .iter()
        .map(|s| build_modular_vector(s, &t, 192, &RecognitionConfig::default()))
        .collect::<drcm::Result<Vec<_>>>()
        .map_err(e)?;
    let r = compare_with_sim_n(&vs, &t).map_err(e)?;
    ensure(r.equal, format!("family {:?} vs sim_N {:?}", r.family_blocks, r.sim_n_blocks))?;
    Ok(format!("{} specs, {} blocks", vs.len(), r.sim_n_blocks.len()))
}

fn crit7() -> Outcome {
    let k = gaussian();
    let ctx = AdelicContext::new(k, 4).map_err(e)?;
    let elems = ctx.elements();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let x = &elems[rng.gen_range(0..elems.len())];
        let a = loop {
            let a = idx(4, rng.gen_range(0..4), rng.gen_range(0..4));
            if !a.is_zero() {
                break a;
            }
        };
        let r = crosscheck_theta_path(&ModularVectorSpec::weber(a.clone()), &ctx, x, 192).map_err(e)?;
        let scale = r.lattice.v.abs().to_f64().max(1.0).log2();
        worst = worst.max(r.diff_log2 - scale);
        ensure(r.coords_match, format!("{x:?} a={a:?}: torsion coordinates differ"))?;
        ensure(r.diff_log2 - scale < -180.0, format!("{x:?} a={a:?}: distance 2^{:.1}", r.diff_log2))?;
    }
    Ok(format!("worst relative distance 2^{worst:.1}"))
}

fn crit8() -> Outcome {
    let k = gaussian();
    let t = build_dr_monoid(k, &QuadIdeal::rational(k, 2)).map_err(e)?;
    let v = build_modular_vector(&ModularVectorSpec::weber(idx(2, 0, 1)), &t, 256, &RecognitionConfig::default()).map_err(e)?;
    let mut out = Vec::new();
    for p in [QuadIdeal::rational(k, 3), QuadIdeal::principal_int(k, (2, 1)).map_err(e)?] {
        let r = frobenius_congruence_check(&v, &t, &p, None).map_err(e)?;
        ensure(r.pass_norm, format!("{p}: not divisible by N p = {}", r.norm))?;
        ensure(r.pass_prime, format!("{p}: not divisible by p"))?;
        out.push(format!("{p}: D={}", r.denominator));
    }
    Ok(out.join(", "))
}

fn crit9() -> Outcome {
    let k = gaussian();
    let t = build_dr_monoid(k, &QuadIdeal::rational(k, 6)).map_err(e)?;
    let n = t.len();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..4)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let q = MonoidCongruence::generated_by(&t, &pairs);
        let back = vector_congruence(&t, &functions_through(&q));
        ensure(back.blocks() == q.blocks(), format!("round trip failed for {pairs:?}"))?;
    }
    for _ in 0..3 {
        let fam: Vec<Vec<u32>> = (0..rng.gen_range(1..4)).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
        let q = vector_congruence(&t, &fam);
        ensure(fam.iter().all(|xi| spans(&q, xi)), "family not spanned")?;
    }
    Ok(format!("|DR_(6)| = {n}"))
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut m: Mat = (0..n).map(|i| (0..n).map(|j| Int::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            m.swap(0, i);
            continue;
        }
        let c: Int = rng.gen_range(-2..=2);
        for col in 0..n {
            let v = m[j][col];
            m[i][col] += c * v;
        }
    }
    m
}

fn congruent(u: &Mat, e: &Mat) -> Mat {
    let n = e.len();
    let ue: Mat = (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| u[i][l] * e[l][j]).sum()).collect()).collect();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| ue[i][l] * u[j][l]).sum()).collect()).collect()
}

fn crit10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 100 {
        let g = rng.gen_range(1..=3);
        let n = 2 * g;
        let mut m: Mat = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v: Int = rng.gen_range(-12..=12);
                m[i][j] = v;
                m[j][i] = -v;
            }
        }
        let Ok(em) = AlternatingIntMatrix::new(m.clone()) else { continue };
        let Ok((u, delta)) = frobenius_reduce(&em) else { continue };
        ensure(congruent(&u, &m) == j_delta(&delta.d), format!("U E U^t != J_delta for {m:?}"))?;
        ensure(delta.d.windows(2).all(|w| w[1] % w[0] == 0) && delta.d[0] > 0, format!("divisor chain {:?}", delta.d))?;
        let v = random_unimodular(&mut rng, n);
        let (_, d2) = frobenius_reduce(&AlternatingIntMatrix::new(congruent(&v, &m)).map_err(e)?).map_err(e)?;
        ensure(d2.d == delta.d, format!("type changed under congruence: {:?} vs {:?}", delta.d, d2.d))?;
        done += 1;
    }
    Ok("100 matrices".into())
}

fn crit11() -> Outcome {
    let data = CMPointData::zeta5();
    let p = cm_point(&data, 128).map_err(e)?;
    ensure(p.report.pass, format!("{:?}", p.report))?;
    ensure(p.residual_log2 < -112.0, format!("reconstruction residual 2^{:.1}", p.residual_log2))?;
    let v = theta_null_vector(&p.tau, &p.delta, 128).map_err(e)?;
    let p2 = cm_point(&data, 256).map_err(e)?;
    let v2 = theta_null_vector(&p2.tau, &p2.delta, 256).map_err(e)?;
    ensure(v.len() == v2.len(), "null vector length changed")?;
    let tol = Float::with_val(30, 1) >> 100;
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in v.iter().zip(&v2) {
        ensure(a.v.re.is_finite() && a.v.im.is_finite() && a.err.is_finite(), "non-finite theta null")?;
        let d = a.v.dist(&b.v.with_prec(128));
        worst = worst.max(d.to_f64().log2());
        ensure(d < tol, format!("precision doubling moved a null value by 2^{:.1}", d.to_f64().log2()))?;
    }
    Ok(format!("delta {:?}, {} nulls, doubling drift 2^{worst:.1}", p.delta.d, v.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "DR structure", crit1, Duration::from_secs(120)),
        (2, "theta kernel", crit2, Duration::from_secs(60)),
        (3, "CM special values", crit3, Duration::from_secs(120)),
        (4, "equivariance", crit4, Duration::MAX),
        (5, "adelic sim_N vs DR", crit5, Duration::MAX),
        (6, "analytic/adelic agreement", crit6, Duration::MAX),
        (7, "cross-path consistency", crit7, Duration::MAX),
        (8, "Frobenius congruence", crit8, Duration::MAX),
        (9, "Galois correspondence", crit9, Duration::MAX),
        (10, "symplectic reduction", crit10, Duration::MAX),
        (11, "genus-2 CM point", crit11, Duration::MAX),
    ];
    let only: Option<u32> = std::env::var("DRCM_CRITERION").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (n, name, f, budget) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let el = start.elapsed();
        let res = match res {
            Ok(m) if el > budget => Err(format!("{m}; over runtime budget")),
            r => r,
        };
        match res {
            Ok(m) => println!("PASS criterion {n:>2} ({name}) [{:.2}s]: {m}", el.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {n:>2} ({name}) [{:.2}s]: {m}", el.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
