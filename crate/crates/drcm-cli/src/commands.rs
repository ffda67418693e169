//! Subcommand implementations.

use drcm::drmonoid::{build_dr_monoid, functions_through, spans, vector_congruence, AdelicContext, DRMonoidTable, MonoidCongruence};
use drcm::mvector::{
    build_modular_vector, compare_with_sim_n, crosscheck_theta_path, degree_audit, frobenius_congruence_check, level_family,
    verify_equivariance, ModularVectorSpec, WittVector,
};
use drcm::numeric::Cx;
use drcm::quadfield::{ClassGroup, QuadField, QuadIdeal, RayClassGroup};
use drcm::recognize::RecognitionConfig;
use drcm::symplectic::{cm_point, CMPointData};
use drcm::theta::{
    classical_g1, default_radius, theta, theta_null_vector, weierstrass_p, BigComplex, ClassicalKind, Lattice, ThetaChar,
    WeberKind,
};
use serde_json::{json, Value};

use crate::parse;
use crate::{ClassicalArg, CmPreset, Command, Failure, FieldArgs, Format, FunctionKind, ModulusArgs, Output, RunConfig, SpecArgs, WeberArg};

type Res = std::result::Result<Output, Failure>;

/// Equivariance residual threshold (log2) used by `mvector-verify`.
const EQUIVARIANCE_LOG2: f64 = -64.0;

fn field(a: &FieldArgs) -> drcm::Result<QuadField> {
    QuadField::new(a.d)
}

fn modulus(a: &ModulusArgs) -> std::result::Result<(QuadField, QuadIdeal), Failure> {
    let k = field(&a.field)?;
    let f = match (&a.conductor, a.n) {
        (Some(s), _) => QuadIdeal::parse(k, s)?,
        (None, Some(n)) => QuadIdeal::rational(k, n),
        (None, None) => QuadIdeal::unit(k),
    };
    if !f.is_integral() {
        return Err(Failure::Usage(format!("conductor {f} is not integral")));
    }
    Ok((k, f))
}

fn json_only(cfg: &RunConfig, cmd: &str) -> std::result::Result<(), Failure> {
    if cfg.format == Format::Csv {
        return Err(Failure::Usage(format!("{cmd} has no CSV output")));
    }
    Ok(())
}

fn recog(cfg: &RunConfig) -> RecognitionConfig {
    RecognitionConfig { prec: cfg.prec, maxdeg: cfg.maxdeg, height_bits: cfg.height_bits, ..RecognitionConfig::default() }
}

fn cx_json(z: &Cx) -> Value {
    serde_json::to_value(BigComplex::exact(z.clone())).unwrap()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Res {
    if !matches!(cmd, Command::Drmonoid(_) | Command::MvectorBuild(_)) {
        json_only(cfg, cmd.name())?;
    }
    match cmd {
        Command::FieldInfo(a) => field_info(a),
        Command::Classgroup(a) => {
            let cl = ClassGroup::new(field(a)?);
            let mut v = to_value(&cl.presentation());
            v["order"] = json!(cl.order());
            Ok(Output::Json(v))
        }
        Command::Rayclassgroup(a) => {
            let (_, f) = modulus(a)?;
            let g = RayClassGroup::new(&f)?;
            let mut v = to_value(&g.presentation());
            v["order"] = json!(g.order());
            v["modulus"] = to_value(&f);
            v["residue_units"] = json!(g.residue_units().divisors());
            v["class_group"] = json!(g.class_group().divisors());
            Ok(Output::Json(v))
        }
        Command::Drmonoid(a) => drmonoid(a, cfg),
        Command::Theta { g, tau, k, u } => {
            let p = cfg.prec;
            let tau = parse::siegel(tau, p + 64)?;
            if tau.genus() != *g {
                return Err(Failure::Usage(format!("tau has genus {}, expected {g}", tau.genus())));
            }
            let k = parse::rationals(k)?;
            let u = parse::complexes(u, p + 64)?;
            if k.len() != *g || u.len() != *g {
                return Err(Failure::Usage("k and u need g entries".into()));
            }
            let v = theta(&ThetaChar::free(k.clone()), &u, &tau, p)?;
            Ok(Output::Json(json!({
                "value": v,
                "k": ThetaChar::free(k),
                "radius": default_radius(&u, &tau, p)?,
                "prec": p,
            })))
        }
        Command::Classical { kind, tau, a, z, weber_kind } => classical(cfg, *kind, tau, a.as_deref(), z.as_deref(), *weber_kind),
        Command::MvectorBuild(s) => {
            let (t, spec) = spec_and_table(s, cfg)?;
            let v = build_modular_vector(&spec, &t, cfg.prec, &recog(cfg))?;
            Ok(match cfg.format {
                Format::Json => Output::Json(v.to_json()),
                Format::Csv => Output::Csv(v.to_csv(&t)),
            })
        }
        Command::MvectorVerify { spec, primes, samples } => mvector_verify(spec, primes, *samples, cfg),
        Command::SimnCompare(l) => {
            let k = field(&l.field)?;
            let t = build_dr_monoid(k, &QuadIdeal::rational(k, l.n))?;
            let specs = level_family(k, l.n, cfg.prec.min(128))?;
            let vs = specs.iter().map(|s| build_modular_vector(s, &t, cfg.prec, &recog(cfg))).collect::<drcm::Result<Vec<WittVector>>>()?;
            let r = compare_with_sim_n(&vs, &t)?;
            let pass = r.refines && (r.equal || r.informational);
            let v = json!({ "report": r, "pass": pass });
            if pass {
                Ok(Output::Json(v))
            } else {
                Err(Failure::Verification(v))
            }
        }
        Command::DualityCheck { modulus: m, limit } => duality(m, *limit),
        Command::Cmpoint { preset, nulls } => {
            let data = match preset {
                CmPreset::Gaussian => CMPointData::gaussian(),
                CmPreset::Zeta5 => CMPointData::zeta5(),
            };
            let p = cm_point(&data, cfg.prec)?;
            let tau: Vec<Vec<Value>> = p.tau.tau.rows.iter().map(|r| r.iter().map(cx_json).collect()).collect();
            let mut v = json!({
                "data": data,
                "riemann_form": p.riemann,
                "report": p.report,
                "u": p.u,
                "delta": p.delta,
                "tau": tau,
                "flipped": p.flipped,
                "residual_log2": p.residual_log2,
            });
            if *nulls {
                v["theta_nulls"] = to_value(&theta_null_vector(&p.tau, &p.delta, cfg.prec)?);
            }
            if p.report.pass {
                Ok(Output::Json(v))
            } else {
                Err(Failure::Verification(v))
            }
        }
    }
}

fn field_info(a: &FieldArgs) -> Res {
    let k = field(a)?;
    let cl = ClassGroup::new(k);
    let omega = if k.disc() % 4 == 0 { format!("sqrt(-{})", k.d()) } else { format!("(1+sqrt(-{}))/2", k.d()) };
    Ok(Output::Json(json!({
        "d": k.d(),
        "disc": k.disc(),
        "name": k.name(),
        "omega": omega,
        "units": k.unit_count(),
        "class_number": cl.order(),
        "class_group": cl.divisors(),
    })))
}

fn drmonoid(a: &ModulusArgs, cfg: &RunConfig) -> Res {
    let (_, f) = modulus(a)?;
    let t = build_dr_monoid(f.field(), &f)?;
    let orbits = t.unit_orbits();
    Ok(match cfg.format {
        Format::Json => {
            let mut v = t.to_json();
            v["size"] = json!(t.len());
            v["unit_group"] = json!(t.unit_group_divisors());
            v["orbits"] = json!(orbits);
            Output::Json(v)
        }
        Format::Csv => {
            let units = t.units();
            let mut s = String::from("index,ideal,orbit,unit\n");
            for i in 0..t.len() {
                s.push_str(&format!("{i},\"{}\",\"{}\",{}\n", t.rep(i).literal(), t.label_ideal(i).literal(), units.contains(&i)));
            }
            Output::Csv(s)
        }
    })
}

fn classical(cfg: &RunConfig, kind: ClassicalArg, tau: &str, a: Option<&str>, z: Option<&str>, wk: WeberArg) -> Res {
    let p = cfg.prec;
    let lat = Lattice::from_tau(parse::complex(tau, p + 64)?)?;
    let wk = match wk {
        WeberArg::Gaussian => WeberKind::Gaussian,
        WeberArg::Eisenstein => WeberKind::Eisenstein,
        WeberArg::Generic => WeberKind::Generic,
    };
    let kind = match kind {
        ClassicalArg::Wp => ClassicalKind::WeierstrassP,
        ClassicalArg::G2 => ClassicalKind::G2,
        ClassicalArg::G3 => ClassicalKind::G3,
        ClassicalArg::J => ClassicalKind::J,
        ClassicalArg::Fricke => ClassicalKind::Fricke,
        ClassicalArg::Weber => ClassicalKind::Weber(wk),
    };
    let value = match (kind, z, a) {
        (ClassicalKind::WeierstrassP, Some(z), None) => weierstrass_p(&lat, &parse::complex(z, p + 64)?, p)?,
        (_, Some(_), _) => return Err(Failure::Usage("--z applies to wp only, without --a".into())),
        (_, None, a) => {
            let a = a.map(parse::torsion_index).transpose()?;
            classical_g1(kind, &lat, a.as_ref(), p)?
        }
    };
    Ok(Output::Json(json!({ "kind": kind, "value": value, "prec": p })))
}

fn spec_and_table(s: &SpecArgs, cfg: &RunConfig) -> std::result::Result<(DRMonoidTable, ModularVectorSpec), Failure> {
    let k = field(&s.level.field)?;
    let n = s.level.n;
    let a = parse::torsion_index(&s.a)?;
    if n % a.level() != 0 {
        return Err(Failure::Usage(format!("index {} does not have level dividing {n}", s.a)));
    }
    let spec = match s.function {
        FunctionKind::Weber => ModularVectorSpec::weber(a),
        FunctionKind::Fricke => ModularVectorSpec::fricke(a),
        FunctionKind::ThetaRatio => {
            let spec = ModularVectorSpec::single_ratio(a, n, parse::rational(&s.k)?, parse::rational(&s.l)?)?;
            if !drcm::mvector::spec_defined(&spec, k, cfg.prec.min(128))? {
                return Err(Failure::Usage("theta ratio has a pole at some residue".into()));
            }
            spec
        }
    };
    Ok((build_dr_monoid(k, &QuadIdeal::rational(k, n))?, spec))
}

fn default_primes(k: QuadField, n: i128, count: usize) -> Vec<QuadIdeal> {
    let mut out = Vec::new();
    let mut p = 2;
    while out.len() < count {
        if n % p != 0 && (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0) {
            out.extend(QuadIdeal::primes_above(k, p));
        }
        p += 1;
    }
    out.sort_by_key(|q| q.sort_key());
    out.truncate(count);
    out
}

fn mvector_verify(s: &SpecArgs, primes: &[String], samples: usize, cfg: &RunConfig) -> Res {
    let (t, spec) = spec_and_table(s, cfg)?;
    let k = t.field();
    let v = build_modular_vector(&spec, &t, cfg.prec, &recog(cfg))?;
    let eq = verify_equivariance(&v, &t, EQUIVARIANCE_LOG2);
    let degrees = degree_audit(&v, &t);
    let primes = if primes.is_empty() {
        default_primes(k, s.level.n, 2)
    } else {
        primes.iter().map(|p| QuadIdeal::parse(k, p)).collect::<drcm::Result<_>>()?
    };
    let frob = primes.iter().map(|p| frobenius_congruence_check(&v, &t, p, None)).collect::<drcm::Result<Vec<_>>>()?;
    let ctx = AdelicContext::new(k, s.level.n)?;
    let elems = ctx.elements();
    let step = (elems.len() / samples.max(1)).max(1);
    let cross = elems
        .iter()
        .step_by(step)
        .take(samples)
        .map(|x| crosscheck_theta_path(&spec, &ctx, x, cfg.prec))
        .collect::<drcm::Result<Vec<_>>>()?;
    let pass = eq.pass && degrees.iter().all(|d| d.pass) && frob.iter().all(|f| f.pass_prime) && cross.iter().all(|c| c.pass);
    let out = json!({
        "vector": v.to_json(),
        "equivariance": eq,
        "degree_audit": degrees,
        "frobenius": frob,
        "crosscheck": cross,
        "pass": pass,
    });
    if pass {
        Ok(Output::Json(out))
    } else {
        Err(Failure::Verification(out))
    }
}

fn duality(m: &ModulusArgs, limit: usize) -> Res {
    let (_, f) = modulus(m)?;
    let t = build_dr_monoid(f.field(), &f)?;
    let n = t.len();
    let mut tested = 0;
    let mut failures = Vec::new();
    'pairs: for x in 0..n {
        for y in x + 1..n {
            if tested >= limit {
                break 'pairs;
            }
            let q = MonoidCongruence::generated_by(&t, &[(x, y)]);
            if vector_congruence(&t, &functions_through(&q)) != q {
                failures.push(json!({ "pair": [x, y] }));
            }
            tested += 1;
        }
    }
    let mut families = 0;
    for x in 0..n {
        let xi: Vec<u8> = (0..n).map(|y| u8::from(x == y)).collect();
        let q = vector_congruence(&t, std::slice::from_ref(&xi));
        if !spans(&q, &xi) {
            failures.push(json!({ "indicator": x }));
        }
        families += 1;
    }
    let out = json!({
        "size": n,
        "congruences_tested": tested,
        "families_tested": families,
        "failures": failures,
        "pass": failures.is_empty(),
    });
    if failures.is_empty() {
        Ok(Output::Json(out))
    } else {
        Err(Failure::Verification(out))
    }
}
