//! Galois, Frobenius and congruence checks on modular vectors.

use num_traits::Zero;
use rug::{Float, Integer};
use serde::Serialize;

use super::{spec_defined, Component, ModularVectorSpec, RatioTerm, WittVector};
use crate::drmonoid::{psi_action, sim_n_congruence, vector_congruence, DRMonoidTable, MonoidCongruence};
use crate::error::{Error, Result};
use crate::intmath::Int;
use crate::numeric::Cx;
use crate::quadfield::{QuadField, QuadIdeal, Rat};
use crate::recognize::{pow2, recognize_in_field, AlgebraicValue, KElement};
use crate::theta::{BigComplex, TorsionIndex};

/// Coefficients (ascending, monic) of `prod (X - z_i)`.
fn char_poly(zs: &[BigComplex]) -> Vec<BigComplex> {
    let p = zs.first().map_or(64, |z| z.prec());
    let mut c = vec![BigComplex::exact(Cx::one(p))];
    for z in zs {
        let mut next = vec![BigComplex::exact(Cx::zero(p)); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].sub(&ci.mul(z));
        }
        c = next;
    }
    c
}

/// Per-orbit result of a field-rationality check.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub label: QuadIdeal,
    pub members: Vec<usize>,
    pub coefficients: Vec<KElement>,
    pub residual_log2: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceReport {
    pub orbits: Vec<OrbitReport>,
    pub pass: bool,
}

const MAX_DEN_BITS: u32 = 48;

fn orbit_report(t: &DRMonoidTable, k: QuadField, orbit: &[usize], zs: &[BigComplex], tol_log2: f64, integral: bool) -> OrbitReport {
    let mut coefficients = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for c in char_poly(zs) {
        match recognize_in_field(&c, k, &pow2(MAX_DEN_BITS)) {
            Ok((e, res)) => {
                worst = worst.max(res);
                if integral && !e.is_integral() {
                    pass = false;
                }
                coefficients.push(e);
            }
            Err(_) => pass = false,
        }
    }
    OrbitReport { label: t.label_ideal(orbit[0]).clone(), members: orbit.to_vec(), coefficients, residual_log2: worst, pass: pass && worst < tol_log2 }
}

/// For every unit orbit, recognizes the coefficients of `prod_{x in O} (X - v(x))` in `K`.
pub fn verify_equivariance(v: &WittVector, t: &DRMonoidTable, tol_log2: f64) -> EquivarianceReport {
    let k = t.field();
    let orbits: Vec<OrbitReport> = t
        .unit_orbits()
        .iter()
        .map(|o| {
            let zs: Vec<BigComplex> = o.iter().map(|&x| v.components[x].value.approx.clone()).collect();
            orbit_report(t, k, o, &zs, tol_log2, false)
        })
        .collect();
    let pass = orbits.iter().all(|o| o.pass);
    EquivarianceReport { orbits, pass }
}

/// Degrees against the bound `2 |C_{f/d}|` per orbit.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeAudit {
    pub label: QuadIdeal,
    pub ray_class_number: usize,
    pub degrees: Vec<usize>,
    /// Every degree divides `2 |C_{f/d}|`.
    pub pass: bool,
}

pub fn degree_audit(v: &WittVector, t: &DRMonoidTable) -> Vec<DegreeAudit> {
    t.unit_orbits()
        .iter()
        .map(|o| {
            let h = t.component_group(t.label(o[0])).order();
            let degrees: Vec<usize> = o.iter().map(|&x| v.components[x].value.degree()).collect();
            let pass = degrees.iter().all(|&d| d > 0 && (2 * h).is_multiple_of(d));
            DegreeAudit { label: t.label_ideal(o[0]).clone(), ray_class_number: h, degrees, pass }
        })
        .collect()
}

/// `(psi_p v)(x) = v(p x)`.
pub fn lambda_action(v: &WittVector, t: &DRMonoidTable, p: &QuadIdeal) -> Result<WittVector> {
    let moved: Vec<Component> = psi_action(t, &v.components, p)?;
    let components = moved
        .into_iter()
        .enumerate()
        .map(|(x, c)| Component { class: x, element: None, value: c.value, flags: c.flags })
        .collect();
    Ok(WittVector { disc: v.disc, conductor: v.conductor.clone(), spec: None, prec: v.prec, components })
}

/// Outcome of the congruence `psi_p xi = xi^{Np}` per orbit.
#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusReport {
    pub prime: QuadIdeal,
    pub norm: Int,
    pub denominator: String,
    /// `e` with `p^e = (pi)` principal.
    pub class_order: u32,
    pub generator: String,
    /// Divisibility of `D psi_p xi - (D xi)^{Np}` by `p`, per orbit.
    pub by_prime: Vec<OrbitReport>,
    /// Divisibility by the rational integer `Np`, per orbit.
    pub by_norm: Vec<OrbitReport>,
    pub pass_prime: bool,
    pub pass_norm: bool,
}

/// Smallest `D <= budget` making every `D v(x)` an algebraic integer.
pub fn find_denominator(values: &[&AlgebraicValue], budget: u64) -> Option<Integer> {
    'outer: for d in 1..=budget {
        let d = Integer::from(d);
        for v in values {
            let n = v.degree();
            let lead = v.leading()?;
            for (i, c) in v.minpoly.iter().enumerate() {
                let scaled = c * Integer::from(rug::ops::Pow::pow(&d, (n - i) as u32));
                if !scaled.is_divisible(lead) {
                    continue 'outer;
                }
            }
        }
        return Some(d);
    }
    None
}

pub const DENOMINATOR_BUDGET: u64 = 10_000;

/// Checks that `D psi_p v(x) - (D v(x))^{Np}` is divisible by `p` (and reports divisibility by `Np`).
pub fn frobenius_congruence_check(v: &WittVector, t: &DRMonoidTable, p: &QuadIdeal, denominator: Option<Integer>) -> Result<FrobeniusReport> {
    let k = t.field();
    let fac = p.factor()?;
    if fac.len() != 1 || fac[0].1 != 1 {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if !v.fully_recognized() {
        return Err(Error::RecognitionFailed("vector has unrecognized components".into()));
    }
    let vals = v.values();
    let d = match denominator {
        Some(d) => d,
        None => find_denominator(&vals, DENOMINATOR_BUDGET)
            .ok_or_else(|| Error::EnumerationBudget(format!("no denominator up to {DENOMINATOR_BUDGET}")))?,
    };
    let np = p.norm_int();
    let (e, pi) = (1..=64u32)
        .find_map(|e| p.pow(e).is_principal().ok().flatten().map(|g| (e, g)))
        .ok_or_else(|| Error::EnumerationBudget(format!("no principal power of {p}")))?;
    let lifted: Vec<Component> = psi_action(t, &v.components, p)?;

    let bits = v.prec.max(128) * 4 + 64 * np as u32;
    let refine = |a: &AlgebraicValue| a.refine(bits).ok_or_else(|| Error::Verification("Newton refinement left the ball".into()));
    let dc = Cx::real(Float::with_val(bits, &d));
    let pic = {
        let (x, y) = pi.to_float(&k, bits);
        Cx::new(x, y)
    };
    let npc = Cx::from_int(bits, np);
    let tiny = Float::with_val(30, 1) >> (bits as i32 - 64);
    let mut by_prime = Vec::new();
    let mut by_norm = Vec::new();
    for o in t.unit_orbits() {
        let mut alpha = Vec::new();
        for &x in &o {
            let a = dc.mul(&refine(&lifted[x].value)?).sub(&dc.mul(&refine(vals[x])?).powu(np as u32));
            alpha.push(a);
        }
        let over_p: Vec<BigComplex> = alpha.iter().map(|a| BigComplex::new(a.powu(e).div(&pic), tiny.clone())).collect();
        let over_n: Vec<BigComplex> = alpha.iter().map(|a| BigComplex::new(a.div(&npc), tiny.clone())).collect();
        let tol = -(bits as f64) / 4.0;
        by_prime.push(orbit_report(t, k, &o, &over_p, tol, true));
        by_norm.push(orbit_report(t, k, &o, &over_n, tol, true));
    }
    let pass_prime = by_prime.iter().all(|r| r.pass);
    let pass_norm = by_norm.iter().all(|r| r.pass);
    Ok(FrobeniusReport {
        prime: p.clone(),
        norm: np,
        denominator: d.to_string(),
        class_order: e,
        generator: pi.display(&k),
        by_prime,
        by_norm,
        pass_prime,
        pass_norm,
    })
}

/// Labels components by value: equal minimal polynomials and numerically equal approximations.
pub fn value_labels(v: &WittVector) -> Result<Vec<usize>> {
    let tol = Float::with_val(30, 1) >> (v.prec as i32 / 2);
    let mut reps: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(v.len());
    for (x, c) in v.components.iter().enumerate() {
        let mut found = None;
        for (l, &r) in reps.iter().enumerate() {
            let other = &v.components[r].value;
            let same_poly = !c.value.is_recognized() || !other.is_recognized() || c.value.minpoly == other.minpoly;
            let dist = c.value.approx.v.dist(&other.approx.v);
            let scale = Float::with_val(30, c.value.approx.v.abs().to_f64().max(1.0));
            let close = dist <= Float::with_val(30, &tol * &scale);
            if same_poly && close {
                found = Some(l);
                break;
            }
            let radius = Float::with_val(30, &c.value.approx.err + &other.approx.err) * 4u32;
            if same_poly && dist <= radius {
                return Err(Error::PrecisionTooLow(v.prec));
            }
        }
        labels.push(found.unwrap_or_else(|| {
            reps.push(x);
            reps.len() - 1
        }));
    }
    Ok(labels)
}

/// `D_xi`: `x ~ y` iff `xi(xz) = xi(yz)` for all `z`.
pub fn congruence_of_vector(v: &WittVector, t: &DRMonoidTable) -> Result<MonoidCongruence> {
    Ok(vector_congruence(t, &[value_labels(v)?]))
}

#[derive(Debug, Clone, Serialize)]
pub struct SimNReport {
    pub family_size: usize,
    pub family_blocks: Vec<Vec<usize>>,
    pub sim_n_blocks: Vec<Vec<usize>>,
    /// The family congruence refines `~_N`.
    pub refines: bool,
    pub equal: bool,
    /// Whether equality is asserted for this field or only reported.
    pub informational: bool,
}

fn refines(fine: &MonoidCongruence, coarse: &MonoidCongruence) -> bool {
    let n = fine.len();
    (0..n).all(|x| (0..n).all(|y| !fine.same(x, y) || coarse.same(x, y)))
}

/// Compares the congruence cut out by a family of vectors with the adelic `~_N`.
pub fn compare_with_sim_n(vs: &[WittVector], t: &DRMonoidTable) -> Result<SimNReport> {
    let labels = vs.iter().map(value_labels).collect::<Result<Vec<_>>>()?;
    let fam = vector_congruence(t, &labels);
    let sim = sim_n_congruence(t)?;
    let r = refines(&fam, &sim);
    let equal = r && refines(&sim, &fam);
    Ok(SimNReport {
        family_size: vs.len(),
        family_blocks: fam.blocks(),
        sim_n_blocks: sim.blocks(),
        refines: r,
        equal,
        informational: t.field().d() != 1,
    })
}

/// Weber vectors for every `a` in `(N^{-1} Z / Z)^2` and the quotients `theta^{j/N} / theta^0` that are defined.
pub fn level_family(k: QuadField, n: Int, prec: u32) -> Result<Vec<ModularVectorSpec>> {
    let mut out = Vec::new();
    for a1 in 0..n {
        for a2 in 0..n {
            let a = TorsionIndex::new(vec![Rat::new(a1, n)], vec![Rat::new(a2, n)]);
            out.push(ModularVectorSpec::weber(a.clone()));
            if a.is_zero() {
                continue;
            }
            for j in 1..n {
                let s = ModularVectorSpec::theta_ratio(a.clone(), n, vec![RatioTerm { coeff: Rat::from(1), k: Rat::new(j, n), l: Rat::zero() }])?;
                if spec_defined(&s, k, prec)? {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drmonoid::build_dr_monoid;
    use crate::mvector::build_modular_vector;
    use crate::recognize::RecognitionConfig;

    fn weber(k: QuadField, n: Int, a1: Int, a2: Int) -> (DRMonoidTable, WittVector) {
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, n)).unwrap();
        let a = TorsionIndex::new(vec![Rat::new(a1, n)], vec![Rat::new(a2, n)]);
        let v = build_modular_vector(&ModularVectorSpec::weber(a), &t, 256, &RecognitionConfig::default()).unwrap();
        (t, v)
    }

    #[test]
    fn level_three_equivariance_and_degrees() {
        let (t, v) = weber(QuadField::gaussian(), 3, 0, 1);
        assert!(v.fully_recognized(), "{:?}", v.flagged(super::super::FLAG_UNRECOGNIZED));
        let r = verify_equivariance(&v, &t, -64.0);
        assert!(r.pass, "{r:?}");
        assert!(degree_audit(&v, &t).iter().all(|a| a.pass));
    }

    #[test]
    fn frobenius_at_level_two() {
        let k = QuadField::gaussian();
        let (t, v) = weber(k, 2, 0, 1);
        for p in [QuadIdeal::rational(k, 3), QuadIdeal::principal_int(k, (2, 1)).unwrap()] {
            let r = frobenius_congruence_check(&v, &t, &p, None).unwrap();
            assert!(r.pass_prime, "{r:?}");
        }
    }

    #[test]
    fn family_matches_sim_n() {
        let k = QuadField::gaussian();
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, 3)).unwrap();
        let specs = level_family(k, 3, 128).unwrap();
        let vs: Vec<WittVector> = specs
            .iter()
            .map(|s| build_modular_vector(s, &t, 192, &RecognitionConfig::default()).unwrap())
            .collect();
        let r = compare_with_sim_n(&vs, &t).unwrap();
        assert!(r.equal, "{r:?}");
    }

    #[test]
    fn char_poly_expands() {
        let p = 64;
        let zs = [BigComplex::from_int(p, 2), BigComplex::from_int(p, 3)];
        let c = char_poly(&zs);
        let want = [6, -5, 1];
        for (ci, w) in c.iter().zip(want) {
            assert!((ci.v.re.to_f64() - w as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_action_is_index_translation() {
        let k = QuadField::gaussian();
        let (t, v) = weber(k, 3, 1, 2);
        let spec = v.spec.clone().unwrap();
        for pi in [(2, 1), (3, 0), (1, 1)] {
            let p = QuadIdeal::principal_int(k, pi).unwrap();
            let moved = lambda_action(&v, &t, &p).unwrap();
            let direct = build_modular_vector(&spec.translate(k, pi), &t, 256, &RecognitionConfig::default()).unwrap();
            for (a, b) in moved.components.iter().zip(&direct.components) {
                assert_eq!(a.value.minpoly, b.value.minpoly, "pi = {pi:?}");
            }
        }
    }
}
