//! Finite Deligne-Ribet monoids `DR_f` over an imaginary quadratic field.

mod adelic;
mod congruence;

pub use adelic::{
    adelic_decode, adelic_encode, sim_n_congruence, torsion_field_galois, AdelicContext, AdelicElement,
    TorsionFieldGalois,
};
pub use congruence::{functions_through, psi_action, spans, vector_congruence, MonoidCongruence};

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::abelian::EnumeratedGroup;
use crate::error::{Error, Result};
use crate::intmath::Int;
use crate::quadfield::{enumerate_ideals, ClassGroup, QuadElem, QuadField, QuadIdeal, RayClassGroup};

/// Ideals enumerated before `build_dr_monoid` gives up.
pub const DEFAULT_DR_BUDGET: usize = 2_000_000;

/// `A ~_f B`: some `t` with `A = tB` and `t - 1 in f B^{-1}`.
pub fn dr_congruent(a: &QuadIdeal, b: &QuadIdeal, f: &QuadIdeal) -> Result<bool> {
    let k = a.field();
    let Some(g) = a.div(b)?.is_principal()? else {
        return Ok(false);
    };
    let target = f.div(b)?;
    let one = QuadElem::one();
    for u in k.units() {
        let t = k.mul(&QuadElem::from_ints(u.0, u.1), &g);
        if target.contains(&t.sub(&one)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A class of `DR_f` with its canonical (smallest) representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DRClass {
    pub conductor: QuadIdeal,
    pub rep: QuadIdeal,
}

/// Multiplication table of `DR_f` with its unit group and orbit labels.
#[derive(Debug, Clone)]
pub struct DRMonoidTable {
    field: QuadField,
    conductor: QuadIdeal,
    divisors: Vec<QuadIdeal>,
    groups: Vec<RayClassGroup>,
    reps: Vec<QuadIdeal>,
    keys: Vec<(usize, Vec<Int>)>,
    index: HashMap<(usize, Vec<Int>), usize>,
    mul: Vec<Vec<usize>>,
    identity: usize,
}

/// Enumerates integral ideals by norm, buckets them by `~_f` and tabulates the product.
pub fn build_dr_monoid(k: QuadField, f: &QuadIdeal) -> Result<DRMonoidTable> {
    DRMonoidTable::build(k, f, DEFAULT_DR_BUDGET)
}

impl DRMonoidTable {
    pub fn build(k: QuadField, f: &QuadIdeal, budget: usize) -> Result<Self> {
        if f.field() != k {
            return Err(Error::MismatchedFields(f.field().disc(), k.disc()));
        }
        if !f.is_integral() {
            return Err(Error::Invalid(format!("conductor {f} is not integral")));
        }
        let cl = ClassGroup::new(k);
        let divisors = f.divisors()?;
        let mut groups = Vec::with_capacity(divisors.len());
        for d in &divisors {
            groups.push(RayClassGroup::with_class_group(&f.div(d)?, cl.clone())?);
        }
        let target: usize = groups.iter().map(|g| g.order()).sum();
        let mut t = DRMonoidTable {
            field: k,
            conductor: f.clone(),
            divisors,
            groups,
            reps: vec![],
            keys: vec![],
            index: HashMap::new(),
            mul: vec![],
            identity: 0,
        };
        let mut by_divisor: Vec<Vec<usize>> = vec![vec![]; t.divisors.len()];
        for a in enumerate_ideals(k).take(budget) {
            let key = t.key_of(&a)?;
            if let Some(&i) = t.index.get(&key) {
                if !dr_congruent(&a, &t.reps[i], f)? {
                    return Err(Error::Verification(format!("{a} and {} share a key but are not congruent", t.reps[i])));
                }
                continue;
            }
            for &j in &by_divisor[key.0] {
                if dr_congruent(&a, &t.reps[j], f)? {
                    return Err(Error::Verification(format!("{a} and {} are congruent with distinct keys", t.reps[j])));
                }
            }
            let i = t.reps.len();
            by_divisor[key.0].push(i);
            t.index.insert(key.clone(), i);
            t.keys.push(key);
            t.reps.push(a);
            if t.reps.len() == target {
                break;
            }
        }
        if t.reps.len() < target {
            return Err(Error::EnumerationBudget(format!("{} of {target} classes of DR_{f} found", t.reps.len())));
        }
        let n = t.reps.len();
        t.identity = t.index[&t.key_of(&QuadIdeal::unit(k))?];
        let mut mul = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                let p = t.reps[i].mul(&t.reps[j])?;
                let m = t.index_of(&p)?;
                mul[i][j] = m;
                mul[j][i] = m;
            }
        }
        t.mul = mul;
        Ok(t)
    }

    /// `(divisor index of A + f, class of A (A + f)^{-1} in C_{f/d})`, a complete invariant of `~_f`.
    fn key_of(&self, a: &QuadIdeal) -> Result<(usize, Vec<Int>)> {
        let d = a.add(&self.conductor)?;
        let di = self
            .divisors
            .iter()
            .position(|x| *x == d)
            .ok_or_else(|| Error::Invalid(format!("{d} is not a divisor of {}", self.conductor)))?;
        let v = self.groups[di].dlog(&a.div(&d)?)?;
        Ok((di, v))
    }

    /// Index of the class of an integral ideal.
    pub fn index_of(&self, a: &QuadIdeal) -> Result<usize> {
        if !a.is_integral() {
            return Err(Error::Invalid(format!("{a} is not integral")));
        }
        let key = self.key_of(a)?;
        self.index.get(&key).copied().ok_or_else(|| Error::Verification(format!("class of {a} missing from the table")))
    }

    /// Index of the class of `a`, confirmed against the definition of `~_f`.
    pub fn index_of_checked(&self, a: &QuadIdeal) -> Result<usize> {
        let i = self.index_of(a)?;
        if !dr_congruent(a, &self.reps[i], &self.conductor)? {
            return Err(Error::Verification(format!("{a} is not congruent to {}", self.reps[i])));
        }
        Ok(i)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn conductor(&self) -> &QuadIdeal {
        &self.conductor
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> &QuadIdeal {
        &self.reps[i]
    }

    pub fn reps(&self) -> &[QuadIdeal] {
        &self.reps
    }

    pub fn element(&self, i: usize) -> DRClass {
        DRClass { conductor: self.conductor.clone(), rep: self.reps[i].clone() }
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i][j]
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Divisors `d | f`, in canonical order.
    pub fn divisors(&self) -> &[QuadIdeal] {
        &self.divisors
    }

    /// The ray class group `C_{f/d}` attached to the `i`-th divisor.
    pub fn component_group(&self, i: usize) -> &RayClassGroup {
        &self.groups[i]
    }

    /// Index into `divisors()` of the orbit label `rep + f`.
    pub fn label(&self, i: usize) -> usize {
        self.keys[i].0
    }

    pub fn label_ideal(&self, i: usize) -> &QuadIdeal {
        &self.divisors[self.keys[i].0]
    }

    /// Class of `rep_i (rep_i + f)^{-1}` in `C_{f/d}`.
    pub fn component_class(&self, i: usize) -> &[Int] {
        &self.keys[i].1
    }

    /// `Σ_{d|f} |C_{f/d}|`, computed from the ray class groups alone.
    pub fn expected_size(&self) -> usize {
        self.groups.iter().map(|g| g.order()).sum()
    }

    /// Indices of invertible elements.
    pub fn units(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.mul[i].contains(&self.identity)).collect()
    }

    /// Elementary divisors of the unit group, computed from the table alone.
    pub fn unit_group_divisors(&self) -> Vec<Int> {
        let units = self.units();
        let g = EnumeratedGroup::build(self.identity, units, |&x, &y| self.mul[x][y]);
        g.divisors
    }

    /// Orbits of the unit group acting by multiplication.
    pub fn unit_orbits(&self) -> Vec<Vec<usize>> {
        let units = self.units();
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = units.iter().map(|&u| self.mul[u][x]).collect();
            orbit.sort();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Exhaustive associativity, commutativity and identity check.
    pub fn check_monoid_axioms(&self) -> bool {
        let n = self.len();
        let m = &self.mul;
        (0..n).all(|x| m[self.identity][x] == x)
            && (0..n).all(|x| (0..n).all(|y| m[x][y] == m[y][x]))
            && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m[m[x][y]][z] == m[x][m[y][z]])))
    }

    /// Re-derives every table entry through the definition of `~_f`.
    pub fn check_products(&self) -> Result<bool> {
        for i in 0..self.len() {
            for j in i..self.len() {
                let p = self.reps[i].mul(&self.reps[j])?;
                if !dr_congruent(&p, &self.reps[self.mul[i][j]], &self.conductor)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "disc": self.field.disc(),
            "conductor": self.conductor,
            "elements": self.reps,
            "mul": self.mul,
            "identity": self.identity,
            "units": self.units(),
            "orbit_labels": (0..self.len()).map(|i| self.label_ideal(i).clone()).collect::<Vec<_>>(),
        })
    }
}

/// Classes grouped by orbit label `d = rep + f`.
pub fn orbit_decomposition(t: &DRMonoidTable) -> BTreeMap<QuadIdeal, Vec<usize>> {
    let mut out: BTreeMap<QuadIdeal, Vec<usize>> = BTreeMap::new();
    for i in 0..t.len() {
        out.entry(t.label_ideal(i).clone()).or_default().push(i);
    }
    out
}

/// The surjection `DR_big -> DR_small` induced on representatives, verified multiplicative and onto.
pub fn projection(big: &DRMonoidTable, small: &DRMonoidTable) -> Result<Vec<usize>> {
    if !small.conductor.divides(&big.conductor) {
        return Err(Error::NonDivisible { small: small.conductor.to_string(), big: big.conductor.to_string() });
    }
    let map = big.reps.iter().map(|r| small.index_of(r)).collect::<Result<Vec<_>>>()?;
    let mut hit = vec![false; small.len()];
    for &m in &map {
        hit[m] = true;
    }
    if !hit.iter().all(|&h| h) {
        return Err(Error::Verification("projection is not surjective".into()));
    }
    for i in 0..big.len() {
        for j in 0..big.len() {
            if map[big.mul[i][j]] != small.mul[map[i]][map[j]] {
                return Err(Error::Verification("projection is not multiplicative".into()));
            }
        }
    }
    Ok(map)
}
