//! Finite abelian groups: presentations by elementary divisors and discrete logarithms.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::intmath::{smith, Int};

/// A finite abelian group `⊕ Z/e_i` with `e_i | e_{i+1}`, together with generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupPresentation<G> {
    pub divisors: Vec<u64>,
    pub generators: Vec<G>,
}

impl<G> AbelianGroupPresentation<G> {
    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Reduces an exponent vector into the canonical box `0 <= x_i < e_i`.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        v.iter()
            .zip(&self.divisors)
            .map(|(x, &e)| x.rem_euclid(e as Int))
            .collect()
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let s: Vec<Int> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        let s: Vec<Int> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    /// All elements of the group as reduced exponent vectors, in lexicographic order.
    pub fn all_vectors(&self) -> Vec<Vec<Int>> {
        let mut out = vec![Vec::new()];
        for &e in &self.divisors {
            let mut next = Vec::with_capacity(out.len() * e as usize);
            for v in &out {
                for x in 0..e as Int {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

/// Change of basis from a relation lattice to elementary-divisor coordinates.
#[derive(Debug, Clone)]
pub struct SmithBasis {
    pub divisors: Vec<Int>,
    q: Vec<Vec<Int>>,
    keep: Vec<usize>,
}

impl SmithBasis {
    /// `relations` are rows spanning the kernel of `Z^cols -> G`.
    pub fn new(relations: &[Vec<Int>], cols: usize) -> Self {
        let s = smith(&relations.to_vec(), cols);
        let mut d = s.d.clone();
        d.resize(cols, 0);
        let keep: Vec<usize> = (0..cols).filter(|&i| d[i] != 1).collect();
        assert!(keep.iter().all(|&i| d[i] > 0), "relation lattice must have full rank");
        SmithBasis { divisors: keep.iter().map(|&i| d[i]).collect(), q: s.q, keep }
    }

    pub fn apply(&self, raw: &[Int]) -> Vec<Int> {
        self.keep
            .iter()
            .zip(&self.divisors)
            .map(|(&j, &e)| {
                let x: Int = raw.iter().enumerate().map(|(i, r)| r * self.q[i][j]).sum();
                x.rem_euclid(e)
            })
            .collect()
    }
}

/// A finite abelian group known through an explicit enumeration of its elements.
#[derive(Debug, Clone)]
pub struct EnumeratedGroup<E: Hash + Eq + Clone> {
    pub divisors: Vec<Int>,
    pub generators: Vec<E>,
    table: HashMap<E, Vec<Int>>,
    identity: E,
}

impl<E: Hash + Eq + Clone> EnumeratedGroup<E> {
    /// Builds the group generated by `candidates` under `mul`.
    pub fn build<I, F>(identity: E, candidates: I, mul: F) -> Self
    where
        I: IntoIterator<Item = E>,
        F: Fn(&E, &E) -> E,
    {
        let mut table: HashMap<E, Vec<Int>> = HashMap::new();
        table.insert(identity.clone(), Vec::new());
        let mut relations: Vec<Vec<Int>> = Vec::new();
        let mut k = 0usize;
        for g in candidates {
            if table.contains_key(&g) {
                continue;
            }
            let mut powers = vec![identity.clone(), g.clone()];
            let m = loop {
                let last = powers.last().unwrap();
                if table.contains_key(last) {
                    break powers.len() - 1;
                }
                let next = mul(last, &g);
                powers.push(next);
            };
            let hit = table[&powers[m]].clone();
            let mut rel: Vec<Int> = hit.iter().map(|x| -x).collect();
            rel.resize(k, 0);
            rel.push(m as Int);
            for r in relations.iter_mut() {
                r.push(0);
            }
            relations.push(rel);
            let old: Vec<(E, Vec<Int>)> = table.iter().map(|(e, v)| (e.clone(), v.clone())).collect();
            for (e, v) in &old {
                let mut v0 = v.clone();
                v0.resize(k, 0);
                v0.push(0);
                table.insert(e.clone(), v0);
            }
            for (i, gi) in powers.iter().enumerate().take(m).skip(1) {
                for (e, v) in &old {
                    let mut w = v.clone();
                    w.resize(k, 0);
                    w.push(i as Int);
                    table.insert(mul(gi, e), w);
                }
            }
            k += 1;
        }
        let basis = SmithBasis::new(&relations, k);
        let mut generators = vec![None; basis.divisors.len()];
        let mut out = HashMap::with_capacity(table.len());
        for (e, raw) in table {
            let mut r = raw;
            r.resize(k, 0);
            let v = basis.apply(&r);
            for (i, slot) in generators.iter_mut().enumerate() {
                if v.iter().enumerate().all(|(j, &x)| x == Int::from(i == j)) {
                    *slot = Some(e.clone());
                }
            }
            out.insert(e, v);
        }
        EnumeratedGroup {
            divisors: basis.divisors,
            generators: generators.into_iter().map(|g| g.expect("generator present")).collect(),
            table: out,
            identity,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn dlog(&self, e: &E) -> Option<&Vec<Int>> {
        self.table.get(e)
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = (&E, &Vec<Int>)> {
        self.table.iter()
    }

    pub fn presentation(&self) -> AbelianGroupPresentation<E> {
        AbelianGroupPresentation {
            divisors: self.divisors.iter().map(|&e| e as u64).collect(),
            generators: self.generators.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_mod_n() {
        // (Z/24)^x = Z/2 x Z/2 x Z/2
        let elems: Vec<i64> = (1..24).filter(|x| crate::intmath::gcd(*x as i128, 24) == 1).collect();
        let g = EnumeratedGroup::build(1i64, elems.clone(), |a, b| a * b % 24);
        assert_eq!(g.divisors, vec![2, 2, 2]);
        assert_eq!(g.order(), 8);
        // (Z/9)^x cyclic of order 6
        let g = EnumeratedGroup::build(1i64, (1..9).filter(|x| x % 3 != 0), |a, b| a * b % 9);
        assert_eq!(g.divisors, vec![6]);
        // (Z/15)^x = Z/2 x Z/4
        let g = EnumeratedGroup::build(1i64, (1..15).filter(|x| x % 3 != 0 && x % 5 != 0), |a, b| a * b % 15);
        assert_eq!(g.divisors, vec![2, 4]);
        for a in 1..15i64 {
            for b in 1..15i64 {
                if let (Some(x), Some(y)) = (g.dlog(&a), g.dlog(&b)) {
                    let s: Vec<Int> = x.iter().zip(y).zip(&g.divisors).map(|((p, q), e)| (p + q) % e).collect();
                    assert_eq!(g.dlog(&(a * b % 15)).unwrap(), &s);
                }
            }
        }
        for (i, gen) in g.generators.iter().enumerate() {
            let v = g.dlog(gen).unwrap();
            assert!(v.iter().enumerate().all(|(j, &x)| x == Int::from(i == j)));
        }
    }
}
