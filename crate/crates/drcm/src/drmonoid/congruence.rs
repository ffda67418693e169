use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use super::DRMonoidTable;
use crate::error::Result;
use crate::quadfield::QuadIdeal;

/// A partition of a DR table into blocks, with block ids numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonoidCongruence {
    pub partition: Vec<usize>,
}

impl MonoidCongruence {
    /// Canonicalizes arbitrary labels to first-occurrence block ids.
    pub fn from_labels<L: Hash + Eq>(labels: &[L]) -> Self {
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let partition = labels
            .iter()
            .map(|l| {
                let n = ids.len();
                *ids.entry(l).or_insert(n)
            })
            .collect();
        MonoidCongruence { partition }
    }

    pub fn identity(n: usize) -> Self {
        MonoidCongruence { partition: (0..n).collect() }
    }

    pub fn full(n: usize) -> Self {
        MonoidCongruence { partition: vec![0; n] }
    }

    /// Smallest congruence identifying each given pair.
    pub fn generated_by(t: &DRMonoidTable, pairs: &[(usize, usize)]) -> Self {
        let n = t.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut queue: Vec<(usize, usize)> = pairs.to_vec();
        while let Some((x, y)) = queue.pop() {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx == ry {
                continue;
            }
            parent[rx] = ry;
            for z in 0..n {
                queue.push((t.mul(x, z), t.mul(y, z)));
            }
        }
        let labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Self::from_labels(&labels)
    }

    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.partition.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]; self.block_count()];
        for (x, &b) in self.partition.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.partition[x] == self.partition[y]
    }

    /// Compatibility with multiplication on both sides, checked exhaustively.
    pub fn is_congruence(&self, t: &DRMonoidTable) -> bool {
        let n = t.len();
        (0..n).all(|x| {
            (0..n).all(|y| !self.same(x, y) || (0..n).all(|z| self.same(t.mul(x, z), t.mul(y, z)) && self.same(t.mul(z, x), t.mul(z, y))))
        })
    }

    /// Common refinement.
    pub fn meet(&self, o: &MonoidCongruence) -> MonoidCongruence {
        let labels: Vec<(usize, usize)> = self.partition.iter().copied().zip(o.partition.iter().copied()).collect();
        Self::from_labels(&labels)
    }

    /// Multiplication table of the quotient monoid.
    pub fn quotient_table(&self, t: &DRMonoidTable) -> Vec<Vec<usize>> {
        let blocks = self.blocks();
        blocks
            .iter()
            .map(|bx| blocks.iter().map(|by| self.partition[t.mul(bx[0], by[0])]).collect())
            .collect()
    }
}

/// `(psi_p xi)(x) = xi(p x)`.
pub fn psi_action<V: Clone>(t: &DRMonoidTable, xi: &[V], p: &QuadIdeal) -> Result<Vec<V>> {
    let pi = t.index_of(p)?;
    Ok((0..t.len()).map(|x| xi[t.mul(pi, x)].clone()).collect())
}

/// `x ~ y` iff `xi(xz) = xi(yz)` for every `z` and every `xi` in the family.
pub fn vector_congruence<V: Hash + Eq>(t: &DRMonoidTable, family: &[Vec<V>]) -> MonoidCongruence {
    let n = t.len();
    let sigs: Vec<Vec<&V>> = (0..n).map(|x| family.iter().flat_map(|xi| (0..n).map(move |z| &xi[t.mul(x, z)])).collect()).collect();
    MonoidCongruence::from_labels(&sigs)
}

/// Block indicators: a basis of the functions constant on the blocks of `q`.
pub fn functions_through(q: &MonoidCongruence) -> Vec<Vec<u8>> {
    (0..q.block_count()).map(|b| q.partition.iter().map(|&x| u8::from(x == b)).collect()).collect()
}

/// Whether `xi` lies in the span of the block indicators of `q`, i.e. is constant on blocks.
pub fn spans<V: PartialEq>(q: &MonoidCongruence, xi: &[V]) -> bool {
    q.blocks().iter().all(|b| b.iter().all(|&x| xi[x] == xi[b[0]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drmonoid::build_dr_monoid;
    use crate::quadfield::QuadField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(t: &DRMonoidTable, xi: &[u32]) -> MonoidCongruence {
        let n = t.len();
        let mut labels = vec![usize::MAX; n];
        for x in 0..n {
            if labels[x] != usize::MAX {
                continue;
            }
            for y in 0..n {
                if (0..n).all(|z| xi[t.mul(x, z)] == xi[t.mul(y, z)]) {
                    labels[y] = x;
                }
            }
        }
        MonoidCongruence::from_labels(&labels)
    }

    #[test]
    fn extreme_families() {
        let k = QuadField::gaussian();
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, 6)).unwrap();
        let n = t.len();
        let sep: Vec<usize> = (0..n).collect();
        assert_eq!(vector_congruence(&t, &[sep]), MonoidCongruence::identity(n));
        assert_eq!(vector_congruence(&t, &[vec![7; n]]), MonoidCongruence::full(n));
        assert_eq!(functions_through(&MonoidCongruence::full(n)).len(), 1);
        assert_eq!(functions_through(&MonoidCongruence::identity(n)).len(), n);
    }

    #[test]
    fn matches_brute_force_and_round_trips() {
        let k = QuadField::gaussian();
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, 6)).unwrap();
        let n = t.len();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let xi: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let q = vector_congruence(&t, std::slice::from_ref(&xi));
            assert_eq!(q, brute_force(&t, &xi));
            assert!(q.is_congruence(&t));
            assert!(spans(&q, &xi));
            let pairs: Vec<(usize, usize)> = (0..2).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let g = MonoidCongruence::generated_by(&t, &pairs);
            assert!(g.is_congruence(&t));
            assert_eq!(vector_congruence(&t, &functions_through(&g)), g);
        }
    }

    #[test]
    fn psi_commutes() {
        let k = QuadField::gaussian();
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, 6)).unwrap();
        let xi: Vec<usize> = (0..t.len()).map(|x| x * x % 5).collect();
        let p = QuadIdeal::principal_int(k, (2, 1)).unwrap();
        let q = QuadIdeal::rational(k, 7);
        let pq = psi_action(&t, &psi_action(&t, &xi, &q).unwrap(), &p).unwrap();
        let qp = psi_action(&t, &psi_action(&t, &xi, &p).unwrap(), &q).unwrap();
        assert_eq!(pq, qp);
        assert_eq!(psi_action(&t, &xi, &QuadIdeal::unit(k)).unwrap(), xi);
        assert_eq!(psi_action(&t, &vec![3; t.len()], &p).unwrap(), vec![3; t.len()]);
    }
}
