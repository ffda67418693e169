//! LLL reduction of integer row bases with floating-point Gram-Schmidt data.

use rug::{Float, Integer};

/// Reduction parameter `delta` of the Lovász condition.
pub const LLL_DELTA: f64 = 0.99;

struct Gs {
    prec: u32,
    bstar: Vec<Vec<Float>>,
    norms: Vec<Float>,
    mu: Vec<Vec<Float>>,
}

impl Gs {
    fn dot(&self, a: &[Float], b: &[Float]) -> Float {
        let mut s = Float::new(self.prec);
        for (x, y) in a.iter().zip(b) {
            s += Float::with_val(self.prec, x * y);
        }
        s
    }

    fn update(&mut self, basis: &[Vec<Integer>], k: usize) {
        let p = self.prec;
        let bk: Vec<Float> = basis[k].iter().map(|x| Float::with_val(p, x)).collect();
        let mut v = bk.clone();
        for j in 0..k {
            let m = if self.norms[j].is_zero() {
                Float::new(p)
            } else {
                Float::with_val(p, self.dot(&bk, &self.bstar[j]) / &self.norms[j])
            };
            for (vi, bj) in v.iter_mut().zip(&self.bstar[j]) {
                *vi -= Float::with_val(p, &m * bj);
            }
            self.mu[k][j] = m;
        }
        self.norms[k] = self.dot(&v, &v);
        self.bstar[k] = v;
    }
}

fn round_int(x: &Float) -> Integer {
    x.to_integer().unwrap_or_default()
}

/// LLL-reduces the rows of `basis` in place (rows must be linearly independent).
pub fn lll_reduce(basis: &mut [Vec<Integer>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let bits = basis.iter().flatten().map(|x| x.significant_bits()).max().unwrap_or(1);
    let prec = 2 * bits + 8 * n as u32 + 64;
    let dim = basis[0].len();
    let mut gs = Gs {
        prec,
        bstar: vec![vec![Float::new(prec); dim]; n],
        norms: vec![Float::new(prec); n],
        mu: vec![vec![Float::new(prec); n]; n],
    };
    gs.update(basis, 0);
    let delta = Float::with_val(prec, LLL_DELTA);
    let mut k = 1;
    let mut fresh_prev = true;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        assert!(guard < 10_000_000, "LLL did not terminate");
        if !fresh_prev {
            gs.update(basis, k - 1);
            fresh_prev = true;
        }
        gs.update(basis, k);
        loop {
            let mut changed = false;
            for j in (0..k).rev() {
                let q = round_int(&gs.mu[k][j]);
                if q != 0 {
                    changed = true;
                    let (lo, hi) = basis.split_at_mut(k);
                    for (x, y) in hi[0].iter_mut().zip(&lo[j]) {
                        *x -= Integer::from(&q * y);
                    }
                    let qf = Float::with_val(prec, &q);
                    for i in 0..j {
                        let t = Float::with_val(prec, &qf * &gs.mu[j][i]);
                        gs.mu[k][i] -= t;
                    }
                    gs.mu[k][j] -= &qf;
                }
            }
            if !changed {
                break;
            }
            gs.update(basis, k);
        }
        let m = &gs.mu[k][k - 1];
        let lhs = Float::with_val(prec, &delta - Float::with_val(prec, m * m)) * &gs.norms[k - 1];
        if gs.norms[k] >= lhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            if k > 1 {
                k -= 1;
                fresh_prev = false;
            } else {
                gs.update(basis, 0);
            }
        }
    }
}

/// Squared Euclidean norm of an integer row.
pub fn norm2(v: &[Integer]) -> Integer {
    v.iter().map(|x| Integer::from(x * x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Integer>> {
        rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect()
    }

    #[test]
    fn small_example() {
        let mut b = ints(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        lll_reduce(&mut b);
        assert_eq!(b, ints(&[&[0, 1, 0], &[1, 0, 1], &[-1, 0, 2]]));
    }

    #[test]
    fn finds_sqrt2_relation() {
        let p = 200;
        let s = Float::with_val(p, 2).sqrt();
        let scale = Integer::from(1) << 120;
        let col: Vec<Integer> = (0..3)
            .map(|i| Float::with_val(p, Float::with_val(p, rug::ops::Pow::pow(&s, i as u32)) * &scale).to_integer().unwrap())
            .collect();
        let mut b: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                let mut r = vec![Integer::new(); 4];
                r[i] = Integer::from(1);
                r[3] = col[i].clone();
                r
            })
            .collect();
        lll_reduce(&mut b);
        let v = &b[0];
        let sign = if v[2] < 0 { -1 } else { 1 };
        assert_eq!(v[..3].iter().map(|x| x.to_i64().unwrap() * sign).collect::<Vec<_>>(), vec![-2, 0, 1]);
    }
}
