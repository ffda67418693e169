//! Small exact integer helpers shared by the algebraic modules.

use crate::error::{Error, Result};

pub type Int = i128;

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: Int, b: Int) -> Int {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
pub fn xgcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn modp(a: Int, m: Int) -> Int {
    a.rem_euclid(m)
}

pub fn modinv(a: Int, m: Int) -> Option<Int> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd(modp(a, m), m);
    if g == 1 {
        Some(modp(s, m))
    } else {
        None
    }
}

pub fn isqrt(n: Int) -> Int {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as Int;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn square_root_exact(n: Int) -> Option<Int> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub fn is_squarefree(n: Int) -> bool {
    if n <= 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn pow_mod(mut b: Int, mut e: Int, m: Int) -> Int {
    let mut r = 1 % m;
    b = modp(b, m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Kronecker symbol (D | p) for a prime p.
pub fn kronecker_prime(disc: Int, p: Int) -> i32 {
    if p == 2 {
        if disc % 2 == 0 {
            0
        } else if matches!(modp(disc, 8), 1 | 7) {
            1
        } else {
            -1
        }
    } else {
        let r = pow_mod(disc, (p - 1) / 2, p);
        if r == 0 {
            0
        } else if r == 1 {
            1
        } else {
            -1
        }
    }
}

/// Trial-division factorisation. A cofactor above `bound` is accepted only when it is
/// provably prime (smaller than `bound^2`).
pub fn factor_int(n: Int, bound: u64) -> Result<Vec<(Int, u32)>> {
    assert!(n > 0);
    let mut m = n;
    let mut out = Vec::new();
    let mut p: Int = 2;
    while p * p <= m && p <= bound as Int {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let b = bound as Int;
        if p * p > m || m < b.saturating_mul(b) {
            out.push((m, 1));
        } else {
            return Err(Error::FactorLimit { norm: n.to_string(), bound });
        }
    }
    Ok(out)
}

pub fn divisors(n: Int) -> Vec<Int> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

pub type Mat = Vec<Vec<Int>>;

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| Int::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b.first().map_or(0, |x| x.len()));
    let mut out = vec![vec![0; c]; r];
    for i in 0..r {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..c {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &Mat) -> Mat {
    let c = a.first().map_or(0, |x| x.len());
    (0..c).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Smith normal form `p * a * q = diag(d)`, with `d` a divisor chain of non-negative entries.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: Vec<Int>,
    pub p: Mat,
    pub q: Mat,
}

pub fn smith(a: &Mat, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut p = identity(rows);
    let mut q = identity(cols);
    let n = rows.min(cols);
    let mut d = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap(t, bi);
            p.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            let piv = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t].div_euclid(piv);
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] -= f * m[t][j];
                    }
                    for j in 0..rows {
                        p[i][j] -= f * p[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = m[t][j].div_euclid(piv);
                if f != 0 {
                    for i in 0..rows {
                        m[i][j] -= f * m[i][t];
                    }
                    for i in 0..cols {
                        q[i][j] -= f * q[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    for j in 0..cols {
                        m[t][j] += m[i][j];
                    }
                    for j in 0..rows {
                        p[t][j] += p[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                p[t][j] = -p[t][j];
            }
        }
        d.push(m[t][t]);
    }
    Smith { d, p, q }
}
