//! Alternating forms, symplectic types, the Siegel upper half space and the `GSp` action.

mod cm;

pub use cm::{cm_point, riemann_form_cm, tau_from_basis, CMPoint, CMPointData, RiemannReport};

use num_traits::{One, Signed, Zero};
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmath::{modp, Int, Mat};
use crate::numeric::{cholesky_min_pivot, CMat, Cx};
use crate::quadfield::{QuadField, QuadIdeal, Rat};

/// An integral alternating `2g x 2g` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingIntMatrix {
    e: Mat,
}

impl AlternatingIntMatrix {
    pub fn new(e: Mat) -> Result<Self> {
        let n = e.len();
        if n == 0 || !n.is_multiple_of(2) || e.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("alternating matrix must be square of even size".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if e[i][j] != -e[j][i] {
                    return Err(Error::Invalid("matrix is not alternating".into()));
                }
            }
        }
        Ok(AlternatingIntMatrix { e })
    }

    pub fn matrix(&self) -> &Mat {
        &self.e
    }

    pub fn genus(&self) -> usize {
        self.e.len() / 2
    }
}

/// Elementary divisors `[d_1, ..., d_g]` of a Riemann form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TypeDelta {
    pub d: Vec<Int>,
}

impl TypeDelta {
    pub fn new(d: Vec<Int>) -> Result<Self> {
        if d.is_empty() || d.iter().any(|&x| x <= 0) || d.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid(format!("{d:?} is not a positive divisor chain")));
        }
        Ok(TypeDelta { d })
    }

    pub fn principal(g: usize) -> Self {
        TypeDelta { d: vec![1; g] }
    }

    pub fn genus(&self) -> usize {
        self.d.len()
    }

    /// `3 <= d_1`, needed for the projective embedding by theta nulls.
    pub fn embed_ok(&self) -> bool {
        self.d[0] >= 3
    }

    /// `4 <= d_1` and `d_1` even or divisible by 3.
    pub fn strong_ok(&self) -> bool {
        self.d[0] >= 4 && (self.d[0] % 2 == 0 || self.d[0] % 3 == 0)
    }

    /// `d_1 d_2 ... d_g`, the number of theta characteristics.
    pub fn index(&self) -> Int {
        self.d.iter().product()
    }

    pub fn matrix(&self) -> Mat {
        j_delta(&self.d)
    }

    pub fn to_cmat(&self, prec: u32) -> CMat {
        let g = self.genus();
        let mut m = CMat::zeros(g, g, prec);
        for i in 0..g {
            m.rows[i][i] = Cx::from_int(prec, self.d[i]);
        }
        m
    }
}

/// `[[0, diag d], [-diag d, 0]]`.
pub fn j_delta(d: &[Int]) -> Mat {
    let g = d.len();
    let mut j = vec![vec![0; 2 * g]; 2 * g];
    for i in 0..g {
        j[i][g + i] = d[i];
        j[g + i][i] = -d[i];
    }
    j
}

struct Reducer {
    e: Mat,
    u: Mat,
}

impl Reducer {
    fn add(&mut self, r: usize, s: usize, k: Int) {
        if k == 0 {
            return;
        }
        let n = self.e.len();
        for j in 0..n {
            self.u[r][j] += k * self.u[s][j];
            self.e[r][j] += k * self.e[s][j];
        }
        for i in 0..n {
            self.e[i][r] += k * self.e[i][s];
        }
    }

    fn swap(&mut self, r: usize, s: usize) {
        if r == s {
            return;
        }
        self.u.swap(r, s);
        self.e.swap(r, s);
        for row in self.e.iter_mut() {
            row.swap(r, s);
        }
    }

    fn negate(&mut self, r: usize) {
        let n = self.e.len();
        for j in 0..n {
            self.u[r][j] = -self.u[r][j];
            self.e[r][j] = -self.e[r][j];
        }
        for i in 0..n {
            self.e[i][r] = -self.e[i][r];
        }
    }
}

/// Unimodular `U` and type `delta` with `U E U^t = J_delta`.
pub fn frobenius_reduce(e: &AlternatingIntMatrix) -> Result<(Mat, TypeDelta)> {
    let n = e.e.len();
    let mut r = Reducer { e: e.e.clone(), u: crate::intmath::identity(n) };
    let mut deltas = Vec::with_capacity(n / 2);
    let mut start = 0;
    while start < n {
        loop {
            let mut best: Option<(Int, usize, usize)> = None;
            for i in start..n {
                for j in i + 1..n {
                    let v = r.e[i][j].abs();
                    if v != 0 && best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((_, i, j)) = best else {
                return Err(Error::Degenerate("alternating matrix is singular".into()));
            };
            r.swap(start, i);
            let j = if j == start { i } else { j };
            r.swap(start + 1, j);
            if r.e[start][start + 1] < 0 {
                r.negate(start + 1);
            }
            let d = r.e[start][start + 1];
            let mut changed = false;
            for row in start + 2..n {
                let q = r.e[row][start].div_euclid(d);
                r.add(row, start + 1, q);
                let q = r.e[row][start + 1].div_euclid(d);
                r.add(row, start, -q);
                changed |= r.e[row][start] != 0 || r.e[row][start + 1] != 0;
            }
            if changed {
                continue;
            }
            let bad = (start + 2..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| r.e[a][b] % d != 0);
            if let Some((a, _)) = bad {
                r.add(start, a, 1);
                continue;
            }
            deltas.push(d);
            break;
        }
        start += 2;
    }
    let order: Vec<usize> = (0..n).step_by(2).chain((1..n).step_by(2)).collect();
    let u = order.iter().map(|&i| r.u[i].clone()).collect();
    Ok((u, TypeDelta { d: deltas }))
}

/// A point of the Siegel upper half space.
#[derive(Debug, Clone)]
pub struct SiegelPoint {
    pub tau: CMat,
}

impl SiegelPoint {
    /// Validates symmetry (to `2^{-prec/2}`) and positive definiteness of `Im tau`.
    pub fn new(tau: CMat) -> Result<Self> {
        let g = tau.nrows();
        if g == 0 || tau.ncols() != g {
            return Err(Error::Invalid("tau must be a nonempty square matrix".into()));
        }
        let prec = tau.prec();
        let tol = Float::with_val(prec, 1) >> (prec / 2);
        if tau.dist(&tau.transpose()) > tol {
            return Err(Error::Invalid("tau is not symmetric".into()));
        }
        if cholesky_min_pivot(&tau.imag_part()).is_none() {
            return Err(Error::NotPositive("Im(tau) is not positive definite".into()));
        }
        Ok(SiegelPoint { tau })
    }

    pub fn genus(&self) -> usize {
        self.tau.nrows()
    }

    pub fn prec(&self) -> u32 {
        self.tau.prec()
    }

    pub fn scalar(z: Cx) -> Result<Self> {
        SiegelPoint::new(CMat::new(vec![vec![z]]))
    }
}

/// An element of `GSp(J_delta)(Q)` with positive multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GSpElement {
    #[serde(serialize_with = "crate::numeric::rat_serde::mat")]
    pub m: Vec<Vec<Rat>>,
    #[serde(serialize_with = "crate::numeric::rat_serde::one")]
    pub nu: Rat,
}

fn rat_mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| *x * r[j]).fold(Rat::zero(), |s, t| s + t)).collect())
        .collect()
}

fn rat_transpose(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn int_to_rat(m: &Mat) -> Vec<Vec<Rat>> {
    m.iter().map(|r| r.iter().map(|&x| Rat::from(x)).collect()).collect()
}

impl GSpElement {
    /// Checks `M J_delta M^t = nu J_delta` with `nu > 0`.
    pub fn new(m: Vec<Vec<Rat>>, delta: &TypeDelta) -> Result<Self> {
        let g = delta.genus();
        if m.len() != 2 * g || m.iter().any(|r| r.len() != 2 * g) {
            return Err(Error::Invalid("GSp element has the wrong size".into()));
        }
        let j = int_to_rat(&delta.matrix());
        let lhs = rat_mat_mul(&rat_mat_mul(&m, &j), &rat_transpose(&m));
        let nu = lhs[0][g] / j[0][g];
        if !nu.is_positive() {
            return Err(Error::NotPositive("GSp multiplier must be positive".into()));
        }
        for a in 0..2 * g {
            for b in 0..2 * g {
                if lhs[a][b] != nu * j[a][b] {
                    return Err(Error::Invalid("matrix does not preserve J_delta up to a scalar".into()));
                }
            }
        }
        Ok(GSpElement { m, nu })
    }

    pub fn identity(g: usize) -> Self {
        let m = (0..2 * g).map(|i| (0..2 * g).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
        GSpElement { m, nu: Rat::one() }
    }

    pub fn genus(&self) -> usize {
        self.m.len() / 2
    }

    pub fn compose(&self, o: &GSpElement) -> GSpElement {
        GSpElement { m: rat_mat_mul(&self.m, &o.m), nu: self.nu * o.nu }
    }

    /// Blocks `(a, b, c, d)`.
    pub fn blocks(&self) -> [Vec<Vec<Rat>>; 4] {
        let g = self.genus();
        let blk = |r0: usize, c0: usize| (0..g).map(|i| (0..g).map(|j| self.m[r0 + i][c0 + j]).collect()).collect();
        [blk(0, 0), blk(0, g), blk(g, 0), blk(g, g)]
    }
}

/// `(a tau + b delta)(c tau + d delta)^{-1} delta`.
pub fn gsp_act(alpha: &GSpElement, tau: &SiegelPoint, delta: &TypeDelta) -> Result<SiegelPoint> {
    let prec = tau.prec();
    let dm = delta.to_cmat(prec);
    let [a, b, c, d] = alpha.blocks().map(|x| CMat::from_rat(&x, prec));
    let num = a.mul(&tau.tau).add(&b.mul(&dm));
    let den = c.mul(&tau.tau).add(&d.mul(&dm));
    let inv = den.inverse().ok_or_else(|| Error::Degenerate("c tau + d delta is singular".into()))?;
    let t = num.mul(&inv).mul(&dm);
    let sym = t.add(&t.transpose());
    let half = Float::with_val(prec, 0.5);
    let t = CMat::new(sym.rows.iter().map(|r| r.iter().map(|x| x.scale(&half)).collect()).collect());
    SiegelPoint::new(t)
}

/// Matrix of multiplication by `x + y omega` on row coordinates `(omega, 1)`.
pub fn mult_matrix(k: QuadField, v: (Int, Int)) -> [[Int; 2]; 2] {
    let w = k.omul(v, (0, 1));
    [[w.1, w.0], [v.1, v.0]]
}

/// Strong-approximation data of an integral ideal `s` coprime to `N` (genus one).
#[derive(Debug, Clone, Serialize)]
pub struct IdeleDecomposition {
    /// Row coordinates of `[b + c omega, a]` in the basis `(omega, 1)`.
    pub alpha: GSpElement,
    /// `M_m alpha^{-1} mod N` for some `m in s` with `m = 1 mod N`.
    pub u: [[Int; 2]; 2],
    pub m: (Int, Int),
    pub n: Int,
}

pub fn decompose_idele_g1(s: &QuadIdeal, n: Int) -> Result<IdeleDecomposition> {
    let k = s.field();
    if !s.is_integral() || n < 1 {
        return Err(Error::Invalid("decomposition needs an integral ideal and N >= 1".into()));
    }
    let modn = QuadIdeal::rational(k, n);
    if !s.is_coprime(&modn) {
        return Err(Error::Invalid(format!("{s} is not coprime to {n}")));
    }
    let (a, b, c) = (s.a(), s.b(), s.c());
    let alpha = GSpElement::new(
        vec![vec![Rat::from(c), Rat::from(b)], vec![Rat::zero(), Rat::from(a)]],
        &TypeDelta::principal(1),
    )?;
    let m = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x * a + y * b, y * c)))
        .find(|&v| modn.reduce((v.0 - 1, v.1)) == (0, 0))
        .ok_or_else(|| Error::Verification(format!("no element of {s} is 1 mod {n}")))?;
    let mm = mult_matrix(k, m);
    let det = a * c;
    let inv = [[a, -b], [0, c]];
    let mut u = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let num = mm[i][0] * inv[0][j] + mm[i][1] * inv[1][j];
            if num % det != 0 {
                return Err(Error::Verification("M_m alpha^{-1} is not integral".into()));
            }
            u[i][j] = modp(num / det, n);
        }
    }
    Ok(IdeleDecomposition { alpha, u, m, n })
}
