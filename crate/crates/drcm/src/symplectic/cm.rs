use num_traits::{One, Zero};
use rug::Float;
use serde::Serialize;

use super::{frobenius_reduce, AlternatingIntMatrix, SiegelPoint, TypeDelta};
use crate::error::{Error, Result};
use crate::intmath::{Int, Mat};
use crate::numeric::{cholesky_min_pivot, CMat, Cx};
use crate::quadfield::Rat;

/// CM field `Q[x]/P`, a CM type, an integral basis and a totally imaginary `e`.
#[derive(Debug, Clone, Serialize)]
pub struct CMPointData {
    /// Monic defining polynomial, coefficients from degree 0 up.
    pub poly: Vec<Int>,
    /// Approximate images of the generator under the embeddings in the CM type.
    pub phi: Vec<(f64, f64)>,
    /// Basis elements as polynomials in the generator.
    #[serde(serialize_with = "crate::numeric::rat_serde::mat")]
    pub basis: Vec<Vec<Rat>>,
    #[serde(serialize_with = "crate::numeric::rat_serde::vec")]
    pub e: Vec<Rat>,
    pub n: Int,
}

fn ints(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from(x)).collect()
}

impl CMPointData {
    /// `Q(i)` with basis `(1, i)` and `e = i/2`.
    pub fn gaussian() -> Self {
        CMPointData {
            poly: vec![1, 0, 1],
            phi: vec![(0.0, 1.0)],
            basis: vec![ints(&[1, 0]), ints(&[0, 1])],
            e: vec![Rat::zero(), Rat::new(1, 2)],
            n: 1,
        }
    }

    /// `Q(zeta_5)` with `Phi = {zeta, zeta^2}`, power basis and `e = zeta - zeta^{-1}`.
    pub fn zeta5() -> Self {
        let t = std::f64::consts::TAU / 5.0;
        CMPointData {
            poly: vec![1, 1, 1, 1, 1],
            phi: vec![(t.cos(), t.sin()), ((2.0 * t).cos(), (2.0 * t).sin())],
            basis: (0..4).map(|i| ints(&(0..4).map(|j| Int::from(i == j)).collect::<Vec<_>>())).collect(),
            e: ints(&[1, 2, 1, 1]),
            n: 4,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn genus(&self) -> usize {
        self.degree() / 2
    }
}

fn poly_mulmod(a: &[Rat], b: &[Rat], p: &[Int]) -> Vec<Rat> {
    let m = p.len() - 1;
    let mut prod = vec![Rat::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (m..prod.len()).rev() {
        let t = prod[k];
        if t.is_zero() {
            continue;
        }
        for (i, &c) in p.iter().enumerate().take(m) {
            prod[k - m + i] -= t * Rat::from(c);
        }
        prod[k] = Rat::zero();
    }
    prod.truncate(m);
    prod.resize(m, Rat::zero());
    prod
}

fn compose_mod(q: &[Rat], inner: &[Rat], p: &[Int]) -> Vec<Rat> {
    let m = p.len() - 1;
    let mut acc = vec![Rat::zero(); m];
    for c in q.iter().rev() {
        acc = poly_mulmod(&acc, inner, p);
        acc[0] += c;
    }
    acc
}

/// Power sums `p_0 .. p_{m-1}` of the roots by Newton's identities.
fn power_sums(p: &[Int]) -> Vec<Rat> {
    let m = p.len() - 1;
    let c = |i: usize| Rat::from(p[i]);
    let mut s = vec![Rat::from(m as Int)];
    for k in 1..m {
        let mut v = -Rat::from(k as Int) * c(m - k);
        for i in 1..k {
            v -= c(m - i) * s[k - i];
        }
        s.push(v);
    }
    s
}

fn trace(a: &[Rat], sums: &[Rat]) -> Rat {
    a.iter().zip(sums).map(|(x, y)| x * y).fold(Rat::zero(), |s, t| s + t)
}

fn eval(a: &[Rat], z: &Cx) -> Cx {
    let p = z.prec();
    let mut acc = Cx::zero(p);
    for c in a.iter().rev() {
        acc = acc.mul(z).add(&Cx::from_rat(p, c, &Rat::zero()));
    }
    acc
}

/// All complex roots of a monic integer polynomial (Weierstrass iteration).
pub fn poly_roots(poly: &[Int], prec: u32) -> Vec<Cx> {
    let m = poly.len() - 1;
    let wp = prec + 32;
    let coeffs: Vec<Rat> = ints(poly);
    let seed = Cx::from_f64(wp, 0.4, 0.9);
    let mut z: Vec<Cx> = (0..m).map(|k| seed.powu(k as u32)).collect();
    let tol = Float::with_val(wp, 1) >> (wp - 8);
    for _ in 0..2000 {
        let mut done = true;
        for i in 0..m {
            let num = eval(&coeffs, &z[i]);
            let mut den = Cx::one(wp);
            for j in 0..m {
                if j != i {
                    den = den.mul(&z[i].sub(&z[j]));
                }
            }
            let step = num.div(&den);
            if step.dist(&Cx::zero(wp)) > tol {
                done = false;
            }
            z[i] = z[i].sub(&step);
        }
        if done {
            break;
        }
    }
    z.into_iter().map(|x| x.with_prec(prec)).collect()
}

fn nearest(roots: &[Cx], hint: (f64, f64)) -> usize {
    let d = |z: &Cx| {
        let (a, b) = z.to_f64();
        (a - hint.0).powi(2) + (b - hint.1).powi(2)
    };
    (0..roots.len()).min_by(|&i, &j| d(&roots[i]).partial_cmp(&d(&roots[j])).unwrap()).unwrap()
}

/// Complex conjugation on `E` as a polynomial, found numerically and verified exactly.
fn conjugation(poly: &[Int], roots: &[Cx]) -> Result<Vec<Rat>> {
    let m = roots.len();
    let prec = roots[0].prec();
    let v = CMat::new(roots.iter().map(|z| (0..m).map(|j| z.powu(j as u32)).collect()).collect());
    let inv = v.inverse().ok_or_else(|| Error::Degenerate("repeated roots".into()))?;
    let rhs = CMat::new(roots.iter().map(|z| vec![z.conj()]).collect());
    let c = inv.mul(&rhs);
    let tol = Float::with_val(prec, 1) >> (prec / 3);
    for den in 1..=10_000i64 {
        let mut q = Vec::with_capacity(m);
        let mut ok = true;
        for row in &c.rows {
            let x = Float::with_val(prec, &row[0].re * den);
            let r = x.clone().round();
            if Float::with_val(prec, &x - &r).abs() > tol || row[0].im.clone().abs() > tol {
                ok = false;
                break;
            }
            q.push(Rat::new(r.to_integer().unwrap().to_i128().unwrap(), den as Int));
        }
        if !ok {
            continue;
        }
        let x: Vec<Rat> = (0..m).map(|i| Rat::from(Int::from(i == 1))).collect();
        let pq = compose_mod(&ints(poly), &q, poly);
        if pq.iter().all(|t| t.is_zero()) && compose_mod(&q, &q, poly) == x {
            return Ok(q);
        }
    }
    Err(Error::Verification("complex conjugation is not a polynomial automorphism".into()))
}

/// `n Tr(e b_i iota(b_j))` over the integral basis, exact.
pub fn riemann_form_cm(data: &CMPointData) -> Result<AlternatingIntMatrix> {
    let prec = 128 + 32 * data.degree() as u32;
    let roots = poly_roots(&data.poly, prec);
    check_e(data, &roots)?;
    let iota = conjugation(&data.poly, &roots)?;
    let sums = power_sums(&data.poly);
    let conj: Vec<Vec<Rat>> = data.basis.iter().map(|b| compose_mod(b, &iota, &data.poly)).collect();
    let m = data.basis.len();
    let mut out = vec![vec![0; m]; m];
    for i in 0..m {
        let eb = poly_mulmod(&data.e, &data.basis[i], &data.poly);
        for j in 0..m {
            let t = trace(&poly_mulmod(&eb, &conj[j], &data.poly), &sums) * Rat::from(data.n);
            if !t.is_integer() {
                return Err(Error::Invalid(format!("n = {} does not make the trace form integral", data.n)));
            }
            out[i][j] = t.to_integer();
        }
    }
    AlternatingIntMatrix::new(out)
}

fn cm_embeddings(data: &CMPointData, roots: &[Cx]) -> Vec<Cx> {
    data.phi.iter().map(|&h| roots[nearest(roots, h)].clone()).collect()
}

fn check_e(data: &CMPointData, roots: &[Cx]) -> Result<()> {
    for z in cm_embeddings(data, roots) {
        if eval(&data.e, &z).im <= 0 {
            return Err(Error::NotPositive("Im(phi(e)) must be positive on the CM type".into()));
        }
    }
    Ok(())
}

/// `delta B^{-1} A` for the columns `(A | B)`; negates `A` when `Im tau < 0`. Returns whether it did.
pub fn tau_from_basis(cols: &CMat, delta: &TypeDelta) -> Result<(SiegelPoint, bool)> {
    let g = delta.genus();
    if cols.nrows() != g || cols.ncols() != 2 * g {
        return Err(Error::Invalid("need g x 2g lattice columns".into()));
    }
    let prec = cols.prec();
    let pick = |r: std::ops::Range<usize>| CMat::new(cols.rows.iter().map(|row| row[r.clone()].to_vec()).collect());
    let a = pick(0..g);
    let b = pick(g..2 * g);
    let binv = b.inverse().ok_or_else(|| Error::Degenerate("last g columns are singular".into()))?;
    let tau = delta.to_cmat(prec).mul(&binv).mul(&a);
    let tol = Float::with_val(prec, 1) >> (prec / 2);
    if tau.dist(&tau.transpose()) > tol {
        return Err(Error::Verification("normalized period matrix is not symmetric".into()));
    }
    let half = Float::with_val(prec, 0.5);
    let sym = tau.add(&tau.transpose());
    let tau = CMat::new(sym.rows.iter().map(|r| r.iter().map(|x| x.scale(&half)).collect()).collect());
    let im = tau.imag_part();
    if cholesky_min_pivot(&im).is_some() {
        return Ok((SiegelPoint::new(tau)?, false));
    }
    let neg: Vec<Vec<Float>> = im.iter().map(|r| r.iter().map(|x| Float::with_val(prec, -x)).collect()).collect();
    if cholesky_min_pivot(&neg).is_some() {
        return Ok((SiegelPoint::new(tau.neg())?, true));
    }
    Err(Error::NotPositive("Im(tau) is indefinite for both orientations".into()))
}

/// Numerical verification of the Riemann-form conditions.
#[derive(Debug, Clone, Serialize)]
pub struct RiemannReport {
    pub integral: bool,
    pub alternating: bool,
    /// `log2 |J^t E J - E|`.
    pub j_invariance_log2: f64,
    /// `log2` of the asymmetry of `E J`.
    pub symmetry_log2: f64,
    /// Smallest Cholesky pivot of `E J`; positive iff the form is positive.
    pub positivity_pivot: f64,
    pub pass: bool,
}

fn log2(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        x.clone().log2().to_f64()
    }
}

/// Everything derived from CM data: Riemann form, symplectic basis, type and period point.
#[derive(Debug, Clone)]
pub struct CMPoint {
    pub riemann: AlternatingIntMatrix,
    pub report: RiemannReport,
    pub u: Mat,
    pub delta: TypeDelta,
    pub tau: SiegelPoint,
    pub flipped: bool,
    /// `log2` of the reconstruction residual of the original basis from `(tau, delta)`.
    pub residual_log2: f64,
}

fn rat_inverse(m: &Mat) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.iter().map(|r| ints(r)).collect();
    let mut b: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| Rat::from(Int::from(i == j))).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("unimodular");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Rat::one() / a[col][col];
        for j in 0..n {
            a[col][j] *= inv;
            b[col][j] *= inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], b[col][j]);
                    a[i][j] -= f * x;
                    b[i][j] -= f * y;
                }
            }
        }
    }
    b
}

pub fn cm_point(data: &CMPointData, prec: u32) -> Result<CMPoint> {
    let g = data.genus();
    if data.basis.len() != 2 * g || data.phi.len() != g {
        return Err(Error::Invalid("CM data needs 2g basis elements and g embeddings".into()));
    }
    let riemann = riemann_form_cm(data)?;
    let roots = poly_roots(&data.poly, prec);
    let emb = cm_embeddings(data, &roots);
    let phi_b = CMat::new(emb.iter().map(|z| data.basis.iter().map(|b| eval(b, z)).collect()).collect());
    let e = riemann.matrix();
    let zero = Rat::zero();
    let mut r = CMat::zeros(2 * g, 2 * g, prec);
    for i in 0..g {
        for j in 0..2 * g {
            r.rows[i][j] = Cx::real(phi_b.rows[i][j].re.clone());
            r.rows[g + i][j] = Cx::real(phi_b.rows[i][j].im.clone());
        }
    }
    let mut jstd = CMat::zeros(2 * g, 2 * g, prec);
    for i in 0..g {
        jstd.rows[i][g + i] = Cx::from_int(prec, -1);
        jstd.rows[g + i][i] = Cx::from_int(prec, 1);
    }
    let rinv = r.inverse().ok_or_else(|| Error::Degenerate("basis images are R-dependent".into()))?;
    let jl = rinv.mul(&jstd).mul(&r);
    let em = CMat::new(e.iter().map(|row| row.iter().map(|&x| Cx::from_rat(prec, &Rat::from(x), &zero)).collect()).collect());
    let jinv = jl.transpose().mul(&em).mul(&jl).dist(&em);
    let s = em.mul(&jl);
    let asym = s.dist(&s.transpose());
    let pivot = cholesky_min_pivot(&s.real_part());
    let tol = (prec / 2) as f64;
    let report = RiemannReport {
        integral: true,
        alternating: true,
        j_invariance_log2: log2(&jinv),
        symmetry_log2: log2(&asym),
        positivity_pivot: pivot.as_ref().map_or(f64::NAN, |p| p.to_f64()),
        pass: log2(&jinv) < -tol && log2(&asym) < -tol && pivot.is_some(),
    };
    let (u, delta) = frobenius_reduce(&riemann)?;
    let cols = CMat::new(
        phi_b
            .rows
            .iter()
            .map(|row| {
                u.iter()
                    .map(|urow| urow.iter().zip(row).fold(Cx::zero(prec), |acc, (&k, z)| acc.add(&z.mul_int(k))))
                    .collect()
            })
            .collect(),
    );
    let (tau, flipped) = tau_from_basis(&cols, &delta)?;
    let b = CMat::new(cols.rows.iter().map(|row| row[g..].to_vec()).collect());
    let norm = delta.to_cmat(prec).mul(&b.inverse().expect("checked in tau_from_basis"));
    let normalized = norm.mul(&phi_b);
    let uinv = rat_inverse(&u);
    let dm = delta.to_cmat(prec);
    let mut worst = Float::new(prec);
    for j in 0..2 * g {
        for i in 0..g {
            let mut acc = Cx::zero(prec);
            for k in 0..2 * g {
                let mut coeff = uinv[j][k];
                if flipped && k < g {
                    coeff = -coeff;
                }
                let col = if k < g { tau.tau.rows[i][k].clone() } else { dm.rows[i][k - g].clone() };
                acc = acc.add(&col.mul(&Cx::from_rat(prec, &coeff, &zero)));
            }
            let d = acc.dist(&normalized.rows[i][j]);
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(CMPoint { riemann, report, u, delta, tau, flipped, residual_log2: log2(&worst) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_form() {
        let d = CMPointData::gaussian();
        assert_eq!(riemann_form_cm(&d).unwrap().matrix(), &vec![vec![0, 1], vec![-1, 0]]);
        let mut d3 = d.clone();
        d3.n = 3;
        assert_eq!(riemann_form_cm(&d3).unwrap().matrix(), &vec![vec![0, 3], vec![-3, 0]]);
        let p = cm_point(&d, 128).unwrap();
        assert!(p.report.pass);
        assert!(p.tau.tau.rows[0][0].dist(&Cx::i(128)) < 1e-35);
        let mut bad = d;
        bad.e = vec![Rat::zero(), Rat::new(-1, 2)];
        assert!(riemann_form_cm(&bad).is_err());
    }

    #[test]
    fn lattice_to_tau() {
        let p = 128;
        let cols = CMat::new(vec![vec![Cx::i(p), Cx::one(p)]]);
        let (t, _) = tau_from_basis(&cols, &TypeDelta::principal(1)).unwrap();
        assert!(t.tau.rows[0][0].dist(&Cx::i(p)) < 1e-35);
        let s = Float::with_val(p, 2.5);
        let scaled = CMat::new(vec![vec![Cx::i(p).scale(&s), Cx::one(p).scale(&s)]]);
        let (t2, _) = tau_from_basis(&scaled, &TypeDelta::principal(1)).unwrap();
        assert!(t2.tau.dist(&t.tau) < 1e-35);
    }

    #[test]
    fn zeta5_point() {
        let d = CMPointData::zeta5();
        let p = cm_point(&d, 128).unwrap();
        assert!(p.report.pass, "{:?}", p.report);
        assert!(p.delta.strong_ok(), "{:?}", p.delta);
        assert!(p.residual_log2 < -112.0);
    }
}
