use drcm::numeric::Cx;
use drcm::quadfield::Rat;
use drcm::theta::{default_radius, j_invariant, siegel_from_f64, theta, theta_radius, weierstrass_p, Lattice, ThetaChar};
use proptest::prelude::*;
use rug::Float;

type Point = (Vec<Rat>, Vec<(f64, f64)>, Vec<Vec<(f64, f64)>>);

fn point() -> impl Strategy<Value = Point> {
    (1usize..=2).prop_flat_map(|g| {
        let k = prop::collection::vec((0i128..4).prop_map(|n| Rat::new(n, 4)), g);
        let u = prop::collection::vec((0.0..1.0f64, -0.2..0.2f64), g);
        let x = prop::collection::vec(-0.5..0.5f64, g * g);
        let y = prop::collection::vec(0.9..1.4f64, g);
        let off = -0.25..0.25f64;
        (k, u, x, y, off).prop_map(move |(k, u, x, y, off)| {
            let mut m = vec![vec![(0.0, 0.0); g]; g];
            for i in 0..g {
                for j in 0..g {
                    let (a, b) = (i.min(j), i.max(j));
                    m[i][j] = (x[a * g + b], if i == j { y[i] } else { off });
                }
            }
            (k, u, m)
        })
    })
}

fn cu(u: &[(f64, f64)], p: u32) -> Vec<Cx> {
    u.iter().map(|&(a, b)| Cx::from_f64(p, a, b)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn precision_doubling((k, u, m) in point()) {
        let p = 96;
        let tau = siegel_from_f64(&m, p).unwrap();
        let lo = theta(&ThetaChar::free(k.clone()), &cu(&u, p), &tau, p).unwrap();
        let tau2 = siegel_from_f64(&m, p + 64).unwrap();
        let hi = theta(&ThetaChar::free(k), &cu(&u, p + 64), &tau2, p + 64).unwrap();
        prop_assert!(hi.v.with_prec(p + 64).dist(&lo.v.with_prec(p + 64)) <= Float::with_val(64, &lo.err * 2u32));
    }

    #[test]
    fn truncation_soundness((k, u, m) in point()) {
        let p = 96;
        let tau = siegel_from_f64(&m, p).unwrap();
        let uc = cu(&u, p);
        let r = default_radius(&uc, &tau, p).unwrap();
        let ch = ThetaChar::free(k);
        let a = theta_radius(&ch, &uc, &tau, p + 32, r).unwrap();
        let b = theta_radius(&ch, &uc, &tau, p + 32, r + r / 2 + 1).unwrap();
        prop_assert!(a.v.dist(&b.v) < Float::with_val(64, 1) >> (p + 7));
    }

    #[test]
    fn homothety_invariance(x in -0.5..0.5f64, y in 0.9..2.0f64, cr in -2.0..2.0f64, ci in 0.5..2.0f64) {
        let p = 128;
        let lat = Lattice::from_tau(Cx::from_f64(p, x, y)).unwrap();
        let c = Cx::from_f64(p, cr, ci);
        let scaled = Lattice::new(lat.w1.mul(&c), lat.w2.mul(&c)).unwrap();
        let j1 = j_invariant(&lat, p).unwrap();
        let j2 = j_invariant(&scaled, p).unwrap();
        let scale = j1.v.abs().to_f64().max(1.0);
        prop_assert!(j1.v.dist(&j2.v).to_f64() < scale * 2f64.powi(-100));
        // c^2 p(cz; cL) = p(z; L)
        let z = Cx::from_f64(p, 0.31, 0.17);
        let p1 = weierstrass_p(&lat, &z, p).unwrap();
        let p2 = weierstrass_p(&scaled, &z.mul(&c), p).unwrap();
        let back = p2.v.mul(&c.sqr());
        prop_assert!(back.dist(&p1.v).to_f64() < p1.v.abs().to_f64().max(1.0) * 2f64.powi(-100));
    }
}

#[test]
fn free_characteristics_reduce_mod_one() {
    let k = ThetaChar::free(vec![Rat::new(5, 4)]);
    assert_eq!(k, ThetaChar::free(vec![Rat::new(1, 4)]));
}
