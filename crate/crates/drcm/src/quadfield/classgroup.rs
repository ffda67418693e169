use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{QuadField, QuadIdeal};
use crate::abelian::{AbelianGroupPresentation, EnumeratedGroup};
use crate::error::Result;
use crate::intmath::{gcd, Int};

/// A positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl Form {
    pub fn disc(&self) -> Int {
        self.b * self.b - 4 * self.a * self.c
    }
}

/// Reduction to `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
pub fn reduce_form(f: Form) -> Form {
    let d = f.disc();
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            b += 2 * a * k;
            c = (b * b - d) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return Form { a, b, c };
    }
}

/// All primitive reduced forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: Int) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push(Form { a, b, c });
        }
        a += 1;
    }
    out.sort();
    out
}

/// The ideal class group `Cl(O_K)` through reduced forms.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    field: QuadField,
    group: EnumeratedGroup<Form>,
}

impl ClassGroup {
    pub fn new(field: QuadField) -> Self {
        let forms = reduced_forms(field.disc() as Int);
        let id = reduce_form(Form { a: 1, b: field.t(), c: 0 }.with_disc(field.disc() as Int));
        let group = EnumeratedGroup::build(id, forms, |x, y| {
            let ix = form_to_ideal(field, x);
            let iy = form_to_ideal(field, y);
            ideal_to_form(&ix.mul(&iy).expect("same field"))
        });
        ClassGroup { field, group }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn divisors(&self) -> &[Int] {
        &self.group.divisors
    }

    pub fn generator_forms(&self) -> &[Form] {
        &self.group.generators
    }

    /// The class of a fractional ideal as an exponent vector.
    pub fn dlog(&self, id: &QuadIdeal) -> Vec<Int> {
        self.group.dlog(&ideal_to_form(id)).expect("reduced form is in the table").clone()
    }

    pub fn is_principal(&self, id: &QuadIdeal) -> bool {
        self.dlog(id).iter().all(|&x| x == 0)
    }

    pub fn presentation(&self) -> AbelianGroupPresentation<QuadIdeal> {
        AbelianGroupPresentation {
            divisors: self.group.divisors.iter().map(|&e| e as u64).collect(),
            generators: self.group.generators.iter().map(|f| form_to_ideal(self.field, f)).collect(),
        }
    }

    /// Reduced forms with their exponent vectors.
    pub fn classes(&self) -> HashMap<Form, Vec<Int>> {
        self.group.elements().map(|(f, v)| (*f, v.clone())).collect()
    }

    /// Smallest integral ideal in the class `v` that is coprime to `f`.
    pub fn small_rep_coprime(&self, v: &[Int], f: &QuadIdeal) -> Result<QuadIdeal> {
        for id in super::enumerate_ideals(self.field).take(200_000) {
            if id.is_coprime(f) && self.dlog(&id) == v {
                return Ok(id);
            }
        }
        Err(crate::error::Error::EnumerationBudget(format!("no ideal coprime to {f} in class {v:?}")))
    }
}

impl Form {
    fn with_disc(self, disc: Int) -> Form {
        // completes (a, b, _) to the given discriminant
        let c = (self.b * self.b - disc) / (4 * self.a);
        Form { a: self.a, b: self.b, c }
    }
}

/// The ideal `[a, (-b + sqrt(D))/2]` attached to a form.
pub fn form_to_ideal(k: QuadField, f: &Form) -> QuadIdeal {
    let x0 = if k.t() == 0 { -f.b / 2 } else { (-f.b - 1) / 2 };
    QuadIdeal::from_generators(k, &[(f.a, 0), (x0, 1)]).expect("nonzero")
}

/// The reduced form attached to the class of a fractional ideal.
pub fn ideal_to_form(id: &QuadIdeal) -> Form {
    let k = id.field();
    let (a1, b1) = (id.a() / id.c(), id.b() / id.c());
    let f = Form { a: a1, b: -(2 * b1 + k.t()), c: k.onorm((b1, 1)) / a1 };
    reduce_form(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        for (d, h) in [(1, 1), (2, 1), (3, 1), (5, 2), (6, 2), (7, 1), (14, 4), (23, 3), (21, 4), (47, 5)] {
            let k = QuadField::new(d).unwrap();
            let cl = ClassGroup::new(k);
            assert_eq!(cl.order(), h, "d = {d}");
            assert_eq!(reduced_forms(k.disc() as Int).len(), h);
        }
        let cl = ClassGroup::new(QuadField::new(21).unwrap());
        assert_eq!(cl.divisors(), &[2, 2]);
        let cl = ClassGroup::new(QuadField::new(14).unwrap());
        assert_eq!(cl.divisors(), &[4]);
    }

    #[test]
    fn forms_of_disc_minus_20() {
        assert_eq!(reduced_forms(-20), vec![Form { a: 1, b: 0, c: 5 }, Form { a: 2, b: 2, c: 3 }]);
    }

    #[test]
    fn dlog_is_homomorphism() {
        let k = QuadField::new(23).unwrap();
        let cl = ClassGroup::new(k);
        let ids: Vec<QuadIdeal> = super::super::enumerate_ideals(k).take(40).collect();
        for x in &ids {
            for y in &ids {
                let s: Vec<Int> = cl
                    .dlog(x)
                    .iter()
                    .zip(cl.dlog(y))
                    .zip(cl.divisors())
                    .map(|((a, b), e)| (a + b) % e)
                    .collect();
                assert_eq!(cl.dlog(&x.mul(y).unwrap()), s);
            }
        }
    }
}
