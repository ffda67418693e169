//! Literal parsing for command-line values.

use drcm::numeric::Cx;
use drcm::quadfield::Rat;
use drcm::symplectic::SiegelPoint;
use drcm::theta::TorsionIndex;
use drcm::{Error, Result};
use rug::Float;

fn bad(what: &str, s: &str) -> Error {
    Error::Invalid(format!("cannot parse {what} {s:?}"))
}

fn real(s: &str, prec: u32) -> Result<Float> {
    let p = Float::parse(s).map_err(|_| bad("number", s))?;
    Ok(Float::with_val(prec, p))
}

/// `x`, `yi`, `x+yi`, `x-yi`, `i`, `-i`.
pub fn complex(s: &str, prec: u32) -> Result<Cx> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad("complex number", s));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Cx::real(real(&t, prec)?));
    };
    let split = body
        .char_indices()
        .filter(|&(i, c)| (c == '+' || c == '-') && i > 0 && !body[..i].ends_with(['e', 'E']))
        .map(|(i, _)| i)
        .next_back();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(Cx::new(real(re, prec)?, real(im, prec)?))
}

pub fn rational(s: &str) -> Result<Rat> {
    s.trim().parse::<Rat>().map_err(|_| bad("rational", s))
}

pub fn rationals(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(rational).collect()
}

pub fn complexes(s: &str, prec: u32) -> Result<Vec<Cx>> {
    s.split(',').map(|x| complex(x, prec)).collect()
}

/// Rows separated by `;`, entries by `,`.
pub fn siegel(s: &str, prec: u32) -> Result<SiegelPoint> {
    let rows: Vec<Vec<Cx>> = s.split(';').map(|r| complexes(r, prec)).collect::<Result<_>>()?;
    SiegelPoint::new(drcm::numeric::CMat::new(rows))
}

/// `a1,a2` with rational entries, genus one.
pub fn torsion_index(s: &str) -> Result<TorsionIndex> {
    let v = rationals(s)?;
    let [a1, a2] = v[..] else { return Err(bad("torsion index", s)) };
    Ok(TorsionIndex::new(vec![a1], vec![a2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let p = 64;
        assert_eq!(complex("i", p).unwrap(), Cx::i(p));
        assert_eq!(complex("-i", p).unwrap(), Cx::i(p).neg());
        assert_eq!(complex("0.5+2i", p).unwrap(), Cx::from_f64(p, 0.5, 2.0));
        assert_eq!(complex("2.5e-1-1.5i", p).unwrap(), Cx::from_f64(p, 0.25, -1.5));
        assert_eq!(complex("3", p).unwrap(), Cx::from_f64(p, 3.0, 0.0));
        assert!(complex("x", p).is_err());
    }

    #[test]
    fn index_literals() {
        let a = torsion_index("1/3, 2/3").unwrap();
        assert_eq!(a, TorsionIndex::new(vec![Rat::new(1, 3)], vec![Rat::new(2, 3)]));
        assert!(torsion_index("1/3").is_err());
    }
}
