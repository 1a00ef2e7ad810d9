use super::poly::ModPoly;
use crate::error::{Error, Result};

/// Quotient `R[x]/(f)` with `f` monic in a distinguished variable `v`.
///
/// Normal forms have `v`-degree below `deg_v f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartRing {
    relation: ModPoly,
    var: usize,
    degree: u32,
    /// `v^d - f`, so that `v^d` reduces to `tail`.
    tail: ModPoly,
}

impl ChartRing {
    /// Accepts `f` whose leading coefficient in `v` is a unit constant and
    /// rescales it to be monic.
    pub fn new(relation: &ModPoly, var: usize) -> Result<Self> {
        let degree = relation
            .degree_in(var)
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::Precondition(format!("relation does not involve {}", relation.vars()[var])))?;
        let m = relation.modulus();
        let mut lead = None;
        for (e, &c) in relation.terms() {
            if e[var] == degree {
                if e.iter().enumerate().any(|(i, &k)| i != var && k > 0) || lead.is_some() {
                    return Err(Error::Precondition("relation is not monic in the chart variable".into()));
                }
                lead = Some(c);
            }
        }
        let inv = m
            .inv(lead.expect("degree attained"))
            .ok_or_else(|| Error::Precondition("leading coefficient is not a unit".into()))?;
        let relation = relation.scale(inv);
        let mut vd = vec![0; relation.nvars()];
        vd[var] = degree;
        let tail = relation.monomial(vd, 1).sub(&relation);
        Ok(ChartRing {
            relation,
            var,
            degree,
            tail,
        })
    }

    /// Picks the first variable in which the relation is monic.
    pub fn auto(relation: &ModPoly) -> Result<Self> {
        (0..relation.nvars())
            .rev()
            .find_map(|v| ChartRing::new(relation, v).ok())
            .ok_or_else(|| Error::Precondition("relation is not monic in any variable".into()))
    }

    pub fn relation(&self) -> &ModPoly {
        &self.relation
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn normal_form(&self, g: &ModPoly) -> ModPoly {
        let v = self.var;
        let d = self.degree;
        let mut r = g.clone();
        loop {
            let mut low = r.zero_like();
            let mut high = r.zero_like();
            for (e, &c) in r.terms() {
                if e[v] >= d {
                    let mut ne = e.clone();
                    ne[v] -= d;
                    high.add_term(ne, c);
                } else {
                    low.add_term(e.clone(), c);
                }
            }
            if high.is_zero() {
                return low;
            }
            r = low.add(&high.mul(&self.tail));
        }
    }

    pub fn mul(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        self.normal_form(&a.mul(b))
    }

    pub fn pow(&self, a: &ModPoly, mut n: u64) -> ModPoly {
        let mut r = a.constant_like(1);
        let mut base = self.normal_form(a);
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(&r, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    pub fn is_zero(&self, g: &ModPoly) -> bool {
        self.normal_form(g).is_zero()
    }

    /// The same chart with the relation reduced into a smaller coefficient ring.
    pub fn reduce_to(&self, target: super::Modulus) -> Result<Self> {
        ChartRing::new(&self.relation.to_modulus(target), self.var)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_poly, Modulus};
    use super::*;

    #[test]
    fn normal_form_examples() {
        let m = Modulus::prime(5).unwrap();
        let f = parse_poly("y^2 - x^3 - x", m).unwrap();
        let ring = ChartRing::new(&f, 1).unwrap();
        let y = f.var(1);
        let x = f.var(0);
        let x3x = x.pow(3).add(&x);
        assert_eq!(ring.normal_form(&y.pow(2)), x3x);
        assert_eq!(ring.normal_form(&y.pow(3)), x3x.mul(&y));
        assert_eq!(ring.normal_form(&x), x);
    }

    #[test]
    fn rescales_unit_leading_coefficient() {
        let m = Modulus::new(5, 2).unwrap();
        let f = parse_poly("2*y^2 - x^3", m).unwrap();
        let ring = ChartRing::new(&f, 1).unwrap();
        assert_eq!(ring.relation().coeff(&[0, 2]), 1);
        assert!(ChartRing::new(&parse_poly("x*y^2 - 1", m).unwrap(), 1).is_err());
    }
}
