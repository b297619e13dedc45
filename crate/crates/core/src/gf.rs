//! The residue field `F_q`, `q = p^r`, with a fixed defining polynomial.
//!
//! Elements are stored as integers `0..q` encoding the coefficient vector
//! in base `p`; multiplication goes through discrete-log tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct GfCtx {
    p: u32,
    r: u32,
    q: u32,
    /// Monic defining polynomial, low degree first, length `r + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for GfCtx {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.modulus == o.modulus
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl GfCtx {
    /// The field with the default defining polynomial for `(p, r)`: the
    /// first monic polynomial, in base-`p` counting order, whose root has
    /// multiplicative order `q - 1`.
    pub fn new(p: u32, r: u32) -> Result<Arc<Self>> {
        Self::check_params(p, r)?;
        let q = p.pow(r);
        for code in 0..q {
            let mut m = digits(code, p, r as usize);
            m.push(1);
            if let Some(ctx) = Self::try_build(p, r, m) {
                return Ok(Arc::new(ctx));
            }
        }
        Err(Error::ConfigMismatch(format!("no primitive polynomial found for p={p}, r={r}")))
    }

    /// A field with a caller-supplied monic polynomial (low degree first,
    /// leading 1 included). Fails unless the polynomial is irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::ConfigMismatch("modulus must be monic with digits below p".into()));
        }
        let r = (modulus.len() - 1) as u32;
        Self::check_params(p, r)?;
        Self::try_build(p, r, modulus)
            .map(Arc::new)
            .ok_or_else(|| Error::ConfigMismatch("supplied modulus is not irreducible".into()))
    }

    fn check_params(p: u32, r: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::ConfigMismatch(format!("p = {p} is not prime")));
        }
        if r == 0 || (p as u64).pow(r) > 1 << 16 {
            return Err(Error::ConfigMismatch(format!("q = {p}^{r} out of range")));
        }
        Ok(())
    }

    fn try_build(p: u32, r: u32, modulus: Vec<u32>) -> Option<Self> {
        let q = p.pow(r);
        let mut ctx = GfCtx { p, r, q, modulus, exp: vec![], log: vec![] };
        // Find a generator of the unit group; its powers fill the tables.
        for g in 1..q {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![u32::MAX; q as usize];
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..q - 1 {
                if log[x as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                log[x as usize] = k;
                exp.push(x);
                x = ctx.slow_mul(x, g);
            }
            if ok && x == 1 {
                ctx.exp = exp;
                ctx.log = log;
                return Some(ctx);
            }
        }
        None
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let r = self.r as usize;
        let (da, db) = (digits(a, self.p, r), digits(b, self.p, r));
        let mut prod = vec![0u32; 2 * r];
        for i in 0..r {
            for j in 0..r {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        for k in (r..2 * r).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..r {
                    let sub = c * self.modulus[i] % self.p;
                    prod[k - r + i] = (prod[k - r + i] + self.p - sub) % self.p;
                }
                prod[k] = 0;
            }
        }
        undigits(&prod[..r], self.p)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.r == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// The unique `p`-th root (`F_q` is perfect).
    pub fn frobenius_inv(&self, a: u32) -> u32 {
        self.pow(a, (self.q / self.p) as u64)
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Base-`p` coefficient vector of an element.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.r as usize)
    }

    pub fn from_coords(&self, c: &[u32]) -> u32 {
        undigits(c, self.p)
    }

    /// Whether `c` lies in the image of `z -> z^p - z` on `F_q`.
    pub fn in_wp_image(&self, c: u32) -> bool {
        (0..self.q).any(|z| self.sub(self.frobenius(z), z) == c)
    }

    pub fn elem(self: &Arc<Self>, v: u32) -> Fq {
        Fq { ctx: self.clone(), v }
    }

    pub fn fmt_elem(&self, a: u32) -> String {
        if self.r == 1 {
            return a.to_string();
        }
        let d = self.coords(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, mon.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mon,
                (_, false) => format!("{c}*{mon}"),
            });
        }
        match terms.len() {
            0 => "0".into(),
            1 => terms.pop().unwrap(),
            _ => format!("({})", terms.join("+")),
        }
    }
}

fn digits(mut a: u32, p: u32, r: usize) -> Vec<u32> {
    let mut d = vec![0; r];
    for x in d.iter_mut() {
        *x = a % p;
        a /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// An element of `F_q` carrying its field.
#[derive(Clone)]
pub struct Fq {
    pub ctx: Arc<GfCtx>,
    pub v: u32,
}

impl Fq {
    pub fn is_zero(&self) -> bool {
        self.v == 0
    }
    pub fn is_one(&self) -> bool {
        self.v == 1
    }
    pub fn add(&self, o: &Fq) -> Fq {
        self.ctx.elem(self.ctx.add(self.v, o.v))
    }
    pub fn sub(&self, o: &Fq) -> Fq {
        self.ctx.elem(self.ctx.sub(self.v, o.v))
    }
    pub fn mul(&self, o: &Fq) -> Fq {
        self.ctx.elem(self.ctx.mul(self.v, o.v))
    }
    pub fn neg(&self) -> Fq {
        self.ctx.elem(self.ctx.neg(self.v))
    }
    pub fn inv(&self) -> Option<Fq> {
        self.ctx.inv(self.v).map(|v| self.ctx.elem(v))
    }
    pub fn pow(&self, e: u64) -> Fq {
        self.ctx.elem(self.ctx.pow(self.v, e))
    }
    pub fn frobenius(&self) -> Fq {
        self.ctx.elem(self.ctx.frobenius(self.v))
    }
    pub fn frobenius_inv(&self) -> Fq {
        self.ctx.elem(self.ctx.frobenius_inv(self.v))
    }
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ctx.fmt_elem(self.v))
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ctx.fmt_elem(self.v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small_fields() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1), (2, 3)] {
            let k = GfCtx::new(p, r).unwrap();
            let q = k.q();
            for a in 0..q {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                }
                assert_eq!(k.frobenius(k.frobenius_inv(a)), a);
                for b in 0..q {
                    assert_eq!(k.mul(a, b), k.slow_mul(a, b));
                    // Frobenius is additive.
                    assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
                }
            }
        }
    }

    #[test]
    fn supplied_modulus_checked() {
        assert!(GfCtx::with_modulus(2, vec![1, 1, 1]).is_ok());
        assert!(GfCtx::with_modulus(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn wp_image_has_size_q_over_p() {
        let k = GfCtx::new(3, 2).unwrap();
        assert_eq!((0..9).filter(|&c| k.in_wp_image(c)).count(), 3);
    }
}
