//! Arithmetic in `Z_q[pi]/(pi^M - p)` truncated modulo `p^K`.
//!
//! An element is a flat array of `M` blocks, block `j` holding the
//! coordinates (over the defining polynomial of `F_q`) of the coefficient
//! `A_j` of `pi^j`. Every coordinate is kept in `[0, p^K)`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf::GfCtx;

/// Structure of a mixed-characteristic element; see `MixedElem`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Repr {
    /// Zero to absolute precision `prec` (in `1/M` units), or exactly.
    Zero(Option<i64>),
    /// `pi^e * y` with `y` a unit known modulo `pi^(prec - e)`.
    Unit { e: i64, prec: i64, y: Vec<i128> },
}

#[derive(Debug)]
pub struct MixedCtx {
    pub(crate) gf: Arc<GfCtx>,
    pub(crate) p: u32,
    pub(crate) r: usize,
    /// Exponent denominator bound: `pi = p^(1/M)`.
    pub(crate) m: i64,
    /// Declared relative precision in units of `vp`.
    pub(crate) n: u32,
    /// Working relative precision cap in `1/M` units.
    pub(crate) cap: i64,
    pub(crate) k: u32,
    pub(crate) pk: i128,
    fmod: Vec<i128>,
    /// The unit `u` of `C = u * pi^(M/(p-1))`.
    pub(crate) c_unit: Vec<i128>,
    pub(crate) zeta: OnceLock<Repr>,
}

/// Default exponent denominator bound for `p`.
pub fn default_m(p: u32) -> i64 {
    (p as i64 - 1) * (p as i64).pow(3)
}

impl MixedCtx {
    /// `n` is the relative precision in `p`-adic digits; `m` defaults to
    /// [`default_m`].
    pub fn new(gf: Arc<GfCtx>, n: u32, m: Option<i64>) -> Result<Arc<Self>> {
        let p = gf.p();
        let r = gf.r() as usize;
        let m = m.unwrap_or_else(|| default_m(p));
        if m < 1 || m % (p as i64 - 1) != 0 {
            return Err(Error::ConfigMismatch(format!("M = {m} must be a positive multiple of p - 1")));
        }
        if n == 0 {
            return Err(Error::ConfigMismatch("precision N must be positive".into()));
        }
        let nw = n as i64 + 2;
        let k = n + 3;
        let bits = (k as f64) * (p as f64).log2();
        if 2.0 * bits + ((m as f64) * (r as f64)).log2() + 2.0 > 125.0 {
            return Err(Error::ConfigMismatch(format!("precision N = {n} too large for p = {p}, M = {m}")));
        }
        let pk = (p as i128).pow(k);
        let fmod: Vec<i128> = gf.modulus().iter().map(|&c| c as i128).collect();
        let mut ctx = MixedCtx {
            gf: gf.clone(),
            p,
            r,
            m,
            n,
            cap: nw * m,
            k,
            pk,
            fmod,
            c_unit: vec![],
            zeta: OnceLock::new(),
        };
        ctx.c_unit = if p == 2 {
            ctx.zq_from_int(-1)
        } else {
            let minus_one = gf.neg(1);
            let xi = (1..gf.q()).find(|&x| gf.pow(x, p as u64 - 1) == minus_one).ok_or_else(|| {
                Error::ConfigMismatch(format!(
                    "(-{p})^(1/(p-1)) needs a (p-1)-th root of -1 in F_q; use an even residue degree"
                ))
            })?;
            ctx.teich(xi)
        };
        Ok(Arc::new(ctx))
    }

    pub fn residue_field(&self) -> &Arc<GfCtx> {
        &self.gf
    }
    pub fn precision_digits(&self) -> u32 {
        self.n
    }
    pub fn denominator_bound(&self) -> i64 {
        self.m
    }

    fn md(&self, x: i128) -> i128 {
        x.rem_euclid(self.pk)
    }

    // ---- Z_q = Z_p[z]/(f) ----

    pub(crate) fn zq_from_int(&self, n: i128) -> Vec<i128> {
        let mut a = vec![0; self.r];
        a[0] = self.md(n);
        a
    }

    fn zq_reduce(&self, mut raw: Vec<i128>) -> Vec<i128> {
        let r = self.r;
        for x in raw.iter_mut() {
            *x = self.md(*x);
        }
        for d in (r..raw.len()).rev() {
            let c = raw[d];
            if c != 0 {
                for i in 0..r {
                    raw[d - r + i] = self.md(raw[d - r + i] - c * self.fmod[i]);
                }
            }
        }
        raw.truncate(r);
        raw.resize(r, 0);
        raw
    }

    pub(crate) fn zq_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let r = self.r;
        let mut raw = vec![0i128; 2 * r - 1];
        for i in 0..r {
            for j in 0..r {
                raw[i + j] += a[i] * b[j];
            }
        }
        self.zq_reduce(raw)
    }

    fn zq_pow(&self, a: &[i128], mut e: u64) -> Vec<i128> {
        let mut acc = self.zq_from_int(1);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.zq_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.zq_mul(&base, &base);
            }
        }
        acc
    }

    /// Teichmuller representative of the residue class with code `d`.
    pub(crate) fn teich(&self, d: u32) -> Vec<i128> {
        let mut a: Vec<i128> = self.gf.coords(d).into_iter().map(|c| c as i128).collect();
        if d == 0 {
            return a;
        }
        for _ in 0..=self.k {
            a = self.zq_pow(&a, self.gf.q() as u64);
        }
        a
    }

    fn vp_int(&self, mut x: i128) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let p = self.p as i128;
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        Some(v)
    }

    fn ppow(&self, e: i64) -> i128 {
        if e >= self.k as i64 {
            0
        } else {
            (self.p as i128).pow(e as u32)
        }
    }

    // ---- Z_q[pi]/(pi^M - p) ----

    pub(crate) fn y_len(&self) -> usize {
        self.m as usize * self.r
    }

    pub(crate) fn y_from_zq(&self, a: &[i128]) -> Vec<i128> {
        let mut y = vec![0; self.y_len()];
        y[..self.r].copy_from_slice(a);
        y
    }

    pub(crate) fn y_one(&self) -> Vec<i128> {
        self.y_from_zq(&self.zq_from_int(1))
    }

    pub(crate) fn y_add(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        a.iter().zip(b).map(|(x, y)| self.md(x + y)).collect()
    }

    pub(crate) fn y_neg(&self, a: &[i128]) -> Vec<i128> {
        a.iter().map(|x| self.md(-x)).collect()
    }

    pub(crate) fn y_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let (m, r) = (self.m as usize, self.r);
        let w = 2 * r - 1;
        let mut raw = vec![0i128; (2 * m - 1) * w];
        for i in 0..m {
            let ai = &a[i * r..(i + 1) * r];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..m {
                let bj = &b[j * r..(j + 1) * r];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let row = (i + j) * w;
                for s in 0..r {
                    if ai[s] == 0 {
                        continue;
                    }
                    for t in 0..r {
                        raw[row + s + t] += ai[s] * bj[t];
                    }
                }
            }
        }
        let blocks: Vec<Vec<i128>> = raw.chunks(w).map(|c| self.zq_reduce(c.to_vec())).collect();
        let p = self.p as i128;
        let mut out = vec![0; m * r];
        for j in 0..m {
            for s in 0..r {
                let hi = if j + m < blocks.len() { blocks[j + m][s] } else { 0 };
                out[j * r + s] = self.md(blocks[j][s] + p * hi);
            }
        }
        out
    }

    /// Multiplication by `pi^k`, `k >= 0`.
    pub(crate) fn y_mul_pi(&self, a: &[i128], k: i64) -> Vec<i128> {
        let (m, r) = (self.m, self.r);
        let mut out = vec![0; a.len()];
        for j in 0..m {
            let t = j + k;
            let f = self.ppow(t / m);
            if f == 0 {
                continue;
            }
            let dst = (t % m) as usize * r;
            for s in 0..r {
                out[dst + s] = self.md(a[j as usize * r + s] * f);
            }
        }
        out
    }

    /// Exact division by `pi^t`, where `t` does not exceed the valuation.
    pub(crate) fn y_div_pi(&self, a: &[i128], t: i64) -> Vec<i128> {
        let (m, r) = (self.m, self.r);
        let (q, s) = (t / m, t % m);
        let p = self.p as i128;
        let dq = (self.p as i128).pow(q as u32);
        let mut out = vec![0; a.len()];
        for j in 0..m {
            let (dst, div) = if j >= s { (j - s, dq) } else { (j - s + m, dq * p) };
            for c in 0..r {
                out[dst as usize * r + c] = a[j as usize * r + c] / div;
            }
        }
        out
    }

    /// `pi`-adic valuation, in `1/M` units.
    pub(crate) fn y_val(&self, a: &[i128]) -> Option<i64> {
        let r = self.r;
        (0..self.m)
            .filter_map(|j| {
                let v = a[j as usize * r..(j as usize + 1) * r].iter().filter_map(|&x| self.vp_int(x)).min()?;
                Some(j + self.m * v as i64)
            })
            .min()
    }

    /// Reduction modulo `pi^rel` to canonical digits.
    pub(crate) fn y_trunc(&self, a: &[i128], rel: i64) -> Vec<i128> {
        let (m, r) = (self.m, self.r);
        let mut out = a.to_vec();
        for j in 0..m {
            let kd = if rel <= j { 0 } else { (rel - j + m - 1) / m };
            let md = if kd >= self.k as i64 { self.pk } else { (self.p as i128).pow(kd as u32) };
            for c in 0..r {
                let x = &mut out[j as usize * r + c];
                *x = x.rem_euclid(md);
            }
        }
        out
    }

    /// Residue class code of the constant block.
    pub(crate) fn y_residue(&self, a: &[i128]) -> u32 {
        let p = self.p as i128;
        let coords: Vec<u32> = a[..self.r].iter().map(|&x| x.rem_euclid(p) as u32).collect();
        self.gf.from_coords(&coords)
    }

    /// Inverse of a unit modulo `pi^rel`, by Newton iteration.
    pub(crate) fn y_inv(&self, a: &[i128], rel: i64) -> Vec<i128> {
        let d = self.y_residue(a);
        let di = self.gf.inv(d).expect("y_inv of a non-unit");
        let lift: Vec<i128> = self.gf.coords(di).into_iter().map(|c| c as i128).collect();
        let mut z = self.y_trunc(&self.y_from_zq(&lift), rel);
        let two = self.y_from_zq(&self.zq_from_int(2));
        let mut correct = 1;
        while correct < rel {
            let az = self.y_mul(a, &z);
            z = self.y_trunc(&self.y_mul(&z, &self.y_add(&two, &self.y_neg(&az))), rel);
            correct *= 2;
        }
        z
    }
}
