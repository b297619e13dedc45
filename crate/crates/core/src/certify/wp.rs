//! Decision procedures over `F_q(x)`: membership in the image of
//! `Z -> Z^p - Z` and in the subfield of `p`-th powers.

use std::sync::Arc;

use crate::gf::GfCtx;
use crate::poly::{Poly, RatFunc};

/// Over a perfect field, `r` is a `p`-th power iff `dr/dx = 0`.
pub fn is_pth_power(r: &RatFunc) -> bool {
    r.derivative().is_zero()
}

/// `E` with `E^p = d`, when `d` is a `p`-th power.
fn poly_pth_root(k: &Arc<GfCtx>, d: &Poly) -> Option<Poly> {
    let g = d.deflate(k.p() as usize)?;
    Some(g.map_coeffs(|a| k.frobenius_inv(a)))
}

/// Solves `A x = b` over `F_q`; rows of `a` are equations.
fn solve(k: &GfCtx, mut a: Vec<Vec<u32>>, mut b: Vec<u32>, nvars: usize) -> Option<Vec<u32>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..nvars {
        let Some(r) = (row..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, r);
        b.swap(row, r);
        let inv = k.inv(a[row][col]).unwrap();
        for c in 0..nvars {
            a[row][c] = k.mul(a[row][c], inv);
        }
        b[row] = k.mul(b[row], inv);
        for r in 0..a.len() {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..nvars {
                    a[r][c] = k.sub(a[r][c], k.mul(f, a[row][c]));
                }
                b[r] = k.sub(b[r], k.mul(f, b[row]));
            }
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut x = vec![0; nvars];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r];
    }
    Some(x)
}

/// `A` of degree below `deg e` with `A^p = n mod e`, if one exists. Finds
/// `k` with `n mod e + k e` supported on `pZ`, which is linear in `k`.
pub fn pth_root_mod(n: &Poly, e: &Poly) -> Option<Poly> {
    let k = e.ctx.clone();
    let p = k.p() as usize;
    let de = e.degree()?;
    let n0 = n.rem(e);
    let nvars = (p - 1) * de;
    let eqs: Vec<usize> = (0..p * de).filter(|i| i % p != 0).collect();
    let mut a = Vec::with_capacity(eqs.len());
    let mut b = Vec::with_capacity(eqs.len());
    for &i in &eqs {
        a.push((0..nvars).map(|j| if i >= j { e.coeff(i - j) } else { 0 }).collect());
        b.push(k.neg(n0.coeff(i)));
    }
    let kk = solve(&k, a, b, nvars)?;
    let m = n0.add(&Poly::new(&k, kk).mul(e));
    poly_pth_root(&k, &m)
}

/// Whether `Z^p - Z = r` has a root in `F_q(x)`. Pole parts are peeled
/// first (each step lowers the total pole multiplicity), then the
/// polynomial part from the top degree, ending at a constant of `F_q`.
pub fn in_wp_image(r: &RatFunc) -> bool {
    let k = r.ctx().clone();
    let p = k.p() as u64;
    let wp = |y: &RatFunc| y.pow(p).sub(y);
    let mut r = r.clone();
    while !r.den().is_one() {
        // Poles of y^p - y have orders p * ord(y).
        let Some(e) = poly_pth_root(&k, r.den()) else { return false };
        let Some(a0) = pth_root_mod(r.num(), &e) else { return false };
        let before = r.den().degree().unwrap();
        r = r.sub(&wp(&RatFunc::new(a0, e)));
        debug_assert!(r.den().degree().unwrap() < before);
    }
    let mut f = r.num().clone();
    while let Some(d) = f.degree().filter(|&d| d > 0) {
        if d % p as usize != 0 {
            return false;
        }
        let b = Poly::monomial(&k, k.frobenius_inv(f.lead()), d / p as usize);
        f = f.sub(&b.pow(p).sub(&b));
    }
    k.in_wp_image(f.coeff(0))
}
