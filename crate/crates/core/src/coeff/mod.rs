//! The ground coefficient field `K`: henselian with residue characteristic
//! `p` and closed under `p`-th roots, in two exact models.
//!
//! * [`EqElem`]: the perfect hull of `F_q(t)`, exact.
//! * [`MixedElem`]: generalized `p`-adic series with bounded exponent
//!   denominators and a declared relative precision.

mod equal;
mod mixed;
mod mixed_ring;

use std::fmt;
use std::sync::Arc;

pub use equal::EqElem;
pub use mixed::MixedElem;
pub use mixed_ring::MixedCtx;

use crate::error::{Error, Result};
use crate::gf::{Fq, GfCtx};
use crate::values::Rat;

/// Field operations shared by both coefficient models.
pub trait Coeff: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + Sized {
    type Ctx: Clone + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_int(ctx: &Self::Ctx, n: i64) -> Self;
    /// A canonical lift of a residue class (Teichmuller in mixed char).
    fn lift(ctx: &Self::Ctx, d: &Fq) -> Self;
    fn residue_field(ctx: &Self::Ctx) -> Arc<GfCtx>;
    fn prime(ctx: &Self::Ctx) -> u32;
    fn is_equal_char() -> bool;

    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// Exact value in units of `vt` (equal char) or `vp` (mixed char).
    fn value(&self) -> Result<Rat>;
    /// Absolute precision; `None` for exact elements.
    fn precision(&self) -> Option<Rat>;
    fn pth_root(&self) -> Result<Self>;
    fn residue(&self) -> Result<Fq>;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `C` with `C^(p-1) = -p`; only the mixed model has one.
    fn c_const(_ctx: &Self::Ctx) -> Result<Self> {
        Err(Error::CharacteristicMismatch("C = (-p)^(1/(p-1)) needs mixed characteristic".into()))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one(&self.ctx())).is_zero()
    }

    /// Level `value(e - 1)` of a 1-unit.
    fn unit_level(&self) -> Result<Rat> {
        let d = self.sub(&Self::one(&self.ctx()));
        if d.is_zero() {
            return Err(Error::NotAOneUnit);
        }
        let lvl = d.value()?;
        if lvl <= Rat::from_integer(0) {
            return Err(Error::NotAOneUnit);
        }
        Ok(lvl)
    }
}
