//! Ordered value groups of the shape `Q + Q*lambda` with `lambda^2 = D`.
//!
//! Every comparison is decided by exact rational sign analysis, so
//! rational independence of `lambda` over the coefficient values is never
//! approximated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

pub fn rat_int(n: i128) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"3"`, `"-1/4"`, or `"2/6"` (reduced on construction).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<i128>().ok().map(Rat::from_integer),
    }
}

/// The square `D` of the irrational generator `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lambda(Rat);

impl Lambda {
    pub fn new(d: Rat) -> Result<Self> {
        if d <= Rat::zero() {
            return Err(Error::ConfigMismatch(format!("D = {d} must be positive")));
        }
        if is_rational_square(d) {
            return Err(Error::ConfigMismatch(format!("D = {d} is a rational square")));
        }
        Ok(Lambda(d))
    }

    pub fn square(&self) -> Rat {
        self.0
    }
}

impl Default for Lambda {
    fn default() -> Self {
        Lambda(rat_int(2))
    }
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2).max(0)..=r + 2).find(|c| c * c == n)
}

fn is_rational_square(d: Rat) -> bool {
    isqrt(*d.numer()).is_some() && isqrt(*d.denom()).is_some()
}

/// `a + b*lambda`. Equality and order ignore the carried `D`, which must
/// agree between operands whenever a `b` component is nonzero.
#[derive(Clone, Copy, Debug)]
pub struct Value {
    pub a: Rat,
    pub b: Rat,
    lambda: Lambda,
}

impl Value {
    pub fn new(a: Rat, b: Rat) -> Self {
        Value { a, b, lambda: Lambda::default() }
    }

    pub fn with_lambda(a: Rat, b: Rat, lambda: Lambda) -> Self {
        Value { a, b, lambda }
    }

    pub fn rational(a: Rat) -> Self {
        Value::new(a, Rat::zero())
    }

    pub fn zero() -> Self {
        Value::new(Rat::zero(), Rat::zero())
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn relabel(self, lambda: Lambda) -> Self {
        Value { lambda, ..self }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, k: Rat) -> Self {
        Value { a: self.a * k, b: self.b * k, lambda: self.lambda }
    }

    pub fn times(&self, k: i64) -> Self {
        self.scale(rat_int(k as i128))
    }

    /// Sign of `a + b*sqrt(D)`.
    pub fn signum(&self) -> Ordering {
        sign_of(self.a, self.b, self.lambda.square())
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Floating approximation, for display and heuristics only.
    pub fn approx(&self) -> f64 {
        let f = |r: Rat| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * f(self.lambda.square()).sqrt()
    }

    pub fn parse_with(s: &str, lambda: Lambda) -> Result<Self> {
        let v: Value = s.parse()?;
        Ok(v.relabel(lambda))
    }
}

fn sign_of(da: Rat, db: Rat, d: Rat) -> Ordering {
    let zero = Rat::zero();
    let sa = da.cmp(&zero);
    let sb = db.cmp(&zero);
    match (sa, sb) {
        (_, Ordering::Equal) => sa,
        (Ordering::Equal, _) => sb,
        _ if sa == sb => sa,
        (Ordering::Greater, _) => (da * da).cmp(&(db * db * d)),
        _ => (db * db * d).cmp(&(da * da)),
    }
}

/// Exact comparison of two values.
pub fn compare(v1: &Value, v2: &Value) -> Ordering {
    v1.cmp(v2)
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Eq for Value {}

impl std::hash::Hash for Value {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        let lambda = if self.b.is_zero() { other.lambda } else { self.lambda };
        debug_assert!(
            self.b.is_zero() || other.b.is_zero() || self.lambda == other.lambda,
            "comparing values over different lambda"
        );
        sign_of(self.a - other.a, self.b - other.b, lambda.square())
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn pick(l: &Value, r: &Value) -> Lambda {
    if l.b.is_zero() {
        r.lambda
    } else {
        l.lambda
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, o: Value) -> Value {
        Value { a: self.a + o.a, b: self.b + o.b, lambda: pick(&self, &o) }
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, o: Value) -> Value {
        Value { a: self.a - o.a, b: self.b - o.b, lambda: pick(&self, &o) }
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value { a: -self.a, b: -self.b, lambda: self.lambda }
    }
}

impl Mul<Rat> for Value {
    type Output = Value;
    fn mul(self, k: Rat) -> Value {
        self.scale(k)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl FromStr for Value {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::SyntaxError { position: 0, expected: "value \"(a, b)\"".into() };
        let inner = s.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        Ok(Value::new(parse_rat(a).ok_or_else(bad)?, parse_rat(b).ok_or_else(bad)?))
    }
}

/// A value of a composite valuation, most significant component first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexValue {
    pub components: Vec<Value>,
}

impl LexValue {
    pub fn new(components: Vec<Value>) -> Self {
        LexValue { components }
    }

    /// Image under the quotient by the convex subgroup of the trailing
    /// `drop` components.
    pub fn project(&self, drop: usize) -> LexValue {
        let keep = self.components.len().saturating_sub(drop);
        LexValue { components: self.components[..keep].to_vec() }
    }
}

impl Add for &LexValue {
    type Output = LexValue;
    fn add(self, o: &LexValue) -> LexValue {
        assert_eq!(self.components.len(), o.components.len());
        LexValue {
            components: self.components.iter().zip(&o.components).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Ord for LexValue {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.components.iter().zip(&other.components) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.components.len().cmp(&other.components.len())
    }
}

impl PartialOrd for LexValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finitely generated subgroup given by any generating list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgroupSpec {
    pub generators: Vec<Value>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Value>) -> Self {
        SubgroupSpec { generators }
    }

    /// `<(1/den, 0), vx>`: a coefficient lattice plus the generator value.
    pub fn lattice_plus(den: i128, vx: Value) -> Self {
        SubgroupSpec::new(vec![Value::rational(rat(1, den)), vx])
    }

    pub fn contains(&self, v: &Value) -> bool {
        matches!(subgroup_membership(v, self), Membership::Member(_))
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(Vec<i128>),
    NonMember,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Finite(u128),
    Infinite,
}

fn lcm_denoms<'a>(vals: impl IntoIterator<Item = &'a Value>) -> i128 {
    vals.into_iter().fold(1i128, |l, v| l.lcm(v.a.denom()).lcm(v.b.denom()))
}

fn to_int(v: &Value, scale: i128) -> (i128, i128) {
    let a = v.a * rat_int(scale);
    let b = v.b * rat_int(scale);
    debug_assert!(a.is_integer() && b.is_integer());
    (a.to_integer(), b.to_integer())
}

/// Row echelon form of the integer generator matrix, tracking for every
/// row the combination of the original generators that produced it.
struct Echelon {
    /// (pivot column, row, coefficients)
    rows: Vec<(usize, [i128; 2], Vec<i128>)>,
}

impl Echelon {
    fn build(gens: &[(i128, i128)]) -> Self {
        let n = gens.len();
        let mut work: Vec<([i128; 2], Vec<i128>)> = gens
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                let mut c = vec![0; n];
                c[i] = 1;
                ([x, y], c)
            })
            .collect();
        let mut rows = Vec::new();
        for col in 0..2 {
            // Fold every remaining row into one pivot by extended gcd.
            let mut pivot: Option<([i128; 2], Vec<i128>)> = None;
            let mut rest = Vec::new();
            for (v, c) in work.drain(..) {
                if v[col] == 0 {
                    rest.push((v, c));
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some((v, c)),
                    Some((pv, pc)) => {
                        let (g, s, t) = ext_gcd(pv[col], v[col]);
                        let (u, w) = (pv[col] / g, v[col] / g);
                        let new_p = lin(&pv, &pc, s, &v, &c, t);
                        let zeroed = lin(&pv, &pc, -w, &v, &c, u);
                        debug_assert_eq!(zeroed.0[col], 0);
                        rest.push(zeroed);
                        pivot = Some(new_p);
                    }
                }
            }
            if let Some((mut v, mut c)) = pivot {
                if v[col] < 0 {
                    v = [-v[0], -v[1]];
                    c.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push((col, v, c));
            }
            work = rest;
        }
        Echelon { rows }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn solve(&self, target: (i128, i128), n: usize) -> Option<Vec<i128>> {
        let mut rem = [target.0, target.1];
        let mut coeffs = vec![0i128; n];
        for (col, v, c) in &self.rows {
            if rem[*col] % v[*col] != 0 {
                return None;
            }
            let k = rem[*col] / v[*col];
            rem[0] -= k * v[0];
            rem[1] -= k * v[1];
            for (x, y) in coeffs.iter_mut().zip(c) {
                *x += k * y;
            }
        }
        (rem == [0, 0]).then_some(coeffs)
    }

    fn covolume(&self) -> i128 {
        self.rows.iter().map(|(col, v, _)| v[*col].abs()).product()
    }
}

type Row = ([i128; 2], Vec<i128>);

fn lin(a: &[i128; 2], ac: &[i128], s: i128, b: &[i128; 2], bc: &[i128], t: i128) -> Row {
    (
        [s * a[0] + t * b[0], s * a[1] + t * b[1]],
        ac.iter().zip(bc).map(|(x, y)| s * x + t * y).collect(),
    )
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Integer combination of the generators equal to `v`, if one exists.
pub fn subgroup_membership(v: &Value, g: &SubgroupSpec) -> Membership {
    let scale = lcm_denoms(g.generators.iter().chain(std::iter::once(v)));
    let ints: Vec<_> = g.generators.iter().map(|x| to_int(x, scale)).collect();
    let ech = Echelon::build(&ints);
    match ech.solve(to_int(v, scale), ints.len()) {
        Some(c) => Membership::Member(c),
        None => Membership::NonMember,
    }
}

/// `(G1 : G0)` for `G0` contained in `G1`.
pub fn quotient_index(g1: &SubgroupSpec, g0: &SubgroupSpec) -> Result<Index> {
    for gen in &g0.generators {
        if !g1.contains(gen) {
            return Err(Error::NotASubgroup(gen.to_string()));
        }
    }
    let scale = lcm_denoms(g1.generators.iter().chain(&g0.generators));
    let e1 = Echelon::build(&g1.generators.iter().map(|x| to_int(x, scale)).collect::<Vec<_>>());
    let e0 = Echelon::build(&g0.generators.iter().map(|x| to_int(x, scale)).collect::<Vec<_>>());
    if e1.rank() != e0.rank() {
        return Ok(Index::Infinite);
    }
    // Both echelon forms share pivot columns once the spans agree.
    Ok(Index::Finite((e0.covolume() / e1.covolume()) as u128))
}

/// Dimension of the rational span of the generators.
pub fn rational_rank(g: &SubgroupSpec) -> u32 {
    let scale = lcm_denoms(&g.generators);
    Echelon::build(&g.generators.iter().map(|x| to_int(x, scale)).collect::<Vec<_>>()).rank() as u32
}

/// The generator of the subgroup's rational part and, when present, a
/// complementary generator with minimal positive `lambda` coordinate.
pub fn split_lattice(g: &SubgroupSpec) -> (Option<Rat>, Option<Value>) {
    let scale = lcm_denoms(&g.generators);
    let ints: Vec<_> = g.generators.iter().map(|x| to_int(x, scale)).collect();
    // Echelon with the lambda coordinate as the first pivot column.
    let swapped: Vec<_> = ints.iter().map(|&(x, y)| (y, x)).collect();
    let ech = Echelon::build(&swapped);
    let mut rational = None;
    let mut transcendental = None;
    let s = rat_int(scale);
    for (col, v, _) in &ech.rows {
        if *col == 0 {
            transcendental = Some(Value::new(rat_int(v[1]) / s, rat_int(v[0]) / s));
        } else {
            rational = Some(rat_int(v[1]).abs() / s);
        }
    }
    (rational, transcendental)
}

pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn rat_abs(r: Rat) -> Rat {
    r.abs()
}
