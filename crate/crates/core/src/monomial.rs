//! Nakajima monomials and extended Nakajima monomials.
//!
//! A monomial is a finitely supported map `(i, m) -> y_i(m)`. For ordinary
//! monomials the exponent is an integer; for extended monomials it is a pair
//! of integers ordered lexicographically. Both share one implementation,
//! generic over [`Exponent`], so the crystal structure (`wt`, `φ_i`, `ε_i`,
//! `f̃_i`, `ẽ_i`) is written once.
//!
//! The structure depends on a [`CMatrix`], integers `c_{ij}` with
//! `c_{ij} + c_{ji} = 1`, through the monomials
//!
//! ```text
//! A_i(m) = Y_i(m) Y_i(m+1) Π_{j≠i} Y_j(m + c_{ji})^{a_{ji}}
//! ```
//!
//! For extended monomials every exponent of `A_i(m)` sits in the second
//! component, i.e. `Y^{(0, ±1)}`.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{DeserializeOwned, Deserializer, Error as _};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cartan::{cartan_entry, ExtWeight, Rank, Weight};
use crate::error::{Error, Result};
use crate::graph::Crystal;

/// Exponent pair `(y⁰, y¹)` with the lexicographic order.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct ExpPair {
    pub a: i64,
    pub b: i64,
}

impl ExpPair {
    pub const fn new(a: i64, b: i64) -> Self {
        ExpPair { a, b }
    }
}

impl From<(i64, i64)> for ExpPair {
    fn from((a, b): (i64, i64)) -> Self {
        ExpPair { a, b }
    }
}

impl From<ExpPair> for (i64, i64) {
    fn from(p: ExpPair) -> Self {
        (p.a, p.b)
    }
}

impl Add for ExpPair {
    type Output = ExpPair;
    fn add(self, o: ExpPair) -> ExpPair {
        ExpPair::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for ExpPair {
    type Output = ExpPair;
    fn sub(self, o: ExpPair) -> ExpPair {
        ExpPair::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for ExpPair {
    type Output = ExpPair;
    fn neg(self) -> ExpPair {
        ExpPair::new(-self.a, -self.b)
    }
}

impl Display for ExpPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Exponent type of a monomial variable.
pub trait Exponent:
    Copy
    + Ord
    + Hash
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    /// Tag used in the JSON encoding.
    const KIND: &'static str;

    /// Exponent carrying `v` in the weight-bearing slot: `v` itself, or `(0, v)`.
    fn lift(v: i64) -> Self;

    /// The weight-bearing part: `v`, or the second component.
    fn projected(self) -> i64;

    fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl Exponent for i64 {
    const ZERO: Self = 0;
    const KIND: &'static str = "plain";

    fn lift(v: i64) -> Self {
        v
    }

    fn projected(self) -> i64 {
        self
    }
}

impl Exponent for ExpPair {
    const ZERO: Self = ExpPair::new(0, 0);
    const KIND: &'static str = "ext";

    fn lift(v: i64) -> Self {
        ExpPair::new(0, v)
    }

    fn projected(self) -> i64 {
        self.b
    }
}

/// The integers `c_{ij}` (`i ≠ j`) with `c_{ij} + c_{ji} = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CMatrix {
    n: Rank,
    entries: Vec<i64>,
}

impl CMatrix {
    /// Builds the matrix from `entry(i, j)` for all `i ≠ j`.
    pub fn new(n: Rank, entry: impl Fn(usize, usize) -> i64) -> Result<Self> {
        let size = n.get();
        let mut entries = vec![0; size * size];
        for i in n.indices() {
            for j in n.indices() {
                if i != j {
                    entries[(i - 1) * size + (j - 1)] = entry(i, j);
                }
            }
        }
        let c = CMatrix { n, entries };
        for i in n.indices() {
            for j in n.indices() {
                if i != j && c.get(i, j) + c.get(j, i) != 1 {
                    return Err(Error::InvalidCMatrix(format!(
                        "c_{i}{j} + c_{j}{i} = {} != 1",
                        c.get(i, j) + c.get(j, i)
                    )));
                }
            }
        }
        Ok(c)
    }

    /// `c_{ij} = 1` for `i < j` and `0` for `i > j`.
    pub fn standard(n: Rank) -> Self {
        CMatrix::new(n, |i, j| i64::from(i < j)).expect("standard c-matrix is valid")
    }

    /// Reads `c_{ij}` for `i < j` from a bit string in the order
    /// `(1,2), (1,3), .., (1,n), (2,3), ..`; `c_{ji} = 1 - c_{ij}`.
    pub fn from_upper_bits(n: Rank, bits: &str) -> Result<Self> {
        let size = n.get();
        let expected = size * (size - 1) / 2;
        let bits: Vec<i64> = bits
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidCMatrix(format!("bad bit {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != expected {
            return Err(Error::InvalidCMatrix(format!(
                "expected {expected} bits for rank {size}, got {}",
                bits.len()
            )));
        }
        let mut upper = BTreeMap::new();
        let mut it = bits.into_iter();
        for i in 1..=size {
            for j in i + 1..=size {
                upper.insert((i, j), it.next().unwrap());
            }
        }
        CMatrix::new(n, |i, j| {
            if i < j {
                upper[&(i, j)]
            } else {
                1 - upper[&(j, i)]
            }
        })
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    /// `c_{ij}`; the diagonal is unused and reads as 0.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i - 1) * self.n.get() + (j - 1)]
    }
}

/// `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A (possibly extended) Nakajima monomial. Zero exponents are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial<E> {
    n: Rank,
    exps: BTreeMap<(usize, i64), E>,
}

pub type PlainMonomial = Monomial<i64>;
pub type ExtMonomial = Monomial<ExpPair>;

impl<E: Exponent> Monomial<E> {
    /// The empty monomial `1`.
    pub fn one(n: Rank) -> Self {
        Monomial {
            n,
            exps: BTreeMap::new(),
        }
    }

    /// Product of the factors `Y_i(m)^e`; repeated keys multiply.
    pub fn from_factors(
        n: Rank,
        factors: impl IntoIterator<Item = (usize, i64, E)>,
    ) -> Result<Self> {
        let mut out = Monomial::one(n);
        for (i, m, e) in factors {
            n.check_index(i)?;
            out.mul_factor(i, m, e);
        }
        Ok(out)
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// `y_i(m)`, zero when absent.
    pub fn get(&self, i: usize, m: i64) -> E {
        self.exps.get(&(i, m)).copied().unwrap_or(E::ZERO)
    }

    /// Nonzero factors in `(i, m)` order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, i64, E)> + '_ {
        self.exps.iter().map(|(&(i, m), &e)| (i, m, e))
    }

    /// Multiplies in `Y_i(m)^e` in place. `i` outside `1..=n` is ignored,
    /// which realises `Y_0 = Y_{n+1} = 1`.
    pub fn mul_factor(&mut self, i: usize, m: i64, e: E) {
        if i == 0 || i > self.n.get() || e.is_zero() {
            return;
        }
        let slot = self.exps.entry((i, m)).or_insert(E::ZERO);
        *slot = *slot + e;
        if slot.is_zero() {
            self.exps.remove(&(i, m));
        }
    }

    /// Exponents of the `i`-variables, ordered by `m`.
    fn row(&self, i: usize) -> Vec<(i64, E)> {
        self.exps
            .range((i, i64::MIN)..=(i, i64::MAX))
            .map(|(&(_, m), &e)| (m, e))
            .collect()
    }

    /// `Σ_m y_i(m)` for every `i`.
    pub fn full_weight(&self) -> Vec<E> {
        let mut w = vec![E::ZERO; self.n.get()];
        for (&(i, _), &e) in &self.exps {
            w[i - 1] = w[i - 1] + e;
        }
        w
    }

    /// `wt(M)`; for extended monomials only the second components count.
    pub fn weight(&self) -> Weight {
        Weight::new(self.full_weight().into_iter().map(E::projected).collect())
    }

    /// Max over the prefix sums `Σ_{k<=m} y_i(k)`, the empty prefix included,
    /// together with the least `m` attaining it.
    fn phi_scan(&self, i: usize) -> (E, Option<i64>) {
        let mut best = E::ZERO;
        let mut arg = None;
        let mut acc = E::ZERO;
        for (m, y) in self.row(i) {
            acc = acc + y;
            if acc > best {
                best = acc;
                arg = Some(m);
            }
        }
        (best, arg)
    }

    /// Max over `-Σ_{k>m} y_i(k)`, the empty suffix included, together with
    /// the greatest `m` attaining it.
    fn eps_scan(&self, i: usize) -> (E, Option<i64>) {
        let row = self.row(i);
        let mut best = E::ZERO;
        let mut arg = None;
        // -suffix over an interval [m_j, m_{j+1} - 1]; walk right to left so
        // the first strict improvement is the greatest maximiser.
        let mut neg_suffix = E::ZERO;
        for idx in (0..row.len()).rev() {
            neg_suffix = neg_suffix - row[idx].1;
            if neg_suffix > best {
                best = neg_suffix;
                arg = Some(row[idx].0 - 1);
            }
        }
        (best, arg)
    }

    /// `φ̃_i`, or `φ_i` for plain monomials.
    pub fn phi_full(&self, i: usize) -> E {
        self.phi_scan(i).0
    }

    /// `ε̃_i`, or `ε_i` for plain monomials.
    pub fn eps_full(&self, i: usize) -> E {
        self.eps_scan(i).0
    }

    /// `φ_i`: the second component of `φ̃_i` for extended monomials.
    pub fn phi(&self, i: usize) -> i64 {
        self.phi_full(i).projected()
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.eps_full(i).projected()
    }

    /// `m_f = min { m | φ_i(M) = Σ_{k<=m} y_i(k) }`; requires `φ_i > 0`.
    pub fn m_f(&self, i: usize) -> Result<i64> {
        self.n.check_index(i)?;
        let (_, arg) = self.phi_scan(i);
        let m = arg.ok_or_else(|| Error::Precondition(format!("phi_{i} is zero")))?;
        debug_assert!(self.get(i, m) > E::ZERO && self.get(i, m + 1) <= E::ZERO);
        Ok(m)
    }

    /// `m_e = max { m | ε_i(M) = -Σ_{k>m} y_i(k) }`; requires `ε_i > 0`.
    pub fn m_e(&self, i: usize) -> Result<i64> {
        self.n.check_index(i)?;
        let (_, arg) = self.eps_scan(i);
        let m = arg.ok_or_else(|| Error::Precondition(format!("eps_{i} is zero")))?;
        debug_assert!(self.get(i, m + 1) < E::ZERO && self.get(i, m) >= E::ZERO);
        Ok(m)
    }

    /// `f̃_i M = A_i(m_f)⁻¹ M`, or `None` (the crystal zero) when `φ_i = 0`.
    pub fn f_tilde(&self, i: usize, c: &CMatrix) -> Option<Self> {
        let m = self.phi_scan(i).1?;
        let a = a_multiplier::<E>(c, i, m, Sign::Minus).ok()?;
        Some(self * &a)
    }

    /// `ẽ_i M = A_i(m_e) M`, or `None` when `ε_i = 0`.
    pub fn e_tilde(&self, i: usize, c: &CMatrix) -> Option<Self> {
        let m = self.eps_scan(i).1?;
        let a = a_multiplier::<E>(c, i, m, Sign::Plus).ok()?;
        Some(self * &a)
    }

    /// Parses the canonical form produced by `Display`, e.g.
    /// `Y1(-1)^(1,0)*Y2(-2)^(1,0)` or `Y1(0)^-1*Y2(-1)^1`.
    pub fn parse(n: Rank, s: &str) -> Result<Self>
    where
        E: ParseExponent,
    {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one(n));
        }
        let mut out = Monomial::one(n);
        for part in s.split('*') {
            let bad = || Error::Parse(format!("bad factor {part:?}"));
            let rest = part.trim().strip_prefix('Y').ok_or_else(bad)?;
            let (i, rest) = rest.split_once('(').ok_or_else(bad)?;
            let (m, rest) = rest.split_once(")^").ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let m: i64 = m.parse().map_err(|_| bad())?;
            let e = E::parse_exponent(rest).ok_or_else(bad)?;
            n.check_index(i)?;
            out.mul_factor(i, m, e);
        }
        Ok(out)
    }
}

/// Exponent that can be read back from its canonical text.
pub trait ParseExponent: Sized {
    fn parse_exponent(s: &str) -> Option<Self>;
}

impl ParseExponent for i64 {
    fn parse_exponent(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl ParseExponent for ExpPair {
    fn parse_exponent(s: &str) -> Option<Self> {
        let inner = s.strip_prefix('(')?.strip_suffix(')')?;
        let (a, b) = inner.split_once(',')?;
        Some(ExpPair::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
    }
}

impl ExtMonomial {
    /// `wt~(M)`, pair-valued.
    pub fn ext_weight(&self) -> ExtWeight {
        ExtWeight(self.full_weight())
    }
}

impl<E: Exponent> Mul for &Monomial<E> {
    type Output = Monomial<E>;

    fn mul(self, rhs: &Monomial<E>) -> Monomial<E> {
        assert_eq!(self.n, rhs.n, "monomial rank mismatch");
        let mut out = self.clone();
        for (i, m, e) in rhs.factors() {
            out.mul_factor(i, m, e);
        }
        out
    }
}

impl<E: Exponent> Display for Monomial<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (k, (&(i, m), e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "Y{i}({m})^{e}")?;
        }
        Ok(())
    }
}

impl<E: Exponent> Debug for Monomial<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CMatrix {
    /// The upper triangle `c_12 c_13 .. c_23 ..`, e.g. `c=[1,1,0]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n.get();
        let upper: Vec<String> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).to_string())
            .collect();
        write!(f, "c=[{}]", upper.join(","))
    }
}

/// `A_i(m)^{±1}` for the given c-matrix. Only neighbours `j = i ± 1`
/// contribute to the product over `j ≠ i`.
pub fn a_multiplier<E: Exponent>(c: &CMatrix, i: usize, m: i64, sign: Sign) -> Result<Monomial<E>> {
    let n = c.rank();
    n.check_index(i)?;
    let s = sign.value();
    let mut out = Monomial::one(n);
    out.mul_factor(i, m, E::lift(s));
    out.mul_factor(i, m + 1, E::lift(s));
    for j in [i.wrapping_sub(1), i + 1] {
        if j >= 1 && j <= n.get() {
            let a_ji = cartan_entry(n, j, i)?;
            out.mul_factor(j, m + c.get(j, i), E::lift(s * a_ji));
        }
    }
    Ok(out)
}

/// `Y_i(m)^y ↦ Y_i(m)^{(0,y)}`.
pub fn embed_plain(m: &PlainMonomial) -> ExtMonomial {
    let mut out = Monomial::one(m.rank());
    for (i, k, y) in m.factors() {
        out.mul_factor(i, k, ExpPair::new(0, y));
    }
    out
}

/// Inverse of [`embed_plain`]; fails if some first component is nonzero.
pub fn project_ext(m: &ExtMonomial) -> Result<PlainMonomial> {
    let mut out = Monomial::one(m.rank());
    for (i, k, e) in m.factors() {
        if e.a != 0 {
            return Err(Error::NotPlain { i, m: k });
        }
        out.mul_factor(i, k, e.b);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct FactorWire<E> {
    i: usize,
    m: i64,
    e: E,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "E: Serialize + DeserializeOwned")]
struct MonomialWire<E> {
    kind: String,
    n: usize,
    factors: Vec<FactorWire<E>>,
}

impl<E: Exponent> Serialize for Monomial<E> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialWire {
            kind: E::KIND.to_string(),
            n: self.n.get(),
            factors: self
                .factors()
                .map(|(i, m, e)| FactorWire { i, m, e })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de, E: Exponent> Deserialize<'de> for Monomial<E> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = MonomialWire::<E>::deserialize(de)?;
        if wire.kind != E::KIND {
            return Err(D::Error::custom(format!(
                "expected kind {:?}, got {:?}",
                E::KIND,
                wire.kind
            )));
        }
        let n = Rank::new(wire.n).map_err(D::Error::custom)?;
        Monomial::from_factors(n, wire.factors.into_iter().map(|f| (f.i, f.m, f.e)))
            .map_err(D::Error::custom)
    }
}

/// The monomial crystal `M_c` (plain) or its extended counterpart, for a
/// fixed c-matrix.
#[derive(Debug, Clone)]
pub struct MonomialCrystal<E> {
    c: CMatrix,
    _exp: PhantomData<E>,
}

pub type PlainMonomials = MonomialCrystal<i64>;
pub type ExtMonomials = MonomialCrystal<ExpPair>;

impl<E: Exponent> MonomialCrystal<E> {
    pub fn new(c: CMatrix) -> Self {
        MonomialCrystal {
            c,
            _exp: PhantomData,
        }
    }

    pub fn standard(n: Rank) -> Self {
        Self::new(CMatrix::standard(n))
    }

    pub fn c_matrix(&self) -> &CMatrix {
        &self.c
    }
}

impl<E: Exponent> Crystal for MonomialCrystal<E> {
    type Element = Monomial<E>;

    fn rank(&self) -> Rank {
        self.c.rank()
    }

    /// Components of plain monomials through a maximal vector are finite;
    /// the extended set contains `B(∞)`.
    fn is_finite(&self) -> bool {
        E::KIND == "plain"
    }

    fn key(&self, x: &Self::Element) -> String {
        x.to_string()
    }

    fn f(&self, x: &Self::Element, i: usize) -> Option<Self::Element> {
        x.f_tilde(i, &self.c)
    }

    fn e(&self, x: &Self::Element, i: usize) -> Option<Self::Element> {
        x.e_tilde(i, &self.c)
    }

    fn weight(&self, x: &Self::Element) -> Weight {
        x.weight()
    }

    fn eps(&self, x: &Self::Element, i: usize) -> i64 {
        x.eps(i)
    }

    fn phi(&self, x: &Self::Element, i: usize) -> i64 {
        x.phi(i)
    }
}
