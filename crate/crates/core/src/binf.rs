//! The monomial set `M(∞)` (and the family `M(p_1, .., p_n; r; ∞)`) of
//! extended monomials realizing `B(∞)`, its normal form in the variables
//! `X_i(m)^{(u,v)} = Y_i(m)^{(u,v)} Y_{i-1}(m+1)^{(-u,-v)}`, and the maps to
//! marginally large tableaux.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{from_root_coordinates, Rank, Weight};
use crate::error::{Error, Result, Violation};
use crate::graph::Crystal;
use crate::monomial::{ExpPair, ExtMonomial, Monomial};
use crate::signature::{reduce, Signature};
use crate::tableau::Tableau;

/// The data `(p_1, .., p_n; r)` selecting a member of the family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfParams {
    pub p: Vec<i64>,
    pub r: i64,
}

impl InfParams {
    /// `p = (1, .., 1)`, `r = 0`.
    pub fn standard(n: Rank) -> Self {
        InfParams {
            p: vec![1; n.get()],
            r: 0,
        }
    }

    pub fn new(n: Rank, p: Vec<i64>, r: i64) -> Result<Self> {
        if p.len() != n.get() {
            return Err(Error::RankMismatch {
                expected: n.get(),
                actual: p.len(),
            });
        }
        if p.iter().any(|&x| x <= 0) {
            return Err(Error::Precondition(format!(
                "p must be positive, got {p:?}"
            )));
        }
        Ok(InfParams { p, r })
    }
}

/// `M_{(p;r;∞)} = Π_i Y_i(r-i)^{(p_i,0)}`.
pub fn m_infinity(n: Rank, params: &InfParams) -> Result<ExtMonomial> {
    let params = InfParams::new(n, params.p.clone(), params.r)?;
    Monomial::from_factors(
        n,
        n.indices()
            .map(|i| (i, params.r - i as i64, ExpPair::new(params.p[i - 1], 0))),
    )
}

/// The exponents `a_i^t` of a template monomial, `y_i(r-t) = (·, a_i^t)`
/// for `0 <= t <= i`, indexed `[i-1][t]`.
fn template_exponents(
    m: &ExtMonomial,
    params: &InfParams,
) -> std::result::Result<Vec<Vec<i64>>, Violation> {
    let n = m.rank().get();
    if params.p.len() != n {
        return Err(Violation::Template(format!(
            "p has length {} for rank {n}",
            params.p.len()
        )));
    }
    let mut a: Vec<Vec<i64>> = (1..=n).map(|i| vec![0; i + 1]).collect();
    for (i, k, e) in m.factors() {
        let t = params.r - k;
        if t < 0 || t > i as i64 {
            return Err(Violation::Template(format!(
                "unexpected variable Y{i}({k})"
            )));
        }
        let t = t as usize;
        if t < i && e.a != 0 {
            return Err(Violation::Template(format!(
                "Y{i}({k}) has first exponent {} instead of 0",
                e.a
            )));
        }
        a[i - 1][t] = e.b;
    }
    for i in 1..=n {
        let e = m.get(i, params.r - i as i64);
        if e.a != params.p[i - 1] {
            return Err(Violation::Template(format!(
                "Y{i}({}) has first exponent {} instead of {}",
                params.r - i as i64,
                e.a,
                params.p[i - 1]
            )));
        }
    }
    Ok(a)
}

/// `Σ_{j=0}^{k} a_{i+j}^j`.
fn diagonal_sum(a: &[Vec<i64>], i: usize, k: usize) -> i64 {
    (0..=k).map(|j| a[i + j - 1][j]).sum()
}

/// First violated condition, if any, for membership in `M(p; r; ∞)`.
pub fn check_membership(m: &ExtMonomial, params: &InfParams) -> std::result::Result<(), Violation> {
    let n = m.rank().get();
    let a = template_exponents(m, params)?;
    for k in 0..n {
        for i in 1..=n - k {
            let s = diagonal_sum(&a, i, k);
            if s > 0 {
                return Err(Violation::Condition1(format!(
                    "sum of a_(i+j)^j for j<={k} at i={i} is {s} > 0"
                )));
            }
        }
    }
    for k in 0..n {
        let lhs: i64 = (1..=n - k).map(|i| diagonal_sum(&a, i, k)).sum();
        let rhs: i64 = (k + 1..=n).map(|i| a[i - 1][i]).sum();
        if lhs != rhs {
            return Err(Violation::Condition2(format!("at k={k}: {lhs} != {rhs}")));
        }
    }
    Ok(())
}

pub fn is_member(m: &ExtMonomial, params: &InfParams) -> bool {
    check_membership(m, params).is_ok()
}

/// An element of `M(p; r; ∞)` in normal form:
///
/// ```text
/// Π_i X_i(r-i)^{(Σ_{k>=i} p_k, -Σ_k b_k^i)} Π_{k>i} X_k(r-i)^{(0, b_k^i)}
/// ```
///
/// with `b_k^i >= 0`. Row `i` of `b` lists `b_{i+1}^i, .., b_{n+1}^i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "XFormInfWire", into = "XFormInfWire")]
pub struct XFormInf {
    n: Rank,
    params: InfParams,
    b: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct XFormInfWire {
    n: usize,
    r: i64,
    p: Vec<i64>,
    b: BTreeMap<usize, Vec<i64>>,
}

impl TryFrom<XFormInfWire> for XFormInf {
    type Error = Error;

    fn try_from(w: XFormInfWire) -> Result<Self> {
        let n = Rank::new(w.n)?;
        let rows = (1..=w.n)
            .map(|i| w.b.get(&i).cloned().unwrap_or_else(|| vec![0; w.n + 1 - i]))
            .collect();
        if w.b.keys().any(|&i| i == 0 || i > w.n) {
            return Err(Error::InvalidXForm("row index out of range".into()));
        }
        XFormInf::new(n, InfParams::new(n, w.p, w.r)?, rows)
    }
}

impl From<XFormInf> for XFormInfWire {
    fn from(x: XFormInf) -> Self {
        XFormInfWire {
            n: x.n.get(),
            r: x.params.r,
            p: x.params.p,
            b: x.b
                .into_iter()
                .enumerate()
                .map(|(k, row)| (k + 1, row))
                .collect(),
        }
    }
}

impl XFormInf {
    pub fn new(n: Rank, params: InfParams, b: Vec<Vec<i64>>) -> Result<Self> {
        let params = InfParams::new(n, params.p, params.r)?;
        if b.len() != n.get() {
            return Err(Error::InvalidXForm(format!("expected {} rows", n.get())));
        }
        for (k, row) in b.iter().enumerate() {
            let i = k + 1;
            if row.len() != n.get() + 1 - i {
                return Err(Error::InvalidXForm(format!(
                    "row {i} must have {} entries",
                    n.get() + 1 - i
                )));
            }
            if row.iter().any(|&x| x < 0) {
                return Err(Error::InvalidXForm(format!("row {i} has a negative entry")));
            }
        }
        Ok(XFormInf { n, params, b })
    }

    /// The normal form of `M_∞`: all `b` zero.
    pub fn root(n: Rank, params: InfParams) -> Result<Self> {
        let b = (1..=n.get()).map(|i| vec![0; n.get() + 1 - i]).collect();
        XFormInf::new(n, params, b)
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    pub fn params(&self) -> &InfParams {
        &self.params
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// `b_k^i` for `i < k <= n+1`.
    pub fn b(&self, i: usize, k: usize) -> i64 {
        self.b[i - 1][k - i - 1]
    }

    fn b_mut(&mut self, i: usize, k: usize) -> &mut i64 {
        &mut self.b[i - 1][k - i - 1]
    }

    /// The reduced `i`-signature over the components `X_k(r-m)`, `m = 1..n`,
    /// `k = n+1` down to `m+1`. Origins are `(m, k)`.
    pub fn signature(&self, i: usize) -> Signature<(usize, usize)> {
        let n = self.n.get();
        let mut comps = Vec::new();
        for m in 1..=n {
            for k in (m + 1..=n + 1).rev() {
                let b = self.b(m, k) as u64;
                if k == i + 1 {
                    comps.push((b, 0, (m, k)));
                } else if k == i {
                    comps.push((0, b, (m, k)));
                }
            }
        }
        reduce(comps)
    }

    /// `f̃_i` by the signature rule; never zero.
    pub fn f_sig(&self, i: usize) -> XFormInf {
        let mut x = self.clone();
        match self.signature(i).leftmost_zero() {
            Some(&(m, _)) => {
                *x.b_mut(m, i) -= 1;
                *x.b_mut(m, i + 1) += 1;
            }
            None => *x.b_mut(i, i + 1) += 1,
        }
        x
    }

    /// `ẽ_i` by the signature rule; `None` when no 1 survives.
    pub fn e_sig(&self, i: usize) -> Option<XFormInf> {
        let &(m, _) = self.signature(i).rightmost_one()?;
        let mut x = self.clone();
        *x.b_mut(m, i + 1) -= 1;
        if m != i {
            *x.b_mut(m, i) += 1;
        }
        Some(x)
    }

    /// `wt = -Σ_j (Σ_{i<=j} Σ_{k>j} b_k^i) α_j`, the projected weight.
    pub fn weight(&self) -> Weight {
        let n = self.n.get();
        let coords: Vec<i64> = (1..=n)
            .map(|j| {
                -(1..=j)
                    .map(|i| (j + 1..=n + 1).map(|k| self.b(i, k)).sum::<i64>())
                    .sum::<i64>()
            })
            .collect();
        from_root_coordinates(self.n, &coords).expect("rank matches")
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.signature(i).num_ones() as i64
    }

    pub fn phi(&self, i: usize) -> i64 {
        self.eps(i) + self.weight().coeff(i)
    }
}

/// `Y_i(m)^e` with `Y_i = 1` outside `1..=n`, as the expansion of `X`.
fn mul_x(out: &mut ExtMonomial, i: usize, m: i64, e: ExpPair) {
    out.mul_factor(i, m, e);
    out.mul_factor(i - 1, m + 1, -e);
}

/// Expands the normal form back into `Y`-variables.
pub fn from_xform(x: &XFormInf) -> ExtMonomial {
    let n = x.n.get();
    let r = x.params.r;
    let mut out = Monomial::one(x.n);
    for i in 1..=n {
        let m = r - i as i64;
        let p: i64 = x.params.p[i - 1..].iter().sum();
        let total: i64 = x.b[i - 1].iter().sum();
        mul_x(&mut out, i, m, ExpPair::new(p, -total));
        for k in i + 1..=n + 1 {
            mul_x(&mut out, k, m, ExpPair::new(0, x.b(i, k)));
        }
    }
    out
}

/// Normal form of a member: `b_{m+j}^m = -Σ_{s=0}^{m-1} a_{j+s}^s`.
pub fn to_xform(m: &ExtMonomial, params: &InfParams) -> Result<XFormInf> {
    check_membership(m, params)?;
    let a = template_exponents(m, params)?;
    let n = m.rank().get();
    let b = (1..=n)
        .map(|mm| {
            (1..=n + 1 - mm)
                .map(|j| -(0..mm).map(|s| a[j + s - 1][s]).sum::<i64>())
                .collect()
        })
        .collect();
    let x = XFormInf::new(m.rank(), params.clone(), b)?;
    debug_assert_eq!(&from_xform(&x), m);
    Ok(x)
}

/// The map `M(∞) -> M(p; r; ∞)` keeping `b` and changing `(p, r)`.
pub fn phi_shift(x: &XFormInf, params: &InfParams) -> Result<XFormInf> {
    XFormInf::new(x.n, params.clone(), x.b.clone())
}

/// `Φ`: `b_k^i` is the number of `k`-boxes in row `i`.
pub fn tableau_to_xform(t: &Tableau) -> Result<XFormInf> {
    if !t.is_marginally_large() {
        return Err(Error::NotMarginallyLarge);
    }
    XFormInf::new(t.rank(), InfParams::standard(t.rank()), t.box_counts())
}

/// `Φ⁻¹`: row `i` gets one more `i`-box than row `i+1` has boxes, followed by
/// `b_k^i` copies of each `k > i`.
pub fn xform_to_tableau(x: &XFormInf) -> Tableau {
    let n = x.n.get();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut below = 0usize;
    for i in (1..=n).rev() {
        let mut row = vec![i; below + 1];
        for k in i + 1..=n + 1 {
            row.extend(std::iter::repeat_n(k, x.b(i, k) as usize));
        }
        below = row.len();
        rows[i - 1] = row;
    }
    Tableau::new(x.n, rows).expect("normal form yields a semistandard tableau")
}

impl fmt::Display for XFormInf {
    /// Reserved factor first in each group, e.g.
    /// `X1(-1)^(2,-1)*X2(-1)^(0,1)*X2(-2)^(1,0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n.get();
        let mut parts = Vec::new();
        for i in 1..=n {
            let m = self.params.r - i as i64;
            let p: i64 = self.params.p[i - 1..].iter().sum();
            let total: i64 = self.b[i - 1].iter().sum();
            parts.push(format!("X{i}({m})^({p},{})", -total));
            for k in i + 1..=n + 1 {
                let b = self.b(i, k);
                if b != 0 {
                    parts.push(format!("X{k}({m})^(0,{b})"));
                }
            }
        }
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for XFormInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `M(∞)` with the signature-rule operators on normal forms.
#[derive(Debug, Clone, Copy)]
pub struct XFormInfCrystal {
    pub n: Rank,
}

impl Crystal for XFormInfCrystal {
    type Element = XFormInf;

    fn rank(&self) -> Rank {
        self.n
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn key(&self, x: &XFormInf) -> String {
        x.to_string()
    }

    fn f(&self, x: &XFormInf, i: usize) -> Option<XFormInf> {
        Some(x.f_sig(i))
    }

    fn e(&self, x: &XFormInf, i: usize) -> Option<XFormInf> {
        x.e_sig(i)
    }

    fn weight(&self, x: &XFormInf) -> Weight {
        x.weight()
    }

    fn eps(&self, x: &XFormInf, i: usize) -> i64 {
        x.eps(i)
    }

    fn phi(&self, x: &XFormInf, i: usize) -> i64 {
        x.phi(i)
    }
}
