//! The monomial set `M(r; λ)` of Nakajima monomials realizing `B(λ)`, its
//! normal form in the variables `X_i(m) = Y_i(m) Y_{i-1}(m+1)^{-1}`, the
//! bijection `Ψ` with semistandard tableaux, and products of these sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{Rank, Weight};
use crate::error::{Error, Result, Violation};
use crate::graph::{bfs_generate, Crystal};
use crate::monomial::{CMatrix, Monomial, PlainMonomial, PlainMonomials};
use crate::signature::{reduce, Signature};
use crate::tableau::{validate, Tableau};

/// `M_λ = Π_i Y_i(r-i)^{l_i}`.
pub fn m_lambda(lambda: &Weight, r: i64) -> Result<PlainMonomial> {
    lambda.ensure_dominant()?;
    let n = Rank::new(lambda.rank())?;
    Monomial::from_factors(n, n.indices().map(|i| (i, r - i as i64, lambda.coeff(i))))
}

/// Exponents `a_i^m` of `Y_i(r-m)`, `0 <= m <= i`, indexed `[i-1][m]`.
fn template_exponents(m: &PlainMonomial, r: i64) -> std::result::Result<Vec<Vec<i64>>, Violation> {
    let n = m.rank().get();
    let mut a: Vec<Vec<i64>> = (1..=n).map(|i| vec![0; i + 1]).collect();
    for (i, k, e) in m.factors() {
        let t = r - k;
        if t < 0 || t > i as i64 {
            return Err(Violation::Template(format!(
                "unexpected variable Y{i}({k})"
            )));
        }
        a[i - 1][t as usize] = e;
    }
    Ok(a)
}

/// First violated condition, if any, for membership in `M(r; λ)`.
pub fn check_membership(
    m: &PlainMonomial,
    lambda: &Weight,
    r: i64,
) -> std::result::Result<(), Violation> {
    let n = m.rank().get();
    if lambda.rank() != n || !lambda.is_dominant() {
        return Err(Violation::Template(format!(
            "{lambda} is not a dominant weight of rank {n}"
        )));
    }
    let a = template_exponents(m, r)?;
    let at = |i: usize, k: usize| a[i - 1][k];
    for i in 1..=n {
        if at(i, i) < 0 {
            return Err(Violation::Condition1(format!(
                "a_{i}^{i} = {} < 0",
                at(i, i)
            )));
        }
        if at(i, 0) > 0 {
            return Err(Violation::Condition1(format!("a_{i}^0 = {} > 0", at(i, 0))));
        }
        let l: i64 = (0..=n - i).map(|k| at(i + k, i)).sum::<i64>()
            - (0..i).map(|k| at(n - i + 1 + k, k)).sum::<i64>();
        if l != lambda.coeff(i) {
            return Err(Violation::Condition1(format!(
                "l_{i} = {} but the exponents give {l}",
                lambda.coeff(i)
            )));
        }
    }
    for j in 1..n {
        for i in 1..=n - j {
            let lower: i64 = (0..=j).map(|k| at(i + k, k)).sum();
            if lower > 0 {
                return Err(Violation::Condition2(format!(
                    "sum of a_(i+k)^k for k<={j} at i={i} is {lower} > 0"
                )));
            }
            let upper: i64 = (0..=j).map(|k| at(i + k, i)).sum();
            if upper < 0 {
                return Err(Violation::Condition2(format!(
                    "sum of a_(i+k)^i for k<={j} at i={i} is {upper} < 0"
                )));
            }
        }
    }
    Ok(())
}

pub fn is_member(m: &PlainMonomial, lambda: &Weight, r: i64) -> bool {
    check_membership(m, lambda, r).is_ok()
}

/// An element of `M(r; λ)` in normal form `Π_i Π_{k>=i} X_k(r-i)^{b_k^i}`.
/// Row `i` of `b` lists `b_i^i, .., b_{n+1}^i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "XFormLaWire", into = "XFormLaWire")]
pub struct XFormLa {
    n: Rank,
    lambda: Weight,
    r: i64,
    b: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct XFormLaWire {
    n: usize,
    lambda: Vec<i64>,
    r: i64,
    b: BTreeMap<usize, Vec<i64>>,
}

impl TryFrom<XFormLaWire> for XFormLa {
    type Error = Error;

    fn try_from(w: XFormLaWire) -> Result<Self> {
        let n = Rank::new(w.n)?;
        if w.b.keys().any(|&i| i == 0 || i > w.n) {
            return Err(Error::InvalidXForm("row index out of range".into()));
        }
        let rows = (1..=w.n)
            .map(|i| w.b.get(&i).cloned().unwrap_or_else(|| vec![0; w.n + 2 - i]))
            .collect();
        XFormLa::new(n, Weight::new(w.lambda), w.r, rows)
    }
}

impl From<XFormLa> for XFormLaWire {
    fn from(x: XFormLa) -> Self {
        XFormLaWire {
            n: x.n.get(),
            lambda: x.lambda.coeffs().to_vec(),
            r: x.r,
            b: x.b
                .into_iter()
                .enumerate()
                .map(|(k, row)| (k + 1, row))
                .collect(),
        }
    }
}

impl XFormLa {
    /// Checks the three defining conditions: `b >= 0`, row sums
    /// `Σ_j b_j^i = Σ_{k>=i} l_k`, and the column condition
    /// `Σ_{k<=j} b_{i+k}^i >= Σ_{k<=j} b_{i+1+k}^{i+1}`.
    pub fn new(n: Rank, lambda: Weight, r: i64, b: Vec<Vec<i64>>) -> Result<Self> {
        let size = n.get();
        if lambda.rank() != size {
            return Err(Error::RankMismatch {
                expected: size,
                actual: lambda.rank(),
            });
        }
        lambda.ensure_dominant()?;
        if b.len() != size
            || b.iter()
                .enumerate()
                .any(|(k, row)| row.len() != size + 1 - k)
        {
            return Err(Error::InvalidXForm("wrong row lengths".into()));
        }
        let x = XFormLa { n, lambda, r, b };
        if x.b.iter().flatten().any(|&v| v < 0) {
            return Err(Error::InvalidXForm("condition (1): negative entry".into()));
        }
        for i in 1..=size {
            let sum: i64 = x.b[i - 1].iter().sum();
            let want: i64 = (i..=size).map(|k| x.lambda.coeff(k)).sum();
            if sum != want {
                return Err(Error::InvalidXForm(format!(
                    "condition (2): row {i} sums to {sum}, expected {want}"
                )));
            }
        }
        for j in 0..size {
            for i in 1..=size.saturating_sub(j.max(1)) {
                let upper: i64 = (0..=j).map(|k| x.b(i, i + k)).sum();
                let lower: i64 = (0..=j).map(|k| x.b(i + 1, i + 1 + k)).sum();
                if upper < lower {
                    return Err(Error::InvalidXForm(format!(
                        "condition (3): rows {i} and {} at j={j}",
                        i + 1
                    )));
                }
            }
        }
        Ok(x)
    }

    /// The normal form of `M_λ`.
    pub fn root(lambda: &Weight, r: i64) -> Result<Self> {
        let n = Rank::new(lambda.rank())?;
        let size = n.get();
        let b = (1..=size)
            .map(|i| {
                let mut row = vec![0; size + 2 - i];
                row[0] = (i..=size).map(|k| lambda.coeff(k)).sum();
                row
            })
            .collect();
        XFormLa::new(n, lambda.clone(), r, b)
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn shift(&self) -> i64 {
        self.r
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// `b_k^i` for `i <= k <= n+1`.
    pub fn b(&self, i: usize, k: usize) -> i64 {
        self.b[i - 1][k - i]
    }

    fn b_mut(&mut self, i: usize, k: usize) -> &mut i64 {
        &mut self.b[i - 1][k - i]
    }

    /// The reduced `i`-signature over `X_k(r-m)`, `m = 1..n`, `k = n+1`
    /// down to `m`. Origins are `(m, k)`.
    pub fn signature(&self, i: usize) -> Signature<(usize, usize)> {
        let n = self.n.get();
        let mut comps = Vec::new();
        for m in 1..=n {
            for k in (m..=n + 1).rev() {
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

    pub fn f_sig(&self, i: usize) -> Option<XFormLa> {
        let &(m, _) = self.signature(i).leftmost_zero()?;
        let mut x = self.clone();
        *x.b_mut(m, i) -= 1;
        *x.b_mut(m, i + 1) += 1;
        Some(x)
    }

    pub fn e_sig(&self, i: usize) -> Option<XFormLa> {
        let &(m, _) = self.signature(i).rightmost_one()?;
        let mut x = self.clone();
        *x.b_mut(m, i + 1) -= 1;
        *x.b_mut(m, i) += 1;
        Some(x)
    }

    /// `Σ b_k^i (Λ_k - Λ_{k-1})`.
    pub fn weight(&self) -> Weight {
        let n = self.n.get();
        let mut w = vec![0; n];
        for i in 1..=n {
            for k in i..=n + 1 {
                let b = self.b(i, k);
                if k <= n {
                    w[k - 1] += b;
                }
                if k >= 2 {
                    w[k - 2] -= b;
                }
            }
        }
        Weight::new(w)
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.signature(i).num_ones() as i64
    }

    pub fn phi(&self, i: usize) -> i64 {
        self.signature(i).num_zeros() as i64
    }
}

/// Expands the normal form into `Y`-variables.
pub fn from_xform(x: &XFormLa) -> PlainMonomial {
    let n = x.n.get();
    let mut out = Monomial::one(x.n);
    for i in 1..=n {
        let m = x.r - i as i64;
        for k in i..=n + 1 {
            let b = x.b(i, k);
            out.mul_factor(k, m, b);
            out.mul_factor(k - 1, m + 1, -b);
        }
    }
    out
}

/// Normal form of a member: `b_m^m = Σ_{i>=m} a_i^i` and
/// `b_{m+j}^m = -Σ_{s<m} a_{j+s}^s`.
pub fn to_xform(m: &PlainMonomial, lambda: &Weight, r: i64) -> Result<XFormLa> {
    check_membership(m, lambda, r)?;
    let a = template_exponents(m, r)?;
    let n = m.rank().get();
    let b = (1..=n)
        .map(|mm| {
            let mut row = vec![(mm..=n).map(|i| a[i - 1][i]).sum()];
            row.extend((1..=n + 1 - mm).map(|j| -(0..mm).map(|s| a[j + s - 1][s]).sum::<i64>()));
            row
        })
        .collect();
    let x = XFormLa::new(m.rank(), lambda.clone(), r, b)?;
    if &from_xform(&x) != m {
        return Err(Error::InvalidXForm(format!(
            "{m} does not expand back from {x}"
        )));
    }
    Ok(x)
}

/// `Ψ`: `b_k^i` is the number of `k`-boxes in row `i`.
pub fn psi(t: &Tableau, lambda: &Weight, r: i64) -> Result<XFormLa> {
    if !validate(t.rank(), t.rows(), Some(lambda)) {
        return Err(Error::InvalidTableau(format!(
            "{t} does not have shape {lambda}"
        )));
    }
    let n = t.rank().get();
    let b = (1..=n)
        .map(|i| (i..=n + 1).map(|k| t.count(i, k) as i64).collect())
        .collect();
    XFormLa::new(t.rank(), lambda.clone(), r, b)
}

pub fn psi_inverse(x: &XFormLa) -> Tableau {
    let n = x.n.get();
    let rows = (1..=n)
        .map(|i| {
            (i..=n + 1)
                .flat_map(|k| std::iter::repeat_n(k, x.b(i, k) as usize))
                .collect()
        })
        .collect();
    Tableau::new(x.n, rows).expect("normal form yields a semistandard tableau")
}

/// Exponentwise product.
pub fn monomial_product(a: &PlainMonomial, b: &PlainMonomial) -> PlainMonomial {
    a * b
}

/// All elements of `M(r; λ)`, generated from `M_λ` under the given c.
pub fn lambda_set(lambda: &Weight, r: i64, c: &CMatrix) -> Result<BTreeSet<PlainMonomial>> {
    let seed = m_lambda(lambda, r)?;
    let model = PlainMonomials::new(c.clone());
    Ok(bfs_generate(&model, seed, None)?
        .elements
        .into_iter()
        .collect())
}

/// Sizes of `M(μ)`, `M(τ)` and of the set of products, and whether the
/// products are exactly `M(μ+τ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    pub left: usize,
    pub right: usize,
    pub products: usize,
    pub target: usize,
    pub equal: bool,
}

pub fn product_report(mu: &Weight, tau: &Weight, r: i64) -> Result<ProductReport> {
    let n = Rank::new(mu.rank())?;
    if tau.rank() != n.get() {
        return Err(Error::RankMismatch {
            expected: n.get(),
            actual: tau.rank(),
        });
    }
    let c = CMatrix::standard(n);
    let left = lambda_set(mu, r, &c)?;
    let right = lambda_set(tau, r, &c)?;
    let products: BTreeSet<PlainMonomial> = left
        .iter()
        .flat_map(|a| right.iter().map(move |b| monomial_product(a, b)))
        .collect();
    let target = lambda_set(&(mu + tau), r, &c)?;
    Ok(ProductReport {
        left: left.len(),
        right: right.len(),
        products: products.len(),
        target: target.len(),
        equal: products == target,
    })
}

/// `M(r; μ+τ) = M(r; μ) M(r; τ)` as sets.
pub fn product_set_equal(mu: &Weight, tau: &Weight, r: i64) -> Result<bool> {
    Ok(product_report(mu, tau, r)?.equal)
}

impl fmt::Display for XFormLa {
    /// Nonzero factors grouped by `m`, e.g. `X1(-1)^1*X2(-1)^1*X2(-2)^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n.get();
        let mut parts = Vec::new();
        for i in 1..=n {
            let m = self.r - i as i64;
            for k in i..=n + 1 {
                let b = self.b(i, k);
                if b != 0 {
                    parts.push(format!("X{k}({m})^{b}"));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for XFormLa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `M(λ)` with the signature-rule operators on normal forms.
#[derive(Debug, Clone, Copy)]
pub struct XFormLaCrystal {
    pub n: Rank,
}

impl Crystal for XFormLaCrystal {
    type Element = XFormLa;

    fn rank(&self) -> Rank {
        self.n
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn key(&self, x: &XFormLa) -> String {
        x.to_string()
    }

    fn f(&self, x: &XFormLa, i: usize) -> Option<XFormLa> {
        x.f_sig(i)
    }

    fn e(&self, x: &XFormLa, i: usize) -> Option<XFormLa> {
        x.e_sig(i)
    }

    fn weight(&self, x: &XFormLa) -> Weight {
        x.weight()
    }

    fn eps(&self, x: &XFormLa, i: usize) -> i64 {
        x.eps(i)
    }

    fn phi(&self, x: &XFormLa, i: usize) -> i64 {
        x.phi(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{dimension_oracle, dominant_weights_up_to};

    fn rank(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn plain(n: usize, s: &str) -> PlainMonomial {
        PlainMonomial::parse(rank(n), s).unwrap()
    }

    const ADJOINT: [&str; 8] = [
        "Y1(-1)^1*Y2(-2)^1",
        "Y1(0)^-1*Y2(-2)^1*Y2(-1)^1",
        "Y1(-1)^2*Y2(-1)^-1",
        "Y2(-2)^1*Y2(0)^-1",
        "Y1(-1)^1*Y1(0)^-1",
        "Y1(-1)^1*Y2(-1)^-1*Y2(0)^-1",
        "Y1(0)^-2*Y2(-1)^1",
        "Y1(0)^-1*Y2(0)^-1",
    ];

    #[test]
    fn roots() {
        assert_eq!(
            m_lambda(&w(&[1, 1]), 0).unwrap(),
            plain(2, "Y1(-1)^1*Y2(-2)^1")
        );
        assert_eq!(m_lambda(&w(&[0, 1, 0]), 0).unwrap(), plain(3, "Y2(-2)^1"));
        assert!(m_lambda(&w(&[0, 0]), 0).unwrap().is_one());
        assert!(m_lambda(&w(&[1, -1]), 0).is_err());
        let x = XFormLa::root(&w(&[1, 1]), 0).unwrap();
        assert_eq!(x.rows(), &[vec![2, 0, 0], vec![1, 0]]);
        assert_eq!(x.to_string(), "X1(-1)^2*X2(-2)^1");
        assert_eq!(
            to_xform(&m_lambda(&w(&[1, 1]), 0).unwrap(), &w(&[1, 1]), 0).unwrap(),
            x
        );
    }

    #[test]
    fn membership_examples() {
        let l = w(&[1, 1]);
        for s in ADJOINT {
            assert!(is_member(&plain(2, s), &l, 0), "{s}");
        }
        assert!(matches!(
            check_membership(&plain(2, "Y1(-1)^3"), &l, 0),
            Err(Violation::Condition1(_))
        ));
        assert!(matches!(
            check_membership(&plain(2, "Y1(3)^1"), &l, 0),
            Err(Violation::Template(_))
        ));
        assert!(!is_member(&plain(2, "Y1(-1)^1*Y2(-2)^1"), &l, 1));
        assert!(is_member(&plain(2, "Y1(0)^1*Y2(-1)^1"), &l, 1));
    }

    #[test]
    fn normal_forms_of_the_adjoint_crystal() {
        let l = w(&[1, 1]);
        let x = to_xform(&plain(2, ADJOINT[1]), &l, 0).unwrap();
        assert_eq!(x.to_string(), "X1(-1)^1*X2(-1)^1*X2(-2)^1");
        for s in ADJOINT {
            let m = plain(2, s);
            assert_eq!(from_xform(&to_xform(&m, &l, 0).unwrap()), m);
        }
        let root = XFormLa::root(&l, 0).unwrap();
        let f1 = root.f_sig(1).unwrap();
        assert_eq!(f1.to_string(), "X1(-1)^1*X2(-1)^1*X2(-2)^1");
        assert_eq!(
            f1.f_sig(2).unwrap().to_string(),
            "X1(-1)^1*X3(-1)^1*X2(-2)^1"
        );
        let sink = XFormLa::new(rank(2), l.clone(), 0, vec![vec![0, 1, 1], vec![0, 1]]).unwrap();
        assert_eq!(sink.to_string(), "X2(-1)^1*X3(-1)^1*X3(-2)^1");
        for i in 1..=2 {
            assert_eq!(sink.f_sig(i), None);
            assert_eq!(root.e_sig(i), None);
        }
    }

    #[test]
    fn invariants_rejected() {
        let l = w(&[1, 1]);
        assert!(XFormLa::new(rank(2), l.clone(), 0, vec![vec![3, -1, 0], vec![1, 0]]).is_err());
        assert!(XFormLa::new(rank(2), l.clone(), 0, vec![vec![1, 0, 0], vec![1, 0]]).is_err());
        // shape (2,1) with row 2 = [2] under row 1 = [2, 3] breaks the columns
        assert!(XFormLa::new(rank(2), l, 0, vec![vec![0, 1, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn psi_examples() {
        let l = w(&[1, 1]);
        let hw = Tableau::highest_weight(&l).unwrap();
        assert_eq!(psi(&hw, &l, 0).unwrap(), XFormLa::root(&l, 0).unwrap());
        let t = Tableau::new(rank(2), vec![vec![1, 2], vec![2]]).unwrap();
        assert_eq!(
            psi(&t, &l, 0).unwrap().to_string(),
            "X1(-1)^1*X2(-1)^1*X2(-2)^1"
        );
        assert_eq!(psi_inverse(&psi(&t, &l, 0).unwrap()), t);
        assert!(psi(&t, &w(&[2, 0]), 0).is_err());
    }

    #[test]
    fn operators_agree_on_small_crystals() {
        for n in 1..=3 {
            let c = CMatrix::standard(rank(n));
            for l in dominant_weights_up_to(rank(n), 3) {
                let set = lambda_set(&l, 0, &c).unwrap();
                assert_eq!(set.len() as u64, dimension_oracle(&l).unwrap());
                for m in &set {
                    let x = to_xform(m, &l, 0).unwrap();
                    let t = psi_inverse(&x);
                    for i in 1..=n {
                        let f = m.f_tilde(i, &c);
                        assert_eq!(x.f_sig(i).map(|y| from_xform(&y)), f);
                        assert_eq!(x.e_sig(i).map(|y| from_xform(&y)), m.e_tilde(i, &c));
                        assert_eq!(t.f_bla(i).map(|s| psi(&s, &l, 0).unwrap()), x.f_sig(i));
                        assert_eq!(t.e_bla(i).map(|s| psi(&s, &l, 0).unwrap()), x.e_sig(i));
                        if let Some(f) = f {
                            assert!(is_member(&f, &l, 0));
                        }
                    }
                    assert_eq!(x.weight(), m.weight());
                    assert_eq!(t.wt_bla(), m.weight());
                }
            }
        }
    }

    #[test]
    fn products() {
        let r = product_report(&w(&[1, 0]), &w(&[0, 1]), 0).unwrap();
        assert_eq!((r.left, r.right, r.products, r.target), (3, 3, 8, 8));
        assert!(r.equal);
        assert!(product_set_equal(&w(&[1, 0]), &w(&[0, 0]), 0).unwrap());
        let a = m_lambda(&w(&[1, 0]), 0).unwrap();
        let b = m_lambda(&w(&[0, 1]), 0).unwrap();
        assert_eq!(monomial_product(&a, &b), m_lambda(&w(&[1, 1]), 0).unwrap());
    }

    #[test]
    fn json() {
        let x = XFormLa::root(&w(&[1, 1]), 0).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"n":2,"lambda":[1,1],"r":0,"b":{"1":[2,0,0],"2":[1,0]}}"#
        );
        assert_eq!(serde_json::from_str::<XFormLa>(&s).unwrap(), x);
    }
}
