//! Machine checks of the realization theorems on finite or truncated
//! crystals. Each check counts what it verified and collects
//! counterexamples instead of stopping at the first one.

use std::collections::{BTreeSet, HashSet};

use crate::binf::{self, InfParams, XFormInf, XFormInfCrystal};
use crate::bla::{self, XFormLa, XFormLaCrystal};
use crate::cartan::{depth_below, dimension_oracle, simple_root, Rank, Weight};
use crate::error::{Error, Result};
use crate::graph::{bfs_generate_with, find_isomorphism, graphs_isomorphic, Closure, Crystal};
use crate::monomial::{
    CMatrix, ExpPair, ExtMonomial, ExtMonomials, Monomial, PlainMonomial, PlainMonomials,
};
use crate::tableau::{Tableau, TableauxBInfinity, TableauxBLambda};

const MAX_FAILURES: usize = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checked: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Counts one check; records `msg` when it failed.
    fn check(&mut self, passed: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !passed && self.failures.len() < MAX_FAILURES {
            self.failures.push(msg());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
    }
}

fn rank_of(w: &Weight) -> Result<Rank> {
    Rank::new(w.rank())
}

/// Weight step, `ε`/`φ` increments, partial inverses and
/// `wt = Σ (φ_i - ε_i) Λ_i` for `x` and every color.
pub fn crystal_axioms<C: Crystal>(model: &C, x: &C::Element, report: &mut Report)
where
    C::Element: std::fmt::Debug,
{
    let n = model.rank();
    let wt = model.weight(x);
    let key = model.key(x);
    for i in n.indices() {
        let alpha = simple_root(n, i).expect("index in range");
        report.check(wt.coeff(i) == model.phi(x, i) - model.eps(x, i), || {
            format!("wt != phi - eps at {key}, i={i}")
        });
        if let Some(y) = model.f(x, i) {
            report.check(model.weight(&y) == &wt - &alpha, || {
                format!("wt(f_{i} {key}) step")
            });
            report.check(model.eps(&y, i) == model.eps(x, i) + 1, || {
                format!("eps(f_{i} {key})")
            });
            report.check(model.phi(&y, i) == model.phi(x, i) - 1, || {
                format!("phi(f_{i} {key})")
            });
            report.check(model.e(&y, i).as_ref() == Some(x), || {
                format!("e_{i} f_{i} {key} != {key}")
            });
        }
        if let Some(y) = model.e(x, i) {
            report.check(model.weight(&y) == &wt + &alpha, || {
                format!("wt(e_{i} {key}) step")
            });
            report.check(model.eps(&y, i) == model.eps(x, i) - 1, || {
                format!("eps(e_{i} {key})")
            });
            report.check(model.phi(&y, i) == model.phi(x, i) + 1, || {
                format!("phi(e_{i} {key})")
            });
            report.check(model.f(&y, i).as_ref() == Some(x), || {
                format!("f_{i} e_{i} {key} != {key}")
            });
        }
    }
}

fn tableau_blambda(lambda: &Weight, threads: usize) -> Result<Closure<Tableau>> {
    let n = rank_of(lambda)?;
    bfs_generate_with(
        &TableauxBLambda { n },
        Tableau::highest_weight(lambda)?,
        None,
        threads,
    )
}

fn monomial_blambda(
    lambda: &Weight,
    r: i64,
    c: &CMatrix,
    threads: usize,
) -> Result<Closure<PlainMonomial>> {
    bfs_generate_with(
        &PlainMonomials::new(c.clone()),
        bla::m_lambda(lambda, r)?,
        None,
        threads,
    )
}

/// `B(λ)` tableaux against `M(λ)`: graph isomorphism with weights, vertex
/// count against the dimension formula, and `Ψ` commuting with the
/// operators element by element.
pub fn iso_bla(lambda: &Weight, r: i64, threads: usize) -> Result<Report> {
    let n = rank_of(lambda)?;
    let c = CMatrix::standard(n);
    let mut rep = Report::default();
    let tabs = tableau_blambda(lambda, threads)?;
    let mons = monomial_blambda(lambda, r, &c, threads)?;
    let dim = dimension_oracle(lambda)?;
    rep.note(format!(
        "B({lambda}): {} tableaux, {} monomials, dimension {dim}",
        tabs.len(),
        mons.len()
    ));
    rep.check(tabs.len() as u64 == dim, || {
        format!("{} tableaux, expected {dim}", tabs.len())
    });
    rep.check(mons.len() as u64 == dim, || {
        format!("{} monomials, expected {dim}", mons.len())
    });
    let map = find_isomorphism(&tabs.graph, &mons.graph, true);
    rep.check(map.is_some(), || {
        format!("tableau and monomial graphs of {lambda} differ")
    });

    let index: std::collections::HashMap<&PlainMonomial, usize> = mons
        .elements
        .iter()
        .enumerate()
        .map(|(k, m)| (m, k))
        .collect();
    for (k, t) in tabs.elements.iter().enumerate() {
        let x = match bla::psi(t, lambda, r) {
            Ok(x) => x,
            Err(e) => {
                rep.check(false, || format!("psi({t}): {e}"));
                continue;
            }
        };
        rep.check(bla::psi_inverse(&x) == *t, || {
            format!("psi_inverse(psi({t})) != {t}")
        });
        let m = bla::from_xform(&x);
        let target = index.get(&m).copied();
        rep.check(target.is_some(), || {
            format!("psi({t}) = {m} is not in M({lambda})")
        });
        if let (Some(map), Some(v)) = (&map, target) {
            rep.check(map[k] == Some(v), || {
                format!("isomorphism sends {t} elsewhere than {m}")
            });
        }
        for i in n.indices() {
            let ft = t
                .f_bla(i)
                .map(|s| bla::psi(&s, lambda, r).map(|y| bla::from_xform(&y)));
            let fm = m.f_tilde(i, &c);
            rep.check(ft.transpose().ok().flatten() == fm, || {
                format!("psi(f_{i} {t}) != f_{i} {m}")
            });
            let et = t
                .e_bla(i)
                .map(|s| bla::psi(&s, lambda, r).map(|y| bla::from_xform(&y)));
            let em = m.e_tilde(i, &c);
            rep.check(et.transpose().ok().flatten() == em, || {
                format!("psi(e_{i} {t}) != e_{i} {m}")
            });
        }
    }
    Ok(rep)
}

fn tableau_binf(n: Rank, depth: u64, threads: usize) -> Result<Closure<Tableau>> {
    bfs_generate_with(
        &TableauxBInfinity { n },
        Tableau::t_infinity(n),
        Some(depth),
        threads,
    )
}

fn monomial_binf(
    n: Rank,
    params: &InfParams,
    c: &CMatrix,
    depth: u64,
    threads: usize,
) -> Result<Closure<ExtMonomial>> {
    bfs_generate_with(
        &ExtMonomials::new(c.clone()),
        binf::m_infinity(n, params)?,
        Some(depth),
        threads,
    )
}

/// `T(∞)` against `M(∞)` truncated at `depth`: `Φ` is a bijection between
/// the truncations, commutes with the operators and preserves `wt`, `ε_i`,
/// `φ_i`; the graphs are isomorphic. With nonstandard `params` the
/// family `M(p; r; ∞)` is compared too, through the shift map.
pub fn iso_binf(n: Rank, depth: u64, params: &InfParams, threads: usize) -> Result<Report> {
    let c = CMatrix::standard(n);
    let std = InfParams::standard(n);
    let mut rep = Report::default();
    let tabs = tableau_binf(n, depth, threads)?;
    let mons = monomial_binf(n, &std, &c, depth, threads)?;
    rep.note(format!(
        "depth {depth}: {} tableaux, {} monomials",
        tabs.len(),
        mons.len()
    ));
    rep.check(tabs.len() == mons.len(), || {
        format!("{} tableaux vs {} monomials", tabs.len(), mons.len())
    });
    rep.check(graphs_isomorphic(&tabs.graph, &mons.graph, true), || {
        "T(inf) and M(inf) truncations are not isomorphic".into()
    });
    let targets: HashSet<&ExtMonomial> = mons.elements.iter().collect();
    let mut images = HashSet::new();
    for t in &tabs.elements {
        let x = match binf::tableau_to_xform(t) {
            Ok(x) => x,
            Err(e) => {
                rep.check(false, || format!("Phi({t}): {e}"));
                continue;
            }
        };
        rep.check(binf::xform_to_tableau(&x) == *t, || {
            format!("Phi_inverse(Phi({t})) != {t}")
        });
        let m = binf::from_xform(&x);
        rep.check(targets.contains(&m), || {
            format!("Phi({t}) = {m} outside the truncation")
        });
        rep.check(images.insert(m.clone()), || {
            format!("Phi is not injective at {t}")
        });
        rep.check(t.wt_tinf() == m.weight(), || format!("wt(Phi({t}))"));
        for i in n.indices() {
            rep.check(
                t.eps_signature(i) == m.eps(i) && t.phi_tinf(i) == m.phi(i),
                || format!("eps/phi_{i} at {t}"),
            );
            let ft = t
                .f_tinf(i)
                .ok()
                .and_then(|s| binf::tableau_to_xform(&s).ok());
            rep.check(ft.as_ref() == Some(&x.f_sig(i)), || {
                format!("Phi(f_{i} {t}) != f_{i} Phi({t})")
            });
            rep.check(ft.map(|y| binf::from_xform(&y)) == m.f_tilde(i, &c), || {
                format!("Phi(f_{i} {t}) != f_{i} {m}")
            });
            let et = t
                .e_tinf(i)
                .ok()
                .flatten()
                .map(|s| binf::tableau_to_xform(&s));
            let et = et.transpose().ok().flatten();
            rep.check(et == x.e_sig(i), || {
                format!("Phi(e_{i} {t}) != e_{i} Phi({t})")
            });
            rep.check(et.map(|y| binf::from_xform(&y)) == m.e_tilde(i, &c), || {
                format!("Phi(e_{i} {t}) != e_{i} {m}")
            });
        }
    }
    if *params != std {
        rep.merge(shifted_family(n, depth, params, threads)?);
    }
    Ok(rep)
}

/// `M(p; r; ∞)` truncated at `depth` against `M(∞)`, through the map that
/// keeps the normal form and changes `(p, r)`.
pub fn shifted_family(n: Rank, depth: u64, params: &InfParams, threads: usize) -> Result<Report> {
    let c = CMatrix::standard(n);
    let std = InfParams::standard(n);
    let mut rep = Report::default();
    let base = monomial_binf(n, &std, &c, depth, threads)?;
    let shifted = monomial_binf(n, params, &c, depth, threads)?;
    rep.note(format!(
        "M(p={:?}; r={}; inf) depth {depth}: {} monomials",
        params.p,
        params.r,
        shifted.len()
    ));
    let map = find_isomorphism(&base.graph, &shifted.graph, true);
    rep.check(map.is_some(), || {
        format!(
            "M(p={:?}; r={}) is not isomorphic to M(inf)",
            params.p, params.r
        )
    });
    for (k, m) in base.elements.iter().enumerate() {
        let image = binf::to_xform(m, &std)
            .and_then(|x| binf::phi_shift(&x, params))
            .map(|y| binf::from_xform(&y));
        match image {
            Ok(img) => {
                let v = map.as_ref().and_then(|mp| mp[k]);
                rep.check(v.map(|v| &shifted.elements[v]) == Some(&img), || {
                    format!("shift of {m} is {img}, not its isomorphic image")
                });
                rep.check(binf::is_member(&img, params), || {
                    format!("{img} is not in M(p; r; inf)")
                });
            }
            Err(e) => rep.check(false, || format!("shift of {m}: {e}")),
        }
    }
    Ok(rep)
}

/// Signature-rule operators on normal forms against the generic monomial
/// operators, on all of `M(λ)`.
pub fn op_equiv_bla(lambda: &Weight, r: i64, threads: usize) -> Result<Report> {
    let n = rank_of(lambda)?;
    let c = CMatrix::standard(n);
    let mut rep = Report::default();
    let mons = monomial_blambda(lambda, r, &c, threads)?;
    let xs = bfs_generate_with(
        &XFormLaCrystal { n },
        XFormLa::root(lambda, r)?,
        None,
        threads,
    )?;
    rep.check(graphs_isomorphic(&mons.graph, &xs.graph, true), || {
        format!("normal-form and monomial graphs of {lambda} differ")
    });
    for m in &mons.elements {
        let x = match bla::to_xform(m, lambda, r) {
            Ok(x) => x,
            Err(e) => {
                rep.check(false, || format!("to_xform({m}): {e}"));
                continue;
            }
        };
        rep.check(bla::from_xform(&x) == *m, || {
            format!("from_xform(to_xform({m}))")
        });
        for i in n.indices() {
            rep.check(
                x.f_sig(i).map(|y| bla::from_xform(&y)) == m.f_tilde(i, &c),
                || format!("f_{i} differs at {m}"),
            );
            rep.check(
                x.e_sig(i).map(|y| bla::from_xform(&y)) == m.e_tilde(i, &c),
                || format!("e_{i} differs at {m}"),
            );
        }
    }
    rep.note(format!("M({lambda}): {} elements", mons.len()));
    Ok(rep)
}

/// As [`op_equiv_bla`] for `M(p; r; ∞)` truncated at `depth`; also checks
/// that `m_f` found by the scan is the position selected by the signature.
pub fn op_equiv_binf(n: Rank, depth: u64, params: &InfParams, threads: usize) -> Result<Report> {
    let c = CMatrix::standard(n);
    let mut rep = Report::default();
    let mons = monomial_binf(n, params, &c, depth, threads)?;
    let root = XFormInf::root(n, params.clone())?;
    let xs = bfs_generate_with(&XFormInfCrystal { n }, root, Some(depth), threads)?;
    rep.check(graphs_isomorphic(&mons.graph, &xs.graph, true), || {
        "normal-form and monomial graphs of M(inf) differ".into()
    });
    for m in &mons.elements {
        let x = match binf::to_xform(m, params) {
            Ok(x) => x,
            Err(e) => {
                rep.check(false, || format!("to_xform({m}): {e}"));
                continue;
            }
        };
        rep.check(binf::from_xform(&x) == *m, || {
            format!("from_xform(to_xform({m}))")
        });
        for i in n.indices() {
            let f = m.f_tilde(i, &c);
            rep.check(f.as_ref() == Some(&binf::from_xform(&x.f_sig(i))), || {
                format!("f_{i} differs at {m}")
            });
            rep.check(
                x.e_sig(i).map(|y| binf::from_xform(&y)) == m.e_tilde(i, &c),
                || format!("e_{i} differs at {m}"),
            );
            let from_sig = match x.signature(i).leftmost_zero() {
                Some(&(mm, _)) => params.r - mm as i64,
                None => params.r - i as i64,
            };
            rep.check(m.m_f(i).ok() == Some(from_sig), || {
                format!("m_f for color {i} at {m}")
            });
        }
    }
    rep.note(format!("M(inf) depth {depth}: {} elements", mons.len()));
    Ok(rep)
}

/// Membership is preserved by every `f̃_i` and `ẽ_i` on all of `M(r; λ)`.
pub fn closure_bla(lambda: &Weight, r: i64, threads: usize) -> Result<Report> {
    let n = rank_of(lambda)?;
    let c = CMatrix::standard(n);
    let mut rep = Report::default();
    let mons = monomial_blambda(lambda, r, &c, threads)?;
    for m in &mons.elements {
        rep.check(bla::is_member(m, lambda, r), || {
            format!("{m} is not in M({lambda})")
        });
        for i in n.indices() {
            for y in [m.f_tilde(i, &c), m.e_tilde(i, &c)].into_iter().flatten() {
                rep.check(bla::is_member(&y, lambda, r), || {
                    format!("{y} left M({lambda})")
                });
            }
        }
    }
    let sources = mons
        .elements
        .iter()
        .filter(|m| n.indices().all(|i| m.eps(i) == 0))
        .count();
    rep.check(sources == 1, || {
        format!("{sources} highest weight vectors in M({lambda})")
    });
    rep.note(format!("M({lambda}): {} elements", mons.len()));
    Ok(rep)
}

/// Membership is preserved on the truncation of `M(p; r; ∞)`, and the
/// truncation is exactly the set of members within `depth` of the root.
pub fn closure_binf(n: Rank, depth: u64, params: &InfParams, threads: usize) -> Result<Report> {
    let c = CMatrix::standard(n);
    let mut rep = Report::default();
    let mons = monomial_binf(n, params, &c, depth, threads)?;
    for m in &mons.elements {
        rep.check(binf::is_member(m, params), || {
            format!("{m} is not in M(inf)")
        });
        for i in n.indices() {
            for y in [m.f_tilde(i, &c), m.e_tilde(i, &c)].into_iter().flatten() {
                rep.check(binf::is_member(&y, params), || format!("{y} left M(inf)"));
            }
        }
    }
    let generated: BTreeSet<ExtMonomial> = mons.elements.into_iter().collect();
    let defined = members_within(n, params, depth)?;
    rep.check(generated == defined, || {
        format!(
            "{} generated vs {} condition-defined members within depth {depth}",
            generated.len(),
            defined.len()
        )
    });
    rep.note(format!("depth {depth}: {} members", defined.len()));
    Ok(rep)
}

/// Every member of `M(p; r; ∞)` whose weight lies at most `depth` simple
/// roots below the root, found by enumerating the template exponents.
/// Below the diagonal the exponents are bounded by `depth`, with the
/// `m = 0` column nonpositive; the diagonal is fixed by condition (2).
pub fn members_within(n: Rank, params: &InfParams, depth: u64) -> Result<BTreeSet<ExtMonomial>> {
    let size = n.get();
    let d = depth as i64;
    let root = binf::m_infinity(n, params)?;
    let top = root.weight();
    let slots: Vec<(usize, usize)> = (1..=size)
        .flat_map(|i| (0..i).map(move |t| (i, t)))
        .collect();
    let mut out = BTreeSet::new();
    let mut a: Vec<Vec<i64>> = (1..=size).map(|i| vec![0; i + 1]).collect();

    fn rec(
        k: usize,
        slots: &[(usize, usize)],
        a: &mut Vec<Vec<i64>>,
        d: i64,
        emit: &mut dyn FnMut(&Vec<Vec<i64>>),
    ) {
        let Some(&(i, t)) = slots.get(k) else {
            emit(a);
            return;
        };
        let hi = if t == 0 { 0 } else { d };
        for v in -d..=hi {
            a[i - 1][t] = v;
            rec(k + 1, slots, a, d, emit);
        }
        a[i - 1][t] = 0;
    }

    let mut emit = |a: &Vec<Vec<i64>>| {
        // S_k = Σ_i Σ_{j<=k} a_{i+j}^j, and Σ_{i>k} a_i^i = S_k.
        let s: Vec<i64> = (0..size)
            .map(|k| {
                (1..=size - k)
                    .map(|i| (0..=k).map(|j| a[i + j - 1][j]).sum::<i64>())
                    .sum()
            })
            .collect();
        let diag = |i: usize| s[i - 1] - s.get(i).copied().unwrap_or(0);
        let factors = (1..=size).flat_map(|i| {
            let p = params.p[i - 1];
            (0..=i).map(move |t| {
                let e = if t == i {
                    ExpPair::new(p, diag(i))
                } else {
                    ExpPair::new(0, a[i - 1][t])
                };
                (i, params.r - t as i64, e)
            })
        });
        let m = Monomial::from_factors(n, factors.collect::<Vec<_>>()).expect("indices in range");
        if binf::is_member(&m, params) && depth_below(&top, &m.weight()).is_some_and(|h| h <= depth)
        {
            out.insert(m);
        }
    };
    rec(0, &slots, &mut a, d, &mut emit);
    Ok(out)
}

/// `M(λ)` generated under each c-matrix gives isomorphic colored graphs.
pub fn c_independence(lambda: &Weight, cs: &[CMatrix], threads: usize) -> Result<Report> {
    let n = rank_of(lambda)?;
    let mut rep = Report::default();
    let base = monomial_blambda(lambda, 0, &CMatrix::standard(n), threads)?;
    for c in cs {
        if c.rank() != n {
            return Err(Error::RankMismatch {
                expected: n.get(),
                actual: c.rank().get(),
            });
        }
        let other = monomial_blambda(lambda, 0, c, threads)?;
        rep.check(graphs_isomorphic(&base.graph, &other.graph, true), || {
            format!("M({lambda}) under {c} is not isomorphic to the standard one")
        });
        let dim = dimension_oracle(lambda)?;
        rep.check(other.len() as u64 == dim, || {
            format!("{} elements under {c}", other.len())
        });
        rep.note(format!("M({lambda}) under {c}: {} elements", other.len()));
    }
    Ok(rep)
}

/// As [`c_independence`] for truncations of `M(∞)`.
pub fn c_independence_binf(n: Rank, depth: u64, cs: &[CMatrix], threads: usize) -> Result<Report> {
    let std = InfParams::standard(n);
    let mut rep = Report::default();
    let base = monomial_binf(n, &std, &CMatrix::standard(n), depth, threads)?;
    for c in cs {
        let other = monomial_binf(n, &std, c, depth, threads)?;
        rep.check(graphs_isomorphic(&base.graph, &other.graph, true), || {
            format!("M(inf) under {c} is not isomorphic to the standard one at depth {depth}")
        });
    }
    Ok(rep)
}

/// `M(r; μ+τ) = M(r; μ) M(r; τ)`.
pub fn product(mu: &Weight, tau: &Weight, r: i64) -> Result<Report> {
    let mut rep = Report::default();
    let p = bla::product_report(mu, tau, r)?;
    rep.note(format!(
        "|M({mu})| = {}, |M({tau})| = {}, {} distinct products, |M({})| = {}",
        p.left,
        p.right,
        p.products,
        mu + tau,
        p.target
    ));
    rep.check(p.equal, || format!("M({mu}) M({tau}) != M({})", mu + tau));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    #[test]
    fn small_checks_pass() {
        let l = Weight::new(vec![1, 1]);
        for rep in [
            iso_bla(&l, 0, 0).unwrap(),
            op_equiv_bla(&l, 0, 0).unwrap(),
            closure_bla(&l, 0, 0).unwrap(),
            iso_binf(rank(2), 3, &InfParams::standard(rank(2)), 0).unwrap(),
            op_equiv_binf(rank(2), 3, &InfParams::standard(rank(2)), 0).unwrap(),
            closure_binf(rank(2), 3, &InfParams::standard(rank(2)), 0).unwrap(),
            product(&Weight::new(vec![1, 0]), &Weight::new(vec![0, 1]), 0).unwrap(),
        ] {
            assert!(rep.ok(), "{:?}", rep.failures);
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn members_within_counts_kostant_partitions() {
        let sizes: Vec<usize> = (0..=3)
            .map(|d| {
                members_within(rank(2), &InfParams::standard(rank(2)), d)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(sizes, vec![1, 3, 7, 13]);
    }

    #[test]
    fn failures_are_reported() {
        let mut rep = Report::default();
        rep.check(true, || unreachable!());
        rep.check(false, || "boom".into());
        assert_eq!(rep.checked, 2);
        assert_eq!(rep.failures, vec!["boom".to_string()]);
        assert!(!rep.ok());
    }

    #[test]
    fn axioms_hold_on_a_tableau_crystal() {
        let l = Weight::new(vec![2, 1]);
        let model = TableauxBLambda { n: rank(2) };
        let c = bfs_generate_with(&model, Tableau::highest_weight(&l).unwrap(), None, 2).unwrap();
        let mut rep = Report::default();
        for t in &c.elements {
            crystal_axioms(&model, t, &mut rep);
        }
        assert!(rep.ok(), "{:?}", rep.failures);
    }
}
