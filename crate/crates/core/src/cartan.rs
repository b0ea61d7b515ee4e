//! Cartan datum of type A_n.
//!
//! Weights are stored in the fundamental-weight basis `Λ_1..Λ_n`, so the
//! pairing `⟨h_i, w⟩` is simply the `i`-th coordinate. Simple roots are
//! expressed in that basis through the Cartan matrix.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::ExpPair;

/// Rank `n` of `A_n`; the index set is `{1, .., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(usize);

impl Rank {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRank);
        }
        Ok(Rank(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Checks `1 <= i <= n`.
    pub fn check_index(self, i: usize) -> Result<()> {
        if i == 0 || i > self.0 {
            return Err(Error::IndexOutOfRange {
                index: i as i64,
                rank: self.0,
            });
        }
        Ok(())
    }

    pub fn indices(self) -> std::ops::RangeInclusive<usize> {
        1..=self.0
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0)
    }
}

/// Entry `a_{ij}` of the Cartan matrix of `A_n`.
pub fn cartan_entry(n: Rank, i: usize, j: usize) -> Result<i64> {
    n.check_index(i)?;
    n.check_index(j)?;
    Ok(if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    })
}

/// Integral weight in the `Λ` basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "WeightWire", into = "WeightWire")]
pub struct Weight(Vec<i64>);

#[derive(Serialize, Deserialize)]
struct WeightWire {
    n: usize,
    lambda: Vec<i64>,
}

impl TryFrom<WeightWire> for Weight {
    type Error = Error;

    fn try_from(w: WeightWire) -> Result<Self> {
        Rank::new(w.n)?;
        if w.lambda.len() != w.n {
            return Err(Error::RankMismatch {
                expected: w.n,
                actual: w.lambda.len(),
            });
        }
        Ok(Weight(w.lambda))
    }
}

impl From<Weight> for WeightWire {
    fn from(w: Weight) -> Self {
        WeightWire {
            n: w.0.len(),
            lambda: w.0,
        }
    }
}

impl Weight {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Weight(coeffs)
    }

    pub fn zero(n: Rank) -> Self {
        Weight(vec![0; n.get()])
    }

    /// The fundamental weight `Λ_i`.
    pub fn fundamental(n: Rank, i: usize) -> Result<Self> {
        n.check_index(i)?;
        let mut w = vec![0; n.get()];
        w[i - 1] = 1;
        Ok(Weight(w))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Coefficient of `Λ_i`, 1-based.
    pub fn coeff(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&l| l >= 0)
    }

    pub fn ensure_dominant(&self) -> Result<()> {
        if self.is_dominant() {
            Ok(())
        } else {
            Err(Error::NotDominant(self.0.clone()))
        }
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Add for &Weight {
    type Output = Weight;

    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;

    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weight whose coefficients are lexicographically ordered integer pairs,
/// as carried by extended monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtWeight(pub Vec<ExpPair>);

impl ExtWeight {
    /// Drops the first components.
    pub fn project(&self) -> Weight {
        Weight(self.0.iter().map(|p| p.b).collect())
    }
}

/// `α_i` in the `Λ` basis.
pub fn simple_root(n: Rank, i: usize) -> Result<Weight> {
    n.check_index(i)?;
    n.indices()
        .map(|j| cartan_entry(n, j, i))
        .collect::<Result<Vec<_>>>()
        .map(Weight)
}

/// `⟨h_i, w⟩`.
pub fn pairing(i: usize, w: &Weight) -> Result<i64> {
    if i == 0 || i > w.rank() {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            rank: w.rank(),
        });
    }
    Ok(w.coeff(i))
}

/// Writes `w` as `Σ c_j α_j`, if `w` lies in the root lattice.
///
/// Uses the closed form of the inverse Cartan matrix of `A_n`,
/// `(A⁻¹)_{ij} = min(i,j)(n+1-max(i,j))/(n+1)`.
pub fn root_coordinates(w: &Weight) -> Option<Vec<i64>> {
    let n = w.rank() as i64;
    let mut out = Vec::with_capacity(w.rank());
    for i in 1..=n {
        let num: i64 = (1..=n)
            .map(|j| i.min(j) * (n + 1 - i.max(j)) * w.coeff(j as usize))
            .sum();
        if num % (n + 1) != 0 {
            return None;
        }
        out.push(num / (n + 1));
    }
    Some(out)
}

/// `Σ c_j α_j` as a weight.
pub fn from_root_coordinates(n: Rank, coords: &[i64]) -> Result<Weight> {
    if coords.len() != n.get() {
        return Err(Error::RankMismatch {
            expected: n.get(),
            actual: coords.len(),
        });
    }
    let mut w = vec![0; n.get()];
    for (j, &c) in coords.iter().enumerate() {
        let root = simple_root(n, j + 1)?;
        for (acc, r) in w.iter_mut().zip(root.coeffs()) {
            *acc += c * r;
        }
    }
    Ok(Weight(w))
}

/// Height of `top - w` when it is a nonnegative sum of simple roots.
pub fn depth_below(top: &Weight, w: &Weight) -> Option<u64> {
    let coords = root_coordinates(&(top - w))?;
    if coords.iter().any(|&c| c < 0) {
        return None;
    }
    Some(coords.iter().map(|&c| c as u64).sum())
}

/// Young diagram of a dominant weight: row `i` has `Σ_{k>=i} l_k` boxes.
pub fn shape_of(lambda: &Weight) -> Result<Vec<usize>> {
    lambda.ensure_dominant()?;
    let l = lambda.coeffs();
    let mut rows: Vec<usize> = (0..l.len())
        .map(|i| l[i..].iter().sum::<i64>() as usize)
        .collect();
    while rows.last() == Some(&0) {
        rows.pop();
    }
    Ok(rows)
}

/// Inverse of [`shape_of`] for a diagram with at most `n` rows.
pub fn weight_of_shape(n: Rank, shape: &[usize]) -> Result<Weight> {
    if shape.len() > n.get() {
        return Err(Error::InvalidTableau(format!(
            "{} rows exceed rank {}",
            shape.len(),
            n.get()
        )));
    }
    let row = |i: usize| shape.get(i).copied().unwrap_or(0) as i64;
    let mut l = Vec::with_capacity(n.get());
    for i in 0..n.get() {
        let d = row(i) - row(i + 1);
        if d < 0 {
            return Err(Error::InvalidTableau("row lengths increase".into()));
        }
        l.push(d);
    }
    Ok(Weight(l))
}

/// Number of semistandard tableaux of shape `shape_of(λ)` with entries in
/// `1..=n+1`, counted by filling the diagram box by box.
pub fn dimension_oracle(lambda: &Weight) -> Result<u64> {
    let shape = shape_of(lambda)?;
    let max_entry = lambda.rank() + 1;
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();

    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        max_entry: usize,
    ) -> u64 {
        let Some(&(r, c)) = cells.get(k) else {
            return 1;
        };
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        let mut count = 0;
        for x in lo_row.max(lo_col)..=max_entry {
            grid[r][c] = x;
            count += fill(k + 1, cells, grid, max_entry);
        }
        count
    }

    Ok(fill(0, &cells, &mut grid, max_entry))
}

/// All dominant weights of rank `n` with `Σ l_i <= total`.
pub fn dominant_weights_up_to(n: Rank, total: i64) -> Vec<Weight> {
    fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if cur.len() == n {
            out.push(Weight(cur.clone()));
            return;
        }
        for l in 0..=left {
            cur.push(l);
            rec(n, left - l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n.get(), total, &mut Vec::new(), &mut out);
    out
}
