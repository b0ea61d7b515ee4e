//! Semistandard tableaux: the crystal `B(λ)` of tableaux of a fixed shape
//! and the crystal `T(∞)` of marginally large tableaux.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{from_root_coordinates, shape_of, Rank, Weight};
use crate::error::{Error, Result};
use crate::graph::Crystal;
use crate::signature::{reduce, Signature};

/// A semistandard tableau with entries in `1..=n+1` and at most `n` rows.
/// Rows are stored top to bottom without trailing empty rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TableauWire", into = "TableauWire")]
pub struct Tableau {
    n: Rank,
    rows: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TableauWire {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl TryFrom<TableauWire> for Tableau {
    type Error = Error;

    fn try_from(w: TableauWire) -> Result<Self> {
        Tableau::new(Rank::new(w.n)?, w.rows)
    }
}

impl From<Tableau> for TableauWire {
    fn from(t: Tableau) -> Self {
        TableauWire {
            n: t.n.get(),
            rows: t.rows,
        }
    }
}

/// A box read off a tableau; `row` and `col` count from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadBox {
    pub row: usize,
    pub col: usize,
    pub entry: usize,
}

/// Whether `rows` is a semistandard tableau for rank `n`: rows weakly
/// increase, columns strictly increase, row lengths weakly decrease, entries
/// lie in `1..=n+1` and there are at most `n` rows. With `lambda`, the shape
/// must also be that of `lambda`.
pub fn validate(n: Rank, rows: &[Vec<usize>], lambda: Option<&Weight>) -> bool {
    shape_error(n, rows).is_none()
        && match lambda {
            None => true,
            Some(l) => l.rank() == n.get() && shape_of(l).is_ok_and(|s| s == rows_shape(rows)),
        }
}

fn rows_shape(rows: &[Vec<usize>]) -> Vec<usize> {
    let mut s: Vec<usize> = rows.iter().map(Vec::len).collect();
    while s.last() == Some(&0) {
        s.pop();
    }
    s
}

fn shape_error(n: Rank, rows: &[Vec<usize>]) -> Option<String> {
    let rows = &rows[..rows_shape(rows).len()];
    if rows.len() > n.get() {
        return Some(format!("{} rows exceed rank {}", rows.len(), n.get()));
    }
    for (r, row) in rows.iter().enumerate() {
        if r > 0 && row.len() > rows[r - 1].len() {
            return Some(format!("row {} is longer than the row above", r + 1));
        }
        for (c, &x) in row.iter().enumerate() {
            if x < r + 1 || x > n.get() + 1 {
                return Some(format!("entry {x} out of range in row {}", r + 1));
            }
            if c > 0 && row[c - 1] > x {
                return Some(format!("row {} decreases", r + 1));
            }
            if r > 0 && rows[r - 1][c] >= x {
                return Some(format!("column {} is not strictly increasing", c + 1));
            }
        }
    }
    None
}

impl Tableau {
    pub fn new(n: Rank, mut rows: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(msg) = shape_error(n, &rows) {
            return Err(Error::InvalidTableau(msg));
        }
        rows.truncate(rows_shape(&rows).len());
        Ok(Tableau { n, rows })
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    fn row_len(&self, r: usize) -> usize {
        self.rows.get(r).map_or(0, Vec::len)
    }

    /// Number of `k`-boxes in row `i` (both 1-based).
    pub fn count(&self, i: usize, k: usize) -> usize {
        self.rows
            .get(i - 1)
            .map_or(0, |row| row.iter().filter(|&&x| x == k).count())
    }

    /// The tableau of shape `λ` whose row `i` consists of `i`-boxes.
    pub fn highest_weight(lambda: &Weight) -> Result<Self> {
        let n = Rank::new(lambda.rank())?;
        let rows = shape_of(lambda)?
            .into_iter()
            .enumerate()
            .map(|(r, len)| vec![r + 1; len])
            .collect();
        Tableau::new(n, rows)
    }

    /// `T_∞`: row `i` holds `n - i + 1` copies of `i`.
    pub fn t_infinity(n: Rank) -> Self {
        let rows = (1..=n.get()).map(|i| vec![i; n.get() - i + 1]).collect();
        Tableau { n, rows }
    }

    /// Columns from right to left, each from top to bottom.
    pub fn far_eastern_reading(&self) -> Vec<ReadBox> {
        let width = self.row_len(0);
        let mut out = Vec::new();
        for col in (0..width).rev() {
            for (row, r) in self.rows.iter().enumerate() {
                match r.get(col) {
                    Some(&entry) => out.push(ReadBox { row, col, entry }),
                    None => break,
                }
            }
        }
        out
    }

    /// Reduced `i`-signature over the far-eastern reading; an `(i+1)`-box
    /// writes a 1 and an `i`-box a 0. Origins are `(row, col)`.
    pub fn signature(&self, i: usize) -> Signature<(usize, usize)> {
        reduce(self.far_eastern_reading().into_iter().filter_map(|b| {
            if b.entry == i + 1 {
                Some((1, 0, (b.row, b.col)))
            } else if b.entry == i {
                Some((0, 1, (b.row, b.col)))
            } else {
                None
            }
        }))
    }

    fn with_entry(&self, (r, c): (usize, usize), x: usize) -> Tableau {
        let mut t = self.clone();
        t.rows[r][c] = x;
        t
    }

    /// `f̃_i` on `B(λ)`: the box of the leftmost surviving 0 goes `i -> i+1`.
    pub fn f_bla(&self, i: usize) -> Option<Tableau> {
        let at = *self.signature(i).leftmost_zero()?;
        Some(self.with_entry(at, i + 1))
    }

    /// `ẽ_i` on `B(λ)`: the box of the rightmost surviving 1 goes `i+1 -> i`.
    pub fn e_bla(&self, i: usize) -> Option<Tableau> {
        let at = *self.signature(i).rightmost_one()?;
        Some(self.with_entry(at, i))
    }

    /// `#i`-boxes in row `i` minus the length of row `i+1`, for each `i`.
    fn margins(&self) -> Vec<i64> {
        (1..=self.n.get())
            .map(|i| self.count(i, i) as i64 - self.row_len(i) as i64)
            .collect()
    }

    pub fn is_large(&self) -> bool {
        self.rows.len() == self.n.get() && self.margins().iter().all(|&d| d > 0)
    }

    pub fn is_marginally_large(&self) -> bool {
        self.rows.len() == self.n.get() && self.margins().iter().all(|&d| d == 1)
    }

    fn ensure_marginally_large(&self) -> Result<()> {
        if self.is_marginally_large() {
            Ok(())
        } else {
            Err(Error::NotMarginallyLarge)
        }
    }

    /// `f̃_i` on `T(∞)`. When the changed tableau is no longer large, a
    /// column `1, .., i` is inserted directly left of the changed box.
    pub fn f_tinf(&self, i: usize) -> Result<Tableau> {
        self.ensure_marginally_large()?;
        self.n.check_index(i)?;
        let (r, c) = *self
            .signature(i)
            .leftmost_zero()
            .expect("a large tableau always has a 0 in its signature");
        let mut t = self.with_entry((r, c), i + 1);
        if !t.is_large() {
            for (k, row) in t.rows.iter_mut().take(i).enumerate() {
                row.insert(c, k + 1);
            }
        }
        debug_assert!(t.is_marginally_large(), "f_{i} left T(inf): {t}");
        Ok(t)
    }

    /// `ẽ_i` on `T(∞)`; `None` when the signature has no 1. When the changed
    /// tableau is large but not marginally large, the column through the
    /// changed box is removed.
    pub fn e_tinf(&self, i: usize) -> Result<Option<Tableau>> {
        self.ensure_marginally_large()?;
        self.n.check_index(i)?;
        let Some(&(r, c)) = self.signature(i).rightmost_one() else {
            return Ok(None);
        };
        let mut t = self.with_entry((r, c), i);
        if !t.is_marginally_large() && t.is_large() {
            for row in t.rows.iter_mut().take(i) {
                row.remove(c);
            }
        }
        debug_assert!(t.is_marginally_large(), "e_{i} left T(inf): {t}");
        Ok(Some(t))
    }

    /// `b_k^i`, the number of `k`-boxes in row `i`, for `k > i`; row `i`
    /// of the result lists `b_{i+1}^i, .., b_{n+1}^i`.
    pub fn box_counts(&self) -> Vec<Vec<i64>> {
        let n = self.n.get();
        (1..=n)
            .map(|i| (i + 1..=n + 1).map(|k| self.count(i, k) as i64).collect())
            .collect()
    }

    /// Weight on `T(∞)`: `-Σ_j (Σ_{i<=j} Σ_{k>j} b_k^i) α_j`.
    pub fn wt_tinf(&self) -> Weight {
        let n = self.n.get();
        let coords: Vec<i64> = (1..=n)
            .map(|j| {
                let s: usize = (1..=j)
                    .map(|i| (j + 1..=n + 1).map(|k| self.count(i, k)).sum::<usize>())
                    .sum();
                -(s as i64)
            })
            .collect();
        from_root_coordinates(self.n, &coords).expect("rank matches")
    }

    pub fn eps_signature(&self, i: usize) -> i64 {
        self.signature(i).num_ones() as i64
    }

    pub fn phi_tinf(&self, i: usize) -> i64 {
        self.eps_signature(i) + self.wt_tinf().coeff(i)
    }

    /// Weight on `B(λ)`: a `k`-box contributes `Λ_k - Λ_{k-1}`.
    pub fn wt_bla(&self) -> Weight {
        let n = self.n.get();
        let mut w = vec![0i64; n];
        for &x in self.rows.iter().flatten() {
            if x <= n {
                w[x - 1] += 1;
            }
            if x >= 2 {
                w[x - 2] -= 1;
            }
        }
        Weight::new(w)
    }

    pub fn phi_bla(&self, i: usize) -> i64 {
        self.signature(i).num_zeros() as i64
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                f.write_str(",")?;
            }
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `B(λ)` realized by semistandard tableaux of shape `λ`.
#[derive(Debug, Clone, Copy)]
pub struct TableauxBLambda {
    pub n: Rank,
}

impl Crystal for TableauxBLambda {
    type Element = Tableau;

    fn rank(&self) -> Rank {
        self.n
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn key(&self, x: &Tableau) -> String {
        x.to_string()
    }

    fn f(&self, x: &Tableau, i: usize) -> Option<Tableau> {
        x.f_bla(i)
    }

    fn e(&self, x: &Tableau, i: usize) -> Option<Tableau> {
        x.e_bla(i)
    }

    fn weight(&self, x: &Tableau) -> Weight {
        x.wt_bla()
    }

    fn eps(&self, x: &Tableau, i: usize) -> i64 {
        x.eps_signature(i)
    }

    fn phi(&self, x: &Tableau, i: usize) -> i64 {
        x.phi_bla(i)
    }
}

/// `T(∞)`, the marginally large tableaux. Elements passed in must be
/// marginally large.
#[derive(Debug, Clone, Copy)]
pub struct TableauxBInfinity {
    pub n: Rank,
}

impl Crystal for TableauxBInfinity {
    type Element = Tableau;

    fn rank(&self) -> Rank {
        self.n
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn key(&self, x: &Tableau) -> String {
        x.to_string()
    }

    fn f(&self, x: &Tableau, i: usize) -> Option<Tableau> {
        Some(x.f_tinf(i).expect("element of T(inf)"))
    }

    fn e(&self, x: &Tableau, i: usize) -> Option<Tableau> {
        x.e_tinf(i).expect("element of T(inf)")
    }

    fn weight(&self, x: &Tableau) -> Weight {
        x.wt_tinf()
    }

    fn eps(&self, x: &Tableau, i: usize) -> i64 {
        x.eps_signature(i)
    }

    fn phi(&self, x: &Tableau, i: usize) -> i64 {
        x.phi_tinf(i)
    }
}
