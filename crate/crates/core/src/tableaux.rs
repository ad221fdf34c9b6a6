//! Legal fillings of the "left column / height-2 band / right column" skew
//! shape, and closed forms for their counts.
//!
//! The shape with parameters `(a, i, b)` has a left-most column of height
//! `a`, then `i - 1` columns of height 2, then a right-most column of height
//! `b`. The height-2 band sits on the top two rows of the left column and on
//! the bottom two rows of the right column, so the right column sticks up
//! above the band and the left column hangs below it:
//!
//! ```text
//!             [ ]
//!             [ ]
//!   [ ][ ][ ][ ]    <- band (rows b-2, b-1)
//!   [ ][ ][ ][ ]
//!   [ ]
//!   [ ]
//! ```
//!
//! Rows are numbered from the top of the right column, so the right column
//! occupies rows `0..b` and the left column rows `b-2..b-2+a`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactmath::{choose, exact_div, factorial, falling_factorial};
use crate::{Error, Result};

/// Default limit on the number of cells an enumeration will accept.
pub const DEFAULT_CELL_CAP: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

/// A geometrically realizable shape: `a, b >= 2` and `i >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SkytShape {
    a: u32,
    i: u32,
    b: u32,
}

impl SkytShape {
    pub fn new(a: u32, i: u32, b: u32) -> Result<Self> {
        if a < 2 || b < 2 || i < 1 {
            return Err(Error::Domain(format!(
                "shape ({a}, {i}, {b}) needs a, b >= 2 and i >= 1"
            )));
        }
        Ok(Self { a, i, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn cell_count(&self) -> u32 {
        self.a + self.b + 2 * self.i - 2
    }

    /// Cells in column-major order: left column top to bottom, then each
    /// band column (top, bottom), then the right column top to bottom.
    pub fn cells(&self) -> Vec<Cell> {
        let top = self.b - 2;
        let mut cells = Vec::with_capacity(self.cell_count() as usize);
        cells.extend((0..self.a).map(|r| Cell { row: top + r, col: 0 }));
        for col in 1..self.i {
            cells.push(Cell { row: top, col });
            cells.push(Cell { row: top + 1, col });
        }
        cells.extend((0..self.b).map(|row| Cell { row, col: self.i }));
        cells
    }

    /// Positions of the left column within [`cells`](Self::cells).
    pub fn left_column(&self) -> std::ops::Range<usize> {
        0..self.a as usize
    }

    /// Positions of the right column within [`cells`](Self::cells).
    pub fn right_column(&self) -> std::ops::Range<usize> {
        let n = self.cell_count() as usize;
        n - self.b as usize..n
    }

    /// For every cell, the positions of the cell directly above and the cell
    /// directly to the left, when present.
    fn neighbours(&self, cells: &[Cell]) -> Vec<[Option<usize>; 2]> {
        let find = |row: u32, col: u32| cells.iter().position(|c| c.row == row && c.col == col);
        cells
            .iter()
            .map(|c| {
                let above = c.row.checked_sub(1).and_then(|r| find(r, c.col));
                let left = c.col.checked_sub(1).and_then(|k| find(c.row, k));
                [above, left]
            })
            .collect()
    }
}

/// A filling of a [`SkytShape`], entries listed in column-major cell order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkytFilling {
    shape: SkytShape,
    entries: Vec<u32>,
}

impl SkytFilling {
    /// Wraps `entries` after checking it is a legal filling.
    pub fn new(shape: SkytShape, entries: Vec<u32>) -> Result<Self> {
        let filling = Self { shape, entries };
        if !filling.is_legal() {
            return Err(Error::Invalid(format!(
                "{:?} is not a legal filling of {:?}",
                filling.entries, shape
            )));
        }
        Ok(filling)
    }

    pub fn shape(&self) -> SkytShape {
        self.shape
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn left_column(&self) -> &[u32] {
        &self.entries[self.shape.left_column()]
    }

    pub fn right_column(&self) -> &[u32] {
        &self.entries[self.shape.right_column()]
    }

    pub fn entry_at(&self, cell: Cell) -> Option<u32> {
        let pos = self.shape.cells().iter().position(|&c| c == cell)?;
        Some(self.entries[pos])
    }

    /// Uses each of `1..=N` once, rows increase to the right, columns
    /// increase downwards.
    pub fn is_legal(&self) -> bool {
        let n = self.shape.cell_count() as usize;
        if self.entries.len() != n {
            return false;
        }
        let mut seen = vec![false; n + 1];
        for &v in &self.entries {
            if v == 0 || v as usize > n || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        let cells = self.shape.cells();
        self.shape
            .neighbours(&cells)
            .iter()
            .enumerate()
            .all(|(k, nb)| nb.iter().flatten().all(|&p| self.entries[p] < self.entries[k]))
    }
}

fn check_cap(shape: &SkytShape, cap: u32) -> Result<()> {
    // entries and cell sets are tracked in u64 bitmasks
    if shape.cell_count() > cap.min(63) {
        return Err(Error::TooLarge(format!(
            "too large to enumerate: shape ({}, {}, {}) has {} cells, above the cap of {cap}",
            shape.a,
            shape.i,
            shape.b,
            shape.cell_count()
        )));
    }
    Ok(())
}

/// Calls `visit` on every legal filling of `shape` in lexicographic order of
/// the column-major entry sequence and returns the number of fillings.
///
/// Cells are filled one at a time in column-major order. Each cell takes a
/// value above its upper and left neighbours and inside the window allowed
/// by the number of cells forced below and above it.
pub fn for_each_skyt<F: FnMut(&[u32])>(shape: SkytShape, cap: u32, mut visit: F) -> Result<u64> {
    check_cap(&shape, cap)?;
    let cells = shape.cells();
    let n = cells.len();
    let neighbours = shape.neighbours(&cells);

    // reach[x] = set of cells forced below x (transitively), as a bitmask
    let mut reach = vec![0u64; n];
    for x in (0..n).rev() {
        for y in x + 1..n {
            if neighbours[y].iter().flatten().any(|&p| p == x) {
                reach[x] |= 1 << y | reach[y];
            }
        }
    }
    let lo: Vec<u32> = (0..n)
        .map(|x| 1 + (0..n).filter(|&y| reach[y] >> x & 1 == 1).count() as u32)
        .collect();
    let hi: Vec<u32> = (0..n).map(|x| n as u32 - reach[x].count_ones()).collect();

    struct Search<'a, F> {
        neighbours: &'a [[Option<usize>; 2]],
        lo: &'a [u32],
        hi: &'a [u32],
        entries: Vec<u32>,
        used: u64,
        count: u64,
        visit: F,
    }

    impl<F: FnMut(&[u32])> Search<'_, F> {
        fn fill(&mut self, pos: usize) {
            if pos == self.entries.len() {
                self.count += 1;
                (self.visit)(&self.entries);
                return;
            }
            let floor = self.neighbours[pos]
                .iter()
                .flatten()
                .map(|&p| self.entries[p] + 1)
                .max()
                .unwrap_or(1)
                .max(self.lo[pos]);
            for v in floor..=self.hi[pos] {
                if self.used >> v & 1 == 1 {
                    continue;
                }
                self.entries[pos] = v;
                self.used |= 1 << v;
                self.fill(pos + 1);
                self.used &= !(1 << v);
            }
        }
    }

    let mut search = Search {
        neighbours: &neighbours,
        lo: &lo,
        hi: &hi,
        entries: vec![0; n],
        used: 0,
        count: 0,
        visit: &mut visit,
    };
    search.fill(0);
    Ok(search.count)
}

pub fn enumerate_skyt(a: u32, i: u32, b: u32) -> Result<Vec<SkytFilling>> {
    enumerate_skyt_with_cap(a, i, b, DEFAULT_CELL_CAP)
}

pub fn enumerate_skyt_with_cap(a: u32, i: u32, b: u32, cap: u32) -> Result<Vec<SkytFilling>> {
    let shape = SkytShape::new(a, i, b)?;
    let mut out = Vec::new();
    for_each_skyt(shape, cap, |e| {
        out.push(SkytFilling { shape, entries: e.to_vec() })
    })?;
    Ok(out)
}

/// Fillings of the `(2, i, b)` shape with 1 at the top of the left column.
pub fn enumerate_bar_skyt(i: u32, b: u32) -> Result<Vec<SkytFilling>> {
    enumerate_bar_skyt_with_cap(i, b, DEFAULT_CELL_CAP)
}

pub fn enumerate_bar_skyt_with_cap(i: u32, b: u32, cap: u32) -> Result<Vec<SkytFilling>> {
    let shape = SkytShape::new(2, i, b)?;
    let mut out = Vec::new();
    for_each_skyt(shape, cap, |e| {
        if e[0] == 1 {
            out.push(SkytFilling { shape, entries: e.to_vec() })
        }
    })?;
    Ok(out)
}

/// Alternating-sum count of legal fillings, with the conventions
/// `skyt(a, 0, b) = 1` and `skyt(a, i, b) = 0` when `i > 0` and `a < 2` or
/// `b < 2`.
pub fn count_skyt(a: u32, i: u32, b: u32) -> Result<BigInt> {
    if i == 0 {
        return Ok(BigInt::one());
    }
    if a < 2 || b < 2 {
        return Ok(BigInt::zero());
    }
    let (a, i, b) = (a as u64, i as u64, b as u64);
    // Each term has denominator (a+i+k)(i+k+1)!, which divides
    // (i+b-1)! * prod_{k=0}^{b-2} (a+i+k).
    let band: BigInt = (0..=b - 2).map(|k| BigInt::from(a + i + k)).product();
    let top_factorial = factorial(i + b - 1);
    let mut numerator = BigInt::zero();
    for k in 0..=b - 2 {
        let mut term = choose(a + b + 2 * i - 2, b - 2 - k)
            * factorial(a + 2 * i + k)
            * (k + 1)
            * falling_factorial((i + b - 1) as i64, b - 2 - k)
            * (&band / (a + i + k));
        if k % 2 == 1 {
            term = -term;
        }
        numerator += term;
    }
    let denominator = &band * &top_factorial * factorial(i) * factorial(a - 2) * (a + i - 1);
    exact_div(&numerator, &denominator, "skyt alternating sum")
}

/// The same count through the positive sum, put over a common denominator
/// and divided once.
pub fn count_skyt_positive(a: u32, i: u32, b: u32) -> Result<BigInt> {
    SkytShape::new(a, i, b)?;
    let (a, i, b) = (a as u64, i as u64, b as u64);
    let mut sum = BigInt::zero();
    for k in 0..=b - 2 {
        sum += falling_factorial((b + i - k - 3) as i64, b - k - 2)
            * factorial(k + 1)
            * falling_factorial((b - 2) as i64, k)
            * falling_factorial((a + i + b - 2) as i64, b - k - 2);
    }
    let numerator = choose(a + i - 2, i) * choose(a + b + 2 * i - 2, b + i - 1) * sum;
    let denominator = factorial(b - 2) * falling_factorial((a + i + b - 2) as i64, b - 1);
    exact_div(&numerator, &denominator, "skyt positive sum")
}

/// Single-term count of fillings of `(2, i, b)` with 1 on top of the left
/// column. Zero when `i = 0`, and zero when `b < 2` because the ambient
/// shape is then empty.
pub fn count_bar_skyt(i: u32, b: u32) -> Result<BigInt> {
    if i == 0 || b < 2 {
        return Ok(BigInt::zero());
    }
    let (i, b) = (i as u64, b as u64);
    let numerator = factorial(b + 2 * i - 1) * 2u32;
    let denominator =
        factorial(i + 1) * factorial(i - 1) * factorial(b - 2) * (b + i) * (b + i - 2);
    exact_div(&numerator, &denominator, "bar skyt closed form")
}

/// Alternating-sum form of [`count_bar_skyt`].
pub fn count_bar_skyt_alternating(i: u32, b: u32) -> Result<BigInt> {
    if i == 0 || b < 2 {
        return Ok(BigInt::zero());
    }
    let (i, b) = (i as u64, b as u64);
    let mut numerator = BigInt::zero();
    for k in 0..=b - 2 {
        let mut term = choose(b + 2 * i - 1, b - 2 - k)
            * falling_factorial((2 * i + k + 2) as i64, i)
            * (k + 1);
        if k % 2 == 1 {
            term = -term;
        }
        numerator += term;
    }
    exact_div(&numerator, &factorial(i + 1), "bar skyt alternating sum")
}

/// `skyt(m+1, 1, d-1)` through the closed form `C(m+d, d-1) - m - d`,
/// valid for `m >= 1`, `d >= 3`.
pub fn count_skyt_one_band(m: u32, d: u32) -> Result<BigInt> {
    if m < 1 || d < 3 {
        return Err(Error::Domain(format!("closed form needs m >= 1, d >= 3 (got m = {m}, d = {d})")));
    }
    Ok(choose((m + d) as u64, (d - 1) as u64) - (m + d))
}

/// Counts fillings of `(m+1, i, d-2i+1)` meeting at least one of: the top of
/// the right column is 1; the bottom of the right column exceeds `d + c`;
/// the third entry of the left column is below `d + 1` (never met when the
/// left column is shorter than 3).
///
/// For `i = 0` this returns the conventional count 1, and for `m = 0` the
/// shape is empty so the count is 0.
pub fn count_disjoint_positive(m: u32, d: u32, i: u32, c: u64) -> Result<BigInt> {
    count_disjoint_positive_with_cap(m, d, i, c, DEFAULT_CELL_CAP)
}

pub fn count_disjoint_positive_with_cap(m: u32, d: u32, i: u32, c: u64, cap: u32) -> Result<BigInt> {
    if 2 * i >= d && i > 0 {
        return Err(Error::Domain(format!("need i < d/2 (got i = {i}, d = {d})")));
    }
    if i == 0 {
        return Ok(BigInt::one());
    }
    if m == 0 {
        return Ok(BigInt::zero());
    }
    let shape = SkytShape::new(m + 1, i, d - 2 * i + 1)?;
    let (left, right) = (shape.left_column(), shape.right_column());
    let threshold = d as u64 + c;
    let mut hits = 0u64;
    for_each_skyt(shape, cap, |e| {
        let right = &e[right.clone()];
        let left = &e[left.clone()];
        let top_is_one = right[0] == 1;
        let bottom_large = right[right.len() - 1] as u64 > threshold;
        let third_small = left.len() >= 3 && left[2] < d + 1;
        if top_is_one || bottom_large || third_small {
            hits += 1;
        }
    })?;
    Ok(BigInt::from(hits))
}
