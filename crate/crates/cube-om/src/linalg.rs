//! Exact integer linear algebra: rank, span membership, and kernels.
//!
//! All elimination is fraction-free over `i128` with checked arithmetic,
//! and every combined row is reduced by its content (gcd) immediately, so
//! intermediates stay far below the overflow threshold for cube data
//! (entries start in `{-1, 0, 1}` and `n <= 8`). Checked arithmetic is the
//! safety net: an overflow surfaces as an error, never a silent wrap.

use crate::{Error, Result};

pub(crate) type Int = i128;

fn gcd(mut a: Int, mut b: Int) -> Int {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn checked_mul(a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn checked_sub(a: Int, b: Int) -> Result<Int> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// Divides the slice by the gcd of its entries (content), keeping signs.
fn reduce_content(row: &mut [Int]) {
    let mut g = 0;
    for &x in row.iter() {
        g = gcd(g, x);
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

/// `row := a * row - b * other`, elementwise, checked.
fn combine(a: Int, row: &mut [Int], b: Int, other: &[Int]) -> Result<()> {
    for (x, &y) in row.iter_mut().zip(other) {
        *x = checked_sub(checked_mul(a, *x)?, checked_mul(b, y)?)?;
    }
    Ok(())
}

/// An integer row basis in echelon form, grown one row at a time.
///
/// Every inserted row was reduced against all earlier rows, so reducing a
/// candidate against the rows in insertion order zeroes it out exactly when
/// it lies in the span.
pub(crate) struct RowBasis {
    cols: usize,
    rows: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub(crate) fn new(cols: usize) -> RowBasis {
        RowBasis {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &mut [Int]) -> Result<()> {
        debug_assert_eq!(row.len(), self.cols);
        for (basis_row, &p) in self.rows.iter().zip(&self.pivots) {
            if row[p] == 0 {
                continue;
            }
            let g = gcd(basis_row[p], row[p]);
            combine(basis_row[p] / g, row, row[p] / g, basis_row)?;
            debug_assert_eq!(row[p], 0);
            reduce_content(row);
        }
        Ok(())
    }

    /// Inserts `row` if independent of the basis; returns whether the rank grew.
    pub(crate) fn insert(&mut self, mut row: Vec<Int>) -> Result<bool> {
        self.reduce(&mut row)?;
        match row.iter().position(|&x| x != 0) {
            None => Ok(false),
            Some(p) => {
                if row[p] < 0 {
                    for x in row.iter_mut() {
                        *x = -*x;
                    }
                }
                self.rows.push(row);
                self.pivots.push(p);
                Ok(true)
            }
        }
    }

    /// Whether `row` lies in the row span.
    pub(crate) fn contains(&self, mut row: Vec<Int>) -> Result<bool> {
        self.reduce(&mut row)?;
        Ok(row.iter().all(|&x| x == 0))
    }
}

/// Left kernel of the matrix given by rows: one integer coefficient vector
/// `c` with `sum_i c_i * row_i = 0` per rank deficiency.
///
/// Each echelon row carries the combination of input rows that produced it,
/// so a row that reduces to zero hands back its dependency for free.
pub(crate) fn left_kernel(rows: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let m = rows.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let cols = rows[0].len();
    // (reduced row, combination of inputs producing it, pivot column)
    let mut echelon: Vec<(Vec<Int>, Vec<Int>, usize)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.len(), cols);
        let mut data = row.clone();
        let mut tag = vec![0; m];
        tag[i] = 1;
        for (basis_row, basis_tag, p) in &echelon {
            if data[*p] == 0 {
                continue;
            }
            let g = gcd(basis_row[*p], data[*p]);
            let a = basis_row[*p] / g;
            let b = data[*p] / g;
            combine(a, &mut data, b, basis_row)?;
            combine(a, &mut tag, b, basis_tag)?;
            debug_assert_eq!(data[*p], 0);
            let mut joint: Vec<Int> = data.iter().chain(tag.iter()).copied().collect();
            reduce_content(&mut joint);
            data.copy_from_slice(&joint[..cols]);
            tag.copy_from_slice(&joint[cols..]);
        }
        match data.iter().position(|&x| x != 0) {
            None => kernel.push(tag),
            Some(p) => echelon.push((data, tag, p)),
        }
    }
    Ok(kernel)
}

/// The unique (up to scale) integer vector orthogonal to all rows, when the
/// right kernel is one-dimensional; `None` otherwise.
pub(crate) fn right_kernel_unique(rows: &[Vec<Int>]) -> Result<Option<Vec<Int>>> {
    if rows.is_empty() {
        return Ok(None);
    }
    let cols = rows[0].len();
    let transposed: Vec<Vec<Int>> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c]).collect())
        .collect();
    let mut kernel = left_kernel(&transposed)?;
    if kernel.len() == 1 {
        Ok(Some(kernel.pop().unwrap()))
    } else {
        Ok(None)
    }
}
