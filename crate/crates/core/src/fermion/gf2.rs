//! Dense linear algebra over GF(2) on `u128` bit rows (column `j` is bit `j`).

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in row order. Rows past the rank are zeroed and dropped.
pub(crate) fn rref(rows: &mut Vec<u128>, n_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n_cols {
        let bit = 1u128 << col;
        let Some(found) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, found);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : popcount(row & v) even for every row}`.
pub(crate) fn null_space(rows: &[u128], n_cols: usize) -> Vec<u128> {
    let mut m: Vec<u128> = rows.iter().copied().filter(|&r| r != 0).collect();
    let pivots = rref(&mut m, n_cols);
    let mut basis = Vec::new();
    for free in (0..n_cols).filter(|c| !pivots.contains(c)) {
        let mut v = 1u128 << free;
        for (row, &p) in m.iter().zip(&pivots) {
            if (row >> free) & 1 == 1 {
                v |= 1u128 << p;
            }
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix given by rows; `None` if singular.
pub(crate) fn inverse(rows: &[u128], n: usize) -> Option<Vec<u128>> {
    let mut a = rows.to_vec();
    let mut inv: Vec<u128> = (0..n).map(|i| 1u128 << i).collect();
    for col in 0..n {
        let bit = 1u128 << col;
        let found = (col..n).find(|&i| a[i] & bit != 0)?;
        a.swap(col, found);
        inv.swap(col, found);
        for i in 0..n {
            if i != col && a[i] & bit != 0 {
                a[i] ^= a[col];
                inv[i] ^= inv[col];
            }
        }
    }
    Some(inv)
}

#[inline]
pub(crate) fn parity(x: u128) -> bool {
    x.count_ones() % 2 == 1
}
