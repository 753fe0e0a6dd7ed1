//! Linear algebra over chain rings: Smith-style diagonalization by unimodular
//! row/column operations, linear solving, and kernel computation. Pivots are
//! chosen of minimal valuation, which is what makes elimination valid over a
//! chain ring.

use crate::error::{CsError, Result};
use crate::rings::{ChainRing, Ring};

pub type Mat<R> = Vec<Vec<<R as Ring>::Elem>>;

pub fn mat_mul<R: Ring>(ring: &R, a: &Mat<R>, b: &Mat<R>) -> Mat<R> {
    let n = a.len();
    let k = if n > 0 { a[0].len() } else { 0 };
    let m = if !b.is_empty() { b[0].len() } else { 0 };
    assert_eq!(k, b.len());
    let mut out = vec![vec![ring.zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = ring.zero();
            for t in 0..k {
                acc = ring.add(&acc, &ring.mul(&a[i][t], &b[t][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Mat<R> {
    let mut m = vec![vec![ring.zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ring.one();
    }
    m
}

/// Result of Smith reduction over a chain ring.
pub struct Smith<R: Ring> {
    /// pi-valuations of the nonzero diagonal invariants, ascending. Entries
    /// that vanish at working precision are *not* listed here.
    pub invariants: Vec<u32>,
    /// Count of diagonal positions that are zero at working precision
    /// (valuation >= max_len), i.e. min(rows, cols) - invariants.len().
    pub zero_diagonal: usize,
    /// Row transform: smith = row_t * M * col_t.
    pub row_t: Mat<R>,
    pub col_t: Mat<R>,
    /// The reduced diagonal matrix itself.
    pub reduced: Mat<R>,
    /// True when some pivot decision involved an element indistinguishable
    /// from zero at working precision.
    pub precision_flag: bool,
}

/// Diagonalize `m` over a chain ring. Always succeeds; exactness caveats are
/// reported through `precision_flag` (an exact zero and an element of
/// valuation >= max_len cannot be distinguished).
pub fn smith_reduce<R: ChainRing>(ring: &R, m: &Mat<R>) -> Smith<R> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut a = m.clone();
    let mut row_t = identity(ring, rows);
    let mut col_t = identity(ring, cols);
    let mut invariants = vec![];
    let mut precision_flag = false;

    let steps = rows.min(cols);
    for k in 0..steps {
        // find entry of minimal valuation in the remaining block
        let mut best: Option<(usize, usize, u32)> = None;
        for i in k..rows {
            for j in k..cols {
                if let Some(v) = ring.val(&a[i][j]) {
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (pi, pj, pv) = match best {
            None => break, // rest of the block is zero at precision
            Some(t) => t,
        };
        if pv > 0 {
            // entries of valuation >= max_len were treated as zero above
            precision_flag = precision_flag || pv as u64 * 2 >= ring.max_len() as u64;
        }
        a.swap(k, pi);
        row_t.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in col_t.iter_mut() {
                row.swap(k, pj);
            }
        }
        // pivot has minimal valuation: all entries in its row/col divisible
        let (_, pu) = ring.unit_part(&a[k][k]).unwrap();
        let pinv = ring.try_inv(&pu).unwrap();
        for i in (k + 1)..rows {
            if ring.is_zero(&a[i][k]) {
                continue;
            }
            let q = ring
                .div_exact(&a[i][k], &a[k][k])
                .unwrap_or_else(|| ring.mul(&ring.pi_pow(0), &ring.mul(&a[i][k], &pinv)));
            // row_i -= q * row_k
            for j in 0..cols {
                let t = ring.mul(&q, &a[k][j]);
                a[i][j] = ring.sub(&a[i][j], &t);
            }
            for j in 0..rows {
                let t = ring.mul(&q, &row_t[k][j]);
                row_t[i][j] = ring.sub(&row_t[i][j], &t);
            }
        }
        for j in (k + 1)..cols {
            if ring.is_zero(&a[k][j]) {
                continue;
            }
            let q = ring.div_exact(&a[k][j], &a[k][k]).unwrap();
            for i in 0..rows {
                let t = ring.mul(&a[i][k], &q);
                a[i][j] = ring.sub(&a[i][j], &t);
            }
            for i in 0..cols {
                let t = ring.mul(&col_t[i][k], &q);
                col_t[i][j] = ring.sub(&col_t[i][j], &t);
            }
        }
        invariants.push(pv);
    }
    invariants.sort_unstable();
    let zero_diagonal = steps - invariants.len();
    Smith {
        invariants,
        zero_diagonal,
        row_t,
        col_t,
        reduced: a,
        precision_flag,
    }
}

/// Solve the square-ish augmented system: `mat` has `ncols` coefficient
/// columns and one extra right-hand-side column. Returns a solution vector of
/// length `ncols` when one exists. Destroys `mat`.
pub fn solve_chain<R: ChainRing>(
    ring: &R,
    mat: &mut Vec<Vec<R::Elem>>,
    ncols: usize,
) -> Option<Vec<R::Elem>> {
    let rows = mat.len();
    let coeff: Mat<R> = mat.iter().map(|r| r[..ncols].to_vec()).collect();
    let rhs: Vec<R::Elem> = mat.iter().map(|r| r[ncols].clone()).collect();
    let s = smith_reduce(ring, &coeff);
    // transform rhs: D = row_t * A * col_t, A x = b  =>  D y = row_t b, x = col_t y
    let tb: Vec<R::Elem> = (0..rows)
        .map(|i| {
            let mut acc = ring.zero();
            for j in 0..rows {
                acc = ring.add(&acc, &ring.mul(&s.row_t[i][j], &rhs[j]));
            }
            acc
        })
        .collect();
    let mut y = vec![ring.zero(); ncols];
    for i in 0..rows.min(ncols) {
        let d = &s.reduced[i][i];
        if ring.is_zero(d) {
            if !ring.is_zero(&tb[i]) {
                return None;
            }
            continue;
        }
        match ring.div_exact(&tb[i], d) {
            Some(q) => y[i] = q,
            None => return None,
        }
    }
    for i in ncols.min(rows)..rows {
        if !ring.is_zero(&tb[i]) {
            return None;
        }
    }
    // x = col_t * y
    let x: Vec<R::Elem> = (0..ncols)
        .map(|i| {
            let mut acc = ring.zero();
            for j in 0..ncols {
                acc = ring.add(&acc, &ring.mul(&s.col_t[i][j], &y[j]));
            }
            acc
        })
        .collect();
    Some(x)
}

/// Kernel generators of the map x -> M x over a chain ring (columns = domain).
/// Returns vectors spanning {x : Mx = 0}.
pub fn kernel_chain<R: ChainRing>(ring: &R, m: &Mat<R>) -> Vec<Vec<R::Elem>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { return vec![] };
    let s = smith_reduce(ring, m);
    // D = R M C; kernel of D: for diagonal d_i of valuation v, pi^(L - v) e_i;
    // for zero diagonals and extra columns, e_i itself. Kernel of M = C * ker(D).
    let mut gens: Vec<Vec<R::Elem>> = vec![];
    let max_l = ring.max_len();
    for i in 0..cols {
        let diag = if i < rows.min(cols) {
            s.reduced[i][i].clone()
        } else {
            ring.zero()
        };
        let base = match ring.val(&diag) {
            None => Some(ring.one()),
            Some(0) => None,
            Some(v) => Some(ring.pi_pow(max_l - v)),
        };
        if let Some(c) = base {
            let gen: Vec<R::Elem> = (0..cols).map(|r| ring.mul(&s.col_t[r][i], &c)).collect();
            if gen.iter().any(|x| !ring.is_zero(x)) {
                gens.push(gen);
            }
        }
    }
    gens
}

/// Determinant by cofactor expansion; fine for the small matrices used in
/// cross-checks.
pub fn det_cofactor<R: Ring>(ring: &R, m: &Mat<R>) -> Result<R::Elem> {
    let n = m.len();
    if n == 0 {
        return Ok(ring.one());
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(CsError::MatrixShape("determinant of non-square matrix".into()));
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = ring.zero();
    for j in 0..n {
        if ring.is_zero(&m[0][j]) {
            continue;
        }
        let minor: Mat<R> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let sub = det_cofactor(ring, &minor)?;
        let term = ring.mul(&m[0][j], &sub);
        acc = if j % 2 == 0 {
            ring.add(&acc, &term)
        } else {
            ring.sub(&acc, &term)
        };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zmod;

    #[test]
    fn smith_diag_example() {
        let r = Zmod::new(3, 10);
        let m = vec![
            vec![r.from_i64(3), r.from_i64(1)],
            vec![r.from_i64(0), r.from_i64(3)],
        ];
        let s = smith_reduce(&r, &m);
        // unit entry clears a pivot: invariants (0, 2)
        assert_eq!(s.invariants, vec![0, 2]);
        // transforms actually diagonalize
        let d = mat_mul(&r, &mat_mul(&r, &s.row_t, &m), &s.col_t);
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(r.is_zero(&d[i][j]));
                }
            }
        }
    }

    #[test]
    fn solve_and_kernel() {
        let r = Zmod::new(3, 8);
        // 3x + y = 5, 9y = 18 has the solution (1, 2)
        let mut aug = vec![
            vec![r.from_i64(3), r.from_i64(1), r.from_i64(5)],
            vec![r.from_i64(0), r.from_i64(9), r.from_i64(18)],
        ];
        let x = solve_chain(&r, &mut aug, 2).unwrap();
        let lhs0 = r.add(&r.mul(&r.from_i64(3), &x[0]), &x[1]);
        assert_eq!(lhs0, r.from_i64(5));
        let lhs1 = r.mul(&r.from_i64(9), &x[1]);
        assert_eq!(lhs1, r.from_i64(18));
        // and an inconsistent one is rejected
        let mut bad = vec![
            vec![r.from_i64(3), r.from_i64(1), r.from_i64(5)],
            vec![r.from_i64(0), r.from_i64(9), r.from_i64(9)],
        ];
        assert!(solve_chain(&r, &mut bad, 2).is_none());

        let m = vec![vec![r.from_i64(9), r.from_i64(0)]];
        let k = kernel_chain(&r, &m);
        // kernel contains (3^6, 0)-multiples and (0, 1)
        assert!(k.iter().any(|g| !r.is_zero(&g[1]) || !r.is_zero(&g[0])));
        for g in &k {
            let img = r.add(&r.mul(&m[0][0], &g[0]), &r.mul(&m[0][1], &g[1]));
            assert!(r.is_zero(&img));
        }
    }
}
