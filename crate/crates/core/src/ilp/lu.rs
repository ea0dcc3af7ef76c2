//! LU factorization with partial pivoting, `P·A = L·U`.
//!
//! Elimination runs on a dense row-major copy, but only over the nonzeros of
//! each pivot row; the factors are then kept as sparse rows and columns so
//! that solves skip every zero of the right-hand side.

/// Compressed lists, list `k` being `idx/val[start[k]..start[k + 1]]`.
#[derive(Debug, Clone, Default)]
struct Lists {
    start: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl Lists {
    fn with_capacity(n: usize) -> Self {
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        Lists {
            start,
            ..Default::default()
        }
    }

    /// The same entries grouped by index instead of by list.
    fn transpose(&self, n: usize) -> Self {
        let mut start = vec![0usize; n + 1];
        for &i in &self.idx {
            start[i as usize + 1] += 1;
        }
        for k in 0..n {
            start[k + 1] += start[k];
        }
        let mut fill = start.clone();
        let mut idx = vec![0u32; self.idx.len()];
        let mut val = vec![0.0; self.val.len()];
        for k in 0..n {
            for (i, v) in self.get(k) {
                idx[fill[i]] = k as u32;
                val[fill[i]] = v;
                fill[i] += 1;
            }
        }
        Lists { start, idx, val }
    }

    #[inline]
    fn get(&self, k: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.start[k]..self.start[k + 1];
        self.idx[range.clone()].iter().zip(&self.val[range]).map(|(&i, &v)| (i as usize, v))
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct DenseLu {
    n: usize,
    diag: Vec<f64>,
    /// Strictly lower part of the unit-lower `L`, by column and by row.
    l_cols: Lists,
    l_rows: Lists,
    /// Strictly upper part of `U`, by column and by row.
    u_cols: Lists,
    u_rows: Lists,
    /// Row `i` of `P·A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Singular;

impl DenseLu {
    /// Factors the row-major `n × n` matrix `a`, handing back its storage.
    pub(crate) fn factor(n: usize, mut a: Vec<f64>, pivot_tol: f64) -> (Result<Self, Singular>, Vec<f64>) {
        let lu = Self::eliminate(n, &mut a, pivot_tol);
        (lu, a)
    }

    fn eliminate(n: usize, a: &mut [f64], pivot_tol: f64) -> Result<Self, Singular> {
        debug_assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut nonzeros: Vec<usize> = Vec::with_capacity(n);
        for k in 0..n {
            let mut best = k;
            let mut best_abs = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best_abs {
                    best = i;
                    best_abs = v;
                }
            }
            if best_abs <= pivot_tol {
                return Err(Singular);
            }
            if best != k {
                for j in 0..n {
                    a.swap(k * n + j, best * n + j);
                }
                perm.swap(k, best);
            }
            let pivot = a[k * n + k];
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            nonzeros.clear();
            nonzeros.extend((k + 1..n).filter(|&j| pivot_row[j] != 0.0));
            for i in 0..n - k - 1 {
                let row = &mut tail[i * n..(i + 1) * n];
                let factor = row[k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                row[k] = factor;
                for &j in &nonzeros {
                    row[j] -= factor * pivot_row[j];
                }
            }
        }
        let mut l_rows = Lists::with_capacity(n);
        let mut u_rows = Lists::with_capacity(n);
        for i in 0..n {
            let row = &a[i * n..(i + 1) * n];
            for (j, &v) in row.iter().enumerate() {
                if v == 0.0 || j == i {
                    continue;
                }
                let target = if j < i { &mut l_rows } else { &mut u_rows };
                target.idx.push(j as u32);
                target.val.push(v);
            }
            l_rows.start.push(l_rows.idx.len());
            u_rows.start.push(u_rows.idx.len());
        }
        Ok(Self {
            n,
            diag: (0..n).map(|k| a[k * n + k]).collect(),
            l_cols: l_rows.transpose(n),
            l_rows,
            u_cols: u_rows.transpose(n),
            u_rows,
            perm,
        })
    }

    /// Solves `A x = b` in place.
    pub(crate) fn solve(&self, b: &mut [f64], scratch: &mut Vec<f64>) {
        let n = self.n;
        scratch.clear();
        scratch.extend(self.perm.iter().map(|&p| b[p]));
        for j in 0..n {
            let x = scratch[j];
            if x != 0.0 {
                for (i, l) in self.l_cols.get(j) {
                    scratch[i] -= l * x;
                }
            }
        }
        for j in (0..n).rev() {
            let x = scratch[j] / self.diag[j];
            scratch[j] = x;
            if x != 0.0 {
                for (i, u) in self.u_cols.get(j) {
                    scratch[i] -= u * x;
                }
            }
        }
        b[..n].copy_from_slice(&scratch[..n]);
    }

    /// Solves `Aᵀ y = c` in place.
    pub(crate) fn solve_transpose(&self, c: &mut [f64], scratch: &mut Vec<f64>) {
        let n = self.n;
        scratch.clear();
        scratch.extend_from_slice(&c[..n]);
        // Uᵀ t = c
        for i in 0..n {
            let t = scratch[i] / self.diag[i];
            scratch[i] = t;
            if t != 0.0 {
                for (j, u) in self.u_rows.get(i) {
                    scratch[j] -= u * t;
                }
            }
        }
        // Lᵀ s = t
        for i in (0..n).rev() {
            let s = scratch[i];
            if s != 0.0 {
                for (j, l) in self.l_rows.get(i) {
                    scratch[j] -= l * s;
                }
            }
        }
        for (i, &p) in self.perm.iter().enumerate() {
            c[p] = scratch[i];
        }
    }
}
