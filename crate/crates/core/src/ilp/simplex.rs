//! Bounded dual simplex for the continuous relaxation.
//!
//! Rows are written as `a·x − s = 0` with a slack `s` bounded by the row's
//! range, so every column of the working matrix `[A | −I]` is either a
//! structural column or a negated unit vector. A basis is mostly slacks; only
//! the square "kernel" formed by basic structural columns and the rows whose
//! slacks left the basis needs a real factorization. It is factored densely and
//! updated with product-form eta vectors between refactorizations.

use std::time::Instant;

use super::lu::{DenseLu, Singular};
use super::{LinearProgram01, Sense};

pub(crate) const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const KERNEL_PIVOT_TOL: f64 = 1e-11;
const MAX_ETAS: usize = 64;
const STALL_LIMIT: usize = 300;
const OBJECTIVE_EVERY: usize = 8;
const NONE: u32 = u32::MAX;

/// Sparse constraint matrix in both orientations plus row ranges.
#[derive(Debug)]
pub(crate) struct LpMatrix {
    pub n: usize,
    pub m: usize,
    pub cost: Vec<f64>,
    col_start: Vec<usize>,
    col_row: Vec<u32>,
    col_val: Vec<f64>,
    row_start: Vec<usize>,
    row_col: Vec<u32>,
    row_val: Vec<f64>,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
}

impl LpMatrix {
    pub(crate) fn from_program(program: &LinearProgram01) -> Self {
        let n = program.num_vars();
        let m = program.constraints().len();
        let mut row_start = Vec::with_capacity(m + 1);
        let mut row_col = Vec::new();
        let mut row_val = Vec::new();
        let mut row_lo = Vec::with_capacity(m);
        let mut row_hi = Vec::with_capacity(m);
        let mut col_count = vec![0usize; n];
        row_start.push(0);
        for c in program.constraints() {
            for &(var, coef) in c.terms() {
                row_col.push(var as u32);
                row_val.push(coef);
                col_count[var] += 1;
            }
            row_start.push(row_col.len());
            let (lo, hi) = match c.sense {
                Sense::Le => (f64::NEG_INFINITY, c.rhs),
                Sense::Ge => (c.rhs, f64::INFINITY),
                Sense::Eq => (c.rhs, c.rhs),
            };
            row_lo.push(lo);
            row_hi.push(hi);
        }
        let mut col_start = Vec::with_capacity(n + 1);
        col_start.push(0);
        for count in &col_count {
            col_start.push(col_start.last().unwrap() + count);
        }
        let mut fill = col_start[..n].to_vec();
        let mut col_row = vec![0u32; row_col.len()];
        let mut col_val = vec![0.0; row_col.len()];
        for i in 0..m {
            for k in row_start[i]..row_start[i + 1] {
                let j = row_col[k] as usize;
                col_row[fill[j]] = i as u32;
                col_val[fill[j]] = row_val[k];
                fill[j] += 1;
            }
        }
        Self {
            n,
            m,
            cost: program.objective().to_vec(),
            col_start,
            col_row,
            col_val,
            row_start,
            row_col,
            row_val,
            row_lo,
            row_hi,
        }
    }

    #[inline]
    fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_start[j]..self.col_start[j + 1];
        self.col_row[range.clone()]
            .iter()
            .zip(&self.col_val[range])
            .map(|(&i, &v)| (i as usize, v))
    }

    fn row_len(&self, i: usize) -> usize {
        self.row_start[i + 1] - self.row_start[i]
    }

    #[inline]
    fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_start[i]..self.row_start[i + 1];
        self.row_col[range.clone()]
            .iter()
            .zip(&self.row_val[range])
            .map(|(&j, &v)| (j as usize, v))
    }
}

/// Compact basis description: the structural variables in the basis and, in
/// matching order, the rows whose slacks they replaced. All other slacks are
/// basic.
#[derive(Debug, Clone, Default)]
pub(crate) struct BasisSnapshot {
    pub basic_structural: Vec<u32>,
    pub replaced_rows: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    /// The dual bound reached the cutoff; the node cannot improve the incumbent.
    Cutoff,
    TimeLimit,
    /// Iteration limit or unrecoverable numerical trouble.
    Failed,
}

#[derive(Debug)]
pub(crate) struct LpResult {
    pub status: LpStatus,
    pub objective: f64,
    /// Structural values (meaningful for `Optimal`).
    pub x: Vec<f64>,
    pub basis: BasisSnapshot,
}

struct Eta {
    pos: usize,
    pivot: f64,
    entries: Vec<(u32, f64)>,
}

#[derive(Default)]
struct Factor {
    kernel_rows: Vec<usize>,
    kernel_pos: Vec<usize>,
    kernel_var: Vec<usize>,
    row_kernel: Vec<u32>,
    slack_pos: Vec<u32>,
    lu: DenseLu,
    dense: Vec<f64>,
    etas: Vec<Eta>,
    kvec: Vec<f64>,
    scratch: Vec<f64>,
}

pub(crate) struct DualSimplex<'a> {
    lp: &'a LpMatrix,
    lb: Vec<f64>,
    ub: Vec<f64>,
    head: Vec<usize>,
    pos: Vec<u32>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    d: Vec<f64>,
    factor: Factor,
    rows_buf: Vec<f64>,
    pos_buf: Vec<f64>,
    alpha: Vec<f64>,
    touched: Vec<usize>,
    marked: Vec<bool>,
    eligible: Vec<(u32, f64, f64)>,
    pub iterations: usize,
}

impl<'a> DualSimplex<'a> {
    pub(crate) fn new(lp: &'a LpMatrix) -> Self {
        let total = lp.n + lp.m;
        let mut lb = vec![0.0; total];
        let mut ub = vec![1.0; total];
        lb[lp.n..].copy_from_slice(&lp.row_lo);
        ub[lp.n..].copy_from_slice(&lp.row_hi);
        Self {
            lp,
            lb,
            ub,
            head: Vec::new(),
            pos: vec![NONE; total],
            at_upper: vec![false; total],
            x: vec![0.0; total],
            d: vec![0.0; total],
            factor: Factor::default(),
            rows_buf: vec![0.0; lp.m],
            pos_buf: vec![0.0; lp.m],
            alpha: vec![0.0; total],
            touched: Vec::new(),
            marked: vec![false; total],
            eligible: Vec::new(),
            iterations: 0,
        }
    }

    /// Solves the relaxation with structural bounds `lower`/`upper`, starting
    /// from `start`. Stops early once the dual bound reaches `cutoff`.
    pub(crate) fn solve(
        &mut self,
        lower: &[f64],
        upper: &[f64],
        start: &BasisSnapshot,
        cutoff: f64,
        deadline: Instant,
    ) -> LpResult {
        let n = self.lp.n;
        self.lb[..n].copy_from_slice(lower);
        self.ub[..n].copy_from_slice(upper);
        if self.install(start).is_err() && self.install(&BasisSnapshot::default()).is_err() {
            return self.result(LpStatus::Failed);
        }
        self.compute_duals();
        self.choose_nonbasic_bounds();
        self.compute_primal();
        let status = self.iterate(cutoff, deadline);
        self.result(status)
    }

    fn result(&self, status: LpStatus) -> LpResult {
        let n = self.lp.n;
        let x: Vec<f64> = (0..n).map(|j| self.x[j].clamp(self.lb[j], self.ub[j])).collect();
        let objective = self.lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        let mut basis = BasisSnapshot::default();
        basis.basic_structural.extend(self.head.iter().filter(|v| **v < n).map(|v| *v as u32));
        for i in 0..self.lp.m {
            if self.pos[n + i] == NONE {
                basis.replaced_rows.push(i as u32);
            }
        }
        LpResult {
            status,
            objective,
            x,
            basis,
        }
    }

    fn install(&mut self, start: &BasisSnapshot) -> Result<(), Singular> {
        let (n, m) = (self.lp.n, self.lp.m);
        self.head.clear();
        self.head.extend((0..m).map(|i| n + i));
        self.pos.fill(NONE);
        for i in 0..m {
            self.pos[n + i] = i as u32;
        }
        for (&var, &row) in start.basic_structural.iter().zip(&start.replaced_rows) {
            let (var, row) = (var as usize, row as usize);
            self.pos[n + row] = NONE;
            self.head[row] = var;
            self.pos[var] = row as u32;
        }
        self.refactor()
    }

    fn refactor(&mut self) -> Result<(), Singular> {
        let (n, m) = (self.lp.n, self.lp.m);
        let f = &mut self.factor;
        f.kernel_rows.clear();
        f.kernel_pos.clear();
        f.kernel_var.clear();
        f.row_kernel.clear();
        f.row_kernel.resize(m, NONE);
        f.slack_pos.clear();
        f.slack_pos.resize(m, NONE);
        f.etas.clear();
        for i in 0..m {
            if self.pos[n + i] == NONE {
                f.row_kernel[i] = f.kernel_rows.len() as u32;
                f.kernel_rows.push(i);
            } else {
                f.slack_pos[i] = self.pos[n + i];
            }
        }
        for (p, &var) in self.head.iter().enumerate() {
            if var < n {
                f.kernel_pos.push(p);
                f.kernel_var.push(var);
            }
        }
        let k = f.kernel_rows.len();
        debug_assert_eq!(k, f.kernel_var.len());
        let mut dense = std::mem::take(&mut f.dense);
        dense.clear();
        dense.resize(k * k, 0.0);
        for (c, &var) in f.kernel_var.iter().enumerate() {
            for (i, a) in self.lp.column(var) {
                let r = f.row_kernel[i];
                if r != NONE {
                    dense[r as usize * k + c] = a;
                }
            }
        }
        let (lu, dense) = DenseLu::factor(k, dense, KERNEL_PIVOT_TOL);
        f.dense = dense;
        f.lu = lu?;
        f.kvec.resize(k, 0.0);
        Ok(())
    }

    /// `out = B⁻¹ rhs`, with `rhs` indexed by row and `out` by basis position.
    fn ftran(&mut self, rhs: &[f64], out: &mut [f64]) {
        let f = &mut self.factor;
        let k = f.kernel_rows.len();
        for r in 0..k {
            f.kvec[r] = rhs[f.kernel_rows[r]];
        }
        f.lu.solve(&mut f.kvec, &mut f.scratch);
        for (i, &p) in f.slack_pos.iter().enumerate() {
            if p != NONE {
                out[p as usize] = -rhs[i];
            }
        }
        for c in 0..k {
            let u = f.kvec[c];
            out[f.kernel_pos[c]] = u;
            if u != 0.0 {
                for (i, a) in self.lp.column(f.kernel_var[c]) {
                    let p = f.slack_pos[i];
                    if p != NONE {
                        out[p as usize] += a * u;
                    }
                }
            }
        }
        for eta in &f.etas {
            let xp = out[eta.pos] / eta.pivot;
            out[eta.pos] = xp;
            if xp != 0.0 {
                for &(q, wq) in &eta.entries {
                    out[q as usize] -= wq * xp;
                }
            }
        }
    }

    /// `y = B⁻ᵀ e`, with `e` indexed by basis position (clobbered) and `y` by row.
    fn btran(&mut self, e: &mut [f64], y: &mut [f64]) {
        let f = &mut self.factor;
        for eta in f.etas.iter().rev() {
            let mut s = e[eta.pos];
            for &(q, wq) in &eta.entries {
                s -= wq * e[q as usize];
            }
            e[eta.pos] = s / eta.pivot;
        }
        for (i, &p) in f.slack_pos.iter().enumerate() {
            y[i] = if p != NONE { -e[p as usize] } else { 0.0 };
        }
        let k = f.kernel_rows.len();
        for c in 0..k {
            let mut s = e[f.kernel_pos[c]];
            for (i, a) in self.lp.column(f.kernel_var[c]) {
                if f.slack_pos[i] != NONE {
                    s -= a * y[i];
                }
            }
            f.kvec[c] = s;
        }
        f.lu.solve_transpose(&mut f.kvec, &mut f.scratch);
        for r in 0..k {
            y[f.kernel_rows[r]] = f.kvec[r];
        }
    }

    fn compute_duals(&mut self) {
        let (n, m) = (self.lp.n, self.lp.m);
        let mut cb = std::mem::take(&mut self.pos_buf);
        let mut y = std::mem::take(&mut self.rows_buf);
        for p in 0..m {
            let var = self.head[p];
            cb[p] = if var < n { self.lp.cost[var] } else { 0.0 };
        }
        self.btran(&mut cb, &mut y);
        for j in 0..n {
            self.d[j] = if self.pos[j] == NONE {
                self.lp.cost[j] - self.lp.column(j).map(|(i, a)| a * y[i]).sum::<f64>()
            } else {
                0.0
            };
        }
        for i in 0..m {
            self.d[n + i] = if self.pos[n + i] == NONE { y[i] } else { 0.0 };
        }
        self.pos_buf = cb;
        self.rows_buf = y;
    }

    fn choose_nonbasic_bounds(&mut self) {
        for j in 0..self.lp.n + self.lp.m {
            if self.pos[j] != NONE {
                continue;
            }
            let (lo, hi) = (self.lb[j], self.ub[j]);
            self.at_upper[j] = if lo == hi {
                false
            } else if lo.is_finite() && hi.is_finite() {
                self.d[j] < 0.0
            } else {
                !lo.is_finite()
            };
        }
    }

    /// Moves boxed nonbasic variables whose reduced cost has the wrong sign to
    /// the opposite bound. Returns whether anything moved.
    fn repair_dual_feasibility(&mut self) -> bool {
        let mut moved = false;
        for j in 0..self.lp.n + self.lp.m {
            if self.pos[j] != NONE || self.lb[j] == self.ub[j] {
                continue;
            }
            let boxed = self.lb[j].is_finite() && self.ub[j].is_finite();
            if !boxed {
                continue;
            }
            if !self.at_upper[j] && self.d[j] < -DUAL_TOL {
                self.at_upper[j] = true;
                moved = true;
            } else if self.at_upper[j] && self.d[j] > DUAL_TOL {
                self.at_upper[j] = false;
                moved = true;
            }
        }
        moved
    }

    fn compute_primal(&mut self) {
        let (n, m) = (self.lp.n, self.lp.m);
        let mut rhs = std::mem::take(&mut self.rows_buf);
        let mut out = std::mem::take(&mut self.pos_buf);
        rhs.fill(0.0);
        for j in 0..n + m {
            if self.pos[j] != NONE {
                continue;
            }
            let v = if self.at_upper[j] { self.ub[j] } else { self.lb[j] };
            self.x[j] = v;
            if v == 0.0 {
                continue;
            }
            if j < n {
                for (i, a) in self.lp.column(j) {
                    rhs[i] -= a * v;
                }
            } else {
                rhs[j - n] += v;
            }
        }
        self.ftran(&rhs, &mut out);
        for p in 0..m {
            self.x[self.head[p]] = out[p];
        }
        self.rows_buf = rhs;
        self.pos_buf = out;
    }

    fn dual_objective(&self) -> f64 {
        self.lp.cost.iter().zip(&self.x).map(|(c, v)| c * v).sum()
    }

    fn infeasibility(&self, var: usize) -> f64 {
        let v = self.x[var];
        if v < self.lb[var] - PRIMAL_TOL {
            self.lb[var] - v
        } else if v > self.ub[var] + PRIMAL_TOL {
            v - self.ub[var]
        } else {
            0.0
        }
    }

    fn select_leaving(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (p, &var) in self.head.iter().enumerate() {
            let infeas = self.infeasibility(var);
            if infeas <= 0.0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bp, bv)) => {
                    if bland {
                        var < self.head[bp]
                    } else {
                        infeas > bv || (infeas == bv && var < self.head[bp])
                    }
                }
            };
            if better {
                best = Some((p, infeas));
            }
        }
        best.map(|b| b.0)
    }

    /// Pivot row `alpha_j = (B⁻¹)_r · a_j` for every nonbasic `j`, listed in
    /// `touched`.
    fn compute_pivot_row(&mut self, r: usize) {
        let (n, m) = (self.lp.n, self.lp.m);
        for &j in &self.touched {
            self.alpha[j] = 0.0;
        }
        self.touched.clear();
        let mut e = std::mem::take(&mut self.pos_buf);
        let mut rho = std::mem::take(&mut self.rows_buf);
        e.fill(0.0);
        e[r] = 1.0;
        self.btran(&mut e, &mut rho);
        let work: usize = (0..m).filter(|&i| rho[i] != 0.0).map(|i| self.lp.row_len(i)).sum();
        if work * 4 > n {
            // Wide row: accumulate everything, then list nonbasics in order.
            for i in 0..m {
                let ri = rho[i];
                if ri != 0.0 {
                    for (j, a) in self.lp.row(i) {
                        self.alpha[j] += ri * a;
                    }
                    self.alpha[n + i] = -ri;
                }
            }
            for j in 0..n + m {
                if self.pos[j] == NONE && self.alpha[j] != 0.0 {
                    self.touched.push(j);
                } else {
                    self.alpha[j] = 0.0;
                }
            }
        } else {
            for i in 0..m {
                let ri = rho[i];
                if ri == 0.0 {
                    continue;
                }
                for (j, a) in self.lp.row(i) {
                    if self.pos[j] != NONE {
                        continue;
                    }
                    if !self.marked[j] {
                        self.marked[j] = true;
                        self.touched.push(j);
                    }
                    self.alpha[j] += ri * a;
                }
                let s = n + i;
                if self.pos[s] == NONE {
                    if !self.marked[s] {
                        self.marked[s] = true;
                        self.touched.push(s);
                    }
                    self.alpha[s] = -ri;
                }
            }
            for &j in &self.touched {
                self.marked[j] = false;
            }
        }
        self.pos_buf = e;
        self.rows_buf = rho;
    }

    /// Harris two-pass ratio test over the pivot row.
    fn ratio_test(&mut self, direction: f64, bland: bool) -> Option<usize> {
        let mut eligible = std::mem::take(&mut self.eligible);
        eligible.clear();
        let mut bound = f64::INFINITY;
        for &j in &self.touched {
            if self.lb[j] == self.ub[j] {
                continue;
            }
            let a = self.alpha[j];
            let s = if self.at_upper[j] { -1.0 } else { 1.0 };
            if s * a * direction < -PIVOT_TOL {
                let (dj, aj) = ((self.d[j] * s).max(0.0), a.abs());
                bound = bound.min((dj + DUAL_TOL) / aj);
                eligible.push((j as u32, dj, aj));
            }
        }
        let mut best: Option<(usize, f64)> = None;
        if bland {
            for &(j, dj, aj) in &eligible {
                let (j, ratio) = (j as usize, dj / aj);
                if best.is_none_or(|(bj, br)| ratio < br || (ratio == br && j < bj)) {
                    best = Some((j, ratio));
                }
            }
        } else {
            for &(j, dj, aj) in &eligible {
                let j = j as usize;
                if dj / aj <= bound && best.is_none_or(|(bj, ba)| aj > ba || (aj == ba && j < bj)) {
                    best = Some((j, aj));
                }
            }
        }
        self.eligible = eligible;
        best.map(|b| b.0)
    }

    fn iterate(&mut self, cutoff: f64, deadline: Instant) -> LpStatus {
        let (n, m) = (self.lp.n, self.lp.m);
        let limit = 20 * (n + m) + 10_000;
        let mut bland = false;
        let mut best_obj = f64::NEG_INFINITY;
        let mut stall = 0usize;
        let mut fresh = true;
        let mut verify_rounds = 0;
        let mut local_iters = 0usize;
        let mut w = vec![0.0; m];
        let mut col = vec![0.0; m];

        loop {
            if local_iters > limit {
                return LpStatus::Failed;
            }
            if local_iters.is_multiple_of(32) && Instant::now() >= deadline {
                return LpStatus::TimeLimit;
            }
            if self.factor.etas.len() >= MAX_ETAS {
                if self.refactor().is_err() {
                    return LpStatus::Failed;
                }
                self.compute_duals();
                self.repair_dual_feasibility();
                self.compute_primal();
                fresh = true;
            }

            if local_iters.is_multiple_of(OBJECTIVE_EVERY) {
                let obj = self.dual_objective();
                if obj >= cutoff {
                    return LpStatus::Cutoff;
                }
                if obj > best_obj + 1e-12 {
                    best_obj = obj;
                    stall = 0;
                } else {
                    stall += OBJECTIVE_EVERY;
                    if stall > STALL_LIMIT {
                        bland = true;
                    }
                }
            }

            let Some(r) = self.select_leaving(bland) else {
                if fresh {
                    return LpStatus::Optimal;
                }
                verify_rounds += 1;
                if verify_rounds > 5 {
                    return LpStatus::Optimal;
                }
                // Recompute values from the factors, then look again.
                if verify_rounds > 1 && self.refactor().is_err() {
                    return LpStatus::Failed;
                }
                self.compute_duals();
                self.repair_dual_feasibility();
                self.compute_primal();
                fresh = true;
                continue;
            };

            let leaving = self.head[r];
            let below = self.x[leaving] < self.lb[leaving];
            let direction = if below { 1.0 } else { -1.0 };
            let target = if below { self.lb[leaving] } else { self.ub[leaving] };
            self.compute_pivot_row(r);
            let Some(q) = self.ratio_test(direction, bland) else {
                if fresh {
                    return LpStatus::Infeasible;
                }
                if self.refactor().is_err() {
                    return LpStatus::Failed;
                }
                self.compute_duals();
                self.repair_dual_feasibility();
                self.compute_primal();
                fresh = true;
                continue;
            };

            col.fill(0.0);
            if q < n {
                for (i, a) in self.lp.column(q) {
                    col[i] = a;
                }
            } else {
                col[q - n] = -1.0;
            }
            self.ftran(&col, &mut w);
            let wr = w[r];
            let alpha_q = self.alpha[q];
            if (wr - alpha_q).abs() > 1e-7 * (1.0 + alpha_q.abs()) || wr.abs() < PIVOT_TOL {
                if fresh {
                    return LpStatus::Failed;
                }
                if self.refactor().is_err() {
                    return LpStatus::Failed;
                }
                self.compute_duals();
                self.repair_dual_feasibility();
                self.compute_primal();
                fresh = true;
                continue;
            }

            let step = (self.x[leaving] - target) / wr;
            for p in 0..m {
                let wp = w[p];
                if wp != 0.0 {
                    self.x[self.head[p]] -= wp * step;
                }
            }
            self.x[q] += step;
            self.x[leaving] = target;

            let theta = self.d[q] / alpha_q;
            for &j in &self.touched {
                if self.pos[j] == NONE {
                    self.d[j] -= theta * self.alpha[j];
                }
            }
            self.d[leaving] = -theta;
            self.d[q] = 0.0;

            self.head[r] = q;
            self.pos[q] = r as u32;
            self.pos[leaving] = NONE;
            self.at_upper[leaving] = !below;

            let entries = w
                .iter()
                .enumerate()
                .filter(|(p, v)| **v != 0.0 && *p != r)
                .map(|(p, v)| (p as u32, *v))
                .collect();
            self.factor.etas.push(Eta {
                pos: r,
                pivot: wr,
                entries,
            });

            fresh = false;
            self.iterations += 1;
            local_iters += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::Constraint;
    use std::time::Duration;

    fn relax(p: &LinearProgram01) -> LpResult {
        let lp = LpMatrix::from_program(p);
        let mut s = DualSimplex::new(&lp);
        let n = p.num_vars();
        s.solve(
            &vec![0.0; n],
            &vec![1.0; n],
            &BasisSnapshot::default(),
            f64::INFINITY,
            Instant::now() + Duration::from_secs(5),
        )
    }

    #[test]
    fn fractional_knapsack_relaxation() {
        // min 3a + 4b + 5c  s.t. 2a + 2b + 2c >= 3  -> a = 1, b = 0.5
        let p = LinearProgram01::with_constraints(
            vec![3.0, 4.0, 5.0],
            vec![Constraint::new([(0, 2.0), (1, 2.0), (2, 2.0)], Sense::Ge, 3.0)],
        )
        .unwrap();
        let r = relax(&p);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 5.0).abs() < 1e-9, "{}", r.objective);
        assert!((r.x[0] - 1.0).abs() < 1e-9 && (r.x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn infeasible_relaxation() {
        let p = LinearProgram01::with_constraints(
            vec![1.0, 1.0],
            vec![Constraint::new([(0, 1.0), (1, 1.0)], Sense::Ge, 2.5)],
        )
        .unwrap();
        assert_eq!(relax(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_and_negative_costs() {
        // min -a - 2b + c  s.t. a + b + c = 1.5, a - c <= 0
        let p = LinearProgram01::with_constraints(
            vec![-1.0, -2.0, 1.0],
            vec![
                Constraint::new([(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Eq, 1.5),
                Constraint::new([(0, 1.0), (2, -1.0)], Sense::Le, 0.0),
            ],
        )
        .unwrap();
        let r = relax(&p);
        assert_eq!(r.status, LpStatus::Optimal);
        // b = 1, a = c = 0.25 -> -0.25 - 2 + 0.25 = -2
        assert!((r.objective + 2.0).abs() < 1e-9, "{}", r.objective);
    }
}
