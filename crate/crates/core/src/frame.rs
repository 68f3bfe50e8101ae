//! Low density frames: `(d_v, d_c)`-regular binary measurement matrices
//! stored as a sparse bipartite graph.
//!
//! An `N x M` frame has `d_c` ones per row (check) and `d_v` ones per column
//! (variable), so `M d_v = N d_c`. Both adjacency directions are kept, plus
//! a slot-level cross index so message arrays can be addressed in O(1) from
//! either side.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Parameters of a regular frame. `n_checks` is the number of measurements
/// (rows), `n_vars` the signal dimension (columns).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameParams {
    pub n_checks: usize,
    pub n_vars: usize,
    pub d_v: usize,
    pub d_c: usize,
    pub seed: u64,
}

impl FrameParams {
    pub fn new(n_checks: usize, n_vars: usize, d_v: usize, d_c: usize, seed: u64) -> Result<Self> {
        let p = FrameParams {
            n_checks,
            n_vars,
            d_v,
            d_c,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_checks == 0 || self.n_vars == 0 || self.d_v == 0 || self.d_c == 0 {
            return Err(Error::InfeasibleParams(
                "all of N, M, d_v, d_c must be positive".into(),
            ));
        }
        if self.n_vars * self.d_v != self.n_checks * self.d_c {
            return Err(Error::InfeasibleParams(format!(
                "edge count mismatch: M*d_v = {} but N*d_c = {}",
                self.n_vars * self.d_v,
                self.n_checks * self.d_c
            )));
        }
        if self.d_v >= self.n_checks {
            return Err(Error::InfeasibleParams(format!(
                "column weight d_v = {} must be below N = {}",
                self.d_v, self.n_checks
            )));
        }
        if self.d_c > self.n_vars {
            return Err(Error::InfeasibleParams(format!(
                "row weight d_c = {} exceeds M = {}",
                self.d_c, self.n_vars
            )));
        }
        Ok(())
    }

    pub fn n_edges(&self) -> usize {
        self.n_vars * self.d_v
    }

    /// Frame redundancy `r = M/N = d_c/d_v`.
    pub fn redundancy(&self) -> f64 {
        self.n_vars as f64 / self.n_checks as f64
    }
}

/// Construction metadata. `four_cycle_forced` is set when progressive edge
/// growth had to close a cycle of length 4 because nothing farther was
/// available; short cycles are tolerated rather than fatal.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrameMeta {
    pub four_cycle_forced: bool,
}

/// A `(d_v, d_c)`-regular binary frame.
///
/// Row and column adjacency lists are sorted ascending and stored flat with
/// fixed strides `d_c` and `d_v`. The two cross-index arrays map a slot on
/// one side to the matching slot on the other side, which is how per-edge
/// message arrays are addressed during decoding.
#[derive(Debug, Clone)]
pub struct LowDensityFrame {
    params: FrameParams,
    /// Variable indices of check `i` at `[i*d_c, (i+1)*d_c)`, ascending.
    check_adj: Vec<u32>,
    /// Check indices of variable `j` at `[j*d_v, (j+1)*d_v)`, ascending.
    var_adj: Vec<u32>,
    /// Check-slot position -> var-slot position of the same edge.
    check_to_var_slot: Vec<u32>,
    /// Var-slot position -> check-slot position of the same edge.
    var_to_check_slot: Vec<u32>,
    meta: FrameMeta,
}

impl PartialEq for LowDensityFrame {
    /// Structural equality: same parameters and same support. The derived
    /// index arrays and construction metadata are excluded.
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.check_adj == other.check_adj
    }
}

impl LowDensityFrame {
    /// Build a frame from per-check variable lists. Lists are sorted
    /// internally; exact row/column weights and the absence of repeated
    /// entries are enforced.
    pub fn from_adjacency(params: FrameParams, rows: Vec<Vec<u32>>) -> Result<Self> {
        params.validate()?;
        if rows.len() != params.n_checks {
            return Err(Error::WeightViolation(format!(
                "expected {} check rows, got {}",
                params.n_checks,
                rows.len()
            )));
        }
        let mut check_adj = Vec::with_capacity(params.n_checks * params.d_c);
        let mut col_weight = vec![0usize; params.n_vars];
        for (i, mut row) in rows.into_iter().enumerate() {
            if row.len() != params.d_c {
                return Err(Error::WeightViolation(format!(
                    "check {} has weight {}, expected d_c = {}",
                    i,
                    row.len(),
                    params.d_c
                )));
            }
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::WeightViolation(format!(
                        "check {} references variable {} twice",
                        i, w[0]
                    )));
                }
            }
            for &j in &row {
                if j as usize >= params.n_vars {
                    return Err(Error::WeightViolation(format!(
                        "variable index {} out of range in check {} (M = {})",
                        j, i, params.n_vars
                    )));
                }
                col_weight[j as usize] += 1;
            }
            check_adj.extend_from_slice(&row);
        }
        for (j, &w) in col_weight.iter().enumerate() {
            if w != params.d_v {
                return Err(Error::WeightViolation(format!(
                    "variable {} has weight {}, expected d_v = {}",
                    j, w, params.d_v
                )));
            }
        }
        Ok(Self::assemble(params, check_adj, FrameMeta::default()))
    }

    /// Builds the column adjacency and the slot cross index from a validated
    /// flat row adjacency.
    fn assemble(params: FrameParams, check_adj: Vec<u32>, meta: FrameMeta) -> Self {
        let (n, m, dv, dc) = (params.n_checks, params.n_vars, params.d_v, params.d_c);
        let mut var_adj = vec![0u32; m * dv];
        let mut var_fill = vec![0usize; m];
        // check_adj rows are ascending, so scanning checks in order appends
        // each variable's checks in ascending order as well.
        for i in 0..n {
            for s in 0..dc {
                let j = check_adj[i * dc + s] as usize;
                var_adj[j * dv + var_fill[j]] = i as u32;
                var_fill[j] += 1;
            }
        }
        let mut check_to_var_slot = vec![0u32; n * dc];
        let mut var_to_check_slot = vec![0u32; m * dv];
        let mut var_cursor = vec![0usize; m];
        for i in 0..n {
            for s in 0..dc {
                let j = check_adj[i * dc + s] as usize;
                let t = var_cursor[j];
                var_cursor[j] += 1;
                check_to_var_slot[i * dc + s] = (j * dv + t) as u32;
                var_to_check_slot[j * dv + t] = (i * dc + s) as u32;
            }
        }
        LowDensityFrame {
            params,
            check_adj,
            var_adj,
            check_to_var_slot,
            var_to_check_slot,
            meta,
        }
    }

    pub fn params(&self) -> &FrameParams {
        &self.params
    }

    pub fn meta(&self) -> &FrameMeta {
        &self.meta
    }

    pub fn n_checks(&self) -> usize {
        self.params.n_checks
    }

    pub fn n_vars(&self) -> usize {
        self.params.n_vars
    }

    pub fn d_v(&self) -> usize {
        self.params.d_v
    }

    pub fn d_c(&self) -> usize {
        self.params.d_c
    }

    pub fn n_edges(&self) -> usize {
        self.params.n_edges()
    }

    /// Variables of check `i`, ascending.
    #[inline]
    pub fn check_vars(&self, i: usize) -> &[u32] {
        &self.check_adj[i * self.params.d_c..(i + 1) * self.params.d_c]
    }

    /// Checks of variable `j`, ascending.
    #[inline]
    pub fn var_checks(&self, j: usize) -> &[u32] {
        &self.var_adj[j * self.params.d_v..(j + 1) * self.params.d_v]
    }

    /// Var-slot position of the edge at check-slot position `pos`.
    #[inline]
    pub fn check_slot_to_var_slot(&self, pos: usize) -> usize {
        self.check_to_var_slot[pos] as usize
    }

    /// Check-slot position of the edge at var-slot position `pos`.
    #[inline]
    pub fn var_slot_to_check_slot(&self, pos: usize) -> usize {
        self.var_to_check_slot[pos] as usize
    }

    /// `out = F x`: each measurement is the plain sum of its variables.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.params.n_vars {
            return Err(Error::DimensionMismatch {
                expected: self.params.n_vars,
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.params.n_checks];
        self.matvec_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        let dc = self.params.d_c;
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &j in &self.check_adj[i * dc..(i + 1) * dc] {
                acc += x[j as usize];
            }
            *o = acc;
        }
    }

    /// `out = F^T r`: per-variable sum of its measurements.
    pub fn transpose_matvec(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.params.n_checks {
            return Err(Error::DimensionMismatch {
                expected: self.params.n_checks,
                got: r.len(),
            });
        }
        let mut out = vec![0.0; self.params.n_vars];
        self.transpose_matvec_into(r, &mut out);
        Ok(out)
    }

    pub(crate) fn transpose_matvec_into(&self, r: &[f64], out: &mut [f64]) {
        let dv = self.params.d_v;
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &i in &self.var_adj[j * dv..(j + 1) * dv] {
                acc += r[i as usize];
            }
            *o = acc;
        }
    }

    /// Recounts weights and measures the girth by BFS from every variable
    /// node. Diagnostic; never fails.
    pub fn validate(&self) -> ValidationReport {
        let (n, m, dv, dc) = (
            self.params.n_checks,
            self.params.n_vars,
            self.params.d_v,
            self.params.d_c,
        );
        let mut regular = self.check_adj.len() == n * dc && self.var_adj.len() == m * dv;
        if regular {
            // Adjacency transpose property and sortedness.
            'outer: for i in 0..n {
                let row = self.check_vars(i);
                for w in row.windows(2) {
                    if w[0] >= w[1] {
                        regular = false;
                        break 'outer;
                    }
                }
                for &j in row {
                    if !self.var_checks(j as usize).contains(&(i as u32)) {
                        regular = false;
                        break 'outer;
                    }
                }
            }
        }
        ValidationReport {
            regular,
            girth: self.girth(),
        }
    }

    /// Shortest cycle length, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let (n, m) = (self.params.n_checks, self.params.n_vars);
        // Nodes: variables are 0..m, checks are m..m+n.
        let total = m + n;
        let mut dist = vec![0u32; total];
        let mut parent = vec![u32::MAX; total];
        let mut stamp = vec![0u32; total];
        let mut queue = std::collections::VecDeque::new();
        let mut best: Option<usize> = None;
        for root in 0..m {
            let tag = root as u32 + 1;
            queue.clear();
            queue.push_back(root as u32);
            stamp[root] = tag;
            dist[root] = 0;
            parent[root] = u32::MAX;
            while let Some(u) = queue.pop_front() {
                let du = dist[u as usize];
                if let Some(b) = best {
                    // No shorter cycle can be found past half the best length.
                    if 2 * du as usize >= b {
                        continue;
                    }
                }
                let neighbors: &[u32];
                let offset;
                if (u as usize) < m {
                    neighbors = self.var_checks(u as usize);
                    offset = m as u32;
                } else {
                    neighbors = self.check_vars(u as usize - m);
                    offset = 0;
                }
                for &w in neighbors {
                    let w = w + offset;
                    if stamp[w as usize] != tag {
                        stamp[w as usize] = tag;
                        dist[w as usize] = du + 1;
                        parent[w as usize] = u;
                        queue.push_back(w);
                    } else if parent[u as usize] != w {
                        let cycle = (du + dist[w as usize] + 1) as usize;
                        if best.map_or(true, |b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    /// Text serialization: header `N M d_v d_c seed`, then one ascending
    /// index row per check.
    pub fn save(&self, sink: &mut impl Write) -> Result<()> {
        let p = &self.params;
        writeln!(
            sink,
            "{} {} {} {} {}",
            p.n_checks, p.n_vars, p.d_v, p.d_c, p.seed
        )?;
        for i in 0..p.n_checks {
            let row = self.check_vars(i);
            let mut line = String::with_capacity(row.len() * 6);
            for (k, j) in row.iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                line.push_str(&j.to_string());
            }
            writeln!(sink, "{line}")?;
        }
        Ok(())
    }

    pub fn load(source: impl BufRead) -> Result<Self> {
        let mut lines = source.lines();
        let header = lines
            .next()
            .ok_or(Error::ParseError {
                line: 1,
                msg: "missing header".into(),
            })??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::ParseError {
                line: 1,
                msg: format!("header needs 5 fields `N M d_v d_c seed`, got {}", fields.len()),
            });
        }
        let parse_usize = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| Error::ParseError {
                line: 1,
                msg: format!("bad {what}: {s:?}"),
            })
        };
        let n = parse_usize(fields[0], "N")?;
        let m = parse_usize(fields[1], "M")?;
        let d_v = parse_usize(fields[2], "d_v")?;
        let d_c = parse_usize(fields[3], "d_c")?;
        let seed = fields[4].parse::<u64>().map_err(|_| Error::ParseError {
            line: 1,
            msg: format!("bad seed: {:?}", fields[4]),
        })?;
        let params = FrameParams::new(n, m, d_v, d_c, seed)?;

        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line_no = i + 2;
            let line = lines
                .next()
                .ok_or(Error::ParseError {
                    line: line_no,
                    msg: "unexpected end of file".into(),
                })??;
            let mut row = Vec::with_capacity(d_c);
            for tok in line.split_whitespace() {
                let j: u32 = tok.parse().map_err(|_| Error::ParseError {
                    line: line_no,
                    msg: format!("bad index: {tok:?}"),
                })?;
                if j as usize >= m {
                    return Err(Error::ParseError {
                        line: line_no,
                        msg: format!("index {j} out of range (M = {m})"),
                    });
                }
                if let Some(&prev) = row.last() {
                    if j <= prev {
                        return Err(Error::ParseError {
                            line: line_no,
                            msg: format!("indices must be strictly ascending, saw {prev} then {j}"),
                        });
                    }
                }
                row.push(j);
            }
            if row.len() != d_c {
                return Err(Error::WeightViolation(format!(
                    "line {}: check {} has weight {}, expected d_c = {}",
                    line_no,
                    i,
                    row.len(),
                    d_c
                )));
            }
            rows.push(row);
        }
        for extra in lines {
            let extra = extra?;
            if !extra.trim().is_empty() {
                return Err(Error::ParseError {
                    line: n + 2,
                    msg: "trailing content after last check row".into(),
                });
            }
        }
        Self::from_adjacency(params, rows)
    }
}

/// Result of [`LowDensityFrame::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    pub regular: bool,
    /// Minimum cycle length; `None` when the graph is a forest.
    pub girth: Option<usize>,
}

/// Progressive edge growth construction.
///
/// Each variable receives its `d_v` edges one at a time. Every edge goes to
/// the check at maximal BFS depth from the variable's current subtree
/// (unreachable counts as infinitely deep), breaking ties by lowest current
/// check degree and then lowest check index. Checks that are full or already
/// adjacent to the variable are never candidates, so the result is exactly
/// regular with no repeated entries.
///
/// If at some point only depth-3 checks are available, the edge closes a
/// 4-cycle; this is recorded in the frame metadata instead of failing.
/// Should a variable ever find no candidate at all, construction restarts
/// with a seed-derived shuffle of the variable order.
pub fn build_peg_frame(params: FrameParams) -> Result<LowDensityFrame> {
    params.validate()?;
    const MAX_ATTEMPTS: u32 = 32;
    for attempt in 0..MAX_ATTEMPTS {
        if let Some(frame) = peg_attempt(params, attempt) {
            return Ok(frame);
        }
    }
    Err(Error::ConstructionFailed {
        attempts: MAX_ATTEMPTS,
    })
}

fn peg_attempt(params: FrameParams, attempt: u32) -> Option<LowDensityFrame> {
    let (n, m, dv, dc) = (params.n_checks, params.n_vars, params.d_v, params.d_c);
    let mut order: Vec<u32> = (0..m as u32).collect();
    if attempt > 0 {
        let seed = rng::mix(params.seed ^ rng::mix(attempt as u64));
        let mut shuffle_rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut shuffle_rng);
    }

    let mut var_lists: Vec<Vec<u32>> = vec![Vec::with_capacity(dv); m];
    let mut check_lists: Vec<Vec<u32>> = vec![Vec::with_capacity(dc); n];
    let mut four_cycle_forced = false;

    // BFS scratch with stamps so nothing is cleared between searches.
    let mut var_stamp = vec![0u32; m];
    let mut check_stamp = vec![0u32; n];
    let mut check_depth = vec![0u32; n];
    let mut frontier: Vec<u32> = Vec::new();
    let mut next_frontier: Vec<u32> = Vec::new();
    let mut tag = 0u32;

    const UNREACHED: u32 = u32::MAX;

    for &v in &order {
        let v = v as usize;
        for _edge in 0..dv {
            let have_edges = !var_lists[v].is_empty();
            if have_edges {
                // BFS from v through the current graph; depth of a check is
                // its first (odd) level.
                tag += 1;
                var_stamp[v] = tag;
                frontier.clear();
                frontier.push(v as u32);
                let mut dist = 1u32; // graph distance of the next check layer
                while !frontier.is_empty() {
                    next_frontier.clear();
                    for &u in &frontier {
                        for &c in &var_lists[u as usize] {
                            if check_stamp[c as usize] != tag {
                                check_stamp[c as usize] = tag;
                                check_depth[c as usize] = dist;
                                for &w in &check_lists[c as usize] {
                                    if var_stamp[w as usize] != tag {
                                        var_stamp[w as usize] = tag;
                                        next_frontier.push(w);
                                    }
                                }
                            }
                        }
                    }
                    std::mem::swap(&mut frontier, &mut next_frontier);
                    dist += 2;
                }
            }

            // Best candidate: deepest, then least loaded, then lowest index.
            let mut best: Option<(u32, usize, usize)> = None;
            for c in 0..n {
                let deg = check_lists[c].len();
                if deg >= dc {
                    continue;
                }
                let d = if have_edges && check_stamp[c] == tag {
                    check_depth[c]
                } else {
                    UNREACHED
                };
                if d == 1 {
                    continue; // already adjacent
                }
                let cand = (d, deg, c);
                let better = match best {
                    None => true,
                    Some(b) => cand.0 > b.0 || (cand.0 == b.0 && (cand.1, cand.2) < (b.1, b.2)),
                };
                if better {
                    best = Some(cand);
                }
            }
            let (depth, _, c) = best?;
            if depth == 3 {
                four_cycle_forced = true;
            }
            var_lists[v].push(c as u32);
            check_lists[c].push(v as u32);
        }
    }

    for row in &mut check_lists {
        row.sort_unstable();
    }
    let mut check_adj = Vec::with_capacity(n * dc);
    for row in &check_lists {
        debug_assert_eq!(row.len(), dc);
        check_adj.extend_from_slice(row);
    }
    Some(LowDensityFrame::assemble(
        params,
        check_adj,
        FrameMeta { four_cycle_forced },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn peg(n: usize, m: usize, dv: usize, dc: usize, seed: u64) -> LowDensityFrame {
        build_peg_frame(FrameParams::new(n, m, dv, dc, seed).unwrap()).unwrap()
    }

    /// Dense 0/1 matrix mirror for oracle checks.
    fn dense(frame: &LowDensityFrame) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; frame.n_vars()]; frame.n_checks()];
        for i in 0..frame.n_checks() {
            for &j in frame.check_vars(i) {
                a[i][j as usize] = 1.0;
            }
        }
        a
    }

    #[test]
    fn rejects_infeasible_params() {
        assert!(matches!(
            FrameParams::new(3, 7, 1, 2, 0),
            Err(Error::InfeasibleParams(_))
        ));
        assert!(matches!(
            FrameParams::new(2, 2, 2, 2, 0),
            Err(Error::InfeasibleParams(_))
        ));
        assert!(matches!(
            FrameParams::new(1, 2, 1, 2, 0),
            Err(Error::InfeasibleParams(_))
        ));
    }

    #[test]
    fn degree_one_frame_is_a_partition() {
        let f = peg(3, 6, 1, 2, 1);
        let rep = f.validate();
        assert!(rep.regular);
        assert_eq!(rep.girth, None);
        // each variable touches exactly one check, each check two variables
        for j in 0..6 {
            assert_eq!(f.var_checks(j).len(), 1);
        }
        for i in 0..3 {
            assert_eq!(f.check_vars(i).len(), 2);
        }
    }

    #[test]
    fn small_regular_frame_has_reasonable_girth() {
        let f = peg(5, 10, 3, 6, 7);
        let rep = f.validate();
        assert!(rep.regular);
        assert!(rep.girth.unwrap() >= 4);
    }

    #[test]
    fn midsize_peg_frame_avoids_four_cycles() {
        let f = peg(50, 100, 3, 6, 3);
        let rep = f.validate();
        assert!(rep.regular);
        assert!(rep.girth.unwrap() >= 6, "girth {:?}", rep.girth);
        assert!(!f.meta().four_cycle_forced);
    }

    #[test]
    fn large_peg_frame_girth_at_least_six() {
        let f = peg(500, 1000, 3, 6, 42);
        let rep = f.validate();
        assert!(rep.regular);
        assert!(rep.girth.unwrap() >= 6, "girth {:?}", rep.girth);
    }

    #[test]
    fn peg_is_deterministic() {
        let a = peg(50, 100, 3, 6, 9);
        let b = peg(50, 100, 3, 6, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn explicit_four_cycle_detected() {
        // two checks sharing two variables
        let params = FrameParams::new(4, 4, 2, 2, 0).unwrap();
        let rows = vec![vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3]];
        let f = LowDensityFrame::from_adjacency(params, rows).unwrap();
        assert_eq!(f.validate().girth, Some(4));
    }

    #[test]
    fn adjacency_transpose_property() {
        let f = peg(20, 40, 3, 6, 5);
        for j in 0..f.n_vars() {
            for &i in f.var_checks(j) {
                assert!(f.check_vars(i as usize).contains(&(j as u32)));
            }
        }
        for i in 0..f.n_checks() {
            for &j in f.check_vars(i) {
                assert!(f.var_checks(j as usize).contains(&(i as u32)));
            }
        }
        // slot cross-index is a bijection
        for pos in 0..f.n_edges() {
            assert_eq!(f.var_slot_to_check_slot(f.check_slot_to_var_slot(pos)), pos);
        }
    }

    #[test]
    fn matvec_matches_dense_oracle() {
        let mut r = ChaCha8Rng::seed_from_u64(77);
        for (n, m, dv, dc) in [(10, 20, 2, 4), (25, 50, 3, 6), (50, 100, 3, 6)] {
            let f = peg(n, m, dv, dc, r.gen());
            let a = dense(&f);
            let x: Vec<f64> = (0..m).map(|_| r.gen_range(-2.0..2.0)).collect();
            let y = f.matvec(&x).unwrap();
            for i in 0..n {
                let want: f64 = (0..m).map(|j| a[i][j] * x[j]).sum();
                assert_eq!(y[i], want);
            }
            let z: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
            let t = f.transpose_matvec(&z).unwrap();
            for j in 0..m {
                let want: f64 = (0..n).map(|i| a[i][j] * z[i]).sum();
                assert_eq!(t[j], want);
            }
        }
    }

    #[test]
    fn matvec_trivial_cases() {
        let f = peg(5, 10, 3, 6, 7);
        assert_eq!(f.matvec(&vec![0.0; 10]).unwrap(), vec![0.0; 5]);
        assert_eq!(f.transpose_matvec(&vec![0.0; 5]).unwrap(), vec![0.0; 10]);
        let mut x = vec![0.0; 10];
        let vars = f.check_vars(0).to_vec();
        x[vars[0] as usize] = 2.0;
        x[vars[1] as usize] = 3.0;
        assert_eq!(f.matvec(&x).unwrap()[0], 5.0);
        assert!(matches!(
            f.matvec(&vec![0.0; 9]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            f.transpose_matvec(&vec![0.0; 6]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transpose_matvec_counts_ones() {
        let f = peg(5, 10, 3, 6, 7);
        let ones = vec![1.0; 5];
        let t = f.transpose_matvec(&ones).unwrap();
        assert!(t.iter().all(|&v| v == 3.0));
    }

    #[test]
    fn save_load_round_trip() {
        let f = peg(5, 10, 3, 6, 7);
        let mut buf = Vec::new();
        f.save(&mut buf).unwrap();
        let g = LowDensityFrame::load(buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn load_accepts_minimal_example() {
        let text = "3 6 1 2 1\n0 1\n2 3\n4 5\n";
        let f = LowDensityFrame::load(text.as_bytes()).unwrap();
        assert_eq!(f.n_checks(), 3);
        assert_eq!(f.check_vars(1), &[2, 3]);
    }

    #[test]
    fn load_rejects_weight_violation() {
        // second check row has d_c - 1 entries
        let text = "3 6 1 2 1\n0 1\n2\n4 5\n";
        assert!(matches!(
            LowDensityFrame::load(text.as_bytes()),
            Err(Error::WeightViolation(_))
        ));
    }

    #[test]
    fn load_rejects_bad_input() {
        for text in [
            "",
            "3 6 1 2\n",
            "3 6 1 2 1\n0 1\n2 x\n4 5\n",
            "3 6 1 2 1\n0 1\n3 2\n4 5\n",
            "3 6 1 2 1\n0 1\n2 9\n4 5\n",
            "3 6 1 2 1\n0 1\n2 3\n",
            "3 6 1 2 1\n0 1\n2 3\n4 5\n0 1\n",
        ] {
            assert!(LowDensityFrame::load(text.as_bytes()).is_err(), "{text:?}");
        }
        // column weight violation: variable 0 appears twice, variable 2 never
        let text = "3 6 1 2 1\n0 1\n0 3\n4 5\n";
        assert!(matches!(
            LowDensityFrame::load(text.as_bytes()),
            Err(Error::WeightViolation(_))
        ));
    }
}
