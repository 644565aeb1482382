//! Integral simplicial homology through Smith normal form.
//!
//! Boundary matrices are first reduced with unit pivots in `i128`; whatever
//! survives goes to a dense `BigInt` Smith normal form.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::{SimplicialComplex, Vertex};

/// Column-major sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// For each column, `(row, value)` pairs sorted by row with no zeros.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m.set(r, c, BigInt::from(v));
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }
}

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt, from_col: usize) {
        for c in from_col..self.cols {
            let s = &self.data[src * self.cols + c];
            if !s.is_zero() {
                let d = s * q;
                self.data[dst * self.cols + c] -= d;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt, from_row: usize) {
        for r in from_row..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let d = s * q;
                self.data[r * self.cols + dst] -= d;
            }
        }
    }
}

/// Nonzero diagonal of the Smith normal form: positive, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = a.get(r, c);
                if !v.is_zero() && best.map_or(true, |(br, bc)| v.abs() < a.get(br, bc).abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap_rows(t, br);
        a.swap_cols(t, bc);
        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if !a.get(r, t).is_zero() {
                    let q = a.get(r, t).div_floor(a.get(t, t));
                    a.row_axpy(r, t, &q, t);
                    if !a.get(r, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for c in t + 1..cols {
                if !a.get(t, c).is_zero() {
                    let q = a.get(t, c).div_floor(a.get(t, t));
                    a.col_axpy(c, t, &q, t);
                    if !a.get(t, c).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remainder of row t or column t to the pivot
                let mut best = (t, t);
                for r in t + 1..rows {
                    let v = a.get(r, t);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (r, t);
                    }
                }
                for c in t + 1..cols {
                    let v = a.get(t, c);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (t, c);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            let p = a.get(t, t).clone();
            let bad = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !a.get(r, c).is_multiple_of(&p)));
            match bad {
                Some(r) => {
                    let minus_one = -BigInt::one();
                    a.row_axpy(t, r, &minus_one, t);
                }
                None => break,
            }
        }
        factors.push(a.get(t, t).abs());
        t += 1;
    }
    SmithForm { invariant_factors: factors }
}

/// Rank and invariant factors of a sparse matrix: unit pivots first, then dense SNF.
pub fn sparse_invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut cols: Vec<Option<Vec<(usize, i128)>>> = m
        .columns
        .iter()
        .map(|c| Some(c.iter().map(|&(r, v)| (r, v as i128)).collect()))
        .collect();
    let mut row_index: Vec<HashSet<usize>> = vec![HashSet::new(); m.rows];
    for (c, col) in m.columns.iter().enumerate() {
        for &(r, _) in col {
            row_index[r].insert(c);
        }
    }
    let mut row_alive = vec![true; m.rows];
    let mut unit_rank = 0usize;

    'outer: loop {
        let mut progress = false;
        for c in 0..cols.len() {
            let Some(col) = cols[c].as_ref() else { continue };
            if col.is_empty() {
                cols[c] = None;
                continue;
            }
            let pivot = col
                .iter()
                .filter(|(_, v)| *v == 1 || *v == -1)
                .min_by_key(|(r, _)| (row_index[*r].len(), *r))
                .copied();
            let Some((r, p)) = pivot else { continue };
            let pivot_col = col.clone();
            let others: Vec<usize> = row_index[r].iter().copied().filter(|&o| o != c).collect();
            // compute every update before committing, so overflow leaves a consistent state
            let mut updates = Vec::with_capacity(others.len());
            for &o in &others {
                let target = cols[o].as_ref().unwrap();
                let a = target.iter().find(|(rr, _)| *rr == r).unwrap().1;
                let factor = a * p;
                match axpy_sorted(target, &pivot_col, factor) {
                    Some(new) => updates.push((o, new)),
                    // overflow: the dense phase takes over from here
                    None => break 'outer,
                }
            }
            for (o, new) in updates {
                for &(rr, _) in cols[o].as_ref().unwrap() {
                    row_index[rr].remove(&o);
                }
                for &(rr, _) in &new {
                    row_index[rr].insert(o);
                }
                cols[o] = Some(new);
            }
            for &(rr, _) in &pivot_col {
                row_index[rr].remove(&c);
            }
            cols[c] = None;
            row_alive[r] = false;
            unit_rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| row_alive[r] && !row_index[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| cols[c].as_ref().map_or(false, |v| !v.is_empty())).collect();
    let mut factors = vec![BigInt::one(); unit_rank];
    if !live_cols.is_empty() {
        let row_pos: HashMap<usize, usize> = live_rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let mut dense = IntegerMatrix::zeros(live_rows.len(), live_cols.len());
        for (j, &c) in live_cols.iter().enumerate() {
            for &(r, v) in cols[c].as_ref().unwrap() {
                dense.set(row_pos[&r], j, BigInt::from(v));
            }
        }
        factors.extend(smith_normal_form(&dense).invariant_factors);
    }
    factors.sort();
    factors
}

/// `target - factor * pivot` over sorted sparse vectors; `None` on overflow.
fn axpy_sorted(target: &[(usize, i128)], pivot: &[(usize, i128)], factor: i128) -> Option<Vec<(usize, i128)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let pj = pivot.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ti < pj {
            out.push(target[i]);
            i += 1;
        } else if pj < ti {
            let v = factor.checked_mul(pivot[j].1)?.checked_neg()?;
            out.push((pj, v));
            j += 1;
        } else {
            let v = target[i].1.checked_sub(factor.checked_mul(pivot[j].1)?)?;
            if v != 0 {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Boundary from `upper` (d-simplices) to `lower` ((d-1)-simplices), with
/// sign `(-1)^i` for dropping the `i`-th vertex in ascending order.
pub fn boundary_matrix(lower: &[Vec<Vertex>], upper: &[Vec<Vertex>]) -> SparseMatrix {
    let index: HashMap<&[Vertex], usize> = lower.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut columns = Vec::with_capacity(upper.len());
    for s in upper {
        let mut col = Vec::with_capacity(s.len());
        for i in 0..s.len() {
            let face: Vec<Vertex> = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            let r = *index.get(face.as_slice()).expect("boundary face missing from lower cells");
            col.push((r, if i % 2 == 0 { 1 } else { -1 }));
        }
        col.sort();
        columns.push(col);
    }
    SparseMatrix { rows: lower.len(), cols: upper.len(), columns }
}

/// Simplices of a complex graded by dimension, each sorted lexicographically.
pub fn graded_cells(k: &SimplicialComplex) -> Vec<Vec<Vec<Vertex>>> {
    let mut cells = vec![Vec::new(); 3];
    for s in k.simplices() {
        cells[s.dim()].push(s.vertices().to_vec());
    }
    cells
}

/// `(d1, d2)`: edges to vertices and triangles to edges.
pub fn boundary_matrices(k: &SimplicialComplex) -> (SparseMatrix, SparseMatrix) {
    let cells = graded_cells(k);
    (boundary_matrix(&cells[0], &cells[1]), boundary_matrix(&cells[1], &cells[2]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    /// Torsion coefficients of `H_d` (factors greater than one).
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologySummary {
    pub fn is_trivial_reduced(&self) -> bool {
        self.betti.first() == Some(&1)
            && self.betti.iter().skip(1).all(|b| *b == 0)
            && self.torsion.iter().all(|t| t.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(d, b)| if d % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.betti.iter().map(|x| x.to_string()).collect();
        write!(f, "betti ({})", b.join(", "))?;
        for (d, t) in self.torsion.iter().enumerate() {
            if !t.is_empty() {
                let ts: Vec<String> = t.iter().map(|x| format!("Z/{x}")).collect();
                write!(f, "; torsion H{d}: {}", ts.join(" + "))?;
            }
        }
        Ok(())
    }
}

/// Homology of any finite simplicial complex given as graded sorted cells.
/// `cells[d]` lists the `d`-simplices; every face must appear one level down.
pub fn graded_homology(cells: &[Vec<Vec<Vertex>>]) -> HomologySummary {
    let top = cells.len();
    let len = top.max(3);
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); len + 1];
    for d in 1..top {
        if !cells[d].is_empty() {
            factors[d] = sparse_invariant_factors(&boundary_matrix(&cells[d - 1], &cells[d]));
        }
    }
    let mut betti = vec![0; len];
    let mut torsion = vec![Vec::new(); len];
    for d in 0..len {
        let n = cells.get(d).map_or(0, |c| c.len());
        let rank_d = factors[d].len();
        let rank_up = factors[d + 1].len();
        betti[d] = n - rank_d - rank_up;
        torsion[d] = factors[d + 1].iter().filter(|f| !f.is_one()).cloned().collect();
    }
    HomologySummary { betti, torsion }
}

pub fn homology(k: &SimplicialComplex) -> HomologySummary {
    let h = graded_homology(&graded_cells(k));
    debug_assert_eq!(h.euler_characteristic(), k.euler_characteristic());
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists([
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ])
        .unwrap()
    }

    #[test]
    fn snf_small() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let f: Vec<i64> = smith_normal_form(&m).invariant_factors.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(f, vec![2, 6, 12]);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let f: Vec<i64> = smith_normal_form(&m).invariant_factors.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(f, vec![1, 6]);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        let h = homology(&rp2());
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion[1], vec![BigInt::from(2)]);
    }

    #[test]
    fn sphere_boundary_of_tetrahedron() {
        let k = SimplicialComplex::from_vertex_lists([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        let h = homology(&k);
        assert_eq!(h.betti, vec![1, 0, 1]);
        assert!(h.torsion.iter().all(|t| t.is_empty()));
    }

    #[test]
    fn graded_handles_dimension_three() {
        let cells = vec![
            vec![vec![0], vec![1], vec![2], vec![3]],
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            vec![vec![0, 1, 2, 3]],
        ];
        let h = graded_homology(&cells);
        assert_eq!(h.betti, vec![1, 0, 0, 0]);
    }
}
