//! Incremental row echelon form over `F_p` and nullspace extraction.

use crate::qarith::Fp;

/// Rows kept in Montgomery form, each with its leading (pivot) entry equal to
/// one and zeros before it.
pub struct Echelon {
    f: Fp,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(f: Fp, ncols: usize) -> Self {
        Echelon {
            f,
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds a row of standard residues; returns whether the rank increased.
    pub fn insert(&mut self, row: &[u64]) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        let f = &self.f;
        let mut r: Vec<u64> = row.iter().map(|&x| f.to_mont(x)).collect();
        for c in 0..self.ncols {
            if r[c] == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(i) => {
                    let factor = r[c];
                    let pr = &self.rows[i];
                    for j in c..self.ncols {
                        if pr[j] != 0 {
                            r[j] = f.sub(r[j], f.mont_mul(factor, pr[j]));
                        }
                    }
                }
                None => {
                    let inv = f.mont_inv(r[c]).expect("nonzero pivot");
                    for x in r[c..].iter_mut() {
                        *x = f.mont_mul(*x, inv);
                    }
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push(r);
                    return true;
                }
            }
        }
        false
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    /// The nullspace basis vector attached to free column `fc` (entry one at
    /// `fc`, zero at every other free column); it is supported on columns
    /// `≤ fc`.  Standard residues.
    pub fn null_vector(&self, fc: usize) -> Vec<u64> {
        let f = &self.f;
        let mut v = vec![0u64; self.ncols];
        v[fc] = f.mont_one();
        for c in (0..fc).rev() {
            if let Some(i) = self.pivot_row[c] {
                let r = &self.rows[i];
                let mut s = 0u64;
                for j in c + 1..=fc {
                    if v[j] != 0 && r[j] != 0 {
                        s = f.add(s, f.mont_mul(r[j], v[j]));
                    }
                }
                v[c] = f.neg(s);
            }
        }
        v.iter().map(|&x| f.from_mont(x)).collect()
    }

    /// Full nullspace basis (one vector per free column).
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        self.free_columns().into_iter().map(|c| self.null_vector(c)).collect()
    }
}

/// `Σ a_i b_i` over standard residues.
pub fn dot(f: &Fp, a: &[u64], b: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| if x == 0 || y == 0 { acc } else { f.add(acc, f.mul(x, y)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_small_system() {
        let p = 1_000_000_007u64;
        let f = Fp::new(p);
        // x + 2y − z = 0, 2x + 4y − 2z = 0 (dependent), y + w = 0
        let rows = [vec![1, 2, p - 1, 0], vec![2, 4, p - 2, 0], vec![0, 1, 0, 1]];
        let mut e = Echelon::new(f, 4);
        let inc: Vec<bool> = rows.iter().map(|r| e.insert(r)).collect();
        assert_eq!(inc, vec![true, false, true]);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
        assert_eq!(e.free_columns(), vec![2, 3]);
        // vector for column 2 is supported on columns ≤ 2
        assert_eq!(ns[0][3], 0);
    }
}
