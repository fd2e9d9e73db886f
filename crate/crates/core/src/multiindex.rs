//! The triangular multi-index grid `{m_{i,j} : 2 <= i <= j <= n}` that drives
//! the closed-form decomposition of the Lauricella series, together with the
//! index-counting functions `M_l(k,n)` / `N_l(k,n)` and a graded enumerator.

use crate::error::{Error, Result};

/// Triangular array of summation indices `m_{i,j}`, `2 <= i <= j <= n`.
///
/// Cells are stored in lexicographic `(i, j)` order. For `n = 1` the grid is
/// empty. Any cell referenced outside the stored triangle reads as 0, which
/// makes the counting functions total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexGrid {
    n: usize,
    entries: Vec<u32>,
}

/// Number of stored cells for dimension `n`.
fn cell_count(n: usize) -> usize {
    n * (n - 1) / 2
}

impl MultiIndexGrid {
    /// The all-zero grid for dimension `n >= 1`.
    pub fn zero(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("grid dimension must be >= 1".into()));
        }
        Ok(MultiIndexGrid {
            n,
            entries: vec![0; cell_count(n)],
        })
    }

    /// Build a grid from entries listed in lexicographic `(i, j)` order,
    /// i.e. `m_{2,2}, m_{2,3}, ..., m_{2,n}, m_{3,3}, ..., m_{n,n}`.
    pub fn from_entries(n: usize, entries: Vec<u32>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("grid dimension must be >= 1".into()));
        }
        if entries.len() != cell_count(n) {
            return Err(Error::Parameter(format!(
                "dimension {} requires {} cells, got {}",
                n,
                cell_count(n),
                entries.len()
            )));
        }
        Ok(MultiIndexGrid { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Flat cell storage in lexicographic `(i, j)` order.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Position of cell `(i, j)` in the flat storage; caller guarantees the
    /// cell lies inside the triangle.
    fn index_of(&self, i: usize, j: usize) -> usize {
        // Rows 2..i-1 hold (n-r+1) cells each.
        let before: usize = (2..i).map(|r| self.n - r + 1).sum();
        before + (j - i)
    }

    /// Value of `m_{i,j}`; cells outside the triangle (`i < 2`, `i > j`, or
    /// `j > n`) read as 0.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        if i < 2 || j < i || j > self.n {
            0
        } else {
            self.entries[self.index_of(i, j)]
        }
    }

    /// Sum of all stored cells.
    pub fn total_degree(&self) -> u32 {
        self.entries.iter().sum()
    }
}

/// `M_l(k, n) = sum_{i=l}^{k} m_{i,k} + sum_{i=k+1}^{n} m_{k+1,i}`.
///
/// Out-of-triangle cells contribute 0. `k` must lie in `[1, n]`.
pub fn m_count(g: &MultiIndexGrid, l: usize, k: usize) -> Result<u32> {
    if k < 1 || k > g.n {
        return Err(Error::Domain(format!(
            "k = {k} outside [1, {}] in m_count",
            g.n
        )));
    }
    if l < 1 {
        return Err(Error::Domain("l must be >= 1 in m_count".into()));
    }
    let mut acc = 0u32;
    for i in l..=k {
        acc += g.entry(i, k);
    }
    for i in (k + 1)..=g.n {
        acc += g.entry(k + 1, i);
    }
    Ok(acc)
}

/// `N_l(k, n) = sum_{i=l}^{k+1} sum_{j=i}^{n} m_{i,j}`.
///
/// Out-of-triangle cells contribute 0. `k` must lie in `[1, n]`.
pub fn n_count(g: &MultiIndexGrid, l: usize, k: usize) -> Result<u32> {
    if k < 1 || k > g.n {
        return Err(Error::Domain(format!(
            "k = {k} outside [1, {}] in n_count",
            g.n
        )));
    }
    if l < 1 {
        return Err(Error::Domain("l must be >= 1 in n_count".into()));
    }
    let mut acc = 0u32;
    for i in l..=(k + 1) {
        for j in i..=g.n {
            acc += g.entry(i, j);
        }
    }
    Ok(acc)
}

/// Iterator over all grids of dimension `n` with total degree up to
/// `max_total_degree`, in nondecreasing total-degree order and, within each
/// degree, ascending lexicographic order of the flat cell vector.
pub struct GridEnumerator {
    n: usize,
    max_total_degree: u32,
    degree: u32,
    /// Next composition to yield, or `None` when the current degree level is
    /// exhausted (advance to the next degree) / the whole stream is done.
    state: Option<Vec<u32>>,
    done: bool,
}

impl GridEnumerator {
    fn first_of_degree(&self, d: u32) -> Option<Vec<u32>> {
        let t = cell_count(self.n);
        if t == 0 {
            // No cells: only the empty grid of degree 0 exists.
            return if d == 0 { Some(Vec::new()) } else { None };
        }
        let mut v = vec![0u32; t];
        v[t - 1] = d;
        Some(v)
    }
}

impl Iterator for GridEnumerator {
    type Item = MultiIndexGrid;

    fn next(&mut self) -> Option<MultiIndexGrid> {
        if self.done {
            return None;
        }
        loop {
            match self.state.take() {
                Some(current) => {
                    let grid = MultiIndexGrid {
                        n: self.n,
                        entries: current.clone(),
                    };
                    self.state = next_composition(current);
                    return Some(grid);
                }
                None => {
                    if self.degree >= self.max_total_degree {
                        self.done = true;
                        return None;
                    }
                    self.degree += 1;
                    self.state = self.first_of_degree(self.degree);
                    if self.state.is_none() {
                        // Zero-cell grids have no states beyond degree 0.
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

/// Lexicographic successor of a fixed-sum composition, or `None` at the last
/// one (all mass in the first cell).
fn next_composition(mut v: Vec<u32>) -> Option<Vec<u32>> {
    let t = v.len();
    if t <= 1 {
        return None;
    }
    // Rightmost position j < t-1 with positive suffix sum: move one unit of
    // that suffix onto v[j] and park the remainder in the last cell.
    let mut suffix: u32 = v[t - 1];
    for j in (0..t - 1).rev() {
        if suffix > 0 {
            v[j] += 1;
            let remainder = suffix - 1;
            for cell in v.iter_mut().skip(j + 1) {
                *cell = 0;
            }
            v[t - 1] = remainder;
            return Some(v);
        }
        suffix += v[j];
    }
    None
}

/// Enumerate every grid of dimension `n >= 1` with total degree at most
/// `max_total_degree`, graded by degree then lexicographic.
pub fn enumerate_grids(n: usize, max_total_degree: u32) -> Result<GridEnumerator> {
    if n < 1 {
        return Err(Error::Parameter("grid dimension must be >= 1".into()));
    }
    let mut it = GridEnumerator {
        n,
        max_total_degree,
        degree: 0,
        state: None,
        done: false,
    };
    it.state = it.first_of_degree(0);
    Ok(it)
}
