//! Permanents of small dense complex matrices.

use num_complex::Complex64;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }
}

/// Calls `visit` once for every permutation of `0..n` (Heap's algorithm).
/// The slice maps row index to column index.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Permanent by direct expansion over all n! permutations.
pub fn permanent_naive(m: &SquareMatrix) -> Complex64 {
    let n = m.dim();
    let mut total = Complex64::new(0.0, 0.0);
    for_each_permutation(n, |perm| {
        let mut term = Complex64::new(1.0, 0.0);
        for (row, &col) in perm.iter().enumerate() {
            term *= m.get(row, col);
        }
        total += term;
    });
    total
}

/// Ryser's inclusion–exclusion formula in the Nijenhuis–Wilf form,
/// perm(A) = (−1)ⁿ⁻¹·2·Σ_S (−1)^|S| Π_r (x_r + Σ_{c∈S} a_rc),
/// x_r = a_r,n−1 − ½Σ_c a_rc, with S running over subsets of the first n−1
/// columns in binary-reflected Gray-code order so each step toggles one
/// column and updates the row sums in O(n). Starting from the centred x_r
/// keeps the row sums small, which matters when the permanent nearly cancels.
pub fn permanent_ryser(m: &SquareMatrix) -> Complex64 {
    let n = m.dim();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    assert!(n < 64, "Ryser subset walk needs n < 64");
    let mut row_sums: Vec<Complex64> = (0..n)
        .map(|r| {
            let full: Complex64 = (0..n).map(|c| m.get(r, c)).sum();
            m.get(r, n - 1) - full * 0.5
        })
        .collect();
    let product = |sums: &[Complex64]| sums.iter().fold(Complex64::new(1.0, 0.0), |acc, s| acc * s);
    let mut total = product(&row_sums);
    let mut subset: u64 = 0;
    for step in 1..(1u64 << (n - 1)) {
        let col = step.trailing_zeros() as usize;
        let bit = 1u64 << col;
        subset ^= bit;
        if subset & bit != 0 {
            for (r, s) in row_sums.iter_mut().enumerate() {
                *s += m.get(r, col);
            }
        } else {
            for (r, s) in row_sums.iter_mut().enumerate() {
                *s -= m.get(r, col);
            }
        }
        if subset.count_ones() % 2 == 1 {
            total -= product(&row_sums);
        } else {
            total += product(&row_sums);
        }
    }
    if n.is_multiple_of(2) {
        -total * 2.0
    } else {
        total * 2.0
    }
}
