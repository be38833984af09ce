//! Column reduction `R = D V` over any [`FieldOps`] context.

use std::collections::HashMap;

use crate::scalar::FieldOps;

pub(crate) type SparseVec<E> = Vec<(usize, E)>;

/// Result of reducing the columns of a matrix left to right.
pub(crate) struct Reduction<E> {
    /// lowest row index -> reduced column holding it as pivot
    pivots: HashMap<usize, usize>,
    reduced: Vec<SparseVec<E>>,
    /// `transforms[c]` expresses `reduced[c]` in the original columns.
    transforms: Option<Vec<SparseVec<E>>>,
}

impl<E: Clone> Reduction<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Combinations of the original columns that reduced to zero; a basis of
    /// the kernel when transforms are tracked.
    pub fn kernel(&self) -> Vec<SparseVec<E>> {
        let t = self.transforms.as_ref().expect("kernel needs tracked transforms");
        self.reduced
            .iter()
            .zip(t)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, v)| v.clone())
            .collect()
    }
}

/// `x <- x - factor * y` on sorted sparse vectors.
pub(crate) fn axpy<F: FieldOps>(field: &F, x: &SparseVec<F::Elem>, factor: &F::Elem, y: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            let v = field.sub(&field.zero(), &field.mul(factor, &y[j].1));
            if !field.is_zero(&v) {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = field.sub(&x[i].1, &field.mul(factor, &y[j].1));
            if !field.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn reduce<F: FieldOps>(field: &F, columns: Vec<SparseVec<F::Elem>>, track: bool) -> Reduction<F::Elem> {
    let mut pivots = HashMap::new();
    let mut reduced = Vec::with_capacity(columns.len());
    let mut transforms = track.then(|| Vec::with_capacity(columns.len()));
    for (c, mut col) in columns.into_iter().enumerate() {
        let mut combo: SparseVec<F::Elem> = if track { vec![(c, field.from_int(1))] } else { Vec::new() };
        while let Some((low, value)) = col.last().cloned() {
            let Some(&p) = pivots.get(&low) else {
                pivots.insert(low, c);
                break;
            };
            let pivot_col: &SparseVec<F::Elem> = &reduced[p];
            let lead = &pivot_col.last().expect("pivot columns are nonempty").1;
            let factor = field.mul(&value, &field.inv(lead));
            col = axpy(field, &col, &factor, pivot_col);
            if let Some(t) = transforms.as_ref() {
                let t: &Vec<SparseVec<F::Elem>> = t;
                combo = axpy(field, &combo, &factor, &t[p]);
            }
        }
        reduced.push(col);
        if let Some(t) = transforms.as_mut() {
            t.push(combo);
        }
    }
    Reduction {
        pivots,
        reduced,
        transforms,
    }
}

/// Solves `D x = target` given the reduction of `D`. Returns `None` when the
/// target is not in the column space.
pub(crate) fn solve<F: FieldOps>(field: &F, red: &Reduction<F::Elem>, target: SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
    let t = red.transforms.as_ref().expect("solving needs tracked transforms");
    let mut rest = target;
    let mut x: SparseVec<F::Elem> = Vec::new();
    while let Some((low, value)) = rest.last().cloned() {
        let &p = red.pivots.get(&low)?;
        let pivot_col = &red.reduced[p];
        let lead = &pivot_col.last().expect("pivot columns are nonempty").1;
        let factor = field.mul(&value, &field.inv(lead));
        rest = axpy(field, &rest, &factor, pivot_col);
        // x accumulates +factor * t[p]
        let neg = field.sub(&field.zero(), &factor);
        x = axpy(field, &x, &neg, &t[p]);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, PrimeField};
    use num_rational::Ratio;

    fn q(v: i64) -> Ratio<i64> {
        Ratio::from_integer(v)
    }

    #[test]
    fn rank_and_kernel_of_triangle_boundary() {
        // hollow triangle: edges 01, 02, 12 -> vertices 0, 1, 2
        let cols = vec![
            vec![(0, q(-1)), (1, q(1))],
            vec![(0, q(-1)), (2, q(1))],
            vec![(1, q(-1)), (2, q(1))],
        ];
        let f = Exact::<Ratio<i64>>::new();
        let red = reduce(&f, cols, true);
        assert_eq!(red.rank(), 2);
        let k = red.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![(0, q(1)), (1, q(-1)), (2, q(1))]);
    }

    #[test]
    fn solve_finds_preimage() {
        let f = Exact::<Ratio<i64>>::new();
        let cols = vec![vec![(0, q(2)), (1, q(1))], vec![(1, q(3))]];
        let red = reduce(&f, cols, true);
        let x = solve(&f, &red, vec![(0, q(4)), (1, q(8))]).unwrap();
        // 2*col0 + 2*col1 = (4, 8)
        assert_eq!(x, vec![(0, q(2)), (1, q(2))]);
        let red = reduce(&f, vec![vec![(0, q(1))]], true);
        assert!(solve(&f, &red, vec![(1, q(1))]).is_none());
    }

    #[test]
    fn modular_rank_drops_at_a_dividing_prime() {
        let cols = vec![vec![(0, 2u64), (1, 2)], vec![(0, 2), (1, 4)]];
        let f = PrimeField::new(2);
        let cols2: Vec<SparseVec<u64>> = cols
            .iter()
            .map(|c| c.iter().map(|&(r, x)| (r, x % 2)).filter(|&(_, x)| x != 0).collect())
            .collect();
        assert_eq!(reduce(&f, cols2, false).rank(), 0);
        let f = PrimeField::new(101);
        assert_eq!(reduce(&f, cols, false).rank(), 2);
    }
}
