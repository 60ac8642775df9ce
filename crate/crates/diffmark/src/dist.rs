//! Row-stochastic per-position token distributions.

use crate::error::{Error, Result};

/// Row sums further than this from 1 are rejected outright.
pub const ROW_SUM_REJECT_TOL: f64 = 1e-6;
/// Row sums within [`ROW_SUM_REJECT_TOL`] are renormalized to this tolerance.
pub const ROW_SUM_TOL: f64 = 1e-9;

/// An `L x V` table of per-position token distributions, as produced by one
/// diffusion step. Rows are validated and renormalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedDist {
    len: usize,
    vocab: usize,
    rows: Vec<f64>,
}

impl FactorizedDist {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let len = rows.len();
        if len == 0 {
            return Err(Error::config("factorized distribution needs >= 1 row"));
        }
        let vocab = rows[0].len();
        let mut flat = Vec::with_capacity(len * vocab);
        for row in &rows {
            if row.len() != vocab {
                return Err(Error::config("ragged rows in factorized distribution"));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(flat, len, vocab)
    }

    pub fn from_flat(mut rows: Vec<f64>, len: usize, vocab: usize) -> Result<Self> {
        if rows.len() != len * vocab || len == 0 || vocab == 0 {
            return Err(Error::config("bad factorized distribution dimensions"));
        }
        for t in 0..len {
            let row = &mut rows[t * vocab..(t + 1) * vocab];
            let mut sum = 0.0;
            for &x in row.iter() {
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::domain(format!(
                        "row {t} contains a negative or non-finite mass"
                    )));
                }
                sum += x;
            }
            if (sum - 1.0).abs() > ROW_SUM_REJECT_TOL {
                return Err(Error::domain(format!(
                    "row {t} sums to {sum}, outside 1 +/- {ROW_SUM_REJECT_TOL}"
                )));
            }
            for x in row.iter_mut() {
                *x /= sum;
            }
        }
        Ok(FactorizedDist { len, vocab, rows })
    }

    /// Point mass at `token` in every row (test/fixture helper).
    pub fn point_masses(tokens: &[usize], vocab: usize) -> Result<Self> {
        let mut rows = vec![0.0; tokens.len() * vocab];
        for (t, &tok) in tokens.iter().enumerate() {
            if tok >= vocab {
                return Err(Error::domain(format!("token {tok} outside vocab {vocab}")));
            }
            rows[t * vocab + tok] = 1.0;
        }
        FactorizedDist::from_flat(rows, tokens.len(), vocab)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn vocab(&self) -> usize {
        self.vocab
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.rows[t * self.vocab..(t + 1) * self.vocab]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.chunks_exact(self.vocab)
    }

    /// Replace row `t`. The new row must already be a valid distribution.
    pub fn set_row(&mut self, t: usize, row: &[f64]) -> Result<()> {
        if row.len() != self.vocab {
            return Err(Error::config("row length mismatch"));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_REJECT_TOL || row.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::domain("replacement row is not a distribution".to_string()));
        }
        self.rows[t * self.vocab..(t + 1) * self.vocab].copy_from_slice(row);
        Ok(())
    }
}

/// Indices of the `k` largest entries of `row`, ties broken by lower index.
/// `k >= row.len()` returns every index with positive mass ordering first.
pub fn top_k_indices(row: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..row.len()).collect();
    if k < row.len() {
        idx.select_nth_unstable_by(k, |&a, &b| {
            row[b].total_cmp(&row[a]).then(a.cmp(&b))
        });
        idx.truncate(k);
    }
    idx.sort_unstable_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    idx
}

/// Truncated view of a distribution row: the top-k indices with their raw
/// (not renormalized) masses. Truncation deliberately drops tail mass.
#[derive(Debug, Clone)]
pub struct TopKView {
    pub indices: Vec<usize>,
    pub masses: Vec<f64>,
}

impl TopKView {
    pub fn of(row: &[f64], k: Option<usize>) -> Self {
        match k {
            Some(k) if k < row.len() => {
                let indices = top_k_indices(row, k);
                let masses = indices.iter().map(|&i| row[i]).collect();
                TopKView { indices, masses }
            }
            _ => TopKView {
                indices: (0..row.len()).collect(),
                masses: row.to_vec(),
            },
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.masses.iter().copied())
    }
}

/// KL divergence between two distributions over the same support,
/// `sum_u q(u) log(q(u)/p(u))`. Infinite when q puts mass where p has none.
pub fn kl_divergence(q: &[f64], p: &[f64]) -> f64 {
    debug_assert_eq!(q.len(), p.len());
    let mut kl = 0.0;
    for (&qu, &pu) in q.iter().zip(p) {
        if qu > 0.0 {
            if pu <= 0.0 {
                return f64::INFINITY;
            }
            kl += qu * (qu / pu).ln();
        }
    }
    kl.max(0.0)
}

/// Shannon entropy in nats.
pub fn entropy(row: &[f64]) -> f64 {
    -row.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalizes_near_stochastic_rows() {
        let d = FactorizedDist::new(vec![vec![0.5 + 3e-7, 0.5]]).unwrap();
        let sum: f64 = d.row(0).iter().sum();
        assert!((sum - 1.0).abs() < ROW_SUM_TOL);
    }

    #[test]
    fn rejects_far_from_stochastic_rows() {
        assert!(FactorizedDist::new(vec![vec![0.7, 0.5]]).is_err());
        assert!(FactorizedDist::new(vec![vec![-0.1, 1.1]]).is_err());
        assert!(FactorizedDist::new(vec![vec![f64::NAN, 1.0]]).is_err());
    }

    #[test]
    fn top_k_orders_by_mass_then_index() {
        let row = [0.1, 0.4, 0.1, 0.4];
        assert_eq!(top_k_indices(&row, 2), vec![1, 3]);
        assert_eq!(top_k_indices(&row, 3), vec![1, 3, 0]);
        assert_eq!(top_k_indices(&row, 10), vec![1, 3, 0, 2]);
    }

    #[test]
    fn top_k_view_keeps_raw_masses() {
        let view = TopKView::of(&[0.6, 0.3, 0.1], Some(2));
        assert_eq!(view.indices, vec![0, 1]);
        let total: f64 = view.masses.iter().sum();
        assert!((total - 0.9).abs() < 1e-15);
    }

    #[test]
    fn kl_of_identical_rows_is_zero() {
        let p = [0.25, 0.75];
        assert_eq!(kl_divergence(&p, &p), 0.0);
    }

    #[test]
    fn kl_infinite_off_support() {
        assert_eq!(kl_divergence(&[1.0, 0.0], &[0.0, 1.0]), f64::INFINITY);
    }
}
