//! Linear systems `A z = b` over `Z/p^s`, solved by diagonalising `A` with
//! minimal-valuation pivots (Smith form over a local ring).

use crate::modular::{mod_inverse, valuation};

/// Solution set of `A z = b`: `particular + span(kernel)` with integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solve `a * z = b (mod p^s)` for a square or rectangular `a` given
/// row-major. Returns `None` when the system is inconsistent.
pub fn solve_mod_prime_power(a: &[Vec<u64>], b: &[u64], p: u64, s: u32) -> Option<SolutionSet> {
    let n_mod = p.pow(s);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x % n_mod).collect())
        .collect();
    let mut rhs: Vec<u64> = b.iter().map(|&x| x % n_mod).collect();
    // z = q * w
    let mut q: Vec<Vec<u64>> = (0..cols)
        .map(|i| (0..cols).map(|j| u64::from(i == j)).collect())
        .collect();

    let sub_mul = |x: u64, f: u64, y: u64| -> u64 {
        ((x as u128 + n_mod as u128 - (f as u128 * y as u128) % n_mod as u128) % n_mod as u128)
            as u64
    };

    let mut pivots: Vec<(u64, u32)> = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(k) {
            for (c, &x) in row.iter().enumerate().skip(k) {
                if x == 0 {
                    continue;
                }
                let v = valuation(x, p, s);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, r, c));
                }
            }
        }
        let Some((e, r, c)) = best else { break };
        m.swap(k, r);
        rhs.swap(k, r);
        for row in m.iter_mut() {
            row.swap(k, c);
        }
        for row in q.iter_mut() {
            row.swap(k, c);
        }
        let pe = p.pow(e);
        let unit = m[k][k] / pe;
        let unit_inv = mod_inverse(unit, n_mod).expect("pivot cofactor is a unit");
        for r in (k + 1)..rows {
            if m[r][k] == 0 {
                continue;
            }
            let f = ((m[r][k] / pe) as u128 * unit_inv as u128 % n_mod as u128) as u64;
            for c in k..cols {
                m[r][c] = sub_mul(m[r][c], f, m[k][c]);
            }
            rhs[r] = sub_mul(rhs[r], f, rhs[k]);
        }
        for c in (k + 1)..cols {
            if m[k][c] == 0 {
                continue;
            }
            let f = ((m[k][c] / pe) as u128 * unit_inv as u128 % n_mod as u128) as u64;
            for row in m.iter_mut() {
                row[c] = sub_mul(row[c], f, row[k]);
            }
            for row in q.iter_mut() {
                row[c] = sub_mul(row[c], f, row[k]);
            }
        }
        pivots.push((unit_inv, e));
    }

    let rank = pivots.len();
    if rhs.iter().skip(rank).any(|&x| x != 0) {
        return None;
    }
    let mut w = vec![0u64; cols];
    let mut kernel_w: Vec<Vec<u64>> = Vec::new();
    for (k, &(unit_inv, e)) in pivots.iter().enumerate() {
        if valuation(rhs[k], p, s) < e {
            return None;
        }
        let pe = p.pow(e);
        w[k] = ((rhs[k] / pe) as u128 * unit_inv as u128 % n_mod as u128) as u64;
        if e > 0 {
            let mut g = vec![0u64; cols];
            g[k] = p.pow(s - e);
            kernel_w.push(g);
        }
    }
    for k in rank..cols {
        let mut g = vec![0u64; cols];
        g[k] = 1;
        kernel_w.push(g);
    }

    let apply_q = |v: &[u64]| -> Vec<u64> {
        q.iter()
            .map(|row| {
                (row
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u128 * b as u128 % n_mod as u128)
                    .sum::<u128>()
                    % n_mod as u128) as u64
            })
            .collect()
    };
    Some(SolutionSet {
        particular: apply_q(&w),
        kernel: kernel_w.iter().map(|g| apply_q(g)).collect(),
    })
}
