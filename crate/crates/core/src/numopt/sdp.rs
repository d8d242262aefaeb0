//! Primal-dual interior-point method for small dense block SDPs.
//!
//! Primal: `min <C, X>` subject to `<A_k, X> = b_k`, `X ⪰ 0`.
//! Dual:   `max b·y` subject to `Z = C - Σ y_k A_k ⪰ 0`.
//!
//! `X` is block diagonal: a list of dense PSD blocks followed by one
//! nonnegative diagonal block. Search directions are HKM with a Mehrotra
//! predictor-corrector step.

use nalgebra::{Cholesky, DMatrix, DVector};

/// One nonzero of a constraint matrix. Off-diagonal entries of the
/// symmetric `A_k` are stored once and mirrored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entry {
    /// `A_k[r, c] = A_k[c, r] = value` inside PSD block `block`.
    Psd { block: usize, r: usize, c: usize, value: f64 },
    /// Coefficient of component `j` of the nonnegative block.
    Lp { j: usize, value: f64 },
}

#[derive(Debug, Clone, Default)]
pub struct BlockSdp {
    pub psd_dims: Vec<usize>,
    pub lp_dim: usize,
    /// Objective restricted to the nonnegative block; PSD blocks carry `C = 0`.
    pub c_lp: Vec<f64>,
    pub rows: Vec<Vec<Entry>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SdpPoint {
    pub x_psd: Vec<DMatrix<f64>>,
    pub x_lp: DVector<f64>,
    pub y: DVector<f64>,
    pub z_psd: Vec<DMatrix<f64>>,
    pub z_lp: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct SdpResult {
    pub point: SdpPoint,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SdpOptions {
    pub max_iterations: usize,
    /// Target for relative gap and relative infeasibilities.
    pub accuracy: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { max_iterations: 120, accuracy: 1e-10 }
    }
}

impl BlockSdp {
    fn apply(&self, k: usize, psd: &[DMatrix<f64>], lp: &DVector<f64>) -> f64 {
        self.rows[k]
            .iter()
            .map(|e| match *e {
                Entry::Psd { block, r, c, value } => {
                    let m = &psd[block];
                    if r == c {
                        value * m[(r, r)]
                    } else {
                        value * (m[(r, c)] + m[(c, r)])
                    }
                }
                Entry::Lp { j, value } => value * lp[j],
            })
            .sum()
    }

    /// `C - Σ y_k A_k`.
    fn dual_slack(&self, y: &DVector<f64>) -> (Vec<DMatrix<f64>>, DVector<f64>) {
        let mut psd: Vec<DMatrix<f64>> =
            self.psd_dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        let mut lp = DVector::from_vec(self.c_lp.clone());
        for (k, row) in self.rows.iter().enumerate() {
            for e in row {
                match *e {
                    Entry::Psd { block, r, c, value } => {
                        psd[block][(r, c)] -= y[k] * value;
                        if r != c {
                            psd[block][(c, r)] -= y[k] * value;
                        }
                    }
                    Entry::Lp { j, value } => lp[j] -= y[k] * value,
                }
            }
        }
        (psd, lp)
    }

    fn nu(&self) -> f64 {
        (self.psd_dims.iter().sum::<usize>() + self.lp_dim) as f64
    }
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn inverse_spd(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    Cholesky::new(sym(m)).map(|c| c.inverse())
}

/// Largest `α ≤ 1` keeping `X + α ΔX ⪰ 0`, for `X ≻ 0`.
fn max_step_psd(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> f64 {
    let Some(chol) = Cholesky::new(sym(x)) else {
        return 0.0;
    };
    let l = chol.l();
    let linv = l.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(l.nrows(), l.ncols()));
    let m = sym(&(&linv * dx * linv.transpose()));
    let min = m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    if min >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / min
    }
}

fn max_step_lp(x: &DVector<f64>, dx: &DVector<f64>) -> f64 {
    x.iter()
        .zip(dx.iter())
        .filter(|(_, d)| **d < 0.0)
        .map(|(v, d)| -v / d)
        .fold(f64::INFINITY, f64::min)
}

struct Direction {
    dx_psd: Vec<DMatrix<f64>>,
    dx_lp: DVector<f64>,
    dy: DVector<f64>,
    dz_psd: Vec<DMatrix<f64>>,
    dz_lp: DVector<f64>,
}

/// Solves the SDP from the standard infeasible starting point `X = Z = ξI`.
pub fn solve_block_sdp(p: &BlockSdp, opts: SdpOptions) -> SdpResult {
    let m = p.rows.len();
    let xi = 10.0;
    let mut pt = SdpPoint {
        x_psd: p.psd_dims.iter().map(|&d| DMatrix::identity(d, d) * xi).collect(),
        x_lp: DVector::from_element(p.lp_dim, xi),
        y: DVector::zeros(m),
        z_psd: p.psd_dims.iter().map(|&d| DMatrix::identity(d, d) * xi).collect(),
        z_lp: DVector::from_element(p.lp_dim, xi),
    };
    let b = DVector::from_vec(p.b.clone());
    let bnorm = 1.0 + b.norm();
    let cnorm = 1.0 + p.c_lp.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nu = p.nu();

    // Group row entries by PSD block for the Schur complement.
    let nblocks = p.psd_dims.len();
    let mut by_block: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>> = vec![Vec::new(); nblocks];
    let mut by_lp: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.lp_dim];
    for (k, row) in p.rows.iter().enumerate() {
        let mut per: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); nblocks];
        for e in row {
            match *e {
                Entry::Psd { block, r, c, value } => {
                    per[block].push((r, c, value));
                    if r != c {
                        per[block].push((c, r, value));
                    }
                }
                Entry::Lp { j, value } => by_lp[j].push((k, value)),
            }
        }
        for (blk, entries) in per.into_iter().enumerate() {
            if !entries.is_empty() {
                by_block[blk].push((k, entries));
            }
        }
    }

    let mut iterations = 0;
    let mut converged = false;
    // Iterates can break down numerically near the optimum, so the best one
    // seen (by the worst of the three residuals) is what gets returned.
    let mut best: Option<(f64, SdpPoint)> = None;
    for it in 0..opts.max_iterations {
        iterations = it;
        let ax = DVector::from_fn(m, |k, _| p.apply(k, &pt.x_psd, &pt.x_lp));
        let rp = &b - &ax;
        let (cz_psd, cz_lp) = p.dual_slack(&pt.y);
        let rd_psd: Vec<DMatrix<f64>> =
            cz_psd.iter().zip(&pt.z_psd).map(|(c, z)| c - z).collect();
        let rd_lp = &cz_lp - &pt.z_lp;
        let gap: f64 = pt.x_psd.iter().zip(&pt.z_psd).map(|(x, z)| x.dot(z)).sum::<f64>()
            + pt.x_lp.dot(&pt.z_lp);
        let pobj: f64 = p.c_lp.iter().zip(pt.x_lp.iter()).map(|(c, x)| c * x).sum();
        let dobj = b.dot(&pt.y);
        let pinf = rp.norm() / bnorm;
        let dinf = (rd_psd.iter().map(|r| r.norm_squared()).sum::<f64>() + rd_lp.norm_squared())
            .sqrt()
            / cnorm;
        let rel_gap = gap / (1.0 + pobj.abs() + dobj.abs());
        let score = pinf.max(dinf).max(rel_gap);
        if score.is_finite() && best.as_ref().is_none_or(|(b, _)| score <= *b) {
            best = Some((score, pt.clone()));
        }
        if score < opts.accuracy {
            converged = true;
            break;
        }
        let mu = gap / nu;

        let Some(zinv_psd) = pt.z_psd.iter().map(inverse_spd).collect::<Option<Vec<_>>>() else {
            break;
        };
        let zinv_lp = pt.z_lp.map(|v| 1.0 / v);

        // Schur complement M_kl = Σ tr(A_k X A_l Z⁻¹).
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for (blk, rows) in by_block.iter().enumerate() {
            let (x, zi) = (&pt.x_psd[blk], &zinv_psd[blk]);
            for (ia, (k, ek)) in rows.iter().enumerate() {
                for (l, el) in rows.iter().skip(ia) {
                    let mut s = 0.0;
                    for &(a, bb, u) in ek {
                        for &(c, d, v) in el {
                            s += u * v * x[(bb, c)] * zi[(d, a)];
                        }
                    }
                    schur[(*k, *l)] += s;
                    if k != l {
                        schur[(*l, *k)] += s;
                    }
                }
            }
        }
        for (j, entries) in by_lp.iter().enumerate() {
            let w = pt.x_lp[j] * zinv_lp[j];
            for &(k, u) in entries {
                for &(l, v) in entries {
                    schur[(k, l)] += u * v * w;
                }
            }
        }
        let chol = Cholesky::new(schur.clone());
        let lu = if chol.is_none() { Some(schur.clone().lu()) } else { None };
        let solve = |rhs: &DVector<f64>| -> Option<DVector<f64>> {
            match (&chol, &lu) {
                (Some(c), _) => Some(c.solve(rhs)),
                (None, Some(l)) => l.solve(rhs),
                _ => None,
            }
        };

        // Direction for complementarity target R_c (block-wise, LP as vector).
        let direction = |rc_psd: &[DMatrix<f64>], rc_lp: &DVector<f64>| -> Option<Direction> {
            // rhs = r_p + A(X) - A(R_c Z⁻¹) + A(X R_d Z⁻¹)
            let t_psd: Vec<DMatrix<f64>> = (0..nblocks)
                .map(|i| {
                    let zi = &zinv_psd[i];
                    sym(&(&rc_psd[i] * zi - &pt.x_psd[i] * &rd_psd[i] * zi))
                })
                .collect();
            let t_lp = DVector::from_fn(p.lp_dim, |j, _| {
                (rc_lp[j] - pt.x_lp[j] * rd_lp[j]) * zinv_lp[j]
            });
            let at = DVector::from_fn(m, |k, _| p.apply(k, &t_psd, &t_lp));
            let rhs = &rp + &ax - at;
            let dy = solve(&rhs)?;
            // ΔZ = R_d - Aᵀ(Δy)
            let (aty_psd, aty_lp) = {
                let zero = BlockSdp { c_lp: vec![0.0; p.lp_dim], ..p.clone() };
                let (ps, l) = zero.dual_slack(&dy);
                (ps, l)
            };
            let dz_psd: Vec<DMatrix<f64>> =
                rd_psd.iter().zip(&aty_psd).map(|(r, a)| r + a).collect();
            let dz_lp = &rd_lp + &aty_lp;
            // ΔX = R_c Z⁻¹ - X - X ΔZ Z⁻¹, symmetrized
            let dx_psd: Vec<DMatrix<f64>> = (0..nblocks)
                .map(|i| {
                    let zi = &zinv_psd[i];
                    sym(&(&rc_psd[i] * zi - &pt.x_psd[i] - &pt.x_psd[i] * &dz_psd[i] * zi))
                })
                .collect();
            let dx_lp = DVector::from_fn(p.lp_dim, |j, _| {
                (rc_lp[j] - pt.x_lp[j] * dz_lp[j]) * zinv_lp[j] - pt.x_lp[j]
            });
            Some(Direction { dx_psd, dx_lp, dy, dz_psd, dz_lp })
        };
        let steps = |d: &Direction| -> (f64, f64) {
            let mut ap = max_step_lp(&pt.x_lp, &d.dx_lp);
            let mut ad = max_step_lp(&pt.z_lp, &d.dz_lp);
            for i in 0..nblocks {
                ap = ap.min(max_step_psd(&pt.x_psd[i], &d.dx_psd[i]));
                ad = ad.min(max_step_psd(&pt.z_psd[i], &d.dz_psd[i]));
            }
            (ap, ad)
        };

        // Predictor.
        let zero_psd: Vec<DMatrix<f64>> =
            p.psd_dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        let zero_lp = DVector::zeros(p.lp_dim);
        let Some(pred) = direction(&zero_psd, &zero_lp) else {
            break;
        };
        let (ap, ad) = steps(&pred);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let gap_aff: f64 = (0..nblocks)
            .map(|i| (&pt.x_psd[i] + &pred.dx_psd[i] * ap).dot(&(&pt.z_psd[i] + &pred.dz_psd[i] * ad)))
            .sum::<f64>()
            + (&pt.x_lp + &pred.dx_lp * ap).dot(&(&pt.z_lp + &pred.dz_lp * ad));
        let sigma = (gap_aff / gap).clamp(0.0, 1.0).powi(3);

        // Corrector: R_c = σμI - ΔX_aff ΔZ_aff.
        let rc_psd: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|i| {
                let d = p.psd_dims[i];
                DMatrix::identity(d, d) * (sigma * mu) - &pred.dx_psd[i] * &pred.dz_psd[i]
            })
            .collect();
        let rc_lp = DVector::from_fn(p.lp_dim, |j, _| {
            sigma * mu - pred.dx_lp[j] * pred.dz_lp[j]
        });
        let Some(dir) = direction(&rc_psd, &rc_lp) else {
            break;
        };
        let (ap, ad) = steps(&dir);
        let ap = (0.95 * ap).min(1.0);
        let ad = (0.95 * ad).min(1.0);
        for i in 0..nblocks {
            pt.x_psd[i] += &dir.dx_psd[i] * ap;
            pt.z_psd[i] += &dir.dz_psd[i] * ad;
            pt.x_psd[i] = sym(&pt.x_psd[i]);
            pt.z_psd[i] = sym(&pt.z_psd[i]);
        }
        pt.x_lp += &dir.dx_lp * ap;
        pt.z_lp += &dir.dz_lp * ad;
        pt.y += &dir.dy * ad;
    }

    if let Some((_, b)) = best {
        pt = b;
    }
    let primal_objective = p.c_lp.iter().zip(pt.x_lp.iter()).map(|(c, x)| c * x).sum();
    let dual_objective = b.dot(&pt.y);
    SdpResult { point: pt, primal_objective, dual_objective, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_only_problem() {
        // min x0 + 2 x1 s.t. x0 + x1 = 1, x >= 0 -> 1
        let p = BlockSdp {
            psd_dims: vec![],
            lp_dim: 2,
            c_lp: vec![1.0, 2.0],
            rows: vec![vec![Entry::Lp { j: 0, value: 1.0 }, Entry::Lp { j: 1, value: 1.0 }]],
            b: vec![1.0],
        };
        let r = solve_block_sdp(&p, SdpOptions::default());
        assert!(r.converged);
        assert!((r.primal_objective - 1.0).abs() < 1e-8);
        assert!((r.dual_objective - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rank_one_optimum() {
        // min t s.t. t >= X00, X00 + X11 = 1, X01 = 3/10, X ⪰ 0.
        // X00 (1 - X00) >= 9/100 puts the optimum at X00 = 1/10.
        let p = BlockSdp {
            psd_dims: vec![2],
            lp_dim: 2,
            c_lp: vec![1.0, 0.0],
            rows: vec![
                vec![
                    Entry::Psd { block: 0, r: 0, c: 0, value: 1.0 },
                    Entry::Psd { block: 0, r: 1, c: 1, value: 1.0 },
                ],
                vec![Entry::Psd { block: 0, r: 0, c: 1, value: 0.5 }],
                vec![
                    Entry::Lp { j: 0, value: 1.0 },
                    Entry::Psd { block: 0, r: 0, c: 0, value: -1.0 },
                    Entry::Lp { j: 1, value: -1.0 },
                ],
            ],
            b: vec![1.0, 0.3, 0.0],
        };
        let r = solve_block_sdp(&p, SdpOptions::default());
        assert!(r.converged, "{} iterations", r.iterations);
        assert!((r.primal_objective - 0.1).abs() < 1e-8, "{}", r.primal_objective);
        assert!((r.dual_objective - 0.1).abs() < 1e-8, "{}", r.dual_objective);
    }
}
