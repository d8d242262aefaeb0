use super::algorithm::{run_traced, QueryAlgorithm};
use super::QsimError;
use crate::boolfn::{flip, Block, Letter};

/// Slack on every inequality the checker asserts.
pub const HYBRID_SLACK: f64 = 1e-9;

/// `d_{t+1} <= d_t + 2·√(mass on B before query t+1)`, with `d_t` the
/// Euclidean distance between the two runs after `t` queries.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCheck {
    pub t: usize,
    pub d_before: f64,
    pub d_after: f64,
    pub block_mass: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridReport {
    /// `Σ_t Σ_{i∈B} m_i^t` on `x`.
    pub mass: f64,
    /// `(1-2ε)²/(4T)`, zero when `T = 0`.
    pub bound: f64,
    /// `(1 - 2√(ε(1-ε)))/(2T)`; reported, not asserted.
    pub footnote_bound: f64,
    /// `(1 - D)/2` for the output trace distance `D`.
    pub epsilon: f64,
    pub distance: f64,
    pub steps: Vec<StepCheck>,
    /// `mass >= bound - 1e-9`.
    pub pass: bool,
}

impl HybridReport {
    pub fn steps_pass(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }

    /// Whether the footnote bound also holds (within the same slack).
    pub fn footnote_pass(&self) -> bool {
        self.mass >= self.footnote_bound - HYBRID_SLACK
    }
}

/// Runs `alg` on `x` and on `x` with `block` flipped, and compares the
/// query mass on the block against the hybrid lower bound.
pub fn hybrid_check(alg: &QueryAlgorithm, x: &[Letter], block: &Block) -> Result<HybridReport, QsimError> {
    if alg.q() != 2 {
        return Err(QsimError::AlphabetUnsupported(alg.q()));
    }
    if block.positions().iter().any(|&p| p >= alg.n()) {
        return Err(QsimError::BadInput(format!("block {:?} outside {} positions", block.positions(), alg.n())));
    }
    let y = flip(x, 2, block).map_err(|e| QsimError::BadInput(e.to_string()))?;
    let tx = run_traced(alg, x)?;
    let ty = run_traced(alg, &y)?;
    let t_count = alg.queries();

    let block_mass: Vec<f64> = tx
        .mass
        .iter()
        .map(|row| block.positions().iter().map(|&i| row[i]).sum())
        .collect();
    let mass: f64 = block_mass.iter().sum();

    let dist: Vec<f64> = tx.states.iter().zip(&ty.states).map(|(a, b)| (a - b).norm()).collect();
    let steps = (0..t_count)
        .map(|t| StepCheck {
            t,
            d_before: dist[t],
            d_after: dist[t + 1],
            block_mass: block_mass[t],
            pass: dist[t + 1] <= dist[t] + 2.0 * block_mass[t].max(0.0).sqrt() + HYBRID_SLACK,
        })
        .collect();

    let distance = tx.output.distance(&ty.output)?.clamp(0.0, 1.0);
    let epsilon = (1.0 - distance) / 2.0;
    let (bound, footnote_bound) = if t_count == 0 {
        (0.0, 0.0)
    } else {
        let t = t_count as f64;
        let root = (epsilon * (1.0 - epsilon)).max(0.0).sqrt();
        ((1.0 - 2.0 * epsilon).powi(2) / (4.0 * t), (1.0 - 2.0 * root) / (2.0 * t))
    };
    Ok(HybridReport {
        mass,
        bound,
        footnote_bound,
        epsilon,
        distance,
        steps,
        pass: mass >= bound - HYBRID_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{CMatrix, Gate, OutputSpec};

    #[test]
    fn unqueried_block() {
        // Identity unitaries still query position 0, so flip position 1.
        let alg = QueryAlgorithm::new(
            2,
            2,
            1,
            vec![CMatrix::identity(4, 4), CMatrix::identity(4, 4)],
            OutputSpec::Pure,
        )
        .unwrap();
        let r = hybrid_check(&alg, &[0, 0], &Block::new([1], 2).unwrap()).unwrap();
        assert_eq!(r.mass, 0.0);
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.epsilon, 0.5);
        assert_eq!(r.bound, 0.0);
        assert!(r.pass && r.steps_pass());
    }

    #[test]
    fn deutsch_parity() {
        // One query computes x_0 ⊕ x_1 exactly, so flipping one bit is
        // perfectly distinguishable and each position carries mass 1/2.
        let alg = QueryAlgorithm::from_gates(
            2,
            2,
            1,
            vec![
                vec![Gate::ShiftAnswer, Gate::DftAnswer, Gate::DftIndex],
                vec![Gate::DftIndex],
            ],
            OutputSpec::Pure,
        )
        .unwrap();
        let r = hybrid_check(&alg, &[0, 1], &Block::new([1], 2).unwrap()).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-12);
        assert!((r.mass - 0.5).abs() < 1e-12);
        assert!((r.bound - 0.25).abs() < 1e-12);
        assert!(r.pass && r.steps_pass() && r.footnote_pass());
    }

    #[test]
    fn rejects_larger_alphabets() {
        let alg = QueryAlgorithm::new(2, 3, 1, vec![CMatrix::identity(6, 6)], OutputSpec::Pure).unwrap();
        assert_eq!(
            hybrid_check(&alg, &[0, 0], &Block::new([0], 2).unwrap()),
            Err(QsimError::AlphabetUnsupported(3))
        );
    }
}
