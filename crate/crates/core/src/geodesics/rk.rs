//! Dormand-Prince 5(4) pair with step size control.

pub const DIM: usize = 4;
pub type State = [f64; DIM];

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub enum StepOutcome {
    /// New state, its derivative, and the scaled error norm (≤ 1).
    Accepted { y: State, dy: State, err: f64 },
    Rejected { err: f64 },
    /// The right-hand side could not be evaluated at some stage.
    Failed,
}

/// One trial step from `(s, y)` with derivative `dy0` already known.
pub fn try_step<F>(rhs: &F, s: f64, y: &State, dy0: &State, h: f64, tol: f64) -> StepOutcome
where
    F: Fn(f64, &State) -> Option<State>,
{
    let mut k = [[0.0; DIM]; 7];
    k[0] = *dy0;
    for stage in 1..7 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                for d in 0..DIM {
                    yi[d] += h * a * kj[d];
                }
            }
        }
        match rhs(s + C[stage] * h, &yi) {
            Some(v) => k[stage] = v,
            None => return StepOutcome::Failed,
        }
    }
    let mut y5 = *y;
    let mut err: f64 = 0.0;
    for d in 0..DIM {
        let mut inc5 = 0.0;
        let mut inc4 = 0.0;
        for st in 0..7 {
            inc5 += B5[st] * k[st][d];
            inc4 += B4[st] * k[st][d];
        }
        y5[d] += h * inc5;
        let scale = tol * (1.0 + y[d].abs().max(y5[d].abs()));
        err = err.max((h * (inc5 - inc4)).abs() / scale);
    }
    if !err.is_finite() {
        return StepOutcome::Rejected { err: f64::INFINITY };
    }
    if err <= 1.0 {
        // FSAL: the last stage is the derivative at the new point
        StepOutcome::Accepted { y: y5, dy: k[6], err }
    } else {
        StepOutcome::Rejected { err }
    }
}

/// Step size factor from an error estimate.
pub fn step_factor(err: f64) -> f64 {
    if err == 0.0 {
        5.0
    } else {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let rhs = |_s: f64, y: &State| Some([y[2], y[3], -y[0], -y[1]]);
        let mut y = [1.0, 0.0, 0.0, 1.0];
        let mut dy = rhs(0.0, &y).unwrap();
        let (mut s, mut h) = (0.0f64, 0.01f64);
        let end = std::f64::consts::PI;
        while s < end {
            h = h.min(end - s);
            match try_step(&rhs, s, &y, &dy, h, 1e-10) {
                StepOutcome::Accepted { y: ny, dy: ndy, err } => {
                    s += h;
                    y = ny;
                    dy = ndy;
                    h *= step_factor(err);
                }
                StepOutcome::Rejected { err } => h *= step_factor(err),
                StepOutcome::Failed => unreachable!(),
            }
        }
        assert!((y[0] + 1.0).abs() < 1e-8);
        assert!(y[1].abs() < 1e-8);
    }
}
