//! Explicit Runge–Kutta integration of autonomous systems `x' = f(x)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{norm_inf, DenseMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Classical four-stage Runge–Kutta with a fixed step.
    FixedRk4,
    /// Dormand–Prince embedded 5(4) pair with step-size control.
    AdaptiveRk45,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for RK45.
    pub step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub horizon: f64,
    /// Stop once `‖f(x)‖∞` drops below this. Zero disables the check.
    pub convergence_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::FixedRk4,
            step: 1e-2,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1.0,
            horizon: 50.0,
            convergence_tol: 1e-10,
        }
    }
}

impl IntegratorConfig {
    pub fn adaptive() -> Self {
        Self {
            method: Method::AdaptiveRk45,
            ..Self::default()
        }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.step) {
            return Err(Error::InvalidConfig("step must be positive"));
        }
        if !positive(self.horizon) {
            return Err(Error::InvalidConfig("horizon must be positive"));
        }
        if self.method == Method::AdaptiveRk45
            && !(positive(self.rel_tol) && positive(self.abs_tol) && positive(self.max_step))
        {
            return Err(Error::InvalidConfig("tolerances and max step must be positive"));
        }
        if !(self.convergence_tol >= 0.0) {
            return Err(Error::InvalidConfig("convergence tolerance must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    HorizonReached,
    Converged,
}

/// Sampled solution: one state per accepted step, starting with the initial
/// state at `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial time")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Integrate `x' = f(x)` from `x0` over `[0, config.horizon]`.
///
/// `f` writes the derivative of its first argument into the second.
pub fn integrate<F>(mut f: F, x0: &[f64], config: &IntegratorConfig) -> Result<Trajectory>
where
    F: FnMut(&[f64], &mut [f64]),
{
    config.validate()?;
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { t: 0.0 });
    }
    match config.method {
        Method::FixedRk4 => rk4(&mut f, x0, config),
        Method::AdaptiveRk45 => dopri45(&mut f, x0, config),
    }
}

/// Integrate the linear system `x' = M x`.
pub fn integrate_linear(m: &DenseMatrix, x0: &[f64], config: &IntegratorConfig) -> Result<Trajectory> {
    m.require_square()?;
    if x0.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            found: x0.len(),
        });
    }
    integrate(
        |x, dx| {
            for (i, d) in dx.iter_mut().enumerate() {
                *d = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
            }
        },
        x0,
        config,
    )
}

fn converged(dx: &[f64], config: &IntegratorConfig) -> bool {
    config.convergence_tol > 0.0 && norm_inf(dx) < config.convergence_tol
}

fn axpy_into(out: &mut [f64], x: &[f64], terms: &[(f64, &[f64])], h: f64) {
    for i in 0..x.len() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] = x[i] + h * acc;
    }
}

fn rk4<F: FnMut(&[f64], &mut [f64])>(
    f: &mut F,
    x0: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut times = vec![0.0];
    let mut states = vec![x.clone()];

    f(&x, &mut k1);
    if converged(&k1, config) {
        return Ok(Trajectory {
            times,
            states,
            termination: Termination::Converged,
        });
    }
    let steps = libm::ceil(config.horizon / config.step - 1e-9).max(1.0) as usize;
    let mut t = 0.0;
    for k in 1..=steps {
        let t_next = if k == steps {
            config.horizon
        } else {
            k as f64 * config.step
        };
        let h = t_next - t;
        axpy_into(&mut tmp, &x, &[(0.5, &k1)], h);
        f(&tmp, &mut k2);
        axpy_into(&mut tmp, &x, &[(0.5, &k2)], h);
        f(&tmp, &mut k3);
        axpy_into(&mut tmp, &x, &[(1.0, &k3)], h);
        f(&tmp, &mut k4);
        axpy_into(
            &mut tmp,
            &x,
            &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)],
            h,
        );
        core::mem::swap(&mut x, &mut tmp);
        t = t_next;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { t });
        }
        times.push(t);
        states.push(x.clone());
        f(&x, &mut k1);
        if converged(&k1, config) {
            return Ok(Trajectory {
                times,
                states,
                termination: Termination::Converged,
            });
        }
    }
    Ok(Trajectory {
        times,
        states,
        termination: Termination::HorizonReached,
    })
}

// Dormand–Prince tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// Fifth-order minus fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn dopri45<F: FnMut(&[f64], &mut [f64])>(
    f: &mut F,
    x0: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut times = vec![0.0];
    let mut states = vec![x.clone()];
    let min_step = 1e-14 * config.horizon;

    f(&x, &mut k[0]);
    if converged(&k[0], config) {
        return Ok(Trajectory {
            times,
            states,
            termination: Termination::Converged,
        });
    }
    let mut t = 0.0;
    let mut h = config.step.min(config.max_step);
    while t < config.horizon {
        let last = t + h >= config.horizon;
        let h_try = if last { config.horizon - t } else { h };

        let (k0, rest) = k.split_first_mut().expect("seven stages");
        axpy_into(&mut stage, &x, &[(A2[0], k0)], h_try);
        f(&stage, &mut rest[0]);
        axpy_into(&mut stage, &x, &[(A3[0], k0), (A3[1], &rest[0])], h_try);
        f(&stage, &mut rest[1]);
        axpy_into(
            &mut stage,
            &x,
            &[(A4[0], k0), (A4[1], &rest[0]), (A4[2], &rest[1])],
            h_try,
        );
        f(&stage, &mut rest[2]);
        axpy_into(
            &mut stage,
            &x,
            &[(A5[0], k0), (A5[1], &rest[0]), (A5[2], &rest[1]), (A5[3], &rest[2])],
            h_try,
        );
        f(&stage, &mut rest[3]);
        axpy_into(
            &mut stage,
            &x,
            &[
                (A6[0], k0),
                (A6[1], &rest[0]),
                (A6[2], &rest[1]),
                (A6[3], &rest[2]),
                (A6[4], &rest[3]),
            ],
            h_try,
        );
        f(&stage, &mut rest[4]);
        axpy_into(
            &mut x_new,
            &x,
            &[
                (B[0], k0),
                (B[2], &rest[1]),
                (B[3], &rest[2]),
                (B[4], &rest[3]),
                (B[5], &rest[4]),
            ],
            h_try,
        );
        f(&x_new, &mut rest[5]);

        let mut err = 0.0f64;
        for i in 0..n {
            let e = h_try
                * (E[0] * k0[i]
                    + E[2] * rest[1][i]
                    + E[3] * rest[2][i]
                    + E[4] * rest[3][i]
                    + E[5] * rest[4][i]
                    + E[6] * rest[5][i]);
            err = err.max(libm::fabs(e));
        }
        if x_new.iter().any(|v| !v.is_finite()) || !err.is_finite() {
            return Err(Error::NonFiniteState { t: t + h_try });
        }
        let tol = config.abs_tol + config.rel_tol * norm_inf(&x).max(norm_inf(&x_new));
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(tol / err, 0.2)).clamp(0.2, 5.0)
        };
        if err <= tol {
            t = if last { config.horizon } else { t + h_try };
            core::mem::swap(&mut x, &mut x_new);
            k.swap(0, 6);
            times.push(t);
            states.push(x.clone());
            if converged(&k[0], config) {
                return Ok(Trajectory {
                    times,
                    states,
                    termination: Termination::Converged,
                });
            }
            h = (h_try * factor).min(config.max_step);
            if last {
                break;
            }
        } else {
            h = h_try * factor;
            if h < min_step {
                return Err(Error::StepUnderflow { t, min_step });
            }
        }
    }
    Ok(Trajectory {
        times,
        states,
        termination: Termination::HorizonReached,
    })
}
