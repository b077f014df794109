//! Relaxation dynamics: pressure, energy, clamp cost, and state updates.
//!
//! The state update is an explicit Euler step of the leaky-integrator
//! equation `ds/dt = epsilon * (R(s) - s)`, optionally with an extra clamp
//! pressure `beta * (target - s)` on clamped visible neurons, and optionally
//! routed through a velocity for momentum relaxation.

use std::ops::Range;

use ndarray::{aview1, Array1};

use crate::activation::Activation;
use crate::diagnostics::{fixed_point_residual, TraceRecord};
use crate::error::{Error, Result};
use crate::network::{NetworkState, Parameters};
use crate::sample::DataSample;
use crate::topology::NetworkTopology;

/// Whether a relaxation applies plain Euler steps or momentum steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    Plain,
    Momentum,
}

/// Where the clamp pressure enters a momentum step.
///
/// `ThroughVelocity` folds `beta * (target - s)` into the drive before the
/// velocity update, so momentum smooths both pressures uniformly; `Direct`
/// applies it straight to `s` after the velocity step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClampMode {
    ThroughVelocity,
    Direct,
}

impl StepMode {
    pub fn name(self) -> &'static str {
        match self {
            StepMode::Plain => "plain",
            StepMode::Momentum => "momentum",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "plain" => Some(StepMode::Plain),
            "momentum" => Some(StepMode::Momentum),
            _ => None,
        }
    }
}

impl ClampMode {
    pub fn name(self) -> &'static str {
        match self {
            ClampMode::ThroughVelocity => "through_velocity",
            ClampMode::Direct => "direct",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "through_velocity" => Some(ClampMode::ThroughVelocity),
            "direct" => Some(ClampMode::Direct),
        }
    }
}

/// Step size, clamp strength, inertia, and iteration count for one
/// relaxation phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    pub epsilon: f64,
    pub beta: f64,
    pub momentum: f64,
    pub iterations: usize,
    pub mode: StepMode,
    pub clamp_mode: ClampMode,
}

impl PhaseConfig {
    /// Clamped-phase reference values: eps 0.2, beta 0.8, m 0.4, 32 steps.
    pub fn reference_clamped() -> Self {
        PhaseConfig {
            epsilon: 0.2,
            beta: 0.8,
            momentum: 0.4,
            iterations: 32,
            mode: StepMode::Momentum,
            clamp_mode: ClampMode::ThroughVelocity,
        }
    }

    /// Free-phase reference values: eps 0.2, beta 0, m 0, 32 plain steps.
    pub fn reference_free() -> Self {
        PhaseConfig {
            epsilon: 0.2,
            beta: 0.0,
            momentum: 0.0,
            iterations: 32,
            mode: StepMode::Plain,
            clamp_mode: ClampMode::ThroughVelocity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("beta must be >= 0, got {}", self.beta)));
        }
        if !(0.0..=1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must lie in [0, 1], got {}",
                self.momentum
            )));
        }
        Ok(())
    }
}

fn check_shapes(state: &NetworkState, params: &Parameters, topo: &NetworkTopology) -> Result<()> {
    let n = topo.n_total();
    if state.len() != n {
        return Err(Error::Dimension(format!(
            "state has {} neurons, topology has {}",
            state.len(),
            n
        )));
    }
    if params.b.len() != n || params.w.dim() != (n, n) {
        return Err(Error::Dimension(format!(
            "parameters sized for {} neurons, topology has {}",
            params.b.len(),
            n
        )));
    }
    Ok(())
}

fn check_sample(sample: &DataSample, topo: &NetworkTopology) -> Result<()> {
    if sample.n_visible() != topo.n_visible() {
        return Err(Error::Dimension(format!(
            "sample addresses {} visible neurons, topology has {}",
            sample.n_visible(),
            topo.n_visible()
        )));
    }
    Ok(())
}

/// rho and rho' evaluated over the whole state, reused across a step.
#[derive(Debug, Clone)]
pub(crate) struct ActBuf {
    pub rho: Array1<f64>,
    pub rho_prime: Array1<f64>,
}

impl ActBuf {
    pub fn new(n: usize) -> Self {
        ActBuf {
            rho: Array1::zeros(n),
            rho_prime: Array1::zeros(n),
        }
    }

    pub fn fill(&mut self, act: Activation, s: &Array1<f64>) {
        let rho = self.rho.as_slice_mut().expect("contiguous");
        let prime = self.rho_prime.as_slice_mut().expect("contiguous");
        for (i, &x) in s.iter().enumerate() {
            let r = act.value(x);
            rho[i] = r;
            prime[i] = act.prime_from_value(r);
        }
    }
}

/// Dot product of a weight row against rho over the allowed spans.
///
/// Fixed left-to-right reduction order, so results are reproducible.
#[inline]
fn span_dot(row: &[f64], x: &[f64], spans: &[Range<usize>; 2]) -> f64 {
    let mut acc = 0.0;
    for r in spans {
        if r.start < r.end {
            acc += aview1(&row[r.start..r.end]).dot(&aview1(&x[r.start..r.end]));
        }
    }
    acc
}

/// out[i] = sum_j w[[i, j]] * rho[j] + b[i] over the allowed entries.
pub(crate) fn raw_drive_into(
    params: &Parameters,
    topo: &NetworkTopology,
    rho: &Array1<f64>,
    out: &mut Array1<f64>,
) {
    let n = topo.n_total();
    let w = params.w.as_slice().expect("contiguous");
    let rho_s = rho.as_slice().expect("contiguous");
    let out_s = out.as_slice_mut().expect("contiguous");
    for i in 0..n {
        let row = &w[i * n..(i + 1) * n];
        out_s[i] = span_dot(row, rho_s, &topo.peer_spans(i)) + params.b[i];
    }
}

/// The pressure on each neuron: R[i] = rho'(s_i) * (sum_j w[j -> i] rho(s_j) + b_i).
pub fn pressure(
    state: &NetworkState,
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
) -> Result<Array1<f64>> {
    check_shapes(state, params, topo)?;
    let n = topo.n_total();
    let mut bufs = ActBuf::new(n);
    bufs.fill(act, &state.s);
    let mut out = Array1::zeros(n);
    raw_drive_into(params, topo, &bufs.rho, &mut out);
    for i in 0..n {
        out[i] *= bufs.rho_prime[i];
    }
    Ok(out)
}

/// E = 1/2 sum_i s_i^2 - 1/2 sum_{i != j} w_ij rho(s_i) rho(s_j) - sum_i b_i rho(s_i),
/// with the double sum restricted to connected pairs.
pub fn energy(
    params: &Parameters,
    state: &NetworkState,
    topo: &NetworkTopology,
    act: Activation,
) -> Result<f64> {
    check_shapes(state, params, topo)?;
    let n = topo.n_total();
    let mut bufs = ActBuf::new(n);
    bufs.fill(act, &state.s);
    let rho = bufs.rho.as_slice().expect("contiguous");
    let w = params.w.as_slice().expect("contiguous");

    let mut s_sq = 0.0;
    for &x in state.s.iter() {
        s_sq += x * x;
    }
    // The ordered double sum is invariant under transposing the storage
    // orientation, so summing each row's incoming span covers every ordered
    // pair exactly once.
    let mut cross = 0.0;
    let mut bias = 0.0;
    for i in 0..n {
        let row = &w[i * n..(i + 1) * n];
        cross += rho[i] * span_dot(row, rho, &topo.peer_spans(i));
        bias += params.b[i] * rho[i];
    }
    Ok(0.5 * s_sq - 0.5 * cross - bias)
}

/// C = 1/2 beta sum_{i clamped} (target_i - s_i)^2.
pub fn clamp_cost(sample: &DataSample, state: &NetworkState, beta: f64) -> f64 {
    assert!(
        sample.n_visible() <= state.len(),
        "sample addresses more visible neurons than the state has"
    );
    let mut acc = 0.0;
    for (i, &clamped) in sample.clamp_mask.iter().enumerate() {
        if clamped {
            let d = sample.targets[i] - state.s[i];
            acc += d * d;
        }
    }
    0.5 * beta * acc
}

/// Energy plus clamp cost; with no sample this is just the energy.
pub fn total_energy(
    params: &Parameters,
    state: &NetworkState,
    topo: &NetworkTopology,
    act: Activation,
    sample: Option<&DataSample>,
    beta: f64,
) -> Result<f64> {
    let e = energy(params, state, topo, act)?;
    Ok(match sample {
        Some(sm) => e + clamp_cost(sm, state, beta),
        None => e,
    })
}

/// One state update. `bufs` must hold rho/rho' for the current `state.s`;
/// on return `drive` holds the network drive R(s) - s that was applied
/// (before any clamp contribution in `Plain`/`Direct` modes).
#[allow(clippy::too_many_arguments)]
pub(crate) fn step_in_place(
    state: &mut NetworkState,
    params: &Parameters,
    topo: &NetworkTopology,
    bufs: &ActBuf,
    clamp: Option<(&DataSample, f64)>,
    mode: StepMode,
    clamp_mode: ClampMode,
    epsilon: f64,
    momentum: f64,
    drive: &mut Array1<f64>,
    clamp_add: &mut Vec<(usize, f64)>,
) -> Result<()> {
    let n = topo.n_total();
    raw_drive_into(params, topo, &bufs.rho, drive);
    {
        let d = drive.as_slice_mut().expect("contiguous");
        let s = state.s.as_slice().expect("contiguous");
        let prime = bufs.rho_prime.as_slice().expect("contiguous");
        for i in 0..n {
            d[i] = prime[i] * d[i] - s[i];
        }
    }

    let active = clamp.filter(|(sample, beta)| *beta > 0.0 && !sample.is_free());
    clamp_add.clear();

    match mode {
        StepMode::Plain => {
            // Both pressures are evaluated at the pre-step state.
            if let Some((sample, beta)) = active {
                for (i, &m) in sample.clamp_mask.iter().enumerate() {
                    if m {
                        clamp_add.push((i, beta * (sample.targets[i] - state.s[i])));
                    }
                }
            }
            let s = state.s.as_slice_mut().expect("contiguous");
            let d = drive.as_slice().expect("contiguous");
            for i in 0..n {
                s[i] += epsilon * d[i];
            }
            for &(i, add) in clamp_add.iter() {
                s[i] += add;
            }
        }
        StepMode::Momentum => {
            match (active, clamp_mode) {
                (Some((sample, beta)), ClampMode::ThroughVelocity) => {
                    let d = drive.as_slice_mut().expect("contiguous");
                    for (i, &m) in sample.clamp_mask.iter().enumerate() {
                        if m {
                            d[i] += beta * (sample.targets[i] - state.s[i]);
                        }
                    }
                }
                (Some((sample, beta)), ClampMode::Direct) => {
                    for (i, &m) in sample.clamp_mask.iter().enumerate() {
                        if m {
                            clamp_add.push((i, beta * (sample.targets[i] - state.s[i])));
                        }
                    }
                }
                (None, _) => {}
            }
            let s = state.s.as_slice_mut().expect("contiguous");
            let v = state.v.as_slice_mut().expect("contiguous");
            let d = drive.as_slice().expect("contiguous");
            for i in 0..n {
                v[i] = momentum * d[i] + (1.0 - momentum) * v[i];
                s[i] += epsilon * v[i];
            }
            for &(i, add) in clamp_add.iter() {
                s[i] += add;
            }
        }
    }

    if !state.is_finite() {
        return Err(Error::NonFinite(
            "relaxation step produced NaN or Inf".to_string(),
        ));
    }
    Ok(())
}

fn prepared_step(
    state: &mut NetworkState,
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    sample: Option<&DataSample>,
    cfg: &PhaseConfig,
    mode: StepMode,
) -> Result<()> {
    check_shapes(state, params, topo)?;
    cfg.validate()?;
    if let Some(sm) = sample {
        check_sample(sm, topo)?;
    }
    let n = topo.n_total();
    let mut bufs = ActBuf::new(n);
    bufs.fill(act, &state.s);
    let mut drive = Array1::zeros(n);
    let mut adds = Vec::new();
    step_in_place(
        state,
        params,
        topo,
        &bufs,
        sample.map(|sm| (sm, cfg.beta)),
        mode,
        cfg.clamp_mode,
        cfg.epsilon,
        cfg.momentum,
        &mut drive,
        &mut adds,
    )
}

/// s_i += epsilon * (R_i(s) - s_i), plus beta * (target_i - s_i) on clamped
/// neurons when a sample is present with beta > 0. Velocities are untouched.
pub fn plain_step(
    state: &mut NetworkState,
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    sample: Option<&DataSample>,
    cfg: &PhaseConfig,
) -> Result<()> {
    prepared_step(state, params, topo, act, sample, cfg, StepMode::Plain)
}

/// v_i <- m * drive_i + (1 - m) * v_i, then s_i += epsilon * v_i, where the
/// drive is R_i(s) - s_i plus the clamp pressure per `cfg.clamp_mode`.
pub fn momentum_step(
    state: &mut NetworkState,
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    sample: Option<&DataSample>,
    cfg: &PhaseConfig,
) -> Result<()> {
    prepared_step(state, params, topo, act, sample, cfg, StepMode::Momentum)
}

/// Run `cfg.iterations` steps in `cfg.mode`, recording energy, clamp cost,
/// and the fixed-point residual after each step. Neither `s` nor `v` is
/// reinitialized on entry.
pub fn relax(
    state: &mut NetworkState,
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    sample: Option<&DataSample>,
    cfg: &PhaseConfig,
) -> Result<Vec<TraceRecord>> {
    check_shapes(state, params, topo)?;
    cfg.validate()?;
    if cfg.iterations < 1 {
        return Err(Error::Config("relax requires at least one iteration".to_string()));
    }
    if let Some(sm) = sample {
        check_sample(sm, topo)?;
    }
    let n = topo.n_total();
    let mut bufs = ActBuf::new(n);
    let mut drive = Array1::zeros(n);
    let mut adds = Vec::new();
    let mut trace = Vec::with_capacity(cfg.iterations);
    for it in 0..cfg.iterations {
        bufs.fill(act, &state.s);
        step_in_place(
            state,
            params,
            topo,
            &bufs,
            sample.map(|sm| (sm, cfg.beta)),
            cfg.mode,
            cfg.clamp_mode,
            cfg.epsilon,
            cfg.momentum,
            &mut drive,
            &mut adds,
        )?;
        let e = energy(params, state, topo, act)?;
        let c = sample.map(|sm| clamp_cost(sm, state, cfg.beta)).unwrap_or(0.0);
        let r = fixed_point_residual(state, params, topo, act)?;
        trace.push(TraceRecord {
            step: it + 1,
            watched: Vec::new(),
            energy: e,
            cost: c,
            max_residual: r,
        });
    }
    Ok(trace)
}

/// Analytic gradient of the energy with respect to s, using the symmetrized
/// weight 1/2 (w[j -> i] + w[i -> j]). The unsymmetrized pressure drive only
/// agrees with the negative of this when the weights are symmetric.
pub fn energy_gradient(
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    state: &NetworkState,
) -> Result<Array1<f64>> {
    check_shapes(state, params, topo)?;
    let n = topo.n_total();
    let mut bufs = ActBuf::new(n);
    bufs.fill(act, &state.s);
    let mut grad = Array1::zeros(n);
    for i in 0..n {
        let mut raw = params.b[i];
        for span in topo.peer_spans(i) {
            for j in span {
                raw += 0.5 * (params.w[[i, j]] + params.w[[j, i]]) * bufs.rho[j];
            }
        }
        grad[i] = state.s[i] - bufs.rho_prime[i] * raw;
    }
    Ok(grad)
}

/// Result of comparing the analytic energy gradient against central finite
/// differences.
#[derive(Debug, Clone, Copy)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    /// Set when shrinking h from 2h to h made the error worse, which points
    /// at floating-point cancellation rather than truncation error.
    pub cancellation_suspected: bool,
}

fn max_rel_error_vs_fd(
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    state: &NetworkState,
    analytic: &Array1<f64>,
    h: f64,
) -> Result<f64> {
    let mut probe = state.clone();
    let mut worst = 0.0f64;
    for i in 0..state.len() {
        let orig = probe.s[i];
        probe.s[i] = orig + h;
        let e_plus = energy(params, &probe, topo, act)?;
        probe.s[i] = orig - h;
        let e_minus = energy(params, &probe, topo, act)?;
        probe.s[i] = orig;
        let fd = (e_plus - e_minus) / (2.0 * h);
        let denom = analytic[i].abs().max(fd.abs()).max(1e-10);
        worst = worst.max((analytic[i] - fd).abs() / denom);
    }
    Ok(worst)
}

/// Compare the symmetrized analytic gradient of the energy against central
/// finite differences with step `h`. Intended for small networks.
pub fn energy_gradient_check(
    params: &Parameters,
    topo: &NetworkTopology,
    act: Activation,
    state: &NetworkState,
    h: f64,
) -> Result<GradCheckReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Argument(format!("h must be positive, got {}", h)));
    }
    let analytic = energy_gradient(params, topo, act, state)?;
    let err_h = max_rel_error_vs_fd(params, topo, act, state, &analytic, h)?;
    let err_2h = max_rel_error_vs_fd(params, topo, act, state, &analytic, 2.0 * h)?;
    Ok(GradCheckReport {
        max_rel_error: err_h,
        cancellation_suspected: err_h > err_2h,
    })
}
