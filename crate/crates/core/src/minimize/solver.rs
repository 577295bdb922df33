//! Augmented-Lagrangian objective for pointwise bounds and the inner
//! unconstrained solvers (damped Newton on the banded Hessian, L-BFGS).

use std::collections::VecDeque;

use serde::Serialize;

use super::discrete::{assemble_energy, cholesky_solve, Banded, ConstraintPoint, Layout};

/// `sign · (u(x) - bound) ≤ 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Constraint {
    pub point: ConstraintPoint,
    pub sign: f64,
    pub bound: f64,
    /// Obstacle constraint (as opposed to the positivity floor).
    pub obstacle: bool,
}

impl Constraint {
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.sign * (self.point.value(x) - self.bound)
    }
}

pub(crate) struct Augmented<'a> {
    pub layout: &'a Layout,
    pub constraints: &'a [Constraint],
    pub lambda: Vec<f64>,
    pub rho: f64,
}

impl Augmented<'_> {
    /// Objective, accumulating the gradient (and Hessian) when requested.
    pub fn eval(&self, x: &[f64], grad: &mut [f64], hess: Option<&mut Banded>) -> f64 {
        self.eval_masked(x, grad, hess, None)
    }

    /// As `eval`, with the Hessian also carrying the penalty curvature of
    /// the constraints flagged in `curvature`.
    fn eval_masked(&self, x: &[f64], grad: &mut [f64], mut hess: Option<&mut Banded>, curvature: Option<&[bool]>) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        if let Some(h) = hess.as_deref_mut() {
            h.a.iter_mut().for_each(|r| *r = [0.0; 4]);
        }
        let mut total = assemble_energy(self.layout, x, grad, hess.as_deref_mut());
        if !total.is_finite() {
            return f64::INFINITY;
        }
        let factor = self.layout.factor();
        for (i, (c, &lam)) in self.constraints.iter().zip(&self.lambda).enumerate() {
            let shifted = lam + self.rho * c.residual(x);
            let active = shifted.max(0.0);
            total += factor * (active * active - lam * lam) / (2.0 * self.rho);
            let base = 2 * c.point.element;
            if active > 0.0 {
                for a in 0..4 {
                    grad[base + a] += factor * active * c.sign * c.point.weights[a];
                }
            }
            if active > 0.0 || curvature.is_some_and(|m| m[i]) {
                if let Some(h) = hess.as_deref_mut() {
                    for a in 0..4 {
                        for b in a..4 {
                            h.add(base + a, base + b, factor * self.rho * c.point.weights[a] * c.point.weights[b]);
                        }
                    }
                }
            }
        }
        total
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut g = vec![0.0; x.len()];
        self.eval(x, &mut g, None)
    }

    pub fn update_multipliers(&mut self, x: &[f64]) {
        for (c, lam) in self.constraints.iter().zip(self.lambda.iter_mut()) {
            *lam = (*lam + self.rho * c.residual(x)).max(0.0);
        }
    }

    /// Largest violation `max(0, g)` over the constraints selected by `filter`.
    pub fn violation(&self, x: &[f64], obstacle_only: bool) -> f64 {
        self.constraints
            .iter()
            .filter(|c| !obstacle_only || c.obstacle)
            .map(|c| c.residual(x).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InnerSolver {
    /// Damped Newton with a diagonal shift on indefinite Hessians.
    Newton,
    /// Limited-memory BFGS with the given history length.
    Lbfgs { memory: usize },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct InnerOptions {
    pub solver: InnerSolver,
    pub max_iterations: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InnerOutcome {
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

fn free_norm(g: &[f64], fixed: &[bool]) -> f64 {
    g.iter().zip(fixed).filter(|(_, &f)| !f).fold(0.0, |m, (v, _)| m.max(v.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
/// Relative Newton decrement below which steps are taken without line search.
const LOCAL_DECREMENT: f64 = 1e-9;

/// Backtracking line search from `x` along `p`; returns the accepted step
/// and objective, or `None` when no decrease was found.
fn backtrack(obj: &Augmented, x: &[f64], phi: f64, slope: f64, p: &[f64]) -> Option<(f64, f64, Vec<f64>)> {
    let mut t = 1.0;
    let mut trial = vec![0.0; x.len()];
    while t >= MIN_STEP {
        for i in 0..x.len() {
            trial[i] = x[i] + t * p[i];
        }
        let v = obj.value(&trial);
        if v.is_finite() && v <= phi + ARMIJO * t * slope {
            return Some((t, v, trial));
        }
        t *= 0.5;
    }
    None
}

pub(crate) fn minimize(obj: &Augmented, x: &mut Vec<f64>, opts: &InnerOptions) -> InnerOutcome {
    match opts.solver {
        InnerSolver::Newton => newton(obj, x, opts),
        InnerSolver::Lbfgs { memory } => lbfgs(obj, x, opts, memory.max(1)),
    }
}

/// Solves `H p = -g` with fixed rows replaced by the identity, shifting
/// the diagonal until the Cholesky factorisation succeeds.
fn newton_step(h: &mut Banded, g: &mut [f64], fixed: &[bool]) -> Vec<f64> {
    let n = g.len();
    for i in 0..n {
        if fixed[i] {
            g[i] = 0.0;
            for j in i.saturating_sub(3)..(i + 4).min(n) {
                if j != i {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    h.a[a][b - a] = 0.0;
                }
            }
            h.a[i][0] = 1.0;
        }
    }
    let scale = h.a.iter().fold(0.0f64, |m, r| m.max(r[0].abs())).max(1.0);
    let mut shift = 0.0;
    let factor = loop {
        if let Some(r) = h.cholesky(shift) {
            break r;
        }
        shift = if shift == 0.0 { 1e-10 * scale } else { shift * 10.0 };
    };
    let neg: Vec<f64> = g.iter().map(|v| -v).collect();
    cholesky_solve(&factor, &neg)
}

/// Rounds of enlarging the Hessian's active set with constraints the full
/// step would switch on.
const ACTIVE_ROUNDS: usize = 8;

fn newton(obj: &Augmented, x: &mut Vec<f64>, opts: &InnerOptions) -> InnerOutcome {
    let n = x.len();
    let fixed = &obj.layout.fixed;
    let mut g = vec![0.0; n];
    let mut h = Banded::zeros(n);
    let mut gnorm = f64::INFINITY;
    let mut local_stalls = 0;
    let mut previous = f64::INFINITY;
    let mut mask = vec![false; obj.constraints.len()];
    let mut trial = vec![0.0; n];
    for it in 0..opts.max_iterations {
        mask.iter_mut().for_each(|m| *m = false);
        let mut phi = 0.0;
        let mut p = Vec::new();
        for round in 0..ACTIVE_ROUNDS {
            phi = obj.eval_masked(x, &mut g, Some(&mut h), Some(&mask));
            if round == 0 {
                gnorm = free_norm(&g, fixed);
                if gnorm <= opts.tolerance || !phi.is_finite() {
                    return InnerOutcome { iterations: it, converged: gnorm <= opts.tolerance, gradient_norm: gnorm };
                }
            }
            p = newton_step(&mut h, &mut g, fixed);
            for i in 0..n {
                trial[i] = x[i] + p[i];
            }
            // semismooth correction: curvature of constraints crossed by the step
            let mut grew = false;
            for (i, (c, &lam)) in obj.constraints.iter().zip(&obj.lambda).enumerate() {
                if !mask[i] && lam + obj.rho * c.residual(&trial) > 0.0 && lam + obj.rho * c.residual(x) <= 0.0 {
                    mask[i] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        let slope = dot(&g, &p);
        let decrement = -slope;
        // half the decrement estimates the remaining decrease; stop at rounding level
        let floor = 1e-14 * (1.0 + phi.abs());
        if decrement <= floor {
            return InnerOutcome { iterations: it, converged: true, gradient_norm: gnorm };
        }
        // objective values stop resolving decrements this small, so take
        // full steps while the decrement keeps shrinking
        if decrement <= LOCAL_DECREMENT * (1.0 + phi.abs()) {
            if decrement >= 0.5 * previous {
                local_stalls += 1;
                if local_stalls >= 3 {
                    return InnerOutcome { iterations: it, converged: true, gradient_norm: gnorm };
                }
            }
            previous = previous.min(decrement);
            for i in 0..n {
                trial[i] = x[i] + p[i];
            }
            if obj.value(&trial).is_finite() {
                x.copy_from_slice(&trial);
                continue;
            }
        }
        match backtrack(obj, x, phi, slope, &p) {
            Some((_, _, trial)) => *x = trial,
            None => {
                return InnerOutcome { iterations: it, converged: false, gradient_norm: gnorm };
            }
        }
    }
    InnerOutcome { iterations: opts.max_iterations, converged: false, gradient_norm: gnorm }
}

fn lbfgs(obj: &Augmented, x: &mut Vec<f64>, opts: &InnerOptions, memory: usize) -> InnerOutcome {
    let n = x.len();
    let fixed = &obj.layout.fixed;
    let project = |g: &mut [f64]| {
        for (v, &f) in g.iter_mut().zip(fixed) {
            if f {
                *v = 0.0;
            }
        }
    };
    let mut g = vec![0.0; n];
    let mut phi = obj.eval(x, &mut g, None);
    project(&mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(memory);
    for it in 0..opts.max_iterations {
        let gnorm = free_norm(&g, fixed);
        if gnorm <= opts.tolerance {
            return InnerOutcome { iterations: it, converged: true, gradient_norm: gnorm };
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let scale = 1.0 / gnorm.max(1.0);
            q.iter_mut().for_each(|v| *v *= scale);
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut p: Vec<f64> = q.iter().map(|v| -v).collect();
        project(&mut p);
        let mut slope = dot(&g, &p);
        if slope >= 0.0 {
            history.clear();
            p = g.iter().map(|v| -v).collect();
            slope = dot(&g, &p);
        }
        let Some((_, value, trial)) = backtrack(obj, x, phi, slope, &p) else {
            return InnerOutcome { iterations: it, converged: false, gradient_norm: gnorm };
        };
        let mut g_new = vec![0.0; n];
        obj.eval(&trial, &mut g_new, None);
        project(&mut g_new);
        let s: Vec<f64> = trial.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if history.len() == memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        *x = trial;
        g = g_new;
        phi = value;
    }
    let gnorm = free_norm(&g, fixed);
    InnerOutcome { iterations: opts.max_iterations, converged: gnorm <= opts.tolerance, gradient_norm: gnorm }
}
