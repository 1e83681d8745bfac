//! Closed-form Steklov–Dirichlet spectra on spherical shells `A_{r,R} = {r < |x| < R}`
//! in dimension `n ≥ 2`, the Steklov value of the ball, and the capacity corrector
//! `ω^ε` (0 in `B_{r_ε}`, harmonic in `A_{r_ε,ε}`, 1 outside `B_ε`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Surface measure of the unit sphere `S^{n-1}`.
pub fn unit_sphere_area(n: u32) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellSpec {
    pub n: u32,
    pub r: f64,
    #[serde(rename = "R")]
    pub outer: f64,
}

impl ShellSpec {
    pub fn new(n: u32, r: f64, outer: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("dimension {n} < 2")));
        }
        if !(r >= 0.0 && r < outer && outer.is_finite()) {
            return Err(Error::InvalidSpec(format!("need 0 <= r < R, got r={r}, R={outer}")));
        }
        Ok(Self { n, r, outer })
    }

    /// Same shell dilated by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self { n: self.n, r: self.r * t, outer: self.outer * t }
    }
}

/// First Steklov–Dirichlet eigenvalue; simple, radial eigenfunction.
pub fn sigma1_shell(s: &ShellSpec) -> Result<f64> {
    if s.r <= 0.0 {
        return Err(Error::HoleRequired);
    }
    let big = s.outer;
    Ok(if s.n == 2 {
        1.0 / (big * (big / s.r).ln())
    } else {
        let m = (s.n - 2) as f64;
        m / (big * ((big / s.r).powf(m) - 1.0))
    })
}

/// Second Steklov–Dirichlet eigenvalue, of multiplicity `n`. At `r = 0` this is `1/R`.
pub fn sigma2_shell(s: &ShellSpec) -> f64 {
    let n = s.n as i32;
    let big_n = s.outer.powi(n);
    let small_n = s.r.powi(n);
    (big_n + small_n * (n - 1) as f64) / (s.outer * (big_n - small_n))
}

/// `dσ₂/dr = n² R^{n-1} r^{n-1} / (R^n - r^n)²`.
pub fn sigma2_shell_derivative(s: &ShellSpec) -> f64 {
    let n = s.n as i32;
    let nf = s.n as f64;
    let denom = s.outer.powi(n) - s.r.powi(n);
    nf * nf * s.outer.powi(n - 1) * s.r.powi(n - 1) / (denom * denom)
}

/// Unnormalized radial profile of the first eigenfunction at `|x| = t`:
/// `ln t − ln r` (n = 2) or `r^{2-n} − t^{2-n}` (n ≥ 3).
pub fn radial_eigenfunction_1(s: &ShellSpec, t: f64) -> Result<f64> {
    if s.r <= 0.0 {
        return Err(Error::HoleRequired);
    }
    if !(t >= s.r && t <= s.outer) {
        return Err(Error::OutOfRange { value: t, lower: s.r, upper: s.outer });
    }
    Ok(radial_profile_1(s.n, s.r, t))
}

/// Profile `w(t)` without range checks; used where the function is extended past `R`.
pub(crate) fn radial_profile_1(n: u32, r: f64, t: f64) -> f64 {
    if n == 2 {
        t.ln() - r.ln()
    } else {
        let m = (n - 2) as i32;
        r.powi(-m) - t.powi(-m)
    }
}

/// The `n` eigenfunctions `w_j(x) = (1 − r^n/|x|^n) x_j` of the second eigenvalue.
pub fn eigenfunction_2(s: &ShellSpec, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != s.n as usize {
        return Err(Error::InvalidSpec(format!("point has {} coordinates, expected {}", x.len(), s.n)));
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-12 * s.outer;
    if norm < s.r - tol || norm > s.outer + tol {
        return Err(Error::OutOfRange { value: norm, lower: s.r, upper: s.outer });
    }
    let factor = if s.r == 0.0 { 1.0 } else { 1.0 - (s.r / norm).powi(s.n as i32) };
    Ok(x.iter().map(|v| factor * v).collect())
}

/// First nontrivial Steklov eigenvalue of `B_R` and its multiplicity `n`.
pub fn steklov_ball_sigma1(n: u32, outer: f64) -> (f64, usize) {
    (1.0 / outer, n as usize)
}

/// Corrector `ω^ε` with hole radius `r_ε = ε^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectorSpec {
    pub n: u32,
    pub eps: f64,
    pub rate: f64,
}

impl CorrectorSpec {
    /// Validates `r_ε = o(ε)` (n = 2) or `r_ε = o(ε^{n/(n-2)})` (n ≥ 3) for `r_ε = ε^p`.
    pub fn new(n: u32, eps: f64, rate: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("dimension {n} < 2")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidSpec(format!("eps = {eps} must lie in (0, 1)")));
        }
        let threshold = Self::critical_rate(n);
        if !(rate > threshold) {
            return Err(Error::RateViolation(format!(
                "n = {n} requires p > {threshold}, got p = {rate}"
            )));
        }
        Ok(Self { n, eps, rate })
    }

    /// `n = 2`: 2; `n ≥ 3`: `n/(n−2) + 1`.
    pub fn default_rate(n: u32) -> f64 {
        if n == 2 {
            2.0
        } else {
            Self::critical_rate(n) + 1.0
        }
    }

    fn critical_rate(n: u32) -> f64 {
        if n == 2 {
            1.0
        } else {
            n as f64 / (n - 2) as f64
        }
    }

    pub fn hole_radius(&self) -> f64 {
        self.eps.powf(self.rate)
    }
}

/// `ω^ε(t)` at `|x| = t`.
pub fn corrector_value(c: &CorrectorSpec, t: f64) -> f64 {
    let r = c.hole_radius();
    if t <= r {
        0.0
    } else if t >= c.eps {
        1.0
    } else if c.n == 2 {
        (t / r).ln() / (c.eps / r).ln()
    } else {
        let m = -((c.n - 2) as i32);
        (r.powi(m) - t.powi(m)) / (r.powi(m) - c.eps.powi(m))
    }
}

/// Radial derivative of `ω^ε` inside the transition shell.
fn corrector_slope(c: &CorrectorSpec, t: f64) -> f64 {
    let r = c.hole_radius();
    if c.n == 2 {
        1.0 / (t * (c.eps / r).ln())
    } else {
        let m = (c.n - 2) as i32;
        m as f64 * t.powi(-m - 1) / (r.powi(-m) - c.eps.powi(-m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectorNorms {
    /// `‖ω^ε‖²_{L²(Ω₀)}`.
    pub l2_sq: f64,
    /// `‖∇ω^ε‖²_{L²(Ω₀)}`.
    pub grad_l2_sq: f64,
}

/// Squared norms of the corrector over a domain of measure `domain_area` containing `B_ε`.
///
/// The transition shell is integrated in the variable `u = ln s` with composite
/// 16-point Gauss–Legendre panels (`quad_points / 16` panels, at least 4).
pub fn corrector_norms(c: &CorrectorSpec, domain_area: f64, quad_points: usize) -> Result<CorrectorNorms> {
    let c = CorrectorSpec::new(c.n, c.eps, c.rate)?;
    let panels = quad_points.max(64).div_ceil(16);
    let gl = GaussLegendre::new(16);
    let surface = unit_sphere_area(c.n);
    let n = c.n as i32;
    let (lo, hi) = (c.hole_radius().ln(), c.eps.ln());
    let shell_l2 = gl.integrate_composite(lo, hi, panels, |u| {
        let s = u.exp();
        corrector_value(&c, s).powi(2) * surface * s.powi(n)
    });
    let grad = gl.integrate_composite(lo, hi, panels, |u| {
        let s = u.exp();
        corrector_slope(&c, s).powi(2) * surface * s.powi(n)
    });
    let ball = unit_ball_volume(c.n) * c.eps.powi(n);
    Ok(CorrectorNorms { l2_sq: domain_area - ball + shell_l2, grad_l2_sq: grad })
}
