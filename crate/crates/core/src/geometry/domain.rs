use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::periodic_trapezoid;
use crate::{Error, Result};

/// Number of angles used to check positivity and to bracket the minimum radius.
const SAMPLE_ANGLES: usize = 4096;
/// Samples used by the periodic trapezoid rule for area and perimeter.
const BOUNDARY_QUADRATURE_SAMPLES: usize = 8192;

/// Outer boundary of a domain that is star-shaped with respect to the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterBoundary {
    /// Disk of the given radius.
    Disk(f64),
    /// Axis-aligned ellipse with semi-axes `a` (along x) and `b` (along y).
    Ellipse { a: f64, b: f64 },
    /// `ρ(θ) = c0 + Σ_k cos[k-1]·cos(kθ) + sin[k-1]·sin(kθ)`.
    Star {
        c0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl OuterBoundary {
    pub fn radius(&self, theta: f64) -> f64 {
        match self {
            Self::Disk(r) => *r,
            Self::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                a * b / ((b * c).powi(2) + (a * s).powi(2)).sqrt()
            }
            Self::Star { c0, cos, sin } => {
                let mut rho = *c0;
                for (k, ak) in cos.iter().enumerate() {
                    rho += ak * ((k + 1) as f64 * theta).cos();
                }
                for (k, bk) in sin.iter().enumerate() {
                    rho += bk * ((k + 1) as f64 * theta).sin();
                }
                rho
            }
        }
    }

    /// dρ/dθ.
    pub fn radius_derivative(&self, theta: f64) -> f64 {
        match self {
            Self::Disk(_) => 0.0,
            Self::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                let q = (b * c).powi(2) + (a * s).powi(2);
                -a * b * (a * a - b * b) * s * c / q.powf(1.5)
            }
            Self::Star { cos, sin, .. } => {
                let mut d = 0.0;
                for (k, ak) in cos.iter().enumerate() {
                    let m = (k + 1) as f64;
                    d -= m * ak * (m * theta).sin();
                }
                for (k, bk) in sin.iter().enumerate() {
                    let m = (k + 1) as f64;
                    d += m * bk * (m * theta).cos();
                }
                d
            }
        }
    }

    fn parameters_finite(&self) -> bool {
        match self {
            Self::Disk(r) => r.is_finite(),
            Self::Ellipse { a, b } => a.is_finite() && b.is_finite(),
            Self::Star { c0, cos, sin } => {
                c0.is_finite() && cos.iter().chain(sin).all(|v| v.is_finite())
            }
        }
    }

    /// Same shape dilated by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        match self {
            Self::Disk(r) => Self::Disk(r * t),
            Self::Ellipse { a, b } => Self::Ellipse { a: a * t, b: b * t },
            Self::Star { c0, cos, sin } => Self::Star {
                c0: c0 * t,
                cos: cos.iter().map(|v| v * t).collect(),
                sin: sin.iter().map(|v| v * t).collect(),
            },
        }
    }
}

/// Perforated domain `Ω_r = Ω₀ \ B̄_r` with the hole centered at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub outer: OuterBoundary,
    #[serde(default)]
    pub hole_radius: f64,
}

impl DomainSpec {
    pub fn new(outer: OuterBoundary, hole_radius: f64) -> Result<Self> {
        let spec = Self { outer, hole_radius };
        spec.validate()?;
        Ok(spec)
    }

    pub fn disk(radius: f64, hole_radius: f64) -> Result<Self> {
        Self::new(OuterBoundary::Disk(radius), hole_radius)
    }

    pub fn ellipse(a: f64, b: f64, hole_radius: f64) -> Result<Self> {
        Self::new(OuterBoundary::Ellipse { a, b }, hole_radius)
    }

    pub fn with_hole(&self, hole_radius: f64) -> Result<Self> {
        Self::new(self.outer.clone(), hole_radius)
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.outer.scaled(t), self.hole_radius * t)
    }

    pub fn radius(&self, theta: f64) -> f64 {
        self.outer.radius(theta)
    }

    pub fn radius_derivative(&self, theta: f64) -> f64 {
        self.outer.radius_derivative(theta)
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.outer, OuterBoundary::Disk(_))
    }

    /// Checks positivity of ρ and strict containment of the closed hole.
    pub fn validate(&self) -> Result<()> {
        if !self.outer.parameters_finite() || !self.hole_radius.is_finite() {
            return Err(Error::InvalidSpec("non-finite parameter".into()));
        }
        if self.hole_radius < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "hole radius {} is negative",
                self.hole_radius
            )));
        }
        let (theta, rho_min) = self.sampled_minimum();
        if rho_min <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "boundary radius {rho_min} is not positive at angle {theta}"
            )));
        }
        let rho_min = self.min_boundary_radius();
        if self.hole_radius >= rho_min * (1.0 - 1e-9) {
            return Err(Error::InvalidSpec(format!(
                "hole radius {} does not fit inside min boundary radius {rho_min}",
                self.hole_radius
            )));
        }
        Ok(())
    }

    fn sampled_minimum(&self) -> (f64, f64) {
        let h = 2.0 * PI / SAMPLE_ANGLES as f64;
        (0..SAMPLE_ANGLES)
            .map(|j| {
                let t = h * j as f64;
                (t, self.radius(t))
            })
            .fold((0.0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc })
    }

    /// Distance from the origin to `∂Ω₀`: dense sampling then golden-section refinement.
    pub fn min_boundary_radius(&self) -> f64 {
        if let OuterBoundary::Disk(r) = self.outer {
            return r;
        }
        let h = 2.0 * PI / SAMPLE_ANGLES as f64;
        let (t0, _) = self.sampled_minimum();
        let (_, v) = golden_section_min(|t| self.radius(t), t0 - h, t0 + h, 1e-12);
        v.min(self.radius(t0))
    }

    pub fn max_boundary_radius(&self) -> f64 {
        if let OuterBoundary::Disk(r) = self.outer {
            return r;
        }
        let h = 2.0 * PI / SAMPLE_ANGLES as f64;
        let (t0, v0) = (0..SAMPLE_ANGLES)
            .map(|j| {
                let t = h * j as f64;
                (t, self.radius(t))
            })
            .fold((0.0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        let (_, v) = golden_section_min(|t| -self.radius(t), t0 - h, t0 + h, 1e-12);
        (-v).max(v0)
    }

    /// `|Ω₀| = ½∮ρ²dθ`; the hole is not subtracted.
    pub fn outer_area(&self) -> f64 {
        match self.outer {
            OuterBoundary::Disk(r) => PI * r * r,
            OuterBoundary::Ellipse { a, b } => PI * a * b,
            OuterBoundary::Star { .. } => {
                0.5 * periodic_trapezoid(BOUNDARY_QUADRATURE_SAMPLES, |t| self.radius(t).powi(2))
            }
        }
    }

    /// `P(Ω₀) = ∮√(ρ² + ρ′²)dθ`.
    pub fn outer_perimeter(&self) -> f64 {
        match self.outer {
            OuterBoundary::Disk(r) => 2.0 * PI * r,
            _ => periodic_trapezoid(BOUNDARY_QUADRATURE_SAMPLES, |t| {
                self.radius(t).hypot(self.radius_derivative(t))
            }),
        }
    }

    /// `(R_M, R_P)`: radii of the disks with the same area and the same perimeter as Ω₀.
    pub fn equivalent_radii(&self) -> (f64, f64) {
        (
            measure_equivalent_radius(self.outer_area(), 2),
            self.outer_perimeter() / (2.0 * PI),
        )
    }
}

/// Radius of the `n`-ball with the given measure, `(|E|/ω_n)^{1/n}`.
pub fn measure_equivalent_radius(measure: f64, n: u32) -> f64 {
    (measure / crate::shells::unit_ball_volume(n)).powf(1.0 / n as f64)
}

fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}
