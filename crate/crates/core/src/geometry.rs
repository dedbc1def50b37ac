//! Axisymmetric surfaces described by their width profile.
//!
//! The metric is `dx¹⊗dx¹ + n(x¹)² dx²⊗dx²`; the round sphere is the special
//! case `n = sin θ`. Everything the flow solver needs from the surface is the
//! width `n`, its logarithmic derivative `n′/n` (which replaces `cot θ` in the
//! reduced equation), and the Gaussian curvature `K = −n″/n`.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

/// Samples per table interval used to confirm the interpolant stays positive.
const TABLE_POSITIVITY_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `n = sin x`.
    Sphere,
    /// `n = a + b x`.
    Linear { a: f64, b: f64 },
    /// `n = a cosh(b x)`.
    CoshLike { a: f64, b: f64 },
    /// Monotone cubic interpolant through `(x, n)` samples.
    Tabulated(Table),
}

/// Width profile restricted to a closed coordinate interval.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricProfile {
    kind: ProfileKind,
    lo: f64,
    hi: f64,
}

impl MetricProfile {
    pub fn sphere(lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        if lo <= 0.0 || hi >= PI {
            return Err(Error::InvalidProfile(format!(
                "sphere domain must lie inside (0, π), got [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            kind: ProfileKind::Sphere,
            lo,
            hi,
        })
    }

    pub fn linear(a: f64, b: f64, lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        check_finite(&[a, b])?;
        // affine, so positivity at both ends suffices
        if a + b * lo <= 0.0 || a + b * hi <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "linear width {a} + {b}·x is not positive on [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            kind: ProfileKind::Linear { a, b },
            lo,
            hi,
        })
    }

    pub fn cosh_like(a: f64, b: f64, lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        check_finite(&[a, b])?;
        if a <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "cosh-like amplitude must be positive, got {a}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::CoshLike { a, b },
            lo,
            hi,
        })
    }

    /// Tabulated profile over the full sample range.
    pub fn tabulated(table: Table) -> Self {
        let (lo, hi) = table.range();
        Self {
            kind: ProfileKind::Tabulated(table),
            lo,
            hi,
        }
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// Width `n(x)`.
    pub fn width(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.eval(x).0)
    }

    /// First derivative `n′(x)`.
    pub fn width_derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.eval(x).1)
    }

    /// Second derivative `n″(x)`.
    pub fn width_second_derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.eval(x).2)
    }

    /// `n′(x)/n(x)`; `cot x` on the sphere.
    pub fn width_log_derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        if let ProfileKind::Sphere = self.kind {
            return Ok(x.cos() / x.sin());
        }
        let (n, dn, _) = self.eval(x);
        Ok(dn / n)
    }

    /// Gaussian curvature `K = −n″/n`.
    pub fn gauss_curvature(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.kind {
            ProfileKind::Sphere => 1.0,
            ProfileKind::Linear { .. } => 0.0,
            ProfileKind::CoshLike { b, .. } => -b * b,
            ProfileKind::Tabulated(_) => {
                let (n, _, d2n) = self.eval(x);
                -d2n / n
            }
        })
    }

    /// `(n, n′, n″)` at `x`, assuming `x` is in the domain.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        match &self.kind {
            ProfileKind::Sphere => {
                let (s, c) = x.sin_cos();
                (s, c, -s)
            }
            ProfileKind::Linear { a, b } => (a + b * x, *b, 0.0),
            ProfileKind::CoshLike { a, b } => {
                let (ch, sh) = ((b * x).cosh(), (b * x).sinh());
                (a * ch, a * b * sh, a * b * b * ch)
            }
            ProfileKind::Tabulated(t) => t.eval(x),
        }
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidProfile(format!(
            "domain must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidProfile("non-finite profile parameter".into()))
    }
}

/// Sampled width with a shape-preserving (Fritsch–Carlson) cubic interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    xs: Vec<f64>,
    ns: Vec<f64>,
    slopes: Vec<f64>,
}

impl Table {
    pub fn new(xs: Vec<f64>, ns: Vec<f64>) -> Result<Self> {
        if xs.len() != ns.len() {
            return Err(Error::InvalidProfile(format!(
                "{} coordinates but {} widths",
                xs.len(),
                ns.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidProfile(
                "a width table needs at least two rows".into(),
            ));
        }
        check_finite(&xs)?;
        check_finite(&ns)?;
        if let Some(w) = xs.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(format!(
                "coordinates must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some((x, n)) = xs.iter().zip(&ns).find(|(_, n)| **n <= 0.0) {
            return Err(Error::InvalidProfile(format!(
                "non-positive width {n} at x = {x}"
            )));
        }
        let slopes = pchip_slopes(&xs, &ns);
        let table = Self { xs, ns, slopes };
        table.check_positive()?;
        Ok(table)
    }

    /// Parses two whitespace- or comma-separated columns `x n`; lines starting
    /// with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut ns = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(Error::InvalidProfile(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidProfile(format!("line {}: bad number {s:?}", lineno + 1))
                })
            };
            xs.push(parse(fields[0])?);
            ns.push(parse(fields[1])?);
        }
        Self::new(xs, ns)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidProfile(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn check_positive(&self) -> Result<()> {
        for k in 0..self.xs.len() - 1 {
            let (x0, x1) = (self.xs[k], self.xs[k + 1]);
            for j in 1..TABLE_POSITIVITY_SAMPLES {
                let x = x0 + (x1 - x0) * j as f64 / TABLE_POSITIVITY_SAMPLES as f64;
                let n = self.eval(x).0;
                if n <= 0.0 {
                    return Err(Error::InvalidProfile(format!(
                        "interpolated width {n} is not positive at x = {x}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let k = self
            .xs
            .partition_point(|&xi| xi <= x)
            .saturating_sub(1)
            .min(self.xs.len() - 2);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (y0, y1) = (self.ns[k], self.ns[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let n = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let dn = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        let d2n = ((12.0 * t - 6.0) * y0
            + (6.0 * t - 4.0) * m0
            + (-12.0 * t + 6.0) * y1
            + (6.0 * t - 2.0) * m1)
            / (h * h);
        (n, dn, d2n)
    }
}

fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = ys
        .windows(2)
        .zip(&h)
        .map(|(w, hk)| (w[1] - w[0]) / hk)
        .collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m[0] = pchip_end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = pchip_end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn pchip_end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
