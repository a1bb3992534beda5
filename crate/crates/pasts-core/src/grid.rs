//! Phase-space lattices, deterministic CSV emission, and midpoint quadrature.
//!
//! Two samplings of a rectangle `[re_min, re_max] × [im_min, im_max]` are
//! provided:
//!
//! * [`GridSpec::point`] — an inclusive-endpoint lattice (`n` points per
//!   axis), the thing a plotting pipeline wants;
//! * [`GridSpec::integrate`] — cell-center (midpoint-rule) quadrature over
//!   the same rectangle, the thing normalization checks want.
//!
//! Evaluation is parallelized per row but assembled in index order, so the
//! output — and any CSV written from it — is deterministic regardless of
//! scheduling. Floats are written with 17 significant digits, which
//! round-trips `f64` exactly: identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::analytics::PhasePoint;
use crate::{Error, Result};

/// Largest allowed `n_re · n_im`, keeping grid memory and runtime sane.
pub const MAX_GRID_POINTS: u64 = 10_000_000;

/// A rectangular phase-space evaluation window.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
}

impl GridSpec {
    pub fn new(
        re_min: f64,
        re_max: f64,
        n_re: usize,
        im_min: f64,
        im_max: f64,
        n_im: usize,
    ) -> Result<Self> {
        for (name, v) in [
            ("re_min", re_min),
            ("re_max", re_max),
            ("im_min", im_min),
            ("im_max", im_max),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("grid bound must be finite, got {v}"),
                });
            }
        }
        if re_min > re_max || im_min > im_max {
            return Err(Error::InvalidParameter {
                name: "grid",
                message: format!(
                    "bounds must be ordered: [{re_min}, {re_max}] x [{im_min}, {im_max}]"
                ),
            });
        }
        if n_re == 0 || n_im == 0 {
            return Err(Error::InvalidParameter {
                name: "grid",
                message: "point counts must be positive".into(),
            });
        }
        if n_re as u64 * n_im as u64 > MAX_GRID_POINTS {
            return Err(Error::InvalidParameter {
                name: "grid",
                message: format!(
                    "{n_re} x {n_im} points exceeds the {MAX_GRID_POINTS}-point cap"
                ),
            });
        }
        Ok(Self {
            re_min,
            re_max,
            n_re,
            im_min,
            im_max,
            n_im,
        })
    }

    /// Square window `[min, max]²` with `n` points per axis.
    pub fn square(min: f64, max: f64, n: usize) -> Result<Self> {
        Self::new(min, max, n, min, max, n)
    }

    /// Parses `min:max:n` (applied to both axes) or
    /// `min:max:n,min:max:n` (real axis first).
    pub fn parse(text: &str) -> Result<Self> {
        fn axis(part: &str) -> Result<(f64, f64, usize)> {
            let fields: Vec<&str> = part.split(':').collect();
            if fields.len() != 3 {
                return Err(Error::InvalidParameter {
                    name: "grid",
                    message: format!("expected min:max:n, got `{part}`"),
                });
            }
            let min = fields[0].parse::<f64>();
            let max = fields[1].parse::<f64>();
            let n = fields[2].parse::<usize>();
            match (min, max, n) {
                (Ok(min), Ok(max), Ok(n)) => Ok((min, max, n)),
                _ => Err(Error::InvalidParameter {
                    name: "grid",
                    message: format!("could not parse `{part}` as min:max:n"),
                }),
            }
        }
        let mut parts = text.split(',');
        let re = axis(parts.next().unwrap_or(""))?;
        let im = match parts.next() {
            Some(p) => axis(p)?,
            None => re,
        };
        if parts.next().is_some() {
            return Err(Error::InvalidParameter {
                name: "grid",
                message: format!("expected at most two axes in `{text}`"),
            });
        }
        GridSpec::new(re.0, re.1, re.2, im.0, im.1, im.2)
    }

    /// Lattice point at row `i` (real axis), column `j` (imaginary axis).
    /// Endpoints are included; a single-point axis sits at its lower bound.
    pub fn point(&self, i: usize, j: usize) -> PhasePoint {
        fn coord(min: f64, max: f64, n: usize, k: usize) -> f64 {
            if n == 1 {
                min
            } else {
                min + (max - min) * k as f64 / (n - 1) as f64
            }
        }
        PhasePoint::new(
            coord(self.re_min, self.re_max, self.n_re, i),
            coord(self.im_min, self.im_max, self.n_im, j),
        )
    }

    /// Evaluates `f` over the lattice in row-major order (imaginary axis
    /// varying fastest), rows in parallel, output in deterministic order.
    pub fn evaluate<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(PhasePoint) -> f64 + Sync,
    {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        (0..self.n_re)
            .into_par_iter()
            .map(|i| (0..self.n_im).map(|j| f(self.point(i, j))).collect())
            .collect_into_vec(&mut rows);
        rows.into_iter().flatten().collect()
    }

    /// Midpoint-rule integral of `f` over the rectangle: the axis is split
    /// into `n` equal cells and `f` sampled at cell centers.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(PhasePoint) -> f64 + Sync,
    {
        let w_re = (self.re_max - self.re_min) / self.n_re as f64;
        let w_im = (self.im_max - self.im_min) / self.n_im as f64;
        let row_sums: Vec<f64> = (0..self.n_re)
            .into_par_iter()
            .map(|i| {
                let x = self.re_min + (i as f64 + 0.5) * w_re;
                (0..self.n_im)
                    .map(|j| {
                        let y = self.im_min + (j as f64 + 0.5) * w_im;
                        f(PhasePoint::new(x, y))
                    })
                    .sum::<f64>()
            })
            .collect();
        // Summed in index order so the result does not depend on scheduling.
        row_sums.iter().sum::<f64>() * w_re * w_im
    }
}

/// Formats a float with 17 significant digits, which round-trips `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a Wigner lattice as CSV: a `# meta:` echo line, a `re,im,w`
/// header, then one row per lattice point, imaginary axis varying fastest.
pub fn wigner_csv(meta: &str, grid: &GridSpec, values: &[f64]) -> String {
    assert_eq!(values.len(), grid.n_re * grid.n_im, "value/lattice mismatch");
    let mut out = String::with_capacity(values.len() * 64);
    let _ = writeln!(out, "# meta: {meta}");
    out.push_str("re,im,w\n");
    for i in 0..grid.n_re {
        for j in 0..grid.n_im {
            let p = grid.point(i, j);
            let _ = writeln!(
                out,
                "{},{},{}",
                format_float(p.re),
                format_float(p.im),
                format_float(values[i * grid.n_im + j])
            );
        }
    }
    out
}

/// Renders a photon-number distribution as CSV: `# meta:` echo, `n,p`
/// header, one row per occupation number starting at 0.
pub fn pnd_csv(meta: &str, probabilities: &[f64]) -> String {
    let mut out = String::with_capacity(probabilities.len() * 32);
    let _ = writeln!(out, "# meta: {meta}");
    out.push_str("n,p\n");
    for (n, p) in probabilities.iter().enumerate() {
        let _ = writeln!(out, "{n},{}", format_float(*p));
    }
    out
}

/// Writes rendered CSV to disk, mapping failures to an I/O-classed error.
pub fn write_csv(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_range_applies_to_both_axes() {
        let g = GridSpec::parse("-3:3:61").unwrap();
        assert_eq!(g.re_min, -3.0);
        assert_eq!(g.im_max, 3.0);
        assert_eq!((g.n_re, g.n_im), (61, 61));
    }

    #[test]
    fn parse_two_ranges() {
        let g = GridSpec::parse("-3:3:61,-1:1:21").unwrap();
        assert_eq!((g.n_re, g.n_im), (61, 21));
        assert_eq!(g.im_min, -1.0);
        assert_eq!(g.im_max, 1.0);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for bad in ["", "1:2", "1:2:3:4", "a:2:3", "1:2:3,4:5:6,7:8:9", "1:2:0"] {
            assert!(GridSpec::parse(bad).is_err(), "accepted `{bad}`");
        }
        assert!(GridSpec::new(0.0, f64::NAN, 5, 0.0, 1.0, 5).is_err());
        assert!(GridSpec::new(1.0, 0.0, 5, 0.0, 1.0, 5).is_err());
        assert!(GridSpec::square(-1.0, 1.0, 4000).is_err(), "cap not enforced");
    }

    #[test]
    fn lattice_includes_endpoints() {
        let g = GridSpec::square(-2.0, 2.0, 5).unwrap();
        assert_eq!(g.point(0, 0).re, -2.0);
        assert_eq!(g.point(4, 4).re, 2.0);
        assert_eq!(g.point(2, 2).re, 0.0);
        assert_eq!(g.point(1, 3).im, 1.0);
    }

    #[test]
    fn evaluate_order_is_row_major_im_fastest() {
        let g = GridSpec::new(0.0, 1.0, 2, 0.0, 1.0, 3).unwrap();
        let vals = g.evaluate(|p| 10.0 * p.re + p.im);
        assert_eq!(vals, vec![0.0, 0.5, 1.0, 10.0, 10.5, 11.0]);
    }

    #[test]
    fn midpoint_rule_integrates_a_gaussian() {
        // ∬ e^{−x²−y²} = π over the plane; [−6,6]² truncation error ~ e^{−36}.
        let g = GridSpec::square(-6.0, 6.0, 241).unwrap();
        let integral = g.integrate(|p| (-p.re * p.re - p.im * p.im).exp());
        assert!(
            (integral - std::f64::consts::PI).abs() < 1e-6,
            "got {integral}"
        );
    }

    #[test]
    fn csv_rendering_is_deterministic_and_ordered() {
        let g = GridSpec::new(0.0, 1.0, 2, 0.0, 1.0, 2).unwrap();
        let vals = g.evaluate(|p| p.re + 2.0 * p.im);
        let a = wigner_csv("k=v", &g, &vals);
        let b = wigner_csv("k=v", &g, &vals);
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], "# meta: k=v");
        assert_eq!(lines[1], "re,im,w");
        // row-major, im fastest: (0,0), (0,1), (1,0), (1,1)
        assert!(lines[2].starts_with("0.0000000000000000e0,0.0000000000000000e0"));
        assert!(lines[3].starts_with("0.0000000000000000e0,1.0000000000000000e0"));
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn pnd_csv_shape() {
        let text = pnd_csv("m=1", &[0.5, 0.25, 0.25]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "n,p");
        assert!(lines[2].starts_with("0,5.0000000000000000e-1"));
        assert!(lines[4].starts_with("2,2.5000000000000000e-1"));
    }

    #[test]
    fn float_formatting_round_trips() {
        for &v in &[0.1, -1.0 / 3.0, 2.278198e-17, 1.2345678901234567e300, 0.0] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "lost bits in {s}");
        }
    }
}
