//! Tabulated functions on a strictly increasing node set, with cubic-spline
//! or linear interpolation. The CLI ingests these from two-column CSV.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Cubic,
    Linear,
}

/// A function known at finitely many nodes. Evaluates to 0 outside the node
/// span, which the transform integrals treat as the function's support.
#[derive(Debug, Clone)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
    /// second derivatives at the nodes (natural cubic spline); empty for linear
    second_derivs: Vec<f64>,
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Parse(format!(
                "node/value length mismatch: {} vs {}",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.len() < 2 {
            return Err(Error::Parse("need at least two nodes".into()));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Parse(format!(
                    "nodes must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if nodes.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Parse("nodes and values must be finite".into()));
        }
        let second_derivs = match interpolation {
            Interpolation::Cubic => natural_spline_second_derivs(&nodes, &values),
            Interpolation::Linear => Vec::new(),
        };
        Ok(GridFunction {
            nodes,
            values,
            interpolation,
            second_derivs,
        })
    }

    /// Samples `f` on a geometric grid over [a, b] (a > 0).
    pub fn sample_geometric(
        f: impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        n: usize,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if !(a > 0.0 && b > a && n >= 2) {
            return Err(Error::domain("sample_geometric requires 0 < a < b, n >= 2"));
        }
        let ratio = (b / a).ln() / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| a * (ratio * i as f64).exp()).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        GridFunction::new(nodes, values, interpolation)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x < self.nodes[0] || x > self.nodes[n - 1] {
            return 0.0;
        }
        let idx = match self
            .nodes
            .binary_search_by(|p| p.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.values[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (x0, x1) = (self.nodes[idx], self.nodes[idx + 1]);
        let (y0, y1) = (self.values[idx], self.values[idx + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        match self.interpolation {
            Interpolation::Linear => y0 + t * (y1 - y0),
            Interpolation::Cubic => {
                let (m0, m1) = (self.second_derivs[idx], self.second_derivs[idx + 1]);
                let a = 1.0 - t;
                a * y0 + t * y1
                    + h * h / 6.0 * ((a * a * a - a) * m0 + (t * t * t - t) * m1)
            }
        }
    }

    /// Parses a two-column CSV (node, value); a non-numeric first row is
    /// treated as a header and skipped.
    pub fn from_csv_str(text: &str, interpolation: Interpolation) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = (cols.next(), cols.next());
            match (a.map(str::parse::<f64>), b.map(str::parse::<f64>)) {
                (Some(Ok(x)), Some(Ok(y))) => {
                    nodes.push(x);
                    values.push(y);
                }
                _ if lineno == 0 => continue, // header row
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected two numeric columns, got {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        GridFunction::new(nodes, values, interpolation)
    }

    pub fn from_csv_path(path: &std::path::Path, interpolation: Interpolation) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text, interpolation)
    }
}

fn natural_spline_second_derivs(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let mut u = vec![0.0; n - 1];
    for i in 1..n - 1 {
        let sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        let p = sig * m[i - 1] + 2.0;
        m[i] = (sig - 1.0) / p;
        let d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
    }
    for i in (0..n - 1).rev() {
        m[i] = m[i] * m[i + 1] + u[i];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_reproduces_smooth_function() {
        let g = GridFunction::sample_geometric(|x| x * (-x).exp(), 0.01, 20.0, 600, Interpolation::Cubic)
            .unwrap();
        for &x in &[0.5, 1.0, 2.7, 8.0] {
            let exact = x * (-x as f64).exp();
            assert!((g.eval(x) - exact).abs() < 1e-8, "at {x}");
        }
        assert_eq!(g.eval(25.0), 0.0);
        assert_eq!(g.eval(0.001), 0.0);
    }

    #[test]
    fn linear_interpolation_exact_on_lines() {
        let g = GridFunction::new(
            vec![0.0, 1.0, 2.0],
            vec![1.0, 3.0, 5.0],
            Interpolation::Linear,
        )
        .unwrap();
        assert!((g.eval(0.5) - 2.0).abs() < 1e-15);
        assert!((g.eval(1.25) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn csv_roundtrip_with_and_without_header() {
        let g = GridFunction::from_csv_str("x,f\n1.0,2.0\n2.0,3.0\n", Interpolation::Linear).unwrap();
        assert_eq!(g.nodes(), &[1.0, 2.0]);
        let g2 = GridFunction::from_csv_str("1.0, 2.0\n2.0, 3.0", Interpolation::Linear).unwrap();
        assert_eq!(g2.values(), &[2.0, 3.0]);
        assert!(GridFunction::from_csv_str("1.0,2.0\nbroken,row\n", Interpolation::Linear).is_err());
    }

    #[test]
    fn rejects_unsorted_nodes() {
        assert!(GridFunction::new(
            vec![0.0, 2.0, 1.0],
            vec![0.0, 0.0, 0.0],
            Interpolation::Linear
        )
        .is_err());
    }
}
