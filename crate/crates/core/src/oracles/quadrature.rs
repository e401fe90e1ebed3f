//! Gauss–Legendre rules and tensor-product grids on boxes.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Values `P_0(t), ..., P_n(t)` of the Legendre polynomials.
pub fn legendre_values(n: usize, t: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if n == 0 {
        return;
    }
    out.push(t);
    for j in 2..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0) * t * out[j - 1] - (jf - 1.0) * out[j - 2]) / jf;
        out.push(next);
    }
}

/// Tensor-product quadrature on a box `[lo, hi]^d`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    dim: usize,
    points_per_axis: usize,
    lower: f64,
    upper: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Single Gauss–Legendre rule per axis, mapped to `[0,1]^d`.
    pub fn gauss_legendre(dim: usize, points_per_axis: usize) -> Self {
        Self::on_box(dim, points_per_axis, 0.0, 1.0)
    }

    pub fn on_box(dim: usize, points_per_axis: usize, lower: f64, upper: f64) -> Self {
        let (t, w) = gauss_legendre(points_per_axis);
        let half = 0.5 * (upper - lower);
        let nodes: Vec<f64> = t.iter().map(|t| lower + half * (t + 1.0)).collect();
        let weights: Vec<f64> = w.iter().map(|w| w * half).collect();
        Self::tensor(dim, lower, upper, &nodes, &weights)
    }

    /// `panels` equal sub-intervals per axis with an `order`-point rule on each.
    pub fn composite(dim: usize, panels: usize, order: usize, lower: f64, upper: f64) -> Self {
        let (t, w) = gauss_legendre(order);
        let h = (upper - lower) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lower + p as f64 * h;
            for (ti, wi) in t.iter().zip(&w) {
                nodes.push(a + 0.5 * h * (ti + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Self::tensor(dim, lower, upper, &nodes, &weights)
    }

    fn tensor(dim: usize, lower: f64, upper: f64, nodes: &[f64], weights: &[f64]) -> Self {
        let n = nodes.len();
        let total = n.pow(dim as u32);
        let mut points = Vec::with_capacity(total * dim);
        let mut ws = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            for &i in &idx {
                points.push(nodes[i]);
                w *= weights[i];
            }
            ws.push(w);
            for axis in (0..dim).rev() {
                idx[axis] += 1;
                if idx[axis] < n {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Self {
            dim,
            points_per_axis: n,
            lower,
            upper,
            points,
            weights: ws,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}
